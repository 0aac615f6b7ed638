//! Name-keyed registries of interchangeable strategies.
//!
//! A strategy is built from a spec string `name` or `name:args`; the factory
//! receives the (possibly empty) argument part.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

type Factory<T> = Box<dyn Fn(&str) -> Result<Box<T>> + Send + Sync>;

struct Entry<T: ?Sized> {
    description: &'static str,
    factory: Factory<T>,
}

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Entry<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self { kind, entries: BTreeMap::new() }
    }

    pub fn register<F>(&mut self, name: &'static str, description: &'static str, factory: F) -> &mut Self
    where
        F: Fn(&str) -> Result<Box<T>> + Send + Sync + 'static,
    {
        self.entries.insert(name, Entry { description, factory: Box::new(factory) });
        self
    }

    pub fn build(&self, spec: &str) -> Result<Box<T>> {
        let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
        let entry = self
            .entries
            .get(name.trim())
            .ok_or_else(|| Error::UnknownStrategy { kind: self.kind, name: name.to_string() })?;
        (entry.factory)(args.trim())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn describe(&self) -> Vec<(&'static str, &'static str)> {
        self.entries.iter().map(|(n, e)| (*n, e.description)).collect()
    }
}

impl<T: ?Sized> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry").field("kind", &self.kind).field("names", &self.entries.keys()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Shape {
        fn sides(&self) -> usize;
    }
    struct Poly(usize);
    impl Shape for Poly {
        fn sides(&self) -> usize {
            self.0
        }
    }

    #[test]
    fn build_by_name_with_args() {
        let mut reg: Registry<dyn Shape> = Registry::new("shape");
        reg.register("triangle", "three sides", |_| Ok(Box::new(Poly(3))));
        reg.register("poly", "n sides", |args| {
            let n = args.parse().map_err(|_| Error::InvalidArgument(args.to_string()))?;
            Ok(Box::new(Poly(n)))
        });
        assert_eq!(reg.build("triangle").unwrap().sides(), 3);
        assert_eq!(reg.build("poly:7").unwrap().sides(), 7);
        assert!(reg.build("poly:x").is_err());
        assert!(matches!(reg.build("circle"), Err(Error::UnknownStrategy { .. })));
        assert_eq!(reg.names().collect::<Vec<_>>(), vec!["poly", "triangle"]);
    }
}
