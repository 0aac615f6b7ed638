//! Growth functions `F : ℕ → ℕ` selectable by name.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::registry::Registry;

pub trait GrowthFunction: Send + Sync {
    /// `None` on overflow.
    fn eval(&self, x: u64) -> Option<u64>;
    /// Spec string that rebuilds this function through [`growth_registry`].
    fn spec(&self) -> String;
}

struct Constant(u64);
struct Polynomial {
    coefficient: u64,
    exponent: u32,
}
struct Exponential(u64);
struct Tower(u32);
struct Table(Vec<(u64, u64)>);

impl GrowthFunction for Constant {
    fn eval(&self, _: u64) -> Option<u64> {
        Some(self.0)
    }
    fn spec(&self) -> String {
        format!("const:{}", self.0)
    }
}

impl GrowthFunction for Polynomial {
    fn eval(&self, x: u64) -> Option<u64> {
        x.checked_pow(self.exponent)?.checked_mul(self.coefficient)
    }
    fn spec(&self) -> String {
        format!("poly:{},{}", self.coefficient, self.exponent)
    }
}

impl GrowthFunction for Exponential {
    fn eval(&self, x: u64) -> Option<u64> {
        self.0.checked_pow(u32::try_from(x).ok()?)
    }
    fn spec(&self) -> String {
        format!("exp:{}", self.0)
    }
}

impl GrowthFunction for Tower {
    // 2^2^...^x with `height` twos
    fn eval(&self, x: u64) -> Option<u64> {
        let mut v = x;
        for _ in 0..self.0 {
            v = 2u64.checked_pow(u32::try_from(v).ok()?)?;
        }
        Some(v)
    }
    fn spec(&self) -> String {
        format!("tower:{}", self.0)
    }
}

impl GrowthFunction for Table {
    // step function through the breakpoints; 0 before the first one
    fn eval(&self, x: u64) -> Option<u64> {
        Some(self.0.iter().take_while(|(bx, _)| *bx <= x).last().map_or(0, |&(_, y)| y))
    }
    fn spec(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|(x, y)| format!("{x}={y}")).collect();
        format!("table:{}", parts.join(","))
    }
}

fn int_arg<T: std::str::FromStr>(s: &str, default: Option<T>) -> Result<T> {
    if s.is_empty() {
        return default.ok_or_else(|| Error::InvalidArgument("missing argument".into()));
    }
    s.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad integer `{s}`")))
}

/// Parses `x=y` breakpoints separated by commas or newlines (or `x y` per line).
pub fn parse_table(text: &str) -> Result<Vec<(u64, u64)>> {
    let mut points = Vec::new();
    for item in text.split([',', '\n']).map(|t| t.split('#').next().unwrap_or("").trim()) {
        if item.is_empty() {
            continue;
        }
        let (x, y) = item
            .split_once('=')
            .or_else(|| item.split_once(char::is_whitespace))
            .ok_or_else(|| Error::Parse(format!("bad table entry `{item}`")))?;
        points.push((int_arg(x, None)?, int_arg(y, None)?));
    }
    points.sort();
    if points.windows(2).any(|w| w[1].1 < w[0].1) {
        return Err(Error::InvalidArgument("table values must be nondecreasing".into()));
    }
    Ok(points)
}

pub fn growth_registry() -> &'static Registry<dyn GrowthFunction> {
    static REG: OnceLock<Registry<dyn GrowthFunction>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut reg: Registry<dyn GrowthFunction> = Registry::new("growth function");
        reg.register("const", "F(x) = c (default 1)", |a| Ok(Box::new(Constant(int_arg(a, Some(1))?))));
        reg.register("poly", "F(x) = c * x^k, args `c,k`", |a| {
            let (c, k) = a.split_once(',').unwrap_or((a, "1"));
            Ok(Box::new(Polynomial { coefficient: int_arg(c, Some(1))?, exponent: int_arg(k, Some(1))? }))
        });
        reg.register("exp", "F(x) = b^x (default b = 2)", |a| Ok(Box::new(Exponential(int_arg(a, Some(2))?))));
        reg.register("tower", "F(x) = 2^2^..^x with h twos (default 1)", |a| Ok(Box::new(Tower(int_arg(a, Some(1))?))));
        reg.register("table", "step function through `x=y` breakpoints", |a| Ok(Box::new(Table(parse_table(a)?))));
        reg
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        let reg = growth_registry();
        assert_eq!(reg.build("const").unwrap().eval(1000), Some(1));
        assert_eq!(reg.build("const:7").unwrap().eval(3), Some(7));
        assert_eq!(reg.build("poly:3,2").unwrap().eval(10), Some(300));
        assert_eq!(reg.build("exp").unwrap().eval(10), Some(1024));
        assert_eq!(reg.build("exp:2").unwrap().eval(64), None);
        assert_eq!(reg.build("tower:2").unwrap().eval(3), Some(256));
        assert_eq!(reg.build("tower:2").unwrap().eval(7), None);
        let t = reg.build("table:1=5,100=7").unwrap();
        assert_eq!((t.eval(0), t.eval(50), t.eval(500)), (Some(0), Some(5), Some(7)));
    }

    #[test]
    fn spec_strings_rebuild() {
        for s in ["const:1", "poly:3,2", "exp:3", "tower:1", "table:1=5,100=7"] {
            assert_eq!(growth_registry().build(s).unwrap().spec(), s);
        }
    }

    #[test]
    fn table_rejects_decreasing() {
        assert!(parse_table("1=5,2=3").is_err());
        assert_eq!(parse_table("1 5\n10 9\n").unwrap(), vec![(1, 5), (10, 9)]);
    }
}
