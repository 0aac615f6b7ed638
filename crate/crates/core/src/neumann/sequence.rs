use std::path::Path;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::seqgen::{self, GrowthTarget, DEFAULT_C};

#[derive(Clone, Debug)]
enum Source {
    /// Finite table. `monotone_tail` declares that `r` keeps increasing and
    /// `d - 2r` never decreases beyond the last listed index.
    Explicit {
        monotone_tail: bool,
    },
    Generated(GrowthTarget),
}

/// The data `(d(n), r(n))`, `n >= 1`, defining a generalized Neumann group.
///
/// Generated specs extend themselves on demand; explicit specs stop at their
/// last listed term.
#[derive(Debug)]
pub struct SequenceSpec {
    source: Source,
    terms: RwLock<Terms>,
}

#[derive(Clone, Debug, Default)]
struct Terms {
    d: Vec<u64>,
    r: Vec<u64>,
}

impl Clone for SequenceSpec {
    fn clone(&self) -> Self {
        Self { source: self.source.clone(), terms: RwLock::new(self.read().clone()) }
    }
}

impl SequenceSpec {
    pub fn explicit(d: Vec<u64>, r: Vec<u64>, monotone_tail: bool) -> Result<Self> {
        if d.len() != r.len() {
            return Err(Error::InvalidArgument(format!("d has {} terms but r has {}", d.len(), r.len())));
        }
        if d.is_empty() {
            return Err(Error::InvalidArgument("sequence has no terms".into()));
        }
        if let Some(i) = d.iter().zip(&r).position(|(&dn, &rn)| rn == 0 || dn < 2 * rn + 1) {
            return Err(Error::InvalidArgument(format!("term {} must satisfy r >= 1 and d >= 2r + 1", i + 1)));
        }
        Ok(Self { source: Source::Explicit { monotone_tail }, terms: RwLock::new(Terms { d, r }) })
    }

    pub fn generated(target: GrowthTarget) -> Self {
        Self { source: Source::Generated(target), terms: RwLock::new(Terms::default()) }
    }

    fn read(&self) -> std::sync::RwLockReadGuard<'_, Terms> {
        self.terms.read().unwrap_or_else(|e| e.into_inner())
    }

    pub fn target(&self) -> Option<&GrowthTarget> {
        match &self.source {
            Source::Generated(t) => Some(t),
            Source::Explicit { .. } => None,
        }
    }

    pub fn is_generated(&self) -> bool {
        self.target().is_some()
    }

    /// Number of terms currently materialized.
    pub fn horizon(&self) -> usize {
        self.read().d.len()
    }

    /// Materializes terms `1..=count`.
    pub fn extend_to(&self, count: usize) -> Result<()> {
        if self.horizon() >= count {
            return Ok(());
        }
        let Source::Generated(target) = &self.source else {
            return Err(Error::BeyondHorizon { index: count, horizon: self.horizon() });
        };
        let mut terms = self.terms.write().unwrap_or_else(|e| e.into_inner());
        while terms.d.len() < count {
            let (d, r) = seqgen::next_term(target, &terms.d, &terms.r)?;
            terms.d.push(d);
            terms.r.push(r);
        }
        Ok(())
    }

    /// `(d(n), r(n))` for 1-based `n`.
    pub fn term(&self, n: usize) -> Result<(u64, u64)> {
        if n == 0 {
            return Err(Error::InvalidArgument("sequence indices start at 1".into()));
        }
        self.extend_to(n)?;
        let t = self.read();
        Ok((t.d[n - 1], t.r[n - 1]))
    }

    pub fn d(&self, n: usize) -> Result<u64> {
        Ok(self.term(n)?.0)
    }

    pub fn r(&self, n: usize) -> Result<u64> {
        Ok(self.term(n)?.1)
    }

    pub fn terms(&self, count: usize) -> Result<(Vec<u64>, Vec<u64>)> {
        self.extend_to(count)?;
        let t = self.read();
        Ok((t.d[..count].to_vec(), t.r[..count].to_vec()))
    }

    /// Whether index `n` satisfies `r(n) >= 2l+1` and `d(n) - 2r(n) >= 2l+1`.
    pub fn qualifies(&self, n: usize, l: u64) -> Result<bool> {
        let (d, r) = self.term(n)?;
        Ok(qualifies(d, r, l))
    }

    /// Least `N` such that every `n >= N` satisfies `r(n), d(n) - 2r(n) >= 2l+1`.
    pub fn threshold(&self, l: u64) -> Result<usize> {
        if l == 0 {
            // standing assumptions already give r >= 1 and d - 2r >= 1
            return Ok(1);
        }
        let scan_from = match &self.source {
            Source::Explicit { monotone_tail: false } => {
                return Err(Error::HorizonInsufficient { l, horizon: self.horizon() })
            }
            Source::Explicit { monotone_tail: true } => {
                let h = self.horizon();
                if !self.qualifies(h, l)? {
                    return Err(Error::HorizonInsufficient { l, horizon: h });
                }
                h
            }
            Source::Generated(_) => {
                // generated terms satisfy d - 2r > r >= 9n^2 + 1
                let mut n = 1usize;
                while 9 * (n as u64) * (n as u64) + 1 < 2 * l + 1 {
                    n += 1;
                }
                if n == 1 {
                    return Ok(1);
                }
                self.extend_to(n - 1)?;
                n
            }
        };
        let mut n0 = scan_from;
        while n0 > 1 && self.qualifies(n0 - 1, l)? {
            n0 -= 1;
        }
        Ok(n0)
    }

    /// `(α_n, β_n) = ((1 2 ... d(n)), (1, 1+r(n), 1+2r(n)))`.
    pub fn generator_images(&self, n: usize) -> Result<(Permutation, Permutation)> {
        let (d, r) = self.term(n)?;
        generator_pair(d, r)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(text)?;
        match file {
            SpecFile::Explicit { d, r, monotone_tail } => Self::explicit(d, r, monotone_tail),
            SpecFile::Generated { f, c, n, d, r } => {
                let target = GrowthTarget::from_spec(&f, c)?;
                let spec = Self::generated(target);
                match (d, r) {
                    (Some(d), Some(r)) if d.len() == r.len() => {
                        *spec.terms.write().unwrap_or_else(|e| e.into_inner()) = Terms { d, r };
                    }
                    (None, None) => {}
                    _ => return Err(Error::Parse("generated spec needs both d and r, or neither".into())),
                }
                spec.extend_to(n)?;
                Ok(spec)
            }
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        let t = self.read().clone();
        let file = match &self.source {
            Source::Explicit { monotone_tail } => SpecFile::Explicit { d: t.d, r: t.r, monotone_tail: *monotone_tail },
            Source::Generated(target) => {
                SpecFile::Generated { f: target.f_spec(), c: target.c(), n: t.d.len(), d: Some(t.d), r: Some(t.r) }
            }
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }
}

pub(crate) fn qualifies(d: u64, r: u64, l: u64) -> bool {
    r > 2 * l && d >= 2 * r && d - 2 * r > 2 * l
}

pub(crate) fn generator_pair(d: u64, r: u64) -> Result<(Permutation, Permutation)> {
    let (d, r) = (d as usize, r as usize);
    if d < 2 * r + 1 || r == 0 {
        return Err(Error::InvalidArgument(format!("need r >= 1 and d >= 2r + 1, got d = {d}, r = {r}")));
    }
    let alpha = Permutation::long_cycle(d, d);
    let beta = Permutation::from_cycles(d, &[vec![1, 1 + r, 1 + 2 * r]])?;
    Ok((alpha, beta))
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SpecFile {
    Explicit {
        d: Vec<u64>,
        r: Vec<u64>,
        #[serde(default)]
        monotone_tail: bool,
    },
    Generated {
        #[serde(rename = "F")]
        f: String,
        #[serde(rename = "C", default = "default_c")]
        c: u64,
        #[serde(rename = "N", default = "one")]
        n: usize,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        d: Option<Vec<u64>>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        r: Option<Vec<u64>>,
    },
}

fn default_c() -> u64 {
    DEFAULT_C
}

fn one() -> usize {
    1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> SequenceSpec {
        SequenceSpec::explicit(vec![5, 7, 13, 37], vec![1, 2, 4, 11], true).unwrap()
    }

    #[test]
    fn generator_images_small() {
        let spec = toy();
        let (a, b) = spec.generator_images(1).unwrap();
        assert_eq!(a.to_string(), "(1 2 3 4 5)");
        assert_eq!(b.to_string(), "(1 2 3)(5)");
        let (_, b) = spec.generator_images(2).unwrap();
        assert_eq!(b.to_string(), "(1 3 5)(7)");
    }

    #[test]
    fn threshold_by_direct_scan() {
        let spec = toy();
        assert_eq!(spec.threshold(0).unwrap(), 1);
        // l = 1 needs r >= 3 and d - 2r >= 3: fails at r(2) = 2, holds from n = 3
        assert_eq!(spec.threshold(1).unwrap(), 3);
        // l = 5 needs 11: n = 4 has r = 11, d - 2r = 15
        assert_eq!(spec.threshold(5).unwrap(), 4);
        assert!(matches!(spec.threshold(6), Err(Error::HorizonInsufficient { .. })));
    }

    #[test]
    fn undeclared_tail_refuses_threshold() {
        let spec = SequenceSpec::explicit(vec![5, 7, 13, 37], vec![1, 2, 4, 11], false).unwrap();
        assert!(matches!(spec.threshold(1), Err(Error::HorizonInsufficient { .. })));
    }

    #[test]
    fn generated_threshold_extends_lazily() {
        let spec = SequenceSpec::generated(GrowthTarget::from_spec("const:1", 79).unwrap());
        // r(1) = 10, d(1) = 79
        assert_eq!(spec.threshold(4).unwrap(), 1);
        assert_eq!(spec.threshold(5).unwrap(), 2);
        assert_eq!(spec.horizon(), 1);
    }

    #[test]
    fn json_round_trip() {
        let spec = toy();
        let back = SequenceSpec::from_json(&spec.to_json().unwrap()).unwrap();
        assert_eq!(back.terms(4).unwrap(), spec.terms(4).unwrap());
        let gen = SequenceSpec::from_json(r#"{"generated":{"F":"const:1","C":79,"N":3}}"#).unwrap();
        assert_eq!(gen.horizon(), 3);
        assert_eq!(gen.d(1).unwrap(), 79);
    }
}
