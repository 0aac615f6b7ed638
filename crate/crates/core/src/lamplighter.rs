//! The lamplighter group `W = C₃ ≀ ℤ` and its quotients `W_m = C₃ ≀ ℤ/(2m+1)`.
//!
//! An element is a pair `(f, k)`: a finitely supported lamp configuration
//! `f : ℤ → C₃` and a shift `k`. The product is `(f, k)(g, l) = (f + g(· - k), k + l)`,
//! so with `a = (0, 1)` and `b_n = (δ_n, 0)` we get `a^n b_m a^-n = b_{m+n}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::GroupElement;
use crate::words::FreeWord;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LamplighterElement {
    // nonzero exponents only
    config: BTreeMap<i64, u8>,
    shift: i64,
}

impl LamplighterElement {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn a() -> Self {
        Self { config: BTreeMap::new(), shift: 1 }
    }

    /// The lamp generator at position `n`.
    pub fn b(n: i64) -> Self {
        Self::from_parts([(n, 1)], 0)
    }

    pub fn from_parts<I: IntoIterator<Item = (i64, u8)>>(lamps: I, shift: i64) -> Self {
        let mut config = BTreeMap::new();
        for (pos, e) in lamps {
            add_lamp(&mut config, pos, e);
        }
        Self { config, shift }
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Nonzero lamps `(position, exponent)` in ascending position.
    pub fn lamps(&self) -> impl Iterator<Item = (i64, u8)> + '_ {
        self.config.iter().map(|(&p, &e)| (p, e))
    }

    pub fn lamp(&self, pos: i64) -> u8 {
        self.config.get(&pos).copied().unwrap_or(0)
    }

    /// True iff the element lies in the base group `B(W)`.
    pub fn in_base(&self) -> bool {
        self.shift == 0
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.config.is_empty()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut config = self.config.clone();
        for (&pos, &e) in &rhs.config {
            add_lamp(&mut config, pos + self.shift, e);
        }
        Self { config, shift: self.shift + rhs.shift }
    }

    pub fn inverse(&self) -> Self {
        // (f, k)^-1 = (-f(· + k), -k)
        let config = self.config.iter().map(|(&p, &e)| (p - self.shift, (3 - e) % 3)).collect();
        Self { config, shift: -self.shift }
    }

    /// The homomorphism ρ_m onto `W_m`.
    pub fn project_finite(&self, m: usize) -> FiniteLamplighterElement {
        let mut out = FiniteLamplighterElement::identity(m);
        for (&p, &e) in &self.config {
            let i = out.index(p);
            out.config[i] = (out.config[i] + e) % 3;
        }
        out.shift = out.residue(self.shift);
        out
    }
}

fn add_lamp(config: &mut BTreeMap<i64, u8>, pos: i64, e: u8) {
    let v = (config.get(&pos).copied().unwrap_or(0) + e % 3) % 3;
    if v == 0 {
        config.remove(&pos);
    } else {
        config.insert(pos, v);
    }
}

impl GroupElement for LamplighterElement {
    fn mul(&self, rhs: &Self) -> Self {
        LamplighterElement::mul(self, rhs)
    }
    fn inverse(&self) -> Self {
        LamplighterElement::inverse(self)
    }
    fn identity_like(&self) -> Self {
        Self::identity()
    }
    fn is_identity(&self) -> bool {
        LamplighterElement::is_identity(self)
    }
}

/// Image of a word under `x ↦ a`, `y ↦ b_0`.
pub fn evaluate_word_w(w: &FreeWord) -> LamplighterElement {
    w.evaluate(&LamplighterElement::identity(), &[LamplighterElement::a(), LamplighterElement::b(0)])
}

pub fn is_identity_w(u: &LamplighterElement) -> bool {
    u.is_identity()
}

/// Written as the literal product `a^k · b_i^e · …` (ascending `i`); the identity is `e`.
/// Since `(f, k) = a^k · (f(· + k), 0)`, the printed lamp indices are positions minus `k`.
impl fmt::Display for LamplighterElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        let mut terms = Vec::new();
        if self.shift != 0 {
            terms.push(format!("a^{}", self.shift));
        }
        for (&p, &e) in &self.config {
            terms.push(format!("b_{}^{}", p - self.shift, e));
        }
        write!(f, "{}", terms.join(" · "))
    }
}

impl fmt::Debug for LamplighterElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W[{self}]")
    }
}

impl FromStr for LamplighterElement {
    type Err = Error;

    /// Parses any product of `a^k` and `b_i^e` factors separated by `·` or `*`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" {
            return Ok(Self::identity());
        }
        let bad = |t: &str| Error::Parse(format!("bad lamplighter factor `{t}`"));
        let mut acc = Self::identity();
        for term in s.split(['·', '*']).map(str::trim) {
            let factor = if let Some(k) = term.strip_prefix("a^") {
                Self { config: BTreeMap::new(), shift: k.parse().map_err(|_| bad(term))? }
            } else if let Some(rest) = term.strip_prefix("b_") {
                let (i, e) = rest.split_once('^').ok_or_else(|| bad(term))?;
                let i: i64 = i.parse().map_err(|_| bad(term))?;
                let e: i64 = e.parse().map_err(|_| bad(term))?;
                Self::from_parts([(i, e.rem_euclid(3) as u8)], 0)
            } else {
                return Err(bad(term));
            };
            acc = acc.mul(&factor);
        }
        Ok(acc)
    }
}

/// Element of `W_m`; lamps are indexed by residues `-m..=m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteLamplighterElement {
    m: usize,
    // config[i + m] is the lamp at residue i
    config: Vec<u8>,
    shift: i64,
}

impl FiniteLamplighterElement {
    pub fn identity(m: usize) -> Self {
        Self { m, config: vec![0; 2 * m + 1], shift: 0 }
    }

    pub fn a(m: usize) -> Self {
        let mut x = Self::identity(m);
        x.shift = x.residue(1);
        x
    }

    pub fn b(m: usize, i: i64) -> Self {
        let mut x = Self::identity(m);
        let idx = x.index(i);
        x.config[idx] = 1;
        x
    }

    pub fn modulus(&self) -> usize {
        self.m
    }

    fn period(&self) -> i64 {
        2 * self.m as i64 + 1
    }

    /// Representative of `i` in `-m..=m`.
    fn residue(&self, i: i64) -> i64 {
        let p = self.period();
        let r = i.rem_euclid(p);
        if r > self.m as i64 {
            r - p
        } else {
            r
        }
    }

    fn index(&self, i: i64) -> usize {
        (self.residue(i) + self.m as i64) as usize
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn lamp(&self, i: i64) -> u8 {
        self.config[self.index(i)]
    }

    pub fn in_base(&self) -> bool {
        self.shift == 0
    }

    /// `(2m+1)` lamps in `C₃` times the cyclic top group.
    pub fn group_order(m: usize) -> u128 {
        let p = 2 * m as u32 + 1;
        3u128.pow(p) * p as u128
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.m, rhs.m, "W_m modulus mismatch");
        let mut out = self.clone();
        let m = self.m as i64;
        for i in -m..=m {
            let e = rhs.config[(i + m) as usize];
            if e != 0 {
                let j = self.index(i + self.shift);
                out.config[j] = (out.config[j] + e) % 3;
            }
        }
        out.shift = self.residue(self.shift + rhs.shift);
        out
    }

    pub fn inverse(&self) -> Self {
        let mut out = Self::identity(self.m);
        let m = self.m as i64;
        for i in -m..=m {
            let e = self.config[(i + m) as usize];
            if e != 0 {
                let j = self.index(i - self.shift);
                out.config[j] = (3 - e) % 3;
            }
        }
        out.shift = self.residue(-self.shift);
        out
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.config.iter().all(|&e| e == 0)
    }
}

impl GroupElement for FiniteLamplighterElement {
    fn mul(&self, rhs: &Self) -> Self {
        FiniteLamplighterElement::mul(self, rhs)
    }
    fn inverse(&self) -> Self {
        FiniteLamplighterElement::inverse(self)
    }
    fn identity_like(&self) -> Self {
        Self::identity(self.m)
    }
    fn is_identity(&self) -> bool {
        FiniteLamplighterElement::is_identity(self)
    }
}

/// Image of a word in `W_m` under `x ↦ a_(m)`, `y ↦ b_(m),0`.
pub fn evaluate_word_wm(w: &FreeWord, m: usize) -> FiniteLamplighterElement {
    w.evaluate(
        &FiniteLamplighterElement::identity(m),
        &[FiniteLamplighterElement::a(m), FiniteLamplighterElement::b(m, 0)],
    )
}

impl fmt::Display for FiniteLamplighterElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        let m = self.m as i64;
        let mut terms = Vec::new();
        if self.shift != 0 {
            terms.push(format!("a^{}", self.shift));
        }
        for i in -m..=m {
            let e = self.config[self.index(i + self.shift)];
            if e != 0 {
                terms.push(format!("b_{i}^{e}"));
            }
        }
        write!(f, "{}", terms.join(" · "))
    }
}

impl fmt::Debug for FiniteLamplighterElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W_{}[{self}]", self.m)
    }
}
