//! Recursive construction of `(d, r)` sequences with prescribed growth, and an
//! independent verifier for every condition the construction promises.
//!
//! With `q(n) = 9n²` and `p(n) = 4(q(n) + 17n) + 4`:
//! * `d(n)` is the least prime `>= max(d(n-1) + 1, C n², F(p(n+1)))`;
//! * `r(n)` is the least integer with `q(n) < r(n) < q(n) + 17n`, `3 r(n) < d(n)`,
//!   and `r(l) ≢ ±r(m), ±2r(m) (mod d(m))` for every pair `l ≠ m` built so far.

pub mod growth;
pub mod primality;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::neumann::SequenceSpec;

pub use growth::{growth_registry, GrowthFunction};
pub use primality::{is_prime, next_prime};

/// Default constant: `79 n² > 3(9n² + 17n)` for all `n >= 1`, so the whole
/// `r`-interval sits below `d(n)/3`.
pub const DEFAULT_C: u64 = 79;

pub fn q(n: u64) -> u64 {
    9 * n * n
}

pub fn p(n: u64) -> u64 {
    4 * (q(n) + 17 * n) + 4
}

#[derive(Clone)]
pub struct GrowthTarget {
    f: Arc<dyn GrowthFunction>,
    c: u64,
}

impl GrowthTarget {
    pub fn new(f: Arc<dyn GrowthFunction>, c: u64) -> Self {
        Self { f, c }
    }

    /// Builds `F` from a registry spec string such as `const:1` or `poly:2,3`.
    pub fn from_spec(f: &str, c: u64) -> Result<Self> {
        Ok(Self::new(Arc::from(growth_registry().build(f)?), c))
    }

    pub fn f_spec(&self) -> String {
        self.f.spec()
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn eval_f(&self, x: u64) -> Option<u64> {
        self.f.eval(x)
    }

    /// Lower bound `max(d(n-1) + 1, C n², F(p(n+1)), 5)` for the `n`-th prime.
    fn d_lower_bound(&self, n: usize, prev: Option<u64>) -> Result<u64> {
        let nn = n as u64;
        let overflow = Error::Overflow { index: n };
        let cn2 = nn.checked_mul(nn).and_then(|x| x.checked_mul(self.c)).ok_or(overflow)?;
        let f = self.f.eval(p(nn + 1)).ok_or(Error::Overflow { index: n })?;
        let after_prev = match prev {
            Some(d) => d.checked_add(1).ok_or(Error::Overflow { index: n })?,
            None => 0,
        };
        Ok(after_prev.max(cn2).max(f).max(5))
    }
}

impl std::fmt::Debug for GrowthTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GrowthTarget(F = {}, C = {})", self.f.spec(), self.c)
    }
}

fn clashes(a: u64, b: u64, modulus: u64) -> bool {
    // a ≡ ±b or ±2b (mod modulus)
    let a = a % modulus;
    let b = b % modulus;
    let b2 = (2 * b as u128 % modulus as u128) as u64;
    let neg = |x: u64| (modulus - x) % modulus;
    a == b || a == neg(b) || a == b2 || a == neg(b2)
}

/// Computes term `n = d.len() + 1` from the terms already built.
pub(crate) fn next_term(target: &GrowthTarget, d: &[u64], r: &[u64]) -> Result<(u64, u64)> {
    let n = d.len() + 1;
    let lower = target.d_lower_bound(n, d.last().copied())?;
    let dn = next_prime(lower).ok_or(Error::Overflow { index: n })?;
    let qn = q(n as u64);
    let upper = qn + 17 * n as u64; // exclusive
    let rn = (qn + 1..upper)
        .filter(|&x| 3 * x < dn)
        .find(|&x| d.iter().zip(r).all(|(&dm, &rm)| !clashes(x, rm, dm) && !clashes(rm, x, dn)))
        .ok_or(Error::NoAdmissibleR { index: n })?;
    Ok((dn, rn))
}

/// First `count` terms of the recursive construction.
pub fn generate(target: &GrowthTarget, count: usize) -> Result<SequenceSpec> {
    if count == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let spec = SequenceSpec::generated(target.clone());
    spec.extend_to(count)?;
    Ok(spec)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CongruenceViolation {
    pub l: usize,
    pub m: usize,
    /// Which residue of `r(m)` modulo `d(m)` collided: `+r`, `-r`, `+2r` or `-2r`.
    pub kind: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexReport {
    pub index: usize,
    pub d: u64,
    pub r: u64,
    pub prime: bool,
    pub odd_at_least_5: bool,
    pub d_nondecreasing: bool,
    pub d_strictly_increasing: bool,
    pub r_strictly_increasing: bool,
    pub three_r_le_d: bool,
    pub d_ge_2r_plus_1: bool,
    pub r_in_interval: bool,
    pub three_r_lt_d: bool,
    pub congruence_violations: Vec<CongruenceViolation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_ge_c_n2: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_ge_f: Option<bool>,
}

impl IndexReport {
    /// Standing assumptions only: primes, monotonicity, `3r <= d`.
    pub fn toy_grade(&self) -> bool {
        self.prime
            && self.odd_at_least_5
            && self.d_nondecreasing
            && self.r_strictly_increasing
            && self.three_r_le_d
            && self.d_ge_2r_plus_1
    }

    /// Everything the recursive construction guarantees.
    pub fn theorem_grade(&self) -> bool {
        self.toy_grade()
            && self.d_strictly_increasing
            && self.r_in_interval
            && self.three_r_lt_d
            && self.congruence_violations.is_empty()
            && self.d_ge_c_n2.unwrap_or(true)
            && self.d_ge_f.unwrap_or(true)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceReport {
    pub indices: Vec<IndexReport>,
    pub congruence_checks: usize,
    pub toy_grade: bool,
    pub theorem_grade: bool,
}

impl SequenceReport {
    pub fn congruence_violations(&self) -> usize {
        self.indices.iter().map(|i| i.congruence_violations.len()).sum()
    }
}

/// Re-derives every condition from the raw terms, independently of [`generate`].
pub fn verify_sequence(spec: &SequenceSpec, count: usize) -> Result<SequenceReport> {
    let (d, r) = spec.terms(count)?;
    let target = spec.target();
    let mut indices = Vec::with_capacity(count);
    let mut checks = 0;
    for i in 0..count {
        let n = i + 1;
        let (dn, rn) = (d[i], r[i]);
        let qn = 9 * (n as u64) * (n as u64);
        let mut violations = Vec::new();
        for (j, (&dm, &rm)) in d.iter().zip(&r).enumerate().take(count) {
            if j == i {
                continue;
            }
            // condition for the ordered pair (l, m) = (n, j+1)
            let a = rn % dm;
            let b = rm % dm;
            let two_b = (2 * b) % dm;
            checks += 2;
            for (hit, kind) in
                [(a == b, "+r"), (a == (dm - b) % dm, "-r"), (a == two_b, "+2r"), (a == (dm - two_b) % dm, "-2r")]
            {
                if hit {
                    violations.push(CongruenceViolation { l: n, m: j + 1, kind });
                }
            }
        }
        let prev = (i > 0).then(|| (d[i - 1], r[i - 1]));
        indices.push(IndexReport {
            index: n,
            d: dn,
            r: rn,
            prime: is_prime(dn),
            odd_at_least_5: dn >= 5 && dn % 2 == 1,
            d_nondecreasing: prev.is_none_or(|(pd, _)| dn >= pd),
            d_strictly_increasing: prev.is_none_or(|(pd, _)| dn > pd),
            r_strictly_increasing: prev.is_none_or(|(_, pr)| rn > pr),
            three_r_le_d: 3 * rn <= dn,
            d_ge_2r_plus_1: dn > 2 * rn,
            r_in_interval: qn < rn && rn < qn + 17 * n as u64,
            three_r_lt_d: 3 * rn < dn,
            congruence_violations: violations,
            d_ge_c_n2: target.map(|t| dn >= t.c() * (n as u64) * (n as u64)),
            d_ge_f: target.map(|t| t.eval_f(p(n as u64 + 1)).is_some_and(|f| dn >= f)),
        });
    }
    let toy_grade = indices.iter().all(IndexReport::toy_grade);
    let theorem_grade = indices.iter().all(IndexReport::theorem_grade);
    Ok(SequenceReport { indices, congruence_checks: checks, toy_grade, theorem_grade })
}
