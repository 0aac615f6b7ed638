use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{check_delta, PermTuple};
use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};
use crate::words::{FreeWord, RelationSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

/// A relation and a 1-based point it moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub relation: String,
    pub point: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TestVerdict {
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub samples_per_relation: u64,
    pub seed: u64,
    /// Point evaluations performed before the verdict.
    pub queries: u64,
    /// Queries weighted by relation length.
    pub cost: u64,
}

impl TestVerdict {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

/// `⌈ln(|E| / (1 - confidence)) / δ⌉`: enough samples that a relation moving at
/// least a `δ` fraction of points passes with probability at most `(1 - c)/|E|`.
pub fn samples_per_relation(relations: usize, delta: Rational, confidence: f64) -> Result<u64> {
    check_delta(delta)?;
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidArgument(format!("confidence must lie in (0, 1), got {confidence}")));
    }
    if relations == 0 {
        return Ok(0);
    }
    let n = ((relations as f64) / (1.0 - confidence)).ln() / to_f64(&delta);
    Ok(n.ceil().max(1.0) as u64)
}

/// Samples points of `Ω` uniformly with replacement and rejects as soon as some
/// relation moves a sampled point. Deterministic for a given seed (ChaCha8).
pub fn sample_and_substitute(
    rho: &PermTuple,
    e: &RelationSet,
    delta: Rational,
    confidence: f64,
    seed: u64,
) -> Result<TestVerdict> {
    let n = samples_per_relation(e.len(), delta, confidence)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degree = rho.degree();
    let mut queries = 0;
    let mut cost = 0;
    for r in e.words() {
        for _ in 0..n {
            let point = rng.gen_range(0..degree);
            queries += 1;
            cost += r.len() as u64;
            if rho.apply_word(r, point) != point {
                return Ok(TestVerdict {
                    outcome: Outcome::Fail,
                    witness: Some(Witness { relation: r.to_string(), point: point + 1 }),
                    samples_per_relation: n,
                    seed,
                    queries,
                    cost,
                });
            }
        }
    }
    Ok(TestVerdict { outcome: Outcome::Pass, witness: None, samples_per_relation: n, seed, queries, cost })
}

/// Re-evaluates a witness: true iff the relation really moves the point.
pub fn replay(rho: &PermTuple, witness: &Witness) -> Result<bool> {
    let r: FreeWord = witness.relation.parse()?;
    if witness.point == 0 || witness.point > rho.degree() {
        return Err(Error::InvalidArgument(format!("point {} out of range", witness.point)));
    }
    Ok(rho.apply_word(&r, witness.point - 1) != witness.point - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn rho(x: &str, y: &str, n: usize) -> PermTuple {
        PermTuple::new(
            Permutation::parse_with_degree(x, Some(n)).unwrap(),
            Permutation::parse_with_degree(y, Some(n)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn sample_count() {
        // ln(100) / (1/2) = 9.21
        assert_eq!(samples_per_relation(1, Rational::new(1, 2), 0.99).unwrap(), 10);
        assert_eq!(samples_per_relation(0, Rational::new(1, 2), 0.99).unwrap(), 0);
        assert!(samples_per_relation(1, Rational::new(1, 2), 1.0).is_err());
    }

    #[test]
    fn genuine_solution_passes() {
        let r = rho("(1 2 3)", "(1 3 2)", 3);
        let e = RelationSet::new(["abAB".parse().unwrap(), "aaa".parse().unwrap()]);
        for seed in 0..50 {
            assert!(sample_and_substitute(&r, &e, Rational::new(1, 10), 0.99, seed).unwrap().passed());
        }
    }

    #[test]
    fn fixed_point_free_fails_first_sample() {
        let r = rho("(1 2)(3 4)", "()", 4);
        let e = RelationSet::new(["a".parse().unwrap()]);
        let v = sample_and_substitute(&r, &e, Rational::new(1, 3), 0.99, 7).unwrap();
        assert_eq!(v.outcome, Outcome::Fail);
        assert_eq!(v.queries, 1);
        assert!(replay(&r, v.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn deterministic_given_seed() {
        let r = rho("(1 2)", "()", 10);
        let e = RelationSet::new(["a".parse().unwrap()]);
        let a = sample_and_substitute(&r, &e, Rational::new(1, 10), 0.9, 3).unwrap();
        let b = sample_and_substitute(&r, &e, Rational::new(1, 10), 0.9, 3).unwrap();
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.queries, b.queries);
    }
}
