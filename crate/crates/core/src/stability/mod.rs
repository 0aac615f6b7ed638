//! Almost-solutions of relation sets in `Sym(N)`: the Sample-and-Substitute
//! tester, local and global defects, block padding, and sofic checks.

mod defect;
mod pad;
mod sofic;
mod tester;

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{check_degree, hamming_distance, Permutation};
use crate::rational::Rational;
use crate::words::{FreeWord, RelationSet, X};

pub use defect::{
    defect_solvers, global_defect, global_defect_with, local_defect, DefectSolver, GlobalDefect, DEFAULT_DEGREE_CAP,
};
pub use pad::{pad_block_solution, regular_lift, PaddedSolution};
pub use sofic::{sofic_check, PartialTable, SoficReport, SoficViolation};
pub use tester::{replay, sample_and_substitute, samples_per_relation, Outcome, TestVerdict, Witness};

/// Images `(ρ(x), ρ(y))` of the two free generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermTuple {
    sigma_x: Permutation,
    sigma_y: Permutation,
    inv_x: Permutation,
    inv_y: Permutation,
}

impl PermTuple {
    pub fn new(sigma_x: Permutation, sigma_y: Permutation) -> Result<Self> {
        check_degree(&sigma_x, &sigma_y)?;
        Ok(Self { inv_x: sigma_x.inverse(), inv_y: sigma_y.inverse(), sigma_x, sigma_y })
    }

    pub fn sigma_x(&self) -> &Permutation {
        &self.sigma_x
    }

    pub fn sigma_y(&self) -> &Permutation {
        &self.sigma_y
    }

    pub fn degree(&self) -> usize {
        self.sigma_x.degree()
    }

    /// `ρ(w)`.
    pub fn evaluate(&self, w: &FreeWord) -> Permutation {
        w.evaluate(&Permutation::identity(self.degree()), &[self.sigma_x.clone(), self.sigma_y.clone()])
    }

    /// `ρ(w)(point)` for a 0-based point, applying the rightmost letter first.
    pub fn apply_word(&self, w: &FreeWord, point: usize) -> usize {
        w.letters().iter().rev().fold(point, |p, &l| {
            let g = match l {
                X => &self.sigma_x,
                l if l == -X => &self.inv_x,
                l if l > 0 => &self.sigma_y,
                _ => &self.inv_y,
            };
            g.apply(p)
        })
    }

    pub fn is_solution(&self, relations: &RelationSet) -> bool {
        relations.words().iter().all(|r| self.evaluate(r).is_identity())
    }

    /// Two lines, `x` then `y`, each in image-line or cycle form. Cycle lines take
    /// their degree from the other line, or from the largest point mentioned.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> =
            text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()).collect();
        let [lx, ly] = lines[..] else {
            return Err(Error::Parse(format!("expected two permutation lines, found {}", lines.len())));
        };
        let loose = [Permutation::parse_with_degree(lx, None)?, Permutation::parse_with_degree(ly, None)?];
        let degree = loose.iter().map(Permutation::degree).max().unwrap_or(1);
        Self::new(Permutation::parse_with_degree(lx, Some(degree))?, Permutation::parse_with_degree(ly, Some(degree))?)
    }
}

impl fmt::Display for PermTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.sigma_x)?;
        write!(f, "{}", self.sigma_y)
    }
}

fn check_delta(delta: Rational) -> Result<()> {
    if delta <= Rational::from_integer(0) || delta > Rational::from_integer(1) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0, 1], got {delta}")));
    }
    Ok(())
}

/// `d(ρ(r), id) < δ` for every `r ∈ E`.
pub fn is_almost_solution(rho: &PermTuple, delta: Rational, e: &RelationSet) -> Result<bool> {
    check_delta(delta)?;
    let id = Permutation::identity(rho.degree());
    for r in e.words() {
        if hamming_distance(&rho.evaluate(r), &id)? >= delta {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `‖E‖ / δ`, the cost of the certificate pair `(δ, E)`.
pub fn stability_cost(e: &RelationSet, delta: Rational) -> Result<Rational> {
    check_delta(delta)?;
    Ok(Rational::from_integer(e.norm() as i64) / delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(x: &str, y: &str, n: usize) -> PermTuple {
        PermTuple::new(
            Permutation::parse_with_degree(x, Some(n)).unwrap(),
            Permutation::parse_with_degree(y, Some(n)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn strict_boundary() {
        let rho = tuple("(1 2)", "()", 4);
        let e = RelationSet::new(["a".parse().unwrap()]);
        assert!(!is_almost_solution(&rho, Rational::new(1, 2), &e).unwrap());
        assert!(is_almost_solution(&rho, Rational::new(3, 5), &e).unwrap());
        assert!(is_almost_solution(&rho, Rational::new(1, 100), &RelationSet::default()).unwrap());
    }

    #[test]
    fn apply_word_matches_evaluate() {
        let rho = tuple("(1 2 3 4 5)", "(1 3)(2 4)", 5);
        let w: FreeWord = "abAABaB".parse().unwrap();
        let p = rho.evaluate(&w);
        for i in 0..5 {
            assert_eq!(rho.apply_word(&w, i), p.apply(i));
        }
    }

    #[test]
    fn costs() {
        let e = RelationSet::new(["abAB".parse().unwrap()]);
        assert_eq!(stability_cost(&e, Rational::new(1, 8)).unwrap(), Rational::from_integer(32));
        assert_eq!(stability_cost(&RelationSet::default(), Rational::new(1, 3)).unwrap(), Rational::from_integer(0));
        assert!(stability_cost(&e, Rational::from_integer(0)).is_err());
    }

    #[test]
    fn parse_tuple_text() {
        let rho = PermTuple::parse("(1 2 3)\n2 1 3 4\n").unwrap();
        assert_eq!(rho.degree(), 4);
        assert_eq!(rho.sigma_x().to_string(), "(1 2 3)(4)");
        assert!(PermTuple::parse("(1 2)").is_err());
    }
}
