use serde::Serialize;

use super::PermTuple;
use crate::error::{Error, Result};
use crate::perm::{closure_enumerate, hamming_distance, regular_representation, Permutation};
use crate::rational::{serde_ratio, Rational};
use crate::words::FreeWord;

#[derive(Clone, Debug, Serialize)]
pub struct PaddedSolution {
    #[serde(skip)]
    pub tuple: PermTuple,
    /// Number of copies of `Ω`.
    pub copies: usize,
    /// Number of added fixed points.
    pub fixed: usize,
    pub block_degree: usize,
    /// `q|Ω| / (q|Ω| + r)`, which equals `d(Ψ(w₁), id)`.
    #[serde(with = "serde_ratio")]
    pub violation: Rational,
}

/// Acts as `ψ` on one copy of `Ω` and fixes `r` extra points, with `r` the least
/// value making `|Ω| / (|Ω| + r) < δ`. Since consecutive ratios shrink by less
/// than half, the result also exceeds `δ/2`.
pub fn pad_block_solution(psi: &PermTuple, w1: &FreeWord, delta: Rational) -> Result<PaddedSolution> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if delta <= zero || delta >= one {
        return Err(Error::InvalidArgument(format!("delta must lie in (0, 1), got {delta}")));
    }
    let omega = psi.degree();
    let moved = hamming_distance(&psi.evaluate(w1), &Permutation::identity(omega))?;
    if moved != one {
        return Err(Error::Hypothesis(format!("psi({w1}) must move every point, moves {moved}")));
    }
    let ratio = |r: usize| Rational::new(omega as i64, (omega + r) as i64);
    let mut r = 0;
    while ratio(r) >= delta {
        r += 1;
    }
    let violation = ratio(r);
    assert!(violation > delta / 2, "padding overshot below delta/2");
    let degree = omega + r;
    let tuple = PermTuple::new(psi.sigma_x().extended(degree), psi.sigma_y().extended(degree))?;
    Ok(PaddedSolution { tuple, copies: 1, fixed: r, block_degree: omega, violation })
}

/// Left regular action of `⟨ψ(x), ψ(y)⟩` on itself: every non-identity element,
/// in particular `ψ(w₁)` whenever it is nontrivial, then moves every point.
pub fn regular_lift(psi: &PermTuple, cap: usize) -> Result<PermTuple> {
    let id = Permutation::identity(psi.degree());
    let elements = closure_enumerate(&id, &[psi.sigma_x().clone(), psi.sigma_y().clone()], cap)?;
    let rep = regular_representation(&elements)?;
    PermTuple::new(rep.image(psi.sigma_x())?, rep.image(psi.sigma_y())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym3_regular() -> PermTuple {
        let psi = PermTuple::new(
            Permutation::parse_with_degree("(1 2 3)", Some(3)).unwrap(),
            Permutation::parse_with_degree("(1 2)", Some(3)).unwrap(),
        )
        .unwrap();
        regular_lift(&psi, 100).unwrap()
    }

    #[test]
    fn regular_lift_of_sym3() {
        let lifted = sym3_regular();
        assert_eq!(lifted.degree(), 6);
        let w1: FreeWord = "abAB".parse().unwrap();
        assert_eq!(lifted.evaluate(&w1).support_size(), 6);
    }

    #[test]
    fn half_delta_on_six_points() {
        let w1: FreeWord = "abAB".parse().unwrap();
        let padded = pad_block_solution(&sym3_regular(), &w1, Rational::new(1, 2)).unwrap();
        assert_eq!(padded.fixed, 7);
        assert_eq!(padded.violation, Rational::new(6, 13));
        let id = Permutation::identity(13);
        assert_eq!(hamming_distance(&padded.tuple.evaluate(&w1), &id).unwrap(), Rational::new(6, 13));
    }

    #[test]
    fn requires_fixed_point_free_relator() {
        let psi = PermTuple::new(
            Permutation::parse_with_degree("(1 2 3)", Some(4)).unwrap(),
            Permutation::parse_with_degree("(1 2)", Some(4)).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            pad_block_solution(&psi, &"abAB".parse().unwrap(), Rational::new(1, 2)),
            Err(Error::Hypothesis(_))
        ));
    }
}
