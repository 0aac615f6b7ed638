use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{hamming_distance, GroupElement, Permutation};
use crate::rational::{serde_ratio, Rational};

/// Finite partial multiplication table on a labelled set `A`.
#[derive(Clone, Debug)]
pub struct PartialTable {
    pub labels: Vec<String>,
    /// Index of the identity, if it belongs to `A`.
    pub identity: Option<usize>,
    /// Triples `(g, h, gh)` of indices into `labels`.
    pub products: Vec<(usize, usize, usize)>,
}

impl PartialTable {
    /// Restriction of a finite group's table to `subset` (indices into `elements`).
    pub fn from_group<T: GroupElement + std::fmt::Debug>(elements: &[T], subset: &[usize]) -> Self {
        let chosen: Vec<&T> = subset.iter().map(|&i| &elements[i]).collect();
        let position = |x: &T| chosen.iter().position(|c| *c == x);
        let mut products = Vec::new();
        for (i, g) in chosen.iter().enumerate() {
            for (j, h) in chosen.iter().enumerate() {
                if let Some(k) = position(&g.mul(h)) {
                    products.push((i, j, k));
                }
            }
        }
        Self {
            labels: chosen.iter().map(|c| format!("{c:?}")).collect(),
            identity: chosen.iter().position(|c| c.is_identity()),
            products,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "condition")]
pub enum SoficViolation {
    /// `d(φ(gh), φ(g)φ(h)) >= ε`.
    Multiplicative {
        g: usize,
        h: usize,
        #[serde(with = "serde_ratio")]
        distance: Rational,
    },
    /// `d(φ(g), id) <= 1 - ε` for `g != e`.
    Free {
        g: usize,
        #[serde(with = "serde_ratio")]
        distance: Rational,
    },
    /// `φ(e) != id`.
    Identity,
}

#[derive(Clone, Debug, Serialize)]
pub struct SoficReport {
    pub violations: Vec<SoficViolation>,
}

impl SoficReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `φ` is an `(A, ε)`-almost representation, listing every violation.
pub fn sofic_check(table: &PartialTable, phi: &[Permutation], epsilon: Rational) -> Result<SoficReport> {
    let size = table.labels.len();
    if phi.len() != size {
        return Err(Error::InvalidArgument(format!("{} images for {size} elements", phi.len())));
    }
    let degree = phi.first().map_or(1, Permutation::degree);
    if phi.iter().any(|p| p.degree() != degree) {
        return Err(Error::InvalidArgument("images have different degrees".into()));
    }
    let in_range = |i: usize| i < size;
    if table.identity.is_some_and(|e| !in_range(e))
        || table.products.iter().any(|&(g, h, k)| !(in_range(g) && in_range(h) && in_range(k)))
    {
        return Err(Error::InvalidArgument("table refers to an element outside A".into()));
    }
    let id = Permutation::identity(degree);
    let mut violations = Vec::new();
    for &(g, h, k) in &table.products {
        let distance = hamming_distance(&phi[k], &phi[g].compose(&phi[h])?)?;
        if distance >= epsilon {
            violations.push(SoficViolation::Multiplicative { g, h, distance });
        }
    }
    let one = Rational::from_integer(1);
    for (g, p) in phi.iter().enumerate() {
        if Some(g) == table.identity {
            if !p.is_identity() {
                violations.push(SoficViolation::Identity);
            }
            continue;
        }
        let distance = hamming_distance(p, &id)?;
        if distance <= one - epsilon {
            violations.push(SoficViolation::Free { g, distance });
        }
    }
    Ok(SoficReport { violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{closure_enumerate, regular_representation};

    fn sym3() -> Vec<Permutation> {
        let id = Permutation::identity(3);
        let gens = [
            Permutation::parse_with_degree("(1 2 3)", Some(3)).unwrap(),
            Permutation::parse_with_degree("(1 2)", Some(3)).unwrap(),
        ];
        closure_enumerate(&id, &gens, 10).unwrap()
    }

    #[test]
    fn regular_representation_passes() {
        let g = sym3();
        let rep = regular_representation(&g).unwrap();
        let subset: Vec<usize> = (0..g.len()).collect();
        let table = PartialTable::from_group(&g, &subset);
        let phi: Vec<Permutation> = g.iter().map(|x| rep.image(x).unwrap()).collect();
        for eps in [Rational::new(1, 1000), Rational::new(1, 2)] {
            assert!(sofic_check(&table, &phi, eps).unwrap().passed());
        }
    }

    #[test]
    fn identity_image_for_nontrivial_element() {
        let g = sym3();
        let rep = regular_representation(&g).unwrap();
        let table = PartialTable::from_group(&g, &[0, 1]);
        let mut phi: Vec<Permutation> = [0, 1].iter().map(|&i| rep.image(&g[i]).unwrap()).collect();
        phi[1] = Permutation::identity(6);
        let report = sofic_check(&table, &phi, Rational::new(1, 2)).unwrap();
        assert!(report.violations.iter().any(|v| matches!(v, SoficViolation::Free { g: 1, .. })));
    }
}
