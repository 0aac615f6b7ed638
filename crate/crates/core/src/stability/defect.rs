use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use super::PermTuple;
use crate::error::{Error, Result};
use crate::perm::{all_permutations, hamming_distance, Permutation};
use crate::rational::{serde_ratio, Rational};
use crate::registry::Registry;
use crate::words::RelationSet;

pub const DEFAULT_DEGREE_CAP: usize = 6;

/// `L_R(ρ) = Σ_{r ∈ R} d(ρ(r), id)`.
pub fn local_defect(rho: &PermTuple, relations: &RelationSet) -> Result<Rational> {
    let id = Permutation::identity(rho.degree());
    relations
        .words()
        .iter()
        .try_fold(Rational::from_integer(0), |acc, r| Ok(acc + hamming_distance(&rho.evaluate(r), &id)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct GlobalDefect {
    #[serde(with = "serde_ratio")]
    pub value: Rational,
    #[serde(serialize_with = "serialize_tuple")]
    pub minimizer: PermTuple,
}

fn serialize_tuple<S: serde::Serializer>(t: &PermTuple, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("PermTuple", 2)?;
    st.serialize_field("x", &t.sigma_x().to_string())?;
    st.serialize_field("y", &t.sigma_y().to_string())?;
    st.end()
}

/// Exact minimisation of `d(ρ(x), φ(x)) + d(ρ(y), φ(y))` over solutions `φ` of `R`.
///
/// Implementations must agree on the value and break ties towards the
/// lexicographically smallest `(φ(x), φ(y))` image tables.
pub trait DefectSolver: Send + Sync {
    fn name(&self) -> &'static str;

    /// Minimal total mismatch count and the minimizer, or `None` if `R` has no
    /// solution at this degree (never the case: the trivial action solves all).
    fn solve(&self, rho: &PermTuple, relations: &RelationSet) -> Option<(usize, PermTuple)>;
}

/// Scans `Sym(N)²` in lexicographic order, parallel over `φ(x)`.
pub struct Exhaustive;

impl DefectSolver for Exhaustive {
    fn name(&self) -> &'static str {
        "exhaustive"
    }

    fn solve(&self, rho: &PermTuple, relations: &RelationSet) -> Option<(usize, PermTuple)> {
        let perms = all_permutations(rho.degree());
        let best = perms
            .par_iter()
            .enumerate()
            .filter_map(|(i, px)| {
                let cx = px.mismatches(rho.sigma_x());
                perms
                    .iter()
                    .enumerate()
                    .filter_map(|(j, py)| {
                        let cand = PermTuple::new(px.clone(), py.clone()).ok()?;
                        cand.is_solution(relations).then(|| (cx + py.mismatches(rho.sigma_y()), i, j))
                    })
                    .min()
            })
            .min()?;
        let (cost, i, j) = best;
        Some((cost, PermTuple::new(perms[i].clone(), perms[j].clone()).ok()?))
    }
}

/// Depth-first construction of `φ(x)` then `φ(y)` point by point in lexicographic
/// order, abandoning any branch whose partial mismatch count already reaches the
/// best complete one.
pub struct BranchBound;

struct Search<'a> {
    rho: &'a PermTuple,
    relations: &'a RelationSet,
    n: usize,
    best: Option<(usize, Vec<u32>, Vec<u32>)>,
}

impl Search<'_> {
    fn bound(&self) -> usize {
        self.best.as_ref().map_or(usize::MAX, |b| b.0)
    }

    fn fill(&mut self, which: usize, images: &mut [Vec<u32>; 2], used: &mut [Vec<bool>; 2], cost: usize) {
        if cost >= self.bound() {
            return;
        }
        let pos = images[which].len();
        if pos == self.n {
            if which == 0 {
                self.fill(1, images, used, cost);
                return;
            }
            let to_perm = |v: &Vec<u32>| Permutation::from_images(v.clone()).expect("bijection by construction");
            let cand = PermTuple::new(to_perm(&images[0]), to_perm(&images[1])).expect("equal degrees");
            if cand.is_solution(self.relations) {
                self.best = Some((cost, images[0].clone(), images[1].clone()));
            }
            return;
        }
        let target = if which == 0 { self.rho.sigma_x() } else { self.rho.sigma_y() };
        for v in 0..self.n as u32 {
            if used[which][v as usize] {
                continue;
            }
            let step = usize::from(target.apply(pos) != v as usize);
            used[which][v as usize] = true;
            images[which].push(v);
            self.fill(which, images, used, cost + step);
            images[which].pop();
            used[which][v as usize] = false;
        }
    }
}

impl DefectSolver for BranchBound {
    fn name(&self) -> &'static str {
        "branch-bound"
    }

    fn solve(&self, rho: &PermTuple, relations: &RelationSet) -> Option<(usize, PermTuple)> {
        let n = rho.degree();
        let mut search = Search { rho, relations, n, best: None };
        let mut images = [Vec::with_capacity(n), Vec::with_capacity(n)];
        let mut used = [vec![false; n], vec![false; n]];
        search.fill(0, &mut images, &mut used, 0);
        let (cost, x, y) = search.best?;
        Some((cost, PermTuple::new(Permutation::from_images(x).ok()?, Permutation::from_images(y).ok()?).ok()?))
    }
}

/// Solvers by name: `exhaustive`, `branch-bound`.
pub fn defect_solvers() -> &'static Registry<dyn DefectSolver> {
    static REGISTRY: OnceLock<Registry<dyn DefectSolver>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut reg: Registry<dyn DefectSolver> = Registry::new("defect solver");
        reg.register("exhaustive", "parallel scan of Sym(N)^2", |_| Ok(Box::new(Exhaustive)));
        reg.register("branch-bound", "lexicographic backtracking with cost pruning", |_| Ok(Box::new(BranchBound)));
        reg
    })
}

/// `G_R(ρ)` with the default solver.
pub fn global_defect(rho: &PermTuple, relations: &RelationSet, cap_degree: usize) -> Result<GlobalDefect> {
    global_defect_with(&Exhaustive, rho, relations, cap_degree)
}

pub fn global_defect_with(
    solver: &dyn DefectSolver,
    rho: &PermTuple,
    relations: &RelationSet,
    cap_degree: usize,
) -> Result<GlobalDefect> {
    let n = rho.degree();
    if n > cap_degree {
        return Err(Error::DegreeCap { degree: n, cap: cap_degree });
    }
    let (cost, minimizer) = solver
        .solve(rho, relations)
        .ok_or_else(|| Error::Hypothesis("relation set has no solution at this degree".into()))?;
    Ok(GlobalDefect { value: Rational::new(cost as i64, n as i64), minimizer })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho(x: &str, y: &str, n: usize) -> PermTuple {
        PermTuple::new(
            Permutation::parse_with_degree(x, Some(n)).unwrap(),
            Permutation::parse_with_degree(y, Some(n)).unwrap(),
        )
        .unwrap()
    }

    fn commutator() -> RelationSet {
        RelationSet::new(["abAB".parse().unwrap()])
    }

    #[test]
    fn local_values() {
        let r = rho("(1 2)", "()", 4);
        assert_eq!(local_defect(&r, &RelationSet::new(["a".parse().unwrap()])).unwrap(), Rational::new(1, 2));
        assert_eq!(local_defect(&r, &commutator()).unwrap(), Rational::from_integer(0));
    }

    #[test]
    fn solution_has_zero_global_defect() {
        let r = rho("(1 2 3)", "(1 3 2)", 3);
        let g = global_defect(&r, &commutator(), 6).unwrap();
        assert_eq!(g.value, Rational::from_integer(0));
        assert_eq!(g.minimizer, r);
    }

    #[test]
    fn sym3_commutator_oracle() {
        // commuting pairs in Sym(3), counted independently: every pair inside one
        // cyclic subgroup or involving the identity
        let r = rho("(1 2 3)", "(1 2)", 3);
        let all = all_permutations(3);
        let mut best = usize::MAX;
        let mut commuting = 0;
        for px in &all {
            for py in &all {
                if px.compose(py).unwrap() == py.compose(px).unwrap() {
                    commuting += 1;
                    best = best.min(px.mismatches(r.sigma_x()) + py.mismatches(r.sigma_y()));
                }
            }
        }
        assert_eq!(commuting, 18);
        let g = global_defect(&r, &commutator(), 6).unwrap();
        assert_eq!(g.value, Rational::new(best as i64, 3));
        let b = global_defect_with(&BranchBound, &r, &commutator(), 6).unwrap();
        assert_eq!(b.value, g.value);
        assert_eq!(b.minimizer, g.minimizer);
    }

    #[test]
    fn degree_cap() {
        let r = rho("(1 2)", "()", 7);
        assert!(matches!(global_defect(&r, &commutator(), 6), Err(Error::DegreeCap { degree: 7, cap: 6 })));
    }

    #[test]
    fn registry_names() {
        let names: Vec<_> = defect_solvers().names().collect();
        assert_eq!(names, vec!["branch-bound", "exhaustive"]);
        assert_eq!(defect_solvers().build("branch-bound").unwrap().name(), "branch-bound");
    }
}
