use std::sync::OnceLock;

use num_bigint::BigUint;

use super::{check_degree, Permutation};
use crate::error::{Error, Result};

/// Permutation group given by generators, with a lazily built stabilizer chain
/// (deterministic Schreier–Sims, explicit transversal tables).
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<Chain>,
}

#[derive(Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    // transversal[p] = (u, u^-1) with u(base) = p
    transversal: Vec<Option<(Permutation, Permutation)>>,
    orbit: Vec<usize>,
}

#[derive(Debug)]
struct Chain {
    degree: usize,
    levels: Vec<Level>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { left: g.degree(), right: degree });
            }
        }
        Ok(Self { degree, generators, chain: OnceLock::new() })
    }

    /// Group generated by a non-empty list; degree taken from the first generator.
    pub fn from_generators(generators: Vec<Permutation>) -> Result<Self> {
        let degree = generators
            .first()
            .map(Permutation::degree)
            .ok_or_else(|| Error::InvalidArgument("no generators".into()))?;
        Self::new(degree, generators)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    fn chain(&self) -> &Chain {
        self.chain.get_or_init(|| Chain::build(self.degree, &self.generators))
    }

    pub fn order(&self) -> BigUint {
        self.chain().levels.iter().map(|l| BigUint::from(l.orbit.len())).product()
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain().levels.iter().map(|l| l.base + 1).collect()
    }

    pub fn contains(&self, s: &Permutation) -> Result<bool> {
        check_degree(&Permutation::identity(self.degree), s)?;
        let (residue, _) = self.chain().sift(s.clone(), 0);
        Ok(residue.is_identity())
    }
}

impl Chain {
    // Iterative Schreier–Sims: level i holds S^(i), the strong generators fixing
    // the first i base points; a level is finished once every Schreier generator
    // sifts to the identity through the levels below it.
    fn build(degree: usize, generators: &[Permutation]) -> Chain {
        let mut chain = Chain { degree, levels: Vec::new() };
        let gens: Vec<Permutation> = generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        for g in &gens {
            if chain.levels.iter().all(|l| g.apply(l.base) == l.base) {
                chain.push_level(g);
            }
        }
        let bases: Vec<usize> = chain.levels.iter().map(|l| l.base).collect();
        for (depth, level) in chain.levels.iter_mut().enumerate() {
            level.gens = gens.iter().filter(|g| fixes_prefix(g, &bases, depth)).cloned().collect();
            level.extend_orbit();
        }

        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            let level = i as usize;
            match chain.failing_schreier_generator(level) {
                None => i -= 1,
                Some((h, depth)) => {
                    if depth == chain.levels.len() {
                        chain.push_level(&h);
                    }
                    for l in level + 1..=depth {
                        chain.levels[l].gens.push(h.clone());
                        chain.levels[l].extend_orbit();
                    }
                    i = depth as isize;
                }
            }
        }
        chain
    }

    fn push_level(&mut self, g: &Permutation) {
        let base = (0..self.degree).find(|&p| g.apply(p) != p).expect("non-identity");
        let mut transversal = vec![None; self.degree];
        let id = Permutation::identity(self.degree);
        transversal[base] = Some((id.clone(), id));
        self.levels.push(Level { base, gens: Vec::new(), transversal, orbit: vec![base] });
    }

    fn failing_schreier_generator(&self, depth: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[depth];
        for &p in &level.orbit {
            let (u, _) = level.transversal[p].as_ref().unwrap();
            for s in &level.gens {
                let (_, v_inv) = level.transversal[s.apply(p)].as_ref().unwrap();
                let schreier = v_inv.compose_unchecked(&s.compose_unchecked(u));
                if schreier.is_identity() {
                    continue;
                }
                let (h, d) = self.sift(schreier, depth + 1);
                if !h.is_identity() {
                    return Some((h, d));
                }
            }
        }
        None
    }

    fn sift(&self, mut h: Permutation, from: usize) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let p = h.apply(level.base);
            match &level.transversal[p] {
                None => return (h, i),
                Some((_, u_inv)) => h = u_inv.compose_unchecked(&h),
            }
        }
        let depth = self.levels.len();
        (h, depth)
    }
}

fn fixes_prefix(g: &Permutation, bases: &[usize], depth: usize) -> bool {
    bases.iter().take(depth).all(|&b| g.apply(b) == b)
}

impl Level {
    fn extend_orbit(&mut self) {
        let mut k = 0;
        // orbit entries already present keep their transversal elements
        while k < self.orbit.len() {
            let p = self.orbit[k];
            for s in &self.gens {
                let q = s.apply(p);
                if self.transversal[q].is_none() {
                    let u = s.compose_unchecked(&self.transversal[p].as_ref().unwrap().0);
                    let u_inv = u.inverse();
                    self.transversal[q] = Some((u, u_inv));
                    self.orbit.push(q);
                }
            }
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{all_permutations, closure_enumerate};

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_with_degree(s, Some(n)).unwrap()
    }

    #[test]
    fn small_orders() {
        let a5 = PermGroup::new(5, vec![p("(1 2 3 4 5)", 5), p("(1 2 3)", 5)]).unwrap();
        assert_eq!(a5.order(), BigUint::from(60u32));
        let c2 = PermGroup::new(2, vec![p("(1 2)", 2)]).unwrap();
        assert_eq!(c2.order(), BigUint::from(2u32));
        let trivial = PermGroup::new(4, vec![]).unwrap();
        assert_eq!(trivial.order(), BigUint::from(1u32));
    }

    #[test]
    fn order_matches_closure_enumeration() {
        let cases = [
            (7, vec!["(1 2 3 4 5 6 7)", "(1 3 5)"]),
            (6, vec!["(1 2 3 4 5 6)", "(1 2)"]),
            (6, vec!["(1 2)(3 4)", "(1 3)(2 4)"]),
            (8, vec!["(1 2 3 4)(5 6 7 8)", "(1 5)(2 6)(3 7)(4 8)"]),
            (9, vec!["(1 2 3)", "(4 5 6)", "(7 8 9)", "(1 4 7)(2 5 8)(3 6 9)"]),
        ];
        for (n, gens) in cases {
            let gens: Vec<_> = gens.iter().map(|g| p(g, n)).collect();
            let g = PermGroup::new(n, gens.clone()).unwrap();
            let all = closure_enumerate(&Permutation::identity(n), &gens, 5000).unwrap();
            assert_eq!(g.order(), BigUint::from(all.len()), "degree {n}");
        }
    }

    #[test]
    fn membership() {
        let a5 = PermGroup::new(5, vec![p("(1 2 3 4 5)", 5), p("(1 2 3)", 5)]).unwrap();
        assert!(a5.contains(&p("(1 2 3 4 5)", 5)).unwrap());
        assert!(!a5.contains(&p("(1 2)", 5)).unwrap());
        assert!(a5.contains(&Permutation::identity(5)).unwrap());
        assert!(a5.contains(&Permutation::identity(4)).is_err());
        let evens = all_permutations(5).into_iter().filter(|x| x.is_even()).count();
        assert_eq!(evens, 60);
        for x in all_permutations(5) {
            assert_eq!(a5.contains(&x).unwrap(), x.is_even());
        }
    }

    #[test]
    fn mixed_degrees_rejected() {
        assert!(PermGroup::new(5, vec![p("(1 2)", 4)]).is_err());
    }
}
