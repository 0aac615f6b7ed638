use std::sync::Arc;

use crate::error::Result;
use crate::lamplighter::LamplighterElement;
use crate::perm::{closure_enumerate, GroupElement, Permutation};
use crate::words::FreeWord;

use super::SequenceSpec;

/// Image of an element under `π_1 × ... × π_len × τ`.
///
/// For a window of length `len >= max(n, threshold(M)) - 1` this map is
/// injective on `G_n L_M ⟨α⟩`, so it serves as a canonical form there.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalElement {
    coords: Vec<Permutation>,
    tail: LamplighterElement,
}

impl CanonicalElement {
    pub fn coords(&self) -> &[Permutation] {
        &self.coords
    }

    pub fn tail(&self) -> &LamplighterElement {
        &self.tail
    }

    pub fn shift(&self) -> i64 {
        self.tail.shift()
    }
}

impl GroupElement for CanonicalElement {
    fn mul(&self, other: &Self) -> Self {
        Self {
            coords: self.coords.iter().zip(&other.coords).map(|(s, t)| s.compose_unchecked(t)).collect(),
            tail: self.tail.mul(&other.tail),
        }
    }

    fn inverse(&self) -> Self {
        Self { coords: self.coords.iter().map(Permutation::inverse).collect(), tail: self.tail.inverse() }
    }

    fn identity_like(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|p| Permutation::identity(p.degree())).collect(),
            tail: LamplighterElement::identity(),
        }
    }

    fn is_identity(&self) -> bool {
        self.tail.is_identity() && self.coords.iter().all(Permutation::is_identity)
    }
}

/// Generators of `G` restricted to coordinates `1..=len`.
#[derive(Clone, Debug)]
pub struct Window {
    spec: Arc<SequenceSpec>,
    alphas: Vec<Permutation>,
    betas: Vec<Permutation>,
}

impl Window {
    pub fn new(spec: &Arc<SequenceSpec>, len: usize) -> Result<Self> {
        let mut alphas = Vec::with_capacity(len);
        let mut betas = Vec::with_capacity(len);
        for n in 1..=len {
            let (a, b) = spec.generator_images(n)?;
            alphas.push(a);
            betas.push(b);
        }
        Ok(Self { spec: Arc::clone(spec), alphas, betas })
    }

    /// Smallest window that is faithful on `G_n L_M ⟨α⟩`.
    pub fn faithful(spec: &Arc<SequenceSpec>, n: usize, big_m: u64) -> Result<Self> {
        let len = n.max(spec.threshold(big_m)?) - 1;
        Self::new(spec, len)
    }

    pub fn spec(&self) -> &Arc<SequenceSpec> {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn identity(&self) -> CanonicalElement {
        CanonicalElement {
            coords: self.alphas.iter().map(|a| Permutation::identity(a.degree())).collect(),
            tail: LamplighterElement::identity(),
        }
    }

    pub fn alpha(&self) -> CanonicalElement {
        CanonicalElement { coords: self.alphas.clone(), tail: LamplighterElement::a() }
    }

    pub fn beta(&self) -> CanonicalElement {
        CanonicalElement { coords: self.betas.clone(), tail: LamplighterElement::b(0) }
    }

    pub fn alpha_pow(&self, j: i64) -> CanonicalElement {
        CanonicalElement {
            coords: self.alphas.iter().map(|a| a.pow(j)).collect(),
            tail: LamplighterElement::from_parts([], j),
        }
    }

    /// `α^j β α^{-j}`.
    pub fn lamp(&self, j: i64) -> CanonicalElement {
        let aj = self.alpha_pow(j);
        aj.mul(&self.beta()).mul(&aj.inverse())
    }

    pub fn evaluate(&self, w: &FreeWord) -> CanonicalElement {
        w.evaluate(&self.identity(), &[self.alpha(), self.beta()])
    }

    /// Generators of `L_m`.
    pub fn lm_generators(&self, m: u64) -> Vec<CanonicalElement> {
        (-(m as i64)..=m as i64).map(|j| self.lamp(j)).collect()
    }

    /// `α_k, β_k` placed at coordinate `k`, for `k < n`: generators of
    /// `G_n = Alt(d(1)) × ... × Alt(d(n-1))`.
    pub fn gn_generators(&self, n: usize) -> Vec<CanonicalElement> {
        assert!(n <= self.len() + 1, "window too short for G_{n}");
        let mut out = Vec::new();
        for k in 0..n.saturating_sub(1) {
            for gen in [&self.alphas[k], &self.betas[k]] {
                let mut e = self.identity();
                e.coords[k] = gen.clone();
                out.push(e);
            }
        }
        out
    }
}

/// All of `L_m` in its smallest faithful window.
pub fn lm_elements(spec: &Arc<SequenceSpec>, m: u64, cap: usize) -> Result<Vec<CanonicalElement>> {
    lm_elements_in(&Window::faithful(spec, 1, m)?, m, cap)
}

/// All of `L_m` in a caller-chosen window (must be at least the faithful one).
pub fn lm_elements_in(window: &Window, m: u64, cap: usize) -> Result<Vec<CanonicalElement>> {
    closure_enumerate(&window.identity(), &window.lm_generators(m), cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn amenable() -> Arc<SequenceSpec> {
        Arc::new(SequenceSpec::explicit(vec![5, 17, 29, 41, 53], vec![1, 5, 9, 13, 17], true).unwrap())
    }

    #[test]
    fn l0_is_cyclic_of_order_three() {
        let spec = amenable();
        assert_eq!(lm_elements(&spec, 0, 100).unwrap().len(), 3);
    }

    #[test]
    fn window_agrees_with_element_coordinates() {
        let spec = amenable();
        let window = Window::new(&spec, 3).unwrap();
        let w: FreeWord = "abAAbaBB".parse().unwrap();
        let c = window.evaluate(&w);
        let g = super::super::NeumannElement::new(&spec, w.clone());
        for n in 1..=3 {
            assert_eq!(c.coords()[n - 1], g.coordinate(n).unwrap());
        }
        assert_eq!(c.tail(), g.tau());
    }

    #[test]
    fn l1_fits_in_cap() {
        let spec = amenable();
        let l1 = lm_elements(&spec, 1, 100_000).unwrap();
        // coordinate 1 is Alt(5), the tail is C3^3
        assert!(l1.len() <= 60 * 27);
        assert!(matches!(lm_elements(&spec, 1, 10), Err(Error::CapExceeded { .. })));
    }
}
