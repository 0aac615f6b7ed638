//! Generalized Neumann groups `G(d, r) = ⟨α, β⟩ ≤ Π_n Alt(d(n))`.
//!
//! Elements are carried as defining words in `a = α`, `b = β`. Equality is
//! decided by comparing finitely many coordinates together with the image in
//! the lamplighter quotient `τ: G → C₃ ≀ ℤ`.

mod amenable;
mod sequence;
mod window;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::lamplighter::{evaluate_word_w, LamplighterElement};
use crate::perm::{PermGroup, Permutation};
use crate::words::{FreeWord, X};

pub use amenable::{
    conjugation_density, cosofic_approximant, finite_quotient, folner_ratio, folner_set, quotient_order, CosoficReport,
    DensityReport, FiniteQuotientElement, FolnerSet, QuotientCheck,
};
pub use sequence::SequenceSpec;
pub use window::{lm_elements, lm_elements_in, CanonicalElement, Window};

pub struct NeumannElement {
    spec: Arc<SequenceSpec>,
    word: FreeWord,
    coords: Mutex<BTreeMap<usize, Permutation>>,
    tau: OnceLock<LamplighterElement>,
}

/// Outcome of the word problem, with the first coordinate that witnesses
/// nontriviality when there is one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triviality {
    Trivial,
    Coordinate(usize),
    Lamplighter,
}

impl Triviality {
    pub fn is_trivial(self) -> bool {
        self == Triviality::Trivial
    }
}

impl fmt::Display for Triviality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Triviality::Trivial => write!(f, "trivial"),
            Triviality::Coordinate(n) => write!(f, "nontrivial (coordinate {n})"),
            Triviality::Lamplighter => write!(f, "nontrivial (lamplighter image)"),
        }
    }
}

impl Clone for NeumannElement {
    fn clone(&self) -> Self {
        let coords = self.coords.lock().unwrap_or_else(|e| e.into_inner()).clone();
        Self {
            spec: Arc::clone(&self.spec),
            word: self.word.clone(),
            coords: Mutex::new(coords),
            tau: self.tau.clone(),
        }
    }
}

impl fmt::Debug for NeumannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NeumannElement({})", self.word)
    }
}

impl NeumannElement {
    pub fn new(spec: &Arc<SequenceSpec>, word: FreeWord) -> Self {
        Self { spec: Arc::clone(spec), word, coords: Mutex::new(BTreeMap::new()), tau: OnceLock::new() }
    }

    pub fn identity(spec: &Arc<SequenceSpec>) -> Self {
        Self::new(spec, FreeWord::empty())
    }

    pub fn alpha(spec: &Arc<SequenceSpec>) -> Self {
        Self::new(spec, FreeWord::x())
    }

    pub fn beta(spec: &Arc<SequenceSpec>) -> Self {
        Self::new(spec, FreeWord::y())
    }

    /// `x_m = [α^{r(m)} β α^{-r(m)}, β]`, trivial at every coordinate except `m`.
    pub fn x_m(spec: &Arc<SequenceSpec>, m: usize) -> Result<Self> {
        Ok(Self::new(spec, x_m_word(spec.r(m)? as i64)))
    }

    pub fn spec(&self) -> &Arc<SequenceSpec> {
        &self.spec
    }

    pub fn word(&self) -> &FreeWord {
        &self.word
    }

    fn same_spec(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) {
            Ok(())
        } else {
            Err(Error::InvalidArgument("elements belong to different sequence specs".into()))
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_spec(other)?;
        Ok(Self::new(&self.spec, self.word.mul(&other.word)))
    }

    pub fn inverse(&self) -> Self {
        Self::new(&self.spec, self.word.inverse())
    }

    /// `π_n(g)`, memoized.
    pub fn coordinate(&self, n: usize) -> Result<Permutation> {
        if let Some(p) = self.coords.lock().unwrap_or_else(|e| e.into_inner()).get(&n) {
            return Ok(p.clone());
        }
        let (alpha, beta) = self.spec.generator_images(n)?;
        let value = self.word.evaluate(&Permutation::identity(alpha.degree()), &[alpha, beta]);
        self.coords.lock().unwrap_or_else(|e| e.into_inner()).insert(n, value.clone());
        Ok(value)
    }

    /// `τ(g)`, memoized.
    pub fn tau(&self) -> &LamplighterElement {
        self.tau.get_or_init(|| evaluate_word_w(&self.word))
    }

    /// Coordinates below `threshold(|w|)` decide triviality together with `τ`.
    pub fn triviality(&self) -> Result<Triviality> {
        let threshold = self.spec.threshold(self.word.len() as u64)?;
        for n in 1..threshold {
            if !self.coordinate(n)?.is_identity() {
                return Ok(Triviality::Coordinate(n));
            }
        }
        if !self.tau().is_identity() {
            return Ok(Triviality::Lamplighter);
        }
        Ok(Triviality::Trivial)
    }

    pub fn is_identity(&self) -> Result<bool> {
        Ok(self.triviality()?.is_trivial())
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.same_spec(other)?;
        self.mul(&other.inverse())?.is_identity()
    }

    /// Nontrivial coordinates of an element of `ker τ = ⊕ Alt(d(n))`.
    pub fn kernel_support(&self) -> Result<Vec<(usize, Permutation)>> {
        if !self.tau().is_identity() {
            return Err(Error::NotInKernel);
        }
        let threshold = self.spec.threshold(self.word.len() as u64)?;
        let mut out = Vec::new();
        for n in 1..threshold {
            let p = self.coordinate(n)?;
            if !p.is_identity() {
                out.push((n, p));
            }
        }
        Ok(out)
    }
}

pub fn x_m_word(r: i64) -> FreeWord {
    let b = FreeWord::y();
    let conj = b.conjugate_by(&FreeWord::x().pow(r));
    conj.commutator(&b)
}

/// `(π_n(α), π_n(β))`.
pub fn generator_images(spec: &SequenceSpec, n: usize) -> Result<(Permutation, Permutation)> {
    spec.generator_images(n)
}

/// Smallest `m` with `w ∈ L_m ⟨α⟩`: the largest `|k|` over `b`-letters of `w`
/// written as `α^k β^{±1} α^{-k}` factors.
pub fn lamp_radius(w: &FreeWord) -> u64 {
    let mut k: i64 = 0;
    let mut radius = 0;
    for &l in w.letters() {
        match l {
            X => k += 1,
            l if l == -X => k -= 1,
            _ => radius = radius.max(k.unsigned_abs()),
        }
    }
    radius
}

/// `|⟨α_n^j β_n α_n^{-j} : |j| <= m⟩|`, the image of `L_m` at coordinate `n`.
pub fn coordinate_lm_order(spec: &SequenceSpec, n: usize, m: u64) -> Result<BigUint> {
    let (alpha, beta) = spec.generator_images(n)?;
    let gens = (-(m as i64)..=m as i64)
        .map(|j| {
            let aj = alpha.pow(j);
            aj.compose_unchecked(&beta).compose_unchecked(&aj.inverse())
        })
        .collect();
    Ok(PermGroup::new(alpha.degree(), gens)?.order())
}

/// `|⟨α_n, β_n⟩|`.
pub fn coordinate_group_order(spec: &SequenceSpec, n: usize) -> Result<BigUint> {
    let (alpha, beta) = spec.generator_images(n)?;
    Ok(PermGroup::new(alpha.degree(), vec![alpha, beta])?.order())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> Arc<SequenceSpec> {
        Arc::new(
            SequenceSpec::explicit(
                vec![5, 7, 13, 37, 61, 97, 137, 181, 241],
                vec![1, 2, 4, 11, 20, 30, 45, 60, 80],
                true,
            )
            .unwrap(),
        )
    }

    #[test]
    fn x1_word_and_support() {
        let spec = toy();
        let x1 = NeumannElement::x_m(&spec, 1).unwrap();
        assert_eq!(x1.word().to_string(), "abAbaBAB");
        assert!(x1.tau().is_identity());
        assert!(!x1.coordinate(1).unwrap().is_identity());
        for n in 2..=9 {
            assert!(x1.coordinate(n).unwrap().is_identity(), "coordinate {n}");
        }
        assert_eq!(x1.triviality().unwrap(), Triviality::Coordinate(1));
        let support = x1.kernel_support().unwrap();
        assert_eq!(support.len(), 1);
        assert_eq!(support[0].0, 1);
    }

    #[test]
    fn x2_support_is_coordinate_two() {
        let spec = toy();
        let x2 = NeumannElement::x_m(&spec, 2).unwrap();
        assert!(x2.tau().is_identity());
        assert!(!x2.coordinate(2).unwrap().is_identity());
        for n in 3..=9 {
            assert!(x2.coordinate(n).unwrap().is_identity());
        }
    }

    #[test]
    fn simple_word_problem() {
        let spec = toy();
        let b3 = NeumannElement::new(&spec, "bbb".parse().unwrap());
        assert!(b3.is_identity().unwrap());
        assert!(b3.coordinate(4).unwrap().is_identity());
        let a3 = NeumannElement::new(&spec, "aaa".parse().unwrap());
        assert_eq!(a3.triviality().unwrap(), Triviality::Coordinate(1));
        assert!(NeumannElement::identity(&spec).is_identity().unwrap());
        assert!(matches!(a3.kernel_support(), Err(Error::NotInKernel)));
        let b = NeumannElement::beta(&spec);
        let bb = NeumannElement::new(&spec, "BB".parse().unwrap());
        assert!(b.equals(&bb).unwrap());
    }

    #[test]
    fn lamp_radius_of_conjugates() {
        assert_eq!(lamp_radius(&"aabAA".parse().unwrap()), 2);
        assert_eq!(lamp_radius(&"b".parse().unwrap()), 0);
        assert_eq!(lamp_radius(&"AbaabAA".parse().unwrap()), 1);
        assert_eq!(lamp_radius(&FreeWord::empty()), 0);
    }

    #[test]
    fn coordinate_orders() {
        let spec = toy();
        assert_eq!(coordinate_group_order(&spec, 2).unwrap(), BigUint::from(2520u32));
        assert_eq!(coordinate_lm_order(&spec, 1, 0).unwrap(), BigUint::from(3u32));
    }
}
