//! Følner sets `F_n = G_n L_{m_n} {α^j : |j| <= m_n}`, the finite quotients
//! `φ_n: G → P_n = G_n × W_{m_n}`, and the cosofic approximants built from them.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lamplighter::FiniteLamplighterElement;
use crate::perm::{closure_enumerate, GroupElement, Permutation};
use crate::rational::{serde_ratio, Rational};
use crate::words::{FreeWord, Letter};

use super::window::{CanonicalElement, Window};
use super::{lamp_radius, NeumannElement, SequenceSpec};

/// Enumerated Følner set together with a membership oracle.
pub struct FolnerSet {
    window: Window,
    n: usize,
    m: u64,
    core: Vec<CanonicalElement>,
    core_set: HashSet<CanonicalElement>,
    alpha_pows: Vec<CanonicalElement>,
}

impl FolnerSet {
    /// `extra` widens the window so that it stays faithful on
    /// `G_n L_{m_n + extra} ⟨α⟩`, which conjugation tests need.
    pub fn build(spec: &Arc<SequenceSpec>, n: usize, m: u64, extra: u64, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n starts at 1".into()));
        }
        let window = Window::faithful(spec, n, m + extra)?;
        let mut gens = window.gn_generators(n);
        gens.extend(window.lm_generators(m));
        let width = 2 * m as usize + 1;
        let core = closure_enumerate(&window.identity(), &gens, (cap / width).max(1))?;
        let core_set = core.iter().cloned().collect();
        let alpha_pows = (-(m as i64)..=m as i64).map(|j| window.alpha_pow(j)).collect();
        Ok(Self { window, n, m, core, core_set, alpha_pows })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `G_n L_{m_n}`.
    pub fn core(&self) -> &[CanonicalElement] {
        &self.core
    }

    pub fn core_contains(&self, x: &CanonicalElement) -> bool {
        self.core_set.contains(x)
    }

    pub fn len(&self) -> usize {
        self.core.len() * self.alpha_pows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, y: &CanonicalElement) -> bool {
        let j = y.shift();
        if j.unsigned_abs() > self.m {
            return false;
        }
        let back = &self.alpha_pows[(self.m as i64 - j) as usize];
        self.core_set.contains(&y.mul(back))
    }

    /// Elements `s α^j` in order of `s`, then `j`.
    pub fn iter(&self) -> impl Iterator<Item = CanonicalElement> + '_ {
        self.core.iter().flat_map(move |s| self.alpha_pows.iter().map(move |a| s.mul(a)))
    }

    /// Number of `f ∈ F_n` with `pred(f)`, counted in parallel.
    pub fn count<P>(&self, pred: P) -> usize
    where
        P: Fn(&CanonicalElement) -> bool + Sync,
    {
        self.core.par_iter().map(|s| self.alpha_pows.iter().filter(|a| pred(&s.mul(a))).count()).sum()
    }

    /// `|F g \ F| / |F|`.
    pub fn boundary_ratio(&self, g: &CanonicalElement) -> Rational {
        let outside = self.count(|f| !self.contains(&f.mul(g)));
        Rational::new(outside as i64, self.len() as i64)
    }

    /// `φ_n` on an element of the window.
    pub fn quotient(&self, x: &CanonicalElement) -> FiniteQuotientElement {
        FiniteQuotientElement {
            coords: x.coords()[..self.n - 1].to_vec(),
            tail: x.tail().project_finite(self.m as usize),
        }
    }

    /// Injectivity of `φ_n` on `F_n` and the size of its image against `|P_n|`.
    pub fn quotient_check(&self) -> Result<QuotientCheck> {
        let image: HashSet<FiniteQuotientElement> = self.iter().map(|f| self.quotient(&f)).collect();
        let order = quotient_order(self.window.spec(), self.n, self.m)?;
        Ok(QuotientCheck {
            folner_size: self.len(),
            image_size: image.len(),
            quotient_order: order.to_string(),
            injective: image.len() == self.len(),
            bijective: image.len() == self.len() && BigUint::from(image.len()) == order,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientCheck {
    pub folner_size: usize,
    pub image_size: usize,
    pub quotient_order: String,
    pub injective: bool,
    pub bijective: bool,
}

/// `F_n` with the window needed for boundary ratios.
pub fn folner_set(spec: &Arc<SequenceSpec>, n: usize, m: u64, cap: usize) -> Result<FolnerSet> {
    FolnerSet::build(spec, n, m, 0, cap)
}

/// `|F_n s \ F_n| / |F_n|` for `s ∈ {α, α⁻¹, β, β⁻¹}` given as a letter.
pub fn folner_ratio(spec: &Arc<SequenceSpec>, n: usize, m: u64, generator: Letter, cap: usize) -> Result<Rational> {
    let folner = folner_set(spec, n, m, cap)?;
    let g = folner.window().evaluate(&FreeWord::letter(generator));
    Ok(folner.boundary_ratio(&g))
}

/// Element of `P_n = Alt(d(1)) × ... × Alt(d(n-1)) × W_{m_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteQuotientElement {
    pub coords: Vec<Permutation>,
    pub tail: FiniteLamplighterElement,
}

impl FiniteQuotientElement {
    pub fn is_identity(&self) -> bool {
        self.tail.is_identity() && self.coords.iter().all(Permutation::is_identity)
    }
}

impl std::fmt::Display for FiniteQuotientElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for c in &self.coords {
            write!(f, "{c}, ")?;
        }
        write!(f, "{})", self.tail)
    }
}

/// `φ_n(g) = (π_1(g), ..., π_{n-1}(g), ρ_{m_n}(τ(g)))`.
pub fn finite_quotient(g: &NeumannElement, n: usize, m: u64) -> Result<FiniteQuotientElement> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and m_n >= 1".into()));
    }
    let coords = (1..n).map(|k| g.coordinate(k)).collect::<Result<_>>()?;
    Ok(FiniteQuotientElement { coords, tail: g.tau().project_finite(m as usize) })
}

/// `|P_n| = Π_{k<n} d(k)!/2 · 3^{2m+1} (2m+1)`.
pub fn quotient_order(spec: &SequenceSpec, n: usize, m: u64) -> Result<BigUint> {
    let mut order = BigUint::from(3u32).pow(2 * m as u32 + 1) * BigUint::from(2 * m + 1);
    for k in 1..n {
        let d = spec.d(k)?;
        let fact: BigUint = (1..=d).map(BigUint::from).product();
        order *= fact / 2u32;
    }
    Ok(order)
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub hits: usize,
    pub folner_size: usize,
    #[serde(with = "serde_ratio")]
    pub density: Rational,
    /// Smallest `m` with `g ∈ L_m`.
    pub m: u64,
    #[serde(with = "serde_ratio")]
    pub lower_bound: Rational,
}

fn check_l_infinity(g: &FreeWord) -> Result<u64> {
    let shift = crate::lamplighter::evaluate_word_w(g).shift();
    if shift != 0 {
        return Err(Error::NotInLInfinity { shift });
    }
    Ok(lamp_radius(g))
}

/// `|{f ∈ F_n : f g f⁻¹ ∈ G_n L_{m_n}}| / |F_n|` for `g ∈ L_∞`.
pub fn conjugation_density(
    spec: &Arc<SequenceSpec>,
    g: &FreeWord,
    n: usize,
    m_n: u64,
    cap: usize,
) -> Result<DensityReport> {
    let m = check_l_infinity(g)?;
    let folner = FolnerSet::build(spec, n, m_n, m, cap)?;
    let gw = folner.window().evaluate(g);
    let hits = folner.count(|f| folner.core_contains(&f.mul(&gw).mul(&f.inverse())));
    let total = folner.len();
    let lower_bound = if m_n >= m {
        Rational::new((2 * (m_n - m) + 1) as i64, (2 * m_n + 1) as i64)
    } else {
        Rational::from_integer(0)
    };
    Ok(DensityReport { hits, folner_size: total, density: Rational::new(hits as i64, total as i64), m, lower_bound })
}

#[derive(Clone, Debug, Serialize)]
pub struct CosoficReport {
    pub n: usize,
    pub m_n: u64,
    pub subgroup_order: usize,
    /// `|H ∩ G_n L_{m_n}|`.
    pub core_intersection: usize,
    /// `|φ_n(H ∩ G_n L_{m_n})|`, the image of `K_n` in `P_n`.
    pub approximant_image: usize,
    pub quotient_order: String,
    pub densities: Vec<CosoficDensity>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CosoficDensity {
    pub word: String,
    pub hits: usize,
    #[serde(with = "serde_ratio")]
    pub p: Rational,
}

/// The approximant `K_n = (H ∩ G_n L_{m_n}) ker φ_n` of `H = ⟨h_gens⟩ ≤ L_∞`
/// and `p_n(g) = |{f ∈ F_n : f g f⁻¹ ∈ H △ K_n}| / |F_n|` for each test word.
pub fn cosofic_approximant(
    spec: &Arc<SequenceSpec>,
    h_gens: &[FreeWord],
    n: usize,
    m_n: u64,
    tests: &[FreeWord],
    cap: usize,
) -> Result<CosoficReport> {
    if m_n == 0 {
        return Err(Error::InvalidArgument("m_n must be at least 1".into()));
    }
    let mut extra = 0;
    for h in h_gens {
        extra = extra.max(check_l_infinity(h)?);
    }
    for g in tests {
        extra = extra.max(lamp_radius(g));
    }
    let folner = FolnerSet::build(spec, n, m_n, extra, cap)?;
    let window = folner.window();
    let h_images: Vec<_> = h_gens.iter().map(|h| window.evaluate(h)).collect();
    let h = closure_enumerate(&window.identity(), &h_images, cap)?;
    let h_set: HashSet<CanonicalElement> = h.iter().cloned().collect();
    let core_part: Vec<&CanonicalElement> = h.iter().filter(|x| folner.core_contains(x)).collect();
    let k_image: HashSet<FiniteQuotientElement> = core_part.iter().map(|x| folner.quotient(x)).collect();

    let densities = tests
        .iter()
        .map(|g| {
            let gw = window.evaluate(g);
            let hits = folner.count(|f| {
                let x = f.mul(&gw).mul(&f.inverse());
                h_set.contains(&x) != k_image.contains(&folner.quotient(&x))
            });
            CosoficDensity { word: g.to_string(), hits, p: Rational::new(hits as i64, folner.len() as i64) }
        })
        .collect();
    Ok(CosoficReport {
        n,
        m_n,
        subgroup_order: h.len(),
        core_intersection: core_part.len(),
        approximant_image: k_image.len(),
        quotient_order: quotient_order(spec, n, m_n)?.to_string(),
        densities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{X, Y};

    fn amenable() -> Arc<SequenceSpec> {
        Arc::new(SequenceSpec::explicit(vec![5, 17, 29, 41, 53], vec![1, 5, 9, 13, 17], true).unwrap())
    }

    fn qualifying() -> Arc<SequenceSpec> {
        Arc::new(SequenceSpec::explicit(vec![37, 41, 53], vec![11, 13, 17], true).unwrap())
    }

    #[test]
    fn degenerate_folner_set() {
        let spec = amenable();
        let f = folner_set(&spec, 1, 0, 100).unwrap();
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn boundary_ratios() {
        let spec = amenable();
        for m in 1..=2 {
            assert_eq!(folner_ratio(&spec, 1, m, X, 1_000_000).unwrap(), Rational::new(1, 2 * m as i64 + 1));
            assert_eq!(folner_ratio(&spec, 1, m, -X, 1_000_000).unwrap(), Rational::new(1, 2 * m as i64 + 1));
            assert_eq!(folner_ratio(&spec, 1, m, Y, 1_000_000).unwrap(), Rational::from_integer(0));
        }
    }

    #[test]
    fn quotient_is_bijective_on_folner_set() {
        let spec = amenable();
        let f = folner_set(&spec, 2, 1, 100_000).unwrap();
        assert_eq!(f.len(), 4860);
        let check = f.quotient_check().unwrap();
        assert!(check.bijective, "{check:?}");
    }

    #[test]
    fn finite_quotient_of_generators() {
        let spec = amenable();
        let a = NeumannElement::alpha(&spec);
        let q = finite_quotient(&a, 3, 2).unwrap();
        assert_eq!(q.coords, vec![spec.generator_images(1).unwrap().0, spec.generator_images(2).unwrap().0]);
        assert_eq!(q.tail.shift(), 1);
        assert!(finite_quotient(&NeumannElement::identity(&spec), 3, 2).unwrap().is_identity());
    }

    #[test]
    fn density_of_identity_and_beta() {
        let spec = qualifying();
        let e = conjugation_density(&spec, &FreeWord::empty(), 1, 2, 100_000).unwrap();
        assert_eq!(e.density, Rational::from_integer(1));
        let b = conjugation_density(&spec, &FreeWord::y(), 1, 2, 100_000).unwrap();
        assert_eq!(b.density, Rational::from_integer(1));
        let l1 = conjugation_density(&spec, &"abA".parse().unwrap(), 1, 3, 100_000).unwrap();
        assert!(l1.density >= Rational::new(5, 7));
        assert!(matches!(
            conjugation_density(&spec, &FreeWord::x(), 1, 2, 100_000),
            Err(Error::NotInLInfinity { shift: 1 })
        ));
    }

    #[test]
    fn cosofic_densities_decrease() {
        let spec = qualifying();
        let h: Vec<FreeWord> = ["Aba", "b", "abA"].iter().map(|s| s.parse().unwrap()).collect();
        let g: FreeWord = "aabAA".parse().unwrap();
        let ps: Vec<Rational> = (1..=3)
            .map(|m| cosofic_approximant(&spec, &h, 1, m, std::slice::from_ref(&g), 100_000).unwrap().densities[0].p)
            .collect();
        assert_eq!(ps, vec![Rational::new(2, 3), Rational::new(1, 5), Rational::from_integer(0)]);
    }

    #[test]
    fn trivial_subgroup_and_shifted_element() {
        let spec = qualifying();
        let r = cosofic_approximant(&spec, &[], 1, 2, &[FreeWord::empty(), "ab".parse().unwrap()], 100_000).unwrap();
        assert_eq!(r.approximant_image, 1);
        assert!(r.densities.iter().all(|d| d.p == Rational::from_integer(0)));
    }
}
