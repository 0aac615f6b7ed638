//! Local embeddings of balls of `G(d, r)` into finite groups: projection onto
//! the first `4l + 1` coordinates, and substitution of the coordinate generators
//! by `ᾱ = (1 2 ... 12l+3)`, `β̄ = (1, 4l+2, 8l+3)`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lamplighter::evaluate_word_w;
use crate::neumann::{NeumannElement, SequenceSpec};
use crate::perm::Permutation;
use crate::words::{ball, FreeWord};

#[derive(Clone, Debug, Serialize)]
pub struct TableEntry {
    pub word: String,
    pub images: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct EmbeddingTable {
    pub words: Vec<FreeWord>,
    pub images: Vec<Vec<Permutation>>,
    /// Number of distinct group elements among `words`.
    pub distinct_elements: usize,
}

impl EmbeddingTable {
    pub fn entries(&self) -> Vec<TableEntry> {
        self.words
            .iter()
            .zip(&self.images)
            .map(|(w, img)| TableEntry { word: w.to_string(), images: img.iter().map(|p| p.to_string()).collect() })
            .collect()
    }

    fn lookup(&self) -> HashMap<&FreeWord, usize> {
        self.words.iter().enumerate().map(|(i, w)| (w, i)).collect()
    }

    /// `image(u v) = image(u) image(v)` whenever `u`, `v` and the reduced `u v`
    /// all lie in the table.
    pub fn is_partial_homomorphism(&self) -> bool {
        let index = self.lookup();
        for (i, u) in self.words.iter().enumerate() {
            for (j, v) in self.words.iter().enumerate() {
                let Some(&k) = index.get(&u.mul(v)) else { continue };
                let product = self.images[i].iter().zip(&self.images[j]).map(|(a, b)| a.compose_unchecked(b));
                if !product.eq(self.images[k].iter().cloned()) {
                    return false;
                }
            }
        }
        true
    }
}

fn check_pairs(table: &mut EmbeddingTable, equal: impl Fn(usize, usize) -> Result<bool>) -> Result<()> {
    let n = table.words.len();
    let mut classes = 0;
    for i in 0..n {
        let mut first_of_class = true;
        for j in 0..n {
            let same_image = table.images[i] == table.images[j];
            let same_element = equal(i, j)?;
            if same_image != same_element {
                let what = if same_image { "injective" } else { "well-defined" };
                return Err(Error::Hypothesis(format!(
                    "embedding is not {what} on `{}` and `{}`",
                    table.words[i], table.words[j]
                )));
            }
            if same_element && j < i {
                first_of_class = false;
            }
        }
        classes += usize::from(first_of_class);
    }
    table.distinct_elements = classes;
    Ok(())
}

/// `w ↦ (π_1(w), ..., π_{4l+1}(w))` on the ball of radius `l`, with injectivity
/// checked against the word problem in `G`.
pub fn projection_embedding(spec: &Arc<SequenceSpec>, l: usize) -> Result<EmbeddingTable> {
    let coords = 4 * l + 1;
    spec.extend_to(coords)?;
    let words = ball(l);
    let elements: Vec<NeumannElement> = words.iter().map(|w| NeumannElement::new(spec, w.clone())).collect();
    let images = elements
        .iter()
        .map(|g| (1..=coords).map(|n| g.coordinate(n)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut table = EmbeddingTable { words, images, distinct_elements: 0 };
    check_pairs(&mut table, |i, j| elements[i].equals(&elements[j]))?;
    Ok(table)
}

/// `(ᾱ, β̄) = ((1 2 ... 12l+3), (1, 4l+2, 8l+3))`.
pub fn substitute_generators(l: usize) -> Result<(Permutation, Permutation)> {
    if l == 0 {
        return Err(Error::InvalidArgument("substitution needs l >= 1".into()));
    }
    let degree = 12 * l + 3;
    Ok((Permutation::long_cycle(degree, degree), Permutation::from_cycles(degree, &[vec![1, 4 * l + 2, 8 * l + 3]])?))
}

fn substitution_qualifies(spec: &SequenceSpec, n: usize, l: usize) -> Result<bool> {
    spec.qualifies(n, 2 * l as u64)
}

/// `π_n(w) ↦ w(ᾱ, β̄)` on the ball of radius `l` at coordinate `n = 4l+1`,
/// checked to be well-defined and injective.
pub fn substitute_embedding(spec: &Arc<SequenceSpec>, l: usize) -> Result<EmbeddingTable> {
    substitute_at(spec, 4 * l + 1, l)
}

fn substitute_at(spec: &Arc<SequenceSpec>, n: usize, l: usize) -> Result<EmbeddingTable> {
    let (abar, bbar) = substitute_generators(l)?;
    if !substitution_qualifies(spec, n, l)? {
        return Err(Error::Hypothesis(format!("coordinate {n} needs r, d - 2r >= {} for substitution", 4 * l + 1)));
    }
    let (alpha, beta) = spec.generator_images(n)?;
    let words = ball(l);
    let source: Vec<Permutation> = words
        .iter()
        .map(|w| w.evaluate(&Permutation::identity(alpha.degree()), &[alpha.clone(), beta.clone()]))
        .collect();
    let images = words
        .iter()
        .map(|w| vec![w.evaluate(&Permutation::identity(abar.degree()), &[abar.clone(), bbar.clone()])])
        .collect();
    let mut table = EmbeddingTable { words, images, distinct_elements: 0 };
    check_pairs(&mut table, |i, j| Ok(source[i] == source[j]))?;
    Ok(table)
}

#[derive(Clone, Debug, Serialize)]
pub struct ThreeWayAgreement {
    pub words_checked: usize,
    pub disagreements: Vec<String>,
}

/// For `|w| <= 2l`: `w(α_n, β_n) = e ⟺ w(ᾱ, β̄) = e ⟺ w(a, b₀) = e` at `n = 4l+1`.
pub fn three_way_agreement(spec: &SequenceSpec, l: usize) -> Result<ThreeWayAgreement> {
    let (abar, bbar) = substitute_generators(l)?;
    let (alpha, beta) = spec.generator_images(4 * l + 1)?;
    let words = ball(2 * l);
    let mut disagreements = Vec::new();
    for w in &words {
        let at_coord = w.evaluate(&Permutation::identity(alpha.degree()), &[alpha.clone(), beta.clone()]).is_identity();
        let at_sub = w.evaluate(&Permutation::identity(abar.degree()), &[abar.clone(), bbar.clone()]).is_identity();
        let in_w = evaluate_word_w(w).is_identity();
        if at_coord != at_sub || at_sub != in_w {
            disagreements.push(w.to_string());
        }
    }
    Ok(ThreeWayAgreement { words_checked: words.len(), disagreements })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoordinateTarget {
    pub coordinate: usize,
    /// `substitution` into `Alt(12l+3)` or `inclusion` into `Alt(d(n))`.
    pub method: &'static str,
    pub group: String,
    pub order: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LefCertificate {
    pub l: usize,
    pub ball_words: usize,
    pub distinct_elements: usize,
    pub injective: bool,
    pub partial_homomorphism: bool,
    pub targets: Vec<CoordinateTarget>,
    /// Order of the product of target groups actually used.
    pub constructed_order: String,
    pub constructed_log2: f64,
    /// `((15l)!)^{4l+1}`.
    pub reference_bound: String,
    pub reference_log2: f64,
    pub table: Vec<TableEntry>,
}

fn half_factorial(d: u64) -> BigUint {
    (1..=d).map(BigUint::from).product::<BigUint>() / 2u32
}

fn log2(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        return (x.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let top = (x >> (bits - 52)).iter_u64_digits().next().unwrap_or(0) as f64;
    top.log2() + (bits - 52) as f64
}

/// Local embedding of the ball of radius `l` into a product of alternating
/// groups: coordinates `n <= 4l+1` clearing `r, d - 2r >= 4l+1` go through the
/// substitution, the rest map into `Alt(d(n))` by inclusion.
pub fn lef_certificate(spec: &Arc<SequenceSpec>, l: usize) -> Result<LefCertificate> {
    if l == 0 {
        return Err(Error::InvalidArgument("certificate needs l >= 1".into()));
    }
    let projection = projection_embedding(spec, l)?;
    let coords = 4 * l + 1;
    let mut targets = Vec::with_capacity(coords);
    let mut columns: Vec<Vec<Permutation>> = Vec::with_capacity(coords);
    let mut order = BigUint::from(1u32);
    for n in 1..=coords {
        if substitution_qualifies(spec, n, l)? {
            let sub = substitute_at(spec, n, l)?;
            columns.push(sub.images.into_iter().map(|mut v| v.remove(0)).collect());
            let degree = 12 * l as u64 + 3;
            let o = half_factorial(degree);
            targets.push(CoordinateTarget {
                coordinate: n,
                method: "substitution",
                group: format!("Alt({degree})"),
                order: o.to_string(),
            });
            order *= o;
        } else {
            columns.push(projection.images.iter().map(|img| img[n - 1].clone()).collect());
            let d = spec.d(n)?;
            let o = half_factorial(d);
            targets.push(CoordinateTarget {
                coordinate: n,
                method: "inclusion",
                group: format!("Alt({d})"),
                order: o.to_string(),
            });
            order *= o;
        }
    }
    let images: Vec<Vec<Permutation>> =
        (0..projection.words.len()).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    let mut table = EmbeddingTable { words: projection.words.clone(), images, distinct_elements: 0 };
    let elements: Vec<NeumannElement> = table.words.iter().map(|w| NeumannElement::new(spec, w.clone())).collect();
    let injective = check_pairs(&mut table, |i, j| elements[i].equals(&elements[j])).is_ok();
    let reference = (1..=15 * l as u64).map(BigUint::from).product::<BigUint>().pow(coords as u32);
    Ok(LefCertificate {
        l,
        ball_words: table.words.len(),
        distinct_elements: projection.distinct_elements,
        injective,
        partial_homomorphism: table.is_partial_homomorphism(),
        targets,
        constructed_log2: log2(&order),
        constructed_order: order.to_string(),
        reference_log2: log2(&reference),
        reference_bound: reference.to_string(),
        table: table.entries(),
    })
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
    fn substitute_generators_at_one() {
        let (a, b) = substitute_generators(1).unwrap();
        assert_eq!(a.to_string(), "(1 2 3 4 5 6 7 8 9 10 11 12 13 14 15)");
        assert_eq!(b.to_string(), "(1 6 11)(15)");
        assert!(substitute_generators(0).is_err());
    }

    #[test]
    fn projection_small_balls() {
        let spec = toy();
        let t0 = projection_embedding(&spec, 0).unwrap();
        assert_eq!((t0.words.len(), t0.distinct_elements), (1, 1));
        let t1 = projection_embedding(&spec, 1).unwrap();
        assert_eq!((t1.words.len(), t1.distinct_elements), (5, 5));
        assert!(t1.is_partial_homomorphism());
    }

    #[test]
    fn projection_needs_enough_coordinates() {
        let spec = Arc::new(SequenceSpec::explicit(vec![5, 7], vec![1, 2], true).unwrap());
        assert!(matches!(projection_embedding(&spec, 1), Err(Error::BeyondHorizon { .. })));
    }

    #[test]
    fn certificate_at_one() {
        let spec = toy();
        let cert = lef_certificate(&spec, 1).unwrap();
        assert!(cert.injective && cert.partial_homomorphism);
        assert_eq!(cert.targets.len(), 5);
        // n = 1, 2 fail r, d - 2r >= 5; n = 3 has r = 4
        let methods: Vec<_> = cert.targets.iter().map(|t| t.method).collect();
        assert_eq!(methods, ["inclusion", "inclusion", "inclusion", "substitution", "substitution"]);
        assert!(cert.reference_log2 > 0.0);
    }

    #[test]
    fn log2_of_powers() {
        assert!((log2(&(BigUint::from(1u32) << 200)) - 200.0).abs() < 1e-9);
        assert!((log2(&BigUint::from(1024u32)) - 10.0).abs() < 1e-9);
    }
}
