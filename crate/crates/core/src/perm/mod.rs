//! Permutations of `{1..N}`, the normalised Hamming metric and permutation groups.
//!
//! Composition convention: `(s * t)(w) = s(t(w))`, the right factor acts first.
//! Points are 1-based in all text I/O and 0-based internally.

mod closure;
mod group;

pub use closure::{closure_enumerate, regular_representation, GroupElement, RegularRep};
pub use group::PermGroup;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!(degree >= 1, "degree must be positive");
        Self { images: (0..degree as u32).collect() }
    }

    /// Builds from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::Parse("permutation of degree 0".into()));
        }
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let i = i as usize;
            if i >= images.len() || seen[i] {
                return Err(Error::Parse("images do not form a bijection".into()));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Self { images }
    }

    /// Builds from 1-based cycles on `degree` points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Parse("permutation of degree 0".into()));
        }
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p == 0 || p > degree {
                    return Err(Error::Parse(format!("point {p} outside 1..={degree}")));
                }
                if touched[p - 1] {
                    return Err(Error::Parse(format!("point {p} repeated in cycle form")));
                }
                touched[p - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u32;
            }
        }
        Ok(Self { images })
    }

    /// The cycle `(1 2 ... len)` on `degree` points.
    pub fn long_cycle(degree: usize, len: usize) -> Self {
        let cycle: Vec<usize> = (1..=len).collect();
        Self::from_cycles(degree, &[cycle]).expect("valid cycle")
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based image table.
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn compose(&self, t: &Permutation) -> Result<Permutation> {
        check_degree(self, t)?;
        Ok(self.compose_unchecked(t))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, t: &Permutation) -> Permutation {
        Permutation { images: t.images.iter().map(|&i| self.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Permutation::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose_unchecked(&base);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Number of non-fixed points.
    pub fn support_size(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &j)| i as u32 != j).count()
    }

    /// Number of points where `self` and `t` disagree.
    pub fn mismatches(&self, t: &Permutation) -> usize {
        self.images.iter().zip(&t.images).filter(|(a, b)| a != b).count()
    }

    pub fn is_even(&self) -> bool {
        // parity = (degree - number of cycles) mod 2
        let cycles = self.cycles_with_fixed().len();
        (self.degree() - cycles).is_multiple_of(2)
    }

    /// Disjoint cycles (1-based), omitting fixed points, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycles_with_fixed().into_iter().filter(|c| c.len() > 1).collect()
    }

    fn cycles_with_fixed(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Copy acting on `degree` points, fixing the added ones.
    pub fn extended(&self, degree: usize) -> Permutation {
        assert!(degree >= self.degree());
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..degree as u32);
        Permutation { images }
    }

    /// Image-line form `"2 1 3"`.
    pub fn to_image_line(&self) -> String {
        let parts: Vec<String> = self.images.iter().map(|i| (i + 1).to_string()).collect();
        parts.join(" ")
    }

    /// Parses image-line or cycle form. Cycle form takes the largest mentioned point
    /// as the degree unless `degree` is given.
    pub fn parse_with_degree(s: &str, degree: Option<usize>) -> Result<Permutation> {
        let s = s.trim();
        if s.starts_with('(') {
            let cycles = parse_cycles(s)?;
            let max = cycles.iter().flatten().copied().max().unwrap_or(1);
            let n = degree.unwrap_or(max);
            if n < max {
                return Err(Error::Parse(format!("point {max} exceeds degree {n}")));
            }
            Permutation::from_cycles(n, &cycles)
        } else {
            let images = s
                .split_whitespace()
                .map(|t| match t.parse::<u32>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(Error::Parse(format!("bad image `{t}`"))),
                })
                .collect::<Result<Vec<u32>>>()?;
            let p = Permutation::from_images(images)?;
            match degree {
                Some(n) if n > p.degree() => Ok(p.extended(n)),
                Some(n) if n < p.degree() => Err(Error::DegreeMismatch { left: p.degree(), right: n }),
                _ => Ok(p),
            }
        }
    }
}

fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body_start = rest.strip_prefix('(').ok_or_else(|| Error::Parse(format!("expected `(` in `{s}`")))?;
        let close = body_start.find(')').ok_or_else(|| Error::Parse(format!("unclosed cycle in `{s}`")))?;
        let body = &body_start[..close];
        let cycle = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad point `{t}`"))))
            .collect::<Result<Vec<usize>>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = body_start[close + 1..].trim_start();
    }
    Ok(cycles)
}

pub(crate) fn check_degree(s: &Permutation, t: &Permutation) -> Result<()> {
    if s.degree() != t.degree() {
        return Err(Error::DegreeMismatch { left: s.degree(), right: t.degree() });
    }
    Ok(())
}

/// Normalised Hamming distance `|{w : s(w) != t(w)}| / N`.
pub fn hamming_distance(s: &Permutation, t: &Permutation) -> Result<Rational> {
    check_degree(s, t)?;
    Ok(Rational::new(s.mismatches(t) as i64, s.degree() as i64))
}

/// Cycle form. A fixed top point is written as a singleton cycle so the
/// degree survives a round trip; the identity on one point is `(1)`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        for c in self.cycles() {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        if self.images[n - 1] as usize == n - 1 {
            write!(f, "({n})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Permutation::parse_with_degree(s, None)
    }
}

/// All permutations of `degree` points in lexicographic order of image tables.
pub fn all_permutations(degree: usize) -> Vec<Permutation> {
    let mut current: Vec<u32> = (0..degree as u32).collect();
    let mut out = vec![Permutation { images: current.clone() }];
    // standard next-permutation
    loop {
        let Some(i) = (0..degree.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return out;
        };
        let j = (i + 1..degree).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
        out.push(Permutation { images: current.clone() });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_with_degree(s, Some(n)).unwrap()
    }

    #[test]
    fn compose_identity_and_involution() {
        let id = Permutation::identity(3);
        let t = p("(1 2)", 3);
        assert_eq!(id.compose(&t).unwrap(), t);
        assert!(t.compose(&t).unwrap().is_identity());
    }

    #[test]
    fn compose_right_factor_first() {
        // (1 2 3) * (1 2): 1 -> 2 -> 3, 2 -> 1 -> 2, 3 -> 3 -> 1
        let s = p("(1 2 3)", 3);
        let t = p("(1 2)", 3);
        assert_eq!(s.compose(&t).unwrap(), p("(1 3)", 3));
    }

    #[test]
    fn compose_degree_mismatch() {
        let err = Permutation::identity(3).compose(&Permutation::identity(4));
        assert!(matches!(err, Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn hamming_values() {
        let id5 = Permutation::identity(5);
        assert_eq!(hamming_distance(&id5, &id5).unwrap(), Rational::from_integer(0));
        assert_eq!(hamming_distance(&p("(1 2)", 5), &id5).unwrap(), Rational::new(2, 5));
        assert!(hamming_distance(&id5, &Permutation::identity(4)).is_err());
    }

    #[test]
    fn support_sizes() {
        assert_eq!(Permutation::identity(4).support_size(), 0);
        assert_eq!(p("(1 2 3)", 3).support_size(), 3);
        assert_eq!(p("(1 2)(3 4 5)", 7).support_size(), 5);
    }

    #[test]
    fn text_forms() {
        let a: Permutation = "2 1 3".parse().unwrap();
        assert_eq!(a, p("(1 2)", 3));
        assert_eq!(a.to_string(), "(1 2)(3)");
        assert_eq!(p("(1 2 3)(4 5)", 5).to_string(), "(1 2 3)(4 5)");
        assert_eq!(Permutation::identity(1).to_string(), "(1)");
        assert_eq!(Permutation::identity(4).to_string(), "(4)");
        let round: Permutation = a.to_string().parse().unwrap();
        assert_eq!(round, a);
        assert!("(1 2)(2 3)".parse::<Permutation>().is_err());
        assert!("1 1 2".parse::<Permutation>().is_err());
        assert!("(1 2".parse::<Permutation>().is_err());
    }

    #[test]
    fn parity() {
        assert!(p("(1 2 3)", 5).is_even());
        assert!(!p("(1 2)", 5).is_even());
        assert!(Permutation::long_cycle(7, 7).is_even());
    }

    #[test]
    fn enumerate_sym4() {
        let all = all_permutations(4);
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all_permutations(1).len(), 1);
    }

    #[test]
    fn pow_and_inverse() {
        let c = Permutation::long_cycle(5, 5);
        assert!(c.pow(5).is_identity());
        assert_eq!(c.pow(-1), c.inverse());
        assert!(c.compose(&c.inverse()).unwrap().is_identity());
    }
}
