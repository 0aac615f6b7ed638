use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use super::Permutation;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Minimal group interface shared by every element type in the crate.
pub trait GroupElement: Clone + Eq + Hash {
    fn mul(&self, rhs: &Self) -> Self;
    fn inverse(&self) -> Self;
    /// Identity of the group this element lives in.
    fn identity_like(&self) -> Self;
    fn is_identity(&self) -> bool;
}

impl GroupElement for Permutation {
    fn mul(&self, rhs: &Self) -> Self {
        self.compose(rhs).expect("permutations in one group share a degree")
    }
    fn inverse(&self) -> Self {
        Permutation::inverse(self)
    }
    fn identity_like(&self) -> Self {
        Permutation::identity(self.degree())
    }
    fn is_identity(&self) -> bool {
        Permutation::is_identity(self)
    }
}

/// Breadth-first closure of `generators` under right multiplication, starting from
/// `identity`. Output order is BFS order, so deterministic for fixed input order.
pub fn closure_enumerate<T: GroupElement>(identity: &T, generators: &[T], cap: usize) -> Result<Vec<T>> {
    if cap == 0 {
        return Err(Error::InvalidArgument("cap must be at least 1".into()));
    }
    let mut seen: HashSet<T> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(identity.clone());
    order.push(identity.clone());
    queue.push_back(identity.clone());
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                if order.len() == cap {
                    return Err(Error::CapExceeded { cap });
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(order)
}

/// Left regular action of a finite group on its own elements.
pub struct RegularRep<T> {
    elements: Vec<T>,
    index: HashMap<T, usize>,
}

/// Indexes `elements` and checks closure. The image of `g` sends `h_i` to `g h_i`.
pub fn regular_representation<T: GroupElement>(elements: &[T]) -> Result<RegularRep<T>> {
    if elements.is_empty() {
        return Err(Error::InvalidArgument("empty element list".into()));
    }
    let index: HashMap<T, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    if index.len() != elements.len() {
        return Err(Error::InvalidArgument("duplicate elements".into()));
    }
    if !index.contains_key(&elements[0].identity_like()) {
        return Err(Error::NotClosed);
    }
    let rep = RegularRep { elements: elements.to_vec(), index };
    for g in elements {
        for h in elements {
            if !rep.index.contains_key(&g.mul(h)) {
                return Err(Error::NotClosed);
            }
        }
    }
    Ok(rep)
}

impl<T: GroupElement> RegularRep<T> {
    pub fn degree(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn position(&self, g: &T) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn image(&self, g: &T) -> Result<Permutation> {
        let images = self
            .elements
            .iter()
            .map(|h| self.index.get(&g.mul(h)).map(|&i| i as u32).ok_or(Error::NotClosed))
            .collect::<Result<Vec<u32>>>()?;
        Ok(Permutation::from_images_unchecked(images))
    }

    /// Distance of each non-identity image from the identity; all equal to one.
    pub fn non_identity_distances(&self) -> Result<Vec<Rational>> {
        self.elements
            .iter()
            .filter(|g| !g.is_identity())
            .map(|g| {
                let img = self.image(g)?;
                super::hamming_distance(&img, &Permutation::identity(self.degree()))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_with_degree(s, Some(n)).unwrap()
    }

    #[test]
    fn closure_small_cases() {
        let id = Permutation::identity(3);
        assert_eq!(closure_enumerate(&id, std::slice::from_ref(&id), 10).unwrap(), vec![id.clone()]);
        assert_eq!(closure_enumerate(&id, &[p("(1 2 3)", 3)], 10).unwrap().len(), 3);
    }

    #[test]
    fn closure_cap() {
        let id = Permutation::identity(5);
        let gens = [p("(1 2 3 4 5)", 5), p("(1 2 3)", 5)];
        assert_eq!(closure_enumerate(&id, &gens, 100).unwrap().len(), 60);
        assert_eq!(closure_enumerate(&id, &gens, 60).unwrap().len(), 60);
        assert!(matches!(closure_enumerate(&id, &gens, 50), Err(Error::CapExceeded { cap: 50 })));
    }

    #[test]
    fn regular_trivial_and_cyclic() {
        let id = Permutation::identity(3);
        let rep = regular_representation(std::slice::from_ref(&id)).unwrap();
        assert_eq!(rep.image(&id).unwrap(), Permutation::identity(1));

        let c3 = closure_enumerate(&id, &[p("(1 2 3)", 3)], 10).unwrap();
        let rep = regular_representation(&c3).unwrap();
        let img = rep.image(&p("(1 2 3)", 3)).unwrap();
        assert_eq!(img.degree(), 3);
        assert_eq!(img.cycles().len(), 1);
        assert_eq!(img.support_size(), 3);
    }

    #[test]
    fn regular_sym3_is_fixed_point_free() {
        let id = Permutation::identity(3);
        let s3 = closure_enumerate(&id, &[p("(1 2 3)", 3), p("(1 2)", 3)], 10).unwrap();
        let rep = regular_representation(&s3).unwrap();
        for g in &s3 {
            let img = rep.image(g).unwrap();
            if !g.is_identity() {
                assert_eq!(img.support_size(), 6);
            }
        }
        assert!(rep.non_identity_distances().unwrap().iter().all(|d| *d == Rational::from_integer(1)));
    }

    #[test]
    fn regular_rejects_non_group() {
        let id = Permutation::identity(3);
        assert!(matches!(regular_representation(&[id, p("(1 2 3)", 3)]), Err(Error::NotClosed)));
    }
}
