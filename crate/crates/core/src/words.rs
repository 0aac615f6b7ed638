//! Reduced words in the free group on two letters `x`, `y`.
//!
//! Text alphabet: `a` = x, `A` = x⁻¹, `b` = y, `B` = y⁻¹. The empty word is `e`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::GroupElement;

/// A letter `±(g + 1)` for basis element `g`.
pub type Letter = i8;

pub const X: Letter = 1;
pub const Y: Letter = 2;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            assert!(l != 0, "0 is not a letter");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { letters: out }
    }

    pub fn letter(l: Letter) -> Self {
        Self::reduce([l])
    }

    pub fn x() -> Self {
        Self::letter(X)
    }

    pub fn y() -> Self {
        Self::letter(Y)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != -w[1])
    }

    pub fn inverse(&self) -> Self {
        Self { letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn mul(&self, rhs: &FreeWord) -> Self {
        Self::reduce(self.letters.iter().chain(&rhs.letters).copied())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(FreeWord::empty(), |acc, _| acc.mul(&base))
    }

    /// `[u, v] = u v u⁻¹ v⁻¹`.
    pub fn commutator(&self, other: &FreeWord) -> Self {
        self.mul(other).mul(&self.inverse()).mul(&other.inverse())
    }

    /// `u self u⁻¹`.
    pub fn conjugate_by(&self, u: &FreeWord) -> Self {
        u.mul(self).mul(&u.inverse())
    }

    /// Exponent sum of one basis letter.
    pub fn exponent_sum(&self, generator: Letter) -> i64 {
        self.letters
            .iter()
            .map(|&l| {
                if l == generator {
                    1
                } else if l == -generator {
                    -1
                } else {
                    0
                }
            })
            .sum()
    }

    /// Homomorphic image under `x_g ↦ assign[g]`; the empty word goes to `identity`.
    pub fn evaluate<T: GroupElement>(&self, identity: &T, assign: &[T]) -> T {
        let inverses: Vec<T> = assign.iter().map(GroupElement::inverse).collect();
        self.letters.iter().fold(identity.clone(), |acc, &l| {
            let g = (l.unsigned_abs() - 1) as usize;
            if l > 0 {
                acc.mul(&assign[g])
            } else {
                acc.mul(&inverses[g])
            }
        })
    }
}

fn letter_char(l: Letter) -> char {
    match l {
        1 => 'a',
        -1 => 'A',
        2 => 'b',
        -2 => 'B',
        _ => '?',
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for &l in &self.letters {
            write!(f, "{}", letter_char(l))?;
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    /// Reduces while parsing; whitespace is ignored, `e` or `1` alone is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "e" || compact == "1" {
            return Ok(FreeWord::empty());
        }
        let letters = compact
            .chars()
            .map(|c| match c {
                'a' => Ok(X),
                'A' => Ok(-X),
                'b' => Ok(Y),
                'B' => Ok(-Y),
                _ => Err(Error::Parse(format!("bad letter `{c}` in word `{s}`"))),
            })
            .collect::<Result<Vec<Letter>>>()?;
        Ok(FreeWord::reduce(letters))
    }
}

const ALPHABET: [Letter; 4] = [X, -X, Y, -Y];

/// All reduced words of length at most `radius`, in length-lexicographic order
/// with letters ordered `a < A < b < B`.
pub fn ball(radius: usize) -> Vec<FreeWord> {
    let mut out = vec![FreeWord::empty()];
    let mut frontier = vec![FreeWord::empty()];
    for _ in 0..radius {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for w in &frontier {
            for &l in &ALPHABET {
                if w.letters.last() == Some(&-l) {
                    continue;
                }
                let mut letters = w.letters.clone();
                letters.push(l);
                next.push(FreeWord { letters });
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Uniformly random reduced word of exactly `len` letters.
pub fn random_word<R: rand::Rng + ?Sized>(rng: &mut R, len: usize) -> FreeWord {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = ALPHABET[rng.gen_range(0..ALPHABET.len())];
        if letters.last() != Some(&-l) {
            letters.push(l);
        }
    }
    FreeWord { letters }
}

/// Closed-form size of the radius-`l` ball in the rank-2 free group.
pub fn ball_size(radius: usize) -> usize {
    1 + (1..=radius).map(|i| 4 * 3usize.pow(i as u32 - 1)).sum::<usize>()
}

/// A finite set of relators (E or R). Exact duplicates are dropped on insertion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationSet {
    words: Vec<FreeWord>,
}

impl RelationSet {
    pub fn new<I: IntoIterator<Item = FreeWord>>(words: I) -> Self {
        let mut set = Self::default();
        for w in words {
            set.insert(w);
        }
        set
    }

    pub fn insert(&mut self, w: FreeWord) {
        if !self.words.contains(&w) {
            self.words.push(w);
        }
    }

    pub fn words(&self) -> &[FreeWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// ‖E‖ = Σ |r|.
    pub fn norm(&self) -> usize {
        self.words.iter().map(FreeWord::len).sum()
    }

    /// One word per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let words = text
            .lines()
            .map(|line| line.split('#').next().unwrap_or("").trim())
            .filter(|line| !line.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<FreeWord>>>()?;
        Ok(Self::new(words))
    }
}

pub fn set_norm(e: &RelationSet) -> usize {
    e.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use std::collections::HashSet;

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(w("aA"), FreeWord::empty());
        assert_eq!(w("abBa"), w("aa"));
        assert_eq!(w("aa").to_string(), "aa");
        assert_eq!(FreeWord::empty().to_string(), "e");
        assert!(w("aBAb").is_reduced());
        assert!("axb".parse::<FreeWord>().is_err());
    }

    #[test]
    fn evaluate_basics() {
        let id = Permutation::identity(3);
        let t = Permutation::parse_with_degree("(1 2)", Some(3)).unwrap();
        assert_eq!(FreeWord::empty().evaluate(&id, &[t.clone(), id.clone()]), id);
        assert_eq!(w("a").evaluate(&id, &[t.clone(), id.clone()]), t);
    }

    #[test]
    fn ball_counts() {
        assert_eq!(ball(0).len(), 1);
        assert_eq!(ball(1).len(), 5);
        assert_eq!(ball(2).len(), 17);
        for l in 0..=8 {
            let b = ball(l);
            assert_eq!(b.len(), ball_size(l));
            let distinct: HashSet<_> = b.iter().collect();
            assert_eq!(distinct.len(), b.len());
            assert!(b.iter().all(|x| x.is_reduced() && x.len() <= l));
        }
    }

    #[test]
    fn norms() {
        assert_eq!(RelationSet::default().norm(), 0);
        assert_eq!(RelationSet::new([w("abAB")]).norm(), 4);
        assert_eq!(RelationSet::new([w("aaa"), w("abAB")]).norm(), 7);
    }

    #[test]
    fn relation_file_parsing() {
        let text = "# commutator\nabAB\n\naaa   # cube\nabAB\n";
        let set = RelationSet::parse(text).unwrap();
        assert_eq!(set.words(), &[w("abAB"), w("aaa")]);
        assert_eq!(set.norm(), 7);
    }

    #[test]
    fn commutator_word() {
        assert_eq!(FreeWord::x().commutator(&FreeWord::y()), w("abAB"));
        assert_eq!(FreeWord::y().conjugate_by(&FreeWord::x()), w("abA"));
        assert_eq!(w("abAb").exponent_sum(X), 0);
        assert_eq!(w("abAb").exponent_sum(Y), 2);
    }
}
