use std::sync::Arc;

use proptest::prelude::*;

use stabgrowth::lamplighter::{evaluate_word_w, evaluate_word_wm};
use stabgrowth::neumann::{NeumannElement, SequenceSpec};
use stabgrowth::perm::{hamming_distance, Permutation};
use stabgrowth::seqgen::is_prime;
use stabgrowth::stability::{replay, sample_and_substitute, PermTuple};
use stabgrowth::words::{FreeWord, RelationSet};
use stabgrowth::Rational;

fn letters(max: usize) -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(prop::sample::select(vec![1i8, -1, 2, -2]), 0..max)
}

fn word(max: usize) -> impl Strategy<Value = FreeWord> {
    letters(max).prop_map(FreeWord::reduce)
}

fn permutation(n: u32) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<u32>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
}

fn toy() -> Arc<SequenceSpec> {
    Arc::new(SequenceSpec::explicit(vec![5, 7, 13, 37, 61], vec![1, 2, 4, 11, 20], true).unwrap())
}

proptest! {
    #[test]
    fn reduce_is_idempotent(ls in letters(30)) {
        let w = FreeWord::reduce(ls);
        prop_assert!(w.is_reduced());
        prop_assert_eq!(FreeWord::reduce(w.letters().iter().copied()), w.clone());
        prop_assert_eq!(w.to_string().parse::<FreeWord>().unwrap(), w);
    }

    #[test]
    fn word_inverse_cancels(w in word(20)) {
        prop_assert!(w.mul(&w.inverse()).is_empty());
        prop_assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn evaluation_is_a_homomorphism(u in word(12), v in word(12), x in permutation(6), y in permutation(6)) {
        let id = Permutation::identity(6);
        let assign = [x, y];
        let uv = u.mul(&v).evaluate(&id, &assign);
        prop_assert_eq!(uv, u.evaluate(&id, &assign).compose(&v.evaluate(&id, &assign)).unwrap());
    }

    #[test]
    fn hamming_is_bi_invariant(s in permutation(8), t in permutation(8), u in permutation(8)) {
        let d = hamming_distance(&s, &t).unwrap();
        prop_assert_eq!(hamming_distance(&u.compose(&s).unwrap(), &u.compose(&t).unwrap()).unwrap(), d);
        prop_assert_eq!(hamming_distance(&s.compose(&u).unwrap(), &t.compose(&u).unwrap()).unwrap(), d);
        prop_assert!(d <= hamming_distance(&s, &u).unwrap() + hamming_distance(&u, &t).unwrap());
    }

    #[test]
    fn lamplighter_is_associative(u in word(10), v in word(10), w in word(10)) {
        let (a, b, c) = (evaluate_word_w(&u), evaluate_word_w(&v), evaluate_word_w(&w));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inverse()).is_identity());
        prop_assert_eq!(evaluate_word_w(&u.mul(&v)), a.mul(&b));
    }

    #[test]
    fn finite_lamplighter_is_associative(u in word(10), v in word(10), w in word(10), m in 1usize..4) {
        let (a, b, c) = (evaluate_word_wm(&u, m), evaluate_word_wm(&v, m), evaluate_word_wm(&w, m));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inverse()).is_identity());
    }

    #[test]
    fn neumann_coordinates_multiply(u in word(4), v in word(4), n in 1usize..=5) {
        let spec = toy();
        let (g, h) = (NeumannElement::new(&spec, u), NeumannElement::new(&spec, v));
        let gh = g.mul(&h).unwrap();
        prop_assert_eq!(
            gh.coordinate(n).unwrap(),
            g.coordinate(n).unwrap().compose(&h.coordinate(n).unwrap()).unwrap()
        );
        prop_assert_eq!(gh.tau().clone(), g.tau().mul(h.tau()));
        prop_assert!(g.mul(&g.inverse()).unwrap().is_identity().unwrap());
    }

    #[test]
    fn tester_witnesses_replay(x in permutation(7), y in permutation(7), seed in any::<u64>()) {
        let rho = PermTuple::new(x, y).unwrap();
        let e = RelationSet::new(["abAB".parse().unwrap(), "aaa".parse().unwrap()]);
        let v = sample_and_substitute(&rho, &e, Rational::new(1, 4), 0.9, seed).unwrap();
        match &v.witness {
            Some(w) => prop_assert!(replay(&rho, w).unwrap()),
            None => prop_assert!(v.passed()),
        }
        if rho.is_solution(&e) {
            prop_assert!(v.passed());
        }
    }

    #[test]
    fn miller_rabin_matches_trial_division(n in 0u64..2_000_000) {
        let trial = n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0);
        prop_assert_eq!(is_prime(n), trial);
    }
}
