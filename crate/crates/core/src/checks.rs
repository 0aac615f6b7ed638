//! Named verification checks run by `stabgrowth verify-paper`.
//!
//! Each check exercises one finite statement about the constructions in this
//! crate, on fixed small instances or on a caller-supplied sequence spec.
//! Checks whose enumeration does not fit the cap report `skip`, not `fail`.

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lamplighter::{evaluate_word_w, evaluate_word_wm, LamplighterElement};
use crate::lef::{lef_certificate, projection_embedding, substitute_embedding, three_way_agreement};
use crate::neumann::{
    conjugation_density, coordinate_group_order, coordinate_lm_order, cosofic_approximant, folner_set, lm_elements_in,
    NeumannElement, SequenceSpec, Window,
};
use crate::perm::{all_permutations, closure_enumerate, regular_representation, PermGroup, Permutation};
use crate::rational::Rational;
use crate::registry::Registry;
use crate::seqgen::{generate, verify_sequence, GrowthTarget, DEFAULT_C};
use crate::stability::{
    defect_solvers, global_defect, global_defect_with, is_almost_solution, local_defect, pad_block_solution,
    regular_lift, replay, sample_and_substitute, sofic_check, stability_cost, PartialTable, PermTuple,
};
use crate::words::{ball, ball_size, random_word, FreeWord, RelationSet, X, Y};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

type CheckFn = fn(&CheckContext) -> Result<(Status, String)>;

pub struct CheckContext {
    pub spec: Arc<SequenceSpec>,
    pub cap: usize,
    pub seed: u64,
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, ctx: &CheckContext) -> Result<(Status, String)>;
}

struct FnCheck {
    name: &'static str,
    run: CheckFn,
}

impl Check for FnCheck {
    fn name(&self) -> &'static str {
        self.name
    }
    fn run(&self, ctx: &CheckContext) -> Result<(Status, String)> {
        (self.run)(ctx)
    }
}

fn verdict(ok: bool, detail: impl Into<String>) -> Result<(Status, String)> {
    Ok((if ok { Status::Pass } else { Status::Fail }, detail.into()))
}

fn skip(detail: impl Into<String>) -> Result<(Status, String)> {
    Ok((Status::Skip, detail.into()))
}

/// Turns enumeration-size and horizon errors into skips.
fn soften(r: Result<(Status, String)>) -> Result<(Status, String)> {
    match r {
        Err(e @ (Error::CapExceeded { .. } | Error::HorizonInsufficient { .. } | Error::BeyondHorizon { .. })) => {
            skip(e.to_string())
        }
        other => other,
    }
}

fn perm(s: &str, n: usize) -> Permutation {
    Permutation::parse_with_degree(s, Some(n)).expect("valid literal")
}

fn commutator() -> RelationSet {
    RelationSet::new([FreeWord::x().commutator(&FreeWord::y())])
}

fn random_tuple(rng: &mut ChaCha8Rng, n: usize) -> PermTuple {
    let mut shuffled = || {
        let mut v: Vec<u32> = (0..n as u32).collect();
        for i in (1..n).rev() {
            v.swap(i, rng.gen_range(0..=i));
        }
        Permutation::from_images(v).expect("shuffle is a bijection")
    };
    let x = shuffled();
    let y = shuffled();
    PermTuple::new(x, y).expect("equal degrees")
}

fn metric_axioms(_: &CheckContext) -> Result<(Status, String)> {
    let all = all_permutations(4);
    let mut triples = 0;
    for r in &all {
        for s in &all {
            for t in &all {
                let d = s.mismatches(t);
                let left = r.compose(s)?.mismatches(&r.compose(t)?);
                let right = s.compose(r)?.mismatches(&t.compose(r)?);
                let triangle = d <= s.mismatches(r) + r.mismatches(t);
                if d != left || d != right || !triangle || (d == 0) != (s == t) {
                    return verdict(false, format!("violated at {r}, {s}, {t}"));
                }
                triples += 1;
            }
        }
    }
    verdict(true, format!("{triples} triples in Sym(4)"))
}

fn group_order_vs_closure(_: &CheckContext) -> Result<(Status, String)> {
    let cases = [
        vec![perm("(1 2 3 4 5)", 5), perm("(1 2 3)", 5)],
        vec![perm("(1 2 3 4 5 6 7)", 7), perm("(1 3 5)", 7)],
        vec![perm("(1 2 3 4)", 4), perm("(1 2)", 4)],
        vec![perm("(1 2 3 4 5 6)", 6), perm("(1 6)(2 5)(3 4)", 6)],
        vec![perm("(1 2)(3 4)", 6), perm("(5 6)", 6)],
    ];
    let mut sizes = Vec::new();
    for gens in cases {
        let group = PermGroup::from_generators(gens.clone())?;
        let closure = closure_enumerate(&Permutation::identity(group.degree()), &gens, 5000)?;
        if group.order() != BigUint::from(closure.len()) {
            return verdict(false, format!("order {} but closure {}", group.order(), closure.len()));
        }
        sizes.push(closure.len().to_string());
    }
    verdict(true, format!("orders {}", sizes.join(", ")))
}

fn regular_distance_one(_: &CheckContext) -> Result<(Status, String)> {
    let groups = [vec![perm("(1 2 3)", 3), perm("(1 2)", 3)], vec![perm("(1 2 3 4 5)", 5), perm("(1 2 3)", 5)]];
    let mut count = 0;
    for gens in groups {
        let elements = closure_enumerate(&Permutation::identity(gens[0].degree()), &gens, 1000)?;
        let rep = regular_representation(&elements)?;
        let distances = rep.non_identity_distances()?;
        if distances.iter().any(|d| *d != Rational::from_integer(1)) {
            return verdict(false, "a regular image has a fixed point");
        }
        count += distances.len();
    }
    verdict(true, format!("{count} non-identity images at distance 1"))
}

fn evaluation_homomorphism(_: &CheckContext) -> Result<(Status, String)> {
    let words = ball(2);
    let all = all_permutations(4);
    let id = Permutation::identity(4);
    for sx in &all {
        for sy in &all {
            let assign = [sx.clone(), sy.clone()];
            let values: Vec<Permutation> = words.iter().map(|w| w.evaluate(&id, &assign)).collect();
            for (u, vu) in words.iter().zip(&values) {
                for (v, vv) in words.iter().zip(&values) {
                    if u.mul(v).evaluate(&id, &assign) != vu.compose(vv)? {
                        return verdict(false, format!("{u} * {v} at ({sx}, {sy})"));
                    }
                }
            }
        }
    }
    verdict(true, format!("{} word pairs over Sym(4)^2", words.len() * words.len()))
}

fn ball_cardinality(_: &CheckContext) -> Result<(Status, String)> {
    for l in 0..=8 {
        let b = ball(l);
        let distinct: HashSet<&FreeWord> = b.iter().collect();
        if b.len() != ball_size(l) || distinct.len() != b.len() || !b.iter().all(FreeWord::is_reduced) {
            return verdict(false, format!("radius {l}"));
        }
    }
    verdict(true, format!("radii 0..=8, largest {}", ball_size(8)))
}

fn lamplighter_projection(_: &CheckContext) -> Result<(Status, String)> {
    let words = ball(6);
    for m in 1..=3 {
        for w in &words {
            if evaluate_word_w(w).project_finite(m) != evaluate_word_wm(w, m) {
                return verdict(false, format!("{w} at m = {m}"));
            }
        }
    }
    verdict(true, format!("{} words, m = 1, 2, 3", words.len()))
}

fn lamplighter_associativity(ctx: &CheckContext) -> Result<(Status, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let sample = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(0..=8);
        evaluate_word_w(&random_word(rng, len))
    };
    for _ in 0..1000 {
        let (u, v, w) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
        if u.mul(&v).mul(&w) != u.mul(&v.mul(&w)) {
            return verdict(false, format!("({u}, {v}, {w})"));
        }
    }
    let a_b0_ainv = LamplighterElement::a().mul(&LamplighterElement::b(0)).mul(&LamplighterElement::a().inverse());
    verdict(a_b0_ainv == LamplighterElement::b(1), "1000 random triples; a b0 a^-1 = b1")
}

fn coordinate_generation(ctx: &CheckContext) -> Result<(Status, String)> {
    let mut checked = Vec::new();
    for n in 1..=ctx.spec.horizon() {
        let d = ctx.spec.d(n)?;
        if d > 37 {
            continue;
        }
        let expected = (1..=d).map(BigUint::from).product::<BigUint>() / 2u32;
        if coordinate_group_order(&ctx.spec, n)? != expected {
            return verdict(false, format!("coordinate {n} (d = {d}) generates a proper subgroup"));
        }
        checked.push(d.to_string());
    }
    if checked.is_empty() {
        return skip("no coordinate with d <= 37");
    }
    verdict(true, format!("full alternating group for d = {}", checked.join(", ")))
}

fn short_word_transfer(ctx: &CheckContext) -> Result<(Status, String)> {
    let words = ball(4);
    let mut pairs = 0;
    for n in 1..=ctx.spec.horizon() {
        let (alpha, beta) = ctx.spec.generator_images(n)?;
        let id = Permutation::identity(alpha.degree());
        for w in &words {
            if !ctx.spec.qualifies(n, w.len() as u64)? {
                continue;
            }
            let at_coord = w.evaluate(&id, &[alpha.clone(), beta.clone()]).is_identity();
            if at_coord != evaluate_word_w(w).is_identity() {
                return verdict(false, format!("{w} at coordinate {n}"));
            }
            pairs += 1;
        }
    }
    verdict(true, format!("{pairs} (word, coordinate) pairs"))
}

fn element_homomorphism(ctx: &CheckContext) -> Result<(Status, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let horizon = ctx.spec.horizon().min(6);
    for _ in 0..200 {
        let lu = rng.gen_range(0..=5);
        let lv = rng.gen_range(0..=10 - lu);
        let u = NeumannElement::new(&ctx.spec, random_word(&mut rng, lu));
        let v = NeumannElement::new(&ctx.spec, random_word(&mut rng, lv));
        let uv = u.mul(&v)?;
        for n in 1..=horizon {
            if uv.coordinate(n)? != u.coordinate(n)?.compose(&v.coordinate(n)?)? {
                return verdict(false, format!("coordinate {n} on {} * {}", u.word(), v.word()));
            }
        }
        if *uv.tau() != u.tau().mul(v.tau()) {
            return verdict(false, format!("tau on {} * {}", u.word(), v.word()));
        }
    }
    verdict(true, format!("200 random pairs, coordinates 1..={horizon} and tau"))
}

fn word_problem_soundness(ctx: &CheckContext) -> Result<(Status, String)> {
    soften((|| {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let mut trivial = 0;
        for i in 0..200 {
            // mix in relators so that some words are trivial
            let w = match i % 4 {
                0 => random_word(&mut rng, 3).mul(&"bbb".parse()?).mul(&random_word(&mut rng, 3).inverse()),
                _ => {
                    let len = rng.gen_range(0..=6);
                    random_word(&mut rng, len)
                }
            };
            let g = NeumannElement::new(&ctx.spec, w.clone());
            let threshold = ctx.spec.threshold(w.len() as u64)?;
            let upto = (2 * threshold).min(ctx.spec.horizon().max(threshold));
            let mut direct = g.tau().is_identity();
            for n in 1..=upto {
                direct &= g.coordinate(n)?.is_identity();
            }
            let decided = g.is_identity()?;
            if decided != direct {
                return verdict(false, format!("{w}: decided {decided}, direct {direct}"));
            }
            trivial += usize::from(decided);
        }
        verdict(true, format!("200 words ({trivial} trivial)"))
    })())
}

fn lamp_subgroups(ctx: &CheckContext) -> Result<(Status, String)> {
    let spec = &ctx.spec;
    let small = (1..=spec.horizon()).take_while(|&n| spec.d(n).is_ok_and(|d| d <= 64)).count();
    let mut done = Vec::new();
    for m in 0..=2u64 {
        let faithful = match spec.threshold(m) {
            Ok(t) => t - 1,
            Err(_) => break,
        };
        let window = Window::new(spec, faithful.max(small))?;
        let elements = match lm_elements_in(&window, m, ctx.cap) {
            Ok(e) => e,
            Err(Error::CapExceeded { .. }) => break,
            Err(e) => return Err(e),
        };
        for l in &elements {
            for (k, p) in l.coords().iter().enumerate() {
                if p.support_size() as u64 > 6 * m + 3 {
                    return verdict(
                        false,
                        format!("support {} > {} at coordinate {}", p.support_size(), 6 * m + 3, k + 1),
                    );
                }
                if spec.qualifies(k + 1, m)? && p.is_identity() != l.tail().is_identity() {
                    return verdict(false, format!("kernel mismatch at coordinate {} for m = {m}", k + 1));
                }
            }
        }
        done.push(format!("|L_{m}| = {}", elements.len()));
    }
    if done.is_empty() {
        return skip("no L_m enumerable");
    }
    verdict(true, done.join(", "))
}

fn lamp_image_growth(ctx: &CheckContext) -> Result<(Status, String)> {
    let d = ctx.spec.d(1)?;
    if d > 37 {
        return skip(format!("d(1) = {d} too large"));
    }
    let bound = ((d as f64) * (d as f64).ln() / 2f64.ln()).ceil() as u64;
    let full = (1..=d).map(BigUint::from).product::<BigUint>() / 2u32;
    let mut prev = BigUint::from(0u32);
    let mut reached = None;
    for m in 0..=bound {
        let order = coordinate_lm_order(&ctx.spec, 1, m)?;
        if order < prev {
            return verdict(false, format!("|pi_1(L_{m})| decreased"));
        }
        if order == full {
            // L_m grows with m, so the image stays full from here on
            reached = Some(m);
            break;
        }
        prev = order;
    }
    match reached {
        Some(m) => verdict(true, format!("full Alt({d}) from m = {m}, bound {bound}")),
        None => verdict(false, format!("Alt({d}) not reached by m = {bound}")),
    }
}

fn folner_boundary(ctx: &CheckContext) -> Result<(Status, String)> {
    let mut done = Vec::new();
    for m in 1..=2u64 {
        let folner = match folner_set(&ctx.spec, 1, m, ctx.cap) {
            Ok(f) => f,
            Err(Error::CapExceeded { .. } | Error::HorizonInsufficient { .. }) => break,
            Err(e) => return Err(e),
        };
        let w = folner.window();
        let expect = Rational::new(1, 2 * m as i64 + 1);
        let ra = folner.boundary_ratio(&w.evaluate(&FreeWord::x()));
        let rai = folner.boundary_ratio(&w.evaluate(&FreeWord::letter(-X)));
        let rb = folner.boundary_ratio(&w.evaluate(&FreeWord::y()));
        let rbi = folner.boundary_ratio(&w.evaluate(&FreeWord::letter(-Y)));
        let zero = Rational::from_integer(0);
        if ra != expect || rai > expect || rb != zero || rbi != zero {
            return verdict(false, format!("m = {m}: alpha {ra}, alpha^-1 {rai}, beta {rb}"));
        }
        done.push(format!("m = {m}: 1/{}", 2 * m + 1));
    }
    if done.is_empty() {
        return skip("no Folner set within cap");
    }
    verdict(true, done.join(", "))
}

fn quotient_bijection(ctx: &CheckContext) -> Result<(Status, String)> {
    let mut done = Vec::new();
    for (n, m) in [(1usize, 1u64), (1, 2), (2, 1)] {
        match ctx.spec.threshold(m) {
            Ok(t) if t <= n => {}
            _ => continue,
        }
        let folner = match folner_set(&ctx.spec, n, m, ctx.cap) {
            Ok(f) => f,
            Err(Error::CapExceeded { .. }) => continue,
            Err(e) => return Err(e),
        };
        let check = folner.quotient_check()?;
        if !check.bijective {
            return verdict(false, format!("n = {n}, m = {m}: {check:?}"));
        }
        done.push(format!("(n, m) = ({n}, {m}): |F| = {}", check.folner_size));
    }
    if done.is_empty() {
        return skip("no parameters with threshold(m) <= n within cap");
    }
    verdict(true, done.join("; "))
}

fn conjugation_bound(ctx: &CheckContext) -> Result<(Status, String)> {
    let words: Vec<FreeWord> =
        ["e", "b", "abA", "aabAA", "AbaaabAA"].iter().map(|s| s.parse()).collect::<Result<_>>()?;
    let mut done = 0;
    for m_n in 1..=3u64 {
        for g in &words {
            let report = match conjugation_density(&ctx.spec, g, 1, m_n, ctx.cap) {
                Ok(r) => r,
                Err(Error::CapExceeded { .. } | Error::HorizonInsufficient { .. }) => continue,
                Err(e) => return Err(e),
            };
            if report.density < report.lower_bound {
                return verdict(false, format!("{g} at m_n = {m_n}: {} < {}", report.density, report.lower_bound));
            }
            done += 1;
        }
    }
    if done == 0 {
        return skip("no Folner set within cap");
    }
    verdict(true, format!("{done} (g, m_n) pairs meet the lower bound"))
}

fn cosofic_bound(ctx: &CheckContext) -> Result<(Status, String)> {
    let h: Vec<FreeWord> = ["Aba", "b", "abA"].iter().map(|s| s.parse()).collect::<Result<_>>()?;
    let g: FreeWord = "aabAA".parse()?;
    let mut values = Vec::new();
    for m_n in 1..=3u64 {
        let (report, density) = match (
            cosofic_approximant(&ctx.spec, &h, 1, m_n, std::slice::from_ref(&g), ctx.cap),
            conjugation_density(&ctx.spec, &g, 1, m_n, ctx.cap),
        ) {
            (Ok(r), Ok(d)) => (r, d),
            (Err(Error::CapExceeded { .. } | Error::HorizonInsufficient { .. }), _)
            | (_, Err(Error::CapExceeded { .. } | Error::HorizonInsufficient { .. })) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let p = report.densities[0].p;
        if p > Rational::from_integer(1) - density.density {
            return verdict(false, format!("m_n = {m_n}: p = {p} exceeds 1 - {}", density.density));
        }
        values.push(format!("{p}"));
    }
    if values.is_empty() {
        return skip("no Folner set within cap");
    }
    verdict(true, format!("p(aabAA) = {} for H = L_1", values.join(", ")))
}

fn sequence_recipe(_: &CheckContext) -> Result<(Status, String)> {
    let target = GrowthTarget::from_spec("const:1", DEFAULT_C)?;
    let spec = generate(&target, 12)?;
    let report = verify_sequence(&spec, 12)?;
    let (_, r) = spec.terms(12)?;
    let increasing = r.windows(2).all(|w| w[1] > w[0]);
    verdict(
        report.theorem_grade && report.congruence_checks == 2 * 12 * 11 && increasing,
        format!("{} congruence checks, {} violations", report.congruence_checks, report.congruence_violations()),
    )
}

fn generator_verifier_agreement(ctx: &CheckContext) -> Result<(Status, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for _ in 0..20 {
        let f = match rng.gen_range(0..3) {
            0 => format!("const:{}", rng.gen_range(1..1000)),
            1 => format!("poly:{},2", rng.gen_range(1..5)),
            _ => format!("poly:1,{}", rng.gen_range(2..4)),
        };
        let c = rng.gen_range(DEFAULT_C..200);
        let spec = generate(&GrowthTarget::from_spec(&f, c)?, 6)?;
        if !verify_sequence(&spec, 6)?.theorem_grade {
            return verdict(false, format!("F = {f}, C = {c}"));
        }
    }
    verdict(true, "20 random (F, C) configurations, 6 terms each")
}

fn tester_soundness(ctx: &CheckContext) -> Result<(Status, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let e = RelationSet::new([FreeWord::x().commutator(&FreeWord::y()), FreeWord::x().pow(3)]);
    let mut fails = 0;
    for seed in 0..200 {
        let rho = random_tuple(&mut rng, 6);
        let v = sample_and_substitute(&rho, &e, Rational::new(1, 4), 0.99, seed)?;
        if let Some(w) = &v.witness {
            if !replay(&rho, w)? {
                return verdict(false, format!("witness {w:?} does not replay"));
            }
            fails += 1;
        }
    }
    let genuine = PermTuple::new(perm("(1 2 3)", 3), perm("(1 3 2)", 3))?;
    for seed in 0..200 {
        if !sample_and_substitute(&genuine, &e, Rational::new(1, 4), 0.99, seed)?.passed() {
            return verdict(false, "a genuine solution was rejected");
        }
    }
    verdict(true, format!("{fails} rejections replayed; genuine solution passed 200/200"))
}

fn padded_instance() -> Result<(PermTuple, FreeWord)> {
    let psi = PermTuple::new(perm("(1 2 3)", 3), perm("(1 2)", 3))?;
    Ok((regular_lift(&psi, 100)?, FreeWord::x().commutator(&FreeWord::y())))
}

fn tester_completeness(_: &CheckContext) -> Result<(Status, String)> {
    let (psi, w1) = padded_instance()?;
    let delta = Rational::new(1, 2);
    let padded = pad_block_solution(&psi, &w1, delta)?;
    let e = RelationSet::new([w1]);
    let trials = 1000;
    let mut passes = 0;
    let mut samples = 0;
    for seed in 0..trials {
        let v = sample_and_substitute(&padded.tuple, &e, delta, 0.99, seed)?;
        samples = v.samples_per_relation;
        passes += usize::from(v.passed());
    }
    let d = crate::rational::to_f64(&padded.violation);
    let p = (1.0 - d).powi(samples as i32);
    let limit = p + 3.0 * (p / trials as f64).sqrt();
    let rate = passes as f64 / trials as f64;
    verdict(rate <= limit, format!("pass rate {rate:.4} <= {limit:.4} (d* = {}, n = {samples})", padded.violation))
}

fn defect_zero_iff_solution(_: &CheckContext) -> Result<(Status, String)> {
    let r = commutator();
    let all = all_permutations(3);
    let mut tuples = 0;
    for x in &all {
        for y in &all {
            let rho = PermTuple::new(x.clone(), y.clone())?;
            let g = global_defect(&rho, &r, 6)?;
            if (g.value == Rational::from_integer(0)) != rho.is_solution(&r) {
                return verdict(false, format!("({x}, {y})"));
            }
            tuples += 1;
        }
    }
    verdict(true, format!("{tuples} tuples on 3 points"))
}

fn solver_agreement(ctx: &CheckContext) -> Result<(Status, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let r = commutator();
    let solvers: Vec<_> = defect_solvers().names().map(|n| defect_solvers().build(n)).collect::<Result<_>>()?;
    for _ in 0..20 {
        let rho = random_tuple(&mut rng, 4);
        let values: Vec<_> =
            solvers.iter().map(|s| global_defect_with(s.as_ref(), &rho, &r, 6)).collect::<Result<_>>()?;
        if values.windows(2).any(|w| w[0].value != w[1].value || w[0].minimizer != w[1].minimizer) {
            return verdict(false, format!("solvers disagree on\n{rho}"));
        }
    }
    verdict(true, format!("{} solvers agree on 20 random tuples of degree 4", solvers.len()))
}

fn local_defect_bound(ctx: &CheckContext) -> Result<(Status, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let r = RelationSet::new([FreeWord::x().commutator(&FreeWord::y()), FreeWord::x().pow(2), FreeWord::y().pow(3)]);
    let mut almost = 0;
    for _ in 0..300 {
        let rho = random_tuple(&mut rng, 5);
        let delta = Rational::new(rng.gen_range(1..=10), 10);
        if is_almost_solution(&rho, delta, &r)? {
            almost += 1;
            if local_defect(&rho, &r)? >= delta * Rational::from_integer(r.len() as i64) {
                return verdict(false, format!("bound fails at delta = {delta}"));
            }
        }
    }
    verdict(true, format!("{almost} almost-solutions satisfy L < |R| delta"))
}

fn padding_interval(_: &CheckContext) -> Result<(Status, String)> {
    let (psi, w1) = padded_instance()?;
    let mut count = 0;
    for delta in
        [Rational::new(1, 2), Rational::new(1, 3), Rational::new(1, 8), Rational::new(1, 50), Rational::new(2, 3)]
    {
        let padded = pad_block_solution(&psi, &w1, delta)?;
        let moved = Rational::new(padded.tuple.evaluate(&w1).support_size() as i64, padded.tuple.degree() as i64);
        if !(padded.violation > delta / 2 && padded.violation < delta && moved == padded.violation) {
            return verdict(false, format!("delta = {delta}"));
        }
        count += 1;
    }
    verdict(true, format!("{count} values of delta on the 6-point regular action"))
}

fn empty_relations(ctx: &CheckContext) -> Result<(Status, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let e = RelationSet::default();
    for seed in 0..100 {
        let rho = random_tuple(&mut rng, 5);
        if !sample_and_substitute(&rho, &e, Rational::new(1, 10), 0.99, seed)?.passed() {
            return verdict(false, "empty relation set rejected an input");
        }
    }
    verdict(stability_cost(&e, Rational::new(1, 10))? == Rational::from_integer(0), "100 inputs pass, cost 0")
}

fn sofic_regular(_: &CheckContext) -> Result<(Status, String)> {
    let gens = [perm("(1 2 3 4 5)", 5), perm("(1 2 3)", 5)];
    let elements = closure_enumerate(&Permutation::identity(5), &gens, 100)?;
    let rep = regular_representation(&elements)?;
    let subset: Vec<usize> = (0..20).collect();
    let table = PartialTable::from_group(&elements, &subset);
    let phi: Vec<Permutation> = subset.iter().map(|&i| rep.image(&elements[i])).collect::<Result<_>>()?;
    let ok = sofic_check(&table, &phi, Rational::new(1, 1000))?.passed();
    verdict(ok && elements[0].is_identity(), "regular representation of Alt(5) on 20 elements")
}

fn lef_projection(ctx: &CheckContext) -> Result<(Status, String)> {
    soften((|| {
        let mut done = Vec::new();
        for l in 1..=2 {
            if ctx.spec.horizon() < 4 * l + 1 && !ctx.spec.is_generated() {
                break;
            }
            let table = projection_embedding(&ctx.spec, l)?;
            if !table.is_partial_homomorphism() {
                return verdict(false, format!("l = {l}: not a partial homomorphism"));
            }
            done.push(format!("l = {l}: {} words, {} elements", table.words.len(), table.distinct_elements));
        }
        if done.is_empty() {
            return skip("fewer than 5 coordinates");
        }
        let cert = lef_certificate(&ctx.spec, 1)?;
        verdict(cert.injective && cert.partial_homomorphism, done.join("; "))
    })())
}

fn lef_substitution(ctx: &CheckContext) -> Result<(Status, String)> {
    soften((|| {
        let mut done = Vec::new();
        for l in 1..=2 {
            let n = 4 * l + 1;
            if (ctx.spec.horizon() < n && !ctx.spec.is_generated()) || !ctx.spec.qualifies(n, 2 * l as u64)? {
                continue;
            }
            substitute_embedding(&ctx.spec, l)?;
            let agreement = three_way_agreement(&ctx.spec, l)?;
            if !agreement.disagreements.is_empty() {
                return verdict(false, format!("l = {l}: {:?}", agreement.disagreements));
            }
            done.push(format!("l = {l}: {} words agree", agreement.words_checked));
        }
        if done.is_empty() {
            return skip("coordinate 4l+1 unavailable or not qualifying");
        }
        verdict(true, done.join("; "))
    })())
}

const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("metric-axioms", "Hamming metric is a bi-invariant metric on Sym(4)", metric_axioms),
    ("group-order", "Schreier-Sims order matches closure size", group_order_vs_closure),
    ("regular-distance", "regular images move every point", regular_distance_one),
    ("word-evaluation", "word evaluation is multiplicative", evaluation_homomorphism),
    ("ball-size", "ball cardinalities match the closed form", ball_cardinality),
    ("lamplighter-projection", "projection to W_m commutes with evaluation", lamplighter_projection),
    ("lamplighter-associativity", "lamplighter multiplication is associative", lamplighter_associativity),
    ("coordinate-generation", "alpha_n and beta_n generate Alt(d(n))", coordinate_generation),
    ("short-word-transfer", "short words are trivial at qualifying coordinates iff trivial in W", short_word_transfer),
    ("element-homomorphism", "coordinates and tau are homomorphisms", element_homomorphism),
    ("word-problem", "word problem agrees with direct coordinate checks", word_problem_soundness),
    ("lamp-subgroups", "L_m kernel agreement and support bound", lamp_subgroups),
    ("lamp-image-growth", "pi_1(L_m) grows to the full alternating group", lamp_image_growth),
    ("folner-boundary", "Folner boundary ratios", folner_boundary),
    ("quotient-bijection", "phi_n restricted to F_n is a bijection onto P_n", quotient_bijection),
    ("conjugation-density", "conjugation density lower bound", conjugation_bound),
    ("cosofic-density", "p_n(g) <= 1 - conjugation density", cosofic_bound),
    ("sequence-recipe", "generated sequence passes every verifier check", sequence_recipe),
    ("generator-verifier", "generator and verifier agree on random targets", generator_verifier_agreement),
    ("tester-soundness", "tester witnesses replay and solutions pass", tester_soundness),
    ("tester-completeness", "tester rejection rate on a padded instance", tester_completeness),
    ("defect-zero", "global defect vanishes exactly on solutions", defect_zero_iff_solution),
    ("defect-solvers", "defect solvers agree", solver_agreement),
    ("local-defect-bound", "almost-solutions have small local defect", local_defect_bound),
    ("padding-interval", "block padding lands in (delta/2, delta)", padding_interval),
    ("empty-relations", "empty relation set costs nothing and always passes", empty_relations),
    ("sofic-regular", "regular representation is an almost representation", sofic_regular),
    ("lef-projection", "projection is a local embedding of small balls", lef_projection),
    ("lef-substitution", "substitution agrees with coordinate and lamplighter", lef_substitution),
];

pub fn check_registry() -> &'static Registry<dyn Check> {
    static REGISTRY: OnceLock<Registry<dyn Check>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut reg: Registry<dyn Check> = Registry::new("check");
        for &(name, description, run) in CHECKS {
            reg.register(name, description, move |_| Ok(Box::new(FnCheck { name, run })));
        }
        reg
    })
}

/// Check names in run order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs the named checks (all when `only` is empty). Errors become failures.
pub fn run_checks(ctx: &CheckContext, only: &[String]) -> Result<Vec<CheckResult>> {
    let names: Vec<String> =
        if only.is_empty() { check_names().into_iter().map(String::from).collect() } else { only.to_vec() };
    names
        .iter()
        .map(|name| {
            let check = check_registry().build(name)?;
            let (status, detail) = match check.run(ctx) {
                Ok(r) => r,
                Err(e) => (Status::Fail, format!("error: {e}")),
            };
            Ok(CheckResult { name: check.name().to_string(), status, detail })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_matches_table() {
        assert_eq!(check_registry().names().count(), CHECKS.len());
        assert!(matches!(check_registry().build("no-such-check"), Err(Error::UnknownStrategy { .. })));
    }

    #[test]
    fn spec_independent_checks_pass() {
        let ctx = CheckContext {
            spec: Arc::new(SequenceSpec::explicit(vec![5, 7, 13], vec![1, 2, 4], true).unwrap()),
            cap: 10_000,
            seed: 1,
        };
        let only: Vec<String> =
            ["ball-size", "group-order", "padding-interval", "empty-relations"].iter().map(|s| s.to_string()).collect();
        for r in run_checks(&ctx, &only).unwrap() {
            assert_eq!(r.status, Status::Pass, "{}: {}", r.name, r.detail);
        }
    }
}
