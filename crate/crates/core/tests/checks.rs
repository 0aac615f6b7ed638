use std::path::PathBuf;
use std::sync::Arc;

use stabgrowth::checks::{check_names, run_checks, CheckContext, Status};
use stabgrowth::neumann::SequenceSpec;

fn context(name: &str) -> CheckContext {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    CheckContext { spec: Arc::new(SequenceSpec::load(path).unwrap()), cap: 20_000, seed: 0 }
}

#[test]
fn no_check_fails_on_any_fixture() {
    for fixture in ["toy.json", "toy_amenable.json", "qualifying.json", "generated.json"] {
        let results = run_checks(&context(fixture), &[]).unwrap();
        assert_eq!(results.len(), check_names().len());
        for r in &results {
            assert_ne!(r.status, Status::Fail, "{fixture}: {} failed: {}", r.name, r.detail);
        }
    }
}

#[test]
fn toy_runs_most_checks() {
    let results = run_checks(&context("toy.json"), &[]).unwrap();
    let passed = results.iter().filter(|r| r.status == Status::Pass).count();
    assert!(passed + 1 >= results.len(), "only {passed} of {} passed", results.len());
}

#[test]
fn unknown_check_is_an_error() {
    assert!(run_checks(&context("toy.json"), &["no-such-check".into()]).is_err());
}
