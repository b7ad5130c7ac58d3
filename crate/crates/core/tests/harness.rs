mod common;

use std::path::PathBuf;

use abductor::harness::bench::{bench, fit_base, median, BenchAlgo, BenchFamily};
use abductor::harness::verify::{exhaustive_instances, minimize_failure};
use abductor::harness::{
    generate, parse, parse_str, verify, write, write_string, Family, GenParams, ResultRecord,
    Suite, VerifyOptions, RESULT_SCHEMA,
};
use abductor::solvers::{solve, Algorithm, Mode};
use common::arb_instance;
use proptest::prelude::*;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

#[test]
fn generated_instances_round_trip() {
    for family in Family::ALL {
        for n in [1, 2, 5, 9] {
            for seed in 0..3 {
                let i = generate(&GenParams::new(family, n, seed));
                let text = write_string(&i);
                assert_eq!(parse_str(&text).unwrap(), i, "{family} n={n}\n{text}");
                assert_eq!(write_string(&parse_str(&text).unwrap()), text);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn arbitrary_instances_round_trip(i in arb_instance(8, 4, 6)) {
        prop_assert_eq!(parse_str(&write_string(&i)).unwrap(), i);
    }
}

#[test]
fn generators_are_seed_deterministic() {
    for family in Family::ALL {
        let p = GenParams::new(family, 7, 42);
        assert_eq!(write_string(&generate(&p)), write_string(&generate(&p)));
    }
    let a = generate(&GenParams::new(Family::Xsat, 12, 1));
    let b = generate(&GenParams::new(Family::Xsat, 12, 2));
    assert_ne!(a, b);
}

#[test]
fn files_round_trip_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.abd");
    let i = parse(&data("worked.abd")).unwrap();
    assert_eq!(i, abductor::examples::worked_example());
    write(&i, &p).unwrap();
    assert_eq!(parse(&p).unwrap(), i);
    assert!(parse(&dir.path().join("missing.abd")).is_err());
}

#[test]
fn parse_errors_point_at_the_token() {
    let e = parse_str("abd 1\nvars 2\ncon nope 1 2\n").unwrap_err();
    assert_eq!((e.line, e.col), (3, 5));
    let e = parse_str("vars 2\nhyp 3\n").unwrap_err();
    assert_eq!((e.line, e.col), (2, 5));
    let e = parse_str("abd 2\n").unwrap_err();
    assert_eq!(e.line, 1);
}

fn record(algo: Algorithm, mode: Mode) -> Value {
    let i = abductor::examples::worked_example();
    let rec = match solve(&i, algo, mode, true) {
        Ok(out) => ResultRecord::from_outcome(algo.tag(), mode, &out, 0.0),
        Err(e) => ResultRecord::failure(algo.tag(), mode, e.to_string(), 0.0),
    };
    serde_json::to_value(&rec).unwrap()
}

#[test]
fn result_records_match_golden_files() {
    for (algo, mode) in [
        (Algorithm::Oracle, Mode::Abd),
        (Algorithm::Enum, Mode::Abd),
        (Algorithm::PabdRec, Mode::Pabd),
        (Algorithm::PabdEnum, Mode::Pabd),
        (Algorithm::SimpleSat, Mode::Abd),
    ] {
        let name = format!("golden/worked-{}-{}.json", algo.tag(), mode.tag());
        let want: Value =
            serde_json::from_str(&std::fs::read_to_string(data(&name)).unwrap()).unwrap();
        assert_eq!(record(algo, mode), want, "{name}");
    }
}

#[test]
fn record_shape_is_shared_by_all_algorithms() {
    for mode in [Mode::Abd, Mode::Pabd] {
        for algo in Algorithm::ALL {
            let v = record(algo, mode);
            assert_eq!(v["schema"], RESULT_SCHEMA);
            assert_eq!(v["algorithm"], algo.tag());
            for key in [
                "branch_nodes",
                "leaves",
                "models_emitted",
                "max_depth",
                "wall_ms",
            ] {
                assert!(v["stats"][key].is_number(), "{key}");
            }
            // answer present iff the run completed
            assert_eq!(v.get("answer").is_some(), v.get("error").is_none());
            let back: ResultRecord = serde_json::from_value(v.clone()).unwrap();
            assert_eq!(serde_json::to_value(&back).unwrap(), v);
        }
    }
}

#[test]
fn exhaustive_pool_is_canonical() {
    let xs = exhaustive_instances();
    assert!(xs.len() > 10_000);
    let set: std::collections::HashSet<_> = xs.iter().collect();
    assert_eq!(set.len(), xs.len());
}

#[test]
fn small_random_verify_is_clean() {
    let opts = VerifyOptions {
        per_family: 10,
        max_n: 8,
        ..VerifyOptions::default()
    };
    let t = verify(Suite::Random, &opts);
    assert!(t.instances >= 70);
    assert_eq!(
        t.failed(),
        0,
        "{:?}",
        t.failures.iter().map(|f| &f.check).collect::<Vec<_>>()
    );
    let bad = verify(
        Suite::Random,
        &VerifyOptions {
            inject_bug: true,
            ..opts
        },
    );
    assert!(bad.failed() > 0);
}

#[test]
fn minimization_keeps_the_failure() {
    let i = abductor::examples::worked_example();
    // "fails" while the KB still has the constraint on variables 2 and 4.
    let has = |x: &abductor::model::AbductionInstance| {
        x.kb.constraints()
            .iter()
            .any(|c| c.scope.iter().map(|v| v.index()).collect::<Vec<_>>() == [2, 4])
    };
    let small = minimize_failure(&i, has);
    assert!(has(&small));
    assert!(small.kb.constraints().len() <= i.kb.constraints().len());
}

#[test]
fn fitting() {
    let pts: Vec<(f64, f64)> = (5..12).map(|n| (n as f64, 3f64.powi(n))).collect();
    let (b, r) = fit_base(&pts);
    assert!((b - 3.0).abs() < 1e-9 && r < 1e-9);
    assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
    assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    assert!(bench(BenchFamily::Xsat, BenchAlgo::Sparse, &[4, 6, 8], 5, 1).is_err());
    assert!(bench(
        BenchFamily::FullH,
        BenchAlgo::Sparse,
        &[4, 5, 6, 7, 8],
        5,
        1
    )
    .is_err());
    let s = bench(
        BenchFamily::XsatChain,
        BenchAlgo::Sparse,
        &[4, 6, 8, 10, 12],
        5,
        1,
    )
    .unwrap();
    assert!(s.to_csv().lines().count() == 6);
}
