//! Acceptance gate: one test per advertised guarantee of the crate. Every
//! test prints a single `ACCEPTANCE n: PASS` line (visible with
//! `cargo test --test acceptance -- --nocapture`) and asserts exactness
//! with zero tolerance plus a generous runtime budget.
//!
//! The tests serialize on a mutex so the measured runtimes are honest.

use std::process::Command;
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use conetodd::cones::{box_points, half_open_decompose, Cone, HalfOpenCone};
use conetodd::corpus;
use conetodd::doc;
use conetodd::mu::MuContext;
use conetodd::ratlin::{ivec, ivec_to_qvec, qvec_add, rat, IVec, Int, Rat};
use conetodd::series::TruncSeries;
use conetodd::verify::{run_suite, Suite};

static GATE: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|e| e.into_inner())
}

/// Bernoulli numbers with B(1) = -1/2, computed here from the defining
/// recurrence sum over k of C(m+1, k) B(k) = 0, independently of the
/// library's own table.
fn bernoulli_oracle(through: usize) -> Vec<Rat> {
    let mut b: Vec<Rat> = Vec::with_capacity(through + 1);
    b.push(Rat::one());
    for m in 1..=through {
        // binomial coefficients C(m+1, 0..=m-1)
        let mut binom = Rat::one();
        let mut acc = Rat::zero();
        for (k, b_k) in b.iter().enumerate().take(m) {
            if k > 0 {
                binom *= Rat::new(Int::from(m as i64 + 2 - k as i64), Int::from(k as i64));
            }
            acc += binom.clone() * b_k.clone();
        }
        let c_m = Rat::new(Int::from(m as i64 + 1), Int::from(1)); // C(m+1, m)
        b.push(-acc / c_m);
    }
    b
}

/// Coefficient k of the half-line germ: -B(k+1)/(k+1)!.
fn halfline_oracle(order: u32) -> Vec<Rat> {
    let b = bernoulli_oracle(order as usize + 1);
    let mut factorial = Rat::one();
    (0..=order)
        .map(|k| {
            factorial *= Rat::from_integer(Int::from(k as i64 + 1));
            -(b[k as usize + 1].clone() / factorial.clone())
        })
        .collect()
}

fn budget(criterion: u32, elapsed: Duration, limit: Duration) {
    assert!(
        elapsed < limit,
        "criterion {criterion} exceeded its runtime budget: {elapsed:.2?} >= {limit:.2?}"
    );
}

#[test]
fn acceptance_1_projective_line_todd_class() {
    let _g = serial();
    let dir = std::env::temp_dir().join("conetodd-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let fan_path = dir.join("p1_fan.json");
    std::fs::write(&fan_path, doc::fan_doc(&corpus::p1_fan()).to_json()).unwrap();

    let start = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_conetodd"))
        .args(["todd", fan_path.to_str().unwrap(), "--order", "10"])
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    assert!(
        output.status.success(),
        "todd subcommand failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );

    let document = doc::Document::from_json(std::str::from_utf8(&output.stdout).unwrap()).unwrap();
    let entries = doc::parse_todd_doc(&document).unwrap();
    assert_eq!(entries.len(), 3, "fan on the line has three cones");

    let series_for = |rays: &[IVec]| -> &TruncSeries {
        &entries
            .iter()
            .find(|(r, _)| r.as_slice() == rays)
            .expect("cone present in the expansion")
            .1
    };
    assert_eq!(*series_for(&[]), TruncSeries::one(1, 10));
    let oracle = halfline_oracle(10);
    let positive = series_for(&[ivec(&[1])]);
    let negative = series_for(&[ivec(&[-1])]);
    for k in 0..=10u32 {
        let expected = &oracle[k as usize];
        assert_eq!(positive.coeff(&[k]), *expected, "positive ray, degree {k}");
        let sign = if k % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
        assert_eq!(
            negative.coeff(&[k]),
            expected * sign,
            "negative ray, degree {k}"
        );
    }
    budget(1, elapsed, Duration::from_secs(1));
    println!(
        "ACCEPTANCE 1: PASS - projective-line expansion matches the Bernoulli oracle through order 10 ({elapsed:.2?})"
    );
}

#[test]
fn acceptance_2_germ_base_cases() {
    let _g = serial();
    let start = Instant::now();

    // The origin in any ambient dimension: the constant series 1.
    for dim in [0usize, 1, 2, 3] {
        let ctx = MuContext::standard(dim);
        let mu = ctx.mu(&Cone::zero(dim), 6).unwrap();
        assert_eq!(mu, TruncSeries::one(dim, 6), "origin in dimension {dim}");
    }

    // The half-line through order 12 against the independent oracle.
    let ctx = MuContext::standard(1);
    let halfline = Cone::from_int_rays(1, &[ivec(&[1])]).unwrap();
    let mu = ctx.mu(&halfline, 12).unwrap();
    let oracle = halfline_oracle(12);
    for k in 0..=12u32 {
        assert_eq!(mu.coeff(&[k]), oracle[k as usize], "half-line, degree {k}");
    }

    let elapsed = start.elapsed();
    budget(2, elapsed, Duration::from_secs(1));
    println!(
        "ACCEPTANCE 2: PASS - germ base cases match the Bernoulli oracle through order 12 ({elapsed:.2?})"
    );
}

#[test]
fn acceptance_3_counting_oracle_equivalence() {
    let _g = serial();
    let start = Instant::now();
    let report = run_suite(Suite::Oracle, 0, 6).unwrap();
    let elapsed = start.elapsed();

    assert!(report.passed(), "oracle suite failed: {:?}", failing(&report));
    let random = count_with(&report, "random polytope");
    assert!(random >= 30, "expected at least 30 random polytopes, got {random}");
    for dim in 1..=3 {
        assert!(
            count_with(&report, &format!("dim {dim} ")) >= 10,
            "expected 10 instances in dimension {dim}"
        );
    }
    assert_eq!(count_with(&report, "square dilated by"), 4);
    budget(3, elapsed, Duration::from_secs(120));
    println!(
        "ACCEPTANCE 3: PASS - face expansion equals enumeration on {} instances ({elapsed:.2?})",
        report.items.len()
    );
}

#[test]
fn acceptance_4_valuation_under_subdivision() {
    let _g = serial();
    let start = Instant::now();
    let report = run_suite(Suite::Valuation, 0, 6).unwrap();
    let elapsed = start.elapsed();

    assert!(report.passed(), "valuation suite failed: {:?}", failing(&report));
    assert_eq!(report.items.len(), 12);
    assert_eq!(count_with(&report, "line split"), 1);
    assert_eq!(count_with(&report, "random 2-D split"), 10);
    assert_eq!(count_with(&report, "cone over the unit square"), 1);
    budget(4, elapsed, Duration::from_secs(60));
    println!(
        "ACCEPTANCE 4: PASS - coefficient additivity under subdivision on 12 instances, order 6 ({elapsed:.2?})"
    );
}

#[test]
fn acceptance_5_simplicial_restriction_identity() {
    let _g = serial();
    let start = Instant::now();
    let report = run_suite(Suite::Tt, 0, 6).unwrap();
    let elapsed = start.elapsed();

    assert!(report.passed(), "restriction suite failed: {:?}", failing(&report));
    for name in ["p1 ", "p2 ", "p1xp1 ", "weighted "] {
        assert!(
            count_with(&report, name) > 0,
            "corpus fan {name:?} missing from the suite"
        );
    }
    let random_fans: std::collections::BTreeSet<&str> = report
        .items
        .iter()
        .filter(|i| i.instance.starts_with("random fan"))
        .map(|i| i.instance.split(' ').nth(2).unwrap())
        .collect();
    assert_eq!(random_fans.len(), 10, "expected 10 distinct random fans");
    budget(5, elapsed, Duration::from_secs(120));
    println!(
        "ACCEPTANCE 5: PASS - simplicial restriction identity on {} maximal cones, order 6 ({elapsed:.2?})",
        report.items.len()
    );
}

#[test]
fn acceptance_6_localization_on_corpus_fans() {
    let _g = serial();
    let start = Instant::now();
    let report = run_suite(Suite::Localization, 0, 6).unwrap();
    let elapsed = start.elapsed();

    assert!(report.passed(), "localization suite failed: {:?}", failing(&report));
    // Every maximal cone of every corpus fan, including the six
    // square-based cones of the non-simplicial cube fan.
    let expected: usize = corpus::corpus_fans()
        .iter()
        .map(|(_, fan)| fan.fulldim_cones().count())
        .sum();
    assert_eq!(report.items.len(), expected);
    assert_eq!(count_with(&report, "cube "), 6);
    budget(6, elapsed, Duration::from_secs(120));
    println!(
        "ACCEPTANCE 6: PASS - localization identity on all {expected} maximal corpus cones, order 6 ({elapsed:.2?})"
    );
}

#[test]
fn acceptance_7_fan_independence_and_pushforward() {
    let _g = serial();
    let start = Instant::now();

    // Byte identity: the coefficient series of a shared cone, recomputed
    // from scratch inside three different complete fans, serializes to
    // identical bytes.
    let shared = Cone::from_int_rays(2, &[ivec(&[1, 0])]).unwrap();
    let mut printed: Vec<String> = Vec::new();
    for fan in [corpus::p2_fan(), corpus::p1xp1_fan(), corpus::weighted_fan()] {
        let found = fan.find(shared.rays()).expect("shared ray in fan");
        let ctx = MuContext::standard(2);
        let series = ctx.mu_star(found, 6).unwrap();
        printed.push(doc::series_doc(&series).to_json());
    }
    assert_eq!(printed[0], printed[1]);
    assert_eq!(printed[1], printed[2]);

    // The suite re-checks shared cones across fans and the cube fan
    // against its pulling refinement (preserved cones identical,
    // subdivided cones additive), all at order 6.
    let report = run_suite(Suite::Danilov, 0, 6).unwrap();
    let elapsed = start.elapsed();
    assert!(report.passed(), "fan-independence suite failed: {:?}", failing(&report));
    assert_eq!(count_with(&report, "pulling refinement"), 5);
    budget(7, elapsed, Duration::from_secs(60));
    println!(
        "ACCEPTANCE 7: PASS - coefficients are fan-independent (byte-identical) and push forward under refinement ({elapsed:.2?})"
    );
}

#[test]
fn acceptance_8_stokes_relation() {
    let _g = serial();
    let start = Instant::now();
    let report = run_suite(Suite::Stokes, 0, 6).unwrap();
    let elapsed = start.elapsed();

    assert!(report.passed(), "stokes suite failed: {:?}", failing(&report));
    assert_eq!(report.items.len(), 25, "5 cones with 5 directions each");
    budget(8, elapsed, Duration::from_secs(30));
    println!(
        "ACCEPTANCE 8: PASS - boundary flux identity on 25 cone/direction pairs, order 6 ({elapsed:.2?})"
    );
}

#[test]
fn acceptance_9_infrastructure_properties() {
    let _g = serial();
    let start = Instant::now();

    // Half-open partitions count lattice points in the radius-5 ball
    // exactly once: points of the subdivided cone have total multiplicity
    // one across the half-open pieces, points outside have zero.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut partitions: Vec<(Cone, Vec<Cone>)> = (0..3).map(|_| corpus::random_split_2d(&mut rng)).collect();
    partitions.push(corpus::cone_over_square_split());
    for (whole, pieces) in &partitions {
        let witness: Vec<Rat> = whole
            .rays()
            .iter()
            .fold(vec![Rat::zero(); whole.dim()], |acc, r| {
                qvec_add(&acc, &ivec_to_qvec(r))
            });
        let half_open = half_open_decompose(pieces, &witness).unwrap();
        for point in ball_points(whole.dim(), 5) {
            let q = ivec_to_qvec(&point);
            let expected = usize::from(whole.contains(&q));
            let got = half_open.iter().filter(|h| h.contains(&q)).count();
            assert_eq!(
                got, expected,
                "point {point:?} counted {got} times, expected {expected}"
            );
        }
    }

    // Division by a linear form inverts multiplication, on 100 random
    // series/form pairs.
    let mut runner = TestRunner::new(Config {
        cases: 100,
        failure_persistence: None,
        ..Config::default()
    });
    let series_strategy = (1usize..=3, 2u32..=5).prop_flat_map(|(nvars, order)| {
        let term = (
            proptest::collection::vec(0u32..=5, nvars),
            -20i64..=20,
            1i64..=6,
        );
        let terms = proptest::collection::vec(term, 1..=8);
        let form = proptest::collection::vec(-5i64..=5, nvars)
            .prop_filter("form must be nonzero", |v| v.iter().any(|&x| x != 0));
        (Just(nvars), Just(order), terms, form)
    });
    runner
        .run(&series_strategy, |(nvars, order, terms, form)| {
            let series = TruncSeries::from_terms(
                nvars,
                order,
                terms.into_iter().map(|(e, n, d)| (e, Rat::new(n.into(), d.into()))),
            )
            .unwrap();
            let v: Vec<Rat> = form.iter().map(|&x| rat(x, 1)).collect();
            let product = series.mul_linform(&v).unwrap();
            let back = product.div_linform(&v).unwrap();
            prop_assert!(back.eq_through(&series, order).unwrap());
            Ok(())
        })
        .unwrap();

    // The multiplicity of a simplicial cone equals the number of lattice
    // points in its semi-open fundamental box, on 50 random cones.
    let mut checked = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    while checked < 25 {
        let cone = corpus::random_pointed_cone_2d(&mut rng);
        check_box_count(&cone);
        checked += 1;
    }
    while checked < 50 {
        let rays: Vec<IVec> = (0..3)
            .map(|_| {
                let coords: Vec<i64> = (0..3).map(|_| rng.gen_range(-5i64..=5)).collect();
                ivec(&coords)
            })
            .collect();
        let Ok(cone) = Cone::from_int_rays(3, &rays) else {
            continue;
        };
        if !cone.is_simplicial() || cone.rays().len() != 3 {
            continue;
        }
        check_box_count(&cone);
        checked += 1;
    }

    let elapsed = start.elapsed();
    budget(9, elapsed, Duration::from_secs(60));
    println!(
        "ACCEPTANCE 9: PASS - half-open partitions, series division round-trip (100 cases), box counts (50 cones) ({elapsed:.2?})"
    );
}

fn check_box_count(cone: &Cone) {
    let mult = cone.mult().unwrap();
    let points = box_points(&HalfOpenCone::closed(cone.clone()).unwrap()).unwrap();
    assert_eq!(
        Int::from(points.len() as i64),
        mult,
        "box of {:?} has {} points but multiplicity {mult}",
        cone.rays(),
        points.len()
    );
}

/// Lattice points of the closed Euclidean ball of the given radius.
fn ball_points(dim: usize, radius: i64) -> Vec<IVec> {
    let mut out = Vec::new();
    let mut current = vec![0i64; dim];
    fill(&mut out, &mut current, 0, radius);
    out
}

fn fill(out: &mut Vec<IVec>, current: &mut Vec<i64>, at: usize, radius: i64) {
    if at == current.len() {
        if current.iter().map(|x| x * x).sum::<i64>() <= radius * radius {
            out.push(current.iter().map(|&x| Int::from(x)).collect());
        }
        return;
    }
    for x in -radius..=radius {
        current[at] = x;
        fill(out, current, at + 1, radius);
    }
}

fn failing(report: &conetodd::verify::VerifyReport) -> Vec<String> {
    report
        .items
        .iter()
        .filter(|i| !i.pass)
        .map(|i| format!("{}: {} ({})", i.instance, i.identity, i.detail))
        .collect()
}

fn count_with(report: &conetodd::verify::VerifyReport, needle: &str) -> usize {
    report
        .items
        .iter()
        .filter(|i| i.instance.contains(needle))
        .count()
}
