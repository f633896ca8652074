//! Acceptance criteria. Each test prints one PASS/FAIL line with its
//! measured quantities and wall time; run with `--nocapture` to see them.

use std::sync::Arc;
use std::time::{Duration, Instant};

use ufg3lin::catalog::{builtin, builtin_group, BUILTIN_NAMES};
use ufg3lin::harness::{axiom_report, containment_summary, fold_selftest, fourier_report};
use ufg3lin::labelcover::{collapse_check, parallel_repeat, random_label_set, smoothness_check, MaxTsaInstance};
use ufg3lin::reduction::{build_instance, dictator_strategy_value, factor_graph_fingerprint, GadgetMode};
use ufg3lin::seed;
use ufg3lin::solvers::{abelian_solve, brute_force, evaluate, exhaustive_lift_check, planted_instance, random_baseline, random_instance};

fn verdict(name: &str, passed: bool, start: Instant, limit_secs: u64, detail: String) {
    let elapsed = start.elapsed();
    let in_time = elapsed <= Duration::from_secs(limit_secs);
    let ok = passed && in_time;
    println!(
        "{} {name}: {detail} [{:.2}s / {limit_secs}s]",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(passed, "{name}: {detail}");
    assert!(in_time, "{name}: {:.2}s over the {limit_secs}s budget", elapsed.as_secs_f64());
}

fn sigma(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

#[test]
fn a1_irrep_axioms() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut passed = true;
    for name in BUILTIN_NAMES {
        let (g, cat) = builtin(name).unwrap();
        let rep = axiom_report(&g, &cat).unwrap();
        passed &= rep.passed;
        worst = [worst, rep.homomorphism, rep.unitarity, rep.character_norm, rep.orthogonality, rep.dim_identity]
            .into_iter()
            .fold(0.0, f64::max);
    }
    verdict("irrep axioms", passed, start, 5, format!("{} groups, max deviation {worst:.2e}", BUILTIN_NAMES.len()));
}

#[test]
fn a2_fourier_identities() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut passed = true;
    for name in ["Z6", "S3", "D4", "Q8"] {
        let (g, cat) = builtin(name).unwrap();
        for arity in 1..=2 {
            let rep = fourier_report(&g, &cat, arity, 100, 2).unwrap();
            passed &= rep.passed;
            worst = [worst, rep.inversion, rep.parseval, rep.plancherel, rep.convolution]
                .into_iter()
                .fold(0.0, f64::max);
        }
    }
    passed &= worst < 1e-9;
    verdict("fourier identities", passed, start, 60, format!("max deviation {worst:.2e}"));
}

#[test]
fn a3_containments() {
    let start = Instant::now();
    let (g, cat) = builtin("S3").unwrap();
    let rep = containment_summary(&g, &cat, 500, 4, 3, 3).unwrap();
    verdict(
        "containments",
        rep.passed,
        start,
        120,
        format!(
            "{} trials, {} constituents, {} plain / {} tilde violations",
            rep.trials, rep.constituents, rep.plain_violations, rep.tilde_violations
        ),
    );
}

#[test]
fn a4_folding_vanishing() {
    let start = Instant::now();
    let (g, cat) = builtin("S3").unwrap();
    let rep = fold_selftest(&g, &cat, 3, 2, 50, 4).unwrap();
    let min_unasserted = rep.runs.iter().map(|r| r.max_unasserted_norm).fold(f64::INFINITY, f64::min);
    let passed = rep.passed && rep.max_asserted_norm < 1e-9 && min_unasserted > 0.01;
    verdict(
        "folding vanishing",
        passed,
        start,
        120,
        format!(
            "{} runs, max asserted {:.2e}, smallest per-run unasserted max {min_unasserted:.3}",
            rep.runs.len(),
            rep.max_asserted_norm
        ),
    );
}

#[test]
fn a5_smoothness() {
    let start = Instant::now();
    let mut rng = seed::rng(5, "tsa");
    let tsa = MaxTsaInstance::random(40, 60, &mut rng).unwrap();
    let lc = parallel_repeat(&tsa, 4, 1, 1, 1000, 5).unwrap();
    let mut passed = true;
    let mut worst_margin = f64::INFINITY;
    for size in [2, 3, 4] {
        for _ in 0..20 {
            let set = random_label_set(&lc, size, &mut rng).unwrap();
            let rep = smoothness_check(&lc, &set, 0).unwrap();
            passed &= rep.passed;
            worst_margin = worst_margin.min(rep.bound + 3.0 * rep.sigma_hat - rep.mean);
        }
    }
    let mut details = Vec::new();
    for size in [4, 8, 16, 41, 64] {
        let rep = collapse_check(&lc, size, 0.25, 2000, &mut rng).unwrap();
        passed &= rep.passed;
        if size >= 41 {
            passed &= rep.exact_zero_branch && rep.hits == 0;
        }
        details.push(format!("|S|={size}: {:.4}", rep.probability));
    }
    verdict(
        "smoothness",
        passed,
        start,
        60,
        format!("min slack {worst_margin:.3}; collapse rates {}", details.join(", ")),
    );
}

#[test]
fn a6_completeness() {
    let start = Instant::now();
    let g = Arc::new(builtin_group("S3").unwrap());
    let mut rng = seed::rng(6, "tsa");
    let (tsa, planted) = MaxTsaInstance::planted(30, 60, &mut rng).unwrap();
    let lc = parallel_repeat(&tsa, 1, 1, 16, 16, 6).unwrap();
    let (sl, sr) = lc.lift_assignment(&planted).unwrap();
    let perfect = dictator_strategy_value(&lc, Arc::clone(&g), &sl, &sr, GadgetMode::Perfect, 10_000, 6).unwrap();
    let eps = 0.1;
    let imperfect =
        dictator_strategy_value(&lc, Arc::clone(&g), &sl, &sr, GadgetMode::Imperfect { epsilon: eps }, 10_000, 7).unwrap();
    let expected = 1.0 - eps + eps / 6.0;
    let band = 3.0 * sigma(expected, 10_000);
    let passed = perfect.pass_fraction == 1.0 && (imperfect.pass_fraction - expected).abs() <= band;
    verdict(
        "completeness",
        passed,
        start,
        60,
        format!(
            "perfect {:.4}, imperfect {:.4} vs {expected:.4} ± {band:.4}",
            perfect.pass_fraction, imperfect.pass_fraction
        ),
    );
}

#[test]
fn a7_factor_graph_ignores_b() {
    let start = Instant::now();
    let g = Arc::new(builtin_group("S3").unwrap());
    let mut passed = true;
    let mut rhs_differs = 0;
    for s in 0..10u64 {
        let mut rng = seed::rng(s, "tsa");
        let tsa = MaxTsaInstance::random(12, 20, &mut rng).unwrap();
        let lc = parallel_repeat(&tsa, 1, 1, 6, 6, s).unwrap();
        for k in 0..5u64 {
            let mut brng = seed::rng_indexed(s, "b", k);
            let b1: Vec<bool> = (0..20).map(|_| rand::Rng::gen(&mut brng)).collect();
            let mut b2: Vec<bool> = (0..20).map(|_| rand::Rng::gen(&mut brng)).collect();
            let (lc1, mut lc2) = (lc.with_b(&b1).unwrap(), lc.with_b(&b2).unwrap());
            if (0..lc.w.len()).all(|w| lc1.b_word(w) == lc2.b_word(w)) {
                let used = lc.w[0][0];
                b2[used] = !b2[used];
                lc2 = lc.with_b(&b2).unwrap();
            }
            let x = build_instance(&lc1, Arc::clone(&g), GadgetMode::Perfect, 500, s).unwrap();
            let y = build_instance(&lc2, Arc::clone(&g), GadgetMode::Perfect, 500, s).unwrap();
            passed &= factor_graph_fingerprint(&x.instance) == factor_graph_fingerprint(&y.instance);
            let differ = x
                .instance
                .constraints()
                .iter()
                .zip(y.instance.constraints())
                .any(|(a, b)| a.rhs != b.rhs);
            passed &= differ;
            rhs_differs += differ as usize;
        }
    }
    verdict(
        "factor graph independent of b",
        passed,
        start,
        30,
        format!("50 pairs, fingerprints equal, right-hand sides differ in {rhs_differs}"),
    );
}

#[test]
fn a8_abelian_solver() {
    let start = Instant::now();
    let g = Arc::new(builtin_group("S3").unwrap());
    let mut rng = seed::rng(8, "abelian");

    let (big, _) = planted_instance(Arc::clone(&g), 300, 10_000, &mut rng).unwrap();
    let rep = abelian_solve(&big, 1, 8).unwrap();
    let single_ok = !rep.fallback && (rep.value - 1.0 / 3.0).abs() <= 0.02;

    let lift = exhaustive_lift_check(&g);

    let k = 20;
    let (mut dominated, mut pointwise) = (0, 0);
    let (mut ab_sum, mut random_sum) = (0.0, 0.0);
    for i in 0..20u64 {
        let (inst, _) = planted_instance(Arc::clone(&g), 8, 40, &mut rng).unwrap();
        let brute = brute_force(&inst).unwrap().value;
        let ab = abelian_solve(&inst, k, i).unwrap().value;
        let random = random_baseline(&inst, k, i).unwrap().value;
        dominated += (brute >= ab && brute >= random) as usize;
        pointwise += (ab >= random) as usize;
        ab_sum += ab;
        random_sum += random;
    }
    let (ab_mean, random_mean) = (ab_sum / 20.0, random_sum / 20.0);
    let passed = single_ok && lift.exact && dominated == 20 && ab_mean >= random_mean;
    verdict(
        "abelian solver",
        passed,
        start,
        120,
        format!(
            "single lift {:.4}, exhaustive lift fraction {:.4}..{:.4} over {} coset triples, \
             brute dominates {dominated}/20, mean abelian {ab_mean:.3} vs random {random_mean:.3}, \
             abelian >= random on {pointwise}/20 instances",
            rep.value, lift.min_fraction, lift.max_fraction, lift.coset_triples
        ),
    );
}

#[test]
fn a9_random_baseline() {
    let start = Instant::now();
    let mut passed = true;
    let mut details = Vec::new();
    for name in ["Z6", "S3"] {
        let g = Arc::new(builtin_group(name).unwrap());
        let mut rng = seed::rng(9, name);
        let inst = random_instance(Arc::clone(&g), 500, 10_000, &mut rng).unwrap();
        let res = random_baseline(&inst, 1, 9).unwrap();
        let p = 1.0 / g.order() as f64;
        let band = 3.0 * sigma(p, 10_000);
        passed &= (res.value - p).abs() <= band && (evaluate(&inst, &res.assignment).unwrap() - res.value).abs() < 1e-12;
        details.push(format!("{name} {:.4} vs {p:.4} ± {band:.4}", res.value));
    }
    verdict("random baseline", passed, start, 30, details.join(", "));
}
