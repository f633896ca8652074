use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;

use ufg3lin::catalog::{builtin, builtin_group, BUILTIN_NAMES};
use ufg3lin::folding::{canonicalize, random_folded, FoldKind, FoldedFunction, PatternFamily, TableValues};
use ufg3lin::group::{abelianize, commutator_subgroup, Elem, Group};
use ufg3lin::labelcover::{parallel_repeat, MaxTsaInstance};
use ufg3lin::reduction::{build_instance, factor_graph_fingerprint, GadgetMode};
use ufg3lin::rep::{fourier_spectrum, inverse_fourier, FunctionTable};
use ufg3lin::seed;

fn group_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(BUILTIN_NAMES.to_vec())
}

fn tuple(group: &Group, n: usize, rng: &mut seed::Rng) -> Vec<Elem> {
    (0..n).map(|_| Elem(rng.gen_range(0..group.order()) as u8)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tuple_ops_form_a_group(name in group_name(), s in any::<u64>(), n in 1usize..6) {
        let g = builtin_group(name).unwrap();
        let mut rng = seed::rng(s, "tuple");
        let (x, y, z) = (tuple(&g, n, &mut rng), tuple(&g, n, &mut rng), tuple(&g, n, &mut rng));
        let xy_z = g.tuple_mul(&g.tuple_mul(&x, &y).unwrap(), &z).unwrap();
        let x_yz = g.tuple_mul(&x, &g.tuple_mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        prop_assert_eq!(g.tuple_mul(&x, &g.tuple_inv(&x)).unwrap(), g.identity_tuple(n));
    }

    #[test]
    fn abelianization_is_a_homomorphism_with_exact_lifts(name in group_name()) {
        let g = builtin_group(name).unwrap();
        let ab = abelianize(&g);
        let comm = commutator_subgroup(&g);
        prop_assert!(comm.is_normal_in(&g));
        prop_assert_eq!(ab.quotient_order() * comm.len(), g.order());
        for a in g.elements() {
            for b in g.elements() {
                let sum = ab.add(ab.project(a), ab.project(b));
                prop_assert_eq!(ab.project(g.mul(a, b)), sum.as_slice());
            }
            let lifted = ab.lift(ab.project(a)).unwrap();
            prop_assert_eq!(ab.project(lifted), ab.project(a));
            prop_assert!(ab.coset(ab.project(a)).contains(&a));
        }
    }

    #[test]
    fn canonicalize_is_idempotent_and_class_constant(
        name in group_name(), s in any::<u64>(), big_r in 1usize..7, r in 1usize..3,
    ) {
        let g = builtin_group(name).unwrap();
        let mut rng = seed::rng(s, "canon");
        let words: Vec<u32> = (0..big_r).map(|_| rng.gen_range(0..1u32 << r)).collect();
        let fam = PatternFamily::new(r, words.clone()).unwrap();
        let x = tuple(&g, big_r, &mut rng);
        let form = canonicalize(&g, &x, &fam).unwrap();
        for d in 0..big_r {
            prop_assert_eq!(g.mul(form.witness[&words[d]], form.representative[d]), x[d]);
        }
        let again = canonicalize(&g, &form.representative, &fam).unwrap();
        prop_assert_eq!(&again.representative, &form.representative);
        prop_assert!(again.witness.values().all(|&w| w == g.identity()));

        let f: Vec<Elem> = (0..1u32 << r).map(|_| Elem(rng.gen_range(0..g.order()) as u8)).collect();
        let y: Vec<Elem> = x.iter().zip(&words).map(|(&xd, &w)| g.mul(f[w as usize], xd)).collect();
        prop_assert_eq!(canonicalize(&g, &y, &fam).unwrap().representative, form.representative);
    }

    #[test]
    fn stored_table_ignores_b_at_canonical_keys(s in any::<u64>()) {
        let (g, _) = builtin("S3").unwrap();
        let mut rng = seed::rng(s, "b-indep");
        let words: Vec<u32> = (0..4).map(|_| rng.gen_range(0..4)).collect();
        let fam = PatternFamily::new(2, words.clone()).unwrap();
        let base = random_folded(&g, FoldKind::Functional { patterns: fam.clone(), b: words[0] }, 4, s).unwrap();
        let TableValues::Stored(map) = base.values().clone() else { unreachable!() };
        for b in 0..4 {
            let f = FoldedFunction::new(&g, FoldKind::Functional { patterns: fam.clone(), b }, 4, TableValues::Stored(map.clone())).unwrap();
            for key in map.keys() {
                prop_assert_eq!(f.query(&g, key).unwrap(), base.query(&g, key).unwrap());
            }
        }
    }

    #[test]
    fn fourier_inversion_round_trip(name in group_name(), s in any::<u64>()) {
        let (g, cat) = builtin(name).unwrap();
        let mut rng = seed::rng(s, "inv");
        let f = FunctionTable::from_fn(&g, 1, |_| num_complex::Complex64::new(rng.gen(), rng.gen())).unwrap();
        let back = inverse_fourier(&cat, 1, &fourier_spectrum(&cat, &f).unwrap()).unwrap();
        prop_assert!(f.max_abs_diff(&back).unwrap() < 1e-9);
    }
}

/// Left scaling by a constant `c` multiplies functional queries by `c`;
/// right scaling multiplies classical queries by `c`.
#[test]
fn folding_consistency_on_every_builtin() {
    for name in BUILTIN_NAMES {
        let g = builtin_group(name).unwrap();
        let mut rng = seed::rng(21, name);
        let big_r = 5;
        let words = vec![0, 1, 1, 0, 1];
        let fam = PatternFamily::new(1, words).unwrap();
        let functional = random_folded(&g, FoldKind::Functional { patterns: fam, b: 1 }, big_r, 1).unwrap();
        let classical = random_folded(&g, FoldKind::ClassicalRight, big_r, 2).unwrap();
        for _ in 0..1000 {
            let x = tuple(&g, big_r, &mut rng);
            let c = Elem(rng.gen_range(0..g.order()) as u8);
            let left = g.tuple_left_scale(c, &x);
            assert_eq!(functional.query(&g, &left).unwrap(), g.mul(c, functional.query(&g, &x).unwrap()));
            let right = g.tuple_right_scale(&x, c);
            assert_eq!(classical.query(&g, &right).unwrap(), g.mul(classical.query(&g, &x).unwrap(), c));
        }
    }
}

#[test]
fn projections_are_exactly_16t_to_1() {
    let mut rng = seed::rng(22, "proj");
    let tsa = MaxTsaInstance::random(10, 8, &mut rng).unwrap();
    for r in 1..=2 {
        for t in 0..=r {
            let lc = parallel_repeat(&tsa, r, t, 3, 6, 7).unwrap();
            for e in &lc.edges {
                let mut counts = vec![0u32; lc.big_l() as usize];
                for l in 0..lc.big_r() {
                    counts[e.projection.apply(l) as usize] += 1;
                }
                assert!(counts.iter().all(|&c| c == 16u32.pow(t as u32)));
            }
        }
    }
}

#[test]
fn fingerprints_differ_across_seeds() {
    let g = Arc::new(builtin_group("S3").unwrap());
    let mut rng = seed::rng(23, "tsa");
    let (tsa, _) = MaxTsaInstance::planted(10, 12, &mut rng).unwrap();
    let lc = parallel_repeat(&tsa, 1, 1, 4, 4, 1).unwrap();
    let mut seen = std::collections::HashSet::new();
    for s in 0..100 {
        let built = build_instance(&lc, Arc::clone(&g), GadgetMode::Perfect, 50, s).unwrap();
        seen.insert(factor_graph_fingerprint(&built.instance));
    }
    assert_eq!(seen.len(), 100);
}

#[test]
fn full_noise_gives_one_over_g() {
    let g = Arc::new(builtin_group("S3").unwrap());
    let mut rng = seed::rng(24, "tsa");
    let (tsa, a) = MaxTsaInstance::planted(10, 12, &mut rng).unwrap();
    let lc = parallel_repeat(&tsa, 1, 1, 4, 4, 1).unwrap();
    let (sl, sr) = lc.lift_assignment(&a).unwrap();
    let rep = ufg3lin::reduction::dictator_strategy_value(
        &lc, g, &sl, &sr, GadgetMode::Imperfect { epsilon: 1.0 }, 10_000, 5,
    )
    .unwrap();
    let p: f64 = 1.0 / 6.0;
    let sigma = (p * (1.0 - p) / 10_000.0).sqrt();
    assert!((rep.pass_fraction - p).abs() <= 3.0 * sigma, "{}", rep.pass_fraction);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn factor_graph_ignores_b(s in any::<u64>(), flips in prop::collection::vec(any::<bool>(), 12)) {
        let g = Arc::new(builtin_group("S3").unwrap());
        let mut rng = seed::rng(s, "tsa");
        let tsa = MaxTsaInstance::random(10, 12, &mut rng).unwrap();
        let lc = parallel_repeat(&tsa, 2, 1, 4, 4, s).unwrap();
        let other = lc.with_b(&flips).unwrap();
        let a = build_instance(&lc, Arc::clone(&g), GadgetMode::Perfect, 200, s).unwrap();
        let b = build_instance(&other, Arc::clone(&g), GadgetMode::Perfect, 200, s).unwrap();
        prop_assert_eq!(factor_graph_fingerprint(&a.instance), factor_graph_fingerprint(&b.instance));
        for c in a.instance.constraints() {
            let [x, y, z] = c.vars;
            prop_assert!(x != y && y != z && x != z);
        }
    }
}
