//! Self-test drivers that bundle the numerical checks into reports.

use num_complex::Complex64;
use rand::Rng as _;
use serde::Serialize;

use crate::error::Result;
use crate::folding::{check_vanishing_all, random_folded, FoldKind, PatternFamily, VanishingLemma, VanishingReport};
use crate::group::{abelianize, commutator_subgroup, Group};
use crate::rep::{
    character_table, convolve, fourier_spectrum, fourier_transform, hs_inner, inverse_fourier,
    orthogonality_deviation, parseval_check, plancherel_gap, verify_containments, ContainmentMode,
    FunctionTable, IrrepCatalog, ProductIrrep, EQ_TOL,
};
use crate::seed::{self, Rng};

#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    pub name: String,
    pub order: usize,
    pub abelian: bool,
    pub commutator_order: usize,
    pub element_orders: Vec<usize>,
}

pub fn group_report(group: &Group) -> GroupReport {
    GroupReport {
        name: group.name().to_string(),
        order: group.order(),
        abelian: group.is_abelian(),
        commutator_order: commutator_subgroup(group).len(),
        element_orders: group.elements().map(|g| group.element_order(g)).collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AbelianizationReport {
    pub group: String,
    pub commutator: Vec<usize>,
    pub invariant_factors: Vec<u32>,
    pub quotient_order: usize,
    /// Coset word of every element.
    pub projection: Vec<Vec<u32>>,
    pub homomorphism_ok: bool,
}

pub fn abelianization_report(group: &Group) -> AbelianizationReport {
    let ab = abelianize(group);
    let homomorphism_ok = group.elements().all(|a| {
        group
            .elements()
            .all(|b| ab.project(group.mul(a, b)) == ab.add(ab.project(a), ab.project(b)).as_slice())
    });
    AbelianizationReport {
        group: group.name().to_string(),
        commutator: ab.commutator().members().iter().map(|e| e.index()).collect(),
        invariant_factors: ab.invariant_factors().to_vec(),
        quotient_order: ab.quotient_order(),
        projection: group.elements().map(|g| ab.project(g).to_vec()).collect(),
        homomorphism_ok,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub group: String,
    pub dims: Vec<usize>,
    pub sum_dim_squared: usize,
    pub homomorphism: f64,
    pub unitarity: f64,
    pub character_norm: f64,
    pub orthogonality: f64,
    pub dim_identity: f64,
    pub passed: bool,
}

pub fn axiom_report(group: &Group, catalog: &IrrepCatalog) -> Result<AxiomReport> {
    let irreps = catalog.irreps();
    let max = |f: &dyn Fn(&crate::rep::Irrep) -> f64| irreps.iter().map(f).fold(0.0, f64::max);
    let homomorphism = max(&|r| r.homomorphism_deviation(group));
    let unitarity = max(&|r| r.unitarity_deviation());
    let character_norm = max(&|r| r.character_norm_deviation());
    let orthogonality = orthogonality_deviation(group, catalog);
    let dim_identity = character_table(group, catalog)?.dim_identity_deviation;
    let dims: Vec<usize> = irreps.iter().map(|r| r.dim()).collect();
    let sum_dim_squared = dims.iter().map(|d| d * d).sum();
    let passed = sum_dim_squared == group.order()
        && [homomorphism, unitarity, character_norm, orthogonality, dim_identity]
            .iter()
            .all(|&d| d < EQ_TOL);
    Ok(AxiomReport {
        group: group.name().to_string(),
        dims,
        sum_dim_squared,
        homomorphism,
        unitarity,
        character_norm,
        orthogonality,
        dim_identity,
        passed,
    })
}

pub fn random_function(group: &Group, arity: usize, rng: &mut Rng) -> Result<FunctionTable> {
    FunctionTable::from_fn(group, arity, |_| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FourierReport {
    pub group: String,
    pub arity: usize,
    pub functions: usize,
    pub inversion: f64,
    pub parseval: f64,
    pub plancherel: f64,
    pub convolution: f64,
    pub passed: bool,
}

/// Inversion, Parseval, Plancherel and the convolution theorem on random
/// functions over `G^arity`.
pub fn fourier_report(
    group: &Group,
    catalog: &IrrepCatalog,
    arity: usize,
    functions: usize,
    seed: u64,
) -> Result<FourierReport> {
    let mut rng = seed::rng_indexed(seed, "fourier", arity as u64);
    let (mut inversion, mut parseval, mut plancherel, mut convolution) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..functions {
        let f = random_function(group, arity, &mut rng)?;
        let g = random_function(group, arity, &mut rng)?;
        let spec_f = fourier_spectrum(catalog, &f)?;
        let back = inverse_fourier(catalog, arity, &spec_f)?;
        inversion = inversion.max(f.max_abs_diff(&back)?);
        parseval = parseval.max(parseval_check(catalog, &f)?.gap);
        plancherel = plancherel.max(plancherel_gap(catalog, &f, &g)?);
        let conv = convolve(group, &f, &g)?;
        for cf in &spec_f {
            let cg = fourier_transform(catalog, &g, &cf.irrep)?;
            let cc = fourier_transform(catalog, &conv, &cf.irrep)?;
            let diff = &cc.matrix - &cf.matrix * &cg.matrix;
            convolution = convolution.max(hs_inner(&diff, &diff).re.sqrt());
        }
    }
    let passed = [inversion, parseval, plancherel, convolution].iter().all(|&d| d < EQ_TOL);
    Ok(FourierReport {
        group: group.name().to_string(),
        arity,
        functions,
        inversion,
        parseval,
        plancherel,
        convolution,
        passed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentSummary {
    pub group: String,
    pub trials: usize,
    pub constituents: usize,
    pub plain_violations: usize,
    pub tilde_violations: usize,
    pub passed: bool,
}

/// Random `(α, π)` with `R ≤ max_r`, `L ≤ max_l`, both containment chains.
pub fn containment_summary(
    group: &Group,
    catalog: &IrrepCatalog,
    trials: usize,
    max_r: usize,
    max_l: usize,
    seed: u64,
) -> Result<ContainmentSummary> {
    let mut rng = seed::rng(seed, "containments");
    let (mut constituents, mut plain, mut tilde) = (0, 0, 0);
    for _ in 0..trials {
        let r = rng.gen_range(1..=max_r);
        let l = rng.gen_range(1..=max_l);
        let alpha = ProductIrrep::new((0..r).map(|_| rng.gen_range(0..catalog.len())).collect());
        let pi: Vec<usize> = (0..r).map(|_| rng.gen_range(0..l)).collect();
        let p = verify_containments(catalog, &alpha, &pi, l, ContainmentMode::Plain)?;
        let t = verify_containments(catalog, &alpha, &pi, l, ContainmentMode::Tilde)?;
        constituents += p.constituents;
        plain += p.violations.len();
        tilde += t.violations.len();
    }
    Ok(ContainmentSummary {
        group: group.name().to_string(),
        trials,
        constituents,
        plain_violations: plain,
        tilde_violations: tilde,
        passed: plain == 0 && tilde == 0,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RepSelftest {
    pub axioms: AxiomReport,
    pub fourier: Vec<FourierReport>,
    pub containments: ContainmentSummary,
    pub passed: bool,
}

pub fn rep_selftest(group: &Group, catalog: &IrrepCatalog, functions: usize, trials: usize, seed: u64) -> Result<RepSelftest> {
    let axioms = axiom_report(group, catalog)?;
    let fourier = (1..=2)
        .map(|arity| fourier_report(group, catalog, arity, functions, seed))
        .collect::<Result<Vec<_>>>()?;
    let containments = containment_summary(group, catalog, trials, 4, 3, seed)?;
    let passed = axioms.passed && fourier.iter().all(|f| f.passed) && containments.passed;
    Ok(RepSelftest { axioms, fourier, containments, passed })
}

#[derive(Debug, Clone, Serialize)]
pub struct FoldRun {
    pub words: Vec<u32>,
    pub b: u32,
    pub reports: Vec<VanishingReport>,
    /// Largest coefficient norm outside every asserted set.
    pub max_unasserted_norm: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FoldSelftest {
    pub group: String,
    pub big_r: usize,
    pub r: usize,
    pub runs: Vec<FoldRun>,
    pub max_asserted_norm: f64,
    pub passed: bool,
}

/// Random pattern family over `[big_r]` with words in `{0,1}^r`, and a
/// target word that some coordinate attains.
pub fn random_attained_family(big_r: usize, r: usize, rng: &mut Rng) -> Result<(PatternFamily, u32)> {
    let words: Vec<u32> = (0..big_r).map(|_| rng.gen_range(0..1u32 << r)).collect();
    let b = words[rng.gen_range(0..big_r)];
    Ok((PatternFamily::new(r, words)?, b))
}

/// All four vanishing lemmas on `runs` random functionally folded tables.
/// Lemmas 1 and 3 run for every non-trivial irrep, lemmas 2 and 4 for every
/// irrep of dimension at least 2; every matrix entry `(p, q)` is used.
pub fn fold_selftest(
    group: &Group,
    catalog: &IrrepCatalog,
    big_r: usize,
    r: usize,
    runs: usize,
    seed: u64,
) -> Result<FoldSelftest> {
    let mut rng = seed::rng(seed, "fold_selftest");
    let mut out = Vec::with_capacity(runs);
    for run in 0..runs {
        let (patterns, b) = random_attained_family(big_r, r, &mut rng)?;
        let words = patterns.words().to_vec();
        let f = random_folded(
            group,
            FoldKind::Functional { patterns, b },
            big_r,
            seed::derive_indexed(seed, "fold_table", run as u64),
        )?;
        let mut reports = Vec::new();
        for (rho, irrep) in catalog.irreps().iter().enumerate() {
            if rho == catalog.trivial_index() {
                continue;
            }
            let lemmas: &[VanishingLemma] = if irrep.dim() >= 2 {
                &VanishingLemma::ALL
            } else {
                &[VanishingLemma::Trivial, VanishingLemma::OffPattern]
            };
            for p in 0..irrep.dim() {
                for q in 0..irrep.dim() {
                    reports.extend(check_vanishing_all(group, catalog, &f, rho, p, q, lemmas)?);
                }
            }
        }
        let max_unasserted_norm = reports.iter().map(|r| r.max_unasserted_norm).fold(0.0, f64::max);
        let passed = reports.iter().all(|r| r.passed);
        out.push(FoldRun { words, b, reports, max_unasserted_norm, passed });
    }
    let max_asserted_norm = out
        .iter()
        .flat_map(|run| run.reports.iter().map(|r| r.max_asserted_norm))
        .fold(0.0, f64::max);
    let passed = out.iter().all(|r| r.passed);
    Ok(FoldSelftest { group: group.name().to_string(), big_r, r, runs: out, max_asserted_norm, passed })
}
