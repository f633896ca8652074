//! Max-3-LIN over a finite group: instances, evaluation and solvers.
//!
//! An instance is a list of equations `x_{i₁} · x_{i₂} · x_{i₃} = c`.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng as _;
use serde::Serialize;

use crate::catalog;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::group::{abelianize, AbelianDecomposition, Elem, Group};
use crate::seed::{self, Rng};

/// Default cap on the number of assignments brute force may visit.
pub const BRUTE_FORCE_CAP: u128 = 10_000_000;
/// Restarts used when the abelianized system has no solution.
pub const FALLBACK_RESTARTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LinConstraint {
    pub vars: [usize; 3],
    pub rhs: Elem,
}

#[derive(Debug, Clone)]
pub struct Max3LinInstance {
    group: Arc<Group>,
    n_vars: usize,
    constraints: Vec<LinConstraint>,
}

pub type Assignment = Vec<Elem>;

impl Max3LinInstance {
    pub fn new(group: Arc<Group>, n_vars: usize, constraints: Vec<LinConstraint>) -> Result<Self> {
        for c in &constraints {
            if let Some(&v) = c.vars.iter().find(|&&v| v >= n_vars) {
                return Err(Error::IndexOutOfRange { index: v, bound: n_vars });
            }
            let [a, b, d] = c.vars;
            if a == b || a == d || b == d {
                return Err(Error::Parse(format!("scope {:?} repeats a variable", c.vars)));
            }
            if c.rhs.index() >= group.order() {
                return Err(Error::IndexOutOfRange { index: c.rhs.index(), bound: group.order() });
            }
        }
        Ok(Self { group, n_vars, constraints })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn group_arc(&self) -> Arc<Group> {
        Arc::clone(&self.group)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn constraints(&self) -> &[LinConstraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Header `group n_vars m`, then `i1 i2 i3 c` per constraint.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.group.name(), self.n_vars, self.constraints.len());
        for c in &self.constraints {
            let _ = writeln!(out, "{} {} {} {}", c.vars[0], c.vars[1], c.vars[2], c.rhs);
        }
        out
    }

    /// Parses the text format, resolving the group name among the built-ins.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, |name| catalog::builtin_group(name).map(Arc::new))
    }

    pub fn parse_with(text: &str, resolve: impl FnOnce(&str) -> Result<Arc<Group>>) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| Error::Parse("empty instance file".into()))?
            .split_whitespace()
            .collect();
        if header.len() != 3 {
            return Err(Error::Parse("header must be `group n_vars m`".into()));
        }
        let group = resolve(header[0])?;
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad number {s:?}")));
        let n_vars = num(header[1])?;
        let m = num(header[2])?;
        let constraints = lines
            .map(|line| {
                let f: Vec<usize> = line.split_whitespace().map(num).collect::<Result<_>>()?;
                if f.len() != 4 {
                    return Err(Error::Parse(format!("expected `i1 i2 i3 c`, got {line:?}")));
                }
                let rhs = group.elem(f[3])?;
                Ok(LinConstraint { vars: [f[0], f[1], f[2]], rhs })
            })
            .collect::<Result<Vec<_>>>()?;
        if constraints.len() != m {
            return Err(Error::Parse(format!("header announces {m} constraints, found {}", constraints.len())));
        }
        Self::new(group, n_vars, constraints)
    }
}

fn satisfied(group: &Group, c: &LinConstraint, a: &[Elem]) -> bool {
    group.mul(group.mul(a[c.vars[0]], a[c.vars[1]]), a[c.vars[2]]) == c.rhs
}

/// Fraction of satisfied constraints.
pub fn evaluate(instance: &Max3LinInstance, assignment: &[Elem]) -> Result<f64> {
    if assignment.len() != instance.n_vars {
        return Err(Error::IndexOutOfRange { index: assignment.len(), bound: instance.n_vars });
    }
    if let Some(e) = assignment.iter().find(|e| e.index() >= instance.group.order()) {
        return Err(Error::IndexOutOfRange { index: e.index(), bound: instance.group.order() });
    }
    if instance.constraints.is_empty() {
        return Ok(1.0);
    }
    let sat = instance
        .constraints
        .iter()
        .filter(|c| satisfied(&instance.group, c, assignment))
        .count();
    Ok(sat as f64 / instance.constraints.len() as f64)
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub value: f64,
    pub assignment: Assignment,
}

/// Exact optimum. Ties go to the lexicographically least assignment, with
/// variable 0 most significant.
pub fn brute_force(instance: &Max3LinInstance) -> Result<SolveResult> {
    brute_force_capped(instance, BRUTE_FORCE_CAP)
}

pub fn brute_force_capped(instance: &Max3LinInstance, cap: u128) -> Result<SolveResult> {
    let n = instance.n_vars;
    let group = &instance.group;
    Domain::new(group.order(), n).checked_size(cap)?;
    let order = group.order() as u8;
    let mut current = vec![Elem(0); n];
    let mut best_count = None;
    let mut best = current.clone();
    loop {
        let count = instance
            .constraints
            .iter()
            .filter(|c| satisfied(group, c, &current))
            .count();
        if best_count.is_none_or(|b| count > b) {
            best_count = Some(count);
            best.clone_from(&current);
        }
        // Odometer with the last variable varying fastest.
        let mut i = n;
        loop {
            if i == 0 {
                let m = instance.constraints.len();
                let value = if m == 0 { 1.0 } else { best_count.unwrap_or(0) as f64 / m as f64 };
                return Ok(SolveResult { value, assignment: best });
            }
            i -= 1;
            current[i].0 += 1;
            if current[i].0 < order {
                break;
            }
            current[i].0 = 0;
        }
    }
}

pub fn random_assignment(group: &Group, n_vars: usize, rng: &mut Rng) -> Assignment {
    (0..n_vars).map(|_| Elem(rng.gen_range(0..group.order()) as u8)).collect()
}

/// Best of `restarts` uniform assignments.
pub fn random_baseline(instance: &Max3LinInstance, restarts: usize, seed: u64) -> Result<SolveResult> {
    if restarts == 0 {
        return Err(Error::ParameterOutOfRange("restarts must be at least 1".into()));
    }
    let mut rng = seed::rng(seed, "random_baseline");
    let mut best: Option<SolveResult> = None;
    for _ in 0..restarts {
        let assignment = random_assignment(&instance.group, instance.n_vars, &mut rng);
        let value = evaluate(instance, &assignment)?;
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(SolveResult { value, assignment });
        }
    }
    Ok(best.expect("restarts >= 1"))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b)`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = ext_gcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

/// Linear system `A x = c` over `Z_m`, reduced incrementally to an echelon
/// form whose pivots divide `m` and whose row span is closed under the
/// annihilator rows `(m/d)·row`. Back-substitution on such a form succeeds
/// exactly when the system is solvable.
#[derive(Debug, Clone)]
pub struct ModularSystem {
    modulus: u64,
    n: usize,
    pivots: Vec<Option<(Vec<u64>, u64)>>,
    consistent: bool,
}

impl ModularSystem {
    pub fn new(modulus: u64, n: usize) -> Self {
        Self { modulus, n, pivots: vec![None; n], consistent: true }
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    pub fn add_equation(&mut self, coeffs: &[(usize, u64)], rhs: u64) {
        let m = self.modulus;
        let mut row = vec![0u64; self.n];
        for &(var, c) in coeffs {
            row[var] = (row[var] + c) % m;
        }
        self.insert(row, rhs % m);
    }

    fn insert(&mut self, row: Vec<u64>, rhs: u64) {
        let m = self.modulus;
        let mut pending = vec![(row, rhs)];
        while let Some((mut row, mut rhs)) = pending.pop() {
            let Some(col) = row.iter().position(|&a| a != 0) else {
                if rhs != 0 {
                    self.consistent = false;
                }
                continue;
            };
            match self.pivots[col].take() {
                None => {
                    let d = gcd(row[col], m);
                    let u = unit_to_divisor(row[col], m);
                    for a in row.iter_mut() {
                        *a = *a * u % m;
                    }
                    rhs = rhs * u % m;
                    debug_assert_eq!(row[col], d);
                    let k = m / d;
                    let ann: Vec<u64> = row.iter().map(|a| a * k % m).collect();
                    pending.push((ann, rhs * k % m));
                    self.pivots[col] = Some((row, rhs));
                }
                Some((prow, prhs)) => {
                    let (a, b) = (prow[col] as i64, row[col] as i64);
                    let (g, s, t) = ext_gcd(a, b);
                    let (bg, ag) = (b / g, a / g);
                    let mi = m as i64;
                    let comb = |x: u64, y: u64, p: i64, q: i64| -> u64 {
                        (p * x as i64 + q * y as i64).rem_euclid(mi) as u64
                    };
                    let new_p: Vec<u64> = prow.iter().zip(&row).map(|(&x, &y)| comb(x, y, s, t)).collect();
                    let new_prhs = comb(prhs, rhs, s, t);
                    let rest: Vec<u64> = prow.iter().zip(&row).map(|(&x, &y)| comb(x, y, bg, -ag)).collect();
                    let rest_rhs = comb(prhs, rhs, bg, -ag);
                    // A smaller pivot needs its own annihilator row.
                    if new_p[col] == prow[col] {
                        self.pivots[col] = Some((new_p, new_prhs));
                    } else {
                        pending.push((new_p, new_prhs));
                    }
                    pending.push((rest, rest_rhs));
                }
            }
        }
    }

    /// A solution with free variables at 0, or `None` when infeasible.
    pub fn solve(&self) -> Option<Vec<u64>> {
        if !self.consistent {
            return None;
        }
        let m = self.modulus;
        let mut x = vec![0u64; self.n];
        for col in (0..self.n).rev() {
            let Some((row, rhs)) = &self.pivots[col] else { continue };
            let tail: u64 = row[col + 1..]
                .iter()
                .zip(&x[col + 1..])
                .fold(0, |acc, (&a, &v)| (acc + a * v) % m);
            let residual = (rhs + m - tail) % m;
            let d = row[col];
            if !residual.is_multiple_of(d) {
                return None;
            }
            x[col] = residual / d;
        }
        Some(x)
    }
}

/// A unit `u` of `Z_m` with `u·a ≡ gcd(a, m)`.
fn unit_to_divisor(a: u64, m: u64) -> u64 {
    let d = gcd(a, m);
    (1..=m.max(1))
        .find(|&u| gcd(u, m) == 1 && u * a % m == d % m)
        .expect("a unit always exists")
}

#[derive(Debug, Clone, Serialize)]
pub struct AbelianReport {
    pub value: f64,
    pub assignment: Assignment,
    /// Whether the abelianized system had a solution.
    pub consistent: bool,
    /// Set when the random-restart fallback produced the answer.
    pub fallback: bool,
    /// Whether the abelian solution satisfies every projected equation.
    pub residue_check: bool,
    pub lift_trials: usize,
    pub commutator_order: usize,
    pub invariant_factors: Vec<u32>,
}

/// Solves the abelianized system, one invariant factor at a time. Returns
/// the coset word of each variable, or `None` when infeasible.
pub fn solve_abelianized(
    instance: &Max3LinInstance,
    ab: &AbelianDecomposition,
) -> Option<Vec<Vec<u32>>> {
    let factors = ab.invariant_factors();
    let mut words = vec![vec![0u32; factors.len()]; instance.n_vars];
    for (k, &m) in factors.iter().enumerate() {
        let mut sys = ModularSystem::new(m as u64, instance.n_vars);
        for c in &instance.constraints {
            let coeffs: Vec<(usize, u64)> = c.vars.iter().map(|&v| (v, 1)).collect();
            sys.add_equation(&coeffs, ab.project(c.rhs)[k] as u64);
        }
        let x = sys.solve()?;
        for (w, v) in words.iter_mut().zip(x) {
            w[k] = v as u32;
        }
    }
    Some(words)
}

fn projected_residue_ok(instance: &Max3LinInstance, ab: &AbelianDecomposition, words: &[Vec<u32>]) -> bool {
    instance.constraints.iter().all(|c| {
        let sum = ab.add(&ab.add(&words[c.vars[0]], &words[c.vars[1]]), &words[c.vars[2]]);
        sum == ab.project(c.rhs)
    })
}

/// Solves over `G/[G,G]` and lifts each variable to a uniform element of
/// its coset, keeping the best of `lift_trials` lifts. Falls back to
/// random restarts when the abelian system is infeasible.
pub fn abelian_solve(instance: &Max3LinInstance, lift_trials: usize, seed: u64) -> Result<AbelianReport> {
    if lift_trials == 0 {
        return Err(Error::ParameterOutOfRange("lift_trials must be at least 1".into()));
    }
    let group = &instance.group;
    let ab = abelianize(group);
    let words = solve_abelianized(instance, &ab);
    let base = AbelianReport {
        value: 0.0,
        assignment: Vec::new(),
        consistent: false,
        fallback: false,
        residue_check: false,
        lift_trials,
        commutator_order: ab.commutator().len(),
        invariant_factors: ab.invariant_factors().to_vec(),
    };
    let words = match words {
        Some(w) if projected_residue_ok(instance, &ab, &w) => w,
        _ => {
            let fb = random_baseline(instance, FALLBACK_RESTARTS, seed::derive(seed, "fallback"))?;
            return Ok(AbelianReport { value: fb.value, assignment: fb.assignment, fallback: true, ..base });
        }
    };
    let cosets: Vec<Vec<Elem>> = words.iter().map(|w| ab.coset(w)).collect();
    let mut rng = seed::rng(seed, "abelian_lift");
    let mut best: Option<(f64, Assignment)> = None;
    for _ in 0..lift_trials {
        let assignment: Assignment = cosets.iter().map(|c| c[rng.gen_range(0..c.len())]).collect();
        let value = evaluate(instance, &assignment)?;
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, assignment));
        }
    }
    let (value, assignment) = best.expect("lift_trials >= 1");
    Ok(AbelianReport { value, assignment, consistent: true, residue_check: true, ..base })
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftCheck {
    pub coset_triples: usize,
    /// Every `(coset triple, c)` with consistent projections and its count
    /// of satisfying lifts out of `|[G,G]|³`.
    pub min_fraction: f64,
    pub max_fraction: f64,
    pub expected: f64,
    pub exact: bool,
}

/// For every coset triple and every `c` in the product coset, counts the
/// lifts `(x₁, x₂, x₃)` with `x₁x₂x₃ = c` exhaustively.
pub fn exhaustive_lift_check(group: &Group) -> LiftCheck {
    let ab = abelianize(group);
    let k = ab.commutator().len();
    let words: Vec<Vec<u32>> = {
        let mut seen = std::collections::BTreeSet::new();
        group.elements().filter_map(|g| {
            let w = ab.project(g).to_vec();
            seen.insert(w.clone()).then_some(w)
        }).collect()
    };
    let total = k * k * k;
    let mut min_count = usize::MAX;
    let mut max_count = 0;
    let mut triples = 0;
    for a in &words {
        for b in &words {
            for d in &words {
                triples += 1;
                let (ca, cb, cd) = (ab.coset(a), ab.coset(b), ab.coset(d));
                let target = ab.add(&ab.add(a, b), d);
                for c in ab.coset(&target) {
                    let mut count = 0;
                    for &x in &ca {
                        for &y in &cb {
                            for &z in &cd {
                                if group.mul(group.mul(x, y), z) == c {
                                    count += 1;
                                }
                            }
                        }
                    }
                    min_count = min_count.min(count);
                    max_count = max_count.max(count);
                }
            }
        }
    }
    let expected = 1.0 / k as f64;
    LiftCheck {
        coset_triples: triples,
        min_fraction: min_count as f64 / total as f64,
        max_fraction: max_count as f64 / total as f64,
        expected,
        exact: min_count * k == total && max_count * k == total,
    }
}

/// Random scopes of three distinct variables, right-hand sides chosen so
/// that a hidden uniform assignment satisfies everything.
pub fn planted_instance(
    group: Arc<Group>,
    n_vars: usize,
    m: usize,
    rng: &mut Rng,
) -> Result<(Max3LinInstance, Assignment)> {
    if n_vars < 3 {
        return Err(Error::ParameterOutOfRange(format!("n_vars = {n_vars} < 3")));
    }
    let hidden = random_assignment(&group, n_vars, rng);
    let constraints = (0..m)
        .map(|_| {
            let vars = random_scope(n_vars, rng);
            let rhs = group.mul(group.mul(hidden[vars[0]], hidden[vars[1]]), hidden[vars[2]]);
            LinConstraint { vars, rhs }
        })
        .collect();
    Ok((Max3LinInstance::new(group, n_vars, constraints)?, hidden))
}

/// Random scopes with independent uniform right-hand sides.
pub fn random_instance(group: Arc<Group>, n_vars: usize, m: usize, rng: &mut Rng) -> Result<Max3LinInstance> {
    if n_vars < 3 {
        return Err(Error::ParameterOutOfRange(format!("n_vars = {n_vars} < 3")));
    }
    let constraints = (0..m)
        .map(|_| LinConstraint {
            vars: random_scope(n_vars, rng),
            rhs: Elem(rng.gen_range(0..group.order()) as u8),
        })
        .collect();
    Max3LinInstance::new(group, n_vars, constraints)
}

fn random_scope(n_vars: usize, rng: &mut Rng) -> [usize; 3] {
    let p = rand::seq::index::sample(rng, n_vars, 3);
    [p.index(0), p.index(1), p.index(2)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_group;
    use proptest::prelude::*;

    fn grp(name: &str) -> Arc<Group> {
        Arc::new(builtin_group(name).unwrap())
    }

    #[test]
    fn single_identity_constraint() {
        let inst = Max3LinInstance::new(grp("Z2"), 3, vec![LinConstraint { vars: [0, 1, 2], rhs: Elem(0) }]).unwrap();
        assert_eq!(evaluate(&inst, &[Elem(0); 3]).unwrap(), 1.0);
        assert_eq!(brute_force(&inst).unwrap().value, 1.0);
    }

    #[test]
    fn contradictory_pair() {
        let c = |rhs| LinConstraint { vars: [0, 1, 2], rhs };
        let inst = Max3LinInstance::new(grp("S3"), 3, vec![c(Elem(0)), c(Elem(1))]).unwrap();
        let res = brute_force(&inst).unwrap();
        assert_eq!(res.value, 0.5);
        assert_eq!(res.assignment, vec![Elem(0); 3]);
    }

    #[test]
    fn evaluate_rejects_short_assignment() {
        let inst = Max3LinInstance::new(grp("Z2"), 3, vec![]).unwrap();
        assert!(matches!(evaluate(&inst, &[Elem(0)]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn brute_force_cap() {
        let inst = Max3LinInstance::new(grp("S3"), 10, vec![]).unwrap();
        assert!(matches!(brute_force(&inst), Err(Error::DomainTooLarge { .. })));
    }

    #[test]
    fn planted_is_fully_satisfiable() {
        let mut rng = seed::rng(2, "t");
        let (inst, hidden) = planted_instance(grp("S3"), 5, 12, &mut rng).unwrap();
        assert_eq!(evaluate(&inst, &hidden).unwrap(), 1.0);
        let res = brute_force(&inst).unwrap();
        assert_eq!(res.value, 1.0);
        assert_eq!(evaluate(&inst, &res.assignment).unwrap(), 1.0);
    }

    #[test]
    fn abelian_group_lift_is_exact() {
        let mut rng = seed::rng(5, "t");
        let (inst, _) = planted_instance(grp("Z6"), 30, 200, &mut rng).unwrap();
        let rep = abelian_solve(&inst, 1, 0).unwrap();
        assert!(rep.consistent && !rep.fallback);
        assert_eq!(rep.value, 1.0);
    }

    #[test]
    fn contradictory_shadow_falls_back() {
        // (12) and (13) both project to the odd coset; x·y·z = e and
        // x·y·z = (12) then disagree in the sign quotient.
        let c = |rhs| LinConstraint { vars: [0, 1, 2], rhs };
        let inst = Max3LinInstance::new(grp("S3"), 3, vec![c(Elem(0)), c(Elem(1))]).unwrap();
        let rep = abelian_solve(&inst, 1, 0).unwrap();
        assert!(rep.fallback && !rep.consistent);
        let base = random_baseline(&inst, FALLBACK_RESTARTS, seed::derive(0, "fallback")).unwrap();
        assert!(rep.value >= base.value);
    }

    #[test]
    fn s3_lift_check_is_exactly_one_third() {
        let check = exhaustive_lift_check(&builtin_group("S3").unwrap());
        assert!(check.exact);
        assert_eq!(check.min_fraction, 1.0 / 3.0);
        assert_eq!(check.coset_triples, 8);
    }

    #[test]
    fn text_round_trip() {
        let mut rng = seed::rng(8, "t");
        let inst = random_instance(grp("Q8"), 6, 9, &mut rng).unwrap();
        let back = Max3LinInstance::parse(&inst.to_text()).unwrap();
        assert_eq!(back.constraints(), inst.constraints());
        assert_eq!(back.n_vars(), 6);
    }

    #[test]
    fn baseline_monotone_in_restarts() {
        let mut rng = seed::rng(9, "t");
        let inst = random_instance(grp("S3"), 5, 15, &mut rng).unwrap();
        let one = random_baseline(&inst, 1, 4).unwrap();
        let many = random_baseline(&inst, 100, 4).unwrap();
        assert!(many.value >= one.value);
    }

    fn brute_modular(m: u64, n: usize, eqs: &[(Vec<u64>, u64)]) -> bool {
        let total = m.pow(n as u32);
        (0..total).any(|mut code| {
            let x: Vec<u64> = (0..n).map(|_| { let v = code % m; code /= m; v }).collect();
            eqs.iter().all(|(row, rhs)| row.iter().zip(&x).map(|(a, v)| a * v).sum::<u64>() % m == *rhs)
        })
    }

    proptest! {
        #[test]
        fn modular_elimination_matches_enumeration(
            m in prop::sample::select(vec![2u64, 3, 4, 6, 8, 9, 12]),
            rows in prop::collection::vec((prop::collection::vec(0u64..12, 3), 0u64..12), 0..6),
        ) {
            let n = 3;
            let eqs: Vec<(Vec<u64>, u64)> = rows.into_iter()
                .map(|(r, c)| (r.into_iter().map(|a| a % m).collect(), c % m))
                .collect();
            let mut sys = ModularSystem::new(m, n);
            for (row, rhs) in &eqs {
                let coeffs: Vec<(usize, u64)> = row.iter().copied().enumerate().collect();
                sys.add_equation(&coeffs, *rhs);
            }
            let expected = brute_modular(m, n, &eqs);
            match sys.solve() {
                Some(x) => {
                    prop_assert!(expected);
                    for (row, rhs) in &eqs {
                        prop_assert_eq!(row.iter().zip(&x).map(|(a, v)| a * v).sum::<u64>() % m, *rhs);
                    }
                }
                None => prop_assert!(!expected),
            }
        }

        #[test]
        fn brute_force_dominates(seed in 0u64..1000) {
            let mut rng = seed::rng(seed, "prop");
            let inst = random_instance(grp("S3"), 5, 10, &mut rng).unwrap();
            let best = brute_force(&inst).unwrap().value;
            prop_assert!(best >= random_baseline(&inst, 3, seed).unwrap().value);
            prop_assert!(best >= abelian_solve(&inst, 3, seed).unwrap().value);
        }
    }
}
