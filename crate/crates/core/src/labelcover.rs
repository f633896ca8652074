//! Max-TSA instances and their smooth parallel repetition.
//!
//! A TSA constraint on bits `x₁ … x₅` with target `b` reads
//! `x₁ + x₂ + x₃ + x₄·x₅ = b (mod 2)`.
//!
//! In the `(r, t)`-smooth repetition a w-vertex asks for `r` constraints and
//! is answered with a word `ℓ ∈ [2^(5r)]`. Bit `5j + k` of `ℓ` is variable
//! slot `k` of constraint slot `j`. A v-vertex reduces `t` of those slots to
//! a single variable each and keeps the other `r − t` whole; its label packs
//! one bit per reduced slot and five per whole slot, in slot order.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::seq::{index, SliceRandom};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{self, Rng};

pub fn tsa_value(bits: [bool; 5]) -> bool {
    bits[0] ^ bits[1] ^ bits[2] ^ (bits[3] & bits[4])
}

pub fn tsa_eval(bits: [bool; 5], b: bool) -> bool {
    tsa_value(bits) == b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TsaConstraint {
    pub vars: [usize; 5],
    pub b: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxTsaInstance {
    n_vars: usize,
    constraints: Vec<TsaConstraint>,
}

impl MaxTsaInstance {
    pub fn new(n_vars: usize, constraints: Vec<TsaConstraint>) -> Result<Self> {
        for (i, c) in constraints.iter().enumerate() {
            if let Some(&v) = c.vars.iter().find(|&&v| v >= n_vars) {
                return Err(Error::IndexOutOfRange { index: v, bound: n_vars });
            }
            for a in 0..5 {
                if c.vars[a + 1..].contains(&c.vars[a]) {
                    return Err(Error::Parse(format!("constraint {i} repeats variable {}", c.vars[a])));
                }
            }
        }
        Ok(Self { n_vars, constraints })
    }

    /// Uniformly random scopes of five distinct variables with random targets.
    pub fn random(n_vars: usize, m: usize, rng: &mut Rng) -> Result<Self> {
        if n_vars < 5 {
            return Err(Error::ParameterOutOfRange(format!("n_vars = {n_vars} < 5")));
        }
        let constraints = (0..m)
            .map(|_| TsaConstraint { vars: random_scope(n_vars, rng), b: rng.gen() })
            .collect();
        Self::new(n_vars, constraints)
    }

    /// Random scopes whose targets are set so that a hidden assignment
    /// satisfies everything. Returns the instance and that assignment.
    pub fn planted(n_vars: usize, m: usize, rng: &mut Rng) -> Result<(Self, Vec<bool>)> {
        if n_vars < 5 {
            return Err(Error::ParameterOutOfRange(format!("n_vars = {n_vars} < 5")));
        }
        let assignment: Vec<bool> = (0..n_vars).map(|_| rng.gen()).collect();
        let constraints = (0..m)
            .map(|_| {
                let vars = random_scope(n_vars, rng);
                TsaConstraint { vars, b: tsa_value(vars.map(|v| assignment[v])) }
            })
            .collect();
        Ok((Self::new(n_vars, constraints)?, assignment))
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn constraints(&self) -> &[TsaConstraint] {
        &self.constraints
    }

    pub fn b_vector(&self) -> Vec<bool> {
        self.constraints.iter().map(|c| c.b).collect()
    }

    /// Same scopes, new targets.
    pub fn with_b(&self, b: &[bool]) -> Result<Self> {
        if b.len() != self.constraints.len() {
            return Err(Error::LengthMismatch { left: b.len(), right: self.constraints.len() });
        }
        let constraints = self
            .constraints
            .iter()
            .zip(b)
            .map(|(c, &b)| TsaConstraint { vars: c.vars, b })
            .collect();
        Ok(Self { n_vars: self.n_vars, constraints })
    }

    pub fn value(&self, assignment: &[bool]) -> Result<f64> {
        if assignment.len() != self.n_vars {
            return Err(Error::LengthMismatch { left: assignment.len(), right: self.n_vars });
        }
        if self.constraints.is_empty() {
            return Ok(1.0);
        }
        let sat = self
            .constraints
            .iter()
            .filter(|c| tsa_eval(c.vars.map(|v| assignment[v]), c.b))
            .count();
        Ok(sat as f64 / self.constraints.len() as f64)
    }

    /// Header line `n_vars`, then `i1 i2 i3 i4 i5 b` per constraint.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n_vars);
        for c in &self.constraints {
            let v = c.vars;
            let _ = writeln!(out, "{} {} {} {} {} {}", v[0], v[1], v[2], v[3], v[4], u8::from(c.b));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty TSA file".into()))?;
        let n_vars = header
            .parse()
            .map_err(|_| Error::Parse(format!("bad header {header:?}")))?;
        let constraints = lines
            .enumerate()
            .map(|(i, line)| {
                let nums: Vec<usize> = line
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| Error::Parse(format!("line {}: {t:?}", i + 2))))
                    .collect::<Result<_>>()?;
                if nums.len() != 6 || nums[5] > 1 {
                    return Err(Error::Parse(format!("line {}: expected five indices and a bit", i + 2)));
                }
                Ok(TsaConstraint { vars: [nums[0], nums[1], nums[2], nums[3], nums[4]], b: nums[5] == 1 })
            })
            .collect::<Result<_>>()?;
        Self::new(n_vars, constraints)
    }
}

fn random_scope(n_vars: usize, rng: &mut Rng) -> [usize; 5] {
    let picked = index::sample(rng, n_vars, 5);
    [picked.index(0), picked.index(1), picked.index(2), picked.index(3), picked.index(4)]
}

/// What a v-vertex asks about one constraint slot of its w-vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    Reduced { constraint: usize, var_slot: u8 },
    Whole { constraint: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VVertex {
    pub slots: Vec<Slot>,
}

/// `π_e: [R] → [L]`. Entry `j` is `Some(k)` when slot `j` is reduced to
/// variable slot `k` and `None` when it is kept whole.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Projection {
    pub reduced: Vec<Option<u8>>,
}

impl Projection {
    pub fn from_vertex(v: &VVertex) -> Self {
        let reduced = v
            .slots
            .iter()
            .map(|s| match s {
                Slot::Reduced { var_slot, .. } => Some(*var_slot),
                Slot::Whole { .. } => None,
            })
            .collect();
        Self { reduced }
    }

    pub fn apply(&self, label: u64) -> u64 {
        let mut out = 0u64;
        let mut pos = 0;
        for (j, slot) in self.reduced.iter().enumerate() {
            let block = (label >> (5 * j)) & 0x1f;
            match slot {
                Some(k) => {
                    out |= ((block >> k) & 1) << pos;
                    pos += 1;
                }
                None => {
                    out |= block << pos;
                    pos += 5;
                }
            }
        }
        out
    }

    pub fn reduced_count(&self) -> usize {
        self.reduced.iter().filter(|s| s.is_some()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub v: usize,
    pub w: usize,
    pub projection: Projection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UfgLabelCover {
    pub r: usize,
    pub t: usize,
    pub seed: u64,
    /// Scopes of the underlying TSA instance.
    pub scopes: Vec<[usize; 5]>,
    pub n_tsa_vars: usize,
    /// `I_w` for every w-vertex.
    pub w: Vec<Vec<usize>>,
    pub v: Vec<VVertex>,
    pub edges: Vec<Edge>,
    /// One target bit per TSA constraint.
    pub b: Vec<bool>,
    #[serde(skip)]
    edges_of_w: Vec<Vec<usize>>,
}

/// Largest `r` whose labels fit a `u64`.
pub const MAX_R: usize = 12;

pub fn parallel_repeat(
    tsa: &MaxTsaInstance,
    r: usize,
    t: usize,
    count_w: usize,
    edges_per_w: usize,
    seed: u64,
) -> Result<UfgLabelCover> {
    if r == 0 || r > MAX_R {
        return Err(Error::ParameterOutOfRange(format!("r = {r} must lie in 1..={MAX_R}")));
    }
    if t > r {
        return Err(Error::ParameterOutOfRange(format!("t = {t} exceeds r = {r}")));
    }
    if tsa.constraints.is_empty() {
        return Err(Error::ParameterOutOfRange("TSA instance has no constraints".into()));
    }
    let m = tsa.constraints.len();
    let mut rng = seed::rng(seed, "parallel_repeat");
    let mut w = Vec::with_capacity(count_w);
    let mut v: Vec<VVertex> = Vec::new();
    let mut v_index: HashMap<VVertex, usize> = HashMap::new();
    let mut edges = Vec::with_capacity(count_w * edges_per_w);
    let mut edges_of_w = Vec::with_capacity(count_w);
    for wi in 0..count_w {
        let iw: Vec<usize> = (0..r).map(|_| rng.gen_range(0..m)).collect();
        let mut own = Vec::with_capacity(edges_per_w);
        for _ in 0..edges_per_w {
            let mut order: Vec<usize> = (0..r).collect();
            order.shuffle(&mut rng);
            let mut reduced = vec![None; r];
            for &j in &order[..t] {
                reduced[j] = Some(rng.gen_range(0..5u8));
            }
            let slots = iw
                .iter()
                .zip(&reduced)
                .map(|(&constraint, red)| match red {
                    Some(var_slot) => Slot::Reduced { constraint, var_slot: *var_slot },
                    None => Slot::Whole { constraint },
                })
                .collect();
            let vertex = VVertex { slots };
            let vi = *v_index.entry(vertex.clone()).or_insert_with(|| {
                v.push(vertex);
                v.len() - 1
            });
            own.push(edges.len());
            edges.push(Edge { v: vi, w: wi, projection: Projection { reduced } });
        }
        w.push(iw);
        edges_of_w.push(own);
    }
    Ok(UfgLabelCover {
        r,
        t,
        seed,
        scopes: tsa.constraints.iter().map(|c| c.vars).collect(),
        n_tsa_vars: tsa.n_vars,
        w,
        v,
        edges,
        b: tsa.b_vector(),
        edges_of_w,
    })
}

impl UfgLabelCover {
    /// Restores derived indices after deserialization.
    pub fn reindex(&mut self) {
        self.edges_of_w = vec![Vec::new(); self.w.len()];
        for (i, e) in self.edges.iter().enumerate() {
            self.edges_of_w[e.w].push(i);
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut lc: Self = serde_json::from_str(text)?;
        lc.reindex();
        Ok(lc)
    }

    /// `R = 2^(5r)`.
    pub fn big_r(&self) -> u64 {
        1u64 << (5 * self.r)
    }

    /// `L = 2^(t + 5(r − t))`.
    pub fn big_l(&self) -> u64 {
        1u64 << (self.t + 5 * (self.r - self.t))
    }

    pub fn edges_of(&self, w: usize) -> &[usize] {
        &self.edges_of_w[w]
    }

    /// `p_j(ℓ)`: TSA value of the five bits of slot `j`.
    pub fn extractor(&self, j: usize, label: u64) -> bool {
        let block = (label >> (5 * j)) & 0x1f;
        tsa_value(std::array::from_fn(|k| (block >> k) & 1 == 1))
    }

    /// `(p_1(ℓ), …, p_r(ℓ))` with `p_j` at bit `j`.
    pub fn pattern(&self, label: u64) -> u32 {
        (0..self.r).map(|j| u32::from(self.extractor(j, label)) << j).sum()
    }

    /// `(b_{I_w(1)}, …, b_{I_w(r)})` with the `j`-th target at bit `j`.
    pub fn b_word(&self, w: usize) -> u32 {
        self.w[w].iter().enumerate().map(|(j, &c)| u32::from(self.b[c]) << j).sum()
    }

    pub fn with_b(&self, b: &[bool]) -> Result<Self> {
        if b.len() != self.b.len() {
            return Err(Error::LengthMismatch { left: b.len(), right: self.b.len() });
        }
        Ok(Self { b: b.to_vec(), ..self.clone() })
    }

    /// Labels of the provers that answer honestly from a TSA assignment.
    pub fn lift_assignment(&self, assignment: &[bool]) -> Result<(Vec<u64>, Vec<u64>)> {
        if assignment.len() != self.n_tsa_vars {
            return Err(Error::LengthMismatch { left: assignment.len(), right: self.n_tsa_vars });
        }
        let block = |c: usize| -> u64 {
            self.scopes[c]
                .iter()
                .enumerate()
                .map(|(k, &var)| u64::from(assignment[var]) << k)
                .sum()
        };
        let sigma_r = self
            .w
            .iter()
            .map(|iw| iw.iter().enumerate().map(|(j, &c)| block(c) << (5 * j)).sum())
            .collect();
        let sigma_l = self
            .v
            .iter()
            .map(|vert| {
                let mut out = 0u64;
                let mut pos = 0;
                for slot in &vert.slots {
                    match *slot {
                        Slot::Reduced { constraint, var_slot } => {
                            out |= u64::from(assignment[self.scopes[constraint][var_slot as usize]]) << pos;
                            pos += 1;
                        }
                        Slot::Whole { constraint } => {
                            out |= block(constraint) << pos;
                            pos += 5;
                        }
                    }
                }
                out
            })
            .collect();
        Ok((sigma_l, sigma_r))
    }

    pub fn edge_satisfied(&self, edge: &Edge, sigma_l: &[u64], sigma_r: &[u64]) -> bool {
        let label = sigma_r[edge.w];
        edge.projection.apply(label) == sigma_l[edge.v] && self.pattern(label) == self.b_word(edge.w)
    }
}

/// Fraction of edges whose projection and extractor conditions both hold.
pub fn lc_value(lc: &UfgLabelCover, sigma_l: &[u64], sigma_r: &[u64]) -> Result<f64> {
    if sigma_l.len() != lc.v.len() {
        return Err(Error::LengthMismatch { left: sigma_l.len(), right: lc.v.len() });
    }
    if sigma_r.len() != lc.w.len() {
        return Err(Error::LengthMismatch { left: sigma_r.len(), right: lc.w.len() });
    }
    if lc.edges.is_empty() {
        return Ok(1.0);
    }
    let sat = lc.edges.iter().filter(|e| lc.edge_satisfied(e, sigma_l, sigma_r)).count();
    Ok(sat as f64 / lc.edges.len() as f64)
}

/// `C(S, π)`: whether two distinct labels of `S` share an image.
pub fn collides(set: &[u64], projection: &Projection) -> bool {
    let mut seen = std::collections::HashSet::with_capacity(set.len());
    !set.iter().all(|&l| seen.insert(projection.apply(l)))
}

fn binomial_sigma(p: f64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        (p * (1.0 - p) / n as f64).sqrt()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothnessReport {
    pub set_size: usize,
    pub w: usize,
    pub edges: usize,
    pub collisions: usize,
    pub mean: f64,
    pub sigma_hat: f64,
    /// `|S|² t / r`.
    pub bound: f64,
    pub passed: bool,
}

/// Collision rate of a fixed `S ⊆ [R]` over the edges of `w`.
pub fn smoothness_check(lc: &UfgLabelCover, set: &[u64], w: usize) -> Result<SmoothnessReport> {
    if set.is_empty() {
        return Err(Error::ParameterOutOfRange("S must be nonempty".into()));
    }
    if w >= lc.w.len() {
        return Err(Error::IndexOutOfRange { index: w, bound: lc.w.len() });
    }
    let edges = lc.edges_of(w);
    let collisions = edges.iter().filter(|&&e| collides(set, &lc.edges[e].projection)).count();
    let mean = if edges.is_empty() { 0.0 } else { collisions as f64 / edges.len() as f64 };
    let sigma_hat = binomial_sigma(mean, edges.len());
    let bound = (set.len() * set.len()) as f64 * lc.t as f64 / lc.r as f64;
    Ok(SmoothnessReport {
        set_size: set.len(),
        w,
        edges: edges.len(),
        collisions,
        mean,
        sigma_hat,
        bound,
        passed: mean <= bound + 3.0 * sigma_hat,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CollapseReport {
    pub set_size: usize,
    pub d0: f64,
    pub trials: usize,
    pub hits: usize,
    pub probability: f64,
    pub sigma_hat: f64,
    /// `|S|^(−d₀)`.
    pub bound: f64,
    /// `|S| ≥ 16^(t/(1−d₀))`, where `|π_e(S)| ≥ |S|/16^t` rules the event out.
    pub exact_zero_branch: bool,
    pub passed: bool,
}

/// Distinct uniform labels of `[R]`.
pub fn random_label_set(lc: &UfgLabelCover, size: usize, rng: &mut Rng) -> Result<Vec<u64>> {
    if size as u64 > lc.big_r() {
        return Err(Error::ParameterOutOfRange(format!("|S| = {size} exceeds R")));
    }
    let mut set = std::collections::BTreeSet::new();
    while set.len() < size {
        set.insert(rng.gen_range(0..lc.big_r()));
    }
    Ok(set.into_iter().collect())
}

/// Empirical `Pr[|π_e(S)| < |S|^{d₀}]` over `trials` draws of a w-vertex, an
/// edge at it, and a uniform `S` of the given size.
pub fn collapse_check(
    lc: &UfgLabelCover,
    set_size: usize,
    d0: f64,
    trials: usize,
    rng: &mut Rng,
) -> Result<CollapseReport> {
    if set_size == 0 {
        return Err(Error::ParameterOutOfRange("S must be nonempty".into()));
    }
    if !(0.0..1.0).contains(&d0) {
        return Err(Error::ParameterOutOfRange(format!("d0 = {d0} outside [0, 1)")));
    }
    let with_edges: Vec<usize> = (0..lc.w.len()).filter(|&w| !lc.edges_of(w).is_empty()).collect();
    if with_edges.is_empty() {
        return Err(Error::ParameterOutOfRange("label cover has no edges".into()));
    }
    let threshold = (set_size as f64).powf(d0);
    let mut hits = 0;
    for _ in 0..trials {
        let w = with_edges[rng.gen_range(0..with_edges.len())];
        let own = lc.edges_of(w);
        let edge = &lc.edges[own[rng.gen_range(0..own.len())]];
        let set = random_label_set(lc, set_size, rng)?;
        let image: std::collections::HashSet<u64> =
            set.iter().map(|&l| edge.projection.apply(l)).collect();
        if (image.len() as f64) < threshold {
            hits += 1;
        }
    }
    let probability = if trials == 0 { 0.0 } else { hits as f64 / trials as f64 };
    let sigma_hat = binomial_sigma(probability, trials);
    let bound = (set_size as f64).powf(-d0);
    let exact_zero_branch =
        (set_size as f64).ln() >= lc.t as f64 * 16f64.ln() / (1.0 - d0);
    let passed = if exact_zero_branch {
        hits == 0
    } else {
        probability <= bound + 3.0 * sigma_hat
    };
    Ok(CollapseReport {
        set_size,
        d0,
        trials,
        hits,
        probability,
        sigma_hat,
        bound,
        exact_zero_branch,
        passed,
    })
}
