//! Gadget reduction from UFG label cover to Max-3-LIN over `G`.
//!
//! Each sampled test picks an edge `e = (v, w)`, uniform `y ∈ G^L` and
//! `x ∈ G^R`, noise `η ∈ G^R`, and sets `z_i = x_i⁻¹ · η_i · y_{π_e(i)}⁻¹`.
//! With `x̄, F` the functional canonicalization of `x` under the extractor
//! patterns, `c = y₀` and `ȳ = y · c⁻¹`, the emitted equation is
//!
//! `f_w(x̄) · g_w(z) · h_v(ȳ) = F(b_w)⁻¹ · c⁻¹`.
//!
//! The three tables live in disjoint variable namespaces, and nothing but the
//! right-hand side depends on the target bits `b`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng as _;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::folding::{canonicalize, PatternFamily};
use crate::group::{Elem, Group, Tuple};
use crate::labelcover::UfgLabelCover;
use crate::seed::{self, Rng};
use crate::solvers::{evaluate, Assignment, LinConstraint, Max3LinInstance};

/// Largest `R` for which full tuples are sampled.
pub const MAX_SAMPLED_R: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "table", rename_all = "lowercase")]
pub enum VarId {
    /// Functionally folded table of `w` at a canonical representative.
    Folded { w: usize, key: Tuple },
    /// Unfolded table of `w`.
    Free { w: usize, key: Tuple },
    /// Classically right-folded table of `v` at a tuple with `key₀ = e`.
    Classical { v: usize, key: Tuple },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GadgetConstraint {
    pub edge: usize,
    pub vars: [VarId; 3],
    pub rhs: Elem,
}

/// The raw draw behind one constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GadgetSample {
    pub edge: usize,
    pub x: Tuple,
    pub y: Tuple,
    pub eta: Tuple,
    pub z: Tuple,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum GadgetMode {
    Perfect,
    Imperfect { epsilon: f64 },
}

impl GadgetMode {
    fn validate(self) -> Result<Self> {
        if let GadgetMode::Imperfect { epsilon } = self {
            if !(0.0..=1.0).contains(&epsilon) {
                return Err(Error::ParameterOutOfRange(format!("epsilon = {epsilon} outside [0, 1]")));
            }
        }
        Ok(self)
    }
}

/// Extractor patterns `ℓ ↦ (p_1(ℓ), …, p_r(ℓ))` over `[R]`.
pub fn extractor_family(lc: &UfgLabelCover) -> Result<PatternFamily> {
    let big_r = lc.big_r();
    if big_r > MAX_SAMPLED_R {
        return Err(Error::ParameterOutOfRange(format!(
            "R = {big_r} exceeds {MAX_SAMPLED_R}; sampling full tuples is infeasible"
        )));
    }
    PatternFamily::new(lc.r, (0..big_r).map(|l| lc.pattern(l)).collect())
}

/// Samples constraints from a fixed label cover.
pub struct GadgetSampler<'a> {
    lc: &'a UfgLabelCover,
    group: &'a Group,
    patterns: PatternFamily,
    mode: GadgetMode,
}

impl<'a> GadgetSampler<'a> {
    pub fn new(lc: &'a UfgLabelCover, group: &'a Group, mode: GadgetMode) -> Result<Self> {
        if lc.edges.is_empty() {
            return Err(Error::ParameterOutOfRange("label cover has no edges".into()));
        }
        Ok(Self { lc, group, patterns: extractor_family(lc)?, mode: mode.validate()? })
    }

    pub fn patterns(&self) -> &PatternFamily {
        &self.patterns
    }

    fn uniform(&self, n: usize, rng: &mut Rng) -> Tuple {
        (0..n).map(|_| Elem(rng.gen_range(0..self.group.order()) as u8)).collect()
    }

    pub fn draw(&self, rng: &mut Rng) -> GadgetSample {
        let g = self.group;
        let edge = rng.gen_range(0..self.lc.edges.len());
        let projection = &self.lc.edges[edge].projection;
        let big_r = self.lc.big_r() as usize;
        let y = self.uniform(self.lc.big_l() as usize, rng);
        let x = self.uniform(big_r, rng);
        let eta: Tuple = match self.mode {
            GadgetMode::Perfect => g.identity_tuple(big_r),
            GadgetMode::Imperfect { epsilon } => (0..big_r)
                .map(|_| {
                    if rng.gen_bool(epsilon) {
                        Elem(rng.gen_range(0..g.order()) as u8)
                    } else {
                        g.identity()
                    }
                })
                .collect(),
        };
        let z = (0..big_r)
            .map(|i| {
                let yi = y[projection.apply(i as u64) as usize];
                g.mul(g.mul(g.inv(x[i]), eta[i]), g.inv(yi))
            })
            .collect();
        GadgetSample { edge, x, y, eta, z }
    }

    pub fn assemble(&self, sample: &GadgetSample) -> GadgetConstraint {
        let g = self.group;
        let e = &self.lc.edges[sample.edge];
        let form = canonicalize(g, &sample.x, &self.patterns).expect("x has length R");
        let f_b = form.witness_at(g, self.lc.b_word(e.w));
        let c = sample.y[0];
        let y_bar = g.tuple_right_scale(&sample.y, g.inv(c));
        GadgetConstraint {
            edge: sample.edge,
            vars: [
                VarId::Folded { w: e.w, key: form.representative },
                VarId::Free { w: e.w, key: sample.z.clone() },
                VarId::Classical { v: e.v, key: y_bar },
            ],
            rhs: g.mul(g.inv(f_b), g.inv(c)),
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> (GadgetConstraint, GadgetSample) {
        let s = self.draw(rng);
        (self.assemble(&s), s)
    }
}

pub fn sample_constraint_perfect(
    lc: &UfgLabelCover,
    group: &Group,
    rng: &mut Rng,
) -> Result<(GadgetConstraint, GadgetSample)> {
    Ok(GadgetSampler::new(lc, group, GadgetMode::Perfect)?.sample(rng))
}

pub fn sample_constraint_imperfect(
    lc: &UfgLabelCover,
    group: &Group,
    epsilon: f64,
    rng: &mut Rng,
) -> Result<(GadgetConstraint, GadgetSample)> {
    Ok(GadgetSampler::new(lc, group, GadgetMode::Imperfect { epsilon })?.sample(rng))
}

/// Dense indices for variable ids, in order of first appearance.
#[derive(Debug, Clone, Default, Serialize)]
pub struct VariableRegistry {
    ids: Vec<VarId>,
    #[serde(skip)]
    index: HashMap<VarId, usize>,
}

impl VariableRegistry {
    pub fn intern(&mut self, id: VarId) -> usize {
        if let Some(&i) = self.index.get(&id) {
            return i;
        }
        self.ids.push(id.clone());
        self.index.insert(id, self.ids.len() - 1);
        self.ids.len() - 1
    }

    pub fn get(&self, id: &VarId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn ids(&self) -> &[VarId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Debug, Clone)]
pub struct BuiltInstance {
    pub instance: Max3LinInstance,
    pub registry: VariableRegistry,
    pub constraints: Vec<GadgetConstraint>,
    pub samples: Vec<GadgetSample>,
}

/// `m` sampled constraints with lazily registered variables.
pub fn build_instance(
    lc: &UfgLabelCover,
    group: Arc<Group>,
    mode: GadgetMode,
    m: usize,
    seed: u64,
) -> Result<BuiltInstance> {
    if m == 0 {
        return Err(Error::ParameterOutOfRange("m must be at least 1".into()));
    }
    let sampler = GadgetSampler::new(lc, &group, mode)?;
    let mut rng = seed::rng(seed, "reduction");
    let mut registry = VariableRegistry::default();
    let mut lin = Vec::with_capacity(m);
    let mut constraints = Vec::with_capacity(m);
    let mut samples = Vec::with_capacity(m);
    for _ in 0..m {
        let (c, s) = sampler.sample(&mut rng);
        let vars = c.vars.clone().map(|id| registry.intern(id));
        lin.push(LinConstraint { vars, rhs: c.rhs });
        constraints.push(c);
        samples.push(s);
    }
    let instance = Max3LinInstance::new(Arc::clone(&group), registry.len(), lin)?;
    Ok(BuiltInstance { instance, registry, constraints, samples })
}

/// SHA-256 over the ordered scope list, right-hand sides excluded.
pub fn factor_graph_fingerprint(instance: &Max3LinInstance) -> String {
    let mut hasher = Sha256::new();
    hasher.update((instance.n_vars() as u64).to_le_bytes());
    hasher.update((instance.len() as u64).to_le_bytes());
    for c in instance.constraints() {
        for v in c.vars {
            hasher.update((v as u64).to_le_bytes());
        }
    }
    hex::encode(hasher.finalize())
}

/// Value of each variable when every table is the dictator at the label of
/// its vertex.
pub fn dictator_assignment(
    registry: &VariableRegistry,
    sigma_l: &[u64],
    sigma_r: &[u64],
) -> Assignment {
    registry
        .ids()
        .iter()
        .map(|id| match id {
            VarId::Folded { w, key } | VarId::Free { w, key } => key[sigma_r[*w] as usize],
            VarId::Classical { v, key } => key[sigma_l[*v] as usize],
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CompletenessReport {
    pub samples: usize,
    pub pass_fraction: f64,
    pub sigma_hat: f64,
    /// `1 − ε + ε/|G|`, or 1 in perfect mode.
    pub expected: f64,
}

/// Builds `samples` constraints and evaluates them under dictator tables.
pub fn dictator_strategy_value(
    lc: &UfgLabelCover,
    group: Arc<Group>,
    sigma_l: &[u64],
    sigma_r: &[u64],
    mode: GadgetMode,
    samples: usize,
    seed: u64,
) -> Result<CompletenessReport> {
    if sigma_l.len() != lc.v.len() {
        return Err(Error::LengthMismatch { left: sigma_l.len(), right: lc.v.len() });
    }
    if sigma_r.len() != lc.w.len() {
        return Err(Error::LengthMismatch { left: sigma_r.len(), right: lc.w.len() });
    }
    if let Some(&l) = sigma_r.iter().find(|&&l| l >= lc.big_r()) {
        return Err(Error::IndexOutOfRange { index: l as usize, bound: lc.big_r() as usize });
    }
    if let Some(&l) = sigma_l.iter().find(|&&l| l >= lc.big_l()) {
        return Err(Error::IndexOutOfRange { index: l as usize, bound: lc.big_l() as usize });
    }
    let order = group.order();
    let built = build_instance(lc, group, mode, samples, seed)?;
    for c in &built.constraints {
        let w = lc.edges[c.edge].w;
        if lc.pattern(sigma_r[w]) != lc.b_word(w) {
            return Err(Error::InvalidDictator { w, label: sigma_r[w] });
        }
    }
    let assignment = dictator_assignment(&built.registry, sigma_l, sigma_r);
    let pass_fraction = evaluate(&built.instance, &assignment)?;
    let expected = match mode {
        GadgetMode::Perfect => 1.0,
        GadgetMode::Imperfect { epsilon } => 1.0 - epsilon + epsilon / order as f64,
    };
    Ok(CompletenessReport {
        samples,
        pass_fraction,
        sigma_hat: (pass_fraction * (1.0 - pass_fraction) / samples as f64).sqrt(),
        expected,
    })
}
