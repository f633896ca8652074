//! Folded long-code tables.
//!
//! A pattern family assigns each coordinate `d ∈ [R]` a word
//! `p(d) ∈ {0,1}^r`, stored as a bitmask with `p_j(d)` at bit `j`. Two
//! tuples are functionally equivalent when `x_d = F(p(d)) · y_d` for some
//! `F: {0,1}^r → G`. Each class has a canonical representative, which has
//! the identity at the least coordinate of every pattern class.
//!
//! Three kinds of table are supported:
//!
//! * functional: `f(x) = F(b) · f(x̄)` where `x̄` is canonical and `F` the
//!   witness, extended by the identity at unattained words;
//! * classical right: `f(x) = f(x · x₀⁻¹) · x₀`;
//! * free: direct lookup.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{Domain, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::group::{Elem, Group, Tuple};
use crate::rep::{
    all_product_irreps, fourier_transform, hs_norm, FunctionTable, IrrepCatalog, EQ_TOL,
};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternFamily {
    r: usize,
    words: Vec<u32>,
    leader: Vec<usize>,
    classes: BTreeMap<u32, Vec<usize>>,
}

impl PatternFamily {
    pub fn new(r: usize, words: Vec<u32>) -> Result<Self> {
        if r > 31 {
            return Err(Error::ParameterOutOfRange(format!("r = {r} exceeds 31")));
        }
        if let Some(&w) = words.iter().find(|&&w| w >> r != 0) {
            return Err(Error::ParameterOutOfRange(format!("word {w:#b} has more than {r} bits")));
        }
        let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (d, &w) in words.iter().enumerate() {
            classes.entry(w).or_default().push(d);
        }
        let leader = words.iter().map(|w| classes[w][0]).collect();
        Ok(Self { r, words, leader, classes })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `R`, the number of coordinates.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, d: usize) -> u32 {
        self.words[d]
    }

    pub fn words(&self) -> &[u32] {
        &self.words
    }

    pub fn attained(&self) -> BTreeSet<u32> {
        self.classes.keys().copied().collect()
    }

    pub fn is_attained(&self, word: u32) -> bool {
        self.classes.contains_key(&word)
    }

    pub fn class(&self, word: u32) -> &[usize] {
        self.classes.get(&word).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Least coordinate sharing the word of `d`.
    pub fn leader(&self, d: usize) -> usize {
        self.leader[d]
    }

    pub fn is_leader(&self, d: usize) -> bool {
        self.leader[d] == d
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub representative: Tuple,
    pub witness: BTreeMap<u32, Elem>,
}

impl CanonicalForm {
    /// `F(word)`, the identity when `word` is unattained.
    pub fn witness_at(&self, group: &Group, word: u32) -> Elem {
        self.witness.get(&word).copied().unwrap_or(group.identity())
    }
}

pub fn canonicalize(group: &Group, x: &[Elem], patterns: &PatternFamily) -> Result<CanonicalForm> {
    if x.len() != patterns.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: patterns.len() });
    }
    let representative = x
        .iter()
        .enumerate()
        .map(|(d, &xd)| group.mul(group.inv(x[patterns.leader(d)]), xd))
        .collect();
    let witness = patterns
        .classes
        .iter()
        .map(|(&word, members)| (word, x[members[0]]))
        .collect();
    Ok(CanonicalForm { representative, witness })
}

#[derive(Debug, Clone, PartialEq)]
pub enum FoldKind {
    Functional { patterns: PatternFamily, b: u32 },
    ClassicalRight,
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TableValues {
    Stored(HashMap<Tuple, Elem>),
    /// Value at a key is a seeded hash of the key.
    Lazy { seed: u64 },
    /// Value at a key is its coordinate `ℓ`.
    Dictator(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldedFunction {
    kind: FoldKind,
    order: usize,
    arity: usize,
    values: TableValues,
}

impl FoldedFunction {
    pub fn new(group: &Group, kind: FoldKind, arity: usize, values: TableValues) -> Result<Self> {
        if let FoldKind::Functional { patterns, b } = &kind {
            if patterns.len() != arity {
                return Err(Error::LengthMismatch { left: patterns.len(), right: arity });
            }
            if b >> patterns.r() != 0 {
                return Err(Error::ParameterOutOfRange(format!("b = {b:#b} is longer than r")));
            }
        }
        if let TableValues::Dictator(l) = values {
            if l >= arity {
                return Err(Error::IndexOutOfRange { index: l, bound: arity });
            }
        }
        Ok(Self { kind, order: group.order(), arity, values })
    }

    pub fn dictator(group: &Group, kind: FoldKind, arity: usize, coordinate: usize) -> Result<Self> {
        Self::new(group, kind, arity, TableValues::Dictator(coordinate))
    }

    pub fn kind(&self) -> &FoldKind {
        &self.kind
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &TableValues {
        &self.values
    }

    pub fn stored_len(&self) -> Option<usize> {
        match &self.values {
            TableValues::Stored(map) => Some(map.len()),
            _ => None,
        }
    }

    /// Key under which `x` is stored and the left and right factors that
    /// turn the stored value into `f(x)`.
    fn resolve(&self, group: &Group, x: &[Elem]) -> Result<(Tuple, Elem, Elem)> {
        if x.len() != self.arity {
            return Err(Error::LengthMismatch { left: x.len(), right: self.arity });
        }
        let e = group.identity();
        Ok(match &self.kind {
            FoldKind::Functional { patterns, b } => {
                let form = canonicalize(group, x, patterns)?;
                let left = form.witness_at(group, *b);
                (form.representative, left, e)
            }
            FoldKind::ClassicalRight => {
                let x0 = x.first().copied().unwrap_or(e);
                (group.tuple_right_scale(x, group.inv(x0)), e, x0)
            }
            FoldKind::Free => (x.to_vec(), e, e),
        })
    }

    /// Value stored at a canonical key.
    pub fn table_value(&self, key: &[Elem]) -> Result<Elem> {
        match &self.values {
            TableValues::Stored(map) => map
                .get(key)
                .copied()
                .ok_or_else(|| Error::MissingEntry(key.iter().map(|e| e.0).collect())),
            TableValues::Lazy { seed } => {
                let bytes: Vec<u8> = key.iter().map(|e| e.0).collect();
                Ok(Elem((seed::hash_bytes(*seed, &bytes) % self.order as u64) as u8))
            }
            TableValues::Dictator(l) => Ok(key[*l]),
        }
    }

    pub fn query(&self, group: &Group, x: &[Elem]) -> Result<Elem> {
        let (key, left, right) = self.resolve(group, x)?;
        let v = self.table_value(&key)?;
        Ok(group.mul(group.mul(left, v), right))
    }
}

pub fn query_folded(group: &Group, f: &FoldedFunction, x: &[Elem]) -> Result<Elem> {
    f.query(group, x)
}

/// Every canonical key of the given kind over `G^arity`, in index order.
pub fn canonical_keys(group: &Group, kind: &FoldKind, arity: usize) -> Result<Vec<Tuple>> {
    let free: Vec<usize> = match kind {
        FoldKind::Functional { patterns, .. } => {
            (0..arity).filter(|&d| !patterns.is_leader(d)).collect()
        }
        FoldKind::ClassicalRight => (1..arity).collect(),
        FoldKind::Free => (0..arity).collect(),
    };
    let domain = Domain::new(group.order(), free.len());
    let mut keys = Vec::with_capacity(domain.checked_size(ENUMERATION_CAP)?);
    domain.for_each(ENUMERATION_CAP, |_, values| {
        let mut key = group.identity_tuple(arity);
        for (&d, &v) in free.iter().zip(values) {
            key[d] = v;
        }
        keys.push(key);
    })?;
    Ok(keys)
}

/// A table with an independent uniform value at every canonical key.
pub fn random_folded(group: &Group, kind: FoldKind, arity: usize, seed: u64) -> Result<FoldedFunction> {
    use rand::Rng as _;
    let mut rng = seed::rng(seed, "random_folded");
    let map = canonical_keys(group, &kind, arity)?
        .into_iter()
        .map(|k| (k, Elem(rng.gen_range(0..group.order()) as u8)))
        .collect();
    FoldedFunction::new(group, kind, arity, TableValues::Stored(map))
}

/// Same distribution as [`random_folded`] but assigned on first touch,
/// usable at any arity.
pub fn lazy_folded(group: &Group, kind: FoldKind, arity: usize, seed: u64) -> Result<FoldedFunction> {
    FoldedFunction::new(group, kind, arity, TableValues::Lazy { seed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum VanishingLemma {
    /// `ĝ(1) = 0` for non-trivial `ρ`.
    Trivial = 1,
    /// `ĝ(α) = 0` for every one-dimensional `α` when `dim ρ ≥ 2`.
    OneDimensional = 2,
    /// `ĝ(α) = 0` when no non-trivial component of `α` sits on a
    /// coordinate with word `b`.
    OffPattern = 3,
    /// `ĝ(α) = 0` when no component of dimension at least 2 sits on a
    /// coordinate with word `b`, for `dim ρ ≥ 2`.
    OffPatternHighDim = 4,
}

impl VanishingLemma {
    pub const ALL: [VanishingLemma; 4] = [
        VanishingLemma::Trivial,
        VanishingLemma::OneDimensional,
        VanishingLemma::OffPattern,
        VanishingLemma::OffPatternHighDim,
    ];

    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Self::Trivial),
            2 => Ok(Self::OneDimensional),
            3 => Ok(Self::OffPattern),
            4 => Ok(Self::OffPatternHighDim),
            other => Err(Error::ParameterOutOfRange(format!("lemma id {other}"))),
        }
    }

    pub fn id(self) -> u8 {
        self as u8
    }

    fn needs_high_dim(self) -> bool {
        matches!(self, Self::OneDimensional | Self::OffPatternHighDim)
    }

    fn needs_functional(self) -> bool {
        matches!(self, Self::OffPattern | Self::OffPatternHighDim)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VanishingReport {
    pub lemma: u8,
    pub rho: String,
    pub p: usize,
    pub q: usize,
    pub asserted: usize,
    pub max_asserted_norm: f64,
    pub max_unasserted_norm: f64,
    pub passed: bool,
}

/// Fourier spectrum of `g(x) = ρ(f(x))_{pq}` on all of `G^R`, together with
/// each lemma's verdict.
pub fn check_vanishing_all(
    group: &Group,
    catalog: &IrrepCatalog,
    f: &FoldedFunction,
    rho: usize,
    p: usize,
    q: usize,
    lemmas: &[VanishingLemma],
) -> Result<Vec<VanishingReport>> {
    let irrep = catalog.irreps().get(rho).ok_or(Error::IndexOutOfRange {
        index: rho,
        bound: catalog.len(),
    })?;
    if p >= irrep.dim() || q >= irrep.dim() {
        return Err(Error::IndexOutOfRange { index: p.max(q), bound: irrep.dim() });
    }
    for &lemma in lemmas {
        if lemma.needs_high_dim() && irrep.dim() < 2 {
            return Err(Error::ParameterOutOfRange(format!(
                "lemma {} needs dim(rho) >= 2",
                lemma.id()
            )));
        }
        if rho == catalog.trivial_index() {
            return Err(Error::ParameterOutOfRange("rho must be non-trivial".into()));
        }
        match &f.kind {
            FoldKind::Free => {
                return Err(Error::ParameterOutOfRange(
                    "vanishing lemmas need a folded table".into(),
                ))
            }
            FoldKind::ClassicalRight if lemma.needs_functional() => {
                return Err(Error::ParameterOutOfRange(format!(
                    "lemma {} needs a functionally folded table",
                    lemma.id()
                )))
            }
            FoldKind::Functional { patterns, b } if !patterns.is_attained(*b) => {
                return Err(Error::PatternUnattained { word: *b });
            }
            _ => {}
        }
    }

    let mut failure = None;
    let g = FunctionTable::from_fn(group, f.arity, |x| match f.query(group, x) {
        Ok(v) => irrep.matrix(v)[(p, q)],
        Err(e) => {
            failure.get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }

    let b_class: BTreeSet<usize> = match &f.kind {
        FoldKind::Functional { patterns, b } => patterns.class(*b).iter().copied().collect(),
        _ => BTreeSet::new(),
    };
    let trivial = catalog.trivial_index();
    let spectrum: Vec<(Vec<usize>, f64)> = all_product_irreps(catalog, f.arity)
        .into_iter()
        .map(|alpha| {
            let norm = hs_norm(&fourier_transform(catalog, &g, &alpha)?.matrix);
            Ok((alpha.components().to_vec(), norm))
        })
        .collect::<Result<_>>()?;

    let asserts = |lemma: VanishingLemma, comps: &[usize]| -> bool {
        match lemma {
            VanishingLemma::Trivial => comps.iter().all(|&c| c == trivial),
            VanishingLemma::OneDimensional => comps.iter().all(|&c| catalog.irrep(c).dim() == 1),
            VanishingLemma::OffPattern => !comps
                .iter()
                .enumerate()
                .any(|(d, &c)| c != trivial && b_class.contains(&d)),
            VanishingLemma::OffPatternHighDim => !comps
                .iter()
                .enumerate()
                .any(|(d, &c)| catalog.irrep(c).dim() >= 2 && b_class.contains(&d)),
        }
    };

    Ok(lemmas
        .iter()
        .map(|&lemma| {
            let mut asserted = 0;
            let mut max_asserted = 0.0f64;
            let mut max_unasserted = 0.0f64;
            for (comps, norm) in &spectrum {
                if asserts(lemma, comps) {
                    asserted += 1;
                    max_asserted = max_asserted.max(*norm);
                } else {
                    max_unasserted = max_unasserted.max(*norm);
                }
            }
            VanishingReport {
                lemma: lemma.id(),
                rho: irrep.label().to_string(),
                p,
                q,
                asserted,
                max_asserted_norm: max_asserted,
                max_unasserted_norm: max_unasserted,
                passed: max_asserted < EQ_TOL,
            }
        })
        .collect())
}

pub fn check_vanishing(
    group: &Group,
    catalog: &IrrepCatalog,
    f: &FoldedFunction,
    rho: usize,
    p: usize,
    q: usize,
    lemma: VanishingLemma,
) -> Result<VanishingReport> {
    let mut reports = check_vanishing_all(group, catalog, f, rho, p, q, &[lemma])?;
    Ok(reports.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;

    fn z2_family() -> PatternFamily {
        PatternFamily::new(1, vec![1, 1, 0]).unwrap()
    }

    #[test]
    fn canonicalize_z2_example() {
        let (g, _) = builtin("Z2").unwrap();
        let x = vec![Elem(1), Elem(0), Elem(1)];
        let form = canonicalize(&g, &x, &z2_family()).unwrap();
        assert_eq!(form.representative, vec![Elem(0), Elem(1), Elem(0)]);
        assert_eq!(form.witness, BTreeMap::from([(1, Elem(1)), (0, Elem(1))]));
    }

    #[test]
    fn canonical_input_has_identity_witness() {
        let (g, _) = builtin("S3").unwrap();
        let fam = PatternFamily::new(2, vec![0, 3, 0, 3]).unwrap();
        let x = vec![Elem(0), Elem(0), Elem(4), Elem(2)];
        let form = canonicalize(&g, &x, &fam).unwrap();
        assert_eq!(form.representative, x);
        assert!(form.witness.values().all(|&w| w == g.identity()));
    }

    #[test]
    fn length_mismatch() {
        let (g, _) = builtin("Z2").unwrap();
        assert!(matches!(
            canonicalize(&g, &[Elem(0)], &z2_family()),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn functional_query_z2_example() {
        let (g, _) = builtin("Z2").unwrap();
        let map = HashMap::from([(vec![Elem(0), Elem(1), Elem(0)], Elem(0))]);
        let f = FoldedFunction::new(
            &g,
            FoldKind::Functional { patterns: z2_family(), b: 1 },
            3,
            TableValues::Stored(map),
        )
        .unwrap();
        assert_eq!(f.query(&g, &[Elem(1), Elem(0), Elem(1)]).unwrap(), Elem(1));
        assert_eq!(f.query(&g, &[Elem(0), Elem(1), Elem(0)]).unwrap(), Elem(0));
    }

    #[test]
    fn classical_query_z2_example() {
        let (g, _) = builtin("Z2").unwrap();
        let map = HashMap::from([(vec![Elem(0), Elem(0)], Elem(1))]);
        let f = FoldedFunction::new(&g, FoldKind::ClassicalRight, 2, TableValues::Stored(map)).unwrap();
        assert_eq!(f.query(&g, &[Elem(1), Elem(1)]).unwrap(), Elem(0));
    }

    #[test]
    fn missing_entry() {
        let (g, _) = builtin("Z2").unwrap();
        let f = FoldedFunction::new(&g, FoldKind::Free, 2, TableValues::Stored(HashMap::new())).unwrap();
        assert!(matches!(f.query(&g, &[Elem(0), Elem(1)]), Err(Error::MissingEntry(_))));
    }

    #[test]
    fn stored_key_counts() {
        let (z2, _) = builtin("Z2").unwrap();
        let f = random_folded(&z2, FoldKind::Functional { patterns: z2_family(), b: 1 }, 3, 3).unwrap();
        // |G|^(R − #classes) = 2^(3−2)
        assert_eq!(f.stored_len(), Some(2));
        let (s3, _) = builtin("S3").unwrap();
        let f = random_folded(&s3, FoldKind::Free, 2, 3).unwrap();
        assert_eq!(f.stored_len(), Some(36));
        let f = random_folded(&s3, FoldKind::ClassicalRight, 3, 3).unwrap();
        assert_eq!(f.stored_len(), Some(36));
    }

    #[test]
    fn same_seed_same_table() {
        let (g, _) = builtin("S3").unwrap();
        let kind = FoldKind::Functional { patterns: PatternFamily::new(2, vec![1, 2, 1]).unwrap(), b: 1 };
        let a = random_folded(&g, kind.clone(), 3, 11).unwrap();
        let b = random_folded(&g, kind, 3, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dictator_sign_lemma_one() {
        let (g, cat) = builtin("S3").unwrap();
        let fam = PatternFamily::new(2, vec![1, 2, 1]).unwrap();
        let f = FoldedFunction::dictator(&g, FoldKind::Functional { patterns: fam, b: 2 }, 3, 1).unwrap();
        let sign = cat.index_of("sign").unwrap();
        let rep = check_vanishing(&g, &cat, &f, sign, 0, 0, VanishingLemma::Trivial).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.asserted, 1);
    }

    #[test]
    fn unattained_b_is_rejected() {
        let (g, cat) = builtin("S3").unwrap();
        let fam = PatternFamily::new(2, vec![1, 2, 1]).unwrap();
        let f = random_folded(&g, FoldKind::Functional { patterns: fam, b: 3 }, 3, 0).unwrap();
        let std = cat.index_of("std").unwrap();
        assert!(matches!(
            check_vanishing(&g, &cat, &f, std, 0, 1, VanishingLemma::OffPattern),
            Err(Error::PatternUnattained { word: 3 })
        ));
    }

    #[test]
    fn lazy_is_deterministic() {
        let (g, _) = builtin("S3").unwrap();
        let f = lazy_folded(&g, FoldKind::ClassicalRight, 40, 9).unwrap();
        let x: Vec<Elem> = (0..40).map(|i| Elem((i % 6) as u8)).collect();
        assert_eq!(f.query(&g, &x).unwrap(), f.query(&g, &x).unwrap());
    }
}
