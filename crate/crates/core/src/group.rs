//! Finite groups given by explicit multiplication tables.
//!
//! Elements are dense indices `0..order`. Tables are validated on
//! construction (identity, two-sided inverses, exhaustive associativity),
//! after which a [`Group`] is immutable.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rep::IrrepDocument;

/// Largest group order the crate accepts.
pub const MAX_ORDER: usize = 64;

/// Index of an element inside its owning group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u8);

impl Elem {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A tuple in `G^n`; the group operation on tuples is coordinate-wise.
pub type Tuple = Vec<Elem>;

/// On-disk description of a group: a name, its order, a row-major
/// multiplication table and optionally a block of irreducible
/// representations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDocument {
    pub name: String,
    pub order: usize,
    pub mult: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreps: Option<Vec<IrrepDocument>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    name: String,
    order: usize,
    mult: Vec<Elem>,
    identity: Elem,
    inv: Vec<Elem>,
}

impl Group {
    /// Validates a multiplication table and derives identity and inverses.
    pub fn from_table(name: impl Into<String>, table: &[Vec<usize>]) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        if order > MAX_ORDER {
            return Err(Error::MalformedTable(format!(
                "order {order} exceeds the supported maximum {MAX_ORDER}"
            )));
        }
        let mut mult = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::MalformedTable(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= order {
                    return Err(Error::MalformedTable(format!("entry {v} in row {i} out of range")));
                }
                mult.push(Elem(v as u8));
            }
        }
        let at = |a: usize, b: usize| mult[a * order + b].index();

        let identity = (0..order)
            .find(|&e| (0..order).all(|g| at(e, g) == g && at(g, e) == g))
            .ok_or(Error::NoIdentity)?;

        let mut inv = Vec::with_capacity(order);
        for g in 0..order {
            let h = (0..order)
                .find(|&h| at(g, h) == identity && at(h, g) == identity)
                .ok_or(Error::NoInverse { element: g })?;
            inv.push(Elem(h as u8));
        }

        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }

        Ok(Self {
            name: name.into(),
            order,
            mult,
            identity: Elem(identity as u8),
            inv,
        })
    }

    pub fn from_document(doc: &GroupDocument) -> Result<Self> {
        if doc.order != doc.mult.len() {
            return Err(Error::MalformedTable(format!(
                "declared order {} but table has {} rows",
                doc.order,
                doc.mult.len()
            )));
        }
        Self::from_table(doc.name.clone(), &doc.mult)
    }

    pub fn to_document(&self) -> GroupDocument {
        GroupDocument {
            name: self.name.clone(),
            order: self.order,
            mult: (0..self.order)
                .map(|a| (0..self.order).map(|b| self.mult[a * self.order + b].index()).collect())
                .collect(),
            irreps: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order as u8).map(Elem)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mult[a.index() * self.order + b.index()]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a.index()]
    }

    /// `g⁻¹h⁻¹gh`.
    pub fn commutator(&self, g: Elem, h: Elem) -> Elem {
        let gi_hi = self.mul(self.inv(g), self.inv(h));
        self.mul(self.mul(gi_hi, g), h)
    }

    pub fn pow(&self, g: Elem, k: usize) -> Elem {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: Elem) -> usize {
        let mut acc = g;
        let mut k = 1;
        while acc != self.identity {
            acc = self.mul(acc, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn elem(&self, index: usize) -> Result<Elem> {
        if index < self.order {
            Ok(Elem(index as u8))
        } else {
            Err(Error::IndexOutOfRange { index, bound: self.order })
        }
    }

    pub fn identity_tuple(&self, n: usize) -> Tuple {
        vec![self.identity; n]
    }

    pub fn tuple_mul(&self, x: &[Elem], y: &[Elem]) -> Result<Tuple> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
        }
        Ok(x.iter().zip(y).map(|(&a, &b)| self.mul(a, b)).collect())
    }

    pub fn tuple_inv(&self, x: &[Elem]) -> Tuple {
        x.iter().map(|&a| self.inv(a)).collect()
    }

    /// `c·x = (c x₁, …, c x_n)`.
    pub fn tuple_left_scale(&self, c: Elem, x: &[Elem]) -> Tuple {
        x.iter().map(|&a| self.mul(c, a)).collect()
    }

    /// `x·c = (x₁ c, …, x_n c)`.
    pub fn tuple_right_scale(&self, x: &[Elem], c: Elem) -> Tuple {
        x.iter().map(|&a| self.mul(a, c)).collect()
    }
}

/// A subgroup stored as a sorted member list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subgroup {
    members: Vec<Elem>,
    #[serde(skip)]
    mask: Vec<bool>,
}

impl Subgroup {
    /// Smallest subgroup containing `generators`.
    pub fn generated_by(group: &Group, generators: impl IntoIterator<Item = Elem>) -> Self {
        let mut mask = vec![false; group.order()];
        mask[group.identity().index()] = true;
        let mut frontier: Vec<Elem> = vec![group.identity()];
        let gens: Vec<Elem> = generators.into_iter().collect();
        for &g in &gens {
            if !mask[g.index()] {
                mask[g.index()] = true;
                frontier.push(g);
            }
        }
        // In a finite group, closure under multiplication by generators
        // yields the generated subgroup.
        while let Some(a) = frontier.pop() {
            for &g in &gens {
                for p in [group.mul(a, g), group.mul(g, a)] {
                    if !mask[p.index()] {
                        mask[p.index()] = true;
                        frontier.push(p);
                    }
                }
            }
        }
        let members = group.elements().filter(|g| mask[g.index()]).collect();
        Self { members, mask }
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: Elem) -> bool {
        self.mask.get(g.index()).copied().unwrap_or(false)
    }

    pub fn is_normal_in(&self, group: &Group) -> bool {
        group.elements().all(|g| {
            self.members
                .iter()
                .all(|&h| self.contains(group.mul(group.mul(g, h), group.inv(g))))
        })
    }
}

/// `[G,G]`, the subgroup generated by all commutators `g⁻¹h⁻¹gh`.
pub fn commutator_subgroup(group: &Group) -> Subgroup {
    let gens: BTreeSet<Elem> = group
        .elements()
        .flat_map(|g| group.elements().map(move |h| (g, h)))
        .map(|(g, h)| group.commutator(g, h))
        .collect();
    Subgroup::generated_by(group, gens)
}

/// `G/[G,G]` written as a product of cyclic groups `Z_{m₁} × … × Z_{m_k}`.
#[derive(Debug, Clone, Serialize)]
pub struct AbelianDecomposition {
    invariant_factors: Vec<u32>,
    commutator: Subgroup,
    /// Residue vector of every element of `G`.
    project: Vec<Vec<u32>>,
    /// Residue vector (mixed-radix encoded) to the least element of its coset.
    lift: HashMap<Vec<u32>, Elem>,
}

impl AbelianDecomposition {
    pub fn invariant_factors(&self) -> &[u32] {
        &self.invariant_factors
    }

    pub fn commutator(&self) -> &Subgroup {
        &self.commutator
    }

    pub fn quotient_order(&self) -> usize {
        self.invariant_factors.iter().map(|&m| m as usize).product()
    }

    pub fn project(&self, g: Elem) -> &[u32] {
        &self.project[g.index()]
    }

    /// Least element of the coset whose residue vector is `word`.
    pub fn lift(&self, word: &[u32]) -> Option<Elem> {
        self.lift.get(word).copied()
    }

    /// All elements of the coset with residue vector `word`.
    pub fn coset(&self, word: &[u32]) -> Vec<Elem> {
        self.project
            .iter()
            .enumerate()
            .filter(|(_, w)| w.as_slice() == word)
            .map(|(i, _)| Elem(i as u8))
            .collect()
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter()
            .zip(b)
            .zip(&self.invariant_factors)
            .map(|((&x, &y), &m)| (x + y) % m)
            .collect()
    }
}

/// Computes `G/[G,G]` and a cyclic decomposition of it.
///
/// Generators are found by repeatedly taking an element whose image in the
/// quotient by the subgroup found so far has maximal order, choosing a lift
/// whose order equals that quotient order.
pub fn abelianize(group: &Group) -> AbelianDecomposition {
    let commutator = commutator_subgroup(group);
    let n = group.order();

    // Coset labels of G/[G,G].
    let mut coset_of = vec![usize::MAX; n];
    let mut reps: Vec<Elem> = Vec::new();
    for g in group.elements() {
        if coset_of[g.index()] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(g);
        for &h in commutator.members() {
            coset_of[group.mul(g, h).index()] = id;
        }
    }
    let q = reps.len();
    let qmul = |a: usize, b: usize| coset_of[group.mul(reps[a], reps[b]).index()];
    let qzero = coset_of[group.identity().index()];

    let qorder_mod = |a: usize, sub: &[bool]| -> usize {
        let mut acc = a;
        let mut k = 1;
        while !sub[acc] {
            acc = qmul(acc, a);
            k += 1;
        }
        k
    };

    // `span` marks the subgroup of the quotient generated so far.
    let mut span = vec![false; q];
    span[qzero] = true;
    let mut gens: Vec<usize> = Vec::new();
    let mut factors: Vec<u32> = Vec::new();
    while span.iter().any(|&s| !s) {
        let best = (0..q).map(|a| qorder_mod(a, &span)).max().unwrap_or(1);
        let trivial = {
            let mut z = vec![false; q];
            z[qzero] = true;
            z
        };
        let pick = (0..q)
            .find(|&a| qorder_mod(a, &span) == best && qorder_mod(a, &trivial) == best)
            .expect("maximal-order element of a finite abelian group has a pure lift");
        gens.push(pick);
        factors.push(best as u32);
        // span += <pick>
        let current: Vec<usize> = (0..q).filter(|&a| span[a]).collect();
        let mut p = qzero;
        for _ in 0..best {
            for &a in &current {
                span[qmul(a, p)] = true;
            }
            p = qmul(p, pick);
        }
    }

    // Enumerate Σ eᵢ gᵢ to build the coordinate map on the quotient.
    let mut coords = vec![Vec::new(); q];
    let total: usize = factors.iter().map(|&m| m as usize).product();
    for code in 0..total {
        let mut rem = code;
        let mut word = Vec::with_capacity(factors.len());
        let mut acc = qzero;
        for (i, &m) in factors.iter().enumerate() {
            let e = rem % m as usize;
            rem /= m as usize;
            word.push(e as u32);
            for _ in 0..e {
                acc = qmul(acc, gens[i]);
            }
        }
        coords[acc] = word;
    }

    let project: Vec<Vec<u32>> = (0..n).map(|g| coords[coset_of[g]].clone()).collect();
    let mut lift = HashMap::new();
    for g in group.elements() {
        lift.entry(project[g.index()].clone()).or_insert(g);
    }
    AbelianDecomposition { invariant_factors: factors, commutator, project, lift }
}
