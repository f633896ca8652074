//! Built-in groups with their irreducible representations.
//!
//! Element orders are fixed so that tests and reports are stable:
//!
//! | group | elements |
//! |-------|----------|
//! | `Zn`  | `0, 1, …, n−1` (addition mod n) |
//! | `S3`  | `e, (12), (13), (23), (123), (132)`, product `g·h = g∘h` (h acts first) |
//! | `D4`  | `r^k s^j` at index `k + 4j`, with `s r s⁻¹ = r⁻¹` |
//! | `Q8`  | `1, −1, i, −i, j, −j, k, −k` |
//!
//! Every built-in is emitted as a [`GroupDocument`] and loaded through the
//! same validating path as a user-supplied group file.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{Group, GroupDocument};
use crate::rep::{CMat, IrrepCatalog, IrrepDocument};

pub const BUILTIN_NAMES: [&str; 7] = ["Z2", "Z3", "Z4", "Z6", "S3", "D4", "Q8"];

/// S3 elements as images of `(0, 1, 2)`, in catalog order.
pub const S3_PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2], // e
    [1, 0, 2], // (12)
    [2, 1, 0], // (13)
    [0, 2, 1], // (23)
    [1, 2, 0], // (123)
    [2, 0, 1], // (132)
];

pub fn builtin_document(name: &str) -> Result<GroupDocument> {
    match name {
        "Z2" => Ok(cyclic(2)),
        "Z3" => Ok(cyclic(3)),
        "Z4" => Ok(cyclic(4)),
        "Z6" => Ok(cyclic(6)),
        "S3" => Ok(s3()),
        "D4" => Ok(d4()),
        "Q8" => Ok(q8()),
        other => Err(Error::UnknownGroup(other.to_string())),
    }
}

pub fn builtin_group(name: &str) -> Result<Group> {
    Group::from_document(&builtin_document(name)?)
}

pub fn builtin(name: &str) -> Result<(Group, IrrepCatalog)> {
    load(&builtin_document(name)?)
}

/// Loads a group document and, when present, its irrep block.
pub fn load(doc: &GroupDocument) -> Result<(Group, IrrepCatalog)> {
    let group = Group::from_document(doc)?;
    let irreps = doc.irreps.as_deref().ok_or_else(|| Error::InvalidIrrep {
        label: doc.name.clone(),
        reason: "group document carries no irreps block".into(),
    })?;
    let catalog = IrrepCatalog::from_documents(&group, irreps)?;
    Ok((group, catalog))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn scalar_irrep(label: &str, values: &[Complex64]) -> IrrepDocument {
    IrrepDocument::from_matrices(
        label,
        1,
        &values.iter().map(|&v| DMatrix::from_element(1, 1, v)).collect::<Vec<_>>(),
    )
}

fn table_from_matrices(mats: &[CMat]) -> Vec<Vec<usize>> {
    let find = |m: &CMat| {
        mats.iter()
            .position(|x| (x - m).norm() < 1e-9)
            .expect("matrix list is closed under multiplication")
    };
    mats.iter()
        .map(|a| mats.iter().map(|b| find(&(a * b))).collect())
        .collect()
}

fn cyclic(n: usize) -> GroupDocument {
    let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let irreps = (0..n)
        .map(|k| {
            let vals: Vec<Complex64> = (0..n)
                .map(|j| Complex64::from_polar(1.0, 2.0 * PI * (j * k) as f64 / n as f64))
                .collect();
            let label = if k == 0 { "triv".to_string() } else { format!("chi{k}") };
            scalar_irrep(&label, &vals)
        })
        .collect();
    GroupDocument { name: format!("Z{n}"), order: n, mult, irreps: Some(irreps) }
}

fn s3() -> GroupDocument {
    let perms = S3_PERMUTATIONS;
    let compose = |g: &[usize; 3], h: &[usize; 3]| [g[h[0]], g[h[1]], g[h[2]]];
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("S3 closed");
    let mult = perms
        .iter()
        .map(|g| perms.iter().map(|h| index(compose(g, h))).collect())
        .collect();

    let sign: Vec<Complex64> = perms
        .iter()
        .map(|p| {
            let inversions = (0..3)
                .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            c(if inversions % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        })
        .collect();

    // Standard representation: permutation matrices restricted to the
    // sum-zero plane with orthonormal basis (1,−1,0)/√2, (1,1,−2)/√6.
    let basis = DMatrix::from_row_slice(
        3,
        2,
        &[
            1.0 / 2f64.sqrt(),
            1.0 / 6f64.sqrt(),
            -1.0 / 2f64.sqrt(),
            1.0 / 6f64.sqrt(),
            0.0,
            -2.0 / 6f64.sqrt(),
        ],
    );
    let standard: Vec<CMat> = perms
        .iter()
        .map(|p| {
            let mut pm = DMatrix::<f64>::zeros(3, 3);
            for i in 0..3 {
                pm[(p[i], i)] = 1.0;
            }
            let m = basis.transpose() * pm * &basis;
            m.map(|v| c(v, 0.0))
        })
        .collect();

    GroupDocument {
        name: "S3".into(),
        order: 6,
        mult,
        irreps: Some(vec![
            scalar_irrep("triv", &[c(1.0, 0.0); 6]),
            scalar_irrep("sign", &sign),
            IrrepDocument::from_matrices("std", 2, &standard),
        ]),
    }
}

fn d4() -> GroupDocument {
    let rot = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    let refl = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
    let mut mats = Vec::with_capacity(8);
    for j in 0..2 {
        for k in 0..4 {
            let mut m = CMat::identity(2, 2);
            for _ in 0..k {
                m = &m * &rot;
            }
            if j == 1 {
                m = &m * &refl;
            }
            mats.push(m);
        }
    }
    let mult = table_from_matrices(&mats);
    let one_dim = |label: &str, er: f64, es: f64| {
        let vals: Vec<Complex64> = (0..8)
            .map(|idx| {
                let (k, j) = (idx % 4, idx / 4);
                c(er.powi(k) * es.powi(j), 0.0)
            })
            .collect();
        scalar_irrep(label, &vals)
    };
    GroupDocument {
        name: "D4".into(),
        order: 8,
        mult,
        irreps: Some(vec![
            one_dim("triv", 1.0, 1.0),
            one_dim("A2", 1.0, -1.0),
            one_dim("B1", -1.0, 1.0),
            one_dim("B2", -1.0, -1.0),
            IrrepDocument::from_matrices("E", 2, &mats),
        ]),
    }
}

fn q8() -> GroupDocument {
    let one = CMat::identity(2, 2);
    let qi = DMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]);
    let qj = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
    let qk = &qi * &qj;
    let mats: Vec<CMat> = [one, qi, qj, qk]
        .into_iter()
        .flat_map(|m| {
            let neg = -&m;
            [m, neg]
        })
        .collect();
    let mult = table_from_matrices(&mats);
    let one_dim = |label: &str, a: f64, b: f64| {
        // Signs on the ±1, ±i, ±j, ±k pairs.
        let pair = [1.0, a, b, a * b];
        let vals: Vec<Complex64> = (0..8).map(|idx| c(pair[idx / 2], 0.0)).collect();
        scalar_irrep(label, &vals)
    };
    GroupDocument {
        name: "Q8".into(),
        order: 8,
        mult,
        irreps: Some(vec![
            one_dim("triv", 1.0, 1.0),
            one_dim("chi_i", 1.0, -1.0),
            one_dim("chi_j", -1.0, 1.0),
            one_dim("chi_k", -1.0, -1.0),
            IrrepDocument::from_matrices("H", 2, &mats),
        ]),
    }
}
