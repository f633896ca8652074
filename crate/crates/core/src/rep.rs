//! Unitary irreducible representations and Fourier analysis on `G` and `G^n`.
//!
//! The Fourier coefficient of `f: G^n → ℂ` at a product irrep
//! `α = α₁ ⊗ … ⊗ α_n` is the matrix `f̂(α) = E_x[f(x) α(x)]`, and matrices
//! carry the scalar product `⟨A, B⟩ = tr(A B*)`. With these conventions
//!
//! * inversion: `f(x) = Σ_α dim(α) ⟨f̂(α), α(x)⟩`
//! * Plancherel: `⟨f, g⟩ = E[f ḡ] = Σ_α dim(α) ⟨f̂(α), ĝ(α)⟩`
//! * convolution: `(f∗g)^(α) = f̂(α) ĝ(α)` with `(f∗g)(x) = E_y[f(y) g(y⁻¹x)]`

use std::collections::{BTreeSet, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{Domain, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::group::{Elem, Group};

pub type CMat = DMatrix<Complex64>;

/// Equality tolerance for floating complex arithmetic.
pub const EQ_TOL: f64 = 1e-9;
/// Allowed distance of a computed multiplicity from the nearest integer.
pub const MULTIPLICITY_TOL: f64 = 1e-6;
/// Product irreps above this dimension are only evaluated entry-wise.
pub const MAX_MATERIALIZED_DIM: usize = 64;

/// `⟨A, B⟩ = tr(A B*)`.
pub fn hs_inner(a: &CMat, b: &CMat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

/// Hilbert–Schmidt norm.
pub fn hs_norm(a: &CMat) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Irrep block entry of a group document: one `dim × dim` matrix per
/// element, entries as `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IrrepDocument {
    pub label: String,
    pub dim: usize,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

impl IrrepDocument {
    pub fn from_matrices(label: &str, dim: usize, mats: &[CMat]) -> Self {
        let matrices = mats
            .iter()
            .map(|m| {
                (0..dim)
                    .map(|i| (0..dim).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                    .collect()
            })
            .collect();
        Self { label: label.to_string(), dim, matrices }
    }

    fn to_matrices(&self) -> Result<Vec<CMat>> {
        let bad = |reason: String| Error::InvalidIrrep { label: self.label.clone(), reason };
        self.matrices
            .iter()
            .enumerate()
            .map(|(g, rows)| {
                if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                    return Err(bad(format!("matrix of element {g} is not {0}x{0}", self.dim)));
                }
                Ok(CMat::from_fn(self.dim, self.dim, |i, j| {
                    Complex64::new(rows[i][j][0], rows[i][j][1])
                }))
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Irrep {
    label: String,
    dim: usize,
    matrices: Vec<CMat>,
}

impl Irrep {
    /// Builds and validates a representation: homomorphism, unitarity and
    /// `⟨χ, χ⟩ = 1` must all hold within [`EQ_TOL`].
    pub fn new(group: &Group, label: impl Into<String>, matrices: Vec<CMat>) -> Result<Self> {
        let label = label.into();
        let bad = |reason: String| Error::InvalidIrrep { label: label.clone(), reason };
        if matrices.len() != group.order() {
            return Err(bad(format!(
                "{} matrices for a group of order {}",
                matrices.len(),
                group.order()
            )));
        }
        let dim = matrices[0].nrows();
        if dim == 0 || matrices.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(bad("matrices are not square of a common positive size".into()));
        }
        let irrep = Self { label: label.clone(), dim, matrices };
        let hom = irrep.homomorphism_deviation(group);
        if hom > EQ_TOL {
            return Err(bad(format!("not a homomorphism (deviation {hom:e})")));
        }
        let uni = irrep.unitarity_deviation();
        if uni > EQ_TOL {
            return Err(bad(format!("not unitary (deviation {uni:e})")));
        }
        let irr = irrep.character_norm_deviation();
        if irr > EQ_TOL {
            return Err(bad(format!("reducible: |<chi,chi> - 1| = {irr:e}")));
        }
        Ok(irrep)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: Elem) -> &CMat {
        &self.matrices[g.index()]
    }

    pub fn character(&self, g: Elem) -> Complex64 {
        self.matrices[g.index()].trace()
    }

    /// Max over `g, h` of `‖ρ(g)ρ(h) − ρ(gh)‖_HS`.
    pub fn homomorphism_deviation(&self, group: &Group) -> f64 {
        let mut worst = 0.0f64;
        for g in group.elements() {
            for h in group.elements() {
                let lhs = self.matrix(g) * self.matrix(h);
                worst = worst.max(hs_norm(&(lhs - self.matrix(group.mul(g, h)))));
            }
        }
        worst
    }

    /// Max over `g` of `‖ρ(g)ρ(g)* − I‖_HS`.
    pub fn unitarity_deviation(&self) -> f64 {
        let id = CMat::identity(self.dim, self.dim);
        self.matrices
            .iter()
            .map(|m| hs_norm(&(m * m.adjoint() - &id)))
            .fold(0.0, f64::max)
    }

    /// `|⟨χ, χ⟩_{L²(G)} − 1|`.
    pub fn character_norm_deviation(&self) -> f64 {
        let n = self.matrices.len() as f64;
        let norm: f64 = self.matrices.iter().map(|m| m.trace().norm_sqr()).sum::<f64>() / n;
        (norm - 1.0).abs()
    }
}

/// Complete list of irreps of a group, up to isomorphism.
#[derive(Debug, Clone)]
pub struct IrrepCatalog {
    order: usize,
    irreps: Vec<Irrep>,
    trivial: usize,
}

impl IrrepCatalog {
    pub fn from_documents(group: &Group, docs: &[IrrepDocument]) -> Result<Self> {
        let irreps = docs
            .iter()
            .map(|d| Irrep::new(group, d.label.clone(), d.to_matrices()?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, irreps)
    }

    /// Checks completeness (`Σ dim² = |G|`) and pairwise character
    /// orthogonality.
    pub fn new(group: &Group, irreps: Vec<Irrep>) -> Result<Self> {
        let sum: usize = irreps.iter().map(|r| r.dim * r.dim).sum();
        if sum != group.order() {
            return Err(Error::CatalogIncomplete { sum, order: group.order() });
        }
        let n = group.order() as f64;
        for (a, ra) in irreps.iter().enumerate() {
            for rb in &irreps[a + 1..] {
                let ip: Complex64 = group
                    .elements()
                    .map(|g| ra.character(g) * rb.character(g).conj())
                    .sum::<Complex64>()
                    / n;
                if ip.norm() > EQ_TOL {
                    return Err(Error::InvalidIrrep {
                        label: rb.label.clone(),
                        reason: format!("character not orthogonal to {}", ra.label),
                    });
                }
            }
        }
        let trivial = irreps
            .iter()
            .position(|r| {
                r.dim == 1 && r.matrices.iter().all(|m| (m[(0, 0)] - 1.0).norm() < EQ_TOL)
            })
            .ok_or_else(|| Error::InvalidIrrep {
                label: group.name().to_string(),
                reason: "catalog has no trivial representation".into(),
            })?;
        Ok(Self { order: group.order(), irreps, trivial })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn irrep(&self, index: usize) -> &Irrep {
        &self.irreps[index]
    }

    pub fn trivial_index(&self) -> usize {
        self.trivial
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.irreps.iter().position(|r| r.label == label)
    }
}

/// Character table together with the column sums `Σ_ρ dim(ρ) χ_ρ(g)`.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterTable {
    pub labels: Vec<String>,
    /// `values[ρ][g] = χ_ρ(g)`.
    pub values: Vec<Vec<Complex64>>,
    pub dim_weighted_sums: Vec<Complex64>,
    /// Max over `g` of `|Σ_ρ dim(ρ) χ_ρ(g) − |G|·[g = e]|`.
    pub dim_identity_deviation: f64,
}

pub fn character_table(group: &Group, catalog: &IrrepCatalog) -> Result<CharacterTable> {
    let sum: usize = catalog.irreps.iter().map(|r| r.dim * r.dim).sum();
    if sum != group.order() {
        return Err(Error::CatalogIncomplete { sum, order: group.order() });
    }
    let values: Vec<Vec<Complex64>> = catalog
        .irreps
        .iter()
        .map(|r| group.elements().map(|g| r.character(g)).collect())
        .collect();
    let dim_weighted_sums: Vec<Complex64> = group
        .elements()
        .map(|g| {
            catalog
                .irreps
                .iter()
                .zip(&values)
                .map(|(r, row)| row[g.index()] * r.dim as f64)
                .sum()
        })
        .collect();
    let dim_identity_deviation = group
        .elements()
        .map(|g| {
            let expected = if g == group.identity() { group.order() as f64 } else { 0.0 };
            (dim_weighted_sums[g.index()] - expected).norm()
        })
        .fold(0.0, f64::max);
    Ok(CharacterTable {
        labels: catalog.irreps.iter().map(|r| r.label.clone()).collect(),
        values,
        dim_weighted_sums,
        dim_identity_deviation,
    })
}

/// Max deviation of `⟨ρ_ij, τ_kl⟩_{L²(G)}` from `δ_{ρτ} δ_ik δ_jl / dim(ρ)`
/// over all pairs of catalog entries.
pub fn orthogonality_deviation(group: &Group, catalog: &IrrepCatalog) -> f64 {
    let n = group.order() as f64;
    let mut worst = 0.0f64;
    for (a, ra) in catalog.irreps.iter().enumerate() {
        for (b, rb) in catalog.irreps.iter().enumerate() {
            for i in 0..ra.dim {
                for j in 0..ra.dim {
                    for k in 0..rb.dim {
                        for l in 0..rb.dim {
                            let ip: Complex64 = group
                                .elements()
                                .map(|g| ra.matrix(g)[(i, j)] * rb.matrix(g)[(k, l)].conj())
                                .sum::<Complex64>()
                                / n;
                            let expected = if a == b && i == k && j == l {
                                1.0 / ra.dim as f64
                            } else {
                                0.0
                            };
                            worst = worst.max((ip - expected).norm());
                        }
                    }
                }
            }
        }
    }
    worst
}

/// An irrep of `G^n`, the tensor product of one catalog irrep per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProductIrrep {
    components: Vec<usize>,
}

impl ProductIrrep {
    pub fn new(components: Vec<usize>) -> Self {
        Self { components }
    }

    pub fn trivial(catalog: &IrrepCatalog, arity: usize) -> Self {
        Self { components: vec![catalog.trivial; arity] }
    }

    pub fn components(&self) -> &[usize] {
        &self.components
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self, catalog: &IrrepCatalog) -> usize {
        self.components.iter().map(|&c| catalog.irreps[c].dim).product()
    }

    /// `|α|`, the number of non-trivial components.
    pub fn support_count(&self, catalog: &IrrepCatalog) -> usize {
        self.components.iter().filter(|&&c| c != catalog.trivial).count()
    }

    pub fn is_trivial(&self, catalog: &IrrepCatalog) -> bool {
        self.support_count(catalog) == 0
    }

    pub fn label(&self, catalog: &IrrepCatalog) -> String {
        let parts: Vec<&str> = self.components.iter().map(|&c| catalog.irreps[c].label()).collect();
        format!("({})", parts.join(","))
    }

    pub fn character(&self, catalog: &IrrepCatalog, x: &[Elem]) -> Complex64 {
        self.components
            .iter()
            .zip(x)
            .map(|(&c, &g)| catalog.irreps[c].character(g))
            .product()
    }

    /// `α(x)_{ij}` without materializing the tensor product. Row and column
    /// indices are mixed-radix with coordinate 0 most significant, matching
    /// the Kronecker product order.
    pub fn entry(&self, catalog: &IrrepCatalog, x: &[Elem], i: usize, j: usize) -> Complex64 {
        let mut i = i;
        let mut j = j;
        let mut acc = Complex64::new(1.0, 0.0);
        for (&c, &g) in self.components.iter().zip(x).rev() {
            let r = &catalog.irreps[c];
            acc *= r.matrix(g)[(i % r.dim, j % r.dim)];
            i /= r.dim;
            j /= r.dim;
        }
        acc
    }

    /// `α(x) = α₁(x₁) ⊗ … ⊗ α_n(x_n)`, refused above [`MAX_MATERIALIZED_DIM`].
    pub fn matrix(&self, catalog: &IrrepCatalog, x: &[Elem]) -> Result<CMat> {
        let dim = self.dim(catalog);
        if dim > MAX_MATERIALIZED_DIM {
            return Err(Error::ParameterOutOfRange(format!(
                "product irrep of dimension {dim} exceeds {MAX_MATERIALIZED_DIM}"
            )));
        }
        Ok(self.matrix_unchecked(catalog, x))
    }

    fn matrix_unchecked(&self, catalog: &IrrepCatalog, x: &[Elem]) -> CMat {
        let mut acc = CMat::from_element(1, 1, Complex64::new(1.0, 0.0));
        for (&c, &g) in self.components.iter().zip(x) {
            acc = acc.kronecker(catalog.irreps[c].matrix(g));
        }
        acc
    }
}

/// Every irrep of `G^n`, component 0 varying fastest.
pub fn all_product_irreps(catalog: &IrrepCatalog, arity: usize) -> Vec<ProductIrrep> {
    let k = catalog.len();
    let total = k.pow(arity as u32);
    (0..total)
        .map(|mut code| {
            let components = (0..arity)
                .map(|_| {
                    let c = code % k;
                    code /= k;
                    c
                })
                .collect();
            ProductIrrep { components }
        })
        .collect()
}

/// A complex-valued function tabulated on all of `G^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionTable {
    domain: Domain,
    values: Vec<Complex64>,
}

impl FunctionTable {
    pub fn new(order: usize, arity: usize, values: Vec<Complex64>) -> Result<Self> {
        let domain = Domain::new(order, arity);
        let size = domain.checked_size(ENUMERATION_CAP)?;
        if values.len() != size {
            return Err(Error::LengthMismatch { left: values.len(), right: size });
        }
        Ok(Self { domain, values })
    }

    pub fn from_fn(
        group: &Group,
        arity: usize,
        mut f: impl FnMut(&[Elem]) -> Complex64,
    ) -> Result<Self> {
        let domain = Domain::new(group.order(), arity);
        let mut values = Vec::with_capacity(domain.checked_size(ENUMERATION_CAP)?);
        domain.for_each(ENUMERATION_CAP, |_, x| values.push(f(x)))?;
        Ok(Self { domain, values })
    }

    pub fn constant(group: &Group, arity: usize, v: Complex64) -> Result<Self> {
        Self::from_fn(group, arity, |_| v)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.domain.arity
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, x: &[Elem]) -> Complex64 {
        self.values[self.domain.index_of(x)]
    }

    /// `⟨f, g⟩_{L²} = E_x[f(x) \overline{g(x)}]`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_domain(other)?;
        let n = self.values.len() as f64;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
            / n)
    }

    /// `‖f‖²_{L²}`.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_domain(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn same_domain(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch { left: self.arity(), right: other.arity() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficient {
    pub irrep: ProductIrrep,
    pub matrix: CMat,
}

/// `f̂(α) = E_x[f(x) α(x)]`.
pub fn fourier_transform(
    catalog: &IrrepCatalog,
    f: &FunctionTable,
    alpha: &ProductIrrep,
) -> Result<FourierCoefficient> {
    if alpha.arity() != f.arity() {
        return Err(Error::DomainMismatch { left: f.arity(), right: alpha.arity() });
    }
    let dim = alpha.dim(catalog);
    if dim > MAX_MATERIALIZED_DIM {
        return Err(Error::ParameterOutOfRange(format!(
            "product irrep of dimension {dim} exceeds {MAX_MATERIALIZED_DIM}"
        )));
    }
    let mut acc = CMat::zeros(dim, dim);
    f.domain.for_each(ENUMERATION_CAP, |idx, x| {
        let v = f.values[idx];
        if v != Complex64::new(0.0, 0.0) {
            acc += alpha.matrix_unchecked(catalog, x) * v;
        }
    })?;
    acc /= Complex64::new(f.values.len() as f64, 0.0);
    Ok(FourierCoefficient { irrep: alpha.clone(), matrix: acc })
}

/// Fourier coefficients at every irrep of the domain.
pub fn fourier_spectrum(catalog: &IrrepCatalog, f: &FunctionTable) -> Result<Vec<FourierCoefficient>> {
    all_product_irreps(catalog, f.arity())
        .iter()
        .map(|a| fourier_transform(catalog, f, a))
        .collect()
}

/// `f(x) = Σ_α dim(α) ⟨f̂(α), α(x)⟩`; needs a coefficient for every irrep
/// of `G^n`.
pub fn inverse_fourier(
    catalog: &IrrepCatalog,
    arity: usize,
    coefficients: &[FourierCoefficient],
) -> Result<FunctionTable> {
    let by_irrep: HashMap<&ProductIrrep, &CMat> =
        coefficients.iter().map(|c| (&c.irrep, &c.matrix)).collect();
    let alphas = all_product_irreps(catalog, arity);
    let mut terms = Vec::with_capacity(alphas.len());
    for a in &alphas {
        let m = by_irrep
            .get(a)
            .ok_or_else(|| Error::MissingIrrep(a.label(catalog)))?;
        terms.push((a, *m, a.dim(catalog) as f64));
    }
    let domain = Domain::new(catalog.order(), arity);
    let mut values = Vec::with_capacity(domain.checked_size(ENUMERATION_CAP)?);
    domain.for_each(ENUMERATION_CAP, |_, x| {
        let v: Complex64 = terms
            .iter()
            .map(|(a, m, d)| hs_inner(m, &a.matrix_unchecked(catalog, x)) * *d)
            .sum();
        values.push(v);
    })?;
    FunctionTable::new(catalog.order(), arity, values)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParsevalReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

/// Compares `‖f‖²` with `Σ_α dim(α) ‖f̂(α)‖²_HS`.
pub fn parseval_check(catalog: &IrrepCatalog, f: &FunctionTable) -> Result<ParsevalReport> {
    let lhs = f.norm_sqr();
    let rhs: f64 = fourier_spectrum(catalog, f)?
        .iter()
        .map(|c| c.irrep.dim(catalog) as f64 * hs_norm(&c.matrix).powi(2))
        .sum();
    Ok(ParsevalReport { lhs, rhs, gap: (lhs - rhs).abs() })
}

/// `|⟨f, g⟩ − Σ_α dim(α) ⟨f̂(α), ĝ(α)⟩|`.
pub fn plancherel_gap(catalog: &IrrepCatalog, f: &FunctionTable, g: &FunctionTable) -> Result<f64> {
    let lhs = f.inner(g)?;
    let fs = fourier_spectrum(catalog, f)?;
    let gs = fourier_spectrum(catalog, g)?;
    let rhs: Complex64 = fs
        .iter()
        .zip(&gs)
        .map(|(a, b)| hs_inner(&a.matrix, &b.matrix) * a.irrep.dim(catalog) as f64)
        .sum();
    Ok((lhs - rhs).norm())
}

/// `(f∗g)(x) = E_y[f(y) g(y⁻¹x)]` on `G^n`.
pub fn convolve(group: &Group, f: &FunctionTable, g: &FunctionTable) -> Result<FunctionTable> {
    if f.domain != g.domain {
        return Err(Error::DomainMismatch { left: f.arity(), right: g.arity() });
    }
    let domain = f.domain;
    let size = domain.checked_size(ENUMERATION_CAP)?;
    let tuples: Vec<Vec<Elem>> = (0..size).map(|i| domain.tuple_at(i)).collect();
    let inverses: Vec<Vec<Elem>> = tuples.iter().map(|y| group.tuple_inv(y)).collect();
    let mut values = Vec::with_capacity(size);
    for x in &tuples {
        let mut acc = Complex64::new(0.0, 0.0);
        for (yi, yinv) in inverses.iter().enumerate() {
            let fy = f.values[yi];
            if fy == Complex64::new(0.0, 0.0) {
                continue;
            }
            let idx = yinv
                .iter()
                .zip(x)
                .rev()
                .fold(0, |acc, (&a, &b)| acc * domain.order + group.mul(a, b).index());
            acc += fy * g.values[idx];
        }
        values.push(acc / size as f64);
    }
    FunctionTable::new(domain.order, domain.arity, values)
}

/// Multiplicity of each irrep `τ` of `G^L` in `α ∘ π̃`, where
/// `π̃(y)_d = y_{π(d)}`.
///
/// Multiplicities are the character inner products `⟨χ_{α∘π̃}, χ_τ⟩`
/// enumerated over `G^L`. Only constituents with positive multiplicity are
/// returned, and `Σ mult·dim(τ) = dim(α)` is checked.
pub fn pullback_decompose(
    catalog: &IrrepCatalog,
    alpha: &ProductIrrep,
    pi: &[usize],
    l: usize,
) -> Result<Vec<(ProductIrrep, usize)>> {
    if pi.len() != alpha.arity() {
        return Err(Error::LengthMismatch { left: pi.len(), right: alpha.arity() });
    }
    if let Some(&bad) = pi.iter().find(|&&p| p >= l) {
        return Err(Error::IndexOutOfRange { index: bad, bound: l });
    }
    let domain = Domain::new(catalog.order(), l);
    let size = domain.checked_size(ENUMERATION_CAP)?;

    let mut pulled = Vec::with_capacity(size);
    let mut points = Vec::with_capacity(size);
    domain.for_each(ENUMERATION_CAP, |_, y| {
        let chi: Complex64 = alpha
            .components
            .iter()
            .zip(pi)
            .map(|(&c, &p)| catalog.irreps[c].character(y[p]))
            .product();
        pulled.push(chi);
        points.push(y.to_vec());
    })?;

    let mut out = Vec::new();
    let mut accounted = 0usize;
    for tau in all_product_irreps(catalog, l) {
        let ip: Complex64 = pulled
            .iter()
            .zip(&points)
            .map(|(chi, y)| chi * tau.character(catalog, y).conj())
            .sum::<Complex64>()
            / size as f64;
        let rounded = ip.re.round();
        if (ip - rounded).norm() > MULTIPLICITY_TOL {
            return Err(Error::NonIntegralMultiplicity { irrep: tau.label(catalog), value: ip.re });
        }
        if rounded >= 1.0 {
            let m = rounded as usize;
            accounted += m * tau.dim(catalog);
            out.push((tau, m));
        }
    }
    let dim = alpha.dim(catalog);
    if accounted != dim {
        return Err(Error::NonIntegralMultiplicity {
            irrep: alpha.label(catalog),
            value: accounted as f64,
        });
    }
    Ok(out)
}

/// The coordinate sets attached to `α` and `π`; the `tilde_*` variants use
/// `dim ≥ 2` where the plain ones use "non-trivial".
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TSets {
    pub t: BTreeSet<usize>,
    pub t_pi: BTreeSet<usize>,
    pub t_pi_uq: BTreeSet<usize>,
    pub tilde_t: BTreeSet<usize>,
    pub tilde_t_pi: BTreeSet<usize>,
    pub tilde_t_pi_uq: BTreeSet<usize>,
}

fn image_sets(support: &BTreeSet<usize>, pi: &[usize]) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut hits: HashMap<usize, usize> = HashMap::new();
    for &d in support {
        *hits.entry(pi[d]).or_default() += 1;
    }
    let image = hits.keys().copied().collect();
    let unique = hits.iter().filter(|(_, &n)| n == 1).map(|(&k, _)| k).collect();
    (image, unique)
}

pub fn t_sets(catalog: &IrrepCatalog, alpha: &ProductIrrep, pi: &[usize]) -> Result<TSets> {
    if pi.len() != alpha.arity() {
        return Err(Error::LengthMismatch { left: pi.len(), right: alpha.arity() });
    }
    let t = support(catalog, alpha);
    let tilde_t = high_dim_support(catalog, alpha);
    let (t_pi, t_pi_uq) = image_sets(&t, pi);
    let (tilde_t_pi, tilde_t_pi_uq) = image_sets(&tilde_t, pi);
    Ok(TSets { t, t_pi, t_pi_uq, tilde_t, tilde_t_pi, tilde_t_pi_uq })
}

/// `T(α)`: coordinates with a non-trivial component.
pub fn support(catalog: &IrrepCatalog, alpha: &ProductIrrep) -> BTreeSet<usize> {
    alpha
        .components
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != catalog.trivial)
        .map(|(d, _)| d)
        .collect()
}

/// `T̃(α)`: coordinates whose component has dimension at least 2.
pub fn high_dim_support(catalog: &IrrepCatalog, alpha: &ProductIrrep) -> BTreeSet<usize> {
    alpha
        .components
        .iter()
        .enumerate()
        .filter(|(_, &c)| catalog.irreps[c].dim >= 2)
        .map(|(d, _)| d)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContainmentMode {
    Plain,
    Tilde,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentViolation {
    pub constituent: String,
    pub lower: Vec<usize>,
    pub middle: Vec<usize>,
    pub upper: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentReport {
    pub mode: ContainmentMode,
    pub constituents: usize,
    pub violations: Vec<ContainmentViolation>,
}

impl ContainmentReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `T_π^uq(α) ⊆ T(τ) ⊆ T_π(α)` (plain) or the `T̃` chain (tilde) for
/// every constituent `τ` of `α ∘ π̃`.
pub fn verify_containments(
    catalog: &IrrepCatalog,
    alpha: &ProductIrrep,
    pi: &[usize],
    l: usize,
    mode: ContainmentMode,
) -> Result<ContainmentReport> {
    let sets = t_sets(catalog, alpha, pi)?;
    let (lower, upper) = match mode {
        ContainmentMode::Plain => (&sets.t_pi_uq, &sets.t_pi),
        ContainmentMode::Tilde => (&sets.tilde_t_pi_uq, &sets.tilde_t_pi),
    };
    let constituents = pullback_decompose(catalog, alpha, pi, l)?;
    let mut violations = Vec::new();
    for (tau, _) in &constituents {
        let middle = match mode {
            ContainmentMode::Plain => support(catalog, tau),
            ContainmentMode::Tilde => high_dim_support(catalog, tau),
        };
        if !lower.is_subset(&middle) || !middle.is_subset(upper) {
            violations.push(ContainmentViolation {
                constituent: tau.label(catalog),
                lower: lower.iter().copied().collect(),
                middle: middle.into_iter().collect(),
                upper: upper.iter().copied().collect(),
            });
        }
    }
    Ok(ContainmentReport { mode, constituents: constituents.len(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn constant_one_has_trivial_spectrum() {
        let (g, cat) = builtin("S3").unwrap();
        let f = FunctionTable::constant(&g, 1, c(1.0)).unwrap();
        for coeff in fourier_spectrum(&cat, &f).unwrap() {
            let expected = if coeff.irrep.is_trivial(&cat) { 1.0 } else { 0.0 };
            let dim = coeff.irrep.dim(&cat);
            let diff = &coeff.matrix - CMat::identity(dim, dim) * c(expected);
            assert!(hs_norm(&diff) < EQ_TOL);
        }
    }

    #[test]
    fn z2_indicator_of_zero() {
        let (g, cat) = builtin("Z2").unwrap();
        let f = FunctionTable::from_fn(&g, 1, |x| c(if x[0] == Elem(0) { 1.0 } else { 0.0 })).unwrap();
        for coeff in fourier_spectrum(&cat, &f).unwrap() {
            assert!((coeff.matrix[(0, 0)] - c(0.5)).norm() < EQ_TOL);
        }
    }

    #[test]
    fn inverse_of_zero_and_trivial_only() {
        let (g, cat) = builtin("S3").unwrap();
        let zeros: Vec<FourierCoefficient> = all_product_irreps(&cat, 1)
            .into_iter()
            .map(|a| {
                let d = a.dim(&cat);
                FourierCoefficient { irrep: a, matrix: CMat::zeros(d, d) }
            })
            .collect();
        let f = inverse_fourier(&cat, 1, &zeros).unwrap();
        assert!(f.values().iter().all(|v| v.norm() < EQ_TOL));

        let v = Complex64::new(0.25, -1.5);
        let mut coeffs = zeros.clone();
        for coeff in coeffs.iter_mut() {
            if coeff.irrep.is_trivial(&cat) {
                coeff.matrix[(0, 0)] = v;
            }
        }
        let f = inverse_fourier(&cat, 1, &coeffs).unwrap();
        let expected = FunctionTable::constant(&g, 1, v).unwrap();
        assert!(f.max_abs_diff(&expected).unwrap() < EQ_TOL);
    }

    #[test]
    fn missing_irrep_is_reported() {
        let (_, cat) = builtin("S3").unwrap();
        let err = inverse_fourier(&cat, 1, &[]).unwrap_err();
        assert!(matches!(err, Error::MissingIrrep(_)));
    }

    #[test]
    fn indicator_round_trip() {
        let (g, cat) = builtin("S3").unwrap();
        let f = FunctionTable::from_fn(&g, 1, |x| c(if x[0] == g.identity() { 1.0 } else { 0.0 }))
            .unwrap();
        let back = inverse_fourier(&cat, 1, &fourier_spectrum(&cat, &f).unwrap()).unwrap();
        assert!(f.max_abs_diff(&back).unwrap() < 1e-9);
    }

    #[test]
    fn parseval_constant_and_matrix_entry() {
        let (g, cat) = builtin("S3").unwrap();
        let one = FunctionTable::constant(&g, 1, c(1.0)).unwrap();
        let rep = parseval_check(&cat, &one).unwrap();
        assert!((rep.lhs - 1.0).abs() < EQ_TOL && rep.gap < EQ_TOL);

        let std = cat.irrep(cat.index_of("std").unwrap());
        let entry = FunctionTable::from_fn(&g, 1, |x| std.matrix(x[0])[(0, 1)]).unwrap();
        let rep = parseval_check(&cat, &entry).unwrap();
        assert!((rep.lhs - 0.5).abs() < EQ_TOL, "{}", rep.lhs);
        assert!(rep.gap < EQ_TOL);
    }

    #[test]
    fn convolution_with_scaled_delta_is_identity() {
        let (g, cat) = builtin("S3").unwrap();
        let delta = FunctionTable::from_fn(&g, 2, |x| {
            c(if x.iter().all(|&e| e == g.identity()) { 36.0 } else { 0.0 })
        })
        .unwrap();
        let h = FunctionTable::from_fn(&g, 2, |x| Complex64::new(x[0].0 as f64, x[1].0 as f64)).unwrap();
        let out = convolve(&g, &delta, &h).unwrap();
        assert!(out.max_abs_diff(&h).unwrap() < EQ_TOL);
        let _ = cat;
    }

    #[test]
    fn convolution_with_mean_zero_vanishes() {
        let (g, cat) = builtin("S3").unwrap();
        let sign = cat.irrep(cat.index_of("sign").unwrap());
        let one = FunctionTable::constant(&g, 1, c(1.0)).unwrap();
        let h = FunctionTable::from_fn(&g, 1, |x| sign.character(x[0]) * 3.0).unwrap();
        let out = convolve(&g, &one, &h).unwrap();
        assert!(out.values().iter().all(|v| v.norm() < EQ_TOL));
    }

    #[test]
    fn domain_mismatch() {
        let (g, _) = builtin("Z2").unwrap();
        let a = FunctionTable::constant(&g, 1, c(1.0)).unwrap();
        let b = FunctionTable::constant(&g, 2, c(1.0)).unwrap();
        assert!(matches!(convolve(&g, &a, &b), Err(Error::DomainMismatch { .. })));
    }

    #[test]
    fn character_table_of_s3() {
        let (g, cat) = builtin("S3").unwrap();
        let table = character_table(&g, &cat).unwrap();
        assert!((table.dim_weighted_sums[0] - c(6.0)).norm() < EQ_TOL);
        assert!(table.dim_weighted_sums[1].norm() < EQ_TOL);
        let triv = cat.trivial_index();
        assert!(table.values[triv].iter().all(|v| (v - c(1.0)).norm() < EQ_TOL));
        assert!(table.dim_identity_deviation < EQ_TOL);
    }

    #[test]
    fn incomplete_catalog_is_rejected() {
        let (g, cat) = builtin("S3").unwrap();
        let partial = cat.irreps()[..2].to_vec();
        assert!(matches!(
            IrrepCatalog::new(&g, partial),
            Err(Error::CatalogIncomplete { sum: 2, order: 6 })
        ));
    }

    #[test]
    fn reducible_representation_is_rejected() {
        let (g, _) = builtin("Z2").unwrap();
        let mats = vec![CMat::identity(2, 2), CMat::identity(2, 2)];
        assert!(matches!(Irrep::new(&g, "two", mats), Err(Error::InvalidIrrep { .. })));
    }

    #[test]
    fn z2_pullbacks() {
        let (_, cat) = builtin("Z2").unwrap();
        let chi = 1 - cat.trivial_index();
        let triv = cat.trivial_index();
        let both = ProductIrrep::new(vec![chi, chi]);
        assert_eq!(
            pullback_decompose(&cat, &both, &[0, 0], 1).unwrap(),
            vec![(ProductIrrep::new(vec![triv]), 1)]
        );
        let first = ProductIrrep::new(vec![chi, triv]);
        assert_eq!(
            pullback_decompose(&cat, &first, &[0, 0], 1).unwrap(),
            vec![(ProductIrrep::new(vec![chi]), 1)]
        );
        let none = ProductIrrep::trivial(&cat, 3);
        assert_eq!(
            pullback_decompose(&cat, &none, &[0, 1, 1], 2).unwrap(),
            vec![(ProductIrrep::trivial(&cat, 2), 1)]
        );
    }

    #[test]
    fn t_sets_examples() {
        let (_, cat) = builtin("Z2").unwrap();
        let chi = 1 - cat.trivial_index();
        let triv = cat.trivial_index();
        let s = t_sets(&cat, &ProductIrrep::new(vec![chi, chi, triv]), &[0, 0, 1]).unwrap();
        assert_eq!(s.t, BTreeSet::from([0, 1]));
        assert_eq!(s.t_pi, BTreeSet::from([0]));
        assert!(s.t_pi_uq.is_empty());
        let s = t_sets(&cat, &ProductIrrep::new(vec![chi, triv, triv]), &[0, 0, 1]).unwrap();
        assert_eq!(s.t_pi_uq, BTreeSet::from([0]));
        let s = t_sets(&cat, &ProductIrrep::trivial(&cat, 3), &[0, 0, 1]).unwrap();
        assert_eq!(s, TSets::default());
    }

    #[test]
    fn z2_containment_example() {
        let (_, cat) = builtin("Z2").unwrap();
        let chi = 1 - cat.trivial_index();
        let alpha = ProductIrrep::new(vec![chi, cat.trivial_index()]);
        let report = verify_containments(&cat, &alpha, &[0, 0], 1, ContainmentMode::Plain).unwrap();
        assert!(report.passed());
        assert_eq!(report.constituents, 1);
    }

    #[test]
    fn entrywise_matches_kronecker() {
        let (g, cat) = builtin("S3").unwrap();
        let std = cat.index_of("std").unwrap();
        let sign = cat.index_of("sign").unwrap();
        let alpha = ProductIrrep::new(vec![std, sign, std]);
        let x = vec![Elem(4), Elem(1), Elem(2)];
        let m = alpha.matrix(&cat, &x).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((m[(i, j)] - alpha.entry(&cat, &x, i, j)).norm() < EQ_TOL);
            }
        }
        let _ = g;
    }
}
