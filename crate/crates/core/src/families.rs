//! Finite-dimensional function families Φ on a point cloud.
//!
//! A family is the linear span of a few basis functions, each stored as its
//! vector of values on the cloud. Four constructions are provided: affine
//! functions, polynomials of bounded degree, Lipschitz functions vanishing at
//! a basepoint, and discrete harmonic functions on a rectangular grid.

use serde::{Deserialize, Serialize};

use crate::cloud::{IndexSet, PointCloud, ScalarField};
use crate::error::{Error, Result};

/// Threshold below which two basis values count as equal when testing
/// point separation.
pub const SEPARATION_TOL: f64 = 1e-9;
const RANK_TOL: f64 = 1e-9;
const HARMONIC_RESIDUAL: f64 = 1e-10;
/// Largest grid side handled by the banded direct solver.
const DIRECT_GRID_LIMIT: usize = 64;

/// A rectangular grid of `width × height` nodes with uniform spacing.
///
/// Node `(i, j)` (column `i`, row `j`) has index `j * width + i` and sits at
/// `origin + spacing * (i, j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
    #[serde(default = "default_spacing")]
    pub spacing: f64,
    #[serde(default)]
    pub origin: [f64; 2],
}

fn default_spacing() -> f64 {
    1.0
}

impl GridSpec {
    pub fn new(width: usize, height: usize, spacing: f64) -> Result<Self> {
        let g = Self {
            width,
            height,
            spacing,
            origin: [0.0, 0.0],
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width < 3 || self.height < 3 {
            return Err(Error::InvalidInput(format!(
                "grid must be at least 3x3, got {}x{}",
                self.width, self.height
            )));
        }
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(Error::InvalidInput("grid spacing must be positive".into()));
        }
        if self.origin.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("grid origin must be finite".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.width + i
    }

    pub fn is_boundary(&self, idx: usize) -> bool {
        let (i, j) = (idx % self.width, idx / self.width);
        i == 0 || j == 0 || i + 1 == self.width || j + 1 == self.height
    }

    pub fn boundary_indices(&self) -> IndexSet {
        (0..self.len()).filter(|&k| self.is_boundary(k)).collect()
    }

    pub fn interior_indices(&self) -> IndexSet {
        (0..self.len()).filter(|&k| !self.is_boundary(k)).collect()
    }

    pub fn node(&self, idx: usize) -> Vec<f64> {
        let (i, j) = (idx % self.width, idx / self.width);
        vec![
            self.origin[0] + self.spacing * i as f64,
            self.origin[1] + self.spacing * j as f64,
        ]
    }

    pub fn cloud(&self) -> Result<PointCloud> {
        self.validate()?;
        PointCloud::new((0..self.len()).map(|k| self.node(k)).collect())
    }

    /// Whether `cloud` consists of exactly this grid's nodes, in index order.
    pub fn matches(&self, cloud: &PointCloud) -> bool {
        if cloud.len() != self.len() || cloud.dim() != 2 {
            return false;
        }
        let tol = 1e-9 * self.spacing.max(1.0);
        (0..self.len()).all(|k| {
            let node = self.node(k);
            let p = cloud.point(k);
            (p[0] - node[0]).abs() <= tol && (p[1] - node[1]).abs() <= tol
        })
    }
}

/// Construction parameters for a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilySpec {
    Affine,
    Polynomial {
        degree: usize,
    },
    Lipschitz {
        basepoint: usize,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        full: bool,
    },
    Harmonic {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridSpec>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind {
    Affine,
    Polynomial { degree: usize },
    Lipschitz { basepoint: usize, full: bool },
    Harmonic(GridSpec),
    /// User-supplied basis.
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Sup,
    Lip { basepoint: usize },
}

/// Coordinates of an element of Φ in the family basis.
pub type CoefficientVector = Vec<f64>;

/// A linear space Φ of functions on a cloud, spanned by `basis` rows.
#[derive(Debug, Clone)]
pub struct FunctionFamily {
    kind: FamilyKind,
    cloud: PointCloud,
    /// `basis[j][x]` = value of basis function `j` at cloud point `x`.
    basis: Vec<Vec<f64>>,
    /// Transpose of `basis`: the feature vector of each point.
    features: Vec<Vec<f64>>,
    norm: NormKind,
    alpha_bound: f64,
}

impl FunctionFamily {
    /// A family with an explicit basis. Rows must be linearly independent.
    pub fn custom(
        cloud: PointCloud,
        basis: Vec<Vec<f64>>,
        norm: NormKind,
        alpha_bound: f64,
    ) -> Result<Self> {
        Self::assemble(FamilyKind::Custom, cloud, basis, norm, alpha_bound)
    }

    fn assemble(
        kind: FamilyKind,
        cloud: PointCloud,
        basis: Vec<Vec<f64>>,
        norm: NormKind,
        alpha_bound: f64,
    ) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::InvalidInput("family basis is empty".into()));
        }
        for row in &basis {
            if row.len() != cloud.len() {
                return Err(Error::DimensionMismatch {
                    expected: cloud.len(),
                    found: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("basis values must be finite".into()));
            }
        }
        if !(alpha_bound > 0.0 && alpha_bound.is_finite()) {
            return Err(Error::InvalidInput("alpha bound must be positive".into()));
        }
        if let NormKind::Lip { basepoint } = norm {
            cloud.check_index(basepoint)?;
        }
        let rank = matrix_rank(&basis);
        if rank < basis.len() {
            return Err(Error::RankDeficient {
                rank,
                rows: basis.len(),
            });
        }
        let features = (0..cloud.len())
            .map(|x| basis.iter().map(|row| row[x]).collect())
            .collect();
        let family = Self {
            kind,
            cloud,
            basis,
            features,
            norm,
            alpha_bound,
        };
        family.spot_check_alpha()?;
        Ok(family)
    }

    fn spot_check_alpha(&self) -> Result<()> {
        for j in 0..self.dim() {
            let mut c = vec![0.0; self.dim()];
            c[j] = 1.0;
            let sup = self.evaluate_unchecked(&c).sup_norm();
            let norm = self.norm_of_values(self.basis[j].as_slice());
            if sup > self.alpha_bound * norm + 1e-9 {
                return Err(Error::InvalidInput(format!(
                    "alpha bound {} fails on basis function {j}",
                    self.alpha_bound
                )));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    /// Number of basis functions `m`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Values of all basis functions at point `x`.
    pub fn feature(&self, x: usize) -> &[f64] {
        &self.features[x]
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm
    }

    pub fn alpha_bound(&self) -> f64 {
        self.alpha_bound
    }

    pub fn is_affine(&self) -> bool {
        matches!(self.kind, FamilyKind::Affine)
    }

    fn check_coeffs(&self, c: &[f64]) -> Result<()> {
        if c.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: c.len(),
            });
        }
        Ok(())
    }

    /// `φ = Σ c_j g_j` as a field on the cloud.
    pub fn evaluate(&self, c: &[f64]) -> Result<ScalarField> {
        self.check_coeffs(c)?;
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("coefficients must be finite".into()));
        }
        Ok(self.evaluate_unchecked(c))
    }

    pub(crate) fn evaluate_unchecked(&self, c: &[f64]) -> ScalarField {
        let values = self.features.iter().map(|f| dot(f, c)).collect();
        ScalarField::new(values).expect("finite basis and coefficients")
    }

    /// Value of `Σ c_j g_j` at a single point.
    pub fn value_at(&self, c: &[f64], x: usize) -> f64 {
        dot(&self.features[x], c)
    }

    pub fn family_norm(&self, c: &[f64]) -> Result<f64> {
        let phi = self.evaluate(c)?;
        Ok(self.norm_of_values(phi.values()))
    }

    /// Family norm of an arbitrary field given by its values.
    pub fn norm_of_values(&self, values: &[f64]) -> f64 {
        match self.norm {
            NormKind::Sup => values.iter().fold(0.0f64, |m, v| m.max(v.abs())),
            NormKind::Lip { .. } => {
                let n = values.len();
                let mut best = 0.0f64;
                for x in 0..n {
                    for y in 0..x {
                        let d = self.cloud.distance(x, y);
                        best = best.max((values[x] - values[y]).abs() / d);
                    }
                }
                best
            }
        }
    }

    /// `None` when the basis separates every pair of `domain`; otherwise
    /// the first pair (ascending) it fails to separate.
    pub fn separates_points(&self, domain: &IndexSet) -> Result<Option<(usize, usize)>> {
        domain.check_within(self.cloud.len())?;
        let idx = domain.as_slice();
        for (k, &i) in idx.iter().enumerate() {
            for &j in &idx[k + 1..] {
                let separated = self.features[i]
                    .iter()
                    .zip(&self.features[j])
                    .any(|(a, b)| (a - b).abs() > SEPARATION_TOL);
                if !separated {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Builds one of the standard families on `cloud`.
pub fn build_family(spec: &FamilySpec, cloud: &PointCloud) -> Result<FunctionFamily> {
    match spec {
        FamilySpec::Affine => affine(cloud),
        FamilySpec::Polynomial { degree } => polynomial(cloud, *degree),
        FamilySpec::Lipschitz { basepoint, full } => lipschitz(cloud, *basepoint, *full),
        FamilySpec::Harmonic { grid } => match grid {
            Some(g) => harmonic(cloud, g),
            None => Err(Error::InvalidInput(
                "cloud/grid mismatch: harmonic family needs a grid".into(),
            )),
        },
    }
}

fn affine(cloud: &PointCloud) -> Result<FunctionFamily> {
    let n = cloud.len();
    let mut basis = vec![vec![1.0; n]];
    for k in 0..cloud.dim() {
        basis.push((0..n).map(|x| cloud.point(x)[k]).collect());
    }
    // a cloud inside a proper affine subspace restricts Aff to a smaller span
    let rows = basis.len();
    let basis = independent_subset(basis, rows);
    FunctionFamily::assemble(FamilyKind::Affine, cloud.clone(), basis, NormKind::Sup, 1.0)
}

/// Exponent vectors of all monomials of total degree `<= degree`, ordered by
/// degree, then lexicographically descending in the leading variable.
pub fn monomial_exponents(vars: usize, degree: usize) -> Vec<Vec<usize>> {
    fn fill(vars: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == vars {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=total).rev() {
            prefix.push(e);
            fill(vars, total - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in 0..=degree {
        fill(vars, d, &mut Vec::with_capacity(vars), &mut out);
    }
    out
}

fn polynomial(cloud: &PointCloud, degree: usize) -> Result<FunctionFamily> {
    if degree < 1 {
        return Err(Error::InvalidInput("polynomial degree must be >= 1".into()));
    }
    let n = cloud.len();
    let dim = cloud.dim();
    // map each coordinate into [-1, 1]
    let scaled: Vec<Vec<f64>> = {
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for p in cloud.points() {
            for k in 0..dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        cloud
            .points()
            .iter()
            .map(|p| {
                (0..dim)
                    .map(|k| {
                        let w = hi[k] - lo[k];
                        if w > 0.0 {
                            2.0 * (p[k] - lo[k]) / w - 1.0
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let basis = monomial_exponents(dim, degree)
        .iter()
        .map(|exp| {
            (0..n)
                .map(|x| {
                    exp.iter()
                        .zip(&scaled[x])
                        .map(|(&e, &t)| t.powi(e as i32))
                        .product()
                })
                .collect()
        })
        .collect();
    FunctionFamily::assemble(
        FamilyKind::Polynomial { degree },
        cloud.clone(),
        basis,
        NormKind::Sup,
        1.0,
    )
}

fn lipschitz(cloud: &PointCloud, basepoint: usize, full: bool) -> Result<FunctionFamily> {
    cloud.check_index(basepoint)?;
    let n = cloud.len();
    let basis = if full {
        (0..n)
            .filter(|&i| i != basepoint)
            .map(|i| (0..n).map(|x| if x == i { 1.0 } else { 0.0 }).collect())
            .collect()
    } else {
        // d(·, p_i) − d(x0, p_i): 1-Lipschitz and zero at x0
        let candidates: Vec<Vec<f64>> = (0..n)
            .filter(|&i| i != basepoint)
            .chain(std::iter::once(basepoint))
            .map(|i| {
                let shift = cloud.distance(basepoint, i);
                (0..n).map(|x| cloud.distance(x, i) - shift).collect()
            })
            .collect();
        independent_subset(candidates, n - 1)
    };
    let diameter = cloud.diameter();
    FunctionFamily::assemble(
        FamilyKind::Lipschitz { basepoint, full },
        cloud.clone(),
        basis,
        NormKind::Lip { basepoint },
        diameter,
    )
}

/// Greedily keeps candidates that increase the rank, up to `limit` rows.
fn independent_subset(candidates: Vec<Vec<f64>>, limit: usize) -> Vec<Vec<f64>> {
    let mut kept = Vec::new();
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for cand in candidates {
        if kept.len() == limit {
            break;
        }
        let norm0 = dot(&cand, &cand).sqrt();
        if norm0 == 0.0 {
            continue;
        }
        let mut r = cand.clone();
        for _ in 0..2 {
            for q in &ortho {
                let proj = dot(&r, q);
                r.iter_mut().zip(q).for_each(|(v, qv)| *v -= proj * qv);
            }
        }
        let rn = dot(&r, &r).sqrt();
        if rn > RANK_TOL * norm0 {
            r.iter_mut().for_each(|v| *v /= rn);
            ortho.push(r);
            kept.push(cand);
        }
    }
    kept
}

/// Numerical rank by Gaussian elimination with partial pivoting.
pub fn matrix_rank(rows: &[Vec<f64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let m = a.len();
    let n = a[0].len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    let eps = RANK_TOL * scale;
    let mut rank = 0;
    for col in 0..n {
        if rank == m {
            break;
        }
        let (piv, val) = (rank..m)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if val <= eps {
            continue;
        }
        a.swap(rank, piv);
        for r in rank + 1..m {
            let f = a[r][col] / a[rank][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[rank][c];
                }
            }
        }
        rank += 1;
    }
    rank
}

fn harmonic(cloud: &PointCloud, grid: &GridSpec) -> Result<FunctionFamily> {
    grid.validate()?;
    if !grid.matches(cloud) {
        return Err(Error::InvalidInput(
            "cloud/grid mismatch: cloud must be exactly the grid nodes".into(),
        ));
    }
    let basis = harmonic_measures(grid)?;
    FunctionFamily::assemble(
        FamilyKind::Harmonic(grid.clone()),
        cloud.clone(),
        basis,
        NormKind::Sup,
        1.0,
    )
}

/// Discrete harmonic measures of the boundary nodes: for each boundary node
/// `b` (ascending index), the grid function equal to 1 at `b`, 0 on the rest
/// of the boundary, and satisfying the 5-point Laplace equation inside.
pub fn harmonic_measures(grid: &GridSpec) -> Result<Vec<Vec<f64>>> {
    let (w, h) = (grid.width, grid.height);
    let iw = w - 2;
    let ih = h - 2;
    let n_int = iw * ih;
    let interior_of = |i: usize, j: usize| (j - 1) * iw + (i - 1);

    let boundary = grid.boundary_indices();
    // right-hand side for each boundary node: +1 at interior neighbours
    let rhs_for = |b: usize| -> Vec<f64> {
        let mut r = vec![0.0; n_int];
        let (bi, bj) = (b % w, b / w);
        let nbrs = [
            (bi as isize - 1, bj as isize),
            (bi as isize + 1, bj as isize),
            (bi as isize, bj as isize - 1),
            (bi as isize, bj as isize + 1),
        ];
        for (i, j) in nbrs {
            if i >= 1 && j >= 1 && (i as usize) < w - 1 && (j as usize) < h - 1 {
                r[interior_of(i as usize, j as usize)] += 1.0;
            }
        }
        r
    };

    let solver: Box<dyn Fn(&[f64]) -> Result<Vec<f64>>> = if w.max(h) <= DIRECT_GRID_LIMIT {
        let chol = BandedCholesky::laplacian(iw, ih);
        Box::new(move |r: &[f64]| Ok(chol.solve(r)))
    } else {
        Box::new(move |r: &[f64]| sor_laplacian(iw, ih, r))
    };

    let mut basis = Vec::with_capacity(boundary.len());
    for &b in boundary.iter() {
        let r = rhs_for(b);
        let u = solver(&r)?;
        let residual = laplacian_residual(iw, ih, &u, &r);
        if residual > HARMONIC_RESIDUAL {
            return Err(Error::SolverNonConvergence { residual });
        }
        let mut values = vec![0.0; grid.len()];
        values[b] = 1.0;
        for j in 1..h - 1 {
            for i in 1..w - 1 {
                values[grid.index(i, j)] = u[interior_of(i, j)];
            }
        }
        basis.push(values);
    }
    Ok(basis)
}

/// `max |A u − r|` for the interior operator `A = 4I − adjacency`.
fn laplacian_residual(iw: usize, ih: usize, u: &[f64], r: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..ih {
        for i in 0..iw {
            let k = j * iw + i;
            let mut au = 4.0 * u[k];
            if i > 0 {
                au -= u[k - 1];
            }
            if i + 1 < iw {
                au -= u[k + 1];
            }
            if j > 0 {
                au -= u[k - iw];
            }
            if j + 1 < ih {
                au -= u[k + iw];
            }
            worst = worst.max((au - r[k]).abs());
        }
    }
    worst
}

/// Cholesky factor of a symmetric positive definite banded matrix, stored
/// as `band[k][t] = L[k][k − t]` for `t <= bw`.
struct BandedCholesky {
    n: usize,
    bw: usize,
    band: Vec<Vec<f64>>,
}

impl BandedCholesky {
    /// Factorizes the interior 5-point operator of an `iw × ih` block.
    fn laplacian(iw: usize, ih: usize) -> Self {
        let n = iw * ih;
        let bw = iw;
        let mut band: Vec<Vec<f64>> = vec![vec![0.0; bw + 1]; n];
        for k in 0..n {
            band[k][0] = 4.0;
            if k % iw != 0 {
                band[k][1] = -1.0;
            }
            if k >= iw {
                band[k][bw] = -1.0;
            }
        }
        for k in 0..n {
            let lo = k.saturating_sub(bw);
            for c in lo..=k {
                // entry L[k][c]
                let mut s = band[k][k - c];
                let start = lo.max(c.saturating_sub(bw));
                for p in start..c {
                    s -= band[k][k - p] * band[c][c - p];
                }
                if c == k {
                    band[k][0] = s.sqrt();
                } else {
                    band[k][k - c] = s / band[c][0];
                }
            }
        }
        Self { n, bw, band }
    }

    fn solve(&self, r: &[f64]) -> Vec<f64> {
        let mut y = r.to_vec();
        for k in 0..self.n {
            let lo = k.saturating_sub(self.bw);
            let mut s = y[k];
            for p in lo..k {
                s -= self.band[k][k - p] * y[p];
            }
            y[k] = s / self.band[k][0];
        }
        for k in (0..self.n).rev() {
            let hi = (k + self.bw).min(self.n - 1);
            let mut s = y[k];
            for p in k + 1..=hi {
                s -= self.band[p][p - k] * y[p];
            }
            y[k] = s / self.band[k][0];
        }
        y
    }
}

/// Successive over-relaxation (Gauss–Seidel with the optimal factor for the
/// model problem) for large grids.
fn sor_laplacian(iw: usize, ih: usize, r: &[f64]) -> Result<Vec<f64>> {
    let n = iw * ih;
    let mut u = vec![0.0; n];
    let side = iw.max(ih) as f64 + 1.0;
    let omega = 2.0 / (1.0 + (std::f64::consts::PI / side).sin());
    let max_sweeps = 200_000;
    for sweep in 0..max_sweeps {
        for j in 0..ih {
            for i in 0..iw {
                let k = j * iw + i;
                let mut s = r[k];
                if i > 0 {
                    s += u[k - 1];
                }
                if i + 1 < iw {
                    s += u[k + 1];
                }
                if j > 0 {
                    s += u[k - iw];
                }
                if j + 1 < ih {
                    s += u[k + iw];
                }
                u[k] += omega * (s / 4.0 - u[k]);
            }
        }
        if sweep % 16 == 15 && laplacian_residual(iw, ih, &u, r) <= HARMONIC_RESIDUAL * 0.1 {
            return Ok(u);
        }
    }
    Err(Error::SolverNonConvergence {
        residual: laplacian_residual(iw, ih, &u, r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_with_center() -> PointCloud {
        PointCloud::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![0.5, 0.5],
        ])
        .unwrap()
    }

    #[test]
    fn affine_basis_rows() {
        let cloud = square_with_center();
        let fam = build_family(&FamilySpec::Affine, &cloud).unwrap();
        assert_eq!(fam.dim(), 3);
        assert_eq!(fam.basis()[0], vec![1.0; 5]);
        assert_eq!(fam.basis()[1], vec![0.0, 1.0, 0.0, 1.0, 0.5]);
        assert_eq!(fam.basis()[2], vec![0.0, 0.0, 1.0, 1.0, 0.5]);
        assert_eq!(fam.alpha_bound(), 1.0);
    }

    #[test]
    fn affine_on_a_flat_cloud_drops_dependent_coordinates() {
        let line = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.0]]).unwrap();
        let fam = build_family(&FamilySpec::Affine, &line).unwrap();
        assert_eq!(fam.dim(), 2);
        assert_eq!(fam.basis()[1], vec![0.0, 1.0, 0.5]);
    }

    #[test]
    fn quadratic_monomials() {
        assert_eq!(
            monomial_exponents(2, 2),
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
        let cloud = PointCloud::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![0.5, 0.2],
            vec![0.3, 0.8],
            vec![0.9, 0.4],
        ])
        .unwrap();
        let fam = build_family(&FamilySpec::Polynomial { degree: 2 }, &cloud).unwrap();
        assert_eq!(fam.dim(), 6);
        // shift-scaled coordinates: (1,1) maps to (1,1), (0,0) to (-1,-1)
        assert_eq!(fam.feature(0), &[1.0, -1.0, -1.0, 1.0, 1.0, 1.0]);
        assert_eq!(fam.feature(3), &[1.0; 6]);
    }

    #[test]
    fn degenerate_polynomial_is_rank_deficient() {
        // collinear 2D cloud: x^2, xy, y^2 become dependent
        let cloud = PointCloud::new((0..6).map(|k| vec![k as f64, 2.0 * k as f64]).collect())
            .unwrap();
        assert!(matches!(
            build_family(&FamilySpec::Polynomial { degree: 2 }, &cloud),
            Err(Error::RankDeficient { .. })
        ));
        assert!(build_family(&FamilySpec::Polynomial { degree: 0 }, &cloud).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let cloud = square_with_center();
        let fam = build_family(&FamilySpec::Affine, &cloud).unwrap();
        assert_eq!(fam.evaluate(&[0.0; 3]).unwrap().values(), &[0.0; 5]);
        assert_eq!(fam.evaluate(&[5.0, 0.0, 0.0]).unwrap().values(), &[5.0; 5]);
        for j in 0..3 {
            let mut c = vec![0.0; 3];
            c[j] = 1.0;
            assert_eq!(fam.evaluate(&c).unwrap().values(), fam.basis()[j].as_slice());
        }
        assert!(fam.evaluate(&[1.0]).is_err());
    }

    #[test]
    fn norms() {
        let corners = PointCloud::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ])
        .unwrap();
        let fam = build_family(&FamilySpec::Affine, &corners).unwrap();
        assert_eq!(fam.family_norm(&[0.0, 1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(fam.family_norm(&[0.0; 3]).unwrap(), 0.0);

        let lip = build_family(
            &FamilySpec::Lipschitz {
                basepoint: 0,
                full: false,
            },
            &corners,
        )
        .unwrap();
        for j in 0..lip.dim() {
            let mut c = vec![0.0; lip.dim()];
            c[j] = 1.0;
            assert!(lip.family_norm(&c).unwrap() <= 2.0 + 1e-12);
        }
        assert!((lip.alpha_bound() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn lipschitz_vanishes_at_basepoint() {
        let cloud = PointCloud::new(vec![vec![0.0], vec![1.0], vec![2.0], vec![3.5]]).unwrap();
        for full in [false, true] {
            for bp in 0..4 {
                let fam = build_family(&FamilySpec::Lipschitz { basepoint: bp, full }, &cloud)
                    .unwrap();
                assert_eq!(fam.dim(), 3);
                assert!(fam.feature(bp).iter().all(|&v| v == 0.0));
                assert!(fam.separates_points(&cloud.full_domain()).unwrap().is_none());
            }
        }
    }

    #[test]
    fn separation() {
        let cloud = square_with_center();
        let fam = build_family(&FamilySpec::Affine, &cloud).unwrap();
        assert_eq!(fam.separates_points(&cloud.full_domain()).unwrap(), None);
        let two = PointCloud::new(vec![vec![0.0], vec![1.0]]).unwrap();
        let constant = FunctionFamily::custom(two, vec![vec![1.0, 1.0]], NormKind::Sup, 1.0)
            .unwrap();
        assert_eq!(
            constant.separates_points(&IndexSet::full(2)).unwrap(),
            Some((0, 1))
        );
    }

    #[test]
    fn harmonic_three_by_three() {
        let grid = GridSpec::new(3, 3, 1.0).unwrap();
        let cloud = grid.cloud().unwrap();
        let fam = build_family(
            &FamilySpec::Harmonic {
                grid: Some(grid.clone()),
            },
            &cloud,
        )
        .unwrap();
        assert_eq!(fam.dim(), 8);
        let center = grid.index(1, 1);
        // center value = average of its 4 neighbours, so each edge midpoint
        // carries measure 1/4 and each corner 0
        let boundary = grid.boundary_indices();
        let mut total = 0.0;
        for (j, &b) in boundary.iter().enumerate() {
            let v = fam.feature(center)[j];
            let (bi, bj) = (b % 3, b / 3);
            let corner = (bi == 0 || bi == 2) && (bj == 0 || bj == 2);
            let expected = if corner { 0.0 } else { 0.25 };
            assert!((v - expected).abs() < 1e-14, "node {b}: {v}");
            total += v;
        }
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn harmonic_maximum_principle() {
        let grid = GridSpec::new(7, 5, 0.5).unwrap();
        let cloud = grid.cloud().unwrap();
        let fam = build_family(
            &FamilySpec::Harmonic {
                grid: Some(grid.clone()),
            },
            &cloud,
        )
        .unwrap();
        let interior = grid.interior_indices();
        for row in fam.basis() {
            for &k in interior.iter() {
                assert!(row[k] < 1.0 && row[k] >= 0.0);
            }
        }
        // measures at an interior node sum to 1 (constants are harmonic)
        for &k in interior.iter() {
            let s: f64 = fam.feature(k).iter().sum();
            assert!((s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn harmonic_direct_and_iterative_agree() {
        let (iw, ih) = (6, 4);
        let chol = BandedCholesky::laplacian(iw, ih);
        let r: Vec<f64> = (0..iw * ih).map(|k| ((k * 7) % 5) as f64).collect();
        let a = chol.solve(&r);
        let b = sor_laplacian(iw, ih, &r).unwrap();
        assert!(laplacian_residual(iw, ih, &a, &r) < 1e-12);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn harmonic_grid_mismatch() {
        let grid = GridSpec::new(3, 3, 1.0).unwrap();
        let cloud = square_with_center();
        assert!(build_family(&FamilySpec::Harmonic { grid: Some(grid) }, &cloud).is_err());
        assert!(build_family(&FamilySpec::Harmonic { grid: None }, &cloud).is_err());
        assert!(GridSpec::new(2, 5, 1.0).is_err());
    }
}
