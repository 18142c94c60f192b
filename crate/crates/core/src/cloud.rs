//! Finite metric spaces, scalar fields on them, and the elementary
//! operations every other module builds on: the bounded uniform metric
//! `ρ∞`, argmax extraction and the segment-membership oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum Euclidean separation between two cloud points.
pub const DEDUP_TOL: f64 = 1e-12;
/// Slack allowed in the triangle inequality of an explicit distance matrix.
pub const TRIANGLE_TOL: f64 = 1e-9;

/// Numerical tolerances shared by all decision procedures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct Tolerances {
    pub lp_feas: f64,
    pub argmax_tie: f64,
    pub unique_gap: f64,
    pub geom_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            lp_feas: 1e-9,
            argmax_tie: 1e-9,
            unique_gap: 1e-9,
            geom_tol: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lpFeas", self.lp_feas),
            ("argmaxTie", self.argmax_tie),
            ("uniqueGap", self.unique_gap),
            ("geomTol", self.geom_tol),
        ] {
            if !(v > 0.0 && v < 1e-3) {
                return Err(Error::InvalidInput(format!(
                    "tolerance {name} must lie in (0, 1e-3), got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    Euclidean,
    /// Row-major symmetric distance matrix.
    Explicit(Vec<Vec<f64>>),
}

/// A finite metric space: points in Euclidean `dim`-space and a distance.
///
/// Indices `0..len()` identify points everywhere downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    points: Vec<Vec<f64>>,
    metric: Metric,
}

impl PointCloud {
    /// Builds a Euclidean cloud.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_metric(points, Metric::Euclidean)
    }

    pub fn with_metric(points: Vec<Vec<f64>>, metric: Metric) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a point cloud needs at least 2 points, got {}",
                points.len()
            )));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidInput("points must have dimension >= 1".into()));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("point coordinates must be finite".into()));
            }
        }
        for i in 0..points.len() {
            for j in 0..i {
                if euclidean(&points[i], &points[j]) <= DEDUP_TOL {
                    return Err(Error::InvalidInput(format!(
                        "points {j} and {i} coincide"
                    )));
                }
            }
        }
        if let Metric::Explicit(d) = &metric {
            validate_distance_matrix(d, points.len())?;
        }
        Ok(Self {
            dim,
            points,
            metric,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match &self.metric {
            Metric::Euclidean => euclidean(&self.points[i], &self.points[j]),
            Metric::Explicit(d) => d[i][j],
        }
    }

    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut diam = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                diam = diam.max(self.distance(i, j));
            }
        }
        diam
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        }
    }

    pub fn full_domain(&self) -> IndexSet {
        IndexSet::full(self.len())
    }
}

fn validate_distance_matrix(d: &[Vec<f64>], n: usize) -> Result<()> {
    if d.len() != n || d.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput(format!(
            "distance matrix must be {n}x{n}"
        )));
    }
    for i in 0..n {
        if d[i][i] != 0.0 {
            return Err(Error::InvalidInput(format!(
                "distance matrix diagonal entry {i} is nonzero"
            )));
        }
        for j in 0..n {
            let v = d[i][j];
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "distance ({i},{j}) must be finite and nonnegative"
                )));
            }
            if v != d[j][i] {
                return Err(Error::InvalidInput(format!(
                    "distance matrix is not symmetric at ({i},{j})"
                )));
            }
            if i != j && v == 0.0 {
                return Err(Error::InvalidInput(format!(
                    "distinct points {i} and {j} have zero distance"
                )));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if d[i][k] > d[i][j] + d[j][k] + TRIANGLE_TOL {
                    return Err(Error::InvalidInput(format!(
                        "triangle inequality fails for ({i},{j},{k})"
                    )));
                }
            }
        }
    }
    Ok(())
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// One value per cloud point. `+∞` entries are only legal when the field
/// was built with [`ScalarField::with_infinity`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    values: Vec<f64>,
    allows_infinity: bool,
}

impl ScalarField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InfiniteValues);
        }
        Self::checked(values, false)
    }

    /// Extended-valued field, e.g. the indicator `δ_C` (0 on `C`, `+∞` off it).
    pub fn with_infinity(values: Vec<f64>) -> Result<Self> {
        Self::checked(values, true)
    }

    fn checked(values: Vec<f64>, allows_infinity: bool) -> Result<Self> {
        if values.iter().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) {
            return Err(Error::InvalidInput("field values must not be NaN or -inf".into()));
        }
        if !values.iter().any(|v| v.is_finite()) {
            return Err(Error::InvalidInput("field needs at least one finite value".into()));
        }
        Ok(Self {
            values,
            allows_infinity,
        })
    }

    /// Indicator of `set` in minimization form: 0 on the set, `+∞` elsewhere.
    pub fn indicator(len: usize, set: &IndexSet) -> Result<Self> {
        let mut values = vec![f64::INFINITY; len];
        for &i in set.iter() {
            if i >= len {
                return Err(Error::IndexOutOfRange { index: i, len });
            }
            values[i] = 0.0;
        }
        Self::with_infinity(values)
    }

    pub fn constant(len: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; len])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn allows_infinity(&self) -> bool {
        self.allows_infinity
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn finite_on(&self, domain: &IndexSet) -> bool {
        domain.iter().all(|&i| self.values[i].is_finite())
    }

    /// Pointwise sum; both fields must be finite.
    pub fn add(&self, other: &ScalarField) -> Result<ScalarField> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        ScalarField::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

impl std::ops::Index<usize> for ScalarField {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Sorted set of distinct cloud indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<usize>")]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn full(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn singleton(i: usize) -> Self {
        Self(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        self.0.iter().copied().filter(|&i| other.contains(i)).collect()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn without(&self, i: usize) -> IndexSet {
        self.0.iter().copied().filter(|&j| j != i).collect()
    }

    /// Fails if any index is `>= len`.
    pub fn check_within(&self, len: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i >= len) {
            Some(&index) => Err(Error::IndexOutOfRange { index, len }),
            None => Ok(()),
        }
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }
}

impl From<Vec<usize>> for IndexSet {
    fn from(v: Vec<usize>) -> Self {
        v.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a IndexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// `ρ∞(f, g) = sup |f − g| / (1 + |f − g|)` over the cloud.
pub fn rho_inf_distance(f: &ScalarField, g: &ScalarField) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: f.len(),
            found: g.len(),
        });
    }
    if !f.is_finite() || !g.is_finite() {
        return Err(Error::InfiniteValues);
    }
    Ok(f.values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| {
            let t = (a - b).abs();
            t / (1.0 + t)
        })
        .fold(0.0, f64::max))
}

/// Largest sup-norm distance compatible with `ρ∞ ≤ eps`, i.e. `eps / (1 − eps)`.
pub fn sup_budget(eps: f64) -> f64 {
    eps / (1.0 - eps)
}

/// All indices of `domain` within `argmaxTie` of the maximum of `f` there.
pub fn argmax_set(f: &ScalarField, domain: &IndexSet, tol: &Tolerances) -> Result<IndexSet> {
    argmax_with_tie(f, domain, tol.argmax_tie)
}

pub(crate) fn argmax_with_tie(f: &ScalarField, domain: &IndexSet, tie: f64) -> Result<IndexSet> {
    if domain.is_empty() {
        return Err(Error::EmptyDomain);
    }
    domain.check_within(f.len())?;
    if !f.finite_on(domain) {
        return Err(Error::InfiniteValues);
    }
    let max = domain
        .iter()
        .map(|&i| f[i])
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(domain.iter().copied().filter(|&i| f[i] >= max - tie).collect())
}

/// Whether `a` lies within `geomTol` of the segment `[x, y]`.
pub fn segment_member(a: &[f64], x: &[f64], y: &[f64], tol: &Tolerances) -> Result<bool> {
    if x.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: x.len(),
        });
    }
    if y.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: y.len(),
        });
    }
    Ok(segment_distance(a, x, y) <= tol.geom_tol)
}

/// Euclidean distance from `a` to the segment `[x, y]`.
pub fn segment_distance(a: &[f64], x: &[f64], y: &[f64]) -> f64 {
    let seg_sq: f64 = x.iter().zip(y).map(|(p, q)| (q - p) * (q - p)).sum();
    let lambda = if seg_sq == 0.0 {
        0.0
    } else {
        let t: f64 = a
            .iter()
            .zip(x)
            .zip(y)
            .map(|((ai, xi), yi)| (ai - xi) * (yi - xi))
            .sum::<f64>()
            / seg_sq;
        t.clamp(0.0, 1.0)
    };
    a.iter()
        .zip(x)
        .zip(y)
        .map(|((ai, xi), yi)| {
            let proj = xi + lambda * (yi - xi);
            (ai - proj) * (ai - proj)
        })
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(v: &[f64]) -> ScalarField {
        ScalarField::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_duplicates_and_tiny_clouds() {
        assert!(PointCloud::new(vec![vec![0.0, 0.0]]).is_err());
        assert!(PointCloud::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).is_err());
        assert!(PointCloud::new(vec![vec![0.0, 0.0], vec![0.0]]).is_err());
        assert!(PointCloud::new(vec![vec![0.0], vec![1.0]]).is_ok());
    }

    #[test]
    fn explicit_metric_is_validated() {
        let pts = vec![vec![0.0], vec![1.0], vec![2.0]];
        let good = vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ];
        assert!(PointCloud::with_metric(pts.clone(), Metric::Explicit(good)).is_ok());
        let not_triangle = vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ];
        assert!(PointCloud::with_metric(pts.clone(), Metric::Explicit(not_triangle)).is_err());
        let asym = vec![
            vec![0.0, 1.0, 2.0],
            vec![1.5, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ];
        assert!(PointCloud::with_metric(pts, Metric::Explicit(asym)).is_err());
    }

    #[test]
    fn field_infinity_rules() {
        assert_eq!(
            ScalarField::new(vec![0.0, f64::INFINITY]),
            Err(Error::InfiniteValues)
        );
        assert!(ScalarField::with_infinity(vec![0.0, f64::INFINITY]).is_ok());
        assert!(ScalarField::with_infinity(vec![0.0, f64::NEG_INFINITY]).is_err());
        assert!(ScalarField::with_infinity(vec![f64::INFINITY; 2]).is_err());
        let ind = ScalarField::indicator(3, &IndexSet::from(vec![1])).unwrap();
        assert_eq!(ind.values(), &[f64::INFINITY, 0.0, f64::INFINITY]);
    }

    #[test]
    fn rho_examples() {
        let f = field(&[0.3, -1.0, 2.0]);
        assert_eq!(rho_inf_distance(&f, &f).unwrap(), 0.0);
        let g = field(&[1.3, 0.0, 1.0]);
        assert_eq!(rho_inf_distance(&f, &g).unwrap(), 0.5);
        // sup |f-g| = 1/3 gives (1/3)/(4/3) = 1/4
        let h = field(&[0.3 + 1.0 / 3.0, -1.0 - 0.1, 2.0]);
        let rho = rho_inf_distance(&f, &h).unwrap();
        assert!((rho - 0.25).abs() < 1e-15);
        assert!((sup_budget(0.25) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rho_errors() {
        let f = field(&[0.0, 1.0]);
        let g = field(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            rho_inf_distance(&f, &g),
            Err(Error::DimensionMismatch { .. })
        ));
        let inf = ScalarField::with_infinity(vec![0.0, f64::INFINITY]).unwrap();
        assert_eq!(rho_inf_distance(&f, &inf), Err(Error::InfiniteValues));
    }

    #[test]
    fn argmax_examples() {
        let tol = Tolerances::default();
        let f = field(&[0.0, 1.0, 2.0, 2.0]);
        assert_eq!(
            argmax_set(&f, &IndexSet::full(4), &tol).unwrap(),
            IndexSet::from(vec![2, 3])
        );
        let c = field(&[5.0; 4]);
        assert_eq!(argmax_set(&c, &IndexSet::full(4), &tol).unwrap(), IndexSet::full(4));
        let near = field(&[2.0, 2.0 - 1e-12, 0.0]);
        assert_eq!(
            argmax_set(&near, &IndexSet::full(3), &tol).unwrap(),
            IndexSet::from(vec![0, 1])
        );
        assert_eq!(argmax_set(&f, &IndexSet::empty(), &tol), Err(Error::EmptyDomain));
        assert_eq!(
            argmax_set(&f, &IndexSet::from(vec![0, 1]), &tol).unwrap(),
            IndexSet::singleton(1)
        );
    }

    #[test]
    fn segment_examples() {
        let tol = Tolerances::default();
        assert!(segment_member(&[0.5, 0.0], &[0.0, 0.0], &[1.0, 0.0], &tol).unwrap());
        assert!(!segment_member(&[0.5, 0.1], &[0.0, 0.0], &[1.0, 0.0], &tol).unwrap());
        assert!(segment_member(&[1.0, 2.0], &[1.0, 2.0], &[1.0, 2.0], &tol).unwrap());
        assert!(!segment_member(&[1.0, 2.1], &[1.0, 2.0], &[1.0, 2.0], &tol).unwrap());
        // beyond the endpoint, on the supporting line
        assert!(!segment_member(&[1.5, 0.0], &[0.0, 0.0], &[1.0, 0.0], &tol).unwrap());
        assert!(segment_member(&[0.5], &[0.0, 0.0], &[1.0, 0.0], &tol).is_err());
    }

    #[test]
    fn tolerance_bounds() {
        assert!(Tolerances::default().validate().is_ok());
        let bad = Tolerances {
            lp_feas: 0.0,
            ..Tolerances::default()
        };
        assert!(bad.validate().is_err());
        let big = Tolerances {
            geom_tol: 1e-2,
            ..Tolerances::default()
        };
        assert!(big.validate().is_err());
    }

    #[test]
    fn index_set_normalizes() {
        let s: IndexSet = vec![3, 1, 3, 2].into();
        assert_eq!(s.as_slice(), &[1, 2, 3]);
        assert!(s.contains(2) && !s.contains(0));
        assert!(s.check_within(3).is_err());
        assert_eq!(s.without(2).as_slice(), &[1, 3]);
    }
}
