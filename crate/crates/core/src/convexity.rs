//! Betweenness, Φ-convexity of fields, extremal and exposed points, and
//! Φ-convex hulls.
//!
//! Every strict inequality "∃ φ ∈ Φ with φ(a) > …" is decided as an LP with
//! margin 1: Φ is a linear space, so any strict witness rescales to one
//! with unit margin.

use serde::{Deserialize, Serialize};

use crate::cloud::{segment_member, IndexSet, PointCloud, ScalarField, Tolerances};
use crate::error::{Error, Result, Triple};
use crate::families::{dot, CoefficientVector, FunctionFamily};
use crate::linprog::{feasible, Constraint};
use crate::par;

/// Below this squared sine of the angle between the two difference vectors
/// the closed-form betweenness test defers to the LP.
const ANTIPARALLEL_SIN2: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Betweenness {
    Between,
    NotBetween,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BetweennessCertificate {
    pub result: Betweenness,
    /// Present iff `result` is `NotBetween`: φ with φ(x) ≤ φ(a), φ(y) ≤ φ(a)
    /// and (φ(a) − φ(x)) + (φ(a) − φ(y)) = 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CoefficientVector>,
}

impl BetweennessCertificate {
    fn between() -> Self {
        Self {
            result: Betweenness::Between,
            witness: None,
        }
    }

    fn not_between(c: CoefficientVector) -> Self {
        Self {
            result: Betweenness::NotBetween,
            witness: Some(c),
        }
    }

    pub fn is_between(&self) -> bool {
        self.result == Betweenness::Between
    }

    /// Re-evaluates the witness. `Between` answers carry nothing to replay.
    pub fn replay(
        &self,
        (a, x, y): Triple,
        family: &FunctionFamily,
        tol: &Tolerances,
    ) -> bool {
        match (&self.result, &self.witness) {
            (Betweenness::Between, None) => true,
            (Betweenness::NotBetween, Some(c)) => {
                if c.len() != family.dim() {
                    return false;
                }
                let (pa, px, py) = (
                    family.value_at(c, a),
                    family.value_at(c, x),
                    family.value_at(c, y),
                );
                px <= pa + tol.lp_feas
                    && py <= pa + tol.lp_feas
                    && (pa - px) + (pa - py) >= 1.0 - tol.lp_feas
            }
            _ => false,
        }
    }
}

/// φ exposing `point`: φ(point) ≥ φ(q) + margin for every other q of the
/// certified set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExposureCertificate {
    pub point: usize,
    pub coefficients: CoefficientVector,
    pub margin: f64,
}

impl ExposureCertificate {
    pub fn replay(&self, domain: &IndexSet, family: &FunctionFamily, tol: &Tolerances) -> bool {
        if self.coefficients.len() != family.dim() || !domain.contains(self.point) {
            return false;
        }
        let top = family.value_at(&self.coefficients, self.point);
        self.margin >= 1.0 - tol.lp_feas
            && domain
                .iter()
                .filter(|&&q| q != self.point)
                .all(|&q| top - family.value_at(&self.coefficients, q) >= self.margin - tol.lp_feas)
    }
}

fn check_triple(family: &FunctionFamily, t: Triple) -> Result<()> {
    let cloud = family.cloud();
    cloud.check_index(t.0)?;
    cloud.check_index(t.1)?;
    cloud.check_index(t.2)
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(p, q)| p - q).collect()
}

/// Decides whether `a` is Φ-between `x` and `y` by LP: `a` is not between
/// iff `{u·c ≥ 0, v·c ≥ 0, (u+v)·c ≥ 1}` is feasible, where `u = g(a) − g(x)`
/// and `v = g(a) − g(y)` are differences of basis values.
pub fn is_between(
    a: usize,
    x: usize,
    y: usize,
    family: &FunctionFamily,
    tol: &Tolerances,
) -> Result<BetweennessCertificate> {
    check_triple(family, (a, x, y))?;
    let u = diff(family.feature(a), family.feature(x));
    let v = diff(family.feature(a), family.feature(y));
    let uv: Vec<f64> = u.iter().zip(&v).map(|(p, q)| p + q).collect();
    let cons = [
        Constraint::ge(u.clone(), 0.0),
        Constraint::ge(v.clone(), 0.0),
        Constraint::ge(uv.clone(), 1.0),
    ];
    let res = feasible(family.dim(), &cons, tol)?;
    if !res.feasible {
        return Ok(BetweennessCertificate::between());
    }
    let mut c = res.witness.expect("feasible LP carries a witness");
    let total = dot(&uv, &c);
    if total > 0.0 {
        c.iter_mut().for_each(|v| *v /= total);
    }
    Ok(BetweennessCertificate::not_between(c))
}

/// Closed-form betweenness in a linear family.
///
/// With `U = g(a) − g(x)` and `V = g(a) − g(y)`, the set
/// `{(U·c, V·c)}` is a subspace of the plane; `a` fails to be between
/// exactly when that subspace meets the closed positive quadrant outside 0,
/// i.e. unless `U = V = 0` or `U`, `V` are antiparallel. Near-antiparallel
/// pairs are handed to the LP.
pub(crate) fn between_fast(
    a: usize,
    x: usize,
    y: usize,
    family: &FunctionFamily,
    tol: &Tolerances,
) -> Result<BetweennessCertificate> {
    let ga = family.feature(a);
    let u = diff(ga, family.feature(x));
    let v = diff(ga, family.feature(y));
    let uu = dot(&u, &u);
    let vv = dot(&v, &v);
    let uv = dot(&u, &v);
    if uu == 0.0 && vv == 0.0 {
        return Ok(BetweennessCertificate::between());
    }
    if uv >= 0.0 {
        // c = U + V gives U·c, V·c ≥ 0 with positive sum
        let sum = uu + 2.0 * uv + vv;
        let c = u.iter().zip(&v).map(|(p, q)| (p + q) / sum).collect();
        return Ok(BetweennessCertificate::not_between(c));
    }
    let det = uu * vv - uv * uv;
    if det > ANTIPARALLEL_SIN2 * uu * vv {
        // c = αU + βV with U·c = V·c = 1/2
        let alpha = 0.5 * (vv - uv) / det;
        let beta = 0.5 * (uu - uv) / det;
        let c = u
            .iter()
            .zip(&v)
            .map(|(p, q)| alpha * p + beta * q)
            .collect();
        return Ok(BetweennessCertificate::not_between(c));
    }
    is_between(a, x, y, family, tol)
}

/// Result of a brute-force convexity scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConvexityCheck {
    pub holds: bool,
    /// First violating triple `(a, x, y)` in ascending order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Triple>,
}

impl ConvexityCheck {
    fn from_violation(violation: Option<Triple>) -> Self {
        Self {
            holds: violation.is_none(),
            violation,
        }
    }
}

/// Checks that `f` never strictly dominates both flanking points at a
/// Φ-between point, over all ordered triples of `domain`.
pub fn is_phi_convex(
    f: &ScalarField,
    domain: &IndexSet,
    family: &FunctionFamily,
    tol: &Tolerances,
) -> Result<ConvexityCheck> {
    domain.check_within(family.cloud().len())?;
    if f.len() != family.cloud().len() {
        return Err(Error::DimensionMismatch {
            expected: family.cloud().len(),
            found: f.len(),
        });
    }
    if !f.finite_on(domain) {
        return Err(Error::InfiniteValues);
    }
    let tie = tol.argmax_tie;
    let idx = domain.as_slice();
    let found = par::find_first(idx, |a| {
        let fa = f[a];
        for (i, &x) in idx.iter().enumerate() {
            if f[x] > fa + tie {
                continue;
            }
            for &y in &idx[i..] {
                if f[y] > fa + tie {
                    continue;
                }
                if (f[x] - fa).abs().max((f[y] - fa).abs()) <= tie {
                    continue;
                }
                match between_fast(a, x, y, family, tol) {
                    Ok(c) if c.is_between() => return Some(Ok((a, x, y))),
                    Ok(_) => {}
                    Err(e) => return Some(Err(e)),
                }
            }
        }
        None
    });
    Ok(ConvexityCheck::from_violation(found.transpose()?))
}

/// A pair `(x, y) ≠ (a, a)` of `domain` with `a` Φ-between them, if any.
pub fn extremality_obstruction(
    a: usize,
    domain: &IndexSet,
    family: &FunctionFamily,
    tol: &Tolerances,
) -> Result<Option<(usize, usize)>> {
    domain.check_within(family.cloud().len())?;
    let idx = domain.as_slice();
    if family.is_affine() {
        // affine fast path: classical segment membership, endpoints excluded
        let cloud = family.cloud();
        for (i, &x) in idx.iter().enumerate() {
            if x == a {
                continue;
            }
            for &y in &idx[i + 1..] {
                if y != a && segment_member(cloud.point(a), cloud.point(x), cloud.point(y), tol)? {
                    return Ok(Some((x, y)));
                }
            }
        }
        return Ok(None);
    }
    for (i, &x) in idx.iter().enumerate() {
        for &y in &idx[i..] {
            if x == a && y == a {
                continue;
            }
            if between_fast(a, x, y, family, tol)?.is_between() {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// Points of `domain` that are not Φ-between any pair of `domain` other than
/// themselves. May be empty only for degenerate (non-separating) families.
pub fn phi_extremal_points(
    domain: &IndexSet,
    family: &FunctionFamily,
    tol: &Tolerances,
) -> Result<IndexSet> {
    if domain.is_empty() {
        return Err(Error::EmptyDomain);
    }
    domain.check_within(family.cloud().len())?;
    let flags = par::map(domain.as_slice(), |a| {
        extremality_obstruction(a, domain, family, tol).map(|o| o.is_none())
    });
    let mut out = Vec::new();
    for (&a, flag) in domain.iter().zip(flags) {
        if flag? {
            out.push(a);
        }
    }
    Ok(out.into())
}

/// Solves for φ with `φ(a) ≥ φ(q) + 1` for all `q ∈ others`, canonically
/// rescaled so the smallest slack is exactly the reported margin.
fn strict_max_certificate(
    a: usize,
    others: &[usize],
    family: &FunctionFamily,
    tol: &Tolerances,
) -> Result<Option<ExposureCertificate>> {
    if others.is_empty() {
        // nothing to dominate: the zero functional exposes vacuously
        return Ok(Some(ExposureCertificate {
            point: a,
            coefficients: vec![0.0; family.dim()],
            margin: 1.0,
        }));
    }
    let ga = family.feature(a);
    let rows: Vec<Vec<f64>> = others.iter().map(|&q| diff(ga, family.feature(q))).collect();
    let cons: Vec<Constraint> = rows.iter().map(|r| Constraint::ge(r.clone(), 1.0)).collect();
    let res = feasible(family.dim(), &cons, tol)?;
    if !res.feasible {
        return Ok(None);
    }
    let mut c = res.witness.expect("feasible LP carries a witness");
    let raw = rows.iter().map(|r| dot(r, &c)).fold(f64::INFINITY, f64::min);
    if raw <= 0.0 {
        return Ok(None);
    }
    c.iter_mut().for_each(|v| *v /= raw);
    let margin = rows.iter().map(|r| dot(r, &c)).fold(f64::INFINITY, f64::min);
    Ok(Some(ExposureCertificate {
        point: a,
        coefficients: c,
        margin,
    }))
}

/// Exposure certificate for `a` within `domain`, if `a` is Φ-exposed there.
pub fn exposing_certificate(
    a: usize,
    domain: &IndexSet,
    family: &FunctionFamily,
    tol: &Tolerances,
) -> Result<Option<ExposureCertificate>> {
    domain.check_within(family.cloud().len())?;
    if !domain.contains(a) {
        return Err(Error::InvalidInput(format!("point {a} is not in the domain")));
    }
    let others = domain.without(a);
    strict_max_certificate(a, others.as_slice(), family, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExposedPoints {
    pub certificates: Vec<ExposureCertificate>,
    /// Set when the family fails to separate this pair of domain points; the
    /// result may then legitimately be empty.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_separating: Option<(usize, usize)>,
}

impl ExposedPoints {
    pub fn points(&self) -> IndexSet {
        self.certificates.iter().map(|c| c.point).collect()
    }
}

/// All Φ-exposed points of `domain`, each with its certifying functional.
pub fn phi_exposed_points(
    domain: &IndexSet,
    family: &FunctionFamily,
    tol: &Tolerances,
) -> Result<ExposedPoints> {
    if domain.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let non_separating = family.separates_points(domain)?;
    let found = par::map(domain.as_slice(), |a| {
        exposing_certificate(a, domain, family, tol)
    });
    let mut certificates = Vec::new();
    for cert in found {
        if let Some(c) = cert? {
            certificates.push(c);
        }
    }
    if certificates.is_empty() && non_separating.is_none() {
        return Err(Error::ReplayFailed(
            "separating family produced no exposed point".into(),
        ));
    }
    Ok(ExposedPoints {
        certificates,
        non_separating,
    })
}

/// Lowest-index exposed point of `domain`, if any.
pub fn first_exposed_point(
    domain: &IndexSet,
    family: &FunctionFamily,
    tol: &Tolerances,
) -> Result<Option<ExposureCertificate>> {
    for &a in domain.iter() {
        if let Some(c) = exposing_certificate(a, domain, family, tol)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Points of `ambient` that no φ ∈ Φ lifts strictly above its maximum on `set`.
pub fn phi_convex_hull(
    set: &IndexSet,
    ambient: &IndexSet,
    family: &FunctionFamily,
    tol: &Tolerances,
) -> Result<IndexSet> {
    if set.is_empty() {
        return Err(Error::EmptyDomain);
    }
    ambient.check_within(family.cloud().len())?;
    if !set.is_subset(ambient) {
        return Err(Error::InvalidInput("hull generators must lie in the ambient set".into()));
    }
    let inside = par::map(ambient.as_slice(), |x| {
        if set.contains(x) {
            return Ok(true);
        }
        strict_max_certificate(x, set.as_slice(), family, tol).map(|c| c.is_none())
    });
    let mut out = Vec::new();
    for (&x, flag) in ambient.iter().zip(inside) {
        if flag? {
            out.push(x);
        }
    }
    Ok(out.into())
}

/// Checks `f(a) < max(f(y), f(z))` whenever `a` lies strictly inside the
/// segment `[y, z]` of two other cloud points.
pub fn is_strictly_quasiconvex(
    f: &ScalarField,
    cloud: &PointCloud,
    tol: &Tolerances,
) -> Result<ConvexityCheck> {
    if f.len() != cloud.len() {
        return Err(Error::DimensionMismatch {
            expected: cloud.len(),
            found: f.len(),
        });
    }
    if !f.is_finite() {
        return Err(Error::InfiniteValues);
    }
    let n = cloud.len();
    for a in 0..n {
        for y in 0..n {
            for z in y + 1..n {
                if a == y || a == z {
                    continue;
                }
                if segment_member(cloud.point(a), cloud.point(y), cloud.point(z), tol)?
                    && f[a] >= f[y].max(f[z]) - tol.argmax_tie
                {
                    return Ok(ConvexityCheck::from_violation(Some((a, y, z))));
                }
            }
        }
    }
    Ok(ConvexityCheck::from_violation(None))
}
