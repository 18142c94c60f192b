//! Maximum-principle witnesses: a Φ-extremal point where a Φ-convex field
//! (or every field of a finite family) attains its maximum.
//!
//! The search follows the chain ΦExp(M) ⊆ ΦExt(M) ⊆ ΦExt(K) for the common
//! argmax set M: expose a point of M, then confirm it is extremal in the
//! whole domain.

use serde::{Deserialize, Serialize};

use crate::cloud::{argmax_set, IndexSet, ScalarField, Tolerances};
use crate::convexity::{
    exposing_certificate, extremality_obstruction, is_phi_convex, ExposureCertificate,
};
use crate::error::{Error, Result};
use crate::families::FunctionFamily;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BauerWitness {
    pub point: usize,
    /// Maximum of the first checked function over the domain.
    pub max_value: f64,
    /// Maximum of each checked function, in input order.
    pub max_values: Vec<f64>,
    /// How the point was singled out inside the common argmax set; absent
    /// when that set is a single point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exposure: Option<ExposureCertificate>,
    pub functions_checked: usize,
}

impl BauerWitness {
    /// Independent check: `point` maximizes every function within
    /// `argmaxTie` and is Φ-extremal in `domain`.
    pub fn replay(
        &self,
        fs: &[ScalarField],
        domain: &IndexSet,
        family: &FunctionFamily,
        tol: &Tolerances,
    ) -> Result<bool> {
        if fs.len() != self.functions_checked
            || !domain.contains(self.point)
            || self.max_values.first() != Some(&self.max_value)
        {
            return Ok(false);
        }
        for f in fs {
            let max = domain.iter().map(|&i| f[i]).fold(f64::NEG_INFINITY, f64::max);
            if f[self.point] < max - tol.argmax_tie {
                return Ok(false);
            }
        }
        Ok(extremality_obstruction(self.point, domain, family, tol)?.is_none())
    }
}

fn check_fields(fs: &[ScalarField], domain: &IndexSet, family: &FunctionFamily) -> Result<()> {
    if fs.is_empty() {
        return Err(Error::InvalidInput("at least one function is required".into()));
    }
    if domain.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let n = family.cloud().len();
    domain.check_within(n)?;
    for f in fs {
        if f.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: f.len(),
            });
        }
        if !f.finite_on(domain) {
            return Err(Error::InfiniteValues);
        }
    }
    Ok(())
}

fn check_convexity(
    fs: &[ScalarField],
    domain: &IndexSet,
    family: &FunctionFamily,
    tol: &Tolerances,
) -> Result<()> {
    let single = fs.len() == 1;
    for (i, f) in fs.iter().enumerate() {
        let check = is_phi_convex(f, domain, family, tol)?;
        if let Some(triple) = check.violation {
            return Err(Error::NotPhiConvex {
                function: (!single).then_some(i),
                triple,
            });
        }
    }
    Ok(())
}

/// Extremal maximizer of a single field.
pub fn bauer_witness(
    f: &ScalarField,
    domain: &IndexSet,
    family: &FunctionFamily,
    tol: &Tolerances,
    check: bool,
) -> Result<BauerWitness> {
    common_extremal_maximizer(std::slice::from_ref(f), domain, family, tol, check)
}

/// A common Φ-extremal maximizer of all `fs`, when their argmax sets meet.
///
/// With `check` set, each field is first verified to be Φ-convex on the
/// domain. Among valid answers the lowest cloud index wins.
pub fn common_extremal_maximizer(
    fs: &[ScalarField],
    domain: &IndexSet,
    family: &FunctionFamily,
    tol: &Tolerances,
    check: bool,
) -> Result<BauerWitness> {
    check_fields(fs, domain, family)?;
    if check {
        check_convexity(fs, domain, family, tol)?;
    }
    let mut common = domain.clone();
    let mut max_values = Vec::with_capacity(fs.len());
    for f in fs {
        let m = argmax_set(f, domain, tol)?;
        max_values.push(f[m.first().expect("argmax is nonempty")]);
        common = common.intersection(&m);
    }
    if common.is_empty() {
        return Err(Error::EmptyIntersection);
    }

    let witness = |point, exposure| BauerWitness {
        point,
        max_value: max_values[0],
        max_values: max_values.clone(),
        exposure,
        functions_checked: fs.len(),
    };

    if common.len() == 1 {
        let e = common.first().unwrap();
        return if extremality_obstruction(e, domain, family, tol)?.is_none() {
            Ok(witness(e, None))
        } else {
            Err(Error::NoExtremalMaximizer)
        };
    }

    let mut any_exposed = false;
    for &a in common.iter() {
        if let Some(cert) = exposing_certificate(a, &common, family, tol)? {
            any_exposed = true;
            if extremality_obstruction(a, domain, family, tol)?.is_none() {
                return Ok(witness(a, Some(cert)));
            }
        }
    }
    if !any_exposed {
        return Err(Error::NoExposedPoint);
    }
    // only reachable for fields that are not Φ-convex: fall back to a raw scan
    for &a in common.iter() {
        if extremality_obstruction(a, domain, family, tol)?.is_none() {
            return Ok(witness(a, None));
        }
    }
    Err(Error::NoExtremalMaximizer)
}

/// Given fields that all attain their maximum at `x` (members of the cone
/// Ω_x), finds a Φ-extremal `e` where every one of them is also maximal.
pub fn omega_cone_witness(
    x: usize,
    fs: &[ScalarField],
    domain: &IndexSet,
    family: &FunctionFamily,
    tol: &Tolerances,
    check: bool,
) -> Result<BauerWitness> {
    check_fields(fs, domain, family)?;
    if !domain.contains(x) {
        return Err(Error::InvalidInput(format!("point {x} is not in the domain")));
    }
    for (i, f) in fs.iter().enumerate() {
        if !argmax_set(f, domain, tol)?.contains(x) {
            return Err(Error::PointNotMaximizer(i));
        }
    }
    common_extremal_maximizer(fs, domain, family, tol, check)
}
