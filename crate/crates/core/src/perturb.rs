//! Small perturbations from Φ that leave a field with a unique maximizer,
//! the strong-maximum predicate behind the open sets `O_n`, and a Monte
//! Carlo proxy for how common unique maximizers are near a given field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cloud::{argmax_with_tie, rho_inf_distance, sup_budget, IndexSet, PointCloud, ScalarField, Tolerances};
use crate::convexity::{first_exposed_point, is_phi_convex, phi_extremal_points};
use crate::error::{Error, Result};
use crate::families::{CoefficientVector, FunctionFamily};
use crate::par;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PerturbationResult {
    pub coefficients: CoefficientVector,
    /// `ρ∞(f + φ, f)`.
    pub rho_distance: f64,
    pub unique_point: usize,
    /// `(f + φ)(unique_point)` minus the runner-up value on the domain.
    pub gap: f64,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::BadEpsilon(epsilon))
    }
}

/// Lowest-index maximizer of `g` on `domain` and its lead over the runner-up
/// (`+∞` on a one-point domain).
pub fn leader(g: &ScalarField, domain: &IndexSet) -> (usize, f64) {
    let mut best = usize::MAX;
    let mut best_val = f64::NEG_INFINITY;
    for &i in domain.iter() {
        if g[i] > best_val {
            best = i;
            best_val = g[i];
        }
    }
    let runner_up = domain
        .iter()
        .filter(|&&i| i != best)
        .map(|&i| g[i])
        .fold(f64::NEG_INFINITY, f64::max);
    (best, best_val - runner_up)
}

/// `Some(point)` when `g` has a single maximizer on `domain` leading by at
/// least `uniqueGap`.
pub fn unique_maximizer(g: &ScalarField, domain: &IndexSet, tol: &Tolerances) -> Option<usize> {
    let (best, gap) = leader(g, domain);
    (gap >= tol.unique_gap && gap > tol.argmax_tie).then_some(best)
}

/// Builds φ ∈ Φ with `ρ∞(f + φ, f) < epsilon` such that `f + φ` has a
/// unique maximizer on `domain`.
///
/// The maximizer is an exposed point `e` of the (tie-widened) argmax set
/// `M`, and φ is a scaled exposing functional `t·φ0` with
/// `t = min(budget / (2‖φ0‖∞), G / (2(osc + 1)))`, where `G` is the drop from
/// the maximum to the best point outside `M` and `osc` the spread of φ0
/// around `e`.
pub fn perturb_to_unique_max(
    f: &ScalarField,
    domain: &IndexSet,
    family: &FunctionFamily,
    epsilon: f64,
    tol: &Tolerances,
) -> Result<PerturbationResult> {
    check_epsilon(epsilon)?;
    let n = family.cloud().len();
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.len(),
        });
    }
    domain.check_within(n)?;
    if domain.len() < 2 {
        return Err(Error::InvalidInput(
            "perturbation needs a domain of at least two points".into(),
        ));
    }
    if !f.is_finite() {
        return Err(Error::InfiniteValues);
    }
    let tie = tol.argmax_tie.max(tol.unique_gap);
    let top = argmax_with_tie(f, domain, tie)?;
    if top.len() == 1 {
        let (point, gap) = leader(f, domain);
        return Ok(PerturbationResult {
            coefficients: vec![0.0; family.dim()],
            rho_distance: 0.0,
            unique_point: point,
            gap,
        });
    }
    if family.separates_points(&top)?.is_some() {
        return Err(Error::NoExposedPoint);
    }
    let cert = first_exposed_point(&top, family, tol)?.ok_or(Error::NoExposedPoint)?;
    let e = cert.point;
    let phi0 = family.evaluate(&cert.coefficients)?;

    let max = domain.iter().map(|&i| f[i]).fold(f64::NEG_INFINITY, f64::max);
    let drop = domain
        .iter()
        .filter(|&&i| !top.contains(i))
        .map(|&i| max - f[i])
        .fold(f64::INFINITY, f64::min);
    let osc = domain
        .iter()
        .map(|&i| (phi0[i] - phi0[e]).abs())
        .fold(0.0f64, f64::max);
    let norm0 = phi0.sup_norm();
    let t = (sup_budget(epsilon) / (2.0 * norm0)).min(drop / (2.0 * (osc + 1.0)));

    let coefficients: Vec<f64> = cert.coefficients.iter().map(|c| t * c).collect();
    let phi = family.evaluate(&coefficients)?;
    let g = f.add(&phi)?;
    let rho_distance = rho_inf_distance(&g, f)?;
    let (point, gap) = leader(&g, domain);
    if point != e || gap < tol.unique_gap || gap <= tol.argmax_tie {
        return Err(Error::DegenerateGap {
            gap,
            required: tol.unique_gap,
        });
    }
    if rho_distance >= epsilon {
        return Err(Error::ReplayFailed(format!(
            "perturbation distance {rho_distance} is not below {epsilon}"
        )));
    }
    Ok(PerturbationResult {
        coefficients,
        rho_distance,
        unique_point: e,
        gap,
    })
}

/// Minimization form: for an extended-valued `f` (e.g. the indicator
/// `δ_C`), finds φ with `‖φ‖∞ < epsilon / (1 − epsilon)` such that `f − φ`
/// has a unique minimizer. Points where `f = +∞` are never minimizers.
pub fn perturb_to_unique_min(
    f: &ScalarField,
    family: &FunctionFamily,
    epsilon: f64,
    tol: &Tolerances,
) -> Result<PerturbationResult> {
    let n = family.cloud().len();
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.len(),
        });
    }
    let finite: IndexSet = (0..n).filter(|&i| f[i].is_finite()).collect();
    // maximize −f on the effective domain; the +∞ entries never enter
    let neg = ScalarField::new(
        (0..n)
            .map(|i| if finite.contains(i) { -f[i] } else { 0.0 })
            .collect(),
    )?;
    let mut res = perturb_to_unique_max(&neg, &finite, family, epsilon, tol)?;
    let phi = family.evaluate(&res.coefficients)?;
    let t = phi.sup_norm();
    res.rho_distance = t / (1.0 + t);
    Ok(res)
}

/// A point `x` of `domain` with `f(x) > max{f(q) : d(q, x) ≥ 1/n} + argmaxTie`.
///
/// Candidates are tried argmax-first, then by ascending index; an empty far
/// set qualifies vacuously.
pub fn has_strong_max(
    f: &ScalarField,
    domain: &IndexSet,
    n: u32,
    cloud: &PointCloud,
    tol: &Tolerances,
) -> Result<Option<usize>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    if f.len() != cloud.len() {
        return Err(Error::DimensionMismatch {
            expected: cloud.len(),
            found: f.len(),
        });
    }
    let top = argmax_with_tie(f, domain, tol.argmax_tie)?;
    let radius = 1.0 / f64::from(n);
    let candidates = top
        .iter()
        .chain(domain.iter().filter(|&&i| !top.contains(i)));
    for &x in candidates {
        let far = domain
            .iter()
            .filter(|&&q| cloud.distance(q, x) >= radius)
            .map(|&q| f[q])
            .fold(f64::NEG_INFINITY, f64::max);
        if f[x] > far + tol.argmax_tie {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GenericityReport {
    pub samples: usize,
    pub unique_samples: usize,
    pub unique_fraction: f64,
    /// Among unique-argmax samples, the share whose maximizer is Φ-extremal;
    /// 0 when no sample had a unique maximizer.
    pub extremal_fraction: f64,
    pub seed: u64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SampleOutcome {
    pub sample: usize,
    pub unique: bool,
    /// Lowest-index maximizer of the perturbed field.
    pub argmax: usize,
    pub extremal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenericityRun {
    pub report: GenericityReport,
    pub outcomes: Vec<SampleOutcome>,
    /// Set when the convexity pre-check failed; fractions are still reported.
    pub not_convex: Option<crate::error::Triple>,
}

/// Coefficients of sample `k`: a uniform direction rescaled to a uniform
/// fraction of the largest family-norm radius whose sup-norm stays within
/// `epsilon / (1 − epsilon)`. Depends only on `(seed, k)`.
pub fn sample_perturbation(family: &FunctionFamily, epsilon: f64, seed: u64, k: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    let m = family.dim();
    let mut c: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
    let len = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    let fraction: f64 = rng.random();
    if len == 0.0 {
        return vec![0.0; m];
    }
    c.iter_mut().for_each(|v| *v /= len);
    let norm = family.norm_of_values(family.evaluate_unchecked(&c).values());
    if norm == 0.0 {
        return vec![0.0; m];
    }
    let radius = fraction * sup_budget(epsilon) / family.alpha_bound();
    c.iter_mut().for_each(|v| *v *= radius / norm);
    c
}

/// Fraction of random small perturbations `f + φ` with a unique maximizer,
/// and how many of those maximizers are Φ-extremal.
#[allow(clippy::too_many_arguments)]
pub fn genericity_estimate(
    f: &ScalarField,
    domain: &IndexSet,
    family: &FunctionFamily,
    epsilon: f64,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
    check_convexity: bool,
) -> Result<GenericityRun> {
    check_epsilon(epsilon)?;
    if samples == 0 {
        return Err(Error::InvalidInput("samples must be >= 1".into()));
    }
    let n = family.cloud().len();
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.len(),
        });
    }
    if domain.is_empty() {
        return Err(Error::EmptyDomain);
    }
    domain.check_within(n)?;
    if !f.finite_on(domain) {
        return Err(Error::InfiniteValues);
    }
    let not_convex = if check_convexity {
        is_phi_convex(f, domain, family, tol)?.violation
    } else {
        None
    };
    let extremal = phi_extremal_points(domain, family, tol)?;

    let indices: Vec<usize> = (0..samples).collect();
    let outcomes = par::map(&indices, |k| {
        let c = sample_perturbation(family, epsilon, seed, k as u64);
        let phi = family.evaluate_unchecked(&c);
        let values = (0..n).map(|i| f[i] + phi[i]).collect();
        let g = ScalarField::new(values).expect("finite perturbed field");
        let (argmax, _) = leader(&g, domain);
        let unique = unique_maximizer(&g, domain, tol).is_some();
        SampleOutcome {
            sample: k,
            unique,
            argmax,
            extremal: unique && extremal.contains(argmax),
        }
    });
    let unique_samples = outcomes.iter().filter(|o| o.unique).count();
    let extremal_samples = outcomes.iter().filter(|o| o.extremal).count();
    let report = GenericityReport {
        samples,
        unique_samples,
        unique_fraction: unique_samples as f64 / samples as f64,
        extremal_fraction: if unique_samples == 0 {
            0.0
        } else {
            extremal_samples as f64 / unique_samples as f64
        },
        seed,
        epsilon,
    };
    Ok(GenericityRun {
        report,
        outcomes,
        not_convex,
    })
}
