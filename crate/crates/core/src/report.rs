//! Running a scenario and rendering the result.
//!
//! Every certificate is replayed against freshly built inputs before it is
//! placed in a report, so a report with status `ok` can be trusted on its
//! own. Serialization is deterministic: struct field order is fixed and all
//! floats are written with 17 significant digits.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::bauer::{common_extremal_maximizer, omega_cone_witness, BauerWitness};
use crate::cloud::{rho_inf_distance, IndexSet, PointCloud, ScalarField, Tolerances};
use crate::convexity::{
    is_between, is_phi_convex, phi_convex_hull, phi_exposed_points, phi_extremal_points,
    BetweennessCertificate, ConvexityCheck, ExposureCertificate,
};
use crate::error::{Error, Result, Triple};
use crate::families::{build_family, FamilySpec, FunctionFamily};
use crate::perturb::{
    genericity_estimate, has_strong_max, leader, perturb_to_unique_max, GenericityReport,
    PerturbationResult, SampleOutcome,
};
use crate::scenario::{ScenarioConfig, ScenarioError, Task};
use crate::segment_member;

pub const REPORT_VERSION: &str = "1";

pub const CSV_HEADER: &str = "sample,unique,argmax,extremal";

const GENERICITY_NOTE: &str = "finite-sample density proxy under a uniform norm-ball sampler; \
     makes no claim about Baire category";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "code", rename_all = "lowercase")]
pub enum Status {
    Ok,
    Warning {
        kind: String,
        detail: String,
    },
    Error {
        kind: String,
        detail: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        path: Option<String>,
    },
}

impl Status {
    pub fn is_error(&self) -> bool {
        matches!(self, Status::Error { .. })
    }

    fn from_error(e: &Error) -> Self {
        Status::Error {
            kind: e.kind().to_string(),
            detail: e.to_string(),
            path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all_fields = "camelCase", untagged)]
pub enum Payload {
    Between {
        certificate: BetweennessCertificate,
        #[serde(skip_serializing_if = "Option::is_none")]
        segment_member: Option<bool>,
    },
    Convexity {
        checks: Vec<ConvexityCheck>,
    },
    Extremal {
        points: IndexSet,
    },
    Exposed {
        points: IndexSet,
        certificates: Vec<ExposureCertificate>,
        #[serde(skip_serializing_if = "Option::is_none")]
        non_separating: Option<(usize, usize)>,
    },
    Hull {
        hull: IndexSet,
    },
    Witness {
        witness: BauerWitness,
    },
    Perturbation {
        perturbation: PerturbationResult,
        /// Strong-maximum point of `f + φ` at the smallest `n` with `1/n`
        /// below the distance from the unique point to its nearest neighbour.
        strong_max_point: Option<usize>,
    },
    StrongMax {
        n: u32,
        radius: f64,
        point: Option<usize>,
    },
    Genericity {
        report: GenericityReport,
        note: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub version: &'static str,
    pub task: Option<&'static str>,
    pub status: Status,
    pub payload: Option<Payload>,
    pub tolerance_record: Tolerances,
    pub scenario: Option<ScenarioConfig>,
}

/// A report plus the per-sample table of a genericity run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: Report,
    pub samples: Option<Vec<SampleOutcome>>,
}

impl RunOutput {
    /// CSV table of sample outcomes, if the task produced any.
    pub fn csv(&self) -> Option<String> {
        self.samples.as_ref().map(|rows| samples_csv(rows))
    }
}

pub fn samples_csv(rows: &[SampleOutcome]) -> String {
    let mut out = String::with_capacity(16 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.sample,
            u8::from(r.unique),
            r.argmax,
            u8::from(r.extremal)
        ));
    }
    out
}

/// Report for a document that never became a valid scenario.
pub fn rejection_report(err: &ScenarioError) -> Report {
    Report {
        version: REPORT_VERSION,
        task: None,
        status: Status::Error {
            kind: err.kind().to_string(),
            detail: err.to_string(),
            path: err.path().map(str::to_string),
        },
        payload: None,
        tolerance_record: Tolerances::default(),
        scenario: None,
    }
}

/// Applies command-line overrides: a replacement seed for genericity runs
/// and the full-indicator Lipschitz basis.
pub fn apply_overrides(
    cfg: &mut ScenarioConfig,
    seed: Option<u64>,
    lip_full: bool,
) -> Result<(), ScenarioError> {
    if let Some(s) = seed {
        if let Task::Genericity { seed, .. } = &mut cfg.task {
            *seed = s;
        }
    }
    if lip_full {
        match &mut cfg.family {
            FamilySpec::Lipschitz { full, .. } => *full = true,
            _ => {
                return Err(ScenarioError::Invalid {
                    path: "family".into(),
                    message: "--lip-full requires a lipschitz family".into(),
                })
            }
        }
    }
    Ok(())
}

struct Inputs {
    cloud: PointCloud,
    family: FunctionFamily,
    fields: Vec<ScalarField>,
    domain: IndexSet,
}

fn prepare(cfg: &ScenarioConfig) -> Result<Inputs> {
    let as_input = |e: ScenarioError| Error::InvalidInput(e.to_string());
    let cloud = cfg.cloud.build().map_err(as_input)?;
    let family = build_family(&cfg.resolved_family(), &cloud)?;
    let fields = cfg
        .functions
        .iter()
        .enumerate()
        .map(|(k, f)| f.field(&cloud, &format!("functions[{k}]")).map_err(as_input))
        .collect::<Result<Vec<_>>>()?;
    let domain = cfg.domain_for(&cloud);
    Ok(Inputs {
        cloud,
        family,
        fields,
        domain,
    })
}

fn replay_failed(what: &str) -> Error {
    Error::ReplayFailed(format!("{what} did not replay"))
}

fn ensure(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(replay_failed(what))
    }
}

fn check_witness(w: &BauerWitness, inp: &Inputs, tol: &Tolerances) -> Result<()> {
    ensure(w.replay(&inp.fields, &inp.domain, &inp.family, tol)?, "Bauer witness")?;
    if let Some(cert) = &w.exposure {
        let mut common = inp.domain.clone();
        for f in &inp.fields {
            common = common.intersection(&crate::argmax_set(f, &inp.domain, tol)?);
        }
        ensure(cert.replay(&common, &inp.family, tol), "exposure certificate")?;
    }
    Ok(())
}

fn strong_max_after(p: &PerturbationResult, inp: &Inputs, tol: &Tolerances) -> Result<Option<usize>> {
    let nearest = inp
        .domain
        .iter()
        .filter(|&&q| q != p.unique_point)
        .map(|&q| inp.cloud.distance(q, p.unique_point))
        .fold(f64::INFINITY, f64::min);
    // smallest n with 1/n strictly below the nearest-neighbour distance
    let n = ((1.0 / nearest).floor() + 1.0).clamp(1.0, u32::MAX as f64) as u32;
    let g = inp.fields[0].add(&inp.family.evaluate(&p.coefficients)?)?;
    has_strong_max(&g, &inp.domain, n, &inp.cloud, tol)
}

type Outcome = (Payload, Option<Status>, Option<Vec<SampleOutcome>>);

fn run_task(cfg: &ScenarioConfig, inp: &Inputs) -> Result<Outcome> {
    let tol = &cfg.tolerances;
    let fam = &inp.family;
    let dom = &inp.domain;
    let check = cfg.check_convexity;
    let plain = |p: Payload| Ok((p, None, None));
    match &cfg.task {
        Task::Between { a, x, y } => {
            let triple: Triple = (*a, *x, *y);
            let certificate = is_between(*a, *x, *y, fam, tol)?;
            ensure(certificate.replay(triple, fam, tol), "betweenness certificate")?;
            let segment_member = if fam.is_affine() {
                let c = &inp.cloud;
                Some(segment_member(c.point(*a), c.point(*x), c.point(*y), tol)?)
            } else {
                None
            };
            plain(Payload::Between {
                certificate,
                segment_member,
            })
        }
        Task::ConvexityCheck {} => {
            let checks = inp
                .fields
                .iter()
                .map(|f| is_phi_convex(f, dom, fam, tol))
                .collect::<Result<Vec<_>>>()?;
            plain(Payload::Convexity { checks })
        }
        Task::Extremal {} => plain(Payload::Extremal {
            points: phi_extremal_points(dom, fam, tol)?,
        }),
        Task::Exposed {} => {
            let exposed = phi_exposed_points(dom, fam, tol)?;
            for cert in &exposed.certificates {
                ensure(cert.replay(dom, fam, tol), "exposure certificate")?;
            }
            let warning = exposed.non_separating.map(|(i, j)| {
                let e = Error::NonSeparatingFamily(i, j);
                Status::Warning {
                    kind: e.kind().to_string(),
                    detail: e.to_string(),
                }
            });
            Ok((
                Payload::Exposed {
                    points: exposed.points(),
                    certificates: exposed.certificates,
                    non_separating: exposed.non_separating,
                },
                warning,
                None,
            ))
        }
        Task::Hull { set } => {
            let hull = phi_convex_hull(set, dom, fam, tol)?;
            ensure(set.is_subset(&hull), "hull containment")?;
            plain(Payload::Hull { hull })
        }
        Task::Bauer {} | Task::CommonMax {} => {
            let witness = common_extremal_maximizer(&inp.fields, dom, fam, tol, check)?;
            check_witness(&witness, inp, tol)?;
            plain(Payload::Witness { witness })
        }
        Task::Omega { x } => {
            let witness = omega_cone_witness(*x, &inp.fields, dom, fam, tol, check)?;
            check_witness(&witness, inp, tol)?;
            plain(Payload::Witness { witness })
        }
        Task::Perturb { epsilon } => {
            let f = &inp.fields[0];
            if check {
                if let Some(triple) = is_phi_convex(f, dom, fam, tol)?.violation {
                    return Err(Error::NotPhiConvex {
                        function: None,
                        triple,
                    });
                }
            }
            let perturbation = perturb_to_unique_max(f, dom, fam, *epsilon, tol)?;
            let g = f.add(&fam.evaluate(&perturbation.coefficients)?)?;
            let (point, gap) = leader(&g, dom);
            ensure(
                point == perturbation.unique_point
                    && gap >= tol.unique_gap
                    && rho_inf_distance(&g, f)? < *epsilon,
                "perturbation",
            )?;
            let strong_max_point = strong_max_after(&perturbation, inp, tol)?;
            plain(Payload::Perturbation {
                perturbation,
                strong_max_point,
            })
        }
        Task::StrongMax { n } => plain(Payload::StrongMax {
            n: *n,
            radius: 1.0 / f64::from(*n),
            point: has_strong_max(&inp.fields[0], dom, *n, &inp.cloud, tol)?,
        }),
        Task::Genericity {
            epsilon,
            samples,
            seed,
        } => {
            let run = genericity_estimate(&inp.fields[0], dom, fam, *epsilon, *samples, *seed, tol, check)?;
            let warning = run.not_convex.map(|triple| {
                let e = Error::NotPhiConvex {
                    function: None,
                    triple,
                };
                Status::Warning {
                    kind: e.kind().to_string(),
                    detail: e.to_string(),
                }
            });
            Ok((
                Payload::Genericity {
                    report: run.report,
                    note: GENERICITY_NOTE,
                },
                warning,
                Some(run.outcomes),
            ))
        }
    }
}

/// Runs the scenario's task. Module errors become an error status; they
/// never abort the run.
pub fn execute_scenario(cfg: &ScenarioConfig) -> RunOutput {
    let result = prepare(cfg).and_then(|inp| run_task(cfg, &inp));
    let (status, payload, samples) = match result {
        Ok((payload, warning, samples)) => (warning.unwrap_or(Status::Ok), Some(payload), samples),
        Err(e) => (Status::from_error(&e), None, None),
    };
    RunOutput {
        report: Report {
            version: REPORT_VERSION,
            task: Some(cfg.task.name()),
            status,
            payload,
            tolerance_record: cfg.tolerances,
            scenario: Some(cfg.clone()),
        },
        samples,
    }
}

/// Compact JSON with every float in `{:.16e}` form (17 significant digits).
/// serde_json maps non-finite floats to `null` before they reach the
/// formatter, so no NaN or Infinity token can be emitted.
struct ReportFormatter;

impl Formatter for ReportFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes any value with the report number format.
pub fn to_report_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ReportFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidInput(format!("report serialization failed: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("JSON output is UTF-8"))
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        to_report_json(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    const SQUARE: &str = r#"{"points":[[0,0],[1,0],[0,1],[1,1],[0.5,0.5]]}"#;

    fn run(task: &str, params: &str, functions: &str) -> RunOutput {
        let text = format!(
            r#"{{"task":"{task}","params":{params},"cloud":{SQUARE},"family":{{"kind":"affine"}},"functions":{functions}}}"#
        );
        execute_scenario(&parse_scenario(text.as_bytes()).unwrap())
    }

    #[test]
    fn bauer_on_square() {
        let out = run("bauer", "{}", r#"[{"kind":"quadratic","matrix":[[1,0],[0,1]]}]"#);
        assert_eq!(out.report.status, Status::Ok);
        match out.report.payload.unwrap() {
            Payload::Witness { witness } => assert_eq!(witness.point, 3),
            p => panic!("unexpected payload {p:?}"),
        }
    }

    #[test]
    fn empty_intersection_is_an_error_status() {
        let out = run(
            "common-max",
            "{}",
            r#"[{"kind":"linear","direction":[1,0]},{"kind":"linear","direction":[-1,0]}]"#,
        );
        match &out.report.status {
            Status::Error { kind, .. } => assert_eq!(kind, "EmptyIntersection"),
            s => panic!("unexpected status {s:?}"),
        }
        assert!(out.report.payload.is_none());
    }

    #[test]
    fn genericity_rows_match_samples() {
        let out = run(
            "genericity",
            r#"{"epsilon":0.1,"samples":250,"seed":42}"#,
            r#"[{"kind":"constant","value":0}]"#,
        );
        assert_eq!(out.report.status, Status::Ok);
        let csv = out.csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.count(), 250);
    }

    #[test]
    fn float_format() {
        let s = to_report_json(&vec![0.1, 2.0, -1e-300, 0.0]).unwrap();
        assert_eq!(
            s,
            "[1.0000000000000001e-1,2.0000000000000000e0,-1.0000000000000000e-300,0.0000000000000000e0]\n"
        );
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.1, 2.0, -1e-300, 0.0]);
        assert_eq!(to_report_json(&f64::NAN).unwrap(), "null\n");
        assert_eq!(to_report_json(&f64::INFINITY).unwrap(), "null\n");
    }

    #[test]
    fn report_is_deterministic_and_ordered() {
        let a = run("perturb", r#"{"epsilon":0.1}"#, r#"[{"kind":"constant","value":0}]"#);
        let b = run("perturb", r#"{"epsilon":0.1}"#, r#"[{"kind":"constant","value":0}]"#);
        let ja = a.report.to_json().unwrap();
        assert_eq!(ja, b.report.to_json().unwrap());
        let keys = ["\"version\"", "\"task\"", "\"status\"", "\"payload\"", "\"toleranceRecord\"", "\"scenario\""];
        let pos: Vec<usize> = keys.iter().map(|k| ja.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!(ja.contains("\"version\":\"1\""));
    }

    #[test]
    fn exposed_warns_on_non_separating_family() {
        let text = format!(
            r#"{{"task":"exposed","cloud":{SQUARE},"family":{{"kind":"lipschitz","basepoint":0}},"domain":[0,1]}}"#
        );
        let out = execute_scenario(&parse_scenario(text.as_bytes()).unwrap());
        assert_eq!(out.report.status, Status::Ok);
    }

    #[test]
    fn overrides() {
        let text = format!(
            r#"{{"task":"genericity","params":{{"epsilon":0.1,"samples":5,"seed":1}},"cloud":{SQUARE},"family":{{"kind":"affine"}},"functions":[{{"kind":"constant","value":0}}]}}"#
        );
        let mut cfg = parse_scenario(text.as_bytes()).unwrap();
        apply_overrides(&mut cfg, Some(99), false).unwrap();
        assert!(matches!(cfg.task, Task::Genericity { seed: 99, .. }));
        assert!(apply_overrides(&mut cfg, None, true).is_err());
    }
}
