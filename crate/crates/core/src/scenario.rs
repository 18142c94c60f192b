//! Scenario files: the JSON description of a cloud, a family, some fields
//! and one task to run on them.
//!
//! Parsing is two-staged so that every rejection names a key path: the
//! top-level document is read with path tracking, then the task parameters
//! are decoded against the schema of the chosen task, and finally the whole
//! config is cross-checked (index ranges, field lengths, epsilon range).

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::cloud::{IndexSet, Metric, PointCloud, ScalarField, Tolerances};
use crate::families::{FamilySpec, GridSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("invalid scenario at `{path}`: {message}")]
    Invalid { path: String, message: String },
}

impl ScenarioError {
    pub fn kind(&self) -> &'static str {
        match self {
            ScenarioError::Json(_) => "MalformedJson",
            ScenarioError::Invalid { .. } => "InvalidScenario",
        }
    }

    pub fn path(&self) -> Option<&str> {
        match self {
            ScenarioError::Json(_) => None,
            ScenarioError::Invalid { path, .. } => Some(path),
        }
    }

    fn at(path: impl Into<String>, message: impl ToString) -> Self {
        ScenarioError::Invalid {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricSpec {
    Euclidean,
    /// Explicit symmetric distance matrix.
    Matrix(Vec<Vec<f64>>),
}

/// Either inline points (with an optional metric) or a grid.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CloudSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

impl CloudSpec {
    pub fn build(&self) -> Result<PointCloud, ScenarioError> {
        let cloud = match (&self.points, &self.grid) {
            (Some(points), None) => {
                let metric = match &self.metric {
                    None | Some(MetricSpec::Euclidean) => Metric::Euclidean,
                    Some(MetricSpec::Matrix(m)) => Metric::Explicit(m.clone()),
                };
                PointCloud::with_metric(points.clone(), metric)
                    .map_err(|e| ScenarioError::at("cloud", e))?
            }
            (None, Some(grid)) => {
                if self.metric.is_some() {
                    return Err(ScenarioError::at("cloud.metric", "grid clouds are Euclidean"));
                }
                grid.cloud().map_err(|e| ScenarioError::at("cloud.grid", e))?
            }
            _ => {
                return Err(ScenarioError::at(
                    "cloud",
                    "exactly one of `points` or `grid` is required",
                ))
            }
        };
        if let Some(dim) = self.dim {
            if dim != cloud.dim() {
                return Err(ScenarioError::at(
                    "cloud.dim",
                    format!("declared {dim} but points have dimension {}", cloud.dim()),
                ));
            }
        }
        Ok(cloud)
    }
}

/// A field on the cloud, given by values or by a generator evaluated at the
/// cloud points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctionSpec {
    Values {
        values: Vec<f64>,
    },
    /// `(p − center)ᵀ Q (p − center) + linear·p + offset`.
    Quadratic {
        matrix: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        linear: Option<Vec<f64>>,
        #[serde(default)]
        offset: f64,
    },
    /// `direction·p + offset`.
    Linear {
        direction: Vec<f64>,
        #[serde(default)]
        offset: f64,
    },
    Constant {
        value: f64,
    },
}

impl FunctionSpec {
    /// Evaluates the spec on `cloud`; `path` prefixes error locations.
    pub fn field(&self, cloud: &PointCloud, path: &str) -> Result<ScalarField, ScenarioError> {
        let n = cloud.len();
        let d = cloud.dim();
        let need_dim = |v: &[f64], key: &str| {
            if v.len() == d {
                Ok(())
            } else {
                Err(ScenarioError::at(
                    format!("{path}.{key}"),
                    format!("expected length {d}, got {}", v.len()),
                ))
            }
        };
        let values: Vec<f64> = match self {
            FunctionSpec::Values { values } => {
                if values.len() != n {
                    return Err(ScenarioError::at(
                        format!("{path}.values"),
                        format!("expected {n} values, got {}", values.len()),
                    ));
                }
                values.clone()
            }
            FunctionSpec::Quadratic {
                matrix,
                center,
                linear,
                offset,
            } => {
                if matrix.len() != d {
                    return Err(ScenarioError::at(
                        format!("{path}.matrix"),
                        format!("expected {d} rows, got {}", matrix.len()),
                    ));
                }
                for (i, row) in matrix.iter().enumerate() {
                    need_dim(row, &format!("matrix[{i}]"))?;
                }
                let zero = vec![0.0; d];
                let c = center.as_deref().unwrap_or(&zero);
                let b = linear.as_deref().unwrap_or(&zero);
                need_dim(c, "center")?;
                need_dim(b, "linear")?;
                cloud
                    .points()
                    .iter()
                    .map(|p| {
                        let q: Vec<f64> = p.iter().zip(c).map(|(x, c)| x - c).collect();
                        let quad: f64 = (0..d)
                            .map(|i| (0..d).map(|j| q[i] * matrix[i][j] * q[j]).sum::<f64>())
                            .sum();
                        quad + p.iter().zip(b).map(|(x, b)| x * b).sum::<f64>() + offset
                    })
                    .collect()
            }
            FunctionSpec::Linear { direction, offset } => {
                need_dim(direction, "direction")?;
                cloud
                    .points()
                    .iter()
                    .map(|p| p.iter().zip(direction).map(|(x, w)| x * w).sum::<f64>() + offset)
                    .collect()
            }
            FunctionSpec::Constant { value } => vec![*value; n],
        };
        ScalarField::new(values).map_err(|e| ScenarioError::at(path, e))
    }
}

/// The operation to run, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "task",
    content = "params",
    rename_all = "kebab-case",
    rename_all_fields = "camelCase",
    deny_unknown_fields
)]
pub enum Task {
    Between { a: usize, x: usize, y: usize },
    ConvexityCheck {},
    Extremal {},
    Exposed {},
    Hull { set: IndexSet },
    Bauer {},
    CommonMax {},
    Omega { x: usize },
    Perturb { epsilon: f64 },
    StrongMax { n: u32 },
    Genericity { epsilon: f64, samples: usize, seed: u64 },
}

pub const TASK_NAMES: [&str; 11] = [
    "between",
    "convexity-check",
    "extremal",
    "exposed",
    "hull",
    "bauer",
    "common-max",
    "omega",
    "perturb",
    "strong-max",
    "genericity",
];

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Between { .. } => "between",
            Task::ConvexityCheck {} => "convexity-check",
            Task::Extremal {} => "extremal",
            Task::Exposed {} => "exposed",
            Task::Hull { .. } => "hull",
            Task::Bauer {} => "bauer",
            Task::CommonMax {} => "common-max",
            Task::Omega { .. } => "omega",
            Task::Perturb { .. } => "perturb",
            Task::StrongMax { .. } => "strong-max",
            Task::Genericity { .. } => "genericity",
        }
    }

    /// Allowed number of functions, as `(min, max)`.
    fn function_count(&self) -> (usize, usize) {
        match self {
            Task::Between { .. } | Task::Extremal {} | Task::Exposed {} | Task::Hull { .. } => {
                (0, usize::MAX)
            }
            Task::Bauer {} | Task::Perturb { .. } | Task::StrongMax { .. } | Task::Genericity { .. } => {
                (1, 1)
            }
            Task::ConvexityCheck {} | Task::CommonMax {} | Task::Omega { .. } => (1, usize::MAX),
        }
    }
}

/// A fully validated scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScenarioConfig {
    #[serde(flatten)]
    pub task: Task,
    pub cloud: CloudSpec,
    pub family: FamilySpec,
    pub functions: Vec<FunctionSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<IndexSet>,
    pub tolerances: Tolerances,
    pub check_convexity: bool,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawScenario {
    task: String,
    #[serde(default)]
    params: Option<Value>,
    cloud: CloudSpec,
    family: FamilySpec,
    #[serde(default)]
    functions: Vec<FunctionSpec>,
    #[serde(default)]
    domain: Option<IndexSet>,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default = "yes")]
    check_convexity: bool,
}

fn yes() -> bool {
    true
}

fn path_error<E: std::fmt::Display>(prefix: &str, err: serde_path_to_error::Error<E>) -> ScenarioError {
    let inner = err.path().to_string();
    let path = match (prefix.is_empty(), inner.as_str()) {
        (true, _) => inner.clone(),
        (false, ".") => prefix.to_string(),
        (false, _) => format!("{prefix}.{inner}"),
    };
    ScenarioError::at(path, err.into_inner())
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &[u8]) -> Result<ScenarioConfig, ScenarioError> {
    let text = std::str::from_utf8(text).map_err(|e| ScenarioError::Json(e.to_string()))?;
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawScenario = serde_path_to_error::deserialize(de).map_err(|e| {
        if e.inner().is_data() {
            path_error("", e)
        } else {
            ScenarioError::Json(e.into_inner().to_string())
        }
    })?;

    if !TASK_NAMES.contains(&raw.task.as_str()) {
        return Err(ScenarioError::at(
            "task",
            format!("unknown task `{}`, expected one of {}", raw.task, TASK_NAMES.join(", ")),
        ));
    }
    let tagged = serde_json::json!({
        "task": raw.task,
        "params": raw.params.unwrap_or_else(|| Value::Object(Default::default())),
    });
    let task: Task = serde_path_to_error::deserialize(tagged).map_err(|e| {
        if e.path().to_string() == "." {
            ScenarioError::at("params", e.into_inner())
        } else {
            path_error("", e)
        }
    })?;

    let cfg = ScenarioConfig {
        task,
        cloud: raw.cloud,
        family: raw.family,
        functions: raw.functions,
        domain: raw.domain,
        tolerances: raw.tolerances,
        check_convexity: raw.check_convexity,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn check_epsilon(epsilon: f64) -> Result<(), ScenarioError> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(ScenarioError::at(
            "params.epsilon",
            format!("epsilon must lie in (0, 1), got {epsilon}"),
        ))
    }
}

impl ScenarioConfig {
    /// Family spec with a harmonic grid filled in from a grid cloud.
    pub fn resolved_family(&self) -> FamilySpec {
        match (&self.family, &self.cloud.grid) {
            (FamilySpec::Harmonic { grid: None }, Some(g)) => FamilySpec::Harmonic {
                grid: Some(g.clone()),
            },
            (spec, _) => spec.clone(),
        }
    }

    /// The domain to operate on: the declared one or the whole cloud.
    pub fn domain_for(&self, cloud: &PointCloud) -> IndexSet {
        self.domain.clone().unwrap_or_else(|| cloud.full_domain())
    }

    /// Cross-field checks that need the built cloud.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.tolerances
            .validate()
            .map_err(|e| ScenarioError::at("tolerances", e))?;
        let cloud = self.cloud.build()?;
        let n = cloud.len();
        let index = |i: usize, path: &str| {
            if i < n {
                Ok(())
            } else {
                Err(ScenarioError::at(
                    path,
                    format!("index {i} out of range for cloud of size {n}"),
                ))
            }
        };

        match self.resolved_family() {
            FamilySpec::Lipschitz { basepoint, .. } => index(basepoint, "family.basepoint")?,
            FamilySpec::Polynomial { degree: 0 } => {
                return Err(ScenarioError::at("family.degree", "degree must be >= 1"))
            }
            FamilySpec::Harmonic { grid: None } => {
                return Err(ScenarioError::at(
                    "family.grid",
                    "cloud/grid mismatch: harmonic family needs a grid",
                ))
            }
            FamilySpec::Harmonic { grid: Some(g) } => {
                g.validate().map_err(|e| ScenarioError::at("family.grid", e))?;
                if !g.matches(&cloud) {
                    return Err(ScenarioError::at(
                        "family.grid",
                        "cloud/grid mismatch: cloud points are not the grid nodes",
                    ));
                }
            }
            _ => {}
        }

        if let Some(domain) = &self.domain {
            if domain.is_empty() {
                return Err(ScenarioError::at("domain", "domain must be nonempty"));
            }
            for &i in domain.iter() {
                index(i, "domain")?;
            }
        }
        let domain = self.domain_for(&cloud);
        for (k, f) in self.functions.iter().enumerate() {
            f.field(&cloud, &format!("functions[{k}]"))?;
        }
        let (lo, hi) = self.task.function_count();
        let count = self.functions.len();
        if count < lo || count > hi {
            let want = if lo == hi {
                format!("exactly {lo}")
            } else {
                format!("at least {lo}")
            };
            return Err(ScenarioError::at(
                "functions",
                format!("task `{}` needs {want} function(s), got {count}", self.task.name()),
            ));
        }

        match &self.task {
            Task::Between { a, x, y } => {
                index(*a, "params.a")?;
                index(*x, "params.x")?;
                index(*y, "params.y")?;
            }
            Task::Hull { set } => {
                if set.is_empty() {
                    return Err(ScenarioError::at("params.set", "hull generators must be nonempty"));
                }
                if !set.is_subset(&domain) {
                    return Err(ScenarioError::at("params.set", "hull generators must lie in the domain"));
                }
            }
            Task::Omega { x } => {
                if !domain.contains(*x) {
                    return Err(ScenarioError::at("params.x", format!("point {x} is not in the domain")));
                }
            }
            Task::Perturb { epsilon } => {
                check_epsilon(*epsilon)?;
                if domain.len() < 2 {
                    return Err(ScenarioError::at("domain", "perturbation needs at least two points"));
                }
            }
            Task::StrongMax { n } => {
                if *n == 0 {
                    return Err(ScenarioError::at("params.n", "n must be >= 1"));
                }
            }
            Task::Genericity { epsilon, samples, .. } => {
                check_epsilon(*epsilon)?;
                if *samples == 0 {
                    return Err(ScenarioError::at("params.samples", "samples must be >= 1"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scenario serializes")
    }
}
