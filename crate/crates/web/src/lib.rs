//! wasm-bindgen entry points for the demo page.
//!
//! Every call takes a JSON "setup" object: a scenario without `task` and
//! `params`. The binding fills those in, runs the scenario through the same
//! parser and executor as the command-line tool, and returns JSON text.
//! Invalid input comes back as a rejection report carrying the key path, so
//! the page never has to catch an exception.

use phiconv::report::{execute_scenario, rejection_report, Report, RunOutput};
use phiconv::scenario::{parse_scenario, ScenarioError};
use serde_json::{json, Map, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn report_text(r: &Report) -> String {
    r.to_json()
        .unwrap_or_else(|e| json!({ "version": "1", "status": { "code": "error", "kind": "Serialization", "detail": e.to_string() } }).to_string())
}

fn with_task(setup: &str, task: &str, params: Value) -> Result<Vec<u8>, String> {
    let mut doc: Map<String, Value> = match serde_json::from_str(setup) {
        Ok(Value::Object(m)) => m,
        Ok(_) => return Err("setup must be a JSON object".into()),
        Err(e) => return Err(e.to_string()),
    };
    doc.insert("task".into(), Value::String(task.into()));
    if !params.as_object().is_some_and(Map::is_empty) {
        doc.insert("params".into(), params);
    }
    Ok(serde_json::to_vec(&doc).expect("a JSON map always serializes"))
}

fn execute(setup: &str, task: &str, params: Value) -> RunOutput {
    let parsed = with_task(setup, task, params)
        .map_err(ScenarioError::Json)
        .and_then(|text| parse_scenario(&text));
    match parsed {
        Ok(cfg) => execute_scenario(&cfg),
        Err(e) => RunOutput {
            report: rejection_report(&e),
            samples: None,
        },
    }
}

/// Runs a complete scenario document and returns its report.
#[wasm_bindgen]
pub fn run_scenario(scenario: &str) -> String {
    let output = match parse_scenario(scenario.as_bytes()) {
        Ok(cfg) => execute_scenario(&cfg),
        Err(e) => return report_text(&rejection_report(&e)),
    };
    report_text(&output.report)
}

/// Extremal and exposed points of the setup's domain:
/// `{"extremal": Report, "exposed": Report}`.
#[wasm_bindgen]
pub fn extremal_and_exposed(setup: &str) -> String {
    let extremal = execute(setup, "extremal", json!({}));
    let exposed = execute(setup, "exposed", json!({}));
    format!(
        r#"{{"extremal":{},"exposed":{}}}"#,
        report_text(&extremal.report),
        report_text(&exposed.report)
    )
}

/// Bauer witness of the setup's single field, then a perturbation of size
/// below `epsilon` with a unique maximizer: `{"bauer": Report, "perturb": Report}`.
#[wasm_bindgen]
pub fn maximize(setup: &str, epsilon: f64) -> String {
    let bauer = execute(setup, "bauer", json!({}));
    let perturb = execute(setup, "perturb", json!({ "epsilon": epsilon }));
    format!(
        r#"{{"bauer":{},"perturb":{}}}"#,
        report_text(&bauer.report),
        report_text(&perturb.report)
    )
}

/// Monte Carlo estimate plus the per-sample outcomes:
/// `{"report": Report, "samples": [SampleOutcome, ...]}`.
#[wasm_bindgen]
pub fn genericity(setup: &str, epsilon: f64, samples: u32, seed: u32) -> String {
    let out = execute(
        setup,
        "genericity",
        json!({ "epsilon": epsilon, "samples": samples, "seed": seed }),
    );
    let rows = serde_json::to_string(&out.samples.unwrap_or_default()).expect("outcomes serialize");
    format!(r#"{{"report":{},"samples":{rows}}}"#, report_text(&out.report))
}
