//! Browser bindings. Every export returns a JSON string so the page can stay
//! framework-free.

use coherent::displacement::{self, DisplacementPlan};
use coherent::fock::{coherent_target, FockDim, NormalizationMode};
use coherent::vqa::{self, AnsatzSpec, Scheme, TrainConfig};
use coherent::Complex64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Register sizes the page allows; larger ones stall the UI thread.
const MAX_DEMO_QUBITS: usize = 8;

fn dim(qubits: usize) -> Result<FockDim, String> {
    if qubits > MAX_DEMO_QUBITS {
        return Err(format!("at most {MAX_DEMO_QUBITS} qubits in the demo"));
    }
    FockDim::new(qubits).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn sweep_json(re: f64, im: f64, qubits: usize, m_min: usize, m_max: usize) -> Result<String, String> {
    if m_min == 0 || m_min > m_max || m_max > 500 {
        return Err("Trotter steps must satisfy 1 ≤ min ≤ max ≤ 500".into());
    }
    let steps: Vec<usize> = (m_min..=m_max).collect();
    let rows = displacement::trotter_sweep(Complex64::new(re, im), dim(qubits)?, &steps).map_err(|e| e.to_string())?;
    to_json(&rows)
}

pub fn distribution_json(re: f64, im: f64, qubits: usize, steps: usize) -> Result<String, String> {
    let alpha = Complex64::new(re, im);
    let d = dim(qubits)?;
    let plan = DisplacementPlan::new(alpha, d, steps).map_err(|e| e.to_string())?;
    let probs = displacement::fock_distribution(&displacement::prepare(&plan));
    to_json(&displacement::distribution_rows(&probs, alpha, d).map_err(|e| e.to_string())?)
}

#[derive(Serialize)]
struct TrainSummary {
    scheme: Scheme,
    layers: usize,
    params: usize,
    single_qubit: usize,
    cnot: usize,
    iterations: usize,
    converged: bool,
    final_fidelity: f64,
    cost_trace: Vec<f64>,
}

pub fn train_json(
    scheme: &str,
    qubits: usize,
    layers: usize,
    re: f64,
    im: f64,
    max_iterations: usize,
) -> Result<String, String> {
    let scheme: Scheme = scheme.parse().map_err(|e: coherent::Error| e.to_string())?;
    let d = dim(qubits)?;
    let spec = AnsatzSpec::new(scheme, qubits, layers).map_err(|e| e.to_string())?;
    let target =
        coherent_target(Complex64::new(re, im), d, NormalizationMode::RawTruncated).map_err(|e| e.to_string())?;
    let config = TrainConfig { max_iterations, ..TrainConfig::default() };
    let report = vqa::train(&spec, &target, &config).map_err(|e| e.to_string())?;
    let resources = vqa::resource_report(&spec);
    to_json(&TrainSummary {
        scheme,
        layers,
        params: resources.params,
        single_qubit: resources.single_qubit,
        cnot: resources.cnot,
        iterations: report.iterations,
        converged: report.converged,
        final_fidelity: report.final_fidelity,
        cost_trace: report.cost_trace,
    })
}

/// Fidelity against the number of Trotter steps, `[{m, fidelity}]`.
#[wasm_bindgen]
pub fn trotter_sweep(re: f64, im: f64, qubits: usize, m_min: usize, m_max: usize) -> Result<String, JsError> {
    sweep_json(re, im, qubits, m_min, m_max).map_err(|e| JsError::new(&e))
}

/// Fock-number occupation of the prepared state with its Poisson reference.
#[wasm_bindgen]
pub fn fock_distribution(re: f64, im: f64, qubits: usize, steps: usize) -> Result<String, JsError> {
    distribution_json(re, im, qubits, steps).map_err(|e| JsError::new(&e))
}

/// Trains one ansatz from all-ones angles and returns the cost trace.
#[wasm_bindgen]
pub fn train_ansatz(
    scheme: &str,
    qubits: usize,
    layers: usize,
    re: f64,
    im: f64,
    max_iterations: usize,
) -> Result<String, JsError> {
    train_json(scheme, qubits, layers, re, im, max_iterations).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_rows() {
        let rows: serde_json::Value = serde_json::from_str(&sweep_json(1.0, 1.0, 4, 14, 16).unwrap()).unwrap();
        let rows = rows.as_array().unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r["fidelity"].as_f64().unwrap() >= 0.9999));
    }

    #[test]
    fn distribution_sums_to_one() {
        let rows: serde_json::Value = serde_json::from_str(&distribution_json(1.0, 1.0, 3, 20).unwrap()).unwrap();
        let total: f64 = rows.as_array().unwrap().iter().map(|r| r["probability"].as_f64().unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn training_summary() {
        let doc: serde_json::Value = serde_json::from_str(&train_json("b", 2, 1, 0.3, 0.2, 200).unwrap()).unwrap();
        assert_eq!(doc["params"], 8);
        assert!(doc["final_fidelity"].as_f64().unwrap() > 0.99);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(sweep_json(1.0, 1.0, 4, 5, 2).is_err());
        assert!(sweep_json(1.0, 1.0, 12, 1, 2).is_err());
        assert!(train_json("z", 2, 1, 1.0, 0.0, 10).is_err());
        assert!(distribution_json(f64::NAN, 0.0, 2, 3).is_err());
    }
}
