//! Variational preparation of coherent states.
//!
//! Three layered ansatz families are trained against a [`CoherentTarget`]
//! by minimizing `C = 1 − |⟨ψ(θ)|ψ_target⟩|²` with [`optim::minimize`].
//!
//! - Scheme A: per layer, `RX RZ RX` on every qubit followed by a ring of
//!   controlled-`R_y` gates (`q → q+1`, and the last qubit back to the first).
//!   Every angle is trainable: `4N` parameters per layer.
//! - Scheme B: one `RX RZ RX` column, then per layer a CNOT chain and an `R_y`
//!   on every qubit: `(3 + M_l)N` parameters.
//! - Scheme C: checkerboard of two-qubit blocks on neighbouring pairs. Each
//!   block is `RZ RX` on both qubits and a `CNOT · RZ · CNOT` entangler:
//!   `5(N − 1)M_l` parameters, `2(N − 1)M_l` CNOTs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{gate_count, run, Circuit, Gate, GateCount, Statevector};
use crate::displacement::fidelity;
use crate::fock::CoherentTarget;
use crate::format::sig15;
use crate::optim::{self, BfgsConfig};
use crate::{par, Error, Result};

/// Central-difference step for [`gradient`].
pub const GRADIENT_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    A,
    B,
    C,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::A, Scheme::B, Scheme::C];
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::A => "a",
            Scheme::B => "b",
            Scheme::C => "c",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Scheme::A),
            "b" => Ok(Scheme::B),
            "c" => Ok(Scheme::C),
            _ => Err(Error::domain(format!("unknown ansatz scheme {s:?} (expected a, b or c)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub scheme: Scheme,
    pub n_qubits: usize,
    pub layers: usize,
}

impl AnsatzSpec {
    pub fn new(scheme: Scheme, n_qubits: usize, layers: usize) -> Result<Self> {
        let min_qubits = if scheme == Scheme::B { 1 } else { 2 };
        if n_qubits < min_qubits || n_qubits > crate::fock::MAX_QUBITS {
            return Err(Error::domain(format!(
                "scheme {scheme} needs between {min_qubits} and {} qubits, got {n_qubits}",
                crate::fock::MAX_QUBITS
            )));
        }
        if layers == 0 {
            return Err(Error::domain("an ansatz needs at least one layer"));
        }
        Ok(Self { scheme, n_qubits, layers })
    }

    pub fn param_count(&self) -> usize {
        let (n, l) = (self.n_qubits, self.layers);
        match self.scheme {
            Scheme::A => 4 * n * l,
            Scheme::B => (3 + l) * n,
            Scheme::C => 5 * (n - 1) * l,
        }
    }
}

/// Consumes parameters in order while gates are appended.
struct Builder<'a> {
    circuit: Circuit,
    params: std::slice::Iter<'a, f64>,
}

impl Builder<'_> {
    fn next(&mut self) -> f64 {
        *self.params.next().expect("parameter count checked")
    }

    fn push(&mut self, g: Gate) {
        self.circuit.push(g).expect("ansatz gates fit the register");
    }

    fn rx(&mut self, qubit: usize) {
        let angle = self.next();
        self.push(Gate::Rx { qubit, angle });
    }

    fn ry(&mut self, qubit: usize) {
        let angle = self.next();
        self.push(Gate::Ry { qubit, angle });
    }

    fn rz(&mut self, qubit: usize) {
        let angle = self.next();
        self.push(Gate::Rz { qubit, angle });
    }

    fn euler_column(&mut self, n: usize) {
        for q in 0..n {
            self.rx(q);
            self.rz(q);
            self.rx(q);
        }
    }
}

pub fn build_ansatz(spec: &AnsatzSpec, params: &[f64]) -> Result<Circuit> {
    let expected = spec.param_count();
    if params.len() != expected {
        return Err(Error::ParameterCount { expected, found: params.len() });
    }
    let n = spec.n_qubits;
    let mut b = Builder { circuit: Circuit::new(n), params: params.iter() };
    match spec.scheme {
        Scheme::A => {
            for _ in 0..spec.layers {
                b.euler_column(n);
                for q in 0..n {
                    let angle = b.next();
                    b.push(Gate::Cry { control: q, target: (q + 1) % n, angle });
                }
            }
        }
        Scheme::B => {
            b.euler_column(n);
            for _ in 0..spec.layers {
                for q in 0..n.saturating_sub(1) {
                    b.push(Gate::Cnot { control: q, target: q + 1 });
                }
                for q in 0..n {
                    b.ry(q);
                }
            }
        }
        Scheme::C => {
            for _ in 0..spec.layers {
                for q in 0..n - 1 {
                    b.rz(q);
                    b.rx(q);
                    b.rz(q + 1);
                    b.rx(q + 1);
                    b.push(Gate::Cnot { control: q, target: q + 1 });
                    b.rz(q + 1);
                    b.push(Gate::Cnot { control: q, target: q + 1 });
                }
            }
        }
    }
    Ok(b.circuit)
}

fn check_target(spec: &AnsatzSpec, target: &CoherentTarget) -> Result<()> {
    if target.dim.n_qubits() != spec.n_qubits {
        return Err(Error::DimensionMismatch { expected: spec.n_qubits, found: target.dim.n_qubits() });
    }
    Ok(())
}

/// `1 − |⟨ψ(θ)|ψ_target⟩|²`, clamped to `[0, 1]`.
pub fn cost(spec: &AnsatzSpec, params: &[f64], target: &CoherentTarget) -> Result<f64> {
    check_target(spec, target)?;
    let circuit = build_ansatz(spec, params)?;
    let state = run(&circuit, &Statevector::vacuum(spec.n_qubits))?;
    Ok((1.0 - fidelity(&state, target)?).clamp(0.0, 1.0))
}

pub fn gradient(spec: &AnsatzSpec, params: &[f64], target: &CoherentTarget) -> Result<Vec<f64>> {
    gradient_with_step(spec, params, target, GRADIENT_STEP)
}

/// Central finite differences with step `h` on every coordinate.
pub fn gradient_with_step(spec: &AnsatzSpec, params: &[f64], target: &CoherentTarget, h: f64) -> Result<Vec<f64>> {
    cost(spec, params, target)?;
    let indices: Vec<usize> = (0..params.len()).collect();
    let grad = par::map(&indices, |&i| {
        let mut shifted = params.to_vec();
        shifted[i] = params[i] + h;
        let plus = cost(spec, &shifted, target).expect("validated");
        shifted[i] = params[i] - h;
        let minus = cost(spec, &shifted, target).expect("validated");
        (plus - minus) / (2.0 * h)
    });
    Ok(grad)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub max_iterations: usize,
    pub cost_tolerance: f64,
    /// Defaults to every angle set to 1.
    pub initial_params: Option<Vec<f64>>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { max_iterations: 10_000, cost_tolerance: 1e-5, initial_params: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub scheme: Scheme,
    pub n_qubits: usize,
    pub layers: usize,
    pub iterations: usize,
    pub final_fidelity: f64,
    pub converged: bool,
    pub cost_trace: Vec<f64>,
    pub final_params: Vec<f64>,
}

impl OptimizationReport {
    pub fn final_cost(&self) -> f64 {
        *self.cost_trace.last().expect("trace holds the initial cost")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn train(spec: &AnsatzSpec, target: &CoherentTarget, config: &TrainConfig) -> Result<OptimizationReport> {
    if config.max_iterations == 0 {
        return Err(Error::domain("max_iterations must be at least 1"));
    }
    check_target(spec, target)?;
    let x0 = match &config.initial_params {
        Some(p) => p.clone(),
        None => vec![1.0; spec.param_count()],
    };
    if x0.len() != spec.param_count() {
        return Err(Error::ParameterCount { expected: spec.param_count(), found: x0.len() });
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("initial parameters must be finite"));
    }
    let bfgs = BfgsConfig {
        max_iterations: config.max_iterations,
        cost_tolerance: config.cost_tolerance,
        ..Default::default()
    };
    let outcome = optim::minimize(
        |x| cost(spec, x, target).expect("validated"),
        |x| gradient(spec, x, target).expect("validated"),
        &x0,
        &bfgs,
    );
    let last = *outcome.cost_trace.last().expect("nonempty trace");
    Ok(OptimizationReport {
        scheme: spec.scheme,
        n_qubits: spec.n_qubits,
        layers: spec.layers,
        iterations: outcome.iterations,
        final_fidelity: 1.0 - last,
        converged: outcome.converged,
        cost_trace: outcome.cost_trace,
        final_params: outcome.x,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerRow {
    pub layers: usize,
    pub fidelity: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Independent training runs, one per layer count, all from the same start.
pub fn layer_sweep(
    scheme: Scheme,
    n_qubits: usize,
    target: &CoherentTarget,
    layer_values: &[usize],
    config: &TrainConfig,
) -> Result<Vec<LayerRow>> {
    if layer_values.is_empty() {
        return Err(Error::domain("layer sweep needs at least one layer count"));
    }
    let specs = layer_values.iter().map(|&l| AnsatzSpec::new(scheme, n_qubits, l)).collect::<Result<Vec<_>>>()?;
    check_target(&specs[0], target)?;
    let config = TrainConfig { initial_params: None, ..config.clone() };
    let reports = par::map(&specs, |spec| train(spec, target, &config));
    reports
        .into_iter()
        .map(|r| {
            r.map(|r| LayerRow {
                layers: r.layers,
                fidelity: r.final_fidelity,
                iterations: r.iterations,
                converged: r.converged,
            })
        })
        .collect()
}

pub fn layers_csv(rows: &[LayerRow]) -> String {
    let mut out = String::from("layers,fidelity,iterations\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.layers, sig15(r.fidelity), r.iterations));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub params: usize,
    pub single_qubit: usize,
    pub cnot: usize,
}

impl ResourceReport {
    pub fn gates(&self) -> GateCount {
        GateCount { single_qubit: self.single_qubit, cnot: self.cnot }
    }
}

/// Closed-form parameter and native-gate totals.
pub fn resource_report(spec: &AnsatzSpec) -> ResourceReport {
    let (n, l) = (spec.n_qubits, spec.layers);
    let (single_qubit, cnot) = match spec.scheme {
        Scheme::A => (5 * n * l, 2 * n * l),
        Scheme::B => ((3 + l) * n, (n - 1) * l),
        Scheme::C => (5 * (n - 1) * l, 2 * (n - 1) * l),
    };
    ResourceReport { params: spec.param_count(), single_qubit, cnot }
}

/// Resource totals counted gate by gate from the built circuit.
pub fn structural_resources(spec: &AnsatzSpec) -> Result<ResourceReport> {
    let params = vec![0.0; spec.param_count()];
    let counts = gate_count(&build_ansatz(spec, &params)?)?;
    Ok(ResourceReport { params: params.len(), single_qubit: counts.single_qubit, cnot: counts.cnot })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_target, truncated_prob, FockDim, NormalizationMode};
    use num_complex::Complex64;

    fn target(n: usize, alpha: Complex64) -> CoherentTarget {
        coherent_target(alpha, FockDim::new(n).unwrap(), NormalizationMode::RawTruncated).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(AnsatzSpec::new(Scheme::A, 1, 1).is_err());
        assert!(AnsatzSpec::new(Scheme::C, 1, 1).is_err());
        assert!(AnsatzSpec::new(Scheme::B, 1, 1).is_ok());
        assert!(AnsatzSpec::new(Scheme::B, 2, 0).is_err());
        assert_eq!("B".parse::<Scheme>().unwrap(), Scheme::B);
        assert!("d".parse::<Scheme>().is_err());
    }

    #[test]
    fn parameter_counts_four_qubits() {
        let count = |s, l| AnsatzSpec::new(s, 4, l).unwrap().param_count();
        assert_eq!(count(Scheme::A, 1), 16);
        assert_eq!(count(Scheme::B, 1), 16);
        assert_eq!(count(Scheme::C, 1), 15);
        let spec = AnsatzSpec::new(Scheme::C, 4, 1).unwrap();
        assert_eq!(build_ansatz(&spec, &[0.0; 14]), Err(Error::ParameterCount { expected: 15, found: 14 }));
    }

    #[test]
    fn scheme_a_gate_order() {
        let spec = AnsatzSpec::new(Scheme::A, 4, 1).unwrap();
        let params: Vec<f64> = (1..=16).map(f64::from).collect();
        let c = build_ansatz(&spec, &params).unwrap();
        let mut expected = Vec::new();
        for q in 0..4 {
            let base = 3.0 * q as f64;
            expected.push(Gate::Rx { qubit: q, angle: base + 1.0 });
            expected.push(Gate::Rz { qubit: q, angle: base + 2.0 });
            expected.push(Gate::Rx { qubit: q, angle: base + 3.0 });
        }
        expected.push(Gate::Cry { control: 0, target: 1, angle: 13.0 });
        expected.push(Gate::Cry { control: 1, target: 2, angle: 14.0 });
        expected.push(Gate::Cry { control: 2, target: 3, angle: 15.0 });
        expected.push(Gate::Cry { control: 3, target: 0, angle: 16.0 });
        assert_eq!(c.gates(), expected.as_slice());
    }

    #[test]
    fn scheme_b_gate_order() {
        let spec = AnsatzSpec::new(Scheme::B, 4, 1).unwrap();
        let params: Vec<f64> = (1..=16).map(f64::from).collect();
        let c = build_ansatz(&spec, &params).unwrap();
        let names: Vec<&str> = c.gates().iter().map(Gate::name).collect();
        let mut expected = ["RX", "RZ", "RX"].repeat(4);
        expected.extend(["CNOT"; 3]);
        expected.extend(["RY"; 4]);
        assert_eq!(names, expected);
        assert_eq!(c.gates()[15], Gate::Ry { qubit: 0, angle: 13.0 });
    }

    #[test]
    fn scheme_c_block() {
        let spec = AnsatzSpec::new(Scheme::C, 2, 1).unwrap();
        let c = build_ansatz(&spec, &[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(
            c.gates(),
            &[
                Gate::Rz { qubit: 0, angle: 1.0 },
                Gate::Rx { qubit: 0, angle: 2.0 },
                Gate::Rz { qubit: 1, angle: 3.0 },
                Gate::Rx { qubit: 1, angle: 4.0 },
                Gate::Cnot { control: 0, target: 1 },
                Gate::Rz { qubit: 1, angle: 5.0 },
                Gate::Cnot { control: 0, target: 1 },
            ]
        );
    }

    #[test]
    fn zero_parameters_leave_vacuum() {
        let alpha = Complex64::new(1.0, 1.0);
        let t = target(4, alpha);
        let p0 = truncated_prob(0, alpha, FockDim::new(4).unwrap()).unwrap();
        for scheme in Scheme::ALL {
            let spec = AnsatzSpec::new(scheme, 4, 2).unwrap();
            let c = cost(&spec, &vec![0.0; spec.param_count()], &t).unwrap();
            assert!((c - (1.0 - p0)).abs() < 1e-12, "{scheme}");
        }
        let vac = target(3, Complex64::new(0.0, 0.0));
        let spec = AnsatzSpec::new(Scheme::A, 3, 1).unwrap();
        assert_eq!(cost(&spec, &[0.0; 12], &vac).unwrap(), 0.0);
    }

    #[test]
    fn cost_rejects_mismatched_target() {
        let spec = AnsatzSpec::new(Scheme::B, 3, 1).unwrap();
        assert!(cost(&spec, &[0.0; 12], &target(4, Complex64::new(1.0, 0.0))).is_err());
    }

    #[test]
    fn leading_rz_has_flat_gradient() {
        let spec = AnsatzSpec::new(Scheme::C, 3, 1).unwrap();
        let params: Vec<f64> = (0..spec.param_count()).map(|i| 0.3 + 0.1 * i as f64).collect();
        let g = gradient(&spec, &params, &target(3, Complex64::new(0.5, -0.5))).unwrap();
        assert!(g[0].abs() < 1e-6);
        assert!(g[2].abs() < 1e-6);
        assert!(g.iter().any(|v| v.abs() > 1e-3));
    }

    #[test]
    fn vacuum_target_trains_immediately() {
        let spec = AnsatzSpec::new(Scheme::B, 2, 1).unwrap();
        let cfg = TrainConfig { cost_tolerance: 1e-8, ..Default::default() };
        let r = train(&spec, &target(2, Complex64::new(0.0, 0.0)), &cfg).unwrap();
        assert!(r.converged);
        assert!(r.final_cost() < 1e-8);
        assert!(r.iterations < 100);
        assert_eq!(r.final_fidelity, 1.0 - r.final_cost());
    }

    #[test]
    fn train_validates_config() {
        let spec = AnsatzSpec::new(Scheme::B, 2, 1).unwrap();
        let t = target(2, Complex64::new(0.5, 0.0));
        let zero = TrainConfig { max_iterations: 0, ..Default::default() };
        assert!(train(&spec, &t, &zero).is_err());
        let short = TrainConfig { initial_params: Some(vec![1.0; 3]), ..Default::default() };
        assert!(train(&spec, &t, &short).is_err());
    }

    #[test]
    fn closed_form_resources() {
        let r = |s, n, l| resource_report(&AnsatzSpec::new(s, n, l).unwrap());
        assert_eq!(r(Scheme::A, 4, 4), ResourceReport { params: 64, single_qubit: 80, cnot: 32 });
        assert_eq!(r(Scheme::C, 4, 6), ResourceReport { params: 90, single_qubit: 90, cnot: 36 });
        assert_eq!(r(Scheme::B, 1, 5).cnot, 0);
        assert_eq!(structural_resources(&AnsatzSpec::new(Scheme::B, 1, 5).unwrap()).unwrap().cnot, 0);
    }

    #[test]
    fn layer_csv_layout() {
        let rows = [LayerRow { layers: 2, fidelity: 0.25, iterations: 17, converged: false }];
        assert_eq!(layers_csv(&rows), "layers,fidelity,iterations\n2,0.25,17\n");
    }
}
