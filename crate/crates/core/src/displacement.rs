//! Trotterized displacement circuits.
//!
//! With `α = a + ib`, `α a† − α* a = −i(a Z₁ + b Z₂)`, so one Trotter step is
//! `exp(−i a Z₁/M) · exp(−i b Z₂/M)` and each factor is split further into one
//! Pauli exponential per string of [`ladder_strings`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{run, Circuit, Gate, Statevector};
use crate::fock::{coherent_target, truncated_prob, CoherentTarget, FockDim, NormalizationMode, Quadrature};
use crate::format::sig15;
use crate::pauli::ladder_strings;
use crate::{par, Error, Result};

/// Target normalization used for Trotter fidelities: overlap with the full,
/// untruncated coherent state.
pub const BASELINE: NormalizationMode = NormalizationMode::Untruncated;

/// Which quadrature block opens each Trotter step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockOrder {
    /// `Z₁` (real displacement) then `Z₂` (imaginary displacement).
    #[default]
    RealFirst,
    ImagFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementPlan {
    pub alpha: Complex64,
    pub dim: FockDim,
    pub trotter_steps: usize,
    #[serde(default)]
    pub order: BlockOrder,
}

impl DisplacementPlan {
    pub fn new(alpha: Complex64, dim: FockDim, trotter_steps: usize) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::domain(format!("displacement must be finite, got {alpha}")));
        }
        if trotter_steps == 0 {
            return Err(Error::domain("at least one Trotter step is required"));
        }
        Ok(Self { alpha, dim, trotter_steps, order: BlockOrder::RealFirst })
    }

    pub fn with_order(mut self, order: BlockOrder) -> Self {
        self.order = order;
        self
    }
}

fn push_block(circuit: &mut Circuit, q: Quadrature, scale: f64, dim: FockDim) {
    for term in ladder_strings(q, dim).terms {
        let angle = scale * term.coefficient;
        circuit.push(Gate::PauliExp { pauli: term.axes, angle }).expect("ladder strings span the register");
    }
}

pub fn build_displacement_circuit(plan: &DisplacementPlan) -> Circuit {
    let n = plan.dim.n_qubits();
    let m = plan.trotter_steps as f64;
    let real = (Quadrature::Z1, plan.alpha.re / m);
    let imag = (Quadrature::Z2, plan.alpha.im / m);
    let blocks = match plan.order {
        BlockOrder::RealFirst => [real, imag],
        BlockOrder::ImagFirst => [imag, real],
    };
    let mut step = Circuit::new(n);
    for (q, scale) in blocks {
        push_block(&mut step, q, scale, plan.dim);
    }
    let mut circuit = Circuit::new(n);
    for _ in 0..plan.trotter_steps {
        for g in step.gates() {
            circuit.push(g.clone()).expect("same register");
        }
    }
    circuit
}

/// Runs the displacement circuit on the vacuum.
pub fn prepare(plan: &DisplacementPlan) -> Statevector {
    let n = plan.dim.n_qubits();
    run(&build_displacement_circuit(plan), &Statevector::vacuum(n)).expect("circuit matches register")
}

/// `|⟨ψ|target⟩|²`.
pub fn fidelity(state: &Statevector, target: &CoherentTarget) -> Result<f64> {
    Ok(state.inner(&target.amplitudes)?.norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub m: usize,
    pub fidelity: f64,
}

pub fn trotter_sweep(alpha: Complex64, dim: FockDim, m_values: &[usize]) -> Result<Vec<SweepRow>> {
    trotter_sweep_against(alpha, dim, m_values, BASELINE)
}

/// As [`trotter_sweep`], with an explicit target normalization.
pub fn trotter_sweep_against(
    alpha: Complex64,
    dim: FockDim,
    m_values: &[usize],
    mode: NormalizationMode,
) -> Result<Vec<SweepRow>> {
    if m_values.is_empty() {
        return Err(Error::domain("sweep needs at least one Trotter step count"));
    }
    let target = coherent_target(alpha, dim, mode)?;
    let plans = m_values.iter().map(|&m| DisplacementPlan::new(alpha, dim, m)).collect::<Result<Vec<_>>>()?;
    let rows = par::map(&plans, |plan| SweepRow {
        m: plan.trotter_steps,
        fidelity: fidelity(&prepare(plan), &target).expect("same dimension"),
    });
    Ok(rows)
}

/// Occupation probability of each Fock number.
pub fn fock_distribution(state: &Statevector) -> Vec<f64> {
    state.probabilities()
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub fock_number: usize,
    pub probability: f64,
    pub poisson_reference: f64,
}

/// Pairs each measured probability with the register-renormalized Poisson
/// reference for `alpha`.
pub fn distribution_rows(probabilities: &[f64], alpha: Complex64, dim: FockDim) -> Result<Vec<DistributionRow>> {
    if probabilities.len() != dim.dim() {
        return Err(Error::DimensionMismatch { expected: dim.dim(), found: probabilities.len() });
    }
    probabilities
        .iter()
        .enumerate()
        .map(|(n, &p)| {
            Ok(DistributionRow {
                fock_number: n,
                probability: p,
                poisson_reference: truncated_prob(n as u64, alpha, dim)?,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("m,fidelity\n");
    for r in rows {
        out.push_str(&format!("{},{}\n", r.m, sig15(r.fidelity)));
    }
    out
}

pub fn distribution_csv(rows: &[DistributionRow]) -> String {
    let mut out = String::from("fock_number,probability,poisson_reference\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.fock_number, sig15(r.probability), sig15(r.poisson_reference)));
    }
    out
}
