//! Gate programs and a dense statevector simulator.
//!
//! Qubit 0 is the most significant bit of the basis index, so the basis
//! index of a register state is directly its Fock occupation number.
//! Rotations follow `R_a(θ) = exp(−iθσ_a/2)`; a Pauli exponential applies
//! `exp(−iθP)` with no half angle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::pauli::PauliString;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Gate {
    #[serde(rename = "RX")]
    Rx { qubit: usize, angle: f64 },
    #[serde(rename = "RY")]
    Ry { qubit: usize, angle: f64 },
    #[serde(rename = "RZ")]
    Rz { qubit: usize, angle: f64 },
    #[serde(rename = "CNOT")]
    Cnot { control: usize, target: usize },
    #[serde(rename = "CRY")]
    Cry { control: usize, target: usize, angle: f64 },
    /// `exp(−iθP)` for a unit-coefficient string `P` spanning the register.
    #[serde(rename = "PAULI_EXP")]
    PauliExp { pauli: PauliString, angle: f64 },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::Rx { .. } => "RX",
            Gate::Ry { .. } => "RY",
            Gate::Rz { .. } => "RZ",
            Gate::Cnot { .. } => "CNOT",
            Gate::Cry { .. } => "CRY",
            Gate::PauliExp { .. } => "PAULI_EXP",
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let check = |q: usize| {
            if q < n_qubits {
                Ok(())
            } else {
                Err(Error::QubitOutOfRange { qubit: q, n_qubits })
            }
        };
        match self {
            Gate::Rx { qubit, .. } | Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } => check(*qubit),
            Gate::Cnot { control, target } | Gate::Cry { control, target, .. } => {
                check(*control)?;
                check(*target)?;
                if control == target {
                    return Err(Error::RepeatedQubit(*control));
                }
                Ok(())
            }
            Gate::PauliExp { pauli, .. } => {
                if pauli.len() == n_qubits {
                    Ok(())
                } else {
                    Err(Error::DimensionMismatch { expected: n_qubits, found: pauli.len() })
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Circuit = serde_json::from_str(s).map_err(|e| Error::domain(e.to_string()))?;
        for g in &c.gates {
            g.validate(c.n_qubits)?;
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statevector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩`, the Fock vacuum.
    pub fn vacuum(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amplitudes }
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if index >= 1 << n_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << n_qubits, found: index });
        }
        let mut s = Self::vacuum(n_qubits);
        s.amplitudes.swap(0, index);
        Ok(s)
    }

    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << n_qubits, found: amplitudes.len() });
        }
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &[Complex64]) -> Result<Complex64> {
        if other.len() != self.amplitudes.len() {
            return Err(Error::DimensionMismatch { expected: self.amplitudes.len(), found: other.len() });
        }
        Ok(self.amplitudes.iter().zip(other).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    /// Applies a 2×2 matrix `[[a, b], [c, d]]` to `qubit`, optionally only on
    /// the subspace where `control` is set.
    fn apply_single(&mut self, qubit: usize, control: Option<usize>, m: [Complex64; 4]) {
        let bit = self.mask(qubit);
        let cbit = control.map_or(0, |c| self.mask(c));
        for i in 0..self.amplitudes.len() {
            if i & bit != 0 || i & cbit != cbit {
                continue;
            }
            let j = i | bit;
            let (x, y) = (self.amplitudes[i], self.amplitudes[j]);
            self.amplitudes[i] = m[0] * x + m[1] * y;
            self.amplitudes[j] = m[2] * x + m[3] * y;
        }
    }

    fn apply_pauli_exp(&mut self, pauli: &PauliString, angle: f64) {
        let act = pauli.basis_action();
        let (c, s) = (angle.cos(), angle.sin());
        let minus_i_sin = Complex64::new(0.0, -s);
        let mut out: Vec<Complex64> = self.amplitudes.iter().map(|a| a * c).collect();
        for (x, a) in self.amplitudes.iter().enumerate() {
            let (phase, y) = act.apply(x);
            out[y] += minus_i_sin * phase * a;
        }
        self.amplitudes = out;
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match *gate {
            Gate::Rx { qubit, angle } => self.apply_single(qubit, None, rx(angle)),
            Gate::Ry { qubit, angle } => self.apply_single(qubit, None, ry(angle)),
            Gate::Rz { qubit, angle } => self.apply_single(qubit, None, rz(angle)),
            Gate::Cnot { control, target } => {
                let o = Complex64::new(0.0, 0.0);
                let l = Complex64::new(1.0, 0.0);
                self.apply_single(target, Some(control), [o, l, l, o])
            }
            Gate::Cry { control, target, angle } => self.apply_single(target, Some(control), ry(angle)),
            Gate::PauliExp { ref pauli, angle } => self.apply_pauli_exp(pauli, angle),
        }
        Ok(())
    }
}

fn rx(t: f64) -> [Complex64; 4] {
    let c = Complex64::new((t / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(t / 2.0).sin());
    [c, s, s, c]
}

fn ry(t: f64) -> [Complex64; 4] {
    let (s, c) = (t / 2.0).sin_cos();
    [c.into(), (-s).into(), s.into(), c.into()]
}

fn rz(t: f64) -> [Complex64; 4] {
    let o = Complex64::new(0.0, 0.0);
    [Complex64::from_polar(1.0, -t / 2.0), o, o, Complex64::from_polar(1.0, t / 2.0)]
}

pub fn apply_gate(state: &Statevector, gate: &Gate) -> Result<Statevector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

pub fn run(circuit: &Circuit, initial: &Statevector) -> Result<Statevector> {
    if circuit.n_qubits != initial.n_qubits {
        return Err(Error::DimensionMismatch { expected: circuit.n_qubits, found: initial.n_qubits });
    }
    let mut state = initial.clone();
    for g in &circuit.gates {
        state.apply(g)?;
    }
    Ok(state)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCount {
    pub single_qubit: usize,
    pub cnot: usize,
}

/// Native gate totals with each controlled-`R_y` lowered to two single-qubit
/// rotations and two CNOTs.
pub fn gate_count(circuit: &Circuit) -> Result<GateCount> {
    let mut count = GateCount::default();
    for g in &circuit.gates {
        match g {
            Gate::Rx { .. } | Gate::Ry { .. } | Gate::Rz { .. } => count.single_qubit += 1,
            Gate::Cnot { .. } => count.cnot += 1,
            Gate::Cry { .. } => {
                count.single_qubit += 2;
                count.cnot += 2;
            }
            Gate::PauliExp { .. } => return Err(Error::UnsupportedGate("PAULI_EXP")),
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn rx_pi_flips_with_phase() {
        let s = apply_gate(&Statevector::vacuum(1), &Gate::Rx { qubit: 0, angle: PI }).unwrap();
        assert!(close(s.amplitudes(), &[Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)], 1e-15));
    }

    #[test]
    fn cnot_on_one_zero() {
        let s = Statevector::basis(2, 0b10).unwrap();
        let out = apply_gate(&s, &Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert_eq!(out, Statevector::basis(2, 0b11).unwrap());
    }

    #[test]
    fn pauli_exp_y_rotation() {
        let theta = 0.37;
        let g = Gate::PauliExp { pauli: "Y".parse().unwrap(), angle: theta };
        let out = apply_gate(&Statevector::vacuum(1), &g).unwrap();
        let expected = [Complex64::new(theta.cos(), 0.0), Complex64::new(theta.sin(), 0.0)];
        assert!(close(out.amplitudes(), &expected, 1e-15));
    }

    #[test]
    fn out_of_range_and_repeated_qubits() {
        let s = Statevector::vacuum(2);
        assert_eq!(
            apply_gate(&s, &Gate::Rx { qubit: 2, angle: 0.1 }),
            Err(Error::QubitOutOfRange { qubit: 2, n_qubits: 2 })
        );
        assert_eq!(apply_gate(&s, &Gate::Cnot { control: 1, target: 1 }), Err(Error::RepeatedQubit(1)));
        let g = Gate::PauliExp { pauli: "XYZ".parse().unwrap(), angle: 0.1 };
        assert!(apply_gate(&s, &g).is_err());
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::Cry { control: 0, target: 5, angle: 1.0 }).is_err());
        assert!(c.is_empty());
    }

    #[test]
    fn run_checks_width_and_empty_is_identity() {
        let s = Statevector::basis(3, 5).unwrap();
        assert_eq!(run(&Circuit::new(3), &s).unwrap(), s);
        assert!(run(&Circuit::new(2), &s).is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(gate_count(&Circuit::new(3)).unwrap(), GateCount::default());
        let mut c = Circuit::new(2);
        c.push(Gate::Rx { qubit: 0, angle: 1.0 }).unwrap();
        c.push(Gate::Cry { control: 0, target: 1, angle: 1.0 }).unwrap();
        c.push(Gate::Cnot { control: 1, target: 0 }).unwrap();
        assert_eq!(gate_count(&c).unwrap(), GateCount { single_qubit: 3, cnot: 3 });
        c.push(Gate::PauliExp { pauli: "XY".parse().unwrap(), angle: 0.2 }).unwrap();
        assert_eq!(gate_count(&c), Err(Error::UnsupportedGate("PAULI_EXP")));
    }

    #[test]
    fn json_uses_kind_tags() {
        let mut c = Circuit::new(2);
        c.push(Gate::Rz { qubit: 1, angle: 0.5 }).unwrap();
        c.push(Gate::PauliExp { pauli: "ZY".parse().unwrap(), angle: -0.25 }).unwrap();
        let v: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "n_qubits": 2,
                "gates": [
                    {"kind": "RZ", "qubit": 1, "angle": 0.5},
                    {"kind": "PAULI_EXP", "pauli": "ZY", "angle": -0.25}
                ]
            })
        );
        assert_eq!(Circuit::from_json(&c.to_json()).unwrap(), c);
        assert!(Circuit::from_json(r#"{"n_qubits":1,"gates":[{"kind":"RX","qubit":3,"angle":0}]}"#).is_err());
    }
}
