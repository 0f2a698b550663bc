//! Truncated single-mode Fock space.
//!
//! `N` qubits hold the occupation numbers `0..2^N`. Operators are the
//! top-left `2^N × 2^N` block of their infinite-dimensional matrices, so the
//! annihilation operator carries `√1 … √(2^N − 1)` on its superdiagonal.

use log::warn;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest register the dense routines accept.
pub const MAX_QUBITS: usize = 20;

/// Number of qubits encoding the mode, and the Fock cutoff `2^N` it implies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct FockDim {
    n_qubits: usize,
}

impl FockDim {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::domain(format!("qubit count must be in 1..={MAX_QUBITS}, got {n_qubits}")));
        }
        Ok(Self { n_qubits })
    }

    pub fn n_qubits(self) -> usize {
        self.n_qubits
    }

    /// Number of Fock states, `2^N`.
    pub fn dim(self) -> usize {
        1 << self.n_qubits
    }
}

impl TryFrom<usize> for FockDim {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

impl From<FockDim> for usize {
    fn from(d: FockDim) -> usize {
        d.n_qubits
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderKind {
    Creation,
    Annihilation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderMatrix {
    pub kind: LadderKind,
    pub dim: FockDim,
    pub entries: DMatrix<Complex64>,
}

/// Truncated creation or annihilation operator.
pub fn ladder_matrix(kind: LadderKind, dim: FockDim) -> LadderMatrix {
    let n = dim.dim();
    let mut entries = DMatrix::zeros(n, n);
    for j in 0..n - 1 {
        let v = Complex64::new(((j + 1) as f64).sqrt(), 0.0);
        match kind {
            LadderKind::Annihilation => entries[(j, j + 1)] = v,
            LadderKind::Creation => entries[(j + 1, j)] = v,
        }
    }
    LadderMatrix { kind, dim, entries }
}

/// The two Hermitian combinations of ladder operators that generate the
/// real and imaginary parts of a displacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrature {
    /// `Z₁ = i(a† − a)`, Hermitian with purely imaginary entries.
    Z1,
    /// `Z₂ = −(a + a†)`, real symmetric.
    Z2,
}

impl Quadrature {
    pub fn index(self) -> u8 {
        match self {
            Quadrature::Z1 => 1,
            Quadrature::Z2 => 2,
        }
    }

    pub fn from_index(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Quadrature::Z1),
            2 => Ok(Quadrature::Z2),
            _ => Err(Error::domain(format!("quadrature index must be 1 or 2, got {k}"))),
        }
    }
}

pub fn z_matrix(q: Quadrature, dim: FockDim) -> DMatrix<Complex64> {
    let a = ladder_matrix(LadderKind::Annihilation, dim).entries;
    let ad = ladder_matrix(LadderKind::Creation, dim).entries;
    match q {
        Quadrature::Z1 => (ad - a) * Complex64::i(),
        Quadrature::Z2 => -(a + ad),
    }
}

/// Dense `α a† − α* a` on the truncated space. Anti-Hermitian for every `α`.
pub fn displacement_generator(alpha: Complex64, dim: FockDim) -> DMatrix<Complex64> {
    let a = ladder_matrix(LadderKind::Annihilation, dim).entries;
    let ad = ladder_matrix(LadderKind::Creation, dim).entries;
    ad * alpha - a * alpha.conj()
}

/// How the Fock-space coherent state is cut down to `2^N` amplitudes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationMode {
    /// Truncate the series and rescale the kept amplitudes to unit norm.
    #[default]
    RawTruncated,
    /// Same vector, normalized through `√(Γ(2^N, |α|²)/Γ(2^N))`.
    GammaRenormalized,
    /// Keep the infinite-series amplitudes `e^{−|α|²/2} α^k/√k!` as they are.
    /// The vector has norm below one; overlaps against it are overlaps with
    /// the full coherent state.
    Untruncated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentTarget {
    pub alpha: Complex64,
    pub dim: FockDim,
    pub amplitudes: Vec<Complex64>,
    pub normalization_mode: NormalizationMode,
}

fn ln_factorial(m: u64) -> f64 {
    (2..=m).map(|j| (j as f64).ln()).sum()
}

fn check_alpha(alpha: Complex64) -> Result<()> {
    if alpha.re.is_finite() && alpha.im.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("displacement must be finite, got {alpha}")))
    }
}

/// `e^{−|α|²/2} α^k / √k!`, evaluated in log space.
fn series_amplitude(alpha: Complex64, k: u64) -> Complex64 {
    let r = alpha.norm();
    if r == 0.0 {
        return if k == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
    }
    let ln_mag = -0.5 * r * r + k as f64 * r.ln() - 0.5 * ln_factorial(k);
    Complex64::from_polar(ln_mag.exp(), k as f64 * alpha.arg())
}

pub fn coherent_target(alpha: Complex64, dim: FockDim, mode: NormalizationMode) -> Result<CoherentTarget> {
    check_alpha(alpha)?;
    let mean = alpha.norm_sqr();
    if mean > dim.dim() as f64 / 2.0 {
        warn!("|alpha|^2 = {mean} exceeds half the Fock cutoff {}; truncation error will be large", dim.dim());
    }
    let mut amplitudes: Vec<Complex64> = (0..dim.dim() as u64).map(|k| series_amplitude(alpha, k)).collect();
    let scale = match mode {
        NormalizationMode::Untruncated => 1.0,
        NormalizationMode::RawTruncated => 1.0 / amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt(),
        NormalizationMode::GammaRenormalized => 1.0 / regularized_upper_gamma(dim.dim() as u32, mean).sqrt(),
    };
    for a in &mut amplitudes {
        *a *= scale;
    }
    Ok(CoherentTarget { alpha, dim, amplitudes, normalization_mode: mode })
}

/// Poisson occupation probability `e^{−|α|²} |α|^{2m} / m!`.
pub fn poisson_prob(m: u64, alpha: Complex64) -> f64 {
    let mean = alpha.norm_sqr();
    if mean == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    (-mean + m as f64 * mean.ln() - ln_factorial(m)).exp()
}

/// Occupation probability of the coherent state renormalized inside the
/// `2^N`-dimensional register.
pub fn truncated_prob(m: u64, alpha: Complex64, dim: FockDim) -> Result<f64> {
    if m >= dim.dim() as u64 {
        return Err(Error::domain(format!("Fock number {m} outside a {}-state register", dim.dim())));
    }
    check_alpha(alpha)?;
    Ok(poisson_prob(m, alpha) / regularized_upper_gamma(dim.dim() as u32, alpha.norm_sqr()))
}

/// Upper incomplete gamma `Γ(k, x) = ∫ₓ^∞ t^{k−1} e^{−t} dt` for integer `k`,
/// from the closed form `(k−1)! e^{−x} Σ_{j<k} x^j/j!`.
///
/// # Panics
///
/// If `k == 0` or `x` is negative or NaN.
pub fn upper_incomplete_gamma(k: u32, x: f64) -> f64 {
    assert!(k >= 1, "upper_incomplete_gamma needs k >= 1");
    assert!(x >= 0.0, "upper_incomplete_gamma needs x >= 0");
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..k {
        term *= x / j as f64;
        sum += term;
    }
    let fact: f64 = (1..k).map(f64::from).product();
    fact * (-x).exp() * sum
}

/// `Γ(k, x) / Γ(k)`, the probability that a Poisson variable of mean `x`
/// is below `k`. Summed in log space so large `k` and `x` stay finite.
pub fn regularized_upper_gamma(k: u32, x: f64) -> f64 {
    assert!(k >= 1, "regularized_upper_gamma needs k >= 1");
    assert!(x >= 0.0, "regularized_upper_gamma needs x >= 0");
    if x == 0.0 {
        return 1.0;
    }
    let ln_x = x.ln();
    let mut ln_term = -x;
    let mut sum = 0.0;
    for j in 0..k {
        if j > 0 {
            ln_term += ln_x - f64::from(j).ln();
        }
        sum += ln_term.exp();
    }
    sum.min(1.0)
}
