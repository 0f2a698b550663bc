//! Pauli strings and the decomposition of the truncated quadratures.
//!
//! Axis 0 of a string is the leftmost tensor factor and acts on the most
//! significant bit of the basis index, so `"IY"` is `I ⊗ σ_y` acting on the
//! low bit.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::fock::{FockDim, Quadrature};
use crate::{Error, Result};

/// Coefficients at or below this magnitude are dropped by [`trace_project`].
pub const PRUNE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> DMatrix<Complex64> {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::i();
        let e = match self {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        DMatrix::from_row_slice(2, 2, &e)
    }

    fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl TryFrom<char> for Pauli {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            _ => Err(Error::domain(format!("not a Pauli label: {c:?}"))),
        }
    }
}

/// Tensor product of single-qubit Paulis, one per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(pub Vec<Pauli>);

/// Bit masks describing how a Pauli string acts on computational basis states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisAction {
    /// Bits flipped by X and Y factors.
    pub flip: usize,
    /// Bits whose value contributes a sign, from Y and Z factors.
    pub sign: usize,
    /// Number of Y factors; each contributes a factor `i`.
    pub n_y: usize,
}

impl BasisAction {
    /// `P|x⟩ = phase · |x ⊕ flip⟩`.
    pub fn apply(&self, x: usize) -> (Complex64, usize) {
        let mut phase = match self.n_y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        if (x & self.sign).count_ones() % 2 == 1 {
            phase = -phase;
        }
        (phase, x ^ self.flip)
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self(vec![Pauli::I; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count_y(&self) -> usize {
        self.0.iter().filter(|&&p| p == Pauli::Y).count()
    }

    pub fn basis_action(&self) -> BasisAction {
        let n = self.0.len();
        let mut act = BasisAction { flip: 0, sign: 0, n_y: 0 };
        for (q, p) in self.0.iter().enumerate() {
            let bit = 1 << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => act.flip |= bit,
                Pauli::Y => {
                    act.flip |= bit;
                    act.sign |= bit;
                    act.n_y += 1;
                }
                Pauli::Z => act.sign |= bit,
            }
        }
        act
    }

    /// Dense matrix of the unit-coefficient string.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        self.0.iter().fold(DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)), |acc, p| acc.kronecker(&p.matrix()))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::domain("empty Pauli string"));
        }
        s.chars().map(Pauli::try_from).collect::<Result<Vec<_>>>().map(PauliString)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub axes: PauliString,
    #[serde(rename = "coeff")]
    pub coefficient: f64,
}

impl PauliTerm {
    pub fn new(axes: PauliString, coefficient: f64) -> Self {
        Self { axes, coefficient }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YParity {
    OddY,
    EvenY,
}

impl YParity {
    fn of(axes: &PauliString) -> Self {
        if axes.count_y() % 2 == 1 {
            YParity::OddY
        } else {
            YParity::EvenY
        }
    }
}

/// Weighted sum of Pauli strings on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDecomposition {
    pub n_qubits: usize,
    pub terms: Vec<PauliTerm>,
    /// Common Y-count parity of every term, when there is one.
    pub parity: Option<YParity>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionDoc {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliDecomposition {
    pub fn new(n_qubits: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.axes.len() != n_qubits) {
            return Err(Error::DimensionMismatch { expected: n_qubits, found: t.axes.len() });
        }
        let parity =
            terms.first().map(|t| YParity::of(&t.axes)).filter(|p| terms.iter().all(|t| YParity::of(&t.axes) == *p));
        Ok(Self { n_qubits, terms, parity })
    }

    pub fn to_json(&self) -> String {
        let doc = DecompositionDoc { n_qubits: self.n_qubits, terms: self.terms.clone() };
        serde_json::to_string_pretty(&doc).expect("decomposition serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: DecompositionDoc = serde_json::from_str(s).map_err(|e| Error::domain(e.to_string()))?;
        Self::new(doc.n_qubits, doc.terms)
    }

    pub fn coefficient(&self, axes: &PauliString) -> Option<f64> {
        self.terms.iter().find(|t| &t.axes == axes).map(|t| t.coefficient)
    }
}

pub fn pauli_term_matrix(term: &PauliTerm) -> DMatrix<Complex64> {
    term.axes.matrix() * Complex64::new(term.coefficient, 0.0)
}

pub fn reconstruct(decomp: &PauliDecomposition) -> DMatrix<Complex64> {
    let d = 1 << decomp.n_qubits;
    decomp.terms.iter().fold(DMatrix::zeros(d, d), |acc, t| acc + pauli_term_matrix(t))
}

fn string_from_index(mut idx: usize, n: usize) -> PauliString {
    let mut axes = vec![Pauli::I; n];
    for q in (0..n).rev() {
        axes[q] = Pauli::ALL[idx % 4];
        idx /= 4;
    }
    PauliString(axes)
}

/// Hilbert–Schmidt projection `c_P = Tr(P M) / 2^N` onto all `4^N` strings.
pub fn trace_project(matrix: &DMatrix<Complex64>) -> Result<PauliDecomposition> {
    let d = matrix.nrows();
    if matrix.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: matrix.ncols() });
    }
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::domain(format!("dimension {d} is not a power of two")));
    }
    let herm_err = (matrix - matrix.adjoint()).camax();
    if herm_err > 1e-10 {
        return Err(Error::domain(format!("matrix is not Hermitian (deviation {herm_err:e})")));
    }
    let n = d.trailing_zeros() as usize;
    let mut terms = Vec::new();
    for idx in 0..1usize << (2 * n) {
        let axes = string_from_index(idx, n);
        let act = axes.basis_action();
        // (P M)_{xx} = P_{x, x^f} M_{x^f, x}, and P|x^f⟩ = phase(x^f)|x⟩.
        let trace: Complex64 = (0..d)
            .map(|x| {
                let (phase, _) = act.apply(x ^ act.flip);
                phase * matrix[(x ^ act.flip, x)]
            })
            .sum();
        let c = trace.re / d as f64;
        if c.abs() > PRUNE_THRESHOLD {
            terms.push(PauliTerm::new(axes, c));
        }
    }
    PauliDecomposition::new(n, terms)
}

/// Closed-form Pauli decomposition of `Z₁` or `Z₂` with `N·2^{N−1}` terms.
///
/// The hop `|j⟩ → |j+1⟩` flips the lowest `m` bits of `j`, where `m − 1` is
/// the number of trailing ones of `j`, and leaves the top `N − m` bits
/// (value `k`) alone. Its amplitude `√(j+1) = √(2^{m−1}(2k+1))` is spread
/// over `I/Z` strings on the top bits with sign `(−1)^{popcount(k & zmask)}`,
/// and the flip itself expands into `X/Y` strings on the bottom `m` bits.
/// Terms come out grouped by `m` ascending, then `I < Z` on the prefix, then
/// `X < Y` on the suffix.
pub fn ladder_strings(q: Quadrature, dim: FockDim) -> PauliDecomposition {
    let n = dim.n_qubits();
    let norm = f64::from(1u32 << (n - 1));
    let mut terms = Vec::with_capacity(n << (n - 1));
    for m in 1..=n {
        let prefix_len = n - m;
        let hop_scale = f64::from(1u32 << (m - 1));
        for zmask in 0..1usize << prefix_len {
            let weight: f64 = (0..1usize << prefix_len)
                .map(|k| {
                    let amp = (hop_scale * (2 * k + 1) as f64).sqrt();
                    if (k & zmask).count_ones() % 2 == 1 {
                        -amp
                    } else {
                        amp
                    }
                })
                .sum();
            for ymask in 0..1usize << m {
                // The leading suffix qubit raises 0 → 1 and contributes (X − iY)/2;
                // the rest lower 1 → 0 with (X + iY)/2. The string's complex
                // weight is i^t / 2^m with t = (#Y in tail) − (#Y at head).
                let head_y = (ymask >> (m - 1)) & 1;
                let tail_y = (ymask & ((1 << (m - 1)) - 1)).count_ones() as usize;
                let t = (tail_y + 4 - head_y) % 4;
                let sign = match (q, t) {
                    (Quadrature::Z1, 1) => -1.0,
                    (Quadrature::Z1, 3) => 1.0,
                    (Quadrature::Z2, 0) => -1.0,
                    (Quadrature::Z2, 2) => 1.0,
                    _ => continue,
                };
                let mut axes = Vec::with_capacity(n);
                for p in 0..prefix_len {
                    let z = (zmask >> (prefix_len - 1 - p)) & 1 == 1;
                    axes.push(if z { Pauli::Z } else { Pauli::I });
                }
                for s in 0..m {
                    let y = (ymask >> (m - 1 - s)) & 1 == 1;
                    axes.push(if y { Pauli::Y } else { Pauli::X });
                }
                terms.push(PauliTerm::new(PauliString(axes), sign * weight / norm));
            }
        }
    }
    let parity = match q {
        Quadrature::Z1 => YParity::OddY,
        Quadrature::Z2 => YParity::EvenY,
    };
    PauliDecomposition { n_qubits: n, terms, parity: Some(parity) }
}
