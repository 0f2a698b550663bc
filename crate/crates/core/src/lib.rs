//! Digital preparation of bosonic coherent states on qubit registers.
//!
//! A register of `N` qubits encodes the lowest `2^N` Fock states of a single
//! bosonic mode, with the computational basis index equal to the occupation
//! number. Two preparation routes are provided:
//!
//! - [`displacement`] compiles a first-order Trotterization of the
//!   displacement operator `D(α) = exp(α a† − α* a)` into Pauli-string
//!   exponentials, using the closed-form decomposition in [`pauli`].
//! - [`vqa`] trains one of three layered ansatz families against the target
//!   coherent state with a quasi-Newton optimizer.
//!
//! Both are checked against the analytic Fock-space quantities in [`fock`].
//!
//! ```
//! use coherent::{displacement::{self, DisplacementPlan}, fock::{FockDim, NormalizationMode}};
//! use num_complex::Complex64;
//!
//! let dim = FockDim::new(4).unwrap();
//! let plan = DisplacementPlan::new(Complex64::new(1.0, 1.0), dim, 14).unwrap();
//! let state = displacement::prepare(&plan);
//! let target = coherent::fock::coherent_target(plan.alpha, dim, NormalizationMode::Untruncated).unwrap();
//! assert!(displacement::fidelity(&state, &target).unwrap() >= 0.9999);
//! ```

pub mod circuit;
pub mod displacement;
mod error;
pub mod fock;
pub mod format;
pub mod optim;
pub mod pauli;
pub mod plot;
pub mod vqa;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub(crate) mod par {
    //! Order-preserving map that runs on rayon when the `parallel` feature is on.

    #[cfg(feature = "parallel")]
    pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }

    #[cfg(not(feature = "parallel"))]
    pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
    where
        F: Fn(&T) -> R,
    {
        items.iter().map(f).collect()
    }
}
