//! Steering certification from correlation matrices under bounded
//! measurement imprecision.
//!
//! The numerical kernel ([`linalg`]) and everything built on it are generic
//! over the real scalar (`f32` or `f64`, see [`Real`]). Concrete aliases for
//! the common double-precision case live at the crate root.
//!
//! ```
//! use steerlab::{criteria, observables, states};
//!
//! let singlet = states::singlet::<f64>();
//! let pauli = observables::pauli_loo_qubit::<f64>();
//! let report = criteria::bipartite_gap_ideal(&singlet, &pauli, &pauli).unwrap();
//! assert!(report.steerable);
//! assert!((report.gap - (1.5 - 0.75f64.sqrt())).abs() < 1e-12);
//! ```

pub mod criteria;
pub mod error;
pub mod io;
pub mod linalg;
pub mod observables;
pub mod random;
pub mod scalar;
pub mod solvers;
pub mod states;

pub use error::{Error, Result};
pub use scalar::Real;

pub use criteria::{CorrelationMatrix, GapReport, GapTerms, Scenario, VarianceBounds};
pub use linalg::{ComplexMatrix, DimensionFactorization};
pub use observables::{ErrorModel, EtaScaling, ObservableBasis, PerturbedBasis, Weights};
pub use states::{DensityMatrix, StateFamilySpec};

pub type Cplx64 = num_complex::Complex<f64>;
pub type CMat64 = ComplexMatrix<f64>;
pub type CMat32 = ComplexMatrix<f32>;
pub type Rho64 = DensityMatrix<f64>;
pub type Rho32 = DensityMatrix<f32>;
pub type Basis64 = ObservableBasis<f64>;
pub type Basis32 = ObservableBasis<f32>;
pub type Model64 = ErrorModel<f64>;
pub type Report64 = GapReport<f64>;
pub type Corr64 = CorrelationMatrix<f64>;
