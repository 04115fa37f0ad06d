//! Density matrices and the state families used by the steering scenarios.

use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, frobenius_sq, hermitian_eigen, tensor_product, ComplexMatrix, DimensionFactorization};
use crate::scalar::Real;

/// Hermitian, positive semidefinite, unit-trace matrix with a subsystem
/// factorization.
///
/// The matrix is shared: [`DensityMatrix::regroup`] relabels the
/// factorization (e.g. `[2,2,2]` viewed as `[2,4]`) without copying entries.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: Arc<ComplexMatrix<T>>,
    dims: DimensionFactorization,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates and symmetrizes `matrix`.
    pub fn new(matrix: ComplexMatrix<T>, dims: DimensionFactorization) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != dims.total() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix labelled {dims}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let tol = T::tolerance();
        let deviation = matrix.hermitian_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian {
                deviation: deviation.as_f64(),
            });
        }
        let matrix = matrix.hermitize();
        let trace = matrix.trace().re;
        if (trace - T::one()).abs() > tol {
            return Err(Error::NotDensity(format!("trace {trace} != 1")));
        }
        let min_eig = *hermitian_eigen(&matrix)?
            .values
            .last()
            .expect("non-empty spectrum");
        if min_eig < -tol {
            return Err(Error::NotDensity(format!("negative eigenvalue {min_eig}")));
        }
        Ok(Self {
            matrix: Arc::new(matrix),
            dims,
        })
    }

    /// `|psi><psi|` for a normalized amplitude vector.
    pub fn pure(amplitudes: &[Complex<T>], dims: DimensionFactorization) -> Result<Self> {
        let norm: T = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - T::one()).abs() > T::tolerance() {
            return Err(Error::NotDensity(format!("state vector has norm^2 {norm}")));
        }
        Self::new(ComplexMatrix::outer(amplitudes, amplitudes), dims)
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    #[inline]
    pub fn dims(&self) -> &DimensionFactorization {
        &self.dims
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `Tr(rho^2)`, computed as the sum of squared entry moduli.
    pub fn purity(&self) -> T {
        frobenius_sq(&self.matrix)
    }

    /// Same matrix under a different factorization of the same total size.
    pub fn regroup(&self, dims: DimensionFactorization) -> Result<Self> {
        if dims.total() != self.dims.total() {
            return Err(Error::Dimension(format!(
                "cannot relabel {} as {dims}",
                self.dims
            )));
        }
        Ok(Self {
            matrix: Arc::clone(&self.matrix),
            dims,
        })
    }

    /// Reduced state on the listed subsystems.
    pub fn reduced(&self, keep: &[usize]) -> Result<Self> {
        let m = linalg::partial_trace(&self.matrix, &self.dims, keep)?;
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        let parts = keep_sorted.iter().map(|&k| self.dims.parts()[k]).collect();
        Self::new(m, DimensionFactorization::new(parts)?)
    }

    /// Subsystems reordered so that output slot `k` holds input subsystem `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let (m, dims) = linalg::permute_subsystems(&self.matrix, &self.dims, order)?;
        Ok(Self {
            matrix: Arc::new(m),
            dims,
        })
    }

    /// `self (x) other`, factorizations concatenated.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut parts = self.dims.parts().to_vec();
        parts.extend_from_slice(other.dims.parts());
        Ok(Self {
            matrix: Arc::new(tensor_product(&self.matrix, &other.matrix)),
            dims: DimensionFactorization::new(parts)?,
        })
    }

    pub fn maximally_mixed(dims: DimensionFactorization) -> Self {
        let n = dims.total();
        let m = ComplexMatrix::identity(n).scale(T::one() / T::from_usize(n).expect("dimension"));
        Self {
            matrix: Arc::new(m),
            dims,
        }
    }
}

pub fn purity<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.purity()
}

fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn basis_amplitudes<T: Real>(dim: usize, entries: &[(usize, T)]) -> Vec<Complex<T>> {
    let mut v = vec![re(T::zero()); dim];
    for &(i, a) in entries {
        v[i] = re(a);
    }
    v
}

fn qubits(n: usize) -> DimensionFactorization {
    DimensionFactorization::new(vec![2; n]).expect("qubit factorization")
}

/// `(|01> - |10>) / sqrt(2)`.
pub fn singlet<T: Real>() -> DensityMatrix<T> {
    let h = T::FRAC_1_SQRT_2();
    let v = basis_amplitudes(4, &[(1, h), (2, -h)]);
    DensityMatrix::pure(&v, qubits(2)).expect("singlet is a valid state")
}

/// Singlet mixed with asymmetric coloured noise:
/// `p |psi-><psi-| + (1-p)/3 (2 |0><0| (x) I/2 + I/2 (x) |1><1|)`.
pub fn asymmetric<T: Real>(p: T) -> Result<DensityMatrix<T>> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::Parameter {
            name: "p",
            value: p.as_f64(),
            reason: "must lie in [0, 1]",
        });
    }
    let half = T::lit(0.5);
    let ket0 = ComplexMatrix::diag(&[T::one(), T::zero()]);
    let ket1 = ComplexMatrix::diag(&[T::zero(), T::one()]);
    let half_id = ComplexMatrix::identity(2).scale(half);
    let noise = &tensor_product(&ket0, &half_id).scale(T::lit(2.0)) + &tensor_product(&half_id, &ket1);
    let m = &singlet::<T>().matrix().scale(p) + &noise.scale((T::one() - p) / T::lit(3.0));
    DensityMatrix::new(m, qubits(2))
}

/// `sin(theta) |000> + cos(theta) |111>` for `theta` in `[0, pi/2]`.
pub fn ghz<T: Real>(theta: T) -> Result<DensityMatrix<T>> {
    if !(theta >= T::zero() && theta <= T::FRAC_PI_2()) {
        return Err(Error::Parameter {
            name: "theta",
            value: theta.as_f64(),
            reason: "must lie in [0, pi/2]",
        });
    }
    let v = basis_amplitudes(8, &[(0, theta.sin()), (7, theta.cos())]);
    DensityMatrix::pure(&v, qubits(3))
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Parameter {
            name: "d",
            value: d as f64,
            reason: "local dimension must be at least 2",
        });
    }
    Ok(())
}

/// `(1/sqrt(d)) sum_i |iii>` on `[d, d, d]`.
pub fn ghz_d<T: Real>(d: usize) -> Result<DensityMatrix<T>> {
    check_dim(d)?;
    let amp = T::one() / T::from_usize(d).expect("dimension").sqrt();
    let entries: Vec<(usize, T)> = (0..d).map(|i| (i * d * d + i * d + i, amp)).collect();
    let v = basis_amplitudes(d * d * d, &entries);
    DensityMatrix::pure(&v, DimensionFactorization::new(vec![d; 3])?)
}

/// `(1/sqrt(d)) sum_i |ii>` on `[d, d]`.
pub fn max_entangled<T: Real>(d: usize) -> Result<DensityMatrix<T>> {
    check_dim(d)?;
    let amp = T::one() / T::from_usize(d).expect("dimension").sqrt();
    let entries: Vec<(usize, T)> = (0..d).map(|i| (i * d + i, amp)).collect();
    let v = basis_amplitudes(d * d, &entries);
    DensityMatrix::pure(&v, DimensionFactorization::new(vec![d; 2])?)
}

/// Named state family with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum StateFamilySpec {
    #[serde(rename = "singlet")]
    Singlet,
    #[serde(rename = "asymmetric_p")]
    Asymmetric { p: f64 },
    #[serde(rename = "ghz_theta")]
    Ghz { theta: f64 },
    #[serde(rename = "ghz_d")]
    GhzD { d: usize },
    #[serde(rename = "max_entangled_d")]
    MaxEntangled { d: usize },
}

impl StateFamilySpec {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Singlet => "singlet",
            Self::Asymmetric { .. } => "asymmetric_p",
            Self::Ghz { .. } => "ghz_theta",
            Self::GhzD { .. } => "ghz_d",
            Self::MaxEntangled { .. } => "max_entangled_d",
        }
    }

    /// Number of subsystems the family lives on.
    pub fn parties(&self) -> usize {
        match self {
            Self::Singlet | Self::Asymmetric { .. } | Self::MaxEntangled { .. } => 2,
            Self::Ghz { .. } | Self::GhzD { .. } => 3,
        }
    }

    pub fn build<T: Real>(&self) -> Result<DensityMatrix<T>> {
        match *self {
            Self::Singlet => Ok(singlet()),
            Self::Asymmetric { p } => asymmetric(T::lit(p)),
            Self::Ghz { theta } => ghz(T::lit(theta)),
            Self::GhzD { d } => ghz_d(d),
            Self::MaxEntangled { d } => max_entangled(d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

    fn mixed(d: usize) -> ComplexMatrix<f64> {
        ComplexMatrix::identity(d).scale(1.0 / d as f64)
    }

    #[test]
    fn singlet_properties() {
        let s = singlet::<f64>();
        assert!((s.purity() - 1.0).abs() < 1e-15);
        assert!(s.reduced(&[0]).unwrap().matrix().approx_eq(&mixed(2), 1e-15));
        assert!(s.reduced(&[1]).unwrap().matrix().approx_eq(&mixed(2), 1e-15));
        // <01|rho|10>
        assert!((s.matrix()[(1, 2)].re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn asymmetric_limits() {
        let one = asymmetric(1.0f64).unwrap();
        assert!(one.matrix().approx_eq(singlet::<f64>().matrix(), 1e-15));
        let zero = asymmetric(0.0f64).unwrap();
        assert!((zero.matrix().trace().re - 1.0).abs() < 1e-15);
        let rho_a = zero.reduced(&[0]).unwrap();
        assert!(rho_a
            .matrix()
            .approx_eq(&ComplexMatrix::diag(&[5.0 / 6.0, 1.0 / 6.0]), 1e-15));
        assert!(matches!(asymmetric(1.2f64), Err(Error::Parameter { name: "p", .. })));
        assert!(asymmetric(-0.01f64).is_err());
    }

    #[test]
    fn ghz_marginals() {
        let g0 = ghz(0.0f64).unwrap();
        let mut e = vec![0.0; 8];
        e[7] = 1.0;
        assert!(g0.matrix().approx_eq(&ComplexMatrix::diag(&e), 1e-15));

        let g = ghz(FRAC_PI_4).unwrap();
        assert!((g.reduced(&[0]).unwrap().purity() - 0.5).abs() < 1e-14);
        assert!((g.reduced(&[1, 2]).unwrap().purity() - 0.5).abs() < 1e-14);

        let g = ghz(FRAC_PI_6).unwrap();
        assert!((g.reduced(&[0]).unwrap().purity() - 0.625).abs() < 1e-14);

        assert!(ghz(FRAC_PI_2 + 1e-9).is_err());
    }

    #[test]
    fn ghz_bc_marginal_matches_expansion() {
        let theta = 0.3f64;
        let g = ghz(theta).unwrap();
        let bc = g.regroup(DimensionFactorization::new(vec![2, 4]).unwrap()).unwrap();
        let reduced = bc.reduced(&[1]).unwrap();
        let (s, c) = theta.sin_cos();
        let expect = ComplexMatrix::diag(&[s * s, 0.0, 0.0, c * c]);
        assert!(reduced.matrix().approx_eq(&expect, 1e-15));
    }

    #[test]
    fn ghz_d_family() {
        assert!(ghz_d::<f64>(2)
            .unwrap()
            .matrix()
            .approx_eq(ghz(FRAC_PI_4).unwrap().matrix(), 1e-15));
        let g3 = ghz_d::<f64>(3).unwrap();
        assert!((g3.reduced(&[0]).unwrap().purity() - 1.0 / 3.0).abs() < 1e-14);
        let g4 = ghz_d::<f64>(4).unwrap();
        assert!((g4.reduced(&[1, 2]).unwrap().purity() - 0.25).abs() < 1e-14);
        assert!(ghz_d::<f64>(1).is_err());
    }

    #[test]
    fn max_entangled_family() {
        let p2 = max_entangled::<f64>(2).unwrap();
        assert!(p2.reduced(&[0]).unwrap().matrix().approx_eq(&mixed(2), 1e-15));
        assert!((max_entangled::<f64>(5).unwrap().purity() - 1.0).abs() < 1e-13);
        let p4 = max_entangled::<f64>(4).unwrap();
        assert!((p4.reduced(&[0]).unwrap().purity() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn purity_bounds() {
        let dims = DimensionFactorization::new(vec![3]).unwrap();
        let m = DensityMatrix::<f64>::maximally_mixed(dims);
        assert!((m.purity() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constructor_rejects_invalid_matrices() {
        let dims = DimensionFactorization::new(vec![2]).unwrap();
        let bad_trace = ComplexMatrix::<f64>::diag(&[0.5, 0.6]);
        assert!(matches!(DensityMatrix::new(bad_trace, dims.clone()), Err(Error::NotDensity(_))));
        let negative = ComplexMatrix::<f64>::diag(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(negative, dims.clone()), Err(Error::NotDensity(_))));
        let skew = ComplexMatrix::<f64>::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(matches!(DensityMatrix::new(skew, dims.clone()), Err(Error::NotHermitian { .. })));
        let wrong = DimensionFactorization::new(vec![3]).unwrap();
        assert!(DensityMatrix::new(ComplexMatrix::<f64>::diag(&[0.5, 0.5]), wrong).is_err());
    }

    #[test]
    fn regroup_shares_storage() {
        let g = ghz(0.4f64).unwrap();
        let v = g.regroup(DimensionFactorization::new(vec![2, 4]).unwrap()).unwrap();
        assert!(Arc::ptr_eq(&g.matrix, &v.matrix));
        assert!(g.regroup(DimensionFactorization::new(vec![3, 3]).unwrap()).is_err());
    }

    #[test]
    fn family_spec_builds_and_parses() {
        let spec: StateFamilySpec = serde_json::from_str(r#"{"family":"asymmetric_p","p":0.4}"#).unwrap();
        assert_eq!(spec, StateFamilySpec::Asymmetric { p: 0.4 });
        assert_eq!(spec.parties(), 2);
        let rho: DensityMatrix<f64> = spec.build().unwrap();
        assert!(rho.matrix().approx_eq(asymmetric(0.4).unwrap().matrix(), 0.0));
        let spec: StateFamilySpec = serde_json::from_str(r#"{"family":"ghz_d","d":3}"#).unwrap();
        assert_eq!(spec.build::<f64>().unwrap().dims().parts(), &[3, 3, 3]);
        assert!(serde_json::from_str::<StateFamilySpec>(r#"{"family":"w_state"}"#).is_err());
    }

    #[test]
    fn f32_states() {
        let s = asymmetric(0.7f32).unwrap();
        assert!((s.purity() - asymmetric(0.7f64).unwrap().purity() as f32).abs() < 1e-6);
    }
}
