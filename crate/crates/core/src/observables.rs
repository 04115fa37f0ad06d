//! Local orthonormal operator (LOO) bases and the measurement-imprecision
//! model.
//!
//! Imprecision is a per-observable budget `xi` on the squared Frobenius
//! distance `Tr((tau - sigma)(tau - sigma)^dagger)` between the intended
//! observable `sigma` and the one a device actually implements, `tau`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{frobenius_sq, hs_inner, tensor_product, ComplexMatrix};
use crate::random::{self, rng_from_seed};
use crate::scalar::Real;
use crate::states::DensityMatrix;

/// Ordered Hermitian operators on one subsystem.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableBasis<T> {
    dim: usize,
    operators: Vec<ComplexMatrix<T>>,
    loo: bool,
    label: String,
}

impl<T: Real> ObservableBasis<T> {
    /// Checks Hermiticity of every operator and, when `loo` is set,
    /// Hilbert-Schmidt orthonormality of the whole set.
    pub fn new(dim: usize, operators: Vec<ComplexMatrix<T>>, loo: bool, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if operators.is_empty() {
            return Err(Error::Basis(format!("{label}: no operators")));
        }
        let tol = T::tolerance();
        for (i, op) in operators.iter().enumerate() {
            if op.rows() != dim || op.cols() != dim {
                return Err(Error::Dimension(format!(
                    "{label}: operator {i} is {}x{}, expected {dim}x{dim}",
                    op.rows(),
                    op.cols()
                )));
            }
            let dev = op.hermitian_deviation();
            if dev > tol {
                return Err(Error::NotHermitian { deviation: dev.as_f64() });
            }
        }
        if loo {
            if operators.len() > dim * dim {
                return Err(Error::Basis(format!(
                    "{label}: {} operators cannot be orthonormal in dimension {dim}",
                    operators.len()
                )));
            }
            for (i, a) in operators.iter().enumerate() {
                for (j, b) in operators.iter().enumerate().skip(i) {
                    let g = hs_inner(a, b);
                    let target = if i == j { T::one() } else { T::zero() };
                    if (g - Complex::new(target, T::zero())).norm() > tol {
                        return Err(Error::Basis(format!(
                            "{label}: Tr(G_{i} G_{j}) = {g} is not {target}"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            dim,
            operators,
            loo,
            label,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn operators(&self) -> &[ComplexMatrix<T>] {
        &self.operators
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    #[inline]
    pub fn is_loo(&self) -> bool {
        self.loo
    }

    /// Orthonormal and spanning all `dim x dim` matrices.
    pub fn is_complete(&self) -> bool {
        self.loo && self.operators.len() == self.dim * self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Real part of `Tr(G_i G_j)`.
    pub fn gram(&self) -> Vec<Vec<T>> {
        self.operators
            .iter()
            .map(|a| self.operators.iter().map(|b| hs_inner(a, b).re).collect())
            .collect()
    }

    /// The same basis conjugated by a unitary: `U G U^dagger`.
    pub fn conjugated(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        let ud = u.adjoint();
        let ops = self
            .operators
            .iter()
            .map(|g| u.matmul(g).matmul(&ud).hermitize())
            .collect();
        Self::new(self.dim, ops, self.loo, format!("{}^U", self.label))
    }
}

/// `(I, X, Y, Z) / sqrt(2)`.
pub fn pauli_loo_qubit<T: Real>() -> ObservableBasis<T> {
    let h = T::FRAC_1_SQRT_2();
    let ops = crate::linalg::pauli::all::<T>().iter().map(|p| p.scale(h)).collect();
    ObservableBasis::new(2, ops, true, "pauli").expect("normalized Paulis form an LOO basis")
}

/// Hermitian generalized Gell-Mann basis normalized to `Tr(G^2) = 1`.
///
/// Order: `I/sqrt(d)`, symmetric `(|j><k| + |k><j|)/sqrt(2)` for `j < k`
/// lexicographic, antisymmetric `(-i|j><k| + i|k><j|)/sqrt(2)` in the same
/// order, then the diagonal generators for `l = 1..d-1`. At `d = 2` this is
/// exactly `(I, X, Y, Z)/sqrt(2)`.
pub fn gell_mann_loo<T: Real>(d: usize) -> Result<ObservableBasis<T>> {
    if d < 2 {
        return Err(Error::Parameter {
            name: "d",
            value: d as f64,
            reason: "local dimension must be at least 2",
        });
    }
    let zero = Complex::new(T::zero(), T::zero());
    let h = T::FRAC_1_SQRT_2();
    let mut ops = Vec::with_capacity(d * d);
    ops.push(ComplexMatrix::identity(d).scale(T::one() / T::from_usize(d).unwrap().sqrt()));
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = Complex::new(h, T::zero());
            m[(k, j)] = Complex::new(h, T::zero());
            ops.push(m);
        }
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = Complex::new(T::zero(), -h);
            m[(k, j)] = Complex::new(T::zero(), h);
            ops.push(m);
        }
    }
    for l in 1..d {
        let lf = T::from_usize(l).unwrap();
        let norm = T::one() / (lf * (lf + T::one())).sqrt();
        let mut m = ComplexMatrix::zeros(d, d);
        for i in 0..l {
            m[(i, i)] = Complex::new(norm, T::zero());
        }
        m[(l, l)] = Complex::new(-lf * norm, T::zero());
        debug_assert!(m[(0, 1)] == zero || l == 0);
        ops.push(m);
    }
    ObservableBasis::new(d, ops, true, format!("gell-mann({d})"))
}

/// Products `a_j (x) b_k` indexed by `q = j * b.len() + k`.
pub fn product_loo<T: Real>(a: &ObservableBasis<T>, b: &ObservableBasis<T>) -> Result<ObservableBasis<T>> {
    if !a.is_loo() || !b.is_loo() {
        return Err(Error::Basis(format!(
            "product of {} and {} requires two LOO bases",
            a.label(),
            b.label()
        )));
    }
    let ops = a
        .operators()
        .iter()
        .flat_map(|x| b.operators().iter().map(move |y| tensor_product(x, y)))
        .collect();
    ObservableBasis::new(a.dim() * b.dim(), ops, true, format!("{}*{}", a.label(), b.label()))
}

/// Real weights `g_i`, one per observable.
#[derive(Clone, Debug, PartialEq)]
pub struct Weights<T>(Vec<T>);

impl<T: Real> Weights<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parameter {
                name: "weights",
                value: v.as_f64(),
                reason: "weights must be finite",
            });
        }
        Ok(Self(values))
    }

    pub fn unit(n: usize) -> Self {
        Self(vec![T::one(); n])
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// How the propagated error amplitude enters the inflated variance terms.
///
/// `Propagated` is `d^2 (xi/2 + sqrt(2 d xi))`, the bound on
/// `|Tr(rho tau) - Tr(rho sigma)|` for a unit-trace state. `Unscaled` drops
/// the `d^2` prefactor and leaves `xi/2 + sqrt(2 d xi)`; the published
/// figure data for the modified inequalities was computed this way.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaScaling {
    #[default]
    Propagated,
    Unscaled,
}

impl std::str::FromStr for EtaScaling {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "propagated" => Ok(Self::Propagated),
            "unscaled" => Ok(Self::Unscaled),
            other => Err(format!("unknown eta scaling `{other}` (expected propagated|unscaled)")),
        }
    }
}

/// Imprecision budget for one measuring party of local dimension `dim`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorModel<T> {
    pub xi: T,
    pub dim: usize,
    pub scaling: EtaScaling,
}

impl<T: Real> ErrorModel<T> {
    pub fn new(xi: T, dim: usize) -> Result<Self> {
        if !(xi >= T::zero()) || !xi.is_finite() {
            return Err(Error::Parameter {
                name: "xi",
                value: xi.as_f64(),
                reason: "imprecision budget must be finite and non-negative",
            });
        }
        if dim < 2 {
            return Err(Error::Parameter {
                name: "dim",
                value: dim as f64,
                reason: "local dimension must be at least 2",
            });
        }
        Ok(Self {
            xi,
            dim,
            scaling: EtaScaling::Propagated,
        })
    }

    /// Perfect measurements.
    pub fn exact(dim: usize) -> Self {
        Self::new(T::zero(), dim).expect("valid dimension")
    }

    pub fn with_scaling(mut self, scaling: EtaScaling) -> Self {
        self.scaling = scaling;
        self
    }

    pub fn with_xi(&self, xi: T) -> Result<Self> {
        Ok(Self::new(xi, self.dim)?.with_scaling(self.scaling))
    }

    fn dim_t(&self) -> T {
        T::from_usize(self.dim).unwrap()
    }

    /// `xi/2 + sqrt(2 d xi)`.
    fn base(&self) -> T {
        let two = T::lit(2.0);
        self.xi / two + (two * self.dim_t() * self.xi).sqrt()
    }

    pub fn eta(&self) -> T {
        match self.scaling {
            EtaScaling::Propagated => self.dim_t() * self.dim_t() * self.base(),
            EtaScaling::Unscaled => self.base(),
        }
    }

    /// Bound on `|r_i - q_i|` for tomography coefficients: `d (xi/2 + sqrt(2 d xi))`.
    pub fn coeff_bound(&self) -> T {
        self.dim_t() * self.base()
    }
}

pub fn eta<T: Real>(model: &ErrorModel<T>) -> T {
    model.eta()
}

pub fn coeff_bound<T: Real>(model: &ErrorModel<T>) -> T {
    model.coeff_bound()
}

/// Intended observables together with the ones a device implements.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbedBasis<T> {
    pub targets: ObservableBasis<T>,
    pub implemented: Vec<ComplexMatrix<T>>,
    pub deviations: Vec<T>,
}

/// Adds a seeded random Hermitian error of squared Frobenius norm exactly
/// `xi` to every target operator.
pub fn perturb_basis<T: Real>(targets: &ObservableBasis<T>, model: &ErrorModel<T>, seed: u64) -> Result<PerturbedBasis<T>> {
    if model.dim != targets.dim() {
        return Err(Error::Dimension(format!(
            "error model for dimension {} applied to a {}-dimensional basis",
            model.dim,
            targets.dim()
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut implemented = Vec::with_capacity(targets.len());
    let mut deviations = Vec::with_capacity(targets.len());
    for sigma in targets.operators() {
        let delta = random::hermitian_with_norm(targets.dim(), model.xi, &mut rng);
        let tau = sigma + &delta;
        deviations.push(frobenius_sq(&(&tau - sigma)));
        implemented.push(tau);
    }
    Ok(PerturbedBasis {
        targets: targets.clone(),
        implemented,
        deviations,
    })
}

/// `(1/d) Tr(rho tau_i^dagger)` for each operator.
pub fn tomography_coeffs<T: Real>(rho: &DensityMatrix<T>, operators: &[ComplexMatrix<T>]) -> Result<Vec<T>> {
    let d = rho.dim();
    let inv_d = T::one() / T::from_usize(d).unwrap();
    operators
        .iter()
        .enumerate()
        .map(|(i, op)| {
            if op.rows() != d || op.cols() != d {
                return Err(Error::Dimension(format!(
                    "operator {i} is {}x{}, state is {d}x{d}",
                    op.rows(),
                    op.cols()
                )));
            }
            // Tr(rho tau^dagger) = conj(<tau, rho>)
            Ok(hs_inner(op, rho.matrix()).re * inv_d)
        })
        .collect()
}
