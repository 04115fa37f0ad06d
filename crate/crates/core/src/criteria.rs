//! Correlation matrices, variance bounds and steering gaps.
//!
//! Every criterion has the shape `lhs - penalty > rhs` with
//! `penalty = c_pen * sqrt(xi)` and `rhs = sqrt(left * (right + c_inf * eta))`.
//! [`GapTerms`] captures the state-dependent parts once; evaluating it at an
//! [`ErrorModel`] is cheap, and the ideal criterion is the same evaluation at
//! `xi = 0`.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, pauli, tensor_all, trace_norm, ComplexMatrix, DimensionFactorization};
use crate::observables::{gell_mann_loo, product_loo, ErrorModel, ObservableBasis, Weights};
use crate::random::{derive_seed, ginibre, rng_from_seed};
use crate::scalar::Real;
use crate::states::DensityMatrix;

/// Direction of steering: who measures untrusted (left) and who is trusted (right).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    #[serde(rename = "A->B")]
    AToB,
    #[serde(rename = "B->A")]
    BToA,
    #[serde(rename = "A->BC")]
    AToBC,
    #[serde(rename = "BC->A")]
    BCToA,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::AToB => "A->B",
            Self::BToA => "B->A",
            Self::AToBC => "A->BC",
            Self::BCToA => "BC->A",
        }
    }

    pub fn parties(self) -> usize {
        match self {
            Self::AToB | Self::BToA => 2,
            Self::AToBC | Self::BCToA => 3,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which bipartite inequality to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    /// Trace norm of the full correlation matrix against the purity bound.
    #[default]
    TraceNorm,
    /// Weighted sum of diagonal correlations against the inflated variance bound.
    Weighted,
}

impl std::str::FromStr for Bound {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "trace-norm" | "trace_norm" => Ok(Self::TraceNorm),
            "weighted" => Ok(Self::Weighted),
            other => Err(format!("unknown bound `{other}` (expected trace-norm|weighted)")),
        }
    }
}

/// Real matrix of centered correlations `Tr[(G_i (x) H_j)(rho - rho_a (x) rho_b)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
    pub row_basis: String,
    pub col_basis: String,
}

impl<T: Real> CorrelationMatrix<T> {
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<T>, row_basis: String, col_basis: String) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} correlation matrix",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
            row_basis,
            col_basis,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.cols + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn to_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| Complex::new(self.get(i, j), T::zero()))
    }

    pub fn trace_norm(&self) -> T {
        trace_norm(&self.to_matrix())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }
}

/// The variance quantities behind one evaluated bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VarianceBounds<T> {
    pub lambda_a: T,
    pub lambda_b: T,
    pub lambda_b_inflated: T,
    pub eta_used: T,
}

/// One evaluated inequality. `gap > 0` certifies steering in `scenario`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapReport<T> {
    pub scenario: Scenario,
    pub xi: T,
    pub lhs: T,
    pub penalty: T,
    pub rhs: T,
    pub gap: T,
    pub steerable: bool,
}

/// State-dependent ingredients of a gap, independent of `xi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapTerms<T> {
    pub scenario: Scenario,
    pub lhs: T,
    /// Untrusted-side variance bound.
    pub left: T,
    /// Trusted-side variance bound before inflation.
    pub right: T,
    /// `penalty = penalty_coeff * sqrt(xi)`.
    pub penalty_coeff: T,
    /// `right` grows by `inflation_coeff * eta`.
    pub inflation_coeff: T,
}

impl<T: Real> GapTerms<T> {
    pub fn bounds(&self, model: &ErrorModel<T>) -> VarianceBounds<T> {
        let eta = model.eta();
        VarianceBounds {
            lambda_a: self.left,
            lambda_b: self.right,
            lambda_b_inflated: self.right + self.inflation_coeff * eta,
            eta_used: eta,
        }
    }

    pub fn at(&self, model: &ErrorModel<T>) -> GapReport<T> {
        let b = self.bounds(model);
        let penalty = self.penalty_coeff * model.xi.sqrt();
        let rhs = (b.lambda_a * b.lambda_b_inflated).sqrt();
        let gap = self.lhs - penalty - rhs;
        GapReport {
            scenario: self.scenario,
            xi: model.xi,
            lhs: self.lhs,
            penalty,
            rhs,
            gap,
            steerable: gap > T::zero(),
        }
    }
}

fn clamp_nonneg<T: Real>(x: T) -> T {
    x.max(T::zero())
}

fn usize_t<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("small integer")
}

fn bipartite_dims<T: Real>(rho: &DensityMatrix<T>) -> Result<(usize, usize)> {
    match rho.dims().parts() {
        &[a, b] => Ok((a, b)),
        other => Err(Error::Dimension(format!("expected a bipartite state, got dims {other:?}"))),
    }
}

/// `X = Tr_A[(A (x) I) D]`, so that `Tr[(A (x) B) D] = Tr(B X)`.
fn contract_left<T: Real>(op: &ComplexMatrix<T>, diff: &ComplexMatrix<T>, da: usize, db: usize) -> ComplexMatrix<T> {
    let mut x = ComplexMatrix::zeros(db, db);
    let zero = Complex::new(T::zero(), T::zero());
    for a in 0..da {
        for a2 in 0..da {
            let w = op[(a2, a)];
            if w == zero {
                continue;
            }
            for k in 0..db {
                for k2 in 0..db {
                    x[(k, k2)] += w * diff[(a * db + k, a2 * db + k2)];
                }
            }
        }
    }
    x
}

fn centered<T: Real>(rho: &DensityMatrix<T>) -> Result<ComplexMatrix<T>> {
    let rho_a = rho.reduced(&[0])?;
    let rho_b = rho.reduced(&[1])?;
    Ok(rho.matrix() - &crate::linalg::tensor_product(rho_a.matrix(), rho_b.matrix()))
}

fn check_bases<T: Real>(rho: &DensityMatrix<T>, a: &ObservableBasis<T>, b: &ObservableBasis<T>) -> Result<(usize, usize)> {
    let (da, db) = bipartite_dims(rho)?;
    if a.dim() != da || b.dim() != db {
        return Err(Error::Dimension(format!(
            "bases of dimension ({}, {}) for a state on {}",
            a.dim(),
            b.dim(),
            rho.dims()
        )));
    }
    Ok((da, db))
}

pub fn correlation_matrix<T: Real>(
    rho: &DensityMatrix<T>,
    basis_a: &ObservableBasis<T>,
    basis_b: &ObservableBasis<T>,
) -> Result<CorrelationMatrix<T>> {
    let (da, db) = check_bases(rho, basis_a, basis_b)?;
    let diff = centered(rho)?;
    let mut entries = Vec::with_capacity(basis_a.len() * basis_b.len());
    for op_a in basis_a.operators() {
        let x = contract_left(op_a, &diff, da, db);
        entries.extend(basis_b.operators().iter().map(|op_b| op_b.trace_product(&x).re));
    }
    CorrelationMatrix::from_entries(
        basis_a.len(),
        basis_b.len(),
        entries,
        basis_a.label().to_owned(),
        basis_b.label().to_owned(),
    )
}

/// Diagonal `c_ii` only.
fn correlation_diagonal<T: Real>(
    rho: &DensityMatrix<T>,
    basis_a: &ObservableBasis<T>,
    basis_b: &ObservableBasis<T>,
) -> Result<Vec<T>> {
    let (da, db) = check_bases(rho, basis_a, basis_b)?;
    if basis_a.len() != basis_b.len() {
        return Err(Error::Dimension(format!(
            "paired observables need equal counts, got {} and {}",
            basis_a.len(),
            basis_b.len()
        )));
    }
    let diff = centered(rho)?;
    Ok(basis_a
        .operators()
        .iter()
        .zip(basis_b.operators())
        .map(|(op_a, op_b)| op_b.trace_product(&contract_left(op_a, &diff, da, db)).re)
        .collect())
}

/// `Tr(O^2 rho) - Tr(O rho)^2`.
pub fn variance<T: Real>(op: &ComplexMatrix<T>, rho: &DensityMatrix<T>) -> Result<T> {
    if op.rows() != rho.dim() || op.cols() != rho.dim() {
        return Err(Error::Dimension(format!(
            "{}x{} observable on a {}-dimensional state",
            op.rows(),
            op.cols(),
            rho.dim()
        )));
    }
    let mean = op.trace_product(rho.matrix()).re;
    let second = op.matmul(op).trace_product(rho.matrix()).re;
    Ok(second - mean * mean)
}

/// `sum_i g_i^2 V(G_i, rho)`.
pub fn lambda_a<T: Real>(basis: &ObservableBasis<T>, rho: &DensityMatrix<T>, weights: &Weights<T>) -> Result<T> {
    if weights.len() != basis.len() {
        return Err(Error::Dimension(format!(
            "{} weights for {} observables",
            weights.len(),
            basis.len()
        )));
    }
    basis
        .operators()
        .iter()
        .zip(weights.values())
        .try_fold(T::zero(), |acc, (op, &g)| Ok(acc + g * g * variance(op, rho)?))
}

/// `1 - Tr(rho^2)`, the trusted-side bound for a complete LOO basis.
pub fn lambda_b_loo<T: Real>(rho: &DensityMatrix<T>) -> T {
    clamp_nonneg(T::one() - rho.purity())
}

/// Settings for the ascent behind [`lambda_b_general`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaximizerConfig {
    pub restarts: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for MaximizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            tolerance: 1e-12,
            max_iterations: 500,
            seed: 0x5eed,
        }
    }
}

fn objective<T: Real>(ops: &[ComplexMatrix<T>], v: &[Complex<T>]) -> (T, Vec<T>) {
    let means: Vec<T> = ops.iter().map(|b| b.expectation(v).re).collect();
    (means.iter().map(|m| *m * *m).sum(), means)
}

/// `max_sigma sum_j Tr(B_j sigma)^2 - sum_j Tr(B_j rho)^2`.
///
/// The objective is convex in `sigma`, so the maximum sits on a pure state.
/// Each restart iterates `v <- top eigenvector of sum_j <v|B_j|v> B_j`,
/// which never decreases the objective.
pub fn lambda_b_general<T: Real>(basis: &ObservableBasis<T>, rho: &DensityMatrix<T>) -> Result<T> {
    lambda_b_general_with(basis, rho, &MaximizerConfig::default())
}

pub fn lambda_b_general_with<T: Real>(
    basis: &ObservableBasis<T>,
    rho: &DensityMatrix<T>,
    config: &MaximizerConfig,
) -> Result<T> {
    let d = basis.dim();
    if rho.dim() != d {
        return Err(Error::Dimension(format!(
            "{d}-dimensional basis on a {}-dimensional state",
            rho.dim()
        )));
    }
    let ops = basis.operators();
    let tol = T::lit(config.tolerance);
    let mut best_converged: Option<T> = None;
    let mut best_any = T::neg_infinity();
    for restart in 0..config.restarts {
        let mut rng = rng_from_seed(derive_seed(config.seed, restart as u64));
        let g = ginibre::<T, _>(d, 1, &mut rng);
        let norm = g.as_slice().iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        let mut v: Vec<Complex<T>> = g.as_slice().iter().map(|z| *z / norm).collect();
        let (mut value, mut means) = objective(ops, &v);
        let mut converged = false;
        for _ in 0..config.max_iterations {
            let k = ops
                .iter()
                .zip(&means)
                .fold(ComplexMatrix::zeros(d, d), |acc, (b, &m)| &acc + &b.scale(m));
            let eig = hermitian_eigen(&k)?;
            let next = eig.vectors.column(0);
            let (next_value, next_means) = objective(ops, &next);
            let change = (next_value - value).abs();
            v = next;
            value = next_value;
            means = next_means;
            if change < tol {
                converged = true;
                break;
            }
        }
        debug_assert_eq!(v.len(), d);
        best_any = best_any.max(value);
        if converged {
            best_converged = Some(best_converged.map_or(value, |b: T| b.max(value)));
        }
    }
    let best = best_converged.ok_or(Error::Convergence { best: best_any.as_f64() })?;
    let at_rho: T = ops.iter().map(|b| b.trace_product(rho.matrix()).re.powi(2)).sum();
    Ok(clamp_nonneg(best - at_rho))
}

/// `sum_i |g_i c_ii|` over paired observables.
pub fn weighted_lhs<T: Real>(
    rho: &DensityMatrix<T>,
    basis_a: &ObservableBasis<T>,
    basis_b: &ObservableBasis<T>,
    weights: &Weights<T>,
) -> Result<T> {
    let diag = correlation_diagonal(rho, basis_a, basis_b)?;
    if weights.len() != diag.len() {
        return Err(Error::Dimension(format!(
            "{} weights for {} observable pairs",
            weights.len(),
            diag.len()
        )));
    }
    Ok(diag.iter().zip(weights.values()).map(|(c, g)| (*c * *g).abs()).sum())
}

fn require_complete<T: Real>(basis: &ObservableBasis<T>) -> Result<()> {
    if basis.is_complete() {
        Ok(())
    } else {
        Err(Error::Basis(format!("{} is not a complete LOO basis", basis.label())))
    }
}

fn check_model<T: Real>(model: &ErrorModel<T>, trusted_dim: usize) -> Result<()> {
    if model.dim != trusted_dim {
        return Err(Error::Dimension(format!(
            "error model for dimension {} but the trusted party has dimension {trusted_dim}",
            model.dim
        )));
    }
    Ok(())
}

/// Trace-norm criterion on a bipartite state with complete LOO bases.
///
/// `||C||_1 - d^2 sqrt(xi) > sqrt((d_a - Tr rho_a^2)(1 - Tr rho_b^2 + 4 d^2 eta))`
/// with `d` the trusted dimension.
pub fn bipartite_terms<T: Real>(
    rho: &DensityMatrix<T>,
    basis_a: &ObservableBasis<T>,
    basis_b: &ObservableBasis<T>,
) -> Result<GapTerms<T>> {
    require_complete(basis_a)?;
    require_complete(basis_b)?;
    let (da, db) = check_bases(rho, basis_a, basis_b)?;
    let c = correlation_matrix(rho, basis_a, basis_b)?;
    let d2 = usize_t::<T>(db * db);
    Ok(GapTerms {
        scenario: Scenario::AToB,
        lhs: c.trace_norm(),
        left: clamp_nonneg(usize_t::<T>(da) - rho.reduced(&[0])?.purity()),
        right: lambda_b_loo(&rho.reduced(&[1])?),
        penalty_coeff: d2,
        inflation_coeff: T::lit(4.0) * d2,
    })
}

pub fn bipartite_gap_ideal<T: Real>(
    rho: &DensityMatrix<T>,
    basis_a: &ObservableBasis<T>,
    basis_b: &ObservableBasis<T>,
) -> Result<GapReport<T>> {
    let terms = bipartite_terms(rho, basis_a, basis_b)?;
    Ok(terms.at(&ErrorModel::exact(basis_b.dim())))
}

pub fn bipartite_gap_imprecise<T: Real>(
    rho: &DensityMatrix<T>,
    basis_a: &ObservableBasis<T>,
    basis_b: &ObservableBasis<T>,
    model: &ErrorModel<T>,
) -> Result<GapReport<T>> {
    check_model(model, basis_b.dim())?;
    Ok(bipartite_terms(rho, basis_a, basis_b)?.at(model))
}

/// Weighted criterion on paired observables `(A_i, B_i)`.
///
/// `sum |g_i c_ii| - sqrt(xi) sum |g_i| sqrt(Tr A_i A_i^dagger)
///  > sqrt(Lambda_a(g) (Lambda_b + 2 eta sum_i (1 + |Tr B_i rho_b|)))`.
pub fn weighted_terms<T: Real>(
    rho: &DensityMatrix<T>,
    basis_a: &ObservableBasis<T>,
    basis_b: &ObservableBasis<T>,
    weights: &Weights<T>,
) -> Result<GapTerms<T>> {
    let lhs = weighted_lhs(rho, basis_a, basis_b, weights)?;
    let rho_a = rho.reduced(&[0])?;
    let rho_b = rho.reduced(&[1])?;
    let left = lambda_a(basis_a, &rho_a, weights)?;
    let right = if basis_b.is_complete() {
        lambda_b_loo(&rho_b)
    } else {
        lambda_b_general(basis_b, &rho_b)?
    };
    let penalty_coeff = basis_a
        .operators()
        .iter()
        .zip(weights.values())
        .map(|(op, g)| g.abs() * op.matmul(&op.adjoint()).trace().re.sqrt())
        .sum();
    let inflation_coeff = T::lit(2.0)
        * basis_b
            .operators()
            .iter()
            .map(|op| T::one() + op.trace_product(rho_b.matrix()).re.abs())
            .sum::<T>();
    Ok(GapTerms {
        scenario: Scenario::AToB,
        lhs,
        left: clamp_nonneg(left),
        right,
        penalty_coeff,
        inflation_coeff,
    })
}

pub fn weighted_gap<T: Real>(
    rho: &DensityMatrix<T>,
    basis_a: &ObservableBasis<T>,
    basis_b: &ObservableBasis<T>,
    model: &ErrorModel<T>,
    weights: &Weights<T>,
) -> Result<GapReport<T>> {
    check_model(model, basis_b.dim())?;
    Ok(weighted_terms(rho, basis_a, basis_b, weights)?.at(model))
}

/// Exchanges the two parties of a bipartite state.
pub fn swap_roles<T: Real>(rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    bipartite_dims(rho)?;
    rho.permuted(&[1, 0])
}

fn tripartite_dim<T: Real>(rho: &DensityMatrix<T>) -> Result<usize> {
    match rho.dims().parts() {
        &[a, b, c] if a == b && b == c => Ok(a),
        other => Err(Error::Dimension(format!(
            "expected three subsystems of equal dimension, got {other:?}"
        ))),
    }
}

/// `rho_ABC -> rho_BCA`.
pub fn cyclic_permute<T: Real>(rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    tripartite_dim(rho)?;
    rho.permuted(&[1, 2, 0])
}

/// `Theta_ijk = Tr(rho sigma_i (x) sigma_j (x) sigma_k)` for three qubits,
/// with `sigma_0 = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaTensor<T> {
    values: [T; 64],
}

impl<T: Real> ThetaTensor<T> {
    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        self.values[16 * i + 4 * j + k]
    }

    /// `(1/8) sum Theta_ijk sigma_i (x) sigma_j (x) sigma_k`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let p = pauli::all::<T>();
        let mut out = ComplexMatrix::zeros(8, 8);
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let t = self.get(i, j, k);
                    if t != T::zero() {
                        out = &out + &tensor_all(&[&p[i], &p[j], &p[k]]).scale(t);
                    }
                }
            }
        }
        out.scale(T::lit(0.125))
    }
}

pub fn theta_tensor<T: Real>(rho: &DensityMatrix<T>) -> Result<ThetaTensor<T>> {
    if rho.dims().parts() != [2, 2, 2] {
        return Err(Error::Dimension(format!("expected three qubits, got {}", rho.dims())));
    }
    let p = pauli::all::<T>();
    let mut values = [T::zero(); 64];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                values[16 * i + 4 * j + k] = tensor_all(&[&p[i], &p[j], &p[k]]).trace_product(rho.matrix()).re;
            }
        }
    }
    Ok(ThetaTensor { values })
}

fn tripartite_bases<T: Real>(d: usize) -> Result<(ObservableBasis<T>, ObservableBasis<T>)> {
    let single = gell_mann_loo(d)?;
    let pair = product_loo(&single, &single)?;
    Ok((single, pair))
}

/// `M_pq` between A's LOO and the product LOO on BC.
pub fn a_to_bc_correlation<T: Real>(rho: &DensityMatrix<T>) -> Result<CorrelationMatrix<T>> {
    let d = tripartite_dim(rho)?;
    let (single, pair) = tripartite_bases(d)?;
    correlation_matrix(&rho.regroup(DimensionFactorization::bipartite(d, d * d)?)?, &single, &pair)
}

/// `M'_qp` between the product LOO on BC and A's LOO, built on `rho_BCA`.
pub fn bc_to_a_correlation<T: Real>(rho: &DensityMatrix<T>) -> Result<CorrelationMatrix<T>> {
    let d = tripartite_dim(rho)?;
    let (single, pair) = tripartite_bases(d)?;
    let permuted = cyclic_permute(rho)?.regroup(DimensionFactorization::bipartite(d * d, d)?)?;
    correlation_matrix(&permuted, &pair, &single)
}

/// Qubit-only `M'` from the Pauli expansion of `rho_BCA`:
/// `M'_qp = (Theta'_jkp - Theta'_jk0 Theta'_00p) / (2 sqrt 2)` with `q = 4j + k`.
pub fn bc_to_a_correlation_from_theta<T: Real>(rho: &DensityMatrix<T>) -> Result<CorrelationMatrix<T>> {
    let theta = theta_tensor(&cyclic_permute(rho)?)?;
    let norm = T::one() / (T::lit(2.0) * T::SQRT_2());
    let mut entries = Vec::with_capacity(64);
    for q in 0..16 {
        let (j, k) = (q / 4, q % 4);
        for p in 0..4 {
            entries.push(norm * (theta.get(j, k, p) - theta.get(j, k, 0) * theta.get(0, 0, p)));
        }
    }
    CorrelationMatrix::from_entries(16, 4, entries, "pauli*pauli".into(), "pauli".into())
}

/// `||M||_1 - d^3 sqrt(xi) > sqrt((d - Tr rho_A^2)(1 - Tr rho_BC^2 + 4 d^4 eta))`.
pub fn tripartite_terms_a_to_bc<T: Real>(rho: &DensityMatrix<T>) -> Result<GapTerms<T>> {
    let d = tripartite_dim(rho)?;
    let m = a_to_bc_correlation(rho)?;
    let dt = usize_t::<T>(d);
    Ok(GapTerms {
        scenario: Scenario::AToBC,
        lhs: m.trace_norm(),
        left: clamp_nonneg(dt - rho.reduced(&[0])?.purity()),
        right: lambda_b_loo(&rho.reduced(&[1, 2])?),
        penalty_coeff: dt.powi(3),
        inflation_coeff: T::lit(4.0) * dt.powi(4),
    })
}

/// `||M'||_1 - d^3 sqrt(xi) > sqrt((d^2 - Tr rho_BC^2)(1 - Tr rho_A^2 + 4 d^2 eta))`.
pub fn tripartite_terms_bc_to_a<T: Real>(rho: &DensityMatrix<T>) -> Result<GapTerms<T>> {
    let d = tripartite_dim(rho)?;
    let m = bc_to_a_correlation(rho)?;
    let dt = usize_t::<T>(d);
    Ok(GapTerms {
        scenario: Scenario::BCToA,
        lhs: m.trace_norm(),
        left: clamp_nonneg(dt * dt - rho.reduced(&[1, 2])?.purity()),
        right: lambda_b_loo(&rho.reduced(&[0])?),
        penalty_coeff: dt.powi(3),
        inflation_coeff: T::lit(4.0) * dt * dt,
    })
}

pub fn tripartite_gap_a_to_bc<T: Real>(rho: &DensityMatrix<T>, model: &ErrorModel<T>) -> Result<GapReport<T>> {
    check_model(model, tripartite_dim(rho)?)?;
    Ok(tripartite_terms_a_to_bc(rho)?.at(model))
}

pub fn tripartite_gap_bc_to_a<T: Real>(rho: &DensityMatrix<T>, model: &ErrorModel<T>) -> Result<GapReport<T>> {
    check_model(model, tripartite_dim(rho)?)?;
    Ok(tripartite_terms_bc_to_a(rho)?.at(model))
}

/// Gap terms for any scenario using Gell-Mann LOO bases of the right sizes.
///
/// `B->A` evaluates the bipartite criterion on the swapped state. The
/// weighted bound exists only for bipartite scenarios; `weights` default to
/// all ones.
pub fn scenario_terms<T: Real>(
    rho: &DensityMatrix<T>,
    scenario: Scenario,
    bound: Bound,
    weights: Option<&Weights<T>>,
) -> Result<GapTerms<T>> {
    if rho.dims().len() != scenario.parties() {
        return Err(Error::Dimension(format!(
            "scenario {scenario} needs {} subsystems, state has dims {}",
            scenario.parties(),
            rho.dims()
        )));
    }
    let bipartite = |state: &DensityMatrix<T>| -> Result<GapTerms<T>> {
        let (da, db) = bipartite_dims(state)?;
        let basis_a = gell_mann_loo(da)?;
        let basis_b = gell_mann_loo(db)?;
        match bound {
            Bound::TraceNorm => bipartite_terms(state, &basis_a, &basis_b),
            Bound::Weighted => {
                let unit;
                let w = match weights {
                    Some(w) => w,
                    None => {
                        unit = Weights::unit(basis_a.len());
                        &unit
                    }
                };
                weighted_terms(state, &basis_a, &basis_b, w)
            }
        }
    };
    let tripartite_only = || {
        if bound == Bound::Weighted {
            Err(Error::Unsupported(format!("the weighted bound is bipartite only, not {scenario}")))
        } else {
            Ok(())
        }
    };
    match scenario {
        Scenario::AToB => bipartite(rho),
        Scenario::BToA => Ok(GapTerms {
            scenario: Scenario::BToA,
            ..bipartite(&swap_roles(rho)?)?
        }),
        Scenario::AToBC => {
            tripartite_only()?;
            tripartite_terms_a_to_bc(rho)
        }
        Scenario::BCToA => {
            tripartite_only()?;
            tripartite_terms_bc_to_a(rho)
        }
    }
}

/// Local dimension of the trusted party, which sets the error model's `d`.
pub fn trusted_dim<T: Real>(rho: &DensityMatrix<T>, scenario: Scenario) -> Result<usize> {
    match scenario {
        Scenario::AToB => Ok(bipartite_dims(rho)?.1),
        Scenario::BToA => Ok(bipartite_dims(rho)?.0),
        Scenario::AToBC | Scenario::BCToA => tripartite_dim(rho),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use crate::observables::pauli_loo_qubit;
    use crate::random;
    use crate::states::{asymmetric, ghz, ghz_d, max_entangled, singlet};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn qubit(m: ComplexMatrix<f64>) -> DensityMatrix<f64> {
        DensityMatrix::new(m, DimensionFactorization::new(vec![2]).unwrap()).unwrap()
    }

    fn mixed(d: usize) -> DensityMatrix<f64> {
        DensityMatrix::maximally_mixed(DimensionFactorization::new(vec![d]).unwrap())
    }

    fn product_state() -> DensityMatrix<f64> {
        let dims = DimensionFactorization::new(vec![2]).unwrap();
        let a = random::density::<f64, _>(&dims, &mut rng_from_seed(1)).unwrap();
        let b = random::density::<f64, _>(&dims, &mut rng_from_seed(2)).unwrap();
        a.tensor(&b).unwrap()
    }

    #[test]
    fn singlet_correlations() {
        let p = pauli_loo_qubit::<f64>();
        let c = correlation_matrix(&singlet(), &p, &p).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j && i > 0 { -0.5 } else { 0.0 };
                assert!((c.get(i, j) - expect).abs() < 1e-15, "c[{i}][{j}] = {}", c.get(i, j));
            }
        }
        assert!((c.trace_norm() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn product_state_has_no_correlations() {
        let p = pauli_loo_qubit::<f64>();
        let c = correlation_matrix(&product_state(), &p, &p).unwrap();
        assert!(c.entries().iter().all(|x| x.abs() < 1e-15));
        let g = gell_mann_loo::<f64>(3).unwrap();
        assert!(matches!(correlation_matrix(&product_state(), &g, &p), Err(Error::Dimension(_))));
    }

    #[test]
    fn variance_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let ket0 = qubit(ComplexMatrix::diag(&[1.0, 0.0]));
        assert!((variance(&pauli::z::<f64>().scale(h), &mixed(2)).unwrap() - 0.5).abs() < 1e-15);
        assert!(variance(&pauli::z::<f64>(), &ket0).unwrap().abs() < 1e-15);
        assert!((variance(&pauli::x::<f64>(), &ket0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_examples() {
        let p = pauli_loo_qubit::<f64>();
        assert_eq!(lambda_a(&p, &mixed(2), &Weights::new(vec![0.0; 4]).unwrap()).unwrap(), 0.0);
        assert!((lambda_a(&p, &mixed(2), &Weights::unit(4)).unwrap() - 1.5).abs() < 1e-12);
        let g3 = gell_mann_loo::<f64>(3).unwrap();
        assert!((lambda_a(&g3, &mixed(3), &Weights::unit(9)).unwrap() - (3.0 - 1.0 / 3.0)).abs() < 1e-12);
        assert!(lambda_a(&p, &mixed(2), &Weights::unit(3)).is_err());

        assert!(lambda_b_loo(&qubit(ComplexMatrix::diag(&[1.0, 0.0]))).abs() < 1e-15);
        assert!((lambda_b_loo(&mixed(2)) - 0.5).abs() < 1e-15);
        assert!((lambda_b_loo(&mixed(4)) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn lambda_b_general_examples() {
        let p = pauli_loo_qubit::<f64>();
        assert!((lambda_b_general(&p, &mixed(2)).unwrap() - 0.5).abs() < 1e-8);
        let z = ObservableBasis::new(2, vec![pauli::z::<f64>()], false, "z").unwrap();
        assert!((lambda_b_general(&z, &mixed(2)).unwrap() - 1.0).abs() < 1e-8);
        let zh = ObservableBasis::new(2, vec![pauli::z::<f64>().scale(std::f64::consts::FRAC_1_SQRT_2)], false, "z").unwrap();
        let ket0 = qubit(ComplexMatrix::diag(&[1.0, 0.0]));
        assert!(lambda_b_general(&zh, &ket0).unwrap().abs() < 1e-8);
    }

    #[test]
    fn lambda_b_general_reports_non_convergence() {
        let xz = ObservableBasis::new(2, vec![pauli::x::<f64>(), pauli::z::<f64>()], false, "xz").unwrap();
        let config = MaximizerConfig {
            max_iterations: 0,
            ..MaximizerConfig::default()
        };
        assert!(matches!(
            lambda_b_general_with(&xz, &mixed(2), &config),
            Err(Error::Convergence { .. })
        ));
    }

    #[test]
    fn weighted_lhs_examples() {
        let p = pauli_loo_qubit::<f64>();
        assert!(weighted_lhs(&product_state(), &p, &p, &Weights::unit(4)).unwrap().abs() < 1e-15);
        assert!((weighted_lhs(&singlet(), &p, &p, &Weights::unit(4)).unwrap() - 1.5).abs() < 1e-15);
        let g = Weights::new(vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((weighted_lhs(&singlet(), &p, &p, &g).unwrap() - 0.5).abs() < 1e-15);
        let z = ObservableBasis::new(2, vec![pauli::z::<f64>()], false, "z").unwrap();
        assert!(weighted_lhs(&singlet(), &p, &z, &Weights::unit(4)).is_err());
    }

    #[test]
    fn ideal_bipartite_examples() {
        let p = pauli_loo_qubit::<f64>();
        let r = bipartite_gap_ideal(&singlet(), &p, &p).unwrap();
        assert!((r.gap - (1.5 - 0.75f64.sqrt())).abs() < 1e-12);
        assert!((r.gap - 0.634).abs() < 1e-3);
        assert!(r.steerable);
        assert_eq!(r.scenario, Scenario::AToB);

        let prod = product_state();
        let r = bipartite_gap_ideal(&prod, &p, &p).unwrap();
        let la = 2.0 - prod.reduced(&[0]).unwrap().purity();
        let lb = 1.0 - prod.reduced(&[1]).unwrap().purity();
        assert!((r.gap + (la * lb).sqrt()).abs() < 1e-12);
        assert!(!r.steerable);

        assert!(bipartite_gap_ideal(&asymmetric(0.60).unwrap(), &p, &p).unwrap().gap > 0.0);
        assert!(bipartite_gap_ideal(&asymmetric(0.55).unwrap(), &p, &p).unwrap().gap <= 0.0);
    }

    #[test]
    fn imprecise_bipartite_reduces_at_zero() {
        let p = pauli_loo_qubit::<f64>();
        let rho = asymmetric(0.7).unwrap();
        let ideal = bipartite_gap_ideal(&rho, &p, &p).unwrap();
        let exact = bipartite_gap_imprecise(&rho, &p, &p, &ErrorModel::exact(2)).unwrap();
        assert_eq!(ideal, exact);
        let noisy = bipartite_gap_imprecise(&rho, &p, &p, &ErrorModel::new(1e-6, 2).unwrap()).unwrap();
        assert!(noisy.gap < ideal.gap);
        assert!(bipartite_gap_imprecise(&rho, &p, &p, &ErrorModel::new(1e-6, 3).unwrap()).is_err());
        let z = ObservableBasis::new(2, vec![pauli::z::<f64>().scale(std::f64::consts::FRAC_1_SQRT_2)], true, "z").unwrap();
        assert!(matches!(bipartite_gap_ideal(&rho, &z, &p), Err(Error::Basis(_))));
    }

    #[test]
    fn weighted_gap_examples() {
        let p = pauli_loo_qubit::<f64>();
        let prod = product_state();
        let r = weighted_gap(&prod, &p, &p, &ErrorModel::exact(2), &Weights::unit(4)).unwrap();
        let ideal = bipartite_gap_ideal(&prod, &p, &p).unwrap();
        assert!((r.gap - ideal.gap).abs() < 1e-12);

        let r = weighted_gap(&singlet(), &p, &p, &ErrorModel::exact(2), &Weights::unit(4)).unwrap();
        assert!((r.lhs - 1.5).abs() < 1e-12);
        assert!((r.rhs - 0.75f64.sqrt()).abs() < 1e-12);

        let r = weighted_gap(&singlet(), &p, &p, &ErrorModel::new(1e-4, 2).unwrap(), &Weights::unit(4)).unwrap();
        assert!((r.penalty - 0.04).abs() < 1e-12);
        assert!((r.gap - (r.lhs - r.penalty - r.rhs)).abs() < 1e-15);
    }

    #[test]
    fn inflated_bound_dominates() {
        let p = pauli_loo_qubit::<f64>();
        let terms = weighted_terms(&asymmetric(0.3).unwrap(), &p, &p, &Weights::unit(4)).unwrap();
        let b = terms.bounds(&ErrorModel::new(1e-5, 2).unwrap());
        assert!(b.lambda_b_inflated >= b.lambda_b);
        assert!(b.lambda_a >= 0.0 && b.lambda_b >= 0.0 && b.eta_used >= 0.0);
    }

    #[test]
    fn swap_examples() {
        let s = singlet::<f64>();
        assert!(swap_roles(&s).unwrap().matrix().approx_eq(s.matrix(), 1e-15));
        let dims = DimensionFactorization::new(vec![2]).unwrap();
        let a = random::density::<f64, _>(&dims, &mut rng_from_seed(1)).unwrap();
        let b = random::density::<f64, _>(&dims, &mut rng_from_seed(2)).unwrap();
        let swapped = swap_roles(&a.tensor(&b).unwrap()).unwrap();
        assert!(swapped.matrix().approx_eq(b.tensor(&a).unwrap().matrix(), 1e-15));
        let rho = asymmetric(0.4).unwrap();
        assert!(swap_roles(&swap_roles(&rho).unwrap()).unwrap().matrix().approx_eq(rho.matrix(), 0.0));

        let p = pauli_loo_qubit::<f64>();
        let r = bipartite_gap_ideal(&swap_roles(&asymmetric(0.57).unwrap()).unwrap(), &p, &p).unwrap();
        assert!(r.gap > 0.0);
        assert!(swap_roles(&ghz::<f64>(0.3).unwrap()).is_err());
    }

    #[test]
    fn theta_examples() {
        let g = ghz::<f64>(FRAC_PI_4).unwrap();
        let t = theta_tensor(&g).unwrap();
        assert!((t.get(0, 0, 0) - 1.0).abs() < 1e-15);
        assert!(t.get(3, 3, 3).abs() < 1e-15);
        assert!((t.get(1, 1, 1) - 1.0).abs() < 1e-15);
        for theta in [0.0, 0.3, 1.1] {
            let t = theta_tensor(&ghz::<f64>(theta).unwrap()).unwrap();
            assert!((t.get(0, 3, 3) - 1.0).abs() < 1e-15);
        }
        let rho = random::density::<f64, _>(&DimensionFactorization::new(vec![2; 3]).unwrap(), &mut rng_from_seed(4)).unwrap();
        assert!(theta_tensor(&rho).unwrap().reconstruct().approx_eq(rho.matrix(), 1e-12));
        assert!(theta_tensor(&singlet::<f64>()).is_err());
    }

    #[test]
    fn cyclic_examples() {
        let g = ghz::<f64>(FRAC_PI_4).unwrap();
        assert!(cyclic_permute(&g).unwrap().matrix().approx_eq(g.matrix(), 1e-15));
        let dims = DimensionFactorization::new(vec![2]).unwrap();
        let parts: Vec<_> = (0..3)
            .map(|s| random::density::<f64, _>(&dims, &mut rng_from_seed(10 + s)).unwrap())
            .collect();
        let abc = parts[0].tensor(&parts[1]).unwrap().tensor(&parts[2]).unwrap();
        let bca = parts[1].tensor(&parts[2]).unwrap().tensor(&parts[0]).unwrap();
        assert!(cyclic_permute(&abc).unwrap().matrix().approx_eq(bca.matrix(), 1e-15));
        let thrice = cyclic_permute(&cyclic_permute(&cyclic_permute(&abc).unwrap()).unwrap()).unwrap();
        assert!(thrice.matrix().approx_eq(abc.matrix(), 1e-15));
    }

    #[test]
    fn ghz_a_to_bc() {
        let r = tripartite_gap_a_to_bc(&ghz::<f64>(FRAC_PI_4).unwrap(), &ErrorModel::exact(2)).unwrap();
        assert!((r.lhs - 1.5).abs() < 1e-12);
        assert!((r.rhs - 0.75f64.sqrt()).abs() < 1e-12);
        assert!((r.gap - 0.634).abs() < 1e-3);
        let r = tripartite_gap_a_to_bc(&ghz::<f64>(0.0).unwrap(), &ErrorModel::exact(2)).unwrap();
        // pure product: both sides vanish and the tie is not steerable
        assert!(r.lhs.abs() < 1e-12 && r.gap <= 0.0 && !r.steerable);
        let r = tripartite_gap_a_to_bc(&ghz::<f64>(FRAC_PI_4).unwrap(), &ErrorModel::new(1e-4, 2).unwrap()).unwrap();
        assert!(r.gap < 0.0);
        let t = FRAC_PI_6;
        let closed = 2.0 * t.cos() * t.sin() + 2.0 * (t.cos() * t.sin()).powi(2);
        let r = tripartite_gap_a_to_bc(&ghz::<f64>(t).unwrap(), &ErrorModel::exact(2)).unwrap();
        assert!((r.lhs - closed).abs() < 1e-12);
    }

    #[test]
    fn ghz_bc_to_a() {
        let g = ghz::<f64>(FRAC_PI_4).unwrap();
        let r = tripartite_gap_bc_to_a(&g, &ErrorModel::exact(2)).unwrap();
        assert!((r.rhs - 1.75f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.steerable, r.lhs - r.rhs > 0.0);
        let general = bc_to_a_correlation(&g).unwrap();
        let theta = bc_to_a_correlation_from_theta(&g).unwrap();
        assert!(general.max_abs_diff(&theta) < 1e-12);

        let mut prod = DensityMatrix::maximally_mixed(DimensionFactorization::new(vec![2]).unwrap());
        for _ in 0..2 {
            prod = prod.tensor(&mixed(2)).unwrap();
        }
        let r = tripartite_gap_bc_to_a(&prod, &ErrorModel::exact(2)).unwrap();
        assert!(r.lhs.abs() < 1e-12 && r.gap < 0.0);
    }

    #[test]
    fn maximally_entangled_gaps_positive() {
        for d in 2..=4 {
            let exact = ErrorModel::exact(d);
            let g = gell_mann_loo::<f64>(d).unwrap();
            assert!(bipartite_gap_imprecise(&max_entangled(d).unwrap(), &g, &g, &exact).unwrap().gap > 0.0);
            let ghz = ghz_d::<f64>(d).unwrap();
            assert!(tripartite_gap_a_to_bc(&ghz, &exact).unwrap().gap > 0.0);
            assert!(tripartite_gap_bc_to_a(&ghz, &exact).unwrap().gap > 0.0);
        }
    }

    #[test]
    fn scenario_dispatch() {
        let rho = asymmetric::<f64>(0.7).unwrap();
        let ab = scenario_terms(&rho, Scenario::AToB, Bound::TraceNorm, None).unwrap();
        let ba = scenario_terms(&rho, Scenario::BToA, Bound::TraceNorm, None).unwrap();
        assert_eq!(ab.scenario, Scenario::AToB);
        assert_eq!(ba.scenario, Scenario::BToA);
        assert!((ab.lhs - ba.lhs).abs() < 1e-12);
        assert!(ab.left != ba.left);
        assert!(scenario_terms(&rho, Scenario::AToBC, Bound::TraceNorm, None).is_err());
        let g = ghz::<f64>(0.5).unwrap();
        assert!(matches!(
            scenario_terms(&g, Scenario::AToBC, Bound::Weighted, None),
            Err(Error::Unsupported(_))
        ));
        assert_eq!(trusted_dim(&g, Scenario::BCToA).unwrap(), 2);
    }

    #[test]
    fn scenario_serde() {
        assert_eq!(serde_json::to_string(&Scenario::BCToA).unwrap(), "\"BC->A\"");
        assert_eq!(serde_json::from_str::<Scenario>("\"A->B\"").unwrap(), Scenario::AToB);
        assert_eq!("weighted".parse::<Bound>().unwrap(), Bound::Weighted);
    }

    #[test]
    fn single_precision_gap() {
        let p = pauli_loo_qubit::<f32>();
        let r = bipartite_gap_ideal(&singlet::<f32>(), &p, &p).unwrap();
        assert!((r.gap - (1.5 - 0.75f32.sqrt())).abs() < 1e-5);
    }
}
