//! Dense complex matrix kernel.
//!
//! Row-major storage, no sparse formats: every matrix in this crate is at
//! most 64x64. Hermitian eigendecomposition uses cyclic complex Jacobi
//! rotations; singular values come from one-sided (Hestenes) Jacobi, which
//! never forms `m^dagger m` and so stays accurate for small singular values.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_JACOBI_SWEEPS: usize = 100;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = &self.data[i * self.cols + j];
                write!(f, "{:+.6?}{:+.6?}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries. Entries must be finite.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Row-major real and imaginary parts.
    pub fn from_parts(rows: usize, cols: usize, re: &[T], im: &[T]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::Dimension(format!(
                "{} real parts vs {} imaginary parts",
                re.len(),
                im.len()
            )));
        }
        let data = re.iter().zip(im).map(|(&r, &i)| Complex::new(r, i)).collect();
        Self::new(rows, cols, data)
    }

    pub fn from_real(rows: usize, cols: usize, re: &[T]) -> Result<Self> {
        let data = re.iter().map(|&r| Complex::new(r, T::zero())).collect();
        Self::new(rows, cols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    pub fn diag(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(values[i], T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    /// `|v><w|`.
    pub fn outer(v: &[Complex<T>], w: &[Complex<T>]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn re(&self) -> Vec<T> {
        self.data.iter().map(|z| z.re).collect()
    }

    pub fn im(&self) -> Vec<T> {
        self.data.iter().map(|z| z.im).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, factor: T) -> Self {
        self.map(|z| z * factor)
    }

    pub fn scale_complex(&self, factor: Complex<T>) -> Self {
        self.map(|z| z * factor)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
    }

    /// Largest `|m_ij - conj(m_ji)|`; `+inf` for non-square input.
    pub fn hermitian_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(m + m^dagger) / 2`.
    pub fn hermitize(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * half
        })
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `Tr(self * rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Complex<T> {
        assert_eq!(self.cols, rhs.rows);
        assert_eq!(self.rows, rhs.cols);
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * rhs[(k, i)];
            }
        }
        acc
    }

    /// `<v|self|v>` for a column vector `v`.
    pub fn expectation(&self, v: &[Complex<T>]) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows {
            let mut row = Complex::new(T::zero(), T::zero());
            for j in 0..self.cols {
                row += self[(i, j)] * v[j];
            }
            acc += v[i].conj() * row;
        }
        acc
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| (*a - *b).norm() <= tol)
    }

    fn assert_same_shape(&self, other: &Self) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        self.assert_same_shape(rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        self.assert_same_shape(rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs)
    }
}

/// Ordered subsystem dimensions of a composite space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DimensionFactorization {
    parts: Vec<usize>,
}

impl DimensionFactorization {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Dimension("empty factorization".into()));
        }
        if let Some(&d) = parts.iter().find(|&&d| d < 2) {
            return Err(Error::Dimension(format!("subsystem dimension {d} < 2")));
        }
        Ok(Self { parts })
    }

    pub fn bipartite(da: usize, db: usize) -> Result<Self> {
        Self::new(vec![da, db])
    }

    #[inline]
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().product()
    }

    /// Merges subsystems `[0, at)` and `[at, n)` into a two-party split.
    pub fn split_at(&self, at: usize) -> Result<Self> {
        if at == 0 || at >= self.parts.len() {
            return Err(Error::Dimension(format!(
                "cannot split {} subsystems at {at}",
                self.parts.len()
            )));
        }
        Self::new(vec![
            self.parts[..at].iter().product(),
            self.parts[at..].iter().product(),
        ])
    }

    fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.parts.len()];
        for (slot, &d) in out.iter_mut().zip(&self.parts).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }
}

impl fmt::Display for DimensionFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

fn compose(digits: impl Iterator<Item = (usize, usize)>) -> usize {
    digits.fold(0, |acc, (digit, radix)| acc * radix + digit)
}

/// Kronecker product `a (x) b`.
pub fn tensor_product<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ai in 0..a.rows {
        for aj in 0..a.cols {
            let x = a[(ai, aj)];
            if x.re == T::zero() && x.im == T::zero() {
                continue;
            }
            for bi in 0..b.rows {
                for bj in 0..b.cols {
                    out[(ai * b.rows + bi, aj * b.cols + bj)] = x * b[(bi, bj)];
                }
            }
        }
    }
    out
}

/// Left-to-right Kronecker product of all factors.
pub fn tensor_all<T: Real>(factors: &[&ComplexMatrix<T>]) -> ComplexMatrix<T> {
    let (first, rest) = factors.split_first().expect("at least one factor");
    rest.iter()
        .fold((*first).clone(), |acc, f| tensor_product(&acc, f))
}

fn check_square_factorization<T: Real>(m: &ComplexMatrix<T>, dims: &DimensionFactorization) -> Result<()> {
    if !m.is_square() || m.rows != dims.total() {
        return Err(Error::Dimension(format!(
            "{}x{} matrix does not match factorization {dims}",
            m.rows, m.cols
        )));
    }
    Ok(())
}

/// Reduced matrix on the subsystems listed in `keep` (in increasing order).
pub fn partial_trace<T: Real>(
    m: &ComplexMatrix<T>,
    dims: &DimensionFactorization,
    keep: &[usize],
) -> Result<ComplexMatrix<T>> {
    check_square_factorization(m, dims)?;
    let n = dims.len();
    if let Some(&bad) = keep.iter().find(|&&k| k >= n) {
        return Err(Error::Dimension(format!(
            "subsystem {bad} does not exist in {dims}"
        )));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    let kept: Vec<bool> = (0..n).map(|s| keep_sorted.contains(&s)).collect();
    let out_dim: usize = keep_sorted.iter().map(|&s| dims.parts[s]).product();

    let total = dims.total();
    let split: Vec<(usize, usize)> = (0..total)
        .map(|i| {
            let digits = dims.digits(i);
            let k = compose(
                digits
                    .iter()
                    .zip(&dims.parts)
                    .zip(&kept)
                    .filter(|(_, &kp)| kp)
                    .map(|((&dg, &r), _)| (dg, r)),
            );
            let t = compose(
                digits
                    .iter()
                    .zip(&dims.parts)
                    .zip(&kept)
                    .filter(|(_, &kp)| !kp)
                    .map(|((&dg, &r), _)| (dg, r)),
            );
            (k, t)
        })
        .collect();

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for i in 0..total {
        let (ki, ti) = split[i];
        for j in 0..total {
            let (kj, tj) = split[j];
            if ti == tj {
                out[(ki, kj)] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Reorders subsystems: output subsystem `k` is input subsystem `order[k]`.
pub fn permute_subsystems<T: Real>(
    m: &ComplexMatrix<T>,
    dims: &DimensionFactorization,
    order: &[usize],
) -> Result<(ComplexMatrix<T>, DimensionFactorization)> {
    check_square_factorization(m, dims)?;
    let n = dims.len();
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::Dimension(format!(
            "permutation of length {} for {n} subsystems",
            order.len()
        )));
    }
    for &o in order {
        if o >= n || seen[o] {
            return Err(Error::Dimension(format!("{order:?} is not a permutation")));
        }
        seen[o] = true;
    }
    let new_dims = DimensionFactorization::new(order.iter().map(|&o| dims.parts[o]).collect())?;
    let total = dims.total();
    let map: Vec<usize> = (0..total)
        .map(|i| {
            let digits = dims.digits(i);
            compose(order.iter().map(|&o| (digits[o], dims.parts[o])))
        })
        .collect();
    let mut out = ComplexMatrix::zeros(total, total);
    for i in 0..total {
        for j in 0..total {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    Ok((out, new_dims))
}

/// Eigenvalues (descending) and matching column eigenvectors.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V diag(values) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let scaled = ComplexMatrix::from_fn(self.vectors.rows, self.vectors.cols, |i, j| {
            self.vectors[(i, j)] * self.values[j]
        });
        scaled.matmul(&self.vectors.adjoint())
    }
}

/// Unitary acting on coordinates `p < q` that zeroes the `(p, q)` entry of
/// the Hermitian 2x2 block `[[app, apq], [conj(apq), aqq]]`.
///
/// Returned as `(g_pp, g_pq, g_qp, g_qq)`.
fn jacobi_rotation<T: Real>(app: T, aqq: T, apq: Complex<T>) -> [Complex<T>; 4] {
    let r = apq.norm();
    let e = (apq / r).conj();
    let theta = (aqq - app) / (r + r);
    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let zero = T::zero();
    [
        Complex::new(c, zero),
        Complex::new(s, zero),
        e * (-s),
        e * c,
    ]
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.
///
/// Inputs within `T::tolerance()` of Hermitian are symmetrized first.
pub fn hermitian_eigen<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let deviation = m.hermitian_deviation();
    if deviation > T::tolerance() {
        return Err(Error::NotHermitian {
            deviation: deviation.as_f64(),
        });
    }
    let n = m.rows;
    let mut a = m.hermitize();
    let mut v = ComplexMatrix::<T>::identity(n);
    let scale_sq: T = a.data.iter().map(|z| z.norm_sqr()).sum();
    let eps = T::epsilon();

    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= eps * eps * scale_sq || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm_sqr() == T::zero() {
                    continue;
                }
                let [gpp, gpq, gqp, gqq] = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq);
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * gpp + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * gqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                let zero = Complex::new(T::zero(), T::zero());
                a[(p, q)] = zero;
                a[(q, p)] = zero;
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * gpp + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * gqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Singular values in descending order (one-sided Jacobi).
pub fn singular_values<T: Real>(m: &ComplexMatrix<T>) -> Vec<T> {
    let work = if m.rows >= m.cols { m.clone() } else { m.adjoint() };
    let (rows, cols) = (work.rows, work.cols);
    let mut columns: Vec<Vec<Complex<T>>> = (0..cols).map(|j| work.column(j)).collect();
    let eps = T::epsilon();

    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (left, right) = columns.split_at_mut(q);
                let xp = &mut left[p];
                let xq = &mut right[0];
                let alpha: T = xp.iter().map(|z| z.norm_sqr()).sum();
                let beta: T = xq.iter().map(|z| z.norm_sqr()).sum();
                if alpha == T::zero() || beta == T::zero() {
                    continue;
                }
                let gamma = xp
                    .iter()
                    .zip(xq.iter())
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b);
                if gamma.norm() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let [gpp, gpq, gqp, gqq] = jacobi_rotation(alpha, beta, gamma);
                for k in 0..rows {
                    let a = xp[k];
                    let b = xq[k];
                    xp[k] = a * gpp + b * gqp;
                    xq[k] = a * gpq + b * gqq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<T> = columns
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt())
        .collect();
    values.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    values
}

/// Sum of singular values. Values below `T::rank_cutoff()` times the largest
/// are dropped as exact zeros.
pub fn trace_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    let values = singular_values(m);
    let Some(&largest) = values.first() else {
        return T::zero();
    };
    let cutoff = largest * T::rank_cutoff();
    values.into_iter().filter(|&s| s >= cutoff && s > T::zero()).sum()
}

/// `Tr(m m^dagger)`: the squared Frobenius norm.
pub fn frobenius_sq<T: Real>(m: &ComplexMatrix<T>) -> T {
    m.data.iter().map(|z| z.norm_sqr()).sum()
}

/// Hilbert-Schmidt inner product `Tr(a^dagger b)`.
pub fn hs_inner<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Complex<T> {
    assert!(a.rows == b.rows && a.cols == b.cols);
    a.data
        .iter()
        .zip(&b.data)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

/// Named 2x2 matrices used throughout the tests and state factories.
pub mod pauli {
    use super::ComplexMatrix;
    use crate::scalar::Real;
    use num_complex::Complex;

    fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
        Complex::new(T::lit(re), T::lit(im))
    }

    pub fn identity<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::identity(2)
    }

    pub fn x<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::new(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
    }

    pub fn y<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::new(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap()
    }

    pub fn z<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::diag(&[T::one(), -T::one()])
    }

    /// `[I, X, Y, Z]`, unnormalized.
    pub fn all<T: Real>() -> [ComplexMatrix<T>; 4] {
        [identity(), x(), y(), z()]
    }
}
