//! Dense complex matrices and the spectral primitives the bound formulas need.
//!
//! Everything here is deterministic: the Hermitian eigensolver runs cyclic
//! Jacobi sweeps in a fixed pivot order, and the numerical-radius sweep
//! reduces angle candidates in a fixed tie-break order, so identical inputs
//! always give identical outputs (also under the `parallel` feature).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::par;

/// Errors from matrix-level operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (relative asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e} below clamp threshold)")]
    NotPsd(f64),
    #[error("spectral function produced a non-finite value at {0:.3e}")]
    NonFiniteFunctionValue(f64),
    #[error("entry ({0},{1}) is negative or non-real")]
    NegativeEntry(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("angle grid must have at least {min} points, got {got}")]
    TooFewAngles { min: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Relative asymmetry allowed before a matrix is rejected as non-Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues of nominally PSD matrices are clamped to zero above this
/// (relative) floor and rejected below it.
pub const PSD_CLAMP_REL: f64 = 1e-10;
/// Off-diagonal Frobenius threshold for Jacobi convergence, relative to the
/// Frobenius norm of the input.
pub const JACOBI_OFF_REL: f64 = 1e-13;
/// Sweep budget for the Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 60;
/// Default angle-grid size for the numerical radius sweep.
pub const DEFAULT_ANGLES: usize = 1024;

/// Dense complex matrix in row-major order. The universal operator
/// representation for this crate; rectangular shapes are allowed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(rows * cols, entries.len(), "entry count must be rows*cols");
        assert!(
            entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "matrix entries must be finite"
        );
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Complex64::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Matrix unit E_ij: single 1 at (i, j).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = Complex64::ONE;
        m
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        Self::diag(&values.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>())
    }

    /// Build from nested rows of real entries.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.norm_sqr() == 0.0)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        let entries = self.entries.iter().map(|&z| z * s).collect();
        CMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale_re(&self, s: f64) -> CMatrix {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| a + b).collect();
        CMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| a - b).collect();
        CMatrix { rows: self.rows, cols: self.cols, entries }
    }

    /// Matrix product. Panics on inner-dimension mismatch (shape errors at the
    /// operator level are reported before multiplication is attempted).
    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch in mul");
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = vec![Complex64::ZERO; m * n];
        par::for_each_row(&mut out, n, |i, out_row| {
            let a_row = self.row(i);
            for (kk, &a) in a_row.iter().take(k).enumerate() {
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let b_row = other.row(kk);
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        });
        CMatrix { rows: m, cols: n, entries: out }
    }

    /// y = A x.
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// A^k for integer k >= 0.
    pub fn pow(&self, k: usize) -> CMatrix {
        assert!(self.is_square(), "pow requires a square matrix");
        let mut out = CMatrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// A* A.
    pub fn gram(&self) -> CMatrix {
        self.adjoint().mul(self)
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest |a_ij - conj(a_ji)| over all pairs.
    pub fn asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && self.asymmetry() <= HERMITIAN_TOL * self.frobenius().max(1.0)
    }

    /// (A + A*)/2.
    pub fn hermitian_part(&self) -> CMatrix {
        self.add(&self.adjoint()).scale_re(0.5)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Eigendecomposition of a Hermitian matrix: `a = V diag(eigenvalues) V*`,
/// eigenvalues ascending, `V` unitary with eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermEig {
    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// V diag(f(lambda)) V*.
    pub fn rebuild_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let mut scaled = v.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let flam = f(lam);
            for i in 0..n {
                scaled[(i, j)] = v[(i, j)] * flam;
            }
        }
        scaled.mul(&v.adjoint())
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi sweeps.
///
/// Pivots run in fixed row-major order; convergence is declared when the
/// off-diagonal Frobenius mass drops below `1e-13 * ||a||_F`, within a budget
/// of 60 sweeps. Small inputs diagonalize to high relative accuracy and the
/// output is bit-reproducible for identical input.
pub fn herm_eig(a: &CMatrix) -> Result<HermEig> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows, cols: a.cols });
    }
    let scale = a.frobenius();
    let asym = a.asymmetry();
    if asym > HERMITIAN_TOL * scale.max(1.0) {
        return Err(LinalgError::NotHermitian(asym / scale.max(1.0)));
    }

    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let off_target = JACOBI_OFF_REL * scale;

    let off = |m: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off(&m) <= off_target;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = m[(p, q)];
                let h = g.norm();
                if h == 0.0 {
                    continue;
                }
                let phi = g / h; // unimodular phase of the pivot entry
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Eigenvector of the real 2x2 [[app, h], [h, aqq]] for its
                // larger eigenvalue; pick the algebraically safer form.
                let mid = 0.5 * (app + aqq);
                let rad = (0.5 * (app - aqq)).hypot(h);
                let lam_hi = mid + rad;
                let (mut c, mut s) = if (lam_hi - app).abs() >= (lam_hi - aqq).abs() {
                    (h, lam_hi - app)
                } else {
                    (lam_hi - aqq, h)
                };
                let norm = c.hypot(s);
                c /= norm;
                s /= norm;
                // Columns p,q of the update are (c, phi_bar*s) and (-s, phi_bar*c).
                let phib = phi.conj();
                for k in 0..n {
                    let mp = m[(k, p)];
                    let mq = m[(k, q)];
                    m[(k, p)] = mp * c + mq * (phib * s);
                    m[(k, q)] = mp * (-s) + mq * (phib * c);
                }
                for k in 0..n {
                    let mp = m[(p, k)];
                    let mq = m[(q, k)];
                    m[(p, k)] = mp * c + mq * (phi * s);
                    m[(q, k)] = mp * (-s) + mq * (phi * c);
                }
                m[(p, q)] = Complex64::ZERO;
                m[(q, p)] = Complex64::ZERO;
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
                for k in 0..n {
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * c + vq * (phib * s);
                    v[(k, q)] = vp * (-s) + vq * (phib * c);
                }
            }
        }
        converged = off(&m) <= off_target;
    }
    if !converged {
        return Err(LinalgError::NoConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap().then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(HermEig { eigenvalues, eigenvectors: vectors })
}

/// Square root of a PSD Hermitian matrix. Eigenvalues in
/// `[-1e-10*||a||, 0)` are clamped to zero; anything lower is an error.
pub fn sqrt_psd(a: &CMatrix) -> Result<CMatrix> {
    apply_spectral_fn(a, f64::sqrt)
}

/// |a| = (a* a)^(1/2); accepts rectangular input, result is cols x cols.
pub fn abs_op(a: &CMatrix) -> Result<CMatrix> {
    sqrt_psd(&a.gram())
}

/// V diag(f(lambda)) V* for PSD Hermitian `a`. `f` must be finite on the
/// (clamped) spectrum.
pub fn apply_spectral_fn(a: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let eig = herm_eig(a)?;
    let clamp = PSD_CLAMP_REL * a.frobenius().max(f64::MIN_POSITIVE);
    let mut vals = Vec::with_capacity(eig.eigenvalues.len());
    for &lam in &eig.eigenvalues {
        if lam < -clamp {
            return Err(LinalgError::NotPsd(lam));
        }
        let lam = lam.max(0.0);
        let flam = f(lam);
        if !flam.is_finite() {
            return Err(LinalgError::NonFiniteFunctionValue(lam));
        }
        vals.push(flam);
    }
    let v = &eig.eigenvectors;
    let n = v.rows();
    let mut scaled = v.clone();
    for (j, &flam) in vals.iter().enumerate() {
        for i in 0..n {
            scaled[(i, j)] = v[(i, j)] * flam;
        }
    }
    Ok(scaled.mul(&v.adjoint()))
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn lambda_max(a: &CMatrix) -> Result<f64> {
    Ok(herm_eig(a)?.lambda_max())
}

/// Operator (spectral) norm: largest singular value.
pub fn op_norm(a: &CMatrix) -> Result<f64> {
    if a.rows == 0 || a.cols == 0 || a.is_zero() {
        return Ok(0.0);
    }
    // Work with the smaller Gram matrix of the two.
    let g = if a.cols <= a.rows { a.gram() } else { a.adjoint().gram() };
    Ok(lambda_max(&g)?.max(0.0).sqrt())
}

fn half_rotated_hermitian_lambda_max(a: &CMatrix, theta: f64) -> Result<f64> {
    let rot = a.scale(Complex64::from_polar(1.0, theta));
    lambda_max(&rot.hermitian_part())
}

/// Numerical radius by an angle sweep: max over theta of the top eigenvalue
/// of the Hermitian part of `e^{i theta} a`, over a uniform grid of
/// `angles` points followed by golden-section refinement around the best
/// angle (theta tolerance 1e-10). The result is a lower estimate that
/// converges to w(a) and is exact at the refined stationary maximizer.
pub fn numerical_radius(a: &CMatrix, angles: usize) -> Result<f64> {
    numerical_radius_impl(a, angles, false)
}

/// Sequential variant of [`numerical_radius`]; same result, used by the
/// benchmark suite to compare against the data-parallel sweep.
pub fn numerical_radius_seq(a: &CMatrix, angles: usize) -> Result<f64> {
    numerical_radius_impl(a, angles, true)
}

fn numerical_radius_impl(a: &CMatrix, angles: usize, sequential: bool) -> Result<f64> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows, cols: a.cols });
    }
    if angles < 64 {
        return Err(LinalgError::TooFewAngles { min: 64, got: angles });
    }
    if a.is_zero() {
        return Ok(0.0);
    }
    let step = 2.0 * std::f64::consts::PI / angles as f64;
    let eval = |idx: usize| -> Result<f64> { half_rotated_hermitian_lambda_max(a, idx as f64 * step) };
    let results = par::try_map_indexed(angles, sequential, eval)?;
    let (best_idx, best_val) = par::argmax(&results);

    // Golden-section polish on the bracket around the best grid angle.
    let center = best_idx as f64 * step;
    let f = |theta: f64| half_rotated_hermitian_lambda_max(a, theta).unwrap_or(f64::NEG_INFINITY);
    let (_, polished) = golden_max(f, center - step, center + step, 1e-10, 200);
    Ok(best_val.max(polished))
}

/// Numerical radius of an entrywise-nonnegative real matrix via the top
/// eigenvalue of its symmetrization (A + A^T)/2.
pub fn numerical_radius_entrywise_nonneg(a: &CMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows, cols: a.cols });
    }
    for i in 0..a.rows {
        for j in 0..a.cols {
            let z = a[(i, j)];
            if z.im != 0.0 || z.re < 0.0 {
                return Err(LinalgError::NegativeEntry(i, j));
            }
        }
    }
    if a.is_zero() {
        return Ok(0.0);
    }
    lambda_max(&a.hermitian_part())
}

/// Golden-section maximization on [lo, hi]. Returns (argmax, max).
/// Deterministic; `tol` is the final bracket width; `max_iters` caps work.
pub fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, max_iters: usize) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iters = 0;
    while (b - a).abs() > tol && iters < max_iters {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2);
        }
        iters += 1;
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid).max(f1).max(f2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjoint_basics() {
        let id = CMatrix::identity(3);
        assert_eq!(id.adjoint(), id);
        let a = CMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let expect = CMatrix::from_real(&[&[0.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(a.adjoint(), expect);
    }

    #[test]
    fn adjoint_is_involutive() {
        // fixed pseudo-random 5x5 complex matrix, checked entrywise
        let entries: Vec<Complex64> = (0..25)
            .map(|k| {
                let t = k as f64;
                c((1.3 * t).sin() * 2.0 - 1.0, (0.7 * t).cos() * 3.0)
            })
            .collect();
        let a = CMatrix::new(5, 5, entries);
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn herm_eig_diagonal() {
        let eig = herm_eig(&CMatrix::diag_real(&[2.0, 1.0])).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn herm_eig_ones_matrix() {
        // characteristic polynomial of [[1,1],[1,1]]: lambda^2 - 2 lambda,
        // so the spectrum is {0, 2}
        let a = CMatrix::from_real(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let eig = herm_eig(&a).unwrap();
        assert!((eig.eigenvalues[0] - 0.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn herm_eig_zero() {
        let eig = herm_eig(&CMatrix::zeros(4, 4)).unwrap();
        assert!(eig.eigenvalues.iter().all(|&l| l == 0.0));
    }

    #[test]
    fn herm_eig_reconstruction_and_unitarity() {
        // Hermitian matrix with complex off-diagonals.
        let a = CMatrix::new(
            3,
            3,
            vec![
                c(2.0, 0.0), c(1.0, 1.0), c(0.5, -0.3),
                c(1.0, -1.0), c(-1.0, 0.0), c(0.0, 2.0),
                c(0.5, 0.3), c(0.0, -2.0), c(0.7, 0.0),
            ],
        );
        let eig = herm_eig(&a).unwrap();
        let rebuilt = eig.rebuild_with(|l| l);
        assert!(rebuilt.sub(&a).frobenius() <= 1e-10 * a.frobenius());
        let v = &eig.eigenvectors;
        let vv = v.adjoint().mul(v);
        assert!(vv.sub(&CMatrix::identity(3)).frobenius() < 1e-10);
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn herm_eig_rejects_nonhermitian() {
        let a = CMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(herm_eig(&a), Err(LinalgError::NotHermitian(_))));
    }

    #[test]
    fn abs_op_examples() {
        let shift = CMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let expect = CMatrix::diag_real(&[0.0, 1.0]);
        assert!(abs_op(&shift).unwrap().sub(&expect).frobenius() < 1e-12);

        // [[1,1],[1,1]] is PSD (spectrum {0,2}), so it equals its own
        // absolute value; cross-checked below via |A|^2 = A*A.
        let ones = CMatrix::from_real(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let abs = abs_op(&ones).unwrap();
        assert!(abs.sub(&ones).frobenius() < 1e-10);
        assert!(abs.mul(&abs).sub(&ones.gram()).frobenius() <= 1e-9 * ones.frobenius().powi(2));

        let neg = CMatrix::diag_real(&[-3.0]);
        assert!(abs_op(&neg).unwrap().sub(&CMatrix::diag_real(&[3.0])).frobenius() < 1e-12);
    }

    #[test]
    fn sqrt_psd_examples() {
        let a = CMatrix::diag_real(&[4.0, 9.0]);
        assert!(sqrt_psd(&a).unwrap().sub(&CMatrix::diag_real(&[2.0, 3.0])).frobenius() < 1e-12);
        let id = CMatrix::identity(3);
        assert!(sqrt_psd(&id).unwrap().sub(&id).frobenius() < 1e-13);
        let b = CMatrix::from_real(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let r = sqrt_psd(&b).unwrap();
        assert!(r.mul(&r).sub(&b).frobenius() < 1e-10);
    }

    #[test]
    fn sqrt_psd_rejects_indefinite() {
        let a = CMatrix::diag_real(&[1.0, -0.5]);
        assert!(matches!(sqrt_psd(&a), Err(LinalgError::NotPsd(_))));
    }

    #[test]
    fn spectral_fn_examples() {
        let a = CMatrix::from_real(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert!(apply_spectral_fn(&a, |t| t).unwrap().sub(&a).frobenius() < 1e-10);
        let d = CMatrix::diag_real(&[4.0]);
        assert!(apply_spectral_fn(&d, |t| t.sqrt()).unwrap().sub(&CMatrix::diag_real(&[2.0])).frobenius() < 1e-13);
        // powers t^{2 t0} with t0 = 0.3
        let d2 = CMatrix::diag_real(&[2.0, 5.0]);
        let got = apply_spectral_fn(&d2, |t| t.powf(0.6)).unwrap();
        let expect = CMatrix::diag_real(&[2f64.powf(0.6), 5f64.powf(0.6)]);
        assert!(got.sub(&expect).frobenius() < 1e-12);
    }

    #[test]
    fn spectral_fn_rejects_nonfinite_values() {
        let a = CMatrix::diag_real(&[0.0, 1.0]);
        assert!(matches!(
            apply_spectral_fn(&a, |t| t.ln()),
            Err(LinalgError::NonFiniteFunctionValue(_))
        ));
    }

    #[test]
    fn op_norm_examples() {
        let a = CMatrix::from_real(&[&[1.0, 1.0], &[0.0, 0.0]]);
        assert!((op_norm(&a).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!((op_norm(&CMatrix::identity(4)).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(op_norm(&CMatrix::zeros(3, 2)).unwrap(), 0.0);
    }

    #[test]
    fn numerical_radius_examples() {
        // nilpotent shift: w = ||A|| / 2 = 1/2
        let shift = CMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!((numerical_radius(&shift, 256).unwrap() - 0.5).abs() < 1e-9);
        assert!((numerical_radius(&CMatrix::identity(3), 64).unwrap() - 1.0).abs() < 1e-9);
        let ones = CMatrix::from_real(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!((numerical_radius(&ones, 128).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn numerical_radius_rejects_small_grid() {
        let a = CMatrix::identity(2);
        assert!(matches!(numerical_radius(&a, 32), Err(LinalgError::TooFewAngles { .. })));
    }

    #[test]
    fn radius_for_nonnegative_matrices() {
        let a = CMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!((numerical_radius_entrywise_nonneg(&a).unwrap() - 1.5).abs() < 1e-12);
        let d = CMatrix::diag_real(&[3.0, 1.0]);
        assert!((numerical_radius_entrywise_nonneg(&d).unwrap() - 3.0).abs() < 1e-12);
        let x = CMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!((numerical_radius_entrywise_nonneg(&x).unwrap() - 1.0).abs() < 1e-12);
        let neg = CMatrix::from_real(&[&[0.0, -1.0], &[0.0, 0.0]]);
        assert!(matches!(
            numerical_radius_entrywise_nonneg(&neg),
            Err(LinalgError::NegativeEntry(0, 1))
        ));
    }

    #[test]
    fn parallel_and_sequential_radius_agree() {
        let a = CMatrix::new(
            3,
            3,
            vec![
                c(0.3, -0.2), c(1.0, 0.4), c(0.0, 0.0),
                c(-0.5, 0.0), c(0.1, 0.1), c(2.0, -1.0),
                c(0.7, 0.7), c(0.0, -0.3), c(-0.2, 0.0),
            ],
        );
        let w_par = numerical_radius(&a, 512).unwrap();
        let w_seq = numerical_radius_seq(&a, 512).unwrap();
        assert_eq!(w_par, w_seq);
    }
}
