//! Reproducing-kernel models over a point set, and the named Hardy-space
//! operators used by the worked examples.
//!
//! Four model variants:
//! - `FiniteStandard(n)`: points `0..n`, kernels are the standard basis
//!   vectors. The exact oracle model: Berezin quantities reduce to max/min
//!   over matrix entries.
//! - `FiniteGeneral`: an explicit list of nonzero kernel vectors.
//! - `HardyTruncated`: the unit-disk model truncated to the first `dim`
//!   monomials, points restricted to `|lambda| <= r_max < 1`. Kernel at
//!   `lambda` is `(1, conj(lambda), conj(lambda)^2, ...)`.
//! - `DirectSum`: product point set, kernel is the concatenation of factor
//!   kernels (normalized jointly, never per factor).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::CMatrix;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RkhsError {
    #[error("point out of domain: {0}")]
    PointOutOfDomain(String),
    #[error("kernel vector has zero norm")]
    ZeroKernel,
    #[error("monomial index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T> = std::result::Result<T, RkhsError>;

/// Default truncation dimension for the Hardy model.
pub const HARDY_DEFAULT_DIM: usize = 400;
/// Default closed-disk radius for the Hardy model. Suprema over the open
/// disk are approximated on `|lambda| <= r_max`; reported values are lower
/// estimates of the true suprema.
pub const HARDY_DEFAULT_RMAX: f64 = 0.999;

/// A kernel model: a point set together with the kernel vector map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RkhsModel {
    FiniteStandard(usize),
    FiniteGeneral { kernels: Vec<Vec<(f64, f64)>> },
    HardyTruncated { dim: usize, r_max: f64 },
    DirectSum(Vec<RkhsModel>),
}

/// A point of the model's domain: an index for finite variants, a disk point
/// for the Hardy model, a tuple of factor points for direct sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RkhsPoint {
    Index(usize),
    Disk { re: f64, im: f64 },
    Tuple(Vec<RkhsPoint>),
}

impl RkhsPoint {
    pub fn disk(z: Complex64) -> Self {
        RkhsPoint::Disk { re: z.re, im: z.im }
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match self {
            RkhsPoint::Disk { re, im } => Some(Complex64::new(*re, *im)),
            _ => None,
        }
    }
}

impl std::fmt::Display for RkhsPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RkhsPoint::Index(i) => write!(f, "{i}"),
            RkhsPoint::Disk { re, im } => write!(f, "{re:.6}{im:+.6}i"),
            RkhsPoint::Tuple(ps) => {
                write!(f, "(")?;
                for (k, p) in ps.iter().enumerate() {
                    if k > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl RkhsModel {
    pub fn hardy_default() -> Self {
        RkhsModel::HardyTruncated { dim: HARDY_DEFAULT_DIM, r_max: HARDY_DEFAULT_RMAX }
    }

    pub fn finite_general(kernels: Vec<Vec<Complex64>>) -> Result<Self> {
        if kernels.is_empty() {
            return Err(RkhsError::InvalidModel("finite general model needs at least one kernel".into()));
        }
        let d = kernels[0].len();
        for k in &kernels {
            if k.len() != d {
                return Err(RkhsError::InvalidModel("kernel vectors of unequal dimension".into()));
            }
            if k.iter().map(|z| z.norm_sqr()).sum::<f64>() <= 0.0 {
                return Err(RkhsError::ZeroKernel);
            }
        }
        Ok(RkhsModel::FiniteGeneral {
            kernels: kernels
                .into_iter()
                .map(|k| k.into_iter().map(|z| (z.re, z.im)).collect())
                .collect(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RkhsModel::FiniteStandard(n) => {
                if *n == 0 {
                    return Err(RkhsError::InvalidModel("finite model needs dimension >= 1".into()));
                }
            }
            RkhsModel::FiniteGeneral { kernels } => {
                if kernels.is_empty() {
                    return Err(RkhsError::InvalidModel("finite general model needs kernels".into()));
                }
                for k in kernels {
                    if k.iter().map(|&(re, im)| re * re + im * im).sum::<f64>() <= 0.0 {
                        return Err(RkhsError::ZeroKernel);
                    }
                }
            }
            RkhsModel::HardyTruncated { dim, r_max } => {
                if *dim < 2 {
                    return Err(RkhsError::InvalidModel("Hardy truncation needs dim >= 2".into()));
                }
                if !(*r_max > 0.0 && *r_max < 1.0) {
                    return Err(RkhsError::InvalidModel("Hardy r_max must lie in (0, 1)".into()));
                }
            }
            RkhsModel::DirectSum(fs) => {
                if fs.is_empty() {
                    return Err(RkhsError::InvalidModel("direct sum needs at least one factor".into()));
                }
                for f in fs {
                    f.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Ambient dimension of the kernel vectors.
    pub fn dim(&self) -> usize {
        match self {
            RkhsModel::FiniteStandard(n) => *n,
            RkhsModel::FiniteGeneral { kernels } => kernels[0].len(),
            RkhsModel::HardyTruncated { dim, .. } => *dim,
            RkhsModel::DirectSum(fs) => fs.iter().map(|f| f.dim()).sum(),
        }
    }

    /// Factors of a direct sum; a plain model is its own single factor.
    pub fn factors(&self) -> Vec<&RkhsModel> {
        match self {
            RkhsModel::DirectSum(fs) => fs.iter().collect(),
            other => vec![other],
        }
    }

    /// True when every supremum over this model ranges over finitely many
    /// points and is computed exactly.
    pub fn is_exact(&self) -> bool {
        match self {
            RkhsModel::FiniteStandard(_) | RkhsModel::FiniteGeneral { .. } => true,
            RkhsModel::HardyTruncated { .. } => false,
            RkhsModel::DirectSum(fs) => fs.iter().all(|f| f.is_exact()),
        }
    }

    /// Number of domain points of a finite (exact) model.
    pub fn point_count(&self) -> Option<usize> {
        match self {
            RkhsModel::FiniteStandard(n) => Some(*n),
            RkhsModel::FiniteGeneral { kernels } => Some(kernels.len()),
            RkhsModel::HardyTruncated { .. } => None,
            RkhsModel::DirectSum(fs) => fs.iter().map(|f| f.point_count()).product(),
        }
    }

    fn in_domain(&self, p: &RkhsPoint) -> bool {
        match (self, p) {
            (RkhsModel::FiniteStandard(n), RkhsPoint::Index(i)) => i < n,
            (RkhsModel::FiniteGeneral { kernels }, RkhsPoint::Index(i)) => *i < kernels.len(),
            (RkhsModel::HardyTruncated { r_max, .. }, RkhsPoint::Disk { re, im }) => {
                re.hypot(*im) <= *r_max + 1e-12
            }
            (RkhsModel::DirectSum(fs), RkhsPoint::Tuple(ps)) => {
                ps.len() == fs.len() && fs.iter().zip(ps).all(|(f, q)| f.in_domain(q))
            }
            _ => false,
        }
    }

    /// The (unnormalized) kernel vector at `p`.
    pub fn kernel_vector(&self, p: &RkhsPoint) -> Result<Vec<Complex64>> {
        if !self.in_domain(p) {
            return Err(RkhsError::PointOutOfDomain(format!("{p} not in domain of model")));
        }
        Ok(match (self, p) {
            (RkhsModel::FiniteStandard(n), RkhsPoint::Index(i)) => {
                let mut v = vec![Complex64::ZERO; *n];
                v[*i] = Complex64::ONE;
                v
            }
            (RkhsModel::FiniteGeneral { kernels }, RkhsPoint::Index(i)) => {
                kernels[*i].iter().map(|&(re, im)| Complex64::new(re, im)).collect()
            }
            (RkhsModel::HardyTruncated { dim, .. }, RkhsPoint::Disk { re, im }) => {
                hardy_kernel(Complex64::new(*re, *im), *dim)
            }
            (RkhsModel::DirectSum(fs), RkhsPoint::Tuple(ps)) => {
                let mut v = Vec::with_capacity(self.dim());
                for (f, q) in fs.iter().zip(ps) {
                    v.extend(f.kernel_vector(q)?);
                }
                v
            }
            _ => unreachable!("in_domain filtered the shape"),
        })
    }

    /// Unit-norm kernel at `p`. For direct sums the concatenation is
    /// normalized as a whole.
    pub fn normalized_kernel(&self, p: &RkhsPoint) -> Result<Vec<Complex64>> {
        let mut v = self.kernel_vector(p)?;
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 0.0 {
            return Err(RkhsError::ZeroKernel);
        }
        for z in &mut v {
            *z /= norm;
        }
        Ok(v)
    }
}

/// Truncated Hardy kernel `(1, conj(lambda), ..., conj(lambda)^(dim-1))`.
pub fn hardy_kernel(lambda: Complex64, dim: usize) -> Vec<Complex64> {
    let lb = lambda.conj();
    let mut v = Vec::with_capacity(dim);
    let mut cur = Complex64::ONE;
    for _ in 0..dim {
        v.push(cur);
        cur *= lb;
    }
    v
}

/// The named operators on the truncated Hardy space, in the monomial basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HardyKind {
    /// Multiplication by z: the lower shift.
    Mz,
    /// Multiplication by z^2: shift by two.
    Mz2,
    /// Projection onto constants.
    PConst,
    /// Rank-one projection onto z^i.
    PMonomial(usize),
}

/// Matrix of a named Hardy operator at truncation dimension `n`.
pub fn hardy_operator(kind: HardyKind, n: usize) -> Result<CMatrix> {
    if n < 3 {
        return Err(RkhsError::InvalidModel("Hardy operators need dimension >= 3".into()));
    }
    let mut m = CMatrix::zeros(n, n);
    match kind {
        HardyKind::Mz => {
            for i in 0..n - 1 {
                m[(i + 1, i)] = Complex64::ONE;
            }
        }
        HardyKind::Mz2 => {
            for i in 0..n - 2 {
                m[(i + 2, i)] = Complex64::ONE;
            }
        }
        HardyKind::PConst => {
            m[(0, 0)] = Complex64::ONE;
        }
        HardyKind::PMonomial(i) => {
            if i >= n {
                return Err(RkhsError::IndexOutOfRange { index: i, dim: n });
            }
            m[(i, i)] = Complex64::ONE;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_kernel_is_basis_vector() {
        let m = RkhsModel::FiniteStandard(2);
        let k = m.kernel_vector(&RkhsPoint::Index(0)).unwrap();
        assert_eq!(k, vec![Complex64::ONE, Complex64::ZERO]);
        assert!(m.kernel_vector(&RkhsPoint::Index(2)).is_err());
    }

    #[test]
    fn hardy_kernel_values() {
        let m = RkhsModel::HardyTruncated { dim: 3, r_max: 0.9 };
        let at_zero = m.kernel_vector(&RkhsPoint::Disk { re: 0.0, im: 0.0 }).unwrap();
        assert_eq!(at_zero, vec![Complex64::ONE, Complex64::ZERO, Complex64::ZERO]);
        let at_half = m.kernel_vector(&RkhsPoint::Disk { re: 0.5, im: 0.0 }).unwrap();
        assert_eq!(at_half[1], Complex64::new(0.5, 0.0));
        assert_eq!(at_half[2], Complex64::new(0.25, 0.0));
    }

    #[test]
    fn normalized_kernel_norms() {
        // geometric series: ||k_0.5||^2 -> 1/(1-0.25) for large truncation
        let m = RkhsModel::HardyTruncated { dim: 200, r_max: 0.9 };
        let k = m.kernel_vector(&RkhsPoint::Disk { re: 0.5, im: 0.0 }).unwrap();
        let norm_sq: f64 = k.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm_sq - 1.0 / (1.0 - 0.25)).abs() < 1e-12);
        let nk = m.normalized_kernel(&RkhsPoint::Disk { re: 0.5, im: 0.0 }).unwrap();
        let unit: f64 = nk.iter().map(|z| z.norm_sqr()).sum();
        assert!((unit - 1.0).abs() < 1e-12);
    }

    #[test]
    fn direct_sum_concatenates_then_normalizes() {
        let m = RkhsModel::DirectSum(vec![RkhsModel::FiniteStandard(2), RkhsModel::FiniteStandard(2)]);
        let p = RkhsPoint::Tuple(vec![RkhsPoint::Index(0), RkhsPoint::Index(1)]);
        let nk = m.normalized_kernel(&p).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((nk[0].re - s).abs() < 1e-15);
        assert!((nk[3].re - s).abs() < 1e-15);
        assert_eq!(nk[1], Complex64::ZERO);
        // per-factor restriction matches the factor kernel before the joint
        // normalization
        let raw = m.kernel_vector(&p).unwrap();
        assert_eq!(&raw[0..2], &[Complex64::ONE, Complex64::ZERO]);
        assert_eq!(&raw[2..4], &[Complex64::ZERO, Complex64::ONE]);
    }

    #[test]
    fn hardy_operator_matrices() {
        let mz = hardy_operator(HardyKind::Mz, 3).unwrap();
        assert_eq!(mz, CMatrix::from_real(&[&[0., 0., 0.], &[1., 0., 0.], &[0., 1., 0.]]));
        let pc = hardy_operator(HardyKind::PConst, 3).unwrap();
        assert_eq!(pc, CMatrix::unit(3, 0, 0));
        let p1 = hardy_operator(HardyKind::PMonomial(1), 3).unwrap();
        assert_eq!(p1, CMatrix::unit(3, 1, 1));
        assert!(hardy_operator(HardyKind::PMonomial(5), 3).is_err());
    }
}
