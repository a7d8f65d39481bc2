//! Berezin symbol, Berezin number, Berezin norm and the Berezin infimum
//! c(A) over a kernel model.
//!
//! On exact (finite) models every supremum/infimum is the max/min over the
//! full point set. On Hardy-containing models a two-stage search runs: a
//! uniform polar grid per disk coordinate (thinned proportionally so the
//! total point count stays under a cap), followed by local coordinate-wise
//! golden-section refinement. Every reported value is certified by its
//! witness: re-evaluating the quantity at the witness reproduces the value,
//! so sup-type results are sound lower bounds.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::CMatrix;
use crate::par;
use crate::rkhs::{RkhsError, RkhsModel, RkhsPoint};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BerezinError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Rkhs(#[from] RkhsError),
}

pub type Result<T> = std::result::Result<T, BerezinError>;

/// Point(s) at which an estimate is attained: a single model point for
/// symbol-type quantities, an ordered pair for norm-type quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Witness {
    Point(RkhsPoint),
    Pair { lambda: RkhsPoint, mu: RkhsPoint },
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Point(p) => write!(f, "{p}"),
            Witness::Pair { lambda, mu } => write!(f, "lambda={lambda}, mu={mu}"),
        }
    }
}

/// Resolution of one search coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CoordCounts {
    Finite { points: usize },
    Disk { radial: usize, angular: usize },
}

/// Resolution metadata for the search that produced an estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct GridSpec {
    pub coords: Vec<CoordCounts>,
    pub total_points: usize,
    pub cap: usize,
    pub thinned: bool,
    pub pair: bool,
}

/// A certified estimate of a sup/inf-type Berezin quantity: the value equals
/// the quantity evaluated at `witness`; `exact` is set only when the model's
/// point set is finite and was enumerated completely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerezinEstimate {
    pub value: f64,
    pub witness: Witness,
    pub exact: bool,
    pub grid_spec: GridSpec,
    pub refinement_iters: usize,
    /// Set when a norm was computed through the positive-operator equality
    /// with the Berezin number.
    pub psd_equality: bool,
}

/// Search parameters for non-exact models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    /// Radial subdivisions per disk coordinate; the grid holds `radii + 1`
    /// radius values including 0 and r_max (nested under doubling).
    pub radii: usize,
    /// Angle count per disk coordinate.
    pub angles: usize,
    /// Cap on the total number of grid points; disk coordinates are thinned
    /// proportionally to stay under it.
    pub cap: usize,
    /// Run the coordinate-wise golden-section refinement stage.
    pub refine: bool,
    /// Bracket-width tolerance per refined coordinate.
    pub refine_tol: f64,
    /// Maximum refinement cycles over the coordinate list.
    pub refine_max_cycles: usize,
    /// Force the sequential evaluation path (used by benchmarks).
    pub sequential: bool,
}

impl Default for SearchSpec {
    fn default() -> Self {
        Self {
            radii: 64,
            angles: 128,
            cap: 1_000_000,
            refine: true,
            refine_tol: 1e-6,
            refine_max_cycles: 200,
            sequential: false,
        }
    }
}

/// Berezin symbol `<A k_p^, k_p^>` at a point of the model.
pub fn berezin_symbol(a: &CMatrix, m: &RkhsModel, p: &RkhsPoint) -> Result<Complex64> {
    check_square(a, m)?;
    let k = m.normalized_kernel(p)?;
    let ak = a.matvec(&k);
    Ok(inner(&ak, &k))
}

/// `<x, y> = sum conj(y_i) x_i`.
fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(&a, &b)| a * b.conj()).sum()
}

fn check_square(a: &CMatrix, m: &RkhsModel) -> Result<()> {
    if !a.is_square() || a.rows() != m.dim() {
        return Err(BerezinError::DimensionMismatch(format!(
            "operator is {}x{}, model dimension is {}",
            a.rows(),
            a.cols(),
            m.dim()
        )));
    }
    Ok(())
}

fn check_between(a: &CMatrix, dom: &RkhsModel, cod: &RkhsModel) -> Result<()> {
    if a.cols() != dom.dim() || a.rows() != cod.dim() {
        return Err(BerezinError::DimensionMismatch(format!(
            "operator is {}x{}, domain dimension {} and codomain dimension {}",
            a.rows(),
            a.cols(),
            dom.dim(),
            cod.dim()
        )));
    }
    Ok(())
}

/// ber(A) = sup over model points of |symbol|.
pub fn berezin_number(a: &CMatrix, m: &RkhsModel) -> Result<BerezinEstimate> {
    berezin_number_with(a, m, &SearchSpec::default())
}

pub fn berezin_number_with(a: &CMatrix, m: &RkhsModel, spec: &SearchSpec) -> Result<BerezinEstimate> {
    check_square(a, m)?;
    diag_search(a, m, spec, Goal::Max)
}

/// c(A) = inf over model points of |symbol|.
pub fn berezin_inf_c(a: &CMatrix, m: &RkhsModel) -> Result<BerezinEstimate> {
    berezin_inf_c_with(a, m, &SearchSpec::default())
}

pub fn berezin_inf_c_with(a: &CMatrix, m: &RkhsModel, spec: &SearchSpec) -> Result<BerezinEstimate> {
    check_square(a, m)?;
    diag_search(a, m, spec, Goal::Min)
}

/// Berezin norm: sup over ordered point pairs of |<A k_lambda^, k_mu^>|.
///
/// On non-exact models a PSD Hermitian operator is routed through the
/// Berezin number (the two agree for positive operators), flagged on the
/// estimate; everything else runs the pair search over the doubled
/// coordinate space.
pub fn berezin_norm(a: &CMatrix, m: &RkhsModel) -> Result<BerezinEstimate> {
    berezin_norm_with(a, m, &SearchSpec::default())
}

pub fn berezin_norm_with(a: &CMatrix, m: &RkhsModel, spec: &SearchSpec) -> Result<BerezinEstimate> {
    check_square(a, m)?;
    if !m.is_exact() && is_psd_within_roundoff(a) {
        let mut est = diag_search(a, m, spec, Goal::Max)?;
        if let Witness::Point(p) = est.witness {
            est.witness = Witness::Pair { lambda: p.clone(), mu: p };
        }
        est.psd_equality = true;
        return Ok(est);
    }
    pair_search(a, m, m, spec)
}

/// Berezin norm of an operator between two models (rectangular blocks):
/// sup over (lambda in dom, mu in cod) of |<A k_lambda^, k_mu^>|.
pub fn berezin_norm_between(a: &CMatrix, dom: &RkhsModel, cod: &RkhsModel) -> Result<BerezinEstimate> {
    berezin_norm_between_with(a, dom, cod, &SearchSpec::default())
}

pub fn berezin_norm_between_with(
    a: &CMatrix,
    dom: &RkhsModel,
    cod: &RkhsModel,
    spec: &SearchSpec,
) -> Result<BerezinEstimate> {
    check_between(a, dom, cod)?;
    if dom == cod {
        return berezin_norm_with(a, dom, spec);
    }
    pair_search(a, dom, cod, spec)
}

/// Norm-side quantity of the power-sum inequality for positive operators:
/// `n^(r-1) * || sum A_i^r ||_ber`, an upper bound for `|| sum A_i ||_ber^r`.
pub fn psd_power_sum_norm_bound(ops: &[CMatrix], r: u32, m: &RkhsModel) -> Result<f64> {
    assert!(!ops.is_empty() && r >= 1);
    let n = ops.len() as f64;
    let mut sum_pow = CMatrix::zeros(ops[0].rows(), ops[0].cols());
    for a in ops {
        sum_pow = sum_pow.add(&a.pow(r as usize));
    }
    Ok(n.powi(r as i32 - 1) * berezin_norm(&sum_pow, m)?.value)
}

/// Conservative PSD test: Hermitian up to roundoff and Cholesky of
/// `A + delta I` succeeds (so the least eigenvalue is above `-delta`).
fn is_psd_within_roundoff(a: &CMatrix) -> bool {
    let scale = a.frobenius();
    if a.asymmetry() > 1e-12 * scale.max(1.0) {
        return false;
    }
    let n = a.rows();
    let delta = 1e-10 * scale.max(1.0);
    let mut l = vec![Complex64::ZERO; n * n];
    for j in 0..n {
        let mut d = a[(j, j)].re + delta;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        l[j * n + j] = Complex64::new(d, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / d;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// search engine
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq)]
enum Goal {
    Max,
    Min,
}

impl Goal {
    fn better(self, a: (usize, f64), b: (usize, f64)) -> bool {
        match self {
            Goal::Max => a.1 > b.1 || (a.1 == b.1 && a.0 < b.0),
            Goal::Min => a.1 < b.1 || (a.1 == b.1 && a.0 < b.0),
        }
    }

    fn improves(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Goal::Max => candidate > incumbent,
            Goal::Min => candidate < incumbent,
        }
    }
}

/// One grid coordinate: either a fully enumerated finite factor or a polar
/// grid over a disk factor.
struct FactorGrid {
    points: Vec<RkhsPoint>,
    /// d x N matrix whose columns are the (unnormalized) kernels.
    kernels: CMatrix,
    norms_sq: Vec<f64>,
    disk: Option<DiskGrid>,
}

#[derive(Clone)]
struct DiskGrid {
    r_max: f64,
    r_step: f64,
    theta_step: f64,
    radial: usize,
    angular: usize,
}

fn disk_grid_points(r_max: f64, radial: usize, angular: usize) -> Vec<RkhsPoint> {
    let mut pts = Vec::with_capacity((radial + 1) * angular);
    for ri in 0..=radial {
        let r = r_max * ri as f64 / radial as f64;
        for ai in 0..angular {
            let theta = 2.0 * std::f64::consts::PI * ai as f64 / angular as f64;
            pts.push(RkhsPoint::Disk { re: r * theta.cos(), im: r * theta.sin() });
        }
    }
    pts
}

fn build_factor_grid(factor: &RkhsModel, radial: usize, angular: usize) -> Result<FactorGrid> {
    let (points, disk) = match factor {
        RkhsModel::FiniteStandard(n) => ((0..*n).map(RkhsPoint::Index).collect::<Vec<_>>(), None),
        RkhsModel::FiniteGeneral { kernels } => {
            ((0..kernels.len()).map(RkhsPoint::Index).collect(), None)
        }
        RkhsModel::HardyTruncated { r_max, .. } => (
            disk_grid_points(*r_max, radial, angular),
            Some(DiskGrid {
                r_max: *r_max,
                r_step: *r_max / radial as f64,
                theta_step: 2.0 * std::f64::consts::PI / angular as f64,
                radial,
                angular,
            }),
        ),
        RkhsModel::DirectSum(_) => unreachable!("factors are flattened before grid construction"),
    };
    let d = factor.dim();
    let n = points.len();
    let mut kernels = CMatrix::zeros(d, n);
    let mut norms_sq = Vec::with_capacity(n);
    for (j, p) in points.iter().enumerate() {
        let k = factor.kernel_vector(p)?;
        let mut ns = 0.0;
        for (i, z) in k.into_iter().enumerate() {
            kernels[(i, j)] = z;
            ns += z.norm_sqr();
        }
        norms_sq.push(ns);
    }
    Ok(FactorGrid { points, kernels, norms_sq, disk })
}

/// Flatten nested direct sums into a list of leaf factors.
fn leaf_factors(m: &RkhsModel) -> Vec<&RkhsModel> {
    match m {
        RkhsModel::DirectSum(fs) => fs.iter().flat_map(leaf_factors).collect(),
        other => vec![other],
    }
}

/// Choose per-disk-coordinate (radial, angular) counts so the total grid size
/// stays under the cap, shrinking all disk coordinates proportionally.
fn plan_disk_counts(
    spec: &SearchSpec,
    finite_product: f64,
    disk_coords: usize,
) -> (usize, usize, bool) {
    let default_pts = ((spec.radii + 1) * spec.angles) as f64;
    if disk_coords == 0 {
        return (spec.radii, spec.angles, false);
    }
    let budget = (spec.cap as f64 / finite_product.max(1.0)).powf(1.0 / disk_coords as f64);
    if budget >= default_pts {
        return (spec.radii, spec.angles, false);
    }
    let s = (budget / default_pts).sqrt();
    let mut radial = ((spec.radii as f64 * s).floor() as usize).max(2);
    let mut angular = ((spec.angles as f64 * s).floor() as usize).max(4);
    let total = |r: usize, a: usize| finite_product * (((r + 1) * a) as f64).powi(disk_coords as i32);
    while total(radial, angular) > spec.cap as f64 && (radial > 2 || angular > 4) {
        if angular > 4 {
            angular -= 1;
        } else {
            radial -= 1;
        }
    }
    (radial, angular, true)
}

struct SideGrids {
    factors: Vec<FactorGrid>,
    sizes: Vec<usize>,
    offsets: Vec<usize>, // ambient offset of each factor
}

fn build_side(m: &RkhsModel, radial: usize, angular: usize) -> Result<SideGrids> {
    let leaves = leaf_factors(m);
    let mut factors = Vec::with_capacity(leaves.len());
    let mut offsets = Vec::with_capacity(leaves.len());
    let mut off = 0;
    for leaf in &leaves {
        offsets.push(off);
        off += leaf.dim();
        factors.push(build_factor_grid(leaf, radial, angular)?);
    }
    let sizes = factors.iter().map(|f| f.points.len()).collect();
    Ok(SideGrids { factors, sizes, offsets })
}

fn product(sizes: &[usize]) -> usize {
    sizes.iter().product()
}

/// Decompose a flat index (first coordinate most significant) into per-factor
/// indices, writing into `out`.
fn unflatten(mut t: usize, sizes: &[usize], out: &mut [usize]) {
    for k in (0..sizes.len()).rev() {
        out[k] = t % sizes[k];
        t /= sizes[k];
    }
}

/// Slice the (i, j) block of `a` according to side offsets/dims.
fn block_of(a: &CMatrix, cod: &SideGrids, dom: &SideGrids, i: usize, j: usize) -> CMatrix {
    let roff = cod.offsets[i];
    let coff = dom.offsets[j];
    let rows = cod.factors[i].kernels.rows();
    let cols = dom.factors[j].kernels.rows();
    let mut b = CMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            b[(r, c)] = a[(roff + r, coff + c)];
        }
    }
    b
}

/// Cross matrices C_ij[q][p] = <A_ij k_j(p), k_i(q)> for all factor pairs;
/// `None` where the block is identically zero.
fn cross_matrices(a: &CMatrix, cod: &SideGrids, dom: &SideGrids) -> Vec<Option<CMatrix>> {
    let (nc, nd) = (cod.factors.len(), dom.factors.len());
    let mut out = Vec::with_capacity(nc * nd);
    for i in 0..nc {
        for j in 0..nd {
            let b = block_of(a, cod, dom, i, j);
            if b.is_zero() {
                out.push(None);
            } else {
                let y = b.mul(&dom.factors[j].kernels);
                out.push(Some(cod.factors[i].kernels.adjoint().mul(&y)));
            }
        }
    }
    out
}

/// Diagonal of C_ii for each factor: only these enter the symbol search on
/// the matching coordinate, so the full N x N product is never formed.
fn diag_terms(a: &CMatrix, side: &SideGrids) -> Vec<Option<Vec<Complex64>>> {
    let nf = side.factors.len();
    let mut out = Vec::with_capacity(nf);
    for i in 0..nf {
        let b = block_of(a, side, side, i, i);
        if b.is_zero() {
            out.push(None);
            continue;
        }
        let k = &side.factors[i].kernels;
        let y = b.mul(k);
        let n = k.cols();
        let d = k.rows();
        let diag = (0..n)
            .map(|p| (0..d).map(|r| y[(r, p)] * k[(r, p)].conj()).sum())
            .collect();
        out.push(Some(diag));
    }
    out
}

fn grid_metadata(sides: &[&SideGrids], cap: usize, thinned: bool, pair: bool) -> GridSpec {
    let mut coords = Vec::new();
    let mut total = 1usize;
    for side in sides {
        for f in &side.factors {
            total = total.saturating_mul(f.points.len());
            coords.push(match &f.disk {
                None => CoordCounts::Finite { points: f.points.len() },
                Some(d) => CoordCounts::Disk { radial: d.radial, angular: d.angular },
            });
        }
    }
    GridSpec { coords, total_points: total, cap, thinned, pair }
}

// -- diagonal (symbol) search ----------------------------------------------

fn diag_search(a: &CMatrix, m: &RkhsModel, spec: &SearchSpec, goal: Goal) -> Result<BerezinEstimate> {
    let leaves = leaf_factors(m);
    let disk_coords = leaves.iter().filter(|f| !f.is_exact()).count();
    let finite_product: f64 = leaves
        .iter()
        .filter_map(|f| f.point_count())
        .map(|n| n as f64)
        .product();
    let (radial, angular, thinned) = plan_disk_counts(spec, finite_product, disk_coords);
    let side = build_side(m, radial, angular)?;
    let nf = side.factors.len();
    let diags = diag_terms(a, &side);
    // off-diagonal cross terms only; same-factor terms come from `diags`
    let cross: Vec<Option<CMatrix>> = (0..nf * nf)
        .map(|k| {
            let (i, j) = (k / nf, k % nf);
            if i == j {
                return None;
            }
            let b = block_of(a, &side, &side, i, j);
            if b.is_zero() {
                None
            } else {
                let y = b.mul(&side.factors[j].kernels);
                Some(side.factors[i].kernels.adjoint().mul(&y))
            }
        })
        .collect();
    let total = product(&side.sizes);

    let value_at = |idx: &[usize]| -> f64 {
        let mut num = Complex64::ZERO;
        let mut den = 0.0;
        for i in 0..nf {
            den += side.factors[i].norms_sq[idx[i]];
            if let Some(d) = &diags[i] {
                num += d[idx[i]];
            }
            for j in 0..nf {
                if let Some(c) = &cross[i * nf + j] {
                    num += c[(idx[i], idx[j])];
                }
            }
        }
        num.norm() / den
    };

    let (best_idx, best_val) = par::select_indexed(
        total,
        spec.sequential,
        |t| {
            let mut idx = vec![0usize; nf];
            unflatten(t, &side.sizes, &mut idx);
            value_at(&idx)
        },
        |x, y| goal.better(x, y),
    )
    .expect("models have at least one point");

    let mut idx = vec![0usize; nf];
    unflatten(best_idx, &side.sizes, &mut idx);
    let model_is_sum = matches!(m, RkhsModel::DirectSum(_));
    let mut state: Vec<RkhsPoint> =
        side.factors.iter().zip(&idx).map(|(f, &i)| f.points[i].clone()).collect();
    let mut value = best_val;
    let mut iters = 0;

    if spec.refine && disk_coords > 0 {
        let eval = |pts: &[RkhsPoint]| -> f64 {
            let p = assemble_point(pts, model_is_sum);
            let k = m.kernel_vector(&p).expect("refined point stays in domain");
            let ak = a.matvec(&k);
            let ns: f64 = k.iter().map(|z| z.norm_sqr()).sum();
            inner(&ak, &k).norm() / ns
        };
        let slots: Vec<(usize, DiskGrid)> = side
            .factors
            .iter()
            .enumerate()
            .filter_map(|(i, f)| f.disk.clone().map(|d| (i, d)))
            .collect();
        iters = refine(&mut state, &mut value, goal, spec, &slots, eval);
    }

    let witness_point = assemble_point(&state, model_is_sum);
    Ok(BerezinEstimate {
        value,
        witness: Witness::Point(witness_point),
        exact: m.is_exact(),
        grid_spec: grid_metadata(&[&side], spec.cap, thinned, false),
        refinement_iters: iters,
        psd_equality: false,
    })
}

fn assemble_point(pts: &[RkhsPoint], model_is_sum: bool) -> RkhsPoint {
    if model_is_sum {
        RkhsPoint::Tuple(pts.to_vec())
    } else {
        pts[0].clone()
    }
}

// -- pair (norm) search ------------------------------------------------------

fn pair_search(a: &CMatrix, dom: &RkhsModel, cod: &RkhsModel, spec: &SearchSpec) -> Result<BerezinEstimate> {
    let leaves_dom = leaf_factors(dom);
    let leaves_cod = leaf_factors(cod);
    let disk_coords = leaves_dom
        .iter()
        .chain(leaves_cod.iter())
        .filter(|f| !f.is_exact())
        .count();
    let finite_product: f64 = leaves_dom
        .iter()
        .chain(leaves_cod.iter())
        .filter_map(|f| f.point_count())
        .map(|n| n as f64)
        .product();
    let (radial, angular, thinned) = plan_disk_counts(spec, finite_product, disk_coords);
    let dside = build_side(dom, radial, angular)?;
    let cside = build_side(cod, radial, angular)?;
    let (ndf, ncf) = (dside.factors.len(), cside.factors.len());
    let cross = cross_matrices(a, &cside, &dside);

    let dom_total = product(&dside.sizes);
    let cod_total = product(&cside.sizes);
    let total = dom_total * cod_total;

    let value_at = |didx: &[usize], cidx: &[usize]| -> f64 {
        let mut num = Complex64::ZERO;
        for i in 0..ncf {
            for j in 0..ndf {
                if let Some(c) = &cross[i * ndf + j] {
                    num += c[(cidx[i], didx[j])];
                }
            }
        }
        let dn: f64 = dside.factors.iter().zip(didx).map(|(f, &p)| f.norms_sq[p]).sum();
        let cn: f64 = cside.factors.iter().zip(cidx).map(|(f, &q)| f.norms_sq[q]).sum();
        num.norm() / (dn.sqrt() * cn.sqrt())
    };

    // flat index: lambda block most significant, mu block least.
    let (best_idx, best_val) = par::select_indexed(
        total,
        spec.sequential,
        |t| {
            let (tl, tm) = (t / cod_total, t % cod_total);
            let mut didx = vec![0usize; ndf];
            let mut cidx = vec![0usize; ncf];
            unflatten(tl, &dside.sizes, &mut didx);
            unflatten(tm, &cside.sizes, &mut cidx);
            value_at(&didx, &cidx)
        },
        |x, y| Goal::Max.better(x, y),
    )
    .expect("models have at least one point");

    let mut didx = vec![0usize; ndf];
    let mut cidx = vec![0usize; ncf];
    unflatten(best_idx / cod_total, &dside.sizes, &mut didx);
    unflatten(best_idx % cod_total, &cside.sizes, &mut cidx);
    let dom_is_sum = matches!(dom, RkhsModel::DirectSum(_));
    let cod_is_sum = matches!(cod, RkhsModel::DirectSum(_));

    let mut state: Vec<RkhsPoint> = dside
        .factors
        .iter()
        .zip(&didx)
        .map(|(f, &i)| f.points[i].clone())
        .chain(cside.factors.iter().zip(&cidx).map(|(f, &i)| f.points[i].clone()))
        .collect();
    let mut value = best_val;
    let mut iters = 0;

    if spec.refine && disk_coords > 0 {
        let eval = |pts: &[RkhsPoint]| -> f64 {
            let lp = assemble_point(&pts[..ndf], dom_is_sum);
            let mp = assemble_point(&pts[ndf..], cod_is_sum);
            let kl = dom.kernel_vector(&lp).expect("refined point stays in domain");
            let km = cod.kernel_vector(&mp).expect("refined point stays in domain");
            let akl = a.matvec(&kl);
            let nl: f64 = kl.iter().map(|z| z.norm_sqr()).sum();
            let nm: f64 = km.iter().map(|z| z.norm_sqr()).sum();
            inner(&akl, &km).norm() / (nl.sqrt() * nm.sqrt())
        };
        let slots: Vec<(usize, DiskGrid)> = dside
            .factors
            .iter()
            .enumerate()
            .filter_map(|(i, f)| f.disk.clone().map(|d| (i, d)))
            .chain(
                cside
                    .factors
                    .iter()
                    .enumerate()
                    .filter_map(|(i, f)| f.disk.clone().map(|d| (ndf + i, d))),
            )
            .collect();
        iters = refine(&mut state, &mut value, Goal::Max, spec, &slots, eval);
    }

    let lambda = assemble_point(&state[..ndf], dom_is_sum);
    let mu = assemble_point(&state[ndf..], cod_is_sum);
    Ok(BerezinEstimate {
        value,
        witness: Witness::Pair { lambda, mu },
        exact: dom.is_exact() && cod.is_exact(),
        grid_spec: grid_metadata(&[&dside, &cside], spec.cap, thinned, true),
        refinement_iters: iters,
        psd_equality: false,
    })
}

// -- refinement ---------------------------------------------------------------

/// Coordinate-wise golden-section refinement over the disk coordinates.
/// Each cycle re-anchors a window of one grid spacing around the incumbent
/// in r and theta; only strict improvements are accepted, so the result
/// never falls below the grid stage. Returns the number of evaluations.
fn refine(
    state: &mut [RkhsPoint],
    value: &mut f64,
    goal: Goal,
    spec: &SearchSpec,
    slots: &[(usize, DiskGrid)],
    eval: impl Fn(&[RkhsPoint]) -> f64,
) -> usize {
    let mut evals = 0usize;
    for _cycle in 0..spec.refine_max_cycles {
        let before = *value;
        for (slot, disk) in slots {
            let z = state[*slot].as_complex().expect("disk slot holds a disk point");
            let (r0, th0) = (z.norm(), z.arg());

            // radial line search
            let (lo, hi) = ((r0 - disk.r_step).max(0.0), (r0 + disk.r_step).min(disk.r_max));
            let f_r = |r: f64| {
                let mut pts = state.to_vec();
                pts[*slot] = RkhsPoint::Disk { re: r * th0.cos(), im: r * th0.sin() };
                eval(&pts)
            };
            let (r_best, v_best, used) = golden_tracked(&f_r, lo, hi, spec.refine_tol, goal);
            evals += used;
            if goal.improves(v_best, *value) {
                state[*slot] = RkhsPoint::Disk { re: r_best * th0.cos(), im: r_best * th0.sin() };
                *value = v_best;
            }

            // angular line search (theta window, wrapped when evaluating)
            let z = state[*slot].as_complex().unwrap();
            let (r1, th1) = (z.norm(), z.arg());
            if r1 > 0.0 {
                let f_t = |th: f64| {
                    let mut pts = state.to_vec();
                    pts[*slot] = RkhsPoint::Disk { re: r1 * th.cos(), im: r1 * th.sin() };
                    eval(&pts)
                };
                let (t_best, v_best, used) =
                    golden_tracked(&f_t, th1 - disk.theta_step, th1 + disk.theta_step, spec.refine_tol, goal);
                evals += used;
                if goal.improves(v_best, *value) {
                    state[*slot] = RkhsPoint::Disk { re: r1 * t_best.cos(), im: r1 * t_best.sin() };
                    *value = v_best;
                }
            }
        }
        let gain = (*value - before).abs();
        if gain <= 1e-12 * value.abs().max(1.0) {
            break;
        }
    }
    evals
}

/// Golden-section line search that tracks the best *sampled* point, so the
/// returned value is exactly `f` at the returned argument.
fn golden_tracked(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, goal: Goal) -> (f64, f64, usize) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let sign = match goal {
        Goal::Max => 1.0,
        Goal::Min => -1.0,
    };
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut used = 2;
    let mut best = if sign * f1 >= sign * f2 { (x1, f1) } else { (x2, f2) };
    while (b - a).abs() > tol && used < 200 {
        if sign * f1 >= sign * f2 {
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
        used += 1;
        for (x, fx) in [(x1, f1), (x2, f2)] {
            if sign * fx > sign * best.1 {
                best = (x, fx);
            }
        }
    }
    (best.0, best.1, used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rkhs::{hardy_operator, HardyKind};

    fn fs(n: usize) -> RkhsModel {
        RkhsModel::FiniteStandard(n)
    }

    #[test]
    fn symbol_examples() {
        let id = CMatrix::identity(3);
        let m = fs(3);
        let s = berezin_symbol(&id, &m, &RkhsPoint::Index(1)).unwrap();
        assert!((s - Complex64::ONE).norm() < 1e-15);

        let d = CMatrix::diag_real(&[2.0, 5.0]);
        let s = berezin_symbol(&d, &fs(2), &RkhsPoint::Index(1)).unwrap();
        assert!((s.re - 5.0).abs() < 1e-15);

        // shift symbol at a real disk point is close to the point itself
        let hardy = RkhsModel::hardy_default();
        let mz = hardy_operator(HardyKind::Mz, hardy.dim()).unwrap();
        let s = berezin_symbol(&mz, &hardy, &RkhsPoint::Disk { re: 0.5, im: 0.0 }).unwrap();
        assert!((s.re - 0.5).abs() < 1e-12 && s.im.abs() < 1e-15);
    }

    #[test]
    fn finite_standard_quantities_read_off_entries() {
        let a = CMatrix::from_real(&[&[1.0, 7.0], &[2.0, -3.0]]);
        let m = fs(2);
        let ber = berezin_number(&a, &m).unwrap();
        assert_eq!(ber.value, 3.0);
        assert!(ber.exact);
        assert_eq!(ber.witness, Witness::Point(RkhsPoint::Index(1)));
        let norm = berezin_norm(&a, &m).unwrap();
        assert_eq!(norm.value, 7.0);
        // <A e_0, e_1> reads entry (1,0); entry 7 sits at (0,1) so the
        // witness is lambda=1, mu=0
        assert_eq!(norm.witness, Witness::Pair { lambda: RkhsPoint::Index(1), mu: RkhsPoint::Index(0) });
        let c = berezin_inf_c(&a, &m).unwrap();
        assert_eq!(c.value, 1.0);
    }

    #[test]
    fn berezin_number_trivia() {
        let m = fs(2);
        assert_eq!(berezin_number(&CMatrix::zeros(2, 2), &m).unwrap().value, 0.0);
        let e00 = CMatrix::unit(2, 0, 0);
        let est = berezin_number(&e00, &m).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.witness, Witness::Point(RkhsPoint::Index(0)));
        assert_eq!(berezin_inf_c(&CMatrix::identity(2), &m).unwrap().value, 1.0);
        assert_eq!(berezin_inf_c(&CMatrix::diag_real(&[0.0, 0.25]), &m).unwrap().value, 0.0);
        let c = berezin_inf_c(&CMatrix::from_real(&[&[2.0, 2.0], &[2.0, 1.0]]), &m).unwrap();
        assert_eq!(c.value, 1.0);
    }

    #[test]
    fn direct_sum_symbol_average() {
        // [[I,0],[0,0]] over two copies: symbol at any pair is 1/2
        let m = RkhsModel::DirectSum(vec![fs(2), fs(2)]);
        let a = crate::block::BlockMatrix::corner_embed(&CMatrix::identity(2)).assemble();
        let p = RkhsPoint::Tuple(vec![RkhsPoint::Index(1), RkhsPoint::Index(0)]);
        let s = berezin_symbol(&a, &m, &p).unwrap();
        assert!((s.re - 0.5).abs() < 1e-15);
        let est = berezin_number(&a, &m).unwrap();
        assert!((est.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hardy_shift_number_approaches_one() {
        let hardy = RkhsModel::hardy_default();
        let mz = hardy_operator(HardyKind::Mz, hardy.dim()).unwrap();
        let est = berezin_number(&mz, &hardy).unwrap();
        assert!(!est.exact);
        assert!(est.value >= 0.99, "got {}", est.value);
        assert!(est.value <= 1.0 + 1e-9);
        // witness re-evaluation reproduces the value
        if let Witness::Point(p) = &est.witness {
            let re_eval = berezin_symbol(&mz, &hardy, p).unwrap().norm();
            assert!((re_eval - est.value).abs() < 1e-12);
        } else {
            panic!("expected a point witness");
        }
    }

    #[test]
    fn hardy_monomial_projection_norms() {
        // || P_{z^i} ||_ber = max over t of t^i sqrt(1-t^2) squared at the
        // optimum: 1/4, 4/27, 27/256 for i = 1, 2, 3
        let hardy = RkhsModel::hardy_default();
        for (i, expect) in [(1usize, 0.25), (2, 4.0 / 27.0), (3, 27.0 / 256.0)] {
            let p = hardy_operator(HardyKind::PMonomial(i), hardy.dim()).unwrap();
            let est = berezin_norm(&p, &hardy).unwrap();
            assert!(est.psd_equality, "projections are PSD");
            assert!((est.value - expect).abs() < 1e-3, "i={i}: got {}", est.value);
        }
    }

    #[test]
    fn hardy_shift_closed_form_symbol() {
        // symbol of the truncated shift at real t:
        // t (1 - t^(2(N-1))) / (1 - t^(2N))
        let n = 50;
        let m = RkhsModel::HardyTruncated { dim: n, r_max: 0.95 };
        let mz = hardy_operator(HardyKind::Mz, n).unwrap();
        for &t in &[0.0, 0.3, 0.77, 0.95] {
            let s = berezin_symbol(&mz, &m, &RkhsPoint::Disk { re: t, im: 0.0 }).unwrap();
            let expect = t * (1.0 - t.powi(2 * (n as i32 - 1))) / (1.0 - t.powi(2 * n as i32));
            assert!((s.re - expect).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn norm_between_rectangular() {
        // 1x2 block from a 2-dim domain to a 1-dim codomain
        let a = CMatrix::from_real(&[&[3.0, 4.0]]);
        let est = berezin_norm_between(&a, &fs(2), &fs(1)).unwrap();
        assert_eq!(est.value, 4.0);
        assert!(est.exact);
    }

    #[test]
    fn grid_monotone_under_doubling() {
        // nested grids: doubling the resolution never lowers the grid-stage
        // estimate (every grid point is a feasible value)
        let hardy = RkhsModel::HardyTruncated { dim: 60, r_max: 0.9 };
        let mz = hardy_operator(HardyKind::Mz, 60).unwrap();
        let mut last = 0.0;
        for (r, a) in [(8, 16), (16, 32), (32, 64)] {
            let spec = SearchSpec { radii: r, angles: a, refine: false, ..SearchSpec::default() };
            let est = berezin_number_with(&mz, &hardy, &spec).unwrap();
            assert!(est.value >= last - 0.0);
            last = est.value;
        }
        // refinement only improves on the grid stage
        let coarse = SearchSpec { radii: 8, angles: 16, refine: false, ..SearchSpec::default() };
        let refined = SearchSpec { radii: 8, angles: 16, refine: true, ..SearchSpec::default() };
        let v0 = berezin_number_with(&mz, &hardy, &coarse).unwrap().value;
        let v1 = berezin_number_with(&mz, &hardy, &refined).unwrap().value;
        assert!(v1 >= v0);
    }

    #[test]
    fn psd_shortcut_matches_pair_search() {
        let hardy = RkhsModel::HardyTruncated { dim: 40, r_max: 0.9 };
        let p1 = hardy_operator(HardyKind::PMonomial(1), 40).unwrap();
        let with_shortcut = berezin_norm(&p1, &hardy).unwrap();
        assert!(with_shortcut.psd_equality);
        // force the pair path on a non-Hermitian tweak: P_z plus a nilpotent
        let mut tweaked = p1.clone();
        tweaked[(0, 1)] = Complex64::new(1e-3, 0.0);
        let pair = berezin_norm(&tweaked, &hardy).unwrap();
        assert!(!pair.psd_equality);
        assert!((pair.value - with_shortcut.value).abs() < 5e-3);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = CMatrix::zeros(2, 2);
        assert!(matches!(
            berezin_number(&a, &fs(3)),
            Err(BerezinError::DimensionMismatch(_))
        ));
    }
}
