//! Randomized verification of every bound against the exact finite-model
//! oracle, plus the lemma property suites.
//!
//! Instances are generated from a seeded, portable PRNG (ChaCha8). The
//! stream-splitting rule: the 64-bit seed of the spec seeds the generator
//! and the stream id is the FNV-1a hash of the bound identifier (or of
//! `"lemma:<id>"` for lemma suites), so every (bound, trial) pair draws an
//! independent, reproducible stream. Identical specs always produce
//! bit-identical instances.
//!
//! Verification runs on finite models only: there the left-hand quantities
//! are exact maxima, so Holds/Violated verdicts are sound. Hardy models are
//! reserved for the reproduction suite.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::berezin::{berezin_norm, berezin_number, BerezinError};
use crate::block::BlockMatrix;
use crate::bounds::{self, BoundId, BoundParams, BoundReport, BoundValue, BoundsError, Verdict};
use crate::linalg::{
    self, abs_op, apply_spectral_fn, numerical_radius, numerical_radius_entrywise_nonneg,
    op_norm, sqrt_psd, CMatrix, LinalgError,
};
use crate::par;
use crate::rkhs::RkhsModel;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("bad instance spec: {0}")]
    BadSpec(String),
    #[error("bound {0} is not applicable to this instance shape")]
    NotApplicable(BoundId),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Berezin(#[from] BerezinError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, VerifyError>;

/// Random matrix ensembles. Every ensemble draws a unit-scale base matrix
/// and multiplies by `scale`, so scale 0 gives zero matrices in all of them;
/// PSD stays PSD under the final scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ensemble {
    ComplexGaussian,
    RealGaussian,
    Nilpotent,
    Psd,
    Unitary,
}

impl Ensemble {
    pub const FUZZ_DEFAULT: [Ensemble; 4] =
        [Ensemble::ComplexGaussian, Ensemble::Psd, Ensemble::Nilpotent, Ensemble::Unitary];
}

impl std::fmt::Display for Ensemble {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Ensemble::ComplexGaussian => "complex-gaussian",
            Ensemble::RealGaussian => "real-gaussian",
            Ensemble::Nilpotent => "nilpotent",
            Ensemble::Psd => "psd",
            Ensemble::Unitary => "unitary",
        };
        f.write_str(s)
    }
}

/// Complete recipe for one random instance; identical specs reproduce
/// identical matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub seed: u64,
    pub dim: usize,
    pub n_blocks: usize,
    pub scale: f64,
    pub ensemble: Ensemble,
}

impl InstanceSpec {
    pub fn new(seed: u64, dim: usize, ensemble: Ensemble) -> Self {
        Self { seed, dim, n_blocks: 2, scale: 1.0, ensemble }
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.n_blocks == 0 {
            return Err(VerifyError::BadSpec("dim and n_blocks must be >= 1".into()));
        }
        if !(self.scale >= 0.0 && self.scale.is_finite()) {
            return Err(VerifyError::BadSpec("scale must be finite and >= 0".into()));
        }
        Ok(())
    }
}

/// FNV-1a, the documented stream id for a bound/lemma label.
pub fn stream_id(label: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn rng_for(spec: &InstanceSpec, label: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(stream_id(label));
    rng
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn cgauss(rng: &mut ChaCha8Rng) -> Complex64 {
    // standard complex normal: total variance one
    Complex64::new(gauss(rng), gauss(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

fn gen_matrix(rng: &mut ChaCha8Rng, dim: usize, ensemble: Ensemble, scale: f64) -> CMatrix {
    let base = match ensemble {
        Ensemble::ComplexGaussian => {
            CMatrix::new(dim, dim, (0..dim * dim).map(|_| cgauss(rng)).collect())
        }
        Ensemble::RealGaussian => CMatrix::new(
            dim,
            dim,
            (0..dim * dim).map(|_| Complex64::new(gauss(rng), 0.0)).collect(),
        ),
        Ensemble::Nilpotent => {
            let mut m = CMatrix::zeros(dim, dim);
            for i in 0..dim {
                for j in (i + 1)..dim {
                    m[(i, j)] = cgauss(rng);
                }
            }
            m
        }
        Ensemble::Psd => {
            let g = CMatrix::new(dim, dim, (0..dim * dim).map(|_| cgauss(rng)).collect());
            g.gram()
        }
        Ensemble::Unitary => {
            let g = CMatrix::new(dim, dim, (0..dim * dim).map(|_| cgauss(rng)).collect());
            gram_schmidt(&g)
        }
    };
    base.scale_re(scale)
}

/// Column Gram-Schmidt with positive diagonal convention; degenerate columns
/// fall back to basis vectors so the output is always unitary.
fn gram_schmidt(g: &CMatrix) -> CMatrix {
    let n = g.rows();
    let mut q = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut col: Vec<Complex64> = (0..n).map(|i| g[(i, j)]).collect();
        for k in 0..j {
            let proj: Complex64 = (0..n).map(|i| col[i] * q[(i, k)].conj()).sum();
            for i in 0..n {
                col[i] -= proj * q[(i, k)];
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            for (i, c) in col.iter_mut().enumerate() {
                *c = if i == j { Complex64::ONE } else { Complex64::ZERO };
            }
        } else {
            let phase = if col[j].norm() > 1e-12 { col[j] / col[j].norm() } else { Complex64::ONE };
            for c in col.iter_mut() {
                *c /= norm * phase;
            }
        }
        for i in 0..n {
            q[(i, j)] = col[i];
        }
    }
    q
}

/// PSD matrix derived from the spec's ensemble draw (Gram square of the base
/// matrix, rescaled), used by bounds whose preconditions require positivity.
fn gen_psd(rng: &mut ChaCha8Rng, spec: &InstanceSpec) -> CMatrix {
    let g = gen_matrix(rng, spec.dim, spec.ensemble, 1.0);
    g.gram().scale_re(spec.scale)
}

/// Commuting PSD pair sharing a random eigenbasis.
fn gen_commuting_psd(rng: &mut ChaCha8Rng, spec: &InstanceSpec) -> (CMatrix, CMatrix) {
    let g = CMatrix::new(
        spec.dim,
        spec.dim,
        (0..spec.dim * spec.dim).map(|_| cgauss(rng)).collect(),
    );
    let u = gram_schmidt(&g);
    let mut pair = Vec::new();
    for _ in 0..2 {
        let d: Vec<f64> = (0..spec.dim).map(|_| gauss(rng).abs() * spec.scale).collect();
        let mut scaled = u.clone();
        for (j, dj) in d.iter().enumerate() {
            for i in 0..spec.dim {
                scaled[(i, j)] = u[(i, j)] * dj;
            }
        }
        pair.push(scaled.mul(&u.adjoint()).hermitian_part());
    }
    (pair.remove(0), pair.remove(0))
}

/// The concrete inputs a bound operates on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BoundInstance {
    Blocks(BlockMatrix),
    Single { a: CMatrix },
    Pair { a: CMatrix, b: CMatrix },
    Triple { a: CMatrix, x: CMatrix, b: CMatrix },
    Lists { a: Vec<CMatrix>, b: Vec<CMatrix>, x: Vec<CMatrix> },
}

/// One matrix from the spec's ensemble stream (the draw a single-operator
/// bound would receive).
pub fn sample_matrix(spec: &InstanceSpec) -> Result<CMatrix> {
    spec.validate()?;
    let mut rng = rng_for(spec, "sample");
    Ok(gen_matrix(&mut rng, spec.dim, spec.ensemble, spec.scale))
}

/// Block matrix of `n_blocks^2` independent draws (the generic instance).
pub fn gen_instance(spec: &InstanceSpec) -> Result<BlockMatrix> {
    spec.validate()?;
    let mut rng = rng_for(spec, "blocks");
    gen_blocks_with(&mut rng, spec, spec.n_blocks)
}

fn gen_blocks_with(rng: &mut ChaCha8Rng, spec: &InstanceSpec, n: usize) -> Result<BlockMatrix> {
    let grid = (0..n)
        .map(|_| (0..n).map(|_| gen_matrix(rng, spec.dim, spec.ensemble, spec.scale)).collect())
        .collect();
    Ok(BlockMatrix::new(grid).expect("equal-dimension grid is conformal"))
}

/// Shape-correct random inputs for a bound. Bounds with positivity or
/// commutation preconditions derive their inputs from the same stream so the
/// instance stays valid for every ensemble.
pub fn gen_for_bound(id: BoundId, spec: &InstanceSpec) -> Result<BoundInstance> {
    spec.validate()?;
    let mut rng = rng_for(spec, id.as_str());
    let d = spec.dim;
    let zero = CMatrix::zeros(d, d);
    let mat = |rng: &mut ChaCha8Rng| gen_matrix(rng, d, spec.ensemble, spec.scale);
    Ok(match id {
        BoundId::th4 | BoundId::co1 | BoundId::co2 => {
            BoundInstance::Blocks(gen_blocks_with(&mut rng, spec, spec.n_blocks.max(2))?)
        }
        BoundId::co5
        | BoundId::eqn12
        | BoundId::R1E2
        | BoundId::th6
        | BoundId::co6
        | BoundId::th7
        | BoundId::ee5
        | BoundId::th8 => BoundInstance::Blocks(gen_blocks_with(&mut rng, spec, 2)?),
        BoundId::c28i | BoundId::lm7i => {
            let a = mat(&mut rng);
            let dd = mat(&mut rng);
            BoundInstance::Blocks(BlockMatrix::two_by_two(a, zero.clone(), zero, dd).unwrap())
        }
        BoundId::c28ii | BoundId::eqn14 | BoundId::lm7ii | BoundId::th5 | BoundId::co4 => {
            let b = mat(&mut rng);
            let c = mat(&mut rng);
            BoundInstance::Blocks(BlockMatrix::two_by_two(zero.clone(), b, c, zero).unwrap())
        }
        BoundId::inq5 | BoundId::inq6 => {
            let a = mat(&mut rng);
            let b = mat(&mut rng);
            BoundInstance::Blocks(BlockMatrix::two_by_two(a.clone(), b.clone(), b, a).unwrap())
        }
        BoundId::inq2 | BoundId::inq3 => BoundInstance::Single { a: mat(&mut rng) },
        BoundId::th9 => {
            let n = spec.n_blocks.max(2);
            BoundInstance::Lists {
                a: (0..n).map(|_| mat(&mut rng)).collect(),
                b: (0..n).map(|_| mat(&mut rng)).collect(),
                x: (0..n).map(|_| mat(&mut rng)).collect(),
            }
        }
        BoundId::cot9i | BoundId::cot9iii | BoundId::cot9iv => {
            let n = if id == BoundId::cot9iv { 2 } else { spec.n_blocks.max(2) };
            BoundInstance::Lists {
                a: (0..n).map(|_| mat(&mut rng)).collect(),
                b: (0..n).map(|_| mat(&mut rng)).collect(),
                x: Vec::new(),
            }
        }
        BoundId::cot9ii => BoundInstance::Lists {
            a: (0..spec.n_blocks.max(2)).map(|_| mat(&mut rng)).collect(),
            b: Vec::new(),
            x: Vec::new(),
        },
        BoundId::cot10i => BoundInstance::Triple {
            a: mat(&mut rng),
            x: mat(&mut rng),
            b: mat(&mut rng),
        },
        BoundId::cot10ii | BoundId::ee1 | BoundId::ee2 => {
            BoundInstance::Pair { a: mat(&mut rng), b: mat(&mut rng) }
        }
        BoundId::cot11i => {
            let a = gen_psd(&mut rng, spec);
            let x = mat(&mut rng);
            let b = gen_psd(&mut rng, spec);
            BoundInstance::Triple { a, x, b }
        }
        BoundId::cot11ii | BoundId::ee3 => {
            let a = gen_psd(&mut rng, spec);
            let b = gen_psd(&mut rng, spec);
            BoundInstance::Pair { a, b }
        }
        BoundId::cot11comm => {
            let (a, b) = gen_commuting_psd(&mut rng, spec);
            BoundInstance::Pair { a, b }
        }
        BoundId::ee4
        | BoundId::th10
        | BoundId::th10cor1
        | BoundId::th11i
        | BoundId::th11ii
        | BoundId::th11iii
        | BoundId::th11iv
        | BoundId::T20 => BoundInstance::Single { a: mat(&mut rng) },
    })
}

/// Deterministic per-trial parameters, cycled from the seed.
pub fn params_for_seed(seed: u64) -> BoundParams {
    let alphas = [
        Complex64::new(2.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(3.0, 4.0),
    ];
    let ts = [0.0, 0.25, 0.5, 0.75, 1.0];
    BoundParams {
        t: ts[(seed % 5) as usize],
        alpha: alphas[((seed / 2) % 4) as usize],
        beta: alphas[((seed / 3) % 4) as usize],
        r: 1 + (seed % 3) as u32,
        n_power: 2 + (seed % 3) as u32,
    }
}

fn sum_mats(terms: impl Iterator<Item = CMatrix>, d: usize) -> CMatrix {
    terms.fold(CMatrix::zeros(d, d), |acc, t| acc.add(&t))
}

/// The left-hand quantity a bound dominates (at first power), evaluated
/// exactly on finite models, and the bound's right-hand side.
fn evaluate(
    id: BoundId,
    instance: &BoundInstance,
    base: &RkhsModel,
    params: &BoundParams,
) -> Result<(crate::berezin::BerezinEstimate, BoundValue)> {
    let doubled = RkhsModel::DirectSum(vec![base.clone(), base.clone()]);
    let sum_model = |n: usize| RkhsModel::DirectSum(vec![base.clone(); n]);
    let alpha = params.alpha;
    let search = bounds::AlphaBetaSearch::default();

    match (id, instance) {
        (BoundId::th4 | BoundId::co1 | BoundId::co2, BoundInstance::Blocks(blocks)) => {
            let pair = match id {
                BoundId::co2 => bounds::SpectralPair::Power(0.5),
                _ => bounds::SpectralPair::Power(params.t),
            };
            let mut rhs = bounds::ub_block_th4(blocks, &pair, base)?;
            rhs.id = id;
            let lhs = berezin_number(&blocks.assemble(), &sum_model(blocks.n()))?;
            Ok((lhs, rhs))
        }
        (BoundId::co5, BoundInstance::Blocks(blocks)) => {
            let rhs = bounds::ub_2x2_co5(blocks, base)?;
            Ok((berezin_number(&blocks.assemble(), &doubled)?, rhs))
        }
        (BoundId::eqn12, BoundInstance::Blocks(blocks)) => {
            let rhs = bounds::ub_2x2_bakherad(blocks, base)?;
            Ok((berezin_number(&blocks.assemble(), &doubled)?, rhs))
        }
        (BoundId::R1E2, BoundInstance::Blocks(blocks)) => {
            let rhs = bounds::ub_2x2_sdr(blocks, base)?;
            Ok((berezin_number(&blocks.assemble(), &doubled)?, rhs))
        }
        (BoundId::th8, BoundInstance::Blocks(blocks)) => {
            let rhs = bounds::ub_bernorm_th8(blocks, base)?;
            Ok((berezin_norm(&blocks.assemble(), &sum_model(blocks.n()))?, rhs))
        }
        (BoundId::c28i, BoundInstance::Blocks(blocks)) => {
            let rhs = bounds::ub_bernorm_c28i(blocks.block(0, 0), blocks.block(1, 1), base)?;
            Ok((berezin_norm(&blocks.assemble(), &doubled)?, rhs))
        }
        (BoundId::c28ii, BoundInstance::Blocks(blocks)) => {
            let rhs = bounds::ub_bernorm_c28ii(blocks.block(0, 1), blocks.block(1, 0), base)?;
            Ok((berezin_norm(&blocks.assemble(), &doubled)?, rhs))
        }
        (BoundId::eqn14, BoundInstance::Blocks(blocks)) => {
            let rhs = bounds::ub_offdiag_eqn14(blocks.block(0, 1), blocks.block(1, 0), base)?;
            Ok((berezin_number(&blocks.assemble(), &doubled)?, rhs))
        }
        (BoundId::lm7i, BoundInstance::Blocks(blocks)) => {
            let rhs = bounds::ub_diag_lm7i(blocks.block(0, 0), blocks.block(1, 1), base)?;
            Ok((berezin_number(&blocks.assemble(), &doubled)?, rhs))
        }
        (BoundId::lm7ii, BoundInstance::Blocks(blocks)) => {
            let rhs = bounds::ub_offdiag_lm7ii(blocks.block(0, 1), blocks.block(1, 0))?;
            Ok((berezin_number(&blocks.assemble(), &doubled)?, rhs))
        }
        (BoundId::th5, BoundInstance::Blocks(blocks)) => {
            let rhs = bounds::ub_offdiag_th5(blocks.block(0, 1), blocks.block(1, 0), alpha, base)?;
            Ok((berezin_number(&blocks.assemble(), &doubled)?, rhs))
        }
        (BoundId::co4, BoundInstance::Blocks(blocks)) => {
            let rhs = bounds::ub_offdiag_co4(blocks.block(0, 1), blocks.block(1, 0), base)?;
            Ok((berezin_number(&blocks.assemble(), &doubled)?, rhs))
        }
        (BoundId::inq2 | BoundId::inq3, BoundInstance::Single { a }) => {
            let rhs = match id {
                BoundId::inq2 => bounds::ub_offdiag_inq2(a, alpha, base)?,
                _ => bounds::ub_offdiag_inq3(a, base)?,
            };
            let z = CMatrix::zeros(a.rows(), a.cols());
            let arr = BlockMatrix::two_by_two(z.clone(), a.clone(), a.clone(), z).unwrap();
            Ok((berezin_number(&arr.assemble(), &doubled)?, rhs))
        }
        (BoundId::inq5 | BoundId::inq6, BoundInstance::Blocks(blocks)) => {
            let (a, b) = (blocks.block(0, 0), blocks.block(0, 1));
            let rhs = match id {
                BoundId::inq5 => bounds::ub_full_inq5(a, b, base)?,
                _ => bounds::ub_full_inq6(a, b, base)?,
            };
            Ok((berezin_number(&blocks.assemble(), &doubled)?, rhs))
        }
        (BoundId::th6 | BoundId::co6, BoundInstance::Blocks(blocks)) => {
            let (a, b, c, dd) = (
                blocks.block(0, 0),
                blocks.block(0, 1),
                blocks.block(1, 0),
                blocks.block(1, 1),
            );
            let rhs = match id {
                BoundId::th6 => bounds::ub_full_th6(a, b, c, dd, alpha, base)?,
                _ => bounds::ub_full_co6(a, b, c, dd, base)?,
            };
            Ok((berezin_number(&blocks.assemble(), &doubled)?, rhs))
        }
        (BoundId::th7, BoundInstance::Blocks(blocks)) => {
            let rhs = bounds::ub_bernorm_th7(
                blocks.block(0, 0),
                blocks.block(0, 1),
                blocks.block(1, 0),
                blocks.block(1, 1),
                base,
            )?;
            Ok((berezin_norm(&blocks.assemble(), &doubled)?, rhs))
        }
        (BoundId::ee5, BoundInstance::Blocks(blocks)) => {
            let rhs = bounds::ub_full_ee5(
                blocks.block(0, 0),
                blocks.block(0, 1),
                blocks.block(1, 0),
                blocks.block(1, 1),
                base,
            )?;
            Ok((berezin_number(&blocks.assemble(), &doubled)?, rhs))
        }
        (BoundId::th9, BoundInstance::Lists { a, b, x }) => {
            let d = base.dim();
            let rhs = bounds::ub_sum_products_th9(a, b, x, params.r, base)?;
            let sum = sum_mats(
                a.iter().zip(b).zip(x).map(|((ai, bi), xi)| ai.adjoint().mul(xi).mul(bi)),
                d,
            );
            Ok((berezin_number(&sum, base)?, rhs))
        }
        (BoundId::cot9i | BoundId::cot9iii | BoundId::cot9iv, BoundInstance::Lists { a, b, .. }) => {
            let d = base.dim();
            let rhs = match id {
                BoundId::cot9i => bounds::ub_cot9i(a, b, params.r, base)?,
                BoundId::cot9iii => bounds::ub_cot9iii(a, b, base)?,
                _ => bounds::ub_cot9iv(a, b, base)?,
            };
            let sum = sum_mats(a.iter().zip(b).map(|(ai, bi)| ai.mul(bi)), d);
            Ok((berezin_number(&sum, base)?, rhs))
        }
        (BoundId::cot9ii, BoundInstance::Lists { a, .. }) => {
            let d = base.dim();
            let rhs = bounds::ub_cot9ii(a, params.r, base)?;
            let sum = sum_mats(a.iter().cloned(), d);
            Ok((berezin_number(&sum, base)?, rhs))
        }
        (BoundId::cot10i, BoundInstance::Triple { a, x, b }) => {
            let rhs = bounds::ub_cot10i(a, x, b, params.r, base)?;
            Ok((berezin_number(&a.adjoint().mul(x).mul(b), base)?, rhs))
        }
        (BoundId::cot10ii, BoundInstance::Pair { a, b }) => {
            let rhs = bounds::ub_cot10ii(a, b, params.r, base)?;
            Ok((berezin_number(&a.adjoint().mul(b), base)?, rhs))
        }
        (BoundId::cot11i, BoundInstance::Triple { a, x, b }) => {
            let rhs = bounds::ub_cot11i(a, x, b, params.t, params.r, base)?;
            let at = apply_spectral_fn(a, |s| s.powf(params.t))?;
            let bt = apply_spectral_fn(b, |s| s.powf(1.0 - params.t))?;
            Ok((berezin_number(&at.mul(x).mul(&bt), base)?, rhs))
        }
        (BoundId::cot11ii, BoundInstance::Pair { a, b }) => {
            let rhs = bounds::ub_cot11ii(a, b, params.t, params.r, base)?;
            let at = apply_spectral_fn(a, |s| s.powf(params.t))?;
            let bt = apply_spectral_fn(b, |s| s.powf(1.0 - params.t))?;
            Ok((berezin_number(&at.mul(&bt), base)?, rhs))
        }
        (BoundId::cot11comm, BoundInstance::Pair { a, b }) => {
            let rhs = bounds::ub_cot11comm(a, b, params.r, base)?;
            let prod = a.mul(b).hermitian_part();
            Ok((berezin_norm(&sqrt_psd(&prod)?, base)?, rhs))
        }
        (BoundId::ee1, BoundInstance::Pair { a, b }) => {
            let rhs = bounds::ub_ee1(a, b, base)?;
            Ok((berezin_number(&a.add(b), base)?, rhs))
        }
        (BoundId::ee2, BoundInstance::Pair { a, b }) => {
            let rhs = bounds::ub_ee2(a, b, params.r, base)?;
            Ok((berezin_number(&a.adjoint().mul(b), base)?, rhs))
        }
        (BoundId::ee3, BoundInstance::Pair { a, b }) => {
            let rhs = bounds::ub_ee3(a, b, base)?;
            let lhs = berezin_number(&sqrt_psd(a)?.mul(&sqrt_psd(b)?), base)?;
            Ok((lhs, rhs))
        }
        (BoundId::ee4, BoundInstance::Single { a }) => {
            let rhs = bounds::ub_ee4(a, params.r, base)?;
            Ok((berezin_number(a, base)?, rhs))
        }
        (BoundId::th10, BoundInstance::Single { a }) => {
            let rhs = bounds::ub_cubed_th10(a, base, &search)?;
            Ok((berezin_number(a, base)?, rhs))
        }
        (BoundId::th10cor1, BoundInstance::Single { a }) => {
            let rhs = bounds::ub_cubed_th10cor1(a, base)?;
            Ok((berezin_number(a, base)?, rhs))
        }
        (BoundId::th11i | BoundId::th11ii, BoundInstance::Single { a }) => {
            let var = if id == BoundId::th11i {
                bounds::Th11Variant::I
            } else {
                bounds::Th11Variant::II
            };
            let rhs = bounds::ub_cubed_th11(var, a, base, &search)?;
            Ok((berezin_number(a, base)?, rhs))
        }
        (BoundId::th11iii | BoundId::th11iv, BoundInstance::Single { a }) => {
            let var = if id == BoundId::th11iii {
                bounds::Th11Variant::III
            } else {
                bounds::Th11Variant::IV
            };
            let rhs = bounds::ub_fourth_th11(var, a, base)?;
            Ok((berezin_number(a, base)?, rhs))
        }
        (BoundId::T20, BoundInstance::Single { a }) => {
            let rhs = bounds::ub_power_t20(a, params.n_power, base)?;
            Ok((berezin_number(a, base)?, rhs))
        }
        _ => Err(VerifyError::NotApplicable(id)),
    }
}

/// Check one bound on one instance over the given base model: the left side
/// is evaluated exactly (finite models) or estimated (Hardy models, verdict
/// guarded), the right side comes from the bound operation, and the verdict
/// compares them at relative tolerance `tol_rel`.
pub fn check_bound(
    id: BoundId,
    instance: &BoundInstance,
    base: &RkhsModel,
    params: &BoundParams,
    tol_rel: f64,
) -> Result<BoundReport> {
    let (lhs, rhs) = evaluate(id, instance, base, params)?;
    Ok(BoundReport::assemble(id, rhs.value(), lhs, params.clone(), tol_rel))
}

/// Fuzz configuration: trial t uses seed `base_seed + t`, dimension
/// `dims[t mod |dims|]` and ensemble `ensembles[(t / |dims|) mod |ensembles|]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzOpts {
    pub base_seed: u64,
    pub dims: Vec<usize>,
    pub ensembles: Vec<Ensemble>,
    pub scale: f64,
    pub tol_rel: f64,
    pub sequential: bool,
}

impl Default for FuzzOpts {
    fn default() -> Self {
        Self {
            base_seed: 0,
            dims: (1..=6).collect(),
            ensembles: Ensemble::FUZZ_DEFAULT.to_vec(),
            scale: 1.0,
            tol_rel: 1e-9,
            sequential: false,
        }
    }
}

impl FuzzOpts {
    pub fn spec_for_trial(&self, trial: u64) -> InstanceSpec {
        let dim = self.dims[(trial as usize) % self.dims.len()];
        let ens = self.ensembles[(trial as usize / self.dims.len()) % self.ensembles.len()];
        InstanceSpec {
            seed: self.base_seed + trial,
            dim,
            n_blocks: 2,
            scale: self.scale,
            ensemble: ens,
        }
    }
}

/// A replayable violation: rerunning the spec through [`check_bound`]
/// reproduces the identical report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub bound_id: BoundId,
    pub spec: InstanceSpec,
    pub params: BoundParams,
    pub report: BoundReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundStat {
    pub bound_id: BoundId,
    pub trials: usize,
    pub holds: usize,
    pub inconclusive: usize,
    pub violations: usize,
    pub min_margin: f64,
}

/// Aggregated fuzz outcome; `trials = holds + inconclusive + violations`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub trials: usize,
    pub holds: usize,
    pub inconclusive: usize,
    pub violations: Vec<ViolationRecord>,
    pub min_margin: f64,
    pub per_bound: Vec<BoundStat>,
}

impl FuzzSummary {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Run `n_trials` seeded checks of every listed bound. Trials are
/// independent and evaluated in parallel; the summary aggregates them in
/// (bound, trial) order, so the output is deterministic.
pub fn fuzz(bound_ids: &[BoundId], n_trials: u64, opts: &FuzzOpts) -> Result<FuzzSummary> {
    if n_trials == 0 {
        return Err(VerifyError::BadSpec("n_trials must be >= 1".into()));
    }
    let jobs: Vec<(BoundId, u64)> = bound_ids
        .iter()
        .flat_map(|&id| (0..n_trials).map(move |t| (id, t)))
        .collect();
    let reports: Vec<Result<(BoundId, InstanceSpec, BoundReport)>> =
        par::map_indexed(jobs.len(), opts.sequential, |k| {
            let (id, trial) = jobs[k];
            let spec = opts.spec_for_trial(trial);
            let params = params_for_seed(spec.seed);
            let instance = gen_for_bound(id, &spec)?;
            let base = RkhsModel::FiniteStandard(spec.dim);
            let report = check_bound(id, &instance, &base, &params, opts.tol_rel)?;
            Ok((id, spec, report))
        });

    let mut summary = FuzzSummary {
        trials: 0,
        holds: 0,
        inconclusive: 0,
        violations: Vec::new(),
        min_margin: f64::INFINITY,
        per_bound: Vec::new(),
    };
    for &id in bound_ids {
        summary.per_bound.push(BoundStat {
            bound_id: id,
            trials: 0,
            holds: 0,
            inconclusive: 0,
            violations: 0,
            min_margin: f64::INFINITY,
        });
    }
    for (k, res) in reports.into_iter().enumerate() {
        let (id, spec, report) = res?;
        let stat = &mut summary.per_bound[k / n_trials as usize];
        summary.trials += 1;
        stat.trials += 1;
        summary.min_margin = summary.min_margin.min(report.margin);
        stat.min_margin = stat.min_margin.min(report.margin);
        match report.verdict {
            Verdict::Holds => {
                summary.holds += 1;
                stat.holds += 1;
            }
            Verdict::Inconclusive => {
                summary.inconclusive += 1;
                stat.inconclusive += 1;
            }
            Verdict::ViolatedBeyondTolerance => {
                stat.violations += 1;
                let params = params_for_seed(spec.seed);
                summary.violations.push(ViolationRecord { bound_id: id, spec, params, report });
            }
        }
    }
    Ok(summary)
}

/// Evaluate several bounds on one instance and return them sorted ascending
/// by value (ties broken by identifier), so tighter bounds come first.
pub fn compare_bounds(
    bound_ids: &[BoundId],
    instance: &BoundInstance,
    base: &RkhsModel,
    params: &BoundParams,
) -> Result<Vec<(BoundId, f64)>> {
    let mut rows = Vec::with_capacity(bound_ids.len());
    for &id in bound_ids {
        let (_, rhs) = evaluate(id, instance, base, params)?;
        rows.push((id, rhs.value()));
    }
    rows.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.as_str().cmp(b.0.as_str())));
    Ok(rows)
}

// ---------------------------------------------------------------------------
// lemma property suites
// ---------------------------------------------------------------------------

/// The lemma-level properties backing the bound proofs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum LemmaId {
    lm1,
    lm5,
    lm6,
    lm8,
    lm9,
    lm11,
    lm13,
    lmi,
    lm7i,
    lm7ii,
    lm10,
}

impl LemmaId {
    pub const ALL: [LemmaId; 11] = [
        LemmaId::lm1,
        LemmaId::lm5,
        LemmaId::lm6,
        LemmaId::lm8,
        LemmaId::lm9,
        LemmaId::lm11,
        LemmaId::lm13,
        LemmaId::lmi,
        LemmaId::lm7i,
        LemmaId::lm7ii,
        LemmaId::lm10,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            LemmaId::lm1 => "lm1",
            LemmaId::lm5 => "lm5",
            LemmaId::lm6 => "lm6",
            LemmaId::lm8 => "lm8",
            LemmaId::lm9 => "lm9",
            LemmaId::lm11 => "lm11",
            LemmaId::lm13 => "lm13",
            LemmaId::lmi => "lmi",
            LemmaId::lm7i => "lm7i",
            LemmaId::lm7ii => "lm7ii",
            LemmaId::lm10 => "lm10",
        }
    }

    /// Vector-level identities check at 1e-12; operator-level statements
    /// (eigensolver in the loop) at 1e-9; the two radius routes at 1e-8.
    pub fn tolerance(&self) -> f64 {
        match self {
            LemmaId::lm6 | LemmaId::lm9 | LemmaId::lm13 => 1e-12,
            LemmaId::lmi => 1e-8,
            _ => 1e-9,
        }
    }
}

impl std::fmt::Display for LemmaId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for LemmaId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        LemmaId::ALL
            .iter()
            .find(|id| id.as_str() == s)
            .copied()
            .ok_or_else(|| format!("unknown lemma id `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub trials: usize,
    /// Smallest rhs - lhs slack seen across all sampled inequalities.
    pub min_slack: f64,
    pub holds: bool,
}

fn cvec(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|_| cgauss(rng)).collect()
}

fn unit(v: &mut [Complex64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    } else {
        v[0] = Complex64::ONE;
    }
}

fn vdot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(&a, &b)| a * b.conj()).sum()
}

fn vnorm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Sample one lemma's inequality on `trials` seeded instances of the given
/// dimension; the verdict holds when every sampled slack stays above the
/// lemma's tolerance.
pub fn check_lemma(id: LemmaId, seed: u64, dim: usize, trials: usize) -> Result<LemmaReport> {
    let spec = InstanceSpec::new(seed, dim.max(1), Ensemble::ComplexGaussian);
    let mut rng = rng_for(&spec, &format!("lemma:{id}"));
    let d = dim.max(1);
    let mut min_slack = f64::INFINITY;
    let mut slack = |lhs: f64, rhs: f64| {
        min_slack = min_slack.min(rhs - lhs);
    };

    for k in 0..trials {
        match id {
            LemmaId::lm1 => {
                let a = gen_matrix(&mut rng, d, Ensemble::Psd, 1.0);
                let mut x = cvec(&mut rng, d);
                unit(&mut x);
                let r = 1 + (k % 3);
                let ax = vdot(&a.matvec(&x), &x).re;
                let arx = vdot(&a.pow(r).matvec(&x), &x).re;
                slack(ax.max(0.0).powi(r as i32), arx);
            }
            LemmaId::lm5 => {
                let a = gen_matrix(&mut rng, d, Ensemble::ComplexGaussian, 1.0);
                let (x, y) = (cvec(&mut rng, d), cvec(&mut rng, d));
                let s = [0.25, 0.5, 0.75][k % 3];
                let fa = apply_spectral_fn(&a.gram(), |t| t.powf(s))?;
                let gas = apply_spectral_fn(&a.mul(&a.adjoint()), |t| t.powf(1.0 - s))?;
                let lhs = vdot(&a.matvec(&x), &y).norm();
                let rhs = vnorm(&fa.matvec(&x)) * vnorm(&gas.matvec(&y));
                slack(lhs, rhs);
            }
            LemmaId::lm6 => {
                let (x1, x2) = (cvec(&mut rng, d), cvec(&mut rng, d));
                let mut e = cvec(&mut rng, d);
                unit(&mut e);
                let alphas = [
                    Complex64::new(1.0, 0.0),
                    Complex64::new(2.0, 0.0),
                    Complex64::new(3.0, 4.0),
                ];
                let alpha = alphas[k % 3];
                let am = alpha.norm();
                let mx = 1f64.max((alpha - Complex64::ONE).norm());
                let lhs = (vdot(&x1, &e) * vdot(&e, &x2)).norm();
                let rhs =
                    (mx * vnorm(&x1) * vnorm(&x2) + vdot(&x1, &x2).norm()) / am;
                slack(lhs, rhs);
            }
            LemmaId::lm8 => {
                let a = gen_matrix(&mut rng, d, Ensemble::ComplexGaussian, 1.0);
                let mut x = cvec(&mut rng, d);
                let mut y = cvec(&mut rng, d);
                unit(&mut x);
                unit(&mut y);
                let abs_a = abs_op(&a)?;
                let abs_as = abs_op(&a.adjoint())?;
                let lhs = vdot(&a.matvec(&x), &y).norm_sqr();
                let rhs = vdot(&abs_a.matvec(&x), &x).re * vdot(&abs_as.matvec(&y), &y).re;
                slack(lhs, rhs);
            }
            LemmaId::lm9 => {
                let vals: Vec<f64> = (0..d.max(2)).map(|_| gauss(&mut rng).abs()).collect();
                let r = 1 + (k % 3) as i32;
                let n = vals.len() as f64;
                let lhs = vals.iter().sum::<f64>().powi(r);
                let rhs = n.powi(r - 1) * vals.iter().map(|a| a.powi(r)).sum::<f64>();
                // relative slack: the quantities grow with n^r
                slack(lhs / rhs.max(1e-300), 1.0);
            }
            LemmaId::lm11 => {
                let model = RkhsModel::FiniteStandard(d);
                let n = 2 + k % 2;
                let ops: Vec<CMatrix> =
                    (0..n).map(|_| gen_matrix(&mut rng, d, Ensemble::Psd, 1.0)).collect();
                let r = 1 + (k % 3) as u32;
                let sum = sum_mats(ops.iter().cloned(), d);
                let lhs = berezin_norm(&sum, &model)?.value.powi(r as i32);
                let rhs = crate::berezin::psd_power_sum_norm_bound(&ops, r, &model)?;
                slack(lhs, rhs);
            }
            LemmaId::lm13 => {
                let n = 3 + k % 2;
                let xs: Vec<Vec<Complex64>> = (0..n).map(|_| cvec(&mut rng, d)).collect();
                let mut e = cvec(&mut rng, d);
                unit(&mut e);
                let alpha = [Complex64::new(2.0, 0.0), Complex64::new(3.0, 4.0)][k % 2];
                let am = alpha.norm();
                let mx = 1f64.max((alpha - Complex64::ONE).norm());
                let lhs: f64 = xs.iter().map(|x| vdot(x, &e).norm()).product();
                let tail: Complex64 = xs[2..].iter().map(|x| vdot(x, &e)).product();
                let rhs = ((vdot(&xs[0], &xs[1]) * tail).norm()
                    + mx * xs.iter().map(|x| vnorm(x)).product::<f64>())
                    / am;
                slack(lhs, rhs);
            }
            LemmaId::lmi => {
                let g = gen_matrix(&mut rng, d, Ensemble::RealGaussian, 1.0);
                let mut nn = CMatrix::zeros(d, d);
                for i in 0..d {
                    for j in 0..d {
                        nn[(i, j)] = Complex64::new(g[(i, j)].re.abs(), 0.0);
                    }
                }
                let w_sweep = numerical_radius(&nn, linalg::DEFAULT_ANGLES)?;
                let w_sym = numerical_radius_entrywise_nonneg(&nn)?;
                slack((w_sweep - w_sym).abs(), 0.0);
            }
            LemmaId::lm7i => {
                let model = RkhsModel::FiniteStandard(d);
                let doubled = RkhsModel::DirectSum(vec![model.clone(), model.clone()]);
                let a = gen_matrix(&mut rng, d, Ensemble::ComplexGaussian, 1.0);
                let dd = gen_matrix(&mut rng, d, Ensemble::ComplexGaussian, 1.0);
                let z = CMatrix::zeros(d, d);
                let arr = BlockMatrix::two_by_two(a.clone(), z.clone(), z, dd.clone()).unwrap();
                let lhs = berezin_number(&arr.assemble(), &doubled)?.value;
                let rhs = berezin_number(&a, &model)?.value.max(berezin_number(&dd, &model)?.value);
                slack(lhs, rhs);
            }
            LemmaId::lm7ii => {
                let model = RkhsModel::FiniteStandard(d);
                let doubled = RkhsModel::DirectSum(vec![model.clone(), model.clone()]);
                let b = gen_matrix(&mut rng, d, Ensemble::ComplexGaussian, 1.0);
                let c = gen_matrix(&mut rng, d, Ensemble::ComplexGaussian, 1.0);
                let z = CMatrix::zeros(d, d);
                let arr = BlockMatrix::two_by_two(z.clone(), b.clone(), c.clone(), z).unwrap();
                let lhs = berezin_number(&arr.assemble(), &doubled)?.value;
                let rhs = 0.5 * (op_norm(&b)? + op_norm(&c)?);
                slack(lhs, rhs);
            }
            LemmaId::lm10 => {
                // over the doubled standard model the corner embedding halves
                // the Berezin number exactly, which gives the monotonicity
                // transfer of the hypothesis
                let model = RkhsModel::FiniteStandard(d);
                let doubled = RkhsModel::DirectSum(vec![model.clone(), model.clone()]);
                let a = gen_matrix(&mut rng, d, Ensemble::ComplexGaussian, 1.0);
                let corner = BlockMatrix::corner_embed(&a).assemble();
                let lhs = (berezin_number(&corner, &doubled)?.value
                    - 0.5 * berezin_number(&a, &model)?.value)
                    .abs();
                slack(lhs, 0.0);
            }
        }
    }

    let tol = id.tolerance();
    Ok(LemmaReport { lemma: id, trials, min_slack, holds: min_slack >= -tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let spec = InstanceSpec::new(7, 4, Ensemble::ComplexGaussian);
        let a = gen_instance(&spec).unwrap();
        let b = gen_instance(&spec).unwrap();
        assert_eq!(a, b);
        let i1 = gen_for_bound(BoundId::th6, &spec).unwrap();
        let i2 = gen_for_bound(BoundId::th6, &spec).unwrap();
        assert_eq!(i1, i2);
    }

    #[test]
    fn zero_scale_gives_zero_matrices() {
        for ens in [
            Ensemble::ComplexGaussian,
            Ensemble::RealGaussian,
            Ensemble::Nilpotent,
            Ensemble::Psd,
            Ensemble::Unitary,
        ] {
            let spec = InstanceSpec { scale: 0.0, ..InstanceSpec::new(3, 3, ens) };
            let blocks = gen_instance(&spec).unwrap();
            assert!(blocks.assemble().is_zero(), "{ens}");
        }
    }

    #[test]
    fn psd_ensemble_is_psd() {
        let spec = InstanceSpec::new(11, 5, Ensemble::Psd);
        let blocks = gen_instance(&spec).unwrap();
        let eig = linalg::herm_eig(blocks.block(0, 0)).unwrap();
        assert!(eig.lambda_min() >= -1e-12);
    }

    #[test]
    fn unitary_ensemble_is_unitary() {
        let spec = InstanceSpec::new(3, 4, Ensemble::Unitary);
        let mut rng = rng_for(&spec, "u");
        let u = gen_matrix(&mut rng, 4, Ensemble::Unitary, 1.0);
        let err = u.gram().sub(&CMatrix::identity(4)).frobenius();
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn check_bound_holds_on_seeded_instances() {
        let base = RkhsModel::FiniteStandard(3);
        for id in [BoundId::co5, BoundId::th8, BoundId::th10cor1, BoundId::cot9ii] {
            for seed in 0..5 {
                let spec = InstanceSpec::new(seed, 3, Ensemble::ComplexGaussian);
                let params = params_for_seed(seed);
                let inst = gen_for_bound(id, &spec).unwrap();
                let report = check_bound(id, &inst, &base, &params, 1e-9).unwrap();
                assert_eq!(report.verdict, Verdict::Holds, "{id} seed {seed}: {report:?}");
            }
        }
    }

    #[test]
    fn three_by_three_block_grid_holds() {
        let base = RkhsModel::FiniteStandard(2);
        for seed in 0..6 {
            let spec = InstanceSpec { n_blocks: 3, ..InstanceSpec::new(seed, 2, Ensemble::ComplexGaussian) };
            let inst = gen_for_bound(BoundId::th4, &spec).unwrap();
            if let BoundInstance::Blocks(b) = &inst {
                assert_eq!(b.n(), 3);
            }
            let report = check_bound(BoundId::th4, &inst, &base, &params_for_seed(seed), 1e-9).unwrap();
            assert_eq!(report.verdict, Verdict::Holds, "seed {seed}");
        }
    }

    #[test]
    fn replaying_a_spec_reproduces_the_report() {
        let base = RkhsModel::FiniteStandard(4);
        let spec = InstanceSpec::new(42, 4, Ensemble::Psd);
        let params = params_for_seed(42);
        let inst = gen_for_bound(BoundId::th6, &spec).unwrap();
        let r1 = check_bound(BoundId::th6, &inst, &base, &params, 1e-9).unwrap();
        let inst2 = gen_for_bound(BoundId::th6, &spec).unwrap();
        let r2 = check_bound(BoundId::th6, &inst2, &base, &params, 1e-9).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn small_fuzz_run_is_clean() {
        let opts = FuzzOpts { dims: vec![2, 3], ..FuzzOpts::default() };
        let summary = fuzz(&[BoundId::co5, BoundId::eqn12, BoundId::inq5], 8, &opts).unwrap();
        assert_eq!(summary.trials, 24);
        assert_eq!(summary.trials, summary.holds + summary.inconclusive + summary.violations.len());
        assert!(summary.ok(), "{:?}", summary.violations);
    }

    #[test]
    fn compare_orders_remark_instance() {
        // the corner instance where the closed form beats the operator-norm
        // baseline: values (1.5, 2)
        let e00 = CMatrix::unit(2, 0, 0);
        let e01 = CMatrix::unit(2, 0, 1);
        let blocks =
            BlockMatrix::two_by_two(e00.clone(), e01.clone(), e01, e00).unwrap();
        let inst = BoundInstance::Blocks(blocks);
        let base = RkhsModel::FiniteStandard(2);
        let rows = compare_bounds(
            &[BoundId::eqn12, BoundId::co5],
            &inst,
            &base,
            &BoundParams::default(),
        )
        .unwrap();
        assert_eq!(rows[0].0, BoundId::co5);
        assert!((rows[0].1 - 1.5).abs() < 1e-12);
        assert!((rows[1].1 - 2.0).abs() < 1e-12);
        // idempotence
        let again = compare_bounds(
            &[BoundId::eqn12, BoundId::co5],
            &inst,
            &base,
            &BoundParams::default(),
        )
        .unwrap();
        assert_eq!(rows, again);
    }

    #[test]
    fn lemma_suites_quick() {
        for id in LemmaId::ALL {
            let report = check_lemma(id, 0, 4, 50).unwrap();
            assert!(report.holds, "{id}: min slack {}", report.min_slack);
        }
    }

    #[test]
    fn lm9_equality_saturates() {
        // equal summands: (n a)^r = n^(r-1) * n * a^r to machine precision
        for r in [1, 2, 3] {
            let n = 5f64;
            let a = 0.7f64;
            let lhs = (n * a).powi(r);
            let rhs = n.powi(r - 1) * (n * a.powi(r));
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
        }
    }
}
