//! The worked-example suite: every published computational example with its
//! reference value, recomputed through the public API and compared at a
//! per-example tolerance.
//!
//! Finite-model examples are exact arithmetic (tolerance 1e-9 or tighter);
//! Hardy-space examples run the truncated model (default dimension 400,
//! disk radius 0.999) and carry tolerances covering the truncation and grid
//! error. Values the sources print at a power (squared or cubed bounds) are
//! compared at that same power.

use serde::{Deserialize, Serialize};

use crate::berezin::{berezin_norm, berezin_number};
use crate::block::BlockMatrix;
use crate::bounds;
use crate::linalg::CMatrix;
use crate::rkhs::{hardy_operator, HardyKind, RkhsModel};
use crate::verify::VerifyError;

pub type Result<T> = std::result::Result<T, VerifyError>;

/// Truncation parameters for the Hardy-space examples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyOpts {
    pub dim: usize,
    pub r_max: f64,
}

impl Default for HardyOpts {
    fn default() -> Self {
        Self { dim: crate::rkhs::HARDY_DEFAULT_DIM, r_max: crate::rkhs::HARDY_DEFAULT_RMAX }
    }
}

impl HardyOpts {
    fn model(&self) -> RkhsModel {
        RkhsModel::HardyTruncated { dim: self.dim, r_max: self.r_max }
    }
}

/// How a line is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckKind {
    /// |computed - reference| <= tol.
    TwoSided,
    /// computed >= reference (a certified lower estimate of a supremum).
    AtLeast,
    /// Reported for the record; never gates the suite.
    Info,
}

/// One reproduced value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproLine {
    pub example: &'static str,
    pub item: String,
    pub reference: f64,
    pub computed: f64,
    pub tol: f64,
    pub kind: CheckKind,
    pub pass: bool,
}

impl ReproLine {
    fn check(example: &'static str, item: &str, reference: f64, computed: f64, tol: f64) -> Self {
        let pass = (computed - reference).abs() <= tol;
        Self { example, item: item.into(), reference, computed, tol, kind: CheckKind::TwoSided, pass }
    }

    fn at_least(example: &'static str, item: &str, threshold: f64, computed: f64) -> Self {
        Self {
            example,
            item: item.into(),
            reference: threshold,
            computed,
            tol: 0.0,
            kind: CheckKind::AtLeast,
            pass: computed >= threshold,
        }
    }

    fn info(example: &'static str, item: &str, reference: f64, computed: f64) -> Self {
        Self { example, item: item.into(), reference, computed, tol: 0.0, kind: CheckKind::Info, pass: true }
    }

    /// True when this line can fail the suite.
    pub fn gating(&self) -> bool {
        self.kind != CheckKind::Info
    }
}

/// Identifiers of all reproducible examples.
pub const EXAMPLE_IDS: [&str; 13] = [
    "ex_co5_hardy",
    "ex_th8_hardy",
    "ex_c28_hardy",
    "rem_eqn12",
    "rem_R1E2",
    "rem_eqn14_a",
    "rem_eqn14_b",
    "rem_inq5",
    "rem_ee5",
    "rem_ee1",
    "rem_ee2",
    "rem_ee3",
    "rem_ee4",
];

fn e2(i: usize, j: usize) -> CMatrix {
    CMatrix::unit(2, i, j)
}

fn z2() -> CMatrix {
    CMatrix::zeros(2, 2)
}

fn fs2() -> RkhsModel {
    RkhsModel::FiniteStandard(2)
}

/// Run one example and return its lines.
pub fn run_example(id: &str, hardy: &HardyOpts) -> Result<Vec<ReproLine>> {
    match id {
        "ex_co5_hardy" => ex_co5_hardy(hardy),
        "ex_th8_hardy" => ex_th8_hardy(hardy),
        "ex_c28_hardy" => ex_c28_hardy(hardy),
        "rem_eqn12" => rem_eqn12(),
        "rem_R1E2" => rem_r1e2(),
        "rem_eqn14_a" => rem_eqn14_a(),
        "rem_eqn14_b" => rem_eqn14_b(),
        "rem_inq5" => rem_inq5(),
        "rem_ee5" => rem_ee5(),
        "rem_ee1" => rem_ee1(),
        "rem_ee2" => rem_ee2(),
        "rem_ee3" => rem_ee3(),
        "rem_ee4" => rem_ee4(),
        other => Err(VerifyError::BadSpec(format!("unknown example id `{other}`"))),
    }
}

/// Run the whole suite in the declared order.
pub fn run_all(hardy: &HardyOpts) -> Result<Vec<ReproLine>> {
    let mut lines = Vec::new();
    for id in EXAMPLE_IDS {
        lines.extend(run_example(id, hardy)?);
    }
    Ok(lines)
}

/// Shift / projection corner arrangement on the truncated Hardy space; the
/// closed-form 2x2 bound evaluates to 1.5.
fn ex_co5_hardy(hardy: &HardyOpts) -> Result<Vec<ReproLine>> {
    let m = hardy.model();
    let n = hardy.dim;
    let blocks = BlockMatrix::two_by_two(
        hardy_operator(HardyKind::Mz, n).map_err(crate::berezin::BerezinError::from)?,
        hardy_operator(HardyKind::PConst, n).map_err(crate::berezin::BerezinError::from)?,
        hardy_operator(HardyKind::PMonomial(1), n).map_err(crate::berezin::BerezinError::from)?,
        hardy_operator(HardyKind::Mz2, n).map_err(crate::berezin::BerezinError::from)?,
    )
    .expect("conformal");
    let bound = bounds::ub_2x2_co5(&blocks, &m)?;
    let ber_mz = berezin_number(blocks.block(0, 0), &m)?;
    Ok(vec![
        ReproLine::check("ex_co5_hardy", "co5 bound on the shift/projection corner", 1.5, bound.value(), 5e-3),
        ReproLine::at_least("ex_co5_hardy", "ber(Mz) lower estimate", 0.99, ber_mz.value),
    ])
}

/// Grid of the four monomial projections; the blockwise-norm bound is the
/// norm of [[1, 1/4], [4/27, 27/256]], about 1.045.
fn ex_th8_hardy(hardy: &HardyOpts) -> Result<Vec<ReproLine>> {
    let m = hardy.model();
    let n = hardy.dim;
    let op = |k: HardyKind| hardy_operator(k, n).map_err(crate::berezin::BerezinError::from);
    let blocks = BlockMatrix::two_by_two(
        op(HardyKind::PConst)?,
        op(HardyKind::PMonomial(1))?,
        op(HardyKind::PMonomial(2))?,
        op(HardyKind::PMonomial(3))?,
    )
    .expect("conformal");
    let mut lines = vec![ReproLine::check(
        "ex_th8_hardy",
        "blockwise-norm bound",
        1.045,
        bounds::ub_bernorm_th8(&blocks, &m)?.value(),
        2e-3,
    )];
    for (label, kind, expect) in [
        ("||P_const||_ber", HardyKind::PConst, 1.0),
        ("||P_z||_ber", HardyKind::PMonomial(1), 0.25),
        ("||P_z2||_ber", HardyKind::PMonomial(2), 4.0 / 27.0),
        ("||P_z3||_ber", HardyKind::PMonomial(3), 27.0 / 256.0),
    ] {
        let est = berezin_norm(&op(kind)?, &m)?;
        lines.push(ReproLine::check("ex_th8_hardy", label, expect, est.value, 1e-3));
    }
    Ok(lines)
}

/// Diagonal projection pair over the doubled Hardy model: the joint
/// normalization pulls the norm down to 0.536, strictly below the blockwise
/// maximum 1. The maximizer sits at |lambda2|^2 = 2 - sqrt(3) on the second
/// coordinate with the first at the origin.
fn ex_c28_hardy(hardy: &HardyOpts) -> Result<Vec<ReproLine>> {
    let n = hardy.dim;
    let m2 = RkhsModel::DirectSum(vec![hardy.model(), hardy.model()]);
    let op = |k: HardyKind| hardy_operator(k, n).map_err(crate::berezin::BerezinError::from);
    let p = BlockMatrix::two_by_two(
        op(HardyKind::PConst)?,
        CMatrix::zeros(n, n),
        CMatrix::zeros(n, n),
        op(HardyKind::PMonomial(1))?,
    )
    .expect("conformal");
    let est = berezin_norm(&p.assemble(), &m2)?;
    let c28 = bounds::ub_bernorm_c28i(p.block(0, 0), p.block(1, 1), &m2)?;
    Ok(vec![
        ReproLine::check("ex_c28_hardy", "||diag(P_const, P_z)||_ber", 0.536, est.value, 2e-3),
        ReproLine::check("ex_c28_hardy", "blockwise-max bound", 1.0, c28.value(), 1e-9),
    ])
}

fn remark_i_blocks() -> BlockMatrix {
    BlockMatrix::two_by_two(e2(0, 0), e2(0, 1), e2(0, 1), e2(0, 0)).unwrap()
}

fn remark_ii_blocks() -> BlockMatrix {
    let b = CMatrix::from_real(&[&[1.0, 1.0], &[0.0, 0.0]]);
    let c = CMatrix::from_real(&[&[1.0, 0.0], &[1.0, 0.0]]);
    BlockMatrix::two_by_two(z2(), b, c, z2()).unwrap()
}

/// Corner instance where the closed form (1.5) beats the operator-norm
/// baseline (2).
fn rem_eqn12() -> Result<Vec<ReproLine>> {
    let m = fs2();
    let blocks = remark_i_blocks();
    Ok(vec![
        ReproLine::check("rem_eqn12", "co5", 1.5, bounds::ub_2x2_co5(&blocks, &m)?.value(), 1e-9),
        ReproLine::check("rem_eqn12", "eqn12", 2.0, bounds::ub_2x2_bakherad(&blocks, &m)?.value(), 1e-9),
    ])
}

/// Off-diagonal instance where the closed form (1) beats the embedded-radius
/// baseline (sqrt 2).
fn rem_r1e2() -> Result<Vec<ReproLine>> {
    let m = fs2();
    let blocks = remark_ii_blocks();
    Ok(vec![
        ReproLine::check("rem_R1E2", "co5", 1.0, bounds::ub_2x2_co5(&blocks, &m)?.value(), 1e-9),
        ReproLine::check("rem_R1E2", "R1E2", 2f64.sqrt(), bounds::ub_2x2_sdr(&blocks, &m)?.value(), 1e-9),
    ])
}

/// First half of the incomparability pair: blockwise Berezin norms win.
fn rem_eqn14_a() -> Result<Vec<ReproLine>> {
    let m = fs2();
    let b = CMatrix::from_real(&[&[1.0, 1.0], &[0.0, 0.0]]);
    let c = CMatrix::from_real(&[&[1.0, 0.0], &[1.0, 0.0]]);
    Ok(vec![
        ReproLine::check("rem_eqn14_a", "eqn14", 1.0, bounds::ub_offdiag_eqn14(&b, &c, &m)?.value(), 1e-9),
        ReproLine::check("rem_eqn14_a", "lm7ii", 2f64.sqrt(), bounds::ub_offdiag_lm7ii(&b, &c)?.value(), 1e-9),
    ])
}

/// Second half: the operator-norm average wins.
fn rem_eqn14_b() -> Result<Vec<ReproLine>> {
    let m = fs2();
    let b = e2(0, 0);
    let c = e2(1, 1).scale_re(2.0);
    Ok(vec![
        ReproLine::check("rem_eqn14_b", "eqn14", 2.0, bounds::ub_offdiag_eqn14(&b, &c, &m)?.value(), 1e-9),
        ReproLine::check("rem_eqn14_b", "lm7ii", 1.5, bounds::ub_offdiag_lm7ii(&b, &c)?.value(), 1e-9),
    ])
}

/// Symmetric arrangement: the mixed-term bound sqrt(2) vs the absolute-value
/// average 1.5.
fn rem_inq5() -> Result<Vec<ReproLine>> {
    let m = fs2();
    let a = e2(0, 1);
    let b = e2(0, 0);
    Ok(vec![
        ReproLine::check("rem_inq5", "inq5", 2f64.sqrt(), bounds::ub_full_inq5(&a, &b, &m)?.value(), 1e-9),
        ReproLine::check("rem_inq5", "inq6", 1.5, bounds::ub_full_inq6(&a, &b, &m)?.value(), 1e-12),
    ])
}

/// Full 2x2 instance where the rotated-absolute-value bound (about 2.4)
/// beats the baseline (3).
fn rem_ee5() -> Result<Vec<ReproLine>> {
    let m = fs2();
    let a = CMatrix::from_real(&[&[1.0, 1.0], &[0.0, 0.0]]);
    let c = a.adjoint();
    let b = CMatrix::from_real(&[&[0.0, 0.0], &[1.0, 1.0]]);
    let d = b.adjoint();
    Ok(vec![
        ReproLine::check("rem_ee5", "th7", 2.4, bounds::ub_bernorm_th7(&a, &b, &c, &d, &m)?.value(), 5e-2),
        ReproLine::check("rem_ee5", "ee5", 3.0, bounds::ub_full_ee5(&a, &b, &c, &d, &m)?.value(), 1e-9),
    ])
}

/// Squared-sum comparison: 2.5 vs sqrt(10), both at the squared power.
fn rem_ee1() -> Result<Vec<ReproLine>> {
    let m = fs2();
    let a1 = e2(0, 0);
    let a2 = e2(0, 1);
    Ok(vec![
        ReproLine::check("rem_ee1", "cot9ii (squared)", 2.5, bounds::ub_cot9ii(&[a1.clone(), a2.clone()], 2, &m)?.raw, 1e-9),
        ReproLine::check("rem_ee1", "ee1 (squared)", 10f64.sqrt(), bounds::ub_ee1(&a1, &a2, &m)?.raw, 1e-9),
    ])
}

/// Squared-product comparison: 1.25 vs sqrt(2), both at the squared power.
fn rem_ee2() -> Result<Vec<ReproLine>> {
    let m = fs2();
    let a = CMatrix::from_real(&[&[1.0, 1.0], &[0.0, 0.0]]);
    let b = e2(0, 1);
    Ok(vec![
        ReproLine::check("rem_ee2", "cot10ii (squared)", 1.25, bounds::ub_cot10ii(&a, &b, 2, &m)?.raw, 1e-9),
        ReproLine::check("rem_ee2", "ee2 (squared)", 2f64.sqrt(), bounds::ub_ee2(&a, &b, 2, &m)?.raw, 1e-9),
    ])
}

/// Interpolated positive pair. The published right side of the baseline has
/// two readings: the degree-consistent squared-norm form reproduces the
/// published value 1/2^6, while the literal printed form evaluates to 1/2^4.
/// Both are reported; neither line gates the suite.
fn rem_ee3() -> Result<Vec<ReproLine>> {
    let m = fs2();
    let a = CMatrix::diag_real(&[0.25, 0.5]);
    let b = CMatrix::diag_real(&[0.25, 0.0]);
    Ok(vec![
        ReproLine::check(
            "rem_ee3",
            "cot11ii (fourth power)",
            1.0 / 256.0,
            bounds::ub_cot11ii(&a, &b, 0.5, 4, &m)?.raw,
            1e-9,
        ),
        ReproLine::info(
            "rem_ee3",
            "ee3 squared-norm form (published value 1/2^6)",
            1.0 / 64.0,
            bounds::ub_ee3(&a, &b, &m)?.raw,
        ),
        ReproLine::info(
            "rem_ee3",
            "ee3 literal printed form (derived value 1/2^4)",
            1.0 / 16.0,
            bounds::ub_ee3_literal(&a, &b, &m)?.raw,
        ),
    ])
}

/// Cubed-power comparison on the 3x3 nilpotent Jordan block: 0.75 vs 1.
fn rem_ee4() -> Result<Vec<ReproLine>> {
    let m = RkhsModel::FiniteStandard(3);
    let mut jordan = CMatrix::zeros(3, 3);
    jordan[(0, 1)] = num_complex::Complex64::ONE;
    jordan[(1, 2)] = num_complex::Complex64::ONE;
    Ok(vec![
        ReproLine::check("rem_ee4", "th10cor1 (cubed)", 0.75, bounds::ub_cubed_th10cor1(&jordan, &m)?.raw, 1e-9),
        ReproLine::check("rem_ee4", "ee4 (cubed)", 1.0, bounds::ub_ee4(&jordan, 3, &m)?.raw, 1e-9),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Small truncation keeps the finite examples fast in unit tests; the
    /// full-size run lives in the acceptance suite.
    #[test]
    fn finite_remark_examples_pass() {
        let hardy = HardyOpts { dim: 16, r_max: 0.9 };
        for id in EXAMPLE_IDS.iter().filter(|id| id.starts_with("rem_")) {
            let lines = run_example(id, &hardy).unwrap();
            for line in lines {
                assert!(
                    !line.gating() || line.pass,
                    "{}/{}: ref {} got {}",
                    line.example,
                    line.item,
                    line.reference,
                    line.computed
                );
            }
        }
    }

    #[test]
    fn unknown_example_is_an_error() {
        assert!(run_example("nope", &HardyOpts::default()).is_err());
    }
}
