//! Command-line argument types and the four command implementations.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use berkit::berezin::{berezin_inf_c, berezin_norm, berezin_number, berezin_symbol};
use berkit::bounds::BoundId;
use berkit::linalg::{self, numerical_radius, op_norm};
use berkit::reproduce::{run_all, run_example, CheckKind, HardyOpts, ReproLine, EXAMPLE_IDS};
use berkit::rkhs::{RkhsModel, RkhsPoint};
use berkit::verify::{check_bound, fuzz, Ensemble, FuzzOpts};

use crate::{spec_file, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "berkit", version, about = "Berezin symbols, numbers, norms and operator-matrix bounds")]
pub struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the main report to a file as well as stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cap the worker thread pool.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Compute a Berezin quantity of the operator in a spec file.
    Compute(ComputeArgs),
    /// Evaluate one upper bound on the instance in a spec file.
    Bound(BoundArgs),
    /// Fuzz bounds on seeded random instances over exact finite models.
    Verify(VerifyArgs),
    /// Recompute the worked examples and compare against their references.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
pub struct ComputeArgs {
    /// Operator spec file (TOML).
    file: PathBuf,
    /// Quantity to compute.
    #[arg(long, value_parser = ["symbol", "ber", "bernorm", "c", "wnum", "opnorm"])]
    quantity: String,
    /// Model point for `symbol`: an index, `re,im`, or a `;`-separated tuple.
    #[arg(long)]
    point: Option<String>,
}

#[derive(Args)]
pub struct BoundArgs {
    /// Operator spec file (TOML).
    file: PathBuf,
    /// Bound identifier (see `--help` output of `verify` for the list).
    #[arg(long)]
    id: String,
    /// Relative verdict tolerance on exact models.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Comma-separated bound ids, or `all`.
    #[arg(long, default_value = "all")]
    bounds: String,
    /// Seeded trials per bound.
    #[arg(long, default_value_t = 250)]
    trials: u64,
    /// Base seed; trial t uses seed base+t.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Matrix dimensions to cycle through, e.g. `1-6` or `2,3,5`.
    #[arg(long, default_value = "1-6")]
    dims: String,
    /// Scale applied to every ensemble draw.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Relative verdict tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
pub struct ReproduceArgs {
    /// Example id, or `all`.
    #[arg(default_value = "all")]
    example: String,
    /// Hardy truncation dimension.
    #[arg(long, default_value_t = berkit::rkhs::HARDY_DEFAULT_DIM)]
    hardy_dim: usize,
    /// Hardy disk radius.
    #[arg(long, default_value_t = berkit::rkhs::HARDY_DEFAULT_RMAX)]
    hardy_rmax: f64,
}

/// Run a parsed command line; returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32, CliError> {
    if let Some(n) = cli.threads {
        berkit::par::set_threads(n.max(1));
    }
    match &cli.command {
        Command::Compute(args) => cmd_compute(cli, args),
        Command::Bound(args) => cmd_bound(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Reproduce(args) => cmd_reproduce(cli, args),
    }
}

fn load(path: &PathBuf) -> Result<spec_file::ResolvedSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let doc = spec_file::parse(&text, &path.display().to_string())?;
    spec_file::resolve(&doc)
}

fn emit(cli: &Cli, text_repr: &str, json_value: &impl Serialize, csv_repr: &str) -> Result<(), CliError> {
    let body = match cli.format {
        Format::Text => text_repr.to_string(),
        Format::Json => serde_json::to_string_pretty(json_value)
            .map_err(|e| CliError::other(e.to_string()))?,
        Format::Csv => csv_repr.to_string(),
    };
    println!("{body}");
    if let Some(path) = &cli.out {
        std::fs::write(path, body.as_bytes())
            .map_err(|e| CliError::other(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// compute
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ComputeReport {
    quantity: String,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    imaginary: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    psd_equality: Option<bool>,
}

fn parse_point(text: &str, model: &RkhsModel) -> Result<RkhsPoint, CliError> {
    let parts: Vec<&str> = text.split(';').map(str::trim).collect();
    let factors = model.factors();
    let coords: Vec<RkhsPoint> = parts
        .iter()
        .map(|p| parse_coord(p))
        .collect::<Result<_, _>>()?;
    if factors.len() == 1 && coords.len() == 1 {
        Ok(coords.into_iter().next().unwrap())
    } else if coords.len() == factors.len() {
        Ok(RkhsPoint::Tuple(coords))
    } else {
        Err(CliError::shape(format!(
            "point has {} coordinates, model has {} factors",
            coords.len(),
            factors.len()
        )))
    }
}

fn parse_coord(text: &str) -> Result<RkhsPoint, CliError> {
    if let Ok(i) = text.parse::<usize>() {
        return Ok(RkhsPoint::Index(i));
    }
    let nums: Vec<&str> = text.split(',').map(str::trim).collect();
    if nums.len() == 2 {
        if let (Ok(re), Ok(im)) = (nums[0].parse::<f64>(), nums[1].parse::<f64>()) {
            return Ok(RkhsPoint::Disk { re, im });
        }
    }
    Err(CliError::parse(format!(
        "cannot parse point coordinate `{text}` (expected an index or `re,im`)"
    )))
}

fn cmd_compute(cli: &Cli, args: &ComputeArgs) -> Result<i32, CliError> {
    let spec = load(&args.file)?;
    let a = spec.principal_matrix()?;
    let m = &spec.model;

    let report = match args.quantity.as_str() {
        "symbol" => {
            let point_text = args
                .point
                .as_ref()
                .ok_or_else(|| CliError::parse("`symbol` needs --point".into()))?;
            let p = parse_point(point_text, m)?;
            let s = berezin_symbol(&a, m, &p)?;
            ComputeReport {
                quantity: "symbol".into(),
                value: s.re,
                imaginary: Some(s.im),
                witness: Some(p.to_string()),
                exact: true,
                psd_equality: None,
            }
        }
        "ber" | "bernorm" | "c" => {
            let est = match args.quantity.as_str() {
                "ber" => berezin_number(&a, m)?,
                "bernorm" => berezin_norm(&a, m)?,
                _ => berezin_inf_c(&a, m)?,
            };
            ComputeReport {
                quantity: args.quantity.clone(),
                value: est.value,
                imaginary: None,
                witness: Some(est.witness.to_string()),
                exact: est.exact,
                psd_equality: Some(est.psd_equality),
            }
        }
        "wnum" => ComputeReport {
            quantity: "wnum".into(),
            value: numerical_radius(&a, linalg::DEFAULT_ANGLES).map_err(|e| CliError::shape(e.to_string()))?,
            imaginary: None,
            witness: None,
            exact: false,
            psd_equality: None,
        },
        "opnorm" => ComputeReport {
            quantity: "opnorm".into(),
            value: op_norm(&a).map_err(|e| CliError::shape(e.to_string()))?,
            imaginary: None,
            witness: None,
            exact: true,
            psd_equality: None,
        },
        other => return Err(CliError::parse(format!("unknown quantity `{other}`"))),
    };

    let mut text = format!("{} = {:.12}", report.quantity, report.value);
    if let Some(im) = report.imaginary {
        let _ = write!(text, " {:+.12}i", im);
    }
    if let Some(w) = &report.witness {
        let _ = write!(text, "\n  at {w}");
    }
    let _ = write!(text, "\n  exact: {}", report.exact);
    let csv = format!(
        "quantity,value,exact\n{},{},{}",
        report.quantity, report.value, report.exact
    );
    emit(cli, &text, &report, &csv)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// bound
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct BoundCliReport {
    bound_id: String,
    rhs: f64,
    lhs: f64,
    lhs_exact: bool,
    margin: f64,
    verdict: String,
    witness: String,
}

fn cmd_bound(cli: &Cli, args: &BoundArgs) -> Result<i32, CliError> {
    let id = BoundId::from_str(&args.id).map_err(CliError::unknown)?;
    let spec = load(&args.file)?;
    let instance = spec.instance_for(id)?;
    let base = spec.base_model();
    let report = check_bound(id, &instance, &base, &spec.params, args.tol)?;

    let cli_report = BoundCliReport {
        bound_id: id.to_string(),
        rhs: report.rhs,
        lhs: report.lhs.value,
        lhs_exact: report.lhs.exact,
        margin: report.margin,
        verdict: format!("{:?}", report.verdict),
        witness: report.lhs.witness.to_string(),
    };
    let text = format!(
        "bound {}\n  rhs     = {:.12}\n  lhs     = {:.12} ({}, witness {})\n  margin  = {:.3e}\n  verdict = {}",
        cli_report.bound_id,
        cli_report.rhs,
        cli_report.lhs,
        if cli_report.lhs_exact { "exact" } else { "estimate" },
        cli_report.witness,
        cli_report.margin,
        cli_report.verdict,
    );
    let csv = format!(
        "bound_id,rhs,lhs,margin,verdict\n{},{},{},{},{}",
        cli_report.bound_id, cli_report.rhs, cli_report.lhs, cli_report.margin, cli_report.verdict
    );
    emit(cli, &text, &cli_report, &csv)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn parse_dims(text: &str) -> Result<Vec<usize>, CliError> {
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once('-') {
        let lo: usize = lo.trim().parse().map_err(|_| CliError::parse(format!("bad dims `{text}`")))?;
        let hi: usize = hi.trim().parse().map_err(|_| CliError::parse(format!("bad dims `{text}`")))?;
        if lo == 0 || hi < lo {
            return Err(CliError::parse(format!("bad dims `{text}`")));
        }
        return Ok((lo..=hi).collect());
    }
    let dims: Result<Vec<usize>, _> = text.split(',').map(|s| s.trim().parse::<usize>()).collect();
    let dims = dims.map_err(|_| CliError::parse(format!("bad dims `{text}`")))?;
    if dims.is_empty() || dims.contains(&0) {
        return Err(CliError::parse(format!("bad dims `{text}`")));
    }
    Ok(dims)
}

fn parse_bounds(text: &str) -> Result<Vec<BoundId>, CliError> {
    if text.trim() == "all" {
        return Ok(BoundId::ALL.to_vec());
    }
    text.split(',')
        .map(|s| BoundId::from_str(s.trim()).map_err(CliError::unknown))
        .collect()
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<i32, CliError> {
    if args.trials == 0 {
        return Err(CliError::parse("--trials must be at least 1".into()));
    }
    let ids = parse_bounds(&args.bounds)?;
    let opts = FuzzOpts {
        base_seed: args.seed,
        dims: parse_dims(&args.dims)?,
        ensembles: Ensemble::FUZZ_DEFAULT.to_vec(),
        scale: args.scale,
        tol_rel: args.tol,
        sequential: false,
    };
    let summary = fuzz(&ids, args.trials, &opts)?;

    let mut text = format!(
        "fuzz: {} bounds x {} trials = {} checks\n  holds: {}  inconclusive: {}  violations: {}\n  min margin: {:.3e}",
        ids.len(),
        args.trials,
        summary.trials,
        summary.holds,
        summary.inconclusive,
        summary.violations.len(),
        summary.min_margin,
    );
    let mut csv = String::from("bound_id,trials,holds,inconclusive,violations,min_margin\n");
    for stat in &summary.per_bound {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            stat.bound_id, stat.trials, stat.holds, stat.inconclusive, stat.violations, stat.min_margin
        );
    }
    for v in &summary.violations {
        let _ = write!(
            text,
            "\n  VIOLATION {} seed={} dim={} ensemble={} margin={:.3e}",
            v.bound_id, v.spec.seed, v.spec.dim, v.spec.ensemble, v.report.margin
        );
    }
    emit(cli, &text, &summary, csv.trim_end())?;

    // violation replays, written next to --out (or the working directory)
    if !summary.violations.is_empty() {
        let dir = cli
            .out
            .as_ref()
            .and_then(|p| p.parent().map(|d| d.to_path_buf()))
            .unwrap_or_else(|| PathBuf::from("."));
        for v in &summary.violations {
            let instance = berkit::verify::gen_for_bound(v.bound_id, &v.spec)?;
            let base = RkhsModel::FiniteStandard(v.spec.dim);
            let doc = spec_file::doc_from_instance(v.bound_id, &instance, &base, &v.params);
            let path = dir.join(format!("violation_{}_{}.toml", v.bound_id, v.spec.seed));
            std::fs::write(&path, spec_file::to_toml(&doc)?)
                .map_err(|e| CliError::other(format!("{}: {e}", path.display())))?;
            eprintln!("replay spec written to {}", path.display());
        }
        return Ok(1);
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

fn cmd_reproduce(cli: &Cli, args: &ReproduceArgs) -> Result<i32, CliError> {
    let hardy = HardyOpts { dim: args.hardy_dim, r_max: args.hardy_rmax };
    let lines: Vec<ReproLine> = if args.example == "all" {
        run_all(&hardy)?
    } else if EXAMPLE_IDS.contains(&args.example.as_str()) {
        run_example(&args.example, &hardy)?
    } else {
        return Err(CliError::unknown(format!("unknown example id `{}`", args.example)));
    };

    let mut text = format!(
        "{:<13} {:<50} {:>12} {:>14} {:>10}  {}",
        "example", "item", "reference", "computed", "|diff|", "status"
    );
    let mut csv = String::from("example,item,reference,computed,diff,status\n");
    let mut all_pass = true;
    for l in &lines {
        let status = match (l.kind, l.pass) {
            (CheckKind::Info, _) => "info",
            (_, true) => "pass",
            (_, false) => "FAIL",
        };
        all_pass &= l.pass || !l.gating();
        let diff = (l.computed - l.reference).abs();
        let _ = write!(
            text,
            "\n{:<13} {:<50} {:>12.6} {:>14.8} {:>10.2e}  {}",
            l.example, l.item, l.reference, l.computed, diff, status
        );
        let _ = writeln!(csv, "{},{},{},{},{},{}", l.example, l.item, l.reference, l.computed, diff, status);
    }
    emit(cli, &text, &lines, csv.trim_end())?;
    Ok(if all_pass { 0 } else { 1 })
}
