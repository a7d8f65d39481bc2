//! The operator-spec file format: a single TOML document with keys `model`,
//! `operators`, `blocks`, `params`, `inputs`. Complex numbers are `[re, im]`
//! pairs; matrices are row-major arrays of such pairs. Parsing is total:
//! every failure is a diagnostic with a line/column position, never a crash.
//!
//! The same schema serializes generated instances (violation replays), so a
//! dumped instance re-ingests to the identical report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use berkit::block::BlockMatrix;
use berkit::bounds::{BoundId, BoundParams};
use berkit::linalg::CMatrix;
use berkit::rkhs::{hardy_operator, HardyKind, RkhsModel};
use berkit::verify::BoundInstance;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecDoc {
    pub model: ModelDoc,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operators: BTreeMap<String, OperatorDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<BlocksDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<InputsDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernels: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<ModelDoc>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardy: Option<HardyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HardyDoc {
    Named(String),
    Monomial { p_monomial: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlocksDoc {
    pub layout: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ParamsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_power: Option<u32>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct InputsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub single: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_list: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_list: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_list: Option<Vec<String>>,
}

/// Parse a document, mapping syntax errors to a line/column diagnostic.
pub fn parse(text: &str, origin: &str) -> Result<SpecDoc, CliError> {
    toml::from_str::<SpecDoc>(text).map_err(|e| {
        let pos = e
            .span()
            .map(|span| {
                let upto = &text[..span.start.min(text.len())];
                let line = upto.matches('\n').count() + 1;
                let col = upto.chars().rev().take_while(|&c| c != '\n').count() + 1;
                format!("{origin}:{line}:{col}: ")
            })
            .unwrap_or_else(|| format!("{origin}: "));
        CliError::parse(format!("{pos}{}", e.message()))
    })
}

/// A fully resolved document: model, named operators, optional block grid,
/// parameters and input selectors.
pub struct ResolvedSpec {
    pub model: RkhsModel,
    pub operators: BTreeMap<String, CMatrix>,
    pub blocks: Option<BlockMatrix>,
    pub params: BoundParams,
    pub inputs: InputsDoc,
}

fn entries_to_matrix(rows: &[Vec<[f64; 2]>], what: &str) -> Result<CMatrix, CliError> {
    let r = rows.len();
    if r == 0 {
        return Err(CliError::shape(format!("{what}: matrix needs at least one row")));
    }
    let c = rows[0].len();
    if c == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(CliError::shape(format!("{what}: ragged or empty matrix rows")));
    }
    let mut entries = Vec::with_capacity(r * c);
    for row in rows {
        for &[re, im] in row {
            if !re.is_finite() || !im.is_finite() {
                return Err(CliError::shape(format!("{what}: entries must be finite")));
            }
            entries.push(Complex64::new(re, im));
        }
    }
    Ok(CMatrix::new(r, c, entries))
}

fn build_model(doc: &ModelDoc) -> Result<RkhsModel, CliError> {
    let model = match doc.kind.as_str() {
        "finite" => RkhsModel::FiniteStandard(
            doc.dim.ok_or_else(|| CliError::parse("finite model needs `dim`".into()))?,
        ),
        "finite_general" => {
            let kernels = doc
                .kernels
                .as_ref()
                .ok_or_else(|| CliError::parse("finite_general model needs `kernels`".into()))?;
            let vecs = kernels
                .iter()
                .map(|k| k.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                .collect();
            RkhsModel::finite_general(vecs).map_err(|e| CliError::shape(e.to_string()))?
        }
        "hardy" => RkhsModel::HardyTruncated {
            dim: doc.dim.unwrap_or(berkit::rkhs::HARDY_DEFAULT_DIM),
            r_max: doc.r_max.unwrap_or(berkit::rkhs::HARDY_DEFAULT_RMAX),
        },
        "direct_sum" => {
            let factors = doc
                .factors
                .as_ref()
                .ok_or_else(|| CliError::parse("direct_sum model needs `factors`".into()))?;
            RkhsModel::DirectSum(
                factors.iter().map(build_model).collect::<Result<Vec<_>, _>>()?,
            )
        }
        other => return Err(CliError::parse(format!("unknown model kind `{other}`"))),
    };
    model.validate().map_err(|e| CliError::shape(e.to_string()))?;
    Ok(model)
}

fn hardy_kind(doc: &HardyDoc) -> Result<HardyKind, CliError> {
    Ok(match doc {
        HardyDoc::Named(s) => match s.as_str() {
            "mz" => HardyKind::Mz,
            "mz2" => HardyKind::Mz2,
            "p_const" => HardyKind::PConst,
            other => return Err(CliError::parse(format!("unknown hardy operator `{other}`"))),
        },
        HardyDoc::Monomial { p_monomial } => HardyKind::PMonomial(*p_monomial),
    })
}

/// Resolve a parsed document into matrices over a validated model.
pub fn resolve(doc: &SpecDoc) -> Result<ResolvedSpec, CliError> {
    let model = build_model(&doc.model)?;
    let default_hardy_dim = model.factors()[0].dim();

    let mut operators = BTreeMap::new();
    for (name, op) in &doc.operators {
        let matrix = match (&op.entries, &op.hardy) {
            (Some(rows), None) => entries_to_matrix(rows, name)?,
            (None, Some(h)) => {
                let dim = op.dim.unwrap_or(default_hardy_dim);
                hardy_operator(hardy_kind(h)?, dim)
                    .map_err(|e| CliError::shape(format!("{name}: {e}")))?
            }
            _ => {
                return Err(CliError::parse(format!(
                    "operator `{name}` needs exactly one of `entries` or `hardy`"
                )))
            }
        };
        operators.insert(name.clone(), matrix);
    }

    let blocks = match &doc.blocks {
        None => None,
        Some(b) => Some(build_blocks(b, &operators, &model)?),
    };

    let mut params = BoundParams::default();
    if let Some(p) = &doc.params {
        if let Some(t) = p.t {
            params.t = t;
        }
        if let Some([re, im]) = p.alpha {
            params.alpha = Complex64::new(re, im);
        }
        if let Some([re, im]) = p.beta {
            params.beta = Complex64::new(re, im);
        }
        if let Some(r) = p.r {
            params.r = r;
        }
        if let Some(n) = p.n_power {
            params.n_power = n;
        }
    }

    Ok(ResolvedSpec {
        model,
        operators,
        blocks,
        params,
        inputs: doc.inputs.clone().unwrap_or_default(),
    })
}

fn is_zero_name(name: &str) -> bool {
    name == "0" || name.eq_ignore_ascii_case("zero")
}

fn build_blocks(
    doc: &BlocksDoc,
    operators: &BTreeMap<String, CMatrix>,
    model: &RkhsModel,
) -> Result<BlockMatrix, CliError> {
    let n = doc.layout.len();
    if n == 0 || doc.layout.iter().any(|row| row.len() != n) {
        return Err(CliError::shape("blocks.layout must be a square non-empty grid".into()));
    }
    let lookup = |name: &str| -> Result<Option<&CMatrix>, CliError> {
        if is_zero_name(name) {
            Ok(None)
        } else {
            operators
                .get(name)
                .map(Some)
                .ok_or_else(|| CliError::parse(format!("blocks.layout references unknown operator `{name}`")))
        }
    };

    // infer zero-block dimensions from named neighbours, falling back to the
    // model's factor dimensions by position
    let factor_dims: Vec<usize> = model.factors().iter().map(|f| f.dim()).collect();
    let fallback = |i: usize| factor_dims.get(i).copied().unwrap_or(factor_dims[0]);
    let mut row_dims = vec![None; n];
    let mut col_dims = vec![None; n];
    for (i, row) in doc.layout.iter().enumerate() {
        for (j, name) in row.iter().enumerate() {
            if let Some(m) = lookup(name)? {
                row_dims[i].get_or_insert(m.rows());
                col_dims[j].get_or_insert(m.cols());
            }
        }
    }
    let row_dims: Vec<usize> =
        row_dims.into_iter().enumerate().map(|(i, d)| d.unwrap_or_else(|| fallback(i))).collect();
    let col_dims: Vec<usize> =
        col_dims.into_iter().enumerate().map(|(j, d)| d.unwrap_or_else(|| fallback(j))).collect();

    let mut grid = Vec::with_capacity(n);
    for (i, row) in doc.layout.iter().enumerate() {
        let mut out_row = Vec::with_capacity(n);
        for (j, name) in row.iter().enumerate() {
            out_row.push(match lookup(name)? {
                Some(m) => m.clone(),
                None => CMatrix::zeros(row_dims[i], col_dims[j]),
            });
        }
        grid.push(out_row);
    }
    BlockMatrix::new(grid).map_err(|e| CliError::shape(e.to_string()))
}

impl ResolvedSpec {
    /// The factor model bound checks run over: direct sums of equal factors
    /// collapse to the factor, anything else is used as-is.
    pub fn base_model(&self) -> RkhsModel {
        if let RkhsModel::DirectSum(fs) = &self.model {
            if !fs.is_empty() && fs.iter().all(|f| f == &fs[0]) {
                return fs[0].clone();
            }
        }
        self.model.clone()
    }

    /// The matrix `compute` quantities act on: the assembled block grid when
    /// present, otherwise the selected or sole operator.
    pub fn principal_matrix(&self) -> Result<CMatrix, CliError> {
        if let Some(b) = &self.blocks {
            return Ok(b.assemble());
        }
        if let Some(name) = &self.inputs.single {
            return self.named(name).cloned();
        }
        if self.operators.len() == 1 {
            return Ok(self.operators.values().next().unwrap().clone());
        }
        Err(CliError::shape(
            "no `blocks`, no `inputs.single`, and more than one operator: nothing to compute on".into(),
        ))
    }

    fn named(&self, name: &str) -> Result<&CMatrix, CliError> {
        self.operators
            .get(name)
            .ok_or_else(|| CliError::parse(format!("unknown operator `{name}`")))
    }

    fn named_list(&self, names: &Option<Vec<String>>, what: &str) -> Result<Vec<CMatrix>, CliError> {
        let names = names
            .as_ref()
            .ok_or_else(|| CliError::shape(format!("this bound needs `inputs.{what}`")))?;
        names.iter().map(|n| self.named(n).cloned()).collect()
    }

    fn input(&self, sel: &Option<String>, what: &str) -> Result<CMatrix, CliError> {
        let name = sel
            .as_ref()
            .ok_or_else(|| CliError::shape(format!("this bound needs `inputs.{what}`")))?;
        self.named(name).cloned()
    }

    /// Extract the instance shape a bound operates on.
    pub fn instance_for(&self, id: BoundId) -> Result<BoundInstance, CliError> {
        use BoundId::*;
        Ok(match id {
            th4 | co1 | co2 | co5 | eqn12 | R1E2 | th8 | c28i | c28ii | eqn14 | lm7i | lm7ii
            | th5 | co4 | inq5 | inq6 | th6 | co6 | th7 | ee5 => BoundInstance::Blocks(
                self.blocks
                    .clone()
                    .ok_or_else(|| CliError::shape("this bound needs a `blocks` section".into()))?,
            ),
            inq2 | inq3 | ee4 | th10 | th10cor1 | th11i | th11ii | th11iii | th11iv | T20 => {
                BoundInstance::Single { a: self.input(&self.inputs.single, "single")? }
            }
            cot10ii | cot11ii | cot11comm | ee1 | ee2 | ee3 => BoundInstance::Pair {
                a: self.input(&self.inputs.a, "a")?,
                b: self.input(&self.inputs.b, "b")?,
            },
            cot10i | cot11i => BoundInstance::Triple {
                a: self.input(&self.inputs.a, "a")?,
                x: self.input(&self.inputs.x, "x")?,
                b: self.input(&self.inputs.b, "b")?,
            },
            th9 => BoundInstance::Lists {
                a: self.named_list(&self.inputs.a_list, "a_list")?,
                b: self.named_list(&self.inputs.b_list, "b_list")?,
                x: self.named_list(&self.inputs.x_list, "x_list")?,
            },
            cot9i | cot9iii | cot9iv => BoundInstance::Lists {
                a: self.named_list(&self.inputs.a_list, "a_list")?,
                b: self.named_list(&self.inputs.b_list, "b_list")?,
                x: Vec::new(),
            },
            cot9ii => BoundInstance::Lists {
                a: self.named_list(&self.inputs.a_list, "a_list")?,
                b: Vec::new(),
                x: Vec::new(),
            },
        })
    }
}

// ---------------------------------------------------------------------------
// serialization of generated instances (violation replays)
// ---------------------------------------------------------------------------

fn matrix_doc(m: &CMatrix) -> OperatorDoc {
    let rows = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    OperatorDoc { entries: Some(rows), hardy: None, dim: None }
}

fn model_doc(m: &RkhsModel) -> ModelDoc {
    match m {
        RkhsModel::FiniteStandard(n) => ModelDoc {
            kind: "finite".into(),
            dim: Some(*n),
            r_max: None,
            kernels: None,
            factors: None,
        },
        RkhsModel::FiniteGeneral { kernels } => ModelDoc {
            kind: "finite_general".into(),
            dim: None,
            r_max: None,
            kernels: Some(
                kernels
                    .iter()
                    .map(|k| k.iter().map(|&(re, im)| [re, im]).collect())
                    .collect(),
            ),
            factors: None,
        },
        RkhsModel::HardyTruncated { dim, r_max } => ModelDoc {
            kind: "hardy".into(),
            dim: Some(*dim),
            r_max: Some(*r_max),
            kernels: None,
            factors: None,
        },
        RkhsModel::DirectSum(fs) => ModelDoc {
            kind: "direct_sum".into(),
            dim: None,
            r_max: None,
            kernels: None,
            factors: Some(fs.iter().map(model_doc).collect()),
        },
    }
}

fn params_doc(p: &BoundParams) -> ParamsDoc {
    ParamsDoc {
        t: Some(p.t),
        alpha: Some([p.alpha.re, p.alpha.im]),
        beta: Some([p.beta.re, p.beta.im]),
        r: Some(p.r),
        n_power: Some(p.n_power),
    }
}

/// Turn a concrete instance back into a spec document that re-ingests to the
/// identical report through `bound --id <id>`.
pub fn doc_from_instance(
    id: BoundId,
    instance: &BoundInstance,
    base: &RkhsModel,
    params: &BoundParams,
) -> SpecDoc {
    let mut operators = BTreeMap::new();
    let mut blocks = None;
    let mut inputs = InputsDoc::default();
    let mut model = model_doc(base);

    match instance {
        BoundInstance::Blocks(b) => {
            let n = b.n();
            let mut layout = Vec::with_capacity(n);
            for i in 0..n {
                let mut row = Vec::with_capacity(n);
                for j in 0..n {
                    let blk = b.block(i, j);
                    if blk.is_zero() {
                        row.push("0".to_string());
                    } else {
                        let name = format!("a{}{}", i + 1, j + 1);
                        operators.insert(name.clone(), matrix_doc(blk));
                        row.push(name);
                    }
                }
                layout.push(row);
            }
            blocks = Some(BlocksDoc { layout });
            model = model_doc(&RkhsModel::DirectSum(vec![base.clone(); n]));
        }
        BoundInstance::Single { a } => {
            operators.insert("a".into(), matrix_doc(a));
            inputs.single = Some("a".into());
        }
        BoundInstance::Pair { a, b } => {
            operators.insert("a".into(), matrix_doc(a));
            operators.insert("b".into(), matrix_doc(b));
            inputs.a = Some("a".into());
            inputs.b = Some("b".into());
        }
        BoundInstance::Triple { a, x, b } => {
            operators.insert("a".into(), matrix_doc(a));
            operators.insert("x".into(), matrix_doc(x));
            operators.insert("b".into(), matrix_doc(b));
            inputs.a = Some("a".into());
            inputs.x = Some("x".into());
            inputs.b = Some("b".into());
        }
        BoundInstance::Lists { a, b, x } => {
            let mut push = |prefix: &str, mats: &[CMatrix]| -> Vec<String> {
                mats.iter()
                    .enumerate()
                    .map(|(k, m)| {
                        let name = format!("{prefix}{}", k + 1);
                        operators.insert(name.clone(), matrix_doc(m));
                        name
                    })
                    .collect()
            };
            let an = push("a", a);
            let bn = push("b", b);
            let xn = push("x", x);
            inputs.a_list = Some(an);
            if !bn.is_empty() {
                inputs.b_list = Some(bn);
            }
            if !xn.is_empty() {
                inputs.x_list = Some(xn);
            }
        }
    }

    let _ = id;
    SpecDoc {
        model,
        operators,
        blocks,
        params: Some(params_doc(params)),
        inputs: if inputs.single.is_none()
            && inputs.a.is_none()
            && inputs.a_list.is_none()
        {
            None
        } else {
            Some(inputs)
        },
    }
}

pub fn to_toml(doc: &SpecDoc) -> Result<String, CliError> {
    let mut out = String::new();
    let _ = writeln!(out, "# generated operator spec");
    toml::to_string(doc)
        .map(|body| {
            out.push_str(&body);
            out
        })
        .map_err(|e| CliError::other(format!("serialization failed: {e}")))
}
