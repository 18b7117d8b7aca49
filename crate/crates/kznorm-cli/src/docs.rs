//! Output documents and their renderings.
//!
//! Every command assembles one of the structs below and renders it to a
//! single string in the requested format before anything is printed, so
//! a failing command never leaves partial output behind. JSON is the
//! canonical machine format (complex numbers as `[re, im]` pairs,
//! half-integers as a display string plus the integer twice-value); CSV
//! mirrors the tabular content; `pretty` is for reading in a terminal.
//! All renderings are byte-stable at fixed input and crate version:
//! field order is fixed by the struct definitions and no unordered
//! containers are used.

use kznorm_core::halfint::HalfInt;
use kznorm_core::norms::{Degeneracy, FactorReport, NormResult};
use kznorm_core::rootdata::Weight;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Serialize)]
pub struct HalfIntDoc {
    pub display: String,
    pub twice: i64,
}

pub fn half_doc(j: HalfInt) -> HalfIntDoc {
    HalfIntDoc {
        display: j.to_string(),
        twice: j.twice(),
    }
}

#[derive(Serialize)]
pub struct LabelDoc {
    pub labels: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin: Option<HalfIntDoc>,
}

pub fn label_doc(w: &Weight) -> LabelDoc {
    LabelDoc {
        labels: w.labels().to_vec(),
        spin: (w.rank_n() == 2).then(|| half_doc(w.spin())),
    }
}

pub fn degeneracy_str(d: Degeneracy) -> &'static str {
    match d {
        Degeneracy::None => "none",
        Degeneracy::Zero => "zero",
        Degeneracy::Pole => "pole",
        Degeneracy::Indeterminate => "indeterminate",
    }
}

/// JSON cannot carry non-finite floats; poles and indeterminate values
/// are reported through the `degeneracy` field and a `null` value.
pub fn finite_or_null(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Serialize)]
pub struct AlcoveDoc {
    pub command: &'static str,
    pub n: usize,
    pub level: i64,
    pub kappa: f64,
    pub count: usize,
    pub entries: Vec<LabelDoc>,
}

#[derive(Serialize)]
pub struct SMatrixDoc {
    pub command: &'static str,
    pub n: usize,
    pub level: i64,
    pub kappa: f64,
    pub labels: Vec<LabelDoc>,
    /// `matrix[i][j]` is `S_{λᵢλⱼ}` as `[re, im]`.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
pub struct FusionDoc {
    pub command: &'static str,
    pub n: usize,
    pub level: i64,
    pub labels: Vec<LabelDoc>,
    /// `tensor[a][b][c]` is the multiplicity `N_{λₐλᵦ}^{λ_c}`.
    pub tensor: Vec<Vec<Vec<i64>>>,
}

#[derive(Serialize)]
pub struct QdimDoc {
    pub command: &'static str,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<i64>,
    pub kappa: f64,
    pub label: LabelDoc,
    pub value: f64,
}

#[derive(Serialize)]
pub struct FactorDoc {
    pub label: String,
    pub plus: f64,
    pub minus: f64,
    pub value: Option<f64>,
    pub degeneracy: &'static str,
    pub detail: String,
}

pub fn factor_doc(f: &FactorReport) -> FactorDoc {
    FactorDoc {
        label: f.label.clone(),
        plus: f.plus_arg,
        minus: f.minus_arg,
        value: finite_or_null(f.value),
        degeneracy: degeneracy_str(f.degeneracy),
        detail: f.detail.clone(),
    }
}

#[derive(Serialize)]
pub struct NormDoc {
    pub command: &'static str,
    pub j: HalfIntDoc,
    pub k: i64,
    pub kappa: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<bool>,
    pub degeneracy: &'static str,
    pub value: Option<f64>,
    pub factors: Vec<FactorDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_to: Option<HalfIntDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_note: Option<String>,
}

#[derive(Serialize)]
pub struct KzRowDoc {
    pub j: HalfIntDoc,
    pub numeric: f64,
    pub closed_form: f64,
    pub ratio: f64,
}

#[derive(Serialize)]
pub struct KzVerifyDoc {
    pub command: &'static str,
    pub k: i64,
    pub kappa: f64,
    pub tol: f64,
    pub rows: Vec<KzRowDoc>,
    /// Relative spread (max − min)/|mean| of the numeric/closed-form
    /// ratio over the j-grid: the j-independence check.
    pub max_ratio_deviation: f64,
}

#[derive(Serialize)]
pub struct ModularRowDoc {
    pub level: i64,
    pub symmetry: f64,
    pub unitarity: f64,
    pub s_squared_conjugation: f64,
    pub st_cubed: f64,
    pub t_unitary: f64,
    pub qdim_match: f64,
    pub max_residual: f64,
    pub fusion_entries: usize,
}

#[derive(Serialize)]
pub struct ModularCheckDoc {
    pub command: &'static str,
    pub n: usize,
    pub level_min: i64,
    pub level_max: i64,
    pub threshold: f64,
    pub rows: Vec<ModularRowDoc>,
    pub max_residual: f64,
}

fn json<T: Serialize>(doc: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| CliError {
        code: 3,
        message: format!("serialization failed: {e}"),
    })?;
    s.push('\n');
    Ok(s)
}

fn csv_from_rows(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let map_err = |e: csv::Error| CliError {
        code: 3,
        message: format!("CSV rendering failed: {e}"),
    };
    w.write_record(header).map_err(map_err)?;
    for row in rows {
        w.write_record(row).map_err(map_err)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| CliError {
        code: 3,
        message: format!("CSV rendering failed: {e}"),
    })?)
    .map_err(|e| CliError {
        code: 3,
        message: format!("CSV rendering failed: {e}"),
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => String::new(),
    }
}

fn labels_cell(l: &LabelDoc) -> String {
    l.labels
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

impl AlcoveDoc {
    pub fn render(&self, fmt: Format) -> Result<String, CliError> {
        match fmt {
            Format::Json => json(self),
            Format::Csv => {
                let rows: Vec<Vec<String>> = self
                    .entries
                    .iter()
                    .map(|e| {
                        vec![
                            labels_cell(e),
                            e.spin.as_ref().map(|s| s.display.clone()).unwrap_or_default(),
                        ]
                    })
                    .collect();
                csv_from_rows(&["labels", "spin"], &rows)
            }
            Format::Pretty => {
                let mut s = format!(
                    "alcove for sl({}) at level {} (κ = {}): {} weights\n",
                    self.n, self.level, self.kappa, self.count
                );
                for e in &self.entries {
                    match &e.spin {
                        Some(sp) => s.push_str(&format!("  [{}]  j = {}\n", labels_cell(e), sp.display)),
                        None => s.push_str(&format!("  [{}]\n", labels_cell(e))),
                    }
                }
                Ok(s)
            }
        }
    }
}

impl SMatrixDoc {
    pub fn render(&self, fmt: Format) -> Result<String, CliError> {
        match fmt {
            Format::Json => json(self),
            Format::Csv => {
                let mut rows = Vec::new();
                for (i, row) in self.matrix.iter().enumerate() {
                    for (j, z) in row.iter().enumerate() {
                        rows.push(vec![
                            i.to_string(),
                            j.to_string(),
                            format!("{}", z[0]),
                            format!("{}", z[1]),
                        ]);
                    }
                }
                csv_from_rows(&["row", "col", "re", "im"], &rows)
            }
            Format::Pretty => {
                let mut s = format!(
                    "S-matrix for sl({}) at level {} (κ = {})\n",
                    self.n, self.level, self.kappa
                );
                for row in &self.matrix {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|z| format!("{:>12.8}{:+.8}i", z[0], z[1]))
                        .collect();
                    s.push_str(&format!("  {}\n", cells.join("  ")));
                }
                Ok(s)
            }
        }
    }
}

impl FusionDoc {
    pub fn render(&self, fmt: Format) -> Result<String, CliError> {
        match fmt {
            Format::Json => json(self),
            Format::Csv => {
                let mut rows = Vec::new();
                for (a, plane) in self.tensor.iter().enumerate() {
                    for (b, line) in plane.iter().enumerate() {
                        for (c, &mult) in line.iter().enumerate() {
                            if mult != 0 {
                                rows.push(vec![
                                    a.to_string(),
                                    b.to_string(),
                                    c.to_string(),
                                    mult.to_string(),
                                ]);
                            }
                        }
                    }
                }
                csv_from_rows(&["a", "b", "c", "multiplicity"], &rows)
            }
            Format::Pretty => {
                let mut s = format!(
                    "fusion multiplicities N_ab^c for sl({}) at level {} (nonzero entries)\n",
                    self.n, self.level
                );
                for (a, plane) in self.tensor.iter().enumerate() {
                    for (b, line) in plane.iter().enumerate() {
                        for (c, &mult) in line.iter().enumerate() {
                            if mult != 0 {
                                s.push_str(&format!(
                                    "  [{}] x [{}] -> [{}]: {}\n",
                                    labels_cell(&self.labels[a]),
                                    labels_cell(&self.labels[b]),
                                    labels_cell(&self.labels[c]),
                                    mult
                                ));
                            }
                        }
                    }
                }
                Ok(s)
            }
        }
    }
}

impl QdimDoc {
    pub fn render(&self, fmt: Format) -> Result<String, CliError> {
        match fmt {
            Format::Json => json(self),
            Format::Csv => csv_from_rows(
                &["labels", "kappa", "value"],
                &[vec![
                    labels_cell(&self.label),
                    format!("{}", self.kappa),
                    format!("{}", self.value),
                ]],
            ),
            Format::Pretty => Ok(format!(
                "quantum dimension of [{}] at κ = {}: {:.14}\n",
                labels_cell(&self.label),
                self.kappa,
                self.value
            )),
        }
    }
}

impl NormDoc {
    pub fn render(&self, fmt: Format) -> Result<String, CliError> {
        match fmt {
            Format::Json => json(self),
            Format::Csv => {
                let mut rows: Vec<Vec<String>> = self
                    .factors
                    .iter()
                    .map(|f| {
                        vec![
                            f.label.clone(),
                            format!("{}", f.plus),
                            format!("{}", f.minus),
                            fmt_opt(f.value),
                            f.degeneracy.to_string(),
                            f.detail.clone(),
                        ]
                    })
                    .collect();
                rows.push(vec![
                    "product".to_string(),
                    String::new(),
                    String::new(),
                    fmt_opt(self.value),
                    self.degeneracy.to_string(),
                    String::new(),
                ]);
                if let Some(r) = &self.ratio_to {
                    rows.push(vec![
                        format!("ratio_to_j={}", r.display),
                        String::new(),
                        String::new(),
                        fmt_opt(self.ratio),
                        String::new(),
                        self.ratio_note.clone().unwrap_or_default(),
                    ]);
                }
                csv_from_rows(
                    &["factor", "plus_arg", "minus_arg", "value", "degeneracy", "detail"],
                    &rows,
                )
            }
            Format::Pretty => {
                let mut s = format!(
                    "norm-squared product for j = {}, k = {}, κ = {}\n",
                    self.j.display, self.k, self.kappa
                );
                if let Some(w) = self.window {
                    s.push_str(&format!(
                        "window k ≤ 2j ≤ K−k at level {}: {}\n",
                        self.level.unwrap_or_default(),
                        if w { "inside" } else { "outside" }
                    ));
                }
                for f in &self.factors {
                    s.push_str(&format!(
                        "  {}: args ({}, {}) -> {}{}\n",
                        f.label,
                        f.plus,
                        f.minus,
                        match f.value {
                            Some(v) => format!("{v:.14}"),
                            None => format!("({})", f.degeneracy),
                        },
                        if f.detail.is_empty() {
                            String::new()
                        } else {
                            format!("  [{}]", f.detail)
                        }
                    ));
                }
                match self.value {
                    Some(v) => s.push_str(&format!("value: {v:.14}\n")),
                    None => s.push_str(&format!("value: {} (no finite value)\n", self.degeneracy)),
                }
                if let Some(r) = &self.ratio_to {
                    match self.ratio {
                        Some(v) => s.push_str(&format!("ratio to j = {}: {v:.14}\n", r.display)),
                        None => s.push_str(&format!(
                            "ratio to j = {}: undefined — {}\n",
                            r.display,
                            self.ratio_note.as_deref().unwrap_or("degenerate operand")
                        )),
                    }
                }
                Ok(s)
            }
        }
    }
}

impl KzVerifyDoc {
    pub fn render(&self, fmt: Format) -> Result<String, CliError> {
        match fmt {
            Format::Json => json(self),
            Format::Csv => {
                let rows: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.j.display.clone(),
                            r.j.twice.to_string(),
                            format!("{}", r.numeric),
                            format!("{}", r.closed_form),
                            format!("{}", r.ratio),
                        ]
                    })
                    .collect();
                csv_from_rows(&["j", "twice_j", "numeric", "closed_form", "ratio"], &rows)
            }
            Format::Pretty => {
                let mut s = format!(
                    "KZ transport vs closed form at k = {}, κ = {}, tol = {:e}\n",
                    self.k, self.kappa, self.tol
                );
                for r in &self.rows {
                    s.push_str(&format!(
                        "  j = {:>4}: numeric {:.12e}  closed form {:.12e}  ratio {:.14}\n",
                        r.j.display, r.numeric, r.closed_form, r.ratio
                    ));
                }
                s.push_str(&format!(
                    "max ratio deviation over j: {:.3e}\n",
                    self.max_ratio_deviation
                ));
                Ok(s)
            }
        }
    }
}

impl ModularCheckDoc {
    pub fn render(&self, fmt: Format) -> Result<String, CliError> {
        match fmt {
            Format::Json => json(self),
            Format::Csv => {
                let rows: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.level.to_string(),
                            format!("{:e}", r.symmetry),
                            format!("{:e}", r.unitarity),
                            format!("{:e}", r.s_squared_conjugation),
                            format!("{:e}", r.st_cubed),
                            format!("{:e}", r.t_unitary),
                            format!("{:e}", r.qdim_match),
                            format!("{:e}", r.max_residual),
                            r.fusion_entries.to_string(),
                        ]
                    })
                    .collect();
                csv_from_rows(
                    &[
                        "level",
                        "symmetry",
                        "unitarity",
                        "s_squared_conjugation",
                        "st_cubed",
                        "t_unitary",
                        "qdim_match",
                        "max_residual",
                        "fusion_entries",
                    ],
                    &rows,
                )
            }
            Format::Pretty => {
                let mut s = format!(
                    "modular relations for sl({}), levels {}..{} (threshold {:e})\n",
                    self.n, self.level_min, self.level_max, self.threshold
                );
                for r in &self.rows {
                    s.push_str(&format!(
                        "  K = {:>2}: max residual {:.3e} over {} fusion entries\n",
                        r.level, r.max_residual, r.fusion_entries
                    ));
                }
                s.push_str(&format!("overall max residual: {:.3e}\n", self.max_residual));
                Ok(s)
            }
        }
    }
}

/// Degeneracy/value split used by the `norm` command.
pub fn norm_value_fields(res: &NormResult) -> (&'static str, Option<f64>) {
    (degeneracy_str(res.degeneracy), finite_or_null(res.value))
}
