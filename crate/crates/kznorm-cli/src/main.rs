//! `kznorm` — command-line front end for the affine `sl(n)`
//! intertwiner-norm toolkit.
//!
//! Exit codes: `0` success (including structural zero/pole answers),
//! `2` bad input or empty intertwiner space, `3` violated consistency
//! check (including failed modular relations), `4` analytic or
//! numerical obstruction (resonant κ, integrator failure).
//!
//! The full output document is rendered before anything is written, so
//! a nonzero exit never leaves partial output on stdout. Diagnostics,
//! timings, and cache notes go to stderr only, keeping stdout
//! byte-stable across runs at fixed input and crate version.

mod cache;
mod docs;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use kznorm_core::halfint::HalfInt;
use kznorm_core::kzflow::norm_via_kz;
use kznorm_core::modular::{
    fusion_from_s, s_matrix, t_matrix, verify_relations_with, FusionTensor,
};
use kznorm_core::norms::{norm_closed_form, norm_closed_form_at_level};
use kznorm_core::rootdata::{alcove_weights, LevelContext, Weight};
use kznorm_core::CoreError;

use docs::{
    factor_doc, half_doc, label_doc, norm_value_fields, AlcoveDoc, Format, FusionDoc,
    KzRowDoc, KzVerifyDoc, ModularCheckDoc, ModularRowDoc, NormDoc, QdimDoc, SMatrixDoc,
};

/// Residual threshold above which `modular-check` reports failure.
const MODULAR_THRESHOLD: f64 = 1e-10;

pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        let code = match &e {
            CoreError::Domain(_) | CoreError::NoIntertwiner(_) => 2,
            CoreError::Internal(_) => 3,
            CoreError::Resonance(_) | CoreError::Numerical(_) => 4,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        message: message.into(),
    }
}

#[derive(Parser)]
#[command(
    name = "kznorm",
    version,
    about = "Modular data and intertwiner norms for affine sl(n)",
    max_term_width = 100
)]
struct Cli {
    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the dominant weights of the level-K alcove for sl(n).
    Alcove {
        /// Rank parameter of sl(n).
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Nonnegative integer level K.
        #[arg(long)]
        level: i64,
    },
    /// Print the modular S-matrix at an integer level.
    Smatrix {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        level: i64,
    },
    /// Print the fusion multiplicities N_ab^c at an integer level.
    Fusion {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        level: i64,
    },
    /// Quantum dimension of one weight.
    Qdim {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Integer level K (sets κ = K + n); exclusive with --kappa.
        #[arg(long)]
        level: Option<i64>,
        /// Real deformation parameter κ; exclusive with --level.
        #[arg(long)]
        kappa: Option<f64>,
        /// Spin as "p" or "p/2" (n = 2 only); exclusive with --labels.
        #[arg(long)]
        j: Option<String>,
        /// Dynkin labels, comma separated (n − 1 entries).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        labels: Option<Vec<i64>>,
    },
    /// Closed-form norm-squared product at spin j for adjoint-tower spin k.
    Norm {
        /// Spin j as "p" or "p/2".
        #[arg(long)]
        j: String,
        /// Integer spin k of the tower.
        #[arg(long)]
        k: i64,
        /// Real κ; exclusive with --level.
        #[arg(long)]
        kappa: Option<f64>,
        /// Integer level K (κ = K + 2), attaches the window flag.
        #[arg(long)]
        level: Option<i64>,
        /// Second spin j'; also report the c-independent ratio
        /// ‖Φ_j‖²/‖Φ_j'‖².
        #[arg(long)]
        ratio: Option<String>,
    },
    /// Transport the reduced KZ connection and compare the numeric norm
    /// against the closed form over a grid of spins.
    KzVerify {
        /// Integer spin k of the tower.
        #[arg(long)]
        k: i64,
        /// Real κ (non-resonant, > 0).
        #[arg(long)]
        kappa: f64,
        /// Largest spin j of the grid (runs 2j = k, k+1, …, 2·j_max).
        #[arg(long)]
        j_max: String,
        /// Transport tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Cache directory (default: $KZNORM_CACHE_DIR, else a temp dir).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Disable the result cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Verify the modular relations over a range of levels.
    ModularCheck {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Level range "A..B" (inclusive) or a single level "K".
        #[arg(long)]
        levels: String,
        /// Corrupt one S-matrix entry before checking (self-test hook).
        #[arg(long, hide = true)]
        corrupt_s: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli.command, format) {
        Ok(out) => print!("{out}"),
        Err(e) => {
            eprintln!("kznorm: {}", e.message);
            std::process::exit(e.code);
        }
    }
}

fn run(command: Command, format: Format) -> Result<String, CliError> {
    match command {
        Command::Alcove { n, level } => cmd_alcove(n, level, format),
        Command::Smatrix { n, level } => cmd_smatrix(n, level, format),
        Command::Fusion { n, level } => cmd_fusion(n, level, format),
        Command::Qdim {
            n,
            level,
            kappa,
            j,
            labels,
        } => cmd_qdim(n, level, kappa, j, labels, format),
        Command::Norm {
            j,
            k,
            kappa,
            level,
            ratio,
        } => cmd_norm(&j, k, kappa, level, ratio.as_deref(), format),
        Command::KzVerify {
            k,
            kappa,
            j_max,
            tol,
            cache_dir,
            no_cache,
        } => cmd_kz_verify(k, kappa, &j_max, tol, cache_dir, no_cache, format),
        Command::ModularCheck {
            n,
            levels,
            corrupt_s,
        } => cmd_modular_check(n, &levels, corrupt_s, format),
    }
}

fn cmd_alcove(n: usize, level: i64, format: Format) -> Result<String, CliError> {
    let ctx = LevelContext::with_level(n, level)?;
    let weights = alcove_weights(&ctx)?;
    let doc = AlcoveDoc {
        command: "alcove",
        n,
        level,
        kappa: ctx.kappa(),
        count: weights.len(),
        entries: weights.iter().map(label_doc).collect(),
    };
    doc.render(format)
}

fn cmd_smatrix(n: usize, level: i64, format: Format) -> Result<String, CliError> {
    let ctx = LevelContext::with_level(n, level)?;
    let weights = alcove_weights(&ctx)?;
    let s = s_matrix(&ctx)?;
    let m = weights.len();
    let matrix = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let z = s[(i, j)];
                    [z.re, z.im]
                })
                .collect()
        })
        .collect();
    let doc = SMatrixDoc {
        command: "smatrix",
        n,
        level,
        kappa: ctx.kappa(),
        labels: weights.iter().map(label_doc).collect(),
        matrix,
    };
    doc.render(format)
}

fn fusion_nested(t: &FusionTensor) -> Vec<Vec<Vec<i64>>> {
    let m = t.size();
    (0..m)
        .map(|a| {
            (0..m)
                .map(|b| (0..m).map(|c| t.get(a, b, c)).collect())
                .collect()
        })
        .collect()
}

fn cmd_fusion(n: usize, level: i64, format: Format) -> Result<String, CliError> {
    let ctx = LevelContext::with_level(n, level)?;
    let tensor = kznorm_core::modular::verlinde_fusion(&ctx)?;
    let doc = FusionDoc {
        command: "fusion",
        n,
        level,
        labels: tensor.labels.iter().map(label_doc).collect(),
        tensor: fusion_nested(&tensor),
    };
    doc.render(format)
}

fn context_from(n: usize, level: Option<i64>, kappa: Option<f64>) -> Result<LevelContext, CliError> {
    match (level, kappa) {
        (Some(_), Some(_)) => Err(usage("--level and --kappa are mutually exclusive")),
        (None, None) => Err(usage("one of --level or --kappa is required")),
        (Some(k), None) => Ok(LevelContext::with_level(n, k)?),
        (None, Some(kp)) => Ok(LevelContext::with_kappa(n, kp)?),
    }
}

fn cmd_qdim(
    n: usize,
    level: Option<i64>,
    kappa: Option<f64>,
    j: Option<String>,
    labels: Option<Vec<i64>>,
    format: Format,
) -> Result<String, CliError> {
    let ctx = context_from(n, level, kappa)?;
    let weight = match (j, labels) {
        (Some(_), Some(_)) => return Err(usage("--j and --labels are mutually exclusive")),
        (None, None) => return Err(usage("one of --j or --labels is required")),
        (Some(js), None) => {
            if n != 2 {
                return Err(usage("--j is the sl(2) spin form; use --labels for n > 2"));
            }
            Weight::from_spin(js.parse::<HalfInt>()?)
        }
        (None, Some(ls)) => {
            if ls.len() != n - 1 {
                return Err(usage(format!(
                    "--labels needs {} entries for n = {}, got {}",
                    n - 1,
                    n,
                    ls.len()
                )));
            }
            Weight::new(ls)
        }
    };
    let value = kznorm_core::modular::quantum_dimension(&weight, &ctx)?;
    let doc = QdimDoc {
        command: "qdim",
        n,
        level: ctx.level(),
        kappa: ctx.kappa(),
        label: label_doc(&weight),
        value,
    };
    doc.render(format)
}

fn cmd_norm(
    j_str: &str,
    k: i64,
    kappa: Option<f64>,
    level: Option<i64>,
    ratio: Option<&str>,
    format: Format,
) -> Result<String, CliError> {
    let j: HalfInt = j_str.parse()?;
    let (res, kappa_val, level_opt) = match (kappa, level) {
        (Some(_), Some(_)) => return Err(usage("--kappa and --level are mutually exclusive")),
        (None, None) => return Err(usage("one of --kappa or --level is required")),
        (Some(kp), None) => (norm_closed_form(j, k, kp)?, kp, None),
        (None, Some(lv)) => (
            norm_closed_form_at_level(j, k, lv)?,
            (lv + 2) as f64,
            Some(lv),
        ),
    };
    let (degeneracy, value) = norm_value_fields(&res);
    let mut doc = NormDoc {
        command: "norm",
        j: half_doc(j),
        k,
        kappa: kappa_val,
        level: level_opt,
        window: res.window_flag,
        degeneracy,
        value,
        factors: res.factors.iter().map(factor_doc).collect(),
        ratio_to: None,
        ratio: None,
        ratio_note: None,
    };
    if let Some(j2_str) = ratio {
        let j2: HalfInt = j2_str.parse()?;
        let res2 = norm_closed_form(j2, k, kappa_val)?;
        doc.ratio_to = Some(half_doc(j2));
        if res.degeneracy.is_clean() && res2.degeneracy.is_clean() {
            doc.ratio = Some(res.value / res2.value);
        } else {
            doc.ratio_note = Some(format!(
                "ratio undefined: degeneracy '{}' at j = {}, '{}' at j = {}",
                docs::degeneracy_str(res.degeneracy),
                j,
                docs::degeneracy_str(res2.degeneracy),
                j2
            ));
        }
    }
    doc.render(format)
}

fn cmd_kz_verify(
    k: i64,
    kappa: f64,
    j_max_str: &str,
    tol: f64,
    cache_dir: Option<PathBuf>,
    no_cache: bool,
    format: Format,
) -> Result<String, CliError> {
    if k < 0 {
        return Err(usage(format!("--k must be nonnegative, got {k}")));
    }
    let j_max: HalfInt = j_max_str.parse()?;
    if j_max.twice() < k {
        return Err(usage(format!(
            "--j-max must satisfy 2·j_max ≥ k (the first spin with a nonzero \
             intertwiner space); got 2·j_max = {}, k = {k}",
            j_max.twice()
        )));
    }
    let dir = (!no_cache).then(|| cache::resolve_dir(cache_dir.as_deref()));

    let mut rows = Vec::new();
    for twice in k..=j_max.twice() {
        let j = HalfInt::from_twice(twice);
        let cached = dir
            .as_deref()
            .and_then(|d| cache::lookup(d, j, k, kappa, tol));
        let numeric = match cached {
            Some(v) => {
                eprintln!("kznorm: kz-verify j = {j}: cache hit");
                v
            }
            None => {
                let start = Instant::now();
                let kz = norm_via_kz(j, k, kappa, tol)?;
                eprintln!(
                    "kznorm: kz-verify j = {j}: transported dim-{} system in {:.3} s",
                    kz.reduced_dim,
                    start.elapsed().as_secs_f64()
                );
                if let Some(d) = dir.as_deref() {
                    cache::store(d, j, k, kappa, tol, kz.norm.value);
                }
                kz.norm.value
            }
        };
        let closed = norm_closed_form(j, k, kappa)?;
        if !closed.degeneracy.is_clean() {
            return Err(usage(format!(
                "closed-form product is degenerate ({}) at j = {j}, κ = {kappa}; \
                 pick a κ off the degeneration set",
                docs::degeneracy_str(closed.degeneracy)
            )));
        }
        rows.push(KzRowDoc {
            j: half_doc(j),
            numeric,
            closed_form: closed.value,
            ratio: numeric / closed.value,
        });
    }

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for r in &rows {
        lo = lo.min(r.ratio);
        hi = hi.max(r.ratio);
        sum += r.ratio;
    }
    let mean = sum / rows.len() as f64;
    let max_ratio_deviation = if rows.len() < 2 || mean == 0.0 {
        0.0
    } else {
        (hi - lo) / mean.abs()
    };

    let doc = KzVerifyDoc {
        command: "kz-verify",
        k,
        kappa,
        tol,
        rows,
        max_ratio_deviation,
    };
    doc.render(format)
}

fn parse_levels(levels: &str) -> Result<(i64, i64), CliError> {
    let bad = || {
        usage(format!(
            "--levels must be \"A..B\" or a single level, got {levels:?}"
        ))
    };
    let (lo, hi) = match levels.split_once("..") {
        Some((a, b)) => (
            a.trim().parse::<i64>().map_err(|_| bad())?,
            b.trim().parse::<i64>().map_err(|_| bad())?,
        ),
        None => {
            let k = levels.trim().parse::<i64>().map_err(|_| bad())?;
            (k, k)
        }
    };
    if lo < 0 || hi < lo {
        return Err(usage(format!(
            "--levels needs 0 ≤ A ≤ B, got {lo}..{hi}"
        )));
    }
    Ok((lo, hi))
}

fn cmd_modular_check(
    n: usize,
    levels: &str,
    corrupt_s: bool,
    format: Format,
) -> Result<String, CliError> {
    let (lo, hi) = parse_levels(levels)?;
    let mut rows = Vec::new();
    let mut overall: f64 = 0.0;
    for level in lo..=hi {
        let ctx = LevelContext::with_level(n, level)?;
        let labels = alcove_weights(&ctx)?;
        let mut s = s_matrix(&ctx)?;
        let t = t_matrix(&ctx, true)?;
        if corrupt_s {
            let z = s[(0, 0)];
            s[(0, 0)] = z * 1.001;
        }
        let report = verify_relations_with(&ctx, &labels, &s, &t)?;
        let max_residual = report.max_residual();
        if max_residual > MODULAR_THRESHOLD {
            return Err(CliError {
                code: 3,
                message: format!(
                    "modular relations violated for sl({n}) at level {level}: \
                     max residual {max_residual:.3e} exceeds {MODULAR_THRESHOLD:e} \
                     (symmetry {:.3e}, unitarity {:.3e}, S²=C {:.3e}, (ST)³=S² {:.3e}, \
                     |T|=1 {:.3e}, qdim {:.3e})",
                    report.symmetry,
                    report.unitarity,
                    report.s_squared_conjugation,
                    report.st_cubed,
                    report.t_unitary,
                    report.qdim_match
                ),
            });
        }
        let fusion = fusion_from_s(&labels, &s)?;
        let m = fusion.size();
        let mut entries = 0usize;
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if fusion.get(a, b, c) != 0 {
                        entries += 1;
                    }
                }
            }
        }
        overall = overall.max(max_residual);
        rows.push(ModularRowDoc {
            level,
            symmetry: report.symmetry,
            unitarity: report.unitarity,
            s_squared_conjugation: report.s_squared_conjugation,
            st_cubed: report.st_cubed,
            t_unitary: report.t_unitary,
            qdim_match: report.qdim_match,
            max_residual,
            fusion_entries: entries,
        });
    }
    let doc = ModularCheckDoc {
        command: "modular-check",
        n,
        level_min: lo,
        level_max: hi,
        threshold: MODULAR_THRESHOLD,
        rows,
        max_residual: overall,
    };
    doc.render(format)
}
