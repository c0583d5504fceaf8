//! Command-line driver: parse module files, run the requested computation
//! inside a window-doubling retry loop, and print deterministic reports.
//!
//! Exit codes: 0 success, 2 parse/validation/config failure, 3 window
//! exhaustion after all retries, 4 dimension cap exceeded.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use figlab::error::{FigError, Result};
use figlab::field::{Field, PrimeField, Rationals};
use figlab::functors::shift;
use figlab::generate::{generate_file, suite_files};
use figlab::homology::{
    classical_depth, derivative_depth, h_dims, homological_degree, is_sharp_filtered, max_support,
    CertStatus, Extent,
};
use figlab::io::{
    module_file_to_string, parse_module_file, parse_module_str, ParsedModule, TypedInput,
};
use figlab::localcoh::{
    invariant_report, lc_i_max, local_cohomology, local_cohomology_tds, torsion_submodule,
};
use figlab::module::WindowedModule;
use figlab::report::{
    emit, ConjectureRow, DepthRow, Format, HomologyRow, InvariantRow, LocalCohRow, ValidateRow,
};

#[derive(Parser)]
#[command(name = "figlab", version, about = "Exact invariants of finitely generated FI_G-modules")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Table,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Table => Format::Table,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Truncation window (default: twice the top presentation degree plus 2,
    /// or the stored window for raw data). Must reach the top presentation
    /// degree.
    #[arg(long)]
    window: Option<usize>,
    /// Window doublings attempted when a result cannot be certified.
    #[arg(long, default_value_t = 3)]
    retries: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Seed for generated modules.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Top homological / cohomological index where applicable.
    #[arg(long)]
    imax: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and semantically validate module files.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Full invariant report: gd, td, reg, N, depths, local cohomology.
    Invariants {
        #[command(flatten)]
        common: Common,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Homology dimensions H_i for i up to --imax (default 2).
    Homology {
        #[command(flatten)]
        common: Common,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Local cohomology dimensions H^i_m (default --imax: gd + 1).
    Localcoh {
        #[command(flatten)]
        common: Common,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// The three depth computations and whether they agree.
    Depth {
        #[command(flatten)]
        common: Common,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Regularity-conjecture scan over files, or over a generated suite
    /// when no files are given.
    Conjecture {
        #[command(flatten)]
        common: Common,
        /// Number of generated modules when no files are given.
        #[arg(long, default_value_t = 20)]
        count: usize,
        files: Vec<PathBuf>,
    },
    /// Print a seeded random presentation file to stdout.
    Generate {
        #[command(flatten)]
        common: Common,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("figlab: {e}");
            exit_code(&e)
        }
    };
    std::process::exit(code);
}

fn exit_code(e: &FigError) -> i32 {
    match e {
        FigError::WindowExhausted { .. } => 3,
        FigError::DimCap { .. } => 4,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Cmd::Validate { common, files } => cmd_validate(&common, &files),
        Cmd::Invariants { common, files } => {
            let rows = run_files(&files, &common, invariant_rows, invariant_rows)?;
            print!("{}", emit(&rows, common.format.into()));
            Ok(0)
        }
        Cmd::Homology { common, files } => {
            let rows = run_files(&files, &common, homology_rows, homology_rows)?;
            print!("{}", emit(&rows, common.format.into()));
            Ok(0)
        }
        Cmd::Localcoh { common, files } => {
            let rows = run_files(&files, &common, localcoh_rows, localcoh_rows)?;
            print!("{}", emit(&rows, common.format.into()));
            Ok(0)
        }
        Cmd::Depth { common, files } => {
            let rows = run_files(&files, &common, depth_rows, depth_rows)?;
            print!("{}", emit(&rows, common.format.into()));
            Ok(0)
        }
        Cmd::Conjecture { common, count, files } => cmd_conjecture(&common, count, &files),
        Cmd::Generate { common } => {
            print!("{}", module_file_to_string(&generate_file(common.seed)));
            Ok(0)
        }
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn module_id<F: Field>(m: &ParsedModule<F>) -> String {
    m.name.clone().unwrap_or_else(|| "unnamed".into())
}

/// Validation reports on every file, even after failures; any failure makes
/// the whole run exit 2.
fn cmd_validate(common: &Common, files: &[PathBuf]) -> Result<i32> {
    let mut rows = Vec::with_capacity(files.len());
    let mut all_ok = true;
    for path in files {
        let (id, outcome) = match parse_module_file(path) {
            Err(e) => (file_stem(path), Err(e)),
            Ok(TypedInput::Q(m)) => (module_id(&m), m.validate_deep()),
            Ok(TypedInput::Fp(m)) => (module_id(&m), m.validate_deep()),
        };
        let status = match outcome {
            Ok(()) => "ok".into(),
            Err(e) => {
                all_ok = false;
                format!("error: {e}")
            }
        };
        rows.push(ValidateRow { module_id: id, status });
    }
    print!("{}", emit(&rows, common.format.into()));
    Ok(if all_ok { 0 } else { 2 })
}

/// Parse each file and run the per-module computation, keeping input order.
fn run_files<R>(
    files: &[PathBuf],
    common: &Common,
    on_q: impl Fn(&ParsedModule<Rationals>, &Common) -> Result<Vec<R>>,
    on_p: impl Fn(&ParsedModule<PrimeField>, &Common) -> Result<Vec<R>>,
) -> Result<Vec<R>> {
    let mut rows = Vec::new();
    for path in files {
        match parse_module_file(path)? {
            TypedInput::Q(m) => {
                m.validate_deep()?;
                rows.extend(on_q(&m, common)?);
            }
            TypedInput::Fp(m) => {
                m.validate_deep()?;
                rows.extend(on_p(&m, common)?);
            }
        }
    }
    Ok(rows)
}

/// Materialize and compute, doubling the window while the result is not
/// certified (or the window is exhausted) and retries remain. The closure
/// reports certification through its boolean; an uncertified result after
/// the last retry is still returned.
fn retrying<F: Field, T>(
    m: &ParsedModule<F>,
    common: &Common,
    f: impl Fn(&Arc<WindowedModule<F>>) -> Result<(T, bool)>,
) -> Result<T> {
    let base = match common.window {
        Some(w) => {
            if w < m.min_window() {
                return Err(FigError::Precondition(format!(
                    "window {w} is below the presentation's top degree {}",
                    m.min_window()
                )));
            }
            w
        }
        None => m.default_window(),
    };
    let mut window = base;
    let mut attempt = 0;
    loop {
        let grow = |w: usize| w.max(1) * 2;
        match m.materialize(window).and_then(|v| f(&v)) {
            Ok((t, true)) => return Ok(t),
            Ok((t, false)) => {
                if attempt < common.retries && m.can_grow() {
                    attempt += 1;
                    window = grow(window);
                } else {
                    return Ok(t);
                }
            }
            Err(e @ FigError::WindowExhausted { .. }) => {
                if attempt < common.retries && m.can_grow() {
                    attempt += 1;
                    window = grow(window);
                } else {
                    return Err(e);
                }
            }
            Err(e) => return Err(e),
        }
    }
}

fn invariant_rows<F: Field>(m: &ParsedModule<F>, common: &Common) -> Result<Vec<InvariantRow>> {
    let report = retrying(m, common, |v| {
        let r = invariant_report(v)?;
        let certified = r.certified;
        Ok((r, certified))
    })?;
    Ok(vec![InvariantRow::new(module_id(m), m.field.spec(), &m.group, &report)])
}

fn homology_rows<F: Field>(m: &ParsedModule<F>, common: &Common) -> Result<Vec<HomologyRow>> {
    let i_max = common.imax.unwrap_or(2);
    let id = module_id(m);
    retrying(m, common, |v| {
        let dims = h_dims(v, i_max)?;
        let mut rows = Vec::with_capacity(i_max + 1);
        let mut certified = true;
        for (i, d) in dims.iter().enumerate() {
            let hd = homological_degree(v, i)?;
            certified &= hd.status == CertStatus::Certified;
            rows.push(HomologyRow::new(id.clone(), i, d.clone(), hd.value, hd.status));
        }
        Ok((rows, certified))
    })
}

fn localcoh_rows<F: Field>(m: &ParsedModule<F>, common: &Common) -> Result<Vec<LocalCohRow>> {
    let id = module_id(m);
    retrying(m, common, |v| {
        let i_max = common.imax.unwrap_or_else(|| lc_i_max(v));
        let lc = local_cohomology(v, i_max)?;
        let rows = lc
            .modules
            .iter()
            .enumerate()
            .map(|(i, h)| {
                LocalCohRow::new(id.clone(), i, h.dims.clone(), max_support(&h.dims), lc.status)
            })
            .collect();
        Ok((rows, lc.status == CertStatus::Certified))
    })
}

fn depth_rows<F: Field>(m: &ParsedModule<F>, common: &Common) -> Result<Vec<DepthRow>> {
    let id = module_id(m);
    retrying(m, common, |v| {
        let i_top = common.imax.unwrap_or_else(|| lc_i_max(v));
        let (tds, lc_status) = local_cohomology_tds(v, i_top)?;
        let depth_lc = tds
            .iter()
            .enumerate()
            .find(|(_, t)| !t.is_neg_inf())
            .map(|(i, _)| Extent::finite(i))
            .unwrap_or(Extent::PosInf);
        let classical = classical_depth(v)?;
        let derivative = derivative_depth(v, i_top + 1)?;
        let agree = depth_lc == classical.value && classical.value == derivative.value;
        let status = lc_status.and(classical.status).and(derivative.status);
        let row = DepthRow::new(
            id.clone(),
            depth_lc,
            classical.value,
            derivative.value,
            agree,
            status,
        );
        Ok((vec![row], status == CertStatus::Certified))
    })
}

fn cmd_conjecture(common: &Common, count: usize, files: &[PathBuf]) -> Result<i32> {
    let mut rows = Vec::new();
    if files.is_empty() {
        for file in suite_files(common.seed, count) {
            match parse_module_str(&module_file_to_string(&file))? {
                TypedInput::Q(m) => rows.push(conjecture_row(&m, common)),
                TypedInput::Fp(m) => rows.push(conjecture_row(&m, common)),
            }
        }
    } else {
        for path in files {
            match parse_module_file(path)? {
                TypedInput::Q(m) => rows.push(conjecture_row(&m, common)),
                TypedInput::Fp(m) => rows.push(conjecture_row(&m, common)),
            }
        }
    }
    print!("{}", emit(&rows, common.format.into()));
    Ok(0)
}

/// One scan row; failures are recorded in the row so the scan continues.
fn conjecture_row<F: Field>(m: &ParsedModule<F>, common: &Common) -> ConjectureRow {
    let id = module_id(m);
    match conjecture_row_inner(m, common, &id) {
        Ok(row) => row,
        Err(e) => ConjectureRow::failed(id, e.to_string()),
    }
}

fn conjecture_row_inner<F: Field>(
    m: &ParsedModule<F>,
    common: &Common,
    id: &str,
) -> Result<ConjectureRow> {
    m.validate_deep()?;
    retrying(m, common, |v| {
        let report = invariant_report(v)?;
        let filtered = is_sharp_filtered(v)?;
        let applicable = !filtered.value;
        let (torsion, _) = torsion_submodule(v)?;
        let torsion_check = if torsion.dims == v.dims {
            if report.reg.value == report.td.value { "ok" } else { "FAIL" }
        } else {
            "n/a"
        };
        let shifted = Arc::new(shift(v)?);
        let shift_check = if is_sharp_filtered(&shifted)?.value {
            "n/a"
        } else {
            let shifted_reg = figlab::homology::regularity(&shifted)?;
            if shifted_reg.value == report.reg.value.plus(-1) { "ok" } else { "FAIL" }
        };
        let certified = report.certified && filtered.status == CertStatus::Certified;
        let row = ConjectureRow::new(
            id.to_string(),
            applicable,
            report.reg.value,
            report.conjecture_rhs,
            report.gap,
            torsion_check.into(),
            shift_check.into(),
            certified,
            report.window_used,
        );
        Ok((row, certified))
    })
}
