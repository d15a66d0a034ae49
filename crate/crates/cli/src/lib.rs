//! The `ykr` command line: argument handling, dispatch and exit codes.

pub mod cache;

use cache::Cache;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;
use ykr::algebra::{GradedDims, Rat, SeriesWindow, TriDeg};
use ykr::braid::{parse_braid, BraidWord};
use ykr::checks;
use ykr::hochschild::assemble_cy;
use ykr::homology::{
    hkr_complex, hy_complex, hy_with_coeffs_complex, normalize, raw_window, reduced_ratio, reduced_ratio_hkr, shift_collapsed, with_threads,
    HomologyError, Normalization, PoincareReport,
};
use ykr::oracle::{closed_form, dinv_sum, f_recursion, ideal_dims, ideal_mod_y_dims, ClosedForm, OracleError, Recipe, Variant};
use ykr::yify::YComplex;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_WINDOW: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ykr", version, about = "Exact y-ified triply graded homology of braid closures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Window `q:a:t`; each part is `W` (meaning 0..W) or `lo..hi`, and `a` may be `*` (all).
    #[arg(long, global = true)]
    pub window: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for the cell loops (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Cache directory for minimized complexes (overrides `YKR_CACHE_DIR`).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Disables the cache even when a directory is configured.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Prints cache counters and timings to stderr.
    #[arg(long, global = true)]
    pub stats: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Poincaré series of HY or H_KR of a braid closure.
    Homology(HomologyArgs),
    /// Independent ground-truth series.
    Oracle {
        #[command(subcommand)]
        which: OracleCmd,
    },
    /// Runs a check suite: invariants, markov, splitting, fulltwist or symmetry.
    Verify { suite: String },
}

#[derive(Args, Debug)]
pub struct HomologyArgs {
    /// Braid word, e.g. `s1^2 s2^-1`, `FT(2,3)`, `JM(3)`, `T(2,3)`, `@3 s1`.
    pub braid: String,
    /// y-ified homology HY (the default).
    #[arg(long, conflicts_with = "hkr")]
    pub yify: bool,
    /// Khovanov-Rozansky homology, the y = 0 specialization.
    #[arg(long)]
    pub hkr: bool,
    /// Specializes `y_c` to the given scalar on each closure component,
    /// e.g. `--coeffs 0 1` or `--coeffs=-1/2,3`.
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true, conflicts_with_all = ["hkr", "reduced"])]
    pub coeffs: Option<Vec<Rat>>,
    /// Applies the writhe/strand/component normalization shift.
    #[arg(long)]
    pub normalize: bool,
    /// Divides by the unknot and factors out the overall monomial.
    #[arg(long)]
    pub reduced: bool,
}

#[derive(Subcommand, Debug)]
pub enum OracleCmd {
    /// The `f_(k,…,k)` recursion in `n` variables.
    Frec { n: usize, k: usize },
    /// Sum of `t^{|e|} q^{dinv(e)}` over the lattice `e_1 = 0, e_{i+1} ≤ e_i + 1`.
    Dinv { n: usize },
    /// Graded dimensions of `J_n^k` (`J`) or `𝒥_n^k` (`calJ`).
    Ideal {
        #[arg(value_parser = ["J", "calJ"])]
        ideal: String,
        n: usize,
        k: usize,
        /// Quotient `J_n^k / y J_n^k` (only for `J`).
        #[arg(long)]
        mod_y: bool,
        /// How powers are formed.
        #[arg(long, value_parser = ["direct", "product"], default_value = "product")]
        recipe: String,
    },
    /// Expansion of `unknot`, `hopf_a0`, `jm(n)`, `ft2(k)` or `split_product(f, g, …)`.
    Closed { form: String },
}

/// An error with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

fn parse_err(m: impl ToString) -> CliError {
    CliError { code: EXIT_PARSE, message: m.to_string() }
}

fn window_err(m: impl ToString) -> CliError {
    CliError { code: EXIT_WINDOW, message: m.to_string() }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> CliError {
        match e {
            HomologyError::Window(_) | HomologyError::EmptyWindow => window_err(e),
            _ => parse_err(e),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> CliError {
        match e {
            OracleError::Window(_) => window_err(e),
            _ => parse_err(e),
        }
    }
}

/// Window bounds in integral `(q, a, t)` exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowSpec {
    pub q: (i32, i32),
    /// `None` means every `a`-degree.
    pub a: Option<i32>,
    pub t: (i32, i32),
}

impl Default for WindowSpec {
    fn default() -> WindowSpec {
        WindowSpec { q: (0, 4), a: None, t: (0, 4) }
    }
}

fn parse_range(s: &str) -> Option<(i32, i32)> {
    match s.split_once("..") {
        Some((lo, hi)) => Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?)),
        None => Some((0, s.trim().parse().ok()?)),
    }
}

impl WindowSpec {
    pub fn parse(s: &str) -> Result<WindowSpec, CliError> {
        let bad = || parse_err(format!("malformed window {s:?}; expected q:a:t with parts W or lo..hi"));
        let parts: Vec<&str> = s.split(':').collect();
        let [q, a, t] = parts[..] else { return Err(bad()) };
        let a = match a.trim() {
            "*" | "all" => None,
            x => Some(x.parse().map_err(|_| bad())?),
        };
        Ok(WindowSpec { q: parse_range(q).ok_or_else(bad)?, a, t: parse_range(t).ok_or_else(bad)? })
    }

    /// The window on `n` strands, validated.
    pub fn series(&self, n: usize) -> Result<SeriesWindow, CliError> {
        let w = SeriesWindow {
            q_min: 2 * self.q.0,
            q_max: 2 * self.q.1,
            a_min: 0,
            a_max: self.a.unwrap_or(n as i32),
            t_min: 2 * self.t.0,
            t_max: 2 * self.t.1,
        };
        w.validate(n).map_err(window_err)?;
        Ok(w)
    }
}

struct Ctx {
    window: Option<WindowSpec>,
    format: Format,
    cache: Cache,
}

impl Ctx {
    fn window(&self) -> WindowSpec {
        self.window.unwrap_or_default()
    }

    fn render(&self, r: &PoincareReport) -> String {
        match self.format {
            Format::Text => r.to_text(),
            Format::Json => r.to_json() + "\n",
            Format::Latex => r.to_latex() + "\n",
        }
    }
}

fn cy(y: &YComplex, yify: bool, w: &SeriesWindow) -> GradedDims {
    if yify {
        hy_complex(y, w)
    } else {
        hkr_complex(y, w)
    }
}

/// Reduced ratio on `w` with its overall monomial `m` factored out: the table
/// is located on a probe window above the floor, then recomputed on `w + m`.
fn reduced_factored(y: &YComplex, yify: bool, norm: Option<&Normalization>, w: &SeriesWindow) -> Result<(GradedDims, TriDeg), CliError> {
    let shift = match norm {
        Some(n) => n.shift()?,
        None => TriDeg::ZERO,
    };
    let ratio = |target: &SeriesWindow| -> Result<GradedDims, CliError> {
        let r = target.shifted(-shift);
        let raw = SeriesWindow { q_min: r.q_min - 2, t_min: r.t_min - 2, a_min: 0, a_max: y.n as i32, ..r };
        let mut g = cy(y, yify, &raw);
        if let Some(n) = norm {
            g = normalize(&g, n)?;
        }
        let g = if yify { reduced_ratio(&g) } else { reduced_ratio_hkr(&g) };
        Ok(g.restrict(target))
    };
    let floor = assemble_cy(y, yify).floor().shifted(shift);
    let probe = SeriesWindow {
        q_min: floor.q2,
        q_max: floor.q2 + (w.q_max - w.q_min) + 4,
        a_min: floor.a,
        a_max: floor.a + y.n as i32,
        t_min: floor.t2,
        t_max: floor.t2 + (w.t_max - w.t_min) + 4,
    };
    let p = ratio(&probe)?;
    let m = p
        .cells
        .keys()
        .map(|c| c.doubled_qta())
        .reduce(|a, b| (a.0.min(b.0), a.1.min(b.1), a.2.min(b.2)))
        .map(|(q2, t2, a2)| TriDeg::from_doubled_qta(q2, t2, a2 / 2))
        .unwrap_or(TriDeg::ZERO);
    Ok((ratio(&w.shifted(m))?.shift(-m), m))
}

fn homology(ctx: &mut Ctx, a: &HomologyArgs) -> Result<String, CliError> {
    let b: BraidWord = parse_braid(&a.braid).map_err(parse_err)?;
    let w = ctx.window().series(b.n)?;
    let norm = Normalization::of(&b.closure(), b.n);
    let yify = !a.hkr;
    let y = ctx.cache.fy(&b);
    let mut factor = None;
    let (kind, dims) = if let Some(nu) = &a.coeffs {
        let d = if a.normalize { norm.shift()? } else { TriDeg::ZERO };
        let (d2, _, _) = d.doubled_qta();
        let g = hy_with_coeffs_complex(&y, nu, w.q_min - d2, w.q_max - d2, b.n as i32)?;
        let cw = SeriesWindow { t_min: 0, t_max: 0, ..w };
        let nu_text: Vec<String> = nu.iter().map(|v| v.to_string()).collect();
        (format!("HY[nu={}]", nu_text.join(",")), shift_collapsed(&g, d).restrict(&cw))
    } else if a.reduced {
        let (g, m) = reduced_factored(&y, yify, a.normalize.then_some(&norm), &w)?;
        factor = Some(m);
        (if yify { "HY" } else { "HKR" }.to_string(), g)
    } else {
        let raw = if a.normalize { raw_window(&w, &norm)? } else { w };
        let mut g = cy(&y, yify, &raw);
        if a.normalize {
            g = normalize(&g, &norm)?;
        }
        (if yify { "HY" } else { "HKR" }.to_string(), g)
    };
    let mut r = PoincareReport::new(format!("{kind}({b})"), dims);
    r.normalization = a.normalize.then_some(norm);
    r.reduced = a.reduced;
    r.factor = factor;
    Ok(ctx.render(&r))
}

fn oracle(ctx: &Ctx, which: &OracleCmd) -> Result<String, CliError> {
    let (label, dims) = match which {
        OracleCmd::Frec { n, k } => (format!("f_recursion({n},{k})"), f_recursion(*n, *k, &ctx.window().series(*n)?)?),
        OracleCmd::Dinv { n } => (format!("dinv_sum({n})"), dinv_sum(*n, &ctx.window().series(*n)?)),
        OracleCmd::Ideal { ideal, n, k, mod_y, recipe } => {
            let variant = if ideal == "J" { Variant::J } else { Variant::CalJ };
            let w = ctx.window().series(*n)?;
            if *mod_y {
                if variant != Variant::J {
                    return Err(parse_err("--mod-y applies to J only"));
                }
                (format!("{ideal}_{n}^{k} / y {ideal}_{n}^{k}"), ideal_mod_y_dims(*n, *k, variant, &w)?)
            } else {
                let recipe = if recipe == "direct" { Recipe::Direct } else { Recipe::Product };
                (format!("{ideal}_{n}^{k}"), ideal_dims(*n, *k, variant, recipe, &w)?)
            }
        }
        OracleCmd::Closed { form } => {
            let f = ClosedForm::parse(form)?;
            let top_a = f.ratfn().num.iter().map(|(e, _)| e.2).max().unwrap_or(0).max(0) as usize;
            (form.clone(), closed_form(&f, &ctx.window().series(top_a)?)?)
        }
    };
    Ok(ctx.render(&PoincareReport::new(label, dims)))
}

fn verify(ctx: &Ctx, suite: &str, err: &mut String) -> Result<String, CliError> {
    let scale = ctx.window.map(|w| w.q.1);
    let results = checks::suite(suite, scale).ok_or_else(|| parse_err(format!("unknown suite {suite:?}; expected one of {}", checks::SUITES.join(", "))))?;
    let mut out = String::new();
    for c in &results {
        out.push_str(&c.line());
        out.push('\n');
    }
    if let Some(c) = results.iter().find(|c| c.required && !c.passed) {
        err.push_str(&format!("check {} failed: {}\n", c.id, c.detail));
        return Err(CliError { code: EXIT_CHECK_FAILED, message: out });
    }
    Ok(out)
}

/// Runs the command line; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let window = match cli.window.as_deref().map(WindowSpec::parse).transpose() {
        Ok(w) => w,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            return e.code;
        }
    };
    let dir = if cli.no_cache { None } else { Cache::resolve_dir(cli.cache_dir.clone()) };
    let mut ctx = Ctx { window, format: cli.format, cache: Cache::new(dir) };
    let t0 = Instant::now();
    let mut notes = String::new();
    let result = with_threads(cli.threads, || match &cli.command {
        Command::Homology(a) => homology(&mut ctx, a),
        Command::Oracle { which } => oracle(&ctx, which),
        Command::Verify { suite } => verify(&ctx, suite, &mut notes),
    });
    let _ = write!(err, "{notes}");
    let code = match result {
        Ok(text) => {
            let _ = write!(out, "{text}");
            EXIT_OK
        }
        Err(e) if e.code == EXIT_CHECK_FAILED => {
            let _ = write!(out, "{}", e.message);
            e.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    };
    if cli.stats {
        let _ = writeln!(err, "{}seconds: {:.3}", ctx.cache.stats.lines(), t0.elapsed().as_secs_f64());
    }
    code
}
