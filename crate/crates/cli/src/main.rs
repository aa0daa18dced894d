use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use sqrtlat::analysis::{
    count_zeros_delta, count_zeros_rectangle, histogram_values, l2_sum, moment_fn, real_zeros, verify_interpolation,
};
use sqrtlat::basis::{
    eval_laplace, eval_phi_approx, laplace::laplace_terms, ApproxParams, CollocationSolver, ContourEvaluator,
    EvalMethod, EvalResult,
};
use sqrtlat::config::Config;
use sqrtlat::io::figures::{emit_figure, FigureId, FigureSpec};
use sqrtlat::io::{cached_g_expansion, fmt_f64, write_histogram, write_real_zeros, write_table, write_zero_counts};
use sqrtlat::kloosterman::{kloosterman_s, kloosterman_s_tilde, CoeffTable, CuspKind};
use sqrtlat::special::{phi, psi, psi_second_moment, PsiEvaluator};
use sqrtlat::{Error, Result};

#[derive(Parser)]
#[command(name = "sqrtlat", version, about = "Fourier interpolation basis for square-root lattices")]
struct Cli {
    /// key=value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate f_n at one point
    Eval(EvalArgs),
    /// Write f_0..f_nmax on a grid to CSV
    Table(TableArgs),
    /// q-expansion of g_n (cached)
    GnExpansion(GnArgs),
    /// Kloosterman sum S(m, n, c) or its cusp-1 variant
    Kloosterman(KloostermanArgs),
    /// One Fourier coefficient of g_m
    Coeff(CoeffArgs),
    /// Φ at a complex point
    Phi(PhiArgs),
    /// Ψ at a real point
    Psi(PsiArgs),
    /// ∫_T^{2T} Ψ² normalized by T log T
    PsiMoment(PsiMomentArgs),
    /// Zero counts and real zeros of f_n/sin π(x − n)
    Zeros(ZerosArgs),
    /// ∫_a^b f_n²
    Moment(MomentArgs),
    /// Σ_{n≤ξ} ∫ f_n²
    L2sum(L2sumArgs),
    /// Histogram of n^{1/4} f_n(x0)
    Histogram(HistogramArgs),
    /// Interpolation formula on a Gaussian pair
    VerifyInterp(InterpArgs),
    /// Regenerate the data and SVG for a figure
    Figure(FigureArgs),
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    /// Imaginary part of the argument (contour only)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    im: f64,
    /// collocation, contour, laplace or phi; chosen from the argument when omitted
    #[arg(long)]
    method: Option<String>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    nmax: usize,
    #[arg(long, default_value_t = 0.0)]
    xmin: f64,
    #[arg(long)]
    xmax: f64,
    #[arg(long)]
    step: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GnArgs {
    #[arg(long)]
    n: usize,
    /// Exponents below q^{order/8}
    #[arg(long)]
    order: i64,
}

#[derive(Args)]
struct KloostermanArgs {
    #[arg(long, allow_hyphen_values = true)]
    m: i64,
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
    #[arg(long)]
    c: i64,
    #[arg(long)]
    tilde: bool,
}

#[derive(Args)]
struct CoeffArgs {
    #[arg(long)]
    m: i64,
    #[arg(long)]
    n: i64,
    #[arg(long, default_value = "expansion")]
    method: String,
    #[arg(long, default_value_t = 200)]
    cmax: i64,
    /// inf or one
    #[arg(long, default_value = "inf")]
    cusp: String,
}

#[derive(Args)]
struct PhiArgs {
    #[arg(long, allow_hyphen_values = true)]
    re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    im: f64,
}

#[derive(Args)]
struct PsiArgs {
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
}

#[derive(Args)]
struct PsiMomentArgs {
    #[arg(long = "T")]
    t: f64,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("window").required(true).args(["t1", "rect", "real"])))]
struct ZerosArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, requires = "t2")]
    t1: Option<f64>,
    #[arg(long, requires = "t1")]
    t2: Option<f64>,
    #[arg(long)]
    rect: Option<f64>,
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    real: Option<Vec<f64>>,
    /// Grid step for real zeros
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    /// CSV output (counts, or zeros for --real)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MomentArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
}

#[derive(Args)]
struct L2sumArgs {
    #[arg(long)]
    xi: usize,
    /// Upper integration limit; ξ + 40√ξ by default
    #[arg(long)]
    cut: Option<f64>,
}

#[derive(Args)]
struct HistogramArgs {
    #[arg(long, default_value_t = 0.63)]
    x0: f64,
    #[arg(long, default_value_t = 2000)]
    nmax: usize,
    #[arg(long, default_value_t = 60)]
    bins: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InterpArgs {
    #[arg(long)]
    t: f64,
    /// Points to test; 0, 0.25, ..., 6 by default
    #[arg(long, value_delimiter = ',')]
    xs: Option<Vec<f64>>,
    #[arg(long)]
    nterms: Option<usize>,
    /// Pass threshold; the interp.t4 tolerance by default
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct FigureArgs {
    #[arg(long)]
    id: String,
    #[arg(long, default_value = "figures")]
    out_dir: PathBuf,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    step: Option<f64>,
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn eval_json(r: &EvalResult) -> Value {
    json!({
        "n": r.n, "x": complex_json(r.x), "value": fmt_f64(r.value.re), "imag": fmt_f64(r.value.im),
        "method": r.method.name(), "err": r.err,
    })
}

fn solver_for(cfg: &Config, n_max: usize, x_max: f64) -> Result<CollocationSolver> {
    let size = cfg.default_n.max(CollocationSolver::recommended_size(n_max, x_max));
    CollocationSolver::with_height(size, cfg.height_rule.height(size))
}

fn eval(cfg: &Config, a: EvalArgs) -> Result<Value> {
    let z = Complex64::new(a.x, a.im);
    let method = match a.method.as_deref() {
        Some(m) => m.parse()?,
        None if a.im == 0.0 && a.x >= 0.0 => EvalMethod::Collocation,
        None => EvalMethod::Contour,
    };
    if a.im != 0.0 && method != EvalMethod::Contour && method != EvalMethod::PhiApprox {
        return Err(Error::invalid(format!("method {} needs a real argument", method.name())));
    }
    let r = match method {
        EvalMethod::Collocation => solver_for(cfg, a.n, a.x.abs())?.eval(a.n, a.x)?,
        EvalMethod::Contour => ContourEvaluator::new(a.n).with_precision_cap(cfg.precision_cap_bits).eval(z, 0)?,
        EvalMethod::Laplace => eval_laplace(a.n, a.x, laplace_terms(a.n, a.x, 1e-17, 4096))?,
        EvalMethod::PhiApprox => eval_phi_approx(a.n, z, &ApproxParams::default())?,
    };
    Ok(eval_json(&r))
}

fn table(cfg: &Config, a: TableArgs) -> Result<Value> {
    if !(a.step > 0.0 && a.xmax >= a.xmin && a.xmin >= 0.0) {
        return Err(Error::invalid(format!("bad grid [{}, {}] step {}", a.xmin, a.xmax, a.step)));
    }
    let k = ((a.xmax - a.xmin) / a.step).round() as usize;
    let xs: Vec<f64> = (0..=k).map(|j| a.xmin + j as f64 * a.step).collect();
    let solver = solver_for(cfg, a.nmax, a.xmax)?;
    let cols = solver.eval_batch(&xs)?;
    let rows: Vec<EvalResult> = (0..=a.nmax).flat_map(|n| cols.iter().map(move |c| c[n])).collect();
    let written = write_table(&a.out, &rows)?;
    Ok(json!({ "path": a.out, "rows": written, "solver": solver.meta() }))
}

fn gn_expansion(cfg: &Config, a: GnArgs) -> Result<Value> {
    let s = cached_g_expansion(&cfg.cache_dir, a.n, a.order)?;
    let terms: Vec<Value> = s.terms().map(|(k, c)| json!([k, c.to_string()])).collect();
    Ok(json!({ "n": a.n, "order": a.order, "exponent_unit": "q^(1/8)", "terms": terms }))
}

fn kloosterman(a: KloostermanArgs) -> Result<Value> {
    let v = if a.tilde { kloosterman_s_tilde(a.m, a.n, a.c)? } else { kloosterman_s(a.m, a.n, a.c)? };
    Ok(json!({ "m": a.m, "n": a.n, "c": a.c, "tilde": a.tilde, "value": complex_json(v) }))
}

fn coeff(a: CoeffArgs) -> Result<Value> {
    let kind = match a.cusp.as_str() {
        "inf" => CuspKind::CuspInf,
        "one" => CuspKind::CuspOne,
        other => return Err(Error::invalid(format!("unknown cusp {other:?} (inf, one)"))),
    };
    let table = match a.method.as_str() {
        "expansion" => CoeffTable::from_expansion(kind, a.m, &[a.n])?,
        "rademacher" => CoeffTable::from_rademacher(kind, a.m, &[a.n], a.cmax)?,
        other => return Err(Error::invalid(format!("unknown method {other:?} (rademacher, expansion)"))),
    };
    let e = &table.entries[&a.n];
    Ok(json!({ "m": a.m, "n": a.n, "cusp": a.cusp, "value": e.value, "err": e.err, "method": e.method, "c_max": e.c_max }))
}

fn zeros(a: ZerosArgs) -> Result<Value> {
    let report = if let (Some(t1), Some(t2)) = (a.t1, a.t2) {
        count_zeros_delta(a.n, t1, t2)?
    } else if let Some(r) = a.rect {
        count_zeros_rectangle(a.n, r)?
    } else {
        let ab = a.real.as_deref().expect("clap enforces one window");
        real_zeros(a.n, ab[0], ab[1], a.step)?
    };
    if let Some(path) = &a.out {
        if a.real.is_some() {
            write_real_zeros(path, &report)?;
        } else {
            write_zero_counts(path, std::slice::from_ref(&report))?;
        }
    }
    Ok(serde_json::to_value(&report)?)
}

fn histogram(a: HistogramArgs) -> Result<Value> {
    let h = histogram_values(a.x0, a.nmax, a.bins)?;
    if let Some(path) = &a.out {
        write_histogram(path, &h.bins)?;
    }
    Ok(json!({
        "x0": h.x0, "nmax": a.nmax, "mean": h.mean, "stdev": h.stdev, "max_abs": h.max_abs,
        "argmax": h.argmax, "solver_size": h.solver_size, "bins": h.bins,
    }))
}

/// Interpolation check; a miss beyond the threshold is a tolerance failure.
fn verify_interp(cfg: &Config, a: InterpArgs) -> Result<Value> {
    let xs = a.xs.unwrap_or_else(|| (0..=24).map(|k| k as f64 * 0.25).collect());
    let r = verify_interpolation(a.t, &xs, a.nterms)?;
    let tol = a.tol.unwrap_or_else(|| cfg.tol("interp.t4"));
    if !(r.max_err < tol) {
        return Err(Error::Tolerance {
            msg: format!("interpolation error {:.3e} exceeds {tol:.1e}", r.max_err),
            best_re: r.max_err,
            best_im: 0.0,
            err: r.max_err,
        });
    }
    Ok(serde_json::to_value(&r)?)
}

fn figure(a: FigureArgs) -> Result<Value> {
    let id: FigureId = a.id.parse()?;
    let mut spec = FigureSpec::new(id, &a.out_dir);
    if let Some(n) = a.nmax {
        spec.params.n_max = n;
    }
    if let Some(x0) = a.x0 {
        spec.params.x0 = x0;
    }
    if let Some(b) = a.bins {
        spec.params.bins = b;
    }
    if let Some(s) = a.step {
        spec.params.step = s;
    }
    let out = emit_figure(&spec)?;
    Ok(serde_json::to_value(&out)?)
}

fn run(cli: Cli) -> Result<Value> {
    let cfg = Config::load(cli.config.as_deref().map(Path::new))?;
    cfg.apply_threads();
    match cli.command {
        Command::Eval(a) => eval(&cfg, a),
        Command::Table(a) => table(&cfg, a),
        Command::GnExpansion(a) => gn_expansion(&cfg, a),
        Command::Kloosterman(a) => kloosterman(a),
        Command::Coeff(a) => coeff(a),
        Command::Phi(a) => {
            let z = Complex64::new(a.re, a.im);
            Ok(json!({ "z": complex_json(z), "value": complex_json(phi(z)?) }))
        }
        Command::Psi(a) => Ok(json!({ "x": a.x, "value": psi(a.x)? })),
        Command::PsiMoment(a) => Ok(serde_json::to_value(psi_second_moment(&PsiEvaluator::default(), a.t)?)?),
        Command::Zeros(a) => zeros(a),
        Command::Moment(a) => Ok(serde_json::to_value(moment_fn(a.n, a.a, a.b)?)?),
        Command::L2sum(a) => {
            let s = l2_sum(a.xi, a.cut)?;
            Ok(json!({
                "xi": s.xi, "x_cut": s.x_cut, "value": s.value, "err": s.err,
                "per_xi_log": s.per_xi_log, "per_xi_log2": s.per_xi_log2,
            }))
        }
        Command::Histogram(a) => histogram(a),
        Command::VerifyInterp(a) => verify_interp(&cfg, a),
        Command::Figure(a) => figure(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(v) => {
            // a closed pipe on stdout is not a failure of the computation
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&v).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
