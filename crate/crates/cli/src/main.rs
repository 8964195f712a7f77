//! `kickband` command-line tool.

mod inputs;
mod verify;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kickband::floquet::{self, OperatorFamily, OperatorKind};
use kickband::monodromy::{self, ReducedOperator, TrackOptions};
use kickband::newton::{self, HenselOptions};
use kickband::rational::{self, parse_alpha_list};
use kickband::spectra::{self, SpectrumBands, SpectrumOptions};
use kickband::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Core(kickband::Error),
}

impl From<kickband::Error> for CliError {
    fn from(e: kickband::Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "kickband", version, about = "Band spectra and eigenvalue monodromy of rational-flux Floquet operators")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for projection vectors and random test inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// The q x q Gauss circulant.
    GaussMatrix {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
    /// One matrix of an operator family.
    Operator {
        #[arg(value_enum)]
        action: OperatorAction,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
    },
    /// Characteristic polynomial coefficients on a t grid.
    Charpoly {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Sample t in [0, 1/q) and label rows by s = q t.
        #[arg(long)]
        reduced: bool,
    },
    /// Spectrum of one operator, swept over t.
    Spectrum {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        sampling: SpectrumArgs,
    },
    /// Union of spectra over t and theta.
    MotherSpectrum {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        sampling: SpectrumArgs,
        #[arg(long, default_value_t = 64)]
        theta_grid: usize,
    },
    /// Band count and measure.
    Bands {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        sampling: SpectrumArgs,
        /// Also take the union over theta with this many points.
        #[arg(long)]
        theta_grid: Option<usize>,
    },
    /// Hausdorff distance between the spectra of two kinds.
    Hausdorff {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "ordkr", value_parser = parse_kind)]
        a: OperatorKind,
        #[arg(long, default_value = "kh", value_parser = parse_kind)]
        b: OperatorKind,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Evaluate the kicked Harper family at its partner flux 2p/q.
        #[arg(long)]
        partner: bool,
        #[command(flatten)]
        sampling: SpectrumArgs,
    },
    /// Band spectra along a list of fluxes.
    Butterfly {
        /// `farey:N`, `convergents:a/b,...` or a comma separated list.
        #[arg(long)]
        alphas: String,
        #[arg(long, default_value = "ordkr", value_parser = parse_kind)]
        kind: OperatorKind,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = spectra::DEFAULT_Q_MAX)]
        q_max: u64,
        #[command(flatten)]
        sampling: SpectrumArgs,
    },
    /// Root permutation induced by one period of the reduced polynomial.
    Monodromy {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 1e-6)]
        gap_floor: f64,
    },
    /// |D(P(s, .))| on a grid with root-cluster sizes at its minima.
    DiscriminantProfile {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, default_value_t = 512)]
        grid: usize,
    },
    /// Newton polygon of a series polynomial.
    NewtonPolygon {
        #[command(flatten)]
        input: SeriesArgs,
    },
    /// Newton-Puiseux branches.
    Puiseux {
        #[command(flatten)]
        input: SeriesArgs,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Point-primary factorisation by contour integrals.
    HenselSplit {
        #[command(flatten)]
        input: SeriesArgs,
        #[arg(long, default_value_t = 0.1)]
        delta_max: f64,
        #[arg(long, default_value_t = 256)]
        n_contour: usize,
        #[arg(long, default_value_t = 16)]
        n_tsamples: usize,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, value_enum, default_value = "core")]
        suite: verify::Suite,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorAction {
    Sample,
}

#[derive(Args, Clone)]
struct OperatorArgs {
    #[arg(long, default_value = "ordkr", value_parser = parse_kind)]
    kind: OperatorKind,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
}

impl OperatorArgs {
    fn family(&self) -> CliResult<OperatorFamily> {
        for (name, v) in [("kappa", self.kappa), ("lambda", self.lambda), ("theta", self.theta)] {
            finite(name, v)?;
        }
        Ok(OperatorFamily::new(self.kind, self.p, self.q, self.kappa, self.lambda, self.theta)?)
    }
}

#[derive(Args, Clone)]
struct SpectrumArgs {
    /// Points in the t grid.
    #[arg(long, default_value_t = 512)]
    grid: usize,
    /// Gap tolerance for merging samples into bands.
    #[arg(long)]
    gap_tol: Option<f64>,
    /// Include the raw eigenvalue samples (JSON only).
    #[arg(long)]
    raw: bool,
}

impl SpectrumArgs {
    fn options(&self, theta_grid: Option<usize>) -> CliResult<SpectrumOptions> {
        if self.grid == 0 {
            return Err(CliError::Validation("--grid must be positive".into()));
        }
        if let Some(g) = self.gap_tol {
            if !(g > 0.0) || !g.is_finite() {
                return Err(CliError::Validation(format!("--gap-tol must be positive, got {g}")));
            }
        }
        if theta_grid == Some(0) {
            return Err(CliError::Validation("--theta-grid must be positive".into()));
        }
        Ok(SpectrumOptions {
            t_grid: self.grid,
            theta_grid,
            gap_tol: self.gap_tol,
            t_period: 1.0,
        })
    }
}

#[derive(Args, Clone)]
struct SeriesArgs {
    /// JSON file holding a series polynomial.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in example (cusp, sine-square, exp-square, cosine-quarter, double-line, hensel-demo).
    #[arg(long)]
    example: Option<String>,
}

fn parse_kind(s: &str) -> std::result::Result<OperatorKind, String> {
    s.parse::<OperatorKind>().map_err(|e| e.to_string())
}

fn finite(name: &str, v: f64) -> CliResult<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("--{name} must be finite")))
    }
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

enum Output {
    Json(Value),
    Text(String),
}

fn csv_lines(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

fn bands_csv(rows: &[(u64, u64, OperatorKind, &SpectrumBands)]) -> String {
    csv_lines(
        "p,q,kind,lo,hi",
        rows.iter().flat_map(|(p, q, kind, b)| {
            b.intervals
                .iter()
                .map(move |&(lo, hi)| vec![p.to_string(), q.to_string(), kind.name().to_string(), num(lo), num(hi)])
        }),
    )
}

fn bands_json(p: u64, q: u64, kind: OperatorKind, b: &SpectrumBands, raw: bool) -> Value {
    let mut v = json!({
        "p": p,
        "q": q,
        "kind": kind,
        "space": b.space,
        "count": b.count(),
        "measure": spectra::band_measure(b),
        "bands": b.intervals,
    });
    if raw {
        v["samples"] = json!(b.sample_points);
    }
    v
}

fn spectrum_output(fam: &OperatorFamily, b: &SpectrumBands, raw: bool, format: Format) -> Output {
    match format {
        Format::Json => Output::Json(bands_json(fam.p, fam.q, fam.kind, b, raw)),
        Format::Csv => Output::Text(bands_csv(&[(fam.p, fam.q, fam.kind, b)])),
    }
}

fn matrix_output(m: &kickband::linalg::CMatrix, meta: Value, format: Format) -> Output {
    match format {
        Format::Json => {
            let rows: Vec<Vec<Value>> = (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| complex_json(m[(r, c)])).collect())
                .collect();
            let mut v = meta;
            v["matrix"] = json!(rows);
            Output::Json(v)
        }
        Format::Csv => Output::Text(csv_lines(
            "row,col,re,im",
            (0..m.nrows()).flat_map(|r| {
                (0..m.ncols()).map(move |c| vec![r.to_string(), c.to_string(), num(m[(r, c)].re), num(m[(r, c)].im)])
            }),
        )),
    }
}

fn projection(seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<Complex64> = (0..3)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    monodromy::unit(v)
}

fn run(cli: Cli) -> CliResult<(Output, bool)> {
    let fmt = |default: Format| cli.format.unwrap_or(default);
    let ok = |o: Output| Ok((o, true));
    match cli.command {
        Command::GaussMatrix { p, q } => {
            rational::check_coprime(p, q)?;
            if q == 0 {
                return Err(CliError::Validation("q must be positive".into()));
            }
            let g = floquet::gauss_circulant(p, q);
            ok(matrix_output(&g, json!({"p": p, "q": q}), fmt(Format::Json)))
        }
        Command::Operator { action: OperatorAction::Sample, op, t } => {
            finite("t", t)?;
            let fam = op.family()?;
            let m = fam.matrix(t);
            let meta = json!({"kind": fam.kind, "p": fam.p, "q": fam.q, "kappa": fam.kappa,
                "lambda": fam.lambda, "theta": fam.theta, "t": t});
            ok(matrix_output(&m, meta, fmt(Format::Json)))
        }
        Command::Charpoly { op, grid, reduced } => {
            if grid == 0 {
                return Err(CliError::Validation("--grid must be positive".into()));
            }
            let fam = op.family()?;
            let period = if reduced { 1.0 / fam.q as f64 } else { 1.0 };
            let mut cps = floquet::char_poly_samples(&fam, &floquet::uniform_grid(grid, period))?;
            if reduced {
                cps = floquet::reduced_poly_samples(&cps)?;
            }
            let label = if reduced { "s" } else { "t" };
            match fmt(Format::Csv) {
                Format::Csv => {
                    let mut header = label.to_string();
                    for k in 0..=fam.dim() {
                        let _ = write!(header, ",re_c{k},im_c{k}");
                    }
                    let rows = cps.ts.iter().zip(&cps.coeff_rows).map(|(t, row)| {
                        let mut r = vec![num(*t)];
                        for z in row {
                            r.push(num(z.re));
                            r.push(num(z.im));
                        }
                        r
                    });
                    ok(Output::Text(csv_lines(&header, rows)))
                }
                Format::Json => ok(Output::Json(json!({
                    "kind": fam.kind, "p": fam.p, "q": fam.q, label: cps.ts,
                    "coefficients": cps.coeff_rows.iter()
                        .map(|r| r.iter().map(|z| complex_json(*z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                }))),
            }
        }
        Command::Spectrum { op, sampling } => {
            let fam = op.family()?;
            let b = spectra::spectrum_union(&fam, &sampling.options(None)?)?;
            ok(spectrum_output(&fam, &b, sampling.raw, fmt(Format::Csv)))
        }
        Command::MotherSpectrum { op, sampling, theta_grid } => {
            let fam = op.family()?;
            let b = spectra::spectrum_union(&fam, &sampling.options(Some(theta_grid))?)?;
            ok(spectrum_output(&fam, &b, sampling.raw, fmt(Format::Csv)))
        }
        Command::Bands { op, sampling, theta_grid } => {
            let fam = op.family()?;
            let b = spectra::spectrum_union(&fam, &sampling.options(theta_grid)?)?;
            let measure = spectra::band_measure(&b);
            match fmt(Format::Csv) {
                Format::Csv => ok(Output::Text(csv_lines(
                    "p,q,kind,bands,measure",
                    [vec![fam.p.to_string(), fam.q.to_string(), fam.kind.name().to_string(), b.count().to_string(), num(measure)]],
                ))),
                Format::Json => ok(Output::Json(bands_json(fam.p, fam.q, fam.kind, &b, sampling.raw))),
            }
        }
        Command::Hausdorff { p, q, a, b, kappa, lambda, partner, sampling } => {
            finite("kappa", kappa)?;
            finite("lambda", lambda)?;
            let opts = sampling.options(None)?;
            let flux = |kind: OperatorKind| -> CliResult<(u64, u64)> {
                if partner && kind == OperatorKind::Kh {
                    floquet::kh_partner(p, q)
                        .ok_or_else(|| CliError::Validation(format!("2·{p}/{q} is an integer; no partner flux")))
                } else {
                    Ok((p, q))
                }
            };
            let (pa, qa) = flux(a)?;
            let (pb, qb) = flux(b)?;
            let fa = OperatorFamily::new(a, pa, qa, kappa, lambda, 0.0)?;
            let fb = OperatorFamily::new(b, pb, qb, kappa, lambda, 0.0)?;
            let sa = spectra::spectrum_union(&fa, &opts)?;
            let sb = spectra::spectrum_union(&fb, &opts)?;
            let d = spectra::hausdorff_distance(&sa, &sb)?;
            match fmt(Format::Json) {
                Format::Json => ok(Output::Json(json!({
                    "a": {"kind": a, "p": pa, "q": qa, "bands": sa.count()},
                    "b": {"kind": b, "p": pb, "q": qb, "bands": sb.count()},
                    "distance": d,
                }))),
                Format::Csv => ok(Output::Text(csv_lines(
                    "kind_a,p_a,q_a,kind_b,p_b,q_b,distance",
                    [vec![a.name().into(), pa.to_string(), qa.to_string(), b.name().into(), pb.to_string(), qb.to_string(), num(d)]],
                ))),
            }
        }
        Command::Butterfly { alphas, kind, kappa, lambda, q_max, sampling } => {
            finite("kappa", kappa)?;
            finite("lambda", lambda)?;
            let list = parse_alpha_list(&alphas)?;
            let rows = spectra::butterfly_sweep(&list, kind, kappa, lambda, &sampling.options(None)?, q_max)?;
            match fmt(Format::Csv) {
                Format::Csv => {
                    let view: Vec<_> = rows.iter().map(|r| (r.p, r.q, kind, &r.bands)).collect();
                    ok(Output::Text(bands_csv(&view)))
                }
                Format::Json => ok(Output::Json(json!(rows
                    .iter()
                    .map(|r| bands_json(r.p, r.q, kind, &r.bands, sampling.raw))
                    .collect::<Vec<_>>()))),
            }
        }
        Command::Monodromy { op, grid, gap_floor } => {
            if !(gap_floor > 0.0) {
                return Err(CliError::Validation("--gap-floor must be positive".into()));
            }
            let fam = ReducedOperator { family: op.family()? };
            let opts = TrackOptions {
                initial_grid: grid,
                gap_floor,
                projection: projection(cli.seed),
                ..TrackOptions::default()
            };
            let tp = monodromy::track_roots(&fam, &opts)?;
            let res = monodromy::monodromy_permutation(&tp)?;
            let fourier = monodromy::fourier_closure_residual(&tp, &res.permutation);
            let perm: Vec<usize> = res.permutation.iter().map(|i| i + 1).collect();
            let near: Vec<Value> = res
                .near_degeneracies
                .iter()
                .map(|(s, c)| json!({"s": s, "cluster": c}))
                .collect();
            ok(Output::Json(json!({
                "permutation": perm,
                "is_pure": res.is_pure,
                "min_discriminant": res.min_discriminant,
                "near_degeneracies": near,
                "refinements": res.refinements,
                "jet_order_used": res.jet_order_used,
                "min_gap": tp.min_gap,
                "fourier_residual": fourier,
            })))
        }
        Command::DiscriminantProfile { op, grid } => {
            let fam = ReducedOperator { family: op.family()? };
            let prof = monodromy::discriminant_profile(&fam, grid)?;
            match fmt(Format::Json) {
                Format::Json => ok(Output::Json(json!(prof))),
                Format::Csv => ok(Output::Text(csv_lines(
                    "s,abs_discriminant,cluster",
                    prof.minima.iter().map(|(s, d, c)| vec![num(*s), num(*d), c.to_string()]),
                ))),
            }
        }
        Command::NewtonPolygon { input } => {
            let inp = inputs::load(input.input.as_deref(), input.example.as_deref())?;
            ok(Output::Json(json!(newton::newton_polygon(&inp.series)?)))
        }
        Command::Puiseux { input, depth } => {
            if depth == 0 {
                return Err(CliError::Validation("--depth must be at least 1".into()));
            }
            let inp = inputs::load(input.input.as_deref(), input.example.as_deref())?;
            let branches = newton::puiseux_branches(&inp.series, depth)?;
            ok(Output::Json(json!({ "branches": branches })))
        }
        Command::HenselSplit { input, delta_max, n_contour, n_tsamples } => {
            let inp = inputs::load(input.input.as_deref(), input.example.as_deref())?;
            let opts = HenselOptions { delta_max, n_contour, n_tsamples };
            let f = newton::hensel_split(|t| inp.eval(t), &opts)?;
            ok(Output::Json(json!(f)))
        }
        Command::Verify { suite } => {
            let report = verify::run(suite, cli.seed);
            let passed = report.all_passed();
            ok(Output::Text(report.render()))
                .map(|(o, _)| (o, passed))
        }
    }
}

fn emit(out: Output, path: Option<&PathBuf>) -> io::Result<()> {
    let text = match out {
        Output::Json(v) => {
            let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialise");
            s.push('\n');
            s
        }
        Output::Text(s) => s,
    };
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn diagnostic(code: &str, message: &str) {
    eprintln!("{}", json!({"error": code, "message": message}));
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            diagnostic("INVALID_ARGUMENT", "--threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            diagnostic("THREAD_POOL", &e.to_string());
            return ExitCode::from(2);
        }
    }
    let path = cli.output.clone();
    match run(cli) {
        Ok((out, passed)) => {
            if let Err(e) = emit(out, path.as_ref()) {
                diagnostic("IO_ERROR", &e.to_string());
                return ExitCode::from(2);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Validation(msg)) => {
            diagnostic("INVALID_ARGUMENT", &msg);
            ExitCode::from(2)
        }
        Err(CliError::Core(e)) => {
            diagnostic(e.code(), &e.to_string());
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
