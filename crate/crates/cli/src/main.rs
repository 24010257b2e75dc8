//! `bialg`: classification and numerical verification of weakly bialgebraic
//! curves of the real Weierstrass map.

mod config;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use bialg_core::acceptance;
use bialg_core::classify::{
    classify, complex_bialgebraic_line, ClassificationReport, ClassifyError, GeodesicReport, IsogenyReport, LineSpec,
    MinPolyReport, RealLine,
};
use bialg_core::exactnum::Triple;
use bialg_core::lattice::{
    geodesic_through, is_cm, isog_conj_set, rational_abs_witness, CmStatus, GeodesicData, Lattice, LatticeError,
    TauSpec,
};
use bialg_core::mp::{Complex, Real};
use bialg_core::verify::{
    fit_vanishing_poly_with_height, sample_line, torus_coverage, verify_complex_samples, verify_line_with, Verdict,
    VerifyError, VerifyReport,
};
use bialg_core::weierstrass::{Weierstrass, WeierstrassError};
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use config::{Format, Overrides, RunConfig, SCHEMA_VERSION};

/// Weakly bialgebraic curves of the real Weierstrass map.
///
/// τ specifications and lines are JSON strings; prefix with `@` to read
/// from a file, or pass `-` to read from standard input.
#[derive(Parser, Debug)]
#[command(name = "bialg", version)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Classify the weakly bialgebraic sets of the lattice ⟨1, τ⟩
    Classify { tau: String },
    /// The group Isog(Λ, Λ̄) with CM and rational-|γ| data
    Isog { tau: String },
    /// The special geodesic through τ, or the geodesic of a triple `b,c,d`
    Geodesic {
        tau: Option<String>,
        #[arg(long, conflicts_with = "tau", allow_hyphen_values = true)]
        triple: Option<String>,
    },
    /// Evaluate ℘ and ℘′ at points `re,im`
    Eval {
        tau: String,
        #[arg(long = "z", allow_hyphen_values = true)]
        z: Vec<String>,
        /// CSV file with columns z_re, z_im
        #[arg(long)]
        z_file: Option<PathBuf>,
    },
    /// g2, g3, discriminant, j and the half-period values
    Invariants { tau: String },
    /// Sample the image of a line under 𝒫_Λ and look for an algebraic relation
    VerifyLine {
        tau: String,
        line: String,
        #[arg(long)]
        emit_points: Option<PathBuf>,
    },
    /// Sample W + σ under ℘_Λ × ℘_Λ̄ and look for an algebraic relation
    VerifyComplex {
        tau: String,
        /// `{"w1":[[re,im],[re,im]],"w2":[[re,im],[re,im]],"sigma":[[re,im],[re,im]]}`
        line: String,
        #[arg(long)]
        emit_points: Option<PathBuf>,
    },
    /// Torus coverage of a line and a fit of its image
    Density {
        tau: String,
        line: String,
        /// Grid size of the coverage count
        #[arg(long, default_value_t = 16)]
        k: usize,
        #[arg(long, default_value_t = 8192)]
        torus_samples: usize,
        #[arg(long)]
        emit_points: Option<PathBuf>,
    },
    /// Fit a vanishing polynomial to points read from a CSV file (first two columns)
    Fit { input: PathBuf },
    /// Run the acceptance suite and print one PASS/FAIL line per criterion
    Demo {
        /// Run only these criteria
        #[arg(long = "criterion")]
        criteria: Vec<u8>,
    },
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: &'static str,
    command: &'a str,
    status: &'static str,
    #[serde(flatten)]
    body: T,
    run: &'a RunConfig,
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    command: &'static str,
}

impl Ctx<'_> {
    fn emit<T: Serialize>(&self, body: T) -> Result<()> {
        let env = Envelope { schema_version: SCHEMA_VERSION, command: self.command, status: "OK", body, run: self.cfg };
        print_out(&serde_json::to_string_pretty(&env)?)
    }

    fn require_json(&self) -> Result<()> {
        if self.cfg.format == Some(Format::Csv) {
            bail!("{} has no CSV output", self.command);
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let env_precision = std::env::var("BIALG_PRECISION").ok();
    let cfg = match RunConfig::load(&cli.overrides, env_precision.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let command = command_name(&cli.cmd);
    log::info!("{command}: seed {}, precision {} digits", cfg.seed, cfg.precision);
    match run(&cli.cmd, &Ctx { cfg: &cfg, command }) {
        Ok(code) => code,
        Err(e) => match undecidable_reason(&e) {
            Some(reason) => {
                #[derive(Serialize)]
                struct Undecidable {
                    reason: String,
                }
                let env = Envelope {
                    schema_version: SCHEMA_VERSION,
                    command,
                    status: "UNDECIDABLE_FROM_FLOATS",
                    body: Undecidable { reason },
                    run: &cfg,
                };
                if let Err(e) = print_out(&serde_json::to_string_pretty(&env).expect("serializable")) {
                    eprintln!("error: {e:#}");
                }
                ExitCode::from(2)
            }
            None => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}

/// Writes a line to stdout; a closed pipe is not an error.
fn print_out(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn print_csv(w: csv::Writer<Vec<u8>>) -> Result<()> {
    let bytes = w.into_inner().map_err(|e| anyhow!("{e}"))?;
    print_out(String::from_utf8(bytes)?.trim_end_matches('\n'))
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Classify { .. } => "classify",
        Cmd::Isog { .. } => "isog",
        Cmd::Geodesic { .. } => "geodesic",
        Cmd::Eval { .. } => "eval",
        Cmd::Invariants { .. } => "invariants",
        Cmd::VerifyLine { .. } => "verify-line",
        Cmd::VerifyComplex { .. } => "verify-complex",
        Cmd::Density { .. } => "density",
        Cmd::Fit { .. } => "fit",
        Cmd::Demo { .. } => "demo",
    }
}

fn undecidable_reason(e: &anyhow::Error) -> Option<String> {
    fn lattice(e: &LatticeError) -> Option<String> {
        match e {
            LatticeError::UndecidableFromFloats(r) => Some(r.clone()),
            _ => None,
        }
    }
    fn class(e: &ClassifyError) -> Option<String> {
        match e {
            ClassifyError::Lattice(l) => lattice(l),
            _ => None,
        }
    }
    fn weier(e: &WeierstrassError) -> Option<String> {
        match e {
            WeierstrassError::Lattice(l) => lattice(l),
            _ => None,
        }
    }
    e.chain().find_map(|c| {
        if let Some(l) = c.downcast_ref::<LatticeError>() {
            lattice(l)
        } else if let Some(k) = c.downcast_ref::<ClassifyError>() {
            class(k)
        } else if let Some(w) = c.downcast_ref::<WeierstrassError>() {
            weier(w)
        } else if let Some(v) = c.downcast_ref::<VerifyError>() {
            match v {
                VerifyError::Classify(k) => class(k),
                VerifyError::Weierstrass(w) => weier(w),
                _ => None,
            }
        } else {
            None
        }
    })
}

/// A JSON argument, or `@path`, or `-` for standard input.
fn read_arg(s: &str) -> Result<String> {
    if s == "-" {
        let mut t = String::new();
        std::io::stdin().read_to_string(&mut t)?;
        Ok(t)
    } else if let Some(p) = s.strip_prefix('@') {
        std::fs::read_to_string(p).with_context(|| format!("reading {p}"))
    } else {
        Ok(s.to_string())
    }
}

fn parse_tau(s: &str) -> Result<TauSpec> {
    Ok(TauSpec::from_json(&read_arg(s)?)?)
}

fn parse_line(s: &str) -> Result<LineSpec> {
    Ok(LineSpec::from_json(&read_arg(s)?)?)
}

fn run(cmd: &Cmd, ctx: &Ctx) -> Result<ExitCode> {
    match cmd {
        Cmd::Classify { tau } => cmd_classify(&parse_tau(tau)?, ctx)?,
        Cmd::Isog { tau } => cmd_isog(&parse_tau(tau)?, ctx)?,
        Cmd::Geodesic { tau, triple } => cmd_geodesic(tau.as_deref(), triple.as_deref(), ctx)?,
        Cmd::Eval { tau, z, z_file } => cmd_eval(&parse_tau(tau)?, z, z_file.as_deref(), ctx)?,
        Cmd::Invariants { tau } => cmd_invariants(&parse_tau(tau)?, ctx)?,
        Cmd::VerifyLine { tau, line, emit_points } => {
            cmd_verify_line(&parse_tau(tau)?, &parse_line(line)?, emit_points.as_deref(), ctx)?
        }
        Cmd::VerifyComplex { tau, line, emit_points } => {
            cmd_verify_complex(&parse_tau(tau)?, &read_arg(line)?, emit_points.as_deref(), ctx)?
        }
        Cmd::Density { tau, line, k, torus_samples, emit_points } => {
            let spec = parse_tau(tau)?;
            cmd_density(&spec, &parse_line(line)?, *k, *torus_samples, emit_points.as_deref(), ctx)?
        }
        Cmd::Fit { input } => cmd_fit(input, ctx)?,
        Cmd::Demo { criteria } => return cmd_demo(criteria, ctx),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(spec: &TauSpec, ctx: &Ctx) -> Result<()> {
    let report: ClassificationReport = classify(spec)?.report(ctx.cfg.height_bound);
    if ctx.cfg.format == Some(Format::Csv) {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["label", "dir_re", "dir_im", "rho_re", "rho_im", "r_re", "r_im", "m", "n"])?;
        for l in &report.lines {
            let opt = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
            w.write_record([
                l.label.clone(),
                l.direction[0].to_string(),
                l.direction[1].to_string(),
                l.rho[0].to_string(),
                l.rho[1].to_string(),
                l.r[0].to_string(),
                l.r[1].to_string(),
                opt(l.m),
                opt(l.n),
            ])?;
        }
        return print_csv(w);
    }
    ctx.emit(report)
}

#[derive(Serialize)]
struct WitnessOut {
    triple: [i64; 3],
    gamma: [f64; 2],
    abs: String,
}

#[derive(Serialize)]
struct IsogOut {
    tau: [f64; 2],
    isogeny: IsogenyReport,
    membership_residuals: Vec<f64>,
    is_cm: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    minpoly: Option<MinPolyReport>,
    rational_abs_witness: Option<WitnessOut>,
}

fn cmd_isog(spec: &TauSpec, ctx: &Ctx) -> Result<()> {
    ctx.require_json()?;
    let iso = isog_conj_set(spec)?;
    let bits = ctx.cfg.precision_cfg().bits();
    let membership_residuals = (0..iso.gammas.len()).map(|i| iso.membership_residual(i, bits)).collect();
    let minpoly = match is_cm(spec)? {
        CmStatus::Cm(m) => Some(MinPolyReport { a: m.a, b: m.b, c: m.c, disc: m.disc(), text: m.to_string() }),
        CmStatus::NotCm => None,
    };
    let witness = rational_abs_witness(&iso).map(|w| WitnessOut {
        triple: [w.triple.b, w.triple.c, w.triple.d],
        gamma: [w.gamma.re, w.gamma.im],
        abs: w.abs.to_string(),
    });
    let isogeny = classify(spec)?.report(ctx.cfg.height_bound).isogeny;
    ctx.emit(IsogOut {
        tau: [spec.tau().re, spec.tau().im],
        isogeny,
        membership_residuals,
        is_cm: minpoly.is_some(),
        minpoly,
        rational_abs_witness: witness,
    })
}

#[derive(Serialize)]
struct GeodesicOut {
    geodesic: Option<GeodesicReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    center: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius_sq: Option<String>,
}

fn cmd_geodesic(tau: Option<&str>, triple: Option<&str>, ctx: &Ctx) -> Result<()> {
    ctx.require_json()?;
    let data: Option<GeodesicData> = match (tau, triple) {
        (_, Some(t)) => {
            let v: Vec<i64> = t
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| anyhow!("triple must be three integers b,c,d"))?;
            let [b, c, d] = v[..] else { bail!("triple must be three integers b,c,d") };
            Some(GeodesicData::from_triple(&Triple::new(b, c, d))?)
        }
        (Some(t), None) => geodesic_through(&parse_tau(t)?)?,
        (None, None) => bail!("give a τ specification or --triple"),
    };
    let cr = data.as_ref().and_then(|g| g.center_radius_sq());
    ctx.emit(GeodesicOut {
        geodesic: data.as_ref().map(GeodesicReport::from),
        center: cr.as_ref().map(|c| c.0.to_string()),
        radius_sq: cr.as_ref().map(|c| c.1.to_string()),
    })
}

fn parse_point(s: &str, bits: usize) -> Result<Complex> {
    let mut parts = s.split(',');
    let re = parts.next().unwrap_or("");
    let im = parts.next().unwrap_or("0");
    if parts.next().is_some() {
        bail!("point {s:?} must be re,im");
    }
    let p = |t: &str| Real::parse_decimal(t, bits).ok_or_else(|| anyhow!("invalid number {t:?} in point {s:?}"));
    Ok(Complex::new(p(re)?, p(im)?))
}

fn read_points_csv(path: &Path) -> Result<Vec<[String; 2]>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() < 2 {
            bail!("{}: each row needs two columns", path.display());
        }
        out.push([rec[0].trim().to_string(), rec[1].trim().to_string()]);
    }
    Ok(out)
}

#[derive(Serialize)]
struct EvalRow {
    z: [String; 2],
    wp: Option<[String; 2]>,
    wpp: Option<[String; 2]>,
}

#[derive(Serialize)]
struct EvalOut {
    tau: [f64; 2],
    values: Vec<EvalRow>,
}

fn cmd_eval(spec: &TauSpec, zs: &[String], z_file: Option<&Path>, ctx: &Ctx) -> Result<()> {
    let pc = ctx.cfg.precision_cfg();
    let w = Weierstrass::from_spec(spec, &pc)?;
    let bits = pc.bits();
    let mut points: Vec<Complex> = zs.iter().map(|s| parse_point(s, bits)).collect::<Result<_>>()?;
    if let Some(path) = z_file {
        for [re, im] in read_points_csv(path)? {
            points.push(parse_point(&format!("{re},{im}"), bits)?);
        }
    }
    if points.is_empty() {
        bail!("no evaluation points; use --z re,im or --z-file");
    }
    let digits = ctx.cfg.precision as usize;
    let s = |c: &Complex| [c.re.to_sci_string(digits), c.im.to_sci_string(digits)];
    let rows: Vec<EvalRow> = points
        .iter()
        .map(|z| {
            let v = w.wp_both(z);
            EvalRow { z: s(z), wp: v.as_ref().map(|v| s(&v.0)), wpp: v.as_ref().map(|v| s(&v.1)) }
        })
        .collect();
    if ctx.cfg.format == Some(Format::Json) {
        return ctx.emit(EvalOut { tau: [spec.tau().re, spec.tau().im], values: rows });
    }
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["z_re", "z_im", "wp_re", "wp_im", "wpp_re", "wpp_im"])?;
    let inf = || ["inf".to_string(), "inf".to_string()];
    for r in rows {
        let [a, b] = r.z;
        let [c, d] = r.wp.unwrap_or_else(inf);
        let [e, f] = r.wpp.unwrap_or_else(inf);
        out.write_record([a, b, c, d, e, f])?;
    }
    print_csv(out)
}

#[derive(Serialize)]
struct InvariantsOut {
    tau: [f64; 2],
    g2: [String; 2],
    g3: [String; 2],
    disc: [String; 2],
    j: [String; 2],
    roots: [[String; 2]; 3],
    root_sum_residual: f64,
}

fn cmd_invariants(spec: &TauSpec, ctx: &Ctx) -> Result<()> {
    ctx.require_json()?;
    let inv = Weierstrass::from_spec(spec, &ctx.cfg.precision_cfg())?.invariants();
    let digits = ctx.cfg.precision as usize;
    let s = |c: &Complex| [c.re.to_sci_string(digits), c.im.to_sci_string(digits)];
    let sum = &(&inv.roots[0] + &inv.roots[1]) + &inv.roots[2];
    ctx.emit(InvariantsOut {
        tau: [spec.tau().re, spec.tau().im],
        g2: s(&inv.g2),
        g3: s(&inv.g3),
        disc: s(&inv.disc),
        j: s(&inv.j),
        roots: [s(&inv.roots[0]), s(&inv.roots[1]), s(&inv.roots[2])],
        root_sum_residual: sum.abs().to_f64(),
    })
}

#[derive(Serialize)]
struct LineOut {
    direction: [f64; 2],
    offset: [f64; 2],
    rho: [f64; 2],
    r: [f64; 2],
}

impl From<&RealLine> for LineOut {
    fn from(l: &RealLine) -> Self {
        let d = l.direction();
        LineOut { direction: [d.re, d.im], offset: [l.offset.re, l.offset.im], rho: [l.rho.re, l.rho.im], r: [l.r.re, l.r.im] }
    }
}

#[derive(Serialize)]
struct LineReportOut {
    #[serde(flatten)]
    report: VerifyReport,
    line: LineOut,
}

fn write_real_samples(path: &Path, s: &bialg_core::verify::SampleSet) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(["t", "x", "y", "X", "Y"])?;
    for ((t, p), im) in s.params.iter().zip(&s.points).zip(&s.images) {
        w.write_record([t.to_string(), p[0].to_string(), p[1].to_string(), im[0].to_string(), im[1].to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_verify_line(spec: &TauSpec, ls: &LineSpec, emit: Option<&Path>, ctx: &Ctx) -> Result<()> {
    ctx.require_json()?;
    let line = ls.resolve(spec)?;
    let class = classify(spec)?;
    let vc = ctx.cfg.verify_cfg();
    let w = Weierstrass::from_spec(spec, &vc.precision)?;
    let (v, samples) = verify_line_with(&w, &class, &line, &vc)?;
    if let Some(path) = emit {
        write_real_samples(path, &samples)?;
    }
    ctx.emit(LineReportOut { report: VerifyReport::from_line(&v), line: LineOut::from(&line) })
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexLineJson {
    w1: [[f64; 2]; 2],
    w2: [[f64; 2]; 2],
    #[serde(default)]
    sigma: [[f64; 2]; 2],
}

#[derive(Serialize)]
struct ComplexOut {
    #[serde(flatten)]
    report: VerifyReport,
    slope: Option<[f64; 2]>,
    t: [f64; 2],
}

fn cmd_verify_complex(spec: &TauSpec, text: &str, emit: Option<&Path>, ctx: &Ctx) -> Result<()> {
    ctx.require_json()?;
    let j: ComplexLineJson = serde_json::from_str(text).context("complex line JSON")?;
    let c = |p: [f64; 2]| Complex64::new(p[0], p[1]);
    let pair = |q: [[f64; 2]; 2]| (c(q[0]), c(q[1]));
    let lat = Lattice::from_tau(spec);
    let cl = complex_bialgebraic_line(pair(j.w1), pair(j.w2), pair(j.sigma), &lat)?;
    let vc = ctx.cfg.verify_cfg();
    let w = Weierstrass::from_spec(spec, &vc.precision)?;
    let wc = w.conj()?;
    let (fit, pts) = verify_complex_samples(cl.w2, cl.sigma, &w, &wc, &vc, vc.max_deg)?;
    if let Some(path) = emit {
        let mut out = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        out.write_record(["u_re", "u_im", "v_re", "v_im"])?;
        for [u, v] in &pts {
            out.write_record([u.re.to_string(), u.im.to_string(), v.re.to_string(), v.im.to_string()])?;
        }
        out.flush()?;
    }
    let mut report = VerifyReport::from_fit(&fit, ("u", "v"), vc.seed);
    report.predicted = Some(true);
    report.agree = (fit.verdict != Verdict::Inconclusive).then_some(fit.verdict == Verdict::Vanishing);
    report.dropped = vc.n - pts.len();
    ctx.emit(ComplexOut { report, slope: cl.slope, t: [cl.t.re, cl.t.im] })
}

#[derive(Serialize)]
struct DensityOut {
    #[serde(flatten)]
    report: VerifyReport,
    coverage_half: f64,
    k: usize,
    torus_samples: usize,
    line: LineOut,
}

fn cmd_density(
    spec: &TauSpec,
    ls: &LineSpec,
    k: usize,
    torus_samples: usize,
    emit: Option<&Path>,
    ctx: &Ctx,
) -> Result<()> {
    ctx.require_json()?;
    if k == 0 || torus_samples == 0 {
        bail!("k and torus_samples must be positive");
    }
    let line = ls.resolve(spec)?;
    let vc = ctx.cfg.verify_cfg();
    let w = Weierstrass::from_spec(spec, &vc.precision)?;
    let (cov, half) = torus_coverage(&w.lattice(), &line, k, torus_samples, vc.seed);
    let bound = 12.0 / k as f64;
    let closed = cov < bound && half < bound && cov - half < 2.0 / k as f64;
    // a prediction needs an exact classification; floats alone still get a coverage count
    let (mut report, samples) = match classify(spec) {
        Ok(class) => {
            let (v, s) = verify_line_with(&w, &class, &line, &vc)?;
            (VerifyReport::from_line(&v), s)
        }
        Err(e) => {
            log::warn!("no prediction: {e}");
            let s = sample_line(&line, &w, Some(spec), &vc)?;
            let fit = fit_vanishing_poly_with_height(&s.images, vc.max_deg, &vc.tol, vc.snap_height)?;
            let mut r = VerifyReport::from_fit(&fit, ("X", "Y"), vc.seed);
            r.dropped = s.dropped;
            (r, s)
        }
    };
    if let Some(path) = emit {
        write_real_samples(path, &samples)?;
    }
    report.coverage = Some(cov);
    report.closed_orbit = Some(closed);
    ctx.emit(DensityOut { report, coverage_half: half, k, torus_samples, line: LineOut::from(&line) })
}

fn cmd_fit(input: &Path, ctx: &Ctx) -> Result<()> {
    ctx.require_json()?;
    let pts: Vec<[f64; 2]> = read_points_csv(input)?
        .into_iter()
        .map(|[a, b]| -> Result<[f64; 2]> {
            let p = |t: &str| t.parse::<f64>().map_err(|_| anyhow!("invalid number {t:?}"));
            Ok([p(&a)?, p(&b)?])
        })
        .collect::<Result<_>>()?;
    let fit = fit_vanishing_poly_with_height(&pts, ctx.cfg.max_deg, &ctx.cfg.tol, ctx.cfg.snap_height)?;
    ctx.emit(VerifyReport::from_fit(&fit, ("X", "Y"), ctx.cfg.seed))
}

fn cmd_demo(criteria: &[u8], ctx: &Ctx) -> Result<ExitCode> {
    let ids: Vec<u8> = if criteria.is_empty() { (1..=acceptance::CRITERIA).collect() } else { criteria.to_vec() };
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > acceptance::CRITERIA) {
        bail!("no criterion {bad}; criteria are 1..={}", acceptance::CRITERIA);
    }
    let mut outcomes = Vec::new();
    for id in ids {
        let o = acceptance::run(id);
        if ctx.cfg.format != Some(Format::Json) {
            print_out(&o.line())?;
            for c in o.failed_checks() {
                print_out(&format!("        {}: {}", c.name, c.detail))?;
            }
        }
        outcomes.push(o);
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    if ctx.cfg.format == Some(Format::Json) {
        #[derive(Serialize)]
        struct DemoOut<'a> {
            criteria: &'a [acceptance::CriterionOutcome],
            failed: usize,
        }
        ctx.emit(DemoOut { criteria: &outcomes, failed })?;
    } else {
        print_out(&format!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len()))?;
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
