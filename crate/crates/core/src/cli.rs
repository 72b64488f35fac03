//! Command-line front end.
//!
//! Every flag can also be given in a `key = value` config file passed with
//! `--config`; keys are the long flag names (`t-min` or `t_min`), `#` starts
//! a comment, and flags on the command line override the file.
//!
//! Exit codes: `0` success, `1` a verification failed, `2` bad configuration.

use std::f64::consts::{E, PI};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::growth::{log_grid, right_inverse, rate_function, GrowthFunction, RateParams};
use crate::regions::{Region, SampleSpec};
use crate::semigroup::{compare_rates, fmt_float, mult_semigroup, multiplication_report, shift_witness_lower, DecayReport, FrequencyRule, ShiftParams};
use crate::specialfn::{build_h, build_strip_function, default_kernel_grid, verify_strip_decay, KernelH};
use crate::verify::{agreement_ladder, halfplane_corpus, halfplane_min_margin, run_suite};
use crate::witness::{optimize_r, sharpness_curve, Variant};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "decaylab", version, about = "Decay-rate laboratory: rate calculus, strip functions, witnesses and semigroup models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Print M_log (or M_K) at t and the inverses M_log⁻¹(c·t), M⁻¹(t)
    Rate,
    /// Right inverse M⁻¹(t)
    Invert,
    /// Build the strip function and kernel h, with checks
    Specialfn,
    /// Optimised witness certificate at one t
    Witness,
    /// Witness certificates along a log-spaced t grid
    Sweep,
    /// Truncation and half-plane checks
    Truncate,
    /// Semigroup decay reports with comparison curves
    Semigroup,
    /// Run the full check battery
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Multiplication,
    Shift,
    Both,
}

/// Raw flags; every field is optional so the config file can fill gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// key = value file with defaults for any flag
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Growth function, e.g. poly:beta=2, exp:alpha=1, const:m0=1, table:<path>
    #[arg(long, global = true)]
    pub m: Option<String>,
    /// Second growth function for the two-function rate M_K
    #[arg(long, global = true)]
    pub k: Option<String>,
    #[arg(long, global = true)]
    pub t: Option<f64>,
    #[arg(long = "t-min", global = true)]
    pub t_min: Option<f64>,
    #[arg(long = "t-max", global = true)]
    pub t_max: Option<f64>,
    #[arg(long = "n-t", global = true)]
    pub n_t: Option<usize>,
    /// Override for the admissibility ε (default π·M(0)/6)
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// plain or derivative
    #[arg(long, global = true)]
    pub variant: Option<String>,
    /// Rate constant in M_log⁻¹(c·t)
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Constant C in the choice R = C·M_log⁻¹(t)
    #[arg(long = "c-choice", global = true)]
    pub c_choice: Option<f64>,
    #[arg(long = "r-max", global = true)]
    pub r_max: Option<f64>,
    /// Quadrature / inversion tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output directory for artifact files
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Semigroup model
    #[arg(long, global = true, value_enum)]
    pub model: Option<Model>,
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub m_spec: Option<String>,
    pub k_spec: Option<String>,
    pub t: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub n_t: usize,
    pub epsilon: Option<f64>,
    pub variant: Variant,
    pub c: f64,
    pub c_choice: Option<f64>,
    pub r_max: f64,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub model: Model,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Configuration(format!("{key}: cannot parse {v:?}")))
}

/// Merges a config file (if any) under the command-line flags.
fn merge_file(mut f: Flags) -> Result<Flags> {
    let Some(path) = f.config.clone() else { return Ok(f) };
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Configuration(format!("{}: {e}", path.display())))?;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Configuration(format!("{}:{}: expected key = value", path.display(), n + 1)))?;
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        macro_rules! set {
            ($field:ident) => {
                if f.$field.is_none() {
                    f.$field = Some(parse_num(&key, value)?);
                }
            };
        }
        match key.as_str() {
            "m" => set!(m),
            "k" => set!(k),
            "t" => set!(t),
            "t-min" => set!(t_min),
            "t-max" => set!(t_max),
            "n-t" => set!(n_t),
            "epsilon" => set!(epsilon),
            "variant" => set!(variant),
            "c" => set!(c),
            "c-choice" => set!(c_choice),
            "r-max" => set!(r_max),
            "tol" => set!(tol),
            "out" => set!(out),
            "seed" => set!(seed),
            "model" => {
                if f.model.is_none() {
                    f.model = Some(Model::from_str(value, true).map_err(|_| Error::Configuration(format!("model: unknown value {value:?}")))?);
                }
            }
            other => return Err(Error::Configuration(format!("{}:{}: unknown key {other:?}", path.display(), n + 1))),
        }
    }
    Ok(f)
}

impl RunConfig {
    pub fn resolve(command: Command, flags: Flags) -> Result<Self> {
        let f = merge_file(flags)?;
        let variant = match &f.variant {
            Some(v) => v.parse::<Variant>().map_err(|e| Error::Configuration(e.to_string()))?,
            None => Variant::Plain,
        };
        let cfg = RunConfig {
            command,
            m_spec: f.m,
            k_spec: f.k,
            t: f.t.unwrap_or(1000.0),
            t_min: f.t_min.unwrap_or(1e2),
            t_max: f.t_max.unwrap_or(1e6),
            n_t: f.n_t.unwrap_or(25),
            epsilon: f.epsilon,
            variant,
            c: f.c.unwrap_or(1.0),
            c_choice: f.c_choice,
            r_max: f.r_max.unwrap_or(crate::witness::DEFAULT_R_MAX),
            tol: f.tol.unwrap_or(1e-10),
            out: f.out,
            seed: f.seed.unwrap_or(0),
            model: f.model.unwrap_or(Model::Multiplication),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Configuration(msg));
        if !(self.t > 0.0 && self.t.is_finite()) {
            return bad(format!("t must be positive, got {}", self.t));
        }
        if !(self.t_min >= 1.0 && self.t_max > self.t_min && self.t_max.is_finite()) {
            return bad(format!("need 1 <= t-min < t-max, got [{}, {}]", self.t_min, self.t_max));
        }
        if !(2..=10_000).contains(&self.n_t) {
            return bad(format!("n-t must be in [2, 10000], got {}", self.n_t));
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0 && e.is_finite()) {
                return bad(format!("epsilon must be positive, got {e}"));
            }
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return bad(format!("c must be positive, got {}", self.c));
        }
        if let Some(cc) = self.c_choice {
            if !(cc > 0.0 && cc.is_finite()) {
                return bad(format!("c-choice must be positive, got {cc}"));
            }
        }
        if !(self.r_max >= 1.0 && self.r_max.is_finite()) {
            return bad(format!("r-max must be >= 1, got {}", self.r_max));
        }
        if !(self.tol > 0.0 && self.tol <= 1e-2) {
            return bad(format!("tol must be in (0, 1e-2], got {}", self.tol));
        }
        Ok(())
    }

    fn growth(&self) -> Result<GrowthFunction> {
        let spec = self.m_spec.as_deref().ok_or_else(|| Error::Configuration("--m is required for this command".into()))?;
        GrowthFunction::parse(spec).map_err(|e| Error::Configuration(format!("--m {spec:?}: {e}")))
    }

    fn growth_or_unit(&self) -> Result<GrowthFunction> {
        match self.m_spec {
            Some(_) => self.growth(),
            None => GrowthFunction::constant(1.0),
        }
    }

    fn second(&self) -> Result<Option<GrowthFunction>> {
        self.k_spec
            .as_deref()
            .map(|s| GrowthFunction::parse(s).map_err(|e| Error::Configuration(format!("--k {s:?}: {e}"))))
            .transpose()
    }

    fn epsilon_for(&self, m: &GrowthFunction) -> f64 {
        self.epsilon.unwrap_or(PI * m.m0() / 6.0)
    }

    fn t_grid(&self) -> Vec<f64> {
        log_grid(self.t_min, self.t_max, self.n_t)
    }
}

/// What a command produced: text for stdout and whether its checks held.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub verified: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, verified: true }
    }
}

/// Exit code for an error: user-facing input problems are configuration
/// errors, everything else counts as a failed verification.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Configuration(_) | Error::Parse(_) | Error::Domain(_) | Error::BelowRange { .. } | Error::Io { .. } | Error::Unsupported(_) => EXIT_CONFIG,
        _ => EXIT_VERIFY,
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn kernel_for(m: &GrowthFunction, tol: f64) -> Result<KernelH> {
    let m0 = m.m0();
    build_h(&build_strip_function(m0)?, tol, default_kernel_grid(m0))
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Rate => rate(cfg),
        Command::Invert => invert(cfg),
        Command::Specialfn => specialfn(cfg),
        Command::Witness => witness(cfg),
        Command::Sweep => sweep(cfg),
        Command::Truncate => truncate(cfg),
        Command::Semigroup => semigroup(cfg),
        Command::Verify => verify(cfg),
    }
}

fn rate(cfg: &RunConfig) -> Result<Outcome> {
    #[derive(Serialize)]
    struct RateOut {
        m_spec: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        k_spec: Option<String>,
        t: f64,
        c: f64,
        rate_at_t: f64,
        rate_inverse: f64,
        m_inverse: f64,
    }
    let m = cfg.growth()?;
    let k = cfg.second()?;
    let rate = rate_function(&m, k.as_ref());
    let out = RateOut {
        m_spec: m.label().to_string(),
        k_spec: k.as_ref().map(|k| k.label().to_string()),
        t: cfg.t,
        c: cfg.c,
        rate_at_t: rate.at(cfg.t),
        rate_inverse: right_inverse(&rate, cfg.c * cfg.t, cfg.tol)?,
        m_inverse: right_inverse(&m, cfg.t, cfg.tol)?,
    };
    let text = to_json(&out);
    if let Some(dir) = &cfg.out {
        write_artifact(dir, "rate.json", &text)?;
    }
    Ok(Outcome::ok(text))
}

fn invert(cfg: &RunConfig) -> Result<Outcome> {
    #[derive(Serialize)]
    struct InvertOut {
        m_spec: String,
        t: f64,
        tol: f64,
        s: f64,
        m_at_s: f64,
    }
    let m = cfg.growth()?;
    let s = right_inverse(&m, cfg.t, cfg.tol)?;
    let text = to_json(&InvertOut { m_spec: m.label().to_string(), t: cfg.t, tol: cfg.tol, s, m_at_s: m.at(s) });
    Ok(Outcome::ok(text))
}

fn specialfn(cfg: &RunConfig) -> Result<Outcome> {
    #[derive(Serialize)]
    struct SpecialOut {
        m0: f64,
        epsilon: f64,
        x_center: f64,
        strip_half_width: f64,
        strip_decay_sup: f64,
        t0: f64,
        scale: f64,
        reflected: bool,
        l1_norm: f64,
        linf_norm: f64,
        deriv_l1_norm: f64,
        round_trip_error: f64,
        max_imag_ratio: f64,
        passed: bool,
    }
    let m = cfg.growth_or_unit()?;
    let m0 = m.m0();
    let strip = build_strip_function(m0)?;
    let grid = Region::strip(m.clone()).sample_with(&SampleSpec::with_row_spacing(12.0 / m0, 0.05 / m0, 16))?;
    let sup = verify_strip_decay(&strip, strip.epsilon, &grid)?;
    let h = build_h(&strip, cfg.tol, default_kernel_grid(m0))?;
    let imag = h.samples.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max) / h.linf_norm;
    let passed = sup <= E && h.round_trip_error <= 1e-6 && imag <= 1e-8;
    let out = SpecialOut {
        m0,
        epsilon: strip.epsilon,
        x_center: strip.x_center,
        strip_half_width: strip.strip_half_width,
        strip_decay_sup: sup,
        t0: h.t0,
        scale: h.scale,
        reflected: h.reflected,
        l1_norm: h.l1_norm,
        linf_norm: h.linf_norm,
        deriv_l1_norm: h.deriv_l1_norm,
        round_trip_error: h.round_trip_error,
        max_imag_ratio: imag,
        passed,
    };
    let text = to_json(&out);
    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        h.save(&dir.join("kernel_h.tsv"))?;
        write_artifact(dir, "specialfn.json", &text)?;
    }
    Ok(Outcome { stdout: text, verified: passed })
}

fn witness(cfg: &RunConfig) -> Result<Outcome> {
    let m = cfg.growth()?;
    let k = cfg.second()?;
    if cfg.t < 1.0 {
        return Err(Error::Configuration(format!("witness needs t >= 1, got {}", cfg.t)));
    }
    let h = kernel_for(&m, cfg.tol)?;
    let cert = optimize_r(&m, k.as_ref(), cfg.t, cfg.epsilon_for(&m), cfg.variant, cfg.r_max)?.with_t0(h.t0);
    let mut text = cert.to_json();
    text.push('\n');
    if let Some(dir) = &cfg.out {
        write_artifact(dir, "certificate.json", &text)?;
    }
    Ok(Outcome { stdout: text, verified: cert.admissible })
}

fn sweep(cfg: &RunConfig) -> Result<Outcome> {
    #[derive(Serialize)]
    struct SweepOut {
        m_spec: String,
        variant: Variant,
        c: f64,
        points: usize,
        admissible: usize,
        ratio_min: f64,
        ratio_max: f64,
        band: f64,
        all_explicit_admissible: bool,
    }
    let m = cfg.growth()?;
    let k = cfg.second()?;
    let curve = sharpness_curve(&m, k.as_ref(), &cfg.t_grid(), cfg.epsilon_for(&m), cfg.variant, cfg.r_max)?;
    let rate = rate_function(&m, k.as_ref());
    let mut csv = String::from("t,R_star,N,rate_inverse,ratio,admissible,explicit_admissible\n");
    for (cert, ratio) in curve.certificates.iter().zip(&curve.ratios) {
        let inv = right_inverse(&rate, curve.c * cert.t, crate::growth::DEFAULT_INVERSE_TOL).unwrap_or(f64::NAN);
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            fmt_float(cert.t),
            fmt_float(cert.r_star),
            fmt_float(cert.n),
            fmt_float(inv),
            fmt_float(ratio.unwrap_or(f64::NAN)),
            cert.admissible,
            cert.explicit_admissible.unwrap_or(false)
        );
    }
    let summary = SweepOut {
        m_spec: m.label().to_string(),
        variant: cfg.variant,
        c: curve.c,
        points: curve.certificates.len(),
        admissible: curve.certificates.iter().filter(|c| c.admissible).count(),
        ratio_min: curve.ratio_min,
        ratio_max: curve.ratio_max,
        band: curve.band(),
        all_explicit_admissible: curve.all_explicit_admissible,
    };
    let text = to_json(&summary);
    if let Some(dir) = &cfg.out {
        write_artifact(dir, "sweep.csv", &csv)?;
        write_artifact(dir, "sweep.json", &text)?;
        let certs: Vec<_> = curve.certificates.iter().collect();
        write_artifact(dir, "certificates.json", &to_json(&certs))?;
    }
    Ok(Outcome { stdout: text, verified: summary.admissible > 0 })
}

fn truncate(cfg: &RunConfig) -> Result<Outcome> {
    #[derive(Serialize)]
    struct TruncateOut {
        seed: u64,
        corpus: Vec<&'static str>,
        plain_min_margin: f64,
        plain_worst: &'static str,
        derivative_min_margin: f64,
        derivative_worst: &'static str,
        agreement_residuals: Vec<f64>,
        passed: bool,
    }
    let m = cfg.growth_or_unit()?;
    let h = kernel_for(&m, cfg.tol)?;
    let corpus = halfplane_corpus(&h)?;
    let (plain, plain_worst) = halfplane_min_margin(&corpus, cfg.seed, 100, Variant::Plain)?;
    let (der, der_worst) = halfplane_min_margin(&corpus, cfg.seed, 100, Variant::Derivative)?;
    let ladder = agreement_ladder(&h, 2.0, 3.0, &[48, 24, 12, 1])?;
    let passed = plain >= -1e-8 && der >= -1e-8 && ladder[3] < 1e-5 && ladder.windows(2).take(2).all(|p| p[1] <= 0.5 * p[0]);
    let out = TruncateOut {
        seed: cfg.seed,
        corpus: corpus.iter().map(|(n, _)| *n).collect(),
        plain_min_margin: plain,
        plain_worst,
        derivative_min_margin: der,
        derivative_worst: der_worst,
        agreement_residuals: ladder,
        passed,
    };
    let text = to_json(&out);
    if let Some(dir) = &cfg.out {
        write_artifact(dir, "truncate.json", &text)?;
    }
    Ok(Outcome { stdout: text, verified: passed })
}

fn semigroup(cfg: &RunConfig) -> Result<Outcome> {
    let m = cfg.growth()?;
    let grid = cfg.t_grid();
    let mut reports = Vec::new();
    if matches!(cfg.model, Model::Multiplication | Model::Both) {
        let spec = mult_semigroup(&m, &FrequencyRule::default())?;
        let params = RateParams::new(cfg.c, cfg.c_choice.unwrap_or(1.0))?;
        reports.push(("semigroup_mult", compare_rates(&multiplication_report(&spec, &grid)?, &m, &params)?));
    }
    if matches!(cfg.model, Model::Shift | Model::Both) {
        let beta = m
            .envelope()
            .lower
            .map(|l| l.beta)
            .ok_or_else(|| Error::Configuration(format!("{} has no polynomial lower envelope (β)", m.label())))?;
        let h = kernel_for(&m, cfg.tol)?;
        let params = ShiftParams { r_max: cfg.r_max, ..ShiftParams::default() };
        let report = shift_witness_lower(&m, &h, &grid, &params)?;
        let rate = RateParams::new(1.0 + 1.0 / beta, cfg.c_choice.unwrap_or(1.0))?;
        reports.push(("semigroup_shift", compare_rates(&report, &m, &rate)?));
    }
    let mut text = String::new();
    for (stem, report) in &reports {
        match &cfg.out {
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
                emit_plot_script(report, &dir.join(stem))?;
                write_artifact(dir, &format!("{stem}.json"), &(report.summary_json() + "\n"))?;
                text.push_str(&report.summary_json());
                text.push('\n');
            }
            None => {
                let mut buf = Vec::new();
                report.write_csv(&mut buf)?;
                text.push_str(&String::from_utf8(buf).expect("csv is utf-8"));
            }
        }
    }
    let verified = reports.iter().all(|(_, r)| r.fit.as_ref().is_some_and(|f| !f.non_decaying));
    Ok(Outcome { stdout: text, verified })
}

fn verify(cfg: &RunConfig) -> Result<Outcome> {
    let report = run_suite(cfg.seed)?;
    let text = report.render();
    if let Some(dir) = &cfg.out {
        write_artifact(dir, "verify_report.txt", &text)?;
    }
    Ok(Outcome { stdout: text, verified: report.all_passed() })
}

/// Writes `<stem>.csv` and a gnuplot script `<stem>.gp` plotting every
/// curve on log-log axes.
pub fn emit_plot_script(report: &DecayReport, stem: &Path) -> Result<(PathBuf, PathBuf)> {
    if report.t.is_empty() {
        return Err(Error::EmptyGrid("cannot plot an empty report".into()));
    }
    let csv_path = stem.with_extension("csv");
    let gp_path = stem.with_extension("gp");
    let mut buf = Vec::new();
    report.write_csv(&mut buf)?;
    std::fs::write(&csv_path, buf).map_err(|e| Error::io(&csv_path, e))?;
    let csv_name = csv_path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let png_name = stem.with_extension("png").file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let measured = match report.kind {
        crate::semigroup::ReportKind::Multiplication => "measured",
        crate::semigroup::ReportKind::ShiftLowerBound => "lower bound",
    };
    let script = format!(
        "set datafile separator ','\n\
         set logscale xy\n\
         set xlabel 't'\n\
         set ylabel 'decay'\n\
         set title '{}'\n\
         set terminal pngcairo size 900,600\n\
         set output '{png_name}'\n\
         plot '{csv_name}' using 1:2 skip 1 with linespoints title '{measured}', \\\n     \
         '' using 1:3 skip 1 with lines title 'd1/M_log^{{-1}}(ct)', \\\n     \
         '' using 1:4 skip 1 with lines title 'd2/M^{{-1}}(t)'\n",
        report.m_spec
    );
    std::fs::write(&gp_path, script).map_err(|e| Error::io(&gp_path, e))?;
    Ok((csv_path, gp_path))
}

/// Parses `args` (including the program name), runs, prints, and returns
/// the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_CONFIG,
            };
        }
    };
    let outcome = RunConfig::resolve(cli.command, cli.flags).and_then(|cfg| run(&cfg));
    match outcome {
        Ok(o) => {
            print!("{}", o.stdout);
            if o.verified {
                EXIT_OK
            } else {
                eprintln!("verification failed");
                EXIT_VERIFY
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
