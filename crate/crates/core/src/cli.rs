//! Commands behind the `cavity-field` binary.
//!
//! Every command renders a CSV document (UTF-8, LF, `#` comment headers,
//! floats as `{:.16e}`) plus a human-readable report. Rendering is pure; the
//! binary decides where the bytes go and [`write_output`] writes them
//! atomically.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::{fmt, fs, io};

use num_complex::Complex64;
use thiserror::Error;

use crate::error::Error;
use crate::model::{
    coherent_amplitude, evolve_closed_form, manifold_probability, JointState, SystemParams,
};
use crate::observables::{
    field_moments, mandel_q, mandel_q_paper, squeezing_paper, squeezing_parameters,
};
use crate::oracle::{
    default_step, integrate_schrodinger, integrate_with, manifold_density_matrix,
    paper_density_matrix, reduced_density_matrix, validate_density, DensityMatrix,
    EquationsOfMotion,
};
use crate::wigner::{
    default_k_max, min_wigner, wigner_grid, wigner_parity_oracle, wigner_series, GridWindow,
};

pub const TOOL: &str = concat!("cavity-field ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum CliError {
    #[error("bad arguments: {0}")]
    Args(String),
    #[error(transparent)]
    Compute(Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    /// 2 for bad arguments, 1 for computational failures, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Args(_) => 2,
            CliError::Compute(_) => 1,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. }
            | Error::DegenerateParameters
            | Error::TruncationTooSmall { .. }
            | Error::IndexOutOfRange { .. }
            | Error::InvalidGrid(_)
            | Error::DisplacementTruncation { .. } => CliError::Args(e.to_string()),
            other => CliError::Compute(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Pnd,
    Wigner,
    Qscan,
    Squeeze,
    Verify,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Pnd => "pnd",
            Command::Wigner => "wigner",
            Command::Qscan => "qscan",
            Command::Squeeze => "squeeze",
            Command::Verify => "verify",
        })
    }
}

impl FromStr for Command {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "pnd" => Command::Pnd,
            "wigner" => Command::Wigner,
            "qscan" => Command::Qscan,
            "squeeze" => Command::Squeeze,
            "verify" => Command::Verify,
            _ => return Err(format!("unknown command `{s}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Paper,
    Exact,
    Both,
}

impl Mode {
    fn paper(self) -> bool {
        matches!(self, Mode::Paper | Mode::Both)
    }

    fn exact(self) -> bool {
        matches!(self, Mode::Exact | Mode::Both)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Paper => "paper",
            Mode::Exact => "exact",
            Mode::Both => "both",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(Mode::Paper),
            "exact" => Ok(Mode::Exact),
            "both" => Ok(Mode::Both),
            _ => Err(format!("mode must be paper, exact or both, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Alpha,
    T,
    N,
}

/// `VAR:START:STOP:STEPS`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub var: SweepVar,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let raw = (0..self.steps).map(|i| self.start + span * i as f64 / (self.steps - 1) as f64);
        match self.var {
            SweepVar::N => {
                let mut ns: Vec<f64> = raw.map(f64::round).collect();
                ns.dedup();
                ns
            }
            _ => raw.collect(),
        }
    }

    fn column(&self) -> &'static str {
        match self.var {
            SweepVar::Alpha => "alpha",
            SweepVar::T => "gt",
            SweepVar::N => "n",
        }
    }
}

impl FromStr for Sweep {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [var, start, stop, steps] = parts[..] else {
            return Err(format!("sweep must be VAR:START:STOP:STEPS, got `{s}`"));
        };
        let var = match var {
            "alpha" => SweepVar::Alpha,
            "t" => SweepVar::T,
            "n" => SweepVar::N,
            _ => return Err(format!("sweep variable must be alpha, t or n, got `{var}`")),
        };
        let num = |x: &str| {
            x.parse::<f64>()
                .map_err(|e| format!("sweep bound `{x}`: {e}"))
        };
        let (start, stop) = (num(start)?, num(stop)?);
        let steps: usize = steps
            .parse()
            .map_err(|e| format!("sweep steps `{steps}`: {e}"))?;
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(format!(
                "sweep needs finite START < STOP, got {start}..{stop}"
            ));
        }
        if steps < 2 {
            return Err(format!("sweep needs at least 2 steps, got {steps}"));
        }
        if var != SweepVar::T && start < 0.0 {
            return Err("sweep over alpha or n must start at a non-negative value".into());
        }
        Ok(Sweep {
            var,
            start,
            stop,
            steps,
        })
    }
}

/// `R` or `R,I`.
pub fn parse_alpha(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|e| format!("alpha component `{x}`: {e}"))
    };
    match parts[..] {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("alpha must be R or R,I, got `{s}`")),
    }
}

/// `RMIN:RMAX:IMIN:IMAX:RES`.
pub fn parse_window(s: &str) -> Result<GridWindow, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [re_min, re_max, im_min, im_max, res] = parts[..] else {
        return Err(format!("window must be RMIN:RMAX:IMIN:IMAX:RES, got `{s}`"));
    };
    let num = |x: &str| {
        x.parse::<f64>()
            .map_err(|e| format!("window bound `{x}`: {e}"))
    };
    let window = GridWindow {
        re_min: num(re_min)?,
        re_max: num(re_max)?,
        im_min: num(im_min)?,
        im_max: num(im_max)?,
        resolution: res
            .parse()
            .map_err(|e| format!("window resolution `{res}`: {e}"))?,
    };
    window.validate().map_err(|e| e.to_string())?;
    Ok(window)
}

/// Comma-separated photon numbers.
pub fn parse_n_list(s: &str) -> Result<Vec<usize>, String> {
    let ns: Vec<usize> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|e| format!("photon number `{x}`: {e}"))
        })
        .collect::<Result<_, _>>()?;
    if ns.is_empty() {
        return Err("empty photon-number list".into());
    }
    Ok(ns)
}

/// Command plus every flag; `None` means "use the default" and is echoed as such.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub alpha: Option<Complex64>,
    pub g: Option<f64>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub gt: Option<f64>,
    pub n_list: Option<Vec<usize>>,
    pub n_max: Option<usize>,
    pub sweep: Option<Sweep>,
    pub grid: Option<GridWindow>,
    pub mode: Option<Mode>,
    pub output_path: Option<PathBuf>,
    pub force: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            alpha: None,
            g: None,
            delta: None,
            epsilon: None,
            gt: None,
            n_list: None,
            n_max: None,
            sweep: None,
            grid: None,
            mode: None,
            output_path: None,
            force: false,
        }
    }
}

/// A [`RunConfig`] with defaults filled in.
#[derive(Debug, Clone)]
struct Resolved {
    command: Command,
    alpha: Complex64,
    g: f64,
    delta: f64,
    epsilon: f64,
    gt: f64,
    n_list: Vec<usize>,
    n_max: Option<usize>,
    sweep: Option<Sweep>,
    grid: GridWindow,
    mode: Mode,
    filled: Vec<String>,
}

impl Resolved {
    fn from_config(c: &RunConfig) -> CliResult<Self> {
        let mut filled = Vec::new();
        macro_rules! pick {
            ($field:expr, $default:expr, $name:literal, $show:expr) => {
                match $field.clone() {
                    Some(v) => v,
                    None => {
                        let v = $default;
                        filled.push(format!("{}={}", $name, $show(&v)));
                        v
                    }
                }
            };
        }
        let default_alpha = match c.command {
            Command::Pnd | Command::Qscan | Command::Squeeze => 0.5,
            Command::Wigner => 0.02,
            Command::Verify => 1.0,
        };
        let default_ns = match c.command {
            Command::Wigner => vec![4, 7, 10],
            _ => vec![1, 2, 3],
        };
        let alpha = pick!(
            c.alpha,
            Complex64::new(default_alpha, 0.0),
            "alpha",
            |a: &Complex64| fmt_alpha(*a)
        );
        let g = pick!(c.g, 1.0, "g", |x: &f64| x.to_string());
        let delta = pick!(c.delta, 0.0, "delta", |x: &f64| x.to_string());
        let epsilon = pick!(c.epsilon, 0.0, "epsilon", |x: &f64| x.to_string());
        let gt = pick!(c.gt, 1.0, "gt", |x: &f64| x.to_string());
        let n_list = pick!(c.n_list, default_ns, "n", |v: &Vec<usize>| join(v));
        let mode = pick!(c.mode, Mode::Both, "mode", |m: &Mode| m.to_string());
        let sweep = match (c.command, c.sweep) {
            (Command::Qscan | Command::Squeeze, None) => {
                let s = Sweep {
                    var: SweepVar::Alpha,
                    start: 0.01,
                    stop: 3.0,
                    steps: 300,
                };
                filled.push("sweep=alpha:0.01:3:300".into());
                Some(s)
            }
            (_, s) => s,
        };
        let grid = match (c.command, c.grid) {
            (_, Some(w)) => w,
            (Command::Wigner, None) => {
                filled.push("window=-3.5:3.5:-3.5:3.5:141".into());
                GridWindow::default()
            }
            (_, None) => GridWindow::default(),
        };
        if !gt.is_finite() || gt < 0.0 {
            return Err(CliError::Args(format!(
                "gt must be finite and non-negative, got {gt}"
            )));
        }
        Ok(Self {
            command: c.command,
            alpha,
            g,
            delta,
            epsilon,
            gt,
            n_list,
            n_max: c.n_max,
            sweep,
            grid,
            mode,
            filled,
        })
    }

    /// Parameters at `(alpha, gt)`, with automatic truncation raised to cover `min_n_max`.
    fn params(&self, alpha: Complex64, gt: f64, min_n_max: usize) -> CliResult<SystemParams> {
        let t = if self.g > 0.0 { gt / self.g } else { gt };
        let p = SystemParams::new(self.g, self.delta, alpha, t)?.with_epsilon(self.epsilon)?;
        let p = match self.n_max {
            Some(n_max) => {
                if n_max < min_n_max {
                    return Err(CliError::Args(format!(
                        "--nmax {n_max} is below the requested photon number {min_n_max}"
                    )));
                }
                p.with_n_max(n_max)?
            }
            None if p.n_max < min_n_max => p.with_n_max(min_n_max)?,
            None => p,
        };
        Ok(p)
    }

    fn base_params(&self) -> CliResult<SystemParams> {
        let max_n = self.n_list.iter().copied().max().unwrap_or(0);
        self.params(self.alpha, self.gt, max_n)
    }

    fn header(&self, out: &mut String, params: Option<&SystemParams>) {
        let _ = writeln!(out, "# {TOOL}");
        let _ = writeln!(out, "# command: {}", self.command);
        let _ = writeln!(
            out,
            "# params: g={} delta={} epsilon={} alpha={} gt={}",
            num(self.g),
            num(self.delta),
            num(self.epsilon),
            fmt_alpha(self.alpha),
            num(self.gt)
        );
        match params {
            Some(p) => {
                let _ = writeln!(out, "# t={} n_max={}", num(p.t), p.n_max);
            }
            None => {
                let n_max = self.n_max.map_or("auto".to_string(), |n| n.to_string());
                let _ = writeln!(out, "# n_max={n_max}");
            }
        }
        let _ = writeln!(out, "# mode: {}", self.mode);
        if let Some(s) = &self.sweep {
            let _ = writeln!(
                out,
                "# sweep: {}:{}:{}:{}",
                s.column(),
                num(s.start),
                num(s.stop),
                s.steps
            );
        }
        let _ = writeln!(
            out,
            "# defaults: {}",
            if self.filled.is_empty() {
                "none".into()
            } else {
                self.filled.join(" ")
            }
        );
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_alpha(a: Complex64) -> String {
    format!("{}{:+}i", a.re, a.im)
}

fn join(ns: &[usize]) -> String {
    ns.iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn cell(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// `verify` found a violated invariant.
    InvariantFailure,
}

#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub csv: String,
    /// Human-readable summary (defaults used, grid summaries, verify results).
    pub report: String,
    pub status: Status,
}

impl CommandOutput {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Success => 0,
            Status::InvariantFailure => 1,
        }
    }
}

pub fn run(config: &RunConfig) -> CliResult<CommandOutput> {
    let r = Resolved::from_config(config)?;
    let mut out = match r.command {
        Command::Pnd => cmd_pnd(&r)?,
        Command::Wigner => cmd_wigner(&r)?,
        Command::Qscan => cmd_qscan(&r)?,
        Command::Squeeze => cmd_squeeze(&r)?,
        Command::Verify => cmd_verify(&r)?,
    };
    if !r.filled.is_empty() {
        out.report
            .insert_str(0, &format!("defaults: {}\n", r.filled.join(" ")));
    }
    Ok(out)
}

fn cmd_pnd(r: &Resolved) -> CliResult<CommandOutput> {
    let p = r.base_params()?;
    let state = evolve_closed_form(&p)?;
    let rho = reduced_density_matrix(&state);
    let mut csv = String::new();
    r.header(&mut csv, Some(&p));
    let mut cols = vec!["n"];
    if r.mode.paper() {
        cols.push("p_paper");
    }
    if r.mode.exact() {
        cols.push("p_exact");
    }
    let _ = writeln!(csv, "{}", cols.join(","));
    for n in 0..rho.dim() {
        let mut row = vec![n.to_string()];
        if r.mode.paper() {
            row.push(num(coherent_amplitude(n, p.alpha).norm_sqr()));
        }
        if r.mode.exact() {
            row.push(num(rho.elements[[n, n]].re));
        }
        let _ = writeln!(csv, "{}", row.join(","));
    }
    Ok(CommandOutput {
        csv,
        report: String::new(),
        status: Status::Success,
    })
}

fn cmd_wigner(r: &Resolved) -> CliResult<CommandOutput> {
    let p = r.base_params()?;
    let state = evolve_closed_form(&p)?;
    let mut sources: Vec<(String, DensityMatrix)> = Vec::new();
    if r.mode.paper() {
        for &n in &r.n_list {
            sources.push((format!("paper:n={n}"), manifold_density_matrix(&state, n)?));
        }
    }
    if r.mode.exact() {
        sources.push(("exact".into(), reduced_density_matrix(&state)));
    }
    let mut csv = String::new();
    r.header(&mut csv, Some(&p));
    let w = &r.grid;
    let _ = writeln!(
        csv,
        "# window: {}:{}:{}:{}:{}",
        num(w.re_min),
        num(w.re_max),
        num(w.im_min),
        num(w.im_max),
        w.resolution
    );
    let _ = writeln!(csv, "source,re_beta,im_beta,W");
    let mut summary = String::new();
    for (name, rho) in &sources {
        let grid = wigner_grid(rho, &r.grid)?;
        for (beta, value) in grid.iter() {
            let _ = writeln!(
                csv,
                "{name},{},{},{}",
                num(beta.re),
                num(beta.im),
                num(value)
            );
        }
        let min = min_wigner(&grid);
        let _ = writeln!(
            summary,
            "# summary source={name} provenance={} w_min={} beta_at_min={},{} riemann_sum={}",
            grid.rho_provenance,
            num(min.w_min),
            num(min.beta_at_min.re),
            num(min.beta_at_min.im),
            num(grid.riemann_sum())
        );
    }
    csv.push_str(&summary);
    Ok(CommandOutput {
        csv,
        report: summary,
        status: Status::Success,
    })
}

/// Rows of a scan: the swept value and the parameters for that row.
fn scan_rows(r: &Resolved) -> CliResult<Vec<(f64, SystemParams, Vec<usize>)>> {
    let sweep = r.sweep.expect("scan commands always have a sweep");
    let max_n = r.n_list.iter().copied().max().unwrap_or(0);
    sweep
        .values()
        .into_iter()
        .map(|v| {
            let (alpha, gt, ns) = match sweep.var {
                SweepVar::Alpha => (Complex64::new(v, 0.0), r.gt, r.n_list.clone()),
                SweepVar::T => (r.alpha, v, r.n_list.clone()),
                SweepVar::N => (r.alpha, r.gt, vec![v as usize]),
            };
            let need = ns.iter().copied().max().unwrap_or(0).max(max_n.min(ns[0]));
            Ok((v, r.params(alpha, gt, need)?, ns))
        })
        .collect()
}

fn paper_label(sweep: &Sweep, n: usize, base: &str) -> String {
    match sweep.var {
        SweepVar::N => base.to_string(),
        _ => format!("{base}(n={n})"),
    }
}

fn cmd_qscan(r: &Resolved) -> CliResult<CommandOutput> {
    let sweep = r.sweep.expect("qscan sweep");
    let rows = scan_rows(r)?;
    let mut csv = String::new();
    r.header(&mut csv, None);
    let mut cols = vec![sweep.column().to_string()];
    if r.mode.paper() {
        let ns = if sweep.var == SweepVar::N {
            vec![0]
        } else {
            r.n_list.clone()
        };
        cols.extend(ns.iter().map(|&n| paper_label(&sweep, n, "Q_paper")));
    }
    if r.mode.exact() {
        cols.push("Q_exact".into());
    }
    let _ = writeln!(csv, "{}", cols.join(","));
    let mut empty = 0usize;
    for (v, p, ns) in rows {
        let state = evolve_closed_form(&p)?;
        let mut row = vec![num(v)];
        if r.mode.paper() {
            for &n in &ns {
                let q = mandel_q_paper(&state, n).ok();
                empty += q.is_none() as usize;
                row.push(cell(q));
            }
        }
        if r.mode.exact() {
            let q = mandel_q(&reduced_density_matrix(&state)).ok();
            empty += q.is_none() as usize;
            row.push(cell(q));
        }
        let _ = writeln!(csv, "{}", row.join(","));
    }
    let footer = format!("# warnings: empty cells (zero denominator or vacuum) = {empty}\n");
    csv.push_str(&footer);
    Ok(CommandOutput {
        csv,
        report: footer,
        status: Status::Success,
    })
}

fn cmd_squeeze(r: &Resolved) -> CliResult<CommandOutput> {
    let sweep = r.sweep.expect("squeeze sweep");
    let rows = scan_rows(r)?;
    let mut csv = String::new();
    r.header(&mut csv, None);
    let mut cols = vec![sweep.column().to_string()];
    if r.mode.paper() {
        let ns = if sweep.var == SweepVar::N {
            vec![0]
        } else {
            r.n_list.clone()
        };
        for &n in &ns {
            cols.push(paper_label(&sweep, n, "s_x_paper"));
            cols.push(paper_label(&sweep, n, "s_p_paper"));
        }
    }
    if r.mode.exact() {
        cols.push("s_x_exact".into());
        cols.push("s_p_exact".into());
    }
    let _ = writeln!(csv, "{}", cols.join(","));
    let mut truncated = 0usize;
    for (v, p, ns) in rows {
        let state = evolve_closed_form(&p)?;
        let mut row = vec![num(v)];
        if r.mode.paper() {
            for &n in &ns {
                let sq = squeezing_paper(&state, n)?;
                row.push(num(sq.s_x));
                row.push(num(sq.s_p));
            }
        }
        if r.mode.exact() {
            let rho = reduced_density_matrix(&state);
            truncated += field_moments(&rho).truncation_warning() as usize;
            let sq = squeezing_parameters(&rho);
            row.push(num(sq.s_x));
            row.push(num(sq.s_p));
        }
        let _ = writeln!(csv, "{}", row.join(","));
    }
    let footer = format!("# warnings: rows with truncation-edge population > 1e-8 = {truncated}\n");
    csv.push_str(&footer);
    Ok(CommandOutput {
        csv,
        report: footer,
        status: Status::Success,
    })
}

struct Check {
    name: &'static str,
    value: f64,
    threshold: f64,
    pass: bool,
}

fn check_below(name: &'static str, value: f64, threshold: f64) -> Check {
    Check {
        name,
        value,
        threshold,
        pass: value < threshold,
    }
}

fn verify_betas(rho: &DensityMatrix) -> Vec<Complex64> {
    let radius = 1.5f64.min((rho.n_max() as f64).sqrt() / 2.0);
    (0..8)
        .map(|j| Complex64::from_polar(radius * j as f64 / 7.0, 2.0 * PI * 0.37 * j as f64))
        .collect()
}

fn cmd_verify(r: &Resolved) -> CliResult<CommandOutput> {
    let p = r.base_params()?;
    let closed = evolve_closed_form(&p)?;
    let integrated = integrate_schrodinger(&p, default_step(&p))?;
    let literal_eom = integrate_with(&p, default_step(&p), EquationsOfMotion::Literal)?;
    let exact = reduced_density_matrix(&closed);
    let literal = paper_density_matrix(&closed);
    let exact_diag = validate_density(&exact);
    let literal_diag = validate_density(&literal);

    let mut checks = vec![check_below(
        "closed_form_vs_integrator",
        closed.max_deviation(&integrated),
        1e-8,
    )];
    let conservation = (0..=p.n_max)
        .map(|n| {
            (manifold_probability(&closed, n).unwrap_or(f64::NAN)
                - coherent_amplitude(n, p.alpha).norm_sqr())
            .abs()
        })
        .fold(0.0, f64::max);
    checks.push(check_below("manifold_conservation", conservation, 1e-12));
    checks.push(check_below(
        "unitarity",
        (closed.norm_sqr() - 1.0).abs(),
        1e-10,
    ));
    checks.push(check_below("exact_trace", exact_diag.trace_error, 1e-10));
    checks.push(check_below(
        "exact_hermiticity",
        exact_diag.hermiticity_error,
        1e-12,
    ));
    checks.push(check_below(
        "exact_min_diagonal_negativity",
        (-exact_diag.min_diagonal).max(0.0),
        1e-12,
    ));
    checks.push(check_below(
        "literal_hermiticity",
        literal_diag.hermiticity_error,
        1e-12,
    ));
    let pnd_sum: f64 = exact.elements.diag().iter().map(|z| z.re).sum();
    checks.push(check_below(
        "pnd_normalization",
        (pnd_sum - 1.0).abs(),
        1e-10,
    ));
    let diag_identity = (0..exact.dim())
        .map(|n| {
            let expect =
                closed.ca.get(n).map_or(0.0, |c| c.norm_sqr()) + closed.cb_at_photon(n).norm_sqr();
            (exact.elements[[n, n]].re - expect).abs()
        })
        .fold(0.0, f64::max);
    checks.push(check_below("exact_diagonal_identity", diag_identity, 1e-12));
    let mut wigner_dev: f64 = 0.0;
    for beta in verify_betas(&exact) {
        let series = wigner_series(&exact, beta, default_k_max(&exact, beta))?;
        let parity = wigner_parity_oracle(&exact, beta)?;
        wigner_dev = wigner_dev.max((series - parity).abs());
    }
    checks.push(check_below("wigner_series_vs_parity", wigner_dev, 1e-8));
    let coherent = reduced_density_matrix(&JointState::initial(&p));
    let sq = squeezing_parameters(&coherent);
    checks.push(check_below(
        "coherent_squeezing_baseline",
        sq.s_x.abs().max(sq.s_p.abs()),
        1e-10,
    ));
    if p.alpha.norm_sqr() > 1e-12 {
        checks.push(check_below(
            "coherent_mandel_baseline",
            mandel_q(&coherent)?.abs(),
            1e-10,
        ));
    }

    let mut report = String::new();
    for c in &checks {
        let _ = writeln!(
            report,
            "{} {} value={} threshold={:e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            num(c.value),
            c.threshold
        );
    }
    let rho_diff = (&literal.elements - &exact.elements)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let pnd_diff = (0..exact.dim())
        .map(|n| (coherent_amplitude(n, p.alpha).norm_sqr() - exact.elements[[n, n]].re).abs())
        .fold(0.0, f64::max);
    let _ = writeln!(
        report,
        "REPORT literal_eom_vs_closed_form max_dev={}",
        num(literal_eom.max_deviation(&closed))
    );
    let _ = writeln!(
        report,
        "REPORT literal_vs_exact_rho max_abs_diff={}",
        num(rho_diff)
    );
    let _ = writeln!(
        report,
        "REPORT coherence_01 exact_abs={} literal_abs={}",
        num(exact.elements[[0, 1]].norm()),
        num(literal.elements[[0, 1]].norm())
    );
    let _ = writeln!(
        report,
        "REPORT pnd_paper_vs_exact max_abs_diff={}",
        num(pnd_diff)
    );
    let status = match checks.iter().find(|c| !c.pass) {
        Some(first) => {
            let _ = writeln!(
                report,
                "RESULT fail (first failing invariant: {})",
                first.name
            );
            Status::InvariantFailure
        }
        None => {
            let _ = writeln!(report, "RESULT pass");
            Status::Success
        }
    };

    let mut csv = String::new();
    r.header(&mut csv, Some(&p));
    for line in report.lines() {
        let _ = writeln!(csv, "# {line}");
    }
    let _ = writeln!(
        csv,
        "section,m,n,paper_re,paper_im,exact_re,exact_im,abs_diff"
    );
    for m in 0..exact.dim() {
        for n in 0..exact.dim() {
            let (a, b) = (literal.elements[[m, n]], exact.elements[[m, n]]);
            let _ = writeln!(
                csv,
                "rho,{m},{n},{},{},{},{},{}",
                num(a.re),
                num(a.im),
                num(b.re),
                num(b.im),
                num((a - b).norm())
            );
        }
    }
    for n in 0..exact.dim() {
        let (a, b) = (
            coherent_amplitude(n, p.alpha).norm_sqr(),
            exact.elements[[n, n]].re,
        );
        let _ = writeln!(
            csv,
            "pnd,{n},{n},{},{},{},{},{}",
            num(a),
            num(0.0),
            num(b),
            num(0.0),
            num((a - b).abs())
        );
    }
    Ok(CommandOutput {
        csv,
        report,
        status,
    })
}

/// Write `contents` to `path` via a sibling temp file and a rename.
///
/// An existing file is only replaced when `force` is set.
pub fn write_output(path: &Path, contents: &str, force: bool) -> CliResult<()> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path.exists() && !force {
        return Err(io_err(io::Error::new(
            io::ErrorKind::AlreadyExists,
            "output exists; pass --force to overwrite",
        )));
    }
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| io_err(io::Error::other("output path has no file name")))?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(e)
    })
}
