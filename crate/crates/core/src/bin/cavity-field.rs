use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use cavity_field::cli::{self, Command, Mode, RunConfig, Sweep};
use cavity_field::wigner::GridWindow;
use clap::Parser;
use num_complex::Complex64;

/// Cavity-field statistics of a driven two-level atom.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Args {
    /// pnd | wigner | qscan | squeeze | verify
    command: Command,
    /// Coherent amplitude, `R` or `R,I`
    #[arg(long, allow_hyphen_values = true, value_parser = cli::parse_alpha)]
    alpha: Option<Complex64>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<f64>,
    /// Dimensionless interaction time g·t
    #[arg(long)]
    gt: Option<f64>,
    /// Comma-separated photon numbers
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Override the automatic Fock truncation
    #[arg(long)]
    nmax: Option<usize>,
    /// `alpha|t|n:START:STOP:STEPS`
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<Sweep>,
    /// `RMIN:RMAX:IMIN:IMAX:RES`
    #[arg(long, allow_hyphen_values = true, value_parser = cli::parse_window)]
    window: Option<GridWindow>,
    #[arg(long)]
    mode: Option<Mode>,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace an existing --out file
    #[arg(long)]
    force: bool,
}

fn main() -> ExitCode {
    let a = Args::parse();
    let config = RunConfig {
        command: a.command,
        alpha: a.alpha,
        g: a.g,
        delta: a.delta,
        epsilon: a.epsilon,
        gt: a.gt,
        n_list: a.n,
        n_max: a.nmax,
        sweep: a.sweep,
        grid: a.window,
        mode: a.mode,
        output_path: a.out,
        force: a.force,
    };
    let result = cli::run(&config).and_then(|out| {
        match &config.output_path {
            Some(path) => cli::write_output(path, &out.csv, config.force)?,
            None => {
                let _ = std::io::stdout().lock().write_all(out.csv.as_bytes());
            }
        }
        Ok(out)
    });
    match result {
        Ok(out) => {
            eprint!("{}", out.report);
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
