//! Drive the CSV commands of the `cavity-field` binary from Rust.
//!
//! `cargo run --release --example cli_in_process`

use cavity_field::cli::{self, Command, Mode, RunConfig};
use num_complex::Complex64;

fn main() {
    let mut config = RunConfig::new(Command::Verify);
    config.alpha = Some(Complex64::new(0.7, 0.2));
    config.gt = Some(2.0);
    let out = cli::run(&config).expect("verify runs");
    print!("{}", out.report);

    let mut config = RunConfig::new(Command::Qscan);
    config.sweep = Some("alpha:0.1:2:5".parse().expect("sweep"));
    config.mode = Some(Mode::Exact);
    let out = cli::run(&config).expect("qscan runs");
    print!("{}", out.csv);
}
