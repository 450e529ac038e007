//! Quadrature squeezing parameters `s_x`, `s_p` over a range of interaction
//! times; negative values mark reduced quadrature noise.
//!
//! `cargo run --release --example squeezing -- 2.0` (|α|)

use cavity_field::{
    evolve_closed_form, reduced_density_matrix, squeezing_paper, squeezing_parameters, SystemParams,
};
use num_complex::Complex64;

fn main() -> cavity_field::Result<()> {
    let alpha: f64 = std::env::args()
        .nth(1)
        .map_or(2.0, |a| a.parse().expect("|α|"));
    println!(
        "{:>5}  {:>10}  {:>10}  {:>12}  {:>12}",
        "gt", "s_x", "s_p", "s_x(n=2)", "s_p(n=2)"
    );
    for i in 0..=20 {
        let gt = 0.25 * i as f64;
        let params = SystemParams::resonant(Complex64::new(alpha, 0.0), gt)?;
        let state = evolve_closed_form(&params)?;
        let s = squeezing_parameters(&reduced_density_matrix(&state));
        let sn = squeezing_paper(&state, 2)?;
        let mark = if s.is_squeezed() { " squeezed" } else { "" };
        println!(
            "{gt:>5.2}  {:>10.5}  {:>10.5}  {:>12.5}  {:>12.5}{mark}",
            s.s_x, s.s_p, sn.s_x, sn.s_p
        );
    }
    Ok(())
}
