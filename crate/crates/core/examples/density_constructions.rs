//! Two ways to build the field density matrix: the exact partial trace and
//! the four-term manifold expansion. Prints where they disagree and whether
//! each is a valid density matrix.
//!
//! `cargo run --example density_constructions`

use cavity_field::{
    evolve_closed_form, paper_density_matrix, reduced_density_matrix, validate_density,
    SystemParams,
};
use num_complex::Complex64;

fn main() -> cavity_field::Result<()> {
    let params = SystemParams::resonant(Complex64::new(1.0, 0.0), 1.0)?;
    let state = evolve_closed_form(&params)?;
    let exact = reduced_density_matrix(&state);
    let expanded = paper_density_matrix(&state);

    for rho in [&exact, &expanded] {
        let d = validate_density(rho);
        println!(
            "{:<18} trace error {:.2e}, hermiticity {:.2e}, min diagonal {:+.3e}",
            rho.provenance.to_string(),
            d.trace_error,
            d.hermiticity_error,
            d.min_diagonal
        );
    }
    println!("\n m  n   exact                    expansion");
    for m in 0..4 {
        for n in m..4 {
            let (a, b) = (exact.elements[[m, n]], expanded.elements[[m, n]]);
            println!(
                "{m:>2} {n:>2}   {:+.5}{:+.5}i    {:+.5}{:+.5}i",
                a.re, a.im, b.re, b.im
            );
        }
    }
    Ok(())
}
