//! Mandel Q against the coherent amplitude: per-manifold values from the
//! unnormalised weights, and the value of the full reduced field.
//!
//! `cargo run --release --example mandel_scan -- 1.0` (g·t)

use cavity_field::{
    evolve_closed_form, mandel_q, mandel_q_paper, reduced_density_matrix, SystemParams,
};
use num_complex::Complex64;

fn main() -> cavity_field::Result<()> {
    let gt: f64 = std::env::args()
        .nth(1)
        .map_or(1.0, |a| a.parse().expect("g·t"));
    println!(
        "{:>6}  {:>10}  {:>10}  {:>10}  {:>10}",
        "alpha", "Q(n=1)", "Q(n=2)", "Q(n=3)", "Q(field)"
    );
    for i in 1..=15 {
        let alpha = 0.2 * i as f64;
        let params = SystemParams::resonant(Complex64::new(alpha, 0.0), gt)?;
        let state = evolve_closed_form(&params)?;
        let per_n: Vec<String> = (1..=3)
            .map(|n| mandel_q_paper(&state, n).map_or("-".into(), |q| format!("{q:.5}")))
            .collect();
        let q = mandel_q(&reduced_density_matrix(&state))?;
        println!(
            "{alpha:>6.2}  {:>10}  {:>10}  {:>10}  {q:>10.5}",
            per_n[0], per_n[1], per_n[2]
        );
    }
    println!("Q < 0 marks sub-Poissonian statistics.");
    Ok(())
}
