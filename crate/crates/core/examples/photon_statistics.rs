//! Photon number distribution of the field after one interaction time,
//! next to the initial Poisson distribution.
//!
//! `cargo run --example photon_statistics -- 1.5 0.8` (|α| and g·t)

use cavity_field::{
    coherent_amplitude, evolve_closed_form, field_moments, reduced_density_matrix, SystemParams,
};
use num_complex::Complex64;

fn main() -> cavity_field::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<f64>().expect("numeric argument"));
    let alpha = Complex64::new(args.next().unwrap_or(1.0), 0.0);
    let gt = args.next().unwrap_or(1.0);

    let params = SystemParams::resonant(alpha, gt)?;
    let rho = reduced_density_matrix(&evolve_closed_form(&params)?);

    println!("{:>3}  {:>10}  {:>10}", "n", "initial", "evolved");
    for n in 0..12 {
        let p0 = coherent_amplitude(n, alpha).norm_sqr();
        let p = rho.elements[[n, n]].re;
        println!(
            "{n:>3}  {p0:>10.6}  {p:>10.6}  {}",
            "#".repeat((p * 60.0).round() as usize)
        );
    }
    let m = field_moments(&rho);
    println!("<n> = {:.6}, <a> = {:.6}", m.n_mean, m.a_mean);
    Ok(())
}
