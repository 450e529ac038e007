//! Wigner functions of single-manifold field states and of the full reduced
//! field, printed as coarse ASCII maps with their minima.
//!
//! `cargo run --release --example wigner_manifolds`

use cavity_field::{
    evolve_closed_form, manifold_density_matrix, min_wigner, reduced_density_matrix, wigner_grid,
    DensityMatrix, GridWindow, SystemParams,
};
use num_complex::Complex64;

fn show(label: &str, rho: &DensityMatrix) -> cavity_field::Result<()> {
    let grid = wigner_grid(rho, &GridWindow::square(3.0, 31))?;
    let min = min_wigner(&grid);
    println!(
        "{label}: W_min = {:.4} at β = {:.2}{:+.2}i, ∫W ≈ {:.4}",
        min.w_min,
        min.beta_at_min.re,
        min.beta_at_min.im,
        grid.riemann_sum()
    );
    for row in grid.values.rows().into_iter().rev().step_by(2) {
        let line: String = row
            .iter()
            .map(|&w| match w {
                w if w < -0.05 => '-',
                w if w > 0.3 => '#',
                w if w > 0.1 => '+',
                w if w > 0.02 => '.',
                _ => ' ',
            })
            .collect();
        println!("  |{line}|");
    }
    Ok(())
}

fn main() -> cavity_field::Result<()> {
    let params = SystemParams::resonant(Complex64::new(0.02, 0.0), 1.0)?;
    let state = evolve_closed_form(&params)?;
    for n in [4, 7, 10] {
        show(
            &format!("manifold n={n}"),
            &manifold_density_matrix(&state, n)?,
        )?;
    }
    show("reduced field", &reduced_density_matrix(&state))?;
    Ok(())
}
