use cavity_field::oracle::default_step;
use cavity_field::{
    coherent_amplitude, evolve_closed_form, field_moments, integrate_schrodinger, mandel_q,
    manifold_density_matrix, paper_density_matrix, photon_number_distribution,
    reduced_density_matrix, squeezing_parameters, validate_density, wigner_grid, DensityMatrix,
    GridWindow, Provenance, SystemParams,
};
use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = SystemParams> {
    (
        1e-3f64..=2.0,
        -2.0f64..=2.0,
        0.0f64..=2.0,
        0.0f64..std::f64::consts::TAU,
        0.0f64..=10.0,
    )
        .prop_map(|(g, delta, r, phi, t)| {
            SystemParams::new(g, delta, Complex64::from_polar(r, phi), t).unwrap()
        })
}

fn density(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.0f64..1.0), dim * 2).prop_map(
        move |v| {
            let mut m = Array2::<Complex64>::zeros((dim, dim));
            for chunk in v.chunks(dim) {
                let psi: Vec<Complex64> = chunk
                    .iter()
                    .map(|&(re, im, _)| Complex64::new(re, im))
                    .collect();
                let w = chunk[0].2 + 1e-3;
                for i in 0..dim {
                    for j in 0..dim {
                        m[[i, j]] += psi[i] * psi[j].conj() * w;
                    }
                }
            }
            let tr = m.diag().iter().map(|z| z.re).sum::<f64>();
            DensityMatrix::new(m.mapv(|z| z / tr), Provenance::External).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_is_unitary(p in params()) {
        let state = evolve_closed_form(&p).unwrap();
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn manifolds_conserve_probability(p in params()) {
        let state = evolve_closed_form(&p).unwrap();
        for n in 0..=p.n_max {
            let lhs = state.ca[n].norm_sqr() + state.cb[n].norm_sqr();
            prop_assert!((lhs - coherent_amplitude(n, p.alpha).norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn resonant_excited_amplitude(r in 0.0f64..2.0, gt in 0.0f64..10.0) {
        let p = SystemParams::resonant(Complex64::new(r, 0.0), gt).unwrap();
        let state = evolve_closed_form(&p).unwrap();
        for n in 0..=p.n_max {
            let expect = coherent_amplitude(n, p.alpha).norm() * ((n as f64 + 1.0).sqrt() * gt).cos().abs();
            prop_assert!((state.ca[n].norm() - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn global_phase_rotates_amplitudes(p in params(), theta in 0.0f64..std::f64::consts::TAU) {
        let rotated = SystemParams { alpha: p.alpha * Complex64::from_polar(1.0, theta), ..p };
        let (s0, s1) = (evolve_closed_form(&p).unwrap(), evolve_closed_form(&rotated).unwrap());
        for n in 0..=p.n_max {
            let ph = Complex64::from_polar(1.0, n as f64 * theta);
            prop_assert!((s1.ca[n] - s0.ca[n] * ph).norm() < 1e-12);
            prop_assert!((s1.cb[n] - s0.cb[n] * ph).norm() < 1e-12);
        }
    }

    #[test]
    fn phase_leaves_statistics_unchanged(p in params(), theta in 0.0f64..std::f64::consts::TAU) {
        let rotated = SystemParams { alpha: p.alpha * Complex64::from_polar(1.0, theta), ..p };
        let r0 = reduced_density_matrix(&evolve_closed_form(&p).unwrap());
        let r1 = reduced_density_matrix(&evolve_closed_form(&rotated).unwrap());
        for n in 0..r0.dim() {
            prop_assert!((photon_number_distribution(&r0, n).unwrap() - photon_number_distribution(&r1, n).unwrap()).abs() < 1e-12);
        }
        if let (Ok(q0), Ok(q1)) = (mandel_q(&r0), mandel_q(&r1)) {
            prop_assert!((q0 - q1).abs() < 1e-8 * (1.0 + q0.abs()));
        }
        let (a, b) = (squeezing_parameters(&r0), squeezing_parameters(&r1));
        prop_assert!(((a.s_x + a.s_p) - (b.s_x + b.s_p)).abs() < 1e-9);
    }

    #[test]
    fn density_constructors_are_valid(p in params()) {
        let state = evolve_closed_form(&p).unwrap();
        for rho in [reduced_density_matrix(&state), paper_density_matrix(&state)] {
            let d = validate_density(&rho);
            prop_assert!(d.trace_error < 1e-10 && d.hermiticity_error < 1e-12 && d.min_diagonal >= -1e-12);
            let total: f64 = (0..rho.dim()).map(|n| photon_number_distribution(&rho, n).unwrap()).sum();
            prop_assert!((total - 1.0).abs() < 1e-10);
        }
        for n in [0, p.n_max / 2] {
            if let Ok(rho) = manifold_density_matrix(&state, n) {
                prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn diagonal_identity(p in params()) {
        let state = evolve_closed_form(&p).unwrap();
        let rho = reduced_density_matrix(&state);
        for n in 0..rho.dim() {
            let ca = state.ca.get(n).map_or(0.0, |c| c.norm_sqr());
            prop_assert!((rho.elements[[n, n]].re - ca - state.cb_at_photon(n).norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn mandel_q_has_fock_floor(rho in density(8)) {
        if let Ok(q) = mandel_q(&rho) {
            prop_assert!(q >= -1.0 - 1e-12);
        }
    }

    #[test]
    fn squeezing_respects_uncertainty(rho in density(8)) {
        // s = 4V − 1 ≥ −1 because a variance cannot be negative
        let s = squeezing_parameters(&rho);
        prop_assert!(s.s_x >= -1.0 - 1e-12 && s.s_p >= -1.0 - 1e-12);
        prop_assert!(!field_moments(&rho).n_mean.is_nan());
    }

    #[test]
    fn single_manifold_q_matches_two_point(w in 0.0f64..=1.0, n in 0usize..12) {
        let mut m = Array2::<Complex64>::zeros((n + 3, n + 3));
        m[[n, n]] = Complex64::new(w, 0.0);
        m[[n + 1, n + 1]] = Complex64::new(1.0 - w, 0.0);
        let rho = DensityMatrix::new(m, Provenance::SingleManifold(n)).unwrap();
        let (x0, x1) = (n as f64, n as f64 + 1.0);
        let mean = w * x0 + (1.0 - w) * x1;
        prop_assume!(mean > 1e-12);
        let second = w * x0 * x0 + (1.0 - w) * x1 * x1;
        let expect = (second - mean * mean - mean) / mean;
        prop_assert!((mandel_q(&rho).unwrap() - expect).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn integrator_agrees_with_closed_form(g in 0.2f64..=2.0, delta in -2.0f64..=2.0, r in 0.0f64..=1.5, t in 0.0f64..=3.0) {
        let p = SystemParams::new(g, delta, Complex64::new(r, 0.0), t).unwrap();
        let a = evolve_closed_form(&p).unwrap();
        let b = integrate_schrodinger(&p, default_step(&p)).unwrap();
        prop_assert!(a.max_deviation(&b) < 1e-8);
    }

    #[test]
    fn wigner_bounded_and_normalised(rho in density(6)) {
        let grid = wigner_grid(&rho, &GridWindow::square(4.5, 41)).unwrap();
        prop_assert!(grid.values.iter().all(|w| w.abs() <= std::f64::consts::FRAC_2_PI + 1e-9));
        prop_assert!((grid.riemann_sum() - 1.0).abs() < 1e-3);
    }
}
