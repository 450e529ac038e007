//! Wigner function of the cavity field.
//!
//! The primary path sums `W(β) = (2/π) Σ_k (−1)^k ⟨β,k|ρ|β,k⟩` over displaced
//! Fock states with Laguerre-polynomial overlaps. The oracle path builds the
//! displacement matrix by exponentiating `βa† − β*a` and evaluates the
//! displaced parity `(2/π) Tr[D(−β) ρ D(β) Π]` instead.

use std::f64::consts::FRAC_2_PI;

use ndarray::{s, Array2};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::model::ln_factorial;
use crate::oracle::{DensityMatrix, Provenance};

/// Terms below this magnitude count toward series termination.
pub const TERM_TOLERANCE: f64 = 1e-14;
/// Consecutive small terms needed to stop the series.
pub const STAGNATION_WINDOW: usize = 3;
/// Allowed imaginary part of a series evaluation.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;
/// Slack on the `|W| ≤ 2/π` bound.
pub const BOUND_SLACK: f64 = 1e-9;

fn laguerre_recurrence(m: usize, k: f64, x: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, 1.0 + k - x);
    for j in 1..m {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + k - x) * cur - (jf + k) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Associated Laguerre polynomial `L_m^{(k)}(x)`.
///
/// Non-negative orders use the upward recurrence
/// `(j+1) L_{j+1} = (2j+1+k−x) L_j − (j+k) L_{j−1}`. Orders `−m ≤ k < 0` go
/// through `L_m^{(−j)}(x) = (−x)^j (m−j)!/m! · L_{m−j}^{(j)}(x)`; the
/// recurrence itself remains valid below that.
pub fn laguerre_assoc(m: usize, k: i64, x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::LaguerreDomain(x));
    }
    if k >= 0 || (-k) as usize > m {
        return Ok(laguerre_recurrence(m, k as f64, x));
    }
    let j = (-k) as usize;
    let ratio = (ln_factorial(m - j) - ln_factorial(m)).exp();
    Ok((-x).powi(j as i32) * ratio * laguerre_recurrence(m - j, j as f64, x))
}

/// `⟨β,k|n⟩ = e^{−|β|²/2} √(k!/n!) (β*)^{n−k} L_k^{(n−k)}(|β|²)`.
///
/// For `n < k` the negative-order identity turns this into
/// `e^{−|β|²/2} √(n!/k!) (−β)^{k−n} L_n^{(k−n)}(|β|²)`.
pub fn displaced_fock_overlap(beta: Complex64, k: usize, n: usize) -> Complex64 {
    let r = beta.norm();
    if r == 0.0 {
        return Complex64::new(if k == n { 1.0 } else { 0.0 }, 0.0);
    }
    let x = r * r;
    let (lo, hi) = (k.min(n), k.max(n));
    let j = hi - lo;
    let lag = laguerre_recurrence(lo, j as f64, x);
    let ln_mag = -0.5 * x + 0.5 * (ln_factorial(lo) - ln_factorial(hi)) + j as f64 * r.ln();
    let phase = if n >= k { -beta.arg() } else { (-beta).arg() };
    Complex64::from_polar(ln_mag.exp() * lag, j as f64 * phase)
}

/// Series cutoff large enough for `rho` and `beta`: the displaced populations
/// of a state supported on `|0⟩..|s−1⟩` spread out to roughly `s + 2|β|² + O(|β|)`.
pub fn default_k_max(rho: &DensityMatrix, beta: Complex64) -> usize {
    let r = beta.norm();
    rho.dim().max(1) + (2.0 * r * r + 10.0 * r).ceil() as usize + 10
}

/// Displaced-Fock series for `W(β)`.
///
/// Summation continues at least through `k = k_max` terms' worth of support
/// and stops after [`STAGNATION_WINDOW`] consecutive terms below
/// [`TERM_TOLERANCE`]; failing that by `k = 4·k_max` is an error.
pub fn wigner_series(rho: &DensityMatrix, beta: Complex64, k_max: usize) -> Result<f64> {
    if k_max + 1 < rho.dim() {
        return Err(Error::InvalidParameter {
            name: "k_max",
            reason: format!("{k_max} is below n_max + 1 = {}", rho.dim() - 1),
        });
    }
    let support = rho.support();
    let rho_s = rho.elements.slice(s![..support, ..support]);
    let limit = 4 * k_max.max(1);
    let mut total = Complex64::new(0.0, 0.0);
    let mut small = 0;
    let mut overlaps = vec![Complex64::new(0.0, 0.0); support];
    for k in 0..=limit {
        for (m, v) in overlaps.iter_mut().enumerate() {
            *v = displaced_fock_overlap(beta, k, m);
        }
        // ⟨β,k|ρ|β,k⟩ = Σ_mn ⟨β,k|m⟩ ρ_mn ⟨β,k|n⟩*
        let mut term = Complex64::new(0.0, 0.0);
        for (m, vm) in overlaps.iter().enumerate() {
            let row: Complex64 = rho_s
                .row(m)
                .iter()
                .zip(&overlaps)
                .map(|(r, vn)| r * vn.conj())
                .sum();
            term += vm * row;
        }
        if k % 2 == 1 {
            term = -term;
        }
        total += term;
        small = if term.norm() < TERM_TOLERANCE {
            small + 1
        } else {
            0
        };
        if k >= support && small >= STAGNATION_WINDOW {
            let w = total * FRAC_2_PI;
            if w.im.abs() >= IMAGINARY_TOLERANCE {
                return Err(Error::ImaginaryResidue {
                    beta,
                    residue: w.im.abs(),
                });
            }
            return Ok(w.re);
        }
    }
    Err(Error::SeriesConvergence { beta, limit })
}

/// Truncated displacement operator `D(β) = exp(βa† − β*a)` on `|0⟩..|dim−1⟩`.
#[derive(Debug, Clone)]
pub struct DisplacementOperator {
    pub beta: Complex64,
    pub matrix: Array2<Complex64>,
}

impl DisplacementOperator {
    pub fn new(beta: Complex64, dim: usize) -> Self {
        let mut generator = Array2::<Complex64>::zeros((dim, dim));
        for n in 1..dim {
            let s = (n as f64).sqrt();
            generator[[n, n - 1]] = beta * s;
            generator[[n - 1, n]] = -beta.conj() * s;
        }
        Self {
            beta,
            matrix: expm(&generator),
        }
    }

    /// Basis large enough that displacing states up to `|support−1⟩` leaves
    /// negligible population at the truncation edge.
    pub fn working_dim(support: usize, beta: Complex64) -> usize {
        let r = beta.norm();
        support + 30 + (r * r + 8.0 * r).ceil() as usize
    }

    /// `(2/π) Σ_m (−1)^m ⟨m|D ρ D†|m⟩` for `self = D(−β)`.
    pub fn displaced_parity(&self, rho: &DensityMatrix) -> f64 {
        let dim = rho.dim().min(self.matrix.ncols());
        let x = self.matrix.slice(s![.., ..dim]);
        let y = x.dot(&rho.elements.slice(s![..dim, ..dim]));
        let mut total = 0.0;
        for (m, (yr, xr)) in y.rows().into_iter().zip(x.rows()).enumerate() {
            let diag: Complex64 = yr.iter().zip(xr.iter()).map(|(a, b)| a * b.conj()).sum();
            total += if m % 2 == 0 { diag.re } else { -diag.re };
        }
        FRAC_2_PI * total
    }
}

/// `W(β)` as the displaced-parity expectation, independent of the Laguerre series.
pub fn wigner_parity_oracle(rho: &DensityMatrix, beta: Complex64) -> Result<f64> {
    let beta_sq = beta.norm_sqr();
    let limit = rho.n_max() as f64 / 4.0;
    if beta_sq > limit {
        return Err(Error::DisplacementTruncation { beta_sq, limit });
    }
    let dim = DisplacementOperator::working_dim(rho.dim(), beta);
    Ok(DisplacementOperator::new(-beta, dim).displaced_parity(rho))
}

/// Rectangular sampling window over the `β` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridWindow {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    /// Nodes per axis, endpoints included.
    pub resolution: usize,
}

impl Default for GridWindow {
    fn default() -> Self {
        Self {
            re_min: -3.5,
            re_max: 3.5,
            im_min: -3.5,
            im_max: 3.5,
            resolution: 141,
        }
    }
}

impl GridWindow {
    pub fn square(half_width: f64, resolution: usize) -> Self {
        Self {
            re_min: -half_width,
            re_max: half_width,
            im_min: -half_width,
            im_max: half_width,
            resolution,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution < 16 {
            return Err(Error::InvalidGrid(format!(
                "resolution {} is below 16",
                self.resolution
            )));
        }
        let bounds = [self.re_min, self.re_max, self.im_min, self.im_max];
        if bounds.iter().any(|b| !b.is_finite())
            || self.re_min >= self.re_max
            || self.im_min >= self.im_max
        {
            return Err(Error::InvalidGrid(format!("degenerate window {bounds:?}")));
        }
        Ok(())
    }

    pub fn re_step(&self) -> f64 {
        (self.re_max - self.re_min) / (self.resolution - 1) as f64
    }

    pub fn im_step(&self) -> f64 {
        (self.im_max - self.im_min) / (self.resolution - 1) as f64
    }

    /// Node at column `i_re`, row `i_im`.
    pub fn node(&self, i_re: usize, i_im: usize) -> Complex64 {
        Complex64::new(
            self.re_min + i_re as f64 * self.re_step(),
            self.im_min + i_im as f64 * self.im_step(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub window: GridWindow,
    /// `values[[i_im, i_re]]`: rows run along `Re β` at fixed `Im β`.
    pub values: Array2<f64>,
    pub rho_provenance: Provenance,
}

impl WignerGrid {
    /// `Σ W ΔRe ΔIm` over the nodes.
    pub fn riemann_sum(&self) -> f64 {
        self.values.sum() * self.window.re_step() * self.window.im_step()
    }

    /// Nodes and values in row-major order (`Im β` outer, `Re β` inner).
    pub fn iter(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.values
            .indexed_iter()
            .map(|((i_im, i_re), &w)| (self.window.node(i_re, i_im), w))
    }
}

/// Evaluate [`wigner_series`] on every node of `window`.
pub fn wigner_grid(rho: &DensityMatrix, window: &GridWindow) -> Result<WignerGrid> {
    window.validate()?;
    let res = window.resolution;
    let values: Vec<f64> = (0..res * res)
        .into_par_iter()
        .map(|idx| {
            let beta = window.node(idx % res, idx / res);
            let w = wigner_series(rho, beta, default_k_max(rho, beta))?;
            if !w.is_finite() || w.abs() > FRAC_2_PI + BOUND_SLACK {
                return Err(Error::WignerBound { beta, value: w });
            }
            Ok(w)
        })
        .collect::<Result<_>>()?;
    Ok(WignerGrid {
        window: *window,
        values: Array2::from_shape_vec((res, res), values).expect("grid shape"),
        rho_provenance: rho.provenance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerMinimum {
    pub beta_at_min: Complex64,
    pub w_min: f64,
}

/// Smallest grid value; ties go to the lexicographically smallest `(Re β, Im β)`.
pub fn min_wigner(grid: &WignerGrid) -> WignerMinimum {
    let mut best: Option<WignerMinimum> = None;
    for (beta, w) in grid.iter() {
        let better = match best {
            None => true,
            Some(b) => {
                w < b.w_min
                    || (w == b.w_min && (beta.re, beta.im) < (b.beta_at_min.re, b.beta_at_min.im))
            }
        };
        if better {
            best = Some(WignerMinimum {
                beta_at_min: beta,
                w_min: w,
            });
        }
    }
    best.expect("grid has at least 16x16 nodes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    /// The alternating factorial sum, evaluated in exact rational arithmetic:
    /// in f64 it cancels catastrophically once x approaches m.
    fn laguerre_direct(m: usize, k: usize, x: f64) -> f64 {
        use num::{BigInt, BigRational, ToPrimitive};
        let fact = |n: usize| -> BigInt { (1..=n).map(BigInt::from).product() };
        let neg_x = -BigRational::from_float(x).unwrap();
        let mut power = BigRational::from_integer(1.into());
        let mut total = BigRational::from_integer(0.into());
        for i in 0..=m {
            let denom = fact(i) * fact(m - i) * fact(k + i);
            total += &power * BigRational::new(fact(m + k), denom);
            power *= &neg_x;
        }
        total.to_f64().unwrap()
    }

    #[test]
    fn laguerre_examples() {
        for k in [0, 3, -2] {
            assert_eq!(laguerre_assoc(0, k, 1.7).unwrap(), 1.0);
        }
        assert_eq!(laguerre_assoc(1, 0, 1.0).unwrap(), 0.0);
        assert!((laguerre_assoc(2, 0, 1.0).unwrap() + 0.5).abs() < 1e-15);
        assert_eq!(laguerre_assoc(3, 1, -0.1), Err(Error::LaguerreDomain(-0.1)));
    }

    #[test]
    fn recurrence_matches_direct_sum() {
        for m in 0..=15 {
            for k in 0..=12 {
                for x in [0.0, 0.3, 1.0, 2.5, 5.0, 7.5, 10.0] {
                    let direct = laguerre_direct(m, k, x);
                    let rec = laguerre_assoc(m, k as i64, x).unwrap();
                    let scale = direct.abs().max(1.0);
                    assert!(
                        (rec - direct).abs() <= 1e-10 * scale,
                        "m={m} k={k} x={x}: {rec} vs {direct}"
                    );
                }
            }
        }
    }

    #[test]
    fn negative_order_identity_agrees_with_generic_recurrence() {
        for m in 1..10 {
            for j in 1..=m {
                for x in [0.2, 1.0, 3.0] {
                    let via_identity = laguerre_assoc(m, -(j as i64), x).unwrap();
                    let generic = laguerre_recurrence(m, -(j as f64), x);
                    assert!((via_identity - generic).abs() < 1e-9 * generic.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn overlap_examples() {
        assert_eq!(displaced_fock_overlap(c(0.0, 0.0), 3, 3), c(1.0, 0.0));
        assert_eq!(displaced_fock_overlap(c(0.0, 0.0), 2, 5), c(0.0, 0.0));
        let v = displaced_fock_overlap(c(1.0, 0.0), 0, 0);
        assert!((v - c((-0.5f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn overlap_matches_printed_formula_and_displacement_matrix() {
        let beta = c(0.7, -0.4);
        let x = beta.norm_sqr();
        let d = DisplacementOperator::new(beta, 80);
        for k in 0..8 {
            for n in 0..8 {
                let got = displaced_fock_overlap(beta, k, n);
                // ⟨β,k|n⟩ = conj(⟨n|D(β)|k⟩)
                assert!(
                    (got - d.matrix[[n, k]].conj()).norm() < 1e-12,
                    "k={k} n={n}"
                );
                let printed = (-0.5 * x).exp()
                    * (factorial(k) / factorial(n)).sqrt()
                    * beta.conj().powi(n as i32 - k as i32)
                    * laguerre_assoc(k, n as i64 - k as i64, x).unwrap();
                assert!((got - printed).norm() < 1e-12, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn series_anchors() {
        let vac = DensityMatrix::fock(0, 3);
        let one = DensityMatrix::fock(1, 3);
        assert!((wigner_series(&vac, c(0.0, 0.0), 5).unwrap() - FRAC_2_PI).abs() < 1e-15);
        assert!((wigner_series(&one, c(0.0, 0.0), 5).unwrap() + FRAC_2_PI).abs() < 1e-15);
        let alpha = c(0.5, 0.0);
        let coh = DensityMatrix::coherent(alpha, 30);
        let w = wigner_series(&coh, alpha, default_k_max(&coh, alpha)).unwrap();
        assert!((w - FRAC_2_PI).abs() < 1e-10);
    }

    #[test]
    fn series_rejects_small_k_max() {
        let rho = DensityMatrix::fock(0, 10);
        assert!(matches!(
            wigner_series(&rho, c(0.1, 0.0), 3),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn parity_oracle_anchors() {
        let vac = DensityMatrix::fock(0, 6);
        let one = DensityMatrix::fock(1, 6);
        assert!((wigner_parity_oracle(&vac, c(0.0, 0.0)).unwrap() - FRAC_2_PI).abs() < 1e-14);
        assert!((wigner_parity_oracle(&one, c(0.0, 0.0)).unwrap() + FRAC_2_PI).abs() < 1e-14);
        assert!(matches!(
            wigner_parity_oracle(&vac, c(1.0, 1.0)),
            Err(Error::DisplacementTruncation { .. })
        ));
    }

    #[test]
    fn parity_matches_series_on_diagonal_state() {
        let mut e = Array2::zeros((6, 6));
        for (k, w) in [0.4, 0.3, 0.2, 0.1].iter().enumerate() {
            e[[k, k]] = c(*w, 0.0);
        }
        let rho = DensityMatrix::new(e, Provenance::External).unwrap();
        let beta = c(0.3, 0.2);
        let a = wigner_series(&rho, beta, default_k_max(&rho, beta)).unwrap();
        let b = wigner_parity_oracle(&rho, beta).unwrap();
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn vacuum_grid() {
        let rho = DensityMatrix::fock(0, 3);
        let grid = wigner_grid(&rho, &GridWindow::square(3.0, 101)).unwrap();
        let min = min_wigner(&grid);
        assert!(min.w_min >= -1e-9);
        let peak = grid.values.iter().cloned().fold(f64::MIN, f64::max);
        assert!((peak - FRAC_2_PI).abs() < 1e-12);
        assert!((grid.riemann_sum() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn fock_grid_minimum_at_origin() {
        let rho = DensityMatrix::fock(1, 4);
        let grid = wigner_grid(&rho, &GridWindow::square(3.0, 31)).unwrap();
        let min = min_wigner(&grid);
        assert!((min.w_min + FRAC_2_PI).abs() < 1e-12);
        assert!(min.beta_at_min.norm() < 1e-12);
    }

    #[test]
    fn min_ties_prefer_smallest_coordinates() {
        let rho = DensityMatrix::fock(0, 3);
        let mut grid = wigner_grid(&rho, &GridWindow::square(1.0, 16)).unwrap();
        grid.values.fill(0.25);
        let min = min_wigner(&grid);
        assert_eq!(min.beta_at_min, c(-1.0, -1.0));
    }

    #[test]
    fn grid_validation() {
        let rho = DensityMatrix::fock(0, 3);
        assert!(matches!(
            wigner_grid(&rho, &GridWindow::square(1.0, 15)),
            Err(Error::InvalidGrid(_))
        ));
        let w = GridWindow {
            re_min: 1.0,
            re_max: 0.0,
            ..GridWindow::default()
        };
        assert!(w.validate().is_err());
    }
}
