//! Physical parameters and the closed-form evolution of the atom–field amplitudes.
//!
//! The effective coupling only connects `|a, n⟩` with `|b, n+1⟩`, so the joint
//! state splits into independent two-level manifolds labelled by `n`. Each
//! manifold evolves with its own Rabi frequency `Ω_n = √(δ² + 4g²(n+1))`.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tail probability a user-supplied truncation may leave behind.
pub const TAIL_LIMIT: f64 = 1e-12;

/// Smallest truncation the automatic rule will pick.
pub const MIN_AUTO_N_MAX: usize = 16;

const LN_FACTORIAL_TABLE: usize = 1024;

/// `ln n!` as a running sum of logarithms, tabulated below 1024.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = vec![0.0; LN_FACTORIAL_TABLE];
        for k in 2..LN_FACTORIAL_TABLE {
            t[k] = t[k - 1] + (k as f64).ln();
        }
        t
    });
    match table.get(n) {
        Some(&v) => v,
        None => {
            table[LN_FACTORIAL_TABLE - 1]
                + (LN_FACTORIAL_TABLE..=n)
                    .map(|k| (k as f64).ln())
                    .sum::<f64>()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Atom–cavity coupling.
    pub g: f64,
    /// Cavity detuning `ω_a − ω`, same units as `g`.
    pub delta: f64,
    /// Classical drive strength. Only recorded: the effective coupling is
    /// already the strong-drive limit, so it never enters the dynamics.
    pub epsilon: f64,
    /// Initial coherent amplitude of the field.
    pub alpha: Complex64,
    /// Interaction time.
    pub t: f64,
    /// Largest retained Fock index of the manifold label.
    pub n_max: usize,
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("{value} is not finite"),
        })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    let value = finite(name, value)?;
    if value < 0.0 {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("{value} is negative"),
        });
    }
    Ok(value)
}

impl SystemParams {
    /// Parameters with `ε = 0` and the automatic truncation for `alpha`.
    pub fn new(g: f64, delta: f64, alpha: Complex64, t: f64) -> Result<Self> {
        let g = non_negative("g", g)?;
        let delta = finite("delta", delta)?;
        let t = non_negative("t", t)?;
        finite("alpha", alpha.re)?;
        finite("alpha", alpha.im)?;
        if g == 0.0 && delta == 0.0 {
            return Err(Error::DegenerateParameters);
        }
        Ok(Self {
            g,
            delta,
            epsilon: 0.0,
            alpha,
            t,
            n_max: Self::auto_n_max(alpha),
        })
    }

    /// Resonant parameters with `g = 1`, the scaled-time convention used throughout.
    pub fn resonant(alpha: Complex64, gt: f64) -> Result<Self> {
        Self::new(1.0, 0.0, alpha, gt)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        self.epsilon = non_negative("epsilon", epsilon)?;
        Ok(self)
    }

    pub fn with_time(mut self, t: f64) -> Result<Self> {
        self.t = non_negative("t", t)?;
        Ok(self)
    }

    /// Override the truncation; rejected if the coherent tail beyond it is not negligible.
    pub fn with_n_max(mut self, n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParameter {
                name: "n_max",
                reason: "must be at least 1".into(),
            });
        }
        let tail = coherent_tail(self.alpha, n_max);
        if tail >= TAIL_LIMIT {
            return Err(Error::TruncationTooSmall { n_max, tail });
        }
        self.n_max = n_max;
        Ok(self)
    }

    /// `ceil(|α|² + 10|α| + 20)`, never below [`MIN_AUTO_N_MAX`].
    pub fn auto_n_max(alpha: Complex64) -> usize {
        let r = alpha.norm();
        ((r * r + 10.0 * r + 20.0).ceil() as usize).max(MIN_AUTO_N_MAX)
    }

    /// Scaled interaction time `g·t`.
    pub fn gt(&self) -> f64 {
        self.g * self.t
    }

    /// Number of Fock states in the field basis, `|0⟩..|n_max+1⟩`.
    pub fn field_dim(&self) -> usize {
        self.n_max + 2
    }

    /// Largest Rabi frequency over the retained manifolds.
    pub fn max_rabi_frequency(&self) -> f64 {
        rabi_frequency(self.n_max, self)
    }
}

/// `Σ_{n ≥ n_max} |c_n(0)|²`, summed upward so no cancellation occurs.
pub fn coherent_tail(alpha: Complex64, n_max: usize) -> f64 {
    let mean = alpha.norm_sqr();
    if mean == 0.0 {
        return 0.0;
    }
    let mut total = 0.0;
    let mut n = n_max;
    loop {
        let p = coherent_amplitude(n, alpha).norm_sqr();
        total += p;
        if (n as f64) > mean && p <= total * 1e-17 {
            break;
        }
        n += 1;
    }
    total
}

/// `Ω_n = √(δ² + 4g²(n+1))`.
pub fn rabi_frequency(n: usize, params: &SystemParams) -> f64 {
    (params.delta.powi(2) + 4.0 * params.g.powi(2) * (n as f64 + 1.0)).sqrt()
}

/// Fock amplitude `e^{−|α|²/2} αⁿ/√(n!)` of a coherent state.
pub fn coherent_amplitude(n: usize, alpha: Complex64) -> Complex64 {
    let r = alpha.norm();
    if r == 0.0 {
        return if n == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    if n <= 30 {
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        alpha.powu(n as u32) * ((-0.5 * r * r).exp() / fact.sqrt())
    } else {
        let ln_mag = -0.5 * r * r + n as f64 * r.ln() - 0.5 * ln_factorial(n);
        Complex64::from_polar(ln_mag.exp(), n as f64 * alpha.arg())
    }
}

/// Joint atom–field amplitudes.
///
/// `ca[n]` is the amplitude of `|a, n⟩` and `cb[n]` the amplitude of
/// `|b, n+1⟩`, both for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub ca: Vec<Complex64>,
    pub cb: Vec<Complex64>,
    pub params: SystemParams,
}

impl JointState {
    /// Atom excited, field coherent: `c_{a,n} = c_n(0)`, `c_{b,n+1} = 0`.
    pub fn initial(params: &SystemParams) -> Self {
        let ca = (0..=params.n_max)
            .map(|n| coherent_amplitude(n, params.alpha))
            .collect();
        Self {
            ca,
            cb: vec![Complex64::new(0.0, 0.0); params.n_max + 1],
            params: *params,
        }
    }

    pub fn n_max(&self) -> usize {
        self.ca.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.ca.iter().chain(&self.cb).map(|c| c.norm_sqr()).sum()
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n > self.n_max() {
            return Err(Error::IndexOutOfRange {
                index: n,
                max: self.n_max(),
            });
        }
        Ok(())
    }

    /// Amplitude of `|b, k⟩` in the field-index convention (`k ≥ 1`; zero for `k = 0`).
    pub fn cb_at_photon(&self, k: usize) -> Complex64 {
        match k {
            0 => Complex64::new(0.0, 0.0),
            k => self.cb.get(k - 1).copied().unwrap_or_default(),
        }
    }

    /// Largest `|Δc|` over both amplitude arrays.
    pub fn max_deviation(&self, other: &JointState) -> f64 {
        self.ca
            .iter()
            .zip(&other.ca)
            .chain(self.cb.iter().zip(&other.cb))
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

/// Time-evolved amplitudes from the closed-form manifold solution.
pub fn evolve_closed_form(params: &SystemParams) -> Result<JointState> {
    if params.g == 0.0 && params.delta == 0.0 {
        return Err(Error::DegenerateParameters);
    }
    let mut state = JointState::initial(params);
    let (delta, g, t) = (params.delta, params.g, params.t);
    let phase = Complex64::from_polar(1.0, 0.5 * delta * t);
    for n in 0..=params.n_max {
        let omega = rabi_frequency(n, params);
        let (sin, cos) = (0.5 * omega * t).sin_cos();
        let c0 = state.ca[n];
        state.ca[n] = c0 * Complex64::new(cos, -delta / omega * sin) * phase;
        state.cb[n] =
            -c0 * Complex64::new(0.0, 2.0 * g * (n as f64 + 1.0).sqrt() / omega * sin) * phase;
    }
    Ok(state)
}

/// Population of manifold `n`: `|c_{a,n}|² + |c_{b,n+1}|²`.
pub fn manifold_probability(state: &JointState, n: usize) -> Result<f64> {
    state.check_index(n)?;
    Ok(state.ca[n].norm_sqr() + state.cb[n].norm_sqr())
}
