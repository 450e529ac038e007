//! Photon statistics and quadrature squeezing.
//!
//! Exact-mode functions work on any [`DensityMatrix`] through ladder-operator
//! matrix elements. The `*_paper` functions evaluate the published
//! single-manifold expressions literally, using the unnormalized manifold
//! weights `|c_{a,n}|²` and `|c_{b,n+1}|²`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{coherent_amplitude, JointState, SystemParams};
use crate::oracle::DensityMatrix;

/// Edge population above which `⟨a†²a²⟩` is considered unreliable.
pub const TRUNCATION_GUARD: f64 = 1e-8;

/// `⟨a†a⟩` below which Mandel's Q is undefined.
pub const VACUUM_THRESHOLD: f64 = 1e-15;

pub fn photon_number_distribution(rho: &DensityMatrix, n: usize) -> Result<f64> {
    if n >= rho.dim() {
        return Err(Error::IndexOutOfRange {
            index: n,
            max: rho.dim() - 1,
        });
    }
    Ok(rho.elements[[n, n]].re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldMoments {
    /// `⟨a⟩`
    pub a_mean: Complex64,
    /// `⟨a†⟩`
    pub adag_mean: Complex64,
    /// `⟨a†a⟩`
    pub n_mean: f64,
    /// `⟨a²⟩`
    pub a2_mean: Complex64,
    /// `⟨a†²a²⟩`
    pub n2_moment: f64,
    /// Population of the last basis state.
    pub edge_population: f64,
}

impl FieldMoments {
    pub fn truncation_warning(&self) -> bool {
        self.edge_population > TRUNCATION_GUARD
    }
}

/// Expectations via `a|n⟩ = √n |n−1⟩` on the truncated basis.
pub fn field_moments(rho: &DensityMatrix) -> FieldMoments {
    let e = &rho.elements;
    let dim = rho.dim();
    let mut a_mean = Complex64::new(0.0, 0.0);
    let mut a2_mean = Complex64::new(0.0, 0.0);
    let mut n_mean = 0.0;
    let mut n2_moment = 0.0;
    for m in 0..dim {
        let mf = m as f64;
        let p = e[[m, m]].re;
        n_mean += mf * p;
        n2_moment += mf * (mf - 1.0) * p;
        if m >= 1 {
            a_mean += e[[m, m - 1]] * mf.sqrt();
        }
        if m >= 2 {
            a2_mean += e[[m, m - 2]] * (mf * (mf - 1.0)).sqrt();
        }
    }
    FieldMoments {
        a_mean,
        adag_mean: a_mean.conj(),
        n_mean,
        a2_mean,
        n2_moment,
        edge_population: e[[dim - 1, dim - 1]].re,
    }
}

/// `Q = (⟨a†²a²⟩ − ⟨a†a⟩²) / ⟨a†a⟩`. Negative values are sub-Poissonian.
pub fn mandel_q(rho: &DensityMatrix) -> Result<f64> {
    q_from_moments(&field_moments(rho))
}

fn q_from_moments(m: &FieldMoments) -> Result<f64> {
    if m.n_mean <= VACUUM_THRESHOLD {
        return Err(Error::VacuumField(m.n_mean));
    }
    Ok((m.n2_moment - m.n_mean * m.n_mean) / m.n_mean)
}

fn manifold_weights(state: &JointState, n: usize) -> Result<(f64, f64)> {
    if n > state.n_max() {
        return Err(Error::IndexOutOfRange {
            index: n,
            max: state.n_max(),
        });
    }
    Ok((state.ca[n].norm_sqr(), state.cb[n].norm_sqr()))
}

/// The published closed-form Q for manifold `n`:
/// `[n(n−1)A + (n+1)nB] / [nA + (n+1)B] − (nA + (n+1)B)`
/// with `A = |c_{a,n}|²`, `B = |c_{b,n+1}|²` left unnormalized.
pub fn mandel_q_paper(state: &JointState, n: usize) -> Result<f64> {
    let (a, b) = manifold_weights(state, n)?;
    let nf = n as f64;
    let mean = nf * a + (nf + 1.0) * b;
    if mean <= VACUUM_THRESHOLD {
        return Err(Error::ZeroDenominator(n));
    }
    Ok((nf * (nf - 1.0) * a + (nf + 1.0) * nf * b) / mean - mean)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Squeezing {
    pub s_x: f64,
    pub s_p: f64,
}

impl Squeezing {
    fn from_expectations(n_mean: f64, a: Complex64, a2: Complex64) -> Self {
        let adag = a.conj();
        let a2dag = a2.conj();
        let s_x = 2.0 * n_mean + a2 + a2dag - a * a - adag * adag - 2.0 * a * adag;
        let s_p = 2.0 * n_mean - a2 - a2dag + a * a + adag * adag - 2.0 * a * adag;
        Self {
            s_x: s_x.re,
            s_p: s_p.re,
        }
    }

    /// `−1 < s < 0` in either quadrature.
    pub fn is_squeezed(&self) -> bool {
        (self.s_x > -1.0 && self.s_x < 0.0) || (self.s_p > -1.0 && self.s_p < 0.0)
    }
}

/// `s_x = 4⟨(Δx̂)²⟩ − 1`, `s_p = 4⟨(Δp̂)²⟩ − 1` with `x̂ = (a+a†)/2`, `p̂ = (a−a†)/2i`.
pub fn squeezing_parameters(rho: &DensityMatrix) -> Squeezing {
    let m = field_moments(rho);
    Squeezing::from_expectations(m.n_mean, m.a_mean, m.a2_mean)
}

/// Squeezing from the single-manifold expectations
/// `⟨a²⟩ = 0`, `⟨a⟩ = √(n+1) c*_{a,n} c_{b,n+1}`, `⟨a†a⟩ = nA + (n+1)B`.
pub fn squeezing_paper(state: &JointState, n: usize) -> Result<Squeezing> {
    let (a, b) = manifold_weights(state, n)?;
    let nf = n as f64;
    let mean = nf * a + (nf + 1.0) * b;
    let a_mean = (nf + 1.0).sqrt() * state.ca[n].conj() * state.cb[n];
    Ok(Squeezing::from_expectations(
        mean,
        a_mean,
        Complex64::new(0.0, 0.0),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportMode {
    Paper,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Real(f64),
    Complex(Complex64),
}

/// Named scalar observables.
///
/// Keys: `p(n)`, `mean_n`, `n2_moment`, `a_mean`, `a2_mean`, `Q`, `s_x`, `s_p`.
/// `Q` is absent when it is undefined for the input.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableReport {
    pub mode: ReportMode,
    pub values: BTreeMap<&'static str, Scalar>,
    pub params_echo: SystemParams,
}

impl ObservableReport {
    /// Closed-form observables of manifold `n`; `p(n)` is `|c_n(0)|²`.
    pub fn paper(state: &JointState, n: usize) -> Result<Self> {
        let (a, b) = manifold_weights(state, n)?;
        let nf = n as f64;
        let sq = squeezing_paper(state, n)?;
        let mut values = BTreeMap::new();
        values.insert(
            "p(n)",
            Scalar::Real(coherent_amplitude(n, state.params.alpha).norm_sqr()),
        );
        values.insert("mean_n", Scalar::Real(nf * a + (nf + 1.0) * b));
        values.insert(
            "n2_moment",
            Scalar::Real(nf * (nf - 1.0) * a + (nf + 1.0) * nf * b),
        );
        values.insert(
            "a_mean",
            Scalar::Complex((nf + 1.0).sqrt() * state.ca[n].conj() * state.cb[n]),
        );
        values.insert("a2_mean", Scalar::Complex(Complex64::new(0.0, 0.0)));
        if let Ok(q) = mandel_q_paper(state, n) {
            values.insert("Q", Scalar::Real(q));
        }
        values.insert("s_x", Scalar::Real(sq.s_x));
        values.insert("s_p", Scalar::Real(sq.s_p));
        Ok(Self {
            mode: ReportMode::Paper,
            values,
            params_echo: state.params,
        })
    }

    /// Observables of `rho`; `p(n)` is its diagonal at `n`.
    pub fn exact(rho: &DensityMatrix, n: usize, params: &SystemParams) -> Result<Self> {
        let m = field_moments(rho);
        let sq = squeezing_parameters(rho);
        let mut values = BTreeMap::new();
        values.insert("p(n)", Scalar::Real(photon_number_distribution(rho, n)?));
        values.insert("mean_n", Scalar::Real(m.n_mean));
        values.insert("n2_moment", Scalar::Real(m.n2_moment));
        values.insert("a_mean", Scalar::Complex(m.a_mean));
        values.insert("a2_mean", Scalar::Complex(m.a2_mean));
        if let Ok(q) = q_from_moments(&m) {
            values.insert("Q", Scalar::Real(q));
        }
        values.insert("s_x", Scalar::Real(sq.s_x));
        values.insert("s_p", Scalar::Real(sq.s_p));
        Ok(Self {
            mode: ReportMode::Exact,
            values,
            params_echo: *params,
        })
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        match self.values.get(key)? {
            Scalar::Real(x) => Some(*x),
            Scalar::Complex(_) => None,
        }
    }
}
