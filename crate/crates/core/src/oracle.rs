//! Independent reference path: direct integration of the manifold equations
//! of motion, and the field density matrices built from a joint state.

use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{JointState, SystemParams};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Steps per tabulated block of interaction-picture phases.
const PHASE_CHUNK: usize = 4096;

/// Which coupled equations the integrator solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EquationsOfMotion {
    /// `i ċ_{a,n} = κ_n e^{iδt} b̃_n`, `i ḃ̃_n = κ_n e^{−iδt} c_{a,n}` with
    /// `κ_n = g√(n+1)` and `c_{b,n+1} = b̃_n e^{iδt}`. These are the equations
    /// the closed-form amplitudes actually satisfy.
    #[default]
    Matched,
    /// `i ċ_{a,n} = (g√(n+1)/2) e^{−iδt} c_{b,n+1}`,
    /// `i ċ_{b,n+1} = (g√(n+1)/2) e^{iδt} c_{a,n}`, taken verbatim. They run at
    /// half the closed-form Rabi frequency; kept for discrepancy reports.
    Literal,
}

/// Step size used by the cross-checks: `10⁻³ / max(1, Ω_{n_max})`.
pub fn default_step(params: &SystemParams) -> f64 {
    1e-3 / params.max_rabi_frequency().max(1.0)
}

/// Largest step accepted by [`integrate_schrodinger`].
pub fn max_step(params: &SystemParams) -> f64 {
    (0.01 / params.max_rabi_frequency()).min(0.01)
}

/// Integrate with the [`EquationsOfMotion::Matched`] equations.
pub fn integrate_schrodinger(params: &SystemParams, dt: f64) -> Result<JointState> {
    integrate_with(params, dt, EquationsOfMotion::Matched)
}

/// Classical fixed-step RK4 on every two-level manifold, from 0 to `params.t`.
///
/// The step is shrunk to `t / ceil(t / dt)` so the final time is hit exactly.
pub fn integrate_with(
    params: &SystemParams,
    dt: f64,
    eom: EquationsOfMotion,
) -> Result<JointState> {
    if params.g == 0.0 && params.delta == 0.0 {
        return Err(Error::DegenerateParameters);
    }
    let limit = max_step(params);
    if !(dt > 0.0 && dt <= limit) {
        return Err(Error::StepSize { dt, limit });
    }
    let initial = JointState::initial(params);
    if params.t == 0.0 {
        return Ok(initial);
    }
    let steps = (params.t / dt).ceil() as usize;
    let h = params.t / steps as f64;
    let delta = params.delta;

    let sign = match eom {
        EquationsOfMotion::Matched => 1.0,
        EquationsOfMotion::Literal => -1.0,
    };
    let phase = |t: f64| Complex64::from_polar(1.0, sign * delta * t);
    let kappas: Vec<f64> = (0..initial.ca.len())
        .map(|n| match eom {
            EquationsOfMotion::Matched => params.g * (n as f64 + 1.0).sqrt(),
            EquationsOfMotion::Literal => 0.5 * params.g * (n as f64 + 1.0).sqrt(),
        })
        .collect();

    // y = (c_a, c_b) in the integration frame, ẏ = −iκ (e^{iσδt} b, e^{−iσδt} a).
    // The phases do not depend on n, so they are tabulated per chunk of steps
    // and shared by every manifold.
    let mut y: Vec<(Complex64, Complex64)> = initial.ca.iter().map(|&a| (a, ZERO)).collect();
    let mut table = Vec::with_capacity(PHASE_CHUNK);
    let mut step = 0;
    while step < steps {
        let end = (step + PHASE_CHUNK).min(steps);
        table.clear();
        table.extend((step..end).map(|k| {
            let t = k as f64 * h;
            [phase(t), phase(t + 0.5 * h), phase((k + 1) as f64 * h)]
        }));
        y.par_iter_mut().zip(&kappas).for_each(|((a, b), &kappa)| {
            let mik = Complex64::new(0.0, -kappa);
            let f = |ph: Complex64, a: Complex64, b: Complex64| (mik * ph * b, mik * ph.conj() * a);
            let (mut ya, mut yb) = (*a, *b);
            for [p0, pm, p1] in &table {
                let (k1a, k1b) = f(*p0, ya, yb);
                let (k2a, k2b) = f(*pm, ya + k1a * (0.5 * h), yb + k1b * (0.5 * h));
                let (k3a, k3b) = f(*pm, ya + k2a * (0.5 * h), yb + k2b * (0.5 * h));
                let (k4a, k4b) = f(*p1, ya + k3a * h, yb + k3b * h);
                ya += (k1a + (k2a + k3a) * 2.0 + k4a) * (h / 6.0);
                yb += (k1b + (k2b + k3b) * 2.0 + k4b) * (h / 6.0);
            }
            (*a, *b) = (ya, yb);
        });
        step = end;
    }
    let evolved = y.into_iter().map(|(a, b)| match eom {
        EquationsOfMotion::Matched => (a, b * Complex64::from_polar(1.0, delta * params.t)),
        EquationsOfMotion::Literal => (a, b),
    });

    let mut state = initial;
    let before = state.norm_sqr();
    for (n, (a, b)) in evolved.enumerate() {
        state.ca[n] = a;
        state.cb[n] = b;
    }
    let deviation = (state.norm_sqr() - before).abs();
    if deviation > 1e-6 {
        return Err(Error::NonConvergence { deviation });
    }
    Ok(state)
}

/// How a [`DensityMatrix`] was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Partial trace of the joint state over the atom.
    ExactTrace,
    /// The published single-sum expansion, including `|n⟩⟨n+1|` terms weighted by
    /// `c_{a,n} c*_{b,n+1}` and omitting coherences between different manifolds.
    LiteralExpansion,
    /// Normalized diagonal field state of one manifold.
    SingleManifold(usize),
    /// Supplied directly by the caller.
    External,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::ExactTrace => write!(f, "exact-trace"),
            Provenance::LiteralExpansion => write!(f, "literal-expansion"),
            Provenance::SingleManifold(n) => write!(f, "single-manifold(n={n})"),
            Provenance::External => write!(f, "external"),
        }
    }
}

/// Field density matrix over `|0⟩..|dim−1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub elements: Array2<Complex64>,
    pub provenance: Provenance,
}

impl DensityMatrix {
    pub fn new(elements: Array2<Complex64>, provenance: Provenance) -> Result<Self> {
        if elements.nrows() != elements.ncols() || elements.nrows() == 0 {
            return Err(Error::InvalidParameter {
                name: "elements",
                reason: format!(
                    "expected a non-empty square matrix, got {:?}",
                    elements.dim()
                ),
            });
        }
        Ok(Self {
            elements,
            provenance,
        })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &[Complex64]) -> Self {
        let dim = psi.len();
        let elements = Array2::from_shape_fn((dim, dim), |(m, n)| psi[m] * psi[n].conj());
        Self {
            elements,
            provenance: Provenance::External,
        }
    }

    /// Fock state `|n⟩⟨n|` in a basis of size `dim > n`.
    pub fn fock(n: usize, dim: usize) -> Self {
        assert!(n < dim, "Fock index {n} outside basis of size {dim}");
        let mut elements = Array2::zeros((dim, dim));
        elements[[n, n]] = Complex64::new(1.0, 0.0);
        Self {
            elements,
            provenance: Provenance::External,
        }
    }

    /// Truncated (not renormalized) coherent state `|α⟩⟨α|`.
    pub fn coherent(alpha: Complex64, dim: usize) -> Self {
        let psi: Vec<_> = (0..dim)
            .map(|n| crate::model::coherent_amplitude(n, alpha))
            .collect();
        Self::pure(&psi)
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    /// Basis truncation in the joint-state convention (`dim = n_max + 2`).
    pub fn n_max(&self) -> usize {
        self.dim().saturating_sub(2)
    }

    pub fn trace(&self) -> Complex64 {
        self.elements.diag().sum()
    }

    /// One past the largest index with a non-zero row or column.
    pub fn support(&self) -> usize {
        let dim = self.dim();
        (0..dim)
            .rev()
            .find(|&k| {
                (0..dim).any(|j| self.elements[[k, j]] != ZERO || self.elements[[j, k]] != ZERO)
            })
            .map_or(0, |k| k + 1)
    }
}

/// `Tr_atom |ψ⟩⟨ψ|`: `ρ_{mn} = c_{a,m} c*_{a,n} + c_{b,m} c*_{b,n}` in photon indexing.
pub fn reduced_density_matrix(state: &JointState) -> DensityMatrix {
    let dim = state.n_max() + 2;
    let a = |k: usize| state.ca.get(k).copied().unwrap_or_default();
    let elements = Array2::from_shape_fn((dim, dim), |(m, n)| {
        a(m) * a(n).conj() + state.cb_at_photon(m) * state.cb_at_photon(n).conj()
    });
    DensityMatrix {
        elements,
        provenance: Provenance::ExactTrace,
    }
}

/// The four-term single-sum expansion, term by term as published.
pub fn paper_density_matrix(state: &JointState) -> DensityMatrix {
    let dim = state.n_max() + 2;
    let mut rho = Array2::zeros((dim, dim));
    for (n, (&ca, &cb)) in state.ca.iter().zip(&state.cb).enumerate() {
        rho[[n, n]] += ca.norm_sqr();
        rho[[n, n + 1]] += ca * cb.conj();
        rho[[n + 1, n]] += ca.conj() * cb;
        rho[[n + 1, n + 1]] += cb.norm_sqr();
    }
    DensityMatrix {
        elements: rho,
        provenance: Provenance::LiteralExpansion,
    }
}

/// `(|c_{a,n}|²|n⟩⟨n| + |c_{b,n+1}|²|n+1⟩⟨n+1|)` normalized to unit trace.
///
/// The weights are rescaled by the larger amplitude before squaring, so
/// manifolds with probabilities far below `1e-30` (high `n`, small `α`) still
/// normalize exactly. Only a manifold whose amplitudes are both zero or
/// subnormal is rejected.
pub fn manifold_density_matrix(state: &JointState, n: usize) -> Result<DensityMatrix> {
    if n > state.n_max() {
        return Err(Error::IndexOutOfRange {
            index: n,
            max: state.n_max(),
        });
    }
    let (ra, rb) = (state.ca[n].norm(), state.cb[n].norm());
    let scale = ra.max(rb);
    if !(scale >= f64::MIN_POSITIVE && scale.is_finite()) {
        return Err(Error::EmptyManifold(n));
    }
    let (wa, wb) = ((ra / scale).powi(2), (rb / scale).powi(2));
    let total = wa + wb;
    let dim = state.n_max() + 2;
    let mut rho = Array2::zeros((dim, dim));
    rho[[n, n]] = Complex64::new(wa / total, 0.0);
    rho[[n + 1, n + 1]] = Complex64::new(wb / total, 0.0);
    Ok(DensityMatrix {
        elements: rho,
        provenance: Provenance::SingleManifold(n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityDiagnostics {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_diagonal: f64,
}

pub fn validate_density(rho: &DensityMatrix) -> DensityDiagnostics {
    let e = &rho.elements;
    let dim = rho.dim();
    let mut hermiticity_error: f64 = 0.0;
    for m in 0..dim {
        for n in 0..dim {
            hermiticity_error = hermiticity_error.max((e[[m, n]] - e[[n, m]].conj()).norm());
        }
    }
    DensityDiagnostics {
        trace_error: (rho.trace() - 1.0).norm(),
        hermiticity_error,
        min_diagonal: e.diag().iter().map(|z| z.re).fold(f64::INFINITY, f64::min),
    }
}
