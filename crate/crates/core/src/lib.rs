//! Cavity-field state produced by a classically driven two-level atom coupled to
//! a single cavity mode, and its nonclassicality diagnostics.
//!
//! - [`model`]: parameters and closed-form manifold amplitudes.
//! - [`oracle`]: RK4 integration of the equations of motion and field density matrices.
//! - [`observables`]: photon number distribution, moments, Mandel's Q, squeezing.
//! - [`wigner`]: Wigner function by displaced-Fock series and by displaced parity.
//! - [`cli`]: CSV commands behind the `cavity-field` binary.
//!
//! ```
//! use cavity_field::{SystemParams, evolve_closed_form, reduced_density_matrix, mandel_q};
//! use num_complex::Complex64;
//!
//! let params = SystemParams::resonant(Complex64::new(1.0, 0.0), 1.0).unwrap();
//! let state = evolve_closed_form(&params).unwrap();
//! let rho = reduced_density_matrix(&state);
//! assert!(mandel_q(&rho).unwrap() > -1.0);
//! ```

pub mod cli;
pub mod error;
pub mod expm;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod wigner;

pub use error::{Error, Result};
pub use model::{
    coherent_amplitude, evolve_closed_form, manifold_probability, rabi_frequency, JointState,
    SystemParams,
};
pub use observables::{
    field_moments, mandel_q, mandel_q_paper, photon_number_distribution, squeezing_paper,
    squeezing_parameters, FieldMoments, ObservableReport, Squeezing,
};
pub use oracle::{
    integrate_schrodinger, integrate_with, manifold_density_matrix, paper_density_matrix,
    reduced_density_matrix, validate_density, DensityDiagnostics, DensityMatrix, EquationsOfMotion,
    Provenance,
};
pub use wigner::{
    displaced_fock_overlap, laguerre_assoc, min_wigner, wigner_grid, wigner_parity_oracle,
    wigner_series, GridWindow, WignerGrid, WignerMinimum,
};
