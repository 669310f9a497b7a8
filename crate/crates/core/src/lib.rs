//! Two-mode photonic states in the Fock basis, their relative phase
//! distribution, and the Fisher information carried by that distribution.
//!
//! The crate is organised bottom-up:
//!
//! * [`quadrature`]: adaptive Gauss–Kronrod and periodic trapezoid engines.
//! * [`states`]: builders for the interferometric state families, the phase
//!   shift, and an independent beam-splitter expansion used as an oracle.
//! * [`phasedist`]: the relative phase density `P(φ)`, its derivative, grids
//!   and widths.
//! * [`fisher`]: quantum Fisher information, the Fisher information of the
//!   phase density, the Bhattacharyya fidelity and the Cramér–Rao bound.
//! * [`sweep`]: N-sweeps, figure bundles and the cross-family comparison,
//!   with the CSV/JSON formatting used by the `relphase` binary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fisher;
pub mod format;
pub mod numeric;
pub mod phasedist;
pub mod quadrature;
pub mod states;
pub mod sweep;

pub use error::{Error, Result};
pub use fisher::{
    bhattacharyya_fidelity, cramer_rao_min, fidelity_curvature_check, fisher_lss, fisher_quantum,
    fisher_quantum_analytic, EstimationBound, FisherReport,
};
pub use phasedist::{
    eval_dp, eval_p, phase_width, sample_grid, uncertainty_product, PhaseDistribution, PhaseSample,
};
pub use quadrature::{
    integrate_adaptive, integrate_adaptive_points, integrate_periodic, QuadResult,
};
pub use states::{
    apply_phase_shift, photon_moments, Family, Regime, SqueezedCoherent, StateSpec,
    TwoModeFockState,
};

/// Complex probability amplitude. Serialises as `[re, im]`.
pub type ComplexAmplitude = num_complex::Complex64;
