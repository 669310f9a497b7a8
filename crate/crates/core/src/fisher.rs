//! Fisher information of phase sensing with two-mode states.
//!
//! * `F_Q = 4 Var(n_a)`: quantum Fisher information for `e^{i n̂_a θ}`.
//! * `F_LSS = ∫ (P′)²/P dφ`: Fisher information of the relative phase
//!   density under shifts of `φ`.
//! * The Bhattacharyya fidelity `∫ √(P(φ) P(φ+δ)) dφ ≈ 1 − F_LSS δ²/8`
//!   gives a second, quadrature-independent route to `F_LSS`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{format_g12, format_opt};
use crate::phasedist::PhaseDistribution;
use crate::quadrature::{
    integrate_adaptive_points, integrate_adaptive_with, AdaptiveOptions, QuadResult,
    DEFAULT_MAX_DEPTH,
};
use crate::states::wrap_angle;
use crate::states::{photon_moments, StateSpec, TwoModeFockState};

/// Default tolerance for [`fisher_lss`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relaxed tolerance for long sweeps.
pub const SWEEP_TOL: f64 = 1e-7;

/// Phase offsets for the fidelity curvature extrapolation.
pub const CURVATURE_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherReport {
    #[serde(rename = "n")]
    pub n_total: usize,
    pub f_q: f64,
    pub f_q_analytic: Option<f64>,
    pub f_lss: f64,
    pub quad_error: f64,
    /// `|F_LSS − F_Q| / F_Q`; the absolute difference when `F_Q = 0`.
    pub rel_diff: f64,
}

impl FisherReport {
    pub fn compute(
        state: &TwoModeFockState,
        f_q_analytic: Option<f64>,
        tol: f64,
    ) -> Result<FisherReport> {
        let f_q = fisher_quantum(state);
        let (f_lss, quad_error) = fisher_lss(state, tol)?;
        let diff = (f_lss - f_q).abs();
        Ok(FisherReport {
            n_total: state.n_total(),
            f_q,
            f_q_analytic,
            f_lss,
            quad_error,
            rel_diff: if f_q > 0.0 { diff / f_q } else { diff },
        })
    }

    pub const CSV_HEADER: &'static str = "n,f_q,f_q_analytic,f_lss,quad_error,rel_diff";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n_total,
            format_g12(self.f_q),
            format_opt(self.f_q_analytic),
            format_g12(self.f_lss),
            format_g12(self.quad_error),
            format_g12(self.rel_diff),
        )
    }

    pub fn for_spec(spec: &StateSpec, tol: f64) -> Result<FisherReport> {
        let state = spec.build()?;
        FisherReport::compute(&state, fisher_quantum_analytic(spec), tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimationBound {
    pub delta_theta_min: f64,
    pub repetitions_p: u64,
}

/// `4 (⟨n_a²⟩ − ⟨n_a⟩²)`.
pub fn fisher_quantum(state: &TwoModeFockState) -> f64 {
    4.0 * photon_moments(state).1
}

/// Closed-form `F_Q` where one is known: `N` for a Fock input, `N²` for
/// NOON, `(N² + 2N)/3` for phase states.
pub fn fisher_quantum_analytic(spec: &StateSpec) -> Option<f64> {
    match *spec {
        StateSpec::FockOneInput { n } => Some(n as f64),
        StateSpec::Noon { n } => Some((n * n) as f64),
        StateSpec::PhaseState { n, .. } => {
            let n = n as f64;
            Some((n * n + 2.0 * n) / 3.0)
        }
        _ => None,
    }
}

fn panels_for(dist: &PhaseDistribution) -> usize {
    8.max(2 * dist.n_total())
}

/// `∫_{−π}^{π} (P′)²/P dφ` with its quadrature error estimate; the estimate
/// is at most `tol · max(1, value)`.
pub fn fisher_lss(state: &TwoModeFockState, tol: f64) -> Result<(f64, f64)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let dist = PhaseDistribution::new(state);
    let opts = AdaptiveOptions {
        abs_tol: tol,
        rel_tol: tol,
        max_depth: DEFAULT_MAX_DEPTH,
        initial_panels: panels_for(&dist),
        ..AdaptiveOptions::default()
    };
    let r = integrate_adaptive_with(|phi| dist.fisher_integrand(phi), -PI, PI, &opts)?;
    require_converged(&r, tol * r.value.abs().max(1.0))?;
    Ok((r.value, r.error_estimate))
}

fn require_converged(r: &QuadResult, target: f64) -> Result<()> {
    if r.converged {
        Ok(())
    } else {
        Err(Error::NonConvergence {
            error_estimate: r.error_estimate,
            target,
            worst_interval: r.worst_interval,
        })
    }
}

/// `1 − F(δ) = ½ ∫ (√P(φ+δ) − √P(φ))² dφ`, valid for a normalised `P`.
/// Integrating the squared difference keeps full relative precision for
/// small `δ`. `minima` are the minima of `P`; `√P` can only kink there, so
/// they and their copies shifted by `−δ` become panel edges.
fn hellinger_gap(dist: &PhaseDistribution, minima: &[f64], delta: f64) -> Result<f64> {
    if delta == 0.0 {
        return Ok(0.0);
    }
    let mut breakpoints = minima.to_vec();
    breakpoints.extend(minima.iter().map(|&z| wrap_angle(z - delta)));
    let opts = AdaptiveOptions {
        abs_tol: 1e-16,
        rel_tol: 1e-11,
        max_depth: DEFAULT_MAX_DEPTH,
        initial_panels: panels_for(dist),
        ..AdaptiveOptions::default()
    };
    let r = integrate_adaptive_points(
        |phi| {
            let d = dist.sqrt_p(phi + delta) - dist.sqrt_p(phi);
            0.5 * d * d
        },
        -PI,
        PI,
        &breakpoints,
        &opts,
    )?;
    require_converged(&r, opts.abs_tol.max(opts.rel_tol * r.value.abs()))?;
    Ok(r.value)
}

/// `∫ √(P(φ) P(φ+δ)) dφ`, in `[0, 1]`.
pub fn bhattacharyya_fidelity(state: &TwoModeFockState, delta_phi: f64) -> Result<f64> {
    if !delta_phi.is_finite() {
        return Err(Error::InvalidArgument("phase offset must be finite".into()));
    }
    let dist = PhaseDistribution::new(state);
    Ok((1.0 - hellinger_gap(&dist, &dist.local_minima(), delta_phi)?).clamp(0.0, 1.0))
}

/// `lim_{δ→0} 8 (1 − F(δ)) / δ²` from [`CURVATURE_STEPS`].
///
/// Zeros of the amplitude sum make `√P` kink, which adds an `O(|δ|)` term
/// to `8(1 − F)/δ²` next to the `O(δ²)` one; the two Richardson levels
/// remove those two orders in turn.
pub fn fidelity_curvature_check(state: &TwoModeFockState) -> Result<f64> {
    let dist = PhaseDistribution::new(state);
    let minima = dist.local_minima();
    let mut g = [0.0; 3];
    for (slot, &delta) in g.iter_mut().zip(CURVATURE_STEPS.iter()) {
        *slot = 8.0 * hellinger_gap(&dist, &minima, delta)? / (delta * delta);
    }
    let first = [2.0 * g[1] - g[0], 2.0 * g[2] - g[1]];
    Ok((4.0 * first[1] - first[0]) / 3.0)
}

/// `Δθ_min = 1/√(p F)`.
pub fn cramer_rao_min(f: f64, p: u64) -> Result<EstimationBound> {
    if !(f > 0.0) || !f.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Fisher information must be positive and finite, got {f}"
        )));
    }
    if p == 0 {
        return Err(Error::InvalidArgument(
            "need at least one repetition".into(),
        ));
    }
    Ok(EstimationBound {
        delta_theta_min: (p as f64 * f).sqrt().recip(),
        repetitions_p: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        build_fock_one_input, build_noon, build_phase_state, build_twin_fock, Family,
    };

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn quantum_fisher_reference_values() {
        assert!(rel(fisher_quantum(&build_fock_one_input(10).unwrap()), 10.0) < 1e-12);
        assert!(rel(fisher_quantum(&build_noon(10).unwrap()), 100.0) < 1e-12);
        assert!(rel(fisher_quantum(&build_phase_state(10, 0.0).unwrap()), 40.0) < 1e-12);
    }

    #[test]
    fn analytic_values() {
        assert_eq!(
            fisher_quantum_analytic(&StateSpec::Noon { n: 7 }),
            Some(49.0)
        );
        assert_eq!(
            fisher_quantum_analytic(&StateSpec::PhaseState { n: 1, phi0: 0.0 }),
            Some(1.0)
        );
        assert_eq!(
            fisher_quantum_analytic(&StateSpec::TwinFock { n: 10 }),
            None
        );
        assert_eq!(Family::TwinFock.reference_curve(10.0), Some(60.0));
    }

    #[test]
    fn lss_fisher_of_noon_and_fock() {
        let (v, e) = fisher_lss(&build_noon(10).unwrap(), DEFAULT_TOL).unwrap();
        assert!(rel(v, 100.0) < 1e-6, "{v}");
        assert!(e <= DEFAULT_TOL * v.max(1.0));
        let (v, _) = fisher_lss(&build_fock_one_input(10).unwrap(), DEFAULT_TOL).unwrap();
        assert!(rel(v, 10.0) < 1e-6, "{v}");
        let (v, _) = fisher_lss(&build_phase_state(10, 0.0).unwrap(), DEFAULT_TOL).unwrap();
        assert!(rel(v, 40.0) < 2e-3, "{v}");
    }

    #[test]
    fn lss_fisher_of_a_flat_density_is_zero() {
        let (v, _) = fisher_lss(&TwoModeFockState::basis(5, 1).unwrap(), DEFAULT_TOL).unwrap();
        assert!(v.abs() < 1e-12);
        assert!(fisher_lss(&TwoModeFockState::basis(5, 1).unwrap(), 0.0).is_err());
    }

    #[test]
    fn fidelity_identities() {
        let s = build_twin_fock(10).unwrap();
        assert_eq!(bhattacharyya_fidelity(&s, 0.0).unwrap(), 1.0);
        let f = bhattacharyya_fidelity(&s, 0.3).unwrap();
        assert!(f < 1.0 && f > 0.0);
        for n in [2usize, 5, 10] {
            let noon = build_noon(n).unwrap();
            let f = bhattacharyya_fidelity(&noon, 2.0 * PI / n as f64).unwrap();
            assert!((f - 1.0).abs() < 1e-10, "N={n}: {f}");
        }
    }

    #[test]
    fn fidelity_expansion_for_twin_fock() {
        let s = build_twin_fock(10).unwrap();
        let (f_lss, _) = fisher_lss(&s, DEFAULT_TOL).unwrap();
        for delta in [1e-2, 3e-3, 1e-3] {
            let f = bhattacharyya_fidelity(&s, delta).unwrap();
            let predicted = 1.0 - f_lss * delta * delta / 8.0;
            // Next order is |δ|³ from the kinks of √P.
            assert!((f - predicted).abs() < 50.0 * delta.powi(3), "δ={delta}");
        }
    }

    #[test]
    fn curvature_reproduces_lss_fisher() {
        let noon = fidelity_curvature_check(&build_noon(10).unwrap()).unwrap();
        assert!(rel(noon, 100.0) < 1e-4, "{noon}");
        let phase = fidelity_curvature_check(&build_phase_state(4, 0.0).unwrap()).unwrap();
        assert!(rel(phase, 8.0) < 1e-4, "{phase}");
        let flat = fidelity_curvature_check(&TwoModeFockState::basis(3, 0).unwrap()).unwrap();
        assert!(flat.abs() < 1e-9);
    }

    #[test]
    fn cramer_rao() {
        assert!((cramer_rao_min(100.0, 1).unwrap().delta_theta_min - 0.1).abs() < 1e-15);
        let nbar = 25.0;
        assert!((cramer_rao_min(nbar, 1).unwrap().delta_theta_min - 0.2).abs() < 1e-15);
        assert!((cramer_rao_min(nbar * nbar, 1).unwrap().delta_theta_min - 0.04).abs() < 1e-15);
        let b = cramer_rao_min(37.0, 9).unwrap();
        assert!((b.delta_theta_min * (9.0f64 * 37.0).sqrt() - 1.0).abs() < 1e-15);
        assert!(cramer_rao_min(0.0, 1).is_err());
        assert!(cramer_rao_min(-1.0, 1).is_err());
        assert!(cramer_rao_min(1.0, 0).is_err());
    }

    #[test]
    fn report_fields() {
        let r = FisherReport::for_spec(&StateSpec::Noon { n: 6 }, DEFAULT_TOL).unwrap();
        assert_eq!(r.n_total, 6);
        assert_eq!(r.f_q_analytic, Some(36.0));
        assert!(r.rel_diff < 1e-8 && r.quad_error >= 0.0);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with("{\"n\":6,\"f_q\":"), "{json}");
        assert!(r.csv_row().starts_with("6,36,36,"), "{}", r.csv_row());
    }
}
