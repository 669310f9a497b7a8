//! Two-mode Fock-basis states with a fixed total photon number.
//!
//! A state `Σ_k A_k |k⟩_a |N−k⟩_b` is stored as its amplitude array
//! `A_0..=A_N`. Builders exist for the interferometric families (Fock input,
//! NOON, phase state, twin-Fock, correlated Fock, squeezed ⊗ coherent
//! projected onto a fixed photon number). Every builder output has its
//! global phase canonicalised: the largest amplitude is real and positive.

mod closed_form;
pub mod oracle;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::MAX_EXACT_PHOTONS;

pub use closed_form::{
    build_correlated_fock, build_fock_one_input, build_noon, build_phase_state,
    build_squeezed_coherent_projected, build_twin_fock, squeezing_parameters, SqueezingParameters,
    FOCK_INPUT_THETA_A, SQUEEZED_THETA_A,
};
pub use oracle::{beam_splitter_oracle, beam_splitter_oracle_terms, InputTerm};

/// Tolerance on `Σ|A_k|² = 1` for a state to count as normalised.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Largest total photon number accepted by the builders and the decoder.
pub const MAX_PHOTONS: usize = MAX_EXACT_PHOTONS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawState")]
pub struct TwoModeFockState {
    n_total: usize,
    amplitudes: Vec<Complex64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    n_total: usize,
    amplitudes: Vec<Complex64>,
}

impl TryFrom<RawState> for TwoModeFockState {
    type Error = Error;

    fn try_from(raw: RawState) -> Result<Self> {
        if raw.amplitudes.len() != raw.n_total.saturating_add(1) {
            return Err(Error::InvalidInput(format!(
                "expected {} amplitudes for n_total = {}, got {}",
                raw.n_total.saturating_add(1),
                raw.n_total,
                raw.amplitudes.len()
            )));
        }
        TwoModeFockState::new(raw.amplitudes)
    }
}

impl TwoModeFockState {
    /// Wraps an amplitude array `A_0..=A_N`; rejects non-finite entries,
    /// arrays longer than `MAX_PHOTONS + 1`, and norms off by more than
    /// [`NORM_TOLERANCE`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::checked(amplitudes)?;
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "amplitudes are not normalised: Σ|A|² = {norm_sqr}"
            )));
        }
        Ok(state)
    }

    /// Like [`new`](Self::new) but rescales to unit norm first.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut state = Self::checked(amplitudes)?;
        let norm_sqr = state.norm_sqr();
        if !(norm_sqr > 0.0) || !norm_sqr.is_finite() {
            return Err(Error::InvalidInput(format!(
                "cannot normalise amplitudes with Σ|A|² = {norm_sqr}"
            )));
        }
        let scale = norm_sqr.sqrt().recip();
        for a in &mut state.amplitudes {
            *a *= scale;
        }
        Ok(state)
    }

    fn checked(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidInput("amplitude array is empty".into()));
        }
        if amplitudes.len() > MAX_PHOTONS + 1 {
            return Err(Error::InvalidInput(format!(
                "at most {} photons are supported, got {}",
                MAX_PHOTONS,
                amplitudes.len() - 1
            )));
        }
        if let Some(k) = amplitudes
            .iter()
            .position(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::InvalidInput(format!("amplitude {k} is not finite")));
        }
        Ok(TwoModeFockState {
            n_total: amplitudes.len() - 1,
            amplitudes,
        })
    }

    /// The basis state `|k⟩_a |N−k⟩_b`.
    pub fn basis(n_total: usize, k: usize) -> Result<Self> {
        if k > n_total {
            return Err(Error::InvalidArgument(format!(
                "k = {k} exceeds N = {n_total}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_total + 1];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        TwoModeFockState::new(amplitudes)
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|A_k|²` for `k = 0..=N`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rotates the global phase so the largest amplitude is real positive.
    /// Near-ties resolve to the lowest `k`.
    pub fn canonicalized(mut self) -> Self {
        let max = self.amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return self;
        }
        let pivot = self
            .amplitudes
            .iter()
            .position(|a| a.norm() >= max * (1.0 - 1e-12))
            .expect("maximum exists");
        let a = self.amplitudes[pivot];
        let rotation = a.conj() / a.norm();
        for amp in &mut self.amplitudes {
            *amp *= rotation;
        }
        self.amplitudes[pivot] = Complex64::new(self.amplitudes[pivot].norm(), 0.0);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Multiplies `A_k` by `e^{ikθ}`, the evolution `e^{i n̂_a θ}`.
pub fn apply_phase_shift(state: &TwoModeFockState, theta: f64) -> TwoModeFockState {
    let amplitudes = state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(k, a)| a * Complex64::from_polar(1.0, k as f64 * theta))
        .collect();
    TwoModeFockState {
        n_total: state.n_total,
        amplitudes,
    }
}

/// Mean and variance of the photon number in mode `a`.
pub fn photon_moments(state: &TwoModeFockState) -> (f64, f64) {
    let probs = state.probabilities();
    let total: f64 = probs.iter().sum();
    let mean = probs
        .iter()
        .enumerate()
        .map(|(k, p)| k as f64 * p)
        .sum::<f64>()
        / total;
    let var = probs
        .iter()
        .enumerate()
        .map(|(k, p)| (k as f64 - mean).powi(2) * p)
        .sum::<f64>()
        / total;
    (mean, var)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `sinh² r = |α|² = N̄/2`.
    Optimal,
    /// `sinh² r = √N̄ / 2`, `|α|² = N̄ − sinh² r`.
    SqrtShot,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Optimal => "optimal",
            Regime::SqrtShot => "sqrt-shot",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "optimal" | "opt" => Ok(Regime::Optimal),
            "sqrt-shot" | "sqrtshot" | "sqrt" => Ok(Regime::SqrtShot),
            other => Err(Error::InvalidArgument(format!("unknown regime '{other}'"))),
        }
    }
}

/// Squeezed vacuum in `a′` and a coherent state in `b′`, projected onto
/// `N = n_bar` photons after the beam splitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezedCoherent {
    pub n_bar: usize,
    pub regime: Regime,
    #[serde(default)]
    pub theta_s: f64,
    #[serde(default)]
    pub theta_c: f64,
    /// Permit `θ_s − 2θ_c ≠ 0`.
    #[serde(default)]
    pub allow_phase_mismatch: bool,
}

impl SqueezedCoherent {
    pub fn new(n_bar: usize, regime: Regime) -> Self {
        SqueezedCoherent {
            n_bar,
            regime,
            theta_s: 0.0,
            theta_c: 0.0,
            allow_phase_mismatch: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum StateSpec {
    FockOneInput {
        n: usize,
    },
    Noon {
        n: usize,
    },
    PhaseState {
        n: usize,
        #[serde(default)]
        phi0: f64,
    },
    TwinFock {
        n: usize,
    },
    CorrelatedFock {
        n: usize,
    },
    SqueezedCoherent(SqueezedCoherent),
}

impl StateSpec {
    pub fn build(&self) -> Result<TwoModeFockState> {
        match *self {
            StateSpec::FockOneInput { n } => build_fock_one_input(n),
            StateSpec::Noon { n } => build_noon(n),
            StateSpec::PhaseState { n, phi0 } => build_phase_state(n, phi0),
            StateSpec::TwinFock { n } => build_twin_fock(n),
            StateSpec::CorrelatedFock { n } => build_correlated_fock(n),
            StateSpec::SqueezedCoherent(sc) => build_squeezed_coherent_projected(&sc),
        }
    }

    /// Total photon number of the built state.
    pub fn n_total(&self) -> usize {
        match *self {
            StateSpec::FockOneInput { n }
            | StateSpec::Noon { n }
            | StateSpec::PhaseState { n, .. }
            | StateSpec::TwinFock { n }
            | StateSpec::CorrelatedFock { n } => n,
            StateSpec::SqueezedCoherent(sc) => sc.n_bar,
        }
    }

    pub fn family(&self) -> Family {
        match self {
            StateSpec::FockOneInput { .. } => Family::Fock,
            StateSpec::Noon { .. } => Family::Noon,
            StateSpec::PhaseState { .. } => Family::Phase,
            StateSpec::TwinFock { .. } => Family::TwinFock,
            StateSpec::CorrelatedFock { .. } => Family::CorrelatedFock,
            StateSpec::SqueezedCoherent(sc) => match sc.regime {
                Regime::Optimal => Family::SqCohOptimal,
                Regime::SqrtShot => Family::SqCohSqrtShot,
            },
        }
    }
}

/// The seven state families compared by the sweep driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Fock,
    Noon,
    Phase,
    TwinFock,
    CorrelatedFock,
    SqCohOptimal,
    SqCohSqrtShot,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Fock,
        Family::Noon,
        Family::Phase,
        Family::TwinFock,
        Family::CorrelatedFock,
        Family::SqCohOptimal,
        Family::SqCohSqrtShot,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Fock => "fock",
            Family::Noon => "noon",
            Family::Phase => "phase",
            Family::TwinFock => "twin-fock",
            Family::CorrelatedFock => "correlated-fock",
            Family::SqCohOptimal => "sq-coh-optimal",
            Family::SqCohSqrtShot => "sq-coh-sqrt-shot",
        }
    }

    /// Default specification of the family at photon number `n`.
    pub fn spec(self, n: usize) -> StateSpec {
        match self {
            Family::Fock => StateSpec::FockOneInput { n },
            Family::Noon => StateSpec::Noon { n },
            Family::Phase => StateSpec::PhaseState { n, phi0: 0.0 },
            Family::TwinFock => StateSpec::TwinFock { n },
            Family::CorrelatedFock => StateSpec::CorrelatedFock { n },
            Family::SqCohOptimal => {
                StateSpec::SqueezedCoherent(SqueezedCoherent::new(n, Regime::Optimal))
            }
            Family::SqCohSqrtShot => {
                StateSpec::SqueezedCoherent(SqueezedCoherent::new(n, Regime::SqrtShot))
            }
        }
    }

    pub fn smallest_valid_n(self) -> usize {
        match self {
            Family::Phase => 0,
            Family::TwinFock | Family::SqCohSqrtShot => 2,
            _ => 1,
        }
    }

    /// Stride between valid photon numbers (parity constraint).
    pub fn n_step(self) -> usize {
        match self {
            Family::TwinFock | Family::CorrelatedFock => 2,
            _ => 1,
        }
    }

    pub fn is_valid_n(self, n: usize) -> bool {
        n >= self.smallest_valid_n()
            && n <= MAX_PHOTONS
            && match self {
                Family::TwinFock => n.is_multiple_of(2),
                Family::CorrelatedFock => !n.is_multiple_of(2),
                _ => true,
            }
    }

    /// Default sweep range `(n_min, n_max)`.
    pub fn default_range(self) -> (usize, usize) {
        match self {
            Family::Phase => (1, 40),
            Family::CorrelatedFock => (1, 39),
            Family::SqCohSqrtShot => (20, 60),
            other => (other.smallest_valid_n(), 40),
        }
    }

    /// Large-N reference curve drawn next to `F_Q` for this family, if any.
    pub fn reference_curve(self, n: f64) -> Option<f64> {
        match self {
            Family::Fock => Some(n),
            Family::Noon | Family::SqCohOptimal => Some(n * n),
            Family::Phase => Some((n * n + 2.0 * n) / 3.0),
            Family::TwinFock => Some(n * n / 2.0 + n),
            Family::CorrelatedFock => None,
            Family::SqCohSqrtShot => Some(1.45 * n.powf(1.5)),
        }
    }

    /// Photon number used for the coefficient and distribution panels.
    pub fn figure_n(self) -> usize {
        match self {
            Family::CorrelatedFock => 11,
            _ => 10,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let family = match s.trim().to_ascii_lowercase().as_str() {
            "fock" | "fock-one-input" => Family::Fock,
            "noon" => Family::Noon,
            "phase" | "phase-state" => Family::Phase,
            "twin-fock" | "twin" => Family::TwinFock,
            "correlated-fock" | "correlated" => Family::CorrelatedFock,
            "sq-coh-optimal" => Family::SqCohOptimal,
            "sq-coh-sqrt-shot" | "sq-coh-sqrt" => Family::SqCohSqrtShot,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown state family '{other}'"
                )))
            }
        };
        Ok(family)
    }
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_angle(phi: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let wrapped = (phi + PI).rem_euclid(two_pi) - PI;
    if wrapped >= PI {
        wrapped - two_pi
    } else {
        wrapped
    }
}
