//! Closed-form amplitudes of the interferometric state families.
//!
//! Beam-splitter convention: `a′† → (a† + i b†)/√2`, `b′† → (i a† + b†)/√2`.
//! The phase `θ_a` applied after the splitter is fixed per family so the
//! relative phase density peaks at `φ = 0`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, LN_2, PI};

use num_complex::Complex64;

use super::{Regime, SqueezedCoherent, TwoModeFockState, MAX_PHOTONS};
use crate::error::{Error, Result};
use crate::numeric::{binom_exact, ln_binom, ln_factorial, GaussianInt, QuarterTurn};

/// `θ_a` for a Fock state entering one port.
pub const FOCK_INPUT_THETA_A: f64 = FRAC_PI_2;
/// `θ_a` for squeezed vacuum ⊗ coherent input.
pub const SQUEEZED_THETA_A: f64 = -FRAC_PI_2;

const EMPTY_PROJECTION: f64 = 1e-12;

fn check_range(n: usize) -> Result<()> {
    if n > MAX_PHOTONS {
        return Err(Error::InvalidSpec(format!(
            "N = {n} exceeds the supported maximum of {MAX_PHOTONS} photons"
        )));
    }
    Ok(())
}

fn overflow(n: usize) -> Error {
    Error::InvalidSpec(format!("exact convolution overflows for N = {n}"))
}

fn finish(amplitudes: Vec<Complex64>) -> Result<TwoModeFockState> {
    Ok(TwoModeFockState::new(amplitudes)?.canonicalized())
}

/// `|N⟩_{a′}|0⟩_{b′}` through the splitter:
/// `A_k = i^{N−k} √binom(N,k) / √2^N`, then `θ_a`.
pub fn build_fock_one_input(n: usize) -> Result<TwoModeFockState> {
    if n == 0 {
        return Err(Error::DegenerateState(
            "a Fock input with N = 0 is the vacuum; its phase density is flat".into(),
        ));
    }
    check_range(n)?;
    let theta_a = QuarterTurn::new(1); // e^{ik·π/2} = i^k
    let amplitudes = (0..=n)
        .map(|k| {
            let modulus = (0.5 * (ln_binom(n, k) - n as f64 * LN_2)).exp();
            let turn = QuarterTurn::new(n as i64 - k as i64).times(pow(theta_a, k));
            turn.to_complex() * modulus
        })
        .collect();
    finish(amplitudes)
}

/// `(|N,0⟩ + |0,N⟩)/√2`.
pub fn build_noon(n: usize) -> Result<TwoModeFockState> {
    if n == 0 {
        return Err(Error::InvalidSpec("NOON state needs N ≥ 1".into()));
    }
    check_range(n)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n + 1];
    amplitudes[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amplitudes[n] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    finish(amplitudes)
}

/// `A_k = e^{ikφ₀}/√(N+1)`.
pub fn build_phase_state(n: usize, phi0: f64) -> Result<TwoModeFockState> {
    check_range(n)?;
    if !phi0.is_finite() {
        return Err(Error::InvalidSpec("phi0 must be finite".into()));
    }
    let scale = ((n + 1) as f64).sqrt().recip();
    let amplitudes = (0..=n)
        .map(|k| Complex64::from_polar(scale, k as f64 * phi0))
        .collect();
    finish(amplitudes)
}

/// `|N/2⟩_{a′}|N/2⟩_{b′}` through the splitter, `θ_a = 0`:
///
/// `A_k = i^{N/2} √binom(N,N/2) / √2^N · Σ_q i^{k−2q} binom(N/2,q) binom(N/2,k−q) / √binom(N,k)`.
pub fn build_twin_fock(n: usize) -> Result<TwoModeFockState> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidSpec(format!(
            "twin-Fock state needs an even N ≥ 2, got {n}"
        )));
    }
    check_range(n)?;
    let half = n / 2;
    let prefactor = QuarterTurn::new(half as i64).to_complex();
    let mut amplitudes = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut sum = GaussianInt::ZERO;
        for q in k.saturating_sub(half)..=k.min(half) {
            let term = binom_exact(half, q)
                .and_then(|a| a.checked_mul(binom_exact(half, k - q)?))
                .ok_or_else(|| overflow(n))?;
            let turn = QuarterTurn::new(k as i64 - 2 * q as i64);
            sum = sum
                .checked_add(GaussianInt::rotated(term, turn))
                .ok_or_else(|| overflow(n))?;
        }
        let modulus = (0.5 * (ln_binom(n, half) - ln_binom(n, k) - n as f64 * LN_2)).exp();
        amplitudes.push(prefactor * sum.to_complex() * modulus);
    }
    finish(amplitudes)
}

/// `(|N₊,N₋⟩ + |N₋,N₊⟩)/√2` with `N± = (N ± 1)/2` through the splitter,
/// `θ_a = 0`:
///
/// `A_k ∝ √binom(N,N₊) / √2^{N−1} · Σ_q cos[π(2k − 4q + 1)/4] binom(N₊,q) binom(N₋,k−q) / √binom(N,k)`.
///
/// The `i^{N/2}` prefactor is not a quarter turn for odd `N`; it is a global
/// phase and is absorbed by canonicalisation.
pub fn build_correlated_fock(n: usize) -> Result<TwoModeFockState> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidSpec(format!(
            "correlated Fock state needs an odd N, got {n}"
        )));
    }
    check_range(n)?;
    let n_plus = n / 2 + 1;
    let n_minus = n - n_plus;
    let mut amplitudes = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut sum: i128 = 0;
        for q in k.saturating_sub(n_minus)..=k.min(n_plus) {
            let term = binom_exact(n_plus, q)
                .and_then(|a| a.checked_mul(binom_exact(n_minus, k - q)?))
                .ok_or_else(|| overflow(n))?;
            // cos(π j / 4) for odd j is ±1/√2; the 1/√2 is applied below.
            let j = (2 * k as i64 - 4 * q as i64 + 1).rem_euclid(8);
            let signed = if j == 1 || j == 7 { term } else { -term };
            sum = sum.checked_add(signed).ok_or_else(|| overflow(n))?;
        }
        let modulus = (0.5 * (ln_binom(n, n_plus) - ln_binom(n, k) - (n - 1) as f64 * LN_2)).exp();
        amplitudes.push(Complex64::new(sum as f64 * modulus * FRAC_1_SQRT_2, 0.0));
    }
    finish(amplitudes)
}

/// Squeezing and coherent amplitudes realising a regime at mean photon
/// number `n_bar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingParameters {
    /// Squeezing strength `r`.
    pub r: f64,
    /// `sinh² r`, mean photon number of the squeezed vacuum.
    pub sinh2_r: f64,
    /// `|α|²`, mean photon number of the coherent state.
    pub alpha_sqr: f64,
}

pub fn squeezing_parameters(n_bar: usize, regime: Regime) -> Result<SqueezingParameters> {
    let nb = n_bar as f64;
    let (sinh2_r, alpha_sqr) = match regime {
        Regime::Optimal => {
            if n_bar < 1 {
                return Err(Error::InvalidSpec("optimal regime needs n_bar ≥ 1".into()));
            }
            (nb / 2.0, nb / 2.0)
        }
        Regime::SqrtShot => {
            if n_bar < 2 {
                return Err(Error::InvalidSpec(
                    "sqrt-shot regime needs n_bar ≥ 2".into(),
                ));
            }
            let s = nb.sqrt() / 2.0;
            (s, nb - s)
        }
    };
    if !(alpha_sqr > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "coherent amplitude |α|² = {alpha_sqr} is not positive for n_bar = {n_bar}"
        )));
    }
    Ok(SqueezingParameters {
        r: sinh2_r.sqrt().asinh(),
        sinh2_r,
        alpha_sqr,
    })
}

/// Squeezed vacuum `Σ_m S_{2m}|2m⟩` in `a′` and coherent `Σ_n C_n|n⟩` in `b′`,
/// through the splitter with `θ_a = −π/2`, projected onto `N = n_bar` and
/// renormalised.
///
/// `S_{2m} = √(2m)! (−e^{iθ_s} tanh r)^m / (2^m m! √cosh r)`,
/// `C_n = e^{−|α|²/2} (|α| e^{iθ_c})^n / √n!`.
pub fn build_squeezed_coherent_projected(spec: &SqueezedCoherent) -> Result<TwoModeFockState> {
    let n = spec.n_bar;
    check_range(n)?;
    if !spec.theta_s.is_finite() || !spec.theta_c.is_finite() {
        return Err(Error::InvalidSpec(
            "squeezing and coherent phases must be finite".into(),
        ));
    }
    if !spec.allow_phase_mismatch && (spec.theta_s - 2.0 * spec.theta_c).abs() > 1e-12 {
        return Err(Error::InvalidSpec(format!(
            "θ_s − 2θ_c = {} ≠ 0; set allow_phase_mismatch to override",
            spec.theta_s - 2.0 * spec.theta_c
        )));
    }
    let params = squeezing_parameters(n, spec.regime)?;
    let ln_tanh = params.r.tanh().ln();
    let ln_cosh = params.r.cosh().ln();
    let ln_alpha = 0.5 * params.alpha_sqr.ln();

    // Outer weights S_{2m} C_{N−2m} √binom(N,2m) / √2^N.
    let weights: Vec<(usize, Complex64)> = (0..=n / 2)
        .map(|m| {
            let photons_b = n - 2 * m;
            let ln_s = 0.5 * ln_factorial(2 * m) + m as f64 * (ln_tanh - LN_2)
                - ln_factorial(m)
                - 0.5 * ln_cosh;
            let ln_c = -0.5 * params.alpha_sqr + photons_b as f64 * ln_alpha
                - 0.5 * ln_factorial(photons_b);
            let phase = m as f64 * (PI + spec.theta_s) + photons_b as f64 * spec.theta_c;
            let ln_w = ln_s + ln_c + 0.5 * (ln_binom(n, 2 * m) - n as f64 * LN_2);
            (m, Complex64::from_polar(ln_w.exp(), phase))
        })
        .collect();

    let mut amplitudes = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(m, weight) in &weights {
            let squeezed = 2 * m;
            let coherent = n - squeezed;
            // q photons of mode a come from the coherent port, k − q from
            // the squeezed port; each carries the quarter turn i^{2m−k+2q}.
            let mut sum = GaussianInt::ZERO;
            for q in k.saturating_sub(squeezed)..=k.min(coherent) {
                let term = binom_exact(coherent, q)
                    .and_then(|a| a.checked_mul(binom_exact(squeezed, k - q)?))
                    .ok_or_else(|| overflow(n))?;
                let turn = QuarterTurn::new(squeezed as i64 - k as i64 + 2 * q as i64);
                sum = sum
                    .checked_add(GaussianInt::rotated(term, turn))
                    .ok_or_else(|| overflow(n))?;
            }
            if !sum.is_zero() {
                acc += weight * sum.to_complex();
            }
        }
        let theta_a = QuarterTurn::new(-(k as i64)); // e^{−ikπ/2}
        amplitudes.push(theta_a.to_complex() * acc * (-0.5 * ln_binom(n, k)).exp());
    }

    let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if !(norm_sqr >= EMPTY_PROJECTION) {
        return Err(Error::EmptyComponent { norm_sqr });
    }
    Ok(TwoModeFockState::normalized(amplitudes)?.canonicalized())
}

fn pow(turn: QuarterTurn, k: usize) -> QuarterTurn {
    QuarterTurn::new(turn.exponent() as i64 * k as i64)
}
