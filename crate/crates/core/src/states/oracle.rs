//! Beam-splitter transform by direct polynomial expansion.
//!
//! `|n⟩_{a′}|m⟩_{b′} = (a′†)^n (b′†)^m / √(n! m!) |0⟩` with
//! `a′† → (a† + i b†)/√2` and `b′† → (i a† + b†)/√2`. The product of linear
//! forms is multiplied out factor by factor over the Gaussian integers, so
//! this path shares no formula with the closed-form builders. No `θ_a` is
//! applied and the global phase is left as produced.

use std::f64::consts::LN_2;

use num_complex::Complex64;

use super::TwoModeFockState;
use crate::error::{Error, Result};
use crate::numeric::GaussianInt;

/// One `amplitude · |photons_a⟩_{a′}|photons_b⟩_{b′}` term of the input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputTerm {
    pub amplitude: Complex64,
    pub photons_a: usize,
    pub photons_b: usize,
}

/// Product input `(Σ_n a_n|n⟩) ⊗ (Σ_m b_m|m⟩)` projected onto
/// `n + m = n_total`, transformed and renormalised.
pub fn beam_splitter_oracle(
    input_a: &[Complex64],
    input_b: &[Complex64],
    n_total: usize,
) -> Result<TwoModeFockState> {
    if input_a.is_empty() || input_b.is_empty() {
        return Err(Error::InvalidInput(
            "input mode amplitudes are empty".into(),
        ));
    }
    if n_total > (input_a.len() - 1) + (input_b.len() - 1) {
        return Err(Error::InvalidInput(format!(
            "inputs carry at most {} photons, cannot reach N = {n_total}",
            input_a.len() + input_b.len() - 2
        )));
    }
    let terms: Vec<InputTerm> = (0..=n_total)
        .filter(|&n| n < input_a.len() && n_total - n < input_b.len())
        .map(|n| InputTerm {
            amplitude: input_a[n] * input_b[n_total - n],
            photons_a: n,
            photons_b: n_total - n,
        })
        .collect();
    beam_splitter_oracle_terms(&terms, n_total)
}

/// General superposition of product inputs, all with `n_total` photons.
pub fn beam_splitter_oracle_terms(terms: &[InputTerm], n_total: usize) -> Result<TwoModeFockState> {
    let mut out = vec![Complex64::new(0.0, 0.0); n_total + 1];
    for term in terms {
        if term.photons_a + term.photons_b != n_total {
            return Err(Error::InvalidInput(format!(
                "input term |{},{}⟩ does not carry N = {n_total} photons",
                term.photons_a, term.photons_b
            )));
        }
        if term.amplitude == Complex64::new(0.0, 0.0) {
            continue;
        }
        let poly = expand(term.photons_a, term.photons_b)?;
        for (k, coeff) in poly.iter().enumerate() {
            let ln_scale = 0.5
                * (ln_fact(k) + ln_fact(n_total - k)
                    - ln_fact(term.photons_a)
                    - ln_fact(term.photons_b)
                    - n_total as f64 * LN_2);
            out[k] += term.amplitude * coeff.to_complex() * ln_scale.exp();
        }
    }
    TwoModeFockState::normalized(out)
}

/// Coefficients of `x^k y^{n+m−k}` in `(x + i y)^n (i x + y)^m`.
fn expand(n: usize, m: usize) -> Result<Vec<GaussianInt>> {
    let mut poly = vec![GaussianInt::ONE];
    for _ in 0..n {
        poly = times_linear(&poly, GaussianInt::ONE, GaussianInt::I)?;
    }
    for _ in 0..m {
        poly = times_linear(&poly, GaussianInt::I, GaussianInt::ONE)?;
    }
    Ok(poly)
}

/// `poly · (cx · x + cy · y)`, indexing by the power of `x`.
fn times_linear(
    poly: &[GaussianInt],
    cx: GaussianInt,
    cy: GaussianInt,
) -> Result<Vec<GaussianInt>> {
    let too_big = || Error::InvalidInput("too many photons for the exact expansion".into());
    let mut next = vec![GaussianInt::ZERO; poly.len() + 1];
    for (k, &c) in poly.iter().enumerate() {
        next[k] = next[k]
            .checked_add(c.checked_mul(cy).ok_or_else(too_big)?)
            .ok_or_else(too_big)?;
        next[k + 1] = next[k + 1]
            .checked_add(c.checked_mul(cx).ok_or_else(too_big)?)
            .ok_or_else(too_big)?;
    }
    Ok(next)
}

/// `ln n!` by direct summation.
fn ln_fact(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}
