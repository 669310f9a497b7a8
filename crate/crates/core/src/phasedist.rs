//! Relative phase density of a fixed-photon-number two-mode state,
//!
//! `P(φ) = |Σ_k A_k e^{ikφ}|² / 2π`.
//!
//! The density is a degree-N trigonometric polynomial. [`PhaseDistribution`]
//! precomputes the autocorrelation `ρ_d = Σ_k A_{k+d} conj(A_k)` so that
//! `P(φ) = (1/2π)[ρ_0 + 2 Σ_{d≥1} Re(ρ_d e^{idφ})]` and its derivative cost
//! O(N) per point. The direct amplitude sum is kept as a cross-check and is
//! also the numerically robust route for `(P′)²/P`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::TwoModeFockState;

/// Densities below this are treated as zeros of `P` by the Fisher integrand.
pub const ZERO_DENSITY: f64 = 1e-280;
/// Node offset used to step off an exact zero of `P`.
pub const ZERO_NUDGE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSample {
    pub phi: f64,
    pub p: f64,
    pub dp: f64,
}

#[derive(Debug, Clone)]
pub struct PhaseDistribution {
    amplitudes: Vec<Complex64>,
    rho: Vec<Complex64>,
    /// Rounding floor of the Horner sum `f(φ)`.
    f_noise: f64,
}

impl PhaseDistribution {
    pub fn new(state: &TwoModeFockState) -> Self {
        let amplitudes = state.amplitudes().to_vec();
        let n = amplitudes.len();
        let rho = (0..n)
            .map(|d| {
                (0..n - d)
                    .map(|k| amplitudes[k + d] * amplitudes[k].conj())
                    .sum()
            })
            .collect();
        let abs_sum: f64 = amplitudes.iter().map(|a| a.norm()).sum();
        let f_noise = 4.0 * n as f64 * f64::EPSILON * abs_sum;
        PhaseDistribution { amplitudes, rho, f_noise }
    }

    pub fn n_total(&self) -> usize {
        self.amplitudes.len() - 1
    }

    /// `ρ_d` for `d = 0..=N`.
    pub fn autocorrelation(&self) -> &[Complex64] {
        &self.rho
    }

    pub fn p(&self, phi: f64) -> f64 {
        let mut acc = 0.5 * self.rho[0].re;
        for (d, rho) in self.rho.iter().enumerate().skip(1) {
            let (s, c) = (d as f64 * phi).sin_cos();
            acc += rho.re * c - rho.im * s;
        }
        acc / PI
    }

    pub fn dp(&self, phi: f64) -> f64 {
        let mut acc = 0.0;
        for (d, rho) in self.rho.iter().enumerate().skip(1) {
            let (s, c) = (d as f64 * phi).sin_cos();
            acc -= d as f64 * (rho.re * s + rho.im * c);
        }
        acc / PI
    }

    /// `(f, f′)` with `f(φ) = Σ_k A_k e^{ikφ}`, by Horner's scheme.
    pub fn amplitude_sum(&self, phi: f64) -> (Complex64, Complex64) {
        let z = Complex64::from_polar(1.0, phi);
        let mut g = Complex64::new(0.0, 0.0);
        let mut dg = Complex64::new(0.0, 0.0);
        for a in self.amplitudes.iter().rev() {
            dg = dg * z + g;
            g = g * z + a;
        }
        // d/dφ g(e^{iφ}) = i z g′(z)
        (g, Complex64::i() * z * dg)
    }

    /// Direct form `|f(φ)|² / 2π`.
    pub fn p_direct(&self, phi: f64) -> f64 {
        self.amplitude_sum(phi).0.norm_sqr() / (2.0 * PI)
    }

    /// `√P(φ) = |f(φ)| / √2π`.
    pub fn sqrt_p(&self, phi: f64) -> f64 {
        self.amplitude_sum(phi).0.norm() / (2.0 * PI).sqrt()
    }

    /// `(P′)² / P`, written as `(2/π) Re(f̄ f′)² / |f|²`.
    ///
    /// Bounded by `(2/π)|f′|²`. Nodes where `P` falls below
    /// [`ZERO_DENSITY`] are moved by [`ZERO_NUDGE`]. Where `|f|` is still
    /// within rounding of zero the value is the limit `(2/π)|f′|²`: at a
    /// real zero of any order `f` and `f′` are parallel.
    pub fn fisher_integrand(&self, phi: f64) -> f64 {
        let (mut f, mut df) = self.amplitude_sum(phi);
        if f.norm_sqr() / (2.0 * PI) < ZERO_DENSITY {
            (f, df) = self.amplitude_sum(phi + ZERO_NUDGE);
        }
        if f.norm() <= self.f_noise {
            return 2.0 / PI * df.norm_sqr();
        }
        let scale = f.re.abs().max(f.im.abs());
        if scale == 0.0 {
            return 0.0;
        }
        let u = f / scale;
        let cross = u.re * df.re + u.im * df.im;
        2.0 / PI * cross * cross / u.norm_sqr()
    }

    /// Local minima of `P` in `[−π, π)`, bracketed on a grid of
    /// `max(256, 32(N+1))` points and refined by bisection on the sign of
    /// `Re(f̄ f′)`. Real zeros of `f`, where `√P` has kinks, are among them.
    /// Dips within rounding of a flat stretch are skipped.
    pub fn local_minima(&self) -> Vec<f64> {
        let n = self.n_total();
        if n == 0 {
            return Vec::new();
        }
        let m = 256.max(32 * (n + 1));
        let h = 2.0 * PI / m as f64;
        let grid: Vec<f64> = (0..m).map(|j| self.p_direct(-PI + j as f64 * h)).collect();
        let slope = |phi: f64| {
            let (f, df) = self.amplitude_sum(phi);
            f.re * df.re + f.im * df.im
        };
        // Dips below this are rounding noise of a flat stretch.
        let noise = 64.0 * f64::EPSILON * grid.iter().cloned().fold(0.0, f64::max);
        let mut minima = Vec::new();
        for j in 0..m {
            let (prev, next) = (grid[(j + m - 1) % m], grid[(j + 1) % m]);
            if !(grid[j] + noise < prev && grid[j] <= next) {
                continue;
            }
            let centre = -PI + j as f64 * h;
            let (mut lo, mut hi) = (centre - h, centre + h);
            if slope(lo) > 0.0 || slope(hi) < 0.0 {
                minima.push(centre);
                continue;
            }
            for _ in 0..64 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if slope(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            minima.push(crate::states::wrap_angle(0.5 * (lo + hi)));
        }
        minima.sort_by(f64::total_cmp);
        minima.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        minima
    }

    /// `m_points` samples on the uniform grid `φ_j = −π + 2πj/m`.
    pub fn sample_grid(&self, m_points: usize) -> Result<Vec<PhaseSample>> {
        if m_points < 2 {
            return Err(Error::InvalidArgument(format!(
                "phase grid needs at least 2 points, got {m_points}"
            )));
        }
        let h = 2.0 * PI / m_points as f64;
        Ok((0..m_points)
            .map(|j| {
                let phi = -PI + j as f64 * h;
                PhaseSample {
                    phi,
                    p: self.p(phi),
                    dp: self.dp(phi),
                }
            })
            .collect())
    }

    /// Default grid size: at least 16 points per oscillation of the
    /// highest harmonic, never fewer than 4096.
    pub fn default_grid_size(&self) -> usize {
        4096.max(16 * self.n_total())
    }

    /// Standard deviation of `φ` on `[−π, π]`, by the trapezoid rule on
    /// [`default_grid_size`](Self::default_grid_size) intervals.
    pub fn width(&self) -> f64 {
        let m = self.default_grid_size();
        let h = 2.0 * PI / m as f64;
        let (mut first, mut second) = (0.0, 0.0);
        for j in 0..=m {
            let phi = -PI + j as f64 * h;
            let w = if j == 0 || j == m { 0.5 } else { 1.0 };
            let p = w * self.p(phi);
            first += phi * p;
            second += phi * phi * p;
        }
        let (first, second) = (first * h, second * h);
        (second - first * first).max(0.0).sqrt()
    }
}

pub fn eval_p(state: &TwoModeFockState, phi: f64) -> f64 {
    PhaseDistribution::new(state).p(phi)
}

pub fn eval_dp(state: &TwoModeFockState, phi: f64) -> f64 {
    PhaseDistribution::new(state).dp(phi)
}

pub fn sample_grid(state: &TwoModeFockState, m_points: usize) -> Result<Vec<PhaseSample>> {
    PhaseDistribution::new(state).sample_grid(m_points)
}

pub fn phase_width(state: &TwoModeFockState) -> f64 {
    PhaseDistribution::new(state).width()
}

/// `Δφ · Δn_a`, with `Δφ` from [`phase_width`].
pub fn uncertainty_product(state: &TwoModeFockState) -> f64 {
    phase_width(state) * crate::states::photon_moments(state).1.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        apply_phase_shift, build_correlated_fock, build_fock_one_input, build_noon,
        build_phase_state, build_twin_fock, photon_moments,
    };

    #[test]
    fn noon_closed_form() {
        let s = build_noon(10).unwrap();
        assert!((eval_p(&s, 0.0) - 1.0 / PI).abs() < 1e-15);
        let d = PhaseDistribution::new(&s);
        for j in 0..50 {
            let phi = -3.0 + 0.12 * j as f64;
            let n = 10.0;
            assert!((d.p(phi) - (1.0 + (n * phi).cos()) / (2.0 * PI)).abs() < 1e-14);
            assert!((d.dp(phi) + n * (n * phi).sin() / (2.0 * PI)).abs() < 1e-13);
        }
    }

    #[test]
    fn phase_state_peak() {
        let s = build_phase_state(10, 0.0).unwrap();
        assert!((eval_p(&s, 0.0) - 11.0 / (2.0 * PI)).abs() < 1e-13);
    }

    #[test]
    fn basis_state_is_uniform() {
        let s = TwoModeFockState::basis(6, 2).unwrap();
        for phi in [-3.0, -1.0, 0.0, 0.4, 3.1] {
            assert!((eval_p(&s, phi) - 1.0 / (2.0 * PI)).abs() < 1e-16);
            assert_eq!(eval_dp(&s, phi), 0.0);
        }
        let uniform = phase_width(&s);
        assert!((uniform - PI / 3f64.sqrt()).abs() < 1e-6, "{uniform}");
    }

    #[test]
    fn builders_are_centred() {
        let states = [
            build_fock_one_input(9).unwrap(),
            build_noon(7).unwrap(),
            build_phase_state(10, 0.0).unwrap(),
            build_twin_fock(10).unwrap(),
            build_correlated_fock(11).unwrap(),
        ];
        for s in &states {
            assert!(eval_dp(s, 0.0).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_rejects_too_few_points_and_sums_to_one() {
        let s = build_noon(10).unwrap();
        assert!(sample_grid(&s, 1).is_err());
        let grid = sample_grid(&s, 4096).unwrap();
        assert_eq!(grid[0].phi, -PI);
        let total: f64 = grid.iter().map(|x| x.p).sum::<f64>() * 2.0 * PI / 4096.0;
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shift_moves_the_density() {
        let s = build_twin_fock(8).unwrap();
        let theta = 0.37;
        let shifted = apply_phase_shift(&s, theta);
        for phi in [-2.0, -0.3, 0.0, 1.1] {
            assert!((eval_p(&shifted, phi) - eval_p(&s, phi + theta)).abs() < 1e-12);
        }
    }

    #[test]
    fn noon_width_matches_closed_form() {
        for n in 1..=12usize {
            let nf = n as f64;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let expected = (PI * PI / 3.0 + 2.0 * sign / (nf * nf)).sqrt();
            let w = phase_width(&build_noon(n).unwrap());
            assert!((w - expected).abs() < 1e-6, "N={n}: {w} vs {expected}");
        }
    }

    #[test]
    fn phase_state_is_narrower_than_uniform() {
        let w = phase_width(&build_phase_state(10, 0.0).unwrap());
        assert!(w < PI / 3f64.sqrt());
    }

    #[test]
    fn fock_width_product_tends_to_one_half() {
        // Binomial amplitudes give a near-Gaussian density of variance 1/N.
        let s = build_fock_one_input(40).unwrap();
        let (_, var) = photon_moments(&s);
        let product = phase_width(&s) * var.sqrt();
        assert!((product - 0.5).abs() < 1e-3, "{product}");
    }

    #[test]
    fn fisher_integrand_at_exact_zero() {
        // NOON N = 1 vanishes at φ = ±π; the limit of (P′)²/P there is N²/π.
        let d = PhaseDistribution::new(&build_noon(1).unwrap());
        let at_zero = d.fisher_integrand(PI);
        assert!((at_zero - 1.0 / PI).abs() < 1e-6, "{at_zero}");
    }

    #[test]
    fn fisher_integrand_at_a_double_zero() {
        // Fock N = 2: f ∝ (1 + e^{iφ})² has a double zero at φ = π, where
        // the integrand vanishes.
        let d = PhaseDistribution::new(&build_fock_one_input(2).unwrap());
        assert!(d.fisher_integrand(PI).abs() < 1e-20);
        assert!(d.fisher_integrand(-PI).abs() < 1e-20);
    }

    #[test]
    fn minima_of_noon_are_its_zeros() {
        let n = 6;
        let d = PhaseDistribution::new(&build_noon(n).unwrap());
        let minima = d.local_minima();
        assert_eq!(minima.len(), n);
        for z in minima {
            // Zeros of 1 + cos(Nφ) at odd multiples of π/N.
            let j = (z * n as f64 / PI - 1.0) / 2.0;
            assert!((j - j.round()).abs() < 1e-12, "{z}");
            assert!(d.p(z) < 1e-28);
        }
        assert!(
            PhaseDistribution::new(&TwoModeFockState::basis(4, 2).unwrap())
                .local_minima()
                .is_empty()
        );
    }

    #[test]
    fn derivative_matches_centred_differences() {
        use rand::{Rng, SeedableRng};
        let d = PhaseDistribution::new(&build_twin_fock(10).unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let h = 1e-5;
        for _ in 0..100 {
            let phi = rng.gen_range(-PI..PI);
            let fd = (d.p(phi + h) - d.p(phi - h)) / (2.0 * h);
            assert!((d.dp(phi) - fd).abs() < 1e-8, "{phi}");
        }
    }
}
