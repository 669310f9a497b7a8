//! Randomised invariants of states, distributions, Fisher information and
//! the quadrature engines.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use relphase::fisher::{fisher_lss, fisher_quantum, DEFAULT_TOL};
use relphase::quadrature::{integrate_adaptive, integrate_periodic};
use relphase::states::{apply_phase_shift, build_noon, Family, TwoModeFockState};
use relphase::{cramer_rao_min, PhaseDistribution};

fn random_state(max_n: usize) -> impl Strategy<Value = TwoModeFockState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_n + 1).prop_filter_map(
        "zero vector",
        |parts| {
            let amps = parts
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect();
            TwoModeFockState::normalized(amps).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phase_shifts_compose(state in random_state(30), t1 in -PI..PI, t2 in -PI..PI) {
        let twice = apply_phase_shift(&apply_phase_shift(&state, t1), t2);
        let once = apply_phase_shift(&state, t1 + t2);
        for (a, b) in twice.amplitudes().iter().zip(once.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-14, "{a} vs {b}");
        }
        prop_assert!((twice.norm_sqr() - state.norm_sqr()).abs() < 1e-14);
    }

    #[test]
    fn distribution_is_shift_covariant(state in random_state(30), theta in -PI..PI, phi in -PI..PI) {
        let shifted = PhaseDistribution::new(&apply_phase_shift(&state, theta));
        let base = PhaseDistribution::new(&state);
        prop_assert!((shifted.p(phi) - base.p(phi + theta)).abs() < 1e-12);
    }

    #[test]
    fn direct_and_autocorrelation_forms_agree(state in random_state(40), phi in -PI..PI) {
        let d = PhaseDistribution::new(&state);
        prop_assert!((d.p(phi) - d.p_direct(phi)).abs() < 1e-12);
        prop_assert!(d.p(phi) >= -1e-13);
    }

    #[test]
    fn fisher_is_shift_invariant(state in random_state(12), theta in -PI..PI) {
        let shifted = apply_phase_shift(&state, theta);
        prop_assert!((fisher_quantum(&shifted) - fisher_quantum(&state)).abs() < 1e-12);
        let (a, ea) = fisher_lss(&state, DEFAULT_TOL).unwrap();
        let (b, eb) = fisher_lss(&shifted, DEFAULT_TOL).unwrap();
        prop_assert!((a - b).abs() <= ea + eb + 1e-12 * a.max(1.0), "{a} vs {b}");
    }

    #[test]
    fn quadrature_is_linear(
        coeffs in prop::collection::vec((-2.0f64..2.0, 0.1f64..4.0, -PI..PI), 2..6),
        alpha in -3.0f64..3.0,
        beta in -3.0f64..3.0,
        a in -3.0f64..0.0,
        len in 0.5f64..5.0,
    ) {
        let b = a + len;
        let (fc, gc) = coeffs.split_at(coeffs.len() / 2);
        let eval = |cs: &[(f64, f64, f64)], x: f64| -> f64 {
            cs.iter().map(|&(amp, freq, shift)| amp * (freq * x + shift).cos() * (-0.1 * x * x).exp()).sum()
        };
        let f = |x: f64| eval(fc, x);
        let g = |x: f64| eval(gc, x);
        let tol = 1e-11;
        let rf = integrate_adaptive(f, a, b, tol, 40).unwrap();
        let rg = integrate_adaptive(g, a, b, tol, 40).unwrap();
        let rh = integrate_adaptive(|x| alpha * f(x) + beta * g(x), a, b, tol, 40).unwrap();
        let combined = alpha * rf.value + beta * rg.value;
        let bound = rh.error_estimate + alpha.abs() * rf.error_estimate + beta.abs() * rg.error_estimate;
        prop_assert!((rh.value - combined).abs() <= bound + 1e-14,
            "{} vs {combined}, bound {bound:e}", rh.value);
    }
}

#[test]
fn adaptive_and_periodic_engines_agree_on_family_states() {
    for family in Family::ALL {
        let (lo, hi) = family.default_range();
        for n in (lo..=hi).filter(|&n| family.is_valid_n(n)) {
            let state = family.spec(n).build().unwrap();
            let d = PhaseDistribution::new(&state);
            let (adaptive, ea) = fisher_lss(&state, DEFAULT_TOL).unwrap();
            let periodic = integrate_periodic(|phi| d.fisher_integrand(phi), 4096).unwrap();
            let bound = ea + periodic.error_estimate + 1e-12 * adaptive.max(1.0);
            assert!(
                (adaptive - periodic.value).abs() <= bound,
                "{family} N={n}: {adaptive} vs {} (bound {bound:e})",
                periodic.value
            );
        }
    }
}

#[test]
fn noon_peaks_have_equal_height() {
    for n in 1..=40usize {
        let d = PhaseDistribution::new(&build_noon(n).unwrap());
        // Maxima of 1 + cos(Nφ) sit at 2πj/N.
        let mut peaks = 0;
        for j in 0..n {
            let phi =
                -PI + 2.0 * PI * j as f64 / n as f64 + if n % 2 == 1 { PI / n as f64 } else { 0.0 };
            let phi = relphase::states::wrap_angle(phi);
            assert!((d.p(phi) - 1.0 / PI).abs() < 1e-10, "N={n} at {phi}");
            assert!(d.dp(phi).abs() < 1e-10);
            peaks += 1;
        }
        // Count strict local maxima on a fine periodic grid.
        let m = 64 * n;
        let grid: Vec<f64> = (0..m)
            .map(|j| d.p(-PI + 2.0 * PI * j as f64 / m as f64))
            .collect();
        let local = (0..m)
            .filter(|&j| grid[j] > grid[(j + m - 1) % m] && grid[j] >= grid[(j + 1) % m])
            .count();
        assert_eq!(local, peaks, "N={n}");
    }
}

#[test]
fn noon_lss_fisher_increases_with_n() {
    let mut prev = 0.0;
    for n in 1..=40 {
        let (f, _) = fisher_lss(&build_noon(n).unwrap(), DEFAULT_TOL).unwrap();
        assert!(f > prev, "N={n}");
        prev = f;
    }
}

#[test]
fn noon_lss_integral_on_both_engines() {
    let d = PhaseDistribution::new(&build_noon(10).unwrap());
    let coarse = integrate_periodic(|phi| d.fisher_integrand(phi), 4096).unwrap();
    let fine = integrate_periodic(|phi| d.fisher_integrand(phi), 8192).unwrap();
    assert!((coarse.value - fine.value).abs() < 1e-10);
    let adaptive = integrate_adaptive(|phi| d.fisher_integrand(phi), -PI, PI, 1e-9, 40).unwrap();
    assert!(
        (adaptive.value - fine.value).abs()
            <= adaptive.error_estimate + fine.error_estimate + 1e-12
    );
    assert!((fine.value - 100.0).abs() < 1e-9);
}

#[test]
fn cramer_rao_chain() {
    for (f, p) in [(1.0, 1u64), (100.0, 7), (3.5, 1000), (1e6, 3)] {
        let b = cramer_rao_min(f, p).unwrap();
        assert!((b.delta_theta_min * (p as f64 * f).sqrt() - 1.0).abs() < 4.0 * f64::EPSILON);
    }
}
