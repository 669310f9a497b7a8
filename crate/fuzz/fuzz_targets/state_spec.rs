#![no_main]

use libfuzzer_sys::fuzz_target;
use relphase::states::{StateSpec, NORM_TOLERANCE};
use relphase::PhaseDistribution;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<StateSpec>(data) else {
        return;
    };
    let Ok(state) = spec.build() else { return };
    assert_eq!(state.n_total(), spec.n_total());
    assert!((state.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE);
    let p = PhaseDistribution::new(&state).p(0.0);
    assert!(p.is_finite() && p >= -1e-13);
});
