#![no_main]

use libfuzzer_sys::fuzz_target;
use relphase::states::{TwoModeFockState, NORM_TOLERANCE};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(state) = TwoModeFockState::from_json(text) else {
        return;
    };
    // Anything the decoder accepts is a valid state and survives a round trip.
    assert_eq!(state.amplitudes().len(), state.n_total() + 1);
    assert!((state.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE);
    let again = TwoModeFockState::from_json(&state.to_json().unwrap()).unwrap();
    assert_eq!(again, state);
});
