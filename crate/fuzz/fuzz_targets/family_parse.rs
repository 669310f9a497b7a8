#![no_main]

use libfuzzer_sys::fuzz_target;
use relphase::states::{Family, Regime};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(family) = text.parse::<Family>() {
        assert_eq!(family.as_str().parse::<Family>().unwrap(), family);
    }
    if let Ok(regime) = text.parse::<Regime>() {
        assert_eq!(regime.as_str().parse::<Regime>().unwrap(), regime);
    }
});
