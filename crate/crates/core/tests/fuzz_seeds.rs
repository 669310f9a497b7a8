//! Replays the checked-in fuzz corpora through the same invariants as the
//! fuzz targets.

use std::path::PathBuf;

use relphase::states::{Family, Regime, StateSpec, TwoModeFockState, NORM_TOLERANCE};
use relphase::PhaseDistribution;

fn seeds(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let bytes = std::fs::read(&p).unwrap();
            (p, bytes)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn state_json_seeds() {
    let mut accepted = 0;
    for (path, data) in seeds("state_json") {
        let Ok(text) = std::str::from_utf8(&data) else {
            continue;
        };
        let Ok(state) = TwoModeFockState::from_json(text) else {
            continue;
        };
        assert_eq!(
            state.amplitudes().len(),
            state.n_total() + 1,
            "{}",
            path.display()
        );
        assert!((state.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE);
        let again = TwoModeFockState::from_json(&state.to_json().unwrap()).unwrap();
        assert_eq!(again, state);
        accepted += 1;
    }
    assert_eq!(accepted, 3);
}

#[test]
fn state_spec_seeds() {
    let mut built = 0;
    for (path, data) in seeds("state_spec") {
        let Ok(spec) = serde_json::from_slice::<StateSpec>(&data) else {
            panic!("{} does not decode", path.display())
        };
        let Ok(state) = spec.build() else { continue };
        assert_eq!(state.n_total(), spec.n_total());
        assert!((state.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE);
        let p = PhaseDistribution::new(&state).p(0.0);
        assert!(p.is_finite() && p >= -1e-13, "{}", path.display());
        built += 1;
    }
    assert_eq!(built, 5);
}

#[test]
fn family_parse_seeds() {
    let (mut families, mut regimes) = (0, 0);
    for (_, data) in seeds("family_parse") {
        let Ok(text) = std::str::from_utf8(&data) else {
            continue;
        };
        if let Ok(family) = text.parse::<Family>() {
            assert_eq!(family.as_str().parse::<Family>().unwrap(), family);
            families += 1;
        }
        if let Ok(regime) = text.parse::<Regime>() {
            assert_eq!(regime.as_str().parse::<Regime>().unwrap(), regime);
            regimes += 1;
        }
    }
    assert_eq!((families, regimes), (8, 2));
}
