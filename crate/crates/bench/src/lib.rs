//! Shared fixtures for the benchmarks in `benches/`.

use orbitherm::dynamics::DynState;
use orbitherm::{OrbitalElements, SystemState};

/// Averaged state a few km inside the 3:1 resonance.
pub fn resonant_state() -> DynState {
    let mut inner = OrbitalElements::miranda_j2000();
    inner.a = 127_850.0;
    SystemState::from_elements(&inner, &OrbitalElements::umbriel_j2000(), 0.0).to_vector()
}
