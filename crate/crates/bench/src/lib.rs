//! Shared fixtures for the criterion benches.

use enbs_core::enbs::EnbsConfig;
use enbs_core::scan::{CombSpec, ScanSpec, ScanTarget};
use enbs_core::unified::SlitSpec;
use std::f64::consts::TAU;

pub fn scan_spec(steps: usize) -> ScanSpec {
    ScanSpec {
        target: ScanTarget::Signal,
        start: 0.0,
        stop: TAU,
        steps,
        base: EnbsConfig::equal_seeding(10.0, 0.01).unwrap(),
        phi_s0: 0.0,
        noise: None,
    }
}

pub fn slit_spec(segments: usize, points: usize) -> SlitSpec {
    let width_b = 50e-6;
    let wavenumber_k = TAU / 807e-9;
    let theta_max = 0.05;
    let angles = (0..points)
        .map(|i| -theta_max + 2.0 * theta_max * i as f64 / (points - 1) as f64)
        .collect();
    SlitSpec {
        width_b,
        wavenumber_k,
        segments_k: segments,
        angles,
    }
}

pub fn comb_spec(n_pulses: usize) -> CombSpec {
    CombSpec {
        f_rep: 250e6,
        n_pulses,
        samples_per_period: 32,
        pulse_width: 200e-12,
        carrier_phase_noise_rms: 0.0,
        amplitude: 1.0,
        rng_seed: 0,
    }
}
