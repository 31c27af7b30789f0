//! Generator/fitter closure and scan-equivalence properties.

use enbs_core::enbs::wrap_to_pi;
use enbs_core::enbs::EnbsConfig;
use enbs_core::scan::{fit_fringe, run_scan, three_scan_equivalence, ScanSpec, ScanTarget};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn config() -> impl Strategy<Value = EnbsConfig> {
    (
        0.3..2.5f64,
        0.3..2.5f64,
        0.004..0.05f64,
        -6.3..6.3f64,
        -6.3..6.3f64,
        -6.3..6.3f64,
        -6.3..6.3f64,
    )
        .prop_map(|(a1, a2, r, p1, p2, s1, s2)| {
            EnbsConfig::new(C64::new(a1, 0.0), C64::new(a2, 0.0), r, r, p1, p2, s1, s2).unwrap()
        })
}

proptest! {
    /// A noiseless scan refit recovers the generator's visibility and
    /// phase offset.
    #[test]
    fn fit_closes_on_generator(
        base in config(),
        target_idx in 0usize..3,
        steps in 16usize..96,
        phi_s0 in -3.0..3.0f64,
    ) {
        let target = [ScanTarget::Pump, ScanTarget::Seed, ScanTarget::Signal][target_idx];
        let spec = ScanSpec {
            target,
            start: 0.0,
            stop: 2.0 * PI,
            steps,
            base,
            phi_s0,
            noise: None,
        };
        let ds = run_scan(&spec).unwrap();
        let fit = fit_fringe(&ds).unwrap();

        // reconstruct the fringe from the fit and compare pointwise
        for p in &ds.points {
            let model = fit.offset * (1.0 + fit.visibility * (p.phase + fit.delta).cos());
            prop_assert!((model - p.p_bright).abs() < 1e-9);
        }
        prop_assert!(fit.rms_residual < 1e-9);
        prop_assert!(fit.visibility <= 1.0 + 1e-6);
    }
}

/// Fifty random configurations all produce pairwise-equal fitted
/// visibilities across the three scan targets.
#[test]
fn three_scan_equivalence_over_random_configs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5CA7);
    for trial in 0..50 {
        let base = EnbsConfig::new(
            C64::new(rng.random_range(0.3..2.5), 0.0),
            C64::new(rng.random_range(0.3..2.5), 0.0),
            rng.random_range(0.004..0.05),
            rng.random_range(0.004..0.05),
            rng.random_range(-6.3..6.3),
            rng.random_range(-6.3..6.3),
            rng.random_range(-6.3..6.3),
            rng.random_range(-6.3..6.3),
        )
        .unwrap();
        let report = three_scan_equivalence(&base, 48).unwrap();
        assert!(
            report.visibility_spread < 1e-9,
            "trial {trial}: spread {}",
            report.visibility_spread
        );
        assert!(
            report.reflection_residual < 1e-9,
            "trial {trial}: reflection {}",
            report.reflection_residual
        );
    }
}

/// The signal-scan fit recovers the prepared phase as its offset.
#[test]
fn signal_scan_delta_is_prepared_phase() {
    let mut base = EnbsConfig::equal_seeding(2.0, 0.01).unwrap();
    base.phi_sd2 = 1.13;
    base.phi_p2 = -0.4;
    let spec = ScanSpec {
        target: ScanTarget::Signal,
        start: 0.0,
        stop: 2.0 * PI,
        steps: 64,
        base,
        phi_s0: 0.0,
        noise: None,
    };
    let fit = fit_fringe(&run_scan(&spec).unwrap()).unwrap();
    let expect = enbs_core::enbs::prepared_phase(&base);
    assert!(wrap_to_pi(fit.delta - expect).abs() < 1e-9);
}
