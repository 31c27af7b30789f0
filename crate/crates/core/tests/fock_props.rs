//! Property tests for the Fock-space layer.

use enbs_core::fock::{
    coherent_cutoff, coherent_state, coherent_state_auto, density_from, overlap, partial_trace,
    state_partial_trace, tensor, ModeSpace, MultiModeState,
};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn amplitude() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

/// Random normalized state on a small single-mode space.
fn random_state(cutoff: usize) -> impl Strategy<Value = MultiModeState> {
    prop::collection::vec(amplitude(), cutoff + 1).prop_filter_map("nonzero state", move |amps| {
        let space = ModeSpace::single(cutoff).unwrap();
        let st = MultiModeState::from_amplitudes(space, amps).ok()?;
        let norm = st.norm();
        (norm > 1e-3).then(|| st.scaled(C64::new(1.0 / norm, 0.0)))
    })
}

proptest! {
    /// Tracing a product state out of its partner recovers the factor.
    #[test]
    fn partial_trace_inverts_tensor(a in random_state(4), b in random_state(3)) {
        let joint = tensor(&a, &b).unwrap();
        let rho = density_from(&joint).unwrap();
        let left = partial_trace(&rho, &[0]).unwrap();
        let expect = density_from(&a).unwrap();
        let max_diff = (left.matrix() - expect.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        prop_assert!(max_diff < 1e-12);

        let right = partial_trace(&rho, &[1]).unwrap();
        let expect_b = density_from(&b).unwrap();
        let max_diff_b = (right.matrix() - expect_b.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        prop_assert!(max_diff_b < 1e-12);
    }

    /// Trace, Hermiticity and positivity survive the partial trace,
    /// including for entangled inputs.
    #[test]
    fn partial_trace_stays_physical(
        a in random_state(3),
        b in random_state(3),
        mix_re in -0.9..0.9f64,
        mix_im in -0.9..0.9f64,
    ) {
        let mut joint = tensor(&a, &b).unwrap();
        let cross = tensor(&b, &a).unwrap();
        joint.add_scaled(&cross, C64::new(mix_re, mix_im)).unwrap();
        let norm = joint.norm();
        prop_assume!(norm > 1e-3);
        let joint = joint.scaled(C64::new(1.0 / norm, 0.0));

        let reduced = state_partial_trace(&joint, &[0]).unwrap();
        let diag = reduced.diagnostics();
        prop_assert!(diag.hermiticity_deviation < 1e-12);
        prop_assert!((diag.trace.re - 1.0).abs() < 1e-12);
        prop_assert!(diag.trace.im.abs() < 1e-13);
        prop_assert!(diag.min_eigenvalue > -1e-10);
    }

    /// Inner products factor across tensor products.
    #[test]
    fn overlap_factorizes(
        a in random_state(3),
        b in random_state(2),
        c in random_state(3),
        d in random_state(2),
    ) {
        let left = tensor(&a, &b).unwrap();
        let right = tensor(&c, &d).unwrap();
        let joint = overlap(&left, &right).unwrap();
        let split = overlap(&a, &c).unwrap() * overlap(&b, &d).unwrap();
        prop_assert!((joint - split).norm() < 1e-12);

        // conjugate symmetry
        let back = overlap(&right, &left).unwrap();
        prop_assert!((joint - back.conj()).norm() < 1e-14);
    }

    /// The cutoff rule keeps the neglected coherent tail below 1e-12
    /// and the mean photon number on its closed form.
    #[test]
    fn coherent_truncation_rule_holds(
        a_abs in 0.0..4.0f64,
        phase in 0.0..std::f64::consts::TAU,
    ) {
        let alpha = C64::from_polar(a_abs, phase);
        let st = coherent_state_auto(alpha).unwrap();
        prop_assert!(st.norm_sqr() >= 1.0 - 1e-12);

        if a_abs <= 3.0 {
            let direct: f64 = st
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(n, amp)| n as f64 * amp.norm_sqr())
                .sum();
            prop_assert!((direct - a_abs * a_abs).abs() < 1e-10);
        }
    }

    /// Growing the cutoff beyond the rule never hurts the tail bound.
    #[test]
    fn cutoff_rule_has_headroom(a_abs in 0.0..4.0f64, extra in 0usize..10) {
        let cutoff = coherent_cutoff(a_abs) + extra;
        let st = coherent_state(C64::new(a_abs, 0.0), cutoff).unwrap();
        prop_assert!(st.norm_sqr() >= 1.0 - 1e-12);
    }
}
