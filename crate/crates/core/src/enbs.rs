//! Two coherently seeded parametric sources feeding one detector: the
//! closed-form model (phases, coupling constant, reduced signal density
//! matrix, overlap and visibility laws, Bloch angles, duality identity)
//! and the Fock-space oracle construction that validates it.
//!
//! Conventions used throughout:
//!
//! - prepared-state phase `phi = dphi_sd - dphi_p` (seed difference
//!   minus pump difference);
//! - the reported off-diagonal of the reduced signal matrix carries
//!   `exp(-i phi)`;
//! - detection probability `P_B = (1 + V cos(phi + phi_s)) / 2`.
//!
//! The oracle path never reuses these formulas: it builds the joint
//! signal x idler state to first order in the gains, partial-traces the
//! idlers with [`crate::fock`], and reads the single-photon block.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    coherent_cutoff, coherent_state, photon_add, state_partial_trace, tensor, ModeSpace,
    MultiModeState,
};

pub const HBAR: f64 = 1.054_571_817e-34; // J s
pub const EPSILON_0: f64 = 8.854_187_812_8e-12; // F / m
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0; // m / s

/// Largest gain accepted by the first-order model.
pub const MAX_GAIN: f64 = 0.2;

/// Seed overlap degradation measured with the ND filter inserted.
pub const ND_FILTER_OVERLAP: f64 = 0.9;

/// Full parameterization of the prepared two-source state.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EnbsConfig {
    /// Complex seed amplitudes (dimensionless).
    pub alpha1: C64,
    pub alpha2: C64,
    /// Weak-gain parameters, in (0, 0.2].
    pub r1: f64,
    pub r2: f64,
    /// Pump input phases (rad), stored unwrapped.
    pub phi_p1: f64,
    pub phi_p2: f64,
    /// Seed input phases (rad), stored unwrapped.
    pub phi_sd1: f64,
    pub phi_sd2: f64,
}

impl EnbsConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha1: C64,
        alpha2: C64,
        r1: f64,
        r2: f64,
        phi_p1: f64,
        phi_p2: f64,
        phi_sd1: f64,
        phi_sd2: f64,
    ) -> Result<Self> {
        let cfg = Self {
            alpha1,
            alpha2,
            r1,
            r2,
            phi_p1,
            phi_p2,
            phi_sd1,
            phi_sd2,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Both sources seeded equally with real amplitude `alpha` and gain
    /// `r`, all phases zero.
    pub fn equal_seeding(alpha: f64, r: f64) -> Result<Self> {
        Self::new(
            C64::new(alpha, 0.0),
            C64::new(alpha, 0.0),
            r,
            r,
            0.0,
            0.0,
            0.0,
            0.0,
        )
    }

    pub fn validate(&self) -> Result<()> {
        for (name, r) in [("r1", self.r1), ("r2", self.r2)] {
            if !(r > 0.0 && r <= MAX_GAIN) {
                return Err(Error::param(format!(
                    "{name} = {r} outside the first-order gain range (0, {MAX_GAIN}]"
                )));
            }
        }
        for (name, a) in [("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::param(format!("{name} is not finite")));
            }
        }
        Ok(())
    }

    pub fn pump_phase_difference(&self) -> f64 {
        self.phi_p2 - self.phi_p1
    }

    pub fn seed_phase_difference(&self) -> f64 {
        self.phi_sd2 - self.phi_sd1
    }
}

/// Reduced 2x2 signal density data: two populations and one complex
/// off-diagonal, laid out as `[[rho11, coherence], [conj, rho22]]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SignalDensity {
    pub rho11: f64,
    pub rho22: f64,
    pub coherence: C64,
}

impl SignalDensity {
    pub fn trace(&self) -> f64 {
        self.rho11 + self.rho22
    }

    /// Populations and coherence renormalized onto the post-selected
    /// single-photon subspace (unit trace).
    pub fn normalized(&self) -> Result<SignalDensity> {
        let tr = self.trace();
        if tr <= 0.0 {
            return Err(Error::param("density has no population to normalize"));
        }
        Ok(SignalDensity {
            rho11: self.rho11 / tr,
            rho22: self.rho22 / tr,
            coherence: self.coherence / tr,
        })
    }

    /// Fringe visibility `2 |coherence| / trace` of the post-selected
    /// qubit.
    pub fn visibility(&self) -> Result<f64> {
        let tr = self.trace();
        if tr <= 0.0 {
            return Err(Error::param("density has no population"));
        }
        Ok(2.0 * self.coherence.norm() / tr)
    }

    /// `max(0, |coherence| - sqrt(rho11 rho22))`: how far the matrix
    /// sits outside the physical (Cauchy-Schwarz) cone.
    pub fn schwarz_excess(&self) -> f64 {
        (self.coherence.norm() - (self.rho11 * self.rho22).sqrt()).max(0.0)
    }
}

/// Prepared-state Bloch angles of the signal qubit.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BlochState {
    /// Polar angle in [0, pi].
    pub theta: f64,
    /// Azimuth (rad), unwrapped.
    pub phi: f64,
}

/// Predictability, visibility and source purity of a signal qubit;
/// satisfies `p^2 + v^2 = mu^2` by construction of the 2x2 algebra.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DualityTriple {
    pub predictability: f64,
    pub visibility: f64,
    pub source_purity: f64,
}

/// Pump and crystal parameters entering the coupling constant. All
/// magnitudes in SI units; no unit inference is performed.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PumpParams {
    /// Pump power (W).
    pub pump_power: f64,
    /// Nonlinear coefficient d33 (m/V).
    pub d33: f64,
    /// Extraordinary refractive indices at pump, signal, idler.
    pub n_pump: f64,
    pub n_signal: f64,
    pub n_idler: f64,
    /// Signal and idler angular frequencies (rad/s).
    pub omega_signal: f64,
    pub omega_idler: f64,
    /// Effective mode area (m^2).
    pub mode_area: f64,
    /// Crystal length (m).
    pub length: f64,
    /// Quasi-phase-mismatch (1/m); any sign.
    pub delta_k: f64,
    /// Pump phase (rad).
    pub phi_p: f64,
}

impl PumpParams {
    fn validate(&self) -> Result<()> {
        let positive = [
            ("pump_power", self.pump_power),
            ("d33", self.d33),
            ("n_pump", self.n_pump),
            ("n_signal", self.n_signal),
            ("n_idler", self.n_idler),
            ("omega_signal", self.omega_signal),
            ("omega_idler", self.omega_idler),
            ("mode_area", self.mode_area),
            ("length", self.length),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::param(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.delta_k.is_finite() || !self.phi_p.is_finite() {
            return Err(Error::param("delta_k and phi_p must be finite"));
        }
        Ok(())
    }
}

/// Representative of an angle in (-pi, pi].
pub fn wrap_to_pi(angle: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut a = angle.rem_euclid(two_pi);
    if a > std::f64::consts::PI {
        a -= two_pi;
    }
    a
}

pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Output phase of a stimulated signal photon given the pump and seed
/// input phases of its source.
pub fn signal_output_phase(phi_p: f64, phi_sd: f64) -> f64 {
    phi_p - phi_sd
}

/// Stimulated-downconversion coupling constant of one source, with
/// first-order quasi-phase-matched poling (`d_eff = (2/pi) d33`). The
/// phase of the result is the pump phase.
pub fn coupling_constant(p: &PumpParams) -> Result<C64> {
    p.validate()?;
    let d_eff = (2.0 / std::f64::consts::PI) * p.d33;
    let radicand = p.pump_power * p.omega_signal * p.omega_idler
        / (EPSILON_0 * p.n_pump * p.n_signal * p.n_idler * SPEED_OF_LIGHT * p.mode_area);
    let magnitude = HBAR * d_eff / p.n_pump * radicand.sqrt() * sinc(p.delta_k * p.length / 2.0);
    Ok(C64::from_polar(magnitude.abs(), p.phi_p) * magnitude.signum())
}

/// Prepared-state azimuth: seed phase difference minus pump phase
/// difference.
pub fn prepared_phase(cfg: &EnbsConfig) -> f64 {
    cfg.seed_phase_difference() - cfg.pump_phase_difference()
}

/// Idler-state overlap `|a1||a2| / sqrt((1+|a1|^2)(1+|a2|^2))`, the
/// continuous which-path distinguishability in [0, 1).
pub fn idler_overlap(alpha1: C64, alpha2: C64) -> f64 {
    let a1 = alpha1.norm_sqr();
    let a2 = alpha2.norm_sqr();
    (a1 * a2).sqrt() / ((1.0 + a1) * (1.0 + a2)).sqrt()
}

/// Closed-form reduced signal density: populations `r_j^2 |a_j|^2`,
/// coherence `sqrt(rho11 rho22) F exp(-i phi)`.
pub fn reduced_density(cfg: &EnbsConfig) -> Result<SignalDensity> {
    cfg.validate()?;
    let rho11 = cfg.r1 * cfg.r1 * cfg.alpha1.norm_sqr();
    let rho22 = cfg.r2 * cfg.r2 * cfg.alpha2.norm_sqr();
    let magnitude = (rho11 * rho22).sqrt() * idler_overlap(cfg.alpha1, cfg.alpha2);
    let coherence = C64::from_polar(magnitude, -prepared_phase(cfg));
    Ok(SignalDensity {
        rho11,
        rho22,
        coherence,
    })
}

/// Bloch angles of the prepared state: `theta = 2 atan2(|a2|, |a1|)`,
/// `phi` the prepared phase.
pub fn bloch_angles(cfg: &EnbsConfig) -> BlochState {
    BlochState {
        theta: 2.0 * cfg.alpha2.norm().atan2(cfg.alpha1.norm()),
        phi: prepared_phase(cfg),
    }
}

/// Fringe visibility `2 sqrt(rho11 rho22) F` on the trace-normalized
/// single-photon subspace.
pub fn visibility(cfg: &EnbsConfig) -> Result<f64> {
    reduced_density(cfg)?.visibility()
}

/// Visibility law with a degraded seed overlap factor (0.9 reproduces
/// the ND-filter run): `factor * x / (1 + x)` at `x = |alpha|^2`.
pub fn nd_filter_visibility(alpha_sq: f64, overlap_factor: f64) -> f64 {
    overlap_factor * alpha_sq / (1.0 + alpha_sq)
}

/// `P_B = (1 + V cos(chi)) / 2` at detection phase `chi`.
pub fn bright_probability(visibility: f64, detection_phase: f64) -> f64 {
    0.5 * (1.0 + visibility * detection_phase.cos())
}

/// Detection probability of the prepared state at signal phase
/// `phi_s`: `(1 + V cos(phi + phi_s)) / 2`.
pub fn detection_probability(cfg: &EnbsConfig, phi_s: f64) -> Result<f64> {
    Ok(bright_probability(
        visibility(cfg)?,
        prepared_phase(cfg) + phi_s,
    ))
}

/// Predictability / visibility / source-purity triple of the
/// trace-normalized matrix; `p^2 + v^2 = mu^2` holds identically.
pub fn duality_triple(rho: &SignalDensity) -> Result<DualityTriple> {
    let n = rho.normalized()?;
    let predictability = (n.rho11 - n.rho22).abs();
    let visibility = 2.0 * n.coherence.norm();
    let tr_sq = n.rho11 * n.rho11 + n.rho22 * n.rho22 + 2.0 * n.coherence.norm_sqr();
    let source_purity = (2.0 * tr_sq - 1.0).max(0.0).sqrt();
    Ok(DualityTriple {
        predictability,
        visibility,
        source_purity,
    })
}

/// Brute-force reduced signal density from the truncated Fock space.
///
/// Builds the first-order joint state
/// `|vac>|a1>|a2> + r1 e^{i(phi_p1 - phi_sd1)} |1,0> (a1^dag |a1>) |a2>
///  + r2 e^{i(phi_p2 - phi_sd2)} |0,1> |a1> (a2^dag |a2>)`,
/// partial-traces the idlers and returns the raw single-photon signal
/// block (populations `r_j^2 (1 + |a_j|^2)`, not trace-normalized).
pub fn oracle_reduced_density(cfg: &EnbsConfig) -> Result<SignalDensity> {
    cfg.validate()?;
    for (name, a) in [("alpha1", cfg.alpha1), ("alpha2", cfg.alpha2)] {
        if a.norm() > 4.0 {
            return Err(Error::param(format!(
                "{name} magnitude {} outside the oracle range |alpha| <= 4",
                a.norm()
            )));
        }
    }

    let signal_space = ModeSpace::new(vec![1, 1])?;
    let seed1 = coherent_state(cfg.alpha1, coherent_cutoff(cfg.alpha1.norm()))?;
    let seed2 = coherent_state(cfg.alpha2, coherent_cutoff(cfg.alpha2.norm()))?;
    // unnormalized a^dag |alpha_j>
    let (added1, norm1) = photon_add(&seed1, 0)?;
    let (added2, norm2) = photon_add(&seed2, 0)?;
    let spacs1 = added1.scaled(C64::new(norm1, 0.0));
    let spacs2 = added2.scaled(C64::new(norm2, 0.0));

    let vac_s = MultiModeState::vacuum(signal_space.clone());
    let sig10 = MultiModeState::basis(signal_space.clone(), &[1, 0])?;
    let sig01 = MultiModeState::basis(signal_space, &[0, 1])?;

    let mut joint = tensor(&tensor(&vac_s, &seed1)?, &seed2)?;
    let branch1 = tensor(&tensor(&sig10, &spacs1)?, &seed2)?;
    let branch2 = tensor(&tensor(&sig01, &seed1)?, &spacs2)?;
    joint.add_scaled(&branch1, C64::from_polar(cfg.r1, cfg.phi_p1 - cfg.phi_sd1))?;
    joint.add_scaled(&branch2, C64::from_polar(cfg.r2, cfg.phi_p2 - cfg.phi_sd2))?;

    // signal modes are 0 and 1; flat indices 1 = |1,0>, 2 = |0,1>
    let reduced = state_partial_trace(&joint, &[0, 1])?;
    Ok(SignalDensity {
        rho11: reduced.element(1, 1).re,
        rho22: reduced.element(2, 2).re,
        coherence: reduced.element(2, 1),
    })
}
