//! Four systems, one skeleton: the Λ-atom ground-state doublet, N
//! discrete slits, an M-source array, and a discretized continuous
//! slit all define a coupling row whose kernel is dark. Each builder
//! below returns the row together with its bright/dark basis, or
//! evaluates the observable that the bright-mode population predicts.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::collective::{CollectiveSystem, CouplingOperator, ModeBasis};
use crate::error::{Error, Result};
use crate::fock::{apply_annihilate, coherent_state_auto, ModeSpace, MultiModeState};

/// Two ground states driven to a common excited state.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LambdaSpec {
    /// Rabi frequencies (rad/s), nonnegative, not both zero.
    pub omega1: f64,
    pub omega2: f64,
    /// Relative phase between the two driving lasers (rad).
    pub laser_phase_diff: f64,
}

impl LambdaSpec {
    pub fn rabi_norm(&self) -> f64 {
        self.omega1.hypot(self.omega2)
    }

    fn validate(&self) -> Result<()> {
        if self.omega1 < 0.0 || self.omega2 < 0.0 {
            return Err(Error::param("Rabi frequencies must be nonnegative"));
        }
        if self.rabi_norm() == 0.0 {
            return Err(Error::param("at least one Rabi frequency must be nonzero"));
        }
        Ok(())
    }
}

/// Coupling row `(omega1, omega2 e^{i dphi}) / Omega` over the two
/// ground states; its kernel is the trapped (dark) superposition.
pub fn lambda_system(spec: &LambdaSpec) -> Result<CollectiveSystem> {
    spec.validate()?;
    let omega = spec.rabi_norm();
    let row = vec![
        C64::new(spec.omega1 / omega, 0.0),
        C64::from_polar(spec.omega2 / omega, spec.laser_phase_diff),
    ];
    Ok(CollectiveSystem::new(CouplingOperator::from_row(
        row,
        "lambda-system drive",
    )?))
}

/// Single detector row `(1, e^{i phi_2}, ..., e^{i phi_N}) / sqrt(N)`
/// over `n` slit modes; `phases` holds the `n - 1` propagation phases
/// of slits 2..N relative to the first.
pub fn nslit_system(n: usize, phases: &[f64]) -> Result<CollectiveSystem> {
    if n < 2 {
        return Err(Error::param("need at least two slits"));
    }
    if phases.len() != n - 1 {
        return Err(Error::param(format!(
            "expected {} relative phases for {} slits, got {}",
            n - 1,
            n,
            phases.len()
        )));
    }
    let inv = 1.0 / (n as f64).sqrt();
    let mut row = Vec::with_capacity(n);
    row.push(C64::new(inv, 0.0));
    row.extend(phases.iter().map(|&p| C64::from_polar(inv, p)));
    Ok(CollectiveSystem::new(CouplingOperator::from_row(
        row,
        format!("{n}-slit detector"),
    )?))
}

/// An array of `sources_m` equally driven sources probed over a phase
/// grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirichletSpec {
    pub sources_m: usize,
    /// Detection-phase grid (rad).
    pub delta_grid: Vec<f64>,
}

impl DirichletSpec {
    fn validate(&self) -> Result<()> {
        if !(2..=64).contains(&self.sources_m) {
            return Err(Error::param(format!(
                "sources_m = {} outside [2, 64]",
                self.sources_m
            )));
        }
        Ok(())
    }
}

/// Normalized M-source interference profile
/// `(1/M^2) |sin(M d/2) / sin(d/2)|^2`, with the removable
/// singularities at multiples of 2 pi evaluated as their limit 1.
pub fn dirichlet_point(m: usize, delta: f64) -> f64 {
    let half = 0.5 * delta;
    let s = half.sin();
    if s == 0.0 {
        return 1.0;
    }
    let ratio = (m as f64 * half).sin() / (m as f64 * s);
    ratio * ratio
}

/// Evaluate [`dirichlet_point`] over the spec's grid.
pub fn dirichlet_profile(spec: &DirichletSpec) -> Result<Vec<(f64, f64)>> {
    spec.validate()?;
    Ok(spec
        .delta_grid
        .iter()
        .map(|&d| (d, dirichlet_point(spec.sources_m, d)))
        .collect())
}

/// A single slit of width `width_b` discretized into `segments_k`
/// midpoint segments, observed at the listed angles.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlitSpec {
    /// Slit width (m).
    pub width_b: f64,
    /// Optical wavenumber `2 pi / lambda` (1/m).
    pub wavenumber_k: f64,
    pub segments_k: usize,
    /// Observation angles (rad), each within +-pi/2.
    pub angles: Vec<f64>,
}

impl SlitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.width_b > 0.0) || !(self.wavenumber_k > 0.0) {
            return Err(Error::param("slit width and wavenumber must be positive"));
        }
        if self.segments_k < 16 {
            return Err(Error::param(format!(
                "segments_k = {} < 16",
                self.segments_k
            )));
        }
        if self
            .angles
            .iter()
            .any(|t| t.abs() > std::f64::consts::FRAC_PI_2)
        {
            return Err(Error::param("angles must lie within +-pi/2"));
        }
        Ok(())
    }

    /// Midpoints of the `segments_k` slit segments.
    fn midpoints(&self) -> impl Iterator<Item = f64> + '_ {
        let dx = self.width_b / self.segments_k as f64;
        (0..self.segments_k).map(move |m| (m as f64 + 0.5) * dx)
    }

    /// Propagation phase accumulated by segment position `x` toward
    /// angle `theta`.
    fn propagation_phase(&self, x: f64, theta: f64) -> f64 {
        self.wavenumber_k * x * theta.sin()
    }

    /// Detector row at `theta`: `e^{i phi(x_m, theta)} / sqrt(K)`.
    pub fn detector_row(&self, theta: f64) -> Vec<C64> {
        let inv = 1.0 / (self.segments_k as f64).sqrt();
        self.midpoints()
            .map(|x| C64::from_polar(inv, self.propagation_phase(x, theta)))
            .collect()
    }

    /// Bright-mode amplitude of uniform single-photon illumination:
    /// `(1/K) sum_m e^{i phi(x_m, theta)}`.
    pub fn bright_amplitude(&self, theta: f64) -> C64 {
        let k = self.segments_k as f64;
        self.midpoints()
            .map(|x| C64::from_polar(1.0, self.propagation_phase(x, theta)))
            .sum::<C64>()
            / k
    }
}

/// Diffraction parameter `beta = (k b / 2) sin(theta)`; the one place
/// the convention lives.
pub fn fraunhofer_beta(wavenumber_k: f64, width_b: f64, theta: f64) -> f64 {
    0.5 * wavenumber_k * width_b * theta.sin()
}

/// `sin(beta)^2 / beta^2` reference profile.
pub fn sinc_sq(beta: f64) -> f64 {
    let s = crate::enbs::sinc(beta);
    s * s
}

/// Bright-mode occupation `|c_0(theta)|^2` of the uniformly illuminated
/// slit per observation angle; converges to `sinc^2(beta)` as the
/// segment count grows.
pub fn slit_bright_occupation(spec: &SlitSpec) -> Result<Vec<(f64, f64)>> {
    spec.validate()?;
    Ok(spec
        .angles
        .iter()
        .map(|&theta| (theta, spec.bright_amplitude(theta).norm_sqr()))
        .collect())
}

/// Detector-oriented Fourier basis over the slit segments at `theta`:
/// mode `n` has components `e^{-i phi(x_m, theta)} e^{i 2 pi n (m +
/// 1/2) / K} / sqrt(K)`. Mode 0 is bright; the other `K - 1` modes are
/// exactly dark.
pub fn slit_dark_basis(spec: &SlitSpec, theta: f64) -> Result<ModeBasis> {
    spec.validate()?;
    let k = spec.segments_k;
    let inv = 1.0 / (k as f64).sqrt();
    let phases: Vec<f64> = spec
        .midpoints()
        .map(|x| spec.propagation_phase(x, theta))
        .collect();

    let fourier_mode = |n: usize| -> DVector<C64> {
        DVector::from_fn(k, |m, _| {
            let fourier = 2.0 * std::f64::consts::PI * n as f64 * (m as f64 + 0.5) / k as f64;
            C64::from_polar(inv, fourier - phases[m])
        })
    };

    let bright = vec![fourier_mode(0)];
    let dark: Vec<DVector<C64>> = (1..k).map(fourier_mode).collect();

    let row = CouplingOperator::from_row(spec.detector_row(theta), "slit detector")?;
    let residual = dark.iter().map(|v| row.apply(v).norm()).fold(0.0, f64::max);
    Ok(ModeBasis {
        bright,
        dark,
        residual,
        rank_zero: false,
    })
}

/// Input state for the second-order correlation profile.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub enum G2Input {
    /// `N` photons in the uniform slit supermode.
    Fock(usize),
    /// A coherent state in the uniform slit supermode.
    Coherent(C64),
}

/// Normalized second-order correlation of the detected mode per angle.
///
/// All dark modes annihilate the detector operator, so the detected
/// field reduces to `c_0(theta)` times the supermode operator; the
/// moments are then taken in that single mode with [`crate::fock`].
/// `N`-photon inputs give the flat profile `1 - 1/N`; coherent inputs
/// give 1.
pub fn g2_profile(input: G2Input, spec: &SlitSpec) -> Result<Vec<(f64, f64)>> {
    spec.validate()?;
    let state: MultiModeState = match input {
        G2Input::Fock(0) => {
            return Err(Error::param("g2 is undefined for zero photons"));
        }
        G2Input::Fock(n) => MultiModeState::basis(ModeSpace::single(n)?, &[n])?,
        G2Input::Coherent(alpha) => {
            if alpha.norm() == 0.0 {
                return Err(Error::param("g2 is undefined for an empty coherent state"));
            }
            coherent_state_auto(alpha)?
        }
    };

    let lowered = apply_annihilate(&state, 0)?;
    let twice = apply_annihilate(&lowered, 0)?;
    let m1 = lowered.norm_sqr(); // <a^dag a>
    let m2 = twice.norm_sqr(); // <a^dag a^dag a a>

    Ok(spec
        .angles
        .iter()
        .map(|&theta| {
            let occ = spec.bright_amplitude(theta).norm_sqr();
            let num = occ * occ * m2;
            let den = (occ * m1) * (occ * m1);
            let g2 = if den > 0.0 { num / den } else { m2 / (m1 * m1) };
            (theta, g2)
        })
        .collect())
}
