//! Simulated fringe-scan experiments.
//!
//! A scan picks one phase knob (pump, seed, or signal), sweeps it over
//! a grid, and records the bright-port detection probability, optionally
//! with emulated Poisson counting statistics. Fits, Bloch-circle
//! mappings, flux scaling, photon budgets, and the pulse-train spectrum
//! live alongside.
//!
//! Reproducibility contract: with noise enabled, point `i` of a scan
//! draws from a ChaCha8 generator constructed as
//! `seed_from_u64(rng_seed)` on stream `i`. Points are therefore
//! independent of evaluation order, and a fixed seed gives bit-identical
//! datasets whether points are generated serially or in parallel.

mod comb;
mod fit;
mod noise;

pub use comb::{comb_spectrum, harmonic_contrast_db, CombSpec, SpectrumPoint};
pub use fit::{fit_fringe, fit_sinusoid, FitResult};
pub use noise::poisson_counts;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::enbs::{bright_probability, prepared_phase, visibility, EnbsConfig};
use crate::error::{Error, Result};

/// Which phase a scan sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanTarget {
    /// Sweep the second source's pump input phase.
    Pump,
    /// Sweep the second source's seed input phase.
    Seed,
    /// Sweep the signal phase at the output beam splitter.
    Signal,
}

impl ScanTarget {
    /// Sign of `d(detection phase) / d(scanned phase)`: the pump knob
    /// enters the prepared phase with a minus sign.
    pub fn slope_sign(self) -> f64 {
        match self {
            ScanTarget::Pump => -1.0,
            ScanTarget::Seed | ScanTarget::Signal => 1.0,
        }
    }
}

impl fmt::Display for ScanTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ScanTarget::Pump => "pump",
            ScanTarget::Seed => "seed",
            ScanTarget::Signal => "signal",
        };
        f.write_str(s)
    }
}

impl FromStr for ScanTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pump" => Ok(ScanTarget::Pump),
            "seed" => Ok(ScanTarget::Seed),
            "signal" => Ok(ScanTarget::Signal),
            other => Err(Error::param(format!(
                "unknown scan target {other:?} (expected pump, seed or signal)"
            ))),
        }
    }
}

/// Counting-noise settings for a scan.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Mean detected counts per frame, averaged over one fringe period.
    pub frames_mean_counts: f64,
    pub rng_seed: u64,
    /// Additive background counts per frame for sensitivity studies;
    /// zero by default (the measured fringes leave at most a percent
    /// of unmodeled background).
    #[serde(default)]
    pub background_counts: f64,
}

impl NoiseSpec {
    pub fn seeded(frames_mean_counts: f64, rng_seed: u64) -> Self {
        Self {
            frames_mean_counts,
            rng_seed,
            background_counts: 0.0,
        }
    }
}

/// One fringe-scan request.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanSpec {
    pub target: ScanTarget,
    /// Scan range (rad); `steps` points at spacing
    /// `(stop - start) / steps`, stop excluded, so a `[0, 2 pi)` scan
    /// tiles the period exactly.
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub base: EnbsConfig,
    /// Fixed signal phase while pump or seed is scanned.
    pub phi_s0: f64,
    pub noise: Option<NoiseSpec>,
}

impl ScanSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 8 {
            return Err(Error::param(format!("steps = {} < 8", self.steps)));
        }
        if !(self.stop > self.start) {
            return Err(Error::param("stop must exceed start"));
        }
        if let Some(noise) = &self.noise {
            if !(noise.frames_mean_counts > 0.0) {
                return Err(Error::param("frames_mean_counts must be positive"));
            }
            if !(noise.background_counts >= 0.0) {
                return Err(Error::param("background_counts must be nonnegative"));
            }
        }
        self.base.validate()
    }

    /// The scan grid: evenly spaced from `start`, `stop` excluded.
    pub fn phases(&self) -> Vec<f64> {
        let dx = (self.stop - self.start) / self.steps as f64;
        (0..self.steps)
            .map(|i| self.start + i as f64 * dx)
            .collect()
    }

    /// Config and signal phase with the scanned value injected.
    fn instantiate(&self, value: f64) -> (EnbsConfig, f64) {
        let mut cfg = self.base;
        let mut phi_s = self.phi_s0;
        match self.target {
            ScanTarget::Pump => cfg.phi_p2 = value,
            ScanTarget::Seed => cfg.phi_sd2 = value,
            ScanTarget::Signal => phi_s = value,
        }
        (cfg, phi_s)
    }
}

/// One scanned point: the swept phase, the bright probability, and the
/// sampled counts when noise was requested.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FringePoint {
    pub phase: f64,
    pub p_bright: f64,
    pub counts: Option<u64>,
}

/// A scanned fringe with its generating spec.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FringeDataset {
    pub points: Vec<FringePoint>,
    pub meta: ScanSpec,
}

impl FringeDataset {
    pub fn phases(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.phase).collect()
    }

    pub fn p_bright(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.p_bright).collect()
    }
}

/// Run one scan. With noise, counts are Poisson with mean
/// `2 * frames_mean_counts * P_B` (plus any configured background), so
/// the background-free average over a full period equals
/// `frames_mean_counts`.
pub fn run_scan(spec: &ScanSpec) -> Result<FringeDataset> {
    spec.validate()?;
    let mut points = Vec::with_capacity(spec.steps);
    for (i, phase) in spec.phases().into_iter().enumerate() {
        let (cfg, phi_s) = spec.instantiate(phase);
        let p_bright = bright_probability(visibility(&cfg)?, prepared_phase(&cfg) + phi_s);
        let counts = spec.noise.as_ref().map(|n| {
            let mean = 2.0 * n.frames_mean_counts * p_bright + n.background_counts;
            poisson_counts(mean, n.rng_seed, i as u64)
        });
        points.push(FringePoint {
            phase,
            p_bright,
            counts,
        });
    }
    Ok(FringeDataset {
        points,
        meta: spec.clone(),
    })
}

/// Fit results and cross-checks for the pump/seed/signal scan triple
/// run from one base configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThreeScanReport {
    pub pump: FitResult,
    pub seed: FitResult,
    pub signal: FitResult,
    /// Largest pairwise difference between the three fitted
    /// visibilities.
    pub visibility_spread: f64,
    /// Largest deviation between the pump fringe and the seed fringe
    /// evaluated at reflected phases; zero when the two scans are
    /// mirror images of each other.
    pub reflection_residual: f64,
    /// `d(detection phase)/d(scanned phase)` per scan.
    pub pump_slope_sign: f64,
    pub seed_slope_sign: f64,
    pub signal_slope_sign: f64,
    /// Fit period, fixed at 2 pi.
    pub period: f64,
}

impl ThreeScanReport {
    pub fn visibilities(&self) -> [f64; 3] {
        [
            self.pump.visibility,
            self.seed.visibility,
            self.signal.visibility,
        ]
    }
}

/// Run the pump, seed, and signal scans over `[0, 2 pi]` from one base
/// config and compare the fits.
pub fn three_scan_equivalence(base: &EnbsConfig, steps: usize) -> Result<ThreeScanReport> {
    let spec_for = |target| ScanSpec {
        target,
        start: 0.0,
        stop: 2.0 * PI,
        steps,
        base: *base,
        phi_s0: 0.0,
        noise: None,
    };
    let pump_ds = run_scan(&spec_for(ScanTarget::Pump))?;
    let seed_ds = run_scan(&spec_for(ScanTarget::Seed))?;
    let signal_ds = run_scan(&spec_for(ScanTarget::Signal))?;
    let pump = fit_fringe(&pump_ds)?;
    let seed = fit_fringe(&seed_ds)?;
    let signal = fit_fringe(&signal_ds)?;

    let vs = [pump.visibility, seed.visibility, signal.visibility];
    let mut visibility_spread = 0.0f64;
    for i in 0..3 {
        for j in i + 1..3 {
            visibility_spread = visibility_spread.max((vs[i] - vs[j]).abs());
        }
    }

    // Mirror check: P_pump(x) should equal the seed generator at
    // -(delta_pump + delta_seed) - x.
    let seed_spec = spec_for(ScanTarget::Seed);
    let mut reflection_residual = 0.0f64;
    for point in &pump_ds.points {
        let reflected = -(pump.delta + seed.delta) - point.phase;
        let (cfg, phi_s) = seed_spec.instantiate(reflected);
        let p = bright_probability(visibility(&cfg)?, prepared_phase(&cfg) + phi_s);
        reflection_residual = reflection_residual.max((p - point.p_bright).abs());
    }

    Ok(ThreeScanReport {
        pump,
        seed,
        signal,
        visibility_spread,
        reflection_residual,
        pump_slope_sign: ScanTarget::Pump.slope_sign(),
        seed_slope_sign: ScanTarget::Seed.slope_sign(),
        signal_slope_sign: ScanTarget::Signal.slope_sign(),
        period: 2.0 * PI,
    })
}

/// Place scan points on a circle of radius `ring_radius` at angle
/// `slope_sign * phase + delta`, with `delta` taken from the fit.
pub fn bloch_map(data: &FringeDataset, fit: &FitResult, ring_radius: f64) -> Vec<(f64, f64)> {
    let sign = data.meta.target.slope_sign();
    data.points
        .iter()
        .map(|p| {
            let angle = sign * p.phase + fit.delta;
            (ring_radius * angle.cos(), ring_radius * angle.sin())
        })
        .collect()
}

/// Expected detected counts per point in the high-flux regime:
/// `n_bar * P_B`, leaving the fringe shape untouched.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HighFluxDataset {
    /// `(phase, expected_counts)` per scan point.
    pub points: Vec<(f64, f64)>,
    pub n_bar: f64,
}

impl HighFluxDataset {
    pub fn fit(&self) -> Result<FitResult> {
        let xs: Vec<f64> = self.points.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = self.points.iter().map(|p| p.1).collect();
        fit_sinusoid(&xs, &ys)
    }
}

pub fn high_flux(data: &FringeDataset, n_bar: f64) -> HighFluxDataset {
    let points = data
        .points
        .iter()
        .map(|p| (p.phase, n_bar * p.p_bright))
        .collect();
    HighFluxDataset { points, n_bar }
}

/// Time-bin budget of a counting experiment.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PhotonBudget {
    pub bins: u64,
    pub expected_counts: f64,
}

/// Number of pulse bins in an integration window and the expected
/// photon count at the given per-bin occupancy.
pub fn photon_budget(occupancy: f64, t_int: f64, f_rep: f64) -> Result<PhotonBudget> {
    if !(occupancy >= 0.0) {
        return Err(Error::param("occupancy must be nonnegative"));
    }
    if !(t_int > 0.0) || !(f_rep > 0.0) {
        return Err(Error::param("t_int and f_rep must be positive"));
    }
    let bins_f = t_int * f_rep;
    Ok(PhotonBudget {
        bins: bins_f.round() as u64,
        expected_counts: occupancy * bins_f,
    })
}

/// Convert a path-length change to a phase shift at the given
/// wavelength: `2 pi dx / lambda`.
pub fn phase_from_path(delta_x: f64, wavelength: f64) -> Result<f64> {
    if !(wavelength > 0.0) {
        return Err(Error::param("wavelength must be positive"));
    }
    Ok(2.0 * PI * delta_x / wavelength)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64 as C64;

    fn base_v099() -> EnbsConfig {
        // |alpha|^2 = 99 puts the visibility at exactly 0.99
        EnbsConfig::equal_seeding(99f64.sqrt(), 0.01).unwrap()
    }

    #[test]
    fn signal_scan_extrema() {
        let spec = ScanSpec {
            target: ScanTarget::Signal,
            start: 0.0,
            stop: 2.0 * PI,
            steps: 8, // even, so the grid hits both 0 and pi
            base: base_v099(),
            phi_s0: 0.0,
            noise: None,
        };
        let ds = run_scan(&spec).unwrap();
        let max = ds.p_bright().into_iter().fold(f64::MIN, f64::max);
        let min = ds.p_bright().into_iter().fold(f64::MAX, f64::min);
        assert_abs_diff_eq!(max, 0.995, epsilon = 1e-12);
        assert_abs_diff_eq!(min, 0.005, epsilon = 1e-12);
    }

    #[test]
    fn zero_visibility_scan_is_flat() {
        let base = EnbsConfig::new(
            C64::new(1.0, 0.0),
            C64::ZERO,
            0.01,
            0.01,
            0.0,
            0.0,
            0.0,
            0.0,
        )
        .unwrap();
        let spec = ScanSpec {
            target: ScanTarget::Pump,
            start: 0.0,
            stop: 2.0 * PI,
            steps: 16,
            base,
            phi_s0: 0.0,
            noise: None,
        };
        let ds = run_scan(&spec).unwrap();
        for p in &ds.points {
            assert_abs_diff_eq!(p.p_bright, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn pump_and_seed_scans_mirror_each_other() {
        let mut base = base_v099();
        base.phi_sd1 = 0.37;
        base.phi_p1 = -0.81;
        let report = three_scan_equivalence(&base, 64).unwrap();
        assert!(report.visibility_spread < 1e-9);
        assert!(report.reflection_residual < 1e-9);
        assert_eq!(report.pump_slope_sign, -1.0);
        assert_eq!(report.seed_slope_sign, 1.0);
    }

    #[test]
    fn three_scan_visibilities_at_full_seeding() {
        let report =
            three_scan_equivalence(&EnbsConfig::equal_seeding(10.0, 0.01).unwrap(), 48).unwrap();
        for v in report.visibilities() {
            assert_abs_diff_eq!(v, 100.0 / 101.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn three_scan_flat_when_one_seed_off() {
        let base = EnbsConfig::new(
            C64::new(1.0, 0.0),
            C64::ZERO,
            0.01,
            0.01,
            0.0,
            0.0,
            0.0,
            0.0,
        )
        .unwrap();
        let report = three_scan_equivalence(&base, 32).unwrap();
        for v in report.visibilities() {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn scan_spec_guards() {
        let mut spec = ScanSpec {
            target: ScanTarget::Signal,
            start: 0.0,
            stop: 2.0 * PI,
            steps: 4,
            base: base_v099(),
            phi_s0: 0.0,
            noise: None,
        };
        assert!(run_scan(&spec).is_err());
        spec.steps = 16;
        spec.stop = -1.0;
        assert!(run_scan(&spec).is_err());
    }

    #[test]
    fn noise_counts_deterministic_per_seed() {
        let spec = ScanSpec {
            target: ScanTarget::Signal,
            start: 0.0,
            stop: 2.0 * PI,
            steps: 32,
            base: base_v099(),
            phi_s0: 0.0,
            noise: Some(NoiseSpec::seeded(30_000.0, 7)),
        };
        let a = run_scan(&spec).unwrap();
        let b = run_scan(&spec).unwrap();
        let ca: Vec<u64> = a.points.iter().map(|p| p.counts.unwrap()).collect();
        let cb: Vec<u64> = b.points.iter().map(|p| p.counts.unwrap()).collect();
        assert_eq!(ca, cb);
        // on the periodic grid the analytic period mean is exactly the
        // frame mean; the sample mean must land within 3 sigma of it
        let n = ca.len() as f64;
        let mean = ca.iter().sum::<u64>() as f64 / n;
        let lambda_mean: f64 = a
            .points
            .iter()
            .map(|p| 2.0 * 30_000.0 * p.p_bright)
            .sum::<f64>()
            / n;
        assert_abs_diff_eq!(lambda_mean, 30_000.0, epsilon = 1e-6);
        let sigma = (lambda_mean / n).sqrt();
        assert!((mean - lambda_mean).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn background_counts_wash_out_the_fitted_fringe() {
        let clean = ScanSpec {
            target: ScanTarget::Signal,
            start: 0.0,
            stop: 2.0 * PI,
            steps: 64,
            base: base_v099(),
            phi_s0: 0.0,
            noise: Some(NoiseSpec::seeded(30_000.0, 11)),
        };
        let with_bg = ScanSpec {
            noise: Some(NoiseSpec {
                frames_mean_counts: 30_000.0,
                rng_seed: 11,
                background_counts: 30_000.0,
            }),
            ..clean.clone()
        };
        let v_clean = fit_fringe(&run_scan(&clean).unwrap()).unwrap().visibility;
        let v_bg = fit_fringe(&run_scan(&with_bg).unwrap()).unwrap().visibility;
        // equal background halves the fitted contrast
        assert!((v_clean - 0.99).abs() < 0.01, "clean {v_clean}");
        assert!((v_bg - 0.495).abs() < 0.01, "with background {v_bg}");
    }

    #[test]
    fn bloch_map_covers_circle() {
        let spec = ScanSpec {
            target: ScanTarget::Seed,
            start: 0.0,
            stop: 2.0 * PI,
            steps: 48,
            base: base_v099(),
            phi_s0: 0.0,
            noise: None,
        };
        let ds = run_scan(&spec).unwrap();
        let fit = fit_fringe(&ds).unwrap();
        let ring = bloch_map(&ds, &fit, 0.96);
        let mut angles: Vec<f64> = ring.iter().map(|(x, y)| y.atan2(*x)).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut max_gap = 0.0f64;
        for w in angles.windows(2) {
            max_gap = max_gap.max(w[1] - w[0]);
        }
        max_gap = max_gap.max(angles[0] + 2.0 * PI - angles[angles.len() - 1]);
        assert!(max_gap < 2.0 * (2.0 * PI / 48.0), "gap {max_gap}");
        for (x, y) in &ring {
            assert_abs_diff_eq!((x * x + y * y).sqrt(), 0.96, epsilon = 1e-12);
        }
    }

    #[test]
    fn bloch_map_snapshot_angle() {
        // a signal scan's fitted delta is the prepared phase, so the
        // point scanned at chi - delta lands on the circle at angle chi
        let chi = 70.0 * PI / 180.0;
        let mut base = base_v099();
        base.phi_sd2 = 0.235;
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
        let snapshot = FringeDataset {
            points: vec![FringePoint {
                phase: chi - fit.delta,
                p_bright: 0.0,
                counts: None,
            }],
            meta: spec,
        };
        let mapped = bloch_map(&snapshot, &fit, 1.0);
        assert_abs_diff_eq!(mapped[0].0, chi.cos(), epsilon = 1e-9);
        assert_abs_diff_eq!(mapped[0].1, chi.sin(), epsilon = 1e-9);
    }

    #[test]
    fn high_flux_scaling_preserves_fit() {
        let spec = ScanSpec {
            target: ScanTarget::Signal,
            start: 0.0,
            stop: 2.0 * PI,
            steps: 32,
            base: base_v099(),
            phi_s0: 0.3,
            noise: None,
        };
        let ds = run_scan(&spec).unwrap();
        let v0 = fit_fringe(&ds).unwrap().visibility;

        let hf1 = high_flux(&ds, 1.0);
        for (p, q) in ds.points.iter().zip(&hf1.points) {
            assert_eq!(p.p_bright, q.1);
        }

        let hf = high_flux(&ds, 5.0e4);
        let hf2 = high_flux(&ds, 1.0e5);
        for (a, b) in hf.points.iter().zip(&hf2.points) {
            assert_abs_diff_eq!(2.0 * a.1, b.1, epsilon = 1e-9);
        }
        let v1 = hf.fit().unwrap().visibility;
        assert_abs_diff_eq!(v0, v1, epsilon = 1e-12);
    }

    #[test]
    fn photon_budget_methods_numbers() {
        let b = photon_budget(0.01, 10e-3, 250e6).unwrap();
        assert_eq!(b.bins, 2_500_000);
        assert_eq!(b.expected_counts, 25_000.0);
        let b2 = photon_budget(0.02, 10e-3, 250e6).unwrap();
        assert_eq!(b2.expected_counts, 50_000.0);
        assert_eq!(
            photon_budget(0.0, 10e-3, 250e6).unwrap().expected_counts,
            0.0
        );
    }

    #[test]
    fn phase_from_path_values() {
        assert_abs_diff_eq!(
            phase_from_path(807e-9, 807e-9).unwrap(),
            2.0 * PI,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            phase_from_path(403.5e-9, 807e-9).unwrap(),
            PI,
            epsilon = 1e-12
        );
        // same displacement, different wavelengths: phases scale as the
        // inverse wavelength ratio
        let p_pump = phase_from_path(1e-6, 530e-9).unwrap();
        let p_signal = phase_from_path(1e-6, 807e-9).unwrap();
        assert_abs_diff_eq!(p_pump / p_signal, 807.0 / 530.0, epsilon = 1e-12);
    }
}
