//! Pulse-train synthesis and its discrete power spectrum.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Floor applied before converting power to dB.
const POWER_FLOOR: f64 = 1e-30;

/// A train of Gaussian pulses at a fixed repetition rate.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CombSpec {
    /// Repetition rate (Hz).
    pub f_rep: f64,
    pub n_pulses: usize,
    /// Samples per repetition period; at least 8 (Nyquist guard).
    pub samples_per_period: usize,
    /// Gaussian 1-sigma pulse width (s).
    pub pulse_width: f64,
    /// RMS of the per-pulse carrier phase jitter (rad); 0 for a
    /// phase-coherent train.
    pub carrier_phase_noise_rms: f64,
    /// Peak pulse amplitude (arbitrary units).
    pub amplitude: f64,
    /// Seed for the phase jitter draws.
    pub rng_seed: u64,
}

impl CombSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.f_rep > 0.0) {
            return Err(Error::param("f_rep must be positive"));
        }
        if self.n_pulses < 16 {
            return Err(Error::param(format!("n_pulses = {} < 16", self.n_pulses)));
        }
        if self.samples_per_period < 8 {
            return Err(Error::NyquistGuard {
                reason: format!("samples_per_period = {} < 8", self.samples_per_period),
            });
        }
        let dt = 1.0 / self.f_rep / self.samples_per_period as f64;
        if !(self.pulse_width > 0.0) {
            return Err(Error::param("pulse_width must be positive"));
        }
        if self.pulse_width < dt {
            return Err(Error::NyquistGuard {
                reason: format!(
                    "pulse width {} s is below the sample spacing {} s",
                    self.pulse_width, dt
                ),
            });
        }
        if !(self.amplitude >= 0.0) || !self.carrier_phase_noise_rms.is_finite() {
            return Err(Error::param(
                "amplitude must be nonnegative and jitter finite",
            ));
        }
        Ok(())
    }

    /// Spacing between spectrum bins: `f_rep / n_pulses`.
    pub fn bin_width(&self) -> f64 {
        self.f_rep / self.n_pulses as f64
    }
}

/// One spectrum bin.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub freq_hz: f64,
    pub power_db: f64,
    pub is_peak: bool,
}

/// Synthesize the pulse train and return its one-sided power spectrum
/// with local maxima flagged.
///
/// Pulse `m` is centered at `(m + 1/2) / f_rep` and carries the phase
/// factor `exp(i theta_m)`, where the `theta_m` are zero for a coherent
/// train and Gaussian draws with the configured RMS otherwise.
pub fn comb_spectrum(spec: &CombSpec) -> Result<Vec<SpectrumPoint>> {
    spec.validate()?;
    let period = 1.0 / spec.f_rep;
    let dt = period / spec.samples_per_period as f64;
    let n = spec.n_pulses * spec.samples_per_period;

    let phases: Vec<f64> = if spec.carrier_phase_noise_rms > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
        let jitter = Normal::new(0.0, spec.carrier_phase_noise_rms)
            .map_err(|e| Error::param(format!("phase jitter: {e}")))?;
        (0..spec.n_pulses)
            .map(|_| jitter.sample(&mut rng))
            .collect()
    } else {
        vec![0.0; spec.n_pulses]
    };

    let mut signal = vec![C64::ZERO; n];
    for (m, &theta) in phases.iter().enumerate() {
        let center = (m as f64 + 0.5) * period;
        let phase = C64::from_polar(spec.amplitude, theta);
        for (k, s) in signal.iter_mut().enumerate() {
            let t = k as f64 * dt - center;
            let envelope = (-t * t / (2.0 * spec.pulse_width * spec.pulse_width)).exp();
            if envelope > 1e-18 {
                *s += phase * envelope;
            }
        }
    }

    FftPlanner::new().plan_fft_forward(n).process(&mut signal);
    let norm = 1.0 / n as f64;
    let power: Vec<f64> = signal
        .iter()
        .take(n / 2 + 1)
        .map(|z| (z * norm).norm_sqr())
        .collect();

    let len = power.len();
    let points = power
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let above_left = k > 0 && p > power[k - 1];
            let above_right = k + 1 < len && p > power[k + 1];
            let is_peak = match k {
                0 => above_right && len > 1,
                _ if k + 1 == len => above_left,
                _ => above_left && above_right,
            };
            SpectrumPoint {
                freq_hz: k as f64 * spec.bin_width(),
                power_db: 10.0 * p.max(POWER_FLOOR).log10(),
                is_peak,
            }
        })
        .collect();
    Ok(points)
}

/// Worst-case contrast (dB) between the repetition-rate harmonics
/// `k = 1 ..= k_max` and the median off-harmonic floor.
pub fn harmonic_contrast_db(points: &[SpectrumPoint], f_rep: f64, k_max: usize) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let bin = points[1].freq_hz - points[0].freq_hz;
    let near_harmonic = |freq: f64, window: f64| -> bool {
        let k = (freq / f_rep).round();
        (freq - k * f_rep).abs() <= window * bin
    };

    let mut worst_peak = f64::INFINITY;
    for k in 1..=k_max {
        let target = k as f64 * f_rep;
        let peak = points
            .iter()
            .filter(|p| (p.freq_hz - target).abs() <= bin)
            .map(|p| p.power_db)
            .fold(f64::NEG_INFINITY, f64::max);
        worst_peak = worst_peak.min(peak);
    }

    let mut floor: Vec<f64> = points
        .iter()
        .filter(|p| !near_harmonic(p.freq_hz, 3.0))
        .map(|p| p.power_db)
        .collect();
    if floor.is_empty() {
        return 0.0;
    }
    floor.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = floor[floor.len() / 2];
    worst_peak - median
}
