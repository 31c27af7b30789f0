//! CSV emitters for the dataset types.
//!
//! Column layouts are part of the tool's external contract:
//! fringes are `phase_rad,p_bright[,counts]` (counts only when noise
//! was requested), spectra are `freq_hz,power_db,is_peak` with the flag
//! as 0/1, and the profile emitters take their two column names from
//! the caller. Values use shortest round-trip float formatting; every
//! emitted string ends in a newline.

use std::fmt::Write;

use crate::scan::{FringeDataset, SpectrumPoint};

/// `phase_rad,p_bright[,counts]` rows of a scanned fringe.
pub fn fringe_csv(data: &FringeDataset) -> String {
    let with_counts = data.points.iter().all(|p| p.counts.is_some());
    let mut out = String::new();
    if with_counts {
        out.push_str("phase_rad,p_bright,counts\n");
        for p in &data.points {
            writeln!(out, "{},{},{}", p.phase, p.p_bright, p.counts.unwrap()).unwrap();
        }
    } else {
        out.push_str("phase_rad,p_bright\n");
        for p in &data.points {
            writeln!(out, "{},{}", p.phase, p.p_bright).unwrap();
        }
    }
    out
}

/// `freq_hz,power_db,is_peak` rows of a power spectrum.
pub fn spectrum_csv(points: &[SpectrumPoint]) -> String {
    let mut out = String::from("freq_hz,power_db,is_peak\n");
    for p in points {
        writeln!(out, "{},{},{}", p.freq_hz, p.power_db, u8::from(p.is_peak)).unwrap();
    }
    out
}

/// Two-column CSV with a caller-chosen header, e.g. `theta_rad,p0`,
/// `theta_rad,g2`, or `delta_rad,p_bright`.
pub fn pairs_csv(header: &str, pairs: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(16 * pairs.len() + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for (x, y) in pairs {
        writeln!(out, "{x},{y}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enbs::EnbsConfig;
    use crate::scan::{run_scan, NoiseSpec, ScanSpec, ScanTarget};
    use std::f64::consts::PI;

    fn spec(noise: Option<NoiseSpec>) -> ScanSpec {
        ScanSpec {
            target: ScanTarget::Signal,
            start: 0.0,
            stop: 2.0 * PI,
            steps: 8,
            base: EnbsConfig::equal_seeding(1.0, 0.01).unwrap(),
            phi_s0: 0.0,
            noise,
        }
    }

    #[test]
    fn counts_column_tracks_noise_request() {
        let clean = fringe_csv(&run_scan(&spec(None)).unwrap());
        assert!(clean.starts_with("phase_rad,p_bright\n"));
        assert!(clean.ends_with('\n'));
        assert_eq!(clean.lines().count(), 9);

        let noisy = fringe_csv(&run_scan(&spec(Some(NoiseSpec::seeded(100.0, 3)))).unwrap());
        assert!(noisy.starts_with("phase_rad,p_bright,counts\n"));
        assert!(noisy.lines().skip(1).all(|l| l.split(',').count() == 3));
    }

    #[test]
    fn empty_profile_is_header_only() {
        assert_eq!(pairs_csv("delta_rad,p_bright", &[]), "delta_rad,p_bright\n");
    }
}
