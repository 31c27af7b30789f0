//! Fixed-period sinusoid fitting for fringe datasets.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::FringeDataset;

/// Least-squares parameters of `offset * (1 + V cos(x + delta))`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FitResult {
    pub visibility: f64,
    /// Phase offset (rad).
    pub delta: f64,
    /// Mean level `A` of the model.
    pub offset: f64,
    pub rms_residual: f64,
}

/// Exact least-squares fit of `A + B cos(x + delta)` with the period
/// fixed at 2 pi.
///
/// The model is linear in `(A, B cos delta, -B sin delta)`, so the
/// normal equations solve it in closed form; on a uniform full-period
/// grid this coincides with the frequency-1 discrete Fourier component.
/// Returns visibility `V = B / A`.
pub fn fit_sinusoid(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(Error::param("x/y length mismatch"));
    }
    if xs.len() < 8 {
        return Err(Error::DegenerateFringe {
            reason: format!("{} points, need at least 8", xs.len()),
        });
    }
    let span =
        xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min);
    if span < std::f64::consts::PI {
        return Err(Error::DegenerateFringe {
            reason: format!("span {span:.3} rad is below half a period"),
        });
    }

    let mut m = Matrix3::<f64>::zeros();
    let mut b = Vector3::<f64>::zeros();
    for (&x, &y) in xs.iter().zip(ys) {
        let row = Vector3::new(1.0, x.cos(), x.sin());
        m += row * row.transpose();
        b += row * y;
    }
    let sol = m.lu().solve(&b).ok_or_else(|| Error::DegenerateFringe {
        reason: "singular normal equations".into(),
    })?;
    let (a, c, s) = (sol[0], sol[1], sol[2]);
    let b_amp = c.hypot(s);
    let delta = (-s).atan2(c);

    let visibility = if b_amp <= f64::EPSILON * (a.abs() + 1.0) {
        0.0
    } else if a > 0.0 {
        b_amp / a
    } else {
        return Err(Error::DegenerateFringe {
            reason: format!("non-positive mean level {a}"),
        });
    };

    let rms_residual = (xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (a + c * x.cos() + s * x.sin());
            r * r
        })
        .sum::<f64>()
        / xs.len() as f64)
        .sqrt();

    Ok(FitResult {
        visibility,
        delta,
        offset: a,
        rms_residual,
    })
}

/// Fit a scanned fringe; uses the sampled counts when present, the
/// noiseless probabilities otherwise.
pub fn fit_fringe(data: &FringeDataset) -> Result<FitResult> {
    let xs: Vec<f64> = data.points.iter().map(|p| p.phase).collect();
    let ys: Vec<f64> = if data.points.iter().all(|p| p.counts.is_some()) {
        data.points
            .iter()
            .map(|p| p.counts.unwrap() as f64)
            .collect()
    } else {
        data.points.iter().map(|p| p.p_bright).collect()
    };
    fit_sinusoid(&xs, &ys)
}
