//! Bright/dark decomposition of a detector-field coupling operator.
//!
//! A detector that couples to `d` field modes through a set of linear
//! forms (the rows of the operator) splits the single-excitation space
//! into a bright subspace it can see and a dark kernel it cannot:
//! `O |dark> = 0`. The decomposition below is the shared skeleton for
//! the Λ-system, N-slit, seeded-source and continuous-slit models in
//! [`crate::unified`].
//!
//! Rank detection uses singular-value thresholding (`sigma <
//! 1e-10 * sigma_max` counts as zero); the kernel is completed by
//! re-orthogonalized Gram-Schmidt against the bright set, and every
//! basis vector is phase-fixed so its first nonzero component is real
//! and positive, which keeps test output reproducible.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Relative singular-value threshold separating rank from kernel.
pub const KERNEL_THRESHOLD: f64 = 1e-10;

/// Detector-field coupling: one complex row per detection channel over
/// a `d`-dimensional single-excitation mode space.
#[derive(Clone, Debug)]
pub struct CouplingOperator {
    matrix: DMatrix<C64>,
    label: String,
}

impl CouplingOperator {
    pub fn new(rows: Vec<Vec<C64>>, label: impl Into<String>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::param("coupling operator needs at least one row"));
        }
        let d = rows[0].len();
        if d < 2 {
            return Err(Error::param("row dimension must be at least 2"));
        }
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::param("rows must share one dimension"));
        }
        if rows
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::param("non-finite coupling coefficient"));
        }
        let matrix = DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j]);
        Ok(Self {
            matrix,
            label: label.into(),
        })
    }

    /// Single-channel operator from one row.
    pub fn from_row(row: Vec<C64>, label: impl Into<String>) -> Result<Self> {
        Self::new(vec![row], label)
    }

    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn row_count(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Plain (unconjugated) application `O * v`: the vector of
    /// detection-channel amplitudes for a single-excitation state.
    pub fn apply(&self, state: &DVector<C64>) -> DVector<C64> {
        &self.matrix * state
    }
}

/// Orthonormal bright/dark split of the mode space of one operator.
#[derive(Clone, Debug)]
pub struct ModeBasis {
    pub bright: Vec<DVector<C64>>,
    pub dark: Vec<DVector<C64>>,
    /// `max_k || O * dark_k ||` over the returned dark vectors.
    pub residual: f64,
    /// Set when the operator had no measurable rank at all; the basis
    /// is then entirely dark.
    pub rank_zero: bool,
}

impl ModeBasis {
    pub fn dim(&self) -> usize {
        self.bright.len() + self.dark.len()
    }
}

/// Fix the global phase so the first component above `tol` is real
/// positive.
fn phase_fix(v: &mut DVector<C64>) {
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-12) {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Bright modes, dark kernel, and the worst-case dark residual of a
/// coupling operator.
///
/// The kernel dimension is `d - rank`. A rank-0 operator yields an
/// all-dark standard basis with [`ModeBasis::rank_zero`] set.
pub fn decompose(op: &CouplingOperator) -> ModeBasis {
    let d = op.dim();
    let svd = op.matrix.clone().svd(false, true);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);

    let mut bright: Vec<DVector<C64>> = Vec::new();
    if sigma_max > 0.0 {
        let v_t = svd.v_t.as_ref().expect("svd computed with v");
        for (k, &sigma) in svd.singular_values.iter().enumerate() {
            if sigma >= KERNEL_THRESHOLD * sigma_max {
                // column k of V = conjugated row k of V^H
                let mut v = DVector::from_fn(d, |i, _| v_t[(k, i)].conj());
                phase_fix(&mut v);
                bright.push(v);
            }
        }
    }
    let rank = bright.len();

    // Complete the kernel: orthogonalize the standard basis against the
    // bright set (and the dark vectors found so far), twice.
    let mut dark: Vec<DVector<C64>> = Vec::with_capacity(d - rank);
    for e in 0..d {
        if dark.len() == d - rank {
            break;
        }
        let mut v = DVector::from_fn(d, |i, _| if i == e { C64::ONE } else { C64::ZERO });
        for _ in 0..2 {
            for b in bright.iter().chain(dark.iter()) {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            v /= C64::new(norm, 0.0);
            phase_fix(&mut v);
            dark.push(v);
        }
    }
    debug_assert_eq!(bright.len() + dark.len(), d);

    let residual = dark.iter().map(|v| op.apply(v).norm()).fold(0.0, f64::max);

    ModeBasis {
        bright,
        dark,
        residual,
        rank_zero: rank == 0,
    }
}

fn check_normalized(state: &DVector<C64>) -> Result<()> {
    let norm_sqr = state.norm_squared();
    if (norm_sqr - 1.0).abs() > 1e-9 {
        return Err(Error::Unnormalized {
            norm_sqr,
            tol: 1e-9,
        });
    }
    Ok(())
}

/// Population of the bright subspace of `op` in a normalized
/// single-excitation state; for a single normalized row this is
/// `|row . state|^2`.
pub fn detection_probability(state: &DVector<C64>, op: &CouplingOperator) -> Result<f64> {
    if state.len() != op.dim() {
        return Err(Error::param("state dimension != operator dimension"));
    }
    check_normalized(state)?;
    let basis = decompose(op);
    Ok(basis.bright.iter().map(|b| b.dotc(state).norm_sqr()).sum())
}

/// Population of the dark subspace; complements
/// [`detection_probability`] to one for normalized states.
pub fn dark_population(state: &DVector<C64>, basis: &ModeBasis) -> f64 {
    basis.dark.iter().map(|d| d.dotc(state).norm_sqr()).sum()
}

/// A coupling operator packaged with its bright/dark basis; what the
/// system builders in [`crate::unified`] hand out.
#[derive(Clone, Debug)]
pub struct CollectiveSystem {
    pub coupling: CouplingOperator,
    pub basis: ModeBasis,
}

impl CollectiveSystem {
    pub fn new(coupling: CouplingOperator) -> Self {
        let basis = decompose(&coupling);
        Self { coupling, basis }
    }
}
