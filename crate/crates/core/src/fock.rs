//! Dense truncated Fock-space numerics: multi-mode states, tensor
//! products, inner products, and partial traces.
//!
//! Everything here is deliberately brute-force. These routines are the
//! independent oracle against which the closed-form expressions in
//! [`crate::enbs`] and [`crate::unified`] are checked, so they avoid any
//! shortcut that could share a bug with the analytic path.
//!
//! Multi-mode Fock indices are flattened little-endian: mode 0 is the
//! fastest-varying digit, so `flat = n_0 + (c_0+1) * (n_1 + (c_1+1) * ...)`
//! for per-mode cutoffs `c_i`. Tests depend on this layout bit-for-bit.
//!
//! Norms are never silently fixed up; operations report norm factors and
//! callers decide what to do with them.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Hard ceiling on the flattened state dimension (amplitude count).
pub const DIMENSION_LIMIT: usize = 10_000_000;

/// Tail probability tolerated when truncating a coherent state.
pub const TAIL_TOL: f64 = 1e-12;

/// Cutoff rule keeping the coherent tail below [`TAIL_TOL`] through
/// `|alpha|` of about 4: `max(15, ceil(|a|^2 + 8 |a| + 10))`.
pub fn coherent_cutoff(alpha_abs: f64) -> usize {
    let rule = (alpha_abs * alpha_abs + 8.0 * alpha_abs + 10.0).ceil() as usize;
    rule.max(15)
}

/// A list of bosonic modes with per-mode photon-number cutoffs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeSpace {
    cutoffs: Vec<usize>,
}

impl ModeSpace {
    /// Build a mode space from per-mode cutoffs (each at least 1).
    pub fn new(cutoffs: Vec<usize>) -> Result<Self> {
        if cutoffs.is_empty() {
            return Err(Error::param("mode space needs at least one mode"));
        }
        if cutoffs.contains(&0) {
            return Err(Error::param("every cutoff must be at least 1"));
        }
        let mut dim: usize = 1;
        for &c in &cutoffs {
            dim = dim.checked_mul(c + 1).ok_or(Error::DimensionGuard {
                dim: usize::MAX,
                limit: DIMENSION_LIMIT,
            })?;
            if dim > DIMENSION_LIMIT {
                return Err(Error::DimensionGuard {
                    dim,
                    limit: DIMENSION_LIMIT,
                });
            }
        }
        Ok(Self { cutoffs })
    }

    pub fn single(cutoff: usize) -> Result<Self> {
        Self::new(vec![cutoff])
    }

    pub fn mode_count(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn cutoff(&self, mode: usize) -> usize {
        self.cutoffs[mode]
    }

    /// Per-mode level count `cutoff + 1`.
    pub fn levels(&self, mode: usize) -> usize {
        self.cutoffs[mode] + 1
    }

    pub fn total_dim(&self) -> usize {
        self.cutoffs.iter().map(|&c| c + 1).product()
    }

    /// Stride of `mode` in the little-endian flattening.
    pub fn stride(&self, mode: usize) -> usize {
        self.cutoffs[..mode].iter().map(|&c| c + 1).product()
    }

    /// Flatten per-mode occupation numbers to a linear index.
    pub fn flatten(&self, occupations: &[usize]) -> usize {
        debug_assert_eq!(occupations.len(), self.cutoffs.len());
        let mut idx = 0;
        let mut stride = 1;
        for (n, &c) in occupations.iter().zip(&self.cutoffs) {
            debug_assert!(*n <= c);
            idx += n * stride;
            stride *= c + 1;
        }
        idx
    }

    /// Occupation number of `mode` within flat index `idx`.
    pub fn occupation(&self, idx: usize, mode: usize) -> usize {
        (idx / self.stride(mode)) % self.levels(mode)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.cutoffs.len() {
            return Err(Error::ModeIndex {
                mode,
                mode_count: self.cutoffs.len(),
            });
        }
        Ok(())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.cutoffs != other.cutoffs {
            return Err(Error::SpaceMismatch {
                left: self.cutoffs.clone(),
                right: other.cutoffs.clone(),
            });
        }
        Ok(())
    }
}

/// A pure state over a [`ModeSpace`], stored as a dense amplitude vector.
#[derive(Clone, Debug)]
pub struct MultiModeState {
    space: ModeSpace,
    amps: Vec<C64>,
}

impl MultiModeState {
    /// All-zero amplitude vector (not a physical state until filled).
    pub fn zero(space: ModeSpace) -> Self {
        let dim = space.total_dim();
        Self {
            space,
            amps: vec![C64::ZERO; dim],
        }
    }

    /// Single-excitation basis ket `|occupations>`.
    pub fn basis(space: ModeSpace, occupations: &[usize]) -> Result<Self> {
        if occupations.len() != space.mode_count() {
            return Err(Error::param("occupation list length != mode count"));
        }
        for (m, &n) in occupations.iter().enumerate() {
            if n > space.cutoff(m) {
                return Err(Error::CutoffOverflow {
                    mode: m,
                    population: 1.0,
                    tol: 0.0,
                });
            }
        }
        let idx = space.flatten(occupations);
        let mut st = Self::zero(space);
        st.amps[idx] = C64::ONE;
        Ok(st)
    }

    pub fn vacuum(space: ModeSpace) -> Self {
        let mut st = Self::zero(space);
        st.amps[0] = C64::ONE;
        st
    }

    pub fn from_amplitudes(space: ModeSpace, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != space.total_dim() {
            return Err(Error::param("amplitude length != space dimension"));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::param("non-finite amplitude"));
        }
        Ok(Self { space, amps })
    }

    pub fn space(&self) -> &ModeSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, occupations: &[usize]) -> C64 {
        self.amps[self.space.flatten(occupations)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let amps = self.amps.iter().map(|a| a * factor).collect();
        Self {
            space: self.space.clone(),
            amps,
        }
    }

    /// In-place `self += factor * other`; spaces must match.
    pub fn add_scaled(&mut self, other: &Self, factor: C64) -> Result<()> {
        self.space.check_same(&other.space)?;
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += factor * b;
        }
        Ok(())
    }

    /// `<n_mode>` for one mode, summed directly over the amplitudes.
    pub fn mode_number_expectation(&self, mode: usize) -> Result<f64> {
        self.space.check_mode(mode)?;
        let mut acc = 0.0;
        for (idx, a) in self.amps.iter().enumerate() {
            acc += self.space.occupation(idx, mode) as f64 * a.norm_sqr();
        }
        Ok(acc)
    }
}

/// Truncated coherent state `|alpha>` on a single mode.
///
/// Amplitudes are `exp(-|a|^2/2) a^n / sqrt(n!)`. Errors out when the
/// requested cutoff leaves a tail heavier than [`TAIL_TOL`].
pub fn coherent_state(alpha: C64, cutoff: usize) -> Result<MultiModeState> {
    let space = ModeSpace::single(cutoff)?;
    let mut amps = Vec::with_capacity(cutoff + 1);
    let prefactor = (-alpha.norm_sqr() / 2.0).exp();
    let mut term = C64::new(prefactor, 0.0);
    amps.push(term);
    for n in 1..=cutoff {
        term *= alpha / C64::new((n as f64).sqrt(), 0.0);
        amps.push(term);
    }
    let state = MultiModeState { space, amps };
    let retained = state.norm_sqr();
    if retained < 1.0 - TAIL_TOL {
        return Err(Error::Truncation {
            cutoff,
            alpha_abs: alpha.norm(),
            retained,
            tail_tol: TAIL_TOL,
        });
    }
    Ok(state)
}

/// Coherent state with the cutoff picked by [`coherent_cutoff`].
pub fn coherent_state_auto(alpha: C64) -> Result<MultiModeState> {
    coherent_state(alpha, coherent_cutoff(alpha.norm()))
}

/// Apply a creation operator to one mode.
///
/// Returns the normalized result together with the pre-normalization
/// norm `|| a^dag psi ||`. The input must be normalized and must not
/// hold more than [`TAIL_TOL`] population in the top Fock level of the
/// target mode (one photon of headroom is required).
pub fn photon_add(state: &MultiModeState, mode: usize) -> Result<(MultiModeState, f64)> {
    state.space.check_mode(mode)?;
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - 1.0).abs() > 1e-9 {
        return Err(Error::Unnormalized {
            norm_sqr,
            tol: 1e-9,
        });
    }
    let cutoff = state.space.cutoff(mode);
    let top: f64 = state
        .amps
        .iter()
        .enumerate()
        .filter(|(idx, _)| state.space.occupation(*idx, mode) == cutoff)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    if top > TAIL_TOL {
        return Err(Error::CutoffOverflow {
            mode,
            population: top,
            tol: TAIL_TOL,
        });
    }
    let stride = state.space.stride(mode);
    let mut raised = MultiModeState::zero(state.space.clone());
    for (idx, a) in state.amps.iter().enumerate() {
        let n = state.space.occupation(idx, mode);
        if n < cutoff {
            raised.amps[idx + stride] += ((n + 1) as f64).sqrt() * a;
        }
    }
    let factor = raised.norm();
    let normalized = raised.scaled(C64::new(1.0 / factor, 0.0));
    Ok((normalized, factor))
}

/// Apply an annihilation operator to one mode; result is unnormalized.
pub fn apply_annihilate(state: &MultiModeState, mode: usize) -> Result<MultiModeState> {
    state.space.check_mode(mode)?;
    let stride = state.space.stride(mode);
    let mut lowered = MultiModeState::zero(state.space.clone());
    for (idx, a) in state.amps.iter().enumerate() {
        let n = state.space.occupation(idx, mode);
        if n > 0 {
            lowered.amps[idx - stride] += (n as f64).sqrt() * a;
        }
    }
    Ok(lowered)
}

/// Kronecker composition; the modes of `a` come first (and stay the
/// fastest-varying digits of the flattened index).
pub fn tensor(a: &MultiModeState, b: &MultiModeState) -> Result<MultiModeState> {
    let mut cutoffs = a.space.cutoffs.clone();
    cutoffs.extend_from_slice(&b.space.cutoffs);
    let space = ModeSpace::new(cutoffs)?;
    let dim_a = a.space.total_dim();
    let mut amps = vec![C64::ZERO; space.total_dim()];
    for (ib, vb) in b.amps.iter().enumerate() {
        if *vb == C64::ZERO {
            continue;
        }
        let base = ib * dim_a;
        for (ia, va) in a.amps.iter().enumerate() {
            amps[base + ia] = va * vb;
        }
    }
    Ok(MultiModeState { space, amps })
}

/// Inner product `<a|b>`; conjugate-symmetric in its arguments.
pub fn overlap(a: &MultiModeState, b: &MultiModeState) -> Result<C64> {
    a.space.check_same(&b.space)?;
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// Dense density matrix over a [`ModeSpace`].
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    space: ModeSpace,
    matrix: DMatrix<C64>,
}

/// Self-consistency numbers for a density matrix; thresholds live with
/// the callers, not here.
#[derive(Clone, Copy, Debug)]
pub struct DensityDiagnostics {
    /// `max |rho - rho^H|` elementwise.
    pub hermiticity_deviation: f64,
    pub trace: C64,
    pub min_eigenvalue: f64,
}

impl DensityMatrix {
    pub fn new(space: ModeSpace, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = space.total_dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::param("density matrix shape != space dimension"));
        }
        Ok(Self { space, matrix })
    }

    pub fn space(&self) -> &ModeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn element(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diagonal().iter().sum()
    }

    pub fn diagnostics(&self) -> DensityDiagnostics {
        let adj = self.matrix.adjoint();
        let hermiticity_deviation = (&self.matrix - &adj)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        // Eigenvalues of the Hermitian part; fine for diagnostics.
        let herm = (&self.matrix + &adj).scale(0.5);
        let eig = nalgebra::linalg::SymmetricEigen::new(herm);
        let min_eigenvalue = eig
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        DensityDiagnostics {
            hermiticity_deviation,
            trace: self.trace(),
            min_eigenvalue,
        }
    }
}

/// `|psi><psi|`, guarded so the squared dimension stays addressable.
pub fn density_from(state: &MultiModeState) -> Result<DensityMatrix> {
    let dim = state.space.total_dim();
    let sq = dim.checked_mul(dim).ok_or(Error::DimensionGuard {
        dim: usize::MAX,
        limit: DIMENSION_LIMIT,
    })?;
    if sq > DIMENSION_LIMIT {
        return Err(Error::DimensionGuard {
            dim: sq,
            limit: DIMENSION_LIMIT,
        });
    }
    let mut m = DMatrix::zeros(dim, dim);
    for (i, a) in state.amps.iter().enumerate() {
        if *a == C64::ZERO {
            continue;
        }
        for (j, b) in state.amps.iter().enumerate() {
            m[(i, j)] = a * b.conj();
        }
    }
    DensityMatrix::new(state.space.clone(), m)
}

/// Index offsets splitting a flat index into kept and traced parts.
struct TraceSplit {
    keep_space: ModeSpace,
    keep_offsets: Vec<usize>,
    traced_offsets: Vec<usize>,
}

fn trace_split(space: &ModeSpace, keep: &[usize]) -> Result<TraceSplit> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut seen = vec![false; space.mode_count()];
    for &m in keep {
        space.check_mode(m)?;
        if seen[m] {
            return Err(Error::param("duplicate mode in keep set"));
        }
        seen[m] = true;
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    let traced: Vec<usize> = (0..space.mode_count()).filter(|m| !seen[*m]).collect();

    let offsets = |modes: &[usize]| -> Vec<usize> {
        let mut offs = vec![0usize];
        for &m in modes {
            let stride = space.stride(m);
            let levels = space.levels(m);
            let mut next = Vec::with_capacity(offs.len() * levels);
            for n in 0..levels {
                for &o in &offs {
                    next.push(o + n * stride);
                }
            }
            offs = next;
        }
        offs
    };

    let keep_space = ModeSpace::new(keep_sorted.iter().map(|&m| space.cutoff(m)).collect())?;
    Ok(TraceSplit {
        keep_space,
        keep_offsets: offsets(&keep_sorted),
        traced_offsets: offsets(&traced),
    })
}

/// Partial trace of a density matrix over all modes not in `keep`.
///
/// Kept modes stay in increasing mode order. Trace and Hermiticity are
/// preserved by construction.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let split = trace_split(&rho.space, keep)?;
    let kd = split.keep_offsets.len();
    let mut m = DMatrix::zeros(kd, kd);
    for (i, &oi) in split.keep_offsets.iter().enumerate() {
        for (j, &oj) in split.keep_offsets.iter().enumerate() {
            let mut acc = C64::ZERO;
            for &ot in &split.traced_offsets {
                acc += rho.matrix[(oi + ot, oj + ot)];
            }
            m[(i, j)] = acc;
        }
    }
    DensityMatrix::new(split.keep_space, m)
}

/// Reduced density matrix of a pure state, without materializing the
/// full `|psi><psi|` (the traced dimension can be large).
pub fn state_partial_trace(state: &MultiModeState, keep: &[usize]) -> Result<DensityMatrix> {
    let split = trace_split(&state.space, keep)?;
    let kd = split.keep_offsets.len();
    let mut m = DMatrix::zeros(kd, kd);
    for &ot in &split.traced_offsets {
        for (i, &oi) in split.keep_offsets.iter().enumerate() {
            let ai = state.amps[oi + ot];
            if ai == C64::ZERO {
                continue;
            }
            for (j, &oj) in split.keep_offsets.iter().enumerate() {
                m[(i, j)] += ai * state.amps[oj + ot].conj();
            }
        }
    }
    DensityMatrix::new(split.keep_space, m)
}

/// Scale-invariant purity `Tr(rho^2) / Tr(rho)^2`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let tr = rho.trace().re;
    let tr2: f64 = rho.matrix.iter().map(|z| z.norm_sqr()).sum();
    tr2 / (tr * tr)
}
