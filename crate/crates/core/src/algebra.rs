//! λ-profiles, truncation windows and the finite matrices of (R, L, S).
//!
//! The basis is labelled by integers j (negative labels are hole states).
//! On a window `[j_min, j_max]` the lowering operator carries λ_j at
//! `(j, j+1)`, the raising operator carries it at `(j+1, j)`, and S is
//! diagonal with `S_jj = λ_j² − λ_{j−1}²`. Links with λ_j = 0 decouple the
//! basis into invariant blocks.

use ndarray::{s, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LadderError, Result};
use crate::linalg::{commutator, max_abs_diff, CMatrix, ZERO};

/// λ² values below this magnitude are treated as a broken link.
pub const ZERO_LINK_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// λ_j² = j + 1 for j ≥ −1, zero below: the oscillator limit.
    Sho,
    /// λ_j = 1 for every j: R and L commute.
    ConstantOne,
    /// λ_j = 1 for j ≥ 0 and 0 below: the phase-operator algebra.
    Phase,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Sho => "sho",
            Profile::ConstantOne => "constant-one",
            Profile::Phase => "phase",
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = LadderError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sho" => Ok(Profile::Sho),
            "constant-one" => Ok(Profile::ConstantOne),
            "phase" => Ok(Profile::Phase),
            other => Err(LadderError::InvalidInput(format!("unknown profile '{other}'"))),
        }
    }
}

/// The single source of truth for λ_j.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSpec {
    Parametric { alpha: f64, beta: f64, sigma: f64 },
    Profile { profile: Profile },
}

impl AlgebraSpec {
    pub fn parametric(alpha: f64, beta: f64, sigma: f64) -> Self {
        AlgebraSpec::Parametric { alpha, beta, sigma }
    }

    pub fn profile(profile: Profile) -> Self {
        AlgebraSpec::Profile { profile }
    }

    /// `(α, β, σ)` when the spec is parametric.
    pub fn params(&self) -> Option<(f64, f64, f64)> {
        match *self {
            AlgebraSpec::Parametric { alpha, beta, sigma } => Some((alpha, beta, sigma)),
            AlgebraSpec::Profile { .. } => None,
        }
    }

    pub fn require_params(&self) -> Result<(f64, f64, f64)> {
        self.params().ok_or_else(|| {
            LadderError::InvalidInput("operation requires a parametric (alpha, beta, sigma) spec".into())
        })
    }

    /// Same algebra with α and β exchanged.
    pub fn swapped(&self) -> Self {
        match *self {
            AlgebraSpec::Parametric { alpha, beta, sigma } => AlgebraSpec::Parametric {
                alpha: beta,
                beta: alpha,
                sigma,
            },
            other => other,
        }
    }

    /// `(α + m, β + m, σ)`; profiles are returned unchanged.
    pub fn shifted(&self, m: i64) -> Self {
        match *self {
            AlgebraSpec::Parametric { alpha, beta, sigma } => AlgebraSpec::Parametric {
                alpha: alpha + m as f64,
                beta: beta + m as f64,
                sigma,
            },
            other => other,
        }
    }

    /// The σ entering `[L,S] = 2σL` and `[S,R] = 2σR`, when the algebra closes.
    /// The oscillator and constant-one profiles close with σ = 0; the phase
    /// profile does not close.
    pub fn closure_sigma(&self) -> Option<f64> {
        match *self {
            AlgebraSpec::Parametric { sigma, .. } => Some(sigma),
            AlgebraSpec::Profile { profile: Profile::Sho | Profile::ConstantOne } => Some(0.0),
            AlgebraSpec::Profile { profile: Profile::Phase } => None,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            AlgebraSpec::Parametric { alpha, beta, sigma } => {
                format!("alpha={alpha}, beta={beta}, sigma={sigma}")
            }
            AlgebraSpec::Profile { profile } => format!("profile={}", profile.name()),
        }
    }
}

/// λ_j² for the given spec. Negative values are legal here.
pub fn lambda_sq(spec: &AlgebraSpec, j: i64) -> f64 {
    match *spec {
        AlgebraSpec::Parametric { alpha, beta, sigma } => {
            // grouped so that exchanging α and β is bit-exact
            sigma * ((alpha + j as f64) * (beta + j as f64))
        }
        AlgebraSpec::Profile { profile } => match profile {
            Profile::Sho => {
                if j >= -1 {
                    (j + 1) as f64
                } else {
                    0.0
                }
            }
            Profile::ConstantOne => 1.0,
            Profile::Phase => {
                if j >= 0 {
                    1.0
                } else {
                    0.0
                }
            }
        },
    }
}

/// Positive square root of λ_j².
pub fn lambda(spec: &AlgebraSpec, j: i64) -> Result<f64> {
    let sq = lambda_sq(spec, j);
    if sq < 0.0 {
        if sq > -ZERO_LINK_TOL {
            return Ok(0.0);
        }
        return Err(LadderError::NonUnitaryRegime { j, lambda_sq: sq });
    }
    Ok(sq.sqrt())
}

pub fn is_broken_link(spec: &AlgebraSpec, j: i64) -> bool {
    lambda_sq(spec, j).abs() <= ZERO_LINK_TOL
}

/// Truncation of the basis to `[j_min, j_max]`, with an inner core
/// `[core_lo, core_hi]` on which results are trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexWindow {
    pub j_min: i64,
    pub j_max: i64,
    pub core_lo: i64,
    pub core_hi: i64,
}

impl IndexWindow {
    pub fn new(j_min: i64, j_max: i64, core_lo: i64, core_hi: i64) -> Result<Self> {
        if !(j_min <= core_lo && core_lo <= core_hi && core_hi <= j_max) {
            return Err(LadderError::InvalidWindow(format!(
                "need j_min <= core_lo <= core_hi <= j_max, got [{j_min}, {j_max}] core [{core_lo}, {core_hi}]"
            )));
        }
        if j_max - j_min + 1 < 2 {
            return Err(LadderError::InvalidWindow(format!(
                "window [{j_min}, {j_max}] must hold at least two states"
            )));
        }
        Ok(IndexWindow { j_min, j_max, core_lo, core_hi })
    }

    /// Window whose core is the whole window.
    pub fn full(j_min: i64, j_max: i64) -> Result<Self> {
        Self::new(j_min, j_max, j_min, j_max)
    }

    /// Window whose core is inset by `inset` on both sides.
    pub fn inset(j_min: i64, j_max: i64, inset: i64) -> Result<Self> {
        Self::new(j_min, j_max, j_min + inset, j_max - inset)
    }

    /// Extends the core by `pad` states on each side, stopping early at a
    /// broken link (a closed side needs no padding).
    pub fn padded(spec: &AlgebraSpec, core_lo: i64, core_hi: i64, pad: i64) -> Result<Self> {
        let mut j_min = core_lo - pad;
        for j in (core_lo - pad..core_lo).rev() {
            if is_broken_link(spec, j) {
                j_min = j + 1;
                break;
            }
        }
        let mut j_max = core_hi + pad;
        for j in core_hi..core_hi + pad {
            if is_broken_link(spec, j) {
                j_max = j;
                break;
            }
        }
        if j_min > core_lo || j_max < core_hi {
            return Err(LadderError::InvalidWindow(format!(
                "core [{core_lo}, {core_hi}] straddles a broken link of {}",
                spec.label()
            )));
        }
        if j_max == j_min {
            j_max += 1;
        }
        Self::new(j_min, j_max, core_lo, core_hi)
    }

    pub fn dim(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    pub fn core_dim(&self) -> usize {
        (self.core_hi - self.core_lo + 1) as usize
    }

    /// Matrix index of basis label `j`.
    pub fn index(&self, j: i64) -> usize {
        debug_assert!(self.contains(j));
        (j - self.j_min) as usize
    }

    pub fn contains(&self, j: i64) -> bool {
        self.j_min <= j && j <= self.j_max
    }

    pub fn core_contains(&self, j: i64) -> bool {
        self.core_lo <= j && j <= self.core_hi
    }

    /// Index range of the core inside the window matrices.
    pub fn core_range(&self) -> std::ops::Range<usize> {
        self.index(self.core_lo)..self.index(self.core_hi) + 1
    }

    /// Whether the states below `j_min` couple into the window.
    pub fn lower_open(&self, spec: &AlgebraSpec) -> bool {
        !is_broken_link(spec, self.j_min - 1)
    }

    /// Whether the states above `j_max` couple into the window.
    pub fn upper_open(&self, spec: &AlgebraSpec) -> bool {
        !is_broken_link(spec, self.j_max)
    }

    /// The window grown by `by` states on each open side; the core is kept.
    pub fn enlarged(&self, spec: &AlgebraSpec, by: i64) -> Self {
        let j_min = if self.lower_open(spec) { self.j_min - by } else { self.j_min };
        let j_max = if self.upper_open(spec) { self.j_max + by } else { self.j_max };
        IndexWindow { j_min, j_max, ..*self }
    }

    /// The core as a window of its own.
    pub fn core_window(&self) -> Self {
        let mut w = IndexWindow {
            j_min: self.core_lo,
            j_max: self.core_hi,
            core_lo: self.core_lo,
            core_hi: self.core_hi,
        };
        if w.j_max == w.j_min {
            w.j_max += 1;
        }
        w
    }
}

/// Finite-window matrices of (R, L, S).
#[derive(Debug, Clone)]
pub struct LadderMatrices {
    pub window: IndexWindow,
    pub l: CMatrix,
    pub r: CMatrix,
    pub s: CMatrix,
    /// λ_j for j in `[j_min, j_max − 1]`, i.e. the links inside the window.
    pub links: Vec<f64>,
}

impl LadderMatrices {
    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn s_diag(&self, j: i64) -> f64 {
        let k = self.window.index(j);
        self.s[[k, k]].re
    }

    /// `a L + b R + c S`.
    pub fn combination(&self, a: Complex64, b: Complex64, c: Complex64) -> CMatrix {
        &self.l * a + &self.r * b + &self.s * c
    }
}

pub fn build_matrices(spec: &AlgebraSpec, window: IndexWindow) -> Result<LadderMatrices> {
    let n = window.dim();
    let mut sq = Vec::with_capacity(n + 1);
    for j in window.j_min - 1..=window.j_max {
        let v = lambda_sq(spec, j);
        if v < -ZERO_LINK_TOL {
            return Err(LadderError::NonUnitaryRegime { j, lambda_sq: v });
        }
        sq.push(v.max(0.0));
    }
    // sq[k] holds λ²_{j_min − 1 + k}
    let links: Vec<f64> = (0..n - 1).map(|k| sq[k + 1].sqrt()).collect();
    let mut l = Array2::from_elem((n, n), ZERO);
    let mut r = Array2::from_elem((n, n), ZERO);
    let mut s = Array2::from_elem((n, n), ZERO);
    for (k, &lam) in links.iter().enumerate() {
        l[[k, k + 1]] = Complex64::new(lam, 0.0);
        r[[k + 1, k]] = Complex64::new(lam, 0.0);
    }
    for k in 0..n {
        s[[k, k]] = Complex64::new(sq[k + 1] - sq[k], 0.0);
    }
    Ok(LadderMatrices { window, l, r, s, links })
}

/// Maximum entrywise deviation of `[L,R] − S`, `[L,S] − 2σL` and
/// `[S,R] − 2σR` over the core rows and columns. For the phase profile,
/// which does not close, only `[L,R] − S` is measured.
pub fn commutator_residual(m: &LadderMatrices, spec: &AlgebraSpec) -> f64 {
    let core = m.window.core_range();
    let view = |a: &CMatrix| a.slice(s![core.clone(), core.clone()]).to_owned();
    let mut worst = max_abs_diff(view(&commutator(&m.l, &m.r)).view(), view(&m.s).view());
    if let Some(sigma) = spec.closure_sigma() {
        let two_sigma = Complex64::new(2.0 * sigma, 0.0);
        let ls = view(&commutator(&m.l, &m.s));
        let sr = view(&commutator(&m.s, &m.r));
        worst = worst
            .max(max_abs_diff(ls.view(), view(&(&m.l * two_sigma)).view()))
            .max(max_abs_diff(sr.view(), view(&(&m.r * two_sigma)).view()));
    }
    worst
}

/// A maximal run of basis labels connected by nonzero links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub lo: i64,
    pub hi: i64,
}

impl Block {
    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }
}

/// Splits the window at every link with λ_j = 0.
pub fn detect_blocks(spec: &AlgebraSpec, window: IndexWindow) -> Vec<Block> {
    let mut blocks = Vec::new();
    let mut lo = window.j_min;
    for j in window.j_min..window.j_max {
        if is_broken_link(spec, j) {
            blocks.push(Block { lo, hi: j });
            lo = j + 1;
        }
    }
    blocks.push(Block { lo, hi: window.j_max });
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(z: Complex64) -> f64 {
        assert_eq!(z.im, 0.0);
        z.re
    }

    #[test]
    fn lambda_sq_examples() {
        assert_eq!(lambda_sq(&AlgebraSpec::parametric(1.0, 1.0, 1.0), 2), 9.0);
        assert_eq!(lambda_sq(&AlgebraSpec::parametric(1.0, 3.5, 1.0), -1), 0.0);
        assert_eq!(lambda_sq(&AlgebraSpec::profile(Profile::ConstantOne), -7), 1.0);
        assert_eq!(lambda_sq(&AlgebraSpec::profile(Profile::Sho), -1), 0.0);
        assert_eq!(lambda_sq(&AlgebraSpec::profile(Profile::Sho), 4), 5.0);
        assert_eq!(lambda_sq(&AlgebraSpec::profile(Profile::Phase), -1), 0.0);
    }

    #[test]
    fn matrices_for_unit_parameters() {
        let spec = AlgebraSpec::parametric(1.0, 1.0, 1.0);
        let m = build_matrices(&spec, IndexWindow::full(0, 3).unwrap()).unwrap();
        let sup: Vec<f64> = (0..3).map(|k| re(m.l[[k, k + 1]])).collect();
        assert_eq!(sup, vec![1.0, 2.0, 3.0]);
        let diag: Vec<f64> = (0..4).map(|k| re(m.s[[k, k]])).collect();
        assert_eq!(diag, vec![1.0, 3.0, 5.0, 7.0]);
        assert_eq!(m.r, m.l.t().to_owned());
    }

    #[test]
    fn phase_profile_has_impulse_s() {
        let spec = AlgebraSpec::profile(Profile::Phase);
        let m = build_matrices(&spec, IndexWindow::full(0, 3).unwrap()).unwrap();
        let diag: Vec<f64> = (0..4).map(|k| re(m.s[[k, k]])).collect();
        assert_eq!(diag, vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn negative_lambda_sq_is_rejected() {
        let spec = AlgebraSpec::parametric(1.0, -2.0, 1.0);
        let err = build_matrices(&spec, IndexWindow::full(1, 4).unwrap()).unwrap_err();
        assert!(matches!(err, LadderError::NonUnitaryRegime { j: 0 | 1, .. }), "{err:?}");
        let err = build_matrices(&spec, IndexWindow::full(0, 4).unwrap()).unwrap_err();
        assert!(matches!(err, LadderError::NonUnitaryRegime { .. }), "{err:?}");
    }

    #[test]
    fn closure_holds_on_core() {
        let spec = AlgebraSpec::parametric(1.0, 1.0, 1.0);
        let m = build_matrices(&spec, IndexWindow::new(0, 12, 0, 10).unwrap()).unwrap();
        assert!(commutator_residual(&m, &spec) <= 1e-13);

        let spec = AlgebraSpec::parametric(2.0, 0.5, -0.25);
        // σ < 0 with these (α, β) leaves λ² ≥ 0 only between the roots -2 and -0.5,
        // so take the hole-side block where the product is non-positive.
        let spec_ok = AlgebraSpec::parametric(2.0, -12.5, -0.25);
        let m = build_matrices(&spec_ok, IndexWindow::new(-1, 11, -1, 9).unwrap()).unwrap();
        assert!(commutator_residual(&m, &spec_ok) <= 1e-13);
        assert!(build_matrices(&spec, IndexWindow::new(0, 12, 0, 10).unwrap()).is_err());
    }

    #[test]
    fn truncation_corner_shows_up_when_core_is_full_window() {
        let spec = AlgebraSpec::parametric(1.0, 1.0, 1.0);
        let m = build_matrices(&spec, IndexWindow::full(0, 12).unwrap()).unwrap();
        assert!(commutator_residual(&m, &spec) > 1.0);
    }

    #[test]
    fn blocks_split_at_zero_links() {
        // λ² = (1+j)(3+j) vanishes at j = −3 and j = −1
        let spec = AlgebraSpec::parametric(1.0, 3.0, 1.0);
        let blocks = detect_blocks(&spec, IndexWindow::full(-4, 4).unwrap());
        assert_eq!(
            blocks,
            vec![Block { lo: -4, hi: -3 }, Block { lo: -2, hi: -1 }, Block { lo: 0, hi: 4 }]
        );

        let spec = AlgebraSpec::profile(Profile::ConstantOne);
        let blocks = detect_blocks(&spec, IndexWindow::full(-4, 4).unwrap());
        assert_eq!(blocks, vec![Block { lo: -4, hi: 4 }]);

        // spin-1 realisation: σ = −1/2, α = 1, β = −2 has zeros at j = −1 and j = 2
        let spec = AlgebraSpec::parametric(1.0, -2.0, -0.5);
        let blocks = detect_blocks(&spec, IndexWindow::full(-3, 3).unwrap());
        assert_eq!(
            blocks,
            vec![Block { lo: -3, hi: -1 }, Block { lo: 0, hi: 2 }, Block { lo: 3, hi: 3 }]
        );
    }

    #[test]
    fn padded_window_stops_at_closed_sides() {
        let spec = AlgebraSpec::parametric(2.0, 3.0, 1.0);
        let w = IndexWindow::padded(&spec, 0, 5, 10).unwrap();
        assert_eq!((w.j_min, w.j_max), (-1, 15));
        assert!(!w.lower_open(&spec));
        assert!(w.upper_open(&spec));

        let su2 = AlgebraSpec::parametric(3.0, -4.0, -0.5);
        let w = IndexWindow::padded(&su2, -2, 4, 10).unwrap();
        assert_eq!((w.j_min, w.j_max), (-2, 4));
        assert_eq!(w.enlarged(&su2, 8), w);
    }
}
