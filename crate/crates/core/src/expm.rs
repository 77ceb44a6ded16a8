//! Brute-force matrix exponential used as the reference for every
//! factorization and matrix-element claim.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{build_matrices, lambda_sq, AlgebraSpec, IndexWindow};
use crate::error::{LadderError, Result};
use crate::linalg::{identity, norm_inf, CMatrix, I, ZERO};

/// Coefficients of the exponent `a L + b R + c S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coeffs {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl Coeffs {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Self {
        Coeffs { a, b, c }
    }

    /// `(iy, iy, 0)`, the exponent of U₁.
    pub fn u1(y: f64) -> Self {
        Coeffs { a: I * y, b: I * y, c: ZERO }
    }

    /// The y of U₁ when the coefficients have that shape.
    pub fn as_u1(&self) -> Option<f64> {
        (self.c == ZERO && self.a == self.b && self.a.re == 0.0).then_some(self.a.im)
    }

    /// Largest modulus among a and b, which sets how far the exponent reaches.
    pub fn reach(&self) -> f64 {
        self.a.norm().max(self.b.norm())
    }
}

#[derive(Debug, Clone)]
pub struct ExpmResult {
    pub matrix: CMatrix,
    /// Bound on ‖computed − exact‖ in the induced ∞-norm (hence also in max-norm).
    pub remainder_bound: f64,
}

/// Scaling and squaring around a truncated Taylor series.
///
/// The scaled matrix has ∞-norm at most 1/2. The Taylor tail is bounded
/// geometrically from the first dropped term, an allowance for rounding in
/// the series is added, and the total is pushed through each squaring using
/// the computed norms.
pub fn expm(a: &CMatrix) -> Result<ExpmResult> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LadderError::Overflow("non-finite input to expm".into()));
    }
    let norm = norm_inf(a.view());
    if !norm.is_finite() {
        return Err(LadderError::Overflow(format!("input norm {norm}")));
    }
    if norm == 0.0 {
        return Ok(ExpmResult { matrix: identity(n), remainder_bound: 0.0 });
    }

    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scale = 0.5f64.powi(squarings);
    let b = a.mapv(|z| z * scale);
    let x = norm * scale;

    // smallest K with x^{K+1}/(K+1)! below 2^-60
    let mut k = 1usize;
    let mut first_dropped = x * x / 2.0;
    while first_dropped > 2f64.powi(-60) {
        k += 1;
        first_dropped *= x / (k + 1) as f64;
    }
    let tail = first_dropped / (1.0 - x / (k + 2) as f64);

    // Horner: I + B(I + B/2(I + B/3(...)))
    let mut e = identity(n);
    for j in (1..=k).rev() {
        let mut next = b.dot(&e);
        next.mapv_inplace(|z| z / j as f64);
        for d in 0..n {
            next[[d, d]] += 1.0;
        }
        e = next;
    }
    let u = f64::EPSILON / 2.0;
    let gamma = |m: f64| m * u / (1.0 - m * u);
    let mut bound = tail + gamma((k + 2) as f64 * (n as f64 + 2.0)) * x.exp();

    for _ in 0..squarings {
        let e_norm = norm_inf(e.view());
        e = e.dot(&e);
        bound = 2.0 * e_norm * bound + bound * bound + gamma(n as f64) * e_norm * e_norm;
        if !bound.is_finite() || !e_norm.is_finite() {
            return Err(LadderError::Overflow(format!(
                "norm blew up while squaring a {n}x{n} exponential"
            )));
        }
    }
    if e.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LadderError::Overflow("non-finite entries in exp".into()));
    }
    Ok(ExpmResult { matrix: e, remainder_bound: bound })
}

/// Default padding: `max(16, ceil(8·reach·λ_max))`, with λ_max taken over the
/// core extended by 16 states on each side.
pub fn default_pad(spec: &AlgebraSpec, core_lo: i64, core_hi: i64, reach: f64) -> i64 {
    let lam_max = (core_lo - 16..=core_hi + 16)
        .map(|j| lambda_sq(spec, j).max(0.0).sqrt())
        .fold(0.0, f64::max);
    let rule = (8.0 * reach.abs() * lam_max).ceil();
    if rule.is_finite() {
        (rule as i64).max(16)
    } else {
        16
    }
}

/// Window around `[core_lo, core_hi]` padded by the default rule.
pub fn oracle_window(
    spec: &AlgebraSpec,
    core_lo: i64,
    core_hi: i64,
    coeffs: &Coeffs,
) -> Result<IndexWindow> {
    IndexWindow::padded(spec, core_lo, core_hi, default_pad(spec, core_lo, core_hi, coeffs.reach()))
}

/// `exp(aL + bR + cS)` on the window.
pub fn oracle_matrix(spec: &AlgebraSpec, window: IndexWindow, coeffs: &Coeffs) -> Result<ExpmResult> {
    let m = build_matrices(spec, window)?;
    expm(&m.combination(coeffs.a, coeffs.b, coeffs.c))
}

fn check_core(window: &IndexWindow, n: i64, m: i64) -> Result<()> {
    if window.core_contains(n) && window.core_contains(m) {
        Ok(())
    } else {
        Err(LadderError::InvalidWindow(format!(
            "element ({n}, {m}) outside core [{}, {}]",
            window.core_lo, window.core_hi
        )))
    }
}

/// `⟨n| exp(aL + bR + cS) |m⟩` by brute force on the window.
pub fn oracle_element(
    spec: &AlgebraSpec,
    window: IndexWindow,
    coeffs: &Coeffs,
    n: i64,
    m: i64,
) -> Result<Complex64> {
    check_core(&window, n, m)?;
    let e = oracle_matrix(spec, window, coeffs)?;
    Ok(e.matrix[[window.index(n), window.index(m)]])
}

/// Change in the oracle element when every open side grows by 8 states.
pub fn pad_sufficiency(
    spec: &AlgebraSpec,
    window: IndexWindow,
    coeffs: &Coeffs,
    n: i64,
    m: i64,
) -> Result<f64> {
    let base = oracle_element(spec, window, coeffs, n, m)?;
    let bigger = oracle_element(spec, window.enlarged(spec, 8), coeffs, n, m)?;
    Ok((base - bigger).norm())
}

/// Core-wide version of [`pad_sufficiency`]: the largest change over all core
/// elements.
pub fn pad_sufficiency_core(spec: &AlgebraSpec, window: IndexWindow, coeffs: &Coeffs) -> Result<f64> {
    let big_window = window.enlarged(spec, 8);
    let a = oracle_matrix(spec, window, coeffs)?.matrix;
    let b = oracle_matrix(spec, big_window, coeffs)?.matrix;
    let mut worst: f64 = 0.0;
    for n in window.core_lo..=window.core_hi {
        for m in window.core_lo..=window.core_hi {
            let d = a[[window.index(n), window.index(m)]] - b[[big_window.index(n), big_window.index(m)]];
            worst = worst.max(d.norm());
        }
    }
    Ok(worst)
}
