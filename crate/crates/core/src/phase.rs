//! Susskind–Glogower phase operators: `P|n⟩ = |n−1⟩`, `P|0⟩ = 0`, and the
//! Bessel closed forms of `exp(iy(P + P†))`.
//!
//! The elements satisfy `⟨n|exp(iy(P+P†))|m⟩ = i^{n−m} G_nm(y)` with the
//! real function `G_nm = J_{n−m}(2y) + (−1)^m J_{n+m+2}(2y)`.

use ndarray::Array2;
use num_complex::Complex64;

use crate::linalg::{CMatrix, I, ONE, ZERO};
use crate::special::bessel_jn;

#[derive(Debug, Clone)]
pub struct PhaseMatrices {
    pub size: usize,
    pub p: CMatrix,
    pub p_dagger: CMatrix,
}

/// Integer shift matrix P on states 0..size.
pub fn shift_matrix(size: usize) -> Array2<i64> {
    let mut p = Array2::zeros((size, size));
    for n in 1..size {
        p[[n - 1, n]] = 1;
    }
    p
}

pub fn build_phase(size: usize) -> PhaseMatrices {
    let p = shift_matrix(size).mapv(|v| if v == 1 { ONE } else { ZERO });
    let p_dagger = p.t().to_owned();
    PhaseMatrices { size, p, p_dagger }
}

/// `[P, P†]` in integer arithmetic. On a finite window this is
/// `diag(1, 0, …, 0, −1)`; the last entry is the truncation edge.
pub fn commutator_exact(size: usize) -> Array2<i64> {
    let p = shift_matrix(size);
    let pd = p.t().to_owned();
    p.dot(&pd) - pd.dot(&p)
}

/// Whether `[P, P†]` restricted to the first `size − 1` states is exactly
/// the unit impulse at (0, 0).
pub fn commutator_is_unit_impulse(size: usize) -> bool {
    let c = commutator_exact(size);
    (0..size - 1).all(|r| (0..size - 1).all(|k| c[[r, k]] == i64::from(r == 0 && k == 0)))
}

/// `G_nm(y) = J_{n−m}(2y) + (−1)^m J_{n+m+2}(2y)`.
pub fn phase_gnm(n: u32, m: u32, y: f64) -> f64 {
    let (n, m) = (n as i64, m as i64);
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    bessel_jn(n - m, 2.0 * y) + sign * bessel_jn(n + m + 2, 2.0 * y)
}

/// `⟨n| exp(iy(P + P†)) |m⟩ = i^{n−m} G_nm(y)`.
pub fn phase_element(n: u32, m: u32, y: f64) -> Complex64 {
    I.powi(n as i32 - m as i32) * phase_gnm(n, m, y)
}

/// `G_n(y) = (n+1) J_{n+1}(2y)/y`, summed as
/// `Σ_k (−1)^k (n+1) y^{2k+n} / (k! (k+n+1)!)` so that y = 0 is regular.
pub fn phase_gn(n: u32, y: f64) -> f64 {
    let n = n as i64;
    let mut term = (n + 1) as f64;
    for i in 1..=n + 1 {
        term /= i as f64;
    }
    for _ in 0..n {
        term *= y;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = y * y;
    let mut sum = term;
    for k in 1..500 {
        term *= -q / (k as f64 * (k + n + 1) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k as f64 > y.abs() {
            break;
        }
    }
    sum
}

/// Central-difference residual of `∂G_{n+1} = G_n − G_{n+2}` at step 1e−5.
pub fn phase_recursion_residual(n: u32, y: f64) -> f64 {
    let h = 1e-5;
    let deriv = (phase_gn(n + 1, y + h) - phase_gn(n + 1, y - h)) / (2.0 * h);
    (deriv - (phase_gn(n, y) - phase_gn(n + 2, y))).abs()
}
