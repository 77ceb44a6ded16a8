//! Bessel functions of integer order and the Gauss hypergeometric series.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{LadderError, Result};

/// Largest |x| for which the power series of J_n keeps useful accuracy.
pub const BESSEL_MAX_ARG: f64 = 30.0;

/// J_n(x) by its alternating power series; negative orders use
/// J_{−n}(x) = (−1)^n J_n(x).
pub fn bessel_jn(n: i64, x: f64) -> f64 {
    if n < 0 {
        let v = bessel_jn(-n, x);
        return if n % 2 == 0 { v } else { -v };
    }
    let half = x / 2.0;
    let mut term = 1.0;
    for i in 1..=n {
        term *= half / i as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -q / (k * (k + n as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > half.abs() {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    sum
}

pub fn factorial(n: u64) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// z^p for real p, using integer powers when p is integral so that
/// negative bases stay real.
pub fn cpow_real(z: Complex64, p: f64) -> Complex64 {
    if p == p.round() && p.abs() < i32::MAX as f64 {
        z.powi(p as i32)
    } else {
        z.powf(p)
    }
}

/// Partial sums of ₂F₁(a, b; c; z).
#[derive(Debug, Clone, Serialize)]
pub struct HypergeomTerms {
    pub partial_sums: Vec<f64>,
    pub term_magnitudes: Vec<f64>,
    pub terminating: bool,
    /// Magnitude of the first dropped term; zero for a terminating series.
    pub first_dropped: f64,
}

impl HypergeomTerms {
    pub fn value(&self) -> f64 {
        *self.partial_sums.last().expect("at least one term")
    }
}

fn non_positive_integer(a: f64) -> Option<u64> {
    let r = a.round();
    if r <= 0.0 && (a - r).abs() < 1e-12 {
        Some((-r) as u64)
    } else {
        None
    }
}

/// Direct power series of ₂F₁(a, b; c; z). Accepted only when the series
/// terminates or |z| < 0.95.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<HypergeomTerms> {
    if non_positive_integer(c).is_some() {
        return Err(LadderError::InvalidInput(format!("2F1 with c = {c} is undefined")));
    }
    let degree = match (non_positive_integer(a), non_positive_integer(b)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    };
    if degree.is_none() && z.abs() >= 0.95 {
        return Err(LadderError::ConvergenceError(format!(
            "2F1 series needs |z| < 0.95, got z = {z}"
        )));
    }
    let mut term: f64 = 1.0;
    let mut sum: f64 = 1.0;
    let mut partial_sums = vec![1.0];
    let mut term_magnitudes = vec![1.0];
    let mut k = 0u64;
    loop {
        if let Some(d) = degree {
            if k == d {
                return Ok(HypergeomTerms {
                    partial_sums,
                    term_magnitudes,
                    terminating: true,
                    first_dropped: 0.0,
                });
            }
        }
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        k += 1;
        if degree.is_none() && term.abs() <= 1e-17 * sum.abs() {
            return Ok(HypergeomTerms {
                partial_sums,
                term_magnitudes,
                terminating: false,
                first_dropped: term.abs(),
            });
        }
        sum += term;
        partial_sums.push(sum);
        term_magnitudes.push(term.abs());
        if k > 20_000 {
            return Err(LadderError::ConvergenceError(format!(
                "2F1({a}, {b}; {c}; {z}) did not settle in 20000 terms"
            )));
        }
    }
}
