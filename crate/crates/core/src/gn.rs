//! The expectation functions `G_n = (−i)^n ⟨n|U₁|0⟩` and
//! `G_nm = (−i)^{n−m} ⟨n|U₁|m⟩`, evaluated in closed form, by the
//! anti-normal series, by the oracle, and in the oscillator and Bessel
//! limits, together with the two-term recursions they satisfy.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{is_broken_link, lambda, lambda_sq, AlgebraSpec, Profile};
use crate::error::{LadderError, Result};
use crate::expm::{oracle_element, oracle_window, pad_sufficiency, Coeffs};
use crate::factorization::u1_factors;
use crate::linalg::{I, ZERO};
use crate::phase::phase_gn;
use crate::special::{bessel_jn, cpow_real, hyp2f1};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    ClosedForm,
    Series,
    Oracle,
    LimitSho,
    LimitBessel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GnEvaluation {
    pub n: u32,
    pub m: u32,
    pub params: AlgebraSpec,
    pub y: f64,
    pub value: Complex64,
    pub route: Route,
    pub err_estimate: f64,
}

impl GnEvaluation {
    fn real(params: AlgebraSpec, n: u32, y: f64, value: f64, route: Route, err: f64) -> Self {
        GnEvaluation { n, m: 0, params, y, value: Complex64::new(value, 0.0), route, err_estimate: err }
    }
}

/// `A_n = (1/n!) ∏_{j=1..n} λ_{j−1}`.
pub fn a_n(spec: &AlgebraSpec, n: u32) -> Result<f64> {
    let mut acc = 1.0;
    for j in 1..=n as i64 {
        acc *= lambda(spec, j - 1)? / j as f64;
    }
    Ok(acc)
}

/// Closed form of G_n. Parametric specs use
/// `A_n (tanh y√σ/√σ)^n (sech y√σ)^{α+β−1} ₂F₁(1−α, 1−β; 1+n; −sinh² y√σ)`
/// (tan, sec and +sin² for σ < 0); the profiles use their limiting forms.
pub fn gn_closed(spec: &AlgebraSpec, n: u32, y: f64) -> Result<GnEvaluation> {
    let (alpha, beta, sigma) = match *spec {
        AlgebraSpec::Parametric { alpha, beta, sigma } => (alpha, beta, sigma),
        AlgebraSpec::Profile { profile: Profile::Sho } => return Ok(gn_sho_limit(n, y)),
        AlgebraSpec::Profile { profile: Profile::ConstantOne } => {
            let v = bessel_jn(n as i64, 2.0 * y);
            return Ok(GnEvaluation::real(*spec, n, y, v, Route::LimitBessel, 0.0));
        }
        AlgebraSpec::Profile { profile: Profile::Phase } => {
            let v = phase_gn(n, y);
            return Ok(GnEvaluation::real(*spec, n, y, v, Route::ClosedForm, 0.0));
        }
    };
    if sigma == 0.0 {
        let v = if n == 0 { 1.0 } else { 0.0 };
        return Ok(GnEvaluation::real(*spec, n, y, v, Route::ClosedForm, 0.0));
    }
    let root = sigma.abs().sqrt();
    let u = y * root;
    let (t, sec, z) = if sigma > 0.0 {
        (u.tanh() / root, 1.0 / u.cosh(), -u.sinh().powi(2))
    } else {
        let c = u.cos();
        if c.abs() < 1e-12 {
            return Err(LadderError::PoleError(format!("cos(y sqrt|sigma|) = {c}")));
        }
        (u.tan() / root, 1.0 / c, u.sin().powi(2))
    };
    let power = alpha + beta - 1.0;
    if sec < 0.0 && power != power.round() {
        return Err(LadderError::InvalidInput(format!(
            "sec^{power} with negative base needs a branch choice"
        )));
    }
    let f = hyp2f1(1.0 - alpha, 1.0 - beta, 1.0 + n as f64, z)?;
    let scale = a_n(spec, n)? * t.powi(n as i32) * cpow_real(Complex64::new(sec, 0.0), power).re;
    Ok(GnEvaluation::real(
        *spec,
        n,
        y,
        scale * f.value(),
        Route::ClosedForm,
        (scale * f.first_dropped).abs(),
    ))
}

/// Partial sum of the anti-normal series for G_n:
/// `Σ_{j≥n} (iyf)^{j−n}/(j−n)! ⟨n|L^{j−n}|j⟩ g^{−p_j} ⟨j|R^j|0⟩ (iyf)^j/j!`,
/// times (−i)^n, over at most `j_max_terms` terms.
pub fn gn_series(spec: &AlgebraSpec, n: u32, y: f64, j_max_terms: u32) -> Result<GnEvaluation> {
    let fac = u1_factors(spec, y)?;
    let p = |j: i64| match spec.params() {
        Some((alpha, beta, _)) => 2.0 * j as f64 - 1.0 + alpha + beta,
        None => 0.0,
    };
    let c = I * (y * fac.f);
    let g = Complex64::new(fac.g, 0.0);
    let n = n as i64;

    // j = n term: g^{−p_n} c^n/n! ∏_{k<n} λ_k
    let mut term = cpow_real(g, -p(n)) / fac.gaussian;
    for k in 0..n {
        term *= c * lambda(spec, k)? / (k + 1) as f64;
    }
    let step = c * c / (g * g);
    let mut sum = term;
    let mut mags = vec![term.norm()];
    let mut terminated = term == ZERO;
    for j in n..n + j_max_terms as i64 {
        if terminated {
            break;
        }
        if is_broken_link(spec, j) {
            terminated = true;
            break;
        }
        let lsq = lambda_sq(spec, j);
        if lsq < 0.0 {
            return Err(LadderError::NonUnitaryRegime { j, lambda_sq: lsq });
        }
        term *= step * lsq / (((j + 1 - n) * (j + 1)) as f64);
        sum += term;
        mags.push(term.norm());
        if term == ZERO {
            terminated = true;
        }
    }
    let err = if terminated { 0.0 } else { *mags.last().unwrap() };
    if !terminated && mags.len() >= 6 {
        let tail = &mags[mags.len() - 6..];
        if tail.windows(2).all(|w| w[1] >= w[0]) {
            return Err(LadderError::ConvergenceError(format!(
                "G_{n} series terms not decreasing at y = {y}"
            )));
        }
    }
    let value = sum * (-I).powi(n as i32);
    Ok(GnEvaluation { n: n as u32, m: 0, params: *spec, y, value, route: Route::Series, err_estimate: err })
}

/// `y^n/√n! · exp(−y²/2)`.
pub fn gn_sho_limit(n: u32, y: f64) -> GnEvaluation {
    let mut v = (-y * y / 2.0).exp();
    for k in 1..=n {
        v *= y / (k as f64).sqrt();
    }
    GnEvaluation::real(AlgebraSpec::profile(Profile::Sho), n, y, v, Route::LimitSho, 0.0)
}

/// `(−i)^{n−m} ⟨n|U₁|m⟩` from the oracle on a default-padded window. The
/// error estimate is the pad certificate.
pub fn gn_oracle(spec: &AlgebraSpec, n: u32, m: u32, y: f64) -> Result<GnEvaluation> {
    let coeffs = Coeffs::u1(y);
    let window = oracle_window(spec, 0, n.max(m) as i64, &coeffs)?;
    let el = oracle_element(spec, window, &coeffs, n as i64, m as i64)?;
    let pad = pad_sufficiency(spec, window, &coeffs, n as i64, m as i64)?;
    let phase = (-I).powi(n as i32 - m as i32);
    Ok(GnEvaluation { n, m, params: *spec, y, value: el * phase, route: Route::Oracle, err_estimate: pad })
}

/// `G_nm(α,β;σ;y) = G_{n−m}(α+m, β+m; σ; y)` for n ≥ m.
pub fn gnm(spec: &AlgebraSpec, n: u32, m: u32, y: f64) -> Result<GnEvaluation> {
    if n < m {
        return Err(LadderError::InvalidInput(format!(
            "G_nm closed form needs n >= m, got n={n}, m={m}"
        )));
    }
    spec.require_params()?;
    let mut ev = gn_closed(&spec.shifted(m as i64), n - m, y)?;
    ev.n = n;
    ev.m = m;
    ev.params = *spec;
    Ok(ev)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Tilde,
    Bar,
}

/// `tilde G_n(p;y) = sech^p y tanh^n y` and
/// `bar G_n(p;y) = Γ(n+p)/(Γ(p)Γ(n+1)) sech^p y tanh^n y`.
pub fn tilde_bar_variants(p: f64, n: u32, y: f64, which: Variant) -> f64 {
    let base = (1.0 / y.cosh()).powf(p) * y.tanh().powi(n as i32);
    match which {
        Variant::Tilde => base,
        Variant::Bar => (0..n).fold(base, |acc, k| acc * (p + k as f64) / (k + 1) as f64),
    }
}

/// Gaussian tilde function `y^n e^{−y²/2} / n!`.
pub fn gauss_tilde(n: u32, y: f64) -> f64 {
    (1..=n).fold((-y * y / 2.0).exp(), |acc, k| acc * y / k as f64)
}

/// Gaussian bar function `y^n e^{−y²/2}`.
pub fn gauss_bar(n: u32, y: f64) -> f64 {
    (-y * y / 2.0).exp() * y.powi(n as i32)
}

/// A family of functions obeying `∂G_{n+1} = c_lo(n) G_n − c_hi(n) G_{n+2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RecursionFamily {
    /// G_n of an algebra; coefficients λ_n and λ_{n+1}. Covers the
    /// oscillator (√(n+1), √(n+2)), Bessel and phase cases via profiles.
    Spec(AlgebraSpec),
    Tilde(f64),
    Bar(f64),
    GaussTilde,
    GaussBar,
}

impl RecursionFamily {
    pub fn value(&self, n: u32, y: f64) -> Result<f64> {
        Ok(match *self {
            RecursionFamily::Spec(spec) => gn_closed(&spec, n, y)?.value.re,
            RecursionFamily::Tilde(p) => tilde_bar_variants(p, n, y, Variant::Tilde),
            RecursionFamily::Bar(p) => tilde_bar_variants(p, n, y, Variant::Bar),
            RecursionFamily::GaussTilde => gauss_tilde(n, y),
            RecursionFamily::GaussBar => gauss_bar(n, y),
        })
    }

    pub fn coefficients(&self, n: u32) -> Result<(f64, f64)> {
        let nf = n as f64;
        Ok(match *self {
            RecursionFamily::Spec(spec) => (lambda(&spec, n as i64)?, lambda(&spec, n as i64 + 1)?),
            RecursionFamily::Tilde(p) => (nf + 1.0, nf + 1.0 + p),
            RecursionFamily::Bar(p) => (nf + p, nf + 2.0),
            RecursionFamily::GaussTilde => (1.0, nf + 2.0),
            RecursionFamily::GaussBar => (nf + 1.0, 1.0),
        })
    }
}

const DIFF_STEP: f64 = 1e-5;

/// |central difference of G_{n+1} − (c_lo G_n − c_hi G_{n+2})| at step 1e−5.
pub fn family_recursion_residual(family: &RecursionFamily, n: u32, y: f64) -> Result<f64> {
    let h = DIFF_STEP;
    let deriv = (family.value(n + 1, y + h)? - family.value(n + 1, y - h)?) / (2.0 * h);
    let (lo, hi) = family.coefficients(n)?;
    let rhs = lo * family.value(n, y)? - hi * family.value(n + 2, y)?;
    Ok((deriv - rhs).abs())
}

/// Recursion residual of `∂G_{n+1} = λ_n G_n − λ_{n+1} G_{n+2}`.
pub fn recursion_residual(spec: &AlgebraSpec, n: u32, y: f64) -> Result<f64> {
    family_recursion_residual(&RecursionFamily::Spec(*spec), n, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    fn sech(y: f64) -> f64 {
        1.0 / y.cosh()
    }

    #[test]
    fn a_n_values() {
        assert_eq!(a_n(&AlgebraSpec::parametric(1.0, 2.0, 1.0), 0).unwrap(), 1.0);
        assert!((a_n(&AlgebraSpec::parametric(1.0, 2.0, 1.0), 1).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((a_n(&AlgebraSpec::parametric(1.0, 1.0, 1.0), 3).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_examples() {
        let s11 = AlgebraSpec::parametric(1.0, 1.0, 1.0);
        for &y in &[0.1, 0.3, 0.7] {
            assert!((gn_closed(&s11, 0, y).unwrap().value.re - sech(y)).abs() < 1e-15);
        }
        let s12 = AlgebraSpec::parametric(1.0, 2.0, 1.0);
        let y: f64 = 0.3;
        let want = 3f64.sqrt() * sech(y).powi(2) * y.tanh().powi(2);
        let got = gn_closed(&s12, 2, y).unwrap();
        assert!((got.value.re - want).abs() < 1e-15);
        assert_eq!(got.err_estimate, 0.0);
        assert_eq!(gn_closed(&s11, 3, 0.0).unwrap().value.re, 0.0);
        assert_eq!(gn_closed(&s11, 0, 0.0).unwrap().value.re, 1.0);
    }

    #[test]
    fn series_agrees_with_closed_form() {
        let spec = AlgebraSpec::parametric(1.0, 1.0, 1.0);
        for n in 0..=4 {
            for &y in &[0.1, 0.3, 0.5] {
                let c = gn_closed(&spec, n, y).unwrap().value;
                let s = gn_series(&spec, n, y, 400).unwrap().value;
                assert!((c - s).norm() < 1e-10, "n={n} y={y}: {c} vs {s}");
            }
        }
        let one = gn_series(&spec, 0, 0.0, 1).unwrap();
        assert_eq!(one.value, ONE);
    }

    #[test]
    fn sho_limit_values() {
        assert!((gn_sho_limit(0, 1.0).value.re - (-0.5f64).exp()).abs() < 1e-16);
        let want = 0.25 / 2f64.sqrt() * (-0.125f64).exp();
        assert!((gn_sho_limit(2, 0.5).value.re - want).abs() < 1e-16);
    }

    #[test]
    fn shifted_mapping() {
        let spec = AlgebraSpec::parametric(1.0, 1.0, 1.0);
        let a = gnm(&spec, 3, 1, 0.3).unwrap().value;
        let b = gn_closed(&AlgebraSpec::parametric(2.0, 2.0, 1.0), 2, 0.3).unwrap().value;
        assert_eq!(a, b);
        assert_eq!(gnm(&spec, 2, 0, 0.4).unwrap().value, gn_closed(&spec, 2, 0.4).unwrap().value);
        assert!(gnm(&spec, 1, 2, 0.4).is_err());
    }

    #[test]
    fn variants() {
        let y: f64 = 0.37;
        assert!((tilde_bar_variants(1.0, 1, y, Variant::Tilde) - sech(y) * y.tanh()).abs() < 1e-16);
        assert!((tilde_bar_variants(2.0, 1, y, Variant::Bar) - 2.0 * sech(y).powi(2) * y.tanh()).abs() < 1e-16);
        assert_eq!(tilde_bar_variants(0.7, 0, 0.0, Variant::Tilde), 1.0);
    }

    #[test]
    fn recursions_hold() {
        let fams = [
            RecursionFamily::Spec(AlgebraSpec::parametric(1.0, 1.0, 1.0)),
            RecursionFamily::Spec(AlgebraSpec::profile(Profile::ConstantOne)),
            RecursionFamily::Spec(AlgebraSpec::profile(Profile::Sho)),
            RecursionFamily::Tilde(1.5),
            RecursionFamily::Bar(2.0),
            RecursionFamily::GaussTilde,
            RecursionFamily::GaussBar,
        ];
        for f in &fams {
            for n in 0..4 {
                let r = family_recursion_residual(f, n, 0.4).unwrap();
                assert!(r <= 1e-8, "{f:?} n={n}: {r}");
            }
        }
    }
}
