//! Normal and anti-normal ordered forms of
//! `U₁ = exp(iy(L + R))` and `U₂ = exp(aL + bR + cS)`.
//!
//! The normal form `exp(·R) D exp(·L)` only sums over states below the
//! matrix element, so on a window whose lower side is closed it is exact.
//! The anti-normal form `exp(·L) D exp(·R)` sums over every state above the
//! element: an infinite alternating series with large intermediate terms.
//! Its elements are evaluated on the infinite lattice with extended
//! precision and returned for the requested window.

use std::f64::consts::{FRAC_PI_2, PI};

use astro_float::BigFloat;

use ndarray::{s, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{build_matrices, is_broken_link, lambda_sq, AlgebraSpec, IndexWindow, Profile};
use crate::bigfloat::{self, BigComplex, Ctx};
use crate::error::{LadderError, Result};
use crate::expm::{oracle_matrix, Coeffs};
use crate::linalg::{exp_single_band, max_abs_diff, CMatrix, I, ONE, ZERO};
use crate::special::cpow_real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ordering {
    Normal,
    AntiNormal,
}

impl std::str::FromStr for Ordering {
    type Err = LadderError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal" => Ok(Ordering::Normal),
            "anti-normal" | "antinormal" => Ok(Ordering::AntiNormal),
            other => Err(LadderError::InvalidInput(format!("unknown ordering '{other}'"))),
        }
    }
}

fn near_pole(r: f64) -> bool {
    let k = ((r - FRAC_PI_2) / PI).round();
    (r - (FRAC_PI_2 + k * PI)).abs() < 1e-9
}

fn pole_error(what: &str, r: f64) -> LadderError {
    LadderError::PoleError(format!("{what}: sqrt(x) = {r} is on a pole of tan/sec"))
}

/// tan(√x)/√x, continued to tanh(√−x)/√−x for x < 0.
pub fn tau(x: f64) -> Result<f64> {
    if x.abs() < 1e-8 {
        return Ok(1.0 + x / 3.0 + 2.0 * x * x / 15.0);
    }
    if x > 0.0 {
        let r = x.sqrt();
        if near_pole(r) {
            return Err(pole_error("tau", r));
        }
        Ok(r.tan() / r)
    } else {
        let t = (-x).sqrt();
        Ok(t.tanh() / t)
    }
}

/// sec(√x), continued to sech(√−x) for x < 0.
pub fn sec_even(x: f64) -> Result<f64> {
    if x > 0.0 {
        let r = x.sqrt();
        if near_pole(r) {
            return Err(pole_error("sec", r));
        }
        Ok(1.0 / r.cos())
    } else {
        Ok(1.0 / (-x).sqrt().cosh())
    }
}

fn tau_complex(x: Complex64) -> Result<Complex64> {
    if x.norm() < 1e-6 {
        return Ok(ONE + x / 3.0 + x * x * 2.0 / 15.0 + x.powi(3) * 17.0 / 315.0 + x.powi(4) * 62.0 / 2835.0);
    }
    let q = x.sqrt();
    check_complex_pole(q)?;
    Ok(q.tan() / q)
}

fn sec_complex(x: Complex64) -> Result<Complex64> {
    if x.norm() < 1e-6 {
        return Ok(ONE + x / 2.0 + x * x * 5.0 / 24.0 + x.powi(3) * 61.0 / 720.0 + x.powi(4) * 1385.0 / 40320.0);
    }
    let q = x.sqrt();
    check_complex_pole(q)?;
    Ok(ONE / q.cos())
}

fn check_complex_pole(q: Complex64) -> Result<()> {
    let k = ((q.re - FRAC_PI_2) / PI).round();
    let pole = Complex64::new(FRAC_PI_2 + k * PI, 0.0);
    if (q - pole).norm() < 1e-9 || q.cos().norm() < 1e-12 {
        return Err(LadderError::PoleError(format!("q = {q} is on a pole of sec")));
    }
    Ok(())
}

/// Scalars of the U₁ ordered forms. The normal diagonal is
/// `gaussian · g^{p_j}` and the anti-normal one `g^{−p_j} / gaussian`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct U1Factors {
    pub f: f64,
    pub g: f64,
    /// exp(−y²/2) on the oscillator profile, 1 otherwise.
    pub gaussian: f64,
}

pub fn u1_factors(spec: &AlgebraSpec, y: f64) -> Result<U1Factors> {
    match *spec {
        AlgebraSpec::Parametric { sigma, .. } => {
            let x = -sigma * y * y;
            Ok(U1Factors { f: tau(x)?, g: sec_even(x)?, gaussian: 1.0 })
        }
        AlgebraSpec::Profile { profile: Profile::Sho } => {
            Ok(U1Factors { f: 1.0, g: 1.0, gaussian: (-y * y / 2.0).exp() })
        }
        AlgebraSpec::Profile { profile: Profile::ConstantOne } => {
            Ok(U1Factors { f: 1.0, g: 1.0, gaussian: 1.0 })
        }
        AlgebraSpec::Profile { profile: Profile::Phase } => Err(no_ordered_form()),
    }
}

fn no_ordered_form() -> LadderError {
    LadderError::InvalidInput("the phase algebra has no ordered form".into())
}

/// `p_j = 2j − 1 + α + β`; zero for profiles, where g = 1.
fn p_j(spec: &AlgebraSpec, j: i64) -> f64 {
    match spec.params() {
        Some((alpha, beta, _)) => 2.0 * j as f64 - 1.0 + alpha + beta,
        None => 0.0,
    }
}

/// Scalars of the U₂ ordered forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct U2Factors {
    pub f_plus: Complex64,
    pub f_minus: Complex64,
    pub g_plus: Complex64,
    pub g_minus: Complex64,
    pub q_sq: Complex64,
}

pub fn u2_factors(spec: &AlgebraSpec, a: Complex64, b: Complex64, c: Complex64) -> Result<U2Factors> {
    let (_, _, sigma) = spec.require_params()?;
    if sigma == 0.0 {
        return Err(LadderError::InvalidInput("U2 factors need sigma != 0".into()));
    }
    let q_sq = a * b * sigma - c * c * sigma * sigma;
    let t = tau_complex(q_sq)?;
    let sec = sec_complex(q_sq)?;
    let d_plus = ONE - c * sigma * t;
    let d_minus = ONE + c * sigma * t;
    for (d, name) in [(d_plus, "1 - c sigma tau"), (d_minus, "1 + c sigma tau")] {
        if d.norm() < 1e-12 {
            return Err(LadderError::DivisionByZero(format!("{name} = {d}")));
        }
    }
    Ok(U2Factors {
        f_plus: t / d_plus,
        f_minus: t / d_minus,
        g_plus: sec / d_plus,
        g_minus: sec / d_minus,
        q_sq,
    })
}

/// An ordered product `exp(left·X) D exp(right·Y)` on a window, with
/// (X, Y) = (R, L) for normal and (L, R) for anti-normal ordering.
#[derive(Debug, Clone, Serialize)]
pub struct OrderedForm {
    pub ordering: Ordering,
    pub left_exponent: Complex64,
    pub right_exponent: Complex64,
    pub diagonal: Vec<Complex64>,
}

impl OrderedForm {
    /// The product of the three window-sized factors. For anti-normal
    /// ordering this truncates the infinite sum at the window top; use
    /// [`u1_antinormal`] or [`u2_antinormal`] for the untruncated elements.
    pub fn to_matrix(&self, links: &[f64]) -> CMatrix {
        let (left_upper, right_upper) = match self.ordering {
            Ordering::Normal => (false, true),
            Ordering::AntiNormal => (true, false),
        };
        let mut left = exp_single_band(self.left_exponent, links, left_upper);
        let right = exp_single_band(self.right_exponent, links, right_upper);
        for (k, mut col) in left.columns_mut().into_iter().enumerate() {
            col.mapv_inplace(|z| z * self.diagonal[k]);
        }
        left.dot(&right)
    }
}

pub fn u1_ordered_form(
    spec: &AlgebraSpec,
    window: IndexWindow,
    y: f64,
    ordering: Ordering,
) -> Result<OrderedForm> {
    let fac = u1_factors(spec, y)?;
    let g = Complex64::new(fac.g, 0.0);
    let coef = I * (y * fac.f);
    let diagonal = (window.j_min..=window.j_max)
        .map(|j| match ordering {
            Ordering::Normal => cpow_real(g, p_j(spec, j)) * fac.gaussian,
            Ordering::AntiNormal => cpow_real(g, -p_j(spec, j)) / fac.gaussian,
        })
        .collect();
    Ok(OrderedForm { ordering, left_exponent: coef, right_exponent: coef, diagonal })
}

pub fn u2_ordered_form(
    spec: &AlgebraSpec,
    window: IndexWindow,
    coeffs: &Coeffs,
    ordering: Ordering,
) -> Result<OrderedForm> {
    let fac = u2_factors(spec, coeffs.a, coeffs.b, coeffs.c)?;
    let (left, right, g, sign) = match ordering {
        Ordering::Normal => (coeffs.b * fac.f_plus, coeffs.a * fac.f_plus, fac.g_plus, 1.0),
        Ordering::AntiNormal => (coeffs.a * fac.f_minus, coeffs.b * fac.f_minus, fac.g_minus, -1.0),
    };
    let diagonal = (window.j_min..=window.j_max)
        .map(|j| cpow_real(g, sign * p_j(spec, j)))
        .collect();
    Ok(OrderedForm { ordering, left_exponent: left, right_exponent: right, diagonal })
}

/// `exp(iyfR) · diag(g^{p_j}) · exp(iyfL)` on the window.
pub fn u1_normal(spec: &AlgebraSpec, window: IndexWindow, y: f64) -> Result<CMatrix> {
    let m = build_matrices(spec, window)?;
    Ok(u1_ordered_form(spec, window, y, Ordering::Normal)?.to_matrix(&m.links))
}

/// `exp(b f₊ R) · diag(g₊^{p_j}) · exp(a f₊ L)` on the window.
pub fn u2_normal(
    spec: &AlgebraSpec,
    window: IndexWindow,
    a: Complex64,
    b: Complex64,
    c: Complex64,
) -> Result<CMatrix> {
    let m = build_matrices(spec, window)?;
    Ok(u2_ordered_form(spec, window, &Coeffs::new(a, b, c), Ordering::Normal)?.to_matrix(&m.links))
}

/// Elements of `exp(iyfL) · diag(g^{−p_j}) · exp(iyfR)` for labels in the
/// window, summed over the whole lattice above each element.
pub fn u1_antinormal(spec: &AlgebraSpec, window: IndexWindow, y: f64) -> Result<CMatrix> {
    u1_factors(spec, y)?;
    antinormal_matrix(spec, window, &AntiInput::U1 { y })
}

/// Elements of `exp(a f₋ L) · diag(g₋^{−p_j}) · exp(b f₋ R)` for labels in
/// the window, summed over the whole lattice above each element.
pub fn u2_antinormal(
    spec: &AlgebraSpec,
    window: IndexWindow,
    a: Complex64,
    b: Complex64,
    c: Complex64,
) -> Result<CMatrix> {
    u2_factors(spec, a, b, c)?;
    antinormal_matrix(spec, window, &AntiInput::U2 { a, b, c })
}

enum AntiInput {
    U1 { y: f64 },
    U2 { a: Complex64, b: Complex64, c: Complex64 },
}

/// Extended-precision pieces of an anti-normal series: the L and R
/// coefficients, the per-state diagonal ratio G (diagonal_j = pref·G^j) and
/// the f64 prefactor.
struct AntiParams {
    cl: BigComplex,
    cr: BigComplex,
    ratio: BigComplex,
    pref: Complex64,
}

impl AntiInput {
    fn build(&self, spec: &AlgebraSpec, ctx: &mut Ctx) -> Result<AntiParams> {
        match *self {
            AntiInput::U1 { y } => match *spec {
                AlgebraSpec::Parametric { alpha, beta, sigma } => {
                    if sigma == 0.0 || y == 0.0 {
                        let c = ctx.complex(I * y);
                        return Ok(AntiParams { cl: c.clone(), cr: c, ratio: ctx.one(), pref: ONE });
                    }
                    let root = ctx.rsqrt(&ctx.real(sigma.abs()));
                    let u = ctx.rmul(&ctx.real(y), &root);
                    // iyf = i tanh(u)/√σ and G = g⁻² = cosh²u for σ > 0;
                    // tan and cos for σ < 0
                    let (num, den) = if sigma > 0.0 {
                        (ctx.sinh(&u), ctx.cosh(&u))
                    } else {
                        (ctx.sin(&u), ctx.cos(&u))
                    };
                    let t = ctx.rdiv(&ctx.rdiv(&num, &den), &root);
                    let coef = BigComplex { re: ctx.real(0.0), im: t };
                    let g = 1.0 / bigfloat::to_f64(&den);
                    let ratio = ctx.from_real(ctx.rmul(&den, &den));
                    let pref = cpow_real(Complex64::new(g, 0.0), -(alpha + beta - 1.0));
                    Ok(AntiParams { cl: coef.clone(), cr: coef, ratio, pref })
                }
                AlgebraSpec::Profile { profile } => {
                    let c = ctx.complex(I * y);
                    let pref = match profile {
                        Profile::Sho => Complex64::new((y * y / 2.0).exp(), 0.0),
                        Profile::ConstantOne => ONE,
                        Profile::Phase => return Err(no_ordered_form()),
                    };
                    Ok(AntiParams { cl: c.clone(), cr: c, ratio: ctx.one(), pref })
                }
            },
            AntiInput::U2 { a, b, c } => {
                let (alpha, beta, sigma) = spec.require_params()?;
                let (ba, bb, bc) = (ctx.complex(a), ctx.complex(b), ctx.complex(c));
                let bs = ctx.real(sigma);
                let ab = ctx.scale(&ctx.mul(&ba, &bb), &bs);
                let cs = ctx.scale(&bc, &bs);
                let q_sq = ctx.sub(&ab, &ctx.mul(&cs, &cs));
                let (t, sec) = if q_sq.re.is_zero() && q_sq.im.is_zero() {
                    (ctx.one(), ctx.one())
                } else {
                    let q = ctx.csqrt(&q_sq);
                    let cos = ctx.ccos(&q);
                    let sin = ctx.csin(&q);
                    let t = ctx.div(&ctx.div(&sin, &cos)?, &q)?;
                    (t, ctx.recip(&cos)?)
                };
                let d = ctx.add(&ctx.one(), &ctx.mul(&cs, &t));
                let f = ctx.div(&t, &d)?;
                let g = ctx.div(&sec, &d)?;
                let g64 = bigfloat::to_c64(&g);
                let ratio = ctx.powi(&g, -2)?;
                Ok(AntiParams {
                    cl: ctx.mul(&ba, &f),
                    cr: ctx.mul(&bb, &f),
                    ratio,
                    pref: cpow_real(g64, -(alpha + beta - 1.0)),
                })
            }
        }
    }
}

const START_PREC: usize = 256;
const MAX_TERMS: i64 = 20_000;

fn antinormal_matrix(spec: &AlgebraSpec, window: IndexWindow, input: &AntiInput) -> Result<CMatrix> {
    let n = window.dim();
    let mut out = Array2::from_elem((n, n), ZERO);
    let mut ctx = Ctx::new(START_PREC)?;
    let mut params = input.build(spec, &mut ctx)?;
    for row in window.j_min..=window.j_max {
        for col in window.j_min..=window.j_max {
            let mut attempt = antinormal_element(spec, &mut ctx, &params, row, col)?;
            while let Some(prec) = attempt.needs_prec {
                ctx = Ctx::new(prec)?;
                params = input.build(spec, &mut ctx)?;
                attempt = antinormal_element(spec, &mut ctx, &params, row, col)?;
            }
            out[[window.index(row), window.index(col)]] = attempt.value * params.pref;
        }
    }
    Ok(out)
}

struct ElementAttempt {
    value: Complex64,
    needs_prec: Option<usize>,
}

fn lambda_sq_big(spec: &AlgebraSpec, ctx: &Ctx, j: i64) -> Result<BigFloat> {
    let v = lambda_sq(spec, j);
    if v < 0.0 && !is_broken_link(spec, j) {
        return Err(LadderError::NonUnitaryRegime { j, lambda_sq: v });
    }
    Ok(match spec.params() {
        Some((alpha, beta, sigma)) => {
            let a = ctx.radd(&ctx.real(alpha), &ctx.int(j));
            let b = ctx.radd(&ctx.real(beta), &ctx.int(j));
            ctx.rmul(&ctx.rmul(&a, &b), &ctx.real(sigma))
        }
        None => ctx.real(v),
    })
}

/// `Σ_{j ≥ max(n,m)} [e^{cl L}]_{nj} G^j [e^{cr R}]_{jm}` without the f64 prefactor.
fn antinormal_element(
    spec: &AlgebraSpec,
    ctx: &mut Ctx,
    p: &AntiParams,
    n: i64,
    m: i64,
) -> Result<ElementAttempt> {
    let j0 = n.max(m);
    let lo = n.min(m);
    // leading term: the off-diagonal factor reaching from min(n,m) to j0
    let reach = if m > n { &p.cl } else { &p.cr };
    let mut term = ctx.powi(&p.ratio, j0)?;
    for k in lo..j0 {
        if is_broken_link(spec, k) {
            return Ok(ElementAttempt { value: ZERO, needs_prec: None });
        }
        let lam = ctx.rsqrt(&lambda_sq_big(spec, ctx, k)?);
        term = ctx.scale(&ctx.mul(&term, reach), &ctx.rdiv(&lam, &ctx.int(k - lo + 1)));
    }
    let step = ctx.mul(&ctx.mul(&p.cl, &p.cr), &p.ratio);
    let mut sum = term.clone();
    let mut peak = bigfloat::log2_mag(&term).unwrap_or(i64::MIN);
    let mut prev_mag = peak;
    let mut j = j0;
    loop {
        if is_broken_link(spec, j) {
            break;
        }
        if j - j0 > MAX_TERMS {
            return Err(LadderError::ConvergenceError(format!(
                "anti-normal series for element ({n}, {m}) still running after {MAX_TERMS} terms"
            )));
        }
        let lsq = lambda_sq_big(spec, ctx, j)?;
        let den = ctx.int((j + 1 - n) * (j + 1 - m));
        term = ctx.scale(&ctx.mul(&term, &step), &ctx.rdiv(&lsq, &den));
        sum = ctx.add(&sum, &term);
        j += 1;
        let Some(mag) = bigfloat::log2_mag(&term) else {
            break;
        };
        peak = peak.max(mag);
        let decreasing = mag <= prev_mag;
        prev_mag = mag;
        let floor = match bigfloat::log2_mag(&sum) {
            Some(s) => (s - 64).max(peak - ctx.prec as i64),
            None => peak - ctx.prec as i64,
        };
        if decreasing && j > j0 + 2 && mag < floor {
            break;
        }
    }
    let sum_mag = bigfloat::log2_mag(&sum);
    let lost = match sum_mag {
        Some(s) => peak - s,
        None => 0,
    };
    if lost > ctx.prec as i64 - 96 {
        let want = ((lost + 160) as usize).div_ceil(64) * 64;
        if want > ctx.prec {
            return Ok(ElementAttempt { value: ZERO, needs_prec: Some(want) });
        }
    }
    Ok(ElementAttempt { value: bigfloat::to_c64(&sum), needs_prec: None })
}

/// Largest core deviation between an ordered product and the oracle.
///
/// Coefficients of the shape `(iy, iy, 0)` go through the U₁ forms (which
/// also cover the oscillator and constant-one profiles); anything else
/// through the U₂ forms.
pub fn factorization_residual(
    spec: &AlgebraSpec,
    window: IndexWindow,
    coeffs: &Coeffs,
    ordering: Ordering,
) -> Result<f64> {
    let oracle = oracle_matrix(spec, window, coeffs)?.matrix;
    let core = window.core_range();
    let oracle_core = oracle.slice(s![core.clone(), core.clone()]).to_owned();
    let product = match ordering {
        Ordering::Normal => {
            let full = match coeffs.as_u1() {
                Some(y) => u1_normal(spec, window, y)?,
                None => u2_normal(spec, window, coeffs.a, coeffs.b, coeffs.c)?,
            };
            full.slice(s![core.clone(), core]).to_owned()
        }
        Ordering::AntiNormal => {
            let cw = window.core_window();
            let full = match coeffs.as_u1() {
                Some(y) => u1_antinormal(spec, cw, y)?,
                None => u2_antinormal(spec, cw, coeffs.a, coeffs.b, coeffs.c)?,
            };
            full.slice(s![0..window.core_dim(), 0..window.core_dim()]).to_owned()
        }
    };
    Ok(max_abs_diff(product.view(), oracle_core.view()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;

    #[test]
    fn tau_values() {
        assert_eq!(tau(0.0).unwrap(), 1.0);
        let t: f64 = 0.7;
        assert!((tau(-t * t).unwrap() - t.tanh() / t).abs() < 1e-15);
        assert!((tau(t * t).unwrap() - t.tan() / t).abs() < 1e-15);
        let x = (FRAC_PI_2 - 1e-12).powi(2);
        assert!(matches!(tau(x), Err(LadderError::PoleError(_))));
        let x = (3.0 * FRAC_PI_2).powi(2);
        assert!(matches!(sec_even(x), Err(LadderError::PoleError(_))));
    }

    #[test]
    fn u1_factor_values() {
        let spec = AlgebraSpec::parametric(1.0, 1.0, 1.0);
        let f = u1_factors(&spec, 0.5).unwrap();
        assert!((f.f - 0.5f64.tanh() / 0.5).abs() < 1e-15);
        assert!((f.g - 1.0 / 0.5f64.cosh()).abs() < 1e-15);
        let f = u1_factors(&spec, 0.0).unwrap();
        assert_eq!((f.f, f.g), (1.0, 1.0));
        let sho = u1_factors(&AlgebraSpec::profile(Profile::Sho), 0.6).unwrap();
        assert_eq!(sho.f, 1.0);
        assert!((sho.gaussian - (-0.18f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn normal_matches_oracle() {
        let spec = AlgebraSpec::parametric(1.0, 1.0, 1.0);
        let c = Coeffs::u1(0.3);
        let w = crate::expm::oracle_window(&spec, 0, 12, &c).unwrap();
        let r = factorization_residual(&spec, w, &c, Ordering::Normal).unwrap();
        assert!(r <= 1e-10, "{r}");
    }

    #[test]
    fn residual_grows_when_core_meets_the_edge() {
        // twelve states of padding are not enough at y = 0.3: the oracle is truncated
        let spec = AlgebraSpec::parametric(1.0, 1.0, 1.0);
        let w = IndexWindow::new(0, 24, 0, 12).unwrap();
        let r = factorization_residual(&spec, w, &Coeffs::u1(0.3), Ordering::Normal).unwrap();
        assert!(r > 1e-10 && r < 1e-6, "{r}");
        let w = IndexWindow::new(0, 24, 0, 24).unwrap();
        let edge = factorization_residual(&spec, w, &Coeffs::u1(0.3), Ordering::Normal).unwrap();
        assert!(edge > 1e-3, "{edge}");
    }

    #[test]
    fn antinormal_matches_oracle() {
        let spec = AlgebraSpec::parametric(1.0, 1.0, 1.0);
        let w = IndexWindow::new(0, 40, 0, 12).unwrap();
        let r = factorization_residual(&spec, w, &Coeffs::u1(0.3), Ordering::AntiNormal).unwrap();
        assert!(r <= 1e-10, "{r}");
    }

    #[test]
    fn zero_y_is_identity() {
        let spec = AlgebraSpec::parametric(1.0, 0.5, 1.0);
        let w = IndexWindow::full(0, 6).unwrap();
        assert_eq!(u1_normal(&spec, w, 0.0).unwrap(), identity(7));
        assert!(max_abs_diff(u1_antinormal(&spec, w, 0.0).unwrap().view(), identity(7).view()) < 1e-15);
    }

    #[test]
    fn squeezed_vacuum_element() {
        let spec = AlgebraSpec::parametric(1.0, 0.5, 1.0);
        let w = IndexWindow::full(0, 6).unwrap();
        let y: f64 = 0.4;
        let u = u1_normal(&spec, w, y).unwrap();
        assert!((u[[0, 0]] - Complex64::new((1.0 / y.cosh()).sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn u2_reduces_to_u1() {
        let spec = AlgebraSpec::parametric(1.0, 2.0, 1.0);
        let w = IndexWindow::full(0, 10).unwrap();
        let y = 0.35;
        let u1 = u1_normal(&spec, w, y).unwrap();
        let u2 = u2_normal(&spec, w, I * y, I * y, ZERO).unwrap();
        assert!(max_abs_diff(u1.view(), u2.view()) <= 1e-12);
    }

    #[test]
    fn u2_diagonal_case_is_exp_cs() {
        let spec = AlgebraSpec::parametric(1.0, 1.5, 1.0);
        let w = IndexWindow::full(0, 5).unwrap();
        let c = 0.3;
        let u = u2_normal(&spec, w, ZERO, ZERO, Complex64::new(c, 0.0)).unwrap();
        let m = build_matrices(&spec, w).unwrap();
        for k in 0..6 {
            for l in 0..6 {
                let want = if k == l { (m.s[[k, k]] * c).exp() } else { ZERO };
                assert!((u[[k, l]] - want).norm() < 1e-13, "({k},{l})");
            }
        }
    }

    #[test]
    fn su2_u2_both_orderings() {
        let spec = AlgebraSpec::parametric(4.0, -5.0, -0.5);
        let w = IndexWindow::padded(&spec, -3, 5, 10).unwrap();
        let c = Coeffs::new(Complex64::new(0.2, -0.1), Complex64::new(0.05, 0.3), Complex64::new(-0.1, 0.2));
        for ord in [Ordering::Normal, Ordering::AntiNormal] {
            let r = factorization_residual(&spec, w, &c, ord).unwrap();
            assert!(r <= 1e-10, "{ord:?}: {r}");
        }
    }

    #[test]
    fn phase_profile_has_no_ordered_form() {
        let spec = AlgebraSpec::profile(Profile::Phase);
        assert!(u1_factors(&spec, 0.2).is_err());
    }

    #[test]
    fn u2_singular_denominator() {
        // σ = 1, real q with c = q / tan q makes 1 − cσ·tan(q)/q vanish
        let spec = AlgebraSpec::parametric(1.0, 1.0, 1.0);
        let q: f64 = 1.0;
        let c = q / q.tan();
        let a = Complex64::new((q * q + c * c).sqrt(), 0.0);
        let r = u2_factors(&spec, a, a, Complex64::new(c, 0.0));
        assert!(matches!(r, Err(LadderError::DivisionByZero(_))), "{r:?}");
        let r = u2_factors(&spec, ZERO, ZERO, Complex64::new(0.0, FRAC_PI_2));
        assert!(matches!(r, Err(LadderError::PoleError(_))));
    }
}
