//! SU(2) rotation matrices in the |j, m⟩ basis with the normalization
//! `√2 J_± = J_x ± i J_y`.
//!
//! Matrices are indexed by ascending m (index k ↔ m = −j + k) and act on
//! kets: `M[k][l] = ⟨m_k| U |m_l⟩`. The usual display is `U|m_r⟩ = Σ_c D[r][c] |m_c⟩`,
//! i.e. the transpose; [`ket_action`] converts.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LadderError, Result};
use crate::expm::expm;
use crate::linalg::{exp_single_band, CMatrix, I, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationSpec {
    pub omega: f64,
    pub theta: f64,
    pub phi: f64,
    /// 2j, so that half-integer spins stay exact.
    pub two_j: u32,
}

impl RotationSpec {
    pub fn new(omega: f64, theta: f64, phi: f64, two_j: u32) -> Self {
        RotationSpec { omega, theta, phi, two_j }
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// `a = i√2 ω sinθ e^{−iφ}`.
    pub fn a(&self) -> Complex64 {
        I * (2f64.sqrt() * self.omega * self.theta.sin()) * Complex64::from_polar(1.0, -self.phi)
    }

    /// `b = i√2 ω sinθ e^{iφ}`.
    pub fn b(&self) -> Complex64 {
        I * (2f64.sqrt() * self.omega * self.theta.sin()) * Complex64::from_polar(1.0, self.phi)
    }

    /// `c = −2iω cosθ`.
    pub fn c(&self) -> Complex64 {
        -I * (2.0 * self.omega * self.theta.cos())
    }

    /// `s = cosω − i cosθ sinω`.
    pub fn s(&self) -> Complex64 {
        Complex64::new(self.omega.cos(), -self.theta.cos() * self.omega.sin())
    }

    /// `h = √2 sinθ sinω / s`.
    pub fn h(&self) -> Result<Complex64> {
        let s = self.checked_s()?;
        Ok(Complex64::new(2f64.sqrt() * self.theta.sin() * self.omega.sin(), 0.0) / s)
    }

    fn checked_s(&self) -> Result<Complex64> {
        let s = self.s();
        if s.norm() < 1e-12 {
            return Err(LadderError::SingularS(s.norm()));
        }
        Ok(s)
    }
}

#[derive(Debug, Clone)]
pub struct SpinMatrices {
    pub two_j: u32,
    pub j_plus: CMatrix,
    pub j_minus: CMatrix,
    pub j_z: CMatrix,
    /// `⟨m+1|J_+|m⟩` for m = −j … j−1.
    pub plus_band: Vec<f64>,
}

/// m value of basis index k.
pub fn m_of(two_j: u32, k: usize) -> f64 {
    k as f64 - two_j as f64 / 2.0
}

pub fn build_spin(two_j: u32) -> SpinMatrices {
    let n = two_j as usize + 1;
    let j = two_j as f64 / 2.0;
    let plus_band: Vec<f64> = (0..n - 1)
        .map(|k| {
            let m = m_of(two_j, k);
            ((j - m) * (j + m + 1.0) / 2.0).sqrt()
        })
        .collect();
    let mut j_plus = CMatrix::from_elem((n, n), ZERO);
    let mut j_z = CMatrix::from_elem((n, n), ZERO);
    for (k, &v) in plus_band.iter().enumerate() {
        j_plus[[k + 1, k]] = Complex64::new(v, 0.0);
    }
    for k in 0..n {
        j_z[[k, k]] = Complex64::new(m_of(two_j, k), 0.0);
    }
    let j_minus = j_plus.t().to_owned();
    SpinMatrices { two_j, j_plus, j_minus, j_z, plus_band }
}

/// `exp(i J₊ h e^{−iφ}) · diag(s^{−2m}) · exp(i J₋ h e^{iφ})`.
pub fn rotation_factorized(spec: &RotationSpec) -> Result<CMatrix> {
    let s = spec.checked_s()?;
    let h = spec.h()?;
    let sp = build_spin(spec.two_j);
    let left = exp_single_band(I * h * Complex64::from_polar(1.0, -spec.phi), &sp.plus_band, false);
    let right = exp_single_band(I * h * Complex64::from_polar(1.0, spec.phi), &sp.plus_band, true);
    Ok(three_factor(left, |k| s.powi(-(2.0 * m_of(spec.two_j, k)) as i32), &right))
}

/// `exp(i J₋ h* e^{iφ}) · diag(s*^{2m}) · exp(i J₊ h* e^{−iφ})`.
pub fn antinormal_rotation(spec: &RotationSpec) -> Result<CMatrix> {
    let s = spec.checked_s()?.conj();
    let h = spec.h()?.conj();
    let sp = build_spin(spec.two_j);
    let left = exp_single_band(I * h * Complex64::from_polar(1.0, spec.phi), &sp.plus_band, true);
    let right = exp_single_band(I * h * Complex64::from_polar(1.0, -spec.phi), &sp.plus_band, false);
    Ok(three_factor(left, |k| s.powi((2.0 * m_of(spec.two_j, k)) as i32), &right))
}

fn three_factor(mut left: CMatrix, diag: impl Fn(usize) -> Complex64, right: &CMatrix) -> CMatrix {
    for (k, mut col) in left.columns_mut().into_iter().enumerate() {
        let d = diag(k);
        col.mapv_inplace(|z| z * d);
    }
    left.dot(right)
}

/// The generator `2i W·J = a J₊ + b J₋ − c J_z` with W = ω(sinθ cosφ, sinθ sinφ, cosθ).
pub fn rotation_generator(spec: &RotationSpec) -> CMatrix {
    let sp = build_spin(spec.two_j);
    // J_x = (J₊ + J₋)/√2, J_y = (J₊ − J₋)/(i√2)
    let r2 = 2f64.sqrt();
    let jx = (&sp.j_plus + &sp.j_minus).mapv(|z| z / r2);
    let jy = (&sp.j_plus - &sp.j_minus).mapv(|z| z / (I * r2));
    let (st, ct) = spec.theta.sin_cos();
    let (sf, cf) = spec.phi.sin_cos();
    let w = [spec.omega * st * cf, spec.omega * st * sf, spec.omega * ct];
    (jx * w[0] + jy * w[1] + &sp.j_z * w[2]).mapv(|z| z * 2.0 * I)
}

/// `exp(2i W·J)` by the oracle.
pub fn rotation_direct(spec: &RotationSpec) -> Result<CMatrix> {
    Ok(expm(&rotation_generator(spec))?.matrix)
}

/// Transpose into ket-action layout.
pub fn ket_action(u: &CMatrix) -> CMatrix {
    u.t().to_owned()
}

/// Closed-form J = 1 matrix in ket-action layout, rows and columns ordered
/// m = −1, 0, +1.
pub fn closed_j1_matrix(spec: &RotationSpec) -> Result<CMatrix> {
    let s = spec.checked_s()?;
    let h = spec.h()?;
    let (sc, hc) = (s.conj(), h.conj());
    let e = |k: f64| Complex64::from_polar(1.0, k * spec.phi);
    let s2 = s * s;
    let sc2 = sc * sc;
    Ok(ndarray::array![
        [s2, I * h * s2 * e(-1.0), -0.5 * h * h * s2 * e(-2.0)],
        [I * h * s2 * e(1.0), 1.0 - h * h * s2, I * hc * sc2 * e(-1.0)],
        [-0.5 * hc * hc * sc2 * e(2.0), I * hc * sc2 * e(1.0), sc2]
    ])
}

/// Closed-form real matrix for exp(2iω J_x), ket-action layout.
pub fn closed_jx_matrix(omega: f64) -> CMatrix {
    let (s, c) = omega.sin_cos();
    let r = 2f64.sqrt() * s * c;
    let re = |x: f64| Complex64::new(x, 0.0);
    ndarray::array![
        [re(c * c), re(r), re(s * s)],
        [re(-r), re(1.0 - 2.0 * s * s), re(r)],
        [re(s * s), re(-r), re(c * c)]
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, identity, max_abs_diff, unitarity_defect};

    #[test]
    fn spin_half_and_one() {
        let h = build_spin(1);
        assert_eq!(h.j_z[[0, 0]].re, -0.5);
        assert_eq!(h.j_z[[1, 1]].re, 0.5);

        let one = build_spin(2);
        // J₋ as L, J₊ as R, S = −J_z closes with σ = −1/2
        let (l, r) = (&one.j_minus, &one.j_plus);
        let s = one.j_z.mapv(|z| -z);
        assert!(max_abs_diff(commutator(l, r).view(), s.view()) < 1e-13);
        assert!(max_abs_diff(commutator(l, &s).view(), l.mapv(|z| -z).view()) < 1e-13);
        assert!(max_abs_diff(commutator(&s, r).view(), r.mapv(|z| -z).view()) < 1e-13);
        // J₊|1,−1⟩ has unit norm
        assert!((one.j_plus[[1, 0]].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_at_zero_angle() {
        let spec = RotationSpec::new(0.0, 0.7, 1.1, 3);
        assert_eq!(spec.s(), Complex64::new(1.0, 0.0));
        assert_eq!(spec.h().unwrap(), ZERO);
        assert!(max_abs_diff(rotation_factorized(&spec).unwrap().view(), identity(4).view()) < 1e-15);
        assert!(max_abs_diff(antinormal_rotation(&spec).unwrap().view(), identity(4).view()) < 1e-15);
    }

    #[test]
    fn generator_identity() {
        let spec = RotationSpec::new(0.8, 1.2, 2.3, 4);
        let sp = build_spin(4);
        let via_abc = &sp.j_plus * spec.a() + &sp.j_minus * spec.b() - &sp.j_z * spec.c();
        assert!(max_abs_diff(rotation_generator(&spec).view(), via_abc.view()) < 1e-14);
    }

    #[test]
    fn three_forms_agree() {
        let spec = RotationSpec::new(0.9, 0.6, 0.4, 3);
        let d = rotation_direct(&spec).unwrap();
        let f = rotation_factorized(&spec).unwrap();
        let a = antinormal_rotation(&spec).unwrap();
        assert!(max_abs_diff(d.view(), f.view()) < 1e-12);
        assert!(max_abs_diff(d.view(), a.view()) < 1e-12);
        assert!(unitarity_defect(&f) < 1e-12);
    }

    #[test]
    fn closed_j1_matrix_matches() {
        let spec = RotationSpec::new(0.7, 1.0, 0.3, 2);
        let u = ket_action(&rotation_factorized(&spec).unwrap());
        let p = closed_j1_matrix(&spec).unwrap();
        assert!(max_abs_diff(u.view(), p.view()) < 1e-12);
    }

    #[test]
    fn singular_s() {
        let spec = RotationSpec::new(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, 0.0, 2);
        assert!(matches!(rotation_factorized(&spec), Err(LadderError::SingularS(_))));
    }
}
