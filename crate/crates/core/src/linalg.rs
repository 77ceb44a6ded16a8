//! Dense complex matrix helpers shared by the oracle and the factorizations.

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;

pub type CMatrix = Array2<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(n: usize) -> CMatrix {
    Array2::from_diag_elem(n, ONE)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.dot(b) - b.dot(a)
}

pub fn conj_transpose(a: &CMatrix) -> CMatrix {
    a.t().mapv(|z| z.conj())
}

/// Induced infinity norm (max absolute row sum).
pub fn norm_inf(a: ArrayView2<'_, Complex64>) -> f64 {
    a.rows()
        .into_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: ArrayView2<'_, Complex64>, b: ArrayView2<'_, Complex64>) -> f64 {
    assert_eq!(a.dim(), b.dim(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: ArrayView2<'_, Complex64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖AᴴA − I‖_max`.
pub fn unitarity_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let g = conj_transpose(a).dot(a);
    max_abs_diff(g.view(), identity(n).view())
}

/// Determinant by partial-pivot LU; fine for the small matrices used here.
pub fn determinant(a: &CMatrix) -> Complex64 {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let mut m = a.clone();
    let mut det = ONE;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[[x, col]].norm().total_cmp(&m[[y, col]].norm()))
            .unwrap();
        if m[[pivot, col]].norm() == 0.0 {
            return ZERO;
        }
        if pivot != col {
            for k in 0..n {
                m.swap([pivot, k], [col, k]);
            }
            det = -det;
        }
        let p = m[[col, col]];
        det *= p;
        for row in col + 1..n {
            let factor = m[[row, col]] / p;
            if factor != ZERO {
                for k in col..n {
                    let v = m[[col, k]];
                    m[[row, k]] -= factor * v;
                }
            }
        }
    }
    det
}

/// exp of a matrix whose only nonzero entries lie on the first super- or
/// sub-diagonal, by its terminating Taylor series. `band[k]` is the entry
/// linking index k and k+1; `upper` selects the superdiagonal (k, k+1).
pub fn exp_single_band(coef: Complex64, band: &[f64], upper: bool) -> CMatrix {
    let n = band.len() + 1;
    let mut e = identity(n);
    for start in 0..n {
        let mut term = ONE;
        for k in 1..n - start {
            term = term * coef * band[start + k - 1] / k as f64;
            if term == ZERO {
                break;
            }
            if upper {
                e[[start, start + k]] = term;
            } else {
                e[[start + k, start]] = term;
            }
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn determinant_of_triangular_is_diagonal_product() {
        let a = array![
            [Complex64::new(2.0, 0.0), Complex64::new(5.0, 1.0)],
            [ZERO, Complex64::new(0.0, 3.0)]
        ];
        let d = determinant(&a);
        assert!((d - Complex64::new(0.0, 6.0)).norm() < 1e-15);
    }

    #[test]
    fn single_band_exp_matches_series_by_hand() {
        // exp(c N) with N the 3x3 shift carrying weights (1, 2)
        let c = Complex64::new(0.0, 0.5);
        let e = exp_single_band(c, &[1.0, 2.0], true);
        assert_eq!(e[[0, 1]], c);
        assert_eq!(e[[1, 2]], c * 2.0);
        assert!((e[[0, 2]] - c * c * 2.0 / 2.0).norm() < 1e-16);
        assert_eq!(e[[1, 0]], ZERO);
        let lower = exp_single_band(c, &[1.0, 2.0], false);
        assert_eq!(lower, e.t().to_owned());
    }
}
