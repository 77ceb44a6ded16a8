//! Minimal extended-precision complex arithmetic on top of astro-float,
//! enough for the alternating anti-normal series.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_complex::Complex64;

use crate::error::{LadderError, Result};

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Debug, Clone)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

/// Precision and constant cache shared by a computation.
pub struct Ctx {
    pub prec: usize,
    cc: Consts,
}

impl Ctx {
    pub fn new(prec: usize) -> Result<Self> {
        let cc = Consts::new()
            .map_err(|e| LadderError::Overflow(format!("extended precision setup: {e:?}")))?;
        Ok(Ctx { prec, cc })
    }

    pub fn real(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.prec)
    }

    pub fn int(&self, k: i64) -> BigFloat {
        BigFloat::from_i64(k, self.prec)
    }

    pub fn complex(&self, z: Complex64) -> BigComplex {
        BigComplex { re: self.real(z.re), im: self.real(z.im) }
    }

    pub fn from_real(&self, x: BigFloat) -> BigComplex {
        BigComplex { re: x, im: self.real(0.0) }
    }

    pub fn zero(&self) -> BigComplex {
        self.complex(Complex64::new(0.0, 0.0))
    }

    pub fn one(&self) -> BigComplex {
        self.complex(Complex64::new(1.0, 0.0))
    }

    // real helpers

    pub fn radd(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, RM)
    }

    pub fn rsub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, RM)
    }

    pub fn rmul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, RM)
    }

    pub fn rdiv(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, RM)
    }

    pub fn rsqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.prec, RM)
    }

    pub fn sin(&mut self, a: &BigFloat) -> BigFloat {
        a.sin(self.prec, RM, &mut self.cc)
    }

    pub fn cos(&mut self, a: &BigFloat) -> BigFloat {
        a.cos(self.prec, RM, &mut self.cc)
    }

    pub fn sinh(&mut self, a: &BigFloat) -> BigFloat {
        a.sinh(self.prec, RM, &mut self.cc)
    }

    pub fn cosh(&mut self, a: &BigFloat) -> BigFloat {
        a.cosh(self.prec, RM, &mut self.cc)
    }

    // complex arithmetic

    pub fn add(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        BigComplex { re: self.radd(&a.re, &b.re), im: self.radd(&a.im, &b.im) }
    }

    pub fn sub(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        BigComplex { re: self.rsub(&a.re, &b.re), im: self.rsub(&a.im, &b.im) }
    }

    pub fn mul(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        let re = self.rsub(&self.rmul(&a.re, &b.re), &self.rmul(&a.im, &b.im));
        let im = self.radd(&self.rmul(&a.re, &b.im), &self.rmul(&a.im, &b.re));
        BigComplex { re, im }
    }

    pub fn scale(&self, a: &BigComplex, x: &BigFloat) -> BigComplex {
        BigComplex { re: self.rmul(&a.re, x), im: self.rmul(&a.im, x) }
    }

    pub fn div_real(&self, a: &BigComplex, x: &BigFloat) -> BigComplex {
        BigComplex { re: self.rdiv(&a.re, x), im: self.rdiv(&a.im, x) }
    }

    pub fn norm_sq(&self, a: &BigComplex) -> BigFloat {
        self.radd(&self.rmul(&a.re, &a.re), &self.rmul(&a.im, &a.im))
    }

    pub fn recip(&self, a: &BigComplex) -> Result<BigComplex> {
        let d = self.norm_sq(a);
        if d.is_zero() {
            return Err(LadderError::DivisionByZero("reciprocal of zero".into()));
        }
        Ok(BigComplex { re: self.rdiv(&a.re, &d), im: self.rdiv(&a.im.neg(), &d) })
    }

    pub fn div(&self, a: &BigComplex, b: &BigComplex) -> Result<BigComplex> {
        Ok(self.mul(a, &self.recip(b)?))
    }

    /// a^k by repeated squaring; negative k through the reciprocal.
    pub fn powi(&self, a: &BigComplex, k: i64) -> Result<BigComplex> {
        let mut base = if k < 0 { self.recip(a)? } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Principal square root.
    pub fn csqrt(&self, a: &BigComplex) -> BigComplex {
        let r = self.rsqrt(&self.norm_sq(a));
        let two = self.int(2);
        let re = self.rsqrt(&self.rdiv(&self.radd(&r, &a.re), &two));
        let mut im = self.rsqrt(&self.rdiv(&self.rsub(&r, &a.re), &two));
        if a.im.is_negative() {
            im = im.neg();
        }
        BigComplex { re, im }
    }

    pub fn ccos(&mut self, a: &BigComplex) -> BigComplex {
        let (c, s) = (self.cos(&a.re), self.sin(&a.re));
        let (ch, sh) = (self.cosh(&a.im), self.sinh(&a.im));
        BigComplex { re: self.rmul(&c, &ch), im: self.rmul(&s, &sh).neg() }
    }

    pub fn csin(&mut self, a: &BigComplex) -> BigComplex {
        let (c, s) = (self.cos(&a.re), self.sin(&a.re));
        let (ch, sh) = (self.cosh(&a.im), self.sinh(&a.im));
        BigComplex { re: self.rmul(&s, &ch), im: self.rmul(&c, &sh) }
    }
}

/// Binary exponent e with |x| in [2^{e−1}, 2^e); None for zero.
pub fn exponent(x: &BigFloat) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        x.exponent().map(|e| e as i64)
    }
}

/// Rough log₂ of the larger component's magnitude.
pub fn log2_mag(z: &BigComplex) -> Option<i64> {
    match (exponent(&z.re), exponent(&z.im)) {
        (None, None) => None,
        (Some(a), None) | (None, Some(a)) => Some(a),
        (Some(a), Some(b)) => Some(a.max(b)),
    }
}

pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _, sign, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *words.last().expect("nonzero mantissa") as f64;
    // value = 0.m × 2^e with the top word holding the leading 64 bits
    let e = e as i32 - 64;
    let v = if e < -1000 {
        top * 2f64.powi(-1000) * 2f64.powi(e + 1000)
    } else if e > 1000 {
        top * 2f64.powi(1000) * 2f64.powi(e - 1000)
    } else {
        top * 2f64.powi(e)
    };
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

pub fn to_c64(z: &BigComplex) -> Complex64 {
    Complex64::new(to_f64(&z.re), to_f64(&z.im))
}
