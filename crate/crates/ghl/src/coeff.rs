//! Exact Gaussian-rational coefficients.
//!
//! The hierarchy assembly routes every intermediate through the complex
//! substitution `i u_x + (mu + u)^2`, so coefficients must carry an exact
//! imaginary part. Realness of the final generated equations is checked,
//! never assumed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// `re + im*i` with arbitrary-precision rational components.
///
/// `BigRational` keeps fractions reduced with a positive denominator, so the
/// canonical-form invariants hold by construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Coeff {
    pub re: BigRational,
    pub im: BigRational,
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Coeff {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Coeff {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Coeff {
            re: big(n),
            im: BigRational::zero(),
        }
    }

    /// Exact rational `num/den`. Panics on `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Coeff {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Coeff {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Divide by a nonzero integer, exactly.
    pub fn div_int(&self, n: i64) -> Self {
        let d = big(n);
        Coeff {
            re: &self.re / &d,
            im: &self.im / &d,
        }
    }

    /// Lossy conversion of the real part; callers must have checked `is_real`.
    pub fn re_f64(&self) -> f64 {
        self.re.to_f64().expect("rational out of f64 range")
    }

    /// `self + i * (real part of im)`; used by the text parser.
    pub fn add_im(&self, im: &Coeff) -> Coeff {
        Coeff {
            re: self.re.clone(),
            im: &self.im + &im.re,
        }
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, rhs: Coeff) -> Coeff {
        Coeff {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl AddAssign for Coeff {
    fn add_assign(&mut self, rhs: Coeff) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, rhs: Coeff) -> Coeff {
        Coeff {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl SubAssign for Coeff {
    fn sub_assign(&mut self, rhs: Coeff) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, rhs: Coeff) -> Coeff {
        &self * &rhs
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        Coeff {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl MulAssign for Coeff {
    fn mul_assign(&mut self, rhs: Coeff) {
        *self = &*self * &rhs;
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff {
            re: -self.re,
            im: -self.im,
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", fmt_rational(&self.re))
        } else if self.re.is_zero() {
            if self.im.is_one() {
                write!(f, "i")
            } else if (-&self.im).is_one() {
                write!(f, "-i")
            } else {
                write!(f, "{}*i", fmt_rational(&self.im))
            }
        } else {
            let sign = if self.im.is_negative() { "-" } else { "+" };
            write!(
                f,
                "({}{}{}*i)",
                fmt_rational(&self.re),
                sign,
                fmt_rational(&self.im.abs())
            )
        }
    }
}
