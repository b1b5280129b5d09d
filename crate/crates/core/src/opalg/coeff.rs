use std::fmt;

use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact complex rational, the coefficient ring of parsed expressions.
pub type ExactComplex = Complex<Rational64>;

/// Ring operations needed by the rewriting engine.
///
/// Implemented for exact complex rationals (the symbolic core) and for
/// `Complex64` (field operators whose coefficients carry plane-wave phases).
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn conjugate(&self) -> Self;
    fn to_c64(&self) -> Complex64;

    /// Splits the coefficient into a leading sign and a magnitude string.
    /// The magnitude is `None` when it is exactly one.
    fn render(&self) -> (bool, Option<String>);
}

fn fmt_rational(r: &Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Coefficient for ExactComplex {
    fn zero() -> Self {
        Complex::new(Rational64::zero(), Rational64::zero())
    }

    fn one() -> Self {
        Complex::new(Rational64::one(), Rational64::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negated(&self) -> Self {
        -self
    }

    fn conjugate(&self) -> Self {
        self.conj()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn render(&self) -> (bool, Option<String>) {
        if self.im.is_zero() {
            let mag = self.re.abs();
            let text = (!mag.is_one()).then(|| fmt_rational(&mag));
            (self.re.is_negative(), text)
        } else if self.re.is_zero() {
            let mag = self.im.abs();
            let text = if mag.is_one() {
                "i".to_string()
            } else {
                format!("{}i", fmt_rational(&mag))
            };
            (self.im.is_negative(), Some(text))
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            let text = format!(
                "({}{}{}i)",
                fmt_rational(&self.re),
                sign,
                fmt_rational(&self.im.abs())
            );
            (false, Some(text))
        }
    }
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negated(&self) -> Self {
        -self
    }

    fn conjugate(&self) -> Self {
        self.conj()
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn render(&self) -> (bool, Option<String>) {
        if self.im == 0.0 {
            let mag = self.re.abs();
            (self.re < 0.0, (mag != 1.0).then(|| format!("{mag}")))
        } else if self.re == 0.0 {
            (self.im < 0.0, Some(format!("{}i", self.im.abs())))
        } else {
            let sign = if self.im < 0.0 { '-' } else { '+' };
            (false, Some(format!("({}{}{}i)", self.re, sign, self.im.abs())))
        }
    }
}

/// Builds an exact coefficient from integer real and imaginary parts.
pub fn exact(re: i64, im: i64) -> ExactComplex {
    Complex::new(Rational64::from_integer(re), Rational64::from_integer(im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_exact() {
        assert_eq!(exact(1, 0).render(), (false, None));
        assert_eq!(exact(-2, 0).render(), (true, Some("2".into())));
        assert_eq!(exact(0, -1).render(), (true, Some("i".into())));
        assert_eq!(exact(3, -4).render(), (false, Some("(3-4i)".into())));
        let half = Complex::new(Rational64::new(1, 2), Rational64::zero());
        assert_eq!(half.render(), (false, Some("1/2".into())));
    }
}
