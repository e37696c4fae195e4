//! Exact rational coefficients with a machine-word fast path.
//!
//! Closure eliminations perform millions of rational operations whose
//! values are almost always tiny fractions; representing those as
//! reduced `i64` pairs avoids heap traffic, while anything that no
//! longer fits is promoted to an arbitrary-precision rational. Every
//! operation is exact; promotion only changes the representation.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::rational::Rational;

/// Reduced exact rational: `Small(n, d)` with `gcd(|n|, d) = 1`, `d > 0`,
/// or a promoted arbitrary-precision value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Coeff {
    Small(i64, i64),
    Big(Box<Rational>),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Builds a reduced coefficient from a fraction with i128 parts, either
/// of which may exceed the i64 range.
fn make(mut num: i128, mut den: i128) -> Coeff {
    debug_assert!(den != 0);
    if num == 0 {
        return Coeff::Small(0, 1);
    }
    if den < 0 {
        num = -num;
        den = -den;
    }
    let g = gcd_i128(num, den);
    num /= g;
    den /= g;
    match (i64::try_from(num), i64::try_from(den)) {
        (Ok(n), Ok(d)) => Coeff::Small(n, d),
        _ => Coeff::Big(Box::new(Rational::new(num.into(), den.into()))),
    }
}

/// Demotes back to the small representation when it fits.
fn shrink(r: Rational) -> Coeff {
    if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
        Coeff::Small(n, d)
    } else {
        Coeff::Big(Box::new(r))
    }
}

impl Coeff {
    pub fn one() -> Self {
        Coeff::Small(1, 1)
    }

    pub fn as_small(&self) -> Option<(i64, i64)> {
        match self {
            Coeff::Small(n, d) => Some((*n, *d)),
            Coeff::Big(_) => None,
        }
    }

    pub fn from_int(v: i128) -> Self {
        make(v, 1)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Small(n, _) => *n == 0,
            Coeff::Big(r) => r.is_zero(),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        shrink(r.clone())
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            Coeff::Small(n, d) => Rational::new(BigInt::from(*n), BigInt::from(*d)),
            Coeff::Big(r) => (**r).clone(),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            // i64::MIN negation would overflow the small form
            Coeff::Small(n, d) => make(-(*n as i128), *d as i128),
            Coeff::Big(r) => shrink(-(**r).clone()),
        }
    }

    pub fn recip(&self) -> Self {
        match self {
            Coeff::Small(n, d) => {
                debug_assert!(*n != 0);
                make(*d as i128, *n as i128)
            }
            Coeff::Big(r) => shrink((**r).recip()),
        }
    }

    pub fn mul_int(&self, v: i64) -> Self {
        match self {
            Coeff::Small(n, d) => make(*n as i128 * v as i128, *d as i128),
            Coeff::Big(r) => shrink((**r).clone() * Rational::from_integer(v.into())),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Coeff::Small(n1, d1), Coeff::Small(n2, d2)) => {
                // cross-reduce first so the i128 products stay exact
                let g1 = gcd_i128(*n1 as i128, *d2 as i128).max(1);
                let g2 = gcd_i128(*n2 as i128, *d1 as i128).max(1);
                let num = (*n1 as i128 / g1) * (*n2 as i128 / g2);
                let den = (*d1 as i128 / g2) * (*d2 as i128 / g1);
                make(num, den)
            }
            _ => shrink(self.to_rational() * other.to_rational()),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        match (self, other) {
            (Coeff::Small(n1, d1), Coeff::Small(n2, d2)) => {
                let g = gcd_i128(*d1 as i128, *d2 as i128).max(1);
                let num = *n1 as i128 * (*d2 as i128 / g) - *n2 as i128 * (*d1 as i128 / g);
                let den = (*d1 as i128 / g) * (*d2 as i128);
                make(num, den)
            }
            _ => shrink(self.to_rational() - other.to_rational()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Coeff::Small(n1, d1), Coeff::Small(n2, d2)) => {
                let g = gcd_i128(*d1 as i128, *d2 as i128).max(1);
                let num = *n1 as i128 * (*d2 as i128 / g) + *n2 as i128 * (*d1 as i128 / g);
                let den = (*d1 as i128 / g) * (*d2 as i128);
                make(num, den)
            }
            _ => shrink(self.to_rational() + other.to_rational()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use rand::Rng;

    #[test]
    fn matches_bigrational_on_random_small_values() {
        let mut rng = crate::sample::rng(99);
        for _ in 0..2000 {
            let a = ratio(rng.random_range(-40..=40), rng.random_range(1..=12));
            let b = ratio(rng.random_range(-40..=40).max(1), rng.random_range(1..=12));
            let (ca, cb) = (Coeff::from_rational(&a), Coeff::from_rational(&b));
            assert_eq!(ca.mul(&cb).to_rational(), &a * &b);
            assert_eq!(ca.sub(&cb).to_rational(), &a - &b);
            assert_eq!(ca.neg().to_rational(), -&a);
            assert_eq!(cb.recip().to_rational(), ratio(1, 1) / &b);
        }
    }

    #[test]
    fn promotes_on_overflow_and_stays_exact() {
        let big = Coeff::Small(i64::MAX, 1);
        let squared = big.mul(&big);
        assert!(matches!(squared, Coeff::Big(_)));
        let expected = Rational::from_integer(BigInt::from(i64::MAX)).pow(2);
        assert_eq!(squared.to_rational(), expected);

        // and demotes once values shrink again
        let back = squared.mul(&Coeff::Small(1, i64::MAX).mul(&Coeff::Small(1, i64::MAX)));
        assert_eq!(back, Coeff::one());
    }

    #[test]
    fn subtraction_cancels_exactly() {
        let x = Coeff::Small(7, 3);
        assert!(x.sub(&x).is_zero());
        let y = Coeff::Small(i64::MAX, 2);
        assert!(y.sub(&y).is_zero());
    }
}
