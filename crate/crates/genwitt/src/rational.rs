//! Exact rational scalars.
//!
//! All coefficient arithmetic in this crate is arbitrary-precision and
//! exact; there is no floating point anywhere. `Rational` values are
//! always reduced with a positive denominator, and zero is `0/1`.

use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn from_i64(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `num/den`, reduced. Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn reduced_with_positive_denominator() {
        let r = ratio(-4, -6);
        assert_eq!(r, ratio(2, 3));
        assert_eq!(r.denom(), &BigInt::from(3));
        assert!(from_i64(0).is_zero());
        assert_eq!(from_i64(0).denom(), &BigInt::from(1));
    }

    #[test]
    fn exact_inverse_with_200_digit_components() {
        // (a/b)·(b/a) must be exactly 1 with ~200-digit numerator and
        // denominator, which would be far outside f64 range.
        let digits_a: String = std::iter::repeat("7291").take(50).collect();
        let digits_b: String = std::iter::repeat("3863").take(50).collect();
        let a = BigInt::parse_bytes(digits_a.as_bytes(), 10).unwrap();
        let b = BigInt::parse_bytes(digits_b.as_bytes(), 10).unwrap();
        let r = Rational::new(a.clone(), b.clone());
        let inv = Rational::new(b, a);
        assert!((r * inv).is_one());
    }
}
