//! The generalized Witt algebra: configuration, basis elements, elements,
//! and the bracket.
//!
//! A basis element `(a_1,…,a_n | i_1,…,i_n)_k` carries integer upper
//! indices `a`, integer lower indices `i`, and a direction `1 ≤ k ≤ n`.
//! The algebra is parameterized by nonzero slopes `m_1,…,m_n`: direction
//! `p` uses the additive injective map `g_p(a) = m_p·a`. The bracket on
//! basis elements is
//!
//! ```text
//! [ (a|i)_k, (b|j)_l ] = g_k(b_k)·(a+b | i+j)_l + j_k·(a+b | i+j−e_k)_l
//!                      − g_l(a_l)·(a+b | i+j)_k − i_l·(a+b | i+j−e_l)_k
//! ```
//!
//! extended bilinearly. With all upper indices zero this reduces to the
//! classical Witt bracket `[x^a ∂_i, x^b ∂_j] = b_i x^{a+b−e_i} ∂_j −
//! a_j x^{a+b−e_j} ∂_i`; the operator realization in [`crate::operator`]
//! provides an independent check of the general formula.

use std::fmt;

use num_traits::Zero;

use crate::error::Error;
use crate::linear::Combination;
use crate::rational::{from_i64, Rational};

/// Rank `n` plus the nonzero slopes `m_1,…,m_n` of the additive maps
/// `g_p(a) = m_p·a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraConfig {
    slopes: Vec<Rational>,
}

impl AlgebraConfig {
    pub fn new(slopes: Vec<Rational>) -> Result<Self, Error> {
        if slopes.is_empty() {
            return Err(Error::EmptyConfig);
        }
        for (idx, s) in slopes.iter().enumerate() {
            if s.is_zero() {
                return Err(Error::ZeroSlope { index: idx + 1 });
            }
        }
        Ok(Self { slopes })
    }

    /// Rank-`n` algebra with every slope equal to one, so each `g_p` is
    /// the inclusion of the integers.
    pub fn with_unit_slopes(n: usize) -> Self {
        assert!(n >= 1, "rank must be at least 1");
        Self { slopes: vec![Rational::from_integer(1.into()); n] }
    }

    pub fn n(&self) -> usize {
        self.slopes.len()
    }

    pub fn slopes(&self) -> &[Rational] {
        &self.slopes
    }

    /// Evaluates `g_p(a) = m_p·a` for a 1-based direction index `p`.
    pub fn g_eval(&self, p: usize, a: i64) -> Result<Rational, Error> {
        if p == 0 || p > self.n() {
            return Err(Error::DirectionOutOfRange { dir: p, n: self.n() });
        }
        Ok(self.g(p, a))
    }

    pub(crate) fn g(&self, p: usize, a: i64) -> Rational {
        debug_assert!(p >= 1 && p <= self.n());
        &self.slopes[p - 1] * from_i64(a)
    }

    pub(crate) fn check_element(&self, x: &Element) -> Result<(), Error> {
        for b in x.support() {
            if b.n() != self.n() {
                return Err(Error::DimensionMismatch { expected: self.n(), found: b.n() });
            }
        }
        Ok(())
    }

    /// The bracket `[x, y]`, extended bilinearly from basis elements.
    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element, Error> {
        self.check_element(x)?;
        self.check_element(y)?;
        let mut out = Element::zero();
        for (bx, cx) in x.iter() {
            for (by, cy) in y.iter() {
                let scale = cx * cy;
                self.bracket_basis_into(bx, by, &scale, &mut out);
            }
        }
        Ok(out)
    }

    /// `scale·[x, y]` for basis elements, accumulated into `out`.
    fn bracket_basis_into(
        &self,
        x: &BasisElement,
        y: &BasisElement,
        scale: &Rational,
        out: &mut Element,
    ) {
        let mut raw = Vec::with_capacity(4);
        self.bracket_basis_raw(x, y, &mut raw);
        for (upper, lower, dir, coeff) in raw {
            out.add_term(BasisElement::new(upper, lower, dir), coeff * scale);
        }
    }

    /// The up-to-four terms of `[x, y]` as `(upper, lower, dir, coeff)`
    /// tuples, without canonical combination.
    pub(crate) fn bracket_basis_raw(
        &self,
        x: &BasisElement,
        y: &BasisElement,
        out: &mut Vec<(Vec<i64>, Vec<i64>, usize, Rational)>,
    ) {
        let k = x.dir;
        let l = y.dir;
        let upper: Vec<i64> = x.upper.iter().zip(&y.upper).map(|(a, b)| a + b).collect();
        let lower: Vec<i64> = x.lower.iter().zip(&y.lower).map(|(a, b)| a + b).collect();

        let b_k = y.upper[k - 1];
        if b_k != 0 {
            out.push((upper.clone(), lower.clone(), l, self.g(k, b_k)));
        }
        let j_k = y.lower[k - 1];
        if j_k != 0 {
            let mut lo = lower.clone();
            lo[k - 1] -= 1;
            out.push((upper.clone(), lo, l, from_i64(j_k)));
        }
        let a_l = x.upper[l - 1];
        if a_l != 0 {
            out.push((upper.clone(), lower.clone(), k, -self.g(l, a_l)));
        }
        let i_l = x.lower[l - 1];
        if i_l != 0 {
            let mut lo = lower;
            lo[l - 1] -= 1;
            out.push((upper, lo, k, from_i64(-i_l)));
        }
    }
}

/// An indexed generator `(a_1,…,a_n | i_1,…,i_n)_k`.
///
/// The derived order is the lexicographic order on the flattened tuple
/// `(a_1,…,a_n, i_1,…,i_n, k)`; it is total on basis elements of a fixed
/// rank and drives pivot selection, term display, and scan schedules.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasisElement {
    pub upper: Vec<i64>,
    pub lower: Vec<i64>,
    pub dir: usize,
}

impl BasisElement {
    /// Panics if the index tuples disagree in length or `dir` is out of
    /// range; use the parser for untrusted input.
    pub fn new(upper: Vec<i64>, lower: Vec<i64>, dir: usize) -> Self {
        assert_eq!(upper.len(), lower.len(), "index tuples must have equal length");
        assert!(dir >= 1 && dir <= upper.len(), "direction out of range");
        Self { upper, lower, dir }
    }

    /// `(a|i)_1` in rank one.
    pub fn rank1(a: i64, i: i64) -> Self {
        Self::new(vec![a], vec![i], 1)
    }

    /// `(0,…,0 | 0,…,0)_k`: all indices zero.
    pub fn zero_indices(n: usize, dir: usize) -> Self {
        Self::new(vec![0; n], vec![0; n], dir)
    }

    pub fn n(&self) -> usize {
        self.upper.len()
    }
}

fn fmt_ints(f: &mut fmt::Formatter<'_>, vals: &[i64]) -> fmt::Result {
    for (idx, v) in vals.iter().enumerate() {
        if idx > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        fmt_ints(f, &self.upper)?;
        write!(f, "|")?;
        fmt_ints(f, &self.lower)?;
        write!(f, ")_{}", self.dir)
    }
}

/// A finitely supported rational linear combination of basis elements in
/// canonical form.
pub type Element = Combination<BasisElement>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn cfg1() -> AlgebraConfig {
        AlgebraConfig::with_unit_slopes(1)
    }

    #[test]
    fn g_eval_is_slope_times_argument() {
        let cfg = cfg1();
        assert_eq!(cfg.g_eval(1, 5).unwrap(), from_i64(5));
        assert_eq!(cfg.g_eval(1, 0).unwrap(), from_i64(0));

        let cfg2 = AlgebraConfig::new(vec![from_i64(1), ratio(2, 3)]).unwrap();
        assert_eq!(cfg2.g_eval(2, -3).unwrap(), from_i64(-2));
        assert!(matches!(cfg2.g_eval(3, 1), Err(Error::DirectionOutOfRange { .. })));
        assert!(matches!(cfg2.g_eval(0, 1), Err(Error::DirectionOutOfRange { .. })));
    }

    #[test]
    fn zero_slopes_are_rejected() {
        assert!(matches!(
            AlgebraConfig::new(vec![from_i64(1), from_i64(0)]),
            Err(Error::ZeroSlope { index: 2 })
        ));
        assert!(matches!(AlgebraConfig::new(vec![]), Err(Error::EmptyConfig)));
    }

    #[test]
    fn bracket_is_alternating() {
        let cfg = cfg1();
        let x = Element::unit(BasisElement::rank1(2, -1));
        assert!(cfg.bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn bracket_of_pure_exponentials() {
        // [(1|0)_1, (2|0)_1] = (g(2) − g(1))·(3|0)_1 = (3|0)_1 with m = 1.
        let cfg = cfg1();
        let x = Element::unit(BasisElement::rank1(1, 0));
        let y = Element::unit(BasisElement::rank1(2, 0));
        let expected = Element::unit(BasisElement::rank1(3, 0));
        assert_eq!(cfg.bracket(&x, &y).unwrap(), expected);
    }

    #[test]
    fn bracket_with_lower_only_element() {
        // [(0|1)_1, (2|0)_1] = 2·(2|1)_1 − (2|0)_1 with m = 1.
        let cfg = cfg1();
        let x = Element::unit(BasisElement::rank1(0, 1));
        let y = Element::unit(BasisElement::rank1(2, 0));
        let mut expected = Element::term(BasisElement::rank1(2, 1), from_i64(2));
        expected.add_term(BasisElement::rank1(2, 0), from_i64(-1));
        assert_eq!(cfg.bracket(&x, &y).unwrap(), expected);
    }

    #[test]
    fn bracket_vanishing_cross_terms() {
        // n = 2, m = (1,1): all four coefficients vanish for this pair.
        let cfg = AlgebraConfig::with_unit_slopes(2);
        let x = Element::unit(BasisElement::new(vec![1, 0], vec![0, 0], 1));
        let y = Element::unit(BasisElement::new(vec![0, 1], vec![0, 0], 2));
        assert!(cfg.bracket(&x, &y).unwrap().is_zero());
    }

    #[test]
    fn bracket_rejects_dimension_mismatch() {
        let cfg = cfg1();
        let x = Element::unit(BasisElement::new(vec![1, 0], vec![0, 0], 1));
        let y = Element::unit(BasisElement::rank1(1, 0));
        assert!(matches!(
            cfg.bracket(&x, &y),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn display_round_readable() {
        let mut e = Element::term(
            BasisElement::new(vec![1, 0], vec![2, -1], 1),
            ratio(3, 2),
        );
        e.add_term(BasisElement::new(vec![0, 0], vec![0, 0], 2), from_i64(-1));
        assert_eq!(e.to_string(), "3/2*(1,0|2,-1)_1 - (0,0|0,0)_2");
    }
}
