//! Finitely supported linear combinations over exact rationals.
//!
//! `Combination<K>` is the shared backbone of [`Element`](crate::algebra::Element)
//! and [`FunctionElement`](crate::operator::FunctionElement). It is kept
//! canonical at every step: no zero coefficient is ever stored, so two
//! combinations are equal iff their term maps are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Combination<K: Ord + Clone> {
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord + Clone> Combination<K> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    /// Single term `coeff·key` (empty if `coeff` is zero).
    pub fn term(key: K, coeff: Rational) -> Self {
        let mut c = Self::zero();
        c.add_term(key, coeff);
        c
    }

    /// `key` with coefficient one.
    pub fn unit(key: K) -> Self {
        Self::term(key, Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `key`, zero when absent.
    pub fn coeff(&self, key: &K) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn contains(&self, key: &K) -> bool {
        self.terms.contains_key(key)
    }

    /// Terms in ascending key order.
    pub fn iter(&self) -> std::collections::btree_map::Iter<'_, K, Rational> {
        self.terms.iter()
    }

    /// Terms in descending key order (the canonical display order).
    pub fn iter_desc(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// Greatest term in the key order, if any.
    pub fn leading(&self) -> Option<(&K, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Adds `coeff·key`, dropping the entry if it cancels.
    pub fn add_term(&mut self, key: K, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// `self += scale·other`.
    pub fn add_scaled(&mut self, other: &Self, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (k, c) in other.iter() {
            self.add_term(k.clone(), c * scale);
        }
    }

    pub fn scaled(&self, scale: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, scale);
        out
    }

    /// Relabels keys, summing any collisions.
    pub fn map_keys<L: Ord + Clone>(&self, f: impl Fn(&K) -> L) -> Combination<L> {
        let mut out = Combination::zero();
        for (k, c) in self.iter() {
            out.add_term(f(k), c.clone());
        }
        out
    }
}

impl<K: Ord + Clone> Add for &Combination<K> {
    type Output = Combination<K>;
    fn add(self, rhs: Self) -> Combination<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl<K: Ord + Clone> Sub for &Combination<K> {
    type Output = Combination<K>;
    fn sub(self, rhs: Self) -> Combination<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl<K: Ord + Clone> Neg for &Combination<K> {
    type Output = Combination<K>;
    fn neg(self) -> Combination<K> {
        self.scaled(&-Rational::one())
    }
}

impl<K: Ord + Clone + fmt::Display> fmt::Display for Combination<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (key, coeff)) in self.iter_desc().enumerate() {
            let negative = coeff.is_negative();
            let abs = coeff.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if abs.is_one() {
                write!(f, "{key}")?;
            } else {
                write!(f, "{abs}*{key}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_i64, ratio};

    #[test]
    fn cancellation_keeps_canonical_form() {
        let mut c: Combination<u32> = Combination::zero();
        c.add_term(3, ratio(1, 2));
        c.add_term(3, ratio(1, 2));
        c.add_term(3, from_i64(-1));
        assert!(c.is_zero());
        assert_eq!(c, Combination::zero());
    }

    #[test]
    fn leading_is_greatest_key() {
        let mut c: Combination<u32> = Combination::zero();
        c.add_term(1, from_i64(5));
        c.add_term(9, from_i64(-2));
        c.add_term(4, from_i64(7));
        let (k, coeff) = c.leading().unwrap();
        assert_eq!(*k, 9);
        assert_eq!(coeff, &from_i64(-2));
    }

    #[test]
    fn display_orders_terms_descending() {
        let mut c: Combination<u32> = Combination::zero();
        c.add_term(1, from_i64(1));
        c.add_term(2, ratio(-3, 2));
        assert_eq!(c.to_string(), "-3/2*2 + 1");
        assert_eq!(Combination::<u32>::zero().to_string(), "0");
    }
}
