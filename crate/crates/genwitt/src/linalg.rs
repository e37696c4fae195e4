//! Sparse exact row reduction over basis-element-indexed vectors.
//!
//! A `RowSpace` maintains a fully reduced echelon spanning set: every
//! row's lex-greatest term (its pivot) has coefficient one, and no row's
//! pivot occurs in any other row's support. Membership testing is then a
//! single reduction pass, which is what the ideal-closure engine leans on.

use std::collections::BTreeMap;

use num_traits::One;

use crate::algebra::{BasisElement, Element};
use crate::rational::Rational;

#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    rows: Vec<Element>,
    pivots: BTreeMap<BasisElement, usize>,
}

impl RowSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rows in insertion order; each is pivot-normalized.
    pub fn rows(&self) -> &[Element] {
        &self.rows
    }

    /// `v` minus its projection onto the span. The result has no pivot of
    /// the space in its support and is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &Element) -> Element {
        let mut out = v.clone();
        // Eliminating one pivot can only introduce non-pivot terms (rows
        // are fully reduced), so scanning the original support once is
        // enough.
        let hits: Vec<usize> = out
            .support()
            .filter_map(|b| self.pivots.get(b).copied())
            .collect();
        for idx in hits {
            let row = &self.rows[idx];
            let pivot = row.leading().expect("rows are nonzero").0;
            let c = out.coeff(pivot);
            out.add_scaled(row, &-c);
        }
        out
    }

    /// Reduces `v` and, if anything is left, normalizes it and inserts it
    /// as a new row, back-substituting into the existing rows. Returns
    /// whether the rank grew.
    pub fn insert(&mut self, v: &Element) -> bool {
        let reduced = self.reduce(v);
        let Some((pivot, lead)) = reduced.leading() else {
            return false;
        };
        let pivot = pivot.clone();
        let row = reduced.scaled(&(Rational::one() / lead));

        for other in &mut self.rows {
            let c = other.coeff(&pivot);
            other.add_scaled(&row, &-c);
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(row);
        true
    }

    /// Membership in the span.
    pub fn contains(&self, v: &Element) -> bool {
        self.reduce(v).is_zero()
    }

    /// Membership of the unit vector `b`: since rows are fully reduced
    /// with pivot coefficient one, `b` is in the span iff it is a pivot
    /// whose row is exactly `b`.
    pub fn contains_basis(&self, b: &BasisElement) -> bool {
        self.pivots
            .get(b)
            .is_some_and(|&idx| self.rows[idx].num_terms() == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_i64;

    fn unit(a: i64, i: i64) -> Element {
        Element::unit(BasisElement::rank1(a, i))
    }

    #[test]
    fn reduce_zero_and_members() {
        let mut space = RowSpace::new();
        let r = unit(3, 0);
        assert!(space.insert(&r));
        assert!(space.reduce(&Element::zero()).is_zero());
        assert!(space.reduce(&r).is_zero());
    }

    #[test]
    fn reduce_against_single_pivot() {
        let mut space = RowSpace::new();
        space.insert(&unit(3, 0));
        let v = &unit(3, 0) + &unit(0, 0);
        assert_eq!(space.reduce(&v), unit(0, 0));
    }

    #[test]
    fn insert_rejects_dependents() {
        let mut space = RowSpace::new();
        assert!(!space.insert(&Element::zero()));
        assert!(space.insert(&unit(1, 0)));
        assert_eq!(space.rank(), 1);
        let double = unit(1, 0).scaled(&from_i64(2));
        assert!(!space.insert(&double));
        assert_eq!(space.rank(), 1);
    }

    #[test]
    fn back_substitution_keeps_rows_reduced() {
        let mut space = RowSpace::new();
        // Row with two terms, then insert the smaller term on its own;
        // the first row must lose it.
        let v = &unit(2, 0) + &unit(0, 0);
        space.insert(&v);
        space.insert(&unit(0, 0));
        assert_eq!(space.rank(), 2);
        for row in space.rows() {
            let pivot = row.leading().unwrap().0.clone();
            for other in space.rows() {
                if other.leading().unwrap().0 != &pivot {
                    assert!(!other.contains(&pivot));
                }
            }
        }
        assert!(space.contains(&unit(2, 0)));
    }
}
