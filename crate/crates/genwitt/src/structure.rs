//! Gradation, ordering, and element statistics.
//!
//! The algebra is graded by the upper-index tuple: brackets add degrees,
//! and the degree-zero component is the classical Witt algebra.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{BasisElement, Element};
use crate::error::Error;

/// A grading weight: the upper-index tuple of a basis element.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Degree(pub Vec<i64>);

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let joined = self.0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({joined})")
    }
}

/// The degree of a basis element is its upper-index tuple.
pub fn degree_of(b: &BasisElement) -> Degree {
    Degree(b.upper.clone())
}

/// Splits an element into homogeneous components, degrees lex-descending.
/// The components sum back to the input; the zero element has none.
pub fn decompose(x: &Element) -> Vec<(Degree, Element)> {
    let mut by_degree: BTreeMap<Degree, Element> = BTreeMap::new();
    for (b, c) in x.iter() {
        by_degree
            .entry(degree_of(b))
            .or_insert_with(Element::zero)
            .add_term(b.clone(), c.clone());
    }
    by_degree.into_iter().rev().collect()
}

/// Lexicographic comparison of `(a_1,…,a_n, i_1,…,i_n, k)` tuples.
pub fn lex_cmp(b1: &BasisElement, b2: &BasisElement) -> Ordering {
    debug_assert_eq!(b1.n(), b2.n());
    b1.cmp(b2)
}

/// The string number: how many distinct degrees occur in the support.
/// Zero for the zero element.
pub fn string_number(x: &Element) -> usize {
    // support iterates in lex order, so equal upper tuples are adjacent
    let mut degrees: Vec<&[i64]> = x.support().map(|b| b.upper.as_slice()).collect();
    degrees.dedup();
    degrees.len()
}

/// The greatest lower index occurring anywhere in the support.
/// Undefined (an error) on the zero element.
pub fn lp(x: &Element) -> Result<i64, Error> {
    x.support()
        .flat_map(|b| b.lower.iter().copied())
        .max()
        .ok_or(Error::ZeroElement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_i64;

    #[test]
    fn degree_is_the_upper_tuple() {
        let b = BasisElement::new(vec![3, -1], vec![5, 2], 2);
        assert_eq!(degree_of(&b), Degree(vec![3, -1]));
        let z = BasisElement::new(vec![0, 0], vec![4, -7], 1);
        assert_eq!(degree_of(&z), Degree(vec![0, 0]));
    }

    #[test]
    fn decompose_groups_by_degree() {
        assert!(decompose(&Element::zero()).is_empty());

        let mut one_component = Element::unit(BasisElement::rank1(1, 0));
        one_component.add_term(BasisElement::rank1(1, 2), from_i64(1));
        let parts = decompose(&one_component);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, Degree(vec![1]));
        assert_eq!(parts[0].1, one_component);

        let mut two_components = Element::unit(BasisElement::rank1(1, 0));
        two_components.add_term(BasisElement::rank1(0, 0), from_i64(1));
        let parts = decompose(&two_components);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, Degree(vec![1]));
        assert_eq!(parts[1].0, Degree(vec![0]));
        let total = &parts[0].1 + &parts[1].1;
        assert_eq!(total, two_components);
    }

    #[test]
    fn lex_order_examples() {
        let b = BasisElement::new(vec![1, 0], vec![0, 0], 1);
        assert_eq!(lex_cmp(&b, &b), Ordering::Equal);

        // First upper coordinate decides.
        let lo = BasisElement::new(vec![0, 5], vec![9, 9], 2);
        assert_eq!(lex_cmp(&b, &lo), Ordering::Greater);

        // Lower index decides before the direction.
        let p = BasisElement::new(vec![0, 0], vec![1, 0], 1);
        let q = BasisElement::new(vec![0, 0], vec![0, 0], 2);
        assert_eq!(lex_cmp(&p, &q), Ordering::Greater);
    }

    #[test]
    fn string_number_counts_distinct_degrees() {
        assert_eq!(string_number(&Element::zero()), 0);

        let mut one = Element::unit(BasisElement::new(vec![1], vec![0], 1));
        one.add_term(BasisElement::new(vec![1], vec![7], 1), from_i64(2));
        assert_eq!(string_number(&one), 1);

        let mut three = Element::unit(BasisElement::rank1(1, 0));
        three.add_term(BasisElement::rank1(0, 0), from_i64(1));
        three.add_term(BasisElement::rank1(-1, 3), from_i64(1));
        assert_eq!(string_number(&three), 3);
    }

    #[test]
    fn lp_takes_the_maximum_lower_index() {
        assert_eq!(lp(&Element::unit(BasisElement::rank1(0, 0))).unwrap(), 0);

        let mut x = Element::unit(BasisElement::rank1(2, -5));
        x.add_term(BasisElement::rank1(0, 3), from_i64(1));
        assert_eq!(lp(&x).unwrap(), 3);

        let y = Element::unit(BasisElement::new(vec![1, 1], vec![4, -2], 2));
        assert_eq!(lp(&y).unwrap(), 4);

        assert!(matches!(lp(&Element::zero()), Err(Error::ZeroElement)));
    }
}
