//! Derivations of the rank-one subalgebra with non-negative lower
//! indices.
//!
//! The subalgebra in question has basis `(a|i)_1` with `a` any integer
//! and `i ≥ 0`; `∂ = (0|0)_1` acts as `d/dx`. A derivation supplied as a
//! finite table over a window decomposes as inner + `c·ad_∂` + scalar:
//! the inner part is recovered by antidifferentiating the image of `∂`,
//! and the two scalars are read off the residual at `(0|1)_1` and
//! `(1|0)_1`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{AlgebraConfig, BasisElement, Element};
use crate::error::Error;
use crate::ideals::IndexBox;
use crate::operator::{FunctionElement, FunctionTerm};
use crate::rational::{from_i64, Rational};

/// `∂ = (0|0)_1`.
pub fn del() -> BasisElement {
    BasisElement::rank1(0, 0)
}

/// Whether `b` belongs to the non-negative basis: rank one, direction 1,
/// lower index ≥ 0. Upper indices range over all integers.
pub fn in_bplus(b: &BasisElement) -> bool {
    b.n() == 1 && b.dir == 1 && b.lower[0] >= 0
}

/// A derivation in standard form: the rule
/// `b ↦ [G, b] + c·[∂, b] + s·a(b)·b` where `a(b)` is the upper index.
///
/// This doubles as the result type of [`decompose`]; `residual_report`
/// is empty exactly when the recomposed rule reproduces every tabulated
/// image.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Inner part `G`.
    pub inner: Element,
    /// Coefficient `c` of `ad_∂`.
    pub del_coeff: Rational,
    /// Slope `s` of the scalar part, which multiplies `b` by `s·a(b)`.
    pub scalar_slope: Rational,
    /// Window elements where the recomposition disagrees with the table.
    pub residual_report: Vec<Residual>,
}

#[derive(Clone, Debug)]
pub struct Residual {
    pub at: BasisElement,
    /// Tabulated image minus the recomposed one.
    pub discrepancy: Element,
}

impl Decomposition {
    pub fn new(inner: Element, del_coeff: Rational, scalar_slope: Rational) -> Self {
        Self { inner, del_coeff, scalar_slope, residual_report: Vec::new() }
    }

    pub fn is_clean(&self) -> bool {
        self.residual_report.is_empty()
    }

    /// Applies the rule to a basis element.
    pub fn apply(&self, cfg: &AlgebraConfig, b: &BasisElement) -> Result<Element, Error> {
        let unit = Element::unit(b.clone());
        let mut out = cfg.bracket(&self.inner, &unit)?;
        if !self.del_coeff.is_zero() {
            let by_del = cfg.bracket(&Element::unit(del()), &unit)?;
            out.add_scaled(&by_del, &self.del_coeff);
        }
        out.add_term(b.clone(), from_i64(b.upper[0]) * &self.scalar_slope);
        Ok(out)
    }
}

/// The scalar derivation of slope `s`: `b ↦ s·a(b)·b`. The derivation
/// identity forces every scalar derivation into this one-parameter form.
pub fn scalar_derivation(s: Rational) -> Decomposition {
    Decomposition::new(Element::zero(), Rational::zero(), s)
}

/// The inner derivation `ad_G: b ↦ [G, b]`.
pub fn inner_derivation(g: Element) -> Decomposition {
    Decomposition::new(g, Rational::zero(), Rational::zero())
}

/// A derivation given extensionally: an image for every basis element of
/// a window `{(a|i)_1 : |a| ≤ upper, 0 ≤ i ≤ lower}`.
#[derive(Clone, Debug)]
pub struct DerivationTable {
    window: IndexBox,
    images: BTreeMap<BasisElement, Element>,
}

impl DerivationTable {
    /// The window's basis elements, lex-ascending.
    pub fn window_keys(window: IndexBox) -> Vec<BasisElement> {
        let mut keys = Vec::new();
        for a in -window.upper..=window.upper {
            for i in 0..=window.lower {
                keys.push(BasisElement::rank1(a, i));
            }
        }
        keys.sort();
        keys
    }

    /// Tabulates a rule over every key of the window.
    pub fn tabulate(
        cfg: &AlgebraConfig,
        window: IndexBox,
        rule: &Decomposition,
    ) -> Result<Self, Error> {
        Self::from_rule(window, |b| rule.apply(cfg, b))
    }

    pub fn from_rule(
        window: IndexBox,
        mut rule: impl FnMut(&BasisElement) -> Result<Element, Error>,
    ) -> Result<Self, Error> {
        let mut images = BTreeMap::new();
        for key in Self::window_keys(window) {
            let image = rule(&key)?;
            images.insert(key, image);
        }
        Ok(Self { window, images })
    }

    /// Builds a table from explicit entries, e.g. a parsed table file.
    /// Keys must be distinct members of the non-negative basis; the
    /// window is the smallest one enclosing them.
    pub fn from_entries(
        entries: impl IntoIterator<Item = (BasisElement, Element)>,
    ) -> Result<Self, Error> {
        let mut images = BTreeMap::new();
        let (mut max_upper, mut max_lower) = (0, 0);
        for (key, image) in entries {
            if !in_bplus(&key) {
                return Err(Error::NegativeLowerIndex(key.lower[0]));
            }
            for b in image.support() {
                if b.n() != 1 {
                    return Err(Error::DimensionMismatch { expected: 1, found: b.n() });
                }
            }
            max_upper = max_upper.max(key.upper[0].abs());
            max_lower = max_lower.max(key.lower[0]);
            if images.insert(key.clone(), image).is_some() {
                return Err(Error::DuplicateEntry(key.to_string()));
            }
        }
        Ok(Self { window: IndexBox::new(max_upper, max_lower), images })
    }

    pub fn window(&self) -> IndexBox {
        self.window
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, b: &BasisElement) -> Option<&Element> {
        self.images.get(b)
    }

    pub fn contains_key(&self, b: &BasisElement) -> bool {
        self.images.contains_key(b)
    }

    /// Entries in lex-ascending key order.
    pub fn entries(&self) -> impl Iterator<Item = (&BasisElement, &Element)> {
        self.images.iter()
    }

    /// Linear extension of the table to an element; `None` if some
    /// support term has no tabulated image.
    pub fn apply(&self, x: &Element) -> Option<Element> {
        let mut out = Element::zero();
        for (b, c) in x.iter() {
            out.add_scaled(self.images.get(b)?, c);
        }
        Some(out)
    }
}

/// Antidifferentiation: returns `g` with `∂(g) = f`, where `∂` acts on
/// function terms by `(a|i) ↦ m·a·(a|i) + i·(a|i−1)`.
///
/// Terms with `a ≠ 0` are solved by back-substitution down the
/// triangular system in `i` (the diagonal `m·a` is nonzero); the `a = 0`
/// part integrates termwise, `(0|i) ↦ (0|i+1)/(i+1)`, and is normalized
/// to have no constant term, which pins the one representative modulo
/// the kernel of `∂`.
pub fn integrate(cfg: &AlgebraConfig, f: &FunctionElement) -> Result<FunctionElement, Error> {
    if cfg.n() != 1 {
        return Err(Error::NotRankOne(cfg.n()));
    }
    let slope = &cfg.slopes()[0];

    let mut groups: BTreeMap<i64, BTreeMap<i64, Rational>> = BTreeMap::new();
    for (t, c) in f.iter() {
        if t.n() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: t.n() });
        }
        let i = t.lower[0];
        if i < 0 {
            return Err(Error::NegativeLowerIndex(i));
        }
        groups.entry(t.upper[0]).or_default().insert(i, c.clone());
    }

    let mut out = FunctionElement::zero();
    for (a, coeffs) in groups {
        if a == 0 {
            for (i, c) in coeffs {
                out.add_term(FunctionTerm::rank1(0, i + 1), c / from_i64(i + 1));
            }
        } else {
            let diag = slope * from_i64(a);
            let top = *coeffs.keys().next_back().expect("group is nonempty");
            let mut above = Rational::zero();
            for i in (0..=top).rev() {
                let c_i = coeffs.get(&i).cloned().unwrap_or_else(Rational::zero);
                let d_i = (c_i - from_i64(i + 1) * &above) / &diag;
                out.add_term(FunctionTerm::rank1(a, i), d_i.clone());
                above = d_i;
            }
        }
    }
    Ok(out)
}

/// A window pair on which the derivation identity fails.
#[derive(Clone, Debug)]
pub struct Violation {
    pub left: BasisElement,
    pub right: BasisElement,
    /// `D([l,r]) − [D(l),r] − [l,D(r)]`.
    pub discrepancy: Element,
}

/// Checks `D([b1,b2]) = [D(b1),b2] + [b1,D(b2)]` on every key pair whose
/// bracket support is fully tabulated, and returns the failures.
pub fn verify_derivation(
    cfg: &AlgebraConfig,
    table: &DerivationTable,
) -> Result<Vec<Violation>, Error> {
    if cfg.n() != 1 {
        return Err(Error::NotRankOne(cfg.n()));
    }
    let keys: Vec<&BasisElement> = table.images.keys().collect();
    let mut violations = Vec::new();
    // The identity is antisymmetric in (b1, b2) and trivial on the
    // diagonal, so unordered pairs suffice.
    for (idx, &b1) in keys.iter().enumerate() {
        let u1 = Element::unit(b1.clone());
        for &b2 in &keys[idx + 1..] {
            let u2 = Element::unit(b2.clone());
            let bracket = cfg.bracket(&u1, &u2)?;
            let Some(lhs) = table.apply(&bracket) else {
                continue;
            };
            let rhs = &cfg.bracket(table.image(b1).expect("key"), &u2)?
                + &cfg.bracket(&u1, table.image(b2).expect("key"))?;
            if lhs != rhs {
                violations.push(Violation {
                    left: b1.clone(),
                    right: b2.clone(),
                    discrepancy: &lhs - &rhs,
                });
            }
        }
    }
    Ok(violations)
}

/// Splits a tabulated derivation into inner + `c·ad_∂` + scalar parts.
///
/// The image of `∂` is read as a function `f` (its lower indices must be
/// non-negative for the table to be a derivation of the subalgebra); `G`
/// solves `[G, ∂] = f·∂` via `∂(h) = −f`; the residual `D − ad_G` kills
/// `∂` and so must equal `c·ad_∂ + scalar`, with `c` the `∂`-coefficient
/// of the residual at `(0|1)_1` and `s` read off `(1|0)_1`. Every
/// tabulated image is then compared with the recomposed rule; failures
/// land in `residual_report`.
pub fn decompose(cfg: &AlgebraConfig, table: &DerivationTable) -> Result<Decomposition, Error> {
    if cfg.n() != 1 {
        return Err(Error::NotRankOne(cfg.n()));
    }
    let del_b = del();
    let probe_c = BasisElement::rank1(0, 1);
    let probe_s = BasisElement::rank1(1, 0);
    for probe in [&del_b, &probe_c, &probe_s] {
        if !table.contains_key(probe) {
            return Err(Error::IncompleteTable { missing: probe.to_string() });
        }
    }

    let d_del = table.image(&del_b).expect("checked above");
    if let Some(bad) = d_del.support().find(|b| b.lower[0] < 0) {
        return Err(Error::NotADerivation(format!(
            "image of {del_b} has the term {bad} outside the non-negative basis"
        )));
    }
    let f = d_del.map_keys(|b| FunctionTerm::new(b.upper.clone(), b.lower.clone()));
    // Convention ad_G(x) = [G, x], so [h∂, ∂] = −∂(h)·∂ and matching
    // D(∂) = f·∂ requires ∂(h) = −f.
    let h = integrate(cfg, &-&f)?;
    let inner = h.map_keys(|t| BasisElement::new(t.upper.clone(), t.lower.clone(), 1));

    let residual_at = |b: &BasisElement| -> Result<Element, Error> {
        let image = table.image(b).expect("probes checked");
        Ok(image - &cfg.bracket(&inner, &Element::unit(b.clone()))?)
    };
    let c = residual_at(&probe_c)?.coeff(&del_b);
    let s = residual_at(&probe_s)?.coeff(&probe_s) - &c * &cfg.slopes()[0];

    let mut deco = Decomposition::new(inner, c, s);
    for (b, image) in table.entries() {
        let recomposed = deco.apply(cfg, b)?;
        if &recomposed != image {
            deco.residual_report.push(Residual {
                at: b.clone(),
                discrepancy: image - &recomposed,
            });
        }
    }
    Ok(deco)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use num_traits::One;

    fn cfg1() -> AlgebraConfig {
        AlgebraConfig::with_unit_slopes(1)
    }

    #[test]
    fn bplus_membership() {
        assert!(in_bplus(&BasisElement::rank1(0, 0)));
        assert!(in_bplus(&BasisElement::rank1(-5, 3)));
        assert!(!in_bplus(&BasisElement::rank1(2, -1)));
    }

    #[test]
    fn scalar_rule_scales_by_upper_index() {
        let cfg = cfg1();
        let rule = scalar_derivation(Rational::one());
        let b = BasisElement::rank1(3, 2);
        assert_eq!(rule.apply(&cfg, &b).unwrap(), Element::term(b, from_i64(3)));
        assert!(scalar_derivation(Rational::zero())
            .apply(&cfg, &BasisElement::rank1(4, 1))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn scalar_rule_satisfies_derivation_identity_instance() {
        // Degrees add: slope of the image of [(1|0),(2|0)] is 1 + 2.
        let cfg = cfg1();
        let rule = scalar_derivation(Rational::one());
        let table = DerivationTable::tabulate(&cfg, IndexBox::new(3, 2), &rule).unwrap();
        assert!(verify_derivation(&cfg, &table).unwrap().is_empty());
    }

    #[test]
    fn inner_rule_by_del() {
        let cfg = cfg1();
        let rule = inner_derivation(Element::unit(del()));
        let b = BasisElement::rank1(2, 3);
        let mut expected = Element::term(b.clone(), from_i64(2));
        expected.add_term(BasisElement::rank1(2, 2), from_i64(3));
        assert_eq!(rule.apply(&cfg, &b).unwrap(), expected);
        assert!(inner_derivation(Element::zero())
            .apply(&cfg, &b)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn inner_rule_moves_del() {
        let cfg = cfg1();
        let rule = inner_derivation(Element::unit(BasisElement::rank1(1, 1)));
        let mut expected = Element::term(BasisElement::rank1(1, 1), from_i64(-1));
        expected.add_term(BasisElement::rank1(1, 0), from_i64(-1));
        assert_eq!(rule.apply(&cfg, &del()).unwrap(), expected);
    }

    #[test]
    fn integrate_examples() {
        let cfg = cfg1();
        // Constant 1 integrates to x.
        let one = FunctionElement::unit(FunctionTerm::rank1(0, 0));
        assert_eq!(
            integrate(&cfg, &one).unwrap(),
            FunctionElement::unit(FunctionTerm::rank1(0, 1))
        );
        // e^x is its own antiderivative.
        let ex = FunctionElement::unit(FunctionTerm::rank1(1, 0));
        assert_eq!(integrate(&cfg, &ex).unwrap(), ex);
        // e^x·x needs the two-step back-substitution.
        let exx = FunctionElement::unit(FunctionTerm::rank1(1, 1));
        let expected = &exx - &ex;
        assert_eq!(integrate(&cfg, &exx).unwrap(), expected);
    }

    #[test]
    fn integrate_is_right_inverse_here() {
        let cfg = AlgebraConfig::new(vec![ratio(2, 3)]).unwrap();
        let mut f = FunctionElement::term(FunctionTerm::rank1(2, 3), ratio(5, 7));
        f.add_term(FunctionTerm::rank1(-1, 2), from_i64(4));
        f.add_term(FunctionTerm::rank1(0, 2), ratio(-3, 2));
        let g = integrate(&cfg, &f).unwrap();
        let del_el = Element::unit(del());
        assert_eq!(cfg.apply(&del_el, &g).unwrap(), f);
    }

    #[test]
    fn integrate_rejects_bad_input() {
        let cfg = cfg1();
        let neg = FunctionElement::unit(FunctionTerm::rank1(1, -1));
        assert!(matches!(integrate(&cfg, &neg), Err(Error::NegativeLowerIndex(-1))));
        let cfg2 = AlgebraConfig::with_unit_slopes(2);
        assert!(matches!(
            integrate(&cfg2, &FunctionElement::zero()),
            Err(Error::NotRankOne(2))
        ));
    }

    #[test]
    fn verify_flags_perturbed_tables() {
        let cfg = cfg1();
        let rule = inner_derivation(Element::unit(BasisElement::rank1(1, 1)));
        let window = IndexBox::new(2, 2);
        let clean = DerivationTable::tabulate(&cfg, window, &rule).unwrap();
        assert!(verify_derivation(&cfg, &clean).unwrap().is_empty());

        let poke = BasisElement::rank1(0, 1);
        let perturbed = DerivationTable::from_rule(window, |b| {
            let mut img = rule.apply(&cfg, b)?;
            if *b == poke {
                img.add_term(del(), Rational::one());
            }
            Ok(img)
        })
        .unwrap();
        assert!(!verify_derivation(&cfg, &perturbed).unwrap().is_empty());
    }

    #[test]
    fn decompose_recovers_inner_generator() {
        let cfg = cfg1();
        let g = Element::unit(BasisElement::rank1(1, 1));
        let table =
            DerivationTable::tabulate(&cfg, IndexBox::new(3, 3), &inner_derivation(g.clone()))
                .unwrap();
        let deco = decompose(&cfg, &table).unwrap();
        assert!(deco.is_clean());
        assert_eq!(deco.inner, g);
        assert!(deco.del_coeff.is_zero());
        assert!(deco.scalar_slope.is_zero());
    }

    #[test]
    fn decompose_recovers_del_and_scalar_coefficients() {
        let cfg = cfg1();
        let rule = Decomposition::new(Element::zero(), ratio(3, 4), ratio(-2, 5));
        let table = DerivationTable::tabulate(&cfg, IndexBox::new(2, 2), &rule).unwrap();
        let deco = decompose(&cfg, &table).unwrap();
        assert!(deco.is_clean());
        assert!(deco.inner.is_zero());
        assert_eq!(deco.del_coeff, ratio(3, 4));
        assert_eq!(deco.scalar_slope, ratio(-2, 5));
    }

    #[test]
    fn decompose_zero_table() {
        let cfg = cfg1();
        let table = DerivationTable::from_rule(IndexBox::new(1, 1), |_| Ok(Element::zero()))
            .unwrap();
        let deco = decompose(&cfg, &table).unwrap();
        assert!(deco.is_clean());
        assert!(deco.inner.is_zero());
        assert!(deco.del_coeff.is_zero());
        assert!(deco.scalar_slope.is_zero());
    }

    #[test]
    fn decompose_requires_the_probe_keys() {
        let cfg = cfg1();
        let table = DerivationTable::from_rule(IndexBox::new(0, 0), |_| Ok(Element::zero()))
            .unwrap();
        assert!(matches!(decompose(&cfg, &table), Err(Error::IncompleteTable { .. })));
    }

    #[test]
    fn decompose_rejects_images_leaving_the_subalgebra() {
        let cfg = cfg1();
        let table = DerivationTable::from_rule(IndexBox::new(1, 1), |b| {
            Ok(if *b == del() {
                Element::unit(BasisElement::rank1(0, -1))
            } else {
                Element::zero()
            })
        })
        .unwrap();
        assert!(matches!(decompose(&cfg, &table), Err(Error::NotADerivation(_))));
    }
}
