//! Textual grammar for elements and derivation tables.
//!
//! ```text
//! element  := [sign] term (sign term)*
//! term     := [rational '*']? '(' ints '|' ints ')' ['_' int]
//! rational := ['-']? digits ['/' digits]
//! ints     := int (',' int)*
//! ```
//!
//! Whitespace is insignificant. Basis terms carry the `_k` direction
//! suffix; function terms omit it. Parsing canonicalizes: coefficients of
//! repeated terms combine and zero terms drop, so parse ∘ print is the
//! identity on canonical forms. Derivation table files hold one
//! `basis -> element` entry per line, with `#` starting a comment.

use std::fmt;

use num_traits::One;

use crate::algebra::{BasisElement, Element};
use crate::derivations::DerivationTable;
use crate::error::Error;
use crate::operator::{FunctionElement, FunctionTerm};
use crate::rational::Rational;

/// Syntax error with 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Self { src: src.as_bytes(), pos: 0, line, col: 1 }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.src.get(self.pos) {
            if c == b' ' || c == b'\t' {
                self.advance();
            } else {
                break;
            }
        }
    }

    fn advance(&mut self) {
        self.pos += 1;
        self.col += 1;
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.advance();
                Ok(())
            }
            Some(got) => Err(self.error(format!(
                "expected '{}', found '{}'",
                c as char, got as char
            ))),
            None => Err(self.error(format!("expected '{}', found end of input", c as char))),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn digits(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.advance();
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("digits are ascii")
            .parse()
            .map_err(|_| self.error("integer literal out of range"))
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let negative = self.eat(b'-');
        let v = self.digits()?;
        Ok(if negative { -v } else { v })
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let num = self.int()?;
        let den = if self.eat(b'/') {
            let d = self.digits()?;
            if d == 0 {
                return Err(self.error("denominator must be nonzero"));
            }
            d
        } else {
            1
        };
        Ok(crate::rational::ratio(num, den))
    }

    fn int_list(&mut self, n: usize) -> Result<Vec<i64>, ParseError> {
        let mut vals = vec![self.int()?];
        while self.eat(b',') {
            vals.push(self.int()?);
        }
        if vals.len() != n {
            return Err(self.error(format!(
                "expected {n} comma-separated indices, found {}",
                vals.len()
            )));
        }
        Ok(vals)
    }

    /// `(' ints '|' ints ')` with an optional `_k` suffix.
    fn index_pair(
        &mut self,
        n: usize,
        with_dir: bool,
    ) -> Result<(Vec<i64>, Vec<i64>, Option<usize>), ParseError> {
        self.expect(b'(')?;
        let upper = self.int_list(n)?;
        self.expect(b'|')?;
        let lower = self.int_list(n)?;
        self.expect(b')')?;
        if !with_dir {
            return Ok((upper, lower, None));
        }
        self.expect(b'_')?;
        let dir = self.int()?;
        if dir < 1 || dir as usize > n {
            return Err(self.error(format!("direction {dir} out of range 1..={n}")));
        }
        Ok((upper, lower, Some(dir as usize)))
    }

    /// Optional `rational '*'` coefficient, defaulting to one.
    fn coefficient(&mut self) -> Result<Rational, ParseError> {
        match self.peek() {
            Some(c) if c == b'-' || c.is_ascii_digit() => {
                let r = self.rational()?;
                self.expect(b'*')?;
                Ok(r)
            }
            _ => Ok(Rational::one()),
        }
    }

    fn sign(&mut self) -> Result<Rational, ParseError> {
        match self.peek() {
            Some(b'+') => {
                self.advance();
                Ok(Rational::one())
            }
            Some(b'-') => {
                self.advance();
                Ok(-Rational::one())
            }
            Some(c) => Err(self.error(format!("expected '+' or '-', found '{}'", c as char))),
            None => Err(self.error("expected '+' or '-', found end of input")),
        }
    }
}

fn parse_combination<K: Ord + Clone>(
    sc: &mut Scanner<'_>,
    n: usize,
    with_dir: bool,
    build: impl Fn(Vec<i64>, Vec<i64>, Option<usize>) -> K,
) -> Result<crate::linear::Combination<K>, ParseError> {
    let mut out = crate::linear::Combination::zero();
    // leading sign is accepted so that printed elements re-parse
    let mut sign = if matches!(sc.peek(), Some(b'+') | Some(b'-')) {
        sc.sign()?
    } else {
        Rational::one()
    };
    loop {
        let coeff = sc.coefficient()?;
        let (upper, lower, dir) = sc.index_pair(n, with_dir)?;
        out.add_term(build(upper, lower, dir), sign * coeff);
        if sc.at_end() {
            return Ok(out);
        }
        sign = sc.sign()?;
    }
}

/// Parses an element over rank `n`; result is canonical. A bare `0`
/// denotes the zero element, matching how it prints.
pub fn parse_element(text: &str, n: usize) -> Result<Element, ParseError> {
    if text.trim() == "0" {
        return Ok(Element::zero());
    }
    let mut sc = Scanner::new(text, 1);
    parse_combination(&mut sc, n, true, |upper, lower, dir| {
        BasisElement::new(upper, lower, dir.expect("directions are parsed"))
    })
}

/// Parses a function element (no direction suffixes) over rank `n`.
pub fn parse_function_element(text: &str, n: usize) -> Result<FunctionElement, ParseError> {
    if text.trim() == "0" {
        return Ok(FunctionElement::zero());
    }
    let mut sc = Scanner::new(text, 1);
    parse_combination(&mut sc, n, false, |upper, lower, _| FunctionTerm::new(upper, lower))
}

/// Parses a single bare basis element such as `(1,0|2,-1)_1`.
pub fn parse_basis_element(text: &str, n: usize) -> Result<BasisElement, ParseError> {
    let mut sc = Scanner::new(text, 1);
    let (upper, lower, dir) = sc.index_pair(n, true)?;
    if !sc.at_end() {
        return Err(sc.error("trailing input after basis element"));
    }
    Ok(BasisElement::new(upper, lower, dir.expect("direction parsed")))
}

/// Parses a derivation table file: one `basis -> element` entry per
/// line over rank one, `#` comments and blank lines ignored.
pub fn parse_derivation_table(text: &str) -> Result<DerivationTable, Error> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(hash) => &raw[..hash],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let arrow = line.find("->").ok_or_else(|| ParseError {
            line: line_no,
            col: line.len(),
            message: "expected '->' between basis element and image".into(),
        })?;
        let mut key_sc = Scanner::new(&line[..arrow], line_no);
        let (upper, lower, dir) = key_sc.index_pair(1, true)?;
        if !key_sc.at_end() {
            return Err(key_sc.error("trailing input before '->'").into());
        }
        let key = BasisElement::new(upper, lower, dir.expect("direction parsed"));
        let image_src = &line[arrow + 2..];
        let image = if image_src.trim() == "0" {
            Element::zero()
        } else {
            let mut img_sc = Scanner::new(image_src, line_no);
            parse_combination(&mut img_sc, 1, true, |u, l, d| {
                BasisElement::new(u, l, d.expect("direction parsed"))
            })?
        };
        entries.push((key, image));
    }
    DerivationTable::from_entries(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_i64, ratio};

    #[test]
    fn parses_single_basis_term() {
        let e = parse_element("(0,0|0,0)_1", 2).unwrap();
        assert_eq!(e, Element::unit(BasisElement::new(vec![0, 0], vec![0, 0], 1)));
    }

    #[test]
    fn parses_coefficients_and_signs() {
        let e = parse_element("3/2*(1,0|2,-1)_1 - (0,0|0,0)_2", 2).unwrap();
        let mut expected =
            Element::term(BasisElement::new(vec![1, 0], vec![2, -1], 1), ratio(3, 2));
        expected.add_term(BasisElement::new(vec![0, 0], vec![0, 0], 2), from_i64(-1));
        assert_eq!(e, expected);
    }

    #[test]
    fn combines_and_cancels() {
        let e = parse_element("(1|0)_1 + (1|0)_1 - 2*(1|0)_1", 1).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse_element(" - 3 / 2 * ( 1 | -2 ) _ 1 ", 1).unwrap();
        let b = parse_element("-3/2*(1|-2)_1", 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reports_positions() {
        let err = parse_element("(1|0)_1 + (1|0", 1).unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.col > 10);

        let err = parse_element("(1,2|0)_1", 1).unwrap_err();
        assert!(err.message.contains("expected 1"));

        let err = parse_element("(1|0)_2", 1).unwrap_err();
        assert!(err.message.contains("out of range"));
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(parse_element("1/0*(1|0)_1", 1).is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        let mut e = Element::term(BasisElement::new(vec![1, -2], vec![0, 3], 2), ratio(-7, 3));
        e.add_term(BasisElement::new(vec![0, 0], vec![1, 1], 1), from_i64(1));
        e.add_term(BasisElement::new(vec![0, 0], vec![0, 0], 1), from_i64(-1));
        let printed = e.to_string();
        assert_eq!(parse_element(&printed, 2).unwrap(), e);
        assert!(parse_element("0", 1).unwrap().is_zero());
        assert!(parse_element(&Element::zero().to_string(), 3).unwrap().is_zero());
    }

    #[test]
    fn function_elements_have_no_direction() {
        let f = parse_function_element("2*(1|0) - (0|2)", 1).unwrap();
        let mut expected = FunctionElement::term(FunctionTerm::rank1(1, 0), from_i64(2));
        expected.add_term(FunctionTerm::rank1(0, 2), from_i64(-1));
        assert_eq!(f, expected);
        assert!(parse_function_element("(1|0)_1", 1).is_err());
    }

    #[test]
    fn derivation_table_file() {
        let table = parse_derivation_table(
            "# window 1,1\n\
             (0|0)_1 -> (1|1)_1 - (1|0)_1\n\
             (0|1)_1 -> 2*(0|1)_1  # inline comment\n\
             \n\
             (1|0)_1 -> (1|0)_1\n",
        )
        .unwrap();
        assert_eq!(table.len(), 3);
        let img = table.image(&BasisElement::rank1(0, 1)).unwrap();
        assert_eq!(*img, Element::term(BasisElement::rank1(0, 1), from_i64(2)));
    }

    #[test]
    fn derivation_table_rejects_duplicates_and_negative_lower() {
        assert!(parse_derivation_table("(0|0)_1 -> 0*(0|0)_1\n(0|0)_1 -> (1|0)_1").is_err());
        assert!(parse_derivation_table("(0|-1)_1 -> (1|0)_1").is_err());
    }
}
