//! Finite linear combinations of words with `Q[h]` coefficients, and the
//! change of basis between the A- and X-alphabets.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed};

use crate::arith::{write_scaled_hbar, HPoly, Rational};
use crate::error::{Error, Result};
use crate::word::{ALetter, AWord, Monomial, Word, XLetter, XWord};

/// A `Q[h]`-linear combination of words. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element<W: Word> {
    terms: BTreeMap<W, HPoly>,
}

pub type AElement = Element<AWord>;
pub type XElement = Element<XWord>;

impl<W: Word> Default for Element<W> {
    fn default() -> Self {
        Element {
            terms: BTreeMap::new(),
        }
    }
}

impl<W: Word> Element<W> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(W::empty())
    }

    pub fn from_word(word: W) -> Self {
        Self::term(HPoly::one(), word)
    }

    pub fn term(coeff: HPoly, word: W) -> Self {
        let mut e = Self::zero();
        e.add_term(word, &coeff);
        e
    }

    pub fn constant(coeff: HPoly) -> Self {
        Self::term(coeff, W::empty())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&W, &HPoly)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (W, HPoly)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, word: &W) -> HPoly {
        self.terms.get(word).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, word: W, coeff: &HPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, coeff.clone());
            }
        }
    }

    /// `self += coeff * other`.
    pub fn add_scaled(&mut self, other: &Self, coeff: &HPoly) {
        if coeff.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(w.clone(), &(c * coeff));
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c);
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), &-c);
        }
    }

    pub fn scale(&self, coeff: &HPoly) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        Element {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * coeff)).collect(),
        }
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&HPoly::constant(c.clone()))
    }

    /// Applies a coefficient-linear map defined on words.
    pub fn map_linear<V: Word>(
        &self,
        mut f: impl FnMut(&W) -> Result<Element<V>>,
    ) -> Result<Element<V>> {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            out.add_scaled(&f(w)?, c);
        }
        Ok(out)
    }

    /// Total weights (`h`-degree plus word degree) of all monomials.
    pub fn weights(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms
            .iter()
            .flat_map(|(w, c)| c.terms().map(move |(d, _)| d + w.degree()))
    }

    pub fn is_homogeneous(&self, weight: usize) -> bool {
        self.weights().all(|d| d == weight)
    }

    /// Checks that every monomial has total weight `weight`.
    pub fn check_homogeneous(&self, weight: usize) -> Result<()> {
        for (w, c) in &self.terms {
            for (d, _) in c.terms() {
                if d + w.degree() != weight {
                    return Err(Error::NotHomogeneous {
                        expected: weight,
                        term: format!("h^{d}*{w}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Canonical `(h-degree, word)` ordering of the monomials with their
    /// rational coefficients.
    pub fn monomial_terms(&self) -> Vec<(usize, &W, &Rational)> {
        let mut out: Vec<_> = self
            .terms
            .iter()
            .flat_map(|(w, c)| c.terms().map(move |(d, r)| (d, w, r)))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
        out
    }
}

impl AElement {
    pub fn letter(letter: ALetter) -> Self {
        Self::from_word(AWord(vec![letter]))
    }

    pub fn from_monomial(m: &Monomial, c: Rational) -> Self {
        Self::term(HPoly::monomial(c, m.hbar_power), m.word.clone())
    }

    pub fn parse(text: &str) -> Result<Self> {
        crate::parse::parse_a_element(text)
    }

    /// Rewrites in the X-alphabet via `xi = y - r`, `z_k = x^(k-1) y`.
    pub fn expand_to_x(&self) -> XElement {
        let mut out = XElement::zero();
        for (w, c) in &self.terms {
            out.add_scaled(&expand_word(w), c);
        }
        out
    }
}

impl XElement {
    pub fn parse(text: &str) -> Result<Self> {
        crate::parse::parse_x_element(text)
    }

    /// Inverse of [`AElement::expand_to_x`] on the subalgebra generated by
    /// `xi` and the `z_k`. Every word must split into blocks `x^(k-1) y` and
    /// `r`; `r` contracts to `z1 - xi`.
    pub fn contract_to_a(&self) -> Result<AElement> {
        let mut out = AElement::zero();
        for (w, c) in &self.terms {
            out.add_scaled(&contract_word(w)?, c);
        }
        Ok(out)
    }
}

fn expand_word(w: &AWord) -> XElement {
    let mut acc = XElement::one();
    for &l in w.letters() {
        let piece = match l {
            ALetter::Xi => {
                let mut e = XElement::from_word(XWord(vec![XLetter::Y]));
                e.add_term(XWord(vec![XLetter::Rho]), &HPoly::from_int(-1));
                e
            }
            ALetter::Z(k) => {
                let mut letters = vec![XLetter::X; k as usize - 1];
                letters.push(XLetter::Y);
                XElement::from_word(XWord(letters))
            }
        };
        acc = &acc * &piece;
    }
    acc
}

fn contract_word(w: &XWord) -> Result<AElement> {
    let not_in_h1 = || Error::NotInH1 {
        word: w.to_string(),
    };
    let mut acc = AElement::one();
    let mut run = 0u32;
    for &l in w.letters() {
        match l {
            XLetter::X => run += 1,
            XLetter::Y => {
                acc = acc.concat_word(&AWord(vec![ALetter::Z(run + 1)]));
                run = 0;
            }
            XLetter::Rho => {
                if run > 0 {
                    return Err(not_in_h1());
                }
                let mut rho = AElement::letter(ALetter::Z(1));
                rho.add_term(AWord(vec![ALetter::Xi]), &HPoly::from_int(-1));
                acc = &acc * &rho;
            }
        }
    }
    if run > 0 {
        return Err(not_in_h1());
    }
    Ok(acc)
}

impl<W: Word> Element<W> {
    /// Right multiplication by a single word.
    pub fn concat_word(&self, word: &W) -> Self {
        Element {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.concat(word), c.clone()))
                .collect(),
        }
    }

    /// Left multiplication by a single word.
    pub fn prepend_word(&self, word: &W) -> Self {
        Element {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (word.concat(w), c.clone()))
                .collect(),
        }
    }
}

impl<W: Word> Add for &Element<W> {
    type Output = Element<W>;
    fn add(self, other: &Element<W>) -> Element<W> {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }
}

impl<W: Word> Sub for &Element<W> {
    type Output = Element<W>;
    fn sub(self, other: &Element<W>) -> Element<W> {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }
}

impl<W: Word> Neg for &Element<W> {
    type Output = Element<W>;
    fn neg(self) -> Element<W> {
        Element {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

/// Concatenation product of the free algebra.
impl<W: Word> Mul for &Element<W> {
    type Output = Element<W>;
    fn mul(self, other: &Element<W>) -> Element<W> {
        let mut out = Element::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.concat(b), &(ca * cb));
            }
        }
        out
    }
}

impl<W: Word> fmt::Display for Element<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.monomial_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (deg, word, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if word.is_empty() {
                write_scaled_hbar(f, &mag, deg)?;
            } else if deg == 0 && mag.is_one() {
                write!(f, "{word}")?;
            } else {
                write_scaled_hbar(f, &mag, deg)?;
                write!(f, "*{word}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(text: &str) -> AElement {
        AElement::parse(text).unwrap()
    }

    fn x(text: &str) -> XElement {
        XElement::parse(text).unwrap()
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(a("z2").expand_to_x(), x("x y"));
        assert_eq!(a("xi").expand_to_x(), x("y - r"));
        assert_eq!(a("xi z1").expand_to_x(), x("y y - r y"));
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(x("x y").contract_to_a().unwrap(), a("z2"));
        assert_eq!(x("r").contract_to_a().unwrap(), a("z1 - xi"));
        assert_eq!(x("y r").contract_to_a().unwrap(), a("z1 z1 - z1 xi"));
        assert!(matches!(x("x").contract_to_a(), Err(Error::NotInH1 { .. })));
        assert!(matches!(x("x r y").contract_to_a(), Err(Error::NotInH1 { .. })));
        assert!(matches!(x("y x").contract_to_a(), Err(Error::NotInH1 { .. })));
    }

    #[test]
    fn printing_is_canonical() {
        assert_eq!(a("h*xi + z2 + 2*xi xi - 2*h*xi").to_string(), "2*xi xi + z2 - h*xi");
        assert_eq!(a("z1 z2 - z1 z2").to_string(), "0");
        assert_eq!(a("3/4*h^2 + z3").to_string(), "z3 + 3/4*h^2");
        assert_eq!(x("r y x").to_string(), "r y x");
    }

    #[test]
    fn homogeneity() {
        assert!(a("z2 - h*xi + xi z1").is_homogeneous(2));
        assert!(matches!(
            a("z2 + xi").check_homogeneous(2),
            Err(Error::NotHomogeneous { expected: 2, .. })
        ));
    }

    pub(crate) fn arb_aword(max_len: usize, max_k: u32) -> impl Strategy<Value = AWord> {
        proptest::collection::vec(
            prop_oneof![Just(ALetter::Xi), (1..=max_k).prop_map(ALetter::Z)],
            0..=max_len,
        )
        .prop_map(AWord)
    }

    fn arb_aelement() -> impl Strategy<Value = AElement> {
        proptest::collection::vec((arb_aword(4, 4), -3i64..4, 0usize..3), 0..5).prop_map(|terms| {
            let mut e = AElement::zero();
            for (w, c, d) in terms {
                e.add_term(w, &HPoly::monomial(crate::arith::int(c), d));
            }
            e
        })
    }

    fn arb_block_xelement() -> impl Strategy<Value = XElement> {
        let block = prop_oneof![
            Just(vec![XLetter::Rho]),
            (0usize..3).prop_map(|n| {
                let mut v = vec![XLetter::X; n];
                v.push(XLetter::Y);
                v
            })
        ];
        let word = proptest::collection::vec(block, 0..4).prop_map(|bs| XWord(bs.concat()));
        proptest::collection::vec((word, -3i64..4), 0..5).prop_map(|terms| {
            let mut e = XElement::zero();
            for (w, c) in terms {
                e.add_term(w, &HPoly::from_int(c));
            }
            e
        })
    }

    proptest! {
        #[test]
        fn contract_inverts_expand(e in arb_aelement()) {
            let back = e.expand_to_x().contract_to_a().unwrap();
            prop_assert_eq!(back, e);
        }

        #[test]
        fn expand_inverts_contract(e in arb_block_xelement()) {
            let back = e.contract_to_a().unwrap().expand_to_x();
            prop_assert_eq!(back, e);
        }

        #[test]
        fn expansion_preserves_weights(e in arb_aelement()) {
            let mut before: Vec<_> = e.weights().collect();
            before.sort();
            before.dedup();
            let mut after: Vec<_> = e.expand_to_x().weights().collect();
            after.sort();
            after.dedup();
            // cancellation can only remove weights, never create new ones
            prop_assert!(after.iter().all(|w| before.contains(w)));
            for (w, c) in e.terms() {
                let single = AElement::term(c.clone(), w.clone());
                prop_assert!(single.expand_to_x().weights().all(|d| single.weights().any(|s| s == d)));
            }
        }

        #[test]
        fn printing_round_trips(e in arb_aelement()) {
            prop_assert_eq!(AElement::parse(&e.to_string()).unwrap(), e);
        }
    }
}
