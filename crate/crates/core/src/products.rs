//! The harmonic, integral shuffle and star products, and the linear maps
//! relating them.
//!
//! All three products are defined by recursions on the first letters of
//! their arguments. Each product type carries a memo table keyed on pairs of
//! words (or star pieces); reuse one instance across many products of the
//! same size to share subproblems.

use std::collections::{BTreeMap, HashMap};

use crate::arith::{int, HPoly, Rational};
use crate::element::{AElement, XElement};
use crate::error::{Error, Result};
use crate::word::{ALetter, AWord, Word, XLetter, XWord};

fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return int(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    Rational::from_integer(acc.into())
}

/// `c * (sign h)^power` where `sign` is `-1` when `negate`.
fn hbar_power(c: Rational, power: u32, negate: bool) -> HPoly {
    let c = if negate && power % 2 == 1 { -c } else { c };
    HPoly::monomial(c, power as usize)
}

fn single(letter: ALetter) -> AWord {
    AWord(vec![letter])
}

/// The commutative product on letters: `z_k o z_l = z_{k+l} + h z_{k+l-1}`,
/// `xi o z_k = z_{k+1}`, `xi o xi = z_2 - h xi`.
pub fn circle(a: ALetter, b: ALetter) -> AElement {
    use ALetter::*;
    match (a, b) {
        (Z(k), Z(l)) => {
            let mut e = AElement::letter(Z(k + l));
            e.add_term(single(Z(k + l - 1)), &HPoly::hbar());
            e
        }
        (Xi, Z(k)) | (Z(k), Xi) => AElement::letter(Z(k + 1)),
        (Xi, Xi) => {
            let mut e = AElement::letter(Z(2));
            e.add_term(single(Xi), &-&HPoly::hbar());
            e
        }
    }
}

/// The quasi-shuffle (harmonic) product `*`.
#[derive(Default)]
pub struct Harmonic {
    cache: HashMap<(AWord, AWord), AElement>,
}

impl Harmonic {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn product(&mut self, a: &AElement, b: &AElement) -> AElement {
        let mut out = AElement::zero();
        for (u, cu) in a.terms() {
            for (v, cv) in b.terms() {
                let p = self.words(u, v);
                out.add_scaled(&p, &(cu * cv));
            }
        }
        out
    }

    pub fn words(&mut self, u: &AWord, v: &AWord) -> AElement {
        if u.is_empty() {
            return AElement::from_word(v.clone());
        }
        if v.is_empty() {
            return AElement::from_word(u.clone());
        }
        let key = (u.clone(), v.clone());
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let (a, rest_u) = (u.letters()[0], u.tail());
        let (b, rest_v) = (v.letters()[0], v.tail());
        let mut out = self.words(&rest_u, v).prepend_word(&single(a));
        out.add_assign(&self.words(u, &rest_v).prepend_word(&single(b)));
        let tails = self.words(&rest_u, &rest_v);
        for (l, c) in circle(a, b).terms() {
            out.add_scaled(&tails.prepend_word(l), c);
        }
        self.cache.insert(key, out.clone());
        out
    }
}

pub fn harmonic(a: &AElement, b: &AElement) -> AElement {
    Harmonic::new().product(a, b)
}

/// The correction term `alpha(u, v)` of the shuffle recursion.
pub fn alpha(u: XLetter, v: XLetter) -> XElement {
    use XLetter::*;
    let word = |ls: Vec<XLetter>| XWord(ls);
    match (u, v) {
        (X, X) => XElement::term(HPoly::hbar(), word(vec![X])),
        (X, Y) | (Y, X) => XElement::zero(),
        (Y, Y) => XElement::term(HPoly::from_int(-1), word(vec![Y, Rho])),
        (w, Rho) | (Rho, w) => XElement::term(HPoly::from_int(-1), word(vec![w, Rho])),
    }
}

/// The integral shuffle product, defined on X-words and transported to the
/// A-alphabet by expanding and contracting.
#[derive(Default)]
pub struct Shuffle {
    cache: HashMap<(XWord, XWord), XElement>,
}

impl Shuffle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn product_x(&mut self, a: &XElement, b: &XElement) -> XElement {
        let mut out = XElement::zero();
        for (u, cu) in a.terms() {
            for (v, cv) in b.terms() {
                let p = self.words(u, v);
                out.add_scaled(&p, &(cu * cv));
            }
        }
        out
    }

    /// Fails with [`Error::NotInH1`] only if an input lies outside the
    /// subalgebra generated by the A-letters, which cannot happen for
    /// A-elements; the result is contracted back to the A-alphabet.
    pub fn product(&mut self, a: &AElement, b: &AElement) -> Result<AElement> {
        self.product_x(&a.expand_to_x(), &b.expand_to_x())
            .contract_to_a()
    }

    pub fn words(&mut self, u: &XWord, v: &XWord) -> XElement {
        if u.is_empty() {
            return XElement::from_word(v.clone());
        }
        if v.is_empty() {
            return XElement::from_word(u.clone());
        }
        let key = (u.clone(), v.clone());
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let (a, rest_u) = (u.letters()[0], XWord(u.letters()[1..].to_vec()));
        let (b, rest_v) = (v.letters()[0], XWord(v.letters()[1..].to_vec()));
        let mut out = self.words(&rest_u, v).prepend_word(&XWord(vec![a]));
        out.add_assign(&self.words(u, &rest_v).prepend_word(&XWord(vec![b])));
        let corr = alpha(a, b);
        if !corr.is_zero() {
            let tails = self.words(&rest_u, &rest_v);
            out.add_assign(&(&corr * &tails));
        }
        self.cache.insert(key, out.clone());
        out
    }
}

pub fn shuffle_x(a: &XElement, b: &XElement) -> XElement {
    Shuffle::new().product_x(a, b)
}

pub fn shuffle(a: &AElement, b: &AElement) -> Result<AElement> {
    Shuffle::new().product(a, b)
}

/// `Delta_0`: `z_2 w -> xi w`, `z_k w -> z_{k-1} w` (`k >= 3`), `1 -> 0`.
pub fn delta0(e: &AElement) -> Result<AElement> {
    e.map_linear(|w| match w.first() {
        None => Ok(AElement::zero()),
        Some(ALetter::Z(2)) => Ok(AElement::from_word(w.tail().prepend(ALetter::Xi))),
        Some(ALetter::Z(k)) if k >= 3 => Ok(AElement::from_word(w.tail().prepend(ALetter::Z(k - 1)))),
        Some(_) => Err(Error::domain("delta0", w)),
    })
}

fn delta1_letter(k: u32) -> AElement {
    let mut e = AElement::zero();
    for a in 2..=k {
        e.add_term(single(ALetter::Z(a)), &hbar_power(binomial(k - 1, a - 1), k - a, true));
    }
    e.add_term(single(ALetter::Xi), &hbar_power(int(1), k - 1, true));
    e
}

/// `Delta_1(z_k w) = (sum_a C(k-1, a-1) (-h)^(k-a) z_a + (-h)^(k-1) xi) w`, `Delta_1(1) = 1`.
pub fn delta1(e: &AElement) -> Result<AElement> {
    e.map_linear(|w| match w.first() {
        None => Ok(AElement::one()),
        Some(ALetter::Z(k)) => Ok(delta1_letter(k).concat_word(&w.tail())),
        Some(ALetter::Xi) => Err(Error::domain("delta1", w)),
    })
}

/// `I_0`: `xi w -> z_2 w`, `z_k w -> z_{k+1} w` (`k >= 2`).
pub fn i0(e: &AElement) -> Result<AElement> {
    e.map_linear(|w| match w.first() {
        Some(ALetter::Xi) => Ok(AElement::from_word(w.tail().prepend(ALetter::Z(2)))),
        Some(ALetter::Z(k)) if k >= 2 => Ok(AElement::from_word(w.tail().prepend(ALetter::Z(k + 1)))),
        _ => Err(Error::domain("i0", w)),
    })
}

/// `I_1`: `1 -> 1`, `xi w -> z_1 w`, `z_k w -> (sum_a C(k-1, a-1) h^(k-a) z_a) w`.
pub fn i1(e: &AElement) -> Result<AElement> {
    e.map_linear(|w| match w.first() {
        None => Ok(AElement::one()),
        Some(ALetter::Xi) => Ok(AElement::from_word(w.tail().prepend(ALetter::Z(1)))),
        Some(ALetter::Z(k)) if k >= 2 => {
            let mut head = AElement::zero();
            for a in 1..=k {
                head.add_term(single(ALetter::Z(a)), &hbar_power(binomial(k - 1, a - 1), k - a, false));
            }
            Ok(head.concat_word(&w.tail()))
        }
        Some(_) => Err(Error::domain("i1", w)),
    })
}

fn e_letter(k: u32, negate: bool) -> AElement {
    let mut e = AElement::zero();
    for a in 2..=k {
        e.add_term(single(ALetter::Z(a)), &hbar_power(binomial(k - 2, a - 2), k - a, negate));
    }
    e
}

fn e_generic(e: &AElement, negate: bool, name: &'static str) -> Result<AElement> {
    e.map_linear(|w| match w.first() {
        None | Some(ALetter::Xi) => Ok(AElement::from_word(w.clone())),
        Some(ALetter::Z(k)) if k >= 2 => Ok(e_letter(k, negate).concat_word(&w.tail())),
        Some(_) => Err(Error::domain(name, w)),
    })
}

/// The isomorphism `e` with `L_w(q) = Z_q(e(w))`.
pub fn e_map(e: &AElement) -> Result<AElement> {
    e_generic(e, false, "e")
}

pub fn e_inv(e: &AElement) -> Result<AElement> {
    e_generic(e, true, "e_inv")
}

/// `phi_k = sum_{a=2}^k (-h)^(k-a) z_a + (-h)^(k-1) xi`.
pub fn phi(k: u32) -> AElement {
    assert!(k >= 1, "phi_k needs k >= 1");
    let mut e = AElement::zero();
    for a in 2..=k {
        e.add_term(single(ALetter::Z(a)), &hbar_power(int(1), k - a, true));
    }
    e.add_term(single(ALetter::Xi), &hbar_power(int(1), k - 1, true));
    e
}

/// `rho = z_1 - xi` in the A-alphabet.
pub fn rho() -> AElement {
    let mut e = AElement::letter(ALetter::Z(1));
    e.add_term(single(ALetter::Xi), &HPoly::from_int(-1));
    e
}

/// A summand of the decomposition of the convergent module into
/// `Hge2` and the pieces `xi rho^r Hge1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Piece {
    Unit,
    /// A word starting with `z_k`, `k >= 2`.
    Hge2(AWord),
    /// `xi rho^r tail` with `tail` empty or starting with some `z_k`.
    XiRho(usize, AWord),
}

/// Writes an A-word `w` as `sum_r rho^r h_r` with each `h_r` in `Hge1`.
fn rho_expansion(w: &AWord) -> Vec<(usize, AWord, i64)> {
    match w.first() {
        None | Some(ALetter::Z(_)) => vec![(0, w.clone(), 1)],
        Some(ALetter::Xi) => {
            // xi v = z1 v - rho v
            let tail = w.tail();
            let mut out = vec![(0, tail.prepend(ALetter::Z(1)), 1)];
            out.extend(rho_expansion(&tail).into_iter().map(|(r, h, s)| (r + 1, h, -s)));
            out
        }
    }
}

/// Decomposes an element of the convergent module into star pieces.
pub fn decompose(e: &AElement) -> Result<BTreeMap<Piece, HPoly>> {
    let mut out: BTreeMap<Piece, HPoly> = BTreeMap::new();
    let mut push = |p: Piece, c: HPoly| {
        let slot = out.entry(p.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            out.remove(&p);
        }
    };
    for (w, c) in e.terms() {
        match w.first() {
            None => push(Piece::Unit, c.clone()),
            Some(ALetter::Z(k)) if k >= 2 => push(Piece::Hge2(w.clone()), c.clone()),
            Some(ALetter::Xi) => {
                for (r, h, s) in rho_expansion(&w.tail()) {
                    push(Piece::XiRho(r, h), c.scale(&int(s)));
                }
            }
            Some(_) => return Err(Error::domain("star", w)),
        }
    }
    Ok(out)
}

/// The product `star`, transported from the shuffle product through `e`.
#[derive(Default)]
pub struct Star {
    cache: HashMap<(Piece, Piece), AElement>,
    prefixes: Vec<AElement>,
}

impl Star {
    pub fn new() -> Self {
        Self::default()
    }

    /// `xi rho^r` as an A-element.
    fn prefix(&mut self, r: usize) -> AElement {
        if self.prefixes.is_empty() {
            self.prefixes.push(AElement::letter(ALetter::Xi));
        }
        while self.prefixes.len() <= r {
            let next = &self.prefixes[self.prefixes.len() - 1] * &rho();
            self.prefixes.push(next);
        }
        self.prefixes[r].clone()
    }

    fn piece_element(&mut self, p: &Piece) -> AElement {
        match p {
            Piece::Unit => AElement::one(),
            Piece::Hge2(w) => AElement::from_word(w.clone()),
            Piece::XiRho(r, h) => self.prefix(*r).concat_word(h),
        }
    }

    pub fn product(&mut self, a: &AElement, b: &AElement) -> Result<AElement> {
        let da = decompose(a)?;
        let db = decompose(b)?;
        let mut out = AElement::zero();
        for (p, cp) in &da {
            for (q, cq) in &db {
                let prod = self.pieces(p, q)?;
                out.add_scaled(&prod, &(cp * cq));
            }
        }
        Ok(out)
    }

    fn pieces(&mut self, p: &Piece, q: &Piece) -> Result<AElement> {
        match (p, q) {
            (Piece::Unit, _) => return Ok(self.piece_element(q)),
            (_, Piece::Unit) => return Ok(self.piece_element(p)),
            _ => {}
        }
        let key = (p.clone(), q.clone());
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        let out = match (p, q) {
            (Piece::Hge2(u), Piece::Hge2(v)) => {
                let u = AElement::from_word(u.clone());
                let v = AElement::from_word(v.clone());
                let du = delta0(&u)?;
                let dv = delta0(&v)?;
                let mut inner = self.product(&du, &v)?;
                inner.add_assign(&self.product(&u, &dv)?);
                inner.sub_assign(&self.product(&du, &dv)?.scale(&HPoly::hbar()));
                i0(&inner)?
            }
            (Piece::Hge2(u), Piece::XiRho(r, t)) | (Piece::XiRho(r, t), Piece::Hge2(u)) => {
                self.mixed(u, *r, t)?
            }
            (Piece::XiRho(r, t), Piece::XiRho(s, u)) => {
                let pe = self.piece_element(p);
                let qe = self.piece_element(q);
                let dt = delta1(&AElement::from_word(t.clone()))?;
                let du = delta1(&AElement::from_word(u.clone()))?;
                let first = i1(&self.product(&dt, &qe)?)?;
                let second = i1(&self.product(&pe, &du)?)?;
                let third = i1(&self.product(&dt, &du)?)?;
                let mut out = &self.prefix(*r) * &first;
                out.add_assign(&(&self.prefix(*s) * &second));
                out.sub_assign(&(&self.prefix(r + s + 1) * &third));
                out
            }
            _ => unreachable!("unit handled above"),
        };
        self.cache.insert(key, out.clone());
        Ok(out)
    }

    /// `u star xi rho^r t` for `u` in `Hge2`.
    fn mixed(&mut self, u: &AWord, r: usize, t: &AWord) -> Result<AElement> {
        let u = AElement::from_word(u.clone());
        let du = delta0(&u)?;
        let other = self.prefix(r).concat_word(t);
        let mut out = i0(&self.product(&du, &other)?)?;
        let lowered = &u - &du.scale(&HPoly::hbar());
        let dt = delta1(&AElement::from_word(t.clone()))?;
        let tail = i1(&self.product(&lowered, &dt)?)?;
        out.add_assign(&(&self.prefix(r) * &tail));
        Ok(out)
    }
}

pub fn star(a: &AElement, b: &AElement) -> Result<AElement> {
    Star::new().product(a, b)
}
