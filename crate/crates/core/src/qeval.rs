//! Evaluation of the q-series `Z_q`, the finite sums `F_w(N)` and the
//! q-polylogarithms `L_w(t)`.
//!
//! Letters act by
//!
//! ```text
//! I_xi(n) = q^n / [n],   I_{z_k}(n) = q^((k-1) n) / [n]^k,   [n] = (1 - q^n) / (1 - q)
//! ```
//!
//! and `h` acts as multiplication by `1 - q`. `F_w(N)` is computed by the
//! first-order recursion `F_{uw}(N+1) = F_{uw}(N) + I_u(N) F_w(N)`, one table
//! per distinct suffix, so a word of depth `r` costs `O(r N)`.
//!
//! Truncation bounds are certified for real `q` in `(0, 1)`; they rest on
//! `[n] >= 1`, `q^n / [n] <= q^n` and `sum_{m<n} 1/[m] <= (1-q)(n-1) + q/(1-q)`.

use std::collections::HashMap;
use std::rc::Rc;

use crate::arith::{HPoly, Rational, Scalar};
use crate::element::AElement;
use crate::error::{Error, Result};
use crate::products::{decompose, delta0, delta1, Piece};
use crate::space::Space;
use crate::word::{ALetter, AWord};

/// Largest truncation the automatic refinement will go to.
pub const MAX_TRUNCATION: usize = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Float,
    Exact,
}

#[derive(Clone, Debug)]
pub struct QContext<T: Scalar> {
    pub q: T,
    /// Outer summation bound `N`: terms with `n_1 <= N` are summed.
    pub truncation: usize,
    pub tolerance: f64,
}

impl<T: Scalar> QContext<T> {
    pub fn new(q: T, truncation: usize, tolerance: f64) -> Result<Self> {
        let m = q.magnitude();
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::InvalidParameter(format!("need 0 < |q| < 1, got {q:?}")));
        }
        if truncation == 0 {
            return Err(Error::InvalidParameter("truncation must be positive".into()));
        }
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        Ok(QContext {
            q,
            truncation,
            tolerance,
        })
    }

    pub fn mode(&self) -> Mode {
        if T::EXACT {
            Mode::Exact
        } else {
            Mode::Float
        }
    }

    /// `h` evaluated at `1 - q`.
    pub fn hbar(&self) -> T {
        T::one() - self.q.clone()
    }

    fn real_q(&self) -> Option<f64> {
        self.q.as_real().filter(|q| *q > 0.0 && *q < 1.0)
    }
}

impl QContext<f64> {
    /// `q = 1/2`, `N = 300`, tolerance `1e-10`.
    pub fn standard() -> Self {
        QContext {
            q: 0.5,
            truncation: 300,
            tolerance: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult<T> {
    pub value: T,
    /// Upper bound on the neglected part of the series.
    pub tail_bound: f64,
    /// Whether `tail_bound` is rigorous (real `q` in `(0, 1)`).
    pub certified: bool,
    pub truncation: usize,
}

/// Letters that `I_u(n)` is defined for, including `rho = z1 - xi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ILetter {
    Xi,
    Z(u32),
    Rho,
}

impl From<ALetter> for ILetter {
    fn from(l: ALetter) -> Self {
        match l {
            ALetter::Xi => ILetter::Xi,
            ALetter::Z(k) => ILetter::Z(k),
        }
    }
}

/// `[n] = 1 + q + ... + q^(n-1)`.
pub fn q_integer<T: Scalar>(n: usize, q: &T) -> T {
    let mut acc = T::zero();
    let mut p = T::one();
    for _ in 0..n {
        acc = acc + p.clone();
        p = p * q.clone();
    }
    acc
}

pub fn i_letter<T: Scalar>(u: ILetter, n: usize, q: &T) -> T {
    assert!(n >= 1, "I_u(n) needs n >= 1");
    let qn = q.powi(n);
    let qint = q_integer(n, q);
    match u {
        ILetter::Xi => qn / qint,
        ILetter::Z(k) => qn.powi(k as usize - 1) / qint.powi(k as usize),
        ILetter::Rho => T::one() - q.clone(),
    }
}

/// Precomputed powers and q-integers with memoised `F` tables.
pub struct Evaluator<T: Scalar> {
    hbar: T,
    truncation: usize,
    qpow: Vec<T>,
    qint: Vec<T>,
    tables: HashMap<AWord, Rc<Vec<T>>>,
}

impl<T: Scalar> Evaluator<T> {
    pub fn new(q: T, truncation: usize) -> Self {
        let mut qpow = Vec::with_capacity(truncation + 2);
        let mut qint = Vec::with_capacity(truncation + 2);
        qpow.push(T::one());
        qint.push(T::zero());
        for n in 1..=truncation + 1 {
            qpow.push(qpow[n - 1].clone() * q.clone());
            qint.push(qint[n - 1].clone() + qpow[n - 1].clone());
        }
        Evaluator {
            hbar: T::one() - q,
            truncation,
            qpow,
            qint,
            tables: HashMap::new(),
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn i_value(&self, l: ALetter, n: usize) -> T {
        match l {
            ALetter::Xi => self.qpow[n].clone() / self.qint[n].clone(),
            ALetter::Z(k) => {
                self.qpow[n].powi(k as usize - 1) / self.qint[n].powi(k as usize)
            }
        }
    }

    /// `F_w(n)` for `n = 0 ..= truncation + 1`.
    pub fn f_table(&mut self, w: &AWord) -> Rc<Vec<T>> {
        if let Some(t) = self.tables.get(w) {
            return t.clone();
        }
        let len = self.truncation + 2;
        let table = match w.first() {
            None => vec![T::one(); len],
            Some(first) => {
                let rest = self.f_table(&w.tail());
                let mut out = Vec::with_capacity(len);
                out.push(T::zero());
                out.push(T::zero());
                for n in 1..len - 1 {
                    let next = out[n].clone() + self.i_value(first, n) * rest[n].clone();
                    out.push(next);
                }
                out
            }
        };
        let table = Rc::new(table);
        self.tables.insert(w.clone(), table.clone());
        table
    }

    fn coeff(&self, c: &HPoly) -> T {
        c.eval(&self.hbar)
    }

    /// Partial sum of `Z_q` over `n_1 <= truncation`.
    pub fn z_partial(&mut self, e: &AElement) -> T {
        let top = self.truncation + 1;
        let mut acc = T::zero();
        for (w, c) in e.terms() {
            let v = self.f_table(w)[top].clone();
            acc = acc + self.coeff(c) * v;
        }
        acc
    }

    /// Partial sum of `L_w(t)` over `n <= truncation`.
    pub fn l_partial(&mut self, e: &AElement, t: &T) -> T {
        let mut acc = T::zero();
        for (w, c) in e.terms() {
            let v = match w.first() {
                None => T::one(),
                Some(first) => {
                    let k = match first {
                        ALetter::Xi => 1,
                        ALetter::Z(k) => k as usize,
                    };
                    let rest = self.f_table(&w.tail());
                    let mut sum = T::zero();
                    let mut tn = T::one();
                    for n in 1..=self.truncation {
                        tn = tn * t.clone();
                        if rest[n].magnitude() == 0.0 && !T::EXACT {
                            continue;
                        }
                        sum = sum + tn.clone() / self.qint[n].powi(k) * rest[n].clone();
                    }
                    sum
                }
            };
            acc = acc + self.coeff(c) * v;
        }
        acc
    }
}

/// Sum of a positive series from the first omitted term, given a bound on
/// the ratio of consecutive terms.
pub fn geometric_tail(first_term: f64, ratio_bound: f64) -> f64 {
    if first_term == 0.0 {
        return 0.0;
    }
    if ratio_bound.is_nan() || ratio_bound >= 1.0 {
        return f64::INFINITY;
    }
    first_term / (1.0 - ratio_bound)
}

/// Bound on `sum_{n > N} c1 r1^n F_rest(n)` for real `q` in `(0, 1)`.
fn suffix_tail(c1: f64, r1: f64, rest: &[ALetter], n: usize, q: f64) -> f64 {
    let mut constant = 1.0;
    let mut linear = 0i32;
    for &l in rest {
        match l {
            ALetter::Xi => constant *= q / (1.0 - q),
            ALetter::Z(1) => linear += 1,
            ALetter::Z(k) => {
                let qk = q.powi(k as i32 - 1);
                constant *= qk / (1.0 - qk);
            }
        }
    }
    // sum_{m<n} 1/[m] <= a + b (n - 1)
    let a = q / (1.0 - q);
    let b = 1.0 - q;
    let nf = n as f64;
    let first = c1 * constant * r1.powf(nf + 1.0) * (a + b * nf).powi(linear);
    let ratio = r1 * (1.0 + 1.0 / nf).powi(linear);
    geometric_tail(first, ratio)
}

/// Truncation bound for `Z_q` of a single admissible-start word.
fn z_word_tail(w: &AWord, n: usize, q: f64) -> f64 {
    let Some(first) = w.first() else { return 0.0 };
    let scale = (1.0 - q) / (1.0 - q.powf(n as f64 + 1.0));
    let (c1, r1) = match first {
        ALetter::Xi => (scale, q),
        ALetter::Z(k) => (scale.powi(k as i32), q.powi(k as i32 - 1)),
    };
    suffix_tail(c1, r1, &w.letters()[1..], n, q)
}

/// Truncation bound for `L_w(t)` of a single word.
fn l_word_tail(w: &AWord, n: usize, q: f64, t: f64) -> f64 {
    let Some(first) = w.first() else { return 0.0 };
    let scale = (1.0 - q) / (1.0 - q.powf(n as f64 + 1.0));
    let k = match first {
        ALetter::Xi => 1,
        ALetter::Z(k) => k as i32,
    };
    suffix_tail(scale.powi(k), t, &w.letters()[1..], n, q)
}

fn element_tail(e: &AElement, hbar: f64, word_tail: impl Fn(&AWord) -> f64) -> f64 {
    e.terms()
        .map(|(w, c)| {
            let mag: f64 = c.terms().map(|(d, r)| f64::from_rational(r).abs() * hbar.abs().powi(d as i32)).sum();
            if mag == 0.0 {
                0.0
            } else {
                mag * word_tail(w)
            }
        })
        .sum()
}

fn require_convergent(e: &AElement, map: &'static str) -> Result<()> {
    match e.first_outside(Space::H0Hat) {
        Some(w) => Err(Error::domain(map, w)),
        None => Ok(()),
    }
}

/// Tail bound and certification flag for `Z_q(e)` at a given truncation.
fn z_tail<T: Scalar>(e: &AElement, ctx: &QContext<T>, n: usize) -> (f64, bool) {
    match ctx.real_q() {
        Some(q) => (element_tail(e, 1.0 - q, |w| z_word_tail(w, n, q)), true),
        None => {
            let q = ctx.q.magnitude();
            let h = ctx.hbar().magnitude();
            (element_tail(e, h, |w| z_word_tail(w, n, q)), false)
        }
    }
}

/// Truncation actually used: the context's, raised in float mode until the
/// bound drops below a tenth of the tolerance.
fn effective_truncation(ctx_n: usize, exact: bool, target: f64, bound: impl Fn(usize) -> f64) -> usize {
    let mut n = ctx_n;
    if exact {
        return n;
    }
    while bound(n) > target && n < MAX_TRUNCATION {
        n = (n * 2).min(MAX_TRUNCATION);
    }
    n
}

/// `Z_q(e)` for `e` in the convergent module.
pub fn z_q<T: Scalar>(e: &AElement, ctx: &QContext<T>) -> Result<EvalResult<T>> {
    require_convergent(e, "Z_q")?;
    let n = effective_truncation(ctx.truncation, T::EXACT, ctx.tolerance / 10.0, |n| {
        z_tail(e, ctx, n).0
    });
    let mut ev = Evaluator::new(ctx.q.clone(), n);
    let value = ev.z_partial(e);
    let (tail_bound, certified) = z_tail(e, ctx, n);
    Ok(EvalResult {
        value,
        tail_bound,
        certified,
        truncation: n,
    })
}

/// The weight of a homogeneous element (0 for the zero element).
pub fn homogeneous_weight(e: &AElement) -> Result<usize> {
    let weight = e.weights().next().unwrap_or(0);
    e.check_homogeneous(weight)?;
    Ok(weight)
}

/// `Zbar_q(e) = (1 - q)^(-d) Z_q(e)` for `e` homogeneous of weight `d`.
pub fn zbar_q<T: Scalar>(e: &AElement, ctx: &QContext<T>) -> Result<EvalResult<T>> {
    let d = homogeneous_weight(e)?;
    let scale = T::one() / ctx.hbar().powi(d);
    let factor = scale.magnitude();
    let inner = QContext {
        tolerance: ctx.tolerance / factor,
        ..ctx.clone()
    };
    let r = z_q(e, &inner)?;
    Ok(EvalResult {
        value: r.value * scale,
        tail_bound: r.tail_bound * factor,
        ..r
    })
}

/// `L_e(t)` for `|t| < 1`.
pub fn l_value<T: Scalar>(e: &AElement, t: &T, ctx: &QContext<T>) -> Result<EvalResult<T>> {
    require_convergent(e, "L")?;
    let tm = t.magnitude();
    if tm.is_nan() || tm >= 1.0 {
        return Err(Error::InvalidParameter(format!("need |t| < 1, got {t:?}")));
    }
    let tail = |n: usize| -> (f64, bool) {
        match ctx.real_q() {
            Some(q) => (element_tail(e, 1.0 - q, |w| l_word_tail(w, n, q, tm)), true),
            None => {
                let q = ctx.q.magnitude();
                (element_tail(e, ctx.hbar().magnitude(), |w| l_word_tail(w, n, q, tm)), false)
            }
        }
    };
    let n = effective_truncation(ctx.truncation, T::EXACT, ctx.tolerance / 10.0, |n| tail(n).0);
    let mut ev = Evaluator::new(ctx.q.clone(), n);
    let value = ev.l_partial(e, t);
    let (tail_bound, certified) = tail(n);
    Ok(EvalResult {
        value,
        tail_bound,
        certified,
        truncation: n,
    })
}

/// `F_w(n)`: the sum over `n > n_1 > ... > n_r > 0`.
pub fn f_word<T: Scalar>(w: &AWord, n: usize, q: &T) -> T {
    if n == 0 {
        return if w.letters().is_empty() { T::one() } else { T::zero() };
    }
    let mut ev = Evaluator::new(q.clone(), n);
    ev.f_table(w)[n].clone()
}

/// Both sides of the q-difference equations for `L_w`.
#[derive(Clone, Debug)]
pub struct DqReport<T> {
    /// `(L_w(t) - L_w(qt)) / ((1 - q) t)`.
    pub lhs: T,
    /// `L_{Delta_0(w_2)}(t) / t + sum_r ((1-q) t)^r / (1-t)^(r+1) L_{Delta_1(w_r)}(t)`.
    pub rhs: T,
    pub difference: f64,
    /// Combined truncation bounds of all series involved.
    pub tail_bound: f64,
}

/// Checks the q-difference formulas for `w` at `t`, splitting `w` into its
/// `Hge2` part and its `xi rho^r Hge1` parts.
pub fn dq_check<T: Scalar>(w: &AElement, t: &T, ctx: &QContext<T>) -> Result<DqReport<T>> {
    require_convergent(w, "dq_check")?;
    if t.magnitude() == 0.0 {
        return Err(Error::InvalidParameter("t must be nonzero".into()));
    }
    let h = ctx.hbar();
    let qt = ctx.q.clone() * t.clone();
    let at_t = l_value(w, t, ctx)?;
    let at_qt = l_value(w, &qt, ctx)?;
    let denom = h.clone() * t.clone();
    let lhs = (at_t.value - at_qt.value) / denom.clone();
    let mut bound = (at_t.tail_bound + at_qt.tail_bound) / denom.magnitude();

    let mut rhs = T::zero();
    let one_minus_t = T::one() - t.clone();
    for (piece, c) in decompose(w)? {
        let coeff = c.eval(&h);
        let (factor, inner) = match piece {
            Piece::Unit => continue,
            Piece::Hge2(word) => (
                T::one() / t.clone(),
                delta0(&AElement::from_word(word))?,
            ),
            Piece::XiRho(r, tail) => (
                (h.clone() * t.clone()).powi(r) / one_minus_t.powi(r + 1),
                delta1(&AElement::from_word(tail))?,
            ),
        };
        let l = l_value(&inner, t, ctx)?;
        bound += (coeff.magnitude() * factor.magnitude()) * l.tail_bound;
        rhs = rhs + coeff * factor * l.value;
    }
    let difference = (lhs.clone() - rhs.clone()).magnitude();
    Ok(DqReport {
        lhs,
        rhs,
        difference,
        tail_bound: bound,
    })
}

/// Partial sum of `sum_j C(k+j, j) x^j` (which is `(1-x)^(-k-1)`) with a
/// certified tail bound, for `0 <= x < 1`.
pub fn binomial_series(k: u32, x: f64, terms: usize) -> EvalResult<f64> {
    let mut sum = 0.0;
    let mut term = 1.0;
    for j in 0..terms {
        sum += term;
        term *= x * (k as f64 + j as f64 + 1.0) / (j as f64 + 1.0);
    }
    // term is now the first omitted one; later ratios only shrink towards x
    let ratio = x * (k as f64 + terms as f64 + 1.0) / (terms as f64 + 1.0);
    EvalResult {
        value: sum,
        tail_bound: geometric_tail(term, ratio),
        certified: true,
        truncation: terms,
    }
}

/// `zbar_q` of an index: the modified qMZV.
pub fn zeta_bar<T: Scalar>(index: &crate::word::Index, ctx: &QContext<T>) -> Result<EvalResult<T>> {
    if !index.is_admissible() {
        return Err(Error::NotAdmissible {
            index: index.to_string(),
        });
    }
    zbar_q(&AElement::from_word(AWord::from_index(index)), ctx)
}

/// Convenience for exact contexts from a rational `q`.
pub fn exact_context(q: Rational, truncation: usize) -> Result<QContext<Rational>> {
    QContext::new(q, truncation, 1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    fn a(text: &str) -> AElement {
        AElement::parse(text).unwrap()
    }

    fn ctx() -> QContext<f64> {
        QContext::standard()
    }

    #[test]
    fn letter_values() {
        let q = 0.3;
        assert!((i_letter(ILetter::Xi, 1, &q) - q).abs() < 1e-15);
        assert!((i_letter(ILetter::Z(3), 1, &q) - q * q).abs() < 1e-15);
        for n in 1..6 {
            let rho = i_letter(ILetter::Z(1), n, &q) - i_letter(ILetter::Xi, n, &q);
            assert!((rho - (1.0 - q)).abs() < 1e-14);
            assert_eq!(i_letter(ILetter::Rho, n, &q), 1.0 - q);
        }
        let qr = rational(1, 3);
        assert_eq!(i_letter(ILetter::Z(1), 4, &qr) - i_letter(ILetter::Xi, 4, &qr), rational(2, 3));
    }

    #[test]
    fn finite_sums() {
        let q = rational(1, 2);
        assert_eq!(f_word(&AWord::default(), 7, &q), rational(1, 1));
        assert_eq!(f_word(&a("xi").terms().next().unwrap().0.clone(), 2, &q), q);
        // I_{z2}(1) + I_{z2}(2) = q + q^2 (1-q)^2 / (1-q^2)^2
        let one = rational(1, 1);
        let expected = q.clone()
            + q.clone() * q.clone() * (one.clone() - q.clone()).powi(2)
                / (one.clone() - q.clone() * q.clone()).powi(2);
        let z2 = AWord(vec![ALetter::Z(2)]);
        assert_eq!(f_word(&z2, 3, &q), expected);
    }

    #[test]
    fn unit_and_domain() {
        let r = z_q(&AElement::one(), &ctx()).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.tail_bound, 0.0);
        assert!(matches!(z_q(&a("z1"), &ctx()), Err(Error::Domain { .. })));
        assert!(matches!(zbar_q(&a("z2 + xi"), &ctx()), Err(Error::NotHomogeneous { .. })));
    }

    #[test]
    fn z2_matches_direct_sum() {
        let q: f64 = 0.5;
        let direct: f64 = (1..=200)
            .map(|n| {
                let qi = (1.0 - q.powi(n)) / (1.0 - q);
                q.powi(n) / (qi * qi)
            })
            .sum();
        let r = z_q(&a("z2"), &ctx()).unwrap();
        assert!((r.value - direct).abs() < 1e-12);
        assert!(r.certified && r.tail_bound < 1e-11);
    }

    #[test]
    fn hoffman_instance_and_zbar() {
        let c = ctx();
        let diff = z_q(&a("z3 - z2 z1"), &c).unwrap();
        assert!(diff.value.abs() < 1e-12 + diff.tail_bound);
        let zb = zbar_q(&a("z2"), &c).unwrap().value;
        assert!((zb - 4.0 * z_q(&a("z2"), &c).unwrap().value).abs() < 1e-12);
        assert!((zbar_q(&a("h^3"), &c).unwrap().value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn resummation_instance() {
        let c = ctx();
        let lhs = zbar_q(&crate::products::phi(2), &c).unwrap().value;
        let rhs = zbar_q(&a("xi z1 - xi xi"), &c).unwrap().value;
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn polylog_basics() {
        let c = ctx();
        assert_eq!(l_value(&AElement::one(), &0.3, &c).unwrap().value, 1.0);
        assert_eq!(l_value(&a("z2"), &0.0, &c).unwrap().value, 0.0);
        let w = a("z2 z1");
        let l = l_value(&w, &0.5, &c).unwrap();
        let z = z_q(&crate::products::e_map(&w).unwrap(), &c).unwrap();
        assert!((l.value - z.value).abs() < 1e-9);
        assert!(l_value(&w, &1.0, &c).is_err());
    }

    #[test]
    fn q_difference_examples() {
        let c = ctx();
        for (w, expected) in [("z2", None), ("xi", Some(1.0 / 0.7)), ("z3", None)] {
            let report = dq_check(&a(w), &0.3, &c).unwrap();
            assert!(report.difference < 1e-8, "{w}: {report:?}");
            if let Some(v) = expected {
                assert!((report.lhs - v).abs() < 1e-8);
            }
        }
        // the z2 right-hand side is L_xi(t) / t
        let r = dq_check(&a("z2"), &0.3, &c).unwrap();
        let lxi = l_value(&a("xi"), &0.3, &c).unwrap().value;
        assert!((r.lhs - lxi / 0.3).abs() < 1e-8);
    }

    #[test]
    fn binomial_series_converges_within_bound() {
        for k in 0..=5u32 {
            let exact = (1.0f64 - 1.0 / 3.0).powi(-(k as i32) - 1);
            for terms in [5usize, 10, 20, 40] {
                let r = binomial_series(k, 1.0 / 3.0, terms);
                let err = exact - r.value;
                assert!(err >= -1e-14 && err <= r.tail_bound * (1.0 + 1e-12) + 1e-14, "k={k} terms={terms}");
            }
        }
    }

    #[test]
    fn tail_bound_dominates_observed_error() {
        // compare N = 30 against N = 2000 at q = 9/10 where the tail is large
        let q = 0.9;
        for w in ["z2", "xi z1", "z3 z1 z1", "xi xi"] {
            let e = a(w);
            let small = QContext::new(q, 30, 1e300).unwrap();
            let coarse = z_q(&e, &small).unwrap();
            let fine = Evaluator::new(q, 2000).z_partial(&e);
            let err = (fine - coarse.value).abs();
            assert_eq!(coarse.truncation, 30);
            assert!(err <= coarse.tail_bound, "{w}: err {err} bound {}", coarse.tail_bound);
        }
    }

    #[test]
    fn exact_mode_agrees_with_float() {
        let exact = exact_context(rational(1, 2), 60).unwrap();
        let float = QContext::new(0.5, 60, 1e300).unwrap();
        for w in ["z2", "z3 z1", "xi z1", "z2 xi z1 + 3*h*z2"] {
            let e = a(w);
            let ex = z_q(&e, &exact).unwrap();
            let fl = z_q(&e, &float).unwrap();
            assert_eq!(ex.truncation, 60);
            let exf = f64::from_rational(&ex.value);
            assert!((exf - fl.value).abs() <= 1e-12 * exf.abs().max(1e-300), "{w}");
        }
    }

    #[test]
    fn rejects_bad_contexts() {
        assert!(QContext::new(1.5, 10, 1e-9).is_err());
        assert!(QContext::new(0.0, 10, 1e-9).is_err());
        assert!(QContext::new(0.5, 0, 1e-9).is_err());
        assert!(QContext::new(0.5, 10, 0.0).is_err());
    }

    #[test]
    fn complex_q_is_heuristic() {
        let q = num_complex::Complex64::new(0.3, 0.2);
        let c = QContext::new(q, 200, 1e-10).unwrap();
        let r = z_q(&a("z2"), &c).unwrap();
        assert!(!r.certified);
        let direct: num_complex::Complex64 = (1..=200)
            .map(|n| i_letter(ILetter::Z(2), n, &q))
            .sum();
        assert!((r.value - direct).norm() < 1e-12);
    }
}
