//! Exact linear algebra over `Q` on sparse rows.
//!
//! Rows are kept as primitive integer vectors (content 1, positive leading
//! entry) and reduced fraction-free, so no rational arithmetic happens during
//! elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

/// Sorted `(column, value)` pairs with no zero values.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Integers the elimination runs over. Operations return `None` on
/// overflow.
trait EliminationInt: Clone + Sized {
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn gcd(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    /// `a * x - b * y`
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
}

impl EliminationInt for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn neg(&self) -> Option<Self> {
        Some(-self)
    }

    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }

    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
}

impl EliminationInt for i128 {
    fn is_zero(&self) -> bool {
        *self == 0
    }

    fn is_negative(&self) -> bool {
        *self < 0
    }

    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }

    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other).filter(|v| *v != i128::MIN)
    }

    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?
            .checked_sub(b.checked_mul(*y)?)
            .filter(|v| *v != i128::MIN)
    }
}

/// Scales a rational sparse vector to a primitive integer one with positive
/// leading entry.
pub fn primitive(row: &[(usize, Rational)]) -> SparseRow {
    let mut entries: Vec<(usize, &Rational)> = row.iter().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (*c, v)).collect();
    entries.sort_by_key(|(c, _)| *c);
    let lcm = entries
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let mut out: SparseRow = entries
        .into_iter()
        .map(|(c, v)| (c, v.numer() * (&lcm / v.denom())))
        .collect();
    normalize(&mut out).expect("big integers do not overflow");
    out
}

fn normalize<T: EliminationInt>(row: &mut [(usize, T)]) -> Option<()> {
    let Some((_, lead)) = row.first() else { return Some(()) };
    let negate = lead.is_negative();
    let mut g = row[0].1.clone();
    for (_, v) in row.iter().skip(1) {
        g = g.gcd(v);
    }
    if g.is_negative() {
        g = g.neg()?;
    }
    for (_, v) in row.iter_mut() {
        *v = v.div(&g);
        if negate {
            *v = v.neg()?;
        }
    }
    Some(())
}

fn combine<T: EliminationInt>(a: &T, x: &[(usize, T)], b: &T, y: &[(usize, T)]) -> Option<Vec<(usize, T)>> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a.mul(&x[i].1)?));
            i += 1;
        } else if take_y {
            out.push((y[j].0, b.mul(&y[j].1)?.neg()?));
            j += 1;
        } else {
            let v = T::mul_sub(a, &x[i].1, b, &y[j].1)?;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Row-echelon rows keyed by leading column.
#[derive(Clone, Debug)]
struct Pivots<T> {
    rows: BTreeMap<usize, Vec<(usize, T)>>,
}

impl<T: EliminationInt> Pivots<T> {
    fn new() -> Self {
        Pivots { rows: BTreeMap::new() }
    }

    fn reduce(&self, mut row: Vec<(usize, T)>) -> Option<Vec<(usize, T)>> {
        normalize(&mut row)?;
        while let Some((col, lead)) = row.first() {
            let Some(pivot) = self.rows.get(col) else { break };
            let p = &pivot[0].1;
            let g = p.gcd(lead);
            let a = p.div(&g);
            let b = lead.div(&g);
            row = combine(&a, &row, &b, pivot)?;
            normalize(&mut row)?;
        }
        Some(row)
    }

    fn insert(&mut self, row: Vec<(usize, T)>) -> Option<bool> {
        let row = self.reduce(row)?;
        Some(match row.first() {
            None => false,
            Some(&(col, _)) => {
                self.rows.insert(col, row);
                true
            }
        })
    }
}

/// A row-echelon basis built one row at a time; each stored row is keyed by
/// its leading column.
#[derive(Clone, Debug)]
pub struct Echelon {
    pivots: Pivots<BigInt>,
}

impl Default for Echelon {
    fn default() -> Self {
        Echelon { pivots: Pivots::new() }
    }
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Echelon form of `rows`, inserted in the given order. Runs in machine
    /// integers when they suffice.
    pub fn from_rows(rows: Vec<SparseRow>) -> Self {
        let small: Option<Vec<Vec<(usize, i128)>>> = rows
            .iter()
            .map(|r| r.iter().map(|(c, v)| Some((*c, i128::try_from(v).ok().filter(|v| *v != i128::MIN)?))).collect())
            .collect();
        if let Some(small) = small {
            let mut p = Pivots::<i128>::new();
            let done = small.into_iter().try_for_each(|r| p.insert(r).map(|_| ()));
            if done.is_some() {
                let rows = p
                    .rows
                    .into_iter()
                    .map(|(k, r)| (k, r.into_iter().map(|(c, v)| (c, BigInt::from(v))).collect()))
                    .collect();
                return Echelon { pivots: Pivots { rows } };
            }
        }
        let mut e = Echelon::new();
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.pivots.rows.len()
    }

    /// Eliminates leading entries until the leading column has no pivot.
    /// Returns an empty row when `row` lies in the span.
    pub fn reduce(&self, row: SparseRow) -> SparseRow {
        self.pivots.reduce(row).expect("big integers do not overflow")
    }

    /// Adds `row` to the span; returns whether it was independent.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        self.pivots.insert(row).expect("big integers do not overflow")
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Stored rows in order of leading column.
    pub fn rows(&self) -> impl Iterator<Item = &SparseRow> {
        self.pivots.rows.values()
    }

    /// Stored rows whose leading column is at least `col`; they span the
    /// part of the row space supported on columns `>= col`.
    pub fn rows_from(&self, col: usize) -> impl Iterator<Item = &SparseRow> {
        self.pivots.rows.range(col..).map(|(_, r)| r)
    }

    /// The reduced row-echelon form of the stored rows, as dense rational
    /// vectors of length `ncols`.
    pub fn reduced(&self, ncols: usize) -> Vec<Vec<Rational>> {
        reduce_dense(self.rows(), ncols)
    }
}

/// Back-substitutes echelon rows (given in increasing leading column) into
/// reduced form.
fn reduce_dense<'a>(rows: impl Iterator<Item = &'a SparseRow>, ncols: usize) -> Vec<Vec<Rational>> {
    let mut dense: Vec<(usize, Vec<Rational>)> = rows
        .map(|row| {
            let lead = row[0].1.clone();
            let mut v = vec![Rational::zero(); ncols];
            for (c, x) in row {
                v[*c] = Rational::new(x.clone(), lead.clone());
            }
            (row[0].0, v)
        })
        .collect();
    for i in (0..dense.len()).rev() {
        let (col, pivot) = dense[i].clone();
        for (_, row) in dense[..i].iter_mut() {
            let f = row[col].clone();
            if f.is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(&pivot).skip(col) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
    }
    dense.into_iter().map(|(_, v)| v).collect()
}

fn sparse(row: &[Rational]) -> SparseRow {
    primitive(
        &row.iter()
            .enumerate()
            .map(|(c, v)| (c, v.clone()))
            .collect::<Vec<_>>(),
    )
}

/// Reduced row-echelon form of `rows` (all of equal length); zero rows are
/// dropped, so the output length is the rank.
pub fn rref(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    assert!(rows.iter().all(|r| r.len() == ncols), "rows must have equal length");
    Echelon::from_rows(rows.iter().map(|r| sparse(r)).collect()).reduced(ncols)
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    Echelon::from_rows(rows.iter().map(|r| sparse(r)).collect()).rank()
}

/// Whether `v` lies in the row space of `rows`.
pub fn in_row_space(rows: &[Vec<Rational>], v: &[Rational]) -> bool {
    Echelon::from_rows(rows.iter().map(|r| sparse(r)).collect()).contains(sparse(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rational(x, 1)).collect())
            .collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(rref(&m(&[&[1, 2], &[2, 4]])), m(&[&[1, 2]]));
        assert!(rref(&[]).is_empty());
        let id = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(rref(&id), id);
        let r = rref(&m(&[&[0, 2, 4], &[3, 1, 0], &[3, 3, 4]]));
        assert_eq!(
            r,
            vec![
                vec![rational(1, 1), rational(0, 1), rational(-2, 3)],
                vec![rational(0, 1), rational(1, 1), rational(2, 1)],
            ]
        );
    }

    #[test]
    fn membership() {
        let rows = m(&[&[1, 1, 0], &[0, 1, 1]]);
        assert!(in_row_space(&rows, &m(&[&[1, 0, -1]])[0]));
        assert!(!in_row_space(&rows, &m(&[&[1, 0, 0]])[0]));
    }

    #[test]
    fn tail_rows_span_the_restricted_space() {
        // (1,1,0), (1,0,1): the combination supported on columns >= 1 is (0,1,-1)
        let mut e = Echelon::new();
        e.insert(primitive(&[(0, rational(1, 1)), (1, rational(1, 1))]));
        e.insert(primitive(&[(0, rational(1, 1)), (2, rational(1, 1))]));
        let tail: Vec<_> = e.rows_from(1).cloned().collect();
        assert_eq!(tail, vec![vec![(1, BigInt::from(1)), (2, BigInt::from(-1))]]);
    }

    #[test]
    fn falls_back_to_big_integers() {
        let big = |e: u32, s: i64| Rational::from_integer(BigInt::from(s) * BigInt::from(2).pow(e) + 1);
        let first = vec![big(90, 1), big(80, 3), big(0, 1)];
        let second = vec![big(85, 7), big(95, -1), big(70, 5)];
        let third = first.iter().zip(&second).map(|(a, b)| a * big(60, 3) - b * big(50, 1)).collect();
        let rows = vec![first, second, third];
        assert_eq!(rank(&rows), 2);
        assert_eq!(rank(&rows), bareiss_rank(&rows));
        let huge = vec![vec![big(200, 1), big(0, 1)], vec![big(0, 1), big(200, 1)]];
        assert_eq!(rank(&huge), 2);
    }

    /// Bareiss elimination on a dense integer copy; independent of the
    /// sparse code above.
    fn bareiss_rank(rows: &[Vec<Rational>]) -> usize {
        let mut a: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        let nrows = a.len();
        let ncols = a.first().map_or(0, Vec::len);
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..nrows).find(|&i| !Zero::is_zero(&a[i][c])) else { continue };
            a.swap(r, p);
            for i in r + 1..nrows {
                for j in c + 1..ncols {
                    let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    a[i][j] = v / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            r += 1;
        }
        r
    }

    fn matrix() -> impl Strategy<Value = Vec<Vec<Rational>>> {
        (1usize..6, 1usize..7).prop_flat_map(|(nr, nc)| {
            prop::collection::vec(
                prop::collection::vec((-3i64..4, 1i64..4).prop_map(|(p, q)| rational(p, q)), nc),
                nr,
            )
        })
    }

    proptest! {
        #[test]
        fn rank_matches_bareiss(rows in matrix()) {
            prop_assert_eq!(rank(&rows), bareiss_rank(&rows));
        }

        #[test]
        fn rref_is_reduced_and_spans(rows in matrix()) {
            let r = rref(&rows);
            prop_assert_eq!(r.len(), bareiss_rank(&rows));
            let mut last = None;
            for (i, row) in r.iter().enumerate() {
                let lead = row.iter().position(|x| !x.is_zero()).unwrap();
                prop_assert!(last.is_none_or(|l| lead > l));
                last = Some(lead);
                prop_assert!(row[lead].is_one());
                for (j, other) in r.iter().enumerate() {
                    if j != i {
                        prop_assert!(other[lead].is_zero());
                    }
                }
            }
            for row in &rows {
                prop_assert!(in_row_space(&r, row));
            }
        }
    }
}
