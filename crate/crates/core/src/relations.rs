//! Double shuffle and resummation relations, their intersection with the
//! index subspace, and the resulting dimension table.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{parse_rational, HPoly, Rational, Scalar};
use crate::element::AElement;
use crate::error::{Error, Result};
use crate::linalg::{primitive, Echelon, SparseRow};
use crate::products::{phi, rho, Harmonic, Shuffle};
use crate::qeval::{zeta_bar, QContext};
use crate::word::{ALetter, AWord, Index, Monomial, Word};

/// The monomials `h^j w` of total weight `d` with `w` empty or starting with
/// an admissible letter, ordered by word.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedBasis {
    pub weight: usize,
    pub monomials: Vec<Monomial>,
    /// Whether each monomial lies in the index subspace.
    pub in_h0: Vec<bool>,
    lookup: HashMap<AWord, usize>,
}

impl GradedBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, word: &AWord) -> Option<usize> {
        self.lookup.get(word).copied()
    }

    /// The index-subspace monomials as indices, in basis order.
    pub fn indices(&self) -> Vec<Index> {
        self.monomials
            .iter()
            .zip(&self.in_h0)
            .filter(|(_, h)| **h)
            .map(|(m, _)| m.word.to_index().expect("index word"))
            .collect()
    }

    /// Coordinates of a homogeneous weight-`d` element.
    pub fn coordinates(&self, e: &AElement) -> Result<Vec<(usize, Rational)>> {
        e.check_homogeneous(self.weight)?;
        let mut out = Vec::with_capacity(e.len());
        for (w, c) in e.terms() {
            let i = self.position(w).ok_or_else(|| Error::domain("coordinates", w))?;
            let j = self.weight - w.degree();
            out.push((i, c.coeff(j)));
        }
        Ok(out)
    }
}

pub fn enumerate_basis(d: usize) -> GradedBasis {
    let mut words = vec![AWord::default()];
    for m in 1..=d {
        words.extend(AWord::admissible_of_degree(m));
    }
    words.sort();
    let monomials: Vec<Monomial> = words
        .into_iter()
        .map(|w| Monomial::new(d - w.degree(), w))
        .collect();
    let in_h0 = monomials.iter().map(|m| m.word.is_index_word()).collect();
    let lookup = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.word.clone(), i))
        .collect();
    GradedBasis {
        weight: d,
        monomials,
        in_h0,
        lookup,
    }
}

/// Generator lists per weight, sharing product caches across weights.
#[derive(Default)]
pub struct Generators {
    harmonic: Harmonic,
    shuffle: Shuffle,
    double_shuffle: HashMap<usize, Vec<AElement>>,
    resummation: HashMap<usize, Vec<AElement>>,
}

fn lift(list: &[AElement], j: usize) -> impl Iterator<Item = AElement> + '_ {
    let h = HPoly::monomial(Rational::from_integer(1.into()), j);
    list.iter().map(move |e| e.scale(&h))
}

/// All sequences `((a_1, b_1), ..., (a_r, b_r))`, `r >= 1`, with
/// `sum (a_i + b_i + 1) = d`.
pub fn compositions(d: usize) -> Vec<Vec<(usize, usize)>> {
    if d == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for s in 1..=d {
        let heads: Vec<(usize, usize)> = (0..s).map(|a| (a, s - 1 - a)).collect();
        if s == d {
            out.extend(heads.iter().map(|&p| vec![p]));
        } else {
            for rest in compositions(d - s) {
                for &p in &heads {
                    let mut v = vec![p];
                    v.extend_from_slice(&rest);
                    out.push(v);
                }
            }
        }
    }
    out
}

fn resummation_word(seq: &[(usize, usize)]) -> AElement {
    let rho = rho();
    let mut acc = AElement::one();
    for &(a, b) in seq {
        acc = &acc * &phi(a as u32 + 1);
        for _ in 0..b {
            acc = &acc * &rho;
        }
    }
    acc
}

/// The resummation element of a sequence minus that of its dual.
pub fn resummation_element(seq: &[(usize, usize)]) -> AElement {
    let dual: Vec<(usize, usize)> = seq.iter().rev().map(|&(a, b)| (b, a)).collect();
    &resummation_word(seq) - &resummation_word(&dual)
}

impl Generators {
    pub fn new() -> Self {
        Self::default()
    }

    /// `p * r - p sh r` for unordered pairs of admissible-start words with
    /// `deg p + deg r = m`.
    fn double_shuffle_base(&mut self, m: usize) -> Result<&[AElement]> {
        if !self.double_shuffle.contains_key(&m) {
            let mut out = Vec::new();
            for dp in 1..=m / 2 {
                let left = AWord::admissible_of_degree(dp);
                let right = AWord::admissible_of_degree(m - dp);
                for (i, p) in left.iter().enumerate() {
                    let start = if 2 * dp == m { i } else { 0 };
                    for r in &right[start..] {
                        let pe = AElement::from_word(p.clone());
                        let re = AElement::from_word(r.clone());
                        let h = self.harmonic.product(&pe, &re);
                        let s = self.shuffle.product(&pe, &re)?;
                        let g = &h - &s;
                        if !g.is_zero() {
                            out.push(g);
                        }
                    }
                }
            }
            self.double_shuffle.insert(m, out);
        }
        Ok(&self.double_shuffle[&m])
    }

    fn resummation_base(&mut self, m: usize) -> &[AElement] {
        self.resummation.entry(m).or_insert_with(|| {
            compositions(m)
                .iter()
                .map(|s| resummation_element(s))
                .filter(|e| !e.is_zero())
                .collect()
        })
    }

    /// Generators of `S_d`: every pair of total degree `d - j`, times `h^j`.
    pub fn double_shuffle(&mut self, d: usize) -> Result<Vec<AElement>> {
        let mut out = Vec::new();
        for m in 2..=d {
            let base = self.double_shuffle_base(m)?;
            out.extend(lift(base, d - m));
        }
        Ok(out)
    }

    /// Generators of `R_d`, optionally with `h^j` times the weight `d - j`
    /// generators.
    pub fn resummation(&mut self, d: usize, hbar_lifts: bool) -> Vec<AElement> {
        let mut out = Vec::new();
        let lowest = if hbar_lifts { 1 } else { d };
        for m in lowest..=d {
            let base = self.resummation_base(m);
            out.extend(lift(base, d - m));
        }
        out
    }
}

pub fn gen_double_shuffle(d: usize) -> Result<Vec<AElement>> {
    Generators::new().double_shuffle(d)
}

pub fn gen_resummation(d: usize, hbar_lifts: bool) -> Vec<AElement> {
    Generators::new().resummation(d, hbar_lifts)
}

/// Hoffman's relation for an admissible index, as the difference of its two
/// sides.
pub fn gen_hoffman(k: &Index) -> Result<AElement> {
    if !k.is_admissible() {
        return Err(Error::NotAdmissible {
            index: k.to_string(),
        });
    }
    let parts = k.parts();
    let word = |p: Vec<u32>| AElement::from_word(AWord(p.into_iter().map(ALetter::Z).collect()));
    let mut out = AElement::zero();
    for i in 0..parts.len() {
        let mut p = parts.to_vec();
        p[i] += 1;
        out.add_assign(&word(p));
        for a in 0..parts[i].saturating_sub(1) {
            let mut p = parts[..i].to_vec();
            p.push(parts[i] - a);
            p.push(a + 1);
            p.extend_from_slice(&parts[i + 1..]);
            out.sub_assign(&word(p));
        }
    }
    Ok(out)
}

/// Counts of generators that went into a relation basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorCounts {
    pub double_shuffle: usize,
    pub resummation: usize,
    /// Distinct nonzero rows after normalization.
    pub distinct: usize,
    /// Rank of the full generator span.
    pub rank: usize,
}

/// A basis of `N_{<=d}` in reduced row-echelon form over index coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationBasis {
    pub weight: usize,
    pub hbar_lifts: bool,
    pub index_basis: Vec<Index>,
    pub rows: Vec<Vec<Rational>>,
    pub generators: Option<GeneratorCounts>,
}

impl RelationBasis {
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// The row as an element of the index subspace of weight `d`.
    pub fn row_element(&self, i: usize) -> AElement {
        let mut e = AElement::zero();
        for (k, c) in self.index_basis.iter().zip(&self.rows[i]) {
            if c.is_zero() {
                continue;
            }
            let h = HPoly::monomial(c.clone(), self.weight - k.weight());
            e.add_term(AWord::from_index(k), &h);
        }
        e
    }

    pub fn to_document(&self) -> RelationDocument {
        RelationDocument {
            version: 1,
            weight: self.weight,
            mode: Mode {
                hbar_lifts: self.hbar_lifts,
            },
            index_basis: self.index_basis.iter().map(Index::to_string).collect(),
            relations: self
                .rows
                .iter()
                .map(|r| r.iter().map(Rational::to_string).collect())
                .collect(),
            generators: self.generators,
        }
    }

    pub fn from_document(doc: &RelationDocument) -> Result<Self> {
        if doc.version != 1 {
            return Err(Error::Document(format!("unsupported version {}", doc.version)));
        }
        let index_basis = doc
            .index_basis
            .iter()
            .map(|s| Index::parse(s))
            .collect::<Result<Vec<_>>>()?;
        for k in &index_basis {
            if !k.is_admissible() || k.weight() > doc.weight {
                return Err(Error::Document(format!(
                    "index `{k}` is not admissible of weight <= {}",
                    doc.weight
                )));
            }
        }
        let rows = doc
            .relations
            .iter()
            .map(|r| {
                if r.len() != index_basis.len() {
                    return Err(Error::Document(format!(
                        "relation has {} entries, expected {}",
                        r.len(),
                        index_basis.len()
                    )));
                }
                r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RelationBasis {
            weight: doc.weight,
            hbar_lifts: doc.mode.hbar_lifts,
            index_basis,
            rows,
            generators: doc.generators,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: RelationDocument =
            serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        Self::from_document(&doc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mode {
    pub hbar_lifts: bool,
}

/// Serialized form of a [`RelationBasis`]; rationals are strings `"p"` or
/// `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDocument {
    pub version: u32,
    pub weight: usize,
    pub mode: Mode,
    pub index_basis: Vec<String>,
    pub relations: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<GeneratorCounts>,
}

/// Column order: the monomials outside the index subspace first, in
/// reverse basis order, then the index monomials in basis order. Any order
/// with the index monomials last gives the same intersection; reversing the
/// first block keeps the elimination sparse.
fn column_order(basis: &GradedBasis) -> (Vec<usize>, usize) {
    let mut cols = vec![0; basis.len()];
    let mut next = 0;
    for (i, h) in basis.in_h0.iter().enumerate().rev() {
        if !h {
            cols[i] = next;
            next += 1;
        }
    }
    let boundary = next;
    for (i, h) in basis.in_h0.iter().enumerate() {
        if *h {
            cols[i] = next;
            next += 1;
        }
    }
    (cols, boundary)
}

/// The intersection of the span of `generators` with the index subspace,
/// in index coordinates.
pub fn intersect_with_h0(generators: &[AElement], d: usize) -> Result<RelationBasis> {
    let basis = enumerate_basis(d);
    let (cols, boundary) = column_order(&basis);
    let mut rows: Vec<SparseRow> = Vec::with_capacity(generators.len());
    for g in generators {
        let coords = basis.coordinates(g)?;
        let permuted: Vec<(usize, Rational)> =
            coords.into_iter().map(|(i, c)| (cols[i], c)).collect();
        let row = primitive(&permuted);
        if !row.is_empty() {
            rows.push(row);
        }
    }
    rows.sort();
    rows.dedup();
    rows.sort_by_key(Vec::len);
    let distinct = rows.len();
    let ech = Echelon::from_rows(rows);
    let rank = ech.rank();
    let index_basis = basis.indices();
    let n = index_basis.len();
    let tail = Echelon::from_rows(
        ech.rows_from(boundary)
            .map(|row| row.iter().map(|(c, v)| (c - boundary, v.clone())).collect())
            .collect(),
    );
    Ok(RelationBasis {
        weight: d,
        hbar_lifts: true,
        index_basis,
        rows: tail.reduced(n),
        generators: Some(GeneratorCounts {
            double_shuffle: 0,
            resummation: 0,
            distinct,
            rank,
        }),
    })
}

/// `N_{<=d}` from the double shuffle and resummation generators.
pub fn relation_basis(gens: &mut Generators, d: usize, hbar_lifts: bool) -> Result<RelationBasis> {
    let mut all = gens.double_shuffle(d)?;
    let ds = all.len();
    let res = gens.resummation(d, hbar_lifts);
    let rs = res.len();
    all.extend(res);
    let mut basis = intersect_with_h0(&all, d)?;
    basis.hbar_lifts = hbar_lifts;
    if let Some(g) = basis.generators.as_mut() {
        g.double_shuffle = ds;
        g.resummation = rs;
    }
    Ok(basis)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsRow {
    pub weight: usize,
    /// Nonempty admissible indices of weight `<= d`.
    pub indices: usize,
    pub relations: usize,
    /// `indices - relations`, an upper bound on the dimension of the span.
    pub bound: usize,
}

/// Rows for `d = 2 ..= max_d`; `progress` is called after each weight.
pub fn dims_table_with(
    max_d: usize,
    hbar_lifts: bool,
    mut progress: impl FnMut(&DimsRow),
) -> Result<Vec<DimsRow>> {
    if max_d < 2 {
        return Err(Error::InvalidParameter("max weight must be at least 2".into()));
    }
    let mut gens = Generators::new();
    let mut out = Vec::new();
    for d in 2..=max_d {
        let basis = relation_basis(&mut gens, d, hbar_lifts)?;
        let indices = basis.index_basis.len() - 1;
        let relations = basis.dimension();
        let row = DimsRow {
            weight: d,
            indices,
            relations,
            bound: indices - relations,
        };
        progress(&row);
        out.push(row);
    }
    Ok(out)
}

pub fn dims_table(max_d: usize, hbar_lifts: bool) -> Result<Vec<DimsRow>> {
    dims_table_with(max_d, hbar_lifts, |_| {})
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowCheck {
    pub value: f64,
    /// Sum of `|c_i|` times the truncation bound of each value used.
    pub tail_bound: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub rows: Vec<RowCheck>,
    pub max_abs: f64,
    pub ok: bool,
}

/// Evaluates every relation row on the modified qMZVs.
pub fn verify_numeric(basis: &RelationBasis, ctx: &QContext<f64>) -> Result<VerifyReport> {
    let mut values = Vec::with_capacity(basis.index_basis.len());
    for (i, k) in basis.index_basis.iter().enumerate() {
        if basis.rows.iter().all(|r| r[i].is_zero()) {
            values.push((0.0, 0.0));
            continue;
        }
        let r = zeta_bar(k, ctx)?;
        values.push((r.value, r.tail_bound));
    }
    let mut rows = Vec::with_capacity(basis.rows.len());
    for row in &basis.rows {
        let mut value = 0.0;
        let mut tail = 0.0;
        for (c, (v, t)) in row.iter().zip(&values) {
            if c.is_zero() {
                continue;
            }
            let c = f64::from_rational(c);
            value += c * v;
            tail += c.abs() * t;
        }
        let ok = value.abs() <= ctx.tolerance + tail;
        rows.push(RowCheck {
            value,
            tail_bound: tail,
            ok,
        });
    }
    let max_abs = rows.iter().map(|r| r.value.abs()).fold(0.0, f64::max);
    let ok = rows.iter().all(|r| r.ok);
    Ok(VerifyReport { rows, max_abs, ok })
}

/// Sum of `|c|` over a row, for scaling tolerances.
pub fn row_norm(row: &[Rational]) -> f64 {
    row.iter().map(|c| f64::from_rational(&c.abs())).sum()
}
