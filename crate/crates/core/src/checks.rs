//! Numerical spot checks of the product theorems and relation spaces.

use std::fmt;
use std::str::FromStr;

use crate::element::AElement;
use crate::error::{Error, Result};
use crate::products::{Harmonic, Shuffle, Star};
use crate::qeval::{z_q, zbar_q, EvalResult, QContext};
use crate::relations::{verify_numeric, Generators, RelationBasis};
use crate::word::AWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductKind {
    Harmonic,
    Shuffle,
    Star,
}

impl FromStr for ProductKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "harmonic" => Ok(ProductKind::Harmonic),
            "shuffle" => Ok(ProductKind::Shuffle),
            "star" => Ok(ProductKind::Star),
            other => Err(Error::InvalidParameter(format!("unknown product `{other}`"))),
        }
    }
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProductKind::Harmonic => "harmonic",
            ProductKind::Shuffle => "shuffle",
            ProductKind::Star => "star",
        })
    }
}

/// The three products with their memo tables.
#[derive(Default)]
pub struct Products {
    pub harmonic: Harmonic,
    pub shuffle: Shuffle,
    pub star: Star,
}

impl Products {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn apply(&mut self, kind: ProductKind, a: &AElement, b: &AElement) -> Result<AElement> {
        match kind {
            ProductKind::Harmonic => Ok(self.harmonic.product(a, b)),
            ProductKind::Shuffle => self.shuffle.product(a, b),
            ProductKind::Star => self.star.product(a, b),
        }
    }
}

/// Outcome of one family of checks.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckSummary {
    pub family: String,
    pub checked: usize,
    /// The largest observed `|defect|`.
    pub max_defect: f64,
    /// Descriptions of the cases whose defect exceeded tolerance plus bound.
    pub failures: Vec<String>,
}

impl CheckSummary {
    fn new(family: impl Into<String>) -> Self {
        CheckSummary {
            family: family.into(),
            checked: 0,
            max_defect: 0.0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, what: impl FnOnce() -> String, defect: f64, allowed: f64) {
        self.checked += 1;
        self.max_defect = self.max_defect.max(defect);
        if defect.is_nan() || defect > allowed {
            self.failures.push(format!("{}: defect {defect:.3e} > {allowed:.3e}", what()));
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CheckSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} checked, max defect {:.3e}",
            if self.ok() { "PASS" } else { "FAIL" },
            self.family,
            self.checked,
            self.max_defect
        )?;
        for failure in &self.failures {
            write!(f, "\n  {failure}")?;
        }
        Ok(())
    }
}

/// Unordered pairs of admissible-start words with degree sum at most
/// `max_weight`.
pub fn word_pairs(max_weight: usize) -> Vec<(AWord, AWord)> {
    let words: Vec<Vec<AWord>> = (0..=max_weight).map(AWord::admissible_of_degree).collect();
    let mut out = Vec::new();
    for m in 2..=max_weight {
        for dp in 1..=m / 2 {
            for (i, p) in words[dp].iter().enumerate() {
                let start = if 2 * dp == m { i } else { 0 };
                for r in &words[m - dp][start..] {
                    out.push((p.clone(), r.clone()));
                }
            }
        }
    }
    out
}

/// Bound on `|ab - a'b'|` from bounds on `|a - a'|` and `|b - b'|`.
fn product_bound(a: &EvalResult<f64>, b: &EvalResult<f64>) -> f64 {
    a.value.abs() * b.tail_bound + b.value.abs() * a.tail_bound + a.tail_bound * b.tail_bound
}

/// `Z_q(w o w') = Z_q(w) Z_q(w')` for all word pairs up to `max_weight`.
pub fn check_product_theorem(
    kind: ProductKind,
    max_weight: usize,
    ctx: &QContext<f64>,
) -> Result<CheckSummary> {
    let mut products = Products::new();
    let mut summary = CheckSummary::new(format!("{kind} product theorem (weight <= {max_weight})"));
    for (p, r) in word_pairs(max_weight) {
        let pe = AElement::from_word(p.clone());
        let re = AElement::from_word(r.clone());
        let prod = products.apply(kind, &pe, &re)?;
        let zp = z_q(&pe, ctx)?;
        let zr = z_q(&re, ctx)?;
        let zprod = z_q(&prod, ctx)?;
        let defect = (zprod.value - zp.value * zr.value).abs();
        let allowed = ctx.tolerance + zprod.tail_bound + product_bound(&zp, &zr);
        summary.record(|| format!("{p} , {r}"), defect, allowed);
    }
    Ok(summary)
}

/// `Zbar_q` of every generator family element of weight `d` vanishes.
pub fn check_generators(
    gens: &mut Generators,
    d: usize,
    hbar_lifts: bool,
    ctx: &QContext<f64>,
) -> Result<Vec<CheckSummary>> {
    let mut ds = CheckSummary::new(format!("double shuffle generators (weight {d})"));
    for g in gens.double_shuffle(d)? {
        let r = zbar_q(&g, ctx)?;
        ds.record(|| g.to_string(), r.value.abs(), ctx.tolerance + r.tail_bound);
    }
    let mut rs = CheckSummary::new(format!("resummation generators (weight {d})"));
    for g in gens.resummation(d, hbar_lifts) {
        let r = zbar_q(&g, ctx)?;
        rs.record(|| g.to_string(), r.value.abs(), ctx.tolerance + r.tail_bound);
    }
    Ok(vec![ds, rs])
}

/// Each relation row evaluates to zero on the modified qMZVs.
pub fn check_relations(basis: &RelationBasis, ctx: &QContext<f64>) -> Result<CheckSummary> {
    let report = verify_numeric(basis, ctx)?;
    let mut summary = CheckSummary::new(format!(
        "relation rows (weight {}, dimension {})",
        basis.weight,
        basis.dimension()
    ));
    for (i, row) in report.rows.iter().enumerate() {
        summary.record(
            || format!("row {i}: {}", basis.row_element(i)),
            row.value.abs(),
            ctx.tolerance + row.tail_bound,
        );
    }
    Ok(summary)
}
