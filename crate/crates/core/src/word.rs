//! Letters, words, indices and graded monomials.
//!
//! Two alphabets are in play. The A-alphabet `{xi, z1, z2, ...}` generates the
//! subalgebra that q-series are evaluated on; the X-alphabet `{x, y, r}` (with
//! `r` standing for rho) is the ambient free algebra in which the integral
//! shuffle product is defined. The two are related by `xi = y - r` and
//! `z_k = x^(k-1) y`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Common interface of the two word types, used by [`crate::Element`].
pub trait Word: Clone + Ord + Hash + fmt::Display + fmt::Debug {
    fn empty() -> Self;
    fn is_empty(&self) -> bool;
    fn degree(&self) -> usize;
    fn concat(&self, other: &Self) -> Self;
}

/// A letter of the A-alphabet. The derived order gives `xi < z1 < z2 < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ALetter {
    Xi,
    Z(u32),
}

impl ALetter {
    pub fn degree(self) -> usize {
        match self {
            ALetter::Xi => 1,
            ALetter::Z(k) => k as usize,
        }
    }

    /// `xi` or `z_k` with `k >= 2`: the letters a convergent word may start with.
    pub fn is_admissible_start(self) -> bool {
        !matches!(self, ALetter::Z(1))
    }
}

impl fmt::Display for ALetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ALetter::Xi => write!(f, "xi"),
            ALetter::Z(k) => write!(f, "z{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum XLetter {
    X,
    Y,
    Rho,
}

impl fmt::Display for XLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            XLetter::X => "x",
            XLetter::Y => "y",
            XLetter::Rho => "r",
        })
    }
}

/// A word over the A-alphabet; the empty word is the unit.
///
/// Ordered graded-lexicographically: by degree, then letter by letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AWord(pub Vec<ALetter>);

impl AWord {
    pub fn new(letters: Vec<ALetter>) -> Self {
        AWord(letters)
    }

    pub fn letters(&self) -> &[ALetter] {
        &self.0
    }

    pub fn first(&self) -> Option<ALetter> {
        self.0.first().copied()
    }

    /// The word with its first letter removed.
    pub fn tail(&self) -> AWord {
        AWord(self.0.get(1..).unwrap_or_default().to_vec())
    }

    pub fn prepend(&self, letter: ALetter) -> AWord {
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.0);
        AWord(letters)
    }

    /// Word of the Z-letters of an index.
    pub fn from_index(index: &Index) -> AWord {
        AWord(index.parts().iter().map(|&k| ALetter::Z(k)).collect())
    }

    pub fn to_index(&self) -> Result<Index> {
        self.0
            .iter()
            .map(|l| match l {
                ALetter::Z(k) => Ok(*k),
                ALetter::Xi => Err(Error::NotAnIndexWord {
                    word: self.to_string(),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Index::new_unchecked)
    }

    /// Empty, or starting with `xi` or `z_k` (`k >= 2`).
    pub fn is_admissible_start(&self) -> bool {
        self.first().is_none_or(ALetter::is_admissible_start)
    }

    /// Empty, or an index word starting with `z_k` (`k >= 2`).
    pub fn is_index_word(&self) -> bool {
        self.0.iter().all(|l| matches!(l, ALetter::Z(_))) && self.is_admissible_start()
    }

    /// All words of the given degree, in canonical order.
    pub fn all_of_degree(degree: usize) -> Vec<AWord> {
        fn go(rest: usize, prefix: &mut Vec<ALetter>, out: &mut Vec<AWord>) {
            if rest == 0 {
                out.push(AWord(prefix.clone()));
                return;
            }
            prefix.push(ALetter::Xi);
            go(rest - 1, prefix, out);
            prefix.pop();
            for k in 1..=rest {
                prefix.push(ALetter::Z(k as u32));
                go(rest - k, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(degree, &mut Vec::new(), &mut out);
        out
    }

    /// Nonempty words of the given degree starting with `xi` or `z_k`, `k >= 2`.
    pub fn admissible_of_degree(degree: usize) -> Vec<AWord> {
        if degree == 0 {
            return Vec::new();
        }
        Self::all_of_degree(degree)
            .into_iter()
            .filter(AWord::is_admissible_start)
            .collect()
    }
}

impl Word for AWord {
    fn empty() -> Self {
        AWord(Vec::new())
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.iter().map(|l| l.degree()).sum()
    }

    fn concat(&self, other: &Self) -> Self {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        AWord(letters)
    }
}

impl Ord for AWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for AWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A word over `{x, y, r}`, ordered by length and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct XWord(pub Vec<XLetter>);

impl XWord {
    pub fn new(letters: Vec<XLetter>) -> Self {
        XWord(letters)
    }

    pub fn letters(&self) -> &[XLetter] {
        &self.0
    }

    pub fn prepend(&self, letter: XLetter) -> XWord {
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.0);
        XWord(letters)
    }
}

impl Word for XWord {
    fn empty() -> Self {
        XWord(Vec::new())
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len()
    }

    fn concat(&self, other: &Self) -> Self {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        XWord(letters)
    }
}

impl Ord for XWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for XWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for XWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A composition `(k_1, ..., k_r)` of positive integers. Admissible when
/// empty or `k_1 >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Index(Vec<u32>);

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "index parts must be positive: {parts:?}"
            )));
        }
        Ok(Index(parts))
    }

    fn new_unchecked(parts: Vec<u32>) -> Self {
        Index(parts)
    }

    pub fn empty() -> Self {
        Index(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    pub fn is_admissible(&self) -> bool {
        self.0.first().is_none_or(|&k| k >= 2)
    }

    /// Parses `"2,1"`; the empty string is the empty index.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim().trim_start_matches('(').trim_end_matches(')');
        if text.trim().is_empty() {
            return Ok(Index::empty());
        }
        let parts = text
            .split(',')
            .map(|p| {
                p.trim().parse::<u32>().map_err(|_| Error::Parse {
                    position: 0,
                    message: format!("invalid index part `{p}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Index::new(parts)
    }

    /// All admissible indices of weight exactly `weight` (`weight >= 2`),
    /// ordered like their words.
    pub fn admissible_of_weight(weight: usize) -> Vec<Index> {
        AWord::admissible_of_degree(weight)
            .into_iter()
            .filter(AWord::is_index_word)
            .map(|w| w.to_index().expect("index word"))
            .collect()
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

/// `h^hbar_power * word`, graded by total weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub hbar_power: usize,
    pub word: AWord,
}

impl Monomial {
    pub fn new(hbar_power: usize, word: AWord) -> Self {
        Monomial { hbar_power, word }
    }

    pub fn weight(&self) -> usize {
        self.hbar_power + self.word.degree()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.hbar_power, self.word.is_empty()) {
            (0, _) => write!(f, "{}", self.word),
            (1, true) => write!(f, "h"),
            (p, true) => write!(f, "h^{p}"),
            (1, false) => write!(f, "h*{}", self.word),
            (p, false) => write!(f, "h^{p}*{}", self.word),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ALetter::*;

    #[test]
    fn monomial_weights() {
        assert_eq!(Monomial::new(0, AWord(vec![Z(3), Z(1)])).weight(), 4);
        assert_eq!(Monomial::new(2, AWord(vec![Xi])).weight(), 3);
        assert_eq!(Monomial::new(5, AWord::empty()).weight(), 5);
    }

    #[test]
    fn index_conversion() {
        let k = Index::new(vec![2, 1]).unwrap();
        assert_eq!(AWord::from_index(&k), AWord(vec![Z(2), Z(1)]));
        assert_eq!(AWord::from_index(&Index::empty()), AWord::empty());
        assert_eq!(AWord(vec![Z(2), Z(1)]).to_index().unwrap(), k);
        assert!(matches!(
            AWord(vec![Xi, Z(1)]).to_index(),
            Err(Error::NotAnIndexWord { .. })
        ));
    }

    #[test]
    fn index_text_and_admissibility() {
        assert_eq!(Index::parse("2,1").unwrap().to_string(), "2,1");
        assert_eq!(Index::parse("").unwrap(), Index::empty());
        assert!(Index::parse("2,0").is_err());
        assert!(Index::parse("3").unwrap().is_admissible());
        assert!(!Index::parse("1,2").unwrap().is_admissible());
        assert!(Index::empty().is_admissible());
    }

    /// Independent count by dynamic programming over the first letter.
    fn count_admissible(m: usize) -> u64 {
        // all[n] = number of words of degree n; xi and z1 both have degree 1
        let mut all = vec![0u64; m + 1];
        all[0] = 1;
        for n in 1..=m {
            all[n] = 2 * all[n - 1] + (2..=n).map(|k| all[n - k]).sum::<u64>();
        }
        all[m - 1] + (2..=m).map(|k| all[m - k]).sum::<u64>()
    }

    #[test]
    fn admissible_word_counts() {
        let expected = [1, 3, 8, 21, 55, 144, 377];
        for (m, &n) in (1..=7).zip(expected.iter()) {
            assert_eq!(AWord::admissible_of_degree(m).len(), n, "degree {m}");
            assert_eq!(count_admissible(m), n as u64);
        }
    }

    #[test]
    fn admissible_index_counts() {
        // weight exactly d: 2^(d-2)
        for d in 2..=7 {
            assert_eq!(Index::admissible_of_weight(d).len(), 1 << (d - 2));
        }
    }

    #[test]
    fn graded_lex_order() {
        let mut words = [
            AWord(vec![Z(3)]),
            AWord(vec![Z(2), Z(1)]),
            AWord(vec![Xi]),
            AWord::empty(),
            AWord(vec![Xi, Xi]),
        ];
        words.sort();
        let printed: Vec<_> = words.iter().map(ToString::to_string).collect();
        assert_eq!(printed, ["1", "xi", "xi xi", "z2 z1", "z3"]);
    }
}
