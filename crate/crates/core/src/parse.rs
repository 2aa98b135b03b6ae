//! Text syntax for coefficients and elements.
//!
//! ```text
//! element := term (('+' | '-') term)*
//! term    := factor ('*' factor)*        -- at most one word, and it comes last
//! factor  := rational | 'h' ['^' int] | word
//! word    := letter (whitespace letter)*
//! letter  := 'x' | 'y' | 'r' | 'xi' | 'z' int
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{HPoly, Rational};
use crate::element::{AElement, XElement};
use crate::error::{Error, Result};
use crate::word::{ALetter, AWord, XLetter, XWord};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Num(n)));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(Error::Parse {
                    position: start,
                    message: format!("unexpected character `{}`", c as char),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

/// A parsed letter of either alphabet.
#[derive(Clone, Copy, Debug)]
enum AnyLetter {
    A(ALetter),
    X(XLetter),
}

fn letter(ident: &str, position: usize) -> Result<Option<AnyLetter>> {
    Ok(Some(match ident {
        "h" => return Ok(None),
        "x" => AnyLetter::X(XLetter::X),
        "y" => AnyLetter::X(XLetter::Y),
        "r" => AnyLetter::X(XLetter::Rho),
        "xi" => AnyLetter::A(ALetter::Xi),
        z if z.starts_with('z') => {
            let k: u32 = z[1..].parse().map_err(|_| Error::Parse {
                position,
                message: format!("invalid letter `{z}`"),
            })?;
            if k == 0 {
                return Err(Error::Parse {
                    position,
                    message: "z_k needs k >= 1".into(),
                });
            }
            AnyLetter::A(ALetter::Z(k))
        }
        other => {
            return Err(Error::Parse {
                position,
                message: format!("unknown letter `{other}`"),
            })
        }
    }))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

/// One signed term: coefficient and the letters of its word.
type RawTerm = (HPoly, Vec<(usize, AnyLetter)>);

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn expect_num(&mut self) -> Result<BigInt> {
        match self.toks.get(self.pos) {
            Some((_, Tok::Num(n))) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected a number"),
        }
    }

    fn element(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let (coeff, word) = self.term()?;
            let coeff = if sign < 0 { -&coeff } else { coeff };
            terms.push((coeff, word));
            match self.peek() {
                None => break,
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                Some(_) => return self.err("expected `+` or `-`"),
            }
            self.pos += 1;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut scalar = Rational::one();
        let mut hbar = 0usize;
        let mut word = Vec::new();
        loop {
            match self.toks.get(self.pos).cloned() {
                Some((_, Tok::Num(_))) => {
                    let p = self.expect_num()?;
                    let q = if self.peek() == Some(&Tok::Slash) {
                        self.pos += 1;
                        let q = self.expect_num()?;
                        if q.is_zero() {
                            return self.err("zero denominator");
                        }
                        q
                    } else {
                        BigInt::one()
                    };
                    scalar *= Rational::new(p, q);
                }
                Some((at, Tok::Ident(id))) => match letter(&id, at)? {
                    None => {
                        self.pos += 1;
                        if self.peek() == Some(&Tok::Caret) {
                            self.pos += 1;
                            let k = self.expect_num()?;
                            let k: usize = k.try_into().map_err(|_| Error::Parse {
                                position: at,
                                message: "exponent too large".into(),
                            })?;
                            hbar += k;
                        } else {
                            hbar += 1;
                        }
                    }
                    Some(_) => {
                        while let Some((at, Tok::Ident(id))) = self.toks.get(self.pos).cloned() {
                            match letter(&id, at)? {
                                Some(l) => word.push((at, l)),
                                None => return self.err("`h` must precede the word"),
                            }
                            self.pos += 1;
                        }
                        break;
                    }
                },
                _ => return self.err("expected a coefficient or a word"),
            }
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((HPoly::monomial(scalar, hbar), word))
    }
}

fn parse_raw(text: &str) -> Result<Vec<RawTerm>> {
    let mut p = Parser::new(text)?;
    if p.toks.is_empty() {
        return p.err("empty expression");
    }
    p.element()
}

pub fn parse_hpoly(text: &str) -> Result<HPoly> {
    let mut out = HPoly::zero();
    for (c, word) in parse_raw(text)? {
        if let Some((at, _)) = word.first() {
            return Err(Error::Parse {
                position: *at,
                message: "letters are not allowed in a coefficient".into(),
            });
        }
        out += &c;
    }
    Ok(out)
}

pub fn parse_a_element(text: &str) -> Result<AElement> {
    let mut out = AElement::zero();
    for (c, word) in parse_raw(text)? {
        let letters = word
            .into_iter()
            .map(|(at, l)| match l {
                AnyLetter::A(a) => Ok(a),
                AnyLetter::X(x) => Err(Error::Parse {
                    position: at,
                    message: format!("`{x}` is not in the xi/z alphabet"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        out.add_term(AWord(letters), &c);
    }
    Ok(out)
}

pub fn parse_x_element(text: &str) -> Result<XElement> {
    let mut out = XElement::zero();
    for (c, word) in parse_raw(text)? {
        let letters = word
            .into_iter()
            .map(|(at, l)| match l {
                AnyLetter::X(x) => Ok(x),
                AnyLetter::A(a) => Err(Error::Parse {
                    position: at,
                    message: format!("`{a}` is not in the x/y/r alphabet"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        out.add_term(XWord(letters), &c);
    }
    Ok(out)
}

/// Either kind of element, decided by the letters that appear.
#[derive(Clone, Debug, PartialEq)]
pub enum ParsedElement {
    A(AElement),
    X(XElement),
}

pub fn parse_element(text: &str) -> Result<ParsedElement> {
    let raw = parse_raw(text)?;
    let uses_x = raw
        .iter()
        .flat_map(|(_, w)| w.iter())
        .any(|(_, l)| matches!(l, AnyLetter::X(_)));
    if uses_x {
        parse_x_element(text).map(ParsedElement::X)
    } else {
        parse_a_element(text).map(ParsedElement::A)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    #[test]
    fn parses_mixed_terms() {
        let e = parse_a_element("z2 z1 + h*xi").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.coeff(&AWord(vec![ALetter::Z(2), ALetter::Z(1)])), HPoly::one());
        assert_eq!(e.coeff(&AWord(vec![ALetter::Xi])), HPoly::hbar());
    }

    #[test]
    fn parses_x_words() {
        match parse_element("x y r").unwrap() {
            ParsedElement::X(e) => {
                assert_eq!(
                    e,
                    XElement::from_word(XWord(vec![XLetter::X, XLetter::Y, XLetter::Rho]))
                );
            }
            other => panic!("expected an X element, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_a_element("z0"), Err(Error::Parse { .. })));
        assert!(parse_a_element("").is_err());
        assert!(parse_a_element("z2 +").is_err());
        assert!(parse_a_element("x y").is_err());
        assert!(parse_a_element("2 3").is_err());
        assert!(parse_a_element("1/0*z2").is_err());
        match parse_a_element("z2 + q") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coefficients() {
        let e = parse_a_element("-3/4*h^2*z2 + h*h*xi + 2").unwrap();
        assert_eq!(
            e.coeff(&AWord(vec![ALetter::Z(2)])),
            HPoly::monomial(rational(-3, 4), 2)
        );
        assert_eq!(e.coeff(&AWord(vec![ALetter::Xi])), HPoly::monomial(rational(1, 1), 2));
        assert_eq!(e.coeff(&AWord::default()), HPoly::from_int(2));
        assert_eq!(parse_hpoly("1 - 2*h + 3/4*h^2").unwrap().to_string(), "1 - 2*h + 3/4*h^2");
    }
}
