//! Membership in the standard submodules of the A-algebra.

use std::fmt;
use std::str::FromStr;

use crate::element::AElement;
use crate::error::Error;
use crate::word::{ALetter, AWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// Constants plus words starting with `xi` or `z_k`, `k >= 2`.
    H0Hat,
    /// Constants plus index words `z_k1 ... z_kr` with `k1 >= 2`.
    H0,
    /// Words starting with `xi` or `z_k`, `k >= 2`; no constant term.
    H0Tilde,
    /// Constants plus words starting with some `z_k`.
    Hge1,
    /// Constants plus words starting with `z_k`, `k >= 2`.
    Hge2,
}

impl Space {
    pub fn contains_word(self, w: &AWord) -> bool {
        let first = w.first();
        match self {
            Space::H0Hat => w.is_admissible_start(),
            Space::H0 => w.is_index_word(),
            Space::H0Tilde => first.is_some_and(ALetter::is_admissible_start),
            Space::Hge1 => !matches!(first, Some(ALetter::Xi)),
            Space::Hge2 => first.is_none_or(|l| matches!(l, ALetter::Z(k) if k >= 2)),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::H0Hat => "H0hat",
            Space::H0 => "H0",
            Space::H0Tilde => "H0tilde",
            Space::Hge1 => "Hge1",
            Space::Hge2 => "Hge2",
        })
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "H0hat" => Space::H0Hat,
            "H0" => Space::H0,
            "H0tilde" => Space::H0Tilde,
            "Hge1" => Space::Hge1,
            "Hge2" => Space::Hge2,
            other => return Err(Error::InvalidParameter(format!("unknown space `{other}`"))),
        })
    }
}

impl AElement {
    /// Whether every term lies in `space`.
    pub fn lies_in(&self, space: Space) -> bool {
        self.terms().all(|(w, _)| space.contains_word(w))
    }

    /// The first term outside `space`, if any.
    pub fn first_outside(&self, space: Space) -> Option<&AWord> {
        self.terms()
            .map(|(w, _)| w)
            .find(|w| !space.contains_word(w))
    }
}
