//! Free graded Lie algebras with a bracket of degree +1, free Gerstenhaber
//! algebras over ℚ, top-operation towers over 𝔽₂, and slope certification.
//!
//! Sign convention: with shifted degree s = d + 1 the bracket is an ordinary
//! graded Lie bracket, `[x,y] = −(−1)^{s(x)s(y)}[y,x]`. Inside the tensor
//! algebra it is realized as `[a,b] = ab − (−1)^{s(a)s(b)} ba`.

mod betti;
mod certify;
mod cohen;
mod lie;

pub use betti::{betti_table_f2, count_free_commutative, free_gerstenhaber_betti, BettiTable};
pub use certify::{slope_certify, OperationSignature, SlopeCertificate};
pub use cohen::{cohen_generators_f2, CohenGenerator};
pub use lie::{
    free_graded_lie_basis, lie_basis_without_squares, lyndon_words, LieBasis, LiePoly, LieTree, LieWord,
};

use std::collections::HashSet;

use serde::Serialize;

use crate::exactla::LaError;
use crate::grading::Bidegree;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeAlgError {
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("generator `{0}` must have genus at least 1")]
    GenusZero(String),
    #[error("invalid generator name `{0}`")]
    BadName(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("box bounds must be at least 1")]
    EmptyBox,
    #[error("malformed operation signature `{0}`: need m ≥ 1 and a ≥ 0")]
    BadSignature(String),
    #[error("element is not in the span of the Lie basis in the box")]
    NotInSpan,
    #[error(transparent)]
    La(#[from] LaError),
}

/// A named bigraded generator with filtration weight `r` (default `d`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Generator {
    pub name: String,
    pub g: u32,
    pub d: u32,
    pub r: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, g: u32, d: u32) -> Self {
        Generator {
            name: name.into(),
            g,
            d,
            r: d,
        }
    }

    pub fn weighted(name: impl Into<String>, g: u32, d: u32, r: u32) -> Self {
        Generator {
            name: name.into(),
            g,
            d,
            r,
        }
    }

    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.g, self.d)
    }

    /// Parity of the shifted degree d + 1.
    pub fn shifted_parity(&self) -> u32 {
        (self.d + 1) % 2
    }
}

/// Validate a generator list: unique names, positive genus.
pub fn validate_generators(gens: &[Generator]) -> Result<(), FreeAlgError> {
    let mut seen = HashSet::new();
    for g in gens {
        if g.name.is_empty() || g.name.chars().any(char::is_whitespace) {
            return Err(FreeAlgError::BadName(g.name.clone()));
        }
        if !seen.insert(g.name.as_str()) {
            return Err(FreeAlgError::DuplicateName(g.name.clone()));
        }
        if g.g == 0 {
            return Err(FreeAlgError::GenusZero(g.name.clone()));
        }
    }
    Ok(())
}

/// Parse a generator file: one `name g d [r]` per line, `#` comments.
pub fn parse_generators(text: &str) -> Result<Vec<Generator>, FreeAlgError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 && toks.len() != 4 {
            return Err(FreeAlgError::Parse {
                line: i + 1,
                msg: format!("expected `name g d [r]`, got `{line}`"),
            });
        }
        let num = |t: &str| {
            t.parse::<u32>().map_err(|_| FreeAlgError::Parse {
                line: i + 1,
                msg: format!("`{t}` is not a nonnegative integer"),
            })
        };
        let (g, d) = (num(toks[1])?, num(toks[2])?);
        let r = if toks.len() == 4 { num(toks[3])? } else { d };
        out.push(Generator::weighted(toks[0], g, d, r));
    }
    validate_generators(&out)?;
    Ok(out)
}

/// Box of bidegrees 0 ≤ g ≤ g_max, 0 ≤ d ≤ d_max.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BoxBounds {
    pub g_max: u32,
    pub d_max: u32,
}

impl BoxBounds {
    pub const fn new(g_max: u32, d_max: u32) -> Self {
        BoxBounds { g_max, d_max }
    }

    pub fn contains(&self, bd: Bidegree) -> bool {
        bd.g <= self.g_max && bd.d <= self.d_max
    }

    fn check(&self) -> Result<(), FreeAlgError> {
        if self.g_max < 1 || self.d_max < 1 {
            Err(FreeAlgError::EmptyBox)
        } else {
            Ok(())
        }
    }
}

impl std::str::FromStr for BoxBounds {
    type Err = crate::grading::GradingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let b: Bidegree = s.parse()?;
        Ok(BoxBounds::new(b.g, b.d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_generator_file() {
        let gens = parse_generators("# cells\nsigma 1 0\nrho 2 2 1\n").unwrap();
        assert_eq!(gens[0], Generator::weighted("sigma", 1, 0, 0));
        assert_eq!(gens[1].r, 1);
        assert!(matches!(parse_generators("a 1 0\na 2 1"), Err(FreeAlgError::DuplicateName(_))));
        assert!(matches!(parse_generators("a 0 0"), Err(FreeAlgError::GenusZero(_))));
    }
}
