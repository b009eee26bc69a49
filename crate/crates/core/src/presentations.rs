//! Finitely presented groups and their abelianizations.
//!
//! Presentation files have lines `gens: a b` and `rel: a b a B A B`; a
//! capitalised generator is its inverse, `a^k` is a power, and when every
//! generator is a single letter a relator may be written solid (`abaBAB`).
//! Abelian presentation files (`.abel`) list integer relations
//! instead: `gens: x y`, `rel: 10 x - 3 y`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exactla::{smith_normal_form, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed relator word: {0}")]
    MalformedWord(String),
    #[error("relations appear before a `gens:` line")]
    MissingGenerators,
}

/// A letter gᵏ of a relator word.
pub type Letter = (usize, i64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Vec<Letter>>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Vec<Letter>>) -> Result<Self, PresentationError> {
        for r in &relators {
            if let Some(&(g, _)) = r.iter().find(|(g, _)| *g >= generators.len()) {
                return Err(PresentationError::UnknownGenerator(format!("#{g}")));
            }
        }
        Ok(Presentation { generators, relators })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Vec<Letter>] {
        &self.relators
    }

    /// Parses a relator such as `a b a B A B`, `a^2 b^-1` or `abaBAB`.
    pub fn parse_word(generators: &[String], word: &str) -> Result<Vec<Letter>, PresentationError> {
        let single = generators.iter().all(|g| g.chars().count() == 1);
        let mut out = Vec::new();
        for token in word.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (base, power) = match token.split_once('^') {
                Some((b, p)) => {
                    let p: i64 = p.parse().map_err(|_| PresentationError::MalformedWord(format!("bad exponent in `{token}`")))?;
                    (b, p)
                }
                None => (token, 1),
            };
            if let Some(letter) = lookup(generators, base) {
                out.push((letter.0, letter.1 * power));
            } else if single && power == 1 {
                for c in base.chars() {
                    let l = lookup(generators, &c.to_string()).ok_or_else(|| PresentationError::UnknownGenerator(c.to_string()))?;
                    out.push(l);
                }
            } else if single {
                // `abA^2`: the exponent binds to the last letter.
                let chars: Vec<char> = base.chars().collect();
                for (i, c) in chars.iter().enumerate() {
                    let (g, e) = lookup(generators, &c.to_string()).ok_or_else(|| PresentationError::UnknownGenerator(c.to_string()))?;
                    out.push((g, if i + 1 == chars.len() { e * power } else { e }));
                }
            } else {
                return Err(PresentationError::UnknownGenerator(base.to_string()));
            }
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut generators: Option<Vec<String>> = None;
        let mut relators = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| PresentationError::Parse { line: lineno + 1, msg };
            if let Some(rest) = line.strip_prefix("gens:") {
                let gens: Vec<String> = rest.split_whitespace().map(String::from).collect();
                for g in &gens {
                    if !g.chars().next().is_some_and(char::is_lowercase) || !g.chars().all(char::is_alphanumeric) {
                        return Err(err(format!("generator `{g}` must be alphanumeric and start lowercase")));
                    }
                }
                generators = Some(gens);
            } else if let Some(rest) = line.strip_prefix("rel:") {
                let gens = generators.as_ref().ok_or(PresentationError::MissingGenerators)?;
                relators.push(Self::parse_word(gens, rest).map_err(|e| err(e.to_string()))?);
            } else {
                return Err(err(format!("expected `gens:` or `rel:`, found `{line}`")));
            }
        }
        Presentation::new(generators.ok_or(PresentationError::MissingGenerators)?, relators)
    }

    /// Relators × generators matrix of exponent sums.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let rows = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::zero(); self.generators.len()];
                for &(g, e) in r {
                    row[g] += e;
                }
                row
            })
            .collect();
        IntMatrix::from_rows(self.generators.len(), rows).expect("rows have one entry per generator")
    }

    pub fn abelianization(&self) -> AbelianInvariants {
        AbelianInvariants::of_relation_matrix(&self.exponent_matrix())
    }

    pub fn format_word(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = word
            .iter()
            .map(|&(g, e)| match e {
                1 => self.generators[g].clone(),
                -1 => capitalise(&self.generators[g]),
                e => format!("{}^{e}", self.generators[g]),
            })
            .collect();
        parts.join(" ")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("gens: {}\n", self.generators.join(" "));
        for r in &self.relators {
            out.push_str(&format!("rel: {}\n", self.format_word(r)));
        }
        out
    }
}

fn capitalise(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

fn lookup(generators: &[String], token: &str) -> Option<Letter> {
    if let Some(i) = generators.iter().position(|g| g == token) {
        return Some((i, 1));
    }
    generators.iter().position(|g| capitalise(g) == token).map(|i| (i, -1))
}

/// A finitely generated abelian group ℤ^r ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k with d₁ | d₂ | ….
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(serialize_with = "crate::ser::bigints")]
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    /// The cokernel of the relation matrix (rows are relations).
    pub fn of_relation_matrix(m: &IntMatrix) -> Self {
        let snf = smith_normal_form(m);
        AbelianInvariants {
            free_rank: m.cols() - snf.invariant_factors.len(),
            torsion: snf.invariant_factors.into_iter().map(|d| d.abs()).filter(|d| !d.is_one()).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.free_rank + self.torsion.len() <= 1
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// An abelian group given by generators and integer linear relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<Vec<BigInt>>,
}

impl AbelianPresentation {
    /// Parses `gens: x y` and `rel: 10 x - 3 y` lines (`10x` also works).
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut generators: Option<Vec<String>> = None;
        let mut relations = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| PresentationError::Parse { line: lineno + 1, msg };
            if let Some(rest) = line.strip_prefix("gens:") {
                generators = Some(rest.split_whitespace().map(String::from).collect());
            } else if let Some(rest) = line.strip_prefix("rel:") {
                let gens = generators.as_ref().ok_or(PresentationError::MissingGenerators)?;
                relations.push(parse_linear(gens, rest).map_err(err)?);
            } else {
                return Err(err(format!("expected `gens:` or `rel:`, found `{line}`")));
            }
        }
        Ok(AbelianPresentation {
            generators: generators.ok_or(PresentationError::MissingGenerators)?,
            relations,
        })
    }

    pub fn relation_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.generators.len(), self.relations.clone()).expect("rows have one entry per generator")
    }

    pub fn invariants(&self) -> AbelianInvariants {
        AbelianInvariants::of_relation_matrix(&self.relation_matrix())
    }
}

impl From<&Presentation> for AbelianPresentation {
    fn from(p: &Presentation) -> Self {
        let m = p.exponent_matrix();
        AbelianPresentation {
            generators: p.generators.clone(),
            relations: (0..m.rows()).map(|r| m.row(r).to_vec()).collect(),
        }
    }
}

fn parse_linear(generators: &[String], expr: &str) -> Result<Vec<BigInt>, String> {
    let mut row = vec![BigInt::zero(); generators.len()];
    let spaced = expr.replace('+', " + ").replace('-', " - ");
    let mut sign = 1i64;
    let mut coeff: Option<BigInt> = None;
    let mut expecting_term = true;
    for tok in spaced.split_whitespace().flat_map(split_number) {
        match tok.as_str() {
            "+" | "-" => {
                if coeff.is_some() {
                    return Err(format!("dangling coefficient in `{}`", expr.trim()));
                }
                if tok == "-" {
                    sign = -sign;
                }
                expecting_term = true;
            }
            t if t.chars().all(|c| c.is_ascii_digit()) => {
                if coeff.is_some() || !expecting_term {
                    return Err(format!("unexpected number `{t}`"));
                }
                coeff = Some(t.parse().unwrap());
            }
            t => {
                let g = generators.iter().position(|g| g == t).ok_or_else(|| format!("unknown generator `{t}`"))?;
                if !expecting_term {
                    return Err(format!("missing operator before `{t}`"));
                }
                row[g] += coeff.take().unwrap_or_else(BigInt::one) * sign;
                sign = 1;
                expecting_term = false;
            }
        }
    }
    if coeff.is_some() || (expecting_term && row.iter().any(|x| !x.is_zero())) {
        return Err(format!("incomplete relation `{}`", expr.trim()));
    }
    Ok(row)
}

/// `10x` → ["10", "x"].
fn split_number(tok: &str) -> Vec<String> {
    let digits: String = tok.chars().take_while(char::is_ascii_digit).collect();
    if digits.is_empty() || digits.len() == tok.len() {
        vec![tok.to_string()]
    } else {
        vec![digits.clone(), tok[digits.len()..].to_string()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(p: &str) -> String {
        Presentation::parse(p).unwrap().abelianization().to_string()
    }

    #[test]
    fn words() {
        let gens = vec!["a".to_string(), "b".to_string()];
        assert_eq!(
            Presentation::parse_word(&gens, "a b a B A B").unwrap(),
            Presentation::parse_word(&gens, "abaBAB").unwrap()
        );
        assert_eq!(Presentation::parse_word(&gens, "a^3 b^-2").unwrap(), vec![(0, 3), (1, -2)]);
        assert_eq!(Presentation::parse_word(&gens, "abA^2").unwrap(), vec![(0, 1), (1, 1), (0, -2)]);
        assert!(Presentation::parse_word(&gens, "c").is_err());
        assert!(Presentation::parse_word(&gens, "a^x").is_err());
    }

    #[test]
    fn small_groups() {
        assert_eq!(inv("gens: a b\nrel: a b a B A B"), "Z");
        assert_eq!(inv("gens: t\nrel: t^10"), "Z/10");
        assert_eq!(inv("gens: a b"), "Z^2");
        assert_eq!(inv("gens: a b\nrel: a^2\nrel: b^3"), "Z/6");
        assert_eq!(inv("gens: a\nrel: a"), "0");
    }

    #[test]
    fn exponent_sums() {
        let p = Presentation::parse("gens: a\nrel: a a a").unwrap();
        assert_eq!(p.exponent_matrix(), IntMatrix::from_i64(1, &[vec![3]]).unwrap());
        let b = Presentation::parse("gens: a b\nrel: a b a B A B").unwrap();
        assert_eq!(b.exponent_matrix(), IntMatrix::from_i64(2, &[vec![1, -1]]).unwrap());
        let free = Presentation::parse("gens: a b").unwrap().exponent_matrix();
        assert_eq!((free.rows(), free.cols()), (0, 2));
    }

    #[test]
    fn text_round_trip() {
        let p = Presentation::parse("gens: a b\nrel: a^3 B\nrel: 1").unwrap();
        assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn abelian_files() {
        let a = AbelianPresentation::parse("gens: x y\nrel: 10x - 3 y\nrel: y").unwrap();
        assert_eq!(a.relations[0], vec![BigInt::from(10), BigInt::from(-3)]);
        assert_eq!(a.invariants().to_string(), "Z/10");
        assert!(AbelianPresentation::parse("gens: x\nrel: 10").is_err());
        assert!(AbelianPresentation::parse("gens: x\nrel: x y").is_err());
        assert!(AbelianPresentation::parse("rel: x").is_err());
    }

    #[test]
    fn errors() {
        assert!(matches!(Presentation::parse("rel: a"), Err(PresentationError::MissingGenerators)));
        assert!(matches!(Presentation::parse("gens: a\nrel: b"), Err(PresentationError::Parse { line: 2, .. })));
        assert!(Presentation::parse("gens: A").is_err());
        assert!(Presentation::parse("gens: a\nfoo").is_err());
    }
}
