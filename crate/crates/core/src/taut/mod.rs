//! Polynomials in the Euler class e and the classes κᵢ with coefficients that
//! may involve formal parameters; fibre integration, the coproduct for which
//! the κᵢ are primitive, pairings against functionals, and a relation ledger.

mod coproduct;
mod ledger;
mod parse;

pub use coproduct::{discard_above, nfold_coproduct, pair_tensor, restrict, HomologyFunctional, SlotPattern, TensorTerm};
pub use ledger::{deduce_h43_kernel, Fact, H43Report, H43Status, Ledger, Relation, R12};
pub use parse::parse_taut;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::exactla::fmt_rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TautError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("genus must be nonnegative, got {0}")]
    NegativeGenus(i64),
    #[error("the Euler class cannot appear here")]
    EulerClassPresent,
    #[error("need at least {0} tensor factors")]
    TooFewSlots(usize),
    #[error("{terms} slots in the tensor terms but {functionals} functionals")]
    SlotCount { terms: usize, functionals: usize },
    #[error("degree mismatch: term of degree {term} against functionals of total degree {functionals}")]
    DegreeMismatch { term: u32, functionals: u32 },
    #[error("functional `{0}` mixes degrees")]
    MixedFunctional(String),
    #[error("relation `{0}` is not homogeneous")]
    InhomogeneousRelation(String),
    #[error("ledger has no entries at genus {0}")]
    MissingLedger(u32),
    #[error("{0}")]
    Invalid(String),
}

fn superscript(n: u32) -> String {
    const D: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| D[c.to_digit(10).unwrap() as usize]).collect()
}

fn subscript(n: u32) -> String {
    const D: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string().chars().map(|c| D[c.to_digit(10).unwrap() as usize]).collect()
}

fn power(base: &str, e: u32) -> String {
    if e == 1 {
        base.to_string()
    } else {
        format!("{base}{}", superscript(e))
    }
}

/// Monomial in named parameters.
pub type ParamMono = BTreeMap<String, u32>;

/// Polynomial in formal parameters with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMono, BigRational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = ParamPoly::zero();
        p.add_term(ParamMono::new(), c);
        p
    }

    pub fn integer(n: i64) -> Self {
        ParamPoly::constant(BigRational::from_integer(n.into()))
    }

    pub fn param(name: &str) -> Self {
        let mut p = ParamPoly::zero();
        p.add_term(BTreeMap::from([(name.to_string(), 1)]), BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<ParamMono, BigRational> {
        &self.terms
    }

    pub fn add_term(&mut self, m: ParamMono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut m = a.clone();
                for (k, e) in b {
                    *m.entry(k.clone()).or_insert(0) += e;
                }
                out.add_term(m, x * y);
            }
        }
        out
    }

    /// The constant if no parameter occurs.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&ParamMono::new()).cloned(),
            _ => None,
        }
    }

    /// Coefficient of a parameter in a polynomial of degree ≤ 1, and the constant term.
    pub fn linear_coefficient(&self, name: &str) -> Option<BigRational> {
        let key = BTreeMap::from([(name.to_string(), 1)]);
        Some(self.terms.get(&key).cloned().unwrap_or_else(BigRational::zero))
    }

    pub fn is_linear_in(&self, names: &[&str]) -> bool {
        self.terms.keys().all(|m| {
            m.is_empty() || (m.len() == 1 && m.values().all(|&e| e == 1) && m.keys().all(|k| names.contains(&k.as_str())))
        })
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // Highest total degree first, then by name.
        let mut entries: Vec<(&ParamMono, &BigRational)> = self.terms.iter().collect();
        entries.sort_by(|a, b| b.0.values().sum::<u32>().cmp(&a.0.values().sum::<u32>()).then(a.0.cmp(b.0)));
        for (m, c) in entries {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "−")?;
                }
            } else {
                write!(f, " {} ", if neg { "−" } else { "+" })?;
            }
            first = false;
            let abs = c.abs();
            // Higher powers first, so u³t² reads as in hand computations.
            let mut factors: Vec<(&String, &u32)> = m.iter().collect();
            factors.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
            let body: Vec<String> = factors.iter().map(|(k, e)| power(k, **e)).collect();
            if body.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", body.join("·"))?;
            } else {
                write!(f, "{}·{}", fmt_rational(&abs), body.join("·"))?;
            }
        }
        Ok(())
    }
}

impl Serialize for ParamPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Ring variables: the Euler class, κᵢ (i ≥ 1), and λ₁.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    E,
    Kappa(u32),
    Lambda1,
}

impl Var {
    pub fn degree(self) -> u32 {
        match self {
            Var::E | Var::Lambda1 => 2,
            Var::Kappa(i) => 2 * i,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::E => write!(f, "e"),
            Var::Kappa(i) => write!(f, "κ{}", subscript(*i)),
            Var::Lambda1 => write!(f, "λ₁"),
        }
    }
}

/// A monomial in the ring variables; the empty monomial is 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(pub BTreeMap<Var, u32>);

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn var(v: Var) -> Self {
        Mono::pow(v, 1)
    }

    pub fn pow(v: Var, e: u32) -> Self {
        let mut m = Mono::one();
        if e > 0 {
            m.0.insert(v, e);
        }
        m
    }

    pub fn kappa(factors: &[(u32, u32)]) -> Self {
        let mut m = Mono::one();
        for &(i, e) in factors {
            m = m.mul(&Mono::pow(Var::Kappa(i), e));
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(v, e)| v.degree() * e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.get(&v).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut m = self.clone();
        for (v, e) in &other.0 {
            *m.0.entry(*v).or_insert(0) += e;
        }
        m
    }

    pub fn without(&self, v: Var) -> Mono {
        let mut m = self.clone();
        m.0.remove(&v);
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|(v, e)| power(&v.to_string(), *e)).collect();
        write!(f, "{}", parts.join("·"))
    }
}

impl Serialize for Mono {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Polynomial in e, κᵢ, λ₁ with parameter-polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TautPoly {
    terms: BTreeMap<Mono, ParamPoly>,
}

impl TautPoly {
    pub fn zero() -> Self {
        TautPoly::default()
    }

    pub fn one() -> Self {
        TautPoly::term(Mono::one(), ParamPoly::integer(1))
    }

    pub fn term(m: Mono, c: ParamPoly) -> Self {
        let mut p = TautPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn monomial(m: Mono, c: i64) -> Self {
        TautPoly::term(m, ParamPoly::integer(c))
    }

    pub fn terms(&self) -> &BTreeMap<Mono, ParamPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Mono) -> ParamPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Mono, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        let sum = self.terms.get(&m).map(|x| x.add(&c)).unwrap_or(c);
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn add(&self, other: &TautPoly) -> TautPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TautPoly) -> TautPoly {
        self.add(&other.scale_param(&ParamPoly::integer(-1)))
    }

    pub fn scale_param(&self, c: &ParamPoly) -> TautPoly {
        let mut out = TautPoly::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &TautPoly) -> TautPoly {
        let mut out = TautPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x.mul(y));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> TautPoly {
        (0..k).fold(TautPoly::one(), |acc, _| acc.mul(self))
    }

    /// Common degree of all monomials; `None` when inhomogeneous. Zero has degree 0.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Mono::degree);
        let first = it.next().unwrap_or(0);
        it.all(|d| d == first).then_some(first)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    /// Substitute a parameter by a rational value.
    pub fn substitute(&self, name: &str, value: &BigRational) -> TautPoly {
        let mut out = TautPoly::zero();
        for (m, c) in &self.terms {
            let mut nc = ParamPoly::zero();
            for (pm, v) in c.terms() {
                let e = pm.get(name).copied().unwrap_or(0);
                let mut rest = pm.clone();
                rest.remove(name);
                let mut f = v.clone();
                for _ in 0..e {
                    f *= value;
                }
                nc.add_term(rest, f);
            }
            out.add_term(m.clone(), nc);
        }
        out
    }
}

impl fmt::Display for TautPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let text = match c.as_constant() {
                Some(q) => {
                    let neg = q.is_negative();
                    let abs = q.abs();
                    let sign = match (first, neg) {
                        (true, true) => "−".to_string(),
                        (true, false) => String::new(),
                        (false, true) => " − ".to_string(),
                        (false, false) => " + ".to_string(),
                    };
                    let body = if m.is_one() {
                        fmt_rational(&abs)
                    } else if abs.is_one() {
                        m.to_string()
                    } else {
                        format!("{}·{}", fmt_rational(&abs), m)
                    };
                    format!("{sign}{body}")
                }
                None => {
                    let sign = if first { "" } else { " + " };
                    let coeff = if c.terms().len() == 1 { c.to_string() } else { format!("({c})") };
                    if m.is_one() {
                        format!("{sign}{coeff}")
                    } else {
                        format!("{sign}{coeff}·{m}")
                    }
                }
            };
            write!(f, "{text}")?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for TautPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Fibre integration along a genus-g surface bundle: linear over polynomials
/// in κᵢ and λ₁, with e⁰ ↦ 0, e ↦ 2 − 2g, e^{i+1} ↦ κᵢ.
pub fn gysin_pushforward(p: &TautPoly, genus: i64) -> Result<TautPoly, TautError> {
    if genus < 0 {
        return Err(TautError::NegativeGenus(genus));
    }
    if p.degree().is_none() {
        return Err(TautError::NotHomogeneous);
    }
    let mut out = TautPoly::zero();
    for (m, c) in p.terms() {
        let k = m.exponent(Var::E);
        let rest = m.without(Var::E);
        match k {
            0 => {}
            1 => out.add_term(rest, c.scale(&BigRational::from_integer((2 - 2 * genus).into()))),
            _ => out.add_term(rest.mul(&Mono::var(Var::Kappa(k - 1))), c.clone()),
        }
    }
    Ok(out)
}
