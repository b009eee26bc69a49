//! Bidegrees, slopes, vanishing lines and the inequality calculus of stability ranges.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GradingError {
    #[error("slope is undefined in genus 0")]
    GenusZero,
    #[error("slope bound must be positive, got {0}")]
    NonPositiveSlope(String),
    #[error("genus bound must be at least 1")]
    EmptyGenusRange,
    #[error("no finite genus bound exists for slope {0} (needs slope < 1)")]
    Unbounded(String),
    #[error("coefficient `{0}` must be a positive integer")]
    NonPositiveCoefficient(&'static str),
    #[error("cannot parse `{0}`")]
    Parse(String),
}

/// Lattice point (g, d): genus and homological degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub g: u32,
    pub d: u32,
}

impl Bidegree {
    pub const fn new(g: u32, d: u32) -> Self {
        Bidegree { g, d }
    }

    pub fn slope(self) -> Result<BigRational, GradingError> {
        slope(self)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.g, self.d)
    }
}

impl FromStr for Bidegree {
    type Err = GradingError;

    /// Accepts `g,d` or `(g,d)`.
    fn from_str(s: &str) -> Result<Self, GradingError> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (g, d) = t.split_once(',').ok_or_else(|| GradingError::Parse(s.into()))?;
        let g = g.trim().parse().map_err(|_| GradingError::Parse(s.into()))?;
        let d = d.trim().parse().map_err(|_| GradingError::Parse(s.into()))?;
        Ok(Bidegree { g, d })
    }
}

/// d/g in lowest terms.
pub fn slope(bd: Bidegree) -> Result<BigRational, GradingError> {
    if bd.g == 0 {
        return Err(GradingError::GenusZero);
    }
    Ok(BigRational::new(BigInt::from(bd.d), BigInt::from(bd.g)))
}

/// All (g, d) with 1 ≤ g ≤ g_max, d ≥ g − 1 and d/g ≤ high_slope, sorted by (g, d).
pub fn bidegrees_between(high_slope: &BigRational, g_max: u32) -> Result<Vec<Bidegree>, GradingError> {
    if !high_slope.is_positive() && !high_slope.is_zero() {
        return Err(GradingError::NonPositiveSlope(high_slope.to_string()));
    }
    if g_max < 1 {
        return Err(GradingError::EmptyGenusRange);
    }
    let mut out = Vec::new();
    for g in 1..=g_max {
        // d ranges over g−1 ≤ d ≤ ⌊high_slope·g⌋.
        let top = (high_slope * BigRational::from_integer(g.into())).floor().to_integer();
        let Some(top) = top.to_u64() else { continue };
        for d in (g as u64 - 1)..=top {
            out.push(Bidegree::new(g, d as u32));
        }
    }
    Ok(out)
}

/// The largest genus that can satisfy both d ≥ g − 1 and d ≤ s·g when s < 1:
/// g − 1 ≤ s·g forces g ≤ 1/(1 − s).
pub fn auto_genus_bound(high_slope: &BigRational) -> Result<u32, GradingError> {
    if high_slope >= &BigRational::one() {
        return Err(GradingError::Unbounded(high_slope.to_string()));
    }
    if high_slope.is_negative() {
        return Err(GradingError::NonPositiveSlope(high_slope.to_string()));
    }
    let bound = (BigRational::one() / (BigRational::one() - high_slope)).floor().to_integer();
    Ok(bound.to_u32().unwrap_or(u32::MAX).max(1))
}

/// The predicate "vanishes for d < λ(g − c)".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingLine {
    #[serde(serialize_with = "crate::ser::rational")]
    pub lambda: BigRational,
    #[serde(serialize_with = "crate::ser::rational")]
    pub c: BigRational,
}

impl VanishingLine {
    pub fn new(lambda: BigRational, c: BigRational) -> Result<Self, GradingError> {
        if !lambda.is_positive() {
            return Err(GradingError::NonPositiveSlope(lambda.to_string()));
        }
        Ok(VanishingLine { lambda, c })
    }

    /// Line through the origin, d < λg.
    pub fn through_origin(lambda: BigRational) -> Result<Self, GradingError> {
        VanishingLine::new(lambda, BigRational::zero())
    }

    /// True when (g, d) lies strictly below the line.
    pub fn is_below(&self, bd: Bidegree) -> bool {
        let g = BigRational::from_integer(bd.g.into());
        let d = BigRational::from_integer(bd.d.into());
        d < &self.lambda * (g - &self.c)
    }
}

impl fmt::Display for VanishingLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_zero() {
            write!(f, "d < {}·g", self.lambda)
        } else {
            write!(f, "d < {}·(g − {})", self.lambda, self.c)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeKind {
    Epimorphism,
    Isomorphism,
    Vanishing,
}

impl fmt::Display for RangeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RangeKind::Epimorphism => "epimorphism",
            RangeKind::Isomorphism => "isomorphism",
            RangeKind::Vanishing => "vanishing",
        })
    }
}

impl FromStr for RangeKind {
    type Err = GradingError;

    fn from_str(s: &str) -> Result<Self, GradingError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "epi" | "epimorphism" => Ok(RangeKind::Epimorphism),
            "iso" | "isomorphism" => Ok(RangeKind::Isomorphism),
            "vanishing" | "van" => Ok(RangeKind::Vanishing),
            _ => Err(GradingError::Parse(s.into())),
        }
    }
}

/// "holds for a·d ≤ b·g + e", normalized so that gcd(a, b, e) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RangeStatement {
    pub kind: RangeKind,
    pub a: i64,
    pub b: i64,
    pub e: i64,
}

impl RangeStatement {
    pub fn new(kind: RangeKind, a: i64, b: i64, e: i64) -> Result<Self, GradingError> {
        if a < 1 {
            return Err(GradingError::NonPositiveCoefficient("a"));
        }
        if b < 1 {
            return Err(GradingError::NonPositiveCoefficient("b"));
        }
        let g = a.gcd(&b).gcd(&e);
        Ok(RangeStatement {
            kind,
            a: a / g,
            b: b / g,
            e: e / g,
        })
    }

    pub fn satisfies(&self, bd: Bidegree) -> bool {
        self.a * bd.d as i64 <= self.b * bd.g as i64 + self.e
    }

    /// Parse a rendering such as `3d ≤ 2g−1` (ASCII `<=` and `-` also accepted).
    pub fn parse(kind: RangeKind, s: &str) -> Result<Self, GradingError> {
        let (lhs, rhs) = split_leq(s)?;
        let a = coefficient_of(&lhs, 'd').ok_or_else(|| GradingError::Parse(s.into()))?;
        let terms = signed_terms(&rhs).ok_or_else(|| GradingError::Parse(s.into()))?;
        let mut b = None;
        let mut e = 0i64;
        for (sign, body) in terms {
            if let Some(c) = coefficient_of(&body, 'g') {
                b = Some(sign * c);
            } else {
                e += sign * body.parse::<i64>().map_err(|_| GradingError::Parse(s.into()))?;
            }
        }
        RangeStatement::new(kind, a, b.ok_or_else(|| GradingError::Parse(s.into()))?, e)
    }
}

impl fmt::Display for RangeStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≤ {}", monomial(self.a, "d"), monomial(self.b, "g"))?;
        write_signed(f, self.e, "")
    }
}

/// A one-parameter family a·d ≤ b·g + c·s + e, as in ranges with twisted
/// coefficients of degree s.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedRange {
    pub kind: RangeKind,
    pub a: i64,
    pub b: i64,
    pub s_coeff: i64,
    pub e: i64,
}

impl TwistedRange {
    pub fn new(kind: RangeKind, a: i64, b: i64, s_coeff: i64, e: i64) -> Result<Self, GradingError> {
        if a < 1 {
            return Err(GradingError::NonPositiveCoefficient("a"));
        }
        if b < 1 {
            return Err(GradingError::NonPositiveCoefficient("b"));
        }
        Ok(TwistedRange { kind, a, b, s_coeff, e })
    }

    pub fn instantiate(&self, s: i64) -> Result<RangeStatement, GradingError> {
        RangeStatement::new(self.kind, self.a, self.b, self.e + self.s_coeff * s)
    }
}

impl fmt::Display for TwistedRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≤ {}", monomial(self.a, "d"), monomial(self.b, "g"))?;
        write_signed(f, self.s_coeff, "s")?;
        write_signed(f, self.e, "")
    }
}

const MINUS: char = '\u{2212}';

fn monomial(c: i64, var: &str) -> String {
    match c {
        1 => var.to_string(),
        -1 => format!("{MINUS}{var}"),
        _ if c < 0 => format!("{MINUS}{}{var}", -c),
        _ => format!("{c}{var}"),
    }
}

fn write_signed(f: &mut fmt::Formatter<'_>, c: i64, var: &str) -> fmt::Result {
    if c == 0 {
        return Ok(());
    }
    let sign = if c < 0 { MINUS } else { '+' };
    let mag = c.unsigned_abs();
    if mag == 1 && !var.is_empty() {
        write!(f, "{sign}{var}")
    } else {
        write!(f, "{sign}{mag}{var}")
    }
}

fn split_leq(s: &str) -> Result<(String, String), GradingError> {
    let norm = s.replace("<=", "≤");
    let (l, r) = norm.split_once('≤').ok_or_else(|| GradingError::Parse(s.into()))?;
    Ok((l.replace(' ', ""), r.replace(' ', "")))
}

/// `3d` → 3, `d` → 1 for the given variable.
fn coefficient_of(term: &str, var: char) -> Option<i64> {
    let body = term.strip_suffix(var)?;
    if body.is_empty() {
        Some(1)
    } else {
        body.parse().ok()
    }
}

/// Split `2g−2s−1` into signed pieces [(1,"2g"), (−1,"2s"), (−1,"1")].
fn signed_terms(s: &str) -> Option<Vec<(i64, String)>> {
    let s = s.replace(MINUS, "-");
    let mut out = Vec::new();
    let mut sign = 1;
    let mut cur = String::new();
    for ch in s.chars() {
        if ch == '+' || ch == '-' {
            if !cur.is_empty() {
                out.push((sign, std::mem::take(&mut cur)));
            }
            sign = if ch == '-' { -1 } else { 1 };
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return None;
    }
    out.push((sign, cur));
    Some(out)
}

impl TwistedRange {
    /// Parse `3d ≤ 2g−2s−1`.
    pub fn parse(kind: RangeKind, s: &str) -> Result<Self, GradingError> {
        let (lhs, rhs) = split_leq(s)?;
        let a = coefficient_of(&lhs, 'd').ok_or_else(|| GradingError::Parse(s.into()))?;
        let mut b = None;
        let (mut c, mut e) = (0i64, 0i64);
        for (sign, body) in signed_terms(&rhs).ok_or_else(|| GradingError::Parse(s.into()))? {
            if let Some(k) = coefficient_of(&body, 'g') {
                b = Some(sign * k);
            } else if let Some(k) = coefficient_of(&body, 's') {
                c += sign * k;
            } else {
                e += sign * body.parse::<i64>().map_err(|_| GradingError::Parse(s.into()))?;
            }
        }
        TwistedRange::new(kind, a, b.ok_or_else(|| GradingError::Parse(s.into()))?, c, e)
    }
}

/// Named stability ranges: the primary and secondary ranges for mapping class
/// groups of surfaces with one boundary component, over ℤ and over ℚ, and
/// their versions with twisted coefficients of degree s.
pub fn range_catalog() -> Vec<(&'static str, RangeStatement)> {
    let r = |k, a, b, e| RangeStatement::new(k, a, b, e).expect("valid catalog entry");
    use RangeKind::*;
    vec![
        ("relative-vanishing", r(Vanishing, 3, 2, -1)),
        ("secondary-epi", r(Epimorphism, 4, 3, -1)),
        ("secondary-iso", r(Isomorphism, 4, 3, -5)),
        ("secondary-epi-rational", r(Epimorphism, 5, 4, -1)),
        ("secondary-iso-rational", r(Isomorphism, 5, 4, -6)),
    ]
}

pub fn twisted_catalog() -> Vec<(&'static str, TwistedRange)> {
    let r = |k, a, b, c, e| TwistedRange::new(k, a, b, c, e).expect("valid catalog entry");
    use RangeKind::*;
    vec![
        ("twisted-epi", r(Epimorphism, 3, 2, -2, -1)),
        ("twisted-iso", r(Isomorphism, 3, 2, -2, -4)),
        ("twisted-secondary-epi", r(Epimorphism, 4, 3, -3, -1)),
        ("twisted-secondary-iso", r(Isomorphism, 4, 3, -3, -5)),
    ]
}
