use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{parse_taut, Mono, ParamPoly, TautError, TautPoly, Var};

/// c · m₁ ⊗ m₂ ⊗ … ⊗ mₙ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorTerm {
    pub slots: Vec<Mono>,
    pub coeff: ParamPoly,
}

impl fmt::Display for TensorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let slots: Vec<String> = self.slots.iter().map(Mono::to_string).collect();
        write!(f, "{} · {}", self.coeff, slots.join(" ⊗ "))
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// All ways to write `total` as an ordered sum of `parts` nonnegative integers.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Δ^{n−1}(p) in the n-fold tensor power, using that κᵢ (and λ₁) are primitive.
/// Terms are sorted by their slot monomials.
pub fn nfold_coproduct(p: &TautPoly, n: usize) -> Result<Vec<TensorTerm>, TautError> {
    if n < 2 {
        return Err(TautError::TooFewSlots(2));
    }
    if p.contains(Var::E) {
        return Err(TautError::EulerClassPresent);
    }
    let mut acc: BTreeMap<Vec<Mono>, ParamPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut partial: Vec<(Vec<Mono>, BigInt)> = vec![(vec![Mono::one(); n], BigInt::one())];
        for (&v, &a) in &m.0 {
            let mut next = Vec::new();
            for comp in compositions(a, n) {
                let multinomial = comp.iter().fold(factorial(a), |acc, &k| acc / factorial(k));
                for (slots, coeff) in &partial {
                    let slots: Vec<Mono> = slots.iter().zip(&comp).map(|(s, &k)| s.mul(&Mono::pow(v, k))).collect();
                    next.push((slots, coeff * &multinomial));
                }
            }
            partial = next;
        }
        for (slots, k) in partial {
            let add = c.scale(&BigRational::from_integer(k));
            let entry = acc.entry(slots).or_default();
            *entry = entry.add(&add);
        }
    }
    Ok(acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(slots, coeff)| TensorTerm { slots, coeff })
        .collect())
}

/// Allowed monomials for one tensor slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SlotPattern {
    Any,
    OneOf(Vec<Mono>),
}

impl SlotPattern {
    pub fn matches(&self, m: &Mono) -> bool {
        match self {
            SlotPattern::Any => true,
            SlotPattern::OneOf(v) => v.contains(m),
        }
    }

    /// Parse `k1,k1,k1,{k1^2|k2},{k1^2|k2}`; `*` admits anything.
    pub fn parse_list(s: &str) -> Result<Vec<SlotPattern>, TautError> {
        let mut out = Vec::new();
        let mut depth = 0;
        let mut cur = String::new();
        let mut items = Vec::new();
        for c in s.chars() {
            match c {
                '{' => depth += 1,
                '}' => depth -= 1,
                ',' if depth == 0 => {
                    items.push(std::mem::take(&mut cur));
                    continue;
                }
                _ => {}
            }
            cur.push(c);
        }
        items.push(cur);
        for item in items {
            let t = item.trim();
            if t == "*" {
                out.push(SlotPattern::Any);
                continue;
            }
            let inner = t.trim_start_matches('{').trim_end_matches('}');
            let mut monos = Vec::new();
            for alt in inner.split('|') {
                let p = parse_taut(alt)?;
                match p.terms().iter().next() {
                    Some((m, c)) if p.terms().len() == 1 && c.as_constant() == Some(BigRational::one()) => monos.push(m.clone()),
                    _ => return Err(TautError::Invalid(format!("slot pattern `{alt}` is not a monomial"))),
                }
            }
            out.push(SlotPattern::OneOf(monos));
        }
        Ok(out)
    }
}

/// Keep the terms whose slots match the pattern slot by slot.
pub fn restrict(terms: &[TensorTerm], pattern: &[SlotPattern]) -> Result<Vec<TensorTerm>, TautError> {
    if let Some(t) = terms.first() {
        if t.slots.len() != pattern.len() {
            return Err(TautError::SlotCount {
                terms: t.slots.len(),
                functionals: pattern.len(),
            });
        }
    }
    Ok(terms
        .iter()
        .filter(|t| t.slots.iter().zip(pattern).all(|(m, p)| p.matches(m)))
        .cloned()
        .collect())
}

/// Drop terms in which some κᵢ with i > `max_index` occurs.
pub fn discard_above(terms: &[TensorTerm], max_index: u32) -> Vec<TensorTerm> {
    terms
        .iter()
        .filter(|t| {
            t.slots
                .iter()
                .all(|m| m.0.keys().all(|v| !matches!(v, Var::Kappa(i) if *i > max_index)))
        })
        .cloned()
        .collect()
}

/// A linear functional on monomials of one degree; unlisted monomials pair to 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyFunctional {
    pub name: String,
    pub values: BTreeMap<Mono, ParamPoly>,
}

impl HomologyFunctional {
    pub fn new(name: impl Into<String>, values: Vec<(Mono, ParamPoly)>) -> Result<Self, TautError> {
        let name = name.into();
        let values: BTreeMap<Mono, ParamPoly> = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let mut degrees = values.keys().map(Mono::degree);
        if let Some(d) = degrees.next() {
            if degrees.any(|x| x != d) {
                return Err(TautError::MixedFunctional(name));
            }
        }
        Ok(HomologyFunctional { name, values })
    }

    pub fn degree(&self) -> Option<u32> {
        self.values.keys().next().map(Mono::degree)
    }

    pub fn eval(&self, m: &Mono) -> ParamPoly {
        self.values.get(m).cloned().unwrap_or_default()
    }

    /// The functional that takes `param` on `basis` and kills `relation`, which
    /// must involve `basis` and exactly one other monomial.
    pub fn annihilating(name: &str, relation: &TautPoly, basis: &Mono, param: &str) -> Result<Self, TautError> {
        let terms = relation.terms();
        let cb = terms.get(basis).and_then(ParamPoly::as_constant);
        let others: Vec<(&Mono, &ParamPoly)> = terms.iter().filter(|(m, _)| *m != basis).collect();
        match (cb, others.as_slice()) {
            (Some(cb), [(m, co)]) => {
                let co = co.as_constant().ok_or_else(|| TautError::Invalid("symbolic relation".into()))?;
                let t = ParamPoly::param(param);
                HomologyFunctional::new(name, vec![((*basis).clone(), t.clone()), ((*m).clone(), t.scale(&(-cb / co)))])
            }
            _ => Err(TautError::Invalid(format!("`{relation}` does not have exactly two terms including {basis}"))),
        }
    }
}

/// Σ over terms of coeff · Π ⟨fᵢ, mᵢ⟩. Slot monomials whose degree differs from
/// the functional's pair to zero; the slot count and total degree must agree.
pub fn pair_tensor(terms: &[TensorTerm], functionals: &[HomologyFunctional]) -> Result<ParamPoly, TautError> {
    let total: Option<u32> = functionals.iter().map(HomologyFunctional::degree).sum();
    let mut out = ParamPoly::zero();
    for t in terms {
        if t.slots.len() != functionals.len() {
            return Err(TautError::SlotCount {
                terms: t.slots.len(),
                functionals: functionals.len(),
            });
        }
        let deg: u32 = t.slots.iter().map(Mono::degree).sum();
        if let Some(total) = total {
            if deg != total {
                return Err(TautError::DegreeMismatch { term: deg, functionals: total });
            }
        }
        let mut prod = t.coeff.clone();
        for (m, f) in t.slots.iter().zip(functionals) {
            prod = prod.mul(&f.eval(m));
            if prod.is_zero() {
                break;
            }
        }
        out = out.add(&prod);
    }
    Ok(out)
}
