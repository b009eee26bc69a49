use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{gysin_pushforward, parse_taut, Mono, ParamPoly, TautError, TautPoly, Var};
use crate::exactla::{fmt_rational, normalize, Rationals, RowReducer, SparseVec};

/// p = 0 in the tautological ring at the given genus (any genus when `None`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub poly: TautPoly,
    pub genus: Option<u32>,
    pub label: String,
}

/// p ≠ 0 at the given genus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fact {
    pub class: TautPoly,
    pub genus: u32,
    pub label: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Ledger {
    pub relations: Vec<Relation>,
    pub nonvanishing: Vec<Fact>,
}

/// κ₁,κ₂-part of the degree-14 relation at genus 18, up to a nonzero scalar.
pub const R12: &str = "80435*k1^7 + 21719880*k1^5*k2 + 1387036224*k1^3*k2^2 + 17581100544*k1*k2^3";

impl Ledger {
    pub fn empty() -> Self {
        Ledger::default()
    }

    /// The relations and nonvanishing facts the deductions rely on.
    pub fn builtin() -> Self {
        let mut l = Ledger::empty();
        let rel = |s: &str| parse_taut(s).expect("builtin relation parses");
        l.relations.push(Relation {
            poly: rel("3*k1^2 + 32*k2"),
            genus: Some(4),
            label: "genus-4 relation in degree 4".into(),
        });
        l.relations.push(Relation {
            poly: rel("5*k1^2 + 72*k2"),
            genus: Some(5),
            label: "genus-5 relation in degree 4".into(),
        });
        l.relations.push(Relation {
            poly: rel("k1 - 12*l1"),
            genus: None,
            label: "κ₁ = 12λ₁".into(),
        });
        l.relations.push(Relation {
            poly: rel(R12),
            genus: Some(18),
            label: "R12: κ₁,κ₂-part of the degree-14 relation at genus 18".into(),
        });
        l.nonvanishing.push(Fact {
            class: rel("k1"),
            genus: 4,
            label: "κ₁ ≠ 0 at genus 4".into(),
        });
        l.nonvanishing.push(Fact {
            class: rel("k2"),
            genus: 4,
            label: "κ₂ ≠ 0 at genus 4".into(),
        });
        l
    }

    pub fn push_relation(&mut self, poly: TautPoly, genus: Option<u32>, label: impl Into<String>) -> Result<(), TautError> {
        let label = label.into();
        if poly.degree().is_none() {
            return Err(TautError::InhomogeneousRelation(label));
        }
        self.relations.push(Relation { poly, genus, label });
        Ok(())
    }

    /// Relations at exactly this genus (or valid at every genus) of this degree.
    pub fn lookup(&self, genus: u32, degree: u32) -> Vec<&Relation> {
        self.relations
            .iter()
            .filter(|r| r.genus.is_none_or(|g| g == genus) && r.poly.degree() == Some(degree) && !r.poly.is_zero())
            .collect()
    }

    /// Read user entries, one per line: `@g <expr>` for a relation at genus g,
    /// `<expr>` for one at every genus, `@g <expr> != 0` for a nonvanishing
    /// fact. `#` starts a comment.
    pub fn load_user(&mut self, text: &str) -> Result<(), TautError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let label = format!("user line {}", i + 1);
            let (genus, body) = match line.strip_prefix('@') {
                Some(rest) => {
                    let (g, b) = rest.split_once(char::is_whitespace).ok_or_else(|| TautError::Invalid(format!("{label}: missing expression")))?;
                    let g: u32 = g.parse().map_err(|_| TautError::Invalid(format!("{label}: bad genus `{g}`")))?;
                    (Some(g), b.trim())
                }
                None => (None, line),
            };
            if let Some(expr) = body.strip_suffix("!= 0").or_else(|| body.strip_suffix("≠ 0")) {
                let genus = genus.ok_or_else(|| TautError::Invalid(format!("{label}: a nonvanishing fact needs a genus")))?;
                self.nonvanishing.push(Fact {
                    class: parse_taut(expr)?,
                    genus,
                    label,
                });
            } else {
                let expr = body.strip_suffix("= 0").unwrap_or(body);
                self.push_relation(parse_taut(expr)?, genus, label)?;
            }
        }
        Ok(())
    }

    /// Text form accepted by [`Ledger::load_user`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.relations {
            let expr = ascii(&r.poly);
            match r.genus {
                Some(g) => out.push_str(&format!("@{g} {expr}  # {}\n", r.label)),
                None => out.push_str(&format!("{expr}  # {}\n", r.label)),
            }
        }
        for f in &self.nonvanishing {
            out.push_str(&format!("@{} {} != 0  # {}\n", f.genus, ascii(&f.class), f.label));
        }
        out
    }
}

fn ascii(p: &TautPoly) -> String {
    let mut parts = Vec::new();
    for (m, c) in p.terms() {
        let mut factors = vec![format!("({})", ascii_param(c))];
        for (v, e) in &m.0 {
            let name = match v {
                Var::E => "e".to_string(),
                Var::Kappa(i) => format!("k{i}"),
                Var::Lambda1 => "l1".to_string(),
            };
            factors.push(if *e == 1 { name } else { format!("{name}^{e}") });
        }
        parts.push(factors.join("*"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn ascii_param(c: &ParamPoly) -> String {
    let mut parts = Vec::new();
    for (m, q) in c.terms() {
        let mut f = vec![fmt_rational(q)];
        for (k, e) in m {
            f.push(if *e == 1 { k.clone() } else { format!("{k}^{e}") });
        }
        parts.push(f.join("*"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum H43Status {
    Determined,
    InsufficientLedger,
    Contradiction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H43Report {
    pub status: H43Status,
    /// π!(e·(Ae + Bκ₁)) and π!(e²·(Ae + Bκ₁)) at genus 4.
    pub pushforwards: Vec<TautPoly>,
    /// Linear conditions on (A, B) as rendered equations.
    pub equations: Vec<String>,
    pub solution_dimension: usize,
    /// Basis of the solution space, as (A, B) pairs.
    pub solution_basis: Vec<(String, String)>,
    pub notes: Vec<String>,
}

/// κ-monomials of cohomological degree `deg`, in monomial order.
fn kappa_monomials(deg: u32) -> Vec<Mono> {
    fn go(weight: u32, max: u32, cur: &mut Vec<(u32, u32)>, out: &mut Vec<Mono>) {
        if weight == 0 {
            out.push(Mono::kappa(cur));
            return;
        }
        for i in (1..=max.min(weight)).rev() {
            for e in (1..=weight / i).rev() {
                cur.push((i, e));
                go(weight - i * e, i - 1, cur, out);
                cur.pop();
            }
        }
    }
    if deg % 2 == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(deg / 2, deg / 2, &mut Vec::new(), &mut out);
    let set: BTreeSet<Mono> = out.into_iter().collect();
    set.into_iter().collect()
}

fn vectorize(p: &TautPoly, basis: &[Mono]) -> Option<SparseVec<BigRational>> {
    let mut v = Vec::new();
    for (m, c) in p.terms() {
        let idx = basis.iter().position(|b| b == m)?;
        v.push((idx, c.as_constant()?));
    }
    Some(normalize(&Rationals, v))
}

/// Solve for (A, B) such that Ae + Bκ₁ pushes forward to zero after
/// multiplying by e and by e², at genus 4.
///
/// A degree is usable only when the ledger pins it down: the relations leave a
/// quotient of dimension ≤ 1 and a nonvanishing fact survives in it, so the
/// quotient maps isomorphically onto the actual group. A fact killed by the
/// relations is reported as a contradiction.
pub fn deduce_h43_kernel(ledger: &Ledger) -> Result<H43Report, TautError> {
    const GENUS: u32 = 4;
    if !ledger.relations.iter().any(|r| r.genus == Some(GENUS)) && !ledger.nonvanishing.iter().any(|f| f.genus == GENUS) {
        return Err(TautError::MissingLedger(GENUS));
    }
    let class = parse_taut("A*e + B*k1").expect("fixed expression");
    let pushforwards = vec![
        gysin_pushforward(&parse_taut("e").unwrap().mul(&class), GENUS as i64)?,
        gysin_pushforward(&parse_taut("e^2").unwrap().mul(&class), GENUS as i64)?,
    ];
    let mut equations: Vec<[BigRational; 2]> = Vec::new();
    let mut rendered = Vec::new();
    let mut notes = Vec::new();
    let mut contradiction = false;
    let mut insufficient = false;

    for p in &pushforwards {
        let deg = p.degree().expect("pushforward of a homogeneous class");
        let basis = kappa_monomials(deg);
        let mut red = RowReducer::new(Rationals, basis.len());
        for r in ledger.lookup(GENUS, deg) {
            match vectorize(&r.poly, &basis) {
                Some(v) => {
                    red.insert(v);
                }
                None => notes.push(format!("skipped `{}`: not a κ-polynomial with constant coefficients", r.label)),
            }
        }
        let quotient_dim = basis.len() - red.rank();
        let facts: Vec<&Fact> = ledger
            .nonvanishing
            .iter()
            .filter(|f| f.genus == GENUS && f.class.degree() == Some(deg))
            .collect();
        let mut surviving = false;
        for f in &facts {
            let v = vectorize(&f.class, &basis).ok_or_else(|| TautError::Invalid(format!("fact `{}` is not a κ-polynomial", f.label)))?;
            if red.reduce(v).is_empty() {
                contradiction = true;
                notes.push(format!("{} contradicts the relations in degree {deg}", f.label));
            } else {
                surviving = true;
            }
        }
        if !(surviving && quotient_dim <= 1) {
            insufficient = true;
            notes.push(format!(
                "degree {deg}: quotient by the relations has dimension {quotient_dim} and {} nonvanishing fact survives; {p} = 0 gives no condition",
                if surviving { "a" } else { "no" }
            ));
            continue;
        }
        // The functional vanishing on the relations detects the single surviving class.
        let phi = red.kernel_basis().into_iter().next().expect("quotient of dimension one");
        let mut coeffs = [BigRational::zero(), BigRational::zero()];
        for (idx, w) in &phi {
            let c = p.coefficient(&basis[*idx]);
            if !c.is_linear_in(&["A", "B"]) || c.as_constant().is_some_and(|q| !q.is_zero()) {
                return Err(TautError::Invalid(format!("{p} is not linear in A, B")));
            }
            coeffs[0] += c.linear_coefficient("A").unwrap() * w;
            coeffs[1] += c.linear_coefficient("B").unwrap() * w;
        }
        let eq = ParamPoly::param("A")
            .scale(&coeffs[0])
            .add(&ParamPoly::param("B").scale(&coeffs[1]));
        rendered.push(format!("{eq} = 0"));
        equations.push(coeffs);
    }

    let mut sys = RowReducer::new(Rationals, 2);
    for e in &equations {
        sys.insert(normalize(&Rationals, vec![(0, e[0].clone()), (1, e[1].clone())]));
    }
    let kernel = sys.kernel_basis();
    let solution_basis = kernel
        .iter()
        .map(|v| {
            let get = |i: usize| v.iter().find(|e| e.0 == i).map(|e| fmt_rational(&e.1)).unwrap_or_else(|| "0".into());
            (get(0), get(1))
        })
        .collect();
    let status = if contradiction {
        H43Status::Contradiction
    } else if insufficient && !kernel.is_empty() {
        H43Status::InsufficientLedger
    } else {
        H43Status::Determined
    };
    Ok(H43Report {
        status,
        pushforwards,
        equations: rendered,
        solution_dimension: kernel.len(),
        solution_basis,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_lookup() {
        let l = Ledger::builtin();
        let g5: Vec<String> = l.lookup(5, 4).iter().map(|r| r.poly.to_string()).collect();
        assert_eq!(g5, vec!["72·κ₂ + 5·κ₁²"]);
        assert_eq!(l.lookup(4, 4)[0].poly, parse_taut("3*k1^2 + 32*k2").unwrap());
        let mut u = Ledger::builtin();
        u.load_user("").unwrap();
        assert_eq!(u, l);
        assert!(u.load_user("@4 k1 + k2").is_err());
    }

    #[test]
    fn ledger_round_trip() {
        let l = Ledger::builtin();
        let mut back = Ledger::empty();
        back.load_user(&l.to_text()).unwrap();
        assert_eq!(back.relations.iter().map(|r| &r.poly).collect::<Vec<_>>(), l.relations.iter().map(|r| &r.poly).collect::<Vec<_>>());
        assert_eq!(back.nonvanishing.len(), 2);
    }

    #[test]
    fn kernel_default() {
        let r = deduce_h43_kernel(&Ledger::builtin()).unwrap();
        assert_eq!(r.status, H43Status::Determined);
        assert_eq!(r.solution_dimension, 0);
    }

    #[test]
    fn kernel_without_kappa2_fact() {
        let mut l = Ledger::builtin();
        l.nonvanishing.retain(|f| f.class != parse_taut("k2").unwrap());
        let r = deduce_h43_kernel(&l).unwrap();
        assert_eq!(r.status, H43Status::InsufficientLedger);
        assert_eq!(r.solution_dimension, 1);
        assert_eq!(r.solution_basis, vec![("6".to_string(), "1".to_string())]);
    }

    #[test]
    fn kernel_with_inconsistent_relation() {
        let mut l = Ledger::builtin();
        l.push_relation(parse_taut("6*k2 + k1^2").unwrap(), Some(4), "extra").unwrap();
        let r = deduce_h43_kernel(&l).unwrap();
        assert_eq!(r.status, H43Status::Contradiction);
        assert!(r.notes.iter().any(|n| n.contains("κ₂ ≠ 0")));
    }

    #[test]
    fn kernel_needs_genus_four() {
        assert!(matches!(deduce_h43_kernel(&Ledger::empty()), Err(TautError::MissingLedger(4))));
    }
}
