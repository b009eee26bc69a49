use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{Cdga, CdgaError, DgModule, ModuleGen, Poly};
use crate::exactla::{parse_rational, FieldKind};
use crate::freealg::Generator;

pub type Term = (BigRational, Vec<(usize, u32)>);

/// Split a polynomial expression into signed terms. Factors are generator names
/// (longest match against `names`, so `στ` and `σ·τ` both work), optionally
/// raised to `^k`, separated by nothing, whitespace, `*` or `·`. Coefficients
/// are integers or `p/q` in front of a term.
pub fn parse_terms(expr: &str, names: &[&str]) -> Result<Vec<Term>, String> {
    let chars: Vec<char> = expr.chars().collect();
    let mut sorted: Vec<(usize, Vec<char>)> = names.iter().enumerate().map(|(i, n)| (i, n.chars().collect())).collect();
    sorted.sort_by(|a, b| b.1.len().cmp(&a.1.len()));
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let number = |pos: &mut usize| -> String {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        chars[start..*pos].iter().collect()
    };
    let mut terms = Vec::new();
    skip_ws(&mut pos);
    if pos == chars.len() {
        return Err("empty expression".into());
    }
    if chars[pos] == '0' && chars[pos + 1..].iter().all(|c| c.is_whitespace()) {
        return Ok(terms);
    }
    let mut first = true;
    while pos < chars.len() {
        skip_ws(&mut pos);
        let mut coeff = BigRational::one();
        match chars.get(pos) {
            Some('+') => pos += 1,
            Some('-') | Some('−') => {
                coeff = -coeff;
                pos += 1;
            }
            Some(_) if first => {}
            Some(c) => return Err(format!("expected `+` or `-` at `{c}`")),
            None => return Err("dangling operator".into()),
        }
        first = false;
        skip_ws(&mut pos);
        let mut factors: Vec<(usize, u32)> = Vec::new();
        let mut saw_number = false;
        if chars.get(pos).is_some_and(|c| c.is_ascii_digit()) {
            let mut text = number(&mut pos);
            if chars.get(pos) == Some(&'/') {
                pos += 1;
                let den = number(&mut pos);
                if den.is_empty() {
                    return Err("missing denominator".into());
                }
                text = format!("{text}/{den}");
            }
            coeff *= parse_rational(&text).map_err(|e| e.to_string())?;
            saw_number = true;
        }
        loop {
            while pos < chars.len() && (chars[pos].is_whitespace() || chars[pos] == '*' || chars[pos] == '·') {
                pos += 1;
            }
            if pos == chars.len() || matches!(chars[pos], '+' | '-' | '−') {
                break;
            }
            let hit = sorted
                .iter()
                .find(|(_, n)| !n.is_empty() && chars[pos..].starts_with(n))
                .ok_or_else(|| format!("unknown symbol at `{}`", chars[pos..].iter().collect::<String>()))?;
            pos += hit.1.len();
            let mut power = 1u32;
            if chars.get(pos) == Some(&'^') {
                pos += 1;
                power = number(&mut pos).parse().map_err(|_| "bad exponent".to_string())?;
            }
            factors.push((hit.0, power));
        }
        if factors.is_empty() && !saw_number {
            return Err("empty term".into());
        }
        terms.push((coeff, factors));
    }
    Ok(terms)
}

fn perr(line: usize, msg: impl Into<String>) -> CdgaError {
    CdgaError::Parse { line, msg: msg.into() }
}

/// Parse a complex description:
///
/// ```text
/// field F2            # optional, default Q
/// σ 1 0               # generator: name g d [r]
/// ρ 2 2 1
/// d ρ = [σ,σ]          # differential
/// module ρ₄ 3 3        # module generator (the unit is implicit)
/// d ρ₄ = ρ₃
/// quotient σ           # delete generators, applied last
/// ```
pub fn parse_spec(text: &str) -> Result<DgModule, CdgaError> {
    let mut field = FieldKind::Rational;
    let mut gens = Vec::new();
    let mut mgens = vec![ModuleGen::new("1", 0, 0)];
    let mut diffs: Vec<(usize, String, String)> = Vec::new();
    let mut quotient: Vec<String> = Vec::new();
    let nums = |line: usize, toks: &[&str]| -> Result<Vec<u32>, CdgaError> {
        toks.iter()
            .map(|t| t.parse::<u32>().map_err(|_| perr(line, format!("`{t}` is not a nonnegative integer"))))
            .collect()
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if body.contains('=') {
            let (lhs, rhs) = body.split_once('=').unwrap();
            let lt: Vec<&str> = lhs.split_whitespace().collect();
            if lt.len() != 2 || lt[0] != "d" {
                return Err(perr(line, "expected `d name = expr`"));
            }
            diffs.push((line, lt[1].to_string(), rhs.trim().to_string()));
            continue;
        }
        match toks[0] {
            "field" if toks.len() == 2 => field = toks[1].parse().map_err(|e: crate::exactla::LaError| perr(line, e.to_string()))?,
            "quotient" => quotient.extend(toks[1..].iter().map(|s| s.to_string())),
            "module" if toks.len() == 4 || toks.len() == 5 => {
                let n = nums(line, &toks[2..])?;
                mgens.push(ModuleGen {
                    name: toks[1].to_string(),
                    g: n[0],
                    d: n[1],
                    r: *n.get(2).unwrap_or(&n[1]),
                });
            }
            _ if toks.len() == 3 || toks.len() == 4 => {
                let n = nums(line, &toks[1..])?;
                gens.push(Generator::weighted(toks[0], n[0], n[1], *n.get(2).unwrap_or(&n[1])));
            }
            _ => return Err(perr(line, format!("cannot read `{body}`"))),
        }
    }
    let base = Cdga::new(field, gens)?;
    let ngens = base.generators().len();
    let mut names: Vec<&str> = base.generators().iter().map(|g| g.name.as_str()).collect();
    names.extend(mgens[1..].iter().map(|m| m.name.as_str()));

    let mut alg_diff = Vec::new();
    let mut mod_diff: Vec<Vec<(usize, Poly)>> = vec![Vec::new(); mgens.len()];
    for (line, name, expr) in &diffs {
        let terms = parse_terms(expr, &names).map_err(|m| perr(*line, m))?;
        if let Ok(i) = base.index_of(name) {
            let mut p = Poly::zero();
            for (c, factors) in terms {
                if factors.iter().any(|f| f.0 >= ngens) {
                    return Err(perr(*line, "module generator in an algebra differential"));
                }
                for (m, v) in base.monomial(&factors).terms {
                    p.add_term(m, v * &c);
                }
            }
            alg_diff.push((i, p));
        } else if let Some(k) = mgens.iter().position(|m| &m.name == name) {
            for (c, factors) in terms {
                let slots: Vec<usize> = (0..factors.len()).filter(|&j| factors[j].0 >= ngens).collect();
                let (target, sign) = match slots.as_slice() {
                    [] => (0, 1),
                    [s] if factors[*s].1 == 1 => {
                        let t = factors[*s].0 - ngens + 1;
                        let before: u32 = factors[..*s].iter().map(|f| base.generators()[f.0].d * f.1).sum();
                        (t, if (before * mgens[t].d) % 2 == 1 { -1 } else { 1 })
                    }
                    _ => return Err(perr(*line, "each term needs at most one module generator")),
                };
                let alg: Vec<(usize, u32)> = factors.into_iter().filter(|f| f.0 < ngens).collect();
                let mut p = Poly::zero();
                for (m, v) in base.monomial(&alg).terms {
                    p.add_term(m, v * &c * BigRational::from_integer(BigInt::from(sign)));
                }
                mod_diff[k].push((target, p));
            }
        } else {
            return Err(perr(*line, format!("unknown generator `{name}`")));
        }
    }
    let base = base.with_differential(alg_diff)?;
    let module = DgModule::new(base, mgens, mod_diff)?;
    if quotient.is_empty() {
        Ok(module)
    } else {
        let q: Vec<&str> = quotient.iter().map(String::as_str).collect();
        module.quotient(&q)
    }
}
