use std::collections::HashMap;

use num_rational::BigRational;
use serde::Serialize;

use super::{Cdga, CdgaError, DgModule, ModuleGen, Poly};
use crate::exactla::FieldKind;
use crate::freealg::{cohen_generators_f2, free_graded_lie_basis, BoxBounds, Generator, LieBasis, LiePoly};

/// A named complex with its default box and the slope below which its
/// homology is claimed to vanish, if any.
#[derive(Clone, Debug)]
pub struct Preset {
    pub name: String,
    pub complex: DgModule,
    pub default_box: BoxBounds,
    pub slope: Option<BigRational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PresetInfo {
    pub name: &'static str,
    pub summary: &'static str,
}

pub fn preset_names() -> Vec<PresetInfo> {
    vec![
        PresetInfo {
            name: "vanishA",
            summary: "Λ(L/⟨σ,λ⟩) on σ(1,0), λ(3,2), ρ(2,2) with δρ = [σ,σ]",
        },
        PresetInfo {
            name: "vanishB",
            summary: "vanishA plus ρ′(4,4) with δρ′ = [σ,λ]",
        },
        PresetInfo {
            name: "intstab-f2",
            summary: "ξ-tower algebra on σ, τ, ρ₁, ρ₂, ρ₃ mod σ, tensored with {1, ρ₄}",
        },
        PresetInfo {
            name: "intstab-fl(ℓ)",
            summary: "the same complex over 𝔽ℓ with Q¹σ = −½[σ,σ]",
        },
        PresetInfo {
            name: "A-algebra-fl(ℓ)",
            summary: "the algebra on σ, τ, ρ₁, ρ₂, ρ₃ over 𝔽ℓ, no quotient",
        },
        PresetInfo {
            name: "koszul-q",
            summary: "[σ,σ](2,1), ρ(2,2), δρ = [σ,σ] over ℚ",
        },
        PresetInfo {
            name: "koszul-f2",
            summary: "ξσ(2,1), ρ₂(2,2), δρ₂ = ξσ over 𝔽₂",
        },
        PresetInfo {
            name: "koszul-fl(ℓ)",
            summary: "[σ,σ](2,1), ρ₂(2,2), δρ₂ = −½[σ,σ] over 𝔽ℓ",
        },
    ]
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Generators for a box one degree taller than asked, so that homology in the
/// top row sees every incoming boundary.
fn taller(bounds: BoxBounds) -> BoxBounds {
    BoxBounds::new(bounds.g_max, bounds.d_max + 1)
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// Λ on the Lie basis of the free algebra on `gens`, with the differential the
/// Lie derivation extending `images`, then the named generators deleted.
fn lie_derivation_complex(
    field: FieldKind,
    gens: &[Generator],
    images: &[(&str, &str, &str)],
    quotient: &[&str],
    bounds: BoxBounds,
) -> Result<DgModule, CdgaError> {
    let basis = LieBasis::new(gens, taller(bounds))?;
    let letter = |name: &str| gens.iter().position(|g| g.name == name).expect("preset letter");
    let mut map = HashMap::new();
    for (x, a, b) in images {
        map.insert(
            letter(x),
            LiePoly::bracket(&LiePoly::letter(letter(a)), &LiePoly::letter(letter(b)), gens),
        );
    }
    let rows = basis.derivation(&map)?;
    let words = basis.words();
    let cgens: Vec<Generator> = words
        .iter()
        .map(|w| Generator::weighted(w.name.clone(), w.bidegree.g, w.bidegree.d, w.weight))
        .collect();
    let n = cgens.len();
    let diff = rows
        .into_iter()
        .enumerate()
        .map(|(i, coords)| {
            let mut p = Poly::zero();
            for (j, c) in coords {
                p.add_term(unit(n, j), c);
            }
            (i, p)
        })
        .collect();
    let a = Cdga::new(field, cgens)?.with_differential(diff)?;
    let present: Vec<&str> = quotient.iter().copied().filter(|q| a.index_of(q).is_ok()).collect();
    DgModule::free(a).quotient(&present)
}

fn vanish_gens() -> Vec<Generator> {
    vec![
        Generator::weighted("σ", 1, 0, 0),
        Generator::weighted("λ", 3, 2, 0),
        Generator::weighted("ρ", 2, 2, 1),
    ]
}

pub fn vanish_a(field: FieldKind, bounds: BoxBounds) -> Result<DgModule, CdgaError> {
    lie_derivation_complex(field, &vanish_gens(), &[("ρ", "σ", "σ")], &["σ", "λ"], bounds)
}

pub fn vanish_b(field: FieldKind, bounds: BoxBounds) -> Result<DgModule, CdgaError> {
    let mut gens = vanish_gens();
    gens.push(Generator::weighted("ρ′", 4, 4, 1));
    lie_derivation_complex(field, &gens, &[("ρ", "σ", "σ"), ("ρ′", "σ", "λ")], &["σ", "λ"], bounds)
}

fn intstab_gens() -> Vec<Generator> {
    vec![
        Generator::weighted("σ", 1, 0, 0),
        Generator::weighted("τ", 1, 1, 1),
        Generator::weighted("ρ₁", 2, 2, 2),
        Generator::weighted("ρ₂", 2, 2, 2),
        Generator::weighted("ρ₃", 3, 2, 2),
    ]
}

/// The algebra on basic words (ξ-towers when ℓ = 2) over σ, τ, ρ₁, ρ₂, ρ₃ with
/// δρ₁ = 10στ, δρ₂ = Q¹σ − 3στ, δρ₃ = σ²τ. Every other word is a cycle.
pub fn a_algebra(prime: u64, bounds: BoxBounds) -> Result<Cdga, CdgaError> {
    let field = FieldKind::prime(prime)?;
    let gens = intstab_gens();
    let (cgens, q1): (Vec<Generator>, &str) = if prime == 2 {
        let words = cohen_generators_f2(&gens, taller(bounds))?;
        (
            words.into_iter().map(|c| Generator::weighted(c.name, c.bidegree.g, c.bidegree.d, c.weight)).collect(),
            "ξσ",
        )
    } else {
        let words = free_graded_lie_basis(&gens, taller(bounds))?;
        (
            words
                .into_iter()
                .map(|w| Generator::weighted(w.name, w.bidegree.g, w.bidegree.d, w.weight))
                .collect(),
            "- 1/2 [σ,σ]",
        )
    };
    let a = Cdga::new(field, cgens)?;
    let rho2 = format!("{q1} - 3 σ τ");
    let entries: Vec<(&str, &str)> = [("ρ₁", "10 σ τ"), ("ρ₂", rho2.as_str()), ("ρ₃", "σ^2 τ")]
        .into_iter()
        .filter(|(x, _)| a.index_of(x).is_ok())
        .collect();
    a.with_differential_exprs(&entries)
}

/// The A-algebra mod σ, tensored with the module {1, ρ₄(3,3)} where δρ₄ = ρ₃.
pub fn intstab(prime: u64, bounds: BoxBounds) -> Result<DgModule, CdgaError> {
    let a = a_algebra(prime, bounds)?.quotient(&["σ"])?;
    let Ok(r3) = a.index_of("ρ₃") else {
        return Ok(DgModule::free(a));
    };
    let n = a.generators().len();
    let mut rho4 = ModuleGen::new("ρ₄", 3, 3);
    rho4.r = 3;
    DgModule::new(
        a,
        vec![ModuleGen::new("1", 0, 0), rho4],
        vec![Vec::new(), vec![(0, Poly::monomial(unit(n, r3), ratio(1, 1)))]],
    )
}

/// The two-generator factor q(2,1), ρ(2,2) with δρ = q (ℚ, 𝔽₂) or −½q (odd ℓ).
pub fn koszul(field: FieldKind) -> Result<DgModule, CdgaError> {
    let (q, rho, d) = match field {
        FieldKind::Rational => ("[σ,σ]", "ρ", "[σ,σ]"),
        FieldKind::Prime(2) => ("ξσ", "ρ₂", "ξσ"),
        FieldKind::Prime(_) => ("[σ,σ]", "ρ₂", "-1/2 [σ,σ]"),
    };
    let a = Cdga::new(field, vec![Generator::new(q, 2, 1), Generator::new(rho, 2, 2)])?
        .with_differential_exprs(&[(rho, d)])?;
    Ok(DgModule::free(a))
}

/// Split `stem-fl(ℓ)` or `stem-flℓ` into ℓ.
fn prime_suffix(name: &str, stem: &str) -> Option<u64> {
    let rest = name.strip_prefix(stem)?;
    let digits = rest.trim_start_matches('(').trim_end_matches(')');
    digits.parse().ok()
}

/// Build a named complex. `bounds` defaults to (8,8) over ℚ and (6,6) over 𝔽ℓ
/// ((2ℓ+2, 2ℓ+2) for the odd Koszul factor). Only vanishA and vanishB accept a
/// field other than their own.
pub fn build_preset(name: &str, bounds: Option<BoxBounds>, field: Option<FieldKind>) -> Result<Preset, CdgaError> {
    let fixed = |own: FieldKind| -> Result<FieldKind, CdgaError> {
        match field {
            Some(f) if f != own => Err(CdgaError::FieldMismatch {
                preset: name.to_string(),
                expected: own,
                requested: f,
            }),
            _ => Ok(own),
        }
    };
    let default_for = |f: FieldKind| match f {
        FieldKind::Rational => BoxBounds::new(8, 8),
        FieldKind::Prime(_) => BoxBounds::new(6, 6),
    };
    let (complex, own, slope, default_box) = if name == "vanishA" || name == "vanishB" {
        let f = field.unwrap_or(FieldKind::Rational);
        let b = bounds.unwrap_or(BoxBounds::new(8, 8));
        if name == "vanishA" {
            (vanish_a(f, b)?, f, Some(ratio(3, 4)), BoxBounds::new(8, 8))
        } else {
            (vanish_b(f, b)?, f, Some(ratio(4, 5)), BoxBounds::new(8, 8))
        }
    } else if let Some(p) = prime_suffix(name, "intstab-fl").or_else(|| (name == "intstab-f2").then_some(2)) {
        let f = fixed(FieldKind::prime(p)?)?;
        (intstab(p, bounds.unwrap_or(default_for(f)))?, f, Some(ratio(3, 4)), default_for(f))
    } else if let Some(p) = prime_suffix(name, "A-algebra-fl") {
        let f = fixed(FieldKind::prime(p)?)?;
        (DgModule::free(a_algebra(p, bounds.unwrap_or(default_for(f)))?), f, None, default_for(f))
    } else if name == "koszul-q" || name == "koszul-f2" || name.starts_with("koszul-fl") {
        let f = match name {
            "koszul-q" => FieldKind::Rational,
            "koszul-f2" => FieldKind::Prime(2),
            _ => FieldKind::prime(prime_suffix(name, "koszul-fl").ok_or_else(|| CdgaError::UnknownPreset(name.into()))?)?,
        };
        let f = fixed(f)?;
        let b = match f {
            FieldKind::Prime(p) if p > 2 => {
                let side = (2 * p + 2).max(6) as u32;
                BoxBounds::new(side, side)
            }
            _ => BoxBounds::new(8, 8),
        };
        (koszul(f)?, f, None, b)
    } else {
        return Err(CdgaError::UnknownPreset(name.to_string()));
    };
    debug_assert_eq!(complex.field(), own);
    Ok(Preset {
        name: name.to_string(),
        complex,
        default_box,
        slope,
    })
}
