use serde::Serialize;

use super::{lie_basis_without_squares, BoxBounds, FreeAlgError, Generator, LieWord};
use crate::grading::Bidegree;

/// ξᵏ(y) for a basic Lie word y over 𝔽₂. Each application of the top operation
/// sends (g, q) to (2g, 2q + 1) and doubles the filtration weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohenGenerator {
    pub name: String,
    pub base: LieWord,
    pub tower: u32,
    pub prime: u64,
    pub bidegree: Bidegree,
    pub weight: u32,
}

impl CohenGenerator {
    pub fn new(base: LieWord, tower: u32) -> Self {
        let (mut bd, mut weight) = (base.bidegree, base.weight);
        for _ in 0..tower {
            bd = Bidegree::new(2 * bd.g, 2 * bd.d + 1);
            weight *= 2;
        }
        let name = match tower {
            0 => base.name.clone(),
            1 => format!("ξ{}", base.name),
            k => format!("ξ{}{}", superscript(k), base.name),
        };
        CohenGenerator {
            name,
            base,
            tower,
            prime: 2,
            bidegree: bd,
            weight,
        }
    }
}

fn superscript(k: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

/// All towers ξᵏ(y), k ≥ 0, over basic Lie words y, landing in the box.
/// The words exclude self-brackets [x,x]: over 𝔽₂ those vanish and ξx replaces them.
/// Sorted by bidegree, then base word order, then k.
pub fn cohen_generators_f2(gens: &[Generator], bounds: BoxBounds) -> Result<Vec<CohenGenerator>, FreeAlgError> {
    let words = lie_basis_without_squares(gens, bounds)?;
    let mut out: Vec<(usize, CohenGenerator)> = Vec::new();
    for (i, w) in words.into_iter().enumerate() {
        let mut k = 0;
        loop {
            let c = CohenGenerator::new(w.clone(), k);
            if !bounds.contains(c.bidegree) {
                break;
            }
            out.push((i, c));
            k += 1;
        }
    }
    out.sort_by_key(|a| (a.1.bidegree, a.0, a.1.tower));
    Ok(out.into_iter().map(|(_, c)| c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_towers() {
        let gens = [Generator::new("σ", 1, 0)];
        let got: Vec<(String, Bidegree)> = cohen_generators_f2(&gens, BoxBounds::new(4, 4))
            .unwrap()
            .into_iter()
            .map(|c| (c.name, c.bidegree))
            .collect();
        assert_eq!(
            got,
            vec![
                ("σ".to_string(), Bidegree::new(1, 0)),
                ("ξσ".to_string(), Bidegree::new(2, 1)),
                ("ξ²σ".to_string(), Bidegree::new(4, 3)),
            ]
        );
    }

    #[test]
    fn tau_tower() {
        let gens = [Generator::new("τ", 1, 1)];
        let got: Vec<Bidegree> = cohen_generators_f2(&gens, BoxBounds::new(2, 3)).unwrap().iter().map(|c| c.bidegree).collect();
        assert_eq!(got, vec![Bidegree::new(1, 1), Bidegree::new(2, 3)]);
    }
}
