use std::collections::BTreeMap;

use serde::Serialize;

use super::{cohen_generators_f2, free_graded_lie_basis, BoxBounds, FreeAlgError, Generator};
use crate::exactla::FieldKind;
use crate::grading::Bidegree;

/// Dimensions by bidegree for 1 ≤ g ≤ g_max, 0 ≤ d ≤ d_max. Every cell of the
/// box is present (zeros included); nothing outside it is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub field: FieldKind,
    pub bounds: BoxBounds,
    pub dims: BTreeMap<Bidegree, u64>,
}

impl BettiTable {
    pub fn get(&self, bd: Bidegree) -> Option<u64> {
        self.dims.get(&bd).copied()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (Bidegree, u64)> + '_ {
        self.dims.iter().filter(|e| *e.1 > 0).map(|(b, v)| (*b, *v))
    }
}

/// Dimensions of the free graded-commutative algebra on generators of the given
/// bidegrees; `exterior` marks generators whose square vanishes. Computed by
/// truncated multiplication of generating functions. The unit is included only
/// when `unital` is set.
pub fn count_free_commutative(gens: &[(Bidegree, bool)], bounds: BoxBounds, unital: bool) -> BTreeMap<Bidegree, u64> {
    let (gm, dm) = (bounds.g_max as usize, bounds.d_max as usize);
    let mut series = vec![vec![0u64; dm + 1]; gm + 1];
    series[0][0] = 1;
    for &(bd, exterior) in gens {
        let (g, d) = (bd.g as usize, bd.d as usize);
        if g > gm || d > dm {
            continue;
        }
        assert!(g > 0, "generators of genus 0 make the algebra infinite in each cell");
        // Multiply by 1/(1 − x) or (1 + x): for the polynomial case accumulate in increasing order.
        if exterior {
            for gi in (g..=gm).rev() {
                for di in (d..=dm).rev() {
                    series[gi][di] += series[gi - g][di - d];
                }
            }
        } else {
            for gi in g..=gm {
                for di in d..=dm {
                    series[gi][di] += series[gi - g][di - d];
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for (g, row) in series.iter().enumerate() {
        for (d, &v) in row.iter().enumerate() {
            if g == 0 && !(unital && d == 0) {
                continue;
            }
            out.insert(Bidegree::new(g as u32, d as u32), if g == 0 { 1 } else { v });
        }
    }
    out
}

/// Rational homology of the free E₂-algebra: the free graded-commutative
/// algebra (polynomial on even d, exterior on odd d) on the Lie basis.
/// Non-unital.
pub fn free_gerstenhaber_betti(gens: &[Generator], bounds: BoxBounds) -> Result<BettiTable, FreeAlgError> {
    let basis = free_graded_lie_basis(gens, bounds)?;
    let spec: Vec<(Bidegree, bool)> = basis.iter().map(|w| (w.bidegree, w.bidegree.d % 2 == 1)).collect();
    Ok(BettiTable {
        field: FieldKind::Rational,
        bounds,
        dims: count_free_commutative(&spec, bounds, false),
    })
}

/// Mod-2 homology of the free E₂-algebra: polynomial on every top-operation tower.
pub fn betti_table_f2(gens: &[Generator], bounds: BoxBounds) -> Result<BettiTable, FreeAlgError> {
    let cohen = cohen_generators_f2(gens, bounds)?;
    let spec: Vec<(Bidegree, bool)> = cohen.iter().map(|c| (c.bidegree, false)).collect();
    Ok(BettiTable {
        field: FieldKind::Prime(2),
        bounds,
        dims: count_free_commutative(&spec, bounds, false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_tau_degree_one_row() {
        let gens = [Generator::new("σ", 1, 0), Generator::new("τ", 1, 1)];
        let t = free_gerstenhaber_betti(&gens, BoxBounds::new(6, 1)).unwrap();
        let row: Vec<u64> = (1..=6).map(|g| t.get(Bidegree::new(g, 1)).unwrap()).collect();
        assert_eq!(row, vec![1, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn empty_generators_give_zero_table() {
        let t = free_gerstenhaber_betti(&[], BoxBounds::new(3, 3)).unwrap();
        assert!(t.nonzero().next().is_none());
        assert_eq!(t.dims.len(), 3 * 4);
    }

    #[test]
    fn sigma_rows() {
        let t = free_gerstenhaber_betti(&[Generator::new("σ", 1, 0)], BoxBounds::new(6, 2)).unwrap();
        for g in 1..=6 {
            assert_eq!(t.get(Bidegree::new(g, 0)), Some(1));
            assert_eq!(t.get(Bidegree::new(g, 1)), Some(u64::from(g >= 2)));
            assert_eq!(t.get(Bidegree::new(g, 2)), Some(0));
        }
    }

    #[test]
    fn f2_sigma_cells() {
        let t = betti_table_f2(&[Generator::new("σ", 1, 0)], BoxBounds::new(5, 5)).unwrap();
        assert_eq!(t.get(Bidegree::new(2, 1)), Some(1));
        assert_eq!(t.get(Bidegree::new(2, 0)), Some(1));
    }
}
