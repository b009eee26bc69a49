//! Independent oracle for free graded Lie algebra dimensions, shared by test
//! targets.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use workbench_core::exactla::{Rationals, RowReducer, SparseVec};

pub type Bd = (u32, u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Col {
    Gen(usize),
    Pair(Bd, usize, Bd, usize),
}

/// One bidegree of the oracle: the spanning set (generators and brackets of
/// lower basis elements) and, per spanning element, its image in the quotient.
struct Layer {
    index: HashMap<Col, usize>,
    proj: Vec<SparseVec<BigRational>>,
    dim: usize,
}

fn sign(bd1: Bd, bd2: Bd) -> BigRational {
    // Shifted degree d + 1.
    if ((bd1.1 + 1) * (bd2.1 + 1)).is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

fn collect(acc: BTreeMap<usize, BigRational>) -> SparseVec<BigRational> {
    acc.into_iter().filter(|e| !e.1.is_zero()).collect()
}

/// The free graded Lie algebra built degree by degree as a quotient:
/// L_b = (generators of bidegree b ⊕ ⨁ L_{b₁} ⊗ L_{b₂}) / (antisymmetry, Jacobi),
/// the tensor factors ranging over b₁ + b₂ + (0,1) = b. Ranks via exact row reduction.
pub fn relation_quotient(gens: &[(u32, u32)], g_max: u32, d_max: u32) -> BTreeMap<Bd, usize> {
    let mut layers: BTreeMap<Bd, Layer> = BTreeMap::new();
    for g in 1..=g_max {
        for d in 0..=d_max {
            let bd = (g, d);
            let mut cols: Vec<Col> = (0..gens.len()).filter(|&i| gens[i] == bd).map(Col::Gen).collect();
            for (&b1, l1) in &layers {
                if b1.0 >= g || b1.1 >= d {
                    continue;
                }
                let b2 = (g - b1.0, d - b1.1 - 1);
                if let Some(l2) = layers.get(&b2) {
                    for i in 0..l1.dim {
                        for j in 0..l2.dim {
                            cols.push(Col::Pair(b1, i, b2, j));
                        }
                    }
                }
            }
            let index: HashMap<Col, usize> = cols.iter().enumerate().map(|(k, c)| (*c, k)).collect();
            let mut red = RowReducer::new(Rationals, cols.len());
            for c in &cols {
                if let Col::Pair(b1, i, b2, j) = *c {
                    let mut acc = BTreeMap::new();
                    *acc.entry(index[c]).or_insert_with(BigRational::zero) += BigRational::one();
                    *acc.entry(index[&Col::Pair(b2, j, b1, i)]).or_insert_with(BigRational::zero) += sign(b1, b2);
                    red.insert(collect(acc));
                }
            }
            // [x, w] for x basis at b1 and w ∈ L_b', expanded in the spanning set.
            let bracket_with = |acc: &mut BTreeMap<usize, BigRational>, c: BigRational, b1: Bd, i: usize, bp: Bd, w: &SparseVec<BigRational>| {
                for (m, v) in w {
                    *acc.entry(index[&Col::Pair(b1, i, bp, *m)]).or_insert_with(BigRational::zero) += &c * v;
                }
            };
            let keys: Vec<Bd> = layers.keys().copied().collect();
            for &b1 in &keys {
                for &b2 in &keys {
                    if b1.0 + b2.0 >= g || b1.1 + b2.1 + 2 > d {
                        continue;
                    }
                    let b3 = (g - b1.0 - b2.0, d - b1.1 - b2.1 - 2);
                    if !layers.contains_key(&b3) {
                        continue;
                    }
                    let inner = |bx: Bd, ix: usize, by: Bd, iy: usize| -> (Bd, SparseVec<BigRational>) {
                        let bxy = (bx.0 + by.0, bx.1 + by.1 + 1);
                        // A missing layer is a zero space, so the bracket vanishes.
                        let v = layers.get(&bxy).map_or_else(Vec::new, |l| l.proj[l.index[&Col::Pair(bx, ix, by, iy)]].clone());
                        (bxy, v)
                    };
                    for x in 0..layers[&b1].dim {
                        for y in 0..layers[&b2].dim {
                            for z in 0..layers[&b3].dim {
                                let mut acc = BTreeMap::new();
                                let (byz, yz) = inner(b2, y, b3, z);
                                bracket_with(&mut acc, sign(b1, b3), b1, x, byz, &yz);
                                let (bzx, zx) = inner(b3, z, b1, x);
                                bracket_with(&mut acc, sign(b2, b1), b2, y, bzx, &zx);
                                let (bxy, xy) = inner(b1, x, b2, y);
                                bracket_with(&mut acc, sign(b3, b2), b3, z, bxy, &xy);
                                red.insert(collect(acc));
                            }
                        }
                    }
                }
            }
            let rref = red.reduced_rows();
            let mut pivot_row = vec![None; cols.len()];
            for (r, row) in rref.iter().enumerate() {
                pivot_row[row[0].0] = Some(r);
            }
            let mut quotient_index = vec![usize::MAX; cols.len()];
            let mut dim = 0;
            for k in 0..cols.len() {
                if pivot_row[k].is_none() {
                    quotient_index[k] = dim;
                    dim += 1;
                }
            }
            let proj = (0..cols.len())
                .map(|k| match pivot_row[k] {
                    None => vec![(quotient_index[k], BigRational::one())],
                    Some(r) => rref[r][1..].iter().map(|(j, v)| (quotient_index[*j], -v)).collect(),
                })
                .collect();
            if dim > 0 {
                layers.insert(bd, Layer { index, proj, dim });
            }
        }
    }
    layers.into_iter().map(|(b, l)| (b, l.dim)).collect()
}
