//! Symplectic spaces over 𝔽₂ and the isomorphism Sp₄(𝔽₂) ≅ 𝔖₆ given by the
//! action on the six totally non-orthogonal 5-subsets of 𝔽₂⁴.
//!
//! Vectors are bitmasks in the basis e₁, f₁, e₂, f₂, …: bit 2i is eᵢ₊₁ and
//! bit 2i+1 is fᵢ₊₁. Matrices act on column vectors.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SympError {
    #[error("subset machinery needs dimension 4, got {0}")]
    UnsupportedDimension(usize),
    #[error("matrix does not preserve the symplectic form")]
    NotSymplectic,
    #[error("matrix parse error: {0}")]
    Parse(String),
    #[error("the enumerated subsets do not match the reference labelling")]
    Unmatched,
}

/// 𝔽₂^{2n} with ⟨eᵢ, fᵢ⟩ = ⟨fᵢ, eᵢ⟩ = 1 and all other basis pairings 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SympSpace {
    pub n: usize,
}

impl SympSpace {
    pub fn new(n: usize) -> Self {
        assert!(n <= 16, "vectors are stored in 32 bits");
        SympSpace { n }
    }

    pub fn dimension(&self) -> usize {
        2 * self.n
    }

    pub fn pairing(&self, u: u32, v: u32) -> u8 {
        // Swapping eᵢ and fᵢ in v and intersecting counts the pairs (eᵢ, fᵢ).
        let even = 0x5555_5555u32;
        let swapped = ((v & even) << 1) | ((v >> 1) & even);
        ((u & swapped).count_ones() % 2) as u8
    }

    /// Nonzero vectors in increasing bitmask order.
    pub fn nonzero_vectors(&self) -> impl Iterator<Item = u32> {
        1..(1u32 << self.dimension())
    }

    pub fn format_vector(&self, v: u32) -> String {
        if v == 0 {
            return "0".into();
        }
        let terms: Vec<String> = (0..self.dimension())
            .filter(|b| v >> b & 1 == 1)
            .map(|b| format!("{}{}", if b % 2 == 0 { 'e' } else { 'f' }, b / 2 + 1))
            .collect();
        terms.join("+")
    }

    /// Parses `e1+f1+e2`.
    pub fn parse_vector(&self, s: &str) -> Result<u32, SympError> {
        let mut v = 0;
        for term in s.split('+').map(str::trim) {
            let (kind, idx) = term.split_at(1.min(term.len()));
            let i: usize = idx.parse().map_err(|_| SympError::Parse(format!("bad basis vector `{term}`")))?;
            if i == 0 || i > self.n {
                return Err(SympError::Parse(format!("bad basis vector `{term}`")));
            }
            let bit = 2 * (i - 1)
                + match kind {
                    "e" => 0,
                    "f" => 1,
                    _ => return Err(SympError::Parse(format!("bad basis vector `{term}`"))),
                };
            v ^= 1 << bit;
        }
        Ok(v)
    }
}

/// A 2n×2n matrix over 𝔽₂; row i is a bitmask of its entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SympMatrix {
    rows: Vec<u32>,
}

impl SympMatrix {
    /// Checks MᵀJM = J, i.e. ⟨Mu, Mv⟩ = ⟨u, v⟩ on basis vectors.
    pub fn new(space: SympSpace, rows: Vec<u32>) -> Result<Self, SympError> {
        if rows.len() != space.dimension() {
            return Err(SympError::Parse(format!("expected {} rows, got {}", space.dimension(), rows.len())));
        }
        let m = SympMatrix { rows };
        if !m.preserves(space) {
            return Err(SympError::NotSymplectic);
        }
        Ok(m)
    }

    pub fn identity(space: SympSpace) -> Self {
        SympMatrix {
            rows: (0..space.dimension()).map(|i| 1 << i).collect(),
        }
    }

    /// [[0, I], [I, 0]] in the basis e₁, f₁, e₂, f₂, …: swaps the first
    /// half of the symplectic pairs with the second.
    pub fn block_swap(space: SympSpace) -> Result<Self, SympError> {
        let d = space.dimension();
        let h = d / 2;
        let rows = (0..d).map(|i| 1u32 << ((i + h) % d)).collect();
        Self::new(space, rows)
    }

    fn preserves(&self, space: SympSpace) -> bool {
        let d = space.dimension();
        (0..d).all(|i| (0..d).all(|j| space.pairing(self.apply(1 << i), self.apply(1 << j)) == space.pairing(1 << i, 1 << j)))
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, r)| acc | (((r & v).count_ones() & 1) << i))
    }

    /// The product self · other (other acts first).
    pub fn mul(&self, other: &SympMatrix) -> SympMatrix {
        let d = self.rows.len();
        let cols: Vec<u32> = (0..d).map(|j| self.apply(other.apply(1 << j))).collect();
        SympMatrix {
            rows: (0..d)
                .map(|i| (0..d).fold(0, |acc, j| acc | ((cols[j] >> i & 1) << j)))
                .collect(),
        }
    }

    /// Rows separated by `;`, entries by `,` or whitespace.
    pub fn parse(space: SympSpace, s: &str) -> Result<Self, SympError> {
        let mut rows = Vec::new();
        for row in s.split(';') {
            let entries: Vec<&str> = row.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
            if entries.len() != space.dimension() {
                return Err(SympError::Parse(format!("row `{}` needs {} entries", row.trim(), space.dimension())));
            }
            let mut bits = 0;
            for (j, e) in entries.iter().enumerate() {
                match e.parse::<i64>() {
                    Ok(x) if x.rem_euclid(2) == 1 => bits |= 1 << j,
                    Ok(_) => {}
                    Err(_) => return Err(SympError::Parse(format!("`{e}` is not an integer"))),
                }
            }
            rows.push(bits);
        }
        Self::new(space, rows)
    }
}

impl fmt::Display for SympMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.rows.len();
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| (0..d).map(|j| (r >> j & 1).to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// A permutation of {1, …, k}, stored 0-based: `images[i]` is the image of i+1, minus one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation { images: (0..k).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let set: BTreeSet<usize> = images.iter().copied().collect();
        (set.len() == images.len() && set.iter().all(|&i| i < images.len())).then_some(Permutation { images })
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// Function composition: (self ∘ other)(i) = self(other(i)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    /// Cycles of length ≥ 2, each starting at its smallest point, 1-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.images[i];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        let sep = if self.images.len() > 9 { "," } else { "" };
        for c in cycles {
            let items: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", items.join(sep))?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The reference labelling of the six subsets, in the printed element order.
const REFERENCE_SUBSETS: [[&str; 5]; 6] = [
    ["e1", "f1", "e1+f1+e2", "e1+f1+f2", "e1+f1+e2+f2"],
    ["e2", "f2", "e2+f2+e1", "e2+f2+f1", "e2+f2+e1+f1"],
    ["e1", "e1+f1", "f1+e2", "f1+f2", "f1+e2+f2"],
    ["e2", "e2+f2", "f2+e1", "f2+f1", "f2+e1+f1"],
    ["f2", "e1+e2", "e1+f1+e2", "e2+f2", "f1+e2"],
    ["f1", "e1+e2", "e2+f2+e1", "e1+f1", "f2+e1"],
];

/// A 5-subset of 𝔽₂⁴ ∖ 0 with all pairwise pairings equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TnoSubset {
    /// Sorted bitmasks.
    pub vectors: [u32; 5],
}

impl TnoSubset {
    fn from_vectors(mut v: [u32; 5]) -> Self {
        v.sort_unstable();
        TnoSubset { vectors: v }
    }

    pub fn render(&self, space: SympSpace) -> String {
        let items: Vec<String> = self.vectors.iter().map(|&v| space.format_vector(v)).collect();
        format!("{{{}}}", items.join(", "))
    }

    fn image(&self, m: &SympMatrix) -> TnoSubset {
        Self::from_vectors(self.vectors.map(|v| m.apply(v)))
    }
}

/// All totally non-orthogonal 5-subsets of 𝔽₂⁴, labelled 1–6 in the
/// reference order. Exhaustive search visits subsets in lexicographic order
/// of their sorted bitmasks; the result is then matched against the
/// reference list and returned in label order.
pub fn totally_nonorthogonal_subsets(space: SympSpace) -> Result<Vec<TnoSubset>, SympError> {
    if space.dimension() != 4 {
        return Err(SympError::UnsupportedDimension(space.dimension()));
    }
    let vs: Vec<u32> = space.nonzero_vectors().collect();
    let mut found = Vec::new();
    let mut stack: Vec<Vec<u32>> = vec![Vec::new()];
    while let Some(partial) = stack.pop() {
        if partial.len() == 5 {
            found.push(TnoSubset::from_vectors(partial.try_into().unwrap()));
            continue;
        }
        let start = partial.last().copied().unwrap_or(0);
        for &v in vs.iter().rev().filter(|&&v| v > start) {
            if partial.iter().all(|&u| space.pairing(u, v) == 1) {
                let mut next = partial.clone();
                next.push(v);
                stack.push(next);
            }
        }
    }
    found.sort();
    let reference: Vec<TnoSubset> = REFERENCE_SUBSETS
        .iter()
        .map(|row| {
            let mut v = [0u32; 5];
            for (slot, s) in v.iter_mut().zip(row) {
                *slot = space.parse_vector(s)?;
            }
            Ok(TnoSubset::from_vectors(v))
        })
        .collect::<Result<_, SympError>>()?;
    let as_set: BTreeSet<&TnoSubset> = found.iter().collect();
    if found.len() != reference.len() || reference.iter().any(|r| !as_set.contains(r)) {
        return Err(SympError::Unmatched);
    }
    Ok(reference)
}

/// The permutation of the labelled subsets induced by a form-preserving matrix.
pub fn phi(m: &SympMatrix, subsets: &[TnoSubset]) -> Result<Permutation, SympError> {
    let index: HashMap<&TnoSubset, usize> = subsets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let images = subsets
        .iter()
        .map(|s| index.get(&s.image(m)).copied().ok_or(SympError::NotSymplectic))
        .collect::<Result<Vec<usize>, _>>()?;
    Permutation::from_images(images).ok_or(SympError::NotSymplectic)
}

/// Every form-preserving 4×4 matrix over 𝔽₂, by brute force over all 2¹⁶ matrices.
pub fn enumerate_sp4() -> Vec<SympMatrix> {
    let space = SympSpace::new(2);
    (0u32..1 << 16)
        .into_par_iter()
        .filter_map(|bits| {
            let rows = (0..4).map(|i| bits >> (4 * i) & 0xf).collect();
            SympMatrix::new(space, rows).ok()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomomorphismCheck {
    All,
    Random { pairs: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsomorphismReport {
    pub group_order: usize,
    pub symmetric_group_order: usize,
    /// Every matrix maps the six subsets to themselves.
    pub subsets_permuted: bool,
    pub kernel_size: usize,
    pub image_size: usize,
    pub homomorphism_pairs_checked: usize,
    pub homomorphism_holds: bool,
    /// A matrix whose image is a transposition, and that transposition.
    pub transposition: Option<(String, Permutation)>,
    pub six_cycle: Option<(String, Permutation)>,
    pub swap_permutation: Permutation,
    pub swap_sign: i8,
    pub is_isomorphism: bool,
}

pub fn verify_isomorphism(check: HomomorphismCheck) -> Result<IsomorphismReport, SympError> {
    let space = SympSpace::new(2);
    let subsets = totally_nonorthogonal_subsets(space)?;
    let group = enumerate_sp4();
    let perms: Vec<Option<Permutation>> = group.iter().map(|m| phi(m, &subsets).ok()).collect();
    let subsets_permuted = perms.iter().all(Option::is_some);
    let perms: Vec<Permutation> = perms.into_iter().flatten().collect();
    let lookup: HashMap<&SympMatrix, &Permutation> = group.iter().zip(&perms).collect();
    let kernel_size = perms.iter().filter(|p| p.is_identity()).count();
    let image: BTreeSet<&Permutation> = perms.iter().collect();
    let pairs: Vec<(usize, usize)> = match check {
        HomomorphismCheck::All => (0..group.len()).flat_map(|i| (0..group.len()).map(move |j| (i, j))).collect(),
        HomomorphismCheck::Random { pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..pairs).map(|_| (rng.gen_range(0..group.len()), rng.gen_range(0..group.len()))).collect()
        }
    };
    let homomorphism_holds = subsets_permuted
        && pairs.par_iter().all(|&(i, j)| {
            let ab = group[i].mul(&group[j]);
            lookup.get(&ab).is_some_and(|p| **p == perms[i].compose(&perms[j]))
        });
    let witness = |ty: &[usize]| {
        group
            .iter()
            .zip(&perms)
            .find(|(_, p)| p.cycle_type() == ty)
            .map(|(m, p)| (m.to_string(), p.clone()))
    };
    let swap = phi(&SympMatrix::block_swap(space)?, &subsets)?;
    let symmetric_group_order = 720;
    Ok(IsomorphismReport {
        group_order: group.len(),
        symmetric_group_order,
        subsets_permuted,
        kernel_size,
        image_size: image.len(),
        homomorphism_pairs_checked: pairs.len(),
        homomorphism_holds,
        transposition: witness(&[2]),
        six_cycle: witness(&[6]),
        swap_sign: swap.sign(),
        swap_permutation: swap,
        is_isomorphism: subsets_permuted
            && homomorphism_holds
            && kernel_size == 1
            && group.len() == symmetric_group_order
            && image.len() == symmetric_group_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp() -> SympSpace {
        SympSpace::new(2)
    }

    #[test]
    fn pairing_is_alternating_and_standard() {
        let s = sp();
        for v in 0..16 {
            assert_eq!(s.pairing(v, v), 0);
        }
        assert_eq!(s.pairing(0b0001, 0b0010), 1);
        assert_eq!(s.pairing(0b0001, 0b0100), 0);
        assert_eq!(s.pairing(0b0100, 0b1000), 1);
    }

    #[test]
    fn vector_names() {
        let s = sp();
        assert_eq!(s.format_vector(0b1011), "e1+f1+f2");
        assert_eq!(s.parse_vector("f2+e1+f1").unwrap(), 0b1011);
        assert!(s.parse_vector("g1").is_err());
        assert!(s.parse_vector("e3").is_err());
    }

    #[test]
    fn permutation_basics() {
        let p = Permutation::from_images(vec![1, 0, 3, 2, 5, 4]).unwrap();
        assert_eq!(p.to_string(), "(12)(34)(56)");
        assert_eq!(p.sign(), -1);
        assert!(p.compose(&p).is_identity());
        let c = Permutation::from_images(vec![1, 2, 0]).unwrap();
        // c∘c sends 1 ↦ 3.
        assert_eq!(c.compose(&c).apply(0), 2);
        assert_eq!(Permutation::identity(6).to_string(), "()");
        assert!(Permutation::from_images(vec![0, 0]).is_none());
    }

    #[test]
    fn matrices() {
        let s = sp();
        let swap = SympMatrix::parse(s, "0,0,1,0;0,0,0,1;1,0,0,0;0,1,0,0").unwrap();
        assert_eq!(swap, SympMatrix::block_swap(s).unwrap());
        assert_eq!(swap.apply(0b0001), 0b0100);
        assert_eq!(swap.mul(&swap), SympMatrix::identity(s));
        assert_eq!(SympMatrix::parse(s, &swap.to_string()).unwrap(), swap);
        // e₁ ↦ e₁ + e₂ with everything else fixed breaks ⟨e₁, f₂⟩ = 0.
        assert_eq!(SympMatrix::parse(s, "1,0,0,0;0,1,0,0;1,0,1,0;0,0,0,1"), Err(SympError::NotSymplectic));
        assert!(SympMatrix::parse(s, "1,0;0,1").is_err());
    }

    #[test]
    fn six_subsets() {
        let subsets = totally_nonorthogonal_subsets(sp()).unwrap();
        assert_eq!(subsets.len(), 6);
        assert_eq!(subsets[0].render(sp()), "{e1, f1, e1+f1+e2, e1+f1+f2, e1+f1+e2+f2}");
        assert!(totally_nonorthogonal_subsets(SympSpace::new(3)).is_err());
    }

    #[test]
    fn swap_and_identity() {
        let subsets = totally_nonorthogonal_subsets(sp()).unwrap();
        assert!(phi(&SympMatrix::identity(sp()), &subsets).unwrap().is_identity());
        let p = phi(&SympMatrix::block_swap(sp()).unwrap(), &subsets).unwrap();
        assert_eq!(p.to_string(), "(12)(34)(56)");
        assert_eq!(p.sign(), -1);
    }
}
