use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::FinitePoset;
use crate::exactla::{normalize, rank_of_rows, sparse_invariant_factors, with_field, Field, FieldKind};

/// Order complex of a finite poset: k-simplices are chains x₀ < … < x_k,
/// stored bottom to top and sorted lexicographically within each dimension.
#[derive(Clone, Debug)]
pub struct OrderComplex {
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl OrderComplex {
    pub fn of(p: &FinitePoset) -> Self {
        let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut stack: Vec<Vec<usize>> = p.linear_extension().iter().rev().map(|&v| vec![v]).collect();
        while let Some(chain) = stack.pop() {
            let last = *chain.last().unwrap();
            for &w in p.linear_extension().iter().rev() {
                if p.lt(last, w) {
                    let mut longer = chain.clone();
                    longer.push(w);
                    stack.push(longer);
                }
            }
            let k = chain.len() - 1;
            if simplices.len() <= k {
                simplices.resize(k + 1, Vec::new());
            }
            simplices[k].push(chain);
        }
        for s in &mut simplices {
            s.sort();
        }
        let index = simplices
            .iter()
            .map(|s| s.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
            .collect();
        OrderComplex { simplices, index }
    }

    /// Dimension of the complex; −1 for the empty complex.
    pub fn dimension(&self) -> i64 {
        self.simplices.len() as i64 - 1
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    /// Number of j-simplices, counting the empty simplex in degree −1.
    pub fn augmented_count(&self, j: i64) -> usize {
        match j {
            j if j < -1 => 0,
            -1 => 1,
            j => self.simplices(j as usize).len(),
        }
    }

    /// Number of k-simplices for k = 0, 1, ….
    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    /// Σ (−1)^k (number of k-simplices), over k ≥ −1.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        -1 + self
            .simplices
            .iter()
            .enumerate()
            .map(|(k, s)| if k % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum::<i64>()
    }

    fn lookup(&self, chain: &[usize]) -> Option<usize> {
        if chain.is_empty() {
            return Some(0);
        }
        self.index.get(chain.len() - 1)?.get(chain).copied()
    }

    /// Rows ∂σ for the j-simplices σ, in coordinates of the (j−1)-simplices.
    fn boundary_rows(&self, j: i64) -> Vec<Vec<(usize, i64)>> {
        if j < 0 {
            return vec![Vec::new(); self.augmented_count(j)];
        }
        self.simplices(j as usize)
            .iter()
            .map(|chain| {
                let mut row: Vec<(usize, i64)> = (0..chain.len())
                    .map(|i| {
                        let mut face = chain.clone();
                        face.remove(i);
                        (self.lookup(&face).expect("faces of chains are chains"), if i % 2 == 0 { 1 } else { -1 })
                    })
                    .collect();
                row.sort_unstable();
                row
            })
            .collect()
    }

    /// The augmented simplicial chain complex, starting in degree −1.
    pub fn chain_complex(&self) -> ChainComplex {
        let top = self.dimension();
        ChainComplex {
            bottom: -1,
            dims: (-1..=top).map(|j| self.augmented_count(j)).collect(),
            boundaries: (-1..=top).map(|j| self.boundary_rows(j)).collect(),
        }
    }

    /// Mapping cone of the chain map induced by `map` (vertex images in
    /// `target`, assumed order-preserving). Degenerate image chains map to 0.
    /// Cone_k = C̃_{k−1}(self) ⊕ C̃_k(target) with d(a, b) = (−∂a, f(a) + ∂b).
    pub fn mapping_cone(&self, target: &OrderComplex, map: &[usize]) -> ChainComplex {
        let top = (self.dimension() + 1).max(target.dimension());
        let xs = |j: i64| self.augmented_count(j);
        let mut dims = Vec::new();
        let mut boundaries = Vec::new();
        for k in -1..=top {
            dims.push(xs(k - 1) + target.augmented_count(k));
            let offset = xs(k - 2);
            let mut rows = Vec::new();
            for (a, row) in self.boundary_rows(k - 1).into_iter().enumerate() {
                let mut out: Vec<(usize, i64)> = row.into_iter().map(|(c, v)| (c, -v)).collect();
                if let Some(img) = self.image_of(k - 1, a, map) {
                    let idx = target.lookup(&img).expect("images of chains are chains");
                    out.push((offset + idx, 1));
                }
                rows.push(out);
            }
            for row in target.boundary_rows(k) {
                rows.push(row.into_iter().map(|(c, v)| (offset + c, v)).collect());
            }
            boundaries.push(rows);
        }
        ChainComplex { bottom: -1, dims, boundaries }
    }

    fn image_of(&self, j: i64, a: usize, map: &[usize]) -> Option<Vec<usize>> {
        if j < 0 {
            return Some(Vec::new());
        }
        let img: Vec<usize> = self.simplices[j as usize][a].iter().map(|&v| map[v]).collect();
        if img.windows(2).any(|w| w[0] == w[1]) {
            None
        } else {
            Some(img)
        }
    }
}

/// A bounded chain complex of finitely generated free abelian groups with
/// integer boundary matrices. `boundaries[i]` has one row per basis element
/// in degree `bottom + i`, in coordinates of degree `bottom + i − 1`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub bottom: i64,
    pub dims: Vec<usize>,
    pub boundaries: Vec<Vec<Vec<(usize, i64)>>>,
}

/// Coefficients for homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Integers,
    Field(FieldKind),
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Field(k) => write!(f, "{k}"),
        }
    }
}

impl Serialize for Coefficients {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for Coefficients {
    type Err = crate::exactla::LaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Z" | "z" | "ZZ" => Ok(Coefficients::Integers),
            other => other.parse().map(Coefficients::Field),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: i64,
    pub rank: usize,
    #[serde(serialize_with = "crate::ser::bigints")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homological connectivity: the largest n with H̃ᵢ = 0 for all i ≤ n, or
/// `Acyclic` when no reduced homology survives at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connectivity {
    Finite(i64),
    Acyclic,
}

impl Connectivity {
    /// Whether the space is (homologically) n-connected. Every space is
    /// n-connected for n ≤ −2.
    pub fn at_least(self, n: i64) -> bool {
        match self {
            _ if n <= -2 => true,
            Connectivity::Acyclic => true,
            Connectivity::Finite(c) => c >= n,
        }
    }

    /// The finite value, with `Acyclic` replaced by `cap`.
    pub fn capped(self, cap: i64) -> i64 {
        match self {
            Connectivity::Finite(c) => c.min(cap),
            Connectivity::Acyclic => cap,
        }
    }
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Connectivity::Finite(n) => write!(f, "{n}"),
            Connectivity::Acyclic => write!(f, "inf"),
        }
    }
}

impl Serialize for Connectivity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Connectivity::Finite(n) => s.serialize_i64(*n),
            Connectivity::Acyclic => s.serialize_str("inf"),
        }
    }
}

/// Reduced homology in every degree of a complex, and its connectivity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    pub coefficients: Coefficients,
    pub groups: Vec<HomologyGroup>,
    pub connectivity: Connectivity,
}

impl ConnectivityReport {
    pub fn group(&self, degree: i64) -> Option<&HomologyGroup> {
        self.groups.iter().find(|g| g.degree == degree)
    }

    /// Σ (−1)^k rank H̃_k.
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|g| if g.degree.rem_euclid(2) == 0 { g.rank as i64 } else { -(g.rank as i64) })
            .sum()
    }

    /// Nonzero groups as `degree: group` pairs.
    pub fn summary(&self) -> String {
        let parts: Vec<String> = self
            .groups
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| format!("H{}={}", g.degree, g))
            .collect();
        if parts.is_empty() {
            "acyclic".to_string()
        } else {
            parts.join(", ")
        }
    }
}

impl ChainComplex {
    pub fn homology(&self, coefficients: Coefficients) -> ConnectivityReport {
        // (rank, torsion) of each boundary map.
        let maps: Vec<(usize, Vec<BigInt>)> = self
            .boundaries
            .par_iter()
            .enumerate()
            .map(|(i, rows)| {
                let ncols = if i == 0 { 0 } else { self.dims[i - 1] };
                match coefficients {
                    Coefficients::Integers => {
                        let factors = sparse_invariant_factors(ncols, rows);
                        let torsion = factors.iter().filter(|f| !f.is_one()).cloned().collect();
                        (factors.len(), torsion)
                    }
                    Coefficients::Field(kind) => (field_rank(kind, ncols, rows), Vec::new()),
                }
            })
            .collect();
        let groups: Vec<HomologyGroup> = (0..self.dims.len())
            .map(|i| {
                let next = maps.get(i + 1);
                HomologyGroup {
                    degree: self.bottom + i as i64,
                    rank: self.dims[i] - maps[i].0 - next.map_or(0, |m| m.0),
                    torsion: next.map_or(Vec::new(), |m| m.1.clone()),
                }
            })
            .collect();
        let connectivity = match groups.iter().find(|g| !g.is_zero()) {
            Some(g) => Connectivity::Finite(g.degree - 1),
            None => Connectivity::Acyclic,
        };
        ConnectivityReport { coefficients, groups, connectivity }
    }
}

fn field_rank(kind: FieldKind, ncols: usize, rows: &[Vec<(usize, i64)>]) -> usize {
    with_field!(kind, f => {
        let conv = rows.iter().map(|r| normalize(&f, r.iter().map(|&(c, v)| (c, f.from_int(v))).collect()));
        rank_of_rows(&f, ncols, conv)
    })
}
