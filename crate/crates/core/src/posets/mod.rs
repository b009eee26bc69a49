//! Finite posets, their order complexes and reduced homology, and checkers for
//! the poset-map connectivity theorem and the poset Nerve Theorem.
//!
//! "n-connected" is always read homologically: reduced homology of the order
//! complex (or of the mapping cone, for maps) vanishes through degree n.

mod fuzz;
mod homology;
mod theorems;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

pub use fuzz::{
    minimize, random_poset, run_campaign, Campaign, Counterexample, FuzzConfig, FuzzSummary, MapInstance, NerveInstance,
    Shrink,
};
pub use homology::{ChainComplex, Coefficients, Connectivity, ConnectivityReport, HomologyGroup, OrderComplex};
pub use theorems::{
    check_nerve_theorem, check_poset_map_theorem, parse_cover, parse_weights, wreath_poset, ConnectivityCheck, CoverFunctor,
    ElementDiagnostic, NerveElementDiagnostic, NerveReport, PosetMap, PosetMapReport, Variant, WeightFunction, WreathPoset,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("relation {0} < {0} is not strict")]
    Reflexive(String),
    #[error("relations contain a cycle through `{0}`")]
    Cycle(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("map is not order-preserving: {lo} ≤ {hi} but {f_lo} ≰ {f_hi}")]
    NotOrderPreserving { lo: String, hi: String, f_lo: String, f_hi: String },
    #[error("map has {got} values for a source of size {expected}")]
    MapSize { expected: usize, got: usize },
    #[error("weight function is missing a value for `{0}`")]
    MissingWeight(String),
    #[error("F({a}) is not closed: contains {y} but not {x} ≤ {y}")]
    NotClosed { a: String, x: String, y: String },
    #[error("F is not contravariant: {a} ≤ {b} but F({b}) ⊄ F({a})")]
    NotContravariant { a: String, b: String },
}

/// A finite poset on named elements. The order is stored both as its
/// transitive reduction (the cover relation) and as the full closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    covers: Vec<(usize, usize)>,
    le: Vec<Vec<bool>>,
    topo: Vec<usize>,
}

impl FinitePoset {
    /// Builds the poset generated by strict relations `a < b` (indices into
    /// `names`). Relations need not be covers; the reduction is recomputed.
    pub fn new(names: Vec<String>, relations: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = names.len();
        let mut seen = HashMap::new();
        for (i, s) in names.iter().enumerate() {
            if seen.insert(s.as_str(), i).is_some() {
                return Err(PosetError::DuplicateElement(s.clone()));
            }
        }
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(PosetError::UnknownElement(format!("#{}", a.max(b))));
            }
            if a == b {
                return Err(PosetError::Reflexive(names[a].clone()));
            }
            succ[a].push(b);
            indeg[b] += 1;
        }
        // Kahn's algorithm, smallest index first so the extension is canonical.
        let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            topo.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&i| indeg[i] > 0).unwrap();
            return Err(PosetError::Cycle(names[stuck].clone()));
        }
        let mut le = vec![vec![false; n]; n];
        for &v in topo.iter().rev() {
            le[v][v] = true;
            for &w in &succ[v] {
                for u in 0..n {
                    if le[w][u] {
                        le[v][u] = true;
                    }
                }
            }
        }
        Ok(Self::assemble(names, le, topo))
    }

    /// Builds a poset from a reflexive, antisymmetric, transitive predicate.
    pub fn from_order(names: Vec<String>, le: impl Fn(usize, usize) -> bool) -> Result<Self, PosetError> {
        let n = names.len();
        let mut rel = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && le(a, b) {
                    rel.push((a, b));
                }
            }
        }
        Self::new(names, &rel)
    }

    fn assemble(names: Vec<String>, le: Vec<Vec<bool>>, topo: Vec<usize>) -> Self {
        let n = names.len();
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && le[a][b] && !(0..n).any(|c| c != a && c != b && le[a][c] && le[c][b]) {
                    covers.push((a, b));
                }
            }
        }
        FinitePoset { names, covers, le, topo }
    }

    /// The totally ordered poset 0 < 1 < … < n−1.
    pub fn chain(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::from_order(names, |a, b| a <= b).expect("a chain is a poset")
    }

    pub fn antichain(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::from_order(names, |a, b| a == b).expect("an antichain is a poset")
    }

    /// Proper nonempty subsets of {0, …, m−1} under inclusion: the face poset
    /// of ∂Δ^{m−1}.
    pub fn proper_subsets(m: usize) -> Self {
        let masks: Vec<u32> = (1..(1u32 << m) - 1).collect();
        let names = masks
            .iter()
            .map(|&s| {
                let items: Vec<String> = (0..m).filter(|i| s >> i & 1 == 1).map(|i| i.to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        Self::from_order(names, |a, b| masks[a] & !masks[b] == 0).expect("inclusion is a partial order")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// A linear extension: every element appears after everything below it.
    pub fn linear_extension(&self) -> &[usize] {
        &self.topo
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le[a][b]
    }

    /// The subposet on `keep` (in that order) with the induced order.
    pub fn induced(&self, keep: &[usize]) -> FinitePoset {
        let names = keep.iter().map(|&i| self.names[i].clone()).collect();
        Self::from_order(names, |a, b| self.le[keep[a]][keep[b]]).expect("induced order is a partial order")
    }

    /// 𝒴_{<y}.
    pub fn below(&self, y: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.lt(x, y)).collect()
    }

    /// 𝒴_{>y}.
    pub fn above(&self, y: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.lt(y, x)).collect()
    }

    pub fn opposite(&self) -> FinitePoset {
        Self::from_order(self.names.clone(), |a, b| self.le[b][a]).expect("opposite of a poset is a poset")
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|x| self.le[x][m]))
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|x| self.le[m][x]))
    }

    /// Whether `set` is closed downwards.
    pub fn is_closed(&self, set: &[bool]) -> bool {
        self.closure_violation(set).is_none()
    }

    /// Some pair x ≤ y with y ∈ set and x ∉ set.
    pub fn closure_violation(&self, set: &[bool]) -> Option<(usize, usize)> {
        for y in (0..self.len()).filter(|&y| set[y]) {
            if let Some(x) = (0..self.len()).find(|&x| !set[x] && self.le[x][y]) {
                return Some((x, y));
            }
        }
        None
    }

    /// The down-closure of `set`.
    pub fn down_closure(&self, set: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|&x| set.iter().any(|&y| self.le[x][y])).collect()
    }

    pub fn order_complex(&self) -> OrderComplex {
        OrderComplex::of(self)
    }

    pub fn reduced_homology(&self, coefficients: Coefficients) -> ConnectivityReport {
        self.order_complex().chain_complex().homology(coefficients)
    }

    /// Integral homological connectivity of the order complex.
    pub fn connectivity(&self) -> Connectivity {
        self.reduced_homology(Coefficients::Integers).connectivity
    }

    /// Parses lines `element` and `a < b` (`#` starts a comment). Elements
    /// first mentioned in a relation are added in order of appearance.
    pub fn parse(text: &str) -> Result<Self, PosetError> {
        let mut names: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut rel = Vec::new();
        let mut intern = |s: &str, names: &mut Vec<String>| -> usize {
            *index.entry(s.to_string()).or_insert_with(|| {
                names.push(s.to_string());
                names.len() - 1
            })
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split('<').map(str::trim).collect();
            if parts.iter().any(|p| p.is_empty() || p.contains(char::is_whitespace)) {
                return Err(PosetError::Parse {
                    line: lineno + 1,
                    msg: format!("expected `element` or `a < b`, found `{line}`"),
                });
            }
            let ids: Vec<usize> = parts.iter().map(|p| intern(p, &mut names)).collect();
            for w in ids.windows(2) {
                rel.push((w[0], w[1]));
            }
        }
        Self::new(names, &rel)
    }

    /// Elements one per line, then the cover relations.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.names {
            let _ = writeln!(out, "{s}");
        }
        for &(a, b) in &self.covers {
            let _ = writeln!(out, "{} < {}", self.names[a], self.names[b]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_covers() {
        let p = FinitePoset::parse("a < b\nb < c\na < c\nd").unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.le(0, 2));
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
        assert_eq!(FinitePoset::parse(&p.to_text()).unwrap(), p);
        assert_eq!(p.maximum(), None);
        assert_eq!(p.below(2), vec![0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(FinitePoset::parse("a < b\nb < a"), Err(PosetError::Cycle(_))));
        assert!(matches!(FinitePoset::parse("a < a"), Err(PosetError::Reflexive(_))));
        assert!(matches!(FinitePoset::parse("a b"), Err(PosetError::Parse { line: 1, .. })));
        assert!(FinitePoset::new(vec!["x".into(), "x".into()], &[]).is_err());
    }

    #[test]
    fn subsets_and_opposite() {
        let p = FinitePoset::proper_subsets(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.covers().len(), 6);
        let op = p.opposite();
        assert!(op.le(p.index_of("{0,1}").unwrap(), p.index_of("{0}").unwrap()));
        assert_eq!(FinitePoset::chain(4).maximum(), Some(3));
    }

    #[test]
    fn closed_sets() {
        let p = FinitePoset::chain(3);
        assert!(p.is_closed(&[true, true, false]));
        assert_eq!(p.closure_violation(&[false, true, false]), Some((0, 1)));
        assert_eq!(p.down_closure(&[1]), vec![0, 1]);
    }
}
