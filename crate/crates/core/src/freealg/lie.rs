use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{validate_generators, BoxBounds, FreeAlgError, Generator};
use crate::exactla::{Rationals, SpanSolver};
use crate::grading::Bidegree;

/// Binary bracket tree over generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LieTree {
    Leaf(usize),
    Bracket(Box<LieTree>, Box<LieTree>),
}

impl LieTree {
    pub fn leaf(i: usize) -> Self {
        LieTree::Leaf(i)
    }

    pub fn bracket(a: LieTree, b: LieTree) -> Self {
        LieTree::Bracket(Box::new(a), Box::new(b))
    }

    /// Leaves from left to right.
    pub fn letters(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut Vec<usize>) {
        match self {
            LieTree::Leaf(i) => out.push(*i),
            LieTree::Bracket(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
        }
    }

    pub fn bidegree(&self, gens: &[Generator]) -> Bidegree {
        let letters = self.letters();
        let g = letters.iter().map(|&i| gens[i].g).sum();
        let d = letters.iter().map(|&i| gens[i].d).sum::<u32>() + letters.len() as u32 - 1;
        Bidegree::new(g, d)
    }

    pub fn weight(&self, gens: &[Generator]) -> u32 {
        self.letters().iter().map(|&i| gens[i].r).sum()
    }

    pub fn shifted_parity(&self, gens: &[Generator]) -> u32 {
        (self.bidegree(gens).d + 1) % 2
    }

    pub fn render(&self, gens: &[Generator]) -> String {
        match self {
            LieTree::Leaf(i) => gens[*i].name.clone(),
            LieTree::Bracket(a, b) => format!("[{},{}]", a.render(gens), b.render(gens)),
        }
    }

    /// Image in the tensor algebra.
    pub fn to_poly(&self, gens: &[Generator]) -> LiePoly {
        match self {
            LieTree::Leaf(i) => LiePoly::letter(*i),
            LieTree::Bracket(a, b) => LiePoly::bracket(&a.to_poly(gens), &b.to_poly(gens), gens),
        }
    }
}

/// A basis element of the free graded Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LieWord {
    pub name: String,
    #[serde(skip)]
    pub tree: LieTree,
    pub bidegree: Bidegree,
    pub weight: u32,
}

impl LieWord {
    pub fn from_tree(tree: LieTree, gens: &[Generator]) -> Self {
        LieWord {
            name: tree.render(gens),
            bidegree: tree.bidegree(gens),
            weight: tree.weight(gens),
            tree,
        }
    }

    pub fn shifted_parity(&self) -> u32 {
        (self.bidegree.d + 1) % 2
    }

    /// Multiplicity of each generator.
    pub fn content(&self, ngens: usize) -> Vec<u32> {
        let mut c = vec![0; ngens];
        for i in self.tree.letters() {
            c[i] += 1;
        }
        c
    }
}

/// Element of the tensor algebra on the generators, with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LiePoly {
    terms: BTreeMap<Vec<u16>, BigRational>,
}

impl LiePoly {
    pub fn zero() -> Self {
        LiePoly::default()
    }

    pub fn letter(i: usize) -> Self {
        let mut p = LiePoly::zero();
        p.terms.insert(vec![i as u16], BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, word: Vec<u16>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LiePoly, c: &BigRational) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &BigRational) -> LiePoly {
        let mut p = LiePoly::zero();
        p.add_scaled(self, c);
        p
    }

    /// Concatenation product.
    pub fn mul(&self, other: &LiePoly) -> LiePoly {
        let mut p = LiePoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                p.add_term(w, x * y);
            }
        }
        p
    }

    /// Shifted parity of a homogeneous element (0 for the zero element).
    pub fn shifted_parity(&self, gens: &[Generator]) -> u32 {
        self.terms
            .keys()
            .next()
            .map_or(0, |w| w.iter().map(|&i| gens[i as usize].shifted_parity()).sum::<u32>() % 2)
    }

    /// `ab − (−1)^{s(a)s(b)} ba` for homogeneous `a`, `b`.
    pub fn bracket(a: &LiePoly, b: &LiePoly, gens: &[Generator]) -> LiePoly {
        let sign = if a.shifted_parity(gens) * b.shifted_parity(gens) % 2 == 1 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        let mut p = a.mul(b);
        p.add_scaled(&b.mul(a), &sign);
        p
    }

    /// Apply the derivation with the given values on generators. Its shifted
    /// degree is odd, so passing a letter of shifted parity s contributes (−1)^s.
    pub fn derive(&self, images: &HashMap<usize, LiePoly>, gens: &[Generator]) -> LiePoly {
        let mut out = LiePoly::zero();
        for (w, c) in &self.terms {
            let mut parity = 0;
            for k in 0..w.len() {
                if let Some(img) = images.get(&(w[k] as usize)) {
                    let sign = if parity % 2 == 0 { c.clone() } else { -c.clone() };
                    for (v, x) in &img.terms {
                        let mut word = w[..k].to_vec();
                        word.extend_from_slice(v);
                        word.extend_from_slice(&w[k + 1..]);
                        out.add_term(word, &sign * x);
                    }
                }
                parity += gens[w[k] as usize].shifted_parity();
            }
        }
        out
    }

    fn content(word: &[u16], ngens: usize) -> Vec<u32> {
        let mut c = vec![0; ngens];
        for &i in word {
            c[i as usize] += 1;
        }
        c
    }
}

/// Lyndon order on letters: later-declared generators are smaller, so that the
/// standard bracketing puts the first-declared generator on the right (`[ρ,σ]`).
fn rank(i: usize, n: usize) -> usize {
    n - 1 - i
}

fn is_lyndon(w: &[usize]) -> bool {
    let n = w.len();
    (1..n).all(|k| {
        let rot = w[k..].iter().chain(&w[..k]);
        w.iter().lt(rot)
    })
}

/// Standard factorization w = uv with v the longest proper Lyndon suffix.
fn standard_bracketing(w: &[usize]) -> LieTree {
    if w.len() == 1 {
        return LieTree::Leaf(w[0]);
    }
    let k = (1..w.len()).find(|&k| is_lyndon(&w[k..])).expect("a single letter is Lyndon");
    LieTree::bracket(standard_bracketing(&w[..k]), standard_bracketing(&w[k..]))
}

/// All Lyndon words (as generator indices) whose bracket bidegree lies in the box,
/// in Lyndon-order lexicographic order.
pub fn lyndon_words(gens: &[Generator], bounds: BoxBounds) -> Vec<Vec<usize>> {
    let n = gens.len();
    let mut out = Vec::new();
    let mut prefix: Vec<usize> = Vec::new();
    fn walk(gens: &[Generator], bounds: BoxBounds, prefix: &mut Vec<usize>, g: u32, dsum: u32, out: &mut Vec<Vec<usize>>) {
        let n = gens.len();
        for r in 0..n {
            let i = n - 1 - r;
            let (g2, d2) = (g + gens[i].g, dsum + gens[i].d);
            let d_total = d2 + prefix.len() as u32;
            if g2 > bounds.g_max || d_total > bounds.d_max {
                continue;
            }
            prefix.push(r);
            if is_lyndon(prefix) {
                out.push(prefix.clone());
            }
            walk(gens, bounds, prefix, g2, d2, out);
            prefix.pop();
        }
    }
    walk(gens, bounds, &mut prefix, 0, 0, &mut out);
    out.into_iter().map(|w| w.into_iter().map(|r| rank(r, n)).collect()).collect()
}

fn basis_words(gens: &[Generator], bounds: BoxBounds, squares: bool) -> Vec<LieWord> {
    let n = gens.len();
    let mut keyed: Vec<((Bidegree, Vec<usize>, bool), LieWord)> = Vec::new();
    for w in lyndon_words(gens, bounds) {
        let ranks: Vec<usize> = w.iter().map(|&i| rank(i, n)).collect();
        let tree = standard_bracketing(&ranks);
        let tree = relabel(&tree, n);
        let word = LieWord::from_tree(tree, gens);
        if squares && word.shifted_parity() == 1 {
            let sq = LieTree::bracket(word.tree.clone(), word.tree.clone());
            let bd = sq.bidegree(gens);
            if bounds.contains(bd) {
                keyed.push(((bd, ranks.clone(), true), LieWord::from_tree(sq, gens)));
            }
        }
        keyed.push(((word.bidegree, ranks, false), word));
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, w)| w).collect()
}

fn relabel(t: &LieTree, n: usize) -> LieTree {
    match t {
        LieTree::Leaf(r) => LieTree::Leaf(rank(*r, n)),
        LieTree::Bracket(a, b) => LieTree::bracket(relabel(a, n), relabel(b, n)),
    }
}

/// Basis of the free graded Lie algebra (bracket of degree +1) in the box:
/// standard bracketings of Lyndon words, plus `[w,w]` for each basis word `w`
/// of odd shifted parity (super-Lyndon extension). Sorted by (g, d), then word.
pub fn free_graded_lie_basis(gens: &[Generator], bounds: BoxBounds) -> Result<Vec<LieWord>, FreeAlgError> {
    bounds.check()?;
    validate_generators(gens)?;
    Ok(basis_words(gens, bounds, true))
}

/// Lyndon words only, without self-brackets. In characteristic 2 the squares
/// [x,x] vanish and their role is taken by the top operation.
pub fn lie_basis_without_squares(gens: &[Generator], bounds: BoxBounds) -> Result<Vec<LieWord>, FreeAlgError> {
    bounds.check()?;
    validate_generators(gens)?;
    Ok(basis_words(gens, bounds, false))
}

struct ContentSpace {
    members: Vec<usize>,
    columns: HashMap<Vec<u16>, usize>,
    solver: SpanSolver<Rationals>,
}

/// A Lie basis together with its tensor-algebra embedding, able to write any
/// Lie element of the box in the basis.
pub struct LieBasis {
    gens: Vec<Generator>,
    bounds: BoxBounds,
    words: Vec<LieWord>,
    polys: Vec<LiePoly>,
    spaces: HashMap<Vec<u32>, ContentSpace>,
}

impl LieBasis {
    pub fn new(gens: &[Generator], bounds: BoxBounds) -> Result<Self, FreeAlgError> {
        let words = free_graded_lie_basis(gens, bounds)?;
        let polys: Vec<LiePoly> = words.iter().map(|w| w.tree.to_poly(gens)).collect();
        let mut spaces: HashMap<Vec<u32>, ContentSpace> = HashMap::new();
        for (idx, (w, p)) in words.iter().zip(&polys).enumerate() {
            let space = spaces.entry(w.content(gens.len())).or_insert_with(|| ContentSpace {
                members: Vec::new(),
                columns: HashMap::new(),
                solver: SpanSolver::new(Rationals),
            });
            let mut v: Vec<(usize, BigRational)> = Vec::new();
            for (word, c) in p.terms() {
                let next = space.columns.len();
                let col = *space.columns.entry(word.clone()).or_insert(next);
                v.push((col, c.clone()));
            }
            v.sort_by_key(|e| e.0);
            let independent = space.solver.push(v);
            assert!(independent, "Lie basis element {} is dependent", w.name);
            space.members.push(idx);
        }
        Ok(LieBasis {
            gens: gens.to_vec(),
            bounds,
            words,
            polys,
            spaces,
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn bounds(&self) -> BoxBounds {
        self.bounds
    }

    pub fn words(&self) -> &[LieWord] {
        &self.words
    }

    pub fn poly(&self, i: usize) -> &LiePoly {
        &self.polys[i]
    }

    /// Index of the basis word with the given rendering.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.words.iter().position(|w| w.name == name)
    }

    /// Coordinates of a Lie element in the basis, sorted by basis index.
    pub fn express(&self, p: &LiePoly) -> Result<Vec<(usize, BigRational)>, FreeAlgError> {
        let mut by_content: BTreeMap<Vec<u32>, Vec<(&Vec<u16>, &BigRational)>> = BTreeMap::new();
        for (w, c) in p.terms() {
            by_content.entry(LiePoly::content(w, self.gens.len())).or_default().push((w, c));
        }
        let mut out = Vec::new();
        for (content, terms) in by_content {
            let space = self.spaces.get(&content).ok_or(FreeAlgError::NotInSpan)?;
            let mut v = Vec::with_capacity(terms.len());
            for (w, c) in terms {
                let col = space.columns.get(w).ok_or(FreeAlgError::NotInSpan)?;
                v.push((*col, c.clone()));
            }
            v.sort_by_key(|e| e.0);
            let coords = space.solver.express(v).ok_or(FreeAlgError::NotInSpan)?;
            out.extend(coords.into_iter().map(|(k, c)| (space.members[k], c)));
        }
        out.sort_by_key(|e| e.0);
        Ok(out)
    }

    /// The derivation of odd shifted degree determined by its values on
    /// generators, written in the basis: row i holds the coordinates of D(wᵢ).
    pub fn derivation(&self, images: &HashMap<usize, LiePoly>) -> Result<Vec<Vec<(usize, BigRational)>>, FreeAlgError> {
        self.polys
            .iter()
            .map(|p| self.express(&p.derive(images, &self.gens)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vanish_gens() -> Vec<Generator> {
        vec![Generator::new("σ", 1, 0), Generator::new("λ", 3, 2), Generator::new("ρ", 2, 2)]
    }

    #[test]
    fn figure_box() {
        let basis = free_graded_lie_basis(&vanish_gens(), BoxBounds::new(4, 3)).unwrap();
        let names: Vec<&str> = basis.iter().map(|w| w.name.as_str()).collect();
        assert_eq!(names, vec!["σ", "[σ,σ]", "ρ", "λ", "[ρ,σ]", "[λ,σ]"]);
    }

    #[test]
    fn single_even_generator_has_no_square() {
        let basis = free_graded_lie_basis(&[Generator::new("τ", 1, 1)], BoxBounds::new(3, 4)).unwrap();
        assert_eq!(basis.len(), 1);
    }

    #[test]
    fn single_odd_generator() {
        let basis = free_graded_lie_basis(&[Generator::new("σ", 1, 0)], BoxBounds::new(8, 8)).unwrap();
        let names: Vec<&str> = basis.iter().map(|w| w.name.as_str()).collect();
        assert_eq!(names, vec!["σ", "[σ,σ]"]);
    }

    #[test]
    fn jacobi_kills_triple_self_bracket() {
        let gens = [Generator::new("σ", 1, 0)];
        let s = LieTree::leaf(0);
        let ss = LieTree::bracket(s.clone(), s.clone());
        assert!(LieTree::bracket(s, ss).to_poly(&gens).is_zero());
    }

    #[test]
    fn derivation_of_rho_is_self_bracket() {
        let gens = vanish_gens();
        let basis = LieBasis::new(&gens, BoxBounds::new(4, 3)).unwrap();
        let ss = LieTree::bracket(LieTree::leaf(0), LieTree::leaf(0)).to_poly(&gens);
        let images = HashMap::from([(2usize, ss)]);
        let d = basis.derivation(&images).unwrap();
        let rho = basis.index_of("ρ").unwrap();
        assert_eq!(d[rho], vec![(basis.index_of("[σ,σ]").unwrap(), BigRational::one())]);
        // D[ρ,σ] = [[σ,σ],σ] = 0 by Jacobi.
        assert!(d[basis.index_of("[ρ,σ]").unwrap()].is_empty());
    }
}
