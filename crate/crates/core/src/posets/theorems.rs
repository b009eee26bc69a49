use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::{Coefficients, Connectivity, FinitePoset, PosetError};

/// An order-preserving map of finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetMap {
    source: FinitePoset,
    target: FinitePoset,
    map: Vec<usize>,
}

impl PosetMap {
    pub fn new(source: FinitePoset, target: FinitePoset, map: Vec<usize>) -> Result<Self, PosetError> {
        if map.len() != source.len() {
            return Err(PosetError::MapSize {
                expected: source.len(),
                got: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.len()) {
            return Err(PosetError::UnknownElement(format!("#{bad}")));
        }
        for &(a, b) in source.covers() {
            if !target.le(map[a], map[b]) {
                return Err(PosetError::NotOrderPreserving {
                    lo: source.name(a).to_string(),
                    hi: source.name(b).to_string(),
                    f_lo: target.name(map[a]).to_string(),
                    f_hi: target.name(map[b]).to_string(),
                });
            }
        }
        Ok(PosetMap { source, target, map })
    }

    pub fn identity(p: &FinitePoset) -> Self {
        PosetMap {
            source: p.clone(),
            target: p.clone(),
            map: (0..p.len()).collect(),
        }
    }

    pub fn source(&self) -> &FinitePoset {
        &self.source
    }

    pub fn target(&self) -> &FinitePoset {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.map
    }

    /// f_{≤y} = {x : f(x) ≤ y}.
    pub fn fiber_le(&self, y: usize) -> Vec<usize> {
        (0..self.source.len()).filter(|&x| self.target.le(self.map[x], y)).collect()
    }

    /// f_{≥y} = {x : f(x) ≥ y}.
    pub fn fiber_ge(&self, y: usize) -> Vec<usize> {
        (0..self.source.len()).filter(|&x| self.target.le(y, self.map[x])).collect()
    }

    /// Largest n for which the mapping cone of the induced chain map has
    /// vanishing homology through degree n.
    pub fn connectivity(&self) -> Connectivity {
        let x = self.source.order_complex();
        let y = self.target.order_complex();
        x.mapping_cone(&y, &self.map).homology(Coefficients::Integers).connectivity
    }
}

/// An integer weight for every element of a poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightFunction {
    pub values: Vec<i64>,
}

impl WeightFunction {
    pub fn new(p: &FinitePoset, values: Vec<i64>) -> Result<Self, PosetError> {
        if values.len() != p.len() {
            let missing = p.names().get(values.len()).cloned().unwrap_or_default();
            return Err(PosetError::MissingWeight(missing));
        }
        Ok(WeightFunction { values })
    }

    pub fn constant(p: &FinitePoset, t: i64) -> Self {
        WeightFunction { values: vec![t; p.len()] }
    }

    pub fn get(&self, i: usize) -> i64 {
        self.values[i]
    }
}

/// Parses `name value` lines; `* value` sets a default for unlisted elements.
pub fn parse_weights(p: &FinitePoset, text: &str) -> Result<WeightFunction, PosetError> {
    let mut values: Vec<Option<i64>> = vec![None; p.len()];
    let mut default = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| PosetError::Parse { line: lineno + 1, msg };
        let fields: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == '=' || c == ':').filter(|s| !s.is_empty()).collect();
        let [name, value] = fields.as_slice() else {
            return Err(err(format!("expected `element value`, found `{line}`")));
        };
        let value: i64 = value.parse().map_err(|_| err(format!("`{value}` is not an integer")))?;
        if *name == "*" {
            default = Some(value);
        } else {
            let i = p.index_of(name).ok_or_else(|| PosetError::UnknownElement(name.to_string()))?;
            values[i] = Some(value);
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.or(default).ok_or_else(|| PosetError::MissingWeight(p.name(i).to_string())))
        .collect::<Result<Vec<i64>, _>>()?;
    Ok(WeightFunction { values })
}

/// Which hypothesis of the poset-map theorem to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// f_{≤y} is (t(y)−2)-connected and 𝒴_{>y} is (n−t(y)−1)-connected.
    I,
    /// f_{≥y} is (n−t(y)−1)-connected and 𝒴_{<y} is (t(y)−2)-connected.
    II,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::I => "i",
            Variant::II => "ii",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "i" | "I" | "1" => Ok(Variant::I),
            "ii" | "II" | "2" => Ok(Variant::II),
            _ => Err(format!("unknown variant `{s}` (expected i or ii)")),
        }
    }
}

impl Serialize for Variant {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Whether one subposet meets a required (homological) connectivity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityCheck {
    pub size: usize,
    pub connectivity: Connectivity,
    pub required: i64,
    pub holds: bool,
}

impl ConnectivityCheck {
    pub fn of(p: &FinitePoset, required: i64) -> Self {
        let connectivity = p.connectivity();
        ConnectivityCheck {
            size: p.len(),
            connectivity,
            required,
            holds: connectivity.at_least(required),
        }
    }

    fn subposet(p: &FinitePoset, keep: &[usize], required: i64) -> Self {
        Self::of(&p.induced(keep), required)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementDiagnostic {
    pub element: String,
    pub weight: i64,
    /// f_{≤y} for variant i, f_{≥y} for variant ii.
    pub fiber: ConnectivityCheck,
    /// 𝒴_{>y} for variant i, 𝒴_{<y} for variant ii.
    pub link: ConnectivityCheck,
}

impl ElementDiagnostic {
    pub fn holds(&self) -> bool {
        self.fiber.holds && self.link.holds
    }
}

/// Hypotheses and conclusion of the poset-map theorem, both read
/// homologically: the conclusion asks for the mapping cone to have no
/// homology through degree n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetMapReport {
    pub variant: Variant,
    pub n: i64,
    pub elements: Vec<ElementDiagnostic>,
    pub hypotheses_hold: bool,
    pub map_connectivity: Connectivity,
    pub conclusion_holds: bool,
    /// False exactly when the hypotheses hold and the conclusion fails.
    pub consistent: bool,
}

impl PosetMapReport {
    pub fn violations(&self) -> impl Iterator<Item = &ElementDiagnostic> {
        self.elements.iter().filter(|e| !e.holds())
    }
}

pub fn check_poset_map_theorem(f: &PosetMap, t: &WeightFunction, n: i64, variant: Variant) -> Result<PosetMapReport, PosetError> {
    let y = f.target();
    if t.values.len() != y.len() {
        return Err(PosetError::MissingWeight(y.names().get(t.values.len()).cloned().unwrap_or_default()));
    }
    let elements: Vec<ElementDiagnostic> = (0..y.len())
        .map(|e| {
            let w = t.get(e);
            let (fiber, link) = match variant {
                Variant::I => (
                    ConnectivityCheck::subposet(f.source(), &f.fiber_le(e), w - 2),
                    ConnectivityCheck::subposet(y, &y.above(e), n - w - 1),
                ),
                Variant::II => (
                    ConnectivityCheck::subposet(f.source(), &f.fiber_ge(e), n - w - 1),
                    ConnectivityCheck::subposet(y, &y.below(e), w - 2),
                ),
            };
            ElementDiagnostic {
                element: y.name(e).to_string(),
                weight: w,
                fiber,
                link,
            }
        })
        .collect();
    let hypotheses_hold = elements.iter().all(ElementDiagnostic::holds);
    let map_connectivity = f.connectivity();
    let conclusion_holds = map_connectivity.at_least(n);
    Ok(PosetMapReport {
        variant,
        n,
        elements,
        hypotheses_hold,
        map_connectivity,
        conclusion_holds,
        consistent: !hypotheses_hold || conclusion_holds,
    })
}

/// A functor 𝒜^op → closed subposets of 𝒳: each F(a) is downward closed and
/// a ≤ a′ implies F(a′) ⊆ F(a).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverFunctor {
    images: Vec<Vec<usize>>,
}

impl CoverFunctor {
    pub fn new(x: &FinitePoset, a: &FinitePoset, images: Vec<Vec<usize>>) -> Result<Self, PosetError> {
        if images.len() != a.len() {
            return Err(PosetError::MapSize {
                expected: a.len(),
                got: images.len(),
            });
        }
        let mut members = Vec::with_capacity(images.len());
        let mut sorted = Vec::with_capacity(images.len());
        for (i, img) in images.into_iter().enumerate() {
            let mut set = vec![false; x.len()];
            for &e in &img {
                *set.get_mut(e).ok_or_else(|| PosetError::UnknownElement(format!("#{e}")))? = true;
            }
            if let Some((lo, hi)) = x.closure_violation(&set) {
                return Err(PosetError::NotClosed {
                    a: a.name(i).to_string(),
                    x: x.name(lo).to_string(),
                    y: x.name(hi).to_string(),
                });
            }
            sorted.push((0..x.len()).filter(|&e| set[e]).collect());
            members.push(set);
        }
        for &(lo, hi) in a.covers() {
            if (0..x.len()).any(|e| members[hi][e] && !members[lo][e]) {
                return Err(PosetError::NotContravariant {
                    a: a.name(lo).to_string(),
                    b: a.name(hi).to_string(),
                });
            }
        }
        Ok(CoverFunctor { images: sorted })
    }

    /// F(a), sorted.
    pub fn image(&self, a: usize) -> &[usize] {
        &self.images[a]
    }

    /// 𝒜ₓ = {a : x ∈ F(a)}.
    pub fn a_x(&self, x: usize) -> Vec<usize> {
        (0..self.images.len()).filter(|&a| self.images[a].binary_search(&x).is_ok()).collect()
    }

    pub fn to_text(&self, x: &FinitePoset, a: &FinitePoset) -> String {
        let mut out = String::new();
        for (i, img) in self.images.iter().enumerate() {
            let items: Vec<&str> = img.iter().map(|&e| x.name(e)).collect();
            out.push_str(&format!("{} : {}\n", a.name(i), items.join(" ")).replace(" \n", "\n"));
        }
        out
    }
}

/// Parses `a : x1 x2 …` lines. Elements of 𝒜 without a line get F(a) = ∅.
pub fn parse_cover(x: &FinitePoset, a: &FinitePoset, text: &str) -> Result<CoverFunctor, PosetError> {
    let mut images = vec![Vec::new(); a.len()];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((head, tail)) = line.split_once(':') else {
            return Err(PosetError::Parse {
                line: lineno + 1,
                msg: format!("expected `a : x1 x2 ...`, found `{line}`"),
            });
        };
        let ai = a.index_of(head.trim()).ok_or_else(|| PosetError::UnknownElement(head.trim().to_string()))?;
        for item in tail.split_whitespace() {
            images[ai].push(x.index_of(item).ok_or_else(|| PosetError::UnknownElement(item.to_string()))?);
        }
    }
    CoverFunctor::new(x, a, images)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NerveElementDiagnostic {
    pub element: String,
    pub weight: i64,
    /// 𝒜_{<a} or 𝒳_{<x}, required (t − 2)-connected.
    pub lower: ConnectivityCheck,
    /// F(a), required (n − t − 1)-connected; or 𝒜ₓ, required (n − t − 2)-connected.
    pub cover: ConnectivityCheck,
}

impl NerveElementDiagnostic {
    pub fn holds(&self) -> bool {
        self.lower.holds && self.cover.holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NerveReport {
    pub n: i64,
    /// 𝒜 is (n−1)-connected.
    pub hypothesis_i: ConnectivityCheck,
    pub hypothesis_ii: Vec<NerveElementDiagnostic>,
    pub hypothesis_iii: Vec<NerveElementDiagnostic>,
    pub hypothesis_i_holds: bool,
    pub hypothesis_ii_holds: bool,
    pub hypothesis_iii_holds: bool,
    pub hypotheses_hold: bool,
    /// 𝒳 is (n−1)-connected.
    pub conclusion: ConnectivityCheck,
    pub conclusion_holds: bool,
    pub consistent: bool,
}

pub fn check_nerve_theorem(
    x: &FinitePoset,
    a: &FinitePoset,
    f: &CoverFunctor,
    n: i64,
    tx: &WeightFunction,
    ta: &WeightFunction,
) -> Result<NerveReport, PosetError> {
    if tx.values.len() != x.len() {
        return Err(PosetError::MissingWeight(x.names().get(tx.values.len()).cloned().unwrap_or_default()));
    }
    if ta.values.len() != a.len() {
        return Err(PosetError::MissingWeight(a.names().get(ta.values.len()).cloned().unwrap_or_default()));
    }
    let hypothesis_i = ConnectivityCheck::of(a, n - 1);
    let hypothesis_ii: Vec<NerveElementDiagnostic> = (0..a.len())
        .map(|e| {
            let w = ta.get(e);
            NerveElementDiagnostic {
                element: a.name(e).to_string(),
                weight: w,
                lower: ConnectivityCheck::subposet(a, &a.below(e), w - 2),
                cover: ConnectivityCheck::subposet(x, f.image(e), n - w - 1),
            }
        })
        .collect();
    let hypothesis_iii: Vec<NerveElementDiagnostic> = (0..x.len())
        .map(|e| {
            let w = tx.get(e);
            NerveElementDiagnostic {
                element: x.name(e).to_string(),
                weight: w,
                lower: ConnectivityCheck::subposet(x, &x.below(e), w - 2),
                cover: ConnectivityCheck::subposet(a, &f.a_x(e), (n - 1) - w - 1),
            }
        })
        .collect();
    let hypothesis_i_holds = hypothesis_i.holds;
    let hypothesis_ii_holds = hypothesis_ii.iter().all(NerveElementDiagnostic::holds);
    let hypothesis_iii_holds = hypothesis_iii.iter().all(NerveElementDiagnostic::holds);
    let hypotheses_hold = hypothesis_i_holds && hypothesis_ii_holds && hypothesis_iii_holds;
    let conclusion = ConnectivityCheck::of(x, n - 1);
    let conclusion_holds = conclusion.holds;
    Ok(NerveReport {
        n,
        hypothesis_i,
        hypothesis_ii,
        hypothesis_iii,
        hypothesis_i_holds,
        hypothesis_ii_holds,
        hypothesis_iii_holds,
        hypotheses_hold,
        conclusion,
        conclusion_holds,
        consistent: !hypotheses_hold || conclusion_holds,
    })
}

/// The poset 𝒜≀F of pairs (a, x) with x ∈ F(a), together with its two
/// projections π₁ to 𝒜^op and π₂ to 𝒳.
#[derive(Clone, Debug)]
pub struct WreathPoset {
    pub poset: FinitePoset,
    /// (a, x) for each element of `poset`.
    pub pairs: Vec<(usize, usize)>,
    pub pi1: PosetMap,
    pub pi2: PosetMap,
}

impl WreathPoset {
    /// (π₁)_{≤a}: pairs (b, x) with b ≤ a in 𝒜^op, that is a ≤ b in 𝒜.
    pub fn pi1_fiber(&self, a: usize) -> Vec<usize> {
        self.pi1.fiber_le(a)
    }

    /// (π₂)_{≥x}: pairs (a, y) with x ≤ y.
    pub fn pi2_fiber(&self, x: usize) -> Vec<usize> {
        self.pi2.fiber_ge(x)
    }
}

/// Builds 𝒜≀F. The first coordinate lives in 𝒜^op, so
/// (a, x) ⪯ (a′, x′) iff a′ ≤ a in 𝒜 and x ≤ x′ in 𝒳.
pub fn wreath_poset(x: &FinitePoset, a: &FinitePoset, f: &CoverFunctor) -> WreathPoset {
    let pairs: Vec<(usize, usize)> = (0..a.len()).flat_map(|ai| f.image(ai).iter().map(move |&xi| (ai, xi))).collect();
    let names = pairs.iter().map(|&(ai, xi)| format!("({},{})", a.name(ai), x.name(xi))).collect();
    let poset = FinitePoset::from_order(names, |i, j| {
        let ((a1, x1), (a2, x2)) = (pairs[i], pairs[j]);
        a.le(a2, a1) && x.le(x1, x2)
    })
    .expect("product order restricted to pairs is a partial order");
    let a_op = a.opposite();
    let pi1 = PosetMap::new(poset.clone(), a_op, pairs.iter().map(|p| p.0).collect()).expect("π₁ is order-preserving");
    let pi2 = PosetMap::new(poset.clone(), x.clone(), pairs.iter().map(|p| p.1).collect()).expect("π₂ is order-preserving");
    WreathPoset { poset, pairs, pi1, pi2 }
}
