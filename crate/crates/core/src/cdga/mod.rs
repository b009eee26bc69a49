//! Free graded-commutative differential algebras on finitely many bigraded
//! generators, rank-few differential modules over them, and their homology in
//! a bidegree box.
//!
//! Sign convention: δ(m·n) = δm·n + (−1)^{d(m)} m·δn, with d the homological
//! degree. Generators of odd d anticommute and square to zero unless the field
//! has characteristic 2, where everything is polynomial. The filtration weight
//! r never enters a sign.
//!
//! Module elements are written v·m with v a module generator, and
//! δ(v·m) = δv·m + (−1)^{d(v)} v·δm.

mod engine;
mod parse;
mod presets;

pub use parse::{parse_spec, parse_terms};
pub use presets::{a_algebra, build_preset, intstab, koszul, preset_names, vanish_a, vanish_b, Preset, PresetInfo};

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactla::{with_field, FieldKind, LaError, Matrix};
use crate::freealg::{validate_generators, BoxBounds, FreeAlgError, Generator};
use crate::grading::{Bidegree, VanishingLine};
use engine::Engine;

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CdgaError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("differential of `{name}` is not homogeneous of bidegree {expected}: found a term in {found}")]
    Inhomogeneous { name: String, expected: String, found: String },
    #[error("δ² ≠ 0 on `{0}`")]
    NotSquareZero(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("preset `{preset}` is defined over {expected}, not {requested}")]
    FieldMismatch { preset: String, expected: FieldKind, requested: FieldKind },
    #[error(transparent)]
    La(#[from] LaError),
    #[error(transparent)]
    FreeAlg(#[from] FreeAlgError),
}

/// A polynomial with rational coefficients, keyed by exponent vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    pub terms: BTreeMap<Exponents, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn monomial(exps: Exponents, c: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term(exps, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }
}

/// Sign and product of two monomials in the graded-commutative algebra; `None`
/// when an exterior generator appears twice. `odd[i]` marks generators that
/// anticommute; `exterior` says whether they also square to zero.
pub(crate) fn mul_monomials(a: &[u32], b: &[u32], odd: &[bool], exterior: bool) -> Option<(bool, Exponents)> {
    let mut neg = false;
    let mut later_odd = 0u32;
    for j in (0..a.len()).rev() {
        if odd[j] {
            if exterior && a[j] + b[j] > 1 {
                return None;
            }
            if b[j] % 2 == 1 && later_odd % 2 == 1 {
                neg = !neg;
            }
            later_odd += a[j];
        }
    }
    Some((neg, a.iter().zip(b).map(|(x, y)| x + y).collect()))
}

/// Free graded-commutative algebra with a differential given on generators.
#[derive(Clone, Debug)]
pub struct Cdga {
    field: FieldKind,
    gens: Vec<Generator>,
    diff: Vec<Poly>,
}

impl Cdga {
    /// The algebra with zero differential.
    pub fn new(field: FieldKind, gens: Vec<Generator>) -> Result<Self, CdgaError> {
        validate_generators(&gens)?;
        let n = gens.len();
        Ok(Cdga {
            field,
            gens,
            diff: vec![Poly::zero(); n],
        })
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn differential_of(&self, i: usize) -> &Poly {
        &self.diff[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, CdgaError> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| CdgaError::UnknownGenerator(name.to_string()))
    }

    pub(crate) fn odd(&self) -> Vec<bool> {
        self.gens.iter().map(|g| g.d % 2 == 1).collect()
    }

    pub(crate) fn exterior(&self) -> bool {
        self.field.characteristic() != 2
    }

    pub fn bidegree_of(&self, exps: &[u32]) -> Bidegree {
        let (mut g, mut d) = (0, 0);
        for (e, x) in exps.iter().zip(&self.gens) {
            g += e * x.g;
            d += e * x.d;
        }
        Bidegree::new(g, d)
    }

    /// The monomial x₁^{k₁}·x₂^{k₂}·… taken in the given factor order, with its
    /// Koszul sign. Zero when an exterior generator repeats.
    pub fn monomial(&self, factors: &[(usize, u32)]) -> Poly {
        let (odd, ext) = (self.odd(), self.exterior());
        let mut acc: Option<(bool, Exponents)> = Some((false, vec![0; self.gens.len()]));
        for &(i, k) in factors {
            for _ in 0..k {
                let Some((neg, m)) = acc else { break };
                let mut x = vec![0; self.gens.len()];
                x[i] = 1;
                acc = mul_monomials(&m, &x, &odd, ext).map(|(n2, p)| (neg ^ n2, p));
            }
        }
        match acc {
            Some((neg, m)) => Poly::monomial(m, if neg { -BigRational::one() } else { BigRational::one() }),
            None => Poly::zero(),
        }
    }

    /// Parse a polynomial expression in the generator names.
    pub fn parse_poly(&self, expr: &str) -> Result<Poly, CdgaError> {
        let names: Vec<&str> = self.gens.iter().map(|g| g.name.as_str()).collect();
        let mut out = Poly::zero();
        for (c, factors) in parse_terms(expr, &names).map_err(|msg| CdgaError::Parse { line: 0, msg })? {
            for (m, v) in self.monomial(&factors).terms {
                out.add_term(m, v * &c);
            }
        }
        Ok(out)
    }

    /// Replace the differential on the named generators and re-validate.
    pub fn with_differential(mut self, entries: Vec<(usize, Poly)>) -> Result<Self, CdgaError> {
        for (i, p) in entries {
            self.diff[i] = p;
        }
        DgModule::free(self.clone()).validate()?;
        Ok(self)
    }

    pub fn with_differential_exprs(self, entries: &[(&str, &str)]) -> Result<Self, CdgaError> {
        let mut parsed = Vec::new();
        for (name, expr) in entries {
            parsed.push((self.index_of(name)?, self.parse_poly(expr)?));
        }
        self.with_differential(parsed)
    }

    /// Delete the named generators and every differential term they divide.
    pub fn quotient(&self, names: &[&str]) -> Result<Self, CdgaError> {
        let drop: Vec<usize> = names.iter().map(|n| self.index_of(n)).collect::<Result<_, _>>()?;
        let keep: Vec<usize> = (0..self.gens.len()).filter(|i| !drop.contains(i)).collect();
        let restrict = |p: &Poly| -> Poly {
            let mut out = Poly::zero();
            for (m, c) in &p.terms {
                if drop.iter().all(|&i| m[i] == 0) {
                    out.add_term(keep.iter().map(|&i| m[i]).collect(), c.clone());
                }
            }
            out
        };
        Ok(Cdga {
            field: self.field,
            gens: keep.iter().map(|&i| self.gens[i].clone()).collect(),
            diff: keep.iter().map(|&i| restrict(&self.diff[i])).collect(),
        })
    }

    /// Monomials of bidegree `bd`, lexicographically descending in the exponents.
    pub fn monomial_basis(&self, bd: Bidegree) -> Vec<Exponents> {
        engine::monomials_of(&self.gens, &self.odd(), self.exterior(), bd)
    }

    pub fn render_monomial(&self, exps: &[u32]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .zip(&self.gens)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| if *e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("·")
        }
    }

    /// Matrix of δ from bidegree `bd` to (g, d − 1): columns are indexed by
    /// `monomial_basis(bd)`, rows by the basis one degree down.
    pub fn differential_matrix(&self, bd: Bidegree) -> Result<Matrix, CdgaError> {
        DgModule::free(self.clone()).differential_matrix(bd)
    }

    pub fn homology_table(&self, bounds: BoxBounds) -> Result<HomologyTable, CdgaError> {
        DgModule::free(self.clone()).homology_table(bounds)
    }
}

/// A module generator v with its bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleGen {
    pub name: String,
    pub g: u32,
    pub d: u32,
    pub r: u32,
}

impl ModuleGen {
    pub fn new(name: impl Into<String>, g: u32, d: u32) -> Self {
        ModuleGen {
            name: name.into(),
            g,
            d,
            r: d,
        }
    }

    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.g, self.d)
    }
}

/// A free module over a CDGA on finitely many generators; δv is a sum of
/// terms v′·a.
#[derive(Clone, Debug)]
pub struct DgModule {
    base: Cdga,
    gens: Vec<ModuleGen>,
    diff: Vec<Vec<(usize, Poly)>>,
}

impl DgModule {
    /// The algebra as a module over itself, on the unit.
    pub fn free(base: Cdga) -> Self {
        DgModule {
            base,
            gens: vec![ModuleGen::new("1", 0, 0)],
            diff: vec![Vec::new()],
        }
    }

    pub fn new(base: Cdga, gens: Vec<ModuleGen>, diff: Vec<Vec<(usize, Poly)>>) -> Result<Self, CdgaError> {
        if diff.len() != gens.len() {
            return Err(LaError::Shape(format!("{} module generators but {} differentials", gens.len(), diff.len())).into());
        }
        let m = DgModule { base, gens, diff };
        m.validate()?;
        Ok(m)
    }

    pub fn base(&self) -> &Cdga {
        &self.base
    }

    pub fn module_generators(&self) -> &[ModuleGen] {
        &self.gens
    }

    pub fn field(&self) -> FieldKind {
        self.base.field
    }

    /// Check homogeneity, reducibility of coefficients into the field, and δ² = 0
    /// on every algebra and module generator.
    pub fn validate(&self) -> Result<(), CdgaError> {
        with_field!(self.base.field, f => Engine::new(f, self).map(|_| ()))
    }

    pub fn quotient(&self, names: &[&str]) -> Result<Self, CdgaError> {
        let drop: Vec<usize> = names.iter().map(|n| self.base.index_of(n)).collect::<Result<_, _>>()?;
        let keep: Vec<usize> = (0..self.base.gens.len()).filter(|i| !drop.contains(i)).collect();
        let base = self.base.quotient(names)?;
        let diff = self
            .diff
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|(j, p)| {
                        let mut out = Poly::zero();
                        for (m, c) in &p.terms {
                            if drop.iter().all(|&i| m[i] == 0) {
                                out.add_term(keep.iter().map(|&i| m[i]).collect(), c.clone());
                            }
                        }
                        (*j, out)
                    })
                    .collect()
            })
            .collect();
        DgModule::new(base, self.gens.clone(), diff)
    }

    /// Basis of the bidegree-`bd` part: pairs (module generator, monomial).
    pub fn basis(&self, bd: Bidegree) -> Vec<(usize, Exponents)> {
        let (odd, ext) = (self.base.odd(), self.base.exterior());
        let mut out = Vec::new();
        for (k, v) in self.gens.iter().enumerate() {
            if v.g <= bd.g && v.d <= bd.d {
                let rest = Bidegree::new(bd.g - v.g, bd.d - v.d);
                for m in engine::monomials_of(&self.base.gens, &odd, ext, rest) {
                    out.push((k, m));
                }
            }
        }
        out
    }

    pub fn render_basis_element(&self, k: usize, m: &[u32]) -> String {
        let mono = self.base.render_monomial(m);
        if self.gens.len() == 1 && self.gens[0].bidegree() == Bidegree::new(0, 0) {
            mono
        } else if mono == "1" {
            self.gens[k].name.clone()
        } else {
            format!("{}·{}", self.gens[k].name, mono)
        }
    }

    pub fn differential_matrix(&self, bd: Bidegree) -> Result<Matrix, CdgaError> {
        with_field!(self.base.field, f => {
            let eng = Engine::new(f, self)?;
            Ok(eng.differential_matrix(bd))
        })
    }

    /// Dimensions of the chain groups in the box (unit row g = 0 included).
    pub fn chain_dims(&self, bounds: BoxBounds) -> BTreeMap<Bidegree, u64> {
        let mut out = BTreeMap::new();
        for g in 0..=bounds.g_max {
            for d in 0..=bounds.d_max {
                let bd = Bidegree::new(g, d);
                out.insert(bd, self.basis(bd).len() as u64);
            }
        }
        out
    }

    /// dim ker − dim im of δ at every cell 0 ≤ g ≤ g_max, 0 ≤ d ≤ d_max. Cells
    /// are computed in parallel; the result does not depend on scheduling.
    pub fn homology_table(&self, bounds: BoxBounds) -> Result<HomologyTable, CdgaError> {
        let dims = with_field!(self.base.field, f => Engine::new(f, self)?.homology(bounds));
        Ok(HomologyTable {
            field: self.base.field,
            bounds,
            dims,
        })
    }

    /// Certify that homology vanishes at every cell of the box strictly below
    /// the line, or report the first offending cell in (g, d) order.
    pub fn verify_vanishing(&self, line: &VanishingLine, bounds: BoxBounds) -> Result<VanishingReport, CdgaError> {
        let table = self.homology_table(bounds)?;
        Ok(VanishingReport::from_table(table, line))
    }
}

/// Homology dimensions on the box 0 ≤ g ≤ g_max, 0 ≤ d ≤ d_max.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyTable {
    pub field: FieldKind,
    pub bounds: BoxBounds,
    pub dims: BTreeMap<Bidegree, u64>,
}

impl HomologyTable {
    pub fn get(&self, bd: Bidegree) -> Option<u64> {
        self.dims.get(&bd).copied()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (Bidegree, u64)> + '_ {
        self.dims.iter().filter(|e| *e.1 > 0).map(|(b, v)| (*b, *v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum VanishingCertificate {
    Certified { cells_checked: usize },
    Counterexample { bidegree: Bidegree, dim: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingReport {
    pub line: VanishingLine,
    pub certificate: VanishingCertificate,
    pub table: HomologyTable,
}

impl VanishingReport {
    pub fn from_table(table: HomologyTable, line: &VanishingLine) -> Self {
        let below: Vec<(Bidegree, u64)> = table.dims.iter().filter(|(b, _)| line.is_below(**b)).map(|(b, v)| (*b, *v)).collect();
        let certificate = match below.iter().find(|e| e.1 > 0) {
            Some(&(bidegree, dim)) => VanishingCertificate::Counterexample { bidegree, dim },
            None => VanishingCertificate::Certified {
                cells_checked: below.len(),
            },
        };
        VanishingReport {
            line: line.clone(),
            certificate,
            table,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self.certificate, VanishingCertificate::Certified { .. })
    }
}
