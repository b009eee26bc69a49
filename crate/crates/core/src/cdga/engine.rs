use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{mul_monomials, CdgaError, DgModule, Exponents, Poly};
use crate::exactla::{convert, normalize, Field, Matrix, RowReducer};
use crate::freealg::{BoxBounds, Generator};
use crate::grading::Bidegree;

type Key = (usize, Exponents);
type Elem<F> = BTreeMap<Key, <F as Field>::Elem>;

/// Monomials of one bidegree, lexicographically descending.
pub(crate) fn monomials_of(gens: &[Generator], odd: &[bool], exterior: bool, bd: Bidegree) -> Vec<Exponents> {
    fn go(
        i: usize,
        g: u32,
        d: u32,
        gens: &[Generator],
        cap: &[u32],
        cur: &mut Exponents,
        out: &mut Vec<Exponents>,
    ) {
        if i == gens.len() {
            if g == 0 && d == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let x = &gens[i];
        let mut max = g / x.g.max(1);
        if x.d > 0 {
            max = max.min(d / x.d);
        }
        max = max.min(cap[i]);
        for e in (0..=max).rev() {
            cur[i] = e;
            go(i + 1, g - e * x.g, d - e * x.d, gens, cap, cur, out);
        }
        cur[i] = 0;
    }
    let cap: Vec<u32> = odd.iter().map(|&o| if o && exterior { 1 } else { u32::MAX }).collect();
    let mut out = Vec::new();
    let mut cur = vec![0; gens.len()];
    go(0, bd.g, bd.d, gens, &cap, &mut cur, &mut out);
    out
}

/// The complex with coefficients reduced into a concrete field.
pub(crate) struct Engine<'a, F: Field> {
    f: F,
    module: &'a DgModule,
    odd: Vec<bool>,
    exterior: bool,
    diff: Vec<Vec<(Exponents, F::Elem)>>,
    mdiff: Vec<Vec<(usize, Exponents, F::Elem)>>,
}

impl<'a, F: Field> Engine<'a, F> {
    pub(crate) fn new(f: F, module: &'a DgModule) -> Result<Self, CdgaError> {
        let base = &module.base;
        let (odd, exterior) = (base.odd(), base.exterior());
        let reduce = |p: &Poly| -> Result<Vec<(Exponents, F::Elem)>, CdgaError> {
            let mut out = Vec::new();
            for (m, c) in &p.terms {
                if exterior && m.iter().zip(&odd).any(|(e, o)| *o && *e > 1) {
                    continue;
                }
                let v = convert(&f, c)?;
                if !f.is_zero(&v) {
                    out.push((m.clone(), v));
                }
            }
            Ok(out)
        };
        let mut diff = Vec::with_capacity(base.gens.len());
        for (x, p) in base.gens.iter().zip(&base.diff) {
            let terms = reduce(p)?;
            for (m, _) in &terms {
                let bd = base.bidegree_of(m);
                if x.d == 0 || bd != Bidegree::new(x.g, x.d - 1) {
                    return Err(CdgaError::Inhomogeneous {
                        name: x.name.clone(),
                        expected: format!("({},{})", x.g, x.d as i64 - 1),
                        found: bd.to_string(),
                    });
                }
            }
            diff.push(terms);
        }
        let mut mdiff = Vec::with_capacity(module.gens.len());
        for (v, entries) in module.gens.iter().zip(&module.diff) {
            let mut terms = Vec::new();
            for (j, p) in entries {
                let target = module.gens.get(*j).ok_or_else(|| CdgaError::UnknownGenerator(format!("module #{j}")))?;
                for (m, c) in reduce(p)? {
                    let bd = base.bidegree_of(&m);
                    let total = Bidegree::new(bd.g + target.g, bd.d + target.d);
                    if v.d == 0 || total != Bidegree::new(v.g, v.d - 1) {
                        return Err(CdgaError::Inhomogeneous {
                            name: v.name.clone(),
                            expected: format!("({},{})", v.g, v.d as i64 - 1),
                            found: total.to_string(),
                        });
                    }
                    terms.push((*j, m, c));
                }
            }
            mdiff.push(terms);
        }
        let eng = Engine {
            f,
            module,
            odd,
            exterior,
            diff,
            mdiff,
        };
        eng.check_square_zero()?;
        Ok(eng)
    }

    fn check_square_zero(&self) -> Result<(), CdgaError> {
        let n = self.module.base.gens.len();
        for (i, x) in self.module.base.gens.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            let mut once = BTreeMap::new();
            self.delta_monomial(&e, 0, &self.f.one(), &mut once);
            let mut twice = BTreeMap::new();
            for ((_, m), c) in &once {
                self.delta_monomial(m, 0, c, &mut twice);
            }
            if !twice.is_empty() {
                return Err(CdgaError::NotSquareZero(x.name.clone()));
            }
        }
        for (k, v) in self.module.gens.iter().enumerate() {
            let one = BTreeMap::from([((k, vec![0; n]), self.f.one())]);
            if !self.delta_elem(&self.delta_elem(&one)).is_empty() {
                return Err(CdgaError::NotSquareZero(v.name.clone()));
            }
        }
        Ok(())
    }

    fn add(&self, acc: &mut Elem<F>, key: Key, c: F::Elem) {
        match acc.get_mut(&key) {
            Some(v) => {
                *v = self.f.add(v, &c);
                if self.f.is_zero(v) {
                    acc.remove(&key);
                }
            }
            None => {
                if !self.f.is_zero(&c) {
                    acc.insert(key, c);
                }
            }
        }
    }

    fn signed(&self, neg: bool, c: F::Elem) -> F::Elem {
        if neg {
            self.f.neg(&c)
        } else {
            c
        }
    }

    /// δ of a monomial in the algebra, accumulated into `acc` under module index `k`
    /// with an overall factor `scale`.
    fn delta_monomial(&self, m: &[u32], k: usize, scale: &F::Elem, acc: &mut Elem<F>) {
        let gens = &self.module.base.gens;
        let mut prefix_deg = 0u32;
        for i in 0..m.len() {
            let e = m[i];
            if e == 0 {
                continue;
            }
            let mult = if self.odd[i] { e % 2 } else { e };
            if mult != 0 && !self.diff[i].is_empty() {
                let mut head = m.to_vec();
                head[i] -= 1;
                let mut tail = vec![0; m.len()];
                for j in i + 1..m.len() {
                    tail[j] = head[j];
                    head[j] = 0;
                }
                let c0 = self.f.mul(scale, &self.f.from_int(mult as i64));
                let c0 = self.signed(prefix_deg % 2 == 1, c0);
                for (t, tc) in &self.diff[i] {
                    let Some((n1, ht)) = mul_monomials(&head, t, &self.odd, self.exterior) else { continue };
                    let Some((n2, r)) = mul_monomials(&ht, &tail, &self.odd, self.exterior) else { continue };
                    let c = self.signed(n1 ^ n2, self.f.mul(&c0, tc));
                    self.add(acc, (k, r), c);
                }
            }
            prefix_deg += e * gens[i].d;
        }
    }

    /// δ of a basis element v_k·m.
    fn delta_basis(&self, k: usize, m: &[u32], scale: &F::Elem, acc: &mut Elem<F>) {
        for (j, a, c) in &self.mdiff[k] {
            if let Some((neg, am)) = mul_monomials(a, m, &self.odd, self.exterior) {
                let v = self.signed(neg, self.f.mul(scale, c));
                self.add(acc, (*j, am), v);
            }
        }
        let s = self.signed(self.module.gens[k].d % 2 == 1, scale.clone());
        self.delta_monomial(m, k, &s, acc);
    }

    fn delta_elem(&self, x: &Elem<F>) -> Elem<F> {
        let mut acc = BTreeMap::new();
        for ((k, m), c) in x {
            self.delta_basis(*k, m, c, &mut acc);
        }
        acc
    }

    fn basis(&self, bd: Bidegree) -> Vec<Key> {
        self.module.basis(bd)
    }

    /// Images of the basis of `bd` as sparse rows over the basis one degree down.
    fn image_rows(&self, bd: Bidegree) -> (Vec<Key>, Vec<Key>, Vec<Vec<(usize, F::Elem)>>) {
        let src = self.basis(bd);
        if bd.d == 0 {
            return (src, Vec::new(), Vec::new());
        }
        let dst = self.basis(Bidegree::new(bd.g, bd.d - 1));
        let index: HashMap<&Key, usize> = dst.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let one = self.f.one();
        let rows = src
            .iter()
            .map(|(k, m)| {
                let mut acc = BTreeMap::new();
                self.delta_basis(*k, m, &one, &mut acc);
                let v: Vec<(usize, F::Elem)> = acc.into_iter().map(|(key, c)| (index[&key], c)).collect();
                normalize(&self.f, v)
            })
            .collect();
        (src, dst, rows)
    }

    pub(crate) fn differential_matrix(&self, bd: Bidegree) -> Matrix {
        let (src, dst, rows) = self.image_rows(bd);
        let mut m = Matrix::zeros(self.f.kind(), dst.len(), src.len());
        for (col, row) in rows.iter().enumerate() {
            for (r, c) in row {
                m.set(*r, col, self.f.to_scalar(c)).expect("entries come from the matrix field");
            }
        }
        m
    }

    fn rank_at(&self, bd: Bidegree) -> (usize, usize) {
        let (src, dst, rows) = self.image_rows(bd);
        let mut red = RowReducer::new(self.f.clone(), dst.len());
        for r in rows {
            red.insert(r);
        }
        (src.len(), red.rank())
    }

    pub(crate) fn homology(&self, bounds: BoxBounds) -> BTreeMap<Bidegree, u64> {
        let cells: Vec<Bidegree> = (0..=bounds.g_max)
            .flat_map(|g| (0..=bounds.d_max + 1).map(move |d| Bidegree::new(g, d)))
            .collect();
        let info: HashMap<Bidegree, (usize, usize)> = cells.par_iter().map(|&bd| (bd, self.rank_at(bd))).collect();
        let mut out = BTreeMap::new();
        for g in 0..=bounds.g_max {
            for d in 0..=bounds.d_max {
                let (dim, rank_out) = info[&Bidegree::new(g, d)];
                let rank_in = info[&Bidegree::new(g, d + 1)].1;
                out.insert(Bidegree::new(g, d), (dim - rank_out - rank_in) as u64);
            }
        }
        out
    }
}
