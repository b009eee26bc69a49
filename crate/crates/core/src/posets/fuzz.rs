//! Randomized campaigns: random instances of the two theorems, checked for
//! {hypotheses hold} ⊆ {conclusion holds}. Instance i of a campaign uses seed
//! `seed + i`, so results do not depend on how the work is sharded.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{
    check_nerve_theorem, check_poset_map_theorem, CoverFunctor, FinitePoset, NerveReport, PosetMap,
    PosetMapReport, Variant, WeightFunction,
};

/// Stand-in for an acyclic subposet when choosing n and weights.
const CAP: i64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Campaign {
    PosetMap,
    Nerve,
}

impl fmt::Display for Campaign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Campaign::PosetMap => "map",
            Campaign::Nerve => "nerve",
        })
    }
}

impl FromStr for Campaign {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "map" | "poset-map" => Ok(Campaign::PosetMap),
            "nerve" => Ok(Campaign::Nerve),
            _ => Err(format!("unknown campaign `{s}` (expected map or nerve)")),
        }
    }
}

impl Serialize for Campaign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzConfig {
    pub campaign: Campaign,
    pub count: usize,
    pub max_size: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub seed: u64,
    pub original_size: usize,
    pub minimized_size: usize,
    /// The minimized instance in the text format of [`Shrink::to_text`].
    pub dump: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzSummary {
    pub config: FuzzConfig,
    pub hypotheses_held: usize,
    pub conclusions_held: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Instances that can be made smaller one element at a time.
pub trait Shrink: Sized {
    fn size(&self) -> usize;
    /// Instances with one element removed.
    fn shrinks(&self) -> Vec<Self>;
    fn to_text(&self) -> String;
}

/// Greedy minimization: repeatedly replace the instance by its first shrink
/// that still fails.
pub fn minimize<I: Shrink>(mut inst: I, fails: impl Fn(&I) -> bool) -> I {
    'outer: loop {
        for smaller in inst.shrinks() {
            if fails(&smaller) {
                inst = smaller;
                continue 'outer;
            }
        }
        return inst;
    }
}

/// A random poset on `n` elements named `{prefix}0, {prefix}1, …`: each pair
/// i < j is related with probability `density`, then the order is closed.
pub fn random_poset(rng: &mut impl Rng, n: usize, density: f64, prefix: &str) -> FinitePoset {
    let rel = random_relations(rng, n, density);
    FinitePoset::new(names(prefix, n), &rel).expect("index-increasing relations are acyclic")
}

fn random_relations(rng: &mut impl Rng, n: usize, density: f64) -> Vec<(usize, usize)> {
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                rel.push((i, j));
            }
        }
    }
    rel
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn conn(p: &FinitePoset, keep: &[usize]) -> i64 {
    p.induced(keep).connectivity().capped(CAP)
}

/// A weight in [lo, hi] when that range is nonempty, otherwise one just
/// outside it.
fn pick_weight(rng: &mut impl Rng, lo: i64, hi: i64) -> i64 {
    if lo <= hi {
        rng.gen_range(lo..=hi)
    } else {
        rng.gen_range(hi - 1..=lo + 1)
    }
}

fn pick_n(rng: &mut impl Rng, n_max: i64) -> i64 {
    (n_max - rng.gen_range(0..=1)).clamp(-1, CAP - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapInstance {
    pub x: FinitePoset,
    pub y: FinitePoset,
    pub map: Vec<usize>,
    pub t: Vec<i64>,
    pub n: i64,
    pub variant: Variant,
}

impl MapInstance {
    pub fn check(&self) -> PosetMapReport {
        let f = PosetMap::new(self.x.clone(), self.y.clone(), self.map.clone()).expect("instances are order-preserving");
        let t = WeightFunction::new(&self.y, self.t.clone()).expect("one weight per element");
        check_poset_map_theorem(&f, &t, self.n, self.variant).expect("weights match")
    }

    pub fn random(rng: &mut impl Rng, max_size: usize) -> Self {
        let max_size = max_size.max(1);
        let ny = rng.gen_range(1..=max_size);
        let nx = rng.gen_range(0..=max_size);
        let density = rng.gen_range(0.1..0.7);
        let (x, y, map) = match rng.gen_range(0..3) {
            // A random function, then a random order on X it respects.
            0 => {
                let y = random_poset(rng, ny, density, "y");
                let map: Vec<usize> = (0..nx).map(|_| rng.gen_range(0..ny)).collect();
                let rel: Vec<(usize, usize)> = random_relations(rng, nx, density)
                    .into_iter()
                    .filter(|&(i, j)| y.le(map[i], map[j]))
                    .collect();
                (FinitePoset::new(names("x", nx), &rel).unwrap(), y, map)
            }
            // Inclusion of a random subposet.
            1 => {
                let y = random_poset(rng, ny, density, "y");
                let mut keep: Vec<usize> = (0..ny).filter(|_| rng.gen_bool(0.6)).collect();
                keep.sort_unstable();
                let x = y.induced(&keep);
                (x, y, keep)
            }
            // The identity onto a coarser order on the same set.
            _ => {
                let n = ny;
                let base = random_relations(rng, n, density);
                let mut extra = base.clone();
                extra.extend(random_relations(rng, n, density / 2.0));
                let x = FinitePoset::new(names("x", n), &base).unwrap();
                let y = FinitePoset::new(names("y", n), &extra).unwrap();
                (x, y, (0..n).collect())
            }
        };
        let variant = if rng.gen_bool(0.5) { Variant::I } else { Variant::II };
        let f = PosetMap::new(x.clone(), y.clone(), map.clone()).expect("constructed order-preserving");
        // (c, c′) such that the hypothesis at y holds iff n − 1 − c′ ≤ t(y) ≤ c + 2.
        let bounds: Vec<(i64, i64)> = (0..y.len())
            .map(|e| match variant {
                Variant::I => (conn(&x, &f.fiber_le(e)), conn(&y, &y.above(e))),
                Variant::II => (conn(&y, &y.below(e)), conn(&x, &f.fiber_ge(e))),
            })
            .collect();
        let (n, t) = if rng.gen_bool(0.75) {
            let n_max = bounds.iter().map(|&(a, b)| a + b + 3).min().unwrap();
            let n = pick_n(rng, n_max);
            let t = bounds.iter().map(|&(a, b)| pick_weight(rng, n - 1 - b, a + 2)).collect();
            (n, t)
        } else {
            let n = rng.gen_range(-1..=3);
            (n, (0..y.len()).map(|_| rng.gen_range(-1..=4)).collect())
        };
        MapInstance { x, y, map, t, n, variant }
    }
}

impl Shrink for MapInstance {
    fn size(&self) -> usize {
        self.x.len() + self.y.len()
    }

    fn shrinks(&self) -> Vec<Self> {
        let mut out = Vec::new();
        for drop in 0..self.x.len() {
            let keep: Vec<usize> = (0..self.x.len()).filter(|&i| i != drop).collect();
            out.push(MapInstance {
                x: self.x.induced(&keep),
                map: keep.iter().map(|&i| self.map[i]).collect(),
                ..self.clone()
            });
        }
        for drop in 0..self.y.len() {
            if self.y.len() == 1 {
                break;
            }
            let keep_y: Vec<usize> = (0..self.y.len()).filter(|&i| i != drop).collect();
            let keep_x: Vec<usize> = (0..self.x.len()).filter(|&i| self.map[i] != drop).collect();
            out.push(MapInstance {
                x: self.x.induced(&keep_x),
                y: self.y.induced(&keep_y),
                map: keep_x.iter().map(|&i| self.map[i] - usize::from(self.map[i] > drop)).collect(),
                t: keep_y.iter().map(|&i| self.t[i]).collect(),
                ..self.clone()
            });
        }
        out
    }

    fn to_text(&self) -> String {
        let mut out = format!("# poset map, variant {}, n = {}\n[X]\n{}[Y]\n{}[map]\n", self.variant, self.n, self.x.to_text(), self.y.to_text());
        for (i, &v) in self.map.iter().enumerate() {
            let _ = writeln!(out, "{} -> {}", self.x.name(i), self.y.name(v));
        }
        out.push_str("[t]\n");
        for (i, w) in self.t.iter().enumerate() {
            let _ = writeln!(out, "{} {}", self.y.name(i), w);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveInstance {
    pub x: FinitePoset,
    pub a: FinitePoset,
    pub images: Vec<Vec<usize>>,
    pub tx: Vec<i64>,
    pub ta: Vec<i64>,
    pub n: i64,
}

impl NerveInstance {
    pub fn functor(&self) -> CoverFunctor {
        CoverFunctor::new(&self.x, &self.a, self.images.clone()).expect("instances carry valid functors")
    }

    pub fn check(&self) -> NerveReport {
        let tx = WeightFunction::new(&self.x, self.tx.clone()).expect("one weight per element");
        let ta = WeightFunction::new(&self.a, self.ta.clone()).expect("one weight per element");
        check_nerve_theorem(&self.x, &self.a, &self.functor(), self.n, &tx, &ta).expect("weights match")
    }

    pub fn random(rng: &mut impl Rng, max_size: usize) -> Self {
        let max_size = max_size.max(1);
        let nx = rng.gen_range(1..=max_size);
        let na = rng.gen_range(1..=(max_size / 2).max(1));
        let (dx, da) = (rng.gen_range(0.1..0.7), rng.gen_range(0.1..0.7));
        let x = random_poset(rng, nx, dx, "x");
        let a = random_poset(rng, na, da, "a");
        // Visit 𝒜 from the top so that F(a) can contain every F(a′), a′ > a.
        let mut images: Vec<Vec<usize>> = vec![Vec::new(); na];
        for &ai in a.linear_extension().iter().rev() {
            let mut gens: Vec<usize> = a.above(ai).iter().flat_map(|&b| images[b].clone()).collect();
            let extra = rng.gen_range(0..=3);
            let mut pool: Vec<usize> = (0..nx).collect();
            pool.shuffle(rng);
            gens.extend(pool.into_iter().take(extra));
            images[ai] = x.down_closure(&gens);
        }
        let f = CoverFunctor::new(&x, &a, images.clone()).expect("constructed closed and contravariant");
        let ca = a.connectivity().capped(CAP);
        let bounds_a: Vec<(i64, i64)> = (0..na).map(|e| (conn(&a, &a.below(e)), conn(&x, f.image(e)))).collect();
        let bounds_x: Vec<(i64, i64)> = (0..nx).map(|e| (conn(&x, &x.below(e)), conn(&a, &f.a_x(e)))).collect();
        let (n, ta, tx) = if rng.gen_bool(0.75) {
            let n_max = bounds_a
                .iter()
                .map(|&(l, c)| l + c + 3)
                .chain(bounds_x.iter().map(|&(l, c)| l + c + 4))
                .chain([ca + 1])
                .min()
                .unwrap();
            let n = pick_n(rng, n_max);
            let ta = bounds_a.iter().map(|&(l, c)| pick_weight(rng, n - 1 - c, l + 2)).collect();
            let tx = bounds_x.iter().map(|&(l, c)| pick_weight(rng, n - 2 - c, l + 2)).collect();
            (n, ta, tx)
        } else {
            let n = rng.gen_range(-1..=3);
            let ta = (0..na).map(|_| rng.gen_range(-1..=4)).collect();
            let tx = (0..nx).map(|_| rng.gen_range(-1..=4)).collect();
            (n, ta, tx)
        };
        NerveInstance { x, a, images, tx, ta, n }
    }
}

impl Shrink for NerveInstance {
    fn size(&self) -> usize {
        self.x.len() + self.a.len()
    }

    fn shrinks(&self) -> Vec<Self> {
        let mut out = Vec::new();
        for drop in 0..self.x.len() {
            let keep: Vec<usize> = (0..self.x.len()).filter(|&i| i != drop).collect();
            out.push(NerveInstance {
                x: self.x.induced(&keep),
                images: self
                    .images
                    .iter()
                    .map(|img| img.iter().filter(|&&e| e != drop).map(|&e| e - usize::from(e > drop)).collect())
                    .collect(),
                tx: keep.iter().map(|&i| self.tx[i]).collect(),
                ..self.clone()
            });
        }
        for drop in 0..self.a.len() {
            let keep: Vec<usize> = (0..self.a.len()).filter(|&i| i != drop).collect();
            out.push(NerveInstance {
                a: self.a.induced(&keep),
                images: keep.iter().map(|&i| self.images[i].clone()).collect(),
                ta: keep.iter().map(|&i| self.ta[i]).collect(),
                ..self.clone()
            });
        }
        out
    }

    fn to_text(&self) -> String {
        let mut out = format!(
            "# nerve, n = {}\n[X]\n{}[A]\n{}[F]\n{}[tX]\n",
            self.n,
            self.x.to_text(),
            self.a.to_text(),
            self.functor().to_text(&self.x, &self.a)
        );
        for (i, w) in self.tx.iter().enumerate() {
            let _ = writeln!(out, "{} {}", self.x.name(i), w);
        }
        out.push_str("[tA]\n");
        for (i, w) in self.ta.iter().enumerate() {
            let _ = writeln!(out, "{} {}", self.a.name(i), w);
        }
        out
    }
}

struct Outcome {
    hypotheses: bool,
    conclusion: bool,
    counterexample: Option<Counterexample>,
}

fn run_one(campaign: Campaign, seed: u64, max_size: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    fn outcome<I: Shrink>(seed: u64, inst: I, flags: (bool, bool), fails: impl Fn(&I) -> bool) -> Outcome {
        let (hypotheses, conclusion) = flags;
        let counterexample = (hypotheses && !conclusion).then(|| {
            let original_size = inst.size();
            let small = minimize(inst, fails);
            Counterexample {
                seed,
                original_size,
                minimized_size: small.size(),
                dump: small.to_text(),
            }
        });
        Outcome {
            hypotheses,
            conclusion,
            counterexample,
        }
    }
    match campaign {
        Campaign::PosetMap => {
            let inst = MapInstance::random(&mut rng, max_size);
            let r = inst.check();
            outcome(seed, inst, (r.hypotheses_hold, r.conclusion_holds), |i| !i.check().consistent)
        }
        Campaign::Nerve => {
            let inst = NerveInstance::random(&mut rng, max_size);
            let r = inst.check();
            outcome(seed, inst, (r.hypotheses_hold, r.conclusion_holds), |i| !i.check().consistent)
        }
    }
}

/// Runs `count` random instances in parallel; the summary lists
/// counterexamples in seed order.
pub fn run_campaign(config: FuzzConfig) -> FuzzSummary {
    let outcomes: Vec<Outcome> = (0..config.count as u64)
        .into_par_iter()
        .map(|i| run_one(config.campaign, config.seed.wrapping_add(i), config.max_size))
        .collect();
    FuzzSummary {
        config,
        hypotheses_held: outcomes.iter().filter(|o| o.hypotheses).count(),
        conclusions_held: outcomes.iter().filter(|o| o.conclusion).count(),
        counterexamples: outcomes.into_iter().filter_map(|o| o.counterexample).collect(),
    }
}
