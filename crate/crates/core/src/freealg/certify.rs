use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;

use super::{validate_generators, BoxBounds, FreeAlgError, Generator};
use crate::grading::Bidegree;

/// A unary operation (g, d) ↦ (m·g, m·d + a).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperationSignature {
    pub name: String,
    pub m: i64,
    pub a: i64,
}

impl OperationSignature {
    pub fn new(name: impl Into<String>, m: i64, a: i64) -> Result<Self, FreeAlgError> {
        let name = name.into();
        if m < 1 || a < 0 {
            return Err(FreeAlgError::BadSignature(format!("{name}: m={m}, a={a}")));
        }
        Ok(OperationSignature { name, m, a })
    }

    pub fn apply(&self, bd: Bidegree) -> Bidegree {
        Bidegree::new(bd.g * self.m as u32, bd.d * self.m as u32 + self.a as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SlopeCertificate {
    Certified {
        /// Bidegrees reached by the closure, each with one witness expression.
        classes: Vec<(Bidegree, String)>,
    },
    Counterexample {
        class: String,
        bidegree: Bidegree,
        #[serde(serialize_with = "crate::ser::rational")]
        slope: BigRational,
    },
}

impl SlopeCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, SlopeCertificate::Certified { .. })
    }
}

/// Close the generator bidegrees under brackets (degree +1), products and the
/// given operations inside the box, and check every reached bidegree has
/// slope ≥ `min_slope`. Generators are checked first in declaration order, then
/// composites in (g, d) order.
pub fn slope_certify(
    gens: &[Generator],
    ops: &[OperationSignature],
    min_slope: &BigRational,
    bounds: BoxBounds,
) -> Result<SlopeCertificate, FreeAlgError> {
    validate_generators(gens)?;
    bounds.check()?;
    for op in ops {
        if op.m < 1 || op.a < 0 {
            return Err(FreeAlgError::BadSignature(op.name.clone()));
        }
    }
    let below = |bd: Bidegree| {
        let s = BigRational::new((bd.d as i64).into(), (bd.g as i64).into());
        (s < *min_slope).then_some(s)
    };
    for g in gens {
        if let Some(slope) = below(g.bidegree()) {
            return Ok(SlopeCertificate::Counterexample {
                class: g.name.clone(),
                bidegree: g.bidegree(),
                slope,
            });
        }
    }

    let mut reached: BTreeMap<Bidegree, String> = BTreeMap::new();
    let mut frontier: Vec<Bidegree> = Vec::new();
    for g in gens {
        if bounds.contains(g.bidegree()) && !reached.contains_key(&g.bidegree()) {
            reached.insert(g.bidegree(), g.name.clone());
            frontier.push(g.bidegree());
        }
    }
    while let Some(x) = frontier.pop() {
        let wx = reached[&x].clone();
        let mut new: Vec<(Bidegree, String)> = Vec::new();
        for (y, wy) in reached.iter() {
            new.push((Bidegree::new(x.g + y.g, x.d + y.d + 1), format!("[{wx},{wy}]")));
            new.push((Bidegree::new(x.g + y.g, x.d + y.d), format!("{wx}·{wy}")));
        }
        for op in ops {
            new.push((op.apply(x), format!("{}({wx})", op.name)));
        }
        for (bd, w) in new {
            if bounds.contains(bd) && !reached.contains_key(&bd) {
                reached.insert(bd, w);
                frontier.push(bd);
            }
        }
    }
    for (bd, w) in &reached {
        if let Some(slope) = below(*bd) {
            return Ok(SlopeCertificate::Counterexample {
                class: w.clone(),
                bidegree: *bd,
                slope,
            });
        }
    }
    Ok(SlopeCertificate::Certified {
        classes: reached.into_iter().collect(),
    })
}
