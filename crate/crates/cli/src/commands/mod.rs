pub mod cdga;
pub mod figures;
pub mod freealg;
pub mod grading;
pub mod groups;
pub mod posets;
pub mod taut;

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use serde::Serialize;
use workbench_core::exactla::{fmt_rational, parse_rational};
use workbench_core::grading::Bidegree;

use crate::Table;

/// An exact `n` or `p/q` on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub BigRational);

impl FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_rational(s).map(Rational).map_err(|e| e.to_string())
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&fmt_rational(&self.0))
    }
}

/// One table cell (g, d, value) in a JSON result.
#[derive(Clone, Debug, Serialize)]
pub struct DimCell {
    pub g: u32,
    pub d: u32,
    pub dim: u64,
}

pub fn dim_cells(dims: &BTreeMap<Bidegree, u64>) -> Vec<DimCell> {
    dims.iter().map(|(b, &dim)| DimCell { g: b.g, d: b.d, dim }).collect()
}

pub fn dim_table(dims: &BTreeMap<Bidegree, u64>) -> Table {
    let mut t = Table::new(&["g", "d", "dim"]);
    for (b, n) in dims {
        t.row(vec![b.g.to_string(), b.d.to_string(), n.to_string()]);
    }
    t
}
