use anyhow::{bail, Result};
use clap::Args;
use serde::Serialize;
use workbench_core::grading::{auto_genus_bound, bidegrees_between, range_catalog, twisted_catalog, Bidegree, RangeKind, RangeStatement};

use super::Rational;
use crate::chart::{Chart, GuideLine, Provenance};
use crate::{Ctx, Outcome, Status, Table};

#[derive(Args, Debug)]
pub struct RangesArgs {
    /// epi, iso or vanishing.
    #[arg(long)]
    kind: Option<RangeKind>,
    #[arg(long)]
    a: Option<i64>,
    #[arg(long)]
    b: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    e: Option<i64>,
    /// Read the statement from its rendering, e.g. "4d <= 3g-5".
    #[arg(long, conflicts_with_all = ["a", "b", "e"])]
    parse: Option<String>,
    /// Bidegrees to test, as g,d; repeatable.
    #[arg(long, value_name = "G,D")]
    check: Vec<Bidegree>,
    /// List the named ranges and the twisted families.
    #[arg(long, conflicts_with_all = ["a", "b", "e", "parse", "check"])]
    catalog: bool,
    /// Largest twist s instantiated in the catalog.
    #[arg(long, default_value_t = 3)]
    s_max: i64,
}

#[derive(Serialize)]
struct CheckResult {
    g: u32,
    d: u32,
    holds: bool,
}

#[derive(Serialize)]
struct Named {
    name: &'static str,
    kind: RangeKind,
    statement: String,
}

#[derive(Serialize)]
struct Twisted {
    name: &'static str,
    kind: RangeKind,
    family: String,
    instances: Vec<(i64, String)>,
}

pub fn ranges(args: RangesArgs, _ctx: &mut Ctx) -> Result<Outcome> {
    if args.catalog {
        return catalog(args.s_max);
    }
    let kind = args.kind.unwrap_or(RangeKind::Isomorphism);
    let r = match (&args.parse, args.a, args.b) {
        (Some(s), _, _) => RangeStatement::parse(kind, s)?,
        (None, Some(a), Some(b)) => RangeStatement::new(kind, a, b, args.e.unwrap_or(0))?,
        _ => bail!("give --a and --b (and optionally --e), --parse, or --catalog"),
    };
    let checks: Vec<CheckResult> = args
        .check
        .iter()
        .map(|bd| CheckResult {
            g: bd.g,
            d: bd.d,
            holds: r.satisfies(*bd),
        })
        .collect();
    let mut text = format!("{kind}: {r}\n");
    let mut table = Table::new(&["g", "d", "holds"]);
    let g_max = args.check.iter().map(|b| b.g).max().unwrap_or(0).max(6);
    let d_max = args.check.iter().map(|b| b.d).max().unwrap_or(0).max(4);
    let mut chart = Chart::new(format!("{kind}: {r}"), g_max, d_max).with_line(GuideLine::from_range(&r));
    for c in &checks {
        text.push_str(&format!("({},{}) {}\n", c.g, c.d, if c.holds { "holds" } else { "fails" }));
        table.row(vec![c.g.to_string(), c.d.to_string(), c.holds.to_string()]);
        chart.push(c.g, c.d, if c.holds { "in" } else { "out" }, Provenance::Computed);
    }
    let status = if checks.iter().all(|c| c.holds) { Status::Ok } else { Status::Failed };
    #[derive(Serialize)]
    struct Out<'a> {
        statement: &'a RangeStatement,
        rendered: String,
        checks: Vec<CheckResult>,
    }
    Ok(Outcome::new(
        Out {
            rendered: r.to_string(),
            statement: &r,
            checks,
        },
        text,
    )
    .param("kind", kind)
    .param("statement", &r)
    .status(status)
    .table(table)
    .chart(chart))
}

fn catalog(s_max: i64) -> Result<Outcome> {
    if s_max < 0 {
        bail!("--s-max must be nonnegative");
    }
    let named: Vec<Named> = range_catalog()
        .into_iter()
        .map(|(name, r)| Named {
            name,
            kind: r.kind,
            statement: r.to_string(),
        })
        .collect();
    let twisted = twisted_catalog()
        .into_iter()
        .map(|(name, t)| {
            Ok(Twisted {
                name,
                kind: t.kind,
                family: t.to_string(),
                instances: (0..=s_max).map(|s| Ok((s, t.instantiate(s)?.to_string()))).collect::<Result<_>>()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut text = String::new();
    let mut table = Table::new(&["name", "kind", "s", "statement"]);
    for n in &named {
        text.push_str(&format!("{:<24} {:<12} {}\n", n.name, n.kind, n.statement));
        table.row(vec![n.name.into(), n.kind.to_string(), String::new(), n.statement.clone()]);
    }
    for t in &twisted {
        text.push_str(&format!("{:<24} {:<12} {}\n", t.name, t.kind, t.family));
        for (s, r) in &t.instances {
            text.push_str(&format!("{:<24} {:<12}   s={s}: {r}\n", "", ""));
            table.row(vec![t.name.into(), t.kind.to_string(), s.to_string(), r.clone()]);
        }
    }
    #[derive(Serialize)]
    struct Out {
        ranges: Vec<Named>,
        twisted: Vec<Twisted>,
    }
    Ok(Outcome::new(Out { ranges: named, twisted }, text).param("s_max", s_max).table(table))
}

#[derive(Args, Debug)]
pub struct SlopeBoxArgs {
    /// Upper slope p/q.
    #[arg(long)]
    high: Option<Rational>,
    /// Largest genus; when omitted, the bound 1/(1 − p/q) is used (p/q < 1).
    #[arg(long)]
    gmax: Option<u32>,
}

pub fn slope_box(args: SlopeBoxArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let Some(high) = ctx.cfg.pick(args.high, "slope")? else { bail!("--high p/q is required") };
    let (gmax, source) = match ctx.cfg.pick(args.gmax, "gmax")? {
        Some(g) => (g, "given"),
        None => (auto_genus_bound(&high.0)?, "auto"),
    };
    let list = bidegrees_between(&high.0, gmax)?;
    let rendered: Vec<String> = list.iter().map(Bidegree::to_string).collect();
    let text = format!("d/g ≤ {high}, d ≥ g − 1, 1 ≤ g ≤ {gmax} ({source}): {}\n", rendered.join(" "));
    let mut table = Table::new(&["g", "d"]);
    let d_max = list.iter().map(|b| b.d).max().unwrap_or(0);
    let line = GuideLine {
        label: format!("d = {high}·g"),
        slope: high.0.clone(),
        intercept: Default::default(),
    };
    let mut chart = Chart::new(format!("bidegrees below slope {high}"), gmax, d_max.max(1)).with_line(line);
    for b in &list {
        table.row(vec![b.g.to_string(), b.d.to_string()]);
        chart.push(b.g, b.d, "•", Provenance::Computed);
    }
    #[derive(Serialize)]
    struct Out {
        high: String,
        gmax: u32,
        gmax_source: &'static str,
        bidegrees: Vec<Bidegree>,
    }
    Ok(Outcome::new(
        Out {
            high: high.to_string(),
            gmax,
            gmax_source: source,
            bidegrees: list,
        },
        text,
    )
    .param("high", &high)
    .param("gmax", gmax)
    .table(table)
    .chart(chart))
}
