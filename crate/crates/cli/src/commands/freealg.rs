use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;
use workbench_core::exactla::FieldKind;
use workbench_core::freealg::{betti_table_f2, free_gerstenhaber_betti, free_graded_lie_basis, parse_generators, BoxBounds, Generator, LieWord};

use super::{dim_cells, dim_table};
use crate::chart::{Chart, Provenance};
use crate::{Ctx, Outcome, Table};

#[derive(Args, Debug)]
pub struct LieBasisArgs {
    /// Generator file, one `name g d [r]` per line.
    #[arg(long)]
    gens: Option<PathBuf>,
    /// Box G,D: 0 ≤ g ≤ G, 0 ≤ d ≤ D.
    #[arg(long = "box", value_name = "G,D")]
    bounds: Option<BoxBounds>,
}

#[derive(Args, Debug)]
pub struct BettiArgs {
    /// Q for the free Gerstenhaber algebra, F2 for the free E₂-algebra.
    #[arg(long)]
    field: Option<FieldKind>,
    #[arg(long)]
    gens: Option<PathBuf>,
    #[arg(long = "box", value_name = "G,D")]
    bounds: Option<BoxBounds>,
}

fn load(ctx: &mut Ctx, gens: Option<PathBuf>, bounds: Option<BoxBounds>) -> Result<(PathBuf, Vec<Generator>, BoxBounds)> {
    let path = ctx.cfg.pick_path(gens, "gens").context("--gens FILE is required")?;
    let text = ctx.read(&path)?;
    let gens = parse_generators(&text).with_context(|| format!("in {}", path.display()))?;
    let Some(bounds) = ctx.cfg.pick(bounds, "box")? else { bail!("--box G,D is required") };
    Ok((path, gens, bounds))
}

pub(crate) fn lie_chart(title: &str, words: &[LieWord], bounds: BoxBounds) -> Chart {
    let mut chart = Chart::new(title, bounds.g_max, bounds.d_max);
    for w in words {
        chart.push(w.bidegree.g, w.bidegree.d, w.name.clone(), Provenance::Computed);
    }
    chart
}

pub(crate) fn lie_outcome(title: &str, gens: &[Generator], bounds: BoxBounds) -> Result<Outcome> {
    let words = free_graded_lie_basis(gens, bounds)?;
    let mut text = String::new();
    let mut table = Table::new(&["name", "g", "d", "weight"]);
    for w in &words {
        text.push_str(&format!("{:<24} ({},{})  r={}\n", w.name, w.bidegree.g, w.bidegree.d, w.weight));
        table.row(vec![w.name.clone(), w.bidegree.g.to_string(), w.bidegree.d.to_string(), w.weight.to_string()]);
    }
    #[derive(Serialize)]
    struct Out<'a> {
        generators: &'a [Generator],
        bounds: BoxBounds,
        basis: &'a [LieWord],
    }
    let chart = lie_chart(title, &words, bounds);
    Ok(Outcome::new(
        Out {
            generators: gens,
            bounds,
            basis: &words,
        },
        text,
    )
    .param("box", format!("{},{}", bounds.g_max, bounds.d_max))
    .table(table)
    .chart(chart))
}

pub fn lie_basis(args: LieBasisArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let (path, gens, bounds) = load(ctx, args.gens, args.bounds)?;
    Ok(lie_outcome("free graded Lie algebra basis", &gens, bounds)?.param("gens", path.display()))
}

pub fn betti(args: BettiArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let field = ctx.cfg.pick(args.field, "field")?.unwrap_or(FieldKind::Rational);
    let (path, gens, bounds) = load(ctx, args.gens, args.bounds)?;
    let table = match field {
        FieldKind::Rational => free_gerstenhaber_betti(&gens, bounds)?,
        FieldKind::Prime(2) => betti_table_f2(&gens, bounds)?,
        other => bail!("betti supports Q and F2, not {other}"),
    };
    let title = format!("Betti numbers over {field}");
    let chart = Chart::from_dims(&title, bounds.g_max, bounds.d_max, &table.dims);
    #[derive(Serialize)]
    struct Out {
        field: String,
        bounds: BoxBounds,
        cells: Vec<super::DimCell>,
    }
    Ok(Outcome::new(
        Out {
            field: field.to_string(),
            bounds,
            cells: dim_cells(&table.dims),
        },
        title,
    )
    .param("field", field)
    .param("gens", path.display())
    .param("box", format!("{},{}", bounds.g_max, bounds.d_max))
    .table(dim_table(&table.dims))
    .chart(chart))
}
