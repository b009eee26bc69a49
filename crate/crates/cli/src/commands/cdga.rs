use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;
use workbench_core::cdga::{build_preset, parse_spec, preset_names, DgModule, VanishingCertificate};
use workbench_core::exactla::FieldKind;
use workbench_core::freealg::BoxBounds;
use workbench_core::grading::VanishingLine;

use super::{dim_cells, dim_table, DimCell, Rational};
use crate::chart::{Chart, GuideLine};
use crate::{Ctx, Outcome, Status};

#[derive(Args, Debug)]
pub struct HomologyArgs {
    /// Named complex: vanishA, vanishB, intstab-f2, intstab-fl(ℓ), A-algebra-fl(ℓ), koszul-q, koszul-f2, koszul-fl(ℓ).
    #[arg(long, conflicts_with = "spec")]
    preset: Option<String>,
    /// CDGA spec file (generators, differentials, module generators).
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long = "box", value_name = "G,D")]
    bounds: Option<BoxBounds>,
    #[arg(long)]
    field: Option<FieldKind>,
}

#[derive(Args, Debug)]
pub struct VanishArgs {
    #[command(flatten)]
    source: HomologyArgs,
    /// Slope λ of the line d < λ·g; defaults to the preset's own slope.
    #[arg(long)]
    slope: Option<Rational>,
}

struct Complex {
    label: String,
    module: DgModule,
    bounds: BoxBounds,
    slope: Option<Rational>,
}

fn complex(args: HomologyArgs, ctx: &mut Ctx) -> Result<Complex> {
    let bounds = ctx.cfg.pick(args.bounds, "box")?;
    let field = ctx.cfg.pick(args.field, "field")?;
    if let Some(path) = ctx.cfg.pick_path(args.spec, "spec") {
        let text = ctx.read(&path)?;
        let module = parse_spec(&text).with_context(|| format!("in {}", path.display()))?;
        if let Some(f) = field {
            if f != module.field() {
                bail!("{} declares field {}, but {f} was requested", path.display(), module.field());
            }
        }
        let Some(bounds) = bounds else { bail!("--box G,D is required with --spec") };
        return Ok(Complex {
            label: path.display().to_string(),
            module,
            bounds,
            slope: None,
        });
    }
    let Some(name) = args.preset.or_else(|| ctx.cfg.get("preset").map(String::from)) else {
        let names: Vec<&str> = preset_names().iter().map(|p| p.name).collect();
        bail!("give --preset NAME ({}) or --spec FILE", names.join(", "));
    };
    let p = build_preset(&name, bounds, field)?;
    Ok(Complex {
        label: p.name,
        module: p.complex,
        bounds: bounds.unwrap_or(p.default_box),
        slope: p.slope.map(Rational),
    })
}

#[derive(Serialize)]
struct HomologyOut {
    complex: String,
    field: String,
    bounds: BoxBounds,
    nonzero: Vec<DimCell>,
    cells: Vec<DimCell>,
}

pub fn homology(args: HomologyArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let c = complex(args, ctx)?;
    let table = c.module.homology_table(c.bounds)?;
    let title = format!("H({}) over {} in box ({},{})", c.label, table.field, c.bounds.g_max, c.bounds.d_max);
    let nonzero: Vec<DimCell> = dim_cells(&table.dims).into_iter().filter(|x| x.dim > 0).collect();
    let mut text = format!("{title}\nnonzero:");
    for x in &nonzero {
        text.push_str(&format!(" ({},{})^{}", x.g, x.d, x.dim));
    }
    text.push('\n');
    let chart = Chart::from_dims(&title, c.bounds.g_max, c.bounds.d_max, &table.dims);
    Ok(Outcome::new(
        HomologyOut {
            complex: c.label.clone(),
            field: table.field.to_string(),
            bounds: c.bounds,
            nonzero,
            cells: dim_cells(&table.dims),
        },
        text,
    )
    .param("complex", &c.label)
    .param("field", table.field)
    .param("box", format!("{},{}", c.bounds.g_max, c.bounds.d_max))
    .table(dim_table(&table.dims))
    .chart(chart))
}

pub fn vanish_check(args: VanishArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let slope_flag = ctx.cfg.pick(args.slope, "slope")?;
    let c = complex(args.source, ctx)?;
    let Some(slope) = slope_flag.or(c.slope) else { bail!("--slope p/q is required for {}", c.label) };
    let line = VanishingLine::through_origin(slope.0.clone())?;
    let report = c.module.verify_vanishing(&line, c.bounds)?;
    let title = format!("H({}) over {} against {line}", c.label, report.table.field);
    let verdict = match &report.certificate {
        VanishingCertificate::Certified { cells_checked } => {
            format!("certified: all {cells_checked} cells strictly below {line} vanish in box ({},{})", c.bounds.g_max, c.bounds.d_max)
        }
        VanishingCertificate::Counterexample { bidegree, dim } => {
            format!("counterexample: H at {bidegree} has dimension {dim}, strictly below {line}")
        }
    };
    let status = if report.is_certified() { Status::Certified } else { Status::Counterexample };
    let chart = Chart::from_dims(&title, c.bounds.g_max, c.bounds.d_max, &report.table.dims).with_line(GuideLine::from_vanishing(&line));
    #[derive(Serialize)]
    struct Out<'a> {
        complex: &'a str,
        field: String,
        bounds: BoxBounds,
        line: &'a VanishingLine,
        certificate: &'a VanishingCertificate,
        cells: Vec<DimCell>,
    }
    Ok(Outcome::new(
        Out {
            complex: &c.label,
            field: report.table.field.to_string(),
            bounds: c.bounds,
            line: &line,
            certificate: &report.certificate,
            cells: dim_cells(&report.table.dims),
        },
        format!("{title}\n{verdict}\n"),
    )
    .param("complex", &c.label)
    .param("field", report.table.field)
    .param("box", format!("{},{}", c.bounds.g_max, c.bounds.d_max))
    .param("slope", &slope)
    .status(status)
    .table(dim_table(&report.table.dims))
    .chart(chart))
}
