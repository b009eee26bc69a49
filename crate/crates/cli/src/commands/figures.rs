use anyhow::Result;
use clap::Subcommand;
use workbench_core::freealg::{BoxBounds, Generator};
use workbench_core::grading::{RangeKind, RangeStatement};

use super::freealg::lie_outcome;
use crate::chart::{Chart, GuideLine, Provenance};
use crate::{Ctx, Outcome, Table};

#[derive(Subcommand, Debug)]
pub enum ReportCmd {
    /// Lie words in σ, λ and ρ up to bidegree (4,3), computed.
    FigureLgens,
    /// The known rational homology of the stable-range chart, transcribed with its unknown cells.
    FigureRat,
}

impl ReportCmd {
    pub fn name(&self) -> &'static str {
        match self {
            ReportCmd::FigureLgens => "figure-lgens",
            ReportCmd::FigureRat => "figure-rat",
        }
    }
}

pub fn run(cmd: ReportCmd, _ctx: &mut Ctx) -> Result<Outcome> {
    match cmd {
        ReportCmd::FigureLgens => {
            let gens = vec![Generator::new("σ", 1, 0), Generator::new("λ", 3, 2), Generator::weighted("ρ", 2, 2, 1)];
            lie_outcome("Lie words in σ, λ, ρ", &gens, BoxBounds { g_max: 4, d_max: 3 })
        }
        ReportCmd::FigureRat => figure_rat(),
    }
}

/// Cells of the rational chart as transcribed: (g, d, label).
fn rat_cells() -> Vec<(u32, u32, &'static str)> {
    let mut cells = vec![(0, 0, "Q"), (1, 1, "Q"), (2, 3, "Q"), (3, 2, "Q"), (3, 3, "Q"), (3, 5, "Q"), (3, 6, "Q"), (9, 6, "Q³")];
    cells.extend((1..=9).map(|g| (g, 0, "Q")));
    cells.extend((4..=9).map(|g| (g, 2, "Q")));
    cells.extend((6..=9).map(|g| (g, 4, "Q²")));
    for (gs, ds) in [(4..=5, 4..=8), (6..=7, 5..=8), (8..=8, 6..=8), (9..=9, 7..=8)] {
        for g in gs {
            cells.extend(ds.clone().map(|d| (g, d, "?")));
        }
    }
    cells.sort_unstable();
    cells
}

fn figure_rat() -> Result<Outcome> {
    let lines = [
        RangeStatement::new(RangeKind::Isomorphism, 3, 2, -1)?,
        RangeStatement::new(RangeKind::Isomorphism, 5, 4, -1)?,
    ];
    let mut chart = Chart::new("rational homology, g ≤ 9, d ≤ 8", 9, 8);
    for l in &lines {
        chart = chart.with_line(GuideLine::from_range(l));
    }
    let mut table = Table::new(&["g", "d", "group", "provenance"]);
    for (g, d, label) in rat_cells() {
        chart.push(g, d, label, Provenance::PaperFixture);
        table.row(vec![g.to_string(), d.to_string(), label.into(), Provenance::PaperFixture.name().into()]);
    }
    let text = String::from("every cell is transcribed from the reference chart; '?' marks an unknown group\n");
    Ok(Outcome::new(&chart, text).table(table).chart(chart))
}
