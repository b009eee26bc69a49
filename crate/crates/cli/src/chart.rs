//! Bidegree charts: g along the horizontal axis, d up the vertical one, as
//! ASCII grids or a fixed SVG template. Every cell records where its number
//! came from.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use workbench_core::grading::{Bidegree, RangeStatement, VanishingLine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Computed,
    PaperFixture,
}

impl Provenance {
    fn tag(self) -> &'static str {
        match self {
            Provenance::Computed => "c",
            Provenance::PaperFixture => "p",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Provenance::Computed => "computed",
            Provenance::PaperFixture => "paper-fixture",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub g: u32,
    pub d: u32,
    pub label: String,
    pub provenance: Provenance,
}

/// The line d = slope·g + intercept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GuideLine {
    pub label: String,
    #[serde(serialize_with = "workbench_core::ser::rational")]
    pub slope: BigRational,
    #[serde(serialize_with = "workbench_core::ser::rational")]
    pub intercept: BigRational,
}

impl GuideLine {
    pub fn from_vanishing(line: &VanishingLine) -> Self {
        GuideLine {
            label: line.to_string(),
            slope: line.lambda.clone(),
            intercept: -(&line.lambda * &line.c),
        }
    }

    /// The boundary a·d = b·g + e of a range statement.
    pub fn from_range(r: &RangeStatement) -> Self {
        let a = BigRational::from_integer(BigInt::from(r.a));
        GuideLine {
            label: r.to_string(),
            slope: BigRational::from_integer(BigInt::from(r.b)) / &a,
            intercept: BigRational::from_integer(BigInt::from(r.e)) / &a,
        }
    }

    fn at(&self, g: &BigRational) -> BigRational {
        &self.slope * g + &self.intercept
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub title: String,
    pub g_max: u32,
    pub d_max: u32,
    pub cells: Vec<Cell>,
    pub lines: Vec<GuideLine>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Chart {
    pub fn new(title: impl Into<String>, g_max: u32, d_max: u32) -> Self {
        Chart {
            title: title.into(),
            g_max,
            d_max,
            cells: Vec::new(),
            lines: Vec::new(),
        }
    }

    /// One computed cell per nonzero dimension, labelled by the dimension.
    pub fn from_dims(title: impl Into<String>, g_max: u32, d_max: u32, dims: &BTreeMap<Bidegree, u64>) -> Self {
        let mut c = Chart::new(title, g_max, d_max);
        for (bd, &n) in dims {
            if n > 0 {
                c.push(bd.g, bd.d, n.to_string(), Provenance::Computed);
            }
        }
        c
    }

    /// Adds a cell; labels landing on an occupied bidegree are joined with ", ".
    pub fn push(&mut self, g: u32, d: u32, label: impl Into<String>, provenance: Provenance) {
        let label = label.into();
        if let Some(cell) = self.cells.iter_mut().find(|c| c.g == g && c.d == d && c.provenance == provenance) {
            cell.label.push_str(", ");
            cell.label.push_str(&label);
            return;
        }
        self.cells.push(Cell { g, d, label, provenance });
        self.cells.sort_by_key(|c| (c.d, c.g));
    }

    pub fn with_line(mut self, line: GuideLine) -> Self {
        self.lines.push(line);
        self
    }

    fn cell_text(&self, g: u32, d: u32) -> Option<String> {
        let parts: Vec<String> =
            self.cells.iter().filter(|c| c.g == g && c.d == d).map(|c| format!("{}[{}]", c.label, c.provenance.tag())).collect();
        (!parts.is_empty()).then(|| parts.join(" "))
    }

    /// Whether some guide line passes within half a unit (vertically) of (g, d).
    fn on_a_line(&self, g: u32, d: u32) -> bool {
        let g = BigRational::from_integer(BigInt::from(g));
        let d = BigRational::from_integer(BigInt::from(d));
        self.lines.iter().any(|l| (l.at(&g) - &d).abs() < rat(1, 2))
    }

    pub fn to_ascii(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        let width = (0..=self.g_max)
            .flat_map(|g| (0..=self.d_max).map(move |d| (g, d)))
            .filter_map(|(g, d)| self.cell_text(g, d))
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(1)
            .max(self.g_max.to_string().len())
            .max(3);
        let margin = self.d_max.to_string().len().max(3);
        let pad = |s: &str| format!("{s}{}", " ".repeat(width - s.chars().count()));
        for d in (0..=self.d_max).rev() {
            let row: Vec<String> = (0..=self.g_max)
                .map(|g| match self.cell_text(g, d) {
                    Some(s) => pad(&s),
                    None if self.on_a_line(g, d) => pad("·"),
                    None => pad(""),
                })
                .collect();
            let _ = writeln!(out, "{d:>margin$} | {}", row.join(" ").trim_end());
        }
        let rule = "-".repeat((self.g_max as usize + 1) * (width + 1));
        let _ = writeln!(out, "{} +-{rule}", " ".repeat(margin));
        let axis: Vec<String> = (0..=self.g_max).map(|g| pad(&g.to_string())).collect();
        let _ = writeln!(out, "{}d/g {}", " ".repeat(margin.saturating_sub(2)), axis.join(" ").trim_end());
        for l in &self.lines {
            let _ = writeln!(out, "guide (·): {}", l.label);
        }
        let _ = writeln!(out, "tags: [c] computed, [p] paper fixture");
        out
    }

    pub fn to_svg(&self) -> String {
        const STEP_G: i64 = 90;
        const STEP_D: i64 = 40;
        const MARGIN: i64 = 60;
        let width = 2 * MARGIN + STEP_G * (i64::from(self.g_max) + 1);
        let height = 2 * MARGIN + STEP_D * (i64::from(self.d_max) + 1);
        let x = |g: &BigRational| rat(MARGIN, 1) + g * rat(STEP_G, 1);
        let y = |d: &BigRational| rat(height - MARGIN, 1) - d * rat(STEP_D, 1);
        let xi = |g: u32| MARGIN + STEP_G * i64::from(g);
        let yi = |d: u32| height - MARGIN - STEP_D * i64::from(d);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="serif" font-size="14">"#
        );
        let _ = writeln!(s, "<title>{}</title>", escape(&self.title));
        let _ = writeln!(s, r##"<g class="grid" stroke="#bbb" stroke-dasharray="1,3">"##);
        for g in 0..=self.g_max {
            let _ = writeln!(s, r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#, xi(g), yi(0) + 20, yi(self.d_max) - 20);
        }
        for d in 0..=self.d_max {
            let _ = writeln!(s, r#"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}"/>"#, yi(d), xi(0) - 20, xi(self.g_max) + 40);
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r#"<g class="axes" stroke="black">"#);
        let _ = writeln!(s, r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#, xi(0), yi(0) + 20, yi(self.d_max) - 20);
        let _ = writeln!(s, r#"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}"/>"#, yi(0), xi(0) - 20, xi(self.g_max) + 40);
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r#"<g class="ticks" font-size="10" text-anchor="middle">"#);
        for g in 0..=self.g_max {
            let _ = writeln!(s, r#"<text x="{}" y="{}">{g}</text>"#, xi(g), yi(0) + 32);
        }
        for d in 0..=self.d_max {
            let _ = writeln!(s, r#"<text x="{}" y="{}">{d}</text>"#, xi(0) - 32, yi(d) + 4);
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}">d/g</text>"#, xi(0) - 32, yi(0) + 32);
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r##"<g class="guides" stroke="#8b1a1a" stroke-width="2" stroke-dasharray="3,3" fill="#8b1a1a" font-size="11">"##);
        for l in &self.lines {
            if let Some((g0, g1)) = self.clip(l) {
                let (d0, d1) = (l.at(&g0), l.at(&g1));
                let _ = writeln!(
                    s,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    coord(&x(&g0)),
                    coord(&y(&d0)),
                    coord(&x(&g1)),
                    coord(&y(&d1))
                );
                let _ = writeln!(
                    s,
                    r#"<text stroke="none" x="{}" y="{}">{}</text>"#,
                    coord(&(x(&g1) + rat(4, 1))),
                    coord(&y(&d1)),
                    escape(&l.label)
                );
            }
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r#"<g class="cells" text-anchor="middle">"#);
        for c in &self.cells {
            let _ = writeln!(
                s,
                r#"<text x="{0}" y="{1}" class="{2}" data-provenance="{2}">{3}</text>"#,
                xi(c.g),
                yi(c.d) + 5,
                c.provenance.name(),
                escape(&c.label),
            );
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, "</svg>");
        s
    }

    /// The g-interval on which a guide line stays inside the drawn box.
    fn clip(&self, l: &GuideLine) -> Option<(BigRational, BigRational)> {
        let half = rat(1, 2);
        let (mut lo, mut hi) = (-half.clone(), BigRational::from_integer(BigInt::from(self.g_max)) + &half);
        let (d_lo, d_hi) = (-half.clone(), BigRational::from_integer(BigInt::from(self.d_max)) + &half);
        if l.slope.is_zero() {
            return (l.intercept >= d_lo && l.intercept <= d_hi).then_some((lo, hi));
        }
        let mut a = (&d_lo - &l.intercept) / &l.slope;
        let mut b = (&d_hi - &l.intercept) / &l.slope;
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        lo = lo.max(a);
        hi = hi.min(b);
        (lo < hi).then_some((lo, hi))
    }
}

/// A coordinate rounded to two decimals with exact arithmetic.
fn coord(q: &BigRational) -> String {
    let hundredths = (q * rat(100, 1)).round().to_integer();
    let neg = hundredths < BigInt::zero();
    let abs = if neg { -hundredths } else { hundredths };
    let whole = &abs / 100;
    let frac = &abs % 100;
    format!("{}{whole}.{frac:0>2}", if neg { "-" } else { "" })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
