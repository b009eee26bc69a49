use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use serde::Serialize;
use workbench_core::posets::{
    check_nerve_theorem, parse_cover, parse_weights, run_campaign, Campaign, Coefficients, ConnectivityReport, FinitePoset, FuzzConfig,
};

use crate::{Ctx, Outcome, Status, Table};

#[derive(Subcommand, Debug)]
pub enum NerveCmd {
    /// Check the hypotheses and the conclusion of the Nerve Theorem on one instance.
    Check {
        /// The covered poset 𝒳.
        #[arg(long)]
        poset: PathBuf,
        /// The functor F, lines `a : x1 x2 …`.
        #[arg(long)]
        cover: PathBuf,
        /// The indexing poset 𝒜.
        #[arg(long = "A", value_name = "FILE")]
        index: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        /// Weights t_𝒳, lines `element value`, `* value` for the rest.
        #[arg(long)]
        tx: PathBuf,
        /// Weights t_𝒜.
        #[arg(long)]
        ta: PathBuf,
    },
}

impl NerveCmd {
    pub fn name(&self) -> &'static str {
        match self {
            NerveCmd::Check { .. } => "check",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum PosetCmd {
    /// Reduced homology and connectivity of an order complex.
    Homology {
        #[arg(long, conflicts_with = "boundary")]
        poset: Option<PathBuf>,
        /// Use the proper nonempty subsets of a (P+1)-set, i.e. ∂Δᴾ.
        #[arg(long, value_name = "P")]
        boundary: Option<usize>,
        /// Z, Q or a prime field.
        #[arg(long, default_value = "Z")]
        coefficients: Coefficients,
    },
    /// Randomized search for counterexamples to the poset-map or Nerve theorem.
    Fuzz {
        /// map or nerve.
        #[arg(long)]
        campaign: Option<Campaign>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory receiving one file per minimized counterexample.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

impl PosetCmd {
    pub fn name(&self) -> &'static str {
        match self {
            PosetCmd::Homology { .. } => "homology",
            PosetCmd::Fuzz { .. } => "fuzz",
        }
    }
}

fn load_poset(ctx: &mut Ctx, path: &Path) -> Result<FinitePoset> {
    let text = ctx.read(path)?;
    FinitePoset::parse(&text).with_context(|| format!("in {}", path.display()))
}

pub fn nerve(cmd: NerveCmd, ctx: &mut Ctx) -> Result<Outcome> {
    let NerveCmd::Check { poset, cover, index, n, tx, ta } = cmd;
    let x = load_poset(ctx, &poset)?;
    let a = load_poset(ctx, &index)?;
    let f = parse_cover(&x, &a, &ctx.read(&cover)?).with_context(|| format!("in {}", cover.display()))?;
    let wx = parse_weights(&x, &ctx.read(&tx)?).with_context(|| format!("in {}", tx.display()))?;
    let wa = parse_weights(&a, &ctx.read(&ta)?).with_context(|| format!("in {}", ta.display()))?;
    let r = check_nerve_theorem(&x, &a, &f, n, &wx, &wa)?;
    let yes = |b: bool| if b { "holds" } else { "fails" };
    let mut text = format!(
        "n = {n}\n(i)   𝒜 is (n−1)-connected: {}\n(ii)  lower links of 𝒜 and the covers F(a): {}\n(iii) lower links of 𝒳 and the sets 𝒜ₓ: {}\nconclusion, 𝒳 is (n−1)-connected: {}\n",
        yes(r.hypothesis_i_holds),
        yes(r.hypothesis_ii_holds),
        yes(r.hypothesis_iii_holds),
        yes(r.conclusion_holds)
    );
    for (tag, diags) in [("ii", &r.hypothesis_ii), ("iii", &r.hypothesis_iii)] {
        for d in diags.iter().filter(|d| !d.holds()) {
            text.push_str(&format!("  ({tag}) fails at {} (t = {})\n", d.element, d.weight));
        }
    }
    text.push_str(if r.consistent { "consistent with the theorem\n" } else { "COUNTEREXAMPLE: hypotheses hold but the conclusion fails\n" });
    let mut table = Table::new(&["part", "element", "weight", "holds"]);
    for (tag, diags) in [("ii", &r.hypothesis_ii), ("iii", &r.hypothesis_iii)] {
        for d in diags {
            table.row(vec![tag.into(), d.element.clone(), d.weight.to_string(), d.holds().to_string()]);
        }
    }
    let status = if r.consistent { Status::Ok } else { Status::Counterexample };
    Ok(Outcome::new(&r, text)
        .param("poset", poset.display())
        .param("A", index.display())
        .param("cover", cover.display())
        .param("n", n)
        .status(status)
        .table(table))
}

pub fn poset(cmd: PosetCmd, ctx: &mut Ctx) -> Result<Outcome> {
    match cmd {
        PosetCmd::Homology { poset, boundary, coefficients } => homology(poset, boundary, coefficients, ctx),
        PosetCmd::Fuzz { campaign, count, max_size, seed, dump } => fuzz(campaign, count, max_size, seed, dump, ctx),
    }
}

fn homology(poset: Option<PathBuf>, boundary: Option<usize>, coefficients: Coefficients, ctx: &mut Ctx) -> Result<Outcome> {
    let (label, p) = match (poset, boundary) {
        (Some(path), _) => (path.display().to_string(), load_poset(ctx, &path)?),
        (None, Some(p)) if (1..=12).contains(&p) => (format!("∂Δ^{p}"), FinitePoset::proper_subsets(p + 1)),
        (None, Some(p)) => bail!("--boundary must lie in 1..=12, got {p}"),
        (None, None) => bail!("give --poset FILE or --boundary P"),
    };
    let r: ConnectivityReport = p.reduced_homology(coefficients);
    let conn = match serde_json::to_value(r.connectivity)? {
        serde_json::Value::String(s) => s,
        v => v.to_string(),
    };
    let text = format!("{label}: {} elements, reduced homology over {coefficients}: {}, connectivity {conn}\n", p.len(), r.summary());
    let mut table = Table::new(&["degree", "rank", "torsion"]);
    for g in &r.groups {
        let torsion: Vec<String> = g.torsion.iter().map(|t| t.to_string()).collect();
        table.row(vec![g.degree.to_string(), g.rank.to_string(), torsion.join(" ")]);
    }
    #[derive(Serialize)]
    struct Out<'a> {
        poset: &'a str,
        elements: usize,
        #[serde(flatten)]
        report: &'a ConnectivityReport,
    }
    Ok(Outcome::new(
        Out {
            poset: &label,
            elements: p.len(),
            report: &r,
        },
        text,
    )
    .param("poset", &label)
    .param("coefficients", coefficients)
    .table(table))
}

fn fuzz(
    campaign: Option<Campaign>,
    count: Option<usize>,
    max_size: Option<usize>,
    seed: Option<u64>,
    dump: Option<PathBuf>,
    ctx: &mut Ctx,
) -> Result<Outcome> {
    let config = FuzzConfig {
        campaign: ctx.cfg.pick(campaign, "campaign")?.unwrap_or(Campaign::Nerve),
        count: ctx.cfg.pick(count, "count")?.unwrap_or(10_000),
        max_size: ctx.cfg.pick(max_size, "max-size")?.unwrap_or(12),
        seed: ctx.cfg.pick(seed, "seed")?.unwrap_or(0),
    };
    if !(1..=16).contains(&config.max_size) {
        bail!("--max-size must lie in 1..=16, got {}", config.max_size);
    }
    let summary = run_campaign(config);
    let dump = ctx.cfg.pick_path(dump, "dump");
    if let (Some(dir), false) = (&dump, summary.passed()) {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        for c in &summary.counterexamples {
            let path = dir.join(format!("{}-{}.txt", config.campaign, c.seed));
            std::fs::write(&path, &c.dump).with_context(|| format!("cannot write {}", path.display()))?;
        }
    }
    let mut text = format!(
        "{} campaign: {} instances of at most {} elements from seed {}\nhypotheses held in {}, conclusions held in {}\ncounterexamples: {}\n",
        config.campaign,
        config.count,
        config.max_size,
        config.seed,
        summary.hypotheses_held,
        summary.conclusions_held,
        summary.counterexamples.len()
    );
    let mut table = Table::new(&["seed", "original_size", "minimized_size"]);
    for c in &summary.counterexamples {
        text.push_str(&format!("\nseed {} (size {} → {}):\n{}", c.seed, c.original_size, c.minimized_size, c.dump));
        table.row(vec![c.seed.to_string(), c.original_size.to_string(), c.minimized_size.to_string()]);
    }
    let status = if summary.passed() { Status::Ok } else { Status::Counterexample };
    Ok(Outcome::new(&summary, text)
        .param("campaign", config.campaign)
        .param("count", config.count)
        .param("max_size", config.max_size)
        .param("seed", config.seed)
        .status(status)
        .table(table))
}
