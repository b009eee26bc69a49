use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Subcommand};
use serde::Serialize;
use workbench_core::taut::{
    deduce_h43_kernel, discard_above, gysin_pushforward, nfold_coproduct, pair_tensor, parse_taut, restrict, H43Report, H43Status,
    HomologyFunctional, Ledger, Mono, ParamPoly, SlotPattern, TautPoly, TensorTerm, Var, R12,
};

use crate::{Ctx, Outcome, Status, Table};

#[derive(Subcommand, Debug)]
pub enum TautCmd {
    /// Fibre integration π_! at a given genus.
    Gysin {
        /// Homogeneous expression in e, k1, k2, … with parameters, e.g. "A*e^2+B*e*k1".
        #[arg(long)]
        expr: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        genus: Option<i64>,
    },
    /// n-fold coproduct Δ^{n−1}, optionally restricted slot by slot.
    Coproduct(CoproductArgs),
    /// Pair a coproduct against one functional per tensor slot.
    Pair(PairArgs),
    /// Show the relation ledger and, with --h43, the kernel deduction at genus 4.
    Ledger {
        /// Extra relations and facts, one per line.
        #[arg(long)]
        user: Option<PathBuf>,
        #[arg(long)]
        h43: bool,
    },
}

impl TautCmd {
    pub fn name(&self) -> &'static str {
        match self {
            TautCmd::Gysin { .. } => "gysin",
            TautCmd::Coproduct(_) => "coproduct",
            TautCmd::Pair(_) => "pair",
            TautCmd::Ledger { .. } => "ledger",
        }
    }
}

#[derive(Args, Debug)]
pub struct Source {
    /// Polynomial in κ-classes.
    #[arg(long, conflicts_with_all = ["expr_file", "stored"])]
    expr: Option<String>,
    /// File holding one polynomial (`#` comments allowed).
    #[arg(long, conflicts_with = "stored")]
    expr_file: Option<PathBuf>,
    /// A polynomial stored in the tool; `r12` is the κ₁,κ₂-part of the degree-14 relation.
    #[arg(long)]
    stored: Option<String>,
}

impl Source {
    fn load(self, ctx: &mut Ctx) -> Result<(String, TautPoly)> {
        let (label, text) = match (self.expr, self.expr_file, self.stored) {
            (Some(e), _, _) => (e.clone(), e),
            (_, Some(path), _) => {
                let text = ctx.read(&path)?;
                let lines: Vec<&str> =
                    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()).collect();
                if lines.len() != 1 {
                    bail!("{} should hold exactly one polynomial, found {}", path.display(), lines.len());
                }
                (path.display().to_string(), lines[0].to_string())
            }
            (_, _, Some(name)) if name.eq_ignore_ascii_case("r12") => ("R12".into(), R12.to_string()),
            (_, _, Some(name)) => bail!("no stored polynomial `{name}` (known: r12)"),
            _ => bail!("give --expr, --expr-file or --stored"),
        };
        Ok((label, parse_taut(&text)?))
    }
}

#[derive(Args, Debug)]
pub struct CoproductArgs {
    #[command(flatten)]
    source: Source,
    /// Number of tensor factors.
    #[arg(long)]
    n: usize,
    /// Slot patterns such as "k1,k1,k1,{k1^2|k2},{k1^2|k2}"; `*` admits anything.
    #[arg(long)]
    restrict: Option<String>,
    /// Drop terms involving κᵢ for i above this index.
    #[arg(long)]
    discard_above: Option<u32>,
}

#[derive(Args, Debug)]
pub struct PairArgs {
    /// The pairing of λ⊗λ⊗λ⊗x⊗x against Δ⁴(R12), with ⟨λ,κ₁⟩ = u, ⟨x,κ₂⟩ = t and x killing the genus-5 relation.
    #[arg(long = "paper-6-3", conflicts_with = "functionals")]
    paper: bool,
    /// Functional file: lines `name : mono = value, …` and an optional `slots : name name …`.
    #[arg(long)]
    functionals: Option<PathBuf>,
    #[command(flatten)]
    source: Source,
}

pub fn run(cmd: TautCmd, ctx: &mut Ctx) -> Result<Outcome> {
    match cmd {
        TautCmd::Gysin { expr, genus } => gysin(expr, genus, ctx),
        TautCmd::Coproduct(a) => coproduct(a, ctx),
        TautCmd::Pair(a) => pair(a, ctx),
        TautCmd::Ledger { user, h43 } => ledger(user, h43, ctx),
    }
}

fn gysin(expr: Option<String>, genus: Option<i64>, ctx: &mut Ctx) -> Result<Outcome> {
    let expr = expr.context("--expr is required")?;
    let genus = ctx.cfg.pick(genus, "genus")?.context("--genus is required")?;
    let p = parse_taut(&expr)?;
    let q = gysin_pushforward(&p, genus)?;
    #[derive(Serialize)]
    struct Out<'a> {
        input: &'a TautPoly,
        genus: i64,
        pushforward: &'a TautPoly,
    }
    Ok(Outcome::new(
        Out {
            input: &p,
            genus,
            pushforward: &q,
        },
        format!("π_!({p}) = {q}   (genus {genus})\n"),
    )
    .param("expr", &expr)
    .param("genus", genus))
}

fn term_table(terms: &[TensorTerm]) -> Table {
    let n = terms.first().map_or(0, |t| t.slots.len());
    let mut header: Vec<String> = vec!["coefficient".into()];
    header.extend((1..=n).map(|i| format!("slot{i}")));
    let mut t = Table {
        header,
        rows: Vec::new(),
    };
    for term in terms {
        let mut row = vec![term.coeff.to_string()];
        row.extend(term.slots.iter().map(Mono::to_string));
        t.row(row);
    }
    t
}

fn coproduct(args: CoproductArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let (label, p) = args.source.load(ctx)?;
    let mut terms = nfold_coproduct(&p, args.n)?;
    if let Some(k) = args.discard_above {
        terms = discard_above(&terms, k);
    }
    if let Some(pat) = &args.restrict {
        terms = restrict(&terms, &SlotPattern::parse_list(pat)?)?;
    }
    let mut text = String::new();
    for t in &terms {
        text.push_str(&format!("{t}\n"));
    }
    text.push_str(&format!("{} terms\n", terms.len()));
    #[derive(Serialize)]
    struct Out<'a> {
        input: &'a TautPoly,
        n: usize,
        term_count: usize,
        terms: &'a [TensorTerm],
    }
    let mut out = Outcome::new(
        Out {
            input: &p,
            n: args.n,
            term_count: terms.len(),
            terms: &terms,
        },
        text,
    )
    .param("source", &label)
    .param("n", args.n)
    .table(term_table(&terms));
    if let Some(pat) = &args.restrict {
        out = out.param("restrict", pat);
    }
    if let Some(k) = args.discard_above {
        out = out.param("discard_above", k);
    }
    Ok(out)
}

/// Parses the functional file format described on `--functionals`.
fn parse_functionals(text: &str) -> Result<Vec<HomologyFunctional>> {
    let mut defs: BTreeMap<String, HomologyFunctional> = BTreeMap::new();
    let mut order = Vec::new();
    let mut slots: Option<Vec<String>> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = || format!("line {}", i + 1);
        let (name, body) = line.split_once(':').ok_or_else(|| anyhow!("{}: expected `name : mono = value, …`", at()))?;
        let name = name.trim();
        if name == "slots" {
            slots = Some(body.split_whitespace().map(String::from).collect());
            continue;
        }
        let mut values = Vec::new();
        for entry in body.split(',') {
            let (m, v) = entry.split_once('=').ok_or_else(|| anyhow!("{}: expected `mono = value` in `{entry}`", at()))?;
            let mono = single_monomial(&parse_taut(m)?).with_context(|| format!("{}: `{}`", at(), m.trim()))?;
            let value = parse_taut(v)?;
            if value.terms().keys().any(|k| !k.is_one()) {
                bail!("{}: value `{}` must not involve ring variables", at(), v.trim());
            }
            values.push((mono, value.coefficient(&Mono::one())));
        }
        if defs.insert(name.to_string(), HomologyFunctional::new(name, values)?).is_some() {
            bail!("{}: functional `{name}` defined twice", at());
        }
        order.push(name.to_string());
    }
    let slots = slots.unwrap_or(order);
    slots
        .iter()
        .map(|s| defs.get(s).cloned().ok_or_else(|| anyhow!("slot refers to undefined functional `{s}`")))
        .collect()
}

fn single_monomial(p: &TautPoly) -> Result<Mono> {
    match p.terms().iter().collect::<Vec<_>>().as_slice() {
        [(m, c)] if *c == &ParamPoly::integer(1) => Ok((*m).clone()),
        _ => bail!("expected a single monomial with coefficient 1"),
    }
}

fn builtin_functionals() -> Result<Vec<HomologyFunctional>> {
    let lambda = HomologyFunctional::new("λ", vec![(Mono::pow(Var::Kappa(1), 1), ParamPoly::param("u"))])?;
    let ledger = Ledger::builtin();
    let relation = &ledger.lookup(5, 4).first().context("ledger lacks the genus-5 relation in degree 4")?.poly;
    let x = HomologyFunctional::annihilating("x", relation, &Mono::pow(Var::Kappa(2), 1), "t")?;
    Ok(vec![lambda.clone(), lambda.clone(), lambda, x.clone(), x])
}

fn pair(args: PairArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let (label, p, functionals) = if args.paper {
        (String::from("R12"), parse_taut(R12)?, builtin_functionals()?)
    } else {
        let path = args.functionals.context("give --functionals FILE or --paper-6-3")?;
        let text = ctx.read(&path)?;
        let f = parse_functionals(&text).with_context(|| format!("in {}", path.display()))?;
        let (label, p) = args.source.load(ctx)?;
        (label, p, f)
    };
    let terms = nfold_coproduct(&p, functionals.len())?;
    let value = pair_tensor(&terms, &functionals)?;
    // Only terms on which every slot pairs nontrivially contribute.
    let contributing: Vec<TensorTerm> =
        terms.iter().filter(|t| t.slots.iter().zip(&functionals).all(|(m, f)| !f.eval(m).is_zero())).cloned().collect();
    let mut text = String::new();
    for t in &contributing {
        text.push_str(&format!("{t}\n"));
    }
    text.push_str(&format!("⟨{}, Δ({label})⟩ = {value}\n", functionals.iter().map(|f| f.name.as_str()).collect::<Vec<_>>().join("⊗")));
    #[derive(Serialize)]
    struct Out<'a> {
        input: &'a TautPoly,
        functionals: &'a [HomologyFunctional],
        expanded_terms: usize,
        contributing_terms: &'a [TensorTerm],
        value: &'a ParamPoly,
    }
    Ok(Outcome::new(
        Out {
            input: &p,
            functionals: &functionals,
            expanded_terms: terms.len(),
            contributing_terms: &contributing,
            value: &value,
        },
        text,
    )
    .param("source", &label)
    .param("slots", functionals.len())
    .table(term_table(&contributing)))
}

fn ledger(user: Option<PathBuf>, h43: bool, ctx: &mut Ctx) -> Result<Outcome> {
    let mut l = Ledger::builtin();
    if let Some(path) = &user {
        let text = ctx.read(path)?;
        l.load_user(&text).with_context(|| format!("in {}", path.display()))?;
    }
    let mut text = l.to_text();
    let report: Option<H43Report> = if h43 { Some(deduce_h43_kernel(&l)?) } else { None };
    let mut status = Status::Ok;
    if let Some(r) = &report {
        text.push_str("\nkernel of π_! on Ae + Bκ₁ at genus 4:\n");
        for (p, eq) in r.pushforwards.iter().zip(&r.equations) {
            text.push_str(&format!("  {p}   ⇒ {eq}\n"));
        }
        text.push_str(&format!("  solution dimension {} ({:?})\n", r.solution_dimension, r.status));
        for n in &r.notes {
            text.push_str(&format!("  note: {n}\n"));
        }
        if r.status != H43Status::Determined || r.solution_dimension != 0 {
            status = Status::Failed;
        }
    }
    #[derive(Serialize)]
    struct Out<'a> {
        ledger: &'a Ledger,
        h43: Option<&'a H43Report>,
    }
    let mut out = Outcome::new(
        Out {
            ledger: &l,
            h43: report.as_ref(),
        },
        text,
    )
    .status(status)
    .param("h43", h43);
    if let Some(p) = user {
        out = out.param("user", p.display());
    }
    Ok(out)
}
