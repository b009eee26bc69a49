use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use serde::Serialize;
use workbench_core::exactla::{smith_normal_form, IntMatrix, SmithForm};
use workbench_core::presentations::{AbelianInvariants, AbelianPresentation, Presentation};
use workbench_core::sympf2::{phi, totally_nonorthogonal_subsets, verify_isomorphism, HomomorphismCheck, Permutation, SympMatrix, SympSpace};

use crate::{Ctx, Outcome, Status, Table};

#[derive(Subcommand, Debug)]
pub enum Sp4Cmd {
    /// The six totally non-orthogonal 5-subsets of 𝔽₂⁴, labelled 1–6.
    Subsets,
    /// The permutation of the six subsets induced by a matrix.
    Phi {
        /// Rows separated by `;`, entries by `,`.
        #[arg(long, conflicts_with = "swap", required_unless_present = "swap")]
        matrix: Option<String>,
        /// The block matrix exchanging the two hyperbolic planes.
        #[arg(long)]
        swap: bool,
    },
    /// Check that Sp₄(𝔽₂) → 𝔖₆ is an isomorphism.
    Verify {
        /// Check the homomorphism property on this many random pairs instead of all of them.
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Sp4Cmd {
    pub fn name(&self) -> &'static str {
        match self {
            Sp4Cmd::Subsets => "subsets",
            Sp4Cmd::Phi { .. } => "phi",
            Sp4Cmd::Verify { .. } => "verify",
        }
    }
}

fn parity(sign: i8) -> &'static str {
    if sign < 0 {
        "odd"
    } else {
        "even"
    }
}

pub fn sp4(cmd: Sp4Cmd, _ctx: &mut Ctx) -> Result<Outcome> {
    let space = SympSpace::new(2);
    let subsets = totally_nonorthogonal_subsets(space)?;
    match cmd {
        Sp4Cmd::Subsets => {
            let rendered: Vec<String> = subsets.iter().map(|s| s.render(space)).collect();
            let mut text = String::new();
            let mut table = Table::new(&["label", "subset"]);
            for (i, r) in rendered.iter().enumerate() {
                text.push_str(&format!("{}: {r}\n", i + 1));
                table.row(vec![(i + 1).to_string(), r.clone()]);
            }
            #[derive(Serialize)]
            struct Out {
                count: usize,
                subsets: Vec<String>,
            }
            Ok(Outcome::new(
                Out {
                    count: rendered.len(),
                    subsets: rendered,
                },
                text,
            )
            .table(table))
        }
        Sp4Cmd::Phi { matrix, swap } => {
            let m = match &matrix {
                Some(s) if !swap => SympMatrix::parse(space, s)?,
                _ => SympMatrix::block_swap(space)?,
            };
            let p: Permutation = phi(&m, &subsets)?;
            let sign = p.sign();
            #[derive(Serialize)]
            struct Out<'a> {
                matrix: String,
                permutation: &'a Permutation,
                sign: i8,
                parity: &'static str,
            }
            let label = matrix.unwrap_or_else(|| "swap".into());
            Ok(Outcome::new(
                Out {
                    matrix: m.to_string(),
                    permutation: &p,
                    sign,
                    parity: parity(sign),
                },
                format!("{p} {}\n", parity(sign)),
            )
            .param("matrix", label))
        }
        Sp4Cmd::Verify { pairs, seed } => {
            let check = match pairs {
                Some(pairs) => HomomorphismCheck::Random { pairs, seed },
                None => HomomorphismCheck::All,
            };
            let r = verify_isomorphism(check)?;
            let mut text = format!(
                "|Sp4(F2)| = {}, |S6| = {}\nsubsets permuted: {}\nhomomorphism on {} pairs: {}\nkernel {}, image {}\nswap ↦ {} {}\n",
                r.group_order,
                r.symmetric_group_order,
                r.subsets_permuted,
                r.homomorphism_pairs_checked,
                r.homomorphism_holds,
                r.kernel_size,
                r.image_size,
                r.swap_permutation,
                parity(r.swap_sign)
            );
            text.push_str(if r.is_isomorphism { "isomorphism\n" } else { "NOT an isomorphism\n" });
            let status = if r.is_isomorphism { Status::Ok } else { Status::Failed };
            let mut out = Outcome::new(&r, text).status(status);
            out = match pairs {
                Some(n) => out.param("pairs", n).param("seed", seed),
                None => out.param("pairs", "all"),
            };
            Ok(out)
        }
    }
}

#[derive(Args, Debug)]
pub struct AbelianizeArgs {
    /// A presentation (`gens:` / `rel:` words), or with extension .abel an abelian presentation (`rel: 10 x - 3 y`).
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

pub fn abelianize(args: AbelianizeArgs, ctx: &mut Ctx) -> Result<Outcome> {
    let text = ctx.read(&args.input)?;
    let abelian = args.input.extension().is_some_and(|e| e == "abel");
    let inv: AbelianInvariants = if abelian {
        AbelianPresentation::parse(&text).with_context(|| format!("in {}", args.input.display()))?.invariants()
    } else {
        Presentation::parse(&text).with_context(|| format!("in {}", args.input.display()))?.abelianization()
    };
    #[derive(Serialize)]
    struct Out<'a> {
        group: String,
        #[serde(flatten)]
        invariants: &'a AbelianInvariants,
    }
    Ok(Outcome::new(
        Out {
            group: inv.to_string(),
            invariants: &inv,
        },
        format!("{inv}\n"),
    )
    .param("in", args.input.display())
    .param("kind", if abelian { "abelian" } else { "presentation" }))
}

#[derive(Subcommand, Debug)]
pub enum LaCmd {
    /// Smith normal form of an integer matrix file (whitespace-separated rows).
    Snf {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
}

impl LaCmd {
    pub fn name(&self) -> &'static str {
        match self {
            LaCmd::Snf { .. } => "snf",
        }
    }
}

pub fn la(cmd: LaCmd, ctx: &mut Ctx) -> Result<Outcome> {
    let LaCmd::Snf { input } = cmd;
    let text = ctx.read(&input)?;
    let m = IntMatrix::parse(&text).with_context(|| format!("in {}", input.display()))?;
    let snf: SmithForm = smith_normal_form(&m);
    let factors: Vec<String> = snf.invariant_factors.iter().map(|d| d.to_string()).collect();
    let mut table = Table::new(&["index", "invariant_factor"]);
    for (i, d) in factors.iter().enumerate() {
        table.row(vec![(i + 1).to_string(), d.clone()]);
    }
    let text = format!("{}×{} matrix, invariant factors [{}], cokernel free rank {}\n", m.rows(), m.cols(), factors.join(", "), snf.free_rank);
    Ok(Outcome::new(&snf, text).param("in", input.display()).table(table))
}
