use std::io::Write;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use latinlab_core::io::entry_to_json;
use latinlab_core::latin::{all_squares, exact_uniform_sample, MAX_ENUMERATION_ORDER};
use latinlab_core::rng::substream;
use latinlab_core::sampler::{binomial_hypergraph, chain_sample, strip_conflicts, trp_run};
use latinlab_core::LatinSquare;
use rayon::prelude::*;
use serde_json::json;

use crate::{io, OutArg, Status};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// Uniform over all squares (n <= 5).
    Exact,
    /// Jacobson-Matthews chain from the cyclic square; approximately uniform.
    Chain,
    /// Triangle removal process for m steps.
    Trp,
    /// Binomial random 3-partite hypergraph.
    Binomial,
    /// Every square of order n once, in enumeration order (n <= 5).
    All,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    /// Steps of the triangle removal process.
    #[arg(long)]
    pub m: Option<usize>,
    /// Edge probability of the binomial model.
    #[arg(long)]
    pub p: Option<f64>,
    /// Chain steps per sample (default 30 n^2).
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArg,
}

fn square_line(model: &str, seed: u64, replica: u64, l: &LatinSquare) -> serde_json::Value {
    let p = l.parity_counts();
    json!({
        "model": model,
        "seed": seed,
        "replica": replica,
        "n": l.n(),
        "grid": l.rows().into_iter().map(|r| r.into_iter().map(|s| s + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "parity": [p.row, p.col, p.sym],
    })
}

fn validate(a: &GenArgs) -> Result<()> {
    if a.n == 0 {
        bail!("n must be at least 1");
    }
    match a.model {
        Model::Exact | Model::All if a.n > MAX_ENUMERATION_ORDER => bail!("model {:?} needs n <= {MAX_ENUMERATION_ORDER}", a.model),
        Model::Trp => match a.m {
            None => bail!("model trp needs --m"),
            Some(m) if m > a.n * a.n => bail!("m = {m} exceeds n^2 = {}", a.n * a.n),
            _ => {}
        },
        Model::Binomial => match a.p {
            None => bail!("model binomial needs --p"),
            Some(p) if !(0.0..=1.0).contains(&p) => bail!("p = {p} is outside [0, 1]"),
            _ => {}
        },
        _ => {}
    }
    Ok(())
}

fn replica(a: &GenArgs, i: u64) -> Result<serde_json::Value> {
    let mut rng = substream(a.seed, i);
    let n = a.n;
    Ok(match a.model {
        Model::Exact => square_line("exact", a.seed, i, &exact_uniform_sample(n, &mut rng)?),
        Model::Chain => square_line("chain", a.seed, i, &chain_sample(n, a.steps.unwrap_or(30 * n * n), &mut rng)?),
        Model::All => square_line("all", a.seed, i, &all_squares(n)?[i as usize]),
        Model::Trp => {
            let m = a.m.unwrap_or(0);
            let out = trp_run(n, m, &mut rng)?;
            json!({
                "model": "trp",
                "seed": a.seed,
                "replica": i,
                "n": n,
                "m": m,
                "bottom": out.is_bottom(),
                "steps_taken": out.steps_taken,
                "entries": out.result.map(|o| o.entries().iter().map(entry_to_json).collect::<Vec<_>>()),
            })
        }
        Model::Binomial => {
            let p = a.p.unwrap_or(0.0);
            let h = binomial_hypergraph(n, p, &mut rng)?;
            let cleaned = strip_conflicts(&h);
            json!({
                "model": "binomial",
                "seed": a.seed,
                "replica": i,
                "n": n,
                "p": p,
                "hyperedges": h.edges.len(),
                "edges": h.edges.iter().map(entry_to_json).collect::<Vec<_>>(),
                "conflict_free": cleaned.len(),
            })
        }
    })
}

pub fn run(a: GenArgs) -> Result<Status> {
    validate(&a)?;
    let count = if a.model == Model::All { all_squares(a.n)?.len() as u64 } else { a.count };
    let lines: Vec<serde_json::Value> = (0..count).into_par_iter().map(|i| replica(&a, i)).collect::<Result<_>>()?;
    let mut w = io::sink(&a.out.out)?;
    for line in lines {
        serde_json::to_writer(&mut w, &line)?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(Status::Ok)
}
