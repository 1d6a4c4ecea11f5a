use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use latinlab_core::dist::{binomial_pmf, mu_star_pmf, parity_mod2_counts, tv_distance, Pmf};
use latinlab_core::latin::f_of_n;
use latinlab_core::LatinSquare;
use serde::Serialize;

use crate::{io, OutArg, Status};

#[derive(Args, Debug)]
pub struct StatsArgs {
    /// JSON-lines file of full squares, as written by `gen`.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub out: OutArg,
    /// Also write the mod-2 pattern table as JSON.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Serialize)]
struct Row {
    seed: u64,
    n: usize,
    n_row: usize,
    n_col: usize,
    n_sym: usize,
}

struct Sample {
    line: usize,
    seed: u64,
    square: LatinSquare,
    recorded: Option<[usize; 3]>,
}

fn parse(line: usize, v: serde_json::Value) -> Result<Sample> {
    if v.get("grid").is_none() {
        bail!("line {line}: not a full square (partial squares and bottom outcomes are not accepted)");
    }
    let seed = v.get("seed").and_then(|s| s.as_u64()).unwrap_or(0);
    let recorded = match v.get("parity") {
        Some(p) => Some(serde_json::from_value::<[usize; 3]>(p.clone()).with_context(|| format!("line {line}: bad parity field"))?),
        None => None,
    };
    let square: LatinSquare = serde_json::from_value(v).with_context(|| format!("line {line}"))?;
    Ok(Sample { line, seed, square, recorded })
}

pub fn run(a: StatsArgs) -> Result<Status> {
    let samples = io::json_lines(&a.input)?.into_iter().map(|(i, v)| parse(i, v)).collect::<Result<Vec<_>>>()?;
    if samples.is_empty() {
        bail!("{} holds no samples", a.input.display());
    }
    let n = samples[0].square.n();
    if let Some(s) = samples.iter().find(|s| s.square.n() != n) {
        bail!("line {}: order {} differs from {n}", s.line, s.square.n());
    }
    let f = f_of_n(n) as usize;
    let mut triples = Vec::with_capacity(samples.len());
    for s in &samples {
        let p = s.square.parity_counts();
        let got = p.as_array();
        let breach = match s.recorded {
            Some(r) if r != got => Some(format!("recorded parities {r:?} differ from {got:?}")),
            Some(r) if r.iter().sum::<usize>() % 2 != f => Some(format!("recorded parities {r:?} have sum parity != f({n}) = {f}")),
            _ if p.total() % 2 != f => Some(format!("parities {got:?} have sum parity != f({n}) = {f}")),
            _ => None,
        };
        if let Some(msg) = breach {
            eprintln!("invariant breach: line {}: {msg}", s.line);
            return Ok(Status::Failed);
        }
        triples.push(p);
    }
    let nrow = Pmf::empirical(triples.iter().map(|p| p.row as u64));
    let triple = Pmf::empirical(triples.iter().map(|p| [p.row as u64, p.col as u64, p.sym as u64]));
    let tv_row = tv_distance(&nrow, &binomial_pmf(n));
    let tv_triple = tv_distance(&triple, &mu_star_pmf(n)?);

    let mut w = csv::Writer::from_writer(io::sink(&a.out.out)?);
    for (s, p) in samples.iter().zip(&triples) {
        w.serialize(Row { seed: s.seed, n, n_row: p.row, n_col: p.col, n_sym: p.sym })?;
    }
    let mut inner = w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
    writeln!(inner, "# tv_nrow_binomial={tv_row},tv_triple_mustar={tv_triple}")?;
    inner.flush()?;
    if let Some(path) = &a.table {
        io::write_json(&Some(path.clone()), &parity_mod2_counts(&triples, n)?)?;
    }
    Ok(Status::Ok)
}
