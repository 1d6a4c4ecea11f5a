use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use latinlab_core::configs::{expander_audit, exact_expander_check, PermissibleTuple, MAX_EXACT_EXPANDER_ORDER};
use latinlab_core::io::parse_any_square;
use latinlab_core::latin::{exact_uniform_sample, MAX_ENUMERATION_ORDER};
use latinlab_core::rng::substream;
use latinlab_core::sampler::chain_sample;
use latinlab_core::{PartialLatinSquare, Template};
use serde::Serialize;
use serde_json::json;

use crate::{io, OutArg, Status};

#[derive(Args, Debug)]
pub struct AuditArgs {
    /// Order of the sampled square (ignored with --in).
    #[arg(long)]
    pub n: Option<usize>,
    /// Square to audit; a full square is first intersected with a random template of density eps.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Template density (default eta / ln n with eta = 1 / ln ln n, clamped to (0, 1]).
    #[arg(long)]
    pub eps: Option<f64>,
    /// Size of R* (default ln^11 n, clamped to 1..=n).
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// Random permissible tuples to test.
    #[arg(long, default_value_t = 100)]
    pub tuples: usize,
    /// Also decide over all permissible tuples (n <= 8).
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Serialize)]
struct Resolved {
    n: usize,
    eta: Option<f64>,
    eps: f64,
    ell: usize,
    beta: f64,
}

fn resolve(n: usize, a: &AuditArgs) -> Result<Resolved> {
    let ln = (n as f64).ln();
    let eta = (ln.ln() > 0.0).then(|| 1.0 / ln.ln());
    let eps = match (a.eps, eta) {
        (Some(e), _) => e,
        (None, Some(eta)) => (eta / ln).min(1.0),
        (None, None) => 1.0,
    };
    if !(eps > 0.0 && eps <= 1.0) {
        bail!("eps = {eps} is outside (0, 1]");
    }
    let ell = a.ell.unwrap_or_else(|| (ln.powi(11).round() as usize).clamp(1, n));
    if ell == 0 || ell > n {
        bail!("ell = {ell} is outside 1..={n}");
    }
    if !(a.beta > 0.0 && a.beta <= 1.0) {
        bail!("beta = {} is outside (0, 1]", a.beta);
    }
    Ok(Resolved { n, eta: if a.eps.is_some() { None } else { eta }, eps, ell, beta: a.beta })
}

fn one_based(t: &PermissibleTuple) -> serde_json::Value {
    let f = |s: &BTreeSet<usize>| s.iter().map(|x| x + 1).collect::<Vec<_>>();
    json!({"r": f(&t.r), "r_star": f(&t.r_star), "c": f(&t.c), "c_star": f(&t.c_star), "s": f(&t.s), "s_star": f(&t.s_star)})
}

pub fn run(a: AuditArgs) -> Result<Status> {
    let mut rng = substream(a.seed, 0);
    let loaded = a.input.as_ref().map(|p| io::read_text(p).and_then(|t| Ok(parse_any_square(&t)?))).transpose()?;
    let n = match (&loaded, a.n) {
        (Some(p), _) => p.n(),
        (None, Some(n)) if n >= 1 => n,
        (None, _) => bail!("give --n or --in"),
    };
    let r = resolve(n, &a)?;
    let p: PartialLatinSquare = match loaded {
        Some(p) if !p.is_complete() => p,
        other => {
            let l = match other.and_then(|p| p.to_latin()) {
                Some(l) => l,
                None if n <= MAX_ENUMERATION_ORDER => exact_uniform_sample(n, &mut rng)?,
                None => chain_sample(n, 30 * n * n, &mut rng)?,
            };
            Template::sample(n, r.eps, &mut rng)?.intersect(&l)
        }
    };
    let report = expander_audit(&p, r.ell, r.beta, a.tuples, &mut rng)?;
    let exact = if a.exact {
        if n > MAX_EXACT_EXPANDER_ORDER {
            bail!("--exact needs n <= {MAX_EXACT_EXPANDER_ORDER}");
        }
        Some(match exact_expander_check(&p, r.ell, r.beta)? {
            None => json!({"expander": true}),
            Some(t) => json!({"expander": false, "witness": one_based(&t)}),
        })
    } else {
        None
    };
    let out = json!({
        "header": r,
        "seed": a.seed,
        "entries": p.len(),
        "tuples_tested": report.tuples_tested,
        "failures": report.failures,
        "intercalates": report.intercalates,
        "stable": report.stable,
        "stable_found_fraction": report.stable_found_fraction,
        "witness_tuples": report.witness_tuples.iter().map(one_based).collect::<Vec<_>>(),
        "exact": exact,
    });
    io::write_json(&a.out.out, &out)?;
    Ok(Status::Ok)
}
