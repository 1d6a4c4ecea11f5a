use std::collections::BTreeMap;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use latinlab_core::f2::{f2_rank_kernel, reduce_echelon, BitMatrix, IncidenceMatrixF2};
use latinlab_core::fixtures::{complete_key_family, planted_incidence, verify_figures, FigureCheck};
use latinlab_core::intercalate::{stable_intercalates, switch_intercalate, verify_canonicity};
use latinlab_core::latin::{enumerate_all, exact_uniform_sample, f_of_n, Entry, MAX_ENUMERATION_ORDER};
use latinlab_core::rerandomize::{exact_component_audit, MAX_AUDIT_ORDER};
use latinlab_core::rng::substream;
use latinlab_core::sampler::{chain_sample, trp_log_probability, trp_outcome_law, trp_probability_exact, trp_run};
use latinlab_core::{LatinSquare, Template};
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::{io, OutArg, Status};

/// Normalization and log-probability tolerance of the trp-prob suite.
const TRP_TOL: f64 = 1e-12;
/// Smallest accepted chi-square p-value in the trp-prob simulation.
const CHI_SQUARE_P_MIN: f64 = 1e-4;
/// Outcomes with a smaller expected count are pooled.
const MIN_EXPECTED: f64 = 5.0;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// N_row + N_col + N_sym = f(n) mod 2 (exhaustive for n <= 5).
    Jz,
    /// Switching a stable intercalate keeps the stable pair structure.
    Canonicity,
    /// Exact component audit of the rerandomization step.
    Uniformity,
    /// GF(2) rank and left kernel on random and planted matrices.
    Kernel,
    /// Exact outcome law of the triangle removal process.
    TrpProb,
    /// The switching example and the four basic patterns.
    Figures,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Order (jz: 4, canonicity: random in 4..=8, uniformity: 4, trp-prob: 2).
    #[arg(long)]
    pub n: Option<usize>,
    /// Steps of the triangle removal process (trp-prob: every m in 1..=4 for n = 2, else 1..=2).
    #[arg(long)]
    pub m: Option<usize>,
    /// Random instances (jz for n > 5: 200, canonicity: 1000, uniformity: 20 templates, kernel: 100 matrices).
    #[arg(long)]
    pub instances: Option<u64>,
    /// Simulated runs per m in trp-prob.
    #[arg(long, default_value_t = 20_000)]
    pub runs: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArg,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> FigureCheck {
    FigureCheck { name: name.into(), passed, detail: detail.into() }
}

fn random_square(n: usize, rng: &mut impl Rng) -> Result<LatinSquare> {
    Ok(if n <= MAX_ENUMERATION_ORDER { exact_uniform_sample(n, rng)? } else { chain_sample(n, 30 * n * n, rng)? })
}

fn jz(a: &VerifyArgs) -> Result<Vec<FigureCheck>> {
    let n = a.n.unwrap_or(4);
    if n == 0 {
        bail!("n must be at least 1");
    }
    let f = f_of_n(n) as usize;
    let (checked, bad) = if n <= MAX_ENUMERATION_ORDER {
        let mut checked = 0usize;
        let mut bad = 0usize;
        for l in enumerate_all(n)? {
            checked += 1;
            bad += (l.parity_counts().total() % 2 != f) as usize;
        }
        (checked, bad)
    } else {
        let k = a.instances.unwrap_or(200);
        let bad: Vec<bool> = (0..k)
            .into_par_iter()
            .map(|i| Ok(random_square(n, &mut substream(a.seed, i))?.parity_counts().total() % 2 != f))
            .collect::<Result<_>>()?;
        (k as usize, bad.iter().filter(|&&b| b).count())
    };
    let mut out = vec![check("identity", bad == 0, format!("{checked} squares of order {n}, {bad} exceptions, f(n) = {f}"))];
    if n <= MAX_ENUMERATION_ORDER {
        let expected = [1usize, 2, 12, 576, 161_280][n - 1];
        out.push(check("square count", checked == expected, format!("{checked} squares, expected {expected}")));
    }
    Ok(out)
}

fn canonicity(a: &VerifyArgs) -> Result<Vec<FigureCheck>> {
    let k = a.instances.unwrap_or(1000);
    if a.n.is_some_and(|n| n < 2) {
        bail!("n must be at least 2");
    }
    let per: Vec<(usize, usize, usize)> = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(a.seed, i);
            let n = a.n.unwrap_or_else(|| rng.gen_range(4..=8));
            let l = random_square(n, &mut rng)?;
            let p = Template::sample(n, rng.gen_range(0.3..1.0), &mut rng)?.intersect(&l);
            let (mut switches, mut bad, mut not_involution) = (0, 0, 0);
            for s in stable_intercalates(&p) {
                switches += 1;
                bad += !verify_canonicity(&p, &s)? as usize;
                let back = switch_intercalate(&switch_intercalate(&p, &s)?, &s.switched())?;
                not_involution += (back != p) as usize;
            }
            Ok((switches, bad, not_involution))
        })
        .collect::<Result<_>>()?;
    let switches: usize = per.iter().map(|x| x.0).sum();
    let bad: usize = per.iter().map(|x| x.1).sum();
    let back: usize = per.iter().map(|x| x.2).sum();
    Ok(vec![
        check("sigma-set preserved", bad == 0 && switches > 0, format!("{k} instances, {switches} stable switches, {bad} violations")),
        check("switching twice restores", back == 0, format!("{back} failures")),
    ])
}

fn audit_template(n: usize, i: u64, rng: &mut impl Rng) -> Result<Template> {
    let random = Template::sample(n, rng.gen_range(0.3..1.0), rng)?;
    if i.is_multiple_of(2) || n < 4 {
        return Ok(random);
    }
    let blocks = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)];
    let extra: Vec<(usize, usize)> = random.pairs().filter(|_| rng.gen_bool(0.15)).collect();
    Ok(Template::from_pairs(n, blocks.into_iter().chain(extra))?)
}

fn uniformity(a: &VerifyArgs) -> Result<Vec<FigureCheck>> {
    let n = a.n.unwrap_or(4);
    if n == 0 || n > MAX_AUDIT_ORDER {
        bail!("uniformity needs 1 <= n <= {MAX_AUDIT_ORDER}");
    }
    let k = a.instances.unwrap_or(20);
    let mut out = Vec::new();
    for i in 0..k {
        let t = audit_template(n, i, &mut substream(a.seed, i))?;
        let audit = exact_component_audit(n, &t)?;
        out.push(check(
            format!("template {i}"),
            audit.passed(),
            format!(
                "{} cells, {} components, max |S| = {}, stationary = {}, violations: {:?}",
                t.len(),
                audit.components,
                audit.max_stable,
                audit.stationary,
                audit.violations
            ),
        ));
    }
    Ok(out)
}

fn planted_check(name: String, m: &IncidenceMatrixF2) -> FigureCheck {
    let kb = f2_rank_kernel(&m.matrix);
    let lines = m.rows.len() + m.cols.len() + m.syms.len();
    let ok = kb.rank + 3 == lines && m.kernel_is_block_constant();
    check(name, ok, format!("{} intercalates, rank {} of {lines} lines, kernel dimension {}", m.matrix.cols(), kb.rank, kb.basis.len()))
}

fn kernel(a: &VerifyArgs) -> Result<Vec<FigureCheck>> {
    let k = a.instances.unwrap_or(100);
    let bad: Vec<Option<String>> = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(a.seed, i);
            let rows = rng.gen_range(1..=40);
            let cols = rng.gen_range(0..=40);
            let density = rng.gen_range(0.05..0.6);
            let dense: Vec<Vec<u8>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_bool(density) as u8).collect()).collect();
            let m = BitMatrix::from_rows(&dense).expect("rectangular");
            let kb = f2_rank_kernel(&m);
            let mut basis = kb.basis.clone();
            reduce_echelon(&mut basis);
            let transposed: Vec<Vec<u8>> = (0..cols).map(|j| (0..rows).map(|i| dense[i][j]).collect()).collect();
            let rank_t = if cols == 0 { 0 } else { f2_rank_kernel(&BitMatrix::from_rows(&transposed).expect("rectangular")).rank };
            if kb.rank + kb.basis.len() != rows {
                Some(format!("matrix {i}: rank {} + nullity {} != {rows}", kb.rank, kb.basis.len()))
            } else if kb.basis.iter().any(|x| m.left_mul(x).contains(&1)) {
                Some(format!("matrix {i}: basis vector outside the kernel"))
            } else if basis.len() != kb.basis.len() {
                Some(format!("matrix {i}: dependent basis"))
            } else if rank_t != kb.rank {
                Some(format!("matrix {i}: row rank {} != column rank {rank_t}", kb.rank))
            } else {
                None
            }
        })
        .collect();
    let failures: Vec<String> = bad.into_iter().flatten().collect();
    let mut out = vec![check("random matrices", failures.is_empty(), format!("{k} matrices, failures: {failures:?}"))];
    out.push(planted_check("planted n = 12 square".into(), &planted_incidence()));
    for size in 3..=5 {
        out.push(planted_check(format!("all pairs on {size} lines"), &complete_key_family(size)));
    }
    Ok(out)
}

fn chi_square_p(observed: &[u64], expected: &[f64]) -> f64 {
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut pooled = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        if e < MIN_EXPECTED {
            pooled.0 += o as f64;
            pooled.1 += e;
        } else {
            cells.push((o as f64, e));
        }
    }
    if pooled.1 > 0.0 {
        cells.push(pooled);
    }
    if cells.len() < 2 {
        return 1.0;
    }
    let stat: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    1.0 - ChiSquared::new((cells.len() - 1) as f64).expect("positive degrees of freedom").cdf(stat)
}

fn trp_prob(a: &VerifyArgs) -> Result<Vec<FigureCheck>> {
    let n = a.n.unwrap_or(2);
    if n == 0 {
        bail!("n must be at least 1");
    }
    let ms: Vec<usize> = match a.m {
        Some(m) => vec![m],
        None if n <= 2 => (1..=n * n).collect(),
        None => vec![1, 2],
    };
    let mut out = Vec::new();
    for m in ms {
        let (leaves, bottom) = trp_outcome_law(n, m)?;
        let exact_total = leaves.iter().fold(bottom.clone(), |acc, (_, p)| acc + p);
        let float_total: f64 = leaves.iter().map(|(_, p)| p.to_f64().unwrap_or(f64::NAN)).sum::<f64>() + bottom.to_f64().unwrap_or(f64::NAN);
        let sum_err = (float_total - 1.0).abs();
        out.push(check(
            format!("m = {m}: normalization"),
            exact_total.is_one() && sum_err <= TRP_TOL,
            format!("{} outcomes, bottom mass {bottom}, exact total {exact_total}, float error {sum_err:.1e}", leaves.len()),
        ));
        let mut worst = 0.0f64;
        let mut mismatched = 0usize;
        for (o, p) in &leaves {
            mismatched += (trp_probability_exact(o)? != *p) as usize;
            worst = worst.max((trp_log_probability(o)? - p.to_f64().unwrap_or(f64::NAN).ln()).abs());
        }
        out.push(check(
            format!("m = {m}: outcome probabilities"),
            mismatched == 0 && worst <= TRP_TOL,
            format!("{mismatched} exact mismatches, log-probability error {worst:.1e}"),
        ));
        if a.runs > 0 {
            let index: BTreeMap<Vec<Entry>, usize> = leaves.iter().enumerate().map(|(i, (o, _))| (o.entries().to_vec(), i)).collect();
            let counts: Vec<Option<usize>> = (0..a.runs)
                .into_par_iter()
                .map(|i| {
                    let run = trp_run(n, m, &mut substream(a.seed.wrapping_add(m as u64), i))?;
                    Ok(run.result.map(|o| index[o.entries()]))
                })
                .collect::<Result<_>>()?;
            let mut observed = vec![0u64; leaves.len() + 1];
            for c in counts {
                observed[c.unwrap_or(leaves.len())] += 1;
            }
            let mut expected: Vec<f64> = leaves.iter().map(|(_, p)| p.to_f64().unwrap_or(0.0) * a.runs as f64).collect();
            expected.push(bottom.to_f64().unwrap_or(0.0) * a.runs as f64);
            let p = chi_square_p(&observed, &expected);
            out.push(check(format!("m = {m}: simulation"), p > CHI_SQUARE_P_MIN, format!("{} runs, chi-square p = {p:.4}", a.runs)));
        }
    }
    Ok(out)
}

pub fn run(a: VerifyArgs) -> Result<Status> {
    let checks = match a.suite {
        Suite::Jz => jz(&a)?,
        Suite::Canonicity => canonicity(&a)?,
        Suite::Uniformity => uniformity(&a)?,
        Suite::Kernel => kernel(&a)?,
        Suite::TrpProb => trp_prob(&a)?,
        Suite::Figures => verify_figures(),
    };
    let passed = checks.iter().all(|c| c.passed);
    let report = json!({
        "suite": a.suite,
        "passed": passed,
        "seed": a.seed,
        "params": {"n": a.n, "m": a.m, "instances": a.instances, "runs": a.runs},
        "checks": checks,
    });
    io::write_json(&a.out.out, &report)?;
    Ok(if passed { Status::Ok } else { Status::Failed })
}
