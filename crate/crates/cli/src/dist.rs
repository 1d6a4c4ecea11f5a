use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use latinlab_core::dist::{binomial_pmf, mu_star_pmf, tv_distance, Pmf};
use serde::Serialize;
use serde_json::json;

use crate::{io, OutArg, Status};

/// Accepted deviation of a pmf file's total mass from 1.
const MASS_TOL: f64 = 1e-9;

#[derive(Subcommand, Debug)]
pub enum DistCmd {
    /// Total variation distance between two pmf files.
    Tv {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Bin(n, 1/2).
    Binom {
        #[arg(long)]
        n: usize,
        /// Write CSV (value,mass) instead of JSON.
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Three Bin(n, 1/2) conditioned on the sum having parity f(n).
    Mustar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        out: OutArg,
    },
}

/// Reads `{"support": [...], "mass": [...]}` with arbitrary JSON support points.
fn read_pmf(path: &Path) -> Result<Pmf<String>> {
    let raw: Pmf<serde_json::Value> = serde_json::from_str(&io::read_text(path)?).with_context(|| format!("{}: not a pmf", path.display()))?;
    if raw.support.len() != raw.mass.len() {
        bail!("{}: support and mass lengths differ", path.display());
    }
    let mut map = BTreeMap::new();
    for (x, m) in raw.support.iter().zip(&raw.mass) {
        if !(m.is_finite() && *m >= 0.0) {
            bail!("{}: mass {m} is not a probability", path.display());
        }
        *map.entry(x.to_string()).or_insert(0.0) += m;
    }
    let pmf = Pmf::from_map(map);
    if (pmf.total() - 1.0).abs() > MASS_TOL {
        bail!("{}: masses sum to {}", path.display(), pmf.total());
    }
    Ok(pmf)
}

fn emit<P: Serialize + Ord + Clone>(pmf: &Pmf<P>, csv_out: bool, out: &OutArg) -> Result<()> {
    if !csv_out {
        return io::write_json(&out.out, pmf);
    }
    let mut w = csv::Writer::from_writer(io::sink(&out.out)?);
    w.write_record(["value", "mass"])?;
    for (x, m) in pmf.iter() {
        w.write_record([serde_json::to_string(x)?, m.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(cmd: DistCmd) -> Result<Status> {
    match cmd {
        DistCmd::Tv { p, q, out } => {
            let d = tv_distance(&read_pmf(&p)?, &read_pmf(&q)?);
            io::write_json(&out.out, &json!({"tv": d}))?;
        }
        DistCmd::Binom { n, csv, out } => emit(&binomial_pmf(n), csv, &out)?,
        DistCmd::Mustar { n, csv, out } => {
            if n == 0 {
                bail!("n must be at least 1");
            }
            emit(&mu_star_pmf(n)?, csv, &out)?
        }
    }
    Ok(Status::Ok)
}
