use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use latinlab_core::configs::{bad_configurations, basic_threatened_pairs, covered_entry_count, threat_counts, SplitFilter};
use latinlab_core::intercalate::analyze;
use latinlab_core::io::parse_any_square;
use latinlab_core::Entry;
use serde_json::json;

use crate::{io, OutArg, Status};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    /// All, isolated and stable intercalates.
    Intercalates,
    /// Threatened and basic threatened pairs in the rows R*.
    Threats,
    /// Entries lying in some bad configuration, and entries of R* covered by split ones.
    BadEntries,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(value_enum)]
    pub what: What,
    /// A square as one JSON document or as JSON lines.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Starred rows, 1-based and comma separated.
    #[arg(long, default_value = "1")]
    pub r_star: String,
    #[command(flatten)]
    pub out: OutArg,
}

pub fn run(a: CountArgs) -> Result<Status> {
    let docs = io::json_documents(&a.input)?;
    let mut lines = Vec::with_capacity(docs.len());
    for (line, v) in docs {
        let p = parse_any_square(&v.to_string()).with_context(|| format!("{}:{line}", a.input.display()))?;
        let record = match a.what {
            What::Intercalates => {
                let st = analyze(&p, Default::default());
                json!({"n": p.n(), "intercalates": st.all.len(), "isolated": st.isolated.len(), "stable": st.stable.len()})
            }
            What::Threats => {
                let r_star = io::parse_lines(&a.r_star, p.n())?;
                let t = threat_counts(&p, &r_star);
                json!({"n": p.n(), "r_star": one_based(&r_star), "threatened_pairs": t.pairs, "witness_copies": t.copies,
                       "basic_pairs": basic_threatened_pairs(&p, &r_star).len()})
            }
            What::BadEntries => {
                let r_star = io::parse_lines(&a.r_star, p.n())?;
                let configs = bad_configurations(&p);
                let entries: BTreeSet<Entry> = configs.iter().flat_map(|c| c.entries.iter().copied()).collect();
                json!({"n": p.n(), "r_star": one_based(&r_star), "bad_configurations": configs.len(), "bad_entries": entries.len(),
                       "covered_entries": covered_entry_count(&p, &SplitFilter::Rows(r_star))})
            }
        };
        lines.push(record);
    }
    let mut w = io::sink(&a.out.out)?;
    for r in lines {
        serde_json::to_writer(&mut w, &r)?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(Status::Ok)
}

fn one_based(s: &BTreeSet<usize>) -> Vec<usize> {
    s.iter().map(|x| x + 1).collect()
}
