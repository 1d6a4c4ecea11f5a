use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

pub fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Non-blank lines of a JSON-lines file, with 1-based line numbers.
pub fn json_lines(path: &Path) -> Result<Vec<(usize, serde_json::Value)>> {
    let f = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v = serde_json::from_str(&line).with_context(|| format!("{}:{}: not JSON", path.display(), i + 1))?;
        out.push((i + 1, v));
    }
    Ok(out)
}

/// A file holding one JSON document, or several as JSON lines.
pub fn json_documents(path: &Path) -> Result<Vec<(usize, serde_json::Value)>> {
    let text = read_text(path)?;
    if let Ok(v) = serde_json::from_str::<serde_json::Value>(&text) {
        return Ok(vec![(1, v)]);
    }
    json_lines(path)
}

/// Comma-separated 1-based line indices, returned 0-based.
pub fn parse_lines(text: &str, n: usize) -> Result<std::collections::BTreeSet<usize>> {
    let mut out = std::collections::BTreeSet::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let i: usize = part.parse().with_context(|| format!("{part:?} is not a line index"))?;
        if i == 0 || i > n {
            anyhow::bail!("line {i} is outside 1..={n}");
        }
        out.insert(i - 1);
    }
    Ok(out)
}
