//! JSON forms of the core types. Indices and symbols are 1-based.
//!
//! * square: `{"n": 3, "grid": [[1,2,3],[2,3,1],[3,1,2]]}`
//! * partial square: `{"n": 3, "entries": [[1,1,1],[2,3,1]]}`
//! * ordered partial square: same as a partial square, entries in order
//! * template: `{"n": 3, "pairs": [[1,1],[2,2]]}`
//! * intercalate: `{"rows": [1,2], "cols": [1,3], "syms": [a,b]}` with `a`
//!   at (first row, first column)

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intercalate::{Intercalate, SigmaKey};
use crate::latin::{validate_square, Entry, LatinSquare, OrderedPartialLatinSquare, PartialLatinSquare, Template};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareJson {
    pub n: usize,
    pub grid: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntriesJson {
    pub n: usize,
    pub entries: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateJson {
    pub n: usize,
    pub pairs: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntercalateJson {
    pub rows: [usize; 2],
    pub cols: [usize; 2],
    pub syms: [usize; 2],
}

pub fn entry_to_json(e: &Entry) -> [usize; 3] {
    [e.row + 1, e.col + 1, e.sym + 1]
}

pub fn entry_from_json(n: usize, t: [usize; 3]) -> Result<Entry> {
    if t.iter().any(|&x| x == 0 || x > n) {
        return Err(Error::Parse(format!("entry {t:?} is outside 1..={n}")));
    }
    Ok(Entry::one_based(t[0], t[1], t[2]))
}

impl From<&LatinSquare> for SquareJson {
    fn from(l: &LatinSquare) -> Self {
        SquareJson { n: l.n(), grid: l.rows().into_iter().map(|r| r.into_iter().map(|s| s + 1).collect()).collect() }
    }
}

impl TryFrom<SquareJson> for LatinSquare {
    type Error = Error;
    fn try_from(j: SquareJson) -> Result<Self> {
        if j.grid.len() != j.n {
            return Err(Error::BadOrder(j.grid.len()));
        }
        validate_square(&j.grid)
    }
}

impl From<&PartialLatinSquare> for EntriesJson {
    fn from(p: &PartialLatinSquare) -> Self {
        EntriesJson { n: p.n(), entries: p.entries().map(|e| entry_to_json(&e)).collect() }
    }
}

impl TryFrom<EntriesJson> for PartialLatinSquare {
    type Error = Error;
    fn try_from(j: EntriesJson) -> Result<Self> {
        let entries = j.entries.iter().map(|&t| entry_from_json(j.n, t)).collect::<Result<Vec<_>>>()?;
        PartialLatinSquare::from_entries(j.n, entries)
    }
}

impl From<&OrderedPartialLatinSquare> for EntriesJson {
    fn from(p: &OrderedPartialLatinSquare) -> Self {
        EntriesJson { n: p.n(), entries: p.entries().iter().map(entry_to_json).collect() }
    }
}

impl TryFrom<EntriesJson> for OrderedPartialLatinSquare {
    type Error = Error;
    fn try_from(j: EntriesJson) -> Result<Self> {
        let entries = j.entries.iter().map(|&t| entry_from_json(j.n, t)).collect::<Result<Vec<_>>>()?;
        OrderedPartialLatinSquare::new(j.n, entries)
    }
}

impl From<&Template> for TemplateJson {
    fn from(t: &Template) -> Self {
        TemplateJson { n: t.n(), pairs: t.pairs().map(|(r, c)| [r + 1, c + 1]).collect() }
    }
}

impl TryFrom<TemplateJson> for Template {
    type Error = Error;
    fn try_from(j: TemplateJson) -> Result<Self> {
        if j.pairs.iter().flatten().any(|&x| x == 0) {
            return Err(Error::Parse("template indices are 1-based".into()));
        }
        Template::from_pairs(j.n, j.pairs.iter().map(|p| (p[0] - 1, p[1] - 1)))
    }
}

impl From<&Intercalate> for IntercalateJson {
    fn from(a: &Intercalate) -> Self {
        IntercalateJson { rows: a.rows.map(|x| x + 1), cols: a.cols.map(|x| x + 1), syms: [a.a + 1, a.b + 1] }
    }
}

impl From<&SigmaKey> for IntercalateJson {
    fn from(k: &SigmaKey) -> Self {
        IntercalateJson { rows: k.rows.map(|x| x + 1), cols: k.cols.map(|x| x + 1), syms: k.syms.map(|x| x + 1) }
    }
}

macro_rules! json_via {
    ($ty:ty, $repr:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                <$repr>::from(self).serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                <$ty>::try_from(<$repr>::deserialize(d)?).map_err(D::Error::custom)
            }
        }
    };
}

json_via!(LatinSquare, SquareJson);
json_via!(PartialLatinSquare, EntriesJson);
json_via!(OrderedPartialLatinSquare, EntriesJson);
json_via!(Template, TemplateJson);

impl Serialize for Intercalate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IntercalateJson::from(self).serialize(s)
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        entry_to_json(self).serialize(s)
    }
}

/// Reads a complete or partial square from JSON.
pub fn parse_any_square(text: &str) -> Result<PartialLatinSquare> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if v.get("grid").is_some() {
        let l: LatinSquare = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(l.to_partial())
    } else {
        serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
    }
}
