use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::config::{OutputFormat, SequenceMapEntry};
use crate::error::{Error, Result};
use crate::spcounts::{Family, TriangularCountTable};

#[derive(Serialize, Deserialize)]
struct JsonTable {
    family: Family,
    max_n: usize,
    rows: Vec<Vec<serde_json::Number>>,
}

fn parse_error(path: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        msg: msg.into(),
    }
}

fn number(v: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&v.to_string()).expect("integers are valid JSON numbers")
}

pub fn render(
    table: &TriangularCountTable,
    format: OutputFormat,
    layout: &SequenceMapEntry,
) -> Result<String> {
    match format {
        OutputFormat::Csv => Ok(render_csv(table)),
        OutputFormat::Json => render_json(table),
        OutputFormat::Bfile => Ok(render_bfile(table, layout)),
    }
}

/// Header `n,k,value`, then one line per entry in row-major order.
pub fn render_csv(table: &TriangularCountTable) -> String {
    let mut out = String::from("n,k,value\n");
    for (n, k, v) in table.entries() {
        writeln!(out, "{n},{k},{v}").unwrap();
    }
    out
}

/// `{"family": .., "max_n": .., "rows": [[..], ..]}` on one line.
pub fn render_json(table: &TriangularCountTable) -> Result<String> {
    let json = JsonTable {
        family: table.family,
        max_n: table.max_n(),
        rows: table
            .rows
            .iter()
            .map(|row| row.iter().map(number).collect())
            .collect(),
    };
    let mut s = serde_json::to_string(&json)?;
    s.push('\n');
    Ok(s)
}

/// `index value` lines following `layout`, behind a `#` header.
pub fn render_bfile(table: &TriangularCountTable, layout: &SequenceMapEntry) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# {} table, n <= {}, layout {}",
        table.family,
        table.max_n(),
        layout
    )
    .unwrap();
    for (index, n, k) in layout.positions(table.max_n()) {
        writeln!(out, "{index} {}", table.get(n, k)).unwrap();
    }
    out
}

pub fn parse_csv(text: &str, family: Family) -> Result<TriangularCountTable> {
    const SRC: &str = "<csv>";
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "n,k,value")) => {}
        _ => return Err(parse_error(SRC, 1, "expected header n,k,value")),
    }
    let mut cells: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let [n, k, v] = fields[..] else {
            return Err(parse_error(SRC, i + 1, "expected three fields"));
        };
        let bad = |what: &str| parse_error(SRC, i + 1, format!("bad {what}"));
        let n: usize = n.parse().map_err(|_| bad("n"))?;
        let k: usize = k.parse().map_err(|_| bad("k"))?;
        let v: BigInt = v.parse().map_err(|_| bad("value"))?;
        if k > n {
            return Err(parse_error(SRC, i + 1, "k exceeds n"));
        }
        cells.insert((n, k), v);
    }
    let max_n = cells
        .keys()
        .map(|&(n, _)| n)
        .max()
        .unwrap_or(family.first_n());
    Ok(TriangularCountTable::from_fn(family, max_n, |n, k| {
        cells.get(&(n, k)).cloned().unwrap_or_default()
    }))
}

pub fn parse_json(text: &str) -> Result<TriangularCountTable> {
    let json: JsonTable = serde_json::from_str(text)?;
    let rows = json
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    BigInt::from_str(&v.to_string())
                        .map_err(|_| Error::Config(format!("non-integer JSON value {v}")))
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<BigInt>>>>()?;
    let table = TriangularCountTable {
        family: json.family,
        first_n: json.family.first_n(),
        rows,
    };
    if table.rows.is_empty() || table.max_n() != json.max_n {
        return Err(Error::Config(format!(
            "JSON rows do not reach max_n {}",
            json.max_n
        )));
    }
    Ok(table)
}

/// Parses `index value` lines, skipping blanks and `#` comments. Indices must
/// be consecutive.
pub fn parse_bfile(text: &str, path: &str) -> Result<Vec<(i64, BigInt)>> {
    let mut out: Vec<(i64, BigInt)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [index, value] = fields[..] else {
            return Err(parse_error(path, i + 1, "expected `index value`"));
        };
        let index: i64 = index
            .parse()
            .map_err(|_| parse_error(path, i + 1, format!("bad index {index:?}")))?;
        let value: BigInt = value
            .parse()
            .map_err(|_| parse_error(path, i + 1, format!("bad value {value:?}")))?;
        if let Some((prev, _)) = out.last() {
            if index != prev + 1 {
                return Err(parse_error(
                    path,
                    i + 1,
                    format!("index {index} does not follow {prev}"),
                ));
            }
        }
        out.push((index, value));
    }
    Ok(out)
}

/// Rebuilds a table from b-file terms laid out by `layout`; entries the
/// layout skips come back as zero.
pub fn table_from_terms(
    terms: &[(i64, BigInt)],
    layout: &SequenceMapEntry,
) -> Result<TriangularCountTable> {
    let mut cells = BTreeMap::new();
    for (index, value) in terms {
        let (n, k) = layout.coordinates(*index).ok_or_else(|| {
            Error::Config(format!("index {index} precedes offset {}", layout.offset))
        })?;
        cells.insert((n, k), value.clone());
    }
    let family = layout.family;
    let max_n = cells
        .keys()
        .map(|&(n, _)| n)
        .max()
        .unwrap_or(family.first_n());
    Ok(TriangularCountTable::from_fn(family, max_n, |n, k| {
        cells.get(&(n, k)).cloned().unwrap_or_default()
    }))
}
