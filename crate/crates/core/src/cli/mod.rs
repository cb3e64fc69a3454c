//! Command front end: table rendering, oracle comparison and OEIS checks.

pub mod config;
pub mod oeis;
pub mod render;

use std::fmt;

use num_bigint::BigInt;

pub use config::{OutputFormat, RunConfig, SequenceMapEntry};
pub use oeis::{run_oeis_compare, BFileSource, OeisReport};

use crate::error::{Error, Result};
use crate::oracle::{Catalog, HARD_CAP};
use crate::spcounts::{build_table, Family, TriangularCountTable};

/// Renders `family` up to `max_n`; `max_n` may not exceed the truncation order.
pub fn run_table(
    cfg: &RunConfig,
    family: Family,
    max_n: usize,
    format: OutputFormat,
) -> Result<String> {
    if max_n > cfg.truncation_order {
        return Err(Error::Config(format!(
            "max_n {max_n} exceeds truncation order {}",
            cfg.truncation_order
        )));
    }
    let table = build_table(family, max_n)?;
    render::render(&table, format, &cfg.layout_for(family))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDiff {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub oracle: BigInt,
    pub formula: BigInt,
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub catalog: Catalog,
    pub tables: Vec<TriangularCountTable>,
    /// `None` unless a comparison was requested.
    pub diffs: Option<Vec<TableDiff>>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.diffs.as_ref().is_none_or(Vec::is_empty)
    }
}

pub const ORACLE_FAMILIES: [Family; 4] = [Family::E, Family::C, Family::A, Family::S];

pub fn run_oracle(max_n: usize, compare: bool) -> Result<OracleReport> {
    if max_n > HARD_CAP {
        return Err(Error::OracleCap {
            requested: max_n,
            cap: HARD_CAP,
        });
    }
    if max_n == 0 {
        return Err(Error::Config("oracle max_n must be at least 1".into()));
    }
    let catalog = Catalog::build(max_n)?;
    let tables = ORACLE_FAMILIES
        .iter()
        .map(|&f| catalog.table(f))
        .collect::<Result<Vec<_>>>()?;
    let diffs = if compare {
        let mut diffs = Vec::new();
        for oracle in &tables {
            let formula = build_table(oracle.family, max_n)?;
            for (n, k, v) in oracle.entries() {
                let f = formula.get(n, k);
                if &f != v {
                    diffs.push(TableDiff {
                        family: oracle.family,
                        n,
                        k,
                        oracle: v.clone(),
                        formula: f,
                    });
                }
            }
        }
        Some(diffs)
    } else {
        None
    };
    Ok(OracleReport {
        catalog,
        tables,
        diffs,
    })
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for table in &self.tables {
            for (i, row) in table.rows.iter().enumerate() {
                let values: Vec<String> = row.iter().map(BigInt::to_string).collect();
                writeln!(
                    f,
                    "{} n={}: {}",
                    table.family,
                    table.first_n + i,
                    values.join(" ")
                )?;
            }
        }
        match &self.diffs {
            None => Ok(()),
            Some(diffs) => {
                for d in diffs {
                    writeln!(
                        f,
                        "diff {} ({}, {}): oracle {}, formula {}",
                        d.family, d.n, d.k, d.oracle, d.formula
                    )?;
                }
                write!(
                    f,
                    "compare: {} diffs, {}",
                    diffs.len(),
                    if diffs.is_empty() { "PASS" } else { "FAIL" }
                )
            }
        }
    }
}
