use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::powerseries::DEFAULT_ORDER;
use crate::spcounts::Family;

pub const FIXTURES_ENV: &str = "SPM_FIXTURES";
pub const SEQUENCE_MAP_FILE: &str = "sequences.toml";
pub const DEFAULT_COMPARE_MAX_N: usize = 30;

/// Built-in layout guesses; a `sequences.toml` in the fixtures directory
/// replaces them. Either way a layout is only trusted after it agrees with
/// the oracle on small rows.
const DEFAULT_SEQUENCE_MAP: &str = r#"
[[sequence]]
id = "A140945"
family = "C"
offset = 1
row_offset = 1

[[sequence]]
id = "A361355"
family = "E"
offset = 1
row_offset = 1

[[sequence]]
id = "A359985"
family = "A"
offset = 0
row_offset = 0

[[sequence]]
id = "A361353"
family = "S"
offset = 0
row_offset = 0
"#;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Bfile,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "bfile" => Ok(Self::Bfile),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReadOrder {
    #[default]
    #[serde(rename = "by-rows")]
    ByRows,
}

/// How a flattened OEIS triangle maps onto a count table.
///
/// Term number `offset` is entry `(row_offset, col_offset)`; row `n` runs over
/// `k = col_offset ..= n - col_trim`, rows are read in increasing `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceMapEntry {
    pub id: String,
    pub family: Family,
    #[serde(default)]
    pub offset: i64,
    pub row_offset: usize,
    #[serde(default)]
    pub col_offset: usize,
    #[serde(default)]
    pub col_trim: usize,
    #[serde(default)]
    pub read_order: ReadOrder,
}

impl SequenceMapEntry {
    /// Every entry of every row from the family's first row, indexed from 0.
    pub fn natural(family: Family) -> Self {
        Self {
            id: format!("{family}-natural"),
            family,
            offset: 0,
            row_offset: family.first_n(),
            col_offset: 0,
            col_trim: 0,
            read_order: ReadOrder::ByRows,
        }
    }

    pub fn row_len(&self, n: usize) -> usize {
        (n + 1)
            .saturating_sub(self.col_trim)
            .saturating_sub(self.col_offset)
    }

    /// Table coordinates `(n, k)` of term `index`.
    pub fn coordinates(&self, index: i64) -> Option<(usize, usize)> {
        let mut pos = usize::try_from(index - self.offset).ok()?;
        let mut n = self.row_offset;
        loop {
            let len = self.row_len(n);
            if pos < len {
                return Some((n, self.col_offset + pos));
            }
            pos -= len;
            n += 1;
        }
    }

    /// `(index, n, k)` for all terms in rows up to `max_n`.
    pub fn positions(&self, max_n: usize) -> Vec<(i64, usize, usize)> {
        let mut index = self.offset;
        let mut out = Vec::new();
        for n in self.row_offset..=max_n {
            for j in 0..self.row_len(n) {
                out.push((index, n, self.col_offset + j));
                index += 1;
            }
        }
        out
    }
}

impl fmt::Display for SequenceMapEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} (offset {}, row_offset {}, col_offset {}, col_trim {})",
            self.id, self.family, self.offset, self.row_offset, self.col_offset, self.col_trim
        )
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceMapFile {
    #[serde(default)]
    sequence: Vec<SequenceMapEntry>,
}

pub fn parse_sequence_map(text: &str) -> Result<Vec<SequenceMapEntry>> {
    let file: SequenceMapFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    Ok(file.sequence)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub truncation_order: usize,
    pub oracle_max_n: usize,
    pub output_format: OutputFormat,
    pub fixtures_dir: PathBuf,
    pub sequence_map: Vec<SequenceMapEntry>,
    pub compare_max_n: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            truncation_order: DEFAULT_ORDER,
            oracle_max_n: crate::oracle::DEFAULT_MAX_N,
            output_format: OutputFormat::Csv,
            fixtures_dir: PathBuf::from("fixtures"),
            sequence_map: parse_sequence_map(DEFAULT_SEQUENCE_MAP).expect("built-in map parses"),
            compare_max_n: DEFAULT_COMPARE_MAX_N,
        }
    }
}

impl RunConfig {
    /// Defaults, with `fixtures_dir` taken from `SPM_FIXTURES` when set and
    /// the sequence map read from `fixtures_dir/sequences.toml` when present.
    pub fn from_env() -> Result<Self> {
        let mut cfg = Self::default();
        if let Some(dir) = std::env::var_os(FIXTURES_ENV) {
            cfg.fixtures_dir = PathBuf::from(dir);
        }
        cfg.load_sequence_map(&cfg.fixtures_dir.join(SEQUENCE_MAP_FILE))?;
        Ok(cfg)
    }

    fn load_sequence_map(&mut self, path: &Path) -> Result<()> {
        if path.is_file() {
            let text = std::fs::read_to_string(path)?;
            self.sequence_map = parse_sequence_map(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncation_order < self.oracle_max_n {
            return Err(Error::Config(format!(
                "truncation_order {} is below oracle_max_n {}",
                self.truncation_order, self.oracle_max_n
            )));
        }
        Ok(())
    }

    pub fn sequence(&self, id: &str) -> Result<&SequenceMapEntry> {
        self.sequence_map
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownSequence(id.to_string()))
    }

    /// Layout used for b-file output of `family`.
    pub fn layout_for(&self, family: Family) -> SequenceMapEntry {
        self.sequence_map
            .iter()
            .find(|e| e.family == family)
            .cloned()
            .unwrap_or_else(|| SequenceMapEntry::natural(family))
    }

    /// `fixtures_dir/bNNNNNN.txt` for an id `ANNNNNN`.
    pub fn bfile_path(&self, id: &str) -> PathBuf {
        self.fixtures_dir
            .join(format!("b{}.txt", id.trim_start_matches(['A', 'a'])))
    }
}
