use std::fmt;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;

use super::config::{RunConfig, SequenceMapEntry};
use super::render::parse_bfile;
use crate::error::{Error, Result};
use crate::oracle::Catalog;
use crate::spcounts::{build_table, Family, TriangularCountTable};

/// Rows at or below this size are checked against the oracle before any
/// comparison with the formula tables.
pub const VALIDATION_MAX_N: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MappingCheck {
    /// `checked` terms with `n <= 4` all agree with the oracle.
    Valid {
        checked: usize,
    },
    /// No term maps into the oracle range, so nothing vouches for the layout.
    NoOverlap,
    Invalid(Mismatch),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub index: i64,
    pub n: usize,
    pub k: usize,
    pub expected: BigInt,
    pub found: BigInt,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "index {} -> ({}, {}): b-file {}, expected {}",
            self.index, self.n, self.k, self.found, self.expected
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OeisReport {
    pub entry: SequenceMapEntry,
    pub source: String,
    pub terms: usize,
    pub mapping: MappingCheck,
    /// Terms compared with the formula table (empty when the mapping is not valid).
    pub compared: usize,
    pub matched: usize,
    pub compare_max_n: usize,
    pub first_mismatch: Option<Mismatch>,
}

impl OeisReport {
    pub fn passed(&self) -> bool {
        matches!(self.mapping, MappingCheck::Valid { .. })
            && self.compared > 0
            && self.first_mismatch.is_none()
    }
}

impl fmt::Display for OeisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.entry)?;
        writeln!(f, "source: {} ({} terms)", self.source, self.terms)?;
        match &self.mapping {
            MappingCheck::Valid { checked } => writeln!(
                f,
                "mapping check: {checked} terms with n <= {VALIDATION_MAX_N} agree with the oracle"
            )?,
            MappingCheck::NoOverlap => writeln!(
                f,
                "mapping check: FAILED, no term maps to n <= {VALIDATION_MAX_N}; comparison skipped"
            )?,
            MappingCheck::Invalid(m) => {
                writeln!(f, "mapping check: FAILED at {m}; comparison skipped")?
            }
        }
        if matches!(self.mapping, MappingCheck::Valid { .. }) {
            writeln!(
                f,
                "compared {} terms with n <= {}: {} match",
                self.compared, self.compare_max_n, self.matched
            )?;
            if let Some(m) = &self.first_mismatch {
                writeln!(f, "first mismatch: {m}")?;
            }
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Oracle rows used to vouch for a layout.
pub fn validation_table(family: Family) -> Result<TriangularCountTable> {
    Catalog::build(VALIDATION_MAX_N)?.table(family)
}

pub fn check_mapping(
    entry: &SequenceMapEntry,
    terms: &[(i64, BigInt)],
    oracle: &TriangularCountTable,
) -> MappingCheck {
    let mut checked = 0;
    for (index, found) in terms {
        let Some((n, k)) = entry.coordinates(*index) else {
            continue;
        };
        if n > VALIDATION_MAX_N {
            break;
        }
        let expected = oracle.get(n, k);
        if &expected != found {
            return MappingCheck::Invalid(Mismatch {
                index: *index,
                n,
                k,
                expected,
                found: found.clone(),
            });
        }
        checked += 1;
    }
    if checked == 0 {
        MappingCheck::NoOverlap
    } else {
        MappingCheck::Valid { checked }
    }
}

/// Validates the layout against `oracle`, then compares every term in rows
/// `n <= compare_max_n` with the formula table.
pub fn compare_terms(
    entry: &SequenceMapEntry,
    terms: &[(i64, BigInt)],
    oracle: &TriangularCountTable,
    compare_max_n: usize,
    source: String,
) -> Result<OeisReport> {
    let mapping = check_mapping(entry, terms, oracle);
    let mut report = OeisReport {
        entry: entry.clone(),
        source,
        terms: terms.len(),
        mapping,
        compared: 0,
        matched: 0,
        compare_max_n,
        first_mismatch: None,
    };
    if !matches!(report.mapping, MappingCheck::Valid { .. }) {
        return Ok(report);
    }
    let mapped: Vec<(i64, usize, usize, &BigInt)> = terms
        .iter()
        .filter_map(|(i, v)| entry.coordinates(*i).map(|(n, k)| (*i, n, k, v)))
        .take_while(|&(_, n, _, _)| n <= compare_max_n)
        .collect();
    let top = mapped.iter().map(|m| m.1).max().unwrap_or(0);
    let formula = build_table(entry.family, top.max(entry.family.first_n()).max(1))?;
    for (index, n, k, found) in mapped {
        report.compared += 1;
        let expected = formula.get(n, k);
        if &expected == found {
            report.matched += 1;
        } else if report.first_mismatch.is_none() {
            report.first_mismatch = Some(Mismatch {
                index,
                n,
                k,
                expected,
                found: found.clone(),
            });
        }
    }
    Ok(report)
}

pub fn bfile_url(id: &str) -> String {
    let digits = id.trim_start_matches(['A', 'a']);
    format!("https://oeis.org/A{digits}/b{digits}.txt")
}

/// Downloads the b-file for `id` and caches it at `dest`.
pub fn fetch_bfile(id: &str, dest: &Path) -> Result<()> {
    let url = bfile_url(id);
    let body = ureq::get(&url)
        .call()
        .map_err(|e| Error::Fetch(format!("{url}: {e}")))?
        .body_mut()
        .read_to_string()
        .map_err(|e| Error::Fetch(format!("{url}: {e}")))?;
    if let Some(dir) = dest.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(dest, body)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BFileSource {
    /// `fixtures_dir/bNNNNNN.txt`.
    Fixture,
    Path(PathBuf),
    /// Download into the fixture location first.
    Fetch,
}

pub fn run_oeis_compare(cfg: &RunConfig, id: &str, source: &BFileSource) -> Result<OeisReport> {
    let entry = cfg.sequence(id)?;
    let path = match source {
        BFileSource::Path(p) => p.clone(),
        BFileSource::Fixture => cfg.bfile_path(id),
        BFileSource::Fetch => {
            let dest = cfg.bfile_path(id);
            fetch_bfile(id, &dest)?;
            dest
        }
    };
    if !path.is_file() {
        return Err(Error::MissingBFile(path));
    }
    let label = path.display().to_string();
    let text = std::fs::read_to_string(&path)?;
    let terms = parse_bfile(&text, &label)?;
    let oracle = validation_table(entry.family)?;
    compare_terms(entry, &terms, &oracle, cfg.compare_max_n, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::render::render_bfile;

    fn natural_terms(family: Family, max_n: usize) -> Vec<(i64, BigInt)> {
        let layout = SequenceMapEntry::natural(family);
        let text = render_bfile(&build_table(family, max_n).unwrap(), &layout);
        parse_bfile(&text, "t").unwrap()
    }

    #[test]
    fn matching_layout_passes() {
        let entry = SequenceMapEntry::natural(Family::C);
        let terms = natural_terms(Family::C, 9);
        let oracle = validation_table(Family::C).unwrap();
        let report = compare_terms(&entry, &terms, &oracle, 30, "t".into()).unwrap();
        assert_eq!(report.mapping, MappingCheck::Valid { checked: 14 });
        assert_eq!(report.compared, terms.len());
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn wrong_offset_is_caught_before_comparison() {
        let entry = SequenceMapEntry {
            offset: 1,
            ..SequenceMapEntry::natural(Family::C)
        };
        let terms = natural_terms(Family::C, 9);
        let oracle = validation_table(Family::C).unwrap();
        let report = compare_terms(&entry, &terms, &oracle, 30, "t".into()).unwrap();
        assert!(matches!(report.mapping, MappingCheck::Invalid(_)));
        assert_eq!(report.compared, 0);
        assert!(!report.passed());
        assert!(report.to_string().contains("mapping check: FAILED"));
    }

    #[test]
    fn no_small_rows_means_no_verdict() {
        let entry = SequenceMapEntry::natural(Family::E);
        let terms: Vec<_> = natural_terms(Family::E, 8)
            .into_iter()
            .filter(|(i, _)| entry.coordinates(*i).unwrap().0 > VALIDATION_MAX_N)
            .collect();
        let oracle = validation_table(Family::E).unwrap();
        let report = compare_terms(&entry, &terms, &oracle, 30, "t".into()).unwrap();
        assert_eq!(report.mapping, MappingCheck::NoOverlap);
        assert!(!report.passed());
    }

    #[test]
    fn late_mismatch_is_reported() {
        let entry = SequenceMapEntry::natural(Family::S);
        let mut terms = natural_terms(Family::S, 8);
        let last = terms.len() - 2;
        terms[last].1 += 1;
        let oracle = validation_table(Family::S).unwrap();
        let report = compare_terms(&entry, &terms, &oracle, 30, "t".into()).unwrap();
        let m = report.first_mismatch.clone().unwrap();
        assert_eq!((m.n, m.k), (8, 7));
        assert_eq!(report.matched, report.compared - 1);
        assert!(!report.passed());
    }

    #[test]
    fn url_shape() {
        assert_eq!(bfile_url("A140945"), "https://oeis.org/A140945/b140945.txt");
    }
}
