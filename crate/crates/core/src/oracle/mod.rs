//! Brute-force ground truth. Series-parallel graphs on label subsets of
//! `[n]` are grown by series and parallel extensions, their cycle matroids
//! are deduplicated by basis signature, and counts are tallied by rank.
//! Quasi families come from assembling catalog matroids over set partitions.

mod graph;
mod matroid;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use num_bigint::BigInt;
use num_traits::Zero;

pub use graph::{Edge, LabeledMultigraph};
pub use matroid::MatroidSignature;

use crate::error::{Error, Result};
use crate::spcounts::{Family, TriangularCountTable};

pub const DEFAULT_MAX_N: usize = 6;
pub const HARD_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub signature: MatroidSignature,
    pub simple: bool,
}

/// Connected series-parallel matroids on `[n]` for each `n <= max_n`,
/// sorted by `(rank, bases)`.
#[derive(Clone, Debug)]
pub struct Catalog {
    by_size: BTreeMap<usize, Vec<CatalogEntry>>,
}

fn check_cap(n: usize) -> Result<()> {
    if n > HARD_CAP {
        return Err(Error::OracleCap {
            requested: n,
            cap: HARD_CAP,
        });
    }
    Ok(())
}

/// All distinct series-parallel matroids on `[n]`.
///
/// With `dedup_each_level` unset, every generated graph is kept until the
/// last level; the result must not depend on the flag.
pub fn enumerate_signatures(
    n: usize,
    dedup_each_level: bool,
) -> Result<BTreeSet<MatroidSignature>> {
    check_cap(n)?;
    if n == 0 {
        return Ok(BTreeSet::new());
    }
    if n == 1 {
        return Ok([
            LabeledMultigraph::single_loop(1)?.signature(),
            LabeledMultigraph::single_edge(1)?.signature(),
        ]
        .into_iter()
        .collect());
    }
    let mut level: BTreeMap<u32, Vec<LabeledMultigraph>> = BTreeMap::new();
    for a in 1..=n as u32 {
        for b in a + 1..=n as u32 {
            let g = LabeledMultigraph::two_cycle(a, b)?;
            level.insert(g.label_mask(), vec![g]);
        }
    }
    for _ in 2..n {
        let mut next: BTreeMap<u32, Vec<LabeledMultigraph>> = BTreeMap::new();
        for (mask, graphs) in &level {
            for label in 1..=n as u32 {
                if mask & (1 << (label - 1)) != 0 {
                    continue;
                }
                let slot = next.entry(mask | (1 << (label - 1))).or_default();
                for g in graphs {
                    slot.extend(g.extend(label)?);
                }
            }
        }
        if dedup_each_level {
            for graphs in next.values_mut() {
                let mut reps: BTreeMap<MatroidSignature, LabeledMultigraph> = BTreeMap::new();
                for g in graphs.drain(..) {
                    reps.entry(g.signature()).or_insert(g);
                }
                graphs.extend(reps.into_values());
            }
        }
        level = next;
    }
    Ok(level
        .into_values()
        .flatten()
        .map(|g| g.signature())
        .collect())
}

/// Catalog entries for ground set `[n]`.
pub fn enumerate_connected(n: usize) -> Result<Vec<CatalogEntry>> {
    let mut entries: Vec<CatalogEntry> = enumerate_signatures(n, true)?
        .into_iter()
        .map(|signature| CatalogEntry {
            simple: signature.is_simple(),
            signature,
        })
        .collect();
    entries.sort_by(|a, b| {
        (a.signature.rank, &a.signature.bases).cmp(&(b.signature.rank, &b.signature.bases))
    });
    Ok(entries)
}

fn rank_counts<'a>(entries: impl Iterator<Item = &'a CatalogEntry>, n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::zero(); n + 1];
    for e in entries {
        row[e.signature.rank as usize] += 1;
    }
    row
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Set partitions of `[n]` as lists of blocks (labels `1..=n`), in
/// restricted-growth order.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<u32>>> {
    fn go(pos: usize, n: usize, blocks: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if pos == n {
            out.push(blocks.clone());
            return;
        }
        let label = pos as u32 + 1;
        for b in 0..blocks.len() {
            blocks[b].push(label);
            go(pos + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![label]);
        go(pos + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

impl Catalog {
    pub fn build(max_n: usize) -> Result<Self> {
        check_cap(max_n)?;
        let by_size = (1..=max_n)
            .map(|n| enumerate_connected(n).map(|e| (n, e)))
            .collect::<Result<_>>()?;
        Ok(Self { by_size })
    }

    pub fn max_n(&self) -> usize {
        self.by_size.keys().next_back().copied().unwrap_or(0)
    }

    pub fn entries(&self, n: usize) -> &[CatalogEntry] {
        self.by_size.get(&n).map_or(&[], Vec::as_slice)
    }

    /// `C` row `n`: connected SP matroids by rank.
    pub fn c_row(&self, n: usize) -> Vec<BigInt> {
        rank_counts(self.entries(n).iter(), n)
    }

    /// `E` row `n`: the simple ones.
    pub fn e_row(&self, n: usize) -> Vec<BigInt> {
        rank_counts(self.entries(n).iter().filter(|e| e.simple), n)
    }

    /// `(A row, S row)` for `[n]` by summing over set partitions: each block
    /// carries any catalog matroid of its size (simple ones only for `S`).
    pub fn quasi_counts(&self, n: usize) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
        if n > self.max_n() {
            return Err(Error::OracleCap {
                requested: n,
                cap: self.max_n(),
            });
        }
        let all: Vec<Vec<BigInt>> = (0..=n).map(|b| self.c_row(b)).collect();
        let simple: Vec<Vec<BigInt>> = (0..=n).map(|b| self.e_row(b)).collect();
        let mut a_row = vec![BigInt::zero(); n + 1];
        let mut s_row = vec![BigInt::zero(); n + 1];
        for partition in set_partitions(n) {
            let mut pa = vec![BigInt::from(1)];
            let mut ps = vec![BigInt::from(1)];
            for block in &partition {
                pa = poly_mul(&pa, &all[block.len()]);
                ps = poly_mul(&ps, &simple[block.len()]);
            }
            for k in 0..=n {
                a_row[k] += pa.get(k).cloned().unwrap_or_default();
                s_row[k] += ps.get(k).cloned().unwrap_or_default();
            }
        }
        Ok((a_row, s_row))
    }

    /// Every quasi series-parallel matroid on `[n]`, built as explicit
    /// direct sums of relabelled catalog entries.
    pub fn quasi_signatures(&self, n: usize) -> Result<BTreeSet<MatroidSignature>> {
        if n > self.max_n() {
            return Err(Error::OracleCap {
                requested: n,
                cap: self.max_n(),
            });
        }
        let mut out = BTreeSet::new();
        for partition in set_partitions(n) {
            let mut partial = vec![MatroidSignature::new(0, 0, vec![0])];
            for block in &partition {
                let mut next = Vec::new();
                for m in &partial {
                    for entry in self.entries(block.len()) {
                        next.push(m.direct_sum(&entry.signature.relabel(block)));
                    }
                }
                partial = next;
            }
            out.extend(partial);
        }
        Ok(out)
    }

    /// Oracle counts for `E`, `C`, `A` or `S` as a table up to the catalog size.
    pub fn table(&self, family: Family) -> Result<TriangularCountTable> {
        let max_n = self.max_n();
        let rows = match family {
            Family::C => (1..=max_n).map(|n| self.c_row(n)).collect(),
            Family::E => (1..=max_n).map(|n| self.e_row(n)).collect(),
            Family::A => (0..=max_n)
                .map(|n| self.quasi_counts(n).map(|r| r.0))
                .collect::<Result<_>>()?,
            Family::S => (0..=max_n)
                .map(|n| self.quasi_counts(n).map(|r| r.1))
                .collect::<Result<_>>()?,
            Family::G => return Err(Error::UnknownFamily("G (no oracle)".into())),
        };
        Ok(TriangularCountTable {
            family,
            first_n: family.first_n(),
            rows,
        })
    }

    /// One matroid per line, `n rank simple_flag bases`.
    pub fn dump(&self, out: &mut impl Write) -> Result<()> {
        for entries in self.by_size.values() {
            for e in entries {
                writeln!(out, "{}", e.signature.dump_line())?;
            }
        }
        Ok(())
    }
}
