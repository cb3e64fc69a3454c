use std::fmt;
use std::sync::OnceLock;

use super::graph::{Edge, LabeledMultigraph};

/// A matroid given by its ground set and sorted list of bases, all as label
/// bitmasks. Two signatures are equal exactly when the matroids are equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatroidSignature {
    pub ground: u32,
    pub rank: u32,
    pub bases: Vec<u32>,
}

fn labels_of(mask: u32) -> impl Iterator<Item = u32> {
    (0..32).filter(move |i| mask & (1 << i) != 0).map(|i| i + 1)
}

fn mask_of(labels: &[u32]) -> u32 {
    labels.iter().fold(0, |m, l| m | (1 << (l - 1)))
}

/// Submasks of `mask` with exactly `size` bits, in increasing order.
fn submasks_of_size(mask: u32, size: u32) -> impl Iterator<Item = u32> {
    let mut sub = Some(0u32);
    std::iter::from_fn(move || {
        let current = sub?;
        sub = if current == mask {
            None
        } else {
            Some((current.wrapping_sub(mask)) & mask)
        };
        Some(current)
    })
    .filter(move |s| s.count_ones() == size)
}

fn all_submasks(mask: u32) -> impl Iterator<Item = u32> {
    (0..=mask.count_ones()).flat_map(move |k| submasks_of_size(mask, k))
}

impl MatroidSignature {
    pub fn new(ground: u32, rank: u32, mut bases: Vec<u32>) -> Self {
        bases.sort_unstable();
        bases.dedup();
        debug_assert!(bases
            .iter()
            .all(|b| b.count_ones() == rank && b & !ground == 0));
        Self {
            ground,
            rank,
            bases,
        }
    }

    /// `U_{rank, |labels|}` on the given labels.
    pub fn uniform(labels: &[u32], rank: u32) -> Self {
        let ground = mask_of(labels);
        Self::new(ground, rank, submasks_of_size(ground, rank).collect())
    }

    /// The cycle matroid of `K_4`.
    pub fn k4() -> &'static Self {
        static K4: OnceLock<MatroidSignature> = OnceLock::new();
        K4.get_or_init(|| {
            let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
            let edges = pairs
                .iter()
                .zip(1..)
                .map(|(&(u, v), label)| Edge { u, v, label })
                .collect();
            LabeledMultigraph::new(4, edges)
                .expect("distinct labels")
                .signature()
        })
    }

    pub fn ground_size(&self) -> u32 {
        self.ground.count_ones()
    }

    pub fn labels(&self) -> Vec<u32> {
        labels_of(self.ground).collect()
    }

    pub fn is_basis(&self, set: u32) -> bool {
        self.bases.binary_search(&set).is_ok()
    }

    /// `max_B |B ∩ s|`.
    pub fn rank_of_subset(&self, s: u32) -> u32 {
        self.bases
            .iter()
            .map(|b| (b & s).count_ones())
            .max()
            .unwrap_or(0)
    }

    /// No loops and no parallel pairs.
    pub fn is_simple(&self) -> bool {
        let singles: Vec<u32> = labels_of(self.ground).map(|l| 1 << (l - 1)).collect();
        if singles.iter().any(|&e| self.rank_of_subset(e) == 0) {
            return false;
        }
        for (i, &e) in singles.iter().enumerate() {
            for &f in &singles[i + 1..] {
                if self.rank_of_subset(e | f) == 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Exhaustive basis-exchange check over all pairs of bases.
    pub fn satisfies_basis_exchange(&self) -> bool {
        if self.bases.is_empty() {
            return false;
        }
        for &b1 in &self.bases {
            for &b2 in &self.bases {
                for x in labels_of(b1 & !b2) {
                    let without = b1 & !(1 << (x - 1));
                    let ok = labels_of(b2 & !b1).any(|y| self.is_basis(without | (1 << (y - 1))));
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Bases of the dual matroid are complements of bases.
    pub fn dual(&self) -> Self {
        let rank = self.ground_size() - self.rank;
        Self::new(
            self.ground,
            rank,
            self.bases.iter().map(|b| self.ground & !b).collect(),
        )
    }

    /// `M / contract \ delete`, via `r'(X) = r(X ∪ C) - r(C)` on the rest.
    pub fn minor(&self, contract: u32, delete: u32) -> Self {
        debug_assert_eq!(contract & delete, 0);
        let rest = self.ground & !contract & !delete;
        let rc = self.rank_of_subset(contract);
        let rank = self.rank_of_subset(rest | contract) - rc;
        let bases = submasks_of_size(rest, rank)
            .filter(|&x| self.rank_of_subset(x | contract) - rc == rank)
            .collect();
        Self::new(rest, rank, bases)
    }

    /// Renames label `l` to `map[l - 1]`.
    pub fn relabel(&self, map: &[u32]) -> Self {
        let apply = |mask: u32| labels_of(mask).fold(0, |m, l| m | 1 << (map[l as usize - 1] - 1));
        Self::new(
            apply(self.ground),
            self.rank,
            self.bases.iter().map(|&b| apply(b)).collect(),
        )
    }

    /// Direct sum with a matroid on a disjoint ground set.
    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(
            self.ground & other.ground,
            0,
            "ground sets must be disjoint"
        );
        let bases = self
            .bases
            .iter()
            .flat_map(|a| other.bases.iter().map(move |b| a | b))
            .collect();
        Self::new(self.ground | other.ground, self.rank + other.rank, bases)
    }

    /// Isomorphism by trying every bijection of ground sets.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        if self.ground_size() != other.ground_size()
            || self.rank != other.rank
            || self.bases.len() != other.bases.len()
        {
            return false;
        }
        let from = self.labels();
        let to = other.labels();
        let mut perm: Vec<usize> = (0..from.len()).collect();
        loop {
            let image = |mask: u32| {
                from.iter()
                    .enumerate()
                    .filter(|(_, &l)| mask & (1 << (l - 1)) != 0)
                    .fold(0u32, |m, (i, _)| m | 1 << (to[perm[i]] - 1))
            };
            let mut mapped: Vec<u32> = self.bases.iter().map(|&b| image(b)).collect();
            mapped.sort_unstable();
            if mapped == other.bases {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }

    /// True iff no minor is isomorphic to `U_{2,4}` or `M(K_4)`.
    pub fn minor_check(&self) -> bool {
        let u24 = MatroidSignature::uniform(&[1, 2, 3, 4], 2);
        let targets = [&u24, MatroidSignature::k4()];
        for target in targets {
            let size = target.ground_size();
            for keep in submasks_of_size(self.ground, size) {
                let removed = self.ground & !keep;
                for contract in all_submasks(removed) {
                    let m = self.minor(contract, removed & !contract);
                    if m.rank == target.rank
                        && m.bases.len() == target.bases.len()
                        && m.is_isomorphic(target)
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `n rank simple_flag basis1,basis2,...`; a basis is its labels in
    /// increasing order, concatenated (`-` for the empty basis).
    pub fn dump_line(&self) -> String {
        let bases: Vec<String> = self.bases_as_label_lists();
        format!(
            "{} {} {} {}",
            self.ground_size(),
            self.rank,
            u8::from(self.is_simple()),
            bases.join(",")
        )
    }

    fn bases_as_label_lists(&self) -> Vec<String> {
        let mut out: Vec<Vec<u32>> = self.bases.iter().map(|&b| labels_of(b).collect()).collect();
        out.sort();
        out.into_iter()
            .map(|b| {
                if b.is_empty() {
                    "-".to_string()
                } else {
                    b.iter().map(u32::to_string).collect()
                }
            })
            .collect()
    }
}

impl fmt::Display for MatroidSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank {} bases {{{}}}",
            self.rank,
            self.bases_as_label_lists().join(",")
        )
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}
