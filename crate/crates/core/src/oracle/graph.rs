use crate::error::{Error, Result};

use super::matroid::MatroidSignature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: u32,
}

/// Multigraph whose edges carry distinct labels in `1..=32`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledMultigraph {
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
}

pub(crate) fn label_bit(label: u32) -> Result<u32> {
    if (1..=32).contains(&label) {
        Ok(1 << (label - 1))
    } else {
        Err(Error::LabelRange(label))
    }
}

impl LabeledMultigraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut seen = 0u32;
        for e in &edges {
            let bit = label_bit(e.label)?;
            if seen & bit != 0 {
                return Err(Error::DuplicateLabel(e.label));
            }
            seen |= bit;
            assert!(
                e.u < vertex_count && e.v < vertex_count,
                "edge endpoint out of range"
            );
        }
        Ok(Self {
            vertex_count,
            edges,
        })
    }

    pub fn single_edge(label: u32) -> Result<Self> {
        Self::new(2, vec![Edge { u: 0, v: 1, label }])
    }

    pub fn single_loop(label: u32) -> Result<Self> {
        Self::new(1, vec![Edge { u: 0, v: 0, label }])
    }

    pub fn two_cycle(a: u32, b: u32) -> Result<Self> {
        Self::new(
            2,
            vec![
                Edge {
                    u: 0,
                    v: 1,
                    label: a,
                },
                Edge {
                    u: 0,
                    v: 1,
                    label: b,
                },
            ],
        )
    }

    /// Bitmask of the labels in use (bit `l - 1` for label `l`).
    pub fn label_mask(&self) -> u32 {
        self.edges.iter().fold(0, |m, e| m | (1 << (e.label - 1)))
    }

    pub fn has_label(&self, label: u32) -> bool {
        self.edges.iter().any(|e| e.label == label)
    }

    /// Every series and parallel extension by `new_label`. Graphs with fewer
    /// than two edges are terminal and yield nothing.
    pub fn extend(&self, new_label: u32) -> Result<Vec<LabeledMultigraph>> {
        label_bit(new_label)?;
        if self.has_label(new_label) {
            return Err(Error::DuplicateLabel(new_label));
        }
        if self.edges.len() < 2 {
            return Ok(Vec::new());
        }
        let mut out = Vec::with_capacity(3 * self.edges.len());
        for e in &self.edges {
            let mut g = self.clone();
            g.edges.push(Edge {
                label: new_label,
                ..*e
            });
            out.push(g);
        }
        for (i, e) in self.edges.iter().enumerate() {
            let w = self.vertex_count;
            for (first, second) in [(e.label, new_label), (new_label, e.label)] {
                let mut g = self.clone();
                g.vertex_count += 1;
                g.edges[i] = Edge {
                    u: e.u,
                    v: w,
                    label: first,
                };
                g.edges.push(Edge {
                    u: w,
                    v: e.v,
                    label: second,
                });
                out.push(g);
            }
        }
        Ok(out)
    }

    fn components(&self, edge_subset: u32) -> (usize, bool) {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut comps = self.vertex_count;
        let mut acyclic = true;
        for (i, e) in self.edges.iter().enumerate() {
            if edge_subset & (1 << i) == 0 {
                continue;
            }
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a == b {
                acyclic = false;
            } else {
                parent[a] = b;
                comps -= 1;
            }
        }
        (comps, acyclic)
    }

    /// The cycle matroid: bases are the label sets of maximal spanning
    /// forests, rank is vertices minus components.
    pub fn signature(&self) -> MatroidSignature {
        let m = self.edges.len();
        let all = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
        let (comps, _) = self.components(all);
        let rank = (self.vertex_count - comps) as u32;
        let mut bases = Vec::new();
        for subset in 0..=all {
            if subset.count_ones() != rank {
                continue;
            }
            if self.components(subset).1 {
                let labels = (0..m)
                    .filter(|i| subset & (1 << i) != 0)
                    .fold(0u32, |acc, i| acc | (1 << (self.edges[i].label - 1)));
                bases.push(labels);
            }
        }
        MatroidSignature::new(self.label_mask(), rank, bases)
    }
}
