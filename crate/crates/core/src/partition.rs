//! Non-overlapping node partitions and the membership file format.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Total assignment of nodes `0..n` to communities `0..community_count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    membership: Vec<usize>,
    community_count: usize,
}

impl Partition {
    /// Compacts arbitrary labels to dense ids in order of first appearance.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Self {
        let mut ids: HashMap<L, usize> = HashMap::new();
        let membership = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(*l).or_insert(next)
            })
            .collect();
        Self {
            membership,
            community_count: ids.len(),
        }
    }

    /// Builds from explicit community member lists, which must cover
    /// `0..n` exactly once.
    pub fn from_communities(n: usize, communities: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (c, members) in communities.iter().enumerate() {
            for &v in members {
                if v >= n {
                    return Err(Error::arg(format!("node {v} out of range")));
                }
                if labels[v] != usize::MAX {
                    return Err(Error::arg(format!("node {v} listed twice")));
                }
                labels[v] = c;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::arg(format!("node {v} unassigned")));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            membership: (0..n).collect(),
            community_count: n,
        }
    }

    pub fn one_block(n: usize) -> Self {
        Self {
            membership: vec![0; n],
            community_count: usize::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.membership.len()
    }

    pub fn is_empty(&self) -> bool {
        self.membership.is_empty()
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    pub fn community_of(&self, v: usize) -> usize {
        self.membership[v]
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.community_count];
        for &c in &self.membership {
            sizes[c] += 1;
        }
        sizes
    }

    /// Member lists, each sorted ascending.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.community_count];
        for (v, &c) in self.membership.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Canonical form independent of community ids: sorted member lists,
    /// sorted by smallest member.
    pub fn canonical(&self) -> Vec<Vec<usize>> {
        // communities() already lists communities by first member.
        let mut c = self.communities();
        c.sort();
        c
    }

    /// Whether the two partitions group nodes identically.
    pub fn same_grouping(&self, other: &Partition) -> bool {
        self.len() == other.len() && Self::from_labels(&self.membership) == Self::from_labels(&other.membership)
    }

    /// Image under the node relabeling `v -> perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut labels = vec![0; self.len()];
        for (v, &c) in self.membership.iter().enumerate() {
            labels[perm[v]] = c;
        }
        Self::from_labels(&labels)
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::arg(format!(
                "partition covers {} nodes, expected {n}",
                self.len()
            )));
        }
        Ok(())
    }
}

/// Parses the membership format: one `node community` pair per line, `#`
/// comments. Every node in `0..n` must appear exactly once, where `n` is
/// `expected_nodes` if given, else one past the largest node id.
pub fn read_membership<R: BufRead>(reader: R, expected_nodes: Option<usize>) -> Result<Partition> {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: lineno,
                msg: "expected `node community`".into(),
            });
        }
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad integer {s:?}"),
            })
        };
        pairs.push((parse(fields[0])?, parse(fields[1])?));
    }
    let n = expected_nodes.unwrap_or_else(|| pairs.iter().map(|p| p.0 + 1).max().unwrap_or(0));
    let mut labels = vec![None; n];
    for &(v, c) in &pairs {
        if v >= n {
            return Err(Error::arg(format!("node {v} out of range for {n} nodes")));
        }
        if labels[v].replace(c).is_some() {
            return Err(Error::arg(format!("node {v} assigned twice")));
        }
    }
    let labels: Vec<usize> = labels
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| Error::arg(format!("node {v} has no community"))))
        .collect::<Result<_>>()?;
    Ok(Partition::from_labels(&labels))
}

pub fn write_membership<W: Write>(p: &Partition, mut w: W) -> Result<()> {
    for (v, c) in p.membership().iter().enumerate() {
        writeln!(w, "{v} {c}")?;
    }
    Ok(())
}
