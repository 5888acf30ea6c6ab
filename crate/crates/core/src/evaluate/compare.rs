use crate::error::{Error, Result};
use crate::partition::Partition;

/// Overlap counts `counts[i][j] = |C_i ∩ C'_j|` between two partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<usize>>,
    pub n: usize,
}

impl ConfusionMatrix {
    pub fn row_sums(&self) -> Vec<usize> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        let k2 = self.counts.first().map_or(0, Vec::len);
        (0..k2).map(|j| self.counts.iter().map(|r| r[j]).sum()).collect()
    }

    fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts.iter().flatten().copied().filter(|&c| c > 0)
    }
}

/// Classification of the `C(n, 2)` node pairs by agreement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    /// Together in both partitions.
    pub n11: u64,
    /// Apart in both.
    pub n00: u64,
    /// Together in the first only.
    pub n10: u64,
    /// Together in the second only.
    pub n01: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.n11 + self.n00 + self.n10 + self.n01
    }
}

/// Entropy-based comparison, all in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InformationStats {
    pub mi: f64,
    pub h1: f64,
    pub h2: f64,
    pub vi: f64,
    pub nmi: f64,
}

fn same_size(p1: &Partition, p2: &Partition) -> Result<()> {
    if p1.len() != p2.len() {
        return Err(Error::arg(format!(
            "partitions cover different node counts ({} vs {})",
            p1.len(),
            p2.len()
        )));
    }
    Ok(())
}

pub fn confusion(p1: &Partition, p2: &Partition) -> Result<ConfusionMatrix> {
    same_size(p1, p2)?;
    let mut counts = vec![vec![0usize; p2.community_count()]; p1.community_count()];
    for (&a, &b) in p1.membership().iter().zip(p2.membership()) {
        counts[a][b] += 1;
    }
    Ok(ConfusionMatrix { counts, n: p1.len() })
}

fn choose2(x: usize) -> u64 {
    let x = x as u64;
    x * x.saturating_sub(1) / 2
}

pub fn pair_counts(p1: &Partition, p2: &Partition) -> Result<PairCounts> {
    let cm = confusion(p1, p2)?;
    let together_both: u64 = cm.cells().map(choose2).sum();
    let together_1: u64 = cm.row_sums().into_iter().map(choose2).sum();
    let together_2: u64 = cm.col_sums().into_iter().map(choose2).sum();
    let n11 = together_both;
    let n10 = together_1 - n11;
    let n01 = together_2 - n11;
    let n00 = choose2(cm.n) - n11 - n10 - n01;
    Ok(PairCounts { n11, n00, n10, n01 })
}

fn need_pairs(p: &Partition) -> Result<()> {
    if p.len() < 2 {
        return Err(Error::arg("pair-counting measures need at least 2 nodes"));
    }
    Ok(())
}

/// Fraction of node pairs on which the partitions agree.
pub fn rand_index(p1: &Partition, p2: &Partition) -> Result<f64> {
    need_pairs(p1)?;
    let pc = pair_counts(p1, p2)?;
    Ok((pc.n11 + pc.n00) as f64 / pc.total() as f64)
}

/// Hubert–Arabie chance-corrected Rand index. `None` when the expected and
/// maximum indices coincide and the partitions differ.
pub fn adjusted_rand_index(p1: &Partition, p2: &Partition) -> Result<Option<f64>> {
    need_pairs(p1)?;
    let pc = pair_counts(p1, p2)?;
    let index = pc.n11 as f64;
    let a = (pc.n11 + pc.n10) as f64;
    let b = (pc.n11 + pc.n01) as f64;
    let expected = a * b / pc.total() as f64;
    let max = 0.5 * (a + b);
    let denom = max - expected;
    if denom.abs() < 1e-12 {
        return Ok(p1.same_grouping(p2).then_some(1.0));
    }
    Ok(Some((index - expected) / denom))
}

/// Pairs together in both over pairs together in at least one.
pub fn jaccard_index(p1: &Partition, p2: &Partition) -> Result<f64> {
    need_pairs(p1)?;
    let pc = pair_counts(p1, p2)?;
    let denom = pc.n11 + pc.n10 + pc.n01;
    if denom == 0 {
        // Both all-singletons.
        return Ok(1.0);
    }
    Ok(pc.n11 as f64 / denom as f64)
}

/// Share of nodes in `found` covered by each found cluster's best-matching
/// `truth` cluster.
pub fn purity(found: &Partition, truth: &Partition) -> Result<f64> {
    let cm = confusion(found, truth)?;
    if cm.n == 0 {
        return Err(Error::arg("purity of an empty partition"));
    }
    let matched: usize = cm.counts.iter().map(|r| r.iter().copied().max().unwrap_or(0)).sum();
    Ok(matched as f64 / cm.n as f64)
}

/// `2n - Σ_i max_j n_ij - Σ_j max_i n_ij`.
pub fn van_dongen(p1: &Partition, p2: &Partition) -> Result<usize> {
    let cm = confusion(p1, p2)?;
    let rows: usize = cm.counts.iter().map(|r| r.iter().copied().max().unwrap_or(0)).sum();
    let k2 = p2.community_count();
    let cols: usize = (0..k2)
        .map(|j| cm.counts.iter().map(|r| r[j]).max().unwrap_or(0))
        .sum();
    Ok(2 * cm.n - rows - cols)
}

fn entropy(sizes: &[usize], n: f64) -> f64 {
    sizes
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Mutual information, entropies, variation of information and NMI
/// (arithmetic-mean normalization). Two single-block partitions get NMI 1.
pub fn mutual_information_stats(p1: &Partition, p2: &Partition) -> Result<InformationStats> {
    let cm = confusion(p1, p2)?;
    if cm.n == 0 {
        return Err(Error::arg("information measures of empty partitions"));
    }
    let n = cm.n as f64;
    let rows = cm.row_sums();
    let cols = cm.col_sums();
    let h1 = entropy(&rows, n);
    let h2 = entropy(&cols, n);
    let mut mi = 0.0;
    for (i, row) in cm.counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let c = c as f64;
                mi += c / n * (c * n / (rows[i] as f64 * cols[j] as f64)).log2();
            }
        }
    }
    // Rounding can push MI a hair past the entropies.
    let mi = mi.clamp(0.0, h1.min(h2));
    let vi = (h1 + h2 - 2.0 * mi).max(0.0);
    let mean_h = 0.5 * (h1 + h2);
    let nmi = if mean_h <= 0.0 { 1.0 } else { (mi / mean_h).clamp(0.0, 1.0) };
    Ok(InformationStats { mi, h1, h2, vi, nmi })
}
