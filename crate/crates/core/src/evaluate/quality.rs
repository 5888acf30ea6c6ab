use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Edge accounting of a partition: per-community internal edges, boundary
/// edges and degree volume, plus the inter-community total.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityStats {
    pub sizes: Vec<usize>,
    pub internal_edges: Vec<usize>,
    pub boundary_edges: Vec<usize>,
    pub volumes: Vec<usize>,
    pub inter_edges: usize,
}

impl CommunityStats {
    pub fn compute(g: &Graph, p: &Partition) -> Result<Self> {
        p.check_len(g.node_count())?;
        let k = p.community_count();
        let mut internal_edges = vec![0; k];
        let mut boundary_edges = vec![0; k];
        let mut volumes = vec![0; k];
        let mut inter_edges = 0;
        for v in 0..g.node_count() {
            volumes[p.community_of(v)] += g.deg(v);
        }
        for (u, v) in g.edges() {
            let (cu, cv) = (p.community_of(u), p.community_of(v));
            if cu == cv {
                internal_edges[cu] += 1;
            } else {
                boundary_edges[cu] += 1;
                boundary_edges[cv] += 1;
                inter_edges += 1;
            }
        }
        Ok(Self {
            sizes: p.sizes(),
            internal_edges,
            boundary_edges,
            volumes,
            inter_edges,
        })
    }
}

fn need_edges(g: &Graph) -> Result<()> {
    if g.edge_count() == 0 {
        return Err(Error::arg("quality functions are undefined on an edgeless graph"));
    }
    Ok(())
}

/// Newman–Girvan modularity `Σ_c [l_c/m − (d_c/2m)²]`.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    need_edges(g)?;
    let st = CommunityStats::compute(g, p)?;
    let m = g.edge_count() as f64;
    if p.community_count() == 1 {
        return Ok(0.0);
    }
    Ok(st
        .internal_edges
        .iter()
        .zip(&st.volumes)
        .map(|(&l, &d)| l as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum())
}

/// Internal density, cut ratio and conductance of one community.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommunityQuality {
    pub internal_density: f64,
    pub cut_ratio: f64,
    pub conductance: f64,
}

/// Per-community scores and their size-weighted means.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub communities: Vec<CommunityQuality>,
    pub internal_density: f64,
    pub cut_ratio: f64,
    pub conductance: f64,
}

pub fn quality_functions(g: &Graph, p: &Partition) -> Result<QualityReport> {
    need_edges(g)?;
    let st = CommunityStats::compute(g, p)?;
    let n = g.node_count();
    let communities: Vec<CommunityQuality> = (0..p.community_count())
        .map(|c| {
            let s = st.sizes[c];
            let l = st.internal_edges[c] as f64;
            let b = st.boundary_edges[c] as f64;
            let pairs = (s * s.saturating_sub(1) / 2) as f64;
            let outside = (s * (n - s)) as f64;
            let volume = 2.0 * l + b;
            CommunityQuality {
                internal_density: if pairs > 0.0 { l / pairs } else { 0.0 },
                cut_ratio: if outside > 0.0 { b / outside } else { 0.0 },
                conductance: if volume > 0.0 { b / volume } else { 0.0 },
            }
        })
        .collect();
    let weighted = |f: fn(&CommunityQuality) -> f64| {
        communities
            .iter()
            .zip(&st.sizes)
            .map(|(q, &s)| f(q) * s as f64)
            .sum::<f64>()
            / n as f64
    };
    Ok(QualityReport {
        internal_density: weighted(|q| q.internal_density),
        cut_ratio: weighted(|q| q.cut_ratio),
        conductance: weighted(|q| q.conductance),
        communities,
    })
}

/// `−log10` of the probability that, placing the graph's links uniformly
/// among all node pairs, at least the observed number fall inside
/// communities (hypergeometric upper tail, evaluated in log space).
pub fn surprise(g: &Graph, p: &Partition) -> Result<f64> {
    need_edges(g)?;
    let st = CommunityStats::compute(g, p)?;
    let n = g.node_count() as u64;
    let total_pairs = n * (n - 1) / 2;
    let intra_pairs: u64 = st.sizes.iter().map(|&s| (s as u64) * (s as u64).saturating_sub(1) / 2).sum();
    let links = g.edge_count() as u64;
    let intra_links: u64 = st.internal_edges.iter().map(|&l| l as u64).sum();
    if intra_pairs == total_pairs || intra_links == 0 {
        return Ok(0.0);
    }
    let denom = ln_binomial(total_pairs, links);
    let hi = intra_pairs.min(links);
    let terms: Vec<f64> = (intra_links..=hi)
        .filter(|&i| links - i <= total_pairs - intra_pairs)
        .map(|i| ln_binomial(intra_pairs, i) + ln_binomial(total_pairs - intra_pairs, links - i) - denom)
        .collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let ln_tail = max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln();
    Ok((-ln_tail / std::f64::consts::LN_10).max(0.0))
}

/// Mesoscopic descriptors of each community.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityProfile {
    pub sizes: Vec<usize>,
    pub internal_edges: Vec<usize>,
    pub boundary_edges: Vec<usize>,
    /// Per node: internal degree over degree (0 for isolated nodes).
    pub node_embeddedness: Vec<f64>,
    pub mean_embeddedness: Vec<f64>,
    /// `|S| · l_S / C(|S|, 2)`; 0 for singletons.
    pub scaled_density: Vec<f64>,
    /// Largest internal degree over `|S| − 1`; 0 for singletons.
    pub hub_dominance: Vec<f64>,
}

pub fn community_profile(g: &Graph, p: &Partition) -> Result<CommunityProfile> {
    let st = CommunityStats::compute(g, p)?;
    let k = p.community_count();
    let mut internal_degree = vec![0usize; g.node_count()];
    for (u, v) in g.edges() {
        if p.community_of(u) == p.community_of(v) {
            internal_degree[u] += 1;
            internal_degree[v] += 1;
        }
    }
    let node_embeddedness: Vec<f64> = (0..g.node_count())
        .map(|v| match g.deg(v) {
            0 => 0.0,
            d => internal_degree[v] as f64 / d as f64,
        })
        .collect();
    let mut emb_sum = vec![0.0; k];
    let mut max_internal = vec![0usize; k];
    for v in 0..g.node_count() {
        let c = p.community_of(v);
        emb_sum[c] += node_embeddedness[v];
        max_internal[c] = max_internal[c].max(internal_degree[v]);
    }
    let mut scaled_density = vec![0.0; k];
    let mut hub_dominance = vec![0.0; k];
    let mut mean_embeddedness = vec![0.0; k];
    for c in 0..k {
        let s = st.sizes[c];
        mean_embeddedness[c] = emb_sum[c] / s as f64;
        if s >= 2 {
            let pairs = (s * (s - 1) / 2) as f64;
            scaled_density[c] = s as f64 * st.internal_edges[c] as f64 / pairs;
            hub_dominance[c] = max_internal[c] as f64 / (s - 1) as f64;
        }
    }
    Ok(CommunityProfile {
        sizes: st.sizes,
        internal_edges: st.internal_edges,
        boundary_edges: st.boundary_edges,
        node_embeddedness,
        mean_embeddedness,
        scaled_density,
        hub_dominance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn p_ref() -> Partition {
        Partition::from_labels(&[0, 0, 0, 1, 1, 1])
    }

    #[test]
    fn modularity_fixtures() {
        let g = two_triangle_bridge();
        assert_eq!(modularity(&g, &Partition::one_block(6)).unwrap(), 0.0);
        assert!((modularity(&g, &p_ref()).unwrap() - 5.0 / 14.0).abs() < 1e-15);
        assert!((modularity(&g, &Partition::singletons(6)).unwrap() + 34.0 / 196.0).abs() < 1e-15);
        assert!(modularity(&Graph::empty(3), &Partition::one_block(3)).is_err());
        assert!(modularity(&g, &Partition::one_block(5)).is_err());
    }

    #[test]
    fn quality_fixture() {
        let q = quality_functions(&two_triangle_bridge(), &p_ref()).unwrap();
        let c = q.communities[0];
        assert!((c.internal_density - 1.0).abs() < 1e-15);
        assert!((c.cut_ratio - 1.0 / 9.0).abs() < 1e-15);
        assert!((c.conductance - 1.0 / 7.0).abs() < 1e-15);
        let whole = quality_functions(&two_triangle_bridge(), &Partition::one_block(6)).unwrap();
        assert_eq!((whole.cut_ratio, whole.conductance), (0.0, 0.0));
        let single = quality_functions(&path(3), &Partition::singletons(3)).unwrap();
        assert_eq!(single.communities[0].internal_density, 0.0);
    }

    #[test]
    fn surprise_fixture() {
        let g = two_triangle_bridge();
        assert_eq!(surprise(&g, &Partition::one_block(6)).unwrap(), 0.0);
        let planted = surprise(&g, &p_ref()).unwrap();
        assert!(planted > 0.0);
        // Every other balanced 3/3 split scores lower.
        let mut others = 0;
        for mask in 0u32..64 {
            if mask.count_ones() != 3 || mask & 1 == 0 || mask == 0b000111 {
                continue;
            }
            let labels: Vec<u32> = (0..6).map(|v| (mask >> v) & 1).collect();
            let s = surprise(&g, &Partition::from_labels(&labels)).unwrap();
            assert!(planted > s, "mask {mask:06b}: {s} >= {planted}");
            others += 1;
        }
        assert_eq!(others, 9);
    }

    #[test]
    fn profile_fixture() {
        let pr = community_profile(&two_triangle_bridge(), &p_ref()).unwrap();
        assert_eq!(pr.node_embeddedness[0], 1.0);
        assert!((pr.node_embeddedness[2] - 2.0 / 3.0).abs() < 1e-15);
        assert!((pr.scaled_density[0] - 3.0).abs() < 1e-15);
        assert!((pr.hub_dominance[0] - 1.0).abs() < 1e-15);
        let tree = community_profile(&star(6), &Partition::one_block(6)).unwrap();
        assert!((tree.scaled_density[0] - 2.0).abs() < 1e-12);
        let total: usize = pr.internal_edges.iter().sum::<usize>() + pr.boundary_edges.iter().sum::<usize>() / 2;
        assert_eq!(total, 7);
    }
}
