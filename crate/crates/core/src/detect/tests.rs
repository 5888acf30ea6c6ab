//! Contract tests shared by all detectors.

use super::*;
use crate::evaluate::{modularity, mutual_information_stats};
use crate::graph::fixtures::*;
use crate::netgen::{erdos_renyi, girvan_newman};

fn run(a: Algorithm, g: &Graph, seed: u64) -> Partition {
    detect(a, g, &DetectorParams::default(), RngStream::new(seed, 0))
        .unwrap_or_else(|e| panic!("{a}: {e}"))
        .partition
}

fn is_modularity_based(a: Algorithm) -> bool {
    !matches!(a, Algorithm::Mcl | Algorithm::LabelPropagation | Algorithm::Infomap)
}

/// Maximum modularity over all set partitions (restricted growth strings).
fn brute_force_max_modularity(g: &Graph) -> f64 {
    fn recurse(g: &Graph, labels: &mut Vec<usize>, next: usize, best: &mut f64) {
        if labels.len() == g.node_count() {
            let q = modularity(g, &Partition::from_labels(labels)).unwrap();
            *best = best.max(q);
            return;
        }
        for l in 0..=next {
            labels.push(l);
            recurse(g, labels, next.max(l + 1), best);
            labels.pop();
        }
    }
    let mut best = f64::NEG_INFINITY;
    recurse(g, &mut Vec::new(), 0, &mut best);
    best
}

#[test]
fn names_round_trip() {
    for a in Algorithm::ALL {
        assert_eq!(Algorithm::parse(a.name()).unwrap(), a);
        assert_eq!(a.to_string(), a.name());
    }
    assert_eq!(Algorithm::parse("Label-Propagation").unwrap(), Algorithm::LabelPropagation);
    assert!(Algorithm::parse("kmeans").unwrap_err().is_argument());
}

#[test]
fn empty_graph_is_an_argument_error() {
    for a in Algorithm::ALL {
        let err = detect(a, &Graph::empty(0), &DetectorParams::default(), RngStream::default()).unwrap_err();
        assert!(err.is_argument(), "{a}");
    }
}

#[test]
fn invalid_params_are_rejected() {
    let params = DetectorParams {
        walktrap_steps: 0,
        ..Default::default()
    };
    for a in Algorithm::ALL {
        assert!(detect(a, &two_triangles(), &params, RngStream::default()).is_err(), "{a}");
    }
}

#[test]
fn two_triangles_split_into_components() {
    for a in Algorithm::ALL {
        for seed in 0..3 {
            let p = run(a, &two_triangles(), seed);
            assert_eq!(p.canonical(), vec![vec![0, 1, 2], vec![3, 4, 5]], "{a}");
        }
    }
}

#[test]
fn g6_recovers_the_two_triangles() {
    let g = two_triangle_bridge();
    for a in Algorithm::ALL {
        let p = run(a, &g, 7);
        assert_eq!(p.canonical(), vec![vec![0, 1, 2], vec![3, 4, 5]], "{a}");
        assert!((modularity(&g, &p).unwrap() - 5.0 / 14.0).abs() < 1e-12, "{a}");
    }
    assert!((brute_force_max_modularity(&g) - 5.0 / 14.0).abs() < 1e-12);
}

#[test]
fn valid_partitions_on_degenerate_inputs() {
    let graphs = [
        Graph::empty(1),
        Graph::empty(5),
        Graph::complete(2),
        Graph::complete(7),
        star(6),
        path(5),
        Graph::from_edges(5, &[(0, 1), (2, 3)]).unwrap(),
    ];
    for g in &graphs {
        for a in Algorithm::ALL {
            let out = detect(a, g, &DetectorParams::default(), RngStream::new(1, 0)).unwrap();
            let p = out.partition;
            assert_eq!(p.len(), g.node_count(), "{a}");
            assert!(p.community_count() >= 1 && p.community_count() <= g.node_count());
            assert_eq!(Partition::from_labels(p.membership()), p, "{a}: ids not dense");
            assert_eq!(out.dendrogram.is_some(), a.is_hierarchical());
        }
    }
}

#[test]
fn never_beats_the_enumeration_oracle() {
    for seed in 0..12 {
        let n = 5 + seed as usize % 4;
        let g = erdos_renyi(n, 0.45, RngStream::new(seed, 5)).unwrap();
        if g.edge_count() == 0 {
            continue;
        }
        let best = brute_force_max_modularity(&g);
        for a in Algorithm::ALL.into_iter().filter(|&a| is_modularity_based(a)) {
            let q = modularity(&g, &run(a, &g, seed)).unwrap();
            assert!(q <= best + 1e-12, "{a}: {q} > {best}");
        }
    }
}

#[test]
fn fixed_stream_is_deterministic() {
    let g = girvan_newman(6.0, RngStream::new(9, 0)).unwrap().graph;
    for a in Algorithm::ALL {
        let first = run(a, &g, 4);
        let second = run(a, &g, 4);
        assert_eq!(first, second, "{a}");
    }
}

#[test]
fn deterministic_detectors_are_permutation_equivariant() {
    // Graphs without automorphisms or exact ties: a GN instance with mixed
    // degrees. The permuted result must be the image of the original.
    let g = girvan_newman(3.0, RngStream::new(21, 0)).unwrap().graph;
    let n = g.node_count();
    let mut perm: Vec<usize> = (0..n).collect();
    use rand::seq::SliceRandom;
    perm.shuffle(&mut RngStream::new(99, 0).rng());
    let h = g.permute(&perm);
    for a in [Algorithm::LeadingEigenvector, Algorithm::Mcl, Algorithm::WalkTrap] {
        let p = run(a, &g, 0);
        let q = run(a, &h, 0);
        assert!(p.permute(&perm).same_grouping(&q), "{a}");
    }
    for a in [Algorithm::FastGreedy, Algorithm::Radetal] {
        // Integer-valued criteria tie often; the chosen cut's quality must
        // still be invariant.
        let qp = modularity(&g, &run(a, &g, 0)).unwrap();
        let qh = modularity(&h, &run(a, &h, 0)).unwrap();
        assert!((qp - qh).abs() < 0.05, "{a}: {qp} vs {qh}");
    }
}

#[test]
fn girvan_newman_low_mixing_is_recovered() {
    for a in Algorithm::ALL {
        let mut total = 0.0;
        for seed in 0..10 {
            let net = girvan_newman(1.0, RngStream::new(seed, 0)).unwrap();
            let p = run(a, &net.graph, seed);
            total += mutual_information_stats(&p, &net.planted).unwrap().nmi;
        }
        let mean = total / 10.0;
        assert!(mean >= 0.95, "{a}: mean NMI {mean}");
    }
}
