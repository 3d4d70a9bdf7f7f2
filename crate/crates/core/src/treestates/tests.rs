use super::*;
use crate::gibbs::{energy, Dynamics, SamplerConfig};
use crate::tiling::build_cayley_tree;
use proptest::prelude::*;
use std::collections::HashSet;

fn t2(depth: usize) -> LatticeGraph {
    build_cayley_tree(2, depth).unwrap()
}

#[test]
fn first_six_chains_follow_the_greedy_rule() {
    let t = t2(6);
    let cov = left_greedy_covering(&t, 3).unwrap();
    let starts: Vec<usize> = cov.chains.iter().take(6).map(|c| t.generation[c.vertices[0]]).collect();
    assert_eq!(starts, vec![0, 1, 1, 2, 2, 2]);
    // chain 1 runs down leftmost children from the root
    let c0 = &cov.chains[0].vertices;
    assert_eq!(c0.len(), 4);
    for w in c0.windows(2) {
        assert_eq!(t.children[w[0]][0], w[1]);
    }
    // chain 4 starts at the root's leftmost child's right child
    assert_eq!(cov.chains[3].vertices[0], t.children[t.children[0][0]][1]);
    assert_eq!(cov, left_greedy_covering(&t, 3).unwrap());
}

#[test]
fn covering_partitions_vertices() {
    for (n, depth, k) in [(2, 7, 3), (2, 8, 5), (3, 5, 3), (2, 4, 1)] {
        let t = build_cayley_tree(n, depth).unwrap();
        let cov = left_greedy_covering(&t, k).unwrap();
        let mut seen = vec![false; t.len()];
        let mut total = 0;
        for (c, &tr) in cov.chains.iter().zip(&cov.truncated) {
            total += c.vertices.len();
            for w in c.vertices.windows(2) {
                assert!(t.adjacency[w[0]].contains(&w[1]));
            }
            for &v in &c.vertices {
                assert!(!seen[v]);
                seen[v] = true;
            }
            assert_eq!(tr, c.bonds() < k);
        }
        assert_eq!(total, t.len());
    }
    assert!(matches!(left_greedy_covering(&t2(2), 3), Err(TreeError::DepthTooSmall { .. })));
}

#[test]
fn middle_dimer_positions() {
    let t = t2(6);
    let cov = left_greedy_covering(&t, 3).unwrap();
    let d = middle_dimers(&cov).unwrap();
    let c = &cov.chains[0].vertices;
    assert!(d.contains(c[1], c[2]));
    assert!(!d.contains(c[0], c[1]));
    let mut used = HashSet::new();
    for &(u, v) in &d.dimers {
        assert!(used.insert(u) && used.insert(v));
    }
    let cov2 = left_greedy_covering(&t, 2).unwrap();
    assert_eq!(middle_dimers(&cov2), Err(TreeError::KEven(2)));
}

#[test]
fn offset_dimer_conventions() {
    let t = t2(9);
    let cov = left_greedy_covering(&t, 5).unwrap();
    let mid = middle_dimers(&cov).unwrap();
    assert_eq!(offset_dimers(&t, &cov, 3, 3).unwrap().dimers, mid.dimers);
    assert!(matches!(offset_dimers(&t, &cov, 2, 4), Err(TreeError::BadOffsets { .. })));
    assert!(matches!(offset_dimers(&t, &cov, 4, 1), Err(TreeError::BadOffsets { .. })));
    let d = offset_dimers(&t, &cov, 4, 2).unwrap();
    let sigma = sigma_from_dimers(&t, &mid, 1);
    for (c, &tr) in cov.chains.iter().zip(&cov.truncated) {
        if tr {
            continue;
        }
        let x = &c.vertices;
        let pos = (0..5).find(|&i| d.contains(x[i], x[i + 1])).unwrap();
        // bonds counted inclusively from each end add up to k + 1
        let (from_plus, from_minus) = if sigma.spins[x[0]] == 1 { (pos + 1, 5 - pos) } else { (5 - pos, pos + 1) };
        assert_eq!((from_plus, from_minus), (4, 2));
        assert_eq!(from_plus + from_minus, 6);
    }
}

#[test]
fn sigma_edge_rule_and_gauge() {
    let t = t2(8);
    let cov = left_greedy_covering(&t, 5).unwrap();
    let d = middle_dimers(&cov).unwrap();
    let a = sigma_from_dimers(&t, &d, 1);
    let b = sigma_from_dimers(&t, &d, -1);
    for &(u, v) in &t.edges {
        assert_eq!(a.spins[u] * a.spins[v] == -1, d.contains(u, v));
    }
    assert_eq!(a.flipped().spins, b.spins);
    let empty = DimerSet { dimers: vec![], provenance: Provenance::Middle };
    assert!(sigma_from_dimers(&t, &empty, 1).spins.iter().all(|&s| s == 1));
    // a ground state: energy −E + 2|D|
    assert_eq!(energy(&t, &a), -(t.edges.len() as f64) + 2.0 * d.len() as f64);
}

#[test]
fn magnetization_profiles() {
    let t = t2(17);
    assert_eq!(tree_magnetization(&t, &crate::gibbs::SpinState::all_plus(t.len()), 5), 1.0);
    let cov = left_greedy_covering(&t, 5).unwrap();
    let mid = sigma_from_dimers(&t, &middle_dimers(&cov).unwrap(), 1);
    let off = sigma_from_dimers(&t, &offset_dimers(&t, &cov, 4, 2).unwrap(), 1);
    let mut last = f64::INFINITY;
    for depth in 8..=12 {
        let a = tree_magnetization(&t, &mid, depth).abs();
        let b = tree_magnetization(&t, &off, depth).abs();
        assert!(a < last);
        last = a;
        assert!(b > 0.4 && b > a + 0.3);
    }
}

fn brute_max(t: &LatticeGraph, d: &DimerSet, max: usize, root_only: bool) -> Vec<f64> {
    // grow sets by adding one allowed neighbour at a time, dedupe by sorted key
    let allowed = |v: usize| t.generation[v] < t.generations;
    let mut best = vec![0.0; max + 1];
    let mut layer: HashSet<Vec<usize>> =
        (0..t.len()).filter(|&v| allowed(v) && (!root_only || v == 0)).map(|v| vec![v]).collect();
    for s in 1..=max {
        for set in &layer {
            let c = TreeContour::new(t, set.clone());
            assert_eq!(c.boundary.len(), s + 2);
            best[s] = f64::max(best[s], c.ratio(d));
        }
        if s == max {
            break;
        }
        let mut next = HashSet::new();
        for set in &layer {
            for &v in set {
                for &w in &t.adjacency[v] {
                    if allowed(w) && !set.contains(&w) {
                        let mut n = set.clone();
                        n.push(w);
                        n.sort_unstable();
                        next.insert(n);
                    }
                }
            }
        }
        layer = next;
    }
    best
}

#[test]
fn enumeration_and_knapsack_agree_with_brute_force() {
    let t = t2(7);
    let cov = left_greedy_covering(&t, 3).unwrap();
    let d = middle_dimers(&cov).unwrap();
    let rep = peierls_ratio(&t, &d, 6).unwrap();
    let root = brute_max(&t, &d, 6, true);
    let all = brute_max(&t, &d, 6, false);
    for row in &rep.sizes {
        assert!((row.max_ratio_root - root[row.size]).abs() < 1e-12, "size {}", row.size);
        assert!((row.max_ratio_all - all[row.size]).abs() < 1e-12, "size {}", row.size);
    }
    // rooted subtree counts of T₂: 1, 3, 9, 28
    let counts: Vec<u64> = rep.sizes.iter().map(|r| r.count).take(4).collect();
    assert_eq!(counts, vec![1, 3, 9, 28]);
    assert!((rep.all_anchor.contour.ratio(&d) - rep.all_anchor.ratio).abs() < 1e-12);
    assert!((rep.root.contour.ratio(&d) - rep.root.ratio).abs() < 1e-12);
    assert!(rep.root.contour.enclosed.contains(&0));
}

#[test]
fn small_root_sets_see_no_dimers() {
    let t = t2(9);
    let cov = left_greedy_covering(&t, 5).unwrap();
    let d = middle_dimers(&cov).unwrap();
    let rep = peierls_ratio(&t, &d, 8).unwrap();
    for row in rep.sizes.iter().take(2) {
        assert_eq!(row.max_ratio_root, 0.0);
    }
    assert!(rep.root.ratio <= 1.0 / 3.0 + 1e-12);
}

#[test]
fn dimer_covering_breaks_peierls() {
    let t = t2(8);
    let cov = left_greedy_covering(&t, 1).unwrap();
    let d = middle_dimers(&cov).unwrap();
    let rep = peierls_ratio(&t, &d, 6).unwrap();
    assert!(rep.all_anchor.ratio >= 0.5);
}

#[test]
fn dimer_paths() {
    let t = t2(9);
    let cov = left_greedy_covering(&t, 5).unwrap();
    let d = middle_dimers(&cov).unwrap();
    let one = path_ratio_witness(&t, &d, 1).unwrap();
    assert_eq!(one.len(), 1);
    assert!(d.contains(one[0].0, one[0].1));
    let two = path_ratio_witness(&t, &d, 2).unwrap();
    assert!(two.iter().all(|&(u, v)| d.contains(u, v)));
    let empty = DimerSet { dimers: vec![], provenance: Provenance::Middle };
    assert_eq!(path_ratio_witness(&t, &empty, 1), Err(TreeError::NotFound(1)));
}

#[test]
fn stability_at_zero_and_high_beta() {
    let t = t2(6);
    let cov = left_greedy_covering(&t, 5).unwrap();
    let d = middle_dimers(&cov).unwrap();
    let cfg = SamplerConfig { beta: 0.0, sweeps: 400, burn_in: 50, replicas: 4, seed: 9, dynamics: Dynamics::HeatBath, record_every: 1 };
    let rows = tree_stability_experiment(&t, &d, &cfg, &[0.0, 3.0], 3).unwrap();
    assert!(rows[0].overlap.abs() < 0.15);
    assert!(rows[1].overlap > rows[0].overlap);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rooted_bound_holds(n in 2usize..4, m in 1usize..3) {
        let k = 2 * m + 1;
        let cap = if n == 2 { 8 } else { 6 };
        let depth = (k + 4).max(cap + 1);
        let t = build_cayley_tree(n, depth).unwrap();
        let cov = left_greedy_covering(&t, k).unwrap();
        let d = middle_dimers(&cov).unwrap();
        let rep = peierls_ratio(&t, &d, cap).unwrap();
        prop_assert!(rep.root.ratio <= 1.0 / (m as f64 + 1.0) + 1e-12);
        let sigma = sigma_from_dimers(&t, &d, 1);
        for &(u, v) in &t.edges {
            prop_assert_eq!(sigma.spins[u] != sigma.spins[v], d.contains(u, v));
        }
    }
}
