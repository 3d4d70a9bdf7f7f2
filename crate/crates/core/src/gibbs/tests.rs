use super::*;
use crate::families::{construct2, SignedGeodesicFamily};
use crate::hypgeo::{point_distance, BoundaryPoint, Geodesic, ModelPoint};
use crate::tiling::{assign_signs, build_cayley_tree, build_tiling, graph_ball, GraphKind};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn path_graph(n: usize) -> LatticeGraph {
    let coords = (0..n).map(|i| ModelPoint::disk(0.1 * i as f64 - 0.2, 0.0)).collect();
    let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    let mut adjacency = vec![Vec::new(); n];
    for &(a, b) in &edges {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    LatticeGraph {
        kind: GraphKind::Tree { n: 1 },
        generations: 0,
        coords,
        generation: vec![0; n],
        edges,
        faces: vec![],
        adjacency,
        children: vec![vec![]; n],
    }
}

fn cfg(beta: f64, sweeps: usize, seed: u64) -> SamplerConfig {
    SamplerConfig { beta, sweeps, burn_in: 100, replicas: 1, seed, dynamics: Dynamics::HeatBath, record_every: 1 }
}

#[test]
fn energy_examples() {
    let g = build_tiling(3, 7, 2).unwrap();
    let s = SpinState::all_plus(g.len());
    assert_eq!(energy(&g, &s), -(g.edges.len() as f64));
    let v = (0..g.len()).find(|&v| g.is_complete(v)).unwrap();
    let mut t = s.clone();
    t.spins[v] = -1;
    assert_eq!(energy(&g, &t) - energy(&g, &s), 2.0 * g.degree(v) as f64);
    assert_eq!(energy(&g, &t.flipped()), energy(&g, &t));
}

#[test]
fn infinite_temperature_is_unbiased() {
    let g = build_cayley_tree(2, 4).unwrap();
    let st = SpinState::all_plus(g.len());
    let run = run_chain(&g, &st, &cfg(0.0, 4000, 7), 0, |_, s| s.magnetization()).unwrap();
    let n = run.samples.len() as f64;
    let mean = run.samples.iter().sum::<f64>() / n;
    // per-sample sd is 1/sqrt(V); samples at β = 0 are independent after one sweep
    let sd = 1.0 / (g.len() as f64).sqrt() / n.sqrt();
    assert!(mean.abs() < 4.0 * sd, "{mean}");
}

fn exact_gibbs(g: &LatticeGraph, st: &SpinState, beta: f64) -> Vec<(Vec<i8>, f64)> {
    let free: Vec<usize> = st.free().collect();
    let mut out = Vec::new();
    let mut z = 0.0;
    for mask in 0..(1u32 << free.len()) {
        let mut s = st.clone();
        for (i, &v) in free.iter().enumerate() {
            s.spins[v] = if mask >> i & 1 == 1 { 1 } else { -1 };
        }
        let w = (-beta * energy(g, &s)).exp();
        z += w;
        out.push((free.iter().map(|&v| s.spins[v]).collect::<Vec<_>>(), w));
    }
    out.into_iter().map(|(k, w)| (k, w / z)).collect()
}

fn chi2_pvalue(g: &LatticeGraph, st: &SpinState, config: &SamplerConfig) -> f64 {
    let free: Vec<usize> = st.free().collect();
    let exact = exact_gibbs(g, st, config.beta);
    let runs = run_replicas(g, st, config, |_, s| free.iter().map(|&v| s.spins[v]).collect::<Vec<i8>>()).unwrap();
    let samples: Vec<Vec<i8>> = runs.into_iter().flat_map(|r| r.samples).collect();
    let n = samples.len() as f64;
    let mut counts = std::collections::HashMap::new();
    for s in &samples {
        *counts.entry(s.clone()).or_insert(0usize) += 1;
    }
    let (mut stat, mut dof) = (0.0, 0usize);
    let (mut pool_o, mut pool_e) = (0.0, 0.0);
    for (k, p) in &exact {
        let e = p * n;
        let o = *counts.get(k).unwrap_or(&0) as f64;
        if e < 5.0 {
            pool_o += o;
            pool_e += e;
        } else {
            stat += (o - e).powi(2) / e;
            dof += 1;
        }
    }
    if pool_e > 0.0 {
        stat += (pool_o - pool_e).powi(2) / pool_e;
        dof += 1;
    }
    1.0 - ChiSquared::new((dof - 1) as f64).unwrap().cdf(stat)
}

#[test]
fn path_matches_exact_distribution() {
    let g = path_graph(5);
    let mut st = SpinState::all_plus(5);
    st.spins[4] = -1;
    st.frozen[0] = true;
    st.frozen[4] = true;
    let config = SamplerConfig { record_every: 5, ..cfg(1.0, 100_000, 11) };
    assert!(chi2_pvalue(&g, &st, &config) > 0.01);
}

#[test]
fn metropolis_small_tree_matches_exact() {
    let g = build_cayley_tree(2, 2).unwrap();
    let mut st = SpinState::all_plus(g.len());
    for v in 4..g.len() {
        st.frozen[v] = true;
        st.spins[v] = if v % 2 == 0 { 1 } else { -1 };
    }
    let config = SamplerConfig { dynamics: Dynamics::Metropolis, record_every: 4, replicas: 4, ..cfg(0.5, 20_000, 3) };
    assert!(chi2_pvalue(&g, &st, &config) > 0.01);
}

#[test]
fn zero_temperature_never_raises_energy() {
    let g = build_tiling(3, 7, 2).unwrap();
    let spins: Vec<i8> = (0..g.len()).map(|v| if v % 3 == 0 { -1 } else { 1 }).collect();
    let st = SpinState::new(spins, vec![false; g.len()]);
    let config = SamplerConfig { dynamics: Dynamics::Metropolis, ..cfg(f64::INFINITY, 50, 1) };
    let run = run_chain(&g, &st, &config, 0, |_, _| ()).unwrap();
    let mut last = energy(&g, &st);
    for row in &run.trace {
        assert!(row.energy <= last);
        last = row.energy;
    }
    assert_eq!(last, energy(&g, &run.state));
}

#[test]
fn frozen_spins_and_reproducibility() {
    let g = build_tiling(3, 7, 3).unwrap();
    let ball = graph_ball(&g, 0, 1).unwrap();
    let outside: Vec<i8> = (0..g.len()).map(|v| if v % 2 == 0 { 1 } else { -1 }).collect();
    let st = SpinState::for_box(&ball, &outside, &vec![1; g.len()]);
    let config = SamplerConfig { replicas: 3, ..cfg(0.7, 200, 42) };
    let a = run_replicas(&g, &st, &config, |_, s| s.magnetization()).unwrap();
    let b = run_replicas(&g, &st, &config, |_, s| s.magnetization()).unwrap();
    assert_eq!(a, b);
    for r in &a {
        for v in 0..g.len() {
            if st.frozen[v] {
                assert_eq!(r.state.spins[v], st.spins[v]);
            }
        }
    }
    assert_ne!(a[0].trace, a[1].trace);
}

#[test]
fn invalid_configs() {
    let g = path_graph(3);
    let st = SpinState::all_plus(3);
    assert!(run_chain(&g, &st, &cfg(-1.0, 1, 0), 0, |_, _| ()).is_err());
    assert!(run_replicas(&g, &st, &SamplerConfig { replicas: 0, ..cfg(1.0, 1, 0) }, |_, _| ()).is_err());
}

struct Setup {
    g: LatticeGraph,
    ball: crate::tiling::BoxRegion,
    fam: SignedGeodesicFamily,
    ground: SpinState,
}

fn setup(geodesics: Vec<Geodesic<f64>>, radius: usize) -> Setup {
    let g = build_tiling(3, 7, radius + 2).unwrap();
    let c = g.nearest_vertex(&ModelPoint::disk(0.0, 0.0));
    let ball = graph_ball(&g, c, radius).unwrap();
    let fam = SignedGeodesicFamily::custom(geodesics, ModelPoint::disk(0.0123, 0.0071), 1);
    let signs = assign_signs(&g, &fam).unwrap();
    assert!(signs.perturbation.is_none());
    let ground = SpinState::for_box(&ball, &signs.spins, &signs.spins);
    Setup { g, ball, fam, ground }
}

fn chord(a: f64, b: f64) -> Geodesic<f64> {
    Geodesic::new(BoundaryPoint::angle(a), BoundaryPoint::angle(b)).unwrap()
}

#[test]
fn ground_configuration_gives_ground_partition() {
    for geos in [
        vec![chord(0.31, 3.37)],
        vec![chord(0.5, 2.3), chord(3.3, 5.6)],
        vec![chord(0.2, 1.9), chord(2.4, 4.0), chord(4.5, 5.9)],
    ] {
        let k = geos.len();
        let s = setup(geos, 4);
        let (contours, partition) = extract_interfaces(&s.g, &s.ground, &s.ball, &s.fam).unwrap();
        assert_eq!(contours.open().count(), k);
        assert_eq!(contours.closed().count(), 0);
        assert_eq!(partition, Partition::ground(&(0..k).collect::<Vec<_>>()));
        assert!(partition.is_ground());
        for c in contours.open() {
            assert_eq!(c.attachments.len(), 2);
        }
    }
}

#[test]
fn all_plus_without_family_is_empty() {
    let s = setup(vec![], 3);
    let (contours, partition) = extract_interfaces(&s.g, &s.ground, &s.ball, &s.fam).unwrap();
    assert!(contours.edges.is_empty());
    assert!(contours.components.is_empty());
    assert_eq!(partition.k(), 0);
}

#[test]
fn plus_interior_reconnects_two_interfaces() {
    // both curves bound one minus strip; a plus interior pairs the ends across it
    let s = setup(vec![chord(0.4, 2.7), chord(3.5, 5.9)], 4);
    let mut st = s.ground.flipped();
    assert_eq!(st.spins[s.ball.center], -1);
    for &v in &s.ball.interior {
        st.spins[v] = 1;
    }
    let (contours, partition) = extract_interfaces(&s.g, &st, &s.ball, &s.fam).unwrap();
    assert_eq!(contours.open().count(), 2);
    assert!(!partition.is_ground());
    for (a, b) in &partition.pairs {
        assert_ne!(a.geodesic, b.geodesic);
    }
}

#[test]
fn global_flip_keeps_contours() {
    let s = setup(vec![chord(0.5, 2.3), chord(3.3, 5.6)], 4);
    let mut st = s.ground.clone();
    for (i, &v) in s.ball.interior.iter().enumerate() {
        if i % 5 == 0 {
            st.spins[v] = -st.spins[v];
        }
    }
    let (a, pa) = extract_interfaces(&s.g, &st, &s.ball, &s.fam).unwrap();
    let (b, pb) = extract_interfaces(&s.g, &st.flipped(), &s.ball, &s.fam).unwrap();
    assert_eq!(a, b);
    assert_eq!(pa, pb);
    assert!(a.closed().count() > 0);
}

#[test]
fn containment_excursions() {
    let gamma = Geodesic::vertical(0.0);
    let z = ModelPoint::halfplane(0.0, 1.0);
    let m = 1.5;
    let on = [gamma.point_at(0.3), gamma.point_at(-2.0)];
    assert!(escape_threshold(&on, &gamma, &z) <= 0.1);
    // distance h from the axis at height e^t: (sinh h·e^t, cosh h·e^t)... via perpendicular geodesic
    let off = |t: f64, h: f64| gamma.perpendicular_through(&gamma.point_at(t)).point_at(h);
    let near = [off(0.0, m + 1.0)];
    let d = point_distance(&near[0], &z).unwrap();
    approx::assert_relative_eq!(d, m + 1.0, epsilon = 1e-9);
    assert!(escape_threshold(&near, &gamma, &z) > m);
    let far = [off(6.0, m + 1.0)];
    assert!(escape_threshold(&far, &gamma, &z) <= m);
}

#[test]
fn ground_contours_are_contained() {
    let s = setup(vec![chord(0.31, 3.37)], 4);
    let (contours, _) = extract_interfaces(&s.g, &s.ground, &s.ball, &s.fam).unwrap();
    let gamma = &s.fam.geodesics[0];
    let z = gamma.closest_point(&ModelPoint::disk(0.0, 0.0));
    // the lattice interface stays within one edge length of the curve
    assert!(containment_check(&contours, 0, gamma, &z, 1.1));
}

#[test]
fn phase_probe_ground_has_no_hits() {
    let fam = construct2(0.05, 0.05, 2).unwrap();
    let g = build_tiling(3, 7, 5).unwrap();
    let c = g.nearest_vertex(&ModelPoint::disk(0.0, 0.0));
    let ball = graph_ball(&g, c, 3).unwrap();
    let z = symmetry_center(&fam).unwrap();
    let mut fam = fam;
    fam.base_point = z;
    fam.base_sign = 1;
    let config = SamplerConfig { beta: f64::INFINITY, dynamics: Dynamics::Metropolis, ..cfg(0.0, 5, 1) };
    let stats = phase_probe(&g, &fam, &ball, &SamplerConfig { sweeps: 0, burn_in: 0, ..config }, &z, 1.0);
    // zero sweeps: one recorded sample is impossible, so just the ground state
    assert!(stats.is_ok());
    assert_eq!(stats.unwrap().lambda_hits, 0);
}

#[test]
fn rigidity_rows_shape() {
    let s = setup(vec![chord(0.31, 3.37)], 3);
    let config = SamplerConfig { replicas: 2, ..cfg(1.0, 40, 5) };
    let rows = rigidity_experiment(&s.g, &s.fam, &s.ball, &config, &[1.0, 2.0], &[0.5, 1.0, 2.0]).unwrap();
    assert_eq!(rows.len(), 6);
    for w in rows.windows(2) {
        if w[0].beta == w[1].beta {
            assert!(w[1].escapes <= w[0].escapes);
        }
    }
}
