//! `{p,q}` tessellations and Cayley trees embedded in the Poincaré disk,
//! graph balls, and family-induced vertex signs.

mod klein;

use std::collections::{HashMap, HashSet, VecDeque};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::SignedGeodesicFamily;
use crate::hypgeo::{Geodesic, Isometry, Model, ModelPoint};

pub use klein::{klein, segments_cross};

type P = ModelPoint<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TilingError {
    #[error("1/p + 1/q = {0} is not below 1/2")]
    NotHyperbolic(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("ball of radius {radius} needs vertices past the generated patch")]
    RadiusExceedsGeneration { radius: usize },
    #[error("a vertex stays on a family geodesic after perturbation")]
    DegenerateIncidence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphKind {
    Tessellation { p: usize, q: usize },
    Tree { n: usize },
}

/// An embedded planar graph in the disk model.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeGraph {
    pub kind: GraphKind,
    pub generations: usize,
    /// Disk-model coordinates.
    pub coords: Vec<P>,
    /// Growth layer in which each vertex appeared.
    pub generation: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    /// Counterclockwise vertex cycles; empty for trees.
    pub faces: Vec<Vec<usize>>,
    /// Sorted neighbour lists.
    pub adjacency: Vec<Vec<usize>>,
    /// Tree children left to right as seen looking outward from the root
    /// (clockwise about the parent); empty for tessellations.
    pub children: Vec<Vec<usize>>,
}

impl LatticeGraph {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Whether every neighbour of `v` in the infinite lattice is present.
    pub fn is_complete(&self, v: usize) -> bool {
        match self.kind {
            GraphKind::Tessellation { q, .. } => self.faces_at(v) == q,
            GraphKind::Tree { .. } => self.generation[v] < self.generations,
        }
    }

    fn faces_at(&self, v: usize) -> usize {
        self.faces.iter().filter(|f| f.contains(&v)).count()
    }

    /// Vertex nearest to a disk point.
    pub fn nearest_vertex(&self, p: &P) -> usize {
        let p = p.to_model(Model::Disk);
        (0..self.len())
            .min_by(|&a, &b| {
                let da = (self.coords[a].x - p.x).hypot(self.coords[a].y - p.y);
                let db = (self.coords[b].x - p.x).hypot(self.coords[b].y - p.y);
                da.total_cmp(&db)
            })
            .expect("non-empty graph")
    }

    /// Breadth-first graph distances from `source` (`usize::MAX` if unreachable).
    pub fn distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub(crate) fn from_parts(kind: GraphKind, generations: usize, coords: Vec<P>, generation: Vec<usize>, faces: Vec<Vec<usize>>, edges: Vec<(usize, usize)>, children: Vec<Vec<usize>>) -> Self {
        let mut adjacency = vec![Vec::new(); coords.len()];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self { kind, generations, coords, generation, edges, faces, adjacency, children }
    }
}

/// Spatial hash over disk coordinates for vertex deduplication.
struct PointIndex {
    cell: f64,
    tol: f64,
    map: HashMap<(i64, i64), Vec<usize>>,
}

impl PointIndex {
    fn new(tol: f64) -> Self {
        Self { cell: tol * 100.0, tol, map: HashMap::new() }
    }

    fn key(&self, p: &P) -> (i64, i64) {
        ((p.x / self.cell).floor() as i64, (p.y / self.cell).floor() as i64)
    }

    fn find(&self, p: &P, coords: &[P]) -> Option<usize> {
        let (kx, ky) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = self.map.get(&(kx + dx, ky + dy)) {
                    for &i in list {
                        if (coords[i].x - p.x).hypot(coords[i].y - p.y) <= self.tol {
                            return Some(i);
                        }
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, p: &P, idx: usize) {
        let k = self.key(p);
        self.map.entry(k).or_default().push(idx);
    }
}

/// Regular `{p,q}` tessellation grown from a `p`-gon centred at the disk
/// origin. Each generation adds every face touching a vertex present at the
/// start of that generation.
pub fn build_tiling(p: usize, q: usize, generations: usize) -> Result<LatticeGraph, TilingError> {
    if p < 3 || q < 3 {
        return Err(TilingError::InvalidParameter(format!("p = {p}, q = {q}; both must be at least 3")));
    }
    let s = 1.0 / p as f64 + 1.0 / q as f64;
    if s >= 0.5 {
        return Err(TilingError::NotHyperbolic(s));
    }
    // circumradius: cosh R = cot(π/p)·cot(π/q)
    let cosh_r = 1.0 / ((PI / p as f64).tan() * (PI / q as f64).tan());
    let rho = (cosh_r.acosh() / 2.0).tanh();
    let mut coords: Vec<P> = (0..p)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / p as f64;
            ModelPoint::disk(rho * t.cos(), rho * t.sin())
        })
        .collect();
    let mut generation = vec![0usize; p];
    let mut index = PointIndex::new(1e-8);
    for (i, c) in coords.iter().enumerate() {
        index.insert(c, i);
    }
    let mut faces: Vec<Vec<usize>> = vec![(0..p).collect()];
    let mut face_keys: HashSet<Vec<usize>> = HashSet::from([sorted((0..p).collect())]);

    for gen in 1..=generations {
        let layer: HashSet<usize> = (0..coords.len()).collect();
        let mut queue: VecDeque<usize> = (0..faces.len()).filter(|&f| faces[f].iter().any(|v| layer.contains(v))).collect();
        while let Some(fi) = queue.pop_front() {
            let face = faces[fi].clone();
            for e in 0..p {
                let (a, b) = (face[e], face[(e + 1) % p]);
                if !layer.contains(&a) && !layer.contains(&b) {
                    continue;
                }
                let mirror = Geodesic::through(&coords[a], &coords[b]).expect("distinct vertices");
                let refl = Isometry::reflection(&mirror);
                let mut img = Vec::with_capacity(p);
                for &v in &face {
                    let w = if v == a || v == b { v } else {
                        let pt = refl.apply_point(&coords[v]);
                        match index.find(&pt, &coords) {
                            Some(i) => i,
                            None => {
                                coords.push(pt);
                                generation.push(gen);
                                index.insert(&pt, coords.len() - 1);
                                coords.len() - 1
                            }
                        }
                    };
                    img.push(w);
                }
                if face_keys.insert(sorted(img.clone())) {
                    img.reverse();
                    faces.push(img);
                    queue.push_back(faces.len() - 1);
                }
            }
        }
    }
    let mut edges: Vec<(usize, usize)> = faces
        .iter()
        .flat_map(|f| (0..f.len()).map(move |i| (f[i].min(f[(i + 1) % f.len()]), f[i].max(f[(i + 1) % f.len()]))))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(LatticeGraph::from_parts(GraphKind::Tessellation { p, q }, generations, coords, generation, faces, edges, Vec::new()))
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Cayley tree in which every vertex has `n + 1` neighbours, cut at `depth`.
///
/// Each vertex owns an angular sector split evenly among its children, which
/// are stored clockwise, so ids within a generation run left to right. A
/// vertex of generation `g` sits at hyperbolic distance `g` from the origin.
pub fn build_cayley_tree(n: usize, depth: usize) -> Result<LatticeGraph, TilingError> {
    if n < 2 {
        return Err(TilingError::InvalidParameter(format!("n = {n}; must be at least 2")));
    }
    let mut coords = vec![ModelPoint::disk(0.0, 0.0)];
    let mut generation = vec![0usize];
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut sector = vec![(0.0f64, 2.0 * PI)];
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    for g in 1..=depth {
        let rad = (g as f64 / 2.0).tanh();
        let mut next = Vec::new();
        for &v in &frontier {
            let (lo, hi) = sector[v];
            let k = if v == 0 { n + 1 } else { n };
            let w = (hi - lo) / k as f64;
            for c in 0..k {
                let (a, b) = (hi - w * (c + 1) as f64, hi - w * c as f64);
                let t = (a + b) / 2.0;
                let id = coords.len();
                coords.push(ModelPoint::disk(rad * t.cos(), rad * t.sin()));
                generation.push(g);
                children.push(Vec::new());
                sector.push((a, b));
                children[v].push(id);
                edges.push((v, id));
                next.push(id);
            }
        }
        frontier = next;
    }
    Ok(LatticeGraph::from_parts(GraphKind::Tree { n }, depth, coords, generation, Vec::new(), edges, children))
}

/// A finite box: `interior` vertices and the `boundary` layer around them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxRegion {
    pub center: usize,
    pub radius: usize,
    pub interior: Vec<usize>,
    pub boundary: Vec<usize>,
}

impl BoxRegion {
    pub fn contains(&self, v: usize) -> bool {
        self.interior.binary_search(&v).is_ok() || self.boundary.binary_search(&v).is_ok()
    }

    pub fn is_interior(&self, v: usize) -> bool {
        self.interior.binary_search(&v).is_ok()
    }
}

/// Vertices within graph distance `radius` of `center`, and their outer neighbours.
pub fn graph_ball(graph: &LatticeGraph, center: usize, radius: usize) -> Result<BoxRegion, TilingError> {
    if center >= graph.len() {
        return Err(TilingError::InvalidParameter(format!("center {center} out of range")));
    }
    let dist = graph.distances(center);
    let mut interior: Vec<usize> = (0..graph.len()).filter(|&v| dist[v] <= radius).collect();
    if interior.iter().any(|&v| !graph.is_complete(v)) {
        return Err(TilingError::RadiusExceedsGeneration { radius });
    }
    let mut boundary: Vec<usize> = (0..graph.len()).filter(|&v| dist[v] == radius + 1).collect();
    interior.sort_unstable();
    boundary.sort_unstable();
    Ok(BoxRegion { center, radius, interior, boundary })
}

/// Region signs of every vertex under a signed family.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySpinAssignment {
    pub spins: Vec<i8>,
    /// Tiny isometry applied to the family when a vertex sat on a curve.
    pub perturbation: Option<Isometry<f64>>,
}

/// Sign of each vertex's region. A vertex lying on a family geodesic triggers
/// a deterministic shift of the family by `10⁻⁶·k` along one of a few fixed
/// generic axes.
pub fn assign_signs(graph: &LatticeGraph, family: &SignedGeodesicFamily) -> Result<BoundarySpinAssignment, TilingError> {
    let attempt = |fam: &SignedGeodesicFamily| -> Option<Vec<i8>> {
        use rayon::prelude::*;
        graph.coords.par_iter().map(|c| fam.sign(c)).collect()
    };
    if let Some(spins) = attempt(family) {
        return Ok(BoundarySpinAssignment { spins, perturbation: None });
    }
    for k in 1..=5 {
        let axis = Geodesic::semicircle(-0.731 - 0.1 * k as f64, 1.413 + 0.05 * k as f64).expect("distinct ends");
        let iso = Isometry::translation(&axis, 1e-6 * k as f64);
        let mut fam = family.clone();
        fam.geodesics = fam.geodesics.iter().map(|g| iso.apply_geodesic(g)).collect();
        fam.base_point = iso.apply_point(&fam.base_point);
        if let Some(spins) = attempt(&fam) {
            return Ok(BoundarySpinAssignment { spins, perturbation: Some(iso) });
        }
    }
    Err(TilingError::DegenerateIncidence)
}
