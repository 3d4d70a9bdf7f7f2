use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GibbsError, SpinState};
use crate::families::SignedGeodesicFamily;
use crate::hypgeo::{point_distance, Geodesic, Model, ModelPoint};
use crate::tiling::{BoxRegion, LatticeGraph};

type P = ModelPoint<f64>;

/// Boundary endpoint label: geodesic index and end (`0` for x′, `1` for x″).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label {
    pub geodesic: usize,
    pub end: u8,
}

/// Pairing of the `2k` boundary labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub pairs: Vec<(Label, Label)>,
}

impl Partition {
    fn canonical(mut pairs: Vec<(Label, Label)>) -> Self {
        for p in &mut pairs {
            if p.1 < p.0 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort();
        Self { pairs }
    }

    /// The ground pairing `{(x_i′, x_i″)}` over the given geodesics.
    pub fn ground(geodesics: &[usize]) -> Self {
        Self::canonical(geodesics.iter().map(|&g| (Label { geodesic: g, end: 0 }, Label { geodesic: g, end: 1 })).collect())
    }

    pub fn is_ground(&self) -> bool {
        self.pairs.iter().all(|(a, b)| a.geodesic == b.geodesic && a.end != b.end)
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    /// Disagreement edges as vertex pairs.
    pub edges: Vec<(usize, usize)>,
    pub open: bool,
    pub attachments: Vec<Label>,
    /// Hyperbolic midpoints of the edges.
    pub dual_points: Vec<P>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourSet {
    /// All disagreement edges in the box, sorted.
    pub edges: Vec<(usize, usize)>,
    pub components: Vec<Component>,
}

impl ContourSet {
    pub fn open(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| c.open)
    }

    pub fn closed(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| !c.open)
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Precomputed box geometry for repeated interface extraction.
#[derive(Debug, Clone)]
pub struct InterfaceContext {
    edges: Vec<(usize, usize)>,
    midpoints: Vec<P>,
    /// In-box faces as cyclic lists of edge indices.
    faces: Vec<Vec<usize>>,
    /// Rim edge index to its label, for rim edges whose ends differ in sign.
    attachments: HashMap<usize, Label>,
    geodesics_on_rim: Vec<usize>,
}

/// Angle of `v` seen from `c` after moving `c` to the disk origin.
fn centered_angle(c: &P, v: &P) -> f64 {
    let (c, v) = (c.to_model(Model::Disk).complex(), v.to_model(Model::Disk).complex());
    let w = (v - c) / (Complex64::new(1.0, 0.0) - c.conj() * v);
    w.arg()
}

fn midpoint(a: &P, b: &P) -> P {
    let g = Geodesic::through(a, b).expect("distinct vertices");
    g.point_at((g.parameter_of(a) + g.parameter_of(b)) / 2.0).to_model(Model::Disk)
}

impl InterfaceContext {
    /// `outside` holds the frozen boundary signs (as from `assign_signs`).
    pub fn new(graph: &LatticeGraph, region: &BoxRegion, family: &SignedGeodesicFamily, outside: &[i8]) -> Result<Self, GibbsError> {
        let inside = |v: usize| region.contains(v);
        let mut edges: Vec<(usize, usize)> = graph.edges.iter().copied().filter(|&(u, v)| inside(u) && inside(v)).collect();
        edges.sort_unstable();
        let index: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let midpoints = edges.iter().map(|&(u, v)| midpoint(&graph.coords[u], &graph.coords[v])).collect();
        let faces: Vec<Vec<usize>> = graph
            .faces
            .iter()
            .filter(|f| f.iter().all(|&v| inside(v)))
            .map(|f| (0..f.len()).map(|i| index[&key(f[i], f[(i + 1) % f.len()])]).collect())
            .collect();

        // rim: boundary vertices in cyclic order around the centre
        let c = &graph.coords[region.center];
        let mut rim = region.boundary.clone();
        rim.sort_by(|&a, &b| centered_angle(c, &graph.coords[a]).total_cmp(&centered_angle(c, &graph.coords[b])));
        let mut crossings: HashMap<usize, Vec<(f64, usize)>> = HashMap::new();
        for j in 0..rim.len() {
            let (a, b) = (rim[j], rim[(j + 1) % rim.len()]);
            if rim.len() < 2 || outside[a] == outside[b] {
                continue;
            }
            let edge = match index.get(&key(a, b)) {
                Some(&e) => e,
                None => rim_fallback(graph, region, &index, a, b)
                    .ok_or_else(|| GibbsError::InconsistentBoundary(format!("rim vertices {a} and {b} share no face")))?,
            };
            let (pa, pb) = (&graph.coords[a], &graph.coords[b]);
            let sep: Vec<usize> = (0..family.len()).filter(|&i| family.geodesics[i].separates(pa, pb)).collect();
            if sep.len() != 1 {
                return Err(GibbsError::InconsistentBoundary(format!(
                    "rim step {a}-{b} is crossed by {} family geodesics",
                    sep.len()
                )));
            }
            let g = &family.geodesics[sep[0]];
            let t = g.parameter_of(&midpoint(pa, pb).halfplane_view());
            crossings.entry(sep[0]).or_default().push((t, edge));
        }
        let mut attachments = HashMap::new();
        let mut geodesics_on_rim: Vec<usize> = crossings.keys().copied().collect();
        geodesics_on_rim.sort_unstable();
        for (&g, list) in &mut crossings {
            if list.len() != 2 {
                return Err(GibbsError::InconsistentBoundary(format!("geodesic {g} meets the rim {} times", list.len())));
            }
            list.sort_by(|x, y| x.0.total_cmp(&y.0));
            for (end, &(_, e)) in list.iter().enumerate() {
                attachments.insert(e, Label { geodesic: g, end: end as u8 });
            }
        }
        Ok(Self { edges, midpoints, faces, attachments, geodesics_on_rim })
    }

    /// Geodesics whose two ends appear on the rim.
    pub fn geodesics(&self) -> &[usize] {
        &self.geodesics_on_rim
    }

    pub fn ground_partition(&self) -> Partition {
        Partition::ground(&self.geodesics_on_rim)
    }

    /// Disagreement edges only, sorted.
    pub fn disagreements(&self, state: &SpinState) -> Vec<(usize, usize)> {
        self.edges.iter().copied().filter(|&(u, v)| state.spins[u] != state.spins[v]).collect()
    }

    pub fn extract(&self, state: &SpinState) -> Result<(ContourSet, Partition), GibbsError> {
        let dis: Vec<bool> = self.edges.iter().map(|&(u, v)| state.spins[u] != state.spins[v]).collect();
        let mut dsu = Dsu((0..self.edges.len()).collect());
        for f in &self.faces {
            // pair consecutive disagreement edges around the face, starting
            // from the first position; independent of the spin values
            let marked: Vec<usize> = f.iter().copied().filter(|&e| dis[e]).collect();
            for pair in marked.chunks(2) {
                if let [a, b] = *pair {
                    dsu.union(a, b);
                }
            }
        }
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for e in (0..self.edges.len()).filter(|&e| dis[e]) {
            let r = dsu.find(e);
            let i = *slot.entry(r).or_insert_with(|| {
                groups.push((r, Vec::new()));
                groups.len() - 1
            });
            groups[i].1.push(e);
        }
        let mut components = Vec::with_capacity(groups.len());
        let mut pairs = Vec::new();
        for (_, es) in groups {
            let mut att: Vec<Label> = es.iter().filter_map(|e| self.attachments.get(e).copied()).collect();
            att.sort();
            if !att.is_empty() {
                if att.len() != 2 {
                    return Err(GibbsError::InconsistentBoundary(format!("an interface has {} rim attachments", att.len())));
                }
                pairs.push((att[0], att[1]));
            }
            components.push(Component {
                edges: es.iter().map(|&e| self.edges[e]).collect(),
                open: !att.is_empty(),
                attachments: att,
                dual_points: es.iter().map(|&e| self.midpoints[e]).collect(),
            });
        }
        let edges = (0..self.edges.len()).filter(|&e| dis[e]).map(|e| self.edges[e]).collect();
        Ok((ContourSet { edges, components }, Partition::canonical(pairs)))
    }
}

fn rim_fallback(graph: &LatticeGraph, region: &BoxRegion, index: &HashMap<(usize, usize), usize>, a: usize, b: usize) -> Option<usize> {
    let f = graph.faces.iter().find(|f| f.contains(&a) && f.contains(&b) && f.iter().all(|&v| region.contains(v)))?;
    let n = f.len();
    (0..n)
        .map(|i| (f[i].min(f[(i + 1) % n]), f[i].max(f[(i + 1) % n])))
        .find(|&(u, v)| u == a || v == a)
        .and_then(|e| index.get(&e).copied())
}

/// Contours and partition of `state` in `region`; boundary signs are taken from `state`.
pub fn extract_interfaces(
    graph: &LatticeGraph,
    state: &SpinState,
    region: &BoxRegion,
    family: &SignedGeodesicFamily,
) -> Result<(ContourSet, Partition), GibbsError> {
    InterfaceContext::new(graph, region, family, &state.spins)?.extract(state)
}

/// Parameter range of `gamma` sampled at step 0.1 around the given points.
fn samples_on(gamma: &Geodesic<f64>, points: &[P], z: &P) -> Vec<P> {
    let ts: Vec<f64> = points.iter().chain(std::iter::once(z)).map(|p| gamma.parameter_of(&p.halfplane_view())).collect();
    let lo = ts.iter().copied().fold(f64::INFINITY, f64::min) - 25.0;
    let hi = ts.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 25.0;
    let n = ((hi - lo) / 0.1).ceil() as usize;
    (0..=n).map(|i| gamma.point_at(lo + 0.1 * i as f64).halfplane_view()).collect()
}

/// Smallest `m` for which every point lies in `C_m(gamma, z)` on the 0.1 sampling of `gamma`.
pub fn escape_threshold(points: &[P], gamma: &Geodesic<f64>, z: &P) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let ys = samples_on(gamma, points, z);
    let z = z.halfplane_view();
    let dz: Vec<f64> = ys.iter().map(|y| point_distance(y, &z).expect("same model")).collect();
    points
        .iter()
        .map(|w| {
            let w = w.halfplane_view();
            let mut nearest = f64::INFINITY;
            for (y, &r) in ys.iter().zip(&dz) {
                let d = point_distance(&w, y).expect("same model");
                if d <= r {
                    return 0.0;
                }
                nearest = nearest.min(d);
            }
            nearest
        })
        .fold(0.0, f64::max)
}

/// Whether every dual point of the open interfaces attached to geodesic
/// `index` lies in `C_m = ∪_y B(y, max{m, dist(y, z)})`.
pub fn containment_check(contours: &ContourSet, index: usize, gamma: &Geodesic<f64>, z: &P, m: f64) -> bool {
    let points: Vec<P> = contours
        .open()
        .filter(|c| c.attachments.iter().any(|l| l.geodesic == index))
        .flat_map(|c| c.dual_points.iter().copied())
        .collect();
    escape_threshold(&points, gamma, z) <= m
}
