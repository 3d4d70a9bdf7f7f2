//! JSON file records for families, graphs and dimer coverings.
//!
//! Boundary points are numbers, with `∞` written as the string `"inf"`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::families::{Construction, FamilyParams, SignedGeodesicFamily};
use crate::hypgeo::{BoundaryPoint, Geodesic, GeometryError, Model, ModelPoint};
use crate::tiling::{GraphKind, LatticeGraph};
use crate::treestates::{Chain, Covering, DimerSet, Provenance};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A boundary coordinate: a real number, an angle, or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct End(pub f64);

impl Serialize for End {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for End {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(End(v)),
            Raw::Str(s) if s == "inf" => Ok(End(f64::INFINITY)),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {s:?}"))),
        }
    }
}

impl End {
    pub fn from_boundary(p: &BoundaryPoint<f64>) -> Self {
        match p {
            BoundaryPoint::Real(x) | BoundaryPoint::Angle(x) => End(*x),
            BoundaryPoint::Infinity => End(f64::INFINITY),
        }
    }

    pub fn to_boundary(self, model: Model) -> Result<BoundaryPoint<f64>, IoError> {
        match model {
            Model::HalfPlane if self.0.is_infinite() => Ok(BoundaryPoint::Infinity),
            Model::HalfPlane => Ok(BoundaryPoint::Real(self.0)),
            Model::Disk if self.0.is_finite() => Ok(BoundaryPoint::angle(self.0)),
            Model::Disk => Err(IoError::Malformed("disk endpoints must be finite angles".into())),
        }
    }
}

/// A single geodesic, `{model, e1, e2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicRecord {
    pub model: Model,
    pub e1: End,
    pub e2: End,
}

impl GeodesicRecord {
    pub fn from_geodesic(g: &Geodesic<f64>) -> Self {
        Self { model: g.model(), e1: End::from_boundary(&g.e1), e2: End::from_boundary(&g.e2) }
    }

    pub fn to_geodesic(&self) -> Result<Geodesic<f64>, IoError> {
        Ok(Geodesic::new(self.e1.to_boundary(self.model)?, self.e2.to_boundary(self.model)?)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndPair {
    pub e1: End,
    pub e2: End,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub alpha: Option<f64>,
    pub eta: Option<f64>,
    pub depth: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub x: f64,
    pub y: f64,
}

/// Family file. Geodesics and the base point share `model`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub params: ParamsRecord,
    pub model: Model,
    pub geodesics: Vec<EndPair>,
    pub base_point: PointRecord,
    pub base_sign: i8,
    pub construction: Construction,
    pub seed_arc: Option<EndPair>,
}

impl FamilyFile {
    pub fn from_family(f: &SignedGeodesicFamily) -> Self {
        let pair = |a: &BoundaryPoint<f64>, b: &BoundaryPoint<f64>| EndPair { e1: End::from_boundary(a), e2: End::from_boundary(b) };
        let finite = |v: f64| v.is_finite().then_some(v);
        let bp = f.base_point.halfplane_view();
        Self {
            params: ParamsRecord { alpha: finite(f.params.alpha), eta: finite(f.params.eta), depth: f.params.depth },
            model: Model::HalfPlane,
            geodesics: f.geodesics.iter().map(|g| pair(&g.e1, &g.e2)).collect(),
            base_point: PointRecord { x: bp.x, y: bp.y },
            base_sign: f.base_sign,
            construction: f.construction,
            seed_arc: f.selected_arc.map(|(a, b)| pair(&a, &b)),
        }
    }

    pub fn to_family(&self) -> Result<SignedGeodesicFamily, IoError> {
        if self.base_sign != 1 && self.base_sign != -1 {
            return Err(IoError::Malformed(format!("base_sign must be ±1, got {}", self.base_sign)));
        }
        let geodesics = self
            .geodesics
            .iter()
            .map(|p| Ok(Geodesic::new(p.e1.to_boundary(self.model)?, p.e2.to_boundary(self.model)?)?))
            .collect::<Result<Vec<_>, IoError>>()?;
        let bp = ModelPoint::new(self.model, self.base_point.x, self.base_point.y)?;
        let mut fam = SignedGeodesicFamily::custom(geodesics, bp, self.base_sign);
        fam.construction = self.construction;
        fam.params = FamilyParams {
            alpha: self.params.alpha.unwrap_or(f64::NAN),
            eta: self.params.eta.unwrap_or(f64::NAN),
            depth: self.params.depth,
        };
        fam.selected_arc = match self.seed_arc {
            Some(p) => Some((
                p.e1.to_boundary(self.model)?.to_model(Model::HalfPlane),
                p.e2.to_boundary(self.model)?.to_model(Model::HalfPlane),
            )),
            None => None,
        };
        Ok(fam)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub x: f64,
    pub y: f64,
    pub gen: usize,
}

/// Graph file; coordinates in the disk model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(flatten)]
    pub kind: GraphKind,
    pub generations: usize,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<(usize, usize)>,
    pub faces: Vec<Vec<usize>>,
}

impl GraphFile {
    pub fn from_graph(g: &LatticeGraph) -> Self {
        Self {
            kind: g.kind,
            generations: g.generations,
            vertices: g
                .coords
                .iter()
                .zip(&g.generation)
                .map(|(p, &gen)| VertexRecord { x: p.x, y: p.y, gen })
                .collect(),
            edges: g.edges.clone(),
            faces: g.faces.clone(),
        }
    }

    /// Rebuilds the graph. Tree children are recovered from generations, in
    /// index order, which is left to right for generated trees.
    pub fn to_graph(&self) -> Result<LatticeGraph, IoError> {
        let n = self.vertices.len();
        let bad = |msg: String| IoError::Malformed(msg);
        let coords = self
            .vertices
            .iter()
            .map(|v| ModelPoint::new(Model::Disk, v.x, v.y))
            .collect::<Result<Vec<_>, _>>()?;
        for &(a, b) in &self.edges {
            if a >= n || b >= n || a == b {
                return Err(bad(format!("edge ({a}, {b}) is invalid for {n} vertices")));
            }
        }
        if let Some(f) = self.faces.iter().find(|f| f.iter().any(|&v| v >= n)) {
            return Err(bad(format!("face {f:?} names a missing vertex")));
        }
        let generation: Vec<usize> = self.vertices.iter().map(|v| v.gen).collect();
        let children = match self.kind {
            GraphKind::Tree { .. } => {
                let mut children = vec![Vec::new(); n];
                for &(a, b) in &self.edges {
                    let (p, c) = match generation[b].cmp(&generation[a]) {
                        std::cmp::Ordering::Greater => (a, b),
                        std::cmp::Ordering::Less => (b, a),
                        std::cmp::Ordering::Equal => return Err(bad(format!("tree edge ({a}, {b}) within a generation"))),
                    };
                    children[p].push(c);
                }
                for c in &mut children {
                    c.sort_unstable();
                }
                children
            }
            GraphKind::Tessellation { .. } => Vec::new(),
        };
        Ok(LatticeGraph::from_parts(
            self.kind,
            self.generations,
            coords,
            generation,
            self.faces.clone(),
            self.edges.clone(),
            children,
        ))
    }
}

/// Covering and dimer file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringFile {
    pub k: usize,
    pub chains: Vec<Vec<usize>>,
    pub truncated: Vec<bool>,
    pub dimers: Vec<(usize, usize)>,
    pub provenance: Provenance,
}

impl CoveringFile {
    pub fn new(cov: &Covering, d: &DimerSet) -> Self {
        Self {
            k: cov.k,
            chains: cov.chains.iter().map(|c| c.vertices.clone()).collect(),
            truncated: cov.truncated.clone(),
            dimers: d.dimers.clone(),
            provenance: d.provenance,
        }
    }

    pub fn covering(&self) -> Covering {
        let truncated = if self.truncated.len() == self.chains.len() {
            self.truncated.clone()
        } else {
            vec![false; self.chains.len()]
        };
        Covering {
            k: self.k,
            chains: self.chains.iter().map(|v| Chain { vertices: v.clone() }).collect(),
            truncated,
        }
    }

    pub fn dimer_set(&self) -> DimerSet {
        DimerSet::new(self.dimers.clone(), self.provenance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{construct1, construct2};
    use crate::tiling::{build_cayley_tree, build_tiling};
    use crate::treestates::{left_greedy_covering, middle_dimers};

    #[test]
    fn infinity_is_a_string() {
        let g = Geodesic::vertical(0.5);
        let s = serde_json::to_string(&GeodesicRecord::from_geodesic(&g)).unwrap();
        assert_eq!(s, r#"{"model":"halfplane","e1":0.5,"e2":"inf"}"#);
        let back: GeodesicRecord = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_geodesic().unwrap(), g);
        assert!(serde_json::from_str::<GeodesicRecord>(r#"{"model":"halfplane","e1":0.5,"e2":"infinity"}"#).is_err());
    }

    #[test]
    fn family_round_trip() {
        for fam in [construct1(0.05, 1).unwrap(), construct2(0.05, 0.03, 6).unwrap()] {
            let file = FamilyFile::from_family(&fam);
            let json = serde_json::to_string_pretty(&file).unwrap();
            let back: FamilyFile = serde_json::from_str(&json).unwrap();
            let g = back.to_family().unwrap();
            assert_eq!(g.geodesics, fam.geodesics);
            assert_eq!(g.base_sign, fam.base_sign);
            assert_eq!(g.construction, fam.construction);
            assert_eq!(g.selected_arc, fam.selected_arc);
            assert_eq!(g.params, fam.params);
        }
    }

    #[test]
    fn custom_family_has_null_params() {
        let fam = SignedGeodesicFamily::custom(vec![Geodesic::vertical(0.0)], ModelPoint::halfplane(1.0, 1.0), -1);
        let v = serde_json::to_value(FamilyFile::from_family(&fam)).unwrap();
        assert!(v["params"]["alpha"].is_null());
        assert_eq!(v["construction"], "custom");
        let back: FamilyFile = serde_json::from_value(v).unwrap();
        assert_eq!(back.to_family().unwrap().sign(&ModelPoint::halfplane(2.0, 1.0)), Some(-1));
    }

    #[test]
    fn graph_round_trip() {
        for g in [build_tiling(3, 7, 2).unwrap(), build_cayley_tree(2, 5).unwrap()] {
            let file = GraphFile::from_graph(&g);
            let v = serde_json::to_value(&file).unwrap();
            assert!(v.get("kind").is_some());
            let back: GraphFile = serde_json::from_value(v).unwrap();
            let h = back.to_graph().unwrap();
            assert_eq!(h.adjacency, g.adjacency);
            assert_eq!(h.children, g.children);
            assert_eq!(h.faces, g.faces);
            assert_eq!(h.kind, g.kind);
        }
    }

    #[test]
    fn graph_rejects_dangling_edges() {
        let mut file = GraphFile::from_graph(&build_tiling(3, 7, 1).unwrap());
        file.edges.push((0, 10_000));
        assert!(matches!(file.to_graph(), Err(IoError::Malformed(_))));
    }

    #[test]
    fn covering_round_trip() {
        let t = build_cayley_tree(2, 8).unwrap();
        let cov = left_greedy_covering(&t, 5).unwrap();
        let d = middle_dimers(&cov).unwrap();
        let file = CoveringFile::new(&cov, &d);
        let back: CoveringFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(back.covering(), cov);
        assert_eq!(back.dimer_set(), d);
    }
}
