use crate::hypgeo::{reflect_geodesic, BoundaryPoint, Model, ModelPoint};

use super::solve::{arc_mid, cw, order_from, solve_crossratio_perpendicular_toward, solve_double_crossratio_ends};
use super::{Construction, FamilyError, FamilyParams, SignedGeodesicFamily, B, G, P};

/// Default horizon: curves whose closest point to the origin lies farther than
/// this (curvature −1 units) are not generated.
pub const DEFAULT_HORIZON: f64 = 12.0;

const MAX_CURVES: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Construct1Options {
    pub horizon: f64,
}

impl Default for Construct1Options {
    fn default() -> Self {
        Self { horizon: DEFAULT_HORIZON }
    }
}

fn origin() -> P {
    ModelPoint::origin(Model::HalfPlane)
}

/// Endpoint list walked clockwise; arc `i` runs from `ends[i]` to `ends[i+1]`.
struct Arcs {
    geodesics: Vec<G>,
    ends: Vec<(B, usize)>,
}

impl Arcs {
    fn other_end(&self, p: &B, owner: usize) -> B {
        let g = &self.geodesics[owner];
        if g.e1 == *p {
            g.e2
        } else {
            g.e1
        }
    }

    fn arc(&self, i: usize) -> ((B, usize), (B, usize)) {
        (self.ends[i], self.ends[(i + 1) % self.ends.len()])
    }

    /// Places the curve for arc `i` with parameter `alpha`; returns its ends
    /// ordered clockwise from the arc start.
    fn place(&self, i: usize, alpha: f64) -> Result<(B, B), FamilyError> {
        let ((x, ox), (y, oy)) = self.arc(i);
        if ox == oy {
            let g = &self.geodesics[ox];
            let side = if g.arc_contains(&arc_mid(&x, &y)) { 1 } else { -1 };
            let chi = solve_crossratio_perpendicular_toward(g, alpha, &origin(), side)?;
            Ok(order_from(&x, &chi))
        } else {
            let t = self.other_end(&x, ox);
            let z = self.other_end(&y, oy);
            solve_double_crossratio_ends([t, x], [y, z], alpha)
        }
    }
}

/// Construction 1.
///
/// Depth 0 is the centrally symmetric pair about the origin `i`; depth 1 adds
/// the reflection closure Γ₁; each further level fills every arc whose ends lie
/// on different curves by a χ-chain. Curves beyond the default horizon are dropped.
pub fn construct1(alpha: f64, depth: u32) -> Result<SignedGeodesicFamily, FamilyError> {
    construct1_with(alpha, depth, &Construct1Options::default())
}

pub fn construct1_with(alpha: f64, depth: u32, opts: &Construct1Options) -> Result<SignedGeodesicFamily, FamilyError> {
    let params = FamilyParams { alpha, eta: alpha, depth };
    params.validate()?;
    if !(opts.horizon > 0.0) {
        return Err(FamilyError::ParameterOutOfRange(format!("horizon = {}", opts.horizon)));
    }
    let o = origin();
    // R((−b,−a),(a,b)) = (b−a)²/4 when ab = 1
    let a = (alpha + 1.0).sqrt() - alpha.sqrt();
    let b = 1.0 / a;
    let mut geodesics = vec![G::semicircle(-b, -a)?, G::semicircle(a, b)?];

    if depth >= 1 {
        // reflection closure, breadth first by generation
        let mut mirrors = vec![1usize, 0];
        while !mirrors.is_empty() {
            let mut next = Vec::new();
            for &m in &mirrors {
                let mirror = geodesics[m];
                for k in 0..geodesics.len() {
                    if k == m {
                        continue;
                    }
                    let img = reflect_geodesic(&geodesics[k], &mirror);
                    // images far past the horizon collapse to a point in f64
                    if collapsed(&img) || img.distance_to(&o) > opts.horizon || contains_curve(&geodesics, &img) {
                        continue;
                    }
                    geodesics.push(img);
                    next.push(geodesics.len() - 1);
                }
            }
            mirrors = next;
        }
    }

    let mut fam = SignedGeodesicFamily {
        geodesics,
        base_point: o,
        base_sign: 1,
        selected_arc: None,
        params,
        construction: Construction::C1,
    };
    for _ in 2..=depth {
        let ends = fam.ends_clockwise();
        let mut arcs = Arcs { geodesics: fam.geodesics, ends };
        let n = arcs.ends.len();
        let mut new_ends = Vec::with_capacity(3 * n);
        for i in 0..n {
            new_ends.push(arcs.ends[i]);
            let ((_, ox), (_, oy)) = arcs.arc(i);
            if ox == oy {
                continue;
            }
            let chain = fill_chain(&mut arcs, i, alpha, opts.horizon)?;
            new_ends.extend(chain);
        }
        arcs.ends = new_ends;
        fam.geodesics = arcs.geodesics;
        if fam.geodesics.len() > MAX_CURVES {
            return Err(FamilyError::ParameterOutOfRange(format!(
                "more than {MAX_CURVES} curves; lower depth or horizon"
            )));
        }
    }
    Ok(fam)
}

/// χ₀ in arc `i` and its nested successors toward the absolute. Returns the
/// new ends in clockwise order.
fn fill_chain(arcs: &mut Arcs, i: usize, alpha: f64, horizon: f64) -> Result<Vec<(B, usize)>, FamilyError> {
    let o = origin();
    let (mut u, mut v) = arcs.place(i, alpha)?;
    let mut us = Vec::new();
    let mut vs = Vec::new();
    loop {
        let chi = G::new(u, v)?;
        if chi.distance_to(&o) > horizon {
            break;
        }
        arcs.geodesics.push(chi);
        let id = arcs.geodesics.len() - 1;
        us.push((u, id));
        vs.push((v, id));
        let side = if chi.arc_contains(&arc_mid(&u, &v)) { 1 } else { -1 };
        let next = solve_crossratio_perpendicular_toward(&chi, alpha, &o, side)?;
        (u, v) = order_from(&u, &next);
    }
    vs.reverse();
    us.extend(vs);
    Ok(us)
}

/// Endpoints so close that frame computations lose them; such curves lie
/// far beyond any usable horizon.
fn collapsed(g: &G) -> bool {
    match (g.e1, g.e2) {
        (BoundaryPoint::Real(a), BoundaryPoint::Real(b)) => (a - b).abs() < 1e-9 * a.abs().max(b.abs()).max(1.0),
        _ => false,
    }
}

fn contains_curve(list: &[G], g: &G) -> bool {
    let close = |p: &B, q: &B| match (p, q) {
        (BoundaryPoint::Real(a), BoundaryPoint::Real(b)) => (a - b).abs() <= 1e-9 * a.abs().max(1.0),
        (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
        _ => false,
    };
    list.iter().any(|h| close(&h.e1, &g.e1) && close(&h.e2, &g.e2))
}

/// Construction 2 after `steps` steps.
///
/// γ₁ is the imaginary axis through the origin `i`. Its right half-plane is
/// the (+) region and the positive half-line is the first selected arc. Each
/// step fills the selected arc (α in a (+) region, η in a (−) region) and
/// moves the selection to the next arc clockwise.
pub fn construct2(alpha: f64, eta: f64, steps: u32) -> Result<SignedGeodesicFamily, FamilyError> {
    let params = FamilyParams { alpha, eta, depth: steps };
    params.validate()?;
    if steps == 0 {
        return Err(FamilyError::ParameterOutOfRange("steps must be at least 1".into()));
    }
    let g1 = G::vertical(0.0);
    let mut arcs = Arcs {
        geodesics: vec![g1],
        // clockwise from ∞: the positive reals, then the negative reals
        ends: vec![(BoundaryPoint::Infinity, 0), (BoundaryPoint::Real(0.0), 0)],
    };
    let mut signs: Vec<i8> = vec![1, -1];
    let mut cursor = 0usize;
    for _ in 1..steps {
        let s = signs[cursor];
        let (u, v) = arcs.place(cursor, if s > 0 { alpha } else { eta })?;
        arcs.geodesics.push(G::new(u, v)?);
        let id = arcs.geodesics.len() - 1;
        arcs.ends.splice(cursor + 1..cursor + 1, [(u, id), (v, id)]);
        signs.splice(cursor + 1..cursor + 1, [-s, s]);
        cursor = (cursor + 3) % arcs.ends.len();
    }
    let sel = arcs.arc(cursor);
    Ok(SignedGeodesicFamily {
        geodesics: arcs.geodesics,
        base_point: ModelPoint::halfplane(-0.01, 1.0),
        base_sign: -1,
        selected_arc: Some((sel.0 .0, sel.1 .0)),
        params,
        construction: Construction::C2,
    })
}

/// Each clockwise arc of the absolute with the sign of the region touching it.
pub fn arc_signs(fam: &SignedGeodesicFamily) -> Vec<(B, B, Option<i8>)> {
    let ends = fam.ends_clockwise();
    let n = ends.len();
    (0..n)
        .map(|i| {
            let (x, y) = (ends[i].0, ends[(i + 1) % n].0);
            let t = crate::families::theta(&arc_mid(&x, &y));
            // a point just inside the absolute, closer to it than any curve ending at x or y
            let rad = 1.0 - (cw(&x, &y) / 8.0).min(1e-3);
            let p = ModelPoint::disk(rad * t.cos(), rad * t.sin());
            (x, y, fam.sign(&p))
        })
        .collect()
}
