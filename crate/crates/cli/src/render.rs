//! Poincaré-disk SVG scenes. Geodesics and lattice edges are drawn as exact
//! circular arcs orthogonal to the unit circle.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use millefeuille::families::SignedGeodesicFamily;
use millefeuille::gibbs::SpinState;
use millefeuille::hypgeo::{BoundaryPoint, Model};
use millefeuille::io::{CoveringFile, FamilyFile, GraphFile};
use millefeuille::tiling::LatticeGraph;
use millefeuille::{Geodesic64, ModelPoint64};
use serde::Serialize;

use crate::cmd::{read_json, Failure, Outcome};
use crate::manifest::{Outputs, RunManifest};

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Family, graph, state or covering file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Graph file; needed to place a state or covering.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Family drawn over the input, with its sign tint.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Image width and height in pixels.
    #[arg(long, default_value_t = 800)]
    pub size: u32,
}

#[derive(Default)]
pub struct Scene<'a> {
    pub family: Option<&'a SignedGeodesicFamily>,
    pub graph: Option<&'a LatticeGraph>,
    pub state: Option<&'a SpinState>,
    pub dimers: Option<&'a [(usize, usize)]>,
    pub size: Option<u32>,
}

const TINT_CELLS: usize = 64;

struct Canvas {
    c: f64,
    r: f64,
}

impl Canvas {
    fn pt(&self, x: f64, y: f64) -> (f64, f64) {
        (self.c + self.r * x, self.c - self.r * y)
    }

    fn line(&self, (ax, ay): (f64, f64), (bx, by): (f64, f64)) -> String {
        let (a, b) = (self.pt(ax, ay), self.pt(bx, by));
        format!("M{:.3} {:.3}L{:.3} {:.3}", a.0, a.1, b.0, b.1)
    }

    /// Minor arc from `a` to `b` on the circle with centre `o` and radius `rad`
    /// (disk units).
    fn arc(&self, a: (f64, f64), b: (f64, f64), o: (f64, f64), rad: f64) -> String {
        let (sa, sb, so) = (self.pt(a.0, a.1), self.pt(b.0, b.1), self.pt(o.0, o.1));
        let cross = (sa.0 - so.0) * (sb.1 - so.1) - (sa.1 - so.1) * (sb.0 - so.0);
        let sweep = u8::from(cross > 0.0);
        let r = rad * self.r;
        format!("M{:.3} {:.3}A{r:.3} {r:.3} 0 0 {sweep} {:.3} {:.3}", sa.0, sa.1, sb.0, sb.1)
    }

    /// A complete geodesic between boundary angles `a` and `b`.
    fn geodesic(&self, a: f64, b: f64) -> Option<String> {
        let fwd = (b - a).rem_euclid(TAU);
        let (start, delta) = if fwd <= PI { (a, fwd) } else { (b, TAU - fwd) };
        if delta < 1e-12 {
            return None;
        }
        let (pa, pb) = ((a.cos(), a.sin()), (b.cos(), b.sin()));
        if PI - delta < 1e-9 {
            return Some(self.line(pa, pb));
        }
        let mid = start + delta / 2.0;
        let sec = 1.0 / (delta / 2.0).cos();
        Some(self.arc(pa, pb, (mid.cos() * sec, mid.sin() * sec), (delta / 2.0).tan()))
    }

    /// The geodesic segment between two interior points.
    fn segment(&self, p: (f64, f64), q: (f64, f64)) -> String {
        let cross = p.0 * q.1 - p.1 * q.0;
        let scale = (p.0 * p.0 + p.1 * p.1).max(q.0 * q.0 + q.1 * q.1);
        if cross.abs() <= 1e-12 * scale.max(1e-300) || scale < 1e-24 {
            return self.line(p, q);
        }
        // orthogonal circles through p also pass through its inverse p/|p|²
        let (u, w) = if p.0 * p.0 + p.1 * p.1 >= q.0 * q.0 + q.1 * q.1 { (p, q) } else { (q, p) };
        let n = u.0 * u.0 + u.1 * u.1;
        let s = (u.0 / n, u.1 / n);
        match circumcenter(u, w, s) {
            Some(o) => self.arc(p, q, o, ((p.0 - o.0).powi(2) + (p.1 - o.1).powi(2)).sqrt()),
            None => self.line(p, q),
        }
    }
}

fn circumcenter(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Option<(f64, f64)> {
    let d = 2.0 * (a.0 * (b.1 - c.1) + b.0 * (c.1 - a.1) + c.0 * (a.1 - b.1));
    if d.abs() < 1e-300 {
        return None;
    }
    let (na, nb, nc) = (a.0 * a.0 + a.1 * a.1, b.0 * b.0 + b.1 * b.1, c.0 * c.0 + c.1 * c.1);
    let ux = (na * (b.1 - c.1) + nb * (c.1 - a.1) + nc * (a.1 - b.1)) / d;
    let uy = (na * (c.0 - b.0) + nb * (a.0 - c.0) + nc * (b.0 - a.0)) / d;
    (ux.is_finite() && uy.is_finite()).then_some((ux, uy))
}

fn angle(p: &BoundaryPoint<f64>) -> f64 {
    match p.to_model(Model::Disk) {
        BoundaryPoint::Angle(t) => t,
        _ => unreachable!("disk boundary points are angles"),
    }
}

fn disk_xy(p: &ModelPoint64) -> (f64, f64) {
    let d = p.to_model(Model::Disk);
    (d.x, d.y)
}

fn geodesic_path(cv: &Canvas, g: &Geodesic64) -> Option<String> {
    cv.geodesic(angle(&g.e1), angle(&g.e2))
}

fn tint(cv: &Canvas, fam: &SignedGeodesicFamily, out: &mut String) {
    let h = 2.0 / TINT_CELLS as f64;
    out.push_str("<g class=\"tint\" clip-path=\"url(#disk)\" stroke=\"none\" shape-rendering=\"crispEdges\">\n");
    for row in 0..TINT_CELLS {
        let y = 1.0 - (row as f64 + 0.5) * h;
        let mut run: Option<(usize, i8)> = None;
        let flush = |start: usize, end: usize, sign: i8, out: &mut String| {
            let (x0, y0) = cv.pt(-1.0 + start as f64 * h, y + h / 2.0);
            let w = (end - start) as f64 * h * cv.r;
            let fill = if sign > 0 { "#dce9f7" } else { "#f7e0d8" };
            let _ = writeln!(out, "<rect x=\"{x0:.3}\" y=\"{y0:.3}\" width=\"{w:.3}\" height=\"{:.3}\" fill=\"{fill}\"/>", h * cv.r);
        };
        for col in 0..=TINT_CELLS {
            let sign = (col < TINT_CELLS).then(|| {
                let x = -1.0 + (col as f64 + 0.5) * h;
                // cells just outside the disk still tint the clipped rim
                let scale = (x * x + y * y).sqrt().max(1.0) * (1.0 + 1e-9);
                fam.sign(&ModelPoint64::disk(x / scale, y / scale))
            });
            let sign = sign.flatten();
            match (run, sign) {
                (Some((_, s)), Some(t)) if s == t => {}
                (prev, next) => {
                    if let Some((start, s)) = prev {
                        flush(start, col, s, out);
                    }
                    run = next.map(|t| (col, t));
                }
            }
        }
    }
    out.push_str("</g>\n");
}

/// Edge id ↦ the faces containing it.
fn edge_faces(g: &LatticeGraph) -> HashMap<(usize, usize), Vec<usize>> {
    let mut map: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (fi, f) in g.faces.iter().enumerate() {
        for i in 0..f.len() {
            let (a, b) = (f[i], f[(i + 1) % f.len()]);
            map.entry((a.min(b), a.max(b))).or_default().push(fi);
        }
    }
    map
}

fn centroid(g: &LatticeGraph, face: &[usize]) -> (f64, f64) {
    let n = face.len() as f64;
    let (sx, sy) = face.iter().fold((0.0, 0.0), |(sx, sy), &v| {
        let (x, y) = disk_xy(&g.coords[v]);
        (sx + x, sy + y)
    });
    (sx / n, sy / n)
}

pub fn svg(scene: &Scene, run_id: &str) -> String {
    let size = scene.size.unwrap_or(800) as f64;
    let cv = Canvas { c: size / 2.0, r: size / 2.0 - 8.0 };
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(out, "<metadata>run_id {run_id}</metadata>");
    let _ = writeln!(
        out,
        "<defs><clipPath id=\"disk\"><circle cx=\"{0:.3}\" cy=\"{0:.3}\" r=\"{1:.3}\"/></clipPath></defs>",
        cv.c, cv.r
    );
    let _ = writeln!(out, "<circle class=\"disk\" cx=\"{0:.3}\" cy=\"{0:.3}\" r=\"{1:.3}\" fill=\"#ffffff\"/>", cv.c, cv.r);
    if let Some(fam) = scene.family.filter(|f| !f.is_empty()) {
        tint(&cv, fam, &mut out);
    }
    let _ = writeln!(
        out,
        "<circle class=\"absolute\" cx=\"{0:.3}\" cy=\"{0:.3}\" r=\"{1:.3}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"/>",
        cv.c, cv.r
    );
    if let Some(g) = scene.graph {
        out.push_str("<g class=\"edges\" fill=\"none\" stroke=\"#9a9a9a\" stroke-width=\"0.6\">\n");
        for &(a, b) in &g.edges {
            let _ = writeln!(out, "<path class=\"edge\" d=\"{}\"/>", cv.segment(disk_xy(&g.coords[a]), disk_xy(&g.coords[b])));
        }
        out.push_str("</g>\n");
    }
    if let Some(fam) = scene.family {
        out.push_str("<g class=\"family\" fill=\"none\" stroke=\"#1b1b1b\" stroke-width=\"1.2\">\n");
        for g in &fam.geodesics {
            if let Some(d) = geodesic_path(&cv, g) {
                let _ = writeln!(out, "<path class=\"geodesic\" d=\"{d}\"/>");
            }
        }
        out.push_str("</g>\n");
    }
    if let (Some(g), Some(d)) = (scene.graph, scene.dimers) {
        out.push_str("<g class=\"dimers\" fill=\"none\" stroke=\"#1e8a3c\" stroke-width=\"2.5\">\n");
        for &(a, b) in d {
            let _ = writeln!(out, "<path class=\"dimer\" d=\"{}\"/>", cv.segment(disk_xy(&g.coords[a]), disk_xy(&g.coords[b])));
        }
        out.push_str("</g>\n");
    }
    if let (Some(g), Some(st)) = (scene.graph, scene.state) {
        let faces = edge_faces(g);
        out.push_str("<g class=\"interfaces\" fill=\"none\" stroke=\"#d62828\" stroke-width=\"1.8\">\n");
        for &(a, b) in &g.edges {
            if st.spins[a] == st.spins[b] {
                continue;
            }
            let (pa, pb) = (disk_xy(&g.coords[a]), disk_xy(&g.coords[b]));
            let d = match faces.get(&(a.min(b), a.max(b))).map(Vec::as_slice) {
                Some([f1, f2]) => cv.line(centroid(g, &g.faces[*f1]), centroid(g, &g.faces[*f2])),
                Some([f]) => cv.line(centroid(g, &g.faces[*f]), ((pa.0 + pb.0) / 2.0, (pa.1 + pb.1) / 2.0)),
                _ => cv.segment(pa, pb),
            };
            let _ = writeln!(out, "<path class=\"interface\" d=\"{d}\"/>");
        }
        out.push_str("</g>\n");
        out.push_str("<g class=\"spins\" stroke=\"none\">\n");
        for (v, p) in g.coords.iter().enumerate() {
            let (x, y) = cv.pt(p.x, p.y);
            let fill = if st.spins[v] > 0 { "#1f5fa8" } else { "#c0392b" };
            let _ = writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"1.6\" fill=\"{fill}\"/>");
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

#[derive(Serialize)]
struct Settings<'a> {
    input: &'a Path,
    kind: &'static str,
    graph: Option<&'a Path>,
    family: Option<&'a Path>,
    size: u32,
}

fn kind_of(path: &Path) -> Result<&'static str, Failure> {
    let v: serde_json::Value = read_json("input", path)?;
    let has = |k: &str| v.get(k).is_some();
    Ok(if has("geodesics") {
        "family"
    } else if has("vertices") {
        "graph"
    } else if has("spins") {
        "state"
    } else if has("chains") {
        "covering"
    } else {
        return Err(Failure::msg(format!("--input: {} is not a family, graph, state or covering file", path.display())));
    })
}

fn load_family(flag: &str, path: &Path) -> Result<SignedGeodesicFamily, Failure> {
    let file: FamilyFile = read_json(flag, path)?;
    file.to_family().map_err(|e| Failure::usage(anyhow::anyhow!("--{flag}: {e}")))
}

fn load_graph(flag: &str, path: &Path) -> Result<LatticeGraph, Failure> {
    let file: GraphFile = read_json(flag, path)?;
    file.to_graph().map_err(|e| Failure::usage(anyhow::anyhow!("--{flag}: {e}")))
}

pub fn run(a: RenderArgs) -> Result<Outcome, Failure> {
    if a.size < 16 {
        return Err(Failure::msg("--size must be at least 16"));
    }
    let kind = kind_of(&a.input)?;
    let settings = Settings { input: &a.input, kind, graph: a.graph.as_deref(), family: a.family.as_deref(), size: a.size };
    let mut inputs = vec![a.input.as_path()];
    inputs.extend(a.graph.as_deref());
    inputs.extend(a.family.as_deref());
    let manifest = RunManifest::new("render", &settings, None, &inputs)?;

    let mut family = a.family.as_deref().map(|p| load_family("family", p)).transpose()?;
    let mut graph = a.graph.as_deref().map(|p| load_graph("graph", p)).transpose()?;
    let mut state = None;
    let mut dimers = None;
    match kind {
        "family" => family = Some(load_family("input", &a.input)?),
        "graph" => graph = Some(load_graph("input", &a.input)?),
        "state" => state = Some(read_json::<SpinState>("input", &a.input)?),
        _ => dimers = Some(read_json::<CoveringFile>("input", &a.input)?.dimers),
    }
    if (state.is_some() || dimers.is_some()) && graph.is_none() {
        return Err(Failure::msg(format!("--graph is required to draw a {kind} file")));
    }
    if let (Some(g), Some(st)) = (&graph, &state) {
        if st.spins.len() != g.len() {
            return Err(Failure::msg(format!("state holds {} spins for a graph of {} vertices", st.spins.len(), g.len())));
        }
    }
    if let (Some(g), Some(d)) = (&graph, &dimers) {
        if d.iter().any(|&(u, v)| u >= g.len() || v >= g.len()) {
            return Err(Failure::msg("covering names vertices missing from the graph"));
        }
    }
    let scene = Scene {
        family: family.as_ref(),
        graph: graph.as_ref(),
        state: state.as_ref(),
        dimers: dimers.as_deref(),
        size: Some(a.size),
    };
    let mut out = Outputs::new();
    out.write(&a.out, svg(&scene, &manifest.run_id).as_bytes())?;
    out.finish(manifest, &a.out)?;
    Ok(Outcome::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use millefeuille::families::construct2;
    use millefeuille::tiling::build_tiling;

    fn count(doc: &roxmltree::Document, class: &str) -> usize {
        doc.descendants().filter(|n| n.attribute("class") == Some(class)).count()
    }

    #[test]
    fn arcs_are_orthogonal_to_the_absolute() {
        let cv = Canvas { c: 0.0, r: 1.0 };
        for (a, b) in [(0.1f64, 1.3f64), (2.0, 5.5), (6.0, 0.4)] {
            let fwd = (b - a).rem_euclid(TAU);
            let delta = fwd.min(TAU - fwd);
            let (rad, dist) = ((delta / 2.0).tan(), 1.0 / (delta / 2.0).cos());
            // orthogonality: |O|² = 1 + ρ²
            assert!((dist * dist - 1.0 - rad * rad).abs() < 1e-12);
            assert!(cv.geodesic(a, b).unwrap().contains('A'));
        }
        assert!(cv.geodesic(0.0, PI).unwrap().contains('L'));
    }

    #[test]
    fn segment_circle_passes_through_inverse() {
        let (p, q) = ((0.3, 0.1), (-0.2, 0.4));
        let n = p.0 * p.0 + p.1 * p.1;
        let o = circumcenter(p, q, (p.0 / n, p.1 / n)).unwrap();
        let r2 = (p.0 - o.0).powi(2) + (p.1 - o.1).powi(2);
        assert!((o.0 * o.0 + o.1 * o.1 - 1.0 - r2).abs() < 1e-12);
    }

    #[test]
    fn eighteen_geodesics_render_eighteen_arcs() {
        let fam = construct2(0.05, 0.03, 18).unwrap();
        assert_eq!(fam.len(), 18);
        let text = svg(&Scene { family: Some(&fam), ..Default::default() }, "test");
        let doc = roxmltree::Document::parse(&text).unwrap();
        assert_eq!(count(&doc, "geodesic"), 18);
        assert!(count(&doc, "tint") == 1);
    }

    #[test]
    fn empty_family_is_outline_only() {
        let fam = SignedGeodesicFamily::custom(vec![], ModelPoint64::disk(0.0, 0.0), 1);
        let text = svg(&Scene { family: Some(&fam), ..Default::default() }, "test");
        let doc = roxmltree::Document::parse(&text).unwrap();
        assert_eq!(count(&doc, "geodesic"), 0);
        assert_eq!(count(&doc, "tint"), 0);
        assert_eq!(count(&doc, "absolute"), 1);
        assert_eq!(doc.descendants().filter(|n| n.has_tag_name("path") || n.has_tag_name("rect")).count(), 0);
    }

    #[test]
    fn state_overlay_marks_disagreements() {
        let g = build_tiling(3, 7, 2).unwrap();
        let mut st = SpinState::all_plus(g.len());
        st.spins[0] = -1;
        let text = svg(&Scene { graph: Some(&g), state: Some(&st), ..Default::default() }, "test");
        let doc = roxmltree::Document::parse(&text).unwrap();
        assert_eq!(count(&doc, "interface"), g.degree(0));
        assert_eq!(count(&doc, "edge"), g.edges.len());
    }
}
