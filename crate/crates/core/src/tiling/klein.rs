//! Beltrami–Klein coordinates, where geodesics are straight chords.

use crate::hypgeo::{Model, ModelPoint};

/// Klein-model coordinates of an interior point: `2z / (1 + |z|²)` with `z` in the disk.
pub fn klein(p: &ModelPoint<f64>) -> [f64; 2] {
    let d = p.to_model(Model::Disk);
    let s = 2.0 / (1.0 + d.x * d.x + d.y * d.y);
    [d.x * s, d.y * s]
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Whether the open segments `a1a2` and `b1b2` meet at a single interior point.
pub fn segments_cross(a1: [f64; 2], a2: [f64; 2], b1: [f64; 2], b2: [f64; 2]) -> bool {
    let d1 = orient(b1, b2, a1);
    let d2 = orient(b1, b2, a2);
    let d3 = orient(a1, a2, b1);
    let d4 = orient(a1, a2, b2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}
