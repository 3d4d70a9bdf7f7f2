use serde::{Deserialize, Serialize};

use super::{parents, tree_arity, DimerSet, TreeError};
use crate::tiling::LatticeGraph;

/// A contour given by its finite connected interior.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeContour {
    pub enclosed: Vec<usize>,
    /// Edges with exactly one end enclosed.
    pub boundary: Vec<(usize, usize)>,
}

impl TreeContour {
    pub fn new(tree: &LatticeGraph, mut enclosed: Vec<usize>) -> Self {
        enclosed.sort_unstable();
        let inside = |v: usize| enclosed.binary_search(&v).is_ok();
        let boundary = tree.edges.iter().copied().filter(|&(u, v)| inside(u) != inside(v)).collect();
        Self { enclosed, boundary }
    }

    pub fn ratio(&self, d: &DimerSet) -> f64 {
        let hits = self.boundary.iter().filter(|&&(u, v)| d.contains(u, v)).count();
        hits as f64 / self.boundary.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioWitness {
    pub ratio: f64,
    pub contour: TreeContour,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeRow {
    pub size: usize,
    /// Connected sets of this size containing the root.
    pub count: u64,
    pub max_ratio_root: f64,
    /// A root-containing set attaining `max_ratio_root`.
    pub argmax_root: Vec<usize>,
    /// Over connected sets of this size anywhere in the generated interior.
    pub max_ratio_all: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeierlsReport {
    /// Contours surrounding the root, by exhaustive enumeration.
    pub root: RatioWitness,
    /// Contours around any connected set.
    pub all_anchor: RatioWitness,
    pub sizes: Vec<SizeRow>,
}

struct Ctx<'a> {
    tree: &'a LatticeGraph,
    d: &'a DimerSet,
    parent: Vec<Option<usize>>,
    /// Dimers among each vertex's child edges.
    down: Vec<i32>,
    /// Whether every neighbour of the vertex is generated.
    allowed: Vec<bool>,
}

impl<'a> Ctx<'a> {
    fn new(tree: &'a LatticeGraph, d: &'a DimerSet) -> Self {
        let parent = parents(tree);
        let down = (0..tree.len()).map(|v| tree.children[v].iter().filter(|&&c| d.contains(v, c)).count() as i32).collect();
        let allowed = (0..tree.len()).map(|v| tree.generation[v] < tree.generations).collect();
        Self { tree, d, parent, down, allowed }
    }

    fn up(&self, v: usize) -> i32 {
        self.parent[v].map_or(0, |p| self.d.contains(p, v) as i32)
    }

    /// Visit every connected set whose top vertex is `anchor`, up to `max` vertices.
    fn enumerate(&self, anchor: usize, max: usize, visit: &mut impl FnMut(&[usize], i32)) {
        if !self.allowed[anchor] || max == 0 {
            return;
        }
        let mut set = vec![anchor];
        let hits = self.up(anchor) + self.down[anchor];
        visit(&set, hits);
        let ext = self.tree.children[anchor].clone();
        self.grow(&mut set, &ext, hits, max, visit);
    }

    fn grow(&self, set: &mut Vec<usize>, ext: &[usize], hits: i32, max: usize, visit: &mut impl FnMut(&[usize], i32)) {
        if set.len() == max {
            return;
        }
        for (i, &v) in ext.iter().enumerate() {
            if !self.allowed[v] {
                continue;
            }
            let h = hits - self.up(v) + self.down[v];
            set.push(v);
            visit(set, h);
            let mut next: Vec<usize> = ext[i + 1..].to_vec();
            next.extend_from_slice(&self.tree.children[v]);
            self.grow(set, &next, h, max, visit);
            set.pop();
        }
    }

    /// Best dimer count on the boundary for each size, over sets topped at each vertex.
    fn knapsack(&self, max: usize) -> Vec<Vec<i32>> {
        const NONE: i32 = i32::MIN / 2;
        let n = self.tree.len();
        let mut f = vec![Vec::new(); n];
        for v in (0..n).rev() {
            if !self.allowed[v] {
                continue;
            }
            let mut g = vec![NONE; max + 1];
            g[1] = self.down[v];
            for &c in &self.tree.children[v] {
                if f[c].is_empty() {
                    continue;
                }
                let lose = self.d.contains(v, c) as i32;
                let mut h = g.clone();
                for a in 1..=max {
                    if g[a] == NONE {
                        continue;
                    }
                    for b in 1..=max - a {
                        let fc: &Vec<i32> = &f[c];
                        if fc[b] != NONE {
                            h[a + b] = h[a + b].max(g[a] + fc[b] - lose);
                        }
                    }
                }
                g = h;
            }
            f[v] = g;
        }
        f
    }
}

/// Supremum of `|γ|_D / |γ|` over contours enclosing connected sets of
/// `1..=max_interior` vertices whose neighbours are all generated.
///
/// Root-surrounding contours are enumerated one by one; the maximum over all
/// sets comes from a per-anchor knapsack, with its witness recovered by
/// enumeration at the maximising anchor.
pub fn peierls_ratio(tree: &LatticeGraph, d: &DimerSet, max_interior: usize) -> Result<PeierlsReport, TreeError> {
    let arity = tree_arity(tree)?;
    if max_interior == 0 {
        return Err(TreeError::InvalidParameter("max_interior must be positive".into()));
    }
    let ctx = Ctx::new(tree, d);
    let bnd = |s: usize| (s * (arity + 1) - 2 * (s - 1)) as f64;

    let mut counts = vec![0u64; max_interior + 1];
    let mut best_root = vec![-1i32; max_interior + 1];
    let mut arg_root = vec![Vec::new(); max_interior + 1];
    let mut root_best = (-1.0f64, Vec::new());
    ctx.enumerate(0, max_interior, &mut |set, hits| {
        let s = set.len();
        counts[s] += 1;
        if hits > best_root[s] {
            best_root[s] = hits;
            arg_root[s] = set.to_vec();
        }
        let r = hits as f64 / bnd(s);
        if r > root_best.0 {
            root_best = (r, set.to_vec());
        }
    });

    let f = ctx.knapsack(max_interior);
    let mut best_all = vec![0i32; max_interior + 1];
    let mut arg = (-1.0f64, 0usize, 0usize, 0i32);
    for v in 0..tree.len() {
        if f[v].is_empty() {
            continue;
        }
        for s in 1..=max_interior {
            if f[v][s] < 0 {
                continue;
            }
            let hits = f[v][s] + ctx.up(v);
            best_all[s] = best_all[s].max(hits);
            let r = hits as f64 / bnd(s);
            if r > arg.0 {
                arg = (r, v, s, hits);
            }
        }
    }
    let mut witness = None;
    ctx.enumerate(arg.1, arg.2, &mut |set, hits| {
        if witness.is_none() && set.len() == arg.2 && hits == arg.3 {
            witness = Some(set.to_vec());
        }
    });
    let witness = witness.expect("knapsack optimum is attained by some set");

    let sizes = (1..=max_interior)
        .map(|s| SizeRow {
            size: s,
            count: counts[s],
            max_ratio_root: best_root[s].max(0) as f64 / bnd(s),
            argmax_root: std::mem::take(&mut arg_root[s]),
            max_ratio_all: best_all[s] as f64 / bnd(s),
        })
        .collect();
    Ok(PeierlsReport {
        root: RatioWitness { ratio: root_best.0, contour: TreeContour::new(tree, root_best.1) },
        all_anchor: RatioWitness { ratio: arg.0, contour: TreeContour::new(tree, witness) },
        sizes,
    })
}

/// A simple dual path crossing `length` bonds, all of them dimers.
///
/// The plane minus the tree splits into sectors between consecutive leaves;
/// a bond separates the sector to its left from the one to its right, and a
/// dual path is a walk on sectors. Returns the crossed bonds in order.
pub fn path_ratio_witness(tree: &LatticeGraph, d: &DimerSet, length: usize) -> Result<Vec<(usize, usize)>, TreeError> {
    tree_arity(tree)?;
    if length == 0 || d.is_empty() {
        return Err(TreeError::NotFound(length));
    }
    let n = tree.len();
    // leaf-index range below each vertex
    let mut lo = vec![usize::MAX; n];
    let mut hi = vec![0usize; n];
    let mut leaves = 0usize;
    for v in 0..n {
        if tree.children[v].is_empty() {
            lo[v] = leaves;
            hi[v] = leaves;
            leaves += 1;
        }
    }
    for v in (0..n).rev() {
        for &c in &tree.children[v] {
            lo[v] = lo[v].min(lo[c]);
            hi[v] = hi[v].max(hi[c]);
        }
    }
    let mut adj: Vec<Vec<(usize, (usize, usize))>> = vec![Vec::new(); leaves.max(1)];
    for &(u, v) in &d.dimers {
        let c = if tree.children[u].contains(&v) { v } else { u };
        let (a, b) = (lo[c], (hi[c] + 1) % leaves);
        if a != b {
            adj[a].push((b, (u, v)));
            adj[b].push((a, (u, v)));
        }
    }
    let mut seen = vec![false; leaves];
    let mut path = Vec::new();
    fn dfs(
        s: usize,
        left: usize,
        adj: &[Vec<(usize, (usize, usize))>],
        seen: &mut [bool],
        path: &mut Vec<(usize, usize)>,
    ) -> bool {
        if left == 0 {
            return true;
        }
        for &(t, e) in &adj[s] {
            if !seen[t] {
                seen[t] = true;
                path.push(e);
                if dfs(t, left - 1, adj, seen, path) {
                    return true;
                }
                path.pop();
                seen[t] = false;
            }
        }
        false
    }
    for s in 0..leaves {
        if adj[s].is_empty() {
            continue;
        }
        seen[s] = true;
        if dfs(s, length, &adj, &mut seen, &mut path) {
            return Ok(path);
        }
        seen[s] = false;
    }
    Err(TreeError::NotFound(length))
}
