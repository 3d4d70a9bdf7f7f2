//! Chain coverings of Cayley trees, dimer sets and their ground states,
//! Peierls ratios, and sampling checks of stability.

mod peierls;
mod stability;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gibbs::{GibbsError, SpinState};
use crate::tiling::{GraphKind, LatticeGraph};

pub use peierls::{path_ratio_witness, peierls_ratio, PeierlsReport, RatioWitness, SizeRow, TreeContour};
pub use stability::{tree_stability_experiment, StabilityRow};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("graph is not a Cayley tree")]
    NotATree,
    #[error("tree depth {depth} cannot hold a {k}-chain")]
    DepthTooSmall { depth: usize, k: usize },
    #[error("k = {0} is even; middle dimers need odd k")]
    KEven(usize),
    #[error("bad offsets l = {l}, n = {n} for k = {k}")]
    BadOffsets { l: usize, n: usize, k: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no path of length {0} crosses only dimers")]
    NotFound(usize),
    #[error(transparent)]
    Gibbs(#[from] GibbsError),
}

/// Distinct consecutive-adjacent vertices `x₀ … x_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub vertices: Vec<usize>,
}

impl Chain {
    pub fn bonds(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Covering {
    pub k: usize,
    pub chains: Vec<Chain>,
    /// Chains cut short by the generation horizon.
    pub truncated: Vec<bool>,
}

impl Covering {
    pub fn is_complete(&self, i: usize) -> bool {
        !self.truncated[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Middle,
    Offset { l: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimerSet {
    /// Normalised `(min, max)` edges, sorted.
    pub dimers: Vec<(usize, usize)>,
    pub provenance: Provenance,
}

impl DimerSet {
    pub(crate) fn new(mut dimers: Vec<(usize, usize)>, provenance: Provenance) -> Self {
        for d in &mut dimers {
            *d = (d.0.min(d.1), d.0.max(d.1));
        }
        dimers.sort_unstable();
        Self { dimers, provenance }
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.dimers.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn len(&self) -> usize {
        self.dimers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dimers.is_empty()
    }
}

fn tree_arity(tree: &LatticeGraph) -> Result<usize, TreeError> {
    match tree.kind {
        GraphKind::Tree { n } => Ok(n),
        _ => Err(TreeError::NotATree),
    }
}

/// Parent of each vertex (`None` for the root).
pub(crate) fn parents(tree: &LatticeGraph) -> Vec<Option<usize>> {
    let mut p = vec![None; tree.len()];
    for (v, ch) in tree.children.iter().enumerate() {
        for &c in ch {
            p[c] = Some(v);
        }
    }
    p
}

/// Chains grown from the root along leftmost children; each new chain starts
/// at the uncovered vertex nearest the root, leftmost on ties.
pub fn left_greedy_covering(tree: &LatticeGraph, k: usize) -> Result<Covering, TreeError> {
    tree_arity(tree)?;
    if k == 0 || tree.generations < k {
        return Err(TreeError::DepthTooSmall { depth: tree.generations, k });
    }
    let mut covered = vec![false; tree.len()];
    let mut chains = Vec::new();
    let mut truncated = Vec::new();
    // ids run by generation, left to right within each
    for start in 0..tree.len() {
        if covered[start] {
            continue;
        }
        let mut vs = vec![start];
        covered[start] = true;
        let mut x = start;
        while vs.len() <= k {
            match tree.children[x].first() {
                Some(&c) => {
                    covered[c] = true;
                    vs.push(c);
                    x = c;
                }
                None => break,
            }
        }
        truncated.push(vs.len() < k + 1);
        chains.push(Chain { vertices: vs });
    }
    Ok(Covering { k, chains, truncated })
}

/// The middle bond `(x_m, x_{m+1})` of every complete chain, `k = 2m+1`.
pub fn middle_dimers(cov: &Covering) -> Result<DimerSet, TreeError> {
    if cov.k % 2 == 0 {
        return Err(TreeError::KEven(cov.k));
    }
    let m = cov.k / 2;
    let dimers = cov
        .chains
        .iter()
        .zip(&cov.truncated)
        .filter(|(_, &t)| !t)
        .map(|(c, _)| (c.vertices[m], c.vertices[m + 1]))
        .collect();
    Ok(DimerSet::new(dimers, Provenance::Middle))
}

/// `D_{l:n}`: on each complete chain, bond `l` counted from the (+)-end
/// under the middle ground state with root spin `+1`.
///
/// With `e₊ = x₀` this is `(x_{l−1}, x_l)`; otherwise `(x_{k−l}, x_{k−l+1})`.
/// `l = n` gives the middle dimers.
pub fn offset_dimers(tree: &LatticeGraph, cov: &Covering, l: usize, n: usize) -> Result<DimerSet, TreeError> {
    let k = cov.k;
    if n == 0 || l < n || l + n != k + 1 {
        return Err(TreeError::BadOffsets { l, n, k });
    }
    let sigma = sigma_from_dimers(tree, &middle_dimers(cov)?, 1);
    let dimers = cov
        .chains
        .iter()
        .zip(&cov.truncated)
        .filter(|(_, &t)| !t)
        .map(|(c, _)| {
            let x = &c.vertices;
            if sigma.spins[x[0]] == 1 {
                (x[l - 1], x[l])
            } else {
                (x[k - l], x[k - l + 1])
            }
        })
        .collect();
    Ok(DimerSet::new(dimers, Provenance::Offset { l, n }))
}

/// The configuration with `σ(u)σ(v) = −1` exactly on dimers and the given root spin.
pub fn sigma_from_dimers(tree: &LatticeGraph, d: &DimerSet, root_sign: i8) -> SpinState {
    let mut spins = vec![0i8; tree.len()];
    if !spins.is_empty() {
        spins[0] = root_sign;
    }
    // parents precede children in id order
    for v in 0..tree.len() {
        for &c in &tree.children[v] {
            spins[c] = if d.contains(v, c) { -spins[v] } else { spins[v] };
        }
    }
    SpinState::new(spins, vec![false; tree.len()])
}

/// Mean spin over vertices of generation at most `depth`.
pub fn tree_magnetization(tree: &LatticeGraph, state: &SpinState, depth: usize) -> f64 {
    let (s, n) = (0..tree.len())
        .filter(|&v| tree.generation[v] <= depth)
        .fold((0i64, 0usize), |(s, n), v| (s + state.spins[v] as i64, n + 1));
    s as f64 / n.max(1) as f64
}

#[cfg(test)]
mod tests;
