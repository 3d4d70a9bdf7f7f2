use serde::{Deserialize, Serialize};

use super::{sigma_from_dimers, tree_arity, DimerSet, TreeError};
use crate::gibbs::{run_replicas, SamplerConfig, SpinState};
use crate::tiling::LatticeGraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityRow {
    pub beta: f64,
    pub samples: usize,
    /// Mean of `σ(t)σ_D(t)` over the inner ball.
    pub overlap: f64,
    /// Standard error across replica means.
    pub se: f64,
}

/// Overlap with `σ_D` on generations `≤ inner_depth`, with the last
/// generation frozen to `σ_D` and the chain started from it.
pub fn tree_stability_experiment(
    tree: &LatticeGraph,
    d: &DimerSet,
    config: &SamplerConfig,
    betas: &[f64],
    inner_depth: usize,
) -> Result<Vec<StabilityRow>, TreeError> {
    tree_arity(tree)?;
    let ground = sigma_from_dimers(tree, d, 1);
    let frozen: Vec<bool> = tree.generation.iter().map(|&g| g >= tree.generations).collect();
    let start = SpinState::new(ground.spins.clone(), frozen);
    let inner: Vec<usize> = (0..tree.len()).filter(|&v| tree.generation[v] <= inner_depth).collect();
    let mut rows = Vec::new();
    for &beta in betas {
        let cfg = SamplerConfig { beta, ..config.clone() };
        let runs = run_replicas(tree, &start, &cfg, |_, st| {
            inner.iter().map(|&v| (st.spins[v] * ground.spins[v]) as f64).sum::<f64>() / inner.len() as f64
        })?;
        let means: Vec<f64> = runs.iter().map(|r| r.samples.iter().sum::<f64>() / r.samples.len().max(1) as f64).collect();
        let samples = runs.iter().map(|r| r.samples.len()).sum();
        let k = means.len() as f64;
        let overlap = means.iter().sum::<f64>() / k;
        let se = if means.len() > 1 {
            (means.iter().map(|m| (m - overlap).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt()
        } else {
            0.0
        };
        rows.push(StabilityRow { beta, samples, overlap, se });
    }
    Ok(rows)
}
