//! Ising Gibbs sampling on embedded graphs with frozen boundary spins,
//! interface extraction, and the rigidity and phase observables.

mod experiments;
mod interfaces;
mod sampler;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tiling::{BoxRegion, LatticeGraph, TilingError};

pub use experiments::{phase_probe, rigidity_experiment, symmetry_center, PhaseStats, RigidityRow};
pub use interfaces::{
    containment_check, escape_threshold, extract_interfaces, Component, ContourSet, InterfaceContext, Label, Partition,
};
pub use sampler::{run_chain, run_replicas, ChainResult, TraceRow};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GibbsError {
    #[error("inconsistent boundary: {0}")]
    InconsistentBoundary(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Geometry(#[from] crate::hypgeo::GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Dynamics {
    Metropolis,
    #[default]
    HeatBath,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Inverse temperature; `f64::INFINITY` gives zero-temperature dynamics.
    pub beta: f64,
    pub sweeps: usize,
    pub burn_in: usize,
    pub replicas: usize,
    pub seed: u64,
    #[serde(default)]
    pub dynamics: Dynamics,
    /// Observables are taken every `record_every` sweeps after burn-in.
    #[serde(default = "one")]
    pub record_every: usize,
}

fn one() -> usize {
    1
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { beta: 1.0, sweeps: 1000, burn_in: 100, replicas: 1, seed: 0, dynamics: Dynamics::HeatBath, record_every: 1 }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<(), GibbsError> {
        if self.beta.is_nan() || self.beta < 0.0 {
            return Err(GibbsError::InvalidConfig(format!("beta = {}", self.beta)));
        }
        if self.replicas == 0 {
            return Err(GibbsError::InvalidConfig("replicas must be at least 1".into()));
        }
        if self.record_every == 0 {
            return Err(GibbsError::InvalidConfig("record_every must be at least 1".into()));
        }
        Ok(())
    }
}

/// Spins on every graph vertex; frozen ones are never updated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinState {
    pub spins: Vec<i8>,
    pub frozen: Vec<bool>,
}

impl SpinState {
    pub fn new(spins: Vec<i8>, frozen: Vec<bool>) -> Self {
        assert_eq!(spins.len(), frozen.len());
        assert!(spins.iter().all(|&s| s == 1 || s == -1));
        Self { spins, frozen }
    }

    pub fn all_plus(n: usize) -> Self {
        Self { spins: vec![1; n], frozen: vec![false; n] }
    }

    /// Box state: everything outside the interior is frozen at `outside`,
    /// the interior starts from `initial`.
    pub fn for_box(region: &BoxRegion, outside: &[i8], initial: &[i8]) -> Self {
        let n = outside.len();
        let mut spins = outside.to_vec();
        let mut frozen = vec![true; n];
        for &v in &region.interior {
            spins[v] = initial[v];
            frozen[v] = false;
        }
        Self::new(spins, frozen)
    }

    pub fn free(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.spins.len()).filter(|&v| !self.frozen[v])
    }

    /// Mean spin over free vertices.
    pub fn magnetization(&self) -> f64 {
        let (s, n) = self.free().fold((0i64, 0usize), |(s, n), v| (s + self.spins[v] as i64, n + 1));
        if n == 0 {
            0.0
        } else {
            s as f64 / n as f64
        }
    }

    pub fn flipped(&self) -> Self {
        Self { spins: self.spins.iter().map(|s| -s).collect(), frozen: self.frozen.clone() }
    }
}

/// `H(σ) = −Σ_{u∼v} σ(u)σ(v)` over all graph edges.
pub fn energy(graph: &LatticeGraph, state: &SpinState) -> f64 {
    -graph.edges.iter().map(|&(u, v)| (state.spins[u] * state.spins[v]) as i64).sum::<i64>() as f64
}

#[cfg(test)]
mod tests;
