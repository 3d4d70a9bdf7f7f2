use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{energy, Dynamics, GibbsError, SamplerConfig, SpinState};
use crate::tiling::LatticeGraph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub sweep: usize,
    pub energy: f64,
    pub magnetization: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainResult<T> {
    pub state: SpinState,
    /// One row per sweep, burn-in included.
    pub trace: Vec<TraceRow>,
    /// Observations from recorded sweeps.
    pub samples: Vec<T>,
}

fn rng_for(seed: u64, replica: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica as u64);
    rng
}

fn flip_probability(dynamics: Dynamics, beta: f64, spin: i8, field: i64) -> f64 {
    // energy change of flipping `spin` in local field `field`
    let de = 2.0 * spin as f64 * field as f64;
    match dynamics {
        Dynamics::Metropolis => {
            if de <= 0.0 {
                1.0
            } else {
                (-beta * de).exp()
            }
        }
        Dynamics::HeatBath => {
            if de == 0.0 {
                0.5
            } else {
                1.0 / (1.0 + (beta * de).exp())
            }
        }
    }
}

/// Single-site dynamics; a sweep is one update attempt per free vertex at
/// uniformly random sites. `observe` runs on every recorded sweep.
pub fn run_chain<T>(
    graph: &LatticeGraph,
    state: &SpinState,
    config: &SamplerConfig,
    replica: usize,
    mut observe: impl FnMut(usize, &SpinState) -> T,
) -> Result<ChainResult<T>, GibbsError> {
    config.validate()?;
    if state.spins.len() != graph.len() {
        return Err(GibbsError::InvalidConfig("state does not match graph".into()));
    }
    let mut rng = rng_for(config.seed, replica);
    let mut st = state.clone();
    let free: Vec<usize> = st.free().collect();
    let mut e = energy(graph, &st);
    let mut mag: i64 = free.iter().map(|&v| st.spins[v] as i64).sum();
    let mut trace = Vec::with_capacity(config.burn_in + config.sweeps);
    let mut samples = Vec::new();
    for sweep in 0..config.burn_in + config.sweeps {
        if !free.is_empty() {
            for _ in 0..free.len() {
                let v = free[rng.gen_range(0..free.len())];
                let s = st.spins[v];
                let h: i64 = graph.adjacency[v].iter().map(|&w| st.spins[w] as i64).sum();
                let p = flip_probability(config.dynamics, config.beta, s, h);
                if rng.gen::<f64>() < p {
                    st.spins[v] = -s;
                    e += 2.0 * (s as i64 * h) as f64;
                    mag -= 2 * s as i64;
                }
            }
        }
        let m = if free.is_empty() { 0.0 } else { mag as f64 / free.len() as f64 };
        trace.push(TraceRow { sweep, energy: e, magnetization: m });
        if sweep >= config.burn_in && (sweep - config.burn_in) % config.record_every == 0 {
            samples.push(observe(sweep, &st));
        }
    }
    Ok(ChainResult { state: st, trace, samples })
}

/// All replicas in parallel, returned in replica order.
pub fn run_replicas<T: Send>(
    graph: &LatticeGraph,
    state: &SpinState,
    config: &SamplerConfig,
    observe: impl Fn(usize, &SpinState) -> T + Sync,
) -> Result<Vec<ChainResult<T>>, GibbsError> {
    config.validate()?;
    (0..config.replicas).into_par_iter().map(|r| run_chain(graph, state, config, r, &observe)).collect()
}
