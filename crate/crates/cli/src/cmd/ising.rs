use std::path::PathBuf;

use clap::{Args, ValueEnum};
use millefeuille::families::SignedGeodesicFamily;
use millefeuille::gibbs::{
    phase_probe, rigidity_experiment, run_chain, symmetry_center, Dynamics, SamplerConfig, SpinState,
};
use millefeuille::io::{FamilyFile, GraphFile};
use millefeuille::tiling::{assign_signs, build_cayley_tree, build_tiling, graph_ball, LatticeGraph};
use millefeuille::treestates::{left_greedy_covering, middle_dimers, offset_dimers, sigma_from_dimers, tree_stability_experiment, DimerSet};
use millefeuille::ModelPoint64;
use serde::{Deserialize, Serialize};

use super::{json_with_run_id, read_json, require, Failure, Outcome};
use crate::config::{self, merge, parse_grid};
use crate::manifest::{sidecar, Outputs, RunManifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Rigidity,
    Phase,
    TreeStability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DynamicsArg {
    HeatBath,
    Metropolis,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IsingArgs {
    #[arg(long, value_enum)]
    pub experiment: Option<Experiment>,
    /// Face size of the tessellation.
    #[arg(long)]
    pub p: Option<usize>,
    /// Faces per vertex of the tessellation.
    #[arg(long)]
    pub q: Option<usize>,
    /// Graph radius of the box around the vertex nearest the origin.
    #[arg(long)]
    pub radius: Option<usize>,
    /// Growth generations of the lattice [default: radius + 2].
    #[arg(long)]
    pub generations: Option<usize>,
    /// Family file fixing the boundary condition.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Comma-separated inverse temperatures.
    #[arg(long)]
    pub beta_grid: Option<String>,
    /// Comma-separated corridor parameters for the rigidity experiment.
    #[arg(long)]
    pub m_grid: Option<String>,
    /// Radius of `U_r(Z)` for the phase probe.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub sweeps: Option<usize>,
    /// Sweeps discarded before recording [default: sweeps / 10].
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long)]
    pub record_every: Option<usize>,
    #[arg(long)]
    pub replicas: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub dynamics: Option<DynamicsArg>,
    /// Tree branching for the tree-stability experiment.
    #[arg(long)]
    pub n: Option<usize>,
    /// Tree depth; the last generation is frozen.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Chain length of the covering.
    #[arg(long)]
    pub k: Option<usize>,
    /// Offset dimers `D_{l:n}` instead of middle dimers; needs `--n-offset`.
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub n_offset: Option<usize>,
    /// Generations over which the overlap is averaged.
    #[arg(long)]
    pub inner_depth: Option<usize>,
    /// Statistics CSV to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the lattice as a graph file.
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
    /// Also write the final state of one extra chain at the last beta.
    #[arg(long)]
    pub state_out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
struct Lattice {
    p: usize,
    q: usize,
    radius: usize,
    generations: usize,
    family: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
struct Tree {
    n: usize,
    depth: usize,
    k: usize,
    l: Option<usize>,
    n_offset: Option<usize>,
    inner_depth: usize,
}

#[derive(Debug, Clone, Serialize)]
struct Settings {
    experiment: Experiment,
    #[serde(skip_serializing_if = "Option::is_none")]
    lattice: Option<Lattice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<Tree>,
    betas: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    sampler: SamplerConfig,
    out: PathBuf,
    graph_out: Option<PathBuf>,
    state_out: Option<PathBuf>,
}

fn settings(mut a: IsingArgs) -> Result<Settings, Failure> {
    let file: IsingArgs = config::load(a.config.as_deref())?;
    merge!(a, file; experiment, p, q, radius, generations, family, beta_grid, m_grid, r, sweeps, burn_in,
        record_every, replicas, seed, dynamics, n, depth, k, l, n_offset, inner_depth, out, graph_out, state_out);
    let experiment = require(a.experiment, "experiment")?;
    let sweeps = a.sweeps.unwrap_or(5000);
    let sampler = SamplerConfig {
        beta: 1.0,
        sweeps,
        burn_in: a.burn_in.unwrap_or(sweeps / 10),
        replicas: a.replicas.unwrap_or(20),
        seed: a.seed.unwrap_or(0),
        dynamics: match a.dynamics.unwrap_or(DynamicsArg::HeatBath) {
            DynamicsArg::HeatBath => Dynamics::HeatBath,
            DynamicsArg::Metropolis => Dynamics::Metropolis,
        },
        record_every: a.record_every.unwrap_or(10),
    };
    if sampler.replicas == 0 {
        return Err(Failure::msg("--replicas must be at least 1"));
    }
    if sampler.sweeps == 0 {
        return Err(Failure::msg("--sweeps must be at least 1"));
    }
    if sampler.record_every == 0 {
        return Err(Failure::msg("--record-every must be at least 1"));
    }
    let betas = parse_grid("beta-grid", a.beta_grid.as_deref().unwrap_or("1,2"))?;
    if let Some(b) = betas.iter().find(|b| b.is_nan() || **b < 0.0) {
        return Err(Failure::msg(format!("--beta-grid holds a negative value {b}")));
    }
    let (lattice, tree) = match experiment {
        Experiment::TreeStability => {
            if a.l.is_some() != a.n_offset.is_some() {
                return Err(Failure::msg("--l and --n-offset go together"));
            }
            let tree = Tree {
                n: a.n.unwrap_or(2),
                depth: a.depth.unwrap_or(8),
                k: a.k.unwrap_or(5),
                l: a.l,
                n_offset: a.n_offset,
                inner_depth: a.inner_depth.unwrap_or(5),
            };
            if tree.inner_depth >= tree.depth {
                return Err(Failure::msg("--inner-depth must be below --depth"));
            }
            (None, Some(tree))
        }
        _ => {
            let radius = a.radius.unwrap_or(5);
            let lattice = Lattice {
                p: a.p.unwrap_or(3),
                q: a.q.unwrap_or(7),
                radius,
                generations: a.generations.unwrap_or(radius + 2),
                family: require(a.family, "family")?,
            };
            (Some(lattice), None)
        }
    };
    let m_grid = match experiment {
        Experiment::Rigidity => Some(parse_grid("m-grid", a.m_grid.as_deref().unwrap_or("0.25,0.5,1,1.5,2,3"))?),
        _ => None,
    };
    let r = match experiment {
        Experiment::Phase => Some(a.r.unwrap_or(3.0)),
        _ => None,
    };
    Ok(Settings {
        experiment,
        lattice,
        tree,
        betas,
        m_grid,
        r,
        sampler,
        out: require(a.out, "out")?,
        graph_out: a.graph_out,
        state_out: a.state_out,
    })
}

/// One CSV row; cells that do not apply to an experiment stay empty.
#[derive(Debug, Default, Serialize)]
struct Row {
    run_id: String,
    experiment: &'static str,
    beta: f64,
    m: Option<f64>,
    replicas: usize,
    sweeps: usize,
    samples: usize,
    escapes: Option<usize>,
    escape_freq: Option<f64>,
    escape_se: Option<f64>,
    wrong_partition: Option<usize>,
    wrong_freq: Option<f64>,
    wrong_se: Option<f64>,
    lambda_hits: Option<usize>,
    lambda_freq: Option<f64>,
    lambda_se: Option<f64>,
    #[serde(rename = "mean_spin_Ur")]
    mean_spin_ur: Option<f64>,
    #[serde(rename = "mean_spin_Ur_plus")]
    mean_spin_ur_plus: Option<f64>,
    overlap: Option<f64>,
    overlap_se: Option<f64>,
    mean_magnetization: Option<f64>,
}

struct Prepared {
    graph: LatticeGraph,
    rows: Vec<Row>,
    /// Boundary spins and free sites for the optional state dump.
    start: SpinState,
}

fn lattice_run(s: &Settings, l: &Lattice, fam: &SignedGeodesicFamily, run_id: &str) -> Result<Prepared, Failure> {
    let graph = build_tiling(l.p, l.q, l.generations)?;
    let center = graph.nearest_vertex(&ModelPoint64::disk(0.0, 0.0));
    let region = graph_ball(&graph, center, l.radius)?;
    let mut rows = Vec::new();
    match s.experiment {
        Experiment::Rigidity => {
            let m_grid = s.m_grid.as_deref().expect("set for rigidity");
            for r in rigidity_experiment(&graph, fam, &region, &s.sampler, &s.betas, m_grid)? {
                rows.push(Row {
                    run_id: run_id.into(),
                    experiment: "rigidity",
                    beta: r.beta,
                    m: Some(r.m),
                    replicas: r.replicas,
                    sweeps: s.sampler.sweeps,
                    samples: r.samples,
                    escapes: Some(r.escapes),
                    escape_freq: Some(r.escape_freq),
                    escape_se: Some(r.escape_se),
                    wrong_partition: Some(r.wrong_partition),
                    wrong_freq: Some(r.wrong_freq),
                    wrong_se: Some(r.wrong_se),
                    mean_magnetization: Some(r.mean_magnetization),
                    ..Default::default()
                });
            }
        }
        Experiment::Phase => {
            let z = symmetry_center(fam)?;
            let r = s.r.expect("set for phase");
            // the probe compares against the + phase around Z; a global flip fixes the convention
            let mut fam = fam.clone();
            if fam.sign(&z) == Some(-1) {
                fam.base_sign = -fam.base_sign;
                eprintln!("note: family flipped so that Z lies in a + region");
            }
            for &beta in &s.betas {
                let cfg = SamplerConfig { beta, ..s.sampler.clone() };
                let p = phase_probe(&graph, &fam, &region, &cfg, &z, r)?;
                rows.push(Row {
                    run_id: run_id.into(),
                    experiment: "phase",
                    beta,
                    replicas: cfg.replicas,
                    sweeps: cfg.sweeps,
                    samples: p.samples,
                    lambda_hits: Some(p.lambda_hits),
                    lambda_freq: Some(p.lambda_freq),
                    lambda_se: Some(p.lambda_se),
                    mean_spin_ur: Some(p.mean_spin_ur),
                    mean_spin_ur_plus: Some(p.mean_spin_ur_plus),
                    ..Default::default()
                });
            }
        }
        Experiment::TreeStability => unreachable!("tree experiment"),
    }
    let signs = assign_signs(&graph, fam)?;
    let start = SpinState::for_box(&region, &signs.spins, &signs.spins);
    Ok(Prepared { graph, rows, start })
}

fn dimers_for(tree: &LatticeGraph, t: &Tree) -> Result<DimerSet, Failure> {
    let cov = left_greedy_covering(tree, t.k)?;
    Ok(match (t.l, t.n_offset) {
        (Some(l), Some(n)) => offset_dimers(tree, &cov, l, n)?,
        _ => middle_dimers(&cov)?,
    })
}

fn tree_run(s: &Settings, t: &Tree, run_id: &str) -> Result<Prepared, Failure> {
    let graph = build_cayley_tree(t.n, t.depth)?;
    let d = dimers_for(&graph, t)?;
    let rows = tree_stability_experiment(&graph, &d, &s.sampler, &s.betas, t.inner_depth)?
        .into_iter()
        .map(|r| Row {
            run_id: run_id.into(),
            experiment: "tree-stability",
            beta: r.beta,
            replicas: s.sampler.replicas,
            sweeps: s.sampler.sweeps,
            samples: r.samples,
            overlap: Some(r.overlap),
            overlap_se: Some(r.se),
            ..Default::default()
        })
        .collect();
    let ground = sigma_from_dimers(&graph, &d, 1);
    let frozen = graph.generation.iter().map(|&g| g >= graph.generations).collect();
    let start = SpinState::new(ground.spins, frozen);
    Ok(Prepared { graph, rows, start })
}

pub fn run(args: IsingArgs) -> Result<Outcome, Failure> {
    let config_path = args.config.clone();
    let s = settings(args)?;
    let mut inputs: Vec<&std::path::Path> = config_path.iter().map(|p| p.as_path()).collect();
    let family = match &s.lattice {
        Some(l) => {
            inputs.push(&l.family);
            let file: FamilyFile = read_json("family", &l.family)?;
            Some(file.to_family().map_err(|e| Failure::usage(anyhow::anyhow!("--family: {e}")))?)
        }
        None => None,
    };
    let manifest = RunManifest::new("ising", &s, Some(s.sampler.seed), &inputs)?;
    let run_id = manifest.run_id.clone();

    let prepared = match (&s.lattice, &s.tree, &family) {
        (Some(l), _, Some(fam)) => lattice_run(&s, l, fam, &run_id)?,
        (_, Some(t), _) => tree_run(&s, t, &run_id)?,
        _ => unreachable!("settings pick exactly one setup"),
    };

    let mut out = Outputs::new();
    let mut csv = csv::Writer::from_writer(Vec::new());
    for row in &prepared.rows {
        csv.serialize(row).map_err(Failure::usage)?;
    }
    let bytes = csv.into_inner().map_err(|e| Failure::usage(anyhow::anyhow!("{e}")))?;
    out.write(&s.out, &bytes)?;
    if let Some(path) = &s.graph_out {
        out.write(path, &json_with_run_id(&GraphFile::from_graph(&prepared.graph), &run_id))?;
    }
    if let Some(path) = &s.state_out {
        let beta = *s.betas.last().expect("non-empty grid");
        let cfg = SamplerConfig { beta, replicas: 1, ..s.sampler.clone() };
        let chain = run_chain(&prepared.graph, &prepared.start, &cfg, 0, |_, _| ())?;
        out.write(path, &json_with_run_id(&chain.state, &run_id))?;
    }
    out.finish(manifest, &s.out)?;
    eprintln!("{} rows written to {}", prepared.rows.len(), s.out.display());
    eprintln!("manifest: {}", sidecar(&s.out, "manifest.json").display());
    Ok(Outcome::Ok)
}
