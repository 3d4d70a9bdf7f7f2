use std::path::PathBuf;

use clap::Args;
use millefeuille::io::{CoveringFile, GraphFile};
use millefeuille::tiling::build_cayley_tree;
use millefeuille::treestates::{left_greedy_covering, middle_dimers, offset_dimers, peierls_ratio, Provenance};
use serde::{Deserialize, Serialize};

use super::{json_with_run_id, require, Failure, Outcome};
use crate::config::{self, merge};
use crate::manifest::{sidecar, Outputs, RunManifest};

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TreeArgs {
    /// Branching of `T_n`: every vertex has `n + 1` neighbours.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Chain length; middle dimers need it odd.
    #[arg(long)]
    pub k: Option<usize>,
    /// Offset dimers `D_{l:n}`; needs `--n-offset`.
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub n_offset: Option<usize>,
    /// Largest enclosed vertex set enumerated.
    #[arg(long)]
    pub max_interior: Option<usize>,
    /// Covering file to write; the ratio CSV and report go alongside.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the tree as a graph file.
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Settings {
    n: usize,
    depth: usize,
    k: usize,
    l: Option<usize>,
    n_offset: Option<usize>,
    max_interior: usize,
    out: PathBuf,
    graph_out: Option<PathBuf>,
}

#[derive(Serialize)]
struct RatioRow {
    size: usize,
    count: u64,
    max_ratio: f64,
    argmax_set: String,
    max_ratio_all: f64,
}

fn settings(mut a: TreeArgs) -> Result<Settings, Failure> {
    let file: TreeArgs = config::load(a.config.as_deref())?;
    merge!(a, file; n, depth, k, l, n_offset, max_interior, out, graph_out);
    if a.l.is_some() != a.n_offset.is_some() {
        return Err(Failure::msg("--l and --n-offset go together"));
    }
    let max_interior = a.max_interior.unwrap_or(12);
    if max_interior == 0 {
        return Err(Failure::msg("--max-interior must be at least 1"));
    }
    Ok(Settings {
        n: a.n.unwrap_or(2),
        depth: a.depth.unwrap_or(8),
        k: require(a.k, "k")?,
        l: a.l,
        n_offset: a.n_offset,
        max_interior,
        out: require(a.out, "out")?,
        graph_out: a.graph_out,
    })
}

pub fn run(args: TreeArgs) -> Result<Outcome, Failure> {
    let config_path = args.config.clone();
    let s = settings(args)?;
    let inputs: Vec<_> = config_path.iter().map(|p| p.as_path()).collect();
    let manifest = RunManifest::new("tree", &s, None, &inputs)?;

    let tree = build_cayley_tree(s.n, s.depth)?;
    let cov = left_greedy_covering(&tree, s.k)?;
    let d = match (s.l, s.n_offset) {
        (Some(l), Some(n)) => offset_dimers(&tree, &cov, l, n)?,
        _ => middle_dimers(&cov)?,
    };
    let report = peierls_ratio(&tree, &d, s.max_interior)?;

    let mut out = Outputs::new();
    out.write(&s.out, &json_with_run_id(&CoveringFile::new(&cov, &d), &manifest.run_id))?;
    let mut csv = csv::Writer::from_writer(Vec::new());
    for row in &report.sizes {
        let set: Vec<String> = row.argmax_root.iter().map(|v| v.to_string()).collect();
        csv.serialize(RatioRow {
            size: row.size,
            count: row.count,
            max_ratio: row.max_ratio_root,
            argmax_set: set.join(" "),
            max_ratio_all: row.max_ratio_all,
        })
        .map_err(Failure::usage)?;
    }
    let bytes = csv.into_inner().map_err(|e| Failure::usage(anyhow::anyhow!("{e}")))?;
    out.write(&sidecar(&s.out, "ratios.csv"), &bytes)?;
    out.write(&sidecar(&s.out, "peierls.json"), &json_with_run_id(&report, &manifest.run_id))?;
    if let Some(path) = &s.graph_out {
        out.write(path, &json_with_run_id(&GraphFile::from_graph(&tree), &manifest.run_id))?;
    }
    out.finish(manifest, &s.out)?;

    let (bound, what) = match d.provenance {
        Provenance::Middle => (1.0 / ((s.k - 1) / 2 + 1) as f64, format!("1/(m+1) with m = {}", (s.k - 1) / 2)),
        Provenance::Offset { n, .. } => (1.0 / (n + 1) as f64, format!("1/(n+1) with n = {n}")),
    };
    let sup = report.root.ratio.max(report.all_anchor.ratio);
    eprintln!(
        "max ratio: {:.6} over root-containing sets, {:.6} over all sets; bound {what} = {bound:.6}",
        report.root.ratio, report.all_anchor.ratio
    );
    if sup >= 0.5 {
        eprintln!(
            "warning: a contour with ratio {sup:.6} ≥ 1/2 exists, so the Peierls condition fails for this dimer set"
        );
    }
    if sup > bound + 1e-12 {
        return Ok(Outcome::BoundViolated(format!("contour ratio {sup:.6} exceeds the bound {bound:.6}")));
    }
    Ok(Outcome::Ok)
}
