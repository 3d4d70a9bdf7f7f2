use std::path::PathBuf;

use clap::Args;
use millefeuille::families::{construct1, construct2, verify_geodesical, FamilyParams, VerifyReport};
use millefeuille::io::FamilyFile;
use serde::{Deserialize, Serialize};

use super::{json_with_run_id, require, Failure, Outcome};
use crate::config::{self, merge};
use crate::manifest::{sidecar, Outputs, RunManifest};
use crate::render;

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilyArgs {
    /// Construction 1 or 2.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub construction: Option<u8>,
    /// Cross-ratio of neighbouring curves, in (0, 1).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Second cross-ratio of Construction 2, in (0, 1).
    #[arg(long)]
    pub eta: Option<f64>,
    /// Depth for Construction 1, step count for Construction 2.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Verification passes when every pairwise R is below this value
    /// [default: max(alpha, eta)·(1 + 1e-6)].
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Family file to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional SVG drawing of the family.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Settings {
    construction: u8,
    alpha: f64,
    eta: Option<f64>,
    depth: u32,
    threshold: f64,
    out: PathBuf,
    svg: Option<PathBuf>,
}

#[derive(Serialize)]
struct Report<'a> {
    threshold: f64,
    geodesics: usize,
    #[serde(flatten)]
    verify: &'a VerifyReport,
}

fn settings(mut a: FamilyArgs) -> Result<Settings, Failure> {
    let file: FamilyArgs = config::load(a.config.as_deref())?;
    merge!(a, file; construction, alpha, eta, depth, threshold, out, svg);
    let construction = a.construction.unwrap_or(1);
    if !(1..=2).contains(&construction) {
        return Err(Failure::msg(format!("--construction must be 1 or 2, got {construction}")));
    }
    let alpha = require(a.alpha, "alpha")?;
    let eta = match construction {
        2 => Some(require(a.eta, "eta")?),
        _ => None,
    };
    for (flag, v) in [("alpha", Some(alpha)), ("eta", eta)] {
        if let Some(v) = v.filter(|v| !(*v > 0.0 && *v < 1.0)) {
            return Err(Failure::msg(format!("--{flag} = {v} must lie in (0, 1)")));
        }
    }
    let depth = a.depth.unwrap_or(2);
    if construction == 2 && depth == 0 {
        return Err(Failure::msg("--depth must be at least 1 for construction 2"));
    }
    let threshold = a.threshold.unwrap_or(alpha.max(eta.unwrap_or(0.0)) * (1.0 + 1e-6));
    Ok(Settings { construction, alpha, eta, depth, threshold, out: require(a.out, "out")?, svg: a.svg })
}

pub fn run(args: FamilyArgs) -> Result<Outcome, Failure> {
    let config_path = args.config.clone();
    let s = settings(args)?;
    let params = FamilyParams { alpha: s.alpha, eta: s.eta.unwrap_or(s.alpha), depth: s.depth };
    for w in params.warnings() {
        eprintln!("warning: {w}");
    }
    let inputs: Vec<_> = config_path.iter().map(|p| p.as_path()).collect();
    let manifest = RunManifest::new("family", &s, None, &inputs)?;

    let fam = match s.eta {
        Some(eta) => construct2(s.alpha, eta, s.depth)?,
        None => construct1(s.alpha, s.depth)?,
    };
    let verify = verify_geodesical(&fam, s.threshold);

    let mut out = Outputs::new();
    out.write(&s.out, &json_with_run_id(&FamilyFile::from_family(&fam), &manifest.run_id))?;
    let report = Report { threshold: s.threshold, geodesics: fam.len(), verify: &verify };
    out.write(&sidecar(&s.out, "verify.json"), &json_with_run_id(&report, &manifest.run_id))?;
    if let Some(svg) = &s.svg {
        let scene = render::Scene { family: Some(&fam), ..Default::default() };
        out.write(svg, render::svg(&scene, &manifest.run_id).as_bytes())?;
    }
    out.finish(manifest, &s.out)?;

    eprintln!(
        "{} geodesics, max pairwise R = {:.6e}, crossings = {}",
        fam.len(),
        verify.max_pairwise_r,
        verify.crossings
    );
    if verify.pass {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::BoundViolated(format!(
            "verification failed: max pairwise R = {:e} (threshold {:e}), {} crossings",
            verify.max_pairwise_r, s.threshold, verify.crossings
        )))
    }
}
