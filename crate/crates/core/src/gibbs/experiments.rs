use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::interfaces::{escape_threshold, InterfaceContext};
use super::{run_replicas, GibbsError, SamplerConfig, SpinState};
use crate::families::SignedGeodesicFamily;
use crate::hypgeo::{closest_point, common_perpendicular, point_distance, Model, ModelPoint};
use crate::tiling::{assign_signs, BoxRegion, LatticeGraph};

type P = ModelPoint<f64>;

/// One row of the rigidity table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityRow {
    pub beta: f64,
    pub m: f64,
    pub replicas: usize,
    pub samples: usize,
    pub escapes: usize,
    pub escape_freq: f64,
    pub escape_se: f64,
    pub wrong_partition: usize,
    pub wrong_freq: f64,
    pub wrong_se: f64,
    pub mean_magnetization: f64,
}

fn binomial(k: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 0.0);
    }
    let p = k as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}

/// Family moved off any vertex, with the resulting vertex signs.
fn settle(graph: &LatticeGraph, family: &SignedGeodesicFamily) -> Result<(SignedGeodesicFamily, Vec<i8>), GibbsError> {
    let signs = assign_signs(graph, family)?;
    let mut fam = family.clone();
    if let Some(iso) = &signs.perturbation {
        fam.geodesics = fam.geodesics.iter().map(|g| iso.apply_geodesic(g)).collect();
        fam.base_point = iso.apply_point(&fam.base_point);
    }
    Ok((fam, signs.spins))
}

/// Anchor points `z_i`: feet of the common perpendicular for a pair,
/// otherwise the point of each geodesic nearest the disk origin.
fn anchors(family: &SignedGeodesicFamily) -> Result<Vec<P>, GibbsError> {
    if family.len() == 2 {
        let cp = common_perpendicular(&family.geodesics[0], &family.geodesics[1])?;
        return Ok(vec![cp.foot1, cp.foot2]);
    }
    let o = ModelPoint::origin(Model::Disk);
    Ok(family.geodesics.iter().map(|g| closest_point(g, &o)).collect())
}

/// Midpoint of the common perpendicular of the first two geodesics.
pub fn symmetry_center(family: &SignedGeodesicFamily) -> Result<P, GibbsError> {
    if family.len() < 2 {
        return Err(GibbsError::Precondition("need at least two geodesics".into()));
    }
    let cp = common_perpendicular(&family.geodesics[0], &family.geodesics[1])?;
    let g = &cp.geodesic;
    let t = (g.parameter_of(&cp.foot1) + g.parameter_of(&cp.foot2)) / 2.0;
    Ok(g.point_at(t))
}

/// Escape and wrong-partition frequencies per `(β, m)`, sampled from the
/// ground configuration.
pub fn rigidity_experiment(
    graph: &LatticeGraph,
    family: &SignedGeodesicFamily,
    region: &BoxRegion,
    config: &SamplerConfig,
    betas: &[f64],
    m_values: &[f64],
) -> Result<Vec<RigidityRow>, GibbsError> {
    let (fam, ground) = settle(graph, family)?;
    let ctx = InterfaceContext::new(graph, region, &fam, &ground)?;
    let zs = anchors(&fam)?;
    let on_rim: Vec<usize> = ctx.geodesics().to_vec();
    let start = SpinState::for_box(region, &ground, &ground);
    let mut rows = Vec::new();
    for &beta in betas {
        let cfg = SamplerConfig { beta, ..config.clone() };
        let runs = run_replicas(graph, &start, &cfg, |_, st| {
            let (contours, partition) = ctx.extract(st)?;
            let mut worst = 0.0f64;
            for &i in &on_rim {
                let pts: Vec<P> = contours
                    .open()
                    .filter(|c| c.attachments.iter().any(|l| l.geodesic == i))
                    .flat_map(|c| c.dual_points.iter().copied())
                    .collect();
                worst = worst.max(escape_threshold(&pts, &fam.geodesics[i], &zs[i]));
            }
            Ok::<_, GibbsError>((worst, !partition.is_ground(), st.magnetization()))
        })?;
        let obs: Vec<(f64, bool, f64)> = runs.into_iter().flat_map(|r| r.samples).collect::<Result<_, _>>()?;
        let n = obs.len();
        let wrong = obs.iter().filter(|o| o.1).count();
        let mean_m = obs.iter().map(|o| o.2).sum::<f64>() / n.max(1) as f64;
        for &m in m_values {
            let esc = obs.iter().filter(|o| o.0 > m).count();
            let (ef, es) = binomial(esc, n);
            let (wf, ws) = binomial(wrong, n);
            rows.push(RigidityRow {
                beta,
                m,
                replicas: cfg.replicas,
                samples: n,
                escapes: esc,
                escape_freq: ef,
                escape_se: es,
                wrong_partition: wrong,
                wrong_freq: wf,
                wrong_se: ws,
                mean_magnetization: mean_m,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseStats {
    pub beta: f64,
    pub samples: usize,
    /// Vertices of the box interior within distance `r` of `Z`.
    pub ur_size: usize,
    pub lambda_hits: usize,
    pub lambda_freq: f64,
    pub lambda_se: f64,
    pub mean_spin_ur: f64,
    /// Same observable with an all-plus boundary.
    pub mean_spin_ur_plus: f64,
}

impl PhaseStats {
    pub fn spin_gap(&self) -> f64 {
        (self.mean_spin_ur - self.mean_spin_ur_plus).abs()
    }
}

/// How often the sampled contours differ from the ground contours inside
/// `U_r(Z)`, and the mean spin there against an all-plus boundary.
pub fn phase_probe(
    graph: &LatticeGraph,
    family: &SignedGeodesicFamily,
    region: &BoxRegion,
    config: &SamplerConfig,
    z: &P,
    r: f64,
) -> Result<PhaseStats, GibbsError> {
    let (fam, ground) = settle(graph, family)?;
    let ctx = InterfaceContext::new(graph, region, &fam, &ground)?;
    let z = z.to_model(Model::Disk);
    let ur: Vec<usize> = region
        .interior
        .iter()
        .copied()
        .filter(|&v| point_distance(&graph.coords[v], &z).expect("disk") <= r)
        .collect();
    if ur.is_empty() {
        return Err(GibbsError::Precondition(format!("U_r(Z) holds no vertex for r = {r}")));
    }
    if ur.iter().any(|&v| ground[v] != 1) {
        return Err(GibbsError::Precondition("the ground configuration is not +1 on U_r(Z)".into()));
    }
    let in_ur: HashSet<usize> = ur.iter().copied().collect();
    let start = SpinState::for_box(region, &ground, &ground);
    let base: HashSet<(usize, usize)> = ctx.disagreements(&start).into_iter().collect();
    let mean_ur = |st: &SpinState| ur.iter().map(|&v| st.spins[v] as f64).sum::<f64>() / ur.len() as f64;

    let runs = run_replicas(graph, &start, config, |_, st| {
        let now: HashSet<(usize, usize)> = ctx.disagreements(st).into_iter().collect();
        let hit = now
            .symmetric_difference(&base)
            .any(|&(u, v)| in_ur.contains(&u) || in_ur.contains(&v));
        (hit, mean_ur(st))
    })?;
    let obs: Vec<(bool, f64)> = runs.into_iter().flat_map(|r| r.samples).collect();
    let plus = vec![1i8; graph.len()];
    let plus_start = SpinState::for_box(region, &plus, &plus);
    let plus_runs = run_replicas(graph, &plus_start, config, |_, st| mean_ur(st))?;
    let plus_obs: Vec<f64> = plus_runs.into_iter().flat_map(|r| r.samples).collect();

    let n = obs.len();
    let hits = obs.iter().filter(|o| o.0).count();
    let (f, se) = binomial(hits, n);
    Ok(PhaseStats {
        beta: config.beta,
        samples: n,
        ur_size: ur.len(),
        lambda_hits: hits,
        lambda_freq: f,
        lambda_se: se,
        mean_spin_ur: obs.iter().map(|o| o.1).sum::<f64>() / n.max(1) as f64,
        mean_spin_ur_plus: plus_obs.iter().sum::<f64>() / plus_obs.len().max(1) as f64,
    })
}

