use anosovlab::basic::{
    contraction_rates, distortion_ratio, fixed_point_lift, linearization_defect, make_basic_point, sandwich_holds,
    slnic_probe, stable_holonomy, tangent_direction, unstable_chart, ContractionRates, DynProfile, Normalizer,
    SlnicEstimate, SlnicParams,
};
use anosovlab::flow::{chart_distance, FlowPoint};
use anosovlab::groups::Letter;
use rayon::prelude::*;
use serde::Serialize;

use super::domain::build_atlas;
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::report::{fmt_f64, Report, Table};

#[derive(Clone, Debug, Serialize)]
pub struct DistortionRow {
    pub eps: f64,
    pub delta: f64,
    pub min: f64,
    pub max: f64,
    /// Horizons at which the δ-ball has zero diameter.
    pub degenerate: usize,
}

impl DistortionRow {
    pub fn spread(&self) -> f64 {
        if self.degenerate > 0 {
            f64::INFINITY
        } else {
            self.max / self.min
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiagnoseOutcome {
    pub holonomy_pairs: usize,
    pub holonomy_residual: f64,
    pub linearization_defect: f64,
    pub l0: f64,
    pub sandwich_checks: usize,
    pub sandwich_failures: Vec<(f64, f64)>,
    pub distortion: Vec<DistortionRow>,
    pub slnic: SlnicEstimate,
    pub contraction: ContractionRates,
}

impl DiagnoseOutcome {
    /// Largest max/min over the grid; infinite if any cell is degenerate.
    pub fn max_distortion_spread(&self) -> f64 {
        self.distortion.iter().map(DistortionRow::spread).fold(0.0, f64::max)
    }

    pub fn degenerate_cells(&self) -> usize {
        self.distortion.iter().filter(|r| r.degenerate > 0).count()
    }
}

pub fn compute_diagnose(cfg: &RunConfig) -> CliResult<DiagnoseOutcome> {
    let g = cfg.group()?;
    let a = &cfg.audit;
    let atlas = build_atlas(cfg, cfg.atlas.depth, cfg.atlas.refine)?;

    // holonomy y → x undoes x → y on stable leaves
    let x = make_basic_point(0, 1, 0.0, &atlas)?.point;
    let y = make_basic_point(0, 2, 0.0, &atlas)?.point;
    let alpha = x.alpha();
    let zs: Vec<FlowPoint<f64>> = atlas
        .samples()
        .iter()
        .skip(3)
        .filter_map(|s| {
            let u = s.xi.rep();
            let p = alpha.pair(&u);
            let w = u.scale(1.0 / p);
            (w.norm() <= a.holonomy_radius).then(|| FlowPoint::new(w, alpha.clone()).ok()).flatten()
        })
        .take(a.holonomy_samples)
        .collect();
    let mut holonomy_pairs = 0;
    let mut holonomy_residual = 0.0f64;
    for z in &zs {
        let Ok(hz) = stable_holonomy(&x, &y, z) else { continue };
        let back = stable_holonomy(&y, &x, &hz)?;
        holonomy_residual = holonomy_residual.max(chart_distance(&back, z));
        holonomy_pairs += 1;
    }

    let base = fixed_point_lift(&g.element(&[Letter::generator(0)]))?;
    let chart = unstable_chart(&base, &atlas, a.chart_radius);
    let mut lin = 0.0f64;
    for w in &chart.offsets {
        for &t in &a.times {
            lin = lin.max(linearization_defect(&base, w, t)?);
        }
    }

    let nz = Normalizer::from_group(g);
    let profiles: Vec<DynProfile> =
        a.horizons.par_iter().map(|&t| DynProfile::new(&chart, t, a.profile_steps, Some(&nz))).collect();
    let l0 = profiles.iter().map(DynProfile::max_backward_ratio).fold(1.0, f64::max);
    let mut scales: Vec<f64> = a.delta.iter().chain(&a.eps).copied().collect();
    scales.sort_by(f64::total_cmp);
    scales.dedup();
    let mut sandwich_failures = Vec::new();
    for p in &profiles {
        for &s in &scales {
            if !sandwich_holds(p, s, l0) {
                sandwich_failures.push((p.horizon, s));
            }
        }
    }
    let mut distortion = Vec::new();
    for &eps in &a.eps {
        for &delta in &a.delta {
            let mut row = DistortionRow { eps, delta, min: f64::INFINITY, max: 0.0, degenerate: 0 };
            for p in &profiles {
                match distortion_ratio(p, eps, delta) {
                    Ok(r) => {
                        row.min = row.min.min(r);
                        row.max = row.max.max(r);
                    }
                    Err(anosovlab::Error::DegenerateBall) => row.degenerate += 1,
                    Err(e) => return Err(e.into()),
                }
            }
            distortion.push(row);
        }
    }

    let slnic_atlas = build_atlas(cfg, a.slnic_depth, a.slnic_refine)?;
    let w = tangent_direction(&unstable_chart(&base, &slnic_atlas, a.chart_radius), a.slnic_directions)
        .ok_or_else(|| anosovlab::Error::InsufficientData("unstable chart has no tangent direction".into()))?;
    let params = SlnicParams { eps: a.slnic_eps, eps_prime: a.slnic_eps_prime, d0: a.slnic_cone };
    let slnic = slnic_probe(&base, &w, &slnic_atlas, &params)?;
    let contraction = contraction_rates(&base, a.contraction_horizon, a.contraction_steps, Some(&nz))?;

    Ok(DiagnoseOutcome {
        holonomy_pairs,
        holonomy_residual,
        linearization_defect: lin,
        l0,
        sandwich_checks: profiles.len() * scales.len(),
        sandwich_failures,
        distortion,
        slnic,
        contraction,
    })
}

impl DiagnoseOutcome {
    pub fn report(&self) -> Report {
        let mut t = Table::new("distortion.csv", &["eps", "delta", "min_ratio", "max_ratio", "spread", "degenerate"]);
        for r in &self.distortion {
            t.push(vec![fmt_f64(r.eps), fmt_f64(r.delta), fmt_f64(r.min), fmt_f64(r.max), fmt_f64(r.spread()), r.degenerate.to_string()]);
        }
        let mut rep = Report::new("diagnose");
        rep.tables.push(t);
        rep.set("holonomy_pairs", self.holonomy_pairs);
        rep.set("holonomy_residual", self.holonomy_residual);
        rep.set("linearization_defect", self.linearization_defect);
        rep.set("l0", self.l0);
        rep.set("sandwich_checks", self.sandwich_checks);
        rep.set("sandwich_failures", &self.sandwich_failures);
        rep.set("max_distortion_spread", fmt_f64(self.max_distortion_spread()));
        rep.set("degenerate_cells", self.degenerate_cells());
        rep.set("slnic", self.slnic);
        rep.set("contraction", self.contraction);
        rep
    }
}
