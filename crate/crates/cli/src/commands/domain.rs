use anosovlab::basic::{
    in_omega, make_basic_point, periodicity_check, properness_witness, LimitAtlas,
};
use anosovlab::flow::{hbi_cocycle, Norm};
use anosovlab::groups::{enumerate_ball, primitive_conj_classes, Letter};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::report::{fmt_f64, Report, Table};

#[derive(Clone, Debug, Serialize)]
pub struct BasicRow {
    pub s: usize,
    pub t: usize,
    pub tau: f64,
    pub margin: f64,
    pub omega_margin: f64,
    pub inside: bool,
    pub properness_floor: f64,
    pub axis_skips: usize,
    pub hbi_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicRow {
    pub word: String,
    pub period: f64,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct DomainOutcome {
    pub atlas_size: usize,
    pub ball_size: usize,
    pub basic: Vec<BasicRow>,
    pub periodic: Vec<PeriodicRow>,
    pub classes_available: usize,
}

impl DomainOutcome {
    pub fn all_inside(&self) -> bool {
        self.basic.iter().all(|r| r.inside)
    }

    pub fn min_properness(&self) -> f64 {
        self.basic.iter().map(|r| r.properness_floor).fold(f64::INFINITY, f64::min)
    }

    pub fn max_periodic_residual(&self) -> f64 {
        self.periodic.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn max_hbi_residual(&self) -> f64 {
        self.basic.iter().map(|r| r.hbi_residual).fold(0.0, f64::max)
    }
}

pub(crate) fn build_atlas(cfg: &RunConfig, depth: usize, refine: usize) -> CliResult<LimitAtlas<f64>> {
    let g = cfg.group()?;
    let mut atlas = LimitAtlas::from_group(g, depth, cfg.enumeration.cap, cfg.atlas.floor)?;
    if refine > 0 {
        atlas.refine_along(&g.element(&[Letter::generator(0)]), refine, 1e-12)?;
    }
    Ok(atlas)
}

pub fn compute_domain_audit(cfg: &RunConfig) -> CliResult<DomainOutcome> {
    let g = cfg.group()?;
    let a = &cfg.audit;
    let atlas = build_atlas(cfg, cfg.atlas.depth, cfg.atlas.refine)?;
    let norm = match &cfg.norm {
        Some(m) => Norm::gram(m.clone())?,
        None => Norm::Euclidean,
    };
    let n = atlas.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.sub_seed(1));
    let picks: Vec<(usize, usize, f64)> = (0..a.basic_points)
        .map(|_| {
            let s = rng.gen_range(0..n);
            let t = (s + rng.gen_range(1..n)) % n;
            (s, t, rng.gen_range(-1.0..1.0))
        })
        .collect();
    let ball = enumerate_ball(g, a.properness_radius, cfg.enumeration.cap)?;
    let gens: Vec<_> = (0..g.rank()).map(|i| g.element(&[Letter::generator(i)])).collect();
    let basic = picks
        .par_iter()
        .map(|&(s, t, tau)| {
            let bp = make_basic_point(s, t, tau, &atlas)?;
            let (ell, h) = (bp.point.ell(), bp.point.hyperplane());
            let omega = in_omega(ell, h, &atlas, 0.0);
            let w = properness_witness(&bp.point, &ball)?;
            let mut hbi = 0.0f64;
            for x in &gens {
                for y in &gens {
                    let xy = x.mul(y);
                    let y_ell = ell.act(y.matrix())?;
                    let y_h = h.act_with_inverse(y.inverse_matrix())?;
                    let lhs = hbi_cocycle(xy.matrix(), ell, h, &norm);
                    let rhs = hbi_cocycle(x.matrix(), &y_ell, &y_h, &norm) + hbi_cocycle(y.matrix(), ell, h, &norm);
                    hbi = hbi.max((lhs - rhs).abs());
                }
            }
            Ok(BasicRow {
                s,
                t,
                tau,
                margin: bp.margin,
                omega_margin: omega.worst,
                inside: omega.inside,
                properness_floor: w.floor,
                axis_skips: w.axis_skips,
                hbi_residual: hbi,
            })
        })
        .collect::<anosovlab::Result<Vec<_>>>()?;

    let classes = primitive_conj_classes(g, a.periodic_radius, cfg.enumeration.cap)?;
    let picked = sample(&mut rng, classes.len(), a.periodic_classes.min(classes.len())).into_vec();
    let periodic = picked
        .par_iter()
        .map(|&i| {
            let e = g.element(&classes[i].word);
            let p = periodicity_check(&e)?;
            Ok(PeriodicRow { word: g.format(&classes[i].word), period: p.period, residual: p.residual })
        })
        .collect::<anosovlab::Result<Vec<_>>>()?;
    Ok(DomainOutcome { atlas_size: n, ball_size: ball.len(), basic, periodic, classes_available: classes.len() })
}

impl DomainOutcome {
    pub fn report(&self) -> Report {
        let mut t = Table::new(
            "domain_basic.csv",
            &["s", "t", "tau", "margin", "omega_margin", "inside", "properness_floor", "axis_skips", "hbi_residual"],
        );
        for r in &self.basic {
            t.push(vec![
                r.s.to_string(),
                r.t.to_string(),
                fmt_f64(r.tau),
                fmt_f64(r.margin),
                fmt_f64(r.omega_margin),
                r.inside.to_string(),
                fmt_f64(r.properness_floor),
                r.axis_skips.to_string(),
                fmt_f64(r.hbi_residual),
            ]);
        }
        let mut p = Table::new("domain_periodic.csv", &["word", "period", "residual"]);
        for r in &self.periodic {
            p.push(vec![r.word.clone(), fmt_f64(r.period), fmt_f64(r.residual)]);
        }
        let mut rep = Report::new("domain-audit");
        rep.tables.push(t);
        rep.tables.push(p);
        rep.set("atlas_size", self.atlas_size);
        rep.set("ball_size", self.ball_size);
        rep.set("all_inside_omega", self.all_inside());
        rep.set("min_properness_floor", self.min_properness());
        rep.set("max_hbi_residual", self.max_hbi_residual());
        rep.set("classes_available", self.classes_available);
        rep.set("max_periodic_residual", self.max_periodic_residual());
        rep
    }
}
