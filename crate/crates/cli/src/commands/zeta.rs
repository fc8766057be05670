use anosovlab::thermo::{ZetaGuard, ZetaTerms};
use num_complex::Complex64;

use super::count::classes_and_fit;
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::report::{fmt_f64, fmt_opt, Report, Table};

#[derive(Clone, Debug)]
pub struct DoublingRow {
    pub t: f64,
    pub value: f64,
    /// Relative change against the previous truncation.
    pub change: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ZetaOutcome {
    pub h_hat: f64,
    pub t_max: f64,
    pub doubling: Vec<DoublingRow>,
    pub scan: Vec<(f64, Complex64)>,
    pub points: Vec<(Complex64, Complex64)>,
}

impl ZetaOutcome {
    pub fn last_change(&self) -> Option<f64> {
        self.doubling.last().and_then(|r| r.change)
    }

    pub fn min_scan_modulus(&self) -> f64 {
        self.scan.iter().map(|(_, z)| z.norm()).fold(f64::INFINITY, f64::min)
    }
}

pub fn compute_zeta(cfg: &RunConfig) -> CliResult<ZetaOutcome> {
    let z = &cfg.zeta;
    let (classes, envelope, fit, _) = classes_and_fit(cfg)?;
    let h = fit.h;
    let terms = ZetaTerms::plain(&classes);
    let guard = ZetaGuard { abscissa: Some(h), bound: z.bound };

    // user points first: a point left of the abscissa aborts the run
    let points = cfg
        .zeta_points
        .iter()
        .map(|&s| Ok((s, terms.eval(s, envelope.t_max, &guard)?.value)))
        .collect::<CliResult<Vec<_>>>()?;

    let s = Complex64::new(h + z.pole_offset, 0.0);
    let mut doubling = Vec::new();
    let mut prev: Option<f64> = None;
    for k in 0..=z.doublings {
        let t = envelope.t_max / 2f64.powi((z.doublings - k) as i32);
        let value = (terms.eval(s, t, &guard)?.value * z.pole_offset).re;
        doubling.push(DoublingRow { t, value, change: prev.map(|p| (value / p - 1.0).abs()) });
        prev = Some(value);
    }

    let n = z.im_steps.max(1);
    let scan = (0..=n)
        .map(|i| {
            let im = -z.im_max + 2.0 * z.im_max * i as f64 / n as f64;
            let s = Complex64::new(h + z.scan_offset, im);
            Ok((im, terms.eval(s, envelope.t_max, &guard)?.value))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(ZetaOutcome { h_hat: h, t_max: envelope.t_max, doubling, scan, points })
}

impl ZetaOutcome {
    pub fn report(&self) -> Report {
        let mut d = Table::new("zeta_doubling.csv", &["t", "residue", "change"]);
        for r in &self.doubling {
            d.push(vec![fmt_f64(r.t), fmt_f64(r.value), fmt_opt(r.change)]);
        }
        let mut s = Table::new("zeta_scan.csv", &["im", "re_zeta", "im_zeta", "abs_zeta"]);
        for (im, z) in &self.scan {
            s.push(vec![fmt_f64(*im), fmt_f64(z.re), fmt_f64(z.im), fmt_f64(z.norm())]);
        }
        let mut rep = Report::new("zeta");
        rep.tables.push(d);
        rep.tables.push(s);
        if !self.points.is_empty() {
            let mut p = Table::new("zeta_points.csv", &["re_s", "im_s", "re_zeta", "im_zeta"]);
            for (s, z) in &self.points {
                p.push(vec![fmt_f64(s.re), fmt_f64(s.im), fmt_f64(z.re), fmt_f64(z.im)]);
            }
            rep.tables.push(p);
        }
        rep.set("h_hat", self.h_hat);
        rep.set("t_max", self.t_max);
        rep.set("last_doubling_change", self.last_change());
        rep.set("min_scan_modulus", self.min_scan_modulus());
        rep
    }
}
