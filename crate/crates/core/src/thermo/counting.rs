use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::linear_fit;
use crate::scalar::Real;

use super::period::{ConjClassRecord, Periodic};
use super::quad::gauss_kronrod;

const LI_TOL: f64 = 1e-12;

/// Li(eᵘ) = ∫_{ln 2}^{u} eʷ/w dw, the offset logarithmic integral in log scale.
pub fn li_exp(u: f64) -> Result<f64> {
    let a = std::f64::consts::LN_2;
    if !(u >= a) {
        return Err(Error::DomainError(format!("Li(e^{u}) needs e^u ≥ 2")));
    }
    if u == a {
        return Ok(0.0);
    }
    gauss_kronrod(|w| w.exp() / w, a, u, LI_TOL)
}

/// Offset logarithmic integral Li(t) = ∫₂ᵗ dx/log x.
pub fn li(t: f64) -> Result<f64> {
    if !(t >= 2.0) {
        return Err(Error::DomainError(format!("Li({t}) needs t ≥ 2")));
    }
    li_exp(t.ln())
}

/// Lower envelope λ₁ ≥ c·n − c′ of the periods of classes of cyclic length n,
/// extrapolated to the first length that was not enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodEnvelope {
    pub c: f64,
    pub c_prime: f64,
    /// Estimated smallest period of a class of length R + 1: the linear
    /// envelope, capped at the last minimum plus the smallest observed step.
    pub t_max: f64,
}

pub fn period_envelope(samples: impl IntoIterator<Item = (usize, f64)>, r: usize) -> Result<PeriodEnvelope> {
    let mut minima = vec![f64::INFINITY; r + 1];
    for (n, p) in samples {
        if n <= r && p < minima[n] {
            minima[n] = p;
        }
    }
    let pts: Vec<(f64, f64)> = (r.div_ceil(2).max(1)..=r)
        .filter(|&n| minima[n].is_finite())
        .map(|n| (n as f64, minima[n]))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientData(format!("period minima at {} lengths", pts.len())));
    }
    let (c, _, _) = linear_fit(&pts);
    if !(c > 0.0) {
        return Err(Error::InsufficientData("periods do not grow with word length".into()));
    }
    let b = pts.iter().map(|&(n, m)| m - c * n).fold(f64::INFINITY, f64::min);
    // Minima grow unevenly; never extrapolate past the smallest observed step.
    let step = pts.windows(2).map(|w| w[1].1 - w[0].1).filter(|d| *d > 0.0).fold(f64::INFINITY, f64::min);
    let last = pts.last().expect("two points").1;
    let t_max = (c * (r + 1) as f64 + b).min(last + step);
    Ok(PeriodEnvelope { c, c_prime: -b, t_max })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingRow {
    pub t: f64,
    pub count: u64,
    pub li: Option<f64>,
    pub ratio: Option<f64>,
}

/// N(t) = #{[γ] : λ₁ ≤ t} on a grid; rows beyond `t_max` are untrusted and
/// never receive a ratio.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingTable {
    pub rows: Vec<CountingRow>,
    pub t_max: f64,
    pub h_hat: Option<f64>,
}

pub fn counting_table<P: Periodic>(classes: &[P], grid: &[f64], t_max: f64) -> CountingTable {
    let mut periods: Vec<f64> = classes.iter().map(Periodic::period).collect();
    periods.sort_by(f64::total_cmp);
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let rows = grid
        .into_iter()
        .map(|t| CountingRow { t, count: periods.partition_point(|&p| p <= t) as u64, li: None, ratio: None })
        .collect();
    CountingTable { rows, t_max, h_hat: None }
}

impl CountingTable {
    pub fn trusted(&self) -> impl Iterator<Item = &CountingRow> {
        self.rows.iter().filter(move |r| r.t <= self.t_max)
    }

    /// Fills the Li(e^{ĥt}) and ratio columns on the trusted range.
    pub fn with_entropy(mut self, h: f64) -> Result<Self> {
        for r in &mut self.rows {
            r.li = None;
            r.ratio = None;
            if r.t <= self.t_max && h * r.t > std::f64::consts::LN_2 {
                let l = li_exp(h * r.t)?;
                r.li = Some(l);
                r.ratio = Some(r.count as f64 / l);
            }
        }
        self.h_hat = Some(h);
        Ok(self)
    }

    /// Ratio range over the top decade used by the entropy fit.
    pub fn top_decade_ratios(&self) -> Vec<(f64, f64)> {
        let series: Vec<(f64, f64)> = self.trusted().map(|r| (r.t, r.count as f64)).collect();
        let window = top_decade(&series);
        self.trusted()
            .filter(|r| window.iter().any(|w| w.0 == r.t))
            .filter_map(|r| r.ratio.map(|q| (r.t, q)))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyFit {
    pub h: f64,
    pub band: (f64, f64),
    /// t-range of the top decade.
    pub window: (f64, f64),
    pub iterations: usize,
}

fn top_decade(series: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let Some(&(_, top)) = series.last() else { return Vec::new() };
    series.iter().copied().filter(|&(_, n)| n > 0.0 && n >= top / 10.0).collect()
}

/// Damped fixed point for the h with mean_i[log N(tᵢ) − log Li(e^{h tᵢ})] = 0.
fn solve_growth(pts: &[(f64, f64)]) -> Result<(f64, usize)> {
    const MAX_ITER: usize = 500;
    const DAMP: f64 = 0.7;
    let (t_top, n_top) = *pts.last().expect("non-empty window");
    let mut h = (n_top.ln() + (n_top.ln()).max(1.0).ln()) / t_top;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    for it in 1..=MAX_ITER {
        let mut g = 0.0;
        let mut used = 0usize;
        for &(t, n) in pts {
            let u = h * t;
            if u > 1.0 {
                g += n.ln() - li_exp(u)?.ln();
                used += 1;
            }
        }
        if used == 0 {
            h *= 2.0;
            continue;
        }
        let step = DAMP * g / used as f64 / mean_t;
        h += step;
        if step.abs() <= 1e-13 * h.abs() {
            return Ok((h, it));
        }
    }
    Err(Error::NonConvergence { iterations: MAX_ITER })
}

fn fit_series(series: &[(f64, f64)], min_top: f64) -> Result<EntropyFit> {
    let Some(&(_, top)) = series.last() else {
        return Err(Error::InsufficientData("empty trusted range".into()));
    };
    if !(top > 0.0) || top < min_top {
        return Err(Error::InsufficientData(format!("N(T_max) = {top} < {min_top}")));
    }
    let window = top_decade(series);
    let distinct = {
        let mut v: Vec<f64> = window.iter().map(|p| p.1).collect();
        v.dedup();
        v.len()
    };
    if window.len() < 6 || distinct < 3 {
        return Err(Error::InsufficientData(format!("{} grid points in the top decade", window.len())));
    }
    let (h, iterations) = solve_growth(&window)?;
    let m = window.len();
    let mut lo = h;
    let mut hi = h;
    for sub in [&window[..m / 2], &window[m / 2..], &window[m / 4..m - m / 4]] {
        if sub.len() >= 3 {
            let (hs, _) = solve_growth(sub)?;
            lo = lo.min(hs);
            hi = hi.max(hs);
        }
    }
    Ok(EntropyFit { h, band: (lo, hi), window: (window[0].0, window[m - 1].0), iterations })
}

/// ĥ from log N(t) ≈ log Li(e^{ĥt}) on the top decade of the trusted range.
pub fn entropy_fit(table: &CountingTable) -> Result<EntropyFit> {
    let series: Vec<(f64, f64)> = table.trusted().map(|r| (r.t, r.count as f64)).collect();
    fit_series(&series, 100.0)
}

/// Σ_{λ₁ ≤ t} e^{λ₁ U_[γ]} on the grid.
pub fn weighted_counts<T: Real>(classes: &[ConjClassRecord<T>], grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut terms = Vec::with_capacity(classes.len());
    for c in classes {
        let u = c.potential_avg.ok_or_else(|| Error::InvalidInput("class without potential average".into()))?;
        let l = c.period.f64();
        terms.push((l, (l * u.f64()).exp()));
    }
    terms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(grid.len());
    let (mut i, mut acc) = (0, 0.0);
    for t in grid {
        while i < terms.len() && terms[i].0 <= t {
            acc += terms[i].1;
            i += 1;
        }
        out.push((t, acc));
    }
    Ok(out)
}

/// Weighted abscissa: the entropy fit applied to the reweighted counts.
pub fn pressure_estimate<T: Real>(classes: &[ConjClassRecord<T>], grid: &[f64], t_max: f64) -> Result<EntropyFit> {
    if classes.len() < 100 {
        return Err(Error::InsufficientData(format!("{} classes, need 100", classes.len())));
    }
    let raw = classes.iter().filter(|c| c.period.f64() <= t_max).count();
    if raw < 100 {
        return Err(Error::InsufficientData(format!("{raw} classes below T_max")));
    }
    let series: Vec<(f64, f64)> = weighted_counts(classes, grid)?.into_iter().filter(|p| p.0 <= t_max).collect();
    fit_series(&series, 0.0)
}
