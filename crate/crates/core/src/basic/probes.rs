use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::atlas::{properness_witness, BasicPoint, LimitAtlas};
use super::chart::{unstable_chart, DynProfile, Normalizer, UnstableChart};
use super::leaf::exp_u;
use crate::error::{Error, Result};
use crate::flow::FlowPoint;
use crate::groups::GroupElement;
use crate::linalg::{norm2, Covector, Vector};
use crate::scalar::Real;

/// Tunables of the non-integrability probe.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlnicParams {
    /// Radius of W^s_ε(z) in which y is searched.
    pub eps: f64,
    /// Radius ε′ for base points x and vectors u.
    pub eps_prime: f64,
    /// Cone half-width d₀ around the probe direction.
    pub d0: f64,
}

impl Default for SlnicParams {
    fn default() -> Self {
        SlnicParams { eps: 0.5, eps_prime: 0.25, d0: 0.5 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlnicEstimate {
    pub kappa: f64,
    /// Sample index whose ξ* defines y.
    pub y_sample: usize,
    pub pairs: usize,
    /// ‖u‖ at the minimizing pair.
    pub u_norm: f64,
}

/// Lower bound of |Δ(exp^u_x(u), π_y(x))| / ‖u‖ over atlas points
/// x ∈ W^u_{ε′}(z) and u ∈ Λ^u(x) in the cone around `w_dir`.
///
/// With x = [v:α] and the quadric lift of exp^u_x(u) equal to (v + u, α),
/// the time separation is Δ = −log(1 + β(u)/β(v)) for [β] = ξ*(y).
pub fn slnic_probe<T: Real>(z: &FlowPoint<T>, w_dir: &Vector<T>, atlas: &LimitAtlas<T>, p: &SlnicParams) -> Result<SlnicEstimate> {
    let (v, a) = (z.v(), z.alpha());
    let wn = w_dir.norm();
    if wn == T::zero() {
        return Err(Error::InvalidInput("zero probe direction".into()));
    }
    let w = w_dir.scale(T::one() / wn);
    // y = [v : β] with β(v) = 1, [β] ∈ Λ*, ‖β − α‖ ≤ ε; prefer large |β(w)|
    let mut best: Option<(usize, T, Covector<T>)> = None;
    for (i, s) in atlas.samples().iter().enumerate() {
        let b = s.xi_star.rep();
        let q = b.pair(&v);
        if q.abs() <= T::epsilon() {
            continue;
        }
        let b = b.scale(T::one() / q);
        let dist = norm2(&(&b - &a).0).f64();
        if dist > p.eps || dist <= 1e-12 {
            continue;
        }
        let score = b.pair(&w).abs();
        if best.as_ref().map_or(true, |bb| score > bb.1) {
            best = Some((i, score, b));
        }
    }
    let (y_sample, _, beta) = best.ok_or(Error::NoStableSample(p.eps))?;
    let chart = unstable_chart(z, atlas, p.eps_prime);
    let per_base: Vec<(f64, f64, usize)> = chart
        .offsets
        .par_iter()
        .map(|u0| {
            let x = match exp_u(z, u0) {
                Ok(x) => x,
                Err(_) => return (f64::INFINITY, 0.0, 0),
            };
            let xv = x.v();
            let bx = beta.pair(&xv);
            if !(bx.abs() > T::zero()) {
                return (f64::INFINITY, 0.0, 0);
            }
            let local = unstable_chart(&x, atlas, p.eps_prime);
            let mut kappa = f64::INFINITY;
            let mut u_norm = 0.0;
            let mut pairs = 0;
            for u in local.offsets.iter().skip(1) {
                let un = u.norm();
                if norm2(&(&u.scale(T::one() / un) - &w).0).f64() > p.d0 {
                    continue;
                }
                let r = T::one() + beta.pair(u) / bx;
                if !(r > T::zero()) {
                    continue;
                }
                let k = (r.ln().abs() / un).f64();
                pairs += 1;
                if k < kappa {
                    kappa = k;
                    u_norm = un.f64();
                }
            }
            (kappa, u_norm, pairs)
        })
        .collect();
    let pairs: usize = per_base.iter().map(|r| r.2).sum();
    if pairs == 0 {
        return Err(Error::InsufficientData("no unstable samples inside the probe cone".into()));
    }
    let (kappa, u_norm, _) = per_base.into_iter().fold((f64::INFINITY, 0.0, 0), |b, r| if r.0 < b.0 { r } else { b });
    Ok(SlnicEstimate { kappa, y_sample, pairs, u_norm })
}

/// Tangent direction of Λ^u(x) at the centre: the sign-aligned mean of the
/// unit directions of the `k` shortest nonzero offsets.
pub fn tangent_direction<T: Real>(chart: &UnstableChart<T>, k: usize) -> Option<Vector<T>> {
    let mut offs: Vec<&Vector<T>> = chart.offsets.iter().skip(1).collect();
    offs.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap_or(std::cmp::Ordering::Equal));
    let first = offs.first()?;
    let lead = first.scale(T::one() / first.norm());
    let mut acc = Vector::zeros(lead.dim());
    for u in offs.iter().take(k.max(1)) {
        let d = u.scale(T::one() / u.norm());
        let d = if d.dot_coords(&lead) < T::zero() { -&d } else { d };
        acc = &acc + &d;
    }
    let n = acc.norm();
    Some(acc.scale(T::one() / n))
}

/// Direction of the shortest nonzero offset of a chart.
pub fn shortest_offset_direction<T: Real>(chart: &UnstableChart<T>) -> Option<Vector<T>> {
    tangent_direction(chart, 1)
}

/// Empirical scale constants of the basic set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleConstants {
    pub eps0: f64,
    pub eps1: f64,
    pub delta0: f64,
    pub l0: f64,
}

/// Measures L0 as the largest of the backward-Lipschitz ratios of the
/// profiles and the parallel-transport norm ratios between chart points;
/// ε₀ is half the smallest properness floor, ε₁ = 0.9·ε₀/(2L0²), δ₀ = L0·ε₁.
pub fn scale_constants<T: Real>(
    points: &[BasicPoint<T>],
    charts: &[UnstableChart<T>],
    profiles: &[DynProfile],
    ball: &[GroupElement<T>],
    normalizer: &Normalizer<T>,
) -> Result<ScaleConstants> {
    let mut l0 = 1.0f64;
    for p in profiles {
        l0 = l0.max(p.max_backward_ratio());
    }
    for chart in charts {
        let gx = normalizer.normalize(&chart.base).gamma;
        for w in chart.offsets.iter().skip(1) {
            let y = exp_u(&chart.base, w)?;
            let gy = normalizer.normalize(&y).gamma;
            for u in chart.offsets.iter().skip(1).take(16) {
                let nx = gx.apply(u).norm().f64();
                if nx > 0.0 {
                    l0 = l0.max(gy.apply(u).norm().f64() / nx);
                }
            }
        }
    }
    let mut floor = f64::INFINITY;
    for p in points {
        let lift = normalizer.normalize(&p.point);
        let x = FlowPoint::new(lift.v, lift.alpha)?;
        floor = floor.min(properness_witness(&x, ball)?.floor);
    }
    let eps0 = 0.5 * floor;
    if !(eps0 > 0.0 && eps0.is_finite()) {
        return Err(Error::DegenerateConfiguration(format!("no positive injectivity scale (floor {floor:e})")));
    }
    let eps1 = 0.9 * eps0 / (2.0 * l0 * l0);
    if !(eps0 > 2.0 * eps1) {
        return Err(Error::DegenerateConfiguration("eps0 > 2 eps1 cannot be met".into()));
    }
    Ok(ScaleConstants { eps0, eps1, delta0: l0 * eps1, l0 })
}
