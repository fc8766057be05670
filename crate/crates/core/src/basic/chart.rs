use serde::{Deserialize, Serialize};

use super::atlas::LimitAtlas;
use crate::error::{Error, Result};
use crate::flow::FlowPoint;
use crate::groups::{linear_fit, GeneratorSet};
use crate::linalg::{dot, norm2, Covector, Matrix, Vector};
use crate::scalar::Real;

/// Greedy Γ-normalization: moves a lift by generators while the energy
/// ‖v‖² + ‖α‖² of its quadric representative decreases.
#[derive(Clone, Debug)]
pub struct Normalizer<T> {
    moves: Vec<(Matrix<T>, Matrix<T>)>,
    max_steps: usize,
}

/// A lift moved by γ, with γ and γ⁻¹.
#[derive(Clone, Debug)]
pub struct NormalizedLift<T> {
    pub gamma: Matrix<T>,
    pub gamma_inv: Matrix<T>,
    pub v: Vector<T>,
    pub alpha: Covector<T>,
    pub steps: usize,
}

fn energy<T: Real>(v: &Vector<T>, a: &Covector<T>) -> T {
    dot(&v.0, &v.0) + dot(&a.0, &a.0)
}

impl<T: Real> Normalizer<T> {
    pub fn new(moves: Vec<(Matrix<T>, Matrix<T>)>) -> Self {
        Normalizer { moves, max_steps: 4096 }
    }

    /// Moves by the generators and their inverses.
    pub fn from_group(g: &GeneratorSet<T>) -> Self {
        let moves = g.letters().iter().map(|&l| (g.letter_matrix(l).clone(), g.letter_matrix(l.inverse()).clone())).collect();
        Self::new(moves)
    }

    pub fn normalize(&self, x: &FlowPoint<T>) -> NormalizedLift<T> {
        let d = x.dim();
        self.descend(NormalizedLift {
            gamma: Matrix::identity(d),
            gamma_inv: Matrix::identity(d),
            v: x.v(),
            alpha: x.alpha(),
            steps: 0,
        })
    }

    /// Normalized lifts of φ^t x at increasing times, each obtained by
    /// flowing the previous normalized lift; this keeps the lift bounded
    /// where normalizing the raw cover point would lose e^{2t} in accuracy.
    /// Rounding still grows at the expansion rate of the orbit itself, so
    /// horizons much beyond t ≈ 15 no longer follow the true orbit.
    pub fn track(&self, x: &FlowPoint<T>, times: &[f64]) -> Vec<NormalizedLift<T>> {
        let mut out: Vec<NormalizedLift<T>> = Vec::with_capacity(times.len());
        let mut prev_t = 0.0;
        for &t in times {
            let lift = match out.last() {
                None => self.normalize(&crate::flow::flow(x, T::lit(t))),
                Some(l) => {
                    let dt = T::lit(t - prev_t);
                    self.descend(NormalizedLift {
                        gamma: l.gamma.clone(),
                        gamma_inv: l.gamma_inv.clone(),
                        v: l.v.scale(dt.exp()),
                        alpha: l.alpha.scale((-dt).exp()),
                        steps: l.steps,
                    })
                }
            };
            prev_t = t;
            out.push(lift);
        }
        out
    }

    fn descend(&self, mut lift: NormalizedLift<T>) -> NormalizedLift<T> {
        let mut e = energy(&lift.v, &lift.alpha);
        let limit = lift.steps + self.max_steps;
        while lift.steps < limit {
            let mut best: Option<(usize, T, Vector<T>, Covector<T>)> = None;
            for (i, (h, h_inv)) in self.moves.iter().enumerate() {
                let v = h.apply(&lift.v);
                let a = h_inv.pull_back(&lift.alpha);
                let en = energy(&v, &a);
                if en < e * T::lit(1.0 - 1e-12) && best.as_ref().map_or(true, |b| en < b.1) {
                    best = Some((i, en, v, a));
                }
            }
            let Some((i, en, v, a)) = best else { break };
            let (h, h_inv) = &self.moves[i];
            lift.gamma = h.mul_mat(&lift.gamma);
            lift.gamma_inv = lift.gamma_inv.mul_mat(h_inv);
            lift.v = v;
            lift.alpha = a;
            lift.steps += 1;
            e = en;
        }
        lift
    }
}

/// Norm used for unstable vectors and leaf distances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartNorm {
    /// Flat norm of the quadric representative in V × V*.
    Flat,
    /// Flat norm after Γ-normalization of the base point.
    Quotient,
}

/// Sampled infinitesimal unstable limit set Λ^u(x).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnstableChart<T> {
    pub base: FlowPoint<T>,
    /// Offsets w ∈ ker α with [v + w] ∈ Λ; the first is 0.
    pub offsets: Vec<Vector<T>>,
    /// Source sample index of each offset (None for the centre).
    pub sources: Vec<Option<usize>>,
    pub norm: ChartNorm,
}

/// {u/α(u) − v : [u] a ξ-sample, α(u) > 0}, clipped to flat norm ≤ radius.
pub fn unstable_chart<T: Real>(x: &FlowPoint<T>, atlas: &LimitAtlas<T>, radius: f64) -> UnstableChart<T> {
    let (v, a) = (x.v(), x.alpha());
    let scale = v.norm();
    let mut offsets = vec![Vector::zeros(x.dim())];
    let mut sources = vec![None];
    for (i, s) in atlas.samples().iter().enumerate() {
        let u = s.xi.rep();
        let p = a.pair(&u);
        if p.abs() <= T::epsilon() * a.norm() {
            continue;
        }
        let w = &u.scale(T::one() / p) - &v;
        let n = w.norm().f64();
        if n <= 1e-12 * scale.f64() || n > radius {
            continue;
        }
        // project away the rounding component along v
        let w = &w - &v.scale(a.pair(&w));
        offsets.push(w);
        sources.push(Some(i));
    }
    UnstableChart { base: x.clone(), offsets, sources, norm: ChartNorm::Flat }
}

/// Per-offset growth profile along the flow: g_w(t) = e^t‖γ_t w‖ with γ_t
/// normalizing φ^t x (identity without a normalizer).
#[derive(Clone, Debug)]
pub struct DynProfile {
    pub horizon: f64,
    pub at_horizon: Vec<f64>,
    pub sup: Vec<f64>,
    /// max over t ≤ T of g_w(t)/g_w(T), the backward-Lipschitz ratio.
    pub backward: Vec<f64>,
    linear: NestedDiameters,
    bowen: NestedDiameters,
}

/// Diameters of the sublevel sets {i : key_i ≤ δ}, precomputed by adding
/// points in increasing key order.
#[derive(Clone, Debug)]
struct NestedDiameters {
    keys: Vec<f64>,
    diams: Vec<f64>,
}

impl NestedDiameters {
    fn new(keys: &[f64], coords: &[Vec<f64>]) -> Self {
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]));
        let mut diams = Vec::with_capacity(order.len());
        let mut diam = 0.0f64;
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[..k] {
                let d: Vec<f64> = coords[i].iter().zip(&coords[j]).map(|(p, q)| p - q).collect();
                diam = diam.max(norm2(&d));
            }
            diams.push(diam);
        }
        NestedDiameters { keys: order.iter().map(|&i| keys[i]).collect(), diams }
    }

    fn lookup(&self, delta: f64) -> f64 {
        let n = self.keys.partition_point(|&k| k <= delta);
        if n == 0 {
            0.0
        } else {
            self.diams[n - 1]
        }
    }
}

impl DynProfile {
    pub fn new<T: Real>(chart: &UnstableChart<T>, horizon: f64, steps: usize, normalizer: Option<&Normalizer<T>>) -> Self {
        let steps = steps.max(1);
        let d = chart.base.dim();
        let times: Vec<f64> = (0..=steps).map(|k| horizon * k as f64 / steps as f64).collect();
        let gammas: Vec<Matrix<T>> = match normalizer {
            Some(nz) => nz.track(&chart.base, &times).into_iter().map(|l| l.gamma).collect(),
            None => vec![Matrix::identity(d); times.len()],
        };
        let m = chart.offsets.len();
        let mut at_horizon = Vec::with_capacity(m);
        let mut sup = Vec::with_capacity(m);
        let mut backward = Vec::with_capacity(m);
        let mut base_coords = Vec::with_capacity(m);
        for w in &chart.offsets {
            let mut best = 0.0f64;
            let mut last = 0.0;
            for (k, g) in gammas.iter().enumerate() {
                let t = horizon * k as f64 / steps as f64;
                let val = t.exp() * g.apply(w).norm().f64();
                best = best.max(val);
                last = val;
            }
            at_horizon.push(last);
            sup.push(best);
            backward.push(if last > 0.0 { best / last } else { 1.0 });
            base_coords.push(gammas[0].apply(w).to_f64());
        }
        let linear = NestedDiameters::new(&at_horizon, &base_coords);
        let bowen = NestedDiameters::new(&sup, &base_coords);
        DynProfile { horizon, at_horizon, sup, backward, linear, bowen }
    }

    /// diam Λ^u_T(x, δ) = diam{w : e^T‖w‖ ≤ δ}.
    pub fn linear_diameter(&self, delta: f64) -> f64 {
        self.linear.lookup(delta)
    }

    /// diam(K ∩ B^u_T(x, δ)) by orbit-distance filtering over t ∈ [0, T].
    pub fn bowen_diameter(&self, delta: f64) -> f64 {
        self.bowen.lookup(delta)
    }

    pub fn max_backward_ratio(&self) -> f64 {
        self.backward.iter().cloned().fold(1.0, f64::max)
    }
}

/// One row of the dynamical-ball table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynBallRow {
    pub horizon: f64,
    pub delta: f64,
    pub linear: f64,
    pub bowen: f64,
}

pub fn dyn_ball_diameters<T: Real>(
    chart: &UnstableChart<T>,
    horizon: f64,
    deltas: &[f64],
    normalizer: Option<&Normalizer<T>>,
) -> Vec<DynBallRow> {
    let prof = DynProfile::new(chart, horizon, 64, normalizer);
    deltas
        .iter()
        .map(|&delta| DynBallRow { horizon, delta, linear: prof.linear_diameter(delta), bowen: prof.bowen_diameter(delta) })
        .collect()
}

/// Checks both diameter inequalities with the given L0:
/// diam B(ε) ≤ 2L0·diam Λ(L0ε) and diam Λ(δ) ≤ L0·diam B(L0²δ).
pub fn sandwich_holds(prof: &DynProfile, scale: f64, l0: f64) -> bool {
    let tol = 1e-12 * (1.0 + scale);
    prof.bowen_diameter(scale) <= 2.0 * l0 * prof.linear_diameter(l0 * scale) + tol
        && prof.linear_diameter(scale) <= l0 * prof.bowen_diameter(l0 * l0 * scale) + tol
}

/// diam_ε / (ε · diam_δ) on Bowen balls.
pub fn distortion_ratio(prof: &DynProfile, eps: f64, delta: f64) -> Result<f64> {
    let dd = prof.bowen_diameter(delta);
    if !(dd > 0.0) {
        return Err(Error::DegenerateBall);
    }
    Ok(prof.bowen_diameter(eps) / (eps * dd))
}

/// Exponential rates of stable contraction and unstable expansion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionRates {
    pub c_s: f64,
    pub c_u: f64,
    pub r2_s: f64,
    pub r2_u: f64,
}

/// Log-linear fits of ‖dφ^t(u,0)‖ and ‖dφ^t(0,s)‖ for generic u ∈ ker α,
/// s ∈ ker ι_v over t ∈ [0, horizon].
pub fn contraction_rates<T: Real>(x: &FlowPoint<T>, horizon: f64, steps: usize, normalizer: Option<&Normalizer<T>>) -> Result<ContractionRates> {
    let d = x.dim();
    let (v, a) = (x.v(), x.alpha());
    let probe: Vec<T> = (0..d).map(|i| T::one() / T::lit(i as f64 + 1.5)).collect();
    let u = &Vector(probe.clone()) - &v.scale(a.pair(&Vector(probe.clone())));
    let s = &Covector(probe.clone()) - &a.scale(Covector(probe).pair(&v));
    if u.norm() == T::zero() || s.norm() == T::zero() {
        return Err(Error::DegenerateConfiguration("probe vector lies on the flow direction".into()));
    }
    let steps = steps.max(2);
    let times: Vec<f64> = (0..=steps).map(|k| horizon * k as f64 / steps as f64).collect();
    let lifts: Vec<(Matrix<T>, Matrix<T>)> = match normalizer {
        Some(nz) => nz.track(x, &times).into_iter().map(|l| (l.gamma, l.gamma_inv)).collect(),
        None => vec![(Matrix::identity(d), Matrix::identity(d)); times.len()],
    };
    let mut pu = Vec::with_capacity(steps + 1);
    let mut ps = Vec::with_capacity(steps + 1);
    for (&t, (g, g_inv)) in times.iter().zip(&lifts) {
        pu.push((t, t + g.apply(&u).norm().f64().ln()));
        ps.push((t, -t + g_inv.pull_back(&s).norm().f64().ln()));
    }
    let (su, _, r2_u) = linear_fit(&pu);
    let (ss, _, r2_s) = linear_fit(&ps);
    Ok(ContractionRates { c_s: -ss, c_u: su, r2_s, r2_u })
}
