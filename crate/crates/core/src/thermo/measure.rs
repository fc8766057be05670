use crate::basic::fixed_point_lift;
use crate::error::{Error, Result};
use crate::flow::{flow, FlowPoint};
use crate::scalar::Real;

use super::period::ConjClassRecord;

/// One closed orbit in an [`OrbitMeasure`]: Simpson nodes along
/// t ↦ φᵗx₀ for t ∈ [0, λ₁], with node weights summing to 1.
#[derive(Clone, Debug)]
pub struct OrbitComponent<T> {
    pub word: crate::groups::Word,
    pub period: f64,
    pub base: FlowPoint<T>,
    pub nodes: Vec<f64>,
    pub node_weights: Vec<f64>,
    pub weight: f64,
}

/// Weighted periodic-orbit measure; component weights sum to 1.
#[derive(Clone, Debug)]
pub struct OrbitMeasure<T> {
    pub components: Vec<OrbitComponent<T>>,
}

/// e^{−ĥλ₁}, the heuristic default weighting.
pub fn default_weighting(h: f64) -> impl Fn(f64) -> f64 {
    move |l| (-h * l).exp()
}

fn simpson_nodes(l: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let n = (n.max(2) + 1) & !1;
    let h = l / n as f64;
    let nodes = (0..=n).map(|i| h * i as f64).collect();
    let weights = (0..=n)
        .map(|i| {
            let c = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            c / (3.0 * n as f64)
        })
        .collect();
    (nodes, weights)
}

/// Orbits with λ₁ ≤ T, weighted by weighting(λ₁)·λ₁ and normalized.
pub fn orbit_measure<T: Real>(
    classes: &[ConjClassRecord<T>],
    t: f64,
    weighting: impl Fn(f64) -> f64,
    nodes: usize,
) -> Result<OrbitMeasure<T>> {
    let mut components = Vec::new();
    for c in classes {
        let l = c.period.f64();
        if l > t {
            continue;
        }
        let w = weighting(l) * l;
        if !(w >= 0.0) || !w.is_finite() {
            return Err(Error::InvalidInput(format!("weight {w} at λ₁ = {l}")));
        }
        let (ns, nw) = simpson_nodes(l, nodes);
        components.push(OrbitComponent {
            word: c.representative.word().to_vec(),
            period: l,
            base: fixed_point_lift(&c.representative)?,
            nodes: ns,
            node_weights: nw,
            weight: w,
        });
    }
    if components.len() < 50 {
        return Err(Error::InsufficientData(format!("{} orbits below T = {t}, need 50", components.len())));
    }
    let total: f64 = components.iter().map(|c| c.weight).sum();
    for c in &mut components {
        c.weight /= total;
    }
    Ok(OrbitMeasure { components })
}

impl<T: Real> OrbitMeasure<T> {
    pub fn total_mass(&self) -> f64 {
        self.components.iter().map(|c| c.weight).sum()
    }

    /// ∫F dμ.
    pub fn integrate(&self, f: impl Fn(&FlowPoint<T>) -> f64) -> f64 {
        self.components
            .iter()
            .map(|c| {
                c.weight * c.nodes.iter().zip(&c.node_weights).map(|(&s, &q)| q * f(&flow(&c.base, T::lit(s)))).sum::<f64>()
            })
            .sum()
    }
}

/// ∫F·(G∘φᵗ)dμ − ∫F dμ ∫G dμ. On a closed orbit φᵗ is evaluated at time
/// (s + t) mod λ₁, which is the same point of the quotient, so F and G should
/// be invariant under the group.
pub fn correlation<T: Real>(
    f: impl Fn(&FlowPoint<T>) -> f64,
    g: impl Fn(&FlowPoint<T>) -> f64,
    t: f64,
    mu: &OrbitMeasure<T>,
) -> f64 {
    let mut joint = 0.0;
    let mut mf = 0.0;
    let mut mg = 0.0;
    for c in &mu.components {
        let (mut j, mut a, mut b) = (0.0, 0.0, 0.0);
        for (&s, &q) in c.nodes.iter().zip(&c.node_weights) {
            let fx = f(&flow(&c.base, T::lit(s)));
            let gx = g(&flow(&c.base, T::lit(s)));
            let gt = g(&flow(&c.base, T::lit((s + t).rem_euclid(c.period))));
            j += q * fx * gt;
            a += q * fx;
            b += q * gx;
        }
        joint += c.weight * j;
        mf += c.weight * a;
        mg += c.weight * b;
    }
    joint - mf * mg
}
