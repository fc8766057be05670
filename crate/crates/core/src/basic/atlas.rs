use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{chart_distance, hopf_inv, FlowPoint, HopfCoord, Norm};
use crate::groups::{
    SampleIndex, fixed_points, limit_set_sample, transversality_audit, GeneratorSet, GroupElement, LimitSample,
    TransversalityAudit,
};
use crate::linalg::{norm2, projective_distance, transversality_margin, ProjHyperplane, ProjPoint};
use crate::scalar::Real;

/// Finite sample of (Λ, Λ*) with its pairwise transversality audit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitAtlas<T> {
    samples: Vec<LimitSample<T>>,
    floor: f64,
    audit: TransversalityAudit,
}

impl<T: Real> LimitAtlas<T> {
    pub fn new(samples: Vec<LimitSample<T>>, floor: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InsufficientData("empty limit atlas".into()));
        }
        let audit = transversality_audit(&samples, floor);
        Ok(LimitAtlas { samples, floor, audit })
    }

    /// Samples from the word ball of radius `depth`.
    pub fn from_group(g: &GeneratorSet<T>, depth: usize, cap: usize, floor: f64) -> Result<Self> {
        Self::new(limit_set_sample(g, depth, cap, crate::groups::DEDUP_TOL)?, floor)
    }

    /// Adds the translates gʲ·s for j = 1..=k of every sample (Λ is
    /// Γ-invariant), refining the atlas near the attracting point of g.
    pub fn refine_along(&mut self, g: &GroupElement<T>, k: usize, tol: f64) -> Result<usize> {
        let mut index = SampleIndex::new(T::lit(tol));
        for (i, s) in self.samples.iter().enumerate() {
            index.insert(&s.xi, i);
        }
        let base = self.samples.clone();
        let mut h = g.clone();
        let mut added = 0;
        for _ in 0..k {
            for s in &base {
                let xi = s.xi.act(h.matrix())?;
                if !index.insert(&xi, self.samples.len()) {
                    continue;
                }
                let xi_star = s.xi_star.act_with_inverse(h.inverse_matrix())?;
                let mut source = h.word().to_vec();
                source.extend_from_slice(&s.source);
                let source = crate::groups::reduce(&source);
                self.samples.push(LimitSample { xi, xi_star, source, quality: s.quality });
                added += 1;
            }
            h = h.mul(g);
        }
        self.audit = transversality_audit(&self.samples, self.floor);
        Ok(added)
    }

    pub fn samples(&self) -> &[LimitSample<T>] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn audit(&self) -> &TransversalityAudit {
        &self.audit
    }

    /// Index of the sample whose ξ is closest to `p`, with the distance.
    pub fn nearest_xi(&self, p: &ProjPoint<T>) -> (usize, T) {
        nearest(self.samples.iter().map(|s| projective_distance(p, &s.xi)))
    }

    /// Index of the sample whose ξ* is closest to `h`, with the distance.
    pub fn nearest_xi_star(&self, h: &ProjHyperplane<T>) -> (usize, T) {
        nearest(self.samples.iter().map(|s| crate::linalg::hyperplane_distance(h, &s.xi_star)))
    }
}

fn nearest<T: Real>(it: impl Iterator<Item = T>) -> (usize, T) {
    it.enumerate().fold((0, T::infinity()), |best, (i, d)| if d < best.1 { (i, d) } else { best })
}

/// Outcome of the Ω membership test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaCheck {
    pub inside: bool,
    /// Sample minimizing max(margin(ℓ, ξ*(x)), margin(ξ(x), H)).
    pub witness: usize,
    pub worst: f64,
}

/// Margins at or below this count as zero.
pub const ZERO_MARGIN: f64 = 1e-12;

/// (ℓ, H) ∈ Ω iff for every sample x, ℓ ⋔ ξ*(x) or ξ(x) ⋔ H with margin at
/// least `margin`. A margin of 0 is read as 0⁺, i.e. above [`ZERO_MARGIN`].
pub fn in_omega<T: Real>(ell: &ProjPoint<T>, h: &ProjHyperplane<T>, atlas: &LimitAtlas<T>, margin: f64) -> OmegaCheck {
    let mut witness = 0;
    let mut worst = f64::INFINITY;
    for (i, s) in atlas.samples.iter().enumerate() {
        let m = transversality_margin(ell, &s.xi_star).max(transversality_margin(&s.xi, h)).f64();
        if m < worst {
            worst = m;
            witness = i;
        }
    }
    let inside = if margin > ZERO_MARGIN { worst >= margin } else { worst > ZERO_MARGIN };
    OmegaCheck { inside, witness, worst }
}

/// A lift of a point of the basic set: base pair (ξ(s), ξ*(t)), s ≠ t.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasicPoint<T> {
    pub point: FlowPoint<T>,
    pub s: usize,
    pub t: usize,
    /// Transversality margin of ξ(s) against ξ*(t).
    pub margin: f64,
    /// Worst Ω margin over the atlas.
    pub omega_margin: f64,
}

/// ℋ⁻¹(ξ(s), ξ*(t), τ).
pub fn make_basic_point<T: Real>(s: usize, t: usize, tau: T, atlas: &LimitAtlas<T>) -> Result<BasicPoint<T>> {
    let n = atlas.len();
    if s >= n || t >= n {
        return Err(Error::InvalidInput(format!("sample index out of range ({s}, {t}) for {n} samples")));
    }
    if s == t {
        return Err(Error::NotTransverse(0.0));
    }
    let (a, b) = (&atlas.samples[s], &atlas.samples[t]);
    let margin = transversality_margin(&a.xi, &b.xi_star);
    let point = hopf_inv(&HopfCoord { ell: a.xi.clone(), h: b.xi_star.clone(), tau }, &Norm::Euclidean)?;
    let omega = in_omega(&a.xi, &b.xi_star, atlas, 0.0);
    Ok(BasicPoint { point, s, t, margin: margin.f64(), omega_margin: omega.worst })
}

/// Residual of the periodic-point identity γ·x = φ^{λ₁(γ)}x.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Periodicity {
    pub period: f64,
    /// max(‖e^{−T}γv − v‖/‖v‖, ‖e^{−T}α∘γ − α‖/‖α‖), minimized over the sign.
    pub residual: f64,
}

/// The fixed-point lift x = [ξ(γ₊) : ξ*(γ₋)] at Hopf time 0.
pub fn fixed_point_lift<T: Real>(g: &GroupElement<T>) -> Result<FlowPoint<T>> {
    let (plus, minus_star) = fixed_points(g)?;
    hopf_inv(&HopfCoord { ell: plus, h: minus_star, tau: T::zero() }, &Norm::Euclidean)
}

pub fn periodicity_check<T: Real>(g: &GroupElement<T>) -> Result<Periodicity> {
    let x = fixed_point_lift(g)?;
    let period = g.eigen()?.lambda1();
    Ok(Periodicity { period: period.f64(), residual: periodicity_residual(g, &x, period).f64() })
}

/// The same residual at an arbitrary point and time.
pub fn periodicity_residual<T: Real>(g: &GroupElement<T>, x: &FlowPoint<T>, period: T) -> T {
    let (v, a) = (x.v(), x.alpha());
    let k = (-period).exp();
    let gv = g.matrix().apply(&v).scale(k);
    let ag = g.matrix().pull_back(&a).scale(k);
    let rel = |s: T| {
        let dv = norm2(&(&gv.scale(s) - &v).0) / v.norm();
        let da = norm2(&(&ag.scale(s) - &a).0) / a.norm();
        dv.max(da)
    };
    rel(T::one()).min(rel(-T::one()))
}

/// Smallest chart distance between x and γ·x over a word ball, skipping
/// elements whose axis carries x (those translate along the orbit).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProperWitness {
    pub floor: f64,
    pub checked: usize,
    pub axis_skips: usize,
}

pub fn properness_witness<T: Real>(x: &FlowPoint<T>, ball: &[GroupElement<T>]) -> Result<ProperWitness> {
    let mut w = ProperWitness { floor: f64::INFINITY, checked: 0, axis_skips: 0 };
    for g in ball {
        if g.is_identity_word() {
            continue;
        }
        if on_axis(g, x) {
            w.axis_skips += 1;
            continue;
        }
        let y = crate::flow::act_with_inverse(g.matrix(), g.inverse_matrix(), x)?;
        w.floor = w.floor.min(chart_distance(&y, x).f64());
        w.checked += 1;
    }
    Ok(w)
}

fn on_axis<T: Real>(g: &GroupElement<T>, x: &FlowPoint<T>) -> bool {
    let tol = T::lit(1e-9);
    let hit = |e: &GroupElement<T>| match fixed_points(e) {
        Ok((p, h)) => {
            projective_distance(&p, x.ell()) < tol && crate::linalg::hyperplane_distance(&h, x.hyperplane()) < tol
        }
        Err(_) => false,
    };
    hit(g) || hit(&g.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Presentation;
    use crate::linalg::Matrix;

    fn cyclic() -> LimitAtlas<f64> {
        let g = GeneratorSet::from_matrices(vec![Matrix::diag(&[2.0, 0.5])], Presentation::Free).unwrap();
        LimitAtlas::from_group(&g, 4, 1000, 1e-6).unwrap()
    }

    #[test]
    fn omega_examples() {
        let atlas = cyclic();
        let s = &atlas.samples()[0];
        assert!(!in_omega(&s.xi, &s.xi_star, &atlas, 0.0).inside);
        let t = &atlas.samples()[1];
        assert!(in_omega(&s.xi, &t.xi_star, &atlas, 0.0).inside);
        let single = LimitAtlas::new(vec![s.clone()], 1e-6).unwrap();
        let l = ProjPoint::from_f64(&[1.0, 1.0]).unwrap();
        let h = ProjHyperplane::from_f64(&[1.0, 2.0]).unwrap();
        assert!(in_omega(&l, &h, &single, 0.0).inside);
        assert!(LimitAtlas::<f64>::new(vec![], 1e-6).is_err());
    }

    #[test]
    fn basic_point_examples() {
        let atlas = cyclic();
        assert!(matches!(make_basic_point(0, 0, 0.0, &atlas), Err(Error::NotTransverse(_))));
        let p0 = make_basic_point(0, 1, 0.0, &atlas).unwrap();
        let p1 = make_basic_point(0, 1, 0.7, &atlas).unwrap();
        assert!(chart_distance(&crate::flow::flow(&p0.point, 0.7), &p1.point) < 1e-14);
    }

    #[test]
    fn diagonal_periodicity() {
        let e = std::f64::consts::E;
        let g = GroupElement::from_matrix(Matrix::diag(&[e, 1.0 / e])).unwrap();
        let p = periodicity_check(&g).unwrap();
        assert!((p.period - 1.0).abs() < 1e-14);
        assert!(p.residual <= 1e-12);
        let id = GroupElement::from_matrix(Matrix::<f64>::identity(2)).unwrap();
        assert!(matches!(periodicity_check(&id), Err(Error::NotProximal(_))));
        let off = FlowPoint::<f64>::from_f64(&[1.0, 0.3], &[0.2, 1.0]).unwrap();
        assert!(periodicity_residual(&g, &off, 1.0) > 0.05);
    }
}
