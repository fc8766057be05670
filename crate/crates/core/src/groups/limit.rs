use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::generators::{enumerate_ball, GeneratorSet, GroupElement};
use super::word::Word;
use crate::error::{Error, Result};
use crate::linalg::{projective_distance, transversality_margin, ProjHyperplane, ProjPoint};
use crate::scalar::Real;

/// Default deduplication radius for limit samples.
pub const DEDUP_TOL: f64 = 1e-9;

/// Approximate boundary datum (ξ(x), ξ*(x)) for the attracting point x of
/// the source element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitSample<T> {
    pub xi: ProjPoint<T>,
    pub xi_star: ProjHyperplane<T>,
    pub source: Word,
    /// λ₁ − λ₂ of the source.
    pub quality: T,
}

/// (ξ(γ₊), ξ*(γ₋)): the attracting line of γ and the kernel of its left
/// eigenvector for the top eigenvalue.
pub fn fixed_points<T: Real>(g: &GroupElement<T>) -> Result<(ProjPoint<T>, ProjHyperplane<T>)> {
    let e = g.eigen()?;
    match (&e.top_right, &e.top_left) {
        (Some(r), Some(l)) if e.simple_top => Ok((r.clone(), l.clone())),
        _ => Err(Error::NotProximal(format!("gap {:e}", e.gap().f64()))),
    }
}

/// The limit sample at γ₊: (ξ(γ₊), ξ*(γ₊)) = (topRight(γ), topLeft(γ⁻¹)).
pub fn attracting_sample<T: Real>(g: &GroupElement<T>) -> Result<LimitSample<T>> {
    let (xi, _) = fixed_points(g)?;
    let (_, xi_star) = fixed_points(&g.inverse())?;
    Ok(LimitSample { xi, xi_star, source: g.word().to_vec(), quality: g.gap()? })
}

/// Samples of Λ from the attracting points of proximal elements in the word
/// ball of radius `depth`, deduplicated at projective distance `tol`
/// (shortest source word kept).
pub fn limit_set_sample<T: Real>(
    g: &GeneratorSet<T>,
    depth: usize,
    cap: usize,
    tol: f64,
) -> Result<Vec<LimitSample<T>>> {
    if g.rank() == 0 {
        return Ok(Vec::new());
    }
    let ball = enumerate_ball(g, depth, cap)?;
    let candidates: Vec<Option<LimitSample<T>>> = {
        use rayon::prelude::*;
        ball.par_iter()
            .map(|e| {
                if e.is_identity_word() || !e.is_proximal() || !e.inverse().is_proximal() {
                    None
                } else {
                    attracting_sample(e).ok()
                }
            })
            .collect()
    };
    let mut index = SampleIndex::new(T::lit(tol));
    let mut out = Vec::new();
    for s in candidates.into_iter().flatten() {
        if index.insert(&s.xi, out.len()) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Near-duplicate filter for projective points keyed on |first coordinate|.
pub(crate) struct SampleIndex<T> {
    tol: T,
    map: BTreeMap<OrderedKey, Vec<(ProjPoint<T>, usize)>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct OrderedKey(f64);
impl Eq for OrderedKey {}
impl PartialOrd for OrderedKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OrderedKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl<T: Real> SampleIndex<T> {
    pub(crate) fn new(tol: T) -> Self {
        SampleIndex { tol, map: BTreeMap::new() }
    }

    /// Nearest stored index within tolerance.
    pub(crate) fn find(&self, p: &ProjPoint<T>) -> Option<usize> {
        let k = p.coords()[0].abs().f64();
        let t = self.tol.f64();
        self.map
            .range(OrderedKey(k - t)..=OrderedKey(k + t))
            .flat_map(|(_, v)| v.iter())
            .find(|(q, _)| projective_distance(p, q) <= self.tol)
            .map(|(_, i)| *i)
    }

    /// Inserts unless a stored point is within tolerance; true if inserted.
    pub(crate) fn insert(&mut self, p: &ProjPoint<T>, idx: usize) -> bool {
        if self.find(p).is_some() {
            return false;
        }
        let k = p.coords()[0].abs().f64();
        self.map.entry(OrderedKey(k)).or_default().push((p.clone(), idx));
        true
    }
}

/// Result of the pairwise transversality audit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransversalityAudit {
    pub pairs: usize,
    pub min_margin: f64,
    pub violations: usize,
    pub worst: Option<(usize, usize)>,
}

/// Checks ξ(s) ⋔ ξ*(t) for all s ≠ t; margins below `floor` count as
/// violations (Anosov-quality failures, not errors).
pub fn transversality_audit<T: Real>(samples: &[LimitSample<T>], floor: f64) -> TransversalityAudit {
    let mut audit = TransversalityAudit { pairs: 0, min_margin: f64::INFINITY, violations: 0, worst: None };
    for (i, s) in samples.iter().enumerate() {
        for (j, t) in samples.iter().enumerate() {
            if i == j {
                continue;
            }
            audit.pairs += 1;
            let m = transversality_margin(&s.xi, &t.xi_star).f64();
            if m < floor {
                audit.violations += 1;
            }
            if m < audit.min_margin {
                audit.min_margin = m;
                audit.worst = Some((i, j));
            }
        }
    }
    audit
}

/// d(gⁿℓ, ξ(γ₊)) for n = 0..=n_max and the least-squares slope of its log
/// over the later half of the terms above the rounding floor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSeries {
    pub distances: Vec<f64>,
    pub slope: Option<f64>,
}

pub fn convergence_probe<T: Real>(
    g: &GroupElement<T>,
    ell: &ProjPoint<T>,
    n_max: usize,
) -> Result<ConvergenceSeries> {
    let (plus, minus_star) = fixed_points(g)?;
    let m = transversality_margin(ell, &minus_star);
    if m < T::lit(1e-6) {
        return Err(Error::NotTransverse(m.f64()));
    }
    let mut p = ell.clone();
    let mut distances = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            p = p.act(g.matrix())?;
        }
        distances.push(projective_distance(&p, &plus).f64());
    }
    let pts: Vec<(f64, f64)> = distances
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 1e-13)
        .map(|(n, &d)| (n as f64, d.ln()))
        .collect();
    let pts = &pts[pts.len() / 2..];
    let slope = if pts.len() >= 2 { Some(super::gap::linear_fit(pts).0) } else { None };
    Ok(ConvergenceSeries { distances, slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GeneratorSet, Presentation};
    use crate::linalg::Matrix;

    #[test]
    fn diagonal_fixed_points() {
        let g = GroupElement::from_matrix(Matrix::<f64>::diag(&[2.0, 0.5])).unwrap();
        let (p, h) = fixed_points(&g).unwrap();
        assert!(projective_distance(&p, &ProjPoint::from_f64(&[1.0, 0.0]).unwrap()) < 1e-12);
        assert!(crate::linalg::hyperplane_distance(&h, &ProjHyperplane::from_f64(&[1.0, 0.0]).unwrap()) < 1e-12);
        let id = GroupElement::from_matrix(Matrix::<f64>::identity(2)).unwrap();
        assert!(matches!(fixed_points(&id), Err(Error::NotProximal(_))));
    }

    #[test]
    fn cyclic_group_has_two_samples() {
        let g = GeneratorSet::from_matrices(vec![Matrix::<f64>::diag(&[2.0, 0.5])], Presentation::Free).unwrap();
        let s = limit_set_sample(&g, 5, 1000, DEDUP_TOL).unwrap();
        assert_eq!(s.len(), 2);
        let e1 = ProjPoint::from_f64(&[1.0, 0.0]).unwrap();
        let e2 = ProjPoint::from_f64(&[0.0, 1.0]).unwrap();
        assert!(s.iter().any(|x| projective_distance(&x.xi, &e1) < 1e-12));
        assert!(s.iter().any(|x| projective_distance(&x.xi, &e2) < 1e-12));
        assert_eq!(transversality_audit(&s, 1e-6).violations, 0);
    }

    #[test]
    fn empty_generator_set() {
        let g = GeneratorSet::<f64>::from_matrices(vec![], Presentation::Free).unwrap();
        assert!(limit_set_sample(&g, 4, 1000, DEDUP_TOL).unwrap().is_empty());
    }

    #[test]
    fn diagonal_convergence() {
        let g = GroupElement::from_matrix(Matrix::<f64>::diag(&[2.0, 0.5])).unwrap();
        let s = convergence_probe(&g, &ProjPoint::from_f64(&[1.0, 1.0]).unwrap(), 12).unwrap();
        assert!((s.slope.unwrap() + 2.0 * 2f64.ln()).abs() < 1e-3);
        let fixed = convergence_probe(&g, &ProjPoint::from_f64(&[1.0, 0.0]).unwrap(), 5).unwrap();
        assert!(fixed.distances.iter().all(|&d| d < 1e-15));
        assert!(convergence_probe(&g, &ProjPoint::from_f64(&[0.0, 1.0]).unwrap(), 5).is_err());
    }
}
