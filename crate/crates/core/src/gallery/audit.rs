//! Seeded random audits of the gallery identities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::algebra::adjoint_rep;
use super::hilbert::{hilbert_distance, psi_conjugacy_residual, psi_legs, ConvexBody};
use super::pq::{hpq_flow, phi_partial, phi_partial_inv, MinkowskiForm, SpacelikeTangent};
use crate::error::{Error, Result};
use crate::flow::{chart_distance, flow};
use crate::linalg::{eigenvalues, Matrix, ProjPoint, Vector};

fn uniform(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-r..r)).collect()
}

/// Random (x, v) in the compact region where both have Euclidean norm ≤ 3;
/// near-null v make x − v ill-conditioned after long flow times.
pub fn random_spacelike_tangent(form: &MinkowskiForm, rng: &mut ChaCha8Rng) -> Result<SpacelikeTangent<f64>> {
    let d = form.dim();
    for _ in 0..1000 {
        let x = Vector(uniform(rng, d, 1.0));
        let xx = form.pair(&x, &x);
        if xx < -0.25 * x.norm() * x.norm() {
            let v = Vector(uniform(rng, d, 1.0));
            if let Ok(t) = SpacelikeTangent::from_raw(form, x, v) {
                if t.x.norm() <= 3.0 && t.v.norm() <= 3.0 {
                    return Ok(t);
                }
            }
        }
    }
    Err(Error::DegenerateConfiguration("no timelike draw in 1000 tries".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiAudit {
    pub samples: usize,
    pub max_round_trip: f64,
    /// max over samples and times of ‖Φ∂(φᵗxv) − φᵗΦ∂(xv)‖ relative to the
    /// size of the quadric representative.
    pub max_intertwining: f64,
}

pub fn phi_audit(form: &MinkowskiForm, samples: usize, times: &[f64], seed: u64) -> Result<PhiAudit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = PhiAudit { samples, max_round_trip: 0.0, max_intertwining: 0.0 };
    for _ in 0..samples {
        let xv = random_spacelike_tangent(form, &mut rng)?;
        let fp = phi_partial(form, &xv)?;
        a.max_round_trip = a.max_round_trip.max(phi_partial_inv(form, &fp)?.distance(&xv));
        for &t in times {
            let lhs = phi_partial(form, &hpq_flow(&xv, t))?;
            let rhs = flow(&fp, t);
            let scale = 1.0 + rhs.v().norm() + rhs.alpha().norm();
            a.max_intertwining = a.max_intertwining.max(chart_distance(&lhs, &rhs) / scale);
        }
    }
    Ok(a)
}

/// Q = Aᵀ diag(1, …, 1, −1) A for a random A close to the identity.
pub fn random_ellipsoid(d: usize, rng: &mut ChaCha8Rng) -> Result<(ConvexBody<f64>, Matrix<f64>)> {
    let mut a = Matrix::identity(d);
    for i in 0..d {
        for j in 0..d {
            a[(i, j)] += rng.gen_range(-0.3..0.3);
        }
    }
    let k = ConvexBody::<f64>::klein_ball(d);
    let q = a.transpose().mul_mat(k.form()).mul_mat(&a);
    Ok((ConvexBody::new(q)?, a))
}

/// A point of the Klein ball at Euclidean radius < r_max, pulled back by A⁻¹.
fn interior_point(d: usize, r_max: f64, a_inv: &Matrix<f64>, rng: &mut ChaCha8Rng) -> Result<ProjPoint<f64>> {
    let mut y = uniform(rng, d - 1, 1.0);
    let n = y.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-12);
    let r = rng.gen_range(0.0..r_max);
    y.iter_mut().for_each(|c| *c *= r / n);
    y.push(1.0);
    ProjPoint::new(&a_inv.apply(&Vector(y)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiAudit {
    pub samples: usize,
    pub max_residual: f64,
    /// max |Tr(ψ₋ψ₊) − 1|.
    pub max_trace_defect: f64,
    /// max |Tr ψ₊| + |Tr ψ₋|.
    pub max_leg_trace: f64,
}

/// Ψ conjugacy on random ellipsoids in ℝ^d, random chords and t ∈ [−1, 1].
pub fn psi_audit(d: usize, samples: usize, seed: u64) -> Result<PsiAudit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = PsiAudit { samples, max_residual: 0.0, max_trace_defect: 0.0, max_leg_trace: 0.0 };
    for _ in 0..samples {
        let (body, m) = random_ellipsoid(d, &mut rng)?;
        let m_inv = m.inverse()?;
        let x = interior_point(d, 0.8, &m_inv, &mut rng)?;
        let dir = Vector(uniform(&mut rng, d, 1.0));
        let t = rng.gen_range(-1.0..1.0);
        let (pp, pm) = psi_legs(&body, &x, &dir)?;
        a.max_trace_defect = a.max_trace_defect.max((pm.mul_mat(&pp).trace() - 1.0).abs());
        a.max_leg_trace = a.max_leg_trace.max(pp.trace().abs() + pm.trace().abs());
        a.max_residual = a.max_residual.max(psi_conjugacy_residual(&body, &x, &dir, t)?);
    }
    Ok(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KleinAudit {
    pub samples: usize,
    /// max |d(o, y) − artanh|y|| with o the centre.
    pub max_error: f64,
}

pub fn klein_audit(d: usize, samples: usize, seed: u64) -> Result<KleinAudit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let body = ConvexBody::<f64>::klein_ball(d);
    let o = ProjPoint::new(&Vector::basis(d, d - 1))?;
    let id = Matrix::identity(d);
    let mut err: f64 = 0.0;
    for _ in 0..samples {
        let y = interior_point(d, 0.99, &id, &mut rng)?;
        let c = y.coords();
        let r = (c[..d - 1].iter().map(|x| x * x).sum::<f64>()).sqrt() / c[d - 1].abs();
        err = err.max((hilbert_distance(&body, &o, &y)? - r.atanh()).abs());
    }
    Ok(KleinAudit { samples, max_error: err })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjointAudit {
    pub samples: usize,
    /// max |λ₁(Ad g) − (λ₁(g) − λ_d(g))|.
    pub max_error: f64,
}

fn log_moduli(m: &Matrix<f64>) -> Result<(f64, f64)> {
    let l: Vec<f64> = eigenvalues(m)?.iter().map(|z| z.norm().ln()).collect();
    Ok((l.iter().copied().fold(f64::NEG_INFINITY, f64::max), l.iter().copied().fold(f64::INFINITY, f64::min)))
}

pub fn adjoint_audit(d: usize, samples: usize, seed: u64) -> Result<AdjointAudit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut err: f64 = 0.0;
    let mut done = 0;
    while done < samples {
        let mut m = Matrix::from_row_major(d, uniform(&mut rng, d * d, 1.0))?;
        let det = m.det();
        if det.abs() < 0.05 {
            continue;
        }
        if det < 0.0 {
            for j in 0..d {
                m[(0, j)] = -m[(0, j)];
            }
        }
        let g = m.normalize_unimodular()?;
        let (top, bottom) = log_moduli(&g)?;
        let (ad_top, _) = log_moduli(&adjoint_rep(&g)?)?;
        err = err.max((ad_top - (top - bottom)).abs());
        done += 1;
    }
    Ok(AdjointAudit { samples, max_error: err })
}
