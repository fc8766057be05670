use serde::{Deserialize, Serialize};

use super::algebra::{sl_basis, sl_coordinates};
use crate::error::{Error, Result};
use crate::flow::{chart_distance, flow, FlowPoint};
use crate::linalg::{signature, Covector, Matrix, ProjHyperplane, ProjPoint, Vector};
use crate::scalar::Real;

/// Ellipsoid {[x] : xᵀQx < 0} for a symmetric Q of signature (d−1, 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexBody<T> {
    q: Matrix<T>,
}

impl<T: Real> ConvexBody<T> {
    pub fn new(q: Matrix<T>) -> Result<Self> {
        let d = q.dim();
        if q.sub(&q.transpose()).max_abs() > T::lit(1e-12) * q.max_abs() {
            return Err(Error::InvalidInput("form must be symmetric".into()));
        }
        let (p, n, z) = signature(&q, T::lit(1e-12));
        if (p, n, z) != (d - 1, 1, 0) {
            return Err(Error::InvalidInput(format!("form has signature ({p}, {n}), expected ({}, 1)", d - 1)));
        }
        Ok(ConvexBody { q })
    }

    /// Q = diag(1, …, 1, −1) on ℝ^d; centre e_d.
    pub fn klein_ball(d: usize) -> Self {
        let mut e = vec![T::one(); d];
        e[d - 1] = -T::one();
        ConvexBody { q: Matrix::diag(&e) }
    }

    pub fn form(&self) -> &Matrix<T> {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn pair(&self, a: &Vector<T>, b: &Vector<T>) -> T {
        crate::linalg::dot(&a.0, &self.q.apply(b).0)
    }

    pub fn is_interior(&self, x: &ProjPoint<T>) -> bool {
        let v = x.rep();
        self.pair(&v, &v) < T::zero()
    }

    /// Tangent hyperplane ξ*(b) = ker ⟨b, ·⟩ at a boundary point.
    pub fn tangent_hyperplane(&self, b: &ProjPoint<T>) -> Result<ProjHyperplane<T>> {
        ProjHyperplane::new(&self.lower(&b.rep()))
    }

    fn lower(&self, v: &Vector<T>) -> Covector<T> {
        Covector(self.q.apply(v).0)
    }

    fn check(&self, x: &ProjPoint<T>) -> Result<Vector<T>> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        let v = x.rep();
        let c = self.pair(&v, &v);
        if !(c < T::zero()) {
            return Err(Error::NotInterior);
        }
        Ok(v.scale(T::one() / (-c).sqrt()))
    }
}

/// ½ log of the cross-ratio of x, y and the chord endpoints. With the
/// normalization ⟨x,x⟩ = ⟨y,y⟩ = −1 the roots give sinh d = ‖y − ⟨x,y⟩x‖_Q.
pub fn hilbert_distance<T: Real>(c: &ConvexBody<T>, x: &ProjPoint<T>, y: &ProjPoint<T>) -> Result<T> {
    let xv = c.check(x)?;
    let yv = c.check(y)?;
    let b = c.pair(&xv, &yv);
    let perp = &yv - &xv.scale(-b);
    let s = c.pair(&perp, &perp).max(T::zero());
    Ok(s.sqrt().asinh())
}

/// Unit-speed motion along the chord through x in direction `dir`, towards
/// the endpoint a₊. The chord is x̂ + τν̂ with a± = x̂ ± ν̂, so s₀ = ½ and
/// s/(1−s) = e^{2t} puts the point at ½(e^t a₊ + e^{−t} a₋). The direction
/// is returned relative to the canonical representative of the new point.
pub fn bh_flow<T: Real>(
    c: &ConvexBody<T>,
    x: &ProjPoint<T>,
    dir: &Vector<T>,
    t: T,
) -> Result<(ProjPoint<T>, Vector<T>)> {
    let (ap, am) = chord_endpoints(c, x, dir)?;
    let half = T::lit(0.5);
    let (e, ei) = (t.exp() * half, (-t).exp() * half);
    let p = &ap.scale(e) + &am.scale(ei);
    let d = &ap.scale(e) - &am.scale(ei);
    let pp = ProjPoint::new(&p)?;
    let sign = if crate::linalg::dot(pp.coords(), &p.0) < T::zero() { -T::one() } else { T::one() };
    Ok((pp, d.scale(sign)))
}

/// Endpoints (a₊, a₋) = x̂ ± ν̂ with ⟨x̂,x̂⟩ = −1, ν̂ ⟂ x̂, ⟨ν̂,ν̂⟩ = 1; x̂ has
/// the sign of the canonical representative of x.
pub fn chord_endpoints<T: Real>(
    c: &ConvexBody<T>,
    x: &ProjPoint<T>,
    dir: &Vector<T>,
) -> Result<(Vector<T>, Vector<T>)> {
    let xh = c.check(x)?;
    if dir.dim() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), found: dir.dim() });
    }
    let nu = dir + &xh.scale(c.pair(&xh, dir));
    let n = c.pair(&nu, &nu);
    if !(n > T::lit(1e-24) * dir.norm() * dir.norm()) || !n.is_finite() {
        return Err(Error::DegenerateChord("direction is parallel to the point".into()));
    }
    let nu = nu.scale(T::one() / n.sqrt());
    Ok((&xh + &nu, &xh - &nu))
}

/// Ψ(x, dir) = [ψ₊ : Tr(ψ₋ ·)] in the flow space of sl(V), with
/// ψ₊ = (α⁻(x)/α⁺(x))·v⁺⊗α⁺/α⁻(v⁺) and ψ₋ its mirror, α± = −⟨v±, ·⟩.
pub fn psi_map<T: Real>(c: &ConvexBody<T>, x: &ProjPoint<T>, dir: &Vector<T>) -> Result<FlowPoint<T>> {
    let (psi_p, psi_m) = psi_legs(c, x, dir)?;
    let v = Vector(sl_coordinates(&psi_p));
    let kappa = Covector(sl_basis::<T>(c.dim()).iter().map(|e| psi_m.mul_mat(e).trace()).collect());
    FlowPoint::new(v, kappa)
}

/// The rank-one traceless legs (ψ₊, ψ₋) with Tr(ψ₋ψ₊) = 1.
pub fn psi_legs<T: Real>(c: &ConvexBody<T>, x: &ProjPoint<T>, dir: &Vector<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    let (vp, vm) = chord_endpoints(c, x, dir)?;
    let xr = c.check(x)?;
    let ap = -&c.lower(&vp);
    let am = -&c.lower(&vm);
    let (apx, amx) = (ap.pair(&xr), am.pair(&xr));
    let (am_vp, ap_vm) = (am.pair(&vp), ap.pair(&vm));
    let tiny = T::lit(1e-300);
    if apx.abs() < tiny || amx.abs() < tiny || am_vp.abs() < tiny || ap_vm.abs() < tiny {
        return Err(Error::DegenerateChord("endpoint pairing vanishes".into()));
    }
    let psi_p = outer(&vp, &ap).scale(amx / apx / am_vp);
    let psi_m = outer(&vm, &am).scale(apx / amx / ap_vm);
    Ok((psi_p, psi_m))
}

fn outer<T: Real>(v: &Vector<T>, a: &Covector<T>) -> Matrix<T> {
    let d = v.dim();
    let mut m = Matrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = v[i] * a[j];
        }
    }
    m
}

/// Chart distance between Ψ(φ_BH^t(x)) and φ^{2t}(Ψ(x)).
pub fn psi_conjugacy_residual<T: Real>(c: &ConvexBody<T>, x: &ProjPoint<T>, dir: &Vector<T>, t: T) -> Result<T> {
    let (y, d) = bh_flow(c, x, dir, t)?;
    let lhs = psi_map(c, &y, &d)?;
    let rhs = flow(&psi_map(c, x, dir)?, t + t);
    Ok(chart_distance(&lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_examples() {
        let c = ConvexBody::<f64>::klein_ball(3);
        let o = ProjPoint::from_f64(&[0.0, 0.0, 1.0]).unwrap();
        let y = ProjPoint::from_f64(&[0.5, 0.0, 1.0]).unwrap();
        assert_eq!(hilbert_distance(&c, &o, &o).unwrap(), 0.0);
        assert!((hilbert_distance(&c, &o, &y).unwrap() - 0.5 * 3f64.ln()).abs() < 1e-15);
        let out = ProjPoint::from_f64(&[2.0, 0.0, 1.0]).unwrap();
        assert_eq!(hilbert_distance(&c, &o, &out), Err(Error::NotInterior));
        assert!(ConvexBody::new(Matrix::<f64>::identity(3)).is_err());
    }

    #[test]
    fn flow_is_unit_speed() {
        let c = ConvexBody::<f64>::klein_ball(3);
        let x = ProjPoint::from_f64(&[0.2, -0.1, 1.0]).unwrap();
        let d = Vector(vec![0.3, 1.0, 0.0]);
        assert!(hilbert_distance(&c, &x, &bh_flow(&c, &x, &d, 0.0).unwrap().0).unwrap() < 1e-12);
        for t in [-2.0, 0.3, 1.7] {
            let (y, _) = bh_flow(&c, &x, &d, t).unwrap();
            assert!((hilbert_distance(&c, &x, &y).unwrap() - f64::abs(t)).abs() < 1e-9);
        }
        let (y, dy) = bh_flow(&c, &x, &d, 0.4).unwrap();
        let (z, _) = bh_flow(&c, &y, &dy, 0.5).unwrap();
        let (w, _) = bh_flow(&c, &x, &d, 0.9).unwrap();
        assert!(crate::linalg::projective_distance(&z, &w) < 1e-10);
    }

    #[test]
    fn psi_conjugacy() {
        let c = ConvexBody::<f64>::klein_ball(3);
        let x = ProjPoint::from_f64(&[0.2, -0.1, 1.0]).unwrap();
        let d = Vector(vec![0.3, 1.0, 0.0]);
        let p = psi_map(&c, &x, &d).unwrap();
        assert_eq!(p.dim(), 8);
        let (a, b) = psi_legs(&c, &x, &d).unwrap();
        assert!(a.trace().abs() < 1e-12 && b.trace().abs() < 1e-12);
        assert!((b.mul_mat(&a).trace() - 1.0).abs() < 1e-12);
        assert!(psi_conjugacy_residual(&c, &x, &d, 0.3).unwrap() < 1e-9);
    }
}
