use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, Covector, Matrix, ProjHyperplane, ProjPoint, Vector};
use crate::scalar::Real;

/// A point [v:α] of 𝕃.
///
/// Stored as canonical [v], canonical [α] with a sign making the unit
/// representatives pair positively, and τ = log‖v‖ of the quadric lift.
/// The quadric representative (v, α) with α(v) = 1 is produced on demand;
/// its first nonzero coordinate is positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowPoint<T> {
    ell: ProjPoint<T>,
    hyp: ProjHyperplane<T>,
    flip: bool,
    tau: T,
}

impl<T: Real> FlowPoint<T> {
    /// The class of (v, α); fails unless α(v) > 0.
    pub fn new(v: Vector<T>, alpha: Covector<T>) -> Result<Self> {
        if v.dim() != alpha.dim() {
            return Err(Error::DimensionMismatch { expected: v.dim(), found: alpha.dim() });
        }
        let p = alpha.pair(&v);
        if !(p > T::zero()) || !p.is_finite() {
            return Err(Error::NotInL(p.f64()));
        }
        let tau = v.norm().ln() - T::lit(0.5) * p.ln();
        Ok(Self::from_parts(ProjPoint::new(&v)?, ProjHyperplane::new(&alpha)?, tau))
    }

    /// Assembles a point from transverse projective data and τ.
    pub(crate) fn from_parts(ell: ProjPoint<T>, hyp: ProjHyperplane<T>, tau: T) -> Self {
        let q = dot(ell.coords(), hyp.coords());
        FlowPoint { ell, hyp, flip: q < T::zero(), tau }
    }

    pub fn from_f64(v: &[f64], alpha: &[f64]) -> Result<Self> {
        Self::new(Vector::from_f64(v), Covector::from_f64(alpha))
    }

    /// Quadric representative v = e^τ v̂.
    pub fn v(&self) -> Vector<T> {
        self.ell.rep().scale(self.tau.exp())
    }

    /// Quadric representative α with α(v) = 1.
    pub fn alpha(&self) -> Covector<T> {
        let a = self.unit_alpha();
        let p = dot(self.ell.coords(), &a.0);
        a.scale((-self.tau).exp() / p)
    }

    /// Unit covector of [α] pairing positively with the unit vector of [v].
    pub fn unit_alpha(&self) -> Covector<T> {
        let a = self.hyp.rep();
        if self.flip {
            -&a
        } else {
            a
        }
    }

    pub fn ell(&self) -> &ProjPoint<T> {
        &self.ell
    }

    pub fn hyperplane(&self) -> &ProjHyperplane<T> {
        &self.hyp
    }

    /// log‖v‖ of the quadric lift.
    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn dim(&self) -> usize {
        self.ell.dim()
    }

    /// α̂(v̂) for the unit representatives.
    pub fn margin(&self) -> T {
        dot(self.ell.coords(), &self.unit_alpha().0)
    }

    pub fn pairing(&self) -> T {
        self.alpha().pair(&self.v())
    }

    /// (v, α) as 2d numbers, v first.
    pub fn to_f64(&self) -> Vec<f64> {
        self.v().0.iter().chain(self.alpha().0.iter()).map(|x| x.f64()).collect()
    }
}

/// φ^t[v:α] = [e^t v : e^{−t} α].
pub fn flow<T: Real>(x: &FlowPoint<T>, t: T) -> FlowPoint<T> {
    FlowPoint { tau: x.tau + t, ..x.clone() }
}

/// g·[v:α] = [gv : α∘g⁻¹].
pub fn act<T: Real>(g: &Matrix<T>, x: &FlowPoint<T>) -> Result<FlowPoint<T>> {
    act_with_inverse(g, &g.inverse()?, x)
}

pub fn act_with_inverse<T: Real>(
    g: &Matrix<T>,
    g_inv: &Matrix<T>,
    x: &FlowPoint<T>,
) -> Result<FlowPoint<T>> {
    let gv = g.apply(&x.ell.rep());
    let tau = x.tau + gv.norm().ln();
    let ell = ProjPoint::new(&gv)?;
    let hyp = ProjHyperplane::new(&g_inv.pull_back(&x.hyp.rep()))?;
    Ok(FlowPoint::from_parts(ell, hyp, tau))
}

/// ([v], [α]); constant along flow lines.
pub fn project_base<T: Real>(x: &FlowPoint<T>) -> (ProjPoint<T>, ProjHyperplane<T>) {
    (x.ell.clone(), x.hyp.clone())
}

/// Flat distance between quadric representatives in V × V*, minimized over
/// the antipodal identification.
pub fn chart_distance<T: Real>(x: &FlowPoint<T>, y: &FlowPoint<T>) -> T {
    let (xv, xa, yv, ya) = (x.v(), x.alpha(), y.v(), y.alpha());
    let d = |s: T| {
        let mut c: Vec<T> = xv.0.iter().zip(&yv.0).map(|(&a, &b)| a - s * b).collect();
        c.extend(xa.0.iter().zip(&ya.0).map(|(&a, &b)| a - s * b));
        norm2(&c)
    };
    d(T::one()).min(d(-T::one()))
}

/// Tangent vector (w, β) at the quadric lift (v, α), with α(w) + β(v) = 0,
/// stored with its splitting (u, 0) + (0, s) + c·(v, −α).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentVector<T> {
    base: FlowPoint<T>,
    w: Vector<T>,
    beta: Covector<T>,
    u_part: Vector<T>,
    s_part: Covector<T>,
    c_part: T,
}

pub const TANGENCY_TOL: f64 = 1e-10;

impl<T: Real> TangentVector<T> {
    pub fn new(base: FlowPoint<T>, w: Vector<T>, beta: Covector<T>) -> Result<Self> {
        let d = base.dim();
        if w.dim() != d || beta.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: w.dim().min(beta.dim()) });
        }
        let defect = base.alpha().pair(&w) + beta.pair(&base.v());
        if defect.abs() > T::lit(TANGENCY_TOL) {
            return Err(Error::InvalidInput(format!(
                "not tangent to the quadric: α(w)+β(v) = {:e}",
                defect.f64()
            )));
        }
        Ok(Self::split(base, w, beta))
    }

    fn split(base: FlowPoint<T>, w: Vector<T>, beta: Covector<T>) -> Self {
        let (v, alpha) = (base.v(), base.alpha());
        let c = alpha.pair(&w);
        let u_part = &w - &v.scale(c);
        let s_part = &beta + &alpha.scale(c);
        TangentVector { base, w, beta, u_part, s_part, c_part: c }
    }

    /// Unstable vector (u, 0) with α(u) = 0.
    pub fn unstable(base: FlowPoint<T>, u: Vector<T>) -> Result<Self> {
        let d = u.dim();
        Self::new(base, u, Covector::zeros(d))
    }

    /// Stable vector (0, s) with s(v) = 0.
    pub fn stable(base: FlowPoint<T>, s: Covector<T>) -> Result<Self> {
        let d = s.dim();
        Self::new(base, Vector::zeros(d), s)
    }

    /// The generator (v, −α) of the flow direction.
    pub fn flow_direction(base: FlowPoint<T>) -> Self {
        let (w, beta) = (base.v(), -&base.alpha());
        Self::split(base, w, beta)
    }

    pub fn base(&self) -> &FlowPoint<T> {
        &self.base
    }
    pub fn w(&self) -> &Vector<T> {
        &self.w
    }
    pub fn beta(&self) -> &Covector<T> {
        &self.beta
    }
    pub fn u_part(&self) -> &Vector<T> {
        &self.u_part
    }
    pub fn s_part(&self) -> &Covector<T> {
        &self.s_part
    }
    pub fn c_part(&self) -> T {
        self.c_part
    }

    /// Largest coordinate gap between (w, β) and the sum of its parts.
    pub fn recomposition_error(&self) -> T {
        let (v, alpha) = (self.base.v(), self.base.alpha());
        let w = &(&self.u_part + &v.scale(self.c_part)) - &self.w;
        let b = &(&self.s_part - &alpha.scale(self.c_part)) - &self.beta;
        w.norm_inf().max(b.norm_inf())
    }
}

/// dφ^t(w, β) = (e^t w, e^{−t} β).
pub fn flow_tangent<T: Real>(u: &TangentVector<T>, t: T) -> TangentVector<T> {
    let (a, b) = (t.exp(), (-t).exp());
    TangentVector {
        base: flow(&u.base, t),
        w: u.w.scale(a),
        beta: u.beta.scale(b),
        u_part: u.u_part.scale(a),
        s_part: u.s_part.scale(b),
        c_part: u.c_part,
    }
}

pub fn act_tangent<T: Real>(g: &Matrix<T>, u: &TangentVector<T>) -> Result<TangentVector<T>> {
    act_tangent_with_inverse(g, &g.inverse()?, u)
}

pub fn act_tangent_with_inverse<T: Real>(
    g: &Matrix<T>,
    g_inv: &Matrix<T>,
    u: &TangentVector<T>,
) -> Result<TangentVector<T>> {
    let base = act_with_inverse(g, g_inv, &u.base)?;
    let gv = g.apply(&u.base.v());
    let s = if dot(&gv.0, &base.v().0) < T::zero() { -T::one() } else { T::one() };
    let w = g.apply(&u.w).scale(s);
    let beta = g_inv.pull_back(&u.beta).scale(s);
    Ok(TangentVector::split(base, w, beta))
}

/// τ(w, β) = α(w).
pub fn contact_form<T: Real>(u: &TangentVector<T>) -> T {
    u.base.alpha().pair(&u.w)
}

fn same_base<T: Real>(a: &FlowPoint<T>, b: &FlowPoint<T>) -> bool {
    a == b || chart_distance(a, b) <= T::lit(1e-12) * (T::one() + a.v().norm() + a.alpha().norm())
}

/// ((w,β),(w′,β′)) = β(w′) + β′(w).
pub fn pseudo_metric<T: Real>(a: &TangentVector<T>, b: &TangentVector<T>) -> Result<T> {
    if !same_base(&a.base, &b.base) {
        return Err(Error::BaseMismatch);
    }
    Ok(a.beta.pair(&b.w) + b.beta.pair(&a.w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1e1() -> FlowPoint<f64> {
        FlowPoint::from_f64(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn make_point_examples() {
        let x = e1e1();
        assert_eq!(x.v().0, vec![1.0, 0.0, 0.0]);
        assert_eq!(x.tau(), 0.0);
        let y = FlowPoint::<f64>::from_f64(&[2.0, 0.0], &[1.0, 0.0]).unwrap();
        assert!((y.v()[0] - 2f64.sqrt()).abs() < 1e-15);
        assert!((y.alpha()[0] - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(FlowPoint::<f64>::from_f64(&[1.0, 0.0], &[-1.0, 0.0]), Err(Error::NotInL(_))));
        let z = FlowPoint::<f64>::from_f64(&[-1.0, 0.0], &[-1.0, 0.0]).unwrap();
        assert_eq!(z, FlowPoint::from_f64(&[1.0, 0.0], &[1.0, 0.0]).unwrap());
    }

    #[test]
    fn diagonal_action_is_flow() {
        let g = Matrix::<f64>::diag(&[2.0, 0.5]);
        let x = FlowPoint::from_f64(&[1.0, 0.0], &[1.0, 0.0]).unwrap();
        let gx = act(&g, &x).unwrap();
        assert!(chart_distance(&gx, &flow(&x, 2f64.ln())) < 1e-15);
    }

    #[test]
    fn contact_and_metric_examples() {
        let x = e1e1();
        let reeb = TangentVector::flow_direction(x.clone());
        assert_eq!(contact_form(&reeb), 1.0);
        let u = TangentVector::unstable(x.clone(), Vector::from_f64(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(contact_form(&u), 0.0);
        let s = TangentVector::stable(x.clone(), Covector::from_f64(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(pseudo_metric(&u, &s).unwrap(), 1.0);
        assert_eq!(pseudo_metric(&u, &u).unwrap(), 0.0);
        let other = TangentVector::flow_direction(flow(&x, 1.0));
        assert_eq!(pseudo_metric(&u, &other), Err(Error::BaseMismatch));
    }

    #[test]
    fn unstable_part_scales_by_e() {
        let x = FlowPoint::from_f64(&[1.0, 0.0], &[1.0, 0.0]).unwrap();
        let u = TangentVector::unstable(x, Vector::from_f64(&[0.0, 1.0])).unwrap();
        let f = flow_tangent(&u, 1.0);
        assert!((f.u_part()[1] - 1f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_tangent() {
        let x = e1e1();
        assert!(TangentVector::new(x, Vector::from_f64(&[1.0, 0.0, 0.0]), Covector::zeros(3)).is_err());
    }

    #[test]
    fn project_base_is_flow_invariant() {
        let x = FlowPoint::<f64>::from_f64(&[0.3, 1.2, -0.4], &[0.9, 0.5, 0.2]).unwrap();
        assert_eq!(project_base(&x), project_base(&flow(&x, 5.0)));
    }
}
