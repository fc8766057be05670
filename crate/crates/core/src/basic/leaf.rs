use crate::error::{Error, Result};
use crate::flow::{flow, FlowPoint};
use crate::linalg::{norm2, Covector, Vector};
use crate::scalar::Real;

/// Relative tolerance for α(w) = 0 and for shared-α leaf tests.
pub const LEAF_TOL: f64 = 1e-9;

/// Quadric lift (v, α) of `y` with the sign closest to the lift of `x`.
pub fn aligned_lift<T: Real>(x: &FlowPoint<T>, y: &FlowPoint<T>) -> (Vector<T>, Covector<T>) {
    let (xv, xa, yv, ya) = (x.v(), x.alpha(), y.v(), y.alpha());
    let plus = norm2(&(&xv - &yv).0).hypot(norm2(&(&xa - &ya).0));
    let minus = norm2(&(&xv + &yv).0).hypot(norm2(&(&xa + &ya).0));
    if minus < plus {
        (-&yv, -&ya)
    } else {
        (yv, ya)
    }
}

fn check_kernel<T: Real>(alpha: &Covector<T>, w: &Vector<T>, v: &Vector<T>) -> Result<()> {
    let defect = alpha.pair(w).abs();
    let scale = alpha.norm() * (w.norm() + v.norm());
    if defect > T::lit(LEAF_TOL) * scale {
        return Err(Error::NotOnLeaf(defect.f64()));
    }
    Ok(())
}

/// Lift of `y` sharing the covector of `x`, or NotOnLeaf.
fn leaf_lift<T: Real>(x: &FlowPoint<T>, y: &FlowPoint<T>) -> Result<Vector<T>> {
    let a = x.alpha();
    let (yv, ya) = aligned_lift(x, y);
    let defect = norm2(&(&ya - &a).0);
    if defect > T::lit(LEAF_TOL) * a.norm() {
        return Err(Error::NotOnLeaf(defect.f64()));
    }
    Ok(yv)
}

/// exp^u_{[v:α]}(w) = [v + w : α] for α(w) = 0.
pub fn exp_u<T: Real>(x: &FlowPoint<T>, w: &Vector<T>) -> Result<FlowPoint<T>> {
    let (v, a) = (x.v(), x.alpha());
    check_kernel(&a, w, &v)?;
    FlowPoint::new(&v + w, a)
}

/// The w ∈ ker α with exp^u_x(w) = y.
pub fn log_u<T: Real>(x: &FlowPoint<T>, y: &FlowPoint<T>) -> Result<Vector<T>> {
    let yv = leaf_lift(x, y)?;
    Ok(&yv - &x.v())
}

/// Parallel transport of w along the unstable leaf from x to y: the same
/// coordinate vector, re-based at y (against the lift of y sharing α).
pub fn transport_u<T: Real>(x: &FlowPoint<T>, y: &FlowPoint<T>, w: &Vector<T>) -> Result<Vector<T>> {
    check_kernel(&x.alpha(), w, &x.v())?;
    leaf_lift(x, y)?;
    Ok(w.clone())
}

/// ℋ_x^y(z) = [v′/β(v′) : β] for x = [v:α], y = [w:β], z = [v′:α].
pub fn stable_holonomy<T: Real>(x: &FlowPoint<T>, y: &FlowPoint<T>, z: &FlowPoint<T>) -> Result<FlowPoint<T>> {
    let vz = leaf_lift(x, z)?;
    let (_, beta) = aligned_lift(x, y);
    let p = beta.pair(&vz);
    if !(p > T::zero()) {
        return Err(Error::NotTransverse(p.f64()));
    }
    FlowPoint::new(vz.scale(T::one() / p), beta)
}

/// Ĥ_x^y(u) = (v + u)/α′(v + u) − v′ for x = [v:α], y = [v′:α′].
pub fn infinitesimal_holonomy<T: Real>(x: &FlowPoint<T>, y: &FlowPoint<T>, u: &Vector<T>) -> Result<Vector<T>> {
    let v = x.v();
    check_kernel(&x.alpha(), u, &v)?;
    let (vy, ay) = aligned_lift(x, y);
    let vu = &v + u;
    let p = ay.pair(&vu);
    if !(p > T::zero()) {
        return Err(Error::NotTransverse(p.f64()));
    }
    Ok(&vu.scale(T::one() / p) - &vy)
}

/// π_y(x) = [v : β/β(v)] and Δ(x, y) = −log β(v).
pub fn time_separation<T: Real>(x: &FlowPoint<T>, y: &FlowPoint<T>) -> Result<(FlowPoint<T>, T)> {
    let v = x.v();
    let (_, beta) = aligned_lift(x, y);
    let p = beta.pair(&v);
    if !(p > T::zero()) {
        return Err(Error::NotTransverse(p.f64()));
    }
    let pi = FlowPoint::new(v, beta.scale(T::one() / p))?;
    Ok((pi, -p.ln()))
}

/// True when x and y share the quadric covector up to `tol` (relative).
pub fn on_same_unstable_leaf<T: Real>(x: &FlowPoint<T>, y: &FlowPoint<T>, tol: f64) -> bool {
    let a = x.alpha();
    let (_, ya) = aligned_lift(x, y);
    norm2(&(&ya - &a).0) <= T::lit(tol) * a.norm()
}

/// φ^t ∘ exp^u_x = exp^u_{φ^t x} ∘ e^t: the defect between both sides.
pub fn linearization_defect<T: Real>(x: &FlowPoint<T>, w: &Vector<T>, t: T) -> Result<T> {
    let lhs = flow(&exp_u(x, w)?, t);
    let rhs = exp_u(&flow(x, t), &w.scale(t.exp()))?;
    Ok(crate::flow::chart_distance(&lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::chart_distance;

    fn x0() -> FlowPoint<f64> {
        FlowPoint::from_f64(&[1.0, 0.0], &[1.0, 0.0]).unwrap()
    }

    #[test]
    fn exp_examples() {
        let x = x0();
        assert_eq!(chart_distance(&exp_u(&x, &Vector::zeros(2)).unwrap(), &x), 0.0);
        let y = exp_u(&x, &Vector::from_f64(&[0.0, 1.0])).unwrap();
        let z = FlowPoint::from_f64(&[1.0, 1.0], &[1.0, 0.0]).unwrap();
        assert!(chart_distance(&y, &z) < 1e-15);
        assert!(matches!(exp_u(&x, &Vector::from_f64(&[1.0, 0.0])), Err(Error::NotOnLeaf(_))));
    }

    #[test]
    fn log_inverts_exp() {
        let x = FlowPoint::<f64>::from_f64(&[2.0, 1.0, -1.0], &[0.5, 0.2, 0.1]).unwrap();
        let a = x.alpha();
        let w = Vector::from_f64(&[0.3, -0.2, 0.7]);
        let w = &w - &x.v().scale(a.pair(&w));
        let y = exp_u(&x, &w).unwrap();
        let back = log_u(&x, &y).unwrap();
        assert!(norm2(&(&back - &w).0) < 1e-12);
        assert!(chart_distance(&exp_u(&x, &back).unwrap(), &y) < 1e-12);
        let off = FlowPoint::<f64>::from_f64(&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0]).unwrap();
        assert!(log_u(&x, &off).is_err());
    }

    #[test]
    fn holonomy_round_trip() {
        let x = FlowPoint::<f64>::from_f64(&[1.0, 0.1], &[1.0, -0.2]).unwrap();
        let y = FlowPoint::from_f64(&[1.0, -0.05], &[1.0, 0.15]).unwrap();
        let u = {
            let a = x.alpha();
            let w = Vector::from_f64(&[0.0, 0.3]);
            &w - &x.v().scale(a.pair(&w))
        };
        let z = exp_u(&x, &u).unwrap();
        let hz = stable_holonomy(&x, &y, &z).unwrap();
        assert!(on_same_unstable_leaf(&y, &hz, 1e-12));
        let back = stable_holonomy(&y, &x, &hz).unwrap();
        assert!(chart_distance(&back, &z) < 1e-12);
        let hu = infinitesimal_holonomy(&x, &y, &u).unwrap();
        assert!(chart_distance(&exp_u(&y, &hu).unwrap(), &hz) < 1e-12);
        assert!(chart_distance(&stable_holonomy(&x, &x, &z).unwrap(), &z) < 1e-12);
    }

    #[test]
    fn time_separation_identity() {
        let x = FlowPoint::<f64>::from_f64(&[1.0, 0.3], &[0.4, 1.0]).unwrap();
        let (p, d) = time_separation(&x, &x).unwrap();
        assert!(d.abs() < 1e-15);
        assert!(chart_distance(&p, &x) < 1e-14);
    }
}
