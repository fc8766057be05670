use serde::{Deserialize, Serialize};

use super::point::FlowPoint;
use crate::error::{Error, Result};
use crate::linalg::{dot, transversality_margin, Matrix, ProjHyperplane, ProjPoint, Vector};
use crate::scalar::Real;

/// Ambient norm on V used for Hopf time and the HBI cocycle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Norm<T> {
    Euclidean,
    /// ‖v‖² = vᵀ G v for a positive-definite Gram matrix G.
    Gram(Matrix<T>),
}

impl<T: Real> Default for Norm<T> {
    fn default() -> Self {
        Norm::Euclidean
    }
}

impl<T: Real> Norm<T> {
    pub fn gram(g: Matrix<T>) -> Result<Self> {
        let ev = crate::linalg::symmetric_eigenvalues(&g);
        let asym = g.sub(&g.transpose()).max_abs();
        if asym > T::lit(1e-12) * g.max_abs() || ev.iter().any(|&x| !(x > T::zero())) {
            return Err(Error::InvalidInput("Gram matrix must be symmetric positive definite".into()));
        }
        Ok(Norm::Gram(g))
    }

    pub fn norm(&self, v: &Vector<T>) -> T {
        match self {
            Norm::Euclidean => v.norm(),
            Norm::Gram(g) => dot(&v.0, &g.apply(v).0).sqrt(),
        }
    }
}

/// ([v], [α], τ) with ℓ ⋔ H.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopfCoord<T> {
    pub ell: ProjPoint<T>,
    pub h: ProjHyperplane<T>,
    pub tau: T,
}

/// ℋ([v:α]) = ([v], [α], log(‖v‖/√α(v))).
pub fn hopf<T: Real>(x: &FlowPoint<T>, norm: &Norm<T>) -> HopfCoord<T> {
    let tau = match norm {
        Norm::Euclidean => x.tau(),
        Norm::Gram(_) => x.tau() + norm.norm(&x.ell().rep()).ln(),
    };
    HopfCoord { ell: x.ell().clone(), h: x.hyperplane().clone(), tau }
}

/// ℋ⁻¹([v],[α],s) = [(e^s/‖v‖)v : (‖v‖/(e^s α(v)))α].
pub fn hopf_inv<T: Real>(h: &HopfCoord<T>, norm: &Norm<T>) -> Result<FlowPoint<T>> {
    let m = transversality_margin(&h.ell, &h.h);
    if !(m > T::zero()) {
        return Err(Error::NotTransverse(m.f64()));
    }
    let tau = match norm {
        Norm::Euclidean => h.tau,
        Norm::Gram(_) => h.tau - norm.norm(&h.ell.rep()).ln(),
    };
    Ok(FlowPoint::from_parts(h.ell.clone(), h.h.clone(), tau))
}

/// 𝓗(g, [v], [α]) = log(‖gv‖/‖v‖).
pub fn hbi_cocycle<T: Real>(g: &Matrix<T>, ell: &ProjPoint<T>, _h: &ProjHyperplane<T>, norm: &Norm<T>) -> T {
    let v = ell.rep();
    (norm.norm(&g.apply(&v)) / norm.norm(&v)).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{act, flow};

    #[test]
    fn hopf_examples() {
        let x = FlowPoint::<f64>::from_f64(&[1.0, 0.0], &[1.0, 0.0]).unwrap();
        let h = hopf(&x, &Norm::Euclidean);
        assert_eq!(h.tau, 0.0);
        assert_eq!(h.ell, ProjPoint::from_f64(&[1.0, 0.0]).unwrap());
        let y = FlowPoint::<f64>::from_f64(&[2f64.sqrt(), 0.0], &[1.0 / 2f64.sqrt(), 0.0]).unwrap();
        assert!((hopf(&y, &Norm::Euclidean).tau - 0.5 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn inverse_rejects_contained_line() {
        let h = HopfCoord {
            ell: ProjPoint::<f64>::from_f64(&[1.0, 0.0]).unwrap(),
            h: ProjHyperplane::from_f64(&[0.0, 1.0]).unwrap(),
            tau: 0.0,
        };
        assert!(matches!(hopf_inv(&h, &Norm::Euclidean), Err(Error::NotTransverse(_))));
    }

    #[test]
    fn cocycle_examples() {
        let e1 = ProjPoint::<f64>::from_f64(&[1.0, 0.0]).unwrap();
        let h = ProjHyperplane::from_f64(&[1.0, 1.0]).unwrap();
        assert_eq!(hbi_cocycle(&Matrix::identity(2), &e1, &h, &Norm::Euclidean), 0.0);
        let g = Matrix::diag(&[2.0, 0.5]);
        assert!((hbi_cocycle(&g, &e1, &h, &Norm::Euclidean) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn gram_norm_round_trip_and_action() {
        let gram = Norm::gram(Matrix::<f64>::from_rows(&[&[2.0, 0.5, 0.0], &[0.5, 1.0, 0.1], &[0.0, 0.1, 3.0]]).unwrap())
            .unwrap();
        let x = FlowPoint::<f64>::from_f64(&[0.4, -1.1, 0.3], &[1.0, -0.2, 0.7]).unwrap();
        let h = hopf(&x, &gram);
        let back = hopf_inv(&h, &gram).unwrap();
        assert!(crate::flow::chart_distance(&x, &back) < 1e-12);
        assert!((hopf(&flow(&x, 0.7), &gram).tau - h.tau - 0.7).abs() < 1e-12);
        let g = Matrix::<f64>::from_rows(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, 0.0], &[0.5, 0.0, 1.0]]).unwrap();
        let gx = act(&g, &x).unwrap();
        let lhs = hopf(&gx, &gram).tau;
        let rhs = h.tau + hbi_cocycle(&g, &h.ell, &h.h, &gram);
        assert!((lhs - rhs).abs() < 1e-12);
        assert!(Norm::gram(Matrix::<f64>::diag(&[1.0, -1.0])).is_err());
    }
}
