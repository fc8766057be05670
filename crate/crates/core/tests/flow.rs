use anosovlab::flow::*;
use anosovlab::linalg::{Covector, Matrix, Vector};
use proptest::prelude::*;

fn point(v: [f64; 3], a: [f64; 3]) -> Option<FlowPoint<f64>> {
    let (v, a) = (Vector::from_f64(&v), Covector::from_f64(&a));
    if a.pair(&v) < 1e-3 * v.norm() * a.norm() {
        return None;
    }
    FlowPoint::new(v, a).ok()
}

fn unimodular(m: [f64; 9]) -> Option<Matrix<f64>> {
    let g = Matrix::from_row_major(3, m.to_vec()).ok()?;
    if g.det() < 0.1 {
        return None;
    }
    g.normalize_unimodular().ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn hopf_round_trip(v in prop::array::uniform3(-2.0f64..2.0), a in prop::array::uniform3(-2.0f64..2.0)) {
        let Some(x) = point(v, a) else { return Ok(()) };
        let back = hopf_inv(&hopf(&x, &Norm::Euclidean), &Norm::Euclidean).unwrap();
        prop_assert!(chart_distance(&x, &back) <= 1e-12);
    }

    #[test]
    fn flow_is_translation(v in prop::array::uniform3(-2.0f64..2.0), a in prop::array::uniform3(-2.0f64..2.0), t in -5.0f64..5.0) {
        let Some(x) = point(v, a) else { return Ok(()) };
        let h = hopf(&x, &Norm::Euclidean);
        let hf = hopf(&flow(&x, t), &Norm::Euclidean);
        prop_assert_eq!(&hf.ell, &h.ell);
        prop_assert_eq!(&hf.h, &h.h);
        prop_assert!((hf.tau - h.tau - t).abs() <= 1e-12 * (1.0 + t.abs()));
    }

    #[test]
    fn flow_group_law(v in prop::array::uniform3(-2.0f64..2.0), a in prop::array::uniform3(-2.0f64..2.0), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let Some(x) = point(v, a) else { return Ok(()) };
        prop_assert!(chart_distance(&flow(&flow(&x, s), t), &flow(&x, s + t)) <= 1e-12 * (1.0 + (s + t).abs().exp()));
    }

    #[test]
    fn hbi_cocycle_identity(v in prop::array::uniform3(-2.0f64..2.0), a in prop::array::uniform3(-2.0f64..2.0), m in prop::array::uniform9(-2.0f64..2.0)) {
        let Some(x) = point(v, a) else { return Ok(()) };
        let Some(g) = unimodular(m) else { return Ok(()) };
        let h = hopf(&x, &Norm::Euclidean);
        let gx = act(&g, &x).unwrap();
        let lhs = hopf(&gx, &Norm::Euclidean).tau;
        let rhs = h.tau + hbi_cocycle(&g, &h.ell, &h.h, &Norm::Euclidean);
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn action_commutes_with_flow(v in prop::array::uniform3(-2.0f64..2.0), a in prop::array::uniform3(-2.0f64..2.0), m in prop::array::uniform9(-2.0f64..2.0), t in -3.0f64..3.0) {
        let Some(x) = point(v, a) else { return Ok(()) };
        let Some(g) = unimodular(m) else { return Ok(()) };
        let lhs = act(&g, &flow(&x, t)).unwrap();
        let rhs = flow(&act(&g, &x).unwrap(), t);
        prop_assert!(chart_distance(&lhs, &rhs) <= 1e-10 * (1.0 + lhs.v().norm() + lhs.alpha().norm()));
    }

    #[test]
    fn splitting_scale_factors(v in prop::array::uniform3(-2.0f64..2.0), a in prop::array::uniform3(-2.0f64..2.0), w in prop::array::uniform3(-1.0f64..1.0), b in prop::array::uniform3(-1.0f64..1.0), t in -3.0f64..3.0) {
        let Some(x) = point(v, a) else { return Ok(()) };
        let (xv, xa) = (x.v(), x.alpha());
        let w = Vector::from_f64(&w);
        let mut beta = Covector::from_f64(&b);
        // make (w, β) tangent: α(w) + β(v) = 0
        let fix = (xa.pair(&w) + beta.pair(&xv)) / xa.pair(&xv);
        beta = &beta - &xa.scale(fix);
        let u = TangentVector::new(x, w, beta).unwrap();
        prop_assert!(u.recomposition_error() <= 1e-12);
        let f = flow_tangent(&u, t);
        let (eu, es) = (t.exp(), (-t).exp());
        prop_assert!((f.u_part() - &u.u_part().scale(eu)).norm_inf() <= 1e-10 * eu);
        prop_assert!((f.s_part() - &u.s_part().scale(es)).norm_inf() <= 1e-10 * es);
        prop_assert!((f.c_part() - u.c_part()).abs() <= 1e-10);
        prop_assert!((contact_form(&f) - contact_form(&u)).abs() <= 1e-10);
    }
}
