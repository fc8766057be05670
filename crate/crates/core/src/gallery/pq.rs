use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowPoint;
use crate::linalg::{signature, singular_values, Covector, Matrix, ProjPoint, Vector};
use crate::scalar::Real;

/// How the covector leg of Φ∂ is built from x − v.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignConvention {
    /// α = −⟨x − v, ·⟩; Φ∂ lands where α(v) > 0.
    #[default]
    Negated,
    /// α = ⟨x − v, ·⟩; pairs to −2 with x + v, so Φ∂ is rejected.
    Literal,
}

/// ⟨·,·⟩ = diag(+1 × p, −1 × (q+1)) on ℝ^{p+q+1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinkowskiForm {
    pub p: usize,
    pub q: usize,
    pub convention: SignConvention,
}

impl MinkowskiForm {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q + 1 < 2 {
            return Err(Error::InvalidInput("need p + q + 1 ≥ 2".into()));
        }
        Ok(MinkowskiForm { p, q, convention: SignConvention::default() })
    }

    pub fn with_convention(mut self, c: SignConvention) -> Self {
        self.convention = c;
        self
    }

    pub fn dim(&self) -> usize {
        self.p + self.q + 1
    }

    fn sign(&self, i: usize) -> f64 {
        if i < self.p {
            1.0
        } else {
            -1.0
        }
    }

    pub fn gram<T: Real>(&self) -> Matrix<T> {
        let d: Vec<T> = (0..self.dim()).map(|i| T::lit(self.sign(i))).collect();
        Matrix::diag(&d)
    }

    /// (positive, negative) counts of the Gram matrix.
    pub fn signature_audit(&self) -> (usize, usize) {
        let (p, n, _) = signature(&self.gram::<f64>(), 1e-12);
        (p, n)
    }

    pub fn pair<T: Real>(&self, a: &Vector<T>, b: &Vector<T>) -> T {
        (0..self.dim()).map(|i| T::lit(self.sign(i)) * a[i] * b[i]).sum()
    }

    /// ⟨w, ·⟩ as a covector.
    pub fn lower<T: Real>(&self, w: &Vector<T>) -> Covector<T> {
        Covector((0..self.dim()).map(|i| T::lit(self.sign(i)) * w[i]).collect())
    }

    /// Inverse of [`MinkowskiForm::lower`].
    pub fn raise<T: Real>(&self, a: &Covector<T>) -> Vector<T> {
        Vector((0..self.dim()).map(|i| T::lit(self.sign(i)) * a[i]).collect())
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: d });
        }
        Ok(())
    }
}

/// A point (x, v) of the spacelike unit tangent bundle of H^{p,q}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacelikeTangent<T> {
    pub x: Vector<T>,
    pub v: Vector<T>,
}

pub const TANGENT_TOL: f64 = 1e-12;

impl<T: Real> SpacelikeTangent<T> {
    /// Validates ⟨x,x⟩ = −1, ⟨x,v⟩ = 0, ⟨v,v⟩ = 1 relative to the size of x and v.
    pub fn new(form: &MinkowskiForm, x: Vector<T>, v: Vector<T>) -> Result<Self> {
        form.check_dim(x.dim())?;
        form.check_dim(v.dim())?;
        let s = Self { x, v };
        let err = s.constraint_error(form);
        let scale = (s.x.norm() * s.x.norm() + s.v.norm() * s.v.norm()).f64();
        if err > TANGENT_TOL * scale.max(1.0) {
            return Err(Error::InvalidInput(format!("spacelike tangent constraints violated by {err:e}")));
        }
        Ok(s)
    }

    /// Normalizes a timelike x and a vector v not parallel to it.
    pub fn from_raw(form: &MinkowskiForm, x: Vector<T>, v: Vector<T>) -> Result<Self> {
        form.check_dim(x.dim())?;
        form.check_dim(v.dim())?;
        let xx = form.pair(&x, &x);
        if !(xx < T::zero()) {
            return Err(Error::InvalidInput("x must be timelike".into()));
        }
        let x = x.scale(T::one() / (-xx).sqrt());
        let c = form.pair(&x, &v);
        let v = &v + &x.scale(c);
        let vv = form.pair(&v, &v);
        if !(vv > T::lit(1e-24) * v.norm() * v.norm()) {
            return Err(Error::InvalidInput("v has no spacelike part orthogonal to x".into()));
        }
        let v = v.scale(T::one() / vv.sqrt());
        Ok(Self { x, v })
    }

    /// Largest violation of the three constraints.
    pub fn constraint_error(&self, form: &MinkowskiForm) -> f64 {
        let a = (form.pair(&self.x, &self.x) + T::one()).abs();
        let b = form.pair(&self.x, &self.v).abs();
        let c = (form.pair(&self.v, &self.v) - T::one()).abs();
        a.max(b).max(c).f64()
    }

    /// Coordinate distance, up to the overall sign (x, v) ~ (−x, −v).
    pub fn distance(&self, other: &Self) -> f64 {
        let d = |s: T| {
            let dx = &self.x - &other.x.scale(s);
            let dv = &self.v - &other.v.scale(s);
            dx.norm_inf().max(dv.norm_inf()).f64()
        };
        d(T::one()).min(d(-T::one()))
    }

    /// Endpoints [x − v], [x + v] of the geodesic.
    pub fn endpoints(&self) -> Result<(ProjPoint<T>, ProjPoint<T>)> {
        Ok((ProjPoint::new(&(&self.x - &self.v))?, ProjPoint::new(&(&self.x + &self.v))?))
    }
}

/// φ^t(x, v) = (cosh t·x + sinh t·v, sinh t·x + cosh t·v).
pub fn hpq_flow<T: Real>(xv: &SpacelikeTangent<T>, t: T) -> SpacelikeTangent<T> {
    let (c, s) = (t.cosh(), t.sinh());
    SpacelikeTangent { x: &xv.x.scale(c) + &xv.v.scale(s), v: &xv.x.scale(s) + &xv.v.scale(c) }
}

/// Φ∂(x, v) = [x + v : ±⟨x − v, ·⟩].
pub fn phi_partial<T: Real>(form: &MinkowskiForm, xv: &SpacelikeTangent<T>) -> Result<FlowPoint<T>> {
    form.check_dim(xv.x.dim())?;
    let plus = &xv.x + &xv.v;
    let minus = &xv.x - &xv.v;
    let a = form.lower(&minus);
    let a = match form.convention {
        SignConvention::Negated => -&a,
        SignConvention::Literal => a,
    };
    FlowPoint::new(plus, a)
}

/// Inverse of Φ∂ on the quadric representatives (v₁, α) with α(v₁) = 1:
/// v₂ is the vector dual to α, and x ± v = √2·v₁, √2·v₂.
pub fn phi_partial_inv<T: Real>(form: &MinkowskiForm, fp: &FlowPoint<T>) -> Result<SpacelikeTangent<T>> {
    form.check_dim(fp.dim())?;
    let v1 = fp.v();
    let a = fp.alpha();
    let v2 = match form.convention {
        SignConvention::Negated => -&form.raise(&a),
        SignConvention::Literal => form.raise(&a),
    };
    let tol = T::lit(1e-9);
    for u in [&v1, &v2] {
        let uu = form.pair(u, u);
        if uu.abs() > tol * u.norm() * u.norm() {
            return Err(Error::NotIsotropic(uu.f64()));
        }
    }
    let r = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    Ok(SpacelikeTangent { x: (&v1 + &v2).scale(r), v: (&v1 - &v2).scale(r) })
}

/// True iff the span of the three lines carries a form of signature (2, 1).
pub fn negative_triple<T: Real>(form: &MinkowskiForm, pts: [&ProjPoint<T>; 3]) -> Result<bool> {
    for p in pts {
        form.check_dim(p.dim())?;
    }
    let u: Vec<Vector<T>> = pts.iter().map(|p| p.rep()).collect();
    let sv = singular_values(&u);
    let nonzero = sv.iter().filter(|&&s| s > T::lit(1e-9) * sv[0]).count();
    if nonzero < 3 {
        return Err(Error::DegenerateSpan(format!("span has dimension {nonzero}")));
    }
    let mut g = Matrix::zeros(3);
    for i in 0..3 {
        for j in 0..3 {
            g[(i, j)] = form.pair(&u[i], &u[j]);
        }
    }
    let (p, n, z) = signature(&g, T::lit(1e-10));
    if z > 0 {
        return Err(Error::DegenerateSpan("restricted form is degenerate".into()));
    }
    Ok(p == 2 && n == 1)
}
