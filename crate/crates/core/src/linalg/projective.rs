use serde::{Deserialize, Serialize};

use super::dense::{dot, norm2, Covector, Matrix, Vector};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Canonical representative: divide by the largest-magnitude coordinate
/// (first index on ties), scale to unit norm, make the first nonzero
/// coordinate positive.
fn canonical<T: Real>(c: &[T]) -> Option<Vec<T>> {
    if c.is_empty() || c.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let mut k = 0;
    for i in 1..c.len() {
        if c[i].abs() > c[k].abs() {
            k = i;
        }
    }
    if c[k] == T::zero() {
        return None;
    }
    let pivot = c[k];
    let w: Vec<T> = c.iter().map(|&x| x / pivot).collect();
    let n = norm2(&w);
    let mut w: Vec<T> = w.into_iter().map(|x| x / n).collect();
    if let Some(first) = w.iter().find(|x| **x != T::zero()) {
        if *first < T::zero() {
            for x in w.iter_mut() {
                *x = -*x;
            }
        }
    }
    Some(w)
}

/// A line [v] in ℙ(V).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjPoint<T>(Vec<T>);

/// A hyperplane [α] in ℙ(V*).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjHyperplane<T>(Vec<T>);

impl<T: Real> ProjPoint<T> {
    pub fn new(v: &Vector<T>) -> Result<Self> {
        canonical(&v.0)
            .map(ProjPoint)
            .ok_or_else(|| Error::DegenerateConfiguration("zero or non-finite vector".into()))
    }

    pub fn from_f64(c: &[f64]) -> Result<Self> {
        Self::new(&Vector::from_f64(c))
    }

    /// Unit representative.
    pub fn rep(&self) -> Vector<T> {
        Vector(self.0.clone())
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// g·[v].
    pub fn act(&self, g: &Matrix<T>) -> Result<Self> {
        Self::new(&g.apply(&self.rep()))
    }
}

impl<T: Real> ProjHyperplane<T> {
    pub fn new(a: &Covector<T>) -> Result<Self> {
        canonical(&a.0)
            .map(ProjHyperplane)
            .ok_or_else(|| Error::DegenerateConfiguration("zero or non-finite covector".into()))
    }

    pub fn from_f64(c: &[f64]) -> Result<Self> {
        Self::new(&Covector::from_f64(c))
    }

    pub fn rep(&self) -> Covector<T> {
        Covector(self.0.clone())
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// g·[α] = [α ∘ g⁻¹], given g⁻¹.
    pub fn act_with_inverse(&self, g_inv: &Matrix<T>) -> Result<Self> {
        Self::new(&g_inv.pull_back(&self.rep()))
    }
}

/// Norm of the wedge of unit representatives, in [0, 1].
pub fn projective_distance<T: Real>(a: &ProjPoint<T>, b: &ProjPoint<T>) -> T {
    wedge_norm(&a.0, &b.0)
}

pub fn hyperplane_distance<T: Real>(a: &ProjHyperplane<T>, b: &ProjHyperplane<T>) -> T {
    wedge_norm(&a.0, &b.0)
}

pub(crate) fn wedge_norm<T: Real>(a: &[T], b: &[T]) -> T {
    let mut s = T::zero();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let w = a[i] * b[j] - a[j] * b[i];
            s = s + w * w;
        }
    }
    s.sqrt()
}

/// |α(v)| on unit representatives; zero exactly when ℓ ⊂ H.
pub fn transversality_margin<T: Real>(l: &ProjPoint<T>, h: &ProjHyperplane<T>) -> T {
    dot(&l.0, &h.0).abs()
}

/// A point of the extended real line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ext<T> {
    Finite(T),
    Infinity,
}

impl<T: Real> Ext<T> {
    fn homogeneous(self) -> (T, T) {
        match self {
            Ext::Finite(t) => (t, T::one()),
            Ext::Infinity => (T::one(), T::zero()),
        }
    }
}

fn det2<T: Real>(p: (T, T), q: (T, T)) -> T {
    p.0 * q.1 - q.0 * p.1
}

/// (t1−t3)/(t1−t2) · (t2−t4)/(t3−t4) in homogeneous form, so ∞ is allowed.
pub fn cross_ratio<T: Real>(t: [Ext<T>; 4]) -> Result<T> {
    let p = t.map(Ext::homogeneous);
    cross_ratio_homogeneous(p)
}

fn cross_ratio_homogeneous<T: Real>(p: [(T, T); 4]) -> Result<T> {
    let den = det2(p[0], p[1]) * det2(p[2], p[3]);
    if den == T::zero() {
        return Err(Error::DegenerateConfiguration("coincident points in cross-ratio".into()));
    }
    Ok(det2(p[0], p[2]) * det2(p[1], p[3]) / den)
}

/// Cross-ratio of four collinear points of ℙ(V), computed in the
/// coordinates of an orthonormal basis of their common line.
pub fn cross_ratio_points<T: Real>(pts: [&ProjPoint<T>; 4]) -> Result<T> {
    let d = pts[0].dim();
    if pts.iter().any(|p| p.dim() != d) {
        return Err(Error::DegenerateConfiguration("dimension mismatch".into()));
    }
    let e1 = pts[0].0.clone();
    let mut best: Option<(T, Vec<T>)> = None;
    for p in &pts[1..] {
        let c = dot(&p.0, &e1);
        let r: Vec<T> = p.0.iter().zip(&e1).map(|(&x, &y)| x - c * y).collect();
        let n = norm2(&r);
        if best.as_ref().map_or(true, |(m, _)| n > *m) {
            best = Some((n, r));
        }
    }
    let (n, r) = best.expect("three candidates");
    if n <= T::lit(1e-10) {
        return Err(Error::DegenerateConfiguration("all four points coincide".into()));
    }
    let e2: Vec<T> = r.into_iter().map(|x| x / n).collect();
    let mut hom = [(T::zero(), T::zero()); 4];
    for (k, p) in pts.iter().enumerate() {
        let x = dot(&p.0, &e1);
        let y = dot(&p.0, &e2);
        let res: Vec<T> = (0..d).map(|i| p.0[i] - x * e1[i] - y * e2[i]).collect();
        if norm2(&res) > T::lit(1e-10) {
            return Err(Error::DegenerateConfiguration("points are not collinear".into()));
        }
        hom[k] = (x, y);
    }
    cross_ratio_homogeneous(hom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_and_scale_are_canonical() {
        let a = ProjPoint::<f64>::from_f64(&[1.0, -2.0, 0.5]).unwrap();
        let b = ProjPoint::<f64>::from_f64(&[-3.0, 6.0, -1.5]).unwrap();
        assert_eq!(a, b);
        assert!(a.coords()[0] > 0.0);
        assert!((norm2(a.coords()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(ProjPoint::<f64>::from_f64(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn cross_ratio_examples() {
        use Ext::*;
        let cr: f64 = cross_ratio([Finite(0.0), Finite(1.0), Finite(2.0), Infinity]).unwrap();
        assert!((cr - 2.0).abs() < 1e-15);
        let cr: f64 = cross_ratio([Finite(-1.0), Finite(0.0), Finite(0.5), Finite(1.0)]).unwrap();
        assert!((cr - 3.0).abs() < 1e-15);
        let cr = cross_ratio([Finite(0.3), Finite(1.7), Finite(1.7), Finite(-4.0)]).unwrap();
        assert_eq!(cr, 1.0);
        assert!(cross_ratio([Finite(1.0), Finite(1.0), Finite(2.0), Finite(3.0)]).is_err());
    }

    #[test]
    fn margins_and_distances() {
        let e1 = ProjPoint::<f64>::from_f64(&[1.0, 0.0]).unwrap();
        let e2 = ProjPoint::<f64>::from_f64(&[0.0, 1.0]).unwrap();
        assert_eq!(projective_distance(&e1, &e1), 0.0);
        assert_eq!(projective_distance(&e1, &e2), 1.0);
        let k1 = ProjHyperplane::<f64>::from_f64(&[1.0, 0.0]).unwrap();
        let k2 = ProjHyperplane::<f64>::from_f64(&[0.0, 1.0]).unwrap();
        assert_eq!(transversality_margin(&e2, &k1), 0.0);
        assert_eq!(transversality_margin(&e1, &k2), 0.0);
        assert_eq!(transversality_margin(&e1, &k1), 1.0);
    }

    #[test]
    fn projective_cross_ratio_of_affine_points() {
        let pts: Vec<ProjPoint<f64>> = [-1.0, 0.0, 0.5, 1.0]
            .iter()
            .map(|&t| ProjPoint::from_f64(&[t, 1.0, 0.0]).unwrap())
            .collect();
        let cr = cross_ratio_points([&pts[0], &pts[1], &pts[2], &pts[3]]).unwrap();
        assert!((cr - 3.0).abs() < 1e-12);
        let off = ProjPoint::from_f64(&[0.0, 0.0, 1.0]).unwrap();
        assert!(cross_ratio_points([&pts[0], &pts[1], &pts[2], &off]).is_err());
    }
}
