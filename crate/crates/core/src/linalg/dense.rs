use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest supported dimension.
pub const MAX_DIM: usize = 16;

/// Column vector in V.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vector<T>(pub Vec<T>);

/// Row vector in V*, acting on vectors by the standard pairing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Covector<T>(pub Vec<T>);

macro_rules! coord_common {
    ($name:ident) => {
        impl<T: Real> $name<T> {
            pub fn new(coords: Vec<T>) -> Self {
                $name(coords)
            }

            pub fn zeros(d: usize) -> Self {
                $name(vec![T::zero(); d])
            }

            /// The i-th standard basis element.
            pub fn basis(d: usize, i: usize) -> Self {
                let mut c = vec![T::zero(); d];
                c[i] = T::one();
                $name(c)
            }

            pub fn from_f64(coords: &[f64]) -> Self {
                $name(coords.iter().map(|&x| T::lit(x)).collect())
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &[T] {
                &self.0
            }

            pub fn norm(&self) -> T {
                norm2(&self.0)
            }

            pub fn norm_inf(&self) -> T {
                self.0.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
            }

            pub fn scale(&self, s: T) -> Self {
                $name(self.0.iter().map(|&x| x * s).collect())
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|x| x.is_finite())
            }

            pub fn dot_coords(&self, other: &Self) -> T {
                dot(&self.0, &other.0)
            }

            pub fn to_f64(&self) -> Vec<f64> {
                self.0.iter().map(|x| x.f64()).collect()
            }
        }

        impl<T> Index<usize> for $name<T> {
            type Output = T;
            fn index(&self, i: usize) -> &T {
                &self.0[i]
            }
        }

        impl<T> IndexMut<usize> for $name<T> {
            fn index_mut(&mut self, i: usize) -> &mut T {
                &mut self.0[i]
            }
        }

        impl<T: Real> Add for &$name<T> {
            type Output = $name<T>;
            fn add(self, rhs: Self) -> $name<T> {
                $name(self.0.iter().zip(&rhs.0).map(|(&a, &b)| a + b).collect())
            }
        }

        impl<T: Real> Sub for &$name<T> {
            type Output = $name<T>;
            fn sub(self, rhs: Self) -> $name<T> {
                $name(self.0.iter().zip(&rhs.0).map(|(&a, &b)| a - b).collect())
            }
        }

        impl<T: Real> Neg for &$name<T> {
            type Output = $name<T>;
            fn neg(self) -> $name<T> {
                $name(self.0.iter().map(|&a| -a).collect())
            }
        }

        impl<T: Real> Mul<T> for &$name<T> {
            type Output = $name<T>;
            fn mul(self, s: T) -> $name<T> {
                self.scale(s)
            }
        }
    };
}

coord_common!(Vector);
coord_common!(Covector);

impl<T: Real> Covector<T> {
    /// The pairing α(v).
    pub fn pair(&self, v: &Vector<T>) -> T {
        dot(&self.0, &v.0)
    }
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

/// Euclidean norm with scaling against overflow.
pub(crate) fn norm2<T: Real>(a: &[T]) -> T {
    let m = a.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    if m == T::zero() || !m.is_finite() {
        return m;
    }
    let s = a.iter().fold(T::zero(), |s, &x| {
        let y = x / m;
        s + y * y
    });
    m * s.sqrt()
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diag(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    /// Builds an n×n matrix from row-major data.
    pub fn from_row_major(n: usize, data: Vec<T>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidInput(format!("dimension {n} outside 1..={MAX_DIM}")));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(Matrix { n, data })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: r.len() });
            }
            data.extend(r.iter().map(|&x| T::lit(x)));
        }
        Self::from_row_major(n, data)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        Vector((0..self.n).map(|i| self[(i, j)]).collect())
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * other.data[k * n + j];
                }
            }
        }
        out
    }

    /// M v.
    pub fn apply(&self, v: &Vector<T>) -> Vector<T> {
        Vector((0..self.n).map(|i| dot(self.row(i), &v.0)).collect())
    }

    /// α ∘ M.
    pub fn pull_back(&self, a: &Covector<T>) -> Covector<T> {
        let n = self.n;
        Covector(
            (0..n)
                .map(|j| (0..n).fold(T::zero(), |s, i| s + a.0[i] * self[(i, j)]))
                .collect(),
        )
    }

    pub fn scale(&self, s: T) -> Self {
        Matrix { n: self.n, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn norm_fro(&self) -> T {
        norm2(&self.data)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |s, i| s + self[(i, i)])
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Lu<T> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = T::one();
        let mut singular = false;
        for k in 0..n {
            let mut p = k;
            let mut best = a[k * n + k].abs();
            for i in k + 1..n {
                let v = a[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == T::zero() {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let piv = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / piv;
                a[i * n + k] = f;
                if f != T::zero() {
                    for j in k + 1..n {
                        a[i * n + j] = a[i * n + j] - f * a[k * n + j];
                    }
                }
            }
        }
        Lu { n, a, perm, sign, singular }
    }

    pub fn det(&self) -> T {
        self.lu().det()
    }

    pub fn inverse(&self) -> Result<Self> {
        let lu = self.lu();
        if lu.singular {
            return Err(Error::DegenerateConfiguration("singular matrix".into()));
        }
        let n = self.n;
        let mut inv = Self::zeros(n);
        for j in 0..n {
            let col = lu.solve(&Vector::basis(n, j));
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }

    /// Rescales by det^{-1/d}; fails for a non-positive determinant.
    pub fn normalize_unimodular(&self) -> Result<Self> {
        let det = self.det();
        if !(det > T::zero()) || !det.is_finite() {
            return Err(Error::NotUnimodular(det.f64()));
        }
        let s = det.powf(-T::one() / T::lit(self.n as f64));
        Ok(self.scale(s))
    }

    /// Checks |det − 1| ≤ tol.
    pub fn check_unimodular(&self, tol: T) -> Result<()> {
        let det = self.det();
        if (det - T::one()).abs() <= tol {
            Ok(())
        } else {
            Err(Error::NotUnimodular(det.f64()))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn cast<U: Real>(&self) -> Matrix<U> {
        Matrix { n: self.n, data: self.data.iter().map(|&x| U::lit(x.f64())).collect() }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|x| x.f64()).collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        self.mul_mat(rhs)
    }
}

/// Packed LU factors of a square matrix.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    n: usize,
    a: Vec<T>,
    perm: Vec<usize>,
    sign: T,
    singular: bool,
}

impl<T: Real> Lu<T> {
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn det(&self) -> T {
        if self.singular {
            return T::zero();
        }
        (0..self.n).fold(self.sign, |d, i| d * self.a[i * self.n + i])
    }

    /// Solves A x = b.
    pub fn solve(&self, b: &Vector<T>) -> Vector<T> {
        let n = self.n;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] = x[i] - self.a[i * n + k] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] = x[i] - self.a[i * n + k] * x[k];
            }
            x[i] = x[i] / self.a[i * n + i];
        }
        Vector(x)
    }

    /// Smallest pivot magnitude, a cheap conditioning hint.
    pub fn min_pivot(&self) -> T {
        (0..self.n).fold(T::infinity(), |m, i| m.min(self.a[i * self.n + i].abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_rotation_is_transpose() {
        let (s, c) = 0.3f64.sin_cos();
        let r = Matrix::<f64>::from_rows(&[&[c, -s], &[s, c]]).unwrap();
        let inv = r.inverse().unwrap();
        let t = r.transpose();
        for (a, b) in inv.data().iter().zip(t.data()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn det_and_normalization() {
        let m = Matrix::<f64>::from_rows(&[&[2.0, 1.0, 0.0], &[0.0, 3.0, 1.0], &[1.0, 0.0, 1.0]])
            .unwrap();
        assert!((m.det() - 7.0).abs() < 1e-12);
        let u = m.normalize_unimodular().unwrap();
        assert!(u.check_unimodular(1e-12).is_ok());
        assert!(Matrix::<f64>::diag(&[-1.0, 1.0]).normalize_unimodular().is_err());
    }

    #[test]
    fn pull_back_matches_row_times_matrix() {
        let m = Matrix::<f64>::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let a = Covector::from_f64(&[1.0, -1.0]);
        assert_eq!(m.pull_back(&a).0, vec![-2.0, -2.0]);
        let v = Vector::from_f64(&[1.0, 1.0]);
        assert_eq!(m.pull_back(&a).pair(&v), a.pair(&m.apply(&v)));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Matrix::<f64>::from_row_major(2, vec![1.0; 3]).is_err());
        assert!(Matrix::<f64>::from_row_major(17, vec![0.0; 289]).is_err());
        assert!(Matrix::<f64>::from_row_major(1, vec![f64::NAN]).is_err());
    }
}
