use crate::error::{Error, Result};
use crate::groups::GeneratorSet;
use crate::linalg::Matrix;
use crate::scalar::Real;

/// Sym^{d−1} of a 2×2 matrix on the monomials e₁^{d−1−i} e₂^i.
pub fn symmetric_power_matrix<T: Real>(g: &Matrix<T>, d: usize) -> Result<Matrix<T>> {
    if g.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: g.dim() });
    }
    if d < 1 {
        return Err(Error::InvalidInput("symmetric power needs d ≥ 1".into()));
    }
    let n = d - 1;
    let (a, b, c, dd) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let mut out = Matrix::zeros(d);
    for i in 0..d {
        // (a e1 + c e2)^{n−i} (b e1 + d e2)^i in powers of e2
        let mut poly = vec![T::one()];
        for _ in 0..n - i {
            poly = poly_mul(&poly, &[a, c]);
        }
        for _ in 0..i {
            poly = poly_mul(&poly, &[b, dd]);
        }
        for (j, &coef) in poly.iter().enumerate() {
            out[(j, i)] = coef;
        }
    }
    Ok(out)
}

fn poly_mul<T: Real>(p: &[T], q: &[T]) -> Vec<T> {
    let mut r = vec![T::zero(); p.len() + q.len() - 1];
    for (i, &x) in p.iter().enumerate() {
        for (j, &y) in q.iter().enumerate() {
            r[i + j] = r[i + j] + x * y;
        }
    }
    r
}

/// Image of an SL(2) generator set under Sym^{d−1}.
pub fn symmetric_power<T: Real>(g: &GeneratorSet<T>, d: usize) -> Result<GeneratorSet<T>> {
    if d < 2 {
        return Err(Error::InvalidInput("symmetric power needs d ≥ 2".into()));
    }
    g.map_matrices(|m| symmetric_power_matrix(m, d).expect("2x2 input"))
}

/// Ad(g): X ↦ gXg⁻¹ on sl(d) in the basis E_ij (i ≠ j, row-major order)
/// followed by H_k = E_kk − E_{k+1,k+1}.
pub fn adjoint_rep<T: Real>(g: &Matrix<T>) -> Result<Matrix<T>> {
    let d = g.dim();
    let gi = g.inverse()?;
    let basis = sl_basis::<T>(d);
    let n = basis.len();
    let mut out = Matrix::zeros(n);
    for (col, x) in basis.iter().enumerate() {
        let y = g.mul_mat(x).mul_mat(&gi);
        for (row, c) in sl_coordinates(&y).into_iter().enumerate() {
            out[(row, col)] = c;
        }
    }
    Ok(out)
}

/// Basis of traceless d×d matrices in the order used by [`adjoint_rep`].
pub fn sl_basis<T: Real>(d: usize) -> Vec<Matrix<T>> {
    let mut out = Vec::with_capacity(d * d - 1);
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let mut m = Matrix::zeros(d);
                m[(i, j)] = T::one();
                out.push(m);
            }
        }
    }
    for k in 0..d - 1 {
        let mut m = Matrix::zeros(d);
        m[(k, k)] = T::one();
        m[(k + 1, k + 1)] = -T::one();
        out.push(m);
    }
    out
}

/// Coordinates of a traceless matrix in [`sl_basis`].
pub fn sl_coordinates<T: Real>(y: &Matrix<T>) -> Vec<T> {
    let d = y.dim();
    let mut out = Vec::with_capacity(d * d - 1);
    for i in 0..d {
        for j in 0..d {
            if i != j {
                out.push(y[(i, j)]);
            }
        }
    }
    let mut c = T::zero();
    for k in 0..d - 1 {
        c = c + y[(k, k)];
        out.push(c);
    }
    out
}
