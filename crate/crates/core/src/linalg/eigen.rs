use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::dense::{dot, norm2, Covector, Matrix, Vector};
use super::projective::{ProjHyperplane, ProjPoint};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Gaps at or below this are treated as a non-simple top eigenvalue.
pub const NEAR_PARABOLIC_GAP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Residual bound ‖Mv − μv‖ ≤ residual·|μ|·‖v‖ for accepted top vectors.
    pub residual: f64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        EigenConfig { tol: 1e-10, max_iter: 10_000, residual: 1e-8 }
    }
}

/// Log-modulus spectrum plus dominant eigen-directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenData<T> {
    /// Non-increasing logs of eigenvalue moduli.
    pub lambda: Vec<T>,
    /// Signed dominant eigenvalue when it is real.
    pub top_value: Option<T>,
    pub top_right: Option<ProjPoint<T>>,
    /// Left eigenvector for the dominant eigenvalue.
    pub top_left: Option<ProjHyperplane<T>>,
    pub simple_top: bool,
    pub near_parabolic: bool,
}

impl<T: Real> EigenData<T> {
    pub fn gap(&self) -> T {
        if self.lambda.len() < 2 {
            return T::zero();
        }
        (self.lambda[0] - self.lambda[1]).max(T::zero())
    }

    pub fn lambda1(&self) -> T {
        self.lambda[0]
    }

    pub fn lambda_last(&self) -> T {
        *self.lambda.last().expect("nonempty spectrum")
    }
}

/// Eigenvalues of a general real matrix: balancing, Hessenberg reduction,
/// shifted QR.
pub fn eigenvalues<T: Real>(m: &Matrix<T>) -> Result<Vec<Complex<T>>> {
    let n = m.dim();
    let mut a: Vec<Vec<T>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    balance(&mut a);
    hessenberg(&mut a);
    hqr(&mut a)
}

fn balance<T: Real>(a: &mut [Vec<T>]) {
    let n = a.len();
    let radix = T::lit(2.0);
    let sqrdx = radix * radix;
    let mut done = false;
    let mut sweeps = 0;
    while !done && sweeps < 100 {
        done = true;
        sweeps += 1;
        for i in 0..n {
            let mut r = T::zero();
            let mut c = T::zero();
            for j in 0..n {
                if j != i {
                    c = c + a[j][i].abs();
                    r = r + a[i][j].abs();
                }
            }
            if c != T::zero() && r != T::zero() {
                let mut g = r / radix;
                let mut f = T::one();
                let s = c + r;
                while c < g {
                    f = f * radix;
                    c = c * sqrdx;
                }
                g = r * radix;
                while c > g {
                    f = f / radix;
                    c = c / sqrdx;
                }
                if (c + r) / f < T::lit(0.95) * s {
                    done = false;
                    let g = T::one() / f;
                    for j in 0..n {
                        a[i][j] = a[i][j] * g;
                    }
                    for row in a.iter_mut() {
                        row[i] = row[i] * f;
                    }
                }
            }
        }
    }
}

/// Reduction to upper Hessenberg form by stabilized elementary similarity.
fn hessenberg<T: Real>(a: &mut [Vec<T>]) {
    let n = a.len();
    for m in 1..n.saturating_sub(1) {
        let mut x = T::zero();
        let mut i = m;
        for j in m..n {
            if a[j][m - 1].abs() > x.abs() {
                x = a[j][m - 1];
                i = j;
            }
        }
        if i != m {
            for j in (m - 1)..n {
                let t = a[i][j];
                a[i][j] = a[m][j];
                a[m][j] = t;
            }
            for row in a.iter_mut() {
                row.swap(i, m);
            }
        }
        if x != T::zero() {
            for i in (m + 1)..n {
                let mut y = a[i][m - 1];
                if y != T::zero() {
                    y = y / x;
                    a[i][m - 1] = y;
                    for j in m..n {
                        a[i][j] = a[i][j] - y * a[m][j];
                    }
                    for row in a.iter_mut() {
                        row[m] = row[m] + y * row[i];
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..i.saturating_sub(1) {
            a[i][j] = T::zero();
        }
    }
}

fn sign<T: Real>(a: T, b: T) -> T {
    if b >= T::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix.
fn hqr<T: Real>(a: &mut [Vec<T>]) -> Result<Vec<Complex<T>>> {
    let n = a.len() as isize;
    let mut wr = vec![Complex::new(T::zero(), T::zero()); n as usize];
    let eps = T::epsilon();
    let mut anorm = T::zero();
    for i in 0..n as usize {
        for j in i.saturating_sub(1)..n as usize {
            anorm = anorm + a[i][j].abs();
        }
    }
    let mut nn = n - 1;
    let mut t = T::zero();
    let at = |a: &[Vec<T>], i: isize, j: isize| a[i as usize][j as usize];
    while nn >= 0 {
        let mut its = 0;
        let mut l;
        loop {
            l = nn;
            while l > 0 {
                let mut s = at(a, l - 1, l - 1).abs() + at(a, l, l).abs();
                if s == T::zero() {
                    s = anorm;
                }
                if at(a, l, l - 1).abs() <= eps * s {
                    a[l as usize][(l - 1) as usize] = T::zero();
                    break;
                }
                l -= 1;
            }
            let mut x = at(a, nn, nn);
            if l == nn {
                wr[nn as usize] = Complex::new(x + t, T::zero());
                nn -= 1;
            } else {
                let mut y = at(a, nn - 1, nn - 1);
                let mut w = at(a, nn, nn - 1) * at(a, nn - 1, nn);
                if l == nn - 1 {
                    let p = T::lit(0.5) * (y - x);
                    let q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x = x + t;
                    if q >= T::zero() {
                        z = p + sign(z, p);
                        wr[(nn - 1) as usize] = Complex::new(x + z, T::zero());
                        wr[nn as usize] = Complex::new(x + z, T::zero());
                        if z != T::zero() {
                            wr[nn as usize] = Complex::new(x - w / z, T::zero());
                        }
                    } else {
                        wr[nn as usize] = Complex::new(x + p, -z);
                        wr[(nn - 1) as usize] = Complex::new(x + p, z);
                    }
                    nn -= 2;
                } else {
                    if its == 60 {
                        return Err(Error::NonConvergence { iterations: its });
                    }
                    if its == 10 || its == 20 || its == 40 {
                        t = t + x;
                        for i in 0..=nn as usize {
                            a[i][i] = a[i][i] - x;
                        }
                        let s = at(a, nn, nn - 1).abs() + at(a, nn - 1, nn - 2).abs();
                        x = T::lit(0.75) * s;
                        y = x;
                        w = T::lit(-0.4375) * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    let (mut p, mut q, mut r);
                    loop {
                        let z = at(a, m, m);
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / at(a, m + 1, m) + at(a, m, m + 1);
                        q = at(a, m + 1, m + 1) - z - r - s;
                        r = at(a, m + 2, m + 1);
                        let s = p.abs() + q.abs() + r.abs();
                        p = p / s;
                        q = q / s;
                        r = r / s;
                        if m == l {
                            break;
                        }
                        let u = at(a, m, m - 1).abs() * (q.abs() + r.abs());
                        let v = p.abs()
                            * (at(a, m - 1, m - 1).abs() + z.abs() + at(a, m + 1, m + 1).abs());
                        if u <= eps * v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m..nn - 1 {
                        a[(i + 2) as usize][i as usize] = T::zero();
                        if i != m {
                            a[(i + 2) as usize][(i - 1) as usize] = T::zero();
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = at(a, k, k - 1);
                            q = at(a, k + 1, k - 1);
                            r = T::zero();
                            if k + 1 != nn {
                                r = at(a, k + 2, k - 1);
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != T::zero() {
                                p = p / x;
                                q = q / x;
                                r = r / x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != T::zero() {
                            if k == m {
                                if l != m {
                                    a[k as usize][(k - 1) as usize] = -at(a, k, k - 1);
                                }
                            } else {
                                a[k as usize][(k - 1) as usize] = -s * x;
                            }
                            p = p + s;
                            x = p / s;
                            y = q / s;
                            let z = r / s;
                            q = q / p;
                            r = r / p;
                            for j in k..=nn {
                                let (ku, ju) = (k as usize, j as usize);
                                let mut pp = a[ku][ju] + q * a[ku + 1][ju];
                                if k + 1 != nn {
                                    pp = pp + r * a[ku + 2][ju];
                                    a[ku + 2][ju] = a[ku + 2][ju] - pp * z;
                                }
                                a[ku + 1][ju] = a[ku + 1][ju] - pp * y;
                                a[ku][ju] = a[ku][ju] - pp * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                let (iu, ku) = (i as usize, k as usize);
                                let mut pp = x * a[iu][ku] + y * a[iu][ku + 1];
                                if k + 1 != nn {
                                    pp = pp + z * a[iu][ku + 2];
                                    a[iu][ku + 2] = a[iu][ku + 2] - pp * r;
                                }
                                a[iu][ku + 1] = a[iu][ku + 1] - pp * q;
                                a[iu][ku] = a[iu][ku] - pp;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if !(l + 1 < nn) {
                break;
            }
        }
    }
    Ok(wr)
}

fn sorted_log_moduli<T: Real>(vals: &[Complex<T>]) -> Vec<T> {
    let mut l: Vec<T> = vals.iter().map(|z| z.norm().ln()).collect();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    l
}

/// Dominant eigenvalue (by modulus) from the QR spectrum.
fn dominant<T: Real>(vals: &[Complex<T>]) -> Complex<T> {
    let mut best = vals[0];
    for &z in &vals[1..] {
        if z.norm() > best.norm() {
            best = z;
        }
    }
    best
}

/// log of the spectral radius, without eigenvectors.
pub fn top_log_modulus<T: Real>(m: &Matrix<T>) -> Result<T> {
    let vals = eigenvalues(m)?;
    Ok(dominant(&vals).norm().ln())
}

pub fn eigen_decompose<T: Real>(m: &Matrix<T>) -> Result<EigenData<T>> {
    eigen_decompose_cfg(m, None, &EigenConfig::default())
}

/// Uses the inverse for the contracting half of the spectrum, which a QR
/// sweep on M alone resolves only to absolute accuracy ε‖M‖.
pub fn eigen_decompose_with_inverse<T: Real>(
    m: &Matrix<T>,
    m_inv: &Matrix<T>,
) -> Result<EigenData<T>> {
    eigen_decompose_cfg(m, Some(m_inv), &EigenConfig::default())
}

pub fn eigen_decompose_cfg<T: Real>(
    m: &Matrix<T>,
    m_inv: Option<&Matrix<T>>,
    cfg: &EigenConfig,
) -> Result<EigenData<T>> {
    let d = m.dim();
    let vals = eigenvalues(m)?;
    let mut lambda = sorted_log_moduli(&vals);
    if let Some(mi) = m_inv {
        let inv = sorted_log_moduli(&eigenvalues(mi)?);
        for i in 0..d {
            if lambda[i] < T::zero() {
                lambda[i] = -inv[d - 1 - i];
            }
        }
        lambda.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    }
    let top = dominant(&vals);
    let gap = if d >= 2 { lambda[0] - lambda[1] } else { T::infinity() };
    let real_top = top.im == T::zero();
    let simple_top = real_top && gap > T::lit(NEAR_PARABOLIC_GAP);
    let mut data = EigenData {
        lambda,
        top_value: if real_top { Some(top.re) } else { None },
        top_right: None,
        top_left: None,
        simple_top,
        near_parabolic: gap <= T::lit(NEAR_PARABOLIC_GAP),
    };
    if simple_top {
        let (r, _) = top_vector(m, top.re, cfg)?;
        let (l, _) = top_vector(&m.transpose(), top.re, cfg)?;
        data.top_right = Some(ProjPoint::new(&r)?);
        data.top_left = Some(ProjHyperplane::new(&Covector(l.0))?);
    }
    Ok(data)
}

pub fn lambda_gap<T: Real>(m: &Matrix<T>) -> Result<T> {
    Ok(eigen_decompose(m)?.gap())
}

fn start_vectors<T: Real>(d: usize) -> Vec<Vector<T>> {
    let mut out = vec![Vector((0..d).map(|i| T::one() / T::lit((i as f64 + 1.0).sqrt())).collect())];
    for i in 0..d {
        out.push(Vector::basis(d, i));
    }
    out
}

/// Power iteration for the eigenvector of a real simple dominant eigenvalue
/// `mu` (known from the QR sweep), with shifted inverse iteration as a
/// fallback when the gap is too small for the iteration budget.
pub fn top_vector<T: Real>(m: &Matrix<T>, mu: T, cfg: &EigenConfig) -> Result<(Vector<T>, T)> {
    let d = m.dim();
    let tol = T::lit(cfg.tol).max(T::epsilon() * T::lit(64.0));
    let res_tol = T::lit(cfg.residual).max(T::epsilon() * T::lit(1024.0));
    for start in start_vectors::<T>(d) {
        if let Some((v, est)) = power_iteration(m, start, tol, cfg.max_iter) {
            if (est - mu).abs() <= T::lit(1e-6) * mu.abs() && residual(m, &v, mu) <= res_tol * mu.abs() {
                return Ok((v, mu));
            }
        }
    }
    if let Some(v) = inverse_iteration(m, mu) {
        if residual(m, &v, mu) <= res_tol * mu.abs() {
            return Ok((v, mu));
        }
    }
    Err(Error::NonConvergence { iterations: cfg.max_iter })
}

fn normalized<T: Real>(v: Vector<T>) -> Option<Vector<T>> {
    let n = v.norm();
    if n == T::zero() || !n.is_finite() {
        None
    } else {
        Some(v.scale(T::one() / n))
    }
}

fn power_iteration<T: Real>(
    m: &Matrix<T>,
    start: Vector<T>,
    tol: T,
    max_iter: usize,
) -> Option<(Vector<T>, T)> {
    let mut v = normalized(m.apply(&start))?;
    let mut converged: Option<T> = None;
    for _ in 0..max_iter {
        let w = m.apply(&v);
        let est = dot(&v.0, &w.0);
        let mut w = normalized(w)?;
        if dot(&w.0, &v.0) < T::zero() {
            w = w.scale(-T::one());
        }
        let diff = norm2(&(&w - &v).0);
        // past tolerance, keep polishing while the step still shrinks
        match converged {
            Some(prev) if diff >= prev || diff <= T::epsilon() => return Some((w, est)),
            Some(_) => converged = Some(diff),
            None if diff <= tol => converged = Some(diff),
            None => {}
        }
        v = w;
    }
    converged.map(|_| (v.clone(), dot(&v.0, &m.apply(&v).0)))
}

fn inverse_iteration<T: Real>(m: &Matrix<T>, mu: T) -> Option<Vector<T>> {
    let d = m.dim();
    let shift = mu * (T::one() + T::lit(1e-10));
    let lu = m.sub(&Matrix::identity(d).scale(shift)).lu();
    if lu.is_singular() {
        return None;
    }
    let mut v = normalized(Vector((0..d).map(|i| T::one() / T::lit(i as f64 + 1.0)).collect()))?;
    for _ in 0..6 {
        v = normalized(lu.solve(&v))?;
    }
    Some(v)
}

fn residual<T: Real>(m: &Matrix<T>, v: &Vector<T>, mu: T) -> T {
    let mv = m.apply(v);
    norm2(&(&mv - &v.scale(mu)).0)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi, non-increasing.
pub fn symmetric_eigenvalues<T: Real>(m: &Matrix<T>) -> Vec<T> {
    let n = m.dim();
    let mut a: Vec<Vec<T>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    for i in 0..n {
        for j in 0..i {
            let s = T::lit(0.5) * (a[i][j] + a[j][i]);
            a[i][j] = s;
            a[j][i] = s;
        }
    }
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..n {
            diag = diag + a[i][i] * a[i][i];
            for j in 0..n {
                if i != j {
                    off = off + a[i][j] * a[i][j];
                }
            }
        }
        if off <= T::epsilon() * T::epsilon() * diag || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::lit(2.0) * a[p][q]);
                let t = sign(T::one(), theta) / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<T> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// (positive, negative, zero) eigenvalue counts of a symmetric matrix; an
/// eigenvalue counts as zero when |μ| ≤ rel_tol·max|μ|.
pub fn signature<T: Real>(m: &Matrix<T>, rel_tol: T) -> (usize, usize, usize) {
    let ev = symmetric_eigenvalues(m);
    let scale = ev.iter().fold(T::zero(), |s, x| s.max(x.abs()));
    let floor = rel_tol * scale;
    let mut out = (0, 0, 0);
    for x in ev {
        if x.abs() <= floor {
            out.2 += 1;
        } else if x > T::zero() {
            out.0 += 1;
        } else {
            out.1 += 1;
        }
    }
    out
}

/// Singular values of the matrix whose rows are `rows`, non-increasing.
pub fn singular_values<T: Real>(rows: &[Vector<T>]) -> Vec<T> {
    if rows.is_empty() {
        return Vec::new();
    }
    let d = rows[0].dim();
    let mut g = Matrix::zeros(d);
    for r in rows {
        for i in 0..d {
            for j in 0..d {
                g[(i, j)] = g[(i, j)] + r[i] * r[j];
            }
        }
    }
    symmetric_eigenvalues(&g).into_iter().map(|x: T| x.max(T::zero()).sqrt()).collect()
}
