use num_complex::Complex64;

use crate::error::{Error, Result};

// 7-point Gauss / 15-point Kronrod pair.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod quadrature to relative tolerance `rel_tol`.
pub fn gauss_kronrod(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    const MAX_SPLITS: usize = 10_000;
    let (whole, err) = gk15(&f, a, b);
    let mut parts = vec![(a, b, whole, err)];
    for _ in 0..MAX_SPLITS {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= rel_tol * total.abs() || err == 0.0 {
            return Ok(total);
        }
        let (i, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = parts.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        let (l, le) = gk15(&f, lo, mid);
        let (r, re) = gk15(&f, mid, hi);
        parts.push((lo, mid, l, le));
        parts.push((mid, hi, r, re));
    }
    Err(Error::NonConvergence { iterations: MAX_SPLITS })
}

/// Composite Simpson on `n` (rounded up to even) panels, with the Richardson
/// error estimate (S_n − S_{n/2})/15.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> (f64, f64) {
    let n = (n.max(4) + 1) & !1;
    let h = (b - a) / n as f64;
    let vals: Vec<f64> = (0..=n).map(|i| f(a + h * i as f64)).collect();
    let rule = |step: usize| {
        let m = n / step;
        let hh = h * step as f64;
        let mut s = vals[0] + vals[n];
        for j in 1..m {
            s += vals[j * step] * if j % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * hh / 3.0
    };
    let fine = rule(1);
    let err = if n % 4 == 0 { (fine - rule(2)) / 15.0 } else { f64::NAN };
    (fine, err.abs())
}

/// Kahan-compensated complex accumulator; partial sums merge in a fixed order.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: Complex64,
    comp: Complex64,
}

impl KahanSum {
    pub fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn merge(&mut self, other: &KahanSum) {
        self.add(other.sum);
        self.add(-other.comp);
    }

    pub fn value(&self) -> Complex64 {
        self.sum - self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_polynomial_and_exp() {
        let v = gauss_kronrod(|x| x.powi(5), 0.0, 2.0, 1e-14).unwrap();
        assert!((v - 64.0 / 6.0).abs() < 1e-12);
        let v = gauss_kronrod(f64::exp, 0.0, 30.0, 1e-13).unwrap();
        assert!((v / (30f64.exp() - 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        let (v, e) = simpson(|x| x * x * x - x, 0.0, 3.0, 8);
        assert!((v - (81.0 / 4.0 - 4.5)).abs() < 1e-12);
        assert!(e < 1e-12);
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut k = KahanSum::default();
        k.add(Complex64::new(1.0, 0.0));
        for _ in 0..1000 {
            k.add(Complex64::new(1e-17, 0.0));
        }
        assert!((k.value().re - (1.0 + 1e-14)).abs() < 1e-16);
    }
}
