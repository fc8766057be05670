use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::period::{ConjClassRecord, Periodic};
use super::quad::KahanSum;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaEval {
    pub s: Complex64,
    pub value: Complex64,
    pub log_value: Complex64,
    pub truncation: f64,
    pub term_count: usize,
    /// Σ |e^{−sλ₁}| over the included factors.
    pub abs_sum: f64,
}

/// Divergence guard for partial Euler products.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaGuard {
    /// Known abscissa (ĥ or the pressure); Re(s) must exceed it.
    pub abscissa: Option<f64>,
    /// Bound on Σ |e^{−sλ₁}|.
    pub bound: f64,
}

impl Default for ZetaGuard {
    fn default() -> Self {
        Self { abscissa: None, bound: 1e6 }
    }
}

/// log(1 − z) accurate for small |z|.
fn log_one_minus(z: Complex64) -> Complex64 {
    let w = Complex64::new(1.0 - z.re, -z.im);
    let re = 0.5 * (-2.0 * z.re + z.norm_sqr()).ln_1p();
    Complex64::new(re, w.im.atan2(w.re))
}

const CHUNK: usize = 4096;

fn euler_product(s: Complex64, terms: &[(f64, f64)], truncation: f64, guard: &ZetaGuard) -> Result<ZetaEval> {
    if let Some(a) = guard.abscissa {
        if !(s.re > a) {
            return Err(Error::AbscissaViolation { re: s.re, reason: format!("Re(s) must exceed {a:.6}") });
        }
    }
    let included = terms;
    let abs_sum: f64 = included.iter().map(|&(l, u)| (-l * (s.re - u)).exp()).sum();
    if !(abs_sum <= guard.bound) {
        return Err(Error::AbscissaViolation {
            re: s.re,
            reason: format!("Σ|e^(-sλ)| = {abs_sum:e} exceeds {:e}", guard.bound),
        });
    }
    let parts: Vec<KahanSum> = included
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut k = KahanSum::default();
            for &(l, u) in chunk {
                let z = (-(s - u) * l).exp();
                k.add(-log_one_minus(z));
            }
            k
        })
        .collect();
    let mut total = KahanSum::default();
    for p in &parts {
        total.merge(p);
    }
    let log_value = total.value();
    Ok(ZetaEval { s, value: log_value.exp(), log_value, truncation, term_count: included.len(), abs_sum })
}

/// Euler factors sorted by period, reusable across many evaluation points.
#[derive(Clone, Debug, Default)]
pub struct ZetaTerms {
    /// (λ₁, U_[γ]) pairs in ascending λ₁.
    terms: Vec<(f64, f64)>,
}

impl ZetaTerms {
    pub fn plain<P: Periodic>(classes: &[P]) -> Self {
        Self::from_pairs(classes.iter().map(|c| (c.period(), 0.0)).collect())
    }

    pub fn weighted<T: Real>(classes: &[ConjClassRecord<T>]) -> Result<Self> {
        let mut terms = Vec::with_capacity(classes.len());
        for c in classes {
            let u = c.potential_avg.ok_or_else(|| Error::InvalidInput("class without potential average".into()))?;
            terms.push((c.period.f64(), u.f64()));
        }
        Ok(Self::from_pairs(terms))
    }

    fn from_pairs(mut terms: Vec<(f64, f64)>) -> Self {
        terms.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        Self { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, s: Complex64, t: f64, guard: &ZetaGuard) -> Result<ZetaEval> {
        let n = self.terms.partition_point(|p| p.0 <= t);
        euler_product(s, &self.terms[..n], t, guard)
    }
}

/// Π_{λ₁ ≤ T} (1 − e^{−sλ₁})^{−1} over primitive classes.
pub fn zeta_partial<P: Periodic>(s: Complex64, classes: &[P], t: f64, guard: &ZetaGuard) -> Result<ZetaEval> {
    ZetaTerms::plain(classes).eval(s, t, guard)
}

/// Π_{λ₁ ≤ T} (1 − exp[−λ₁(s − U_[γ])])^{−1}.
pub fn zeta_weighted<T: Real>(
    s: Complex64,
    classes: &[ConjClassRecord<T>],
    t: f64,
    guard: &ZetaGuard,
) -> Result<ZetaEval> {
    ZetaTerms::weighted(classes)?.eval(s, t, guard)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_product_is_one() {
        let z = zeta_partial::<f64>(Complex64::new(1.0, 2.0), &[], 10.0, &ZetaGuard::default()).unwrap();
        assert_eq!(z.value, Complex64::new(1.0, 0.0));
        assert_eq!(z.term_count, 0);
    }

    #[test]
    fn single_factor() {
        let z = zeta_partial(Complex64::new(2.0, 0.0), &[2f64.ln()], 1.0, &ZetaGuard::default()).unwrap();
        assert!((z.value - Complex64::new(4.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn guard_trips() {
        let p = vec![0.1; 100];
        let g = ZetaGuard { abscissa: None, bound: 10.0 };
        assert!(matches!(
            zeta_partial(Complex64::new(0.01, 0.0), &p, 1.0, &g),
            Err(Error::AbscissaViolation { .. })
        ));
        let g = ZetaGuard { abscissa: Some(0.5), bound: 1e6 };
        assert!(matches!(
            zeta_partial(Complex64::new(0.4, 3.0), &p, 1.0, &g),
            Err(Error::AbscissaViolation { .. })
        ));
    }
}
