use serde::{Deserialize, Serialize};

use super::generators::{GroupElement, Presentation};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Least-squares fit gap ≈ c·|γ| − c′.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapFit {
    pub c: f64,
    pub c_prime: f64,
    pub r2: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    pub samples: usize,
}

/// (slope, intercept, r²) of an ordinary least-squares line.
pub fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return (0.0, my, 0.0);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).min(1.0) };
    (slope, intercept, r2)
}

/// Fits λ₁ − λ₂ against the stable-length proxy: cyclically reduced length
/// for free presentations, plain word length otherwise.
pub fn gap_fit<T: Real>(elements: &[GroupElement<T>], presentation: Presentation) -> Result<GapFit> {
    let mut pts = Vec::new();
    let mut proximal = 0;
    for e in elements {
        if e.is_identity_word() && e.matrix().sub(&crate::linalg::Matrix::identity(e.matrix().dim())).max_abs() == T::zero() {
            continue;
        }
        let len = match presentation {
            Presentation::Free => e.cyclic_len(),
            Presentation::Unknown => e.word_len(),
        };
        let Ok(eig) = e.eigen() else { continue };
        if eig.simple_top {
            proximal += 1;
        }
        pts.push((len as f64, eig.gap().f64()));
    }
    if proximal < 10 {
        return Err(Error::InsufficientData(format!("{proximal} proximal elements, need 10")));
    }
    let (c, b, r2) = linear_fit(&pts);
    let residual =
        (pts.iter().map(|&(x, y)| (y - (c * x + b)).powi(2)).sum::<f64>() / pts.len() as f64).sqrt();
    Ok(GapFit { c, c_prime: -b, r2, residual, samples: pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GeneratorSet, Letter};
    use crate::linalg::Matrix;

    #[test]
    fn cyclic_powers_fit_exactly() {
        let g = GeneratorSet::from_matrices(vec![Matrix::<f64>::diag(&[4.0, 0.25])], Presentation::Free).unwrap();
        let els: Vec<_> = (1..=10).map(|n| g.element(&vec![Letter(0); n])).collect();
        let fit = gap_fit(&els, Presentation::Free).unwrap();
        assert!((fit.c - 2.0 * 4f64.ln()).abs() < 1e-9);
        assert!(fit.c_prime.abs() < 1e-8);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_only_is_insufficient() {
        let g = GeneratorSet::from_matrices(vec![Matrix::<f64>::diag(&[4.0, 0.25])], Presentation::Free).unwrap();
        let els = vec![g.identity(); 20];
        assert!(matches!(gap_fit(&els, Presentation::Free), Err(Error::InsufficientData(_))));
    }
}
