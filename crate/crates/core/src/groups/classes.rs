use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generators::{GeneratorSet, GroupElement, Presentation};
use super::word::{Letter, Word};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, top_log_modulus, Matrix};
use crate::scalar::Real;

/// A primitive conjugacy class: its least-rotation representative word and
/// the period λ₁ of that representative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassSeed<T> {
    pub word: Word,
    pub period: T,
    /// False when primitivity could only be guessed (fingerprint mode).
    pub certified: bool,
}

/// One representative per primitive conjugacy class of cyclic length ≤ r in
/// a free group: Lyndon words (aperiodic least rotations) that are
/// cyclically reduced, generated by prenecklace extension.
pub fn primitive_conj_classes<T: Real>(
    g: &GeneratorSet<T>,
    r: usize,
    cap: usize,
) -> Result<Vec<ClassSeed<T>>> {
    if g.presentation() != Presentation::Free {
        return Err(Error::UnsupportedPresentation);
    }
    if g.rank() == 0 || r == 0 {
        return Ok(Vec::new());
    }
    let letters = g.letters();
    let parts: Vec<Result<Vec<ClassSeed<T>>>> = letters
        .par_iter()
        .map(|&first| {
            let mut out = Vec::new();
            let mut word = vec![first];
            let m = g.letter_matrix(first).clone();
            necklace_dfs(g, &mut word, 1, m, r, &mut out, cap)?;
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?);
        if all.len() > cap {
            return Err(Error::BudgetExceeded { cap });
        }
    }
    all.sort_by(|a, b| (a.word.len(), &a.word).cmp(&(b.word.len(), &b.word)));
    Ok(all)
}

fn necklace_dfs<T: Real>(
    g: &GeneratorSet<T>,
    word: &mut Word,
    p: usize,
    m: Matrix<T>,
    r: usize,
    out: &mut Vec<ClassSeed<T>>,
    cap: usize,
) -> Result<()> {
    let n = word.len();
    if p == n && word[n - 1] != word[0].inverse() {
        out.push(ClassSeed { word: word.clone(), period: top_log_modulus(&m)?, certified: true });
        if out.len() > cap {
            return Err(Error::BudgetExceeded { cap });
        }
    }
    if n == r {
        return Ok(());
    }
    let floor = word[n - p];
    let last = word[n - 1];
    for c in floor.0..(2 * g.rank()) as u8 {
        let l = Letter(c);
        if l == last.inverse() {
            continue;
        }
        let p2 = if l == floor { p } else { n + 1 };
        word.push(l);
        let m2 = m.mul_mat(g.letter_matrix(l));
        necklace_dfs(g, word, p2, m2, r, out, cap)?;
        word.pop();
    }
    Ok(())
}

/// Heuristic class list for presentations without a word-problem solution:
/// ball elements deduplicated by their λ-spectrum rounded to `resolution`,
/// dropping spectra that are integer multiples of a shorter one. Distinct
/// classes with equal spectra collapse, so counts are lower bounds.
pub fn fingerprint_conj_classes<T: Real>(
    elements: &[GroupElement<T>],
    resolution: f64,
) -> Result<Vec<ClassSeed<T>>> {
    let mut seen: Vec<(Vec<i64>, Vec<f64>)> = Vec::new();
    let mut out = Vec::new();
    for e in elements {
        if e.is_identity_word() {
            continue;
        }
        let spec: Vec<f64> = spectrum_fingerprint(e.matrix())?;
        if spec[0] <= resolution {
            continue;
        }
        let key: Vec<i64> = spec.iter().map(|x| (x / resolution).round() as i64).collect();
        if seen.iter().any(|(k, _)| *k == key) {
            continue;
        }
        let is_power = seen.iter().any(|(_, base)| {
            let ratio = spec[0] / base[0];
            let k = ratio.round();
            k >= 2.0
                && (ratio - k).abs() < 1e-6
                && base.iter().zip(&spec).all(|(b, s)| (k * b - s).abs() <= 10.0 * resolution * k)
        });
        seen.push((key, spec.clone()));
        if is_power {
            continue;
        }
        out.push(ClassSeed { word: e.word().to_vec(), period: T::lit(spec[0]), certified: false });
    }
    Ok(out)
}

fn spectrum_fingerprint<T: Real>(m: &Matrix<T>) -> Result<Vec<f64>> {
    let mut l: Vec<f64> = eigenvalues(m)?.iter().map(|z| z.norm().ln().f64()).collect();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::word::is_proper_power;

    fn free(k: usize) -> GeneratorSet<f64> {
        let mats = (0..k)
            .map(|i| {
                let (s, c) = (0.4 + i as f64).sin_cos();
                let r = Matrix::from_rows(&[&[c, -s], &[s, c]]).unwrap();
                let d = Matrix::diag(&[3.0, 1.0 / 3.0]);
                r.mul_mat(&d).mul_mat(&r.transpose())
            })
            .collect();
        GeneratorSet::from_matrices(mats, Presentation::Free).unwrap()
    }

    #[test]
    fn short_class_counts() {
        let g = free(2);
        let cls = primitive_conj_classes(&g, 6, 1_000_000).unwrap();
        let mut per = [0usize; 7];
        for c in &cls {
            per[c.word.len()] += 1;
            assert!(!is_proper_power(&c.word));
        }
        assert_eq!(&per[1..], &[4, 4, 8, 18, 48, 116]);
    }

    #[test]
    fn unknown_presentation_rejected() {
        let a = Matrix::<f64>::diag(&[2.0, 0.5]);
        let g = GeneratorSet::from_matrices(vec![a], Presentation::Unknown).unwrap();
        assert_eq!(primitive_conj_classes(&g, 3, 100), Err(Error::UnsupportedPresentation));
    }

    #[test]
    fn fingerprint_drops_powers_and_conjugates() {
        let g = free(2);
        let ball = crate::groups::enumerate_ball(&g, 3, 10_000).unwrap();
        let fp = fingerprint_conj_classes(&ball, 1e-6).unwrap();
        let exact = primitive_conj_classes(&g, 3, 10_000).unwrap();
        assert!(fp.iter().all(|c| !c.certified && !is_proper_power(&c.word)));
        // γ and γ⁻¹ share a spectrum in SL(2), as do the conjugate generators here.
        assert!(!fp.is_empty() && fp.len() < exact.len());
    }
}
