use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::word::{cyclic_reduce, format_word, Letter, Word};
use crate::error::{Error, Result};
use crate::flow::{act_with_inverse, FlowPoint};
use crate::linalg::{eigen_decompose_with_inverse, EigenData, Matrix};
use crate::scalar::Real;

/// Default cap on the number of enumerated elements.
pub const DEFAULT_ELEMENT_CAP: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Presentation {
    Free,
    Unknown,
}

/// Labelled generators with their inverses.
#[derive(Clone, Debug)]
pub struct GeneratorSet<T> {
    labels: Vec<String>,
    mats: Vec<Matrix<T>>,
    invs: Vec<Matrix<T>>,
    presentation: Presentation,
    dim: usize,
}

impl<T: Real> GeneratorSet<T> {
    /// Generators must be unimodular to 1e-10; inverses are computed.
    pub fn new(labels: Vec<String>, mats: Vec<Matrix<T>>, presentation: Presentation) -> Result<Self> {
        let invs = mats.iter().map(|m| m.inverse()).collect::<Result<Vec<_>>>()?;
        Self::with_inverses(labels, mats, invs, presentation)
    }

    pub fn with_inverses(
        labels: Vec<String>,
        mats: Vec<Matrix<T>>,
        invs: Vec<Matrix<T>>,
        presentation: Presentation,
    ) -> Result<Self> {
        if labels.len() != mats.len() || mats.len() != invs.len() {
            return Err(Error::InvalidInput("labels, matrices and inverses differ in count".into()));
        }
        if mats.len() > 127 {
            return Err(Error::InvalidInput("at most 127 generators".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l == "id" || l.contains(['.', '^', ' ']) {
                return Err(Error::InvalidInput(format!("bad generator label {l:?}")));
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidInput(format!("duplicate label {l:?}")));
            }
        }
        let dim = mats.first().map_or(0, |m| m.dim());
        for (m, mi) in mats.iter().zip(&invs) {
            if m.dim() != dim || mi.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
            }
            m.check_unimodular(T::lit(1e-10))?;
            let defect = m.mul_mat(mi).sub(&Matrix::identity(dim)).max_abs();
            if defect > T::lit(1e-10) {
                return Err(Error::InvalidInput(format!(
                    "inverse check failed ({:e})",
                    defect.f64()
                )));
            }
        }
        Ok(GeneratorSet { labels, mats, invs, presentation, dim })
    }

    /// Single-letter labels a, b, c, ...
    pub fn from_matrices(mats: Vec<Matrix<T>>, presentation: Presentation) -> Result<Self> {
        let labels = (0..mats.len()).map(default_label).collect();
        Self::new(labels, mats, presentation)
    }

    pub fn rank(&self) -> usize {
        self.mats.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    pub fn matrices(&self) -> &[Matrix<T>] {
        &self.mats
    }

    pub fn letter_matrix(&self, l: Letter) -> &Matrix<T> {
        if l.is_inverse() {
            &self.invs[l.index()]
        } else {
            &self.mats[l.index()]
        }
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..2 * self.rank()).map(|i| Letter(i as u8)).collect()
    }

    pub fn identity(&self) -> GroupElement<T> {
        GroupElement::new(Matrix::identity(self.dim), Matrix::identity(self.dim), Vec::new())
    }

    /// The element spelled by `word`, which is freely reduced first.
    pub fn element(&self, word: &[Letter]) -> GroupElement<T> {
        let word = super::word::reduce(word);
        let mut m = Matrix::identity(self.dim);
        let mut mi = Matrix::identity(self.dim);
        for &l in &word {
            m = m.mul_mat(self.letter_matrix(l));
            mi = self.letter_matrix(l.inverse()).mul_mat(&mi);
        }
        GroupElement::new(m, mi, word)
    }

    pub fn format(&self, w: &[Letter]) -> String {
        format_word(w, &self.labels)
    }

    /// Label-preserving map of every generator matrix.
    pub fn map_matrices(&self, f: impl Fn(&Matrix<T>) -> Matrix<T>) -> Result<Self> {
        let mats = self.mats.iter().map(&f).collect();
        let invs = self.invs.iter().map(&f).collect();
        Self::with_inverses(self.labels.clone(), mats, invs, self.presentation)
    }
}

pub(crate) fn default_label(i: usize) -> String {
    const ABC: &[u8] = b"abcdfghjklmnopqrstuvwxyz";
    if i < ABC.len() {
        (ABC[i] as char).to_string()
    } else {
        format!("g{i}")
    }
}

/// A group element with its reduced word and lazily computed spectrum.
#[derive(Clone, Debug)]
pub struct GroupElement<T> {
    matrix: Matrix<T>,
    inverse: Matrix<T>,
    word: Word,
    eigen: OnceLock<Result<EigenData<T>>>,
}

impl<T: Real> GroupElement<T> {
    pub fn new(matrix: Matrix<T>, inverse: Matrix<T>, word: Word) -> Self {
        GroupElement { matrix, inverse, word, eigen: OnceLock::new() }
    }

    /// An element known only by its matrix; the word is empty.
    pub fn from_matrix(matrix: Matrix<T>) -> Result<Self> {
        let inverse = matrix.inverse()?;
        Ok(Self::new(matrix, inverse, Vec::new()))
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Matrix<T> {
        &self.inverse
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn word_len(&self) -> usize {
        self.word.len()
    }

    /// Cyclically reduced word length, the stable-length proxy.
    pub fn cyclic_len(&self) -> usize {
        cyclic_reduce(&self.word).len()
    }

    pub fn is_identity_word(&self) -> bool {
        self.word.is_empty()
    }

    pub fn eigen(&self) -> Result<&EigenData<T>> {
        self.eigen
            .get_or_init(|| eigen_decompose_with_inverse(&self.matrix, &self.inverse))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn inverse(&self) -> GroupElement<T> {
        GroupElement::new(
            self.inverse.clone(),
            self.matrix.clone(),
            super::word::inverse_word(&self.word),
        )
    }

    /// Product self · other.
    pub fn mul(&self, other: &GroupElement<T>) -> GroupElement<T> {
        let mut w = self.word.clone();
        w.extend_from_slice(&other.word);
        GroupElement::new(
            self.matrix.mul_mat(&other.matrix),
            other.inverse.mul_mat(&self.inverse),
            super::word::reduce(&w),
        )
    }

    pub fn pow(&self, n: usize) -> GroupElement<T> {
        let d = self.matrix.dim();
        let mut acc = GroupElement::new(Matrix::identity(d), Matrix::identity(d), Vec::new());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn act(&self, x: &FlowPoint<T>) -> Result<FlowPoint<T>> {
        act_with_inverse(&self.matrix, &self.inverse, x)
    }

    /// λ₁ − λ₂.
    pub fn gap(&self) -> Result<T> {
        Ok(self.eigen()?.gap())
    }

    pub fn is_proximal(&self) -> bool {
        self.eigen().map(|e| e.simple_top).unwrap_or(false)
    }
}

/// Closed-form ball size of a free group: 1 + Σ 2k(2k−1)^{n−1}.
pub fn free_ball_size(k: usize, r: usize) -> usize {
    if k == 0 {
        return 1;
    }
    let mut total = 1usize;
    let mut sphere = 2 * k;
    for _ in 1..=r {
        total += sphere;
        sphere *= 2 * k - 1;
    }
    total
}

/// All freely reduced words of length ≤ r, in (length, word) order.
pub fn enumerate_ball<T: Real>(g: &GeneratorSet<T>, r: usize, cap: usize) -> Result<Vec<GroupElement<T>>> {
    let expected = free_ball_size(g.rank(), r);
    if expected > cap {
        return Err(Error::BudgetExceeded { cap });
    }
    let mut out = vec![g.identity()];
    if r == 0 || g.rank() == 0 {
        return Ok(out);
    }
    let per_letter: Vec<Vec<GroupElement<T>>> = g
        .letters()
        .par_iter()
        .map(|&first| {
            let mut acc = Vec::new();
            let m = g.letter_matrix(first).clone();
            let mi = g.letter_matrix(first.inverse()).clone();
            grow(g, vec![first], m, mi, r, &mut acc);
            acc
        })
        .collect();
    let mut rest: Vec<GroupElement<T>> = per_letter.into_iter().flatten().collect();
    rest.sort_by(|a, b| (a.word.len(), &a.word).cmp(&(b.word.len(), &b.word)));
    out.extend(rest);
    Ok(out)
}

fn grow<T: Real>(
    g: &GeneratorSet<T>,
    word: Word,
    m: Matrix<T>,
    mi: Matrix<T>,
    r: usize,
    acc: &mut Vec<GroupElement<T>>,
) {
    if word.len() < r {
        let last = *word.last().expect("nonempty");
        for l in g.letters() {
            if l == last.inverse() {
                continue;
            }
            let mut w = word.clone();
            w.push(l);
            let m2 = m.mul_mat(g.letter_matrix(l));
            let mi2 = g.letter_matrix(l.inverse()).mul_mat(&mi);
            grow(g, w, m2, mi2, r, acc);
        }
    }
    acc.push(GroupElement::new(m, mi, word));
}
