use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{format_word, GeneratorSet, Letter, Presentation};
use crate::linalg::Matrix;

/// Closed arc {θ : |θ − centre| ≤ half_width} of ℝP¹ = ℝ/πℤ (angles of lines).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub centre: f64,
    pub half_width: f64,
}

impl Arc {
    pub fn contains(&self, theta: f64) -> bool {
        line_angle_gap(theta, self.centre) <= self.half_width
    }
}

/// Distance between two line angles modulo π.
pub fn line_angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// Ping-pong certificate: arcs D(s) = {[x] : ‖s⁻¹x‖ ≤ ‖x‖}, one per letter,
/// pairwise disjoint. Each letter s maps the complement of D(s⁻¹) into D(s).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PingPongCertificate {
    pub labels: Vec<String>,
    pub arcs: Vec<Arc>,
    /// Smallest gap between two arcs (radians).
    pub min_gap: f64,
}

/// Arc where ‖s⁻¹x‖ ≤ ‖x‖ for s ∈ SL(2, ℝ).
pub fn isometric_arc(s: &Matrix<f64>) -> Result<Arc> {
    let si = s.inverse()?;
    let m = si.transpose().mul_mat(&si).sub(&Matrix::identity(2));
    let a = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let b = 0.5 * (m[(0, 0)] - m[(1, 1)]);
    let c = 0.5 * (m[(0, 1)] + m[(1, 0)]);
    let r = b.hypot(c);
    if !(r > a.abs()) {
        return Err(Error::DegenerateConfiguration("generator is not hyperbolic enough for an isometric arc".into()));
    }
    let phi = c.atan2(b);
    Ok(Arc { centre: (0.5 * (phi + PI)).rem_euclid(PI), half_width: 0.5 * (a / r).acos() })
}

/// Checks the ping-pong arcs of an SL(2) generator set.
pub fn certify_ping_pong(g: &GeneratorSet<f64>) -> Result<PingPongCertificate> {
    if g.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: g.dim() });
    }
    let letters = g.letters();
    let labels: Vec<String> = letters.iter().map(|&l| format!("D({})", format_word(&[l], g.labels()))).collect();
    let arcs = letters.iter().map(|&l| isometric_arc(g.letter_matrix(l))).collect::<Result<Vec<_>>>()?;
    let mut min_gap = FRAC_PI_2;
    for i in 0..arcs.len() {
        for j in i + 1..arcs.len() {
            let gap = line_angle_gap(arcs[i].centre, arcs[j].centre) - arcs[i].half_width - arcs[j].half_width;
            if gap <= 0.0 {
                return Err(Error::PingPongFailure { first: labels[i].clone(), second: labels[j].clone() });
            }
            min_gap = min_gap.min(gap);
        }
    }
    // spot-check the mapping property on the complement of D(s⁻¹)
    for (i, &l) in letters.iter().enumerate() {
        let inv = letters.iter().position(|&m| m == l.inverse()).unwrap_or(i);
        let s = g.letter_matrix(l);
        for k in 0..180 {
            let theta = PI * (k as f64 + 0.5) / 180.0;
            if arcs[inv].contains(theta) {
                continue;
            }
            let y = s.apply(&crate::linalg::Vector(vec![theta.cos(), theta.sin()]));
            let phi = y[1].atan2(y[0]).rem_euclid(PI);
            if !arcs[i].contains(phi) {
                return Err(Error::PingPongFailure { first: labels[inv].clone(), second: labels[i].clone() });
            }
        }
    }
    Ok(PingPongCertificate { labels, arcs, min_gap })
}

/// Hyperbolic generator R(θ)·diag(λ, 1/λ)·R(θ)ᵀ with axis angle θ.
pub fn hyperbolic(lambda: f64, theta: f64) -> Matrix<f64> {
    let (s, c) = theta.sin_cos();
    let r = Matrix::from_row_major(2, vec![c, -s, s, c]).expect("2x2");
    r.mul_mat(&Matrix::diag(&[lambda, 1.0 / lambda])).mul_mat(&r.transpose())
}

/// Parameters (λ, axis angle) per generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchottkyParams {
    pub generators: Vec<(f64, f64)>,
}

pub fn schottky_sl2(p: &SchottkyParams) -> Result<(GeneratorSet<f64>, PingPongCertificate)> {
    if p.generators.iter().any(|&(l, _)| !(l > 1.0) || !l.is_finite()) {
        return Err(Error::InvalidInput("eigenvalue parameters must exceed 1".into()));
    }
    let mats = p.generators.iter().map(|&(l, th)| hyperbolic(l, th)).collect();
    let g = GeneratorSet::from_matrices(mats, Presentation::Free)?;
    let cert = certify_ping_pong(&g)?;
    Ok((g, cert))
}

/// a = diag(3, 1/3), b = its conjugate by the rotation of π/4.
pub fn reference_pair() -> GeneratorSet<f64> {
    schottky_sl2(&SchottkyParams { generators: vec![(3.0, 0.0), (3.0, FRAC_PI_4)] })
        .expect("reference pair is certified")
        .0
}

/// The same configuration with eigenvalue e^7: periods near 7 per letter.
pub fn long_period_pair() -> GeneratorSet<f64> {
    let l = 7f64.exp();
    schottky_sl2(&SchottkyParams { generators: vec![(l, 0.0), (l, FRAC_PI_4)] })
        .expect("long-period pair is certified")
        .0
}

/// Reducible control in SL(3): g ↦ [[g, 0], [c_g, 1]] on the reference
/// pair, with a shear row c_g per generator. Not irreducible, and its limit
/// curve is only Hölder in the third direction.
pub fn barbot_pair(shear: f64) -> GeneratorSet<f64> {
    let base = reference_pair();
    let rows = [[shear, 0.0], [0.0, shear]];
    let mats = base
        .matrices()
        .iter()
        .zip(rows)
        .map(|(g, c)| {
            Matrix::from_row_major(3, vec![g[(0, 0)], g[(0, 1)], 0.0, g[(1, 0)], g[(1, 1)], 0.0, c[0], c[1], 1.0])
                .expect("3x3")
        })
        .collect();
    GeneratorSet::from_matrices(mats, Presentation::Free).expect("unimodular")
}

/// Label for a single letter, used in certificate messages.
pub fn letter_label(g: &GeneratorSet<f64>, l: Letter) -> String {
    format_word(&[l], g.labels())
}
