use serde::{Deserialize, Serialize};

use crate::basic::fixed_point_lift;
use crate::error::{Error, Result};
use crate::flow::{flow, FlowPoint};
use crate::groups::{cyclic_reduce, is_proper_power, ClassSeed, GeneratorSet, GroupElement};
use crate::scalar::Real;

use super::quad::simpson;

/// Anything carrying a period λ₁ in nats.
pub trait Periodic {
    fn period(&self) -> f64;
}

impl<T: Real> Periodic for ClassSeed<T> {
    fn period(&self) -> f64 {
        self.period.f64()
    }
}

impl Periodic for f64 {
    fn period(&self) -> f64 {
        *self
    }
}

/// λ₁(γ), the log of the spectral radius.
pub fn period<T: Real>(g: &GroupElement<T>) -> Result<T> {
    let eig = g.eigen()?;
    if !eig.simple_top {
        return Err(Error::NotProximal(format!("top eigenvalue of {:?} is not simple", g.word())));
    }
    let l = eig.lambda1();
    if !(l > T::zero()) {
        return Err(Error::NotProximal(format!("λ₁ = {l} is not positive")));
    }
    Ok(l)
}

#[derive(Clone, Debug)]
pub struct ConjClassRecord<T> {
    pub representative: GroupElement<T>,
    pub period: T,
    pub primitive: bool,
    pub potential_avg: Option<T>,
}

impl<T: Real> ConjClassRecord<T> {
    pub fn new(representative: GroupElement<T>) -> Result<Self> {
        let period = period(&representative)?;
        let primitive = !is_proper_power(cyclic_reduce(representative.word()));
        Ok(Self { representative, period, primitive, potential_avg: None })
    }

    pub fn from_seed(g: &GeneratorSet<T>, seed: &ClassSeed<T>) -> Result<Self> {
        Self::new(g.element(&seed.word))
    }

    /// Attaches U_[γ], returning the quadrature estimate.
    pub fn attach_potential(
        &mut self,
        u: impl Fn(&FlowPoint<T>) -> T,
        nodes: usize,
    ) -> Result<PotentialAverage> {
        let avg = potential_average(u, self, nodes)?;
        self.potential_avg = Some(T::lit(avg.value));
        Ok(avg)
    }
}

impl<T: Real> Periodic for ConjClassRecord<T> {
    fn period(&self) -> f64 {
        self.period.f64()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialAverage {
    pub value: f64,
    /// Richardson estimate of the quadrature error.
    pub error: f64,
}

/// (1/λ₁)∫₀^{λ₁} U(φᵗx) dt along the orbit through the fixed-point lift.
pub fn potential_average<T: Real>(
    u: impl Fn(&FlowPoint<T>) -> T,
    rec: &ConjClassRecord<T>,
    nodes: usize,
) -> Result<PotentialAverage> {
    let x = fixed_point_lift(&rec.representative)?;
    let l = rec.period.f64();
    let (integral, err) = simpson(|t| u(&flow(&x, T::lit(t))).f64(), 0.0, l, nodes);
    Ok(PotentialAverage { value: integral / l, error: err / l })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Letter, Presentation};
    use crate::linalg::Matrix;

    #[test]
    fn diagonal_period() {
        let g = GroupElement::from_matrix(Matrix::<f64>::diag(&[2.0, 0.5])).unwrap();
        assert!((period(&g).unwrap() - 2f64.ln()).abs() < 1e-14);
        assert!((period(&g.pow(2)).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rotation_is_not_proximal() {
        let (s, c) = 0.3f64.sin_cos();
        let g = GroupElement::<f64>::from_matrix(Matrix::from_rows(&[&[c, -s], &[s, c]]).unwrap()).unwrap();
        assert!(matches!(period(&g), Err(Error::NotProximal(_))));
    }

    #[test]
    fn constant_potential_averages_to_one() {
        let gs = GeneratorSet::from_matrices(vec![Matrix::<f64>::diag(&[3.0, 1.0 / 3.0])], Presentation::Free).unwrap();
        let mut rec = ConjClassRecord::new(gs.element(&[Letter(0)])).unwrap();
        let avg = rec.attach_potential(|_| 1.0, 16).unwrap();
        assert_eq!(avg.value, 1.0);
        assert_eq!(rec.potential_avg, Some(1.0));
        let sq = ConjClassRecord::new(gs.element(&[Letter(0), Letter(0)])).unwrap();
        assert!(!sq.primitive);
    }
}
