//! Periods, orbit counting, entropy, partial Ruelle zeta products and
//! periodic-orbit measures.

mod counting;
mod measure;
mod period;
mod quad;
mod zeta;

pub use counting::{
    counting_table, entropy_fit, li, li_exp, period_envelope, PeriodEnvelope, pressure_estimate, weighted_counts,
    CountingRow, CountingTable, EntropyFit,
};
pub use measure::{correlation, default_weighting, orbit_measure, OrbitComponent, OrbitMeasure};
pub use period::{period, potential_average, ConjClassRecord, Periodic, PotentialAverage};
pub use quad::{gauss_kronrod, simpson, KahanSum};
pub use zeta::{zeta_partial, zeta_weighted, ZetaEval, ZetaGuard, ZetaTerms};
