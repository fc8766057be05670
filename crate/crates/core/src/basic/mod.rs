//! The lifted basic set: Ω membership, basic points built from limit
//! samples, the explicit leaf geometry (unstable exponential, transport,
//! holonomies, time separation) and empirical audits of the hyperbolic
//! structure on sampled charts.

mod atlas;
mod chart;
mod leaf;
mod probes;

pub use atlas::{
    fixed_point_lift, in_omega, ZERO_MARGIN, make_basic_point, periodicity_check, periodicity_residual,
    properness_witness, BasicPoint, LimitAtlas, OmegaCheck, Periodicity, ProperWitness,
};
pub use chart::{
    contraction_rates, distortion_ratio, dyn_ball_diameters, sandwich_holds, unstable_chart,
    ChartNorm, ContractionRates, DynBallRow, DynProfile, NormalizedLift, Normalizer, UnstableChart,
};
pub use leaf::{
    aligned_lift, exp_u, infinitesimal_holonomy, linearization_defect, log_u, on_same_unstable_leaf,
    stable_holonomy, time_separation, transport_u, LEAF_TOL,
};
pub use probes::{
    scale_constants, shortest_offset_direction, slnic_probe, tangent_direction, ScaleConstants, SlnicEstimate,
    SlnicParams,
};
