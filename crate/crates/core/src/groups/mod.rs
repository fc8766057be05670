//! Words over generator sets, ball enumeration, primitive conjugacy classes
//! of free groups, attracting fixed points, sampled limit sets and the
//! eigenvalue-gap diagnostics.

mod classes;
mod gap;
mod generators;
mod limit;
mod word;

pub use classes::{fingerprint_conj_classes, primitive_conj_classes, ClassSeed};
pub use gap::{gap_fit, linear_fit, GapFit};
pub use generators::{
    enumerate_ball, free_ball_size, GeneratorSet, GroupElement, Presentation, DEFAULT_ELEMENT_CAP,
};
pub use limit::{
    attracting_sample, convergence_probe, fixed_points, limit_set_sample, transversality_audit,
    ConvergenceSeries, LimitSample, TransversalityAudit, DEDUP_TOL,
};
pub(crate) use limit::SampleIndex;
pub use word::{
    cyclic_reduce, format_word, inverse_word, is_proper_power, is_reduced, least_rotation,
    parse_word, primitive_period, reduce, Letter, Word,
};
