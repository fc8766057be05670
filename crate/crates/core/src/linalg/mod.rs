//! Dense small-dimension linear algebra: vectors, covectors, matrices,
//! projective points and hyperplanes, spectra, cross-ratios.

mod dense;
mod eigen;
mod projective;

pub use dense::{Covector, Lu, Matrix, Vector, MAX_DIM};
pub use eigen::{
    eigen_decompose, eigen_decompose_cfg, eigen_decompose_with_inverse, eigenvalues, lambda_gap,
    signature, singular_values, symmetric_eigenvalues, top_log_modulus, top_vector, EigenConfig,
    EigenData, NEAR_PARABOLIC_GAP,
};
pub use projective::{
    cross_ratio, cross_ratio_points, hyperplane_distance, projective_distance,
    transversality_margin, Ext, ProjHyperplane, ProjPoint,
};

pub(crate) use dense::{dot, norm2};
