//! Example geometries: certified Schottky groups, symmetric powers, the
//! spacelike geodesic flow of H^{p,q} with its boundary embedding, Hilbert
//! geometry of ellipsoids, the adjoint representation and the map Ψ.

mod algebra;
mod audit;
mod hilbert;
mod pq;
mod schottky;

pub use audit::{
    adjoint_audit, klein_audit, phi_audit, psi_audit, random_ellipsoid, random_spacelike_tangent, AdjointAudit,
    KleinAudit, PhiAudit, PsiAudit,
};
pub use algebra::{adjoint_rep, sl_basis, sl_coordinates, symmetric_power, symmetric_power_matrix};
pub use hilbert::{
    bh_flow, chord_endpoints, hilbert_distance, psi_conjugacy_residual, psi_legs, psi_map, ConvexBody,
};
pub use pq::{
    hpq_flow, negative_triple, phi_partial, phi_partial_inv, MinkowskiForm, SignConvention, SpacelikeTangent,
    TANGENT_TOL,
};
pub use schottky::{
    barbot_pair, certify_ping_pong, hyperbolic, isometric_arc, letter_label, line_angle_gap, long_period_pair,
    reference_pair, schottky_sl2, Arc, PingPongCertificate, SchottkyParams,
};
