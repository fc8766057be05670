//! The flow space 𝕃 ⊂ ℙ(V × V*): points, the flow, the group action, the
//! tangent splitting E^u ⊕ E^s ⊕ E⁰, the contact form, the pseudo-metric and
//! Hopf coordinates.

mod hopf;
mod point;

pub use hopf::{hbi_cocycle, hopf, hopf_inv, HopfCoord, Norm};
pub use point::{
    act, act_tangent, act_tangent_with_inverse, act_with_inverse, chart_distance, contact_form,
    flow, flow_tangent, project_base, pseudo_metric, FlowPoint, TangentVector, TANGENCY_TOL,
};
