//! Mode functions, wave packets and Klein–Gordon products on the x₀ = 0 slice.

pub mod data;
pub mod kg;
pub mod mode;
pub mod packet;
pub mod profile;

pub use data::{CauchyData, Chart, Conjugate, Jet, Superposition, Support};
pub use kg::{
    kg_inner_product, kg_inner_product_with, kg_norm_exact, kg_norm_simple, kg_norm_simple_exact, kg_norm_tangent,
    kg_norm_tangent_exact, KgOptions,
};
pub use mode::{
    lambda0_minus, minus_mode_initial_data, mode_initial_data, truncated_mode_overlap, Branch, ModeData, ModeIndex,
    SmearedModes,
};
pub use packet::{
    eikonal_coefficients, packet_initial_data, simple_xi0, tangent_eikonal_residual, tilde_eikonal_residual, Component,
    CornerPacket, CornerSegment, PacketData, PacketSpec, SimplePacket, TangentPacket, TangentWindow,
};
pub use profile::{AngularProfile, PhaseTable};
