//! Curvature analysis: class membership, Ricci data and sectional curvature.

pub mod classes;
pub mod ricci;
pub mod sectional;

pub use classes::{
    check_l2_components, check_r1_invariance, check_r_invariance, extract_l2_params,
    s_symmetrize, s_transform, synth_l2, L2Params,
};
pub use ricci::{
    almost_einstein_decompose, einstein_check, ricci_closed_forms, ricci_data, ricci_direction,
    scalars_closed_forms, system_rho_residual, verify_ricci_directions, RicciData,
};
pub use sectional::{
    max_residual, sectional, sectional_report, verify_basic_plane_relations,
    verify_orthonormal_sum_theorem, verify_r1_interpolation, verify_r1_plane_relations,
    verify_three_angle_theorem, Residual, SectionalReport, CONCLUSION_TOL, HYPOTHESIS_TOL,
};
