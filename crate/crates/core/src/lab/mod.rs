//! Experiments: convergence profiles for the smoothing limits and the Hardy-space
//! extensions of upper-triangular matrices.

pub mod analytic;
pub mod profile;

pub use analytic::{
    coefficient_extension, coefficient_sample, diagonal_extension, diagonal_extension_profile, diagonal_sample,
    h1_norm, h1_radial_profile, h_infinity_norm, AnalyticSample,
};
pub use profile::{
    classify, fejer_convergence_profile, l1_membership_verdict, modulation_continuity_profile,
    poisson_convergence_profile, radii_for_orders, riemann_lebesgue_profile, ConvergenceProfile, NormMode,
    ProfileConfig, Verdict, VerdictRule,
};
