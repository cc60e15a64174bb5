//! Counting profiles, zeta and box dimension estimates, zeta-series tools,
//! Assouad certificates and the quasi-isometry harness.

mod assouad;
mod ladder;
mod profile;
mod qi;
mod series;

pub use assouad::{assouad_certificate, AssouadCertificate, AssouadConfig, AssouadTriple, DEFAULT_RHO_MIN};
pub use ladder::{dyadic_down_ladder, dyadic_ladder, geometric_ladder};
pub use profile::{
    box_dimension_estimate, counting_profile, parse_rung_table, plot_data, render_rung_table, zeta_estimates,
    BoxProfile, CountingProfile, Diagnostics, DimensionEstimate, Rung, RungRow, Trend, DEFAULT_WINDOW, MIN_RUNGS,
    WIDE_BRACKET_RATIO,
};
pub use qi::{qi_invariance_check, qi_transform, InequalityStatus, QiReport, QiRow, QuasiIsometry};
pub use series::{
    abel_check, abscissa_estimate, abscissa_with_tau, sigma_grid, zeta_partial_sums, Abscissa, AbelCheck,
    AbelProfile, SeriesProfile, SeriesTerms, ABSCISSA_MIN_DECADES, DIVERGENCE_TAU, SERIES_WINDOW,
};
