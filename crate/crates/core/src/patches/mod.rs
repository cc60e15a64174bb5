//! Arithmetic patches, `(k, ε, e)`-AP verification and search, and the
//! dimension thresholds that guarantee them.

mod bounds;
mod patch;
mod search;
mod witness;

pub use bounds::{guarantee_report, threshold_bound, GuaranteeConfig, GuaranteeReport, PROBE_OFFSET};
pub use patch::{
    check_orientation, make_patch, patch_size, standard_orientation, verify_patch, ArithmeticPatch, MAX_PATCH_POINTS,
    ORTHONORMAL_TOL,
};
pub use search::{
    completeness_epsilon, find_patch, AnchorPolicy, PatchQuery, PatchReport, SearchStats, Witness,
    DEFAULT_DELTA_RATIO, PAIR_CANDIDATE_CAP,
};
pub use witness::{read_witness, write_witness};
