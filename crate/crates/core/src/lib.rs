//! Distributions of minima and maxima of a random number of independent,
//! non-identically distributed lifetimes, grid-based verification of
//! stochastic orders (usual, hazard-rate, reversed-hazard-rate,
//! likelihood-ratio) and their preservation under random sample size, and
//! the total-positivity / variation-diminishing machinery behind those
//! preservation results, including the configurations where the
//! sign-change bound fails.

pub mod dist;
pub mod error;
pub mod extremes;
pub mod mc;
pub mod ordering;
pub mod random_extremes;
pub mod vardim;

pub use dist::{DistSpec, Family};
pub use error::{Error, Result};
pub use extremes::{ComponentFamily, ExtremeKind, SystemSpec};
pub use mc::{
    oracle_compare, sample_lifetime, simulate_random_extreme, EmpiricalCurve, OracleReport,
    SimConfig,
};
pub use ordering::{
    check_hr, check_lr, check_ratio_monotone_in_n, check_revhazard_monotone_in_n, check_rh,
    check_st, verify_max_sample_size_rh, verify_theorem, CheckVerdict, Classification, Direction,
    Grid, GridTransform, HypothesisResult, OrderingVerdict, Quantity, Relation, TheoremId,
    TheoremReport, ViolationSite,
};
pub use random_extremes::{RandomExtremeSpec, SizePmf};
pub use vardim::{
    bundled_proposition_scenarios, check_rr2, check_tp2, counterexample, counterexample_grid,
    sign_changes, vd_transform, vd_transform_with_tol, verify_proposition, CounterCase,
    CounterexampleRun, Kernel, KernelVerdict, PropositionId, PropositionReport,
    PropositionScenario, SignChangeReport, SignedSequenceFn, VdSample,
};
