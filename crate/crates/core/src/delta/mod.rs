//! Δ-transitivity of products `T_1 × … × T_H` at finite cylinder depth.

mod common_time;
mod counterexample;
mod hypotheses;
mod refine;

pub use common_time::{
    certify_delta_transitive, chain_transitive_point, diagonal_orbit_hits, find_common_time, CertificateJson,
    ChainedPoint, CommonTime, CommonTimeCertificate, DeltaReport, TupleResult,
};
pub use counterexample::{
    counterexample_shift, n0_for, verify_counterexample, CounterexampleReport, CounterexampleSpec, TimeCheck,
};
pub use hypotheses::{
    density_condition_witness, strong_transitivity_cover, syndetic_return_times, DensityWitness, DensityWitnessJson,
    SyndeticReport,
};
pub use refine::{
    lemma1_refine, lemma1_refine_with_bound, validate_trace, RefinementTrace, RefinementTraceJson, TraceCheck,
};
