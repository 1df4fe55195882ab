//! Livšic theory for locally constant functions on shift spaces.

mod closing;
mod coboundary;
mod experiment;
mod functions;
mod holder;
mod obstruction;
mod sums;

pub use closing::{
    closing_manifest, product_closing, search_constants, shadow, shadow_with, validate_factor, validate_product,
    ClosingConstants, ClosingManifest, FactorValidation, ProductValidation, ShadowResult, SweepConfig,
};
pub use coboundary::{
    cycle_length_bound, solve_coboundary, solve_product_coboundary, CoboundaryCertificate, CoboundaryOutcome,
    CycleWitness, ObstructionWitness, ProductCertificate, ProductSolve, SolveJson, WitnessJson,
};
pub use experiment::{
    equivalence_experiment, max_diagonal_sum, telescoping_bound, ExperimentConfig, ExperimentReport, SampleSummary,
    StatementVerdict, Status,
};
pub use functions::{FunctionJson, LocallyConstantFn, ProductFn};
pub use holder::{holder_constant, product_fn, HolderSpec, ProductHolder};
pub use obstruction::{obstruction_sums, orbit_sum, ObstructionJson, ObstructionReport, OrbitSum, MAX_ORBITS};
pub use sums::{diagonal_sums, nonconventional_sums, orbit_drift, product_sums, SumTrajectory, SumTrajectoryJson};
