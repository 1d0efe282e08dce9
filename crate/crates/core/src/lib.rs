//! Finite-dimensional quantum operations, their duals, instruments, observables
//! and sequential products, with a randomized verification suite.

pub mod effects;
pub mod error;
pub mod instruments;
pub mod io;
pub mod label;
pub mod linalg;
pub mod operations;
pub mod verify;

pub use effects::{convex_combine_effects, convex_combine_states, normalize, prob, Effect, ProbabilityMeasure, State};
pub use error::{Error, Result};
pub use instruments::{
    compose_instruments, conditioned_instrument, conditioned_observable, convex_combine_instruments, distribution,
    holevo_instrument, holevo_repeatable, identity_instrument, identity_observable, inst_op, is_repeatable,
    luders_instrument, measured_observable, obs_distribution, obs_effect, seq_product_observables,
    state_constant_instrument, FiniteInstrument, FiniteObservable, RepeatabilityCheck,
};
pub use label::{validate_label, ProductLabel};
pub use linalg::{adjoint, hermitian_eig, loewner_leq, min_eigenvalue, psd_sqrt, Eigen, Matrix, Tolerance, C64};
pub use operations::{
    add_ops, commute_luders, commute_relative, compose, conditioned_effect, convex_combine_ops, holevo,
    kraus_from_choi, luders, not_influenced, seq_product_effects, standard_seq_product, DualOperation, Operation,
};
pub use verify::{
    explore_conjecture1, rand_effect, rand_instrument, rand_observable, rand_operation, rand_state, registry, replay,
    run_suite, theorem_ids, verify_commute_witness, ConjectureReport, FamilyCoverage, Sampler, Summary, TheoremResult,
    TrialConfig, VerificationReport,
};
