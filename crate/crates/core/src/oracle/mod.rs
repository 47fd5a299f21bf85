//! Dense `2^N × 2^N` simulation for small `N`.
//!
//! Nothing here scales; it exists to check the block-spectrum formulas
//! against explicit operators, unitaries and phase-cycled experiments.

pub mod alignment;
pub mod coherence;
pub mod dense;
pub mod experiment;
pub mod verify;
pub mod zigzag;

pub use alignment::{achievable_signal, max_overlap, AchievableSignal};
pub use coherence::{coherence_project, coherence_project_pm, projector_fourier, CoherenceDecomposition};
pub use dense::{build_spin_operators, rx, rz, DenseOperator, SpinOperators};
pub use experiment::{phase_cycle_experiment, projected_signal};
pub use verify::{run_suite, verify_rank_formula, CheckRecord, Status, VerifyReport};
pub use zigzag::zigzag_max_rank_operator;
