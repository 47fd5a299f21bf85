//! Upper and lower bounds on observable multiple-quantum coherence (MQC)
//! intensities of `N` spin-1/2 particles prepared in the uniformly polarised
//! product state `σ_p = (1/2 + p I_z)^{⊗N}` and read out through the
//! normalised collective magnetisation `P_z = (2/N) I_z`.
//!
//! The crate is split along the computation:
//!
//! * [`combinatorics`] – exact binomials, Zeeman degeneracies and the
//!   maximal rank `R^N_q` of a coherence-order-`q` operator.
//! * [`spectra`] – degeneracy-compressed spectra of `P_z` and `σ_p` and the
//!   extreme-eigenvalue norms and dot products built from them.
//! * [`bounds`] – the bounds themselves, closed forms, asymptotics,
//!   transition analysis and experimental estimates.
//! * [`oracle`] – dense `2^N × 2^N` simulation used to verify everything
//!   above for small `N`.
//!
//! All large quantities are carried as [`SignedLog`] values so that
//! intensities down to `e^{-10^4}` stay representable.

pub mod bounds;
pub mod combinatorics;
mod error;
pub mod oracle;
mod signed_log;
pub mod spectra;

pub use combinatorics::{BigCount, HalfInt};
pub use error::{Error, Result};
pub use signed_log::{LogSum, SignedLog};
