//! Gaussian continuous-variable quantum cloning machines, a squeezed-state
//! QKD protocol analyzed under the optimal cloning attack, and distillation
//! of secret bits from correlated Gaussian keys.
//!
//! The crate is organized around the physical pipeline:
//!
//! - [`phasespace`] — Wigner-sampling Monte Carlo simulation of linear
//!   optical circuits, plus an exact moment-propagation cross-check.
//! - [`cloners`] — symmetric N→M and asymmetric 1→2 Gaussian cloners:
//!   analytic variances/fidelities and circuit builders.
//! - [`pci`] — phase-conjugated-inputs cloners producing clones and
//!   anticlones, with the optimal conjugate-fraction analysis.
//! - [`qkd`] — the continuous-variable key distribution protocol, the
//!   cloning attack information balance, and session simulation.
//! - [`distill`] — sliced error reconciliation of correlated Gaussian
//!   values into identical bit strings with leak accounting.
//! - [`privacy`] — Toeplitz universal hashing and key-length budgeting.

pub mod cloners;
pub mod distill;
pub mod error;
pub mod numeric;
pub mod pci;
pub mod phasespace;
pub mod privacy;
pub mod qkd;

pub use error::{Error, Result};
