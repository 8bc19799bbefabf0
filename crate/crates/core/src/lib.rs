//! Exact conditional probability on finite carriers.
//!
//! - [`measure`]: carriers, events, nonnegative functions, measures,
//!   statistics and pushforwards.
//! - [`state`]: Rényi states `[μ]`, bunches, conditional families,
//!   consistency checking and reconstruction of `[μ]` from a family.
//! - [`disintegration`]: conditional states `t ↦ P^t` relative to a
//!   dominating measure on the codomain of a statistic.
//! - [`model`], [`report`], [`posterior`], [`app`]: the model file format,
//!   report rendering, truncation families and the command layer used by the
//!   `renyi` CLI.
//!
//! All arithmetic is exact ([`Rational`]); identities are tested with `==`.

pub mod app;
pub mod disintegration;
pub mod error;
pub mod measure;
pub mod model;
pub mod posterior;
pub mod rational;
pub mod report;
pub mod state;

pub use disintegration::{
    choose_dominating, disintegrate, kolmogorov_conditional, verify_factorization, ConditionalState, DominatingMeasure,
    FactorizationReport, FactorizationRow, NuMode, Statistic,
};
pub use error::{Error, Result};
pub use measure::{integrate, mass, Carrier, Event, NonNegFunction, SigmaFiniteMeasure};
pub use rational::Rational;
pub use state::{
    check_consistency, close_under_union, reconstruct, states_equal, validate_bunch, Bunch, BunchReport,
    ConditionalFamily, ConsistencyReport, ConsistencyViolation, RenyiState,
};
