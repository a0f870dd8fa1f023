//! Two-zone analysis of journal bibliographies grown by a Simon-Yule process.
//!
//! A bibliography accumulates papers one at a time: with entry rate `alpha` a
//! paper founds a new journal, otherwise it lands on an existing journal with
//! probability proportional to the journal's (possibly age-discounted) weight.
//! The crate provides:
//!
//! - [`model`]: closed-form steady-state quantities — the Yule productivity
//!   distribution, the zone boundary, core-zone totals, and extreme-value
//!   productivities.
//! - [`curve`]: assembly of the two-zone cumulative curve (integer-constrained
//!   core plus shifted Egghe log form) and shape classification from the
//!   curvature conditions.
//! - [`sim`]: a Monte Carlo engine for the growth process with constant or
//!   linearly decreasing entry rates and geometrically decaying weights, plus
//!   deterministic ensemble averaging.
//! - [`fit`]: the least-squares estimators used in forecasting — logistic
//!   growth, the quadratic entry-rate law, and log-log power laws.
//! - [`pipeline`]: snapshot ingestion, analysis, history fitting, and the
//!   four-step forecast that assembles a predicted curve at a future time.
//! - [`io`]: CSV import/export of the tabular artifacts.

pub mod curve;
pub mod error;
pub mod fit;
pub mod io;
pub mod model;
pub mod pipeline;
pub mod sim;
pub mod special;

pub use error::{Error, Result};
