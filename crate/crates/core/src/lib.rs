//! Channel assignment for cellular networks with underlaying
//! device-to-device (D2D) links.
//!
//! A base station assigns uplink/downlink channels to cellular and D2D
//! links so that several D2D links may share one channel, every link keeps
//! a minimum successful-transmission probability, and a network utility
//! (expected weighted sum-rate, full-CSI sum-rate, or access rate) is
//! maximized — including when the BS only has *partial* channel state
//! information for some link classes.
//!
//! What's inside:
//! * [`model`] — scenario generation: link geometry, path loss, shadowing,
//!   Nakagami/Rayleigh/Ricean fading, and the five CSI visibility scenarios.
//! * [`stats`] — closed-form success probabilities and expected rates for a
//!   link under unknown interference, with a Monte-Carlo oracle.
//! * [`utility`] — per-channel utility functions and QoS feasibility.
//! * [`matching`] — maximum-weight bipartite matching with forbidden edges.
//! * [`dp`] — the optimal stage/state dynamic program over link subsets,
//!   plus an exhaustive-search oracle.
//! * [`cluster`] — the greedy-clustering heuristic, queue-based
//!   cluster-to-channel weights, and a semi-orthogonal baseline.
//! * [`harness`] — reproducible drop-based experiments with CSV output.
//!
//! Start with the runnable examples (`cargo run --example <name>`); the
//! `d2d-experiment` binary drives full experiments from a config file or
//! command-line flags.

pub mod cluster;
pub mod dp;
pub mod error;
pub mod harness;
pub mod matching;
pub mod model;
pub mod special;
pub mod stats;
pub mod utility;

pub use error::{Error, Result};
pub use model::{CsiScenario, FadingSpec, Scenario, ScenarioParams};
pub use stats::{InterferenceContext, LinkStats};
pub use utility::UtilityKind;
