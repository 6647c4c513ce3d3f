//! Numerical companion for Carathéodory distances on the annulus and on a
//! space built by gluing countably many annuli together at prescribed points.
//!
//! * [`mobius`]: disk primitives (Möbius and Poincaré distances, Blaschke
//!   products, contraction checks).
//! * [`annulus`]: the covering `𝔻 → A(R)`, its explicit preimages, deck lifts,
//!   and two-sided distance brackets.
//! * [`verify`]: parameter sweeps certifying the inequalities that control
//!   those brackets, and the thresholds where they start to hold.
//! * [`glued`]: the truncated glued space `X_N(R)`, admissible functions on it,
//!   cross-sheet brackets and probes for completeness and non-compactness.
//! * [`report`]: deterministic JSON/CSV report documents.

pub mod annulus;
pub mod bracket;
pub mod error;
pub mod glued;
pub mod mobius;
pub mod optimize;
pub mod report;
pub mod verify;

pub use annulus::{AnnulusConfig, AnnulusMap};
pub use bracket::{DistanceBracket, Scale, Witness};
pub use error::{Error, Result};
pub use glued::{AdmissibleFunction, GluePointIndex, GluedSpace, SpacePoint};
pub use mobius::{BlaschkeProduct, ComplexPoint};
pub use verify::{AnnulusConstants, SweepResult};
