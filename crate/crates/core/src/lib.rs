//! Numerical toolkit for disjoint Cesàro-hypercyclicity of weighted backward
//! shifts on `l^p` and `c_0` sequence spaces over `N` and `Z`.
//!
//! * [`space`]: finitely supported vectors and norms.
//! * [`weights`], [`shift`]: weight sequences, shifts, powers, right inverses.
//! * [`orbit`]: Cesàro orbit points and means.
//! * [`criterion`]: witness search for the weight conditions and schedules.
//! * [`construct`]: assembly and certification of approximating vectors.
//! * [`probe`]: finite-horizon transitivity, blow-up/collapse and mixing probes.

pub mod construct;
pub mod criterion;
pub mod error;
pub mod float_serde;
pub mod orbit;
pub mod probe;
pub mod scalar;
mod scan;
pub mod shift;
pub mod space;
pub mod weights;

pub use error::{Error, Result};
