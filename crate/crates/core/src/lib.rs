//! Two-qubit Werner and Werner-like states under collective dephasing.
//!
//! The crate is `no_std` (it needs `alloc` for trajectories and sweeps) and
//! splits into:
//!
//! - [`qmat`]: fixed-size complex linear algebra and Jacobi eigensolvers,
//! - [`states`]: Bell, Werner and Werner-like density matrices,
//! - [`dynamics`]: master-equation generators, RK4 and the exact dephasing propagator,
//! - [`measures`]: concurrence, CHSH violation, mixedness and fidelity,
//! - [`analysis`]: threshold times, stationary states and figure datasets.
//!
//! The two-qubit basis is ordered `(|11>, |10>, |01>, |00>)` everywhere.
#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod analysis;
pub mod dynamics;
mod error;
pub mod measures;
pub mod qmat;
pub mod states;

pub use error::{Error, Result};
pub use states::{bell_state, werner, werner_state, BellKind, DensityMatrix, WernerSpec};
