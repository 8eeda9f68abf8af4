//! Routing a single repair crew over a road network so that the faults of a
//! radial power-distribution tree are repaired with the least total customer
//! outage time.
//!
//! The crate is `no_std` (it needs `alloc`). Enable the `parallel` feature to
//! spread label extension over a rayon pool; results do not depend on the
//! number of worker threads.
//!
//! The main entry points are:
//!
//! * [`instance`]: the problem data, validation, generators and transforms.
//! * [`power_eval`]: precedence sets, the outage counter `W` and route evaluation.
//! * [`bounds`]: arc-sorted lower bounds and maximum vertex positions.
//! * [`heuristics`]: greedy constructions used for upper bounds.
//! * [`bidp`]: the bidirectional labeling engine, exact and relaxed.
//! * [`oracle`]: brute force and plain subset DP used as references.
//! * [`mip`]: the mixed-integer model, its LP text form and a solution checker.
#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod bidp;
pub mod bounds;
mod error;
pub mod heuristics;
pub mod instance;
pub mod mip;
pub mod oracle;
pub mod power_eval;
mod set;

pub use bidp::{solve, solve_with, Mode, SolveReport, SolveStats, SolverConfig, Termination};
pub use bounds::BoundsTable;
pub use error::Error;
pub use instance::{Instance, Violation, DEPOT};
pub use power_eval::{evaluate_route, PrecedenceIndex, Route};
pub use set::VertexSet;

/// Fault vertices are labelled `1..=n`; [`DEPOT`] is `0`.
pub type Vertex = usize;

/// Largest number of fault vertices the bit-set based machinery supports.
pub const MAX_VERTICES: usize = 63;
