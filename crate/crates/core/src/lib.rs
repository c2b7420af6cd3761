//! Exact and `O(alpha)`-approximate continuous Fréchet distance between
//! polygonal chains in `R^d`, with explicit Fréchet correspondences.
//!
//! * [`freespace`] holds the exact free-space machinery (cell intervals,
//!   reachability propagation, the exact decision procedure, a bisection
//!   oracle for the exact distance) and the [`Correspondence`] type.
//! * [`grid`] places the classification grid and marks vertices and edges
//!   good, bad or dangerous.
//! * [`approxdecide`] is the sparse approximate decision procedure built on
//!   greedy box-to-box mapping.
//! * [`optimize`] turns the decision procedure into an approximation
//!   algorithm and provides the `nu`-simplification it relies on.
//!
//! ```
//! use frechet_core::{Chain, freespace::exact_frechet};
//!
//! let p = Chain::new(vec![vec![0.0, 0.0], vec![4.0, 0.0]]).unwrap();
//! let q = Chain::new(vec![vec![0.0, 1.0], vec![4.0, 1.0]]).unwrap();
//! let fd = exact_frechet(&p, &q, 1e-10);
//! assert!((fd - 1.0).abs() < 1e-8);
//! ```

pub mod approxdecide;
pub mod bench;
pub mod error;
pub mod freespace;
pub mod generate;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod optimize;

pub use approxdecide::{approx_decide, DecisionOutcome};
pub use error::{FrechetError, Result};
pub use freespace::correspondence::Correspondence;
pub use geometry::{Chain, ParamRange, Point};
pub use optimize::approx_frechet;
