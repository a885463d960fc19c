//! Tours through finite point sets in `R^N` built scale by scale: greedy
//! dyadic nets, local flatness numbers, a connected graph per scale, and a
//! closed walk using each final edge once in each direction.
//!
//! Every pairwise distance evaluation is counted by a [`DistanceMeter`] so the
//! cost of a run can be measured independently of wall-clock noise.
//!
//! ```
//! use atsp_core::{solve, PointCloud, SolveParams};
//!
//! let cloud = PointCloud::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
//! let sol = solve(&cloud, &SolveParams::default()).unwrap();
//! assert_eq!(sol.tour.sequence(), &[0, 1, 0]);
//! assert_eq!(sol.tour_length, 2.0);
//! ```

pub mod baselines;
pub mod exec;
pub mod flatness;
pub mod geometry;
pub mod graph;
pub mod nets;
pub mod pipeline;

pub use exec::Execution;
pub use flatness::{Backend, FlatnessParams};
pub use geometry::{DistanceMeter, Line, Phase, Point, PointCloud};
pub use graph::{ScaleGraph, TwoToOneTour};
pub use nets::{NetLadder, NetLevel};
pub use pipeline::{solve, Mode, SideRadius, Solution, SolveParams};
