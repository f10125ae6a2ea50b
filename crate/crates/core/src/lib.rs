//! Proportionally representative fair clustering.
//!
//! The crate selects `k` centers for a multiset of agents so that every
//! sufficiently large, sufficiently tight group of agents has a proportional
//! number of centers nearby. Alongside the selection engine it provides
//! checkers for several fairness axioms (with witnesses), two baseline
//! algorithms, the mean-squared-distance-to-`j`-closest metrics, and an
//! experiment harness.
//!
//! ```
//! use prfair_core::{select_prf_centers, Instance, Metric, Point};
//!
//! let agents: Vec<Point> = [0.0, 0.0, 1.0].iter().map(|&x| Point::from(x)).collect();
//! let inst = Instance::unconstrained(agents, 3, Metric::Euclidean).unwrap();
//! let (outcome, trace) = select_prf_centers(&inst).unwrap();
//! assert_eq!(outcome.selected(), &[0, 1, 2]);
//! assert_eq!(trace.rounds.len(), 3);
//! ```

pub mod axioms;
pub mod baselines;
pub mod engine;
pub mod error;
pub mod evaluation;
pub mod instance;
pub mod io;

pub use engine::{select_prf_centers, SweepRound, SweepTrace, Weight};
pub use error::{Error, Result};
pub use instance::{distance, nearest_j, Instance, Metric, Mode, Outcome, Point, RadiusSchedule};
