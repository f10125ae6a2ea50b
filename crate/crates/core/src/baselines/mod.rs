//! Comparison algorithms: data-point-restricted k-means++ and Greedy Capture.

mod greedy;
mod kmeanspp;

pub use greedy::{greedy_capture, GreedyOutcome};
pub use kmeanspp::{kmeans_objective, kmeanspp, kmeanspp_run, KMeansRun, MAX_LLOYD_ITERATIONS};
