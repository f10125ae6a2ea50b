//! Dataset ingestion, instance generators and on-disk formats.
//!
//! Instance CSV: a header row, then one row per point. Every column other
//! than the optional id column and an optional `role` column (values
//! `agent` / `candidate`) must be numeric. Without a `role` column the
//! candidates are the agents themselves.
//!
//! Run records and experiment grids are JSON; see [`RunRecord`] and
//! [`GridFile`].

mod dataset;
mod generators;
mod grid;
mod record;

pub use dataset::{
    instance_digest, load_csv, load_points, write_instance_csv, DatasetSpec, LoadedPoints,
};
pub use generators::{gaussian_blobs, generate, parse_params, GeneratorParams, GENERATORS};
pub use grid::{DatasetSource, GridDataset, GridFile};
pub use record::{InstanceData, RunRecord, SCHEMA_VERSION};
