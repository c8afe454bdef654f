// SPDX-License-Identifier: MIT OR Apache-2.0

//! Dataset ingestion and result files.

pub mod dataset;
pub mod number;
pub mod svg;
pub mod tables;

pub use dataset::{read_csv, read_csv_from, read_csv_str, Dataset, DatasetSpec};
pub use number::fmt_g17;
pub use tables::{
    read_plateaus, read_profile, read_scenario_table, read_sweep, write_plateaus, write_profile, write_replicates,
    write_scenario_table, write_sweep, ScenarioRow, PLATEAU_HEADER, PROFILE_HEADER, REPLICATE_HEADER, SCENARIO_HEADER,
    SWEEP_HEADER,
};
