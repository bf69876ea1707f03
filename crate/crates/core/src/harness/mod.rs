//! Run driver, error norms, convergence studies and file output.

pub mod config;
pub mod output;
pub mod run;
pub mod study;

pub use config::{default_cfl, ResolvedRun, RunConfig, Scheme, SensorKind};
pub use run::{check_nodal_states, l1_error, nodal_ranges, run_simulation, Failure, RunReport, Simulation};
pub use study::{compare_sensors, compute_eoc, convergence_study, EocRow, SensorChoice, SensorRun};
