//! Workspace files, verification scenarios and one-shot computations on top of
//! `subext-core`.

pub mod compute;
pub mod elem;
pub mod report;
pub mod scenarios;
pub mod workspace;

pub use report::{Instance, ScenarioResult, Status};
pub use scenarios::{run_all, run_scenario, scenario_names, RunOptions, ScenarioError};
pub use workspace::{bundled, parse_workspace, Workspace, WorkspaceError};
