//! Config-driven experiments: parameter sweeps, built-in studies, property
//! sweeps and their on-disk artifacts.

mod config;
mod output;
mod properties;
pub mod random;
mod sweep;

pub use config::{
    builtin, distance_config, fig2_config, fig3_config, BlockSpec, Expectation, ExperimentConfig, HamiltonianSpec,
    InitialStateSpec, KetSpec, MatrixSpec, PerturbationConfig, PhaseBasis, Setup, TemperatureGrid, UnitarySpec,
    MAX_JOINT_DIM,
};
pub use output::{render_svg, write_outputs, write_property_reports};
pub use properties::{
    expansion_lemma_sweep, fixed_point_sweep, mto_equivalence_sweep, partial_transpose_sweep, run_property_suite,
    slope_suite, slope_test, PropertyReport, SlopeReport, PROPERTY_SEED, SLOPE_EPSILONS, SLOPE_RATIO_RANGE,
};
pub use sweep::{
    config_hash, evaluate_check, operation_at, run, CheckResult, ExperimentOutput, Metadata, SweepRow, MONOTONE_TOL,
};

use crate::error::Result;

/// Entanglement study with its built-in config.
pub fn run_fig2() -> Result<ExperimentOutput> {
    run(&fig2_config())
}

/// Total-correlation study with its built-in config.
pub fn run_fig3() -> Result<ExperimentOutput> {
    run(&fig3_config())
}

/// Distance study with its built-in config.
pub fn run_distance_example() -> Result<ExperimentOutput> {
    run(&distance_config())
}
