use std::path::PathBuf;

use athermal_markov::experiments::{builtin, fig2_config, ExperimentConfig, HamiltonianSpec, InitialStateSpec};
use athermal_markov::Error;

fn repo_config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(format!("{name}.json"))
}

#[test]
fn shipped_configs_match_builtins() {
    for name in ["fig2", "fig3", "distance"] {
        let loaded = ExperimentConfig::load(&repo_config(name)).unwrap();
        assert_eq!(loaded, builtin(name).unwrap(), "{name}");
        let again = ExperimentConfig::from_json(&loaded.to_json()).unwrap();
        assert_eq!(again, loaded);
    }
}

#[test]
fn trace_violating_initial_state_is_rejected() {
    let mut c = fig2_config();
    c.initial_state = InitialStateSpec { re: Some(vec![vec![0.7, 0.0], vec![0.0, 0.7]]), ..Default::default() };
    match c.validate() {
        Err(Error::Config { field, .. }) => assert_eq!(field, "initial_state"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn non_hermitian_perturbation_reports_asymmetry() {
    let mut c = fig2_config();
    c.perturbation.hamiltonian =
        HamiltonianSpec { re: Some(vec![vec![0.0, 1.0], vec![0.5, 0.0]]), ..Default::default() };
    match c.validate() {
        Err(Error::Config { field, message }) => {
            assert_eq!(field, "perturbation.hamiltonian");
            assert!(message.contains("5e-1"), "{message}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_hamiltonian_name_names_the_field() {
    let mut c = fig2_config();
    c.bath = HamiltonianSpec::named("pauli_w");
    assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "bath.name"));
}

#[test]
fn overrides_reach_the_validated_setup() {
    let c = fig2_config().with_overrides(&["epsilons=[0.05]", "seed_sequence=9", "a=0.8"]).unwrap();
    let s = c.validate().unwrap();
    assert_eq!(s.epsilons, vec![0.0, 0.05]);
    assert_eq!(c.optimizer.seed_sequence, 9);
    assert_eq!(c.initial_state.a, Some(0.8));
    match fig2_config().with_overrides(&["optimizer.bogus=1"]) {
        Err(Error::Config { field, .. }) => assert_eq!(field, "--set optimizer.bogus"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn missing_unitary_phases_are_reported() {
    let text = fig2_config().to_json().replace("\"phases\"", "\"phasez\"");
    match ExperimentConfig::from_json(&text) {
        Err(Error::Config { field, .. }) => assert!(field.starts_with("unitary"), "{field}"),
        other => panic!("{other:?}"),
    }
}
