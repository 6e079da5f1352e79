//! Every example in `examples/` runs to completion.

mod flux_models {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/flux_models.rs"));
}

#[test]
fn flux_models_example_runs() {
    flux_models::run_example().expect("flux_models example");
}

mod spectral_toolkit {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/spectral_toolkit.rs"));
}

#[test]
fn spectral_toolkit_example_runs() {
    spectral_toolkit::run_example().expect("spectral_toolkit example");
}

mod energy_coordinates {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/energy_coordinates.rs"));
}

#[test]
fn energy_coordinates_example_runs() {
    energy_coordinates::run_example().expect("energy_coordinates example");
}

mod kernel_scan {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/kernel_scan.rs"));
}

#[test]
fn kernel_scan_example_runs() {
    kernel_scan::run_example().expect("kernel_scan example");
}

mod peakon_transport {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/peakon_transport.rs"));
}

#[test]
fn peakon_transport_example_runs() {
    peakon_transport::run_example().expect("peakon_transport example");
}

mod peakon_antipeakon {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/peakon_antipeakon.rs"));
}

#[test]
fn peakon_antipeakon_example_runs() {
    peakon_antipeakon::run_example().expect("peakon_antipeakon example");
}

mod eulerian_cross_check {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/eulerian_cross_check.rs"));
}

#[test]
fn eulerian_cross_check_example_runs() {
    eulerian_cross_check::run_example().expect("eulerian_cross_check example");
}

mod breaking_detection {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/breaking_detection.rs"));
}

#[test]
fn breaking_detection_example_runs() {
    breaking_detection::run_example().expect("breaking_detection example");
}

mod momentum_transport {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/momentum_transport.rs"));
}

#[test]
fn momentum_transport_example_runs() {
    momentum_transport::run_example().expect("momentum_transport example");
}

mod small_data_decay {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/small_data_decay.rs"));
}

#[test]
fn small_data_decay_example_runs() {
    small_data_decay::run_example().expect("small_data_decay example");
}

mod continuous_dependence {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/continuous_dependence.rs"));
}

#[test]
fn continuous_dependence_example_runs() {
    continuous_dependence::run_example().expect("continuous_dependence example");
}

mod config_run {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/config_run.rs"));
}

#[test]
fn config_run_example_runs() {
    config_run::run_example().expect("config_run example");
}
