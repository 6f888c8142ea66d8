mod gap_and_occupations {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/gap_and_occupations.rs"));
}
mod spectral_point {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/spectral_point.rs"));
}
mod rate_surface {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/rate_surface.rs"));
}
mod mode_overlaps {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/mode_overlaps.rs"));
}
mod cp_density_matrix {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cp_density_matrix.rs"));
}
mod mixed_state {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/mixed_state.rs"));
}
mod qubit_transfer {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/qubit_transfer.rs"));
}
mod bell_fidelity {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bell_fidelity.rs"));
}
mod hermitian_algebra {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/hermitian_algebra.rs"));
}
mod preset_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/preset_sweep.rs"));
}

#[test]
fn gap_and_occupations_runs() {
    gap_and_occupations::run_example().expect("gap_and_occupations example should run");
}

#[test]
fn spectral_point_runs() {
    spectral_point::run_example().expect("spectral_point example should run");
}

#[test]
fn rate_surface_runs() {
    rate_surface::run_example().expect("rate_surface example should run");
}

#[test]
fn mode_overlaps_runs() {
    mode_overlaps::run_example().expect("mode_overlaps example should run");
}

#[test]
fn cp_density_matrix_runs() {
    cp_density_matrix::run_example().expect("cp_density_matrix example should run");
}

#[test]
fn mixed_state_runs() {
    mixed_state::run_example().expect("mixed_state example should run");
}

#[test]
fn qubit_transfer_runs() {
    qubit_transfer::run_example().expect("qubit_transfer example should run");
}

#[test]
fn bell_fidelity_runs() {
    bell_fidelity::run_example().expect("bell_fidelity example should run");
}

#[test]
fn hermitian_algebra_runs() {
    hermitian_algebra::run_example().expect("hermitian_algebra example should run");
}

#[test]
fn preset_sweep_runs() {
    preset_sweep::run_example().expect("preset_sweep example should run");
}
