// Jacobi eigendecomposition, PSD square root and the Jozsa fidelity on
// a hand-built mixed state.

use cooper_oam::linalg::{eigh, sqrtm_psd, CMatrix};
use cooper_oam::metrics::{fidelity_report, TargetState};
use cooper_oam::pair_state::{OamPairBasis, PairDensityMatrix};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = |re, im| Complex64::new(re, im);
    let a = CMatrix::from_rows(vec![
        vec![c(0.4, 0.0), c(0.1, 0.05), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.1, -0.05), c(0.3, 0.0), c(0.12, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.12, 0.0), c(0.2, 0.0), c(0.0, 0.02)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, -0.02), c(0.1, 0.0)],
    ])?;
    let eig = eigh(&a)?;
    println!("eigenvalues {:?}", eig.eigenvalues.iter().map(|l| format!("{l:.6}")).collect::<Vec<_>>());

    let s = sqrtm_psd(&a)?;
    println!("‖√A·√A − A‖max = {:.2e}", (&(&s * &s) - &a).max_abs());

    let basis = OamPairBasis::from_labels(&[0, 1])?;
    let rho = PairDensityMatrix::new(basis.clone(), a)?;
    let target = TargetState::bell(&basis, (0, 1), (1, 0))?;
    let r = fidelity_report(&rho, &target)?;
    println!("Jozsa F = {:.12}, ⟨ψ|ρ|ψ⟩ = {:.12}", r.jozsa, r.shortcut);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
