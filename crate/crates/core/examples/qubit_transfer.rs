// Mapping a ring qubit a|cw⟩ + b|ccw⟩ onto the photon pair.

use std::f64::consts::FRAC_1_SQRT_2;

use cooper_oam::modes::AnnulusGeometry;
use cooper_oam::pair_state::{normalize, rho_superposition, OamPairBasis, QubitState, WindingNumber};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let basis = OamPairBasis::symmetric(2)?;
    let geom = AnnulusGeometry::default();
    let plus = QubitState::new(Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(FRAC_1_SQRT_2, 0.0))?;

    for (name, q) in [("plus", plus), ("minus", plus.flipped())] {
        let rho = normalize(&rho_superposition(&q, WindingNumber(2), &basis, &geom)?)?;
        let same = rho.entry((1, 1), (1, 1)).unwrap();
        let cross = rho.entry((1, 1), (-1, -1)).unwrap();
        println!("{name}: ρ[(1,1),(1,1)] = {:.4}, ρ[(1,1),(-1,-1)] = {:+.4}", same.re, cross.re);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
