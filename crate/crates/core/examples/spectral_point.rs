// Coherent and incoherent two-photon rates at a few detunings, and how
// the enhancement factor reweights them.

use cooper_oam::bcs::JunctionParams;
use cooper_oam::spectral::{mixing_rates, spectral_point, CoherenceParams, QuadratureSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let jp = JunctionParams::gaas_nb();
    let quad = QuadratureSpec::default();

    for t in [0.1, 0.9] {
        println!("T/Tc = {t}");
        for d in [0.0, 1.0, 2.0, 3.0, 5.0] {
            let p = spectral_point(d, t, &jp, &quad)?;
            println!("  d = {d}  s_cp = {:.4e}  s_bqp = {:.4e}", p.cp, p.bqp);
        }
    }

    let coh = CoherenceParams::from_lengths(10.0, 0.1)?;
    let r = mixing_rates(5.0, 0.5, &jp, &coh, &quad)?;
    println!("L/Lφ = {}: CP fraction at d = 5, T = 0.5 Tc is {:.4}", coh.enhancement, r.cp_fraction()?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
