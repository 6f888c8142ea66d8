// CP/BQP mixtures at two temperatures and two enhancement factors.

use cooper_oam::bcs::JunctionParams;
use cooper_oam::modes::AnnulusGeometry;
use cooper_oam::pair_state::{rho_total, EmissionPoint, OamPairBasis, WindingNumber};
use cooper_oam::spectral::{CoherenceParams, QuadratureSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let jp = JunctionParams::gaas_nb();
    let basis = OamPairBasis::symmetric(3)?;
    let geom = AnnulusGeometry::default();
    for enh in [10.0, 100.0] {
        for t in [0.5, 0.9] {
            let point = EmissionPoint {
                detuning: 5.0,
                t,
                junction: &jp,
                coherence: CoherenceParams::new(enh)?,
                quadrature: QuadratureSpec::default(),
            };
            let rho = rho_total(WindingNumber(2), &basis, &geom, &point)?;
            rho.check_state()?;
            println!(
                "L/Lφ = {enh:>5}, T/Tc = {t}: weight outside the coherent sector {:.5}",
                rho.diagonal_weight_outside(&[2])
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
