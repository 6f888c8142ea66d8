// Fidelity of the emitted state to (|1,0⟩ + |0,1⟩)/√2 versus temperature.

use cooper_oam::bcs::JunctionParams;
use cooper_oam::metrics::{fidelity_curve, FidelityCurveSpec, TargetState};
use cooper_oam::modes::AnnulusGeometry;
use cooper_oam::pair_state::{OamPairBasis, WindingNumber};
use cooper_oam::spectral::QuadratureSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let basis = OamPairBasis::from_labels(&[0, 1])?;
    let target = TargetState::bell(&basis, (1, 0), (0, 1))?;
    let jp = JunctionParams::gaas_nb();
    let spec = FidelityCurveSpec {
        ls: WindingNumber(1),
        basis: &basis,
        geometry: AnnulusGeometry::default(),
        detuning: 5.0,
        junction: &jp,
        quadrature: QuadratureSpec::default(),
        target: &target,
    };
    let temps = [0.1, 0.3, 0.5, 0.7, 0.9];
    let enh = [10.0, 30.0, 100.0];
    let table = fidelity_curve(&temps, &enh, &spec)?;
    println!("T/Tc   {}", enh.map(|e| format!("{e:>8}")).join(""));
    for (t, row) in temps.iter().zip(&table.values) {
        println!("{t:<6} {}", row.iter().map(|f| format!("{f:>8.5}")).collect::<String>());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
