// A detuning × temperature rate surface with the CP peak tracked
// against 2Δ(T)/Δ0.

use cooper_oam::bcs::JunctionParams;
use cooper_oam::spectral::{rate_surfaces, QuadratureSpec, SpectralGrid};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let jp = JunctionParams::gaas_nb();
    let temps = vec![0.1, 0.3, 0.5, 0.7, 0.9];
    let grid = SpectralGrid::new(SpectralGrid::symmetric_detunings(6.0, 121), temps, QuadratureSpec::default())?;
    let (cp, bqp) = rate_surfaces(&grid, &jp)?;

    for (ti, t) in grid.temperatures().iter().enumerate() {
        let row = cp.normalized_row(ti);
        let (imax, vmax) = row
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |best, (i, v)| if *v > best.1 { (i, *v) } else { best });
        let two_gap = 2.0 * jp.sc.gap_at_reduced(*t)? / jp.sc.delta0;
        println!(
            "T/Tc = {t}: CP peak at |d| = {:.1} (2Δ/Δ0 = {two_gap:.3}), height {vmax:.3}",
            grid.detunings()[imax].abs()
        );
    }
    println!("BQP maximum relative to CP maximum: {:.3}", bqp.max_normalized());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
