// BCS gap, quasiparticle energies and coherence factors for the
// built-in GaAs/Nb junction.

use cooper_oam::bcs::{coherence_factors, fermi_occupation, quasiparticle_energy, JunctionParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let jp = JunctionParams::gaas_nb();
    println!("Δ0 = {} meV, Tc = {} K, Γ = {:.4} meV", jp.sc.delta0, jp.sc.tc, jp.broadening());
    println!("μn = {:.3} meV, μp = {:.3} meV", jp.conduction.quasi_fermi_level, jp.valence.quasi_fermi_level);

    for t in [0.1, 0.5, 0.7, 0.9, 0.99] {
        let gap = jp.sc.gap_at_reduced(t)?;
        let e = quasiparticle_energy(0.0, gap);
        let f = fermi_occupation(e, t * jp.sc.tc);
        println!("T/Tc = {t:<4}  Δ = {gap:.4} meV  f(E_min) = {f:.3e}");
    }

    let gap = jp.sc.gap_at_reduced(0.1)?;
    for xi in [-2.0, -0.5, 0.0, 0.5, 2.0] {
        let (u2, v2) = coherence_factors(xi * gap, gap)?;
        println!("ξ/Δ = {xi:>4}  u² = {u2:.4}  v² = {v2:.4}  u²v² = {:.4}", u2 * v2);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
