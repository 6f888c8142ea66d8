// The coherent pair density matrix and its winding selection rule.

use cooper_oam::modes::AnnulusGeometry;
use cooper_oam::pair_state::{normalize, rho_cp, OamPairBasis, WindingNumber};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let basis = OamPairBasis::symmetric(3)?;
    let rho = normalize(&rho_cp(WindingNumber(2), &basis, &AnnulusGeometry::default())?)?;
    let populated = rho.populated_pairs();
    println!("{} pairs in the basis, populated: {:?}", basis.len(), populated);

    let block = rho.restrict(&populated)?;
    for (i, p) in block.basis().pairs().iter().enumerate() {
        let row: Vec<String> = (0..block.basis().len()).map(|j| format!("{:.4}", block.matrix()[(i, j)].re)).collect();
        println!("{p:?}: {}", row.join(" "));
    }
    println!("smallest eigenvalue {:.2e}", rho.min_eigenvalue()?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
