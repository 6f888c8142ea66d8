// Laguerre-Gaussian radial profiles and their overlaps over an annulus.

use cooper_oam::modes::{kappa, lg_radial, AnnulusGeometry, KappaTable, ModeIndex};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let geom = AnnulusGeometry::default();
    println!("annulus {}–{} μm, waist {:.3} μm", geom.r_inner, geom.r_outer, geom.waist);

    let l1 = ModeIndex::oam(1)?;
    for r in [0.0, 2.0, 4.5, 8.0] {
        println!("u(0,1)({r}) = {:.5}", lg_radial(l1, geom.waist, r));
    }

    let modes: Vec<ModeIndex> = (-2..=2).map(ModeIndex::oam).collect::<Result<_, _>>()?;
    let table = KappaTable::build(&modes, geom)?;
    for a in &modes {
        let row: Vec<String> = modes.iter().map(|b| format!("{:.4}", table.get(*a, *b).unwrap())).collect();
        println!("l = {:>2}: {}", a.l, row.join(" "));
    }

    let plane = AnnulusGeometry::full_plane(geom.waist)?;
    println!("full-plane κ(1,1) = {:.12}", kappa(l1, l1, &plane)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
