// Loading a built-in preset with overrides and running a sweep into a
// scratch directory.

use cooper_oam::config::Preset;
use cooper_oam::sweep::{run, Command};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("cooper-oam-example-{}", std::process::id()));
    let overrides = [
        "grid.temperatures=[0.5, 0.9]".to_string(),
        format!("output.dir=\"{}\"", dir.display()),
    ];
    let cfg = Preset::Fig5.load(&overrides)?;
    println!("defaults filled in: {}", cfg.defaults.join(", "));

    let manifest = run(Command::Fidelity, &cfg)?;
    for o in &manifest.outputs {
        println!("{:<14} {:>6} bytes  sha256 {}", o.file, o.bytes, &o.sha256[..16]);
    }
    print!("{}", std::fs::read_to_string(dir.join("fidelity.csv"))?);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
