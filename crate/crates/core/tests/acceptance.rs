//! Pass/fail gate: one test per acceptance criterion.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fs;
use std::path::Path;
use std::time::Instant;

use cooper_oam::config::Preset;
use cooper_oam::linalg::{sqrtm_psd, CMatrix};
use cooper_oam::metrics::{fidelity_curve, fidelity_report, FidelityCurveSpec, TargetState};
use cooper_oam::modes::{kappa, lg_radial, AnnulusGeometry, ModeIndex};
use cooper_oam::pair_state::{
    mix, rho_cp, rho_superposition, rho_total, EmissionPoint, OamPairBasis, PairDensityMatrix,
    QubitState, WindingNumber,
};
use cooper_oam::spectral::{rate_surfaces, CoherenceParams, MixingRates, QuadratureSpec, RateSurface};
use cooper_oam::sweep::{run, Command, MANIFEST_NAME};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(name: &str, pass: bool, detail: String) {
    println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name}: {detail}");
}

fn fig2_surfaces() -> (RateSurface, RateSurface, f64) {
    let cfg = Preset::Fig2.load(&[]).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let start = Instant::now();
    let (cp, bqp) = pool.install(|| rate_surfaces(&cfg.grid, &cfg.junction)).unwrap();
    (cp, bqp, start.elapsed().as_secs_f64())
}

fn row_of(surface: &RateSurface, t: f64) -> Vec<f64> {
    let ti = surface
        .grid
        .temperatures()
        .iter()
        .position(|x| (x - t).abs() < 1e-12)
        .unwrap_or_else(|| panic!("temperature {t} not on the grid"));
    surface.normalized_row(ti)
}

#[test]
fn cp_peak_sits_at_twice_the_gap() {
    let (cp, _, secs) = fig2_surfaces();
    let cfg = Preset::Fig2.load(&[]).unwrap();
    let grid = &cp.grid;
    assert_eq!(grid.detunings().len(), 121);
    assert_eq!(grid.quadrature().nodes, 4096);
    let row = row_of(&cp, 0.1);
    let imax = (0..row.len()).fold(0, |b, i| if row[i] > row[b] { i } else { b });
    let peak = grid.detunings()[imax];
    let expected = 2.0 * cfg.junction.sc.gap_at_reduced(0.1).unwrap() / cfg.junction.sc.delta0;
    let step = grid.detuning_step();
    let pass = (peak.abs() - expected).abs() <= step + 1e-12 && secs < 60.0;
    report(
        "cp peak at ±2Δ(t)/Δ0, t = 0.1",
        pass,
        format!("argmax d = {peak}, expected ±{expected:.4} (step {step}), single-thread surface in {secs:.2} s"),
    );
}

/// Strict local maximum at d = 0 against both grid neighbours.
fn zero_is_local_max(row: &[f64], detunings: &[f64]) -> bool {
    let i0 = detunings.iter().position(|d| *d == 0.0).expect("grid contains d = 0");
    row[i0] > row[i0 - 1] && row[i0] > row[i0 + 1]
}

#[test]
fn zero_detuning_peak_only_when_hot() {
    let (cp, bqp, _) = fig2_surfaces();
    let d = cp.grid.detunings().to_vec();
    let hot = (zero_is_local_max(&row_of(&cp, 0.9), &d), zero_is_local_max(&row_of(&bqp, 0.9), &d));
    let mid = (zero_is_local_max(&row_of(&cp, 0.5), &d), zero_is_local_max(&row_of(&bqp, 0.5), &d));
    let i0 = d.iter().position(|x| *x == 0.0).unwrap();
    let bump = |r: &[f64]| r[i0] / r[i0 + 1] - 1.0;
    report(
        "zero-detuning local maximum at t = 0.9 and none at t = 0.5",
        hot == (true, true) && mid == (false, false),
        format!(
            "t=0.9 (cp, bqp) = {hot:?}; t=0.5 (cp, bqp) = {mid:?}, relative rise at d=0: cp {:.2e}, bqp {:.2e}",
            bump(&row_of(&cp, 0.5)),
            bump(&row_of(&bqp, 0.5))
        ),
    );
}

#[test]
fn bqp_stays_below_cp_maximum() {
    let (cp, bqp, _) = fig2_surfaces();
    let m = bqp.max_normalized();
    report(
        "bqp maximum < 1 under cp-max normalization",
        m < 1.0 && cp.max_normalized() == 1.0,
        format!("bqp max = {m:.4}"),
    );
}

#[test]
fn selection_rule_is_exact() {
    let start = Instant::now();
    let basis = OamPairBasis::symmetric(3).unwrap();
    let rho = rho_cp(WindingNumber(2), &basis, &AnnulusGeometry::default()).unwrap();
    let pairs = basis.pairs();
    let mut exact = true;
    for (i, a) in pairs.iter().enumerate() {
        for (j, b) in pairs.iter().enumerate() {
            let inside = a.0 + a.1 == 2 && b.0 + b.1 == 2;
            let z = rho.matrix()[(i, j)];
            if !inside && z != Complex64::new(0.0, 0.0) {
                exact = false;
            }
            if inside && z.re <= 0.0 {
                exact = false;
            }
        }
    }
    let populated = rho.populated_pairs();
    let expected = vec![(-1, 3), (0, 2), (1, 1), (2, 0), (3, -1)];
    let secs = start.elapsed().as_secs_f64();
    report(
        "ls = 2, l_max = 3 selection rule",
        exact && populated == expected && secs < 1.0,
        format!("populated {populated:?}, off-sector entries exactly zero: {exact}, {secs:.3} s"),
    );
}

#[test]
fn diagonal_weight_grows_with_temperature() {
    let jp = cooper_oam::bcs::JunctionParams::gaas_nb();
    let basis = OamPairBasis::symmetric(3).unwrap();
    let geom = AnnulusGeometry::default();
    let weight = |t: f64, enh: f64| {
        let point = EmissionPoint {
            detuning: 5.0,
            t,
            junction: &jp,
            coherence: CoherenceParams::new(enh).unwrap(),
            quadrature: QuadratureSpec::default(),
        };
        rho_total(WindingNumber(2), &basis, &geom, &point)
            .unwrap()
            .diagonal_weight_outside(&[2])
    };
    let gap10 = weight(0.9, 10.0) - weight(0.5, 10.0);
    let gap100 = weight(0.9, 100.0) - weight(0.5, 100.0);
    report(
        "incoherent diagonal weight rises with t and the rise shrinks with enhancement",
        gap10 > 0.0 && gap100.abs() < gap10,
        format!("w(0.9)-w(0.5): enh 10 → {gap10:.5}, enh 100 → {gap100:.5}"),
    );
}

#[test]
fn qubit_superposition_transfer() {
    let basis = OamPairBasis::symmetric(2).unwrap();
    let geom = AnnulusGeometry::default();
    let ls = WindingNumber(2);
    let cp = rho_cp(ls, &basis, &geom).unwrap();
    let collapsed = rho_superposition(&QubitState::clockwise(), ls, &basis, &geom).unwrap();
    let same = collapsed == cp;

    let s = FRAC_1_SQRT_2;
    let q = QubitState::new(Complex64::new(s, 0.0), Complex64::new(0.0, s)).unwrap();
    let plus = rho_superposition(&q, ls, &basis, &geom).unwrap();
    let minus = rho_superposition(&q.flipped(), ls, &basis, &geom).unwrap();
    let pairs = basis.pairs();
    let mut flips_only_cross = true;
    for (i, a) in pairs.iter().enumerate() {
        for (j, b) in pairs.iter().enumerate() {
            let (wa, wb) = (a.0 + a.1, b.0 + b.1);
            let cross = (wa == 2 && wb == -2) || (wa == -2 && wb == 2);
            let (x, y) = (plus.matrix()[(i, j)], minus.matrix()[(i, j)]);
            let ok = if cross { y == -x && x != Complex64::new(0.0, 0.0) } else { y == x };
            flips_only_cross &= ok;
        }
    }
    let mut worst_phase = 0.0f64;
    for theta in [0.3, 1.0, 2.5, -1.7] {
        let r = rho_superposition(&q.with_global_phase(theta), ls, &basis, &geom).unwrap();
        worst_phase = worst_phase.max((r.matrix() - plus.matrix()).max_abs());
    }
    report(
        "qubit transfer: collapse, sign flip, global phase",
        same && flips_only_cross && worst_phase <= 1e-12,
        format!("a=1,b=0 equals cp: {same}; b→-b flips cross blocks only: {flips_only_cross}; phase deviation {worst_phase:.1e}"),
    );
}

#[test]
fn fidelity_trends() {
    let basis = OamPairBasis::from_labels(&[0, 1]).unwrap();
    let target = TargetState::bell(&basis, (1, 0), (0, 1)).unwrap();
    let jp = cooper_oam::bcs::JunctionParams::gaas_nb();
    let spec = FidelityCurveSpec {
        ls: WindingNumber(1),
        basis: &basis,
        geometry: AnnulusGeometry::default(),
        detuning: 5.0,
        junction: &jp,
        quadrature: QuadratureSpec::default(),
        target: &target,
    };
    let temps: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
    let table = fidelity_curve(&temps, &[10.0, 100.0], &spec).unwrap();
    let ordered = table.values.iter().all(|r| r[1] >= r[0]);

    let sub = fidelity_curve(&[0.3, 0.5, 0.7, 0.9], &[10.0], &spec).unwrap().column(0);
    let decreasing = sub.windows(2).all(|w| w[1] < w[0]);
    let limit = fidelity_curve(&[0.1], &[1e6], &spec).unwrap().values[0][0];
    report(
        "fidelity: enhancement ordering, temperature decay, large-enhancement limit",
        ordered && decreasing && limit > 0.999,
        format!("F(100) ≥ F(10) everywhere: {ordered}; F(enh 10) over 0.3..0.9 = {sub:.5?}; F(t=0.1, enh 1e6) = {limit:.7}"),
    );
}

fn random_density(n: usize, rank: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(n, |_, j| {
        if j < rank {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale(1.0 / tr)
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Midpoint sum with 10⁶ nodes.
fn brute_kappa(a: ModeIndex, b: ModeIndex, g: &AnnulusGeometry) -> f64 {
    let n = 1_000_000;
    let h = (g.r_outer - g.r_inner) / n as f64;
    (0..n)
        .map(|i| {
            let r = g.r_inner + h * (i as f64 + 0.5);
            lg_radial(a, g.waist, r) * lg_radial(b, g.waist, r) * r
        })
        .sum::<f64>()
        * h
}

#[test]
fn numerical_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    // Jozsa vs shortcut on 500 random pairs
    let basis = OamPairBasis::symmetric(1).unwrap();
    let n = basis.len();
    let mut worst_jozsa = 0.0f64;
    for k in 0..500 {
        let rank = 1 + k % n;
        let rho = PairDensityMatrix::new(basis.clone(), random_density(n, rank, &mut rng)).unwrap();
        let target = TargetState::new(basis.clone(), random_unit(n, &mut rng), "random").unwrap();
        let r = fidelity_report(&rho, &target).unwrap();
        worst_jozsa = worst_jozsa.max((r.jozsa - r.shortcut).abs());
    }

    // sqrtm round trip
    let mut worst_sqrt = 0.0f64;
    for k in 0..100 {
        let dim = 2 + k % 20;
        let a = random_density(dim, 1 + k % dim, &mut rng);
        let s = sqrtm_psd(&a).unwrap();
        worst_sqrt = worst_sqrt.max((&(&s * &s) - &a).max_abs() / a.max_abs());
    }

    // adaptive κ vs brute force
    let mut worst_kappa = 0.0f64;
    for _ in 0..20 {
        let a = ModeIndex::new(rng.gen_range(0..=2), rng.gen_range(-4..=4)).unwrap();
        let b = ModeIndex::new(0, rng.gen_range(-4..=4)).unwrap();
        let ri = rng.gen_range(0.0..5.0);
        let g = AnnulusGeometry::new(ri, ri + rng.gen_range(0.5..4.0), rng.gen_range(1.0..6.0)).unwrap();
        let exact = brute_kappa(a, b, &g);
        let adaptive = kappa(a, b, &g).unwrap();
        worst_kappa = worst_kappa.max(((adaptive - exact) / exact).abs());
    }

    // density-matrix fuzzing
    let mut violations = 0;
    let mut cases = 0;
    for _ in 0..1000 {
        let l_max = rng.gen_range(1..=3);
        let basis = OamPairBasis::symmetric(l_max).unwrap();
        let ls = WindingNumber(rng.gen_range(-l_max..=l_max));
        let ri = rng.gen_range(0.0..6.0);
        let geom = AnnulusGeometry::new(ri, ri + rng.gen_range(0.2..4.0), rng.gen_range(0.5..8.0)).unwrap();
        let table = basis.kappa_table(&geom).unwrap();
        let (a, b) = (rng.gen_range(0.0..1.0f64), rng.gen_range(0.0..std::f64::consts::TAU));
        let q = QubitState::from_polar((a.sqrt(), 0.0), ((1.0 - a).sqrt(), b)).unwrap();
        let coherent = cooper_oam::pair_state::rho_superposition_with(&q, ls, &basis, &table).unwrap();
        let bqp = cooper_oam::pair_state::rho_bqp_with(&basis, &table).unwrap();
        let rates = MixingRates {
            r_cp: rng.gen_range(0.0..1.0) * 10f64.powi(rng.gen_range(-3..4)),
            r_bqp: rng.gen_range(0.0..1.0),
        };
        let rho = mix(&coherent, &bqp, &rates).unwrap();
        cases += 1;
        let herm = rho.matrix().hermitian_deviation() <= 1e-12;
        let trace = (rho.trace() - 1.0).abs() <= 1e-12;
        let psd = rho.min_eigenvalue().unwrap() >= -1e-10;
        if !(herm && trace && psd) {
            violations += 1;
        }
    }

    report(
        "numerical oracles",
        worst_jozsa < 1e-9 && worst_sqrt < 1e-9 && worst_kappa < 1e-8 && violations == 0 && cases >= 1000,
        format!(
            "jozsa-shortcut {worst_jozsa:.1e} (500 cases); sqrtm {worst_sqrt:.1e}; κ vs brute force {worst_kappa:.1e} (20 cases); {violations}/{cases} matrices violate Hermitian/PSD/trace"
        ),
    );
}

fn read_outputs(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != MANIFEST_NAME)
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

#[test]
fn thread_count_does_not_change_outputs() {
    let root = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in [1usize, 8] {
        let dir = root.path().join(format!("t{threads}"));
        let mut cfg = Preset::Fig3.load(&[]).unwrap();
        cfg.output.dir = dir.clone();
        cfg.output.threads = threads;
        for cmd in [Command::Rates, Command::Dm, Command::Fidelity] {
            run(cmd, &cfg).unwrap();
        }
        outputs.push(read_outputs(&dir));
    }
    let data_files = outputs[0].keys().filter(|k| k.ends_with(".csv") || k.ends_with(".json")).count();
    report(
        "fig3 outputs identical at 1 and 8 threads",
        outputs[0] == outputs[1] && data_files > 0,
        format!("{} files compared ({data_files} csv/json)", outputs[0].len()),
    );
}
