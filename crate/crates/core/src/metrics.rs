//! Fidelity of emitted pair states against pure targets.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bcs::JunctionParams;
use crate::error::{Error, Result};
use crate::linalg::{sqrtm_psd, CMatrix};
use crate::modes::{AnnulusGeometry, KappaTable, ModeIndex};
use crate::pair_state::{mix, rho_bqp_with, rho_cp_with, OamPairBasis, PairDensityMatrix, PairLabel, QubitState, WindingNumber, TRACE_TOLERANCE};
use crate::spectral::{spectral_point, CoherenceParams, MixingRates, QuadratureSpec};

/// Largest tolerated gap between the Jozsa value and `⟨ψ|ρ|ψ⟩`.
pub const SHORTCUT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TargetState {
    basis: OamPairBasis,
    coefficients: Vec<Complex64>,
    pub description: String,
}

impl TargetState {
    pub fn new(basis: OamPairBasis, coefficients: Vec<Complex64>, description: impl Into<String>) -> Result<Self> {
        if coefficients.len() != basis.len() {
            return Err(Error::Shape(format!(
                "{} coefficients for a basis of {} pairs",
                coefficients.len(),
                basis.len()
            )));
        }
        let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("target", format!("norm² = {norm}, expected 1")));
        }
        Ok(Self {
            basis,
            coefficients,
            description: description.into(),
        })
    }

    /// `(|p⟩ + |q⟩)/√2`
    pub fn bell(basis: &OamPairBasis, p: PairLabel, q: PairLabel) -> Result<Self> {
        if p == q {
            return Err(Error::invalid("target", "Bell state needs two distinct pairs"));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut c = vec![Complex64::new(0.0, 0.0); basis.len()];
        for pair in [p, q] {
            let i = basis
                .index_of(pair)
                .ok_or_else(|| Error::invalid("target", format!("{pair:?} not in basis")))?;
            c[i] = Complex64::new(s, 0.0);
        }
        Self::new(basis.clone(), c, format!("bell {p:?}+{q:?}"))
    }

    /// Normalized `a·c₊ + b·c₋` built from the overlap vectors of the
    /// `±ls` sectors; the pure state the CP channel would emit.
    pub fn ideal_superposition(q: &QubitState, ls: WindingNumber, basis: &OamPairBasis, table: &KappaTable) -> Result<Self> {
        let amp = |w: i32| -> Vec<f64> {
            basis
                .pairs()
                .iter()
                .map(|&(a, b)| {
                    if a + b == w {
                        table.get(ModeIndex { m: 0, l: a }, ModeIndex { m: 0, l: b }).unwrap_or(0.0)
                    } else {
                        0.0
                    }
                })
                .collect()
        };
        let (plus, minus) = (amp(ls.0), amp(-ls.0));
        let v: Vec<Complex64> = plus.iter().zip(&minus).map(|(p, m)| q.a * p + q.b * m).collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::EmptySector { winding: ls.0 });
        }
        Self::new(
            basis.clone(),
            v.iter().map(|c| c / norm).collect(),
            format!("ideal ls={} superposition", ls.0),
        )
    }

    pub fn basis(&self) -> &OamPairBasis {
        &self.basis
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn projector(&self) -> CMatrix {
        CMatrix::outer(&self.coefficients)
    }
}

/// Fidelities from the general formula and from the pure-target shortcut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport {
    pub jozsa: f64,
    pub shortcut: f64,
}

/// Both evaluations without the agreement check.
pub fn fidelity_report(rho: &PairDensityMatrix, target: &TargetState) -> Result<FidelityReport> {
    if rho.basis() != target.basis() {
        return Err(Error::BasisMismatch);
    }
    let tr = rho.trace();
    if (tr - 1.0).abs() > TRACE_TOLERANCE {
        return Err(Error::TraceNotUnit(tr));
    }
    let s = sqrtm_psd(&target.projector())?;
    let m = &(&s * rho.matrix()) * &s;
    // Symmetrize away rounding so the eigensolver sees an exact Hermitian.
    let m = (&m + &m.adjoint()).scale(0.5);
    let root_trace = sqrtm_psd(&m)?.trace().re;
    Ok(FidelityReport {
        jozsa: root_trace * root_trace,
        shortcut: rho.matrix().expectation(target.coefficients()).re,
    })
}

/// `F = (Tr √(√σ ρ √σ))²` with `σ = |ψ⟩⟨ψ|`.
pub fn fidelity(rho: &PairDensityMatrix, target: &TargetState) -> Result<f64> {
    let r = fidelity_report(rho, target)?;
    if (r.jozsa - r.shortcut).abs() > SHORTCUT_TOLERANCE {
        return Err(Error::Internal(format!(
            "fidelity {} disagrees with the pure-state value {}",
            r.jozsa, r.shortcut
        )));
    }
    Ok(r.jozsa)
}

/// Everything except the (t, enhancement) axes.
#[derive(Debug, Clone)]
pub struct FidelityCurveSpec<'a> {
    pub ls: WindingNumber,
    pub basis: &'a OamPairBasis,
    pub geometry: AnnulusGeometry,
    pub detuning: f64,
    pub junction: &'a JunctionParams,
    pub quadrature: QuadratureSpec,
    pub target: &'a TargetState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityTable {
    pub temperatures: Vec<f64>,
    pub enhancements: Vec<f64>,
    /// `values[ti][ei]`
    pub values: Vec<Vec<f64>>,
}

impl FidelityTable {
    pub fn column(&self, ei: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[ei]).collect()
    }
}

/// Fidelity of the mixed emitted state on a temperature × enhancement
/// lattice.
pub fn fidelity_curve(temps: &[f64], enhancements: &[f64], spec: &FidelityCurveSpec) -> Result<FidelityTable> {
    let coherences = enhancements
        .iter()
        .map(|&e| CoherenceParams::new(e))
        .collect::<Result<Vec<_>>>()?;
    let table = spec.basis.kappa_table(&spec.geometry)?;
    let cp = rho_cp_with(spec.ls, spec.basis, &table)?;
    let bqp = rho_bqp_with(spec.basis, &table)?;

    let spectra = temps
        .par_iter()
        .map(|&t| {
            spectral_point(spec.detuning, t, spec.junction, &spec.quadrature)
                .map_err(|e| e.at_grid_point(t, spec.detuning))
        })
        .collect::<Result<Vec<_>>>()?;

    let ne = enhancements.len();
    let flat = (0..temps.len() * ne)
        .into_par_iter()
        .map(|idx| {
            let (ti, ei) = (idx / ne, idx % ne);
            let rates = MixingRates::from_spectral(spectra[ti], &coherences[ei]);
            mix(&cp, &bqp, &rates)
                .and_then(|rho| fidelity(&rho, spec.target))
                .map_err(|e| e.at_sweep_point(temps[ti], enhancements[ei]))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(FidelityTable {
        temperatures: temps.to_vec(),
        enhancements: enhancements.to_vec(),
        values: flat.chunks(ne.max(1)).map(|c| c.to_vec()).collect(),
    })
}
