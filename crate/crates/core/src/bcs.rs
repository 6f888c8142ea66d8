//! BCS scalar primitives: temperature-dependent gap, quasiparticle
//! dispersion, coherence factors and Fermi occupations.
//!
//! Units throughout: energies in meV, temperatures in K, times in fs.

use crate::error::{Error, Result};

/// Reduced Planck constant in meV·fs (CODATA 2018).
pub const HBAR_MEV_FS: f64 = 658.211_956_9;
/// Boltzmann constant in meV/K (CODATA 2018).
pub const BOLTZMANN_MEV_PER_K: f64 = 0.086_173_332_62;

const HBAR_SI: f64 = 1.054_571_817e-34;
const ELECTRON_MASS_KG: f64 = 9.109_383_701_5e-31;
const JOULE_PER_MEV: f64 = 1.602_176_634e-22;

/// Slope inside the gap-narrowing law `Δ0 tanh(1.74 √(Tc/T − 1))`.
const GAP_LAW_SLOPE: f64 = 1.74;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperconductorParams {
    /// Zero-temperature induced gap Δ0 (meV).
    pub delta0: f64,
    /// Critical temperature (K).
    pub tc: f64,
}

impl SuperconductorParams {
    pub fn new(delta0: f64, tc: f64) -> Result<Self> {
        if !(delta0 > 0.0 && delta0.is_finite()) {
            return Err(Error::invalid("delta0", format!("must be > 0, got {delta0}")));
        }
        if !(tc > 0.0 && tc.is_finite()) {
            return Err(Error::invalid("tc", format!("must be > 0, got {tc}")));
        }
        Ok(Self { delta0, tc })
    }

    /// Gap at a reduced temperature `t = T / Tc`.
    pub fn gap_at_reduced(&self, t: f64) -> Result<f64> {
        gap_at_temperature(self, t * self.tc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BandLabel {
    Conduction,
    Valence,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandParams {
    /// Effective mass in units of the free-electron mass.
    pub effective_mass: f64,
    /// Quasi-Fermi level measured from the band edge (meV).
    pub quasi_fermi_level: f64,
    pub label: BandLabel,
    /// Multiplier on the shared gap for this band; 1 unless a per-band
    /// override is requested.
    pub gap_scale: f64,
}

impl BandParams {
    pub fn new(label: BandLabel, effective_mass: f64, quasi_fermi_level: f64) -> Result<Self> {
        if !(effective_mass > 0.0 && effective_mass.is_finite()) {
            return Err(Error::invalid(
                "effective_mass",
                format!("must be > 0, got {effective_mass}"),
            ));
        }
        if !(quasi_fermi_level > 0.0 && quasi_fermi_level.is_finite()) {
            return Err(Error::invalid(
                "quasi_fermi_level",
                format!("must be > 0, got {quasi_fermi_level}"),
            ));
        }
        Ok(Self {
            effective_mass,
            quasi_fermi_level,
            label,
            gap_scale: 1.0,
        })
    }

    /// Band whose quasi-Fermi level follows from a 2D carrier density (cm⁻²).
    pub fn from_density(label: BandLabel, effective_mass: f64, density_cm2: f64) -> Result<Self> {
        if !(density_cm2 > 0.0 && density_cm2.is_finite()) {
            return Err(Error::invalid("density", format!("must be > 0, got {density_cm2}")));
        }
        if !(effective_mass > 0.0 && effective_mass.is_finite()) {
            return Err(Error::invalid(
                "effective_mass",
                format!("must be > 0, got {effective_mass}"),
            ));
        }
        Self::new(
            label,
            effective_mass,
            fermi_level_from_density(density_cm2, effective_mass),
        )
    }

    pub fn with_gap_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(Error::invalid("gap_scale", format!("must be >= 0, got {scale}")));
        }
        self.gap_scale = scale;
        Ok(self)
    }
}

/// Everything the spectral formulas need about the p-n junction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionParams {
    pub sc: SuperconductorParams,
    pub conduction: BandParams,
    pub valence: BandParams,
    /// Dephasing time τ (fs).
    pub dephasing_time: f64,
    /// Offset between the quasi-Fermi levels, U_os (meV).
    pub offset_energy: f64,
}

impl JunctionParams {
    pub fn new(
        sc: SuperconductorParams,
        conduction: BandParams,
        valence: BandParams,
        dephasing_time: f64,
        offset_energy: f64,
    ) -> Result<Self> {
        if !(dephasing_time > 0.0 && dephasing_time.is_finite()) {
            return Err(Error::invalid(
                "dephasing_time",
                format!("must be finite and > 0, got {dephasing_time}"),
            ));
        }
        if !(offset_energy > 0.0 && offset_energy.is_finite()) {
            return Err(Error::invalid(
                "offset_energy",
                format!("must be > 0, got {offset_energy}"),
            ));
        }
        if conduction.label != BandLabel::Conduction || valence.label != BandLabel::Valence {
            return Err(Error::invalid("band label", "expected (conduction, valence)"));
        }
        Ok(Self {
            sc,
            conduction,
            valence,
            dephasing_time,
            offset_energy,
        })
    }

    /// Builds the junction with `U_os = E_gap + |μn| + |μp|`.
    pub fn from_band_gap(
        sc: SuperconductorParams,
        conduction: BandParams,
        valence: BandParams,
        dephasing_time: f64,
        band_gap: f64,
    ) -> Result<Self> {
        if !(band_gap >= 0.0 && band_gap.is_finite()) {
            return Err(Error::invalid("band_gap", format!("must be >= 0, got {band_gap}")));
        }
        let offset = band_gap + conduction.quasi_fermi_level.abs() + valence.quasi_fermi_level.abs();
        Self::new(sc, conduction, valence, dephasing_time, offset)
    }

    /// Illustrative GaAs quantum well with Nb contacts.
    ///
    /// Δ0 = 1.4 meV, Tc = 9.2 K, m_n = 0.067, in-plane heavy-hole mass
    /// m_p = 0.11, both carrier densities 10¹² cm⁻², τ = 1000 fs,
    /// E_gap = 1519 meV.
    pub fn gaas_nb() -> Self {
        MaterialPreset::GaAsNb.junction()
    }

    /// Lorentzian broadening Γ = ħ/τ (meV).
    pub fn broadening(&self) -> f64 {
        HBAR_MEV_FS / self.dephasing_time
    }

    /// Ratio m_n / m_p used to map the electron kinetic energy onto the
    /// valence band at equal |k|.
    pub fn mass_ratio(&self) -> f64 {
        self.conduction.effective_mass / self.valence.effective_mass
    }
}

/// Named material stacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaterialPreset {
    GaAsNb,
}

impl MaterialPreset {
    pub const GAAS_NB_NAME: &'static str = "GaAs-Nb";

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            Self::GAAS_NB_NAME => Some(Self::GaAsNb),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::GaAsNb => Self::GAAS_NB_NAME,
        }
    }

    pub fn defaults(&self) -> MaterialDefaults {
        match self {
            Self::GaAsNb => MaterialDefaults {
                delta0: 1.4,
                tc: 9.2,
                electron_mass: 0.067,
                hole_mass: 0.11,
                electron_density: 1e12,
                hole_density: 1e12,
                dephasing_time: 1000.0,
                band_gap: 1519.0,
            },
        }
    }

    pub fn junction(&self) -> JunctionParams {
        self.defaults()
            .junction()
            .expect("built-in material preset is valid")
    }
}

/// Raw numbers behind a material preset; every field can be overridden
/// before building a [`JunctionParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialDefaults {
    pub delta0: f64,
    pub tc: f64,
    pub electron_mass: f64,
    pub hole_mass: f64,
    /// cm⁻²
    pub electron_density: f64,
    /// cm⁻²
    pub hole_density: f64,
    /// fs
    pub dephasing_time: f64,
    /// meV
    pub band_gap: f64,
}

impl MaterialDefaults {
    pub fn junction(&self) -> Result<JunctionParams> {
        let sc = SuperconductorParams::new(self.delta0, self.tc)?;
        let conduction =
            BandParams::from_density(BandLabel::Conduction, self.electron_mass, self.electron_density)?;
        let valence = BandParams::from_density(BandLabel::Valence, self.hole_mass, self.hole_density)?;
        JunctionParams::from_band_gap(sc, conduction, valence, self.dephasing_time, self.band_gap)
    }
}

/// Δ(T) = Δ0 tanh(1.74 √(Tc/T − 1)), with the analytic limits Δ0 at
/// T = 0 and 0 for T ≥ Tc.
pub fn gap_at_temperature(sc: &SuperconductorParams, t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain {
            quantity: "temperature",
            value: t,
        });
    }
    if t == 0.0 {
        return Ok(sc.delta0);
    }
    if t >= sc.tc {
        return Ok(0.0);
    }
    Ok(sc.delta0 * (GAP_LAW_SLOPE * (sc.tc / t - 1.0).sqrt()).tanh())
}

/// E = √(Δ² + ξ²).
pub fn quasiparticle_energy(xi: f64, delta: f64) -> f64 {
    xi.hypot(delta)
}

/// Returns `(u², v²) = ((1 + ξ/E)/2, (1 − ξ/E)/2)`.
///
/// The smaller of the two is evaluated as `Δ² / (2E(E + |ξ|))` so the
/// tails far from the Fermi level keep full relative precision.
pub fn coherence_factors(xi: f64, delta: f64) -> Result<(f64, f64)> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::Domain {
            quantity: "gap",
            value: delta,
        });
    }
    let e = quasiparticle_energy(xi, delta);
    if e == 0.0 {
        return Err(Error::SingularPoint);
    }
    let small = delta * delta / (2.0 * e * (e + xi.abs()));
    if xi >= 0.0 {
        Ok((1.0 - small, small))
    } else {
        Ok((small, 1.0 - small))
    }
}

/// Fermi–Dirac occupation 1/(1 + e^{E/k_B T}); the step function at T = 0.
pub fn fermi_occupation(e: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return if e < 0.0 {
            1.0
        } else if e > 0.0 {
            0.0
        } else {
            0.5
        };
    }
    let x = e / (BOLTZMANN_MEV_PER_K * t);
    if x >= 0.0 {
        let z = (-x).exp();
        z / (1.0 + z)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// 1 − f(E, T), evaluated without cancellation.
pub fn fermi_complement(e: f64, t: f64) -> f64 {
    fermi_occupation(-e, t)
}

/// Quasi-Fermi level (meV) of a spin-degenerate 2D band holding `n`
/// carriers per cm²: μ = π ħ² n / (m m_e).
pub fn fermi_level_from_density(n_cm2: f64, effective_mass: f64) -> f64 {
    let n_m2 = n_cm2 * 1e4;
    std::f64::consts::PI * HBAR_SI * HBAR_SI * n_m2 / (effective_mass * ELECTRON_MASS_KG) / JOULE_PER_MEV
}
