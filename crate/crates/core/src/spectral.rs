//! Two-photon spectral functions for the Cooper-pair (CP) and
//! Bogoliubov-quasiparticle (BQP) channels.
//!
//! All energies inside this module are measured in units of the
//! zero-temperature gap Δ0. The photon pair is parametrized as
//! `(U_os + d, U_os − d)`, so a single detuning `d` spans the spectrum.
//!
//! The k-sum runs over a 2D constant-density-of-states band: the electron
//! kinetic energy `ε ∈ [0, μn + cutoff]` is the integration variable, with
//! `ξn = ε − μn` and `ξp = (mn/mp) ε − μp` sharing the same |k|. Both
//! channels use one integrand per node,
//!
//! ```text
//! g(ε; d) = u²v²(n) u²v²(p) [R(d) + R(−d)]
//! R(d)    = f̄n f̄p/(d − En − Ep + iΓ) + f̄n fp/(d − En + Ep + iΓ)
//!         + fn f̄p/(d + En − Ep + iΓ) + fn fp/(d + En + Ep + iΓ)
//! ```
//!
//! The CP rate is the modulus-square of the sum, `|Σ g|²`; the BQP rate
//! lacks macroscopic phase coherence and adds incoherently, `Σ |g|²`.

use rayon::prelude::*;

use crate::bcs::{coherence_factors, fermi_complement, fermi_occupation, quasiparticle_energy, JunctionParams};
use crate::error::{Error, Result};
use crate::quadrature::trapezoid;

/// Largest relative change tolerated when the node count is doubled.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-3;
pub const MIN_NODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Trapezoid nodes over the kinetic-energy axis.
    pub nodes: usize,
    /// Integration extends to `μn + cutoff` (in units of Δ0).
    pub cutoff: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes: 4096,
            cutoff: 40.0,
        }
    }
}

impl QuadratureSpec {
    pub fn new(nodes: usize, cutoff: f64) -> Result<Self> {
        let spec = Self { nodes, cutoff };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < MIN_NODES {
            return Err(Error::invalid(
                "nodes",
                format!("need at least {MIN_NODES} quadrature nodes, got {}", self.nodes),
            ));
        }
        if !(self.cutoff > 0.0 && self.cutoff.is_finite()) {
            return Err(Error::invalid("cutoff", format!("must be > 0, got {}", self.cutoff)));
        }
        Ok(())
    }

    fn doubled(&self) -> Self {
        Self {
            nodes: 2 * self.nodes,
            cutoff: self.cutoff,
        }
    }
}

/// Detuning × reduced-temperature lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    detunings: Vec<f64>,
    temperatures: Vec<f64>,
    quadrature: QuadratureSpec,
}

impl SpectralGrid {
    pub fn new(detunings: Vec<f64>, temperatures: Vec<f64>, quadrature: QuadratureSpec) -> Result<Self> {
        if detunings.is_empty() {
            return Err(Error::invalid("detunings", "empty"));
        }
        if detunings.iter().any(|d| !d.is_finite()) {
            return Err(Error::invalid("detunings", "non-finite value"));
        }
        if detunings.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("detunings", "must be strictly increasing"));
        }
        let n = detunings.len();
        for i in 0..n / 2 {
            let (lo, hi) = (detunings[i], detunings[n - 1 - i]);
            if (lo + hi).abs() > 1e-12 * hi.abs().max(1.0) {
                return Err(Error::invalid(
                    "detunings",
                    format!("not symmetric about 0 ({lo} vs {hi})"),
                ));
            }
        }
        if n % 2 == 1 && detunings[n / 2].abs() > 1e-12 {
            return Err(Error::invalid("detunings", "odd-length grid must contain 0"));
        }
        if temperatures.is_empty() {
            return Err(Error::invalid("temperatures", "empty"));
        }
        if let Some(t) = temperatures.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
            return Err(Error::invalid(
                "temperatures",
                format!("reduced temperature {t} outside (0, 1)"),
            ));
        }
        quadrature.validate()?;
        Ok(Self {
            detunings,
            temperatures,
            quadrature,
        })
    }

    /// `points` detunings evenly spread over `[−max, max]`, exactly
    /// antisymmetric by construction.
    pub fn symmetric_detunings(max: f64, points: usize) -> Vec<f64> {
        if points == 1 {
            return vec![0.0];
        }
        let span = (points - 1) as f64;
        (0..points)
            .map(|i| {
                let k = 2.0 * i as f64 - span;
                if k == 0.0 {
                    0.0
                } else {
                    max * k / span
                }
            })
            .collect()
    }

    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    pub fn temperatures(&self) -> &[f64] {
        &self.temperatures
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quadrature
    }

    /// Spacing of the detuning lattice (the smallest step if uneven).
    pub fn detuning_step(&self) -> f64 {
        self.detunings
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Cp,
    Bqp,
}

impl Channel {
    pub fn name(&self) -> &'static str {
        match self {
            Channel::Cp => "cp",
            Channel::Bqp => "bqp",
        }
    }
}

/// Rates of one channel on a [`SpectralGrid`], indexed `(temperature,
/// detuning)`. Raw values are kept; `normalization` is the maximum of the
/// CP surface on the same grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSurface {
    pub grid: SpectralGrid,
    pub channel: Channel,
    pub values: Vec<Vec<f64>>,
    pub normalization: f64,
}

impl RateSurface {
    pub fn normalized(&self) -> Vec<Vec<f64>> {
        self.values
            .iter()
            .map(|row| row.iter().map(|v| v / self.normalization).collect())
            .collect()
    }

    pub fn normalized_row(&self, ti: usize) -> Vec<f64> {
        self.values[ti].iter().map(|v| v / self.normalization).collect()
    }

    pub fn max_normalized(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .fold(0.0f64, |m, v| m.max(*v))
            / self.normalization
    }
}

/// L/L_φ: how much more the coherent CP emission is enhanced than the
/// incoherent BQP emission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceParams {
    pub enhancement: f64,
}

impl CoherenceParams {
    /// `f64::INFINITY` is accepted and means "pure CP emission".
    pub fn new(enhancement: f64) -> Result<Self> {
        if enhancement.is_nan() || enhancement < 1.0 {
            return Err(Error::invalid(
                "enhancement",
                format!("must be >= 1, got {enhancement}"),
            ));
        }
        Ok(Self { enhancement })
    }

    /// Enhancement from ring circumference and dephasing length (same units).
    pub fn from_lengths(ring_length: f64, dephasing_length: f64) -> Result<Self> {
        if !(ring_length > 0.0 && dephasing_length > 0.0) {
            return Err(Error::invalid("lengths", "ring and dephasing lengths must be > 0"));
        }
        Self::new(ring_length / dephasing_length)
    }
}

/// Both channels at one `(d, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub cp: f64,
    pub bqp: f64,
}

impl SpectralPoint {
    pub fn channel(&self, channel: Channel) -> f64 {
        match channel {
            Channel::Cp => self.cp,
            Channel::Bqp => self.bqp,
        }
    }
}

/// Per-node data of the spectral integrand at a fixed temperature;
/// everything that does not depend on the detuning.
#[derive(Debug, Clone)]
pub struct SpectralKernel {
    gamma: f64,
    nodes: Vec<KernelNode>,
}

#[derive(Debug, Clone, Copy)]
struct KernelNode {
    /// quadrature weight × coherence product
    weight: f64,
    quad: f64,
    coherence: f64,
    e_sum: f64,
    e_diff: f64,
    occ_empty_empty: f64,
    occ_empty_full: f64,
    occ_full_empty: f64,
    occ_full_full: f64,
}

impl SpectralKernel {
    pub fn new(t: f64, jp: &JunctionParams, quad: &QuadratureSpec) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Domain {
                quantity: "reduced temperature",
                value: t,
            });
        }
        quad.validate()?;
        let delta0 = jp.sc.delta0;
        let gap = jp.sc.gap_at_reduced(t)? / delta0;
        let gap_n = gap * jp.conduction.gap_scale;
        let gap_p = gap * jp.valence.gap_scale;
        let temperature = t * jp.sc.tc;
        let mu_n = jp.conduction.quasi_fermi_level / delta0;
        let mu_p = jp.valence.quasi_fermi_level / delta0;
        let ratio = jp.mass_ratio();
        let gamma = jp.broadening() / delta0;
        if !(gamma > 0.0) {
            return Err(Error::invalid("broadening", "Γ = ħ/τ must be > 0"));
        }

        let (eps, quad_w) = trapezoid(0.0, mu_n + quad.cutoff, quad.nodes);
        let nodes = eps
            .iter()
            .zip(&quad_w)
            .map(|(&e, &w)| {
                let xi_n = e - mu_n;
                let xi_p = ratio * e - mu_p;
                let en = quasiparticle_energy(xi_n, gap_n);
                let ep = quasiparticle_energy(xi_p, gap_p);
                let coherence = uv_product(xi_n, gap_n) * uv_product(xi_p, gap_p);
                let (fn_, fbn) = (
                    fermi_occupation(en * delta0, temperature),
                    fermi_complement(en * delta0, temperature),
                );
                let (fp, fbp) = (
                    fermi_occupation(ep * delta0, temperature),
                    fermi_complement(ep * delta0, temperature),
                );
                KernelNode {
                    weight: w * coherence,
                    quad: w,
                    coherence,
                    e_sum: en + ep,
                    e_diff: en - ep,
                    occ_empty_empty: fbn * fbp,
                    occ_empty_full: fbn * fp,
                    occ_full_empty: fn_ * fbp,
                    occ_full_full: fn_ * fp,
                }
            })
            .collect();
        Ok(Self { gamma, nodes })
    }

    /// Evaluates both channels at detuning `d` (units of Δ0).
    pub fn evaluate(&self, d: f64) -> SpectralPoint {
        let g2 = self.gamma * self.gamma;
        let mut re = 0.0;
        let mut im = 0.0;
        let mut incoherent = 0.0;
        for n in &self.nodes {
            let (r1, i1) = resonances(n, d, self.gamma, g2);
            let (r2, i2) = resonances(n, -d, self.gamma, g2);
            let (gr, gi) = (r1 + r2, i1 + i2);
            re += n.weight * gr;
            im += n.weight * gi;
            let c = n.coherence;
            incoherent += n.quad * c * c * (gr * gr + gi * gi);
        }
        SpectralPoint {
            cp: re * re + im * im,
            bqp: incoherent,
        }
    }
}

/// Σ occ / (d + shift + iΓ) over the four resonance terms, as (re, im).
#[inline]
fn resonances(n: &KernelNode, d: f64, gamma: f64, g2: f64) -> (f64, f64) {
    let mut re = 0.0;
    let mut im = 0.0;
    for (occ, x) in [
        (n.occ_empty_empty, d - n.e_sum),
        (n.occ_empty_full, d - n.e_diff),
        (n.occ_full_empty, d + n.e_diff),
        (n.occ_full_full, d + n.e_sum),
    ] {
        let s = occ / (x * x + g2);
        re += s * x;
        im -= s * gamma;
    }
    (re, im)
}

/// u² v² for one band; zero when the band carries no gap.
fn uv_product(xi: f64, gap: f64) -> f64 {
    if gap == 0.0 {
        return 0.0;
    }
    let (u2, v2) = coherence_factors(xi, gap).expect("gap > 0 rules out the singular point");
    u2 * v2
}

/// Evaluates both channels with the node-doubling convergence check.
pub fn spectral_point(d: f64, t: f64, jp: &JunctionParams, quad: &QuadratureSpec) -> Result<SpectralPoint> {
    let coarse = SpectralKernel::new(t, jp, quad)?;
    let fine = SpectralKernel::new(t, jp, &quad.doubled())?;
    checked(&coarse, &fine, d)
}

fn checked(coarse: &SpectralKernel, fine: &SpectralKernel, d: f64) -> Result<SpectralPoint> {
    let a = coarse.evaluate(d);
    let b = fine.evaluate(d);
    for (what, x, y) in [("CP spectral quadrature", a.cp, b.cp), ("BQP spectral quadrature", a.bqp, b.bqp)] {
        if !(x.is_finite() && y.is_finite()) || (x - y).abs() > CONVERGENCE_TOLERANCE * y.abs() {
            return Err(Error::Convergence {
                what,
                coarse: x,
                fine: y,
            });
        }
    }
    Ok(a)
}

/// Cooper-pair two-photon rate at detuning `d` and reduced temperature `t`.
pub fn s_cp(d: f64, t: f64, jp: &JunctionParams, quad: &QuadratureSpec) -> Result<f64> {
    spectral_point(d, t, jp, quad).map(|p| p.cp)
}

/// Incoherent quasiparticle two-photon rate.
pub fn s_bqp(d: f64, t: f64, jp: &JunctionParams, quad: &QuadratureSpec) -> Result<f64> {
    spectral_point(d, t, jp, quad).map(|p| p.bqp)
}

/// Both channel surfaces over `grid`, normalized to the CP maximum.
///
/// Grid cells are evaluated on the current rayon pool; results are
/// assembled in grid order so the output does not depend on the number
/// of threads.
pub fn rate_surfaces(grid: &SpectralGrid, jp: &JunctionParams) -> Result<(RateSurface, RateSurface)> {
    let quad = grid.quadrature;
    let kernels: Vec<(SpectralKernel, SpectralKernel)> = grid
        .temperatures
        .par_iter()
        .map(|&t| {
            let coarse = SpectralKernel::new(t, jp, &quad).map_err(|e| e.at_grid_point(t, f64::NAN))?;
            let fine = SpectralKernel::new(t, jp, &quad.doubled()).map_err(|e| e.at_grid_point(t, f64::NAN))?;
            Ok((coarse, fine))
        })
        .collect::<Result<_>>()?;

    let nd = grid.detunings.len();
    let cells: Vec<SpectralPoint> = (0..grid.temperatures.len() * nd)
        .into_par_iter()
        .map(|idx| {
            let (ti, di) = (idx / nd, idx % nd);
            let (coarse, fine) = &kernels[ti];
            let d = grid.detunings[di];
            checked(coarse, fine, d).map_err(|e| e.at_grid_point(grid.temperatures[ti], d))
        })
        .collect::<Result<_>>()?;

    let mut cp = Vec::with_capacity(grid.temperatures.len());
    let mut bqp = Vec::with_capacity(grid.temperatures.len());
    for row in cells.chunks(nd) {
        cp.push(row.iter().map(|p| p.cp).collect::<Vec<_>>());
        bqp.push(row.iter().map(|p| p.bqp).collect::<Vec<_>>());
    }
    let norm = cp.iter().flatten().fold(0.0f64, |m, v| m.max(*v));
    if !(norm > 0.0) {
        return Err(Error::DegenerateMixture);
    }
    Ok((
        RateSurface {
            grid: grid.clone(),
            channel: Channel::Cp,
            values: cp,
            normalization: norm,
        },
        RateSurface {
            grid: grid.clone(),
            channel: Channel::Bqp,
            values: bqp,
            normalization: norm,
        },
    ))
}

pub fn rate_surface(grid: &SpectralGrid, jp: &JunctionParams, channel: Channel) -> Result<RateSurface> {
    let (cp, bqp) = rate_surfaces(grid, jp)?;
    Ok(match channel {
        Channel::Cp => cp,
        Channel::Bqp => bqp,
    })
}

/// Channel weights entering the density-matrix mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingRates {
    pub r_cp: f64,
    pub r_bqp: f64,
}

impl MixingRates {
    /// From bare spectral values; an infinite enhancement yields a pure
    /// CP mixture.
    pub fn from_spectral(point: SpectralPoint, coh: &CoherenceParams) -> Self {
        Self {
            r_cp: coh.enhancement * point.cp,
            r_bqp: point.bqp,
        }
    }

    /// Fraction of the emission carried by the CP channel.
    pub fn cp_fraction(&self) -> Result<f64> {
        if self.r_cp.is_infinite() {
            return Ok(1.0);
        }
        let total = self.r_cp + self.r_bqp;
        if !(total > 0.0) {
            return Err(Error::DegenerateMixture);
        }
        Ok(self.r_cp / total)
    }
}

/// `r_cp = (L/L_φ)·s_cp(d, t)`, `r_bqp = s_bqp(d, t)`.
pub fn mixing_rates(
    d: f64,
    t: f64,
    jp: &JunctionParams,
    coh: &CoherenceParams,
    quad: &QuadratureSpec,
) -> Result<MixingRates> {
    Ok(MixingRates::from_spectral(spectral_point(d, t, jp, quad)?, coh))
}
