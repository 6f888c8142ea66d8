//! Laguerre-Gaussian radial profiles and their overlaps over the annular
//! emitting region.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

pub const MAX_RADIAL_INDEX: u32 = 8;
pub const MAX_OAM: i32 = 12;
/// Relative tolerance of the overlap quadrature.
pub const KAPPA_TOLERANCE: f64 = 1e-10;

/// `e^{-38} ≈ 3e-17`: the Gaussian envelope is negligible beyond
/// `w·√38`, widened a little for the polynomial prefactor of high modes.
fn full_plane_extent(waist: f64, a: ModeIndex, b: ModeIndex) -> f64 {
    let growth = (a.l.unsigned_abs() + b.l.unsigned_abs() + 2 * (a.m + b.m)) as f64;
    waist * (38.0 + growth).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    /// radial node count
    pub m: u32,
    /// OAM quantum number
    pub l: i32,
}

impl ModeIndex {
    pub fn new(m: u32, l: i32) -> Result<Self> {
        if m > MAX_RADIAL_INDEX {
            return Err(Error::invalid("m", format!("radial index {m} exceeds {MAX_RADIAL_INDEX}")));
        }
        if l.abs() > MAX_OAM {
            return Err(Error::invalid("l", format!("|l| = {} exceeds {MAX_OAM}", l.abs())));
        }
        Ok(Self { m, l })
    }

    /// Mode without radial nodes.
    pub fn oam(l: i32) -> Result<Self> {
        Self::new(0, l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusGeometry {
    pub r_inner: f64,
    /// `f64::INFINITY` integrates over the whole plane.
    pub r_outer: f64,
    pub waist: f64,
}

impl AnnulusGeometry {
    pub fn new(r_inner: f64, r_outer: f64, waist: f64) -> Result<Self> {
        if !(r_inner >= 0.0 && r_inner.is_finite()) {
            return Err(Error::invalid("r_inner", format!("must be finite and >= 0, got {r_inner}")));
        }
        if r_outer.is_nan() || r_outer < r_inner {
            return Err(Error::invalid(
                "r_outer",
                format!("must be >= r_inner ({r_inner}), got {r_outer}"),
            ));
        }
        if !(waist > 0.0 && waist.is_finite()) {
            return Err(Error::invalid("waist", format!("must be > 0, got {waist}")));
        }
        Ok(Self {
            r_inner,
            r_outer,
            waist,
        })
    }

    /// Waist chosen so the l = 1 intensity maximum (at r = w/√2) sits in
    /// the middle of the annulus.
    pub fn with_default_waist(r_inner: f64, r_outer: f64) -> Result<Self> {
        if !r_outer.is_finite() {
            return Err(Error::invalid("r_outer", "default waist needs a finite outer radius"));
        }
        Self::new(r_inner, r_outer, (r_inner + r_outer) / std::f64::consts::SQRT_2)
    }

    pub fn full_plane(waist: f64) -> Result<Self> {
        Self::new(0.0, f64::INFINITY, waist)
    }

    pub fn is_full_plane(&self) -> bool {
        self.r_inner == 0.0 && self.r_outer.is_infinite()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.r_inner * factor, self.r_outer * factor, self.waist * factor)
    }
}

impl Default for AnnulusGeometry {
    /// 4–5 μm annulus with the default waist.
    fn default() -> Self {
        Self::with_default_waist(4.0, 5.0).expect("default geometry is valid")
    }
}

/// Generalized Laguerre polynomial `L_m^α(x)` by upward recurrence.
pub fn laguerre(m: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..m {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Radial LG amplitude normalized so that `∫₀^∞ u² r dr = 1`.
pub fn lg_radial(mode: ModeIndex, waist: f64, r: f64) -> f64 {
    let al = mode.l.unsigned_abs();
    // m!/(m+|l|)!
    let ratio: f64 = (1..=al).map(|k| 1.0 / (mode.m + k) as f64).product();
    let s = std::f64::consts::SQRT_2 * r / waist;
    let x = s * s;
    (2.0 / waist) * ratio.sqrt() * s.powi(al as i32) * (-0.5 * x).exp() * laguerre(mode.m, al as f64, x)
}

/// Radial overlap `∫ u_a u_b r dr` over the annulus.
pub fn kappa(a: ModeIndex, b: ModeIndex, geom: &AnnulusGeometry) -> Result<f64> {
    // Order the pair so κ(a, b) and κ(b, a) share one evaluation path.
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let hi = if geom.r_outer.is_infinite() {
        full_plane_extent(geom.waist, a, b).max(geom.r_inner)
    } else {
        geom.r_outer
    };
    if hi <= geom.r_inner {
        return Ok(0.0);
    }
    let w = geom.waist;
    let est = adaptive_simpson(|r| lg_radial(a, w, r) * lg_radial(b, w, r) * r, geom.r_inner, hi, KAPPA_TOLERANCE)?;
    Ok(est.value)
}

/// `K(α,β,γ,δ) = κ(α,β)·κ(γ,δ)`.
pub fn k_factor(
    alpha: ModeIndex,
    beta: ModeIndex,
    gamma: ModeIndex,
    delta: ModeIndex,
    geom: &AnnulusGeometry,
) -> Result<f64> {
    Ok(kappa(alpha, beta, geom)? * kappa(gamma, delta, geom)?)
}

/// Precomputed overlaps for every pair drawn from a mode set.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaTable {
    pub geometry: AnnulusGeometry,
    entries: BTreeMap<(ModeIndex, ModeIndex), f64>,
}

impl KappaTable {
    pub fn build(modes: &[ModeIndex], geometry: AnnulusGeometry) -> Result<Self> {
        let mut keys: Vec<(ModeIndex, ModeIndex)> = Vec::new();
        for (i, a) in modes.iter().enumerate() {
            for b in &modes[i..] {
                keys.push(if a <= b { (*a, *b) } else { (*b, *a) });
            }
        }
        keys.sort();
        keys.dedup();
        let values: Vec<f64> = keys
            .par_iter()
            .map(|(a, b)| kappa(*a, *b, &geometry))
            .collect::<Result<_>>()?;
        Ok(Self {
            geometry,
            entries: keys.into_iter().zip(values).collect(),
        })
    }

    pub fn get(&self, a: ModeIndex, b: ModeIndex) -> Option<f64> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.entries.get(&key).copied()
    }

    pub fn k_factor(&self, alpha: ModeIndex, beta: ModeIndex, gamma: ModeIndex, delta: ModeIndex) -> Result<f64> {
        let lookup = |a, b| {
            self.get(a, b)
                .ok_or_else(|| Error::Internal(format!("overlap for {a:?}, {b:?} not tabulated")))
        };
        Ok(lookup(alpha, beta)? * lookup(gamma, delta)?)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(ModeIndex, ModeIndex), &f64)> {
        self.entries.iter()
    }
}
