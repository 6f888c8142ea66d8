//! OAM density matrices of the emitted photon pair.
//!
//! Pairs `(l1, l2)` carry no radial nodes. The coherent CP contribution
//! obeys the winding selection rule `l1 + l2 = ls` and factorizes into
//! overlap products, `ρ_cp[(α,β),(γ,δ)] = κ(α,β) κ(γ,δ)`, which makes it
//! the projector onto a single vector. The BQP contribution is diagonal.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bcs::JunctionParams;
use crate::error::{Error, Result};
use crate::linalg::{eigh, CMatrix, PSD_FLOOR};
use crate::modes::{AnnulusGeometry, KappaTable, ModeIndex};
use crate::spectral::{mixing_rates, CoherenceParams, MixingRates, QuadratureSpec};

pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
pub const TRACE_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub type PairLabel = (i32, i32);

/// Lexicographically ordered list of OAM pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct OamPairBasis {
    pairs: Vec<PairLabel>,
}

impl OamPairBasis {
    /// Every `(l1, l2)` with `|l1|, |l2| ≤ l_max`.
    pub fn symmetric(l_max: i32) -> Result<Self> {
        if l_max < 0 {
            return Err(Error::invalid("l_max", format!("must be >= 0, got {l_max}")));
        }
        let labels: Vec<i32> = (-l_max..=l_max).collect();
        Self::from_labels(&labels)
    }

    /// Every pair drawn from `labels` (for instance `[0, 1]`).
    pub fn from_labels(labels: &[i32]) -> Result<Self> {
        let mut ls = labels.to_vec();
        ls.sort_unstable();
        ls.dedup();
        let pairs = ls.iter().flat_map(|&a| ls.iter().map(move |&b| (a, b))).collect();
        Self::from_pairs(pairs)
    }

    pub fn from_pairs(pairs: Vec<PairLabel>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::invalid("basis", "no pairs"));
        }
        if pairs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("basis", "pairs must be strictly lexicographically increasing"));
        }
        for &(a, b) in &pairs {
            ModeIndex::oam(a)?;
            ModeIndex::oam(b)?;
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[PairLabel] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn l_max(&self) -> i32 {
        self.pairs.iter().map(|(a, b)| a.abs().max(b.abs())).max().unwrap_or(0)
    }

    pub fn index_of(&self, pair: PairLabel) -> Option<usize> {
        self.pairs.binary_search(&pair).ok()
    }

    /// Distinct single-photon modes appearing in the basis.
    pub fn modes(&self) -> Vec<ModeIndex> {
        let mut ls: Vec<i32> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        ls.sort_unstable();
        ls.dedup();
        ls.into_iter().map(|l| ModeIndex { m: 0, l }).collect()
    }

    pub fn kappa_table(&self, geom: &AnnulusGeometry) -> Result<KappaTable> {
        KappaTable::build(&self.modes(), *geom)
    }

    /// Indices of pairs with `l1 + l2 = winding`.
    pub fn sector(&self, winding: i32) -> Vec<usize> {
        (0..self.pairs.len())
            .filter(|&i| self.pairs[i].0 + self.pairs[i].1 == winding)
            .collect()
    }
}

impl<'de> Deserialize<'de> for OamPairBasis {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<PairLabel>::deserialize(d)?;
        Self::from_pairs(pairs).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindingNumber(pub i32);

/// `a|↻⟩ + b|↺⟩`; the clockwise state `|↻⟩` carries winding `+ls`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub a: Complex64,
    pub b: Complex64,
}

impl QubitState {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("qubit", format!("|a|² + |b|² = {norm}, expected 1")));
        }
        Ok(Self { a, b })
    }

    /// From `(magnitude, phase)` pairs; phases in radians.
    pub fn from_polar(a: (f64, f64), b: (f64, f64)) -> Result<Self> {
        Self::new(Complex64::from_polar(a.0, a.1), Complex64::from_polar(b.0, b.1))
    }

    pub fn clockwise() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: ZERO,
        }
    }

    /// Same state with a global phase `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let p = Complex64::from_polar(1.0, theta);
        Self {
            a: self.a * p,
            b: self.b * p,
        }
    }

    /// `b → −b`
    pub fn flipped(&self) -> Self {
        Self { a: self.a, b: -self.b }
    }
}

/// Density matrix over an [`OamPairBasis`]; not necessarily normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDensityMatrix {
    basis: OamPairBasis,
    matrix: CMatrix,
}

impl PairDensityMatrix {
    pub fn new(basis: OamPairBasis, matrix: CMatrix) -> Result<Self> {
        if basis.len() != matrix.dim() {
            return Err(Error::Shape(format!(
                "{}×{} matrix on a basis of {} pairs",
                matrix.dim(),
                matrix.dim(),
                basis.len()
            )));
        }
        Ok(Self { basis, matrix })
    }

    pub fn basis(&self) -> &OamPairBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn entry(&self, row: PairLabel, col: PairLabel) -> Option<Complex64> {
        Some(self.matrix[(self.basis.index_of(row)?, self.basis.index_of(col)?)])
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.basis.len()).map(|i| self.matrix[(i, i)].re).collect()
    }

    /// Pairs whose diagonal entry is nonzero.
    pub fn populated_pairs(&self) -> Vec<PairLabel> {
        self.basis
            .pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| self.matrix[(*i, *i)] != ZERO)
            .map(|(_, p)| *p)
            .collect()
    }

    /// Total diagonal weight on pairs whose winding is not in `windings`,
    /// relative to the trace. Only the BQP channel populates those pairs.
    pub fn diagonal_weight_outside(&self, windings: &[i32]) -> f64 {
        let outside: f64 = self
            .basis
            .pairs
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| !windings.contains(&(a + b)))
            .map(|(i, _)| self.matrix[(i, i)].re)
            .sum();
        outside / self.trace()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eigh(&self.matrix)?.eigenvalues.first().copied().unwrap_or(0.0))
    }

    /// Hermitian, PSD and unit trace within the module tolerances.
    pub fn check_state(&self) -> Result<()> {
        let dev = self.matrix.hermitian_deviation();
        if dev > HERMITIAN_TOLERANCE * self.matrix.max_abs().max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::TraceNotUnit(tr));
        }
        let lmin = self.min_eigenvalue()?;
        if lmin < -PSD_FLOOR {
            return Err(Error::NotPsd(lmin));
        }
        Ok(())
    }

    /// Rows and columns restricted to the given pairs, in basis order.
    pub fn restrict(&self, keep: &[PairLabel]) -> Result<Self> {
        let mut idx: Vec<usize> = keep
            .iter()
            .map(|p| {
                self.basis
                    .index_of(*p)
                    .ok_or_else(|| Error::invalid("pairs", format!("{p:?} not in basis")))
            })
            .collect::<Result<_>>()?;
        idx.sort_unstable();
        idx.dedup();
        let basis = OamPairBasis::from_pairs(idx.iter().map(|&i| self.basis.pairs[i]).collect())?;
        let matrix = CMatrix::from_fn(idx.len(), |i, j| self.matrix[(idx[i], idx[j])]);
        Self::new(basis, matrix)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityJson {
    basis: OamPairBasis,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for PairDensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DensityJson {
            basis: self.basis.clone(),
            re: self.matrix.rows().map(|r| r.iter().map(|z| z.re).collect()).collect(),
            im: self.matrix.rows().map(|r| r.iter().map(|z| z.im).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PairDensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = DensityJson::deserialize(d)?;
        if j.re.len() != j.im.len() || j.re.iter().zip(&j.im).any(|(a, b)| a.len() != b.len()) {
            return Err(serde::de::Error::custom("re and im parts differ in shape"));
        }
        let rows = j
            .re
            .iter()
            .zip(&j.im)
            .map(|(r, i)| r.iter().zip(i).map(|(a, b)| Complex64::new(*a, *b)).collect())
            .collect();
        let matrix = CMatrix::from_rows(rows).map_err(serde::de::Error::custom)?;
        Self::new(j.basis, matrix).map_err(serde::de::Error::custom)
    }
}

/// Divides by the trace.
pub fn normalize(m: &PairDensityMatrix) -> Result<PairDensityMatrix> {
    let tr = m.trace();
    if !(tr > 0.0) {
        return Err(Error::NonPositiveTrace(tr));
    }
    PairDensityMatrix::new(m.basis.clone(), m.matrix.scale(1.0 / tr))
}

/// Overlap vector of one winding sector: `κ(α,β)` where `lα + lβ = w`.
fn sector_amplitudes(winding: i32, basis: &OamPairBasis, table: &KappaTable) -> Result<Vec<f64>> {
    if basis.sector(winding).is_empty() {
        return Err(Error::EmptySector { winding });
    }
    basis
        .pairs
        .iter()
        .map(|&(a, b)| {
            if a + b == winding {
                table
                    .get(ModeIndex { m: 0, l: a }, ModeIndex { m: 0, l: b })
                    .ok_or_else(|| Error::Internal(format!("overlap for ({a}, {b}) missing")))
            } else {
                Ok(0.0)
            }
        })
        .collect()
}

/// Unnormalized CP matrix with overlaps taken from `table`.
pub fn rho_cp_with(ls: WindingNumber, basis: &OamPairBasis, table: &KappaTable) -> Result<PairDensityMatrix> {
    let v: Vec<Complex64> = sector_amplitudes(ls.0, basis, table)?
        .into_iter()
        .map(|k| Complex64::new(k, 0.0))
        .collect();
    PairDensityMatrix::new(basis.clone(), CMatrix::outer(&v))
}

pub fn rho_cp(ls: WindingNumber, basis: &OamPairBasis, geom: &AnnulusGeometry) -> Result<PairDensityMatrix> {
    rho_cp_with(ls, basis, &basis.kappa_table(geom)?)
}

/// Unnormalized diagonal BQP matrix, `K(α,β,α,β) = κ(α,β)²`.
pub fn rho_bqp_with(basis: &OamPairBasis, table: &KappaTable) -> Result<PairDensityMatrix> {
    let diag = basis
        .pairs
        .iter()
        .map(|&(a, b)| {
            let (ma, mb) = (ModeIndex { m: 0, l: a }, ModeIndex { m: 0, l: b });
            table.k_factor(ma, mb, ma, mb)
        })
        .collect::<Result<Vec<_>>>()?;
    PairDensityMatrix::new(basis.clone(), CMatrix::from_diagonal(&diag))
}

pub fn rho_bqp(basis: &OamPairBasis, geom: &AnnulusGeometry) -> Result<PairDensityMatrix> {
    rho_bqp_with(basis, &basis.kappa_table(geom)?)
}

/// Transfer of a ring qubit onto the pair: the outer product of
/// `a·c₊ + b·c₋`, with `c±` the overlap vectors of the `±ls` sectors.
pub fn rho_superposition_with(
    q: &QubitState,
    ls: WindingNumber,
    basis: &OamPairBasis,
    table: &KappaTable,
) -> Result<PairDensityMatrix> {
    let plus = sector_amplitudes(ls.0, basis, table)?;
    let minus = sector_amplitudes(-ls.0, basis, table)?;
    let v: Vec<Complex64> = plus.iter().zip(&minus).map(|(p, m)| q.a * p + q.b * m).collect();
    PairDensityMatrix::new(basis.clone(), CMatrix::outer(&v))
}

pub fn rho_superposition(
    q: &QubitState,
    ls: WindingNumber,
    basis: &OamPairBasis,
    geom: &AnnulusGeometry,
) -> Result<PairDensityMatrix> {
    rho_superposition_with(q, ls, basis, &basis.kappa_table(geom)?)
}

/// Rate-weighted mixture of the normalized components, trace 1.
pub fn mix(cp: &PairDensityMatrix, bqp: &PairDensityMatrix, rates: &MixingRates) -> Result<PairDensityMatrix> {
    if cp.basis != bqp.basis {
        return Err(Error::BasisMismatch);
    }
    let f = rates.cp_fraction()?;
    let cp = normalize(cp)?;
    let bqp = normalize(bqp)?;
    let m = &cp.matrix.scale(f) + &bqp.matrix.scale(1.0 - f);
    normalize(&PairDensityMatrix::new(cp.basis, m)?)
}

/// Spectral and geometric inputs shared by the mixed-state builders.
#[derive(Debug, Clone, Copy)]
pub struct EmissionPoint<'a> {
    pub detuning: f64,
    pub t: f64,
    pub junction: &'a JunctionParams,
    pub coherence: CoherenceParams,
    pub quadrature: QuadratureSpec,
}

impl EmissionPoint<'_> {
    pub fn rates(&self) -> Result<MixingRates> {
        mixing_rates(self.detuning, self.t, self.junction, &self.coherence, &self.quadrature)
    }
}

pub fn rho_total_with(
    ls: WindingNumber,
    basis: &OamPairBasis,
    table: &KappaTable,
    point: &EmissionPoint,
) -> Result<PairDensityMatrix> {
    mix(&rho_cp_with(ls, basis, table)?, &rho_bqp_with(basis, table)?, &point.rates()?)
}

pub fn rho_total(
    ls: WindingNumber,
    basis: &OamPairBasis,
    geom: &AnnulusGeometry,
    point: &EmissionPoint,
) -> Result<PairDensityMatrix> {
    rho_total_with(ls, basis, &basis.kappa_table(geom)?, point)
}

pub fn rho_total_superposition_with(
    q: &QubitState,
    ls: WindingNumber,
    basis: &OamPairBasis,
    table: &KappaTable,
    point: &EmissionPoint,
) -> Result<PairDensityMatrix> {
    mix(
        &rho_superposition_with(q, ls, basis, table)?,
        &rho_bqp_with(basis, table)?,
        &point.rates()?,
    )
}

pub fn rho_total_superposition(
    q: &QubitState,
    ls: WindingNumber,
    basis: &OamPairBasis,
    geom: &AnnulusGeometry,
    point: &EmissionPoint,
) -> Result<PairDensityMatrix> {
    rho_total_superposition_with(q, ls, basis, &basis.kappa_table(geom)?, point)
}
