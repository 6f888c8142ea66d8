//! Small dense complex matrices, the Hermitian eigenproblem and the PSD
//! square root.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues in `[-PSD_FLOOR, 0)` are treated as rounding noise.
pub const PSD_FLOOR: f64 = 1e-10;
const JACOBI_TOLERANCE: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Shape(format!("row of length {} in a {n}×{n} matrix", bad.len())));
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.n.max(1))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// `max |A − A†|`
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.rows().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `⟨v|A|v⟩`
    pub fn expectation(&self, v: &[Complex64]) -> Complex64 {
        v.iter().zip(self.mul_vec(v)).map(|(a, b)| a.conj() * b).sum()
    }

    fn check_dims(&self, other: &Self) {
        assert_eq!(self.n, other.n, "matrix dimension mismatch");
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.check_dims(rhs);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.check_dims(rhs);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.check_dims(rhs);
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    /// ascending
    pub eigenvalues: Vec<f64>,
    /// eigenvectors as columns, in eigenvalue order
    pub eigenvectors: CMatrix,
}

impl HermitianEigen {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.n).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// `V f(Λ) V†`
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let v = &self.eigenvectors;
        let n = v.n;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, |i, j| (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj()).sum())
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
pub fn eigh(a: &CMatrix) -> Result<HermitianEigen> {
    let n = a.n;
    let scale = a.max_abs();
    let dev = a.hermitian_deviation();
    if dev > 1e-10 * scale {
        return Err(Error::NotHermitian(dev));
    }
    // Symmetrize so rounding in the input does not leak into the rotations.
    let mut m = CMatrix::from_fn(n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()));
    let mut v = CMatrix::identity(n);
    let target = JACOBI_TOLERANCE * scale;

    let off = |m: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while scale > 0.0 && off(&m) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Convergence {
                what: "Jacobi eigensolver",
                coarse: off(&m),
                fine: target,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                // Phase e^{-iφ} makes the pivot real; then a real rotation.
                let phase = apq.conj() / mag;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = [[c, s], [-s·ph, c·ph]] acting on (p, q)
                let jqp = -s * phase;
                let jqq = c * phase;
                rotate_columns(&mut m, p, q, c, s, jqp, jqq);
                rotate_rows(&mut m, p, q, c, s, jqp, jqq);
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)].im = 0.0;
                m[(q, q)].im = 0.0;
                rotate_columns(&mut v, p, q, c, s, jqp, jqq);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// `A ← A·J`
fn rotate_columns(a: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, jqp: Complex64, jqq: Complex64) {
    for k in 0..a.n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * c + akq * jqp;
        a[(k, q)] = akp * s + akq * jqq;
    }
}

/// `A ← J†·A`
fn rotate_rows(a: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, jqp: Complex64, jqq: Complex64) {
    let (cqp, cqq) = (jqp.conj(), jqq.conj());
    for k in 0..a.n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = apk * c + aqk * cqp;
        a[(q, k)] = apk * s + aqk * cqq;
    }
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues down to `-PSD_FLOOR` are clipped to zero. Positive
/// eigenvalues at the rounding level of the largest one (`n·ε·λmax`) are
/// dropped too; their square roots would otherwise be far above ε.
pub fn sqrtm_psd(a: &CMatrix) -> Result<CMatrix> {
    let eig = eigh(a)?;
    let lmin = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if lmin < -PSD_FLOOR {
        return Err(Error::NotPsd(lmin));
    }
    let lmax = eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
    let noise = a.n as f64 * f64::EPSILON * lmax;
    Ok(eig.reconstruct_with(|l| if l <= noise { 0.0 } else { l.sqrt() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let g = CMatrix::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        &g + &g.adjoint()
    }

    fn assert_close(a: &CMatrix, b: &CMatrix, tol: f64) {
        let d = (a - b).max_abs();
        assert!(d <= tol, "max deviation {d:e} > {tol:e}");
    }

    #[test]
    fn diagonal_input() {
        let e = eigh(&CMatrix::from_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
        for k in 0..3 {
            let v = e.eigenvector(k);
            assert_eq!(v.iter().filter(|z| z.norm() == 1.0).count(), 1);
        }
    }

    #[test]
    fn pauli_spectra() {
        let x = CMatrix::from_rows(vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let e = eigh(&x).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15 && (e.eigenvalues[1] - 1.0).abs() < 1e-15);
        let y = CMatrix::from_rows(vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap();
        let e = eigh(&y).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15 && (e.eigenvalues[1] - 1.0).abs() < 1e-15);
        assert_close(&e.reconstruct(), &y, 1e-15);
    }

    #[test]
    fn random_reconstruction_and_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 5, 8, 20, 49] {
            let a = random_hermitian(n, &mut rng);
            let e = eigh(&a).unwrap();
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            assert_close(&e.reconstruct(), &a, 1e-10 * a.max_abs());
            let vv = &e.eigenvectors.adjoint() * &e.eigenvectors;
            assert_close(&vv, &CMatrix::identity(n), 1e-10);
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let v = [c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)];
        let p = CMatrix::outer(&v);
        let a = &CMatrix::identity(3) + &p;
        let e = eigh(&a).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[2] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = CMatrix::from_rows(vec![vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        assert!(matches!(eigh(&a), Err(Error::NotHermitian(_))));
        assert!(CMatrix::from_rows(vec![vec![c(1.0, 0.0)], vec![]]).is_err());
    }

    #[test]
    fn sqrt_examples() {
        assert_close(&sqrtm_psd(&CMatrix::identity(4)).unwrap(), &CMatrix::identity(4), 1e-15);
        assert_close(
            &sqrtm_psd(&CMatrix::from_diagonal(&[4.0, 9.0])).unwrap(),
            &CMatrix::from_diagonal(&[2.0, 3.0]),
            1e-15,
        );
        assert!(sqrtm_psd(&CMatrix::from_diagonal(&[1.0, -1e-9])).is_err());
        let clipped = sqrtm_psd(&CMatrix::from_diagonal(&[1.0, -1e-11])).unwrap();
        assert_eq!(clipped[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn sqrt_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 3, 6, 12] {
            let g = CMatrix::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let a = &g * &g.adjoint();
            let s = sqrtm_psd(&a).unwrap();
            assert!(s.hermitian_deviation() < 1e-12);
            assert_close(&(&s * &s), &a, 1e-9 * a.max_abs());
        }
    }

    #[test]
    fn matrix_helpers() {
        let v = [c(1.0, 0.0), c(0.0, 1.0)];
        let p = CMatrix::outer(&v);
        assert_eq!(p[(0, 1)], c(0.0, -1.0));
        assert_eq!(p.trace(), c(2.0, 0.0));
        assert_eq!(p.expectation(&v), c(4.0, 0.0));
        assert_eq!(p.hermitian_deviation(), 0.0);
        assert!((p.frobenius() - 2.0).abs() < 1e-15);
        assert_eq!(p.scale(0.5).trace(), c(1.0, 0.0));
    }
}
