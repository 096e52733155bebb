//! Dense complex matrices and the eigen-solvers the rest of the crate builds on.
//!
//! [`ComplexMatrix`] is a thin newtype over `nalgebra::DMatrix<Complex64>` that
//! enforces squareness and finiteness. The three numerical kernels are
//!
//! * [`eig_normal`]: unitary diagonalization of a normal matrix,
//! * [`simdiag_real_symmetric`]: a common rotation for two commuting real symmetric matrices,
//! * [`exp_skew_hermitian`]: the exponential of a skew-Hermitian matrix.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 10_000;

/// Numerical thresholds shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Frobenius-norm residual bound for membership and reconstruction checks.
    pub membership_tol: f64,
    /// Angular radius (radians) within which eigenvalues count as equal.
    pub cluster_tol: f64,
    /// Minimum angular distance (radians) of an eigenvalue from a branch point.
    pub branch_margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            membership_tol: 1e-9,
            cluster_tol: 1e-6,
            branch_margin: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all_positive = [self.membership_tol, self.cluster_tol, self.branch_margin]
            .iter()
            .all(|t| t.is_finite() && *t > 0.0);
        if !all_positive {
            return Err(Error::InvalidTolerances(
                "all tolerances must be finite and strictly positive".into(),
            ));
        }
        if self.cluster_tol <= self.membership_tol {
            return Err(Error::InvalidTolerances(format!(
                "cluster_tol ({}) must exceed membership_tol ({})",
                self.cluster_tol, self.membership_tol
            )));
        }
        Ok(())
    }

    /// `membership_tol` scaled by `norm`, or left absolute when `norm` is zero.
    pub fn relative_to(&self, norm: f64) -> f64 {
        if norm > 0.0 {
            self.membership_tol * norm
        } else {
            self.membership_tol
        }
    }
}

/// Square, finite, dense complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix(DMatrix<Complex64>);

/// Wire form: `{"n": <int>, "entries": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(value: MatrixJson) -> Result<Self> {
        let entries = value
            .entries
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        ComplexMatrix::from_row_major(value.n, entries)
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        let n = m.n();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = m.0[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        MatrixJson { n, entries }
    }
}

impl ComplexMatrix {
    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(m))
    }

    pub fn from_row_major(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        if entries.len() != n * n {
            return Err(Error::EntryCount {
                expected: n * n,
                found: entries.len(),
            });
        }
        Self::from_dmatrix(DMatrix::from_row_slice(n, n, &entries))
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::from_dmatrix(m.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn scalar(n: usize, c: Complex64) -> Self {
        Self(DMatrix::from_diagonal_element(n, n, c))
    }

    /// `D(a_1, ..., a_n)`.
    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = DMatrix::zeros(n, n);
        for (k, v) in values.iter().enumerate() {
            m[(k, k)] = *v;
        }
        Self(m)
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.clone().determinant()
    }

    pub fn diagonal_entries(&self) -> Vec<Complex64> {
        (0..self.n()).map(|k| self.0[(k, k)]).collect()
    }

    /// `‖X·X* − E‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.n();
        (&self.0 * self.0.adjoint() - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius distance to `other`.
    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        (self - other).frobenius_norm()
    }

    /// Largest absolute imaginary part of any entry.
    pub fn max_imag(&self) -> f64 {
        self.0.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.0.map(|z| z.re)
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let n = self.n();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += self.0[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    /// Entry-wise maximum modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Angle of `z` folded into `[0, 2π)`.
pub fn angle_2pi(z: Complex64) -> f64 {
    normalize_angle(z.arg())
}

/// Folds any real angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let a = theta.rem_euclid(2.0 * PI);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if a >= 2.0 * PI {
        0.0
    } else {
        a
    }
}

/// Distance between two angles on the unit circle, in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    d.min(2.0 * PI - d)
}

/// Single-linkage clusters of angles on a circle of circumference `period`.
pub fn circular_clusters(angles: &[f64], radius: f64, period: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..angles.len()).collect();
    order.sort_by(|&a, &b| angles[a].total_cmp(&angles[b]));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &idx in &order {
        match clusters.last_mut() {
            Some(last) if angles[idx] - angles[*last.last().unwrap()] <= radius => last.push(idx),
            _ => clusters.push(vec![idx]),
        }
    }
    if clusters.len() > 1 {
        let first = angles[clusters[0][0]];
        let last = angles[*clusters.last().unwrap().last().unwrap()];
        if first + period - last <= radius {
            let tail = clusters.pop().unwrap();
            clusters[0].extend(tail);
        }
    }
    clusters
}

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Unitary matrix whose columns are eigenvectors.
    pub p: ComplexMatrix,
    pub eigenvalues: Vec<Complex64>,
}

impl EigenDecomposition {
    /// `‖X − P·D·P*‖_F`.
    pub fn reconstruction_residual(&self, x: &ComplexMatrix) -> f64 {
        let d = ComplexMatrix::diagonal(&self.eigenvalues);
        x.distance(&(&(&self.p * &d) * &self.p.adjoint()))
    }
}

/// Unitary diagonalization `X = P·D(λ)·P*` of a normal matrix.
///
/// Eigenvalues come back sorted by principal argument, ties broken by imaginary part.
pub fn eig_normal(x: &ComplexMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    let n = x.n();
    let norm = x.frobenius_norm();
    let commutator = &(x * &x.adjoint()) - &(&x.adjoint() * x);
    let residual = commutator.frobenius_norm();
    if residual > 100.0 * tol.relative_to(norm * norm) {
        return Err(Error::NotNormal { residual });
    }

    let schur =
        Schur::try_new(x.0.clone(), f64::EPSILON, MAX_SWEEPS).ok_or(Error::NoConvergence)?;
    let (q, t) = schur.unpack();

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<Complex64> = (0..n).map(|k| t[(k, k)]).collect();
    order.sort_by(|&a, &b| {
        let (za, zb) = (diag[a], diag[b]);
        za.arg().total_cmp(&zb.arg()).then(za.im.total_cmp(&zb.im))
    });

    let mut p = DMatrix::<Complex64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        p.set_column(dst, &q.column(src));
    }
    let mut p = ComplexMatrix(p);
    if p.unitarity_residual() > tol.membership_tol {
        p = reorthonormalize(&p);
    }

    let decomposition = EigenDecomposition {
        p,
        eigenvalues: order.iter().map(|&k| diag[k]).collect(),
    };
    if decomposition.reconstruction_residual(x) > tol.relative_to(norm) {
        return Err(Error::NoConvergence);
    }
    Ok(decomposition)
}

/// Replaces `p` by the unitary factor of its QR decomposition, keeping column phases.
pub fn reorthonormalize(p: &ComplexMatrix) -> ComplexMatrix {
    let qr = p.0.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..p.n() {
        let d = r[(k, k)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..p.n() {
                q[(i, k)] *= phase;
            }
        }
    }
    ComplexMatrix(q)
}

/// Result of [`simdiag_real_symmetric`].
#[derive(Debug, Clone)]
pub struct SimultaneousDiagonalization {
    /// Real rotation (det +1) stored as a complex matrix.
    pub b: ComplexMatrix,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

/// Finds `B ∈ SO(n)` with `tB·S1·B` and `tB·S2·B` both diagonal.
///
/// Diagonalizes `S1 + μ·S2` for a pseudo-random `μ` to split degeneracies, then checks
/// both matrices; up to five values of `μ` are tried.
pub fn simdiag_real_symmetric(
    s1: &ComplexMatrix,
    s2: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<SimultaneousDiagonalization> {
    let n = s1.n();
    if s2.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s2.n(),
        });
    }
    let norm1 = s1.frobenius_norm();
    let norm2 = s2.frobenius_norm();
    let scale = norm1.max(norm2);

    for s in [s1, s2] {
        let asym = s.distance(&s.transpose());
        let imag = s.max_imag();
        if asym > tol.relative_to(scale) || imag > tol.relative_to(scale) {
            return Err(Error::NotSymmetric {
                residual: asym.max(imag),
            });
        }
    }
    let residual = (&(s1 * s2) - &(s2 * s1)).frobenius_norm();
    if residual > 100.0 * tol.relative_to(scale * scale) {
        return Err(Error::NotCommuting { residual });
    }

    let a1 = symmetrize(&s1.real_part());
    let a2 = symmetrize(&s2.real_part());
    if scale == 0.0 {
        return Ok(SimultaneousDiagonalization {
            b: ComplexMatrix::identity(n),
            d1: vec![0.0; n],
            d2: vec![0.0; n],
        });
    }

    // Fixed seed: μ only needs to be generic, and runs must be reproducible.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d1a6);
    let ratio = if norm2 > 0.0 { norm1 / norm2 } else { 1.0 };
    for _ in 0..5 {
        let mu = ratio * rng.random_range(0.5..1.5);
        let combined = &a1 + &a2 * mu;
        let Some(eig) = SymmetricEigen::try_new(combined, f64::EPSILON, MAX_SWEEPS) else {
            continue;
        };
        let mut b = eig.eigenvectors;
        if b.determinant() < 0.0 {
            let flipped = -b.column(0);
            b.set_column(0, &flipped);
        }
        let t1 = b.transpose() * &a1 * &b;
        let t2 = b.transpose() * &a2 * &b;
        if off_diagonal_real(&t1) <= tol.relative_to(scale)
            && off_diagonal_real(&t2) <= tol.relative_to(scale)
        {
            return Ok(SimultaneousDiagonalization {
                b: ComplexMatrix::from_real(&b)?,
                d1: t1.diagonal().iter().copied().collect(),
                d2: t2.diagonal().iter().copied().collect(),
            });
        }
    }
    Err(Error::NoConvergence)
}

fn symmetrize(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

fn off_diagonal_real(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)] * a[(i, j)];
            }
        }
    }
    acc.sqrt()
}

/// `exp(H)` for skew-Hermitian `H`, computed by diagonalizing `H`.
pub fn exp_skew_hermitian(h: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let norm = h.frobenius_norm();
    let residual = (&h.adjoint() + h).frobenius_norm();
    if residual > tol.relative_to(norm) {
        return Err(Error::NotSkewHermitian { residual });
    }
    let eig = eig_normal(h, tol)?;
    let exps: Vec<Complex64> = eig.eigenvalues.iter().map(|z| z.exp()).collect();
    Ok(&(&eig.p * &ComplexMatrix::diagonal(&exps)) * &eig.p.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_input_sorts_by_argument() {
        let tol = Tolerances::default();
        let x = ComplexMatrix::diagonal(&[c(0.0, 1.0), c(0.0, -1.0)]);
        let eig = eig_normal(&x, &tol).unwrap();
        assert!((eig.eigenvalues[0] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((eig.eigenvalues[1] - c(0.0, 1.0)).norm() < 1e-15);
        assert!(eig.reconstruction_residual(&x) < 1e-14);
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let tol = Tolerances::default();
        let eig = eig_normal(&ComplexMatrix::identity(3), &tol).unwrap();
        for z in eig.eigenvalues {
            assert!((z - c(1.0, 0.0)).norm() < 1e-15);
        }
        assert!(eig.p.unitarity_residual() < 1e-14);
    }

    #[test]
    fn non_normal_is_rejected() {
        let tol = Tolerances::default();
        let x = ComplexMatrix::from_row_major(
            2,
            vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(eig_normal(&x, &tol), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn simdiag_trivial_cases() {
        let tol = Tolerances::default();
        let s1 = ComplexMatrix::diagonal(&[c(2.0, 0.0), c(0.0, 0.0)]);
        let s2 = ComplexMatrix::diagonal(&[c(0.0, 0.0), c(2.0, 0.0)]);
        let r = simdiag_real_symmetric(&s1, &s2, &tol).unwrap();
        assert!(r.b.distance(&ComplexMatrix::identity(2)) < 1e-15);
        assert_eq!(r.d1, vec![2.0, 0.0]);
        assert_eq!(r.d2, vec![0.0, 2.0]);

        let z = ComplexMatrix::zeros(3);
        let r = simdiag_real_symmetric(&z, &z, &tol).unwrap();
        assert_eq!(r.b, ComplexMatrix::identity(3));
        assert_eq!(r.d1, vec![0.0; 3]);
    }

    #[test]
    fn simdiag_rejects_bad_input() {
        let tol = Tolerances::default();
        let s1 = ComplexMatrix::from_row_major(
            2,
            vec![c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let s2 = ComplexMatrix::identity(2);
        assert!(matches!(
            simdiag_real_symmetric(&s1, &s2, &tol),
            Err(Error::NotSymmetric { .. })
        ));

        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let b = ComplexMatrix::from_row_major(
            2,
            vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(
            simdiag_real_symmetric(&a, &b, &tol),
            Err(Error::NotCommuting { .. })
        ));
    }

    #[test]
    fn exp_examples() {
        let tol = Tolerances::default();
        assert!(
            exp_skew_hermitian(&ComplexMatrix::zeros(3), &tol)
                .unwrap()
                .distance(&ComplexMatrix::identity(3))
                < 1e-15
        );
        let h = ComplexMatrix::diagonal(&[c(0.0, PI / 2.0), c(0.0, 3.0 * PI / 2.0)]);
        let u = exp_skew_hermitian(&h, &tol).unwrap();
        let expected = ComplexMatrix::diagonal(&[c(0.0, 1.0), c(0.0, -1.0)]);
        assert!(u.distance(&expected) < 1e-14);

        let full = ComplexMatrix::scalar(4, c(0.0, 2.0 * PI));
        let u = exp_skew_hermitian(&full, &tol).unwrap();
        assert!(u.distance(&ComplexMatrix::identity(4)) < 1e-13);
    }

    #[test]
    fn exp_rejects_hermitian() {
        let tol = Tolerances::default();
        let h = ComplexMatrix::identity(2);
        assert!(matches!(
            exp_skew_hermitian(&h, &tol),
            Err(Error::NotSkewHermitian { .. })
        ));
    }

    #[test]
    fn matrix_json_rejects_wrong_entry_count() {
        let bad = r#"{"n": 2, "entries": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(bad).is_err());
        let good = r#"{"n": 1, "entries": [[0.5, -0.25]]}"#;
        let m: ComplexMatrix = serde_json::from_str(good).unwrap();
        assert_eq!(m.get(0, 0), c(0.5, -0.25));
        assert_eq!(serde_json::to_string(&m).unwrap(), good.replace(' ', ""));
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerances::default().validate().is_ok());
        let bad = Tolerances {
            cluster_tol: 1e-12,
            ..Tolerances::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn angular_helpers() {
        assert!((angular_distance(0.1, 2.0 * PI - 0.1) - 0.2).abs() < 1e-15);
        assert_eq!(normalize_angle(-1e-300), 0.0);
        assert!((angle_2pi(c(0.0, -1.0)) - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn clusters_wrap_around() {
        let tau = 2.0 * std::f64::consts::PI;
        let clusters = circular_clusters(&[1e-9, 3.0, tau - 1e-9], 1e-6, tau);
        assert_eq!(clusters.len(), 2);
        assert!(clusters.iter().any(|c| c.len() == 2));
    }
}
