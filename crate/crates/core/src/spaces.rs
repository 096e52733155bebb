//! Matrix models of the two symmetric spaces.
//!
//! * AI(n):  `SU(n)/SO(n)  = { X ∈ SU(n)  | tX = X }`
//! * AII(n): `SU(2n)/Sp(n) = { X ∈ SU(2n) | tX = J·X·tJ }`
//!
//! where `J` is the block matrix `[[O, −E_n], [E_n, O]]`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{exp_skew_hermitian, ComplexMatrix, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    AI,
    AII,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::AI => write!(f, "AI"),
            Family::AII => write!(f, "AII"),
        }
    }
}

/// Which space, and its rank parameter `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceKind {
    pub family: Family,
    pub n: usize,
}

impl SpaceKind {
    pub fn ai(n: usize) -> Self {
        Self {
            family: Family::AI,
            n,
        }
    }

    pub fn aii(n: usize) -> Self {
        Self {
            family: Family::AII,
            n,
        }
    }

    /// Side of the ambient special unitary group: `n` for AI, `2n` for AII.
    pub fn ambient_size(&self) -> usize {
        match self.family {
            Family::AI => self.n,
            Family::AII => 2 * self.n,
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family, self.n)
    }
}

/// Per-law residuals for a candidate member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    /// `‖X·X* − E‖_F`
    pub unitarity: f64,
    /// `|det X − 1|`
    pub determinant: f64,
    /// `‖tX − X‖_F` for AI, `‖tX − J·X·tJ‖_F` for AII
    pub symmetry: f64,
    pub member: bool,
}

impl MembershipReport {
    pub fn max_residual(&self) -> f64 {
        self.unitarity.max(self.determinant).max(self.symmetry)
    }
}

impl fmt::Display for MembershipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unitarity {:.3e}, determinant {:.3e}, symmetry {:.3e}",
            self.unitarity, self.determinant, self.symmetry
        )
    }
}

/// A matrix tagged with the space it is claimed to lie in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpacePointJson", into = "SpacePointJson")]
pub struct SpacePoint {
    kind: SpaceKind,
    matrix: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct SpacePointJson {
    family: Family,
    n: usize,
    matrix: ComplexMatrix,
}

impl TryFrom<SpacePointJson> for SpacePoint {
    type Error = Error;

    fn try_from(value: SpacePointJson) -> Result<Self> {
        SpacePoint::unchecked(
            SpaceKind {
                family: value.family,
                n: value.n,
            },
            value.matrix,
        )
    }
}

impl From<SpacePoint> for SpacePointJson {
    fn from(p: SpacePoint) -> Self {
        SpacePointJson {
            family: p.kind.family,
            n: p.kind.n,
            matrix: p.matrix,
        }
    }
}

impl SpacePoint {
    /// Wraps `matrix` after checking every membership law.
    pub fn new(kind: SpaceKind, matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let report = is_member(kind, &matrix, tol)?;
        if !report.member {
            return Err(Error::NotInSpace { report });
        }
        Ok(Self { kind, matrix })
    }

    /// Wraps `matrix` checking only its size.
    pub fn unchecked(kind: SpaceKind, matrix: ComplexMatrix) -> Result<Self> {
        check_side(kind, &matrix)?;
        Ok(Self { kind, matrix })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

fn check_side(kind: SpaceKind, x: &ComplexMatrix) -> Result<()> {
    if kind.n == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    if x.n() != kind.ambient_size() {
        return Err(Error::DimensionMismatch {
            expected: kind.ambient_size(),
            found: x.n(),
        });
    }
    Ok(())
}

/// `J = [[O, −E_n], [E_n, O]]`, of side `2n`.
pub fn structural_j(n: usize) -> ComplexMatrix {
    let mut j = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = Complex64::new(-1.0, 0.0);
        j[(n + k, k)] = Complex64::new(1.0, 0.0);
    }
    ComplexMatrix::from_dmatrix(j).expect("J is square and finite")
}

/// Residual of the family's symmetry law.
pub fn symmetry_residual(kind: SpaceKind, x: &ComplexMatrix) -> f64 {
    match kind.family {
        Family::AI => x.transpose().distance(x),
        Family::AII => {
            let j = structural_j(kind.n);
            x.transpose().distance(&(&(&j * x) * &j.transpose()))
        }
    }
}

pub fn is_member(kind: SpaceKind, x: &ComplexMatrix, tol: &Tolerances) -> Result<MembershipReport> {
    check_side(kind, x)?;
    let unitarity = x.unitarity_residual();
    let determinant = (x.determinant() - Complex64::new(1.0, 0.0)).norm();
    let symmetry = symmetry_residual(kind, x);
    let member = [unitarity, determinant, symmetry]
        .iter()
        .all(|r| *r <= tol.membership_tol);
    Ok(MembershipReport {
        unitarity,
        determinant,
        symmetry,
        member,
    })
}

/// Haar-distributed element of `SU(m)`.
///
/// QR of a complex Ginibre matrix, with the phases of `R`'s diagonal moved into `Q`,
/// then rescaled by an `m`-th root of `det Q`.
pub fn haar_special_unitary<R: Rng + ?Sized>(m: usize, rng: &mut R) -> ComplexMatrix {
    let g = DMatrix::<Complex64>::from_fn(m, m, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..m {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..m {
            q[(i, k)] *= phase;
        }
    }
    let det = q.clone().determinant();
    let root = Complex64::from_polar(1.0, -det.arg() / m as f64);
    ComplexMatrix::from_dmatrix(q * root).expect("QR of a finite matrix is finite")
}

/// Haar-distributed element of `SO(n)`, as a real matrix.
pub fn haar_special_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..n {
        if r[(k, k)] < 0.0 {
            let flipped = -q.column(k);
            q.set_column(k, &flipped);
        }
    }
    if q.determinant() < 0.0 {
        let flipped = -q.column(0);
        q.set_column(0, &flipped);
    }
    q
}

/// Image of `E` (AI) or of `−E` (AII) under the transitive action of `P`:
/// `P·tP` for AI and `J·(P·J·tP)` for AII.
pub fn from_action(kind: SpaceKind, p: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_side(kind, p)?;
    Ok(match kind.family {
        Family::AI => p * &p.transpose(),
        Family::AII => {
            let j = structural_j(kind.n);
            &j * &(&(p * &j) * &p.transpose())
        }
    })
}

/// Seeded sample obtained by acting on the basepoint with a Haar-random `P ∈ SU(m)`.
pub fn sample(kind: SpaceKind, seed: u64) -> Result<SpacePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = haar_special_unitary(kind.ambient_size(), &mut rng);
    let x = from_action(kind, &p)?;
    SpacePoint::unchecked(kind, x)
}

/// Builds a matrix with prescribed spectrum that obeys the family's symmetry law.
///
/// AI takes `n` values and returns `O·D(μ)·tO` with `O ∈ SO(n)`. AII takes `n` values
/// and returns `S·D(μ, μ)·S*` with `S` unitary symplectic, so every value appears twice.
/// Membership additionally needs the determinant to be one, which is left to the caller.
pub fn with_spectrum(kind: SpaceKind, spectrum: &[Complex64], seed: u64) -> Result<ComplexMatrix> {
    if spectrum.len() != kind.n || kind.n == 0 {
        return Err(Error::DimensionMismatch {
            expected: kind.n,
            found: spectrum.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind.family {
        Family::AI => {
            let o = ComplexMatrix::from_real(&haar_special_orthogonal(kind.n, &mut rng))?;
            Ok(&(&o * &ComplexMatrix::diagonal(spectrum)) * &o.transpose())
        }
        Family::AII => {
            let s = random_unitary_symplectic(kind.n, &mut rng)?;
            let doubled: Vec<Complex64> = spectrum.iter().chain(spectrum.iter()).copied().collect();
            Ok(&(&s * &ComplexMatrix::diagonal(&doubled)) * &s.adjoint())
        }
    }
}

/// `c′(A + jB) = [[A, −conj(B)], [B, conj(A)]]`, checked to preserve `J`.
pub fn symplectic_embed(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<ComplexMatrix> {
    let n = a.n();
    if b.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.n(),
        });
    }
    let image = embed_blocks(a, b);
    let j = structural_j(n);
    let residual = (&(&image * &j) * &image.transpose()).distance(&j);
    if residual > tol.membership_tol {
        return Err(Error::NotSymplectic { residual });
    }
    Ok(image)
}

fn embed_blocks(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.n();
    let (a, b) = (a.as_dmatrix(), b.as_dmatrix());
    let mut m = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(&b.map(|z| -z.conj()));
    m.view_mut((n, 0), (n, n)).copy_from(b);
    m.view_mut((n, n), (n, n)).copy_from(&a.map(|z| z.conj()));
    ComplexMatrix::from_dmatrix(m).expect("blocks are finite")
}

/// Exponential of a random quaternionic skew-Hermitian matrix, as its `(A, B)` blocks.
pub fn random_quaternion_unitary<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let s = random_unitary_symplectic(n, rng)?;
    let d = s.as_dmatrix();
    let a = ComplexMatrix::from_dmatrix(d.view((0, 0), (n, n)).into_owned())?;
    let b = ComplexMatrix::from_dmatrix(d.view((n, 0), (n, n)).into_owned())?;
    Ok((a, b))
}

fn random_unitary_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    let mut gauss = || -> Complex64 {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    };
    let raw_a = DMatrix::<Complex64>::from_fn(n, n, |_, _| gauss());
    let raw_b = DMatrix::<Complex64>::from_fn(n, n, |_, _| gauss());
    let a = ComplexMatrix::from_dmatrix((&raw_a - raw_a.adjoint()) * Complex64::new(0.5, 0.0))?;
    let b = ComplexMatrix::from_dmatrix((&raw_b + raw_b.transpose()) * Complex64::new(0.5, 0.0))?;
    exp_skew_hermitian(&embed_blocks(&a, &b), &Tolerances::default())
}
