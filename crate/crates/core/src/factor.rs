//! Constructive factorizations behind the transitive actions.
//!
//! * [`factor_symmetric`]: symmetric `X ∈ SU(n)` as `P·tP`.
//! * [`factor_skew`]: skew-symmetric `X ∈ SU(2n)` as `P·J·tP`.
//! * [`factor_aii`]: an AII point `X` as `J·P·J·tP`, via the skew representative `tJ·X`.
//!
//! `P·J·tP` has Pfaffian `det(P)·Pf(J)`, so a skew `X` whose Pfaffian has the other
//! sign (for example `−J` when `n` is odd) has no factor in `SU(2n)`; such inputs are
//! reported as [`Error::PfaffianObstruction`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    angle_2pi, circular_clusters, eig_normal, simdiag_real_symmetric, ComplexMatrix, Tolerances,
};
use crate::spaces::{is_member, structural_j, Family, MembershipReport, SpaceKind, SpacePoint};

/// `P` together with how well it reproduces the input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorizationResult {
    #[serde(rename = "P")]
    pub p: ComplexMatrix,
    /// Frobenius reconstruction error.
    pub residual: f64,
    #[serde(skip)]
    pub intermediates: Option<Intermediates>,
}

/// Diagnostics from the construction.
#[derive(Debug, Clone)]
pub struct Intermediates {
    /// Real rotation diagonalizing (AI) or block-diagonalizing (skew) the input.
    pub b: ComplexMatrix,
    /// `D(c_1, …, c_n)` for AI, `D(c_1, …, c_n, c_1, …, c_n)` for skew.
    pub c: ComplexMatrix,
    pub roots: Vec<Complex64>,
    /// Eigenvalue representatives `λ_k` (skew case only).
    pub eigenvalues: Vec<Complex64>,
    /// `i^n·λ_1⋯λ_n` (skew case only); always `±1` in exact arithmetic.
    pub certificate: Option<Complex64>,
}

/// Square root with argument in `[0, π)`.
fn principal_sqrt(z: Complex64) -> Complex64 {
    Complex64::from_polar(z.norm().sqrt(), angle_2pi(z) / 2.0)
}

/// `X = P·tP` with `P ∈ SU(n)`, for symmetric `X ∈ SU(n)`.
pub fn factor_symmetric(x: &ComplexMatrix, tol: &Tolerances) -> Result<FactorizationResult> {
    let n = x.n();
    let report = is_member(SpaceKind::ai(n), x, tol)?;
    if !report.member {
        return Err(Error::NotInSpace { report });
    }

    let xbar = x.conj();
    let s1 = x + &xbar;
    let s2 = (x - &xbar).scale(Complex64::i());
    let sd = simdiag_real_symmetric(&s1, &s2, tol)?;

    let mu: Vec<Complex64> = sd
        .d1
        .iter()
        .zip(&sd.d2)
        .map(|(a, b)| Complex64::new(*a, -*b) / 2.0)
        .collect();
    let product: Complex64 = mu.iter().product();
    let det = x.determinant();
    if (product - det).norm() > tol.membership_tol {
        return Err(Error::RootProductFailure { product, det });
    }

    let mut roots: Vec<Complex64> = mu.iter().map(|m| principal_sqrt(*m)).collect();
    let root_product: Complex64 = roots.iter().product();
    if root_product.re < 0.0 {
        roots[n - 1] = -roots[n - 1];
    }

    let c = ComplexMatrix::diagonal(&roots);
    let p = &sd.b * &c;
    let residual = x.distance(&(&p * &p.transpose()));
    let bound = 10.0 * tol.membership_tol;
    if residual > bound {
        return Err(Error::Reconstruction { residual, bound });
    }
    Ok(FactorizationResult {
        p,
        residual,
        intermediates: Some(Intermediates {
            b: sd.b,
            c,
            roots,
            eigenvalues: mu,
            certificate: None,
        }),
    })
}

/// Permutation taking the interleaved order `(w_1, w_1′, …, w_n, w_n′)` to the block
/// order `(w_1, …, w_n, w_1′, …, w_n′)` under right multiplication.
pub fn perfect_shuffle(n: usize) -> ComplexMatrix {
    let mut m = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(2 * k, k)] = Complex64::new(1.0, 0.0);
        m[(2 * k + 1, n + k)] = Complex64::new(1.0, 0.0);
    }
    ComplexMatrix::from_dmatrix(m).expect("permutation is finite")
}

/// `[[D(0,1,…,1), D(1,0,…,0)], [D(1,0,…,0), D(0,1,…,1)]]`: swaps coordinates `1` and `n+1`.
pub fn determinant_repair(n: usize) -> ComplexMatrix {
    let mut m = DMatrix::<Complex64>::identity(2 * n, 2 * n);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    m[(0, 0)] = zero;
    m[(n, n)] = zero;
    m[(0, n)] = one;
    m[(n, 0)] = one;
    ComplexMatrix::from_dmatrix(m).expect("permutation is finite")
}

fn skew_report(x: &ComplexMatrix, tol: &Tolerances) -> MembershipReport {
    let unitarity = x.unitarity_residual();
    let determinant = (x.determinant() - Complex64::new(1.0, 0.0)).norm();
    let symmetry = (&x.transpose() + x).frobenius_norm();
    let even = x.n().is_multiple_of(2);
    MembershipReport {
        unitarity,
        determinant,
        symmetry,
        member: even
            && [unitarity, determinant, symmetry]
                .iter()
                .all(|r| *r <= tol.membership_tol),
    }
}

/// `X = P·J·tP` with `P ∈ SU(2n)`, for skew-symmetric `X ∈ SU(2n)`.
///
/// Eigenvalues of `X` come in pairs `λ, −λ` with eigenvectors `v, conj(v)`. One vector of
/// every pair is collected, orthonormalized, and turned into the real basis
/// `w = √2·Re v`, `w′ = √2·Im v`, giving `tB·X·B = [[O, −D(iλ)], [D(iλ), O]]`.
pub fn factor_skew(x: &ComplexMatrix, tol: &Tolerances) -> Result<FactorizationResult> {
    let report = skew_report(x, tol);
    if !report.member {
        return Err(Error::NotInSpace { report });
    }
    let n = x.n() / 2;
    let eig = eig_normal(x, tol)?;

    // λ and −λ share the same doubled angle; cluster on it, then split each cluster
    // into the half near a reference direction u and the half near −u.
    let doubled: Vec<f64> = eig.eigenvalues.iter().map(|z| angle_2pi(z * z)).collect();
    let clusters = circular_clusters(&doubled, 2.0 * tol.cluster_tol, 2.0 * std::f64::consts::PI);
    let mut plus = Vec::with_capacity(n);
    for cluster in &clusters {
        let mean: Complex64 = cluster
            .iter()
            .map(|&k| Complex64::from_polar(1.0, doubled[k]))
            .sum();
        let u = Complex64::from_polar(1.0, mean.arg() / 2.0);
        let members: Vec<usize> = cluster
            .iter()
            .copied()
            .filter(|&k| (eig.eigenvalues[k] * u.conj()).re > 0.0)
            .collect();
        if 2 * members.len() != cluster.len() {
            return Err(Error::OddPairingFailure(format!(
                "cluster at doubled angle {:.6} splits {} / {}",
                doubled[cluster[0]],
                members.len(),
                cluster.len() - members.len()
            )));
        }
        plus.extend(members);
    }
    plus.sort_unstable();

    let pd = eig.p.as_dmatrix();
    let mut v = DMatrix::<Complex64>::zeros(2 * n, n);
    for (dst, &src) in plus.iter().enumerate() {
        v.set_column(dst, &pd.column(src));
    }
    let v = v.qr().q();
    let overlap = (v.transpose() * &v)
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if overlap > 10.0 * tol.membership_tol {
        return Err(Error::OddPairingFailure(format!(
            "half-spectrum subspace overlaps its conjugate by {overlap:.3e}"
        )));
    }

    // diagonalize X on the chosen half
    let restricted = ComplexMatrix::from_dmatrix(v.adjoint() * x.as_dmatrix() * &v)?;
    let inner = eig_normal(&restricted, tol)?;
    let mut v = v * inner.p.as_dmatrix();
    let mut lambdas = inner.eigenvalues;

    let sqrt2 = std::f64::consts::SQRT_2;
    let build_interleaved = |v: &DMatrix<Complex64>| {
        let mut b = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for k in 0..n {
            for i in 0..2 * n {
                b[(i, 2 * k)] = sqrt2 * v[(i, k)].re;
                b[(i, 2 * k + 1)] = sqrt2 * v[(i, k)].im;
            }
        }
        b
    };
    let shuffle = perfect_shuffle(n);
    let mut b = &ComplexMatrix::from_real(&build_interleaved(&v))? * &shuffle;
    if b.determinant().re < 0.0 {
        // λ_1 → −λ_1 swaps v_1 with conj(v_1), negating w_1′
        let flipped = v.column(0).map(|z| z.conj());
        v.set_column(0, &flipped);
        lambdas[0] = -lambdas[0];
        b = &ComplexMatrix::from_real(&build_interleaved(&v))? * &shuffle;
    }

    let roots: Vec<Complex64> = lambdas
        .iter()
        .map(|l| principal_sqrt(Complex64::i() * l))
        .collect();
    let doubled_roots: Vec<Complex64> = roots.iter().chain(roots.iter()).copied().collect();
    let mut c = ComplexMatrix::diagonal(&doubled_roots);
    let certificate = Complex64::i().powu(n as u32) * lambdas.iter().product::<Complex64>();

    let j = structural_j(n);
    let bound = 10.0 * tol.membership_tol;
    let reconstruct = |p: &ComplexMatrix| x.distance(&(&(p * &j) * &p.transpose()));

    if certificate.re < 0.0 {
        c = &c * &determinant_repair(n);
        let p = &b * &c;
        let residual = reconstruct(&p);
        if residual > bound {
            return Err(Error::PfaffianObstruction { sign: -1 });
        }
    }

    let p = &b * &c;
    let residual = reconstruct(&p);
    if residual > bound {
        return Err(Error::Reconstruction { residual, bound });
    }
    Ok(FactorizationResult {
        p,
        residual,
        intermediates: Some(Intermediates {
            b,
            c,
            roots,
            eigenvalues: lambdas,
            certificate: Some(certificate),
        }),
    })
}

/// `X = J·P·J·tP` for an AII point, through the skew representative `Y = tJ·X`.
pub fn factor_aii(point: &SpacePoint, tol: &Tolerances) -> Result<FactorizationResult> {
    let kind = point.kind();
    let x = point.matrix();
    let report = is_member(kind, x, tol)?;
    if kind.family != Family::AII || !report.member {
        return Err(Error::NotInSpace { report });
    }
    let j = structural_j(kind.n);
    let y = &j.transpose() * x;
    let mut result = factor_skew(&y, tol)?;
    result.residual = x.distance(&(&(&(&j * &result.p) * &j) * &result.p.transpose()));
    Ok(result)
}
