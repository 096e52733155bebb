//! Branch-restricted logarithm and the linear contracting homotopies.
//!
//! For a unitary `X` without `e^{iα}` in its spectrum, every eigenvalue angle has a
//! unique lift into `(α, α + 2π)`; `log X = P·D(iθ)·P*` uses those lifts. When `det X = 1`
//! the trace of the logarithm is `2πik` for an integer winding `k`, and
//!
//! ```text
//! F(X, s) = exp((1 − s)·log X + s·c·E),   c = 2πik/m   (m = side of X)
//! ```
//!
//! stays inside the space for every `s ∈ [0, 1]` and ends at the scalar `e^c·E`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    angle_2pi, angular_distance, eig_normal, exp_skew_hermitian, normalize_angle, ComplexMatrix,
    Tolerances,
};
use crate::spaces::{is_member, Family, MembershipReport, SpaceKind, SpacePoint};

/// Logarithm with eigenvalue angles lifted into `(alpha, alpha + 2π)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchLog {
    #[serde(rename = "H")]
    pub h: ComplexMatrix,
    pub alpha: f64,
    /// `round(Im tr H / 2π)`.
    pub winding: i64,
    /// Smallest angular distance of an eigenvalue of the source from `e^{iα}`.
    pub margin: f64,
}

impl BranchLog {
    /// `|Im tr H / 2π − winding|`.
    pub fn winding_deviation(&self) -> f64 {
        (self.h.trace().im / (2.0 * PI) - self.winding as f64).abs()
    }
}

/// Smallest angular distance between any eigenvalue and the angle `alpha`.
pub fn spectral_margin(eigenvalues: &[Complex64], alpha: f64) -> (f64, f64) {
    eigenvalues
        .iter()
        .map(|z| {
            let a = angle_2pi(*z);
            (angular_distance(a, alpha), a)
        })
        .fold((f64::INFINITY, 0.0), |best, cur| {
            if cur.0 < best.0 {
                cur
            } else {
                best
            }
        })
}

pub fn branch_log(x: &ComplexMatrix, alpha: f64, tol: &Tolerances) -> Result<BranchLog> {
    let residual = x.unitarity_residual();
    if residual > tol.membership_tol {
        return Err(Error::NotUnitary { residual });
    }
    let alpha = normalize_angle(alpha);
    let eig = eig_normal(x, tol)?;

    let (margin, angle) = spectral_margin(&eig.eigenvalues, alpha);
    if margin < tol.branch_margin {
        return Err(Error::BranchViolation {
            alpha,
            angle,
            margin,
        });
    }

    let lifted: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|z| {
            let theta = alpha + normalize_angle(angle_2pi(*z) - alpha);
            Complex64::new(0.0, theta)
        })
        .collect();
    let raw = &(&eig.p * &ComplexMatrix::diagonal(&lifted)) * &eig.p.adjoint();
    // P is unitary only to rounding; project back onto the skew-Hermitian matrices
    let h = (&raw - &raw.adjoint()).scale(Complex64::new(0.5, 0.0));
    let winding = (h.trace().im / (2.0 * PI)).round() as i64;
    Ok(BranchLog {
        h,
        alpha,
        winding,
        margin,
    })
}

/// One evaluation of the homotopy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathSample {
    pub s: f64,
    pub matrix: ComplexMatrix,
    pub residuals: MembershipReport,
}

#[derive(Debug, Clone)]
pub struct HomotopyPath {
    pub kind: SpaceKind,
    pub source: SpacePoint,
    /// Diagonal value of the endpoint `X_0`.
    pub target_scalar: Complex64,
    pub winding: i64,
    pub samples: Vec<PathSample>,
}

impl HomotopyPath {
    pub fn max_membership_residual(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.residuals.max_residual())
            .fold(0.0, f64::max)
    }

    /// `‖F(X, 0) − X‖_F`.
    pub fn start_residual(&self) -> f64 {
        self.samples[0].matrix.distance(self.source.matrix())
    }

    /// `‖F(X, 1) − target_scalar·E‖_F`.
    pub fn end_residual(&self) -> f64 {
        let last = &self.samples[self.samples.len() - 1].matrix;
        last.distance(&ComplexMatrix::scalar(last.n(), self.target_scalar))
    }
}

/// `c` in `F(X, s)`: `2πik/n` for AI and `πik/n` for AII.
pub fn endpoint_exponent(kind: SpaceKind, winding: i64) -> Complex64 {
    let k = winding as f64;
    let n = kind.n as f64;
    match kind.family {
        Family::AI => Complex64::new(0.0, 2.0 * PI * k / n),
        Family::AII => Complex64::new(0.0, PI * k / n),
    }
}

/// Evaluates `F(X, s)` at `s = 0, 1/steps, …, 1` and checks every point.
pub fn contract(
    point: &SpacePoint,
    alpha: f64,
    steps: usize,
    tol: &Tolerances,
) -> Result<HomotopyPath> {
    let steps = steps.max(1);
    let kind = point.kind();
    let log = branch_log(point.matrix(), alpha, tol)?;
    let exponent = endpoint_exponent(kind, log.winding);
    let m = kind.ambient_size();
    let scalar = ComplexMatrix::scalar(m, exponent);

    let mut samples = Vec::with_capacity(steps + 1);
    for step in 0..=steps {
        let s = step as f64 / steps as f64;
        let generator =
            &log.h.scale(Complex64::new(1.0 - s, 0.0)) + &scalar.scale(Complex64::new(s, 0.0));
        let skew = (&generator.adjoint() + &generator).frobenius_norm();
        if skew > tol.relative_to(generator.frobenius_norm()) {
            return Err(Error::NotSkewHermitian { residual: skew });
        }
        let matrix = exp_skew_hermitian(&generator, tol)?;
        let residuals = is_member(kind, &matrix, tol)?;
        if residuals.max_residual() > 100.0 * tol.membership_tol {
            return Err(Error::MembershipDrift {
                s,
                residual: residuals.max_residual(),
            });
        }
        samples.push(PathSample {
            s,
            matrix,
            residuals,
        });
    }

    Ok(HomotopyPath {
        kind,
        source: point.clone(),
        target_scalar: exponent.exp(),
        winding: log.winding,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Winding {
    Consistent(i64),
    /// Distinct winding values, ascending.
    Inconsistent(Vec<i64>),
}

/// Common winding index of a set of points at one branch angle.
pub fn winding_of_component(
    points: &[SpacePoint],
    alpha: f64,
    tol: &Tolerances,
) -> Result<Winding> {
    let mut values = Vec::with_capacity(points.len());
    for p in points {
        values.push(branch_log(p.matrix(), alpha, tol)?.winding);
    }
    values.sort_unstable();
    values.dedup();
    Ok(match values.as_slice() {
        [k] => Winding::Consistent(*k),
        _ => Winding::Inconsistent(values),
    })
}
