//! Categorical open covers by eigenvalue avoidance.
//!
//! Pick `n` distinct unit complex numbers `λ_1, …, λ_n` whose product (AI) or product
//! of squares (AII) differs from one. Then `A_r = { X | λ_r ∉ spec X }` is open, and
//! the `A_r` cover the space: a member containing every `λ_r` would have the wrong
//! determinant. For AII this uses the even multiplicity of every eigenvalue.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homotopy::spectral_margin;
use crate::linalg::{
    angle_2pi, angular_distance, circular_clusters, eig_normal, ComplexMatrix, Tolerances,
};
use crate::spaces::{is_member, sample, Family, SpaceKind, SpacePoint};

/// Smallest accepted `|certificate − 1|`.
const MIN_CERTIFICATE_GAP: f64 = 0.5;

/// The avoided eigenvalues of a cover.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverConfig {
    pub kind: SpaceKind,
    pub lambdas: Vec<Complex64>,
    /// `∏λ_r` for AI, `∏λ_r²` for AII.
    pub certificate: Complex64,
}

fn certificate(kind: SpaceKind, lambdas: &[Complex64]) -> Complex64 {
    let product: Complex64 = lambdas.iter().product();
    match kind.family {
        Family::AI => product,
        Family::AII => product * product,
    }
}

impl CoverConfig {
    pub fn new(kind: SpaceKind, lambdas: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        if lambdas.len() != kind.n {
            return Err(Error::InvalidCover(format!(
                "{} needs {} avoided eigenvalues, got {}",
                kind,
                kind.n,
                lambdas.len()
            )));
        }
        if let Some(l) = lambdas.iter().find(|l| (l.norm() - 1.0).abs() > 1e-12) {
            return Err(Error::InvalidCover(format!("|{l}| is not 1")));
        }
        for (i, a) in lambdas.iter().enumerate() {
            for b in &lambdas[i + 1..] {
                if angular_distance(angle_2pi(*a), angle_2pi(*b)) <= tol.cluster_tol {
                    return Err(Error::InvalidCover(format!("{a} and {b} coincide")));
                }
            }
        }
        let certificate = certificate(kind, &lambdas);
        if (certificate - 1.0).norm() < MIN_CERTIFICATE_GAP {
            return Err(Error::InvalidCover(format!(
                "certificate {certificate} is within {MIN_CERTIFICATE_GAP} of 1"
            )));
        }
        Ok(Self {
            kind,
            lambdas,
            certificate,
        })
    }

    /// Branch angles `arg λ_r` in `[0, 2π)`.
    pub fn alphas(&self) -> Vec<f64> {
        self.lambdas.iter().map(|l| angle_2pi(*l)).collect()
    }
}

/// `λ_r = e^{iπ/(2n)}·e^{2πir/n}`, `r = 1, …, n`.
///
/// `∏λ_r = ±i` and `∏λ_r² = −1`, so one choice serves both families.
pub fn default_cover(kind: SpaceKind) -> CoverConfig {
    let n = kind.n.max(1) as f64;
    let lambdas: Vec<Complex64> = (1..=kind.n)
        .map(|r| Complex64::from_polar(1.0, PI / (2.0 * n) + 2.0 * PI * r as f64 / n))
        .collect();
    CoverConfig {
        kind,
        certificate: certificate(kind, &lambdas),
        lambdas,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverClassification {
    /// `memberships[r]` is whether the point lies in `A_r`.
    pub memberships: Vec<bool>,
    /// Angular distance from `λ_r` to the nearest eigenvalue.
    pub margins: Vec<f64>,
    /// Index maximizing the margin (lowest on ties), if any set contains the point.
    pub witness: Option<usize>,
}

impl CoverClassification {
    pub fn is_covered(&self) -> bool {
        self.memberships.iter().any(|m| *m)
    }
}

/// Classifies any unitary matrix of the right side, member or not.
pub fn classify_matrix(
    config: &CoverConfig,
    x: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<CoverClassification> {
    let side = config.kind.ambient_size();
    if x.n() != side {
        return Err(Error::DimensionMismatch {
            expected: side,
            found: x.n(),
        });
    }
    let residual = x.unitarity_residual();
    if residual > tol.membership_tol {
        return Err(Error::NotUnitary { residual });
    }
    let eig = eig_normal(x, tol)?;
    let margins: Vec<f64> = config
        .alphas()
        .into_iter()
        .map(|alpha| spectral_margin(&eig.eigenvalues, alpha).0)
        .collect();
    let memberships: Vec<bool> = margins.iter().map(|m| *m >= tol.branch_margin).collect();
    let mut witness = None;
    for (r, m) in margins.iter().enumerate() {
        if memberships[r] && witness.is_none_or(|w: usize| *m > margins[w]) {
            witness = Some(r);
        }
    }
    Ok(CoverClassification {
        memberships,
        margins,
        witness,
    })
}

/// Classifies a space member into the sets `A_r`.
pub fn classify(
    config: &CoverConfig,
    point: &SpacePoint,
    tol: &Tolerances,
) -> Result<CoverClassification> {
    if point.kind() != config.kind {
        return Err(Error::DimensionMismatch {
            expected: config.kind.ambient_size(),
            found: point.matrix().n(),
        });
    }
    let report = is_member(point.kind(), point.matrix(), tol)?;
    if !report.member {
        return Err(Error::NotInSpace { report });
    }
    classify_matrix(config, point.matrix(), tol)
}

/// One eigenvalue cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenCluster {
    pub eigenvalue: Complex64,
    pub multiplicity: usize,
}

/// Clusters the spectrum of an AII member and checks every multiplicity is even.
pub fn multiplicity_audit(point: &SpacePoint, tol: &Tolerances) -> Result<Vec<EigenCluster>> {
    let report = is_member(point.kind(), point.matrix(), tol)?;
    if point.kind().family != Family::AII || !report.member {
        return Err(Error::NotInSpace { report });
    }
    let eig = eig_normal(point.matrix(), tol)?;
    let angles: Vec<f64> = eig.eigenvalues.iter().map(|z| angle_2pi(*z)).collect();

    let mut clusters = Vec::new();
    for members in circular_clusters(&angles, tol.cluster_tol, 2.0 * PI) {
        let mean: Complex64 = members
            .iter()
            .map(|&k| Complex64::from_polar(1.0, angles[k]))
            .sum();
        let angle = angle_2pi(mean);
        let mut spread: f64 = 0.0;
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                spread = spread.max(angular_distance(angles[a], angles[b]));
            }
        }
        if spread > 10.0 * tol.cluster_tol {
            return Err(Error::ClusterSpread { angle, spread });
        }
        if members.len() % 2 != 0 {
            return Err(Error::OddMultiplicity {
                angle,
                multiplicity: members.len(),
            });
        }
        clusters.push(EigenCluster {
            eigenvalue: Complex64::from_polar(1.0, angle),
            multiplicity: members.len(),
        });
    }
    clusters.sort_by(|a, b| angle_2pi(a.eigenvalue).total_cmp(&angle_2pi(b.eigenvalue)));
    Ok(clusters)
}

/// Monte-Carlo check of the covering property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverAuditReport {
    pub kind: SpaceKind,
    pub trials: usize,
    pub covered: usize,
    pub covered_fraction: f64,
    /// How often each `A_r` was the witness.
    pub occupancy: Vec<usize>,
    pub min_witness_margin: f64,
    /// Samples failing [`multiplicity_audit`]; AII only.
    pub multiplicity_failures: Option<usize>,
}

/// Samples `trials` points (seeds `seed, seed + 1, …`) and classifies each under the
/// default cover.
pub fn cover_audit(
    kind: SpaceKind,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<CoverAuditReport> {
    let config = default_cover(kind);
    let mut occupancy = vec![0; kind.n];
    let mut covered = 0;
    let mut min_witness_margin = f64::INFINITY;
    let mut multiplicity_failures = (kind.family == Family::AII).then_some(0);

    for t in 0..trials {
        let point = sample(kind, seed.wrapping_add(t as u64))?;
        let class = classify(&config, &point, tol)?;
        if let Some(w) = class.witness {
            covered += 1;
            occupancy[w] += 1;
            min_witness_margin = min_witness_margin.min(class.margins[w]);
        }
        if let Some(failures) = multiplicity_failures.as_mut() {
            if multiplicity_audit(&point, tol).is_err() {
                *failures += 1;
            }
        }
    }

    Ok(CoverAuditReport {
        kind,
        trials,
        covered,
        covered_fraction: if trials == 0 {
            1.0
        } else {
            covered as f64 / trials as f64
        },
        occupancy,
        min_witness_margin,
        multiplicity_failures,
    })
}
