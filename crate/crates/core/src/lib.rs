//! Matrix models of the symmetric spaces `SU(n)/SO(n)` (AI) and `SU(2n)/Sp(n)` (AII),
//! their Takagi-type factorizations, branch-restricted logarithms, categorical covers
//! with explicit contracting homotopies, and Lusternik–Schnirelmann category bounds.

pub mod catbounds;
pub mod cover;
pub mod error;
pub mod factor;
pub mod homotopy;
pub mod linalg;
pub mod spaces;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Tolerances};
pub use spaces::{Family, MembershipReport, SpaceKind, SpacePoint};
