//! Lusternik–Schnirelmann category bounds for the irreducible symmetric spaces of
//! classical type.
//!
//! Three rules produce every bound:
//!
//! * cup-length of the cohomology ring is a lower bound ([`cup_length`]),
//! * an `(r−1)`-connected complex has `cat ≤ dim / r` ([`ganea_upper`]),
//! * a simply connected Kähler manifold of complex dimension `d` has `cat = d`
//!   ([`kahler_cat`]).
//!
//! For AI and AII the upper bound instead comes from the `n`-set eigenvalue cover in
//! [`crate::cover`]. All arithmetic here is exact.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coefficients {
    Mod2,
    Integer,
}

/// Exterior algebra on generators of the given degrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedAlgebraSpec {
    pub generators: Vec<u32>,
    pub coefficients: Coefficients,
}

impl GradedAlgebraSpec {
    pub fn exterior(generators: Vec<u32>, coefficients: Coefficients) -> Self {
        Self {
            generators,
            coefficients,
        }
    }

    /// `H*(SU(n)/SO(n); Z/2) = Λ(x_2, x_3, …, x_n)`.
    pub fn type_ai(n: u32) -> Self {
        Self::exterior((2..=n).collect(), Coefficients::Mod2)
    }

    /// `H*(SU(2n)/Sp(n); Z) = Λ(x_5, x_9, …, x_{4n−3})`.
    pub fn type_aii(n: u32) -> Self {
        Self::exterior((2..=n).map(|k| 4 * k - 3).collect(), Coefficients::Integer)
    }

    /// `H*(S^n; Z) = Λ(x_n)`.
    pub fn sphere(n: u32) -> Self {
        Self::exterior(vec![n], Coefficients::Integer)
    }

    pub fn degree(&self, m: &Monomial) -> u32 {
        m.0.iter().map(|&i| self.generators[i]).sum()
    }

    /// Product of two basis monomials: `None` when a generator repeats, otherwise the
    /// Koszul sign (always `+1` mod 2) and the merged monomial.
    pub fn multiply(&self, a: &Monomial, b: &Monomial) -> Option<(i8, Monomial)> {
        let mut merged = Vec::with_capacity(a.0.len() + b.0.len());
        let mut swaps = 0usize;
        let (mut i, mut j) = (0, 0);
        while i < a.0.len() || j < b.0.len() {
            let take_b = match (a.0.get(i), b.0.get(j)) {
                (Some(x), Some(y)) if x == y => return None,
                (Some(x), Some(y)) => y < x,
                (None, Some(_)) => true,
                _ => false,
            };
            if take_b {
                let y = b.0[j];
                if self.generators[y] % 2 == 1 {
                    swaps += a.0[i..]
                        .iter()
                        .filter(|&&x| self.generators[x] % 2 == 1)
                        .count();
                }
                merged.push(y);
                j += 1;
            } else {
                merged.push(a.0[i]);
                i += 1;
            }
        }
        let sign = match self.coefficients {
            Coefficients::Mod2 => 1,
            Coefficients::Integer if swaps % 2 == 1 => -1,
            Coefficients::Integer => 1,
        };
        Some((sign, Monomial(merged)))
    }
}

/// Basis monomial `x_{i_1}·…·x_{i_k}` as its sorted generator indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<usize>);

impl Monomial {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        Self(vec![i])
    }
}

/// Length of the longest nonzero product of positive-degree classes.
///
/// Builds the product of the generators one factor at a time, then checks that no
/// further positive-degree factor survives.
pub fn cup_length(spec: &GradedAlgebraSpec) -> usize {
    let mut top = Monomial::unit();
    let mut length = 0;
    for i in 0..spec.generators.len() {
        if spec.generators[i] == 0 {
            continue;
        }
        match spec.multiply(&top, &Monomial::generator(i)) {
            Some((_, next)) => {
                top = next;
                length += 1;
            }
            None => break,
        }
    }
    debug_assert!((0..spec.generators.len())
        .filter(|&i| spec.generators[i] > 0)
        .all(|i| spec.multiply(&top, &Monomial::generator(i)).is_none()));
    length
}

/// `floor(dimension / r)` for an `(r−1)`-connected complex.
pub fn ganea_upper(dimension: u64, connectivity_r: i64) -> Result<u64> {
    if connectivity_r < 1 {
        return Err(Error::InvalidConnectivity(connectivity_r));
    }
    Ok(dimension / connectivity_r as u64)
}

/// Category of a simply connected Kähler manifold of complex dimension `d`.
pub fn kahler_cat(complex_dimension: u64) -> u64 {
    complex_dimension
}

/// Upper bound from an open cover by `sets` sets that are each contractible in the space.
pub fn cover_upper(sets: u64) -> u64 {
    sets.saturating_sub(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetricFamily {
    AI,
    AII,
    AIII,
    BDI,
    BDII,
    DIII,
    CI,
    CII,
}

impl SymmetricFamily {
    pub const ALL: [SymmetricFamily; 8] = [
        SymmetricFamily::AI,
        SymmetricFamily::AII,
        SymmetricFamily::AIII,
        SymmetricFamily::BDI,
        SymmetricFamily::BDII,
        SymmetricFamily::DIII,
        SymmetricFamily::CI,
        SymmetricFamily::CII,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            SymmetricFamily::AI => "A I",
            SymmetricFamily::AII => "A II",
            SymmetricFamily::AIII => "A III",
            SymmetricFamily::BDI => "BD I",
            SymmetricFamily::BDII => "BD II",
            SymmetricFamily::DIII => "D III",
            SymmetricFamily::CI => "C I",
            SymmetricFamily::CII => "C II",
        }
    }

    /// Case-insensitive parse of `ai`, `A II`, `bd_i`, `cii`, …
    pub fn parse(s: &str) -> Option<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_uppercase();
        Self::ALL.into_iter().find(|f| {
            f.label()
                .chars()
                .filter(|c| !c.is_whitespace())
                .collect::<String>()
                == key
        })
    }

    fn takes_pair(&self) -> bool {
        matches!(
            self,
            SymmetricFamily::AIII | SymmetricFamily::BDI | SymmetricFamily::CII
        )
    }
}

impl fmt::Display for SymmetricFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Params {
    /// `n` or `l`.
    Rank(u64),
    /// `(p, q)`.
    Pair(u64, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kahler {
    Yes,
    No,
    Conditional,
}

/// A category value that may be open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Known(u64),
    Unknown,
}

impl Bound {
    pub fn known(&self) -> Option<u64> {
        match self {
            Bound::Known(v) => Some(*v),
            Bound::Unknown => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Known(v) => write!(f, "{v}"),
            Bound::Unknown => f.write_str("?"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connectivity {
    /// `r` such that the space is `(r−1)`-connected.
    Known(u64),
    NotUsed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub family: SymmetricFamily,
    pub params: Params,
    pub dimension: u64,
    pub kahler: Kahler,
    pub connectivity: Connectivity,
    pub cat_lower: Bound,
    pub cat_upper: Bound,
    pub cat_exact: Bound,
}

fn invalid(family: SymmetricFamily, condition: &str) -> Error {
    Error::InvalidParams {
        family: family.label(),
        condition: condition.to_string(),
    }
}

fn check_params(family: SymmetricFamily, params: Params) -> Result<()> {
    use SymmetricFamily::*;
    match (family, params) {
        (f, Params::Rank(_)) if f.takes_pair() => Err(invalid(f, "expects (p, q)")),
        (f, Params::Pair(..)) if !f.takes_pair() => Err(invalid(f, "expects a single rank")),
        (AI, Params::Rank(n)) if n <= 2 => Err(invalid(AI, "n > 2")),
        (AII, Params::Rank(n)) if n <= 1 => Err(invalid(AII, "n > 1")),
        (AIII | CII, Params::Pair(p, q)) if !(p >= q && q >= 1) => {
            Err(invalid(family, "p >= q >= 1"))
        }
        (BDI, Params::Pair(p, q)) if !(p >= q && q >= 2) => Err(invalid(BDI, "p >= q >= 2")),
        (BDI, Params::Pair(p, q)) if p + q == 4 => Err(invalid(BDI, "p + q != 4")),
        (BDII, Params::Rank(n)) if n < 2 => Err(invalid(BDII, "n >= 2")),
        (DIII, Params::Rank(l)) if l < 4 => Err(invalid(DIII, "l >= 4")),
        (CI, Params::Rank(n)) if n < 3 => Err(invalid(CI, "n >= 3")),
        _ => Ok(()),
    }
}

fn exact_from(lower: Bound, upper: Bound) -> Bound {
    match (lower, upper) {
        (Bound::Known(a), Bound::Known(b)) if a == b => Bound::Known(a),
        _ => Bound::Unknown,
    }
}

fn kahler_descriptor(family: SymmetricFamily, params: Params, dimension: u64) -> SpaceDescriptor {
    let cat = Bound::Known(kahler_cat(dimension / 2));
    SpaceDescriptor {
        family,
        params,
        dimension,
        kahler: Kahler::Yes,
        connectivity: Connectivity::NotUsed,
        cat_lower: cat,
        cat_upper: cat,
        cat_exact: cat,
    }
}

/// Fills a descriptor by applying the three rules to one space.
pub fn describe(family: SymmetricFamily, params: Params) -> Result<SpaceDescriptor> {
    use SymmetricFamily::*;
    check_params(family, params)?;
    let d = match (family, params) {
        (AI | AII, Params::Rank(n)) => {
            let (dimension, algebra) = if family == AI {
                ((n - 1) * (n + 2) / 2, GradedAlgebraSpec::type_ai(n as u32))
            } else {
                ((n - 1) * (2 * n + 1), GradedAlgebraSpec::type_aii(n as u32))
            };
            let lower = Bound::Known(cup_length(&algebra) as u64);
            let upper = Bound::Known(cover_upper(n));
            SpaceDescriptor {
                family,
                params,
                dimension,
                kahler: Kahler::No,
                connectivity: Connectivity::NotUsed,
                cat_lower: lower,
                cat_upper: upper,
                cat_exact: exact_from(lower, upper),
            }
        }
        (AIII, Params::Pair(p, q)) => kahler_descriptor(family, params, 2 * p * q),
        (BDI, Params::Pair(p, q)) => {
            if q == 2 {
                kahler_descriptor(family, params, p * q)
            } else {
                SpaceDescriptor {
                    family,
                    params,
                    dimension: p * q,
                    kahler: Kahler::No,
                    connectivity: Connectivity::NotUsed,
                    cat_lower: Bound::Unknown,
                    cat_upper: Bound::Unknown,
                    cat_exact: Bound::Unknown,
                }
            }
        }
        (BDII, Params::Rank(n)) => {
            // homeomorphic to S^n, which is (n−1)-connected
            let lower = Bound::Known(cup_length(&GradedAlgebraSpec::sphere(n as u32)) as u64);
            let upper = Bound::Known(ganea_upper(n, n as i64)?);
            SpaceDescriptor {
                family,
                params,
                dimension: n,
                kahler: if n == 2 { Kahler::Yes } else { Kahler::No },
                connectivity: Connectivity::Known(n),
                cat_lower: lower,
                cat_upper: upper,
                cat_exact: exact_from(lower, upper),
            }
        }
        (DIII, Params::Rank(l)) => kahler_descriptor(family, params, l * (l - 1)),
        (CI, Params::Rank(n)) => kahler_descriptor(family, params, n * (n + 1)),
        (CII, Params::Pair(p, q)) => {
            // 3-connected; cup-length agrees with the complex Grassmannian U(p+q)/(U(p)×U(q))
            let dimension = 4 * p * q;
            let grassmannian = describe(AIII, Params::Pair(p, q))?;
            let lower = grassmannian.cat_exact;
            let upper = Bound::Known(ganea_upper(dimension, 4)?);
            SpaceDescriptor {
                family,
                params,
                dimension,
                kahler: Kahler::No,
                connectivity: Connectivity::Known(4),
                cat_lower: lower,
                cat_upper: upper,
                cat_exact: exact_from(lower, upper),
            }
        }
        _ => unreachable!("checked by check_params"),
    };
    Ok(d)
}

/// One row of the classification table, with formulas as text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub family: String,
    pub space: String,
    pub kahler: String,
    pub dimension: String,
    pub cat: String,
}

/// The classification table, one row per family.
pub fn table_rows() -> Vec<TableRow> {
    let row =
        |f: SymmetricFamily, space: &str, kahler: &str, dimension: &str, cat: &str| TableRow {
            family: f.label().to_string(),
            space: space.to_string(),
            kahler: kahler.to_string(),
            dimension: dimension.to_string(),
            cat: cat.to_string(),
        };
    use SymmetricFamily::*;
    vec![
        row(AI, "SU(n)/SO(n) (n>2)", "no", "(n-1)(n+2)/2", "n-1"),
        row(AII, "SU(2n)/Sp(n) (n>1)", "no", "(n-1)(2n+1)", "n-1"),
        row(AIII, "U(p+q)/(U(p)xU(q)) (p>=q>=1)", "yes", "2pq", "pq"),
        row(
            BDI,
            "SO(p+q)/(SO(p)xSO(q)) (p>=q>=2, p+q!=4)",
            "yes (q=2); no (q!=2)",
            "pq",
            "p (q=2); ? (q!=2)",
        ),
        row(
            BDII,
            "SO(n+1)/SO(n) (n>=2)",
            "yes (n=2); no (n!=2)",
            "n",
            "1",
        ),
        row(DIII, "SO(2l)/U(l) (l>=4)", "yes", "l(l-1)", "l(l-1)/2"),
        row(CI, "Sp(n)/U(n) (n>=3)", "yes", "n(n+1)", "n(n+1)/2"),
        row(CII, "Sp(p+q)/(Sp(p)xSp(q)) (p>=q>=1)", "no", "4pq", "pq"),
    ]
}

/// Dimension and category read off the table's closed forms, bypassing the rules.
pub fn tabulated(family: SymmetricFamily, params: Params) -> Result<(u64, Bound)> {
    use SymmetricFamily::*;
    check_params(family, params)?;
    Ok(match (family, params) {
        (AI, Params::Rank(n)) => ((n - 1) * (n + 2) / 2, Bound::Known(n - 1)),
        (AII, Params::Rank(n)) => ((n - 1) * (2 * n + 1), Bound::Known(n - 1)),
        (AIII, Params::Pair(p, q)) => (2 * p * q, Bound::Known(p * q)),
        (BDI, Params::Pair(p, 2)) => (2 * p, Bound::Known(p)),
        (BDI, Params::Pair(p, q)) => (p * q, Bound::Unknown),
        (BDII, Params::Rank(n)) => (n, Bound::Known(1)),
        (DIII, Params::Rank(l)) => (l * (l - 1), Bound::Known(l * (l - 1) / 2)),
        (CI, Params::Rank(n)) => (n * (n + 1), Bound::Known(n * (n + 1) / 2)),
        (CII, Params::Pair(p, q)) => (4 * p * q, Bound::Known(p * q)),
        _ => unreachable!("checked by check_params"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Markdown,
    Csv,
}

const HEADER: [&str; 5] = ["family", "G/K", "Kähler", "dimension", "cat"];

pub fn render_table(format: TableFormat) -> String {
    let rows = table_rows();
    match format {
        TableFormat::Markdown => {
            let mut out = format!("| {} |\n", HEADER.join(" | "));
            out.push_str(&format!("|{}\n", "---|".repeat(HEADER.len())));
            for r in rows {
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} |\n",
                    r.family, r.space, r.kahler, r.dimension, r.cat
                ));
            }
            out
        }
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(HEADER).expect("writing to memory");
            for r in rows {
                w.write_record([&r.family, &r.space, &r.kahler, &r.dimension, &r.cat])
                    .expect("writing to memory");
            }
            String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SymmetricFamily::*;

    #[test]
    fn cup_length_examples() {
        for n in 2..=8 {
            assert_eq!(cup_length(&GradedAlgebraSpec::type_ai(n)), (n - 1) as usize);
            assert_eq!(
                cup_length(&GradedAlgebraSpec::type_aii(n)),
                (n - 1) as usize
            );
        }
        assert_eq!(
            cup_length(&GradedAlgebraSpec::exterior(vec![], Coefficients::Integer)),
            0
        );
        assert_eq!(cup_length(&GradedAlgebraSpec::sphere(7)), 1);
    }

    #[test]
    fn aii_generator_degrees() {
        assert_eq!(GradedAlgebraSpec::type_aii(4).generators, vec![5, 9, 13]);
        assert_eq!(GradedAlgebraSpec::type_ai(4).generators, vec![2, 3, 4]);
    }

    #[test]
    fn koszul_signs() {
        let spec = GradedAlgebraSpec::exterior(vec![5, 9, 2], Coefficients::Integer);
        let x0 = Monomial::generator(0);
        let x1 = Monomial::generator(1);
        let x2 = Monomial::generator(2);
        assert_eq!(spec.multiply(&x0, &x1), Some((1, Monomial(vec![0, 1]))));
        assert_eq!(spec.multiply(&x1, &x0), Some((-1, Monomial(vec![0, 1]))));
        // even-degree generator commutes
        assert_eq!(spec.multiply(&x2, &x0), Some((1, Monomial(vec![0, 2]))));
        assert_eq!(spec.multiply(&x0, &x0), None);
        assert_eq!(spec.degree(&Monomial(vec![0, 1, 2])), 16);
    }

    #[test]
    fn ganea_examples() {
        assert_eq!(ganea_upper(8, 4).unwrap(), 2);
        for n in 1..10 {
            assert_eq!(ganea_upper(n, n as i64).unwrap(), 1);
        }
        assert_eq!(ganea_upper(0, 1).unwrap(), 0);
        assert!(matches!(
            ganea_upper(4, 0),
            Err(Error::InvalidConnectivity(0))
        ));
    }

    #[test]
    fn kahler_examples() {
        assert_eq!(kahler_cat(6), 6);
        assert_eq!(kahler_cat(0), 0);
    }

    #[test]
    fn describe_examples() {
        let ai4 = describe(AI, Params::Rank(4)).unwrap();
        assert_eq!(ai4.dimension, 9);
        assert_eq!(ai4.cat_exact, Bound::Known(3));

        let cii = describe(CII, Params::Pair(2, 1)).unwrap();
        assert_eq!(cii.dimension, 8);
        assert_eq!(cii.cat_lower, Bound::Known(2));
        assert_eq!(cii.cat_upper, Bound::Known(2));
        assert_eq!(cii.cat_exact, Bound::Known(2));

        let bdi = describe(BDI, Params::Pair(5, 3)).unwrap();
        assert_eq!(bdi.dimension, 15);
        assert_eq!(bdi.cat_exact, Bound::Unknown);
        assert_eq!(bdi.cat_lower, Bound::Unknown);

        let bdi2 = describe(BDI, Params::Pair(5, 2)).unwrap();
        assert_eq!(bdi2.kahler, Kahler::Yes);
        assert_eq!(bdi2.cat_exact, Bound::Known(5));

        let d3 = describe(DIII, Params::Rank(5)).unwrap();
        assert_eq!(d3.cat_exact, Bound::Known(10));
    }

    #[test]
    fn side_conditions() {
        assert!(describe(AI, Params::Rank(2)).is_err());
        assert!(describe(AII, Params::Rank(1)).is_err());
        assert!(describe(BDI, Params::Pair(2, 2)).is_err());
        assert!(describe(BDI, Params::Pair(2, 3)).is_err());
        assert!(describe(DIII, Params::Rank(3)).is_err());
        assert!(describe(CI, Params::Rank(2)).is_err());
        assert!(describe(BDII, Params::Rank(1)).is_err());
        assert!(describe(AIII, Params::Rank(3)).is_err());
        assert!(describe(AI, Params::Pair(3, 1)).is_err());
        match describe(BDI, Params::Pair(3, 1)) {
            Err(Error::InvalidParams { condition, .. }) => assert_eq!(condition, "p >= q >= 2"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn family_parsing() {
        assert_eq!(SymmetricFamily::parse("ai"), Some(AI));
        assert_eq!(SymmetricFamily::parse("BD II"), Some(BDII));
        assert_eq!(SymmetricFamily::parse("c_ii"), Some(CII));
        assert_eq!(SymmetricFamily::parse("e6"), None);
    }

    #[test]
    fn sphere_identity() {
        for n in 2..12u64 {
            assert_eq!(
                ganea_upper(n, n as i64).unwrap(),
                cup_length(&GradedAlgebraSpec::sphere(n as u32)) as u64
            );
        }
    }

    #[test]
    fn markdown_has_eight_rows() {
        let md = render_table(TableFormat::Markdown);
        assert_eq!(md.lines().count(), 10);
        assert!(md.contains("| BD I |"));
    }
}
