//! Sparse polynomial systems `C · (x^{a₁},…,x^{a_ℓ})ᵀ = 0` over the torus.
//!
//! A system is the coefficient matrix `C` (n × ℓ, rational) together with its support
//! `𝒜 = {a₁,…,a_ℓ} ⊂ ℤⁿ`; row `i` is the `i`-th polynomial. `Q` is the convex hull of `𝒜`
//! and `Pᵢ` the Newton polytope of row `i`.

mod audit;
mod parse;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::mixed::{mixed_volume, Method, MixedVolumeReport};
use crate::polytope::Polytope;
use crate::rational::{fmt_rat, Int, Point, Rat};

pub use audit::{
    analyze_system, vanishing_minor, ber_check, cramer_check, failure_linkage, simplicial_nondegeneracy_check, BerReport,
    FaceRankReport, FailureLinkage, SimplicialVerdict, SystemReport,
};
pub use parse::parse_system;

/// Initial forms of a system in a direction `u`; not validated as a system.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedSystem {
    pub direction: Point,
    /// Column indices kept in each row.
    pub supports: Vec<Vec<usize>>,
    /// Same shape as the original `C`, zero outside the kept terms.
    pub c: RatMatrix,
}

impl RestrictedSystem {
    pub fn to_json(&self) -> Value {
        json!({
            "direction": self.direction.iter().map(fmt_rat).collect::<Vec<_>>(),
            "supports": self.supports.iter().map(|s| s.iter().map(|j| j + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "C": self.c.to_strings(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseSystem {
    variables: Vec<String>,
    points: Vec<Vec<i64>>,
    c: RatMatrix,
    /// Notes produced while building the system, e.g. monomials that cancelled.
    pub warnings: Vec<String>,
}

fn default_variables(n: usize) -> Vec<String> {
    match n {
        1..=3 => ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect(),
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

impl SparseSystem {
    /// Validates shapes, distinct support points, and non-zero rows and columns.
    pub fn new(variables: Vec<String>, points: Vec<Vec<i64>>, c: RatMatrix) -> Result<Self> {
        let n = variables.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if c.rows() != n {
            return Err(Error::EquationCount {
                equations: c.rows(),
                variables: n,
            });
        }
        if c.cols() != points.len() {
            return Err(Error::Format(format!(
                "C has {} columns but the support has {} points",
                c.cols(),
                points.len()
            )));
        }
        for p in &points {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.len(),
                });
            }
        }
        for j in 0..points.len() {
            if points[..j].contains(&points[j]) {
                return Err(Error::Format(format!("support point {} is repeated", j + 1)));
            }
        }
        for i in 0..n {
            if c.is_zero_row(i) {
                return Err(Error::ZeroRow(i + 1));
            }
        }
        for j in 0..points.len() {
            if c.is_zero_column(j) {
                return Err(Error::ZeroColumn(j + 1));
            }
        }
        Ok(SparseSystem {
            variables,
            points,
            c,
            warnings: Vec::new(),
        })
    }

    /// Same as [`SparseSystem::new`] with variables `x, y, z` (or `x1…xn`).
    pub fn from_matrix(points: Vec<Vec<i64>>, c: RatMatrix) -> Result<Self> {
        Self::new(default_variables(c.rows()), points, c)
    }

    pub fn n(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn coefficients(&self) -> &RatMatrix {
        &self.c
    }

    fn point(&self, j: usize) -> Point {
        self.points[j].iter().map(|&x| Rat::from_integer(Int::from(x))).collect()
    }

    /// `A` (n × ℓ) has the support points as columns.
    pub fn a_matrix(&self) -> RatMatrix {
        let n = self.n();
        RatMatrix::from_rows((0..n).map(|i| (0..self.points.len()).map(|j| Rat::from_integer(Int::from(self.points[j][i]))).collect()).collect())
            .expect("rectangular")
    }

    /// `Ā` is `A` with a row of ones on top.
    pub fn a_bar(&self) -> RatMatrix {
        let mut rows = vec![vec![Rat::one(); self.points.len()]];
        rows.extend(self.a_matrix().to_rows());
        RatMatrix::from_rows(rows).expect("rectangular")
    }

    /// `(C, A, Ā)`.
    pub fn matrices(&self) -> (RatMatrix, RatMatrix, RatMatrix) {
        (self.c.clone(), self.a_matrix(), self.a_bar())
    }

    /// `𝒜ᵢ`: column indices with a non-zero coefficient in row `i`.
    pub fn supports(&self) -> Vec<Vec<usize>> {
        (0..self.n())
            .map(|i| (0..self.points.len()).filter(|&j| !self.c.get(i, j).is_zero()).collect())
            .collect()
    }

    pub fn newton_polytopes(&self) -> Result<Vec<Polytope>> {
        self.supports()
            .iter()
            .map(|s| Polytope::from_points(s.iter().map(|&j| self.point(j)).collect()))
            .collect()
    }

    /// `Q = conv 𝒜`.
    pub fn support_polytope(&self) -> Result<Polytope> {
        Polytope::from_points((0..self.points.len()).map(|j| self.point(j)).collect())
    }

    /// `n! Vol(Q)`, the count for a generic system with support `𝒜` in every equation.
    pub fn volume_bound(&self) -> Result<Int> {
        Ok(self.support_polytope()?.normalized_volume().to_integer())
    }

    /// The BKK bound `n! V(P₁,…,Pₙ)`, computed by every applicable algorithm.
    pub fn bkk_report(&self, seed: u64) -> Result<MixedVolumeReport> {
        mixed_volume(&self.newton_polytopes()?, Method::All, seed)
    }

    pub fn bkk_bound(&self) -> Result<Int> {
        Ok(self.bkk_report(0)?.normalized.to_integer())
    }

    /// Column indices `ℱ = 𝒜 ∩ Q^u`.
    pub fn face_support(&self, u: &[Rat]) -> Result<Vec<usize>> {
        if u.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: u.len(),
            });
        }
        let vals: Vec<Rat> = (0..self.points.len()).map(|j| crate::rational::dot(u, &self.point(j))).collect();
        let h = vals.iter().max().cloned().expect("non-empty support");
        Ok((0..vals.len()).filter(|&j| vals[j] == h).collect())
    }

    /// The restricted system `f^u`: row `i` keeps the terms on the face `Pᵢ^u`.
    ///
    /// The result keeps every column of `𝒜`, so columns may be zero.
    pub fn restricted_system(&self, u: &[Rat]) -> Result<RestrictedSystem> {
        if u.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: u.len(),
            });
        }
        if u.iter().all(Zero::is_zero) {
            return Err(Error::InvalidVector("restriction direction must be non-zero".into()));
        }
        let mut c = RatMatrix::zeros(self.n(), self.points.len());
        let mut supports = Vec::new();
        for (i, row) in self.supports().into_iter().enumerate() {
            let vals: Vec<Rat> = row.iter().map(|&j| crate::rational::dot(u, &self.point(j))).collect();
            let h = vals.iter().max().cloned().expect("rows are non-zero");
            let face: Vec<usize> = row.iter().zip(&vals).filter(|(_, v)| **v == h).map(|(&j, _)| j).collect();
            for &j in &face {
                c.set(i, j, self.c.get(i, j).clone());
            }
            supports.push(face);
        }
        Ok(RestrictedSystem {
            direction: u.to_vec(),
            supports,
            c,
        })
    }

    /// `L · C` with the same support.
    pub fn left_multiply(&self, l: &RatMatrix) -> Result<SparseSystem> {
        if l.rows() != self.n() || l.cols() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: if l.rows() != self.n() { l.rows() } else { l.cols() },
            });
        }
        if l.determinant()?.is_zero() {
            return Err(Error::Singular);
        }
        SparseSystem::new(self.variables.clone(), self.points.clone(), l.mul(&self.c)?)
    }

    /// Applies `Ā ↦ M̄ Ā`, i.e. a unimodular affine change of exponents.
    ///
    /// `m_bar` is (n+1) × (n+1) with first row `(1,0,…,0)` and determinant ±1.
    pub fn monomial_transform(&self, m_bar: &[Vec<i64>]) -> Result<SparseSystem> {
        let n = self.n();
        if m_bar.len() != n + 1 || m_bar.iter().any(|r| r.len() != n + 1) {
            return Err(Error::InvalidArgument(format!("monomial transform must be {0}x{0}", n + 1)));
        }
        if m_bar[0][0] != 1 || m_bar[0][1..].iter().any(|&x| x != 0) {
            return Err(Error::InvalidArgument("first row of the monomial transform must be (1,0,...,0)".into()));
        }
        let det = crate::linalg::int_det(m_bar.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect());
        if !det.abs().is_one() {
            return Err(Error::InvalidArgument(format!("monomial transform has determinant {det}, not ±1")));
        }
        let points = self
            .points
            .iter()
            .map(|a| {
                (1..=n)
                    .map(|r| {
                        let v = m_bar[r][0] as i128 + (0..n).map(|k| m_bar[r][k + 1] as i128 * a[k] as i128).sum::<i128>();
                        i64::try_from(v).map_err(|_| Error::InvalidArgument("transformed exponent overflows i64".into()))
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SparseSystem::new(self.variables.clone(), points, self.c.clone())
    }

    /// Human-readable polynomials, one per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("vars: {}\n", self.variables.join(", "));
        for i in 0..self.n() {
            let mut line = String::new();
            for j in 0..self.points.len() {
                let c = self.c.get(i, j);
                if c.is_zero() {
                    continue;
                }
                let neg = c.is_negative();
                if line.is_empty() {
                    if neg {
                        line.push('-');
                    }
                } else {
                    line.push_str(if neg { " - " } else { " + " });
                }
                let mag = c.abs();
                let mono: Vec<String> = self.points[j]
                    .iter()
                    .zip(&self.variables)
                    .filter(|(&e, _)| e != 0)
                    .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                    .collect();
                if mono.is_empty() || !mag.is_one() {
                    line.push_str(&fmt_rat(&mag));
                    if !mono.is_empty() {
                        line.push('*');
                    }
                }
                line.push_str(&mono.join("*"));
            }
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n(),
            "variables": self.variables,
            "points": self.points,
            "C": self.c.to_strings(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_merges_and_orders() {
        let s = parse_system("x*y + 2x - x*y + 3 x y; y^-1 - 1/2 = 0").unwrap();
        assert_eq!(s.variables(), ["x", "y"]);
        assert_eq!(s.points(), [vec![1, 1], vec![1, 0], vec![0, -1], vec![0, 0]]);
        assert_eq!(*s.coefficients().get(0, 0), Rat::from_integer(3.into()));
        assert_eq!(*s.coefficients().get(1, 3), Rat::new((-1).into(), 2.into()));
    }

    #[test]
    fn parse_drops_cancelled_monomials() {
        let s = parse_system("x + y - y + 1\nx - 1").unwrap();
        assert_eq!(s.points().len(), 2);
        assert_eq!(s.warnings.len(), 1);
    }

    #[test]
    fn parse_errors_are_located() {
        match parse_system("x + y\nx + $y") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 5)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_system("x - x; y"), Err(Error::ZeroRow(1))));
        assert!(matches!(parse_system("x + y"), Err(Error::EquationCount { .. })));
        assert!(matches!(parse_system("x = 1; y"), Err(Error::Parse { .. })));
        assert!(matches!(parse_system("vars: x\nx + y"), Err(Error::Parse { .. })));
    }

    #[test]
    fn unicode_minus_and_declared_vars() {
        let s = parse_system("vars: a, b\na \u{2212} b; a*b^(−1) + 1".replace('−', "-").as_str()).unwrap();
        assert_eq!(s.variables(), ["a", "b"]);
        assert_eq!(s.points()[2], vec![1, -1]);
    }

    #[test]
    fn text_round_trip() {
        let s = parse_system("1 + 2 x*y^2 - 3/4 x^2*y\nx^2 + y - x*y^2").unwrap();
        let t = parse_system(&s.to_text()).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn transforms_validate() {
        let s = parse_system("1 + x + y; 1 + 2x + 3y").unwrap();
        assert!(matches!(s.left_multiply(&RatMatrix::from_i64(&[&[1, 2], &[2, 4]])), Err(Error::Singular)));
        let t = s.left_multiply(&RatMatrix::from_i64(&[&[1, 0], &[-1, 1]])).unwrap();
        assert_eq!(t.supports()[1], vec![1, 2]);
        let m = vec![vec![1, 0, 0], vec![1, 1, 1], vec![0, 0, 1]];
        let r = s.monomial_transform(&m).unwrap();
        assert_eq!(r.points(), [vec![1, 0], vec![2, 0], vec![2, 1]]);
        assert_eq!(r.volume_bound().unwrap(), s.volume_bound().unwrap());
        assert!(s.monomial_transform(&[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 1]]).is_err());
        assert!(s.restricted_system(&[Rat::zero(), Rat::zero()]).is_err());
        let r = s.restricted_system(&[Rat::one(), Rat::zero()]).unwrap();
        assert_eq!(r.supports, vec![vec![1], vec![1]]);
        assert!(r.c.is_zero_column(0) && r.c.is_zero_column(2));
    }
}
