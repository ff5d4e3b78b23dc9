//! Primitive vectors and unimodular flattening of hyperplane sublattices.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rational::{gcd_all, int_point, Int, Point, Rat};

/// Non-zero integer vector whose entries have gcd 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct PrimitiveVector(Vec<Int>);

impl PrimitiveVector {
    pub fn new(coords: Vec<Int>) -> Result<Self> {
        let g = gcd_all(&coords);
        if g.is_zero() {
            return Err(Error::InvalidVector("zero vector is not primitive".into()));
        }
        if !g.is_one() {
            return Err(Error::InvalidVector(format!(
                "{coords:?} has gcd {g}, not primitive"
            )));
        }
        Ok(PrimitiveVector(coords))
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_point(&self) -> Point {
        int_point(&self.0)
    }
}

impl fmt::Debug for PrimitiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<i64>> for PrimitiveVector {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::from_i64(&v)
    }
}

impl From<PrimitiveVector> for Vec<i64> {
    fn from(v: PrimitiveVector) -> Vec<i64> {
        v.0.iter()
            .map(|c| i64::try_from(c).expect("primitive vector entry exceeds i64"))
            .collect()
    }
}

/// Unimodular `W` (returned as columns) with `uᵀ W = e₁ᵀ`.
///
/// Column 0 is a lattice vector `v` with `⟨u,v⟩ = 1`; the remaining columns are a
/// basis of `u^⊥ ∩ ℤⁿ`.
fn unimodular_completion(u: &PrimitiveVector) -> Vec<Vec<Int>> {
    let n = u.dim();
    let mut row: Vec<Int> = u.coords().to_vec();
    let mut cols: Vec<Vec<Int>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect();
    // Euclid on the entries of uᵀ, mirrored as column operations on W.
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&j| !row[j].is_zero()).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let k = *nonzero.iter().min_by_key(|&&j| row[j].abs()).unwrap();
        for &j in &nonzero {
            if j == k {
                continue;
            }
            let q = row[j].div_floor(&row[k]);
            row[j] = &row[j] - &q * &row[k];
            let ck = cols[k].clone();
            for (x, y) in cols[j].iter_mut().zip(&ck) {
                *x -= &q * y;
            }
        }
    }
    let k = (0..n).find(|&j| !row[j].is_zero()).expect("primitive vector is non-zero");
    cols.swap(0, k);
    row.swap(0, k);
    if row[0].is_negative() {
        for x in cols[0].iter_mut() {
            *x = -x.clone();
        }
    }
    cols
}

/// A lattice basis of `u^⊥ ∩ ℤⁿ` (n − 1 vectors).
pub fn sublattice_basis(u: &PrimitiveVector) -> Vec<Vec<Int>> {
    unimodular_completion(u).into_iter().skip(1).collect()
}

/// Unimodular coordinates on the hyperplane `u^⊥`: maps lattice points of `u^⊥` onto ℤⁿ⁻¹.
#[derive(Clone, Debug)]
pub struct LatticeFlattening {
    normal: PrimitiveVector,
    /// Rows 1.. of W⁻¹.
    coordinate_rows: Vec<Vec<Rat>>,
}

impl LatticeFlattening {
    pub fn new(u: &PrimitiveVector) -> Self {
        let cols = unimodular_completion(u);
        let n = u.dim();
        let w = RatMatrix::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| Rat::from_integer(cols[j][i].clone())).collect())
                .collect(),
        )
        .expect("square");
        let inv = w.inverse().expect("unimodular matrix is invertible");
        LatticeFlattening {
            normal: u.clone(),
            coordinate_rows: (1..n).map(|i| inv.row(i).to_vec()).collect(),
        }
    }

    pub fn normal(&self) -> &PrimitiveVector {
        &self.normal
    }

    /// Coordinates of a vector of `u^⊥` with respect to the sublattice basis.
    pub fn flatten(&self, x: &[Rat]) -> Point {
        self.coordinate_rows
            .iter()
            .map(|r| crate::rational::dot(r, x))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_det;
    use crate::rational::int_dot;

    fn check_basis(u: &[i64]) {
        let pv = PrimitiveVector::from_i64(u).unwrap();
        let w = unimodular_completion(&pv);
        assert_eq!(int_dot(pv.coords(), &w[0]), Int::one());
        for b in &w[1..] {
            assert!(int_dot(pv.coords(), b).is_zero());
        }
        let n = u.len();
        let m: Vec<Vec<Int>> = (0..n).map(|i| (0..n).map(|j| w[j][i].clone()).collect()).collect();
        assert_eq!(int_det(m).abs(), Int::one());
    }

    #[test]
    fn basis_examples() {
        let b = sublattice_basis(&PrimitiveVector::from_i64(&[0, 1]).unwrap());
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![Int::one(), Int::zero()]);
        let b = sublattice_basis(&PrimitiveVector::from_i64(&[1, 1]).unwrap());
        assert!(b[0] == vec![Int::from(1), Int::from(-1)] || b[0] == vec![Int::from(-1), Int::from(1)]);
        check_basis(&[1, 2, 3]);
        check_basis(&[-4, 6, 9]);
        check_basis(&[0, 0, -1]);
        check_basis(&[-1]);
    }

    #[test]
    fn rejects_non_primitive() {
        assert!(PrimitiveVector::from_i64(&[2, 4]).is_err());
        assert!(PrimitiveVector::from_i64(&[0, 0]).is_err());
    }

    #[test]
    fn flattening_is_unimodular_on_hyperplane() {
        let u = PrimitiveVector::from_i64(&[1, 2, 3]).unwrap();
        let f = LatticeFlattening::new(&u);
        for b in sublattice_basis(&u) {
            let x = f.flatten(&int_point(&b));
            assert!(x.iter().all(|c| c.is_integer()));
        }
        // (3,0,-1) and (2,-1,0) lie in u^⊥; the flattened triangle keeps its lattice area.
        let p = f.flatten(&int_point(&[Int::from(3), Int::from(0), Int::from(-1)]));
        let q = f.flatten(&int_point(&[Int::from(2), Int::from(-1), Int::from(0)]));
        let det = &p[0] * &q[1] - &p[1] * &q[0];
        // Index of span{(3,0,-1),(2,-1,0)} inside u^⊥ ∩ ℤ³.
        assert_eq!(det.abs(), Rat::from_integer(Int::from(1)));
    }
}
