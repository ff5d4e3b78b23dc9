//! Exact linear algebra: fraction-free elimination over ℤ and a small rational matrix type.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, fmt_rat, make_primitive, parse_rat, rat, to_int_scaled, Int, Rat};

/// Result of fraction-free (Bareiss) echelon reduction of an integer matrix.
struct Echelon {
    rows: Vec<Vec<Int>>,
    pivots: Vec<usize>,
    swaps: usize,
}

fn bareiss(mut a: Vec<Vec<Int>>) -> Echelon {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut prev = Int::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    let mut swaps = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swaps += 1;
        }
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..n {
                let v = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = Int::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rows: a,
        pivots,
        swaps,
    }
}

pub fn int_rank(rows: &[Vec<Int>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    bareiss(rows.to_vec()).pivots.len()
}

/// Column indices of the pivots of an echelon form, in increasing order.
pub fn int_pivot_columns(rows: &[Vec<Int>]) -> Vec<usize> {
    if rows.is_empty() {
        return Vec::new();
    }
    bareiss(rows.to_vec()).pivots
}

pub fn int_det(m: Vec<Vec<Int>>) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    debug_assert!(m.iter().all(|r| r.len() == n));
    let e = bareiss(m);
    if e.pivots.len() < n {
        return Int::zero();
    }
    let d = e.rows[n - 1][n - 1].clone();
    if e.swaps % 2 == 1 {
        -d
    } else {
        d
    }
}

/// Primitive integer normal of the hyperplane spanned by `d - 1` independent vectors in ℤᵈ.
pub fn hyperplane_normal(diffs: &[Vec<Int>]) -> Vec<Int> {
    let d = diffs.len() + 1;
    let mut normal = Vec::with_capacity(d);
    for k in 0..d {
        let minor: Vec<Vec<Int>> = diffs
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, x)| x.clone()).collect())
            .collect();
        let c = int_det(minor);
        normal.push(if k % 2 == 0 { c } else { -c });
    }
    make_primitive(normal)
}

/// Basis of the rational null space `{x : M x = 0}` of a matrix given by rows.
pub fn rat_null_space(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let m = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for j in 0..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = &f * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

/// Primitive integer basis vectors spanning the same rational null space.
pub fn int_null_space(rows: &[Vec<Int>], cols: usize) -> Vec<Vec<Int>> {
    let rrows: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().cloned().map(Rat::from_integer).collect())
        .collect();
    rat_null_space(&rrows, cols)
        .into_iter()
        .map(|v| {
            let l = common_denominator(std::iter::once(&v));
            make_primitive(to_int_scaled(&v, &l))
        })
        .collect()
}

/// Dense matrix over ℚ.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Format("ragged matrix rows".into()));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
            .expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn select_columns(&self, cols: &[usize]) -> RatMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> RatMatrix {
        RatMatrix::from_rows(rows.iter().map(|&i| self.row(i).to_vec()).collect())
            .expect("rows share a length")
    }

    /// Each row scaled by the lcm of its denominators, plus the product of those scales.
    fn integer_rows(&self) -> (Vec<Vec<Int>>, Int) {
        let mut total = Int::one();
        let rows = (0..self.rows)
            .map(|i| {
                let r = self.row(i).to_vec();
                let l = common_denominator(std::iter::once(&r));
                total *= &l;
                to_int_scaled(&r, &l)
            })
            .collect();
        (rows, total)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        int_rank(&self.integer_rows().0)
    }

    pub fn determinant(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let (rows, scale) = self.integer_rows();
        Ok(Rat::new(int_det(rows), scale))
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = RatMatrix::identity(n).to_rows();
        for c in 0..n {
            let p = (c..n).find(|&i| !a[i][c].is_zero()).ok_or(Error::Singular)?;
            a.swap(p, c);
            inv.swap(p, c);
            let s = a[c][c].recip();
            for j in 0..n {
                a[c][j] = &a[c][j] * &s;
                inv[c][j] = &inv[c][j] * &s;
            }
            for i in 0..n {
                if i != c && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..n {
                        let x = &f * &a[c][j];
                        a[i][j] -= x;
                        let y = &f * &inv[c][j];
                        inv[i][j] -= y;
                    }
                }
            }
        }
        RatMatrix::from_rows(inv)
    }

    /// Basis of `{y : yᵀ M = 0}`, one vector per row of the result.
    pub fn left_null_space(&self) -> Vec<Vec<Rat>> {
        rat_null_space(&self.transpose().to_rows(), self.rows)
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }

    pub fn is_zero_column(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.get(i, j).is_zero())
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(fmt_rat).collect()).collect()
    }

    pub fn from_strings(rows: &[Vec<String>]) -> Result<RatMatrix> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        RatMatrix::from_rows(parsed)
    }

    pub fn max_abs_entry(&self) -> Rat {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Rat::zero)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_strings()).finish()
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        RatMatrix::from_strings(&rows).map_err(serde::de::Error::custom)
    }
}

/// Rank over ℚ by fraction-free elimination.
pub fn exact_rank(m: &RatMatrix) -> usize {
    m.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect()
    }

    #[test]
    fn identity_rank() {
        assert_eq!(exact_rank(&RatMatrix::identity(3)), 3);
        assert_eq!(exact_rank(&RatMatrix::zeros(2, 4)), 0);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = ints(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2(3·-2 - 4·5) - (-1)(1·-2 - 0) + 0 = -52 - 2 = -54
        assert_eq!(int_det(m), Int::from(-54));
        let sing = ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(int_det(sing), Int::zero());
        let swap = ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(int_det(swap), Int::from(-1));
    }

    #[test]
    fn rank_with_skipped_columns() {
        let m = ints(&[&[0, 1, 2, 3], &[0, 2, 4, 7], &[0, 0, 0, 1]]);
        assert_eq!(int_rank(&m), 2);
        assert_eq!(int_pivot_columns(&m), vec![1, 3]);
    }

    #[test]
    fn rational_determinant_and_inverse() {
        let m = RatMatrix::from_rows(vec![vec![frac(1, 2), rat(1)], vec![rat(3), frac(2, 3)]]).unwrap();
        assert_eq!(m.determinant().unwrap(), frac(1, 3) - rat(3));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(2));
        assert_eq!(RatMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
    }

    #[test]
    fn normal_of_plane() {
        let diffs = ints(&[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(hyperplane_normal(&diffs)[2].abs(), Int::from(1));
        let diffs = ints(&[&[2, -2]]);
        let n = hyperplane_normal(&diffs);
        assert!(n == ints(&[&[1, 1]])[0] || n == ints(&[&[-1, -1]])[0]);
    }

    #[test]
    fn left_null_space_annihilates() {
        let c = RatMatrix::from_i64(&[&[-2, 2], &[1, -1], &[-1, 1]]);
        let ns = c.left_null_space();
        assert_eq!(ns.len(), 2);
        for y in ns {
            let row = RatMatrix::from_rows(vec![y]).unwrap();
            let prod = row.mul(&c).unwrap();
            assert!(prod.is_zero_row(0));
        }
    }
}
