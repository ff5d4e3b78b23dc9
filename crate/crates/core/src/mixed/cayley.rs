//! Cayley polytopes in reduced coordinates.
//!
//! `Pᵢ × {eᵢ} ⊂ ℝⁿ × ℝᵏ` lies in the hyperplane `Σ yᵢ = 1`, so the last `y` coordinate is
//! dropped: a point `x` of factor `i < k−1` embeds as `(x, eᵢ)` truncated to `k−1`
//! coordinates and a point of the last factor as `(x, 0)`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polytope::{minkowski_sum_all, Face, Polytope};
use crate::rational::{dot, Point, Rat};

#[derive(Clone, Debug)]
pub struct CayleyPolytope {
    factors: Vec<Polytope>,
    embedded: Polytope,
    /// `(factor, vertex of factor)` for each vertex of `embedded`.
    tags: Vec<(usize, usize)>,
}

/// Reduced Cayley coordinates of `x ∈ Pᵢ` among `k` factors.
pub fn embed(x: &[Rat], i: usize, k: usize) -> Point {
    let mut p = x.to_vec();
    p.extend((0..k - 1).map(|j| if j == i { Rat::one() } else { Rat::zero() }));
    p
}

/// Full coordinates `(x, eᵢ) ∈ ℝⁿ × ℝᵏ`.
pub fn embed_full(x: &[Rat], i: usize, k: usize) -> Point {
    let mut p = x.to_vec();
    p.extend((0..k).map(|j| if j == i { Rat::one() } else { Rat::zero() }));
    p
}

pub fn cayley(ps: &[Polytope]) -> Result<CayleyPolytope> {
    let first = ps.first().ok_or(Error::EmptyInput)?;
    let n = first.ambient_dim();
    if let Some(p) = ps.iter().find(|p| p.ambient_dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.ambient_dim(),
        });
    }
    let k = ps.len();
    let mut index: HashMap<Point, (usize, usize)> = HashMap::new();
    let mut points = Vec::new();
    for (i, p) in ps.iter().enumerate() {
        for (j, v) in p.vertices().iter().enumerate() {
            let e = embed(v, i, k);
            index.insert(e.clone(), (i, j));
            points.push(e);
        }
    }
    let embedded = Polytope::from_points(points)?;
    let tags = embedded.vertices().iter().map(|v| index[v]).collect::<Vec<_>>();
    let expected = minkowski_sum_all(ps)?.dim() + k - 1;
    if embedded.dim() != expected || tags.len() != ps.iter().map(|p| p.vertices().len()).sum::<usize>() {
        return Err(Error::CrossCheck(format!(
            "Cayley polytope has dimension {} and {} vertices, expected dimension {expected}",
            embedded.dim(),
            tags.len()
        )));
    }
    Ok(CayleyPolytope {
        factors: ps.to_vec(),
        embedded,
        tags,
    })
}

impl CayleyPolytope {
    pub fn factors(&self) -> &[Polytope] {
        &self.factors
    }

    pub fn embedded(&self) -> &Polytope {
        &self.embedded
    }

    pub fn tag(&self, vertex: usize) -> (usize, usize) {
        self.tags[vertex]
    }

    pub fn tags(&self) -> &[(usize, usize)] {
        &self.tags
    }

    pub fn dim(&self) -> usize {
        self.embedded.dim()
    }

    /// The linear functional `(u, v)` on full coordinates, rewritten on reduced ones
    /// (the constant `v_k` is dropped).
    fn reduced_direction(&self, u: &[Rat], v: &[Rat]) -> Point {
        let k = self.factors.len();
        let mut w = u.to_vec();
        w.extend((0..k - 1).map(|i| &v[i] - &v[k - 1]));
        w
    }

    /// `h_C(u, v)` evaluated directly on the embedded vertices.
    pub fn support_value(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let k = self.factors.len();
        self.embedded.support_value(&self.reduced_direction(u, v)) + &v[k - 1]
    }
}

/// The face `C(P₁,…,P_k)^{(u,v)}`, computed on the embedded polytope and checked against
/// the slice description `conv ⋃_{i∈I} Pᵢ^u × {eᵢ}`.
pub fn cayley_support_face(cp: &CayleyPolytope, u: &[Rat], v: &[Rat]) -> Result<Face> {
    let n = cp.factors[0].ambient_dim();
    let k = cp.factors.len();
    if u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: u.len() });
    }
    if v.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: v.len() });
    }
    let w = cp.reduced_direction(u, v);
    let face = cp.embedded.face_in_direction(&w);

    let vals: Vec<Rat> = cp.factors.iter().zip(v).map(|(p, vi)| p.support_value(u) + vi).collect();
    let top = vals.iter().max().expect("k >= 1").clone();
    let expected: Vec<usize> = (0..cp.tags.len())
        .filter(|&e| {
            let (i, j) = cp.tags[e];
            vals[i] == top && dot(u, &cp.factors[i].vertices()[j]) == cp.factors[i].support_value(u)
        })
        .collect();
    if face.vertices != expected || cp.support_value(u, v) != top {
        return Err(Error::CrossCheck("Cayley face differs from its slice description".into()));
    }
    Ok(face)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{point, rat};

    #[test]
    fn two_segments_give_a_tetrahedron() {
        let e1 = Polytope::from_i64(&[&[0, 0], &[1, 0]]).unwrap();
        let e2 = Polytope::from_i64(&[&[0, 0], &[0, 1]]).unwrap();
        let c = cayley(&[e1.clone(), e2]).unwrap();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.embedded().vertices().len(), 4);
        let one = cayley(&[e1.clone()]).unwrap();
        assert_eq!(one.embedded(), &e1);
    }

    #[test]
    fn support_faces() {
        let e1 = Polytope::from_i64(&[&[0, 0], &[1, 0]]).unwrap();
        let e2 = Polytope::from_i64(&[&[0, 0], &[0, 1]]).unwrap();
        let c = cayley(&[e1, e2]).unwrap();
        let all = cayley_support_face(&c, &point(&[0, 0]), &point(&[3, 3])).unwrap();
        assert!(!all.proper);
        let slice = cayley_support_face(&c, &point(&[0, 0]), &point(&[1, 0])).unwrap();
        assert!(slice.vertices.iter().all(|&e| c.tag(e).0 == 0));
        assert_eq!(slice.vertices.len(), 2);
        assert_eq!(c.support_value(&point(&[1, 1]), &point(&[0, 0])), rat(1));
    }
}
