//! Recursion over facet normals of `P₂ + ⋯ + Pₙ` with faces flattened onto `ℤⁿ⁻¹`.

use num_traits::Zero;

use super::check_square_collection;
use crate::error::{Error, Result};
use crate::lattice::{LatticeFlattening, PrimitiveVector};
use crate::polytope::{minkowski_sum_all, Polytope};
use crate::rational::{rat, sub, Int, Point, Rat};

/// Primitive outer normals `u` for which `(P₂+⋯+Pₙ)^u` can carry mixed volume: the facet
/// normals of a full-dimensional sum, both normals of a hyperplane sum, none otherwise.
fn candidate_normals(sum: &Polytope) -> Vec<PrimitiveVector> {
    let n = sum.ambient_dim();
    if sum.dim() == n {
        sum.facets()
            .iter()
            .map(|f| PrimitiveVector::new(f.normal.clone()).expect("hull normals are primitive"))
            .collect()
    } else if sum.dim() + 1 == n {
        let e = sum.affine_equations()[0].0.clone();
        let neg: Vec<Int> = e.iter().map(|x| -x.clone()).collect();
        vec![
            PrimitiveVector::new(e).expect("null-space vectors are primitive"),
            PrimitiveVector::new(neg).expect("null-space vectors are primitive"),
        ]
    } else {
        Vec::new()
    }
}

fn flatten_face(face: &Polytope, flat: &LatticeFlattening) -> Result<Polytope> {
    let base = &face.vertices()[0];
    let pts: Vec<Point> = face.vertices().iter().map(|v| flat.flatten(&sub(v, base))).collect();
    if pts.iter().any(|p| p.iter().any(|c| !c.is_integer())) {
        return Err(Error::CrossCheck("flattened face left the lattice".into()));
    }
    Polytope::from_points(pts)
}

fn recurse(ps: &[Polytope]) -> Result<Int> {
    let n = ps.len();
    if n == 1 {
        let xs = ps[0].vertices().iter().map(|v| v[0].clone());
        let lo = xs.clone().min().expect("non-empty");
        let hi = xs.max().expect("non-empty");
        return Ok((hi - lo).to_integer());
    }
    let sum = minkowski_sum_all(&ps[1..])?;
    let mut total = Int::zero();
    for u in candidate_normals(&sum) {
        let h = ps[0].support_value_int(u.coords());
        if h.is_zero() {
            continue;
        }
        let up = u.to_point();
        let flat = LatticeFlattening::new(&u);
        let faces = ps[1..]
            .iter()
            .map(|p| flatten_face(&p.face_polytope_in_direction(&up), &flat))
            .collect::<Result<Vec<_>>>()?;
        let inner = recurse(&faces)?;
        if !inner.is_zero() {
            total += (h * Rat::from_integer(inner)).to_integer();
        }
    }
    Ok(total)
}

/// `n! · V(P₁,…,Pₙ)` for lattice polytopes. The result is recomputed with `P₁` translated
/// and the two values must match.
pub fn mixed_volume_inductive(ps: &[Polytope]) -> Result<Int> {
    let n = check_square_collection(ps)?;
    if !ps.iter().all(Polytope::is_lattice) {
        return Err(Error::NotLattice);
    }
    let value = recurse(ps)?;
    let shift: Point = (0..n).map(|i| rat(i as i64 + 1)).collect();
    let mut moved = ps.to_vec();
    moved[0] = ps[0].translate(&shift);
    let again = recurse(&moved)?;
    if again != value {
        return Err(Error::CrossCheck(format!(
            "inductive mixed volume changed under translation: {value} vs {again}"
        )));
    }
    Ok(value)
}
