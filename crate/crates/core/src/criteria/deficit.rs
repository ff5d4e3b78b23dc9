//! Lower bounds on `n!Vol(Q) − n!V(P₁,…,Pₙ)` from lattice distances to a facet.

use serde_json::{json, Value};

use super::essential::is_essential;
use crate::error::{Error, Result};
use crate::lattice::PrimitiveVector;
use crate::mixed::{check_square_collection, normalized_mixed_volume};
use crate::polytope::{lattice_distance, touches_unchecked, Polytope};
use crate::rational::Int;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeficitBound {
    pub normal: PrimitiveVector,
    /// Indices (0-based) in the order used.
    pub order: Vec<usize>,
    pub distances: Vec<Int>,
    pub bound: Int,
    /// The exact deficit, for comparison.
    pub deficit: Int,
}

impl DeficitBound {
    pub fn to_json(&self) -> Value {
        json!({
            "normal": Vec::<i64>::from(self.normal.clone()),
            "order": self.order.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "distances": self.distances.iter().map(Int::to_string).collect::<Vec<_>>(),
            "bound": self.bound.to_string(),
            "deficit": self.deficit.to_string(),
        })
    }
}

fn check_setting(ps: &[Polytope], q: &Polytope, v: &PrimitiveVector) -> Result<usize> {
    let n = check_square_collection(ps)?;
    if q.ambient_dim() != n || v.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if q.ambient_dim() != n { q.ambient_dim() } else { v.dim() },
        });
    }
    if !q.is_lattice() || ps.iter().any(|p| !p.is_lattice()) {
        return Err(Error::NotLattice);
    }
    for (i, p) in ps.iter().enumerate() {
        if !q.contains(p) {
            return Err(Error::NotContained(format!("polytope {} is not inside Q", i + 1)));
        }
    }
    if q.dim() != n {
        return Err(Error::Hypothesis("Q is not full-dimensional".into()));
    }
    if q.face_in_direction(&v.to_point()).dim + 1 != n {
        return Err(Error::Hypothesis(format!("Q^v is not a facet for v = {v:?}")));
    }
    Ok(n)
}

fn deficit_of(ps: &[Polytope], q: &Polytope) -> Result<Int> {
    let d = q.normalized_volume() - normalized_mixed_volume(ps)?;
    Ok(d.to_integer())
}

fn certify(ps: &[Polytope], q: &Polytope, v: &PrimitiveVector, order: &[usize], deficit: &Int) -> Result<DeficitBound> {
    let n = ps.len();
    if order.is_empty() {
        return Err(Error::InvalidArgument("the index list must be non-empty".into()));
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidArgument(format!("bad or repeated index {}", i + 1)));
        }
    }
    let u = v.to_point();
    for &i in order {
        if touches_unchecked(&ps[i], q, &u) {
            return Err(Error::Hypothesis(format!("P_{} touches the facet Q^v", i + 1)));
        }
    }
    let m = order.len();
    if m > 1 {
        let faces: Vec<Polytope> = order[..m - 1].iter().map(|&i| ps[i].face_polytope_in_direction(&u)).collect();
        if !is_essential(&faces)? {
            let names: Vec<String> = order[..m - 1].iter().map(|i| format!("P_{}^v", i + 1)).collect();
            return Err(Error::Hypothesis(format!("essentiality: {{{}}} is not essential", names.join(", "))));
        }
    }
    let distances = order
        .iter()
        .map(|&i| lattice_distance(&ps[i], q, v))
        .collect::<Result<Vec<_>>>()?;
    let bound: Int = distances.iter().sum();
    if *deficit < bound {
        return Err(Error::CrossCheck(format!("deficit {deficit} is below the certified bound {bound}")));
    }
    Ok(DeficitBound {
        normal: v.clone(),
        order: order.to_vec(),
        distances,
        bound,
        deficit: deficit.clone(),
    })
}

/// The bound `Σ lᵢ` for the given ordering, after checking every hypothesis. Each failure
/// names the hypothesis that did not hold.
pub fn volume_deficit_bound(ps: &[Polytope], q: &Polytope, v: &PrimitiveVector, order: &[usize]) -> Result<DeficitBound> {
    check_setting(ps, q, v)?;
    let deficit = deficit_of(ps, q)?;
    certify(ps, q, v, order, &deficit)
}

fn permutations(items: &[usize], out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, used: &mut Vec<bool>) {
    if !cur.is_empty() {
        out.push(cur.clone());
    }
    for (k, &it) in items.iter().enumerate() {
        if !used[k] {
            used[k] = true;
            cur.push(it);
            permutations(items, out, cur, used);
            cur.pop();
            used[k] = false;
        }
    }
}

/// Best certified bound over every ordering of every subset of the indices whose polytopes
/// miss `Q^v` (`n ≤ 4`). `None` when no ordering satisfies the hypotheses.
pub fn best_deficit_bound(ps: &[Polytope], q: &Polytope, v: &PrimitiveVector) -> Result<Option<DeficitBound>> {
    let n = check_setting(ps, q, v)?;
    if n > 4 {
        return Err(Error::InvalidArgument("ordering search is limited to n <= 4".into()));
    }
    let u = v.to_point();
    let free: Vec<usize> = (0..n).filter(|&i| !touches_unchecked(&ps[i], q, &u)).collect();
    let mut orders = Vec::new();
    permutations(&free, &mut orders, &mut Vec::new(), &mut vec![false; free.len()]);
    let deficit = deficit_of(ps, q)?;
    let mut best: Option<DeficitBound> = None;
    for o in orders {
        match certify(ps, q, v, &o, &deficit) {
            Ok(b) => {
                if best.as_ref().is_none_or(|cur| b.bound > cur.bound) {
                    best = Some(b);
                }
            }
            Err(Error::Hypothesis(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}
