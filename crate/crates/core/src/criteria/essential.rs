//! Essential collections and independent segment witnesses.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::polytope::Polytope;
use crate::rational::{fmt_rat, sub, Point};

/// Vertex differences `v_j − v_0` that form a basis of the linear span of `K − K`,
/// returned with the index `j` of the vertex used.
fn span_basis(k: &Polytope) -> Vec<(usize, Point)> {
    let verts = k.vertices();
    let mut rows: Vec<Point> = Vec::new();
    let mut out = Vec::new();
    for j in 1..verts.len() {
        let d = sub(&verts[j], &verts[0]);
        rows.push(d.clone());
        if rank(&rows) == rows.len() {
            out.push((j, d));
        } else {
            rows.pop();
        }
    }
    out
}

fn rank(rows: &[Point]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    RatMatrix::from_rows(rows.to_vec()).expect("equal lengths").rank()
}

fn check_common_dim(ks: &[Polytope]) -> Result<usize> {
    let n = ks.first().ok_or(Error::EmptyInput)?.ambient_dim();
    if let Some(k) = ks.iter().find(|k| k.ambient_dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: k.ambient_dim(),
        });
    }
    Ok(n)
}

/// `dim Σ_{i∈I} Kᵢ ≥ |I|` for every non-empty `I` with `|I| ≤ n`.
pub fn is_essential(ks: &[Polytope]) -> Result<bool> {
    let n = check_common_dim(ks)?;
    let bases: Vec<Vec<Point>> = ks.iter().map(|k| span_basis(k).into_iter().map(|(_, d)| d).collect()).collect();
    if bases.iter().any(Vec::is_empty) {
        return Ok(false);
    }
    let m = ks.len();
    if m > 20 {
        return Err(Error::InvalidArgument(format!("collection of {m} polytopes is too large")));
    }
    for mask in 1u32..(1 << m) {
        let size = mask.count_ones() as usize;
        if size > n {
            continue;
        }
        let rows: Vec<Point> = (0..m).filter(|i| mask >> i & 1 == 1).flat_map(|i| bases[i].iter().cloned()).collect();
        if rank(&rows) < size {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Segments `Eᵢ ⊆ Kᵢ`, one per member, with linearly independent directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentWitness {
    pub segments: Vec<(Point, Point)>,
    /// Rank of the direction matrix; equals `n` for a valid witness.
    pub rank: usize,
}

impl SegmentWitness {
    pub fn directions(&self) -> Vec<Point> {
        self.segments.iter().map(|(a, b)| sub(b, a)).collect()
    }

    /// Re-derives the rank and the containments `Eᵢ ⊆ Kᵢ`.
    pub fn verify(&self, ks: &[Polytope]) -> bool {
        self.segments.len() == ks.len()
            && self
                .segments
                .iter()
                .zip(ks)
                .all(|((a, b), k)| k.contains_point(a) && k.contains_point(b))
            && rank(&self.directions()) == ks.len()
            && self.rank == ks.len()
    }

    pub fn to_json(&self) -> Value {
        let segs: Vec<Value> = self
            .segments
            .iter()
            .map(|(a, b)| json!([a.iter().map(fmt_rat).collect::<Vec<_>>(), b.iter().map(fmt_rat).collect::<Vec<_>>()]))
            .collect();
        json!({ "segments": segs, "rank": self.rank })
    }
}

fn assign(bases: &[Vec<(usize, Point)>], i: usize, chosen: &mut Vec<(usize, Point)>) -> bool {
    if i == bases.len() {
        return true;
    }
    for cand in &bases[i] {
        chosen.push(cand.clone());
        let rows: Vec<Point> = chosen.iter().map(|(_, d)| d.clone()).collect();
        if rank(&rows) == rows.len() && assign(bases, i + 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// An independent transversal of the members' spans, found by backtracking over a basis of
/// vertex differences of each member. A transversal from these bases exists exactly when
/// the collection is essential, so `None` means not essential.
pub fn independent_segments(ks: &[Polytope]) -> Result<Option<SegmentWitness>> {
    let n = check_common_dim(ks)?;
    if ks.len() != n {
        return Err(Error::InvalidArgument(format!(
            "segment witnesses need {n} polytopes in dimension {n}, got {}",
            ks.len()
        )));
    }
    let bases: Vec<Vec<(usize, Point)>> = ks.iter().map(span_basis).collect();
    let mut chosen = Vec::new();
    if !assign(&bases, 0, &mut chosen) {
        return Ok(None);
    }
    let segments: Vec<(Point, Point)> = chosen
        .iter()
        .zip(ks)
        .map(|((j, _), k)| (k.vertices()[0].clone(), k.vertices()[*j].clone()))
        .collect();
    let w = SegmentWitness { segments, rank: n };
    if !w.verify(ks) {
        return Err(Error::CrossCheck("segment witness failed its own check".into()));
    }
    Ok(Some(w))
}
