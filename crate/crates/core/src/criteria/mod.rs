//! Strict monotonicity criteria for mixed volumes, with witnesses.

pub mod deficit;
pub mod essential;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::mixed::{cayley, check_square_collection, normalized_mixed_volume};
use crate::mixed::cayley::embed_full;
use crate::polytope::{affine_rank, minkowski_sum_all, touches_unchecked, Polytope};
use crate::rational::{dot, fmt_rat, is_zero_vec, scale, sub, Point, Rat};

pub use deficit::{best_deficit_bound, volume_deficit_bound, DeficitBound};
pub use essential::{independent_segments, is_essential, SegmentWitness};

/// `T_u = { i : Pᵢ touches Qᵢ^u }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TouchSet {
    pub direction: Point,
    pub members: Vec<usize>,
}

/// Certificate attached to a verdict.
#[derive(Clone, Debug)]
pub enum Witness {
    None,
    /// A direction `u` whose associated collection is essential.
    Direction {
        u: Point,
        touching: Vec<usize>,
        collection: Vec<Polytope>,
    },
    /// A proper face of `Q` of dimension `dim` touched by at most `dim` of the `Pᵢ`.
    Face {
        vertices: Vec<Point>,
        normal: Point,
        dim: usize,
        touching: Vec<usize>,
    },
    Segments(CayleyWitness),
}

#[derive(Clone, Debug)]
pub struct MonotonicityVerdict {
    pub strict: bool,
    pub witness: Witness,
    /// `n! V(P₁,…,Pₙ)`, when computed.
    pub lhs: Option<Rat>,
    /// `n! V(Q₁,…,Qₙ)`, when computed.
    pub rhs: Option<Rat>,
}

impl MonotonicityVerdict {
    fn not_strict() -> Self {
        MonotonicityVerdict {
            strict: false,
            witness: Witness::None,
            lhs: None,
            rhs: None,
        }
    }

    fn degenerate() -> Self {
        MonotonicityVerdict {
            lhs: Some(Rat::zero()),
            rhs: Some(Rat::zero()),
            ..Self::not_strict()
        }
    }

    /// Adds both normalized mixed volumes (every applicable algorithm, cross-checked).
    pub fn with_volumes(mut self, ps: &[Polytope], qs: &[Polytope]) -> Result<Self> {
        self.lhs = Some(normalized_mixed_volume(ps)?);
        self.rhs = Some(normalized_mixed_volume(qs)?);
        Ok(self)
    }

    pub fn to_json(&self) -> Value {
        let pts = |v: &[Point]| -> Vec<Vec<String>> { v.iter().map(|p| p.iter().map(fmt_rat).collect()).collect() };
        let vec = |p: &Point| -> Vec<String> { p.iter().map(fmt_rat).collect() };
        // Member indices are reported 1-based.
        let labels = |t: &[usize]| -> Vec<usize> { t.iter().map(|i| i + 1).collect() };
        let witness = match &self.witness {
            Witness::None => json!({ "kind": "none" }),
            Witness::Direction {
                u,
                touching,
                collection,
            } => json!({
                "kind": "direction",
                "u": vec(u),
                "touching": labels(touching),
                "collection": collection.iter().map(|p| pts(p.vertices())).collect::<Vec<_>>(),
            }),
            Witness::Face {
                vertices,
                normal,
                dim,
                touching,
            } => json!({
                "kind": "face",
                "vertices": pts(vertices),
                "normal": vec(normal),
                "dim": dim,
                "touching": labels(touching),
            }),
            Witness::Segments(c) => {
                let mut v = c.to_json();
                v["kind"] = json!("segments");
                v
            }
        };
        let mut out = json!({ "strict": self.strict, "witness": witness });
        if let Some(l) = &self.lhs {
            out["lhs_normalized_mv"] = json!(fmt_rat(l));
        }
        if let Some(r) = &self.rhs {
            out["rhs_normalized_mv"] = json!(fmt_rat(r));
        }
        out
    }
}

fn check_nested(ps: &[Polytope], qs: &[Polytope]) -> Result<usize> {
    let n = check_square_collection(ps)?;
    let m = check_square_collection(qs)?;
    if n != m {
        return Err(Error::DimensionMismatch { expected: n, found: m });
    }
    for (i, (p, q)) in ps.iter().zip(qs).enumerate() {
        if !q.contains(p) {
            return Err(Error::NotContained(format!("inner polytope {} is not inside outer polytope {}", i + 1, i + 1)));
        }
    }
    Ok(n)
}

fn touching(ps: &[Polytope], qs: &[Polytope], u: &[Rat]) -> Vec<usize> {
    (0..ps.len()).filter(|&i| touches_unchecked(&ps[i], &qs[i], u)).collect()
}

pub fn touch_set(ps: &[Polytope], qs: &[Polytope], u: &[Rat]) -> Result<TouchSet> {
    let n = check_nested(ps, qs)?;
    if u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: u.len() });
    }
    Ok(TouchSet {
        direction: u.to_vec(),
        members: touching(ps, qs, u),
    })
}

/// One outer normal per proper face of `s`.
pub fn normal_fan_representatives(s: &Polytope) -> Result<Vec<Point>> {
    if s.dim() == 0 {
        return Err(Error::InvalidArgument("a point has no proper faces".into()));
    }
    Ok(s.normal_fan_representatives())
}

/// Strictness of `V(P₁,…,Pₙ) < V(Q₁,…,Qₙ)` decided by searching for a direction `u` that
/// makes `{Qᵢ^u : i ∈ T_u} ∪ {Qᵢ : i ∉ T_u}` essential. One `u` per normal cone of
/// `Q₁ + ⋯ + Qₙ` is tried, in face order.
pub fn strict_monotonicity_general(ps: &[Polytope], qs: &[Polytope]) -> Result<MonotonicityVerdict> {
    let n = check_nested(ps, qs)?;
    let sum = minkowski_sum_all(qs)?;
    if sum.dim() < n {
        return Ok(MonotonicityVerdict::degenerate());
    }
    let full = qs.iter().all(Polytope::is_full_dimensional);
    for u in sum.normal_fan_representatives() {
        let t = touching(ps, qs, &u);
        let collection: Vec<Polytope> = (0..n)
            .map(|i| {
                if t.contains(&i) {
                    qs[i].face_polytope_in_direction(&u)
                } else {
                    qs[i].clone()
                }
            })
            .collect();
        let essential = is_essential(&collection)?;
        if full {
            let faces: Vec<Polytope> = t.iter().map(|&i| collection[i].clone()).collect();
            let simple = faces.is_empty() || is_essential(&faces)?;
            if simple != essential {
                return Err(Error::CrossCheck(
                    "full-dimensional simplification disagrees with the general test".into(),
                ));
            }
        }
        if essential {
            return Ok(MonotonicityVerdict {
                strict: true,
                witness: Witness::Direction {
                    u,
                    touching: t,
                    collection,
                },
                lhs: None,
                rhs: None,
            });
        }
    }
    Ok(MonotonicityVerdict::not_strict())
}

/// Strictness of `V(P₁,…,Pₙ) < Vol(Q)`: some proper face of dimension `t` is touched by at
/// most `t` of the `Pᵢ`.
pub fn strict_monotonicity_equal(ps: &[Polytope], q: &Polytope) -> Result<MonotonicityVerdict> {
    let n = check_square_collection(ps)?;
    if q.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: q.ambient_dim(),
        });
    }
    for (i, p) in ps.iter().enumerate() {
        if !q.contains(p) {
            return Err(Error::NotContained(format!("polytope {} is not inside Q", i + 1)));
        }
    }
    if q.dim() < n {
        return Ok(MonotonicityVerdict::degenerate());
    }
    for f in q.proper_faces() {
        let t: Vec<usize> = (0..n).filter(|&i| touches_unchecked(&ps[i], q, &f.normal)).collect();
        if t.len() <= f.dim {
            return Ok(MonotonicityVerdict {
                strict: true,
                witness: Witness::Face {
                    vertices: f.vertices.iter().map(|&v| q.vertices()[v].clone()).collect(),
                    normal: f.normal.clone(),
                    dim: f.dim,
                    touching: t,
                },
                lhs: None,
                rhs: None,
            });
        }
    }
    Ok(MonotonicityVerdict::not_strict())
}

/// `B = { x ∈ Q : ⟨u,x⟩ ≥ h_P(u) }`.
#[derive(Clone, Debug)]
pub struct BPolytope {
    pub polytope: Polytope,
    pub level: Rat,
    pub direction: Point,
}

pub fn b_polytope(p: &Polytope, q: &Polytope, u: &[Rat]) -> Result<BPolytope> {
    if u.len() != q.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: q.ambient_dim(),
            found: u.len(),
        });
    }
    if is_zero_vec(u) {
        return Err(Error::InvalidArgument("B-polytope needs a non-zero direction".into()));
    }
    if !q.contains(p) {
        return Err(Error::NotContained("inner polytope is not inside the outer one".into()));
    }
    let level = p.support_value(u);
    let verts = q.vertices();
    let vals: Vec<Rat> = verts.iter().map(|v| dot(u, v)).collect();
    let mut pts: Vec<Point> = (0..verts.len()).filter(|&i| vals[i] >= level).map(|i| verts[i].clone()).collect();
    for e in q.edges() {
        let (a, b) = (e.vertices[0], e.vertices[1]);
        let (da, db) = (&vals[a] - &level, &vals[b] - &level);
        if (da.is_positive() && db.is_negative()) || (da.is_negative() && db.is_positive()) {
            let t = -&da / (&db - &da);
            let dir = sub(&verts[b], &verts[a]);
            pts.push(crate::rational::add(&verts[a], &scale(&dir, &t)));
        }
    }
    let polytope = Polytope::from_points(pts)?;
    if polytope.support_value(u) != q.support_value(u) || -polytope.support_value(&scale(u, &-Rat::one())) != level {
        return Err(Error::CrossCheck("truncation does not span the expected levels".into()));
    }
    Ok(BPolytope {
        polytope,
        level,
        direction: u.to_vec(),
    })
}

fn b_collection(ps: &[Polytope], qs: &[Polytope], u: &[Rat]) -> Result<Vec<Polytope>> {
    ps.iter().zip(qs).map(|(p, q)| Ok(b_polytope(p, q, u)?.polytope)).collect()
}

/// Searches for `u ≠ 0` with `{B_{1,u},…,B_{n,u}}` essential over the same representatives
/// as [`strict_monotonicity_general`], and requires the same verdict.
pub fn essential_b_direction(ps: &[Polytope], qs: &[Polytope]) -> Result<MonotonicityVerdict> {
    let n = check_nested(ps, qs)?;
    let general = strict_monotonicity_general(ps, qs)?;
    let sum = minkowski_sum_all(qs)?;
    let mut verdict = if sum.dim() < n {
        MonotonicityVerdict::degenerate()
    } else {
        MonotonicityVerdict::not_strict()
    };
    if sum.dim() == n {
        for u in sum.normal_fan_representatives() {
            let bs = b_collection(ps, qs, &u)?;
            if is_essential(&bs)? {
                verdict = MonotonicityVerdict {
                    strict: true,
                    witness: Witness::Direction {
                        touching: touching(ps, qs, &u),
                        u,
                        collection: bs,
                    },
                    lhs: None,
                    rhs: None,
                };
                break;
            }
        }
    }
    if verdict.strict != general.strict {
        return Err(Error::CrossCheck(format!(
            "B-collection search says strict={}, touching criterion says strict={}",
            verdict.strict, general.strict
        )));
    }
    Ok(verdict)
}

/// A fully mixed simplex `C(E₁,…,Eₙ)` in the closure of `C(Q) ∖ C(P)` with the separating
/// functional `(u, v)`.
#[derive(Clone, Debug)]
pub struct CayleyWitness {
    pub u: Point,
    pub v: Point,
    pub segments: SegmentWitness,
    /// Vertices `(x, eᵢ) ∈ ℝⁿ × ℝⁿ` of the simplex.
    pub simplex: Vec<Point>,
    /// `h_{C(P₁,…,Pₙ)}(u, v)`.
    pub support: Rat,
    pub dim: usize,
}

impl CayleyWitness {
    pub fn to_json(&self) -> Value {
        let vec = |p: &Point| -> Vec<String> { p.iter().map(fmt_rat).collect() };
        json!({
            "u": vec(&self.u),
            "v": vec(&self.v),
            "segments": self.segments.to_json()["segments"].clone(),
            "simplex": self.simplex.iter().map(vec).collect::<Vec<_>>(),
            "support": fmt_rat(&self.support),
            "dim": self.dim,
        })
    }
}

/// Builds the Cayley simplex from segments in the B-polytopes for direction `u`, with
/// `vᵢ = −h_{Pᵢ}(u)` so that every `h_{Pᵢ}(u) + vᵢ` vanishes.
pub fn fully_mixed_simplex_witness(ps: &[Polytope], qs: &[Polytope], u: &[Rat]) -> Result<CayleyWitness> {
    let n = check_nested(ps, qs)?;
    if u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: u.len() });
    }
    if is_zero_vec(u) {
        return Err(Error::Precondition("direction must be non-zero".into()));
    }
    let bs = b_collection(ps, qs, u)?;
    let segments = independent_segments(&bs)?
        .ok_or_else(|| Error::Precondition("the B-polytopes for this direction are not essential".into()))?;
    let v: Point = ps.iter().map(|p| -p.support_value(u)).collect();
    let formula = ps
        .iter()
        .zip(&v)
        .map(|(p, vi)| p.support_value(u) + vi)
        .max()
        .expect("n >= 1");
    let support = cayley(ps)?.support_value(u, &v);
    if support != formula {
        return Err(Error::CrossCheck(format!("Cayley support {support} differs from the slice formula {formula}")));
    }
    for (i, (a, b)) in segments.segments.iter().enumerate() {
        let need = &support - &v[i];
        if dot(u, a) < need || dot(u, b) < need || !qs[i].contains_point(a) || !qs[i].contains_point(b) {
            return Err(Error::CrossCheck(format!("segment {} is not on the far side of the separating hyperplane", i + 1)));
        }
    }
    let simplex: Vec<Point> = segments
        .segments
        .iter()
        .enumerate()
        .flat_map(|(i, (a, b))| [embed_full(a, i, n), embed_full(b, i, n)])
        .collect();
    let dim = affine_rank(simplex.iter());
    if dim != 2 * n - 1 {
        return Err(Error::CrossCheck(format!("Cayley simplex has dimension {dim}, expected {}", 2 * n - 1)));
    }
    Ok(CayleyWitness {
        u: u.to_vec(),
        v,
        segments,
        simplex,
        support,
        dim,
    })
}
