//! Exact V-polytopes with derived facets, face lattice, support function and volume.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::hull::convex_hull_int;
use crate::lattice::PrimitiveVector;
use crate::linalg::{int_null_space, int_pivot_columns, RatMatrix};
use crate::rational::{
    add, common_denominator, dot, factorial, int_point, is_integral, sub, to_int_scaled, Int, Point, Rat,
};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 8;

/// Facet inequality `⟨normal, x⟩ ≤ offset` (relative to the affine hull when the polytope
/// is not full-dimensional).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<Int>,
    pub offset: Rat,
    pub vertices: Vec<usize>,
}

/// A face given by its vertex indices into the parent polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub dim: usize,
    /// Outer normal in the relative interior of the face's normal cone; zero for the
    /// improper face.
    pub normal: Point,
    pub proper: bool,
}

#[derive(Clone)]
pub struct Polytope {
    ambient_dim: usize,
    vertices: Vec<Point>,
    dim: usize,
    lattice: bool,
    facets: Vec<Facet>,
    /// Equations `⟨e, x⟩ = c` cutting out the affine hull.
    equations: Vec<(Vec<Int>, Rat)>,
    /// Boundary triangulation in projected coordinates (vertex indices).
    boundary: Vec<Vec<usize>>,
    pivots: Vec<usize>,
    faces: OnceLock<Vec<Face>>,
    volume: OnceLock<Rat>,
}

fn dedup_points(points: Vec<Point>) -> Vec<Point> {
    let mut seen = HashSet::new();
    points.into_iter().filter(|p| seen.insert(p.clone())).collect()
}

impl Polytope {
    /// Convex hull of a non-empty point list, reduced to its extreme points.
    pub fn from_points(points: Vec<Point>) -> Result<Polytope> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let n = first.len();
        if n > MAX_DIM {
            return Err(Error::DimensionLimit { dim: n, max: MAX_DIM });
        }
        if n == 0 {
            return Err(Error::InvalidArgument("points need at least one coordinate".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        let pts = dedup_points(points);
        let first_pass = Self::build(pts)?;
        if first_pass.0 {
            Ok(first_pass.1)
        } else {
            // rebuild on the extreme points so every stored index is a vertex
            Ok(Self::build(first_pass.1.vertices)?.1)
        }
    }

    pub fn from_i64(points: &[&[i64]]) -> Result<Polytope> {
        Self::from_points(points.iter().map(|p| crate::rational::point(p)).collect())
    }

    /// Returns (all input points were extreme, polytope).
    fn build(pts: Vec<Point>) -> Result<(bool, Polytope)> {
        let n = pts[0].len();
        let scale = common_denominator(pts.iter());
        let ints: Vec<Vec<Int>> = pts.iter().map(|p| to_int_scaled(p, &scale)).collect();
        let diffs: Vec<Vec<Int>> = ints[1..]
            .iter()
            .map(|p| p.iter().zip(&ints[0]).map(|(a, b)| a - b).collect())
            .collect();
        let pivots = int_pivot_columns(&diffs);
        let d = pivots.len();
        let equations: Vec<(Vec<Int>, Rat)> = int_null_space(&diffs, n)
            .into_iter()
            .map(|e| {
                let c = dot(&int_point(&e), &pts[0]);
                (e, c)
            })
            .collect();
        let lattice = pts.iter().all(|p| is_integral(p));
        if d == 0 {
            let poly = Polytope {
                ambient_dim: n,
                vertices: pts,
                dim: 0,
                lattice,
                facets: Vec::new(),
                equations,
                boundary: Vec::new(),
                pivots,
                faces: OnceLock::new(),
                volume: OnceLock::new(),
            };
            return Ok((true, poly));
        }
        let projected: Vec<Vec<Int>> = ints
            .iter()
            .map(|p| pivots.iter().map(|&k| p[k].clone()).collect())
            .collect();
        let hull = convex_hull_int(&projected);
        let all_extreme = hull.vertices.len() == pts.len();
        let mut index_of = vec![usize::MAX; pts.len()];
        for (vi, &pi) in hull.vertices.iter().enumerate() {
            index_of[pi] = vi;
        }
        let facets = hull
            .facets
            .iter()
            .map(|f| {
                let mut normal = vec![Int::zero(); n];
                for (k, &c) in pivots.iter().enumerate() {
                    normal[c] = f.normal[k].clone();
                }
                Facet {
                    normal,
                    offset: Rat::new(f.offset.clone(), scale.clone()),
                    vertices: f.points.iter().filter(|&&p| index_of[p] != usize::MAX).map(|&p| index_of[p]).collect(),
                }
            })
            .collect();
        let boundary = if all_extreme {
            hull.simplices.clone()
        } else {
            Vec::new()
        };
        let vertices: Vec<Point> = hull.vertices.iter().map(|&i| pts[i].clone()).collect();
        let lattice = vertices.iter().all(|p| is_integral(p));
        Ok((
            all_extreme,
            Polytope {
                ambient_dim: n,
                vertices,
                dim: d,
                lattice,
                facets,
                equations,
                boundary,
                pivots,
                faces: OnceLock::new(),
                volume: OnceLock::new(),
            },
        ))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_lattice(&self) -> bool {
        self.lattice
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn affine_equations(&self) -> &[(Vec<Int>, Rat)] {
        &self.equations
    }

    pub fn support_value(&self, u: &[Rat]) -> Rat {
        self.vertices.iter().map(|v| dot(u, v)).max().expect("polytopes are non-empty")
    }

    /// Support value of an integer direction.
    pub fn support_value_int(&self, u: &[Int]) -> Rat {
        self.support_value(&int_point(u))
    }

    pub fn face_in_direction(&self, u: &[Rat]) -> Face {
        let h = self.support_value(u);
        let verts: Vec<usize> = (0..self.vertices.len()).filter(|&i| dot(u, &self.vertices[i]) == h).collect();
        let proper = verts.len() < self.vertices.len();
        Face {
            dim: affine_rank(verts.iter().map(|&i| &self.vertices[i])),
            vertices: verts,
            normal: u.to_vec(),
            proper,
        }
    }

    /// The face `P^u` as a polytope in its own right.
    pub fn face_polytope(&self, face: &Face) -> Polytope {
        self.sub_polytope(&face.vertices)
    }

    pub fn face_polytope_in_direction(&self, u: &[Rat]) -> Polytope {
        self.face_polytope(&self.face_in_direction(u))
    }

    fn sub_polytope(&self, verts: &[usize]) -> Polytope {
        Polytope::from_points(verts.iter().map(|&i| self.vertices[i].clone()).collect())
            .expect("vertex subsets are valid inputs")
    }

    /// All faces of every dimension, the improper face last among equals; sorted by
    /// dimension then vertex index set.
    pub fn faces(&self) -> &[Face] {
        self.faces.get_or_init(|| self.compute_faces())
    }

    pub fn proper_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces().iter().filter(|f| f.proper)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Face> {
        self.faces().iter().filter(|f| f.dim == 1)
    }

    fn compute_faces(&self) -> Vec<Face> {
        let n = self.ambient_dim;
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        let facet_sets: Vec<Vec<usize>> = self
            .facets
            .iter()
            .map(|f| {
                let mut v = f.vertices.clone();
                v.sort_unstable();
                v
            })
            .collect();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        for f in &facet_sets {
            if sets.insert(f.clone()) {
                queue.push_back(f.clone());
            }
        }
        while let Some(face) = queue.pop_front() {
            for f in &facet_sets {
                let meet: Vec<usize> = face.iter().copied().filter(|v| f.binary_search(v).is_ok()).collect();
                if !meet.is_empty() && sets.insert(meet.clone()) {
                    queue.push_back(meet);
                }
            }
        }
        let mut faces: Vec<Face> = sets
            .into_iter()
            .filter(|s| s.len() < all.len())
            .map(|verts| {
                let mut normal = vec![Int::zero(); n];
                for (f, fs) in self.facets.iter().zip(&facet_sets) {
                    if verts.iter().all(|v| fs.binary_search(v).is_ok()) {
                        for (acc, x) in normal.iter_mut().zip(&f.normal) {
                            *acc += x;
                        }
                    }
                }
                Face {
                    dim: affine_rank(verts.iter().map(|&i| &self.vertices[i])),
                    vertices: verts,
                    normal: int_point(&normal),
                    proper: true,
                }
            })
            .collect();
        faces.push(Face {
            vertices: all,
            dim: self.dim,
            normal: vec![Rat::zero(); n],
            proper: false,
        });
        faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
        faces
    }

    /// Representative outer normals of the proper faces, in face-lattice order.
    pub fn normal_fan_representatives(&self) -> Vec<Point> {
        self.proper_faces().map(|f| f.normal.clone()).collect()
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|(e, c)| dot(&int_point(e), x) == *c)
            && self.facets.iter().all(|f| dot(&int_point(&f.normal), x) <= f.offset)
    }

    pub fn contains(&self, other: &Polytope) -> bool {
        other.ambient_dim == self.ambient_dim && other.vertices.iter().all(|v| self.contains_point(v))
    }

    pub fn euclidean_volume(&self) -> Rat {
        self.volume
            .get_or_init(|| {
                if self.dim < self.ambient_dim {
                    return Rat::zero();
                }
                let apex = &self.vertices[0];
                let mut total = Rat::zero();
                for s in &self.boundary {
                    let rows = s.iter().map(|&i| sub(&self.vertices[i], apex)).collect();
                    let m = RatMatrix::from_rows(rows).expect("square simplex matrix");
                    total += m.determinant().expect("square").abs();
                }
                total / Rat::from_integer(factorial(self.ambient_dim))
            })
            .clone()
    }

    /// `n! · Vol_n`; integral for lattice polytopes.
    pub fn normalized_volume(&self) -> Rat {
        let v = self.euclidean_volume() * Rat::from_integer(factorial(self.ambient_dim));
        if self.lattice {
            assert!(v.is_integer(), "normalized volume of a lattice polytope must be an integer, got {v}");
        }
        v
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(add(a, b));
            }
        }
        Polytope::from_points(pts)
    }

    pub fn translate(&self, t: &[Rat]) -> Polytope {
        Polytope::from_points(self.vertices.iter().map(|v| add(v, t)).collect()).expect("translation keeps validity")
    }

    pub fn dilate(&self, s: &Rat) -> Polytope {
        Polytope::from_points(self.vertices.iter().map(|v| crate::rational::scale(v, s)).collect())
            .expect("dilation keeps validity")
    }

    /// Vertex set as a sorted list, for order-independent comparison.
    pub fn sorted_vertices(&self) -> Vec<Point> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }

    /// Coordinates used by the hull computation (a projection injective on the affine hull).
    pub fn pivot_coordinates(&self) -> &[usize] {
        &self.pivots
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.sorted_vertices() == other.sorted_vertices()
    }
}

impl Eq for Polytope {}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verts: Vec<Vec<String>> = self.vertices.iter().map(|v| v.iter().map(|c| c.to_string()).collect()).collect();
        f.debug_struct("Polytope")
            .field("dim", &self.dim)
            .field("vertices", &verts)
            .finish()
    }
}

/// Affine dimension of a point set (−1 is not representable; empty sets report 0).
pub fn affine_rank<'a>(points: impl IntoIterator<Item = &'a Point>) -> usize {
    let pts: Vec<&Point> = points.into_iter().collect();
    if pts.len() <= 1 {
        return 0;
    }
    let rows: Vec<Vec<Rat>> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
    RatMatrix::from_rows(rows).expect("equal lengths").rank()
}

pub fn convex_hull(points: Vec<Point>) -> Result<Polytope> {
    Polytope::from_points(points)
}

pub fn affine_dim(p: &Polytope) -> usize {
    p.dim()
}

pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope> {
    p.minkowski_sum(q)
}

/// Minkowski sum of a non-empty list.
pub fn minkowski_sum_all(ps: &[Polytope]) -> Result<Polytope> {
    let (first, rest) = ps.split_first().ok_or(Error::EmptyInput)?;
    rest.iter().try_fold(first.clone(), |acc, p| acc.minkowski_sum(p))
}

pub fn euclidean_volume(p: &Polytope) -> Rat {
    p.euclidean_volume()
}

pub fn normalized_volume(p: &Polytope) -> Rat {
    p.normalized_volume()
}

pub fn support_value(p: &Polytope, u: &[Rat]) -> Rat {
    p.support_value(u)
}

pub fn face_in_direction(p: &Polytope, u: &[Rat]) -> Face {
    p.face_in_direction(u)
}

pub fn face_lattice(p: &Polytope) -> Vec<Face> {
    p.faces().to_vec()
}

/// `h_Q(u) − h_P(u)` for lattice polytopes `P ⊆ Q`.
pub fn lattice_distance(p: &Polytope, q: &Polytope, u: &PrimitiveVector) -> Result<Int> {
    if !p.is_lattice() || !q.is_lattice() {
        return Err(Error::NotLattice);
    }
    if !q.contains(p) {
        return Err(Error::NotContained("inner polytope is not inside the outer one".into()));
    }
    let d = q.support_value_int(u.coords()) - p.support_value_int(u.coords());
    debug_assert!(d.is_integer() && !d.is_negative());
    Ok(d.to_integer())
}

/// Whether `k` meets the face `face` of `parent`; requires `k ⊆ parent`.
///
/// Since the face is `parent ∩ {⟨u,x⟩ = h_parent(u)}` for its representative normal
/// `u`, and `k` lies in `parent`, `k` meets it exactly when `h_k(u) = h_parent(u)`.
pub fn touches(k: &Polytope, parent: &Polytope, face: &Face) -> Result<bool> {
    if !parent.contains(k) {
        return Err(Error::NotContained("touching test needs the body inside the face's polytope".into()));
    }
    Ok(touches_unchecked(k, parent, &face.normal))
}

pub(crate) fn touches_unchecked(k: &Polytope, parent: &Polytope, u: &[Rat]) -> bool {
    k.support_value(u) == parent.support_value(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, point, rat};

    fn square() -> Polytope {
        Polytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    #[test]
    fn hull_drops_interior_point() {
        let p = Polytope::from_points(vec![
            point(&[0, 0]),
            point(&[1, 0]),
            point(&[0, 1]),
            point(&[1, 1]),
            vec![frac(1, 2), frac(1, 2)],
        ])
        .unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.euclidean_volume(), rat(1));
        assert_eq!(p.normalized_volume(), rat(2));
    }

    #[test]
    fn lower_dimensional_hulls() {
        let pt = Polytope::from_i64(&[&[3, 4], &[3, 4]]).unwrap();
        assert_eq!(pt.dim(), 0);
        assert_eq!(pt.euclidean_volume(), rat(0));
        let seg = Polytope::from_i64(&[&[0, 0], &[1, 0], &[3, 0], &[2, 0]]).unwrap();
        assert_eq!(seg.dim(), 1);
        assert_eq!(seg.vertices(), &[point(&[0, 0]), point(&[3, 0])]);
        assert_eq!(seg.euclidean_volume(), rat(0));
        let tri3 = Polytope::from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1], &[2, 2, 1]]).unwrap();
        assert_eq!(tri3.dim(), 2);
        assert_eq!(tri3.vertices().len(), 4);
        assert!(tri3.contains_point(&point(&[1, 1, 1])));
        assert!(!tri3.contains_point(&point(&[1, 1, 0])));
    }

    #[test]
    fn errors() {
        assert_eq!(Polytope::from_points(vec![]).unwrap_err(), Error::EmptyInput);
        let big = vec![rat(0); 9];
        assert!(matches!(Polytope::from_points(vec![big]), Err(Error::DimensionLimit { .. })));
        assert!(matches!(
            Polytope::from_points(vec![point(&[0, 0]), point(&[1])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn support_and_faces_of_square() {
        let s = square();
        assert_eq!(s.support_value(&point(&[1, 1])), rat(2));
        assert_eq!(s.support_value(&point(&[0, 0])), rat(0));
        let top = s.face_in_direction(&point(&[0, 1]));
        assert_eq!(top.dim, 1);
        assert_eq!(top.vertices, vec![2, 3]);
        let corner = s.face_in_direction(&point(&[1, 1]));
        assert_eq!(corner.vertices, vec![3]);
        let whole = s.face_in_direction(&point(&[0, 0]));
        assert!(!whole.proper);
        let faces = s.faces();
        assert_eq!(faces.len(), 9);
        assert_eq!(faces.iter().filter(|f| f.dim == 0).count(), 4);
        assert_eq!(faces.iter().filter(|f| f.dim == 1).count(), 4);
        let mut reps = s.normal_fan_representatives();
        reps.sort();
        let mut expected: Vec<Point> = [[-1, -1], [-1, 0], [-1, 1], [0, -1], [0, 1], [1, -1], [1, 0], [1, 1]]
            .iter()
            .map(|u| point(u))
            .collect();
        expected.sort();
        assert_eq!(reps, expected);
    }

    #[test]
    fn minkowski_of_segments_is_square() {
        let e1 = Polytope::from_i64(&[&[0, 0], &[1, 0]]).unwrap();
        let e2 = Polytope::from_i64(&[&[0, 0], &[0, 1]]).unwrap();
        assert_eq!(e1.minkowski_sum(&e2).unwrap(), square());
        let pt = Polytope::from_i64(&[&[2, 5]]).unwrap();
        assert_eq!(square().minkowski_sum(&pt).unwrap(), square().translate(&point(&[2, 5])));
    }

    #[test]
    fn lattice_distance_and_touching() {
        let s = square();
        let bottom = Polytope::from_i64(&[&[0, 0], &[1, 0]]).unwrap();
        let u = PrimitiveVector::from_i64(&[0, 1]).unwrap();
        assert_eq!(lattice_distance(&bottom, &s, &u).unwrap(), Int::from(1));
        assert_eq!(lattice_distance(&s, &s, &u).unwrap(), Int::from(0));
        let outside = Polytope::from_i64(&[&[0, 0], &[2, 0]]).unwrap();
        assert!(matches!(lattice_distance(&outside, &s, &u), Err(Error::NotContained(_))));
        let top = s.face_in_direction(&point(&[0, 1]));
        assert!(!touches(&bottom, &s, &top).unwrap());
        assert!(touches(&s.face_polytope(&top), &s, &top).unwrap());
    }
}
