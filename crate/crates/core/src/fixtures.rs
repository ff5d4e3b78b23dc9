//! Canonical examples and seeded random instance generators.
//!
//! The JSON and text files under `fixtures/` at the workspace root hold the same data;
//! an integration test keeps the two in sync.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::linalg::RatMatrix;
use crate::polytope::Polytope;
use crate::rational::{Int, Point, Rat};
use crate::system::{parse_system, SparseSystem};

pub const PRISM_NOTE: &str =
    "unverified annotation: this system is reported to have two torus solutions; no solver is included";

fn poly(points: &[&[i64]]) -> Polytope {
    Polytope::from_i64(points).expect("fixture polytope")
}

/// Pentagon `Q` spanned by `(0,0),(1,2),(2,1),(2,0),(0,1)`.
pub fn pentagon() -> Polytope {
    poly(&[&[0, 0], &[1, 2], &[2, 1], &[2, 0], &[0, 1]])
}

/// Two triangles inside the pentagon whose mixed volume equals its volume.
pub fn pentagon_equal() -> Vec<Polytope> {
    vec![poly(&[&[0, 0], &[1, 2], &[2, 1]]), poly(&[&[2, 0], &[0, 1], &[1, 2]])]
}

/// Same first triangle; the second misses the edge from `(1,2)` to `(2,1)`.
pub fn pentagon_strict() -> Vec<Polytope> {
    vec![poly(&[&[0, 0], &[1, 2], &[2, 1]]), poly(&[&[2, 0], &[0, 1], &[1, 1]])]
}

pub const PENTAGON_EQUAL_TEXT: &str = "1 + x*y^2 + x^2*y\nx^2 + y + x*y^2\n";
pub const PENTAGON_STRICT_TEXT: &str = "1 + x*y^2 + x^2*y\nx^2 + y + x*y\n";
pub const PRISM_TEXT: &str = "\
1 + 3x + 5x*y + y - 2z + 2y*z
1 + x - 3x*y + 3y + z - y*z
1 + 3x + x*y + 3y - z + y*z
";
pub const DENSE_LINEAR_TEXT: &str = "1 + 2x + 3y\n4 + 5x + 7y\n";

pub fn pentagon_equal_system() -> SparseSystem {
    parse_system(PENTAGON_EQUAL_TEXT).expect("fixture system")
}

pub fn pentagon_strict_system() -> SparseSystem {
    parse_system(PENTAGON_STRICT_TEXT).expect("fixture system")
}

/// Support `(0,0,0),(1,0,0),(1,1,0),(0,1,0),(0,0,1),(0,1,1)` with every coefficient non-zero.
pub fn prism_system() -> SparseSystem {
    parse_system(PRISM_TEXT).expect("fixture system")
}

pub fn dense_linear_system() -> SparseSystem {
    parse_system(DENSE_LINEAR_TEXT).expect("fixture system")
}

pub fn unit_square() -> Polytope {
    poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
}

pub fn bottom_edge() -> Polytope {
    poly(&[&[0, 0], &[1, 0]])
}

/// `(bottom edge, square)` inside the square.
pub fn square_bottom_edge() -> (Vec<Polytope>, Polytope) {
    (vec![bottom_edge(), unit_square()], unit_square())
}

pub fn two_segments() -> Vec<Polytope> {
    vec![bottom_edge(), poly(&[&[0, 0], &[0, 1]])]
}

pub fn standard_simplex(n: usize) -> Polytope {
    let mut pts = vec![vec![Rat::from_integer(Int::from(0)); n]];
    for i in 0..n {
        let mut e = vec![Rat::from_integer(Int::from(0)); n];
        e[i] = Rat::from_integer(Int::from(1));
        pts.push(e);
    }
    Polytope::from_points(pts).expect("simplex")
}

/// Every collection fixture with its name.
pub fn collections() -> Vec<(&'static str, Vec<Polytope>)> {
    vec![
        ("pentagon_equal", pentagon_equal()),
        ("pentagon_strict", pentagon_strict()),
        ("square_bottom_edge", square_bottom_edge().0),
        ("two_segments", two_segments()),
        ("square_pair", vec![unit_square(), unit_square()]),
        ("prism_newton", prism_system().newton_polytopes().expect("fixture")),
    ]
}

pub fn systems() -> Vec<(&'static str, SparseSystem)> {
    vec![
        ("pentagon_equal", pentagon_equal_system()),
        ("pentagon_strict", pentagon_strict_system()),
        ("prism", prism_system()),
        ("dense_linear", dense_linear_system()),
    ]
}

fn int_pt(x: &[i64]) -> Point {
    x.iter().map(|&c| Rat::from_integer(Int::from(c))).collect()
}

/// All lattice points of `[0, m]ⁿ`.
pub fn box_points(n: usize, m: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=m).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// Hull of `k` random lattice points of `[0, m]ⁿ` (may be lower-dimensional).
pub fn random_lattice_polytope<R: Rng>(rng: &mut R, n: usize, m: i64, k: usize) -> Polytope {
    let pts: Vec<Point> = (0..k.max(1)).map(|_| int_pt(&(0..n).map(|_| rng.gen_range(0..=m)).collect::<Vec<_>>())).collect();
    Polytope::from_points(pts).expect("random points")
}

/// A full-dimensional random lattice polytope in `[0, m]ⁿ`.
pub fn random_full_polytope<R: Rng>(rng: &mut R, n: usize, m: i64) -> Polytope {
    loop {
        let k = rng.gen_range(n + 1..=n + 4);
        let p = random_lattice_polytope(rng, n, m, k);
        if p.is_full_dimensional() {
            return p;
        }
    }
}

/// Lattice points of `Q` inside the box `[0, m]ⁿ`.
pub fn lattice_points_in(q: &Polytope, m: i64) -> Vec<Vec<i64>> {
    box_points(q.ambient_dim(), m).into_iter().filter(|p| q.contains_point(&int_pt(p))).collect()
}

/// Hull of a random non-empty subset of `pts`, biased towards small subsets.
pub fn random_sub_polytope<R: Rng>(rng: &mut R, pts: &[Vec<i64>]) -> Polytope {
    let k = rng.gen_range(1..=pts.len().min(5));
    let chosen: Vec<Point> = pts.choose_multiple(rng, k).map(|p| int_pt(p)).collect();
    Polytope::from_points(chosen).expect("subset")
}

/// `(P₁,…,Pₙ, Q)` with every `Pᵢ ⊆ Q`, all lattice, `Q` full-dimensional in `[0, m]ⁿ`.
pub fn random_equal_instance<R: Rng>(rng: &mut R, n: usize, m: i64) -> (Vec<Polytope>, Polytope) {
    let q = random_full_polytope(rng, n, m);
    let pts = lattice_points_in(&q, m);
    let ps = (0..n)
        .map(|_| {
            // Half of the members are Q itself so that equality cases are common.
            if rng.gen_bool(0.4) {
                q.clone()
            } else {
                random_sub_polytope(rng, &pts)
            }
        })
        .collect();
    (ps, q)
}

/// Nested pairs `Pᵢ ⊆ Qᵢ` with independently drawn `Qᵢ`.
pub fn random_nested_instance<R: Rng>(rng: &mut R, n: usize, m: i64) -> (Vec<Polytope>, Vec<Polytope>) {
    let mut ps = Vec::new();
    let mut qs = Vec::new();
    for _ in 0..n {
        let q = if rng.gen_bool(0.3) {
            {
            let k = rng.gen_range(2..=n + 1);
            random_lattice_polytope(rng, n, m, k)
        }
        } else {
            random_full_polytope(rng, n, m)
        };
        let pts = lattice_points_in(&q, m);
        let p = if rng.gen_bool(0.3) { q.clone() } else { random_sub_polytope(rng, &pts) };
        ps.push(p);
        qs.push(q);
    }
    (ps, qs)
}

/// Random lattice collection of `n` polytopes in `[0, m]ⁿ`.
pub fn random_collection<R: Rng>(rng: &mut R, n: usize, m: i64) -> Vec<Polytope> {
    (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=n + 3);
            random_lattice_polytope(rng, n, m, k)
        })
        .collect()
}

fn random_coeff<R: Rng>(rng: &mut R) -> Rat {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-9..=9);
    }
    Rat::from_integer(Int::from(c))
}

/// Random support `𝒜` in `[0, m]ⁿ` with full-dimensional hull, as distinct points.
pub fn random_support<R: Rng>(rng: &mut R, n: usize, m: i64, size: usize) -> Vec<Vec<i64>> {
    let all = box_points(n, m);
    loop {
        let pts: Vec<Vec<i64>> = all.choose_multiple(rng, size.min(all.len())).cloned().collect();
        let p = Polytope::from_points(pts.iter().map(|x| int_pt(x)).collect()).expect("points");
        if p.is_full_dimensional() {
            return pts;
        }
    }
}

/// Dense system on a random support whose maximal minors are all non-zero.
pub fn random_cramer_system<R: Rng>(rng: &mut R, n: usize, m: i64, size: usize) -> SparseSystem {
    let pts = random_support(rng, n, m, size);
    loop {
        let c = RatMatrix::from_rows((0..n).map(|_| (0..pts.len()).map(|_| random_coeff(rng)).collect()).collect())
            .expect("rectangular");
        let s = SparseSystem::from_matrix(pts.clone(), c).expect("dense system");
        if crate::system::vanishing_minor(&s).is_none() {
            return s;
        }
    }
}

/// A system on a random support with a rank drop on some proper face of `Q`.
///
/// A random face `F` is chosen and the coefficients on `ℱ` are forced into a subspace of
/// dimension `dim F`: each column on `F` is a combination of `dim F` fixed vectors.
/// Returns `None` when the random draw produces a zero row or column.
pub fn random_failing_system<R: Rng>(rng: &mut R, n: usize, m: i64, size: usize) -> Option<SparseSystem> {
    let pts = random_support(rng, n, m, size);
    let q = Polytope::from_points(pts.iter().map(|x| int_pt(x)).collect()).expect("points");
    let faces: Vec<_> = q.proper_faces().cloned().collect();
    let face = faces.choose(rng)?;
    let probe = SparseSystem::from_matrix(pts.clone(), RatMatrix::from_rows(vec![vec![Rat::from_integer(Int::from(1)); pts.len()]; n]).ok()?).ok()?;
    let on_face = probe.face_support(&face.normal).ok()?;
    let basis: Vec<Vec<Rat>> = (0..face.dim).map(|_| (0..n).map(|_| random_coeff(rng)).collect()).collect();
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    for j in 0..pts.len() {
        if on_face.contains(&j) {
            let mut col = vec![Rat::from_integer(Int::from(0)); n];
            for b in &basis {
                let w = Rat::from_integer(Int::from(rng.gen_range(-3..=3)));
                for i in 0..n {
                    col[i] += &w * &b[i];
                }
            }
            cols.push(col);
        } else {
            cols.push((0..n).map(|_| random_coeff(rng)).collect());
        }
    }
    let c = RatMatrix::from_rows((0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()).ok()?;
    let s = SparseSystem::from_matrix(pts, c).ok()?;
    (s.coefficients().rank() == n).then_some(s)
}
