//! Beneath-beyond convex hull over ℤᵈ.
//!
//! Input points must be distinct and affinely span ℤᵈ. The boundary is kept as a
//! triangulation into (d−1)-simplices; coplanar simplices are merged into facets at
//! the end, and extreme points are identified from the facet incidences.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};

use crate::linalg::{hyperplane_normal, int_det, int_rank};
use crate::rational::{int_dot, Int};

#[derive(Clone, Debug)]
pub struct HullFacet {
    /// Primitive outer normal.
    pub normal: Vec<Int>,
    pub offset: Int,
    /// Indices of every input point lying on the facet.
    pub points: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Hull {
    pub dim: usize,
    pub facets: Vec<HullFacet>,
    /// Boundary triangulation, indices into the input.
    pub simplices: Vec<Vec<usize>>,
    /// Extreme points, in input order.
    pub vertices: Vec<usize>,
}

struct Simplex {
    verts: Vec<usize>,
    normal: Vec<Int>,
    offset: Int,
}

fn oriented_simplex(pts: &[Vec<Int>], verts: Vec<usize>, center: &[Int], weight: &Int) -> Simplex {
    let base = &pts[verts[0]];
    let diffs: Vec<Vec<Int>> = verts[1..]
        .iter()
        .map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let mut normal = hyperplane_normal(&diffs);
    let mut offset = int_dot(&normal, base);
    // center/weight is strictly interior
    if int_dot(&normal, center) > &offset * weight {
        normal.iter_mut().for_each(|x| *x = -x.clone());
        offset = -offset;
    }
    Simplex {
        verts,
        normal,
        offset,
    }
}

/// Greedy choice of `d + 1` affinely independent points.
fn initial_simplex(pts: &[Vec<Int>], d: usize) -> Option<Vec<usize>> {
    let mut chosen = vec![0usize];
    let mut diffs: Vec<Vec<Int>> = Vec::new();
    for i in 1..pts.len() {
        let diff: Vec<Int> = pts[i].iter().zip(&pts[0]).map(|(a, b)| a - b).collect();
        diffs.push(diff);
        if int_rank(&diffs) == diffs.len() {
            chosen.push(i);
            if chosen.len() == d + 1 {
                return Some(chosen);
            }
        } else {
            diffs.pop();
        }
    }
    None
}

fn hull_1d(pts: &[Vec<Int>]) -> Hull {
    let (mut lo, mut hi) = (0, 0);
    for (i, p) in pts.iter().enumerate() {
        if p[0] < pts[lo][0] {
            lo = i;
        }
        if p[0] > pts[hi][0] {
            hi = i;
        }
    }
    let mut vertices = vec![lo, hi];
    vertices.sort_unstable();
    Hull {
        dim: 1,
        facets: vec![
            HullFacet {
                normal: vec![-Int::one()],
                offset: -pts[lo][0].clone(),
                points: vec![lo],
            },
            HullFacet {
                normal: vec![Int::one()],
                offset: pts[hi][0].clone(),
                points: vec![hi],
            },
        ],
        simplices: vec![vec![lo], vec![hi]],
        vertices,
    }
}

/// Convex hull of distinct, full-dimensional points in ℤᵈ (d ≥ 1).
pub fn convex_hull_int(pts: &[Vec<Int>]) -> Hull {
    let d = pts[0].len();
    assert!(d >= 1, "hull needs ambient dimension >= 1");
    if d == 1 {
        return hull_1d(pts);
    }
    let init = initial_simplex(pts, d).expect("points must affinely span the space");
    let weight = Int::from(d + 1);
    let center: Vec<Int> = (0..d)
        .map(|k| init.iter().fold(Int::zero(), |acc, &i| acc + &pts[i][k]))
        .collect();

    let mut faces: Vec<Option<Simplex>> = Vec::new();
    for skip in 0..=d {
        let verts: Vec<usize> = init.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &i)| i).collect();
        faces.push(Some(oriented_simplex(pts, verts, &center, &weight)));
    }

    let in_init: std::collections::HashSet<usize> = init.iter().copied().collect();
    for (idx, p) in pts.iter().enumerate() {
        if in_init.contains(&idx) {
            continue;
        }
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter_map(|(f, s)| s.as_ref().filter(|s| int_dot(&s.normal, p) > s.offset).map(|_| f))
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for &f in &visible {
            let verts = &faces[f].as_ref().unwrap().verts;
            for skip in 0..verts.len() {
                let mut r: Vec<usize> = verts.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect();
                r.sort_unstable();
                *ridges.entry(r).or_default() += 1;
            }
        }
        for &f in &visible {
            faces[f] = None;
        }
        let mut horizon: Vec<Vec<usize>> = ridges.into_iter().filter(|(_, c)| *c == 1).map(|(r, _)| r).collect();
        horizon.sort();
        for mut r in horizon {
            r.push(idx);
            faces.push(Some(oriented_simplex(pts, r, &center, &weight)));
        }
    }

    let simplices: Vec<Simplex> = faces.into_iter().flatten().collect();
    let mut merged: BTreeMap<(Vec<Int>, Int), ()> = BTreeMap::new();
    for s in &simplices {
        merged.insert((s.normal.clone(), s.offset.clone()), ());
    }
    let facets: Vec<HullFacet> = merged
        .into_keys()
        .map(|(normal, offset)| {
            let points = (0..pts.len()).filter(|&i| int_dot(&normal, &pts[i]) == offset).collect();
            HullFacet {
                normal,
                offset,
                points,
            }
        })
        .collect();

    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); pts.len()];
    for (fi, f) in facets.iter().enumerate() {
        for &p in &f.points {
            incident[p].push(fi);
        }
    }
    let vertices: Vec<usize> = (0..pts.len())
        .filter(|&p| {
            incident[p].len() >= d && {
                let normals: Vec<Vec<Int>> = incident[p].iter().map(|&f| facets[f].normal.clone()).collect();
                int_rank(&normals) == d
            }
        })
        .collect();

    Hull {
        dim: d,
        facets,
        simplices: simplices.into_iter().map(|s| s.verts).collect(),
        vertices,
    }
}

/// `d! · Vol` of the hull, from its boundary triangulation coned over one vertex.
pub fn normalized_volume_int(pts: &[Vec<Int>], hull: &Hull) -> Int {
    let apex = &pts[hull.vertices[0]];
    let mut total = Int::zero();
    for s in &hull.simplices {
        let m: Vec<Vec<Int>> = s
            .iter()
            .map(|&i| pts[i].iter().zip(apex).map(|(a, b)| a - b).collect())
            .collect();
        total += int_det(m).abs();
    }
    total
}
