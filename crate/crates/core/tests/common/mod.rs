//! Independent oracles: small exact routines that share no code with the library.
#![allow(dead_code)]

use mixvol_core::polytope::Polytope;
use mixvol_core::rational::Rat;
use num_rational::Ratio;

/// Integer coordinates of a lattice polytope's vertices.
pub fn int_vertices(p: &Polytope) -> Vec<Vec<i64>> {
    p.vertices()
        .iter()
        .map(|v| v.iter().map(|c| i64::try_from(c.to_integer()).unwrap()).collect())
        .collect()
}

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; returns the hull in counter-clockwise order.
pub fn hull2(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Vec<i64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<i64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the area (shoelace).
pub fn area2(points: &[Vec<i64>]) -> i64 {
    let h = hull2(points);
    if h.len() < 3 {
        return 0;
    }
    let mut s = 0;
    for i in 0..h.len() {
        let (a, b) = (&h[i], &h[(i + 1) % h.len()]);
        s += a[0] * b[1] - a[1] * b[0];
    }
    s.abs()
}

/// `2! V(P, Q) = Vol(P + Q) − Vol(P) − Vol(Q)`.
pub fn mv2(p: &[Vec<i64>], q: &[Vec<i64>]) -> i64 {
    let sum: Vec<Vec<i64>> = p.iter().flat_map(|a| q.iter().map(move |b| vec![a[0] + b[0], a[1] + b[1]])).collect();
    let twice = area2(&sum) - area2(p) - area2(q);
    assert!(twice % 2 == 0, "lattice mixed area must be an integer");
    twice / 2
}

pub fn mv2_polytopes(ps: &[Polytope]) -> i64 {
    mv2(&int_vertices(&ps[0]), &int_vertices(&ps[1]))
}

type Q128 = Ratio<i128>;

pub fn to_q(r: &Rat) -> Q128 {
    Q128::new(i128::try_from(r.numer()).unwrap(), i128::try_from(r.denom()).unwrap())
}

/// Rank by plain Gaussian elimination over `i128` rationals.
pub fn rank(rows: &[Vec<Q128>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != Q128::from(0)) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != Q128::from(0) {
                let f = m[i][c] / m[r][c];
                for k in 0..cols {
                    let v = m[r][k];
                    m[i][k] -= f * v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Determinant by cofactor expansion (n ≤ 4).
pub fn det(m: &[Vec<Q128>]) -> Q128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut total = Q128::from(0);
    for j in 0..n {
        let minor: Vec<Vec<Q128>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| *x).collect()).collect();
        let term = m[0][j] * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}
