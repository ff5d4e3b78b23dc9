//! Regular subdivisions by lifting, and pure mixed subdivisions through the Cayley trick.

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::cayley::embed;
use super::check_square_collection;
use crate::error::{Error, Result};
use crate::hull::convex_hull_int;
use crate::linalg::{int_pivot_columns, int_rank, RatMatrix};
use crate::polytope::{minkowski_sum_all, Polytope};
use crate::rational::{add, common_denominator, factorial, fmt_rat, sub, to_int_scaled, Int, Point, Rat};

const RETRIES_PER_RANGE: usize = 32;
const WIDENINGS: usize = 4;

/// Cells of the regular subdivision of `points` induced by integer `heights`, as sorted
/// index lists. A cell collects every point whose lift lies on a lower facet, so with
/// generic heights each cell has `d + 1` points (`d` the affine dimension).
pub fn regular_subdivision(points: &[Point], heights: &[Int]) -> Result<Vec<Vec<usize>>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if points.len() != heights.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: heights.len(),
        });
    }
    let mut sorted = points.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != points.len() {
        return Err(Error::InvalidArgument("lifted points must be distinct".into()));
    }
    let scale = common_denominator(points.iter());
    let ints: Vec<Vec<Int>> = points.iter().map(|p| to_int_scaled(p, &scale)).collect();
    let diffs: Vec<Vec<Int>> = ints[1..]
        .iter()
        .map(|p| p.iter().zip(&ints[0]).map(|(a, b)| a - b).collect())
        .collect();
    let pivots = int_pivot_columns(&diffs);
    let d = pivots.len();
    let everything = vec![(0..points.len()).collect::<Vec<_>>()];
    if d == 0 {
        return Ok(everything);
    }
    let lifted: Vec<Vec<Int>> = ints
        .iter()
        .zip(heights)
        .map(|(p, h)| {
            let mut q: Vec<Int> = pivots.iter().map(|&k| p[k].clone()).collect();
            q.push(h.clone());
            q
        })
        .collect();
    let lifted_diffs: Vec<Vec<Int>> = lifted[1..]
        .iter()
        .map(|p| p.iter().zip(&lifted[0]).map(|(a, b)| a - b).collect())
        .collect();
    if int_rank(&lifted_diffs) == d {
        // heights are affine on the configuration
        return Ok(everything);
    }
    let hull = convex_hull_int(&lifted);
    let mut cells: Vec<Vec<usize>> = hull
        .facets
        .into_iter()
        .filter(|f| f.normal[d].is_negative())
        .map(|f| f.points)
        .collect();
    cells.sort();
    Ok(cells)
}

/// Integer heights on the Cayley points together with the seed that produced them.
#[derive(Clone, Debug)]
pub struct Lifting {
    pub points: Vec<Point>,
    pub heights: Vec<Int>,
    pub seed: u64,
    /// Upper end of the height range `[0, bound]` of the successful draw.
    pub bound: u64,
    /// Number of draws, including the successful one.
    pub attempts: usize,
}

/// `σ₁ + ⋯ + σₙ` with each `σᵢ ⊆ Pᵢ` a simplex.
#[derive(Clone, Debug)]
pub struct MixedCell {
    pub parts: Vec<Vec<Point>>,
    pub fully_mixed: bool,
    /// Euclidean volume of the cell (zero for cells of lower dimension).
    pub volume: Rat,
}

impl MixedCell {
    fn new(parts: Vec<Vec<Point>>) -> MixedCell {
        let n = parts[0][0].len();
        let dims: Vec<usize> = parts.iter().map(|s| s.len() - 1).collect();
        let mut volume = Rat::zero();
        if dims.iter().sum::<usize>() == n {
            let rows: Vec<Vec<Rat>> = parts
                .iter()
                .flat_map(|s| s[1..].iter().map(move |p| sub(p, &s[0])))
                .collect();
            let det = RatMatrix::from_rows(rows).expect("square").determinant().expect("square");
            let denom = dims.iter().fold(Int::from(1), |acc, &d| acc * factorial(d));
            volume = det.abs() / Rat::from_integer(denom);
        }
        let fully_mixed = dims.iter().all(|&d| d == 1) && !volume.is_zero();
        MixedCell {
            parts,
            fully_mixed,
            volume,
        }
    }

    pub fn is_full_dimensional(&self) -> bool {
        !self.volume.is_zero()
    }

    /// All vertex sums, a superset of the cell's vertices.
    pub fn points(&self) -> Vec<Point> {
        let mut acc: Vec<Point> = vec![vec![Rat::zero(); self.parts[0][0].len()]];
        for s in &self.parts {
            acc = acc.iter().flat_map(|a| s.iter().map(move |p| add(a, p))).collect();
        }
        acc
    }

    pub fn polytope(&self) -> Polytope {
        Polytope::from_points(self.points()).expect("cells are non-empty")
    }

    pub fn to_json(&self) -> Value {
        let parts: Vec<Vec<Vec<String>>> = self
            .parts
            .iter()
            .map(|s| s.iter().map(|p| p.iter().map(fmt_rat).collect()).collect())
            .collect();
        json!({
            "parts": parts,
            "fully_mixed": self.fully_mixed,
            "volume": fmt_rat(&self.volume),
        })
    }
}

#[derive(Clone, Debug)]
pub struct MixedSubdivision {
    pub cells: Vec<MixedCell>,
    pub lifting: Lifting,
    /// Euclidean volume of `P₁ + ⋯ + Pₙ`.
    pub total_volume: Rat,
}

impl MixedSubdivision {
    /// `n! · V`: the summed Euclidean volumes of the fully mixed cells.
    pub fn normalized_mixed_volume(&self) -> Rat {
        self.cells.iter().filter(|c| c.fully_mixed).map(|c| c.volume.clone()).sum()
    }

    pub fn fully_mixed_cells(&self) -> impl Iterator<Item = &MixedCell> {
        self.cells.iter().filter(|c| c.fully_mixed)
    }

    /// Cell volumes add up to the volume of the Minkowski sum.
    pub fn check_volumes(&self) -> Result<()> {
        let s: Rat = self.cells.iter().map(|c| c.volume.clone()).sum();
        if s != self.total_volume {
            return Err(Error::CrossCheck(format!(
                "mixed cells cover volume {s}, the Minkowski sum has volume {}",
                self.total_volume
            )));
        }
        Ok(())
    }

    /// Full-dimensional cells have pairwise disjoint interiors.
    pub fn check_interiors_disjoint(&self) -> Result<()> {
        let cells: Vec<Polytope> = self
            .cells
            .iter()
            .filter(|c| c.is_full_dimensional())
            .map(MixedCell::polytope)
            .collect();
        for (a, pa) in cells.iter().enumerate() {
            for (b, pb) in cells.iter().enumerate().skip(a + 1) {
                if !interiors_disjoint(pa, pb) {
                    return Err(Error::CrossCheck(format!("mixed cells {a} and {b} overlap")));
                }
            }
        }
        Ok(())
    }

    /// Volume tiling plus pairwise interior disjointness.
    pub fn check_tiling(&self) -> Result<()> {
        self.check_volumes()?;
        self.check_interiors_disjoint()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.lifting.seed,
            "height_bound": self.lifting.bound,
            "attempts": self.lifting.attempts,
            "lifting": self.lifting.points.iter().zip(&self.lifting.heights).map(|(p, h)| json!({
                "point": p.iter().map(fmt_rat).collect::<Vec<_>>(),
                "height": h.to_string(),
            })).collect::<Vec<_>>(),
            "cells": self.cells.iter().map(MixedCell::to_json).collect::<Vec<_>>(),
            "normalized_mixed_volume": fmt_rat(&self.normalized_mixed_volume()),
        })
    }
}

fn separated_by_facet(a: &Polytope, b: &Polytope) -> bool {
    a.facets().iter().any(|f| {
        let u = crate::rational::int_point(&f.normal);
        let lo = b.vertices().iter().map(|x| crate::rational::dot(&u, x)).min().expect("non-empty");
        lo >= f.offset
    })
}

/// Interiors of two full-dimensional polytopes are disjoint iff the origin is not interior
/// to `A − B`.
fn interiors_disjoint(a: &Polytope, b: &Polytope) -> bool {
    if separated_by_facet(a, b) || separated_by_facet(b, a) {
        return true;
    }
    let diff: Vec<Point> = a
        .vertices()
        .iter()
        .flat_map(|x| b.vertices().iter().map(move |y| sub(x, y)))
        .collect();
    let d = Polytope::from_points(diff).expect("non-empty");
    d.facets().iter().any(|f| !f.offset.is_positive())
}

/// A pure mixed subdivision of `P₁ + ⋯ + Pₙ` from a seeded random lifting of the Cayley
/// points. Liftings are redrawn until the Cayley subdivision is a triangulation.
pub fn pure_mixed_subdivision(ps: &[Polytope], seed: u64) -> Result<MixedSubdivision> {
    let n = check_square_collection(ps)?;
    let mut points = Vec::new();
    let mut tags = Vec::new();
    for (i, p) in ps.iter().enumerate() {
        for v in p.vertices() {
            points.push(embed(v, i, n));
            tags.push(i);
        }
    }
    let total = minkowski_sum_all(ps)?;
    let cayley_dim = total.dim() + n - 1;

    let scale = common_denominator(points.iter());
    let max_coord = points
        .iter()
        .flat_map(|p| to_int_scaled(p, &scale))
        .map(|c| c.abs())
        .max()
        .unwrap_or_default()
        .to_u64()
        .unwrap_or(u64::MAX / 1024)
        .max(1);
    let mut bound = (4 * points.len() as u64).saturating_mul(max_coord);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    for _ in 0..WIDENINGS {
        for _ in 0..RETRIES_PER_RANGE {
            attempts += 1;
            let heights: Vec<Int> = (0..points.len()).map(|_| Int::from(rng.gen_range(0..=bound))).collect();
            let cells = regular_subdivision(&points, &heights)?;
            if cells.iter().any(|c| c.len() != cayley_dim + 1) {
                continue;
            }
            let cells = cells
                .into_iter()
                .map(|c| {
                    let parts = (0..n)
                        .map(|i| c.iter().filter(|&&j| tags[j] == i).map(|&j| points[j][..n].to_vec()).collect())
                        .collect();
                    MixedCell::new(parts)
                })
                .collect();
            let sub = MixedSubdivision {
                cells,
                lifting: Lifting {
                    points,
                    heights,
                    seed,
                    bound,
                    attempts,
                },
                total_volume: total.euclidean_volume(),
            };
            sub.check_volumes()?;
            return Ok(sub);
        }
        bound = bound.saturating_mul(16);
    }
    Err(Error::NonGenericLifting { attempts })
}

/// `V(P₁,…,Pₙ)` from a pure mixed subdivision.
pub fn mixed_volume_subdivision(ps: &[Polytope], seed: u64) -> Result<Rat> {
    let sub = pure_mixed_subdivision(ps, seed)?;
    Ok(sub.normalized_mixed_volume() / Rat::from_integer(factorial(ps.len())))
}
