//! Inclusion-exclusion over all sub-sums.

use num_traits::Zero;

use super::check_square_collection;
use crate::error::Result;
use crate::polytope::Polytope;
use crate::rational::{factorial, Rat};

/// `V(K₁,…,Kₙ) = (1/n!) Σ_{∅≠I⊆[n]} (−1)^{n−|I|} Vol(Σ_{i∈I} Kᵢ)`.
pub fn mixed_volume_polarization(ks: &[Polytope]) -> Result<Rat> {
    let n = check_square_collection(ks)?;
    // sums[mask] reuses the sum for mask without its lowest bit
    let mut sums: Vec<Option<Polytope>> = vec![None; 1 << n];
    let mut total = Rat::zero();
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let sum = match &sums[rest] {
            Some(p) => p.minkowski_sum(&ks[low])?,
            None => ks[low].clone(),
        };
        let vol = sum.euclidean_volume();
        if (n - mask.count_ones() as usize) % 2 == 0 {
            total += vol;
        } else {
            total -= vol;
        }
        sums[mask] = Some(sum);
    }
    Ok(total / Rat::from_integer(factorial(n)))
}
