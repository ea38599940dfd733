//! Shared inputs for the benchmarks: seeded vector pairs per model.

use bjortho::norm::{self, unit_sphere_samples};
use bjortho::{NormSpec, Result, Vector};

/// `count` seeded pairs of unit-sphere points; exact models get rational coordinates.
pub fn sphere_pairs(spec: &NormSpec, count: usize, seed: u64) -> Result<Vec<(Vector, Vector)>> {
    let pts = unit_sphere_samples(spec, 2 * count, seed)?;
    Ok(pts.chunks_exact(2).map(|c| (c[0].clone(), c[1].clone())).collect())
}

/// Seeded Gaussian directions as float vectors.
pub fn directions(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = norm::rng(seed);
    (0..count).map(|_| norm::gaussian_direction(&mut rng, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_seeded() {
        let s = NormSpec::hexagonal();
        assert_eq!(sphere_pairs(&s, 5, 1).unwrap(), sphere_pairs(&s, 5, 1).unwrap());
        assert_eq!(directions(3, 4, 2), directions(3, 4, 2));
    }
}
