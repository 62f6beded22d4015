use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use super::GenConfig;
use crate::world::{Direction, World, MAX_MARKERS};

/// Samples a random world.
///
/// Dimensions are uniform on `[min_dim, max_dim]`, the agent pose is uniform.
/// Every other cell is an obstacle with probability `p_obstacle`; any
/// non-obstacle cell (the agent's included) then holds a uniform 1..=10
/// markers with probability `p_marker`.
pub fn sample_world<R: Rng + ?Sized>(rng: &mut R, config: &GenConfig) -> World {
    let dim = |rng: &mut R| rng.random_range(config.min_dim as u32..=config.max_dim as u32) as usize;
    let rows = dim(rng);
    let cols = dim(rng);
    let agent = (
        rng.random_range(0..rows as u32) as usize,
        rng.random_range(0..cols as u32) as usize,
    );
    let dir = Direction::ALL[rng.random_range(0..4u32) as usize];
    let mut markers = BTreeMap::new();
    let mut obstacles = BTreeSet::new();
    for r in 0..rows {
        for c in 0..cols {
            if (r, c) != agent && rng.random_bool(config.p_obstacle) {
                obstacles.insert((r, c));
            } else if rng.random_bool(config.p_marker) {
                markers.insert((r, c), rng.random_range(1..=MAX_MARKERS));
            }
        }
    }
    World::new(rows, cols, agent, dir, markers, obstacles).expect("sampled world satisfies invariants")
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn deterministic_given_seed() {
        let config = GenConfig::default();
        let a = sample_world(&mut ChaCha8Rng::seed_from_u64(1), &config);
        let b = sample_world(&mut ChaCha8Rng::seed_from_u64(1), &config);
        assert_eq!(a, b);
    }

    #[test]
    fn zero_densities_give_empty_grids() {
        let config = GenConfig {
            p_obstacle: 0.0,
            p_marker: 0.0,
            ..GenConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let w = sample_world(&mut rng, &config);
            assert!(w.markers().is_empty() && w.obstacles().is_empty());
        }
    }

    #[test]
    fn full_marker_density_covers_free_cells() {
        let config = GenConfig {
            p_marker: 1.0,
            ..GenConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let w = sample_world(&mut rng, &config);
            assert_eq!(w.markers().len() + w.obstacles().len(), w.rows() * w.cols());
        }
    }
}
