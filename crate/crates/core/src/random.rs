//! Random coins and small random two-state systems, for property checks.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::dynamics::{CoinOperator, Dynamics, StepMode, StepOperator};
use crate::hilbert::{Space, SparseState, Topology};
use crate::pps::TwoStateSystem;

/// Haar-distributed element of U(2).
pub fn haar_coin<R: Rng + ?Sized>(rng: &mut R) -> CoinOperator {
    let u: f64 = rng.random();
    let (c, s) = (u.sqrt(), (1.0 - u).sqrt());
    let [alpha, psi, chi]: [f64; 3] = std::array::from_fn(|_| rng.random::<f64>() * TAU);
    let e = |phi: f64| Complex64::from_polar(1.0, phi);
    let g = e(alpha);
    CoinOperator::new([[g * e(psi) * c, g * e(chi) * s], [-g * e(-chi) * s, g * e(-psi) * c]])
}

/// Bounds for [`random_system`].
#[derive(Clone, Copy, Debug)]
pub struct SmallSystem {
    pub max_positions: u32,
    pub max_coins: usize,
    pub max_horizon: usize,
}

impl Default for SmallSystem {
    fn default() -> Self {
        SmallSystem {
            max_positions: 5,
            max_coins: 2,
            max_horizon: 4,
        }
    }
}

/// Random step compatible with `n_coins` coins on a cycle.
pub fn random_step<R: Rng + ?Sized>(topology: &Arc<Topology>, n_coins: usize, rng: &mut R) -> StepOperator {
    let mode = match rng.random_range(0..8) {
        0 => StepMode::Identity,
        1 => StepMode::Shift {
            coin_index: rng.random_range(0..n_coins),
        },
        2..=4 => StepMode::Dtqw { coin: haar_coin(rng) },
        _ => StepMode::McqwStep {
            coin_index: rng.random_range(0..n_coins),
            coin: haar_coin(rng),
        },
    };
    StepOperator::new(topology.clone(), mode)
}

/// Random non-orthogonal two-state system on a cycle of 3 to
/// `max_positions` sites, with Haar coins and Gaussian states.
pub fn random_system<R: Rng + ?Sized>(bounds: SmallSystem, rng: &mut R) -> TwoStateSystem {
    let length = rng.random_range(3..=bounds.max_positions.max(3));
    let topology = Topology::cycle(length).expect("length >= 3");
    let n_coins = rng.random_range(1..=bounds.max_coins.max(1));
    let horizon = rng.random_range(1..=bounds.max_horizon.max(1));
    let space = Space::new(topology.clone(), n_coins);
    let topology = Arc::new(topology);
    let nodes = topology.nodes();
    let total = nodes.len() << n_coins;
    loop {
        let steps = (0..horizon).map(|_| random_step(&topology, n_coins, rng)).collect();
        let support = rng.random_range(1..=total);
        let pre = SparseState::random(space.clone(), &nodes, support, rng);
        let support = rng.random_range(1..=total);
        let post = SparseState::random(space.clone(), &nodes, support, rng);
        if let Ok(sys) = TwoStateSystem::new(pre, post, Dynamics::new(steps), horizon) {
            if sys.postselection_probability() > 1e-6 {
                return sys;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_coins_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            assert!(haar_coin(&mut rng).is_unitary(1e-12));
        }
    }

    #[test]
    fn systems_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let sys = random_system(SmallSystem::default(), &mut rng);
            assert!(sys.topology().node_count() <= 5);
            assert!(sys.n_coins() <= 2);
            assert!(sys.horizon() <= 4);
        }
    }
}
