//! Spatial probability distributions of quantum and classical walks.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigInt, BigRational, BigUint, One, ToPrimitive};
use num_complex::Complex64;

use crate::dynamics::{evolve, CoinOperator, Dynamics, StepOperator};
use crate::error::{Error, Result};
use crate::hilbert::{BasisLabel, CoinString, Position, Space, SparseState, Topology};

const NORM_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct SpatialDistribution {
    probabilities: BTreeMap<Position, f64>,
    steps: usize,
}

impl SpatialDistribution {
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn get(&self, p: Position) -> f64 {
        self.probabilities.get(&p).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Position, f64)> + '_ {
        self.probabilities.iter().map(|(p, v)| (*p, *v))
    }

    pub fn total(&self) -> f64 {
        self.probabilities.values().sum()
    }

    /// Mean of the node index.
    pub fn mean(&self) -> f64 {
        self.iter().map(|(p, v)| p.index as f64 * v).sum()
    }

    pub fn std_dev(&self) -> f64 {
        std_dev(self)
    }

    /// Positions of the largest probability on each side of the origin.
    pub fn peaks(&self) -> (Option<Position>, Option<Position>) {
        let best = |filter: &dyn Fn(&Position) -> bool| {
            self.iter()
                .filter(|(p, _)| filter(p))
                .fold(None::<(Position, f64)>, |acc, (p, v)| match acc {
                    Some((_, bv)) if bv >= v => acc,
                    _ => Some((p, v)),
                })
                .map(|(p, _)| p)
        };
        (best(&|p| p.index < 0), best(&|p| p.index > 0))
    }
}

/// Marginal position distribution `p(x) = Σ_c |α_{x,c}|²`.
pub fn spatial_distribution(s: &SparseState, steps: usize) -> Result<SpatialDistribution> {
    let norm_sqr = s.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let mut probabilities = BTreeMap::new();
    for (l, a) in s.iter() {
        *probabilities.entry(l.position).or_insert(0.0) += a.norm_sqr();
    }
    Ok(SpatialDistribution { probabilities, steps })
}

/// Symmetric fair-coin walk after `steps` steps, from exact binomial
/// coefficients.
pub fn classical_rw_distribution(steps: usize) -> SpatialDistribution {
    let denom = BigInt::from(BigUint::one() << steps);
    let mut probabilities = BTreeMap::new();
    let mut binom = BigUint::one();
    for k in 0..=steps {
        let x = 2 * k as i64 - steps as i64;
        let p = BigRational::new(BigInt::from(binom.clone()), denom.clone());
        probabilities.insert(Position::new(x), p.to_f64().unwrap_or(0.0));
        binom = binom * BigUint::from(steps - k) / BigUint::from(k + 1);
    }
    SpatialDistribution { probabilities, steps }
}

pub fn std_dev(d: &SpatialDistribution) -> f64 {
    let mean = d.mean();
    let second: f64 = d.iter().map(|(p, v)| (p.index as f64).powi(2) * v).sum();
    (second - mean * mean).max(0.0).sqrt()
}

/// Initial coin states for line walks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoinInit {
    Zero,
    One,
    /// (|0⟩ + |1⟩)/√2
    Plus,
    /// (|0⟩ + i|1⟩)/√2, the symmetric start.
    PlusI,
}

impl CoinInit {
    pub fn amplitudes(self) -> [Complex64; 2] {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            CoinInit::Zero => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            CoinInit::One => [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            CoinInit::Plus => [Complex64::new(r, 0.0), Complex64::new(r, 0.0)],
            CoinInit::PlusI => [Complex64::new(r, 0.0), Complex64::new(0.0, r)],
        }
    }
}

/// Coined walk on the line `[-steps, steps]` started at the origin.
pub fn line_walk(coin: CoinOperator, steps: usize, init: CoinInit) -> Result<SparseState> {
    let span = steps as i64;
    let topo = Topology::line(-span, span)?;
    let space = Space::new(topo.clone(), 1);
    let [a0, a1] = init.amplitudes();
    let start = SparseState::from_entries(
        space,
        [
            (BasisLabel::new(Position::new(0), CoinString::zeros(1)), a0),
            (BasisLabel::new(Position::new(0), CoinString::new(vec![true])), a1),
        ],
    )?;
    let d = Dynamics::homogeneous(StepOperator::dtqw(Arc::new(topo), coin), steps);
    evolve(&d, &start, 0, steps)
}

pub fn hadamard_walk(steps: usize, init: CoinInit) -> Result<SpatialDistribution> {
    spatial_distribution(&line_walk(CoinOperator::hadamard(), steps, init)?, steps)
}

/// Rows `(x, p_quantum, p_classical)` over `[-range, range]`, keeping only
/// sites with the parity of `range`.
pub fn comparison_rows(
    quantum: &SpatialDistribution,
    classical: &SpatialDistribution,
    range: i64,
) -> Vec<(i64, f64, f64)> {
    (-range..=range)
        .filter(|x| (x - range).rem_euclid(2) == 0)
        .map(|x| (x, quantum.get(Position::new(x)), classical.get(Position::new(x))))
        .collect()
}

/// Series for the Hadamard-versus-classical comparison figure.
pub fn figure_one(steps: usize) -> Result<Vec<(i64, f64, f64)>> {
    let q = hadamard_walk(steps, CoinInit::PlusI)?;
    let c = classical_rw_distribution(steps);
    Ok(comparison_rows(&q, &c, steps as i64))
}
