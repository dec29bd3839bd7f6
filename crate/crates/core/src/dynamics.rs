//! One-step walk unitaries and multi-step evolution.
//!
//! Shift convention: coin bit 0 moves the walker to `x + 1`, bit 1 to `x - 1`.
//! Shifts are key rewrites on the sparse map and therefore exact.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::{BasisLabel, Position, Space, SparseState, Topology};

const UNITARY_TOL: f64 = 1e-12;
const CHECK_TOL: f64 = 1e-10;

/// A 2×2 coin toss matrix, row-major: `matrix[out][in]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinOperator {
    matrix: [[Complex64; 2]; 2],
}

impl CoinOperator {
    pub fn new(matrix: [[Complex64; 2]; 2]) -> Self {
        CoinOperator { matrix }
    }

    pub fn real(m: [[f64; 2]; 2]) -> Self {
        let c = |v| Complex64::new(v, 0.0);
        CoinOperator::new([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
    }

    pub fn hadamard() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        CoinOperator::real([[r, r], [r, -r]])
    }

    pub fn identity() -> Self {
        CoinOperator::real([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.matrix;
        CoinOperator::new([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn is_identity(&self) -> bool {
        *self == CoinOperator::identity()
    }

    /// `U·U† = I` elementwise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let m = &self.matrix;
        (0..2).all(|i| {
            (0..2).all(|j| {
                let v = m[i][0] * m[j][0].conj() + m[i][1] * m[j][1].conj();
                let target = if i == j { 1.0 } else { 0.0 };
                (v - target).norm() <= tol
            })
        })
    }
}

/// What a single time step does.
#[derive(Clone, Debug, PartialEq)]
pub enum StepMode {
    /// Standard coined walk on a single coin: toss, then shift.
    Dtqw { coin: CoinOperator },
    /// Multi-coin step: toss coin `coin_index`, then shift conditioned on it.
    McqwStep { coin_index: usize, coin: CoinOperator },
    /// Conditional shift on one coin, no toss.
    Shift { coin_index: usize },
    /// No evolution.
    Identity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepOperator {
    topology: Arc<Topology>,
    mode: StepMode,
}

impl StepOperator {
    pub fn new(topology: Arc<Topology>, mode: StepMode) -> Self {
        StepOperator { topology, mode }
    }

    pub fn dtqw(topology: Arc<Topology>, coin: CoinOperator) -> Self {
        Self::new(topology, StepMode::Dtqw { coin })
    }

    pub fn shift(topology: Arc<Topology>, coin_index: usize) -> Self {
        Self::new(topology, StepMode::Shift { coin_index })
    }

    pub fn identity(topology: Arc<Topology>) -> Self {
        Self::new(topology, StepMode::Identity)
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn mode(&self) -> &StepMode {
        &self.mode
    }

    /// Smallest coin count this operator can act on.
    pub fn required_coins(&self) -> usize {
        match &self.mode {
            StepMode::Dtqw { .. } => 1,
            StepMode::McqwStep { coin_index, .. } | StepMode::Shift { coin_index } => coin_index + 1,
            StepMode::Identity => 0,
        }
    }

    /// True when the step permutes basis kets (no coin arithmetic).
    pub fn is_permutation(&self) -> bool {
        match &self.mode {
            StepMode::Dtqw { coin } | StepMode::McqwStep { coin, .. } => coin.is_identity(),
            StepMode::Shift { .. } | StepMode::Identity => true,
        }
    }

    fn check(&self, s: &SparseState) -> Result<()> {
        if *self.topology != *s.topology() {
            return Err(Error::SpaceMismatch(format!(
                "operator on {:?}, state on {:?}",
                self.topology,
                s.topology()
            )));
        }
        let need = self.required_coins();
        if need > s.n_coins() {
            return Err(Error::CoinIndex {
                index: need - 1,
                n_coins: s.n_coins(),
            });
        }
        Ok(())
    }
}

pub fn apply_step(op: &StepOperator, s: &SparseState) -> Result<SparseState> {
    op.check(s)?;
    match &op.mode {
        StepMode::Dtqw { coin } => shift(&op.topology, &toss(coin, 0, s), 0, 1),
        StepMode::McqwStep { coin_index, coin } => shift(&op.topology, &toss(coin, *coin_index, s), *coin_index, 1),
        StepMode::Shift { coin_index } => shift(&op.topology, s, *coin_index, 1),
        StepMode::Identity => Ok(s.clone()),
    }
}

pub fn apply_step_adjoint(op: &StepOperator, s: &SparseState) -> Result<SparseState> {
    op.check(s)?;
    match &op.mode {
        StepMode::Dtqw { coin } => Ok(toss(&coin.adjoint(), 0, &shift(&op.topology, s, 0, -1)?)),
        StepMode::McqwStep { coin_index, coin } => Ok(toss(
            &coin.adjoint(),
            *coin_index,
            &shift(&op.topology, s, *coin_index, -1)?,
        )),
        StepMode::Shift { coin_index } => shift(&op.topology, s, *coin_index, -1),
        StepMode::Identity => Ok(s.clone()),
    }
}

/// Conditional translation on coin `slot`; `sign = -1` gives the inverse.
fn shift(topology: &Topology, s: &SparseState, slot: usize, sign: i64) -> Result<SparseState> {
    let mut out = BTreeMap::new();
    for (label, amp) in s.iter() {
        let step = if label.coins.bit(slot) { -1 } else { 1 };
        let position = topology.shift(label.position, sign * step)?;
        out.insert(BasisLabel::new(position, label.coins.clone()), *amp);
    }
    Ok(SparseState::from_map(s.space().clone(), out))
}

/// Applies `coin` to coin register slot `slot`.
fn toss(coin: &CoinOperator, slot: usize, s: &SparseState) -> SparseState {
    if coin.is_identity() {
        return s.clone();
    }
    let m = coin.matrix();
    let mut out: BTreeMap<BasisLabel, Complex64> = BTreeMap::new();
    for (label, amp) in s.iter() {
        let b = label.coins.bit(slot) as usize;
        for (out_bit, row) in m.iter().enumerate() {
            let w = row[b];
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            let key = BasisLabel::new(label.position, label.coins.with_bit(slot, out_bit == 1));
            *out.entry(key).or_default() += w * amp;
        }
    }
    SparseState::from_map(s.space().clone(), out)
}

/// Per-step operator sequence; step `i` takes time `i` to time `i + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dynamics {
    steps: Vec<StepOperator>,
}

impl Dynamics {
    pub fn new(steps: Vec<StepOperator>) -> Self {
        Dynamics { steps }
    }

    pub fn homogeneous(op: StepOperator, len: usize) -> Self {
        Dynamics { steps: vec![op; len] }
    }

    /// Coinless multi-coin walk: step `i` shifts on coin `i`.
    pub fn coinless_mcqw(topology: Arc<Topology>, len: usize) -> Self {
        Dynamics {
            steps: (0..len).map(|i| StepOperator::shift(topology.clone(), i)).collect(),
        }
    }

    /// Multi-coin walk in coin-toss form: step `i` tosses coin `i` with
    /// `coins[i]` and shifts on it.
    pub fn tossed_mcqw(topology: Arc<Topology>, coins: &[CoinOperator]) -> Self {
        Dynamics {
            steps: coins
                .iter()
                .enumerate()
                .map(|(coin_index, coin)| {
                    StepOperator::new(
                        topology.clone(),
                        StepMode::McqwStep {
                            coin_index,
                            coin: *coin,
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[StepOperator] {
        &self.steps
    }

    pub fn is_permutation(&self) -> bool {
        self.steps.iter().all(StepOperator::is_permutation)
    }
}

/// Evolves `s` from time `from_t` to `to_t`, applying adjoints in reverse
/// order when going backward.
pub fn evolve(d: &Dynamics, s: &SparseState, from_t: usize, to_t: usize) -> Result<SparseState> {
    for t in [from_t, to_t] {
        if t > d.len() {
            return Err(Error::TimeOutOfRange { t, horizon: d.len() });
        }
    }
    let mut state = s.clone();
    if to_t >= from_t {
        for op in &d.steps[from_t..to_t] {
            state = apply_step(op, &state)?;
        }
    } else {
        for op in d.steps[to_t..from_t].iter().rev() {
            state = apply_step_adjoint(op, &state)?;
        }
    }
    Ok(state)
}

/// Applies `coins[i]` to coin slot `i` for every slot.
pub fn absorb_coins(coins: &[CoinOperator], s: &SparseState) -> Result<SparseState> {
    if coins.len() != s.n_coins() {
        return Err(Error::CoinCount {
            expected: s.n_coins(),
            found: coins.len(),
        });
    }
    Ok(coins.iter().enumerate().fold(s.clone(), |st, (i, c)| toss(c, i, &st)))
}

/// Randomized check that `op` preserves norms and that its adjoint inverts it.
///
/// States are drawn from a fixed seed over nodes whose neighbours stay inside
/// the topology.
pub fn check_unitarity(op: &StepOperator, trials: usize) -> bool {
    let n_coins = op.required_coins().max(1);
    let space = Space::new(op.topology().clone(), n_coins);
    let nodes = interior_nodes(op.topology());
    if nodes.is_empty() {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    (0..trials.max(1)).all(|k| {
        let s = SparseState::random(space.clone(), &nodes, 1 + k % 6, &mut rng);
        let Ok(forward) = apply_step(op, &s) else {
            return false;
        };
        let Ok(back) = apply_step_adjoint(op, &forward) else {
            return false;
        };
        (forward.norm() - s.norm()).abs() < CHECK_TOL && back.approx_eq(&s, CHECK_TOL)
    })
}

fn interior_nodes(t: &Topology) -> Vec<Position> {
    match t {
        Topology::Line { x_min, x_max } => (x_min + 1..*x_max).map(Position::new).collect(),
        _ => t.nodes(),
    }
}

/// Tolerance used for coin unitarity checks on construction from user input.
pub fn coin_is_unitary(c: &CoinOperator) -> bool {
    c.is_unitary(UNITARY_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::CoinString;
    use approx::assert_abs_diff_eq;

    fn line(n: i64) -> Arc<Topology> {
        Arc::new(Topology::line(-n, n).unwrap())
    }

    fn ket(space: &Arc<Space>, x: i64, coins: &str) -> SparseState {
        SparseState::basis(space.clone(), BasisLabel::new(Position::new(x), coins.parse().unwrap())).unwrap()
    }

    #[test]
    fn shift_moves_right_on_zero() {
        let t = line(3);
        let sp = Space::new((*t).clone(), 1);
        let op = StepOperator::shift(t, 0);
        let out = apply_step(&op, &ket(&sp, 0, "0")).unwrap();
        assert_eq!(out, ket(&sp, 1, "0"));
        assert_eq!(apply_step_adjoint(&op, &out).unwrap(), ket(&sp, 0, "0"));
    }

    #[test]
    fn hadamard_step_splits() {
        let t = line(3);
        let sp = Space::new((*t).clone(), 1);
        let op = StepOperator::dtqw(t, CoinOperator::hadamard());
        let out = apply_step(&op, &ket(&sp, 0, "0")).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expect = ket(&sp, 1, "0")
            .scale(Complex64::new(r, 0.0))
            .add_scaled(Complex64::new(r, 0.0), &ket(&sp, -1, "1"))
            .unwrap();
        assert!(out.approx_eq(&expect, 1e-15));
        let back = apply_step_adjoint(&op, &expect).unwrap();
        assert!(back.approx_eq(&ket(&sp, 0, "0"), 1e-15));
        assert_eq!(back.support_size(), 1);
    }

    #[test]
    fn cycle_periodic_shift() {
        let t = Arc::new(Topology::cycle(3).unwrap());
        let sp = Space::new((*t).clone(), 1);
        let op = StepOperator::shift(t, 0);
        assert_eq!(apply_step(&op, &ket(&sp, 3, "0")).unwrap(), ket(&sp, 1, "0"));
    }

    #[test]
    fn step_errors() {
        let t = line(1);
        let sp = Space::new((*t).clone(), 1);
        let op = StepOperator::shift(t.clone(), 3);
        assert!(matches!(
            apply_step(&op, &ket(&sp, 0, "0")),
            Err(Error::CoinIndex { .. })
        ));
        let other = StepOperator::shift(line(2), 0);
        assert!(matches!(
            apply_step(&other, &ket(&sp, 0, "0")),
            Err(Error::SpaceMismatch(_))
        ));
        let edge = StepOperator::shift(t, 0);
        assert!(matches!(
            apply_step(&edge, &ket(&sp, 1, "0")),
            Err(Error::ShiftOutOfRange { .. })
        ));
    }

    #[test]
    fn evolve_identity_and_range() {
        let t = line(4);
        let sp = Space::new((*t).clone(), 1);
        let d = Dynamics::homogeneous(StepOperator::dtqw(t, CoinOperator::hadamard()), 4);
        let s = ket(&sp, 0, "1");
        assert_eq!(evolve(&d, &s, 0, 0).unwrap(), s);
        assert!(matches!(evolve(&d, &s, 0, 5), Err(Error::TimeOutOfRange { .. })));
        let fwd = evolve(&d, &s, 0, 4).unwrap();
        assert_abs_diff_eq!(fwd.norm_sqr(), 1.0, epsilon = 1e-12);
        assert!(evolve(&d, &fwd, 4, 0).unwrap().approx_eq(&s, 1e-12));
    }

    #[test]
    fn absorb_identity_and_hadamards() {
        let t = line(1);
        let sp = Space::new((*t).clone(), 2);
        let s = ket(&sp, 0, "00");
        let id = CoinOperator::identity();
        assert_eq!(absorb_coins(&[id, id], &s).unwrap(), s);
        let h = CoinOperator::hadamard();
        let out = absorb_coins(&[h, h], &s).unwrap();
        assert_eq!(out.support_size(), 4);
        for k in 0..4 {
            let l = BasisLabel::new(Position::new(0), CoinString::from_index(k, 2));
            assert_abs_diff_eq!(out.amplitude(&l).re, 0.5, epsilon = 1e-15);
        }
        assert!(matches!(absorb_coins(&[h], &s), Err(Error::CoinCount { .. })));
    }

    #[test]
    fn unitarity_checks() {
        assert!(check_unitarity(
            &StepOperator::dtqw(line(5), CoinOperator::hadamard()),
            20
        ));
        let bad = CoinOperator::real([[1.0, 0.0], [0.0, 2.0]]);
        assert!(!bad.is_unitary(1e-12));
        assert!(!check_unitarity(&StepOperator::dtqw(line(5), bad), 20));
        let tri = Arc::new(Topology::disjoint_cycles([("A", 3), ("B", 3), ("C", 3)]).unwrap());
        assert!(check_unitarity(
            &StepOperator::dtqw(tri.clone(), CoinOperator::identity()),
            50
        ));
        assert!(check_unitarity(&StepOperator::shift(tri, 0), 50));
        assert!(coin_is_unitary(&CoinOperator::hadamard()));
    }
}
