//! Pre- and post-selected walks.
//!
//! A [`TwoStateSystem`] holds the forward-evolved pre-selected state and the
//! backward-evolved post-selected state at every time `0..=T`. Conditional
//! probabilities of intermediate position measurements follow the ABL rule;
//! [`TwoStateSystem::collapse_oracle`] recomputes them by explicit
//! measure-collapse-evolve-postselect simulation.

use std::collections::BTreeSet;

use num::{BigUint, One, Zero};
use num_complex::Complex64;

use crate::dynamics::{evolve, Dynamics};
use crate::error::{Error, Result};
use crate::hilbert::{
    apply_complement, apply_projector, BasisLabel, CoinString, Position, PositionProjector, SparseState, Topology,
    EPS_ZERO,
};

/// Probabilities within this distance of 0 or 1 are classified as such.
pub const EPS_CLASS: f64 = 1e-9;

/// Above this many coin strings the cross-time exclusivity check falls back
/// to the coin strings occurring in the two-state vector.
pub const FULL_REGISTER_LIMIT: usize = 1 << 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certainty {
    Certain,
    Impossible,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AblVerdict {
    pub probability: f64,
    pub classification: Certainty,
}

impl AblVerdict {
    pub fn from_probability(probability: f64) -> Self {
        let probability = probability.clamp(0.0, 1.0);
        let classification = if probability > 1.0 - EPS_CLASS {
            Certainty::Certain
        } else if probability < EPS_CLASS {
            Certainty::Impossible
        } else {
            Certainty::Indeterminate
        };
        AblVerdict {
            probability,
            classification,
        }
    }

    pub fn is_certain(&self) -> bool {
        self.classification == Certainty::Certain
    }
}

/// How an exclusivity verdict was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExclusivityBasis {
    /// Distinct positions at one time: orthogonal projectors.
    SameTime,
    /// Graph distance exceeds the elapsed time.
    LightCone,
    /// Operator chain applied to every coin string of the register.
    FullRegister,
    /// Operator chain applied only to coin strings in the two-state support.
    Support,
}

impl ExclusivityBasis {
    /// True when the verdict holds as an operator identity.
    pub fn is_operator_level(self) -> bool {
        self != ExclusivityBasis::Support
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ExclusivityBasis::SameTime => "same_time",
            ExclusivityBasis::LightCone => "light_cone",
            ExclusivityBasis::FullRegister => "full_register",
            ExclusivityBasis::Support => "support",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exclusivity {
    pub exclusive: bool,
    pub basis: ExclusivityBasis,
}

/// Certain and impossible positions at one time step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepCertainty {
    pub t: usize,
    pub certain: Vec<Position>,
    pub impossible: Vec<Position>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Event {
    pub t: usize,
    pub position: Position,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// Two positions certain at the same time.
    SameTime {
        t: usize,
        first: Position,
        second: Position,
    },
    /// Two certain events at different times whose projectors are exclusive
    /// in the Heisenberg picture.
    CrossTime {
        earlier: Event,
        later: Event,
        basis: ExclusivityBasis,
        /// Graph distance over elapsed time; `None` across components.
        velocity: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExclusivityScope {
    /// Every cross-time verdict holds at operator level.
    Operator,
    /// At least one verdict was only checked on the two-state support.
    Support,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PpsReport {
    pub horizon: usize,
    pub steps: Vec<StepCertainty>,
    pub paradox_found: bool,
    pub witnesses: Vec<Witness>,
    pub overlap: Complex64,
    pub postselection_probability: f64,
    pub exclusivity_scope: ExclusivityScope,
    pub trajectory_count: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub positions: Vec<Position>,
}

impl Trajectory {
    /// True if some consecutive pair is farther apart than one hop.
    pub fn has_leap(&self, topology: &Topology) -> bool {
        self.positions.windows(2).any(|w| is_leap(topology, w[0], w[1]))
    }

    pub fn hops_components(&self) -> bool {
        self.positions.windows(2).any(|w| w[0].component != w[1].component)
    }

    pub fn format(&self, topology: &Topology) -> String {
        self.positions
            .iter()
            .map(|p| topology.format(*p))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn is_leap(topology: &Topology, a: Position, b: Position) -> bool {
    topology.distance(a, b).is_none_or(|d| d > 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySet {
    /// Product of the certain-set sizes over all times.
    pub count: BigUint,
    /// Trajectories whose every move is at most one hop.
    pub leap_free_count: BigUint,
    /// Some trajectory moves farther than one hop in a step.
    pub any_leap: bool,
    /// Some trajectory changes connected component.
    pub any_component_hop: bool,
    /// First `cap` trajectories in lexicographic order of per-step choices.
    pub sample: Vec<Trajectory>,
}

/// Pre-selected state, post-selected state and the dynamics between them.
#[derive(Clone, Debug)]
pub struct TwoStateSystem {
    dynamics: Dynamics,
    horizon: usize,
    pre_path: Vec<SparseState>,
    post_path: Vec<SparseState>,
}

impl TwoStateSystem {
    /// `pre` lives at `t = 0`, `post` at `t = horizon`. Both are normalized
    /// here unless already unit-norm; the system is rejected when they are orthogonal.
    pub fn new(pre: SparseState, post: SparseState, dynamics: Dynamics, horizon: usize) -> Result<Self> {
        pre.check_space(&post)?;
        if dynamics.len() < horizon {
            return Err(Error::DynamicsTooShort {
                len: dynamics.len(),
                horizon,
            });
        }
        let pre = normalized(pre)?;
        let post = normalized(post)?;

        let mut pre_path = Vec::with_capacity(horizon + 1);
        pre_path.push(pre);
        for t in 0..horizon {
            let next = evolve(&dynamics, &pre_path[t], t, t + 1)?;
            pre_path.push(next);
        }
        let mut post_path = vec![post];
        for t in (0..horizon).rev() {
            let prev = evolve(&dynamics, post_path.last().unwrap(), t + 1, t)?;
            post_path.push(prev);
        }
        post_path.reverse();

        let sys = TwoStateSystem {
            dynamics,
            horizon,
            pre_path,
            post_path,
        };
        if sys.overlap_at(0).norm() <= EPS_ZERO {
            return Err(Error::OrthogonalTwoState { t: 0 });
        }
        Ok(sys)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn dynamics(&self) -> &Dynamics {
        &self.dynamics
    }

    pub fn topology(&self) -> &Topology {
        self.pre_path[0].topology()
    }

    pub fn n_coins(&self) -> usize {
        self.pre_path[0].n_coins()
    }

    fn check_t(&self, t: usize) -> Result<()> {
        if t > self.horizon {
            Err(Error::TimeOutOfRange {
                t,
                horizon: self.horizon,
            })
        } else {
            Ok(())
        }
    }

    pub fn pre_at(&self, t: usize) -> Result<&SparseState> {
        self.check_t(t)?;
        Ok(&self.pre_path[t])
    }

    pub fn post_at(&self, t: usize) -> Result<&SparseState> {
        self.check_t(t)?;
        Ok(&self.post_path[t])
    }

    /// ⟨post(t)|pre(t)⟩.
    pub fn overlap(&self, t: usize) -> Result<Complex64> {
        self.check_t(t)?;
        Ok(self.overlap_at(t))
    }

    fn overlap_at(&self, t: usize) -> Complex64 {
        self.post_path[t]
            .inner(&self.pre_path[t])
            .expect("paths share one space")
    }

    /// |⟨post|pre(T)⟩|².
    pub fn postselection_probability(&self) -> f64 {
        self.overlap_at(self.horizon).norm_sqr()
    }

    /// ABL conditional probability of finding the walker at `p` at time `t`.
    pub fn abl_probability(&self, t: usize, p: &PositionProjector) -> Result<AblVerdict> {
        self.check_t(t)?;
        let pre = &self.pre_path[t];
        let post = &self.post_path[t];
        let mut inside = Complex64::new(0.0, 0.0);
        let mut outside = Complex64::new(0.0, 0.0);
        for (label, a) in pre.iter() {
            let term = post.amplitude(label).conj() * a;
            if label.position == p.position {
                inside += term;
            } else {
                outside += term;
            }
        }
        let num = inside.norm_sqr();
        let den = num + outside.norm_sqr();
        if den < EPS_ZERO * EPS_ZERO {
            return Err(Error::OrthogonalTwoState { t });
        }
        Ok(AblVerdict::from_probability(num / den))
    }

    /// Conditional probability from an explicit sequential simulation:
    /// measure at `t`, collapse by the Lüders rule, evolve each branch
    /// forward to `T` and post-select. Shares no arithmetic with
    /// [`Self::abl_probability`].
    pub fn collapse_oracle(&self, t: usize, p: &PositionProjector) -> Result<f64> {
        self.check_t(t)?;
        let pre = &self.pre_path[t];
        let post_final = &self.post_path[self.horizon];
        let branch = |collapsed: SparseState| -> Result<f64> {
            let weight = collapsed.norm_sqr();
            if weight <= EPS_ZERO * EPS_ZERO {
                return Ok(0.0);
            }
            let collapsed = collapsed.normalize()?;
            let at_end = evolve(&self.dynamics, &collapsed, t, self.horizon)?;
            Ok(weight * post_final.inner(&at_end)?.norm_sqr())
        };
        let found = branch(apply_projector(p, pre))?;
        let missed = branch(apply_complement(p, pre))?;
        let total = found + missed;
        if total <= EPS_ZERO * EPS_ZERO {
            return Err(Error::DegenerateBranches { t });
        }
        Ok(found / total)
    }

    /// Classifies every node of the topology at time `t`.
    pub fn scan_certain(&self, t: usize) -> Result<StepCertainty> {
        let mut certain = Vec::new();
        let mut impossible = Vec::new();
        for x in self.topology().nodes() {
            match self.abl_probability(t, &PositionProjector::new(x))?.classification {
                Certainty::Certain => certain.push(x),
                Certainty::Impossible => impossible.push(x),
                Certainty::Indeterminate => {}
            }
        }
        Ok(StepCertainty { t, certain, impossible })
    }

    /// Whether `Π_{x2} U(t1→t2) Π_{x1}` vanishes.
    pub fn check_exclusive(&self, t1: usize, x1: Position, t2: usize, x2: Position) -> Result<Exclusivity> {
        if t1 > t2 {
            return Err(Error::TimeOrder { t1, t2 });
        }
        self.check_t(t2)?;
        let topo = self.topology();
        for x in [x1, x2] {
            if !topo.contains(x) {
                return Err(Error::InvalidPosition(format!("{x:?}")));
            }
        }
        if t1 == t2 {
            return Ok(Exclusivity {
                exclusive: x1 != x2,
                basis: ExclusivityBasis::SameTime,
            });
        }
        let dt = (t2 - t1) as u64;
        if topo.distance(x1, x2).is_none_or(|d| d > dt) {
            return Ok(Exclusivity {
                exclusive: true,
                basis: ExclusivityBasis::LightCone,
            });
        }

        let n = self.n_coins();
        let (coins, basis): (Vec<CoinString>, _) = if n < usize::BITS as usize && (1usize << n) <= FULL_REGISTER_LIMIT {
            (
                (0..1u64 << n).map(|k| CoinString::from_index(k, n)).collect(),
                ExclusivityBasis::FullRegister,
            )
        } else {
            let set: BTreeSet<CoinString> = self.pre_path[t1]
                .coin_strings()
                .into_iter()
                .chain(self.post_path[t1].coin_strings())
                .collect();
            (set.into_iter().collect(), ExclusivityBasis::Support)
        };
        let target = PositionProjector::new(x2);
        let space = self.pre_path[0].space().clone();
        for c in coins {
            let ket = SparseState::basis(space.clone(), BasisLabel::new(x1, c))?;
            let moved = evolve(&self.dynamics, &ket, t1, t2)?;
            if apply_projector(&target, &moved).norm_sqr() > EPS_ZERO * EPS_ZERO {
                return Ok(Exclusivity {
                    exclusive: false,
                    basis,
                });
            }
        }
        Ok(Exclusivity { exclusive: true, basis })
    }

    pub fn scan_all(&self) -> Result<Vec<StepCertainty>> {
        (0..=self.horizon).map(|t| self.scan_certain(t)).collect()
    }

    /// Scans every time step and collects paradox witnesses: pairs of
    /// certain positions at one time, and pairs of certain events at
    /// different times that pass [`Self::check_exclusive`]. Triples are not
    /// searched.
    pub fn detect_paradox(&self) -> Result<PpsReport> {
        let steps = self.scan_all()?;
        let mut witnesses = Vec::new();
        for s in &steps {
            for (i, &first) in s.certain.iter().enumerate() {
                for &second in &s.certain[i + 1..] {
                    witnesses.push(Witness::SameTime { t: s.t, first, second });
                }
            }
        }
        let events: Vec<Event> = steps
            .iter()
            .flat_map(|s| s.certain.iter().map(move |&position| Event { t: s.t, position }))
            .collect();
        let mut scope = ExclusivityScope::Operator;
        for (i, &earlier) in events.iter().enumerate() {
            for &later in &events[i + 1..] {
                if later.t == earlier.t {
                    continue;
                }
                let ex = self.check_exclusive(earlier.t, earlier.position, later.t, later.position)?;
                if ex.exclusive {
                    if !ex.basis.is_operator_level() {
                        scope = ExclusivityScope::Support;
                    }
                    let velocity = self
                        .topology()
                        .distance(earlier.position, later.position)
                        .map(|d| d as f64 / (later.t - earlier.t) as f64);
                    witnesses.push(Witness::CrossTime {
                        earlier,
                        later,
                        basis: ex.basis,
                        velocity,
                    });
                }
            }
        }
        let trajectory_count = steps
            .iter()
            .fold(BigUint::one(), |acc, s| acc * BigUint::from(s.certain.len()));
        Ok(PpsReport {
            horizon: self.horizon,
            paradox_found: !witnesses.is_empty(),
            steps,
            witnesses,
            overlap: self.overlap_at(self.horizon),
            postselection_probability: self.postselection_probability(),
            exclusivity_scope: scope,
            trajectory_count,
        })
    }

    pub fn enumerate_trajectories(&self, cap: usize) -> Result<TrajectorySet> {
        let steps = self.scan_all()?;
        Ok(trajectories_from(self.topology(), &steps, cap))
    }

    /// True if every `positions[t]` is certain at time `t` and the sequence
    /// covers `0..=T`.
    pub fn is_counterfactual_trajectory(&self, positions: &[Position]) -> Result<bool> {
        if positions.len() != self.horizon + 1 {
            return Ok(false);
        }
        for (t, &x) in positions.iter().enumerate() {
            if !self.abl_probability(t, &PositionProjector::new(x))?.is_certain() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Leaves states that are already unit-norm untouched, bit for bit.
fn normalized(s: SparseState) -> Result<SparseState> {
    if (s.norm_sqr() - 1.0).abs() <= EPS_ZERO {
        Ok(s)
    } else {
        s.normalize()
    }
}

/// Counts and samples counterfactual trajectories through the given certain
/// sets.
pub fn trajectories_from(topology: &Topology, steps: &[StepCertainty], cap: usize) -> TrajectorySet {
    let sets: Vec<&[Position]> = steps.iter().map(|s| s.certain.as_slice()).collect();
    let empty = sets.is_empty() || sets.iter().any(|s| s.is_empty());
    if empty {
        return TrajectorySet {
            count: BigUint::zero(),
            leap_free_count: BigUint::zero(),
            any_leap: false,
            any_component_hop: false,
            sample: Vec::new(),
        };
    }
    let count = sets.iter().fold(BigUint::one(), |acc, s| acc * BigUint::from(s.len()));

    let mut any_leap = false;
    let mut any_component_hop = false;
    for w in sets.windows(2) {
        for &a in w[0] {
            for &b in w[1] {
                any_leap |= is_leap(topology, a, b);
                any_component_hop |= a.component != b.component;
            }
        }
    }

    // paths ending at each position of the current step using unit moves only
    let mut ways: Vec<BigUint> = vec![BigUint::one(); sets[0].len()];
    for w in sets.windows(2) {
        ways = w[1]
            .iter()
            .map(|&b| {
                w[0].iter()
                    .zip(&ways)
                    .filter(|(&a, _)| !is_leap(topology, a, b))
                    .fold(BigUint::zero(), |acc, (_, n)| acc + n)
            })
            .collect();
    }
    let leap_free_count = ways.into_iter().fold(BigUint::zero(), |acc, n| acc + n);

    let mut sample = Vec::new();
    let mut choice = vec![0usize; sets.len()];
    'outer: while sample.len() < cap {
        sample.push(Trajectory {
            positions: choice.iter().zip(&sets).map(|(&i, s)| s[i]).collect(),
        });
        for k in (0..sets.len()).rev() {
            choice[k] += 1;
            if choice[k] < sets[k].len() {
                continue 'outer;
            }
            choice[k] = 0;
        }
        break;
    }

    TrajectorySet {
        count,
        leap_free_count,
        any_leap,
        any_component_hop,
        sample,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::StepOperator;
    use crate::hilbert::Space;
    use approx::assert_abs_diff_eq;
    use std::sync::Arc;

    fn boxes(signs: [f64; 3]) -> SparseState {
        let sp = Space::new(Topology::sites(["A", "B", "C"]).unwrap(), 0);
        SparseState::from_entries(
            sp,
            (0..3).map(|i| {
                (
                    BasisLabel::new(Position::new(i), CoinString::zeros(0)),
                    Complex64::new(signs[i as usize], 0.0),
                )
            }),
        )
        .unwrap()
    }

    fn three_box() -> TwoStateSystem {
        let pre = boxes([1.0, 1.0, 1.0]);
        let topo = Arc::new(pre.topology().clone());
        TwoStateSystem::new(
            pre,
            boxes([1.0, 1.0, -1.0]),
            Dynamics::homogeneous(StepOperator::identity(topo), 1),
            1,
        )
        .unwrap()
    }

    #[test]
    fn classification_thresholds() {
        assert_eq!(
            AblVerdict::from_probability(1.0 - 1e-10).classification,
            Certainty::Certain
        );
        assert_eq!(
            AblVerdict::from_probability(1e-10).classification,
            Certainty::Impossible
        );
        assert_eq!(
            AblVerdict::from_probability(0.5).classification,
            Certainty::Indeterminate
        );
        assert_eq!(AblVerdict::from_probability(1.5).probability, 1.0);
    }

    #[test]
    fn three_box_abl() {
        let sys = three_box();
        for t in 0..=1 {
            for x in 0..2 {
                let v = sys
                    .abl_probability(t, &PositionProjector::new(Position::new(x)))
                    .unwrap();
                assert!(v.is_certain());
                assert_abs_diff_eq!(v.probability, 1.0, epsilon = 1e-12);
            }
        }
        // collapse oracle value, frozen: found branch 1/9, missed branch 4/9
        let c = PositionProjector::new(Position::new(2));
        assert_abs_diff_eq!(sys.collapse_oracle(0, &c).unwrap(), 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(sys.abl_probability(0, &c).unwrap().probability, 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(sys.postselection_probability(), 1.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn identical_pre_post_has_no_paradox() {
        let sp = Space::new(Topology::sites(["A", "B", "C"]).unwrap(), 0);
        let a = SparseState::basis(sp, BasisLabel::new(Position::new(0), CoinString::zeros(0))).unwrap();
        let topo = Arc::new(a.topology().clone());
        let sys = TwoStateSystem::new(a.clone(), a, Dynamics::homogeneous(StepOperator::identity(topo), 1), 1).unwrap();
        let pa = sys
            .abl_probability(0, &PositionProjector::new(Position::new(0)))
            .unwrap();
        let pb = sys
            .abl_probability(0, &PositionProjector::new(Position::new(1)))
            .unwrap();
        assert_eq!(pa.probability, 1.0);
        assert_eq!(pb.probability, 0.0);
        let report = sys.detect_paradox().unwrap();
        assert!(!report.paradox_found);
        assert_eq!(report.trajectory_count, BigUint::one());
    }

    #[test]
    fn orthogonal_system_is_rejected() {
        let pre = boxes([1.0, 1.0, 0.0]);
        let post = boxes([1.0, -1.0, 0.0]);
        let topo = Arc::new(pre.topology().clone());
        let r = TwoStateSystem::new(pre, post, Dynamics::homogeneous(StepOperator::identity(topo), 1), 1);
        assert!(matches!(r, Err(Error::OrthogonalTwoState { t: 0 })));
    }

    #[test]
    fn exclusivity_trivial_cases() {
        let sys = three_box();
        let a = Position::new(0);
        let b = Position::new(1);
        assert!(sys.check_exclusive(0, a, 0, b).unwrap().exclusive);
        assert!(!sys.check_exclusive(0, a, 0, a).unwrap().exclusive);
        assert!(matches!(sys.check_exclusive(1, a, 0, b), Err(Error::TimeOrder { .. })));
        // identity dynamics keeps the particle in its box
        assert!(sys.check_exclusive(0, a, 1, b).unwrap().exclusive);
        assert!(!sys.check_exclusive(0, a, 1, a).unwrap().exclusive);
    }

    #[test]
    fn time_out_of_range() {
        let sys = three_box();
        assert!(matches!(sys.pre_at(2), Err(Error::TimeOutOfRange { .. })));
        assert!(sys.post_at(1).is_ok());
    }

    #[test]
    fn trajectory_enumeration_order_and_counts() {
        let topo = Topology::cycle(5).unwrap();
        let p = Position::new;
        let steps = vec![
            StepCertainty {
                t: 0,
                certain: vec![p(1), p(3)],
                impossible: vec![],
            },
            StepCertainty {
                t: 1,
                certain: vec![p(2), p(5)],
                impossible: vec![],
            },
        ];
        let set = trajectories_from(&topo, &steps, 10);
        assert_eq!(set.count, BigUint::from(4u32));
        // 1->2, 1->5, 3->2 are unit moves; 3->5 is a leap
        assert_eq!(set.leap_free_count, BigUint::from(3u32));
        assert!(set.any_leap);
        let seqs: Vec<Vec<Position>> = set.sample.iter().map(|t| t.positions.clone()).collect();
        assert_eq!(
            seqs,
            vec![vec![p(1), p(2)], vec![p(1), p(5)], vec![p(3), p(2)], vec![p(3), p(5)]]
        );
        assert!(trajectories_from(&topo, &steps, 0).sample.is_empty());
        let mut gap = steps.clone();
        gap[1].certain.clear();
        let none = trajectories_from(&topo, &gap, 5);
        assert!(none.count.is_zero() && none.sample.is_empty());
    }
}
