//! Walker Hilbert spaces: topologies, basis labels and sparse state vectors.
//!
//! A basis ket is `|x⟩ ⊗ |c_1 … c_n⟩`: a node of the topology together with a
//! coin bitstring. States store only nonzero amplitudes, keyed in
//! position-major, then lexicographic coin order, so every iteration over a
//! state is deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Null-state detection threshold on norms and overlaps.
pub const EPS_ZERO: f64 = 1e-12;
/// Amplitudes below this magnitude are dropped from sparse states.
pub const EPS_PRUNE: f64 = 1e-14;
/// Singular-value cutoff for Schmidt ranks.
pub const EPS_RANK: f64 = 1e-9;

/// One cycle of a disjoint-cycles topology.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleComponent {
    pub id: String,
    pub length: u32,
}

/// The graph the walker moves on.
///
/// Cycle nodes are numbered `1..=N`. `Sites` is a set of isolated, labelled
/// nodes with no edges (boxes); only identity dynamics is defined on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Topology {
    Line { x_min: i64, x_max: i64 },
    Cycle { length: u32 },
    DisjointCycles { cycles: Vec<CycleComponent> },
    Sites { labels: Vec<String> },
}

/// A node of a topology. `component` is zero except on disjoint cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub component: u32,
    pub index: i64,
}

impl Position {
    pub const fn new(index: i64) -> Self {
        Position { component: 0, index }
    }

    pub const fn on(component: u32, index: i64) -> Self {
        Position { component, index }
    }
}

impl Topology {
    pub fn line(x_min: i64, x_max: i64) -> Result<Self> {
        let t = Topology::Line { x_min, x_max };
        t.validate()?;
        Ok(t)
    }

    pub fn cycle(length: u32) -> Result<Self> {
        let t = Topology::Cycle { length };
        t.validate()?;
        Ok(t)
    }

    pub fn disjoint_cycles<S: Into<String>>(cycles: impl IntoIterator<Item = (S, u32)>) -> Result<Self> {
        let t = Topology::DisjointCycles {
            cycles: cycles
                .into_iter()
                .map(|(id, length)| CycleComponent { id: id.into(), length })
                .collect(),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn sites<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let t = Topology::Sites {
            labels: labels.into_iter().map(Into::into).collect(),
        };
        t.validate()?;
        Ok(t)
    }

    /// Checks the structural invariants. Deserialized topologies must pass
    /// through here before use.
    pub fn validate(&self) -> Result<()> {
        match self {
            Topology::Line { x_min, x_max } => {
                if x_min > x_max {
                    return Err(Error::Topology(format!("empty line range [{x_min}, {x_max}]")));
                }
            }
            Topology::Cycle { length } => {
                if *length < 3 {
                    return Err(Error::Topology(format!("cycle length {length} < 3")));
                }
            }
            Topology::DisjointCycles { cycles } => {
                if cycles.is_empty() {
                    return Err(Error::Topology("no cycles given".into()));
                }
                let mut seen = BTreeSet::new();
                for c in cycles {
                    if c.length < 3 {
                        return Err(Error::Topology(format!("cycle {} has length {} < 3", c.id, c.length)));
                    }
                    if !valid_label(&c.id) || !seen.insert(c.id.as_str()) {
                        return Err(Error::Topology(format!("bad or duplicate component id {:?}", c.id)));
                    }
                }
            }
            Topology::Sites { labels } => {
                if labels.is_empty() {
                    return Err(Error::Topology("no sites given".into()));
                }
                let mut seen = BTreeSet::new();
                for l in labels {
                    if !valid_label(l) || !seen.insert(l.as_str()) {
                        return Err(Error::Topology(format!("bad or duplicate site label {l:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, p: Position) -> bool {
        match self {
            Topology::Line { x_min, x_max } => p.component == 0 && (*x_min..=*x_max).contains(&p.index),
            Topology::Cycle { length } => p.component == 0 && (1..=*length as i64).contains(&p.index),
            Topology::DisjointCycles { cycles } => cycles
                .get(p.component as usize)
                .is_some_and(|c| (1..=c.length as i64).contains(&p.index)),
            Topology::Sites { labels } => p.component == 0 && (0..labels.len() as i64).contains(&p.index),
        }
    }

    /// All nodes in output order.
    pub fn nodes(&self) -> Vec<Position> {
        match self {
            Topology::Line { x_min, x_max } => (*x_min..=*x_max).map(Position::new).collect(),
            Topology::Cycle { length } => (1..=*length as i64).map(Position::new).collect(),
            Topology::DisjointCycles { cycles } => cycles
                .iter()
                .enumerate()
                .flat_map(|(k, c)| (1..=c.length as i64).map(move |i| Position::on(k as u32, i)))
                .collect(),
            Topology::Sites { labels } => (0..labels.len() as i64).map(Position::new).collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Topology::Line { x_min, x_max } => (x_max - x_min + 1) as usize,
            Topology::Cycle { length } => *length as usize,
            Topology::DisjointCycles { cycles } => cycles.iter().map(|c| c.length as usize).sum(),
            Topology::Sites { labels } => labels.len(),
        }
    }

    /// Moves `p` by `delta` along the graph. Cycles wrap; a line errors when
    /// the target leaves the declared range.
    pub fn shift(&self, p: Position, delta: i64) -> Result<Position> {
        match self {
            Topology::Line { x_min, x_max } => {
                let x = p.index + delta;
                if x < *x_min || x > *x_max {
                    return Err(Error::ShiftOutOfRange { from: self.format(p) });
                }
                Ok(Position::new(x))
            }
            Topology::Cycle { length } => Ok(Position::new(wrap(p.index + delta, *length))),
            Topology::DisjointCycles { cycles } => {
                let len = cycles[p.component as usize].length;
                Ok(Position::on(p.component, wrap(p.index + delta, len)))
            }
            Topology::Sites { .. } => Err(Error::UnsupportedStep("shift on isolated sites".into())),
        }
    }

    /// Graph distance; `None` when the nodes lie in different components.
    pub fn distance(&self, a: Position, b: Position) -> Option<u64> {
        if a.component != b.component {
            return None;
        }
        let d = a.index.abs_diff(b.index);
        match self {
            Topology::Line { .. } => Some(d),
            Topology::Cycle { length } => Some(d.min(*length as u64 - d)),
            Topology::DisjointCycles { cycles } => {
                let n = cycles[a.component as usize].length as u64;
                Some(d.min(n - d))
            }
            Topology::Sites { .. } => (d == 0).then_some(0),
        }
    }

    /// Paper-style node name: `-4`, `7`, `1_A`, `B`.
    pub fn format(&self, p: Position) -> String {
        match self {
            Topology::Line { .. } | Topology::Cycle { .. } => p.index.to_string(),
            Topology::DisjointCycles { cycles } => match cycles.get(p.component as usize) {
                Some(c) => format!("{}_{}", p.index, c.id),
                None => format!("{}_?{}", p.index, p.component),
            },
            Topology::Sites { labels } => labels
                .get(p.index as usize)
                .cloned()
                .unwrap_or_else(|| format!("?{}", p.index)),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Position> {
        let s = s.trim();
        let bad = || Error::ParsePosition(s.to_string());
        let p = match self {
            Topology::Line { .. } | Topology::Cycle { .. } => Position::new(s.parse().map_err(|_| bad())?),
            Topology::DisjointCycles { cycles } => {
                let (idx, id) = s.split_once('_').ok_or_else(bad)?;
                let k = cycles.iter().position(|c| c.id == id).ok_or_else(bad)?;
                Position::on(k as u32, idx.parse().map_err(|_| bad())?)
            }
            Topology::Sites { labels } => Position::new(labels.iter().position(|l| l == s).ok_or_else(bad)? as i64),
        };
        if !self.contains(p) {
            return Err(Error::InvalidPosition(s.to_string()));
        }
        Ok(p)
    }
}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && !s.contains('_') && !s.chars().any(char::is_whitespace)
}

fn wrap(index: i64, length: u32) -> i64 {
    (index - 1).rem_euclid(length as i64) + 1
}

/// Coin register contents, one bit per coin.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoinString(Vec<bool>);

impl CoinString {
    pub fn new(bits: Vec<bool>) -> Self {
        CoinString(bits)
    }

    pub fn zeros(n: usize) -> Self {
        CoinString(vec![false; n])
    }

    /// Bits of `value`, least significant bit in slot 0.
    pub fn from_index(value: u64, n: usize) -> Self {
        CoinString((0..n).map(|i| value >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn with_bit(&self, i: usize, value: bool) -> Self {
        let mut bits = self.0.clone();
        bits[i] = value;
        CoinString(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

impl fmt::Display for CoinString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for CoinString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::ParseCoins(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(CoinString)
    }
}

/// A computational basis ket.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel {
    pub position: Position,
    pub coins: CoinString,
}

impl BasisLabel {
    pub fn new(position: Position, coins: CoinString) -> Self {
        BasisLabel { position, coins }
    }
}

/// Topology plus declared coin count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    pub topology: Topology,
    pub n_coins: usize,
}

impl Space {
    pub fn new(topology: Topology, n_coins: usize) -> Arc<Self> {
        Arc::new(Space { topology, n_coins })
    }

    pub fn check_label(&self, label: &BasisLabel) -> Result<()> {
        if label.coins.len() != self.n_coins {
            return Err(Error::CoinLength {
                expected: self.n_coins,
                found: label.coins.len(),
            });
        }
        if !self.topology.contains(label.position) {
            return Err(Error::InvalidPosition(format!("{:?}", label.position)));
        }
        Ok(())
    }

    pub fn format_label(&self, label: &BasisLabel) -> String {
        format!("|{}⟩|{}⟩", self.topology.format(label.position), label.coins)
    }
}

fn same_space(a: &Arc<Space>, b: &Arc<Space>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Position measurement projector `|x⟩⟨x| ⊗ I` on the full coin register.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PositionProjector {
    pub position: Position,
}

impl PositionProjector {
    pub fn new(position: Position) -> Self {
        PositionProjector { position }
    }
}

/// Pure state with sparse amplitude storage.
#[derive(Clone, Debug)]
pub struct SparseState {
    space: Arc<Space>,
    amplitudes: BTreeMap<BasisLabel, Complex64>,
}

impl SparseState {
    pub fn zero(space: Arc<Space>) -> Self {
        SparseState {
            space,
            amplitudes: BTreeMap::new(),
        }
    }

    pub fn basis(space: Arc<Space>, label: BasisLabel) -> Result<Self> {
        Self::from_entries(space, [(label, Complex64::new(1.0, 0.0))])
    }

    /// Builds a state from (label, amplitude) pairs. Repeated labels add up.
    pub fn from_entries(space: Arc<Space>, entries: impl IntoIterator<Item = (BasisLabel, Complex64)>) -> Result<Self> {
        let mut amplitudes = BTreeMap::new();
        for (label, amp) in entries {
            space.check_label(&label)?;
            *amplitudes.entry(label).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        amplitudes.retain(|_, a: &mut Complex64| a.norm() >= EPS_PRUNE);
        Ok(SparseState { space, amplitudes })
    }

    /// Internal constructor for maps already known to be valid.
    pub(crate) fn from_map(space: Arc<Space>, mut amplitudes: BTreeMap<BasisLabel, Complex64>) -> Self {
        amplitudes.retain(|_, a| a.norm() >= EPS_PRUNE);
        SparseState { space, amplitudes }
    }

    /// Random normalized state with `support` distinct kets drawn from the
    /// given nodes and uniformly random coin strings.
    pub fn random<R: Rng + ?Sized>(space: Arc<Space>, nodes: &[Position], support: usize, rng: &mut R) -> Self {
        let n_coins = space.n_coins;
        let coin_dim = 1u64.checked_shl(n_coins as u32).unwrap_or(u64::MAX);
        let total = (nodes.len() as u64).saturating_mul(coin_dim);
        let support = (support as u64).min(total).max(1) as usize;
        let mut labels = BTreeSet::new();
        if total <= 1 << 16 {
            for k in sample(rng, total as usize, support) {
                let k = k as u64;
                labels.insert(BasisLabel::new(
                    nodes[(k / coin_dim) as usize],
                    CoinString::from_index(k % coin_dim, n_coins),
                ));
            }
        } else {
            while labels.len() < support {
                let node = nodes[rng.random_range(0..nodes.len())];
                let coins = CoinString::new((0..n_coins).map(|_| rng.random()).collect());
                labels.insert(BasisLabel::new(node, coins));
            }
        }
        let amplitudes = labels
            .into_iter()
            .map(|l| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                (l, Complex64::new(re, im))
            })
            .collect();
        SparseState::from_map(space, amplitudes)
            .normalize()
            .expect("gaussian amplitudes are nonzero with probability one")
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn topology(&self) -> &Topology {
        &self.space.topology
    }

    pub fn n_coins(&self) -> usize {
        self.space.n_coins
    }

    pub fn amplitude(&self, label: &BasisLabel) -> Complex64 {
        self.amplitudes.get(label).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisLabel, &Complex64)> {
        self.amplitudes.iter()
    }

    /// Number of stored kets.
    pub fn support_size(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn positions(&self) -> BTreeSet<Position> {
        self.amplitudes.keys().map(|l| l.position).collect()
    }

    pub fn coin_strings(&self) -> BTreeSet<CoinString> {
        self.amplitudes.keys().map(|l| l.coins.clone()).collect()
    }

    pub fn scale(&self, factor: Complex64) -> SparseState {
        SparseState::from_map(
            self.space.clone(),
            self.amplitudes.iter().map(|(l, a)| (l.clone(), a * factor)).collect(),
        )
    }

    /// `self + factor·other`.
    pub fn add_scaled(&self, factor: Complex64, other: &SparseState) -> Result<SparseState> {
        self.check_space(other)?;
        let mut map = self.amplitudes.clone();
        for (l, a) in &other.amplitudes {
            *map.entry(l.clone()).or_default() += factor * a;
        }
        Ok(SparseState::from_map(self.space.clone(), map))
    }

    pub fn check_space(&self, other: &SparseState) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!(
                "{:?} with {} coins vs {:?} with {} coins",
                self.space.topology, self.space.n_coins, other.space.topology, other.space.n_coins
            )))
        }
    }

    /// ⟨self|other⟩, antilinear in `self`.
    pub fn inner(&self, other: &SparseState) -> Result<Complex64> {
        inner_product(self, other)
    }

    pub fn normalize(&self) -> Result<SparseState> {
        normalize(self)
    }

    pub fn project(&self, p: &PositionProjector) -> SparseState {
        apply_projector(p, self)
    }

    /// Largest per-amplitude difference over the union of supports.
    pub fn max_abs_diff(&self, other: &SparseState) -> Result<f64> {
        self.check_space(other)?;
        let keys: BTreeSet<&BasisLabel> = self.amplitudes.keys().chain(other.amplitudes.keys()).collect();
        Ok(keys
            .into_iter()
            .map(|k| (self.amplitude(k) - other.amplitude(k)).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &SparseState, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d < tol)
    }

    pub fn schmidt_rank(&self) -> usize {
        schmidt_rank(self)
    }

    /// Human-readable ket listing, one term per line.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for (l, a) in &self.amplitudes {
            out.push_str(&format!("{:+.6}{:+.6}i {}\n", a.re, a.im, self.space.format_label(l)));
        }
        out
    }
}

/// Bit-for-bit equality of spaces and stored amplitudes.
impl PartialEq for SparseState {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.amplitudes == other.amplitudes
    }
}

pub fn inner_product(a: &SparseState, b: &SparseState) -> Result<Complex64> {
    a.check_space(b)?;
    let (small, large, conj_small) = if a.amplitudes.len() <= b.amplitudes.len() {
        (a, b, true)
    } else {
        (b, a, false)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for (label, x) in &small.amplitudes {
        if let Some(y) = large.amplitudes.get(label) {
            acc += if conj_small { x.conj() * y } else { y.conj() * x };
        }
    }
    Ok(acc)
}

/// Keeps exactly the kets at the projector's position. No renormalization.
pub fn apply_projector(p: &PositionProjector, s: &SparseState) -> SparseState {
    SparseState {
        space: s.space.clone(),
        amplitudes: s
            .amplitudes
            .iter()
            .filter(|(l, _)| l.position == p.position)
            .map(|(l, a)| (l.clone(), *a))
            .collect(),
    }
}

/// Applies `I − Π`.
pub fn apply_complement(p: &PositionProjector, s: &SparseState) -> SparseState {
    SparseState {
        space: s.space.clone(),
        amplitudes: s
            .amplitudes
            .iter()
            .filter(|(l, _)| l.position != p.position)
            .map(|(l, a)| (l.clone(), *a))
            .collect(),
    }
}

pub fn normalize(s: &SparseState) -> Result<SparseState> {
    let norm = s.norm();
    if norm <= EPS_ZERO {
        return Err(Error::NullState);
    }
    Ok(SparseState::from_map(
        s.space.clone(),
        s.amplitudes.iter().map(|(l, a)| (l.clone(), a / norm)).collect(),
    ))
}

/// Rank of the position × coin-register coefficient matrix.
pub fn schmidt_rank(s: &SparseState) -> usize {
    if s.is_zero() {
        return 0;
    }
    let rows: Vec<Position> = s.positions().into_iter().collect();
    let cols: Vec<CoinString> = s.coin_strings().into_iter().collect();
    let row_of: BTreeMap<Position, usize> = rows.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let col_of: BTreeMap<&CoinString, usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut m = DMatrix::<Complex64>::zeros(rows.len(), cols.len());
    for (l, a) in &s.amplitudes {
        m[(row_of[&l.position], col_of[&l.coins])] = *a;
    }
    m.singular_values().iter().filter(|&&v| v > EPS_RANK).count()
}
