//! JSON scenario documents.
//!
//! ```json
//! {
//!   "name": "custom",
//!   "topology": {"kind": "cycle", "length": 3},
//!   "coin_count": 1,
//!   "dynamics": [{"kind": "dtqw", "coin": [[[0.7071, 0], [0.7071, 0]], [[0.7071, 0], [-0.7071, 0]]]}],
//!   "pre":  [["1", "0", 1.0, 0.0]],
//!   "post": [["1", "0", 1.0, 0.0]],
//!   "horizon": 1
//! }
//! ```
//!
//! Amplitude entries are `[position, coin bits, re, im]`. Positions use the
//! display notation of the topology (`-4`, `7`, `1_A`, `B`).

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{coin_is_unitary, CoinOperator, Dynamics, StepMode, StepOperator};
use crate::error::{Error, Result};
use crate::hilbert::{BasisLabel, CoinString, Space, SparseState, Topology};
use crate::pps::TwoStateSystem;
use crate::scenarios::ScenarioBundle;

/// `[[m00, m01], [m10, m11]]`, each entry `[re, im]`.
pub type CoinMatrix = [[[f64; 2]; 2]; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StepDescriptor {
    Identity,
    Shift { coin_index: usize },
    Dtqw { coin: CoinMatrix },
    McqwStep { coin_index: usize, coin: CoinMatrix },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeEntry(pub String, pub String, pub f64, pub f64);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub topology: Topology,
    pub coin_count: usize,
    pub dynamics: Vec<StepDescriptor>,
    pub pre: Vec<AmplitudeEntry>,
    pub post: Vec<AmplitudeEntry>,
    pub horizon: usize,
}

fn coin_to_matrix(c: &CoinOperator) -> CoinMatrix {
    let m = c.matrix();
    [
        [[m[0][0].re, m[0][0].im], [m[0][1].re, m[0][1].im]],
        [[m[1][0].re, m[1][0].im], [m[1][1].re, m[1][1].im]],
    ]
}

fn matrix_to_coin(m: &CoinMatrix) -> Result<CoinOperator> {
    let c = |e: [f64; 2]| Complex64::new(e[0], e[1]);
    let coin = CoinOperator::new([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]]);
    if !coin_is_unitary(&coin) {
        return Err(Error::ScenarioFile(format!("coin {m:?} is not unitary")));
    }
    Ok(coin)
}

impl StepDescriptor {
    pub fn from_operator(op: &StepOperator) -> Self {
        match op.mode() {
            StepMode::Identity => StepDescriptor::Identity,
            StepMode::Shift { coin_index } => StepDescriptor::Shift {
                coin_index: *coin_index,
            },
            StepMode::Dtqw { coin } => StepDescriptor::Dtqw {
                coin: coin_to_matrix(coin),
            },
            StepMode::McqwStep { coin_index, coin } => StepDescriptor::McqwStep {
                coin_index: *coin_index,
                coin: coin_to_matrix(coin),
            },
        }
    }

    pub fn to_operator(&self, topology: Arc<Topology>) -> Result<StepOperator> {
        let mode = match self {
            StepDescriptor::Identity => StepMode::Identity,
            StepDescriptor::Shift { coin_index } => StepMode::Shift {
                coin_index: *coin_index,
            },
            StepDescriptor::Dtqw { coin } => StepMode::Dtqw {
                coin: matrix_to_coin(coin)?,
            },
            StepDescriptor::McqwStep { coin_index, coin } => StepMode::McqwStep {
                coin_index: *coin_index,
                coin: matrix_to_coin(coin)?,
            },
        };
        Ok(StepOperator::new(topology, mode))
    }
}

fn entries(s: &SparseState) -> Vec<AmplitudeEntry> {
    s.iter()
        .map(|(l, a)| AmplitudeEntry(s.topology().format(l.position), l.coins.to_string(), a.re, a.im))
        .collect()
}

fn parse_state(space: &Arc<Space>, list: &[AmplitudeEntry]) -> Result<SparseState> {
    let terms = list
        .iter()
        .map(|AmplitudeEntry(pos, bits, re, im)| {
            let position = space.topology.parse(pos)?;
            let coins: CoinString = bits.parse()?;
            Ok((BasisLabel::new(position, coins), Complex64::new(*re, *im)))
        })
        .collect::<Result<Vec<_>>>()?;
    SparseState::from_entries(space.clone(), terms)
}

impl ScenarioFile {
    pub fn from_system(name: &str, sys: &TwoStateSystem) -> Self {
        let pre = sys.pre_at(0).expect("t = 0 is valid");
        let post = sys.post_at(sys.horizon()).expect("t = T is valid");
        ScenarioFile {
            name: name.to_string(),
            topology: sys.topology().clone(),
            coin_count: sys.n_coins(),
            dynamics: sys.dynamics().steps()[..sys.horizon()]
                .iter()
                .map(StepDescriptor::from_operator)
                .collect(),
            pre: entries(pre),
            post: entries(post),
            horizon: sys.horizon(),
        }
    }

    pub fn from_bundle(bundle: &ScenarioBundle) -> Self {
        Self::from_system(&bundle.name, &bundle.system)
    }

    pub fn to_system(&self) -> Result<TwoStateSystem> {
        self.topology.validate()?;
        if self.dynamics.len() < self.horizon {
            return Err(Error::ScenarioFile(format!(
                "{} step descriptors for horizon {}",
                self.dynamics.len(),
                self.horizon
            )));
        }
        let topology = Arc::new(self.topology.clone());
        let space = Space::new(self.topology.clone(), self.coin_count);
        let steps = self
            .dynamics
            .iter()
            .map(|d| d.to_operator(topology.clone()))
            .collect::<Result<Vec<_>>>()?;
        if let Some(op) = steps.iter().find(|op| op.required_coins() > self.coin_count) {
            return Err(Error::CoinIndex {
                index: op.required_coins() - 1,
                n_coins: self.coin_count,
            });
        }
        let pre = parse_state(&space, &self.pre)?;
        let post = parse_state(&space, &self.post)?;
        TwoStateSystem::new(pre, post, Dynamics::new(steps), self.horizon)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
