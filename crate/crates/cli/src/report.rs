//! Versioned JSON documents written by the CLI.

use serde::Serialize;

use qwpps_core::hilbert::{Position, PositionProjector, Topology};
use qwpps_core::pps::{Event, ExclusivityScope, PpsReport, TwoStateSystem, Witness};
use qwpps_core::regression::CheckOutcome;
use qwpps_core::Result;

pub const SCHEMA_VERSION: u32 = 1;
pub const PPS_SCHEMA: &str = "qwpps/pps-report";
pub const VERIFY_SCHEMA: &str = "qwpps/verify-report";
pub const DISTRIBUTION_SCHEMA: &str = "qwpps/distribution";

#[derive(Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

#[derive(Serialize)]
pub struct PositionProbability {
    pub position: String,
    pub probability: f64,
}

#[derive(Serialize)]
pub struct StepJson {
    pub t: usize,
    pub certain: Vec<String>,
    pub impossible: Vec<String>,
    pub probabilities: Vec<PositionProbability>,
}

#[derive(Serialize)]
pub struct EventJson {
    pub t: usize,
    pub position: String,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessJson {
    SameTime {
        t: usize,
        first: String,
        second: String,
    },
    CrossTime {
        earlier: EventJson,
        later: EventJson,
        basis: &'static str,
        velocity: Option<f64>,
    },
}

#[derive(Serialize)]
pub struct PpsReportJson {
    pub schema: &'static str,
    pub schema_version: u32,
    pub scenario: String,
    pub topology: Topology,
    pub coin_count: usize,
    pub horizon: usize,
    pub overlap: Complex,
    pub postselection_probability: f64,
    pub paradox_found: bool,
    pub exclusivity_scope: &'static str,
    /// Decimal string; the count can exceed 64 bits.
    pub trajectory_count: String,
    pub steps: Vec<StepJson>,
    pub witnesses: Vec<WitnessJson>,
}

fn names(topo: &Topology, ps: &[Position]) -> Vec<String> {
    ps.iter().map(|p| topo.format(*p)).collect()
}

fn event(topo: &Topology, e: Event) -> EventJson {
    EventJson {
        t: e.t,
        position: topo.format(e.position),
    }
}

impl PpsReportJson {
    pub fn new(scenario: &str, sys: &TwoStateSystem, report: &PpsReport) -> Result<Self> {
        let topo = sys.topology();
        let mut steps = Vec::with_capacity(report.steps.len());
        for s in &report.steps {
            let probabilities = topo
                .nodes()
                .into_iter()
                .map(|x| {
                    sys.abl_probability(s.t, &PositionProjector::new(x))
                        .map(|v| PositionProbability {
                            position: topo.format(x),
                            probability: v.probability,
                        })
                })
                .collect::<Result<_>>()?;
            steps.push(StepJson {
                t: s.t,
                certain: names(topo, &s.certain),
                impossible: names(topo, &s.impossible),
                probabilities,
            });
        }
        let witnesses = report
            .witnesses
            .iter()
            .map(|w| match *w {
                Witness::SameTime { t, first, second } => WitnessJson::SameTime {
                    t,
                    first: topo.format(first),
                    second: topo.format(second),
                },
                Witness::CrossTime {
                    earlier,
                    later,
                    basis,
                    velocity,
                } => WitnessJson::CrossTime {
                    earlier: event(topo, earlier),
                    later: event(topo, later),
                    basis: basis.as_str(),
                    velocity,
                },
            })
            .collect();
        Ok(PpsReportJson {
            schema: PPS_SCHEMA,
            schema_version: SCHEMA_VERSION,
            scenario: scenario.to_string(),
            topology: topo.clone(),
            coin_count: sys.n_coins(),
            horizon: report.horizon,
            overlap: Complex {
                re: report.overlap.re,
                im: report.overlap.im,
            },
            postselection_probability: report.postselection_probability,
            paradox_found: report.paradox_found,
            exclusivity_scope: match report.exclusivity_scope {
                ExclusivityScope::Operator => "operator",
                ExclusivityScope::Support => "support",
            },
            trajectory_count: report.trajectory_count.to_string(),
            steps,
            witnesses,
        })
    }
}

#[derive(Serialize)]
pub struct CheckJson {
    pub scenario: String,
    pub check: String,
    pub provenance: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct VerifyReportJson {
    pub schema: &'static str,
    pub schema_version: u32,
    pub passed: bool,
    pub total: usize,
    pub failed: usize,
    pub checks: Vec<CheckJson>,
}

impl VerifyReportJson {
    pub fn new(outcomes: &[CheckOutcome]) -> Self {
        let failed = outcomes.iter().filter(|o| !o.passed).count();
        VerifyReportJson {
            schema: VERIFY_SCHEMA,
            schema_version: SCHEMA_VERSION,
            passed: failed == 0,
            total: outcomes.len(),
            failed,
            checks: outcomes
                .iter()
                .map(|o| CheckJson {
                    scenario: o.scenario.clone(),
                    check: o.check.clone(),
                    provenance: o.provenance.as_str(),
                    passed: o.passed,
                    detail: o.detail.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct SitePoint {
    pub x: i64,
    pub p: f64,
}

#[derive(Serialize)]
pub struct Snapshot {
    pub t: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub distribution: Vec<SitePoint>,
}

#[derive(Serialize)]
pub struct DistributionJson {
    pub schema: &'static str,
    pub schema_version: u32,
    pub walk: &'static str,
    pub coin_init: Option<&'static str>,
    pub steps: usize,
    pub snapshots: Vec<Snapshot>,
}
