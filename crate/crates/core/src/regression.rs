//! Checks a scenario bundle against its expectation table.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::hilbert::{Position, PositionProjector, Topology};
use crate::pps::{TwoStateSystem, EPS_CLASS};
use crate::scenarios::{Provenance, ScenarioBundle, SetRelation};

/// ABL probability and collapse oracle must agree this closely.
pub const ORACLE_TOL: f64 = 1e-10;
/// Tolerance on post-selection probabilities and overlaps.
pub const VALUE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub scenario: String,
    pub check: String,
    pub provenance: Provenance,
    pub passed: bool,
    pub detail: String,
}

fn fmt_set(topo: &Topology, ps: impl IntoIterator<Item = Position>) -> String {
    let names: Vec<String> = ps.into_iter().map(|p| topo.format(p)).collect();
    format!("{{{}}}", names.join(", "))
}

fn oracle_certain(sys: &TwoStateSystem, t: usize) -> Result<Vec<Position>> {
    let mut out = Vec::new();
    for x in sys.topology().nodes() {
        if sys.collapse_oracle(t, &PositionProjector::new(x))? > 1.0 - EPS_CLASS {
            out.push(x);
        }
    }
    Ok(out)
}

fn relation_holds(relation: SetRelation, expected: &[Position], actual: &[Position]) -> bool {
    let e: BTreeSet<_> = expected.iter().collect();
    let a: BTreeSet<_> = actual.iter().collect();
    match relation {
        SetRelation::Exactly => e == a,
        SetRelation::Contains => e.is_subset(&a),
    }
}

pub fn verify_bundle(bundle: &ScenarioBundle) -> Result<Vec<CheckOutcome>> {
    let sys = &bundle.system;
    let topo = sys.topology();
    let horizon = sys.horizon();
    let mut out = Vec::new();
    let mut push = |check: String, provenance, passed, detail: String| {
        out.push(CheckOutcome {
            scenario: bundle.name.clone(),
            check,
            provenance,
            passed,
            detail,
        })
    };

    let scans = sys.scan_all()?;
    let oracle: Vec<Vec<Position>> = (0..=horizon).map(|t| oracle_certain(sys, t)).collect::<Result<_>>()?;

    for exp in &bundle.expected.certain {
        let rel = match exp.relation {
            SetRelation::Exactly => "=",
            SetRelation::Contains => "⊇",
        };
        for t in (0..=horizon).filter(|&t| exp.times.matches(t)) {
            let scanned = &scans[t].certain;
            let passed = relation_holds(exp.relation, &exp.positions, scanned)
                && relation_holds(exp.relation, &exp.positions, &oracle[t]);
            push(
                format!("certain t={t} {rel} {}", fmt_set(topo, exp.positions.iter().copied())),
                exp.provenance,
                passed,
                format!(
                    "scan {} oracle {}",
                    fmt_set(topo, scanned.iter().copied()),
                    fmt_set(topo, oracle[t].iter().copied())
                ),
            );
        }
    }

    for t in 0..=horizon {
        let mut worst: f64 = 0.0;
        for x in topo.nodes() {
            let p = PositionProjector::new(x);
            let abl = sys.abl_probability(t, &p)?.probability;
            worst = worst.max((abl - sys.collapse_oracle(t, &p)?).abs());
        }
        push(
            format!("oracle agreement t={t}"),
            Provenance::Derived,
            worst < ORACLE_TOL,
            format!("max |abl - oracle| = {worst:.3e}"),
        );
    }

    for exp in &bundle.expected.probabilities {
        let p = PositionProjector::new(exp.position);
        let abl = sys.abl_probability(exp.t, &p)?.probability;
        let oracle = sys.collapse_oracle(exp.t, &p)?;
        push(
            format!("P({}) t={} = {}", topo.format(exp.position), exp.t, exp.value),
            exp.provenance,
            (abl - exp.value).abs() < ORACLE_TOL && (oracle - exp.value).abs() < ORACLE_TOL,
            format!("abl {abl} oracle {oracle}"),
        );
    }

    if let Some(exp) = bundle.expected.postselection {
        let got = sys.postselection_probability();
        push(
            format!("postselection = {}", exp.value),
            exp.provenance,
            (got - exp.value).abs() < VALUE_TOL,
            format!("computed {got}"),
        );
    }

    let first = sys.overlap(0)?;
    let drift = (0..=horizon)
        .map(|t| sys.overlap(t).map(|o| (o - first).norm()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    push(
        "overlap time-invariant".into(),
        Provenance::Derived,
        drift < ORACLE_TOL,
        format!("max drift {drift:.3e}"),
    );

    if let Some(exp) = bundle.expected.overlap {
        let got = sys.overlap(horizon)?;
        push(
            format!("overlap = {}", exp.value),
            exp.provenance,
            (got - exp.value).norm() < VALUE_TOL,
            format!("computed {got}"),
        );
    }

    if let Some(exp) = bundle.expected.trajectory_count {
        let got = crate::pps::trajectories_from(topo, &scans, 0).count;
        push(
            format!("trajectories = {}", exp.value),
            exp.provenance,
            got == exp.value.into(),
            format!("computed {got}"),
        );
    }

    Ok(out)
}
