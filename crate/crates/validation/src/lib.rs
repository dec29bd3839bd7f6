//! Reporting for the acceptance suite: each criterion records named
//! sub-checks and prints one PASS/FAIL line.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

#[derive(Debug, Default)]
pub struct Checks {
    items: Vec<(bool, String)>,
}

impl Checks {
    pub fn check(&mut self, ok: bool, what: impl Into<String>) -> bool {
        self.items.push((ok, what.into()));
        ok
    }

    /// True when at least one check ran and none failed.
    pub fn passed(&self) -> bool {
        !self.items.is_empty() && self.items.iter().all(|(ok, _)| *ok)
    }

    pub fn items(&self) -> &[(bool, String)] {
        &self.items
    }
}

pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub run: fn(&mut Checks),
}

/// Runs every criterion, printing its status line followed by its
/// sub-checks. Returns the ids of failed criteria.
pub fn run_all(criteria: &[Criterion], out: &mut impl std::io::Write) -> Vec<&'static str> {
    let mut failed = Vec::new();
    for c in criteria {
        let start = Instant::now();
        let mut checks = Checks::default();
        if let Err(e) = catch_unwind(AssertUnwindSafe(|| (c.run)(&mut checks))) {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            checks.check(false, format!("panicked: {msg}"));
        }
        let passed = checks.passed();
        let _ = writeln!(
            out,
            "{} {:<4} {} ({:.2} s)",
            if passed { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            start.elapsed().as_secs_f64()
        );
        for (ok, what) in checks.items() {
            let _ = writeln!(out, "       {} {what}", if *ok { "ok" } else { " x" });
        }
        if !passed {
            failed.push(c.id);
        }
    }
    failed
}

#[cfg(test)]
mod tests {
    use super::*;

    fn good(c: &mut Checks) {
        c.check(true, "fine");
    }

    fn empty(_: &mut Checks) {}

    fn boom(_: &mut Checks) {
        panic!("nope");
    }

    #[test]
    fn statuses() {
        let criteria = [
            Criterion {
                id: "A",
                title: "good",
                run: good,
            },
            Criterion {
                id: "B",
                title: "empty",
                run: empty,
            },
            Criterion {
                id: "C",
                title: "boom",
                run: boom,
            },
        ];
        let mut out = Vec::new();
        let failed = run_all(&criteria, &mut out);
        assert_eq!(failed, vec!["B", "C"]);
        let text = String::from_utf8(out).unwrap();
        assert!(text.lines().next().unwrap().starts_with("PASS A"));
        assert!(text.contains("panicked: nope"));
    }
}
