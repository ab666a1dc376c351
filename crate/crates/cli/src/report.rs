//! Command reports: a canonical part that is byte-identical across runs and
//! a timing part that is written separately.

use std::fmt::Write as _;
use std::time::Duration;

use idemcore::report::{Check, Report, Status};
use serde_json::{json, Map, Value};

/// Process exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
/// Bad command line, in the sysexits convention.
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Default)]
pub struct CommandReport {
    pub command: String,
    /// Echo of the effective configuration, keys sorted.
    pub config: Map<String, Value>,
    pub checks: Vec<Check>,
    /// Command-specific results.
    pub data: Map<String, Value>,
    /// Set when the command stopped at a resource limit.
    pub budget_exceeded: Option<String>,
    /// Wall-clock time per phase; never part of the canonical output.
    pub timings: Vec<(String, Duration)>,
}

impl CommandReport {
    pub fn new(command: &str) -> Self {
        CommandReport { command: command.to_string(), ..Default::default() }
    }

    pub fn config(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.config.insert(key.to_string(), value.into());
        self
    }

    pub fn data(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.data.insert(key.to_string(), value.into());
        self
    }

    /// Appends a core report, prefixing check names.
    pub fn absorb(&mut self, prefix: &str, report: Report) {
        let mut r = Report::new();
        r.absorb(prefix, report);
        self.checks.extend(r.checks);
    }

    pub fn absorb_timed(&mut self, prefix: &str, report: Report, elapsed: Duration) {
        self.absorb(prefix, report);
        self.timings.push((prefix.to_string(), elapsed));
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Fail) > 0 {
            EXIT_FAIL
        } else if self.budget_exceeded.is_some() {
            EXIT_BUDGET
        } else {
            EXIT_PASS
        }
    }

    pub fn canonical_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("name".into(), c.name.clone().into());
                m.insert("status".into(), c.status.to_string().into());
                m.insert("scope".into(), c.scope.to_string().into());
                if let Some(w) = &c.witness {
                    m.insert("witness".into(), w.clone().into());
                }
                Value::Object(m)
            })
            .collect();
        let mut out = json!({
            "command": self.command,
            "config": Value::Object(self.config.clone()),
            "checks": checks,
            "summary": {
                "total": self.checks.len(),
                "pass": self.count(Status::Pass),
                "fail": self.count(Status::Fail),
                "skip": self.count(Status::Skipped),
                "exit_code": self.exit_code(),
            },
            "data": Value::Object(self.data.clone()),
            "version": env!("CARGO_PKG_VERSION"),
        });
        if let Some(b) = &self.budget_exceeded {
            out["budget_exceeded"] = b.clone().into();
        }
        out
    }

    /// Pretty JSON with a trailing newline.
    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.canonical_json()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "idemcore {}", self.command);
        for (k, v) in &self.config {
            let _ = write!(s, " {k}={}", plain(v));
        }
        s.push('\n');
        for c in &self.checks {
            let _ = match &c.witness {
                Some(w) => writeln!(s, "{} [{}] {}: {}", c.status, c.scope, c.name, w),
                None => writeln!(s, "{} [{}] {}", c.status, c.scope, c.name),
            };
        }
        if let Some(b) = &self.budget_exceeded {
            let _ = writeln!(s, "ABORT {b}");
        }
        let _ = writeln!(
            s,
            "summary: {} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        );
        s
    }

    pub fn render_timings(&self) -> String {
        let phases: Map<String, Value> =
            self.timings.iter().map(|(k, d)| (k.clone(), Value::from(d.as_secs_f64() * 1000.0))).collect();
        let total: f64 = self.timings.iter().map(|(_, d)| d.as_secs_f64() * 1000.0).sum();
        let mut s = serde_json::to_string_pretty(&json!({ "phases_ms": phases, "total_ms": total })).expect("json");
        s.push('\n');
        s
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use idemcore::report::Scope;

    #[test]
    fn exit_codes() {
        let mut r = CommandReport::new("x");
        assert_eq!(r.exit_code(), EXIT_PASS);
        r.budget_exceeded = Some("limit".into());
        assert_eq!(r.exit_code(), EXIT_BUDGET);
        let mut failing = Report::new();
        failing.record_witness("c", Scope::Exact, Some("w".into()));
        r.absorb("", failing);
        assert_eq!(r.exit_code(), EXIT_FAIL);
    }

    #[test]
    fn timings_stay_out_of_canonical_output() {
        let mut a = CommandReport::new("x");
        a.config("bound", 2);
        let mut b = a.clone();
        a.absorb_timed("p", Report::new(), Duration::from_millis(5));
        b.absorb_timed("p", Report::new(), Duration::from_millis(9));
        assert_eq!(a.render_json(), b.render_json());
        assert_ne!(a.render_timings(), b.render_timings());
    }

    #[test]
    fn config_keys_sorted() {
        let mut r = CommandReport::new("x");
        r.config("zeta", 1).config("alpha", 2);
        assert!(r.render_text().starts_with("idemcore x alpha=2 zeta=1"));
    }
}
