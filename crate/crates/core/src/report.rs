//! Check records produced by the verification routines.
//!
//! A [`Report`] is an ordered list of named checks. Failures carry a witness
//! string naming the offending objects, morphisms or sieves so that the case
//! can be replayed.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    /// Not evaluated, e.g. because an input exceeded its budget.
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

/// What a passing check certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scope {
    /// A decidable property of the given instance.
    Exact,
    /// A universally quantified property, verified on a bounded universe only.
    Bounded,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::Exact => "exact",
            Scope::Bounded => "bounded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub scope: Scope,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// Records `ok` under `name`; the witness closure only runs on failure.
    pub fn record<F>(&mut self, name: impl Into<String>, scope: Scope, ok: bool, witness: F) -> bool
    where
        F: FnOnce() -> String,
    {
        let (status, witness) = if ok { (Status::Pass, None) } else { (Status::Fail, Some(witness())) };
        self.checks.push(Check { name: name.into(), status, scope, witness });
        ok
    }

    /// Records a check whose outcome is an optional failure witness.
    pub fn record_witness(&mut self, name: impl Into<String>, scope: Scope, failure: Option<String>) -> bool {
        let ok = failure.is_none();
        self.checks.push(Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            scope,
            witness: failure,
        });
        ok
    }

    pub fn skip(&mut self, name: impl Into<String>, scope: Scope, reason: impl Into<String>) {
        self.checks.push(Check { name: name.into(), status: Status::Skipped, scope, witness: Some(reason.into()) });
    }

    /// Appends every check of `other`, prefixing names with `prefix/`.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            if !prefix.is_empty() {
                let mut name = String::from(prefix);
                name.push('/');
                name.push_str(&c.name);
                c.name = name;
            }
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> usize {
        self.count(Status::Pass)
    }

    pub fn failed(&self) -> usize {
        self.count(Status::Fail)
    }

    pub fn skipped(&self) -> usize {
        self.count(Status::Skipped)
    }

    fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    /// True when no check failed. Skipped checks do not count as failures.
    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}
