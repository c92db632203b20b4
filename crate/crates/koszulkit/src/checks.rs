//! Named pass/fail checks with optional witnesses.

use crate::linalg::Vector;

/// A concrete element on which a check failed and the nonzero residual it produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub description: String,
    pub element: Vector,
    pub residual: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            holds: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, description: impl Into<String>, element: Vector, residual: Vector) -> Check {
        Check {
            name: name.into(),
            holds: false,
            witness: Some(Witness {
                description: description.into(),
                element,
                residual,
            }),
        }
    }
}

/// Collects the first failure per check name.
pub(crate) struct Checker {
    name: String,
    failure: Option<Witness>,
}

impl Checker {
    pub(crate) fn new(name: impl Into<String>) -> Checker {
        Checker {
            name: name.into(),
            failure: None,
        }
    }

    pub(crate) fn failed(&self) -> bool {
        self.failure.is_some()
    }

    /// Records a failure unless `lhs == rhs`.
    pub(crate) fn expect_eq(&mut self, lhs: &Vector, rhs: &Vector, element: &Vector, what: impl FnOnce() -> String) {
        if self.failure.is_some() || lhs == rhs {
            return;
        }
        let residual = lhs.iter().zip(rhs).map(|(a, b)| a - b).collect();
        self.failure = Some(Witness {
            description: what(),
            element: element.clone(),
            residual,
        });
    }

    pub(crate) fn record(&mut self, element: &Vector, residual: Vector, what: impl FnOnce() -> String) {
        if self.failure.is_none() {
            self.failure = Some(Witness {
                description: what(),
                element: element.clone(),
                residual,
            });
        }
    }

    pub(crate) fn finish(self) -> Check {
        Check {
            holds: self.failure.is_none(),
            name: self.name,
            witness: self.failure,
        }
    }
}

pub fn all_hold(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.holds)
}

pub fn first_failure(checks: &[Check]) -> Option<&Check> {
    checks.iter().find(|c| !c.holds)
}
