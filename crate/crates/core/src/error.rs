use thiserror::Error;

use crate::construct::Inequality;
use crate::criterion::WitnessSchedule;
use crate::space::IndexDomain;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} is outside the {domain} index domain")]
    OutOfDomain { index: i64, domain: IndexDomain },

    #[error("domain mismatch: expected {expected}, found {found}")]
    DomainMismatch {
        expected: IndexDomain,
        found: IndexDomain,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("weight a_{index}: {reason}")]
    Weight { index: i64, reason: String },

    /// A coefficient does not fit in a double.
    #[error("coefficient overflow (log-magnitude {logmag:.3} exceeds the double range)")]
    Overflow { logmag: f64 },

    #[error("schedule incomplete: no admissible n for level q = {q} within the search cap")]
    ScheduleIncomplete { q: u64, partial: WitnessSchedule },

    #[error("construction stuck at step j = {step}{}", match .inequality {
        Some(i) => format!(" on {i}"),
        None => String::from(": schedule exhausted"),
    })]
    ConstructionStuck {
        step: usize,
        inequality: Option<Inequality>,
    },

    #[error("certification failure at l = {l}, j = {j}: error {error:e} >= bound {bound:e}")]
    CertificationFailure {
        l: usize,
        j: usize,
        error: f64,
        bound: f64,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
