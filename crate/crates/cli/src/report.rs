use cdlab_core::construct::{AuditRow, ConstructionDiary, Inequality};
use cdlab_core::criterion::{CriterionReport, WitnessSchedule};
use cdlab_core::probe::{BlowUpCollapseWitness, MixingTable, ProbeOutcome, ProbeWitness};
use cdlab_core::space::SeqVector;
use serde::{Deserialize, Serialize};

use crate::config::{Command, ExperimentConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Found,
    NotFound,
    Pass,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Found | Status::Pass => 0,
            Status::NotFound | Status::Fail => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Criterion(CriterionReport),
    Schedule {
        schedule: WitnessSchedule,
    },
    ScheduleIncomplete {
        q: u64,
        partial: WitnessSchedule,
    },
    Construction {
        schedule: WitnessSchedule,
        x: SeqVector,
        diary: ConstructionDiary,
        errors: Vec<Vec<f64>>,
        audit: Vec<AuditRow>,
    },
    ConstructionStuck {
        schedule: WitnessSchedule,
        step: usize,
        inequality: Option<Inequality>,
    },
    CertificationFailure {
        l: usize,
        j: usize,
        #[serde(with = "cdlab_core::float_serde")]
        error: f64,
        bound: f64,
    },
    Transitivity {
        outcome: ProbeOutcome<ProbeWitness>,
    },
    BlowUpCollapse {
        outcome: ProbeOutcome<BlowUpCollapseWitness>,
    },
    Mixing {
        table: MixingTable,
    },
}

/// One report per invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub command: Command,
    pub status: Status,
    pub result: Outcome,
    pub warnings: Vec<String>,
    pub wall_time_ms: f64,
}

impl Report {
    pub fn exit_code(&self) -> u8 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
