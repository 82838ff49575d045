//! Experiment runner behind the `cdlab` binary: parses a JSON config,
//! dispatches one command to `cdlab-core` and assembles a [`Report`].

pub mod config;
pub mod report;

use std::time::Instant;

use cdlab_core::construct::{construct, verify_construction, TargetList};
use cdlab_core::criterion::{
    build_schedule, check_bilateral, check_salas_comparison, check_unilateral, CriterionQuery,
};
use cdlab_core::probe::{probe_blow_up_collapse, probe_mixing, probe_transitivity, NOT_FOUND_NOTE};
use cdlab_core::shift::ShiftFamily;
use cdlab_core::Error;
use log::info;

pub use config::{Command, ExperimentConfig};
pub use report::{Outcome, Report, Status};

use config::{invalid, require, DEFAULT_SEARCH_CAP};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid config at {path}: {message}")]
    Invalid { path: String, message: String },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(String),
}

const UNBOUNDED_NOTE: &str =
    "has no weight bound: the induced operator is unbounded on the space; \
                              finite-window computations remain exact";
const COMPARISON_NOTE: &str =
    "hypercyclicity comparison: plain window products without the 1/m factor; \
                          not a Cesàro criterion";

/// Runs `command` on `config`. Negative verdicts (not found, stuck, failed
/// certification) are reports; only invalid input and arithmetic failures
/// are errors.
pub fn execute(config: &ExperimentConfig, command: Command) -> Result<Report, CliError> {
    let started = Instant::now();
    if let Some(c) = config.command {
        if c != command {
            return Err(invalid(
                "command",
                format!("config is for {c}, invoked as {command}"),
            ));
        }
    }
    let family = config.shift_family()?;
    let mut warnings: Vec<String> = family
        .unbounded_members()
        .into_iter()
        .map(|l| format!("shift {l} {UNBOUNDED_NOTE}"))
        .collect();
    info!(
        "{command}: {} shift(s) on the {} domain",
        family.len(),
        family.domain()
    );

    let (status, result) = match command {
        Command::CheckUnilateral | Command::CheckBilateral | Command::SalasCompare => {
            let p = &config.params;
            let query = CriterionQuery::new(
                family,
                require(&p.epsilon, "epsilon", command)?,
                p.q.unwrap_or(0),
                require(&p.m_max, "m_max", command)?,
            )
            .map_err(|e| invalid("params", e))?;
            let report = match command {
                Command::CheckUnilateral => check_unilateral(&query),
                Command::CheckBilateral => check_bilateral(&query),
                _ => {
                    warnings.push(COMPARISON_NOTE.to_string());
                    check_salas_comparison(&query)
                }
            }
            .map_err(|e| match e {
                Error::DomainMismatch { .. } => invalid("domain", e),
                Error::Input(_) => invalid("family", e),
                e => e.into(),
            })?;
            let status = if report.status.is_found() {
                Status::Found
            } else {
                Status::NotFound
            };
            (status, Outcome::Criterion(report))
        }
        Command::Schedule => {
            let p = &config.params;
            let q_max = require(&p.q_max, "q_max", command)?;
            let cap = p.m_search_cap.unwrap_or(DEFAULT_SEARCH_CAP);
            match build_schedule(&family, q_max, cap) {
                Ok(schedule) => (Status::Found, Outcome::Schedule { schedule }),
                Err(Error::ScheduleIncomplete { q, partial }) => {
                    (Status::NotFound, Outcome::ScheduleIncomplete { q, partial })
                }
                Err(Error::Input(m)) => return Err(invalid("params", m)),
                Err(e) => return Err(e.into()),
            }
        }
        Command::Construct => run_construct(config, &family)?,
        Command::ProbeTransitivity | Command::ProbeMixing => {
            let balls = config.params.balls.clone().unwrap_or_default();
            let u = require(&balls.u, "balls.u", command)?;
            let u = config.ball("params.balls.u", &u)?;
            let vs = target_balls(config, &balls, &family)?;
            if command == Command::ProbeTransitivity {
                let n_max = require(&config.params.n_max, "n_max", command)?;
                let outcome = probe_transitivity(&family, &u, &vs, n_max)?;
                let status = if outcome.is_found() {
                    Status::Found
                } else {
                    warnings.push(NOT_FOUND_NOTE.to_string());
                    Status::NotFound
                };
                (status, Outcome::Transitivity { outcome })
            } else {
                let n_from = require(&config.params.n_from, "n_from", command)?;
                let n_to = require(&config.params.n_to, "n_to", command)?;
                let table = probe_mixing(&family, &u, &vs, n_from, n_to)
                    .map_err(|e| invalid("params.n_from", e))?;
                let status = if table.all_pass() {
                    Status::Pass
                } else {
                    warnings.push(NOT_FOUND_NOTE.to_string());
                    Status::Fail
                };
                (status, Outcome::Mixing { table })
            }
        }
        Command::ProbeBlowUpCollapse => {
            let balls = config.params.balls.clone().unwrap_or_default();
            let w = require(&balls.w, "balls.w", command)?;
            let w = config.ball("params.balls.w", &w)?;
            if !w.center().is_zero() {
                return Err(invalid("params.balls.w.center", "must be the zero vector"));
            }
            let v0 = require(&balls.v0, "balls.v0", command)?;
            let v0 = config.ball("params.balls.v0", &v0)?;
            let vs = target_balls(config, &balls, &family)?;
            let n_max = require(&config.params.n_max, "n_max", command)?;
            let outcome = probe_blow_up_collapse(&family, &w, &v0, &vs, n_max)?;
            let status = if outcome.is_found() {
                Status::Found
            } else {
                warnings.push(NOT_FOUND_NOTE.to_string());
                Status::NotFound
            };
            (status, Outcome::BlowUpCollapse { outcome })
        }
    };

    Ok(Report {
        config: config.clone(),
        command,
        status,
        result,
        warnings,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

fn target_balls(
    config: &ExperimentConfig,
    balls: &config::BallsSpec,
    family: &ShiftFamily,
) -> Result<Vec<cdlab_core::probe::Ball>, CliError> {
    if balls.v.len() != family.len() {
        return Err(invalid(
            "params.balls.v",
            format!(
                "expected {} balls (one per shift), got {}",
                family.len(),
                balls.v.len()
            ),
        ));
    }
    balls
        .v
        .iter()
        .enumerate()
        .map(|(i, b)| config.ball(&format!("params.balls.v[{i}]"), b))
        .collect()
}

fn run_construct(
    config: &ExperimentConfig,
    family: &ShiftFamily,
) -> Result<(Status, Outcome), CliError> {
    let p = &config.params;
    let command = Command::Construct;
    let space = config.space()?;
    let raw = require(&p.targets, "targets", command)?;
    let mut tuples = Vec::with_capacity(raw.len());
    for (j, tuple) in raw.iter().enumerate() {
        let path = format!("params.targets[{j}]");
        if tuple.len() != family.len() {
            return Err(invalid(
                &path,
                format!(
                    "expected {} vectors (one per shift), got {}",
                    family.len(),
                    tuple.len()
                ),
            ));
        }
        tuples.push(
            tuple
                .iter()
                .enumerate()
                .map(|(l, v)| config.vector(&format!("{path}[{l}]"), v))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    if tuples.is_empty() {
        return Err(invalid(
            "params.targets",
            "at least one target tuple is required",
        ));
    }
    let targets = TargetList::new(family, tuples).map_err(|e| invalid("params.targets", e))?;

    let schedule = match config.schedule() {
        Some(s) => s?,
        None => {
            let q_max = p.q_max.ok_or_else(|| {
                invalid(
                    "params.schedule",
                    "construct needs either schedule or q_max",
                )
            })?;
            match build_schedule(family, q_max, p.m_search_cap.unwrap_or(DEFAULT_SEARCH_CAP)) {
                Ok(s) => s,
                Err(Error::ScheduleIncomplete { q, partial }) => {
                    return Ok((Status::NotFound, Outcome::ScheduleIncomplete { q, partial }))
                }
                Err(e) => return Err(e.into()),
            }
        }
    };

    match construct(family, &schedule, &targets, &space) {
        Ok(built) => {
            let audit = verify_construction(&built, family, &targets, &space);
            let status = if audit.iter().all(|r| r.pass) {
                Status::Pass
            } else {
                Status::Fail
            };
            Ok((
                status,
                Outcome::Construction {
                    schedule,
                    x: built.x,
                    diary: built.diary,
                    errors: built.errors,
                    audit,
                },
            ))
        }
        Err(Error::ConstructionStuck { step, inequality }) => Ok((
            Status::Fail,
            Outcome::ConstructionStuck {
                schedule,
                step,
                inequality,
            },
        )),
        Err(Error::CertificationFailure { l, j, error, bound }) => Ok((
            Status::Fail,
            Outcome::CertificationFailure { l, j, error, bound },
        )),
        Err(e) => Err(e.into()),
    }
}

/// Reads a config file and runs `command` on it.
pub fn run_file(path: &std::path::Path, command: Command) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let config = ExperimentConfig::from_json(&text)?;
    execute(&config, command)
}
