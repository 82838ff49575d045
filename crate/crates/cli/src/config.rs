//! JSON experiment configs and their validation into library objects.

use std::fmt;

use cdlab_core::criterion::WitnessSchedule;
use cdlab_core::probe::Ball;
use cdlab_core::shift::{ShiftFamily, ShiftOperator};
use cdlab_core::space::{IndexDomain, Norm, SeqVector, SpaceSpec};
use cdlab_core::weights::{WeightPiece, WeightRule, WeightSequence};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CheckUnilateral,
    CheckBilateral,
    Schedule,
    Construct,
    ProbeTransitivity,
    ProbeBlowUpCollapse,
    ProbeMixing,
    SalasCompare,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::CheckUnilateral,
        Command::CheckBilateral,
        Command::Schedule,
        Command::Construct,
        Command::ProbeTransitivity,
        Command::ProbeBlowUpCollapse,
        Command::ProbeMixing,
        Command::SalasCompare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::CheckUnilateral => "check-unilateral",
            Command::CheckBilateral => "check-bilateral",
            Command::Schedule => "schedule",
            Command::Construct => "construct",
            Command::ProbeTransitivity => "probe-transitivity",
            Command::ProbeBlowUpCollapse => "probe-blow-up-collapse",
            Command::ProbeMixing => "probe-mixing",
            Command::SalasCompare => "salas-compare",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A complex number written as a bare real or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexSpec {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexSpec {
    pub fn value(self) -> Complex64 {
        match self {
            ComplexSpec::Real(re) => Complex64::new(re, 0.0),
            ComplexSpec::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// A piece endpoint: an integer, `"-inf"` or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Finite(i64),
    NegInf,
    PosInf,
}

impl Serialize for Endpoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Endpoint::Finite(k) => s.serialize_i64(*k),
            Endpoint::NegInf => s.serialize_str("-inf"),
            Endpoint::PosInf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Endpoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d) {
            Ok(Raw::Int(k)) => Ok(Endpoint::Finite(k)),
            Ok(Raw::Str(s)) if s == "-inf" => Ok(Endpoint::NegInf),
            Ok(Raw::Str(s)) if s == "inf" || s == "+inf" => Ok(Endpoint::PosInf),
            _ => Err(serde::de::Error::custom(
                "expected an integer, \"-inf\" or \"inf\"",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RuleSpec {
    Const(ComplexSpec),
    /// `c0 + c1 * k`.
    Affine([ComplexSpec; 2]),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub from: Endpoint,
    pub to: Endpoint,
    pub rule: RuleSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSpec {
    pub pieces: Vec<PieceSpec>,
    /// Upper bound on `|a_k|`. Inferred from the pieces when omitted; an
    /// affine piece with nonzero slope on an infinite range is unbounded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    /// Lower bound on `|a_k|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftSpec {
    pub exponent: u64,
    pub weights: WeightsSpec,
}

/// Sparse vector entries `[[k, c], ...]`.
pub type VectorSpec = Vec<(i64, ComplexSpec)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallSpec {
    pub center: VectorSpec,
    pub radius: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallsSpec {
    /// Source ball for transitivity and mixing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<BallSpec>,
    /// One target ball per shift.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub v: Vec<BallSpec>,
    /// Zero-centered ball for blow-up/collapse.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<BallSpec>,
    /// Collapse source ball for blow-up/collapse.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<BallSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_search_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<Vec<VectorSpec>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub balls: Option<BallsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_from: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_to: Option<u64>,
}

fn default_norm() -> Norm {
    Norm::Lp(2.0)
}

/// The on-disk experiment description. It is echoed verbatim in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    pub domain: IndexDomain,
    #[serde(default = "default_norm")]
    pub norm: Norm,
    pub family: Vec<ShiftSpec>,
    #[serde(default)]
    pub params: Params,
}

pub const DEFAULT_SEARCH_CAP: u64 = 10_000;

impl ExperimentConfig {
    /// Parses JSON, reporting the path of the offending field on failure.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Parse {
                path,
                message: e.into_inner().to_string(),
            }
        })
    }

    pub fn space(&self) -> Result<SpaceSpec, CliError> {
        SpaceSpec::new(self.norm, self.domain).map_err(|e| invalid("norm", e))
    }

    pub fn shift_family(&self) -> Result<ShiftFamily, CliError> {
        if self.family.is_empty() {
            return Err(invalid("family", "at least one shift is required"));
        }
        let mut members = Vec::with_capacity(self.family.len());
        for (i, spec) in self.family.iter().enumerate() {
            if i > 0 && spec.exponent <= self.family[i - 1].exponent {
                return Err(invalid(
                    format!("family[{i}].exponent"),
                    "exponents must be strictly increasing",
                ));
            }
            let weights = self.weight_sequence(i, &spec.weights)?;
            members.push(
                ShiftOperator::new(weights, spec.exponent)
                    .map_err(|e| invalid(format!("family[{i}].exponent"), e))?,
            );
        }
        ShiftFamily::new(members).map_err(|e| invalid("family", e))
    }

    fn weight_sequence(&self, i: usize, spec: &WeightsSpec) -> Result<WeightSequence, CliError> {
        let base = format!("family[{i}].weights");
        let mut pieces = Vec::with_capacity(spec.pieces.len());
        for (p, piece) in spec.pieces.iter().enumerate() {
            let at = |field: &str| format!("{base}.pieces[{p}].{field}");
            let from = match piece.from {
                Endpoint::Finite(k) => Some(k),
                Endpoint::NegInf => None,
                Endpoint::PosInf => {
                    return Err(invalid(at("from"), "a piece cannot start at +inf"))
                }
            };
            let to = match piece.to {
                Endpoint::Finite(k) => Some(k),
                Endpoint::PosInf => None,
                Endpoint::NegInf => return Err(invalid(at("to"), "a piece cannot end at -inf")),
            };
            let rule = match piece.rule {
                RuleSpec::Const(c) => WeightRule::Constant(c.value()),
                RuleSpec::Affine([c0, c1]) => WeightRule::Affine(c0.value(), c1.value()),
            };
            pieces.push(WeightPiece::new(from, to, rule));
        }
        let bound = match spec.bound {
            Some(b) => Some(b),
            None => inferred_bound(&pieces),
        };
        let floor = spec.floor.unwrap_or(f64::MIN_POSITIVE);
        WeightSequence::new(self.domain, pieces, bound, floor).map_err(|e| invalid(base, e))
    }

    pub fn vector(&self, path: &str, spec: &VectorSpec) -> Result<SeqVector, CliError> {
        SeqVector::from_entries(self.domain, spec.iter().map(|(k, c)| (*k, c.value())))
            .map_err(|e| invalid(path, e))
    }

    pub fn ball(&self, path: &str, spec: &BallSpec) -> Result<Ball, CliError> {
        let center = self.vector(&format!("{path}.center"), &spec.center)?;
        Ball::new(center, spec.radius, self.space()?)
            .map_err(|e| invalid(format!("{path}.radius"), e))
    }

    pub fn schedule(&self) -> Option<Result<WitnessSchedule, CliError>> {
        self.params
            .schedule
            .as_ref()
            .map(|v| WitnessSchedule::from_values(v).map_err(|e| invalid("params.schedule", e)))
    }
}

/// Largest modulus over all pieces, or `None` if some piece is unbounded.
fn inferred_bound(pieces: &[WeightPiece]) -> Option<f64> {
    let mut bound = 0.0f64;
    for p in pieces {
        let m = match p.rule {
            WeightRule::Constant(c) => c.norm(),
            WeightRule::Affine(c0, c1) if c1 == Complex64::new(0.0, 0.0) => c0.norm(),
            // |c0 + c1 k| is convex in k, so its maximum sits at an endpoint.
            WeightRule::Affine(c0, c1) => match (p.from, p.to) {
                (Some(a), Some(b)) => (c0 + c1 * a as f64).norm().max((c0 + c1 * b as f64).norm()),
                _ => return None,
            },
        };
        bound = bound.max(m);
    }
    Some(bound)
}

pub(crate) fn invalid(path: impl Into<String>, message: impl fmt::Display) -> CliError {
    CliError::Invalid {
        path: path.into(),
        message: message.to_string(),
    }
}

/// Fetches a required parameter or reports which command needs it.
pub(crate) fn require<T: Clone>(
    value: &Option<T>,
    name: &str,
    command: Command,
) -> Result<T, CliError> {
    value
        .clone()
        .ok_or_else(|| invalid(format!("params.{name}"), format!("required by {command}")))
}
