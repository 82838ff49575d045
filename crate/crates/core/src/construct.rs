//! Constructive assembly of a vector whose joint Cesàro orbit approximates a
//! list of target tuples.
//!
//! Step `j` picks the least schedule index `k_j > k_{j-1}` for which the seven
//! step inequalities hold with bound `2^{-j}`, then adds
//! `x_j + S_{1,k_j} y_{1j} + ... + S_{N,k_j} y_{Nj}` to the accumulated
//! vector. The finished vector satisfies
//! `|| (1/n_{k_j}) T_l^{n_{k_j}} x - y_{lj} || < (2N + 3) / 2^j`.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criterion::WitnessSchedule;
use crate::error::{Error, Result};
use crate::orbit::{cesaro_orbit_point, joint_cesaro_orbit};
use crate::shift::ShiftFamily;
use crate::space::{SeqVector, SpaceSpec};

/// The step inequalities, in the order they are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    /// `||x_j||`
    CorrectionNorm,
    /// `||(1/n_{k_l}) T_m^{n_{k_l}} x_j||` for earlier steps `l < j`
    CorrectionEarlierImages,
    /// `||S_{i,k_j} y_{ij}||`
    RightInverseNorm,
    /// `||(1/n_{k_l}) T_m^{n_{k_l}} S_{i,k_j} y_{ij}||` for `l < j`
    RightInverseEarlierImages,
    /// `||(1/n_{k_j}) T_m^{n_{k_j}} S_{m,k_j} y_{mj} - y_{mj}||`
    Diagonal,
    /// `||(1/n_{k_j}) T_m^{n_{k_j}} S_{i,k_j} y_{ij}||` for `i != m`
    CrossTerm,
    /// `||(1/n_{k_j}) T_m^{n_{k_j}} (accumulated prefix + x_j)||`
    PrefixImage,
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Inequality::CorrectionNorm => "correction norm",
            Inequality::CorrectionEarlierImages => "correction images at earlier schedule values",
            Inequality::RightInverseNorm => "right-inverse norm",
            Inequality::RightInverseEarlierImages => {
                "right-inverse images at earlier schedule values"
            }
            Inequality::Diagonal => "diagonal reproduction",
            Inequality::CrossTerm => "cross term",
            Inequality::PrefixImage => "image of the accumulated prefix",
        };
        f.write_str(s)
    }
}

/// Largest left-hand side of each step inequality (all must be `< 2^{-j}`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Slacks {
    pub correction_norm: f64,
    pub correction_earlier_images: f64,
    pub right_inverse_norm: f64,
    pub right_inverse_earlier_images: f64,
    pub diagonal: f64,
    pub cross_term: f64,
    pub prefix_image: f64,
}

impl Slacks {
    pub fn values(&self) -> [(Inequality, f64); 7] {
        [
            (Inequality::CorrectionNorm, self.correction_norm),
            (
                Inequality::CorrectionEarlierImages,
                self.correction_earlier_images,
            ),
            (Inequality::RightInverseNorm, self.right_inverse_norm),
            (
                Inequality::RightInverseEarlierImages,
                self.right_inverse_earlier_images,
            ),
            (Inequality::Diagonal, self.diagonal),
            (Inequality::CrossTerm, self.cross_term),
            (Inequality::PrefixImage, self.prefix_image),
        ]
    }

    fn first_violation(&self, bound: f64) -> Option<Inequality> {
        self.values()
            .into_iter()
            .find(|(_, v)| v.partial_cmp(&bound) != Some(Ordering::Less))
            .map(|(i, _)| i)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetList {
    targets: Vec<Vec<SeqVector>>,
}

impl TargetList {
    /// `targets[j]` is the tuple `(y_{1j}, ..., y_{Nj})`; every tuple must
    /// have `family.len()` entries on the family's domain.
    pub fn new(family: &ShiftFamily, targets: Vec<Vec<SeqVector>>) -> Result<Self> {
        for (j, tuple) in targets.iter().enumerate() {
            if tuple.len() != family.len() {
                return Err(Error::input(format!(
                    "target {} has {} components, expected {}",
                    j + 1,
                    tuple.len(),
                    family.len()
                )));
            }
            for y in tuple {
                family.domain().ensure(y.domain())?;
            }
        }
        Ok(Self { targets })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<SeqVector>] {
        &self.targets
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiaryStep {
    pub j: usize,
    /// 0-based position in the witness schedule.
    pub schedule_index: usize,
    pub n: u64,
    pub x_j: SeqVector,
    pub slacks: Slacks,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstructionDiary {
    pub steps: Vec<DiaryStep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructedVector {
    pub x: SeqVector,
    pub diary: ConstructionDiary,
    /// `errors[l-1][j-1] = ||(1/n_{k_j}) T_l^{n_{k_j}} x - y_{lj}||`.
    pub errors: Vec<Vec<f64>>,
}

/// `(2N + 3) / 2^j`.
pub fn error_bound(family_size: usize, j: usize) -> f64 {
    (2 * family_size + 3) as f64 / 2f64.powi(j as i32)
}

/// Norm of a computed vector; an overflowing computation counts as infinite.
fn norm_or_inf(v: Result<SeqVector>, space: &SpaceSpec) -> Result<f64> {
    match v {
        Ok(v) => v.norm(space),
        Err(Error::Overflow { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

struct Candidate {
    slacks: Slacks,
    images: Vec<SeqVector>,
}

fn evaluate_candidate(
    family: &ShiftFamily,
    space: &SpaceSpec,
    n: u64,
    earlier: &[u64],
    tuple: &[SeqVector],
    prefix: &SeqVector,
    correction: Slacks,
) -> Result<Candidate> {
    let members = family.members();
    let images = members
        .iter()
        .zip(tuple)
        .map(|(m, y)| m.right_inverse(n, y))
        .collect::<Result<Vec<_>>>()?;

    let mut slacks = correction;
    slacks.right_inverse_norm = images
        .iter()
        .map(|s| s.norm(space))
        .try_fold(0.0_f64, |acc, r| r.map(|v| acc.max(v)))?;

    let mut earlier_max = 0.0_f64;
    for &nl in earlier {
        for tm in members {
            for s in &images {
                earlier_max = earlier_max.max(norm_or_inf(cesaro_orbit_point(tm, nl, s), space)?);
            }
        }
    }
    slacks.right_inverse_earlier_images = earlier_max;

    let mut diag = 0.0_f64;
    let mut cross = 0.0_f64;
    let mut pref = 0.0_f64;
    for (mi, tm) in members.iter().enumerate() {
        for (ii, s) in images.iter().enumerate() {
            let img = cesaro_orbit_point(tm, n, s);
            if ii == mi {
                let d = img.and_then(|v| v.sub(&tuple[mi]));
                diag = diag.max(norm_or_inf(d, space)?);
            } else {
                cross = cross.max(norm_or_inf(img, space)?);
            }
        }
        pref = pref.max(norm_or_inf(cesaro_orbit_point(tm, n, prefix), space)?);
    }
    slacks.diagonal = diag;
    slacks.cross_term = cross;
    slacks.prefix_image = pref;
    Ok(Candidate { slacks, images })
}

/// Runs the construction against `schedule` and certifies every error
/// against `(2N + 3) / 2^j`.
///
/// The correction `x_j` is always the zero vector: the accumulated prefix is
/// already finitely supported, so only the schedule index has to be chosen.
/// When no admissible index remains the construction reports
/// [`Error::ConstructionStuck`] instead of searching for a nonzero correction.
pub fn construct(
    family: &ShiftFamily,
    schedule: &WitnessSchedule,
    targets: &TargetList,
    space: &SpaceSpec,
) -> Result<ConstructedVector> {
    if targets.is_empty() {
        return Err(Error::input("construction needs at least one target tuple"));
    }
    let domain = family.domain();
    domain.ensure(space.domain())?;
    let values: Vec<u64> = schedule.values().collect();
    if values.first() == Some(&0) || values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::input(
            "schedule values must be positive and strictly increasing",
        ));
    }

    let mut acc = SeqVector::zero(domain);
    let mut diary = ConstructionDiary::default();
    let mut earlier: Vec<u64> = Vec::new();
    let mut next_index = 0usize;

    for (jj, tuple) in targets.tuples().iter().enumerate() {
        let j = jj + 1;
        let bound = 0.5f64.powi(j as i32);
        let x_j = SeqVector::zero(domain);
        let correction = Slacks {
            correction_norm: x_j.norm(space)?,
            correction_earlier_images: 0.0,
            right_inverse_norm: 0.0,
            right_inverse_earlier_images: 0.0,
            diagonal: 0.0,
            cross_term: 0.0,
            prefix_image: 0.0,
        };
        let prefix = acc.add(&x_j)?;

        let mut chosen = None;
        let mut last_failure = None;
        for (k, &n) in values.iter().enumerate().skip(next_index) {
            let cand = evaluate_candidate(family, space, n, &earlier, tuple, &prefix, correction)?;
            match cand.slacks.first_violation(bound) {
                None => {
                    chosen = Some((k, n, cand));
                    break;
                }
                Some(ineq) => last_failure = Some(ineq),
            }
        }
        let Some((k, n, cand)) = chosen else {
            return Err(Error::ConstructionStuck {
                step: j,
                inequality: last_failure,
            });
        };

        acc = prefix;
        for s in &cand.images {
            acc = acc.add(s)?;
        }
        diary.steps.push(DiaryStep {
            j,
            schedule_index: k,
            n,
            x_j,
            slacks: cand.slacks,
        });
        earlier.push(n);
        next_index = k + 1;
    }

    let n_family = family.len();
    let mut errors = vec![Vec::with_capacity(targets.len()); n_family];
    for (step, tuple) in diary.steps.iter().zip(targets.tuples()) {
        let bound = error_bound(n_family, step.j);
        for (li, tm) in family.members().iter().enumerate() {
            let err = cesaro_orbit_point(tm, step.n, &acc)?
                .sub(&tuple[li])?
                .norm(space)?;
            if err.partial_cmp(&bound) != Some(Ordering::Less) {
                return Err(Error::CertificationFailure {
                    l: li + 1,
                    j: step.j,
                    error: err,
                    bound,
                });
            }
            errors[li].push(err);
        }
    }

    Ok(ConstructedVector {
        x: acc,
        diary,
        errors,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub l: usize,
    pub j: usize,
    #[serde(with = "crate::float_serde")]
    pub error: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Recomputes every error of `result.x` through the joint orbit and compares
/// it with `(2N + 3) / 2^j`. Rows are ordered by `j`, then `l`. Computation
/// failures show up as failing rows with an infinite error.
pub fn verify_construction(
    result: &ConstructedVector,
    family: &ShiftFamily,
    targets: &TargetList,
    space: &SpaceSpec,
) -> Vec<AuditRow> {
    let n_family = family.len();
    result
        .diary
        .steps
        .par_iter()
        .zip(targets.tuples().par_iter())
        .flat_map_iter(|(step, tuple)| {
            let bound = error_bound(n_family, step.j);
            let point = joint_cesaro_orbit(family, &result.x, &[step.n]);
            (0..n_family)
                .map(|li| {
                    let error = point
                        .as_ref()
                        .ok()
                        .and_then(|p| p[0].values[li].sub(&tuple[li]).ok())
                        .and_then(|d| d.norm(space).ok())
                        .unwrap_or(f64::INFINITY);
                    AuditRow {
                        l: li + 1,
                        j: step.j,
                        error,
                        bound,
                        pass: error < bound,
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect()
}
