//! Finite-horizon probes of Cesàro transitivity, blow-up/collapse and mixing.
//!
//! Each probe tests one explicit candidate per `n`: the right-inverse
//! construction `z = u + S_{1,n} v_1 + ... + S_{N,n} v_N`. A negative answer
//! therefore only says that this candidate fails up to the horizon; it does
//! not disprove the property.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbit::cesaro_orbit_point;
use crate::scan::scan_ordered;
use crate::shift::ShiftFamily;
use crate::space::{IndexDomain, SeqVector, SpaceSpec};

pub const NOT_FOUND_NOTE: &str = "right-inverse construction fails up to horizon; not a disproof";

/// Open ball `{ z : ||z - center|| < radius }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    center: SeqVector,
    radius: f64,
    space: SpaceSpec,
}

impl Ball {
    pub fn new(center: SeqVector, radius: f64, space: SpaceSpec) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::input(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        space.domain().ensure(center.domain())?;
        Ok(Self {
            center,
            radius,
            space,
        })
    }

    pub fn center(&self) -> &SeqVector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    /// Distance from `z` to the center; overflowed computations are infinitely far.
    fn distance(&self, z: Result<SeqVector>) -> Result<f64> {
        match z.and_then(|z| z.sub(&self.center)) {
            Ok(d) => d.norm(&self.space),
            Err(Error::Overflow { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    }

    fn norm_of(&self, z: Result<SeqVector>) -> Result<f64> {
        match z {
            Ok(z) => z.norm(&self.space),
            Err(Error::Overflow { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeWitness {
    pub n: u64,
    pub z: SeqVector,
    /// `||z - u||` followed by `||(1/n) T_l^n z - v_l||` for each `l`.
    #[serde(with = "crate::float_serde::vec")]
    pub distances: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeOutcome<W> {
    Found(W),
    NotFoundUpTo { n_max: u64 },
}

impl<W> ProbeOutcome<W> {
    pub fn is_found(&self) -> bool {
        matches!(self, ProbeOutcome::Found(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            ProbeOutcome::Found(w) => Some(w),
            ProbeOutcome::NotFoundUpTo { .. } => None,
        }
    }
}

fn check_targets(family: &ShiftFamily, u: &Ball, vs: &[Ball]) -> Result<()> {
    if vs.len() != family.len() {
        return Err(Error::input(format!(
            "expected {} target balls, got {}",
            family.len(),
            vs.len()
        )));
    }
    let d = family.domain();
    d.ensure(u.center.domain())?;
    for v in vs {
        d.ensure(v.center.domain())?;
    }
    Ok(())
}

/// `v + S_{1,n} w_1 + ... + S_{N,n} w_N`.
fn lift(family: &ShiftFamily, n: u64, base: &SeqVector, balls: &[Ball]) -> Result<SeqVector> {
    let mut z = base.clone();
    for (m, v) in family.members().iter().zip(balls) {
        z = z.add(&m.right_inverse(n, &v.center)?)?;
    }
    Ok(z)
}

fn transitivity_candidate(
    family: &ShiftFamily,
    u: &Ball,
    vs: &[Ball],
    n: u64,
) -> Result<(ProbeWitness, bool)> {
    let z = lift(family, n, &u.center, vs);
    let z = match z {
        Ok(z) => z,
        Err(Error::Overflow { .. }) => {
            let w = ProbeWitness {
                n,
                z: SeqVector::zero(family.domain()),
                distances: vec![f64::INFINITY; vs.len() + 1],
            };
            return Ok((w, false));
        }
        Err(e) => return Err(e),
    };
    let mut distances = Vec::with_capacity(vs.len() + 1);
    distances.push(u.distance(Ok(z.clone()))?);
    for (m, v) in family.members().iter().zip(vs) {
        distances.push(v.distance(cesaro_orbit_point(m, n, &z))?);
    }
    let pass = distances[0] < u.radius && distances[1..].iter().zip(vs).all(|(d, v)| *d < v.radius);
    Ok((ProbeWitness { n, z, distances }, pass))
}

/// Finds the least `n <= n_max` whose right-inverse candidate lies in `U`
/// and has `(1/n) T_l^n z` in `V_l` for every `l`.
pub fn probe_transitivity(
    family: &ShiftFamily,
    u: &Ball,
    vs: &[Ball],
    n_max: u64,
) -> Result<ProbeOutcome<ProbeWitness>> {
    check_targets(family, u, vs)?;
    let mut outcome = ProbeOutcome::NotFoundUpTo { n_max };
    scan_ordered(
        1,
        n_max,
        |n| transitivity_candidate(family, u, vs, n),
        |_, (w, pass)| {
            if pass {
                outcome = ProbeOutcome::Found(w);
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        },
    )?;
    Ok(outcome)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowUpCollapseWitness {
    pub m: u64,
    /// Blow-up side: `w` near zero with `(1/m) T_l^m w` in `V_l`.
    pub w: SeqVector,
    /// `||w||` followed by `||(1/m) T_l^m w - v_l||`.
    #[serde(with = "crate::float_serde::vec")]
    pub w_distances: Vec<f64>,
    /// Collapse side: `eta` in `V_0` with `(1/m) T_l^m eta` in `W`.
    pub eta: SeqVector,
    /// `||eta - v_0||` followed by `||(1/m) T_l^m eta||`.
    #[serde(with = "crate::float_serde::vec")]
    pub eta_distances: Vec<f64>,
}

fn blow_up_candidate(
    family: &ShiftFamily,
    w_ball: &Ball,
    v0: &Ball,
    vs: &[Ball],
    m: u64,
) -> Result<(BlowUpCollapseWitness, bool)> {
    let domain = family.domain();
    let w = lift(family, m, &SeqVector::zero(domain), vs);
    let mut w_distances = vec![w_ball.norm_of(w.clone())?];
    for (t, v) in family.members().iter().zip(vs) {
        w_distances.push(v.distance(w.clone().and_then(|w| cesaro_orbit_point(t, m, &w)))?);
    }
    let w = w.unwrap_or_else(|_| SeqVector::zero(domain));

    // On N the shortest power r_1 m already annihilates indices below r_1 m.
    let eta = match domain {
        IndexDomain::Unilateral => {
            let cut = family.members()[0].exponent().saturating_mul(m);
            v0.center.restrict(|k| (k as u64) < cut)
        }
        IndexDomain::Bilateral => v0.center.clone(),
    };
    let mut eta_distances = vec![v0.distance(Ok(eta.clone()))?];
    for t in family.members() {
        eta_distances.push(w_ball.norm_of(cesaro_orbit_point(t, m, &eta))?);
    }

    let pass = w_distances[0] < w_ball.radius
        && w_distances[1..].iter().zip(vs).all(|(d, v)| *d < v.radius)
        && eta_distances[0] < v0.radius
        && eta_distances[1..].iter().all(|d| *d < w_ball.radius);
    Ok((
        BlowUpCollapseWitness {
            m,
            w,
            w_distances,
            eta,
            eta_distances,
        },
        pass,
    ))
}

/// Finds the least `m <= n_max` with both a blow-up witness (from `W` into
/// every `V_l`) and a collapse witness (from `V_0` into `W`). `W` must be
/// centered at zero.
pub fn probe_blow_up_collapse(
    family: &ShiftFamily,
    w: &Ball,
    v0: &Ball,
    vs: &[Ball],
    n_max: u64,
) -> Result<ProbeOutcome<BlowUpCollapseWitness>> {
    if !w.center.is_zero() {
        return Err(Error::input(
            "the zero-neighbourhood ball W must be centered at 0",
        ));
    }
    check_targets(family, v0, vs)?;
    family.domain().ensure(w.center.domain())?;
    let mut outcome = ProbeOutcome::NotFoundUpTo { n_max };
    scan_ordered(
        1,
        n_max,
        |m| blow_up_candidate(family, w, v0, vs, m),
        |_, (wit, pass)| {
            if pass {
                outcome = ProbeOutcome::Found(wit);
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        },
    )?;
    Ok(outcome)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixingRow {
    pub n: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixingTable {
    pub rows: Vec<MixingRow>,
    /// Least tested `n` from which every tested value passes.
    pub passing_from: Option<u64>,
}

impl MixingTable {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Runs the transitivity candidate at every `n` in `[n_from, n_to]`.
pub fn probe_mixing(
    family: &ShiftFamily,
    u: &Ball,
    vs: &[Ball],
    n_from: u64,
    n_to: u64,
) -> Result<MixingTable> {
    if n_from == 0 || n_from > n_to {
        return Err(Error::input(format!("invalid range [{n_from}, {n_to}]")));
    }
    check_targets(family, u, vs)?;
    let rows = (n_from..=n_to)
        .into_par_iter()
        .map(|n| transitivity_candidate(family, u, vs, n).map(|(_, pass)| MixingRow { n, pass }))
        .collect::<Result<Vec<_>>>()?;
    let passing_from = rows.iter().rev().take_while(|r| r.pass).last().map(|r| r.n);
    Ok(MixingTable { rows, passing_from })
}
