//! Cesàro orbit points `n^{-1} T^n x`, Cesàro means, and joint orbits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shift::{ShiftFamily, ShiftOperator};
use crate::space::SeqVector;

/// `(n^{-1} T_1^n x, ..., n^{-1} T_N^n x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub n: u64,
    pub values: Vec<SeqVector>,
}

/// `(1/n) T^n x` where `T = B_a^r`.
pub fn cesaro_orbit_point(shift: &ShiftOperator, n: u64, x: &SeqVector) -> Result<SeqVector> {
    if n == 0 {
        return Err(Error::input("orbit index n must be at least 1"));
    }
    Ok(shift.apply_power(n, x)?.div_real(n as f64))
}

/// `M_n(T) x = (1/n) (x + T x + ... + T^{n-1} x)`.
pub fn cesaro_mean_apply(shift: &ShiftOperator, n: u64, x: &SeqVector) -> Result<SeqVector> {
    if n == 0 {
        return Err(Error::input("Cesàro mean index n must be at least 1"));
    }
    let mut sum = x.clone();
    for k in 1..n {
        let term = shift.apply_power(k, x)?;
        if term.is_zero() && shift.domain() == crate::space::IndexDomain::Unilateral {
            break;
        }
        sum = sum.add(&term)?;
    }
    Ok(sum.div_real(n as f64))
}

pub fn joint_cesaro_orbit(
    family: &ShiftFamily,
    x: &SeqVector,
    ns: &[u64],
) -> Result<Vec<OrbitPoint>> {
    if ns.is_empty() {
        return Err(Error::input("orbit index list is empty"));
    }
    if ns[0] == 0 || ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::input(
            "orbit indices must be positive and strictly increasing",
        ));
    }
    family.domain().ensure(x.domain())?;
    ns.par_iter()
        .map(|&n| {
            let values = family
                .members()
                .iter()
                .map(|m| cesaro_orbit_point(m, n, x))
                .collect::<Result<Vec<_>>>()?;
            Ok(OrbitPoint { n, values })
        })
        .collect()
}
