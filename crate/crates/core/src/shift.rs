//! Weighted backward shifts `B_a e_k = a_k e_{k-1}`, their powers, and the
//! right inverses `S` with `(1/n) B^{r n} S = Id` on finitely supported vectors.

use crate::error::{Error, Result};
use crate::scalar::{LogScalar, ScaledComplex};
use crate::space::{IndexDomain, SeqVector};
use crate::weights::WeightSequence;

/// `B_a^r`: a weighted backward shift raised to a fixed exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftOperator {
    weights: WeightSequence,
    exponent: u64,
}

impl ShiftOperator {
    pub fn new(weights: WeightSequence, exponent: u64) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::input("shift exponent must be at least 1"));
        }
        Ok(Self { weights, exponent })
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn domain(&self) -> IndexDomain {
        self.weights.domain()
    }

    fn total_power(&self, m: u64) -> Result<i64> {
        self.exponent
            .checked_mul(m)
            .and_then(|p| i64::try_from(p).ok())
            .ok_or_else(|| Error::input(format!("power {} * {m} overflows", self.exponent)))
    }

    /// One step of the bare shift `B_a` (the exponent is ignored).
    pub fn apply(&self, v: &SeqVector) -> Result<SeqVector> {
        self.domain().ensure(v.domain())?;
        let mut out = Vec::with_capacity(v.support_len());
        for (k, x) in v.iter() {
            if self.domain() == IndexDomain::Unilateral && k == 0 {
                continue;
            }
            out.push((k - 1, self.weights.weight(k)? * x));
        }
        Ok(SeqVector::collect(v.domain(), out))
    }

    /// `B_a^{r m} v` via the closed form
    /// `e_k -> (a_{k-p+1} ... a_k) e_{k-p}`, `p = r m`.
    pub fn apply_power(&self, m: u64, v: &SeqVector) -> Result<SeqVector> {
        let p = self.total_power(m)?;
        self.apply_total_power(p, v)
    }

    pub(crate) fn apply_total_power(&self, p: i64, v: &SeqVector) -> Result<SeqVector> {
        self.domain().ensure(v.domain())?;
        if p == 0 {
            return Ok(v.clone());
        }
        let mut out = Vec::with_capacity(v.support_len());
        for (k, x) in v.iter() {
            if self.domain() == IndexDomain::Unilateral && k < p {
                continue;
            }
            let coef = self.weights.scaled_window(k - p + 1, k)?;
            let z = (ScaledComplex::from_complex(x) * coef).to_complex()?;
            out.push((k - p, z));
        }
        Ok(SeqVector::collect(v.domain(), out))
    }

    /// The right inverse `S` at schedule value `n_q`:
    /// `e_k -> n_q / (a_{k+1} ... a_{k+r n_q}) e_{k+r n_q}`.
    pub fn right_inverse(&self, n_q: u64, v: &SeqVector) -> Result<SeqVector> {
        self.domain().ensure(v.domain())?;
        let p = self.total_power(n_q)?;
        let scale = ScaledComplex::from_real(n_q as f64);
        let mut out = Vec::with_capacity(v.support_len());
        for (k, x) in v.iter() {
            let target = k
                .checked_add(p)
                .ok_or_else(|| Error::input("right-inverse target index overflows"))?;
            let window = self.weights.scaled_window(k + 1, target)?;
            let z = (ScaledComplex::from_complex(x) * scale / window).to_complex()?;
            out.push((target, z));
        }
        Ok(SeqVector::collect(v.domain(), out))
    }

    /// Log-form coefficient of `e_{k-p}` in `B^{r m} e_k`; zero when a
    /// unilateral support point falls below index 0.
    pub fn power_log_coefficient(&self, m: u64, k: i64) -> Result<LogScalar> {
        let p = self.total_power(m)?;
        if self.domain() == IndexDomain::Unilateral && k < p {
            return Ok(LogScalar::zero());
        }
        self.weights.log_window(k - p + 1, k)
    }

    /// Log-form coefficient of `e_{k + r n_q}` in `S e_k`.
    pub fn right_inverse_log_coefficient(&self, n_q: u64, k: i64) -> Result<LogScalar> {
        let p = self.total_power(n_q)?;
        let window = self.weights.log_window(k + 1, k + p)?;
        Ok(LogScalar::from_real(n_q as f64) * window.checked_recip().unwrap_or(LogScalar::zero()))
    }
}

/// `(B_{a_1}^{r_1}, ..., B_{a_N}^{r_N})` with `r_1 < ... < r_N` on one domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftFamily {
    members: Vec<ShiftOperator>,
}

impl ShiftFamily {
    pub fn new(members: Vec<ShiftOperator>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::input("a shift family needs at least one member"))?;
        let domain = first.domain();
        for (i, w) in members.windows(2).enumerate() {
            if w[1].exponent <= w[0].exponent {
                return Err(Error::input(format!(
                    "exponents must be strictly increasing: r_{} = {} is not below r_{} = {}",
                    i + 1,
                    w[0].exponent,
                    i + 2,
                    w[1].exponent
                )));
            }
        }
        for m in &members {
            domain.ensure(m.domain())?;
        }
        Ok(Self { members })
    }

    /// Constant weights `c_l` with exponents `r_l`.
    pub fn constant(domain: IndexDomain, spec: &[(f64, u64)]) -> Result<Self> {
        Self::new(
            spec.iter()
                .map(|&(c, r)| ShiftOperator::new(WeightSequence::constant(domain, c)?, r))
                .collect::<Result<_>>()?,
        )
    }

    pub fn members(&self) -> &[ShiftOperator] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn domain(&self) -> IndexDomain {
        self.members[0].domain()
    }

    /// Indices (1-based) of members whose weights carry no declared bound.
    pub fn unbounded_members(&self) -> Vec<usize> {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, m)| m.weights.declared_bound().is_none())
            .map(|(i, _)| i + 1)
            .collect()
    }
}
