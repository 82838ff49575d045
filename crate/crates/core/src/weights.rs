//! Piecewise weight sequences `a = (a_k)` and products over index windows.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{LogScalar, ScaledComplex};
use crate::space::IndexDomain;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRule {
    Constant(Complex64),
    /// `c0 + c1 * k`.
    Affine(Complex64, Complex64),
}

impl WeightRule {
    pub fn constant(c: f64) -> Self {
        WeightRule::Constant(Complex64::new(c, 0.0))
    }

    pub fn affine(c0: f64, c1: f64) -> Self {
        WeightRule::Affine(Complex64::new(c0, 0.0), Complex64::new(c1, 0.0))
    }

    fn eval(&self, k: i64) -> Complex64 {
        match *self {
            WeightRule::Constant(c) => c,
            WeightRule::Affine(c0, c1) => c0 + c1 * k as f64,
        }
    }
}

/// A rule applied on the index interval `[from, to]`; `None` means unbounded
/// on that side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightPiece {
    pub from: Option<i64>,
    pub to: Option<i64>,
    pub rule: WeightRule,
}

impl WeightPiece {
    pub fn new(from: Option<i64>, to: Option<i64>, rule: WeightRule) -> Self {
        Self { from, to, rule }
    }

    fn lo(&self) -> i64 {
        self.from.unwrap_or(i64::MIN)
    }

    fn hi(&self) -> i64 {
        self.to.unwrap_or(i64::MAX)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    pieces: Vec<WeightPiece>,
    domain: IndexDomain,
    declared_bound: Option<f64>,
    nonzero_floor: f64,
}

impl WeightSequence {
    /// Validates that `pieces` tile the index range of `domain` (all of `Z`
    /// for bilateral weights, `[1, inf)` or `[0, inf)` for unilateral ones).
    pub fn new(
        domain: IndexDomain,
        mut pieces: Vec<WeightPiece>,
        declared_bound: Option<f64>,
        nonzero_floor: f64,
    ) -> Result<Self> {
        if !(nonzero_floor.is_finite() && nonzero_floor > 0.0) {
            return Err(Error::input(
                "nonzero_floor must be a positive finite number",
            ));
        }
        if let Some(b) = declared_bound {
            if !(b.is_finite() && b >= nonzero_floor) {
                return Err(Error::input(
                    "declared_bound must be finite and at least nonzero_floor",
                ));
            }
        }
        if pieces.is_empty() {
            return Err(Error::input("weight sequence needs at least one piece"));
        }
        for p in &pieces {
            if let (Some(a), Some(b)) = (p.from, p.to) {
                if a > b {
                    return Err(Error::input(format!("weight piece [{a}, {b}] is empty")));
                }
            }
        }
        pieces.sort_by_key(|p| p.lo());

        let first = pieces[0];
        match domain {
            IndexDomain::Bilateral => {
                if first.from.is_some() {
                    return Err(Error::input("bilateral weights must start at -inf"));
                }
            }
            IndexDomain::Unilateral => match first.from {
                Some(0) | Some(1) => {}
                _ => {
                    return Err(Error::input(
                        "unilateral weights must start at index 0 or 1",
                    ))
                }
            },
        }
        if pieces.last().map(|p| p.to.is_some()).unwrap_or(true) {
            return Err(Error::input("weight pieces must extend to +inf"));
        }
        for w in pieces.windows(2) {
            match (w[0].to, w[1].from) {
                (Some(t), Some(f)) if f == t + 1 => {}
                _ => {
                    return Err(Error::input(format!(
                        "weight pieces starting at {:?} and {:?} do not tile the index range",
                        w[0].from, w[1].from
                    )))
                }
            }
        }

        let seq = Self {
            pieces,
            domain,
            declared_bound,
            nonzero_floor,
        };
        for p in &seq.pieces {
            if let WeightRule::Constant(c) = p.rule {
                seq.check_value(p.from.unwrap_or(0), c)?;
            }
        }
        Ok(seq)
    }

    /// Single constant piece covering the whole domain.
    pub fn constant(domain: IndexDomain, c: f64) -> Result<Self> {
        let from = match domain {
            IndexDomain::Unilateral => Some(1),
            IndexDomain::Bilateral => None,
        };
        Self::new(
            domain,
            vec![WeightPiece::new(from, None, WeightRule::constant(c))],
            Some(c.abs()),
            f64::MIN_POSITIVE,
        )
    }

    pub fn domain(&self) -> IndexDomain {
        self.domain
    }

    pub fn pieces(&self) -> &[WeightPiece] {
        &self.pieces
    }

    pub fn declared_bound(&self) -> Option<f64> {
        self.declared_bound
    }

    pub fn nonzero_floor(&self) -> f64 {
        self.nonzero_floor
    }

    fn first_index(&self) -> i64 {
        self.pieces[0].lo()
    }

    fn check_value(&self, k: i64, a: Complex64) -> Result<Complex64> {
        let m = a.norm();
        if !m.is_finite() {
            return Err(Error::Weight {
                index: k,
                reason: String::from("weight is not finite"),
            });
        }
        if m < self.nonzero_floor {
            return Err(Error::Weight {
                index: k,
                reason: format!(
                    "|a| = {m:e} is below the nonzero floor {:e}",
                    self.nonzero_floor
                ),
            });
        }
        if let Some(b) = self.declared_bound {
            if m > b {
                return Err(Error::Weight {
                    index: k,
                    reason: format!("|a| = {m:e} exceeds the declared bound {b:e}"),
                });
            }
        }
        Ok(a)
    }

    fn piece_index(&self, k: i64) -> Result<usize> {
        if k < self.first_index() {
            return Err(Error::OutOfDomain {
                index: k,
                domain: self.domain,
            });
        }
        Ok(self.pieces.partition_point(|p| p.lo() <= k) - 1)
    }

    /// The weight `a_k`.
    pub fn weight(&self, k: i64) -> Result<Complex64> {
        let p = &self.pieces[self.piece_index(k)?];
        self.check_value(k, p.rule.eval(k))
    }

    /// Visits the maximal runs of `[lo, hi]` that fall inside one piece.
    fn for_each_run(
        &self,
        lo: i64,
        hi: i64,
        mut f: impl FnMut(&WeightPiece, i64, i64) -> Result<()>,
    ) -> Result<()> {
        if lo > hi.saturating_add(1) {
            return Err(Error::input(format!("window [{lo}, {hi}] has lo > hi + 1")));
        }
        if lo > hi {
            return Ok(());
        }
        let start = self.piece_index(lo)?;
        for p in &self.pieces[start..] {
            if p.lo() > hi {
                break;
            }
            let a = lo.max(p.lo());
            let b = hi.min(p.hi());
            f(p, a, b)?;
        }
        Ok(())
    }

    /// `prod_{i=lo}^{hi} a_i` in log form. The empty window gives one.
    pub fn log_window(&self, lo: i64, hi: i64) -> Result<LogScalar> {
        let mut logmag = 0.0;
        let mut phase = 0.0;
        self.for_each_run(lo, hi, |p, a, b| {
            match p.rule {
                WeightRule::Constant(c) => {
                    let s = LogScalar::from_complex(c).powu((b - a + 1) as u64);
                    logmag += s.logmag();
                    phase += s.phase();
                }
                WeightRule::Affine(..) => {
                    for k in a..=b {
                        let w = self.check_value(k, p.rule.eval(k))?;
                        logmag += w.norm().ln();
                        phase += w.arg();
                    }
                }
            }
            Ok(())
        })?;
        Ok(LogScalar::new(logmag, phase))
    }

    /// `prod_{i=lo}^{hi} a_i` as a mantissa/exponent pair.
    pub fn scaled_window(&self, lo: i64, hi: i64) -> Result<ScaledComplex> {
        let mut acc = ScaledComplex::one();
        self.for_each_run(lo, hi, |p, a, b| {
            match p.rule {
                WeightRule::Constant(c) => {
                    acc = acc * ScaledComplex::from_complex(c).powu((b - a + 1) as u64);
                }
                WeightRule::Affine(..) => {
                    for k in a..=b {
                        let w = self.check_value(k, p.rule.eval(k))?;
                        acc = acc * ScaledComplex::from_complex(w);
                    }
                }
            }
            Ok(())
        })?;
        Ok(acc)
    }
}
