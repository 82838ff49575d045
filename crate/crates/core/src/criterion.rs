//! Witness search for the weight-sequence characterizations of disjoint
//! Cesàro-hypercyclicity of weighted shifts.
//!
//! Every inequality is evaluated in log form as a margin
//! `achieved - threshold` (for `>` conditions) or `threshold - achieved`
//! (for `<` conditions); a condition holds iff its margin is strictly
//! positive. Margins within floating-point noise of zero (relative to the
//! magnitudes of the terms involved) are snapped to exactly zero, so exact
//! ties such as `2/10` against `0.2` fail as they should.
//!
//! For a family `B_{a_1}^{r_1}, ..., B_{a_N}^{r_N}`, the window
//! `W_l(lo, hi) = prod_{i=lo}^{hi} a_{l,i}` and threshold `1/eps`:
//!
//! | condition        | requirement                                                          |
//! |------------------|----------------------------------------------------------------------|
//! | `forward`        | `|W_l(j+1, j+r_l m)| / m > 1/eps`                                     |
//! | `backward`       | `|W_l(j-r_l m+1, j)| / m < eps` (bilateral only)                      |
//! | `cross_forward`  | `|W_l(j+1, j+r_l m)| / |W_s(j+(r_l-r_s)m+1, j+r_l m)| > 1/eps`, `s<l` |
//! | `cross_backward` | `|W_l(j+(r_s-r_l)m+1, j+r_s m)| / |W_s(j+1, j+r_s m)| < eps`, `s<l`   |
//!
//! `j` ranges over `0..=q` for unilateral families and `-q..=q` for
//! bilateral ones.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scan::scan_ordered;
use crate::shift::ShiftFamily;
use crate::space::IndexDomain;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Forward,
    Backward,
    CrossForward,
    CrossBackward,
}

/// Identifies one inequality: member `l` (1-based), optional partner `s < l`,
/// and window offset `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MarginKey {
    pub condition: Condition,
    pub j: i64,
    pub l: usize,
    pub s: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    #[serde(flatten)]
    pub key: MarginKey,
    pub margin: f64,
}

/// The most violated inequality at a rejected `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Blocking {
    pub m: u64,
    #[serde(flatten)]
    pub key: MarginKey,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found { m: u64 },
    NotFoundUpTo { m_max: u64 },
}

impl SearchStatus {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchStatus::Found { .. })
    }
}

/// Outcome of a witness scan.
///
/// On `Found(m)` the margins are those at `m` and all are positive. On
/// `NotFoundUpTo` they are the margins at `m_max`. `blocking` holds one
/// record per rejected `m`, in increasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub status: SearchStatus,
    pub margins: Vec<Margin>,
    pub blocking: Vec<Blocking>,
    pub family_kind: IndexDomain,
}

#[derive(Debug, Clone)]
pub struct CriterionQuery {
    pub family: ShiftFamily,
    pub epsilon: f64,
    pub q: u64,
    pub m_max: u64,
}

impl CriterionQuery {
    pub fn new(family: ShiftFamily, epsilon: f64, q: u64, m_max: u64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::input(format!(
                "epsilon must be positive and finite, got {epsilon}"
            )));
        }
        if m_max == 0 {
            return Err(Error::input("m_max must be at least 1"));
        }
        Ok(Self {
            family,
            epsilon,
            q,
            m_max,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub q: u64,
    pub n: u64,
}

/// `n_1 < n_2 < ...`, one entry per level `q = 1, 2, ...`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSchedule {
    pub entries: Vec<ScheduleEntry>,
}

impl WitnessSchedule {
    /// Builds a schedule from explicit values, checking strict increase.
    pub fn from_values(values: &[u64]) -> Result<Self> {
        if values.first() == Some(&0) || values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::input(
                "schedule values must be positive and strictly increasing",
            ));
        }
        Ok(Self {
            entries: values
                .iter()
                .enumerate()
                .map(|(i, &n)| ScheduleEntry { q: i as u64 + 1, n })
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|e| e.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Regime {
    /// Products divided by `m`.
    Cesaro,
    /// Plain products, for the hypercyclicity comparison.
    Plain,
}

fn offsets(domain: IndexDomain, q: u64) -> std::ops::RangeInclusive<i64> {
    let q = q as i64;
    match domain {
        IndexDomain::Unilateral => 0..=q,
        IndexDomain::Bilateral => -q..=q,
    }
}

/// All margins at a fixed `m` against the log-threshold `t` (`ln(1/eps)` for
/// the checks, `ln q` for schedule levels).
fn settle(margin: f64, terms: &[f64]) -> f64 {
    let scale = 1.0
        + terms
            .iter()
            .map(|x| x.abs())
            .filter(|x| x.is_finite())
            .sum::<f64>();
    if margin.abs() <= 64.0 * f64::EPSILON * scale {
        0.0
    } else {
        margin
    }
}

fn margins_at(family: &ShiftFamily, regime: Regime, m: u64, q: u64, t: f64) -> Result<Vec<Margin>> {
    let domain = family.domain();
    let members = family.members();
    let log_m = match regime {
        Regime::Cesaro => (m as f64).ln(),
        Regime::Plain => 0.0,
    };
    let mi = m as i64;
    let mut out = Vec::new();
    for j in offsets(domain, q) {
        for (li, ml) in members.iter().enumerate() {
            let l = li + 1;
            let rl = ml.exponent() as i64;
            let wl = ml.weights();
            let fwd = wl.log_window(j + 1, j + rl * mi)?.logmag();
            out.push(Margin {
                key: MarginKey {
                    condition: Condition::Forward,
                    j,
                    l,
                    s: None,
                },
                margin: settle((fwd - log_m) - t, &[fwd, log_m, t]),
            });
            if domain == IndexDomain::Bilateral {
                let bwd = wl.log_window(j - rl * mi + 1, j)?.logmag();
                out.push(Margin {
                    key: MarginKey {
                        condition: Condition::Backward,
                        j,
                        l,
                        s: None,
                    },
                    margin: settle(-t - (bwd - log_m), &[bwd, log_m, t]),
                });
            }
            for (si, ms) in members[..li].iter().enumerate() {
                let s = si + 1;
                let rs = ms.exponent() as i64;
                let ws = ms.weights();
                let cross = ws.log_window(j + (rl - rs) * mi + 1, j + rl * mi)?.logmag();
                out.push(Margin {
                    key: MarginKey {
                        condition: Condition::CrossForward,
                        j,
                        l,
                        s: Some(s),
                    },
                    margin: settle((fwd - cross) - t, &[fwd, cross, t]),
                });
                if domain == IndexDomain::Bilateral {
                    let num = wl.log_window(j + (rs - rl) * mi + 1, j + rs * mi)?.logmag();
                    let den = ws.log_window(j + 1, j + rs * mi)?.logmag();
                    out.push(Margin {
                        key: MarginKey {
                            condition: Condition::CrossBackward,
                            j,
                            l,
                            s: Some(s),
                        },
                        margin: settle(-t - (num - den), &[num, den, t]),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn most_violated(margins: &[Margin]) -> Option<Margin> {
    margins
        .iter()
        .copied()
        .filter(|m| m.margin.is_nan() || m.margin <= 0.0)
        .min_by(|a, b| a.margin.total_cmp(&b.margin))
}

fn scan(query: &CriterionQuery, regime: Regime) -> Result<CriterionReport> {
    let t = -query.epsilon.ln();
    let family = &query.family;
    let mut report = CriterionReport {
        status: SearchStatus::NotFoundUpTo { m_max: query.m_max },
        margins: Vec::new(),
        blocking: Vec::new(),
        family_kind: family.domain(),
    };
    scan_ordered(
        1,
        query.m_max,
        |m| margins_at(family, regime, m, query.q, t),
        |m, margins| match most_violated(&margins) {
            None => {
                report.status = SearchStatus::Found { m };
                report.margins = margins;
                ControlFlow::Break(())
            }
            Some(worst) => {
                report.blocking.push(Blocking {
                    m,
                    key: worst.key,
                    margin: worst.margin,
                });
                if m == query.m_max {
                    report.margins = margins;
                }
                ControlFlow::Continue(())
            }
        },
    )?;
    Ok(report)
}

/// Scans `m = 1..=m_max` for the first `m` satisfying the unilateral
/// conditions (`forward` and `cross_forward`) for all `0 <= j <= q`.
pub fn check_unilateral(query: &CriterionQuery) -> Result<CriterionReport> {
    IndexDomain::Unilateral.ensure(query.family.domain())?;
    scan(query, Regime::Cesaro)
}

/// Scans `m = 1..=m_max` for the first `m` satisfying all four bilateral
/// condition families for all `|j| <= q`. With one member only `forward`
/// and `backward` apply.
pub fn check_bilateral(query: &CriterionQuery) -> Result<CriterionReport> {
    IndexDomain::Bilateral.ensure(query.family.domain())?;
    scan(query, Regime::Cesaro)
}

/// Hypercyclicity comparison for a single bilateral shift: the same
/// forward/backward windows as [`check_bilateral`] without the `1/m` factor.
/// This is not part of the Cesàro theory; it only contrasts the two notions.
pub fn check_salas_comparison(query: &CriterionQuery) -> Result<CriterionReport> {
    if query.family.len() != 1 {
        return Err(Error::input(
            "the hypercyclicity comparison takes exactly one shift (N = 1)",
        ));
    }
    IndexDomain::Bilateral.ensure(query.family.domain())?;
    scan(query, Regime::Plain)
}

/// Margins of the level-`q` inequalities at schedule value `n`
/// (thresholds `q` and `1/q` in place of `1/eps` and `eps`).
pub fn level_margins(family: &ShiftFamily, q: u64, n: u64) -> Result<Vec<Margin>> {
    if q == 0 || n == 0 {
        return Err(Error::input("schedule levels and values start at 1"));
    }
    margins_at(family, Regime::Cesaro, n, q, (q as f64).ln())
}

/// For `q = 1..=q_max`, picks the least `n_q > n_{q-1}` (at most
/// `m_search_cap`) satisfying the level-`q` inequalities. Hitting the cap
/// yields [`Error::ScheduleIncomplete`] carrying the partial schedule.
pub fn build_schedule(
    family: &ShiftFamily,
    q_max: u64,
    m_search_cap: u64,
) -> Result<WitnessSchedule> {
    if q_max == 0 {
        return Err(Error::input("q_max must be at least 1"));
    }
    if m_search_cap == 0 {
        return Err(Error::input("m_search_cap must be at least 1"));
    }
    let mut schedule = WitnessSchedule::default();
    let mut prev = 0u64;
    for q in 1..=q_max {
        let t = (q as f64).ln();
        let mut found = None;
        if prev < m_search_cap {
            scan_ordered(
                prev + 1,
                m_search_cap,
                |n| margins_at(family, Regime::Cesaro, n, q, t),
                |n, margins| {
                    if most_violated(&margins).is_none() {
                        found = Some(n);
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                },
            )?;
        }
        match found {
            Some(n) => {
                schedule.entries.push(ScheduleEntry { q, n });
                prev = n;
            }
            None => {
                return Err(Error::ScheduleIncomplete {
                    q,
                    partial: schedule,
                })
            }
        }
    }
    Ok(schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::ShiftOperator;
    use crate::weights::{WeightPiece, WeightRule, WeightSequence};

    const U: IndexDomain = IndexDomain::Unilateral;
    const B: IndexDomain = IndexDomain::Bilateral;

    fn two_piece(neg: f64, split: i64, pos: f64) -> ShiftFamily {
        let w = WeightSequence::new(
            B,
            vec![
                WeightPiece::new(None, Some(split), WeightRule::constant(neg)),
                WeightPiece::new(Some(split + 1), None, WeightRule::constant(pos)),
            ],
            Some(neg.max(pos)),
            1e-12,
        )
        .unwrap();
        ShiftFamily::new(vec![ShiftOperator::new(w, 1).unwrap()]).unwrap()
    }

    fn one_then_two() -> ShiftFamily {
        two_piece(1.0, 0, 2.0)
    }

    fn two_then_half() -> ShiftFamily {
        two_piece(2.0, -1, 0.5)
    }

    fn rising_powers(n: usize) -> ShiftFamily {
        let spec: Vec<(f64, u64)> = (1..=n).map(|l| (l as f64 + 1.0, l as u64)).collect();
        ShiftFamily::constant(U, &spec).unwrap()
    }

    #[test]
    fn rising_powers_found_within_ten() {
        let r =
            check_unilateral(&CriterionQuery::new(rising_powers(2), 0.1, 1, 50).unwrap()).unwrap();
        let SearchStatus::Found { m } = r.status else {
            panic!("expected Found, got {:?}", r.status)
        };
        assert!(m <= 10);
        assert!(r.margins.iter().all(|m| m.margin > 0.0));
        // j in {0, 1}; l = 1, 2 forward plus one cross pair
        assert_eq!(r.margins.len(), 2 * 3);
        assert_eq!(r.blocking.len() as u64, m - 1);
        // 2^m / m > 10 first holds at m = 6 (64/6); l = 2 needs 3^{2m}/m > 10 (m = 2)
        assert_eq!(m, 6);
    }

    #[test]
    fn unweighted_shift_never_found() {
        let f = ShiftFamily::constant(U, &[(1.0, 1)]).unwrap();
        let r = check_unilateral(&CriterionQuery::new(f, 0.5, 0, 100).unwrap()).unwrap();
        assert_eq!(r.status, SearchStatus::NotFoundUpTo { m_max: 100 });
        assert_eq!(r.blocking.len(), 100);
        assert!(r.blocking.iter().all(|b| b.margin <= 0.0));
        assert!(!r.margins.is_empty());
    }

    #[test]
    fn ratio_at_m5_matches_hand_value() {
        let margins = margins_at(&rising_powers(2), Regime::Cesaro, 5, 0, -(0.1f64).ln()).unwrap();
        let cross = margins
            .iter()
            .find(|m| m.key.condition == Condition::CrossForward)
            .unwrap();
        // 3^10 / 2^5 = 1845.28125
        assert!((cross.margin - ((59049.0f64 / 32.0).ln() - 10f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn bilateral_dichotomy() {
        let r = check_bilateral(&CriterionQuery::new(one_then_two(), 0.2, 1, 30).unwrap()).unwrap();
        let SearchStatus::Found { m } = r.status else {
            panic!()
        };
        assert!(m <= 20);
        // backward window at j = 1 contains a_1 = 2: 2/m < 0.2 needs m >= 11
        assert_eq!(m, 11);
        let r = check_bilateral(&CriterionQuery::new(two_then_half(), 0.2, 0, 100).unwrap()).unwrap();
        assert_eq!(r.status, SearchStatus::NotFoundUpTo { m_max: 100 });
    }

    #[test]
    fn wrong_domain_rejected() {
        let q = CriterionQuery::new(one_then_two(), 0.2, 1, 30).unwrap();
        assert!(matches!(
            check_unilateral(&q),
            Err(Error::DomainMismatch { .. })
        ));
        let q = CriterionQuery::new(rising_powers(2), 0.2, 1, 30).unwrap();
        assert!(matches!(
            check_bilateral(&q),
            Err(Error::DomainMismatch { .. })
        ));
    }

    #[test]
    fn query_validation() {
        assert!(CriterionQuery::new(rising_powers(2), 0.1, 1, 0).is_err());
        assert!(CriterionQuery::new(rising_powers(2), 0.0, 1, 5).is_err());
        assert!(CriterionQuery::new(rising_powers(2), f64::NAN, 1, 5).is_err());
    }

    #[test]
    fn plain_comparison() {
        let r = check_salas_comparison(&CriterionQuery::new(one_then_two(), 0.5, 0, 100).unwrap())
            .unwrap();
        assert_eq!(r.status, SearchStatus::NotFoundUpTo { m_max: 100 });
        assert!(r
            .blocking
            .iter()
            .all(|b| b.key.condition == Condition::Backward));

        let two = ShiftFamily::constant(B, &[(2.0, 1), (3.0, 2)]).unwrap();
        assert!(matches!(
            check_salas_comparison(&CriterionQuery::new(two, 0.5, 0, 10).unwrap()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn schedule_examples() {
        let s = build_schedule(&rising_powers(2), 2, 100).unwrap();
        assert_eq!(
            s.entries,
            vec![ScheduleEntry { q: 1, n: 1 }, ScheduleEntry { q: 2, n: 3 }]
        );
        let ones = ShiftFamily::constant(U, &[(1.0, 1)]).unwrap();
        match build_schedule(&ones, 3, 100) {
            Err(Error::ScheduleIncomplete { q, partial }) => {
                assert_eq!(q, 1);
                assert!(partial.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(build_schedule(&rising_powers(2), 0, 10).is_err());
    }

    #[test]
    fn schedule_cap_reports_partial() {
        match build_schedule(&rising_powers(2), 50, 10) {
            Err(Error::ScheduleIncomplete { q, partial }) => {
                assert!(q > 1);
                assert_eq!(partial.len() as u64, q - 1);
                assert!(partial.values().all(|n| n <= 10));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bilateral_schedule() {
        let s = build_schedule(&one_then_two(), 4, 1000).unwrap();
        let v: Vec<u64> = s.values().collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        for e in &s.entries {
            assert!(level_margins(&one_then_two(), e.q, e.n)
                .unwrap()
                .iter()
                .all(|m| m.margin > 0.0));
        }
    }

    #[test]
    fn explicit_schedule_validation() {
        assert!(WitnessSchedule::from_values(&[1, 3, 4]).is_ok());
        assert!(WitnessSchedule::from_values(&[1, 1]).is_err());
        assert!(WitnessSchedule::from_values(&[0, 2]).is_err());
    }
}
