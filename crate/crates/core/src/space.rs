//! Finitely supported vectors over `N` or `Z` with `l^p` and sup norms.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexDomain {
    /// Indices `0, 1, 2, ...`.
    Unilateral,
    /// All integers.
    Bilateral,
}

impl IndexDomain {
    pub fn contains(self, index: i64) -> bool {
        match self {
            IndexDomain::Unilateral => index >= 0,
            IndexDomain::Bilateral => true,
        }
    }

    pub(crate) fn ensure(self, other: IndexDomain) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DomainMismatch {
                expected: self,
                found: other,
            })
        }
    }
}

impl fmt::Display for IndexDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexDomain::Unilateral => f.write_str("unilateral"),
            IndexDomain::Bilateral => f.write_str("bilateral"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    /// `l^p` with `1 <= p < inf`.
    Lp(f64),
    /// Sup norm; the ambient space is `c_0`.
    Sup,
}

impl Norm {
    fn validate(self) -> Result<Self> {
        match self {
            Norm::Lp(p) if !(p.is_finite() && p >= 1.0) => Err(Error::input(format!(
                "l^p exponent must satisfy 1 <= p < inf, got {p}"
            ))),
            n => Ok(n),
        }
    }

    /// Norm of a finite list of magnitudes. Lp sums are rescaled by the
    /// largest magnitude so that huge or tiny entries do not over/underflow.
    pub(crate) fn of_magnitudes(self, mags: impl Iterator<Item = f64> + Clone) -> f64 {
        let big = mags.clone().fold(0.0_f64, f64::max);
        if big == 0.0 {
            return 0.0;
        }
        match self {
            Norm::Sup => big,
            Norm::Lp(1.0) => mags.sum(),
            Norm::Lp(p) => {
                let s: f64 = mags.map(|m| (m / big).powf(p)).sum();
                big * s.powf(1.0 / p)
            }
        }
    }
}

/// The ambient space: a norm together with an index domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceSpecRaw")]
pub struct SpaceSpec {
    norm: Norm,
    domain: IndexDomain,
}

#[derive(Deserialize)]
struct SpaceSpecRaw {
    norm: Norm,
    domain: IndexDomain,
}

impl TryFrom<SpaceSpecRaw> for SpaceSpec {
    type Error = Error;

    fn try_from(raw: SpaceSpecRaw) -> Result<Self> {
        SpaceSpec::new(raw.norm, raw.domain)
    }
}

impl SpaceSpec {
    pub fn new(norm: Norm, domain: IndexDomain) -> Result<Self> {
        Ok(Self {
            norm: norm.validate()?,
            domain,
        })
    }

    pub fn lp(p: f64, domain: IndexDomain) -> Result<Self> {
        Self::new(Norm::Lp(p), domain)
    }

    pub fn sup(domain: IndexDomain) -> Self {
        Self {
            norm: Norm::Sup,
            domain,
        }
    }

    pub fn norm_kind(&self) -> Norm {
        self.norm
    }

    pub fn domain(&self) -> IndexDomain {
        self.domain
    }
}

/// A finitely supported complex sequence. No stored entry is exactly zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeqVectorRaw", into = "SeqVectorRaw")]
pub struct SeqVector {
    domain: IndexDomain,
    entries: BTreeMap<i64, Complex64>,
}

#[derive(Serialize, Deserialize)]
struct SeqVectorRaw {
    domain: IndexDomain,
    entries: Vec<(i64, [f64; 2])>,
}

impl From<SeqVector> for SeqVectorRaw {
    fn from(v: SeqVector) -> Self {
        SeqVectorRaw {
            domain: v.domain,
            entries: v.entries.iter().map(|(&k, z)| (k, [z.re, z.im])).collect(),
        }
    }
}

impl TryFrom<SeqVectorRaw> for SeqVector {
    type Error = Error;

    fn try_from(raw: SeqVectorRaw) -> Result<Self> {
        SeqVector::from_entries(
            raw.domain,
            raw.entries
                .into_iter()
                .map(|(k, [re, im])| (k, Complex64::new(re, im))),
        )
    }
}

fn is_zero(z: Complex64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

impl SeqVector {
    pub fn zero(domain: IndexDomain) -> Self {
        Self {
            domain,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a vector from `(index, value)` pairs. Exact zeros are dropped;
    /// repeated indices are rejected.
    pub fn from_entries(
        domain: IndexDomain,
        entries: impl IntoIterator<Item = (i64, Complex64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, z) in entries {
            if !domain.contains(k) {
                return Err(Error::OutOfDomain { index: k, domain });
            }
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::input(format!("entry at index {k} is not finite")));
            }
            if map.insert(k, z).is_some() {
                return Err(Error::input(format!("duplicate index {k}")));
            }
        }
        map.retain(|_, z| !is_zero(*z));
        Ok(Self {
            domain,
            entries: map,
        })
    }

    pub fn from_real_entries(
        domain: IndexDomain,
        entries: impl IntoIterator<Item = (i64, f64)>,
    ) -> Result<Self> {
        Self::from_entries(
            domain,
            entries
                .into_iter()
                .map(|(k, x)| (k, Complex64::new(x, 0.0))),
        )
    }

    /// The basis vector `e_k`.
    pub fn basis(domain: IndexDomain, k: i64) -> Result<Self> {
        Self::from_real_entries(domain, [(k, 1.0)])
    }

    /// Assembles a vector from entries already known to lie in `domain`.
    /// Zeros are dropped; repeated indices are summed.
    pub(crate) fn collect(
        domain: IndexDomain,
        entries: impl IntoIterator<Item = (i64, Complex64)>,
    ) -> Self {
        let mut map: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (k, z) in entries {
            debug_assert!(domain.contains(k));
            *map.entry(k).or_insert(Complex64::new(0.0, 0.0)) += z;
        }
        map.retain(|_, z| !is_zero(*z));
        Self {
            domain,
            entries: map,
        }
    }

    pub fn domain(&self) -> IndexDomain {
        self.domain
    }

    pub fn get(&self, k: i64) -> Complex64 {
        self.entries
            .get(&k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.entries.iter().map(|(&k, &z)| (k, z))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    pub fn min_index(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn norm(&self, space: &SpaceSpec) -> Result<f64> {
        space.domain.ensure(self.domain)?;
        Ok(self.norm_unchecked(space.norm))
    }

    pub(crate) fn norm_unchecked(&self, norm: Norm) -> f64 {
        norm.of_magnitudes(self.entries.values().map(|z| z.norm()))
    }

    /// `alpha * u + beta * v`.
    pub fn combine(
        alpha: Complex64,
        u: &SeqVector,
        beta: Complex64,
        v: &SeqVector,
    ) -> Result<SeqVector> {
        u.domain.ensure(v.domain)?;
        let mut map: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (k, z) in u.iter() {
            map.insert(k, alpha * z);
        }
        for (k, z) in v.iter() {
            let e = map.entry(k).or_insert(Complex64::new(0.0, 0.0));
            *e += beta * z;
        }
        map.retain(|_, z| !is_zero(*z));
        Ok(SeqVector {
            domain: u.domain,
            entries: map,
        })
    }

    pub fn add(&self, other: &SeqVector) -> Result<SeqVector> {
        let one = Complex64::new(1.0, 0.0);
        Self::combine(one, self, one, other)
    }

    pub fn sub(&self, other: &SeqVector) -> Result<SeqVector> {
        Self::combine(
            Complex64::new(1.0, 0.0),
            self,
            Complex64::new(-1.0, 0.0),
            other,
        )
    }

    pub fn scale(&self, alpha: Complex64) -> SeqVector {
        Self::collect(self.domain, self.iter().map(|(k, z)| (k, alpha * z)))
    }

    /// Divides every entry by the real `d`.
    pub fn div_real(&self, d: f64) -> SeqVector {
        Self::collect(self.domain, self.iter().map(|(k, z)| (k, z / d)))
    }

    /// Keeps the entries whose index satisfies `keep`.
    pub fn restrict(&self, keep: impl Fn(i64) -> bool) -> SeqVector {
        SeqVector {
            domain: self.domain,
            entries: self
                .entries
                .iter()
                .filter(|(&k, _)| keep(k))
                .map(|(&k, &z)| (k, z))
                .collect(),
        }
    }
}
