//! Finite zero sets in the upper half-plane and the functionals on them.

use serde::{Deserialize, Serialize};

use crate::domain::{ensure_finite, ComplexPoint, SeparationParams};
use crate::error::{Error, Result};
use crate::summation::CompensatedSum;

/// A zero with its multiplicity. JSON form: `{"re": .., "im": .., "mult": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawZero", into = "RawZero")]
pub struct ZeroEntry {
    pub position: ComplexPoint,
    pub multiplicity: u128,
}

#[derive(Serialize, Deserialize)]
struct RawZero {
    re: f64,
    im: f64,
    mult: u128,
}

impl From<RawZero> for ZeroEntry {
    fn from(r: RawZero) -> Self {
        ZeroEntry::new(ComplexPoint::new(r.re, r.im), r.mult)
    }
}

impl From<ZeroEntry> for RawZero {
    fn from(e: ZeroEntry) -> Self {
        RawZero { re: e.position.re, im: e.position.im, mult: e.multiplicity }
    }
}

impl ZeroEntry {
    pub fn new(position: ComplexPoint, multiplicity: u128) -> Self {
        ZeroEntry { position, multiplicity }
    }
}

/// A finite multiset of points of the open upper half-plane.
///
/// Serialized as a JSON array of `{"re", "im", "mult"}` objects; deserialization
/// goes through [`make_zero_set`], so every instance is valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ZeroEntry>", into = "Vec<ZeroEntry>")]
pub struct ZeroSet {
    entries: Vec<ZeroEntry>,
}

impl TryFrom<Vec<ZeroEntry>> for ZeroSet {
    type Error = Error;

    fn try_from(raw: Vec<ZeroEntry>) -> Result<Self> {
        make_zero_set(raw.into_iter().map(|e| (e.position, e.multiplicity)))
    }
}

impl From<ZeroSet> for Vec<ZeroEntry> {
    fn from(zs: ZeroSet) -> Self {
        zs.entries
    }
}

impl ZeroSet {
    pub fn empty() -> Self {
        ZeroSet::default()
    }

    pub fn entries(&self) -> &[ZeroEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total count with multiplicity.
    pub fn total_multiplicity(&self) -> u128 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn max_multiplicity(&self) -> u128 {
        self.entries.iter().map(|e| e.multiplicity).max().unwrap_or(0)
    }

    /// Multiset union; shared positions have their multiplicities added.
    pub fn union(&self, other: &ZeroSet) -> ZeroSet {
        let raw = self.entries.iter().chain(other.entries.iter()).map(|e| (e.position, e.multiplicity));
        make_zero_set(raw).expect("union of valid zero sets is valid")
    }
}

/// Validates raw `(position, multiplicity)` pairs. Repeated positions are
/// merged by summing multiplicities; first-occurrence order is kept.
pub fn make_zero_set<I>(raw: I) -> Result<ZeroSet>
where
    I: IntoIterator<Item = (ComplexPoint, u128)>,
{
    let mut entries: Vec<ZeroEntry> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for (z, mult) in raw {
        ensure_finite(z, "zero position")?;
        if z.im <= 0.0 {
            return Err(Error::NotInUpperHalfPlane { re: z.re, im: z.im });
        }
        if mult == 0 {
            return Err(Error::invalid(format!("multiplicity of zero {z} must be positive")));
        }
        // -0.0 and 0.0 are the same point
        let key = ((z.re + 0.0).to_bits(), z.im.to_bits());
        match index.get(&key) {
            Some(&i) => {
                let e: &mut ZeroEntry = &mut entries[i];
                e.multiplicity = e
                    .multiplicity
                    .checked_add(mult)
                    .ok_or_else(|| Error::invalid("multiplicity overflow"))?;
            }
            None => {
                index.insert(key, entries.len());
                entries.push(ZeroEntry::new(z, mult));
            }
        }
    }
    Ok(ZeroSet { entries })
}

/// `sum mult * Im l / (1 + |l|^2)`.
pub fn blaschke_condition(zs: &ZeroSet) -> f64 {
    zs.entries
        .iter()
        .map(|e| {
            let z = e.position;
            e.multiplicity as f64 * z.im / (1.0 + z.norm_sqr())
        })
        .collect::<CompensatedSum>()
        .value()
}

/// An unordered pair of sector zeros closer than the separation law allows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationViolation {
    pub first: ComplexPoint,
    pub second: ComplexPoint,
    pub distance: f64,
    pub threshold: f64,
}

/// Every pair `{l, m}` of distinct sector zeros (`Im <= k |Re|`) with
/// `|l - m| < c (|l| + |m|)^{-1/4}`, ordered by ascending `distance / threshold`.
pub fn check_separation(zs: &ZeroSet, p: &SeparationParams) -> Vec<SeparationViolation> {
    let mut sector: Vec<ComplexPoint> = zs
        .entries
        .iter()
        .map(|e| e.position)
        .filter(|&z| p.in_sector(z))
        .collect();
    sector.sort_by(|a, b| a.re.total_cmp(&b.re));

    let mut out = Vec::new();
    for (i, &a) in sector.iter().enumerate() {
        // (|a| + |b|)^{-1/4} <= |a|^{-1/4}, so nothing further right can violate.
        let reach = p.c_sep * a.norm().powf(-0.25);
        for &b in &sector[i + 1..] {
            if b.re - a.re >= reach {
                break;
            }
            let distance = (a - b).norm();
            let threshold = p.threshold(a, b);
            if distance < threshold {
                let (first, second) = if (a.re, a.im) <= (b.re, b.im) { (a, b) } else { (b, a) };
                out.push(SeparationViolation { first, second, distance, threshold });
            }
        }
    }
    out.sort_by(|x, y| (x.distance / x.threshold).total_cmp(&(y.distance / y.threshold)));
    out
}

/// Smallest distance between two distinct sector zeros, if there are two.
pub fn min_sector_gap(zs: &ZeroSet, p: &SeparationParams) -> Option<f64> {
    let mut sector: Vec<ComplexPoint> =
        zs.entries.iter().map(|e| e.position).filter(|&z| p.in_sector(z)).collect();
    sector.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut best: Option<f64> = None;
    for (i, &a) in sector.iter().enumerate() {
        for &b in &sector[i + 1..] {
            if let Some(g) = best {
                if b.re - a.re >= g {
                    break;
                }
            }
            let d = (a - b).norm();
            best = Some(best.map_or(d, |g| g.min(d)));
        }
    }
    best
}
