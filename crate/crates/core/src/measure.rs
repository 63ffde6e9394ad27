//! Occurrence counts and frequencies of patterns in balls of the Kenyon tree,
//! valence statistics, growth and the invariance defect.
//!
//! All reported quantities are exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ghspace::BallProbe;
use crate::grid::{Dirs, GridView, Pattern, Vertex, ORIGIN};
use crate::kenyon::{self, MotifKind};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CountMode {
    /// `P + p` is a subgraph of the tree.
    #[default]
    Containment,
    /// Additionally every vertex of `P` closer to the basepoint than its
    /// eccentricity has exactly the edges it has in `P`.
    Fine,
}

pub fn rational(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(q)
}

pub fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// `V(n)`: the number of vertices of the ball of radius `n` about the origin.
pub fn growth(n: u32) -> Result<u64> {
    let lv = kenyon::level(kenyon::level_for_radius(n as u64))?;
    Ok(lv.order().partition_point(|&(_, d)| d <= n) as u64)
}

/// `A(P, n)`: vertices `p` within distance `n` of the origin with `P + p` in
/// the tree (or a fine copy, per `mode`). `P` must be based at the origin.
pub fn pattern_count(p: &Pattern, n: u32, mode: CountMode) -> Result<u64> {
    if p.basepoint() != ORIGIN {
        return Err(Error::Precondition("pattern must be based at the origin".into()));
    }
    let ecc = p.eccentricity(ORIGIN)?;
    // Every vertex of an occurrence lies within n + ecc of the origin, so the
    // count in this host equals the count in the whole tree.
    let lv = kenyon::level(kenyon::level_for_radius(n as u64 + ecc as u64))?;
    let probe = BallProbe::for_pattern(p, ecc).expect("a pattern is the ball of its eccentricity");
    let raster = lv.raster();
    let cut = lv.order().partition_point(|&(_, d)| d <= n);
    let count = lv.order()[..cut]
        .par_iter()
        .filter(|&&(c, _)| match mode {
            CountMode::Containment => probe.contained_at(raster, c),
            CountMode::Fine => probe.faithful_at(raster, c),
        })
        .count();
    Ok(count as u64)
}

/// `A(P, n) / V(n)`.
pub fn frequency(p: &Pattern, n: u32, mode: CountMode) -> Result<BigRational> {
    Ok(rational(pattern_count(p, n, mode)?, growth(n)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrequencyEntry {
    pub name: String,
    pub pattern: Pattern,
    pub count: u64,
    #[serde(serialize_with = "ser_rational")]
    pub frequency: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrequencyTable {
    pub radius: u32,
    pub volume: u64,
    pub entries: Vec<FrequencyEntry>,
}

pub fn frequency_table(patterns: &[(String, Pattern)], n: u32, mode: CountMode) -> Result<FrequencyTable> {
    let volume = growth(n)?;
    let entries = patterns
        .iter()
        .map(|(name, p)| {
            let count = pattern_count(p, n, mode)?;
            Ok(FrequencyEntry { name: name.clone(), pattern: p.clone(), count, frequency: rational(count, volume) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrequencyTable { radius: n, volume, entries })
}

/// Fractions of vertices of the ball of radius `n` with valence 1, 2, 3, 4,
/// valence being taken inside the ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValenceHistogram {
    pub radius: u32,
    pub volume: u64,
    pub counts: [u64; 4],
    #[serde(serialize_with = "ser_rationals")]
    pub fractions: [BigRational; 4],
}

fn ser_rationals<S: Serializer>(qs: &[BigRational; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
    v.serialize(s)
}

pub fn valence_histogram(n: u32) -> Result<ValenceHistogram> {
    let lv = kenyon::level(kenyon::level_for_radius(n as u64))?;
    let cut = lv.order().partition_point(|&(_, d)| d <= n);
    let raster = lv.raster();
    let mut counts = [0u64; 4];
    for &(u, d) in &lv.order()[..cut] {
        let dirs = raster.dirs_at(u).unwrap_or(Dirs::EMPTY);
        let val = if d < n {
            dirs.count()
        } else {
            // On the boundary sphere only edges back inward remain; the tree
            // has exactly one.
            u8::from(n > 0)
        };
        if val > 0 {
            counts[val as usize - 1] += 1;
        }
    }
    let volume = cut as u64;
    let fractions = counts.map(|c| rational(c, volume));
    Ok(ValenceHistogram { radius: n, volume, counts, fractions })
}

/// Frequencies of the seven level-0 cell kinds among vertices of the ball of
/// radius `n`, in the order A0 A1 A2 A3 B0 B1 C. Kinds are read from the
/// tree, not from the truncated ball.
pub fn cell_frequencies(n: u32) -> Result<[BigRational; 7]> {
    let lv = kenyon::level(kenyon::level_for_radius(n as u64 + 1))?;
    let cut = lv.order().partition_point(|&(_, d)| d <= n);
    let mut counts = [0u64; 7];
    for &(u, _) in &lv.order()[..cut] {
        let dirs = lv.raster().dirs_at(u).unwrap_or(Dirs::EMPTY);
        let kind = MotifKind::from_protrusions(dirs)
            .ok_or_else(|| Error::NotInHull(format!("vertex {u} has edge set {:04b}", dirs.bits())))?;
        counts[kind.index()] += 1;
    }
    Ok(counts.map(|c| rational(c, cut as u64)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceDefect {
    #[serde(serialize_with = "ser_rational")]
    pub defect: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub bound: BigRational,
    /// Intrinsic distance from the basepoint to the shift inside `P`.
    pub shift_radius: u32,
}

impl InvarianceDefect {
    pub fn holds(&self) -> bool {
        self.defect <= self.bound
    }
}

/// `|μ_n(P re-based at v) − μ_n(P)|` against `(V(n+r) − V(n−r)) / V(n)`.
///
/// Every occurrence of `P` at `p` is an occurrence of the re-based pattern
/// at `p + v`, and `p + v` lies within `r = d_P(0, v)` of `p`, so the two
/// counts differ by at most the number of vertices in the annulus between
/// radii `n − r` and `n + r`.
pub fn invariance_defect(p: &Pattern, v: Vertex, n: u32) -> Result<InvarianceDefect> {
    let dist = p.distances_from(ORIGIN)?;
    let r = *dist.get(&v).ok_or(Error::VertexNotInPattern(v))?;
    if r >= n {
        return Err(Error::Precondition(format!("shift radius {r} must be below n = {n}")));
    }
    let shifted = p.recenter(v)?;
    let a = pattern_count(p, n, CountMode::Containment)?;
    let b = pattern_count(&shifted, n, CountMode::Containment)?;
    let vol = growth(n)?;
    let defect = BigRational::new(BigInt::from(a) - BigInt::from(b), BigInt::from(vol)).abs();
    let bound = rational(growth(n + r)? - growth(n - r)?, vol);
    Ok(InvarianceDefect { defect, bound, shift_radius: r })
}

/// Convenience for the zero rational.
pub fn zero() -> BigRational {
    BigRational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kenyon::{motif, MotifId};

    fn q(a: u64, b: u64) -> BigRational {
        rational(a, b)
    }

    #[test]
    fn growth_matches_ball_sizes() {
        assert_eq!(growth(0).unwrap(), 1);
        assert_eq!(growth(1).unwrap(), 5);
        assert_eq!(growth(2).unwrap(), 9);
        for k in 1..=7u32 {
            assert_eq!(growth((1 << k) - 1).unwrap(), (4u64.pow(k + 1) - 1) / 3);
        }
    }

    #[test]
    fn single_vertex_has_frequency_one() {
        let pt = Pattern::point(ORIGIN);
        for n in [0, 3, 10, 31] {
            assert_eq!(frequency(&pt, n, CountMode::Containment).unwrap(), q(1, 1));
        }
    }

    #[test]
    fn star_count_is_junction_count() {
        let star = Pattern::star(ORIGIN);
        for k in 1..=6u32 {
            let n = (1 << k) - 1;
            assert_eq!(pattern_count(&star, n, CountMode::Containment).unwrap(), (4u64.pow(k) - 1) / 3);
        }
    }

    #[test]
    fn histogram_small_levels() {
        let h = valence_histogram(1).unwrap();
        assert_eq!(h.fractions, [q(4, 5), q(0, 1), q(0, 1), q(1, 5)]);
        let h = valence_histogram(7).unwrap();
        assert_eq!(h.fractions, [q(44, 85), q(20, 85), q(0, 1), q(21, 85)]);
    }

    #[test]
    fn fine_counts_never_exceed_containment() {
        for kind in MotifKind::ALL {
            let m = motif(MotifId::new(0, kind)).unwrap();
            let c = pattern_count(&m, 31, CountMode::Containment).unwrap();
            let f = pattern_count(&m, 31, CountMode::Fine).unwrap();
            assert!(f <= c);
        }
    }

    #[test]
    fn origin_shift_has_no_defect() {
        let a = motif(MotifId::new(0, MotifKind::A(0))).unwrap();
        let d = invariance_defect(&a, ORIGIN, 15).unwrap();
        assert!(d.defect.is_zero());
        assert!(d.holds());
        assert!(invariance_defect(&a, Vertex::new(5, 5), 15).is_err());
    }

    #[test]
    fn cell_frequencies_sum_to_one() {
        let f = cell_frequencies(63).unwrap();
        let total = f.iter().fold(zero(), |acc, x| acc + x);
        assert_eq!(total, q(1, 1));
    }
}
