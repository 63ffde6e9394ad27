//! Windows, the agreement ultrametric, copies of balls and finite-radius
//! repetitivity and periodicity checks.

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ball, word_norm, Dirs, GridView, Pattern, Raster, Vertex, ORIGIN};

/// A pattern based at the origin that is exactly the intrinsic ball of
/// `radius` about the origin. Vertices at distance `radius` may have lost
/// edges leading outward; every other vertex carries its full neighbourhood.
#[derive(Debug)]
pub struct Window {
    pattern: Pattern,
    radius: u32,
    index: OnceLock<WindowIndex>,
}

#[derive(Debug)]
struct WindowIndex {
    raster: Raster,
    order: Vec<(Vertex, u32)>,
    dist: HashMap<Vertex, u32>,
}

impl Clone for Window {
    fn clone(&self) -> Self {
        Window { pattern: self.pattern.clone(), radius: self.radius, index: OnceLock::new() }
    }
}

impl PartialEq for Window {
    fn eq(&self, o: &Self) -> bool {
        self.radius == o.radius && self.pattern == o.pattern
    }
}

impl Eq for Window {}

impl Window {
    pub fn new(pattern: Pattern, radius: u32) -> Result<Window> {
        if pattern.basepoint() != ORIGIN {
            return Err(Error::InvalidWindow("basepoint must be the origin".into()));
        }
        if pattern.intrinsic_ball(ORIGIN, radius)? != pattern {
            return Err(Error::InvalidWindow(format!("pattern is not the ball of radius {radius}")));
        }
        Ok(Window::from_ball_unchecked(pattern, radius))
    }

    pub(crate) fn from_ball_unchecked(pattern: Pattern, radius: u32) -> Window {
        debug_assert_eq!(pattern.basepoint(), ORIGIN);
        Window { pattern, radius, index: OnceLock::new() }
    }

    /// Recentres at the basepoint and takes its eccentricity as the radius.
    pub fn from_pattern(p: &Pattern) -> Window {
        let q = p.recenter(p.basepoint()).expect("basepoint is a vertex");
        let radius = q.eccentricity(ORIGIN).expect("origin is a vertex");
        Window::from_ball_unchecked(q, radius)
    }

    /// The ball of radius `r` about `center` in `host`, moved so that
    /// `center` is the origin.
    pub fn cut<G: GridView + ?Sized>(host: &G, center: Vertex, r: u32) -> Result<Window> {
        if !host.has_vertex(center) {
            return Err(Error::VertexNotInPattern(center));
        }
        let b = ball(host, center, r).recenter(center)?;
        Ok(Window::from_ball_unchecked(b, r))
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn into_pattern(self) -> Pattern {
        self.pattern
    }

    fn index(&self) -> &WindowIndex {
        self.index.get_or_init(|| {
            let raster = Raster::from_pattern(&self.pattern);
            let order = raster.bfs(ORIGIN, u32::MAX);
            let dist = order.iter().copied().collect();
            WindowIndex { raster, order, dist }
        })
    }

    pub fn raster(&self) -> &Raster {
        &self.index().raster
    }

    /// Vertices in breadth-first order from the origin with their distances.
    pub fn bfs_order(&self) -> &[(Vertex, u32)] {
        &self.index().order
    }

    pub fn distance(&self, v: Vertex) -> Option<u32> {
        self.index().dist.get(&v).copied()
    }

    /// A smaller ball of this window, still based at the origin.
    pub fn shrink(&self, r: u32) -> Window {
        if r >= self.radius {
            return self.clone();
        }
        let order: Vec<_> = self.bfs_order().iter().copied().take_while(|&(_, d)| d <= r).collect();
        let p = crate::grid::ball_from_order(self.raster(), &order, r, ORIGIN);
        Window::from_ball_unchecked(p, r)
    }

    /// The window re-cut around another vertex. The radius shrinks so that
    /// the result is still a true ball of whatever tree this window was cut
    /// from.
    pub fn recut(&self, center: Vertex) -> Result<Window> {
        let d = self.distance(center).ok_or(Error::VertexNotInPattern(center))?;
        Window::cut(self.raster(), center, self.radius - d)
    }
}

impl GridView for Window {
    fn dirs_at(&self, v: Vertex) -> Option<Dirs> {
        self.raster().dirs_at(v)
    }
}

#[derive(Serialize, Deserialize)]
struct WindowDoc {
    #[serde(flatten)]
    pattern: crate::grid::PatternDoc,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    radius: Option<u32>,
}

impl Window {
    /// JSON document: the canonical pattern fields plus `radius`.
    pub fn to_json(&self) -> String {
        let doc = WindowDoc { pattern: (&self.pattern).into(), radius: Some(self.radius) };
        serde_json::to_string(&doc).expect("window serializes")
    }

    /// Reads a pattern document. The pattern is recentred at its basepoint;
    /// without a `radius` field its eccentricity is used.
    pub fn from_json(text: &str) -> Result<Window> {
        let doc: WindowDoc = serde_json::from_str(text).map_err(|e| Error::InvalidPattern(e.to_string()))?;
        let p = Pattern::try_from(doc.pattern)?;
        let q = p.recenter(p.basepoint())?;
        match doc.radius {
            Some(r) => Window::new(q, r),
            None => Ok(Window::from_pattern(&q)),
        }
    }
}

/// A ball pattern prepared for repeated faithful-copy tests.
///
/// For a ball `P` of radius `r` about the origin and a host `H`,
/// `ball_H(c, r) = P + c` exactly when `P + c ⊆ H` and every vertex of `P` at
/// distance `< r` has in `H` exactly the edges it has in `P`.
#[derive(Clone, Debug)]
pub struct BallProbe {
    entries: Vec<(Vertex, Dirs, bool)>,
    radius: u32,
}

impl BallProbe {
    /// Entries are kept in breadth-first order so mismatches near the centre
    /// are found first.
    pub fn new(w: &Window) -> BallProbe {
        let entries = w
            .bfs_order()
            .iter()
            .map(|&(v, d)| (v, w.pattern.dirs_at(v).expect("vertex of window"), d < w.radius))
            .collect();
        BallProbe { entries, radius: w.radius }
    }

    /// Probe for a pattern based anywhere, treated as a ball of radius `r`
    /// about its basepoint. `None` when the pattern is not such a ball.
    pub fn for_pattern(p: &Pattern, r: u32) -> Option<BallProbe> {
        let b = p.basepoint();
        let q = p.recenter(b).ok()?;
        let w = Window::new(q, r).ok()?;
        Some(BallProbe::new(&w))
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether the ball of the probe's radius about `c` in `host` is exactly
    /// the probe pattern moved to `c`.
    pub fn faithful_at<G: GridView + ?Sized>(&self, host: &G, c: Vertex) -> bool {
        self.entries.iter().all(|&(o, d, interior)| match host.dirs_at(c + o) {
            Some(h) => {
                if interior {
                    h == d
                } else {
                    h.contains(d)
                }
            }
            None => false,
        })
    }

    /// Whether the probe pattern moved to `c` is a subgraph of `host`.
    pub fn contained_at<G: GridView + ?Sized>(&self, host: &G, c: Vertex) -> bool {
        self.entries.iter().all(|&(o, d, _)| host.dirs_at(c + o).is_some_and(|h| h.contains(d)))
    }
}

/// Largest `N` with equal balls of radius `N`, capped at the smaller radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub radius: u32,
    /// The cap was reached, so the true agreement radius may be larger.
    pub exhausted: bool,
}

pub fn agreement_radius(w1: &Window, w2: &Window) -> Agreement {
    let cap = w1.radius.min(w2.radius);
    // Balls of radius N agree iff every vertex at distance < N has the same
    // edges in both windows; vertices below either radius are untruncated.
    let first = w1
        .bfs_order()
        .iter()
        .take_while(|&&(_, d)| d < cap)
        .find(|&&(v, _)| w1.pattern.dirs_at(v) != w2.dirs_at(v))
        .map(|&(_, d)| d);
    match first {
        Some(d) => Agreement { radius: d, exhausted: false },
        None => Agreement { radius: cap, exhausted: true },
    }
}

/// The distance `e^(-exponent)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GhDistance {
    pub exponent: u32,
    /// The windows agree up to their common radius, so the true distance is
    /// at most the reported value.
    pub upper_bound: bool,
}

impl GhDistance {
    pub fn value(&self) -> f64 {
        (-(self.exponent as f64)).exp()
    }
}

pub fn gh_distance(w1: &Window, w2: &Window) -> GhDistance {
    let a = agreement_radius(w1, w2);
    GhDistance { exponent: a.radius, upper_bound: a.exhausted }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopyMode {
    /// `P + g ⊆ H`.
    Containment,
    /// `P` is the ball of this radius about its basepoint and the ball of the
    /// same radius about `g + basepoint` in `H` is exactly `P + g`.
    Faithful(u32),
}

impl CopyMode {
    /// Faithful with the eccentricity of the basepoint as the radius.
    pub fn faithful_for(p: &Pattern) -> CopyMode {
        CopyMode::Faithful(p.eccentricity(p.basepoint()).expect("basepoint is a vertex"))
    }
}

/// Translation vectors `g` carrying `p` onto a copy in `host`, sorted.
/// In faithful mode, a pattern that is not its own ball of the given radius
/// has no copies.
pub fn find_copies(p: &Pattern, host: &Pattern, mode: CopyMode) -> Vec<Vertex> {
    let raster = Raster::from_pattern(host);
    let r = match mode {
        CopyMode::Containment => p.eccentricity(p.basepoint()).expect("basepoint is a vertex"),
        CopyMode::Faithful(r) => r,
    };
    let Some(probe) = BallProbe::for_pattern(p, r) else {
        return Vec::new();
    };
    let b = p.basepoint();
    let centers: Vec<Vertex> = host.vertices().collect();
    let mut out: Vec<Vertex> = centers
        .par_iter()
        .filter(|&&c| match mode {
            CopyMode::Containment => probe.contained_at(&raster, c),
            CopyMode::Faithful(_) => probe.faithful_at(&raster, c),
        })
        .map(|&c| c - b)
        .collect();
    out.sort();
    out
}

/// Centres `c` of faithful copies of `ball(w, 0, r)` whose ball lies inside
/// the window, so that the copy is certified in the underlying tree.
pub fn certified_occurrences(w: &Window, r: u32) -> Vec<Vertex> {
    let probe = BallProbe::new(&w.shrink(r));
    let raster = w.raster();
    w.bfs_order()
        .par_iter()
        .filter(|&&(c, d)| d + r <= w.radius && probe.faithful_at(raster, c))
        .map(|&(c, _)| c)
        .collect()
}

/// Smallest `R` such that every ball of radius `R` about a vertex within
/// `radius − R` of the origin contains a faithful copy of the ball of radius
/// `r` about the origin.
///
/// Containment of a copy centred at `c` in the ball about `y` is witnessed by
/// `d(y, c) + r ≤ R`.
pub fn repetitivity_radius(w: &Window, r: u32) -> Result<u32> {
    if r >= w.radius && w.radius > 0 {
        return Err(Error::Precondition(format!("r = {r} must be below the window radius {}", w.radius)));
    }
    if r == 0 {
        return Ok(0);
    }
    let occ = certified_occurrences(w, r);
    let nearest = multi_source_distances(w, &occ);
    // worst[k] = max D(y) over y with d(0, y) ≤ k.
    let mut worst = vec![0u32; w.radius as usize + 1];
    for &(y, d) in w.bfs_order() {
        let dy = nearest.get(&y).copied().unwrap_or(u32::MAX);
        let slot = &mut worst[d as usize];
        *slot = (*slot).max(dy);
    }
    for k in 1..worst.len() {
        worst[k] = worst[k].max(worst[k - 1]);
    }
    (r..=w.radius - r)
        .find(|&big| worst[(w.radius - big) as usize].saturating_add(r) <= big)
        .ok_or(Error::NotFoundWithinWindow(w.radius))
}

fn multi_source_distances(w: &Window, sources: &[Vertex]) -> HashMap<Vertex, u32> {
    let raster = w.raster();
    let mut dist: HashMap<Vertex, u32> = sources.iter().map(|&s| (s, 0)).collect();
    let mut queue: VecDeque<Vertex> = sources.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for k in raster.dirs_at(v).unwrap_or(Dirs::EMPTY).iter() {
            let u = v.step(k);
            if !dist.contains_key(&u) {
                dist.insert(u, d + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Whether translation by `v` maps the ball of radius `radius − |v|` about the
/// origin exactly onto the ball of the same radius about `v`.
pub fn periodicity_defect(w: &Window, v: Vertex) -> Result<bool> {
    let n = word_norm(v);
    if n == 0 || 2 * n > w.radius as u64 {
        return Err(Error::Precondition(format!(
            "need 0 < |v| ≤ radius/2, got |v| = {n} with radius {}",
            w.radius
        )));
    }
    if !w.pattern.contains(v) {
        return Ok(false);
    }
    let rho = w.radius - n as u32;
    let raster = w.raster();
    let ok = w
        .bfs_order()
        .iter()
        .take_while(|&&(_, d)| d <= rho)
        .all(|&(u, d)| match raster.dirs_at(u + v) {
            None => false,
            Some(h) => {
                let own = raster.dirs_at(u).expect("vertex of window");
                if d < rho {
                    h == own
                } else {
                    // In the ball, a boundary vertex keeps only its edges back inward.
                    own.iter().filter(|&k| w.distance(u.step(k)).is_some_and(|e| e < d)).all(|k| h.has(k))
                }
            }
        });
    Ok(ok)
}

/// All nonzero vectors with `|v| ≤ n`, sorted.
pub fn vectors_up_to(n: u32) -> Vec<Vertex> {
    let n = n as i64;
    let mut out = Vec::new();
    for x in -n..=n {
        let m = n - x.abs();
        for y in -m..=m {
            if (x, y) != (0, 0) {
                out.push(Vertex::new(x, y));
            }
        }
    }
    out
}

/// Vectors `v` with `|v| ≤ max_norm` for which the window looks periodic.
pub fn periodic_witnesses(w: &Window, max_norm: u32) -> Vec<Vertex> {
    vectors_up_to(max_norm)
        .into_par_iter()
        .filter(|&v| periodicity_defect(w, v).unwrap_or(false))
        .collect()
}
