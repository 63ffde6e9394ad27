//! The inflation construction of the Kenyon tree, its balls, the seven basic
//! motifs of each level and their substitution rule.
//!
//! `K_n` denotes the ball of radius `2^n − 1` about the origin of the Kenyon
//! tree. It consists of the origin joined to four rotated copies of `K_{n−1}`
//! centred at `2^{n−1}·rdir(j)`, each attached through its tip nearest the
//! origin.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::coding::Code4;
use crate::error::{Error, Result};
use crate::ghspace::{BallProbe, Window};
use crate::grid::{ball_from_order, unit, Dirs, GridView, Pattern, Raster, Vertex, ORIGIN};

/// Largest level kept in the ball cache; `K_10` has about 1.4 million vertices.
pub const MAX_LEVEL: u32 = 10;

/// Unit vector `e^{iπk/2}`.
pub fn rdir(k: u8) -> Vertex {
    unit(k)
}

fn pow2(n: u32) -> i64 {
    1i64 << n
}

/// Partial sums `x_k = Σ_{i<k} 2^i·rdir(α_i)`, starting at the origin.
pub fn skeleton(code: &Code4) -> Vec<Vertex> {
    let mut pts = vec![ORIGIN];
    let mut x = ORIGIN;
    for (i, &a) in code.letters().iter().enumerate() {
        x = x + pow2(i as u32) * rdir(a);
        pts.push(x);
    }
    pts
}

/// Sorts and merges duplicate vertices by uniting their directions.
fn merge(mut entries: Vec<(Vertex, Dirs)>) -> Vec<(Vertex, Dirs)> {
    entries.par_sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(Vertex, Dirs)> = Vec::with_capacity(entries.len());
    for (v, d) in entries {
        match out.last_mut() {
            Some((u, e)) if *u == v => *e = e.union(d),
            _ => out.push((v, d)),
        }
    }
    out
}

/// Entries of `P_n` for the given letters, sorted by vertex.
fn coded_entries(letters: &[u8]) -> Vec<(Vertex, Dirs)> {
    let x1 = rdir(letters[0]);
    let mut cur = Pattern::star(x1).entries().collect::<Vec<_>>();
    let mut xk = x1;
    for (k, &a) in letters.iter().enumerate().skip(1) {
        let k = k as u32;
        let tip = xk + (pow2(k) - 1) * rdir(a);
        let next = xk + pow2(k) * rdir(a);
        let mut grown = cur;
        let slot = grown.binary_search_by_key(&tip, |e| e.0).expect("axis tip of the previous stage");
        grown[slot].1 = grown[slot].1.with(a);
        grown.push((next, Dirs::single(a + 2)));
        let mut all = Vec::with_capacity(grown.len() * 4);
        for q in 0..4u8 {
            all.extend(grown.iter().map(|&(v, d)| (v.rotate_about(next, q), d.rotate(q))));
        }
        cur = merge(all);
        xk = next;
    }
    cur
}

/// `Φ(α₀…α_{n−1})`: the coded tree `P_n`, based at the origin.
pub fn build_pattern(code: &Code4) -> Result<Pattern> {
    if code.is_empty() {
        return Err(Error::EmptyCode);
    }
    let entries = coded_entries(code.letters());
    Ok(Pattern::from_dirs_unchecked(entries.into_iter().collect(), ORIGIN))
}

/// Cached data for one `K_n`.
pub(crate) struct Level {
    n: u32,
    entries: Vec<(Vertex, Dirs)>,
    raster: Raster,
    order: Vec<(Vertex, u32)>,
    window: OnceLock<Arc<Window>>,
    probe: OnceLock<BallProbe>,
}

impl Level {
    fn build(n: u32, prev: Option<&Level>) -> Level {
        let entries = match prev {
            None => vec![(ORIGIN, Dirs::EMPTY)],
            Some(p) => {
                let shift = Vertex::new(pow2(p.n), 0);
                let attach = Vertex::new(1, 0);
                let mut all = Vec::with_capacity(p.entries.len() * 4 + 1);
                all.push((ORIGIN, Dirs::ALL));
                for q in 0..4u8 {
                    all.extend(p.entries.iter().map(|&(v, d)| {
                        let w = v + shift;
                        let d = if w == attach { d.with(2) } else { d };
                        (w.rotate(q), d.rotate(q))
                    }));
                }
                all.par_sort_unstable_by_key(|e| e.0);
                all
            }
        };
        let raster = Raster::from_entries(entries.iter().copied());
        let order = raster.bfs(ORIGIN, u32::MAX);
        Level { n, entries, raster, order, window: OnceLock::new(), probe: OnceLock::new() }
    }

    pub(crate) fn raster(&self) -> &Raster {
        &self.raster
    }

    /// Breadth-first order from the origin.
    pub(crate) fn order(&self) -> &[(Vertex, u32)] {
        &self.order
    }

    pub(crate) fn radius(&self) -> u32 {
        (pow2(self.n) - 1) as u32
    }

    pub(crate) fn window(&self) -> Arc<Window> {
        self.window
            .get_or_init(|| {
                let p = Pattern::from_dirs_unchecked(self.entries.iter().copied().collect(), ORIGIN);
                Arc::new(Window::from_ball_unchecked(p, self.radius()))
            })
            .clone()
    }

    pub(crate) fn probe(&self) -> &BallProbe {
        self.probe.get_or_init(|| BallProbe::new(&self.window()))
    }
}

static LEVELS: [OnceLock<Arc<Level>>; MAX_LEVEL as usize + 1] = [const { OnceLock::new() }; MAX_LEVEL as usize + 1];

pub(crate) fn level(n: u32) -> Result<Arc<Level>> {
    if n > MAX_LEVEL {
        return Err(Error::Precondition(format!("level {n} exceeds the supported maximum {MAX_LEVEL}")));
    }
    let prev = if n == 0 { None } else { Some(level(n - 1)?) };
    Ok(LEVELS[n as usize].get_or_init(|| Arc::new(Level::build(n, prev.as_deref()))).clone())
}

/// `K_n`, the ball of radius `2^n − 1` about the origin of the Kenyon tree.
/// Level 0 is the single vertex.
pub fn kenyon_ball(n: u32) -> Result<Arc<Window>> {
    Ok(level(n)?.window())
}

/// Least `n` with `2^n − 1 ≥ r`.
pub fn level_for_radius(r: u64) -> u32 {
    (0..).find(|&n| (1u64 << n) - 1 >= r).expect("some level covers r")
}

/// The ball of radius `r` about the origin of the Kenyon tree.
pub fn kenyon_window(r: u32) -> Result<Window> {
    let lv = level(level_for_radius(r as u64))?;
    if lv.radius() == r {
        return Ok(lv.window().as_ref().clone());
    }
    let cut = lv.order().partition_point(|&(_, d)| d <= r);
    let p = ball_from_order(lv.raster(), &lv.order()[..cut], r, ORIGIN);
    Ok(Window::from_ball_unchecked(p, r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MotifKind {
    /// One protruding edge in direction `k`.
    A(u8),
    /// Protruding edges in directions `k` and `k + 2`.
    B(u8),
    /// The ball of radius `2^n`.
    C,
}

impl MotifKind {
    /// The seven kinds in the order A0 A1 A2 A3 B0 B1 C.
    pub const ALL: [MotifKind; 7] = [
        MotifKind::A(0),
        MotifKind::A(1),
        MotifKind::A(2),
        MotifKind::A(3),
        MotifKind::B(0),
        MotifKind::B(1),
        MotifKind::C,
    ];

    pub fn index(self) -> usize {
        match self {
            MotifKind::A(k) => k as usize,
            MotifKind::B(k) => 4 + k as usize,
            MotifKind::C => 6,
        }
    }

    /// Directions of the edges leaving the ball of radius `2^n − 1`.
    pub fn protrusions(self) -> Dirs {
        match self {
            MotifKind::A(k) => Dirs::single(k),
            MotifKind::B(k) => Dirs::single(k).with(k + 2),
            MotifKind::C => Dirs::ALL,
        }
    }

    pub fn from_protrusions(d: Dirs) -> Option<MotifKind> {
        match d.count() {
            1 => Some(MotifKind::A(d.iter().next()?)),
            2 => {
                let k = d.iter().next()?;
                d.has(k + 2).then_some(MotifKind::B(k))
            }
            4 => Some(MotifKind::C),
            _ => None,
        }
    }
}

impl fmt::Display for MotifKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MotifKind::A(k) => write!(f, "A{k}"),
            MotifKind::B(k) => write!(f, "B{k}"),
            MotifKind::C => write!(f, "C"),
        }
    }
}

impl FromStr for MotifKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A0" => Ok(MotifKind::A(0)),
            "A1" => Ok(MotifKind::A(1)),
            "A2" => Ok(MotifKind::A(2)),
            "A3" => Ok(MotifKind::A(3)),
            "B0" => Ok(MotifKind::B(0)),
            "B1" => Ok(MotifKind::B(1)),
            "C" => Ok(MotifKind::C),
            other => Err(Error::UnknownMotif(other.to_string())),
        }
    }
}

impl Serialize for MotifKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MotifId {
    pub level: u32,
    pub kind: MotifKind,
}

impl MotifId {
    pub fn new(level: u32, kind: MotifKind) -> Self {
        MotifId { level, kind }
    }
}

impl fmt::Display for MotifId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind, self.level)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CellPlacement {
    pub motif: MotifId,
    #[serde(serialize_with = "ser_vertex")]
    pub center: Vertex,
}

pub(crate) fn ser_vertex<S: Serializer>(v: &Vertex, s: S) -> std::result::Result<S::Ok, S::Error> {
    [v.x, v.y].serialize(s)
}

/// The basic motif, based at its centre.
pub fn motif(id: MotifId) -> Result<Pattern> {
    let n = id.level;
    if id.kind == MotifKind::C {
        let r = u32::try_from(pow2(n)).map_err(|_| Error::Precondition(format!("level {n} too large")))?;
        return Ok(kenyon_window(r)?.into_pattern());
    }
    let lv = level(n)?;
    let mut p = lv.window().pattern().clone();
    let reach = pow2(n) - 1;
    for k in id.kind.protrusions().iter() {
        let tip = reach * rdir(k);
        p = p.with_edge(crate::grid::Edge::new(tip, tip.step(k))?);
    }
    Ok(p)
}

/// The five level-`n` cells making up a level-`(n+1)` cell: the centre
/// followed by the arms in directions 0..3.
pub fn substitute(id: MotifId) -> Result<Vec<CellPlacement>> {
    if id.level == 0 {
        return Err(Error::Precondition("level-0 cells do not subdivide".into()));
    }
    let n = id.level - 1;
    let arm = |j: u8| -> MotifKind {
        let straight = MotifKind::B(j % 2);
        let leaf = MotifKind::A((j + 2) % 4);
        match id.kind {
            MotifKind::C => straight,
            MotifKind::B(k) => {
                if j % 2 == k % 2 {
                    straight
                } else {
                    leaf
                }
            }
            MotifKind::A(k) => {
                if j == k {
                    straight
                } else {
                    leaf
                }
            }
        }
    };
    let mut out = vec![CellPlacement { motif: MotifId::new(n, MotifKind::C), center: ORIGIN }];
    for j in 0..4u8 {
        out.push(CellPlacement { motif: MotifId::new(n, arm(j)), center: pow2(n) * rdir(j) });
    }
    Ok(out)
}

/// Offsets `o` at which the window occurs in the Kenyon tree: the ball of
/// the window's radius about `o` equals the window moved to `o`. Only
/// offsets whose ball lies inside the searched `K_N` are reported, where
/// `N` is the least level with `2^N − 1 ≥ 4·radius`.
pub fn locate(w: &Window) -> Result<Vec<Vertex>> {
    let r = w.radius();
    let n = level_for_radius(4 * r as u64).max(1);
    let lv = level(n)?;
    let probe = BallProbe::new(w);
    let big = lv.radius();
    let mut hits: Vec<Vertex> = lv
        .order()
        .par_iter()
        .filter(|&&(o, d)| d + r <= big && probe.faithful_at(lv.raster(), o))
        .map(|&(o, _)| o)
        .collect();
    if hits.is_empty() {
        return Err(Error::NotFound);
    }
    hits.sort();
    Ok(hits)
}

/// Radius a window needs for [`vertex_cell`] at level `n`.
pub fn recognizability_radius(n: u32) -> u64 {
    3 * (1u64 << n)
}

/// The level-`n` cell containing the basepoint.
pub fn vertex_cell(w: &Window, n: u32) -> Result<CellPlacement> {
    if (w.radius() as u64) < recognizability_radius(n) {
        return Err(Error::Ambiguous(format!(
            "level-{n} cells need radius {}, window has {}",
            recognizability_radius(n),
            w.radius()
        )));
    }
    cell_at(w.raster(), ORIGIN, n)
}

/// Kind of the level-`n` cell centred at `c`, given that the ball of radius
/// `2^n − 1` about `c` is a faithful copy of `K_n`. The only edges leaving
/// that ball must be axis protrusions at the four extreme tips.
pub(crate) fn classify<G: GridView + ?Sized>(g: &G, c: Vertex, n: u32) -> Result<MotifKind> {
    let lv = level(n)?;
    let reach = pow2(n) - 1;
    let mut prot = Dirs::EMPTY;
    for &(o, _) in lv.order().iter().rev().take_while(|&&(_, d)| d as i64 == reach) {
        let own = lv.raster().dirs_at(o).expect("vertex of K_n");
        let host = g.dirs_at(c + o).unwrap_or(Dirs::EMPTY);
        for k in host.iter().filter(|&k| !own.has(k)) {
            if o != reach * rdir(k) {
                return Err(Error::NotInHull(format!(
                    "level-{n} cell at {c} has an edge leaving {} off its axis tips",
                    c + o
                )));
            }
            prot = prot.with(k);
        }
    }
    MotifKind::from_protrusions(prot)
        .ok_or_else(|| Error::NotInHull(format!("level-{n} cell at {c} has protrusions {:04b}", prot.bits())))
}

/// The level-`n` cell containing `v` in `g`. Correct when `g` is exact on the
/// ball of radius `2^{n+1}` about `v`.
pub(crate) fn cell_at<G: GridView + ?Sized>(g: &G, v: Vertex, n: u32) -> Result<CellPlacement> {
    let lv = level(n)?;
    let probe = lv.probe();
    let reach = (pow2(n) - 1) as u32;
    let candidates = crate::grid::bfs(g, v, reach);
    let mut found: Vec<CellPlacement> = Vec::new();
    for (c, _) in candidates {
        if n >= 1 && g.dirs_at(c) != Some(Dirs::ALL) {
            continue;
        }
        if !probe.faithful_at(g, c) {
            continue;
        }
        let kind = classify(g, c, n)?;
        if kind == MotifKind::C && c != v {
            continue;
        }
        found.push(CellPlacement { motif: MotifId::new(n, kind), center: c });
    }
    match found.len() {
        1 => Ok(found[0]),
        0 => Err(Error::NotInHull(format!("no level-{n} cell contains {v}"))),
        k => Err(Error::Ambiguous(format!("{k} level-{n} cells contain {v}"))),
    }
}

/// Vertices of the cell: the whole copy of `K_n` for kinds A and B, the
/// centre alone for kind C.
pub fn cell_members(cell: &CellPlacement) -> Result<Vec<Vertex>> {
    if cell.motif.kind == MotifKind::C {
        return Ok(vec![cell.center]);
    }
    let lv = level(cell.motif.level)?;
    let mut out: Vec<Vertex> = lv.order().iter().map(|&(o, _)| o + cell.center).collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64) -> Vertex {
        Vertex::new(x, y)
    }

    fn code(s: &str) -> Code4 {
        s.parse().unwrap()
    }

    #[test]
    fn rdir_values() {
        assert_eq!(rdir(0), v(1, 0));
        assert_eq!(rdir(2), v(-1, 0));
        for k in 0..4 {
            assert_eq!(rdir(k + 2), -rdir(k));
        }
    }

    #[test]
    fn skeleton_examples() {
        assert_eq!(skeleton(&code("")), vec![ORIGIN]);
        assert_eq!(skeleton(&code("01")), vec![v(0, 0), v(1, 0), v(1, 2)]);
        assert_eq!(skeleton(&code("00")), vec![v(0, 0), v(1, 0), v(3, 0)]);
    }

    #[test]
    fn first_stage_is_a_star() {
        let p = build_pattern(&code("0")).unwrap();
        assert_eq!(p, Pattern::star(v(1, 0)).with_basepoint(ORIGIN).unwrap());
        assert_eq!(build_pattern(&code("")), Err(Error::EmptyCode));
    }

    #[test]
    fn coded_sizes_and_basepoint_valence() {
        for (s, size) in [("0", 5), ("01", 21), ("013", 85), ("0132", 341)] {
            let p = build_pattern(&code(s)).unwrap();
            assert_eq!(p.vertex_count(), size);
            assert_eq!(p.edge_count(), size - 1);
            assert_eq!(p.valence(ORIGIN).unwrap(), 1);
        }
    }

    #[test]
    fn ball_sizes_and_symmetry() {
        for n in 0..=6 {
            let w = kenyon_ball(n).unwrap();
            assert_eq!(w.pattern().vertex_count() as u64, (4u64.pow(n + 1) - 1) / 3);
            assert_eq!(w.radius() as i64, pow2(n) - 1);
            for q in 1..4 {
                assert_eq!(&w.pattern().rotate(ORIGIN, q), w.pattern());
            }
            for k in 0..4 {
                for t in 0..pow2(n) {
                    assert!(w.pattern().contains(t * rdir(k)));
                }
            }
        }
        assert_eq!(kenyon_ball(1).unwrap().pattern(), &Pattern::star(ORIGIN));
        assert!(kenyon_ball(MAX_LEVEL + 1).is_err());
    }

    #[test]
    fn window_radius_two_is_a_cross() {
        let w = kenyon_window(2).unwrap();
        assert_eq!(w.pattern().vertex_count(), 9);
        assert_eq!(w.pattern().edge_count(), 8);
        for k in 0..4 {
            assert!(w.pattern().has_edge(rdir(k), 2 * rdir(k)));
        }
        assert_eq!(kenyon_window(1).unwrap().pattern(), &Pattern::star(ORIGIN));
    }

    #[test]
    fn windows_are_balls_of_the_next_level() {
        for r in 0..=20 {
            let w = kenyon_window(r).unwrap();
            let n = level_for_radius(r as u64) + 1;
            let big = kenyon_ball(n).unwrap();
            assert_eq!(w.pattern(), &big.pattern().intrinsic_ball(ORIGIN, r).unwrap(), "r = {r}");
        }
    }

    #[test]
    fn level_zero_motifs() {
        let a = motif(MotifId::new(0, MotifKind::A(0))).unwrap();
        assert_eq!(a, Pattern::path(&[v(0, 0), v(1, 0)]).unwrap());
        let b = motif(MotifId::new(0, MotifKind::B(0))).unwrap();
        assert_eq!(b, Pattern::path(&[v(-1, 0), v(0, 0), v(1, 0)]).unwrap().with_basepoint(ORIGIN).unwrap());
        assert_eq!(motif(MotifId::new(0, MotifKind::C)).unwrap(), Pattern::star(ORIGIN));
        assert_eq!(motif(MotifId::new(1, MotifKind::C)).unwrap(), *kenyon_window(2).unwrap().pattern());
    }

    #[test]
    fn motif_kind_parsing() {
        for k in MotifKind::ALL {
            assert_eq!(k.to_string().parse::<MotifKind>().unwrap(), k);
            assert_eq!(MotifKind::ALL[k.index()], k);
        }
        assert!("D".parse::<MotifKind>().is_err());
    }

    #[test]
    fn substitution_of_a0_and_c() {
        let got = substitute(MotifId::new(1, MotifKind::A(0))).unwrap();
        let expect = [
            (MotifKind::C, v(0, 0)),
            (MotifKind::B(0), v(1, 0)),
            (MotifKind::A(3), v(0, 1)),
            (MotifKind::A(0), v(-1, 0)),
            (MotifKind::A(1), v(0, -1)),
        ];
        let got: Vec<_> = got.iter().map(|c| (c.motif.kind, c.center)).collect();
        assert_eq!(got, expect);
        let c = substitute(MotifId::new(1, MotifKind::C)).unwrap();
        let kinds: Vec<_> = c.iter().map(|c| c.motif.kind).collect();
        assert_eq!(kinds, [MotifKind::C, MotifKind::B(0), MotifKind::B(1), MotifKind::B(0), MotifKind::B(1)]);
        assert!(substitute(MotifId::new(0, MotifKind::C)).is_err());
    }

    #[test]
    fn motif_is_its_substitution_assembled() {
        // Gluing the five sub-cells (plus the four attaching edges) rebuilds the ball part.
        for kind in MotifKind::ALL {
            for n in 1..=3 {
                let id = MotifId::new(n, kind);
                let m = motif(id).unwrap();
                for cell in substitute(id).unwrap() {
                    let sub = motif(cell.motif).unwrap().translate(cell.center);
                    let sub = if cell.motif.kind == MotifKind::C {
                        Pattern::point(cell.center)
                    } else {
                        sub
                    };
                    assert!(sub.is_subgraph_of(&m), "{id}: {:?}", cell);
                }
            }
        }
    }

    #[test]
    fn level_zero_cells_follow_valence() {
        let w = kenyon_ball(6).unwrap();
        let lv = level(6).unwrap();
        for &(u, d) in lv.order() {
            if d + 2 > w.radius() {
                continue;
            }
            let cell = cell_at(lv.raster(), u, 0).unwrap();
            assert_eq!(cell.center, u);
            let dirs = lv.raster().dirs_at(u).unwrap();
            assert_eq!(cell.motif.kind, MotifKind::from_protrusions(dirs).unwrap());
            assert_ne!(dirs.count(), 3);
        }
    }

    #[test]
    fn origin_is_a_centre_at_every_level() {
        let w = kenyon_window(48).unwrap();
        for n in 0..=4 {
            assert_eq!(vertex_cell(&w, n).unwrap(), CellPlacement { motif: MotifId::new(n, MotifKind::C), center: ORIGIN });
        }
        assert!(matches!(vertex_cell(&w, 5), Err(Error::Ambiguous(_))));
    }

    #[test]
    fn leaf_vertex_is_an_a_cell() {
        let lv = level(4).unwrap();
        let leaf = lv
            .order()
            .iter()
            .find(|&&(u, d)| d < 8 && lv.raster().dirs_at(u).unwrap().count() == 1)
            .unwrap()
            .0;
        let w = Window::cut(level(6).unwrap().raster(), leaf, 6).unwrap();
        let cell = vertex_cell(&w, 0).unwrap();
        let k = lv.raster().dirs_at(leaf).unwrap().iter().next().unwrap();
        assert_eq!(cell, CellPlacement { motif: MotifId::new(0, MotifKind::A(k)), center: ORIGIN });
    }

    #[test]
    fn locate_star_and_point() {
        let star = Window::new(Pattern::star(ORIGIN), 1).unwrap();
        let hits = locate(&star).unwrap();
        assert!(hits.contains(&ORIGIN));
        let lv = level(3).unwrap();
        let quad = lv.order().iter().filter(|&&(u, d)| d < 7 && lv.raster().dirs_at(u) == Some(Dirs::ALL)).count();
        assert_eq!(hits.len(), quad);
        let pt = locate(&Window::new(Pattern::point(ORIGIN), 0).unwrap()).unwrap();
        assert_eq!(pt.len(), 5);
    }

    #[test]
    fn locate_rejects_foreign_window() {
        // A valence-3 vertex never occurs.
        let t = Pattern::star(ORIGIN);
        let p = Pattern::from_dirs(
            t.entries()
                .filter(|&(u, _)| u != v(0, -1))
                .map(|(u, d)| if u == ORIGIN { (u, Dirs::from_bits(0b0111)) } else { (u, d) })
                .collect(),
            ORIGIN,
        )
        .unwrap();
        assert_eq!(locate(&Window::new(p, 1).unwrap()), Err(Error::NotFound));
    }
}
