//! The Cayley graph of Z² for the generators (±1,0), (0,±1), and finite
//! pointed subgraphs of it.
//!
//! A [`Pattern`] stores, for each vertex, the set of directions in which it
//! has an edge. Edges are therefore explicit: two adjacent vertices of a
//! pattern need not be joined. Balls and spheres always use the intrinsic
//! path metric of the subgraph.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub x: i64,
    pub y: i64,
}

pub const ORIGIN: Vertex = Vertex { x: 0, y: 0 };

impl Vertex {
    pub const fn new(x: i64, y: i64) -> Self {
        Vertex { x, y }
    }

    /// Quarter-turn rotation (x, y) ↦ (−y, x) applied `q` times about the origin.
    pub fn rotate(self, q: u8) -> Vertex {
        match q % 4 {
            0 => self,
            1 => Vertex::new(-self.y, self.x),
            2 => Vertex::new(-self.x, -self.y),
            _ => Vertex::new(self.y, -self.x),
        }
    }

    pub fn rotate_about(self, center: Vertex, q: u8) -> Vertex {
        (self - center).rotate(q) + center
    }

    pub fn step(self, dir: u8) -> Vertex {
        self + unit(dir)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl std::str::FromStr for Vertex {
    type Err = Error;

    /// Accepts `x,y` with optional surrounding parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("cannot parse vertex {s:?}, expected x,y"));
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (a, b) = t.split_once(',').ok_or_else(bad)?;
        let x = a.trim().parse().map_err(|_| bad())?;
        let y = b.trim().parse().map_err(|_| bad())?;
        Ok(Vertex::new(x, y))
    }
}

impl Add for Vertex {
    type Output = Vertex;
    fn add(self, o: Vertex) -> Vertex {
        Vertex::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vertex {
    type Output = Vertex;
    fn sub(self, o: Vertex) -> Vertex {
        Vertex::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vertex {
    type Output = Vertex;
    fn neg(self) -> Vertex {
        Vertex::new(-self.x, -self.y)
    }
}

impl Mul<Vertex> for i64 {
    type Output = Vertex;
    fn mul(self, v: Vertex) -> Vertex {
        Vertex::new(self * v.x, self * v.y)
    }
}

/// Unit step for direction `k` mod 4: east, north, west, south.
pub fn unit(k: u8) -> Vertex {
    match k % 4 {
        0 => Vertex::new(1, 0),
        1 => Vertex::new(0, 1),
        2 => Vertex::new(-1, 0),
        _ => Vertex::new(0, -1),
    }
}

/// Direction index of a unit vector, if it is one.
pub fn direction_of(v: Vertex) -> Option<u8> {
    (0..4).find(|&k| unit(k) == v)
}

/// The four neighbours of `v` in generator order.
pub fn neighbors(v: Vertex) -> [Vertex; 4] {
    [v.step(0), v.step(1), v.step(2), v.step(3)]
}

/// Word length for the standard generators, i.e. the L¹ norm.
pub fn word_norm(v: Vertex) -> u64 {
    v.x.unsigned_abs() + v.y.unsigned_abs()
}

/// Set of edge directions at a vertex, one bit per generator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dirs(u8);

impl Dirs {
    pub const EMPTY: Dirs = Dirs(0);
    pub const ALL: Dirs = Dirs(0b1111);

    pub fn single(k: u8) -> Dirs {
        Dirs(1 << (k % 4))
    }

    pub fn from_bits(bits: u8) -> Dirs {
        Dirs(bits & 0b1111)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn has(self, k: u8) -> bool {
        self.0 & (1 << (k % 4)) != 0
    }

    pub fn with(self, k: u8) -> Dirs {
        Dirs(self.0 | (1 << (k % 4)))
    }

    pub fn union(self, o: Dirs) -> Dirs {
        Dirs(self.0 | o.0)
    }

    pub fn intersect(self, o: Dirs) -> Dirs {
        Dirs(self.0 & o.0)
    }

    pub fn contains(self, o: Dirs) -> bool {
        self.0 & o.0 == o.0
    }

    pub fn count(self) -> u8 {
        self.0.count_ones() as u8
    }

    pub fn rotate(self, q: u8) -> Dirs {
        let q = q % 4;
        Dirs(((self.0 << q) | (self.0 >> (4 - q))) & 0b1111)
    }

    pub fn iter(self) -> impl Iterator<Item = u8> {
        (0..4u8).filter(move |&k| self.has(k))
    }
}

/// Read access to a subgraph of the grid: the edge directions at a vertex,
/// or `None` when the vertex is absent.
pub trait GridView {
    fn dirs_at(&self, v: Vertex) -> Option<Dirs>;

    fn has_vertex(&self, v: Vertex) -> bool {
        self.dirs_at(v).is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: Vertex,
    b: Vertex,
}

impl Edge {
    /// Builds the edge in canonical order; fails unless the endpoints are adjacent.
    pub fn new(p: Vertex, q: Vertex) -> Result<Edge> {
        if word_norm(p - q) != 1 {
            return Err(Error::InvalidPattern(format!("{p} and {q} are not adjacent")));
        }
        Ok(if p < q { Edge { a: p, b: q } } else { Edge { a: q, b: p } })
    }

    pub fn a(&self) -> Vertex {
        self.a
    }

    pub fn b(&self) -> Vertex {
        self.b
    }

    pub fn translate(&self, v: Vertex) -> Edge {
        Edge { a: self.a + v, b: self.b + v }
    }
}

/// A finite connected pointed subgraph of the grid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    adj: BTreeMap<Vertex, Dirs>,
    basepoint: Vertex,
}

impl Pattern {
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = Edge>,
        basepoint: Vertex,
    ) -> Result<Pattern> {
        let mut adj: BTreeMap<Vertex, Dirs> = vertices.into_iter().map(|v| (v, Dirs::EMPTY)).collect();
        for e in edges {
            let k = direction_of(e.b - e.a).expect("edge endpoints are adjacent");
            for (end, dir) in [(e.a, k), (e.b, (k + 2) % 4)] {
                let d = adj
                    .get_mut(&end)
                    .ok_or_else(|| Error::InvalidPattern(format!("edge endpoint {end} is not a vertex")))?;
                *d = d.with(dir);
            }
        }
        let p = Pattern { adj, basepoint };
        p.validate()?;
        Ok(p)
    }

    /// Builds a pattern from a direction map. Directions pointing at absent
    /// vertices, or not mirrored by the neighbour, are rejected.
    pub fn from_dirs(adj: BTreeMap<Vertex, Dirs>, basepoint: Vertex) -> Result<Pattern> {
        for (&v, &d) in &adj {
            for k in d.iter() {
                match adj.get(&v.step(k)) {
                    Some(n) if n.has((k + 2) % 4) => {}
                    _ => {
                        return Err(Error::InvalidPattern(format!(
                            "edge from {v} towards {} is not mirrored",
                            v.step(k)
                        )))
                    }
                }
            }
        }
        let p = Pattern { adj, basepoint };
        p.validate()?;
        Ok(p)
    }

    /// Caller guarantees symmetry of `adj`, presence of the basepoint and connectivity.
    pub(crate) fn from_dirs_unchecked(adj: BTreeMap<Vertex, Dirs>, basepoint: Vertex) -> Pattern {
        debug_assert!(adj.contains_key(&basepoint));
        Pattern { adj, basepoint }
    }

    pub fn point(v: Vertex) -> Pattern {
        Pattern { adj: BTreeMap::from([(v, Dirs::EMPTY)]), basepoint: v }
    }

    /// The path through consecutive vertices of `vs`, based at `vs[0]`.
    pub fn path(vs: &[Vertex]) -> Result<Pattern> {
        let first = *vs.first().ok_or_else(|| Error::InvalidPattern("empty path".into()))?;
        let edges = vs.windows(2).map(|w| Edge::new(w[0], w[1])).collect::<Result<Vec<_>>>()?;
        Pattern::new(vs.iter().copied(), edges, first)
    }

    /// The star of radius 1 centred at `c`.
    pub fn star(c: Vertex) -> Pattern {
        let mut adj = BTreeMap::from([(c, Dirs::ALL)]);
        for k in 0..4 {
            adj.insert(c.step(k), Dirs::single(k + 2));
        }
        Pattern { adj, basepoint: c }
    }

    fn validate(&self) -> Result<()> {
        if !self.adj.contains_key(&self.basepoint) {
            return Err(Error::InvalidPattern(format!("basepoint {} is not a vertex", self.basepoint)));
        }
        let reached = bfs(self, self.basepoint, u32::MAX).len();
        if reached != self.adj.len() {
            return Err(Error::InvalidPattern(format!(
                "pattern is disconnected ({reached} of {} vertices reachable)",
                self.adj.len()
            )));
        }
        Ok(())
    }

    pub fn basepoint(&self) -> Vertex {
        self.basepoint
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|d| d.count() as usize).sum::<usize>() / 2
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    /// Vertices with their edge directions, in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (Vertex, Dirs)> + Clone + '_ {
        self.adj.iter().map(|(&v, &d)| (v, d))
    }

    /// Edges in lexicographic order of their canonical endpoint pairs.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        // For a fixed lower endpoint v, v+(0,1) sorts before v+(1,0).
        self.adj.iter().flat_map(|(&v, &d)| {
            [1u8, 0]
                .into_iter()
                .filter(move |&k| d.has(k))
                .map(move |k| Edge { a: v, b: v.step(k) })
        })
    }

    pub fn has_edge(&self, p: Vertex, q: Vertex) -> bool {
        match direction_of(q - p) {
            Some(k) => self.adj.get(&p).is_some_and(|d| d.has(k)),
            None => false,
        }
    }

    pub fn valence(&self, v: Vertex) -> Result<u8> {
        self.adj.get(&v).map(|d| d.count()).ok_or(Error::VertexNotInPattern(v))
    }

    /// Same vertices and edges, different basepoint.
    pub fn with_basepoint(&self, v: Vertex) -> Result<Pattern> {
        if !self.contains(v) {
            return Err(Error::VertexNotInPattern(v));
        }
        Ok(Pattern { adj: self.adj.clone(), basepoint: v })
    }

    pub fn translate(&self, v: Vertex) -> Pattern {
        Pattern {
            adj: self.adj.iter().map(|(&u, &d)| (u + v, d)).collect(),
            basepoint: self.basepoint + v,
        }
    }

    /// Re-centres at `v`: translates by −v, so `v` becomes the origin and the
    /// new basepoint.
    pub fn recenter(&self, v: Vertex) -> Result<Pattern> {
        if !self.contains(v) {
            return Err(Error::VertexNotInPattern(v));
        }
        let mut p = self.translate(-v);
        p.basepoint = ORIGIN;
        Ok(p)
    }

    pub fn rotate(&self, center: Vertex, q: u8) -> Pattern {
        Pattern {
            adj: self.adj.iter().map(|(&u, &d)| (u.rotate_about(center, q), d.rotate(q))).collect(),
            basepoint: self.basepoint.rotate_about(center, q),
        }
    }

    /// Vertex and edge inclusion; basepoints are ignored.
    pub fn is_subgraph_of<G: GridView>(&self, host: &G) -> bool {
        self.adj.iter().all(|(&v, &d)| host.dirs_at(v).is_some_and(|h| h.contains(d)))
    }

    /// Union of vertex and edge sets, keeping this pattern's basepoint.
    pub fn union(&self, other: &Pattern) -> Pattern {
        let mut adj = self.adj.clone();
        for (&v, &d) in &other.adj {
            let e = adj.entry(v).or_insert(Dirs::EMPTY);
            *e = e.union(d);
        }
        Pattern { adj, basepoint: self.basepoint }
    }

    /// Adds one edge, inserting missing endpoints.
    pub fn with_edge(&self, e: Edge) -> Pattern {
        let k = direction_of(e.b - e.a).expect("canonical edge");
        let mut adj = self.adj.clone();
        let da = adj.entry(e.a).or_insert(Dirs::EMPTY);
        *da = da.with(k);
        let db = adj.entry(e.b).or_insert(Dirs::EMPTY);
        *db = db.with(k + 2);
        Pattern { adj, basepoint: self.basepoint }
    }

    /// Closed ball of intrinsic radius `r` about `c`, based at `c`.
    pub fn intrinsic_ball(&self, c: Vertex, r: u32) -> Result<Pattern> {
        if !self.contains(c) {
            return Err(Error::VertexNotInPattern(c));
        }
        Ok(ball(self, c, r))
    }

    pub fn intrinsic_sphere(&self, c: Vertex, r: u32) -> Result<Vec<Vertex>> {
        if !self.contains(c) {
            return Err(Error::VertexNotInPattern(c));
        }
        let mut s: Vec<Vertex> = bfs(self, c, r).into_iter().filter(|&(_, d)| d == r).map(|(v, _)| v).collect();
        s.sort();
        Ok(s)
    }

    /// Intrinsic distances from `c` to every vertex of the pattern.
    pub fn distances_from(&self, c: Vertex) -> Result<HashMap<Vertex, u32>> {
        if !self.contains(c) {
            return Err(Error::VertexNotInPattern(c));
        }
        Ok(bfs(self, c, u32::MAX).into_iter().collect())
    }

    /// Largest intrinsic distance from `c`.
    pub fn eccentricity(&self, c: Vertex) -> Result<u32> {
        if !self.contains(c) {
            return Err(Error::VertexNotInPattern(c));
        }
        Ok(bfs(self, c, u32::MAX).last().map_or(0, |&(_, d)| d))
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounds(&self) -> (Vertex, Vertex) {
        let mut lo = self.basepoint;
        let mut hi = self.basepoint;
        for v in self.adj.keys() {
            lo = Vertex::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Vertex::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (lo, hi)
    }
}

impl GridView for Pattern {
    fn dirs_at(&self, v: Vertex) -> Option<Dirs> {
        self.adj.get(&v).copied()
    }
}

pub fn neighbors_in<G: GridView>(g: &G, v: Vertex) -> impl Iterator<Item = Vertex> {
    let d = g.dirs_at(v).unwrap_or(Dirs::EMPTY);
    d.iter().map(move |k| v.step(k))
}

/// Breadth-first search from `c` up to distance `limit`, in discovery order.
/// The start vertex must be present.
pub fn bfs<G: GridView + ?Sized>(g: &G, c: Vertex, limit: u32) -> Vec<(Vertex, u32)> {
    let mut seen: HashMap<Vertex, ()> = HashMap::from([(c, ())]);
    let mut order = vec![(c, 0)];
    let mut queue = VecDeque::from([(c, 0u32)]);
    while let Some((v, d)) = queue.pop_front() {
        if d == limit {
            continue;
        }
        let dirs = g.dirs_at(v).unwrap_or(Dirs::EMPTY);
        for k in dirs.iter() {
            let w = v.step(k);
            if seen.insert(w, ()).is_none() {
                order.push((w, d + 1));
                queue.push_back((w, d + 1));
            }
        }
    }
    order
}

/// Ball of radius `r` about `c` in any grid view, based at `c`.
pub fn ball<G: GridView + ?Sized>(g: &G, c: Vertex, r: u32) -> Pattern {
    ball_from_order(g, &bfs(g, c, r), r, c)
}

/// Builds the ball from a BFS order already truncated at `r`. Vertices at
/// distance `r` keep only the edges back into the ball; in a bipartite graph
/// those are exactly the edges to distance `r − 1`.
pub(crate) fn ball_from_order<G: GridView + ?Sized>(g: &G, order: &[(Vertex, u32)], r: u32, base: Vertex) -> Pattern {
    let dist: HashMap<Vertex, u32> = order.iter().copied().collect();
    let adj = order
        .iter()
        .map(|&(v, d)| {
            let full = g.dirs_at(v).unwrap_or(Dirs::EMPTY);
            let dirs = if d < r {
                full
            } else {
                Dirs::from_bits(full.iter().filter(|&k| dist.contains_key(&v.step(k))).fold(0, |b, k| b | (1 << k)))
            };
            (v, dirs)
        })
        .collect();
    Pattern::from_dirs_unchecked(adj, base)
}

/// Dense rectangular copy of a pattern for constant-time lookups.
#[derive(Clone, Debug)]
pub struct Raster {
    min: Vertex,
    width: usize,
    height: usize,
    // 0 = absent; otherwise PRESENT | dirs.
    cells: Vec<u8>,
    len: usize,
}

const PRESENT: u8 = 0x10;

impl Raster {
    pub fn from_entries(entries: impl IntoIterator<Item = (Vertex, Dirs)> + Clone) -> Raster {
        let mut lo = Vertex::new(i64::MAX, i64::MAX);
        let mut hi = Vertex::new(i64::MIN, i64::MIN);
        for (v, _) in entries.clone() {
            lo = Vertex::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Vertex::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        if lo.x > hi.x {
            return Raster { min: ORIGIN, width: 0, height: 0, cells: Vec::new(), len: 0 };
        }
        let width = (hi.x - lo.x + 1) as usize;
        let height = (hi.y - lo.y + 1) as usize;
        let mut r = Raster { min: lo, width, height, cells: vec![0; width * height], len: 0 };
        for (v, d) in entries {
            let i = r.index(v).expect("inside bounds");
            if r.cells[i] == 0 {
                r.len += 1;
            }
            r.cells[i] |= PRESENT | d.bits();
        }
        r
    }

    pub fn from_pattern(p: &Pattern) -> Raster {
        Raster::from_entries(p.entries())
    }

    #[inline]
    fn index(&self, v: Vertex) -> Option<usize> {
        let dx = v.x.checked_sub(self.min.x)?;
        let dy = v.y.checked_sub(self.min.y)?;
        if dx < 0 || dy < 0 || dx as usize >= self.width || dy as usize >= self.height {
            return None;
        }
        Some(dy as usize * self.width + dx as usize)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Same as [`bfs`] with a dense visited map.
    pub fn bfs(&self, c: Vertex, limit: u32) -> Vec<(Vertex, u32)> {
        let Some(start) = self.index(c).filter(|&i| self.cells[i] != 0) else {
            return Vec::new();
        };
        let mut seen = vec![false; self.cells.len()];
        seen[start] = true;
        let mut order = vec![(c, 0u32)];
        let mut head = 0;
        while head < order.len() {
            let (v, d) = order[head];
            head += 1;
            if d == limit {
                continue;
            }
            let dirs = Dirs::from_bits(self.cells[self.index(v).expect("visited vertex")]);
            for k in dirs.iter() {
                let w = v.step(k);
                if let Some(i) = self.index(w) {
                    if !seen[i] && self.cells[i] != 0 {
                        seen[i] = true;
                        order.push((w, d + 1));
                    }
                }
            }
        }
        order
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vertex, Dirs)> + '_ {
        self.cells.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| {
            let x = self.min.x + (i % self.width) as i64;
            let y = self.min.y + (i / self.width) as i64;
            (Vertex::new(x, y), Dirs::from_bits(c))
        })
    }
}

impl GridView for Raster {
    #[inline]
    fn dirs_at(&self, v: Vertex) -> Option<Dirs> {
        let c = self.cells[self.index(v)?];
        (c != 0).then(|| Dirs::from_bits(c))
    }
}

/// A grid view shifted so that `offset` in the view is the origin of `inner`'s
/// frame plus `offset`: `dirs_at(v) = inner.dirs_at(v + shift)`.
pub struct Shifted<'a, G: ?Sized> {
    pub inner: &'a G,
    pub shift: Vertex,
}

impl<G: GridView + ?Sized> GridView for Shifted<'_, G> {
    fn dirs_at(&self, v: Vertex) -> Option<Dirs> {
        self.inner.dirs_at(v + self.shift)
    }
}

/// Serialized form: sorted vertex list, sorted canonical edges, basepoint.
#[derive(Serialize, Deserialize)]
pub struct PatternDoc {
    pub basepoint: [i64; 2],
    pub vertices: Vec<[i64; 2]>,
    pub edges: Vec<[[i64; 2]; 2]>,
}

fn pair(v: Vertex) -> [i64; 2] {
    [v.x, v.y]
}

fn unpair(p: [i64; 2]) -> Vertex {
    Vertex::new(p[0], p[1])
}

impl From<&Pattern> for PatternDoc {
    fn from(p: &Pattern) -> Self {
        PatternDoc {
            basepoint: pair(p.basepoint),
            vertices: p.vertices().map(pair).collect(),
            edges: p.edges().map(|e| [pair(e.a), pair(e.b)]).collect(),
        }
    }
}

impl TryFrom<PatternDoc> for Pattern {
    type Error = Error;

    fn try_from(doc: PatternDoc) -> Result<Pattern> {
        let edges = doc
            .edges
            .iter()
            .map(|&[a, b]| Edge::new(unpair(a), unpair(b)))
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(doc.vertices.iter().copied().map(unpair), edges, unpair(doc.basepoint))
    }
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PatternDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = PatternDoc::deserialize(d)?;
        Pattern::try_from(doc).map_err(serde::de::Error::custom)
    }
}

impl Pattern {
    /// Canonical JSON text: one document, sorted lists, no whitespace.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(&PatternDoc::from(self)).expect("pattern serializes")
    }
}
