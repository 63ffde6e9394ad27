//! Reference constructions written directly from the definitions, with their
//! own data structures, for checking the library against.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use gk_core::grid::Edge;
use gk_core::{Pattern, Vertex, ORIGIN};

pub type P = (i64, i64);

/// Edge directions per vertex: bit k for the step `STEPS[k]`.
pub type Adj = HashMap<P, u8>;

pub const STEPS: [P; 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

pub fn add(a: P, b: P) -> P {
    (a.0 + b.0, a.1 + b.1)
}

pub fn sub(a: P, b: P) -> P {
    (a.0 - b.0, a.1 - b.1)
}

pub fn scale(k: i64, a: P) -> P {
    (k * a.0, k * a.1)
}

/// Quarter turns counterclockwise about `c`.
pub fn rot(v: P, c: P, q: u8) -> P {
    let (mut x, mut y) = sub(v, c);
    for _ in 0..q % 4 {
        (x, y) = (-y, x);
    }
    add((x, y), c)
}

pub fn link(adj: &mut Adj, a: P, b: P) {
    let k = STEPS.iter().position(|&s| add(a, s) == b).expect("adjacent") as u8;
    *adj.entry(a).or_default() |= 1 << k;
    *adj.entry(b).or_default() |= 1 << ((k + 2) % 4);
}

pub fn neighbours(adj: &Adj, v: P) -> impl Iterator<Item = P> + '_ {
    let bits = adj.get(&v).copied().unwrap_or(0);
    (0..4).filter(move |k| bits & (1 << k) != 0).map(move |k| add(v, STEPS[k]))
}

pub fn bfs(adj: &Adj, start: P, limit: u32) -> HashMap<P, u32> {
    let mut dist = HashMap::from([(start, 0u32)]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == limit {
            continue;
        }
        for u in neighbours(adj, v) {
            if !dist.contains_key(&u) {
                dist.insert(u, d + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

/// The ball of radius `r` about `c`, moved so that `c` is the origin.
pub fn ball(adj: &Adj, c: P, r: u32) -> Adj {
    let dist = bfs(adj, c, r);
    let mut out = Adj::new();
    for &v in dist.keys() {
        let mut bits = 0u8;
        for (k, &s) in STEPS.iter().enumerate() {
            if adj.get(&v).is_some_and(|b| b & (1 << k) != 0) && dist.contains_key(&add(v, s)) {
                bits |= 1 << k;
            }
        }
        out.insert(sub(v, c), bits);
    }
    out
}

pub fn to_pattern(adj: &Adj) -> Pattern {
    let vertices = adj.keys().map(|&(x, y)| Vertex::new(x, y));
    let mut edges = Vec::new();
    for (&v, &bits) in adj {
        for k in [0usize, 1] {
            if bits & (1 << k) != 0 {
                let u = add(v, STEPS[k]);
                edges.push(Edge::new(Vertex::new(v.0, v.1), Vertex::new(u.0, u.1)).unwrap());
            }
        }
    }
    Pattern::new(vertices, edges, ORIGIN).unwrap()
}

pub fn from_pattern(p: &Pattern) -> Adj {
    let b = p.basepoint();
    p.entries().map(|(v, d)| ((v.x - b.x, v.y - b.y), d.bits())).collect()
}

/// `K_n` with, for every vertex, the centres of the `K_l` copies containing
/// it in the recursive decomposition, from the level at which it is a
/// junction up to `n`.
pub struct Kenyon {
    pub n: u32,
    pub adj: Adj,
    /// `junction[v]`: the level of the copy whose centre is `v`.
    pub junction: HashMap<P, u32>,
    /// `centres[v][l − junction[v]]`: centre of the `K_l` copy containing `v`.
    pub centres: HashMap<P, Vec<P>>,
}

impl Kenyon {
    pub fn new(n: u32) -> Kenyon {
        let mut k = Kenyon { n, adj: Adj::new(), junction: HashMap::new(), centres: HashMap::new() };
        k.adj.insert((0, 0), 0);
        k.place(n, (0, 0));
        k
    }

    // Copy of K_m centred at c: the centre, joined to copies of K_{m−1}
    // centred at c + 2^{m−1}·e_j through their tips at c + e_j.
    fn place(&mut self, m: u32, c: P) {
        self.junction.insert(c, m);
        if m > 0 {
            let h = 1i64 << (m - 1);
            for s in STEPS {
                let child = add(c, scale(h, s));
                self.place(m - 1, child);
                link(&mut self.adj, c, add(c, s));
            }
        }
        // Inner copies finish first, so each list grows outward.
        let reach = (1u32 << m) - 1;
        let inside: Vec<P> = bfs_within(&self.adj, c, reach);
        for v in inside {
            if self.junction[&v] <= m {
                self.centres.entry(v).or_default().push(c);
            }
        }
    }

    /// Centre of the `K_l` copy containing `v`, or `None` when `v` is the
    /// centre of a larger copy.
    pub fn copy_centre(&self, v: P, l: u32) -> Option<P> {
        let j = self.junction[&v];
        if j > l {
            return None;
        }
        Some(self.centres[&v][(l - j) as usize])
    }

    pub fn radius(&self) -> u32 {
        (1 << self.n) - 1
    }

    /// The level-`l` cell holding `v`: kind name and centre. A vertex that
    /// centres a larger copy is a `C` cell of its own.
    pub fn cell(&self, v: P, l: u32) -> (String, P) {
        let Some(c) = self.copy_centre(v, l) else {
            return ("C".into(), v);
        };
        let reach = (1i64 << l) - 1;
        let prot = (0..4u8)
            .filter(|&k| self.adj[&add(c, scale(reach, STEPS[k as usize]))] & (1 << k) != 0)
            .fold(0u8, |acc, k| acc | 1 << k);
        (kind_name(prot), c)
    }

    /// The vertices `R_l`-related to `v`.
    pub fn class(&self, v: P, l: u32) -> std::collections::BTreeSet<P> {
        match self.copy_centre(v, l) {
            None => [v].into(),
            Some(c) => bfs(&self.adj, c, (1 << l) - 1).into_keys().collect(),
        }
    }
}

/// Name of the cell kind with the given protrusion bits.
pub fn kind_name(prot: u8) -> String {
    match prot {
        0b0001 | 0b0010 | 0b0100 | 0b1000 => format!("A{}", prot.trailing_zeros()),
        0b0101 => "B0".into(),
        0b1010 => "B1".into(),
        0b1111 => "C".into(),
        _ => format!("invalid {prot:04b}"),
    }
}

// Vertices within `r` of `c` in the partially built tree; copies are placed
// before their parent links, so this sees exactly the copy being finished.
fn bfs_within(adj: &Adj, c: P, r: u32) -> Vec<P> {
    bfs(adj, c, r).into_keys().collect()
}

/// The literal inflation: `P_1` is the star at `x_1`, and `P_{k+1}` is the
/// union of the four quarter turns about `x_{k+1}` of `P_k` plus the edge
/// from its tip `x_k + (2^k − 1)·r(α_k)` to `x_{k+1}`.
pub fn coded_tree(code: &[u8]) -> (Adj, Vec<P>) {
    let r = |a: u8| STEPS[a as usize % 4];
    let mut xs = vec![(0, 0)];
    for (i, &a) in code.iter().enumerate() {
        xs.push(add(xs[i], scale(1 << i, r(a))));
    }
    let mut cur = Adj::new();
    for s in STEPS {
        link(&mut cur, xs[1], add(xs[1], s));
    }
    for k in 1..code.len() {
        let tip = add(xs[k], scale((1 << k) - 1, r(code[k])));
        link(&mut cur, tip, xs[k + 1]);
        let mut next = Adj::new();
        for q in 0..4 {
            for (&v, &bits) in &cur {
                let w = rot(v, xs[k + 1], q);
                let turned = ((bits << q) | (bits >> (4 - q))) & 0xf;
                *next.entry(w).or_default() |= turned;
            }
        }
        cur = next;
    }
    (cur, xs)
}
