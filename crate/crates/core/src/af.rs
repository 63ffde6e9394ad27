//! The finite relations `R_n`, the Bratteli diagram of the substitution and
//! the path map Ψ sending a pointed tree to its tower of cells.
//!
//! Two vertices are `R_n`-related when they lie in the ball part (the copy of
//! `K_n`) of one common level-`n` cell of kind A or B. A kind-C cell has the
//! junction at its centre as its only member, so the relation is trivial
//! there. The modified relation `R'_n` attaches each such junction to the
//! cell on its east side.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ghspace::Window;
use crate::grid::{Vertex, ORIGIN};
use crate::kenyon::{self, cell_members, kenyon_ball, rdir, substitute, CellPlacement, MotifId, MotifKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BratteliEdge {
    /// `None` for edges out of the source.
    pub from: Option<MotifId>,
    pub to: MotifId,
    #[serde(serialize_with = "kenyon::ser_vertex")]
    pub offset: Vertex,
}

/// Vertex sets `V_0 = {source}` and `V_{m+1}` = the seven level-`m` kinds,
/// for `m < levels`. `edges[0]` leaves the source; `edges[m]` joins level
/// `m − 1` to level `m`, one edge per placement of a sub-cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BratteliDiagram {
    pub levels: u32,
    pub edges: Vec<Vec<BratteliEdge>>,
}

pub fn bratteli(levels: u32) -> Result<BratteliDiagram> {
    if levels == 0 {
        return Err(Error::Precondition("a diagram needs at least one level".into()));
    }
    let mut edges = vec![MotifKind::ALL
        .iter()
        .map(|&k| BratteliEdge { from: None, to: MotifId::new(0, k), offset: ORIGIN })
        .collect::<Vec<_>>()];
    for m in 1..levels {
        let mut layer = Vec::new();
        for k in MotifKind::ALL {
            let to = MotifId::new(m, k);
            for cell in substitute(to)? {
                layer.push(BratteliEdge { from: Some(cell.motif), to, offset: cell.center });
            }
        }
        edges.push(layer);
    }
    Ok(BratteliDiagram { levels, edges })
}

impl BratteliDiagram {
    /// Rows indexed by level-`m` kinds, columns by level-`(m−1)` kinds, both
    /// in the order A0 A1 A2 A3 B0 B1 C; entries count placements.
    pub fn incidence(&self, m: u32) -> Option<[[u32; 7]; 7]> {
        if m == 0 || m >= self.levels {
            return None;
        }
        let mut mat = [[0u32; 7]; 7];
        for e in &self.edges[m as usize] {
            let from = e.from.expect("inner edges have a source cell");
            mat[e.to.kind.index()][from.kind.index()] += 1;
        }
        Some(mat)
    }

    pub fn has_edge(&self, from: MotifId, to: MotifId, offset: Vertex) -> bool {
        self.edges
            .get(to.level as usize)
            .is_some_and(|layer| layer.iter().any(|e| e.from == Some(from) && e.to == to && e.offset == offset))
    }

    /// Graphviz text: one rank per level, one edge line per placement.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph bratteli {\n  rankdir=TB;\n  node [shape=circle];\n");
        s.push_str("  { rank=same; source [label=\"•\"]; }\n");
        for m in 0..self.levels {
            s.push_str("  { rank=same;");
            for k in MotifKind::ALL {
                let _ = write!(s, " \"{}\" [label=\"{}\"];", MotifId::new(m, k), MotifId::new(m, k));
            }
            s.push_str(" }\n");
        }
        for layer in &self.edges {
            for e in layer {
                let from = e.from.map_or_else(|| "source".to_string(), |f| format!("\"{f}\""));
                let _ = writeln!(s, "  {from} -> \"{}\" [label=\"{},{}\"];", e.to, e.offset.x, e.offset.y);
            }
        }
        s.push_str("}\n");
        s
    }
}

/// The cells containing the basepoint at levels `0..depth`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiPath {
    pub cells: Vec<CellPlacement>,
}

impl PsiPath {
    /// Whether consecutive cells are joined by an edge of the diagram with
    /// the recorded relative placement.
    pub fn is_path_of(&self, d: &BratteliDiagram) -> bool {
        self.cells
            .windows(2)
            .all(|w| d.has_edge(w[0].motif, w[1].motif, w[0].center - w[1].center))
    }
}

pub fn psi_prefix(w: &Window, depth: u32) -> Result<PsiPath> {
    let need = kenyon::recognizability_radius(depth);
    if (w.radius() as u64) < need {
        return Err(Error::Ambiguous(format!("depth {depth} needs radius {need}, window has {}", w.radius())));
    }
    let cells = (0..depth).map(|k| kenyon::vertex_cell(w, k)).collect::<Result<Vec<_>>>()?;
    for pair in cells.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let nested = substitute(hi.motif)?
            .iter()
            .any(|c| c.motif == lo.motif && c.center == lo.center - hi.center);
        if !nested {
            return Err(Error::NotInHull(format!(
                "level-{} cell {} at {} does not sit inside {} at {}",
                lo.motif.level, lo.motif.kind, lo.center, hi.motif.kind, hi.center
            )));
        }
    }
    Ok(PsiPath { cells })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RelationVariant {
    #[default]
    Standard,
    /// Junction basepoints join the cell at `2^n·rdir(0)`.
    Modified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RnClass {
    pub level: u32,
    #[serde(serialize_with = "ser_vertices")]
    pub offsets: Vec<Vertex>,
    /// Members whose own class could be recomputed inside the window.
    pub verified_members: usize,
    /// Every verified member has the same class.
    pub closed: bool,
}

fn ser_vertices<S: serde::Serializer>(vs: &[Vertex], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<[i64; 2]> = vs.iter().map(|u| [u.x, u.y]).collect();
    v.serialize(s)
}

fn check_radius(w: &Window, n: u32) -> Result<()> {
    let need = kenyon::recognizability_radius(n);
    if (w.radius() as u64) < need {
        return Err(Error::Ambiguous(format!("level {n} needs radius {need}, window has {}", w.radius())));
    }
    Ok(())
}

/// The `R_n` class of the vertex `v` of `g`, which must be exact on the ball
/// of radius `3·2^n` about `v`.
fn class_at<G: crate::grid::GridView + ?Sized>(
    g: &G,
    v: Vertex,
    n: u32,
    variant: RelationVariant,
) -> Result<BTreeSet<Vertex>> {
    let cell = kenyon::cell_at(g, v, n)?;
    let mut out: BTreeSet<Vertex> = cell_members(&cell)?.into_iter().collect();
    if variant == RelationVariant::Modified {
        let east = 1i64 << n;
        match cell.motif.kind {
            MotifKind::C => {
                let arm = kenyon::cell_at(g, cell.center + east * rdir(0), n)?;
                out.extend(cell_members(&arm)?);
            }
            kind if kind.protrusions().has(2) => {
                out.insert(cell.center - east * rdir(0));
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Whether the basepoint and `target` are `R_n`-related.
pub fn rn_related(w: &Window, target: Vertex, n: u32) -> Result<bool> {
    rn_related_with(w, target, n, RelationVariant::Standard)
}

pub fn rn_related_with(w: &Window, target: Vertex, n: u32, variant: RelationVariant) -> Result<bool> {
    if !w.pattern().contains(target) {
        return Err(Error::VertexNotInPattern(target));
    }
    check_radius(w, n)?;
    if target == ORIGIN {
        return Ok(true);
    }
    Ok(class_at(w.raster(), ORIGIN, n, variant)?.contains(&target))
}

pub fn rn_class(w: &Window, n: u32) -> Result<RnClass> {
    rn_class_with(w, n, RelationVariant::Standard)
}

pub fn rn_class_with(w: &Window, n: u32, variant: RelationVariant) -> Result<RnClass> {
    check_radius(w, n)?;
    let class = class_at(w.raster(), ORIGIN, n, variant)?;
    // Recompute the class from each member whose neighbourhood is certified.
    let reach = 3u64 << n;
    let mut verified = 0;
    let mut closed = true;
    for &m in &class {
        let Some(d) = w.distance(m) else {
            closed = false;
            continue;
        };
        if d as u64 + reach > w.radius() as u64 {
            continue;
        }
        verified += 1;
        if class_at(w.raster(), m, n, variant)? != class {
            closed = false;
        }
    }
    Ok(RnClass { level: n, offsets: class.into_iter().collect(), verified_members: verified, closed })
}

/// `R_n`-related implies `R_{n+1}`-related, on this instance.
pub fn rn_monotone_check(w: &Window, target: Vertex, n: u32) -> Result<bool> {
    check_radius(w, n + 1)?;
    Ok(!rn_related(w, target, n)? || rn_related(w, target, n + 1)?)
}

/// Compares `R_n`-relatedness of the basepoint and `target` with agreement
/// of their Ψ paths at levels `n..depth`.
pub fn tail_equivalence_check(w: &Window, target: Vertex, n: u32, depth: u32) -> Result<bool> {
    if n >= depth {
        return Err(Error::Precondition(format!("level {n} must be below depth {depth}")));
    }
    let related = rn_related(w, target, n)?;
    let here = psi_prefix(w, depth)?;
    let there = psi_prefix(&w.recut(target)?, depth)?;
    let same = (n as usize..depth as usize).all(|k| {
        let (a, b) = (here.cells[k], there.cells[k]);
        a.motif == b.motif && a.center == b.center + target
    });
    Ok(related == same)
}

/// `V(2^n − 1)`, the bound on class sizes.
pub fn class_size_bound(n: u32) -> Result<usize> {
    Ok(kenyon_ball(n)?.pattern().vertex_count())
}
