//! Cell structure against the recursive construction of `K_7`, where every
//! vertex knows the copies containing it.

mod common;

use std::collections::BTreeSet;

use common::*;
use gk_core::af::rn_class;
use gk_core::kenyon::{cell_members, motif, substitute, vertex_cell, MotifId, MotifKind};
use gk_core::{Vertex, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn window(adj: &Adj, c: P, r: u32) -> Window {
    Window::new(to_pattern(&ball(adj, c, r)), r).unwrap()
}

#[test]
fn substitution_matches_the_copies() {
    let tree = Kenyon::new(7);
    let depth = bfs(&tree.adj, (0, 0), u32::MAX);
    for l in 1..=4u32 {
        let mut seen = BTreeSet::new();
        let mut centres: Vec<P> = tree.junction.iter().filter(|&(_, &j)| j >= l).map(|(&c, _)| c).collect();
        centres.sort();
        for c in centres {
            // Every tip of the cell must be certified inside K_7.
            if depth[&c] + (1 << l) >= tree.radius() {
                continue;
            }
            let (kind, _) = tree.cell(c, l);
            let mut parts: Vec<(String, P)> = bfs(&tree.adj, c, (1 << l) - 1)
                .into_keys()
                .map(|u| {
                    let (k, at) = tree.cell(u, l - 1);
                    (k, sub(at, c))
                })
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            parts.sort();
            let id = MotifId::new(l, kind.parse().unwrap());
            let mut lib: Vec<(String, P)> =
                substitute(id).unwrap().iter().map(|p| (p.motif.kind.to_string(), (p.center.x, p.center.y))).collect();
            lib.sort();
            assert_eq!(parts, lib, "{kind} at level {l} centred at {c:?}");
            seen.insert(kind);
        }
        assert_eq!(seen.len(), 7, "all kinds occur at level {l}");
    }
}

#[test]
fn motifs_are_the_copies_with_protrusions() {
    let tree = Kenyon::new(6);
    for l in 0..=3u32 {
        for kind in MotifKind::ALL {
            let lib = from_pattern(&motif(MotifId::new(l, kind)).unwrap());
            let reach = (1i64 << l) - 1;
            let mut own = ball(&tree.adj, (0, 0), reach as u32);
            if kind == MotifKind::C {
                own = ball(&tree.adj, (0, 0), 1 << l);
            } else {
                for k in kind.protrusions().iter() {
                    let tip = scale(reach, STEPS[k as usize]);
                    link(&mut own, tip, add(tip, STEPS[k as usize]));
                }
            }
            assert_eq!(lib, own, "{kind}_{l}");
        }
    }
}

#[test]
fn cells_are_recognised_uniquely() {
    let tree = Kenyon::new(7);
    let near: Vec<P> = {
        let mut v: Vec<P> = bfs(&tree.adj, (0, 0), 127 - 48).into_keys().collect();
        v.sort();
        v
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let b = near[rng.gen_range(0..near.len())];
        let w = window(&tree.adj, b, 48);
        for n in 0..=4u32 {
            let cell = vertex_cell(&w, n).unwrap_or_else(|e| panic!("{b:?} at level {n}: {e}"));
            let (kind, c) = tree.cell(b, n);
            assert_eq!((cell.motif.kind.to_string(), (cell.center.x + b.0, cell.center.y + b.1)), (kind, c));
            let members: BTreeSet<P> =
                cell_members(&cell).unwrap().iter().map(|m| (m.x + b.0, m.y + b.1)).collect();
            assert_eq!(members, tree.class(b, n), "{b:?} at level {n}");
            if n <= 3 {
                let class: BTreeSet<P> =
                    rn_class(&w, n).unwrap().offsets.iter().map(|m: &Vertex| (m.x + b.0, m.y + b.1)).collect();
                assert_eq!(class, members);
            }
        }
    }
}

#[test]
fn short_windows_are_refused() {
    let tree = Kenyon::new(5);
    let w = window(&tree.adj, (0, 0), 11);
    assert!(vertex_cell(&w, 2).is_err());
    assert!(vertex_cell(&window(&tree.adj, (0, 0), 12), 2).is_ok());
}
