use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::CriterionReport;
use crate::af::{bratteli, psi_prefix, rn_class, rn_related, tail_equivalence_check};
use crate::coding::{
    boundary_components, classify_ends, coded_window, decode, odometer_step_finite, orbit_partition_check,
    predicted_certified_length, Code2, Code4, EvCode4, Word,
};
use crate::error::Result;
use crate::ghspace::{agreement_radius, periodic_witnesses, repetitivity_radius, Window};
use crate::grid::{Raster, Vertex, ORIGIN};
use crate::kenyon::{self, build_pattern, kenyon_ball, kenyon_window, motif, rdir, skeleton, substitute, MotifId, MotifKind};
use crate::measure::{growth, invariance_defect, to_f64, valence_histogram};

type Check = fn(u64) -> Result<(bool, Value)>;

/// Every check, by identifier.
pub const CRITERIA: [(u8, &str, Check); 12] = [
    (1, "ball identity", ball_identity),
    (2, "decode round trip", round_trip),
    (3, "translation formula", translation_formula),
    (4, "valence fractions", valence_fractions),
    (5, "growth", growth_formula),
    (6, "invariance defect", invariance),
    (7, "substitution table", substitution_table),
    (8, "odometer and cofinality", odometer),
    (9, "ends", ends),
    (10, "repetitivity and aperiodicity", repetitivity),
    (11, "ultrametric", ultrametric),
    (12, "finite relations", finite_relations),
];

pub fn criterion(id: u8, seed: u64) -> CriterionReport {
    let &(id, name, check) = CRITERIA.iter().find(|c| c.0 == id).expect("known criterion");
    let (passed, details) = match check(seed) {
        Ok(r) => r,
        Err(e) => (false, json!({ "error": e.to_string() })),
    };
    CriterionReport { id, name, passed, details }
}

fn ev(pre: &str, per: &str) -> Result<EvCode4> {
    EvCode4::parse(pre, per)
}

fn ball_identity(seed: u64) -> Result<(bool, Value)> {
    let mut codes: Vec<Code4> = (1..=5).flat_map(Code4::all_of_length).collect();
    let exhaustive = codes.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        codes.push(Word::new((0..8).map(|_| rng.gen_range(0..4u8)).collect())?);
    }
    let balls: Vec<_> = (1..=8).map(kenyon_ball).collect::<Result<_>>()?;
    let results = codes
        .par_iter()
        .map(|code| {
            let p = build_pattern(code)?;
            let raster = Raster::from_pattern(&p);
            let xs = skeleton(code);
            let bad: Vec<usize> = (1..=code.len())
                .filter(|&k| Window::cut(&raster, xs[k], (1 << k) - 1).map_or(true, |w| w != *balls[k - 1]))
                .collect();
            Ok((code.len(), bad))
        })
        .collect::<Result<Vec<_>>>()?;
    let checked: usize = results.iter().map(|r| r.0).sum();
    let mismatches: Vec<String> = codes
        .iter()
        .zip(&results)
        .flat_map(|(c, (_, bad))| bad.iter().map(move |k| format!("{c}@{k}")))
        .collect();
    Ok((
        mismatches.is_empty(),
        json!({
            "exhaustive_codes": exhaustive,
            "random_codes": 100,
            "balls_checked": checked,
            "mismatches": mismatches,
        }),
    ))
}

fn round_trip(_seed: u64) -> Result<(bool, Value)> {
    let radius = 6 * (1 << 4) - 2;
    let codes = Code4::all_of_length(5);
    let padding = Code4::new(vec![0; 3])?;
    let failures: Vec<String> = codes
        .par_iter()
        .filter_map(|c| {
            // The basepoint of the finite coded tree is a leaf, and the ball
            // stays clear of its other tips.
            let ok = build_pattern(&c.concat(&padding))
                .and_then(|p| Window::cut(&p, ORIGIN, radius))
                .and_then(|w| decode(&w))
                .is_ok_and(|d| {
                    d.certified_length >= 5
                        && d.certified_length >= predicted_certified_length(radius)
                        && d.code.prefix(5) == *c
                });
            (!ok).then(|| c.to_string())
        })
        .collect();
    Ok((
        failures.is_empty(),
        json!({ "codes": codes.len(), "padding": padding.to_string(), "window_radius": radius, "failures": failures }),
    ))
}

fn translation_formula(_seed: u64) -> Result<(bool, Value)> {
    let codes = Code4::all_of_length(3);
    let trees: Vec<_> = codes.iter().map(build_pattern).collect::<Result<_>>()?;
    let mut failures = Vec::new();
    for (a, pa) in codes.iter().zip(&trees) {
        for (b, pb) in codes.iter().zip(&trees) {
            let v = a
                .letters()
                .iter()
                .zip(b.letters())
                .enumerate()
                .fold(ORIGIN, |acc, (i, (&x, &y))| acc + (1i64 << i) * (rdir(x) - rdir(y)));
            // The trees coincide as subgraphs; their basepoints differ by v.
            let moved = pa.translate(-v);
            if moved.with_basepoint(ORIGIN).ok().as_ref() != Some(pb) {
                failures.push(format!("{a}/{b}"));
            }
        }
    }
    Ok((failures.is_empty(), json!({ "pairs": codes.len() * codes.len(), "failures": failures })))
}

fn valence_fractions(_seed: u64) -> Result<(bool, Value)> {
    let h = valence_histogram(511)?;
    let target = [0.5, 0.25, 0.0, 0.25];
    let f: Vec<f64> = h.fractions.iter().map(to_f64).collect();
    let within = f.iter().zip(target).all(|(x, t)| (x - t).abs() <= 0.01);
    let low = f[0] + f[1];
    let passed = within && (low - 0.75).abs() <= 0.01 && h.counts[2] == 0;
    Ok((
        passed,
        json!({
            "radius": h.radius,
            "volume": h.volume,
            "counts": h.counts,
            "fractions": h.fractions.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "valence_at_most_two": low,
            "expected_valence_at_most_two": 0.75,
        }),
    ))
}

fn growth_formula(_seed: u64) -> Result<(bool, Value)> {
    let mut rows = Vec::new();
    let mut passed = true;
    for k in 0..=9u32 {
        let v = growth((1 << k) - 1)?;
        let expect = (4u64.pow(k + 1) - 1) / 3;
        passed &= v == expect;
        rows.push(json!({ "k": k, "volume": v, "expected": expect }));
    }
    Ok((passed, Value::Array(rows)))
}

fn invariance(_seed: u64) -> Result<(bool, Value)> {
    let radii = [15u32, 63, 255];
    let mut rows = Vec::new();
    let mut passed = true;
    for kind in MotifKind::ALL {
        let p = motif(MotifId::new(0, kind))?;
        for v in p.vertices() {
            let ds = radii.iter().map(|&n| invariance_defect(&p, v, n)).collect::<Result<Vec<_>>>()?;
            let bounded = ds.iter().all(|d| d.holds());
            // The basepoint itself has no defect at any radius.
            let decays = v == ORIGIN || ds[2].defect < ds[0].defect;
            passed &= bounded && decays;
            rows.push(json!({
                "motif": kind.to_string(),
                "shift": [v.x, v.y],
                "defects": ds.iter().map(|d| d.defect.to_string()).collect::<Vec<_>>(),
                "bounds": ds.iter().map(|d| d.bound.to_string()).collect::<Vec<_>>(),
                "bounded": bounded,
                "decays": decays,
            }));
        }
    }
    Ok((passed, json!({ "radii": radii, "rows": rows })))
}

/// Level-0 kinds making up each level-1 cell, with multiplicity.
const EXPECTED_LEVEL_ONE: [(&str, &[(&str, u32)]); 7] = [
    ("A0", &[("C", 1), ("A0", 1), ("A1", 1), ("A3", 1), ("B0", 1)]),
    ("A1", &[("C", 1), ("A0", 1), ("A1", 1), ("A2", 1), ("B1", 1)]),
    ("A2", &[("C", 1), ("A1", 1), ("A2", 1), ("A3", 1), ("B0", 1)]),
    ("A3", &[("C", 1), ("A0", 1), ("A2", 1), ("A3", 1), ("B1", 1)]),
    ("B0", &[("C", 1), ("A1", 1), ("A3", 1), ("B0", 2)]),
    ("B1", &[("C", 1), ("A0", 1), ("A2", 1), ("B1", 2)]),
    ("C", &[("C", 1), ("B0", 2), ("B1", 2)]),
];

fn substitution_table(_seed: u64) -> Result<(bool, Value)> {
    let mut passed = true;
    let mut rows = BTreeMap::new();
    for (name, expected) in EXPECTED_LEVEL_ONE {
        let kind: MotifKind = name.parse()?;
        let mut got: BTreeMap<String, u32> = BTreeMap::new();
        for cell in substitute(MotifId::new(1, kind))? {
            *got.entry(cell.motif.kind.to_string()).or_default() += 1;
        }
        let want: BTreeMap<String, u32> = expected.iter().map(|&(k, m)| (k.to_string(), m)).collect();
        passed &= got == want;
        rows.insert(name.to_string(), json!({ "computed": got, "expected": want }));
    }
    let d = bratteli(4)?;
    let mats: Vec<_> = (1..=3).map(|m| d.incidence(m).expect("inner level")).collect();
    let sums_five = mats.iter().all(|m| m.iter().all(|row| row.iter().sum::<u32>() == 5));
    let stationary = mats.windows(2).all(|w| w[0] == w[1]);
    passed &= sums_five && stationary;
    Ok((
        passed,
        json!({
            "decompositions": rows,
            "incidence": mats[0],
            "row_sums_five": sums_five,
            "stationary_levels_1_to_3": stationary,
        }),
    ))
}

fn odometer(_seed: u64) -> Result<(bool, Value)> {
    let mut cycles = Vec::new();
    for k in 1..=12usize {
        let start: Code2 = Word::new(vec![0; k])?;
        let mut cur = odometer_step_finite(&start);
        let mut len = 1u64;
        while cur != start && len <= 1 << k {
            cur = odometer_step_finite(&cur);
            len += 1;
        }
        cycles.push(len);
    }
    let single = cycles.iter().enumerate().all(|(i, &l)| l == 1 << (i + 1));
    let partition = orbit_partition_check(10)?;
    Ok((single && partition, json!({ "cycle_lengths": cycles, "orbit_partition_10": partition })))
}

/// Twenty eventually periodic codes with periods of length at most 4.
pub(crate) const ENDS_SUITE: [(&str, &str); 20] = [
    ("", "0"),
    ("", "1"),
    ("", "02"),
    ("", "13"),
    ("", "01"),
    ("", "12"),
    ("", "23"),
    ("", "30"),
    ("3", "02"),
    ("1", "20"),
    ("", "0022"),
    ("", "0213"),
    ("21", "13"),
    ("", "012"),
    ("", "0123"),
    ("", "002"),
    ("0", "3"),
    ("", "0220"),
    ("", "0021"),
    ("33", "2"),
];

fn ends(_seed: u64) -> Result<(bool, Value)> {
    let rows = ENDS_SUITE
        .par_iter()
        .map(|&(pre, per)| {
            let a = ev(pre, per)?;
            let big = coded_window(&a, 256)?;
            let counts: Vec<usize> =
                [16u32, 32, 64, 128, 256].iter().map(|&r| boundary_components(&big.shrink(r), 8)).collect();
            let stable = counts[3] == counts[4];
            let predicted = classify_ends(&a);
            let ok = stable && counts[4] == predicted as usize;
            Ok((ok, json!({ "code": a.to_string(), "classified": predicted, "boundary_components": counts, "agrees": ok })))
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|r| r.0);
    Ok((passed, Value::Array(rows.into_iter().map(|r| r.1).collect())))
}

fn repetitivity(_seed: u64) -> Result<(bool, Value)> {
    let w = kenyon_window(511)?;
    let radii = [1u32, 3, 7, 15]
        .iter()
        .map(|&r| repetitivity_radius(&w, r))
        .collect::<Result<Vec<_>>>()?;
    let monotone = radii.windows(2).all(|p| p[0] <= p[1]);
    let small = w.shrink(255);
    let periods: Vec<[i64; 2]> = periodic_witnesses(&small, 32).iter().map(|v| [v.x, v.y]).collect();
    Ok((
        monotone && periods.is_empty(),
        json!({
            "window_radius": w.radius(),
            "repetitivity_radii": { "1": radii[0], "3": radii[1], "7": radii[2], "15": radii[3] },
            "monotone": monotone,
            "periodic_vectors_up_to_32": periods,
        }),
    ))
}

fn ultrametric(seed: u64) -> Result<(bool, Value)> {
    // Basepoints drawn from a small pool of leaves so that agreement radii vary.
    let host = kenyon_ball(7)?;
    let radius = 32u32;
    let leaves: Vec<Vertex> = host
        .bfs_order()
        .iter()
        .filter(|&&(v, d)| d + radius <= host.radius() && host.pattern().valence(v).is_ok_and(|k| k == 1))
        .map(|&(v, _)| v)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11);
    let pool: Vec<Window> = (0..24)
        .map(|_| Window::cut(host.raster(), leaves[rng.gen_range(0..leaves.len())], radius))
        .collect::<Result<_>>()?;
    let mut violations = 0;
    let mut histogram: BTreeMap<u32, usize> = BTreeMap::new();
    for _ in 0..1000 {
        let [a, b, c] = [0; 3].map(|_| &pool[rng.gen_range(0..pool.len())]);
        let (ab, bc, ac) = (agreement_radius(a, b).radius, agreement_radius(b, c).radius, agreement_radius(a, c).radius);
        *histogram.entry(ac).or_default() += 1;
        if ac < ab.min(bc) {
            violations += 1;
        }
    }
    let histogram: BTreeMap<String, usize> = histogram.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    Ok((violations == 0, json!({ "triples": 1000, "violations": violations, "radius_histogram": histogram })))
}

fn finite_relations(seed: u64) -> Result<(bool, Value)> {
    let base = kenyon_ball(5)?;
    let host = kenyon_ball(7)?;
    let depth = 4u32;
    let radius = kenyon::recognizability_radius(depth) as u32;
    let diagram = bratteli(depth)?;
    let bounds: Vec<usize> = (0..=3).map(crate::af::class_size_bound).collect::<Result<_>>()?;
    let points: Vec<Vertex> = base.pattern().vertices().collect();
    let per_point = points
        .par_iter()
        .map(|&b| {
            let w = Window::cut(host.raster(), b, radius)?;
            let mut sizes = [0usize; 4];
            let mut ok = true;
            for n in 0..=3u32 {
                let class = rn_class(&w, n)?;
                sizes[n as usize] = class.offsets.len();
                ok &= class.offsets.len() <= bounds[n as usize] && class.closed;
                for &t in &class.offsets {
                    ok &= rn_related(&w, t, n + 1)?;
                }
            }
            let path_ok = psi_prefix(&w, depth)?.is_path_of(&diagram);
            Ok((sizes, ok, path_ok))
        })
        .collect::<Result<Vec<_>>>()?;
    let classes_ok = per_point.iter().all(|r| r.1);
    let paths_ok = per_point.iter().all(|r| r.2);
    let max_sizes: Vec<usize> = (0..4).map(|n| per_point.iter().map(|r| r.0[n]).max().unwrap_or(0)).collect();

    // Sampled tail harness: targets near the basepoint, half inside its
    // level-n neighbourhood.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x12);
    let mut samples = Vec::new();
    for _ in 0..200 {
        let b = points[rng.gen_range(0..points.len())];
        let n = rng.gen_range(0..=2u32);
        let reach = if rng.gen_bool(0.5) { 1u32 << n } else { 1u32 << (n + 1) };
        samples.push((b, n, reach, rng.gen::<u64>()));
    }
    let tail = samples
        .par_iter()
        .map(|&(b, n, reach, pick)| {
            let d = n + 2;
            let w = Window::cut(host.raster(), b, kenyon::recognizability_radius(d) as u32 + reach)?;
            let near: Vec<Vertex> =
                w.bfs_order().iter().take_while(|&&(_, e)| e <= reach).map(|&(v, _)| v).collect();
            let t = near[(pick % near.len() as u64) as usize];
            Ok((tail_equivalence_check(&w, t, n, d)?, rn_related(&w, t, n)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let disagreements = tail.iter().filter(|r| !r.0).count();
    let related = tail.iter().filter(|r| r.1).count();
    Ok((
        classes_ok && paths_ok && disagreements == 0,
        json!({
            "basepoints": points.len(),
            "class_size_bounds": bounds,
            "max_class_sizes": max_sizes,
            "classes_bounded_closed_monotone": classes_ok,
            "psi_paths_valid": paths_ok,
            "tail_samples": tail.len(),
            "tail_related_samples": related,
            "tail_disagreements": disagreements,
        }),
    ))
}
