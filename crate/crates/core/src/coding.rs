//! Codes over {0,1,2,3} and {0,1}, decoding of trees back to codes,
//! cofinality, the binary odometer and the count of ends.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ghspace::Window;
use crate::grid::{bfs, direction_of, GridView, Raster, Vertex, ORIGIN};
use crate::kenyon::{self, rdir};

/// A finite word over `{0, …, Q−1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word<const Q: u8>(Vec<u8>);

pub type Code4 = Word<4>;
pub type Code2 = Word<2>;

impl<const Q: u8> Word<Q> {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(&l) = letters.iter().find(|&&l| l >= Q) {
            return Err(Error::InvalidLetter { letter: char::from_digit(l as u32, 36).unwrap_or('?'), base: Q });
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prefix(&self, n: usize) -> Self {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn concat(&self, other: &Self) -> Self {
        Word([self.0.as_slice(), other.0.as_slice()].concat())
    }

    /// All words of length `n` in lexicographic order.
    pub fn all_of_length(n: usize) -> Vec<Self> {
        let total = (Q as usize).pow(n as u32);
        (0..total)
            .map(|mut i| {
                let mut letters = vec![0u8; n];
                for slot in letters.iter_mut().rev() {
                    *slot = (i % Q as usize) as u8;
                    i /= Q as usize;
                }
                Word(letters)
            })
            .collect()
    }
}

impl<const Q: u8> fmt::Display for Word<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl<const Q: u8> FromStr for Word<Q> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| match c.to_digit(10) {
                Some(d) if d < Q as u32 => Ok(d as u8),
                _ => Err(Error::InvalidLetter { letter: c, base: Q }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word(letters))
    }
}

impl<const Q: u8> Serialize for Word<Q> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An eventually periodic sequence `preperiod · period^∞`, always stored in
/// canonical form: primitive period, shortest preperiod.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EvWord<const Q: u8> {
    preperiod: Word<Q>,
    period: Word<Q>,
}

pub type EvCode4 = EvWord<4>;
pub type EvCode2 = EvWord<2>;

impl<const Q: u8> EvWord<Q> {
    pub fn new(preperiod: Word<Q>, period: Word<Q>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyCode);
        }
        let mut per = period.0;
        let p = per.len();
        if let Some(d) = (1..=p).find(|&d| p % d == 0 && (d..p).all(|i| per[i] == per[i - d])) {
            per.truncate(d);
        }
        let mut pre = preperiod.0;
        while pre.last().is_some_and(|&l| Some(&l) == per.last()) {
            pre.pop();
            per.rotate_right(1);
        }
        Ok(EvWord { preperiod: Word(pre), period: Word(per) })
    }

    pub fn parse(preperiod: &str, period: &str) -> Result<Self> {
        EvWord::new(preperiod.parse()?, period.parse()?)
    }

    pub fn periodic(period: Word<Q>) -> Result<Self> {
        EvWord::new(Word::default(), period)
    }

    pub fn preperiod(&self) -> &Word<Q> {
        &self.preperiod
    }

    pub fn period(&self) -> &Word<Q> {
        &self.period
    }

    pub fn letter(&self, i: usize) -> u8 {
        let m = self.preperiod.len();
        if i < m {
            self.preperiod.0[i]
        } else {
            self.period.0[(i - m) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Word<Q> {
        Word((0..n).map(|i| self.letter(i)).collect())
    }

    /// Drops the first `n` letters.
    pub fn shift(&self, n: usize) -> Self {
        let m = self.preperiod.len();
        if n <= m {
            return EvWord::new(Word(self.preperiod.0[n..].to_vec()), self.period.clone()).expect("nonempty period");
        }
        let mut per = self.period.0.clone();
        let k = (n - m) % per.len();
        per.rotate_left(k);
        EvWord::new(Word::default(), Word(per)).expect("nonempty period")
    }
}

impl<const Q: u8> fmt::Display for EvWord<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})^∞", self.preperiod, self.period)
    }
}

/// Whether two sequences agree from some index on.
pub fn cofinal<const Q: u8>(a: &EvWord<Q>, b: &EvWord<Q>) -> bool {
    let p = a.period.len();
    if p != b.period.len() {
        return false;
    }
    let m = a.preperiod.len().max(b.preperiod.len());
    (m..m + p).all(|i| a.letter(i) == b.letter(i))
}

/// The vector `v = Σ 2^i (rdir(a_i) − rdir(b_i))`, for which the tree coded
/// by `b` is the tree coded by `a` translated by `−v`.
pub fn translation_between(a: &Code4, b: &Code4) -> Result<Vertex> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.letters().iter().zip(b.letters()).enumerate().fold(ORIGIN, |acc, (i, (&x, &y))| {
        acc + (1i64 << i) * (rdir(x) - rdir(y))
    }))
}

fn binary_letters(letters: &[u8]) -> Vec<u8> {
    letters.iter().flat_map(|&k| [k % 2, k / 2]).collect()
}

/// Letterwise `0→00, 1→10, 2→01, 3→11`.
pub fn to_binary(a: &Code4) -> Code2 {
    Word(binary_letters(a.letters()))
}

/// Letterwise substitution of an eventually periodic code, in canonical form.
pub fn to_binary_ev(a: &EvCode4) -> EvCode2 {
    EvWord::new(Word(binary_letters(a.preperiod.letters())), Word(binary_letters(a.period.letters())))
        .expect("nonempty period")
}

/// Adds one with carry, least significant letter first. `1^∞` maps to `0^∞`.
pub fn odometer_step(a: &EvCode2) -> EvCode2 {
    let m = a.preperiod.len();
    let p = a.period.len();
    let Some(first_zero) = (0..m + p).find(|&i| a.letter(i) == 0) else {
        return EvWord::periodic(Word(vec![0])).expect("nonempty period");
    };
    // Unroll far enough that the changed letters sit in the preperiod.
    let unrolled = (first_zero + 1).max(m);
    let mut pre: Vec<u8> = (0..unrolled).map(|i| a.letter(i)).collect();
    for l in pre.iter_mut().take(first_zero) {
        *l = 0;
    }
    pre[first_zero] = 1;
    let per = (unrolled..unrolled + p).map(|i| a.letter(i)).collect();
    EvWord::new(Word(pre), Word(per)).expect("nonempty period")
}

/// Adds one to a `k`-bit word modulo `2^k`, least significant bit first.
pub fn odometer_step_finite(w: &Code2) -> Code2 {
    let mut letters = w.0.clone();
    for l in letters.iter_mut() {
        if *l == 0 {
            *l = 1;
            return Word(letters);
        }
        *l = 0;
    }
    Word(letters)
}

/// Tails used by [`orbit_partition_check`].
pub fn sample_tails() -> Vec<EvCode2> {
    [("", "0"), ("", "1"), ("", "01"), ("", "10"), ("", "001"), ("", "011"), ("1", "0"), ("0", "1"), ("", "0111")]
        .iter()
        .map(|(pre, per)| EvWord::parse(pre, per).expect("valid tail"))
        .collect()
}

/// Checks that odometer orbits and cofinality classes agree on `k`-bit
/// prefixes followed by sample tails:
/// the orbit of `0^k·τ` runs through every `w·τ` in `2^k` steps, those
/// sequences are mutually cofinal, the step after returns to the class of
/// the start unless `τ = 1^∞`, and sequences over different tails are cofinal
/// exactly when the tails are. The exceptional pair `0^∞`, `1^∞` is one orbit
/// but two cofinality classes.
pub fn orbit_partition_check(k: usize) -> Result<bool> {
    if !(1..=16).contains(&k) {
        return Err(Error::Precondition(format!("k must lie in 1..=16, got {k}")));
    }
    let tails = sample_tails();
    let ones = EvWord::parse("", "1")?;
    let zeros = EvWord::parse("", "0")?;
    if odometer_step(&ones) != zeros || cofinal(&ones, &zeros) {
        return Ok(false);
    }
    let size = 1usize << k;
    for tail in &tails {
        let start = EvWord::new(Word(vec![0; k]).concat(tail.preperiod()), tail.period().clone())?;
        let mut cur = start.clone();
        let mut seen = BTreeSet::new();
        for _ in 0..size {
            // The first k letters are the counter; the rest must still be the tail.
            if cur.shift(k) != *tail || !cofinal(&cur, &start) {
                return Ok(false);
            }
            seen.insert(cur.prefix(k));
            cur = odometer_step(&cur);
        }
        if seen.len() != size {
            return Ok(false);
        }
        let exceptional = *tail == ones;
        if cofinal(&cur, &start) == exceptional {
            return Ok(false);
        }
        if exceptional && cur != zeros {
            return Ok(false);
        }
    }
    for a in &tails {
        for b in &tails {
            let wa = EvWord::new(Word(vec![1; k]).concat(a.preperiod()), a.period().clone())?;
            let wb = EvWord::new(Word(vec![0; k]).concat(b.preperiod()), b.period().clone())?;
            if cofinal(&wa, &wb) != cofinal(a, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MoveCounts {
    /// Distinct consecutive letters of equal parity.
    pub allers_retours: usize,
    /// Consecutive letters of different parity.
    pub detours: usize,
}

fn classify_pair(a: u8, b: u8, counts: &mut MoveCounts) {
    if a != b {
        if a % 2 == b % 2 {
            counts.allers_retours += 1;
        } else {
            counts.detours += 1;
        }
    }
}

pub fn count_moves(a: &Code4) -> MoveCounts {
    let mut c = MoveCounts::default();
    for w in a.letters().windows(2) {
        classify_pair(w[0], w[1], &mut c);
    }
    c
}

/// Moves of the period read cyclically, including the pair across the wrap.
pub fn count_cyclic_moves(period: &Code4) -> MoveCounts {
    let l = period.letters();
    let mut c = MoveCounts::default();
    for i in 0..l.len() {
        classify_pair(l[i], l[(i + 1) % l.len()], &mut c);
    }
    c
}

/// 2 when the period has an aller-retour and no détour, else 1.
pub fn classify_ends(a: &EvCode4) -> u8 {
    let c = count_cyclic_moves(a.period());
    if c.detours == 0 && c.allers_retours > 0 {
        2
    } else {
        1
    }
}

/// The ball of radius `r` about the basepoint of the tree coded by `a`.
///
/// The rest of the tree meets the coded tree `P_L` only at tips of `P_L`:
/// the tip `x_L + (2^L − 1)·r(α_L)` leading to `x_{L+1}`, and the opposite
/// tip when the first later letter differing from `α_L` is its opposite.
/// The ball of radius `r` is exact once every such tip is at distance at
/// least `r` from the origin.
pub fn coded_window(a: &EvCode4, r: u32) -> Result<Window> {
    let horizon = a.preperiod().len() + a.period().len() + 1;
    for len in 1..=kenyon::MAX_LEVEL as usize + 2 {
        let code = a.prefix(len);
        let p = kenyon::build_pattern(&code)?;
        let x = *kenyon::skeleton(&code).last().expect("nonempty skeleton");
        let next = a.letter(len);
        let reach = (1i64 << len) - 1;
        let mut tips = vec![x + reach * rdir(next)];
        if let Some(m) = (len + 1..len + 1 + horizon).find(|&m| a.letter(m) != next) {
            if a.letter(m) == (next + 2) % 4 {
                tips.push(x - reach * rdir(next));
            }
        }
        let dist = p.distances_from(ORIGIN)?;
        if tips.iter().all(|t| dist[t] >= r) {
            return Window::new(p.intrinsic_ball(ORIGIN, r)?, r);
        }
    }
    Err(Error::Precondition(format!("radius {r} needs a coded tree beyond the supported size")))
}

/// Letters certified by [`decode`] for any window of this radius: letter `n`
/// is guaranteed once the radius reaches `6·2^n − 2`.
pub fn predicted_certified_length(radius: u32) -> usize {
    (0..).take_while(|&n: &u32| n < 40 && 6 * (1u64 << n) - 2 <= radius as u64).count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decoded {
    pub code: Code4,
    pub certified_length: usize,
}

/// Recovers the code of a tree from a window about its basepoint, as far as
/// the window certifies it.
pub fn decode(w: &Window) -> Result<Decoded> {
    // Valence 2 occurs when the first change of letter is to the opposite
    // letter; the sphere step below handles it like any other two-point sphere.
    let val = w.pattern().valence(ORIGIN)?;
    if !(1..=2).contains(&val) {
        return Err(Error::BadBasepoint(val));
    }
    let radius = w.radius() as u64;
    let raster = w.raster();
    let mut letters = Vec::new();
    let mut x = ORIGIN;
    for n in 0u32.. {
        let step = 1u64 << n;
        let dx = w.distance(x).expect("skeleton point in window") as u64;
        if dx + step > radius {
            break;
        }
        let sphere: Vec<Vertex> =
            bfs(raster, x, step as u32).into_iter().filter(|&(_, d)| d as u64 == step).map(|(u, _)| u).collect();
        let dir_of = |u: Vertex| -> Result<u8> {
            let diff = u - x;
            let s = step as i64;
            if diff.x % s != 0 || diff.y % s != 0 {
                return Err(Error::NotInHull(format!("sphere point {u} is off the axes of {x}")));
            }
            direction_of(Vertex::new(diff.x / s, diff.y / s))
                .ok_or_else(|| Error::NotInHull(format!("sphere point {u} is off the axes of {x}")))
        };
        let next = match sphere.as_slice() {
            [only] => *only,
            [a, b] => {
                let big = kenyon::level(n + 2)?;
                let reach = (1u64 << (n + 2)) - 1;
                let mut far = Vec::new();
                for &c in [a, b] {
                    let dc = w.distance(c).expect("sphere point in window") as u64;
                    if dc + reach > radius {
                        return finish(letters);
                    }
                    if big.probe().faithful_at(raster, c) {
                        far.push(c);
                    }
                }
                match far.as_slice() {
                    [c] => {
                        if c == a {
                            *b
                        } else {
                            *a
                        }
                    }
                    _ => {
                        return Err(Error::NotInHull(format!(
                            "{} of the two sphere points about {x} look like the origin of the Kenyon tree",
                            far.len()
                        )))
                    }
                }
            }
            other => {
                return Err(Error::NotInHull(format!("sphere of radius {step} about {x} has {} points", other.len())))
            }
        };
        letters.push(dir_of(next)?);
        x = next;
    }
    finish(letters)
}

fn finish(letters: Vec<u8>) -> Result<Decoded> {
    let n = letters.len();
    Ok(Decoded { code: Word(letters), certified_length: n })
}

/// Components of the window minus the ball of radius `inner` that reach the
/// window boundary.
pub fn boundary_components(w: &Window, inner: u32) -> usize {
    let raster: &Raster = w.raster();
    let mut seen = std::collections::HashSet::new();
    let mut count = 0;
    for &(start, d) in w.bfs_order() {
        if d != inner + 1 || seen.contains(&start) {
            continue;
        }
        let mut stack = vec![start];
        seen.insert(start);
        let mut touches = false;
        while let Some(u) = stack.pop() {
            let du = w.distance(u).expect("window vertex");
            touches |= du == w.radius();
            for k in raster.dirs_at(u).into_iter().flat_map(|dirs| dirs.iter()) {
                let t = u.step(k);
                if w.distance(t).is_some_and(|e| e > inner) && seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        if touches {
            count += 1;
        }
    }
    count
}
