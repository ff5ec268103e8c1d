//! Rank-two combinatorics: ℰ-sequences, quiddity cycles and triangulations.
//!
//! An ℰ-sequence runs from `(0,1)` to `(1,0)`; each step of its recursive
//! construction inserts the sum of two neighbours. Inserting a vertex is
//! the same as gluing an ear onto a polygon triangulation, and the
//! coefficients `cᵢ` with `vᵢ₋₁ + vᵢ₊₁ = cᵢ·vᵢ` form the quiddity cycle of
//! the corresponding frieze.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

pub type Pair = [i64; 2];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rank2Error {
    #[error("need at least two roots, got {0}")]
    TooFewRoots(usize),
    #[error("root {0:?} is zero")]
    ZeroRoot(Pair),
    #[error("roots {0:?} and {1:?} are parallel")]
    Parallel(Pair, Pair),
    #[error("not an ℰ-sequence: {0}")]
    NotESequence(Violation),
}

/// Why a sequence of vectors fails to be an ℰ-sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    #[error("sequence has length {len}")]
    TooShort { len: usize },
    #[error("sequence must start at (0,1) and end at (1,0)")]
    Endpoints,
    #[error("entry {position} = {entry:?} leaves ℕ₀²")]
    Negative { position: usize, entry: Pair },
    #[error("entries {position} and {} are not a unimodular pair", position + 1)]
    NotUnimodular { position: usize },
    #[error("neighbours of entry {position} do not sum to a multiple of it")]
    NotMultiple { position: usize },
    #[error("no entry can be removed from {remaining:?}")]
    Irreducible { remaining: Vec<Pair> },
    #[error("root {root:?} has non-integral coordinates in the wall basis")]
    NonIntegral { root: Pair },
}

/// A validated ℰ-sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ESequence(Vec<Pair>);

impl ESequence {
    pub fn new(entries: Vec<Pair>) -> Result<Self, Violation> {
        check_esequence(&entries)?;
        Ok(Self(entries))
    }

    /// The length-two sequence `((0,1),(1,0))`.
    pub fn seed() -> Self {
        Self(vec![[0, 1], [1, 0]])
    }

    pub fn entries(&self) -> &[Pair] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn quiddity(&self) -> QuiddityCycle {
        quiddity_of(self)
    }
}

/// Cyclic sequence of non-negative integers, aligned with the entries of
/// the ℰ-sequence it came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct QuiddityCycle(pub Vec<i64>);

impl QuiddityCycle {
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Whether `other` is a rotation of `self`.
    pub fn is_rotation_of(&self, other: &QuiddityCycle) -> bool {
        let n = self.0.len();
        n == other.0.len() && (0..n.max(1)).any(|s| (0..n).all(|i| self.0[(i + s) % n] == other.0[i]))
    }
}

/// Triangulation of a convex `n`-gon by `n − 3` non-crossing diagonals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Triangulation {
    pub n: usize,
    pub diagonals: BTreeSet<(usize, usize)>,
}

fn det(a: Pair, b: Pair) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn add(a: Pair, b: Pair) -> Pair {
    [a[0] + b[0], a[1] + b[1]]
}

/// Coefficient `c ≥ 0` with `sum = c·v`, if any.
fn multiple_of(sum: Pair, v: Pair) -> Option<i64> {
    if det(sum, v) != 0 {
        return None;
    }
    let c = if v[0] != 0 { sum[0] / v[0] } else { sum[1] / v[1] };
    (c >= 0 && [c * v[0], c * v[1]] == sum).then_some(c)
}

/// Checks the ℰ-sequence recursion by removing ears until `((0,1),(1,0))`
/// is left.
pub fn check_esequence(entries: &[Pair]) -> Result<(), Violation> {
    let n = entries.len();
    if n < 2 {
        return Err(Violation::TooShort { len: n });
    }
    if entries[0] != [0, 1] || entries[n - 1] != [1, 0] {
        return Err(Violation::Endpoints);
    }
    if let Some((position, &entry)) = entries
        .iter()
        .enumerate()
        .find(|(_, v)| v[0] < 0 || v[1] < 0)
    {
        return Err(Violation::Negative { position, entry });
    }
    if let Some(position) = (0..n - 1).find(|&i| det(entries[i], entries[i + 1]) != -1) {
        return Err(Violation::NotUnimodular { position });
    }
    if let Some(position) =
        (1..n - 1).find(|&i| multiple_of(add(entries[i - 1], entries[i + 1]), entries[i]).is_none())
    {
        return Err(Violation::NotMultiple { position });
    }
    let mut rest = entries.to_vec();
    while rest.len() > 2 {
        match (1..rest.len() - 1).find(|&i| add(rest[i - 1], rest[i + 1]) == rest[i]) {
            Some(i) => {
                rest.remove(i);
            }
            None => return Err(Violation::Irreducible { remaining: rest }),
        }
    }
    Ok(())
}

/// The `n − 1` one-step extensions of `s`.
pub fn esequence_children(s: &ESequence) -> Vec<ESequence> {
    let v = s.entries();
    (0..v.len() - 1)
        .map(|i| {
            let mut child = Vec::with_capacity(v.len() + 1);
            child.extend_from_slice(&v[..=i]);
            child.push(add(v[i], v[i + 1]));
            child.extend_from_slice(&v[i + 1..]);
            ESequence(child)
        })
        .collect()
}

/// All distinct ℰ-sequences of length `n`, sorted.
pub fn enumerate_esequences(n: usize) -> Vec<ESequence> {
    if n < 2 {
        return Vec::new();
    }
    let mut level: HashSet<ESequence> = HashSet::from([ESequence::seed()]);
    for _ in 2..n {
        level = level.iter().flat_map(esequence_children).collect();
    }
    let mut out: Vec<ESequence> = level.into_iter().collect();
    out.sort();
    out
}

/// Quiddity cycle of an ℰ-sequence. Interior entries satisfy
/// `vᵢ₋₁ + vᵢ₊₁ = cᵢ·vᵢ`; the two ends are closed through the negated
/// half of the root circle, i.e. `−v_n` precedes `v₁` and `−v₁` follows `v_n`.
pub fn quiddity_of(s: &ESequence) -> QuiddityCycle {
    quiddity_of_vectors(s.entries()).expect("validated ℰ-sequence")
}

/// Same as [`quiddity_of`] for an unvalidated vector list.
pub fn quiddity_of_vectors(v: &[Pair]) -> Result<QuiddityCycle, Rank2Error> {
    let n = v.len();
    if n < 2 {
        return Err(Rank2Error::TooFewRoots(n));
    }
    let neg = |p: Pair| [-p[0], -p[1]];
    let mut c = Vec::with_capacity(n);
    for i in 0..n {
        let prev = if i == 0 { neg(v[n - 1]) } else { v[i - 1] };
        let next = if i == n - 1 { neg(v[0]) } else { v[i + 1] };
        match multiple_of(add(prev, next), v[i]) {
            Some(k) => c.push(k),
            None => {
                return Err(Rank2Error::NotESequence(Violation::NotMultiple { position: i }));
            }
        }
    }
    Ok(QuiddityCycle(c))
}

/// All quiddity cycles of length `n` obtained from `(0,0)` by the
/// insertion rule `(…, cᵢ+1, 1, cᵢ₊₁+1, …)`.
pub fn enumerate_quiddity_cycles(n: usize) -> Vec<QuiddityCycle> {
    if n < 2 {
        return Vec::new();
    }
    let mut level: HashSet<Vec<i64>> = HashSet::from([vec![0, 0]]);
    for _ in 2..n {
        let mut next = HashSet::new();
        for c in &level {
            for i in 0..c.len() - 1 {
                let mut child = Vec::with_capacity(c.len() + 1);
                child.extend_from_slice(&c[..i]);
                child.push(c[i] + 1);
                child.push(1);
                child.push(c[i + 1] + 1);
                child.extend_from_slice(&c[i + 2..]);
                next.insert(child);
            }
        }
        level = next;
    }
    let mut out: Vec<QuiddityCycle> = level.into_iter().map(QuiddityCycle).collect();
    out.sort();
    out
}

/// `∏ᵢ [[cᵢ, −1], [1, 0]]`, left to right.
pub fn frieze_product(cycle: &QuiddityCycle) -> [[i64; 2]; 2] {
    cycle.entries().iter().fold([[1, 0], [0, 1]], |m, &c| {
        [
            [m[0][0] * c + m[0][1], -m[0][0]],
            [m[1][0] * c + m[1][1], -m[1][0]],
        ]
    })
}

/// Triangulation obtained by undoing the insertions, always removing the
/// leftmost removable entry.
pub fn triangulation_of(s: &ESequence) -> Triangulation {
    triangulation_with(s, false)
}

/// Like [`triangulation_of`], removing the rightmost removable entry first
/// when `rightmost` is set. Both orders produce the same triangulation.
pub fn triangulation_with(s: &ESequence, rightmost: bool) -> Triangulation {
    let n = s.len();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut rest = s.entries().to_vec();
    let mut diagonals = BTreeSet::new();
    while rest.len() > 3 {
        let mut ears = (1..rest.len() - 1).filter(|&i| add(rest[i - 1], rest[i + 1]) == rest[i]);
        let i = if rightmost { ears.next_back() } else { ears.next() }.expect("ℰ-sequence has an ear");
        diagonals.insert((labels[i - 1], labels[i + 1]));
        rest.remove(i);
        labels.remove(i);
    }
    Triangulation { n, diagonals }
}

/// Outcome of the rank-two crystallographic test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rank2Verdict {
    pub crystallographic: bool,
    /// Positive roots in wall coordinates, sorted from `(0,1)` to `(1,0)`.
    pub sequence: Vec<Pair>,
    pub violation: Option<Violation>,
}

/// Decides whether `±roots` is a crystallographic rank-two root set by
/// testing whether a positive system, in the coordinates of its two
/// extreme roots, is an ℰ-sequence.
///
/// If the given roots lie in an open half-plane they are used as the
/// positive system; otherwise the representatives with positive first
/// nonzero coordinate are.
pub fn is_crystallographic_rank2(roots: &[Pair]) -> Result<Rank2Verdict, Rank2Error> {
    if roots.len() < 2 {
        return Err(Rank2Error::TooFewRoots(roots.len()));
    }
    if let Some(&z) = roots.iter().find(|v| **v == [0, 0]) {
        return Err(Rank2Error::ZeroRoot(z));
    }
    for (i, &a) in roots.iter().enumerate() {
        for &b in &roots[i + 1..] {
            if det(a, b) == 0 {
                return Err(Rank2Error::Parallel(a, b));
            }
        }
    }
    let mut window: Vec<Pair> = roots.to_vec();
    if !in_open_half_plane(&window) {
        for v in &mut window {
            if v[0] < 0 || (v[0] == 0 && v[1] < 0) {
                *v = [-v[0], -v[1]];
            }
        }
    }
    // Counterclockwise order inside a half-plane: u before w iff det(u,w) > 0.
    window.sort_by(|&u, &w| 0.cmp(&det(u, w)));
    let first = window[0];
    let last = window[window.len() - 1];
    let d = det(first, last);
    let mut sequence = Vec::with_capacity(window.len());
    for &v in window.iter().rev() {
        let (x, y) = (det(v, last), det(first, v));
        if x % d != 0 || y % d != 0 {
            return Ok(Rank2Verdict {
                crystallographic: false,
                sequence: Vec::new(),
                violation: Some(Violation::NonIntegral { root: v }),
            });
        }
        sequence.push([x / d, y / d]);
    }
    let violation = check_esequence(&sequence).err();
    Ok(Rank2Verdict {
        crystallographic: violation.is_none(),
        sequence,
        violation,
    })
}

fn in_open_half_plane(v: &[Pair]) -> bool {
    // With no two vectors parallel, the set lies in an open half-plane iff
    // some member has every other member strictly counterclockwise of it.
    v.iter().any(|&u| v.iter().all(|&w| w == u || det(u, w) > 0))
}
