//! Bounded enumeration of irreducible crystallographic arrangements of rank
//! three by the number of positive roots.
//!
//! Every non-simple positive root is a sum of two positive roots, so an
//! object is built height by height: the candidates at height `h` are the
//! primitive sums of two chosen roots whose heights add up to `h`, and any
//! subset of them may be kept. A completed object is closed under the
//! reflections and then re-verified from scratch.

use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::groupoid::{
    canonical_representative, permutations, traverse, verify_crystallographic, RootObject, RootVector,
};
use crate::localization::{rank2_cycles, sorted_plane};
use crate::verifier::{all_passed, is_irreducible_object, run_suite};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Cartan entries are at least this in rank three.
const MIN_CARTAN: i64 = -7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("cap {0} is below 6, the size of the smallest irreducible rank-3 arrangement")]
    CapTooSmall(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SearchVerdict {
    Complete,
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoundClass {
    pub canonical: String,
    /// Positive roots of the object attaining the canonical form.
    pub positive_roots: Vec<RootVector>,
    pub chambers: usize,
    /// Distinct objects in the closure.
    pub objects: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub cap: usize,
    pub budget: u64,
    pub verdict: SearchVerdict,
    pub nodes: u64,
    pub classes: Vec<FoundClass>,
    /// Completed candidates closed under reflections that failed the
    /// independent re-verification.
    pub rejected: Vec<String>,
    pub stats: BTreeMap<String, u64>,
}

struct Shared {
    cap: usize,
    budget: u64,
    nodes: AtomicU64,
    exhausted: AtomicBool,
    leaves: AtomicU64,
    seen: Mutex<HashSet<String>>,
    found: Mutex<BTreeMap<String, FoundClass>>,
    rejected: Mutex<Vec<String>>,
}

impl Shared {
    fn tick(&self) -> bool {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

#[derive(Clone, Debug)]
struct Partial {
    /// `by_height[h]` holds the chosen roots of height `h + 1`.
    by_height: Vec<Vec<RootVector>>,
    count: usize,
}

fn height(v: &[i64]) -> usize {
    v.iter().sum::<i64>() as usize
}

fn gcd3(v: &[i64]) -> i64 {
    v.iter().fold(0, |a, &b| num_integer::gcd(a, b))
}

/// A root `kαᵢ + αⱼ` with `k` beyond the Cartan bound.
fn violates_cartan_bound(v: &[i64]) -> bool {
    let support: Vec<usize> = (0..3).filter(|&k| v[k] != 0).collect();
    support.len() == 2 && {
        let (a, b) = (v[support[0]], v[support[1]]);
        (a == 1 && b > -MIN_CARTAN) || (b == 1 && a > -MIN_CARTAN)
    }
}

fn candidates(p: &Partial, h: usize) -> Vec<RootVector> {
    let mut out = Vec::new();
    for lo in 1..=h / 2 {
        let hi = h - lo;
        if hi > p.by_height.len() {
            continue;
        }
        for a in &p.by_height[lo - 1] {
            for b in &p.by_height[hi - 1] {
                let s: RootVector = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if gcd3(&s) == 1 && !violates_cartan_bound(&s) {
                    out.push(s);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn max_height(p: &Partial) -> usize {
    p.by_height
        .iter()
        .rposition(|level| !level.is_empty())
        .map_or(0, |i| i + 1)
}

/// Subsets of `items` with at most `room` elements.
fn subsets(items: &[RootVector], room: usize) -> Vec<Vec<RootVector>> {
    let mut out = vec![Vec::new()];
    for item in items {
        let extended: Vec<Vec<RootVector>> = out
            .iter()
            .filter(|s| s.len() < room)
            .map(|s| {
                let mut t = s.clone();
                t.push(item.clone());
                t
            })
            .collect();
        out.extend(extended);
    }
    out
}

/// Rules that only depend on the roots chosen so far.
fn admissible(p: &Partial, h: usize) -> bool {
    if h == 2 {
        // Two coordinate planes with two roots each through a common simple
        // root would make the arrangement reducible.
        return p.by_height[1].len() >= 2;
    }
    if h == 3 {
        return p.by_height[2].contains(&vec![1, 1, 1]);
    }
    true
}

fn explore(shared: &Shared, p: Partial, h: usize) {
    if !shared.tick() {
        return;
    }
    if h > 2 * max_height(&p) {
        complete(shared, &p);
        return;
    }
    let cands = candidates(&p, h);
    let choices = subsets(&cands, shared.cap - p.count);
    let step = |choice: Vec<RootVector>| {
        let mut next = p.clone();
        next.count += choice.len();
        next.by_height.push(choice);
        if admissible(&next, h) {
            explore(shared, next, h + 1);
        }
    };
    // Only the shallow levels fan out; deeper ones are cheap.
    if h <= 4 {
        choices.into_par_iter().for_each(step);
    } else {
        choices.into_iter().for_each(step);
    }
}

fn permutation_key(obj: &RootObject) -> String {
    permutations(3)
        .iter()
        .map(|q| obj.permuted(q).serialize())
        .min()
        .expect("nonempty")
}

/// Cheap necessary conditions on one object of a closure.
fn object_plausible(obj: &RootObject) -> bool {
    if !obj.contains(&[1, 1, 1]) {
        return false;
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if sorted_plane(obj, i, j).is_err() {
            return false;
        }
    }
    for root in obj.roots() {
        if height(root) > 1 && !crate::localization::is_sum_of_two(root, obj.roots()) {
            return false;
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                match rank2_cycles(obj, i, j) {
                    Ok(c) if !c.has_consecutive_zeros() => {}
                    _ => return false,
                }
            }
        }
    }
    true
}

fn complete(shared: &Shared, p: &Partial) {
    shared.leaves.fetch_add(1, Ordering::Relaxed);
    let roots: Vec<RootVector> = p.by_height.iter().flatten().cloned().collect();
    let Ok(obj) = RootObject::new(3, roots) else {
        return;
    };
    if !is_irreducible_object(&obj) || !object_plausible(&obj) {
        return;
    }
    if !shared.seen.lock().expect("lock").insert(permutation_key(&obj)) {
        return;
    }
    let n = obj.len();
    let Ok(graph) = traverse(&obj, n * (n - 1) + 2) else {
        return;
    };
    if !graph.objects().iter().all(object_plausible) {
        return;
    }
    let (rep, canonical) = canonical_representative(&graph);
    if shared.found.lock().expect("lock").contains_key(&canonical) {
        return;
    }
    // Independent re-verification: chambers, integrality and every check.
    let root_set = crate::groupoid::to_root_set(&rep).expect("valid object");
    let sound = match verify_crystallographic(&root_set) {
        Ok(v) if v.crystallographic => v
            .graph
            .as_ref()
            .map(|g| (all_passed(&run_suite(g)), v.chambers)),
        _ => None,
    };
    match sound {
        Some((true, chambers)) => {
            shared.found.lock().expect("lock").insert(
                canonical.clone(),
                FoundClass {
                    canonical,
                    positive_roots: rep.roots().to_vec(),
                    chambers,
                    objects: graph.len(),
                },
            );
        }
        _ => shared.rejected.lock().expect("lock").push(canonical),
    }
}

/// Enumerates irreducible rank-3 crystallographic arrangements with at most
/// `cap` positive roots, up to equivalence.
pub fn enumerate_rank3(cap: usize) -> Result<SearchResult, SearchError> {
    enumerate_rank3_with_budget(cap, DEFAULT_BUDGET)
}

pub fn enumerate_rank3_with_budget(cap: usize, budget: u64) -> Result<SearchResult, SearchError> {
    if cap < 6 {
        return Err(SearchError::CapTooSmall(cap));
    }
    let shared = Shared {
        cap,
        budget,
        nodes: AtomicU64::new(0),
        exhausted: AtomicBool::new(false),
        leaves: AtomicU64::new(0),
        seen: Mutex::new(HashSet::new()),
        found: Mutex::new(BTreeMap::new()),
        rejected: Mutex::new(Vec::new()),
    };
    let start = Partial {
        by_height: vec![vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]],
        count: 3,
    };
    explore(&shared, start, 2);
    let nodes = shared.nodes.load(Ordering::Relaxed).min(budget);
    let verdict = if shared.exhausted.load(Ordering::Relaxed) {
        SearchVerdict::Incomplete
    } else {
        SearchVerdict::Complete
    };
    let mut rejected = shared.rejected.into_inner().expect("lock");
    rejected.sort();
    rejected.dedup();
    let classes: Vec<FoundClass> = shared.found.into_inner().expect("lock").into_values().collect();
    let mut stats = BTreeMap::new();
    stats.insert("leaves".to_string(), shared.leaves.load(Ordering::Relaxed));
    stats.insert(
        "distinct_candidates".to_string(),
        shared.seen.into_inner().expect("lock").len() as u64,
    );
    Ok(SearchResult {
        cap,
        budget,
        verdict,
        nodes,
        classes,
        rejected,
        stats,
    })
}
