//! Pointwise checks of the structural bounds satisfied by crystallographic
//! arrangements of rank three and higher.
//!
//! Every check is a pure function of a [`GroupoidGraph`] and reports
//! extremal statistics even when it passes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::supports_connected;
use crate::groupoid::{cartan_from_roots, permutations, unit, GroupoidGraph, RootObject, RootVector};
use crate::linalg::{self, int_vector, rank_of};
use crate::localization::{coordinate_plane, localize, plane_roots};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub object: usize,
    pub roots: Vec<RootVector>,
    pub values: Vec<i64>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub stats: BTreeMap<String, i64>,
}

impl CheckReport {
    fn new(check: &str) -> Self {
        Self {
            check: check.to_string(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            stats: BTreeMap::new(),
        }
    }

    fn skipped(check: &str, reason: &str) -> Self {
        let mut r = Self::new(check);
        r.verdict = Verdict::Skipped;
        r.witnesses.push(Witness {
            object: 0,
            roots: Vec::new(),
            values: Vec::new(),
            note: reason.to_string(),
        });
        r
    }

    fn fail(&mut self, object: usize, roots: Vec<RootVector>, values: Vec<i64>, note: impl Into<String>) {
        self.verdict = Verdict::Fail;
        self.witnesses.push(Witness {
            object,
            roots,
            values,
            note: note.into(),
        });
    }

    fn stat(&mut self, key: &str, value: i64) -> &mut Self {
        self.stats.insert(key.to_string(), value);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

/// A hypothesis of the root-string lemma that does not hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Hypothesis {
    KAtLeastTwo,
    AlphaPositiveRoot,
    EndpointRoot,
    Unimodular,
    NoPositivePoints,
    PlaneSpanned,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifierError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("hypothesis {0:?} does not hold")]
    HypothesisFailed(Hypothesis),
}

/// Whether the supports of the roots connect all simple roots.
pub fn is_irreducible_object(obj: &RootObject) -> bool {
    let supports: Vec<Vec<usize>> = obj
        .roots()
        .iter()
        .map(|r| (0..r.len()).filter(|&k| r[k] != 0).collect())
        .collect();
    supports_connected(obj.rank(), &supports)
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add_scaled(a: &[i64], k: i64, b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

fn is_unit(v: &[i64]) -> bool {
    v.iter().filter(|&&x| x == 1).count() == 1 && v.iter().all(|&x| x == 0 || x == 1)
}

pub fn vol_of(vectors: &[&RootVector]) -> BigInt {
    let m = vectors.len();
    linalg::vol(m, &vectors.iter().map(|v| int_vector(v)).collect::<Vec<_>>()).expect("equal lengths")
}

/// Every non-simple positive root is the sum of two positive roots.
pub fn check_sum_of_roots(g: &GroupoidGraph) -> CheckReport {
    let mut rep = CheckReport::new("sum_of_roots");
    for (k, obj) in g.objects().iter().enumerate() {
        for root in obj.roots() {
            if is_unit(root) {
                continue;
            }
            let decomposes = obj.roots().iter().any(|a| {
                let b = sub(root, a);
                b.iter().all(|&x| x >= 0) && obj.contains(&b)
            });
            if !decomposes {
                rep.fail(k, vec![root.clone()], Vec::new(), "not a sum of two positive roots");
            }
        }
    }
    rep.stat("objects", g.len() as i64);
    rep
}

/// `(1,1,1)` is a root at every object of an irreducible rank-three closure.
pub fn check_r111(g: &GroupoidGraph) -> CheckReport {
    const NAME: &str = "r111";
    if g.rank() != 3 {
        return CheckReport::skipped(NAME, "rank is not three");
    }
    if !is_irreducible_object(g.base()) {
        return CheckReport::skipped(NAME, "reducible");
    }
    let mut rep = CheckReport::new(NAME);
    for (k, obj) in g.objects().iter().enumerate() {
        if !obj.contains(&[1, 1, 1]) {
            rep.fail(k, Vec::new(), Vec::new(), "(1,1,1) missing");
        }
    }
    rep
}

/// Smallest off-diagonal Cartan entry over the closure.
pub fn min_cartan_entry(g: &GroupoidGraph) -> i64 {
    g.objects()
        .iter()
        .flat_map(|o| {
            let c = cartan_from_roots(o);
            let r = o.rank();
            (0..r)
                .flat_map(move |i| (0..r).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(move |(i, j)| c[(i, j)])
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or(0)
}

/// Cartan entries are at least −7 in rank three and above.
pub fn check_bound7(g: &GroupoidGraph) -> CheckReport {
    const NAME: &str = "bound7";
    let min = min_cartan_entry(g);
    if g.rank() < 3 {
        let mut r = CheckReport::skipped(NAME, "rank below three");
        r.stat("min_cartan", min);
        return r;
    }
    let mut rep = CheckReport::new(NAME);
    rep.stat("min_cartan", min);
    for (k, obj) in g.objects().iter().enumerate() {
        let c = cartan_from_roots(obj);
        for i in 0..obj.rank() {
            for j in 0..obj.rank() {
                if c[(i, j)] < -7 {
                    rep.fail(k, Vec::new(), vec![i as i64, j as i64, c[(i, j)]], "Cartan entry below −7");
                }
            }
        }
    }
    rep
}

/// Coordinate-plane localizations have at most 128 positive roots.
pub fn check_b128(g: &GroupoidGraph) -> CheckReport {
    const NAME: &str = "b128";
    if g.rank() != 3 {
        return CheckReport::skipped(NAME, "rank is not three");
    }
    let mut rep = CheckReport::new(NAME);
    let mut max = 0;
    for (k, obj) in g.objects().iter().enumerate() {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let n = coordinate_plane(obj, i, j).members.len();
            max = max.max(n);
            if n > 128 {
                rep.fail(k, Vec::new(), vec![i as i64, j as i64, n as i64], "localization too large");
            }
        }
    }
    rep.stat("max_localization", max as i64);
    rep
}

/// `min{k ≥ 0 : kα₁ + 2α₂ + α₃ ∈ R}` where `αₘ = e_{ordering[m]}`; `None`
/// if no such root exists.
pub fn compute_k0(obj: &RootObject, ordering: [usize; 3]) -> Result<Option<i64>, VerifierError> {
    if obj.rank() != 3 {
        return Err(VerifierError::PreconditionFailed("rank is not three".into()));
    }
    let [a, b, c] = ordering;
    let n = coordinate_plane(obj, a, b).members.len();
    if n < 5 {
        return Err(VerifierError::PreconditionFailed(format!(
            "localization has {n} < 5 positive roots"
        )));
    }
    Ok(obj
        .roots()
        .iter()
        .filter(|r| r[b] == 2 && r[c] == 1)
        .map(|r| r[a])
        .min())
}

/// `k₀ ≤ 4`, and `k₀ ≤ 2` when `c₁₃ = 0`, whenever `⟨α₁, α₂⟩` has at least
/// five positive roots.
pub fn check_k0(g: &GroupoidGraph) -> CheckReport {
    const NAME: &str = "k0";
    if g.rank() != 3 {
        return CheckReport::skipped(NAME, "rank is not three");
    }
    let mut rep = CheckReport::new(NAME);
    let mut instances = 0;
    let mut max = -1;
    for (k, obj) in g.objects().iter().enumerate() {
        let cartan = cartan_from_roots(obj);
        for p in permutations(3) {
            let ordering = [p[0], p[1], p[2]];
            let Ok(k0) = compute_k0(obj, ordering) else {
                continue;
            };
            instances += 1;
            let bound = if cartan[(p[0], p[2])] == 0 { 2 } else { 4 };
            match k0 {
                Some(v) if v <= bound => max = max.max(v),
                Some(v) => {
                    max = max.max(v);
                    rep.fail(k, Vec::new(), vec![p[0] as i64, p[1] as i64, p[2] as i64, v], "k0 too large");
                }
                None => rep.fail(k, Vec::new(), vec![p[0] as i64, p[1] as i64, p[2] as i64], "k0 undefined"),
            }
        }
    }
    rep.stat("instances", instances).stat("max_k0", max);
    rep
}

/// Whether some `m ≥ 1` and `n ∈ ℤ` give `−mα + nβ ∈ ℕ₀^r`. Dividing by `m`,
/// this asks for a rational `q` with `qβₜ ≥ αₜ` in every coordinate, which is
/// an interval condition on `q`.
pub fn meets_positive_orthant(alpha: &[i64], beta: &[i64]) -> bool {
    use num_rational::Ratio;
    let mut lo: Option<Ratio<i64>> = None;
    let mut hi: Option<Ratio<i64>> = None;
    for (&a, &b) in alpha.iter().zip(beta) {
        if b == 0 {
            if a > 0 {
                return false;
            }
            continue;
        }
        let bound = Ratio::new(a, b);
        if b > 0 {
            lo = Some(lo.map_or(bound, |l| l.max(bound)));
        } else {
            hi = Some(hi.map_or(bound, |h| h.min(bound)));
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) => l <= h,
        _ => true,
    }
}

fn hypotheses(obj: &RootObject, alpha: &[i64], beta: &[i64], k: i64) -> Result<(), Hypothesis> {
    if k < 2 {
        return Err(Hypothesis::KAtLeastTwo);
    }
    if !obj.contains(alpha) {
        return Err(Hypothesis::AlphaPositiveRoot);
    }
    if !obj.contains_signed(&add_scaled(alpha, k, beta)) {
        return Err(Hypothesis::EndpointRoot);
    }
    if rank_of(&[alpha.to_vec(), beta.to_vec()]) != 2 {
        return Err(Hypothesis::PlaneSpanned);
    }
    if !vol_of(&[&alpha.to_vec(), &beta.to_vec()]).is_one() {
        return Err(Hypothesis::Unimodular);
    }
    if meets_positive_orthant(alpha, beta) {
        return Err(Hypothesis::NoPositivePoints);
    }
    Ok(())
}

/// Checks the root-string lemma for one instance: under its hypotheses,
/// `α + ℓβ` is a root for `ℓ = 0, …, k` (in particular `β` is) and some
/// object of the closure has a Cartan entry `≤ −k`.
pub fn check_lemcon(
    g: &GroupoidGraph,
    object: usize,
    alpha: &[i64],
    beta: &[i64],
    k: i64,
) -> Result<CheckReport, VerifierError> {
    let obj = &g.objects()[object];
    hypotheses(obj, alpha, beta, k).map_err(VerifierError::HypothesisFailed)?;
    let mut rep = CheckReport::new("lemcon");
    let witness = vec![alpha.to_vec(), beta.to_vec()];
    if !obj.contains_signed(beta) {
        rep.fail(object, witness.clone(), vec![k], "β is not a root");
    }
    for l in 1..k {
        if !obj.contains_signed(&add_scaled(alpha, l, beta)) {
            rep.fail(object, witness.clone(), vec![k, l], "intermediate is not a root");
        }
    }
    let min = min_cartan_entry(g);
    rep.stat("min_cartan", min);
    if min > -k {
        rep.fail(object, witness, vec![k, min], "no Cartan entry ≤ −k");
    }
    Ok(rep)
}

/// Runs [`check_lemcon`] on every `(α, β, k)` with `α ∈ R₊`, `α + kβ ∈ R`
/// and `k ≥ 2` that satisfies the hypotheses.
pub fn lemcon_sweep(g: &GroupoidGraph) -> CheckReport {
    let mut rep = CheckReport::new("lemcon_sweep");
    let mut instances = 0;
    let mut max_k = 0;
    for (ko, obj) in g.objects().iter().enumerate() {
        let signed: Vec<RootVector> = obj
            .roots()
            .iter()
            .flat_map(|r| [r.clone(), r.iter().map(|x| -x).collect()])
            .collect();
        for alpha in obj.roots() {
            for gamma in &signed {
                let diff = sub(gamma, alpha);
                let content = diff.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
                for k in 2..=content {
                    if content % k != 0 {
                        continue;
                    }
                    let beta: Vec<i64> = diff.iter().map(|x| x / k).collect();
                    match check_lemcon(g, ko, alpha, &beta, k) {
                        Ok(r) => {
                            instances += 1;
                            max_k = max_k.max(k);
                            if !r.passed() {
                                rep.verdict = Verdict::Fail;
                                rep.witnesses.extend(r.witnesses);
                            }
                        }
                        Err(_) => continue,
                    }
                }
            }
        }
    }
    rep.stat("instances", instances).stat("max_k", max_k);
    rep
}

fn det3(a: &[i64], b: &[i64], c: &[i64]) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// The convexity statements in rank three:
/// (a) a unimodular triple of positive roots none of whose differences is a
///     root is the simple triple;
/// (b) if `γ₁, γ₂` are simple and `(γ₁, γ₂, α)` is unimodular for a positive
///     root `α`, then `α` is simple or `α − γ₁` or `α − γ₂` is a root;
/// (c) an irreducible object has no simple root lying in two coordinate
///     planes with only two positive roots each.
pub fn check_convexity_statements(g: &GroupoidGraph) -> CheckReport {
    const NAME: &str = "convexity";
    if g.rank() != 3 {
        return CheckReport::skipped(NAME, "rank is not three");
    }
    let mut rep = CheckReport::new(NAME);
    let irreducible = is_irreducible_object(g.base());
    let mut triples = 0;
    for (k, obj) in g.objects().iter().enumerate() {
        let roots = obj.roots();
        let differs = |a: &RootVector, b: &RootVector| obj.contains_signed(&sub(a, b));
        for (x, a) in roots.iter().enumerate() {
            for (y, b) in roots.iter().enumerate().skip(x + 1) {
                if differs(a, b) {
                    continue;
                }
                for c in &roots[y + 1..] {
                    if det3(a, b, c).abs() != 1 || differs(a, c) || differs(b, c) {
                        continue;
                    }
                    triples += 1;
                    if !(is_unit(a) && is_unit(b) && is_unit(c)) {
                        rep.fail(k, vec![a.clone(), b.clone(), c.clone()], Vec::new(), "(a) non-simple triple");
                    }
                }
            }
        }
        for i in 0..3 {
            for j in i + 1..3 {
                let (g1, g2) = (unit(3, i), unit(3, j));
                for a in roots {
                    if det3(&g1, &g2, a).abs() != 1 || is_unit(a) {
                        continue;
                    }
                    if !obj.contains_signed(&sub(a, &g1)) && !obj.contains_signed(&sub(a, &g2)) {
                        rep.fail(k, vec![g1.clone(), g2.clone(), a.clone()], Vec::new(), "(b) no difference is a root");
                    }
                }
            }
        }
        if irreducible {
            let sizes = [
                coordinate_plane(obj, 0, 1).members.len(),
                coordinate_plane(obj, 0, 2).members.len(),
                coordinate_plane(obj, 1, 2).members.len(),
            ];
            // Planes through e₁: (01, 02); e₂: (01, 12); e₃: (02, 12).
            for (s, (p, q)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
                if sizes[p] == 2 && sizes[q] == 2 {
                    rep.fail(k, vec![unit(3, s)], vec![sizes[p] as i64, sizes[q] as i64], "(c) two 2-root planes");
                }
            }
        }
    }
    rep.stat("unimodular_triples", triples);
    rep
}

/// Largest `Vol₂` over pairs of positive roots in the closure.
pub fn max_vol2(g: &GroupoidGraph) -> i64 {
    g.objects()
        .iter()
        .flat_map(|o| {
            let roots = o.roots();
            (0..roots.len())
                .flat_map(move |x| (x + 1..roots.len()).map(move |y| (x, y)))
                .map(move |(x, y)| vol_of(&[&roots[x], &roots[y]]).to_i64().unwrap_or(i64::MAX))
                .collect::<Vec<_>>()
        })
        .max()
        .unwrap_or(1)
}

/// `Vol₂(α, β) ≤ m` for all pairs of roots.
pub fn check_vol2_bound(g: &GroupoidGraph, m: i64) -> CheckReport {
    const NAME: &str = "vol2";
    let max = max_vol2(g);
    if g.rank() < 3 {
        let mut r = CheckReport::skipped(NAME, "rank below three");
        r.stat("max_vol2", max);
        return r;
    }
    let mut rep = CheckReport::new(NAME);
    rep.stat("max_vol2", max).stat("bound", m);
    if max > m {
        rep.fail(0, Vec::new(), vec![max, m], "Vol₂ exceeds bound");
    }
    rep
}

/// `|R₊| ≤ (m + 1)^r` with `m` the observed maximum of `Vol₂`.
pub fn check_pigeonhole(g: &GroupoidGraph) -> CheckReport {
    const NAME: &str = "pigeonhole";
    if g.rank() < 3 {
        return CheckReport::skipped(NAME, "rank below three");
    }
    let m = max_vol2(g);
    let bound = (m + 1).saturating_pow(g.rank() as u32);
    let n = g.base().len() as i64;
    let mut rep = CheckReport::new(NAME);
    rep.stat("positive_roots", n).stat("bound", bound);
    if n > bound {
        rep.fail(0, Vec::new(), vec![n, bound], "too many roots");
    }
    rep
}

/// Plane roots around every coordinate plane of every object: all exist,
/// increase, take at least `n/2` distinct values, the auxiliary cycle has
/// no two consecutive zeros, and `γ₁, γ₂` match their closed forms.
pub fn check_plane_roots(g: &GroupoidGraph) -> CheckReport {
    const NAME: &str = "plane_roots";
    if g.rank() != 3 {
        return CheckReport::skipped(NAME, "rank is not three");
    }
    if !is_irreducible_object(g.base()) {
        return CheckReport::skipped(NAME, "reducible");
    }
    let mut rep = CheckReport::new(NAME);
    let mut instances = 0;
    for (k, obj) in g.objects().iter().enumerate() {
        for p in permutations(3) {
            let (i, j, t) = (p[0], p[1], p[2]);
            let labels = vec![i as i64, j as i64];
            let pr = match plane_roots(obj, i, j) {
                Ok(pr) => pr,
                Err(e) => {
                    rep.fail(k, Vec::new(), labels, e.to_string());
                    continue;
                }
            };
            instances += 1;
            let d = &pr.cycles.auxiliary;
            let c = &pr.cycles.quiddity;
            if pr.cycles.has_consecutive_zeros() {
                rep.fail(k, Vec::new(), d.clone(), "consecutive auxiliary zeros");
            }
            if !pr.monotone {
                rep.fail(k, pr.gammas.clone(), labels.clone(), "plane roots not increasing");
            }
            if 2 * pr.distinct_gammas < pr.cycles.n {
                rep.fail(k, pr.gammas.clone(), labels.clone(), "too few distinct plane roots");
            }
            let mut g1 = vec![0; 3];
            g1[j] = d[0];
            g1[t] = 1;
            let mut g2 = vec![0; 3];
            g2[i] = d[1];
            g2[j] = c[0] * d[1] + d[0];
            g2[t] = 1;
            if pr.gammas[1] != g1 || (pr.gammas.len() > 2 && pr.gammas[2] != g2) {
                rep.fail(k, pr.gammas.clone(), labels, "closed form mismatch");
            }
        }
    }
    rep.stat("instances", instances);
    rep
}

/// Every rank-two localization spanned by two roots has a pair of simple
/// members that generate it over `ℕ₀`.
pub fn check_localizations(g: &GroupoidGraph) -> CheckReport {
    let mut rep = CheckReport::new("localizations");
    let mut planes = 0;
    for (k, obj) in g.objects().iter().enumerate() {
        let roots = obj.roots();
        let mut seen: Vec<Vec<RootVector>> = Vec::new();
        for x in 0..roots.len() {
            for y in x + 1..roots.len() {
                let loc = localize(obj, &[roots[x].clone(), roots[y].clone()]);
                if seen.contains(&loc.members) {
                    continue;
                }
                planes += 1;
                if !loc.covered_by_simple() {
                    rep.fail(k, loc.members.clone(), vec![loc.simple.len() as i64], "not generated by simple members");
                }
                seen.push(loc.members);
            }
        }
    }
    rep.stat("planes", planes);
    rep
}

/// All checks, with the `Vol₂` bound at `6`.
pub fn run_suite(g: &GroupoidGraph) -> Vec<CheckReport> {
    type Check = fn(&GroupoidGraph) -> CheckReport;
    let checks: [Check; 11] = [
        check_sum_of_roots,
        check_r111,
        check_bound7,
        check_b128,
        check_k0,
        lemcon_sweep,
        check_convexity_statements,
        |g| check_vol2_bound(g, 6),
        check_pigeonhole,
        check_plane_roots,
        check_localizations,
    ];
    checks.par_iter().map(|c| c(g)).collect()
}

pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(CheckReport::passed)
}
