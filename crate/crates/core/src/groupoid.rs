//! Root-coordinate model of the Weyl groupoid.
//!
//! An object is the set of positive roots at a chamber written in the
//! basis of that chamber's walls. Reflecting at label `i` applies
//! `σᵢ(αⱼ) = αⱼ − cᵢⱼαᵢ` and keeps the non-negative representative of each
//! image. Objects reachable from a base object are collected by value.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{enumerate_chambers, ChamberComplex, GeometryError, RootSet};
use crate::linalg::{as_integers, Matrix, RatMatrix};

pub type RootVector = Vec<i64>;
pub type CartanMatrix = Matrix<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("object has no roots")]
    Empty,
    #[error("root {root:?} has length {found}, expected {expected}")]
    WrongLength {
        root: RootVector,
        expected: usize,
        found: usize,
    },
    #[error("root {0:?} is not in ℕ₀^r \\ {{0}}")]
    NotPositive(RootVector),
    #[error("simple root e{} is missing", .0 + 1)]
    MissingSimple(usize),
    #[error("roots {0:?} and {1:?} are parallel")]
    Parallel(RootVector, RootVector),
    #[error("label {label} out of range for rank {rank}")]
    LabelOutOfRange { label: usize, rank: usize },
    #[error("reflection {} maps a root to the mixed-sign vector {image:?}", label + 1)]
    NotClosed { label: usize, image: RootVector },
    #[error("closure exceeded {cap} objects")]
    Overflow { cap: usize },
    #[error("reflection {} is not involutive at object {object}", label + 1)]
    NotInvolutive { object: usize, label: usize },
    #[error("integer overflow in root coordinates")]
    Arithmetic,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Positive roots at a chamber in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootObject {
    rank: usize,
    roots: Vec<RootVector>,
}

impl RootObject {
    /// Validates and sorts the roots; duplicates are merged.
    pub fn new(rank: usize, roots: Vec<RootVector>) -> Result<Self, GroupoidError> {
        if roots.is_empty() {
            return Err(GroupoidError::Empty);
        }
        for root in &roots {
            if root.len() != rank {
                return Err(GroupoidError::WrongLength {
                    root: root.clone(),
                    expected: rank,
                    found: root.len(),
                });
            }
            if root.iter().any(|&x| x < 0) || root.iter().all(|&x| x == 0) {
                return Err(GroupoidError::NotPositive(root.clone()));
            }
        }
        let obj = Self::from_sorted(rank, roots);
        for i in 0..rank {
            if !obj.contains(&unit(rank, i)) {
                return Err(GroupoidError::MissingSimple(i));
            }
        }
        for (a, u) in obj.roots.iter().enumerate() {
            for v in &obj.roots[a + 1..] {
                if parallel(u, v) {
                    return Err(GroupoidError::Parallel(u.clone(), v.clone()));
                }
            }
        }
        Ok(obj)
    }

    fn from_sorted(rank: usize, mut roots: Vec<RootVector>) -> Self {
        roots.sort();
        roots.dedup();
        Self { rank, roots }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Sorted positive roots.
    pub fn roots(&self) -> &[RootVector] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.roots.binary_search_by(|r| r.as_slice().cmp(v)).is_ok()
    }

    /// Whether `v` or `−v` is a positive root.
    pub fn contains_signed(&self, v: &[i64]) -> bool {
        self.contains(v) || self.contains(&v.iter().map(|x| -x).collect::<Vec<_>>())
    }

    /// Relabels coordinates: entry `k` of each root moves to `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let roots = self
            .roots
            .iter()
            .map(|r| {
                let mut out = vec![0; self.rank];
                for (k, &x) in r.iter().enumerate() {
                    out[perm[k]] = x;
                }
                out
            })
            .collect();
        Self::from_sorted(self.rank, roots)
    }

    /// `rank;root;root;…` with comma-separated coordinates.
    pub fn serialize(&self) -> String {
        let mut s = self.rank.to_string();
        for r in &self.roots {
            s.push(';');
            let coords: Vec<String> = r.iter().map(i64::to_string).collect();
            s.push_str(&coords.join(","));
        }
        s
    }
}

impl fmt::Display for RootObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, r) in self.roots.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            let coords: Vec<String> = r.iter().map(i64::to_string).collect();
            write!(f, "({})", coords.join(","))?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn unit(rank: usize, i: usize) -> RootVector {
    let mut e = vec![0; rank];
    e[i] = 1;
    e
}

fn parallel(u: &[i64], v: &[i64]) -> bool {
    (0..u.len()).all(|a| (a + 1..u.len()).all(|b| u[a] as i128 * v[b] as i128 == u[b] as i128 * v[a] as i128))
}

/// `cᵢⱼ = −max{k ≥ 0 : kαᵢ + αⱼ ∈ R}` off the diagonal, `2` on it.
pub fn cartan_from_roots(obj: &RootObject) -> CartanMatrix {
    let r = obj.rank;
    let mut c = CartanMatrix::identity(r);
    for i in 0..r {
        c[(i, i)] = 2;
    }
    for root in &obj.roots {
        let support: Vec<usize> = (0..r).filter(|&k| root[k] != 0).collect();
        if support.len() != 2 {
            continue;
        }
        let (a, b) = (support[0], support[1]);
        if root[b] == 1 {
            c[(a, b)] = c[(a, b)].min(-root[a]);
        }
        if root[a] == 1 {
            c[(b, a)] = c[(b, a)].min(-root[b]);
        }
    }
    c
}

/// Matrix of `σᵢ` on coordinates: identity except row `i`, which is
/// `(−c_{i1}, …, −1, …, −c_{ir})`.
pub fn reflection_matrix(cartan: &CartanMatrix, i: usize) -> Matrix<i64> {
    let r = cartan.rows();
    let mut s = Matrix::<i64>::identity(r);
    for j in 0..r {
        s[(i, j)] = if j == i { -1 } else { -cartan[(i, j)] };
    }
    s
}

fn apply_checked(s: &Matrix<i64>, v: &[i64]) -> Result<RootVector, GroupoidError> {
    (0..s.rows())
        .map(|row| {
            (0..s.cols()).try_fold(0i64, |acc, c| {
                s[(row, c)]
                    .checked_mul(v[c])
                    .and_then(|x| acc.checked_add(x))
                    .ok_or(GroupoidError::Arithmetic)
            })
        })
        .collect()
}

/// `σᵢ(R)` with each image replaced by its non-negative representative.
pub fn reflect_object(obj: &RootObject, i: usize) -> Result<RootObject, GroupoidError> {
    if i >= obj.rank {
        return Err(GroupoidError::LabelOutOfRange {
            label: i,
            rank: obj.rank,
        });
    }
    let s = reflection_matrix(&cartan_from_roots(obj), i);
    let mut out = Vec::with_capacity(obj.len());
    for root in &obj.roots {
        let image = apply_checked(&s, root)?;
        if image.iter().all(|&x| x >= 0) {
            out.push(image);
        } else if image.iter().all(|&x| x <= 0) {
            out.push(image.iter().map(|x| -x).collect());
        } else {
            return Err(GroupoidError::NotClosed { label: i, image });
        }
    }
    let result = RootObject::from_sorted(obj.rank, out);
    for j in 0..obj.rank {
        if !result.contains(&unit(obj.rank, j)) {
            return Err(GroupoidError::MissingSimple(j));
        }
    }
    Ok(result)
}

/// Edge of the groupoid graph: target object and the matrix of `σᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub target: usize,
    pub sigma: Matrix<i64>,
}

/// Objects of one connected component, deduplicated by value.
#[derive(Clone, Debug)]
pub struct GroupoidGraph {
    rank: usize,
    objects: Vec<RootObject>,
    index: HashMap<RootObject, usize>,
    /// `edges[k][i]`; empty for graphs built with [`Self::singleton`].
    edges: Vec<Vec<Edge>>,
}

impl GroupoidGraph {
    /// A graph with one object and no edges. Useful for running checks on
    /// an object that need not be closed under reflections.
    pub fn singleton(obj: RootObject) -> Self {
        Self {
            rank: obj.rank,
            index: HashMap::from([(obj.clone(), 0)]),
            objects: vec![obj],
            edges: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn base(&self) -> &RootObject {
        &self.objects[0]
    }

    pub fn objects(&self) -> &[RootObject] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn find(&self, obj: &RootObject) -> Option<usize> {
        self.index.get(obj).copied()
    }

    pub fn edge(&self, object: usize, label: usize) -> Option<&Edge> {
        self.edges.get(object).and_then(|e| e.get(label))
    }

    /// Whether every object has an outgoing edge for every label.
    pub fn is_closed(&self) -> bool {
        self.edges.len() == self.objects.len()
    }
}

/// Breadth-first closure of `base` under all reflections.
pub fn traverse(base: &RootObject, max_objects: usize) -> Result<GroupoidGraph, GroupoidError> {
    let r = base.rank;
    let mut objects = vec![base.clone()];
    let mut index = HashMap::from([(base.clone(), 0usize)]);
    let mut edges: Vec<Vec<Edge>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    if max_objects == 0 {
        return Err(GroupoidError::Overflow { cap: 0 });
    }
    while let Some(k) = queue.pop_front() {
        let obj = objects[k].clone();
        let cartan = cartan_from_roots(&obj);
        let mut out = Vec::with_capacity(r);
        for i in 0..r {
            let image = reflect_object(&obj, i)?;
            let target = match index.get(&image) {
                Some(&t) => t,
                None => {
                    if objects.len() == max_objects {
                        return Err(GroupoidError::Overflow { cap: max_objects });
                    }
                    let t = objects.len();
                    index.insert(image.clone(), t);
                    objects.push(image);
                    queue.push_back(t);
                    t
                }
            };
            // σᵢ' σᵢ = id exactly when row i of the Cartan matrix is shared.
            let back = cartan_from_roots(&objects[target]);
            if (0..r).any(|j| back[(i, j)] != cartan[(i, j)]) {
                return Err(GroupoidError::NotInvolutive { object: k, label: i });
            }
            out.push(Edge {
                target,
                sigma: reflection_matrix(&cartan, i),
            });
        }
        if edges.len() <= k {
            edges.resize(k + 1, Vec::new());
        }
        edges[k] = out;
    }
    Ok(GroupoidGraph {
        rank: r,
        objects,
        index,
        edges,
    })
}

/// Why a root set failed the crystallographic test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Failure {
    NonSimplicial { detail: String },
    /// A root with non-integral coordinates in a chamber's wall basis.
    NonIntegral {
        chamber: usize,
        root: Vec<String>,
        coordinates: Vec<String>,
    },
    Closure { detail: String },
    CartanMismatch { chamber: usize },
    ObjectMissing { chamber: usize },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::NonSimplicial { detail } => write!(f, "not simplicial: {detail}"),
            Failure::NonIntegral {
                chamber,
                root,
                coordinates,
            } => write!(
                f,
                "chamber {chamber}: root ({}) has coordinates ({})",
                root.join(","),
                coordinates.join(",")
            ),
            Failure::Closure { detail } => write!(f, "closure failed: {detail}"),
            Failure::CartanMismatch { chamber } => {
                write!(f, "chamber {chamber}: Cartan matrices disagree")
            }
            Failure::ObjectMissing { chamber } => {
                write!(f, "chamber {chamber}: object not reached by the closure")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct CrystallographicVerdict {
    pub crystallographic: bool,
    pub chambers: usize,
    pub base_cartan: Option<RatMatrix>,
    pub failure: Option<Failure>,
    pub graph: Option<GroupoidGraph>,
}

impl CrystallographicVerdict {
    fn fail(chambers: usize, base_cartan: Option<RatMatrix>, failure: Failure) -> Self {
        Self {
            crystallographic: false,
            chambers,
            base_cartan,
            failure: Some(failure),
            graph: None,
        }
    }
}

fn to_i64(x: &BigInt) -> Result<i64, GroupoidError> {
    x.to_i64().ok_or(GroupoidError::Arithmetic)
}

/// Object of chamber `k`, or the first root with non-integral coordinates.
fn chamber_object(cx: &ChamberComplex, k: usize) -> Result<Result<RootObject, Failure>, GroupoidError> {
    let chamber = &cx.chambers()[k];
    let mut roots = Vec::with_capacity(cx.roots().len());
    for root in cx.roots().roots() {
        let coords = chamber.coordinates(root);
        let Some(ints) = as_integers(&coords) else {
            return Ok(Err(Failure::NonIntegral {
                chamber: k,
                root: root.iter().map(ToString::to_string).collect(),
                coordinates: coords.iter().map(ToString::to_string).collect(),
            }));
        };
        let mut v: RootVector = ints.iter().map(to_i64).collect::<Result<_, _>>()?;
        if v.iter().all(|&x| x <= 0) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        roots.push(v);
    }
    Ok(Ok(RootObject::new(cx.roots().rank(), roots)?))
}

/// Decides whether a root set is crystallographic: the arrangement must be
/// simplicial, every root integral in every chamber's wall basis, and the
/// groupoid closure of the base object must reach every chamber's object
/// with matching Cartan matrices.
pub fn verify_crystallographic(roots: &RootSet) -> Result<CrystallographicVerdict, GroupoidError> {
    let cx = match enumerate_chambers(roots) {
        Ok(cx) => cx,
        Err(e @ GeometryError::NonSimplicial { .. }) => {
            return Ok(CrystallographicVerdict::fail(
                0,
                None,
                Failure::NonSimplicial {
                    detail: e.to_string(),
                },
            ));
        }
        Err(e) => return Err(e.into()),
    };
    let n = cx.len();
    let base_cartan = Some(cx.cartan_of_chamber(0));
    let mut per_chamber = Vec::with_capacity(n);
    for k in 0..n {
        match chamber_object(&cx, k)? {
            Ok(obj) => per_chamber.push(obj),
            Err(f) => return Ok(CrystallographicVerdict::fail(n, base_cartan, f)),
        }
    }
    let graph = match traverse(&per_chamber[0], n) {
        Ok(g) => g,
        Err(e @ (GroupoidError::NotClosed { .. }
        | GroupoidError::Overflow { .. }
        | GroupoidError::NotInvolutive { .. }
        | GroupoidError::MissingSimple(_))) => {
            return Ok(CrystallographicVerdict::fail(
                n,
                base_cartan,
                Failure::Closure {
                    detail: e.to_string(),
                },
            ));
        }
        Err(e) => return Err(e),
    };
    for (k, obj) in per_chamber.iter().enumerate() {
        if graph.find(obj).is_none() {
            return Ok(CrystallographicVerdict::fail(n, base_cartan, Failure::ObjectMissing { chamber: k }));
        }
        let geometric = cx.cartan_of_chamber(k);
        let combinatorial = cartan_from_roots(obj);
        let r = obj.rank();
        let agree = (0..r).all(|i| {
            (0..r).all(|j| geometric[(i, j)] == num_rational::BigRational::from_integer(combinatorial[(i, j)].into()))
        });
        if !agree {
            return Ok(CrystallographicVerdict::fail(n, base_cartan, Failure::CartanMismatch { chamber: k }));
        }
    }
    Ok(CrystallographicVerdict {
        crystallographic: true,
        chambers: n,
        base_cartan,
        failure: None,
        graph: Some(graph),
    })
}

/// All permutations of `0..r` in lexicographic order.
pub fn permutations(r: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                go(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(r), &mut vec![false; r], &mut out);
    out
}

/// Smallest serialization over all objects of the closure and all
/// relabellings of the simple roots. Equal strings mean equivalent
/// arrangements.
pub fn canonical_form(graph: &GroupoidGraph) -> String {
    canonical_representative(graph).1
}

/// The relabelled object attaining [`canonical_form`], with its serialization.
pub fn canonical_representative(graph: &GroupoidGraph) -> (RootObject, String) {
    let perms = permutations(graph.rank());
    graph
        .objects()
        .iter()
        .flat_map(|o| {
            perms.iter().map(move |p| {
                let q = o.permuted(p);
                let s = q.serialize();
                (q, s)
            })
        })
        .min_by(|a, b| a.1.cmp(&b.1))
        .expect("graph has a base object")
}

/// Canonical form of the closure of `obj`.
pub fn canonical_form_of(obj: &RootObject, max_objects: usize) -> Result<String, GroupoidError> {
    Ok(canonical_form(&traverse(obj, max_objects)?))
}

/// Canonical form of a root set, if it is crystallographic.
pub fn canonical_form_of_roots(roots: &RootSet) -> Result<Option<String>, GroupoidError> {
    Ok(verify_crystallographic(roots)?.graph.as_ref().map(canonical_form))
}

pub fn equivalent(a: &GroupoidGraph, b: &GroupoidGraph) -> bool {
    a.rank() == b.rank() && a.base().len() == b.base().len() && canonical_form(a) == canonical_form(b)
}

/// Roots of `obj` as a [`RootSet`] in the same coordinates.
pub fn to_root_set(obj: &RootObject) -> Result<RootSet, GeometryError> {
    RootSet::from_integer_roots(obj.rank(), obj.roots())
}
