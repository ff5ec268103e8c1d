//! Chambers of a central arrangement given by a finite root set.
//!
//! A [`RootSet`] stores one representative per hyperplane (first nonzero
//! coordinate positive). Chambers are identified by their sign vector over
//! these representatives. Chamber enumeration walks across walls starting
//! from the chamber that contains the generic point `(1, t, t², …)` and
//! labels walls by the type function: crossing wall `i` keeps label `i` on
//! the common wall and carries every other label along with the ray that
//! stays fixed.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{
    self, dot, dot_int, dual_basis, kernel_line, primitive_multiple, sign_normalized, IntVector,
    Matrix, RatMatrix, RatVector, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("root set is empty")]
    Empty,
    #[error("covector {index} has length {found}, expected {expected}")]
    WrongLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("covector {index} is zero")]
    ZeroRoot { index: usize },
    #[error("covectors {first} and {second} are parallel but not opposite")]
    Parallel { first: usize, second: usize },
    #[error("roots span a space of dimension {found} < {expected}")]
    RankDeficient { expected: usize, found: usize },
    #[error("chamber {signs:?} has {rays} extreme rays, expected {rank}")]
    NonSimplicial {
        signs: Vec<bool>,
        rays: usize,
        rank: usize,
    },
    #[error("wall labels disagree at chamber {chamber}")]
    InconsistentLabels { chamber: usize },
    #[error("chamber {chamber}: wall index {wall} out of range")]
    WallOutOfRange { chamber: usize, wall: usize },
}

/// A finite set of pairwise non-parallel covectors, closed under negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    rank: usize,
    /// Positive representatives in decreasing lexicographic order.
    roots: Vec<RatVector>,
    /// Primitive integer multiples of `roots`, used for sign tests.
    normals: Vec<IntVector>,
}

impl RootSet {
    /// Accepts covectors of either sign; `α` and `−α` may both be listed.
    pub fn new(rank: usize, covectors: Vec<RatVector>) -> Result<Self, GeometryError> {
        if covectors.is_empty() {
            return Err(GeometryError::Empty);
        }
        let mut seen: HashMap<IntVector, (usize, RatVector)> = HashMap::new();
        for (index, c) in covectors.into_iter().enumerate() {
            if c.len() != rank {
                return Err(GeometryError::WrongLength {
                    index,
                    expected: rank,
                    found: c.len(),
                });
            }
            if c.iter().all(Zero::is_zero) {
                return Err(GeometryError::ZeroRoot { index });
            }
            let positive = sign_normalized(&c);
            let key = primitive_multiple(&positive);
            match seen.get(&key) {
                Some((first, existing)) if *existing != positive => {
                    return Err(GeometryError::Parallel {
                        first: *first,
                        second: index,
                    });
                }
                Some(_) => {}
                None => {
                    seen.insert(key, (index, positive));
                }
            }
        }
        let mut roots: Vec<RatVector> = seen.into_values().map(|(_, v)| v).collect();
        roots.sort_by(|a, b| b.cmp(a));
        let found = linalg::rank(&Matrix::from_rows(&roots));
        if found < rank {
            return Err(GeometryError::RankDeficient {
                expected: rank,
                found,
            });
        }
        let normals = roots.iter().map(|r| primitive_multiple(r)).collect();
        Ok(Self {
            rank,
            roots,
            normals,
        })
    }

    pub fn from_integer_roots(rank: usize, roots: &[Vec<i64>]) -> Result<Self, GeometryError> {
        Self::new(rank, roots.iter().map(|r| linalg::rat_vector(r)).collect())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of hyperplanes.
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn roots(&self) -> &[RatVector] {
        &self.roots
    }

    /// Primitive integer normal of hyperplane `i` (same sign as the root).
    pub fn normal(&self, i: usize) -> &IntVector {
        &self.normals[i]
    }

    pub fn index_of(&self, covector: &[BigRational]) -> Option<usize> {
        let key = sign_normalized(covector);
        self.roots.iter().position(|r| *r == key)
    }

    /// Applies a linear change of coordinates `α ↦ α·M` to every covector.
    pub fn transformed(&self, m: &RatMatrix) -> Result<Self, GeometryError> {
        let t = m.transpose();
        Self::new(self.rank, self.roots.iter().map(|r| t.apply(r)).collect())
    }

    /// All one-dimensional intersections of hyperplanes, as primitive
    /// integer directions (one of the two signs).
    fn lines(&self) -> Vec<IntVector> {
        let r = self.rank;
        if r == 1 {
            return vec![vec![BigInt::one()]];
        }
        let mut found: HashSet<IntVector> = HashSet::new();
        let mut chosen: Vec<usize> = Vec::with_capacity(r - 1);
        self.collect_lines(0, &mut chosen, &mut found);
        let mut lines: Vec<IntVector> = found.into_iter().collect();
        lines.sort();
        lines
    }

    fn collect_lines(&self, start: usize, chosen: &mut Vec<usize>, out: &mut HashSet<IntVector>) {
        if chosen.len() == self.rank - 1 {
            let rows: Vec<IntVector> = chosen.iter().map(|&i| self.normals[i].clone()).collect();
            if let Some(x) = kernel_line(&rows) {
                out.insert(x);
            }
            return;
        }
        for i in start..self.len() {
            chosen.push(i);
            let rows: Vec<RatVector> = chosen
                .iter()
                .map(|&j| linalg::to_rational(&self.normals[j]))
                .collect();
            if linalg::rank(&Matrix::from_rows(&rows)) == chosen.len() {
                self.collect_lines(i + 1, chosen, out);
            }
            chosen.pop();
        }
    }

    fn signs_at(&self, point: &[BigInt]) -> Option<Vec<bool>> {
        self.normals
            .iter()
            .map(|n| {
                let v = dot_int(n, point);
                (!v.is_zero()).then(|| v.is_positive())
            })
            .collect()
    }

    /// Smallest `t ≥ 1` such that `(1, t, t², …)` lies on no hyperplane.
    pub fn generic_point(&self) -> IntVector {
        let mut t = BigInt::one();
        loop {
            let mut p = Vec::with_capacity(self.rank);
            let mut x = BigInt::one();
            for _ in 0..self.rank {
                p.push(x.clone());
                x *= &t;
            }
            if self.signs_at(&p).is_some() {
                return p;
            }
            t += 1;
        }
    }
}

/// An open simplicial cone with labelled walls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    signs: Vec<bool>,
    walls: Vec<usize>,
    rays: Vec<IntVector>,
    frame: Vec<RatVector>,
    coframe: Vec<RatVector>,
}

impl Chamber {
    /// `signs[h]` is true when hyperplane `h`'s root is positive here.
    pub fn signs(&self) -> &[bool] {
        &self.signs
    }

    /// Root index of the wall with each label.
    pub fn walls(&self) -> &[usize] {
        &self.walls
    }

    /// Primitive extreme ray opposite each labelled wall.
    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    /// `B`: the wall roots, signed to be positive on the chamber.
    pub fn frame(&self) -> &[RatVector] {
        &self.frame
    }

    /// `B^∨`: the basis dual to [`Self::frame`], positive multiples of the rays.
    pub fn coframe(&self) -> &[RatVector] {
        &self.coframe
    }

    /// Coordinates of a covector in the frame `B`.
    pub fn coordinates(&self, covector: &[BigRational]) -> RatVector {
        self.coframe.iter().map(|x| dot(covector, x)).collect()
    }
}

/// Result of crossing a wall: the adjacent chamber and the base change.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reflection {
    pub target: usize,
    /// Matrix of `σ` with respect to `B`; column `j` is `σ(αⱼ)`.
    pub sigma: RatMatrix,
    /// `μⱼ` for `j ≠ i`, in label order.
    pub mu: Vec<Rational>,
    /// The new coframe vector `β^∨ = Σ μⱼ αⱼ^∨` with `μᵢ = −1`.
    pub beta_vee: RatVector,
}

/// All chambers of a simplicial arrangement, with wall adjacency.
#[derive(Clone, Debug)]
pub struct ChamberComplex {
    roots: RootSet,
    chambers: Vec<Chamber>,
    neighbors: Vec<Vec<usize>>,
    index: HashMap<Vec<bool>, usize>,
}

/// Enumerates chambers by breadth-first wall crossing.
pub fn enumerate_chambers(roots: &RootSet) -> Result<ChamberComplex, GeometryError> {
    ChamberComplex::build(roots)
}

pub fn is_simplicial(roots: &RootSet) -> bool {
    match enumerate_chambers(roots) {
        Ok(_) => true,
        Err(GeometryError::NonSimplicial { .. }) => false,
        Err(e) => unreachable!("validated root set failed chamber walk: {e}"),
    }
}

/// Connectivity of the root supports with respect to a basis of roots.
pub fn is_irreducible(roots: &RootSet) -> bool {
    let r = roots.rank();
    let mut basis: Vec<RatVector> = Vec::new();
    for root in roots.roots() {
        let mut trial = basis.clone();
        trial.push(root.clone());
        if linalg::rank(&Matrix::from_rows(&trial)) == trial.len() {
            basis = trial;
        }
        if basis.len() == r {
            break;
        }
    }
    let supports: Vec<Vec<usize>> = roots
        .roots()
        .iter()
        .map(|root| {
            let c = linalg::coordinates_in_span(&basis, root).expect("basis spans");
            (0..r).filter(|&i| !c[i].is_zero()).collect()
        })
        .collect();
    supports_connected(r, &supports)
}

/// Whether the graph on `0..r` with `i ~ j` whenever some support contains
/// both is connected.
pub(crate) fn supports_connected(r: usize, supports: &[Vec<usize>]) -> bool {
    let mut parent: Vec<usize> = (0..r).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for s in supports {
        for w in s.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    (0..r).all(|i| find(&mut parent, i) == root)
}

impl ChamberComplex {
    fn build(roots: &RootSet) -> Result<Self, GeometryError> {
        let lines = roots.lines();
        let start = roots.generic_point();
        let signs = roots.signs_at(&start).expect("generic point");
        let rays = cone_rays(roots, &lines, &signs)?;

        // Base labels follow the canonical root order.
        let mut labelled: Vec<(usize, IntVector)> = (0..rays.len())
            .map(|i| (wall_opposite(roots, &rays, i), rays[i].clone()))
            .collect();
        labelled.sort_by_key(|(w, _)| *w);
        let base = make_chamber(
            roots,
            signs,
            labelled.iter().map(|(w, _)| *w).collect(),
            labelled.into_iter().map(|(_, x)| x).collect(),
        );

        let r = roots.rank();
        let mut complex = Self {
            roots: roots.clone(),
            chambers: vec![base],
            neighbors: vec![vec![usize::MAX; r]],
            index: HashMap::new(),
        };
        complex.index.insert(complex.chambers[0].signs.clone(), 0);

        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for i in 0..r {
                let (walls, rays, signs) = {
                    let here = &complex.chambers[k];
                    let mut signs = here.signs.clone();
                    signs[here.walls[i]] = !signs[here.walls[i]];
                    let new_rays = cone_rays(roots, &lines, &signs)?;
                    let wall = roots.normal(here.walls[i]);
                    let fresh: Vec<&IntVector> = new_rays
                        .iter()
                        .filter(|x| !dot_int(wall, x).is_zero())
                        .collect();
                    debug_assert_eq!(fresh.len(), 1);
                    let mut rays = here.rays.clone();
                    rays[i] = fresh[0].clone();
                    let walls: Vec<usize> = (0..r)
                        .map(|j| {
                            if j == i {
                                here.walls[i]
                            } else {
                                wall_opposite(roots, &rays, j)
                            }
                        })
                        .collect();
                    (walls, rays, signs)
                };
                let target = match complex.index.get(&signs) {
                    Some(&t) => {
                        let existing = &complex.chambers[t];
                        if existing.walls != walls || existing.rays != rays {
                            return Err(GeometryError::InconsistentLabels { chamber: t });
                        }
                        t
                    }
                    None => {
                        let t = complex.chambers.len();
                        complex.index.insert(signs.clone(), t);
                        complex.chambers.push(make_chamber(roots, signs, walls, rays));
                        complex.neighbors.push(vec![usize::MAX; r]);
                        queue.push_back(t);
                        t
                    }
                };
                complex.neighbors[k][i] = target;
            }
        }
        Ok(complex)
    }

    pub fn roots(&self) -> &RootSet {
        &self.roots
    }

    pub fn chambers(&self) -> &[Chamber] {
        &self.chambers
    }

    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    /// The chamber containing the generic starting point.
    pub fn base(&self) -> &Chamber {
        &self.chambers[0]
    }

    /// `ρᵢ(K)` as a chamber index.
    pub fn neighbor(&self, chamber: usize, wall: usize) -> usize {
        self.neighbors[chamber][wall]
    }

    pub fn find(&self, signs: &[bool]) -> Option<usize> {
        self.index.get(signs).copied()
    }

    /// The reflection across wall `i` of chamber `k`, normalized so that
    /// `μᵢ = −1`.
    pub fn adjacent_reflection(&self, k: usize, i: usize) -> Result<Reflection, GeometryError> {
        let r = self.roots.rank();
        if k >= self.chambers.len() || i >= r {
            return Err(GeometryError::WallOutOfRange {
                chamber: k,
                wall: i,
            });
        }
        let here = &self.chambers[k];
        let target = self.neighbors[k][i];
        let ray = linalg::to_rational(&self.chambers[target].rays[i]);
        let scale = -dot(&here.frame[i], &ray);
        debug_assert!(scale.is_positive());
        let beta_vee: RatVector = ray.iter().map(|x| x / &scale).collect();
        let mut sigma = RatMatrix::identity(r);
        let mut mu = Vec::with_capacity(r - 1);
        for j in 0..r {
            if j == i {
                sigma[(i, i)] = -Rational::one();
            } else {
                let m = dot(&here.frame[j], &beta_vee);
                sigma[(i, j)] = m.clone();
                mu.push(m);
            }
        }
        Ok(Reflection {
            target,
            sigma,
            mu,
            beta_vee,
        })
    }

    /// `C^{K,B}` with `B` the frame of chamber `k`.
    pub fn cartan_of_chamber(&self, k: usize) -> RatMatrix {
        let r = self.roots.rank();
        let mut c = RatMatrix::filled(r, r, Rational::zero());
        for i in 0..r {
            let refl = self.adjacent_reflection(k, i).expect("valid chamber");
            for j in 0..r {
                c[(i, j)] = if i == j {
                    Rational::from_integer(2.into())
                } else {
                    -refl.sigma[(i, j)].clone()
                };
            }
        }
        c
    }
}

fn make_chamber(roots: &RootSet, signs: Vec<bool>, walls: Vec<usize>, rays: Vec<IntVector>) -> Chamber {
    let frame: Vec<RatVector> = walls
        .iter()
        .map(|&w| {
            let root = &roots.roots()[w];
            if signs[w] {
                root.clone()
            } else {
                root.iter().map(|x| -x).collect()
            }
        })
        .collect();
    let coframe = dual_basis(&frame).expect("walls of a simplicial cone are independent");
    Chamber {
        signs,
        walls,
        rays,
        frame,
        coframe,
    }
}

/// Extreme rays of the closed cone with the given sign vector.
fn cone_rays(roots: &RootSet, lines: &[IntVector], signs: &[bool]) -> Result<Vec<IntVector>, GeometryError> {
    let mut rays = Vec::new();
    for x in lines {
        let mut pos = true;
        let mut neg = true;
        for (n, &s) in roots.normals.iter().zip(signs) {
            let v = dot_int(n, x);
            let v = if s { v } else { -v };
            pos &= !v.is_negative();
            neg &= !v.is_positive();
            if !pos && !neg {
                break;
            }
        }
        if pos {
            rays.push(x.clone());
        } else if neg {
            rays.push(x.iter().map(|c| -c).collect());
        }
    }
    if rays.len() != roots.rank() {
        return Err(GeometryError::NonSimplicial {
            signs: signs.to_vec(),
            rays: rays.len(),
            rank: roots.rank(),
        });
    }
    Ok(rays)
}

/// The hyperplane through every ray except `rays[i]`.
fn wall_opposite(roots: &RootSet, rays: &[IntVector], i: usize) -> usize {
    (0..roots.len())
        .find(|&h| {
            rays.iter()
                .enumerate()
                .all(|(j, x)| j == i || dot_int(roots.normal(h), x).is_zero())
        })
        .expect("every facet of a simplicial chamber lies on a hyperplane")
}
