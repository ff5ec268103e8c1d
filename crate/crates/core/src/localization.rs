//! Localizations `X ∩ R` of a root object at a subspace `X`, and the
//! chamber walk around a rank-two localization of a rank-three object.

use serde::Serialize;
use thiserror::Error;

use crate::groupoid::{cartan_from_roots, reflect_object, reflection_matrix, GroupoidError, RootObject, RootVector};
use crate::linalg::{self, coordinates_in_span, rank_of, Matrix};
use crate::rank2::{check_esequence, Pair};
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizationError {
    #[error("object has rank {0}, expected 3")]
    RankNotThree(usize),
    #[error("labels must be distinct and below the rank, got {0} and {1}")]
    BadLabels(usize, usize),
    #[error("walk of {steps} reflections did not return to the start")]
    CycleBroken { steps: usize },
    #[error("quiddity entries {position} and {} differ", position + .period)]
    PeriodBroken { position: usize, period: usize },
    #[error("{root:?} is not a root with last coordinate 1")]
    MissingRoot { root: RootVector },
    #[error("localization roots do not form an ℰ-sequence")]
    NotESequence,
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Localization {
    pub generators: Vec<RootVector>,
    /// Positive roots lying in the span of the generators.
    pub members: Vec<RootVector>,
    /// Members that are not a sum of two members.
    pub simple: Vec<RootVector>,
    pub dimension: usize,
}

impl Localization {
    /// Whether every member is a non-negative integer combination of the
    /// simple members.
    pub fn covered_by_simple(&self) -> bool {
        if self.simple.len() != self.dimension {
            return false;
        }
        let basis: Vec<_> = self.simple.iter().map(|v| linalg::rat_vector(v)).collect();
        self.members.iter().all(|m| {
            coordinates_in_span(&basis, &linalg::rat_vector(m)).is_some_and(|c| {
                c.iter().all(|x| x.is_integer() && !x.is_negative())
            })
        })
    }
}

/// Roots of `obj` in the rational span of `generators`.
pub fn localize(obj: &RootObject, generators: &[RootVector]) -> Localization {
    let dimension = rank_of(generators);
    let members: Vec<RootVector> = obj
        .roots()
        .iter()
        .filter(|root| {
            let mut trial = generators.to_vec();
            trial.push((*root).clone());
            rank_of(&trial) == dimension
        })
        .cloned()
        .collect();
    let simple = members
        .iter()
        .filter(|v| !is_sum_of_two(v, &members))
        .cloned()
        .collect();
    Localization {
        generators: generators.to_vec(),
        members,
        simple,
        dimension,
    }
}

/// Localization at the plane spanned by the simple roots `i` and `j`.
pub fn coordinate_plane(obj: &RootObject, i: usize, j: usize) -> Localization {
    let r = obj.rank();
    localize(obj, &[crate::groupoid::unit(r, i), crate::groupoid::unit(r, j)])
}

pub(crate) fn is_sum_of_two(v: &[i64], pool: &[RootVector]) -> bool {
    pool.iter().any(|a| {
        let rest: Vec<i64> = v.iter().zip(a).map(|(x, y)| x - y).collect();
        rest.iter().any(|x| !x.is_zero()) && pool.contains(&rest)
    })
}

/// The walk `K₁, …, K₂ₙ` around `⟨αᵢ, αⱼ⟩` and the integers read off it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizationCycles {
    pub n: usize,
    /// `c₁, …, c₂ₙ`; period `n`.
    pub quiddity: Vec<i64>,
    /// `d₁, …, d₂ₙ`.
    pub auxiliary: Vec<i64>,
    #[serde(skip)]
    pub objects: Vec<RootObject>,
}

impl LocalizationCycles {
    /// Whether two cyclically consecutive auxiliary entries vanish.
    pub fn has_consecutive_zeros(&self) -> bool {
        let d = &self.auxiliary;
        (0..d.len()).any(|t| d[t] == 0 && d[(t + 1) % d.len()] == 0)
    }
}

fn third_label(i: usize, j: usize) -> usize {
    3 - i - j
}

fn check_labels(obj: &RootObject, i: usize, j: usize) -> Result<(), LocalizationError> {
    if obj.rank() != 3 {
        return Err(LocalizationError::RankNotThree(obj.rank()));
    }
    if i == j || i >= 3 || j >= 3 {
        return Err(LocalizationError::BadLabels(i, j));
    }
    Ok(())
}

/// Walks the `2n` chambers adjacent to `⟨αᵢ, αⱼ⟩`, reflecting alternately
/// at `i` and `j` (labels are 0-based), and reads `c` and `d` from the
/// Cartan matrices along the way.
pub fn rank2_cycles(obj: &RootObject, i: usize, j: usize) -> Result<LocalizationCycles, LocalizationError> {
    check_labels(obj, i, j)?;
    let k = third_label(i, j);
    let n = coordinate_plane(obj, i, j).members.len();
    let mut objects = Vec::with_capacity(2 * n);
    let mut quiddity = Vec::with_capacity(2 * n);
    let mut auxiliary = Vec::with_capacity(2 * n);
    let mut current = obj.clone();
    for t in 0..2 * n {
        let c = cartan_from_roots(&current);
        let (a, b) = if t % 2 == 0 { (i, j) } else { (j, i) };
        quiddity.push(-c[(a, b)]);
        auxiliary.push(-c[(a, k)]);
        let next = reflect_object(&current, a)?;
        objects.push(current);
        current = next;
    }
    if current != *obj {
        return Err(LocalizationError::CycleBroken { steps: 2 * n });
    }
    if let Some(position) = (0..n).find(|&t| quiddity[t] != quiddity[t + n]) {
        return Err(LocalizationError::PeriodBroken { position, period: n });
    }
    Ok(LocalizationCycles {
        n,
        quiddity,
        auxiliary,
        objects,
    })
}

/// Roots with last coordinate one ("third" meaning the label other than
/// `i` and `j`) built from the auxiliary cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneRoots {
    /// Localization roots ordered from `e_j` to `e_i`.
    pub betas: Vec<RootVector>,
    pub gammas: Vec<RootVector>,
    pub deltas: Vec<RootVector>,
    pub cycles: LocalizationCycles,
    /// `γ_{ℓ+1} − γ_ℓ` is non-negative for every `ℓ`.
    pub monotone: bool,
    pub distinct_gammas: usize,
}

/// Localization roots of `⟨e_i, e_j⟩` sorted so that their `(i, j)`
/// coordinates run from `(0,1)` to `(1,0)`.
pub fn sorted_plane(obj: &RootObject, i: usize, j: usize) -> Result<Vec<RootVector>, LocalizationError> {
    let mut betas = coordinate_plane(obj, i, j).members;
    let det = |u: &RootVector, w: &RootVector| u[i] * w[j] - u[j] * w[i];
    betas.sort_by(|u, w| det(u, w).cmp(&0));
    let pairs: Vec<Pair> = betas.iter().map(|b| [b[i], b[j]]).collect();
    check_esequence(&pairs).map_err(|_| LocalizationError::NotESequence)?;
    Ok(betas)
}

/// `γ_ℓ = e_k + Σ_{m ≤ ℓ} d_m β_m` and `δ_ℓ = e_k + Σ_{m ≤ ℓ} d_{2n+1−m} β_{n+1−m}`
/// with `d` the auxiliary cycle of `⟨α_j, α_i⟩` and `β₁ = e_j, …, β_n = e_i`.
pub fn plane_roots(obj: &RootObject, i: usize, j: usize) -> Result<PlaneRoots, LocalizationError> {
    check_labels(obj, i, j)?;
    let k = third_label(i, j);
    let betas = sorted_plane(obj, i, j)?;
    let cycles = rank2_cycles(obj, j, i)?;
    let n = cycles.n;
    let d = &cycles.auxiliary;
    let accumulate = |order: &mut dyn Iterator<Item = (i64, &RootVector)>| -> Result<Vec<RootVector>, LocalizationError> {
        let mut current = crate::groupoid::unit(3, k);
        let mut out = vec![current.clone()];
        for (coef, beta) in order {
            for (x, b) in current.iter_mut().zip(beta) {
                *x += coef * b;
            }
            if current[k] != 1 || !obj.contains(&current) {
                return Err(LocalizationError::MissingRoot { root: current });
            }
            out.push(current.clone());
        }
        Ok(out)
    };
    let gammas = accumulate(&mut (0..n).map(|m| (d[m], &betas[m])))?;
    let deltas = accumulate(&mut (0..n).map(|m| (d[2 * n - 1 - m], &betas[n - 1 - m])))?;
    let monotone = gammas.windows(2).all(|w| w[1].iter().zip(&w[0]).all(|(a, b)| a >= b));
    let mut distinct = gammas.clone();
    distinct.sort();
    distinct.dedup();
    Ok(PlaneRoots {
        betas,
        gammas,
        deltas,
        monotone,
        distinct_gammas: distinct.len(),
        cycles,
    })
}

/// `γ_ℓ` computed as the image of `e_k` under the base change from `K_{ℓ+1}`
/// back to the starting object, composing reflection matrices along the
/// walk of [`rank2_cycles`]`(obj, j, i)`.
pub fn gammas_by_walk(obj: &RootObject, i: usize, j: usize) -> Result<Vec<RootVector>, LocalizationError> {
    check_labels(obj, i, j)?;
    let k = third_label(i, j);
    let cycles = rank2_cycles(obj, j, i)?;
    let mut w = Matrix::<i64>::identity(3);
    let mut out = vec![w.apply(&crate::groupoid::unit(3, k))];
    for t in 0..cycles.n {
        let label = if t % 2 == 0 { j } else { i };
        let s = reflection_matrix(&cartan_from_roots(&cycles.objects[t]), label);
        w = w.mul(&s);
        out.push(w.apply(&crate::groupoid::unit(3, k)));
    }
    Ok(out)
}
