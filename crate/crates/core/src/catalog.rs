//! Known arrangements: the classical series and a few rank-two fixtures.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{GeometryError, RootSet};
use crate::groupoid::{GroupoidError, RootObject, RootVector};
use crate::linalg::{coordinates_in_span, rat_vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("{series}{rank} is not defined (need rank ≥ {min})")]
    InvalidRank { series: Series, rank: usize, min: usize },
    #[error("unknown catalog entry {0:?}")]
    Unknown(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Series {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Series {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Series::A),
            "B" | "b" => Ok(Series::B),
            "C" | "c" => Ok(Series::C),
            "D" | "d" => Ok(Series::D),
            _ => Err(CatalogError::Unknown(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedStats {
    pub chambers: u64,
    pub positive_roots: usize,
    /// `None` for entries that are not crystallographic.
    pub min_cartan: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub rank: usize,
    /// Positive roots in simple-root coordinates (for the non-crystallographic
    /// fixture, in the given coordinates).
    pub positive_roots: Vec<RootVector>,
    pub crystallographic: bool,
    pub expected: ExpectedStats,
    /// Positive roots in the standard ε-coordinates, for the classical series.
    pub ambient: Option<Vec<RootVector>>,
}

impl CatalogEntry {
    pub fn root_set(&self) -> RootSet {
        RootSet::from_integer_roots(self.rank, &self.positive_roots).expect("catalog roots are valid")
    }

    pub fn object(&self) -> Result<RootObject, GroupoidError> {
        RootObject::new(self.rank, self.positive_roots.clone())
    }

    /// The hyperplanes in ε-coordinates.
    pub fn ambient_root_set(&self) -> Option<Result<RootSet, GeometryError>> {
        let amb = self.ambient.as_ref()?;
        let dim = amb[0].len();
        Some(RootSet::from_integer_roots(dim, amb))
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

fn combo(n: usize, terms: &[(i64, usize)]) -> Vec<i64> {
    let mut v = vec![0; n];
    for &(c, i) in terms {
        v[i] += c;
    }
    v
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Classical root system of the given type in simple-root coordinates.
pub fn make_series(series: Series, r: usize) -> Result<CatalogEntry, CatalogError> {
    let min = if series == Series::D { 4 } else { 2 };
    if r < min {
        return Err(CatalogError::InvalidRank { series, rank: r, min });
    }
    let dim = if series == Series::A { r + 1 } else { r };
    let mut positive = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            positive.push(combo(dim, &[(1, i), (-1, j)]));
            if series != Series::A {
                positive.push(combo(dim, &[(1, i), (1, j)]));
            }
        }
        match series {
            Series::B => positive.push(unit(dim, i)),
            Series::C => positive.push(combo(dim, &[(2, i)])),
            _ => {}
        }
    }
    let mut simple: Vec<Vec<i64>> = (0..r.min(dim - 1)).map(|i| combo(dim, &[(1, i), (-1, i + 1)])).collect();
    match series {
        Series::A => {}
        Series::B => simple.push(unit(dim, r - 1)),
        Series::C => simple.push(combo(dim, &[(2, r - 1)])),
        Series::D => simple.push(combo(dim, &[(1, r - 2), (1, r - 1)])),
    }
    let basis: Vec<_> = simple.iter().map(|s| rat_vector(s)).collect();
    let mut in_simple: Vec<RootVector> = positive
        .iter()
        .map(|p| {
            coordinates_in_span(&basis, &rat_vector(p))
                .expect("roots lie in the span of the simple roots")
                .iter()
                .map(|x| x.to_integer().to_i64().expect("small coordinates"))
                .collect()
        })
        .collect();
    in_simple.sort();
    let rr = r as u64;
    let (chambers, min_cartan) = match series {
        Series::A => (factorial(rr + 1), -1),
        Series::B | Series::C => ((1u64 << r) * factorial(rr), -2),
        Series::D => ((1u64 << (r - 1)) * factorial(rr), -1),
    };
    Ok(CatalogEntry {
        name: format!("{series}{r}"),
        rank: r,
        expected: ExpectedStats {
            chambers,
            positive_roots: in_simple.len(),
            min_cartan: Some(min_cartan),
        },
        positive_roots: in_simple,
        crystallographic: true,
        ambient: Some(positive),
    })
}

/// The rank-two fixtures: a crystallographic set with seven positive roots,
/// a non-crystallographic set with three, and `A2`.
pub fn fixtures() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "rank2-seven".into(),
            rank: 2,
            positive_roots: vec![
                vec![1, 0],
                vec![3, 1],
                vec![2, 1],
                vec![5, 3],
                vec![3, 2],
                vec![1, 1],
                vec![0, 1],
            ],
            crystallographic: true,
            expected: ExpectedStats {
                chambers: 14,
                positive_roots: 7,
                min_cartan: Some(-3),
            },
            ambient: None,
        },
        CatalogEntry {
            name: "rank2-nonintegral".into(),
            rank: 2,
            positive_roots: vec![vec![1, 0], vec![0, 1], vec![1, 2]],
            crystallographic: false,
            expected: ExpectedStats {
                chambers: 6,
                positive_roots: 3,
                min_cartan: None,
            },
            ambient: None,
        },
        make_series(Series::A, 2).expect("A2"),
    ]
}

/// Looks up a fixture by name, or a series entry such as `B3`.
pub fn lookup(name: &str) -> Result<CatalogEntry, CatalogError> {
    if let Some(entry) = fixtures().into_iter().find(|e| e.name == name) {
        return Ok(entry);
    }
    let mut chars = name.chars();
    let series: Series = chars
        .next()
        .map(|c| c.to_string())
        .ok_or_else(|| CatalogError::Unknown(name.to_string()))?
        .parse()
        .map_err(|_| CatalogError::Unknown(name.to_string()))?;
    let rank: usize = chars
        .as_str()
        .parse()
        .map_err(|_| CatalogError::Unknown(name.to_string()))?;
    make_series(series, rank)
}

/// Names accepted by [`lookup`] besides the open-ended series.
pub fn fixture_names() -> Vec<String> {
    fixtures().into_iter().map(|e| e.name).collect()
}
