//! File formats: JSON root-set documents, SVG pictures of rank-3
//! arrangements and DOT chamber graphs.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{ChamberComplex, GeometryError, RootSet};
use crate::groupoid::RootVector;
use crate::linalg::RatVector;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed document")]
    Json(#[from] serde_json::Error),
    #[error("bad coordinate {0:?}")]
    BadCoordinate(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("rendering needs rank 3, document has rank {0}")]
    RankNotThree(usize),
}

/// A coordinate: a JSON integer, or a string `"p"` / `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Int(i64),
    Text(String),
}

impl Coordinate {
    pub fn to_rational(&self) -> Result<BigRational, IoError> {
        match self {
            Coordinate::Int(x) => Ok(BigRational::from_integer((*x).into())),
            Coordinate::Text(s) => {
                let bad = || IoError::BadCoordinate(s.clone());
                let (p, q) = match s.split_once('/') {
                    Some((p, q)) => (p.trim(), q.trim()),
                    None => (s.trim(), "1"),
                };
                let p: BigInt = p.parse().map_err(|_| bad())?;
                let q: BigInt = q.parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(p, q))
            }
        }
    }

    fn from_rational(x: &BigRational) -> Self {
        if x.is_integer() {
            if let Some(v) = x.to_integer().to_i64() {
                return Coordinate::Int(v);
            }
        }
        Coordinate::Text(x.to_string())
    }
}

/// `{"rank": r, "roots": [[…], …], "name": …}` holding one root per
/// hyperplane; negatives are implied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementDocument {
    pub rank: usize,
    pub roots: Vec<Vec<Coordinate>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl ArrangementDocument {
    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_integer_roots(name: Option<String>, rank: usize, roots: &[RootVector]) -> Self {
        Self {
            rank,
            roots: roots
                .iter()
                .map(|r| r.iter().map(|&x| Coordinate::Int(x)).collect())
                .collect(),
            name,
        }
    }

    pub fn from_root_set(name: Option<String>, roots: &RootSet) -> Self {
        Self {
            rank: roots.rank(),
            roots: roots
                .roots()
                .iter()
                .map(|r| r.iter().map(Coordinate::from_rational).collect())
                .collect(),
            name,
        }
    }

    pub fn root_set(&self) -> Result<RootSet, IoError> {
        let covectors = self
            .roots
            .iter()
            .map(|r| r.iter().map(Coordinate::to_rational).collect::<Result<RatVector, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RootSet::new(self.rank, covectors)?)
    }
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
];

const CENTER: f64 = 300.0;
const RADIUS: f64 = 250.0;

/// Draws the lines where the hyperplanes meet the affine plane
/// `x + y + z = 1`, clipped to a disc that contains every intersection
/// point. A hyperplane parallel to that plane is drawn as the disc boundary.
pub fn render_svg(roots: &RootSet) -> Result<String, IoError> {
    if roots.rank() != 3 {
        return Err(IoError::RankNotThree(roots.rank()));
    }
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    let origin = [1.0 / 3.0; 3];
    let u = [1.0 / s2, -1.0 / s2, 0.0];
    let v = [1.0 / s6, 1.0 / s6, -2.0 / s6];
    let dot = |a: &[f64], b: &[f64; 3]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    // Each line as (a, b, c) with a·s + b·t = c in chart coordinates.
    let lines: Vec<Option<(f64, f64, f64)>> = roots
        .roots()
        .iter()
        .map(|r| {
            let a: Vec<f64> = r.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect();
            let (p, q) = (dot(&a, &u), dot(&a, &v));
            let norm = (p * p + q * q).sqrt();
            let scale = a.iter().map(|x| x.abs()).fold(0.0, f64::max);
            (norm > 1e-12 * scale).then(|| (p / norm, q / norm, -dot(&a, &origin) / norm))
        })
        .collect();
    let mut extent: f64 = 0.0;
    for (x, l) in lines.iter().enumerate() {
        let Some((a1, b1, c1)) = *l else { continue };
        extent = extent.max(c1.abs());
        for (a2, b2, c2) in lines[x + 1..].iter().flatten().copied() {
            let det = a1 * b2 - a2 * b1;
            if det.abs() > 1e-12 {
                let s = (c1 * b2 - c2 * b1) / det;
                let t = (a1 * c2 - a2 * c1) / det;
                extent = extent.max((s * s + t * t).sqrt());
            }
        }
    }
    let r = if extent > 0.0 { 1.1 * extent } else { 1.0 };
    let to_px = |s: f64, t: f64| (CENTER + RADIUS * s / r, CENTER - RADIUS * t / r);

    let mut out = String::new();
    let size = 2.0 * CENTER;
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r#"  <rect width="{size}" height="{size}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r##"  <circle class="frame" cx="{CENTER}" cy="{CENTER}" r="{RADIUS}" fill="none" stroke="#cccccc" stroke-width="0.5"/>"##
    );
    for (k, l) in lines.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        match *l {
            None => {
                let _ = writeln!(
                    out,
                    r#"  <circle class="hyperplane" data-root="{k}" cx="{CENTER}" cy="{CENTER}" r="{RADIUS}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
                );
            }
            Some((a, b, c)) => {
                let half = (r * r - c * c).max(0.0).sqrt();
                let (x0, y0) = (a * c, b * c);
                let (x1, y1) = to_px(x0 - b * half, y0 + a * half);
                let (x2, y2) = to_px(x0 + b * half, y0 - a * half);
                let _ = writeln!(
                    out,
                    r#"  <line class="hyperplane" data-root="{k}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{color}" stroke-width="1.5"/>"#
                );
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Undirected chamber graph; edge labels are 1-based wall labels.
pub fn export_dot(cx: &ChamberComplex) -> String {
    let mut out = String::from("graph chambers {\n");
    for k in 0..cx.len() {
        let _ = writeln!(out, "  c{k};");
    }
    let r = cx.roots().rank();
    for k in 0..cx.len() {
        for i in 0..r {
            let t = cx.neighbor(k, i);
            if k < t {
                let _ = writeln!(out, "  c{k} -- c{t} [label=\"{}\"];", i + 1);
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::enumerate_chambers;

    #[test]
    fn parse_coordinates() {
        let doc = ArrangementDocument::from_json(r#"{"rank": 2, "roots": [[1, 0], ["1/2", "-3"]]}"#).unwrap();
        assert_eq!(doc.name, None);
        let set = doc.root_set().unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(
            Coordinate::Text("4/6".into()).to_rational().unwrap(),
            BigRational::new(2.into(), 3.into())
        );
        assert!(matches!(
            Coordinate::Text("1/0".into()).to_rational(),
            Err(IoError::BadCoordinate(_))
        ));
        assert!(matches!(
            ArrangementDocument::from_json(r#"{"rank": 2, "roots": [[1, 0]"#),
            Err(IoError::Json(_))
        ));
    }

    #[test]
    fn round_trip() {
        let doc = ArrangementDocument::from_integer_roots(Some("A2".into()), 2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let back = ArrangementDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        let again = ArrangementDocument::from_root_set(back.name.clone(), &back.root_set().unwrap());
        assert_eq!(again.root_set().unwrap(), doc.root_set().unwrap());
    }

    #[test]
    fn dot_hexagon() {
        let set = RootSet::from_integer_roots(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let dot = export_dot(&enumerate_chambers(&set).unwrap());
        assert!(dot.starts_with("graph chambers {"));
        assert_eq!(dot.matches(" -- ").count(), 6);
        assert_eq!(dot.matches("label=\"1\"").count(), 3);
    }

    #[test]
    fn svg_rank_check() {
        let set = RootSet::from_integer_roots(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(matches!(render_svg(&set), Err(IoError::RankNotThree(2))));
    }
}
