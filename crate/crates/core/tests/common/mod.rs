//! Independent reference computations used to cross-check the library.
//! Everything here is brute force over `i64`/`i128` and shares no code with
//! the crate under test.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0] as i128;
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &x)| x).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] as i128 * cofactor_det(&minor)
        })
        .sum()
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `Vol₂` as the gcd of the 2×2 minors.
pub fn vol2_minors(a: &[i64], b: &[i64]) -> i128 {
    let mut g = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            g = gcd(g, a[i] as i128 * b[j] as i128 - a[j] as i128 * b[i] as i128);
        }
    }
    g
}

/// Generalized cross product: the vector of signed maximal minors of an
/// `(r−1) × r` matrix.
fn cross(rows: &[Vec<i64>], r: usize) -> Vec<i64> {
    (0..r)
        .map(|c| {
            let minor: Vec<Vec<i64>> = rows
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &x)| x).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            (sign * cofactor_det(&minor)) as i64
        })
        .collect()
}

fn normalize(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i128, |acc, &x| gcd(acc, x as i128)) as i64;
    let mut w: Vec<i64> = v.iter().map(|x| x / g).collect();
    if w.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        w.iter_mut().for_each(|x| *x = -*x);
    }
    w
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// One-dimensional intersections of the hyperplanes `ker α`.
pub fn lines(roots: &[Vec<i64>], r: usize) -> Vec<Vec<i64>> {
    let mut out = BTreeSet::new();
    for s in subsets(roots.len(), r - 1) {
        let rows: Vec<Vec<i64>> = s.iter().map(|&i| roots[i].clone()).collect();
        let x = cross(&rows, r);
        if x.iter().any(|&v| v != 0) {
            out.insert(normalize(&x));
        }
    }
    out.into_iter().collect()
}

/// Chamber count of a simplicial arrangement by sign vectors: every chamber
/// contains a signed sum of `r` of its extreme rays, and every such sum
/// avoiding all hyperplanes lies in some chamber.
pub fn chamber_count(roots: &[Vec<i64>], r: usize) -> usize {
    let ls = lines(roots, r);
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    for s in subsets(ls.len(), r) {
        for mask in 0..(1u32 << r) {
            let mut p = vec![0i64; r];
            for (bit, &l) in s.iter().enumerate() {
                let sign = if mask >> bit & 1 == 1 { -1 } else { 1 };
                for c in 0..r {
                    p[c] += sign * ls[l][c];
                }
            }
            let evals: Vec<i64> = roots.iter().map(|a| a.iter().zip(&p).map(|(x, y)| x * y).sum()).collect();
            if evals.iter().all(|&e| e != 0) {
                seen.insert(evals.iter().map(|&e| e > 0).collect());
            }
        }
    }
    seen.len()
}

/// Rank-3 chamber count from the Euler characteristic of the projective
/// plane: `2(1 − v + Σₚ mₚ)` over intersection points `p` of multiplicity `mₚ`.
pub fn euler_chambers(roots: &[Vec<i64>]) -> usize {
    let pts = lines(roots, 3);
    let total: usize = pts
        .iter()
        .map(|p| roots.iter().filter(|a| a.iter().zip(p).map(|(x, y)| x * y).sum::<i64>() == 0).count())
        .sum();
    2 * (1 + total - pts.len())
}

pub fn catalan(n: usize) -> u64 {
    let mut c = vec![1u64];
    for k in 0..n {
        c.push((0..=k).map(|i| c[i] * c[k - i]).sum());
    }
    c[n]
}

/// All triangulations of the convex polygon with vertices `0..n`, each as
/// its set of diagonals.
pub fn triangulations(n: usize) -> BTreeSet<BTreeSet<(usize, usize)>> {
    fn between(a: usize, b: usize) -> Vec<BTreeSet<(usize, usize)>> {
        // Triangulations of the sub-polygon a, a+1, …, b (edge a–b included).
        if b - a < 2 {
            return vec![BTreeSet::new()];
        }
        let mut out = Vec::new();
        for m in a + 1..b {
            for left in between(a, m) {
                for right in between(m, b) {
                    let mut t: BTreeSet<(usize, usize)> = left.union(&right).copied().collect();
                    if m - a > 1 {
                        t.insert((a, m));
                    }
                    if b - m > 1 {
                        t.insert((m, b));
                    }
                    out.push(t);
                }
            }
        }
        out
    }
    if n < 3 {
        return BTreeSet::from([BTreeSet::new()]);
    }
    between(0, n - 1).into_iter().collect()
}

/// Classical Cartan matrix from the Dynkin diagram, `c_{ij} = ⟨αⱼ, αᵢ^∨⟩`
/// convention as rows: entry `(i, j)` is `−max{k : kαᵢ + αⱼ root}`.
pub fn classical_cartan(series: char, r: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; r]; r];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = |c: &mut Vec<Vec<i64>>, upto: usize| {
        for i in 0..upto {
            c[i][i + 1] = -1;
            c[i + 1][i] = -1;
        }
    };
    match series {
        'A' => chain(&mut c, r - 1),
        'B' => {
            // Last simple root short: 2α_r + α_{r−1} is a root.
            chain(&mut c, r - 1);
            c[r - 1][r - 2] = -2;
        }
        'C' => {
            // Last simple root long: 2α_{r−1} + α_r is a root.
            chain(&mut c, r - 1);
            c[r - 2][r - 1] = -2;
        }
        'D' => {
            chain(&mut c, r - 2);
            c[r - 3][r - 1] = -1;
            c[r - 1][r - 3] = -1;
        }
        _ => panic!("unknown series"),
    }
    c
}

pub fn permutations(r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(r - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, r - 1);
            out.push(q);
        }
    }
    out
}

/// Whether `b = PᵀaP` for some permutation matrix `P`.
pub fn equal_up_to_permutation(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let r = a.len();
    permutations(r)
        .iter()
        .any(|p| (0..r).all(|i| (0..r).all(|j| a[p[i]][p[j]] == b[i][j])))
}

/// Brute-force version of "some `m ≥ 1`, `n ∈ ℤ` give `−mα + nβ ≥ 0`",
/// searched over a box.
pub fn orthant_bruteforce(alpha: &[i64], beta: &[i64], bound: i64) -> bool {
    (1..=bound).any(|m| {
        (-bound * 4..=bound * 4).any(|n| alpha.iter().zip(beta).all(|(a, b)| -m * a + n * b >= 0))
    })
}

/// Applies the elementary operations `(i, j, k)`: column `i += k·column j`,
/// to the identity, giving a matrix of determinant one.
pub fn unimodular(r: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    for &(i, j, k) in ops {
        let (i, j) = (i % r, j % r);
        if i == j {
            continue;
        }
        for row in m.iter_mut() {
            row[i] += k * row[j];
        }
    }
    m
}

/// `v ↦ Mᵀv` on a list of vectors.
pub fn transform(m: &[Vec<i64>], roots: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = m.len();
    roots
        .iter()
        .map(|v| (0..r).map(|c| (0..r).map(|k| m[k][c] * v[k]).sum()).collect())
        .collect()
}
