//! Linear programs by vertex enumeration: `min c.x` with `x >= 0`.

use itertools::Itertools;
use num_traits::{Signed, Zero, One};

use crate::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Brute {
    Optimal(Q),
    Infeasible,
    Unbounded,
}

type Row = (Vec<Q>, Rel, Q);

fn holds(row: &Row, x: &[Q]) -> bool {
    let lhs: Q = row.0.iter().zip(x).map(|(a, v)| a * v).sum();
    match row.1 {
        Rel::Le => lhs <= row.2,
        Rel::Ge => lhs >= row.2,
        Rel::Eq => lhs == row.2,
    }
}

/// Unique solution of the square system, if the rows are independent.
fn solve_square(rows: &[&Row], n: usize) -> Option<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| {
            let mut v = r.0.clone();
            v.push(r.2.clone());
            v
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in 0..=n {
                    let t = &m[col][k] * &f;
                    m[r][k] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Every vertex of `{x >= 0 : rows}`.
pub fn vertices(rows: &[Row], n: usize) -> Vec<Vec<Q>> {
    let mut all: Vec<Row> = rows.to_vec();
    for j in 0..n {
        let mut e = vec![Q::zero(); n];
        e[j] = Q::one();
        all.push((e, Rel::Ge, Q::zero()));
    }
    let mut out: Vec<Vec<Q>> = Vec::new();
    for subset in (0..all.len()).combinations(n) {
        let picked: Vec<&Row> = subset.iter().map(|&k| &all[k]).collect();
        if let Some(x) = solve_square(&picked, n) {
            if all.iter().all(|r| holds(r, &x)) && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

pub fn brute_lp(a: &[Vec<Q>], rel: &[Rel], b: &[Q], c: &[Q]) -> Brute {
    let n = c.len();
    let rows: Vec<Row> = a.iter().zip(rel).zip(b).map(|((r, &k), v)| (r.clone(), k, v.clone())).collect();
    let verts = vertices(&rows, n);
    if verts.is_empty() {
        return Brute::Infeasible;
    }
    // Extreme rays: vertices of the recession cone cut by sum(d) = 1.
    let mut cone: Vec<Row> = rows
        .iter()
        .map(|(r, k, _)| (r.clone(), *k, Q::zero()))
        .collect();
    cone.push((vec![Q::one(); n], Rel::Eq, Q::one()));
    let dot = |x: &Vec<Q>| -> Q { x.iter().zip(c).map(|(a, b)| a * b).sum() };
    if vertices(&cone, n).iter().any(|d| dot(d).is_negative()) {
        return Brute::Unbounded;
    }
    Brute::Optimal(verts.iter().map(dot).min().expect("non-empty"))
}
