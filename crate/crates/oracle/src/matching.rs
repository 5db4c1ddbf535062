//! Pareto efficiency, envy and dominance by direct enumeration.

use itertools::Itertools;

use crate::Q;

/// Class index (0-based) of object `o` (0-based).
pub fn class_of(bounds: &[usize], o: usize) -> usize {
    bounds.iter().position(|&b| o < b).expect("object in range")
}

/// Cumulative mass at the end of each class.
pub fn prefix_sums(row: &[Q], bounds: &[usize]) -> Vec<Q> {
    bounds.iter().map(|&b| row[..b].iter().sum()).collect()
}

pub fn weakly_dominates(p: &[Q], q: &[Q], bounds: &[usize]) -> bool {
    prefix_sums(p, bounds).iter().zip(prefix_sums(q, bounds)).all(|(a, b)| *a >= b)
}

pub fn envy_free(m: &[Vec<Q>], prefs: &[Vec<usize>]) -> bool {
    (0..m.len()).all(|i| (0..m.len()).all(|j| weakly_dominates(&m[i], &m[j], &prefs[i])))
}

pub fn equal_treatment(m: &[Vec<Q>], prefs: &[Vec<usize>]) -> bool {
    (0..m.len()).all(|i| {
        (0..m.len()).all(|j| prefs[i] != prefs[j] || prefix_sums(&m[i], &prefs[i]) == prefix_sums(&m[j], &prefs[j]))
    })
}

pub fn doubly_stochastic(m: &[Vec<Q>]) -> bool {
    let one = Q::from_integer(1.into());
    let n = m.len();
    m.iter().all(|r| r.len() == n && r.iter().all(|v| *v >= Q::from_integer(0.into())) && r.iter().sum::<Q>() == one)
        && (0..n).all(|j| m.iter().map(|r| &r[j]).sum::<Q>() == one)
}

/// Pareto-efficient matchings (agent -> object), in lexicographic order.
pub fn pe_matchings(prefs: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = prefs.len();
    let all: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let classes = |m: &Vec<usize>| -> Vec<usize> { m.iter().enumerate().map(|(i, &o)| class_of(&prefs[i], o)).collect() };
    let vecs: Vec<Vec<usize>> = all.iter().map(classes).collect();
    all.iter()
        .zip(&vecs)
        .filter(|(_, v)| !vecs.iter().any(|w| w.iter().zip(v.iter()).all(|(a, b)| a <= b) && w != *v))
        .map(|(m, _)| m.clone())
        .collect()
}
