//! Assignment matrices and deterministic matchings.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Doubly stochastic `n x n` matrix; entry `(i, j)` is the probability that
/// agent `i` receives object `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AssignmentMatrix {
    rows: Vec<Vec<Rational>>,
}

impl AssignmentMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        check_doubly_stochastic(&rows)?;
        Ok(Self { rows })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_fractions(rows: &[&[(i64, i64)]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&(a, b)| rational::rat(a, b)).collect())
                .collect(),
        )
    }

    pub fn uniform(n: usize) -> Self {
        let v = rational::rat(1, n as i64);
        Self { rows: vec![vec![v; n]; n] }
    }

    pub fn identity(n: usize) -> Self {
        Matching::identity(n).to_matrix()
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn into_rows(self) -> Vec<Vec<Rational>> {
        self.rows
    }

    pub fn is_deterministic(&self) -> bool {
        self.rows.iter().flatten().all(|v| v.is_zero() || v.is_one())
    }
}

impl fmt::Display for AssignmentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(rational::short).collect())
            .collect();
        let width = cells.iter().flatten().map(|c| c.len()).max().unwrap_or(1);
        for (i, row) in cells.iter().enumerate() {
            write!(f, "{}:", i + 1)?;
            for c in row {
                write!(f, " {c:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn check_doubly_stochastic(rows: &[Vec<Rational>]) -> Result<()> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::NotDoublyStochastic("empty matrix".into()));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::SizeMismatch { expected: n, found: r.len() });
        }
        if let Some(j) = r.iter().position(|v| v.is_negative() || *v > Rational::one()) {
            return Err(Error::NotDoublyStochastic(format!(
                "entry ({}, {}) = {} lies outside [0, 1]",
                i + 1,
                j + 1,
                r[j]
            )));
        }
        let s = rational::sum(r);
        if !s.is_one() {
            return Err(Error::NotDoublyStochastic(format!("row {} sums to {s}", i + 1)));
        }
    }
    for j in 0..n {
        let s = rational::sum(rows.iter().map(|r| &r[j]));
        if !s.is_one() {
            return Err(Error::NotDoublyStochastic(format!("column {} sums to {s}", j + 1)));
        }
    }
    Ok(())
}

/// A perfect matching: agent `i` receives object `objects[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    objects: Vec<usize>,
}

impl Matching {
    pub fn new(objects: Vec<usize>) -> Result<Self> {
        let n = objects.len();
        let mut seen = vec![false; n];
        for &o in &objects {
            if o >= n || std::mem::replace(&mut seen[o], true) {
                return Err(Error::InvalidMatching(format!("{objects:?} is not a permutation")));
            }
        }
        Ok(Self { objects })
    }

    pub fn identity(n: usize) -> Self {
        Self { objects: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.objects.len()
    }

    pub fn object_of(&self, agent: usize) -> usize {
        self.objects[agent]
    }

    pub fn objects(&self) -> &[usize] {
        &self.objects
    }

    pub fn to_matrix(&self) -> AssignmentMatrix {
        let n = self.n();
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for (i, &o) in self.objects.iter().enumerate() {
            rows[i][o] = Rational::one();
        }
        AssignmentMatrix { rows }
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| format!("{}->o{}", i + 1, o + 1))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Lexicographic enumeration of all `n!` matchings.
pub fn all_matchings(n: usize) -> impl Iterator<Item = Matching> {
    use itertools::Itertools;
    (0..n).permutations(n).map(|objects| Matching { objects })
}

/// Lexicographically smallest perfect matching of the bipartite graph
/// `allowed`, if one exists.
pub fn lex_perfect_matching(allowed: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = allowed.len();
    let mut taken = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut chosen = None;
        for j in 0..n {
            if !allowed[i][j] || taken[j] {
                continue;
            }
            taken[j] = true;
            if completes(allowed, &taken, i + 1) {
                chosen = Some(j);
                break;
            }
            taken[j] = false;
        }
        out.push(chosen?);
    }
    Some(out)
}

/// Whether agents `from..n` can be matched into the objects not yet taken.
fn completes(allowed: &[Vec<bool>], taken: &[bool], from: usize) -> bool {
    let n = allowed.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for i in from..n {
        let mut seen = vec![false; n];
        if !augment(allowed, taken, i, &mut seen, &mut owner) {
            return false;
        }
    }
    true
}

fn augment(
    allowed: &[Vec<bool>],
    taken: &[bool],
    i: usize,
    seen: &mut [bool],
    owner: &mut [Option<usize>],
) -> bool {
    for j in 0..allowed.len() {
        if !allowed[i][j] || taken[j] || seen[j] {
            continue;
        }
        seen[j] = true;
        if owner[j].is_none_or(|k| augment(allowed, taken, k, seen, owner)) {
            owner[j] = Some(i);
            return true;
        }
    }
    false
}
