//! Dense two-phase tableau simplex over exact rationals with Bland's rule.
//!
//! Input is `min c.x` subject to `a_k.x (rel_k) b_k`, `x >= 0`. Multipliers
//! are read off the reduced costs of each row's initial unit column, so the
//! phase-1 optimum yields a Farkas certificate and the phase-2 optimum yields
//! dual values, both expressed against the caller's (un-normalised) rows.

use num_traits::{Signed, Zero};

use super::Relation;
use crate::rational::{one, Rational};

pub(crate) enum RawOutcome {
    Optimal { x: Vec<Rational>, y: Vec<Rational>, value: Rational },
    Infeasible { y: Vec<Rational> },
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    z: Vec<Rational>,
    basis: Vec<usize>,
    rhs: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let piv = self.rows[r][j].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v /= &piv;
            }
        }
        let prow = self.rows[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k != r && !row[j].is_zero() {
                eliminate(row, &prow, j);
            }
        }
        if !self.z[j].is_zero() {
            eliminate(&mut self.z, &prow, j);
        }
        self.basis[r] = j;
    }

    fn run(&mut self, allowed: &[bool]) -> Step {
        loop {
            let entering = (0..self.rhs).find(|&j| allowed[j] && self.z[j].is_negative());
            let Some(j) = entering else { return Step::Optimal };
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = &row[self.rhs] / &row[j];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, j),
                None => return Step::Unbounded,
            }
        }
    }

    fn price(&mut self, cost: &[Rational]) {
        let mut z: Vec<Rational> = cost.to_vec();
        z.push(Rational::zero());
        for (r, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[r]];
            if cb.is_zero() {
                continue;
            }
            for (zj, t) in z.iter_mut().zip(row) {
                if !t.is_zero() {
                    *zj -= cb * t;
                }
            }
        }
        self.z = z;
    }
}

fn eliminate(row: &mut [Rational], prow: &[Rational], j: usize) {
    let f = row[j].clone();
    for (v, p) in row.iter_mut().zip(prow) {
        if !p.is_zero() {
            *v -= &f * p;
        }
    }
}

pub(crate) fn solve(
    a: &[Vec<Rational>],
    rel: &[Relation],
    b: &[Rational],
    c: &[Rational],
) -> RawOutcome {
    let m = a.len();
    let n = c.len();

    // Normalise to non-negative right-hand sides.
    let mut sign = vec![1i8; m];
    let mut rel_n = rel.to_vec();
    for k in 0..m {
        if b[k].is_negative() {
            sign[k] = -1;
            rel_n[k] = match rel[k] {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    // Column layout: structural, then one slack/surplus per inequality, then
    // one artificial per >= or = row.
    let n_slack = rel_n.iter().filter(|r| **r != Relation::Eq).count();
    let n_art = rel_n.iter().filter(|r| **r != Relation::Le).count();
    let total = n + n_slack + n_art;
    let mut is_art = vec![false; total];
    let mut init_col = vec![0usize; m];
    let mut rows = vec![vec![Rational::zero(); total + 1]; m];
    let (mut next_slack, mut next_art) = (n, n + n_slack);
    for k in 0..m {
        let s = if sign[k] < 0 { -one() } else { one() };
        for (j, v) in a[k].iter().enumerate() {
            if !v.is_zero() {
                rows[k][j] = v * &s;
            }
        }
        rows[k][total] = &b[k] * &s;
        match rel_n[k] {
            Relation::Le => {
                rows[k][next_slack] = one();
                init_col[k] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                rows[k][next_slack] = -one();
                next_slack += 1;
                rows[k][next_art] = one();
                is_art[next_art] = true;
                init_col[k] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                rows[k][next_art] = one();
                is_art[next_art] = true;
                init_col[k] = next_art;
                next_art += 1;
            }
        }
    }

    let mut t = Tableau { rows, z: Vec::new(), basis: init_col.clone(), rhs: total };
    let multipliers = |t: &Tableau, cost: &[Rational]| -> Vec<Rational> {
        (0..m)
            .map(|k| {
                let y = &cost[init_col[k]] - &t.z[init_col[k]];
                if sign[k] < 0 {
                    -y
                } else {
                    y
                }
            })
            .collect()
    };

    // Phase 1: minimise the sum of artificials.
    let cost1: Vec<Rational> = is_art
        .iter()
        .map(|&art| if art { one() } else { Rational::zero() })
        .collect();
    t.price(&cost1);
    let all = vec![true; total];
    match t.run(&all) {
        Step::Optimal => {}
        Step::Unbounded => unreachable!("phase 1 objective is bounded below by zero"),
    }
    if t.z[total].is_negative() {
        return RawOutcome::Infeasible { y: multipliers(&t, &cost1) };
    }

    // Drive zero-level artificials out of the basis where possible; rows
    // where that fails are redundant and stay inert.
    for r in 0..m {
        if is_art[t.basis[r]] {
            if let Some(j) = (0..total).find(|&j| !is_art[j] && !t.rows[r][j].is_zero()) {
                t.pivot(r, j);
            }
        }
    }

    // Phase 2.
    let mut cost2 = vec![Rational::zero(); total];
    cost2[..n].clone_from_slice(c);
    t.price(&cost2);
    let allowed: Vec<bool> = is_art.iter().map(|a| !a).collect();
    match t.run(&allowed) {
        Step::Unbounded => RawOutcome::Unbounded,
        Step::Optimal => {
            let mut x = vec![Rational::zero(); n];
            for (r, &j) in t.basis.iter().enumerate() {
                if j < n {
                    x[j] = t.rows[r][total].clone();
                }
            }
            let value = -t.z[total].clone();
            RawOutcome::Optimal { x, y: multipliers(&t, &cost2), value }
        }
    }
}
