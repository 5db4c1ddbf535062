//! Deterministic representatives of class-mass equivalence classes.
//!
//! Two matrices are equivalent when every agent receives the same mass on
//! each of its indifference classes. The representative fills the matrix in
//! row-major order, giving each cell the largest value that still admits a
//! completion: within a class, an agent's mass sits on the lowest-indexed
//! objects the other agents can spare.

use num_traits::{Signed, Zero};

use crate::dominance::class_masses;
use crate::error::{Error, Result};
use crate::flownet::{max_flow, FlowNetwork};
use crate::matrix::AssignmentMatrix;
use crate::profile::Profile;
use crate::rational::{self, Rational};

/// The canonical member of `p`'s equivalence class under `profile`.
pub fn canonicalize(p: &AssignmentMatrix, profile: &Profile) -> Result<AssignmentMatrix> {
    if p.n() != profile.n() {
        return Err(Error::SizeMismatch { expected: profile.n(), found: p.n() });
    }
    let masses = (0..p.n())
        .map(|i| class_masses(p.row(i), profile.pref(i)))
        .collect::<Result<Vec<_>>>()?;
    canonical_from_masses(&masses, profile)
}

/// The canonical matrix whose agent `i` receives `masses[i][k]` on its class `k`.
pub fn canonical_from_masses(masses: &[Vec<Rational>], profile: &Profile) -> Result<AssignmentMatrix> {
    let n = profile.n();
    let mut supply: Vec<Vec<Rational>> = masses.to_vec();
    let mut capacity = vec![rational::one(); n];
    let mut rows = vec![vec![Rational::zero(); n]; n];
    // Cells still open to the fill.
    let mut open = vec![vec![true; n]; n];
    for i in 0..n {
        for j in 0..n {
            let k = profile.pref(i).class_of(j);
            let best = max_cell(profile, &supply, &capacity, &open, i, j)?;
            open[i][j] = false;
            if best.is_zero() {
                continue;
            }
            supply[i][k] -= &best;
            capacity[j] -= &best;
            rows[i][j] = best;
        }
    }
    AssignmentMatrix::new(rows)
        .map_err(|e| Error::Internal(format!("class masses admit no completion: {e}")))
}

struct Transport {
    net: FlowNetwork,
    /// `(agent, object, arc)` for open cells.
    cells: Vec<(usize, usize, usize)>,
    demand: Rational,
}

fn transport(
    profile: &Profile,
    supply: &[Vec<Rational>],
    capacity: &[Rational],
    open: &[Vec<bool>],
) -> Result<Transport> {
    let n = profile.n();
    // Nodes: source, sink, one per (agent, class), one per object.
    let mut class_node = Vec::with_capacity(n);
    let mut next = 2;
    for i in 0..n {
        let ids: Vec<usize> = (0..profile.pref(i).num_classes()).map(|k| next + k).collect();
        next += ids.len();
        class_node.push(ids);
    }
    let object_node = |j: usize| next + j;
    let mut net = FlowNetwork::new(next + n, 0, 1)?;
    let mut demand = Rational::zero();
    let mut cells = Vec::new();
    for i in 0..n {
        for (k, range) in profile.pref(i).classes().enumerate() {
            let s = &supply[i][k];
            if !s.is_positive() {
                continue;
            }
            demand += s;
            net.add_arc(0, class_node[i][k], s.clone())?;
            for j in range {
                if open[i][j] && capacity[j].is_positive() {
                    let arc = net.add_arc(class_node[i][k], object_node(j), s.clone())?;
                    cells.push((i, j, arc));
                }
            }
        }
    }
    for (j, c) in capacity.iter().enumerate() {
        if c.is_positive() {
            net.add_arc(object_node(j), 1, c.clone())?;
        }
    }
    Ok(Transport { net, cells, demand })
}

/// Largest value cell `(i, j)` can take in a full completion.
fn max_cell(
    profile: &Profile,
    supply: &[Vec<Rational>],
    capacity: &[Rational],
    open: &[Vec<bool>],
    i: usize,
    j: usize,
) -> Result<Rational> {
    let t = transport(profile, supply, capacity, open)?;
    let flow = max_flow(&t.net)?;
    if flow.value != t.demand {
        return Err(Error::Internal("class masses admit no completion".into()));
    }
    let Some(&(_, _, arc)) = t.cells.iter().find(|&&(a, o, _)| a == i && o == j) else {
        return Ok(Rational::zero());
    };
    // Any other full flow differs from this one by a circulation in the
    // residual graph, so the cell can grow by the residual max flow from the
    // object back to the agent's class node, avoiding the cell itself.
    let current = flow.flows[arc].clone();
    let slack = &t.net.arcs()[arc].capacity - &current;
    if !slack.is_positive() {
        return Ok(current);
    }
    let (tail, head) = (t.net.arcs()[arc].from, t.net.arcs()[arc].to);
    let mut residual = FlowNetwork::new(t.net.num_nodes(), head, tail)?;
    for (k, a) in t.net.arcs().iter().enumerate() {
        if k == arc {
            continue;
        }
        let f = &flow.flows[k];
        if f < &a.capacity {
            residual.add_arc(a.from, a.to, &a.capacity - f)?;
        }
        if f.is_positive() {
            residual.add_arc(a.to, a.from, f.clone())?;
        }
    }
    let extra = max_flow(&residual)?.value;
    Ok(current + extra.min(slack))
}
