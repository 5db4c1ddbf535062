//! Extended probabilistic serial: simultaneous eating with bottleneck sets.

use num_traits::{One, Signed, Zero};

use super::canonical::canonicalize;
use crate::error::{Error, Result};
use crate::flownet::{find_bottleneck, max_flow, BottleneckEngine, BottleneckResult, LevelNetwork, StageState};
use crate::matrix::AssignmentMatrix;
use crate::profile::Profile;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsStage {
    /// Agents still eating at the start of the stage.
    pub active: Vec<usize>,
    /// Best set of available objects for each active agent, aligned with `active`.
    pub best_sets: Vec<Vec<usize>>,
    pub bottleneck: BottleneckResult,
    /// `increments[i][j]`: mass of object `j` given to agent `i` in this stage.
    pub increments: Vec<Vec<Rational>>,
    /// Remaining object masses after the stage.
    pub remaining: Vec<Rational>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EpsTrace {
    pub stages: Vec<EpsStage>,
}

impl EpsTrace {
    /// Sum of all stage increments (the raw, uncanonicalised allocation).
    pub fn total(&self, n: usize) -> Vec<Vec<Rational>> {
        let mut acc = vec![vec![Rational::zero(); n]; n];
        for stage in &self.stages {
            for (row, inc) in acc.iter_mut().zip(&stage.increments) {
                for (a, b) in row.iter_mut().zip(inc) {
                    *a += b;
                }
            }
        }
        acc
    }

    /// Checks that increments are non-negative, bottleneck agents reach the
    /// stage level exactly and every agent and object ends at one unit.
    pub fn audit(&self, n: usize) -> Result<()> {
        let mut eaten = vec![Rational::zero(); n];
        for (s, stage) in self.stages.iter().enumerate() {
            for (i, inc) in stage.increments.iter().enumerate() {
                if inc.iter().any(|v| v.is_negative()) {
                    return Err(Error::Internal(format!("stage {s}: negative increment for agent {i}")));
                }
                eaten[i] += rational::sum(inc);
            }
            for &i in &stage.bottleneck.agents {
                if eaten[i] != stage.bottleneck.ratio {
                    return Err(Error::Internal(format!(
                        "stage {s}: agent {} holds {} instead of the level {}",
                        i + 1,
                        eaten[i],
                        stage.bottleneck.ratio
                    )));
                }
            }
        }
        let total = self.total(n);
        for i in 0..n {
            let col: Rational = rational::sum(total.iter().map(|r| &r[i]));
            if !rational::sum(&total[i]).is_one() || !col.is_one() {
                return Err(Error::Internal(format!("agent/object {} does not total one unit", i + 1)));
            }
        }
        Ok(())
    }
}

/// EPS with the parametric bottleneck engine.
pub fn eps_assign(profile: &Profile) -> Result<(AssignmentMatrix, EpsTrace)> {
    eps_assign_with(profile, BottleneckEngine::Parametric)
}

pub fn eps_assign_with(profile: &Profile, engine: BottleneckEngine) -> Result<(AssignmentMatrix, EpsTrace)> {
    let n = profile.n();
    let mut remaining = vec![rational::one(); n];
    let mut credited = vec![Rational::zero(); n];
    let mut trace = EpsTrace::default();

    loop {
        let active: Vec<usize> = (0..n).filter(|&i| !credited[i].is_one()).collect();
        if active.is_empty() {
            break;
        }
        let best_sets: Vec<Vec<usize>> = active
            .iter()
            .map(|&i| best_available(profile, i, &remaining))
            .collect::<Result<_>>()?;
        let state = StageState {
            agents: active.clone(),
            best_sets: best_sets.clone(),
            credited: active.iter().map(|&i| credited[i].clone()).collect(),
            remaining: remaining.clone(),
        };
        let bottleneck = find_bottleneck(&state, engine)?;
        let level = LevelNetwork::build(&state, &bottleneck.ratio)?;
        let flow = max_flow(&level.net)?;

        let mut increments = vec![vec![Rational::zero(); n]; n];
        for &(pos, obj, arc) in &level.claims {
            let agent = active[pos];
            if bottleneck.agents.binary_search(&agent).is_ok() && flow.flows[arc].is_positive() {
                increments[agent][obj] = flow.flows[arc].clone();
                remaining[obj] -= &flow.flows[arc];
            }
        }
        for &o in &bottleneck.objects {
            if !remaining[o].is_zero() {
                return Err(Error::Internal(format!("bottleneck left {} of o{}", remaining[o], o + 1)));
            }
        }
        for &i in &bottleneck.agents {
            credited[i] = bottleneck.ratio.clone();
        }
        trace.stages.push(EpsStage {
            active,
            best_sets,
            bottleneck,
            increments,
            remaining: remaining.clone(),
        });
    }

    trace.audit(n)?;
    let raw = AssignmentMatrix::new(trace.total(n))?;
    Ok((canonicalize(&raw, profile)?, trace))
}

/// Objects of the first class of agent `i` that still has positive mass.
fn best_available(profile: &Profile, i: usize, remaining: &[Rational]) -> Result<Vec<usize>> {
    profile
        .pref(i)
        .classes()
        .map(|r| r.filter(|&o| remaining[o].is_positive()).collect::<Vec<_>>())
        .find(|set| !set.is_empty())
        .ok_or_else(|| Error::Internal(format!("agent {} has nothing left to eat", i + 1)))
}
