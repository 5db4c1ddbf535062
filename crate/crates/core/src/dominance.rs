//! Stochastic dominance between allocations and the class-mass equivalence.

use crate::error::{Error, Result};
use crate::matrix::AssignmentMatrix;
use crate::preference::UniformPreference;
use crate::profile::Profile;
use crate::rational::{self, Rational};

/// Cumulative mass of `row` at the end of each indifference class of `pref`.
/// The last entry is the row sum.
pub fn class_prefix_sums(row: &[Rational], pref: &UniformPreference) -> Result<Vec<Rational>> {
    if row.len() != pref.n() {
        return Err(Error::SizeMismatch { expected: pref.n(), found: row.len() });
    }
    let mut acc = rational::zero();
    Ok(pref
        .classes()
        .map(|r| {
            for v in &row[r] {
                acc += v;
            }
            acc.clone()
        })
        .collect())
}

/// Mass of `row` inside each indifference class of `pref`.
pub fn class_masses(row: &[Rational], pref: &UniformPreference) -> Result<Vec<Rational>> {
    if row.len() != pref.n() {
        return Err(Error::SizeMismatch { expected: pref.n(), found: row.len() });
    }
    Ok(pref.classes().map(|r| rational::sum(&row[r])).collect())
}

/// Outcome of comparing two allocations under one agent's preference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SdVerdict {
    DominatesStrictly,
    /// Every class-prefix sum coincides.
    Equal,
    Incomparable,
    Dominated,
}

impl SdVerdict {
    /// `P` weakly dominates `Q` (strictly or with equality).
    pub fn weakly_dominates(self) -> bool {
        matches!(self, SdVerdict::DominatesStrictly | SdVerdict::Equal)
    }
}

pub fn sd_compare(p: &[Rational], q: &[Rational], pref: &UniformPreference) -> Result<SdVerdict> {
    if p.len() != q.len() {
        return Err(Error::SizeMismatch { expected: p.len(), found: q.len() });
    }
    let sp = class_prefix_sums(p, pref)?;
    let sq = class_prefix_sums(q, pref)?;
    let above = sp.iter().zip(&sq).any(|(a, b)| a > b);
    let below = sp.iter().zip(&sq).any(|(a, b)| a < b);
    Ok(match (above, below) {
        (false, false) => SdVerdict::Equal,
        (true, false) => SdVerdict::DominatesStrictly,
        (false, true) => SdVerdict::Dominated,
        (true, true) => SdVerdict::Incomparable,
    })
}

fn check_sizes(p: &AssignmentMatrix, q: &AssignmentMatrix, profile: &Profile) -> Result<()> {
    for found in [q.n(), profile.n()] {
        if found != p.n() {
            return Err(Error::SizeMismatch { expected: p.n(), found });
        }
    }
    Ok(())
}

/// `P` stochastically dominates `Q`: every agent weakly prefers its row of `P`
/// and at least one agent strictly.
pub fn matrix_sd_dominates(
    p: &AssignmentMatrix,
    q: &AssignmentMatrix,
    profile: &Profile,
) -> Result<bool> {
    check_sizes(p, q, profile)?;
    let mut strict = false;
    for i in 0..p.n() {
        match sd_compare(p.row(i), q.row(i), profile.pref(i))? {
            SdVerdict::DominatesStrictly => strict = true,
            SdVerdict::Equal => {}
            SdVerdict::Incomparable | SdVerdict::Dominated => return Ok(false),
        }
    }
    Ok(strict)
}

/// Same mass on every indifference class of every agent.
pub fn assignments_equivalent(
    p: &AssignmentMatrix,
    q: &AssignmentMatrix,
    profile: &Profile,
) -> Result<bool> {
    check_sizes(p, q, profile)?;
    for i in 0..p.n() {
        if class_masses(p.row(i), profile.pref(i))? != class_masses(q.row(i), profile.pref(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}
