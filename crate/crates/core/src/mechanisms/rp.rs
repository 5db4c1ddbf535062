//! Random priority adapted to indifferences.
//!
//! For a priority order, each dictator in turn fixes the best of its
//! indifference classes that still admits a perfect matching together with
//! the classes fixed before it. The lexicographically smallest matching
//! respecting all fixed classes is then polished by improving swaps. The
//! mechanism averages these matchings over all `n!` orders.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::limits;
use crate::matrix::{lex_perfect_matching, AssignmentMatrix, Matching};
use crate::profile::Profile;
use crate::rational::Rational;

pub fn rp_assign(profile: &Profile) -> Result<AssignmentMatrix> {
    let n = profile.n();
    limits::check("random priority (use sampling mode for larger n)", n, limits::matching_guard())?;
    let mut counts = vec![vec![0u64; n]; n];
    let mut orders = 0u64;
    for order in (0..n).permutations(n) {
        let m = serial_dictatorship(profile, &order)?;
        for (i, &o) in m.objects().iter().enumerate() {
            counts[i][o] += 1;
        }
        orders += 1;
    }
    average(counts, orders)
}

/// Averages `samples` uniformly drawn priority orders. Not exact, so never
/// used where a certificate is expected.
pub fn rp_assign_sampled<R: Rng + ?Sized>(profile: &Profile, samples: u64, rng: &mut R) -> Result<AssignmentMatrix> {
    let n = profile.n();
    if samples == 0 {
        return Err(Error::InvalidProfile("sampling mode needs at least one sample".into()));
    }
    let mut counts = vec![vec![0u64; n]; n];
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..samples {
        order.shuffle(rng);
        let m = serial_dictatorship(profile, &order)?;
        for (i, &o) in m.objects().iter().enumerate() {
            counts[i][o] += 1;
        }
    }
    average(counts, samples)
}

fn average(counts: Vec<Vec<u64>>, total: u64) -> Result<AssignmentMatrix> {
    let den = Rational::from_integer(total.into());
    AssignmentMatrix::new(
        counts
            .into_iter()
            .map(|r| r.into_iter().map(|c| Rational::from_integer(c.into()) / &den).collect())
            .collect(),
    )
}

/// The Pareto-efficient matching chosen for one priority order.
pub fn serial_dictatorship(profile: &Profile, order: &[usize]) -> Result<Matching> {
    let n = profile.n();
    // allowed[i][j]: agent i may still receive object j.
    let mut allowed = vec![vec![true; n]; n];
    for &agent in order {
        let pref = profile.pref(agent);
        let mut fixed = false;
        for range in pref.classes() {
            let mut trial = allowed.clone();
            for (j, slot) in trial[agent].iter_mut().enumerate() {
                *slot = range.contains(&j);
            }
            if lex_perfect_matching(&trial).is_some() {
                allowed = trial;
                fixed = true;
                break;
            }
        }
        if !fixed {
            return Err(Error::Internal(format!("agent {} has no feasible class", agent + 1)));
        }
    }
    let objects = lex_perfect_matching(&allowed)
        .ok_or_else(|| Error::Internal("fixed classes admit no matching".into()))?;
    Ok(polish(profile, Matching::new(objects)?))
}

/// Applies pairwise exchanges that make one agent strictly and the other
/// weakly better until none is left.
fn polish(profile: &Profile, mut m: Matching) -> Matching {
    let n = m.n();
    let mut objects = m.objects().to_vec();
    'outer: loop {
        for a in 0..n {
            for b in a + 1..n {
                let (oa, ob) = (objects[a], objects[b]);
                let (pa, pb) = (profile.pref(a), profile.pref(b));
                let a_gain = pa.class_of(ob).cmp(&pa.class_of(oa));
                let b_gain = pb.class_of(oa).cmp(&pb.class_of(ob));
                use std::cmp::Ordering::*;
                let improving = matches!((a_gain, b_gain), (Less, Less) | (Less, Equal) | (Equal, Less));
                if improving {
                    objects.swap(a, b);
                    continue 'outer;
                }
            }
        }
        break;
    }
    m = Matching::new(objects).expect("swaps keep a permutation");
    m
}
