#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use uassign::{AssignmentMatrix, Profile, Rational, UniformPreference};

pub fn pref_from_cuts(n: usize, cuts: &[bool]) -> UniformPreference {
    let mut b: Vec<usize> = cuts.iter().enumerate().filter(|(_, c)| **c).map(|(k, _)| k + 1).collect();
    b.push(n);
    UniformPreference::new(n, b).unwrap()
}

pub fn pref_strategy(n: usize) -> impl Strategy<Value = UniformPreference> {
    proptest::collection::vec(any::<bool>(), n - 1).prop_map(move |c| pref_from_cuts(n, &c))
}

pub fn profile_strategy(lo: usize, hi: usize) -> impl Strategy<Value = Profile> {
    (lo..=hi).prop_flat_map(|n| proptest::collection::vec(pref_strategy(n), n).prop_map(|p| Profile::new(p).unwrap()))
}

pub fn random_profile<R: Rng>(n: usize, rng: &mut R) -> Profile {
    let prefs = (0..n)
        .map(|_| {
            let cuts: Vec<bool> = (1..n).map(|_| rng.gen()).collect();
            pref_from_cuts(n, &cuts)
        })
        .collect();
    Profile::new(prefs).unwrap()
}

/// Boundary lists for the oracle crate.
pub fn bounds(profile: &Profile) -> Vec<Vec<usize>> {
    profile.prefs().iter().map(|p| p.boundaries().to_vec()).collect()
}

pub fn rows(m: &AssignmentMatrix) -> Vec<Vec<Rational>> {
    m.rows().to_vec()
}

/// A random doubly stochastic matrix: a convex combination of `k` random
/// permutations with small integer weights.
pub fn random_bistochastic<R: Rng>(n: usize, k: usize, rng: &mut R) -> AssignmentMatrix {
    let weights: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = weights.iter().sum();
    let mut out = vec![vec![uassign::rat(0, 1); n]; n];
    for w in weights {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        for (i, &o) in perm.iter().enumerate() {
            out[i][o] += uassign::rat(w, total);
        }
    }
    AssignmentMatrix::new(out).unwrap()
}
