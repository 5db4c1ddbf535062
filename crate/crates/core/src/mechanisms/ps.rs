//! Classical probabilistic serial on the deadline subdomain.
//!
//! Each agent eats its acceptable objects (the singleton classes) in order
//! at unit speed; an agent whose acceptable objects are gone stops. The mass
//! an agent is still missing at time one is filled from its terminal class.

use num_traits::{Signed, Zero};

use super::canonical::canonical_from_masses;
use crate::error::{Error, Result};
use crate::matrix::AssignmentMatrix;
use crate::profile::Profile;
use crate::rational::{self, Rational};

pub fn ps_strict(profile: &Profile) -> Result<AssignmentMatrix> {
    let n = profile.n();
    for (i, p) in profile.prefs().iter().enumerate() {
        if !p.in_deadline_subdomain() {
            return Err(Error::OutsideSubdomain { agent: i + 1, pref: p.to_string() });
        }
    }
    // Acceptable objects are the singleton classes; a strict preference
    // accepts everything.
    let acceptable: Vec<usize> = profile
        .prefs()
        .iter()
        .map(|p| {
            let last = p.class_range(p.num_classes() - 1);
            if last.len() == 1 {
                n
            } else {
                last.start
            }
        })
        .collect();

    let mut remaining = vec![rational::one(); n];
    let mut eaten = vec![vec![Rational::zero(); n]; n];
    let mut time = Rational::zero();
    let one = rational::one();
    while time < one {
        let target: Vec<Option<usize>> = (0..n)
            .map(|i| (0..acceptable[i]).find(|&o| remaining[o].is_positive()))
            .collect();
        let mut eaters = vec![0i64; n];
        for o in target.iter().flatten() {
            eaters[*o] += 1;
        }
        let mut dt = &one - &time;
        for o in 0..n {
            if eaters[o] > 0 {
                dt = dt.min(&remaining[o] / Rational::from_integer(eaters[o].into()));
            }
        }
        if target.iter().all(Option::is_none) {
            break;
        }
        for (i, t) in target.iter().enumerate() {
            if let Some(o) = *t {
                eaten[i][o] += &dt;
                remaining[o] -= &dt;
            }
        }
        time += dt;
    }

    let masses: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let pref = profile.pref(i);
            let mut m: Vec<Rational> = pref.classes().map(|r| rational::sum(&eaten[i][r])).collect();
            if acceptable[i] < n {
                let tail = &one - rational::sum(&eaten[i]);
                *m.last_mut().expect("at least one class") += tail;
            }
            m
        })
        .collect();
    canonical_from_masses(&masses, profile)
}
