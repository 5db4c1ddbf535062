//! Assignment mechanisms: EPS, classical PS and random priority.

mod canonical;
mod eps;
mod ps;
mod rp;

pub use canonical::{canonical_from_masses, canonicalize};
pub use eps::{eps_assign, eps_assign_with, EpsStage, EpsTrace};
pub use ps::ps_strict;
pub use rp::{rp_assign, rp_assign_sampled, serial_dictatorship};

use crate::error::Result;
use crate::matrix::AssignmentMatrix;
use crate::profile::Profile;

/// A deterministic map from profiles to assignment matrices.
pub trait Mechanism: Sync {
    fn name(&self) -> &str;
    fn assign(&self, profile: &Profile) -> Result<AssignmentMatrix>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Eps;

impl Mechanism for Eps {
    fn name(&self) -> &str {
        "eps"
    }

    fn assign(&self, profile: &Profile) -> Result<AssignmentMatrix> {
        eps_assign(profile).map(|(m, _)| m)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Ps;

impl Mechanism for Ps {
    fn name(&self) -> &str {
        "ps"
    }

    fn assign(&self, profile: &Profile) -> Result<AssignmentMatrix> {
        ps_strict(profile)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RandomPriority;

impl Mechanism for RandomPriority {
    fn name(&self) -> &str {
        "rp"
    }

    fn assign(&self, profile: &Profile) -> Result<AssignmentMatrix> {
        rp_assign(profile)
    }
}

/// Ignores the reports and hands everyone `1/n` of every object.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformLottery;

impl Mechanism for UniformLottery {
    fn name(&self) -> &str {
        "uniform"
    }

    fn assign(&self, profile: &Profile) -> Result<AssignmentMatrix> {
        Ok(AssignmentMatrix::uniform(profile.n()))
    }
}

/// Wraps a closure as a mechanism.
pub struct FnMechanism<F> {
    name: String,
    f: F,
}

impl<F> FnMechanism<F>
where
    F: Fn(&Profile) -> Result<AssignmentMatrix> + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self { name: name.into(), f }
    }
}

impl<F> Mechanism for FnMechanism<F>
where
    F: Fn(&Profile) -> Result<AssignmentMatrix> + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn assign(&self, profile: &Profile) -> Result<AssignmentMatrix> {
        (self.f)(profile)
    }
}

/// Looks a built-in mechanism up by its CLI name.
pub fn by_name(name: &str) -> Option<Box<dyn Mechanism>> {
    match name {
        "eps" => Some(Box::new(Eps)),
        "ps" => Some(Box::new(Ps)),
        "rp" => Some(Box::new(RandomPriority)),
        "uniform" => Some(Box::new(UniformLottery)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::assignments_equivalent;
    use crate::rational::rat;

    fn example31() -> Profile {
        Profile::parse(&["o1,{o2 o3},o4", "o1,{o2 o3},o4", "{o1 o2},o3,o4", "{o1 o2},o3,o4"]).unwrap()
    }

    #[test]
    fn eps_on_example31() {
        let (m, trace) = eps_assign(&example31()).unwrap();
        let expected = AssignmentMatrix::from_fractions(&[
            &[(1, 2), (0, 1), (1, 4), (1, 4)],
            &[(1, 2), (0, 1), (1, 4), (1, 4)],
            &[(0, 1), (1, 2), (1, 4), (1, 4)],
            &[(0, 1), (1, 2), (1, 4), (1, 4)],
        ])
        .unwrap();
        assert_eq!(m, expected);
        assert_eq!(trace.stages[0].bottleneck.ratio, rat(1, 2));
    }

    #[test]
    fn eps_three_stage_run() {
        let p = Profile::parse(&["o1,o2,o3", "o1,{o2 o3}", "{o1 o2},o3"]).unwrap();
        let (m, trace) = eps_assign(&p).unwrap();
        let expected =
            AssignmentMatrix::from_fractions(&[&[(1, 2), (1, 4), (1, 4)], &[(1, 2), (0, 1), (1, 2)], &[(0, 1), (3, 4), (1, 4)]])
                .unwrap();
        assert_eq!(m, expected);
        let levels: Vec<_> = trace.stages.iter().map(|s| s.bottleneck.ratio.clone()).collect();
        assert_eq!(levels, vec![rat(1, 2), rat(3, 4), rat(1, 1)]);
    }

    #[test]
    fn eps_trivial_and_symmetric() {
        let (m, _) = eps_assign(&Profile::parse(&["o1"]).unwrap()).unwrap();
        assert_eq!(m, AssignmentMatrix::identity(1));
        let strict = Profile::parse(&["o1,o2,o3,o4"; 4]).unwrap();
        assert_eq!(eps_assign(&strict).unwrap().0, AssignmentMatrix::uniform(4));
    }

    #[test]
    fn ps_matches_eps_on_deadlines() {
        let p = Profile::parse(&["o1,o2,o3", "o1,o2,o3", "o1,{o2 o3}"]).unwrap();
        let ps = ps_strict(&p).unwrap();
        let (eps, _) = eps_assign(&p).unwrap();
        assert!(assignments_equivalent(&ps, &eps, &p).unwrap());
        assert_eq!(ps_strict(&Profile::parse(&["o1,o2"; 2]).unwrap()).unwrap(), AssignmentMatrix::uniform(2));
    }

    #[test]
    fn ps_rejects_other_shapes() {
        let p = Profile::parse(&["o1,o2,o3", "{o1 o2},o3", "o1,o2,o3"]).unwrap();
        assert!(matches!(ps_strict(&p), Err(crate::Error::OutsideSubdomain { agent: 2, .. })));
    }

    #[test]
    fn rp_symmetric_and_two_agent_case() {
        let strict = Profile::parse(&["o1,o2,o3"; 3]).unwrap();
        assert_eq!(rp_assign(&strict).unwrap(), AssignmentMatrix::uniform(3));
        let p = Profile::parse(&["{o1 o2}", "o1,o2"]).unwrap();
        let m = rp_assign(&p).unwrap();
        assert!(m.get(1, 0) >= &rat(1, 2));
    }

    #[test]
    fn canonical_pushes_mass_left() {
        let p = Profile::parse(&["{o1 o2}", "{o1 o2}"]).unwrap();
        let swapped = AssignmentMatrix::from_fractions(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]).unwrap();
        assert_eq!(canonicalize(&swapped, &p).unwrap(), AssignmentMatrix::identity(2));
    }
}
