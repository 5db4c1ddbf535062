//! Exhaustive manipulation search over the uniform domain.

use std::collections::HashMap;
use std::fmt;

use crate::dominance::{class_prefix_sums, sd_compare, SdVerdict};
use crate::error::Result;
use crate::limits;
use crate::matrix::AssignmentMatrix;
use crate::mechanisms::Mechanism;
use crate::preference::{deadline_prefs, enumerate_uniform_prefs, UniformPreference};
use crate::profile::{profiles_over, Profile};
use crate::rational::{self, Rational};

/// Reports an agent may submit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReportDomain {
    /// Every uniform preference.
    #[default]
    Uniform,
    /// Preferences induced by a deadline: singleton classes, then one class.
    Deadline,
}

impl ReportDomain {
    pub fn reports(self, n: usize) -> Result<Vec<UniformPreference>> {
        match self {
            ReportDomain::Uniform => enumerate_uniform_prefs(n),
            ReportDomain::Deadline => Ok(deadline_prefs(n)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Violation {
    /// The misreport row strictly dominates the truthful row under the truth.
    WeakSp,
    /// The truthful row fails to weakly dominate the misreport row.
    Sp,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationReport {
    pub agent: usize,
    pub truth: UniformPreference,
    pub misreport: UniformPreference,
    pub truthful_row: Vec<Rational>,
    pub misreport_row: Vec<Rational>,
    pub verdict: Violation,
    /// Class-prefix sums of both rows under the truth.
    pub truthful_prefix: Vec<Rational>,
    pub misreport_prefix: Vec<Rational>,
}

impl ManipulationReport {
    /// Compares the two rows under the agent's true preference.
    pub fn compare(
        agent: usize,
        truth: &UniformPreference,
        misreport: &UniformPreference,
        truthful_row: &[Rational],
        misreport_row: &[Rational],
    ) -> Result<Self> {
        let verdict = match sd_compare(misreport_row, truthful_row, truth)? {
            SdVerdict::DominatesStrictly => Violation::WeakSp,
            SdVerdict::Incomparable => Violation::Sp,
            SdVerdict::Equal | SdVerdict::Dominated => Violation::None,
        };
        Ok(Self {
            agent,
            truth: truth.clone(),
            misreport: misreport.clone(),
            truthful_row: truthful_row.to_vec(),
            misreport_row: misreport_row.to_vec(),
            verdict,
            truthful_prefix: class_prefix_sums(truthful_row, truth)?,
            misreport_prefix: class_prefix_sums(misreport_row, truth)?,
        })
    }

    /// Any strategyproofness violation (weak ones included).
    pub fn is_sp_violation(&self) -> bool {
        self.verdict != Violation::None
    }

    pub fn is_weak_sp_violation(&self) -> bool {
        self.verdict == Violation::WeakSp
    }
}

fn row_string(row: &[Rational]) -> String {
    let parts: Vec<String> = row.iter().map(rational::short).collect();
    format!("({})", parts.join(", "))
}

impl fmt::Display for ManipulationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.verdict {
            Violation::WeakSp => "weak-sp violation",
            Violation::Sp => "sp violation",
            Violation::None => "no violation",
        };
        write!(
            f,
            "agent {}: truth {} -> misreport {}: {kind}; truthful row {}, misreport row {}",
            self.agent + 1,
            self.truth,
            self.misreport,
            row_string(&self.truthful_row),
            row_string(&self.misreport_row)
        )
    }
}

/// Every misreport comparison at `profile`, cached through `eval`.
fn scan(
    profile: &Profile,
    domain: &[UniformPreference],
    truthful: &AssignmentMatrix,
    eval: &mut dyn FnMut(&Profile) -> Result<AssignmentMatrix>,
) -> Result<Vec<ManipulationReport>> {
    let mut out = Vec::new();
    for agent in 0..profile.n() {
        let truth = profile.pref(agent);
        for report in domain {
            if report == truth {
                continue;
            }
            let deviated = eval(&profile.with_report(agent, report.clone())?)?;
            out.push(ManipulationReport::compare(agent, truth, report, truthful.row(agent), deviated.row(agent))?);
        }
    }
    Ok(out)
}

/// All strategyproofness violations at `profile` with misreports from `domain`.
pub fn check_sp_in(mechanism: &dyn Mechanism, profile: &Profile, domain: ReportDomain) -> Result<Vec<ManipulationReport>> {
    let n = profile.n();
    limits::check("manipulation search", n, limits::matching_guard())?;
    let truthful = mechanism.assign(profile)?;
    let reports = domain.reports(n)?;
    let mut eval = |p: &Profile| mechanism.assign(p);
    Ok(scan(profile, &reports, &truthful, &mut eval)?
        .into_iter()
        .filter(ManipulationReport::is_sp_violation)
        .collect())
}

pub fn check_sp(mechanism: &dyn Mechanism, profile: &Profile) -> Result<Vec<ManipulationReport>> {
    check_sp_in(mechanism, profile, ReportDomain::Uniform)
}

pub fn check_weak_sp(mechanism: &dyn Mechanism, profile: &Profile) -> Result<Vec<ManipulationReport>> {
    Ok(check_sp(mechanism, profile)?
        .into_iter()
        .filter(ManipulationReport::is_weak_sp_violation)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSummary {
    pub n: usize,
    pub profiles: usize,
    pub comparisons: usize,
    pub sp_violations: usize,
    pub weak_sp_violations: usize,
    /// First violation of each kind in enumeration order (profile, then
    /// agent, then misreport).
    pub first_sp: Option<(Profile, ManipulationReport)>,
    pub first_weak_sp: Option<(Profile, ManipulationReport)>,
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "n = {}: {} profiles, {} comparisons, {} sp violations, {} weak-sp violations",
            self.n, self.profiles, self.comparisons, self.sp_violations, self.weak_sp_violations
        )?;
        for (label, w) in [("first sp violation", &self.first_sp), ("first weak-sp violation", &self.first_weak_sp)] {
            if let Some((p, r)) = w {
                let prefs: Vec<String> = p.prefs().iter().map(|x| x.to_string()).collect();
                writeln!(f, "{label} at [{}]: {r}", prefs.join("; "))?;
            }
        }
        Ok(())
    }
}

/// Audits every profile of size `n` over the uniform domain.
pub fn sweep(mechanism: &dyn Mechanism, n: usize) -> Result<SweepSummary> {
    sweep_in(mechanism, n, ReportDomain::Uniform)
}

/// Audits every profile whose reports lie in `domain`, with misreports from
/// the same domain. Each profile is evaluated once.
pub fn sweep_in(mechanism: &dyn Mechanism, n: usize, domain: ReportDomain) -> Result<SweepSummary> {
    limits::check("full manipulation sweep", n, limits::sweep_guard())?;
    let reports = domain.reports(n)?;
    let profiles = profiles_over(n, &reports)?;
    let mut cache: HashMap<Profile, AssignmentMatrix> = HashMap::with_capacity(profiles.len());
    for p in &profiles {
        cache.insert(p.clone(), mechanism.assign(p)?);
    }
    let mut summary = SweepSummary {
        n,
        profiles: profiles.len(),
        comparisons: 0,
        sp_violations: 0,
        weak_sp_violations: 0,
        first_sp: None,
        first_weak_sp: None,
    };
    let mut eval = |p: &Profile| Ok(cache[p].clone());
    for p in &profiles {
        let truthful = cache[p].clone();
        for r in scan(p, &reports, &truthful, &mut eval)? {
            summary.comparisons += 1;
            if r.is_sp_violation() {
                summary.sp_violations += 1;
                if summary.first_sp.is_none() {
                    summary.first_sp = Some((p.clone(), r.clone()));
                }
            }
            if r.is_weak_sp_violation() {
                summary.weak_sp_violations += 1;
                if summary.first_weak_sp.is_none() {
                    summary.first_weak_sp = Some((p.clone(), r));
                }
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanisms::{Eps, UniformLottery};
    use crate::rational::rat;

    #[test]
    fn eps_weak_sp_failure_at_theorem_profile() {
        let p = Profile::parse(&["o1,o2,o3", "o1,{o2 o3}", "{o1 o2},o3"]).unwrap();
        let v = check_weak_sp(&Eps, &p).unwrap();
        assert_eq!(v.len(), 1);
        let r = &v[0];
        assert_eq!(r.agent, 2);
        assert_eq!(r.misreport, UniformPreference::strict(3));
        assert_eq!(r.truthful_row, vec![rat(0, 1), rat(3, 4), rat(1, 4)]);
        assert_eq!(r.misreport_row, vec![rat(1, 3), rat(1, 2), rat(1, 6)]);
    }

    #[test]
    fn trivial_cases() {
        let p = Profile::parse(&["o1"]).unwrap();
        assert!(check_sp(&Eps, &p).unwrap().is_empty());
        let s = sweep(&UniformLottery, 3).unwrap();
        assert_eq!((s.sp_violations, s.weak_sp_violations), (0, 0));
        assert_eq!(s.profiles, 64);
    }

    #[test]
    fn eps_sweep_small() {
        assert_eq!(sweep(&Eps, 2).unwrap().weak_sp_violations, 0);
        let s = sweep(&Eps, 3).unwrap();
        assert!(s.weak_sp_violations > 0);
        assert!(s.sp_violations >= s.weak_sp_violations);
    }
}
