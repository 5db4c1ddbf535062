//! Exact checkers for efficiency and fairness axioms. Every verdict carries
//! a certificate that can be re-checked without trusting the checker.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::dominance::{class_prefix_sums, matrix_sd_dominates, sd_compare};
use crate::error::{Error, Result};
use crate::limits;
use crate::matrix::{all_matchings, AssignmentMatrix, Matching};
use crate::profile::Profile;
use crate::ratlp::{lp_solve, FarkasCertificate, LinExpr, LinearSystem, LpOutcome, Relation, Sense};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    OrdinalEfficiency,
    ExPostEfficiency,
    EnvyFreeness,
    EqualTreatment,
    ParetoEfficiency,
}

impl Axiom {
    pub fn code(self) -> &'static str {
        match self {
            Axiom::OrdinalEfficiency => "oe",
            Axiom::ExPostEfficiency => "epe",
            Axiom::EnvyFreeness => "ef",
            Axiom::EqualTreatment => "ete",
            Axiom::ParetoEfficiency => "pe",
        }
    }
}

impl std::str::FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "oe" => Axiom::OrdinalEfficiency,
            "epe" => Axiom::ExPostEfficiency,
            "ef" => Axiom::EnvyFreeness,
            "ete" => Axiom::EqualTreatment,
            "pe" => Axiom::ParetoEfficiency,
            other => return Err(Error::InvalidProfile(format!("unknown axiom {other}"))),
        })
    }
}

#[derive(Clone, Debug)]
pub enum Certificate {
    None,
    /// A matrix that stochastically dominates the checked one.
    Dominating(AssignmentMatrix),
    /// A matching every agent weakly prefers, some agent strictly.
    ParetoImprovement(Matching),
    /// `agent` envies `envied`: at the end of `agent`'s class `class` its own
    /// cumulative mass `own` falls short of `other`.
    Envy { agent: usize, envied: usize, class: usize, own: Rational, other: Rational },
    /// Agents with identical preferences whose cumulative masses differ at the
    /// end of class `class`.
    UnequalEquals { first: usize, second: usize, class: usize, first_sum: Rational, second_sum: Rational },
    /// Convex weights over Pareto-efficient matchings recombining the matrix.
    Weights(Vec<(Rational, Matching)>),
    /// The linear system proving no such weights exist.
    Infeasible { system: LinearSystem, certificate: FarkasCertificate },
}

#[derive(Clone, Debug)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub holds: bool,
    pub certificate: Certificate,
}

impl fmt::Display for AxiomVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom.code(), if self.holds { "holds" } else { "fails" })?;
        match &self.certificate {
            Certificate::None | Certificate::Infeasible { .. } => Ok(()),
            Certificate::Dominating(q) => write!(f, "\ndominated by\n{q}"),
            Certificate::ParetoImprovement(m) => write!(f, "\nimproved by {m}"),
            Certificate::Envy { agent, envied, class, own, other } => write!(
                f,
                "\nagent {} envies agent {} (class {}: {} < {})",
                agent + 1,
                envied + 1,
                class + 1,
                rational::short(own),
                rational::short(other)
            ),
            Certificate::UnequalEquals { first, second, class, first_sum, second_sum } => write!(
                f,
                "\nagents {} and {} report alike but differ at class {} ({} vs {})",
                first + 1,
                second + 1,
                class + 1,
                rational::short(first_sum),
                rational::short(second_sum)
            ),
            Certificate::Weights(ws) => {
                for (w, m) in ws {
                    write!(f, "\n  {}  {}", rational::short(w), m)?;
                }
                Ok(())
            }
        }
    }
}

fn verdict(axiom: Axiom, holds: bool, certificate: Certificate) -> AxiomVerdict {
    AxiomVerdict { axiom, holds, certificate }
}

fn check_size(n: usize, profile: &Profile) -> Result<()> {
    if n != profile.n() {
        return Err(Error::SizeMismatch { expected: profile.n(), found: n });
    }
    Ok(())
}

/// Class index each agent receives under `m`.
fn class_vector(m: &Matching, profile: &Profile) -> Vec<usize> {
    (0..m.n()).map(|i| profile.pref(i).class_of(m.object_of(i))).collect()
}

/// `a` Pareto-dominates `b` in class indices (lower is better).
fn pareto_dominates(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a != b
}

pub fn pareto_efficient(m: &Matching, profile: &Profile) -> Result<AxiomVerdict> {
    check_size(m.n(), profile)?;
    limits::check("Pareto efficiency brute force", m.n(), limits::matching_guard())?;
    let base = class_vector(m, profile);
    for other in all_matchings(m.n()) {
        if pareto_dominates(&class_vector(&other, profile), &base) {
            return Ok(verdict(Axiom::ParetoEfficiency, false, Certificate::ParetoImprovement(other)));
        }
    }
    Ok(verdict(Axiom::ParetoEfficiency, true, Certificate::None))
}

/// Every Pareto-efficient matching, in lexicographic order.
pub fn enumerate_pe_matchings(profile: &Profile) -> Result<Vec<Matching>> {
    let n = profile.n();
    limits::check("Pareto-efficient matching enumeration", n, limits::matching_guard())?;
    let all: Vec<(Vec<usize>, Matching)> = all_matchings(n).map(|m| (class_vector(&m, profile), m)).collect();
    // Efficiency depends only on the class vector; test each distinct one once.
    let mut distinct: BTreeMap<&[usize], bool> = all.iter().map(|(v, _)| (v.as_slice(), true)).collect();
    let keys: Vec<&[usize]> = distinct.keys().copied().collect();
    for v in &keys {
        let dominated = keys.iter().any(|w| pareto_dominates(w, v));
        distinct.insert(v, !dominated);
    }
    Ok(all.iter().filter(|(v, _)| distinct[v.as_slice()]).map(|(_, m)| m.clone()).collect())
}

/// Maximises the total prefix slack of a doubly stochastic `Q` weakly
/// dominating `P`; `P` is ordinally efficient iff the optimum is zero.
pub fn ordinally_efficient(p: &AssignmentMatrix, profile: &Profile) -> Result<AxiomVerdict> {
    check_size(p.n(), profile)?;
    let n = p.n();
    let mut sys = LinearSystem::new();
    let q: Vec<Vec<_>> = (0..n)
        .map(|i| (0..n).map(|j| sys.add_var(format!("q[{}][{}]", i + 1, j + 1))).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    add_bistochastic(&mut sys, &q)?;
    let mut total_slack = LinExpr::new();
    for i in 0..n {
        let pref = profile.pref(i);
        let target = class_prefix_sums(p.row(i), pref)?;
        // The last prefix is the row sum, pinned already.
        for k in 0..pref.num_classes() - 1 {
            let s = sys.add_var(format!("s[{}][{}]", i + 1, k + 1))?;
            let expr = LinExpr::sum((0..pref.boundaries()[k]).map(|j| q[i][j])).term(s, -rational::one());
            sys.constrain(expr, Relation::Eq, target[k].clone(), format!("prefix {} of agent {}", k + 1, i + 1))?;
            total_slack.add_term(s, rational::one());
        }
    }
    sys.set_objective(Sense::Maximize, total_slack)?;
    let sol = lp_solve(&sys)?.into_solution()?;
    if sol.value.is_zero() {
        return Ok(verdict(Axiom::OrdinalEfficiency, true, Certificate::None));
    }
    let rows = q.iter().map(|r| r.iter().map(|v| sol.point[v.0].clone()).collect()).collect();
    let witness = AssignmentMatrix::new(rows)?;
    if !matrix_sd_dominates(&witness, p, profile)? {
        return Err(Error::Internal("ordinal efficiency witness does not dominate".into()));
    }
    Ok(verdict(Axiom::OrdinalEfficiency, false, Certificate::Dominating(witness)))
}

pub(crate) fn add_bistochastic(sys: &mut LinearSystem, q: &[Vec<crate::ratlp::VarId>]) -> Result<()> {
    let n = q.len();
    for i in 0..n {
        sys.constrain(LinExpr::sum(q[i].iter().copied()), Relation::Eq, rational::one(), format!("row {}", i + 1))?;
    }
    for j in 0..n {
        sys.constrain(LinExpr::sum((0..n).map(|i| q[i][j])), Relation::Eq, rational::one(), format!("column {}", j + 1))?;
    }
    Ok(())
}

/// The weight system `P = sum_m w_m M_m`, `sum_m w_m = 1` over `matchings`.
pub fn hull_system(p: &AssignmentMatrix, matchings: &[Matching]) -> Result<LinearSystem> {
    let n = p.n();
    let mut sys = LinearSystem::new();
    let w: Vec<_> = matchings
        .iter()
        .map(|m| sys.add_var(format!("w[{m}]")))
        .collect::<Result<_>>()?;
    sys.constrain(LinExpr::sum(w.iter().copied()), Relation::Eq, rational::one(), "weights sum to one")?;
    for i in 0..n {
        for j in 0..n {
            let users = matchings.iter().zip(&w).filter(|(m, _)| m.object_of(i) == j).map(|(_, v)| *v);
            sys.constrain(LinExpr::sum(users), Relation::Eq, p.get(i, j).clone(), format!("entry p[{}][{}]", i + 1, j + 1))?;
        }
    }
    Ok(sys)
}

pub fn ex_post_efficient(p: &AssignmentMatrix, profile: &Profile) -> Result<AxiomVerdict> {
    check_size(p.n(), profile)?;
    let matchings = enumerate_pe_matchings(profile)?;
    let sys = hull_system(p, &matchings)?;
    match lp_solve(&sys)? {
        LpOutcome::Optimal(sol) => {
            let weights: Vec<(Rational, Matching)> = sol
                .point
                .iter()
                .zip(&matchings)
                .filter(|(w, _)| w.is_positive())
                .map(|(w, m)| (w.clone(), m.clone()))
                .collect();
            if recombine(&weights, p.n()) != *p.rows() {
                return Err(Error::Internal("ex-post weights do not recombine".into()));
            }
            Ok(verdict(Axiom::ExPostEfficiency, true, Certificate::Weights(weights)))
        }
        LpOutcome::Infeasible(certificate) => Ok(verdict(
            Axiom::ExPostEfficiency,
            false,
            Certificate::Infeasible { system: sys, certificate },
        )),
        LpOutcome::Unbounded => Err(Error::Internal("feasibility problem reported unbounded".into())),
    }
}

/// `sum_k w_k M_k` as raw rows.
pub fn recombine(weights: &[(Rational, Matching)], n: usize) -> Vec<Vec<Rational>> {
    let mut rows = vec![vec![Rational::zero(); n]; n];
    for (w, m) in weights {
        for (i, row) in rows.iter_mut().enumerate() {
            row[m.object_of(i)] += w;
        }
    }
    rows
}

pub fn envy_free(p: &AssignmentMatrix, profile: &Profile) -> Result<AxiomVerdict> {
    check_size(p.n(), profile)?;
    for i in 0..p.n() {
        let pref = profile.pref(i);
        for other in 0..p.n() {
            if other == i || sd_compare(p.row(i), p.row(other), pref)?.weakly_dominates() {
                continue;
            }
            let own = class_prefix_sums(p.row(i), pref)?;
            let theirs = class_prefix_sums(p.row(other), pref)?;
            let class = own.iter().zip(&theirs).position(|(a, b)| a < b).expect("a shortfall exists");
            return Ok(verdict(
                Axiom::EnvyFreeness,
                false,
                Certificate::Envy {
                    agent: i,
                    envied: other,
                    class,
                    own: own[class].clone(),
                    other: theirs[class].clone(),
                },
            ));
        }
    }
    Ok(verdict(Axiom::EnvyFreeness, true, Certificate::None))
}

pub fn equal_treatment(p: &AssignmentMatrix, profile: &Profile) -> Result<AxiomVerdict> {
    check_size(p.n(), profile)?;
    for a in 0..p.n() {
        for b in a + 1..p.n() {
            if profile.pref(a) != profile.pref(b) {
                continue;
            }
            let sa = class_prefix_sums(p.row(a), profile.pref(a))?;
            let sb = class_prefix_sums(p.row(b), profile.pref(b))?;
            if let Some(class) = sa.iter().zip(&sb).position(|(x, y)| x != y) {
                return Ok(verdict(
                    Axiom::EqualTreatment,
                    false,
                    Certificate::UnequalEquals {
                        first: a,
                        second: b,
                        class,
                        first_sum: sa[class].clone(),
                        second_sum: sb[class].clone(),
                    },
                ));
            }
        }
    }
    Ok(verdict(Axiom::EqualTreatment, true, Certificate::None))
}

/// Dispatches on `axiom`. Pareto efficiency needs a deterministic matrix.
pub fn check(axiom: Axiom, p: &AssignmentMatrix, profile: &Profile) -> Result<AxiomVerdict> {
    match axiom {
        Axiom::OrdinalEfficiency => ordinally_efficient(p, profile),
        Axiom::ExPostEfficiency => ex_post_efficient(p, profile),
        Axiom::EnvyFreeness => envy_free(p, profile),
        Axiom::EqualTreatment => equal_treatment(p, profile),
        Axiom::ParetoEfficiency => pareto_efficient(&to_matching(p)?, profile),
    }
}

pub fn to_matching(p: &AssignmentMatrix) -> Result<Matching> {
    if !p.is_deterministic() {
        return Err(Error::InvalidMatching("matrix has fractional entries".into()));
    }
    Matching::new(
        p.rows()
            .iter()
            .map(|r| r.iter().position(|v| v.is_one()).expect("deterministic row"))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thm1_profile1() -> Profile {
        Profile::parse(&["o1,o2,o3", "o1,{o2 o3}", "o1,o2,o3"]).unwrap()
    }

    #[test]
    fn agent_two_never_holds_o2() {
        let p = thm1_profile1();
        let v = pareto_efficient(&Matching::identity(3), &p).unwrap();
        assert!(!v.holds);
        let pe = enumerate_pe_matchings(&p).unwrap();
        assert!(!pe.is_empty());
        assert!(pe.iter().all(|m| m.object_of(1) != 1));
        assert_eq!(pe.len(), 4);
    }

    #[test]
    fn half_half_is_ordinally_inefficient() {
        let p = Profile::parse(&["o1,o2", "{o1 o2}"]).unwrap();
        let v = ordinally_efficient(&AssignmentMatrix::uniform(2), &p).unwrap();
        assert!(!v.holds);
        match v.certificate {
            Certificate::Dominating(q) => assert!(matrix_sd_dominates(&q, &AssignmentMatrix::uniform(2), &p).unwrap()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ex_post_examples() {
        let p = thm1_profile1();
        let y0 = AssignmentMatrix::from_fractions(&[&[(1, 3), (1, 2), (1, 6)], &[(1, 3), (0, 1), (2, 3)], &[(1, 3), (1, 2), (1, 6)]])
            .unwrap();
        assert!(ex_post_efficient(&y0, &p).unwrap().holds);
        let y = AssignmentMatrix::from_fractions(&[
            &[(1, 3), (5, 12), (1, 4)],
            &[(1, 3), (1, 6), (1, 2)],
            &[(1, 3), (5, 12), (1, 4)],
        ])
        .unwrap();
        let v = ex_post_efficient(&y, &p).unwrap();
        assert!(!v.holds);
        match v.certificate {
            Certificate::Infeasible { system, certificate } => {
                certificate.verify(&system).unwrap();
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn envy_and_equal_treatment() {
        let p = Profile::parse(&["o1,o2,o3"; 3]).unwrap();
        let v = envy_free(&AssignmentMatrix::identity(3), &p).unwrap();
        assert!(matches!(v.certificate, Certificate::Envy { agent: 1, envied: 0, .. }));
        assert!(envy_free(&AssignmentMatrix::uniform(3), &p).unwrap().holds);
        assert!(!equal_treatment(&AssignmentMatrix::identity(3), &p).unwrap().holds);
        assert!(equal_treatment(&AssignmentMatrix::uniform(3), &p).unwrap().holds);
    }
}
