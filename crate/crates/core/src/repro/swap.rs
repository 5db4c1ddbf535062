//! The improving-swap lemma and zero entries it forces.
//!
//! If agent `i` strictly prefers `a` to `b`, agent `j` is indifferent
//! between them, `p[i][b] > 0` and `p[j][a] > 0`, then trading
//! `min(p[i][b], p[j][a])` of `b` for `a` makes `i` strictly better and `j`
//! no worse, so `P` is not ordinally efficient.

use num_traits::{Signed, Zero};

use crate::dominance::matrix_sd_dominates;
use crate::error::{Error, Result};
use crate::matrix::AssignmentMatrix;
use crate::profile::Profile;
use crate::ratlp::{lp_solve, FarkasCertificate, LinExpr, LinearSystem, LpOutcome, Relation, Sense, Solution};

use super::polytope::{Justification, MatrixPolytope};

/// The matrix obtained by the trade, checked to dominate `p`.
pub fn improving_swap(
    p: &AssignmentMatrix,
    profile: &Profile,
    strict_agent: usize,
    indifferent_agent: usize,
    a: usize,
    b: usize,
) -> Result<AssignmentMatrix> {
    let (i, j) = (strict_agent, indifferent_agent);
    let fail = |why: &str| Err(Error::CertificationFailed { tag: "improving swap".into(), detail: why.into() });
    if !profile.pref(i).prefers(a, b) {
        return fail("first agent does not strictly prefer a to b");
    }
    if !profile.pref(j).indifferent_between(a, b) {
        return fail("second agent is not indifferent between a and b");
    }
    if !p.get(i, b).is_positive() || !p.get(j, a).is_positive() {
        return fail("nothing to trade");
    }
    let eps = p.get(i, b).clone().min(p.get(j, a).clone());
    let mut rows = p.rows().to_vec();
    rows[i][a] += &eps;
    rows[i][b] -= &eps;
    rows[j][a] -= &eps;
    rows[j][b] += &eps;
    let q = AssignmentMatrix::new(rows)?;
    if !matrix_sd_dominates(&q, p, profile)? {
        return Err(Error::Internal("swap result does not dominate".into()));
    }
    Ok(q)
}

/// Entries `(i, y)` whose positivity, together with a positive
/// `p[target]`, enables an improving swap.
pub fn swap_partners(profile: &Profile, target: (usize, usize)) -> Vec<(usize, usize)> {
    let (j, x) = target;
    let n = profile.n();
    let pj = profile.pref(j);
    let mut out = Vec::new();
    for i in (0..n).filter(|&i| i != j) {
        let pi = profile.pref(i);
        for y in (0..n).filter(|&y| y != x) {
            // j holds x, is indifferent to y, and i prefers x to y; or j
            // prefers y to x and i is indifferent.
            let j_indifferent = pj.indifferent_between(x, y) && pi.prefers(x, y);
            let i_indifferent = pj.prefers(y, x) && pi.indifferent_between(x, y);
            if j_indifferent || i_indifferent {
                out.push((i, y));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub enum OeZeroEvidence {
    /// The restricted maximum of the target is zero; duals attached.
    ZeroOptimum(Solution),
    /// No polytope point has all partner entries zero.
    Infeasible(FarkasCertificate),
}

#[derive(Clone, Debug)]
pub struct OeZeroCertificate {
    pub target: (usize, usize),
    pub partners: Vec<(usize, usize)>,
    /// `max p[target]` over the polytope with every partner entry zero.
    pub system: LinearSystem,
    pub evidence: OeZeroEvidence,
}

impl OeZeroCertificate {
    /// Re-checks the evidence against the stored system.
    pub fn verify(&self) -> Result<()> {
        match &self.evidence {
            OeZeroEvidence::ZeroOptimum(sol) => {
                sol.verify(&self.system)?;
                if !sol.value.is_zero() {
                    return Err(Error::CertificationFailed { tag: "OE-zero".into(), detail: "optimum is not zero".into() });
                }
                Ok(())
            }
            OeZeroEvidence::Infeasible(cert) => cert.verify(&self.system).map(|_| ()),
        }
    }
}

/// Certifies that no ordinally efficient matrix of `poly` has a positive
/// entry at `target`: wherever the target is positive, some swap partner is
/// positive too.
pub fn oe_zero_certify(profile: &Profile, poly: &MatrixPolytope, target: (usize, usize)) -> Result<OeZeroCertificate> {
    let partners = swap_partners(profile, target);
    let tag = format!("OE-zero(p[{}][{}])", target.0 + 1, target.1 + 1);
    if partners.is_empty() {
        return Err(Error::CertificationFailed { tag, detail: "no swap partner exists".into() });
    }
    let mut restricted = poly.clone();
    for &(i, y) in &partners {
        restricted.push(
            poly.entry(i, y),
            Relation::Eq,
            num_traits::zero(),
            Justification::Derived(format!("partner p[{}][{}] = 0", i + 1, y + 1)),
        )?;
    }
    let system = restricted
        .system()
        .with_objective(Sense::Maximize, LinExpr::var(poly.var(target.0, target.1)))?;
    let evidence = match lp_solve(&system)? {
        LpOutcome::Optimal(sol) if sol.value.is_zero() => OeZeroEvidence::ZeroOptimum(sol),
        LpOutcome::Optimal(sol) => {
            return Err(Error::CertificationFailed {
                tag,
                detail: format!("target reaches {} with every partner at zero", sol.value),
            })
        }
        LpOutcome::Infeasible(cert) => OeZeroEvidence::Infeasible(cert),
        LpOutcome::Unbounded => return Err(Error::Internal("bounded polytope reported unbounded".into())),
    };
    let cert = OeZeroCertificate { target, partners, system, evidence };
    cert.verify()?;
    Ok(cert)
}
