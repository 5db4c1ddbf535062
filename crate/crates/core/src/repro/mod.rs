//! Certified reproductions: the non-uniqueness example and both
//! impossibility theorems for the uniform domain, built from tagged linear
//! systems whose every conclusion is re-checked by exact LP certificates.

mod example31;
mod polytope;
mod swap;
mod theorem1;
mod theorem2;

pub use example31::{example31_profile, verify_example31, Example31Report};
pub use polytope::{AffineFamily, FamilyReport, Justification, MatrixPolytope, Resolution};
pub use swap::{improving_swap, oe_zero_certify, swap_partners, OeZeroCertificate, OeZeroEvidence};
pub use theorem1::{padded_profile, theorem1_profiles, verify_theorem1, PaddingReport, Theorem1Report};
pub use theorem2::{
    theorem2_links, theorem2_profiles, verify_theorem2, ColumnContradiction, DerivationChain, SpLink,
};

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::ratlp::{Constraint, LinExpr, Relation, VarId};
use crate::rational::{self, Rational};

/// A profile, the justified polytope derived for it, and what the polytope
/// resolves to.
#[derive(Clone, Debug)]
pub struct CertifiedDerivation {
    pub name: String,
    pub profile: Profile,
    pub polytope: MatrixPolytope,
    pub oe_zero: Vec<OeZeroCertificate>,
    pub resolution: Resolution,
}

/// Strategyproofness between `source` and `target`, which differ only in
/// `deviator`'s report: the source row dominates the target row at every
/// class boundary of the source report, and vice versa. Constraints are on
/// the target's `p[deviator][*]` (variables laid out as in
/// [`MatrixPolytope`]).
pub fn sp_link_constraints(source: &CertifiedDerivation, target: &Profile, deviator: usize) -> Result<Vec<Constraint>> {
    let tag = format!("SP-link({}, agent {})", source.name, deviator + 1);
    let diff = source.profile.differing_agents(target);
    if diff.is_empty() {
        return Ok(Vec::new());
    }
    if diff != [deviator] || source.profile.n() != target.n() {
        return Err(Error::CertificationFailed {
            tag,
            detail: format!("profiles differ in agents {:?}, not just the deviator", diff.iter().map(|i| i + 1).collect::<Vec<_>>()),
        });
    }
    let row = source.resolution.pinned_row(deviator).ok_or_else(|| Error::CertificationFailed {
        tag: tag.clone(),
        detail: format!("row {} of {} is not pinned", deviator + 1, source.name),
    })?;
    let n = target.n();
    let prefix = |end: usize| LinExpr::sum((0..end).map(|j| VarId(deviator * n + j)));
    let mut out = Vec::new();
    for (pref, relation) in [(source.profile.pref(deviator), Relation::Le), (target.pref(deviator), Relation::Ge)] {
        for &end in pref.boundaries() {
            out.push(Constraint {
                expr: prefix(end),
                relation,
                rhs: rational::sum(&row[..end]),
                tag: tag.clone(),
            });
        }
    }
    Ok(out)
}

/// Prefix equalities implied by a link: `(number of leading objects, value)`
/// for every boundary shared by both reports.
pub fn link_equalities(constraints: &[Constraint]) -> Vec<(usize, Rational)> {
    let mut out = Vec::new();
    for le in constraints.iter().filter(|c| c.relation == Relation::Le) {
        if constraints
            .iter()
            .any(|ge| ge.relation == Relation::Ge && ge.expr == le.expr && ge.rhs == le.rhs)
        {
            out.push((le.expr.terms().count(), le.rhs.clone()));
        }
    }
    out
}
