//! Two inequivalent ordinally efficient, envy-free matrices on one profile.

use crate::axioms::{envy_free, ordinally_efficient};
use crate::dominance::assignments_equivalent;
use crate::error::{Error, Result};
use crate::matrix::AssignmentMatrix;
use crate::mechanisms::eps_assign;
use crate::profile::Profile;

#[derive(Clone, Debug)]
pub struct Example31Report {
    pub profile: Profile,
    pub first: AssignmentMatrix,
    pub second: AssignmentMatrix,
    pub eps: AssignmentMatrix,
    pub transcript: Vec<String>,
}

pub fn example31_profile() -> Profile {
    Profile::parse(&["o1,{o2 o3},o4", "o1,{o2 o3},o4", "{o1 o2},o3,o4", "{o1 o2},o3,o4"]).expect("valid profile")
}

pub fn verify_example31() -> Result<Example31Report> {
    let profile = example31_profile();
    let first = AssignmentMatrix::from_fractions(&[
        &[(1, 4), (0, 1), (1, 2), (1, 4)],
        &[(1, 4), (0, 1), (1, 2), (1, 4)],
        &[(1, 4), (1, 2), (0, 1), (1, 4)],
        &[(1, 4), (1, 2), (0, 1), (1, 4)],
    ])?;
    let second = AssignmentMatrix::from_fractions(&[
        &[(1, 2), (0, 1), (1, 4), (1, 4)],
        &[(1, 2), (0, 1), (1, 4), (1, 4)],
        &[(0, 1), (1, 2), (1, 4), (1, 4)],
        &[(0, 1), (1, 2), (1, 4), (1, 4)],
    ])?;
    let mut transcript = vec![format!("profile\n{profile}")];
    let fail = |detail: String| Err(Error::CertificationFailed { tag: "example".into(), detail });

    for (label, m) in [("first", &first), ("second", &second)] {
        let oe = ordinally_efficient(m, &profile)?;
        let ef = envy_free(m, &profile)?;
        transcript.push(format!("{label} matrix\n{m}OE: {}  EF: {}", ok(oe.holds), ok(ef.holds)));
        if !oe.holds || !ef.holds {
            return fail(format!("{label} matrix is not both OE and EF"));
        }
    }
    if assignments_equivalent(&first, &second, &profile)? {
        return fail("the two matrices are equivalent".into());
    }
    transcript.push("equivalent: no".into());

    let (eps, _) = eps_assign(&profile)?;
    let matches_second = assignments_equivalent(&eps, &second, &profile)?;
    let matches_first = assignments_equivalent(&eps, &first, &profile)?;
    transcript.push(format!("EPS output\n{eps}in class of second: {}  in class of first: {}", yes(matches_second), yes(matches_first)));
    if !matches_second || matches_first {
        return fail("EPS does not land in the class of the second matrix".into());
    }
    transcript.push("EXAMPLE: VERIFIED".into());
    Ok(Example31Report { profile, first, second, eps, transcript })
}

fn ok(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
