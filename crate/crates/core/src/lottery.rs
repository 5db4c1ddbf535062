//! Lotteries over matchings realising an assignment matrix.

use std::fmt;

use num_traits::Signed;

use crate::axioms::{ex_post_efficient, recombine, Certificate};
use crate::error::{Error, Result};
use crate::matrix::{check_doubly_stochastic, lex_perfect_matching, AssignmentMatrix, Matching};
use crate::profile::Profile;
use crate::ratlp::{FarkasCertificate, LinearSystem};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lottery {
    entries: Vec<(Rational, Matching)>,
}

impl Lottery {
    /// Validates positive weights summing to one over matchings of one size.
    pub fn new(entries: Vec<(Rational, Matching)>) -> Result<Self> {
        let Some(n) = entries.first().map(|(_, m)| m.n()) else {
            return Err(Error::InvalidMatching("empty lottery".into()));
        };
        if entries.iter().any(|(w, m)| !w.is_positive() || m.n() != n) {
            return Err(Error::InvalidMatching("lottery weights must be positive over same-size matchings".into()));
        }
        if rational::sum(entries.iter().map(|(w, _)| w)) != rational::one() {
            return Err(Error::InvalidMatching("lottery weights do not sum to one".into()));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(Rational, Matching)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn n(&self) -> usize {
        self.entries[0].1.n()
    }

    pub fn to_matrix(&self) -> AssignmentMatrix {
        AssignmentMatrix::new(recombine(&self.entries, self.n())).expect("a lottery recombines to a bistochastic matrix")
    }
}

impl fmt::Display for Lottery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, m) in &self.entries {
            writeln!(f, "{}  {}", rational::short(w), m)?;
        }
        Ok(())
    }
}

/// Birkhoff–von Neumann peeling: repeatedly take the lexicographically
/// smallest perfect matching inside the positive support and subtract it
/// with the smallest entry it covers as weight.
pub fn bvn_decompose(p: &AssignmentMatrix) -> Result<Lottery> {
    check_doubly_stochastic(p.rows())?;
    let n = p.n();
    let bound = n * n + 2 - 2 * n;
    let mut rest: Vec<Vec<Rational>> = p.rows().to_vec();
    let mut entries = Vec::new();
    while rest.iter().flatten().any(|v| v.is_positive()) {
        let support: Vec<Vec<bool>> = rest.iter().map(|r| r.iter().map(|v| v.is_positive()).collect()).collect();
        let objects = lex_perfect_matching(&support)
            .ok_or_else(|| Error::Internal("positive support has no perfect matching".into()))?;
        let w = (0..n)
            .map(|i| rest[i][objects[i]].clone())
            .min()
            .expect("n >= 1");
        for (i, &o) in objects.iter().enumerate() {
            rest[i][o] -= &w;
        }
        entries.push((w, Matching::new(objects)?));
        if entries.len() > bound {
            return Err(Error::Internal(format!("peeling exceeded {bound} matchings")));
        }
    }
    let lottery = Lottery::new(entries)?;
    if lottery.to_matrix() != *p {
        return Err(Error::Internal("decomposition does not recombine".into()));
    }
    Ok(lottery)
}

#[derive(Clone, Debug)]
pub enum PeDecomposition {
    Lottery(Lottery),
    /// No convex combination of Pareto-efficient matchings gives the matrix.
    Infeasible { system: LinearSystem, certificate: FarkasCertificate },
}

/// A lottery over Pareto-efficient matchings only, taken from the ex-post
/// efficiency check.
pub fn pe_decompose(p: &AssignmentMatrix, profile: &Profile) -> Result<PeDecomposition> {
    let verdict = ex_post_efficient(p, profile)?;
    match verdict.certificate {
        Certificate::Weights(ws) => Ok(PeDecomposition::Lottery(Lottery::new(ws)?)),
        Certificate::Infeasible { system, certificate } => Ok(PeDecomposition::Infeasible { system, certificate }),
        other => Err(Error::Internal(format!("unexpected ex-post certificate {other:?}"))),
    }
}
