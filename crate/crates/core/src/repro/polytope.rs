//! Polytopes of assignment matrices with justified constraints.

use std::fmt;

use num_traits::Zero;

use crate::axioms::enumerate_pe_matchings;
use crate::error::{Error, Result};
use crate::matrix::AssignmentMatrix;
use crate::profile::Profile;
use crate::ratlp::{coordinate_range, expr_range, lp_solve, Constraint, FarkasCertificate, LinExpr, LinearSystem, LpOutcome, Relation, VarId};
use crate::rational::{self, Rational};

use super::swap::OeZeroCertificate;

/// Why a constraint was added.
#[derive(Clone, Debug)]
pub enum Justification {
    Bistochastic,
    /// Agents with identical reports receive equal class-prefix sums.
    Ete { first: usize, second: usize },
    /// A certified zero entry.
    OeZero(Box<OeZeroCertificate>),
    /// Truth-telling dominance between two profiles differing in `deviator`.
    SpLink { source: String, deviator: usize },
    /// `agent` does not envy `envied`.
    Ef { agent: usize, envied: usize },
    /// Membership in the convex hull of Pareto-efficient matchings.
    EpeHull,
    /// A value carried over from an earlier derivation.
    Derived(String),
}

impl Justification {
    pub fn tag(&self) -> String {
        match self {
            Justification::Bistochastic => "bistochastic".into(),
            Justification::Ete { first, second } => format!("ETE({},{})", first + 1, second + 1),
            Justification::OeZero(c) => format!("OE-zero(p[{}][{}])", c.target.0 + 1, c.target.1 + 1),
            Justification::SpLink { source, deviator } => format!("SP-link({source}, agent {})", deviator + 1),
            Justification::Ef { agent, envied } => format!("EF({},{})", agent + 1, envied + 1),
            Justification::EpeHull => "EPE-hull".into(),
            Justification::Derived(s) => format!("derived({s})"),
        }
    }
}

/// Matrices `p` (variables `p[i][j]` are the first `n^2` variables, row
/// major) together with justified linear constraints.
#[derive(Clone, Debug)]
pub struct MatrixPolytope {
    n: usize,
    system: LinearSystem,
    justifications: Vec<Justification>,
}

impl MatrixPolytope {
    pub fn bistochastic(n: usize) -> Result<Self> {
        let mut poly = Self::unconstrained(n)?;
        for i in 0..n {
            poly.push(LinExpr::sum((0..n).map(|j| poly.var(i, j))), Relation::Eq, rational::one(), Justification::Bistochastic)?;
        }
        for j in 0..n {
            poly.push(LinExpr::sum((0..n).map(|i| poly.var(i, j))), Relation::Eq, rational::one(), Justification::Bistochastic)?;
        }
        Ok(poly)
    }

    /// The `n^2` entry variables with no constraints beyond non-negativity.
    pub fn unconstrained(n: usize) -> Result<Self> {
        let mut system = LinearSystem::new();
        for i in 0..n {
            for j in 0..n {
                system.add_var(format!("p[{}][{}]", i + 1, j + 1))?;
            }
        }
        Ok(Self { n, system, justifications: Vec::new() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn var(&self, i: usize, j: usize) -> VarId {
        VarId(i * self.n + j)
    }

    pub fn entry(&self, i: usize, j: usize) -> LinExpr {
        LinExpr::var(self.var(i, j))
    }

    /// `p[i][0] + ... + p[i][end - 1]`.
    pub fn prefix(&self, i: usize, end: usize) -> LinExpr {
        LinExpr::sum((0..end).map(|j| self.var(i, j)))
    }

    pub fn system(&self) -> &LinearSystem {
        &self.system
    }

    pub fn justifications(&self) -> &[Justification] {
        &self.justifications
    }

    pub fn push(&mut self, expr: LinExpr, relation: Relation, rhs: Rational, why: Justification) -> Result<()> {
        self.system.constrain(expr, relation, rhs, why.tag())?;
        self.justifications.push(why);
        Ok(())
    }

    /// Adds an already-built constraint (e.g. from an SP link).
    pub fn push_constraint(&mut self, c: Constraint, why: Justification) -> Result<()> {
        self.push(c.expr, c.relation, c.rhs, why)
    }

    pub fn add_ete(&mut self, profile: &Profile) -> Result<()> {
        for a in 0..self.n {
            for b in a + 1..self.n {
                let pref = profile.pref(a);
                if pref != profile.pref(b) {
                    continue;
                }
                for &end in &pref.boundaries()[..pref.num_classes() - 1] {
                    let diff = self.prefix(a, end).minus(&self.prefix(b, end));
                    self.push(diff, Relation::Eq, Rational::zero(), Justification::Ete { first: a, second: b })?;
                }
            }
        }
        Ok(())
    }

    pub fn add_ef(&mut self, profile: &Profile) -> Result<()> {
        for a in 0..self.n {
            let pref = profile.pref(a);
            for b in 0..self.n {
                if a == b {
                    continue;
                }
                for &end in &pref.boundaries()[..pref.num_classes() - 1] {
                    let diff = self.prefix(a, end).minus(&self.prefix(b, end));
                    self.push(diff, Relation::Ge, Rational::zero(), Justification::Ef { agent: a, envied: b })?;
                }
            }
        }
        Ok(())
    }

    /// Adds one weight per Pareto-efficient matching and ties `p` to their
    /// convex combination.
    pub fn add_epe_hull(&mut self, profile: &Profile) -> Result<()> {
        let matchings = enumerate_pe_matchings(profile)?;
        let w: Vec<VarId> = matchings
            .iter()
            .map(|m| self.system.add_var(format!("w[{m}]")))
            .collect::<Result<_>>()?;
        self.push(LinExpr::sum(w.iter().copied()), Relation::Eq, rational::one(), Justification::EpeHull)?;
        for i in 0..self.n {
            for j in 0..self.n {
                let mut e = self.entry(i, j);
                for (m, v) in matchings.iter().zip(&w) {
                    if m.object_of(i) == j {
                        e.add_term(*v, -rational::one());
                    }
                }
                self.push(e, Relation::Eq, Rational::zero(), Justification::EpeHull)?;
            }
        }
        Ok(())
    }

    /// Pins every entry to `m` (used for membership tests).
    pub fn with_matrix(&self, m: &AssignmentMatrix) -> Result<Self> {
        let mut poly = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                poly.push(self.entry(i, j), Relation::Eq, m.get(i, j).clone(), Justification::Derived("membership".into()))?;
            }
        }
        Ok(poly)
    }

    pub fn contains(&self, m: &AssignmentMatrix) -> Result<bool> {
        Ok(lp_solve(self.with_matrix(m)?.system())?.status() == crate::ratlp::LpStatus::Optimal)
    }

    pub fn range(&self, i: usize, j: usize) -> Result<(Rational, Rational)> {
        coordinate_range(&self.system, self.var(i, j))
    }

    pub fn expr_range(&self, e: &LinExpr) -> Result<(Rational, Rational)> {
        expr_range(&self.system, e)
    }

    /// Feasibility first, then the exact range of every entry.
    pub fn resolve(&self) -> Result<Resolution> {
        if let LpOutcome::Infeasible(cert) = lp_solve(&self.system)? {
            return Ok(Resolution::Infeasible(cert));
        }
        let mut ranges = vec![Vec::with_capacity(self.n); self.n];
        for (i, row) in ranges.iter_mut().enumerate() {
            for j in 0..self.n {
                row.push(self.range(i, j)?);
            }
        }
        if ranges.iter().flatten().all(|(lo, hi)| lo == hi) {
            let rows = ranges.iter().map(|r| r.iter().map(|(lo, _)| lo.clone()).collect()).collect();
            return Ok(Resolution::Unique(AssignmentMatrix::new(rows)?));
        }
        Ok(Resolution::Family(ranges))
    }
}

#[derive(Clone, Debug)]
pub enum Resolution {
    Unique(AssignmentMatrix),
    /// Exact `[min, max]` of every entry; some entry is not pinned.
    Family(Vec<Vec<(Rational, Rational)>>),
    Infeasible(FarkasCertificate),
}

impl Resolution {
    /// Row `i` if every entry of it is pinned.
    pub fn pinned_row(&self, i: usize) -> Option<Vec<Rational>> {
        match self {
            Resolution::Unique(m) => Some(m.row(i).to_vec()),
            Resolution::Family(r) => r[i].iter().map(|(lo, hi)| (lo == hi).then(|| lo.clone())).collect(),
            Resolution::Infeasible(_) => None,
        }
    }

    pub fn unique(&self) -> Option<&AssignmentMatrix> {
        match self {
            Resolution::Unique(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, Resolution::Infeasible(_))
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resolution::Unique(m) => write!(f, "unique\n{m}"),
            Resolution::Infeasible(_) => f.write_str("INFEASIBLE"),
            Resolution::Family(ranges) => {
                writeln!(f, "family (entry ranges)")?;
                for row in ranges {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|(lo, hi)| {
                            if lo == hi {
                                rational::short(lo)
                            } else {
                                format!("[{}, {}]", rational::short(lo), rational::short(hi))
                            }
                        })
                        .collect();
                    writeln!(f, "  {}", cells.join("  "))?;
                }
                Ok(())
            }
        }
    }
}

/// An affinely parametrised family of matrices `base + sum_k t_k * coef[k]`
/// whose parameters are read off the polytope as linear expressions.
#[derive(Clone, Debug)]
pub struct AffineFamily {
    pub params: Vec<(String, LinExpr)>,
    pub base: Vec<Vec<Rational>>,
    pub coef: Vec<Vec<Vec<Rational>>>,
    /// Vertices of the parameter region.
    pub vertices: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    /// Exact range of each parameter over the polytope.
    pub param_ranges: Vec<(String, Rational, Rational)>,
}

impl AffineFamily {
    pub fn at(&self, t: &[Rational]) -> Result<AssignmentMatrix> {
        let mut rows = self.base.clone();
        for (k, tk) in t.iter().enumerate() {
            for (row, crow) in rows.iter_mut().zip(&self.coef[k]) {
                for (v, c) in row.iter_mut().zip(crow) {
                    *v += c * tk;
                }
            }
        }
        AssignmentMatrix::new(rows)
    }

    /// Shows the polytope equals the family: every entry coincides with its
    /// parametrised form everywhere on the polytope, and every vertex of the
    /// parameter region lies in the polytope.
    pub fn check(&self, poly: &MatrixPolytope) -> Result<FamilyReport> {
        let n = poly.n();
        for i in 0..n {
            for j in 0..n {
                let mut e = poly.entry(i, j);
                e.add_constant(&-self.base[i][j].clone());
                for (k, (_, pe)) in self.params.iter().enumerate() {
                    e = e.minus(&pe.scaled(&self.coef[k][i][j]));
                }
                let (lo, hi) = poly.expr_range(&e)?;
                if !lo.is_zero() || !hi.is_zero() {
                    return Err(Error::CertificationFailed {
                        tag: "family".into(),
                        detail: format!("p[{}][{}] deviates from its parametrised form by [{lo}, {hi}]", i + 1, j + 1),
                    });
                }
            }
        }
        for v in &self.vertices {
            if !poly.contains(&self.at(v)?)? {
                return Err(Error::CertificationFailed {
                    tag: "family".into(),
                    detail: format!("parameter vertex {v:?} lies outside the polytope"),
                });
            }
        }
        let param_ranges = self
            .params
            .iter()
            .map(|(name, e)| poly.expr_range(e).map(|(lo, hi)| (name.clone(), lo, hi)))
            .collect::<Result<_>>()?;
        Ok(FamilyReport { param_ranges })
    }
}
