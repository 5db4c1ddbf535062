//! Exact rational linear programming over non-negative variables.
//!
//! A [`LinearSystem`] is a list of tagged linear constraints over named
//! variables, all implicitly `>= 0`, with an optional objective. Solving it
//! yields either an optimum with a witness point and dual multipliers, or an
//! infeasibility certificate. Every outcome is re-verified with exact
//! arithmetic before it is returned.

mod simplex;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

/// `sum(coef * var) + constant`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinExpr {
    terms: BTreeMap<usize, Rational>,
    constant: Rational,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(v: VarId) -> Self {
        Self::new().term(v, rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self { terms: BTreeMap::new(), constant: c }
    }

    pub fn sum(vars: impl IntoIterator<Item = VarId>) -> Self {
        let mut e = Self::new();
        for v in vars {
            e.add_term(v, rational::one());
        }
        e
    }

    pub fn term(mut self, v: VarId, coef: Rational) -> Self {
        self.add_term(v, coef);
        self
    }

    pub fn add_term(&mut self, v: VarId, coef: Rational) {
        let slot = self.terms.entry(v.0).or_insert_with(Rational::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&v.0);
        }
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn plus(mut self, other: &LinExpr) -> Self {
        for (&v, c) in &other.terms {
            self.add_term(VarId(v), c.clone());
        }
        self.constant += &other.constant;
        self
    }

    pub fn minus(self, other: &LinExpr) -> Self {
        self.plus(&other.scaled(&-rational::one()))
    }

    pub fn scaled(&self, f: &Rational) -> Self {
        if f.is_zero() {
            return Self::new();
        }
        Self {
            terms: self.terms.iter().map(|(&v, c)| (v, c * f)).collect(),
            constant: &self.constant * f,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarId, &Rational)> {
        self.terms.iter().map(|(&v, c)| (VarId(v), c))
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn coefficient(&self, v: VarId) -> Rational {
        self.terms.get(&v.0).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = self.constant.clone();
        for (&v, c) in &self.terms {
            acc += c * &point[v];
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        })
    }
}

/// `expr (relation) rhs`, where `expr` carries no constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub expr: LinExpr,
    pub relation: Relation,
    pub rhs: Rational,
    pub tag: String,
}

impl Constraint {
    pub fn holds_at(&self, point: &[Rational]) -> bool {
        let lhs = self.expr.eval(point);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective {
    pub sense: Sense,
    pub expr: LinExpr,
}

#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    names: Vec<String>,
    index: HashMap<String, VarId>,
    constraints: Vec<Constraint>,
    objective: Option<Objective>,
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a non-negative variable. Re-declaring a name is an error.
    pub fn add_var(&mut self, name: impl Into<String>) -> Result<VarId> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::MalformedSystem(format!("variable {name} declared twice")));
        }
        let id = VarId(self.names.len());
        self.index.insert(name.clone(), id);
        self.names.push(name);
        Ok(id)
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.names[v.0]
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> Option<&Objective> {
        self.objective.as_ref()
    }

    fn check_expr(&self, expr: &LinExpr) -> Result<()> {
        match expr.terms().find(|(v, _)| v.0 >= self.num_vars()) {
            Some((v, _)) => Err(Error::MalformedSystem(format!(
                "undeclared variable #{} ({} declared)",
                v.0,
                self.num_vars()
            ))),
            None => Ok(()),
        }
    }

    /// Adds `expr (relation) rhs`; a constant inside `expr` is moved to the
    /// right-hand side. Returns the constraint index.
    pub fn constrain(
        &mut self,
        mut expr: LinExpr,
        relation: Relation,
        rhs: Rational,
        tag: impl Into<String>,
    ) -> Result<usize> {
        self.check_expr(&expr)?;
        let rhs = rhs - &expr.constant;
        expr.constant = Rational::zero();
        self.constraints.push(Constraint { expr, relation, rhs, tag: tag.into() });
        Ok(self.constraints.len() - 1)
    }

    /// Like [`constrain`](Self::constrain) but addresses variables by name.
    pub fn constrain_named(
        &mut self,
        terms: &[(&str, Rational)],
        relation: Relation,
        rhs: Rational,
        tag: impl Into<String>,
    ) -> Result<usize> {
        let mut expr = LinExpr::new();
        for (name, c) in terms {
            let v = self
                .var_id(name)
                .ok_or_else(|| Error::MalformedSystem(format!("undeclared variable {name}")))?;
            expr.add_term(v, c.clone());
        }
        self.constrain(expr, relation, rhs, tag)
    }

    pub fn set_objective(&mut self, sense: Sense, expr: LinExpr) -> Result<()> {
        self.check_expr(&expr)?;
        self.objective = Some(Objective { sense, expr });
        Ok(())
    }

    pub fn clear_objective(&mut self) {
        self.objective = None;
    }

    pub fn with_objective(&self, sense: Sense, expr: LinExpr) -> Result<Self> {
        let mut s = self.clone();
        s.set_objective(sense, expr)?;
        Ok(s)
    }

    /// Index of the first constraint violated at `point`, if any
    /// (negative coordinates count as a violation of the sign constraints).
    pub fn first_violation(&self, point: &[Rational]) -> Option<String> {
        if point.len() != self.num_vars() {
            return Some(format!("point has {} coordinates", point.len()));
        }
        if let Some(j) = point.iter().position(|v| v.is_negative()) {
            return Some(format!("{} < 0", self.names[j]));
        }
        self.constraints
            .iter()
            .position(|c| !c.holds_at(point))
            .map(|k| format!("constraint {k} [{}]", self.constraints[k].tag))
    }

    pub fn describe_constraint(&self, k: usize) -> String {
        let c = &self.constraints[k];
        let mut parts = Vec::new();
        for (v, coef) in c.expr.terms() {
            let name = self.var_name(v);
            parts.push(if *coef == rational::one() {
                name.to_string()
            } else if *coef == -rational::one() {
                format!("-{name}")
            } else {
                format!("{}*{name}", rational::short(coef))
            });
        }
        let lhs = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        format!("{lhs} {} {}  [{}]", c.relation, rational::short(&c.rhs), c.tag)
    }
}

/// Multipliers, one per constraint, proving infeasibility: `>=` rows carry
/// non-negative and `<=` rows non-positive multipliers, the combined
/// coefficient of every variable is `<= 0` and the combined right-hand side
/// is positive. Since all variables are non-negative this combines the
/// system into `0 >= (combined lhs) >= (combined rhs) > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rational>,
}

impl FarkasCertificate {
    /// Re-multiplies the certificate against `system`; returns the positive
    /// combined right-hand side on success.
    pub fn verify(&self, system: &LinearSystem) -> Result<Rational> {
        let cons = system.constraints();
        let fail = |why: String| Err(Error::CertificationFailed { tag: "farkas".into(), detail: why });
        if self.multipliers.len() != cons.len() {
            return fail(format!("{} multipliers for {} constraints", self.multipliers.len(), cons.len()));
        }
        let mut combined = vec![Rational::zero(); system.num_vars()];
        let mut rhs = Rational::zero();
        for (k, (y, c)) in self.multipliers.iter().zip(cons).enumerate() {
            if y.is_zero() {
                continue;
            }
            let sign_ok = match c.relation {
                Relation::Ge => y.is_positive(),
                Relation::Le => y.is_negative(),
                Relation::Eq => true,
            };
            if !sign_ok {
                return fail(format!("multiplier {y} has the wrong sign for constraint {k}"));
            }
            for (v, a) in c.expr.terms() {
                combined[v.0] += y * a;
            }
            rhs += y * &c.rhs;
        }
        if let Some(j) = combined.iter().position(|v| v.is_positive()) {
            return fail(format!("combined coefficient of {} is positive", system.var_name(VarId(j))));
        }
        if !rhs.is_positive() {
            return fail(format!("combined right-hand side {rhs} is not positive"));
        }
        Ok(rhs)
    }

    /// Constraints with a non-zero multiplier, as `(index, multiplier)`.
    pub fn support(&self) -> Vec<(usize, &Rational)> {
        self.multipliers
            .iter()
            .enumerate()
            .filter(|(_, y)| !y.is_zero())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub value: Rational,
    pub point: Vec<Rational>,
    /// Dual multipliers certifying the bound `value` (see [`Solution::verify`]).
    pub duals: Vec<Rational>,
}

impl Solution {
    /// Checks the witness against every constraint and the dual multipliers
    /// against the objective: for minimisation `>=` rows carry non-negative
    /// and `<=` rows non-positive multipliers with combined coefficients
    /// `<= c` and combined right-hand side equal to the optimum (mirrored for
    /// maximisation).
    pub fn verify(&self, system: &LinearSystem) -> Result<()> {
        let fail = |why: String| Err(Error::CertificationFailed { tag: "lp-optimum".into(), detail: why });
        if let Some(v) = system.first_violation(&self.point) {
            return fail(format!("witness violates {v}"));
        }
        let (sense, obj) = match system.objective() {
            Some(o) => (o.sense, o.expr.clone()),
            None => (Sense::Minimize, LinExpr::new()),
        };
        if obj.eval(&self.point) != self.value {
            return fail("witness does not attain the reported value".into());
        }
        let flip = sense == Sense::Maximize;
        let mut combined = vec![Rational::zero(); system.num_vars()];
        let mut rhs = obj.constant_term().clone();
        for (k, (y, c)) in self.duals.iter().zip(system.constraints()).enumerate() {
            if y.is_zero() {
                continue;
            }
            let sign_ok = match (c.relation, flip) {
                (Relation::Ge, false) | (Relation::Le, true) => y.is_positive(),
                (Relation::Le, false) | (Relation::Ge, true) => y.is_negative(),
                (Relation::Eq, _) => true,
            };
            if !sign_ok {
                return fail(format!("dual {y} has the wrong sign for constraint {k}"));
            }
            for (v, a) in c.expr.terms() {
                combined[v.0] += y * a;
            }
            rhs += y * &c.rhs;
        }
        for (j, cj) in combined.iter().enumerate() {
            let obj_c = obj.coefficient(VarId(j));
            let ok = if flip { *cj >= obj_c } else { *cj <= obj_c };
            if !ok {
                return fail(format!("dual constraint fails at {}", system.var_name(VarId(j))));
            }
        }
        if rhs != self.value {
            return fail(format!("dual bound {rhs} differs from optimum {}", self.value));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(Solution),
    Infeasible(FarkasCertificate),
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal(_) => LpStatus::Optimal,
            LpOutcome::Infeasible(_) => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn into_solution(self) -> Result<Solution> {
        match self {
            LpOutcome::Optimal(s) => Ok(s),
            LpOutcome::Infeasible(c) => Err(Error::Infeasible(c)),
            LpOutcome::Unbounded => Err(Error::Unbounded),
        }
    }
}

/// Solves `system` exactly. Without an objective this is a feasibility check
/// (the reported value is zero).
pub fn lp_solve(system: &LinearSystem) -> Result<LpOutcome> {
    let n = system.num_vars();
    for c in system.constraints() {
        system.check_expr(&c.expr)?;
    }
    let mut a = Vec::with_capacity(system.constraints().len());
    let mut rel = Vec::with_capacity(a.capacity());
    let mut b = Vec::with_capacity(a.capacity());
    for c in system.constraints() {
        let mut row = vec![Rational::zero(); n];
        for (v, coef) in c.expr.terms() {
            row[v.0] = coef.clone();
        }
        a.push(row);
        rel.push(c.relation);
        b.push(c.rhs.clone());
    }
    let (sense, obj) = match system.objective() {
        Some(o) => (o.sense, o.expr.clone()),
        None => (Sense::Minimize, LinExpr::new()),
    };
    let flip = sense == Sense::Maximize;
    let cost: Vec<Rational> = (0..n)
        .map(|j| {
            let c = obj.coefficient(VarId(j));
            if flip {
                -c
            } else {
                c
            }
        })
        .collect();

    let outcome = match simplex::solve(&a, &rel, &b, &cost) {
        simplex::RawOutcome::Unbounded => LpOutcome::Unbounded,
        simplex::RawOutcome::Infeasible { y } => LpOutcome::Infeasible(FarkasCertificate { multipliers: y }),
        simplex::RawOutcome::Optimal { x, y, value } => {
            let (value, duals) = if flip {
                (-value, y.into_iter().map(|v| -v).collect())
            } else {
                (value, y)
            };
            LpOutcome::Optimal(Solution { value: value + obj.constant_term(), point: x, duals })
        }
    };
    match &outcome {
        LpOutcome::Optimal(s) => s.verify(system).map_err(|e| Error::Internal(e.to_string()))?,
        LpOutcome::Infeasible(c) => {
            c.verify(system).map_err(|e| Error::Internal(e.to_string()))?;
        }
        LpOutcome::Unbounded => {}
    }
    Ok(outcome)
}

/// Optimises `expr` over the feasible region.
pub fn optimize(system: &LinearSystem, sense: Sense, expr: LinExpr) -> Result<Solution> {
    lp_solve(&system.with_objective(sense, expr)?)?.into_solution()
}

/// Exact `(min, max)` of `expr` over the feasible region.
pub fn expr_range(system: &LinearSystem, expr: &LinExpr) -> Result<(Rational, Rational)> {
    let lo = optimize(system, Sense::Minimize, expr.clone())?;
    let hi = optimize(system, Sense::Maximize, expr.clone())?;
    Ok((lo.value, hi.value))
}

pub fn coordinate_range(system: &LinearSystem, var: VarId) -> Result<(Rational, Rational)> {
    if var.0 >= system.num_vars() {
        return Err(Error::MalformedSystem(format!("undeclared variable #{}", var.0)));
    }
    expr_range(system, &LinExpr::var(var))
}

#[cfg(test)]
mod tests;
