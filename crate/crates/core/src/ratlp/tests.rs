use super::*;
use crate::rational::{int, rat, zero};

fn bistochastic(n: usize) -> (LinearSystem, Vec<Vec<VarId>>) {
    let mut s = LinearSystem::new();
    let p: Vec<Vec<VarId>> = (0..n)
        .map(|i| (0..n).map(|j| s.add_var(format!("p[{}][{}]", i + 1, j + 1)).unwrap()).collect())
        .collect();
    for i in 0..n {
        s.constrain(LinExpr::sum(p[i].iter().copied()), Relation::Eq, int(1), "row").unwrap();
    }
    for j in 0..n {
        s.constrain(LinExpr::sum((0..n).map(|i| p[i][j])), Relation::Eq, int(1), "col").unwrap();
    }
    (s, p)
}

#[test]
fn maximize_single_bound() {
    let mut s = LinearSystem::new();
    let x = s.add_var("x").unwrap();
    s.constrain(LinExpr::var(x), Relation::Le, rat(1, 2), "cap").unwrap();
    let sol = optimize(&s, Sense::Maximize, LinExpr::var(x)).unwrap();
    assert_eq!(sol.value, rat(1, 2));
    assert_eq!(sol.point, vec![rat(1, 2)]);
}

#[test]
fn forced_zero_entry() {
    let (mut s, p) = bistochastic(4);
    for i in 0..3 {
        s.constrain(LinExpr::var(p[i][1]), Relation::Eq, zero(), "zero").unwrap();
    }
    let sol = optimize(&s, Sense::Maximize, LinExpr::var(p[3][0])).unwrap();
    assert_eq!(sol.value, zero());
}

#[test]
fn contradictory_equalities_are_certified() {
    let mut s = LinearSystem::new();
    let x = s.add_var("x").unwrap();
    s.constrain(LinExpr::var(x), Relation::Eq, rat(1, 3), "a").unwrap();
    s.constrain(LinExpr::var(x), Relation::Eq, rat(1, 4), "b").unwrap();
    match lp_solve(&s).unwrap() {
        LpOutcome::Infeasible(cert) => {
            assert!(cert.verify(&s).unwrap() > zero());
            assert_eq!(cert.support().len(), 2);
        }
        other => panic!("expected infeasible, got {other:?}"),
    }
}

#[test]
fn unbounded_is_reported() {
    let mut s = LinearSystem::new();
    let x = s.add_var("x").unwrap();
    let y = s.add_var("y").unwrap();
    s.constrain(LinExpr::var(x).minus(&LinExpr::var(y)), Relation::Le, int(1), "gap").unwrap();
    let out = lp_solve(&s.with_objective(Sense::Maximize, LinExpr::var(x)).unwrap()).unwrap();
    assert_eq!(out.status(), LpStatus::Unbounded);
}

#[test]
fn undeclared_variable_is_rejected() {
    let mut s = LinearSystem::new();
    s.add_var("x").unwrap();
    let err = s.constrain(LinExpr::var(VarId(3)), Relation::Le, int(1), "bad");
    assert!(matches!(err, Err(Error::MalformedSystem(_))));
    let err = s.constrain_named(&[("y", int(1))], Relation::Le, int(1), "bad");
    assert!(matches!(err, Err(Error::MalformedSystem(_))));
    assert!(s.add_var("x").is_err());
}

#[test]
fn unconstrained_two_by_two_range() {
    let (s, p) = bistochastic(2);
    assert_eq!(coordinate_range(&s, p[0][0]).unwrap(), (zero(), int(1)));
}

#[test]
fn range_of_infeasible_system_carries_certificate() {
    let (mut s, p) = bistochastic(2);
    s.constrain(LinExpr::var(p[0][0]), Relation::Ge, rat(3, 2), "too much").unwrap();
    match coordinate_range(&s, p[1][1]) {
        Err(Error::Infeasible(cert)) => {
            cert.verify(&s).unwrap();
        }
        other => panic!("expected infeasible, got {other:?}"),
    }
}

#[test]
fn negative_rhs_rows_keep_certificate_signs() {
    let mut s = LinearSystem::new();
    let x = s.add_var("x").unwrap();
    s.constrain(LinExpr::var(x).scaled(&int(-1)), Relation::Ge, int(-1), "x<=1").unwrap();
    s.constrain(LinExpr::var(x), Relation::Ge, int(2), "x>=2").unwrap();
    match lp_solve(&s).unwrap() {
        LpOutcome::Infeasible(cert) => assert_eq!(cert.verify(&s).unwrap(), int(1)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn constant_terms_move_to_rhs() {
    let mut s = LinearSystem::new();
    let x = s.add_var("x").unwrap();
    let mut e = LinExpr::var(x);
    e.add_constant(&rat(1, 4));
    s.constrain(e, Relation::Eq, rat(3, 4), "shifted").unwrap();
    assert_eq!(s.constraints()[0].rhs, rat(1, 2));
    let mut obj = LinExpr::var(x);
    obj.add_constant(&int(1));
    let sol = optimize(&s, Sense::Minimize, obj).unwrap();
    assert_eq!(sol.value, rat(3, 2));
}

#[test]
fn degenerate_redundant_equalities() {
    // Row and column sums of a bistochastic matrix are linearly dependent;
    // phase 1 must leave one artificial basic at zero and still finish.
    let (s, p) = bistochastic(3);
    let obj = LinExpr::var(p[0][0]).plus(&LinExpr::var(p[1][1]));
    let s = s.with_objective(Sense::Maximize, obj).unwrap();
    let sol = lp_solve(&s).unwrap().into_solution().unwrap();
    assert_eq!(sol.value, int(2));
    sol.verify(&s).unwrap();
}

#[test]
fn describe_constraint_is_readable() {
    let mut s = LinearSystem::new();
    let x = s.add_var("x").unwrap();
    let y = s.add_var("y").unwrap();
    s.constrain(LinExpr::var(x).term(y, rat(-1, 2)), Relation::Le, rat(1, 3), "t").unwrap();
    assert_eq!(s.describe_constraint(0), "x + -1/2*y <= 1/3  [t]");
}
