use uassign::axioms::{equal_treatment, ex_post_efficient, ordinally_efficient};
use uassign::repro::*;
use uassign::{rat, sd_compare, AssignmentMatrix, Error, Rational, SdVerdict};
use uassign_oracle::matching;

fn m(rows: &[&[(i64, i64)]]) -> AssignmentMatrix {
    AssignmentMatrix::from_fractions(rows).unwrap()
}

fn r(a: i64, b: i64) -> Rational {
    rat(a, b)
}

fn bounds(p: &uassign::Profile) -> Vec<Vec<usize>> {
    p.prefs().iter().map(|x| x.boundaries().to_vec()).collect()
}

#[test]
fn example_is_verified() {
    let rep = verify_example31().unwrap();
    assert_eq!(rep.transcript.last().unwrap(), "EXAMPLE: VERIFIED");
    assert_eq!(rep.profile, example31_profile());
}

#[test]
fn theorem1_core() {
    let rep = verify_theorem1(3).unwrap();
    let [p1, p2] = &rep.derivations;
    let u1 = m(&[&[(1, 3), (1, 2), (1, 6)], &[(1, 3), (0, 1), (2, 3)], &[(1, 3), (1, 2), (1, 6)]]);
    let u2 = m(&[&[(1, 2), (1, 4), (1, 4)], &[(1, 2), (0, 1), (1, 2)], &[(0, 1), (3, 4), (1, 4)]]);
    assert_eq!(p1.resolution.unique().unwrap(), &u1);
    assert_eq!(p2.resolution.unique().unwrap(), &u2);
    for (d, u) in [(p1, &u1), (p2, &u2)] {
        assert!(matching::envy_free(u.rows(), &bounds(&d.profile)));
        assert!(ex_post_efficient(u, &d.profile).unwrap().holds);
    }
    assert_eq!(rep.ef_families[0].param_ranges, vec![("y".to_string(), r(0, 1), r(1, 6))]);
    let w = &rep.ef_families[1].param_ranges[0];
    assert_eq!((w.1.clone(), w.2.clone()), (r(0, 1), r(1, 6)));
    let z = &rep.ef_families[1].param_ranges[1];
    assert_eq!(z.2, r(1, 12));
    // The EF set reaches below the printed z >= 0 edge.
    assert_eq!(z.1, r(-1, 12));
    let truth = theorem1_profiles()[1].pref(2).clone();
    assert_eq!(sd_compare(u1.row(2), u2.row(2), &truth).unwrap(), SdVerdict::DominatesStrictly);
    assert!(rep.dominance.iter().all(|(_, v)| *v == SdVerdict::DominatesStrictly));
    assert!(rep.padding.is_none());
    assert_eq!(rep.transcript.last().unwrap(), "THEOREM 1: VERIFIED");
}

#[test]
fn theorem1_padding_and_guards() {
    for n in [4, 5] {
        let rep = verify_theorem1(n).unwrap();
        let pad = rep.padding.unwrap();
        assert_eq!(pad.n, n);
        for (k, core) in theorem1_profiles().iter().enumerate() {
            let padded = padded_profile(core, n).unwrap();
            let pe = matching::pe_matchings(&bounds(&padded));
            assert_eq!(pe.len(), pad.pe_matchings[k]);
            assert!(pe.iter().all(|mt| (3..n).all(|i| mt[i] == i)));
        }
    }
    assert!(verify_theorem1(2).is_err());
    assert!(matches!(verify_theorem1(6), Err(Error::GuardExceeded { .. })));
}

#[test]
fn theorem2_chain() {
    let chain = verify_theorem2().unwrap();
    let d = &chain.derivations;
    assert_eq!(d.len(), 8);
    let expect = [
        (0, m(&[&[(1, 4); 4], &[(1, 4); 4], &[(1, 4); 4], &[(1, 4); 4]])),
        (
            1,
            m(&[
                &[(1, 3), (1, 6), (1, 4), (1, 4)],
                &[(1, 3), (1, 6), (1, 4), (1, 4)],
                &[(1, 3), (1, 6), (1, 4), (1, 4)],
                &[(0, 1), (1, 2), (1, 4), (1, 4)],
            ]),
        ),
        (
            2,
            m(&[
                &[(1, 2), (0, 1), (1, 4), (1, 4)],
                &[(1, 2), (0, 1), (1, 4), (1, 4)],
                &[(0, 1), (1, 2), (1, 4), (1, 4)],
                &[(0, 1), (1, 2), (1, 4), (1, 4)],
            ]),
        ),
        (
            4,
            m(&[
                &[(1, 4), (1, 3), (1, 6), (1, 4)],
                &[(1, 4), (0, 1), (1, 2), (1, 4)],
                &[(1, 4), (1, 3), (1, 6), (1, 4)],
                &[(1, 4), (1, 3), (1, 6), (1, 4)],
            ]),
        ),
        (
            5,
            m(&[
                &[(1, 3), (5, 24), (5, 24), (1, 4)],
                &[(1, 3), (0, 1), (5, 12), (1, 4)],
                &[(1, 3), (5, 24), (5, 24), (1, 4)],
                &[(0, 1), (7, 12), (1, 6), (1, 4)],
            ]),
        ),
    ];
    for (k, want) in &expect {
        let got = d[*k].resolution.unique().unwrap_or_else(|| panic!("P{} not unique", k + 1));
        assert_eq!(got, want, "P{}", k + 1);
        assert!(matching::equal_treatment(got.rows(), &bounds(&d[*k].profile)));
        assert!(equal_treatment(got, &d[*k].profile).unwrap().holds);
        assert!(ordinally_efficient(got, &d[*k].profile).unwrap().holds, "P{}", k + 1);
    }
    assert_eq!(d[3].resolution.pinned_row(1).unwrap(), vec![r(1, 2), r(0, 1), r(1, 4), r(1, 4)]);
    assert!(d[3].resolution.pinned_row(0).is_none());
    assert_eq!(d[6].resolution.pinned_row(0).unwrap(), vec![r(5, 12), r(0, 1), r(1, 3), r(1, 4)]);
    assert_eq!(d[6].resolution.pinned_row(1).unwrap(), vec![r(1, 2), r(0, 1), r(1, 4), r(1, 4)]);
    assert!(d[7].resolution.is_infeasible());

    let names: Vec<&str> = chain.families.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["P4", "P7"]);
    assert_eq!(
        chain.families[0].1.param_ranges,
        vec![("x".to_string(), r(0, 1), r(1, 2)), ("y".to_string(), r(0, 1), r(1, 2))]
    );
    assert_eq!(chain.families[1].1.param_ranges, vec![("z".to_string(), r(0, 1), r(1, 12))]);

    let c = &chain.contradiction;
    assert_eq!(c.pins, vec![r(1, 3), r(1, 4), r(1, 3), r(1, 3)]);
    assert_eq!(c.sum, r(5, 4));
    assert!(c.certificate.verify(c.subsystem.system()).unwrap() > r(0, 1));
    assert_eq!(chain.transcript.last().unwrap(), "PROFILE 8: INFEASIBLE");
    assert!(chain.transcript.iter().any(|l| l.contains("p31 + x32")));
}

#[test]
fn theorem2_links_follow_the_deviation_graph() {
    let links = theorem2_links();
    let profiles = theorem2_profiles();
    let edges: Vec<(usize, usize)> = links.iter().map(|l| (l.source + 1, l.target + 1)).collect();
    let mut sorted = edges.clone();
    sorted.sort();
    assert_eq!(sorted, [(1, 2), (1, 5), (2, 3), (2, 6), (3, 4), (3, 7), (4, 8), (5, 6), (6, 7), (7, 8)]);
    for l in &links {
        assert_eq!(profiles[l.source].differing_agents(&profiles[l.target]), vec![l.deviator]);
        assert!(l.source < l.target);
    }
}

#[test]
fn sp_link_equalities() {
    let chain = verify_theorem2().unwrap();
    let d = &chain.derivations;
    let p = theorem2_profiles();
    let eq = link_equalities(&sp_link_constraints(&d[0], &p[1], 3).unwrap());
    assert_eq!(eq, vec![(2, r(1, 2)), (3, r(3, 4)), (4, r(1, 1))]);
    let eq = link_equalities(&sp_link_constraints(&d[5], &p[6], 2).unwrap());
    assert_eq!(eq, vec![(2, r(13, 24)), (3, r(3, 4)), (4, r(1, 1))]);
    assert!(sp_link_constraints(&d[0], &p[0], 0).unwrap().is_empty());
    // Profiles differing in two agents, and unpinned source rows, are refused.
    assert!(sp_link_constraints(&d[0], &p[2], 2).is_err());
    assert!(sp_link_constraints(&d[3], &p[7], 0).is_err());
}

#[test]
fn oe_zero_examples() {
    let p = theorem2_profiles();
    let chain = verify_theorem2().unwrap();
    let partners = |k: usize, t: (usize, usize)| {
        chain.derivations[k].oe_zero.iter().find(|c| c.target == t).unwrap().partners.clone()
    };
    assert_eq!(partners(1, (3, 0)), vec![(0, 1), (1, 1), (2, 1)]);
    assert_eq!(partners(3, (1, 1)), vec![(0, 0), (2, 0), (3, 0)]);
    assert_eq!(partners(4, (1, 1)), vec![(0, 2), (2, 2), (3, 2)]);
    for d in &chain.derivations {
        for c in &d.oe_zero {
            c.verify().unwrap();
        }
    }
    assert_eq!(swap_partners(&p[0], (0, 0)), vec![]);
    // Zero partners fill column 2 with agent 4, which already forces p41 = 0.
    let poly = MatrixPolytope::bistochastic(4).unwrap();
    let c = oe_zero_certify(&p[1], &poly, (3, 0)).unwrap();
    c.verify().unwrap();
    assert!(oe_zero_certify(&p[0], &poly, (0, 0)).is_err());
}

#[test]
fn improving_swap_lemma() {
    let profile = uassign::Profile::parse(&["o1,o2", "{o1 o2}"]).unwrap();
    let half = AssignmentMatrix::uniform(2);
    let q = improving_swap(&half, &profile, 0, 1, 0, 1).unwrap();
    assert_eq!(q, AssignmentMatrix::identity(2));
    assert!(improving_swap(&half, &profile, 1, 0, 0, 1).is_err());
    assert!(improving_swap(&AssignmentMatrix::identity(2), &profile, 0, 1, 0, 1).is_err());
}
