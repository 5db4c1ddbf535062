//! JSON renderings of certificates, for re-verification outside the tool.

use serde_json::{json, Value};

use uassign::axioms::{AxiomVerdict, Certificate};
use uassign::lottery::Lottery;
use uassign::ratlp::{FarkasCertificate, LinearSystem};
use uassign::repro::{CertifiedDerivation, DerivationChain, Example31Report, Resolution, Theorem1Report};
use uassign::strategy::{ManipulationReport, SweepSummary};
use uassign::{Matching, Profile};

use crate::io::{matrix_json, profile_to_instance, rational_json, row_json};

pub fn matching_json(m: &Matching) -> Value {
    json!(m.objects().iter().map(|o| o + 1).collect::<Vec<_>>())
}

pub fn profile_json(p: &Profile) -> Value {
    serde_json::to_value(profile_to_instance(p)).expect("plain data")
}

/// Constraints with their tags, and the multiplier of each.
pub fn farkas_json(system: &LinearSystem, cert: &FarkasCertificate) -> Value {
    let rows: Vec<Value> = system
        .constraints()
        .iter()
        .zip(&cert.multipliers)
        .enumerate()
        .filter(|(_, (_, y))| *y != &uassign::rational::zero())
        .map(|(k, (c, y))| {
            json!({
                "multiplier": rational_json(y),
                "constraint": system.describe_constraint(k),
                "tag": c.tag,
            })
        })
        .collect();
    let rhs = cert.verify(system).ok().map(|r| rational_json(&r));
    json!({ "kind": "farkas", "combined_rhs": rhs, "support": rows })
}

pub fn lottery_json(l: &Lottery) -> Value {
    Value::Array(
        l.entries()
            .iter()
            .map(|(w, m)| json!({ "weight": rational_json(w), "matching": matching_json(m) }))
            .collect(),
    )
}

pub fn verdict_json(v: &AxiomVerdict) -> Value {
    let cert = match &v.certificate {
        Certificate::None => Value::Null,
        Certificate::Dominating(q) => json!({ "kind": "dominating", "matrix": matrix_json(q) }),
        Certificate::ParetoImprovement(m) => json!({ "kind": "pareto_improvement", "matching": matching_json(m) }),
        Certificate::Envy { agent, envied, class, own, other } => json!({
            "kind": "envy",
            "agent": agent + 1,
            "envied": envied + 1,
            "class": class + 1,
            "own": rational_json(own),
            "other": rational_json(other),
        }),
        Certificate::UnequalEquals { first, second, class, first_sum, second_sum } => json!({
            "kind": "unequal_treatment",
            "agents": [first + 1, second + 1],
            "class": class + 1,
            "sums": [rational_json(first_sum), rational_json(second_sum)],
        }),
        Certificate::Weights(ws) => json!({
            "kind": "weights",
            "lottery": ws.iter().map(|(w, m)| json!({ "weight": rational_json(w), "matching": matching_json(m) })).collect::<Vec<_>>(),
        }),
        Certificate::Infeasible { system, certificate } => farkas_json(system, certificate),
    };
    json!({ "axiom": v.axiom.code(), "holds": v.holds, "certificate": cert })
}

pub fn manipulation_json(r: &ManipulationReport) -> Value {
    json!({
        "agent": r.agent + 1,
        "truth": r.truth.to_classes(),
        "misreport": r.misreport.to_classes(),
        "truthful_row": row_json(&r.truthful_row),
        "misreport_row": row_json(&r.misreport_row),
        "verdict": format!("{:?}", r.verdict),
    })
}

pub fn sweep_json(s: &SweepSummary) -> Value {
    let first = |w: &Option<(Profile, ManipulationReport)>| {
        w.as_ref()
            .map(|(p, r)| json!({ "profile": profile_json(p), "report": manipulation_json(r) }))
    };
    json!({
        "n": s.n,
        "profiles": s.profiles,
        "comparisons": s.comparisons,
        "sp_violations": s.sp_violations,
        "weak_sp_violations": s.weak_sp_violations,
        "first_sp": first(&s.first_sp),
        "first_weak_sp": first(&s.first_weak_sp),
    })
}

fn derivation_json(d: &CertifiedDerivation) -> Value {
    let resolution = match &d.resolution {
        Resolution::Unique(m) => json!({ "kind": "unique", "matrix": matrix_json(m) }),
        Resolution::Family(ranges) => json!({
            "kind": "family",
            "ranges": ranges
                .iter()
                .map(|r| r.iter().map(|(lo, hi)| json!([rational_json(lo), rational_json(hi)])).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
        Resolution::Infeasible(c) => farkas_json(d.polytope.system(), c),
    };
    let tags: Vec<String> = d.polytope.justifications().iter().map(|j| j.tag()).collect();
    json!({
        "name": d.name,
        "profile": profile_json(&d.profile),
        "constraint_tags": tags,
        "oe_zero": d.oe_zero.iter().map(|c| json!([c.target.0 + 1, c.target.1 + 1])).collect::<Vec<_>>(),
        "resolution": resolution,
    })
}

pub fn theorem2_json(c: &DerivationChain) -> Value {
    let cc = &c.contradiction;
    json!({
        "derivations": c.derivations.iter().map(derivation_json).collect::<Vec<_>>(),
        "links": c.links.iter().map(|l| json!({ "source": l.source + 1, "target": l.target + 1, "deviator": l.deviator + 1 })).collect::<Vec<_>>(),
        "column_contradiction": {
            "pins": cc.pins.iter().map(rational_json).collect::<Vec<_>>(),
            "sum": rational_json(&cc.sum),
            "certificate": farkas_json(cc.subsystem.system(), &cc.certificate),
        },
    })
}

pub fn theorem1_json(r: &Theorem1Report) -> Value {
    json!({
        "n": r.n,
        "ef_parameter_ranges": r.ef_families.iter().map(|f| {
            f.param_ranges.iter().map(|(name, lo, hi)| json!({ "param": name, "min": rational_json(lo), "max": rational_json(hi) })).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
        "derivations": r.derivations.iter().map(derivation_json).collect::<Vec<_>>(),
        "padding": r.padding.as_ref().map(|p| json!({ "n": p.n, "pe_matchings": p.pe_matchings })),
    })
}

pub fn example31_json(r: &Example31Report) -> Value {
    json!({
        "profile": profile_json(&r.profile),
        "first": matrix_json(&r.first),
        "second": matrix_json(&r.second),
        "eps": matrix_json(&r.eps),
    })
}
