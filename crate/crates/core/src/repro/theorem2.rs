//! Ordinal efficiency, equal treatment and strategyproofness are
//! incompatible: eight four-agent profiles linked by single-agent deviations.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::ratlp::{FarkasCertificate, LinExpr, Relation};
use crate::rational::{self, rat, Rational};

use super::polytope::{AffineFamily, FamilyReport, Justification, MatrixPolytope, Resolution};
use super::swap::oe_zero_certify;
use super::{link_equalities, sp_link_constraints, CertifiedDerivation};

/// `target` is reached from `source` by `deviator` changing its report
/// (all indices 0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpLink {
    pub source: usize,
    pub target: usize,
    pub deviator: usize,
}

/// The column-3 clash in the last profile, isolated in a small subsystem.
#[derive(Clone, Debug)]
pub struct ColumnContradiction {
    /// Two SP links, the zero of `p[2][2]`, equal treatment of agents 1, 3
    /// and 4, and the column-3 sum.
    pub subsystem: MatrixPolytope,
    /// `p[i][3]` pinned by the subsystem without the column equality.
    pub pins: Vec<Rational>,
    pub sum: Rational,
    pub certificate: FarkasCertificate,
}

#[derive(Clone, Debug)]
pub struct DerivationChain {
    pub derivations: Vec<CertifiedDerivation>,
    pub links: Vec<SpLink>,
    /// Parameter ranges of profiles 4 (`x`, `y`) and 7 (`z`).
    pub families: Vec<(String, FamilyReport)>,
    pub contradiction: ColumnContradiction,
    pub transcript: Vec<String>,
}

const PROFILES: [[&str; 4]; 8] = [
    ["o1,o2,o3,o4", "o1,o2,o3,o4", "o1,o2,o3,o4", "o1,o2,o3,o4"],
    ["o1,o2,o3,o4", "o1,o2,o3,o4", "o1,o2,o3,o4", "{o1 o2},o3,o4"],
    ["o1,o2,o3,o4", "o1,o2,o3,o4", "{o1 o2},o3,o4", "{o1 o2},o3,o4"],
    ["{o1 o2},o3,o4", "o1,o2,o3,o4", "{o1 o2},o3,o4", "{o1 o2},o3,o4"],
    ["o1,o2,o3,o4", "o1,{o2 o3},o4", "o1,o2,o3,o4", "o1,o2,o3,o4"],
    ["o1,o2,o3,o4", "o1,{o2 o3},o4", "o1,o2,o3,o4", "{o1 o2},o3,o4"],
    ["o1,o2,o3,o4", "o1,{o2 o3},o4", "{o1 o2},o3,o4", "{o1 o2},o3,o4"],
    ["{o1 o2},o3,o4", "o1,{o2 o3},o4", "{o1 o2},o3,o4", "{o1 o2},o3,o4"],
];

/// Entries forced to zero by ordinal efficiency, per profile.
const OE_ZEROS: [&[(usize, usize)]; 8] = [
    &[],
    &[(3, 0)],
    &[(2, 0), (3, 0)],
    &[(1, 1)],
    &[(1, 1)],
    &[(1, 1), (3, 0)],
    &[(1, 1), (0, 1)],
    &[(1, 1)],
];

pub fn theorem2_profiles() -> Vec<Profile> {
    PROFILES.iter().map(|p| Profile::parse(p).expect("valid profile")).collect()
}

/// The deviation graph, ordered so every source precedes its targets.
pub fn theorem2_links() -> Vec<SpLink> {
    [(0, 1, 3), (1, 2, 2), (2, 3, 0), (0, 4, 1), (4, 5, 3), (1, 5, 1), (2, 6, 1), (5, 6, 2), (3, 7, 1), (6, 7, 0)]
        .iter()
        .map(|&(source, target, deviator)| SpLink { source, target, deviator })
        .collect()
}

fn fail<T>(tag: &str, detail: String) -> Result<T> {
    Err(Error::CertificationFailed { tag: tag.into(), detail })
}

fn rows(m: &[[(i64, i64); 4]]) -> Vec<Vec<Rational>> {
    m.iter().map(|r| r.iter().map(|&(a, b)| rat(a, b)).collect()).collect()
}

fn delta(i: usize, j: usize, sign: i64, rows: &mut [Vec<Rational>]) {
    rows[i][j] += rational::int(sign);
    rows[i][j + 1] -= rational::int(sign);
}

fn family4(poly: &MatrixPolytope) -> AffineFamily {
    let base = rows(&[
        [(0, 1), (1, 2), (1, 4), (1, 4)],
        [(1, 2), (0, 1), (1, 4), (1, 4)],
        [(0, 1), (1, 2), (1, 4), (1, 4)],
        [(1, 2), (0, 1), (1, 4), (1, 4)],
    ]);
    let zero = vec![vec![Rational::zero(); 4]; 4];
    let (mut cx, mut cy) = (zero.clone(), zero);
    delta(0, 0, 1, &mut cx);
    delta(3, 0, -1, &mut cx);
    delta(2, 0, 1, &mut cy);
    delta(3, 0, -1, &mut cy);
    AffineFamily {
        params: vec![("x".into(), poly.entry(0, 0)), ("y".into(), poly.entry(2, 0))],
        base,
        coef: vec![cx, cy],
        vertices: vec![vec![rat(0, 1), rat(0, 1)], vec![rat(1, 2), rat(0, 1)], vec![rat(0, 1), rat(1, 2)]],
    }
}

fn family7(poly: &MatrixPolytope) -> AffineFamily {
    let base = rows(&[
        [(5, 12), (0, 1), (1, 3), (1, 4)],
        [(1, 2), (0, 1), (1, 4), (1, 4)],
        [(0, 1), (13, 24), (5, 24), (1, 4)],
        [(1, 12), (11, 24), (5, 24), (1, 4)],
    ]);
    let mut cz = vec![vec![Rational::zero(); 4]; 4];
    delta(2, 0, 1, &mut cz);
    delta(3, 0, -1, &mut cz);
    AffineFamily {
        params: vec![("z".into(), poly.entry(2, 0))],
        base,
        coef: vec![cz],
        vertices: vec![vec![rat(0, 1)], vec![rat(1, 12)]],
    }
}

fn derive(
    k: usize,
    profile: &Profile,
    done: &[CertifiedDerivation],
    links: &[SpLink],
    transcript: &mut Vec<String>,
) -> Result<CertifiedDerivation> {
    let name = format!("P{}", k + 1);
    let mut poly = MatrixPolytope::bistochastic(4)?;
    poly.add_ete(profile)?;
    for link in links.iter().filter(|l| l.target == k) {
        let source = &done[link.source];
        let cons = sp_link_constraints(source, profile, link.deviator)?;
        let eqs: Vec<String> = link_equalities(&cons)
            .iter()
            .map(|(len, v)| {
                let cells: Vec<String> = (0..*len).map(|j| format!("p{}{}", link.deviator + 1, j + 1)).collect();
                format!("{} = {}", cells.join(" + "), rational::short(v))
            })
            .collect();
        transcript.push(format!("  SP with {} (agent {}): {}", source.name, link.deviator + 1, eqs.join(", ")));
        let why = Justification::SpLink { source: source.name.clone(), deviator: link.deviator };
        for c in cons {
            poly.push_constraint(c, why.clone())?;
        }
    }
    let mut certs = Vec::new();
    for &target in OE_ZEROS[k] {
        let cert = oe_zero_certify(profile, &poly, target)?;
        let partners: Vec<String> = cert.partners.iter().map(|(i, j)| format!("p{}{}", i + 1, j + 1)).collect();
        transcript.push(format!(
            "  OE: p{}{} = 0 (swap partners {} cannot all vanish)",
            target.0 + 1,
            target.1 + 1,
            partners.join(", ")
        ));
        poly.push(poly.entry(target.0, target.1), Relation::Eq, Rational::zero(), Justification::OeZero(Box::new(cert.clone())))?;
        certs.push(cert);
    }
    let resolution = poly.resolve()?;
    Ok(CertifiedDerivation { name, profile: profile.clone(), polytope: poly, oe_zero: certs, resolution })
}

fn column_contradiction(derivations: &[CertifiedDerivation]) -> Result<ColumnContradiction> {
    let tag = "column contradiction";
    let profile = &derivations[7].profile;
    let mut poly = MatrixPolytope::unconstrained(4)?;
    for (source, deviator) in [(6, 0), (3, 1)] {
        let src = &derivations[source];
        let why = Justification::SpLink { source: src.name.clone(), deviator };
        for c in sp_link_constraints(src, profile, deviator)? {
            poly.push_constraint(c, why.clone())?;
        }
    }
    let zero = derivations[7]
        .oe_zero
        .iter()
        .find(|c| c.target == (1, 1))
        .cloned()
        .ok_or_else(|| Error::Internal("missing p22 certificate".into()))?;
    poly.push(poly.entry(1, 1), Relation::Eq, Rational::zero(), Justification::OeZero(Box::new(zero)))?;
    for other in [2, 3] {
        for end in [2, 3] {
            let diff = poly.prefix(0, end).minus(&poly.prefix(other, end));
            poly.push(diff, Relation::Eq, Rational::zero(), Justification::Ete { first: 0, second: other })?;
        }
    }
    let mut pins = Vec::new();
    for i in 0..4 {
        let (lo, hi) = poly.range(i, 2)?;
        if lo != hi {
            return fail(tag, format!("p{}3 ranges over [{lo}, {hi}]", i + 1));
        }
        pins.push(lo);
    }
    let sum = rational::sum(&pins);
    let column = LinExpr::sum((0..4).map(|i| poly.var(i, 2)));
    poly.push(column, Relation::Eq, rational::one(), Justification::Bistochastic)?;
    let certificate = match poly.resolve()? {
        Resolution::Infeasible(cert) => cert,
        other => return fail(tag, format!("subsystem is feasible: {other}")),
    };
    certificate.verify(poly.system())?;
    Ok(ColumnContradiction { subsystem: poly, pins, sum, certificate })
}

pub fn verify_theorem2() -> Result<DerivationChain> {
    let profiles = theorem2_profiles();
    let links = theorem2_links();
    let mut transcript = Vec::new();
    let mut derivations: Vec<CertifiedDerivation> = Vec::new();
    let mut families = Vec::new();
    for (k, profile) in profiles.iter().enumerate() {
        transcript.push(format!("PROFILE {}\n{profile}", k + 1));
        match k {
            3 => transcript.push(
                "  note: SP with P3 and ETE are applied jointly: the link fixes agent 1, equal treatment carries it to agents 3 and 4".into(),
            ),
            7 => transcript.push("  note: the printed p31 + x32 = x41 + x42 is read as p31 + p32 = p41 + p42".into()),
            _ => {}
        }
        let d = derive(k, profile, &derivations, &links, &mut transcript)?;
        let tag = format!("profile {}", k + 1);
        match (k, &d.resolution) {
            (7, Resolution::Infeasible(cert)) => {
                let rhs = cert.verify(d.polytope.system())?;
                transcript.push(format!(
                    "  Farkas certificate: {} constraints combine to a non-positive form >= {}",
                    cert.support().len(),
                    rational::short(&rhs)
                ));
            }
            (3 | 6, Resolution::Family(_)) => {
                let fam = if k == 3 { family4(&d.polytope) } else { family7(&d.polytope) };
                let report = fam.check(&d.polytope)?;
                let ranges: Vec<String> = report
                    .param_ranges
                    .iter()
                    .map(|(n, lo, hi)| format!("{n} in [{}, {}]", rational::short(lo), rational::short(hi)))
                    .collect();
                transcript.push(format!("  {}  family: {}", d.resolution, ranges.join(", ")));
                families.push((d.name.clone(), report));
            }
            (0..=2 | 4 | 5, Resolution::Unique(_)) => transcript.push(format!("  {}", d.resolution)),
            (_, other) => return fail(&tag, format!("unexpected resolution: {other}")),
        }
        derivations.push(d);
    }
    let contradiction = column_contradiction(&derivations)?;
    let pins: Vec<String> = contradiction.pins.iter().map(rational::short).collect();
    transcript.push(format!(
        "  column 3: p13 + p23 + p33 + p43 = {} = {} != 1",
        pins.join(" + "),
        rational::short(&contradiction.sum)
    ));
    transcript.push("PROFILE 8: INFEASIBLE".into());
    Ok(DerivationChain { derivations, links, families, contradiction, transcript })
}
