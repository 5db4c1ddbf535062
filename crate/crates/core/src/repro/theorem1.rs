//! Ex-post efficiency and envy-freeness rule out weak strategyproofness.

use crate::axioms::enumerate_pe_matchings;
use crate::dominance::{sd_compare, SdVerdict};
use crate::error::{Error, Result};
use crate::limits;
use crate::matrix::Matching;
use crate::preference::UniformPreference;
use crate::profile::Profile;
use crate::rational::{int, rat, Rational};

use super::polytope::{AffineFamily, FamilyReport, MatrixPolytope};
use super::CertifiedDerivation;

#[derive(Clone, Debug)]
pub struct PaddingReport {
    pub n: usize,
    /// Number of Pareto-efficient matchings of each padded profile.
    pub pe_matchings: [usize; 2],
}

#[derive(Clone, Debug)]
pub struct Theorem1Report {
    pub n: usize,
    /// Parameter ranges of the envy-free sets (`y`; `w`, `z`).
    pub ef_families: [FamilyReport; 2],
    /// The envy-free, ex-post efficient polytopes, each a single point.
    pub derivations: [CertifiedDerivation; 2],
    /// Agent 3's first-profile row against its second-profile row, under
    /// each of its two reports.
    pub dominance: Vec<(UniformPreference, SdVerdict)>,
    pub padding: Option<PaddingReport>,
    pub transcript: Vec<String>,
}

/// The two three-agent profiles; they differ only in agent 3's report.
pub fn theorem1_profiles() -> [Profile; 2] {
    [
        Profile::parse(&["o1,o2,o3", "o1,{o2 o3}", "o1,o2,o3"]).expect("valid profile"),
        Profile::parse(&["o1,o2,o3", "o1,{o2 o3}", "{o1 o2},o3"]).expect("valid profile"),
    ]
}

/// Embeds a three-agent profile into `n` agents: agents 1-3 keep their
/// classes over `o1..o3` and rank the rest strictly; agent `i >= 4` is
/// indifferent among `o1..oi` and strict afterwards.
pub fn padded_profile(core: &Profile, n: usize) -> Result<Profile> {
    if n < core.n() {
        return Err(Error::SizeMismatch { expected: core.n(), found: n });
    }
    let mut prefs = Vec::with_capacity(n);
    for p in core.prefs() {
        let mut b = p.boundaries().to_vec();
        b.extend(core.n() + 1..=n);
        prefs.push(UniformPreference::new(n, b)?);
    }
    for i in core.n() + 1..=n {
        let mut b = vec![i];
        b.extend(i + 1..=n);
        prefs.push(UniformPreference::new(n, b)?);
    }
    Profile::new(prefs)
}

fn mat(rows: &[[(i64, i64); 3]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&(a, b)| rat(a, b)).collect()).collect()
}

fn families(polys: &[MatrixPolytope; 2]) -> [AffineFamily; 2] {
    let p = &polys[0];
    let y = AffineFamily {
        params: vec![("y".into(), p.entry(1, 1).scaled(&rat(1, 2)))],
        base: mat(&[[(1, 3), (1, 2), (1, 6)], [(1, 3), (0, 1), (2, 3)], [(1, 3), (1, 2), (1, 6)]]),
        coef: vec![mat(&[[(0, 1), (-1, 1), (1, 1)], [(0, 1), (2, 1), (-2, 1)], [(0, 1), (-1, 1), (1, 1)]])],
        vertices: vec![vec![int(0)], vec![rat(1, 6)]],
    };
    let q = &polys[1];
    let mut w = q.entry(0, 0).scaled(&int(-1));
    w.add_constant(&rat(1, 2));
    let mut z = q.entry(0, 2);
    z.add_constant(&rat(-1, 4));
    let wz = AffineFamily {
        params: vec![("w".into(), w), ("z".into(), z)],
        base: mat(&[[(1, 2), (1, 4), (1, 4)], [(1, 2), (0, 1), (1, 2)], [(0, 1), (3, 4), (1, 4)]]),
        coef: vec![
            mat(&[[(-1, 1), (1, 1), (0, 1)], [(-1, 1), (1, 1), (0, 1)], [(2, 1), (-2, 1), (0, 1)]]),
            mat(&[[(0, 1), (-1, 1), (1, 1)], [(0, 1), (2, 1), (-2, 1)], [(0, 1), (-1, 1), (1, 1)]]),
        ],
        // The region is 0 <= w <= 1/6, -w/2 <= z <= 1/12.
        vertices: [(0, 0), (1, -1), (1, 1), (0, 1)]
            .iter()
            .map(|&(a, b)| vec![rat(a, 6), rat(b, 12)])
            .collect(),
    };
    [y, wz]
}

pub fn verify_theorem1(n: usize) -> Result<Theorem1Report> {
    if n < 3 {
        return Err(Error::InvalidProfile(format!("the construction needs n >= 3, got {n}")));
    }
    limits::check("theorem 1 padding", n, limits::theorem1_guard())?;
    let profiles = theorem1_profiles();
    let mut transcript = Vec::new();
    let fail = |detail: String| Err(Error::CertificationFailed { tag: "theorem 1".into(), detail });

    // Envy-free sets and their parametrisations.
    let mut ef = Vec::new();
    for p in &profiles {
        let mut poly = MatrixPolytope::bistochastic(3)?;
        poly.add_ef(p)?;
        ef.push(poly);
    }
    let ef: [MatrixPolytope; 2] = ef.try_into().expect("two polytopes");
    let fams = families(&ef);
    let mut ef_reports = Vec::new();
    for (k, (poly, fam)) in ef.iter().zip(&fams).enumerate() {
        let report = fam.check(poly)?;
        let ranges: Vec<String> = report
            .param_ranges
            .iter()
            .map(|(name, lo, hi)| format!("{name} in [{}, {}]", crate::rational::short(lo), crate::rational::short(hi)))
            .collect();
        transcript.push(format!("PROFILE {}\n{}EF set: {}", k + 1, profiles[k], ranges.join(", ")));
        ef_reports.push(report);
    }
    // The second region is not a box: its lower z edge is z = -w/2.
    let (w, z) = (&fams[1].params[0].1, &fams[1].params[1].1);
    let (edge, _) = ef[1].expr_range(&z.clone().plus(&w.scaled(&rat(1, 2))))?;
    if edge != int(0) {
        return fail(format!("z + w/2 reaches {edge} on the profile 2 EF set"));
    }
    transcript.push("PROFILE 2 EF region: 0 <= w <= 1/6 and -w/2 <= z <= 1/12 (z < 0 only when w > 0)".into());

    // Adding the hull of Pareto-efficient matchings pins a single point.
    let mut derivations = Vec::new();
    for (k, p) in profiles.iter().enumerate() {
        let mut poly = ef[k].clone();
        poly.add_epe_hull(p)?;
        let resolution = poly.resolve()?;
        let Some(m) = resolution.unique() else {
            return fail(format!("EF and EPE do not pin profile {}", k + 1));
        };
        let expected = fams[k].at(&vec![int(0); fams[k].params.len()])?;
        if *m != expected {
            return fail(format!("profile {} resolves to an unexpected matrix", k + 1));
        }
        transcript.push(format!("PROFILE {} EF+EPE: unique\n{m}", k + 1));
        derivations.push(CertifiedDerivation {
            name: format!("P{}", k + 1),
            profile: p.clone(),
            polytope: poly,
            oe_zero: Vec::new(),
            resolution,
        });
    }
    let derivations: [CertifiedDerivation; 2] = derivations.try_into().expect("two derivations");

    let r1 = derivations[0].resolution.unique().expect("unique").row(2).to_vec();
    let r2 = derivations[1].resolution.unique().expect("unique").row(2).to_vec();
    let mut dominance = Vec::new();
    for p in &profiles {
        let v = sd_compare(&r1, &r2, p.pref(2))?;
        transcript.push(format!("agent 3 under {}: profile-1 row vs profile-2 row: {v:?}", p.pref(2)));
        if v != SdVerdict::DominatesStrictly {
            return fail(format!("agent 3's rows are {v:?} under {}", p.pref(2)));
        }
        dominance.push((p.pref(2).clone(), v));
    }
    transcript.push(
        "agent 3 with report {o1 o2},o3 gains by reporting o1,o2,o3: no EF and EPE mechanism is weakly strategyproof".into(),
    );

    let padding = if n > 3 { Some(check_padding(&profiles, n, &mut transcript)?) } else { None };
    transcript.push("THEOREM 1: VERIFIED".into());
    Ok(Theorem1Report { n, ef_families: ef_reports.try_into().expect("two reports"), derivations, dominance, padding, transcript })
}

fn check_padding(profiles: &[Profile; 2], n: usize, transcript: &mut Vec<String>) -> Result<PaddingReport> {
    let mut counts = [0; 2];
    for (k, core) in profiles.iter().enumerate() {
        let padded = padded_profile(core, n)?;
        let pe = enumerate_pe_matchings(&padded)?;
        if let Some(m) = pe.iter().find(|m| (3..n).any(|i| m.object_of(i) != i)) {
            return Err(Error::CertificationFailed {
                tag: "theorem 1 padding".into(),
                detail: format!("Pareto-efficient matching {m} moves a padding agent"),
            });
        }
        let mut restricted: Vec<Matching> =
            pe.iter().map(|m| Matching::new(m.objects()[..3].to_vec())).collect::<Result<_>>()?;
        restricted.sort();
        if restricted != enumerate_pe_matchings(core)? {
            return Err(Error::CertificationFailed {
                tag: "theorem 1 padding".into(),
                detail: "padded efficient matchings differ from the core ones".into(),
            });
        }
        counts[k] = pe.len();
        transcript.push(format!(
            "padded profile {} (n = {n}): all {} Pareto-efficient matchings give agent i object o_i for i >= 4 and restrict to the core ones",
            k + 1,
            pe.len()
        ));
    }
    Ok(PaddingReport { n, pe_matchings: counts })
}

