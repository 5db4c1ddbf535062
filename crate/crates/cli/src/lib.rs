//! Command-line front end for `uassign`.
//!
//! Exit codes: 0 when the command ran and the checked property holds, 1 when
//! it ran and the property fails, 2 on bad usage or unreadable input.

pub mod certs;
pub mod io;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use uassign::axioms::{self, Axiom};
use uassign::lottery::{bvn_decompose, pe_decompose, PeDecomposition};
use uassign::mechanisms::{self, eps_assign};
use uassign::repro::{verify_example31, verify_theorem1, verify_theorem2};
use uassign::strategy::{check_sp_in, sweep_in, ReportDomain, Violation};
use uassign::Profile;

pub use io::{jobs_to_profile, parse_jobs, parse_matrix, parse_profile, serialize_matrix, serialize_profile};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{field}{}: {msg}", .line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Input { line: Option<usize>, field: String, msg: String },

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] uassign::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(uassign::Error::CertificationFailed { .. }) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "uassign", version, about = "Random assignment on the uniform preference domain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MechanismArg {
    Eps,
    Ps,
    Rp,
    Uniform,
}

impl MechanismArg {
    fn name(self) -> &'static str {
        match self {
            MechanismArg::Eps => "eps",
            MechanismArg::Ps => "ps",
            MechanismArg::Rp => "rp",
            MechanismArg::Uniform => "uniform",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AxiomArg {
    Oe,
    Epe,
    Ef,
    Ete,
    Pe,
}

impl From<AxiomArg> for Axiom {
    fn from(a: AxiomArg) -> Self {
        match a {
            AxiomArg::Oe => Axiom::OrdinalEfficiency,
            AxiomArg::Epe => Axiom::ExPostEfficiency,
            AxiomArg::Ef => Axiom::EnvyFreeness,
            AxiomArg::Ete => Axiom::EqualTreatment,
            AxiomArg::Pe => Axiom::ParetoEfficiency,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DomainArg {
    Uniform,
    Deadline,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a mechanism on an instance and print its assignment matrix.
    Solve {
        #[arg(long, value_enum)]
        mechanism: MechanismArg,
        instance: PathBuf,
        /// Print the matrix as JSON instead of a table.
        #[arg(long)]
        json: bool,
        /// Print the EPS eating stages.
        #[arg(long)]
        trace: bool,
    },
    /// Check an axiom for a matrix on an instance.
    Check {
        #[arg(long, value_enum)]
        axiom: AxiomArg,
        instance: PathBuf,
        matrix: PathBuf,
        /// Write the certificate as JSON to this file.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Write a matrix as a lottery over matchings.
    Decompose {
        /// Use Pareto-efficient matchings only.
        #[arg(long)]
        pe: bool,
        instance: PathBuf,
        matrix: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Search for profitable misreports.
    Manipulate {
        #[arg(long, value_enum)]
        mechanism: MechanismArg,
        /// Sweep every profile of this size instead of a single instance.
        #[arg(long)]
        sweep: Option<usize>,
        #[arg(long, value_enum, default_value = "uniform")]
        domain: DomainArg,
        instance: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Reproduce a certified result.
    Repro {
        #[command(subcommand)]
        which: Repro,
    },
    /// Convert a job-deadline file to an instance.
    Jobs2profile { jobs: PathBuf },
}

#[derive(Debug, Subcommand)]
enum Repro {
    /// Two inequivalent OE and EF matrices on one profile.
    Example31 {
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// EF and EPE versus weak strategyproofness.
    Thm1 {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// OE, ETE and strategyproofness.
    Thm2 {
        #[arg(long)]
        cert: Option<PathBuf>,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_profile(path: &Path) -> Result<Profile, CliError> {
    parse_profile(&read(path)?).map_err(|e| match e {
        CliError::Input { line, field, msg } => {
            CliError::Input { line, field: format!("{}: {field}", path.display()), msg }
        }
        other => other,
    })
}

fn write_cert(path: Option<&PathBuf>, value: Value, out: &mut dyn Write) -> Result<(), CliError> {
    if let Some(path) = path {
        let text = serde_json::to_string_pretty(&value).expect("plain data") + "\n";
        std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source })?;
        emit(out, &format!("certificate written to {}", path.display()))?;
    }
    Ok(())
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    let text = if text.ends_with('\n') { text.to_string() } else { format!("{text}\n") };
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Solve { mechanism, instance, json, trace } => {
            let profile = load_profile(&instance)?;
            let mech = mechanisms::by_name(mechanism.name()).expect("every listed mechanism exists");
            let p = mech.assign(&profile)?;
            if trace {
                if let MechanismArg::Eps = mechanism {
                    let (_, t) = eps_assign(&profile)?;
                    for (k, s) in t.stages.iter().enumerate() {
                        let agents: Vec<String> = s.bottleneck.agents.iter().map(|a| (a + 1).to_string()).collect();
                        emit(
                            out,
                            &format!(
                                "stage {}: bottleneck agents {{{}}} at ratio {}",
                                k + 1,
                                agents.join(" "),
                                uassign::rational::short(&s.bottleneck.ratio)
                            ),
                        )?;
                    }
                }
            }
            if json {
                emit(out, &serialize_matrix(&p))?;
            } else {
                emit(out, &p.to_string())?;
            }
            Ok(0)
        }
        Command::Check { axiom, instance, matrix, cert } => {
            let profile = load_profile(&instance)?;
            let p = parse_matrix(&read(&matrix)?)?;
            let v = axioms::check(axiom.into(), &p, &profile)?;
            emit(out, &v.to_string())?;
            write_cert(cert.as_ref(), certs::verdict_json(&v), out)?;
            Ok(if v.holds { 0 } else { 1 })
        }
        Command::Decompose { pe, instance, matrix, cert } => {
            let profile = load_profile(&instance)?;
            let p = parse_matrix(&read(&matrix)?)?;
            if p.n() != profile.n() {
                return Err(uassign::Error::SizeMismatch { expected: profile.n(), found: p.n() }.into());
            }
            if !pe {
                let l = bvn_decompose(&p)?;
                emit(out, &l.to_string())?;
                write_cert(cert.as_ref(), certs::lottery_json(&l), out)?;
                return Ok(0);
            }
            match pe_decompose(&p, &profile)? {
                PeDecomposition::Lottery(l) => {
                    emit(out, &l.to_string())?;
                    write_cert(cert.as_ref(), certs::lottery_json(&l), out)?;
                    Ok(0)
                }
                PeDecomposition::Infeasible { system, certificate } => {
                    emit(out, "no lottery over Pareto-efficient matchings gives this matrix")?;
                    write_cert(cert.as_ref(), certs::farkas_json(&system, &certificate), out)?;
                    Ok(1)
                }
            }
        }
        Command::Manipulate { mechanism, sweep, domain, instance, cert } => {
            let mech = mechanisms::by_name(mechanism.name()).expect("every listed mechanism exists");
            let domain = match domain {
                DomainArg::Uniform => ReportDomain::Uniform,
                DomainArg::Deadline => ReportDomain::Deadline,
            };
            match (sweep, instance) {
                (Some(n), None) => {
                    let s = sweep_in(mech.as_ref(), n, domain)?;
                    emit(out, &s.to_string())?;
                    write_cert(cert.as_ref(), certs::sweep_json(&s), out)?;
                    Ok(if s.sp_violations > 0 { 1 } else { 0 })
                }
                (None, Some(path)) => {
                    let profile = load_profile(&path)?;
                    let reports = check_sp_in(mech.as_ref(), &profile, domain)?;
                    let found: Vec<_> = reports.iter().filter(|r| r.verdict != Violation::None).collect();
                    if found.is_empty() {
                        emit(out, "no profitable misreport")?;
                    }
                    for r in &found {
                        emit(out, &r.to_string())?;
                    }
                    let json = Value::Array(found.iter().map(|r| certs::manipulation_json(r)).collect());
                    write_cert(cert.as_ref(), json, out)?;
                    Ok(if found.is_empty() { 0 } else { 1 })
                }
                _ => Err(CliError::Input {
                    line: None,
                    field: "manipulate".into(),
                    msg: "give either an instance or --sweep N".into(),
                }),
            }
        }
        Command::Repro { which } => {
            let (transcript, json, cert) = match which {
                Repro::Example31 { cert } => {
                    let r = verify_example31()?;
                    (r.transcript.clone(), certs::example31_json(&r), cert)
                }
                Repro::Thm1 { n, cert } => {
                    let r = verify_theorem1(n)?;
                    (r.transcript.clone(), certs::theorem1_json(&r), cert)
                }
                Repro::Thm2 { cert } => {
                    let r = verify_theorem2()?;
                    (r.transcript.clone(), certs::theorem2_json(&r), cert)
                }
            };
            write_cert(cert.as_ref(), json, out)?;
            emit(out, &transcript.join("\n"))?;
            Ok(0)
        }
        Command::Jobs2profile { jobs } => {
            let profile = jobs_to_profile(&parse_jobs(&read(&jobs)?)?)?;
            emit(out, &serialize_profile(&profile))?;
            Ok(0)
        }
    }
}
