//! Instance, matrix and job files.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use uassign::rational::{format_rational, parse_rational};
use uassign::{AssignmentMatrix, Profile, Rational, UniformPreference};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentEntry {
    #[serde(default)]
    pub name: String,
    pub classes: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub n: usize,
    pub agents: Vec<AgentEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Job {
    #[serde(default)]
    pub name: String,
    pub deadline: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobInstance {
    pub jobs: Vec<Job>,
}

/// 1-based line of the `k`-th occurrence of `key` in `text`, if any.
fn line_of_key(text: &str, key: &str, k: usize) -> Option<usize> {
    let needle = format!("\"{key}\"");
    let pos = text.match_indices(&needle).nth(k)?.0;
    Some(text[..pos].matches('\n').count() + 1)
}

fn at(text: &str, key: &str, k: usize, field: String, msg: String) -> CliError {
    CliError::Input { line: line_of_key(text, key, k), field, msg }
}

fn json_error(e: serde_json::Error) -> CliError {
    CliError::Input { line: Some(e.line()), field: format!("column {}", e.column()), msg: e.to_string() }
}

pub fn parse_profile(text: &str) -> Result<Profile, CliError> {
    let inst: Instance = serde_json::from_str(text).map_err(json_error)?;
    instance_to_profile(&inst, text)
}

fn instance_to_profile(inst: &Instance, text: &str) -> Result<Profile, CliError> {
    if inst.n == 0 {
        return Err(at(text, "n", 0, "n".into(), "n must be at least 1".into()));
    }
    if inst.agents.len() != inst.n {
        return Err(at(
            text,
            "agents",
            0,
            "agents".into(),
            format!("{} agents listed for n = {}", inst.agents.len(), inst.n),
        ));
    }
    let mut prefs = Vec::with_capacity(inst.n);
    for (k, agent) in inst.agents.iter().enumerate() {
        let field = format!("agents[{k}].classes");
        let mut next = 1;
        for (c, class) in agent.classes.iter().enumerate() {
            for &o in class {
                if o != next {
                    let msg = if o == 0 || o > inst.n {
                        format!("object {o} is out of range 1..={}", inst.n)
                    } else {
                        format!("expected object {next}, found {o}: classes must list o1..o{} in order", inst.n)
                    };
                    return Err(at(text, "classes", k, format!("{field}[{c}]"), msg));
                }
                next += 1;
            }
            if class.is_empty() {
                return Err(at(text, "classes", k, format!("{field}[{c}]"), "empty class".into()));
            }
        }
        if next != inst.n + 1 {
            return Err(at(text, "classes", k, field, format!("objects {next}..={} are missing", inst.n)));
        }
        let pref = UniformPreference::from_classes(inst.n, &agent.classes)
            .map_err(|e| at(text, "classes", k, field.clone(), e.to_string()))?;
        prefs.push(pref);
    }
    Profile::new(prefs).map_err(CliError::Core)
}

pub fn profile_to_instance(profile: &Profile) -> Instance {
    Instance {
        n: profile.n(),
        agents: profile
            .prefs()
            .iter()
            .enumerate()
            .map(|(i, p)| AgentEntry { name: format!("a{}", i + 1), classes: p.to_classes() })
            .collect(),
    }
}

/// One agent per line.
pub fn serialize_profile(profile: &Profile) -> String {
    let inst = profile_to_instance(profile);
    let agents: Vec<String> = inst
        .agents
        .iter()
        .map(|a| format!("    {}", serde_json::to_string(a).expect("plain data")))
        .collect();
    format!("{{\n  \"n\": {},\n  \"agents\": [\n{}\n  ]\n}}\n", inst.n, agents.join(",\n"))
}

pub fn parse_jobs(text: &str) -> Result<JobInstance, CliError> {
    serde_json::from_str(text).map_err(json_error)
}

/// Job `j` with deadline `d` ranks slots `1..=d` strictly and is indifferent
/// among the rest.
pub fn jobs_to_profile(jobs: &JobInstance) -> Result<Profile, CliError> {
    let n = jobs.jobs.len();
    if n == 0 {
        return Err(CliError::Input { line: None, field: "jobs".into(), msg: "no jobs".into() });
    }
    let prefs = jobs
        .jobs
        .iter()
        .enumerate()
        .map(|(k, j)| {
            if j.deadline == 0 || j.deadline > n {
                return Err(CliError::Input {
                    line: None,
                    field: format!("jobs[{k}].deadline"),
                    msg: format!("deadline {} is out of range 1..={n}", j.deadline),
                });
            }
            UniformPreference::from_deadline(n, j.deadline).map_err(CliError::Core)
        })
        .collect::<Result<_, _>>()?;
    Profile::new(prefs).map_err(CliError::Core)
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn row_json(row: &[Rational]) -> Value {
    Value::Array(row.iter().map(rational_json).collect())
}

pub fn matrix_json(m: &AssignmentMatrix) -> Value {
    Value::Array(m.rows().iter().map(|r| row_json(r)).collect())
}

pub fn serialize_matrix(m: &AssignmentMatrix) -> String {
    let rows: Vec<String> = m.rows().iter().map(|r| format!("  {}", row_json(r))).collect();
    format!("[\n{}\n]\n", rows.join(",\n"))
}

/// An array of rows of `"a/b"` strings; bare integers are accepted too.
pub fn parse_matrix(text: &str) -> Result<AssignmentMatrix, CliError> {
    let v: Value = serde_json::from_str(text).map_err(json_error)?;
    let bad = |field: String, msg: &str| CliError::Input { line: None, field, msg: msg.into() };
    let rows = v.as_array().ok_or_else(|| bad("matrix".into(), "expected an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let cells = row.as_array().ok_or_else(|| bad(format!("matrix[{i}]"), "expected an array"))?;
        let mut r = Vec::with_capacity(cells.len());
        for (j, c) in cells.iter().enumerate() {
            let field = format!("matrix[{i}][{j}]");
            let s = match c {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_i64() => n.to_string(),
                _ => return Err(bad(field, "expected an \"a/b\" string")),
            };
            r.push(parse_rational(&s).map_err(|e| CliError::Input { line: None, field, msg: e.to_string() })?);
        }
        out.push(r);
    }
    AssignmentMatrix::new(out).map_err(CliError::Core)
}
