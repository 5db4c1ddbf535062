use std::fmt;

use crate::error::{Error, Result};
use crate::preference::UniformPreference;

/// One uniform preference per agent; agents and objects are both `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    prefs: Vec<UniformPreference>,
}

impl Profile {
    pub fn new(prefs: Vec<UniformPreference>) -> Result<Self> {
        let n = prefs.len();
        if n == 0 {
            return Err(Error::InvalidProfile("no agents".into()));
        }
        for (i, p) in prefs.iter().enumerate() {
            if p.n() != n {
                return Err(Error::InvalidProfile(format!(
                    "agent {} ranks {} objects but there are {n} agents; balance the \
                     instance with dummy agents or objects",
                    i + 1,
                    p.n()
                )));
            }
        }
        Ok(Self { prefs })
    }

    /// Parses one list-notation preference per agent.
    pub fn parse(prefs: &[&str]) -> Result<Self> {
        Self::new(prefs.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>()?)
    }

    pub fn n(&self) -> usize {
        self.prefs.len()
    }

    pub fn pref(&self, agent: usize) -> &UniformPreference {
        &self.prefs[agent]
    }

    pub fn prefs(&self) -> &[UniformPreference] {
        &self.prefs
    }

    /// The profile with `agent`'s report replaced.
    pub fn with_report(&self, agent: usize, pref: UniformPreference) -> Result<Self> {
        if pref.n() != self.n() {
            return Err(Error::SizeMismatch { expected: self.n(), found: pref.n() });
        }
        let mut prefs = self.prefs.clone();
        prefs[agent] = pref;
        Ok(Self { prefs })
    }

    /// Agents whose reports differ between the two profiles.
    pub fn differing_agents(&self, other: &Profile) -> Vec<usize> {
        (0..self.n().min(other.n()))
            .filter(|&i| self.prefs[i] != other.prefs[i])
            .collect()
    }

    pub fn in_deadline_subdomain(&self) -> bool {
        self.prefs.iter().all(|p| p.in_deadline_subdomain())
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.prefs.iter().enumerate() {
            writeln!(f, "{}: {}", i + 1, p)?;
        }
        Ok(())
    }
}

/// Every profile of `n` agents over the uniform domain, agent 1 most
/// significant, each agent's preferences in canonical order.
pub fn enumerate_profiles(n: usize) -> Result<Vec<Profile>> {
    let prefs = crate::preference::enumerate_uniform_prefs(n)?;
    profiles_over(n, &prefs)
}

/// Every profile of `n` agents whose reports are drawn from `domain`.
pub fn profiles_over(n: usize, domain: &[UniformPreference]) -> Result<Vec<Profile>> {
    let k = domain.len();
    let total = k.checked_pow(n as u32).ok_or_else(|| Error::GuardExceeded {
        what: "profile enumeration",
        n,
        guard: 0,
    })?;
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; n];
    for _ in 0..total {
        out.push(Profile { prefs: digits.iter().map(|&d| domain[d].clone()).collect() });
        for pos in (0..n).rev() {
            digits[pos] += 1;
            if digits[pos] < k {
                break;
            }
            digits[pos] = 0;
        }
    }
    Ok(out)
}
