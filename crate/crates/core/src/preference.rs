//! The uniform weak-preference domain.
//!
//! Every agent ranks the objects in the common order `o_1, o_2, ..., o_n` and
//! only chooses where its indifference classes start and end. A preference is
//! therefore a composition of `n`, stored as the (1-based, inclusive) right
//! end of each class.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniformPreference {
    n: usize,
    boundaries: Vec<usize>,
}

impl UniformPreference {
    /// `boundaries` must be strictly increasing and end at `n`.
    pub fn new(n: usize, boundaries: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPreference("no objects".into()));
        }
        if boundaries.last() != Some(&n) {
            return Err(Error::InvalidPreference(format!(
                "boundaries {boundaries:?} must end at n = {n}"
            )));
        }
        let mut prev = 0;
        for &b in &boundaries {
            if b <= prev {
                return Err(Error::InvalidPreference(format!(
                    "boundaries {boundaries:?} are not strictly increasing from 1"
                )));
            }
            prev = b;
        }
        Ok(Self { n, boundaries })
    }

    /// Builds a preference from explicit classes of 1-based object labels,
    /// e.g. `[[1], [2, 3], [4]]` for `o1,{o2 o3},o4`.
    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let mut next = 1;
        let mut boundaries = Vec::with_capacity(classes.len());
        for (k, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidPreference(format!("class {} is empty", k + 1)));
            }
            for &obj in class {
                if obj != next {
                    return Err(Error::InvalidPreference(format!(
                        "class {} lists o{obj} where o{next} is expected; classes must cover \
                         o1..o{n} consecutively in the common order",
                        k + 1
                    )));
                }
                next += 1;
            }
            boundaries.push(next - 1);
        }
        if next - 1 != n {
            return Err(Error::InvalidPreference(format!(
                "classes cover o1..o{} but there are {n} objects",
                next - 1
            )));
        }
        Self::new(n, boundaries)
    }

    pub fn strict(n: usize) -> Self {
        Self { n, boundaries: (1..=n).collect() }
    }

    pub fn indifferent(n: usize) -> Self {
        Self { n, boundaries: vec![n] }
    }

    /// Singleton classes `o_1 .. o_d`, then the remaining objects as one class.
    pub fn from_deadline(n: usize, deadline: usize) -> Result<Self> {
        if deadline == 0 || deadline > n {
            return Err(Error::InvalidPreference(format!(
                "deadline {deadline} outside [1, {n}]"
            )));
        }
        let mut boundaries: Vec<usize> = (1..=deadline).collect();
        if deadline < n {
            boundaries.push(n);
        }
        Self::new(n, boundaries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based inclusive right ends of the classes.
    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn num_classes(&self) -> usize {
        self.boundaries.len()
    }

    /// 0-based object range of class `k`.
    pub fn class_range(&self, k: usize) -> Range<usize> {
        let start = if k == 0 { 0 } else { self.boundaries[k - 1] };
        start..self.boundaries[k]
    }

    pub fn classes(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.num_classes()).map(|k| self.class_range(k))
    }

    /// Class index of the 0-based object `obj`.
    pub fn class_of(&self, obj: usize) -> usize {
        self.boundaries.partition_point(|&b| b <= obj)
    }

    /// `a` strictly preferred to `b`.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.class_of(a) < self.class_of(b)
    }

    pub fn indifferent_between(&self, a: usize, b: usize) -> bool {
        self.class_of(a) == self.class_of(b)
    }

    /// Singleton classes followed by one terminal class of any size.
    pub fn in_deadline_subdomain(&self) -> bool {
        self.classes()
            .take(self.num_classes() - 1)
            .all(|r| r.len() == 1)
    }

    /// Explicit classes of 1-based labels.
    pub fn to_classes(&self) -> Vec<Vec<usize>> {
        self.classes().map(|r| r.map(|o| o + 1).collect()).collect()
    }
}

impl fmt::Display for UniformPreference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .classes()
            .map(|r| {
                if r.len() == 1 {
                    format!("o{}", r.start + 1)
                } else {
                    let inner: Vec<String> = r.map(|o| format!("o{}", o + 1)).collect();
                    format!("{{{}}}", inner.join(" "))
                }
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// All `2^(n-1)` uniform preferences over `n` objects, ordered
/// lexicographically by boundary list.
pub fn enumerate_uniform_prefs(n: usize) -> Result<Vec<UniformPreference>> {
    if n == 0 {
        return Err(Error::InvalidPreference("n must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(1 << (n - 1));
    let mut stack = Vec::with_capacity(n);
    extend_compositions(n, 0, &mut stack, &mut out);
    Ok(out)
}

fn extend_compositions(
    n: usize,
    last: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<UniformPreference>,
) {
    for b in last + 1..=n {
        stack.push(b);
        if b == n {
            out.push(UniformPreference { n, boundaries: stack.clone() });
        } else {
            extend_compositions(n, b, stack, out);
        }
        stack.pop();
    }
}

/// Distinct preferences reachable from deadlines `1..=n`, in deadline order.
pub fn deadline_prefs(n: usize) -> Vec<UniformPreference> {
    let mut out: Vec<UniformPreference> = Vec::new();
    for d in 1..=n {
        let p = UniformPreference::from_deadline(n, d).expect("deadline in range");
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}


impl std::str::FromStr for UniformPreference {
    type Err = Error;

    /// Parses the list notation `o1,{o2 o3},o4`; `n` is the largest label.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidPreference(format!("{s:?}: {msg}"));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let (class_text, tail) = if let Some(inner) = rest.strip_prefix('{') {
                let close = inner.find('}').ok_or_else(|| bad("unclosed '{'"))?;
                (&inner[..close], &inner[close + 1..])
            } else {
                match rest.find(',') {
                    Some(i) => (&rest[..i], &rest[i..]),
                    None => (rest, ""),
                }
            };
            let class = class_text
                .split_whitespace()
                .map(|tok| {
                    tok.strip_prefix('o')
                        .and_then(|d| d.parse::<usize>().ok())
                        .ok_or_else(|| bad(&format!("bad object label {tok:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            classes.push(class);
            let tail = tail.trim_start();
            rest = match tail.strip_prefix(',') {
                Some(t) => t.trim_start(),
                None if tail.is_empty() => tail,
                None => return Err(bad("expected ','")),
            };
        }
        let n = classes.iter().flatten().copied().max().ok_or_else(|| bad("empty"))?;
        Self::from_classes(n, &classes)
    }
}
