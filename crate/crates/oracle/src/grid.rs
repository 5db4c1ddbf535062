//! Exhaustive dominance search over doubly stochastic matrices whose entries
//! are multiples of `1/d`, in integer units of `1/d`.

/// Every way to split `total` into `parts` non-negative integers.
fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn prefixes(row: &[i64], bounds: &[usize]) -> Vec<i64> {
    bounds.iter().map(|&b| row[..b].iter().sum()).collect()
}

/// A matrix with entries in units of `1/d` that stochastically dominates
/// `p` (also in units of `1/d`): every agent weakly better off, some agent
/// strictly.
pub fn grid_dominator(p: &[Vec<i64>], d: i64, prefs: &[Vec<usize>]) -> Option<Vec<Vec<i64>>> {
    let n = p.len();
    let rows = compositions(d, n);
    // Candidate rows per agent: those weakly dominating the agent's own row.
    let cands: Vec<Vec<(Vec<i64>, bool)>> = (0..n)
        .map(|i| {
            let own = prefixes(&p[i], &prefs[i]);
            rows.iter()
                .filter_map(|r| {
                    let s = prefixes(r, &prefs[i]);
                    s.iter().zip(&own).all(|(a, b)| a >= b).then(|| (r.clone(), s != own))
                })
                .collect()
        })
        .collect();
    let mut cols = vec![d; n];
    let mut pick = Vec::with_capacity(n);
    search(&cands, &mut cols, &mut pick, false)
}

fn search(
    cands: &[Vec<(Vec<i64>, bool)>],
    cols: &mut [i64],
    pick: &mut Vec<Vec<i64>>,
    strict: bool,
) -> Option<Vec<Vec<i64>>> {
    let i = pick.len();
    if i == cands.len() {
        return (strict && cols.iter().all(|&c| c == 0)).then(|| pick.clone());
    }
    for (row, s) in &cands[i] {
        if row.iter().zip(cols.iter()).all(|(a, c)| a <= c) {
            for (c, a) in cols.iter_mut().zip(row) {
                *c -= a;
            }
            pick.push(row.clone());
            let found = search(cands, cols, pick, strict || *s);
            pick.pop();
            for (c, a) in cols.iter_mut().zip(row) {
                *c += a;
            }
            if found.is_some() {
                return found;
            }
        }
    }
    None
}
