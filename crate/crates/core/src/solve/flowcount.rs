//! Instances where, once forced edges are fixed, every vertex has in-degree
//! at most its out-degree (or every vertex at least). Summed over the free
//! edges the imbalance is zero, so each vertex must be exactly balanced; the
//! balanced patterns are then solved by 2-SAT.
//!
//! Covers `i-in-j` with `i < j/2` plus synchronizers or other zero-flow
//! duplicators, the reversed family, and the `{0, 1, j}` and `{0, j-1, j}`
//! families once their terminators have propagated.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::{validate, Instance, Orientation};
use crate::relation::Relation;

use super::csp::{Constraint, Pred};
use super::two_sat::{add_constraint, TwoSat};

/// Allowed assignments of one vertex's incident edges.
struct Local {
    /// Distinct incident edges; bit `k` of a pattern is the direction of
    /// `edges[k]` (`true` = A→B).
    edges: Vec<usize>,
    /// `+1` if A→B points into the vertex, `-1` if out, `0` for loops.
    sign: Vec<i64>,
    patterns: Vec<u64>,
}

fn local(inst: &Instance, v: usize) -> Local {
    let mut edges: Vec<usize> = Vec::new();
    let mut slot = Vec::with_capacity(inst.arity(v));
    for p in 0..inst.arity(v) {
        let (e, side) = inst.slot(v, p);
        let k = match edges.iter().position(|&x| x == e) {
            Some(k) => k,
            None => {
                edges.push(e);
                edges.len() - 1
            }
        };
        slot.push((k, side));
    }
    let sign = edges.iter().map(|&e| if inst.edge(e).is_loop() { 0 } else if inst.edge(e).b.vertex == v { 1 } else { -1 }).collect();
    let mut patterns = BTreeSet::new();
    'words: for w in inst.relation(v).words() {
        let mut pat = 0u64;
        let mut set = 0u64;
        for (p, &(k, side)) in slot.iter().enumerate() {
            // Port bit = direction XOR (port is on side A).
            let dir = ((w >> p) & 1 == 1) ^ (side == 0);
            if set >> k & 1 == 1 && (pat >> k & 1 == 1) != dir {
                continue 'words;
            }
            set |= 1 << k;
            pat |= (dir as u64) << k;
        }
        patterns.insert(pat);
    }
    Local { edges, sign, patterns: patterns.into_iter().collect() }
}

impl Local {
    fn consistent(&self, pat: u64, fixed: &[Option<bool>]) -> bool {
        self.edges.iter().enumerate().all(|(k, &e)| fixed[e].is_none_or(|d| (pat >> k & 1 == 1) == d))
    }

    /// Imbalance (in minus out) over free edges.
    fn net(&self, pat: u64, fixed: &[Option<bool>]) -> i64 {
        self.edges
            .iter()
            .enumerate()
            .filter(|&(_, &e)| fixed[e].is_none())
            .map(|(k, _)| if pat >> k & 1 == 1 { self.sign[k] } else { -self.sign[k] })
            .sum()
    }
}

pub fn solve_net_flow(inst: &Instance) -> Result<Option<Orientation>> {
    let n = inst.num_vertices();
    let m = inst.num_edges();
    let mut locals: Vec<Local> = (0..n).map(|v| local(inst, v)).collect();
    let mut fixed: Vec<Option<bool>> = vec![None; m];
    // Unit propagation.
    let mut changed = true;
    while changed {
        changed = false;
        for l in &mut locals {
            l.patterns.retain(|&p| l.edges.iter().enumerate().all(|(k, &e)| fixed[e].is_none_or(|d| (p >> k & 1 == 1) == d)));
            if l.patterns.is_empty() {
                return Ok(None);
            }
            for (k, &e) in l.edges.iter().enumerate() {
                if fixed[e].is_some() {
                    continue;
                }
                let first = l.patterns[0] >> k & 1;
                if l.patterns.iter().all(|&p| p >> k & 1 == first) {
                    fixed[e] = Some(first == 1);
                    changed = true;
                }
            }
        }
    }
    let range: Vec<(i64, i64)> = locals
        .iter()
        .map(|l| {
            let nets = l.patterns.iter().filter(|&&p| l.consistent(p, &fixed)).map(|&p| l.net(p, &fixed));
            nets.fold((i64::MAX, i64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)))
        })
        .collect();
    if !range.iter().all(|r| r.1 <= 0) && !range.iter().all(|r| r.0 >= 0) {
        return Err(Error::Precondition("vertex imbalances do not all have the same sign".into()));
    }
    let mut ts = TwoSat::new(m);
    for (e, f) in fixed.iter().enumerate() {
        if let Some(d) = *f {
            ts.add_clause((e, d), (e, d));
        }
    }
    for l in &locals {
        let free: Vec<usize> = (0..l.edges.len()).filter(|&k| fixed[l.edges[k]].is_none()).collect();
        if free.is_empty() {
            continue;
        }
        let words = l.patterns.iter().filter(|&&p| l.net(p, &fixed) == 0).map(|&p| {
            free.iter().enumerate().fold(0u64, |w, (i, &k)| w | ((p >> k & 1) << i))
        });
        let rel = Relation::new(free.len(), words)?;
        let c = Constraint { lits: free.iter().map(|&k| (l.edges[k], false)).collect(), pred: Pred::Words(rel) };
        if !add_constraint(&mut ts, &c)? {
            return Ok(None);
        }
    }
    let Some(dir) = ts.solve() else {
        return Ok(None);
    };
    let o = Orientation(dir);
    if !validate(inst, &o).is_empty() {
        return Err(Error::Internal("net-flow solver produced an invalid orientation".into()));
    }
    Ok(Some(o))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstanceBuilder;
    use crate::kind::{Direction, VertexKind};
    use crate::random::general_skeleton;
    use crate::solve::brute::solve_brute;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_in_three_pair_is_starved() {
        // Every 1-in-3 takes less than it gives, so none can appear.
        let mut b = InstanceBuilder::new();
        let x = b.add_vertex("x", VertexKind::exactly(1, 3));
        let y = b.add_vertex("y", VertexKind::exactly(1, 3));
        for p in 0..3 {
            b.add_edge(x, p, y, p);
        }
        assert!(solve_net_flow(&b.build().unwrap()).unwrap().is_none());
    }

    #[test]
    fn synchronizer_ring() {
        let mut b = InstanceBuilder::new();
        let s: Vec<usize> = (0..3).map(|i| b.add_vertex(format!("s{i}"), VertexKind::Synchronizer)).collect();
        for i in 0..3 {
            b.add_edge(s[i], 2, s[(i + 1) % 3], 0);
            b.add_edge(s[i], 3, s[(i + 1) % 3], 1);
        }
        let inst = b.build().unwrap();
        assert_eq!(solve_net_flow(&inst).unwrap().is_some(), solve_brute(&inst).unwrap().is_some());
    }

    #[test]
    fn mixed_signs_are_rejected() {
        let mut b = InstanceBuilder::new();
        let x = b.add_vertex("x", VertexKind::exactly(1, 3));
        let y = b.add_vertex("y", VertexKind::exactly(2, 3));
        for p in 0..3 {
            b.add_edge(x, p, y, p);
        }
        assert!(matches!(solve_net_flow(&b.build().unwrap()), Err(Error::Precondition(_))));
    }

    #[test]
    fn random_families_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t in 0..1000 {
            let family = t % 4;
            let sk = general_skeleton(&mut rng, 2 + t % 5, 3 + t % 8, true);
            let inst = sk
                .instance(&mut rng, |r, d| {
                    if d == 4 && r.gen_bool(0.5) {
                        return VertexKind::Synchronizer;
                    }
                    let i = match family {
                        // i < j/2, or 1-in-2.
                        0 => {
                            if d == 2 {
                                1
                            } else {
                                r.gen_range(0..=(d - 1) / 2)
                            }
                        }
                        1 => {
                            if d == 2 {
                                1
                            } else {
                                d - r.gen_range(0..=(d - 1) / 2)
                            }
                        }
                        // {0, 1, j} and {0, j-1, j}.
                        2 => [0, 1.min(d), d][r.gen_range(0..3)],
                        _ => [0, d.saturating_sub(1), d][r.gen_range(0..3)],
                    };
                    if d == 1 {
                        VertexKind::Constant(if i == 1 { Direction::In } else { Direction::Out })
                    } else {
                        VertexKind::exactly(i, d)
                    }
                })
                .unwrap();
            let got = solve_net_flow(&inst).unwrap();
            assert_eq!(got.is_some(), solve_brute(&inst).unwrap().is_some(), "case {t}");
        }
    }
}
