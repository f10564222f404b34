//! Top-down (or bottom-up) closed symmetric types.
//!
//! Every vertex first claims `max S` of its edges as incoming, which leaves
//! some edges undirected (no claim) and some bidirected (two claims). Paths
//! are then reversed until neither kind is left, or a cut proves that no
//! orientation exists.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::instance::{validate, Instance, Orientation};
use crate::relation::SymmetricSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Monotone {
    TopDown,
    BottomUp,
}

pub fn solve_monotone(inst: &Instance, mode: Monotone) -> Result<Option<Orientation>> {
    match mode {
        Monotone::TopDown => top_down(inst),
        Monotone::BottomUp => Ok(top_down(&inst.reversed())?.map(|o| o.reversed())),
    }
}

struct State {
    /// `claim[e][side]`: the endpoint counts `e` as incoming.
    claim: Vec<[bool; 2]>,
    /// Non-loop (edge, side) pairs per vertex.
    inc: Vec<Vec<(usize, usize)>>,
    ends: Vec<[usize; 2]>,
}

impl State {
    fn claims(&self, v: usize) -> usize {
        self.inc[v].iter().filter(|&&(e, s)| self.claim[e][s]).count()
    }

    fn all_claims(&self) -> Vec<usize> {
        (0..self.inc.len()).map(|v| self.claims(v)).collect()
    }

    /// Fix one undirected edge. `false` if the cut condition shows UNSAT.
    fn repair_undirected(&mut self) -> bool {
        let n = self.inc.len();
        let mut from: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut source: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for (e, c) in self.claim.iter().enumerate() {
            if self.ends[e][0] == usize::MAX || c[0] || c[1] {
                continue;
            }
            for side in 0..2 {
                let v = self.ends[e][side];
                if !seen[v] {
                    seen[v] = true;
                    source[v] = Some((e, side));
                    queue.push_back(v);
                }
            }
        }
        while let Some(x) = queue.pop_front() {
            for &(e, side) in &self.inc[x] {
                if !self.claim[e][side] {
                    continue;
                }
                if self.claim[e][1 - side] {
                    // x <-> other: reverse the path back to the source.
                    self.claim[e][side] = false;
                    let mut cur = x;
                    while let Some((pe, prev)) = from[cur] {
                        let ps = if self.ends[pe][0] == prev { 0 } else { 1 };
                        self.claim[pe][ps] = false;
                        self.claim[pe][1 - ps] = true;
                        cur = prev;
                    }
                    let (ue, us) = source[cur].expect("path starts at a source");
                    self.claim[ue][us] = true;
                    return true;
                }
                let y = self.ends[e][1 - side];
                if !seen[y] {
                    seen[y] = true;
                    from[y] = Some((e, x));
                    queue.push_back(y);
                }
            }
        }
        false
    }

    /// Fix one bidirected edge `eb` by a maximal walk.
    fn repair_bidirected(&mut self, eb: usize) -> usize {
        let mut used = vec![false; self.claim.len()];
        // (edge, vertex we arrive at)
        let mut walk: Vec<(usize, usize)> = vec![(eb, self.ends[eb][1])];
        used[eb] = true;
        let mut x = self.ends[eb][1];
        loop {
            let next = self.inc[x].iter().copied().find(|&(e, s)| !used[e] && self.claim[e][1 - s]);
            let Some((e, s)) = next else { break };
            used[e] = true;
            x = self.ends[e][1 - s];
            walk.push((e, x));
        }
        let t = walk.iter().rposition(|&(e, _)| self.claim[e][0] && self.claim[e][1]).expect("walk starts bidirected");
        let (e0, v0) = walk[t];
        let s0 = if self.ends[e0][1] == v0 { 1 } else { 0 };
        self.claim[e0][s0] = false;
        for &(e, v) in &walk[t + 1..] {
            let s = if self.ends[e][1] == v { 1 } else { 0 };
            self.claim[e][s] = false;
            self.claim[e][1 - s] = true;
        }
        x
    }
}

fn top_down(inst: &Instance) -> Result<Option<Orientation>> {
    let n = inst.num_vertices();
    let mut specs: Vec<SymmetricSpec> = Vec::with_capacity(n);
    for v in 0..n {
        let s = inst
            .kind(v)
            .as_symmetric()
            .ok_or_else(|| Error::Precondition(format!("vertex {} is not symmetric", inst.name(v))))?;
        if !s.is_top_down_closed() {
            return Err(Error::Precondition(format!("{s} is not closed for this mode")));
        }
        specs.push(s);
    }
    let mut ends = vec![[usize::MAX; 2]; inst.num_edges()];
    let mut inc = vec![Vec::new(); n];
    for (e, edge) in inst.edges().iter().enumerate() {
        if edge.is_loop() {
            specs[edge.a.vertex] = specs[edge.a.vertex].add_self_loop();
            continue;
        }
        ends[e] = [edge.a.vertex, edge.b.vertex];
        inc[edge.a.vertex].push((e, 0));
        inc[edge.b.vertex].push((e, 1));
    }
    if specs.iter().any(|s| s.in_set.is_empty()) {
        return Ok(None);
    }
    let mut st = State { claim: vec![[false; 2]; inst.num_edges()], inc, ends };
    for v in 0..n {
        let m = *specs[v].in_set.last().unwrap();
        for &(e, s) in st.inc[v].iter().take(m) {
            st.claim[e][s] = true;
        }
    }
    let before = st.all_claims();
    loop {
        let undirected = (0..st.claim.len()).any(|e| st.ends[e][0] != usize::MAX && !st.claim[e][0] && !st.claim[e][1]);
        if !undirected {
            break;
        }
        if !st.repair_undirected() {
            return Ok(None);
        }
        if st.all_claims() != before {
            return Err(Error::Internal("path reversal changed an in-degree".into()));
        }
    }
    while let Some(eb) = (0..st.claim.len()).find(|&e| st.claim[e][0] && st.claim[e][1]) {
        let end = st.repair_bidirected(eb);
        if !specs[end].contains(st.claims(end)) {
            return Err(Error::Internal("walk end left its admissible set".into()));
        }
    }
    let dir: Vec<bool> = st.claim.iter().map(|c| c[1]).collect();
    let o = Orientation(dir);
    if !validate(inst, &o).is_empty() {
        return Err(Error::Internal("monotone repair produced an invalid orientation".into()));
    }
    Ok(Some(o))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstanceBuilder;
    use crate::kind::{Direction, VertexKind};
    use crate::solve::brute::solve_brute;

    fn triangle(k: VertexKind) -> Instance {
        let mut b = InstanceBuilder::new();
        let vs: Vec<usize> = (0..3).map(|i| b.add_vertex(format!("v{i}"), k.clone())).collect();
        for i in 0..3 {
            b.add_edge(vs[i], 1, vs[(i + 1) % 3], 0);
        }
        b.build().unwrap()
    }

    #[test]
    fn small_cases_match_oracle() {
        let t = triangle(VertexKind::sym(2, &[1, 2]));
        assert_eq!(solve_monotone(&t, Monotone::TopDown).unwrap().is_some(), solve_brute(&t).unwrap().is_some());
        let mut b = InstanceBuilder::new();
        let vs: Vec<usize> = (0..4).map(|i| b.add_vertex(format!("v{i}"), VertexKind::sym(2, &[1, 2]))).collect();
        for i in 0..4 {
            b.add_edge(vs[i], 1, vs[(i + 1) % 4], 0);
        }
        let c4 = b.build().unwrap();
        assert!(solve_monotone(&c4, Monotone::TopDown).unwrap().is_some());
    }

    #[test]
    fn high_vertex_starved() {
        // Four 0-in-1 leaves push 4 edges into a {2,3}-in-4 centre.
        let mut b = InstanceBuilder::new();
        let x = b.add_vertex("x", VertexKind::sym(4, &[2, 3]));
        for p in 0..4 {
            let l = b.add_vertex(format!("l{p}"), VertexKind::Constant(Direction::Out));
            b.add_edge(l, 0, x, p);
        }
        let inst = b.build().unwrap();
        assert!(solve_monotone(&inst, Monotone::TopDown).unwrap().is_none());
        assert!(solve_brute(&inst).unwrap().is_none());
    }

    #[test]
    fn not_closed_is_rejected() {
        let t = triangle(VertexKind::sym(2, &[1, 2]));
        assert!(t.kind(0).as_symmetric().unwrap().is_top_down_closed());
        let x = triangle(VertexKind::sym(2, &[2]));
        assert!(matches!(solve_monotone(&x, Monotone::TopDown), Err(Error::Precondition(_))));
    }

    #[test]
    fn bottom_up_by_reversal() {
        // 1-in-1 leaves push edges out of a {1,2}-in-4 centre; the other
        // leaves are free.
        for (ins, sat) in [(2, true), (3, true), (4, false)] {
            let mut b = InstanceBuilder::new();
            let x = b.add_vertex("x", VertexKind::sym(4, &[1, 2]));
            for p in 0..4 {
                let k = if p < ins { VertexKind::Constant(Direction::In) } else { VertexKind::sym(1, &[0, 1]) };
                let l = b.add_vertex(format!("l{p}"), k);
                b.add_edge(l, 0, x, p);
            }
            let inst = b.build().unwrap();
            let o = solve_monotone(&inst, Monotone::BottomUp).unwrap();
            assert_eq!(o.is_some(), sat);
            assert_eq!(solve_brute(&inst).unwrap().is_some(), sat);
            if let Some(o) = o {
                assert!(validate(&inst, &o).is_empty());
            }
        }
    }
}
