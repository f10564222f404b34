//! Backtracking over edge directions with per-vertex pruning. Shared by the
//! brute-force solver and gadget enumeration.

use std::collections::VecDeque;

use crate::instance::Instance;
use crate::kind::VertexKind;

/// Default cap on the number of edges an exhaustive search accepts.
pub const DEFAULT_EDGE_CAP: usize = 24;

enum Checker {
    /// `next_allowed[s]` = smallest allowed in-degree ≥ s.
    Counts { next_allowed: Vec<usize> },
    Table(Vec<u64>),
}

impl Checker {
    fn new(inst: &Instance, v: usize) -> Checker {
        let sym = match inst.kind(v) {
            VertexKind::Symmetric(s) => Some(s.clone()),
            k @ (VertexKind::Constant(_) | VertexKind::External) => k.as_symmetric(),
            _ => None,
        };
        match sym {
            Some(s) => {
                let j = s.arity;
                let mut next_allowed = vec![usize::MAX; j + 2];
                for i in (0..=j).rev() {
                    next_allowed[i] = if s.contains(i) { i } else { next_allowed[i + 1] };
                }
                Checker::Counts { next_allowed }
            }
            None => Checker::Table(inst.relation(v).words().collect()),
        }
    }

    fn feasible(&self, arity: usize, mask: u64, val: u64) -> bool {
        match self {
            Checker::Counts { next_allowed } => {
                let ones = val.count_ones() as usize;
                let free = arity - mask.count_ones() as usize;
                let n = next_allowed[ones];
                n != usize::MAX && n <= ones + free
            }
            Checker::Table(ws) => ws.iter().any(|&w| w & mask == val),
        }
    }
}

pub(crate) struct Search<'a> {
    inst: &'a Instance,
    checkers: Vec<Checker>,
    order: Vec<usize>,
    mask: Vec<u64>,
    val: Vec<u64>,
    dir: Vec<bool>,
}

impl<'a> Search<'a> {
    /// `first` edges are assigned before all others, in the given order.
    pub fn new(inst: &'a Instance, first: &[usize]) -> Search<'a> {
        let n = inst.num_vertices();
        let checkers = (0..n).map(|v| Checker::new(inst, v)).collect();
        let mut order: Vec<usize> = first.to_vec();
        let mut placed = vec![false; inst.num_edges()];
        for &e in first {
            placed[e] = true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        let mut seeds: Vec<usize> = first.iter().flat_map(|&e| [inst.edge(e).a.vertex, inst.edge(e).b.vertex]).collect();
        seeds.extend(0..n);
        for s in seeds {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for p in 0..inst.arity(v) {
                    let (e, side) = inst.slot(v, p);
                    if !placed[e] {
                        placed[e] = true;
                        order.push(e);
                    }
                    let u = inst.edge(e).end(1 - side).vertex;
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        Search { inst, checkers, order, mask: vec![0; n], val: vec![0; n], dir: vec![false; inst.num_edges()] }
    }

    fn ok(&self, v: usize) -> bool {
        self.checkers[v].feasible(self.inst.arity(v), self.mask[v], self.val[v])
    }

    fn initially_ok(&self) -> bool {
        (0..self.inst.num_vertices()).all(|v| self.ok(v))
    }

    fn set(&mut self, e: usize, d: bool) -> bool {
        self.dir[e] = d;
        let edge = self.inst.edge(e);
        for (ep, bit) in [(edge.a, !d), (edge.b, d)] {
            self.mask[ep.vertex] |= 1 << ep.port;
            if bit {
                self.val[ep.vertex] |= 1 << ep.port;
            }
        }
        self.ok(edge.a.vertex) && self.ok(edge.b.vertex)
    }

    fn unset(&mut self, e: usize) {
        let edge = self.inst.edge(e);
        for ep in [edge.a, edge.b] {
            self.mask[ep.vertex] &= !(1 << ep.port);
            self.val[ep.vertex] &= !(1 << ep.port);
        }
    }

    /// Visit every satisfying full assignment of edges `order[depth..]`.
    /// The visitor returns `true` to stop.
    fn dfs(&mut self, depth: usize, visit: &mut dyn FnMut(&[bool]) -> bool) -> bool {
        if depth == self.order.len() {
            return visit(&self.dir);
        }
        let e = self.order[depth];
        for d in [true, false] {
            let good = self.set(e, d);
            let stop = good && self.dfs(depth + 1, visit);
            self.unset(e);
            if stop {
                return true;
            }
        }
        false
    }

    pub fn first_solution(&mut self) -> Option<Vec<bool>> {
        if !self.initially_ok() {
            return None;
        }
        let mut found = None;
        self.dfs(0, &mut |d| {
            found = Some(d.to_vec());
            true
        });
        found
    }

    pub fn count(&mut self) -> u64 {
        if !self.initially_ok() {
            return 0;
        }
        let mut n = 0u64;
        self.dfs(0, &mut |_| {
            n += 1;
            false
        });
        n
    }

    /// Directions of the first `k` edges of the order (the `first` list)
    /// that extend to a full solution.
    pub fn projections(&mut self, k: usize) -> Vec<Vec<bool>> {
        let mut out = Vec::new();
        if !self.initially_ok() {
            return out;
        }
        self.project(0, k, &mut out);
        out
    }

    fn project(&mut self, depth: usize, k: usize, out: &mut Vec<Vec<bool>>) {
        if depth == k {
            let prefix: Vec<bool> = self.order[..k].iter().map(|&e| self.dir[e]).collect();
            if self.dfs(k, &mut |_| true) {
                out.push(prefix);
            }
            return;
        }
        let e = self.order[depth];
        for d in [true, false] {
            if self.set(e, d) {
                self.project(depth + 1, k, out);
            }
            self.unset(e);
        }
    }
}
