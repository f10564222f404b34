//! Bijunctive instances via 2-SAT.
//!
//! Each vertex relation is turned into the set of 2-clauses (and unit
//! clauses) it implies; for a bijunctive relation their conjunction is the
//! relation itself, which is re-checked on small arities.

use crate::error::{Error, Result};
use crate::instance::{Instance, Orientation};

use super::csp::{constraints, Constraint, Pred};

/// Arity up to which the clause set is compared word by word with the relation.
const SELF_CHECK_ARITY: usize = 12;

/// A literal over port bits: `(port, bit)`.
type PortLit = (usize, bool);

/// `Ok(None)` if the predicate is empty.
pub(crate) fn port_clauses(pred: &Pred) -> Result<Option<Vec<(PortLit, PortLit)>>> {
    let bij = match pred {
        Pred::Words(r) => r.is_bijunctive(),
        Pred::Count(s) => s.is_bijunctive_closed_form(),
    };
    if !bij {
        return Err(Error::Precondition("vertex type is not bijunctive".into()));
    }
    if !pred.admits(&[]) {
        return Ok(None);
    }
    let j = pred.arity();
    let mut out = Vec::new();
    let mut unit = vec![None; j];
    for p in 0..j {
        for b in [false, true] {
            if !pred.admits(&[(p, !b)]) {
                unit[p] = Some(b);
                out.push(((p, b), (p, b)));
            }
        }
    }
    for p in 0..j {
        for q in p + 1..j {
            if unit[p].is_some() || unit[q].is_some() {
                continue;
            }
            for b1 in [false, true] {
                for b2 in [false, true] {
                    if !pred.admits(&[(p, !b1), (q, !b2)]) {
                        out.push(((p, b1), (q, b2)));
                    }
                }
            }
        }
    }
    if j <= SELF_CHECK_ARITY {
        for w in 0..(1u64 << j) {
            let bit = |p: usize| (w >> p) & 1 == 1;
            let sat = out.iter().all(|&((p, b1), (q, b2))| bit(p) == b1 || bit(q) == b2);
            if sat != pred.allows(w) {
                return Err(Error::Internal(format!("2-clause set disagrees with the relation on word {w:b}")));
            }
        }
    }
    Ok(Some(out))
}

/// Implication-graph solver. Literal `(var, value)`.
pub(crate) struct TwoSat {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl TwoSat {
    pub fn new(n: usize) -> Self {
        TwoSat { n, adj: vec![Vec::new(); 2 * n] }
    }

    fn node(v: usize, val: bool) -> usize {
        2 * v + (!val) as usize
    }

    pub fn add_clause(&mut self, a: (usize, bool), b: (usize, bool)) {
        self.adj[Self::node(a.0, !a.1)].push(Self::node(b.0, b.1));
        self.adj[Self::node(b.0, !b.1)].push(Self::node(a.0, a.1));
    }

    pub fn solve(&self) -> Option<Vec<bool>> {
        let comp = tarjan(&self.adj);
        let mut out = Vec::with_capacity(self.n);
        for v in 0..self.n {
            let (t, f) = (comp[Self::node(v, true)], comp[Self::node(v, false)]);
            if t == f {
                return None;
            }
            // Tarjan numbers components in reverse topological order.
            out.push(t < f);
        }
        Some(out)
    }
}

/// Component id per node, sinks first.
fn tarjan(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut ncomp = 0;
    for s in 0..n {
        if index[s] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(s, 0)];
        index[s] = next;
        low[s] = next;
        next += 1;
        stack.push(s);
        on_stack[s] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(p, _)) = call.last() {
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp[w] = ncomp;
                    if w == v {
                        break;
                    }
                }
                ncomp += 1;
            }
        }
    }
    comp
}

/// Add the clauses of one constraint; `false` if it is unsatisfiable.
pub(crate) fn add_constraint(ts: &mut TwoSat, c: &Constraint) -> Result<bool> {
    let Some(cl) = port_clauses(&c.pred)? else {
        return Ok(false);
    };
    let lit = |(p, b): PortLit| {
        let (e, neg) = c.lits[p];
        (e, b ^ neg)
    };
    for (a, b) in cl {
        ts.add_clause(lit(a), lit(b));
    }
    Ok(true)
}

pub fn solve_2sat(inst: &Instance) -> Result<Option<Orientation>> {
    let mut ts = TwoSat::new(inst.num_edges());
    let mut ok = true;
    for c in constraints(inst) {
        ok &= add_constraint(&mut ts, &c)?;
    }
    if !ok {
        return Ok(None);
    }
    Ok(ts.solve().map(Orientation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{validate, InstanceBuilder};
    use crate::kind::{Direction, VertexKind};

    #[test]
    fn forced_chain() {
        let mut b = InstanceBuilder::new();
        let c = b.add_vertex("c", VertexKind::Constant(Direction::Out));
        let vs: Vec<usize> = (0..4).map(|i| b.add_vertex(format!("v{i}"), VertexKind::exactly(1, 2))).collect();
        let t = b.add_vertex("t", VertexKind::Constant(Direction::In));
        b.add_edge(c, 0, vs[0], 0);
        for i in 0..3 {
            b.add_edge(vs[i], 1, vs[i + 1], 0);
        }
        b.add_edge(vs[3], 1, t, 0);
        let inst = b.build().unwrap();
        let o = solve_2sat(&inst).unwrap().unwrap();
        assert!(validate(&inst, &o).is_empty());
        assert!(o.0.iter().all(|&d| d));
    }

    #[test]
    fn star_of_at_most_one() {
        let mut b = InstanceBuilder::new();
        let s = b.add_vertex("s", VertexKind::sym(3, &[0, 1]));
        for p in 0..3 {
            let l = b.add_vertex(format!("l{p}"), VertexKind::Constant(Direction::In));
            b.add_edge(s, p, l, 0);
        }
        let inst = b.build().unwrap();
        assert_eq!(solve_2sat(&inst).unwrap().is_some(), crate::solve::brute::solve_brute(&inst).unwrap().is_some());
        // Leaves are 1-in-1, so every edge points out of the centre: 0 in, allowed.
        assert!(solve_2sat(&inst).unwrap().is_some());
        let mut b = InstanceBuilder::new();
        let s = b.add_vertex("s", VertexKind::sym(3, &[0, 1]));
        for p in 0..3 {
            let l = b.add_vertex(format!("l{p}"), VertexKind::Constant(Direction::Out));
            b.add_edge(s, p, l, 0);
        }
        assert!(solve_2sat(&b.build().unwrap()).unwrap().is_none());
    }

    #[test]
    fn full_types_are_trivial() {
        let mut b = InstanceBuilder::new();
        let x = b.add_vertex("x", VertexKind::sym(3, &[0, 1, 2, 3]));
        let y = b.add_vertex("y", VertexKind::sym(3, &[0, 1, 2, 3]));
        for p in 0..3 {
            b.add_edge(x, p, y, p);
        }
        assert!(solve_2sat(&b.build().unwrap()).unwrap().is_some());
    }

    #[test]
    fn rejects_non_bijunctive() {
        let mut b = InstanceBuilder::new();
        let x = b.add_vertex("x", VertexKind::exactly(1, 3));
        for p in 0..3 {
            let l = b.add_vertex(format!("l{p}"), VertexKind::External);
            b.add_edge(x, p, l, 0);
        }
        assert!(matches!(solve_2sat(&b.build().unwrap()), Err(Error::Precondition(_))));
    }
}
