//! Planar instances of terminators, `k`-equalizers (`k >= 5`) and `1-in-j`
//! vertices.
//!
//! While some `1-in-j` with `j >= 3` remains, a chain of local reductions
//! finds an edge whose direction is the same in every solution; that edge is
//! fixed and removed. What is left is affine. `(j-1)-in-j` instances are
//! handled by reversing every edge.

use crate::embedding::{euler_check, faces_of_rotation, twin};
use crate::error::{Error, Result};
use crate::instance::{validate, Instance, InstanceBuilder, Orientation};
use crate::kind::VertexKind;

use super::affine::solve_affine;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum K {
    /// Exactly one incident edge points in.
    OneIn,
    /// All in or all out.
    Eq,
    /// Every remaining edge must point in.
    TermIn,
    /// Every remaining edge must point out.
    TermOut,
    Unsat,
    /// No edges left, nothing to satisfy.
    Done,
}

/// Result of the search for a forced edge: edge id plus the side its head
/// is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fix {
    Unsat,
    Edge(usize, usize),
}

#[derive(Debug, Clone)]
struct KGraph {
    kind: Vec<K>,
    /// Darts around each vertex, counter-clockwise.
    rot: Vec<Vec<usize>>,
    ends: Vec<[usize; 2]>,
    alive: Vec<bool>,
}

impl KGraph {
    fn at(&self, d: usize) -> usize {
        self.ends[d / 2][d % 2]
    }

    fn is_loop(&self, e: usize) -> bool {
        self.ends[e][0] == self.ends[e][1]
    }

    fn deg(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    fn remove_dart(&mut self, d: usize) {
        let v = self.at(d);
        self.rot[v].retain(|&x| x != d);
    }

    fn replace_dart(&mut self, old: usize, new: usize) {
        let v = self.at(old);
        let i = self.rot[v].iter().position(|&x| x == old).expect("dart in rotation");
        self.rot[v][i] = new;
    }

    fn remove_edge(&mut self, e: usize) {
        self.remove_dart(2 * e);
        self.remove_dart(2 * e + 1);
        self.alive[e] = false;
    }

    fn new(inst: &Instance, kind: Vec<K>) -> KGraph {
        let rot = (0..inst.num_vertices())
            .map(|v| {
                let order: Vec<usize> = match inst.rotation(v) {
                    Some(r) => r.to_vec(),
                    None => (0..inst.arity(v)).collect(),
                };
                order
                    .iter()
                    .map(|&p| {
                        let (e, s) = inst.slot(v, p);
                        2 * e + s
                    })
                    .collect()
            })
            .collect();
        let ends = inst.edges().iter().map(|e| [e.a.vertex, e.b.vertex]).collect();
        let mut g = KGraph { kind, rot, ends, alive: vec![true; inst.num_edges()] };
        for v in 0..g.kind.len() {
            g.normalise(v);
        }
        g
    }

    /// New edge occupying the rotation slots of darts `a` and `b`.
    fn connect(&mut self, a: usize, b: usize) -> usize {
        let e = self.ends.len();
        self.ends.push([self.at(a), self.at(b)]);
        self.alive.push(true);
        self.replace_dart(a, 2 * e);
        self.replace_dart(b, 2 * e + 1);
        e
    }

    fn normalise(&mut self, v: usize) {
        let d = self.deg(v);
        self.kind[v] = match (self.kind[v], d) {
            (K::OneIn, 0) => K::Unsat,
            (K::OneIn, 1) => K::TermIn,
            (K::Eq | K::TermIn | K::TermOut, 0) => K::Done,
            (k, _) => k,
        };
    }

    /// Direct `e` into the endpoint on `head`, then drop it.
    fn fix(&mut self, e: usize, head: usize) {
        let (h, t) = (self.ends[e][head], self.ends[e][1 - head]);
        self.remove_edge(e);
        self.kind[h] = match self.kind[h] {
            K::OneIn => K::TermOut,
            K::Eq => K::TermIn,
            K::TermOut => K::Unsat,
            k => k,
        };
        self.kind[t] = match self.kind[t] {
            K::Eq => K::TermOut,
            K::TermIn => K::Unsat,
            k => k,
        };
        self.normalise(h);
        self.normalise(t);
    }

    fn any_unsat(&self) -> bool {
        self.kind.iter().any(|&k| k == K::Unsat)
    }

    /// Fix edges at terminators until none has an edge left.
    fn propagate(&mut self, dir: &mut [Option<bool>]) {
        let mut stack: Vec<usize> = (0..self.kind.len()).collect();
        while let Some(v) = stack.pop() {
            while matches!(self.kind[v], K::TermIn | K::TermOut) && self.deg(v) > 0 {
                let d = self.rot[v][0];
                let (e, s) = (d / 2, d % 2);
                let head = if self.kind[v] == K::TermIn { s } else { 1 - s };
                let other = self.ends[e][1 - s];
                self.fix(e, head);
                dir[e] = Some(head == 1);
                stack.push(other);
            }
        }
    }

    fn loops_at(&self, v: usize) -> usize {
        self.rot[v].iter().filter(|&&d| self.is_loop(d / 2)).count() / 2
    }

    /// The vertices that still have edges, as an instance with the same
    /// rotation, plus the graph edge behind each instance edge.
    fn to_instance(&self) -> Result<(Instance, Vec<usize>)> {
        let n = self.kind.len();
        let mut b = InstanceBuilder::new();
        let mut id = vec![usize::MAX; n];
        for v in 0..n {
            let d = self.deg(v);
            if d == 0 && self.kind[v] != K::Unsat {
                continue;
            }
            let kind = match self.kind[v] {
                K::Eq => VertexKind::Equalizer(d),
                K::OneIn => VertexKind::exactly(1, d),
                K::TermIn => VertexKind::exactly(d, d),
                K::TermOut => VertexKind::exactly(0, d),
                K::Unsat | K::Done => VertexKind::sym(d, &[]),
            };
            id[v] = b.add_vertex(format!("v{v}"), kind);
            b.set_rotation(id[v], (0..d).collect());
        }
        let rest: Vec<usize> = (0..self.ends.len()).filter(|&e| self.alive[e]).collect();
        for &e in &rest {
            let port = |s: usize| {
                let v = self.ends[e][s];
                (id[v], self.rot[v].iter().position(|&d| d == 2 * e + s).unwrap())
            };
            let ((u, p), (v, q)) = (port(0), port(1));
            b.add_edge(u, p, v, q);
        }
        Ok((b.build()?, rest))
    }
}

/// Brute-force satisfiability of small graphs, for checking rules in tests.
#[cfg(test)]
fn small_sat(g: &KGraph) -> Option<bool> {
    let (inst, _) = g.to_instance().unwrap();
    (inst.num_edges() <= 16).then(|| super::brute::solve_brute(&inst).unwrap().is_some())
}

/// A graph rewrite must keep satisfiability.
#[cfg(test)]
fn check_rewrite(g: &KGraph, h: &KGraph) {
    if let (Some(a), Some(b)) = (small_sat(g), small_sat(h)) {
        assert_eq!(a, b, "rewrite changed satisfiability");
    }
}

#[cfg(not(test))]
fn check_rewrite(_: &KGraph, _: &KGraph) {}

fn find_fixed(g: &KGraph) -> Result<Fix> {
    let f = find_fixed_inner(g)?;
    #[cfg(test)]
    if let Some(sat) = small_sat(g) {
        match f {
            Fix::Unsat => assert!(!sat, "rule declared a satisfiable graph unsatisfiable"),
            Fix::Edge(e, head) => {
                let mut h = g.clone();
                h.fix(e, 1 - head);
                assert!(!small_sat(&h).unwrap(), "edge {e} is not forced");
            }
        }
    }
    Ok(f)
}

fn find_fixed_inner(g: &KGraph) -> Result<Fix> {
    if g.any_unsat() {
        return Ok(Fix::Unsat);
    }
    let n = g.kind.len();
    // 1. Terminators.
    for v in 0..n {
        if matches!(g.kind[v], K::TermIn | K::TermOut) && g.deg(v) > 0 {
            if g.loops_at(v) > 0 {
                return Ok(Fix::Unsat);
            }
            let d = g.rot[v][0];
            let head = if g.kind[v] == K::TermIn { d % 2 } else { 1 - d % 2 };
            return Ok(Fix::Edge(d / 2, head));
        }
    }
    // 2. Contract a 1-in-2.
    for w in 0..n {
        if g.kind[w] != K::OneIn || g.deg(w) != 2 {
            continue;
        }
        let (p, q) = (g.rot[w][0], g.rot[w][1]);
        let mut h = g.clone();
        if p / 2 == q / 2 {
            h.remove_edge(p / 2);
            h.kind[w] = K::Done;
            check_rewrite(g, &h);
            return find_fixed(&h);
        }
        let e1 = p / 2;
        let ne = h.connect(twin(p), twin(q));
        h.remove_edge(e1);
        h.remove_edge(q / 2);
        h.kind[w] = K::Done;
        check_rewrite(g, &h);
        return Ok(match find_fixed(&h)? {
            // Flow runs from the far end of e1 through w.
            Fix::Edge(e, 1) if e == ne => Fix::Edge(e1, p % 2),
            Fix::Edge(e, _) if e == ne => Fix::Edge(e1, 1 - p % 2),
            f => f,
        });
    }
    // 3. Self-loop on an equalizer.
    if (0..n).any(|v| g.kind[v] == K::Eq && g.loops_at(v) > 0) {
        return Ok(Fix::Unsat);
    }
    // 4. Self-loop on a 1-in-j: the loop is the one incoming edge.
    for v in 0..n {
        if g.kind[v] != K::OneIn || g.loops_at(v) == 0 {
            continue;
        }
        if g.loops_at(v) > 1 {
            return Ok(Fix::Unsat);
        }
        return Ok(match g.rot[v].iter().find(|&&d| !g.is_loop(d / 2)) {
            Some(&d) => Fix::Edge(d / 2, 1 - d % 2),
            None => Fix::Unsat,
        });
    }
    // 5. Merge adjacent 1-in-j vertices.
    for e in 0..g.ends.len() {
        let [u, v] = g.ends[e];
        if !g.alive[e] || u == v || g.kind[u] != K::OneIn || g.kind[v] != K::OneIn {
            continue;
        }
        let mut h = g.clone();
        let after = |x: usize, d: usize| {
            let r = &g.rot[x];
            let i = r.iter().position(|&y| y == d).unwrap();
            (1..r.len()).map(move |k| r[(i + k) % r.len()])
        };
        let merged: Vec<usize> = after(u, 2 * e).chain(after(v, 2 * e + 1)).collect();
        for &d in &g.rot[v] {
            h.ends[d / 2][d % 2] = u;
        }
        h.alive[e] = false;
        h.rot[u] = merged;
        h.rot[v].clear();
        h.kind[v] = K::Done;
        check_rewrite(g, &h);
        return find_fixed(&h);
    }
    // 6. Two or more edges between an equalizer and a 1-in-j.
    for w in 0..n {
        if g.kind[w] != K::OneIn {
            continue;
        }
        for (i, &d) in g.rot[w].iter().enumerate() {
            let x = g.at(twin(d));
            if g.kind[x] == K::Eq && g.rot[w][i + 1..].iter().any(|&d2| g.at(twin(d2)) == x) {
                return Ok(Fix::Edge(d / 2, 1 - d % 2));
            }
        }
    }
    // 7. Splice two adjacent equalizers.
    for e in 0..g.ends.len() {
        let [u, v] = g.ends[e];
        if !g.alive[e] || u == v || g.kind[u] != K::Eq || g.kind[v] != K::Eq {
            continue;
        }
        return splice(g, e);
    }
    // 8. The degree-5 configuration.
    if let Some(f) = rule_eight(g)? {
        return Ok(f);
    }
    Err(Error::Internal("no reduction rule applies while a 1-in-j with j >= 3 remains".into()))
}

fn splice(g: &KGraph, e: usize) -> Result<Fix> {
    let [u, v] = g.ends[e];
    let (ru, rv) = (&g.rot[u], &g.rot[v]);
    if ru.len() != rv.len() {
        return Err(Error::Internal("equalizers of different degree".into()));
    }
    let m = ru.len();
    let pu = ru.iter().position(|&d| d == 2 * e).unwrap();
    let pv = rv.iter().position(|&d| d == 2 * e + 1).unwrap();
    // Clockwise around u, counter-clockwise around v.
    let a: Vec<usize> = (1..m).map(|i| ru[(pu + m - i) % m]).collect();
    let b: Vec<usize> = (1..m).map(|i| rv[(pv + i) % m]).collect();
    let index_a = |d: usize| a.iter().position(|&x| x == d);
    let mut h = g.clone();
    let mut new_edges = Vec::new();
    for i in 0..a.len() {
        if g.at(twin(a[i])) == v {
            continue;
        }
        let mut j = i;
        while g.at(twin(b[j])) == u {
            j = index_a(twin(b[j])).ok_or_else(|| Error::Internal("splice chain lost".into()))?;
        }
        new_edges.push((twin(a[i]), twin(b[j])));
    }
    let mut created = Vec::new();
    for (x, y) in new_edges {
        created.push(h.connect(x, y));
    }
    for &d in ru.iter().chain(rv.iter()) {
        if h.alive[d / 2] {
            h.remove_edge(d / 2);
        }
    }
    h.kind[u] = K::Done;
    h.kind[v] = K::Done;
    check_rewrite(g, &h);
    Ok(match find_fixed(&h)? {
        // Side 0 of a new edge lies on u's side: flow towards side 1 means
        // u takes everything in.
        Fix::Edge(x, s) if created.contains(&x) => Fix::Edge(e, if s == 1 { 0 } else { 1 }),
        f => f,
    })
}

fn rule_eight(g: &KGraph) -> Result<Option<Fix>> {
    let fs = faces_of_rotation(&g.rot, 2 * g.ends.len());
    for c in 0..g.kind.len() {
        if g.kind[c] != K::Eq || g.deg(c) != 5 {
            continue;
        }
        let d = &g.rot[c];
        // Each face left of c -> m_i must be c, m_i, x_i, m_{i+1}.
        let mut x = [0usize; 5];
        let mut into_x = [0usize; 5];
        let mut ok = true;
        for i in 0..5 {
            let walk = &fs.faces[fs.face_of[d[i]]];
            let s = walk.iter().position(|&y| y == d[i]).unwrap();
            if walk.len() != 4 || walk[(s + 3) % 4] != twin(d[(i + 1) % 5]) {
                ok = false;
                break;
            }
            into_x[i] = walk[(s + 1) % 4];
            x[i] = g.at(twin(into_x[i]));
        }
        if !ok {
            continue;
        }
        let m: Vec<usize> = d.iter().map(|&y| g.at(twin(y))).collect();
        let green = |i: usize| g.kind[m[i % 5]] == K::OneIn && g.deg(m[i % 5]) == 3;
        for a in 0..5 {
            if green(a) && green(a + 2) {
                // x_{a+3} cannot be all-out: it must take everything in.
                let dd = into_x[(a + 3) % 5];
                return Ok(Some(Fix::Edge(dd / 2, 1 - dd % 2)));
            }
        }
    }
    Ok(None)
}

fn classify(inst: &Instance, k: usize) -> Result<Vec<K>> {
    (0..inst.num_vertices())
        .map(|v| {
            let kind = inst.kind(v);
            let s = kind
                .as_symmetric()
                .ok_or_else(|| Error::Precondition(format!("vertex {} ({kind}) is not symmetric", inst.name(v))))?;
            let j = s.arity;
            let set: Vec<usize> = s.in_set.iter().copied().collect();
            Ok(match set.as_slice() {
                [] => K::Unsat,
                [0] if j == 0 => K::Done,
                [0] => K::TermOut,
                [i] if *i == j => K::TermIn,
                [1] => K::OneIn,
                [0, t] if *t == j && j == k => K::Eq,
                _ => {
                    return Err(Error::Precondition(format!(
                        "vertex {} ({kind}) is not a terminator, {k}-equalizer or 1-in-j",
                        inst.name(v)
                    )))
                }
            })
        })
        .collect()
}

fn is_reversed_family(kind: &VertexKind) -> bool {
    kind.as_symmetric()
        .and_then(|s| s.is_singleton().map(|i| s.arity >= 3 && i == s.arity - 1))
        .unwrap_or(false)
}

/// The equalizer size the solver would run with, if the instance is in
/// its scope (a planar rotation is not checked here).
pub fn k5_size(inst: &Instance) -> Option<usize> {
    let rev;
    let inst = if inst.kinds().iter().any(is_reversed_family) {
        rev = inst.reversed();
        &rev
    } else {
        inst
    };
    let mut k = None;
    for s in inst.kinds().iter().filter_map(|kind| kind.as_symmetric()) {
        if s.arity >= 2 && s.in_set.len() == 2 && s.contains(0) && s.contains(s.arity) {
            if k.is_some_and(|k| k != s.arity) {
                return None;
            }
            k = Some(s.arity);
        }
    }
    let k = k.unwrap_or(5);
    (k >= 5 && classify(inst, k).is_ok()).then_some(k)
}

pub fn solve_planar_k5(inst: &Instance, k: usize) -> Result<Option<Orientation>> {
    if k < 5 {
        return Err(Error::Precondition(format!("equalizer size {k} is below 5")));
    }
    if inst.num_edges() > 0 && (!inst.has_rotation() || !euler_check(inst)?) {
        return Err(Error::Precondition("needs a planar rotation system".into()));
    }
    if inst.kinds().iter().any(is_reversed_family) {
        return Ok(solve_direct(&inst.reversed(), k)?.map(|o| o.reversed()));
    }
    solve_direct(inst, k)
}

fn solve_direct(inst: &Instance, k: usize) -> Result<Option<Orientation>> {
    let kind = classify(inst, k)?;
    let n = inst.num_vertices();
    let m = inst.num_edges();
    let mut g = KGraph::new(inst, kind);
    let mut dir: Vec<Option<bool>> = vec![None; m];
    loop {
        g.propagate(&mut dir);
        if g.any_unsat() {
            return Ok(None);
        }
        if !(0..n).any(|v| g.kind[v] == K::OneIn && g.deg(v) >= 3) {
            break;
        }
        match find_fixed(&g)? {
            Fix::Unsat => return Ok(None),
            Fix::Edge(e, head) => {
                if e >= m || !g.alive[e] {
                    return Err(Error::Internal("forced edge does not exist".into()));
                }
                g.fix(e, head);
                dir[e] = Some(head == 1);
            }
        }
    }
    // Affine residual: equalizers and 1-in-2 vertices.
    if (0..n).any(|v| g.deg(v) > 0 && !matches!(g.kind[v], K::Eq | K::OneIn)) {
        return Err(Error::Internal("unexpected vertex left after reduction".into()));
    }
    let (residual, rest) = g.to_instance()?;
    let Some(o) = solve_affine(&residual)? else {
        return Ok(None);
    };
    for (i, &e) in rest.iter().enumerate() {
        dir[e] = Some(o.0[i]);
    }
    let o = Orientation(dir.into_iter().map(|d| d.expect("every edge is decided")).collect());
    if !validate(inst, &o).is_empty() {
        return Err(Error::Internal("reduction produced an invalid orientation".into()));
    }
    Ok(Some(o))
}
