//! Symmetric types whose in-degree sets have no gap of two or more, via
//! perfect matching.
//!
//! Edge `e` becomes a node `m_e` between two port nodes; `m_e` is matched to
//! the port of the tail, so each vertex gadget absorbs exactly its incoming
//! ports. A gadget admits either a parity interval `{lo, lo+2, .., hi}` or,
//! with the help of a shared parity pool, a full interval `lo..=hi`. Sets
//! that are neither are covered by several such pieces and the solver
//! branches over the choice.

use crate::error::{Error, Result};
use crate::instance::{Instance, Orientation};
use crate::relation::SymmetricSpec;

use super::matching::Blossom;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    Interval(usize, usize),
    Parity(usize, usize),
}

fn pieces(s: &SymmetricSpec) -> Vec<Piece> {
    let v: Vec<usize> = s.in_set.iter().copied().collect();
    let (lo, hi) = (v[0], v[v.len() - 1]);
    if hi - lo + 1 == v.len() {
        return vec![if lo == hi { Piece::Parity(lo, lo) } else { Piece::Interval(lo, hi) }];
    }
    if v.windows(2).all(|w| w[1] - w[0] == 2) {
        return vec![Piece::Parity(lo, hi)];
    }
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &x in &v {
        match runs.last_mut() {
            Some(r) if r.1 + 1 == x => r.1 = x,
            _ => runs.push((x, x)),
        }
    }
    let mut out: Vec<Piece> = Vec::new();
    for (a, b) in runs {
        match out.last_mut() {
            Some(Piece::Parity(_, h)) if a == b && *h + 2 == a => *h = a,
            _ => out.push(if a == b { Piece::Parity(a, a) } else { Piece::Interval(a, b) }),
        }
    }
    out
}

struct Prepared {
    /// Spec per vertex after self-loops are removed.
    specs: Vec<SymmetricSpec>,
    /// Non-loop edges.
    edges: Vec<usize>,
}

fn prepare(inst: &Instance) -> Result<Option<Prepared>> {
    let mut specs = Vec::with_capacity(inst.num_vertices());
    for v in 0..inst.num_vertices() {
        let Some(s) = inst.kind(v).as_symmetric() else {
            return Err(Error::Precondition(format!("vertex {} is not symmetric", inst.name(v))));
        };
        if s.max_gap() > 1 {
            return Err(Error::Precondition(format!("{s} has a gap of size {}", s.max_gap())));
        }
        specs.push(s);
    }
    let mut edges = Vec::new();
    for (e, edge) in inst.edges().iter().enumerate() {
        if edge.is_loop() {
            let v = edge.a.vertex;
            specs[v] = specs[v].add_self_loop();
        } else {
            edges.push(e);
        }
    }
    if specs.iter().any(|s| s.in_set.is_empty()) {
        return Ok(None);
    }
    Ok(Some(Prepared { specs, edges }))
}

fn try_choice(inst: &Instance, prep: &Prepared, choice: &[Piece]) -> Option<Vec<bool>> {
    let mut n = 0usize;
    fn fresh(n: &mut usize, k: usize) -> usize {
        *n += k;
        *n - k
    }
    // Node layout: per edge [m, qa, qb].
    let base = fresh(&mut n, 3 * prep.edges.len());
    let mut ports: Vec<Vec<usize>> = vec![Vec::new(); inst.num_vertices()];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, &e) in prep.edges.iter().enumerate() {
        let m = base + 3 * i;
        let edge = inst.edge(e);
        ports[edge.a.vertex].push(m + 1);
        ports[edge.b.vertex].push(m + 2);
        pairs.push((m, m + 1));
        pairs.push((m, m + 2));
    }
    let mut pool = Vec::new();
    for (v, piece) in choice.iter().enumerate() {
        let (lo, hi, with_pool) = match *piece {
            Piece::Parity(lo, hi) => (lo, hi, false),
            Piece::Interval(lo, hi) => (lo, hi, true),
        };
        let mand = fresh(&mut n, lo);
        let opt = fresh(&mut n, hi - lo);
        for &q in &ports[v] {
            for x in mand..opt + (hi - lo) {
                pairs.push((q, x));
            }
        }
        for a in opt..opt + (hi - lo) {
            for b in a + 1..opt + (hi - lo) {
                pairs.push((a, b));
            }
        }
        if with_pool {
            let t = fresh(&mut n, 1);
            for a in opt..opt + (hi - lo) {
                pairs.push((t, a));
            }
            pool.push(t);
        }
    }
    if n % 2 == 1 {
        pool.push(fresh(&mut n, 1));
    }
    for (i, &a) in pool.iter().enumerate() {
        for &b in &pool[i + 1..] {
            pairs.push((a, b));
        }
    }
    let mut g = Blossom::new(n);
    for (a, b) in pairs {
        g.add_edge(a, b);
    }
    let mate = g.maximum_matching();
    if mate.iter().any(|&m| m == usize::MAX) {
        return None;
    }
    let mut dir = vec![true; inst.num_edges()];
    for (i, &e) in prep.edges.iter().enumerate() {
        let m = base + 3 * i;
        // Matched to A's port: A is the tail.
        dir[e] = mate[m] == m + 1;
    }
    Some(dir)
}

pub fn solve_gapfree(inst: &Instance) -> Result<Option<Orientation>> {
    let Some(prep) = prepare(inst)? else {
        return Ok(None);
    };
    let options: Vec<Vec<Piece>> = prep.specs.iter().map(pieces).collect();
    let mut idx = vec![0usize; options.len()];
    loop {
        let choice: Vec<Piece> = idx.iter().zip(&options).map(|(&i, o)| o[i]).collect();
        if let Some(dir) = try_choice(inst, &prep, &choice) {
            return Ok(Some(Orientation(dir)));
        }
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            return Ok(None);
        }
    }
}
