//! Planar instances of `i-in-j` vertices and alternators by linear
//! programming, followed by rounding with face potentials.
//!
//! One variable per edge: `x_e = +1` means A→B, so the half-edge values are
//! `x_AB = x_e` and `x_BA = -x_e`. Feasibility is decided exactly, then a
//! fractional point is pushed to the boundary one potential class at a time
//! until every edge is `-1`, `0` or `1`; the zero edges are finished by face
//! two-colouring.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::embedding::{euler_check, face_set, FaceSet};
use crate::error::{Error, Result};
use crate::instance::{validate, Edge, Endpoint, Instance, Orientation};
use crate::kind::VertexKind;

use super::simplex::feasible_point;
use super::two_color::two_color_orient;

type Q = BigRational;

/// Largest instance (in edges) handed to the simplex under [`LpMethod::Auto`].
pub const SIMPLEX_MAX_EDGES: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpMethod {
    /// Simplex up to [`SIMPLEX_MAX_EDGES`], dual potentials above.
    Auto,
    /// Phase-1 simplex over exact rationals.
    Simplex,
    /// The same polytope written as difference constraints on face
    /// potentials and solved by Bellman-Ford.
    DualPotential,
}

#[derive(Debug, Clone)]
pub struct LpSystem {
    pub num_edges: usize,
    /// Sparse rows `sum coef * x_e = rhs`. Vertex rows come first.
    pub rows: Vec<(Vec<(usize, i64)>, i64)>,
    pub vertex_rows: usize,
    pub solution: Option<Vec<Q>>,
}

impl LpSystem {
    pub fn build(inst: &Instance) -> Result<LpSystem> {
        let mut rows = Vec::new();
        let half = |v: usize, p: usize| {
            let (e, side) = inst.slot(v, p);
            (e, if side == 0 { 1 } else { -1 })
        };
        let mut alt = Vec::new();
        for v in 0..inst.num_vertices() {
            let j = inst.arity(v);
            let b = match lp_kind(inst, v)? {
                LpKind::Count(i) => j as i64 - 2 * i as i64,
                LpKind::Alternator => {
                    let rot = inst.rotation(v).expect("checked");
                    for k in 0..j {
                        alt.push(merge(vec![half(v, rot[k]), half(v, rot[(k + 1) % j])], 0));
                    }
                    0
                }
            };
            rows.push(merge((0..j).map(|p| half(v, p)).collect(), b));
        }
        let vertex_rows = rows.len();
        rows.extend(alt);
        Ok(LpSystem { num_edges: inst.num_edges(), rows, vertex_rows, solution: None })
    }

    /// Rows and bounds hold exactly.
    pub fn check(&self, x: &[Q]) -> bool {
        let one = Q::one();
        x.iter().all(|v| v.abs() <= one)
            && self.rows.iter().all(|(coefs, b)| {
                let s: Q = coefs.iter().map(|&(e, c)| &x[e] * Q::from_integer(c.into())).sum();
                s == Q::from_integer((*b).into())
            })
    }

    fn simplex(&self) -> Option<Vec<Q>> {
        let n = self.num_edges;
        let rows: Vec<(Vec<(usize, Q)>, Q)> = self
            .rows
            .iter()
            .map(|(coefs, b)| {
                let shift: i64 = coefs.iter().map(|c| c.1).sum();
                (coefs.iter().map(|&(e, c)| (e, int(c))).collect(), int(b + shift))
            })
            .collect();
        let y = feasible_point(n, &rows, &vec![int(2); n])?;
        Some(y.into_iter().map(|v| v - Q::one()).collect())
    }
}

fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Combine repeated variables (self-loops cancel).
fn merge(terms: Vec<(usize, i64)>, b: i64) -> (Vec<(usize, i64)>, i64) {
    let mut out: Vec<(usize, i64)> = Vec::new();
    for (e, c) in terms {
        match out.iter_mut().find(|t| t.0 == e) {
            Some(t) => t.1 += c,
            None => out.push((e, c)),
        }
    }
    out.retain(|t| t.1 != 0);
    (out, b)
}

enum LpKind {
    Count(usize),
    Alternator,
}

fn lp_kind(inst: &Instance, v: usize) -> Result<LpKind> {
    match inst.kind(v) {
        VertexKind::Alternator(k) if *k > 2 => Ok(LpKind::Alternator),
        k => match k.as_symmetric().and_then(|s| s.is_singleton()) {
            Some(i) => Ok(LpKind::Count(i)),
            None => Err(Error::Precondition(format!("vertex {} is neither i-in-j nor an alternator", inst.name(v)))),
        },
    }
}

/// Face potential data for one rounding step.
#[derive(Debug, Clone)]
pub struct FacePotential {
    /// Value in `[0, 1)` per face.
    pub values: Vec<Q>,
    /// Direction vector per edge, each in {-1, 0, 1}.
    pub y: Vec<i8>,
    pub epsilon: Q,
}

/// What the solver did, for inspection by tests.
#[derive(Debug, Clone, Default)]
pub struct LpTrace {
    pub used_simplex: bool,
    /// Slack-edge count before each rounding step, plus the final count.
    pub slack_history: Vec<usize>,
    pub steps: Vec<FacePotential>,
}

pub fn solve_planar_alternator_lp(inst: &Instance) -> Result<Option<Orientation>> {
    Ok(solve_planar_alternator_lp_traced(inst, LpMethod::Auto)?.0)
}

pub fn solve_planar_alternator_lp_traced(inst: &Instance, method: LpMethod) -> Result<(Option<Orientation>, LpTrace)> {
    if !inst.has_rotation() || !euler_check(inst)? {
        return Err(Error::Precondition("the LP solver needs a planar rotation system".into()));
    }
    let mut trace = LpTrace::default();
    for v in 0..inst.num_vertices() {
        if let VertexKind::Alternator(k) = inst.kind(v) {
            if k % 2 == 1 {
                return Ok((None, trace));
            }
        }
    }
    let mut sys = LpSystem::build(inst)?;
    let fs = face_set(inst)?;
    let use_simplex = match method {
        LpMethod::Simplex => true,
        LpMethod::DualPotential => false,
        LpMethod::Auto => inst.num_edges() <= SIMPLEX_MAX_EDGES,
    };
    trace.used_simplex = use_simplex;
    let x = if use_simplex { sys.simplex() } else { dual_potential_point(inst, &sys, &fs)? };
    let Some(mut x) = x else {
        return Ok((None, trace));
    };
    if !sys.check(&x) {
        return Err(Error::Internal("LP point violates a row".into()));
    }
    round(inst, &sys, &fs, &mut x, &mut trace)?;
    sys.solution = Some(x.clone());
    let o = finish(inst, &x)?;
    if !validate(inst, &o).is_empty() {
        return Err(Error::Internal("rounded LP point is not a valid orientation".into()));
    }
    Ok((Some(o), trace))
}

fn is_slack(v: &Q) -> bool {
    v.abs() < Q::one()
}

fn frac(v: &Q) -> Q {
    v - v.floor()
}

/// Faces reachable through the dual graph, with the BFS root first.
fn dual_components(fs: &FaceSet, num_edges: usize) -> Vec<Vec<usize>> {
    let nf = fs.faces.len();
    let mut adj = vec![Vec::new(); nf];
    for e in 0..num_edges {
        let (l, r) = (fs.face_of[2 * e], fs.face_of[2 * e + 1]);
        adj[l].push((e, r));
        adj[r].push((e, l));
    }
    let mut seen = vec![false; nf];
    let mut out = Vec::new();
    for s in 0..nf {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut q = VecDeque::from([s]);
        while let Some(f) = q.pop_front() {
            for &(_, g) in &adj[f] {
                if !seen[g] {
                    seen[g] = true;
                    comp.push(g);
                    q.push_back(g);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Potentials mod 1 with `pi(right) - pi(left) = x_e` along dart A→B.
fn potentials(inst: &Instance, sys: &LpSystem, fs: &FaceSet, x: &[Q]) -> Result<Vec<Q>> {
    // Around each vertex the weights must sum to an integer.
    for (coefs, _) in &sys.rows[..sys.vertex_rows] {
        let s: Q = coefs.iter().map(|&(e, c)| &x[e] * int(c)).sum();
        if !s.is_integer() {
            return Err(Error::Internal("dual face sum is not an integer".into()));
        }
    }
    let nf = fs.faces.len();
    let mut adj = vec![Vec::new(); nf];
    for e in 0..inst.num_edges() {
        let (l, r) = (fs.face_of[2 * e], fs.face_of[2 * e + 1]);
        adj[l].push((r, x[e].clone()));
        adj[r].push((l, -x[e].clone()));
    }
    let mut pi: Vec<Option<Q>> = vec![None; nf];
    for s in 0..nf {
        if pi[s].is_some() {
            continue;
        }
        pi[s] = Some(Q::zero());
        let mut q = VecDeque::from([s]);
        while let Some(f) = q.pop_front() {
            let pf = pi[f].clone().unwrap();
            for (g, w) in &adj[f] {
                if pi[*g].is_none() {
                    pi[*g] = Some(frac(&(&pf + w)));
                    q.push_back(*g);
                }
            }
        }
    }
    let pi: Vec<Q> = pi.into_iter().map(|p| p.unwrap()).collect();
    for e in 0..inst.num_edges() {
        let (l, r) = (fs.face_of[2 * e], fs.face_of[2 * e + 1]);
        if !frac(&(&pi[r] - &pi[l] - &x[e])).is_zero() {
            return Err(Error::Internal("face potential is inconsistent".into()));
        }
    }
    Ok(pi)
}

fn round(inst: &Instance, sys: &LpSystem, fs: &FaceSet, x: &mut [Q], trace: &mut LpTrace) -> Result<()> {
    let comps = dual_components(fs, inst.num_edges());
    let m = inst.num_edges();
    loop {
        let slack = x.iter().filter(|v| is_slack(v)).count();
        trace.slack_history.push(slack);
        if slack == 0 {
            break;
        }
        let pi = potentials(inst, sys, fs, x)?;
        let Some(comp) = comps.iter().find(|c| c.iter().any(|&f| pi[f] != pi[c[0]])) else {
            break;
        };
        let pi0 = pi[comp[0]].clone();
        let inside: BTreeSet<usize> = comp.iter().copied().collect();
        let mut y = vec![0i8; m];
        for e in 0..m {
            let (l, r) = (fs.face_of[2 * e], fs.face_of[2 * e + 1]);
            if !inside.contains(&l) {
                continue;
            }
            y[e] = (pi[r] == pi0) as i8 - (pi[l] == pi0) as i8;
            if y[e] != 0 && !is_slack(&x[e]) {
                return Err(Error::Internal("rounding direction moves a tight edge".into()));
            }
        }
        let mut best: Option<Q> = None;
        for e in 0..m {
            let step = match y[e] {
                1 => Q::one() - &x[e],
                -1 => &x[e] + Q::one(),
                _ => continue,
            };
            if best.as_ref().is_none_or(|b| step < *b) {
                best = Some(step);
            }
        }
        let eps = best.ok_or_else(|| Error::Internal("rounding direction is zero".into()))?;
        for e in 0..m {
            match y[e] {
                1 => x[e] += &eps,
                -1 => x[e] -= &eps,
                _ => {}
            }
        }
        if !sys.check(x) {
            return Err(Error::Internal("rounding step broke a row".into()));
        }
        let after = x.iter().filter(|v| is_slack(v)).count();
        if after >= slack {
            return Err(Error::Internal("rounding step did not reduce the slack count".into()));
        }
        trace.steps.push(FacePotential { values: pi, y, epsilon: eps });
        if trace.steps.len() > m {
            return Err(Error::Internal("rounding exceeded |E| steps".into()));
        }
    }
    if x.iter().any(|v| !v.is_integer()) {
        return Err(Error::Internal("rounding stopped at a fractional point".into()));
    }
    Ok(())
}

/// Orientation from an integral point: the zero edges go to face
/// two-colouring.
fn finish(inst: &Instance, x: &[Q]) -> Result<Orientation> {
    let mut dir: Vec<bool> = x.iter().map(|v| v.is_positive()).collect();
    let zero: Vec<usize> = (0..inst.num_edges()).filter(|&e| x[e].is_zero()).collect();
    if zero.is_empty() {
        return Ok(Orientation(dir));
    }
    let rot = inst.rotations().expect("checked");
    let n = inst.num_vertices();
    let mut new_port = vec![Vec::new(); n];
    let mut kinds = Vec::with_capacity(n);
    let mut rotation = Vec::with_capacity(n);
    for v in 0..n {
        let mut map = vec![usize::MAX; inst.arity(v)];
        let mut z = 0;
        for p in 0..inst.arity(v) {
            if x[inst.slot(v, p).0].is_zero() {
                map[p] = z;
                z += 1;
            }
        }
        rotation.push(rot[v].iter().filter(|&&p| map[p] != usize::MAX).map(|&p| map[p]).collect::<Vec<_>>());
        kinds.push(match inst.kind(v) {
            VertexKind::Alternator(_) if z > 0 => VertexKind::Alternator(z),
            _ => {
                if z % 2 == 1 {
                    return Err(Error::Internal("odd number of zero edges at a vertex".into()));
                }
                VertexKind::exactly(z / 2, z)
            }
        });
        new_port[v] = map;
    }
    let edges: Vec<Edge> = zero
        .iter()
        .map(|&e| {
            let ed = inst.edge(e);
            let end = |ep: Endpoint| Endpoint::new(ep.vertex, new_port[ep.vertex][ep.port]);
            Edge { a: end(ed.a), b: end(ed.b) }
        })
        .collect();
    let sub = Instance::new(inst.names().to_vec(), kinds, edges, Some(rotation))?;
    let o = two_color_orient(&sub)?;
    for (k, &e) in zero.iter().enumerate() {
        dir[e] = o.0[k];
    }
    Ok(Orientation(dir))
}

/// Integral feasible point from difference constraints on face potentials,
/// or `None` if the polytope is empty.
fn dual_potential_point(inst: &Instance, sys: &LpSystem, fs: &FaceSet) -> Result<Option<Vec<Q>>> {
    let m = inst.num_edges();
    let n = inst.num_vertices();
    // Base flow meeting every vertex row, on a spanning forest.
    let mut x0 = vec![0i64; m];
    let supply: Vec<i64> = (0..n).map(|v| sys.rows[v].1).collect();
    let mut parent_edge = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let start = order.len();
        order.push(s);
        let mut i = start;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for p in 0..inst.arity(v) {
                let (e, side) = inst.slot(v, p);
                let u = inst.edge(e).end(1 - side).vertex;
                if !seen[u] {
                    seen[u] = true;
                    parent_edge[u] = e;
                    order.push(u);
                }
            }
        }
    }
    let out_of = |v: usize, e: usize, x0: &[i64]| -> i64 {
        let ed = inst.edge(e);
        if ed.is_loop() {
            0
        } else if ed.a.vertex == v {
            x0[e]
        } else {
            -x0[e]
        }
    };
    for &v in order.iter().rev() {
        let mut have = 0i64;
        for p in 0..inst.arity(v) {
            let e = inst.slot(v, p).0;
            if e != parent_edge[v] && !(inst.edge(e).is_loop() && p != inst.edge(e).a.port) {
                have += out_of(v, e, &x0);
            }
        }
        let need = supply[v] - have;
        let pe = parent_edge[v];
        if pe == usize::MAX {
            if need != 0 {
                return Ok(None);
            }
            continue;
        }
        x0[pe] = if inst.edge(pe).a.vertex == v { need } else { -need };
    }
    // Constraints phi[a] - phi[b] <= c as arcs b -> a.
    let nf = fs.faces.len();
    let mut arcs: Vec<(usize, usize, i64)> = Vec::new();
    for e in 0..m {
        let (l, r) = (fs.face_of[2 * e], fs.face_of[2 * e + 1]);
        if l == r {
            if x0[e].abs() > 1 {
                return Ok(None);
            }
            continue;
        }
        // x = x0 + phi[l] - phi[r] within [-1, 1].
        arcs.push((r, l, 1 - x0[e]));
        arcs.push((l, r, 1 + x0[e]));
    }
    for (coefs, b) in &sys.rows[sys.vertex_rows..] {
        let mut cf = vec![0i64; nf];
        let mut konst = 0i64;
        for &(e, c) in coefs {
            konst += c * x0[e];
            cf[fs.face_of[2 * e]] += c;
            cf[fs.face_of[2 * e + 1]] -= c;
        }
        let target = b - konst;
        let nz: Vec<usize> = (0..nf).filter(|&f| cf[f] != 0).collect();
        match nz.as_slice() {
            [] => {
                if target != 0 {
                    return Ok(None);
                }
            }
            &[f, g] if cf[f] == -cf[g] && cf[f].abs() == 1 => {
                let (p, q) = if cf[f] == 1 { (f, g) } else { (g, f) };
                // phi[p] - phi[q] = target.
                arcs.push((q, p, target));
                arcs.push((p, q, -target));
            }
            _ => return Err(Error::Internal("alternator row is not a potential difference".into())),
        }
    }
    let Some(phi) = bellman_ford(nf, &arcs) else {
        return Ok(None);
    };
    let x: Vec<Q> = (0..m).map(|e| int(x0[e] + phi[fs.face_of[2 * e]] - phi[fs.face_of[2 * e + 1]])).collect();
    Ok(Some(x))
}

/// Shortest distances from a virtual source joined to every node with
/// weight 0; `None` on a negative cycle.
fn bellman_ford(n: usize, arcs: &[(usize, usize, i64)]) -> Option<Vec<i64>> {
    let mut out = vec![Vec::new(); n];
    for &(a, b, w) in arcs {
        out[a].push((b, w));
    }
    let mut dist = vec![0i64; n];
    let mut in_queue = vec![true; n];
    let mut relax_count = vec![0usize; n];
    let mut q: VecDeque<usize> = (0..n).collect();
    while let Some(u) = q.pop_front() {
        in_queue[u] = false;
        for &(v, w) in &out[u] {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                relax_count[v] += 1;
                if relax_count[v] > n {
                    return None;
                }
                if !in_queue[v] {
                    in_queue[v] = true;
                    q.push_back(v);
                }
            }
        }
    }
    Some(dist)
}
