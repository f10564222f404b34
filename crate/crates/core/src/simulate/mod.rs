//! Gadgets: instances with external edges, their derived types, and
//! substitution into host instances.

pub mod construct;
pub mod library;

use std::collections::HashMap;

use num_integer::Integer;

use crate::embedding::face_set;
use crate::error::{Error, Result};
use crate::format::Document;
use crate::instance::{Edge, Endpoint, Instance};
use crate::kind::VertexKind;
use crate::relation::{DuplicatorInfo, Relation};
use crate::search::{Search, DEFAULT_EDGE_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub instance: Instance,
    /// External vertices in port order.
    pub externals: Vec<usize>,
    pub outer_face: Option<usize>,
}

impl Gadget {
    pub fn new(instance: Instance, externals: Vec<usize>, outer_face: Option<usize>) -> Result<Self> {
        let mut listed = vec![false; instance.num_vertices()];
        for &x in &externals {
            if x >= instance.num_vertices() || !matches!(instance.kind(x), VertexKind::External) {
                return Err(Error::Invalid(format!("external #{x} is not an External vertex")));
            }
            if std::mem::replace(&mut listed[x], true) {
                return Err(Error::Invalid(format!("external {} listed twice", instance.name(x))));
            }
        }
        for v in 0..instance.num_vertices() {
            if matches!(instance.kind(v), VertexKind::External) && !listed[v] {
                return Err(Error::Invalid(format!("External vertex {} missing from externals", instance.name(v))));
            }
        }
        let g = Gadget { instance, externals, outer_face };
        if let Some(f) = outer_face {
            if !g.externals_on_face(f)? {
                return Err(Error::Invalid(format!("not every external edge lies on face {f}")));
            }
        }
        Ok(g)
    }

    pub fn from_document(doc: &Document) -> Result<Self> {
        Gadget::new(doc.instance.clone(), doc.externals.clone(), doc.outer)
    }

    pub fn to_document(&self, target: Option<VertexKind>) -> Document {
        Document { instance: self.instance.clone(), externals: self.externals.clone(), outer: self.outer_face, target }
    }

    pub fn arity(&self) -> usize {
        self.externals.len()
    }

    /// (edge, side of the external vertex) for external port `i`.
    pub fn external_edge(&self, i: usize) -> (usize, usize) {
        self.instance.slot(self.externals[i], 0)
    }

    fn externals_on_face(&self, f: usize) -> Result<bool> {
        let fs = face_set(&self.instance)?;
        Ok((0..self.arity()).all(|i| {
            let (e, side) = self.external_edge(i);
            fs.face_of[2 * e + side] == f
        }))
    }

    /// A face containing every external edge, if the gadget has a rotation.
    pub fn find_outer_face(&self) -> Option<usize> {
        let fs = face_set(&self.instance).ok()?;
        let mut cands: Option<usize> = None;
        for i in 0..self.arity() {
            let (e, side) = self.external_edge(i);
            let f = fs.face_of[2 * e + side];
            match cands {
                None => cands = Some(f),
                Some(c) if c != f => return None,
                _ => {}
            }
        }
        cands.or(if fs.faces.is_empty() { None } else { Some(0) })
    }
}

/// Edge cap from the environment (`GO_ENUM_CAP`) or the default.
pub fn env_edge_cap() -> usize {
    std::env::var("GO_ENUM_CAP").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_EDGE_CAP)
}

pub fn derived_type(g: &Gadget) -> Result<Relation> {
    derived_type_with_cap(g, DEFAULT_EDGE_CAP)
}

/// External patterns that extend to a satisfying orientation. Bit `i` is 1
/// when external edge `i` points toward the gadget interior.
pub fn derived_type_with_cap(g: &Gadget, cap: usize) -> Result<Relation> {
    let inst = &g.instance;
    if inst.num_edges() > cap {
        return Err(Error::CapExceeded { size: inst.num_edges(), cap });
    }
    let k = g.arity();
    let mut first = Vec::with_capacity(k);
    let mut seen = vec![false; inst.num_edges()];
    for i in 0..k {
        let (e, _) = g.external_edge(i);
        if !seen[e] {
            seen[e] = true;
            first.push(e);
        }
    }
    let mut search = Search::new(inst, &first);
    let prefixes = search.projections(first.len());
    let pos: HashMap<usize, usize> = first.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut words = Vec::with_capacity(prefixes.len());
    for dirs in prefixes {
        let mut w = 0u64;
        for i in 0..k {
            let (e, side) = g.external_edge(i);
            let d = dirs[pos[&e]];
            // The external vertex's own port bit is `d` on side B, `!d` on side A.
            let external_in = if side == 1 { d } else { !d };
            if !external_in {
                w |= 1 << i;
            }
        }
        words.push(w);
    }
    Relation::new(k, words)
}

pub fn simulates(g: &Gadget, target: &Relation) -> Result<bool> {
    Ok(&derived_type(g)? == target)
}

pub fn simulates_with_cap(g: &Gadget, target: &Relation, cap: usize) -> Result<bool> {
    Ok(&derived_type_with_cap(g, cap)? == target)
}

/// Comparison that ignores the external ordering.
pub fn simulates_up_to_permutation(g: &Gadget, target: &Relation) -> Result<bool> {
    Ok(derived_type(g)?.equal_up_to_permutation(target))
}

/// Replace `vertex` of `host` by the interior of `g`; host port `p` is
/// wired to external `p`. Interior vertices are renamed `<vertex>/<name>`.
pub fn substitute(host: &Instance, vertex: usize, g: &Gadget) -> Result<Instance> {
    if host.arity(vertex) != g.arity() {
        return Err(Error::Precondition(format!(
            "vertex {} has arity {} but gadget has {} externals",
            host.name(vertex),
            host.arity(vertex),
            g.arity()
        )));
    }
    let gi = &g.instance;
    let prefix = host.name(vertex).to_string();
    let mut names = Vec::new();
    let mut kinds = Vec::new();
    let mut rot = Vec::new();
    let mut host_map = vec![usize::MAX; host.num_vertices()];
    for v in 0..host.num_vertices() {
        if v != vertex {
            host_map[v] = names.len();
            names.push(host.name(v).to_string());
            kinds.push(host.kind(v).clone());
            rot.push(host.rotation(v).map(|r| r.to_vec()));
        }
    }
    let mut g_map = vec![usize::MAX; gi.num_vertices()];
    let mut ext_port = vec![usize::MAX; gi.num_vertices()];
    for (i, &x) in g.externals.iter().enumerate() {
        ext_port[x] = i;
    }
    for v in 0..gi.num_vertices() {
        if ext_port[v] == usize::MAX {
            g_map[v] = names.len();
            names.push(format!("{prefix}/{}", gi.name(v)));
            kinds.push(gi.kind(v).clone());
            rot.push(gi.rotation(v).map(|r| r.to_vec()));
        }
    }
    // A "real" endpoint belongs to a kept host vertex or an interior gadget vertex.
    #[derive(Clone, Copy)]
    enum End {
        Host(Endpoint),
        Gadget(Endpoint),
    }
    let other_in_gadget = |x: usize| -> Endpoint {
        let (e, side) = gi.slot(x, 0);
        gi.edge(e).end(1 - side)
    };
    let other_in_host = |p: usize| -> Endpoint {
        let (e, side) = host.slot(vertex, p);
        host.edge(e).end(1 - side)
    };
    // Follow a chain starting at a real endpoint until another real endpoint
    // is reached. Returns the far end and marks visited host ports.
    let mut used_port = vec![false; g.arity()];
    let follow = |start: End, used_port: &mut Vec<bool>| -> Option<End> {
        let mut cur = start;
        loop {
            match cur {
                End::Host(ep) if ep.vertex == vertex => {
                    used_port[ep.port] = true;
                    let inner = other_in_gadget(g.externals[ep.port]);
                    cur = End::Gadget(inner);
                    if ext_port[inner.vertex] == usize::MAX {
                        return Some(cur);
                    }
                }
                End::Gadget(ep) if ext_port[ep.vertex] != usize::MAX => {
                    let p = ext_port[ep.vertex];
                    used_port[p] = true;
                    let h = other_in_host(p);
                    cur = End::Host(h);
                    if h.vertex != vertex {
                        return Some(cur);
                    }
                }
                _ => return Some(cur),
            }
        }
    };
    let mut edges = Vec::new();
    let map_end = |e: End| -> Endpoint {
        match e {
            End::Host(ep) => Endpoint::new(host_map[ep.vertex], ep.port),
            End::Gadget(ep) => Endpoint::new(g_map[ep.vertex], ep.port),
        }
    };
    for edge in host.edges() {
        let (a, b) = (edge.a, edge.b);
        if a.vertex != vertex && b.vertex != vertex {
            edges.push(Edge { a: map_end(End::Host(a)), b: map_end(End::Host(b)) });
        } else if a.vertex != vertex {
            let far = follow(End::Host(b), &mut used_port).unwrap();
            edges.push(Edge { a: map_end(End::Host(a)), b: map_end(far) });
        } else if b.vertex != vertex {
            if !used_port[a.port] {
                let far = follow(End::Host(a), &mut used_port).unwrap();
                edges.push(Edge { a: map_end(far), b: map_end(End::Host(b)) });
            }
        }
    }
    // Avoid emitting a chain twice when both ends were reached from the host side.
    let mut seen_pairs: std::collections::HashSet<(Endpoint, Endpoint)> =
        edges.iter().map(|e| (e.a, e.b)).collect();
    for edge in gi.edges() {
        let (a, b) = (edge.a, edge.b);
        let a_ext = ext_port[a.vertex] != usize::MAX;
        let b_ext = ext_port[b.vertex] != usize::MAX;
        if !a_ext && !b_ext {
            edges.push(Edge { a: map_end(End::Gadget(a)), b: map_end(End::Gadget(b)) });
        } else if a_ext != b_ext {
            let (real, ext) = if a_ext { (b, a) } else { (a, b) };
            if used_port[ext_port[ext.vertex]] {
                continue;
            }
            let far = follow(End::Gadget(ext), &mut used_port).unwrap();
            let (ra, rb) = (map_end(End::Gadget(real)), map_end(far));
            let pair = if a_ext { (rb, ra) } else { (ra, rb) };
            if seen_pairs.insert(pair) {
                edges.push(Edge { a: pair.0, b: pair.1 });
            }
        }
    }
    let rotation = if rot.iter().all(|r| r.is_some()) && host.has_rotation() && gi.has_rotation() {
        Some(rot.into_iter().map(|r| r.unwrap()).collect())
    } else {
        None
    };
    Instance::new(names, kinds, edges, rotation)
}

/// A set of duplicator types.
#[derive(Debug, Clone)]
pub struct DuplicatorSet {
    members: Vec<(Relation, DuplicatorInfo)>,
}

impl DuplicatorSet {
    /// Each member with the cyclic order used to judge alternation.
    pub fn new(members: Vec<(Relation, Vec<usize>)>) -> Result<Self> {
        let mut out = Vec::new();
        for (r, rot) in members {
            let info = r
                .duplicator_info(&rot)
                .ok_or_else(|| Error::Precondition(format!("{r:?} is not a duplicator")))?;
            out.push((r, info));
        }
        Ok(DuplicatorSet { members: out })
    }

    pub fn from_relations(members: Vec<Relation>) -> Result<Self> {
        DuplicatorSet::new(
            members
                .into_iter()
                .map(|r| {
                    let rot = (0..r.arity()).collect();
                    (r, rot)
                })
                .collect(),
        )
    }

    pub fn members(&self) -> &[(Relation, DuplicatorInfo)] {
        &self.members
    }

    pub fn has_nontrivial(&self) -> bool {
        self.members.iter().any(|(_, i)| !i.is_trivial)
    }

    /// Every non-trivial member is an alternator (and there is one).
    pub fn all_alternators(&self) -> bool {
        self.has_nontrivial() && self.members.iter().filter(|(_, i)| !i.is_trivial).all(|(_, i)| i.is_alternator)
    }

    /// gcd of all net flows (0 if every flow is 0).
    pub fn flow_gcd(&self) -> usize {
        self.members.iter().fold(0, |g, (_, i)| g.gcd(&i.net_flow))
    }

    /// Whether the set reaches a non-trivial non-alternator, directly or by
    /// combining an alternator with a trivial non-alternator.
    pub fn reaches_general(&self) -> bool {
        let has = |p: &dyn Fn(&DuplicatorInfo) -> bool| self.members.iter().any(|(_, i)| p(i));
        has(&|i| !i.is_trivial && !i.is_alternator)
            || (has(&|i| !i.is_trivial && i.is_alternator) && has(&|i| i.is_trivial && !i.is_alternator))
    }
}

/// Whether the set simulates a non-trivial non-alternator duplicator of net
/// flow `±f` (a synchronizer when `f = 0`).
pub fn can_simulate_netflow(ds: &DuplicatorSet, f: usize) -> bool {
    if !ds.reaches_general() {
        return false;
    }
    match ds.flow_gcd() {
        0 => f == 0,
        g => f % g == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstanceBuilder;
    use crate::kind::Direction;
    use crate::relation::SymmetricSpec;
    use crate::solve::brute::solve_brute;

    fn one_in_four_gadget() -> Gadget {
        let mut b = InstanceBuilder::new();
        let u = b.add_vertex("u", VertexKind::exactly(1, 3));
        let v = b.add_vertex("v", VertexKind::exactly(1, 3));
        b.add_edge(u, 2, v, 0);
        let xs: Vec<usize> = (0..4).map(|i| b.add_vertex(format!("x{i}"), VertexKind::External)).collect();
        b.add_edge(xs[0], 0, u, 0);
        b.add_edge(xs[1], 0, u, 1);
        b.add_edge(xs[2], 0, v, 1);
        b.add_edge(xs[3], 0, v, 2);
        Gadget::new(b.build().unwrap(), xs, None).unwrap()
    }

    #[test]
    fn two_one_in_three_make_one_in_four() {
        let g = one_in_four_gadget();
        assert_eq!(derived_type(&g).unwrap(), SymmetricSpec::exactly(1, 4).expand());
    }

    #[test]
    fn bare_edge_is_one_in_two() {
        let mut b = InstanceBuilder::new();
        let x = b.add_vertex("x", VertexKind::External);
        let y = b.add_vertex("y", VertexKind::External);
        b.add_edge(x, 0, y, 0);
        let g = Gadget::new(b.build().unwrap(), vec![x, y], None).unwrap();
        assert_eq!(derived_type(&g).unwrap(), SymmetricSpec::exactly(1, 2).expand());
    }

    #[test]
    fn single_vertex_gadget_is_its_type() {
        let r = Relation::from_strs(3, &["100", "011", "110"]).unwrap();
        let mut b = InstanceBuilder::new();
        let c = b.add_vertex("c", VertexKind::General(r.clone()));
        let xs: Vec<usize> = (0..3).map(|i| b.add_vertex(format!("x{i}"), VertexKind::External)).collect();
        for (i, &x) in xs.iter().enumerate() {
            b.add_edge(c, i, x, 0);
        }
        let g = Gadget::new(b.build().unwrap(), xs, None).unwrap();
        assert_eq!(derived_type(&g).unwrap(), r);
        let eq3 = VertexKind::Equalizer(3).expand();
        assert!(!simulates(&g, &eq3).unwrap());
    }

    #[test]
    fn substitution_preserves_satisfiability() {
        // Host: a 1-in-4 vertex with four constants.
        for pattern in 0u32..16 {
            let mut b = InstanceBuilder::new();
            let h = b.add_vertex("h", VertexKind::exactly(1, 4));
            for p in 0..4 {
                let d = if pattern >> p & 1 == 1 { Direction::Out } else { Direction::In };
                let c = b.add_vertex(format!("c{p}"), VertexKind::Constant(d));
                b.add_edge(c, 0, h, p);
            }
            let host = b.build().unwrap();
            let sub = substitute(&host, h, &one_in_four_gadget()).unwrap();
            assert_eq!(solve_brute(&host).unwrap().is_some(), solve_brute(&sub).unwrap().is_some());
        }
    }

    #[test]
    fn substitute_into_cycle() {
        let mut b = InstanceBuilder::new();
        let vs: Vec<usize> = (0..3).map(|i| b.add_vertex(format!("v{i}"), VertexKind::exactly(1, 2))).collect();
        for i in 0..3 {
            b.add_edge(vs[i], 1, vs[(i + 1) % 3], 0);
        }
        let host = b.build().unwrap();
        let mut g = InstanceBuilder::new();
        let a = g.add_vertex("a", VertexKind::exactly(1, 2));
        let c = g.add_vertex("c", VertexKind::exactly(1, 2));
        let x = g.add_vertex("x", VertexKind::External);
        let y = g.add_vertex("y", VertexKind::External);
        g.add_edge(x, 0, a, 0);
        g.add_edge(a, 1, c, 0);
        g.add_edge(c, 1, y, 0);
        let gadget = Gadget::new(g.build().unwrap(), vec![x, y], None).unwrap();
        let sub = substitute(&host, 1, &gadget).unwrap();
        assert_eq!(sub.num_vertices(), 4);
        assert_eq!(sub.num_edges(), 4);
        assert!(solve_brute(&sub).unwrap().is_some());
    }

    #[test]
    fn netflow_rules() {
        let eq = |k| VertexKind::Equalizer(k).expand();
        let ds = DuplicatorSet::from_relations(vec![eq(4), eq(3)]).unwrap();
        assert!(can_simulate_netflow(&ds, 1));
        let ds = DuplicatorSet::from_relations(vec![eq(2), eq(3)]).unwrap();
        assert!(can_simulate_netflow(&ds, 1) && can_simulate_netflow(&ds, 0));
        let mixed = DuplicatorSet::from_relations(vec![VertexKind::Alternator(4).expand(), eq(2)]).unwrap();
        assert!(can_simulate_netflow(&mixed, 4) && !can_simulate_netflow(&mixed, 3));
        let ds = DuplicatorSet::from_relations(vec![eq(4), eq(6)]).unwrap();
        assert!(can_simulate_netflow(&ds, 2) && !can_simulate_netflow(&ds, 3));
        let alts = DuplicatorSet::from_relations(vec![VertexKind::Alternator(4).expand()]).unwrap();
        assert!(!can_simulate_netflow(&alts, 0));
        let trivial = DuplicatorSet::from_relations(vec![eq(2), eq(1)]).unwrap();
        assert!(!can_simulate_netflow(&trivial, 3));
        let sync = DuplicatorSet::from_relations(vec![VertexKind::Synchronizer.expand()]).unwrap();
        assert!(can_simulate_netflow(&sync, 0) && !can_simulate_netflow(&sync, 1));
    }
}
