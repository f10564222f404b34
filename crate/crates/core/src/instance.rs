use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kind::VertexKind;
use crate::relation::Relation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Endpoint {
    pub vertex: usize,
    pub port: usize,
}

impl Endpoint {
    pub fn new(vertex: usize, port: usize) -> Self {
        Endpoint { vertex, port }
    }
}

/// An undirected edge. Orienting it A→B sets B's port bit to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub a: Endpoint,
    pub b: Endpoint,
}

impl Edge {
    pub fn end(&self, side: usize) -> Endpoint {
        if side == 0 {
            self.a
        } else {
            self.b
        }
    }

    pub fn is_loop(&self) -> bool {
        self.a.vertex == self.b.vertex
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Instance {
    names: Vec<String>,
    kinds: Vec<VertexKind>,
    edges: Vec<Edge>,
    rotation: Option<Vec<Vec<usize>>>,
    /// `slots[v][p]` = (edge, side) occupying port `p` of `v`.
    slots: Vec<Vec<(usize, usize)>>,
}

impl std::fmt::Debug for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::format::to_text(self, None))
    }
}

impl Instance {
    pub fn new(
        names: Vec<String>,
        kinds: Vec<VertexKind>,
        edges: Vec<Edge>,
        rotation: Option<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if names.len() != kinds.len() {
            return Err(Error::Invalid("names and kinds differ in length".into()));
        }
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if seen.insert(n.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate vertex id {n}")));
            }
        }
        let mut slots: Vec<Vec<Option<(usize, usize)>>> = kinds.iter().map(|k| vec![None; k.arity()]).collect();
        for (e, edge) in edges.iter().enumerate() {
            for side in 0..2 {
                let ep = edge.end(side);
                let Some(ports) = slots.get_mut(ep.vertex) else {
                    return Err(Error::Invalid(format!("edge {e} uses unknown vertex {}", ep.vertex)));
                };
                let name = &names[ep.vertex];
                match ports.get_mut(ep.port) {
                    None => {
                        return Err(Error::Invalid(format!("edge {e}: {name} has no port {}", ep.port)));
                    }
                    Some(Some(_)) => {
                        return Err(Error::Invalid(format!("port {}.{} used twice", name, ep.port)));
                    }
                    Some(slot) => *slot = Some((e, side)),
                }
            }
        }
        let mut full = Vec::with_capacity(slots.len());
        for (v, ports) in slots.into_iter().enumerate() {
            let mut row = Vec::with_capacity(ports.len());
            for (p, s) in ports.into_iter().enumerate() {
                match s {
                    Some(x) => row.push(x),
                    None => return Err(Error::Invalid(format!("port {}.{p} is not used by any edge", names[v]))),
                }
            }
            full.push(row);
        }
        if let Some(rot) = &rotation {
            if rot.len() != kinds.len() {
                return Err(Error::Rotation(format!("{} rotations for {} vertices", rot.len(), kinds.len())));
            }
            for (v, r) in rot.iter().enumerate() {
                let j = kinds[v].arity();
                let mut hit = vec![false; j];
                if r.len() != j {
                    return Err(Error::Rotation(format!("vertex {} has arity {j} but rotation of {}", names[v], r.len())));
                }
                for &p in r {
                    if p >= j || hit[p] {
                        return Err(Error::Rotation(format!("vertex {} rotation is not a permutation", names[v])));
                    }
                    hit[p] = true;
                }
            }
        }
        Ok(Instance { names, kinds, edges, rotation, slots: full })
    }

    pub fn num_vertices(&self) -> usize {
        self.kinds.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn kind(&self, v: usize) -> &VertexKind {
        &self.kinds[v]
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn arity(&self, v: usize) -> usize {
        self.slots[v].len()
    }

    /// (edge, side) at port `p` of `v`.
    pub fn slot(&self, v: usize, p: usize) -> (usize, usize) {
        self.slots[v][p]
    }

    pub fn has_rotation(&self) -> bool {
        self.rotation.is_some()
    }

    pub fn rotation(&self, v: usize) -> Option<&[usize]> {
        self.rotation.as_ref().map(|r| r[v].as_slice())
    }

    pub fn rotations(&self) -> Option<&Vec<Vec<usize>>> {
        self.rotation.as_ref()
    }

    /// The explicit relation at `v`; alternators follow the rotation if any.
    pub fn relation(&self, v: usize) -> Relation {
        self.kinds[v].expand_with_order(self.rotation(v))
    }

    pub fn allows(&self, v: usize, word: u64) -> bool {
        self.kinds[v].allows(word, self.rotation(v))
    }

    /// Other endpoint's vertex for every port of `v`.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.slots[v].iter().map(|&(e, side)| self.edges[e].end(1 - side).vertex).collect()
    }

    /// Same graph with every vertex type reversed.
    pub fn reversed(&self) -> Instance {
        Instance {
            names: self.names.clone(),
            kinds: self.kinds.iter().map(|k| k.reverse()).collect(),
            edges: self.edges.clone(),
            rotation: self.rotation.clone(),
            slots: self.slots.clone(),
        }
    }

    pub fn with_kinds(&self, kinds: Vec<VertexKind>) -> Result<Instance> {
        Instance::new(self.names.clone(), kinds, self.edges.clone(), self.rotation.clone())
    }

    pub fn without_rotation(&self) -> Instance {
        let mut c = self.clone();
        c.rotation = None;
        c
    }

    /// Connected-component label for every vertex, and the count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.num_vertices();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            label[s] = count;
            while let Some(v) = stack.pop() {
                for u in self.neighbors(v) {
                    if label[u] == usize::MAX {
                        label[u] = count;
                        stack.push(u);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }
}

/// Incremental construction by vertex name.
#[derive(Default, Clone)]
pub struct InstanceBuilder {
    names: Vec<String>,
    kinds: Vec<VertexKind>,
    edges: Vec<Edge>,
    rotation: Vec<Option<Vec<usize>>>,
}

impl InstanceBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>, kind: VertexKind) -> usize {
        self.names.push(name.into());
        self.kinds.push(kind);
        self.rotation.push(None);
        self.names.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, p: usize, v: usize, q: usize) -> usize {
        self.edges.push(Edge { a: Endpoint::new(u, p), b: Endpoint::new(v, q) });
        self.edges.len() - 1
    }

    pub fn set_rotation(&mut self, v: usize, order: Vec<usize>) {
        self.rotation[v] = Some(order);
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn kind(&self, v: usize) -> &VertexKind {
        &self.kinds[v]
    }

    /// Rotation is kept only if every vertex has one.
    pub fn build(self) -> Result<Instance> {
        let rotation = if !self.rotation.is_empty() && self.rotation.iter().all(|r| r.is_some()) {
            Some(self.rotation.into_iter().map(|r| r.unwrap()).collect())
        } else if self.rotation.iter().any(|r| r.is_some()) {
            return Err(Error::Rotation("rotation given for some vertices but not all".into()));
        } else {
            None
        };
        Instance::new(self.names, self.kinds, self.edges, rotation)
    }
}

/// One direction per edge: `true` means A→B.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation(pub Vec<bool>);

impl Orientation {
    /// Port bit seen by endpoint `side` of edge `e`.
    pub fn bit(&self, e: usize, side: usize) -> bool {
        if side == 1 {
            self.0[e]
        } else {
            !self.0[e]
        }
    }

    pub fn word(&self, inst: &Instance, v: usize) -> u64 {
        let mut w = 0u64;
        for p in 0..inst.arity(v) {
            let (e, side) = inst.slot(v, p);
            if self.bit(e, side) {
                w |= 1 << p;
            }
        }
        w
    }

    pub fn in_degree(&self, inst: &Instance, v: usize) -> usize {
        self.word(inst, v).count_ones() as usize
    }

    pub fn reversed(&self) -> Orientation {
        Orientation(self.0.iter().map(|d| !d).collect())
    }
}

/// Vertices whose induced word is not allowed.
pub fn validate(inst: &Instance, o: &Orientation) -> Vec<usize> {
    assert_eq!(o.0.len(), inst.num_edges(), "orientation length mismatch");
    (0..inst.num_vertices()).filter(|&v| !inst.allows(v, o.word(inst, v))).collect()
}
