//! Planar instances where every vertex wants exactly half its edges
//! incoming, in alternating order or not: 2-colour the faces and keep the
//! black face on each edge's left.

use std::collections::VecDeque;

use crate::embedding::{euler_check, face_set};
use crate::error::{Error, Result};
use crate::instance::{validate, Instance, Orientation};
use crate::kind::VertexKind;

pub fn two_color_orient(inst: &Instance) -> Result<Orientation> {
    if !inst.has_rotation() || !euler_check(inst)? {
        return Err(Error::Precondition("two-colouring needs a planar rotation system".into()));
    }
    for v in 0..inst.num_vertices() {
        let ok = match inst.kind(v) {
            VertexKind::Alternator(k) => k % 2 == 0,
            k => k.as_symmetric().and_then(|s| s.is_singleton().map(|i| 2 * i == s.arity)).unwrap_or(false),
        };
        if !ok {
            return Err(Error::Precondition(format!("vertex {} is not balanced ({})", inst.name(v), inst.kind(v))));
        }
    }
    let fs = face_set(inst)?;
    let nf = fs.faces.len();
    let mut adj = vec![Vec::new(); nf];
    for e in 0..inst.num_edges() {
        let (l, r) = (fs.face_of[2 * e], fs.face_of[2 * e + 1]);
        if l == r {
            return Err(Error::Internal("dual graph is not bipartite (edge with one face on both sides)".into()));
        }
        adj[l].push(r);
        adj[r].push(l);
    }
    let mut color = vec![u8::MAX; nf];
    for s in 0..nf {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(f) = q.pop_front() {
            for &g in &adj[f] {
                if color[g] == u8::MAX {
                    color[g] = 1 - color[f];
                    q.push_back(g);
                } else if color[g] == color[f] {
                    return Err(Error::Internal("dual graph is not bipartite".into()));
                }
            }
        }
    }
    let o = Orientation((0..inst.num_edges()).map(|e| color[fs.face_of[2 * e]] == 0).collect());
    if !validate(inst, &o).is_empty() {
        return Err(Error::Internal("face two-colouring did not give a valid orientation".into()));
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstanceBuilder;

    #[test]
    fn single_vertex_two_loops() {
        let mut b = InstanceBuilder::new();
        let x = b.add_vertex("x", VertexKind::exactly(2, 4));
        b.add_edge(x, 0, x, 1);
        b.add_edge(x, 2, x, 3);
        b.set_rotation(x, vec![0, 1, 2, 3]);
        let inst = b.build().unwrap();
        let o = two_color_orient(&inst).unwrap();
        assert!(validate(&inst, &o).is_empty());
    }

    #[test]
    fn alternator_pair() {
        let mut b = InstanceBuilder::new();
        let x = b.add_vertex("x", VertexKind::Alternator(4));
        let y = b.add_vertex("y", VertexKind::Alternator(4));
        for p in 0..4 {
            b.add_edge(x, p, y, 3 - p);
        }
        b.set_rotation(x, vec![0, 1, 2, 3]);
        b.set_rotation(y, vec![0, 1, 2, 3]);
        let inst = b.build().unwrap();
        assert!(euler_check(&inst).unwrap());
        let o = two_color_orient(&inst).unwrap();
        assert!(validate(&inst, &o).is_empty());
    }

    #[test]
    fn torus_like_grid_interior() {
        // 3x3 grid of 2-in-4 vertices, boundary ports closed with loops
        // between the two free ports of each corner/side in rotation order.
        let g = crate::solve::lp::tests::grid_2in4(3);
        let o = two_color_orient(&g).unwrap();
        assert!(validate(&g, &o).is_empty());
    }
}
