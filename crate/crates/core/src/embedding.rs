//! Faces of a rotation system.
//!
//! Dart `2e + s` is the half of edge `e` at endpoint `s`, directed away from
//! that endpoint. Rotations list ports counter-clockwise; a face walk keeps
//! the face on its left.

use crate::error::{Error, Result};
use crate::instance::Instance;

pub fn twin(d: usize) -> usize {
    d ^ 1
}

/// Darts around each vertex in counter-clockwise order.
pub fn dart_rotation(inst: &Instance) -> Result<Vec<Vec<usize>>> {
    let rot = inst.rotations().ok_or_else(|| Error::Rotation("instance has no rotation system".into()))?;
    Ok(rot
        .iter()
        .enumerate()
        .map(|(v, order)| {
            order
                .iter()
                .map(|&p| {
                    let (e, side) = inst.slot(v, p);
                    2 * e + side
                })
                .collect()
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct FaceSet {
    /// Dart cycles, each listed in walking order.
    pub faces: Vec<Vec<usize>>,
    /// Face on the left of each dart; `usize::MAX` for darts not in the rotation.
    pub face_of: Vec<usize>,
}

impl FaceSet {
    /// Face on the right of dart `d`.
    pub fn right(&self, d: usize) -> usize {
        self.face_of[twin(d)]
    }

    pub fn left(&self, d: usize) -> usize {
        self.face_of[d]
    }
}

/// Faces of a rotation given directly on darts. Only darts that appear in
/// `rot` take part; each such dart's twin must appear too.
pub fn faces_of_rotation(rot: &[Vec<usize>], num_darts: usize) -> FaceSet {
    let mut pred = vec![usize::MAX; num_darts];
    for darts in rot {
        let n = darts.len();
        for i in 0..n {
            pred[darts[i]] = darts[(i + n - 1) % n];
        }
    }
    let mut face_of = vec![usize::MAX; num_darts];
    let mut faces = Vec::new();
    for start in 0..num_darts {
        if pred[start] == usize::MAX || face_of[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut walk = Vec::new();
        let mut d = start;
        loop {
            face_of[d] = id;
            walk.push(d);
            d = pred[twin(d)];
            if d == start {
                break;
            }
        }
        faces.push(walk);
    }
    FaceSet { faces, face_of }
}

pub fn face_set(inst: &Instance) -> Result<FaceSet> {
    let rot = dart_rotation(inst)?;
    Ok(faces_of_rotation(&rot, 2 * inst.num_edges()))
}

/// Face walks as dart lists.
pub fn faces(inst: &Instance) -> Result<Vec<Vec<usize>>> {
    Ok(face_set(inst)?.faces)
}

/// Vertex sequence of a face walk.
pub fn face_vertices(inst: &Instance, walk: &[usize]) -> Vec<usize> {
    walk.iter().map(|&d| inst.edge(d / 2).end(d % 2).vertex).collect()
}

/// `V - E + F = 2` on every connected component.
pub fn euler_check(inst: &Instance) -> Result<bool> {
    let fs = face_set(inst)?;
    let (label, count) = inst.components();
    let mut v = vec![0i64; count];
    let mut e = vec![0i64; count];
    let mut f = vec![0i64; count];
    for x in 0..inst.num_vertices() {
        v[label[x]] += 1;
        if inst.arity(x) == 0 {
            f[label[x]] += 1;
        }
    }
    for edge in inst.edges() {
        e[label[edge.a.vertex]] += 1;
    }
    for walk in &fs.faces {
        let d = walk[0];
        f[label[inst.edge(d / 2).end(d % 2).vertex]] += 1;
    }
    Ok((0..count).all(|c| v[c] - e[c] + f[c] == 2))
}
