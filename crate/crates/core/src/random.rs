//! Seeded random instances for tests and benchmarks.
//!
//! A skeleton is built first (a random multigraph, optionally embedded in the
//! plane), then every vertex gets a kind chosen from its degree.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::embedding::faces_of_rotation;
use crate::error::Result;
use crate::instance::{Instance, InstanceBuilder};
use crate::kind::VertexKind;

/// Multigraph with ports numbered in counter-clockwise order when planar.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub degree: Vec<usize>,
    /// `(u, port, v, port)`.
    pub edges: Vec<(usize, usize, usize, usize)>,
    pub planar: bool,
}

impl Skeleton {
    /// Build an instance, asking `kind` for a type of each degree.
    pub fn instance<R: Rng>(&self, rng: &mut R, mut kind: impl FnMut(&mut R, usize) -> VertexKind) -> Result<Instance> {
        let mut b = InstanceBuilder::new();
        for (v, &d) in self.degree.iter().enumerate() {
            b.add_vertex(format!("v{v}"), kind(rng, d));
            if self.planar {
                b.set_rotation(v, (0..d).collect());
            }
        }
        for &(u, p, v, q) in &self.edges {
            b.add_edge(u, p, v, q);
        }
        b.build()
    }
}

fn finish(rot: Vec<Vec<usize>>, m: usize, planar: bool) -> Skeleton {
    // Drop isolated vertices.
    let keep: Vec<usize> = (0..rot.len()).filter(|&v| !rot[v].is_empty()).collect();
    let mut port = vec![(0, 0); 2 * m];
    for (i, &v) in keep.iter().enumerate() {
        for (p, &d) in rot[v].iter().enumerate() {
            port[d] = (i, p);
        }
    }
    Skeleton {
        degree: keep.iter().map(|&v| rot[v].len()).collect(),
        edges: (0..m).map(|e| (port[2 * e].0, port[2 * e].1, port[2 * e + 1].0, port[2 * e + 1].1)).collect(),
        planar,
    }
}

/// Random plane multigraph: a random tree (or forest, if `m < n - 1`) with
/// the remaining edges drawn inside random faces.
pub fn planar_skeleton<R: Rng>(rng: &mut R, n: usize, m: usize, loops: bool) -> Skeleton {
    let n = n.max(1);
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut ends: Vec<[usize; 2]> = Vec::new();
    for v in 1..n {
        if ends.len() == m {
            break;
        }
        let u = rng.gen_range(0..v);
        let e = ends.len();
        ends.push([u, v]);
        let pos = rng.gen_range(0..=rot[u].len());
        rot[u].insert(pos, 2 * e);
        rot[v].push(2 * e + 1);
    }
    while ends.len() < m {
        let e = ends.len();
        if e == 0 {
            if !loops {
                break;
            }
            ends.push([0, 0]);
            rot[0] = vec![0, 1];
            continue;
        }
        let fs = faces_of_rotation(&rot, 2 * e);
        let mut placed = false;
        for _ in 0..20 {
            let walk = &fs.faces[rng.gen_range(0..fs.faces.len())];
            let (d1, d2) = (walk[rng.gen_range(0..walk.len())], walk[rng.gen_range(0..walk.len())]);
            let (u, v) = (ends[d1 / 2][d1 % 2], ends[d2 / 2][d2 % 2]);
            if u == v && !loops {
                continue;
            }
            ends.push([u, v]);
            // The corner of a face at dart d sits just after d.
            let i = rot[u].iter().position(|&x| x == d1).unwrap();
            rot[u].insert(i + 1, 2 * e);
            let j = rot[v].iter().position(|&x| x == d2).unwrap();
            rot[v].insert(j + 1, 2 * e + 1);
            placed = true;
            break;
        }
        if !placed {
            break;
        }
    }
    let m = ends.len();
    finish(rot, m, true)
}

/// Random multigraph with no embedding.
pub fn general_skeleton<R: Rng>(rng: &mut R, n: usize, m: usize, loops: bool) -> Skeleton {
    let n = n.max(1);
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut e = 0;
    while e < m {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u == v && !loops {
            if n == 1 {
                break;
            }
            continue;
        }
        rot[u].push(2 * e);
        rot[v].push(2 * e + 1);
        e += 1;
    }
    finish(rot, e, false)
}

/// Random non-crossing perfect matching of `0..n` (`n` even).
fn non_crossing<R: Rng>(rng: &mut R, lo: usize, hi: usize, out: &mut Vec<(usize, usize)>) {
    if lo >= hi {
        return;
    }
    // Partner of `lo` sits an odd distance away.
    let k = rng.gen_range(0..(hi - lo) / 2);
    let mate = lo + 2 * k + 1;
    out.push((lo, mate));
    non_crossing(rng, lo + 1, mate, out);
    non_crossing(rng, mate + 1, hi, out);
}

/// Random instance whose vertex kinds are drawn from `pool`, with at most
/// `max_edges` edges. Ports are laid out along a line and paired by a
/// non-crossing matching when `planar`, which also fixes the rotation.
/// `None` if no even port total could be reached.
pub fn pool_instance<R: Rng>(rng: &mut R, pool: &[VertexKind], max_edges: usize, planar: bool) -> Option<Instance> {
    let pool: Vec<&VertexKind> = pool.iter().filter(|k| k.arity() > 0 && k.arity() <= 2 * max_edges).collect();
    if pool.is_empty() {
        return None;
    }
    let target = rng.gen_range(1..=2 * max_edges);
    let mut kinds: Vec<VertexKind> = Vec::new();
    let mut ports = 0;
    for _ in 0..64 {
        if ports >= target && ports % 2 == 0 {
            break;
        }
        let k = pool[rng.gen_range(0..pool.len())];
        if ports + k.arity() > 2 * max_edges {
            continue;
        }
        ports += k.arity();
        kinds.push(k.clone());
    }
    if ports % 2 == 1 || ports == 0 {
        return None;
    }
    let mut owner = Vec::with_capacity(ports);
    for (v, k) in kinds.iter().enumerate() {
        owner.extend((0..k.arity()).map(|p| (v, p)));
    }
    let mut pairs = Vec::new();
    if planar {
        non_crossing(rng, 0, ports, &mut pairs);
    } else {
        let mut order: Vec<usize> = (0..ports).collect();
        order.shuffle(rng);
        pairs = order.chunks(2).map(|c| (c[0], c[1])).collect();
    }
    let mut b = InstanceBuilder::new();
    for (v, k) in kinds.iter().enumerate() {
        b.add_vertex(format!("v{v}"), k.clone());
        if planar {
            // Arcs above the line meet a vertex's ports right to left.
            b.set_rotation(v, (0..k.arity()).rev().collect());
        }
    }
    for (x, y) in pairs {
        b.add_edge(owner[x].0, owner[x].1, owner[y].0, owner[y].1);
    }
    b.build().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::euler_check;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn planar_skeletons_are_planar() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in 0..300 {
            let n = 1 + t % 9;
            let m = t % 13;
            let s = planar_skeleton(&mut rng, n, m, t % 2 == 0);
            let inst = s.instance(&mut rng, |_, d| VertexKind::sym(d, &[0])).unwrap();
            if inst.num_vertices() > 0 {
                assert!(euler_check(&inst).unwrap(), "n={n} m={m}");
            }
            assert!(s.degree.iter().all(|&d| d > 0));
        }
    }

    #[test]
    fn pool_instances_are_planar() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pool = [VertexKind::exactly(1, 3), VertexKind::Alternator(4), VertexKind::Constant(crate::kind::Direction::In)];
        let mut made = 0;
        for _ in 0..300 {
            if let Some(inst) = pool_instance(&mut rng, &pool, 10, true) {
                assert!(inst.num_edges() <= 10);
                assert!(euler_check(&inst).unwrap());
                made += 1;
            }
        }
        assert!(made > 200);
    }

    #[test]
    fn general_skeleton_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = general_skeleton(&mut rng, 5, 8, false);
        assert_eq!(s.edges.len(), 8);
        assert!(s.edges.iter().all(|&(u, _, v, _)| u != v));
        assert_eq!(s.degree.iter().sum::<usize>(), 16);
    }
}
