//! Gadget constructions for equalizers, synchronizers and general
//! duplicators. Every constructor checks its own output by enumeration.

use crate::error::{Error, Result};
use crate::instance::InstanceBuilder;
use crate::kind::{Direction, VertexKind};
use crate::relation::{full_mask, Relation, SymmetricSpec};

use super::{derived_type_with_cap, Gadget};

/// Edge cap used when a constructor checks its own output.
const SELF_CHECK_CAP: usize = 40;

fn self_check(g: Gadget, target: &Relation, what: &str) -> Result<Gadget> {
    let got = derived_type_with_cap(&g, SELF_CHECK_CAP.max(g.instance.num_edges()))?;
    if &got != target {
        return Err(Error::Internal(format!("{what}: derived {got:?}, expected {target:?}")));
    }
    Ok(g)
}

fn bit(w: u64, p: usize) -> bool {
    w >> p & 1 == 1
}

/// `a` forced-in edges and `j - (a + k)` forced-out edges on one `S`-in-`j`
/// vertex leave a `k`-equalizer on the remaining ports.
pub fn equalizer_from_gap(spec: &SymmetricSpec, a: usize, k: usize) -> Result<Gadget> {
    let j = spec.arity;
    if k == 0 || a + k > j || !spec.contains(a) || !spec.contains(a + k) || (a + 1..a + k).any(|x| spec.contains(x)) {
        return Err(Error::Precondition(format!("{spec} has no gap from {a} to {}", a + k)));
    }
    let mut b = InstanceBuilder::new();
    let v = b.add_vertex("v", VertexKind::Symmetric(spec.clone()));
    let mut rot = vec![0];
    let mut externals = Vec::new();
    for p in 0..j {
        let (name, kind) = if p < a {
            // Points into `v`, so the constant's own port points out.
            (format!("in{p}"), VertexKind::Constant(Direction::Out))
        } else if p < a + k {
            (format!("x{}", p - a), VertexKind::External)
        } else {
            (format!("out{p}"), VertexKind::Constant(Direction::In))
        };
        let u = b.add_vertex(name, kind.clone());
        b.add_edge(u, 0, v, p);
        b.set_rotation(u, rot.clone());
        if matches!(kind, VertexKind::External) {
            externals.push(u);
        }
    }
    rot = (0..j).collect();
    b.set_rotation(v, rot);
    let g = Gadget::new(b.build()?, externals, None)?;
    let outer = g.find_outer_face();
    let g = Gadget { outer_face: outer, ..g };
    self_check(g, &VertexKind::Equalizer(k).expand(), "equalizer_from_gap")
}

/// A duplicator vertex with some cyclically adjacent opposite ports
/// closed off by self-loops.
struct Reduced {
    /// Remaining ports in cyclic order.
    ports: Vec<usize>,
    loops: Vec<(usize, usize)>,
}

fn alternates(w: u64, ports: &[usize]) -> bool {
    let n = ports.len();
    n % 2 == 0 && (0..n).all(|i| bit(w, ports[i]) != bit(w, ports[(i + 1) % n]))
}

fn reduce(w: u64, rotation: &[usize], f: usize) -> Result<Reduced> {
    let target = match f {
        0 => 4,
        1 | 2 => f + 2,
        _ => f,
    };
    let mut ports = rotation.to_vec();
    let mut loops = Vec::new();
    while ports.len() > target {
        let n = ports.len();
        let pick = (0..n).find(|&i| {
            let (p, q) = (ports[i], ports[(i + 1) % n]);
            if bit(w, p) == bit(w, q) {
                return false;
            }
            if f > 0 {
                return true;
            }
            let rest: Vec<usize> = ports.iter().copied().filter(|&x| x != p && x != q).collect();
            !alternates(w, &rest)
        });
        let Some(i) = pick else {
            return Err(Error::Internal("no annihilable pair of ports".into()));
        };
        let (p, q) = (ports[i], ports[(i + 1) % n]);
        loops.push((p, q));
        ports.retain(|&x| x != p && x != q);
    }
    Ok(Reduced { ports, loops })
}

/// Synchronizer from a non-trivial non-alternator duplicator, with
/// alternation judged along ascending port order.
pub fn synchronizer_from(dup: &Relation) -> Result<Gadget> {
    let rot: Vec<usize> = (0..dup.arity()).collect();
    synchronizer_from_with_rotation(dup, &rot)
}

/// Annihilate opposite adjacent pairs with self-loops, then join two mirror
/// copies by all but two ports (or use the single copy when it is already
/// a degree-4 flow-0 duplicator).
pub fn synchronizer_from_with_rotation(dup: &Relation, rotation: &[usize]) -> Result<Gadget> {
    let info = dup
        .duplicator_info(rotation)
        .ok_or_else(|| Error::Precondition(format!("{dup:?} is not a duplicator")))?;
    if info.is_trivial || info.is_alternator {
        return Err(Error::Precondition("synchronizers need a non-trivial non-alternator duplicator".into()));
    }
    let f = info.net_flow;
    let w = dup.words().max_by_key(|w| w.count_ones()).unwrap();
    let red = reduce(w, rotation, f)?;
    let d = red.ports.len();

    let mut b = InstanceBuilder::new();
    let kind = if info.is_equalizer && dup.words().next() == Some(0) {
        VertexKind::Equalizer(dup.arity())
    } else {
        VertexKind::General(dup.clone())
    };
    let a = b.add_vertex("A", kind.clone());
    b.set_rotation(a, rotation.to_vec());
    let mut copies = vec![a];
    if f > 0 {
        let c = b.add_vertex("B", kind);
        b.set_rotation(c, rotation.iter().rev().copied().collect());
        copies.push(c);
    }
    for &c in &copies {
        for &(p, q) in &red.loops {
            b.add_edge(c, p, c, q);
        }
    }
    let bits: Vec<bool> = red.ports.iter().map(|&p| bit(w, p)).collect();
    let mut ext_ports: Vec<(usize, usize)> = Vec::new();
    if f == 0 {
        // Start where the cyclic pattern reads 1100.
        let i = (0..4)
            .find(|&i| bits[i] && bits[(i + 1) % 4] && !bits[(i + 2) % 4])
            .ok_or_else(|| Error::Internal("reduced duplicator is not a synchronizer".into()))?;
        for t in 0..4 {
            ext_ports.push((a, red.ports[(i + t) % 4]));
        }
    } else {
        let i = (0..d)
            .find(|&i| bits[i] == bits[(i + 1) % d])
            .ok_or_else(|| Error::Internal("no two adjacent equal ports".into()))?;
        let (x, y) = (red.ports[i], red.ports[(i + 1) % d]);
        ext_ports.extend([(a, x), (a, y), (copies[1], y), (copies[1], x)]);
        for &p in &red.ports {
            if p != x && p != y {
                b.add_edge(a, p, copies[1], p);
            }
        }
    }
    let mut externals = Vec::new();
    for (t, (c, p)) in ext_ports.into_iter().enumerate() {
        let x = b.add_vertex(format!("x{t}"), VertexKind::External);
        b.set_rotation(x, vec![0]);
        b.add_edge(x, 0, c, p);
        externals.push(x);
    }
    let g = Gadget::new(b.build()?, externals, None)?;
    let outer = g.find_outer_face();
    self_check(Gadget { outer_face: outer, ..g }, &VertexKind::Synchronizer.expand(), "synchronizer_from")
}

/// Net flow of a word: in-degree minus out-degree.
pub fn word_flow(w: u64, arity: usize) -> i64 {
    2 * w.count_ones() as i64 - arity as i64
}

/// Chain `|a_i|` copies of each duplicator with synchronizers, copy `i`
/// taken in its `+f_i` state when `a_i ≥ 0`. The result is a duplicator
/// of net flow `±Σ a_i f_i` whose externals are the unused duplicator
/// ports followed by the free synchronizer ports.
pub fn link_duplicators(parts: &[(Relation, i64)]) -> Result<Gadget> {
    let mut copies: Vec<(Relation, u64)> = Vec::new();
    for (r, a) in parts {
        if r.duplicator_info_default().is_none() {
            return Err(Error::Precondition(format!("{r:?} is not a duplicator")));
        }
        let mut ws: Vec<u64> = r.words().collect();
        ws.sort_by_key(|&w| std::cmp::Reverse(word_flow(w, r.arity())));
        let w = if *a >= 0 { ws[0] } else { ws[1] };
        for _ in 0..a.unsigned_abs() {
            copies.push((r.clone(), w));
        }
    }
    if copies.is_empty() {
        return Err(Error::Precondition("nothing to link".into()));
    }
    let n = copies.len();
    for (i, (r, _)) in copies.iter().enumerate() {
        let needed = usize::from(i > 0) + usize::from(i + 1 < n);
        if r.arity() < needed.max(1) {
            return Err(Error::Precondition("duplicator has too few ports to link".into()));
        }
    }
    let mut b = InstanceBuilder::new();
    let ids: Vec<usize> = copies
        .iter()
        .enumerate()
        .map(|(i, (r, _))| {
            let v = b.add_vertex(format!("d{i}"), VertexKind::General(r.clone()));
            b.set_rotation(v, (0..r.arity()).collect());
            v
        })
        .collect();
    let mut used: Vec<Vec<bool>> = copies.iter().map(|(r, _)| vec![false; r.arity()]).collect();
    let mut sync_free = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let p = used[i].iter().rposition(|u| !u).unwrap();
        let q = used[i + 1].iter().position(|u| !u).unwrap();
        used[i][p] = true;
        used[i + 1][q] = true;
        let s = b.add_vertex(format!("s{i}"), VertexKind::Synchronizer);
        b.set_rotation(s, vec![0, 1, 2, 3]);
        b.add_edge(s, 0, ids[i], p);
        if bit(copies[i].1, p) == bit(copies[i + 1].1, q) {
            b.add_edge(s, 1, ids[i + 1], q);
            sync_free.extend([(s, 2), (s, 3)]);
        } else {
            b.add_edge(s, 2, ids[i + 1], q);
            sync_free.extend([(s, 1), (s, 3)]);
        }
    }
    let mut free: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for p in 0..copies[i].0.arity() {
            if !used[i][p] {
                free.push((ids[i], p));
            }
        }
    }
    free.extend(sync_free);
    let mut externals = Vec::new();
    for (t, (v, p)) in free.into_iter().enumerate() {
        let x = b.add_vertex(format!("x{t}"), VertexKind::External);
        b.set_rotation(x, vec![0]);
        b.add_edge(x, 0, v, p);
        externals.push(x);
    }
    let g = Gadget::new(b.build()?, externals, None)?;
    let outer = g.find_outer_face();
    Ok(Gadget { outer_face: outer, ..g })
}

/// Simulate the duplicator `target` from a duplicator `inner` of the same
/// net flow. Ports of `inner` and externals that agree in direction are
/// wired together; each leftover in/out pair is joined by a path through a
/// synchronizer that sits on one wired connection, which keeps the
/// structure connected. The layout is not planar in general.
pub fn wrap_duplicator(inner: &Relation, target: &Relation) -> Result<Gadget> {
    let (Some(ii), Some(ti)) = (inner.duplicator_info_default(), target.duplicator_info_default()) else {
        return Err(Error::Precondition("wrap_duplicator needs two duplicators".into()));
    };
    if ii.net_flow != ti.net_flow {
        return Err(Error::Precondition(format!("net flows {} and {} differ", ii.net_flow, ti.net_flow)));
    }
    let t = target.words().max_by_key(|&w| word_flow(w, target.arity())).unwrap();
    let w = inner.words().max_by_key(|&w| word_flow(w, inner.arity())).unwrap();

    let mut b = InstanceBuilder::new();
    let d = b.add_vertex("D", VertexKind::General(inner.clone()));
    let externals: Vec<usize> =
        (0..target.arity()).map(|i| b.add_vertex(format!("x{i}"), VertexKind::External)).collect();

    // An endpoint that emits (source) or absorbs (sink) along a path in the
    // reference state. A port of D with bit 1 absorbs; an external with bit
    // 1 points into the gadget, so it emits.
    #[derive(Clone, Copy)]
    struct End {
        v: usize,
        p: usize,
    }
    let mut d_src: Vec<End> = Vec::new();
    let mut d_snk: Vec<End> = Vec::new();
    for p in 0..inner.arity() {
        if bit(w, p) {
            d_snk.push(End { v: d, p });
        } else {
            d_src.push(End { v: d, p });
        }
    }
    let mut x_src: Vec<End> = Vec::new();
    let mut x_snk: Vec<End> = Vec::new();
    for (i, &x) in externals.iter().enumerate() {
        if bit(t, i) {
            x_src.push(End { v: x, p: 0 });
        } else {
            x_snk.push(End { v: x, p: 0 });
        }
    }
    // Wired connections: external source -> D sink, D source -> external sink.
    let mut wires: Vec<(End, End)> = Vec::new();
    while !x_src.is_empty() && !d_snk.is_empty() {
        wires.push((x_src.remove(0), d_snk.remove(0)));
    }
    while !d_src.is_empty() && !x_snk.is_empty() {
        wires.push((d_src.remove(0), x_snk.remove(0)));
    }
    // Leftovers sit on one side only, with equal numbers of sources and sinks.
    let mut srcs = d_src;
    srcs.append(&mut x_src);
    let mut snks = d_snk;
    snks.append(&mut x_snk);
    if srcs.len() != snks.len() || wires.is_empty() {
        return Err(Error::Internal("unbalanced leftovers while wrapping".into()));
    }
    let (spine_src, spine_snk) = wires.remove(0);
    for (a, z) in wires {
        b.add_edge(a.v, a.p, z.v, z.p);
    }
    // The spine passes each synchronizer through ports 1 -> 3; the leftover
    // path passes through ports 0 -> 2, so ports 0,1 are in and 2,3 out.
    let mut prev = spine_src;
    for (k, (a, z)) in srcs.into_iter().zip(snks).enumerate() {
        let s = b.add_vertex(format!("s{k}"), VertexKind::Synchronizer);
        b.add_edge(prev.v, prev.p, s, 1);
        b.add_edge(a.v, a.p, s, 0);
        b.add_edge(s, 2, z.v, z.p);
        prev = End { v: s, p: 3 };
    }
    b.add_edge(prev.v, prev.p, spine_snk.v, spine_snk.p);
    let g = Gadget::new(b.build()?, externals, None)?;
    self_check(g, target, "wrap_duplicator")
}

/// Two `{1,j}`-in-`j` vertices joined by `j - 2` edges, one remaining port
/// fed by an inward constant: a 2-in-3 on the three free ports.
pub fn two_in_three_from_pair(j: usize) -> Result<Gadget> {
    if j < 4 {
        return Err(Error::Precondition("needs j >= 4".into()));
    }
    let spec = SymmetricSpec::new(j, [1, j])?;
    let mut b = InstanceBuilder::new();
    let a = b.add_vertex("A", VertexKind::Symmetric(spec.clone()));
    let c = b.add_vertex("B", VertexKind::Symmetric(spec));
    b.set_rotation(a, (0..j).collect());
    b.set_rotation(c, (0..j).rev().collect());
    for p in 0..j - 2 {
        b.add_edge(a, p, c, p);
    }
    let k = b.add_vertex("k", VertexKind::Constant(Direction::Out));
    b.set_rotation(k, vec![0]);
    b.add_edge(k, 0, a, j - 2);
    let mut externals = Vec::new();
    for (i, (v, p)) in [(a, j - 1), (c, j - 2), (c, j - 1)].into_iter().enumerate() {
        let x = b.add_vertex(format!("x{i}"), VertexKind::External);
        b.set_rotation(x, vec![0]);
        b.add_edge(x, 0, v, p);
        externals.push(x);
    }
    let g = Gadget::new(b.build()?, externals, None)?;
    let outer = g.find_outer_face();
    self_check(Gadget { outer_face: outer, ..g }, &SymmetricSpec::exactly(2, 3).expand(), "two_in_three_from_pair")
}

/// The duplicator `{t, ~t}` for a word `t`.
pub fn duplicator(t: u64, arity: usize) -> Relation {
    Relation::new(arity, [t, !t & full_mask(arity)]).expect("word fits arity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::euler_check;
    use crate::simulate::{derived_type, substitute};

    #[test]
    fn gap_equalizers() {
        let s = SymmetricSpec::new(3, [0, 3]).unwrap();
        assert_eq!(equalizer_from_gap(&s, 0, 3).unwrap().arity(), 3);
        let s = SymmetricSpec::new(5, [0, 1, 4]).unwrap();
        equalizer_from_gap(&s, 1, 3).unwrap();
        assert!(equalizer_from_gap(&s, 0, 3).is_err());
        let s = SymmetricSpec::new(2, [0, 2]).unwrap();
        equalizer_from_gap(&s, 0, 2).unwrap();
    }

    #[test]
    fn synchronizers_from_equalizers() {
        for k in 3..=7 {
            let g = synchronizer_from(&VertexKind::Equalizer(k).expand()).unwrap();
            assert!(euler_check(&g.instance).unwrap());
            assert!(g.outer_face.is_some());
            // f - 2 joining edges between the two copies.
            let joins = g.instance.edges().iter().filter(|e| e.a.vertex != e.b.vertex).count() - 4;
            assert_eq!(joins, k - 2);
        }
    }

    #[test]
    fn synchronizers_from_general_duplicators() {
        for (arity, t) in [(3, 0b011u64), (4, 0b0111), (5, 0b00111), (6, 0b000111), (6, 0b001111), (6, 0b011111), (8, 0b00110101)] {
            let r = duplicator(t, arity);
            let info = r.duplicator_info_default().unwrap();
            let g = synchronizer_from(&r);
            if info.is_alternator {
                assert!(g.is_err());
            } else {
                let g = g.unwrap();
                assert!(euler_check(&g.instance).unwrap(), "{r:?}");
            }
        }
        assert!(synchronizer_from(&VertexKind::Alternator(4).expand()).is_err());
        assert!(synchronizer_from(&VertexKind::Equalizer(2).expand()).is_err());
    }

    fn net_flow_of(g: &Gadget) -> Option<usize> {
        derived_type(g).unwrap().duplicator_info_default().map(|i| i.net_flow)
    }

    #[test]
    fn linking_reaches_predicted_flow() {
        let e3 = VertexKind::Equalizer(3).expand();
        let e4 = VertexKind::Equalizer(4).expand();
        let cases: Vec<(Vec<(Relation, i64)>, usize)> = vec![
            (vec![(e3.clone(), 1), (e3.clone(), -1)], 0),
            (vec![(e4.clone(), 1), (e3.clone(), -1)], 1),
            (vec![(e3.clone(), 2), (e4.clone(), -1)], 2),
            (vec![(e3.clone(), 1)], 3),
            (vec![(e4.clone(), 1)], 4),
            (vec![(e4.clone(), 2), (e3.clone(), -1)], 5),
        ];
        for (parts, f) in cases {
            let g = link_duplicators(&parts).unwrap();
            assert!(euler_check(&g.instance).unwrap());
            assert_eq!(net_flow_of(&g), Some(f));
        }
    }

    #[test]
    fn wrapping_hits_any_target_shape() {
        for (arity, t) in [(3usize, 0b011u64), (4, 0b0111), (5, 0b01111), (4, 0b0011), (6, 0b000111)] {
            let target = duplicator(t, arity);
            let f = target.duplicator_info_default().unwrap().net_flow;
            // f + 1 ports in, one out.
            let inner = match f {
                0 => VertexKind::Synchronizer.expand(),
                f => duplicator((1 << (f + 1)) - 1, f + 2),
            };
            wrap_duplicator(&inner, &target).unwrap();
        }
    }

    #[test]
    fn wrapped_link_composes() {
        // Flow-1 duplicator from a 4-equalizer and a reversed 3-equalizer,
        // then shaped into {110, 001} and substituted for the wrapped vertex.
        let e3 = VertexKind::Equalizer(3).expand();
        let e4 = VertexKind::Equalizer(4).expand();
        let link = link_duplicators(&[(e4, 1), (e3, -1)]).unwrap();
        let linked = derived_type(&link).unwrap();
        let target = duplicator(0b011, 3);
        let wrap = wrap_duplicator(&linked, &target).unwrap();
        let d = wrap.instance.vertex_index("D").unwrap();
        let inst = substitute(&wrap.instance, d, &link).unwrap();
        let externals = wrap.externals.iter().map(|&x| inst.vertex_index(wrap.instance.name(x)).unwrap()).collect();
        let g = Gadget::new(inst, externals, None).unwrap();
        assert_eq!(derived_type(&g).unwrap(), target);
    }

    #[test]
    fn pair_gives_two_in_three() {
        for j in 4..=7 {
            let g = two_in_three_from_pair(j).unwrap();
            assert!(euler_check(&g.instance).unwrap());
        }
        assert!(two_in_three_from_pair(3).is_err());
    }
}
