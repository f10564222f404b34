//! Constraint view of an instance: one boolean per edge (`true` = A→B) and,
//! per vertex, a predicate over its port bits.

use crate::instance::Instance;
use crate::kind::VertexKind;
use crate::relation::{Relation, SymmetricSpec};

#[derive(Debug, Clone)]
pub(crate) enum Pred {
    Words(Relation),
    Count(SymmetricSpec),
}

impl Pred {
    pub fn arity(&self) -> usize {
        match self {
            Pred::Words(r) => r.arity(),
            Pred::Count(s) => s.arity,
        }
    }

    /// Whether some allowed word has the given port bits. Ports in `fixed`
    /// must be distinct.
    pub fn admits(&self, fixed: &[(usize, bool)]) -> bool {
        match self {
            Pred::Words(r) => r.words().any(|w| fixed.iter().all(|&(p, b)| ((w >> p) & 1 == 1) == b)),
            Pred::Count(s) => {
                let ones = fixed.iter().filter(|f| f.1).count();
                let free = s.arity - fixed.len();
                s.in_set.range(ones..=ones + free).next().is_some()
            }
        }
    }

    pub fn allows(&self, word: u64) -> bool {
        match self {
            Pred::Words(r) => r.contains(word),
            Pred::Count(s) => s.contains(word.count_ones() as usize),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Constraint {
    /// Port `p` reads `dir[lits[p].0] ^ lits[p].1`.
    pub lits: Vec<(usize, bool)>,
    pub pred: Pred,
}

pub(crate) fn pred_of(inst: &Instance, v: usize) -> Pred {
    let k = inst.kind(v);
    let sym = match k {
        VertexKind::Alternator(_) | VertexKind::Synchronizer => None,
        _ => k.as_symmetric(),
    };
    match sym {
        Some(s) => Pred::Count(s),
        None => Pred::Words(inst.relation(v)),
    }
}

pub(crate) fn lits_of(inst: &Instance, v: usize) -> Vec<(usize, bool)> {
    (0..inst.arity(v))
        .map(|p| {
            let (e, side) = inst.slot(v, p);
            (e, side == 0)
        })
        .collect()
}

pub(crate) fn constraints(inst: &Instance) -> Vec<Constraint> {
    (0..inst.num_vertices()).map(|v| Constraint { lits: lits_of(inst, v), pred: pred_of(inst, v) }).collect()
}
