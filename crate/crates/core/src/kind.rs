use std::fmt;

use serde::{Deserialize, Serialize};

use crate::relation::{full_mask, Relation, SymmetricSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    In,
    Out,
}

impl Direction {
    pub fn is_in(self) -> bool {
        self == Direction::In
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexKind {
    Symmetric(SymmetricSpec),
    General(Relation),
    Equalizer(usize),
    Synchronizer,
    Alternator(usize),
    /// Degree-1 terminator. `In` is the 1-in-1 vertex, `Out` is 0-in-1.
    Constant(Direction),
    /// Unconstrained degree-1 vertex marking a gadget's external edge.
    External,
}

/// The two words of a synchronizer: two adjacent ports point in, the other
/// two point out.
pub const SYNCHRONIZER_WORDS: [&str; 2] = ["1100", "0011"];

impl VertexKind {
    pub fn sym(arity: usize, in_set: &[usize]) -> VertexKind {
        VertexKind::Symmetric(SymmetricSpec::new(arity, in_set.iter().copied()).expect("valid in-set"))
    }

    pub fn exactly(i: usize, j: usize) -> VertexKind {
        VertexKind::Symmetric(SymmetricSpec::exactly(i, j))
    }

    pub fn arity(&self) -> usize {
        match self {
            VertexKind::Symmetric(s) => s.arity,
            VertexKind::General(r) => r.arity(),
            VertexKind::Equalizer(k) => *k,
            VertexKind::Synchronizer => 4,
            VertexKind::Alternator(k) => *k,
            VertexKind::Constant(_) | VertexKind::External => 1,
        }
    }

    /// Membership test without expanding. Alternation is judged along
    /// `order`, which must list every port once; `None` means ascending.
    pub fn allows(&self, word: u64, order: Option<&[usize]>) -> bool {
        let j = self.arity();
        let m = full_mask(j);
        match self {
            VertexKind::Symmetric(s) => s.contains(word.count_ones() as usize),
            VertexKind::General(r) => r.contains(word),
            VertexKind::Equalizer(_) => word == 0 || word == m,
            VertexKind::Synchronizer => word == 0b0011 || word == 0b1100,
            VertexKind::Alternator(_) => {
                let bit = |i: usize| {
                    let p = order.map_or(i, |o| o[i]);
                    (word >> p) & 1
                };
                (0..j).all(|i| bit(i) != bit((i + 1) % j))
            }
            VertexKind::Constant(d) => word == d.is_in() as u64,
            VertexKind::External => true,
        }
    }

    /// The explicit relation, alternation along ascending port order.
    pub fn expand(&self) -> Relation {
        self.expand_with_order(None)
    }

    pub fn expand_with_order(&self, order: Option<&[usize]>) -> Relation {
        let j = self.arity();
        match self {
            VertexKind::Symmetric(s) => s.expand(),
            VertexKind::General(r) => r.clone(),
            VertexKind::Equalizer(k) => Relation::new(*k, [0, full_mask(*k)]).unwrap(),
            VertexKind::Synchronizer => Relation::from_strs(4, &SYNCHRONIZER_WORDS).unwrap(),
            VertexKind::Alternator(k) => {
                let mut w = 0u64;
                for i in (1..*k).step_by(2) {
                    let p = order.map_or(i, |o| o[i]);
                    w |= 1 << p;
                }
                Relation::new(*k, [w, !w & full_mask(*k)]).unwrap()
            }
            VertexKind::Constant(d) => Relation::new(1, [d.is_in() as u64]).unwrap(),
            VertexKind::External => Relation::new(j, [0, 1]).unwrap(),
        }
    }

    /// The symmetric spec this kind is equivalent to, if any.
    pub fn as_symmetric(&self) -> Option<SymmetricSpec> {
        match self {
            VertexKind::Symmetric(s) => Some(s.clone()),
            VertexKind::Equalizer(k) => Some(SymmetricSpec::new(*k, [0, *k]).unwrap()),
            VertexKind::Constant(Direction::In) => Some(SymmetricSpec::exactly(1, 1)),
            VertexKind::Constant(Direction::Out) => Some(SymmetricSpec::exactly(0, 1)),
            VertexKind::External => Some(SymmetricSpec::new(1, [0, 1]).unwrap()),
            VertexKind::General(r) => r.is_symmetric(),
            VertexKind::Alternator(2) => Some(SymmetricSpec::exactly(1, 2)),
            VertexKind::Alternator(0) => Some(SymmetricSpec::new(0, [0]).unwrap()),
            VertexKind::Synchronizer | VertexKind::Alternator(_) => None,
        }
    }

    pub fn reverse(&self) -> VertexKind {
        match self {
            VertexKind::Symmetric(s) => VertexKind::Symmetric(s.reverse()),
            VertexKind::General(r) => VertexKind::General(r.reverse()),
            VertexKind::Constant(Direction::In) => VertexKind::Constant(Direction::Out),
            VertexKind::Constant(Direction::Out) => VertexKind::Constant(Direction::In),
            k => k.clone(),
        }
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexKind::Symmetric(s) => write!(f, "{s}"),
            VertexKind::General(r) => write!(f, "gen{}[{}]", r.arity(), r.word_strings().join(";")),
            VertexKind::Equalizer(k) => write!(f, "{k}-equalizer"),
            VertexKind::Synchronizer => write!(f, "synchronizer"),
            VertexKind::Alternator(k) => write!(f, "{k}-alternator"),
            VertexKind::Constant(Direction::In) => write!(f, "const-in"),
            VertexKind::Constant(Direction::Out) => write!(f, "const-out"),
            VertexKind::External => write!(f, "external"),
        }
    }
}

impl fmt::Debug for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Crossover on ports (N, E, S, W): the N/S pair and the E/W pair each carry
/// one signal straight through.
pub fn crossover() -> Relation {
    let words = (0u64..16).filter(|w| {
        let (n, e, s, wst) = (w & 1, (w >> 1) & 1, (w >> 2) & 1, (w >> 3) & 1);
        n != s && e != wst
    });
    Relation::new(4, words).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansions() {
        assert_eq!(VertexKind::Equalizer(3).expand().word_strings(), vec!["000", "111"]);
        let alt = VertexKind::Alternator(4).expand();
        let mut ws = alt.word_strings();
        ws.sort();
        assert_eq!(ws, vec!["0101", "1010"]);
        let mut ws = VertexKind::Synchronizer.expand().word_strings();
        ws.sort();
        assert_eq!(ws, vec!["0011", "1100"]);
        assert_eq!(crossover().len(), 4);
    }

    #[test]
    fn allows_matches_expand() {
        let kinds = [
            VertexKind::sym(4, &[1, 3]),
            VertexKind::Equalizer(4),
            VertexKind::Synchronizer,
            VertexKind::Alternator(4),
            VertexKind::Alternator(6),
            VertexKind::Constant(Direction::In),
            VertexKind::Constant(Direction::Out),
            VertexKind::External,
        ];
        for k in &kinds {
            let r = k.expand();
            for w in 0..(1u64 << k.arity()) {
                assert_eq!(k.allows(w, None), r.contains(w), "{k} {w}");
            }
        }
        let order = [0, 2, 1, 3];
        let r = VertexKind::Alternator(4).expand_with_order(Some(&order));
        for w in 0..16 {
            assert_eq!(VertexKind::Alternator(4).allows(w, Some(&order)), r.contains(w));
        }
    }

    #[test]
    fn symmetric_views() {
        assert_eq!(VertexKind::Equalizer(4).as_symmetric(), Some(SymmetricSpec::new(4, [0, 4]).unwrap()));
        assert_eq!(VertexKind::Synchronizer.as_symmetric(), None);
        assert_eq!(VertexKind::Equalizer(5).reverse(), VertexKind::Equalizer(5));
    }
}
