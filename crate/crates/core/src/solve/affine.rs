//! Affine instances: every relation is a coset of a GF(2) subspace, so the
//! whole instance is one linear system over the edge directions.

use crate::error::{Error, Result};
use crate::instance::{Instance, Orientation};

use super::csp::{constraints, Pred};

const SELF_CHECK_ARITY: usize = 12;

/// Parity equation over port bits: XOR of `ports` equals `rhs`.
pub(crate) type PortEq = (Vec<usize>, bool);

/// Equations cutting out the predicate; `Ok(None)` if it is empty.
pub(crate) fn port_equations(pred: &Pred) -> Result<Option<Vec<PortEq>>> {
    let j = pred.arity();
    let eqs = match pred {
        Pred::Count(s) => {
            if s.in_set.is_empty() {
                return Ok(None);
            }
            let all: Vec<usize> = (0..j).collect();
            if s.in_set.len() == j + 1 {
                Vec::new()
            } else if s.in_set.iter().all(|&x| x == 0 || x == j) {
                let mut eqs: Vec<PortEq> = (1..j).map(|p| (vec![p - 1, p], false)).collect();
                if s.in_set.len() == 1 {
                    eqs.push((vec![0], s.contains(j)));
                }
                eqs
            } else if s.in_set.iter().all(|&x| x % 2 == 0) && s.in_set.len() == j / 2 + 1 {
                vec![(all, false)]
            } else if s.in_set.iter().all(|&x| x % 2 == 1) && s.in_set.len() == (j + 1) / 2 {
                vec![(all, true)]
            } else {
                return Err(Error::Precondition(format!("{s} is not affine")));
            }
        }
        Pred::Words(r) => {
            if !r.is_affine() {
                return Err(Error::Precondition(format!("{r:?} is not affine")));
            }
            let Some(r0) = r.words().next() else {
                return Ok(None);
            };
            // Row-reduce the direction space, then read off its annihilator.
            let mut rows: Vec<u64> = Vec::new();
            let mut pivots: Vec<usize> = Vec::new();
            for w in r.words() {
                let mut x = w ^ r0;
                for (k, &row) in rows.iter().enumerate() {
                    if (x >> pivots[k]) & 1 == 1 {
                        x ^= row;
                    }
                }
                if x != 0 {
                    let p = x.trailing_zeros() as usize;
                    for row in rows.iter_mut() {
                        if (*row >> p) & 1 == 1 {
                            *row ^= x;
                        }
                    }
                    rows.push(x);
                    pivots.push(p);
                }
            }
            let mut eqs = Vec::new();
            for f in (0..j).filter(|f| !pivots.contains(f)) {
                let mut a = 1u64 << f;
                for (k, &row) in rows.iter().enumerate() {
                    if (row >> f) & 1 == 1 {
                        a |= 1 << pivots[k];
                    }
                }
                let rhs = (a & r0).count_ones() % 2 == 1;
                eqs.push(((0..j).filter(|&p| (a >> p) & 1 == 1).collect(), rhs));
            }
            eqs
        }
    };
    if j <= SELF_CHECK_ARITY {
        for w in 0..(1u64 << j) {
            let sat = eqs.iter().all(|(ps, rhs)| (ps.iter().filter(|&&p| (w >> p) & 1 == 1).count() % 2 == 1) == *rhs);
            if sat != pred.allows(w) {
                return Err(Error::Internal(format!("affine equations disagree with the relation on word {w:b}")));
            }
        }
    }
    Ok(Some(eqs))
}

/// Dense GF(2) system over `n` unknowns.
pub(crate) struct Gf2 {
    n: usize,
    words: usize,
    rows: Vec<(Vec<u64>, bool)>,
}

impl Gf2 {
    pub fn new(n: usize) -> Self {
        Gf2 { n, words: n.div_ceil(64).max(1), rows: Vec::new() }
    }

    /// XOR of `vars` (repeats cancel) equals `rhs`.
    pub fn add(&mut self, vars: impl IntoIterator<Item = usize>, rhs: bool) {
        let mut row = vec![0u64; self.words];
        for v in vars {
            row[v / 64] ^= 1 << (v % 64);
        }
        self.rows.push((row, rhs));
    }

    /// Some solution (free unknowns set to `false`), or `None`.
    pub fn solve(mut self) -> Option<Vec<bool>> {
        let mut pivot_of_row = Vec::new();
        let mut r = 0;
        for col in 0..self.n {
            let (w, b) = (col / 64, 1u64 << (col % 64));
            let Some(k) = (r..self.rows.len()).find(|&k| self.rows[k].0[w] & b != 0) else {
                continue;
            };
            self.rows.swap(r, k);
            let (prow, prhs) = self.rows[r].clone();
            for (k, row) in self.rows.iter_mut().enumerate() {
                if k != r && row.0[w] & b != 0 {
                    for (x, y) in row.0.iter_mut().zip(&prow) {
                        *x ^= y;
                    }
                    row.1 ^= prhs;
                }
            }
            pivot_of_row.push(col);
            r += 1;
        }
        if self.rows[r..].iter().any(|row| row.1) {
            return None;
        }
        let mut x = vec![false; self.n];
        for (k, &col) in pivot_of_row.iter().enumerate() {
            x[col] = self.rows[k].1;
        }
        Some(x)
    }
}

pub fn solve_affine(inst: &Instance) -> Result<Option<Orientation>> {
    let mut sys = Gf2::new(inst.num_edges());
    let mut ok = true;
    for c in constraints(inst) {
        match port_equations(&c.pred)? {
            None => ok = false,
            Some(eqs) => {
                for (ports, rhs) in eqs {
                    let flips = ports.iter().filter(|&&p| c.lits[p].1).count() % 2 == 1;
                    sys.add(ports.iter().map(|&p| c.lits[p].0), rhs ^ flips);
                }
            }
        }
    }
    if !ok {
        return Ok(None);
    }
    Ok(sys.solve().map(Orientation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{validate, InstanceBuilder};
    use crate::kind::VertexKind;
    use crate::relation::Relation;
    use crate::solve::brute::{count_brute, solve_brute};

    fn cycle(kinds: &[VertexKind]) -> Instance {
        let mut b = InstanceBuilder::new();
        let n = kinds.len();
        let vs: Vec<usize> = kinds.iter().enumerate().map(|(i, k)| b.add_vertex(format!("v{i}"), k.clone())).collect();
        for i in 0..n {
            b.add_edge(vs[i], 1, vs[(i + 1) % n], 0);
        }
        b.build().unwrap()
    }

    #[test]
    fn even_cycle_of_equalizers() {
        let inst = cycle(&vec![VertexKind::sym(2, &[0, 2]); 4]);
        let o = solve_affine(&inst).unwrap().unwrap();
        assert!(validate(&inst, &o).is_empty());
    }

    #[test]
    fn odd_cycles_match_oracle() {
        for n in 1..6 {
            for ones in 0..=n {
                let kinds: Vec<VertexKind> = (0..n)
                    .map(|i| if i < ones { VertexKind::exactly(1, 2) } else { VertexKind::sym(2, &[0, 2]) })
                    .collect();
                let inst = cycle(&kinds);
                let got = solve_affine(&inst).unwrap();
                assert_eq!(got.is_some(), solve_brute(&inst).unwrap().is_some(), "n={n} ones={ones}");
                if let Some(o) = got {
                    assert!(validate(&inst, &o).is_empty());
                }
            }
        }
    }

    #[test]
    fn equalizer_pair() {
        let mut b = InstanceBuilder::new();
        let x = b.add_vertex("x", VertexKind::Equalizer(4));
        let y = b.add_vertex("y", VertexKind::Equalizer(4));
        for p in 0..4 {
            b.add_edge(x, p, y, p);
        }
        let inst = b.build().unwrap();
        assert!(solve_affine(&inst).unwrap().is_some());
        assert_eq!(count_brute(&inst).unwrap(), 2);
    }

    #[test]
    fn explicit_relation_equations() {
        let r = Relation::from_strs(3, &["001", "010", "100", "111"]).unwrap();
        let eqs = port_equations(&Pred::Words(r)).unwrap().unwrap();
        assert_eq!(eqs, vec![(vec![0, 1, 2], true)]);
    }

    #[test]
    fn gf2_inconsistent() {
        let mut s = Gf2::new(2);
        s.add([0, 1], true);
        s.add([0], false);
        s.add([1], false);
        assert!(s.solve().is_none());
    }
}
