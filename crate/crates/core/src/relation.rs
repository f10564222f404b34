//! Relations (vertex types as explicit word sets) and symmetric `S-in-j` specs.
//!
//! Bit `p` of a word is the state of port `p`: 1 means the edge at that port
//! points into the vertex.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest arity a [`Relation`] can hold.
pub const MAX_ARITY: usize = 64;

#[inline]
pub(crate) fn full_mask(arity: usize) -> u64 {
    if arity >= 64 {
        u64::MAX
    } else {
        (1u64 << arity) - 1
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relation {
    arity: usize,
    allowed: BTreeSet<u64>,
}

impl Relation {
    pub fn new(arity: usize, words: impl IntoIterator<Item = u64>) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::Invalid(format!("arity {arity} exceeds {MAX_ARITY}")));
        }
        let mask = full_mask(arity);
        let mut allowed = BTreeSet::new();
        for w in words {
            if w & !mask != 0 {
                return Err(Error::Invalid(format!("word {w:#x} has bits beyond arity {arity}")));
            }
            allowed.insert(w);
        }
        Ok(Relation { arity, allowed })
    }

    /// Build from '0'/'1' strings, port 0 first.
    pub fn from_strs<S: AsRef<str>>(arity: usize, words: &[S]) -> Result<Self> {
        let mut out = Vec::with_capacity(words.len());
        for w in words {
            out.push(parse_word(w.as_ref(), arity)?);
        }
        Relation::new(arity, out)
    }

    pub fn empty(arity: usize) -> Self {
        Relation { arity, allowed: BTreeSet::new() }
    }

    /// Every word of the given arity (no constraint).
    pub fn full(arity: usize) -> Self {
        assert!(arity < 32, "full relation of arity {arity} is too large");
        Relation { arity, allowed: (0..(1u64 << arity)).collect() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.allowed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allowed.is_empty()
    }

    pub fn contains(&self, word: u64) -> bool {
        self.allowed.contains(&word)
    }

    pub fn words(&self) -> impl Iterator<Item = u64> + '_ {
        self.allowed.iter().copied()
    }

    pub fn word_strings(&self) -> Vec<String> {
        self.words().map(|w| word_to_string(w, self.arity)).collect()
    }

    pub fn is_0valid(&self) -> bool {
        self.contains(0)
    }

    pub fn is_1valid(&self) -> bool {
        self.contains(full_mask(self.arity))
    }

    fn closed_under2(&self, op: impl Fn(u64, u64) -> u64) -> bool {
        let ws: Vec<u64> = self.words().collect();
        for (i, &a) in ws.iter().enumerate() {
            for &b in &ws[i + 1..] {
                if !self.contains(op(a, b)) {
                    return false;
                }
            }
        }
        true
    }

    /// Closed under bitwise AND.
    pub fn is_horn(&self) -> bool {
        self.closed_under2(|a, b| a & b)
    }

    /// Closed under bitwise OR.
    pub fn is_dual_horn(&self) -> bool {
        self.closed_under2(|a, b| a | b)
    }

    /// Closed under bitwise majority of three words.
    pub fn is_bijunctive(&self) -> bool {
        let ws: Vec<u64> = self.words().collect();
        for (i, &a) in ws.iter().enumerate() {
            for (k, &b) in ws.iter().enumerate().skip(i + 1) {
                for &c in &ws[k + 1..] {
                    let m = (a & b) | (b & c) | (a & c);
                    if !self.contains(m) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Closed under XOR of three words. Checked as: the translate `R ^ r0`
    /// is closed under pairwise XOR, which is equivalent.
    pub fn is_affine(&self) -> bool {
        let Some(r0) = self.words().next() else {
            return true;
        };
        if !self.len().is_power_of_two() {
            return false;
        }
        let shifted: HashSet<u64> = self.words().map(|w| w ^ r0).collect();
        let ws: Vec<u64> = shifted.iter().copied().collect();
        for (i, &a) in ws.iter().enumerate() {
            for &b in &ws[i + 1..] {
                if !shifted.contains(&(a ^ b)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_self_complementary(&self) -> bool {
        let m = full_mask(self.arity);
        self.words().all(|w| self.contains(!w & m))
    }

    /// The spec whose expansion equals this relation, if membership depends
    /// only on popcount.
    pub fn is_symmetric(&self) -> Option<SymmetricSpec> {
        let j = self.arity;
        let mut counts = vec![0u128; j + 1];
        for w in self.words() {
            counts[w.count_ones() as usize] += 1;
        }
        let mut s = BTreeSet::new();
        for (k, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c != binomial(j, k) {
                return None;
            }
            s.insert(k);
        }
        Some(SymmetricSpec { arity: j, in_set: s })
    }

    /// Fix `port` to `dir` and drop it.
    pub fn condition(&self, port: usize, into: bool) -> Relation {
        assert!(port < self.arity, "port {port} out of range");
        let bit = into as u64;
        let allowed = self
            .words()
            .filter(|w| (w >> port) & 1 == bit)
            .map(|w| remove_bit(w, port))
            .collect();
        Relation { arity: self.arity - 1, allowed }
    }

    /// Join ports `p1` and `p2` with a self-loop: keep words where they differ,
    /// then drop both.
    pub fn add_self_loop(&self, p1: usize, p2: usize) -> Relation {
        assert!(p1 != p2 && p1 < self.arity && p2 < self.arity);
        let (lo, hi) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
        let allowed = self
            .words()
            .filter(|w| ((w >> lo) ^ (w >> hi)) & 1 == 1)
            .map(|w| remove_bit(remove_bit(w, hi), lo))
            .collect();
        Relation { arity: self.arity - 2, allowed }
    }

    /// Complement every word (reverse every edge).
    pub fn reverse(&self) -> Relation {
        let m = full_mask(self.arity);
        Relation { arity: self.arity, allowed: self.words().map(|w| !w & m).collect() }
    }

    /// Relabel ports: new port `i` is old port `order[i]`.
    pub fn permute(&self, order: &[usize]) -> Relation {
        assert_eq!(order.len(), self.arity);
        let allowed = self
            .words()
            .map(|w| {
                let mut out = 0u64;
                for (i, &p) in order.iter().enumerate() {
                    out |= ((w >> p) & 1) << i;
                }
                out
            })
            .collect();
        Relation { arity: self.arity, allowed }
    }

    /// Equality up to some relabeling of ports. Brute force over
    /// permutations, so only meant for small arities.
    pub fn equal_up_to_permutation(&self, other: &Relation) -> bool {
        if self.arity != other.arity || self.len() != other.len() {
            return false;
        }
        if let (Some(a), Some(b)) = (self.is_symmetric(), other.is_symmetric()) {
            return a == b;
        }
        assert!(self.arity <= 9, "permutation search limited to arity 9");
        let mut perm: Vec<usize> = (0..self.arity).collect();
        loop {
            if &self.permute(&perm) == other {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }

    /// Duplicator data for this relation, with alternation judged along
    /// `rotation` (a cyclic order of all ports).
    pub fn duplicator_info(&self, rotation: &[usize]) -> Option<DuplicatorInfo> {
        if self.len() != 2 {
            return None;
        }
        let ws: Vec<u64> = self.words().collect();
        let m = full_mask(self.arity);
        if ws[0] != !ws[1] & m {
            return None;
        }
        let j = self.arity as i64;
        let ones = ws[0].count_ones() as i64;
        let f = (2 * ones - j).unsigned_abs() as usize;
        let is_equalizer = ws[0] == 0 || ws[0] == m;
        let is_alternator = self.arity % 2 == 0
            && self.arity > 0
            && rotation.len() == self.arity
            && (0..rotation.len()).all(|i| {
                let a = (ws[0] >> rotation[i]) & 1;
                let b = (ws[0] >> rotation[(i + 1) % rotation.len()]) & 1;
                a != b
            });
        let is_synchronizer = self.arity == 4 && f == 0 && !is_alternator;
        Some(DuplicatorInfo {
            net_flow: f,
            is_equalizer,
            is_synchronizer,
            is_alternator,
            is_trivial: self.arity <= 2,
        })
    }

    /// Duplicator data judged along ascending port order.
    pub fn duplicator_info_default(&self) -> Option<DuplicatorInfo> {
        let rot: Vec<usize> = (0..self.arity).collect();
        self.duplicator_info(&rot)
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation({}; {{{}}})", self.arity, self.word_strings().join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicatorInfo {
    /// Absolute imbalance `|in - out|` of either word.
    pub net_flow: usize,
    pub is_equalizer: bool,
    pub is_synchronizer: bool,
    pub is_alternator: bool,
    pub is_trivial: bool,
}

/// `S-in-j`: satisfied iff the number of incoming edges lies in `S`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymmetricSpec {
    pub arity: usize,
    pub in_set: BTreeSet<usize>,
}

impl SymmetricSpec {
    pub fn new(arity: usize, in_set: impl IntoIterator<Item = usize>) -> Result<Self> {
        let in_set: BTreeSet<usize> = in_set.into_iter().collect();
        if let Some(&bad) = in_set.iter().find(|&&s| s > arity) {
            return Err(Error::Invalid(format!("{bad} not in 0..={arity}")));
        }
        Ok(SymmetricSpec { arity, in_set })
    }

    /// `i-in-j`.
    pub fn exactly(i: usize, j: usize) -> Self {
        SymmetricSpec::new(j, [i]).expect("i <= j")
    }

    pub fn contains(&self, s: usize) -> bool {
        self.in_set.contains(&s)
    }

    pub fn is_singleton(&self) -> Option<usize> {
        if self.in_set.len() == 1 {
            self.in_set.iter().next().copied()
        } else {
            None
        }
    }

    pub fn bitstring(&self) -> String {
        (0..=self.arity).map(|i| if self.contains(i) { '1' } else { '0' }).collect()
    }

    /// Longest run of zeros with a one on both sides.
    pub fn max_gap(&self) -> usize {
        self.delta_set().iter().map(|d| d - 1).max().unwrap_or(0)
    }

    pub fn delta_set(&self) -> BTreeSet<usize> {
        let v: Vec<usize> = self.in_set.iter().copied().collect();
        v.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn reverse(&self) -> SymmetricSpec {
        SymmetricSpec { arity: self.arity, in_set: self.in_set.iter().map(|s| self.arity - s).collect() }
    }

    /// Fix one port. `into` means the port's edge points into this vertex.
    pub fn condition(&self, into: bool) -> SymmetricSpec {
        assert!(self.arity > 0);
        let in_set = self
            .in_set
            .iter()
            .filter_map(|&s| if into { s.checked_sub(1) } else { Some(s) })
            .filter(|&s| s < self.arity)
            .collect();
        SymmetricSpec { arity: self.arity - 1, in_set }
    }

    /// One self-loop contributes exactly one incoming edge.
    pub fn add_self_loop(&self) -> SymmetricSpec {
        assert!(self.arity >= 2);
        let in_set = self
            .in_set
            .iter()
            .filter_map(|&s| s.checked_sub(1))
            .filter(|&s| s <= self.arity - 2)
            .collect();
        SymmetricSpec { arity: self.arity - 2, in_set }
    }

    pub fn is_top_down_closed(&self) -> bool {
        self.in_set.iter().all(|&i| 2 * i <= self.arity || self.contains(i - 1))
    }

    pub fn is_bottom_up_closed(&self) -> bool {
        self.in_set.iter().all(|&i| 2 * i >= self.arity || self.contains(i + 1))
    }

    /// Sign of the terminator this spec already is: `+j` for `j-in-j`,
    /// `-j` for `0-in-j`.
    pub fn terminator_sign(&self) -> Option<i64> {
        if self.arity == 0 {
            return None;
        }
        match self.is_singleton()? {
            0 => Some(-(self.arity as i64)),
            s if s == self.arity => Some(self.arity as i64),
            _ => None,
        }
    }

    /// Closed form for bijunctive symmetric types.
    pub fn is_bijunctive_closed_form(&self) -> bool {
        let j = self.arity;
        let s = &self.in_set;
        j <= 2
            || s.len() == j + 1
            || s.iter().all(|&x| x == 0 || x == j)
            || *s == BTreeSet::from([0, 1])
            || *s == BTreeSet::from([j - 1, j])
    }

    /// Closed form for affine symmetric types.
    pub fn is_affine_closed_form(&self) -> bool {
        let j = self.arity;
        let s = &self.in_set;
        let evens: BTreeSet<usize> = (0..=j).step_by(2).collect();
        let odds: BTreeSet<usize> = (1..=j).step_by(2).collect();
        s.len() == j + 1 || s.iter().all(|&x| x == 0 || x == j) || *s == evens || *s == odds
    }

    /// Expansion to an explicit word set. Refuses arities above 24.
    pub fn expand(&self) -> Relation {
        assert!(self.arity <= 24, "refusing to expand {self} (too many words)");
        let allowed = (0..(1u64 << self.arity)).filter(|w| self.contains(w.count_ones() as usize)).collect();
        Relation { arity: self.arity, allowed }
    }
}

impl fmt::Display for SymmetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.is_singleton() {
            return write!(f, "{i}-in-{}", self.arity);
        }
        let items: Vec<String> = self.in_set.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}-in-{}", items.join(","), self.arity)
    }
}

impl fmt::Debug for SymmetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Union of `delta_set` over all specs.
pub fn delta_gamma<'a>(types: impl IntoIterator<Item = &'a SymmetricSpec>) -> BTreeSet<usize> {
    types.into_iter().flat_map(|s| s.delta_set()).collect()
}

pub fn parse_word(s: &str, arity: usize) -> Result<u64> {
    if s.len() != arity {
        return Err(Error::Invalid(format!("word {s:?} does not have {arity} bits")));
    }
    let mut w = 0u64;
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => w |= 1 << i,
            _ => return Err(Error::Invalid(format!("bad bit {c:?} in {s:?}"))),
        }
    }
    Ok(w)
}

pub fn word_to_string(w: u64, arity: usize) -> String {
    (0..arity).map(|i| if (w >> i) & 1 == 1 { '1' } else { '0' }).collect()
}

pub(crate) fn remove_bit(w: u64, p: usize) -> u64 {
    let low = w & ((1u64 << p) - 1);
    let high = if p + 1 >= 64 { 0 } else { (w >> (p + 1)) << p };
    low | high
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut k = p.len() - 1;
    while p[k] <= p[i - 1] {
        k -= 1;
    }
    p.swap(i - 1, k);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(j: usize, s: &[usize]) -> SymmetricSpec {
        SymmetricSpec::new(j, s.iter().copied()).unwrap()
    }

    #[test]
    fn bitstrings() {
        assert_eq!(sym(5, &[0, 1, 4]).bitstring(), "110010");
        assert_eq!(sym(3, &[0, 3]).bitstring(), "1001");
        assert_eq!(sym(2, &[]).bitstring(), "000");
    }

    #[test]
    fn gaps_and_deltas() {
        assert_eq!(sym(3, &[0, 3]).max_gap(), 2);
        assert_eq!(sym(5, &[0, 1, 4]).max_gap(), 2);
        assert_eq!(sym(2, &[0, 1, 2]).max_gap(), 0);
        assert_eq!(sym(5, &[0, 1, 4]).delta_set(), BTreeSet::from([1, 3]));
        assert!(sym(4, &[2]).delta_set().is_empty());
        assert_eq!(sym(3, &[0, 3]).delta_set(), BTreeSet::from([3]));
        let g = [sym(3, &[0, 3]), sym(3, &[1])];
        assert_eq!(delta_gamma(&g), BTreeSet::from([3]));
        let g = [sym(5, &[0, 1, 4]), sym(2, &[0, 2])];
        assert_eq!(delta_gamma(&g), BTreeSet::from([1, 2, 3]));
        assert!(delta_gamma(&[]).is_empty());
    }

    #[test]
    fn gap_iff_large_delta() {
        for j in 0..=7 {
            for mask in 0u32..(1 << (j + 1)) {
                let s = sym(j, &(0..=j).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
                assert_eq!(s.max_gap() >= 2, s.delta_set().iter().any(|&d| d >= 3));
            }
        }
    }

    #[test]
    fn predicates() {
        assert!(sym(2, &[1]).expand().is_bijunctive());
        assert!(sym(3, &[1, 3]).expand().is_affine());
        assert!(!sym(4, &[2]).expand().is_bijunctive());
        let eq3 = Relation::from_strs(3, &["000", "111"]).unwrap();
        assert!(eq3.is_self_complementary());
        assert!(eq3.is_0valid() && eq3.is_1valid());
        assert!(sym(3, &[0, 1]).expand().is_horn());
        assert!(!sym(3, &[1]).expand().is_horn());
        assert!(sym(3, &[2, 3]).expand().is_dual_horn());
    }

    #[test]
    fn symmetric_roundtrip() {
        assert_eq!(sym(3, &[1]).expand().is_symmetric(), Some(sym(3, &[1])));
        let sync = Relation::from_strs(4, &["1100", "0011"]).unwrap();
        assert_eq!(sync.is_symmetric(), None);
        let eq4 = Relation::from_strs(4, &["0000", "1111"]).unwrap();
        assert_eq!(eq4.is_symmetric(), Some(sym(4, &[0, 4])));
        for j in 0..=5 {
            for mask in 0u32..(1 << (j + 1)) {
                let s = sym(j, &(0..=j).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
                assert_eq!(s.expand().is_symmetric().unwrap(), s);
            }
        }
    }

    #[test]
    fn conditioning() {
        let r = sym(5, &[0, 1, 4]).expand();
        let r1 = r.condition(2, true);
        assert_eq!(r1.is_symmetric(), Some(sym(4, &[0, 3])));
        let r2 = r1.condition(0, false);
        assert_eq!(r2.is_symmetric(), Some(sym(3, &[0, 3])));
        let one = sym(1, &[1]).expand().condition(0, true);
        assert_eq!(one.arity(), 0);
        assert!(!one.is_empty());
        assert_eq!(sym(5, &[0, 1, 4]).condition(true), sym(4, &[0, 3]));
        assert_eq!(sym(4, &[0, 3]).condition(false), sym(3, &[0, 3]));
    }

    #[test]
    fn self_loops() {
        let r = sym(6, &[3]).expand().add_self_loop(1, 4);
        assert_eq!(r.is_symmetric(), Some(sym(4, &[2])));
        let r = sym(4, &[0, 3]).expand().add_self_loop(0, 1);
        assert_eq!(r.is_symmetric(), Some(sym(2, &[2])));
        let r = sym(2, &[1]).expand().add_self_loop(0, 1);
        assert_eq!(r.arity(), 0);
        assert!(!r.is_empty());
        assert_eq!(sym(4, &[0, 3]).add_self_loop(), sym(2, &[2]));
    }

    #[test]
    fn reversal_commutes() {
        for j in 1..=5 {
            for mask in 0u32..(1 << (j + 1)) {
                let s = sym(j, &(0..=j).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
                let r = s.expand();
                assert_eq!(r.reverse(), s.reverse().expand());
                assert_eq!(r.condition(0, true).reverse(), r.reverse().condition(0, false));
                if j >= 2 {
                    assert_eq!(r.add_self_loop(0, 1).reverse(), r.reverse().add_self_loop(0, 1));
                }
            }
        }
        assert_eq!(sym(3, &[1]).reverse(), sym(3, &[2]));
        assert_eq!(sym(4, &[0, 1]).reverse(), sym(4, &[3, 4]));
    }

    #[test]
    fn closure_definitions() {
        assert!(sym(4, &[2, 3]).is_top_down_closed());
        assert!(!sym(4, &[0, 3]).is_top_down_closed());
        let full = sym(5, &[0, 1, 2, 3, 4, 5]);
        assert!(full.is_top_down_closed() && full.is_bottom_up_closed());
        assert!(sym(4, &[4]).is_bottom_up_closed());
        assert!(!sym(4, &[0]).is_bottom_up_closed());
    }

    #[test]
    fn duplicators() {
        let eq3 = Relation::from_strs(3, &["000", "111"]).unwrap();
        let d = eq3.duplicator_info_default().unwrap();
        assert_eq!(d.net_flow, 3);
        assert!(d.is_equalizer && !d.is_trivial);
        let sync = Relation::from_strs(4, &["1100", "0011"]).unwrap();
        let d = sync.duplicator_info_default().unwrap();
        assert_eq!(d.net_flow, 0);
        assert!(d.is_synchronizer && !d.is_alternator);
        assert!(sym(3, &[1]).expand().duplicator_info_default().is_none());
        let alt = Relation::from_strs(4, &["1010", "0101"]).unwrap();
        assert!(alt.duplicator_info_default().unwrap().is_alternator);
        assert!(!alt.duplicator_info(&[0, 2, 1, 3]).unwrap().is_alternator);
    }

    #[test]
    fn permutation_equality() {
        let a = Relation::from_strs(4, &["1100", "0011"]).unwrap();
        let b = Relation::from_strs(4, &["1010", "0101"]).unwrap();
        assert_ne!(a, b);
        assert!(a.equal_up_to_permutation(&b));
    }

    #[test]
    fn closed_forms_small() {
        for j in 0..=6 {
            for mask in 0u32..(1 << (j + 1)) {
                let s = sym(j, &(0..=j).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
                let r = s.expand();
                assert_eq!(r.is_bijunctive(), s.is_bijunctive_closed_form(), "{s}");
                assert_eq!(r.is_affine(), s.is_affine_closed_form(), "{s}");
            }
        }
    }
}
