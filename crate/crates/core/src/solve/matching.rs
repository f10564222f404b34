//! Maximum matching in general graphs (Edmonds' blossom algorithm, O(V^3)).

use std::collections::VecDeque;

const NONE: usize = usize::MAX;

pub struct Blossom {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl Blossom {
    pub fn new(n: usize) -> Self {
        Blossom { n, adj: vec![Vec::new(); n] }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].push(v);
            self.adj[v].push(u);
        }
    }

    /// `mate[v]`, or `usize::MAX` when unmatched.
    pub fn maximum_matching(&self) -> Vec<usize> {
        let mut st = State {
            g: self,
            mate: vec![NONE; self.n],
            parent: vec![NONE; self.n],
            base: (0..self.n).collect(),
            used: vec![false; self.n],
            blossom: vec![false; self.n],
            queue: VecDeque::new(),
        };
        // Greedy start.
        for v in 0..self.n {
            if st.mate[v] == NONE {
                if let Some(&u) = self.adj[v].iter().find(|&&u| st.mate[u] == NONE) {
                    st.mate[v] = u;
                    st.mate[u] = v;
                }
            }
        }
        for root in 0..self.n {
            if st.mate[root] != NONE {
                continue;
            }
            if let Some(mut v) = st.find_path(root) {
                while v != NONE {
                    let pv = st.parent[v];
                    let ppv = st.mate[pv];
                    st.mate[v] = pv;
                    st.mate[pv] = v;
                    v = ppv;
                }
            }
        }
        st.mate
    }
}

struct State<'a> {
    g: &'a Blossom,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl State<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.n];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Returns the free vertex ending an augmenting path from `root`.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.g.n;
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for k in 0..self.g.adj[v].len() {
                let to = self.g.adj[v][k];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_max(n: usize, edges: &[(usize, usize)]) -> usize {
        fn go(i: usize, edges: &[(usize, usize)], used: &mut Vec<bool>) -> usize {
            if i == edges.len() {
                return 0;
            }
            let mut best = go(i + 1, edges, used);
            let (u, v) = edges[i];
            if u != v && !used[u] && !used[v] {
                used[u] = true;
                used[v] = true;
                best = best.max(1 + go(i + 1, edges, used));
                used[u] = false;
                used[v] = false;
            }
            best
        }
        go(0, edges, &mut vec![false; n])
    }

    #[test]
    fn odd_cycle_with_tail() {
        // Triangle 0-1-2 with a pendant 3 on vertex 2 and 4 on vertex 0.
        let mut g = Blossom::new(5);
        for (u, v) in [(0, 1), (1, 2), (2, 0), (2, 3), (0, 4)] {
            g.add_edge(u, v);
        }
        let m = g.maximum_matching();
        assert_eq!(m.iter().filter(|&&x| x != NONE).count(), 4);
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..9);
            let m = rng.gen_range(0..14);
            let edges: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
            let mut g = Blossom::new(n);
            for &(u, v) in &edges {
                g.add_edge(u, v);
            }
            let mate = g.maximum_matching();
            for v in 0..n {
                if mate[v] != NONE {
                    assert_eq!(mate[mate[v]], v);
                    assert!(edges.iter().any(|&(a, b)| (a, b) == (v, mate[v]) || (b, a) == (v, mate[v])));
                }
            }
            let size = mate.iter().filter(|&&x| x != NONE).count() / 2;
            assert_eq!(size, brute_max(n, &edges));
        }
    }
}
