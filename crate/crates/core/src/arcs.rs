//! Dense directed arc sets over a fixed vertex range.

use std::fmt;

pub type Vertex = u32;
pub type Pair = (Vertex, Vertex);

/// An `n × n` bit matrix of directed arcs. Self-loops are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ArcSet {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl ArcSet {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        ArcSet {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut s = ArcSet::new(n);
        for u in 0..n as Vertex {
            for v in 0..n as Vertex {
                s.insert(u, v);
            }
        }
        s
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = Pair>) -> Self {
        let mut s = ArcSet::new(n);
        for (u, v) in pairs {
            s.insert(u, v);
        }
        s
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, u: Vertex, v: Vertex) -> (usize, u64) {
        let (u, v) = (u as usize, v as usize);
        debug_assert!(u < self.n && v < self.n, "vertex out of range");
        (u * self.words + v / 64, 1u64 << (v % 64))
    }

    /// Inserts `(u, v)`; returns false for self-loops and already present arcs.
    pub fn insert(&mut self, u: Vertex, v: Vertex) -> bool {
        if u == v {
            return false;
        }
        let (w, m) = self.slot(u, v);
        let fresh = self.bits[w] & m == 0;
        self.bits[w] |= m;
        fresh
    }

    pub fn remove(&mut self, u: Vertex, v: Vertex) -> bool {
        let (w, m) = self.slot(u, v);
        let had = self.bits[w] & m != 0;
        self.bits[w] &= !m;
        had
    }

    #[inline]
    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        let (w, m) = self.slot(u, v);
        self.bits[w] & m != 0
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.bits.iter_mut().for_each(|w| *w = 0);
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    /// Out-neighbours of `u`, ascending.
    pub fn successors(&self, u: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let words = self.row(u as usize);
        words.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((i * 64) as Vertex + b)
            })
        })
    }

    pub fn out_degree(&self, u: Vertex) -> usize {
        self.row(u as usize).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// All arcs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Pair> + '_ {
        (0..self.n as Vertex).flat_map(move |u| self.successors(u).map(move |v| (u, v)))
    }

    pub fn is_subset(&self, other: &ArcSet) -> bool {
        assert_eq!(self.n, other.n, "vertex count mismatch");
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &ArcSet) {
        assert_eq!(self.n, other.n, "vertex count mismatch");
        self.bits.iter_mut().zip(&other.bits).for_each(|(a, b)| *a |= b);
    }

    pub fn intersect_with(&mut self, other: &ArcSet) {
        assert_eq!(self.n, other.n, "vertex count mismatch");
        self.bits.iter_mut().zip(&other.bits).for_each(|(a, b)| *a &= b);
    }

    /// Arcs `(u, v)` for which some `w` has `(u, w)` in `self` and `(w, v)` in `next`.
    pub fn chain(&self, next: &ArcSet) -> ArcSet {
        assert_eq!(self.n, next.n, "vertex count mismatch");
        let mut out = ArcSet::new(self.n);
        for u in 0..self.n {
            for w in self.successors(u as Vertex) {
                let src = next.row(w as usize);
                let dst = &mut out.bits[u * self.words..(u + 1) * self.words];
                dst.iter_mut().zip(src).for_each(|(a, b)| *a |= b);
            }
            // clear the diagonal
            out.bits[u * self.words + u / 64] &= !(1u64 << (u % 64));
        }
        out
    }

    /// Both directions of every arc.
    pub fn symmetrized(&self) -> ArcSet {
        let mut out = self.clone();
        for (u, v) in self.iter() {
            out.insert(v, u);
        }
        out
    }
}

impl fmt::Debug for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_iterate() {
        let mut s = ArcSet::new(70);
        assert!(s.insert(0, 69));
        assert!(!s.insert(0, 69));
        assert!(!s.insert(3, 3));
        s.insert(65, 1);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![(0, 69), (65, 1)]);
        assert_eq!(s.len(), 2);
        assert!(s.remove(0, 69));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn chain_matches_triple_loop() {
        let a = ArcSet::from_pairs(4, [(0, 1), (1, 2), (2, 0), (3, 1)]);
        let b = ArcSet::from_pairs(4, [(1, 3), (2, 0), (0, 1), (1, 0)]);
        let got = a.chain(&b);
        let mut want = ArcSet::new(4);
        for u in 0..4 {
            for w in 0..4 {
                for v in 0..4 {
                    if a.contains(u, w) && b.contains(w, v) {
                        want.insert(u, v);
                    }
                }
            }
        }
        assert_eq!(got, want);
        assert!(!got.contains(1, 1));
    }

    #[test]
    fn complete_has_n_times_n_minus_one() {
        assert_eq!(ArcSet::complete(5).len(), 20);
    }
}
