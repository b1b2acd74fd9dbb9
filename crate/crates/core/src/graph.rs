//! Plain graph vocabulary shared by every module: vertices, edges, cycles
//! and 2-factors over the flat vertex set `0..n`.

use std::fmt;

pub type Vertex = u32;

/// An unordered pair of distinct vertices, stored with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: Vertex,
    hi: Vertex,
}

impl Edge {
    /// Panics if `a == b`.
    pub fn new(a: Vertex, b: Vertex) -> Edge {
        Edge::try_new(a, b).unwrap_or_else(|| panic!("loop at vertex {a} is not an edge"))
    }

    pub fn try_new(a: Vertex, b: Vertex) -> Option<Edge> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Edge { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Some(Edge { lo: b, hi: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn lo(self) -> Vertex {
        self.lo
    }

    pub fn hi(self) -> Vertex {
        self.hi
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.lo, self.hi)
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }

    pub fn map(self, mut f: impl FnMut(Vertex) -> Vertex) -> Edge {
        Edge::new(f(self.lo), f(self.hi))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

/// A cycle given by its cyclic vertex sequence; the closing edge from the
/// last vertex back to the first is implicit.
///
/// Construction does not validate anything. Whether a sequence is really a
/// cycle is the verifier's business.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle(Vec<Vertex>);

impl Cycle {
    pub fn new(vertices: Vec<Vertex>) -> Cycle {
        Cycle(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Consecutive vertex pairs including the closing one, with no checks.
    pub fn links(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| (self.0[i], self.0[(i + 1) % n]))
    }

    /// Panics on a repeated consecutive vertex; use [`Cycle::links`] on
    /// untrusted input.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.links().map(|(a, b)| Edge::new(a, b))
    }

    pub fn least_vertex(&self) -> Option<Vertex> {
        self.0.iter().copied().min()
    }

    /// Rotated to start at the least vertex and oriented toward its lesser
    /// neighbour.
    pub fn canonical(&self) -> Cycle {
        let n = self.0.len();
        if n < 3 {
            let mut v = self.0.clone();
            v.sort_unstable();
            return Cycle(v);
        }
        let start = (0..n).min_by_key(|&i| self.0[i]).unwrap();
        let next = self.0[(start + 1) % n];
        let prev = self.0[(start + n - 1) % n];
        let out = if next <= prev {
            (0..n).map(|k| self.0[(start + k) % n]).collect()
        } else {
            (0..n).map(|k| self.0[(start + n - k) % n]).collect()
        };
        Cycle(out)
    }

    pub fn relabel(&self, mut f: impl FnMut(Vertex) -> Vertex) -> Cycle {
        Cycle(self.0.iter().map(|&v| f(v)).collect())
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// A collection of cycles meant to be a spanning 2-regular subgraph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TwoFactor {
    cycles: Vec<Cycle>,
}

impl TwoFactor {
    pub fn new(cycles: Vec<Cycle>) -> TwoFactor {
        TwoFactor { cycles }
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn into_cycles(self) -> Vec<Cycle> {
        self.cycles
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.cycles.iter().flat_map(Cycle::edges)
    }

    pub fn edge_count(&self) -> usize {
        self.cycles.iter().map(Cycle::len).sum()
    }

    /// Sorted multiset of cycle lengths.
    pub fn lengths(&self) -> Vec<usize> {
        let mut l: Vec<usize> = self.cycles.iter().map(Cycle::len).collect();
        l.sort_unstable();
        l
    }

    /// Each cycle canonical, cycles ordered by least vertex.
    pub fn canonical(&self) -> TwoFactor {
        let mut cycles: Vec<Cycle> = self.cycles.iter().map(Cycle::canonical).collect();
        cycles.sort_by_key(|c| c.least_vertex());
        TwoFactor { cycles }
    }

    pub fn relabel(&self, mut f: impl FnMut(Vertex) -> Vertex) -> TwoFactor {
        TwoFactor {
            cycles: self.cycles.iter().map(|c| c.relabel(&mut f)).collect(),
        }
    }

    /// Disjoint union with another factor on a disjoint vertex set.
    pub fn union(mut self, other: TwoFactor) -> TwoFactor {
        self.cycles.extend(other.cycles);
        self
    }
}

impl FromIterator<Cycle> for TwoFactor {
    fn from_iter<I: IntoIterator<Item = Cycle>>(iter: I) -> Self {
        TwoFactor::new(iter.into_iter().collect())
    }
}

/// Vertex-disjoint set of edges covering every vertex of `0..n` exactly once.
pub fn is_perfect_matching(edges: &[Edge], n: usize) -> bool {
    if edges.len() * 2 != n {
        return false;
    }
    let mut seen = vec![false; n];
    for e in edges {
        for v in [e.lo(), e.hi()] {
            match seen.get_mut(v as usize) {
                Some(s) if !*s => *s = true,
                _ => return false,
            }
        }
    }
    true
}
