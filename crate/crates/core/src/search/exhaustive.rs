//! Complete factor-by-factor backtracking. Pairs are grouped into classes
//! with a use count each; plain problems have one class per pair, orbit
//! quotients one class per pair orbit.
//!
//! Each factor is grown cycle by cycle. A cycle starts at the least vertex
//! not yet covered by the current factor and is traversed toward its lesser
//! neighbour, so every cycle is produced once. Factors are unordered, so the
//! first cycle of every factor is forced through the lowest remaining edge at
//! vertex 0; that edge has to be covered by some remaining factor and picking
//! the current one loses nothing. In a quotient, a factor covering the class
//! can be rotated onto vertex 0 since all vertex orbits are full.

use crate::graph::{Cycle, TwoFactor, Vertex};

use super::Deadline;

pub(crate) enum ExactResult {
    Found(Vec<TwoFactor>),
    Exhausted,
    Aborted,
}

/// Pairs are grouped into classes; a solution uses each class exactly
/// `capacity[class]` times. Plain problems give every pair its own class.
pub(crate) struct ExactProblem {
    pub n: usize,
    /// Cycle lengths of one factor.
    pub lengths: Vec<usize>,
    /// Row-major `n x n` symmetric pair -> class; diagonal unused.
    pub class: Vec<u32>,
    pub capacity: Vec<u8>,
    pub factors: usize,
}

impl ExactProblem {
    /// One class per pair with multiplicity `cap(a, b)` for `a < b`.
    pub fn plain(n: usize, lengths: Vec<usize>, factors: usize, cap: impl Fn(usize, usize) -> u8) -> ExactProblem {
        let mut class = vec![0; n * n];
        let mut capacity = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                class[a * n + b] = capacity.len() as u32;
                class[b * n + a] = capacity.len() as u32;
                capacity.push(cap(a, b));
            }
        }
        ExactProblem {
            n,
            lengths,
            class,
            capacity,
            factors,
        }
    }
}

struct Dfs<'a> {
    n: usize,
    class: &'a [u32],
    cap: Vec<u8>,
    length_kinds: Vec<usize>,
    remaining_lengths: Vec<usize>,
    full_lengths: Vec<usize>,
    used: Vec<bool>,
    path: Vec<Vertex>,
    cycles: Vec<Cycle>,
    done: Vec<TwoFactor>,
    factors: usize,
    deadline: &'a Deadline<'a>,
    nodes: u64,
    aborted: bool,
}

pub(crate) fn solve<'a>(problem: &'a ExactProblem, deadline: &'a Deadline<'a>) -> ExactResult {
    let n = problem.n;
    let total: usize = problem.capacity.iter().map(|&c| c as usize).sum();
    if n == 0 || problem.lengths.iter().sum::<usize>() != n || total != problem.factors * n {
        return ExactResult::Exhausted;
    }
    let mut kinds = problem.lengths.clone();
    kinds.sort_unstable();
    kinds.dedup();
    let counts = kinds
        .iter()
        .map(|k| problem.lengths.iter().filter(|&&l| l == *k).count())
        .collect::<Vec<_>>();
    let mut dfs = Dfs {
        n,
        class: &problem.class,
        cap: problem.capacity.clone(),
        length_kinds: kinds,
        remaining_lengths: counts.clone(),
        full_lengths: counts,
        used: vec![false; n],
        path: Vec::with_capacity(n),
        cycles: Vec::new(),
        done: Vec::new(),
        factors: problem.factors,
        deadline,
        nodes: 0,
        aborted: false,
    };
    if dfs.start_factor() {
        ExactResult::Found(dfs.done)
    } else if dfs.aborted {
        ExactResult::Aborted
    } else {
        ExactResult::Exhausted
    }
}

impl Dfs<'_> {
    fn slot(&self, a: Vertex, b: Vertex) -> usize {
        self.class[a as usize * self.n + b as usize] as usize
    }

    fn cap(&self, a: Vertex, b: Vertex) -> u8 {
        self.cap[self.slot(a, b)]
    }

    fn take(&mut self, a: Vertex, b: Vertex) {
        let s = self.slot(a, b);
        self.cap[s] -= 1;
    }

    fn give(&mut self, a: Vertex, b: Vertex) {
        let s = self.slot(a, b);
        self.cap[s] += 1;
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes % 4096 == 0 && self.deadline.expired(self.nodes) {
            self.aborted = true;
        }
        self.aborted
    }

    fn start_factor(&mut self) -> bool {
        if self.done.len() == self.factors {
            return true;
        }
        let Some(anchor) = (1..self.n as Vertex).find(|&w| self.cap(0, w) > 0) else {
            return false;
        };
        self.start_cycle(Some(anchor))
    }

    /// Opens the next cycle of the current factor, or finishes the factor.
    fn start_cycle(&mut self, anchor: Option<Vertex>) -> bool {
        let Some(s) = self.used.iter().position(|&u| !u) else {
            let factor = TwoFactor::new(std::mem::take(&mut self.cycles));
            self.done.push(factor);
            self.used.iter_mut().for_each(|u| *u = false);
            self.remaining_lengths.clone_from(&self.full_lengths);
            if self.start_factor() {
                return true;
            }
            self.remaining_lengths.iter_mut().for_each(|r| *r = 0);
            let factor = self.done.pop().unwrap();
            self.cycles = factor.into_cycles();
            self.used.iter_mut().for_each(|u| *u = true);
            return false;
        };
        let s = s as Vertex;
        for kind in 0..self.length_kinds.len() {
            if self.remaining_lengths[kind] == 0 {
                continue;
            }
            let len = self.length_kinds[kind];
            self.remaining_lengths[kind] -= 1;
            self.used[s as usize] = true;
            self.path.push(s);
            let found = self.extend(s, len, anchor);
            self.path.pop();
            self.used[s as usize] = false;
            self.remaining_lengths[kind] += 1;
            if found || self.aborted {
                return found;
            }
        }
        false
    }

    fn extend(&mut self, start: Vertex, len: usize, anchor: Option<Vertex>) -> bool {
        if self.tick() {
            return false;
        }
        let cur = *self.path.last().unwrap();
        if self.path.len() == len {
            // an anchored cycle is already oriented by its anchor edge
            let second = self.path[1];
            if (anchor.is_none() && cur < second) || self.cap(cur, start) == 0 {
                return false;
            }
            self.take(cur, start);
            let cycle = Cycle::new(self.path.clone());
            self.cycles.push(cycle);
            let saved = std::mem::take(&mut self.path);
            let found = self.start_cycle(None);
            self.path = saved;
            self.cycles.pop();
            self.give(cur, start);
            return found;
        }
        let candidates: Vec<Vertex> = match (self.path.len(), anchor) {
            (1, Some(a)) => vec![a],
            _ => (start + 1..self.n as Vertex)
                .filter(|&v| !self.used[v as usize] && self.cap(cur, v) > 0)
                .collect(),
        };
        for v in candidates {
            if self.used[v as usize] || self.cap(cur, v) == 0 {
                continue;
            }
            self.take(cur, v);
            self.used[v as usize] = true;
            self.path.push(v);
            let found = self.extend(start, len, anchor);
            self.path.pop();
            self.used[v as usize] = false;
            self.give(cur, v);
            if found || self.aborted {
                return found;
            }
        }
        false
    }
}

/// All perfect matchings of `0..n` (n even), each as sorted pairs.
pub(crate) fn perfect_matchings(n: usize) -> Vec<Vec<(Vertex, Vertex)>> {
    fn rec(free: &mut Vec<Vertex>, cur: &mut Vec<(Vertex, Vertex)>, out: &mut Vec<Vec<(Vertex, Vertex)>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            cur.push((a, b));
            rec(free, cur, out);
            cur.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    rec(&mut (0..n as Vertex).collect(), &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_counts() {
        assert_eq!(perfect_matchings(2).len(), 1);
        assert_eq!(perfect_matchings(6).len(), 15);
        assert_eq!(perfect_matchings(8).len(), 105);
    }

    #[test]
    fn k5_has_a_hamiltonian_decomposition() {
        let p = ExactProblem::plain(5, vec![5], 2, |_, _| 1);
        match solve(&p, &Deadline::unlimited()) {
            ExactResult::Found(f) => assert_eq!(f.len(), 2),
            _ => panic!("K5 decomposes into two 5-cycles"),
        }
    }

    #[test]
    fn k7_splits_into_triangle_square_factors() {
        let p = ExactProblem::plain(7, vec![3, 4], 3, |_, _| 1);
        match solve(&p, &Deadline::unlimited()) {
            ExactResult::Found(f) => {
                let mut seen = std::collections::HashSet::new();
                for e in f.iter().flat_map(|t| t.edges().collect::<Vec<_>>()) {
                    assert!(seen.insert(e));
                }
                assert_eq!(seen.len(), 21);
            }
            _ => panic!("K7 has a (C3, C4)-factorization"),
        }
    }

    #[test]
    fn octahedron_has_no_triangle_factorization() {
        // K6 minus a perfect matching
        let p = ExactProblem::plain(6, vec![3, 3], 2, |a, b| u8::from(!(a % 2 == 0 && b == a + 1)));
        assert!(matches!(solve(&p, &Deadline::unlimited()), ExactResult::Exhausted));
    }

    #[test]
    fn shared_classes() {
        // one class for every pair of K4: repeated 4-cycles are fine
        let mut p = ExactProblem::plain(4, vec![4], 3, |_, _| 1);
        p.class.iter_mut().for_each(|c| *c = 0);
        p.capacity = vec![12];
        assert!(matches!(solve(&p, &Deadline::unlimited()), ExactResult::Found(f) if f.len() == 3));
    }
}
