//! Conflict-minimizing local search over orbit-reduced 2-factor systems.
//!
//! A model fixes a vertex permutation `sigma` of order `g` whose vertex
//! orbits all have size `g`. The search only chooses `F/g` base factors; the
//! full factorization is their `sigma`-images. Each base factor is a vertex
//! arrangement cut into consecutive cycles of the prescribed lengths. The
//! score of an arrangement is the sum over pair orbits of
//! `|uses * g/|orbit| - target|`, which is zero exactly when the expanded
//! factors hit every target multiplicity. With `g = 1` this is plain search
//! over all factors.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Cycle, TwoFactor, Vertex};

use super::exhaustive::ExactProblem;
use super::Deadline;

#[derive(Clone, Debug)]
pub(crate) struct OrbitModel {
    n: usize,
    order: usize,
    perm: Vec<Vertex>,
    /// Row-major pair -> orbit id; diagonal unused.
    orbit: Vec<u32>,
    weight: Vec<u32>,
    target: Vec<u32>,
    base_factors: usize,
    lengths: Vec<usize>,
    /// Applied to expanded factors on the way out.
    output_label: Vec<Vertex>,
}

impl OrbitModel {
    /// `None` when `order` does not divide the factor count, when `perm`
    /// has a vertex orbit of the wrong size, or when some pair orbit cannot
    /// reach its target (a short orbit with an odd target).
    pub fn new(
        perm: Vec<Vertex>,
        order: usize,
        total_factors: usize,
        lengths: Vec<usize>,
        target: impl Fn(Vertex, Vertex) -> u32,
    ) -> Option<OrbitModel> {
        let n = perm.len();
        if order == 0 || total_factors % order != 0 || lengths.iter().sum::<usize>() != n {
            return None;
        }
        for v in 0..n as Vertex {
            let mut w = v;
            for step in 1..=order {
                w = perm[w as usize];
                if (w == v) != (step == order) {
                    return None;
                }
            }
        }
        let mut orbit = vec![u32::MAX; n * n];
        let mut weight = Vec::new();
        let mut targets = Vec::new();
        for a in 0..n as Vertex {
            for b in a + 1..n as Vertex {
                if orbit[a as usize * n + b as usize] != u32::MAX {
                    continue;
                }
                let id = weight.len() as u32;
                let t = target(a, b);
                let (mut x, mut y) = (a, b);
                let mut size = 0;
                for _ in 0..order {
                    let slot = x as usize * n + y as usize;
                    if orbit[slot] == u32::MAX {
                        orbit[slot] = id;
                        orbit[y as usize * n + x as usize] = id;
                        size += 1;
                        debug_assert_eq!(target(x.min(y), x.max(y)), t);
                    }
                    x = perm[x as usize];
                    y = perm[y as usize];
                }
                let w = (order / size) as u32;
                if t % w != 0 {
                    return None;
                }
                weight.push(w);
                targets.push(t);
            }
        }
        Some(OrbitModel {
            n,
            order,
            perm,
            orbit,
            weight,
            target: targets,
            base_factors: total_factors / order,
            lengths,
            output_label: (0..n as Vertex).collect(),
        })
    }

    /// Relabels expanded factors through `label` (a bijection on `0..n`).
    pub fn with_output_label(mut self, label: Vec<Vertex>) -> OrbitModel {
        debug_assert_eq!(label.len(), self.n);
        self.output_label = label;
        self
    }

    pub fn base_factors(&self) -> usize {
        self.base_factors
    }

    /// The quotient as an exact problem: one class per pair orbit, used
    /// `target / weight` times by the base factors.
    pub fn exact_problem(&self) -> ExactProblem {
        ExactProblem {
            n: self.n,
            lengths: self.lengths.clone(),
            class: self.orbit.iter().map(|&o| if o == u32::MAX { 0 } else { o }).collect(),
            capacity: self.target.iter().zip(&self.weight).map(|(t, w)| (t / w) as u8).collect(),
            factors: self.base_factors,
        }
    }

    /// All `sigma`-images of the base factors, relabeled for output.
    pub fn expand_factors(&self, base: &[TwoFactor]) -> Vec<TwoFactor> {
        let mut out = Vec::with_capacity(base.len() * self.order);
        for f in base {
            let mut cycles: Vec<Vec<Vertex>> = f.cycles().iter().map(|c| c.vertices().to_vec()).collect();
            for _ in 0..self.order {
                let label = |c: &Vec<Vertex>| Cycle::new(c.iter().map(|&v| self.output_label[v as usize]).collect());
                out.push(cycles.iter().map(label).collect());
                cycles.iter_mut().flatten().for_each(|v| *v = self.perm[*v as usize]);
            }
        }
        out
    }

    /// Cuts each arrangement into cycles of the model's lengths.
    fn base_factors_of(&self, arr: &[Vec<Vertex>]) -> Vec<TwoFactor> {
        arr.iter()
            .map(|a| {
                let mut pos = 0;
                self.lengths
                    .iter()
                    .map(|&l| {
                        pos += l;
                        Cycle::new(a[pos - l..pos].to_vec())
                    })
                    .collect()
            })
            .collect()
    }
}

/// Tuning for one search run.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ClimbParams {
    /// Steps without a new best score before a restart.
    pub plateau: u64,
    /// Probability of accepting a worsening move.
    pub noise: f64,
}

impl ClimbParams {
    pub fn for_size(n: usize) -> ClimbParams {
        ClimbParams {
            plateau: 20_000 + 4_000 * n as u64,
            noise: 0.002,
        }
    }
}

struct State<'m> {
    model: &'m OrbitModel,
    arr: Vec<Vec<Vertex>>,
    uses: Vec<u32>,
    cost: i64,
    /// position -> (cycle start, cycle length)
    cycle_of: Vec<(usize, usize)>,
}

impl<'m> State<'m> {
    fn random(model: &'m OrbitModel, rng: &mut impl Rng) -> State<'m> {
        let mut cycle_of = Vec::with_capacity(model.n);
        let mut start = 0;
        for &l in &model.lengths {
            cycle_of.extend(std::iter::repeat((start, l)).take(l));
            start += l;
        }
        let arr = (0..model.base_factors)
            .map(|_| {
                let mut a: Vec<Vertex> = (0..model.n as Vertex).collect();
                a.shuffle(rng);
                a
            })
            .collect();
        let mut s = State {
            model,
            arr,
            uses: vec![0; model.weight.len()],
            cost: 0,
            cycle_of,
        };
        s.cost = (0..s.uses.len()).map(|o| s.orbit_cost(o)).sum();
        for b in 0..model.base_factors {
            for p in 0..model.n {
                s.slot(b, p, 1);
            }
        }
        s
    }

    fn orbit_cost(&self, o: usize) -> i64 {
        (self.uses[o] as i64 * self.model.weight[o] as i64 - self.model.target[o] as i64).abs()
    }

    fn next(&self, p: usize) -> usize {
        let (s, l) = self.cycle_of[p];
        if p + 1 == s + l {
            s
        } else {
            p + 1
        }
    }

    fn prev(&self, p: usize) -> usize {
        let (s, l) = self.cycle_of[p];
        if p == s {
            s + l - 1
        } else {
            p - 1
        }
    }

    fn orbit_at(&self, b: usize, p: usize) -> usize {
        let a = self.arr[b][p] as usize;
        let c = self.arr[b][self.next(p)] as usize;
        self.model.orbit[a * self.model.n + c] as usize
    }

    /// Adds (`sign = 1`) or removes (`-1`) the edge leaving position `p`.
    fn slot(&mut self, b: usize, p: usize, sign: i32) {
        let o = self.orbit_at(b, p);
        self.cost -= self.orbit_cost(o);
        self.uses[o] = (self.uses[o] as i32 + sign) as u32;
        self.cost += self.orbit_cost(o);
    }

    fn over_covered(&self, b: usize, p: usize) -> bool {
        let o = self.orbit_at(b, p);
        self.uses[o] * self.model.weight[o] > self.model.target[o]
    }

    fn apply(&mut self, b: usize, mv: Move, slots: &[usize]) {
        for &s in slots {
            self.slot(b, s, -1);
        }
        match mv {
            Move::Swap(i, j) => self.arr[b].swap(i, j),
            Move::Reverse(i, j) => self.arr[b][i..=j].reverse(),
        }
        for &s in slots {
            self.slot(b, s, 1);
        }
    }

    fn affected(&self, mv: Move) -> Vec<usize> {
        let mut slots = match mv {
            Move::Swap(i, j) => vec![self.prev(i), i, self.prev(j), j],
            Move::Reverse(i, j) => vec![self.prev(i), j],
        };
        slots.sort_unstable();
        slots.dedup();
        slots
    }
}

#[derive(Clone, Copy, Debug)]
enum Move {
    Swap(usize, usize),
    /// Reverse positions `i..=j` of one cycle.
    Reverse(usize, usize),
}

pub(crate) enum ClimbResult {
    Found(Vec<TwoFactor>),
    Exhausted,
}

/// Runs restarts, cycling through `models`, until a zero-score system is
/// found or the deadline passes. `accept` gets the expanded factors of each
/// zero-score state and may refuse them, in which case the search restarts.
pub(crate) fn climb(
    models: &[OrbitModel],
    params: ClimbParams,
    rng: &mut impl Rng,
    deadline: &Deadline,
    mut accept: impl FnMut(&[TwoFactor]) -> bool,
) -> ClimbResult {
    if models.is_empty() {
        return ClimbResult::Exhausted;
    }
    let mut steps: u64 = 0;
    for restart in 0.. {
        let model = &models[restart % models.len()];
        let mut state = State::random(model, rng);
        let mut best = state.cost;
        let mut since_best = 0u64;
        let n = model.n;
        loop {
            if state.cost == 0 {
                let factors = model.expand_factors(&model.base_factors_of(&state.arr));
                if accept(&factors) {
                    return ClimbResult::Found(factors);
                }
                break;
            }
            steps += 1;
            if steps % 1024 == 0 && deadline.expired(steps) {
                return ClimbResult::Exhausted;
            }
            since_best += 1;
            if since_best > params.plateau {
                break;
            }
            let b = rng.gen_range(0..model.base_factors);
            // prefer moves touching an over-covered edge
            let mut i = rng.gen_range(0..n);
            for _ in 0..8 {
                if state.over_covered(b, i) {
                    break;
                }
                i = rng.gen_range(0..n);
            }
            if rng.gen_bool(0.5) {
                i = state.next(i);
            }
            let mv = if rng.gen_bool(0.3) {
                let (s, l) = state.cycle_of[i];
                if l < 4 {
                    continue;
                }
                let j = s + rng.gen_range(0..l);
                if i == j {
                    continue;
                }
                Move::Reverse(i.min(j), i.max(j))
            } else {
                let j = rng.gen_range(0..n);
                if i == j {
                    continue;
                }
                Move::Swap(i, j)
            };
            let slots = state.affected(mv);
            let before = state.cost;
            state.apply(b, mv, &slots);
            let delta = state.cost - before;
            if delta > 0 && !rng.gen_bool(params.noise) {
                // undo; both moves are involutions
                state.apply(b, mv, &slots);
                continue;
            }
            if state.cost < best {
                best = state.cost;
                since_best = 0;
            }
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn identity_model(n: usize, factors: usize, lengths: Vec<usize>) -> OrbitModel {
        OrbitModel::new((0..n as Vertex).collect(), 1, factors, lengths, |_, _| 1).unwrap()
    }

    #[test]
    fn rejects_bad_orders() {
        // rotation of order 3 on 6 vertices, but 2 factors
        let perm = vec![1, 2, 0, 4, 5, 3];
        assert!(OrbitModel::new(perm.clone(), 3, 2, vec![6], |_, _| 1).is_none());
        // claimed order 2 for a 3-cycle permutation
        assert!(OrbitModel::new(perm, 2, 2, vec![6], |_, _| 1).is_none());
        // order-2 swap has short orbits {0,1}, {2,3}; odd target unreachable
        assert!(OrbitModel::new(vec![1, 0, 3, 2], 2, 2, vec![4], |_, _| 1).is_none());
    }

    #[test]
    fn finds_hamiltonian_decomposition_of_k7() {
        let model = identity_model(7, 3, vec![7]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let res = climb(&[model], ClimbParams::for_size(7), &mut rng, &Deadline::seconds(10.0), |_| true);
        let ClimbResult::Found(f) = res else { panic!("no decomposition found") };
        let mut edges: Vec<_> = f.iter().flat_map(|t| t.edges().collect::<Vec<_>>()).collect();
        edges.sort();
        edges.dedup();
        assert_eq!(edges.len(), 21);
    }

    #[test]
    fn same_seed_same_answer() {
        let run = |seed| {
            let model = identity_model(9, 4, vec![3, 3, 3]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            match climb(&[model], ClimbParams::for_size(9), &mut rng, &Deadline::steps(5_000_000), |_| true) {
                ClimbResult::Found(f) => Some(f),
                ClimbResult::Exhausted => None,
            }
        };
        let a = run(7);
        assert!(a.is_some());
        assert_eq!(a, run(7));
    }
}
