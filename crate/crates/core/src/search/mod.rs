//! Desk-scale search for factorizations, and the `n = 4m` parity
//! obstruction.
//!
//! Two modes: [`SearchMode::Exhaustive`] is complete and may report
//! [`SearchOutcome::ProvedNone`]; [`SearchMode::HillClimb`] can only find
//! solutions. Every certificate either mode returns has passed
//! [`verify_factorization`].

mod exhaustive;
mod local;
mod obstruction;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{is_perfect_matching, Edge, TwoFactor, Vertex};
use crate::spec::{Certificate, ProblemSpec, Variant};
use crate::verify::verify_factorization;

pub use obstruction::{obstruction_4m, odd_differences_in_cycle, Conclusion, ObstructionReport};

use exhaustive::{ExactProblem, ExactResult};
use local::{ClimbParams, ClimbResult, OrbitModel};

/// Largest `n` for which exhaustive `K_n +- I` searches are allowed.
pub const EXHAUSTIVE_MAX_N: usize = 8;
/// Largest `alpha * k` for exhaustive equipartite searches.
pub const EXHAUSTIVE_MAX_EQUIPARTITE: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    HillClimb,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_steps: u64,
    pub max_seconds: f64,
    pub seed: u64,
    pub mode: SearchMode,
    /// Independent restart streams. With one worker a run is reproducible
    /// from its seed.
    pub workers: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_steps: u64::MAX,
            max_seconds: 60.0,
            seed: 0,
            mode: SearchMode::HillClimb,
            workers: 1,
        }
    }
}

impl SearchBudget {
    pub fn hill_climb(seed: u64, max_seconds: f64) -> SearchBudget {
        SearchBudget {
            seed,
            max_seconds,
            ..SearchBudget::default()
        }
    }

    pub fn exhaustive(max_seconds: f64) -> SearchBudget {
        SearchBudget {
            max_seconds,
            mode: SearchMode::Exhaustive,
            ..SearchBudget::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Certificate),
    /// Budget ran out. Says nothing about existence.
    NotFound,
    /// Exhaustive search completed without a solution.
    ProvedNone,
}

/// Step and wall-clock limit shared by the search loops.
pub(crate) struct Deadline<'a> {
    start: Instant,
    max_seconds: f64,
    max_steps: u64,
    stop: Option<&'a AtomicBool>,
}

impl<'a> Deadline<'a> {
    pub fn new(budget: &SearchBudget, stop: Option<&'a AtomicBool>) -> Deadline<'a> {
        Deadline {
            start: Instant::now(),
            max_seconds: budget.max_seconds,
            max_steps: budget.max_steps,
            stop,
        }
    }

    #[cfg(test)]
    pub fn unlimited() -> Deadline<'static> {
        Deadline::seconds(f64::INFINITY)
    }

    #[cfg(test)]
    pub fn seconds(s: f64) -> Deadline<'static> {
        Deadline {
            start: Instant::now(),
            max_seconds: s,
            max_steps: u64::MAX,
            stop: None,
        }
    }

    #[cfg(test)]
    pub fn steps(n: u64) -> Deadline<'static> {
        Deadline {
            start: Instant::now(),
            max_seconds: f64::INFINITY,
            max_steps: n,
            stop: None,
        }
    }

    pub fn expired(&self, steps: u64) -> bool {
        steps >= self.max_steps
            || self.stop.is_some_and(|s| s.load(Ordering::Relaxed))
            || self.start.elapsed().as_secs_f64() >= self.max_seconds
    }
}

fn divisors_desc(x: usize) -> Vec<usize> {
    (1..=x).rev().filter(|d| x % d == 0).collect()
}

/// Rotates each block of `g` consecutive vertices in place.
fn block_rotation(n: usize, g: usize) -> Vec<Vertex> {
    (0..n)
        .map(|v| ((v / g) * g + (v % g + 1) % g) as Vertex)
        .collect()
}

/// Pairs block `2b` with block `2b + 1` index by index.
fn block_matching(n: usize, g: usize) -> Vec<(Vertex, Vertex)> {
    (0..n / (2 * g))
        .flat_map(|b| (0..g).map(move |i| (((2 * b) * g + i) as Vertex, ((2 * b + 1) * g + i) as Vertex)))
        .collect()
}

/// Orbit models for `K_n +- I` with the special matching `user`. Every
/// order `g` dividing the factor count with an even number of blocks is
/// tried; each model's matching is carried onto `user` pair by pair.
fn complete_graph_models(spec: &ProblemSpec, factors: usize, user: &[Edge]) -> Vec<OrbitModel> {
    let n = spec.n;
    let plus = spec.variant == Variant::KnPlusI;
    let mut models = Vec::new();
    for g in divisors_desc(factors.max(1)) {
        if n % g != 0 || (n / g) % 2 != 0 {
            continue;
        }
        let pairs = block_matching(n, g);
        let mut partner = vec![Vertex::MAX; n];
        let mut label = vec![0; n];
        for (&(a, b), e) in pairs.iter().zip(user) {
            partner[a as usize] = b;
            partner[b as usize] = a;
            label[a as usize] = e.lo();
            label[b as usize] = e.hi();
        }
        let target = |a: Vertex, b: Vertex| match (plus, partner[a as usize] == b) {
            (true, true) => 2,
            (false, true) => 0,
            _ => 1,
        };
        if let Some(model) = OrbitModel::new(block_rotation(n, g), g, factors, spec.lengths.clone(), target) {
            models.push(model.with_output_label(label));
        }
    }
    models
}

/// Shift by `k/g` inside every part.
///
/// For even `k`, walking around a cycle the position differences sum to
/// zero mod `k`, so every cycle uses an even number of odd-difference pair
/// orbits. A quotient that needs an odd number of those is skipped.
fn equipartite_models(spec: &ProblemSpec, factors: usize) -> Vec<OrbitModel> {
    let Variant::Equipartite { parts, part_size: k } = spec.variant else {
        return Vec::new();
    };
    let n = spec.n;
    let gcd = (1..=k).rev().find(|d| k % d == 0 && factors % d == 0).unwrap_or(1);
    let odd_orbits = |g: usize| parts * (parts - 1) / 2 * (k / g) * (k / 2);
    divisors_desc(gcd)
        .into_iter()
        .filter(|&g| k % 2 != 0 || odd_orbits(g) % 2 == 0)
        .filter_map(|g| {
            let step = k / g;
            let perm = (0..n).map(|v| ((v / k) * k + (v % k + step) % k) as Vertex).collect();
            let target = |a: Vertex, b: Vertex| u32::from(a as usize / k != b as usize / k);
            OrbitModel::new(perm, g, factors, spec.lengths.clone(), target)
        })
        .collect()
}

/// Quotients with at most this many base factors get a bounded exact pass
/// before the hill climb.
const QUOTIENT_MAX_BASE: usize = 2;
const QUOTIENT_NODES: u64 = 2_000_000;

fn quotient_exact(spec: &ProblemSpec, matching: &[Edge], models: &[OrbitModel], budget: &SearchBudget) -> Option<Certificate> {
    let start = Instant::now();
    for model in models.iter().filter(|m| m.base_factors() <= QUOTIENT_MAX_BASE) {
        let left = budget.max_seconds - start.elapsed().as_secs_f64();
        if left <= 0.0 {
            return None;
        }
        let capped = SearchBudget {
            max_steps: QUOTIENT_NODES.min(budget.max_steps),
            max_seconds: left,
            ..*budget
        };
        let problem = model.exact_problem();
        if let ExactResult::Found(base) = exhaustive::solve(&problem, &Deadline::new(&capped, None)) {
            let factors = model.expand_factors(&base);
            let cert = Certificate::new(spec.clone(), matching.to_vec(), factors).canonical();
            if verify_factorization(&cert).is_accepted() {
                return Some(cert);
            }
        }
    }
    None
}

/// Tries the small quotients exactly, then runs the hill climb on
/// `workers` threads; the first verified certificate wins.
fn run_climb(
    spec: &ProblemSpec,
    matching: &[Edge],
    models: &[OrbitModel],
    budget: &SearchBudget,
) -> SearchOutcome {
    let start = Instant::now();
    if let Some(cert) = quotient_exact(spec, matching, models, budget) {
        return SearchOutcome::Found(cert);
    }
    let budget = &SearchBudget {
        max_seconds: budget.max_seconds - start.elapsed().as_secs_f64(),
        ..*budget
    };
    let n = spec.n;
    let workers = budget.workers.max(1);
    let stop = AtomicBool::new(false);
    let winner: Mutex<Option<Certificate>> = Mutex::new(None);
    let worker = |w: usize| {
        let deadline = Deadline::new(budget, Some(&stop));
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(w as u64));
        let make = |factors: &[TwoFactor]| Certificate::new(spec.clone(), matching.to_vec(), factors.to_vec()).canonical();
        let res = local::climb(models, ClimbParams::for_size(n), &mut rng, &deadline, |factors| {
            verify_factorization(&make(factors)).is_accepted()
        });
        if let ClimbResult::Found(factors) = res {
            winner.lock().unwrap().get_or_insert_with(|| make(&factors));
            stop.store(true, Ordering::Relaxed);
        }
    };
    if workers == 1 {
        worker(0);
    } else {
        std::thread::scope(|s| {
            for w in 0..workers {
                let worker = &worker;
                s.spawn(move || worker(w));
            }
        });
    }
    match winner.into_inner().unwrap() {
        Some(cert) => SearchOutcome::Found(cert),
        None => SearchOutcome::NotFound,
    }
}

/// Runs one exact problem; `Ok(None)` means exhausted.
fn run_exact(problem: &ExactProblem, deadline: &Deadline) -> Option<Option<Vec<TwoFactor>>> {
    match exhaustive::solve(problem, deadline) {
        ExactResult::Found(f) => Some(Some(f)),
        ExactResult::Exhausted => Some(None),
        ExactResult::Aborted => None,
    }
}

fn verified(cert: Certificate) -> Result<SearchOutcome> {
    let report = verify_factorization(&cert);
    if report.is_accepted() {
        Ok(SearchOutcome::Found(cert))
    } else {
        Err(Error::Construction(format!("exhaustive search produced a rejected certificate: {report}")))
    }
}

fn check_spec(spec: &ProblemSpec, variant: Variant) -> Result<usize> {
    spec.validate()?;
    if spec.variant != variant {
        return Err(Error::InvalidSpec(format!("expected a {variant} spec, got {}", spec.variant)));
    }
    spec.factor_count()
        .ok_or_else(|| Error::InvalidSpec(format!("no integral factor count for n={}", spec.n)))
}

/// Searches for a factorization of `K_n + I` with the given cycle lengths.
/// Exhaustive mode tries every perfect matching as the duplicated one.
pub fn search_op_plus(spec: &ProblemSpec, budget: &SearchBudget) -> Result<SearchOutcome> {
    let factors = check_spec(spec, Variant::KnPlusI)?;
    let n = spec.n;
    match budget.mode {
        SearchMode::Exhaustive => {
            if n > EXHAUSTIVE_MAX_N {
                return Err(Error::ExhaustiveTooLarge { n, cap: EXHAUSTIVE_MAX_N });
            }
            let deadline = Deadline::new(budget, None);
            for pairs in exhaustive::perfect_matchings(n) {
                let mut doubled = vec![false; n * n];
                for &(a, b) in &pairs {
                    doubled[a as usize * n + b as usize] = true;
                }
                let problem =
                    ExactProblem::plain(n, spec.lengths.clone(), factors, |a, b| 1 + u8::from(doubled[a * n + b]));
                match run_exact(&problem, &deadline) {
                    None => return Ok(SearchOutcome::NotFound),
                    Some(None) => continue,
                    Some(Some(f)) => {
                        let matching = pairs.iter().map(|&(a, b)| Edge::new(a, b)).collect();
                        return verified(Certificate::new(spec.clone(), matching, f).canonical());
                    }
                }
            }
            Ok(SearchOutcome::ProvedNone)
        }
        SearchMode::HillClimb => {
            let matching: Vec<Edge> = block_matching(n, 1).into_iter().map(|(a, b)| Edge::new(a, b)).collect();
            let models = complete_graph_models(spec, factors, &matching);
            Ok(run_climb(spec, &matching, &models, budget))
        }
    }
}

/// Searches for a factorization of `K_n - I` for the given missing matching.
pub fn search_kn_minus_i(
    n: usize,
    lengths: &[usize],
    matching: &[Edge],
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    let spec = ProblemSpec::new(Variant::KnMinusI, n, lengths.to_vec())?;
    let factors = check_spec(&spec, Variant::KnMinusI)?;
    if !is_perfect_matching(matching, n) {
        return Err(Error::InvalidParameter("missing matching is not a perfect matching".into()));
    }
    let mut matching = matching.to_vec();
    matching.sort_unstable();
    match budget.mode {
        SearchMode::Exhaustive => {
            if n > EXHAUSTIVE_MAX_N {
                return Err(Error::ExhaustiveTooLarge { n, cap: EXHAUSTIVE_MAX_N });
            }
            let mut missing = vec![false; n * n];
            for e in &matching {
                missing[e.lo() as usize * n + e.hi() as usize] = true;
            }
            let problem = ExactProblem::plain(n, spec.lengths.clone(), factors, |a, b| u8::from(!missing[a * n + b]));
            match run_exact(&problem, &Deadline::new(budget, None)) {
                None => Ok(SearchOutcome::NotFound),
                Some(None) => Ok(SearchOutcome::ProvedNone),
                Some(Some(f)) => verified(Certificate::new(spec, matching, f).canonical()),
            }
        }
        SearchMode::HillClimb => {
            let models = complete_graph_models(&spec, factors, &matching);
            Ok(run_climb(&spec, &matching, &models, budget))
        }
    }
}

/// Searches for a `C_l`-factorization (or any prescribed lengths) of the
/// equipartite host in `spec`.
pub fn search_equipartite(spec: &ProblemSpec, budget: &SearchBudget) -> Result<SearchOutcome> {
    spec.validate()?;
    let Variant::Equipartite { part_size: k, .. } = spec.variant else {
        return Err(Error::InvalidSpec(format!("expected an equipartite spec, got {}", spec.variant)));
    };
    let n = spec.n;
    let Some(factors) = spec.factor_count() else {
        // edge count is not a multiple of n: no 2-factorization at all
        return Ok(match budget.mode {
            SearchMode::Exhaustive => SearchOutcome::ProvedNone,
            SearchMode::HillClimb => SearchOutcome::NotFound,
        });
    };
    match budget.mode {
        SearchMode::Exhaustive => {
            if n > EXHAUSTIVE_MAX_EQUIPARTITE {
                return Err(Error::ExhaustiveTooLarge { n, cap: EXHAUSTIVE_MAX_EQUIPARTITE });
            }
            let problem = ExactProblem::plain(n, spec.lengths.clone(), factors, |a, b| u8::from(a / k != b / k));
            match run_exact(&problem, &Deadline::new(budget, None)) {
                None => Ok(SearchOutcome::NotFound),
                Some(None) => Ok(SearchOutcome::ProvedNone),
                Some(Some(f)) => verified(Certificate::new(spec.clone(), Vec::new(), f).canonical()),
            }
        }
        SearchMode::HillClimb => {
            let models = equipartite_models(spec, factors);
            Ok(run_climb(spec, &[], &models, budget))
        }
    }
}
