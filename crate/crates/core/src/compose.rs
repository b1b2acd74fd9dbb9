//! Top-level solver for `K_n + I`: existence verdicts, the odd-length
//! composition from starter blocks and an equipartite factorization, and the
//! lift of `K_n - I` factorizations for even cycle lengths.

use std::fmt;

use crate::equipartite::{
    check_certificate, find_equipartite_factorization, spec_of, CacheLookup, CertCache, EquipartiteSpec,
    ProviderError,
};
use crate::error::{Error, Result};
use crate::graph::{Cycle, Edge, TwoFactor, Vertex};
use crate::search::{search_kn_minus_i, SearchBudget, SearchMode, SearchOutcome, EXHAUSTIVE_MAX_N};
use crate::spec::{Certificate, ProblemSpec, Variant};
use crate::starter::factorize_k2m_plus_i;
use crate::verify::verify_factorization;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Solvable,
    Unsolvable,
    Open,
}

/// The result a verdict rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Authority {
    /// Every cycle length must divide `n`.
    Divisibility,
    /// Triangle factors exist exactly when `n/3` is even and at least 6.
    TriangleCase,
    /// `n = 2m`, `m` odd: a rotational starter 2-factor.
    Starter,
    /// `n = tm`, `m` odd, `t >= 6`: starter blocks glued with a complete
    /// equipartite factorization.
    OddComposition,
    /// All lengths even: a `K_n - I` factorization plus one alternating factor.
    EvenLift,
    /// `n = 4m`, `m` odd: conjectured solvable, only checked for small `m`.
    FourMConjecture,
    /// Mixed odd lengths are not covered by any result used here.
    OutsideScope,
}

impl fmt::Display for Authority {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Authority::Divisibility => "cycle length must divide n",
            Authority::TriangleCase => "triangle factorizations of K_n+I exist iff n/3 is even and >= 6",
            Authority::Starter => "rotational starter construction for n = 2m",
            Authority::OddComposition => "odd-length composition for n = tm, t >= 6",
            Authority::EvenLift => "even-length lift from K_n-I",
            Authority::FourMConjecture => "n = 4m with m odd is open (conjectured solvable for m >= 5)",
            Authority::OutsideScope => "lengths mixing odd and other values are outside the supported results",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Solvability {
    pub verdict: Verdict,
    pub authority: Authority,
}

impl Solvability {
    fn new(verdict: Verdict, authority: Authority) -> Solvability {
        Solvability { verdict, authority }
    }
}

impl fmt::Display for Solvability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} ({})", self.verdict, self.authority)
    }
}

/// Decides solvability of a valid `K_n + I` spec from the known results.
/// A uniform length that does not divide `n` cannot form a valid spec; use
/// [`decide_uniform`] for those.
pub fn decide_solvability(spec: &ProblemSpec) -> Result<Solvability> {
    if spec.variant != Variant::KnPlusI {
        return Err(Error::InvalidSpec(format!("expected KN_PLUS_I, got {}", spec.variant)));
    }
    spec.validate()?;
    let n = spec.n;
    if let Some(m) = spec.uniform_length() {
        return decide_uniform(n, m);
    }
    if spec.lengths.iter().all(|l| l % 2 == 0) {
        Ok(Solvability::new(Verdict::Solvable, Authority::EvenLift))
    } else {
        Ok(Solvability::new(Verdict::Open, Authority::OutsideScope))
    }
}

/// [`decide_solvability`] for `n/m` cycles of length `m`, also answering
/// when `m` does not divide `n`.
pub fn decide_uniform(n: usize, m: usize) -> Result<Solvability> {
    if n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("n={n} must be even")));
    }
    if m < 3 || m > n {
        return Err(Error::InvalidParameter(format!("cycle length {m} outside 3..={n}")));
    }
    use Authority::*;
    use Verdict::*;
    if n % m != 0 {
        return Ok(Solvability::new(Unsolvable, Divisibility));
    }
    let t = n / m;
    let s = match (m, t) {
        (3, t) if t % 2 == 0 && t >= 6 => Solvability::new(Solvable, TriangleCase),
        (3, _) => Solvability::new(Unsolvable, TriangleCase),
        (m, _) if m % 2 == 0 => Solvability::new(Solvable, EvenLift),
        (_, 2) => Solvability::new(Solvable, Starter),
        (_, 4) => Solvability::new(Open, FourMConjecture),
        _ => Solvability::new(Solvable, OddComposition),
    };
    Ok(s)
}

/// The equipartite instance [`compose_odd`] needs for `n = tm`.
pub fn composition_part_spec(m: usize, t: usize) -> EquipartiteSpec {
    EquipartiteSpec::new(t / 2, 2 * m, m)
}

/// Factorization of `K_{tm} + I` for odd `m >= 5` and even `t >= 6`.
///
/// Vertices split into `t/2` consecutive groups of `2m`; group `g` carries
/// the starter factorization shifted by `2mg`, the `j`-th factors of all
/// groups are merged, and `eq_cert` (parts = groups) supplies the rest.
pub fn compose_odd(m: usize, t: usize, eq_cert: &Certificate) -> Result<Certificate> {
    if m < 5 || m % 2 == 0 {
        return Err(Error::InvalidParameter(format!("m={m} must be odd and at least 5")));
    }
    if t < 6 || t % 2 != 0 {
        return Err(Error::InvalidParameter(format!("t={t} must be even and at least 6")));
    }
    check_certificate(composition_part_spec(m, t), eq_cert)?;
    let base = factorize_k2m_plus_i(m as u32)?;
    let groups = t / 2;
    let block = 2 * m as Vertex;
    let mut merged: Vec<Vec<Cycle>> = vec![Vec::new(); base.factors.len()];
    let mut matching = Vec::with_capacity(m * t / 2);
    for g in 0..groups as Vertex {
        let shifted = base.relabel(|v| v + g * block);
        for (j, f) in shifted.factors.into_iter().enumerate() {
            merged[j].extend(f.into_cycles());
        }
        matching.extend(shifted.matching);
    }
    let mut factors: Vec<TwoFactor> = merged.into_iter().map(TwoFactor::new).collect();
    factors.extend(eq_cert.factors.iter().cloned());
    let spec = ProblemSpec::uniform(Variant::KnPlusI, m * t, m)?;
    checked(Certificate::new(spec, matching, factors).canonical())
}

/// Disjoint cycles on consecutive blocks, one per length, with edges
/// alternately assigned to `I` (even positions) and `I'` (odd positions).
/// Returns `(T, I, I')`, both matchings sorted.
pub fn build_alternating_factor(lengths: &[usize]) -> Result<(TwoFactor, Vec<Edge>, Vec<Edge>)> {
    if lengths.is_empty() || lengths.iter().any(|&l| l < 4 || l % 2 != 0) {
        return Err(Error::InvalidParameter(format!(
            "lengths must be even and at least 4, got {lengths:?}"
        )));
    }
    let mut cycles = Vec::new();
    let (mut i, mut i_prime) = (Vec::new(), Vec::new());
    let mut start = 0;
    for &l in lengths {
        let vs: Vec<Vertex> = (start..start + l as Vertex).collect();
        for p in 0..l {
            let e = Edge::new(vs[p], vs[(p + 1) % l]);
            if p % 2 == 0 { &mut i } else { &mut i_prime }.push(e);
        }
        cycles.push(Cycle::new(vs));
        start += l as Vertex;
    }
    i.sort_unstable();
    i_prime.sort_unstable();
    Ok((TwoFactor::new(cycles), i, i_prime))
}

/// Adds the alternating factor to a `K_n - I` factorization, giving a
/// `K_n + I'` factorization with `I'` doubled.
pub fn even_lift(lengths: &[usize], kn_minus_i: &Certificate) -> Result<Certificate> {
    let (t_factor, i, i_prime) = build_alternating_factor(lengths)?;
    let n: usize = lengths.iter().sum();
    let want = ProblemSpec::new(Variant::KnMinusI, n, lengths.to_vec())?;
    if kn_minus_i.spec != want {
        return Err(Error::SpecMismatch(format!(
            "provider certificate is for {} n={} lengths {:?}, expected KN_MINUS_I n={n} lengths {:?}",
            kn_minus_i.spec.variant, kn_minus_i.spec.n, kn_minus_i.spec.lengths, want.lengths
        )));
    }
    let mut missing = kn_minus_i.matching.clone();
    missing.sort_unstable();
    if missing != i {
        return Err(Error::SpecMismatch(
            "provider certificate's missing matching is not the alternation matching".into(),
        ));
    }
    let report = verify_factorization(kn_minus_i);
    if !report.is_accepted() {
        return Err(Error::Rejected(format!("provider certificate: {report}")));
    }
    let mut factors = kn_minus_i.factors.clone();
    factors.push(t_factor);
    let spec = ProblemSpec::new(Variant::KnPlusI, n, lengths.to_vec())?;
    checked(Certificate::new(spec, i_prime, factors).canonical())
}

fn checked(cert: Certificate) -> Result<Certificate> {
    let report = verify_factorization(&cert);
    if report.is_accepted() {
        Ok(cert)
    } else {
        Err(Error::Construction(format!("composed certificate rejected: {report}")))
    }
}

/// Where sub-factorizations come from: imported certificates first, then
/// the cache, then search.
#[derive(Debug, Default)]
pub struct Provider {
    pub cache: Option<CertCache>,
    pub imported: Vec<Certificate>,
    pub budget: SearchBudget,
    /// Human-readable notes such as cache evictions.
    pub events: Vec<String>,
}

impl Provider {
    pub fn new(budget: SearchBudget) -> Provider {
        Provider {
            budget,
            ..Provider::default()
        }
    }

    pub fn with_cache(mut self, cache: CertCache) -> Provider {
        self.cache = Some(cache);
        self
    }

    pub fn import(&mut self, cert: Certificate) {
        self.imported.push(cert);
    }

    pub fn equipartite(&mut self, spec: EquipartiteSpec) -> Result<Certificate, ProviderError> {
        for cert in &self.imported {
            if spec_of(cert) == Some(spec) {
                match check_certificate(spec, cert) {
                    Ok(()) => return Ok(cert.clone()),
                    Err(e) => self.events.push(format!("imported certificate for {spec} ignored: {e}")),
                }
            }
        }
        if let Some(cache) = &self.cache {
            match cache.lookup(spec)? {
                CacheLookup::Hit(cert) => return Ok(cert),
                CacheLookup::Evicted(reason) => self.events.push(format!("evicted cache entry {reason}")),
                CacheLookup::Miss => {}
            }
        }
        let cert = find_equipartite_factorization(spec, &self.budget, self.budget.seed)?;
        if let Some(cache) = &self.cache {
            let path = cache.store(spec, &cert)?;
            self.events.push(format!("cached {}", path.display()));
        }
        Ok(cert)
    }

    /// `None` when the budget runs out.
    pub fn kn_minus_i(&mut self, lengths: &[usize], missing: &[Edge]) -> Result<Option<Certificate>> {
        let n: usize = lengths.iter().sum();
        let mut sorted = lengths.to_vec();
        sorted.sort_unstable();
        for cert in &self.imported {
            let mut m = cert.matching.clone();
            m.sort_unstable();
            if cert.spec.variant == Variant::KnMinusI && cert.spec.n == n && cert.spec.lengths == sorted && m == missing
            {
                if verify_factorization(cert).is_accepted() {
                    return Ok(Some(cert.clone()));
                }
                self.events.push("imported K_n-I certificate rejected by the verifier".into());
            }
        }
        let mode = if n <= EXHAUSTIVE_MAX_N {
            SearchMode::Exhaustive
        } else {
            SearchMode::HillClimb
        };
        let budget = SearchBudget { mode, ..self.budget };
        match search_kn_minus_i(n, lengths, missing, &budget)? {
            SearchOutcome::Found(cert) => Ok(Some(cert)),
            SearchOutcome::NotFound => Ok(None),
            SearchOutcome::ProvedNone => Err(Error::Construction(format!(
                "K_{n} minus the alternation matching has no factorization into lengths {lengths:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(Certificate),
    Unsolvable(Solvability),
    Open(Solvability),
    /// Solvable, but the construction is not implemented here.
    Unsupported(Solvability),
    /// A sub-factorization could not be found within budget.
    Incomplete(String),
}

/// Decides `spec` and, when solvable, builds a verified certificate.
pub fn solve(spec: &ProblemSpec, provider: &mut Provider) -> Result<SolveOutcome> {
    let verdict = decide_solvability(spec)?;
    solve_decided(spec, verdict, provider)
}

/// [`solve`] for `n/m` cycles of length `m`, answering even when `m` does
/// not divide `n`.
pub fn solve_uniform(n: usize, m: usize, provider: &mut Provider) -> Result<SolveOutcome> {
    let verdict = decide_uniform(n, m)?;
    if verdict.verdict != Verdict::Solvable {
        return Ok(outcome_for(verdict));
    }
    solve_decided(&ProblemSpec::uniform(Variant::KnPlusI, n, m)?, verdict, provider)
}

fn outcome_for(verdict: Solvability) -> SolveOutcome {
    match verdict.verdict {
        Verdict::Unsolvable => SolveOutcome::Unsolvable(verdict),
        _ => SolveOutcome::Open(verdict),
    }
}

fn solve_decided(spec: &ProblemSpec, verdict: Solvability, provider: &mut Provider) -> Result<SolveOutcome> {
    if verdict.verdict != Verdict::Solvable {
        return Ok(outcome_for(verdict));
    }
    let n = spec.n;
    let cert = match verdict.authority {
        Authority::TriangleCase => return Ok(SolveOutcome::Unsupported(verdict)),
        Authority::Starter => factorize_k2m_plus_i((n / 2) as u32)?,
        Authority::OddComposition => {
            let m = spec.lengths[0];
            let t = n / m;
            let eq = match provider.equipartite(composition_part_spec(m, t)) {
                Ok(c) => c,
                Err(ProviderError::Timeout(s)) => {
                    return Ok(SolveOutcome::Incomplete(format!("no equipartite factorization for {s} within budget")))
                }
                Err(ProviderError::Other(e)) => return Err(e),
                Err(e) => return Err(Error::Construction(e.to_string())),
            };
            compose_odd(m, t, &eq)?
        }
        Authority::EvenLift => {
            let (_, i, _) = build_alternating_factor(&spec.lengths)?;
            match provider.kn_minus_i(&spec.lengths, &i)? {
                Some(sub) => even_lift(&spec.lengths, &sub)?,
                None => {
                    return Ok(SolveOutcome::Incomplete(format!(
                        "no K_{n}-I factorization into lengths {:?} within budget",
                        spec.lengths
                    )))
                }
            }
        }
        other => return Err(Error::Construction(format!("no construction for {other}"))),
    };
    Ok(SolveOutcome::Solved(checked(cert)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kn_plus(n: usize, m: usize) -> ProblemSpec {
        ProblemSpec::uniform(Variant::KnPlusI, n, m).unwrap()
    }

    #[test]
    fn verdict_examples() {
        let d = decide_solvability(&kn_plus(18, 3)).unwrap();
        assert_eq!(d, Solvability::new(Verdict::Solvable, Authority::TriangleCase));
        let d = decide_solvability(&kn_plus(20, 5)).unwrap();
        assert_eq!(d, Solvability::new(Verdict::Open, Authority::FourMConjecture));
        let d = decide_solvability(&kn_plus(22, 11)).unwrap();
        assert_eq!(d, Solvability::new(Verdict::Solvable, Authority::Starter));
        assert_eq!(decide_uniform(12, 5).unwrap().verdict, Verdict::Unsolvable);
        assert_eq!(decide_uniform(6, 3).unwrap().verdict, Verdict::Unsolvable);
        assert_eq!(decide_uniform(12, 3).unwrap().verdict, Verdict::Unsolvable);
        assert_eq!(decide_uniform(12, 4).unwrap().verdict, Verdict::Solvable);
        assert!(decide_uniform(11, 3).is_err());
        let mixed = ProblemSpec::new(Variant::KnPlusI, 10, vec![3, 7]).unwrap();
        assert_eq!(decide_solvability(&mixed).unwrap().verdict, Verdict::Open);
        let even = ProblemSpec::new(Variant::KnPlusI, 10, vec![4, 6]).unwrap();
        assert_eq!(decide_solvability(&even).unwrap().authority, Authority::EvenLift);
    }

    #[test]
    fn alternating_examples() {
        let (t, i, ip) = build_alternating_factor(&[4]).unwrap();
        assert_eq!(t.cycles()[0].to_string(), "(0 1 2 3)");
        assert_eq!(i, vec![Edge::new(0, 1), Edge::new(2, 3)]);
        assert_eq!(ip, vec![Edge::new(0, 3), Edge::new(1, 2)]);
        let (_, i, ip) = build_alternating_factor(&[4, 6]).unwrap();
        let s = |v: &[Edge]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ");
        assert_eq!(s(&i), "0-1 2-3 4-5 6-7 8-9");
        assert_eq!(s(&ip), "0-3 1-2 4-9 5-6 7-8");
        assert!(build_alternating_factor(&[4, 5]).is_err());
    }

    #[test]
    fn small_solves() {
        let mut p = Provider::new(SearchBudget::hill_climb(0, 30.0));
        let SolveOutcome::Solved(c) = solve_uniform(10, 5, &mut p).unwrap() else { panic!() };
        assert_eq!(c.factors.len(), 5);
        assert!(matches!(solve_uniform(12, 5, &mut p).unwrap(), SolveOutcome::Unsolvable(_)));
        assert!(matches!(solve_uniform(20, 5, &mut p).unwrap(), SolveOutcome::Open(_)));
        assert!(matches!(solve_uniform(18, 3, &mut p).unwrap(), SolveOutcome::Unsupported(_)));
        let spec = ProblemSpec::new(Variant::KnPlusI, 6, vec![6]).unwrap();
        let SolveOutcome::Solved(c) = solve(&spec, &mut p).unwrap() else { panic!() };
        assert_eq!(c.factors.len(), 3);
        assert_eq!(c.matching, build_alternating_factor(&[6]).unwrap().2);
    }

    #[test]
    fn even_lift_rejects_wrong_matching() {
        let m = [Edge::new(0, 5), Edge::new(1, 2), Edge::new(3, 4)];
        let SearchOutcome::Found(sub) = search_kn_minus_i(6, &[6], &m, &SearchBudget::exhaustive(10.0)).unwrap() else {
            panic!()
        };
        assert!(matches!(even_lift(&[6], &sub), Err(Error::SpecMismatch(_))));
    }

    #[test]
    fn compose_odd_rejects_mismatched_part_certificate() {
        let eq = find_equipartite_factorization(EquipartiteSpec::new(2, 4, 4), &SearchBudget::default(), 0).unwrap();
        assert!(matches!(compose_odd(7, 6, &eq), Err(Error::SpecMismatch(_))));
        assert!(compose_odd(3, 6, &eq).is_err());
        assert!(compose_odd(5, 4, &eq).is_err());
    }
}
