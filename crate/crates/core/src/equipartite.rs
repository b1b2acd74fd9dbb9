//! `C_l`-factorizations of the complete equipartite graph `K_{a[k]}`:
//! existence screening, search, and an on-disk certificate cache.

use std::fmt;
use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::error::{Error, Result};
use crate::format;
use crate::search::{search_equipartite, SearchBudget, SearchMode, SearchOutcome, EXHAUSTIVE_MAX_EQUIPARTITE};
use crate::spec::{Certificate, ProblemSpec, Variant};
use crate::verify::verify_factorization;

/// `alpha` parts of size `k`, cycle length `ell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EquipartiteSpec {
    pub alpha: usize,
    pub k: usize,
    pub ell: usize,
}

impl EquipartiteSpec {
    pub fn new(alpha: usize, k: usize, ell: usize) -> EquipartiteSpec {
        EquipartiteSpec { alpha, k, ell }
    }

    pub fn n(&self) -> usize {
        self.alpha * self.k
    }

    pub fn problem(&self) -> Result<ProblemSpec> {
        ProblemSpec::equipartite(self.alpha, self.k, self.ell)
    }

    /// `C(alpha, 2) k^2 / (alpha k)`.
    pub fn factor_count(&self) -> usize {
        (self.alpha - 1) * self.k / 2
    }

    fn check_range(&self) -> Result<()> {
        if self.alpha < 2 || self.k == 0 {
            return Err(Error::InvalidParameter(format!(
                "need alpha >= 2 and k >= 1, got alpha={} k={}",
                self.alpha, self.k
            )));
        }
        if self.ell < 3 || self.ell > self.n() {
            return Err(Error::InvalidParameter(format!(
                "cycle length {} outside 3..={}",
                self.ell,
                self.n()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for EquipartiteSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={} k={} ell={}", self.alpha, self.k, self.ell)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Exists,
    NotExists,
}

/// Outcome of the existence conditions:
/// 1. `ell` divides `alpha k`;
/// 2. `k (alpha - 1)` is even;
/// 3. `ell` is even when `alpha = 2`;
/// 4. `(k, alpha, ell)` is not one of the four exceptions.
///
/// `failed_condition` names one that fails; when 2 and 3 both fail, 3 is
/// reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Feasibility {
    pub verdict: Verdict,
    pub failed_condition: Option<u8>,
}

impl fmt::Display for Feasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.failed_condition {
            None => f.write_str("exists"),
            Some(1) => f.write_str("does not exist: cycle length does not divide the vertex count"),
            Some(2) => f.write_str("does not exist: vertex degree is odd"),
            Some(3) => f.write_str("does not exist: odd cycles in a bipartite graph"),
            Some(_) => f.write_str("does not exist: exceptional case"),
        }
    }
}

/// `(k, alpha, ell)` triples that satisfy the arithmetic conditions but
/// admit no factorization.
const EXCEPTIONS: [(usize, usize, usize); 4] = [(2, 3, 3), (6, 3, 3), (2, 6, 3), (6, 2, 6)];

/// Decides whether `K_{alpha[k]}` has a `C_ell`-factorization using the
/// known characterization for complete equipartite graphs.
pub fn existence_conditions(spec: EquipartiteSpec) -> Result<Feasibility> {
    spec.check_range()?;
    let EquipartiteSpec { alpha, k, ell } = spec;
    let failed = if (alpha * k) % ell != 0 {
        Some(1)
    } else if alpha == 2 && ell % 2 != 0 {
        Some(3)
    } else if (k * (alpha - 1)) % 2 != 0 {
        Some(2)
    } else if EXCEPTIONS.contains(&(k, alpha, ell)) {
        Some(4)
    } else {
        None
    };
    Ok(Feasibility {
        verdict: if failed.is_none() { Verdict::Exists } else { Verdict::NotExists },
        failed_condition: failed,
    })
}

#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("no C_{ell}-factorization of K_{alpha}[{k}] exists ({feasibility})", ell = .spec.ell, alpha = .spec.alpha, k = .spec.k)]
    Infeasible { spec: EquipartiteSpec, feasibility: Feasibility },
    /// The budget ran out. Not a claim of nonexistence.
    #[error("search budget exhausted for {0}")]
    Timeout(EquipartiteSpec),
    #[error(transparent)]
    Other(#[from] Error),
}

/// Searches for a factorization. Small instances (`alpha k` up to
/// [`EXHAUSTIVE_MAX_EQUIPARTITE`]) use the exhaustive search, larger ones
/// the hill climb; `budget.mode` is ignored.
pub fn find_equipartite_factorization(
    spec: EquipartiteSpec,
    budget: &SearchBudget,
    seed: u64,
) -> Result<Certificate, ProviderError> {
    let feasibility = existence_conditions(spec)?;
    if feasibility.verdict == Verdict::NotExists {
        return Err(ProviderError::Infeasible { spec, feasibility });
    }
    let mode = if spec.n() <= EXHAUSTIVE_MAX_EQUIPARTITE {
        SearchMode::Exhaustive
    } else {
        SearchMode::HillClimb
    };
    let budget = SearchBudget { seed, mode, ..*budget };
    match search_equipartite(&spec.problem()?, &budget)? {
        SearchOutcome::Found(cert) => Ok(cert),
        SearchOutcome::NotFound => Err(ProviderError::Timeout(spec)),
        SearchOutcome::ProvedNone => Err(Error::Construction(format!(
            "exhaustive search found nothing for {spec}, which should exist"
        ))
        .into()),
    }
}

/// Checks that `cert` is an accepted factorization for exactly `spec`.
pub fn check_certificate(spec: EquipartiteSpec, cert: &Certificate) -> Result<()> {
    let want = spec.problem()?;
    if cert.spec != want {
        return Err(Error::SpecMismatch(format!(
            "certificate is for {} n={} lengths {:?}, expected {} n={} lengths {:?}",
            cert.spec.variant, cert.spec.n, cert.spec.lengths, want.variant, want.n, want.lengths
        )));
    }
    let report = verify_factorization(cert);
    if !report.is_accepted() {
        return Err(Error::Rejected(report.to_string()));
    }
    Ok(())
}

/// Result of a cache probe.
#[derive(Debug)]
pub enum CacheLookup {
    Hit(Certificate),
    Miss,
    /// An entry existed but failed to parse or verify; it has been removed.
    Evicted(String),
}

/// A directory of certificates keyed by `(alpha, k, ell)`.
#[derive(Clone, Debug)]
pub struct CertCache {
    dir: PathBuf,
}

impl CertCache {
    pub fn new(dir: impl Into<PathBuf>) -> CertCache {
        CertCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, spec: EquipartiteSpec) -> PathBuf {
        self.dir
            .join(format!("equipartite-a{}-k{}-l{}.cert", spec.alpha, spec.k, spec.ell))
    }

    pub fn lookup(&self, spec: EquipartiteSpec) -> Result<CacheLookup> {
        let path = self.path_for(spec);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(CacheLookup::Miss),
            Err(source) => return Err(Error::Io { path, source }),
        };
        let problem = format::parse(&text)
            .map_err(Error::from)
            .and_then(|cert| check_certificate(spec, &cert).map(|_| cert));
        match problem {
            Ok(cert) => Ok(CacheLookup::Hit(cert)),
            Err(reason) => {
                fs::remove_file(&path).map_err(|source| Error::Io { path: path.clone(), source })?;
                Ok(CacheLookup::Evicted(format!("{}: {reason}", path.display())))
            }
        }
    }

    /// Verifies `cert` and writes it. Rejected certificates are never stored.
    pub fn store(&self, spec: EquipartiteSpec, cert: &Certificate) -> Result<PathBuf> {
        check_certificate(spec, cert)?;
        fs::create_dir_all(&self.dir).map_err(|source| Error::Io {
            path: self.dir.clone(),
            source,
        })?;
        let path = self.path_for(spec);
        let tmp = path.with_extension("cert.tmp");
        let io = |source| Error::Io { path: path.clone(), source };
        fs::write(&tmp, format::to_text(cert)).map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)?;
        Ok(path)
    }
}

/// Checks whether a certificate is for some equipartite host and returns
/// the matching [`EquipartiteSpec`].
pub fn spec_of(cert: &Certificate) -> Option<EquipartiteSpec> {
    match cert.spec.variant {
        Variant::Equipartite { parts, part_size } => {
            Some(EquipartiteSpec::new(parts, part_size, cert.spec.uniform_length()?))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> SearchBudget {
        SearchBudget::hill_climb(0, 30.0)
    }

    #[test]
    fn condition_examples() {
        let f = existence_conditions(EquipartiteSpec::new(3, 2, 3)).unwrap();
        assert_eq!((f.verdict, f.failed_condition), (Verdict::NotExists, Some(4)));
        let f = existence_conditions(EquipartiteSpec::new(3, 10, 5)).unwrap();
        assert_eq!((f.verdict, f.failed_condition), (Verdict::Exists, None));
        let f = existence_conditions(EquipartiteSpec::new(2, 3, 3)).unwrap();
        assert_eq!((f.verdict, f.failed_condition), (Verdict::NotExists, Some(3)));
        let f = existence_conditions(EquipartiteSpec::new(3, 3, 4)).unwrap();
        assert_eq!(f.failed_condition, Some(1));
        let f = existence_conditions(EquipartiteSpec::new(2, 3, 6)).unwrap();
        assert_eq!(f.failed_condition, Some(2));
    }

    #[test]
    fn range_errors() {
        assert!(existence_conditions(EquipartiteSpec::new(1, 4, 4)).is_err());
        assert!(existence_conditions(EquipartiteSpec::new(2, 2, 2)).is_err());
        assert!(existence_conditions(EquipartiteSpec::new(2, 2, 5)).is_err());
    }

    #[test]
    fn small_instances_are_found() {
        let c = find_equipartite_factorization(EquipartiteSpec::new(2, 4, 4), &budget(), 0).unwrap();
        assert_eq!(c.factors.len(), 2);
        let c = find_equipartite_factorization(EquipartiteSpec::new(3, 3, 3), &budget(), 0).unwrap();
        assert_eq!(c.factors.len(), 3);
    }

    #[test]
    fn infeasible_is_reported() {
        let e = find_equipartite_factorization(EquipartiteSpec::new(3, 2, 3), &budget(), 0).unwrap_err();
        assert!(matches!(e, ProviderError::Infeasible { .. }));
    }

    /// Every spec with `alpha k <= 9`, cross-checked against exhaustive search.
    #[test]
    fn conditions_agree_with_exhaustion() {
        for alpha in 2..=9 {
            for k in 1..=9 / alpha {
                for ell in 3..=alpha * k {
                    let spec = EquipartiteSpec::new(alpha, k, ell);
                    let verdict = existence_conditions(spec).unwrap().verdict;
                    let found = match spec.problem() {
                        Err(_) => false,
                        Ok(p) => matches!(
                            search_equipartite(&p, &SearchBudget::exhaustive(60.0)).unwrap(),
                            SearchOutcome::Found(_)
                        ),
                    };
                    assert_eq!(verdict == Verdict::Exists, found, "{spec}");
                }
            }
        }
    }

    #[test]
    fn cache_round_trip_and_eviction() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CertCache::new(dir.path());
        let spec = EquipartiteSpec::new(2, 4, 4);
        assert!(matches!(cache.lookup(spec).unwrap(), CacheLookup::Miss));
        let cert = find_equipartite_factorization(spec, &budget(), 0).unwrap();
        let path = cache.store(spec, &cert).unwrap();
        match cache.lookup(spec).unwrap() {
            CacheLookup::Hit(c) => assert_eq!(c, cert.canonical()),
            other => panic!("{other:?}"),
        }
        let text = fs::read_to_string(&path).unwrap();
        let kept: Vec<&str> = text.lines().filter(|l| !l.starts_with("FACTOR 1:")).collect();
        fs::write(&path, kept.join("\n")).unwrap();
        assert!(matches!(cache.lookup(spec).unwrap(), CacheLookup::Evicted(_)));
        assert!(!path.exists());
        assert!(matches!(cache.lookup(spec).unwrap(), CacheLookup::Miss));
    }

    #[test]
    fn store_refuses_bad_certificates() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CertCache::new(dir.path());
        let spec = EquipartiteSpec::new(2, 4, 4);
        let mut cert = find_equipartite_factorization(spec, &budget(), 0).unwrap();
        cert.factors.pop();
        assert!(matches!(cache.store(spec, &cert), Err(Error::Rejected(_))));
        let other = EquipartiteSpec::new(2, 2, 4);
        let small = find_equipartite_factorization(other, &budget(), 0).unwrap();
        assert!(matches!(cache.store(spec, &small), Err(Error::SpecMismatch(_))));
    }

    #[test]
    fn io_errors_are_distinct() {
        let file = tempfile::NamedTempFile::new().unwrap();
        // a regular file where the directory should be
        let cache = CertCache::new(file.path().join("sub"));
        let spec = EquipartiteSpec::new(2, 4, 4);
        assert!(matches!(cache.lookup(spec), Err(Error::Io { .. })));
    }
}
