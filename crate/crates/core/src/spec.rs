//! Problem instances and the certificate exchange object.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Edge, TwoFactor, Vertex};

/// Host graph of a factorization problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `K_n` with a perfect matching duplicated.
    KnPlusI,
    /// `K_n` with a perfect matching removed.
    KnMinusI,
    /// Complete equipartite graph with `parts` parts of `part_size` vertices.
    /// Parts are the consecutive blocks `0..k`, `k..2k`, ...
    Equipartite { parts: usize, part_size: usize },
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::KnPlusI => f.write_str("KN_PLUS_I"),
            Variant::KnMinusI => f.write_str("KN_MINUS_I"),
            Variant::Equipartite { parts, part_size } => {
                write!(f, "EQUIPARTITE a={parts} k={part_size}")
            }
        }
    }
}

/// A factorization problem: host graph on `n` vertices and the multiset of
/// cycle lengths every 2-factor must have.
///
/// Fields are public so parsed certificates can carry specs that fail
/// [`ProblemSpec::validate`]; the verifier reports those as violations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProblemSpec {
    pub variant: Variant,
    pub n: usize,
    /// Sorted ascending.
    pub lengths: Vec<usize>,
}

impl ProblemSpec {
    pub fn new(variant: Variant, n: usize, mut lengths: Vec<usize>) -> Result<ProblemSpec> {
        lengths.sort_unstable();
        let spec = ProblemSpec {
            variant,
            n,
            lengths,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `n/m` cycles of length `m` per factor.
    pub fn uniform(variant: Variant, n: usize, m: usize) -> Result<ProblemSpec> {
        if m == 0 || n % m != 0 {
            return Err(Error::InvalidSpec(format!(
                "cycle length {m} does not divide n={n}"
            )));
        }
        ProblemSpec::new(variant, n, vec![m; n / m])
    }

    pub fn equipartite(parts: usize, part_size: usize, ell: usize) -> Result<ProblemSpec> {
        ProblemSpec::uniform(
            Variant::Equipartite { parts, part_size },
            parts * part_size,
            ell,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.lengths.iter().any(|&l| l < 3) {
            return bad(format!("cycle lengths must be at least 3, got {:?}", self.lengths));
        }
        let sum: usize = self.lengths.iter().sum();
        if sum != self.n {
            return bad(format!("cycle lengths sum to {sum}, not n={}", self.n));
        }
        match self.variant {
            Variant::KnPlusI | Variant::KnMinusI => {
                if self.n % 2 != 0 {
                    return bad(format!("n={} must be even", self.n));
                }
            }
            Variant::Equipartite { parts, part_size } => {
                if parts < 2 || part_size == 0 {
                    return bad(format!("equipartite graph needs >= 2 nonempty parts, got {parts}x{part_size}"));
                }
                if parts * part_size != self.n {
                    return bad(format!("{parts} parts of {part_size} is not n={}", self.n));
                }
            }
        }
        Ok(())
    }

    /// The common length when every cycle has the same length.
    pub fn uniform_length(&self) -> Option<usize> {
        let first = *self.lengths.first()?;
        self.lengths.iter().all(|&l| l == first).then_some(first)
    }

    /// Number of edges of the host graph, counted with multiplicity.
    pub fn host_edge_count(&self) -> usize {
        let n = self.n;
        match self.variant {
            Variant::KnPlusI => n * (n - 1) / 2 + n / 2,
            Variant::KnMinusI => n * (n - 1) / 2 - n / 2,
            Variant::Equipartite { parts, part_size } => {
                parts * (parts - 1) / 2 * part_size * part_size
            }
        }
    }

    /// Factors in any 2-factorization of the host graph, or `None` when the
    /// edge count is not a multiple of `n`.
    pub fn factor_count(&self) -> Option<usize> {
        let edges = self.host_edge_count();
        (self.n > 0 && edges % self.n == 0).then(|| edges / self.n)
    }

    /// Part index of `v` for the equipartite variant.
    pub fn part_of(&self, v: Vertex) -> Option<usize> {
        match self.variant {
            Variant::Equipartite { part_size, .. } => Some(v as usize / part_size),
            _ => None,
        }
    }
}

/// A claimed factorization: the special matching plus the list of 2-factors.
///
/// `matching` is the duplicated 1-factor for `KnPlusI`, the missing one for
/// `KnMinusI`, and empty for equipartite hosts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub spec: ProblemSpec,
    pub matching: Vec<Edge>,
    pub factors: Vec<TwoFactor>,
}

impl Certificate {
    pub fn new(spec: ProblemSpec, matching: Vec<Edge>, factors: Vec<TwoFactor>) -> Certificate {
        Certificate {
            spec,
            matching,
            factors,
        }
    }

    /// Canonical cycles and factors, sorted matching. Factor order is kept.
    pub fn canonical(&self) -> Certificate {
        let mut matching = self.matching.clone();
        matching.sort_unstable();
        Certificate {
            spec: self.spec.clone(),
            matching,
            factors: self.factors.iter().map(TwoFactor::canonical).collect(),
        }
    }

    /// Apply a vertex bijection to factors and matching alike.
    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Certificate {
        Certificate {
            spec: self.spec.clone(),
            matching: self.matching.iter().map(|e| e.map(&f)).collect(),
            factors: self.factors.iter().map(|t| t.relabel(&f)).collect(),
        }
    }
}
