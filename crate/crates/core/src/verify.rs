//! Certificate checking by raw vertex-pair counting.
//!
//! Nothing here uses difference arithmetic or any knowledge of how a
//! certificate was produced, so every constructive module can be tested
//! against it.

use std::fmt;

use crate::graph::{is_perfect_matching, Edge, TwoFactor, Vertex};
use crate::spec::{Certificate, ProblemSpec, Variant};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    NotTwoRegular { vertex: Vertex, degree: usize },
    /// A pair joined twice inside one factor, or a loop.
    RepeatedEdge { pair: (Vertex, Vertex) },
    NotSpanning { vertex: Vertex },
    VertexOutOfRange { vertex: Vertex },
    WrongCycleLengths { found: Vec<usize>, expected: Vec<usize> },
    IntraPartEdge { pair: (Vertex, Vertex) },
    EdgeMultiplicity { pair: (Vertex, Vertex), found: usize, expected: usize },
    MatchingInvalid { detail: String },
    FactorCountWrong { found: usize, expected: Option<usize> },
    SpecMismatch { detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Factor index for per-factor violations.
    pub factor: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.factor {
            write!(f, "factor {i}: ")?;
        }
        match &self.kind {
            ViolationKind::NotTwoRegular { vertex, degree } => {
                write!(f, "NotTwoRegular vertex {vertex} has degree {degree}")
            }
            ViolationKind::RepeatedEdge { pair } => {
                write!(f, "NotTwoRegular pair {}-{} repeated", pair.0, pair.1)
            }
            ViolationKind::NotSpanning { vertex } => write!(f, "NotSpanning vertex {vertex} missing"),
            ViolationKind::VertexOutOfRange { vertex } => {
                write!(f, "NotSpanning vertex {vertex} out of range")
            }
            ViolationKind::WrongCycleLengths { found, expected } => {
                write!(f, "WrongCycleLengths found {found:?}, expected {expected:?}")
            }
            ViolationKind::IntraPartEdge { pair } => {
                write!(f, "IntraPartEdge {}-{} lies inside a part", pair.0, pair.1)
            }
            ViolationKind::EdgeMultiplicity { pair, found, expected } => write!(
                f,
                "EdgeMultiplicity pair {}-{} used {found} times, expected {expected}",
                pair.0, pair.1
            ),
            ViolationKind::MatchingInvalid { detail } => write!(f, "MatchingInvalid {detail}"),
            ViolationKind::FactorCountWrong { found, expected } => match expected {
                Some(e) => write!(f, "FactorCountWrong found {found}, expected {e}"),
                None => write!(f, "FactorCountWrong found {found}, no integral count exists"),
            },
            ViolationKind::SpecMismatch { detail } => write!(f, "SpecMismatch {detail}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn is_accepted(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, pred: impl Fn(&ViolationKind) -> bool) -> bool {
        self.violations.iter().any(|v| pred(&v.kind))
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_accepted() {
            return writeln!(f, "ACCEPT");
        }
        writeln!(f, "REJECT ({} violations)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

fn pair(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    (a.min(b), a.max(b))
}

fn check_factor(index: Option<usize>, f: &TwoFactor, spec: &ProblemSpec, out: &mut Vec<Violation>) {
    let n = spec.n;
    let mut push = |kind| out.push(Violation { factor: index, kind });
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut pairs = std::collections::HashSet::new();
    let mut simple = true;
    for c in f.cycles() {
        for (a, b) in c.links() {
            if a as usize >= n || b as usize >= n {
                push(ViolationKind::VertexOutOfRange { vertex: a.max(b) });
                simple = false;
                continue;
            }
            if a == b || !pairs.insert(pair(a, b)) {
                push(ViolationKind::RepeatedEdge { pair: pair(a, b) });
                simple = false;
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
            if let (Some(pa), Some(pb)) = (spec.part_of(a), spec.part_of(b)) {
                if pa == pb {
                    push(ViolationKind::IntraPartEdge { pair: pair(a, b) });
                }
            }
        }
    }
    for (v, nb) in adj.iter().enumerate() {
        match nb.len() {
            2 => {}
            0 => push(ViolationKind::NotSpanning { vertex: v as Vertex }),
            d => {
                push(ViolationKind::NotTwoRegular {
                    vertex: v as Vertex,
                    degree: d,
                });
                simple = false;
            }
        }
    }
    if !simple || adj.iter().any(|nb| nb.len() != 2) {
        return;
    }
    // simple and 2-regular: components are cycles
    let mut seen = vec![false; n];
    let mut found = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut size = 0;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in &adj[v] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w as usize);
                }
            }
        }
        found.push(size);
    }
    found.sort_unstable();
    let mut expected = spec.lengths.clone();
    expected.sort_unstable();
    if found != expected {
        push(ViolationKind::WrongCycleLengths { found, expected });
    }
}

/// Violations of `f` as a 2-factor of the host described by `spec`; empty
/// means accepted.
pub fn verify_two_factor(f: &TwoFactor, spec: &ProblemSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    check_factor(None, f, spec, &mut out);
    out
}

/// Full check of a certificate against its own spec.
pub fn verify_factorization(cert: &Certificate) -> VerificationReport {
    let spec = &cert.spec;
    let n = spec.n;
    let mut violations = Vec::new();

    if let Err(e) = spec.validate() {
        violations.push(Violation {
            factor: None,
            kind: ViolationKind::SpecMismatch { detail: e.to_string() },
        });
    }

    let expected_count = spec.factor_count();
    if expected_count != Some(cert.factors.len()) {
        violations.push(Violation {
            factor: None,
            kind: ViolationKind::FactorCountWrong {
                found: cert.factors.len(),
                expected: expected_count,
            },
        });
    }

    for (i, f) in cert.factors.iter().enumerate() {
        check_factor(Some(i), f, spec, &mut violations);
    }

    let mut matching_bad = |detail: String| {
        violations.push(Violation {
            factor: None,
            kind: ViolationKind::MatchingInvalid { detail },
        })
    };
    let in_range: Vec<Edge> = cert
        .matching
        .iter()
        .copied()
        .filter(|e| (e.hi() as usize) < n)
        .collect();
    match spec.variant {
        Variant::KnPlusI | Variant::KnMinusI => {
            if !is_perfect_matching(&cert.matching, n) {
                matching_bad(format!(
                    "{} pairs do not form a perfect matching of {n} vertices",
                    cert.matching.len()
                ));
            }
        }
        Variant::Equipartite { .. } => {
            if !cert.matching.is_empty() {
                matching_bad("equipartite certificates carry no matching".into());
            }
        }
    }

    let mut special = vec![false; n * n];
    for e in &in_range {
        special[e.lo() as usize * n + e.hi() as usize] = true;
    }
    let mut count = vec![0usize; n * n];
    for f in &cert.factors {
        for c in f.cycles() {
            for (a, b) in c.links() {
                let (a, b) = pair(a, b);
                if a != b && (b as usize) < n {
                    count[a as usize * n + b as usize] += 1;
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let idx = a * n + b;
            let expected = match spec.variant {
                Variant::KnPlusI => 1 + usize::from(special[idx]),
                Variant::KnMinusI => usize::from(!special[idx]),
                Variant::Equipartite { .. } => {
                    usize::from(spec.part_of(a as Vertex) != spec.part_of(b as Vertex))
                }
            };
            if count[idx] != expected {
                violations.push(Violation {
                    factor: None,
                    kind: ViolationKind::EdgeMultiplicity {
                        pair: (a as Vertex, b as Vertex),
                        found: count[idx],
                        expected,
                    },
                });
            }
        }
    }
    VerificationReport { violations }
}

/// As [`verify_factorization`], additionally requiring the certificate to
/// solve `expected`.
pub fn verify_against(cert: &Certificate, expected: &ProblemSpec) -> VerificationReport {
    let mut report = verify_factorization(cert);
    if cert.spec != *expected {
        report.violations.insert(
            0,
            Violation {
                factor: None,
                kind: ViolationKind::SpecMismatch {
                    detail: format!(
                        "certificate is {} n={} lengths {:?}, expected {} n={} lengths {:?}",
                        cert.spec.variant,
                        cert.spec.n,
                        cert.spec.lengths,
                        expected.variant,
                        expected.n,
                        expected.lengths
                    ),
                },
            },
        );
    }
    report
}
