//! Starter 2-factors `F = {C, C'}` for `C_m`-factorizations of `K_{2m}+I`,
//! odd `m >= 5`.
//!
//! Each residue class of `m` is described by a table of index formulas that
//! is evaluated for the concrete `m`. Paths are glued on shared endpoints and
//! the resulting starter is checked against the difference census before it
//! is handed out, so a transcription slip surfaces as an error rather than a
//! bad factorization.

use crate::difference::{
    difference_census, orbit_expand, DifferenceCensus, DifferenceClass, DifferenceKind, Side,
    SideVertex,
};
use crate::error::{Error, Result};
use crate::graph::{Cycle, Edge, TwoFactor};
use crate::spec::{Certificate, ProblemSpec, Variant};

use DifferenceKind::{Mixed, PureLeft, PureRight};
use Side::{X, Y};

/// `(a*m + b) / d`; only used where the division is exact.
#[derive(Clone, Copy, Debug)]
struct Affine {
    a: i64,
    b: i64,
    d: i64,
}

const fn af(a: i64, b: i64, d: i64) -> Affine {
    Affine { a, b, d }
}

const fn k(c: i64) -> Affine {
    af(0, c, 1)
}

/// `(m + b) / 2`
const fn h(b: i64) -> Affine {
    af(1, b, 2)
}

impl Affine {
    fn eval(self, m: i64) -> Result<i64> {
        let num = self.a * m + self.b;
        if num % self.d != 0 {
            return Err(Error::Construction(format!(
                "index ({}m{:+})/{} is fractional at m={m}",
                self.a, self.b, self.d
            )));
        }
        Ok(num / self.d)
    }
}

#[derive(Clone, Copy, Debug)]
enum Term {
    /// `side_{sign * expr}`
    At(Side, i64, Affine),
    /// For `j` in `from..=to`, each `(side, sign, offset)` of `pattern` as
    /// `side_{sign * (j + offset)}`.
    Run {
        from: Affine,
        to: Affine,
        pattern: &'static [(Side, i64, i64)],
    },
    Lits(&'static [(Side, i64)]),
}

const fn at(side: Side, e: Affine) -> Term {
    Term::At(side, 1, e)
}

const fn neg(side: Side, e: Affine) -> Term {
    Term::At(side, -1, e)
}

/// Expected differences: `sign * d` of `kind` for `d` in `from..=to`.
#[derive(Clone, Copy, Debug)]
struct Expect {
    kind: DifferenceKind,
    sign: i64,
    from: Affine,
    to: Affine,
}

const fn one(kind: DifferenceKind, sign: i64, e: Affine) -> Expect {
    Expect {
        kind,
        sign,
        from: e,
        to: e,
    }
}

const fn range(kind: DifferenceKind, sign: i64, from: Affine, to: Affine) -> Expect {
    Expect {
        kind,
        sign,
        from,
        to,
    }
}

#[derive(Clone, Copy, Debug)]
enum Piece {
    Plain(&'static [Term]),
    /// A named block with its own difference set, recorded as a segment.
    Block(&'static [Term], &'static [Expect]),
    /// Blocks `Q_i` for `i = first, first + 3, ...` up to `last` (at most
    /// `cap`). Block `i` uses pure differences `-(2i + c)` for `c` in
    /// `c_from..=c_to`.
    Blocks {
        first: Affine,
        last: Affine,
        cap: Affine,
        pattern: &'static [(Side, i64, i64)],
        kind: DifferenceKind,
        c_from: i64,
        c_to: i64,
    },
}

#[derive(Clone, Copy, Debug)]
struct Walk {
    name: &'static str,
    pieces: &'static [Piece],
    expect: Option<&'static [Expect]>,
}

// ---- m = 3 (mod 4) ----

const P_3: Walk = Walk {
    name: "P",
    pieces: &[Piece::Plain(&[
        Term::Run {
            from: k(0),
            to: af(1, -3, 4),
            pattern: &[(X, 1, 0), (Y, -1, 0)],
        },
        at(X, af(1, 5, 4)),
    ])],
    expect: Some(&[
        one(Mixed, 1, k(0)),
        range(Mixed, -1, k(1), h(-3)),
        one(Mixed, 1, h(-1)),
    ]),
};

const P_PRIME_3: Walk = Walk {
    name: "P'",
    pieces: &[Piece::Plain(&[
        Term::Run {
            from: k(1),
            to: af(1, -3, 4),
            pattern: &[(Y, 1, 0), (X, -1, 0)],
        },
        at(Y, af(1, 5, 4)),
        at(X, af(1, 1, 4)),
        at(Y, af(1, 1, 4)),
    ])],
    expect: Some(&[range(Mixed, 1, k(0), h(-3)), one(Mixed, -1, h(-1))]),
};

const Q_3: Walk = Walk {
    name: "Q",
    pieces: &[Piece::Plain(&[
        Term::Run {
            from: af(1, 5, 4),
            to: h(-1),
            pattern: &[(X, 1, 0), (X, -1, -1)],
        },
        neg(X, h(-1)),
        at(X, k(0)),
    ])],
    expect: Some(&[range(PureLeft, 1, k(1), h(-1))]),
};

const Q_BLOCK_3: &[(Side, i64, i64)] = &[
    (Y, 1, 0),
    (Y, -1, 1),
    (Y, 1, 2),
    (Y, -1, 0),
    (Y, 1, 4),
    (Y, -1, 2),
    (Y, 1, 3),
];

const QP3_HEAD: &[Term] = &[at(Y, af(1, 1, 4))];

const fn q_prime_3(last: Affine, tail: &'static [Piece; 1]) -> [Piece; 3] {
    [
        Piece::Plain(QP3_HEAD),
        Piece::Blocks {
            first: af(1, 1, 4),
            last,
            cap: h(-9),
            pattern: Q_BLOCK_3,
            kind: PureRight,
            c_from: 1,
            c_to: 6,
        },
        tail[0],
    ]
}

const Q_PRIME_3_EXPECT: &[Expect] = &[range(PureRight, 1, k(1), h(-1))];

const Q_PRIME_3_MOD12: Walk = Walk {
    name: "Q'",
    pieces: &q_prime_3(
        h(-13),
        &[Piece::Plain(&[
            at(Y, h(-7)),
            neg(Y, h(-5)),
            at(Y, h(-3)),
            neg(Y, h(-7)),
            neg(Y, h(-1)),
            at(Y, h(-1)),
            neg(Y, h(-3)),
            at(Y, k(1)),
        ])],
    ),
    expect: Some(Q_PRIME_3_EXPECT),
};

const Q_PRIME_7_MOD12: Walk = Walk {
    name: "Q'",
    pieces: &q_prime_3(
        h(-9),
        &[Piece::Plain(&[
            at(Y, h(-3)),
            neg(Y, h(-1)),
            neg(Y, h(-3)),
            at(Y, k(1)),
        ])],
    ),
    expect: Some(Q_PRIME_3_EXPECT),
};

const Q_PRIME_11_MOD12: Walk = Walk {
    name: "Q'",
    pieces: &q_prime_3(
        h(-17),
        &[Piece::Plain(&[
            at(Y, h(-11)),
            neg(Y, h(-9)),
            at(Y, h(-7)),
            neg(Y, h(-11)),
            at(Y, h(-3)),
            neg(Y, h(-5)),
            at(Y, h(-5)),
            neg(Y, h(-7)),
            neg(Y, h(-1)),
            at(Y, h(-1)),
            neg(Y, h(-3)),
            at(Y, k(1)),
        ])],
    ),
    expect: Some(Q_PRIME_3_EXPECT),
};

const P_PRIME_M11: Walk = Walk {
    name: "P'",
    pieces: &[Piece::Plain(&[Term::Lits(&[
        (Y, 1),
        (X, -1),
        (Y, 2),
        (X, -2),
        (Y, 4),
        (X, 3),
        (Y, 5),
    ])])],
    expect: None,
};

const Q_PRIME_M11: Walk = Walk {
    name: "Q'",
    pieces: &[Piece::Plain(&[Term::Lits(&[
        (Y, 5),
        (Y, -4),
        (Y, -5),
        (Y, 3),
        (Y, -3),
        (Y, 1),
    ])])],
    expect: None,
};

// ---- m = 1 (mod 4) ----

const P_1: Walk = Walk {
    name: "P",
    pieces: &[Piece::Plain(&[
        Term::Run {
            from: k(0),
            to: af(1, -1, 4),
            pattern: &[(X, 1, 0), (Y, -1, 0)],
        },
        neg(X, af(1, 3, 4)),
    ])],
    expect: Some(&[range(Mixed, -1, k(0), h(-1)), one(Mixed, 1, k(1))]),
};

const P_PRIME_1: Walk = Walk {
    name: "P'",
    pieces: &[Piece::Plain(&[
        Term::Run {
            from: k(1),
            to: af(1, -1, 4),
            pattern: &[(Y, 1, 0), (X, -1, 0)],
        },
        at(X, af(1, 7, 4)),
        at(Y, af(1, 3, 4)),
    ])],
    expect: Some(&[
        one(PureLeft, 1, h(-3)),
        one(Mixed, -1, k(1)),
        range(Mixed, 1, k(2), h(-1)),
    ]),
};

const Q_PRIME_1: Walk = Walk {
    name: "Q'",
    pieces: &[Piece::Plain(&[
        Term::Run {
            from: af(1, 3, 4),
            to: h(-1),
            pattern: &[(Y, 1, 0), (Y, -1, 0)],
        },
        at(Y, k(1)),
    ])],
    expect: Some(&[range(PureRight, 1, k(1), h(-1))]),
};

const Q_1_EXPECT: &[Expect] = &[range(PureLeft, 1, k(1), h(-5)), one(PureLeft, 1, h(-1))];

/// The block indexed `(m+7)/4`, which has its own shape.
const Q_FIRST_BLOCK_1: Piece = Piece::Block(
    &[
        neg(X, af(1, 3, 4)),
        at(X, af(1, 15, 4)),
        neg(X, af(1, 15, 4)),
        at(X, af(1, 11, 4)),
        neg(X, af(1, 11, 4)),
        at(X, af(1, 3, 4)),
        neg(X, af(1, 7, 4)),
    ],
    &[range(PureLeft, 1, h(-15), h(-5))],
);

const fn q_1(last: Affine, tail: &'static [Piece; 1]) -> [Piece; 3] {
    [
        Q_FIRST_BLOCK_1,
        Piece::Blocks {
            first: af(1, 19, 4),
            last,
            cap: h(-11),
            pattern: &[
                (X, -1, -3),
                (X, 1, 2),
                (X, -1, 2),
                (X, 1, 1),
                (X, -1, 1),
                (X, 1, 0),
                (X, -1, 0),
            ],
            kind: PureLeft,
            c_from: -1,
            c_to: 4,
        },
        tail[0],
    ]
}

const Q_1_MOD12: Walk = Walk {
    name: "Q",
    pieces: &q_1(
        h(-15),
        &[Piece::Plain(&[
            neg(X, h(-15)),
            at(X, h(-5)),
            at(X, h(-1)),
            neg(X, h(-9)),
            at(X, h(-9)),
            neg(X, h(-7)),
            at(X, h(-7)),
            neg(X, h(-5)),
            at(X, h(-3)),
            neg(X, h(-3)),
            neg(X, h(-1)),
            at(X, k(0)),
        ])],
    ),
    expect: Some(Q_1_EXPECT),
};

const Q_5_MOD12: Walk = Walk {
    name: "Q",
    pieces: &q_1(
        h(-11),
        &[Piece::Plain(&[
            neg(X, h(-11)),
            at(X, h(-1)),
            at(X, h(-3)),
            neg(X, h(-3)),
            at(X, h(-5)),
            neg(X, h(-5)),
            neg(X, h(-1)),
            at(X, k(0)),
        ])],
    ),
    expect: Some(Q_1_EXPECT),
};

const Q_9_MOD12: Walk = Walk {
    name: "Q",
    pieces: &q_1(
        h(-13),
        &[Piece::Plain(&[
            neg(X, h(-13)),
            at(X, h(-3)),
            at(X, h(-1)),
            neg(X, h(-3)),
            at(X, h(-5)),
            neg(X, h(-5)),
            at(X, h(-7)),
            neg(X, h(-7)),
            neg(X, h(-1)),
            at(X, k(0)),
        ])],
    ),
    expect: Some(Q_1_EXPECT),
};

const Q_M13: Walk = Walk {
    name: "Q",
    pieces: &[Piece::Plain(&[Term::Lits(&[
        (X, -4),
        (X, 6),
        (X, 4),
        (X, -5),
        (X, -6),
        (X, 0),
    ])])],
    expect: Some(Q_1_EXPECT),
};

const Q_M17: Walk = Walk {
    name: "Q",
    pieces: &[Piece::Plain(&[Term::Lits(&[
        (X, -5),
        (X, 8),
        (X, 7),
        (X, -7),
        (X, 5),
        (X, -6),
        (X, -8),
        (X, 0),
    ])])],
    expect: Some(Q_1_EXPECT),
};

const Q_M21: Walk = Walk {
    name: "Q",
    pieces: &[Piece::Plain(&[Term::Lits(&[
        (X, -6),
        (X, 9),
        (X, 10),
        (X, -9),
        (X, 8),
        (X, -8),
        (X, 6),
        (X, -7),
        (X, -10),
        (X, 0),
    ])])],
    expect: Some(Q_1_EXPECT),
};

const Q_M25: Walk = Walk {
    name: "Q",
    pieces: &[Piece::Plain(&[Term::Lits(&[
        (X, -7),
        (X, 10),
        (X, 12),
        (X, -8),
        (X, 7),
        (X, -9),
        (X, 9),
        (X, -10),
        (X, 11),
        (X, -11),
        (X, -12),
        (X, 0),
    ])])],
    expect: Some(Q_1_EXPECT),
};

const P_PRIME_M9: Walk = Walk {
    name: "P'",
    pieces: &[Piece::Plain(&[Term::Lits(&[
        (Y, 1),
        (X, -1),
        (Y, 2),
        (X, -2),
        (X, -4),
        (Y, 3),
    ])])],
    expect: None,
};

const Q_M9: Walk = Walk {
    name: "Q",
    pieces: &[Piece::Plain(&[Term::Lits(&[(X, -3), (X, 3), (X, 4), (X, 0)])])],
    expect: None,
};

/// A walk produced by the construction, with the difference multiset it is
/// meant to realize when one is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSegment {
    pub name: String,
    pub vertices: Vec<SideVertex>,
    pub expected: Option<Vec<DifferenceClass>>,
}

impl PathSegment {
    pub fn is_path(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.vertices.iter().all(|v| seen.insert(*v))
    }

    pub fn edges(&self, m: u32) -> impl Iterator<Item = Edge> + '_ {
        self.vertices
            .windows(2)
            .map(move |w| Edge::new(w[0].id(m), w[1].id(m)))
    }

    pub fn census(&self, m: u32) -> Result<DifferenceCensus> {
        difference_census(self.edges(m), m)
    }

    /// Path-ness, and when an expected set is recorded, census equality.
    pub fn check(&self, m: u32) -> Result<()> {
        if !self.is_path() {
            return Err(Error::Construction(format!("{} repeats a vertex at m={m}", self.name)));
        }
        if let Some(expected) = &self.expected {
            let mut want = DifferenceCensus::default();
            expected.iter().for_each(|&c| want.add(c));
            let got = self.census(m)?;
            if got != want {
                return Err(Error::Construction(format!(
                    "{} at m={m} realizes {:?}, expected {:?}",
                    self.name,
                    got.iter().collect::<Vec<_>>(),
                    want.iter().collect::<Vec<_>>()
                )));
            }
        }
        Ok(())
    }

    pub fn first(&self) -> Option<SideVertex> {
        self.vertices.first().copied()
    }

    pub fn last(&self) -> Option<SideVertex> {
        self.vertices.last().copied()
    }
}

/// The four paths of one residue case plus the repeating blocks used to
/// assemble the longer one.
#[derive(Clone, Debug)]
pub struct StarterPaths {
    pub m: u32,
    pub p: PathSegment,
    pub p_prime: PathSegment,
    pub q: PathSegment,
    pub q_prime: PathSegment,
    pub blocks: Vec<PathSegment>,
}

impl StarterPaths {
    pub fn segments(&self) -> impl Iterator<Item = &PathSegment> {
        [&self.p, &self.p_prime, &self.q, &self.q_prime]
            .into_iter()
            .chain(self.blocks.iter())
    }
}

fn expect_set(expect: &[Expect], m: u32) -> Result<Vec<DifferenceClass>> {
    let mi = m as i64;
    let mut out = Vec::new();
    for e in expect {
        let (from, to) = (e.from.eval(mi)?, e.to.eval(mi)?);
        for d in from..=to {
            out.push(class(e.kind, e.sign * d, m));
        }
    }
    Ok(out)
}

fn class(kind: DifferenceKind, d: i64, m: u32) -> DifferenceClass {
    match kind {
        PureLeft => DifferenceClass::pure_left(d, m),
        PureRight => DifferenceClass::pure_right(d, m),
        Mixed => DifferenceClass::mixed(d, m),
    }
}

fn eval_terms(terms: &[Term], m: u32, out: &mut Vec<SideVertex>) -> Result<()> {
    let mi = m as i64;
    for t in terms {
        match *t {
            Term::At(side, sign, e) => out.push(SideVertex::new(side, sign * e.eval(mi)?, m)),
            Term::Run { from, to, pattern } => {
                for j in from.eval(mi)?..=to.eval(mi)? {
                    for &(side, sign, off) in pattern {
                        out.push(SideVertex::new(side, sign * (j + off), m));
                    }
                }
            }
            Term::Lits(lits) => {
                out.extend(lits.iter().map(|&(side, i)| SideVertex::new(side, i, m)));
            }
        }
    }
    Ok(())
}

/// Appends `next` to `walk`, dropping the shared endpoint.
fn glue(walk: &mut Vec<SideVertex>, next: &[SideVertex], what: &str, m: u32) -> Result<()> {
    match (walk.last(), next.first()) {
        (None, _) => walk.extend_from_slice(next),
        (_, None) => {}
        (Some(a), Some(b)) if a == b => walk.extend_from_slice(&next[1..]),
        (Some(a), Some(b)) => {
            return Err(Error::Construction(format!(
                "{what} at m={m}: segment ends at {a} but the next starts at {b}"
            )))
        }
    }
    Ok(())
}

fn eval_walk(walk: &Walk, m: u32, blocks: &mut Vec<PathSegment>) -> Result<PathSegment> {
    let mi = m as i64;
    let mut vertices = Vec::new();
    for piece in walk.pieces {
        match *piece {
            Piece::Plain(terms) => {
                let mut seg = Vec::new();
                eval_terms(terms, m, &mut seg)?;
                glue(&mut vertices, &seg, walk.name, m)?;
            }
            Piece::Block(terms, expect) => {
                let mut seg = Vec::new();
                eval_terms(terms, m, &mut seg)?;
                glue(&mut vertices, &seg, walk.name, m)?;
                blocks.push(PathSegment {
                    name: format!("{}[first block]", walk.name),
                    vertices: seg,
                    expected: Some(expect_set(expect, m)?),
                });
            }
            Piece::Blocks {
                first,
                last,
                cap,
                pattern,
                kind,
                c_from,
                c_to,
            } => {
                let (last, cap) = (last.eval(mi)?, cap.eval(mi)?);
                if last > cap {
                    return Err(Error::Construction(format!(
                        "{} at m={m}: last block index {last} exceeds {cap}",
                        walk.name
                    )));
                }
                let mut i = first.eval(mi)?;
                while i <= last {
                    let seg: Vec<SideVertex> = pattern
                        .iter()
                        .map(|&(side, sign, off)| SideVertex::new(side, sign * (i + off), m))
                        .collect();
                    glue(&mut vertices, &seg, walk.name, m)?;
                    blocks.push(PathSegment {
                        name: format!("{}[block {i}]", walk.name),
                        vertices: seg,
                        expected: Some((c_from..=c_to).map(|c| class(kind, -(2 * i + c), m)).collect()),
                    });
                    i += 3;
                }
            }
        }
    }
    Ok(PathSegment {
        name: walk.name.to_string(),
        vertices,
        expected: walk.expect.map(|e| expect_set(e, m)).transpose()?,
    })
}

fn eval_case(m: u32, walks: [&Walk; 4]) -> Result<StarterPaths> {
    let mut blocks = Vec::new();
    let [p, p_prime, q, q_prime] = walks;
    Ok(StarterPaths {
        m,
        p: eval_walk(p, m, &mut blocks)?,
        p_prime: eval_walk(p_prime, m, &mut blocks)?,
        q: eval_walk(q, m, &mut blocks)?,
        q_prime: eval_walk(q_prime, m, &mut blocks)?,
        blocks,
    })
}

fn q_prime_3_for(m: u32) -> &'static Walk {
    match m % 12 {
        3 => &Q_PRIME_3_MOD12,
        7 => &Q_PRIME_7_MOD12,
        _ => &Q_PRIME_11_MOD12,
    }
}

/// Paths `P, P', Q, Q'` for `m = 3 (mod 4)`, `m >= 7`, `m != 11`.
pub fn build_paths_3mod4(m: u32) -> Result<StarterPaths> {
    if m % 4 != 3 || m < 7 || m == 11 {
        return Err(Error::InvalidParameter(format!(
            "general 3 (mod 4) paths need m = 3 (mod 4), m >= 7, m != 11; got {m}"
        )));
    }
    eval_case(m, [&P_3, &P_PRIME_3, &Q_3, q_prime_3_for(m)])
}

/// Paths `P, P', Q, Q'` for `m = 1 (mod 4)`, `m >= 13`. The four smallest
/// cases use their printed replacement for `Q`.
pub fn build_paths_1mod4(m: u32) -> Result<StarterPaths> {
    if m % 4 != 1 || m < 13 {
        return Err(Error::InvalidParameter(format!(
            "general 1 (mod 4) paths need m = 1 (mod 4), m >= 13; got {m}"
        )));
    }
    let q = match m {
        13 => &Q_M13,
        17 => &Q_M17,
        21 => &Q_M21,
        25 => &Q_M25,
        _ => match m % 12 {
            1 => &Q_1_MOD12,
            5 => &Q_5_MOD12,
            _ => &Q_9_MOD12,
        },
    };
    eval_case(m, [&P_1, &P_PRIME_1, q, &Q_PRIME_1])
}

/// Paths for every `m` that has them (all odd `m >= 7`). `m = 9` and
/// `m = 11` swap in their printed exceptional paths.
pub fn build_paths(m: u32) -> Result<StarterPaths> {
    match m {
        9 => eval_case(m, [&P_1, &P_PRIME_M9, &Q_M9, &Q_PRIME_1]),
        11 => eval_case(m, [&P_3, &P_PRIME_M11, &Q_3, &Q_PRIME_M11]),
        _ if m % 4 == 3 => build_paths_3mod4(m),
        _ => build_paths_1mod4(m),
    }
}

/// The starter: two vertex-disjoint `m`-cycles whose edges realize every
/// difference once, plus one mixed difference a second time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarterFactor {
    pub m: u32,
    pub cycle_c: Vec<SideVertex>,
    pub cycle_c_prime: Vec<SideVertex>,
    pub duplicated_mixed: DifferenceClass,
}

impl StarterFactor {
    pub fn to_two_factor(&self) -> TwoFactor {
        let m = self.m;
        let ids = |c: &[SideVertex]| Cycle::new(c.iter().map(|v| v.id(m)).collect());
        TwoFactor::new(vec![ids(&self.cycle_c), ids(&self.cycle_c_prime)])
    }

    pub fn census(&self) -> Result<DifferenceCensus> {
        difference_census(self.to_two_factor().edges(), self.m)
    }

    /// Cycle lengths, disjointness, spanning and the census shape.
    pub fn check(&self) -> Result<()> {
        let m = self.m;
        let fail = |msg: String| Err(Error::Construction(format!("starter m={m}: {msg}")));
        if self.cycle_c.len() != m as usize || self.cycle_c_prime.len() != m as usize {
            return fail(format!(
                "cycle lengths {} and {}",
                self.cycle_c.len(),
                self.cycle_c_prime.len()
            ));
        }
        let mut seen = vec![false; 2 * m as usize];
        for v in self.cycle_c.iter().chain(&self.cycle_c_prime) {
            let slot = &mut seen[v.id(m) as usize];
            if *slot {
                return fail(format!("vertex {v} used twice"));
            }
            *slot = true;
        }
        match self.census()?.starter_shape(m) {
            Some(dup) if dup == self.duplicated_mixed => Ok(()),
            Some(dup) => fail(format!(
                "duplicated difference is {dup}, expected {}",
                self.duplicated_mixed
            )),
            None => fail("census is not one of each class plus one mixed".into()),
        }
    }
}

/// Closes `a` followed by `b` into a cycle; `b` must run from the end of
/// `a` back to its start.
fn close(a: &PathSegment, b: &PathSegment, m: u32) -> Result<Vec<SideVertex>> {
    if a.last() != b.first() || b.last() != a.first() {
        return Err(Error::Construction(format!(
            "m={m}: {} and {} do not share both endpoints",
            a.name, b.name
        )));
    }
    let mut cycle = a.vertices.clone();
    cycle.extend_from_slice(&b.vertices[1..b.vertices.len() - 1]);
    Ok(cycle)
}

fn explicit_m5() -> StarterFactor {
    let m = 5;
    StarterFactor {
        m,
        cycle_c: vec![
            SideVertex::x(0, m),
            SideVertex::y(1, m),
            SideVertex::y(-1, m),
            SideVertex::x(-1, m),
            SideVertex::x(-2, m),
        ],
        cycle_c_prime: vec![
            SideVertex::y(0, m),
            SideVertex::x(1, m),
            SideVertex::y(-2, m),
            SideVertex::y(2, m),
            SideVertex::x(2, m),
        ],
        duplicated_mixed: DifferenceClass::mixed(0, m),
    }
}

/// The mixed difference each case is built to repeat.
fn declared_duplicate(m: u32) -> DifferenceClass {
    let d = match m {
        5 => 0,
        9 => -2,
        11 => 2,
        _ if m % 4 == 3 => 0,
        _ => -1,
    };
    DifferenceClass::mixed(d, m)
}

pub fn build_starter(m: u32) -> Result<StarterFactor> {
    if m % 2 == 0 || m < 5 {
        return Err(Error::InvalidParameter(format!(
            "starters exist for odd m >= 5 only, got {m}"
        )));
    }
    let starter = if m == 5 {
        explicit_m5()
    } else {
        let paths = build_paths(m)?;
        for seg in paths.segments() {
            seg.check(m)?;
        }
        let (c, c_prime) = if m % 4 == 3 {
            (close(&paths.p, &paths.q, m)?, close(&paths.p_prime, &paths.q_prime, m)?)
        } else {
            (close(&paths.p, &paths.q, m)?, close(&paths.q_prime, &paths.p_prime, m)?)
        };
        StarterFactor {
            m,
            cycle_c: c,
            cycle_c_prime: c_prime,
            duplicated_mixed: declared_duplicate(m),
        }
    };
    starter.check()?;
    Ok(starter)
}

/// The rotation orbit of the starter, with `I = {x_i y_{i+d}}` for the
/// duplicated mixed difference `d`.
pub fn factorize_k2m_plus_i(m: u32) -> Result<Certificate> {
    let starter = build_starter(m)?;
    let factors = orbit_expand(&starter.to_two_factor(), m)?;
    let d = starter.duplicated_mixed.value;
    let matching = (0..m)
        .map(|i| Edge::new(SideVertex::x(i as i64, m).id(m), SideVertex::y((i + d) as i64, m).id(m)))
        .collect();
    let spec = ProblemSpec::uniform(Variant::KnPlusI, 2 * m as usize, m as usize)?;
    Ok(Certificate::new(spec, matching, factors))
}
