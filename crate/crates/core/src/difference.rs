//! Two-sided cyclic labeling of `K_{2m}`: vertices `x_i` and `y_i` for
//! `i` in `Z_m`, the rotation `x_i -> x_{i+1}, y_i -> y_{i+1}`, and the
//! classification of edges by index difference.
//!
//! Flat ids are fixed as `x_i = i` and `y_i = m + i`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Cycle, Edge, TwoFactor, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    X,
    Y,
}

/// `x_i` or `y_i` with `0 <= i < m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SideVertex {
    pub side: Side,
    pub index: u32,
}

impl SideVertex {
    /// Reduces `index` into `0..m`, so `x_{-k}` becomes `x_{m-k}`.
    pub fn new(side: Side, index: i64, m: u32) -> SideVertex {
        SideVertex {
            side,
            index: index.rem_euclid(m as i64) as u32,
        }
    }

    pub fn x(index: i64, m: u32) -> SideVertex {
        SideVertex::new(Side::X, index, m)
    }

    pub fn y(index: i64, m: u32) -> SideVertex {
        SideVertex::new(Side::Y, index, m)
    }

    pub fn id(self, m: u32) -> Vertex {
        match self.side {
            Side::X => self.index,
            Side::Y => m + self.index,
        }
    }

    pub fn from_id(v: Vertex, m: u32) -> Result<SideVertex> {
        if v < m {
            Ok(SideVertex { side: Side::X, index: v })
        } else if v < 2 * m {
            Ok(SideVertex { side: Side::Y, index: v - m })
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                count: 2 * m as usize,
            })
        }
    }
}

impl fmt::Display for SideVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::X => 'x',
            Side::Y => 'y',
        };
        write!(f, "{s}{}", self.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DifferenceKind {
    PureLeft,
    PureRight,
    Mixed,
}

/// Pure values are `min(d, m-d)` in `1..=(m-1)/2`; mixed values are the
/// residue `(y-index - x-index) mod m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DifferenceClass {
    pub kind: DifferenceKind,
    pub value: u32,
}

impl DifferenceClass {
    pub fn pure_left(d: i64, m: u32) -> DifferenceClass {
        DifferenceClass {
            kind: DifferenceKind::PureLeft,
            value: pure_value(d, m),
        }
    }

    pub fn pure_right(d: i64, m: u32) -> DifferenceClass {
        DifferenceClass {
            kind: DifferenceKind::PureRight,
            value: pure_value(d, m),
        }
    }

    /// Accepts signed `d`, as in "mixed difference -1".
    pub fn mixed(d: i64, m: u32) -> DifferenceClass {
        DifferenceClass {
            kind: DifferenceKind::Mixed,
            value: d.rem_euclid(m as i64) as u32,
        }
    }

    /// Every class for odd `m`: `(m-1)/2` of each pure kind, then `m` mixed.
    pub fn all(m: u32) -> impl Iterator<Item = DifferenceClass> {
        let half = (m - 1) / 2;
        let left = (1..=half).map(move |d| DifferenceClass::pure_left(d as i64, m));
        let right = (1..=half).map(move |d| DifferenceClass::pure_right(d as i64, m));
        let mixed = (0..m).map(move |d| DifferenceClass::mixed(d as i64, m));
        left.chain(right).chain(mixed)
    }
}

impl fmt::Display for DifferenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            DifferenceKind::PureLeft => "left",
            DifferenceKind::PureRight => "right",
            DifferenceKind::Mixed => "mixed",
        };
        write!(f, "{k}({})", self.value)
    }
}

fn pure_value(d: i64, m: u32) -> u32 {
    let r = d.rem_euclid(m as i64) as u32;
    r.min(m - r)
}

fn check_odd(m: u32) -> Result<()> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "difference classes need odd m >= 3, got {m}"
        )));
    }
    Ok(())
}

pub fn canonical_difference(e: Edge, m: u32) -> Result<DifferenceClass> {
    check_odd(m)?;
    let a = SideVertex::from_id(e.lo(), m)?;
    let b = SideVertex::from_id(e.hi(), m)?;
    Ok(match (a.side, b.side) {
        (Side::X, Side::X) => DifferenceClass::pure_left(b.index as i64 - a.index as i64, m),
        (Side::Y, Side::Y) => DifferenceClass::pure_right(b.index as i64 - a.index as i64, m),
        // ids put every x below every y, so `a` is the x endpoint
        _ => DifferenceClass::mixed(b.index as i64 - a.index as i64, m),
    })
}

/// The power `rho^shift` of the two-sided rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rotation {
    pub shift: u32,
}

impl Rotation {
    pub fn new(shift: i64, m: u32) -> Rotation {
        Rotation {
            shift: shift.rem_euclid(m as i64) as u32,
        }
    }

    pub fn apply(self, v: Vertex, m: u32) -> Vertex {
        debug_assert!(v < 2 * m);
        let side_base = if v < m { 0 } else { m };
        side_base + (v - side_base + self.shift) % m
    }
}

/// Objects on which the rotation acts vertex-wise.
pub trait Rotate: Sized {
    fn rotate(&self, r: Rotation, m: u32) -> Self;
}

impl Rotate for Vertex {
    fn rotate(&self, r: Rotation, m: u32) -> Self {
        r.apply(*self, m)
    }
}

impl Rotate for Edge {
    fn rotate(&self, r: Rotation, m: u32) -> Self {
        self.map(|v| r.apply(v, m))
    }
}

impl Rotate for Cycle {
    fn rotate(&self, r: Rotation, m: u32) -> Self {
        self.relabel(|v| r.apply(v, m))
    }
}

impl Rotate for TwoFactor {
    fn rotate(&self, r: Rotation, m: u32) -> Self {
        self.relabel(|v| r.apply(v, m))
    }
}

impl<T: Rotate> Rotate for Vec<T> {
    fn rotate(&self, r: Rotation, m: u32) -> Self {
        self.iter().map(|x| x.rotate(r, m)).collect()
    }
}

/// Checked entry point: every vertex must be below `2m`.
pub fn rotate(f: &TwoFactor, r: Rotation, m: u32) -> Result<TwoFactor> {
    for c in f.cycles() {
        if let Some(&v) = c.vertices().iter().find(|&&v| v >= 2 * m) {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                count: 2 * m as usize,
            });
        }
    }
    Ok(f.rotate(r, m))
}

/// `[rho^0(F), ..., rho^{m-1}(F)]`.
pub fn orbit_expand(f: &TwoFactor, m: u32) -> Result<Vec<TwoFactor>> {
    (0..m).map(|s| rotate(f, Rotation { shift: s }, m)).collect()
}

/// Multiset of difference classes over a set of edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DifferenceCensus {
    counts: BTreeMap<DifferenceClass, usize>,
}

impl DifferenceCensus {
    pub fn count(&self, class: DifferenceClass) -> usize {
        self.counts.get(&class).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (DifferenceClass, usize)> + '_ {
        self.counts.iter().map(|(&c, &n)| (c, n))
    }

    pub fn add(&mut self, class: DifferenceClass) {
        *self.counts.entry(class).or_insert(0) += 1;
    }

    /// The classes that occur more than once.
    pub fn repeated(&self) -> Vec<DifferenceClass> {
        self.iter().filter(|&(_, n)| n > 1).map(|(c, _)| c).collect()
    }

    /// True when every class of `m` occurs exactly once except one mixed
    /// class that occurs twice; returns that class.
    pub fn starter_shape(&self, m: u32) -> Option<DifferenceClass> {
        let mut dup = None;
        for class in DifferenceClass::all(m) {
            match (self.count(class), class.kind) {
                (1, _) => {}
                (2, DifferenceKind::Mixed) if dup.is_none() => dup = Some(class),
                _ => return None,
            }
        }
        let expected_total = (2 * m) as usize;
        (self.total() == expected_total).then_some(dup).flatten()
    }
}

pub fn difference_census<I>(edges: I, m: u32) -> Result<DifferenceCensus>
where
    I: IntoIterator<Item = Edge>,
{
    let mut census = DifferenceCensus::default();
    for e in edges {
        census.add(canonical_difference(e, m)?);
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: i64, m: u32) -> Vertex {
        SideVertex::x(i, m).id(m)
    }
    fn y(i: i64, m: u32) -> Vertex {
        SideVertex::y(i, m).id(m)
    }

    #[test]
    fn negative_indices_wrap() {
        assert_eq!(SideVertex::x(-2, 5).index, 3);
        assert_eq!(SideVertex::y(-7, 5).index, 3);
        assert_eq!(SideVertex::from_id(7, 5).unwrap(), SideVertex::y(2, 5));
        assert!(SideVertex::from_id(10, 5).is_err());
    }

    #[test]
    fn trivial_differences() {
        let d = canonical_difference(Edge::new(x(0, 5), x(1, 5)), 5).unwrap();
        assert_eq!(d, DifferenceClass::pure_left(1, 5));
        let a = canonical_difference(Edge::new(x(0, 5), y(1, 5)), 5).unwrap();
        let b = canonical_difference(Edge::new(y(1, 5), x(0, 5)), 5).unwrap();
        assert_eq!(a, DifferenceClass::mixed(1, 5));
        assert_eq!(a, b);
    }

    #[test]
    fn same_side_pairs_match_brute_force() {
        let m = 5u32;
        for side in [Side::X, Side::Y] {
            for i in 0..m {
                for j in 0..m {
                    if i == j {
                        continue;
                    }
                    let a = SideVertex { side, index: i }.id(m);
                    let b = SideVertex { side, index: j }.id(m);
                    let fwd = (i + m - j) % m;
                    let back = (j + m - i) % m;
                    let got = canonical_difference(Edge::new(a, b), m).unwrap();
                    assert_eq!(got.value, fwd.min(back));
                    let kind = if side == Side::X {
                        DifferenceKind::PureLeft
                    } else {
                        DifferenceKind::PureRight
                    };
                    assert_eq!(got.kind, kind);
                }
            }
        }
        assert_eq!(
            canonical_difference(Edge::new(x(2, 5), x(-2, 5)), 5).unwrap(),
            DifferenceClass::pure_left(1, 5)
        );
        assert_eq!(
            canonical_difference(Edge::new(y(0, 5), y(-2, 5)), 5).unwrap(),
            DifferenceClass::pure_right(2, 5)
        );
    }

    #[test]
    fn mixed_is_directed_x_to_y() {
        // x_{-1} y_2 with m = 7: (2 - 6) mod 7 = 3
        let d = canonical_difference(Edge::new(x(-1, 7), y(2, 7)), 7).unwrap();
        assert_eq!(d, DifferenceClass::mixed(3, 7));
    }

    #[test]
    fn rejects_even_m_and_out_of_range() {
        assert!(canonical_difference(Edge::new(0, 1), 4).is_err());
        assert!(canonical_difference(Edge::new(0, 10), 5).is_err());
    }

    #[test]
    fn rotation_shifts_both_sides() {
        let m = 5;
        let e = Edge::new(x(0, m), y(1, m));
        assert_eq!(e.rotate(Rotation::new(0, m), m), e);
        let r = e.rotate(Rotation::new(1, m), m);
        assert_eq!(r, Edge::new(x(1, m), y(2, m)));
        assert_eq!(canonical_difference(r, m).unwrap(), DifferenceClass::mixed(1, m));
        assert_eq!(Rotation::new(-1, m).apply(y(0, m), m), y(4, m));
    }

    #[test]
    fn census_of_empty_and_full_graph() {
        let empty = difference_census(std::iter::empty(), 5).unwrap();
        assert_eq!(empty.total(), 0);
        assert!(DifferenceClass::all(5).all(|c| empty.count(c) == 0));

        let m = 5u32;
        let all_pairs = (0..2 * m).flat_map(|a| (a + 1..2 * m).map(move |b| Edge::new(a, b)));
        let census = difference_census(all_pairs, m).unwrap();
        assert_eq!(census.total(), 45);
        for c in DifferenceClass::all(m) {
            assert_eq!(census.count(c), 5, "{c}");
        }
    }

    #[test]
    fn orbit_of_non_spanning_cycle() {
        let m = 5;
        let c = TwoFactor::new(vec![Cycle::new((0..m).collect())]);
        let orbit = orbit_expand(&c, m).unwrap();
        assert_eq!(orbit.len(), 5);
        assert!(orbit.iter().all(|f| f.edge_count() == 5));
        assert!(rotate(&TwoFactor::new(vec![Cycle::new(vec![0, 1, 12])]), Rotation::new(1, m), m).is_err());
    }
}
