//! Parity argument against rotational starters for `K_{4m}+I`, `m` odd.
//!
//! Label the vertices `x_i, y_i` with `i` in `Z_{2m}`. Around any closed
//! walk the signed index steps sum to zero, and `2m` is even, so every cycle
//! carries an even number of odd differences. A starter for the full
//! rotation would have to use every difference exactly once, and there are
//! `2m + 1` odd ones.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Cycle, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conclusion {
    RotationalStarterImpossible,
    NoParityObstruction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub m: u32,
    pub odd_pure_left: u32,
    pub odd_pure_right: u32,
    pub odd_mixed: u32,
    pub total_odd: u32,
    /// Every difference class of the labeling: `m` per pure side plus `2m`
    /// mixed.
    pub total_differences: u32,
    /// The pure difference whose edges form orbits of half length and so
    /// must make up the duplicated matching.
    pub forced_duplicate: u32,
    pub conclusion: Conclusion,
}

impl fmt::Display for ObstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "m={} n={}", self.m, 4 * self.m)?;
        writeln!(f, "differences={}", self.total_differences)?;
        writeln!(f, "odd_pure_left={}", self.odd_pure_left)?;
        writeln!(f, "odd_pure_right={}", self.odd_pure_right)?;
        writeln!(f, "odd_mixed={}", self.odd_mixed)?;
        writeln!(f, "total_odd={}", self.total_odd)?;
        writeln!(
            f,
            "forced_duplicate=pure_left({0}),pure_right({0})",
            self.forced_duplicate
        )?;
        let c = match self.conclusion {
            Conclusion::RotationalStarterImpossible => "RotationalStarterImpossible",
            Conclusion::NoParityObstruction => "NoParityObstruction",
        };
        writeln!(f, "conclusion={c}")
    }
}

pub fn obstruction_4m(m: u32) -> Result<ObstructionReport> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "the 4m obstruction concerns odd m >= 3, got {m}"
        )));
    }
    let half = 2 * m;
    // pure differences run over 1..=m (m is its own negative), mixed over Z_2m
    let odd_pure_left = (1..=m).filter(|d| d % 2 == 1).count() as u32;
    let odd_pure_right = odd_pure_left;
    let odd_mixed = (0..half).filter(|d| d % 2 == 1).count() as u32;
    let total_odd = odd_pure_left + odd_pure_right + odd_mixed;
    Ok(ObstructionReport {
        m,
        odd_pure_left,
        odd_pure_right,
        odd_mixed,
        total_odd,
        total_differences: 2 * m + half,
        forced_duplicate: m,
        conclusion: if total_odd % 2 == 1 {
            Conclusion::RotationalStarterImpossible
        } else {
            Conclusion::NoParityObstruction
        },
    })
}

/// Odd differences along a cycle under the two-sided `Z_{half}` labeling
/// (`x_i = i`, `y_i = half + i`), `half` even.
pub fn odd_differences_in_cycle(cycle: &Cycle, half: u32) -> usize {
    let index = |v: Vertex| v % half;
    cycle
        .links()
        .filter(|&(a, b)| (index(b) + half - index(a)) % half % 2 == 1)
        .count()
}
