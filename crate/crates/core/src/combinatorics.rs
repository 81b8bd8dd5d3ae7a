//! The sector-pair walk gamma(a, b) = (b + 1, a) on Z_m x Z_m and its
//! cycle structure, which indexes the coloring of resolved orbits.

use crate::geometry::{SectorPair, SliceIndex};
use std::collections::HashMap;
use std::fmt;

/// One application of the walk: (a, b) -> (b + 1, a) mod m.
pub fn gamma(pair: SectorPair, m: u32) -> SectorPair {
    SectorPair::new((pair.b + 1) % m, pair.a % m)
}

/// gamma^n via the closed form: gamma^{2j}(a, b) = (a + j, b + j),
/// gamma^{2j+1}(a, b) = (b + j + 1, a + j), all mod m.
pub fn gamma_power(pair: SectorPair, n: u32, m: u32) -> SectorPair {
    let j = n / 2;
    if n % 2 == 0 {
        SectorPair::new((pair.a + j) % m, (pair.b + j) % m)
    } else {
        SectorPair::new((pair.b + j + 1) % m, (pair.a + j) % m)
    }
}

/// A gamma-cycle, listed in orbit order from its canonical representative
/// (0, b) with the smallest such b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    representative: SectorPair,
    members: Vec<SectorPair>,
}

impl Cycle {
    pub fn representative(&self) -> SectorPair {
        self.representative
    }

    pub fn period(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[SectorPair] {
        &self.members
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// The full partition of Z_m x Z_m into gamma-cycles, with a constant-time
/// member-to-cycle lookup.
#[derive(Clone, Debug)]
pub struct CycleDecomposition {
    m: u32,
    cycles: Vec<Cycle>,
    lookup: HashMap<SectorPair, usize>,
}

impl CycleDecomposition {
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Cycles sorted by representative b: (0, 0), (0, 1), ...
    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    /// Index into [`cycles`](Self::cycles) of the cycle containing `pair`.
    pub fn cycle_index_of(&self, pair: SectorPair) -> Option<usize> {
        self.lookup.get(&pair).copied()
    }

    pub fn cycle_of(&self, pair: SectorPair) -> Option<&Cycle> {
        Some(&self.cycles[self.cycle_index_of(pair)?])
    }
}

/// Decompose Z_m x Z_m under gamma. For even m there are m/2 cycles, all of
/// period 2m; for odd m, (m - 1)/2 cycles of period 2m plus one short cycle
/// of period m through (0, (m - 1)/2).
pub fn cycle_decomposition(m: u32) -> CycleDecomposition {
    assert!(m >= 2, "decomposition needs m >= 2");
    let reps = m.div_ceil(2);
    let mut cycles = Vec::with_capacity(reps as usize);
    let mut lookup = HashMap::with_capacity((m * m) as usize);
    for b in 0..reps {
        let rep = SectorPair::new(0, b);
        let mut members = vec![rep];
        let mut cur = gamma(rep, m);
        while cur != rep {
            members.push(cur);
            cur = gamma(cur, m);
        }
        for &p in &members {
            lookup.insert(p, b as usize);
        }
        cycles.push(Cycle { representative: rep, members });
    }
    CycleDecomposition { m, cycles, lookup }
}

/// Direction slices that the two limit ratios of a cycle land in, keyed by
/// the representative's b. The short cycle of odd m maps both ratios into
/// slice (m + 1)/2; every other cycle gets (m - b mod m, b + 1 mod m).
/// The two indices always sum to 1 mod m.
pub fn limit_slice_map(b: u32, m: u32) -> (SliceIndex, SliceIndex) {
    if m % 2 == 1 && b == (m - 1) / 2 {
        let j = m.div_ceil(2);
        (SliceIndex(j), SliceIndex(j))
    } else {
        (SliceIndex((m - b % m) % m), SliceIndex((b + 1) % m))
    }
}
