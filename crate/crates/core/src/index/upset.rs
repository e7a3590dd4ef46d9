//! Ultimately periodic normal form.
//!
//! Boolean combinations of arithmetic progressions, dyadic valuation classes,
//! finite sets, tails, and `full` are ultimately periodic: past a threshold,
//! membership depends only on the residue modulo a fixed period. The normal
//! form makes density exact (`|residues| / modulus`), finiteness decidable
//! (`residues` empty), and set algebra a matter of residue bookkeeping.
//! Sets involving `powers` or `poly` are not ultimately periodic and
//! normalization returns `None` for them, as it does when the combined
//! modulus would exceed [`MODULUS_CAP`].

use super::set::IndexSet;
use std::collections::BTreeSet;

/// Largest modulus the normal form will materialize.
pub const MODULUS_CAP: u64 = 1 << 22;

/// Largest threshold below which explicit membership is enumerated.
pub const START_CAP: u64 = 1 << 22;

/// `n >= start`: member iff `n % modulus` is in `residues`;
/// `1 <= n < start`: member iff `n` is in `below`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpSet {
    pub modulus: u64,
    pub residues: BTreeSet<u64>,
    pub start: u64,
    pub below: BTreeSet<u64>,
}

impl UpSet {
    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            false
        } else if n >= self.start {
            self.residues.contains(&(n % self.modulus))
        } else {
            self.below.contains(&n)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    /// Number of residues hit per period; the natural density is
    /// `hits / modulus`.
    pub fn hits_per_period(&self) -> u64 {
        self.residues.len() as u64
    }

    /// Re-expresses the set with a larger modulus (a multiple of the current
    /// one) and a later start.
    fn lift(&self, modulus: u64, start: u64) -> UpSet {
        debug_assert!(modulus % self.modulus == 0 && start >= self.start);
        let residues = (0..modulus)
            .filter(|r| self.residues.contains(&(r % self.modulus)))
            .collect();
        let below = (1..start).filter(|n| self.contains(*n)).collect();
        UpSet {
            modulus,
            residues,
            start,
            below,
        }
    }

    fn combine(a: &UpSet, b: &UpSet, op: impl Fn(bool, bool) -> bool) -> Option<UpSet> {
        let g = gcd(a.modulus, b.modulus);
        let modulus = (a.modulus / g).checked_mul(b.modulus)?;
        if modulus > MODULUS_CAP {
            return None;
        }
        let start = a.start.max(b.start);
        if start > START_CAP {
            return None;
        }
        let la = a.lift(modulus, start);
        let lb = b.lift(modulus, start);
        let residues = (0..modulus)
            .filter(|r| op(la.residues.contains(r), lb.residues.contains(r)))
            .collect();
        let below = (1..start)
            .filter(|n| op(a.contains(*n), b.contains(*n)))
            .collect();
        Some(UpSet {
            modulus,
            residues,
            start,
            below,
        })
    }

    fn complement(&self) -> Option<UpSet> {
        if self.start > START_CAP {
            return None;
        }
        Some(UpSet {
            modulus: self.modulus,
            residues: (0..self.modulus)
                .filter(|r| !self.residues.contains(r))
                .collect(),
            start: self.start,
            below: (1..self.start).filter(|n| !self.contains(*n)).collect(),
        })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Normalizes an index set to ultimately periodic form when possible.
pub fn normalize(set: &IndexSet) -> Option<UpSet> {
    match set {
        IndexSet::Finite(ms) => {
            let start = ms.last().map_or(1, |m| m + 1);
            Some(UpSet {
                modulus: 1,
                residues: BTreeSet::new(),
                start,
                below: ms.iter().copied().collect(),
            })
        }
        IndexSet::Full => Some(UpSet {
            modulus: 1,
            residues: [0].into_iter().collect(),
            start: 1,
            below: BTreeSet::new(),
        }),
        IndexSet::ArithProg { stride, offset } => {
            if *stride > MODULUS_CAP {
                return None;
            }
            Some(UpSet {
                modulus: *stride,
                residues: [offset % stride].into_iter().collect(),
                start: (*offset).max(1),
                below: BTreeSet::new(),
            })
        }
        IndexSet::DyadicValuation { v } => {
            let modulus = 1u64.checked_shl(v + 1)?;
            if modulus > MODULUS_CAP {
                return None;
            }
            Some(UpSet {
                modulus,
                residues: [1u64 << v].into_iter().collect(),
                start: 1,
                below: BTreeSet::new(),
            })
        }
        IndexSet::TailSolution {
            eventually_in,
            from,
            below,
        } => {
            let residues = if *eventually_in {
                [0].into_iter().collect()
            } else {
                BTreeSet::new()
            };
            Some(UpSet {
                modulus: 1,
                residues,
                start: *from,
                below: below.iter().copied().collect(),
            })
        }
        IndexSet::Powers { .. } | IndexSet::PolyImage { .. } => None,
        IndexSet::Union(a, b) => UpSet::combine(&normalize(a)?, &normalize(b)?, |x, y| x || y),
        IndexSet::Intersection(a, b) => {
            UpSet::combine(&normalize(a)?, &normalize(b)?, |x, y| x && y)
        }
        IndexSet::Difference(a, b) => {
            UpSet::combine(&normalize(a)?, &normalize(b)?, |x, y| x && !y)
        }
        IndexSet::Complement(a) => normalize(a)?.complement(),
    }
}
