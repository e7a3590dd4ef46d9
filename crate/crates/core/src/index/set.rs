//! The index-set constructors and their extensional semantics.
//!
//! An [`IndexSet`] describes a subset of `{1, 2, 3, ...}`. Primitive
//! constructors cover the sets the convergence analysis needs (arithmetic
//! progressions, geometric and polynomial images, the dyadic valuation
//! classes, threshold solutions) and the Boolean combinators close them
//! under union, intersection, complement, and difference. Membership is
//! decidable pointwise for every constructor; `members_upto` is the plain
//! enumeration of the pointwise predicate.

use std::fmt;

/// Symbolic description of a subset of the positive naturals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexSet {
    /// A finite explicit set.
    Finite(Vec<u64>),
    /// All of the positive naturals.
    Full,
    /// `{offset + stride * m : m >= 0}` intersected with the positives;
    /// `stride >= 1`.
    ArithProg { stride: u64, offset: u64 },
    /// `{scale * base^m : m >= 1}` with `base >= 2`, `scale >= 1`.
    Powers { base: u64, scale: u64 },
    /// `{scale * m^degree : m >= 1}` with `degree >= 2`, `scale >= 1`.
    PolyImage { scale: u64, degree: u32 },
    /// `{2^v * (2k+1) : k >= 0}`: the naturals with dyadic valuation
    /// exactly `v`.
    DyadicValuation { v: u32 },
    /// Threshold-solution set: for `n >= from` membership equals
    /// `eventually_in`; below `from` the explicit `below` list decides.
    TailSolution {
        eventually_in: bool,
        from: u64,
        below: Vec<u64>,
    },
    Union(Box<IndexSet>, Box<IndexSet>),
    Intersection(Box<IndexSet>, Box<IndexSet>),
    Complement(Box<IndexSet>),
    Difference(Box<IndexSet>, Box<IndexSet>),
}

impl IndexSet {
    pub fn finite(mut members: Vec<u64>) -> Self {
        members.retain(|n| *n >= 1);
        members.sort_unstable();
        members.dedup();
        IndexSet::Finite(members)
    }

    pub fn arith_prog(stride: u64, offset: u64) -> Self {
        assert!(stride >= 1, "stride must be positive");
        IndexSet::ArithProg { stride, offset }
    }

    pub fn powers(base: u64, scale: u64) -> Self {
        assert!(base >= 2, "base must be at least 2");
        assert!(scale >= 1, "scale must be positive");
        IndexSet::Powers { base, scale }
    }

    pub fn poly_image(scale: u64, degree: u32) -> Self {
        assert!(degree >= 2, "degree must be at least 2");
        assert!(scale >= 1, "scale must be positive");
        IndexSet::PolyImage { scale, degree }
    }

    pub fn dyadic(v: u32) -> Self {
        assert!(v <= 60, "dyadic valuation class out of range");
        IndexSet::DyadicValuation { v }
    }

    /// Builds a threshold solution, normalizing the eventually-out case to a
    /// finite set.
    pub fn tail_solution(eventually_in: bool, from: u64, below: Vec<u64>) -> Self {
        let mut below: Vec<u64> = below.into_iter().filter(|n| *n >= 1 && *n < from).collect();
        below.sort_unstable();
        below.dedup();
        if eventually_in {
            IndexSet::TailSolution {
                eventually_in,
                from,
                below,
            }
        } else {
            IndexSet::Finite(below)
        }
    }

    pub fn union(a: IndexSet, b: IndexSet) -> Self {
        IndexSet::Union(Box::new(a), Box::new(b))
    }

    pub fn intersection(a: IndexSet, b: IndexSet) -> Self {
        IndexSet::Intersection(Box::new(a), Box::new(b))
    }

    pub fn complement(a: IndexSet) -> Self {
        IndexSet::Complement(Box::new(a))
    }

    pub fn difference(a: IndexSet, b: IndexSet) -> Self {
        IndexSet::Difference(Box::new(a), Box::new(b))
    }

    /// Pointwise membership; `n` must be at least 1.
    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        match self {
            IndexSet::Finite(ms) => ms.binary_search(&n).is_ok(),
            IndexSet::Full => true,
            IndexSet::ArithProg { stride, offset } => {
                n >= *offset && (n - *offset) % *stride == 0
            }
            IndexSet::Powers { base, scale } => {
                if n % scale != 0 {
                    return false;
                }
                let mut q = n / scale;
                if q < *base {
                    return false;
                }
                while q % base == 0 {
                    q /= base;
                }
                q == 1
            }
            IndexSet::PolyImage { scale, degree } => {
                if n % scale != 0 {
                    return false;
                }
                let q = n / scale;
                let r = integer_root(q, *degree);
                r >= 1 && checked_pow(r, *degree) == Some(q)
            }
            IndexSet::DyadicValuation { v } => {
                let tz = n.trailing_zeros();
                tz == *v
            }
            IndexSet::TailSolution {
                eventually_in,
                from,
                below,
            } => {
                if n >= *from {
                    *eventually_in
                } else {
                    below.binary_search(&n).is_ok()
                }
            }
            IndexSet::Union(a, b) => a.contains(n) || b.contains(n),
            IndexSet::Intersection(a, b) => a.contains(n) && b.contains(n),
            IndexSet::Complement(a) => !a.contains(n),
            IndexSet::Difference(a, b) => a.contains(n) && !b.contains(n),
        }
    }

    /// `{n in self : n <= limit}`, ascending.
    pub fn members_upto(&self, limit: u64) -> Vec<u64> {
        (1..=limit).filter(|n| self.contains(*n)).collect()
    }

    /// `|self ∩ [1, limit]|`.
    pub fn count_upto(&self, limit: u64) -> u64 {
        (1..=limit).filter(|n| self.contains(*n)).count() as u64
    }
}

/// Largest `r` with `r^k <= q` (integer k-th root).
pub(crate) fn integer_root(q: u64, k: u32) -> u64 {
    if q == 0 {
        return 0;
    }
    let mut lo: u64 = 1;
    let mut hi: u64 = 1u64 << (64 / k.max(1) + 1).min(63);
    while checked_pow(hi, k).map_or(false, |p| p <= q) {
        hi = hi.saturating_mul(2);
    }
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        match checked_pow(mid, k) {
            Some(p) if p <= q => lo = mid,
            _ => hi = mid - 1,
        }
    }
    lo
}

pub(crate) fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSet::Finite(ms) => {
                write!(f, "finite{{")?;
                for (i, m) in ms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, "}}")
            }
            IndexSet::Full => write!(f, "full"),
            IndexSet::ArithProg { stride, offset } => write!(f, "ap({stride},{offset})"),
            IndexSet::Powers { base, scale } => {
                if *scale == 1 {
                    write!(f, "powers({base})")
                } else {
                    write!(f, "powers({base},{scale})")
                }
            }
            IndexSet::PolyImage { scale, degree } => write!(f, "poly({scale},{degree})"),
            IndexSet::DyadicValuation { v } => write!(f, "dyadic({v})"),
            IndexSet::TailSolution { from, below, .. } => {
                write!(f, "tail(from={from}")?;
                if !below.is_empty() {
                    write!(f, ",below=")?;
                    for (i, m) in below.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{m}")?;
                    }
                }
                write!(f, ")")
            }
            IndexSet::Union(a, b) => write!(f, "({a} | {b})"),
            IndexSet::Intersection(a, b) => write!(f, "({a} & {b})"),
            IndexSet::Complement(a) => write!(f, "~{a}"),
            IndexSet::Difference(a, b) => write!(f, "({a} \\ {b})"),
        }
    }
}
