//! Value spaces: the metric space the random variables take values in.
//!
//! Two kinds are supported: the rational line with `d(x,y) = |x - y|`, and a
//! finite labelled point set with an explicit distance table. Tables are
//! validated on construction (zero diagonal, symmetry, triangle inequality),
//! so a constructed space is always a genuine metric space.

use crate::rational::{rat_abs, Rational};
use num::Zero;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("distance table must be {n}x{n} for {n} points, got row {row} of length {len}")]
    TableShape { n: usize, row: usize, len: usize },
    #[error("d({i},{i}) must be 0")]
    NonzeroDiagonal { i: usize },
    #[error("negative distance d({i},{j})")]
    NegativeDistance { i: usize, j: usize },
    #[error("asymmetric table: d({i},{j}) != d({j},{i})")]
    Asymmetric { i: usize, j: usize },
    #[error("triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})")]
    TriangleViolation { i: usize, j: usize, k: usize },
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("point is not a member of the value space")]
    PointNotInSpace,
}

/// A point of a value space: a rational coordinate on the line, or a label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Real(Rational),
    Label(String),
}

impl Point {
    pub fn real(q: Rational) -> Self {
        Point::Real(q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueSpace {
    /// The rational line with `d(x,y) = |x - y|`.
    RealLine,
    /// A finite metric space over labelled points.
    FinitePoints {
        points: Vec<String>,
        dist: Vec<Vec<Rational>>,
    },
}

impl ValueSpace {
    pub fn finite_points(
        points: Vec<String>,
        dist: Vec<Vec<Rational>>,
    ) -> Result<Self, SpaceError> {
        let n = points.len();
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(SpaceError::DuplicateLabel(p.clone()));
            }
        }
        if dist.len() != n {
            return Err(SpaceError::TableShape {
                n,
                row: dist.len(),
                len: 0,
            });
        }
        for (row, r) in dist.iter().enumerate() {
            if r.len() != n {
                return Err(SpaceError::TableShape {
                    n,
                    row,
                    len: r.len(),
                });
            }
        }
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(SpaceError::NonzeroDiagonal { i });
            }
            for j in 0..n {
                if dist[i][j] < Rational::zero() {
                    return Err(SpaceError::NegativeDistance { i, j });
                }
                if dist[i][j] != dist[j][i] {
                    return Err(SpaceError::Asymmetric { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > &dist[i][j] + &dist[j][k] {
                        return Err(SpaceError::TriangleViolation { i, j, k });
                    }
                }
            }
        }
        Ok(ValueSpace::FinitePoints { points, dist })
    }

    /// Whether `p` is a point of this space.
    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (ValueSpace::RealLine, Point::Real(_)) => true,
            (ValueSpace::FinitePoints { points, .. }, Point::Label(l)) => points.contains(l),
            _ => false,
        }
    }

    /// Exact distance between two points of the space.
    pub fn distance(&self, a: &Point, b: &Point) -> Result<Rational, SpaceError> {
        match (self, a, b) {
            (ValueSpace::RealLine, Point::Real(x), Point::Real(y)) => Ok(rat_abs(&(x - y))),
            (ValueSpace::FinitePoints { points, dist }, Point::Label(x), Point::Label(y)) => {
                let i = points
                    .iter()
                    .position(|p| p == x)
                    .ok_or(SpaceError::PointNotInSpace)?;
                let j = points
                    .iter()
                    .position(|p| p == y)
                    .ok_or(SpaceError::PointNotInSpace)?;
                Ok(dist[i][j].clone())
            }
            _ => Err(SpaceError::PointNotInSpace),
        }
    }

    /// Ordering key used for canonical atom sorting: numeric on the line,
    /// table order for labelled points.
    pub fn point_rank(&self, p: &Point) -> Option<usize> {
        match (self, p) {
            (ValueSpace::FinitePoints { points, .. }, Point::Label(l)) => {
                points.iter().position(|q| q == l)
            }
            _ => None,
        }
    }
}
