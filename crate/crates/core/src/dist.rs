//! Finitely supported probability laws with exact rational masses.
//!
//! A [`FiniteDist`] is the universal carrier: marginal laws, targets, and the
//! law of the distance `d(X,Y)` are all values of this type. Duplicate atoms
//! are merged at construction and atoms are kept sorted, so equality of laws
//! is plain structural equality.

use crate::rational::{format_rational, parse_rational, Rational};
use crate::space::{Point, SpaceError, ValueSpace};
use num::{One, Zero};
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DistError {
    #[error("negative mass {mass} at an atom", mass = crate::rational::format_rational(.0))]
    NegativeMass(Rational),
    #[error("total mass is {got}, short of 1 by {deficit}",
        got = crate::rational::format_rational(.got),
        deficit = crate::rational::format_rational(.deficit))]
    MassNotOne { got: Rational, deficit: Rational },
    #[error("atom value is not a point of the value space")]
    PointNotInSpace,
    #[error("operands live on different value spaces")]
    SpaceMismatch,
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("malformed law JSON: {0}")]
    Json(String),
}

/// A finitely supported law: distinct atoms with positive rational masses
/// summing to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDist {
    space: ValueSpace,
    atoms: Vec<(Point, Rational)>,
}

/// Sorts points canonically: numerically on the line, by table order on a
/// finite space.
fn point_cmp(space: &ValueSpace, a: &Point, b: &Point) -> Ordering {
    match (space.point_rank(a), space.point_rank(b)) {
        (Some(i), Some(j)) => i.cmp(&j),
        _ => a.cmp(b),
    }
}

impl FiniteDist {
    /// Builds a law from raw atoms. Duplicates are merged, zero-mass atoms
    /// dropped, and the result is validated: masses nonnegative and summing
    /// to exactly one.
    pub fn new(space: ValueSpace, atoms: Vec<(Point, Rational)>) -> Result<Self, DistError> {
        let mut merged: Vec<(Point, Rational)> = Vec::new();
        for (p, mass) in atoms {
            if !space.contains(&p) {
                return Err(DistError::PointNotInSpace);
            }
            if mass < Rational::zero() {
                return Err(DistError::NegativeMass(mass));
            }
            match merged.iter_mut().find(|(q, _)| *q == p) {
                Some((_, m)) => *m += mass,
                None => merged.push((p, mass)),
            }
        }
        let total: Rational = merged.iter().map(|(_, m)| m.clone()).sum();
        if !total.is_one() {
            let deficit = Rational::one() - &total;
            return Err(DistError::MassNotOne {
                got: total,
                deficit,
            });
        }
        merged.retain(|(_, m)| !m.is_zero());
        merged.sort_by(|(a, _), (b, _)| point_cmp(&space, a, b));
        Ok(FiniteDist {
            space,
            atoms: merged,
        })
    }

    /// Law on the rational line from `(value, mass)` pairs.
    pub fn on_line(atoms: Vec<(Rational, Rational)>) -> Result<Self, DistError> {
        FiniteDist::new(
            ValueSpace::RealLine,
            atoms.into_iter().map(|(v, m)| (Point::Real(v), m)).collect(),
        )
    }

    /// One-point law at `value` on the rational line.
    pub fn degenerate(value: Rational) -> Self {
        FiniteDist::on_line(vec![(value, Rational::one())]).expect("one-point law")
    }

    /// Two-point law `{0 -> 1-p, 1 -> p}`.
    pub fn bernoulli(p: Rational) -> Result<Self, DistError> {
        FiniteDist::on_line(vec![
            (Rational::zero(), Rational::one() - &p),
            (Rational::one(), p),
        ])
    }

    pub fn space(&self) -> &ValueSpace {
        &self.space
    }

    pub fn atoms(&self) -> &[(Point, Rational)] {
        &self.atoms
    }

    /// Mass of a single point (zero when not an atom).
    pub fn mass_at(&self, p: &Point) -> Rational {
        self.atoms
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// `P(X = 0)` for a law on the line; used for the identity axiom of the
    /// Ky Fan metric.
    pub fn mass_at_zero(&self) -> Rational {
        self.mass_at(&Point::Real(Rational::zero()))
    }

    /// Tail probability `P(X > t)` for a law on the line.
    pub fn tail_above(&self, t: &Rational) -> Rational {
        self.atoms
            .iter()
            .filter_map(|(p, m)| match p {
                Point::Real(v) if v > t => Some(m.clone()),
                _ => None,
            })
            .sum()
    }

    /// Canonical JSON form: `{"space": ..., "atoms": [[value, "p/q"], ...]}`
    /// with atoms sorted by value and rationals rendered as strings.
    pub fn to_json(&self) -> serde_json::Value {
        let space = match &self.space {
            ValueSpace::RealLine => serde_json::json!("real"),
            ValueSpace::FinitePoints { points, dist } => serde_json::json!({
                "points": points,
                "dist": dist
                    .iter()
                    .map(|row| row.iter().map(format_rational).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            }),
        };
        let atoms: Vec<serde_json::Value> = self
            .atoms
            .iter()
            .map(|(p, m)| {
                let v = match p {
                    Point::Real(q) => serde_json::json!(format_rational(q)),
                    Point::Label(l) => serde_json::json!(l),
                };
                serde_json::json!([v, format_rational(m)])
            })
            .collect();
        serde_json::json!({ "space": space, "atoms": atoms })
    }

    /// Parses the canonical JSON form produced by [`FiniteDist::to_json`].
    pub fn from_json(v: &serde_json::Value) -> Result<Self, DistError> {
        let obj = v
            .as_object()
            .ok_or_else(|| DistError::Json("expected an object".into()))?;
        let space_v = obj
            .get("space")
            .ok_or_else(|| DistError::Json("missing \"space\"".into()))?;
        let space = if space_v == "real" {
            ValueSpace::RealLine
        } else {
            let so = space_v
                .as_object()
                .ok_or_else(|| DistError::Json("space must be \"real\" or an object".into()))?;
            let points: Vec<String> = so
                .get("points")
                .and_then(|p| p.as_array())
                .ok_or_else(|| DistError::Json("missing space.points".into()))?
                .iter()
                .map(|p| {
                    p.as_str()
                        .map(String::from)
                        .ok_or_else(|| DistError::Json("point labels must be strings".into()))
                })
                .collect::<Result<_, _>>()?;
            let dist: Vec<Vec<Rational>> = so
                .get("dist")
                .and_then(|d| d.as_array())
                .ok_or_else(|| DistError::Json("missing space.dist".into()))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| DistError::Json("dist rows must be arrays".into()))?
                        .iter()
                        .map(parse_json_rational)
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<_, _>>()?;
            ValueSpace::finite_points(points, dist)?
        };
        let atoms = obj
            .get("atoms")
            .and_then(|a| a.as_array())
            .ok_or_else(|| DistError::Json("missing \"atoms\"".into()))?
            .iter()
            .map(|pair| {
                let pair = pair
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| DistError::Json("atoms must be [value, mass] pairs".into()))?;
                let point = match (&space, &pair[0]) {
                    (ValueSpace::RealLine, v) => Point::Real(parse_json_rational(v)?),
                    (ValueSpace::FinitePoints { .. }, serde_json::Value::String(l)) => {
                        Point::Label(l.clone())
                    }
                    _ => return Err(DistError::Json("bad atom value".into())),
                };
                let mass = parse_json_rational(&pair[1])?;
                Ok((point, mass))
            })
            .collect::<Result<Vec<_>, DistError>>()?;
        FiniteDist::new(space, atoms)
    }
}

fn parse_json_rational(v: &serde_json::Value) -> Result<Rational, DistError> {
    match v {
        serde_json::Value::String(s) => {
            parse_rational(s).map_err(|e| DistError::Json(e.to_string()))
        }
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(crate::rational::rat_int)
            .ok_or_else(|| DistError::Json(format!("non-integer numeric literal {n}"))),
        _ => Err(DistError::Json("expected a rational literal".into())),
    }
}
