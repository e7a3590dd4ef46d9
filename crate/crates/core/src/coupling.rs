//! Couplings of two laws and the induced law of the distance.
//!
//! A coupling is always stated explicitly: either the product of the two
//! marginals or a full joint table whose marginals are validated against the
//! declared laws. Nothing in the analysis layer ever invents a joint.

use crate::dist::{DistError, FiniteDist};
use crate::rational::Rational;
use crate::space::Point;
use num::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
enum CouplingKind {
    Independent,
    ExplicitJoint { table: Vec<(Point, Point, Rational)> },
}

/// A joint law for a pair `(X, Y)` with declared marginals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coupling {
    x: FiniteDist,
    y: FiniteDist,
    kind: CouplingKind,
}

impl Coupling {
    /// Product coupling: `P(x, y) = P_X(x) * P_Y(y)`. Errors when the
    /// marginals live on different spaces.
    pub fn product(x: &FiniteDist, y: &FiniteDist) -> Result<Self, DistError> {
        if x.space() != y.space() {
            return Err(DistError::SpaceMismatch);
        }
        Ok(Coupling {
            x: x.clone(),
            y: y.clone(),
            kind: CouplingKind::Independent,
        })
    }

    /// Explicit joint table; the row and column sums must reproduce the
    /// declared marginals exactly.
    pub fn explicit_joint(
        x: &FiniteDist,
        y: &FiniteDist,
        table: Vec<(Point, Point, Rational)>,
    ) -> Result<Self, DistError> {
        if x.space() != y.space() {
            return Err(DistError::SpaceMismatch);
        }
        for (_, _, m) in &table {
            if *m < Rational::zero() {
                return Err(DistError::NegativeMass(m.clone()));
            }
        }
        for (v, want) in x.atoms() {
            let got: Rational = table
                .iter()
                .filter(|(a, _, _)| a == v)
                .map(|(_, _, m)| m.clone())
                .sum();
            if got != *want {
                let deficit = want - &got;
                return Err(DistError::MassNotOne { got, deficit });
            }
        }
        for (v, want) in y.atoms() {
            let got: Rational = table
                .iter()
                .filter(|(_, b, _)| b == v)
                .map(|(_, _, m)| m.clone())
                .sum();
            if got != *want {
                let deficit = want - &got;
                return Err(DistError::MassNotOne { got, deficit });
            }
        }
        // Rows over undeclared atoms would break total mass = 1.
        let total: Rational = table.iter().map(|(_, _, m)| m.clone()).sum();
        if !num::One::is_one(&total) {
            let deficit = Rational::from_integer(1.into()) - &total;
            return Err(DistError::MassNotOne { got: total, deficit });
        }
        Ok(Coupling {
            x: x.clone(),
            y: y.clone(),
            kind: CouplingKind::ExplicitJoint { table },
        })
    }

    /// The diagonal coupling of a law with itself: `P(v, v) = P_X(v)`.
    pub fn diagonal(x: &FiniteDist) -> Self {
        let table = x
            .atoms()
            .iter()
            .map(|(p, m)| (p.clone(), p.clone(), m.clone()))
            .collect();
        Coupling {
            x: x.clone(),
            y: x.clone(),
            kind: CouplingKind::ExplicitJoint { table },
        }
    }

    /// Swaps the roles of `X` and `Y`.
    pub fn transpose(&self) -> Self {
        Coupling {
            x: self.y.clone(),
            y: self.x.clone(),
            kind: match &self.kind {
                CouplingKind::Independent => CouplingKind::Independent,
                CouplingKind::ExplicitJoint { table } => CouplingKind::ExplicitJoint {
                    table: table
                        .iter()
                        .map(|(a, b, m)| (b.clone(), a.clone(), m.clone()))
                        .collect(),
                },
            },
        }
    }

    pub fn x(&self) -> &FiniteDist {
        &self.x
    }

    pub fn y(&self) -> &FiniteDist {
        &self.y
    }

    /// All pairs `(x, y, mass)` of the joint, materialized.
    pub fn pairs(&self) -> Vec<(Point, Point, Rational)> {
        match &self.kind {
            CouplingKind::Independent => {
                let mut out = Vec::new();
                for (a, ma) in self.x.atoms() {
                    for (b, mb) in self.y.atoms() {
                        out.push((a.clone(), b.clone(), ma * mb));
                    }
                }
                out
            }
            CouplingKind::ExplicitJoint { table } => table.clone(),
        }
    }

    /// Pushes the joint forward through the metric: the law of `d(X, Y)` on
    /// the nonnegative rational line.
    pub fn distance_law(&self) -> Result<FiniteDist, DistError> {
        let space = self.x.space().clone();
        let mut atoms: Vec<(Rational, Rational)> = Vec::new();
        for (a, b, m) in self.pairs() {
            if m.is_zero() {
                continue;
            }
            let d = space.distance(&a, &b)?;
            match atoms.iter_mut().find(|(v, _)| *v == d) {
                Some((_, acc)) => *acc += m,
                None => atoms.push((d, m)),
            }
        }
        FiniteDist::on_line(atoms)
    }
}

/// Product coupling of two laws on a common space.
pub fn product_coupling(x: &FiniteDist, y: &FiniteDist) -> Result<Coupling, DistError> {
    Coupling::product(x, y)
}

/// The law of `d(X, Y)` under a coupling.
pub fn distance_law(c: &Coupling) -> Result<FiniteDist, DistError> {
    c.distance_law()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn product_of_bernoullis_has_four_quarter_cells() {
        let b = FiniteDist::bernoulli(rat(1, 2)).unwrap();
        let c = Coupling::product(&b, &b).unwrap();
        let pairs = c.pairs();
        assert_eq!(pairs.len(), 4);
        assert!(pairs.iter().all(|(_, _, m)| *m == rat(1, 4)));
    }

    #[test]
    fn degenerate_factor_reproduces_other_marginal() {
        let a = FiniteDist::degenerate(rat_int(7));
        let y = FiniteDist::on_line(vec![
            (rat_int(0), rat(1, 3)),
            (rat_int(1), rat(1, 3)),
            (rat_int(2), rat(1, 3)),
        ])
        .unwrap();
        let c = Coupling::product(&a, &y).unwrap();
        let pairs = c.pairs();
        assert_eq!(pairs.len(), 3);
        for (x, _, m) in pairs {
            assert_eq!(x, Point::real(rat_int(7)));
            assert_eq!(m, rat(1, 3));
        }
    }

    #[test]
    fn three_by_two_product_measure() {
        let x = FiniteDist::on_line(vec![
            (rat_int(0), rat(1, 3)),
            (rat_int(1), rat(1, 3)),
            (rat_int(2), rat(1, 3)),
        ])
        .unwrap();
        let y = FiniteDist::bernoulli(rat(1, 2)).unwrap();
        let c = Coupling::product(&x, &y).unwrap();
        assert!(c.pairs().iter().all(|(_, _, m)| *m == rat(1, 6)));
        assert_eq!(c.pairs().len(), 6);
    }

    #[test]
    fn distance_law_of_opposite_degenerates() {
        let r = rat(1, 4);
        let x = FiniteDist::degenerate(r.clone());
        let y = FiniteDist::degenerate(-r.clone());
        let d = Coupling::product(&x, &y).unwrap().distance_law().unwrap();
        assert_eq!(d, FiniteDist::degenerate(rat(1, 2)));
    }

    #[test]
    fn distance_law_eventually_three_quarters_above_threshold() {
        // Fair two-point law on {0, 2^n} against the fair {0, 2} target: the
        // mass beyond 1 + eps is exactly 3/4 once 2^n - 2 clears the bar.
        let n = 10u64;
        let big = crate::rational::rat_pow(&rat_int(2), n);
        let x = FiniteDist::on_line(vec![(rat_int(0), rat(1, 2)), (big, rat(1, 2))]).unwrap();
        let z = FiniteDist::on_line(vec![(rat_int(0), rat(1, 2)), (rat_int(2), rat(1, 2))]).unwrap();
        let d = Coupling::product(&x, &z).unwrap().distance_law().unwrap();
        assert_eq!(d.tail_above(&rat(3, 2)), rat(3, 4));
    }

    #[test]
    fn diagonal_coupling_gives_zero_distance() {
        let x = FiniteDist::on_line(vec![(rat_int(0), rat(1, 2)), (rat(5, 3), rat(1, 2))]).unwrap();
        let d = Coupling::diagonal(&x).distance_law().unwrap();
        assert_eq!(d, FiniteDist::degenerate(rat_int(0)));
    }

    #[test]
    fn explicit_joint_validates_marginals() {
        let x = FiniteDist::bernoulli(rat(1, 2)).unwrap();
        let y = FiniteDist::bernoulli(rat(1, 2)).unwrap();
        let ok = Coupling::explicit_joint(
            &x,
            &y,
            vec![
                (Point::real(rat_int(0)), Point::real(rat_int(0)), rat(1, 2)),
                (Point::real(rat_int(1)), Point::real(rat_int(1)), rat(1, 2)),
            ],
        );
        assert!(ok.is_ok());
        let bad = Coupling::explicit_joint(
            &x,
            &y,
            vec![
                (Point::real(rat_int(0)), Point::real(rat_int(0)), rat(3, 4)),
                (Point::real(rat_int(1)), Point::real(rat_int(1)), rat(1, 4)),
            ],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn space_mismatch_detected() {
        let x = FiniteDist::degenerate(rat_int(0));
        let space = crate::space::ValueSpace::finite_points(
            vec!["a".into()],
            vec![vec![rat_int(0)]],
        )
        .unwrap();
        let y = FiniteDist::new(space, vec![(Point::Label("a".into()), rat_int(1))]).unwrap();
        assert!(matches!(
            Coupling::product(&x, &y),
            Err(DistError::SpaceMismatch)
        ));
    }
}
