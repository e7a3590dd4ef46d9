//! Recursive-descent parser producing validated documents or diagnostics
//! with source positions.

use crate::doc::{CouplingDecl, Query, SpecDocument, TargetDecl};
use crate::lexer::{lex, Span, Spanned, Tok};
use crate::printer::decay_to_string;
use num::bigint::BigInt;
use num::{One, Zero};
use roughlab_core::index::{Ideal, IndexSet, SubmeasureSpec, WeightKind};
use roughlab_core::rational::Rational;
use roughlab_core::seq::{
    Decay, FamilyModel, PieceModel, PiecewiseSequence, ProbFn, ValueFn,
};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    Syntax {
        line: u32,
        col: u32,
        expected: Vec<String>,
        found: String,
    },
    Semantic {
        line: u32,
        col: u32,
        message: String,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Syntax {
                line,
                col,
                expected,
                found,
            } => write!(
                f,
                "syntax error at line {line}, column {col}: expected {}, found {found}",
                expected.join(" or ")
            ),
            Diagnostic::Semantic { line, col, message } => {
                write!(f, "semantic error at line {line}, column {col}: {message}")
            }
        }
    }
}

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn span(&self) -> Span {
        self.peek().span
    }

    fn advance(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, expected: &[&str]) -> PResult<T> {
        let s = self.peek();
        Err(Diagnostic::Syntax {
            line: s.span.line,
            col: s.span.col,
            expected: expected.iter().map(|e| e.to_string()).collect(),
            found: s.tok.to_string(),
        })
    }

    fn semantic<T>(&self, message: String) -> PResult<T> {
        let s = self.peek();
        Err(Diagnostic::Semantic {
            line: s.span.line,
            col: s.span.col,
            message,
        })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.syntax(&[&tok.to_string()])
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if let Tok::Ident(s) = &self.peek().tok {
            if s == kw {
                self.advance();
                return true;
            }
        }
        false
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.syntax(&[kw])
        }
    }

    fn parse_u64(&mut self) -> PResult<u64> {
        match &self.peek().tok {
            Tok::Int(s) => {
                let v = s.parse::<u64>().map_err(|_| Diagnostic::Semantic {
                    line: self.span().line,
                    col: self.span().col,
                    message: format!("integer {s} out of range"),
                });
                let v = v?;
                self.advance();
                Ok(v)
            }
            _ => self.syntax(&["integer"]),
        }
    }

    fn parse_u32(&mut self) -> PResult<u32> {
        let v = self.parse_u64()?;
        u32::try_from(v).map_err(|_| Diagnostic::Semantic {
            line: self.span().line,
            col: self.span().col,
            message: format!("integer {v} out of range"),
        })
    }

    /// `['-'] INT ['/' INT]`
    fn parse_rational(&mut self) -> PResult<Rational> {
        let negative = self.eat(&Tok::Minus);
        let num = match &self.peek().tok {
            Tok::Int(s) => {
                let n = BigInt::from_str(s).expect("digits");
                self.advance();
                n
            }
            _ => return self.syntax(&["rational literal"]),
        };
        let mut den = BigInt::one();
        // A '/' continues the rational only when followed by digits;
        // otherwise it belongs to a reciprocal term like 1/n.
        if self.peek().tok == Tok::Slash {
            if let Tok::Int(s) = &self.toks[self.pos + 1].tok {
                let d = BigInt::from_str(s).expect("digits");
                if d.is_zero() {
                    return self.semantic("zero denominator".into());
                }
                self.advance();
                self.advance();
                den = d;
            }
        }
        let q = Rational::new(num, den);
        Ok(if negative { -q } else { q })
    }

    /// Rational literal in coefficient position: plain or parenthesized.
    fn parse_coeff(&mut self) -> PResult<Rational> {
        if self.peek().tok == Tok::LParen {
            self.advance();
            let q = self.parse_rational()?;
            self.expect(Tok::RParen)?;
            Ok(q)
        } else {
            self.parse_rational()
        }
    }

    // ---- index sets -------------------------------------------------

    fn parse_indexset(&mut self) -> PResult<IndexSet> {
        let mut left = self.parse_indexset_inter()?;
        while self.eat(&Tok::Pipe) {
            let right = self.parse_indexset_inter()?;
            left = IndexSet::union(left, right);
        }
        Ok(left)
    }

    fn parse_indexset_inter(&mut self) -> PResult<IndexSet> {
        let mut left = self.parse_indexset_unary()?;
        loop {
            if self.eat(&Tok::Amp) {
                let right = self.parse_indexset_unary()?;
                left = IndexSet::intersection(left, right);
            } else if self.eat(&Tok::Backslash) {
                let right = self.parse_indexset_unary()?;
                left = IndexSet::difference(left, right);
            } else {
                break;
            }
        }
        Ok(left)
    }

    fn parse_indexset_unary(&mut self) -> PResult<IndexSet> {
        if self.eat(&Tok::Tilde) {
            let inner = self.parse_indexset_unary()?;
            return Ok(IndexSet::complement(inner));
        }
        if self.eat(&Tok::LParen) {
            let inner = self.parse_indexset()?;
            self.expect(Tok::RParen)?;
            return Ok(inner);
        }
        let name = match &self.peek().tok {
            Tok::Ident(s) => s.clone(),
            _ => return self.syntax(&["index set"]),
        };
        match name.as_str() {
            "full" => {
                self.advance();
                Ok(IndexSet::Full)
            }
            "finite" => {
                self.advance();
                self.expect(Tok::LBrace)?;
                let mut members = Vec::new();
                if self.peek().tok != Tok::RBrace {
                    members.push(self.parse_u64()?);
                    while self.eat(&Tok::Comma) {
                        members.push(self.parse_u64()?);
                    }
                }
                self.expect(Tok::RBrace)?;
                Ok(IndexSet::finite(members))
            }
            "ap" => {
                self.advance();
                self.expect(Tok::LParen)?;
                let stride = self.parse_u64()?;
                self.expect(Tok::Comma)?;
                let offset = self.parse_u64()?;
                self.expect(Tok::RParen)?;
                if stride == 0 {
                    return self.semantic("stride must be positive".into());
                }
                Ok(IndexSet::arith_prog(stride, offset))
            }
            "powers" => {
                self.advance();
                self.expect(Tok::LParen)?;
                let base = self.parse_u64()?;
                let scale = if self.eat(&Tok::Comma) {
                    self.parse_u64()?
                } else {
                    1
                };
                self.expect(Tok::RParen)?;
                if base < 2 || scale == 0 {
                    return self.semantic("powers needs base >= 2 and scale >= 1".into());
                }
                Ok(IndexSet::powers(base, scale))
            }
            "poly" => {
                self.advance();
                self.expect(Tok::LParen)?;
                let scale = self.parse_u64()?;
                self.expect(Tok::Comma)?;
                let degree = self.parse_u32()?;
                self.expect(Tok::RParen)?;
                if degree < 2 || scale == 0 {
                    return self.semantic("poly needs scale >= 1 and degree >= 2".into());
                }
                Ok(IndexSet::poly_image(scale, degree))
            }
            "dyadic" => {
                self.advance();
                self.expect(Tok::LParen)?;
                let v = self.parse_u32()?;
                self.expect(Tok::RParen)?;
                if v > 60 {
                    return self.semantic("dyadic valuation out of range".into());
                }
                Ok(IndexSet::dyadic(v))
            }
            "tail" => {
                self.advance();
                self.expect(Tok::LParen)?;
                self.expect_kw("from")?;
                self.expect(Tok::Eq)?;
                let from = self.parse_u64()?;
                let mut below = Vec::new();
                if self.eat(&Tok::Comma) {
                    self.expect_kw("below")?;
                    self.expect(Tok::Eq)?;
                    below.push(self.parse_u64()?);
                    while self.eat(&Tok::Comma) {
                        below.push(self.parse_u64()?);
                    }
                }
                self.expect(Tok::RParen)?;
                Ok(IndexSet::tail_solution(true, from, below))
            }
            _ => self.syntax(&["full", "finite", "ap", "powers", "poly", "dyadic", "tail"]),
        }
    }

    // ---- value functions --------------------------------------------

    fn parse_valuefn(&mut self) -> PResult<ValueFn> {
        let negative = self.eat(&Tok::Minus);
        let sign = if negative {
            -Rational::one()
        } else {
            Rational::one()
        };
        // Bare n^k
        if self.eat_kw("n") {
            let degree = if self.eat(&Tok::Caret) {
                self.parse_u32()?
            } else {
                1
            };
            return self.value_or_semantic(ValueFn::monomial(sign, degree));
        }
        let coeff = sign * self.parse_coeff()?;
        match &self.peek().tok {
            Tok::Star => {
                self.advance();
                if self.eat_kw("n") {
                    let degree = if self.eat(&Tok::Caret) {
                        self.parse_u32()?
                    } else {
                        1
                    };
                    return self.value_or_semantic(ValueFn::monomial(coeff, degree));
                }
                let base = self.parse_coeff()?;
                self.expect(Tok::Caret)?;
                self.expect_kw("n")?;
                self.value_or_semantic(ValueFn::exponential(coeff, base))
            }
            Tok::Slash => {
                // Reciprocal in n or a family-indexed constant.
                match &self.toks[self.pos + 1].tok {
                    Tok::Ident(id) if id == "n" => {
                        self.advance();
                        self.advance();
                        let degree = if self.eat(&Tok::Caret) {
                            self.parse_u32()?
                        } else {
                            1
                        };
                        self.value_or_semantic(ValueFn::reciprocal_shift(coeff, degree))
                    }
                    Tok::Ident(id) if id == "j" => {
                        self.advance();
                        self.advance();
                        Ok(ValueFn::indexed_const(coeff, 0))
                    }
                    Tok::LParen => {
                        self.advance();
                        self.advance();
                        self.expect_kw("j")?;
                        self.expect(Tok::Plus)?;
                        let shift = self.parse_u64()?;
                        self.expect(Tok::RParen)?;
                        Ok(ValueFn::indexed_const(coeff, shift))
                    }
                    _ => {
                        self.advance();
                        self.syntax(&["n", "j", "(j+s)"])
                    }
                }
            }
            Tok::Caret => {
                self.advance();
                self.expect_kw("n")?;
                self.value_or_semantic(ValueFn::exponential(Rational::one(), coeff))
            }
            _ => Ok(ValueFn::constant(coeff)),
        }
    }

    fn value_or_semantic(
        &self,
        v: Result<ValueFn, roughlab_core::seq::ValueFnError>,
    ) -> PResult<ValueFn> {
        match v {
            Ok(v) => Ok(v),
            Err(e) => {
                let s = self.peek();
                Err(Diagnostic::Semantic {
                    line: s.span.line,
                    col: s.span.col,
                    message: e.to_string(),
                })
            }
        }
    }

    // ---- probability functions --------------------------------------

    fn parse_probfn_decay(&mut self) -> PResult<Decay> {
        let mut total = Decay::zero();
        let mut negate = self.eat(&Tok::Minus);
        loop {
            let term = self.parse_probfn_term()?;
            total = if negate {
                total.sub(&term)
            } else {
                total.add(&term)
            };
            if self.eat(&Tok::Plus) {
                negate = false;
            } else if self.eat(&Tok::Minus) {
                negate = true;
            } else {
                break;
            }
        }
        Ok(total)
    }

    fn parse_probfn_term(&mut self) -> PResult<Decay> {
        let coeff = self.parse_coeff()?;
        match &self.peek().tok {
            Tok::Slash => {
                // Only a reciprocal in n can follow inside a mass term.
                if matches!(&self.toks[self.pos + 1].tok, Tok::Ident(id) if id == "n") {
                    self.advance();
                    self.advance();
                    let degree = if self.eat(&Tok::Caret) {
                        self.parse_u32()?
                    } else {
                        1
                    };
                    self.decay_or_semantic(Decay::recip(coeff, degree))
                } else {
                    self.advance();
                    self.syntax(&["n"])
                }
            }
            Tok::Caret => {
                self.advance();
                self.expect_kw("n")?;
                self.decay_or_semantic(Decay::geom(Rational::one(), coeff))
            }
            Tok::Star => {
                self.advance();
                let base = self.parse_coeff()?;
                self.expect(Tok::Caret)?;
                self.expect_kw("n")?;
                self.decay_or_semantic(Decay::geom(coeff, base))
            }
            _ => Ok(Decay::constant(coeff)),
        }
    }

    fn decay_or_semantic(
        &self,
        v: Result<Decay, roughlab_core::seq::decay::DecayError>,
    ) -> PResult<Decay> {
        match v {
            Ok(v) => Ok(v),
            Err(e) => {
                let s = self.peek();
                Err(Diagnostic::Semantic {
                    line: s.span.line,
                    col: s.span.col,
                    message: e.to_string(),
                })
            }
        }
    }

    fn parse_probfn(&mut self) -> PResult<ProbFn> {
        let span = self.span();
        let decay = self.parse_probfn_decay()?;
        ProbFn::from_decay(decay).map_err(|e| Diagnostic::Semantic {
            line: span.line,
            col: span.col,
            message: e.to_string(),
        })
    }

    // ---- blocks ------------------------------------------------------

    fn parse_ideal(&mut self) -> PResult<Ideal> {
        if self.eat_kw("fin") {
            return Ok(Ideal::Fin);
        }
        if self.eat_kw("density") {
            return Ok(Ideal::Density);
        }
        if self.eat_kw("summable") {
            return Ok(Ideal::Summable);
        }
        if self.eat_kw("exh") {
            self.expect(Tok::LParen)?;
            self.expect_kw("weights")?;
            self.expect(Tok::Eq)?;
            let weights = if self.eat_kw("recip") {
                if self.eat(&Tok::Caret) {
                    let k = self.parse_u32()?;
                    WeightKind::ReciprocalPow(k)
                } else {
                    WeightKind::Reciprocal
                }
            } else if self.eat_kw("geom") {
                self.expect(Tok::LParen)?;
                let p = self.parse_rational()?;
                self.expect(Tok::RParen)?;
                if p <= Rational::zero() || p >= Rational::one() {
                    return self.semantic("geometric weight base must lie in (0,1)".into());
                }
                WeightKind::Geometric(p)
            } else {
                return self.syntax(&["recip", "geom"]);
            };
            self.expect(Tok::Comma)?;
            self.expect_kw("depth")?;
            self.expect(Tok::Eq)?;
            let depth = self.parse_u64()?;
            self.expect(Tok::Comma)?;
            self.expect_kw("tol")?;
            self.expect(Tok::Eq)?;
            let tol = self.parse_rational()?;
            self.expect(Tok::RParen)?;
            if depth == 0 {
                return self.semantic("truncation depth must be positive".into());
            }
            if tol <= Rational::zero() {
                return self.semantic("tolerance must be positive".into());
            }
            return Ok(Ideal::exh(SubmeasureSpec::WeightedSum(weights), depth, tol));
        }
        self.syntax(&["fin", "density", "summable", "exh"])
    }

    fn parse_atoms(&mut self) -> PResult<Vec<(ValueFn, ProbFn)>> {
        let mut atoms = Vec::new();
        while self.eat_kw("atom") {
            self.expect_kw("value")?;
            let value = self.parse_valuefn()?;
            self.expect_kw("prob")?;
            let prob = self.parse_probfn()?;
            atoms.push((value, prob));
        }
        if atoms.is_empty() {
            return self.syntax(&["atom"]);
        }
        Ok(atoms)
    }

    fn check_piece_mass(&self, atoms: &[(ValueFn, ProbFn)], span: Span) -> PResult<()> {
        let total = atoms
            .iter()
            .fold(Decay::zero(), |acc, (_, p)| acc.add(p.decay()));
        if total != Decay::constant(Rational::one()) {
            return Err(Diagnostic::Semantic {
                line: span.line,
                col: span.col,
                message: format!("mass {} != 1", decay_to_string(&total)),
            });
        }
        Ok(())
    }

    fn parse_sequence(&mut self) -> PResult<PiecewiseSequence> {
        self.expect(Tok::LBrace)?;
        let mut pieces = Vec::new();
        let mut family: Option<FamilyModel> = None;
        loop {
            if self.eat_kw("piece") {
                let span = self.span();
                let set = self.parse_indexset()?;
                self.expect(Tok::LBrace)?;
                let atoms = self.parse_atoms()?;
                self.expect(Tok::RBrace)?;
                self.check_piece_mass(&atoms, span)?;
                pieces.push(PieceModel { set, atoms });
            } else if self.eat_kw("family") {
                let span = self.span();
                if family.is_some() {
                    return self.semantic("at most one family block is allowed".into());
                }
                self.expect_kw("dyadic")?;
                self.expect(Tok::LParen)?;
                self.expect_kw("j")?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::LBrace)?;
                let atoms = self.parse_atoms()?;
                self.expect(Tok::RBrace)?;
                self.check_piece_mass(&atoms, span)?;
                family = Some(FamilyModel { atoms });
            } else {
                break;
            }
        }
        self.expect(Tok::RBrace)?;
        let span = self.span();
        PiecewiseSequence::new(pieces, family).map_err(|e| Diagnostic::Semantic {
            line: span.line,
            col: span.col,
            message: e.to_string(),
        })
    }

    fn parse_target_atoms(&mut self) -> PResult<Vec<(Rational, Rational)>> {
        let span = self.span();
        self.expect(Tok::LBrace)?;
        let mut atoms: Vec<(Rational, Rational)> = Vec::new();
        while self.eat_kw("atom") {
            let value = self.parse_rational()?;
            self.expect(Tok::Colon)?;
            let mass = self.parse_rational()?;
            if atoms.iter().any(|(v, _)| *v == value) {
                return Err(Diagnostic::Semantic {
                    line: span.line,
                    col: span.col,
                    message: format!(
                        "duplicate atom value {}",
                        roughlab_core::rational::format_rational(&value)
                    ),
                });
            }
            atoms.push((value, mass));
        }
        self.expect(Tok::RBrace)?;
        if atoms.is_empty() {
            return self.syntax(&["atom"]);
        }
        // Exact mass-one validation with the deficit reported.
        let total: Rational = atoms.iter().map(|(_, m)| m.clone()).sum();
        if !total.is_one() {
            return Err(Diagnostic::Semantic {
                line: span.line,
                col: span.col,
                message: format!(
                    "mass {} != 1",
                    roughlab_core::rational::format_rational(&total)
                ),
            });
        }
        // Canonical order: atoms sorted by value. Joint-coupling cells refer
        // to these positions, so the sort happens before any cell is read.
        atoms.sort_by(|(a, _), (b, _)| a.cmp(b));
        Ok(atoms)
    }

    fn parse_target(&mut self) -> PResult<TargetDecl> {
        let atoms = self.parse_target_atoms()?;
        self.expect_kw("coupling")?;
        let coupling = if self.eat_kw("independent") {
            CouplingDecl::Independent
        } else if self.eat_kw("joint") {
            self.expect(Tok::LBrace)?;
            let mut cells = Vec::new();
            while matches!(&self.peek().tok, Tok::Int(_)) {
                let i = self.parse_u64()? as usize;
                let j = self.parse_u64()? as usize;
                self.expect(Tok::Colon)?;
                let mass = self.parse_probfn()?;
                cells.push((i, j, mass));
            }
            self.expect(Tok::RBrace)?;
            if cells.is_empty() {
                return self.syntax(&["joint cell"]);
            }
            CouplingDecl::Joint(cells)
        } else {
            return self.syntax(&["independent", "joint"]);
        };
        Ok(TargetDecl { atoms, coupling })
    }

    fn parse_query(&mut self) -> PResult<Query> {
        if self.eat_kw("metric") {
            self.expect_kw("n")?;
            self.expect(Tok::Eq)?;
            let n = self.parse_u64()?;
            if n == 0 {
                return self.semantic("index must be at least 1".into());
            }
            return Ok(Query::Metric { n });
        }
        if self.eat_kw("limit") {
            let r = self.parse_r()?;
            let mut eps = None;
            let mut delta = None;
            if self.eat_kw("eps") {
                self.expect(Tok::Eq)?;
                let e = self.parse_rational()?;
                if e <= Rational::zero() {
                    return self.semantic("eps must be positive".into());
                }
                eps = Some(e);
            }
            if self.eat_kw("delta") {
                self.expect(Tok::Eq)?;
                let d = self.parse_rational()?;
                if d <= Rational::zero() {
                    return self.semantic("delta must be positive".into());
                }
                delta = Some(d);
            }
            return Ok(Query::Limit { r, eps, delta });
        }
        if self.eat_kw("cluster") {
            let r = self.parse_r()?;
            return Ok(Query::Cluster { r });
        }
        if self.eat_kw("diameter") {
            let r = self.parse_r()?;
            self.expect_kw("members")?;
            self.expect(Tok::LBrace)?;
            let mut members = vec![self.parse_rational()?];
            while self.eat(&Tok::Comma) {
                members.push(self.parse_rational()?);
            }
            self.expect(Tok::RBrace)?;
            return Ok(Query::Diameter { r, members });
        }
        if self.eat_kw("sandwich") {
            let r = self.parse_r()?;
            self.expect(Tok::LBrace)?;
            let mut candidates = Vec::new();
            while self.eat_kw("candidate") {
                candidates.push(self.parse_target_atoms()?);
            }
            self.expect(Tok::RBrace)?;
            if candidates.is_empty() {
                return self.syntax(&["candidate"]);
            }
            return Ok(Query::Sandwich { r, candidates });
        }
        self.syntax(&["metric", "limit", "cluster", "diameter", "sandwich"])
    }

    fn parse_r(&mut self) -> PResult<Rational> {
        self.expect_kw("r")?;
        self.expect(Tok::Eq)?;
        let r = self.parse_rational()?;
        if r < Rational::zero() {
            return self.semantic("roughness must be nonnegative".into());
        }
        Ok(r)
    }

    fn parse_document(&mut self) -> PResult<SpecDocument> {
        let mut ideal: Option<Ideal> = None;
        let mut sequence: Option<PiecewiseSequence> = None;
        let mut target: Option<TargetDecl> = None;
        let mut queries = Vec::new();
        loop {
            if self.eat_kw("ideal") {
                if ideal.is_some() {
                    return self.semantic("duplicate ideal declaration".into());
                }
                ideal = Some(self.parse_ideal()?);
            } else if self.eat_kw("sequence") {
                if sequence.is_some() {
                    return self.semantic("duplicate sequence declaration".into());
                }
                sequence = Some(self.parse_sequence()?);
            } else if self.eat_kw("target") {
                if target.is_some() {
                    return self.semantic("duplicate target declaration".into());
                }
                target = Some(self.parse_target()?);
            } else if self.eat_kw("query") {
                queries.push(self.parse_query()?);
            } else if self.peek().tok == Tok::Eof {
                break;
            } else {
                return self.syntax(&["ideal", "sequence", "target", "query"]);
            }
        }
        let Some(ideal) = ideal else {
            return self.semantic("missing ideal declaration".into());
        };
        let Some(sequence) = sequence else {
            return self.semantic("missing sequence declaration".into());
        };
        if target.is_none() && !queries.is_empty() {
            return self.semantic("queries require a target declaration".into());
        }
        let doc = SpecDocument {
            ideal,
            sequence,
            target,
            queries,
        };
        self.validate(&doc)?;
        Ok(doc)
    }

    /// Cross-cutting semantic checks: the declared coupling must match the
    /// sequence shape and targets must materialize.
    fn validate(&self, doc: &SpecDocument) -> PResult<()> {
        if let Some(target) = &doc.target {
            let t = match target.to_target() {
                Ok(t) => t,
                Err(e) => return self.semantic(e.to_string()),
            };
            if let Err(e) = roughlab_core::analysis::validate_target(&doc.sequence, &t) {
                return self.semantic(e.to_string());
            }
        }
        for query in &doc.queries {
            if let Query::Sandwich { candidates, .. } = query {
                for atoms in candidates {
                    if let Err(e) = roughlab_core::dist::FiniteDist::on_line(atoms.clone()) {
                        return self.semantic(e.to_string());
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses a specification document, returning diagnostics on failure.
pub fn parse(input: &str) -> Result<SpecDocument, Vec<Diagnostic>> {
    let mut parser = make_parser(input)?;
    parser.parse_document().map_err(|d| vec![d])
}

/// Parses a standalone index-set expression (`ap(4,1) | powers(2)` ...).
pub fn parse_index_set(input: &str) -> Result<IndexSet, Vec<Diagnostic>> {
    let mut parser = make_parser(input)?;
    let set = parser.parse_indexset().map_err(|d| vec![d])?;
    if parser.peek().tok != Tok::Eof {
        return parser.syntax(&["end of input"]).map_err(|d| vec![d]);
    }
    Ok(set)
}

fn make_parser(input: &str) -> Result<Parser, Vec<Diagnostic>> {
    let toks = match lex(input) {
        Ok(t) => t,
        Err(e) => {
            return Err(vec![Diagnostic::Syntax {
                line: e.line,
                col: e.col,
                expected: vec!["token".into()],
                found: format!("{:?}", e.ch),
            }])
        }
    };
    Ok(Parser { toks, pos: 0 })
}
