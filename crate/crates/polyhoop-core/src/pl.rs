//! Compilation of terms into exact piecewise-linear function complexes over
//! the unit cube, and the polyhedral operations on them: evaluation,
//! one-sets, constant-one tests, and images of polyhedra under function
//! tuples.
//!
//! A compiled function is a finite set of full-dimensional convex cells
//! covering `[0,1]^n` with pairwise disjoint interiors; each cell carries an
//! integer affine piece. Operations build the common refinement of the
//! operand complexes and cut cells along the hyperplane where the operation
//! clamps (at 0 for fuse, at 1 for implication and sum, at equality for
//! lattice operations), so clamping is realized by cell geometry and never
//! per point.

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{Int, LinearEq, Point, Rat};
use crate::geom::{restrict_halfspace, Polyhedron, Polytope, Sense};
use crate::terms::{Mode, Term};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlError {
    #[error("arity mismatch: term uses x{var} but ambient dimension is {dim}")]
    Arity { var: usize, dim: usize },
    #[error("ambient dimension must be at least 1")]
    ZeroDim,
    #[error("point has dimension {got}, function has dimension {expected}")]
    PointDim { expected: usize, got: usize },
    #[error("point outside the unit cube: {0}")]
    OutsideCube(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

/// Integer affine map `x -> a . x + b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffinePiece {
    pub a: Vec<Int>,
    pub b: Int,
}

impl AffinePiece {
    pub fn constant(n: usize, b: i64) -> AffinePiece {
        AffinePiece { a: vec![Int::zero(); n], b: Int::from(b) }
    }

    pub fn coordinate(n: usize, i: usize) -> AffinePiece {
        let mut a = vec![Int::zero(); n];
        a[i] = Int::one();
        AffinePiece { a, b: Int::zero() }
    }

    pub fn eval(&self, p: &[Rat]) -> Rat {
        let mut acc = Rat::from_integer(self.b.clone());
        for (c, x) in self.a.iter().zip(p) {
            acc += Rat::from_integer(c.clone()) * x;
        }
        acc
    }

    fn add(&self, other: &AffinePiece, shift: i64) -> AffinePiece {
        AffinePiece {
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
            b: &self.b + &other.b + Int::from(shift),
        }
    }

    fn sub(&self, other: &AffinePiece) -> AffinePiece {
        AffinePiece {
            a: self.a.iter().zip(&other.a).map(|(x, y)| x - y).collect(),
            b: &self.b - &other.b,
        }
    }

    fn neg(&self) -> AffinePiece {
        AffinePiece { a: self.a.iter().map(|x| -x.clone()).collect(), b: Int::one() - &self.b }
    }

    /// The hyperplane `a . x + b = at`.
    fn level(&self, at: i64) -> LinearEq {
        LinearEq { coeffs: self.a.clone(), rhs: Int::from(at) - &self.b }
    }
}

/// One convex cell of a compiled function with its affine piece. The
/// half-space description is cached on the polytope.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub poly: Polytope,
    pub piece: AffinePiece,
}

impl Cell {
    pub fn contains(&self, p: &[Rat]) -> bool {
        self.poly.contains(p)
    }
}

/// A McNaughton function on `[0,1]^dim` as a cell complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PLFunction {
    dim: usize,
    cells: Vec<Cell>,
}

impl PLFunction {
    pub fn new(dim: usize, mut cells: Vec<Cell>) -> PLFunction {
        cells.sort_by(|x, y| {
            (x.poly.vertices(), &x.piece.a, &x.piece.b)
                .cmp(&(y.poly.vertices(), &y.piece.a, &y.piece.b))
        });
        PLFunction { dim, cells }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    fn constant(n: usize, b: i64) -> PLFunction {
        PLFunction::new(n, vec![Cell { poly: cube(n), piece: AffinePiece::constant(n, b) }])
    }
}

fn cube(n: usize) -> Polytope {
    let mut verts: Vec<Point> = Vec::with_capacity(1 << n);
    for mask in 0..(1usize << n) {
        verts.push(
            (0..n).map(|i| if mask >> i & 1 == 1 { Rat::one() } else { Rat::zero() }).collect(),
        );
    }
    Polytope::new(verts)
}

#[derive(Clone, Copy)]
enum BinOp {
    Fuse,
    Imp,
    Oplus,
    Meet,
    Join,
}

/// Side assignment after cutting at a threshold.
enum CutSides {
    AllLe,
    AllGe,
    Split,
}

fn classify(poly: &Polytope, h: &LinearEq) -> CutSides {
    let mut pos = false;
    let mut neg = false;
    for v in poly.vertices() {
        let val = h.eval(v);
        if val.is_positive() {
            pos = true;
        } else if val.is_negative() {
            neg = true;
        }
    }
    match (pos, neg) {
        (true, true) => CutSides::Split,
        (true, false) => CutSides::AllGe,
        // all-zero cells count as the le side; the piece choice is
        // value-equal there either way
        _ => CutSides::AllLe,
    }
}

fn combine(f: &PLFunction, g: &PLFunction, op: BinOp) -> PLFunction {
    let n = f.dim;
    let mut cells: Vec<Cell> = Vec::new();
    let mut emit = |poly: Polytope, piece: AffinePiece| {
        debug_assert!(poly
            .vertices()
            .iter()
            .all(|v| !piece.eval(v).is_negative() && piece.eval(v) <= Rat::one()));
        cells.push(Cell { poly, piece });
    };
    for cf in &f.cells {
        for cg in &g.cells {
            let mut inter = Some(cf.poly.clone());
            for facet in &cg.poly.hrepr().facets {
                let h = LinearEq { coeffs: facet.a.clone(), rhs: facet.c.clone() };
                inter = inter.and_then(|p| restrict_halfspace(&p, &h, Sense::Ge));
                if inter.is_none() {
                    break;
                }
            }
            let Some(inter) = inter else { continue };
            if inter.dim() < n {
                continue;
            }
            match op {
                BinOp::Fuse => {
                    let cand = cf.piece.add(&cg.piece, -1);
                    let h = cand.level(0);
                    match classify(&inter, &h) {
                        CutSides::AllGe => emit(inter, cand),
                        CutSides::AllLe => emit(inter, AffinePiece::constant(n, 0)),
                        CutSides::Split => {
                            let le = restrict_halfspace(&inter, &h, Sense::Le).expect("split side");
                            let ge = restrict_halfspace(&inter, &h, Sense::Ge).expect("split side");
                            emit(le, AffinePiece::constant(n, 0));
                            emit(ge, cand);
                        }
                    }
                }
                BinOp::Imp | BinOp::Oplus => {
                    let cand = match op {
                        BinOp::Imp => cg.piece.sub(&cf.piece).add(&AffinePiece::constant(n, 0), 1),
                        _ => cf.piece.add(&cg.piece, 0),
                    };
                    let h = cand.level(1);
                    match classify(&inter, &h) {
                        CutSides::AllGe => emit(inter, AffinePiece::constant(n, 1)),
                        CutSides::AllLe => emit(inter, cand),
                        CutSides::Split => {
                            let le = restrict_halfspace(&inter, &h, Sense::Le).expect("split side");
                            let ge = restrict_halfspace(&inter, &h, Sense::Ge).expect("split side");
                            emit(le, cand);
                            emit(ge, AffinePiece::constant(n, 1));
                        }
                    }
                }
                BinOp::Meet | BinOp::Join => {
                    let diff = cf.piece.sub(&cg.piece);
                    let h = diff.level(0);
                    let (lo, hi) = (cf.piece.clone(), cg.piece.clone());
                    // diff <= 0 side has f <= g
                    let (le_piece, ge_piece) = match op {
                        BinOp::Meet => (lo, hi),
                        _ => (hi, lo),
                    };
                    match classify(&inter, &h) {
                        CutSides::AllLe => emit(inter, le_piece),
                        CutSides::AllGe => emit(inter, ge_piece),
                        CutSides::Split => {
                            let le = restrict_halfspace(&inter, &h, Sense::Le).expect("split side");
                            let ge = restrict_halfspace(&inter, &h, Sense::Ge).expect("split side");
                            emit(le, le_piece);
                            emit(ge, ge_piece);
                        }
                    }
                }
            }
        }
    }
    PLFunction::new(n, cells)
}

/// Compiles a term into its McNaughton function on `[0,1]^n`. Sugar is
/// compiled natively (powers and scales fold their binary operation) so no
/// exponential expansion happens.
pub fn compile(t: &Term, n: usize) -> Result<PLFunction, PlError> {
    if n == 0 {
        return Err(PlError::ZeroDim);
    }
    let mv = t.max_var();
    if mv > n {
        return Err(PlError::Arity { var: mv, dim: n });
    }
    Ok(compile_rec(t, n))
}

fn compile_rec(t: &Term, n: usize) -> PLFunction {
    match t {
        Term::Var(i) => PLFunction::new(
            n,
            vec![Cell { poly: cube(n), piece: AffinePiece::coordinate(n, *i - 1) }],
        ),
        Term::One => PLFunction::constant(n, 1),
        Term::Zero => PLFunction::constant(n, 0),
        Term::Neg(x) => {
            let f = compile_rec(x, n);
            PLFunction::new(
                n,
                f.cells
                    .into_iter()
                    .map(|c| Cell { poly: c.poly, piece: c.piece.neg() })
                    .collect(),
            )
        }
        Term::Fuse(l, r) => combine(&compile_rec(l, n), &compile_rec(r, n), BinOp::Fuse),
        Term::Imp(l, r) => combine(&compile_rec(l, n), &compile_rec(r, n), BinOp::Imp),
        Term::Meet(l, r) => combine(&compile_rec(l, n), &compile_rec(r, n), BinOp::Meet),
        Term::Join(l, r) => combine(&compile_rec(l, n), &compile_rec(r, n), BinOp::Join),
        Term::Oplus(l, r) => combine(&compile_rec(l, n), &compile_rec(r, n), BinOp::Oplus),
        Term::Power(x, k) => {
            let base = compile_rec(x, n);
            let mut acc = base.clone();
            for _ in 1..*k {
                acc = combine(&acc, &base, BinOp::Fuse);
            }
            acc
        }
        Term::Scale(k, x) => {
            let base = compile_rec(x, n);
            let mut acc = base.clone();
            for _ in 1..*k {
                acc = combine(&acc, &base, BinOp::Oplus);
            }
            acc
        }
    }
}

/// Evaluates by cell location; continuity makes the choice of containing
/// cell irrelevant.
pub fn eval_pl(f: &PLFunction, p: &[Rat]) -> Result<Rat, PlError> {
    if p.len() != f.dim {
        return Err(PlError::PointDim { expected: f.dim, got: p.len() });
    }
    for c in p {
        if c.is_negative() || c > &Rat::one() {
            return Err(PlError::OutsideCube(crate::arith::fmt_rat(c)));
        }
    }
    for cell in &f.cells {
        if cell.contains(p) {
            return Ok(cell.piece.eval(p));
        }
    }
    Err(PlError::Internal(format!(
        "cells do not cover point {}",
        crate::arith::fmt_point(p)
    )))
}

/// The one-set `{x : f(x) = 1}` as a canonical polyhedron. Per cell the
/// slice is the face spanned by the vertices where the piece is 1 (the
/// piece never exceeds 1 on its cell, so that face is exactly the slice).
pub fn one_set(f: &PLFunction) -> Polyhedron {
    let mut parts: Vec<Polytope> = Vec::new();
    for cell in &f.cells {
        let ones: Vec<Point> = cell
            .poly
            .vertices()
            .iter()
            .filter(|v| cell.piece.eval(v).is_one())
            .cloned()
            .collect();
        if !ones.is_empty() {
            parts.push(Polytope::new(ones));
        }
    }
    Polyhedron::new(f.dim, parts)
}

/// True iff the function is constantly 1 (all cell vertices evaluate to 1).
pub fn is_constant_one(f: &PLFunction) -> bool {
    f.cells
        .iter()
        .all(|c| c.poly.vertices().iter().all(|v| c.piece.eval(v).is_one()))
}

/// Image of a polyhedron under a tuple of functions on the same cube:
/// refine each polytope against every function's cells, then map each
/// refined piece through the (affine there) tuple and take vertex hulls.
pub fn image(fs: &[PLFunction], p: &Polyhedron) -> Result<Polyhedron, PlError> {
    let n = p.dim();
    for f in fs {
        if f.dim != n {
            return Err(PlError::DimensionMismatch { expected: n, got: f.dim });
        }
    }
    let m = fs.len();
    let mut out: Vec<Polytope> = Vec::new();
    for poly in p.polytopes() {
        // (piece of the domain, affine restriction of each f on it)
        let mut pieces: Vec<(Polytope, Vec<AffinePiece>)> = vec![(poly.clone(), Vec::new())];
        for f in fs {
            let mut next = Vec::new();
            for (part, maps) in &pieces {
                for cell in &f.cells {
                    let mut cur = Some(part.clone());
                    for facet in &cell.poly.hrepr().facets {
                        let h = LinearEq { coeffs: facet.a.clone(), rhs: facet.c.clone() };
                        cur = cur.and_then(|c| restrict_halfspace(&c, &h, Sense::Ge));
                        if cur.is_none() {
                            break;
                        }
                    }
                    if let Some(cur) = cur {
                        let mut maps = maps.clone();
                        maps.push(cell.piece.clone());
                        next.push((cur, maps));
                    }
                }
            }
            pieces = next;
        }
        for (part, maps) in pieces {
            let imgs: Vec<Point> = part
                .vertices()
                .iter()
                .map(|v| maps.iter().map(|pc| pc.eval(v)).collect())
                .collect();
            out.push(Polytope::new(imgs));
        }
    }
    Ok(Polyhedron::new(m, out))
}

/// Compiles in wh mode and checks the defining invariant `f(1) = 1`.
pub fn compile_checked(t: &Term, n: usize, mode: Mode) -> Result<PLFunction, PlError> {
    let f = compile(t, n)?;
    if mode == Mode::Wh {
        let one = vec![Rat::one(); n];
        if !eval_pl(&f, &one)?.is_one() {
            return Err(PlError::Internal("wh-mode function is not 1 at the top".into()));
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::geom::{poly_equal, Polyhedron};
    use crate::terms::{eval_term, parse};

    fn wh(s: &str) -> Term {
        parse(s, Mode::Wh).unwrap()
    }

    fn seg(a: (i64, i64), b: (i64, i64)) -> Polytope {
        Polytope::new(vec![vec![rat(a.0, a.1)], vec![rat(b.0, b.1)]])
    }

    fn point1(a: (i64, i64)) -> Polytope {
        Polytope::new(vec![vec![rat(a.0, a.1)]])
    }

    #[test]
    fn compile_imp_square_term() {
        // x -> x^2 : 1-x on [0,1/2], x on [1/2,1]
        let f = compile(&wh("x -> x^2"), 1).unwrap();
        assert_eq!(f.cells().len(), 2);
        let c0 = &f.cells()[0];
        assert_eq!(c0.poly.vertices(), seg((0, 1), (1, 2)).vertices());
        assert_eq!(c0.piece, AffinePiece { a: vec![Int::from(-1)], b: Int::from(1) });
        let c1 = &f.cells()[1];
        assert_eq!(c1.poly.vertices(), seg((1, 2), (1, 1)).vertices());
        assert_eq!(c1.piece, AffinePiece { a: vec![Int::from(1)], b: Int::from(0) });
    }

    #[test]
    fn compile_one_and_scale() {
        let f = compile(&wh("1"), 2).unwrap();
        assert_eq!(f.cells().len(), 1);
        assert!(is_constant_one(&f));

        let g = compile(&wh("2.x"), 1).unwrap();
        assert_eq!(g.cells().len(), 2);
        assert_eq!(g.cells()[0].piece, AffinePiece { a: vec![Int::from(2)], b: Int::from(0) });
        assert_eq!(g.cells()[1].piece, AffinePiece { a: vec![Int::from(0)], b: Int::from(1) });
    }

    #[test]
    fn eval_pl_examples() {
        let f = compile(&wh("2.x -> x"), 1).unwrap();
        assert_eq!(eval_pl(&f, &[rat(1, 4)]).unwrap(), rat(3, 4));
        assert_eq!(eval_pl(&f, &[rat(1, 2)]).unwrap(), rat(1, 2));
        assert_eq!(eval_pl(&f, &[rat(1, 1)]).unwrap(), rat(1, 1));
        assert!(eval_pl(&f, &[rat(5, 4)]).is_err());
        assert!(eval_pl(&f, &[rat(1, 4), rat(0, 1)]).is_err());
    }

    #[test]
    fn one_sets_from_worked_example() {
        let f = one_set(&compile(&wh("2.x -> x"), 1).unwrap());
        let expected = Polyhedron::new(1, vec![point1((0, 1)), point1((1, 1))]);
        assert_eq!(f, expected);

        let g = one_set(&compile(&wh("2.x"), 1).unwrap());
        let expected = Polyhedron::new(1, vec![seg((1, 2), (1, 1))]);
        assert_eq!(g, expected);

        let h = one_set(&compile(&wh("1"), 2).unwrap());
        assert!(poly_equal(&h, &Polyhedron::cube(2)));
    }

    #[test]
    fn border_term_one_set_is_square_boundary() {
        let t = wh("(((x -> x^2) -> x) -> x) \\/ (((y -> y^2) -> y) -> y)");
        let f = compile(&t, 2).unwrap();
        let os = one_set(&f);
        let edge = |a: [(i64, i64); 2], b: [(i64, i64); 2]| {
            Polytope::new(vec![
                vec![rat(a[0].0, a[0].1), rat(a[1].0, a[1].1)],
                vec![rat(b[0].0, b[0].1), rat(b[1].0, b[1].1)],
            ])
        };
        let boundary = Polyhedron::new(
            2,
            vec![
                edge([(0, 1), (0, 1)], [(1, 1), (0, 1)]),
                edge([(0, 1), (0, 1)], [(0, 1), (1, 1)]),
                edge([(1, 1), (0, 1)], [(1, 1), (1, 1)]),
                edge([(0, 1), (1, 1)], [(1, 1), (1, 1)]),
            ],
        );
        assert!(poly_equal(&os, &boundary));
    }

    #[test]
    fn constant_one_detects_validity() {
        let pre = wh("(x -> y) \\/ (y -> x)");
        assert!(is_constant_one(&compile(&pre, 2).unwrap()));
        assert!(!is_constant_one(&compile(&wh("2.x -> x"), 1).unwrap()));
    }

    #[test]
    fn image_of_interval_family() {
        for n in 2..=5 {
            let t = wh(&format!("x -> x^{n}"));
            let f = compile(&t, 1).unwrap();
            let img = image(std::slice::from_ref(&f), &Polyhedron::cube(1)).unwrap();
            let expected = Polyhedron::new(1, vec![seg((1, n), (1, 1))]);
            assert!(poly_equal(&img, &expected), "image of x -> x^{n}");
            // breakpoint vertex (n-1)/n with value 1/n is in the complex
            let bp = rat(n - 1, n);
            assert!(f
                .cells()
                .iter()
                .any(|c| c.poly.vertices().iter().any(|v| v[0] == bp)
                    && c.poly.vertices().iter().any(|v| c.piece.eval(v) == rat(1, n))));
        }
    }

    #[test]
    fn image_identity_and_constant() {
        let idp = compile(&wh("x"), 1).unwrap();
        let p = Polyhedron::new(1, vec![seg((1, 3), (2, 3))]);
        assert!(poly_equal(&image(std::slice::from_ref(&idp), &p).unwrap(), &p));

        let one = compile(&wh("1"), 1).unwrap();
        let img = image(std::slice::from_ref(&one), &p).unwrap();
        assert!(poly_equal(&img, &Polyhedron::new(1, vec![point1((1, 1))])));
    }

    #[test]
    fn compile_matches_eval_on_grid() {
        let samples = [
            "2.x -> x",
            "x*y -> x /\\ y",
            "(x -> y) \\/ (y -> x)",
            "3.(x*x) -> x^2",
            "x \\/ y -> x*y",
            "2.(x /\\ y)",
        ];
        for s in samples {
            let t = wh(s);
            let n = t.arity();
            let f = compile(&t, n).unwrap();
            let grid: Vec<Rat> = (0..=6).map(|i| rat(i, 6)).collect();
            let mut pts: Vec<Vec<Rat>> = vec![vec![]];
            for _ in 0..n {
                pts = pts
                    .into_iter()
                    .flat_map(|p| {
                        grid.iter().map(move |g| {
                            let mut q = p.clone();
                            q.push(g.clone());
                            q
                        })
                    })
                    .collect();
            }
            for p in pts {
                assert_eq!(
                    eval_pl(&f, &p).unwrap(),
                    eval_term(&t, &p).unwrap(),
                    "{s} at {p:?}"
                );
            }
        }
    }

    #[test]
    fn wajsberg_functions_are_one_at_one() {
        for s in ["x", "2.x", "x^3", "x -> x^2", "x*y", "(x -> y) \\/ (y -> x)"] {
            let t = wh(s);
            let n = t.arity();
            let f = compile_checked(&t, n, Mode::Wh).unwrap();
            assert!(one_set(&f).is_pointed());
        }
    }

    #[test]
    fn three_variables_agree_with_direct_evaluation() {
        let t = wh("x1*x2 -> x3");
        let f = compile(&t, 3).unwrap();
        let grid: Vec<Rat> = (0..=3).map(|i| rat(i, 3)).collect();
        for a in &grid {
            for b in &grid {
                for c in &grid {
                    let p = vec![a.clone(), b.clone(), c.clone()];
                    assert_eq!(eval_pl(&f, &p).unwrap(), eval_term(&t, &p).unwrap());
                }
            }
        }
        let os = one_set(&f);
        assert!(os.is_pointed());
        // {x1*x2 <= x3} misses e.g. (1,1,0)
        assert!(!os.contains(&[rat(1, 1), rat(1, 1), rat(0, 1)]));
    }

    #[test]
    fn four_variable_projection_compiles() {
        let t = wh("x1 -> x4");
        let f = compile(&t, 4).unwrap();
        assert_eq!(eval_pl(&f, &[rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 2)]).unwrap(), rat(1, 2));
        assert_eq!(eval_pl(&f, &[rat(1, 4), rat(0, 1), rat(0, 1), rat(3, 4)]).unwrap(), rat(1, 1));
    }

    #[test]
    fn continuity_across_shared_vertices() {
        let t = wh("(((x -> x^2) -> x) -> x) \\/ (2.y -> y)");
        let f = compile(&t, 2).unwrap();
        for (i, c1) in f.cells().iter().enumerate() {
            for c2 in &f.cells()[i + 1..] {
                for v in c1.poly.vertices() {
                    if c2.poly.vertices().contains(v) {
                        assert_eq!(c1.piece.eval(v), c2.piece.eval(v));
                    }
                }
            }
        }
    }
}
