//! Independent brute-force cross-checks used by tests and the acceptance
//! suite. Nothing here is called from the decision path: the oracles are
//! refutation-complete within their bounds and verification-incomplete, so
//! a counterexample is definitive while a pass is evidence at the given
//! resolution.

use std::collections::HashSet;

use num::One;
use rand::Rng;

use crate::arith::{rat, Int, IntMatrix, Point};
use crate::pl::{compile, is_constant_one, PLFunction};
use crate::terms::{eval_term, fuse, imp, join, meet, neg, power, scale, var, Mode, Term};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("grid cap exceeded: {0} points")]
    GridCap(u128),
    #[error("search-space cap exceeded: {0} points")]
    SearchCap(u128),
    #[error("dimension mismatch")]
    Dim,
    #[error("admissibility oracle is wh-mode only")]
    MvMode,
}

/// Enumeration caps, overridable from the CLI.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub grid_points: u128,
    pub subst_terms: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { grid_points: 1_000_000, subst_terms: 100_000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    /// All points with coordinate denominators dividing this bound.
    pub denom: u64,
    pub arity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridOutcome {
    Pass,
    Counterexample(Point),
}

pub enum GridKind<'a> {
    /// t = u at every grid point
    Identity(&'a Term, &'a Term),
    /// t = 1 implies u = 1 at every grid point
    Quasieq(&'a Term, &'a Term),
}

fn grid_iter(spec: &GridSpec, caps: &Caps) -> Result<Vec<Point>, OracleError> {
    let d = spec.denom;
    let total = (u128::from(d) + 1).checked_pow(spec.arity as u32).ok_or(OracleError::GridCap(u128::MAX))?;
    if total > caps.grid_points {
        return Err(OracleError::GridCap(total));
    }
    let mut pts = Vec::with_capacity(total as usize);
    let mut idx = vec![0u64; spec.arity];
    loop {
        pts.push(idx.iter().map(|&i| rat(i as i64, d as i64)).collect());
        let mut k = spec.arity;
        loop {
            if k == 0 {
                return Ok(pts);
            }
            k -= 1;
            if idx[k] < d {
                idx[k] += 1;
                for slot in idx.iter_mut().skip(k + 1) {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

/// Checks an identity or quasiequation on the full grid; the first failing
/// point in lexicographic order is returned.
pub fn grid_check(kind: GridKind, spec: &GridSpec, caps: &Caps) -> Result<GridOutcome, OracleError> {
    let pts = grid_iter(spec, caps)?;
    for p in pts {
        let bad = match &kind {
            GridKind::Identity(t, u) => {
                eval_term(t, &p).map_err(|_| OracleError::Dim)?
                    != eval_term(u, &p).map_err(|_| OracleError::Dim)?
            }
            GridKind::Quasieq(t, u) => {
                eval_term(t, &p).map_err(|_| OracleError::Dim)?.is_one()
                    && !eval_term(u, &p).map_err(|_| OracleError::Dim)?.is_one()
            }
        };
        if bad {
            return Ok(GridOutcome::Counterexample(p));
        }
    }
    Ok(GridOutcome::Pass)
}

/// Exhaustive integer witness search over the box [-radius, radius]^n,
/// lexicographic order.
pub fn integer_search_bruteforce(
    a: &IntMatrix,
    b: &[Int],
    radius: i64,
    caps: &Caps,
) -> Result<Option<Vec<Int>>, OracleError> {
    if b.len() != a.rows() {
        return Err(OracleError::Dim);
    }
    let n = a.cols();
    let width = 2 * radius as u128 + 1;
    let total = width.checked_pow(n as u32).ok_or(OracleError::SearchCap(u128::MAX))?;
    if total > caps.subst_terms {
        return Err(OracleError::SearchCap(total));
    }
    let mut x: Vec<i64> = vec![-radius; n];
    loop {
        let cand: Vec<Int> = x.iter().map(|&v| Int::from(v)).collect();
        if a.mul_vec(&cand) == b {
            return Ok(Some(cand));
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            if x[k] < radius {
                x[k] += 1;
                for slot in x.iter_mut().skip(k + 1) {
                    *slot = -radius;
                }
                break;
            }
        }
    }
}

/// One-variable wh terms up to the given AST depth, deduplicated by their
/// compiled function, in deterministic generation order.
fn enumerate_unary_terms(depth: usize, caps: &Caps) -> Vec<Term> {
    let mut terms: Vec<(Term, usize)> = Vec::new();
    // hashing ignores the polytopes' lazily-filled half-space caches
    #[allow(clippy::mutable_key_type)]
    let mut seen: HashSet<PLFunction> = HashSet::new();
    let push = |t: Term, d: usize, terms: &mut Vec<(Term, usize)>, seen: &mut HashSet<PLFunction>| {
        if terms.len() as u128 >= caps.subst_terms {
            return;
        }
        if let Ok(f) = compile(&t, 1) {
            if seen.insert(f) {
                terms.push((t, d));
            }
        }
    };
    push(var(1), 1, &mut terms, &mut seen);
    push(Term::One, 1, &mut terms, &mut seen);
    for d in 2..=depth {
        let prev: Vec<(Term, usize)> = terms.clone();
        for (l, dl) in &prev {
            for (r, dr) in &prev {
                if 1 + dl.max(dr) != d {
                    continue;
                }
                for op in 0..4 {
                    let t = match op {
                        0 => fuse(l.clone(), r.clone()),
                        1 => imp(l.clone(), r.clone()),
                        2 => meet(l.clone(), r.clone()),
                        _ => join(l.clone(), r.clone()),
                    };
                    push(t, d, &mut terms, &mut seen);
                }
            }
        }
    }
    terms.into_iter().map(|(t, _)| t).collect()
}

/// Searches for a substitution into one-variable terms that unifies every
/// premise of the rule but no conclusion. `Some` refutes admissibility
/// definitively; `None` is evidence up to the depth bound and caps.
pub fn refute_admissibility(
    rule: &crate::decide::Rule,
    depth: usize,
    caps: &Caps,
) -> Result<Option<Vec<Term>>, OracleError> {
    if rule.mode == Mode::Mv {
        return Err(OracleError::MvMode);
    }
    let n = rule.arity();
    let terms = enumerate_unary_terms(depth, caps);
    let t_count = terms.len() as u128;
    let mut idx = vec![0usize; n];
    let mut tried: u128 = 0;
    loop {
        if tried >= caps.subst_terms || t_count.checked_pow(n as u32).is_some_and(|tot| tried >= tot)
        {
            return Ok(None);
        }
        tried += 1;
        let subst: Vec<Term> = idx.iter().map(|&i| terms[i].clone()).collect();
        let unifies = |t: &Term| -> bool {
            compile(&t.substitute(&subst), 1).map(|f| is_constant_one(&f)).unwrap_or(false)
        };
        if rule.premises.iter().all(&unifies) && !rule.conclusions.iter().any(unifies) {
            return Ok(Some(subst));
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            if idx[k] + 1 < terms.len() {
                idx[k] += 1;
                for slot in idx.iter_mut().skip(k + 1) {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

/// Random term generator for oracle-style test suites.
pub fn random_term(rng: &mut impl Rng, arity: usize, depth: usize, mode: Mode) -> Term {
    if depth == 0 || rng.gen_range(0..10) < 2 {
        return match rng.gen_range(0..if mode == Mode::Mv { 4 } else { 3 }) {
            0 | 1 => var(rng.gen_range(1..=arity)),
            2 => Term::One,
            _ => Term::Zero,
        };
    }
    let ops = if mode == Mode::Mv { 7 } else { 6 };
    match rng.gen_range(0..ops) {
        0 => fuse(
            random_term(rng, arity, depth - 1, mode),
            random_term(rng, arity, depth - 1, mode),
        ),
        1 => imp(
            random_term(rng, arity, depth - 1, mode),
            random_term(rng, arity, depth - 1, mode),
        ),
        2 => meet(
            random_term(rng, arity, depth - 1, mode),
            random_term(rng, arity, depth - 1, mode),
        ),
        3 => join(
            random_term(rng, arity, depth - 1, mode),
            random_term(rng, arity, depth - 1, mode),
        ),
        4 => power(random_term(rng, arity, depth - 1, mode), rng.gen_range(2..=3)),
        5 => scale(rng.gen_range(2..=3), random_term(rng, arity, depth - 1, mode)),
        _ => neg(random_term(rng, arity, depth - 1, mode)),
    }
}

/// Random rational point in [0,1]^n with bounded denominators.
pub fn random_point(rng: &mut impl Rng, arity: usize, max_denom: i64) -> Point {
    (0..arity)
        .map(|_| {
            let d = rng.gen_range(1..=max_denom);
            let n = rng.gen_range(0..=d);
            rat(n, d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::Rule;
    use crate::terms::parse;

    fn wh(s: &str) -> Term {
        parse(s, Mode::Wh).unwrap()
    }

    #[test]
    fn grid_check_examples() {
        let caps = Caps::default();
        let pre = wh("(x -> y) \\/ (y -> x)");
        let out = grid_check(
            GridKind::Identity(&pre, &Term::One),
            &GridSpec { denom: 5, arity: 2 },
            &caps,
        )
        .unwrap();
        assert_eq!(out, GridOutcome::Pass);

        let t = wh("2.x -> x");
        let out = grid_check(
            GridKind::Identity(&t, &Term::One),
            &GridSpec { denom: 2, arity: 1 },
            &caps,
        )
        .unwrap();
        assert_eq!(out, GridOutcome::Counterexample(vec![rat(1, 2)]));

        let out = grid_check(
            GridKind::Identity(&Term::One, &Term::One),
            &GridSpec { denom: 3, arity: 1 },
            &caps,
        )
        .unwrap();
        assert_eq!(out, GridOutcome::Pass);
    }

    #[test]
    fn grid_cap_respected() {
        let caps = Caps { grid_points: 10, subst_terms: 10 };
        let t = wh("x");
        let err = grid_check(
            GridKind::Identity(&t, &t),
            &GridSpec { denom: 100, arity: 2 },
            &caps,
        )
        .unwrap_err();
        assert!(matches!(err, OracleError::GridCap(_)));
    }

    #[test]
    fn brute_force_search_examples() {
        let caps = Caps::default();
        let a = IntMatrix::from_i64(&[&[2, 2]]);
        assert_eq!(integer_search_bruteforce(&a, &[Int::from(1)], 5, &caps).unwrap(), None);
        let a = IntMatrix::from_i64(&[&[1]]);
        assert_eq!(
            integer_search_bruteforce(&a, &[Int::from(3)], 5, &caps).unwrap(),
            Some(vec![Int::from(3)])
        );
        let a = IntMatrix::from_i64(&[&[1, -1]]);
        assert_eq!(
            integer_search_bruteforce(&a, &[Int::from(0)], 1, &caps).unwrap(),
            Some(vec![Int::from(-1), Int::from(-1)])
        );
    }

    #[test]
    fn refuter_finds_trivial_counterexample() {
        let caps = Caps::default();
        // 1 => x is refuted by sigma(x) = x (first in enumeration order)
        let r = Rule::new(vec![Term::One], vec![wh("x")], Mode::Wh).unwrap();
        let cx = refute_admissibility(&r, 1, &caps).unwrap().unwrap();
        assert_eq!(cx, vec![var(1)]);
    }

    #[test]
    fn refuter_confirms_admissible_rule() {
        let caps = Caps::default();
        let r = Rule::new(vec![wh("2.x -> x")], vec![wh("2.x")], Mode::Wh).unwrap();
        assert_eq!(refute_admissibility(&r, 4, &caps).unwrap(), None);
        let t = wh("x -> x^2");
        let r = Rule::new(vec![t.clone()], vec![t], Mode::Wh).unwrap();
        assert_eq!(refute_admissibility(&r, 3, &caps).unwrap(), None);
    }

    #[test]
    fn refuter_refutes_non_admissible() {
        let caps = Caps::default();
        // premise 2.x has max unifier [1/2,1]; conclusion x is not 1 there
        let r = Rule::new(vec![wh("2.x")], vec![wh("x")], Mode::Wh).unwrap();
        let cx = refute_admissibility(&r, 4, &caps).unwrap().unwrap();
        // the witness unifies the premise but not the conclusion
        let s = &cx[0];
        assert!(is_constant_one(&compile(&wh("2.x").substitute(std::slice::from_ref(s)), 1).unwrap()));
        assert!(!is_constant_one(&compile(s, 1).unwrap()));
    }

    #[test]
    fn unary_enumeration_is_deduplicated() {
        let caps = Caps::default();
        let ts = enumerate_unary_terms(3, &caps);
        assert!(ts.len() >= 5);
        #[allow(clippy::mutable_key_type)]
        let mut fns = HashSet::new();
        for t in &ts {
            assert!(fns.insert(compile(t, 1).unwrap()), "duplicate function for {t}");
        }
        assert_eq!(ts[0], var(1));
        assert_eq!(ts[1], Term::One);
    }
}
