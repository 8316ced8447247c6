//! Synthesis of a one-variable term whose one-set is a given pointed
//! polyhedron in [0,1].
//!
//! Each component interval [a,b] gets a "hat" term equal to 1 exactly
//! there: the meet of an upward ramp (one-set [a,1]) and a mirrored ramp
//! (one-set [0,b]). Upward ramps are built by composing scales and powers,
//! descending the endpoint's continued-fraction expansion: substituting
//! `k.x` into a ramp with one-set [e,1] yields one-set [e/k,1], and
//! substituting `x^k` yields [1-(1-e)/k,1]. Mirrored ramps substitute `~x`.
//! The hats are joined, normalized to a positive term, and the result is
//! verified against the input before returning.

use num::{BigInt, One, Signed, Zero};
use thiserror::Error;

use crate::arith::{fmt_rat, Rat};
use crate::geom::{poly_equal, poly_subset, Polyhedron};
use crate::pl::{compile, one_set, PlError};
use crate::terms::{join, meet, neg, positive_normal_form, power, scale, var, Polarity, Term};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SynthError {
    #[error("polyhedron is not pointed")]
    NotPointed,
    #[error("ambient dimension must be 1, got {0}")]
    Ambient(usize),
    #[error("interval endpoint {0} outside [0,1]")]
    OutOfRange(String),
    #[error("denominator too large for term synthesis")]
    TooLarge,
    #[error(transparent)]
    Pl(#[from] PlError),
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

/// A closed interval in [0,1]; `lo == hi` encodes a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval1D {
    pub lo: Rat,
    pub hi: Rat,
}

/// Canonical disjoint sorted components of a 1-dimensional polyhedron.
pub fn components_1d(p: &Polyhedron) -> Result<Vec<Interval1D>, SynthError> {
    if p.dim() != 1 {
        return Err(SynthError::Ambient(p.dim()));
    }
    let mut ivs: Vec<Interval1D> = Vec::new();
    for poly in p.polytopes() {
        let vs = poly.vertices();
        let lo = vs[0][0].clone();
        let hi = vs[vs.len() - 1][0].clone();
        if lo.is_negative() || hi > Rat::one() {
            return Err(SynthError::OutOfRange(fmt_rat(&lo)));
        }
        ivs.push(Interval1D { lo, hi });
    }
    ivs.sort_by(|a, b| (&a.lo, &a.hi).cmp(&(&b.lo, &b.hi)));
    let mut merged: Vec<Interval1D> = Vec::new();
    for iv in ivs {
        match merged.last_mut() {
            Some(last) if iv.lo <= last.hi => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => merged.push(iv),
        }
    }
    Ok(merged)
}

fn to_u32(i: &BigInt) -> Result<u32, SynthError> {
    u32::try_from(i.clone()).map_err(|_| SynthError::TooLarge)
}

/// A term in `x` whose one-set is exactly [e, 1], for rational e in (0,1].
fn ramp_up(e: &Rat) -> Result<Term, SynthError> {
    let p = e.numer().clone();
    let q = e.denom().clone();
    if p == q {
        return Ok(var(1));
    }
    if p.is_one() {
        return Ok(scale(to_u32(&q)?, var(1)));
    }
    let two_p = &p + &p;
    if two_p <= q {
        // substitute k.x : [e,1] pulls back to [e/k,1]
        let k = &q / &p;
        let outer = ramp_up(&Rat::new(&k * &p, q.clone()))?;
        Ok(outer.substitute(&[scale(to_u32(&k)?, var(1))]))
    } else {
        // substitute x^k : distance from 1 divides by k
        let r = &q - &p;
        let k = if (&q % &r).is_zero() { &q / &r - BigInt::one() } else { &q / &r };
        let outer = ramp_up(&Rat::new(&q - &k * &r, q.clone()))?;
        Ok(outer.substitute(&[power(var(1), to_u32(&k)?)]))
    }
}

/// A term in `x` whose one-set is exactly [0, b], for rational b in [0,1).
fn ramp_down(b: &Rat) -> Result<Term, SynthError> {
    let mirrored = ramp_up(&(Rat::one() - b))?;
    Ok(mirrored.substitute(&[neg(var(1))]))
}

fn hat(iv: &Interval1D) -> Result<Term, SynthError> {
    let at_zero = iv.lo.is_zero();
    let at_one = iv.hi.is_one();
    match (at_zero, at_one) {
        (true, true) => Ok(Term::One),
        (false, true) => ramp_up(&iv.lo),
        (true, false) => ramp_down(&iv.hi),
        (false, false) => Ok(meet(ramp_up(&iv.lo)?, ramp_down(&iv.hi)?)),
    }
}

/// Produces a wh-mode term whose one-set equals the input polyhedron
/// exactly; the equality is verified before returning.
pub fn synthesize_1d(p: &Polyhedron) -> Result<Term, SynthError> {
    if p.dim() != 1 {
        return Err(SynthError::Ambient(p.dim()));
    }
    if !p.is_pointed() {
        return Err(SynthError::NotPointed);
    }
    let ivs = components_1d(p)?;
    let mut raw: Option<Term> = None;
    let mut used_negation = false;
    for iv in &ivs {
        let h = hat(iv)?;
        used_negation |= !h.is_wh();
        raw = Some(match raw {
            None => h,
            Some(acc) => join(acc, h),
        });
    }
    let mut raw = raw.expect("a pointed polyhedron has a component");
    if used_negation {
        // positivity patch: one-set of x is {1}, already inside p
        raw = join(raw, var(1));
    }
    let (polarity, term) = positive_normal_form(&raw);
    if polarity != Polarity::Positive {
        return Err(SynthError::Internal("synthesized term is not positive".into()));
    }
    let got = one_set(&compile(&term, 1)?);
    if !poly_equal(&got, p) {
        return Err(SynthError::Internal(format!(
            "one-set mismatch: witness {:?}",
            poly_subset(&got, p).or_else(|| poly_subset(p, &got))
        )));
    }
    Ok(term)
}
