//! Term syntax for the hoop/MV signature: parsing, printing, exact
//! evaluation on the standard algebra over [0,1], and reduction of MV terms
//! to positive (negation- and zero-free) normal form.
//!
//! Grammar (tightest last):
//!
//! ```text
//! term  := imp ;  imp := join ("->" imp)? ;  join := meet ("\/" meet)* ;
//! meet  := fuse ("/\" fuse)* ;  fuse := unary ("*" unary)* ;
//! unary := "~" unary | scale ;  scale := INT "." unary | power ;
//! power := atom ("^" INT)? ;  atom := "0" | "1" | VAR | "(" term ")" ;
//! VAR   := "x" INT | "x" | "y" | "z"
//! ```

use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{Rat, rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Wajsberg hoops: the 0-free signature. Negation and 0 are rejected.
    Wh,
    /// Full MV signature.
    Mv,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Wh => write!(f, "wh"),
            Mode::Mv => write!(f, "mv"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// 1-based variable index.
    Var(usize),
    One,
    Zero,
    /// Strong conjunction, `max(0, x + y - 1)`.
    Fuse(Box<Term>, Box<Term>),
    /// Residuum, `min(1, 1 - x + y)`.
    Imp(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    /// Lukasiewicz sum, `min(1, x + y)`; sugar over both signatures.
    Oplus(Box<Term>, Box<Term>),
    /// `t^k`: k-fold fuse.
    Power(Box<Term>, u32),
    /// `k.t`: k-fold sum.
    Scale(u32, Box<Term>),
}

use Term::*;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negation/zero not allowed in wh mode")]
    NotPositive,
    #[error("arity mismatch: term uses x{var} but arity is {arity}")]
    Arity { var: usize, arity: usize },
    #[error("coordinate out of [0,1]: {0}")]
    OutOfCube(String),
}

pub fn var(i: usize) -> Term {
    Var(i)
}
pub fn fuse(l: Term, r: Term) -> Term {
    Fuse(Box::new(l), Box::new(r))
}
pub fn imp(l: Term, r: Term) -> Term {
    Imp(Box::new(l), Box::new(r))
}
pub fn meet(l: Term, r: Term) -> Term {
    Meet(Box::new(l), Box::new(r))
}
pub fn join(l: Term, r: Term) -> Term {
    Join(Box::new(l), Box::new(r))
}
pub fn neg(t: Term) -> Term {
    Neg(Box::new(t))
}
pub fn oplus(l: Term, r: Term) -> Term {
    Oplus(Box::new(l), Box::new(r))
}
pub fn power(t: Term, k: u32) -> Term {
    Power(Box::new(t), k)
}
pub fn scale(k: u32, t: Term) -> Term {
    Scale(k, Box::new(t))
}

impl Term {
    /// Largest variable index occurring in the term (0 when closed).
    pub fn max_var(&self) -> usize {
        match self {
            Var(i) => *i,
            One | Zero => 0,
            Neg(t) | Power(t, _) | Scale(_, t) => t.max_var(),
            Fuse(l, r) | Imp(l, r) | Meet(l, r) | Join(l, r) | Oplus(l, r) => {
                l.max_var().max(r.max_var())
            }
        }
    }

    /// Inferred arity: at least one variable slot.
    pub fn arity(&self) -> usize {
        self.max_var().max(1)
    }

    pub fn is_wh(&self) -> bool {
        match self {
            Zero | Neg(_) => false,
            Var(_) | One => true,
            Power(t, _) | Scale(_, t) => t.is_wh(),
            Fuse(l, r) | Imp(l, r) | Meet(l, r) | Join(l, r) | Oplus(l, r) => {
                l.is_wh() && r.is_wh()
            }
        }
    }

    pub fn check_mode(&self, mode: Mode) -> Result<(), TermError> {
        if mode == Mode::Wh && !self.is_wh() {
            return Err(TermError::NotPositive);
        }
        Ok(())
    }

    /// Expands Power/Scale/Oplus into the core signature. Oplus uses the
    /// residuated form in wh mode and the De Morgan form in mv mode.
    /// Note the residuated expansion duplicates subterms, so this is for
    /// small terms; evaluation and compilation handle sugar natively.
    pub fn desugar(&self, mode: Mode) -> Term {
        match self {
            Var(i) => Var(*i),
            One => One,
            Zero => Zero,
            Neg(t) => neg(t.desugar(mode)),
            Fuse(l, r) => fuse(l.desugar(mode), r.desugar(mode)),
            Imp(l, r) => imp(l.desugar(mode), r.desugar(mode)),
            Meet(l, r) => meet(l.desugar(mode), r.desugar(mode)),
            Join(l, r) => join(l.desugar(mode), r.desugar(mode)),
            Oplus(l, r) => {
                let (x, y) = (l.desugar(mode), r.desugar(mode));
                match mode {
                    Mode::Wh => imp(imp(x.clone(), fuse(x, y.clone())), y),
                    Mode::Mv => neg(fuse(neg(x), neg(y))),
                }
            }
            Power(t, k) => {
                let base = t.desugar(mode);
                let mut acc = base.clone();
                for _ in 1..*k {
                    acc = fuse(acc, base.clone());
                }
                acc
            }
            Scale(k, t) => {
                let base = t.desugar(mode);
                let mut acc = base.clone();
                for _ in 1..*k {
                    acc = oplus(acc, base.clone()).desugar(mode);
                }
                acc
            }
        }
    }

    /// Substitutes `map[i-1]` for variable `x_i`.
    pub fn substitute(&self, map: &[Term]) -> Term {
        match self {
            Var(i) => map.get(*i - 1).cloned().unwrap_or(Var(*i)),
            One => One,
            Zero => Zero,
            Neg(t) => neg(t.substitute(map)),
            Fuse(l, r) => fuse(l.substitute(map), r.substitute(map)),
            Imp(l, r) => imp(l.substitute(map), r.substitute(map)),
            Meet(l, r) => meet(l.substitute(map), r.substitute(map)),
            Join(l, r) => join(l.substitute(map), r.substitute(map)),
            Oplus(l, r) => oplus(l.substitute(map), r.substitute(map)),
            Power(t, k) => power(t.substitute(map), *k),
            Scale(k, t) => scale(*k, t.substitute(map)),
        }
    }
}

// ---------------------------------------------------------------------------
// parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Arrow,
    JoinOp,
    MeetOp,
    Star,
    Tilde,
    Dot,
    Caret,
    LPar,
    RPar,
    Num(u64),
    Var(usize),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, TermError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Arrow, i));
                    i += 2;
                } else {
                    return Err(TermError::Syntax { pos: i, msg: "expected `->`".into() });
                }
            }
            '\\' => {
                if bytes.get(i + 1) == Some(&b'/') {
                    toks.push((Tok::JoinOp, i));
                    i += 2;
                } else {
                    return Err(TermError::Syntax { pos: i, msg: "expected `\\/`".into() });
                }
            }
            '/' => {
                if bytes.get(i + 1) == Some(&b'\\') {
                    toks.push((Tok::MeetOp, i));
                    i += 2;
                } else {
                    return Err(TermError::Syntax { pos: i, msg: "expected `/\\`".into() });
                }
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '~' => {
                toks.push((Tok::Tilde, i));
                i += 1;
            }
            '.' => {
                toks.push((Tok::Dot, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LPar, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RPar, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: u64 = text[start..i]
                    .parse()
                    .map_err(|_| TermError::Syntax { pos: start, msg: "integer too large".into() })?;
                toks.push((Tok::Num(n), start));
            }
            'x' => {
                let start = i;
                i += 1;
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i > ds {
                    let n: usize = text[ds..i].parse().map_err(|_| TermError::Syntax {
                        pos: start,
                        msg: "variable index too large".into(),
                    })?;
                    if n == 0 {
                        return Err(TermError::Syntax {
                            pos: start,
                            msg: "variable indices start at 1".into(),
                        });
                    }
                    toks.push((Tok::Var(n), start));
                } else {
                    toks.push((Tok::Var(1), start));
                }
            }
            'y' => {
                toks.push((Tok::Var(2), i));
                i += 1;
            }
            'z' => {
                toks.push((Tok::Var(3), i));
                i += 1;
            }
            _ => {
                return Err(TermError::Syntax { pos: i, msg: format!("unexpected `{c}`") });
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    mode: Mode,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(_, p)| p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: &str) -> Result<T, TermError> {
        Err(TermError::Syntax { pos: self.here(), msg: msg.into() })
    }

    fn imp(&mut self) -> Result<Term, TermError> {
        let lhs = self.join()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.imp()?; // right-associative
            Ok(imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn join(&mut self) -> Result<Term, TermError> {
        let mut acc = self.meet()?;
        while self.peek() == Some(&Tok::JoinOp) {
            self.bump();
            acc = join(acc, self.meet()?);
        }
        Ok(acc)
    }

    fn meet(&mut self) -> Result<Term, TermError> {
        let mut acc = self.fuse()?;
        while self.peek() == Some(&Tok::MeetOp) {
            self.bump();
            acc = meet(acc, self.fuse()?);
        }
        Ok(acc)
    }

    fn fuse(&mut self) -> Result<Term, TermError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            acc = fuse(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Term, TermError> {
        if self.peek() == Some(&Tok::Tilde) {
            if self.mode == Mode::Wh {
                return Err(TermError::NotPositive);
            }
            self.bump();
            return Ok(neg(self.unary()?));
        }
        self.scale()
    }

    fn scale(&mut self) -> Result<Term, TermError> {
        if let Some(Tok::Num(n)) = self.peek() {
            if self.peek2() == Some(&Tok::Dot) {
                let n = *n;
                if n == 0 {
                    return self.err("scale factor must be positive");
                }
                let k = u32::try_from(n)
                    .map_err(|_| TermError::Syntax { pos: self.here(), msg: "scale too large".into() })?;
                self.bump();
                self.bump();
                return Ok(scale(k, self.unary()?));
            }
        }
        self.power()
    }

    fn power(&mut self) -> Result<Term, TermError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Num(0)) => return self.err("exponent must be positive"),
                Some(Tok::Num(n)) => {
                    let k = u32::try_from(n).map_err(|_| TermError::Syntax {
                        pos: self.here(),
                        msg: "exponent too large".into(),
                    })?;
                    return Ok(power(base, k));
                }
                _ => return self.err("expected exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Term, TermError> {
        match self.bump() {
            Some(Tok::Num(0)) => {
                if self.mode == Mode::Wh {
                    Err(TermError::NotPositive)
                } else {
                    Ok(Zero)
                }
            }
            Some(Tok::Num(1)) => Ok(One),
            Some(Tok::Num(_)) => {
                self.pos -= 1;
                self.err("bare integers other than 0/1 need `.` (scale) or `^` (power)")
            }
            Some(Tok::Var(i)) => Ok(Var(i)),
            Some(Tok::LPar) => {
                let t = self.imp()?;
                if self.bump() != Some(Tok::RPar) {
                    self.pos -= 1;
                    return self.err("expected `)`");
                }
                Ok(t)
            }
            _ => {
                if self.pos > 0 {
                    self.pos -= 1;
                }
                self.err("expected a term")
            }
        }
    }
}

/// Parses a term; wh mode rejects `0` and `~`.
pub fn parse(text: &str, mode: Mode) -> Result<Term, TermError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), mode };
    let t = p.imp()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// printing

const PREC_IMP: u8 = 0;
const PREC_JOIN: u8 = 1;
const PREC_MEET: u8 = 2;
const PREC_FUSE: u8 = 3;
const PREC_UNARY: u8 = 4;
const PREC_POW: u8 = 5;
const PREC_ATOM: u8 = 6;

fn write_term(t: &Term, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = match t {
        Imp(..) => PREC_IMP,
        Join(..) => PREC_JOIN,
        Meet(..) => PREC_MEET,
        Fuse(..) => PREC_FUSE,
        Neg(..) | Scale(..) => PREC_UNARY,
        Oplus(..) => PREC_IMP, // printed via its residuated expansion
        Power(..) => PREC_POW,
        Var(..) | One | Zero => PREC_ATOM,
    };
    if prec < min {
        write!(f, "(")?;
        write_term(t, 0, f)?;
        return write!(f, ")");
    }
    match t {
        Var(i) => write!(f, "x{i}"),
        One => write!(f, "1"),
        Zero => write!(f, "0"),
        Imp(l, r) => {
            write_term(l, PREC_JOIN, f)?;
            write!(f, " -> ")?;
            write_term(r, PREC_IMP, f)
        }
        Join(l, r) => {
            write_term(l, PREC_JOIN, f)?;
            write!(f, " \\/ ")?;
            write_term(r, PREC_MEET, f)
        }
        Meet(l, r) => {
            write_term(l, PREC_MEET, f)?;
            write!(f, " /\\ ")?;
            write_term(r, PREC_FUSE, f)
        }
        Fuse(l, r) => {
            write_term(l, PREC_FUSE, f)?;
            write!(f, "*")?;
            write_term(r, PREC_UNARY, f)
        }
        Neg(x) => {
            write!(f, "~")?;
            write_term(x, PREC_UNARY, f)
        }
        Scale(k, x) => {
            write!(f, "{k}.")?;
            write_term(x, PREC_UNARY, f)
        }
        Power(x, k) => {
            write_term(x, PREC_ATOM, f)?;
            write!(f, "^{k}")
        }
        Oplus(l, r) => {
            // no surface syntax; print the 0-free expansion
            let expanded = imp(imp((**l).clone(), fuse((**l).clone(), (**r).clone())), (**r).clone());
            write_term(&expanded, min, f)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, 0, f)
    }
}

// ---------------------------------------------------------------------------
// evaluation

fn clamp01(v: Rat) -> Rat {
    if v.is_negative() {
        Rat::zero()
    } else if v > Rat::one() {
        Rat::one()
    } else {
        v
    }
}

/// Exact evaluation on the standard algebra. Sugar is evaluated by its
/// closed form (`k.t` = min(1, k t), `t^k` = max(0, k t - (k-1))).
pub fn eval_term(t: &Term, p: &[Rat]) -> Result<Rat, TermError> {
    for c in p {
        if c.is_negative() || c > &Rat::one() {
            return Err(TermError::OutOfCube(crate::arith::fmt_rat(c)));
        }
    }
    let mv = t.max_var();
    if mv > p.len() {
        return Err(TermError::Arity { var: mv, arity: p.len() });
    }
    Ok(eval_unchecked(t, p))
}

pub(crate) fn eval_unchecked(t: &Term, p: &[Rat]) -> Rat {
    match t {
        Var(i) => p[*i - 1].clone(),
        One => Rat::one(),
        Zero => Rat::zero(),
        Neg(x) => Rat::one() - eval_unchecked(x, p),
        Fuse(l, r) => clamp01(eval_unchecked(l, p) + eval_unchecked(r, p) - Rat::one()),
        Imp(l, r) => clamp01(Rat::one() - eval_unchecked(l, p) + eval_unchecked(r, p)),
        Meet(l, r) => eval_unchecked(l, p).min(eval_unchecked(r, p)),
        Join(l, r) => eval_unchecked(l, p).max(eval_unchecked(r, p)),
        Oplus(l, r) => clamp01(eval_unchecked(l, p) + eval_unchecked(r, p)),
        Power(x, k) => {
            let v = eval_unchecked(x, p);
            let k = rat(i64::from(*k), 1);
            clamp01(k.clone() * v - k + Rat::one())
        }
        Scale(k, x) => {
            let v = eval_unchecked(x, p);
            clamp01(rat(i64::from(*k), 1) * v)
        }
    }
}

/// True iff the term evaluates to 1 at the point (1, ..., 1); by the
/// polarity dichotomy this decides positivity of MV terms.
pub fn is_positive(t: &Term) -> bool {
    let ones = vec![Rat::one(); t.arity()];
    eval_unchecked(t, &ones).is_one()
}

// ---------------------------------------------------------------------------
// positive normal form

/// Rewrites an MV term to `(Positive, p)` with `t == p` or `(Negative, p)`
/// with `t == ~p`, where `p` is 0- and negation-free. One rewrite per
/// operator/polarity pair; mixed-polarity meets and joins go through their
/// residuated definitions, commuting first where that is shorter.
pub fn positive_normal_form(t: &Term) -> (Polarity, Term) {
    use Polarity::*;
    match t {
        Var(i) => (Positive, Var(*i)),
        One => (Positive, One),
        Zero => (Negative, One),
        Neg(x) => {
            let (pol, p) = positive_normal_form(x);
            (flip(pol), p)
        }
        Fuse(l, r) => {
            let (pl, p) = positive_normal_form(l);
            let (pr, q) = positive_normal_form(r);
            match (pl, pr) {
                (Positive, Positive) => (Positive, fuse(p, q)),
                (Positive, Negative) => (Negative, imp(p, q)),
                (Negative, Positive) => (Negative, imp(q, p)),
                (Negative, Negative) => (Negative, imp(imp(p.clone(), fuse(p, q.clone())), q)),
            }
        }
        Imp(l, r) => {
            let (pl, p) = positive_normal_form(l);
            let (pr, q) = positive_normal_form(r);
            match (pl, pr) {
                (Positive, Positive) => (Positive, imp(p, q)),
                (Positive, Negative) => (Negative, fuse(p, q)),
                (Negative, Positive) => (Positive, imp(imp(p.clone(), fuse(p, q.clone())), q)),
                (Negative, Negative) => (Positive, imp(q, p)),
            }
        }
        Meet(l, r) => {
            let (pl, p) = positive_normal_form(l);
            let (pr, q) = positive_normal_form(r);
            match (pl, pr) {
                (Positive, Positive) => (Positive, meet(p, q)),
                (Negative, Negative) => (Negative, join(p, q)),
                // p /\ ~q = p * (p -> ~q) = ~(p -> p*q)
                (Positive, Negative) => (Negative, imp(p.clone(), fuse(p, q))),
                (Negative, Positive) => (Negative, imp(q.clone(), fuse(q, p))),
            }
        }
        Join(l, r) => {
            let (pl, p) = positive_normal_form(l);
            let (pr, q) = positive_normal_form(r);
            match (pl, pr) {
                (Positive, Positive) => (Positive, join(p, q)),
                (Negative, Negative) => (Negative, meet(p, q)),
                // p \/ ~q = (p -> ~q) -> ~q = q -> p*q
                (Positive, Negative) => (Positive, imp(q.clone(), fuse(p, q))),
                (Negative, Positive) => (Positive, imp(p.clone(), fuse(q, p))),
            }
        }
        Oplus(l, r) => {
            let (pl, p) = positive_normal_form(l);
            let (pr, q) = positive_normal_form(r);
            match (pl, pr) {
                (Positive, Positive) => (Positive, imp(imp(p.clone(), fuse(p, q.clone())), q)),
                (Positive, Negative) => (Positive, imp(q, p)),
                (Negative, Positive) => (Positive, imp(p, q)),
                (Negative, Negative) => (Negative, fuse(p, q)),
            }
        }
        Power(x, k) => {
            let (pol, p) = positive_normal_form(x);
            match pol {
                Positive => (Positive, power(p, *k)),
                // (~p)^k = ~(k.p)
                Negative => (Negative, scale(*k, p)),
            }
        }
        Scale(k, x) => {
            let (pol, p) = positive_normal_form(x);
            match pol {
                Positive => (Positive, scale(*k, p)),
                // k.(~p) = ~(p^k)
                Negative => (Negative, power(p, *k)),
            }
        }
    }
}

fn flip(p: Polarity) -> Polarity {
    match p {
        Polarity::Positive => Polarity::Negative,
        Polarity::Negative => Polarity::Positive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(s: &str) -> Term {
        parse(s, Mode::Mv).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("x1 -> x1*x1"), imp(var(1), fuse(var(1), var(1))));
        assert_eq!(p("2.x1 -> x1"), imp(scale(2, var(1)), var(1)));
        assert_eq!(parse("~x1", Mode::Wh).unwrap_err(), TermError::NotPositive);
        assert_eq!(parse("0", Mode::Wh).unwrap_err(), TermError::NotPositive);
    }

    #[test]
    fn parse_aliases_and_precedence() {
        assert_eq!(p("x"), var(1));
        assert_eq!(p("y"), var(2));
        assert_eq!(p("z"), var(3));
        // -> is right-associative and loosest
        assert_eq!(p("x -> y -> z"), imp(var(1), imp(var(2), var(3))));
        assert_eq!(p("x \\/ y /\\ z"), join(var(1), meet(var(2), var(3))));
        assert_eq!(p("x /\\ y * z"), meet(var(1), fuse(var(2), var(3))));
        assert_eq!(p("~x^2"), neg(power(var(1), 2)));
        assert_eq!(p("2.~x"), scale(2, neg(var(1))));
        assert_eq!(p("2.x*y"), fuse(scale(2, var(1)), var(2)));
    }

    #[test]
    fn parse_errors_have_positions() {
        match parse("x -> (", Mode::Wh) {
            Err(TermError::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse("x $ y", Mode::Wh).is_err());
        assert!(parse("x y", Mode::Wh).is_err());
        assert!(parse("3", Mode::Wh).is_err());
        assert!(parse("x^0", Mode::Wh).is_err());
        assert!(parse("0.x", Mode::Wh).is_err());
    }

    #[test]
    fn render_roundtrip_samples() {
        for s in [
            "x1 -> x1*x1",
            "2.x1 -> x1",
            "(x1 -> x1^2) -> x1",
            "x1 /\\ x2 \\/ x3",
            "~(x1*~x2)",
            "(x1 \\/ x2)^3",
            "2.(x1 -> x2)",
        ] {
            let t = p(s);
            let printed = t.to_string();
            assert_eq!(p(&printed), t, "roundtrip failed for `{s}` -> `{printed}`");
        }
    }

    #[test]
    fn eval_standard_ops() {
        let pt = vec![rat(3, 4), rat(1, 2)];
        assert_eq!(eval_term(&p("x*y"), &pt).unwrap(), rat(1, 4));
        assert_eq!(eval_term(&p("x->y"), &pt).unwrap(), rat(3, 4));
        assert_eq!(eval_term(&p("2.x"), &[rat(1, 3)]).unwrap(), rat(2, 3));
        assert_eq!(eval_term(&p("x^2"), &[rat(3, 4)]).unwrap(), rat(1, 2));
        assert_eq!(eval_term(&p("~x"), &[rat(1, 4)]).unwrap(), rat(3, 4));
    }

    #[test]
    fn eval_rejects_bad_points() {
        assert!(eval_term(&p("x"), &[rat(3, 2)]).is_err());
        assert!(eval_term(&p("x2"), &[rat(1, 2)]).is_err());
    }

    #[test]
    fn desugar_matches_eval() {
        let pts = [rat(0, 1), rat(1, 3), rat(1, 2), rat(2, 3), rat(1, 1)];
        for s in ["2.x", "3.x", "x^2", "x^3", "2.x -> x"] {
            let t = p(s);
            for mode in [Mode::Wh, Mode::Mv] {
                let d = t.desugar(mode);
                for v in &pts {
                    assert_eq!(
                        eval_term(&t, std::slice::from_ref(v)).unwrap(),
                        eval_term(&d, std::slice::from_ref(v)).unwrap(),
                        "{s} at {v} in {mode}"
                    );
                }
            }
        }
    }

    #[test]
    fn nnf_paper_cases() {
        use Polarity::*;
        // ~(x*~y) -> (+, x->y)
        assert_eq!(positive_normal_form(&p("~(x*~y)")), (Positive, imp(var(1), var(2))));
        // ~x->~y -> (+, y->x)
        assert_eq!(positive_normal_form(&p("~x->~y")), (Positive, imp(var(2), var(1))));
        // ~(~x*~y) -> (+, (x->x*y)->y)
        assert_eq!(
            positive_normal_form(&p("~(~x*~y)")),
            (Positive, imp(imp(var(1), fuse(var(1), var(2))), var(2)))
        );
        // 0 -> (-, 1)
        assert_eq!(positive_normal_form(&Zero), (Negative, One));
    }

    #[test]
    fn nnf_output_is_positive_and_pointwise_equal() {
        let samples = [
            "~(x*~y)",
            "~x->~y",
            "x /\\ ~y",
            "~x /\\ y",
            "x \\/ ~y",
            "~x \\/ y",
            "~(x \\/ y)",
            "~(2.~x)",
            "(~x)^2",
            "~x -> y",
            "x -> ~y",
        ];
        let grid: Vec<Rat> = (0..=4).map(|i| rat(i, 4)).collect();
        for s in samples {
            let t = p(s);
            let (pol, nf) = positive_normal_form(&t);
            assert!(nf.is_wh(), "normal form of `{s}` must be 0/~-free, got {nf}");
            for a in &grid {
                for b in &grid {
                    let pt = vec![a.clone(), b.clone()];
                    let lhs = eval_term(&t, &pt).unwrap();
                    let rhs = eval_term(&nf, &pt).unwrap();
                    let expect = match pol {
                        Polarity::Positive => rhs,
                        Polarity::Negative => Rat::one() - rhs,
                    };
                    assert_eq!(lhs, expect, "`{s}` vs `{nf}` at ({a},{b})");
                }
            }
            // polarity agrees with the value at 1
            let at_one = eval_term(&t, &vec![Rat::one(); t.arity()]).unwrap();
            match pol {
                Polarity::Positive => assert!(at_one.is_one()),
                Polarity::Negative => assert!(at_one.is_zero()),
            }
        }
    }

    #[test]
    fn positivity_examples() {
        assert!(is_positive(&p("x \\/ ~x")));
        assert!(!is_positive(&p("~x")));
        assert!(is_positive(&One));
    }

    #[test]
    fn substitute_replaces_vars() {
        let t = p("x -> y");
        let s = t.substitute(&[p("z"), p("x*x")]);
        assert_eq!(s, imp(var(3), fuse(var(1), var(1))));
    }
}
