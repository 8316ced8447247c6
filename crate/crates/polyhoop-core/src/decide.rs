//! Decision procedures over the standard algebra: identity validity,
//! deducibility, the maximal coexact unifier of a premise set, rule
//! admissibility, and exactness/projectivity of finitely presented hoops
//! given by a term or a pointed polyhedron.
//!
//! Validity of `t = u` reduces to the biimplication compiling to the
//! constant 1. Deducibility is one-set containment. The maximal coexact
//! unifier of premises `S` is the connected-through-1 component of the
//! anchored part of a triangulation of the one-set of the folded premise;
//! a rule is admissible iff some conclusion is identically 1 there.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::geom::{GeomError, Polyhedron};
use crate::pl::{compile, is_constant_one, one_set, PLFunction, PlError};
use crate::polygeo::{
    anchored_component_of_one, covers, shape_report, triangulate, ShapeReport,
};
use crate::terms::{imp, meet, Mode, Term, TermError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecideError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Pl(#[from] PlError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("MV admissibility out of scope")]
    MvAdmissibility,
    #[error("rule needs at least one premise and one conclusion")]
    EmptyRule,
}

/// A multi-conclusion rule `premises => conclusions`, each term read as
/// `t = 1`. Premises fold conjunctively; conclusions are disjunctive (any
/// covered conclusion makes the rule admissible).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub premises: Vec<Term>,
    pub conclusions: Vec<Term>,
    pub mode: Mode,
}

impl Rule {
    pub fn new(premises: Vec<Term>, conclusions: Vec<Term>, mode: Mode) -> Result<Rule, DecideError> {
        if premises.is_empty() || conclusions.is_empty() {
            return Err(DecideError::EmptyRule);
        }
        let rule = Rule { premises, conclusions, mode };
        for t in rule.premises.iter().chain(&rule.conclusions) {
            t.check_mode(mode)?;
        }
        Ok(rule)
    }

    pub fn arity(&self) -> usize {
        self.premises
            .iter()
            .chain(&self.conclusions)
            .map(Term::max_var)
            .max()
            .unwrap_or(0)
            .max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    pub max_unifier: Polyhedron,
    /// Index of the first covered conclusion, when admissible.
    pub witness_conclusion: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projectivity {
    Projective,
    NotProjective,
    /// Necessary conditions hold but contractibility is untested in
    /// dimension two and above.
    Inconclusive,
}

impl std::fmt::Display for Projectivity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Projectivity::Projective => write!(f, "projective"),
            Projectivity::NotProjective => write!(f, "not_projective"),
            Projectivity::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

type CompileCache = Mutex<HashMap<(Term, usize), Arc<PLFunction>>>;

/// Compile cache shared by the decision procedures: terms are pure, so a
/// canonical (term, dimension) key can be filled idempotently.
fn compiled(t: &Term, n: usize) -> Result<Arc<PLFunction>, PlError> {
    static CACHE: OnceLock<CompileCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(t.clone(), n)) {
        return Ok(hit.clone());
    }
    let f = Arc::new(compile(t, n)?);
    cache.lock().unwrap().entry((t.clone(), n)).or_insert_with(|| f.clone());
    Ok(f)
}

fn fold_meet(terms: &[Term]) -> Term {
    let mut it = terms.iter().cloned();
    let first = it.next().expect("nonempty");
    it.fold(first, meet)
}

fn shared_arity(terms: &[&Term]) -> usize {
    terms.iter().map(|t| t.max_var()).max().unwrap_or(0).max(1)
}

/// Does `t = u` hold in every model? Decided over the generating standard
/// algebra: the biimplication must compile to the constant 1.
pub fn valid_identity(t: &Term, u: &Term, mode: Mode) -> Result<bool, DecideError> {
    t.check_mode(mode)?;
    u.check_mode(mode)?;
    let n = shared_arity(&[t, u]);
    let biimp = meet(imp(t.clone(), u.clone()), imp(u.clone(), t.clone()));
    let f = compiled(&biimp, n)?;
    Ok(is_constant_one(&f))
}

/// Counterexample point for an invalid identity: a complex vertex of the
/// biimplication where it dips below 1.
pub fn validity_counterexample(t: &Term, u: &Term) -> Result<Option<Vec<crate::arith::Rat>>, DecideError> {
    let n = shared_arity(&[t, u]);
    let biimp = meet(imp(t.clone(), u.clone()), imp(u.clone(), t.clone()));
    let f = compiled(&biimp, n)?;
    for cell in f.cells() {
        for v in cell.poly.vertices() {
            if !num::One::is_one(&cell.piece.eval(v)) {
                return Ok(Some(v.clone()));
            }
        }
    }
    Ok(None)
}

/// Deducibility `premises |- u`: the folded premise's one-set must lie in
/// the one-set of `u`. For positive terms this verdict is simultaneously
/// the MV entailment.
pub fn entails(premises: &[Term], u: &Term, mode: Mode) -> Result<bool, DecideError> {
    if premises.is_empty() {
        return Err(DecideError::EmptyRule);
    }
    for t in premises {
        t.check_mode(mode)?;
    }
    u.check_mode(mode)?;
    let folded = fold_meet(premises);
    let n = shared_arity(&[&folded, u]);
    let fp = compiled(&folded, n)?;
    let fu = compiled(u, n)?;
    let o = one_set(&fp);
    Ok(covers(&fu, &o)?)
}

/// The maximal coexact unifier of a premise set, as a polyhedron: the
/// connected-through-1 component of the anchored part of the triangulated
/// one-set. The result is connected, strongly regular and pointed, so it
/// presents an exact hoop.
pub fn max_coexact_unifier(premises: &[Term]) -> Result<Polyhedron, DecideError> {
    let n = premises.iter().map(Term::max_var).max().unwrap_or(0).max(1);
    max_coexact_unifier_at(premises, n)
}

/// As [`max_coexact_unifier`], in an explicitly given ambient dimension
/// (a rule's conclusions may use more variables than its premises).
pub fn max_coexact_unifier_at(premises: &[Term], n: usize) -> Result<Polyhedron, DecideError> {
    if premises.is_empty() {
        return Err(DecideError::EmptyRule);
    }
    for t in premises {
        t.check_mode(Mode::Wh)?;
    }
    let folded = fold_meet(premises);
    let fp = compiled(&folded, n)?;
    let o = one_set(&fp);
    let k = triangulate(&o);
    Ok(anchored_component_of_one(&k)?)
}

/// Rule admissibility: the maximal coexact unifier must make some
/// conclusion identically 1. Soundness of the criterion rests on the
/// unitarity of the exact type (every unifier factors through the maximal
/// coexact one).
pub fn admissible(rule: &Rule) -> Result<AdmissibilityVerdict, DecideError> {
    if rule.mode == Mode::Mv {
        return Err(DecideError::MvAdmissibility);
    }
    let n = rule.arity();
    let unifier = max_coexact_unifier_at(&rule.premises, n)?;
    let mut witness = None;
    for (i, u) in rule.conclusions.iter().enumerate() {
        let fu = compiled(u, n)?;
        if covers(&fu, &unifier)? {
            witness = Some(i);
            break;
        }
    }
    Ok(AdmissibilityVerdict {
        admissible: witness.is_some(),
        max_unifier: unifier,
        witness_conclusion: witness,
    })
}

/// Exactness of the finitely presented hoop `W(p)`: `p` must be connected
/// and strongly regular (pointedness is the precondition).
pub fn is_exact_presentation_poly(p: &Polyhedron) -> Result<bool, DecideError> {
    if !p.is_pointed() {
        return Err(DecideError::Geom(GeomError::NotPointed));
    }
    let r = shape_report(p);
    Ok(r.connected && r.strongly_regular)
}

/// Exactness for a wh-mode term: applies to the one-set of its function.
pub fn is_exact_presentation_term(t: &Term) -> Result<bool, DecideError> {
    t.check_mode(Mode::Wh)?;
    let f = compiled(t, t.arity())?;
    let o = one_set(&f);
    is_exact_presentation_poly(&o)
}

/// Projectivity of `W(p)`. In dimension at most 1 the verdict is decisive:
/// a tree-shaped, strongly regular complex. In higher dimension only the
/// necessary conditions (connected, strongly regular) are checked, so the
/// answer is NotProjective or Inconclusive.
pub fn projectivity_report_poly(p: &Polyhedron) -> Result<(Projectivity, ShapeReport), DecideError> {
    if !p.is_pointed() {
        return Err(DecideError::Geom(GeomError::NotPointed));
    }
    let r = shape_report(p);
    let verdict = if r.dimension <= 1 {
        if r.tree1d && r.strongly_regular {
            Projectivity::Projective
        } else {
            Projectivity::NotProjective
        }
    } else if !(r.connected && r.strongly_regular) {
        Projectivity::NotProjective
    } else {
        Projectivity::Inconclusive
    };
    Ok((verdict, r))
}

pub fn projectivity_report_term(t: &Term) -> Result<(Projectivity, ShapeReport), DecideError> {
    t.check_mode(Mode::Wh)?;
    let f = compiled(t, t.arity())?;
    let o = one_set(&f);
    projectivity_report_poly(&o)
}
