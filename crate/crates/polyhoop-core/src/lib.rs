//! Exact polyhedral decision procedures for the positive fragment of
//! infinite-valued Lukasiewicz logic.
//!
//! Terms over the residuated signature compile to piecewise-linear
//! functions with integer coefficients on the unit cube ([`pl`]); their
//! one-sets are rational polyhedra ([`geom`]) on which validity,
//! deducibility, exactness, projectivity and admissibility of rules become
//! polyhedral computations ([`polygeo`], [`decide`]). One-variable one-sets
//! can be turned back into terms ([`synth1d`]), and everything is
//! cross-checkable against brute-force oracles ([`oracle`]).

pub mod arith;
pub mod decide;
pub mod geom;
pub mod io;
pub mod oracle;
pub mod pl;
pub mod polygeo;
pub mod synth1d;
pub mod terms;

pub use arith::{Int, Point, Rat};
pub use decide::{AdmissibilityVerdict, Projectivity, Rule};
pub use geom::{Polyhedron, Polytope};
pub use pl::{AffinePiece, Cell, PLFunction};
pub use polygeo::{ShapeReport, SimplicialComplex};
pub use synth1d::Interval1D;
pub use terms::{Mode, Polarity, Term};
