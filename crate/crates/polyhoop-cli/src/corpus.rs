//! Built-in corpus: the worked examples with their expected verdicts and
//! polyhedra, each run against the engine and, where a rule is declared
//! admissible, cross-checked with the substitution-enumeration oracle.

use polyhoop_core::arith::rat;
use polyhoop_core::decide::{
    admissible, entails, is_exact_presentation_poly, max_coexact_unifier,
    projectivity_report_poly, projectivity_report_term, valid_identity,
};
use polyhoop_core::geom::{poly_equal, Polyhedron, Polytope};
use polyhoop_core::oracle::{
    grid_check, refute_admissibility, Caps, GridKind, GridOutcome, GridSpec,
};
use polyhoop_core::pl::{compile, eval_pl, image, is_constant_one, one_set};
use polyhoop_core::polygeo::covers;
use polyhoop_core::synth1d::synthesize_1d;
use polyhoop_core::terms::{
    eval_term, parse, positive_normal_form, Mode, Polarity, Term,
};
use polyhoop_core::{Projectivity, Rule};

pub struct CorpusOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn wh(s: &str) -> Term {
    parse(s, Mode::Wh).expect("corpus term parses")
}

fn mv(s: &str) -> Term {
    parse(s, Mode::Mv).expect("corpus term parses")
}

pub fn border_term() -> Term {
    wh("(((x -> x^2) -> x) -> x) \\/ (((y -> y^2) -> y) -> y)")
}

fn pt1(n: i64, d: i64) -> Polytope {
    Polytope::new(vec![vec![rat(n, d)]])
}

fn seg1(a: (i64, i64), b: (i64, i64)) -> Polytope {
    Polytope::new(vec![vec![rat(a.0, a.1)], vec![rat(b.0, b.1)]])
}

pub fn square_boundary() -> Polyhedron {
    let e = |a: [i64; 2], b: [i64; 2]| {
        Polytope::new(vec![vec![rat(a[0], 1), rat(a[1], 1)], vec![rat(b[0], 1), rat(b[1], 1)]])
    };
    Polyhedron::new(
        2,
        vec![e([0, 0], [1, 0]), e([0, 0], [0, 1]), e([1, 0], [1, 1]), e([0, 1], [1, 1])],
    )
}

type Check = fn(&Caps) -> Result<(), String>;

fn ensure(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn standard_operations(_: &Caps) -> Result<(), String> {
    let p = vec![rat(3, 4), rat(1, 2)];
    ensure(eval_term(&wh("x*y"), &p).unwrap() == rat(1, 4), "fuse at (3/4,1/2)")?;
    ensure(eval_term(&wh("x->y"), &p).unwrap() == rat(3, 4), "imp at (3/4,1/2)")?;
    ensure(eval_term(&wh("2.x"), &[rat(1, 3)]).unwrap() == rat(2, 3), "2.x at 1/3")
}

fn one_set_of_worked_example(_: &Caps) -> Result<(), String> {
    let os = one_set(&compile(&wh("2.x -> x"), 1).unwrap());
    let expected = Polyhedron::new(1, vec![pt1(0, 1), pt1(1, 1)]);
    ensure(os == expected, "one-set of 2.x -> x is {0,1}")?;
    let os = one_set(&compile(&wh("2.x"), 1).unwrap());
    ensure(os == Polyhedron::new(1, vec![seg1((1, 2), (1, 1))]), "one-set of 2.x is [1/2,1]")?;
    let os = one_set(&compile(&Term::One, 2).unwrap());
    ensure(poly_equal(&os, &Polyhedron::cube(2)), "one-set of 1 is the square")
}

fn validity(caps: &Caps) -> Result<(), String> {
    let pre = wh("(x -> y) \\/ (y -> x)");
    ensure(valid_identity(&pre, &Term::One, Mode::Wh).unwrap(), "prelinearity valid")?;
    ensure(
        grid_check(GridKind::Identity(&pre, &Term::One), &GridSpec { denom: 5, arity: 2 }, caps)
            .unwrap()
            == GridOutcome::Pass,
        "prelinearity passes the D=5 grid",
    )?;
    ensure(
        valid_identity(&wh("x /\\ y"), &wh("y /\\ x"), Mode::Wh).unwrap(),
        "meet commutativity valid",
    )?;
    let t = wh("2.x -> x");
    ensure(!valid_identity(&t, &Term::One, Mode::Wh).unwrap(), "2.x -> x invalid")?;
    ensure(
        grid_check(GridKind::Identity(&t, &Term::One), &GridSpec { denom: 2, arity: 1 }, caps)
            .unwrap()
            == GridOutcome::Counterexample(vec![rat(1, 2)]),
        "grid counterexample at 1/2",
    )
}

fn worked_example_rule(caps: &Caps) -> Result<(), String> {
    ensure(
        !entails(&[wh("2.x -> x")], &wh("2.x"), Mode::Wh).unwrap(),
        "2.x -> x does not entail 2.x",
    )?;
    let rule = Rule::new(vec![wh("2.x -> x")], vec![wh("2.x")], Mode::Wh).unwrap();
    let v = admissible(&rule).unwrap();
    ensure(v.admissible, "the rule is admissible")?;
    ensure(
        v.max_unifier == Polyhedron::new(1, vec![pt1(1, 1)]),
        "max unifier is the singleton {1}",
    )?;
    ensure(
        refute_admissibility(&rule, 4, caps).unwrap().is_none(),
        "oracle finds no refutation at depth 4",
    )?;
    let rule2 = Rule::new(vec![wh("2.x -> x")], vec![wh("x")], Mode::Wh).unwrap();
    ensure(admissible(&rule2).unwrap().admissible, "2.x -> x => x admissible")?;
    ensure(
        refute_admissibility(&rule2, 4, caps).unwrap().is_none(),
        "oracle agrees on 2.x -> x => x",
    )
}

fn non_admissible_rules(caps: &Caps) -> Result<(), String> {
    let r = Rule::new(vec![Term::One], vec![wh("x")], Mode::Wh).unwrap();
    ensure(!admissible(&r).unwrap().admissible, "1 => x not admissible")?;
    let cx = refute_admissibility(&r, 1, caps).unwrap();
    ensure(cx == Some(vec![wh("x")]), "oracle refutes 1 => x with sigma(x)=x")?;
    let r = Rule::new(vec![wh("2.x")], vec![wh("x")], Mode::Wh).unwrap();
    ensure(!admissible(&r).unwrap().admissible, "2.x => x not admissible")?;
    ensure(refute_admissibility(&r, 4, caps).unwrap().is_some(), "oracle refutes 2.x => x")
}

fn border_unification_problem(_: &Caps) -> Result<(), String> {
    let t = border_term();
    let os = one_set(&compile(&t, 2).unwrap());
    let boundary = square_boundary();
    ensure(poly_equal(&os, &boundary), "one-set is the border of the unit square")?;
    ensure(
        covers(&compile(&t, 2).unwrap(), &boundary).unwrap(),
        "the compiled function is 1 on the border",
    )?;
    let u = max_coexact_unifier(std::slice::from_ref(&t)).unwrap();
    ensure(poly_equal(&u, &boundary), "max coexact unifier is the full border")?;
    ensure(is_exact_presentation_poly(&u).unwrap(), "the border presents an exact hoop")?;
    let (verdict, shape) = projectivity_report_term(&t).unwrap();
    ensure(verdict == Projectivity::NotProjective, "the border is not projective")?;
    ensure(shape.dimension == 1 && shape.connected && !shape.tree1d, "border shape: 1d cycle")
}

fn interval_family(_: &Caps) -> Result<(), String> {
    for n in 2..=5i64 {
        let t = wh(&format!("x -> x^{n}"));
        let f = compile(&t, 1).unwrap();
        let img = image(std::slice::from_ref(&f), &Polyhedron::cube(1)).unwrap();
        let expected = Polyhedron::new(1, vec![seg1((1, n), (1, 1))]);
        ensure(poly_equal(&img, &expected), "image of x -> x^n is [1/n,1]")?;
    }
    for n in 1..=5i64 {
        let p = Polyhedron::new(1, vec![seg1((1, n), (1, 1))]);
        ensure(is_exact_presentation_poly(&p).unwrap(), "[1/n,1] is exact")?;
        let (v, _) = projectivity_report_poly(&p).unwrap();
        ensure(v == Projectivity::Projective, "[1/n,1] is projective")?;
    }
    Ok(())
}

fn finite_chain_family(_: &Caps) -> Result<(), String> {
    // W_2 is presented by {0,1}; W_n for n >= 3 by {1/(n-1), 1}
    let mut presentations = vec![Polyhedron::new(1, vec![pt1(0, 1), pt1(1, 1)])];
    for n in 3..=5i64 {
        presentations.push(Polyhedron::new(1, vec![pt1(1, n - 1), pt1(1, 1)]));
    }
    for p in &presentations {
        ensure(!is_exact_presentation_poly(p).unwrap(), "finite chain presentation not exact")?;
        let (v, _) = projectivity_report_poly(p).unwrap();
        ensure(v == Projectivity::NotProjective, "finite chain not projective")?;
    }
    Ok(())
}

fn normal_form_rewrites(_: &Caps) -> Result<(), String> {
    use polyhoop_core::terms::{fuse, imp, var};
    let cases: Vec<(Term, Polarity, Term)> = vec![
        (mv("~(x*~y)"), Polarity::Positive, imp(var(1), var(2))),
        (mv("~x->~y"), Polarity::Positive, imp(var(2), var(1))),
        (
            mv("~(~x*~y)"),
            Polarity::Positive,
            imp(imp(var(1), fuse(var(1), var(2))), var(2)),
        ),
        (Term::Zero, Polarity::Negative, Term::One),
    ];
    for (input, pol, expected) in cases {
        let got = positive_normal_form(&input);
        ensure(got == (pol, expected.clone()), "normal form rewrite")?;
    }
    Ok(())
}

fn wajsberg_top_value(_: &Caps) -> Result<(), String> {
    for s in ["x", "2.x", "x^3", "2.x -> x", "x*y", "(x -> y) \\/ (y -> x)"] {
        let t = wh(s);
        let n = t.arity();
        let f = compile(&t, n).unwrap();
        let top = vec![rat(1, 1); n];
        ensure(eval_pl(&f, &top).unwrap() == rat(1, 1), "wh function is 1 at the top")?;
        ensure(one_set(&f).is_pointed(), "wh one-set is pointed")?;
    }
    ensure(is_constant_one(&compile(&Term::One, 1).unwrap()), "constant 1")
}

fn synthesis_examples(_: &Caps) -> Result<(), String> {
    use polyhoop_core::terms::{scale, var};
    let t = synthesize_1d(&Polyhedron::new(1, vec![pt1(1, 1)])).unwrap();
    ensure(t == var(1), "{1} synthesizes to x")?;
    let t = synthesize_1d(&Polyhedron::new(1, vec![seg1((1, 2), (1, 1))])).unwrap();
    ensure(t == scale(2, var(1)), "[1/2,1] synthesizes to 2.x")?;
    let p = Polyhedron::new(1, vec![pt1(0, 1), pt1(1, 1)]);
    let t = synthesize_1d(&p).unwrap();
    ensure(poly_equal(&one_set(&compile(&t, 1).unwrap()), &p), "{0,1} round-trips")?;
    ensure(
        valid_identity(&t, &wh("2.x -> x"), Mode::Wh).unwrap(),
        "{0,1} synthesis is equivalent to 2.x -> x",
    )
}

pub const ENTRIES: &[(&str, Check)] = &[
    ("standard-operations", standard_operations),
    ("one-set-worked-example", one_set_of_worked_example),
    ("validity", validity),
    ("worked-example-rule", worked_example_rule),
    ("non-admissible-rules", non_admissible_rules),
    ("border-unification-problem", border_unification_problem),
    ("interval-family", interval_family),
    ("finite-chain-family", finite_chain_family),
    ("normal-form-rewrites", normal_form_rewrites),
    ("wajsberg-top-value", wajsberg_top_value),
    ("synthesis-examples", synthesis_examples),
];

pub fn run_corpus(caps: &Caps) -> Vec<CorpusOutcome> {
    ENTRIES
        .iter()
        .map(|(name, check)| match check(caps) {
            Ok(()) => CorpusOutcome { name, pass: true, detail: String::new() },
            Err(e) => CorpusOutcome { name, pass: false, detail: e },
        })
        .collect()
}

/// Rules the engine declares admissible, for oracle cross-checks.
pub fn admissible_corpus_rules() -> Vec<Rule> {
    vec![
        Rule::new(vec![wh("2.x -> x")], vec![wh("2.x")], Mode::Wh).unwrap(),
        Rule::new(vec![wh("2.x -> x")], vec![wh("x")], Mode::Wh).unwrap(),
        Rule::new(vec![wh("x -> x^2")], vec![wh("x -> x^2")], Mode::Wh).unwrap(),
        Rule::new(vec![wh("x*y")], vec![wh("x")], Mode::Wh).unwrap(),
        Rule::new(vec![wh("x /\\ y")], vec![wh("y")], Mode::Wh).unwrap(),
        Rule::new(vec![border_term()], vec![border_term()], Mode::Wh).unwrap(),
    ]
}
