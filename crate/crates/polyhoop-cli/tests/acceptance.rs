//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line through the harness. All arithmetic is exact; every comparison is
//! equality of rationals or of point sets, with zero tolerance.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyhoop_cli::corpus::{admissible_corpus_rules, border_term, square_boundary};
use polyhoop_core::arith::{affine_hull, int, lcd, rat, IntMatrix, Rat};
use polyhoop_core::decide::{
    admissible, entails, is_exact_presentation_poly, max_coexact_unifier,
    projectivity_report_poly, valid_identity,
};
use polyhoop_core::geom::{poly_equal, poly_subset, Polyhedron, Polytope};
use polyhoop_core::oracle::{
    grid_check, integer_search_bruteforce, random_point, random_term, refute_admissibility, Caps,
    GridKind, GridOutcome, GridSpec,
};
use polyhoop_core::pl::{compile, eval_pl, image, one_set};
use polyhoop_core::polygeo::{covers, is_anchored, triangulate};
use polyhoop_core::synth1d::synthesize_1d;
use polyhoop_core::terms::{
    eval_term, imp, meet, parse, positive_normal_form, Mode, Polarity, Term,
};
use polyhoop_core::{Projectivity, Rule};

fn wh(s: &str) -> Term {
    parse(s, Mode::Wh).unwrap()
}

fn pt1(n: i64, d: i64) -> Polytope {
    Polytope::new(vec![vec![rat(n, d)]])
}

fn seg1(a: (i64, i64), b: (i64, i64)) -> Polytope {
    Polytope::new(vec![vec![rat(a.0, a.1)], vec![rat(b.0, b.1)]])
}

#[test]
fn criterion_01_worked_example() {
    let start = Instant::now();
    let os = one_set(&compile(&wh("2.x -> x"), 1).unwrap());
    assert_eq!(os, Polyhedron::new(1, vec![pt1(0, 1), pt1(1, 1)]), "one-set of 2.x -> x");
    let os2 = one_set(&compile(&wh("2.x"), 1).unwrap());
    assert_eq!(os2, Polyhedron::new(1, vec![seg1((1, 2), (1, 1))]), "one-set of 2.x");
    assert!(!entails(&[wh("2.x -> x")], &wh("2.x"), Mode::Wh).unwrap(), "no entailment");
    let rule = Rule::new(vec![wh("2.x -> x")], vec![wh("2.x")], Mode::Wh).unwrap();
    let verdict = admissible(&rule).unwrap();
    assert!(verdict.admissible, "rule admissible");
    assert_eq!(
        verdict.max_unifier,
        Polyhedron::new(1, vec![pt1(1, 1)]),
        "max unifier is exactly {{1}}"
    );
    assert!(start.elapsed().as_secs_f64() < 1.0, "criterion 1 under one second");
    println!("criterion 01 worked example: PASS");
}

#[test]
fn criterion_02_border_term() {
    let start = Instant::now();
    let t = border_term();
    let f = compile(&t, 2).unwrap();
    let os = one_set(&f);
    let boundary = square_boundary();
    // mutual covers: the function is 1 on the four edges, and the computed
    // one-set lies inside them
    assert!(covers(&f, &boundary).unwrap(), "edges inside the one-set");
    assert!(poly_subset(&os, &boundary).is_none(), "one-set inside the edges");
    let unifier = max_coexact_unifier(std::slice::from_ref(&t)).unwrap();
    assert!(poly_equal(&unifier, &boundary), "max coexact unifier is the full border");
    let (verdict, _) = projectivity_report_poly(&os).unwrap();
    assert_eq!(verdict, Projectivity::NotProjective, "border is a cycle");
    assert!(is_exact_presentation_poly(&os).unwrap(), "border presents an exact hoop");
    assert!(start.elapsed().as_secs_f64() < 5.0, "criterion 2 under five seconds");
    println!("criterion 02 border term: PASS");
}

#[test]
fn criterion_03_interval_images() {
    for n in 2..=5i64 {
        let t = wh(&format!("x -> x^{n}"));
        let f = compile(&t, 1).unwrap();
        let img = image(std::slice::from_ref(&f), &Polyhedron::cube(1)).unwrap();
        let expected = Polyhedron::new(1, vec![seg1((1, n), (1, 1))]);
        assert!(poly_equal(&img, &expected), "image of x -> x^{n} is [1/{n},1]");
        let bp = rat(n - 1, n);
        let val = rat(1, n);
        assert!(
            f.cells().iter().any(|c| c
                .poly
                .vertices()
                .iter()
                .any(|v| v[0] == bp && c.piece.eval(v) == val)),
            "breakpoint vertex (({n}-1)/{n}, 1/{n}) present"
        );
    }
    println!("criterion 03 interval images: PASS");
}

#[test]
fn criterion_04_finite_chains_and_intervals() {
    // W_2 is presented by {0,1}; the 1/(n-1) formula degenerates at n=2
    let mut chain_polys = vec![Polyhedron::new(1, vec![pt1(0, 1), pt1(1, 1)])];
    for n in 3..=5i64 {
        chain_polys.push(Polyhedron::new(1, vec![pt1(1, n - 1), pt1(1, 1)]));
    }
    for p in &chain_polys {
        assert!(!is_exact_presentation_poly(p).unwrap(), "finite chain is not exact");
        let (v, _) = projectivity_report_poly(p).unwrap();
        assert_eq!(v, Projectivity::NotProjective, "finite chain is not projective");
    }
    for n in 1..=5i64 {
        let p = Polyhedron::new(1, vec![seg1((1, n), (1, 1))]);
        assert!(is_exact_presentation_poly(&p).unwrap(), "[1/{n},1] is exact");
        let (v, _) = projectivity_report_poly(&p).unwrap();
        assert_eq!(v, Projectivity::Projective, "[1/{n},1] is projective");
    }
    println!("criterion 04 finite chains and intervals: PASS");
}

#[test]
fn criterion_05_compile_agrees_with_direct_evaluation() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut disagreements = 0usize;
    for case in 0..200 {
        let arity = rng.gen_range(1..=2);
        let depth = rng.gen_range(1..=6);
        let t = random_term(&mut rng, arity, depth, Mode::Wh);
        let f = compile(&t, arity).unwrap();
        for _ in 0..50 {
            let p = random_point(&mut rng, arity, 9);
            let direct = eval_term(&t, &p).unwrap();
            let pl = eval_pl(&f, &p).unwrap();
            if direct != pl {
                disagreements += 1;
                eprintln!("case {case}: {t} at {p:?}: {direct} vs {pl}");
            }
        }
    }
    assert_eq!(disagreements, 0, "compile/evaluate disagreements");
    assert!(start.elapsed().as_secs_f64() < 60.0, "criterion 5 under a minute");
    println!("criterion 05 oracle equivalence (200 terms x 50 points): PASS");
}

#[test]
fn criterion_06_normal_form_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let denom = 7i64;
    let mut disagreements = 0usize;
    for case in 0..100 {
        let arity = rng.gen_range(1..=2);
        let depth = rng.gen_range(1..=5);
        let t = random_term(&mut rng, arity, depth, Mode::Mv);
        let (polarity, nf) = positive_normal_form(&t);
        assert!(nf.is_wh(), "normal form must be 0/~-free: {t} -> {nf}");
        // polarity equals the value at the top vertex
        let top = vec![rat(1, 1); arity];
        let at_top = eval_term(&t, &top).unwrap();
        let polarity_ok = match polarity {
            Polarity::Positive => at_top == rat(1, 1),
            Polarity::Negative => at_top == rat(0, 1),
        };
        if !polarity_ok {
            disagreements += 1;
            eprintln!("case {case}: polarity mismatch for {t}");
            continue;
        }
        // pointwise equality modulo polarity on the full grid
        let mut idx = vec![0i64; arity];
        'grid: loop {
            let p: Vec<Rat> = idx.iter().map(|&i| rat(i, denom)).collect();
            let lhs = eval_term(&t, &p).unwrap();
            let rhs = eval_term(&nf, &p).unwrap();
            let expected = match polarity {
                Polarity::Positive => rhs.clone(),
                Polarity::Negative => rat(1, 1) - rhs.clone(),
            };
            if lhs != expected {
                disagreements += 1;
                eprintln!("case {case}: {t} vs {nf} at {p:?}");
                break 'grid;
            }
            let mut k = arity;
            loop {
                if k == 0 {
                    break 'grid;
                }
                k -= 1;
                if idx[k] < denom {
                    idx[k] += 1;
                    for slot in idx.iter_mut().skip(k + 1) {
                        *slot = 0;
                    }
                    break;
                }
            }
        }
    }
    assert_eq!(disagreements, 0, "normal form disagreements");
    println!("criterion 06 normal form suite (100 terms, grid 1/7): PASS");
}

#[test]
fn criterion_07_validity_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let caps = Caps { grid_points: 20_000_000, subst_terms: 100_000 };
    for case in 0..100 {
        let arity = rng.gen_range(1..=2);
        let depth = rng.gen_range(1..=4);
        let t = random_term(&mut rng, arity, depth, Mode::Wh);
        let u = if rng.gen_bool(0.5) {
            Term::One
        } else {
            random_term(&mut rng, arity, depth, Mode::Wh)
        };
        let verdict = valid_identity(&t, &u, Mode::Wh).unwrap();
        // grid resolution: the least D whose grid contains every vertex of
        // the compiled biimplication complex
        let biimp = meet(imp(t.clone(), u.clone()), imp(u.clone(), t.clone()));
        let f = compile(&biimp, arity).unwrap();
        let mut d = int(1);
        for cell in f.cells() {
            for v in cell.poly.vertices() {
                d = num::Integer::lcm(&d, &lcd(v));
            }
        }
        let d: u64 = u64::try_from(d).expect("grid denominators fit u64");
        let spec = GridSpec { denom: d, arity };
        let outcome = grid_check(GridKind::Identity(&t, &u), &spec, &caps)
            .unwrap_or_else(|e| panic!("case {case}: grid {d} failed: {e}"));
        match (verdict, outcome) {
            (true, GridOutcome::Pass) => {}
            (false, GridOutcome::Counterexample(_)) => {}
            (v, o) => panic!("case {case}: {t} = {u}: verdict {v} but grid said {o:?}"),
        }
    }
    println!("criterion 07 validity suite (100 identities): PASS");
}

#[test]
fn criterion_08_anchoredness_oracle() {
    let caps = Caps::default();
    // simplices arising from criteria 1-4
    let mut polyhedra: Vec<Polyhedron> = vec![
        one_set(&compile(&wh("2.x -> x"), 1).unwrap()),
        one_set(&compile(&wh("2.x"), 1).unwrap()),
        max_coexact_unifier(&[wh("2.x -> x")]).unwrap(),
        one_set(&compile(&border_term(), 2).unwrap()),
        max_coexact_unifier(&[border_term()]).unwrap(),
        Polyhedron::new(1, vec![pt1(0, 1), pt1(1, 1)]),
    ];
    for n in 3..=5i64 {
        polyhedra.push(Polyhedron::new(1, vec![pt1(1, n - 1), pt1(1, 1)]));
    }
    for n in 1..=5i64 {
        polyhedra.push(Polyhedron::new(1, vec![seg1((1, n), (1, 1))]));
    }
    let mut checked = 0usize;
    for p in &polyhedra {
        let k = triangulate(p);
        for s in k.simplices() {
            let poly = Polytope::new(k.simplex_points(s));
            let engine = is_anchored(&poly);
            let hull = affine_hull(poly.vertices()).unwrap();
            let brute = integer_search_bruteforce(
                &IntMatrix::from_rows(hull.rows.iter().map(|r| r.coeffs.clone()).collect()),
                &hull.rows.iter().map(|r| r.rhs.clone()).collect::<Vec<_>>(),
                5,
                &caps,
            )
            .unwrap();
            if brute.is_some() {
                assert!(engine, "brute witness but engine says unanchored: {poly:?}");
            }
            if !engine {
                assert!(brute.is_none(), "engine unanchored but brute found witness");
            }
            checked += 1;
        }
    }
    assert!(checked >= 30, "enough simplices exercised ({checked})");
    // 100 random small systems
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let rows = rng.gen_range(1..=2);
        let cols = rng.gen_range(1..=3);
        let mut a = IntMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                *a.at_mut(i, j) = int(rng.gen_range(-3..=3));
            }
        }
        let b: Vec<_> = if rng.gen_bool(0.5) {
            let x: Vec<_> = (0..cols).map(|_| int(rng.gen_range(-2..=2))).collect();
            a.mul_vec(&x)
        } else {
            (0..rows).map(|_| int(rng.gen_range(-3..=3))).collect()
        };
        let solver = polyhoop_core::arith::integer_solvable(&a, &b).unwrap();
        let brute = integer_search_bruteforce(&a, &b, 5, &caps).unwrap();
        if let Some(w) = &brute {
            assert!(solver.is_some(), "brute found {w:?} but solver says unsolvable");
        }
        if let Some(w) = &solver {
            assert_eq!(a.mul_vec(w), b, "solver witness must satisfy the system");
        }
        if solver.is_none() {
            assert!(brute.is_none());
        }
    }
    println!("criterion 08 anchoredness oracle ({checked} simplices + 100 systems): PASS");
}

#[test]
fn criterion_09_admissibility_cross_check() {
    let caps = Caps::default();
    for rule in admissible_corpus_rules() {
        let verdict = admissible(&rule).unwrap();
        assert!(verdict.admissible, "corpus rule must be admissible");
        assert_eq!(
            refute_admissibility(&rule, 4, &caps).unwrap(),
            None,
            "oracle must not refute an admissible rule"
        );
    }
    // and the oracle does refute the non-admissible ones
    let r = Rule::new(vec![Term::One], vec![wh("x")], Mode::Wh).unwrap();
    assert!(!admissible(&r).unwrap().admissible);
    assert_eq!(
        refute_admissibility(&r, 4, &caps).unwrap(),
        Some(vec![wh("x")]),
        "1 => x refuted by the identity substitution"
    );
    // premise 2.x has max unifier [1/2,1]; conclusions not 1 there fail
    for concl in ["x", "x*x"] {
        let r = Rule::new(vec![wh("2.x")], vec![wh(concl)], Mode::Wh).unwrap();
        assert!(!admissible(&r).unwrap().admissible, "2.x => {concl} is not admissible");
        assert!(
            refute_admissibility(&r, 4, &caps).unwrap().is_some(),
            "oracle refutes 2.x => {concl}"
        );
    }
    println!("criterion 09 admissibility cross-check: PASS");
}

#[test]
fn criterion_10_synthesis_gate() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..50 {
        let k = rng.gen_range(1..=4);
        let mut polys: Vec<Polytope> = Vec::new();
        for _ in 0..k - 1 {
            let d = rng.gen_range(1..=12);
            let a = rng.gen_range(0..=d);
            if rng.gen_bool(0.3) {
                polys.push(pt1(a, d));
            } else {
                let b = rng.gen_range(a..=d);
                polys.push(seg1((a, d), (b, d)));
            }
        }
        // last component contains 1 to keep the polyhedron pointed
        if rng.gen_bool(0.4) {
            polys.push(pt1(1, 1));
        } else {
            let d = rng.gen_range(1..=12);
            let a = rng.gen_range(0..=d);
            polys.push(seg1((a, d), (1, 1)));
        }
        let p = Polyhedron::new(1, polys);
        let t = synthesize_1d(&p).unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert!(t.is_wh(), "case {case}: synthesized term must be positive");
        let os = one_set(&compile(&t, 1).unwrap());
        assert!(poly_equal(&os, &p), "case {case}: one-set of {t} differs from input");
    }
    assert!(start.elapsed().as_secs_f64() < 60.0, "criterion 10 under a minute");
    println!("criterion 10 synthesis gate (50 random polyhedra): PASS");
}

#[test]
fn criterion_11_figure_reproduction() {
    let bin = env!("CARGO_BIN_EXE_polyhoop");
    let dir = std::env::temp_dir().join("polyhoop-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let render = |name: &str, args: &[&str]| -> Vec<u8> {
        let path = dir.join(name);
        let status = std::process::Command::new(bin)
            .args(args)
            .arg("-o")
            .arg(&path)
            .status()
            .expect("binary runs");
        assert!(status.success());
        std::fs::read(&path).unwrap()
    };
    // interval-generator figure (n = 3) twice
    let fig1a = render("fig1a.svg", &["plot", "x -> x^3"]);
    let fig1b = render("fig1b.svg", &["plot", "x -> x^3"]);
    assert_eq!(fig1a, fig1b, "figure 1 must be byte-identical across runs");
    let fig1 = String::from_utf8(fig1a).unwrap();
    // breakpoint x = 2/3 -> svg x = 20 + 480*(2/3) = 340
    assert!(fig1.contains("340.0000,340.0000"), "figure 1 breakpoint at x = 2/3");

    // worked-example overlay twice
    let fig2a = render("fig2a.svg", &["plot", "2.x -> x", "2.x"]);
    let fig2b = render("fig2b.svg", &["plot", "2.x -> x", "2.x"]);
    assert_eq!(fig2a, fig2b, "figure 2 must be byte-identical across runs");
    let fig2 = String::from_utf8(fig2a).unwrap();
    // breakpoints at x = 1/2 -> svg x = 260 for both graphs
    assert!(fig2.contains("260.0000,260.0000"), "first graph breaks at (1/2, 1/2)");
    assert!(fig2.contains("260.0000,20.0000"), "second graph reaches 1 at x = 1/2");
    println!("criterion 11 figure reproduction: PASS");
}
