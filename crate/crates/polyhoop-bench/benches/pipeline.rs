use criterion::{criterion_group, criterion_main, Criterion};

use polyhoop_core::arith::{int, smith_normal_form, IntMatrix};
use polyhoop_core::decide::{admissible, max_coexact_unifier};
use polyhoop_core::geom::Polyhedron;
use polyhoop_core::pl::{compile, image, one_set};
use polyhoop_core::polygeo::triangulate;
use polyhoop_core::terms::{parse, Mode, Term};
use polyhoop_core::Rule;

fn wh(s: &str) -> Term {
    parse(s, Mode::Wh).unwrap()
}

fn border() -> Term {
    wh("(((x -> x^2) -> x) -> x) \\/ (((y -> y^2) -> y) -> y)")
}

fn bench_compile(c: &mut Criterion) {
    let t = border();
    c.bench_function("compile border term", |b| b.iter(|| compile(&t, 2).unwrap()));
    let u = wh("x -> x^5");
    c.bench_function("compile x -> x^5", |b| b.iter(|| compile(&u, 1).unwrap()));
}

fn bench_one_set(c: &mut Criterion) {
    let f = compile(&border(), 2).unwrap();
    c.bench_function("one-set of border term", |b| b.iter(|| one_set(&f)));
}

fn bench_triangulate(c: &mut Criterion) {
    let os = one_set(&compile(&border(), 2).unwrap());
    c.bench_function("triangulate border one-set", |b| b.iter(|| triangulate(&os)));
}

fn bench_unifier(c: &mut Criterion) {
    let t = border();
    c.bench_function("max coexact unifier (border)", |b| {
        b.iter(|| max_coexact_unifier(std::slice::from_ref(&t)).unwrap())
    });
    let rule = Rule::new(vec![wh("2.x -> x")], vec![wh("2.x")], Mode::Wh).unwrap();
    c.bench_function("admissible (worked example)", |b| b.iter(|| admissible(&rule).unwrap()));
}

fn bench_image(c: &mut Criterion) {
    let f = compile(&wh("x -> x^4"), 1).unwrap();
    let cube = Polyhedron::cube(1);
    c.bench_function("image of [0,1] under x -> x^4", |b| {
        b.iter(|| image(std::slice::from_ref(&f), &cube).unwrap())
    });
}

fn bench_smith(c: &mut Criterion) {
    let a = IntMatrix::from_rows(vec![
        vec![int(6), int(4), int(10)],
        vec![int(-4), int(8), int(2)],
        vec![int(12), int(-6), int(9)],
    ]);
    c.bench_function("smith normal form 3x3", |b| b.iter(|| smith_normal_form(&a)));
}

criterion_group!(
    benches,
    bench_compile,
    bench_one_set,
    bench_triangulate,
    bench_unifier,
    bench_image,
    bench_smith
);
criterion_main!(benches);
