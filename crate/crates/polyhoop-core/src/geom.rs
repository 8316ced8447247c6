//! Exact convex geometry over the rationals: polytopes in vertex form with
//! cached half-space descriptions, hyperplane cuts, and point-set predicates
//! on finite unions of polytopes.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num::{Integer, One, Signed, Zero};
use thiserror::Error;

use crate::arith::{affine_hull, kernel_basis, rank, AffineSubspace, Int, LinearEq, Point, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polyhedron is not pointed")]
    NotPointed,
}

/// The vertex (1, ..., 1).
pub fn ones(n: usize) -> Point {
    vec![Rat::one(); n]
}

pub fn is_ones(p: &[Rat]) -> bool {
    p.iter().all(|c| c.is_one())
}

/// Closed half-space `a . x >= c` with integer-cleared data.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub a: Vec<Int>,
    pub c: Int,
}

impl Halfspace {
    /// Clears denominators and divides by the gcd, keeping the sign (the
    /// inequality's direction is meaningful).
    pub fn from_rational(a: &[Rat], c: &Rat) -> Halfspace {
        let mut den = c.denom().clone();
        for x in a {
            den = den.lcm(x.denom());
        }
        let scale = Rat::from_integer(den);
        let mut ia: Vec<Int> = a.iter().map(|x| (x * &scale).to_integer()).collect();
        let mut ic = (c * &scale).to_integer();
        let mut g = ic.abs();
        for x in &ia {
            g = g.gcd(x);
        }
        if !g.is_zero() && !g.is_one() {
            for x in &mut ia {
                *x /= &g;
            }
            ic /= &g;
        }
        Halfspace { a: ia, c: ic }
    }

    /// a . p - c
    pub fn eval(&self, p: &[Rat]) -> Rat {
        let mut acc = -Rat::from_integer(self.c.clone());
        for (coef, x) in self.a.iter().zip(p) {
            acc += Rat::from_integer(coef.clone()) * x;
        }
        acc
    }

    pub fn satisfied_by(&self, p: &[Rat]) -> bool {
        !self.eval(p).is_negative()
    }

    /// The boundary hyperplane, sign-normalized for deduplication.
    pub fn hyperplane(&self) -> LinearEq {
        let a: Vec<Rat> = self.a.iter().map(|x| Rat::from_integer(x.clone())).collect();
        LinearEq::from_rational(&a, &Rat::from_integer(self.c.clone()))
    }
}

/// Half-space description: hull equations plus facet inequalities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRepr {
    pub hull: AffineSubspace,
    pub facets: Vec<Halfspace>,
}

impl HRepr {
    pub fn contains(&self, p: &[Rat]) -> bool {
        self.hull.contains(p) && self.facets.iter().all(|h| h.satisfied_by(p))
    }
}

/// Convex hull of finitely many rational points, stored as its canonical
/// extreme-point list (sorted lexicographically).
#[derive(Debug, Clone)]
pub struct Polytope {
    verts: Vec<Point>,
    hr: OnceLock<HRepr>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.verts == other.verts
    }
}
impl Eq for Polytope {}
impl PartialOrd for Polytope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Polytope {
    fn cmp(&self, other: &Self) -> Ordering {
        self.verts.cmp(&other.verts)
    }
}
impl std::hash::Hash for Polytope {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.verts.hash(state);
    }
}

impl Polytope {
    pub fn new(points: Vec<Point>) -> Polytope {
        assert!(!points.is_empty(), "polytope needs at least one point");
        let verts = extreme_points(&points);
        Polytope { verts, hr: OnceLock::new() }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.verts
    }

    pub fn ambient(&self) -> usize {
        self.verts[0].len()
    }

    /// Affine dimension.
    pub fn dim(&self) -> usize {
        let p0 = &self.verts[0];
        let dirs: Vec<Vec<Rat>> = self.verts[1..]
            .iter()
            .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
            .collect();
        rank(&dirs)
    }

    pub fn hrepr(&self) -> &HRepr {
        self.hr.get_or_init(|| {
            let hull = affine_hull(&self.verts).expect("nonempty");
            let facets = facet_inequalities(&self.verts, &hull);
            HRepr { hull, facets }
        })
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.hrepr().contains(p)
    }

    /// Average of the vertices; lies in the relative interior.
    pub fn centroid(&self) -> Point {
        let n = self.ambient();
        let k = Rat::from_integer(Int::from(self.verts.len()));
        (0..n)
            .map(|j| self.verts.iter().map(|v| v[j].clone()).sum::<Rat>() / k.clone())
            .collect()
    }
}

/// Exact feasibility of `{x >= 0 : a x = b}` by phase-one simplex with
/// Bland's rule (terminating, no tolerances).
#[allow(clippy::needless_range_loop)] // in-place tableau pivoting
pub fn lp_feasible(a: &[Vec<Rat>], b: &[Rat]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let k = a[0].len();
    let cols = k + m + 1;
    let mut t = vec![vec![Rat::zero(); cols]; m];
    for i in 0..m {
        let neg = b[i].is_negative();
        for j in 0..k {
            t[i][j] = if neg { -a[i][j].clone() } else { a[i][j].clone() };
        }
        t[i][k + i] = Rat::one();
        t[i][cols - 1] = if neg { -b[i].clone() } else { b[i].clone() };
    }
    let mut basis: Vec<usize> = (k..k + m).collect();
    loop {
        let mut enter = None;
        for j in 0..k + m {
            if basis.contains(&j) {
                continue;
            }
            let cj = if j >= k { Rat::one() } else { Rat::zero() };
            let mut z = cj;
            for i in 0..m {
                if basis[i] >= k {
                    z -= t[i][j].clone();
                }
            }
            if z.is_negative() {
                enter = Some(j);
                break;
            }
        }
        let Some(je) = enter else { break };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if t[i][je].is_positive() {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let ri = t[i][cols - 1].clone() / t[i][je].clone();
                        let rl = t[l][cols - 1].clone() / t[l][je].clone();
                        match ri.cmp(&rl) {
                            Ordering::Less => true,
                            Ordering::Equal => basis[i] < basis[l],
                            Ordering::Greater => false,
                        }
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        // phase-one objective is bounded below, so a pivot column always
        // has a positive entry
        let il = leave.expect("phase-one ratio test");
        let piv = t[il][je].clone();
        for x in t[il].iter_mut() {
            *x /= piv.clone();
        }
        for i in 0..m {
            if i != il && !t[i][je].is_zero() {
                let f = t[i][je].clone();
                for j in 0..cols {
                    let v = t[il][j].clone() * f.clone();
                    t[i][j] -= v;
                }
            }
        }
        basis[il] = je;
    }
    let obj: Rat = (0..m).filter(|&i| basis[i] >= k).map(|i| t[i][cols - 1].clone()).sum();
    obj.is_zero()
}

/// Is `p` in the convex hull of `verts`?
pub fn point_in_hull(p: &[Rat], verts: &[Point]) -> bool {
    if verts.is_empty() {
        return false;
    }
    let n = p.len();
    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(n + 1);
    for j in 0..n {
        a.push(verts.iter().map(|v| v[j].clone()).collect());
    }
    a.push(vec![Rat::one(); verts.len()]);
    let mut b: Vec<Rat> = p.to_vec();
    b.push(Rat::one());
    lp_feasible(&a, &b)
}

/// Coordinates of each point in a greedily chosen affine basis.
/// Returns (affine dimension, per-point coordinates).
fn affine_coordinates(pts: &[Point]) -> (usize, Vec<Vec<Rat>>) {
    let p0 = &pts[0];
    let n = p0.len();
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for p in &pts[1..] {
        let d: Vec<Rat> = p.iter().zip(p0).map(|(a, b)| a - b).collect();
        let mut with = basis.clone();
        with.push(d.clone());
        if rank(&with) > basis.len() {
            basis.push(d);
        }
    }
    let dim = basis.len();
    if dim == 0 {
        return (0, vec![Vec::new(); pts.len()]);
    }
    // solve basis^T . lambda = p - p0 for each point
    let coords = pts
        .iter()
        .map(|p| {
            let d: Vec<Rat> = p.iter().zip(p0).map(|(a, b)| a - b).collect();
            let mut aug: Vec<Vec<Rat>> = (0..n)
                .map(|row| {
                    let mut r: Vec<Rat> = basis.iter().map(|bv| bv[row].clone()).collect();
                    r.push(d[row].clone());
                    r
                })
                .collect();
            let pivots = crate::arith::rref(&mut aug);
            let mut lambda = vec![Rat::zero(); dim];
            for (r, &pc) in aug.iter().zip(&pivots) {
                debug_assert!(pc < dim, "inconsistent system");
                lambda[pc] = r[dim].clone();
            }
            lambda
        })
        .collect();
    (dim, coords)
}

fn cross2(o: &[Rat], a: &[Rat], b: &[Rat]) -> Rat {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Extreme points of a finite point set, sorted lexicographically.
/// Dimensions 0-2 go through exact convex-hull chains; higher dimensions
/// use LP membership filtering.
pub fn extreme_points(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 1 {
        return pts;
    }
    let (dim, coords) = affine_coordinates(&pts);
    match dim {
        0 => vec![pts[0].clone()],
        1 => {
            let mut lo = 0;
            let mut hi = 0;
            for (i, c) in coords.iter().enumerate() {
                if c[0] < coords[lo][0] {
                    lo = i;
                }
                if c[0] > coords[hi][0] {
                    hi = i;
                }
            }
            let mut out = vec![pts[lo].clone(), pts[hi].clone()];
            out.sort();
            out
        }
        2 => {
            // Andrew's monotone chain, strict turns only
            let mut idx: Vec<usize> = (0..pts.len()).collect();
            idx.sort_by(|&i, &j| coords[i].cmp(&coords[j]));
            let mut hull: Vec<usize> = Vec::new();
            for pass in 0..2 {
                let start = hull.len();
                let iter: Box<dyn Iterator<Item = &usize>> =
                    if pass == 0 { Box::new(idx.iter()) } else { Box::new(idx.iter().rev()) };
                for &i in iter {
                    while hull.len() >= start + 2 {
                        let o = hull[hull.len() - 2];
                        let a = hull[hull.len() - 1];
                        if cross2(&coords[o], &coords[a], &coords[i]).is_positive() {
                            break;
                        }
                        hull.pop();
                    }
                    hull.push(i);
                }
                hull.pop();
            }
            let mut out: Vec<Point> = hull.into_iter().map(|i| pts[i].clone()).collect();
            out.sort();
            out.dedup();
            out
        }
        _ => {
            let mut out = Vec::new();
            for i in 0..pts.len() {
                let others: Vec<Point> = pts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, p)| p.clone())
                    .collect();
                if !point_in_hull(&pts[i], &others) {
                    out.push(pts[i].clone());
                }
            }
            out
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] != i + n - k {
                break;
            }
        }
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Facet inequalities of `conv(verts)` inside its affine hull, by exhaustive
/// search over dim-sized vertex subsets. Exact; intended for the small
/// polytopes this library produces.
fn facet_inequalities(verts: &[Point], hull: &AffineSubspace) -> Vec<Halfspace> {
    let n = hull.ambient;
    let d = n - hull.rows.len();
    if d == 0 {
        return Vec::new();
    }
    let eq_normals: Vec<Vec<Rat>> = hull
        .rows
        .iter()
        .map(|r| r.coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect())
        .collect();
    let eq_rank = eq_normals.len();
    let mut out: Vec<Halfspace> = Vec::new();
    for subset in combinations(verts.len(), d) {
        let s0 = &verts[subset[0]];
        let dirs: Vec<Vec<Rat>> = subset[1..]
            .iter()
            .map(|&i| verts[i].iter().zip(s0).map(|(a, b)| a - b).collect())
            .collect();
        if rank(&dirs) + 1 != d {
            continue;
        }
        // a normal within the hull: kernel of the subset directions, not
        // constant on the polytope
        let kern = kernel_basis(&dirs, n);
        let normal = kern.into_iter().find(|k| {
            let mut with = eq_normals.clone();
            with.push(k.clone());
            rank(&with) > eq_rank
        });
        let Some(mut a) = normal else { continue };
        let mut pos = false;
        let mut neg = false;
        for v in verts {
            let val: Rat = a.iter().zip(v.iter().zip(s0)).map(|(c, (x, y))| c * &(x - y)).sum();
            if val.is_positive() {
                pos = true;
            } else if val.is_negative() {
                neg = true;
            }
        }
        if pos && neg {
            continue;
        }
        if neg {
            for c in a.iter_mut() {
                *c = -c.clone();
            }
        }
        let rhs: Rat = a.iter().zip(s0).map(|(c, x)| c * x).sum();
        let hs = Halfspace::from_rational(&a, &rhs);
        if !out.contains(&hs) {
            out.push(hs);
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    /// keep `h . x <= c`
    Le,
    /// keep `h . x >= c`
    Ge,
}

/// Closed intersection of a polytope with a half-space; the result may have
/// lower dimension (a face) or be empty. The candidate vertex set is the
/// kept vertices plus every crossing of a vertex pair with the boundary,
/// which covers all edge crossings.
pub fn restrict_halfspace(p: &Polytope, h: &LinearEq, sense: Sense) -> Option<Polytope> {
    let vals: Vec<Rat> = p.verts.iter().map(|v| h.eval(v)).collect();
    let keep = |v: &Rat| match sense {
        Sense::Le => !v.is_positive(),
        Sense::Ge => !v.is_negative(),
    };
    let mut pts: Vec<Point> = Vec::new();
    for (v, val) in p.verts.iter().zip(&vals) {
        if keep(val) {
            pts.push(v.clone());
        }
    }
    for i in 0..p.verts.len() {
        for j in i + 1..p.verts.len() {
            let (vi, vj) = (&vals[i], &vals[j]);
            if (vi.is_positive() && vj.is_negative()) || (vi.is_negative() && vj.is_positive()) {
                let t = vi.clone() / (vi - vj);
                let pt: Point = p.verts[i]
                    .iter()
                    .zip(&p.verts[j])
                    .map(|(a, b)| a + (b - a) * t.clone())
                    .collect();
                pts.push(pt);
            }
        }
    }
    if pts.is_empty() {
        None
    } else {
        Some(Polytope::new(pts))
    }
}

/// Result of splitting a polytope along a hyperplane for complex building.
pub enum Split {
    /// the hyperplane does not cross the relative interior
    Keep,
    /// (le side, ge side), both of the original dimension
    Parts(Polytope, Polytope),
}

pub fn split_by_hyperplane(p: &Polytope, h: &LinearEq) -> Split {
    let vals: Vec<Rat> = p.verts.iter().map(|v| h.eval(v)).collect();
    let pos = vals.iter().any(|v| v.is_positive());
    let neg = vals.iter().any(|v| v.is_negative());
    if pos && neg {
        let le = restrict_halfspace(p, h, Sense::Le).expect("nonempty side");
        let ge = restrict_halfspace(p, h, Sense::Ge).expect("nonempty side");
        Split::Parts(le, ge)
    } else {
        Split::Keep
    }
}

/// Finite union of rational polytopes in `[0,1]^dim`, canonicalized:
/// each polytope reduced to extreme points, contained polytopes pruned,
/// list sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    dim: usize,
    polys: Vec<Polytope>,
    pointed: bool,
}

impl Polyhedron {
    pub fn new(dim: usize, polys: Vec<Polytope>) -> Polyhedron {
        let mut ps: Vec<Polytope> = polys;
        for p in &ps {
            assert_eq!(p.ambient(), dim, "ambient dimension mismatch");
        }
        ps.sort();
        ps.dedup();
        // prune polytopes contained in another
        let mut keep = vec![true; ps.len()];
        for i in 0..ps.len() {
            if !keep[i] {
                continue;
            }
            for j in 0..ps.len() {
                if i == j || !keep[j] {
                    continue;
                }
                if ps[i] != ps[j] && ps[i].vertices().iter().all(|v| ps[j].contains(v)) {
                    keep[i] = false;
                    break;
                }
            }
        }
        let polys: Vec<Polytope> =
            ps.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
        let pointed = polys.iter().any(|p| p.contains(&ones(dim)));
        Polyhedron { dim, polys, pointed }
    }

    pub fn empty(dim: usize) -> Polyhedron {
        Polyhedron { dim, polys: Vec::new(), pointed: false }
    }

    pub fn from_points(dim: usize, pts: Vec<Vec<Point>>) -> Polyhedron {
        Polyhedron::new(dim, pts.into_iter().map(Polytope::new).collect())
    }

    /// The whole cube [0,1]^n.
    pub fn cube(n: usize) -> Polyhedron {
        let mut verts = Vec::new();
        for mask in 0..(1usize << n) {
            verts.push(
                (0..n)
                    .map(|i| if mask >> i & 1 == 1 { Rat::one() } else { Rat::zero() })
                    .collect(),
            );
        }
        Polyhedron::new(n, vec![Polytope::new(verts)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn polytopes(&self) -> &[Polytope] {
        &self.polys
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// True iff the union contains the vertex (1, ..., 1).
    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.polys.iter().any(|s| s.contains(p))
    }

    /// Max affine dimension over the polytopes.
    pub fn max_dim(&self) -> usize {
        self.polys.iter().map(Polytope::dim).max().unwrap_or(0)
    }

    /// All boundary hyperplanes (hull equations and facet boundaries),
    /// deduplicated in canonical form.
    pub fn hyperplanes(&self) -> Vec<LinearEq> {
        let mut hps: Vec<LinearEq> = Vec::new();
        for p in &self.polys {
            let hr = p.hrepr();
            for eq in &hr.hull.rows {
                if !hps.contains(eq) {
                    hps.push(eq.clone());
                }
            }
            for f in &hr.facets {
                let h = f.hyperplane();
                if !hps.contains(&h) {
                    hps.push(h);
                }
            }
        }
        hps.sort();
        hps
    }
}

/// Splits a polytope by every hyperplane in the list (proper crossings
/// only), producing pieces whose relative interiors have a constant sign
/// for each hyperplane.
pub fn split_by_arrangement(p: &Polytope, hps: &[LinearEq]) -> Vec<Polytope> {
    let mut pieces = vec![p.clone()];
    for h in hps {
        let mut next = Vec::new();
        for piece in pieces {
            match split_by_hyperplane(&piece, h) {
                Split::Keep => next.push(piece),
                Split::Parts(le, ge) => {
                    next.push(le);
                    next.push(ge);
                }
            }
        }
        pieces = next;
    }
    pieces
}

/// Is `p` a subset of `q` as point sets? Returns `None` when it is, and a
/// witness point of `p \ q` otherwise. Exact: each polytope of `p` is split
/// by all boundary hyperplanes of `q`; a piece lies in `q` iff its centroid
/// does.
pub fn poly_subset(p: &Polyhedron, q: &Polyhedron) -> Option<Point> {
    assert_eq!(p.dim(), q.dim(), "ambient dimension mismatch");
    let hps = q.hyperplanes();
    for s in p.polytopes() {
        for piece in split_by_arrangement(s, &hps) {
            let c = piece.centroid();
            if !q.contains(&c) {
                return Some(c);
            }
        }
    }
    None
}

/// Point-set equality of two polyhedra.
pub fn poly_equal(p: &Polyhedron, q: &Polyhedron) -> bool {
    poly_subset(p, q).is_none() && poly_subset(q, p).is_none()
}

/// Point-set intersection, canonicalized.
pub fn poly_intersection(p: &Polyhedron, q: &Polyhedron) -> Polyhedron {
    assert_eq!(p.dim(), q.dim(), "ambient dimension mismatch");
    let mut out = Vec::new();
    for s in p.polytopes() {
        for t in q.polytopes() {
            let hr = t.hrepr();
            let mut cur = Some(s.clone());
            for eq in &hr.hull.rows {
                cur = cur.and_then(|c| restrict_halfspace(&c, eq, Sense::Le));
                cur = cur.and_then(|c| restrict_halfspace(&c, eq, Sense::Ge));
            }
            for f in &hr.facets {
                let h = LinearEq { coeffs: f.a.clone(), rhs: f.c.clone() };
                cur = cur.and_then(|c| restrict_halfspace(&c, &h, Sense::Ge));
            }
            if let Some(c) = cur {
                out.push(c);
            }
        }
    }
    Polyhedron::new(p.dim(), out)
}
