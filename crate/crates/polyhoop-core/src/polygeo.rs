//! Polyhedral predicates on one-sets: triangulation into a geometric
//! simplicial complex, anchoredness (affine hull meets the integer
//! lattice), connected components, the anchored part, strong regularity,
//! and coverage of a polyhedron by a function's one-set.

use std::collections::HashMap;

use num::{One, Signed, Zero};

use crate::arith::{affine_hull, Point, Rat};
use crate::geom::{
    ones, restrict_halfspace, split_by_arrangement, GeomError, Polyhedron, Polytope, Sense,
};
use crate::pl::PLFunction;

/// Geometric simplicial complex: rational vertex table plus simplices as
/// sorted vertex-index sets, closed under taking faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    ambient: usize,
    verts: Vec<Point>,
    simplices: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn vertices(&self) -> &[Point] {
        &self.verts
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn simplex_points(&self, s: &[usize]) -> Vec<Point> {
        s.iter().map(|&i| self.verts[i].clone()).collect()
    }

    /// Simplices that are not proper faces of another simplex.
    pub fn maximal_simplices(&self) -> Vec<&Vec<usize>> {
        self.simplices
            .iter()
            .filter(|s| {
                !self
                    .simplices
                    .iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|i| t.contains(i)))
            })
            .collect()
    }

    /// Dimension = max simplex dimension (0 for an empty complex).
    pub fn dim(&self) -> usize {
        self.simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0)
    }

    pub fn as_polyhedron(&self) -> Polyhedron {
        Polyhedron::new(
            self.ambient,
            self.maximal_simplices()
                .into_iter()
                .map(|s| Polytope::new(self.simplex_points(s)))
                .collect(),
        )
    }
}

/// Memoized recursive pulling triangulation: cone the lexicographically
/// least vertex over the triangulated facets that miss it. Keying the
/// recursion by the face's canonical vertex list makes shared faces of
/// adjacent pieces triangulate identically.
fn pull_triangulate(
    poly: &Polytope,
    memo: &mut HashMap<Vec<Point>, Vec<Vec<Point>>>,
) -> Vec<Vec<Point>> {
    let key = poly.vertices().to_vec();
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let d = poly.dim();
    let out: Vec<Vec<Point>> = if poly.vertices().len() == d + 1 {
        vec![poly.vertices().to_vec()]
    } else {
        let v0 = poly.vertices()[0].clone();
        let mut simps = Vec::new();
        for facet in &poly.hrepr().facets {
            if facet.eval(&v0).is_positive() {
                let on_facet: Vec<Point> = poly
                    .vertices()
                    .iter()
                    .filter(|v| !facet.eval(v).is_positive())
                    .cloned()
                    .collect();
                let face = Polytope::new(on_facet);
                for mut simp in pull_triangulate(&face, memo) {
                    simp.push(v0.clone());
                    simp.sort();
                    simps.push(simp);
                }
            }
        }
        simps.sort();
        simps.dedup();
        simps
    };
    memo.insert(key, out.clone());
    out
}

/// Triangulates a polyhedron into a geometric simplicial complex whose
/// union is the same point set; every input polytope is a union of
/// simplices. Deterministic: polytopes are first refined by the full
/// arrangement of all boundary hyperplanes, then pulled at lex-least
/// vertices.
pub fn triangulate(p: &Polyhedron) -> SimplicialComplex {
    let hps = p.hyperplanes();
    let mut pieces: Vec<Polytope> = Vec::new();
    for poly in p.polytopes() {
        pieces.extend(split_by_arrangement(poly, &hps));
    }
    pieces.sort();
    pieces.dedup();

    let mut memo = HashMap::new();
    let mut simplices_pts: Vec<Vec<Point>> = Vec::new();
    for piece in &pieces {
        simplices_pts.extend(pull_triangulate(piece, &mut memo));
    }

    // vertex table
    let mut verts: Vec<Point> = simplices_pts.iter().flatten().cloned().collect();
    verts.sort();
    verts.dedup();
    let index = |v: &Point| verts.binary_search(v).expect("vertex in table");

    // close under faces
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    for simp in &simplices_pts {
        let idx: Vec<usize> = {
            let mut i: Vec<usize> = simp.iter().map(index).collect();
            i.sort_unstable();
            i
        };
        for mask in 1u32..(1 << idx.len()) {
            let face: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|&(k, _)| mask >> k & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            simplices.push(face);
        }
    }
    simplices.sort();
    simplices.dedup();

    SimplicialComplex { ambient: p.dim(), verts, simplices }
}

/// A polytope is anchored when its affine hull contains an integer point.
pub fn is_anchored(s: &Polytope) -> bool {
    affine_hull(s.vertices()).expect("nonempty").integer_point().is_some()
}

fn anchored_points(pts: &[Point]) -> bool {
    affine_hull(pts).expect("nonempty").integer_point().is_some()
}

/// Indices of anchored simplices that are not faces of another anchored
/// simplex; their union is the whole anchored part (faces of every
/// dimension are anchored-checked, but a face of an anchored simplex is
/// covered by it).
fn maximal_anchored(k: &SimplicialComplex) -> Vec<Vec<usize>> {
    let anchored: Vec<Vec<usize>> = k
        .simplices
        .iter()
        .filter(|s| anchored_points(&k.simplex_points(s)))
        .cloned()
        .collect();
    anchored
        .iter()
        .filter(|s| {
            !anchored.iter().any(|t| t.len() > s.len() && s.iter().all(|i| t.contains(i)))
        })
        .cloned()
        .collect()
}

/// Union of all anchored simplices of the complex, faces of every
/// dimension included, as a canonical polyhedron.
pub fn anchored_part(k: &SimplicialComplex) -> Polyhedron {
    let polys: Vec<Polytope> =
        maximal_anchored(k).iter().map(|s| Polytope::new(k.simplex_points(s))).collect();
    Polyhedron::new(k.ambient, polys)
}

/// The connected-through-1 component of the anchored part, computed on
/// the complex itself (simplices of one complex meet iff they share a
/// vertex, so no re-triangulation is needed).
pub fn anchored_component_of_one(k: &SimplicialComplex) -> Result<Polyhedron, GeomError> {
    let top = ones(k.ambient);
    let Ok(top_idx) = k.verts.binary_search(&top) else {
        return Err(GeomError::NotPointed);
    };
    let maximal = maximal_anchored(k);
    let mut uf = UnionFind::new(maximal.len());
    for i in 0..maximal.len() {
        for j in i + 1..maximal.len() {
            if maximal[i].iter().any(|v| maximal[j].contains(v)) {
                uf.union(i, j);
            }
        }
    }
    // the 0-simplex {1} is integral, hence anchored and present
    let home = (0..maximal.len())
        .find(|&i| maximal[i].contains(&top_idx))
        .ok_or(GeomError::NotPointed)?;
    let root = uf.find(home);
    let polys: Vec<Polytope> = (0..maximal.len())
        .filter(|&i| uf.find(i) == root)
        .map(|i| Polytope::new(k.simplex_points(&maximal[i])))
        .collect();
    Ok(Polyhedron::new(k.ambient, polys))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let r = self.find(self.0[i]);
            self.0[i] = r;
        }
        self.0[i]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Component structure of the maximal simplices under shared-vertex
/// adjacency (in a geometric complex, two simplices meet iff they share a
/// vertex). Returns (maximal simplices, component root per simplex).
fn components(k: &SimplicialComplex) -> (Vec<Vec<usize>>, Vec<usize>) {
    let maximal: Vec<Vec<usize>> = k.maximal_simplices().into_iter().cloned().collect();
    let mut uf = UnionFind::new(maximal.len());
    for i in 0..maximal.len() {
        for j in i + 1..maximal.len() {
            if maximal[i].iter().any(|v| maximal[j].contains(v)) {
                uf.union(i, j);
            }
        }
    }
    let roots: Vec<usize> = (0..maximal.len()).map(|i| uf.find(i)).collect();
    (maximal, roots)
}

/// The connected component of the union that contains the vertex
/// (1, ..., 1). Errors when the polyhedron is not pointed.
pub fn component_containing_one(p: &Polyhedron) -> Result<Polyhedron, GeomError> {
    if !p.is_pointed() {
        return Err(GeomError::NotPointed);
    }
    let k = triangulate(p);
    let top = ones(p.dim());
    let top_idx = k
        .verts
        .binary_search(&top)
        .expect("a pointed polyhedron has 1 as a complex vertex");
    let (maximal, roots) = components(&k);
    let home = (0..maximal.len())
        .find(|&i| maximal[i].contains(&top_idx))
        .expect("some maximal simplex contains the top vertex");
    let root = roots[home];
    let polys: Vec<Polytope> = maximal
        .iter()
        .zip(&roots)
        .filter(|&(_, r)| *r == root)
        .map(|(s, _)| Polytope::new(k.simplex_points(s)))
        .collect();
    Ok(Polyhedron::new(p.dim(), polys))
}

/// Strong regularity decided on the triangulation: every inclusion-maximal
/// simplex must be anchored. Anchored maximal simplices give an anchored
/// decomposition of the union; a non-anchored maximal simplex has interior
/// that no anchored subset can cover.
pub fn is_strongly_regular(p: &Polyhedron) -> bool {
    let k = triangulate(p);
    k.maximal_simplices()
        .into_iter()
        .all(|s| anchored_points(&k.simplex_points(s)))
}

/// Does `f` evaluate to 1 everywhere on `p`? Returns the first failing
/// vertex of the refinement otherwise.
pub fn covers_witness(f: &PLFunction, p: &Polyhedron) -> Result<Option<Point>, GeomError> {
    if f.dim() != p.dim() {
        return Err(GeomError::DimensionMismatch { expected: f.dim(), got: p.dim() });
    }
    for poly in p.polytopes() {
        for cell in f.cells() {
            let mut cur = Some(poly.clone());
            for facet in &cell.poly.hrepr().facets {
                let h = crate::arith::LinearEq { coeffs: facet.a.clone(), rhs: facet.c.clone() };
                cur = cur.and_then(|c| restrict_halfspace(&c, &h, Sense::Ge));
                if cur.is_none() {
                    break;
                }
            }
            let Some(piece) = cur else { continue };
            for v in piece.vertices() {
                if !cell.piece.eval(v).is_one() {
                    return Ok(Some(v.clone()));
                }
            }
        }
    }
    Ok(None)
}

/// `f` is identically 1 on `p` (equivalently, `p` is inside the one-set).
pub fn covers(f: &PLFunction, p: &Polyhedron) -> Result<bool, GeomError> {
    Ok(covers_witness(f, p)?.is_none())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapeReport {
    pub pointed: bool,
    pub connected: bool,
    pub dimension: usize,
    /// Connected and acyclic 1-skeleton; meaningful when dimension <= 1,
    /// where it is exactly contractibility.
    pub tree1d: bool,
    pub strongly_regular: bool,
}

pub fn shape_report(p: &Polyhedron) -> ShapeReport {
    let k = triangulate(p);
    let (maximal, roots) = components(&k);
    let connected = !maximal.is_empty() && roots.iter().all(|&r| r == roots[0]);
    let dimension = k.dim();
    let n_verts = k.verts.len();
    let n_edges = k.simplices.iter().filter(|s| s.len() == 2).count();
    let tree1d = dimension <= 1 && connected && n_verts == n_edges + 1;
    let strongly_regular =
        maximal.iter().all(|s| anchored_points(&k.simplex_points(s)));
    ShapeReport {
        pointed: p.is_pointed(),
        connected,
        dimension,
        tree1d,
        strongly_regular,
    }
}

/// Exact volume of the union: triangulate and sum |det|/n! over the
/// full-dimensional simplices.
pub fn volume(p: &Polyhedron) -> Rat {
    let n = p.dim();
    let k = triangulate(p);
    let mut total = Rat::from_integer(0.into());
    for s in k.maximal_simplices() {
        if s.len() != n + 1 {
            continue;
        }
        let pts = k.simplex_points(s);
        let dirs: Vec<Vec<Rat>> =
            pts[1..].iter().map(|q| q.iter().zip(&pts[0]).map(|(a, b)| a - b).collect()).collect();
        total += det(&dirs).abs() / Rat::from_integer(factorial(n));
    }
    total
}

fn factorial(n: usize) -> crate::arith::Int {
    (1..=n as u64).map(crate::arith::Int::from).product()
}

#[allow(clippy::needless_range_loop)] // in-place elimination
fn det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut sign = Rat::one();
    let mut result = Rat::one();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::from_integer(0.into());
        };
        if pr != col {
            a.swap(pr, col);
            sign = -sign;
        }
        let piv = a[col][col].clone();
        result *= piv.clone();
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = a[r][col].clone() / piv.clone();
                for c in col..n {
                    let v = a[col][c].clone() * f.clone();
                    a[r][c] -= v;
                }
            }
        }
    }
    sign * result
}
