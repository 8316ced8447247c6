//! Exact rational scalars and integer linear algebra.
//!
//! Everything here is arbitrary precision and exact: rationals are kept in
//! lowest terms with positive denominators (enforced by `num`), integer
//! solvability goes through a Smith normal form, and affine hulls are
//! returned as canonical integer-cleared equation systems.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;
/// A rational point in some ambient dimension.
pub type Point = Vec<Rat>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Int {
    BigInt::from(n)
}

/// Parses `p/q` (or a bare integer `p`) into a rational.
pub fn parse_rat(s: &str) -> Result<Rat, ArithError> {
    let bad = || ArithError::BadRational(s.to_string());
    let mut parts = s.splitn(2, '/');
    let num: Int = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    match parts.next() {
        None => Ok(Rat::from_integer(num)),
        Some(d) => {
            let den: Int = d.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Formats a rational as `p/q` in lowest terms, denominator always explicit.
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn fmt_point(p: &[Rat]) -> String {
    let coords: Vec<String> = p.iter().map(fmt_rat).collect();
    format!("({})", coords.join(", "))
}

/// Least common denominator of a point's coordinates (in lowest terms).
pub fn lcd(point: &[Rat]) -> Int {
    point.iter().fold(Int::one(), |acc, c| acc.lcm(c.denom()))
}

/// Dense matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul_vec(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &x[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_sub(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.at(src, j) * q;
            *self.at_mut(dst, j) -= v;
        }
    }

    fn col_sub(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.at(i, src) * q;
            *self.at_mut(i, dst) -= v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j).clone();
            *self.at_mut(i, j) = v;
        }
    }
}

/// Smith normal form `d = u * a * v` with unimodular `u`, `v` and diagonal
/// `d` whose nonzero entries are positive and satisfy d[i] | d[i+1].
#[derive(Debug, Clone)]
pub struct Smith {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    let mut t = 0;
    while t < m && t < n {
        // pick the nonzero pivot of least magnitude in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d.at(i, j).is_zero()
                    && pivot.is_none_or(|(pi, pj)| d.at(i, j).abs() < d.at(pi, pj).abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if !d.at(i, t).is_zero() {
                    let q = d.at(i, t) / d.at(t, t);
                    d.row_sub(i, t, &q);
                    u.row_sub(i, t, &q);
                    if !d.at(i, t).is_zero() {
                        // remainder of smaller magnitude than the pivot: swap up
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if !d.at(t, j).is_zero() {
                    let q = d.at(t, j) / d.at(t, t);
                    d.col_sub(j, t, &q);
                    v.col_sub(j, t, &q);
                    if !d.at(t, j).is_zero() {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty
                && (t + 1..m).all(|i| d.at(i, t).is_zero())
                && (t + 1..n).all(|j| d.at(t, j).is_zero())
            {
                break;
            }
        }
        t += 1;
    }

    let k = m.min(n);
    for i in 0..k {
        if d.at(i, i).is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }
    let rank = (0..k).filter(|&i| !d.at(i, i).is_zero()).count();

    // enforce the divisibility chain d[i] | d[i+1]
    for i in 0..rank {
        for j in i + 1..rank {
            let (di, dj) = (d.at(i, i).clone(), d.at(j, j).clone());
            if (&dj % &di).is_zero() {
                continue;
            }
            // col_i += col_j, then a 2x2 unimodular row transform, then clear
            d.col_sub(i, j, &int(-1));
            v.col_sub(i, j, &int(-1));
            let e = di.extended_gcd(&dj);
            let (g, s, tt) = (e.gcd, e.x, e.y);
            let (a_, b_) = (&di / &g, &dj / &g);
            // rows i,j <- [[s, t], [-b_, a_]] * rows i,j  (det = 1)
            for col in 0..n {
                let ri = d.at(i, col).clone();
                let rj = d.at(j, col).clone();
                *d.at_mut(i, col) = &s * &ri + &tt * &rj;
                *d.at_mut(j, col) = -&b_ * &ri + &a_ * &rj;
            }
            for col in 0..m {
                let ri = u.at(i, col).clone();
                let rj = u.at(j, col).clone();
                *u.at_mut(i, col) = &s * &ri + &tt * &rj;
                *u.at_mut(j, col) = -&b_ * &ri + &a_ * &rj;
            }
            let q = d.at(i, j) / d.at(i, i);
            d.col_sub(j, i, &q);
            v.col_sub(j, i, &q);
            if d.at(j, j).is_negative() {
                d.negate_row(j);
                u.negate_row(j);
            }
        }
    }
    Smith { d, u, v, rank }
}

/// Integer solvability of `a * x = b`: returns an integer witness when one
/// exists. Solvable iff each Smith diagonal entry divides the transformed
/// rhs, with zero rows requiring zero rhs.
pub fn integer_solvable(a: &IntMatrix, b: &[Int]) -> Result<Option<Vec<Int>>, ArithError> {
    if b.len() != a.rows {
        return Err(ArithError::DimensionMismatch { expected: a.rows, got: b.len() });
    }
    if a.rows == 0 {
        return Ok(Some(vec![Int::zero(); a.cols]));
    }
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let k = a.rows.min(a.cols);
    let mut y = vec![Int::zero(); a.cols];
    for i in 0..k {
        let di = snf.d.at(i, i);
        if di.is_zero() {
            if !c[i].is_zero() {
                return Ok(None);
            }
        } else {
            let (q, r) = c[i].div_rem(di);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    for item in c.iter().take(a.rows).skip(k) {
        if !item.is_zero() {
            return Ok(None);
        }
    }
    let x = snf.v.mul_vec(&y);
    debug_assert_eq!(a.mul_vec(&x), b.to_vec());
    Ok(Some(x))
}

/// One integer-cleared linear equation `coeffs . x = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearEq {
    pub coeffs: Vec<Int>,
    pub rhs: Int,
}

impl LinearEq {
    /// Clears denominators and normalizes: the gcd of coefficients and rhs
    /// jointly is 1 and the first nonzero coefficient is positive.
    pub fn from_rational(coeffs: &[Rat], rhs: &Rat) -> LinearEq {
        let mut den = rhs.denom().clone();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let scale = Rat::from_integer(den);
        let mut ic: Vec<Int> = coeffs.iter().map(|c| (c * &scale).to_integer()).collect();
        let mut ir = (rhs * &scale).to_integer();
        let mut g = ir.abs();
        for c in &ic {
            g = g.gcd(c);
        }
        if !g.is_zero() && !g.is_one() {
            for c in &mut ic {
                *c /= &g;
            }
            ir /= &g;
        }
        if let Some(first) = ic.iter().find(|c| !c.is_zero()) {
            if first.is_negative() {
                for c in &mut ic {
                    *c = -c.clone();
                }
                ir = -ir;
            }
        }
        LinearEq { coeffs: ic, rhs: ir }
    }

    /// coeffs . p - rhs
    pub fn eval(&self, p: &[Rat]) -> Rat {
        let mut acc = -Rat::from_integer(self.rhs.clone());
        for (c, x) in self.coeffs.iter().zip(p) {
            acc += Rat::from_integer(c.clone()) * x;
        }
        acc
    }
}

/// An affine subspace of R^n presented as the solution set of a canonical
/// integer system `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSubspace {
    pub ambient: usize,
    pub rows: Vec<LinearEq>,
}

impl AffineSubspace {
    /// Dimension of the subspace (ambient minus number of equations; the
    /// canonical system has independent rows).
    pub fn dim(&self) -> usize {
        self.ambient - self.rows.len()
    }

    /// An integer point on the subspace, when one exists.
    pub fn integer_point(&self) -> Option<Vec<Int>> {
        if self.rows.is_empty() {
            return Some(vec![Int::zero(); self.ambient]);
        }
        let m = IntMatrix::from_rows(self.rows.iter().map(|r| r.coeffs.clone()).collect());
        let b: Vec<Int> = self.rows.iter().map(|r| r.rhs.clone()).collect();
        integer_solvable(&m, &b).expect("shapes agree by construction")
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.rows.iter().all(|r| r.eval(p).is_zero())
    }
}

/// Reduced row echelon form over the rationals; returns pivot columns.
/// Zero rows are dropped, so the result is canonical for the row space.
#[allow(clippy::needless_range_loop)] // in-place row operations
pub fn rref(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][col].clone();
        for x in rows[r].iter_mut() {
            *x /= inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..ncols {
                    let v = rows[r][j].clone() * f.clone();
                    rows[i][j] -= v;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : rows . x = 0}`, canonical for the row space (the standard
/// basis read off the unique rref, one vector per free column).
pub fn kernel_basis(rows: &[Vec<Rat>], n: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> =
        rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); n];
        v[free] = Rat::one();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Rank of a set of rational vectors.
pub fn rank(vectors: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = vectors.to_vec();
    rref(&mut m);
    m.len()
}

/// Smallest affine set containing the given points, as a canonical integer
/// system: one cleared equation per kernel basis vector of the direction
/// space, rows sorted lexicographically.
pub fn affine_hull(points: &[Point]) -> Result<AffineSubspace, ArithError> {
    let Some(p0) = points.first() else {
        return Err(ArithError::EmptyPointSet);
    };
    let n = p0.len();
    for p in points {
        if p.len() != n {
            return Err(ArithError::DimensionMismatch { expected: n, got: p.len() });
        }
    }
    let dirs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let mut rows: Vec<LinearEq> = kernel_basis(&dirs, n)
        .into_iter()
        .map(|a| {
            let rhs: Rat = a.iter().zip(p0).map(|(c, x)| c * x).sum();
            LinearEq::from_rational(&a, &rhs)
        })
        .collect();
    rows.sort();
    Ok(AffineSubspace { ambient: n, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[(i64, i64)]) -> Point {
        coords.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn lcd_examples() {
        assert_eq!(lcd(&pt(&[(1, 2), (1, 3)])), int(6));
        assert_eq!(lcd(&pt(&[(1, 1), (1, 1)])), int(1));
        // 2/4 and 3/6 reduce to 1/2 first
        assert_eq!(lcd(&pt(&[(2, 4), (3, 6)])), int(2));
    }

    #[test]
    fn affine_hull_singleton() {
        let h = affine_hull(&[pt(&[(1, 1), (1, 1)])]).unwrap();
        assert_eq!(h.rows.len(), 2);
        assert_eq!(h.rows[0].coeffs, vec![int(0), int(1)]);
        assert_eq!(h.rows[0].rhs, int(1));
        assert_eq!(h.rows[1].coeffs, vec![int(1), int(0)]);
        assert_eq!(h.rows[1].rhs, int(1));
    }

    #[test]
    fn affine_hull_halfint_segment() {
        // {(1/2,0),(0,1/2)} -> 2x + 2y = 1
        let h = affine_hull(&[pt(&[(1, 2), (0, 1)]), pt(&[(0, 1), (1, 2)])]).unwrap();
        assert_eq!(h.rows.len(), 1);
        assert_eq!(h.rows[0].coeffs, vec![int(2), int(2)]);
        assert_eq!(h.rows[0].rhs, int(1));
    }

    #[test]
    fn affine_hull_diagonal() {
        let h = affine_hull(&[pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (1, 1)])]).unwrap();
        assert_eq!(h.rows.len(), 1);
        assert_eq!(h.rows[0].coeffs, vec![int(1), int(-1)]);
        assert_eq!(h.rows[0].rhs, int(0));
    }

    #[test]
    fn affine_hull_empty_errors() {
        assert_eq!(affine_hull(&[]).unwrap_err(), ArithError::EmptyPointSet);
    }

    #[test]
    fn snf_shape() {
        let a = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let s = smith_normal_form(&a);
        let mut uav = IntMatrix::zero(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Int::zero();
                for k in 0..3 {
                    for l in 0..3 {
                        acc += s.u.at(i, k) * a.at(k, l) * s.v.at(l, j);
                    }
                }
                *uav.at_mut(i, j) = acc;
            }
        }
        assert_eq!(uav, s.d);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(s.d.at(i, j).is_zero());
                }
            }
        }
        for i in 0..s.rank.saturating_sub(1) {
            assert!((s.d.at(i + 1, i + 1) % s.d.at(i, i)).is_zero());
        }
    }

    #[test]
    fn integer_solvable_examples() {
        // parity obstruction
        let a = IntMatrix::from_i64(&[&[2, 2]]);
        assert_eq!(integer_solvable(&a, &[int(1)]).unwrap(), None);
        let a = IntMatrix::from_i64(&[&[1]]);
        assert_eq!(integer_solvable(&a, &[int(5)]).unwrap(), Some(vec![int(5)]));
        // x - y = 0 has an integer solution
        let a = IntMatrix::from_i64(&[&[1, -1]]);
        let w = integer_solvable(&a, &[int(0)]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&w), vec![int(0)]);
    }

    #[test]
    fn integer_solvable_dim_mismatch() {
        let a = IntMatrix::from_i64(&[&[1, 2]]);
        assert!(integer_solvable(&a, &[int(1), int(2)]).is_err());
    }

    #[test]
    fn hull_permutation_invariant() {
        let pts = vec![pt(&[(0, 1), (0, 1)]), pt(&[(1, 2), (1, 3)]), pt(&[(1, 1), (2, 3)])];
        let h1 = affine_hull(&pts).unwrap();
        let mut rev = pts.clone();
        rev.reverse();
        let h2 = affine_hull(&rev).unwrap();
        assert_eq!(h1, h2);
    }

    #[test]
    fn parse_fmt_roundtrip() {
        let r = parse_rat("3/6").unwrap();
        assert_eq!(fmt_rat(&r), "1/2");
        assert_eq!(parse_rat("7").unwrap(), rat(7, 1));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}
