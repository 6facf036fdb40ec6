//! Dense exact-rational linear algebra: row reduction, nullspaces, inverses,
//! positive-definiteness tests, and bounded-norm lattice enumeration.
//!
//! Dimensions in this crate never exceed a few hundred, so dense
//! `BigRational` arithmetic is plenty fast and keeps everything exact.

use num::{One, Signed, Zero};

use crate::rational::{isqrt_floor, rat_int, Rational};

/// Row-major dense matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = QMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        QMatrix::from_fn(r, c, |i, j| rat_int(rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        QMatrix::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Reduces in place to reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self[(row, col)].recip();
            for j in col..self.cols {
                let v = &self[(row, j)] * &inv;
                self[(row, j)] = v;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for j in col..self.cols {
                        let v = &self[(r, j)] - &factor * &self[(row, j)];
                        self[(r, j)] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace `{x : Ax = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[(r, f)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `Ax = b`; `None` when inconsistent (underdetermined systems get
    /// the solution with free variables set to zero).
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { b[i].clone() }
        });
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = QMatrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let pivots = aug.rref();
        // Invertible exactly when the pivots are the n original columns.
        if pivots.iter().take(n).filter(|&&p| p < n).count() < n {
            return None;
        }
        Some(QMatrix::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
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
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Incremental reduced-row-echelon accumulator for span and membership
/// queries over a fixed coordinate space.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    cols: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(cols: usize) -> Self {
        SpanBuilder { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    /// Reduces `v` against the current basis; the remainder is zero exactly
    /// when `v` already lies in the span.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for j in p..self.cols {
                    if !row[j].is_zero() {
                        let t = &v[j] - &factor * &row[j];
                        v[j] = t;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Rational::is_zero)
    }

    /// Inserts `v`; returns true when it enlarges the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = (0..self.cols).find(|&j| !r[j].is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        // Back-substitute into existing rows to keep the basis fully reduced.
        for (row, _) in self.rows.iter_mut().zip(&self.pivots) {
            if !row[p].is_zero() {
                let factor = row[p].clone();
                for j in p..self.cols {
                    if !r[j].is_zero() {
                        let t = &row[j] - &factor * &r[j];
                        row[j] = t;
                    }
                }
            }
        }
        let at = self.pivots.iter().position(|&q| q > p).unwrap_or(self.pivots.len());
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.rows
    }
}

/// Euclidean norm `x^T G x` of an integer vector under an integer Gram form.
pub fn int_norm(gram: &[Vec<i64>], x: &[i64]) -> i64 {
    int_inner(gram, x, x)
}

/// Inner product `x^T G y` of integer vectors under an integer Gram form.
pub fn int_inner(gram: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let n = gram.len();
    let mut acc = 0i64;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        let mut row = 0i64;
        for j in 0..n {
            if y[j] != 0 {
                row += gram[i][j] * y[j];
            }
        }
        acc += x[i] * row;
    }
    acc
}

/// All nonzero integer vectors `x` with `x^T G x <= bound`, for positive
/// definite integer `G`. Exact LDL^T decomposition turns the quadratic form
/// into a sum of weighted squares, so each coordinate scans an exact integer
/// interval and the search prunes by the partial norm.
pub fn enumerate_norm_bounded(gram: &[Vec<i64>], bound: i64) -> Vec<Vec<i64>> {
    let n = gram.len();
    if n == 0 || bound <= 0 {
        return Vec::new();
    }
    // G = L D L^T with unit lower-triangular L; then
    // Q(x) = sum_i d_i (x_i + sum_{j>i} u_{ij} x_j)^2 with u = strict upper part of L^T.
    let mut a = QMatrix::from_int_rows(gram);
    let mut d = vec![Rational::zero(); n];
    let mut u = vec![vec![Rational::zero(); n]; n];
    for k in 0..n {
        d[k] = a[(k, k)].clone();
        assert!(d[k].is_positive(), "Gram form is not positive definite");
        for j in k + 1..n {
            u[k][j] = &a[(k, j)] / &d[k];
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[(i, j)] - &a[(k, i)] * &a[(k, j)] / &d[k];
                a[(i, j)] = t;
            }
        }
    }

    let bound_q = rat_int(bound);
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    // Scan from the last coordinate down; centers c_k = sum_{j>k} u_{kj} x_j.
    fn descend(
        k: usize,
        remaining: Rational,
        x: &mut Vec<i64>,
        d: &[Rational],
        u: &[Vec<Rational>],
        out: &mut Vec<Vec<i64>>,
    ) {
        use num::ToPrimitive;
        let n = d.len();
        let mut center = Rational::zero();
        for j in k + 1..n {
            if x[j] != 0 && !u[k][j].is_zero() {
                center += &u[k][j] * rat_int(x[j]);
            }
        }
        // d_k (x_k + center)^2 <= remaining, so x_k lies within
        // isqrt(remaining/d_k) + 1 of -center; test each candidate exactly.
        let radius2 = &remaining / &d[k];
        let half = isqrt_floor(&radius2);
        let anchor = (-&center).floor().to_integer().to_i64().expect("coordinate overflow");
        for v in anchor - half - 1..=anchor + half + 2 {
            let t = rat_int(v) + &center;
            let used = &d[k] * &t * &t;
            if used > remaining {
                continue;
            }
            x[k] = v;
            if k == 0 {
                if x.iter().any(|&c| c != 0) {
                    out.push(x.clone());
                }
            } else {
                descend(k - 1, &remaining - &used, x, d, u, out);
            }
            x[k] = 0;
        }
    }
    descend(n - 1, bound_q, &mut x, &d, &u, &mut out);
    out.sort();
    out
}

/// True when the symmetric integer matrix is positive definite
/// (all leading pivots of exact Gaussian elimination are positive).
pub fn is_positive_definite(m: &QMatrix) -> bool {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    for k in 0..n {
        if !a[(k, k)].is_positive() {
            return false;
        }
        for i in k + 1..n {
            if a[(k, i)].is_zero() {
                continue;
            }
            let factor = &a[(k, i)] / &a[(k, k)];
            for j in i..n {
                let t = &a[(i, j)] - &factor * &a[(k, j)];
                a[(i, j)] = t;
            }
            // symmetric elimination: only the upper triangle is maintained
            for j in k + 1..i {
                a[(i, j)] = a[(j, i)].clone();
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn rref_and_rank() {
        let mut m = QMatrix::from_int_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        let pivots = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let m = QMatrix::from_int_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m = QMatrix::from_int_rows(&[vec![2, -1], vec![-1, 2]]);
        let x = m.solve(&[rat_int(1), rat_int(0)]).unwrap();
        assert_eq!(x, vec![rat(2, 3), rat(1, 3)]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv[(0, 0)], rat(2, 3));
        let singular = QMatrix::from_int_rows(&[vec![1, 1], vec![1, 1]]);
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&[rat_int(0), rat_int(1)]).is_none());
    }

    #[test]
    fn span_builder_membership() {
        let mut span = SpanBuilder::new(3);
        assert!(span.insert(&[rat_int(1), rat_int(1), rat_int(0)]));
        assert!(span.insert(&[rat_int(0), rat_int(1), rat_int(1)]));
        assert!(!span.insert(&[rat_int(1), rat_int(2), rat_int(1)]));
        assert_eq!(span.rank(), 2);
        assert!(span.contains(&[rat_int(2), rat_int(3), rat_int(1)]));
        assert!(!span.contains(&[rat_int(0), rat_int(0), rat_int(1)]));
    }

    #[test]
    fn positive_definiteness() {
        let a2 = QMatrix::from_int_rows(&[vec![2, -1], vec![-1, 2]]);
        assert!(is_positive_definite(&a2));
        let not_pd = QMatrix::from_int_rows(&[vec![1, 2], vec![2, 1]]);
        assert!(!is_positive_definite(&not_pd));
    }

    #[test]
    fn enumerates_a2_lattice_shells() {
        // Oracle: direct scan over |a|,|b| <= 3.
        let gram = vec![vec![2, -1], vec![-1, 2]];
        let mut expect = Vec::new();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let v = vec![a, b];
                let norm = int_norm(&gram, &v);
                if norm > 0 && norm <= 6 {
                    expect.push(v);
                }
            }
        }
        expect.sort();
        let got = enumerate_norm_bounded(&gram, 6);
        assert_eq!(got, expect);
        assert_eq!(got.len(), 12); // 6 of norm 2 plus 6 of norm 6
    }

    #[test]
    fn enumerates_z8_shells() {
        let gram: Vec<Vec<i64>> = (0..8).map(|i| (0..8).map(|j| if i == j { 2 } else { 0 }).collect()).collect();
        let got = enumerate_norm_bounded(&gram, 4);
        let norm2 = got.iter().filter(|v| int_norm(&gram, v) == 2).count();
        let norm4 = got.iter().filter(|v| int_norm(&gram, v) == 4).count();
        assert_eq!(norm2, 16);
        assert_eq!(norm4, 2 * 8 * 7); // layer 2 of Z^n has 2n(n-1) vectors
    }
}
