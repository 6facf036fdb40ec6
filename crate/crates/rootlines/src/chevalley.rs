//! Chevalley-basis Lie algebras of simply-laced root systems: exact
//! structure constants, brackets, exhaustive Jacobi verification, graded
//! pieces, derived subalgebras, centralizers, and Cartan eigenvalues.
//!
//! The basis is `h_1..h_m` (one Cartan generator per simple root) followed
//! by `e_r` for every root `r`. All structure constants are integers:
//! `[h_i, e_r] = <s_i, r> e_r`, `[e_r, e_{-r}] = h_r`, and
//! `[e_r, e_s] = N_{r,s} e_{r+s}` with `N_{r,s} = ±1` exactly when `r+s` is
//! a root. The signs come from a bimultiplicative asymmetry function on the
//! root lattice, rescaled so that `[e_r, e_{-r}] = +h_r`; consistency is
//! certified by the exhaustive Jacobi check rather than by matching any
//! particular sign table.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num::Zero;

use crate::error::{Error, Result};
use crate::gradings::ThreeGrading;
use crate::matrix::{QMatrix, SpanBuilder};
use crate::rational::{rat_int, rational_to_string, Rational};
use crate::roots::{Coords, RootSystem, TypeLabel};

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

/// Sparse integer result of a basis-pair bracket.
type BasisBracket = Vec<(usize, i64)>;

/// A Chevalley-basis Lie algebra over the rationals.
#[derive(Debug)]
pub struct LieAlgebra {
    id: u64,
    pub system: Arc<RootSystem>,
    pub rank: usize,
    pub dim: usize,
    /// `table[a * dim + b]` is the bracket of basis elements `a` and `b`.
    pub(crate) table: Vec<BasisBracket>,
}

/// Sparse rational coefficient vector over an algebra's basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    alg_id: u64,
    pub coeffs: BTreeMap<usize, Rational>,
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn dense(&self, dim: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); dim];
        for (&i, c) in &self.coeffs {
            v[i] = c.clone();
        }
        v
    }

    pub fn add(&self, other: &Element) -> Element {
        assert_eq!(self.alg_id, other.alg_id);
        let mut coeffs = self.coeffs.clone();
        for (&i, c) in &other.coeffs {
            let v = coeffs.entry(i).or_insert_with(Rational::zero);
            *v += c;
            if v.is_zero() {
                coeffs.remove(&i);
            }
        }
        Element { alg_id: self.alg_id, coeffs }
    }

    pub fn scale(&self, factor: &Rational) -> Element {
        if factor.is_zero() {
            return Element { alg_id: self.alg_id, coeffs: BTreeMap::new() };
        }
        Element {
            alg_id: self.alg_id,
            coeffs: self.coeffs.iter().map(|(&i, c)| (i, c * factor)).collect(),
        }
    }
}

/// Result of the exhaustive Jacobi check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    pub pass: bool,
    pub triples_checked: usize,
    /// First violating basis triple, when any.
    pub witness: Option<(usize, usize, usize)>,
}

/// A subalgebra given by a spanning set, carrying its closure certificate.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    alg_id: u64,
    pub spanning: Vec<Element>,
    span: SpanBuilder,
    pub closed: bool,
}

impl Subalgebra {
    pub fn dim(&self) -> usize {
        self.span.rank()
    }

    pub fn contains(&self, x: &Element, dim: usize) -> bool {
        self.span.contains(&x.dense(dim))
    }

    /// Basis rows of the reduced span.
    pub fn basis_rows(&self) -> &[Vec<Rational>] {
        self.span.basis()
    }
}

/// The three pieces of a Lie algebra 3-grading.
#[derive(Clone, Debug)]
pub struct GradedPieces {
    pub minus: Subalgebra,
    pub zero: Subalgebra,
    pub plus: Subalgebra,
}

/// Builds the Chevalley-basis Lie algebra of an irreducible simply-laced
/// root system (fresh or subsystem).
pub fn build_chevalley(system: &Arc<RootSystem>) -> Result<Arc<LieAlgebra>> {
    if !system.label.is_irreducible() {
        return Err(Error::UnsupportedLabel(system.label.to_string()));
    }
    if !system.is_simply_laced() {
        return Err(Error::NotSimplyLaced(system.label.to_string()));
    }
    let rank = system.rank();
    let roots = &system.roots;
    let dim = rank + roots.len();

    // Asymmetry-function parity over the simple basis:
    // eps(a, b) = (-1)^(sum_i a_i b_i + sum_{i<j adjacent} a_i b_j).
    let gram = system.simple_gram();
    let eps_parity = |a: &[i64], b: &[i64]| -> bool {
        let mut parity = 0i64;
        for i in 0..rank {
            if a[i] & 1 == 0 {
                continue;
            }
            parity += b[i];
            for j in i + 1..rank {
                if gram[i][j] != 0 {
                    parity += b[j];
                }
            }
        }
        parity & 1 == 1
    };
    let positive = |coords: &[i64]| coords.iter().all(|&c| c >= 0);
    let sign_of = |idx: usize| if positive(&system.simple_coords[idx]) { 1i64 } else { -1 };

    let pairing: Vec<Vec<i64>> = (0..rank)
        .map(|i| roots.iter().map(|r| system.inner(&system.simple_roots[i], r)).collect())
        .collect();

    let mut table: Vec<BasisBracket> = vec![Vec::new(); dim * dim];
    for a in 0..dim {
        for b in a + 1..dim {
            let entry: BasisBracket = if b < rank {
                Vec::new()
            } else if a < rank {
                // [h_a, e_r]
                let r = b - rank;
                let p = pairing[a][r];
                if p == 0 {
                    Vec::new()
                } else {
                    vec![(b, p)]
                }
            } else {
                let (ri, si) = (a - rank, b - rank);
                let sum: Coords = roots[ri].iter().zip(&roots[si]).map(|(&x, &y)| x + y).collect();
                if sum.iter().all(|&c| c == 0) {
                    // [e_r, e_{-r}] = h_r
                    system.simple_coords[ri]
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (i, c))
                        .collect()
                } else if let Some(sum_idx) = system.root_index(&sum) {
                    let ca = &system.simple_coords[ri];
                    let cb = &system.simple_coords[si];
                    let mut n = if eps_parity(ca, cb) { -1 } else { 1 };
                    n *= sign_of(ri) * sign_of(si) * sign_of(sum_idx);
                    vec![(rank + sum_idx, n)]
                } else {
                    Vec::new()
                }
            };
            let neg: BasisBracket = entry.iter().map(|&(i, c)| (i, -c)).collect();
            table[a * dim + b] = entry;
            table[b * dim + a] = neg;
        }
    }

    Ok(Arc::new(LieAlgebra {
        id: NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed),
        system: Arc::clone(system),
        rank,
        dim,
        table,
    }))
}

impl LieAlgebra {
    fn element(&self, coeffs: BTreeMap<usize, Rational>) -> Element {
        Element { alg_id: self.id, coeffs }
    }

    pub fn zero(&self) -> Element {
        self.element(BTreeMap::new())
    }

    /// Cartan generator for the `i`-th simple root.
    pub fn h(&self, i: usize) -> Element {
        assert!(i < self.rank);
        self.element(BTreeMap::from([(i, rat_int(1))]))
    }

    /// Root-space generator.
    pub fn e(&self, root: &[i64]) -> Result<Element> {
        let idx = self.system.root_index(root).ok_or_else(|| {
            Error::Invalid(format!("{root:?} is not a root of {}", self.system.label))
        })?;
        Ok(self.element(BTreeMap::from([(self.rank + idx, rat_int(1))])))
    }

    pub fn basis_element(&self, i: usize) -> Element {
        assert!(i < self.dim);
        self.element(BTreeMap::from([(i, rat_int(1))]))
    }

    /// Human-readable basis legend: `h1..hm`, then each root.
    pub fn basis_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.rank).map(|i| format!("h{i}")).collect();
        for r in &self.system.roots {
            names.push(format!("e{r:?}"));
        }
        names
    }

    pub(crate) fn basis_bracket(&self, a: usize, b: usize) -> &[(usize, i64)] {
        &self.table[a * self.dim + b]
    }

    /// Bilinear bracket of two elements.
    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        if x.alg_id != self.id || y.alg_id != self.id {
            return Err(Error::AmbientMismatch);
        }
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (&a, ca) in &x.coeffs {
            for (&b, cb) in &y.coeffs {
                for &(k, n) in self.basis_bracket(a, b) {
                    let term = ca * cb * rat_int(n);
                    let v = acc.entry(k).or_insert_with(Rational::zero);
                    *v += term;
                    if v.is_zero() {
                        acc.remove(&k);
                    }
                }
            }
        }
        Ok(self.element(acc))
    }

    /// Exhaustive Jacobi check over all unordered basis triples, run on
    /// `jobs` threads (deterministic first witness).
    pub fn verify_jacobi(&self, jobs: usize) -> JacobiReport {
        let dim = self.dim;
        let total = dim * (dim - 1) * (dim - 2) / 6;
        let jobs = jobs.max(1).min(dim.max(1));
        let check_range = |a_lo: usize, a_hi: usize| -> Option<(usize, usize, usize)> {
            let mut scratch = vec![0i64; dim];
            let mut touched: Vec<usize> = Vec::with_capacity(32);
            for a in a_lo..a_hi {
                for b in a + 1..dim {
                    for c in b + 1..dim {
                        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                            for &(k, n) in self.basis_bracket(x, y) {
                                for &(m, p) in self.basis_bracket(k, z) {
                                    if scratch[m] == 0 {
                                        touched.push(m);
                                    }
                                    scratch[m] += n * p;
                                }
                            }
                        }
                        let mut bad = false;
                        for &m in &touched {
                            if scratch[m] != 0 {
                                bad = true;
                            }
                            scratch[m] = 0;
                        }
                        touched.clear();
                        if bad {
                            return Some((a, b, c));
                        }
                    }
                }
            }
            None
        };
        let witness = if jobs == 1 {
            check_range(0, dim)
        } else {
            let chunk = dim.div_ceil(jobs);
            let mut results: Vec<Option<(usize, usize, usize)>> = Vec::new();
            std::thread::scope(|scope| {
                let mut handles = Vec::new();
                for j in 0..jobs {
                    let lo = j * chunk;
                    let hi = ((j + 1) * chunk).min(dim);
                    let check = &check_range;
                    handles.push(scope.spawn(move || check(lo, hi)));
                }
                for h in handles {
                    results.push(h.join().expect("jacobi worker panicked"));
                }
            });
            results.into_iter().flatten().min()
        };
        JacobiReport { pass: witness.is_none(), triples_checked: total, witness }
    }

    /// Wraps a spanning set as a subalgebra, verifying bracket closure.
    pub fn subalgebra(&self, spanning: Vec<Element>) -> Result<Subalgebra> {
        let mut span = SpanBuilder::new(self.dim);
        for el in &spanning {
            if el.alg_id != self.id {
                return Err(Error::AmbientMismatch);
            }
            span.insert(&el.dense(self.dim));
        }
        for (i, x) in spanning.iter().enumerate() {
            for y in spanning.iter().skip(i + 1) {
                let br = self.bracket(x, y)?;
                if !span.contains(&br.dense(self.dim)) {
                    return Err(Error::Invalid(
                        "spanning set is not closed under the bracket".into(),
                    ));
                }
            }
        }
        Ok(Subalgebra { alg_id: self.id, spanning, span, closed: true })
    }

    /// The graded pieces `g(-1), g(0), g(1)` of a 3-grading, with the
    /// bracket-compatibility and abelian checks done exhaustively on basis
    /// elements.
    pub fn graded_pieces(&self, grading: &ThreeGrading) -> Result<GradedPieces> {
        if grading.system.as_ref() != self.system.as_ref() {
            return Err(Error::AmbientMismatch);
        }
        self.graded_pieces_from_parts(&grading.phi_minus, &grading.phi_zero, &grading.phi_plus)
    }

    /// Graded pieces from explicit root parts; the zero piece always
    /// includes the full Cartan subalgebra.
    pub fn graded_pieces_from_parts(
        &self,
        phi_minus: &[Coords],
        phi_zero: &[Coords],
        phi_plus: &[Coords],
    ) -> Result<GradedPieces> {
        let mut grade = vec![i64::MAX; self.dim];
        for g in grade.iter_mut().take(self.rank) {
            *g = 0;
        }
        for (part, g) in [(phi_minus, -1i64), (phi_zero, 0), (phi_plus, 1)] {
            for r in part {
                let idx = self.system.root_index(r).ok_or_else(|| {
                    Error::InvalidGrading(format!("{r:?} is not a root of {}", self.system.label))
                })?;
                grade[self.rank + idx] = g;
            }
        }
        if grade.iter().any(|&g| g == i64::MAX) {
            return Err(Error::InvalidGrading("parts do not cover the root system".into()));
        }
        // [g(i), g(j)] lies in g(i+j); nonzero brackets outside -1..1 are
        // impossible for a valid 3-grading.
        for a in 0..self.dim {
            for b in a + 1..self.dim {
                let expect = grade[a] + grade[b];
                for &(k, _) in self.basis_bracket(a, b) {
                    if grade[k] != expect {
                        return Err(Error::InvalidGrading(format!(
                            "bracket of grades {} and {} lands in grade {}",
                            grade[a], grade[b], grade[k]
                        )));
                    }
                }
            }
        }
        let piece = |g: i64, with_cartan: bool| -> Result<Subalgebra> {
            let mut spanning = Vec::new();
            if with_cartan {
                for i in 0..self.rank {
                    spanning.push(self.h(i));
                }
            }
            for (idx, &gr) in grade.iter().enumerate().skip(self.rank) {
                if gr == g {
                    spanning.push(self.basis_element(idx));
                }
            }
            self.subalgebra(spanning)
        };
        let minus = piece(-1, false)?;
        let zero = piece(0, true)?;
        let plus = piece(1, false)?;
        // g(+1) and g(-1) are abelian: their basis brackets vanish pairwise.
        for side in [&minus, &plus] {
            for (i, x) in side.spanning.iter().enumerate() {
                for y in side.spanning.iter().skip(i + 1) {
                    if !self.bracket(x, y)?.is_zero() {
                        return Err(Error::InvalidGrading("unit piece is not abelian".into()));
                    }
                }
            }
        }
        Ok(GradedPieces { minus, zero, plus })
    }

    /// Span of all pairwise brackets of a subalgebra's spanning set.
    pub fn derived_subalgebra(&self, s: &Subalgebra) -> Result<Subalgebra> {
        if s.alg_id != self.id {
            return Err(Error::AmbientMismatch);
        }
        let mut span = SpanBuilder::new(self.dim);
        let mut spanning = Vec::new();
        for (i, x) in s.spanning.iter().enumerate() {
            for y in s.spanning.iter().skip(i + 1) {
                let br = self.bracket(x, y)?;
                if !br.is_zero() && span.insert(&br.dense(self.dim)) {
                    spanning.push(br);
                }
            }
        }
        self.subalgebra(spanning)
    }

    /// Roots whose generators lie in the subalgebra's span.
    pub fn root_part(&self, s: &Subalgebra) -> Vec<Coords> {
        self.system
            .roots
            .iter()
            .enumerate()
            .filter(|(i, _)| s.contains(&self.basis_element(self.rank + i), self.dim))
            .map(|(_, r)| r.clone())
            .collect()
    }

    /// Centralizer `{x : [x, s] = 0 for all s in S}`, by exact nullspace
    /// computation against the spanning set of `S`.
    pub fn centralizer(&self, s: &Subalgebra) -> Result<Subalgebra> {
        if s.alg_id != self.id {
            return Err(Error::AmbientMismatch);
        }
        // Row space of all linear constraints on x.
        let mut rows = SpanBuilder::new(self.dim);
        'outer: for v in &s.spanning {
            // Constraint block: coefficient of output coordinate m in
            // [basis_a, v], one row per reachable m.
            let mut block: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
            for a in 0..self.dim {
                for (&b, cb) in &v.coeffs {
                    for &(m, n) in self.basis_bracket(a, b) {
                        let row =
                            block.entry(m).or_insert_with(|| vec![Rational::zero(); self.dim]);
                        row[a] += cb * rat_int(n);
                    }
                }
            }
            for row in block.values() {
                if row.iter().any(|c| !c.is_zero()) {
                    rows.insert(row);
                    if rows.rank() == self.dim {
                        break 'outer;
                    }
                }
            }
        }
        let kernel: Vec<Vec<Rational>> = if rows.rank() == 0 {
            (0..self.dim).map(|i| self.basis_element(i).dense(self.dim)).collect()
        } else {
            let m = QMatrix::from_fn(rows.rank(), self.dim, |i, j| rows.basis()[i][j].clone());
            m.nullspace()
        };
        let spanning: Vec<Element> = kernel
            .into_iter()
            .map(|v| {
                self.element(v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
            })
            .collect();
        self.subalgebra(spanning)
    }

    /// `sum_i a_i <s_i, r>`: the eigenvalue of `sum_i a_i h_i` on the root
    /// space of `r`.
    pub fn cartan_eigenvalue(&self, labels: &[Rational], r: &[i64]) -> Result<Rational> {
        if labels.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: labels.len() });
        }
        if self.system.root_index(r).is_none() {
            return Err(Error::Invalid(format!("{r:?} is not a root of {}", self.system.label)));
        }
        let mut acc = Rational::zero();
        for (i, a) in labels.iter().enumerate() {
            if !a.is_zero() {
                acc += a * rat_int(self.system.inner(&self.system.simple_roots[i], r));
            }
        }
        Ok(acc)
    }

    /// Structure constants as JSON: a basis legend plus all nonzero
    /// brackets `{x, y, result: [[index, "p/q"], ...]}` for `x < y`.
    pub fn constants_to_json(&self) -> serde_json::Value {
        let mut triples = Vec::new();
        for a in 0..self.dim {
            for b in a + 1..self.dim {
                let entry = self.basis_bracket(a, b);
                if entry.is_empty() {
                    continue;
                }
                triples.push(serde_json::json!({
                    "x": a,
                    "y": b,
                    "result": entry
                        .iter()
                        .map(|&(k, n)| serde_json::json!([k, rational_to_string(&rat_int(n))]))
                        .collect::<Vec<_>>(),
                }));
            }
        }
        serde_json::json!({
            "label": self.system.label.to_string(),
            "dim": self.dim,
            "rank": self.rank,
            "basis": self.basis_names(),
            "brackets": triples,
        })
    }

    /// Subalgebra spanned by chosen Cartan generators plus chosen root
    /// generators (e.g. the standard-model algebra inside e7).
    pub fn span_subalgebra(&self, cartan: &[usize], roots: &[Coords]) -> Result<Subalgebra> {
        let mut spanning: Vec<Element> = cartan.iter().map(|&i| self.h(i)).collect();
        for r in roots {
            spanning.push(self.e(r)?);
        }
        self.subalgebra(spanning)
    }

    pub fn label(&self) -> &TypeLabel {
        &self.system.label
    }
}
