//! Exact construction, identification, and lattice geometry of root systems.
//!
//! Roots are integer coordinate vectors over a fixed ambient basis, with all
//! inner products taken through the ambient Gram matrix. A freshly built
//! system's ambient basis is its own simple roots (so the Gram matrix is the
//! Cartan form); a subsystem carved out of a larger system keeps the parent's
//! ambient basis, which is what lets nested gradings compare root subsets by
//! literal equality rather than up to isomorphism.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::{enumerate_norm_bounded, int_inner, int_norm, QMatrix};
use crate::rational::{rat_int, to_integer, Rational};

/// Integer coordinates over an ambient basis.
pub type Coords = Vec<i64>;

/// The ambient quadratic space: a positive definite integer Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ambient {
    pub gram: Vec<Vec<i64>>,
}

impl Ambient {
    pub fn new(gram: Vec<Vec<i64>>) -> Self {
        Ambient { gram }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn inner(&self, x: &[i64], y: &[i64]) -> i64 {
        int_inner(&self.gram, x, y)
    }

    pub fn norm(&self, x: &[i64]) -> i64 {
        int_norm(&self.gram, x)
    }

    /// Inner product of rational coordinate vectors.
    pub fn inner_rational(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let n = self.dim();
        let mut acc = rat_int(0);
        for i in 0..n {
            if x[i] == rat_int(0) {
                continue;
            }
            for j in 0..n {
                if self.gram[i][j] != 0 && y[j] != rat_int(0) {
                    acc += &x[i] * rat_int(self.gram[i][j]) * &y[j];
                }
            }
        }
        acc
    }

    /// Inner product of a rational vector with an integer vector.
    pub fn inner_mixed(&self, x: &[Rational], y: &[i64]) -> Rational {
        let n = self.dim();
        let mut acc = rat_int(0);
        for i in 0..n {
            if x[i] == rat_int(0) {
                continue;
            }
            let mut row = 0i64;
            for j in 0..n {
                if y[j] != 0 {
                    row += self.gram[i][j] * y[j];
                }
            }
            if row != 0 {
                acc += &x[i] * rat_int(row);
            }
        }
        acc
    }
}

/// Dynkin families, ordered so product labels sort as `A1xA2`, `A1xB2`, ...
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// An irreducible type such as `A4`, `E7`, `G2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IrredLabel {
    pub family: Family,
    pub rank: usize,
}

impl IrredLabel {
    pub const fn new(family: Family, rank: usize) -> Self {
        IrredLabel { family, rank }
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }

    /// Validates against the catalog (rank at most 8).
    pub fn validate(&self) -> Result<()> {
        let ok = match self.family {
            Family::A => (1..=8).contains(&self.rank),
            // D2 and D3 are accepted internally (A1xA1 and A3 shapes).
            Family::B | Family::C | Family::D => (2..=8).contains(&self.rank),
            Family::E => (6..=8).contains(&self.rank),
            Family::F => self.rank == 4,
            Family::G => self.rank == 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnsupportedLabel(self.to_string()))
        }
    }

    /// Number of roots the catalog expects for this type.
    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Family::F => 48,
            Family::G => 12,
        }
    }
}

impl fmt::Display for IrredLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for IrredLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::UnsupportedLabel(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnsupportedLabel(s.to_string()))?;
        let label = IrredLabel::new(family, rank);
        label.validate()?;
        Ok(label)
    }
}

/// Isomorphism type of a (possibly reducible or empty) root system.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeLabel {
    Empty,
    Irreducible(IrredLabel),
    /// At least two factors, kept sorted.
    Product(Vec<IrredLabel>),
}

impl TypeLabel {
    pub fn from_components(mut comps: Vec<IrredLabel>) -> Self {
        comps.sort();
        match comps.len() {
            0 => TypeLabel::Empty,
            1 => TypeLabel::Irreducible(comps[0]),
            _ => TypeLabel::Product(comps),
        }
    }

    pub fn is_irreducible(&self) -> bool {
        matches!(self, TypeLabel::Irreducible(_))
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeLabel::Empty => write!(f, "∅"),
            TypeLabel::Irreducible(l) => write!(f, "{l}"),
            TypeLabel::Product(ls) => {
                let parts: Vec<String> = ls.iter().map(IrredLabel::to_string).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

impl FromStr for TypeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "∅" || s.eq_ignore_ascii_case("empty") {
            return Ok(TypeLabel::Empty);
        }
        let comps: Result<Vec<IrredLabel>> =
            s.split(['x', 'X']).map(IrredLabel::from_str).collect();
        Ok(TypeLabel::from_components(comps?))
    }
}

/// A finite root set with its ambient form, simple system, and the integer
/// coordinates of every root over that simple system.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub label: TypeLabel,
    pub ambient: Arc<Ambient>,
    pub simple_roots: Vec<Coords>,
    /// All roots, sorted lexicographically.
    pub roots: Vec<Coords>,
    /// `simple_coords[i]` expresses `roots[i]` over `simple_roots`.
    pub simple_coords: Vec<Coords>,
    root_set: HashSet<Coords>,
}

impl PartialEq for RootSystem {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.roots == other.roots
    }
}
impl Eq for RootSystem {}

impl RootSystem {
    fn assemble(
        label: TypeLabel,
        ambient: Arc<Ambient>,
        simple_roots: Vec<Coords>,
        mut roots: Vec<Coords>,
    ) -> Result<Self> {
        roots.sort();
        roots.dedup();
        let root_set: HashSet<Coords> = roots.iter().cloned().collect();
        let simple_coords = coords_over_basis(&ambient, &simple_roots, &roots)?;
        Ok(RootSystem { label, ambient, simple_roots, roots, simple_coords, root_set })
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn contains(&self, r: &[i64]) -> bool {
        self.root_set.contains(r)
    }

    pub fn inner(&self, r: &[i64], s: &[i64]) -> i64 {
        self.ambient.inner(r, s)
    }

    pub fn norm(&self, r: &[i64]) -> i64 {
        self.ambient.norm(r)
    }

    pub fn is_simply_laced(&self) -> bool {
        self.roots.iter().all(|r| self.norm(r) == 2)
    }

    /// Gram matrix of the simple roots.
    pub fn simple_gram(&self) -> Vec<Vec<i64>> {
        let m = self.simple_roots.len();
        (0..m)
            .map(|i| (0..m).map(|j| self.inner(&self.simple_roots[i], &self.simple_roots[j])).collect())
            .collect()
    }

    /// Index of a root in `self.roots`.
    pub fn root_index(&self, r: &[i64]) -> Option<usize> {
        self.roots.binary_search_by(|probe| probe.as_slice().cmp(r)).ok()
    }

    /// Roots whose simple-basis coordinates are all non-negative, in the
    /// fixed (height, then lexicographic) order used for sign conventions.
    pub fn positive_roots(&self) -> Vec<usize> {
        let mut pos: Vec<usize> = (0..self.roots.len())
            .filter(|&i| self.simple_coords[i].iter().all(|&c| c >= 0))
            .collect();
        pos.sort_by_key(|&i| {
            (self.simple_coords[i].iter().sum::<i64>(), self.simple_coords[i].clone())
        });
        pos
    }

    /// The positive root of greatest height (requires irreducibility).
    pub fn highest_root(&self) -> Coords {
        let pos = self.positive_roots();
        let &last = pos.last().expect("nonempty root system");
        self.roots[last].clone()
    }

    /// True when reflection in every root maps the root set onto itself.
    pub fn is_reflection_closed(&self) -> bool {
        reflection_closed(&self.ambient, &self.roots, &self.root_set)
    }
}

/// Weyl reflection of `s` in a norm-2 root `r`: `s - <r,s> r`.
pub fn reflect(ambient: &Ambient, r: &[i64], s: &[i64]) -> Coords {
    debug_assert_eq!(ambient.norm(r), 2, "reflect expects a norm-2 root");
    let c = ambient.inner(r, s);
    s.iter().zip(r).map(|(&si, &ri)| si - c * ri).collect()
}

/// General reflection `s - (2<r,s>/<r,r>) r`; `None` when the Cartan
/// coefficient is not an integer (the pair is then not crystallographic).
pub fn reflect_general(ambient: &Ambient, r: &[i64], s: &[i64]) -> Option<Coords> {
    let num = 2 * ambient.inner(r, s);
    let den = ambient.norm(r);
    if num % den != 0 {
        return None;
    }
    let c = num / den;
    Some(s.iter().zip(r).map(|(&si, &ri)| si - c * ri).collect())
}

fn reflection_closed(ambient: &Ambient, roots: &[Coords], set: &HashSet<Coords>) -> bool {
    roots.iter().all(|r| {
        roots.iter().all(|s| match reflect_general(ambient, r, s) {
            Some(t) => set.contains(&t),
            None => false,
        })
    })
}

/// Closes a seed set under reflection in its own members.
fn close_under_reflection(ambient: &Ambient, seeds: &[Coords]) -> Vec<Coords> {
    let mut set: HashSet<Coords> = seeds.iter().cloned().collect();
    for s in seeds {
        set.insert(s.iter().map(|&c| -c).collect());
    }
    let mut queue: Vec<Coords> = set.iter().cloned().collect();
    while let Some(r) = queue.pop() {
        let current: Vec<Coords> = set.iter().cloned().collect();
        for s in current {
            for t in [reflect_general(ambient, &r, &s), reflect_general(ambient, &s, &r)] {
                if let Some(t) = t {
                    if set.insert(t.clone()) {
                        queue.push(t);
                    }
                }
            }
        }
    }
    let mut out: Vec<Coords> = set.into_iter().collect();
    out.sort();
    out
}

/// Dynkin diagram edges (1-based standard numbering) for a simply-laced type.
/// E types use the chain 1-3-4-5-6[-7[-8]] with node 2 attached to node 4.
fn dynkin_edges(label: IrredLabel) -> Vec<(usize, usize)> {
    let n = label.rank;
    match label.family {
        Family::A => (1..n).map(|i| (i, i + 1)).collect(),
        Family::D => {
            if n == 2 {
                return Vec::new();
            }
            let mut e: Vec<(usize, usize)> = (1..n - 2).map(|i| (i, i + 1)).collect();
            e.push((n - 2, n - 1));
            e.push((n - 2, n));
            e
        }
        Family::E => {
            let mut e = vec![(1, 3), (3, 4), (2, 4)];
            for i in 4..n {
                e.push((i, i + 1));
            }
            e
        }
        _ => unreachable!("dynkin_edges is for simply-laced types"),
    }
}

/// Builds an A/D/E root system by closing its simple roots under reflection.
/// D2 and D3 are accepted for internal use (they are A1xA1 and A3 in shape,
/// with the D-family basis).
pub fn build_simply_laced(label: IrredLabel) -> Result<Arc<RootSystem>> {
    label.validate()?;
    if !label.is_simply_laced() {
        return Err(Error::UnsupportedLabel(label.to_string()));
    }
    if label.family == Family::E && label.rank < 6 {
        return Err(Error::UnsupportedLabel(label.to_string()));
    }
    let n = label.rank;
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..n {
        gram[i][i] = 2;
    }
    for (a, b) in dynkin_edges(label) {
        gram[a - 1][b - 1] = -1;
        gram[b - 1][a - 1] = -1;
    }
    let ambient = Arc::new(Ambient::new(gram));
    let simple: Vec<Coords> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let roots = close_under_reflection(&ambient, &simple);
    let system = RootSystem::assemble(TypeLabel::Irreducible(label), ambient, simple, roots)?;
    debug_assert_eq!(system.roots.len(), label.root_count());
    Ok(Arc::new(system))
}

/// Expresses each of `vectors` as an integer combination of `basis`
/// (rational solve against the basis Gram, then an integrality check).
fn coords_over_basis(
    ambient: &Ambient,
    basis: &[Coords],
    vectors: &[Coords],
) -> Result<Vec<Coords>> {
    let m = basis.len();
    if m == 0 {
        return if vectors.is_empty() {
            Ok(Vec::new())
        } else {
            Err(Error::Invalid("empty basis for a nonempty root set".into()))
        };
    }
    let gram_q = QMatrix::from_fn(m, m, |i, j| rat_int(ambient.inner(&basis[i], &basis[j])));
    let inv = gram_q
        .inverse()
        .ok_or_else(|| Error::Invalid("degenerate simple-root Gram matrix".into()))?;
    let mut out = Vec::with_capacity(vectors.len());
    for v in vectors {
        let rhs: Vec<Rational> = basis.iter().map(|b| rat_int(ambient.inner(b, v))).collect();
        let sol = inv.mul_vec(&rhs);
        let mut coords = Vec::with_capacity(m);
        for c in &sol {
            coords.push(to_integer(c).ok_or_else(|| {
                Error::Invalid(format!("vector {v:?} is not an integer combination of the basis"))
            })?);
        }
        // Confirm the combination reproduces v (the basis must span it).
        let dim = ambient.dim();
        let mut rebuilt = vec![0i64; dim];
        for (c, b) in coords.iter().zip(basis) {
            for (x, &bi) in rebuilt.iter_mut().zip(b) {
                *x += c * bi;
            }
        }
        if rebuilt != *v {
            return Err(Error::Invalid(format!("vector {v:?} lies outside the basis span")));
        }
        out.push(coords);
    }
    Ok(out)
}

/// Simple system of a reflection-closed root set: the lexicographically
/// positive roots that are not sums of two positive roots.
pub fn compute_simple_system(roots: &[Coords]) -> Vec<Coords> {
    let positive: Vec<Coords> = roots
        .iter()
        .filter(|r| r.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0))
        .cloned()
        .collect();
    let pos_set: HashSet<Coords> = positive.iter().cloned().collect();
    let mut simple: Vec<Coords> = positive
        .iter()
        .filter(|r| {
            !positive.iter().any(|s| {
                if s == *r {
                    return false;
                }
                let diff: Coords = r.iter().zip(s).map(|(&a, &b)| a - b).collect();
                pos_set.contains(&diff)
            })
        })
        .cloned()
        .collect();
    simple.sort();
    simple
}

/// Catalog Cartan matrix in the standard numbering. For B the last node is
/// short; for C the last node is long; F4's short pair sits at the tail.
pub fn catalog_cartan(label: IrredLabel) -> Vec<Vec<i64>> {
    let n = label.rank;
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        c[i][i] = 2;
    }
    let chain = |c: &mut Vec<Vec<i64>>, edges: &[(usize, usize)]| {
        for &(a, b) in edges {
            c[a - 1][b - 1] = -1;
            c[b - 1][a - 1] = -1;
        }
    };
    match label.family {
        Family::A | Family::D | Family::E => chain(&mut c, &dynkin_edges(label)),
        Family::B => {
            chain(&mut c, &(1..n).map(|i| (i, i + 1)).collect::<Vec<_>>());
            // 2<a_{n-1}, a_n>/<a_n, a_n> = -2 for the short terminal node
            c[n - 2][n - 1] = -2;
        }
        Family::C => {
            chain(&mut c, &(1..n).map(|i| (i, i + 1)).collect::<Vec<_>>());
            c[n - 1][n - 2] = -2;
        }
        Family::F => {
            chain(&mut c, &[(1, 2), (2, 3), (3, 4)]);
            c[1][2] = -2;
        }
        Family::G => {
            c[0][1] = -1;
            c[1][0] = -3;
        }
    }
    c
}

fn irreducible_candidates(rank: usize) -> Vec<IrredLabel> {
    let mut out = Vec::new();
    if (1..=8).contains(&rank) {
        out.push(IrredLabel::new(Family::A, rank));
    }
    if (2..=8).contains(&rank) {
        out.push(IrredLabel::new(Family::B, rank));
    }
    if (3..=8).contains(&rank) {
        out.push(IrredLabel::new(Family::C, rank));
    }
    if (4..=8).contains(&rank) {
        out.push(IrredLabel::new(Family::D, rank));
    }
    if (6..=8).contains(&rank) {
        out.push(IrredLabel::new(Family::E, rank));
    }
    if rank == 4 {
        out.push(IrredLabel::new(Family::F, 4));
    }
    if rank == 2 {
        out.push(IrredLabel::new(Family::G, 2));
    }
    out
}

/// Searches for permutations `p` with `a[p[i]][p[j]] == b[i][j]`, refined by
/// per-node degree/entry invariants. Rank is at most 8, so exhaustive
/// backtracking is cheap.
fn cartan_matches(a: &[Vec<i64>], b: &[Vec<i64>], first_only: bool) -> Vec<Vec<usize>> {
    let n = a.len();
    if b.len() != n {
        return Vec::new();
    }
    let invariant = |m: &[Vec<i64>], v: usize| {
        let mut pairs: Vec<(i64, i64)> = (0..n)
            .filter(|&u| u != v && (m[v][u] != 0 || m[u][v] != 0))
            .map(|u| (m[v][u], m[u][v]))
            .collect();
        pairs.sort_unstable();
        pairs
    };
    let inv_a: Vec<_> = (0..n).map(|v| invariant(a, v)).collect();
    let inv_b: Vec<_> = (0..n).map(|v| invariant(b, v)).collect();
    let mut found = Vec::new();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        n: usize,
        a: &[Vec<i64>],
        b: &[Vec<i64>],
        inv_a: &[Vec<(i64, i64)>],
        inv_b: &[Vec<(i64, i64)>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        found: &mut Vec<Vec<usize>>,
        first_only: bool,
    ) {
        if i == n {
            found.push(map.clone());
            return;
        }
        for t in 0..n {
            if used[t] || inv_a[t] != inv_b[i] {
                continue;
            }
            if (0..i).any(|j| a[t][map[j]] != b[i][j] || a[map[j]][t] != b[j][i]) {
                continue;
            }
            map[i] = t;
            used[t] = true;
            go(i + 1, n, a, b, inv_a, inv_b, map, used, found, first_only);
            used[t] = false;
            map[i] = usize::MAX;
            if first_only && !found.is_empty() {
                return;
            }
        }
    }
    go(0, n, a, b, &inv_a, &inv_b, &mut map, &mut used, &mut found, first_only);
    found
}

/// A permutation sending computed node `i` to standard node `match[i]`,
/// when the computed Cartan matrix is the standard one up to reordering.
pub fn cartan_match(standard: &[Vec<i64>], computed: &[Vec<i64>]) -> Option<Vec<usize>> {
    cartan_matches(standard, computed, true).into_iter().next()
}

/// All diagram automorphisms of a catalog type, as node permutations on the
/// standard numbering.
pub fn diagram_automorphisms(label: IrredLabel) -> Vec<Vec<usize>> {
    let c = catalog_cartan(label);
    cartan_matches(&c, &c, false)
}

/// Connected components of a root set under the non-orthogonality relation,
/// as sorted index lists.
fn root_components(ambient: &Ambient, roots: &[Coords]) -> Vec<Vec<usize>> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if ambient.inner(&roots[i], &roots[j]) != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Identifies the isomorphism type of a reflection-closed root set by
/// decomposing it into irreducible components and matching each component's
/// Cartan matrix against the catalog up to node permutation.
pub fn identify_type(ambient: &Ambient, roots: &[Coords]) -> Result<TypeLabel> {
    if roots.is_empty() {
        return Ok(TypeLabel::Empty);
    }
    let set: HashSet<Coords> = roots.iter().cloned().collect();
    for r in roots {
        let neg: Coords = r.iter().map(|&c| -c).collect();
        if !set.contains(&neg) {
            return Err(Error::NotARootSystem(format!("not closed under negation at {r:?}")));
        }
    }
    if !reflection_closed(ambient, roots, &set) {
        return Err(Error::NotARootSystem("not closed under reflection".into()));
    }
    let mut labels = Vec::new();
    for comp in root_components(ambient, roots) {
        let comp_roots: Vec<Coords> = comp.iter().map(|&i| roots[i].clone()).collect();
        let simple = compute_simple_system(&comp_roots);
        let rank = simple.len();
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| 2 * ambient.inner(&simple[i], &simple[j]) / ambient.norm(&simple[j]))
                    .collect()
            })
            .collect();
        let label = irreducible_candidates(rank)
            .into_iter()
            .find(|&cand| {
                cand.root_count() == comp_roots.len()
                    && cartan_match(&catalog_cartan(cand), &cartan).is_some()
            })
            .ok_or(Error::UnknownCartan { rank, roots: comp_roots.len() })?;
        labels.push(label);
    }
    Ok(TypeLabel::from_components(labels))
}

/// Wraps a reflection-closed subset of a parent system as a root system in
/// its own right, sharing the parent's ambient basis.
pub fn subsystem_from_roots(parent: &RootSystem, roots: Vec<Coords>) -> Result<RootSystem> {
    for r in &roots {
        if !parent.contains(r) {
            return Err(Error::Invalid(format!("{r:?} is not a root of {}", parent.label)));
        }
    }
    let label = identify_type(&parent.ambient, &roots)?;
    let simple = compute_simple_system(&roots);
    RootSystem::assemble(label, Arc::clone(&parent.ambient), simple, roots)
}

/// The `k`-th layer of the lattice spanned by the system's simple roots:
/// all lattice vectors of the `k`-th smallest positive norm, in ambient
/// coordinates. Only layers 1 and 2 are supported.
pub fn lattice_layer(system: &RootSystem, k: usize) -> Result<Vec<Coords>> {
    if k == 0 || k > 2 {
        return Err(Error::UnsupportedLayer(k));
    }
    let gram = system.simple_gram();
    let mut bound = 4i64;
    loop {
        let vectors = enumerate_norm_bounded(&gram, bound);
        let mut norms: Vec<i64> = vectors.iter().map(|v| int_norm(&gram, v)).collect();
        norms.sort_unstable();
        norms.dedup();
        if norms.len() >= k {
            let target = norms[k - 1];
            let dim = system.ambient.dim();
            let mut layer: Vec<Coords> = vectors
                .into_iter()
                .filter(|v| int_norm(&gram, v) == target)
                .map(|v| {
                    let mut amb = vec![0i64; dim];
                    for (c, b) in v.iter().zip(&system.simple_roots) {
                        for (x, &bi) in amb.iter_mut().zip(b) {
                            *x += c * bi;
                        }
                    }
                    amb
                })
                .collect();
            layer.sort();
            return Ok(layer);
        }
        bound *= 2;
    }
}

/// Builds B_n, C_n, G2, or F4 from lattice layers of a simply-laced system:
/// B_n is the A1^n roots plus the second layer of Z^n; C_n is D_n plus the
/// layer-2 orthogonal frame whose reflections preserve D_n; G2 and F4 are
/// the first two layers of the A2 and D4 lattices.
pub fn build_non_simply_laced(label: IrredLabel) -> Result<Arc<RootSystem>> {
    label.validate()?;
    let system = match label.family {
        Family::B => {
            // A1^n base: n mutually orthogonal norm-2 lines spanning Z^n.
            let n = label.rank;
            let mut gram = vec![vec![0i64; n]; n];
            for i in 0..n {
                gram[i][i] = 2;
            }
            let ambient = Arc::new(Ambient::new(gram));
            let simple: Vec<Coords> =
                (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
            let mut roots: Vec<Coords> = Vec::new();
            for i in 0..n {
                let mut v = vec![0i64; n];
                v[i] = 1;
                roots.push(v.clone());
                v[i] = -1;
                roots.push(v);
            }
            let a1n = RootSystem::assemble(
                TypeLabel::from_components(vec![IrredLabel::new(Family::A, 1); n]),
                Arc::clone(&ambient),
                simple,
                roots.clone(),
            )?;
            let layer2 = lattice_layer(&a1n, 2)?;
            roots.extend(layer2);
            let simple_full = compute_simple_system(&roots);
            RootSystem::assemble(TypeLabel::Irreducible(label), ambient, simple_full, roots)?
        }
        Family::C => {
            let n = label.rank;
            let base = build_simply_laced(IrredLabel::new(Family::D, n))?;
            let layer2 = lattice_layer(&base, 2)?;
            // Keep the layer-2 vectors whose reflections preserve the D_n roots.
            let keep: Vec<Coords> = layer2
                .into_iter()
                .filter(|v| {
                    base.roots.iter().all(|r| {
                        reflect_general(&base.ambient, v, r)
                            .is_some_and(|t| base.contains(&t))
                    })
                })
                .collect();
            let frame = orthogonal_frame(&base.ambient, &keep, n).ok_or_else(|| {
                Error::Invalid(format!("no orthogonal layer-2 frame found for {label}"))
            })?;
            let mut roots = base.roots.clone();
            for v in frame {
                roots.push(v.iter().map(|&c| -c).collect());
                roots.push(v);
            }
            let simple_full = compute_simple_system(&roots);
            RootSystem::assemble(
                TypeLabel::Irreducible(label),
                Arc::clone(&base.ambient),
                simple_full,
                roots,
            )?
        }
        Family::G | Family::F => {
            let base = if label.family == Family::G {
                build_simply_laced(IrredLabel::new(Family::A, 2))?
            } else {
                build_simply_laced(IrredLabel::new(Family::D, 4))?
            };
            let mut roots = lattice_layer(&base, 1)?;
            roots.extend(lattice_layer(&base, 2)?);
            let simple_full = compute_simple_system(&roots);
            RootSystem::assemble(
                TypeLabel::Irreducible(label),
                Arc::clone(&base.ambient),
                simple_full,
                roots,
            )?
        }
        _ => return Err(Error::UnsupportedLabel(label.to_string())),
    };
    if !system.is_reflection_closed() {
        return Err(Error::NotARootSystem(format!(
            "{label} construction is not reflection-closed"
        )));
    }
    Ok(Arc::new(system))
}

/// First pairwise-orthogonal subset of size `want` among the candidate
/// vectors (one per line), found by backtracking in canonical order.
fn orthogonal_frame(ambient: &Ambient, candidates: &[Coords], want: usize) -> Option<Vec<Coords>> {
    // One representative per line.
    let mut lines: Vec<Coords> = candidates
        .iter()
        .filter(|v| v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0))
        .cloned()
        .collect();
    lines.sort();
    fn go(
        ambient: &Ambient,
        lines: &[Coords],
        start: usize,
        picked: &mut Vec<Coords>,
        want: usize,
    ) -> bool {
        if picked.len() == want {
            return true;
        }
        for i in start..lines.len() {
            if picked.iter().all(|p| ambient.inner(p, &lines[i]) == 0) {
                picked.push(lines[i].clone());
                if go(ambient, lines, i + 1, picked, want) {
                    return true;
                }
                picked.pop();
            }
        }
        false
    }
    let mut picked = Vec::new();
    go(ambient, &lines, 0, &mut picked, want).then_some(picked)
}

/// JSON form `{"label", "gram", "roots"}` with roots in ambient coordinates.
pub fn root_system_to_json(system: &RootSystem) -> serde_json::Value {
    serde_json::json!({
        "label": system.label.to_string(),
        "gram": system.ambient.gram,
        "roots": system.roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(s: &str) -> IrredLabel {
        s.parse().unwrap()
    }

    #[test]
    fn catalog_root_counts_match_table() {
        for (name, count) in [
            ("A1", 2),
            ("A4", 20),
            ("A8", 72),
            ("D4", 24),
            ("D5", 40),
            ("D8", 112),
            ("E6", 72),
            ("E7", 126),
            ("E8", 240),
        ] {
            let sys = build_simply_laced(label(name)).unwrap();
            assert_eq!(sys.roots.len(), count, "{name}");
            assert_eq!(sys.rank(), label(name).rank);
            assert!(sys.is_simply_laced(), "{name}");
        }
    }

    #[test]
    fn a1_is_plus_minus_simple_root() {
        let a1 = build_simply_laced(label("A1")).unwrap();
        assert_eq!(a1.roots, vec![vec![-1], vec![1]]);
    }

    #[test]
    fn inner_products_on_e7_simple_roots() {
        let e7 = build_simply_laced(label("E7")).unwrap();
        for r in &e7.roots {
            assert_eq!(e7.norm(r), 2);
        }
        // Adjacent simple nodes pair to -1, non-adjacent to 0; the branch
        // node 2 hangs off node 4.
        let s = &e7.simple_roots;
        assert_eq!(e7.inner(&s[0], &s[2]), -1);
        assert_eq!(e7.inner(&s[1], &s[3]), -1);
        assert_eq!(e7.inner(&s[0], &s[1]), 0);
        assert_eq!(e7.inner(&s[1], &s[2]), 0);
        assert_eq!(e7.inner(&s[5], &s[6]), -1);
    }

    #[test]
    fn e7_node_deletions_match_the_nested_chain() {
        let e7 = build_simply_laced(label("E7")).unwrap();
        let support = |nodes: &[usize]| -> Vec<Coords> {
            e7.roots
                .iter()
                .filter(|r| r.iter().enumerate().all(|(i, &c)| c == 0 || nodes.contains(&(i + 1))))
                .cloned()
                .collect()
        };
        let id = |roots: Vec<Coords>| identify_type(&e7.ambient, &roots).unwrap();
        assert_eq!(id(support(&[1, 2, 3, 4, 5, 6])).to_string(), "E6");
        assert_eq!(id(support(&[1, 2, 3, 4, 5])).to_string(), "D5");
        assert_eq!(id(support(&[1, 2, 3, 4])).to_string(), "A4");
        assert_eq!(id(support(&[1, 2, 3])).to_string(), "A1xA2");
    }

    #[test]
    fn reflection_examples() {
        let a2 = build_simply_laced(label("A2")).unwrap();
        let s1 = &a2.simple_roots[0];
        let s2 = &a2.simple_roots[1];
        // reflect(r, r) = -r
        assert_eq!(reflect(&a2.ambient, s1, s1), vec![-1, 0]);
        // <s1,s2> = -1 so the reflection is the sum
        assert_eq!(reflect(&a2.ambient, s1, s2), vec![1, 1]);
        // Orthogonal roots are fixed.
        let d2 = build_simply_laced(label("D2")).unwrap();
        let t1 = &d2.simple_roots[0];
        let t2 = &d2.simple_roots[1];
        assert_eq!(reflect(&d2.ambient, t1, t2), *t2);
    }

    #[test]
    fn reflection_permutes_roots_in_every_catalog_system() {
        for name in ["A3", "A5", "D4", "D6", "E6", "E7"] {
            let sys = build_simply_laced(label(name)).unwrap();
            assert!(sys.is_reflection_closed(), "{name}");
        }
    }

    #[test]
    fn identify_round_trips_the_catalog() {
        for name in ["A1", "A2", "A4", "A7", "D4", "D5", "D8", "E6", "E7", "E8"] {
            let sys = build_simply_laced(label(name)).unwrap();
            let found = identify_type(&sys.ambient, &sys.roots).unwrap();
            assert_eq!(found, TypeLabel::Irreducible(label(name)), "{name}");
        }
    }

    #[test]
    fn identify_rejects_unclosed_sets_and_names_empty() {
        let a2 = build_simply_laced(label("A2")).unwrap();
        assert_eq!(identify_type(&a2.ambient, &[]).unwrap(), TypeLabel::Empty);
        assert_eq!(identify_type(&a2.ambient, &[]).unwrap().to_string(), "∅");
        // Dropping the negative of a root breaks negation closure.
        let broken: Vec<Coords> = a2.roots.iter().skip(1).cloned().collect();
        assert!(identify_type(&a2.ambient, &broken).is_err());
        // A negation-closed set that is not reflection-closed.
        let partial = vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]];
        assert!(identify_type(&a2.ambient, &partial).is_err());
    }

    #[test]
    fn e7_roots_orthogonal_to_a4_span_form_a2() {
        let e7 = build_simply_laced(label("E7")).unwrap();
        let a4_simple: Vec<&Coords> = e7.simple_roots[..4].iter().collect();
        let perp: Vec<Coords> = e7
            .roots
            .iter()
            .filter(|r| a4_simple.iter().all(|s| e7.inner(s, r) == 0))
            .cloned()
            .collect();
        assert_eq!(perp.len(), 6);
        assert_eq!(identify_type(&e7.ambient, &perp).unwrap().to_string(), "A2");
    }

    #[test]
    fn lattice_layer_of_a2_matches_brute_force() {
        let a2 = build_simply_laced(label("A2")).unwrap();
        // Oracle: scan a*s1 + b*s2 over |a|,|b| <= 3.
        let mut by_norm: BTreeMap<i64, Vec<Coords>> = BTreeMap::new();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let v = vec![a, b];
                let norm = a2.norm(&v);
                if norm > 0 {
                    by_norm.entry(norm).or_default().push(v);
                }
            }
        }
        let mut layer2_expect = by_norm[&6].clone();
        layer2_expect.sort();
        let layer1 = lattice_layer(&a2, 1).unwrap();
        let layer2 = lattice_layer(&a2, 2).unwrap();
        assert_eq!(layer1.len(), 6);
        assert!(layer1.iter().all(|v| a2.norm(v) == 2));
        assert_eq!(layer2, layer2_expect);
        assert_eq!(layer2.len(), 6);
        assert!(layer2.iter().all(|v| a2.norm(v) == 6));
        assert!(lattice_layer(&a2, 3).is_err());
    }

    #[test]
    fn layer_one_of_d4_is_its_root_set() {
        let d4 = build_simply_laced(label("D4")).unwrap();
        let layer1 = lattice_layer(&d4, 1).unwrap();
        assert_eq!(layer1, d4.roots);
        assert_eq!(layer1.len(), 24);
    }

    #[test]
    fn non_simply_laced_counts_and_norms() {
        // Frozen from the brute-force layer oracles: (label, total, short norm,
        // long norm, short count).
        for (name, total, norms, short_count) in [
            ("B3", 18, (2, 4), 6),
            ("C3", 18, (2, 4), 12),
            ("G2", 12, (2, 6), 6),
            ("F4", 48, (2, 4), 24),
            ("B2", 8, (2, 4), 4),
            ("C4", 32, (2, 4), 24),
        ] {
            let sys = build_non_simply_laced(label(name)).unwrap();
            assert_eq!(sys.roots.len(), total, "{name}");
            let shorts = sys.roots.iter().filter(|r| sys.norm(r) == norms.0).count();
            let longs = sys.roots.iter().filter(|r| sys.norm(r) == norms.1).count();
            assert_eq!(shorts, short_count, "{name}");
            assert_eq!(shorts + longs, total, "{name}");
            assert!(sys.is_reflection_closed(), "{name}");
            assert_eq!(sys.rank(), label(name).rank, "{name}");
        }
    }

    #[test]
    fn non_simply_laced_cartans_identify_correctly() {
        for name in ["B3", "C3", "C4", "G2", "F4"] {
            let sys = build_non_simply_laced(label(name)).unwrap();
            let found = identify_type(&sys.ambient, &sys.roots).unwrap();
            assert_eq!(found, TypeLabel::Irreducible(label(name)), "{name}");
        }
    }

    #[test]
    fn unsupported_labels_error() {
        assert!(build_simply_laced(label("G2")).is_err());
        assert!("E5".parse::<IrredLabel>().is_err());
        assert!("A9".parse::<IrredLabel>().is_err());
        assert!("H3".parse::<IrredLabel>().is_err());
    }

    #[test]
    fn product_labels_sort_and_parse() {
        let l: TypeLabel = "a2xa1".parse().unwrap();
        assert_eq!(l.to_string(), "A1xA2");
        let e: TypeLabel = "∅".parse().unwrap();
        assert_eq!(e, TypeLabel::Empty);
    }

    #[test]
    fn diagram_automorphism_counts() {
        assert_eq!(diagram_automorphisms(label("A4")).len(), 2);
        assert_eq!(diagram_automorphisms(label("D4")).len(), 6);
        assert_eq!(diagram_automorphisms(label("D5")).len(), 2);
        assert_eq!(diagram_automorphisms(label("E6")).len(), 2);
        assert_eq!(diagram_automorphisms(label("E7")).len(), 1);
    }

    #[test]
    fn subsystem_shares_ambient_and_identifies() {
        let e7 = build_simply_laced(label("E7")).unwrap();
        let sub_roots: Vec<Coords> = e7
            .roots
            .iter()
            .filter(|r| r[6] == 0 && r[5] == 0)
            .cloned()
            .collect();
        let sub = subsystem_from_roots(&e7, sub_roots).unwrap();
        assert_eq!(sub.label.to_string(), "D5");
        assert_eq!(sub.rank(), 5);
        assert_eq!(sub.roots.len(), 40);
        // Simple coordinates are integral by construction.
        for (r, c) in sub.roots.iter().zip(&sub.simple_coords) {
            let rebuilt: Coords = (0..e7.ambient.dim())
                .map(|d| c.iter().zip(&sub.simple_roots).map(|(&ci, s)| ci * s[d]).sum())
                .collect();
            assert_eq!(&rebuilt, r);
        }
    }
}
