//! Line systems of type (0,1/2): stars, star-closure, star-decomposition,
//! representation graphs, triads and generalized-quadrangle checks, the
//! equiangular absolute bound, and the classification of indecomposable
//! star-closed systems.

use std::collections::BTreeSet;
use std::sync::Arc;

use num::Zero;

use crate::error::{Error, Result};
use crate::graph::{srg_check, Graph, SrgOutcome};
use crate::rational::{rational_to_string, Rational};
use crate::roots::{Ambient, Coords, RootSystem};

/// A line through the origin, named by the spanning root whose first nonzero
/// coordinate is positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    pub rep: Coords,
}

impl Line {
    pub fn from_root(r: &[i64]) -> Line {
        let positive = r.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0);
        let rep = if positive { r.to_vec() } else { r.iter().map(|&c| -c).collect() };
        Line { rep }
    }
}

/// A set of lines spanned by norm-2 roots of an ambient system, pairwise at
/// 60 or 90 degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSystem {
    pub ambient: Arc<RootSystem>,
    /// Sorted canonical representatives.
    pub lines: Vec<Line>,
}

impl LineSystem {
    /// Builds a line system from spanning roots, checking membership in the
    /// ambient system and the type-(0,1/2) angle condition.
    pub fn from_roots<'a>(
        ambient: Arc<RootSystem>,
        roots: impl IntoIterator<Item = &'a Coords>,
    ) -> Result<LineSystem> {
        let mut lines: Vec<Line> = Vec::new();
        for r in roots {
            if !ambient.contains(r) {
                return Err(Error::InvalidLineSystem(format!("{r:?} is not an ambient root")));
            }
            if ambient.norm(r) != 2 {
                return Err(Error::NotSimplyLaced(format!(
                    "root {r:?} has norm {}",
                    ambient.norm(r)
                )));
            }
            lines.push(Line::from_root(r));
        }
        Self::from_lines(ambient, lines)
    }

    pub fn from_lines(ambient: Arc<RootSystem>, mut lines: Vec<Line>) -> Result<LineSystem> {
        lines.sort();
        lines.dedup();
        let system = LineSystem { ambient, lines };
        system.check_angles()?;
        Ok(system)
    }

    fn check_angles(&self) -> Result<()> {
        for i in 0..self.lines.len() {
            for j in i + 1..self.lines.len() {
                let p = self.inner(i, j).abs();
                if p != 0 && p != 1 {
                    return Err(Error::InvalidLineSystem(format!(
                        "lines {:?} and {:?} pair to {p}, not a (0,1/2) angle",
                        self.lines[i].rep, self.lines[j].rep
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn inner(&self, i: usize, j: usize) -> i64 {
        self.ambient.inner(&self.lines[i].rep, &self.lines[j].rep)
    }

    pub fn contains(&self, line: &Line) -> bool {
        self.lines.binary_search(line).is_ok()
    }

    pub fn index_of(&self, line: &Line) -> Option<usize> {
        self.lines.binary_search(line).ok()
    }

    /// Graph with the lines as vertices and non-orthogonal pairs as edges.
    pub fn non_orthogonality_graph(&self) -> Graph {
        let n = self.len();
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if self.inner(i, j) != 0 {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Decomposable means the lines split into two mutually orthogonal parts.
    pub fn is_indecomposable(&self) -> bool {
        self.non_orthogonality_graph().is_connected()
    }

    /// The third line of the star through two non-orthogonal lines.
    pub fn third_line(&self, i: usize, j: usize) -> Line {
        let p = self.inner(i, j);
        debug_assert!(p == 1 || p == -1);
        let a = &self.lines[i].rep;
        let b = &self.lines[j].rep;
        let rep: Coords =
            a.iter().zip(b).map(|(&x, &y)| if p == 1 { x - y } else { x + y }).collect();
        Line::from_root(&rep)
    }

    /// All stars (triples of lines pairwise at 60 degrees), as sorted index
    /// triples.
    pub fn stars(&self) -> Vec<[usize; 3]> {
        let mut out = BTreeSet::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.inner(i, j) == 0 {
                    continue;
                }
                if let Some(k) = self.index_of(&self.third_line(i, j)) {
                    let mut t = [i, j, k];
                    t.sort_unstable();
                    out.insert(t);
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn find_star(&self) -> Option<[usize; 3]> {
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.inner(i, j) == 0 {
                    continue;
                }
                if let Some(k) = self.index_of(&self.third_line(i, j)) {
                    if k > j {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    pub fn is_star_free(&self) -> bool {
        self.find_star().is_none()
    }

    pub fn is_star_closed(&self) -> bool {
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.inner(i, j) != 0 && !self.contains(&self.third_line(i, j)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn line_at(&self, i: usize) -> &Line {
        &self.lines[i]
    }
}

/// The lines spanned by the roots of a simply-laced system.
pub fn lines_of(system: &Arc<RootSystem>) -> Result<LineSystem> {
    if !system.is_simply_laced() {
        return Err(Error::NotSimplyLaced(format!(
            "{} has roots of more than one length",
            system.label
        )));
    }
    let roots = system.roots.clone();
    let lines = LineSystem::from_roots(Arc::clone(system), roots.iter())?;
    debug_assert_eq!(lines.len() * 2, system.roots.len());
    Ok(lines)
}

/// Smallest star-closed superset: repeatedly completes non-orthogonal pairs
/// with their third line. Errors when a completion leaves the ambient root
/// system, which signals invalid input.
pub fn star_closure(partial: &LineSystem) -> Result<LineSystem> {
    let mut lines: BTreeSet<Line> = partial.lines.iter().cloned().collect();
    loop {
        let current = LineSystem {
            ambient: Arc::clone(&partial.ambient),
            lines: lines.iter().cloned().collect(),
        };
        let mut grew = false;
        for i in 0..current.len() {
            for j in i + 1..current.len() {
                if current.inner(i, j) == 0 {
                    continue;
                }
                let third = current.third_line(i, j);
                if !current.ambient.contains(&third.rep) {
                    return Err(Error::ClosureEscapes(third.rep));
                }
                if lines.insert(third.clone()) {
                    grew = true;
                }
            }
        }
        if !grew {
            return Ok(current);
        }
    }
}

/// Partition of a line system relative to a star `{a, b, c}`: the star, the
/// lines orthogonal to exactly one member (grouped by which), and the lines
/// orthogonal to all three.
#[derive(Clone, Debug)]
pub struct StarDecomposition {
    pub ambient: Arc<RootSystem>,
    pub star: [Line; 3],
    pub part_a: Vec<Line>,
    pub part_b: Vec<Line>,
    pub part_c: Vec<Line>,
    pub part_d: Vec<Line>,
}

impl StarDecomposition {
    pub fn part_a_system(&self) -> LineSystem {
        LineSystem { ambient: Arc::clone(&self.ambient), lines: self.part_a.clone() }
    }
}

pub fn star_decomposition(system: &LineSystem, star: &[Line; 3]) -> Result<StarDecomposition> {
    let idx: Vec<usize> = star
        .iter()
        .map(|l| {
            system.index_of(l).ok_or_else(|| {
                Error::InvalidLineSystem(format!("star line {:?} not in system", l.rep))
            })
        })
        .collect::<Result<_>>()?;
    for a in 0..3 {
        for b in a + 1..3 {
            if system.inner(idx[a], idx[b]) == 0 {
                return Err(Error::InvalidLineSystem(
                    "star members must be pairwise non-orthogonal".into(),
                ));
            }
        }
    }
    let mut parts: [Vec<Line>; 4] = Default::default();
    for i in 0..system.len() {
        if idx.contains(&i) {
            continue;
        }
        let orth: Vec<usize> = (0..3).filter(|&s| system.inner(i, idx[s]) == 0).collect();
        match orth.len() {
            1 => parts[orth[0]].push(system.lines[i].clone()),
            3 => parts[3].push(system.lines[i].clone()),
            k => {
                return Err(Error::InvalidLineSystem(format!(
                    "line {:?} is orthogonal to exactly {k} star members",
                    system.lines[i].rep
                )))
            }
        }
    }
    let [part_a, part_b, part_c, part_d] = parts;
    Ok(StarDecomposition {
        ambient: Arc::clone(&system.ambient),
        star: star.clone(),
        part_a,
        part_b,
        part_c,
        part_d,
    })
}

/// Chooses one norm-2 root per line with pairwise non-negative inner
/// products (sign flips propagated over a spanning forest of the
/// non-orthogonality graph, then verified in full), and returns the graph
/// those vectors represent: edges are the non-orthogonal pairs, so the
/// off-diagonal Gram entries of the representatives equal the adjacency
/// matrix entries.
pub fn representation_graph(system: &LineSystem) -> Result<(Graph, Vec<Coords>)> {
    if let Some([i, j, k]) = system.find_star() {
        return Err(Error::ContainsStar([
            system.lines[i].rep.clone(),
            system.lines[j].rep.clone(),
            system.lines[k].rep.clone(),
        ]));
    }
    let n = system.len();
    let graph = system.non_orthogonality_graph();
    let mut reps: Vec<Coords> = system.lines.iter().map(|l| l.rep.clone()).collect();
    let mut visited = vec![false; n];
    for start in 0..n {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for u in graph.neighbors(v) {
                if !visited[u] {
                    visited[u] = true;
                    if system.ambient.inner(&reps[v], &reps[u]) < 0 {
                        reps[u] = reps[u].iter().map(|&c| -c).collect();
                    }
                    queue.push_back(u);
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let p = system.ambient.inner(&reps[i], &reps[j]);
            if p < 0 {
                return Err(Error::InvalidLineSystem(format!(
                    "no non-negative representative choice: lines {i} and {j} pair to {p}"
                )));
            }
        }
    }
    Ok((graph, reps))
}

/// Points and blocks of an incidence structure; blocks index into the
/// point-label list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    pub point_labels: Vec<String>,
    pub blocks: Vec<Vec<usize>>,
}

impl IncidenceStructure {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "points": self.point_labels,
            "blocks": self.blocks,
        })
    }
}

/// Triads (maximal sets of three mutually orthogonal lines) of a star-free
/// system, as the blocks of an incidence structure on the lines. Checks the
/// structural claims: no maximal independent set exceeds three lines, and
/// every orthogonal pair extends to a triad.
pub fn triads_of(system: &LineSystem) -> Result<IncidenceStructure> {
    if let Some([i, j, k]) = system.find_star() {
        return Err(Error::ContainsStar([
            system.lines[i].rep.clone(),
            system.lines[j].rep.clone(),
            system.lines[k].rep.clone(),
        ]));
    }
    let graph = system.non_orthogonality_graph();
    let sets = graph.maximal_independent_sets();
    let mut blocks = Vec::new();
    for s in sets {
        match s.len() {
            0 | 1 => {}
            2 => {
                return Err(Error::InvalidLineSystem(format!(
                    "orthogonal pair {:?}/{:?} extends to no triad",
                    system.lines[s[0]].rep, system.lines[s[1]].rep
                )))
            }
            3 => blocks.push(s),
            k => {
                return Err(Error::InvalidLineSystem(format!(
                    "{k} mutually orthogonal lines exceed a triad"
                )))
            }
        }
    }
    blocks.sort();
    let point_labels = (0..system.len()).map(|i| i.to_string()).collect();
    Ok(IncidenceStructure { point_labels, blocks })
}

/// Violated generalized-quadrangle axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GqFailure {
    Empty,
    BlockSize { block: usize, size: usize },
    PointDegree { point: usize, degree: usize },
    Diameter(Option<usize>),
    Girth(Option<usize>),
}

impl std::fmt::Display for GqFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GqFailure::Empty => write!(f, "empty structure"),
            GqFailure::BlockSize { block, size } => {
                write!(f, "block {block} has size {size}, breaking uniformity")
            }
            GqFailure::PointDegree { point, degree } => {
                write!(f, "point {point} lies on {degree} blocks, breaking uniformity")
            }
            GqFailure::Diameter(d) => write!(f, "incidence graph diameter {d:?}, expected 4"),
            GqFailure::Girth(g) => write!(f, "incidence graph girth {g:?}, expected 8"),
        }
    }
}

/// Verifies the GQ(s,t) axioms: uniform block size `s+1`, uniform point
/// degree `t+1`, and a bipartite incidence graph of diameter 4 and girth 8.
pub fn gq_check(structure: &IncidenceStructure) -> std::result::Result<(usize, usize), GqFailure> {
    let p = structure.point_labels.len();
    let b = structure.blocks.len();
    if p == 0 || b == 0 {
        return Err(GqFailure::Empty);
    }
    let s = structure.blocks[0].len() - 1;
    for (i, block) in structure.blocks.iter().enumerate() {
        if block.len() != s + 1 {
            return Err(GqFailure::BlockSize { block: i, size: block.len() });
        }
    }
    let mut degree = vec![0usize; p];
    for block in &structure.blocks {
        for &pt in block {
            degree[pt] += 1;
        }
    }
    if degree[0] == 0 {
        return Err(GqFailure::PointDegree { point: 0, degree: 0 });
    }
    let t = degree[0] - 1;
    for (pt, &d) in degree.iter().enumerate() {
        if d != t + 1 {
            return Err(GqFailure::PointDegree { point: pt, degree: d });
        }
    }
    let mut incidence = Graph::new(p + b);
    for (i, block) in structure.blocks.iter().enumerate() {
        for &pt in block {
            incidence.add_edge(pt, p + i);
        }
    }
    let diameter = incidence.diameter();
    if diameter != Some(4) {
        return Err(GqFailure::Diameter(diameter));
    }
    let girth = incidence.girth();
    if girth != Some(8) {
        return Err(GqFailure::Girth(girth));
    }
    Ok((s, t))
}

/// Report of the equiangular-lines absolute-bound check in dimension `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquiangularReport {
    pub n: usize,
    pub d: usize,
    pub bound: usize,
    pub meets_bound: bool,
    /// Common squared cosine of the pairwise angle (absent for fewer than
    /// two lines).
    pub common_cos2: Option<Rational>,
}

/// Checks that the given spans are pairwise equiangular and compares their
/// count against the absolute bound `C(d+1, 2)`. Vectors are taken
/// projectively: opposite or scaled vectors name the same line.
pub fn equiangular_bound_check(
    vectors: &[Vec<Rational>],
    ambient: &Ambient,
    d: usize,
) -> Result<EquiangularReport> {
    let mut lines: Vec<Vec<Rational>> = Vec::new();
    for v in vectors {
        if v.iter().all(Rational::is_zero) {
            return Err(Error::Invalid("zero vector spans no line".into()));
        }
        let lead = v.iter().find(|c| !c.is_zero()).unwrap().clone();
        let canon: Vec<Rational> = v.iter().map(|c| c / &lead).collect();
        if !lines.contains(&canon) {
            lines.push(canon);
        }
    }
    let n = lines.len();
    let bound = (d + 1) * d / 2;
    let mut common: Option<Rational> = None;
    for i in 0..n {
        for j in i + 1..n {
            let pij = ambient.inner_rational(&lines[i], &lines[j]);
            let cos2 = &pij * &pij
                / (ambient.inner_rational(&lines[i], &lines[i])
                    * ambient.inner_rational(&lines[j], &lines[j]));
            match &common {
                None => common = Some(cos2),
                Some(c) if *c == cos2 => {}
                Some(c) => {
                    return Err(Error::Invalid(format!(
                        "not equiangular: lines {i} and {j} have cos^2 {} against {}",
                        rational_to_string(&cos2),
                        rational_to_string(c)
                    )))
                }
            }
        }
    }
    Ok(EquiangularReport { n, d, bound, meets_bound: n == bound, common_cos2: common })
}

/// The five cases of the classification of indecomposable star-closed line
/// systems, by the shape of a star-decomposition's A-part graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoremCase {
    /// Complete graph K_{n-2}.
    A { n: usize },
    /// Cocktail party graph CP(n-3) plus an isolated vertex.
    B { n: usize },
    /// srg(9,4,1,2).
    C,
    /// srg(15,8,4,4).
    D,
    /// srg(27,16,10,8).
    E,
}

impl std::fmt::Display for TheoremCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TheoremCase::A { n } => write!(f, "case (a): A{n}, G = K{}", n - 2),
            TheoremCase::B { n } => write!(f, "case (b): D{n}, G = CP({}) + K1", n - 3),
            TheoremCase::C => write!(f, "case (c): E6, G = srg(9,4,1,2)"),
            TheoremCase::D => write!(f, "case (d): E7, G = srg(15,8,4,4)"),
            TheoremCase::E => write!(f, "case (e): E8, G = srg(27,16,10,8)"),
        }
    }
}

/// Classifies an indecomposable star-closed system by matching the A-part of
/// a star decomposition against the five catalog graphs. The star is the
/// first in canonical line order; the outcome is star-independent.
pub fn classify_indecomposable(system: &LineSystem) -> Result<TheoremCase> {
    if !system.is_indecomposable() {
        return Err(Error::InvalidLineSystem("decomposable line system".into()));
    }
    if !system.is_star_closed() {
        return Err(Error::InvalidLineSystem("not star-closed".into()));
    }
    let star_idx = system
        .find_star()
        .ok_or_else(|| Error::InvalidLineSystem("no star (rank too small to classify)".into()))?;
    let star = [
        system.lines[star_idx[0]].clone(),
        system.lines[star_idx[1]].clone(),
        system.lines[star_idx[2]].clone(),
    ];
    let decomp = star_decomposition(system, &star)?;
    let (graph, _) = representation_graph(&decomp.part_a_system())?;
    let a = graph.len();

    if (0..a).all(|v| graph.degree(v) == a.saturating_sub(1)) {
        return Ok(TheoremCase::A { n: a + 2 });
    }
    // CP(m) plus an isolated vertex: odd order, some degree-0 vertex whose
    // removal leaves a graph whose complement is a perfect matching.
    if a >= 3 && a % 2 == 1 {
        if let Some(v0) = (0..a).find(|&v| graph.degree(v) == 0) {
            let rest: Vec<usize> = (0..a).filter(|&v| v != v0).collect();
            let (sub, _) = graph.induced(&rest);
            let comp = sub.complement();
            if (0..sub.len()).all(|v| comp.degree(v) == 1) {
                return Ok(TheoremCase::B { n: (a - 1) / 2 + 3 });
            }
        }
    }
    match srg_check(&graph) {
        SrgOutcome::Srg { v: 9, k: 4, lambda: 1, mu: 2 } => Ok(TheoremCase::C),
        SrgOutcome::Srg { v: 15, k: 8, lambda: 4, mu: 4 } => Ok(TheoremCase::D),
        SrgOutcome::Srg { v: 27, k: 16, lambda: 10, mu: 8 } => Ok(TheoremCase::E),
        other => Err(Error::InvalidLineSystem(format!(
            "A-part graph matches no classification case: {other:?}"
        ))),
    }
}

/// Edge-list JSON for a graph; DOT output comes from [`Graph::to_dot`].
pub fn graph_to_json(g: &Graph) -> serde_json::Value {
    serde_json::json!({
        "vertices": g.len(),
        "edges": g.edges().iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
    })
}
