//! Coweight-induced gradings: 3-grading enumeration and axioms, binary
//! decompositions of line systems, nested grading sequences, the grading
//! mesh, uniqueness of the exceptional sequence, and the minuscule-coweight
//! orbit of E7 with its equiangular lines.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{isomorphism, Graph};
use crate::lines::{star_closure, LineSystem};
use crate::matrix::QMatrix;
use crate::rational::{rat_int, rational_to_string, to_integer, Rational};
use crate::roots::{
    build_simply_laced, cartan_match, catalog_cartan, diagram_automorphisms, identify_type,
    subsystem_from_roots, Coords, Family, IrredLabel, RootSystem, TypeLabel,
};

/// A vector pairing integrally with every root, in rational ambient
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coweight {
    pub coords: Vec<Rational>,
}

impl Coweight {
    pub fn new(coords: Vec<Rational>) -> Self {
        Coweight { coords }
    }

    pub fn from_labels(labels: &[i64]) -> Self {
        Coweight { coords: labels.iter().map(|&c| rat_int(c)).collect() }
    }

    pub fn pairing(&self, system: &RootSystem, root: &[i64]) -> Rational {
        system.ambient.inner_mixed(&self.coords, root)
    }

    pub fn is_coweight(&self, system: &RootSystem) -> bool {
        system.roots.iter().all(|r| self.pairing(system, r).denom().is_one())
    }

    pub fn is_minuscule(&self, system: &RootSystem) -> bool {
        system.roots.iter().all(|r| {
            let p = self.pairing(system, r);
            p.denom().is_one() && p.numer().abs() <= num::BigInt::one()
        })
    }
}

/// Partition of a root system by the integer pairings with a coweight.
#[derive(Clone, Debug)]
pub struct ZGrading {
    pub coweight: Coweight,
    pub parts: BTreeMap<i64, Vec<Coords>>,
}

impl ZGrading {
    pub fn part(&self, i: i64) -> &[Coords] {
        self.parts.get(&i).map_or(&[], Vec::as_slice)
    }

    pub fn index_range(&self) -> (i64, i64) {
        let lo = self.parts.keys().next().copied().unwrap_or(0);
        let hi = self.parts.keys().last().copied().unwrap_or(0);
        (lo, hi)
    }
}

/// Sorts every root of the system into `{alpha : <alpha, q> = i}`; errors on
/// a non-integral pairing.
pub fn grading_from_coweight(system: &RootSystem, q: &Coweight) -> Result<ZGrading> {
    let mut parts: BTreeMap<i64, Vec<Coords>> = BTreeMap::new();
    for r in &system.roots {
        let p = q.pairing(system, r);
        let i = to_integer(&p).ok_or_else(|| Error::NonIntegralPairing {
            root: r.clone(),
            value: rational_to_string(&p),
        })?;
        parts.entry(i).or_default().push(r.clone());
    }
    Ok(ZGrading { coweight: q.clone(), parts })
}

/// The seven 3-grading families of finite irreducible root systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GradingName {
    Rectangular,
    Hermitian,
    OddQuadratic,
    EvenQuadratic,
    Alternating,
    Albert,
    BiCayley,
}

impl fmt::Display for GradingName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GradingName::Rectangular => "rectangular",
            GradingName::Hermitian => "hermitian",
            GradingName::OddQuadratic => "odd quadratic",
            GradingName::EvenQuadratic => "even quadratic",
            GradingName::Alternating => "alternating",
            GradingName::Albert => "Albert",
            GradingName::BiCayley => "bi-Cayley",
        };
        write!(f, "{s}")
    }
}

fn grading_name(label: IrredLabel, std_node: usize) -> GradingName {
    let n = label.rank;
    match label.family {
        Family::A => GradingName::Rectangular,
        Family::B => GradingName::OddQuadratic,
        Family::C => GradingName::Hermitian,
        Family::D => {
            if std_node == 1 {
                GradingName::EvenQuadratic
            } else {
                debug_assert!(std_node == n - 1 || std_node == n);
                GradingName::Alternating
            }
        }
        Family::E if n == 6 => GradingName::BiCayley,
        Family::E => GradingName::Albert,
        _ => unreachable!("{label} admits no 3-grading"),
    }
}

/// A 3-grading `Phi = Phi_-1 + Phi_0 + Phi_1` induced by a minuscule
/// coweight, together with its catalog name and the type of the zero part.
#[derive(Clone, Debug)]
pub struct ThreeGrading {
    pub system: Arc<RootSystem>,
    pub coweight: Coweight,
    pub phi_minus: Vec<Coords>,
    pub phi_zero: Vec<Coords>,
    pub phi_plus: Vec<Coords>,
    pub name: GradingName,
    pub zero_type: TypeLabel,
    /// 1-based node in the standard numbering of the source type.
    pub std_node: usize,
}

impl ThreeGrading {
    pub fn weight(&self) -> usize {
        self.phi_plus.len()
    }

    pub fn verify(&self) -> GradingCheck {
        verify_three_grading(&self.system, &self.phi_minus, &self.phi_zero, &self.phi_plus)
    }
}

/// Fundamental coweight at simple-root index `i` (0-based in the system's
/// own simple order): pairs to 1 with that simple root and 0 with the rest.
pub fn fundamental_coweight(system: &RootSystem, i: usize) -> Result<Coweight> {
    let m = system.rank();
    let gram = QMatrix::from_int_rows(&system.simple_gram());
    let mut rhs = vec![Rational::zero(); m];
    rhs[i] = Rational::one();
    let c = gram
        .solve(&rhs)
        .ok_or_else(|| Error::Invalid("degenerate simple-root Gram matrix".into()))?;
    let dim = system.ambient.dim();
    let mut coords = vec![Rational::zero(); dim];
    for (ck, t) in c.iter().zip(&system.simple_roots) {
        for (x, &ti) in coords.iter_mut().zip(t) {
            if ti != 0 {
                *x += ck * rat_int(ti);
            }
        }
    }
    Ok(Coweight::new(coords))
}

/// All 3-gradings of an irreducible system: one per simple root carrying
/// coefficient 1 in the highest root (the minuscule fundamental coweights).
/// Empty for E8, G2, and F4; errors on reducible input.
pub fn enumerate_three_gradings(system: &Arc<RootSystem>) -> Result<Vec<ThreeGrading>> {
    let TypeLabel::Irreducible(label) = system.label else {
        return Err(Error::Invalid(format!("{} is not irreducible", system.label)));
    };
    let high = system.highest_root();
    let high_idx = system.root_index(&high).expect("highest root is a root");
    let high_coords = system.simple_coords[high_idx].clone();
    // Map this system's simple order onto the standard catalog numbering.
    let computed_cartan: Vec<Vec<i64>> = {
        let m = system.rank();
        let simple = &system.simple_roots;
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| 2 * system.inner(&simple[i], &simple[j]) / system.norm(&simple[j]))
                    .collect()
            })
            .collect()
    };
    let to_std = cartan_match(&catalog_cartan(label), &computed_cartan)
        .ok_or(Error::UnknownCartan { rank: system.rank(), roots: system.roots.len() })?;

    let mut out = Vec::new();
    for (i, &coeff) in high_coords.iter().enumerate() {
        if coeff != 1 {
            continue;
        }
        let q = fundamental_coweight(system, i)?;
        let zg = grading_from_coweight(system, &q)?;
        let (lo, hi) = zg.index_range();
        debug_assert!(
            lo >= -1 && hi <= 1,
            "fundamental coweight at a coefficient-1 node is minuscule"
        );
        let phi_minus = zg.part(-1).to_vec();
        let phi_zero = zg.part(0).to_vec();
        let phi_plus = zg.part(1).to_vec();
        let zero_type = identify_type(&system.ambient, &phi_zero)?;
        let std_node = to_std[i] + 1;
        let grading = ThreeGrading {
            system: Arc::clone(system),
            coweight: q,
            phi_minus,
            phi_zero,
            phi_plus,
            name: grading_name(label, std_node),
            zero_type,
            std_node,
        };
        debug_assert!(grading.verify().pass);
        out.push(grading);
    }
    out.sort_by_key(|g| g.std_node);
    Ok(out)
}

/// One census row: a 3-grading class up to diagram automorphism.
#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub weight: usize,
    pub zero_type: TypeLabel,
    pub name: GradingName,
    /// Standard nodes in the diagram-automorphism orbit.
    pub node_orbit: Vec<usize>,
    pub representative: ThreeGrading,
}

/// Gradings of an irreducible system, deduplicated up to diagram
/// automorphism and sorted by descending weight.
pub fn grading_census(system: &Arc<RootSystem>) -> Result<Vec<CensusEntry>> {
    let TypeLabel::Irreducible(label) = system.label else {
        return Err(Error::Invalid(format!("{} is not irreducible", system.label)));
    };
    let gradings = enumerate_three_gradings(system)?;
    let autos = diagram_automorphisms(label);
    let orbit_of = |node: usize| -> Vec<usize> {
        let mut orbit: BTreeSet<usize> = BTreeSet::new();
        for a in &autos {
            orbit.insert(a[node - 1] + 1);
        }
        orbit.into_iter().collect()
    };
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut out = Vec::new();
    for g in gradings {
        if seen.contains(&g.std_node) {
            continue;
        }
        let orbit = orbit_of(g.std_node);
        seen.extend(orbit.iter().copied());
        out.push(CensusEntry {
            weight: g.weight(),
            zero_type: g.zero_type.clone(),
            name: g.name,
            node_orbit: orbit,
            representative: g,
        });
    }
    out.sort_by(|a, b| b.weight.cmp(&a.weight).then_with(|| a.zero_type.cmp(&b.zero_type)));
    Ok(out)
}

/// Outcome of the exhaustive 3-grading axiom check.
#[derive(Clone, Debug)]
pub struct GradingCheck {
    pub pass: bool,
    pub violations: Vec<String>,
}

/// Exhaustively checks the 3-grading axioms on an explicit partition: sums
/// land in the graded part (and grade-2 sums are not roots), negation
/// symmetry between the two unit parts, and every zero-part root being a
/// difference of two plus-part roots.
pub fn verify_three_grading(
    system: &RootSystem,
    phi_minus: &[Coords],
    phi_zero: &[Coords],
    phi_plus: &[Coords],
) -> GradingCheck {
    let mut violations = Vec::new();
    let mut grade: BTreeMap<&Coords, i64> = BTreeMap::new();
    for (part, g) in [(phi_minus, -1i64), (phi_zero, 0), (phi_plus, 1)] {
        for r in part {
            if grade.insert(r, g).is_some() {
                violations.push(format!("root {r:?} appears in two parts"));
            }
        }
    }
    if grade.len() != system.roots.len() {
        violations.push(format!("parts cover {} of {} roots", grade.len(), system.roots.len()));
    }
    // Phi_-1 = -Phi_1
    let minus_set: BTreeSet<&Coords> = phi_minus.iter().collect();
    for r in phi_plus {
        let neg: Coords = r.iter().map(|&c| -c).collect();
        if !minus_set.contains(&neg) {
            violations.push(format!("negation of {r:?} is missing from the minus part"));
        }
    }
    if phi_minus.len() != phi_plus.len() {
        violations.push(format!(
            "|Phi_-1| = {} differs from |Phi_1| = {}",
            phi_minus.len(),
            phi_plus.len()
        ));
    }
    // Sum axiom over all pairs with known grades.
    let entries: Vec<(&Coords, i64)> = grade.iter().map(|(&r, &g)| (r, g)).collect();
    'outer: for (x, (r, a)) in entries.iter().enumerate() {
        for (s, b) in entries.iter().skip(x) {
            let sum: Coords = r.iter().zip(s.iter()).map(|(&p, &q)| p + q).collect();
            if !system.contains(&sum) {
                continue;
            }
            let c = a + b;
            if !(-1..=1).contains(&c) {
                violations.push(format!(
                    "{r:?} (grade {a}) + {s:?} (grade {b}) is a root outside grades -1..1"
                ));
            } else if grade.get(&sum) != Some(&c) {
                violations.push(format!(
                    "{r:?} + {s:?} lands in grade {:?}, expected {c}",
                    grade.get(&sum)
                ));
            }
            if violations.len() > 8 {
                break 'outer;
            }
        }
    }
    // Phi_0 is covered by differences of plus-part roots.
    let plus_set: BTreeSet<&Coords> = phi_plus.iter().collect();
    for t in phi_zero {
        let covered = phi_plus.iter().any(|r| {
            let diff: Coords = r.iter().zip(t).map(|(&p, &q)| p - q).collect();
            plus_set.contains(&diff)
        });
        if !covered {
            violations.push(format!("{t:?} is not a difference of two plus-part roots"));
        }
    }
    GradingCheck { pass: violations.is_empty(), violations }
}

/// Splits a grading of a simply-laced system into its line-system halves and
/// verifies the binary-decomposition contract: the zero part is star-closed,
/// the plus part is star-free, and the closure of the plus part recovers
/// every line of the system.
pub fn binary_decomposition(g: &ThreeGrading) -> Result<(LineSystem, LineSystem)> {
    if !g.system.is_simply_laced() {
        return Err(Error::NotSimplyLaced(g.system.label.to_string()));
    }
    let zero = LineSystem::from_roots(Arc::clone(&g.system), g.phi_zero.iter())?;
    let plus = LineSystem::from_roots(Arc::clone(&g.system), g.phi_plus.iter())?;
    if !zero.is_star_closed() {
        return Err(Error::InvalidGrading("zero part is not star-closed".into()));
    }
    if !plus.is_star_free() {
        return Err(Error::InvalidGrading("plus part contains a star".into()));
    }
    let closure = star_closure(&plus)?;
    if closure.len() * 2 != g.system.roots.len() {
        return Err(Error::InvalidGrading(format!(
            "closure of the plus part has {} lines, expected {}",
            closure.len(),
            g.system.roots.len() / 2
        )));
    }
    Ok((zero, plus))
}

/// Binary decomposition graph: lines of the plus part, edges between
/// non-orthogonal pairs. Verified vertex-transitive in the proxy sense of
/// pairwise-isomorphic vertex neighborhoods.
pub fn decomposition_graph(g: &ThreeGrading) -> Result<Graph> {
    if !g.system.is_simply_laced() {
        return Err(Error::NotSimplyLaced(g.system.label.to_string()));
    }
    let plus = LineSystem::from_roots(Arc::clone(&g.system), g.phi_plus.iter())?;
    let graph = plus.non_orthogonality_graph();
    if !graph.neighborhoods_pairwise_isomorphic() {
        return Err(Error::InvalidGrading(
            "decomposition graph has non-isomorphic vertex neighborhoods".into(),
        ));
    }
    Ok(graph)
}

/// Induced subgraph on the neighbors of the canonical first vertex.
pub fn local_subgraph(g: &Graph) -> Result<Graph> {
    g.local_subgraph()
}

/// A nested sequence of 3-gradings: each arrow's source is the previous
/// arrow's zero part, as a literal root subset.
#[derive(Clone, Debug)]
pub struct GradingSequence {
    pub gradings: Vec<ThreeGrading>,
}

impl GradingSequence {
    pub fn new(gradings: Vec<ThreeGrading>) -> Self {
        GradingSequence { gradings }
    }

    /// Checks the nesting condition: each arrow's source root set equals the
    /// previous arrow's zero part, in a shared ambient space.
    pub fn validate_nesting(&self) -> Result<()> {
        for w in self.gradings.windows(2) {
            let (up, down) = (&w[0], &w[1]);
            if up.system.ambient != down.system.ambient {
                return Err(Error::AmbientMismatch);
            }
            if up.phi_zero != down.system.roots {
                return Err(Error::InvalidGrading(format!(
                    "nesting violated: zero part of the {} arrow is not the {} source",
                    up.system.label, down.system.label
                )));
            }
        }
        Ok(())
    }

    /// Path of type labels: source of the first arrow, then each zero type.
    pub fn path_labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(first) = self.gradings.first() {
            out.push(first.system.label.to_string());
        }
        for g in &self.gradings {
            out.push(g.zero_type.to_string());
        }
        out
    }

    pub fn weights(&self) -> Vec<usize> {
        self.gradings.iter().map(ThreeGrading::weight).collect()
    }
}

/// Per-arrow evidence for the local-sequence check.
#[derive(Clone, Debug)]
pub struct LocalEvidence {
    /// Index of the later arrow in the pair being compared.
    pub arrow: usize,
    pub isomorphic: bool,
    /// Vertex bijection from the later arrow's graph onto the local subgraph
    /// of the earlier arrow's graph, when isomorphic.
    pub bijection: Option<Vec<usize>>,
}

/// True when each arrow's decomposition graph is isomorphic to the local
/// subgraph of the preceding arrow's graph; certificates included.
pub fn is_local_sequence(seq: &GradingSequence) -> Result<(bool, Vec<LocalEvidence>)> {
    seq.validate_nesting()?;
    let graphs: Vec<Graph> = seq.gradings.iter().map(decomposition_graph).collect::<Result<_>>()?;
    let mut evidence = Vec::new();
    let mut all = true;
    for i in 1..graphs.len() {
        let local = local_subgraph(&graphs[i - 1])?;
        let bijection = isomorphism(&graphs[i], &local);
        let isomorphic = bijection.is_some();
        all &= isomorphic;
        evidence.push(LocalEvidence { arrow: i, isomorphic, bijection });
    }
    Ok((all, evidence))
}

/// True when every arrow attains the maximum weight among the gradings of
/// its source.
pub fn is_maximal_sequence(seq: &GradingSequence) -> Result<bool> {
    seq.validate_nesting()?;
    for g in &seq.gradings {
        let best = grading_census(&g.system)?.first().map(|e| e.weight).unwrap_or(0);
        if g.weight() < best {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A weighted arrow of the grading mesh.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeshArrow {
    pub source: TypeLabel,
    pub target: TypeLabel,
    pub weight: usize,
    pub name: GradingName,
}

/// Directed acyclic mesh of 3-gradings over the simply-laced catalog.
#[derive(Clone, Debug)]
pub struct GradingMesh {
    pub max_rank: usize,
    pub nodes: Vec<TypeLabel>,
    pub arrows: Vec<MeshArrow>,
}

impl GradingMesh {
    pub fn arrows_from(&self, source: &TypeLabel) -> Vec<&MeshArrow> {
        self.arrows.iter().filter(|a| &a.source == source).collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph mesh {\n  rankdir=LR;\n");
        for node in &self.nodes {
            s.push_str(&format!("  \"{node}\";\n"));
        }
        for a in &self.arrows {
            s.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                a.source, a.target, a.weight
            ));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "max_rank": self.max_rank,
            "nodes": self.nodes.iter().map(TypeLabel::to_string).collect::<Vec<_>>(),
            "arrows": self.arrows.iter().map(|a| serde_json::json!({
                "source": a.source.to_string(),
                "target": a.target.to_string(),
                "weight": a.weight,
                "name": a.name.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Simply-laced irreducible catalog up to a rank bound.
pub fn simply_laced_catalog(max_rank: usize) -> Vec<IrredLabel> {
    let mut out = Vec::new();
    for n in 1..=max_rank.min(8) {
        out.push(IrredLabel::new(Family::A, n));
    }
    for n in 4..=max_rank.min(8) {
        out.push(IrredLabel::new(Family::D, n));
    }
    for n in 6..=max_rank.min(8) {
        out.push(IrredLabel::new(Family::E, n));
    }
    out
}

/// Builds the mesh of 3-gradings for the simply-laced catalog up to
/// `max_rank`. Arrows originate at irreducible types only; gradings with an
/// empty zero part are excluded by default so that A1 is terminal.
pub fn build_mesh(max_rank: usize) -> Result<GradingMesh> {
    build_mesh_with(max_rank, true)
}

pub fn build_mesh_with(max_rank: usize, nonempty_zero_only: bool) -> Result<GradingMesh> {
    if max_rank == 0 || max_rank > 8 {
        return Err(Error::Invalid(format!("max rank {max_rank} outside 1..=8")));
    }
    let mut nodes: BTreeSet<TypeLabel> = BTreeSet::new();
    let mut arrows = Vec::new();
    for label in simply_laced_catalog(max_rank) {
        let source = TypeLabel::Irreducible(label);
        nodes.insert(source.clone());
        let system = build_simply_laced(label)?;
        for entry in grading_census(&system)? {
            if nonempty_zero_only && entry.zero_type == TypeLabel::Empty {
                continue;
            }
            nodes.insert(entry.zero_type.clone());
            arrows.push(MeshArrow {
                source: source.clone(),
                target: entry.zero_type,
                weight: entry.weight,
                name: entry.name,
            });
        }
    }
    arrows.sort_by(|a, b| {
        a.source.cmp(&b.source).then(b.weight.cmp(&a.weight)).then(a.target.cmp(&b.target))
    });
    Ok(GradingMesh { max_rank, nodes: nodes.into_iter().collect(), arrows })
}

/// Realizes the exceptional nested sequence E7 -> E6 -> D5 -> A4 -> A1xA2
/// inside the ambient space of E7, following the stated chain of zero types.
pub fn star_sequence() -> Result<GradingSequence> {
    let e7 = build_simply_laced(IrredLabel::new(Family::E, 7))?;
    let targets = ["E6", "D5", "A4", "A1xA2"];
    let mut gradings = Vec::new();
    let mut current = e7;
    for target in targets {
        let want: TypeLabel = target.parse()?;
        let census = grading_census(&current)?;
        let entry = census.into_iter().find(|e| e.zero_type == want).ok_or_else(|| {
            Error::Invalid(format!("no grading of {} with zero type {want}", current.label))
        })?;
        let grading = entry.representative;
        let next = subsystem_from_roots(&current, grading.phi_zero.clone())?;
        gradings.push(grading);
        if !next.label.is_irreducible() {
            break;
        }
        current = Arc::new(next);
    }
    Ok(GradingSequence::new(gradings))
}

/// One fully-extended nested sequence and its local/maximal verdicts.
#[derive(Clone, Debug)]
pub struct SequenceRecord {
    pub path: Vec<String>,
    pub weights: Vec<usize>,
    pub local: bool,
    pub maximal: bool,
}

/// Report for the uniqueness theorem: every sink-terminated sequence from
/// E7, with exactly one local and one maximal among them, plus a census of
/// local sequences from every catalog source and the left-extendability
/// facts that single out E7 as the non-embeddable start.
#[derive(Clone, Debug)]
pub struct UniquenessReport {
    pub sequences: Vec<SequenceRecord>,
    pub star_path: Vec<String>,
    pub unique_local: bool,
    pub unique_maximal: bool,
    pub local_census: Vec<SequenceRecord>,
    pub extendability_notes: Vec<String>,
}

impl UniquenessReport {
    pub fn pass(&self) -> bool {
        self.unique_local && self.unique_maximal
    }
}

fn extend_sequences(
    prefix: Vec<ThreeGrading>,
    current: Arc<RootSystem>,
    out: &mut Vec<GradingSequence>,
) -> Result<()> {
    let census =
        if current.label.is_irreducible() { grading_census(&current)? } else { Vec::new() };
    let live: Vec<&CensusEntry> =
        census.iter().filter(|e| e.zero_type != TypeLabel::Empty).collect();
    if live.is_empty() {
        if !prefix.is_empty() {
            out.push(GradingSequence::new(prefix));
        }
        return Ok(());
    }
    for entry in live {
        let mut next_prefix = prefix.clone();
        next_prefix.push(entry.representative.clone());
        let sub = Arc::new(subsystem_from_roots(&current, entry.representative.phi_zero.clone())?);
        extend_sequences(next_prefix, sub, out)?;
    }
    Ok(())
}

/// All sink-terminated nested sequences starting at the given catalog type,
/// realized concretely in that system's ambient space.
pub fn sequences_from(label: IrredLabel) -> Result<Vec<GradingSequence>> {
    let system = build_simply_laced(label)?;
    let mut out = Vec::new();
    extend_sequences(Vec::new(), system, &mut out)?;
    Ok(out)
}

fn record_for(seq: &GradingSequence) -> Result<SequenceRecord> {
    let (local, _) = is_local_sequence(seq)?;
    let maximal = is_maximal_sequence(seq)?;
    Ok(SequenceRecord { path: seq.path_labels(), weights: seq.weights(), local, maximal })
}

/// Verifies the uniqueness theorem over the rank bound: among all
/// non-extendable sequences (necessarily starting at E7), exactly one is
/// local and exactly one is maximal, and both are the exceptional sequence.
pub fn verify_exceptional_uniqueness(max_rank: usize) -> Result<UniquenessReport> {
    if max_rank != 8 {
        return Err(Error::Invalid(
            "the uniqueness census is defined over the rank-8 catalog".into(),
        ));
    }
    let star_path: Vec<String> =
        ["E7", "E6", "D5", "A4", "A1xA2"].iter().map(ToString::to_string).collect();

    let mut extendability_notes = Vec::new();
    // E8 admits no 3-grading, so nothing extends E7 to the left.
    let e8 = build_simply_laced(IrredLabel::new(Family::E, 8))?;
    let e8_census = grading_census(&e8)?;
    extendability_notes.push(format!(
        "E8 admits {} 3-gradings, so E7 is not the zero part of any larger catalog system",
        e8_census.len()
    ));
    // Every other grading-admitting type appears as a zero part in the mesh.
    let mesh = build_mesh(max_rank)?;
    for label in simply_laced_catalog(max_rank) {
        if label.family == Family::E && label.rank >= 7 {
            continue;
        }
        let node = TypeLabel::Irreducible(label);
        let embedded = mesh.arrows.iter().any(|a| a.target == node);
        let always = matches!(label.family, Family::A | Family::D);
        extendability_notes.push(format!(
            "{label} is left-extendable: {}",
            if embedded {
                "zero part of a catalog grading".to_string()
            } else if always {
                format!("zero part of the rank-{} member of its family", label.rank + 1)
            } else {
                "unexpectedly not embedded".to_string()
            }
        ));
    }

    let mut sequences = Vec::new();
    for seq in sequences_from(IrredLabel::new(Family::E, 7))? {
        sequences.push(record_for(&seq)?);
    }
    let locals: Vec<&SequenceRecord> = sequences.iter().filter(|r| r.local).collect();
    let maximals: Vec<&SequenceRecord> = sequences.iter().filter(|r| r.maximal).collect();
    let unique_local = locals.len() == 1 && locals[0].path == star_path;
    let unique_maximal = maximals.len() == 1 && maximals[0].path == star_path;

    let mut local_census = Vec::new();
    for label in simply_laced_catalog(max_rank) {
        for seq in sequences_from(label)? {
            let rec = record_for(&seq)?;
            if rec.local {
                local_census.push(rec);
            }
        }
    }

    Ok(UniquenessReport {
        sequences,
        star_path,
        unique_local,
        unique_maximal,
        local_census,
        extendability_notes,
    })
}

/// Weyl orbit of the minuscule fundamental coweight of E7: 56 vectors
/// spanning the 28 equiangular lines at the absolute bound in dimension 7.
pub fn minuscule_orbit(e7: &Arc<RootSystem>) -> Result<Vec<Vec<Rational>>> {
    if e7.label != TypeLabel::Irreducible(IrredLabel::new(Family::E, 7)) {
        return Err(Error::Invalid(format!("minuscule orbit needs E7, got {}", e7.label)));
    }
    let high = e7.highest_root();
    let high_idx = e7.root_index(&high).unwrap();
    let node = e7.simple_coords[high_idx]
        .iter()
        .position(|&c| c == 1)
        .expect("E7 has a coefficient-1 node");
    let q = fundamental_coweight(e7, node)?;
    let mut orbit: BTreeSet<Vec<Rational>> = BTreeSet::new();
    orbit.insert(q.coords.clone());
    let mut queue = vec![q.coords];
    while let Some(v) = queue.pop() {
        for s in &e7.simple_roots {
            // Reflect: v - <s, v> s (simple roots have norm 2).
            let c = e7.ambient.inner_mixed(&v, s);
            let image: Vec<Rational> =
                v.iter().zip(s).map(|(vi, &si)| vi - &c * rat_int(si)).collect();
            if orbit.insert(image.clone()) {
                queue.push(image);
            }
        }
    }
    Ok(orbit.into_iter().collect())
}

/// First pairwise-acute subset of the orbit with `k` members, by
/// backtracking in canonical order.
pub fn acute_minuscule_chain(
    e7: &Arc<RootSystem>,
    orbit: &[Vec<Rational>],
    k: usize,
) -> Result<Vec<Vec<Rational>>> {
    fn go(
        e7: &RootSystem,
        orbit: &[Vec<Rational>],
        start: usize,
        picked: &mut Vec<Vec<Rational>>,
        k: usize,
    ) -> bool {
        if picked.len() == k {
            return true;
        }
        for i in start..orbit.len() {
            if picked.iter().all(|p| e7.ambient.inner_rational(p, &orbit[i]).is_positive()) {
                picked.push(orbit[i].clone());
                if go(e7, orbit, i + 1, picked, k) {
                    return true;
                }
                picked.pop();
            }
        }
        false
    }
    let mut picked = Vec::new();
    if go(e7, orbit, 0, &mut picked, k) {
        Ok(picked)
    } else {
        Err(Error::Invalid(format!("no pairwise-acute subset of size {k}")))
    }
}

/// Roots of E7 orthogonal to every one of the chosen pairwise-acute
/// minuscule coweights, identified as a subsystem.
pub fn orthogonal_subsystem(
    e7: &Arc<RootSystem>,
    coweights: &[Vec<Rational>],
) -> Result<RootSystem> {
    for (i, a) in coweights.iter().enumerate() {
        for b in coweights.iter().skip(i + 1) {
            if !e7.ambient.inner_rational(a, b).is_positive() {
                return Err(Error::Invalid("chosen coweights are not pairwise acute".into()));
            }
        }
    }
    let roots: Vec<Coords> = e7
        .roots
        .iter()
        .filter(|r| coweights.iter().all(|q| e7.ambient.inner_mixed(q, r).is_zero()))
        .cloned()
        .collect();
    subsystem_from_roots(e7, roots)
}

/// JSON form of a sequence: an array of arrows `{source, target, weight, name}`.
pub fn sequence_to_json(seq: &GradingSequence) -> serde_json::Value {
    serde_json::Value::Array(
        seq.gradings
            .iter()
            .map(|g| {
                serde_json::json!({
                    "source": g.system.label.to_string(),
                    "target": g.zero_type.to_string(),
                    "weight": g.weight(),
                    "name": g.name.to_string(),
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{srg_check, SrgOutcome};
    use crate::lines::equiangular_bound_check;
    use crate::rational::rat;
    use crate::roots::build_non_simply_laced;

    fn system(name: &str) -> Arc<RootSystem> {
        build_simply_laced(name.parse().unwrap()).unwrap()
    }

    fn census_pairs(name: &str) -> Vec<(usize, String, String)> {
        let sys = if name.starts_with('B') || name.starts_with('C') {
            build_non_simply_laced(name.parse().unwrap()).unwrap()
        } else {
            system(name)
        };
        grading_census(&sys)
            .unwrap()
            .into_iter()
            .map(|e| (e.weight, e.zero_type.to_string(), e.name.to_string()))
            .collect()
    }

    #[test]
    fn census_matches_the_grading_table() {
        assert_eq!(census_pairs("E7"), vec![(27, "E6".into(), "Albert".into())]);
        assert_eq!(census_pairs("E6"), vec![(16, "D5".into(), "bi-Cayley".into())]);
        assert_eq!(
            census_pairs("D5"),
            vec![
                (10, "A4".into(), "alternating".into()),
                (8, "D4".into(), "even quadratic".into())
            ]
        );
        assert_eq!(
            census_pairs("A4"),
            vec![
                (6, "A1xA2".into(), "rectangular".into()),
                (4, "A3".into(), "rectangular".into())
            ]
        );
        assert_eq!(census_pairs("E8"), vec![]);
    }

    #[test]
    fn non_simply_laced_census() {
        // Odd quadratic B_n -> 2n-1 -> B_{n-1}; hermitian C_n -> C(n+1,2) -> A_{n-1}.
        assert_eq!(census_pairs("B3"), vec![(5, "B2".into(), "odd quadratic".into())]);
        assert_eq!(census_pairs("C3"), vec![(6, "A2".into(), "hermitian".into())]);
        assert_eq!(census_pairs("C4"), vec![(10, "A3".into(), "hermitian".into())]);
        let g2 = build_non_simply_laced("G2".parse().unwrap()).unwrap();
        let f4 = build_non_simply_laced("F4".parse().unwrap()).unwrap();
        assert!(grading_census(&g2).unwrap().is_empty());
        assert!(grading_census(&f4).unwrap().is_empty());
    }

    #[test]
    fn weight_formulas_hold_over_the_catalog() {
        // Rectangular pq over A_n.
        for n in 1..=8usize {
            let sys = system(&format!("A{n}"));
            let gradings = enumerate_three_gradings(&sys).unwrap();
            assert_eq!(gradings.len(), n);
            for g in gradings {
                let p = g.std_node;
                assert_eq!(g.weight(), p * (n + 1 - p), "A{n} node {p}");
            }
        }
        // Even quadratic 2(n-1) and alternating C(n,2) over D_n.
        for n in 4..=8usize {
            let sys = system(&format!("D{n}"));
            for g in enumerate_three_gradings(&sys).unwrap() {
                match g.name {
                    GradingName::EvenQuadratic => assert_eq!(g.weight(), 2 * (n - 1)),
                    GradingName::Alternating => assert_eq!(g.weight(), n * (n - 1) / 2),
                    other => panic!("unexpected {other} grading on D{n}"),
                }
            }
        }
        // Odd quadratic 2n-1 over B_n and hermitian C(n+1,2) over C_n.
        for n in 2..=8usize {
            let b = build_non_simply_laced(format!("B{n}").parse().unwrap()).unwrap();
            let gs = enumerate_three_gradings(&b).unwrap();
            assert_eq!(gs.len(), 1, "B{n}");
            assert_eq!(gs[0].weight(), 2 * n - 1, "B{n}");
        }
        for n in 3..=8usize {
            let c = build_non_simply_laced(format!("C{n}").parse().unwrap()).unwrap();
            let gs = enumerate_three_gradings(&c).unwrap();
            assert_eq!(gs.len(), 1, "C{n}");
            assert_eq!(gs[0].weight(), (n + 1) * n / 2, "C{n}");
        }
    }

    #[test]
    fn zgrading_part_counts() {
        let e7 = system("E7");
        // Twice the isospin operator: coefficient 1 at node 2.
        let q = Coweight::from_labels(&[0, 1, 0, 0, 0, 0, 0]);
        let zg = grading_from_coweight(&e7, &q).unwrap();
        assert_eq!(zg.index_range(), (-2, 2));
        assert_eq!(zg.parts.len(), 5);
        // Three times the hypercharge operator.
        let q3b = Coweight::from_labels(&[2, 3, 4, 6, 0, 0, 0]);
        let zg3b = grading_from_coweight(&e7, &q3b).unwrap();
        assert_eq!(zg3b.index_range(), (-6, 6));
        assert_eq!(zg3b.parts.len(), 13);
        // Zero coweight: a single part.
        let zero = Coweight::from_labels(&[0; 7]);
        let zg0 = grading_from_coweight(&e7, &zero).unwrap();
        assert_eq!(zg0.parts.len(), 1);
        assert_eq!(zg0.part(0).len(), 126);
    }

    #[test]
    fn non_integral_pairing_is_an_error() {
        let a2 = system("A2");
        let q = Coweight::new(vec![rat(1, 2), rat(0, 1)]);
        assert!(matches!(grading_from_coweight(&a2, &q), Err(Error::NonIntegralPairing { .. })));
        assert!(!q.is_coweight(&a2));
    }

    #[test]
    fn verify_catches_a_moved_root() {
        let e7 = system("E7");
        let g = enumerate_three_gradings(&e7).unwrap().remove(0);
        assert!(g.verify().pass);
        // Move one root from the plus part to the zero part.
        let mut zero = g.phi_zero.clone();
        let mut plus = g.phi_plus.clone();
        zero.push(plus.pop().unwrap());
        let check = verify_three_grading(&e7, &g.phi_minus, &zero, &plus);
        assert!(!check.pass);
        assert!(!check.violations.is_empty());
    }

    #[test]
    fn bi_cayley_grading_passes() {
        let e6 = system("E6");
        let g = enumerate_three_gradings(&e6).unwrap().remove(0);
        assert_eq!(g.weight(), 16);
        assert!(g.verify().pass);
    }

    #[test]
    fn a1_grading_has_empty_zero_part() {
        let a1 = system("A1");
        let gs = enumerate_three_gradings(&a1).unwrap();
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].zero_type, TypeLabel::Empty);
        assert!(gs[0].verify().pass);
    }

    #[test]
    fn binary_decomposition_line_counts() {
        let e7 = system("E7");
        let albert = enumerate_three_gradings(&e7).unwrap().remove(0);
        let (zero, plus) = binary_decomposition(&albert).unwrap();
        assert_eq!((zero.len(), plus.len()), (36, 27));

        let a4 = system("A4");
        let g = grading_census(&a4).unwrap().remove(0).representative;
        let (zero, plus) = binary_decomposition(&g).unwrap();
        assert_eq!((zero.len(), plus.len()), (4, 6));

        let d5 = system("D5");
        let alt = grading_census(&d5).unwrap().remove(0).representative;
        let (zero, plus) = binary_decomposition(&alt).unwrap();
        assert_eq!((zero.len(), plus.len()), (10, 10));
    }

    #[test]
    fn decomposition_graphs_along_the_star_sequence() {
        let seq = star_sequence().unwrap();
        let params: Vec<SrgOutcome> = seq
            .gradings
            .iter()
            .take(3)
            .map(|g| srg_check(&decomposition_graph(g).unwrap()))
            .collect();
        assert_eq!(
            params,
            vec![
                SrgOutcome::Srg { v: 27, k: 16, lambda: 10, mu: 8 },
                SrgOutcome::Srg { v: 16, k: 10, lambda: 6, mu: 6 },
                SrgOutcome::Srg { v: 10, k: 6, lambda: 3, mu: 4 },
            ]
        );
        // The final graph is the triangular prism (not strongly regular:
        // triangle edges and matching edges have different lambda).
        let prism = decomposition_graph(&seq.gradings[3]).unwrap();
        assert!(isomorphism(&prism, &Graph::rook(2, 3)).is_some());
        assert!(matches!(srg_check(&prism), SrgOutcome::NotStronglyRegular { .. }));
    }

    #[test]
    fn star_sequence_is_local_and_maximal() {
        let seq = star_sequence().unwrap();
        assert_eq!(seq.path_labels(), vec!["E7", "E6", "D5", "A4", "A1xA2"]);
        assert_eq!(seq.weights(), vec![27, 16, 10, 6]);
        let (local, evidence) = is_local_sequence(&seq).unwrap();
        assert!(local);
        assert_eq!(evidence.len(), 3);
        for e in &evidence {
            assert!(e.isomorphic && e.bijection.is_some());
        }
        assert!(is_maximal_sequence(&seq).unwrap());
    }

    #[test]
    fn local_subgraph_of_e7_graph_matches_e6_graph() {
        let seq = star_sequence().unwrap();
        let g27 = decomposition_graph(&seq.gradings[0]).unwrap();
        let g16 = decomposition_graph(&seq.gradings[1]).unwrap();
        let local = local_subgraph(&g27).unwrap();
        assert_eq!(local.len(), 16);
        assert!(isomorphism(&local, &g16).is_some());
    }

    #[test]
    fn quadratic_family_is_local() {
        // D5 -> D4 -> A3 realized inside D5.
        let d5 = system("D5");
        let even = grading_census(&d5)
            .unwrap()
            .into_iter()
            .find(|e| e.name == GradingName::EvenQuadratic)
            .unwrap()
            .representative;
        let d4 = Arc::new(subsystem_from_roots(&d5, even.phi_zero.clone()).unwrap());
        let next = grading_census(&d4).unwrap().remove(0).representative;
        let seq = GradingSequence::new(vec![even, next]);
        let (local, _) = is_local_sequence(&seq).unwrap();
        assert!(local);
        // The even-quadratic arrow is not maximal from D5 (8 < 10).
        assert!(!is_maximal_sequence(&seq).unwrap());
    }

    #[test]
    fn broken_nesting_is_rejected() {
        let e7 = system("E7");
        let albert = enumerate_three_gradings(&e7).unwrap().remove(0);
        let d5 = system("D5");
        let alt = grading_census(&d5).unwrap().remove(0).representative;
        let seq = GradingSequence::new(vec![albert, alt]);
        assert!(seq.validate_nesting().is_err());
        assert!(is_local_sequence(&seq).is_err());
    }

    #[test]
    fn single_arrow_sequence_is_maximal() {
        let e7 = system("E7");
        let albert = enumerate_three_gradings(&e7).unwrap().remove(0);
        let seq = GradingSequence::new(vec![albert]);
        assert!(is_maximal_sequence(&seq).unwrap());
        let (local, evidence) = is_local_sequence(&seq).unwrap();
        assert!(local && evidence.is_empty());
    }

    #[test]
    fn mesh_contents() {
        let mesh8 = build_mesh(8).unwrap();
        let has = |src: &str, weight: usize, dst: &str| {
            mesh8.arrows.iter().any(|a| {
                a.source.to_string() == src && a.weight == weight && a.target.to_string() == dst
            })
        };
        assert!(has("D8", 14, "D7"));
        assert!(has("D8", 28, "A7"));
        assert!(has("A8", 8, "A7"));
        assert!(has("E7", 27, "E6"));
        let mesh7 = build_mesh(7).unwrap();
        assert!(mesh7.arrows.iter().any(|a| a.source.to_string() == "E7"
            && a.target.to_string() == "E6"
            && a.weight == 27));
        // Rank 1: A1 alone, no arrows under the nonempty-zero convention.
        let mesh1 = build_mesh(1).unwrap();
        assert_eq!(mesh1.nodes, vec![TypeLabel::Irreducible(IrredLabel::new(Family::A, 1))]);
        assert!(mesh1.arrows.is_empty());
        // Arrow weights satisfy |Phi| = |Phi_0| + 2 |Phi_1| for every source.
        for a in &mesh8.arrows {
            let TypeLabel::Irreducible(src) = a.source.clone() else { unreachable!() };
            let sys = build_simply_laced(src).unwrap();
            let zero_count = sys.roots.len() - 2 * a.weight;
            let target_count: usize = match &a.target {
                TypeLabel::Empty => 0,
                TypeLabel::Irreducible(l) => l.root_count(),
                TypeLabel::Product(ls) => ls.iter().map(IrredLabel::root_count).sum(),
            };
            assert_eq!(zero_count, target_count, "{} -> {}", a.source, a.target);
        }
    }

    #[test]
    fn exceptional_sequence_is_the_unique_local_and_maximal_one() {
        let report = verify_exceptional_uniqueness(8).unwrap();
        assert!(report.pass());
        assert_eq!(report.sequences.len(), 5);
        // The local census contains the three families plus the star sequence.
        let has_path =
            |path: &[&str]| report.local_census.iter().any(|r| r.path == path);
        assert!(has_path(&["E7", "E6", "D5", "A4", "A1xA2"]));
        assert!(has_path(&["D5", "A4", "A1xA2"]));
        assert!(has_path(&["D8", "A7", "A1xA5"]));
        assert!(has_path(&["A4", "A3", "A2", "A1"]));
        assert!(has_path(&["D6", "D5", "D4", "A3", "A1xA1"]));
    }

    #[test]
    fn maximal_path_from_d5_descends_through_a4() {
        let seqs = sequences_from("D5".parse().unwrap()).unwrap();
        let maximal: Vec<&GradingSequence> =
            seqs.iter().filter(|s| is_maximal_sequence(s).unwrap()).collect();
        assert_eq!(maximal.len(), 1);
        assert_eq!(maximal[0].path_labels(), vec!["D5", "A4", "A1xA2"]);
        assert_eq!(maximal[0].weights(), vec![10, 6]);
    }

    #[test]
    fn minuscule_orbit_spans_28_equiangular_lines() {
        let e7 = system("E7");
        let orbit = minuscule_orbit(&e7).unwrap();
        assert_eq!(orbit.len(), 56);
        let report = equiangular_bound_check(&orbit, &e7.ambient, 7).unwrap();
        assert_eq!(report.n, 28);
        assert_eq!(report.bound, 28);
        assert!(report.meets_bound);
        // |cos| = 1/3.
        assert_eq!(report.common_cos2, Some(rat(1, 9)));
    }

    #[test]
    fn orthogonal_subsystems_of_acute_coweight_sets() {
        let e7 = system("E7");
        let orbit = minuscule_orbit(&e7).unwrap();
        for (k, expect) in [(1, "E6"), (2, "D5"), (3, "A4"), (4, "A1xA2")] {
            let chain = acute_minuscule_chain(&e7, &orbit, k).unwrap();
            let sub = orthogonal_subsystem(&e7, &chain).unwrap();
            assert_eq!(sub.label.to_string(), expect, "k = {k}");
        }
        // A non-acute pair is rejected.
        let q = orbit[0].clone();
        let neg: Vec<Rational> = q.iter().map(|c| -c).collect();
        assert!(orthogonal_subsystem(&e7, &[q, neg]).is_err());
    }
}
