//! Small simple graphs on up to 128 vertices: adjacency bitsets, maximal
//! independent sets, isomorphism search with explicit certificates, and the
//! strongly-regular parameter check.

use crate::error::{Error, Result};

/// Undirected simple graph; vertex `i`'s neighborhood is the bitset `adj[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<u128>,
}

/// Outcome of [`srg_check`]: parameters or a named witness of failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SrgOutcome {
    Srg { v: usize, k: usize, lambda: usize, mu: usize },
    NotRegular { a: usize, b: usize },
    NotStronglyRegular { a: usize, b: usize },
}

impl Graph {
    pub fn new(n: usize) -> Self {
        assert!(n <= 128, "graph too large");
        Graph { n, adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b);
            }
        }
        g
    }

    /// Cocktail party graph CP(m): complete on 2m vertices minus the perfect
    /// matching {2i, 2i+1}.
    pub fn cocktail_party(m: usize) -> Self {
        let mut g = Graph::complete(2 * m);
        for i in 0..m {
            g.remove_edge(2 * i, 2 * i + 1);
        }
        g
    }

    /// Rook's graph K_p x K_q on p*q vertices (vertex = (row, col); adjacent
    /// when exactly one coordinate agrees). K_2 x K_3 is the triangular prism.
    pub fn rook(p: usize, q: usize) -> Self {
        let mut g = Graph::new(p * q);
        for a in 0..p * q {
            for b in a + 1..p * q {
                let (ra, ca) = (a / q, a % q);
                let (rb, cb) = (b / q, b % q);
                if (ra == rb) != (ca == cb) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b && a < self.n && b < self.n);
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.adj[a] &= !(1 << b);
        self.adj[b] &= !(1 << a);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.has_edge(v, u)).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn complement(&self) -> Graph {
        let mask = if self.n == 128 { u128::MAX } else { (1u128 << self.n) - 1 };
        let adj = (0..self.n).map(|v| !self.adj[v] & mask & !(1 << v)).collect();
        Graph { n: self.n, adj }
    }

    /// Induced subgraph on `vertices` (kept in the given order); the returned
    /// mapping sends new indices to old ones.
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut g = Graph::new(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(i, j);
                }
            }
        }
        (g, vertices.to_vec())
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = 1u128;
        let mut frontier = 1u128;
        while frontier != 0 {
            let mut next = 0u128;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v] & !seen;
            }
            seen |= next;
            frontier = next;
        }
        seen.count_ones() as usize == self.n
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut unvisited: Vec<bool> = vec![true; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if !unvisited[start] {
                continue;
            }
            let mut comp = vec![start];
            unvisited[start] = false;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for u in self.neighbors(v) {
                    if unvisited[u] {
                        unvisited[u] = false;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// All maximal independent sets, as sorted vertex lists in sorted order
    /// (Bron-Kerbosch with pivoting on the complement).
    pub fn maximal_independent_sets(&self) -> Vec<Vec<usize>> {
        let comp = self.complement();
        let mut out = Vec::new();
        let all = if self.n == 128 { u128::MAX } else { (1u128 << self.n) - 1 };
        bron_kerbosch(&comp, 0, all, 0, &mut out);
        let mut sets: Vec<Vec<usize>> = out
            .into_iter()
            .map(|mask| {
                let mut s: Vec<usize> = (0..self.n).filter(|&v| mask >> v & 1 == 1).collect();
                s.sort_unstable();
                s
            })
            .collect();
        sets.sort();
        sets
    }

    /// Number of common neighbors of `a` and `b`.
    pub fn common_neighbors(&self, a: usize, b: usize) -> usize {
        (self.adj[a] & self.adj[b]).count_ones() as usize
    }

    /// Induced subgraph on the neighborhood of the first vertex.
    pub fn local_subgraph(&self) -> Result<Graph> {
        if self.n == 0 || self.degree(0) == 0 {
            return Err(Error::Invalid("local subgraph of an empty neighborhood".into()));
        }
        Ok(self.induced(&self.neighbors(0)).0)
    }

    /// Proxy check for vertex-transitivity: every vertex neighborhood is
    /// isomorphic to the first vertex's neighborhood.
    pub fn neighborhoods_pairwise_isomorphic(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let (base, _) = self.induced(&self.neighbors(0));
        (1..self.n).all(|v| {
            let (h, _) = self.induced(&self.neighbors(v));
            isomorphism(&base, &h).is_some()
        })
    }

    /// Eccentricity-based diameter; `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for v in 0..self.n {
            let dist = self.bfs_distances(v);
            let mut far = 0;
            for &d in &dist {
                match d {
                    Some(d) => far = far.max(d),
                    None => return None,
                }
            }
            best = best.max(far);
        }
        Some(best)
    }

    /// Length of the shortest cycle; `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for start in 0..self.n {
            // BFS from start, recording parents; a non-tree edge closes a cycle.
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            dist[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(v) {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        parent[u] = v;
                        queue.push_back(u);
                    } else if parent[v] != u {
                        let cycle = dist[v] + dist[u] + 1;
                        if best.map_or(true, |b| cycle < b) {
                            best = Some(cycle);
                        }
                    }
                }
            }
        }
        best
    }

    fn bfs_distances(&self, start: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[start] = Some(0);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if dist[u].is_none() {
                    dist[u] = Some(dist[v].unwrap() + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for v in 0..self.n {
            s.push_str(&format!("  {v};\n"));
        }
        for (a, b) in self.edges() {
            s.push_str(&format!("  {a} -- {b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

fn bron_kerbosch(g: &Graph, r: u128, mut p: u128, mut x: u128, out: &mut Vec<u128>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    // Pivot on the candidate with the most neighbors in P.
    let mut pivot = None;
    let mut best = 0;
    let mut scan = p | x;
    while scan != 0 {
        let v = scan.trailing_zeros() as usize;
        scan &= scan - 1;
        let cnt = (g.adj[v] & p).count_ones();
        if pivot.is_none() || cnt > best {
            pivot = Some(v);
            best = cnt;
        }
    }
    let mut candidates = p & !g.adj[pivot.unwrap()];
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        let bit = 1u128 << v;
        bron_kerbosch(g, r | bit, p & g.adj[v], x & g.adj[v], out);
        p &= !bit;
        x |= bit;
    }
}

/// Per-vertex invariant used to prune isomorphism search: degree, triangle
/// count, and the sorted multiset of neighbor degrees.
fn vertex_invariants(g: &Graph) -> Vec<(usize, usize, Vec<usize>)> {
    (0..g.len())
        .map(|v| {
            let nbrs = g.neighbors(v);
            let triangles = nbrs
                .iter()
                .map(|&u| (g.adj[u] & g.adj[v]).count_ones() as usize)
                .sum::<usize>()
                / 2;
            let mut nd: Vec<usize> = nbrs.iter().map(|&u| g.degree(u)).collect();
            nd.sort_unstable();
            (g.degree(v), triangles, nd)
        })
        .collect()
}

/// Finds one isomorphism from `a` onto `b` (a vertex bijection preserving
/// adjacency both ways), or `None`.
pub fn isomorphism(a: &Graph, b: &Graph) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.edge_count() != b.edge_count() {
        return None;
    }
    let inv_a = vertex_invariants(a);
    let inv_b = vertex_invariants(b);
    {
        let mut sa = inv_a.clone();
        let mut sb = inv_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return None;
        }
    }
    let n = a.len();
    // Order the source vertices to keep the partial map connected where
    // possible; highly symmetric inputs still resolve quickly because the
    // adjacency consistency check prunes hard.
    let order: Vec<usize> = {
        let mut placed = vec![false; n];
        let mut ordered = Vec::with_capacity(n);
        while ordered.len() < n {
            let next = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let adj_placed =
                        ordered.iter().filter(|&&u| a.has_edge(u, v)).count();
                    (adj_placed, a.degree(v), std::cmp::Reverse(v))
                })
                .unwrap();
            placed[next] = true;
            ordered.push(next);
        }
        ordered
    };

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        depth: usize,
        order: &[usize],
        a: &Graph,
        b: &Graph,
        inv_a: &[(usize, usize, Vec<usize>)],
        inv_b: &[(usize, usize, Vec<usize>)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        'cand: for w in 0..b.len() {
            if used[w] || inv_a[v] != inv_b[w] {
                continue;
            }
            for &u in &order[..depth] {
                if a.has_edge(v, u) != b.has_edge(w, map[u]) {
                    continue 'cand;
                }
            }
            map[v] = w;
            used[w] = true;
            if extend(depth + 1, order, a, b, inv_a, inv_b, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
    if extend(0, &order, a, b, &inv_a, &inv_b, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

/// Verifies strong regularity and returns `(v, k, lambda, mu)`, or the first
/// witness pair that breaks regularity or common-neighbor uniformity.
pub fn srg_check(g: &Graph) -> SrgOutcome {
    let n = g.len();
    if n == 0 {
        return SrgOutcome::Srg { v: 0, k: 0, lambda: 0, mu: 0 };
    }
    let k = g.degree(0);
    for v in 1..n {
        if g.degree(v) != k {
            return SrgOutcome::NotRegular { a: 0, b: v };
        }
    }
    let mut lambda = None;
    let mut mu = None;
    for a in 0..n {
        for b in a + 1..n {
            let c = g.common_neighbors(a, b);
            let slot = if g.has_edge(a, b) { &mut lambda } else { &mut mu };
            match slot {
                None => *slot = Some(c),
                Some(x) if *x == c => {}
                Some(_) => return SrgOutcome::NotStronglyRegular { a, b },
            }
        }
    }
    SrgOutcome::Srg { v: n, k, lambda: lambda.unwrap_or(0), mu: mu.unwrap_or(0) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn petersen_is_srg_10_3_0_1() {
        // Kneser graph K(5,2): vertices are 2-subsets, edges join disjoint pairs.
        let pairs: Vec<(usize, usize)> =
            (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        let mut g = Graph::new(10);
        for i in 0..10 {
            for j in i + 1..10 {
                let (a, b) = pairs[i];
                let (c, d) = pairs[j];
                if a != c && a != d && b != c && b != d {
                    g.add_edge(i, j);
                }
            }
        }
        assert_eq!(srg_check(&g), SrgOutcome::Srg { v: 10, k: 3, lambda: 0, mu: 1 });
    }

    #[test]
    fn path_is_not_regular() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(matches!(srg_check(&g), SrgOutcome::NotRegular { .. }));
    }

    #[test]
    fn maximal_independent_sets_match_brute_force() {
        // Prism = K_2 x K_3.
        let g = Graph::rook(2, 3);
        let fast = g.maximal_independent_sets();
        // Oracle: scan all subsets.
        let n = g.len();
        let mut slow = Vec::new();
        for mask in 0u32..1 << n {
            let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let independent = verts
                .iter()
                .enumerate()
                .all(|(i, &a)| verts[i + 1..].iter().all(|&b| !g.has_edge(a, b)));
            if !independent {
                continue;
            }
            let maximal = (0..n).all(|v| {
                verts.contains(&v) || verts.iter().any(|&a| g.has_edge(a, v))
            });
            if maximal {
                slow.push(verts);
            }
        }
        slow.sort();
        assert_eq!(fast, slow);
    }

    #[test]
    fn isomorphism_prism_vs_relabelled_prism() {
        let g = Graph::rook(2, 3);
        let perm = [3usize, 5, 1, 0, 4, 2];
        let mut h = Graph::new(6);
        for (a, b) in g.edges() {
            h.add_edge(perm[a], perm[b]);
        }
        let iso = isomorphism(&g, &h).expect("prism is isomorphic to itself relabelled");
        for (a, b) in g.edges() {
            assert!(h.has_edge(iso[a], iso[b]));
        }
        // C6 has the same degree sequence but is not isomorphic to the prism.
        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        assert!(isomorphism(&g, &c6).is_none());
    }

    #[test]
    fn local_subgraph_of_complete_graph() {
        let k4 = Graph::complete(4);
        let local = k4.local_subgraph().unwrap();
        assert!(isomorphism(&local, &Graph::complete(3)).is_some());
        let edgeless = Graph::new(3);
        assert!(edgeless.local_subgraph().is_err());
    }

    #[test]
    fn diameter_and_girth() {
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(c5.diameter(), Some(2));
        assert_eq!(c5.girth(), Some(5));
        let tree = Graph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]);
        assert_eq!(tree.girth(), None);
        let disconnected = Graph::new(2);
        assert_eq!(disconnected.diameter(), None);
    }

    #[test]
    fn cocktail_party_and_components() {
        let cp3 = Graph::cocktail_party(3);
        assert_eq!(srg_check(&cp3), SrgOutcome::Srg { v: 6, k: 4, lambda: 2, mu: 4 });
        let mut g = Graph::new(5);
        g.add_edge(0, 3);
        g.add_edge(1, 2);
        assert_eq!(g.components(), vec![vec![0, 3], vec![1, 2], vec![4]]);
    }
}
