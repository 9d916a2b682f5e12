//! Generation of the labeled trivalent graph families and the coloring
//! combinatorics that back the surgery-formula counting arguments.
//!
//! Graphs here are "numbered": `2n` labeled vertices and `3n` numbered,
//! oriented edges, encoded as an ordered list of ordered vertex pairs.
//! Three families are generated: loop-free graphs, their connected
//! subfamily, and the family with loops allowed.

use std::collections::{BTreeMap, BTreeSet};

use crate::diagram::{BeadedDiagram, UnionFind};
use crate::error::Error;
use crate::laurent::{Bead, ContextHandle};

/// A trivalent graph with `2n` numbered vertices (0-based here) and `3n`
/// numbered, oriented edges.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NumberedGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl NumberedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, Error> {
        let g = NumberedGraph { n, edges };
        g.validate(true)?;
        Ok(g)
    }

    /// Checks the degree invariant; `allow_loops` gates looped edges.
    pub fn validate(&self, allow_loops: bool) -> Result<(), Error> {
        if self.edges.len() != 3 * self.n {
            return Err(Error::MalformedDiagram(format!(
                "expected {} edges, found {}",
                3 * self.n,
                self.edges.len()
            )));
        }
        let mut deg = vec![0usize; 2 * self.n];
        for &(a, b) in &self.edges {
            if a >= 2 * self.n || b >= 2 * self.n {
                return Err(Error::MalformedDiagram("vertex out of range".into()));
            }
            if a == b && !allow_loops {
                return Err(Error::MalformedDiagram("loop not allowed here".into()));
            }
            deg[a] += 1;
            deg[b] += 1;
        }
        if deg.iter().any(|&d| d != 3) {
            return Err(Error::MalformedDiagram("graph is not trivalent".into()));
        }
        Ok(())
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut uf = UnionFind::new(2 * self.n);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        let root = uf.find(0);
        (1..2 * self.n).all(|v| uf.find(v) == root)
    }

    /// Connected components as sorted vertex sets.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(2 * self.n);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..2 * self.n {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// Converts to an unbeaded diagram (all beads 1) with default cyclic
    /// orders over the given context.
    pub fn to_diagram(&self, context: ContextHandle) -> Result<BeadedDiagram, Error> {
        BeadedDiagram::from_parts(
            context.clone(),
            2 * self.n,
            self.edges
                .iter()
                .map(|&(a, b)| (a, b, Bead::one(context.clone())))
                .collect(),
            BTreeMap::new(),
            BTreeMap::new(),
        )
    }

    /// Canonical bytes under vertex/edge relabeling and edge reversal;
    /// identifies the unlabeled isomorphism class.
    pub fn unlabeled_key(&self) -> Vec<u8> {
        let verts: Vec<usize> = (0..2 * self.n).collect();
        let mut best: Option<Vec<(usize, usize)>> = None;
        for perm in crate::diagram::permutations(&verts) {
            let mut mapped: Vec<(usize, usize)> = self
                .edges
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (perm[a], perm[b]);
                    (x.min(y), x.max(y))
                })
                .collect();
            mapped.sort_unstable();
            if best.as_ref().map_or(true, |b| mapped < *b) {
                best = Some(mapped);
            }
        }
        format!("{:?}", best.unwrap_or_default()).into_bytes()
    }

    /// One line of the edge-list form shared with the diagram DSL.
    pub fn to_dsl_line(&self) -> String {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| format!("e{}: v{} -> v{}", i + 1, a + 1, b + 1))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// The three graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Loop-free graphs.
    Su,
    /// Connected loop-free graphs.
    S,
    /// Graphs with loops allowed.
    Sl,
}

impl Family {
    fn allow_loops(self) -> bool {
        matches!(self, Family::Sl)
    }
    fn connected_only(self) -> bool {
        matches!(self, Family::S)
    }
    fn budget(self) -> usize {
        match self {
            Family::Su | Family::S => 3,
            Family::Sl => 2,
        }
    }

    pub fn parse(s: &str) -> Result<Family, Error> {
        match s {
            "Su" | "su" => Ok(Family::Su),
            "S" | "s" => Ok(Family::S),
            "Sl" | "sl" => Ok(Family::Sl),
            other => Err(Error::Validation(format!("unknown family `{other}`"))),
        }
    }
}

/// Lazy lexicographic stream over a family; each labeled graph appears
/// exactly once.
pub struct GraphStream {
    n: usize,
    family: Family,
    // Partial edge list with per-level candidate cursor; candidates are
    // ordered pairs in lexicographic order encoded as a*2n + b.
    stack: Vec<usize>,
    degrees: Vec<u8>,
    edges: Vec<(usize, usize)>,
    exhausted: bool,
}

/// Streams the graphs of one family in lexicographic edge-list order.
pub fn enumerate_graphs(n: usize, family: Family) -> Result<GraphStream, Error> {
    if n > family.budget() {
        return Err(Error::BudgetExceeded(format!(
            "family {:?} is generated exhaustively only up to n = {}",
            family,
            family.budget()
        )));
    }
    Ok(GraphStream {
        n,
        family,
        stack: Vec::new(),
        degrees: vec![0; 2 * n],
        edges: Vec::new(),
        exhausted: false,
    })
}

impl GraphStream {
    fn vcount(&self) -> usize {
        2 * self.n
    }

    /// Tries to accept the candidate pair code at the current level.
    fn candidate_fits(&self, code: usize) -> bool {
        let v = self.vcount();
        let (a, b) = (code / v, code % v);
        if a == b {
            if !self.family.allow_loops() {
                return false;
            }
            if self.degrees[a] > 1 {
                return false;
            }
        } else if self.degrees[a] >= 3 || self.degrees[b] >= 3 {
            return false;
        }
        true
    }

    /// Degree feasibility for the remaining levels.
    fn feasible(&self) -> bool {
        let remaining = 3 * self.n - self.edges.len();
        let per_edge = if self.family.allow_loops() { 2 } else { 1 };
        self.degrees
            .iter()
            .all(|&d| (3 - d as usize) <= per_edge * remaining)
    }

    fn push(&mut self, code: usize) {
        let v = self.vcount();
        let (a, b) = (code / v, code % v);
        self.degrees[a] += 1;
        self.degrees[b] += 1;
        self.edges.push((a, b));
        self.stack.push(code);
    }

    fn pop(&mut self) -> usize {
        let code = self.stack.pop().unwrap();
        let (a, b) = self.edges.pop().unwrap();
        self.degrees[a] -= 1;
        self.degrees[b] -= 1;
        code
    }
}

impl Iterator for GraphStream {
    type Item = NumberedGraph;

    fn next(&mut self) -> Option<NumberedGraph> {
        if self.exhausted || self.n == 0 {
            if !self.exhausted && self.n == 0 {
                self.exhausted = true;
                return Some(NumberedGraph {
                    n: 0,
                    edges: Vec::new(),
                });
            }
            return None;
        }
        let v = self.vcount();
        let total = 3 * self.n;
        // Resume the depth-first scan: if a full graph was emitted last
        // time, backtrack one level first.
        let mut cursor: Option<usize> = if self.edges.len() == total {
            Some(self.pop() + 1)
        } else {
            Some(0)
        };
        loop {
            match cursor.take() {
                Some(mut code) => {
                    // Descend with the first fitting candidate at or after
                    // `code`, or backtrack when none fits.
                    let mut placed = false;
                    while code < v * v {
                        if self.candidate_fits(code) {
                            self.push(code);
                            if self.feasible() {
                                placed = true;
                                break;
                            }
                            self.pop();
                        }
                        code += 1;
                    }
                    if !placed {
                        if self.stack.is_empty() {
                            self.exhausted = true;
                            return None;
                        }
                        cursor = Some(self.pop() + 1);
                        continue;
                    }
                    if self.edges.len() == total {
                        if self.family.connected_only() {
                            let g = NumberedGraph {
                                n: self.n,
                                edges: self.edges.clone(),
                            };
                            if !g.is_connected() {
                                cursor = Some(self.pop() + 1);
                                continue;
                            }
                            return Some(g);
                        }
                        return Some(NumberedGraph {
                            n: self.n,
                            edges: self.edges.clone(),
                        });
                    }
                    cursor = Some(0);
                }
                None => unreachable!(),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Colorings.

/// Which of the five admissible-component shapes a colored tree matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentCase {
    V,
    Theta,
    D1,
    D2,
    D3,
}

/// A coloring of all vertices and some edges by handlebody indices
/// `1..=2n`, with the matched case of every colored-tree component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub vertex_colors: Vec<usize>,
    pub edge_colors: Vec<Option<usize>>,
    pub cases: Vec<ComponentCase>,
}

impl Coloring {
    pub fn is_simple(&self) -> bool {
        self.edge_colors.iter().all(|c| c.is_none())
    }
}

/// All simple colorings: bijections from vertices to `1..=2n`.
pub fn enumerate_simple_colorings(g: &NumberedGraph) -> Vec<Coloring> {
    let verts: Vec<usize> = (1..=2 * g.n).collect();
    crate::diagram::permutations(&verts)
        .into_iter()
        .map(|p| Coloring {
            vertex_colors: p,
            edge_colors: vec![None; g.edges.len()],
            cases: vec![ComponentCase::V; 2 * g.n],
        })
        .collect()
}

/// Classifies the colored-edge subgraph components against the five
/// admissible shapes; `None` when some component matches nothing or a
/// label-order constraint fails. Colors themselves are not consulted.
pub fn classify_colored_subgraph(
    g: &NumberedGraph,
    colored: &[bool],
) -> Option<Vec<(Vec<usize>, ComponentCase)>> {
    let nv = 2 * g.n;
    // Components of the colored subgraph over all vertices.
    let mut uf = UnionFind::new(nv);
    for (i, &(a, b)) in g.edges.iter().enumerate() {
        if colored[i] {
            if a == b {
                // A colored loop can never sit inside a disjoint union of
                // trees.
                return None;
            }
            uf.union(a, b);
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..nv {
        comps.entry(uf.find(v)).or_default().push(v);
    }
    let mut out = Vec::new();
    for comp in comps.into_values() {
        let inside = |v: usize| comp.contains(&v);
        let tree_edges: Vec<usize> = (0..g.edges.len())
            .filter(|&i| colored[i] && inside(g.edges[i].0))
            .collect();
        // Tree check: k vertices need k-1 colored edges.
        if tree_edges.len() + 1 != comp.len() {
            return None;
        }
        let unc_between = |x: usize, y: usize| -> Vec<usize> {
            (0..g.edges.len())
                .filter(|&i| {
                    !colored[i] && {
                        let (a, b) = g.edges[i];
                        (a == x && b == y) || (a == y && b == x)
                    }
                })
                .collect()
        };
        let external: Vec<usize> = (0..g.edges.len())
            .filter(|&i| {
                !colored[i] && {
                    let (a, b) = g.edges[i];
                    inside(a) != inside(b)
                }
            })
            .collect();
        let case = match tree_edges.len() {
            0 => ComponentCase::V,
            1 => {
                let (u, v) = g.edges[tree_edges[0]];
                let parallels = unc_between(u, v);
                match (parallels.len(), external.len()) {
                    // Component of T in the ambient graph is a theta.
                    (2, 0) => ComponentCase::Theta,
                    (1, 2) => ComponentCase::D1,
                    _ => return None,
                }
            }
            2 => {
                // Path a - b - c with e(r1) = {a,b}, e(r2) = {b,c}; the
                // external edge leaves from a; c hangs on two uncolored
                // edges back to a and b; r1 < r2.
                let (e1, e2) = (tree_edges[0], tree_edges[1]);
                let ends = |i: usize| [g.edges[i].0, g.edges[i].1];
                let shared: Vec<usize> = ends(e1)
                    .iter()
                    .copied()
                    .filter(|x| ends(e2).contains(x))
                    .collect();
                if shared.len() != 1 {
                    return None;
                }
                let b = shared[0];
                let mut ok = false;
                // Try both assignments of which tree edge is e(r1).
                for (r1, r2) in [(e1, e2), (e2, e1)] {
                    let a = ends(r1).iter().copied().find(|&x| x != b).unwrap();
                    let c = ends(r2).iter().copied().find(|&x| x != b).unwrap();
                    if r1 < r2
                        && external.len() == 1
                        && {
                            let (x, y) = g.edges[external[0]];
                            x == a || y == a
                        }
                        && !unc_between(c, a).is_empty()
                        && !unc_between(c, b).is_empty()
                    {
                        ok = true;
                        break;
                    }
                }
                if !ok {
                    return None;
                }
                ComponentCase::D2
            }
            3 => {
                // Linear tree a - b - c - d; uncolored duplicates of {a,b}
                // and {c,d} and an uncolored {a,d}; the middle label is the
                // smallest.
                if external.len() != 0 {
                    return None;
                }
                let deg_in_tree = |v: usize| {
                    tree_edges
                        .iter()
                        .filter(|&&i| g.edges[i].0 == v || g.edges[i].1 == v)
                        .count()
                };
                let endpoints: Vec<usize> =
                    comp.iter().copied().filter(|&v| deg_in_tree(v) == 1).collect();
                if endpoints.len() != 2 || comp.len() != 4 {
                    return None;
                }
                // Walk the path from one endpoint.
                let mut path = vec![endpoints[0]];
                let mut path_edges = Vec::new();
                while path.len() < 4 {
                    let cur = *path.last().unwrap();
                    let next = tree_edges.iter().copied().find(|&i| {
                        let (x, y) = g.edges[i];
                        !path_edges.contains(&i) && (x == cur || y == cur)
                    })?;
                    path_edges.push(next);
                    let (x, y) = g.edges[next];
                    path.push(if x == cur { y } else { x });
                }
                let (a, b, c, d) = (path[0], path[1], path[2], path[3]);
                let (rab, rbc, rcd) = (path_edges[0], path_edges[1], path_edges[2]);
                if rbc < rab
                    && rbc < rcd
                    && !unc_between(a, b).is_empty()
                    && !unc_between(c, d).is_empty()
                    && !unc_between(a, d).is_empty()
                {
                    ComponentCase::D3
                } else {
                    return None;
                }
            }
            _ => return None,
        };
        out.push((comp, case));
    }
    Some(out)
}

/// All admissible colorings of a graph, each with its per-component case
/// flags.
pub fn enumerate_admissible_colorings(g: &NumberedGraph) -> Result<Vec<Coloring>, Error> {
    if g.n > 2 {
        return Err(Error::BudgetExceeded(
            "admissible colorings are enumerated for n <= 2".into(),
        ));
    }
    let ne = g.edges.len();
    let nv = 2 * g.n;
    let mut out = Vec::new();
    for mask in 0u32..(1 << ne) {
        let colored: Vec<bool> = (0..ne).map(|i| mask >> i & 1 == 1).collect();
        let Some(classified) = classify_colored_subgraph(g, &colored) else {
            continue;
        };
        let colored_edges: Vec<usize> = (0..ne).filter(|&i| colored[i]).collect();
        // Objects to color: tree components and colored edges; a coloring
        // is a bijection from N onto them, which needs exact cardinality.
        if classified.len() + colored_edges.len() != nv {
            continue;
        }
        let objects: Vec<usize> = (0..nv).collect();
        for perm in crate::diagram::permutations(&objects) {
            // First `classified.len()` slots color the components, the
            // rest color the edges, by assigned color = slot value + 1.
            let mut vertex_colors = vec![0usize; nv];
            let mut edge_colors = vec![None; ne];
            for (ci, (comp, _)) in classified.iter().enumerate() {
                for &v in comp {
                    vertex_colors[v] = perm[ci] + 1;
                }
            }
            for (k, &e) in colored_edges.iter().enumerate() {
                edge_colors[e] = Some(perm[classified.len() + k] + 1);
            }
            out.push(Coloring {
                vertex_colors,
                edge_colors,
                cases: classified.iter().map(|(_, c)| *c).collect(),
            });
        }
    }
    Ok(out)
}

/// Full admissibility predicate over an explicit coloring.
pub fn is_admissible(
    g: &NumberedGraph,
    vertex_colors: &[usize],
    edge_colors: &[Option<usize>],
) -> bool {
    let nv = 2 * g.n;
    let ne = g.edges.len();
    if vertex_colors.len() != nv || edge_colors.len() != ne {
        return false;
    }
    let colored: Vec<bool> = edge_colors.iter().map(|c| c.is_some()).collect();
    let Some(classified) = classify_colored_subgraph(g, &colored) else {
        return false;
    };
    // Colors lie in N.
    if vertex_colors.iter().any(|&c| c == 0 || c > nv) {
        return false;
    }
    if edge_colors.iter().flatten().any(|&c| c == 0 || c > nv) {
        return false;
    }
    // Component color constancy, distinctness across components and edges,
    // and full coverage of N.
    let mut used: BTreeSet<usize> = BTreeSet::new();
    for (comp, _) in &classified {
        let c = vertex_colors[comp[0]];
        if comp.iter().any(|&v| vertex_colors[v] != c) {
            return false;
        }
        if !used.insert(c) {
            return false;
        }
    }
    for c in edge_colors.iter().flatten() {
        if !used.insert(*c) {
            return false;
        }
    }
    used.len() == nv
}

// ---------------------------------------------------------------------------
// Tadpole counting.

/// Isolated two-loop components (a loop at each of two vertices joined by
/// a middle edge): the shapes whose edge labels the class equivalence
/// permutes. Returns (loop, middle, loop) edge index triples.
pub fn tadpole_components(g: &NumberedGraph) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for comp in g.components() {
        if comp.len() != 2 {
            continue;
        }
        let (u, v) = (comp[0], comp[1]);
        let mut loops_u = Vec::new();
        let mut loops_v = Vec::new();
        let mut middle = Vec::new();
        for (i, &(a, b)) in g.edges.iter().enumerate() {
            if a == u && b == u {
                loops_u.push(i);
            } else if a == v && b == v {
                loops_v.push(i);
            } else if (a == u && b == v) || (a == v && b == u) {
                middle.push(i);
            }
        }
        if loops_u.len() == 1 && loops_v.len() == 1 && middle.len() == 1 {
            out.push((loops_u[0], middle[0], loops_v[0]));
        }
    }
    out
}

/// Counting report for the tadpole equivalence class of a labeled graph:
/// `t` two-loop components, the class size under label permutations inside
/// them, and the number of dashed labeled graphs admissible for the
/// loop-elimination bookkeeping (a dashed loop needs a bigger middle
/// label). Both counts equal `6^t`.
pub fn tadpole_class_counts(g: &NumberedGraph) -> (usize, u64, u64) {
    let tads = tadpole_components(g);
    let t = tads.len();
    // Explicit orbit under within-component label permutations.
    let mut orbit: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    let mut admissible = 0u64;
    let slots: Vec<[usize; 3]> = tads.iter().map(|&(a, m, b)| [a, m, b]).collect();
    fn rec(
        g: &NumberedGraph,
        slots: &[[usize; 3]],
        k: usize,
        current: &mut Vec<(usize, usize)>,
        orbit: &mut BTreeSet<Vec<(usize, usize)>>,
        admissible: &mut u64,
        dash_factor: u64,
    ) {
        if k == slots.len() {
            orbit.insert(current.clone());
            *admissible += dash_factor;
            return;
        }
        let [a, m, b] = slots[k];
        let labels = [a, m, b];
        for perm in crate::diagram::permutations(&labels.to_vec()) {
            // perm[i] is the new label (edge position) receiving the
            // content of slot i: slot order is (loop, middle, loop).
            let mut next = current.clone();
            next[perm[0]] = g.edges[a];
            next[perm[1]] = g.edges[m];
            next[perm[2]] = g.edges[b];
            // Dashing: one loop per component, with middle label bigger
            // than the dashed loop label.
            let dashes = [perm[0], perm[2]]
                .iter()
                .filter(|&&lp| lp < perm[1])
                .count() as u64;
            rec(g, slots, k + 1, &mut next, orbit, admissible, dash_factor * dashes);
        }
    }
    let mut current = g.edges.clone();
    rec(g, &slots, 0, &mut current, &mut orbit, &mut admissible, 1);
    (t, orbit.len() as u64, admissible)
}

/// `(l - 1)!!` by the pairing recursion; the independent oracle for
/// perfect matching counts. `l` must be even and at most 24.
pub fn matching_count_oracle(l: usize) -> Result<u64, Error> {
    if l % 2 != 0 {
        return Err(Error::OddLegCount(l));
    }
    if l > 24 {
        return Err(Error::BudgetExceeded("matching oracle capped at 24".into()));
    }
    let mut acc = 1u64;
    let mut k = l;
    while k >= 2 {
        acc *= (k - 1) as u64;
        k -= 2;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su1_has_eight_graphs() {
        let graphs: Vec<_> = enumerate_graphs(1, Family::Su).unwrap().collect();
        assert_eq!(graphs.len(), 8);
        for g in &graphs {
            g.validate(false).unwrap();
        }
        // S_1 = S^u_1: the theta graph is connected.
        let connected: Vec<_> = enumerate_graphs(1, Family::S).unwrap().collect();
        assert_eq!(connected.len(), 8);
    }

    #[test]
    fn sl1_adds_loop_graphs() {
        let all: Vec<_> = enumerate_graphs(1, Family::Sl).unwrap().collect();
        assert_eq!(all.len(), 20);
        let with_loops = all.iter().filter(|g| g.has_loops()).count();
        assert_eq!(with_loops, 12);
    }

    #[test]
    fn sl2_count_matches_closed_form() {
        // Bijections {1..6n} -> slots over 6^{2n}: (6n)!/6^{2n}.
        let count = enumerate_graphs(2, Family::Sl).unwrap().count();
        assert_eq!(count, 479001600 / 1296);
    }

    #[test]
    fn budget_enforced() {
        assert!(matches!(
            enumerate_graphs(3, Family::Sl),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(enumerate_graphs(3, Family::Su).is_ok());
    }

    #[test]
    fn streams_are_lexicographic_and_duplicate_free() {
        let graphs: Vec<_> = enumerate_graphs(1, Family::Sl).unwrap().collect();
        let mut sorted = graphs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(graphs, sorted);
    }

    #[test]
    fn simple_colorings_count() {
        let theta = NumberedGraph::new(1, vec![(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(enumerate_simple_colorings(&theta).len(), 2);
        let g2 = enumerate_graphs(2, Family::Su).unwrap().next().unwrap();
        assert_eq!(enumerate_simple_colorings(&g2).len(), 24);
    }

    #[test]
    fn theta_admissible_colorings() {
        let theta = NumberedGraph::new(1, vec![(0, 1), (0, 1), (0, 1)]).unwrap();
        let all = enumerate_admissible_colorings(&theta).unwrap();
        // 2 simple + 3 edges * 2 color assignments in the theta case.
        assert_eq!(all.len(), 8);
        let theta_case = all
            .iter()
            .filter(|c| c.cases.contains(&ComponentCase::Theta))
            .count();
        assert_eq!(theta_case, 6);
        for c in &all {
            assert!(is_admissible(&theta, &c.vertex_colors, &c.edge_colors));
        }
    }

    #[test]
    fn no_double_edges_means_simple_only() {
        // The complete graph K4 has no parallel edges, loops or theta
        // components, so only simple colorings are admissible.
        let k4 = NumberedGraph::new(
            2,
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        let all = enumerate_admissible_colorings(&k4).unwrap();
        assert_eq!(all.len(), 24);
        assert!(all.iter().all(|c| c.is_simple()));
    }

    #[test]
    fn tadpole_counts_examples() {
        // No tadpoles.
        let theta = NumberedGraph::new(1, vec![(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(tadpole_class_counts(&theta), (0, 1, 1));

        // One two-loop component.
        let dumbbell = NumberedGraph::new(1, vec![(0, 0), (0, 1), (1, 1)]).unwrap();
        let (t, class, adm) = tadpole_class_counts(&dumbbell);
        assert_eq!((t, class, adm), (1, 6, 6));

        // Two two-loop components.
        let double = NumberedGraph::new(
            2,
            vec![(0, 0), (0, 1), (1, 1), (2, 2), (2, 3), (3, 3)],
        )
        .unwrap();
        let (t, class, adm) = tadpole_class_counts(&double);
        assert_eq!((t, class, adm), (2, 36, 36));
    }

    #[test]
    fn dashing_identity_over_sl1() {
        // Summing admissible dashings over every labeled graph recovers
        // the family size: the loop-elimination bookkeeping is bijective.
        let mut total = 0u64;
        let mut count = 0u64;
        for g in enumerate_graphs(1, Family::Sl).unwrap() {
            let tads = tadpole_components(&g);
            let mut dashes = 1u64;
            for (a, m, b) in tads {
                dashes *= [a, b].iter().filter(|&&lp| lp < m).count() as u64;
            }
            total += dashes;
            count += 1;
        }
        assert_eq!(total, count);
    }

    #[test]
    fn matching_oracle_values() {
        assert_eq!(matching_count_oracle(2).unwrap(), 1);
        assert_eq!(matching_count_oracle(6).unwrap(), 15);
        assert_eq!(matching_count_oracle(12).unwrap(), 10395);
        assert_eq!(matching_count_oracle(24).unwrap(), 316234143225);
        assert!(matching_count_oracle(5).is_err());
    }

    #[test]
    fn orbit_identity_theta() {
        // 2^{3n}(3n)!(2n)!/Aut labeled presentations.
        let theta = NumberedGraph::new(1, vec![(0, 1), (0, 1), (0, 1)]).unwrap();
        let d = theta
            .to_diagram(crate::laurent::DeltaContext::trivial())
            .unwrap();
        assert_eq!(d.automorphism_count(), 12);
        let labeled = enumerate_graphs(1, Family::Sl)
            .unwrap()
            .filter(|g| g.unlabeled_key() == theta.unlabeled_key())
            .count() as u64;
        assert_eq!(labeled, 8 * 6 * 2 / 12);
    }
}
