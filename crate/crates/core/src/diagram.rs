//! Beaded trivalent diagrams: combinatorial graphs with vertex cyclic
//! orders, oriented beaded edges and optional decorated univalent legs,
//! together with canonical labeling and automorphism counting.
//!
//! Two canonical forms live here:
//!
//! * [`BeadedDiagram::canonical_key`] identifies diagrams up to relabeling
//!   isomorphisms that preserve vertex orientations, edge orientations,
//!   beads and leg decorations on the nose.
//! * [`class_canonical`] identifies diagrams up to the conjugation,
//!   holonomy and antisymmetry relations, returning a representative, a
//!   sign, and detecting classes that vanish because some self-isomorphism
//!   is orientation-odd. It requires monomial beads and is the workhorse
//!   of the relation engine.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::Error;
use crate::laurent::{Bead, ContextHandle, LaurentPoly};
use crate::rational::Q;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Which end of an edge a half-edge is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Src,
    Tgt,
}

/// A half-edge, named by its edge and end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdge {
    pub edge: EdgeId,
    pub end: End,
}

impl HalfEdge {
    pub fn src(edge: EdgeId) -> Self {
        HalfEdge {
            edge,
            end: End::Src,
        }
    }
    pub fn tgt(edge: EdgeId) -> Self {
        HalfEdge {
            edge,
            end: End::Tgt,
        }
    }
}

/// Decoration carried by a univalent leg.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LegLabel {
    /// A curve `theta^shift z_curve^(handlebody)` in the cyclic cover.
    Curve {
        handlebody: usize,
        curve: usize,
        shift: i64,
    },
    /// An undecorated hair leg produced by the hair map.
    Hair,
}

impl fmt::Display for LegLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LegLabel::Curve {
                handlebody,
                curve,
                shift,
            } => write!(f, "z({handlebody},{curve},{shift})"),
            LegLabel::Hair => write!(f, "hair"),
        }
    }
}

/// A vertex: trivalent with a cyclic order of its three half-edges, or a
/// decorated univalent leg.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Vertex {
    Trivalent { cyclic: [HalfEdge; 3] },
    Leg { label: LegLabel, half: HalfEdge },
}

impl Vertex {
    pub fn is_leg(&self) -> bool {
        matches!(self, Vertex::Leg { .. })
    }

    pub fn half_edges(&self) -> Vec<HalfEdge> {
        match self {
            Vertex::Trivalent { cyclic } => cyclic.to_vec(),
            Vertex::Leg { half, .. } => vec![*half],
        }
    }
}

/// An oriented edge with a bead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub src: VertexId,
    pub tgt: VertexId,
    pub bead: Bead,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.src == self.tgt
    }

    pub fn endpoint(&self, end: End) -> VertexId {
        match end {
            End::Src => self.src,
            End::Tgt => self.tgt,
        }
    }
}

/// Canonical key bytes; equal keys identify isomorphic presentations.
pub type CanonicalKey = Vec<u8>;

/// A trivalent combinatorial graph with beads and optional legs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeadedDiagram {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    context: ContextHandle,
}

impl BeadedDiagram {
    /// Builds a diagram from an edge list, optional explicit cyclic orders
    /// and leg declarations, then validates it.
    ///
    /// When `orders` is `None` for a trivalent vertex, its cyclic order is
    /// the incidence order: edges scanned by index, source end first.
    pub fn from_parts(
        context: ContextHandle,
        num_vertices: usize,
        edges: Vec<(VertexId, VertexId, Bead)>,
        orders: BTreeMap<VertexId, [HalfEdge; 3]>,
        legs: BTreeMap<VertexId, LegLabel>,
    ) -> Result<Self, Error> {
        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|(src, tgt, bead)| Edge { src, tgt, bead })
            .collect();
        let mut incidence: Vec<Vec<HalfEdge>> = vec![Vec::new(); num_vertices];
        for (i, e) in edges.iter().enumerate() {
            if e.src >= num_vertices || e.tgt >= num_vertices {
                return Err(Error::MalformedDiagram(format!(
                    "edge {i} references vertex out of range"
                )));
            }
            incidence[e.src].push(HalfEdge::src(i));
            incidence[e.tgt].push(HalfEdge::tgt(i));
        }
        let mut vertices = Vec::with_capacity(num_vertices);
        for v in 0..num_vertices {
            if let Some(label) = legs.get(&v) {
                if incidence[v].len() != 1 {
                    return Err(Error::MalformedDiagram(format!(
                        "leg vertex {v} has {} half-edges, wants 1",
                        incidence[v].len()
                    )));
                }
                vertices.push(Vertex::Leg {
                    label: label.clone(),
                    half: incidence[v][0],
                });
            } else {
                if incidence[v].len() != 3 {
                    return Err(Error::MalformedDiagram(format!(
                        "vertex {v} has {} half-edges, wants 3",
                        incidence[v].len()
                    )));
                }
                let cyclic = match orders.get(&v) {
                    Some(t) => *t,
                    None => [incidence[v][0], incidence[v][1], incidence[v][2]],
                };
                vertices.push(Vertex::Trivalent { cyclic });
            }
        }
        let d = BeadedDiagram {
            vertices,
            edges,
            context,
        };
        d.validate()?;
        Ok(d)
    }

    /// The empty diagram (degree 0).
    pub fn empty(context: ContextHandle) -> Self {
        BeadedDiagram {
            vertices: Vec::new(),
            edges: Vec::new(),
            context,
        }
    }

    /// The theta graph: two vertices joined by three parallel edges, all
    /// beaded 1, cyclic orders in incidence order.
    pub fn theta(context: ContextHandle) -> Self {
        let one = Bead::one(context.clone());
        BeadedDiagram::from_parts(
            context,
            2,
            vec![
                (0, 1, one.clone()),
                (0, 1, one.clone()),
                (0, 1, one),
            ],
            BTreeMap::new(),
            BTreeMap::new(),
        )
        .expect("theta is well-formed")
    }

    /// Two loops joined by a middle edge, all beads 1.
    pub fn dumbbell(context: ContextHandle) -> Self {
        let one = Bead::one(context.clone());
        BeadedDiagram::from_parts(
            context,
            2,
            vec![
                (0, 0, one.clone()),
                (0, 1, one.clone()),
                (1, 1, one),
            ],
            BTreeMap::new(),
            BTreeMap::new(),
        )
        .expect("dumbbell is well-formed")
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn context(&self) -> &ContextHandle {
        &self.context
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn trivalent_count(&self) -> usize {
        self.vertices.iter().filter(|v| !v.is_leg()).count()
    }

    pub fn leg_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.is_leg()).count()
    }

    pub fn is_closed(&self) -> bool {
        self.leg_count() == 0
    }

    /// Loop degree `n = (number of trivalent vertices) / 2` of a closed
    /// diagram.
    pub fn loop_degree(&self) -> Result<usize, Error> {
        if !self.is_closed() {
            return Err(Error::MalformedDiagram(
                "loop degree is defined for diagrams without legs".into(),
            ));
        }
        let t = self.trivalent_count();
        if t % 2 != 0 {
            return Err(Error::MalformedDiagram(
                "odd number of trivalent vertices".into(),
            ));
        }
        Ok(t / 2)
    }

    /// Checks the structural invariants: every half-edge belongs to exactly
    /// one vertex and one edge, valences are correct, contexts agree.
    pub fn validate(&self) -> Result<(), Error> {
        let mut seen: BTreeMap<HalfEdge, usize> = BTreeMap::new();
        for (v, vert) in self.vertices.iter().enumerate() {
            for h in vert.half_edges() {
                if h.edge >= self.edges.len() {
                    return Err(Error::MalformedDiagram(format!(
                        "vertex {v} references missing edge {}",
                        h.edge
                    )));
                }
                if self.edges[h.edge].endpoint(h.end) != v {
                    return Err(Error::MalformedDiagram(format!(
                        "vertex {v} holds a half-edge of edge {} that points elsewhere",
                        h.edge
                    )));
                }
                if seen.insert(h, v).is_some() {
                    return Err(Error::MalformedDiagram(format!(
                        "half-edge of edge {} used twice",
                        h.edge
                    )));
                }
            }
            if let Vertex::Trivalent { cyclic } = vert {
                if cyclic[0] == cyclic[1] || cyclic[1] == cyclic[2] || cyclic[0] == cyclic[2] {
                    return Err(Error::MalformedDiagram(format!(
                        "vertex {v} repeats a half-edge in its cyclic order"
                    )));
                }
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            for end in [End::Src, End::Tgt] {
                let h = HalfEdge { edge: i, end };
                match seen.get(&h) {
                    Some(&v) if v == e.endpoint(end) => {}
                    _ => {
                        return Err(Error::MalformedDiagram(format!(
                            "dangling half-edge on edge {i}"
                        )))
                    }
                }
            }
            if !e.bead.same_context(&Bead::zero(self.context.clone())) {
                return Err(Error::ContextMismatch(
                    self.context.to_string(),
                    e.bead.context().to_string(),
                ));
            }
        }
        Ok(())
    }

    /// Connected components as sorted vertex sets.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertices.len();
        let mut uf = UnionFind::new(n);
        for e in &self.edges {
            uf.union(e.src, e.tgt);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Disjoint union; contexts must agree.
    pub fn disjoint_union(&self, other: &BeadedDiagram) -> Result<BeadedDiagram, Error> {
        if !(**self.context() == **other.context()) {
            return Err(Error::ContextMismatch(
                self.context.to_string(),
                other.context.to_string(),
            ));
        }
        let voff = self.vertices.len();
        let eoff = self.edges.len();
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        for e in &other.edges {
            edges.push(Edge {
                src: e.src + voff,
                tgt: e.tgt + voff,
                bead: e.bead.clone(),
            });
        }
        let bump = |h: HalfEdge| HalfEdge {
            edge: h.edge + eoff,
            end: h.end,
        };
        for v in &other.vertices {
            vertices.push(match v {
                Vertex::Trivalent { cyclic } => Vertex::Trivalent {
                    cyclic: [bump(cyclic[0]), bump(cyclic[1]), bump(cyclic[2])],
                },
                Vertex::Leg { label, half } => Vertex::Leg {
                    label: label.clone(),
                    half: bump(*half),
                },
            });
        }
        Ok(BeadedDiagram {
            vertices,
            edges,
            context: self.context.clone(),
        })
    }

    /// Reverses edge `e` and conjugates its bead (the conjugation move).
    pub fn flip_edge(&self, e: EdgeId) -> BeadedDiagram {
        let mut out = self.clone();
        let edge = &mut out.edges[e];
        std::mem::swap(&mut edge.src, &mut edge.tgt);
        edge.bead = edge.bead.conjugate();
        let rename = |h: &mut HalfEdge| {
            if h.edge == e {
                h.end = match h.end {
                    End::Src => End::Tgt,
                    End::Tgt => End::Src,
                };
            }
        };
        for v in &mut out.vertices {
            match v {
                Vertex::Trivalent { cyclic } => cyclic.iter_mut().for_each(rename),
                Vertex::Leg { half, .. } => rename(half),
            }
        }
        out
    }

    /// Swaps the last two entries of the cyclic order at `v`; the class
    /// changes by the antisymmetry sign -1.
    pub fn flip_vertex(&self, v: VertexId) -> BeadedDiagram {
        let mut out = self.clone();
        if let Vertex::Trivalent { cyclic } = &mut out.vertices[v] {
            cyclic.swap(1, 2);
        }
        out
    }

    /// Rotates the stored cyclic order at `v`; a pure presentation change.
    pub fn rotate_vertex(&self, v: VertexId) -> BeadedDiagram {
        let mut out = self.clone();
        if let Vertex::Trivalent { cyclic } = &mut out.vertices[v] {
            cyclic.rotate_left(1);
        }
        out
    }

    /// Generalized holonomy move at `v`: incoming beads gain a factor `t`,
    /// outgoing beads a factor `t^{-1}` (`direction = -1` inverts both).
    /// Loops at `v` are both incoming and outgoing and are untouched.
    pub fn holonomy_move(&self, v: VertexId, direction: i64) -> BeadedDiagram {
        let mut out = self.clone();
        for (i, e) in self.edges.iter().enumerate() {
            if e.is_loop() {
                continue;
            }
            let mut shift = 0i64;
            if e.tgt == v {
                shift += direction;
            }
            if e.src == v {
                shift -= direction;
            }
            if shift != 0 {
                out.edges[i].bead = out.edges[i].bead.mul_poly(&LaurentPoly::monomial(
                    shift,
                    Q::one(),
                ));
            }
        }
        out
    }

    /// Moves one half-edge to a new vertex by rewriting its edge endpoint.
    /// Cyclic orders referencing the half-edge must be fixed up by the
    /// caller before the diagram is used again.
    pub(crate) fn set_half_edge_home(&mut self, h: HalfEdge, v: VertexId) {
        match h.end {
            End::Src => self.edges[h.edge].src = v,
            End::Tgt => self.edges[h.edge].tgt = v,
        }
    }

    /// Overwrites the cyclic order at a trivalent vertex.
    pub(crate) fn set_cyclic_order(&mut self, v: VertexId, cyclic: [HalfEdge; 3]) {
        if let Vertex::Trivalent { cyclic: c } = &mut self.vertices[v] {
            *c = cyclic;
        }
    }

    /// Replaces all beads, in edge order. Lengths must match.
    pub fn replace_beads(&mut self, beads: Vec<Bead>) {
        assert_eq!(beads.len(), self.edges.len());
        for (e, b) in self.edges.iter_mut().zip(beads) {
            e.bead = b;
        }
    }

    /// Rebinds the diagram to a different delta context. Beads must be
    /// replaced consistently afterwards.
    pub fn replace_context(&mut self, context: ContextHandle) {
        self.context = context;
    }

    /// Applies a vertex relabeling and an edge relabeling; a pure
    /// presentation change used in stability tests.
    pub fn relabel(&self, vperm: &[usize], eperm: &[usize]) -> BeadedDiagram {
        // vperm[old] = new, eperm[old] = new.
        let mut vertices = vec![
            Vertex::Leg {
                label: LegLabel::Hair,
                half: HalfEdge::src(0)
            };
            self.vertices.len()
        ];
        let mut edges = vec![
            Edge {
                src: 0,
                tgt: 0,
                bead: Bead::zero(self.context.clone())
            };
            self.edges.len()
        ];
        let rename = |h: HalfEdge| HalfEdge {
            edge: eperm[h.edge],
            end: h.end,
        };
        for (old, e) in self.edges.iter().enumerate() {
            edges[eperm[old]] = Edge {
                src: vperm[e.src],
                tgt: vperm[e.tgt],
                bead: e.bead.clone(),
            };
        }
        for (old, v) in self.vertices.iter().enumerate() {
            vertices[vperm[old]] = match v {
                Vertex::Trivalent { cyclic } => Vertex::Trivalent {
                    cyclic: [rename(cyclic[0]), rename(cyclic[1]), rename(cyclic[2])],
                },
                Vertex::Leg { label, half } => Vertex::Leg {
                    label: label.clone(),
                    half: rename(*half),
                },
            };
        }
        BeadedDiagram {
            vertices,
            edges,
            context: self.context.clone(),
        }
    }

    /// Canonical key under relabeling isomorphisms preserving vertex
    /// orientations, edge orientations, beads and leg decorations.
    pub fn canonical_key(&self) -> Result<CanonicalKey, Error> {
        self.validate()?;
        let comps = self.components();
        let mut keys: Vec<Vec<u8>> = comps
            .iter()
            .map(|comp| structural_component_key(self, comp))
            .collect();
        keys.sort();
        let mut out = Vec::new();
        for k in keys {
            out.extend_from_slice(&k);
            out.push(b'|');
        }
        Ok(out)
    }

    /// Order of the group of self-isomorphisms: pairs of vertex and edge
    /// bijections with optional edge reversals, preserving incidence, leg
    /// decorations, and beads up to the conjugation move on reversed edges.
    /// Vertex cyclic orders are not constrained (they follow up to sign).
    pub fn automorphism_count(&self) -> u64 {
        automorphism_count_impl(self, false)
    }

    /// Variant fixing every vertex pointwise; only multiple edges with
    /// identical ends permute and loops reverse.
    pub fn colored_automorphism_count(&self) -> u64 {
        automorphism_count_impl(self, true)
    }
}

// ---------------------------------------------------------------------------
// Union-find.

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    pub(crate) fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra] = rb;
            true
        }
    }
}

// ---------------------------------------------------------------------------
// Vertex invariants and ordering candidates.

/// Which group of relabelings a signature must be invariant under.
///
/// `Structural` keys preserve edge orientations and beads exactly, so ends
/// and exact bead bytes may enter the invariant. `UpToFlips` must survive
/// edge reversals (and, for the class canonizer, holonomy moves), so only
/// orientation-blind data is allowed there.
#[derive(Clone, Copy, PartialEq, Eq)]
enum SigMode {
    Structural,
    UpToFlips,
}

/// Coarse isomorphism-invariant signature of a vertex, used to seed and
/// refine the ordering search. Bead data enters through the supplied
/// per-edge tag so the canonizers can share the machinery; the tag itself
/// must be invariant under the moves the mode allows. Individualization
/// tags, when present, dominate the signature.
fn vertex_signature(
    d: &BeadedDiagram,
    v: VertexId,
    mode: SigMode,
    edge_tag: &dyn Fn(EdgeId) -> Vec<u8>,
    tags: &BTreeMap<VertexId, usize>,
) -> Vec<u8> {
    let mut sig = Vec::new();
    match tags.get(&v) {
        Some(t) => sig.extend_from_slice(format!("!{t:08};").as_bytes()),
        None => sig.extend_from_slice(b"~;"),
    }
    match &d.vertices[v] {
        Vertex::Leg { label, .. } => {
            sig.extend_from_slice(b"L");
            sig.extend_from_slice(label.to_string().as_bytes());
        }
        Vertex::Trivalent { .. } => sig.extend_from_slice(b"T"),
    }
    let mut incident: Vec<Vec<u8>> = Vec::new();
    for (i, e) in d.edges.iter().enumerate() {
        for end in [End::Src, End::Tgt] {
            if e.endpoint(end) == v {
                let mut t = Vec::new();
                t.push(if e.is_loop() { b'o' } else { b'-' });
                if mode == SigMode::Structural {
                    t.push(if end == End::Src { b's' } else { b't' });
                }
                t.extend_from_slice(&edge_tag(i));
                incident.push(t);
            }
        }
    }
    incident.sort();
    for t in incident {
        sig.push(b';');
        sig.extend_from_slice(&t);
    }
    sig
}

/// Iteratively refines vertex classes by neighbor multisets until stable;
/// returns cells sorted by signature, each cell sorted by vertex id.
fn refine_cells(
    d: &BeadedDiagram,
    comp: &[VertexId],
    mode: SigMode,
    edge_tag: &dyn Fn(EdgeId) -> Vec<u8>,
    tags: &BTreeMap<VertexId, usize>,
) -> Vec<Vec<VertexId>> {
    let mut class: BTreeMap<VertexId, Vec<u8>> = comp
        .iter()
        .map(|&v| (v, vertex_signature(d, v, mode, edge_tag, tags)))
        .collect();
    loop {
        let mut next: BTreeMap<VertexId, Vec<u8>> = BTreeMap::new();
        for &v in comp {
            let mut sig = class[&v].clone();
            let mut nbrs: Vec<Vec<u8>> = Vec::new();
            for (i, e) in d.edges.iter().enumerate() {
                for (end, other) in [(End::Src, e.tgt), (End::Tgt, e.src)] {
                    if e.endpoint(end) == v {
                        let mut t = class[&other].clone();
                        if mode == SigMode::Structural {
                            t.push(if end == End::Src { b'>' } else { b'<' });
                        }
                        t.extend_from_slice(&edge_tag(i));
                        nbrs.push(t);
                    }
                }
            }
            nbrs.sort();
            for t in nbrs {
                sig.push(b'#');
                sig.extend_from_slice(&t);
            }
            next.insert(v, sig);
        }
        let old_count = distinct_count(&class);
        let new_count = distinct_count(&next);
        class = next;
        if new_count == old_count {
            break;
        }
    }
    let mut cells: BTreeMap<Vec<u8>, Vec<VertexId>> = BTreeMap::new();
    for (&v, sig) in class.iter() {
        cells.entry(sig.clone()).or_default().push(v);
    }
    cells.into_values().collect()
}

fn distinct_count(class: &BTreeMap<VertexId, Vec<u8>>) -> usize {
    let mut sigs: Vec<&Vec<u8>> = class.values().collect();
    sigs.sort();
    sigs.dedup();
    sigs.len()
}

/// Candidate vertex orderings of a component by individualization and
/// refinement: refine, and while some cell is non-singleton, branch over
/// each of its members with a fresh tag and refine again. Leaves are the
/// discrete orderings; the set is closed under isomorphisms, so minimum
/// searches over it are canonical.
fn component_orderings(
    d: &BeadedDiagram,
    comp: &[VertexId],
    mode: SigMode,
    edge_tag: &dyn Fn(EdgeId) -> Vec<u8>,
) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    let mut tags: BTreeMap<VertexId, usize> = BTreeMap::new();
    individualize(d, comp, mode, edge_tag, &mut tags, &mut out);
    out
}

fn individualize(
    d: &BeadedDiagram,
    comp: &[VertexId],
    mode: SigMode,
    edge_tag: &dyn Fn(EdgeId) -> Vec<u8>,
    tags: &mut BTreeMap<VertexId, usize>,
    out: &mut Vec<Vec<VertexId>>,
) {
    let cells = refine_cells(d, comp, mode, edge_tag, tags);
    match cells.iter().find(|c| c.len() > 1) {
        None => out.push(cells.into_iter().flatten().collect()),
        Some(cell) => {
            let members = cell.clone();
            let tag = tags.len() + 1;
            for v in members {
                tags.insert(v, tag);
                individualize(d, comp, mode, edge_tag, tags, out);
                tags.remove(&v);
            }
        }
    }
}

pub(crate) fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x.clone());
            out.push(tail);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Structural canonical key (preserves orientations and beads exactly).

fn structural_component_key(d: &BeadedDiagram, comp: &[VertexId]) -> Vec<u8> {
    let bead_tag = |e: EdgeId| format!("{}", d.edges[e].bead.numerator()).into_bytes();
    let comp_edges: Vec<EdgeId> = (0..d.edges.len())
        .filter(|&i| comp.contains(&d.edges[i].src))
        .collect();
    let mut best: Option<Vec<u8>> = None;
    for ordering in component_orderings(d, comp, SigMode::Structural, &bead_tag) {
        let mut vpos: BTreeMap<VertexId, usize> = BTreeMap::new();
        for (i, &v) in ordering.iter().enumerate() {
            vpos.insert(v, i);
        }
        // Sort edges by (src, tgt, bead); groups of identical edges are
        // permuted exhaustively since cyclic orders tell them apart.
        let mut keyed: Vec<(usize, usize, Vec<u8>, EdgeId)> = comp_edges
            .iter()
            .map(|&i| {
                (
                    vpos[&d.edges[i].src],
                    vpos[&d.edges[i].tgt],
                    bead_tag(i),
                    i,
                )
            })
            .collect();
        keyed.sort();
        let mut groups: Vec<Vec<EdgeId>> = Vec::new();
        let mut group_keys: Vec<(usize, usize, Vec<u8>)> = Vec::new();
        for (s, t, b, i) in keyed {
            if group_keys.last() == Some(&(s, t, b.clone())) {
                groups.last_mut().unwrap().push(i);
            } else {
                group_keys.push((s, t, b));
                groups.push(vec![i]);
            }
        }
        for arrangement in group_arrangements(&groups) {
            let mut epos: BTreeMap<EdgeId, usize> = BTreeMap::new();
            for (i, &e) in arrangement.iter().enumerate() {
                epos.insert(e, i);
            }
            let mut bytes = Vec::new();
            bytes.extend_from_slice(format!("V{};", ordering.len()).as_bytes());
            for &e in &arrangement {
                let edge = &d.edges[e];
                bytes.extend_from_slice(
                    format!(
                        "E{},{},{};",
                        vpos[&edge.src],
                        vpos[&edge.tgt],
                        String::from_utf8_lossy(&bead_tag(e))
                    )
                    .as_bytes(),
                );
            }
            for &v in &ordering {
                match &d.vertices[v] {
                    Vertex::Leg { label, .. } => {
                        bytes.extend_from_slice(format!("L{label};").as_bytes());
                    }
                    Vertex::Trivalent { cyclic } => {
                        let toks: Vec<u64> = cyclic
                            .iter()
                            .map(|h| (epos[&h.edge] as u64) * 2 + (h.end == End::Tgt) as u64)
                            .collect();
                        // Least rotation of the cyclic word.
                        let rots = [
                            [toks[0], toks[1], toks[2]],
                            [toks[1], toks[2], toks[0]],
                            [toks[2], toks[0], toks[1]],
                        ];
                        let least = rots.iter().min().unwrap();
                        bytes.extend_from_slice(
                            format!("O{},{},{};", least[0], least[1], least[2]).as_bytes(),
                        );
                    }
                }
            }
            if best.as_ref().map_or(true, |b| bytes < *b) {
                best = Some(bytes);
            }
        }
    }
    best.unwrap_or_default()
}

/// Cartesian product of within-group permutations, flattened.
fn group_arrangements(groups: &[Vec<EdgeId>]) -> Vec<Vec<EdgeId>> {
    let mut result: Vec<Vec<EdgeId>> = vec![Vec::new()];
    for g in groups {
        let perms = permutations(g);
        let mut next = Vec::with_capacity(result.len() * perms.len());
        for base in &result {
            for p in &perms {
                let mut ext = base.clone();
                ext.extend_from_slice(p);
                next.push(ext);
            }
        }
        result = next;
    }
    result
}

// ---------------------------------------------------------------------------
// Class canonical form (modulo conjugation, holonomy, antisymmetry).

/// Result of normalizing a monomial-bead diagram modulo the conjugation,
/// generalized holonomy and antisymmetry relations.
#[derive(Clone, Debug)]
pub enum CanonicalForm {
    /// The class vanishes: some self-isomorphism is orientation-odd.
    Zero,
    NonZero {
        key: CanonicalKey,
        /// Sign relating the input presentation to the representative.
        sign: i8,
        rep: BeadedDiagram,
    },
}

/// Reads the exponent of a basis-monomial bead `t^k / delta`.
fn monomial_exponent(bead: &Bead, edge: EdgeId) -> Result<i64, Error> {
    match bead.numerator().as_monomial() {
        Some((k, c)) if c.is_one() => Ok(k),
        _ => Err(Error::NonMonomialBead { edge }),
    }
}

/// Canonicalizes a diagram with basis-monomial beads modulo conjugation,
/// generalized holonomy and antisymmetry relations.
pub fn class_canonical(d: &BeadedDiagram) -> Result<CanonicalForm, Error> {
    d.validate()?;
    let shift = d.context().symmetry_shift();
    let exps: Vec<i64> = d
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| monomial_exponent(&e.bead, i))
        .collect::<Result<_, _>>()?;

    let comps = d.components();
    let mut canon_parts: Vec<(Vec<u8>, i8, CompPresentation)> = Vec::new();
    for comp in &comps {
        match canon_component(d, comp, &exps, shift) {
            Some(part) => canon_parts.push(part),
            None => return Ok(CanonicalForm::Zero),
        }
    }
    canon_parts.sort_by(|a, b| a.0.cmp(&b.0));
    let mut key = Vec::new();
    let mut sign = 1i8;
    for (bytes, s, _) in &canon_parts {
        key.extend_from_slice(bytes);
        key.push(b'|');
        sign *= s;
    }
    // Rebuild the canonical representative by concatenating components.
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    for (_, _, pres) in &canon_parts {
        let voff = vertices.len();
        let eoff = edges.len();
        for e in &pres.edges {
            edges.push(Edge {
                src: e.0 + voff,
                tgt: e.1 + voff,
                bead: Bead::basis_monomial(e.2, d.context().clone()),
            });
        }
        for v in &pres.vertices {
            vertices.push(match v {
                CompVertex::Leg(label) => Vertex::Leg {
                    label: label.clone(),
                    half: {
                        // Re-derive the leg's half-edge from the edge list.
                        let mut found = None;
                        for (i, e) in pres.edges.iter().enumerate() {
                            if e.0 + voff == vertices.len() && found.is_none() {
                                found = Some(HalfEdge::src(i + eoff));
                            }
                            if e.1 + voff == vertices.len() && found.is_none() {
                                found = Some(HalfEdge::tgt(i + eoff));
                            }
                        }
                        found.expect("leg incidence")
                    },
                },
                CompVertex::Trivalent(t) => Vertex::Trivalent {
                    cyclic: [
                        HalfEdge {
                            edge: t[0].0 + eoff,
                            end: t[0].1,
                        },
                        HalfEdge {
                            edge: t[1].0 + eoff,
                            end: t[1].1,
                        },
                        HalfEdge {
                            edge: t[2].0 + eoff,
                            end: t[2].1,
                        },
                    ],
                },
            });
        }
    }
    let rep = BeadedDiagram {
        vertices,
        edges,
        context: d.context().clone(),
    };
    debug_assert!(rep.validate().is_ok());
    Ok(CanonicalForm::NonZero { key, sign, rep })
}

#[derive(Clone, Debug)]
enum CompVertex {
    Leg(LegLabel),
    Trivalent([(usize, End); 3]),
}

#[derive(Clone, Debug)]
struct CompPresentation {
    // Local-index edges (src, tgt, exponent) and vertices.
    edges: Vec<(usize, usize, i64)>,
    vertices: Vec<CompVertex>,
}

/// Canonicalizes one component; `None` means the class is zero.
fn canon_component(
    d: &BeadedDiagram,
    comp: &[VertexId],
    exps: &[i64],
    shift: i64,
) -> Option<(Vec<u8>, i8, CompPresentation)> {
    let comp_edges: Vec<EdgeId> = (0..d.edges.len())
        .filter(|&i| comp.contains(&d.edges[i].src))
        .collect();
    let loops: Vec<EdgeId> = comp_edges
        .iter()
        .copied()
        .filter(|&i| d.edges[i].is_loop())
        .collect();
    // The refinement tag deliberately ignores exponents (they move under
    // holonomy) and orientations (they flip under conjugation).
    let no_tag = |_: EdgeId| Vec::new();

    let mut best: Option<(Vec<u8>, i8, CompPresentation)> = None;
    let mut zero = false;

    for ordering in component_orderings(d, comp, SigMode::UpToFlips, &no_tag) {
        let mut vpos: BTreeMap<VertexId, usize> = BTreeMap::new();
        for (i, &v) in ordering.iter().enumerate() {
            vpos.insert(v, i);
        }
        // Loop orientations are genuine choices (conjugation on a loop
        // swaps its half-edges inside the vertex cyclic order, which is
        // where the antisymmetry sign appears).
        for flips in 0..(1u32 << loops.len()) {
            let flipped = |e: EdgeId| -> bool {
                loops
                    .iter()
                    .position(|&l| l == e)
                    .map_or(false, |i| flips >> i & 1 == 1)
            };
            // Present every edge: non-loops point from the lower to the
            // higher vertex position, conjugating the bead when reversed.
            struct PresEdge {
                id: EdgeId,
                src: usize,
                tgt: usize,
                exp: i64,
                reversed: bool,
            }
            let mut pres: Vec<PresEdge> = comp_edges
                .iter()
                .map(|&i| {
                    let e = &d.edges[i];
                    let (a, b) = (vpos[&e.src], vpos[&e.tgt]);
                    let reversed = if e.is_loop() { flipped(i) } else { a > b };
                    let (src, tgt) = if reversed { (b, a) } else { (a, b) };
                    let exp = if reversed { shift - exps[i] } else { exps[i] };
                    PresEdge {
                        id: i,
                        src,
                        tgt,
                        exp,
                        reversed,
                    }
                })
                .collect();
            // Sort order: holonomy shifts parallel edges in lockstep, so
            // comparing raw exponents inside a parallel group is stable
            // across equivalent presentations.
            pres.sort_by(|x, y| (x.src, x.tgt, x.exp, x.id).cmp(&(y.src, y.tgt, y.exp, y.id)));
            let epos: BTreeMap<EdgeId, usize> =
                pres.iter().enumerate().map(|(i, p)| (p.id, i)).collect();

            // Spanning forest by greedy scan; forest exponents become 0 and
            // each non-forest edge keeps its oriented cycle sum.
            let k = ordering.len();
            let mut uf = UnionFind::new(k);
            let mut in_forest = vec![false; pres.len()];
            let mut adj: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); k]; // (nbr, edge idx, exp signed from here)
            for (i, p) in pres.iter().enumerate() {
                if p.src != p.tgt && uf.union(p.src, p.tgt) {
                    in_forest[i] = true;
                    adj[p.src].push((p.tgt, i, p.exp));
                    adj[p.tgt].push((p.src, i, -p.exp));
                }
            }
            let mut norm_exp: Vec<i64> = Vec::with_capacity(pres.len());
            for (i, p) in pres.iter().enumerate() {
                if in_forest[i] {
                    norm_exp.push(0);
                } else if p.src == p.tgt {
                    norm_exp.push(p.exp);
                } else {
                    // Walk the forest path tgt -> src, accumulating signed
                    // exponents along the walk direction.
                    let path_sum = forest_path_sum(&adj, p.tgt, p.src);
                    norm_exp.push(p.exp + path_sum);
                }
            }

            // Serialize with sorted cyclic triples; antisymmetry signs are
            // exactly the sorting parities.
            let mut sign = 1i8;
            let mut bytes = Vec::new();
            bytes.extend_from_slice(format!("V{k};").as_bytes());
            for (i, p) in pres.iter().enumerate() {
                bytes.extend_from_slice(format!("E{},{},{};", p.src, p.tgt, norm_exp[i]).as_bytes());
            }
            let mut comp_vertices: Vec<CompVertex> = Vec::new();
            for &v in &ordering {
                match &d.vertices[v] {
                    Vertex::Leg { label, .. } => {
                        bytes.extend_from_slice(format!("L{label};").as_bytes());
                        comp_vertices.push(CompVertex::Leg(label.clone()));
                    }
                    Vertex::Trivalent { cyclic } => {
                        let mut toks: Vec<(usize, End)> = cyclic
                            .iter()
                            .map(|h| {
                                let end = if pres[epos[&h.edge]].reversed {
                                    match h.end {
                                        End::Src => End::Tgt,
                                        End::Tgt => End::Src,
                                    }
                                } else {
                                    h.end
                                };
                                (epos[&h.edge], end)
                            })
                            .collect();
                        sign *= sort3_parity(&mut toks);
                        bytes.extend_from_slice(
                            format!(
                                "O{}{},{}{},{}{};",
                                toks[0].0,
                                end_char(toks[0].1),
                                toks[1].0,
                                end_char(toks[1].1),
                                toks[2].0,
                                end_char(toks[2].1)
                            )
                            .as_bytes(),
                        );
                        comp_vertices.push(CompVertex::Trivalent([toks[0], toks[1], toks[2]]));
                    }
                }
            }
            let comp_pres = CompPresentation {
                edges: pres
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (p.src, p.tgt, norm_exp[i]))
                    .collect(),
                vertices: comp_vertices,
            };
            match &best {
                Some((bbytes, bsign, _)) => {
                    if bytes < *bbytes {
                        best = Some((bytes, sign, comp_pres));
                    } else if bytes == *bbytes && sign != *bsign {
                        zero = true;
                    }
                }
                None => best = Some((bytes, sign, comp_pres)),
            }
        }
    }
    if zero {
        // An orientation-odd self-identification was found at the minimum:
        // the class satisfies x = -x.
        return None;
    }
    best
}

fn end_char(e: End) -> char {
    match e {
        End::Src => 's',
        End::Tgt => 't',
    }
}

/// Sorts a 3-element slice and returns the parity of the sort (+1 even).
fn sort3_parity<T: Ord + Copy>(items: &mut Vec<(usize, T)>) -> i8 {
    let mut sign = 1i8;
    for i in 0..items.len() {
        for j in (i + 1)..items.len() {
            if items[j] < items[i] {
                items.swap(i, j);
                sign = -sign;
            }
        }
    }
    sign
}

/// Sum of signed exponents along the unique forest path `from -> to`.
fn forest_path_sum(adj: &[Vec<(usize, usize, i64)>], from: usize, to: usize) -> i64 {
    if from == to {
        return 0;
    }
    let mut stack = vec![(from, usize::MAX, 0i64)];
    let mut visited = vec![false; adj.len()];
    visited[from] = true;
    while let Some((v, _, acc)) = stack.pop() {
        for &(w, e, exp) in &adj[v] {
            if !visited[w] {
                visited[w] = true;
                let nacc = acc + exp;
                if w == to {
                    return nacc;
                }
                stack.push((w, e, nacc));
            }
        }
    }
    unreachable!("forest path must exist inside one component")
}

// ---------------------------------------------------------------------------
// Automorphism counting.

fn automorphism_count_impl(d: &BeadedDiagram, fix_vertices: bool) -> u64 {
    let n = d.vertices.len();
    if n == 0 {
        return 1;
    }
    // Reversals are allowed, so the pruning tag must not see orientations:
    // take the lexicographic minimum of the bead and its conjugate.
    let bead_tag = |e: EdgeId| {
        let b = format!("{}", d.edges[e].bead.numerator()).into_bytes();
        let c = format!("{}", d.edges[e].bead.conjugate().numerator()).into_bytes();
        b.min(c)
    };
    let sigs: Vec<Vec<u8>> = (0..n)
        .map(|v| vertex_signature(d, v, SigMode::UpToFlips, &bead_tag, &BTreeMap::new()))
        .collect();
    let mut total = 0u64;
    let mut image: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    fn rec(
        d: &BeadedDiagram,
        sigs: &[Vec<u8>],
        fix: bool,
        v: usize,
        image: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        total: &mut u64,
    ) {
        let n = d.vertices.len();
        if v == n {
            *total += edge_matching_count(d, image);
            return;
        }
        let candidates: Vec<usize> = if fix {
            vec![v]
        } else {
            (0..n).filter(|&w| !used[w] && sigs[w] == sigs[v]).collect()
        };
        for w in candidates {
            if used[w] {
                continue;
            }
            // Degree-compat pruning is already in the signature.
            image[v] = Some(w);
            used[w] = true;
            rec(d, sigs, fix, v + 1, image, used, total);
            image[v] = None;
            used[w] = false;
        }
    }
    rec(d, &sigs, fix_vertices, 0, &mut image, &mut used, &mut total);
    total
}

/// Number of edge bijections with reversal flags compatible with a fixed
/// vertex bijection. Reversal requires the image bead to be the conjugate;
/// loops may match both ways and then count twice.
fn edge_matching_count(d: &BeadedDiagram, image: &[Option<usize>]) -> u64 {
    let m = d.edges.len();
    let mut weight = vec![vec![0u64; m]; m];
    for e in 0..m {
        let es = image[d.edges[e].src].unwrap();
        let et = image[d.edges[e].tgt].unwrap();
        for f in 0..m {
            let ef = &d.edges[f];
            let mut w = 0;
            if ef.src == es && ef.tgt == et && ef.bead == d.edges[e].bead {
                w += 1;
            }
            if ef.src == et && ef.tgt == es && ef.bead == d.edges[e].bead.conjugate() {
                w += 1;
            }
            weight[e][f] = w;
        }
    }
    // Permanent by backtracking; diagrams stay small.
    fn perm(weight: &[Vec<u64>], row: usize, used: &mut Vec<bool>) -> u64 {
        let m = weight.len();
        if row == m {
            return 1;
        }
        let mut acc = 0;
        for f in 0..m {
            if !used[f] && weight[row][f] > 0 {
                used[f] = true;
                acc += weight[row][f] * perm(weight, row + 1, used);
                used[f] = false;
            }
        }
        acc
    }
    let mut used = vec![false; m];
    perm(&weight, 0, &mut used)
}

// ---------------------------------------------------------------------------
// Canonical vertex orientation of a numbered, edge-oriented graph.

/// An orientation assignment: one cyclic order (as an ordered triple of
/// half-edges) per vertex of a numbered trivalent graph.
pub type OrientationAssignment = Vec<[HalfEdge; 3]>;

/// Parity of the permutation taking the half-edge sequence
/// `(first half of edge 1, second half of edge 1, ...)` to the sequence
/// grouped by vertices in the given cyclic orders. `+1` means even.
pub fn orientation_parity(
    edges: &[(usize, usize)],
    orders: &OrientationAssignment,
) -> Result<i8, Error> {
    let m = edges.len();
    let pos = |h: &HalfEdge| -> usize { h.edge * 2 + (h.end == End::Tgt) as usize };
    let mut seq: Vec<usize> = Vec::with_capacity(2 * m);
    for triple in orders {
        for h in triple {
            seq.push(pos(h));
        }
    }
    if seq.len() != 2 * m {
        return Err(Error::MalformedDiagram(
            "orientation assignment does not cover all half-edges".into(),
        ));
    }
    let mut seen = vec![false; 2 * m];
    for &p in &seq {
        if p >= 2 * m || seen[p] {
            return Err(Error::MalformedDiagram(
                "orientation assignment repeats a half-edge".into(),
            ));
        }
        seen[p] = true;
    }
    Ok(permutation_parity(&seq))
}

fn permutation_parity(seq: &[usize]) -> i8 {
    let mut seen = vec![false; seq.len()];
    let mut sign = 1i8;
    for start in 0..seq.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = seq[cur];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Builds the canonical vertex orientation of a numbered graph: each vertex
/// receives its incident half-edges in edge order, and the first vertex's
/// last two entries are swapped if needed to make the defining permutation
/// even. Returns the assignment together with its (always even) parity.
pub fn canonical_vertex_orientation(
    edges: &[(usize, usize)],
) -> Result<(OrientationAssignment, i8), Error> {
    let m = edges.len();
    if m % 3 != 0 {
        return Err(Error::MalformedDiagram("edge count not divisible by 3".into()));
    }
    let n = 2 * m / 3;
    let mut orders: Vec<Vec<HalfEdge>> = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a >= n || b >= n {
            return Err(Error::MalformedDiagram("vertex out of range".into()));
        }
        orders[a].push(HalfEdge::src(i));
        orders[b].push(HalfEdge::tgt(i));
    }
    let mut assignment: OrientationAssignment = Vec::with_capacity(n);
    for (v, o) in orders.into_iter().enumerate() {
        if o.len() != 3 {
            return Err(Error::MalformedDiagram(format!(
                "vertex {v} has valence {}, wants 3",
                o.len()
            )));
        }
        assignment.push([o[0], o[1], o[2]]);
    }
    if orientation_parity(edges, &assignment)? < 0 {
        assignment[0].swap(1, 2);
    }
    let parity = orientation_parity(edges, &assignment)?;
    debug_assert_eq!(parity, 1);
    Ok((assignment, parity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::DeltaContext;

    fn triv() -> ContextHandle {
        DeltaContext::trivial()
    }

    fn mono(k: i64) -> Bead {
        Bead::basis_monomial(k, triv())
    }

    fn theta_with_exps(e: [i64; 3]) -> BeadedDiagram {
        BeadedDiagram::from_parts(
            triv(),
            2,
            vec![(0, 1, mono(e[0])), (0, 1, mono(e[1])), (0, 1, mono(e[2]))],
            BTreeMap::new(),
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn canonical_key_examples() {
        // Two presentations of the theta graph with different numberings.
        let a = BeadedDiagram::theta(triv());
        let b = a.relabel(&[1, 0], &[2, 0, 1]).flip_edge(0).flip_edge(1).flip_edge(2);
        assert_eq!(a.canonical_key().unwrap(), b.canonical_key().unwrap());

        // Distinct beads give distinct keys.
        let c = theta_with_exps([1, 0, 0]);
        assert_ne!(a.canonical_key().unwrap(), c.canonical_key().unwrap());

        // Theta and dumbbell are non-isomorphic.
        let d = BeadedDiagram::dumbbell(triv());
        assert_ne!(a.canonical_key().unwrap(), d.canonical_key().unwrap());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(BeadedDiagram::theta(triv()).automorphism_count(), 12);
        assert_eq!(BeadedDiagram::dumbbell(triv()).automorphism_count(), 8);

        // Single tripod with three distinctly labeled legs.
        let mut legs = BTreeMap::new();
        for (v, curve) in [(1usize, 1usize), (2, 2), (3, 3)] {
            legs.insert(
                v,
                LegLabel::Curve {
                    handlebody: 1,
                    curve,
                    shift: 0,
                },
            );
        }
        let tripod = BeadedDiagram::from_parts(
            triv(),
            4,
            vec![(0, 1, mono(0)), (0, 2, mono(0)), (0, 3, mono(0))],
            BTreeMap::new(),
            legs,
        )
        .unwrap();
        assert_eq!(tripod.automorphism_count(), 1);
    }

    #[test]
    fn colored_automorphisms_fix_vertices() {
        // Theta with fixed vertices: 3! edge permutations times reversals
        // that preserve the encoding (none, since (0,1) != (1,0)).
        assert_eq!(BeadedDiagram::theta(triv()).colored_automorphism_count(), 6);
        // Dumbbell with fixed vertices: 2 loop reversals each.
        assert_eq!(
            BeadedDiagram::dumbbell(triv()).colored_automorphism_count(),
            4
        );
    }

    #[test]
    fn class_canonical_zero_detection() {
        // Unbeaded dumbbell contains loops beaded 1: the class is zero.
        match class_canonical(&BeadedDiagram::dumbbell(triv())).unwrap() {
            CanonicalForm::Zero => {}
            other => panic!("expected zero class, got {other:?}"),
        }
        // Theta is not zero.
        match class_canonical(&BeadedDiagram::theta(triv())).unwrap() {
            CanonicalForm::NonZero { .. } => {}
            other => panic!("expected nonzero, got {other:?}"),
        }
    }

    #[test]
    fn class_canonical_sign_flip() {
        let a = BeadedDiagram::theta(triv());
        let b = a.flip_vertex(0);
        let (ka, sa) = match class_canonical(&a).unwrap() {
            CanonicalForm::NonZero { key, sign, .. } => (key, sign),
            _ => panic!("zero"),
        };
        let (kb, sb) = match class_canonical(&b).unwrap() {
            CanonicalForm::NonZero { key, sign, .. } => (key, sign),
            _ => panic!("zero"),
        };
        assert_eq!(ka, kb);
        assert_eq!(sa, -sb);
    }

    #[test]
    fn class_canonical_holonomy_invariance() {
        let a = theta_with_exps([1, 0, 0]);
        let b = a.holonomy_move(0, 1);
        // Multilinear scalar structure is trivial here: the moved diagram
        // has monomial beads again.
        let na = class_canonical(&a).unwrap();
        let nb = class_canonical(&b).unwrap();
        match (na, nb) {
            (
                CanonicalForm::NonZero { key: ka, sign: sa, .. },
                CanonicalForm::NonZero { key: kb, sign: sb, .. },
            ) => {
                assert_eq!(ka, kb);
                assert_eq!(sa, sb);
            }
            _ => panic!("unexpected zero"),
        }
    }

    #[test]
    fn canonical_orientation_parity() {
        // Theta graph: all edges from vertex 0 to vertex 1.
        let edges = vec![(0usize, 1usize), (0, 1), (0, 1)];
        let (orders, parity) = canonical_vertex_orientation(&edges).unwrap();
        assert_eq!(parity, 1);
        assert_eq!(orientation_parity(&edges, &orders).unwrap(), 1);

        // The incidence-order assignment (e1, e2, e3) at both vertices has
        // defining permutation [0,2,4,1,3,5], a 4-cycle, hence odd.
        let incidence: OrientationAssignment = vec![
            [HalfEdge::src(0), HalfEdge::src(1), HalfEdge::src(2)],
            [HalfEdge::tgt(0), HalfEdge::tgt(1), HalfEdge::tgt(2)],
        ];
        assert_eq!(orientation_parity(&edges, &incidence).unwrap(), -1);

        // Swapping two half-edges at one vertex flips the sign.
        let mut swapped = incidence.clone();
        swapped[0].swap(1, 2);
        assert_eq!(orientation_parity(&edges, &swapped).unwrap(), 1);
        assert_eq!(orders, swapped);

        // Larger sanity check: a 6-cycle with chords (prism graph).
        let prism = vec![(0usize, 1usize), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)];
        let (o, p) = canonical_vertex_orientation(&prism).unwrap();
        assert_eq!(p, 1);
        assert_eq!(orientation_parity(&prism, &o).unwrap(), 1);
    }

    #[test]
    fn disjoint_union_and_components() {
        let t = BeadedDiagram::theta(triv());
        let u = t.disjoint_union(&t).unwrap();
        assert_eq!(u.num_vertices(), 4);
        assert_eq!(u.components().len(), 2);
        assert_eq!(u.loop_degree().unwrap(), 2);
    }
}
