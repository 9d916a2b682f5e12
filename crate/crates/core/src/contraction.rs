//! Tripod combinations, pairings of legs, the contraction map, and the
//! combinatorial right-hand side of the null surgery formula, with an
//! independent evaluation path sweeping half-edge bijections.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::diagram::{BeadedDiagram, End, HalfEdge, LegLabel, Vertex, VertexId};
use crate::error::Error;
use crate::laurent::{Bead, ContextHandle, LaurentPoly};
use crate::normalform::DiagramSum;
use crate::rational::Q;

/// A trilinear antisymmetric form on a genus-`g` Lagrangian basis, stored
/// on strictly increasing index triples (1-based); absent triples are 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrilinearForm {
    genus: usize,
    values: BTreeMap<(usize, usize, usize), Q>,
}

impl TrilinearForm {
    pub fn new(genus: usize) -> Self {
        TrilinearForm {
            genus,
            values: BTreeMap::new(),
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Q) -> Result<(), Error> {
        if !(1 <= i && i < j && j < k && k <= self.genus) {
            return Err(Error::Validation(format!(
                "form indices must satisfy 1 <= i < j < k <= genus, got ({i},{j},{k})"
            )));
        }
        if value.is_zero() {
            self.values.remove(&(i, j, k));
        } else {
            self.values.insert((i, j, k), value);
        }
        Ok(())
    }

    /// Antisymmetric extension to arbitrary index triples.
    pub fn value(&self, i: usize, j: usize, k: usize) -> Q {
        if i == j || j == k || i == k {
            return Q::zero();
        }
        let mut idx = [i, j, k];
        let mut sign = 1i64;
        for a in 0..3 {
            for b in (a + 1)..3 {
                if idx[b] < idx[a] {
                    idx.swap(a, b);
                    sign = -sign;
                }
            }
        }
        let v = self
            .values
            .get(&(idx[0], idx[1], idx[2]))
            .cloned()
            .unwrap_or_else(Q::zero);
        if sign < 0 {
            -v
        } else {
            v
        }
    }

    /// Nonzero strictly increasing triples.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize, &Q)> {
        self.values.iter().map(|(&(i, j, k), v)| (i, j, k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
}

/// A curve in the cyclic cover: handlebody and curve indices, 1-based.
pub type CurveId = (usize, usize);

/// Equivariant linking numbers of curve pairs, as beads over the ambient
/// context. Exchange-symmetric: `lk(Y,X)` is the conjugate of `lk(X,Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingTable {
    context: ContextHandle,
    entries: BTreeMap<(CurveId, CurveId), Bead>,
}

impl LinkingTable {
    /// Builds a table, completing missing exchange-symmetric partners by
    /// conjugation and rejecting contradictions.
    pub fn from_entries(
        context: ContextHandle,
        entries: Vec<(CurveId, CurveId, Bead)>,
    ) -> Result<Self, Error> {
        let mut table: BTreeMap<(CurveId, CurveId), Bead> = BTreeMap::new();
        for (from, to, bead) in entries {
            let conj = bead.conjugate();
            for (key, value) in [((from, to), bead), ((to, from), conj)] {
                match table.get(&key) {
                    Some(existing) if *existing != value => {
                        return Err(Error::AsymmetricLinking(
                            key.0 .0, key.0 .1, key.1 .0, key.1 .1,
                        ));
                    }
                    _ => {
                        table.insert(key, value);
                    }
                }
            }
        }
        Ok(LinkingTable {
            context,
            entries: table,
        })
    }

    pub fn context(&self) -> &ContextHandle {
        &self.context
    }

    pub fn get(&self, from: CurveId, to: CurveId) -> Result<&Bead, Error> {
        self.entries
            .get(&(from, to))
            .ok_or(Error::MissingLinking(from.0, from.1, to.0, to.1))
    }

    pub fn contains(&self, from: CurveId, to: CurveId) -> bool {
        self.entries.contains_key(&(from, to))
    }
}

/// One surgered handlebody: its genus, the lift shift of its chosen copy
/// in the cyclic cover, and its intersection form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Handlebody {
    pub genus: usize,
    pub shift: i64,
    pub form: TrilinearForm,
}

/// A `2n`-component surgery datum: one handlebody per element of
/// `{1..2n}`, a linking table, and the ambient context.
#[derive(Clone, Debug)]
pub struct SurgeryDatum {
    pub n: usize,
    pub handlebodies: Vec<Handlebody>,
    pub table: LinkingTable,
    pub context: ContextHandle,
}

impl SurgeryDatum {
    /// Structural checks: handlebody count, form genera, and table
    /// coverage of every curve pair touched by the forms.
    pub fn validate(&self) -> Result<(), Error> {
        if self.handlebodies.len() != 2 * self.n {
            return Err(Error::Validation(format!(
                "datum wants {} handlebodies, found {}",
                2 * self.n,
                self.handlebodies.len()
            )));
        }
        let mut support: Vec<CurveId> = Vec::new();
        for (idx, h) in self.handlebodies.iter().enumerate() {
            if h.form.genus() != h.genus {
                return Err(Error::Validation(format!(
                    "handlebody {} declares genus {} but its form has genus {}",
                    idx + 1,
                    h.genus,
                    h.form.genus()
                )));
            }
            for (i, j, k, _) in h.form.triples() {
                for c in [i, j, k] {
                    let id = (idx + 1, c);
                    if !support.contains(&id) {
                        support.push(id);
                    }
                }
            }
        }
        for &x in &support {
            for &y in &support {
                if x == y {
                    continue;
                }
                if !self.table.contains(x, y) {
                    return Err(Error::MissingLinking(x.0, x.1, y.0, y.1));
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Tripods.

/// The tripod combination of a form: one vertex-oriented tripod per
/// strictly increasing triple `i < j < k`, legs decorated by the lifted
/// curves with the given shift, weighted by the form value.
pub fn tripods(
    form: &TrilinearForm,
    handlebody: usize,
    shift: i64,
    context: ContextHandle,
) -> Vec<(Q, BeadedDiagram)> {
    let mut out = Vec::new();
    for (i, j, k, v) in form.triples() {
        out.push((
            v.clone(),
            tripod_diagram(handlebody, [i, j, k], shift, context.clone()),
        ));
    }
    out
}

/// A single tripod: trivalent vertex 0, legs 1..3 decorated in slot order,
/// cyclic order given by the ordered legs.
pub fn tripod_diagram(
    handlebody: usize,
    curves: [usize; 3],
    shift: i64,
    context: ContextHandle,
) -> BeadedDiagram {
    let one = Bead::one(context.clone());
    let mut legs = BTreeMap::new();
    for (slot, &curve) in curves.iter().enumerate() {
        legs.insert(
            slot + 1,
            LegLabel::Curve {
                handlebody,
                curve,
                shift,
            },
        );
    }
    BeadedDiagram::from_parts(
        context,
        4,
        vec![(0, 1, one.clone()), (0, 2, one.clone()), (0, 3, one)],
        BTreeMap::new(),
        legs,
    )
    .expect("tripod is well-formed")
}

// ---------------------------------------------------------------------------
// Pairings.

/// All perfect matchings of `0..count` as sorted index pairs, pairing the
/// least unmatched element first; `(count-1)!!` of them, each once, in a
/// deterministic order.
pub fn pairings_of(count: usize) -> Result<Vec<Vec<(usize, usize)>>, Error> {
    if count % 2 != 0 {
        return Err(Error::OddLegCount(count));
    }
    let mut out = Vec::new();
    let mut used = vec![false; count];
    let mut current = Vec::new();
    fn rec(
        used: &mut Vec<bool>,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let first = match used.iter().position(|u| !u) {
            Some(f) => f,
            None => {
                out.push(current.clone());
                return;
            }
        };
        used[first] = true;
        for second in (first + 1)..used.len() {
            if used[second] {
                continue;
            }
            used[second] = true;
            current.push((first, second));
            rec(used, current, out);
            current.pop();
            used[second] = false;
        }
        used[first] = false;
    }
    rec(&mut used, &mut current, &mut out);
    Ok(out)
}

/// The legs of a diagram sorted by the contraction ordering: handlebody,
/// then curve, then vertex position as the fixed tie-break.
pub fn ordered_legs(d: &BeadedDiagram) -> Result<Vec<VertexId>, Error> {
    let mut legs: Vec<(usize, usize, usize)> = Vec::new();
    for (v, vert) in d.vertices().iter().enumerate() {
        if let Vertex::Leg { label, .. } = vert {
            match label {
                LegLabel::Curve {
                    handlebody, curve, ..
                } => legs.push((*handlebody, *curve, v)),
                LegLabel::Hair => {
                    return Err(Error::Validation(
                        "contraction wants curve-decorated legs".into(),
                    ))
                }
            }
        }
    }
    legs.sort();
    Ok(legs.into_iter().map(|(_, _, v)| v).collect())
}

/// Perfect matchings of the leg set of a diagram, as pairs of leg vertex
/// ids in the deterministic leg order.
pub fn enumerate_pairings(d: &BeadedDiagram) -> Result<Vec<Vec<(VertexId, VertexId)>>, Error> {
    let legs = ordered_legs(d)?;
    Ok(pairings_of(legs.len())?
        .into_iter()
        .map(|m| m.into_iter().map(|(a, b)| (legs[a], legs[b])).collect())
        .collect())
}

// ---------------------------------------------------------------------------
// Contraction.

/// Glues one matching of the legs into a closed diagram: each matched pair
/// becomes an edge from the first leg's vertex to the second's, beaded by
/// the equivariant linking number of the two decorations with the lift
/// shifts applied.
fn glue_matching(
    d: &BeadedDiagram,
    matching: &[(VertexId, VertexId)],
    table: &LinkingTable,
) -> Result<Option<BeadedDiagram>, Error> {
    // Map trivalent vertices to a dense range.
    let mut vmap: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (v, vert) in d.vertices().iter().enumerate() {
        if !vert.is_leg() {
            let next = vmap.len();
            vmap.insert(v, next);
        }
    }
    let leg_info = |v: VertexId| -> Result<(CurveId, i64, HalfEdge), Error> {
        match &d.vertices()[v] {
            Vertex::Leg {
                label:
                    LegLabel::Curve {
                        handlebody,
                        curve,
                        shift,
                    },
                half,
            } => Ok(((*handlebody, *curve), *shift, *half)),
            _ => Err(Error::Validation("matching touches a non-curve leg".into())),
        }
    };
    // Each new edge replaces the two leg stub edges; other edges survive.
    let mut edges: Vec<(usize, usize, Bead)> = Vec::new();
    let mut half_map: BTreeMap<(usize, End), HalfEdge> = BTreeMap::new();
    for (i, e) in d.edges().iter().enumerate() {
        let src_is_leg = d.vertices()[e.src].is_leg();
        let tgt_is_leg = d.vertices()[e.tgt].is_leg();
        if src_is_leg && tgt_is_leg {
            return Err(Error::Validation(
                "an edge joins two legs; gluing such struts is not supported".into(),
            ));
        }
        if src_is_leg || tgt_is_leg {
            continue;
        }
        let idx = edges.len();
        edges.push((vmap[&e.src], vmap[&e.tgt], e.bead.clone()));
        half_map.insert((i, End::Src), HalfEdge::src(idx));
        half_map.insert((i, End::Tgt), HalfEdge::tgt(idx));
    }
    for &(x, y) in matching {
        let ((cx, sx, hx), (cy, sy, hy)) = (leg_info(x)?, leg_info(y)?);
        let bead = table.get(cx, cy)?;
        let shifted = bead.mul_poly(&LaurentPoly::monomial(sx - sy, Q::one()));
        if shifted.is_zero() {
            return Ok(None);
        }
        // The leg stub edges: their trivalent ends become the new edge's
        // endpoints, source side first.
        let stub = |h: HalfEdge| -> (VertexId, (usize, End)) {
            let e = &d.edges()[h.edge];
            match h.end {
                End::Src => (e.tgt, (h.edge, End::Tgt)),
                End::Tgt => (e.src, (h.edge, End::Src)),
            }
        };
        let (ux, slot_x) = stub(hx);
        let (uy, slot_y) = stub(hy);
        let idx = edges.len();
        edges.push((vmap[&ux], vmap[&uy], shifted));
        half_map.insert(slot_x, HalfEdge::src(idx));
        half_map.insert(slot_y, HalfEdge::tgt(idx));
    }
    let mut orders: BTreeMap<usize, [HalfEdge; 3]> = BTreeMap::new();
    for (v, vert) in d.vertices().iter().enumerate() {
        if let Vertex::Trivalent { cyclic } = vert {
            orders.insert(
                vmap[&v],
                [
                    half_map[&(cyclic[0].edge, cyclic[0].end)],
                    half_map[&(cyclic[1].edge, cyclic[1].end)],
                    half_map[&(cyclic[2].edge, cyclic[2].end)],
                ],
            );
        }
    }
    Ok(Some(BeadedDiagram::from_parts(
        d.context().clone(),
        vmap.len(),
        edges,
        orders,
        BTreeMap::new(),
    )?))
}

/// Glues a single explicit pairing of leg vertices; `None` when a glued
/// bead vanishes.
pub fn glue_pairing(
    d: &BeadedDiagram,
    pairs: &[(VertexId, VertexId)],
    table: &LinkingTable,
) -> Result<Option<BeadedDiagram>, Error> {
    glue_matching(d, pairs, table)
}

/// The contraction of a formal combination of legged graphs: the reduced
/// sum over all pairings of the glued diagrams, bilinear in the input.
pub fn contract(
    degree: usize,
    terms: &[(Q, BeadedDiagram)],
    table: &LinkingTable,
) -> Result<DiagramSum, Error> {
    let context = table.context().clone();
    let mut out = DiagramSum::zero(degree, context);
    for (coeff, d) in terms {
        if coeff.is_zero() {
            continue;
        }
        let legs = ordered_legs(d)?;
        for matching in pairings_of(legs.len())? {
            let pairs: Vec<(VertexId, VertexId)> = matching
                .into_iter()
                .map(|(a, b)| (legs[a], legs[b]))
                .collect();
            if let Some(glued) = glue_matching(d, &pairs, table)? {
                out.insert(coeff.clone(), glued)?;
            }
        }
    }
    Ok(out)
}

/// Expands the disjoint union of the per-handlebody tripod combinations
/// and contracts: the combinatorial right-hand side of the null surgery
/// formula.
pub fn surgery_rhs(datum: &SurgeryDatum) -> Result<DiagramSum, Error> {
    datum.validate()?;
    let context = datum.context.clone();
    let mut combos: Vec<(Q, Option<BeadedDiagram>)> = vec![(Q::one(), None)];
    for (idx, h) in datum.handlebodies.iter().enumerate() {
        let parts = tripods(&h.form, idx + 1, h.shift, context.clone());
        let mut next = Vec::with_capacity(combos.len() * parts.len().max(1));
        for (c, d) in &combos {
            for (pc, pd) in &parts {
                let merged = match d {
                    Some(existing) => existing.disjoint_union(pd)?,
                    None => pd.clone(),
                };
                next.push((c.clone() * pc.clone(), Some(merged)));
            }
        }
        combos = next;
        if combos.is_empty() {
            break;
        }
    }
    let terms: Vec<(Q, BeadedDiagram)> = combos
        .into_iter()
        .filter_map(|(c, d)| d.map(|d| (c, d)))
        .collect();
    contract(datum.n, &terms, &datum.table)
}

// ---------------------------------------------------------------------------
// The bijection-sweep evaluation path.

/// A choice of one strictly increasing curve triple per handlebody.
pub type TripleChoice = Vec<[usize; 3]>;

/// All triple choices for a datum (empty when some handlebody has genus
/// below 3 or a zero form is irrelevant; forms are not consulted).
pub fn all_triple_choices(datum: &SurgeryDatum) -> Vec<TripleChoice> {
    let mut result: Vec<TripleChoice> = vec![Vec::new()];
    for h in &datum.handlebodies {
        let g = h.genus;
        let mut triples = Vec::new();
        for i in 1..=g {
            for j in (i + 1)..=g {
                for k in (j + 1)..=g {
                    triples.push([i, j, k]);
                }
            }
        }
        let mut next = Vec::with_capacity(result.len() * triples.len());
        for base in &result {
            for t in &triples {
                let mut ext = base.clone();
                ext.push(*t);
                next.push(ext);
            }
        }
        result = next;
        if result.is_empty() {
            return result;
        }
    }
    result
}

/// The product of form values over a triple choice, with antisymmetric
/// sign when triples are given unsorted.
pub fn choice_coefficient(datum: &SurgeryDatum, dd: &TripleChoice) -> Q {
    let mut c = Q::one();
    for (h, tri) in datum.handlebodies.iter().zip(dd) {
        c *= h.form.value(tri[0], tri[1], tri[2]);
    }
    c
}

/// The disjoint union of single tripods selected by a triple choice.
pub fn chosen_tripods(datum: &SurgeryDatum, dd: &TripleChoice) -> Result<BeadedDiagram, Error> {
    let mut acc: Option<BeadedDiagram> = None;
    for (idx, (h, tri)) in datum.handlebodies.iter().zip(dd).enumerate() {
        let t = tripod_diagram(idx + 1, *tri, h.shift, datum.context.clone());
        acc = Some(match acc {
            Some(d) => d.disjoint_union(&t)?,
            None => t,
        });
    }
    acc.ok_or_else(|| Error::Validation("empty datum".into()))
}

/// One bijection from edge half slots `{1..3n} x {1,2}` to vertex slots
/// `N x {1,2,3}`, stored as the image array over the domain in row-major
/// order (edge 0 first half, edge 0 second half, edge 1 first half, ...).
pub type SlotBijection = Vec<(usize, usize)>;

/// Builds the beaded, vertex-oriented graph a bijection determines and
/// returns it with its weight, everything expressed over the datum's
/// context. The vertex slot `(i, k)` selects curve `dd[i][k]`.
pub fn bijection_term(
    datum: &SurgeryDatum,
    dd: &TripleChoice,
    b: &SlotBijection,
) -> Result<BeadedDiagram, Error> {
    let n = datum.n;
    let m = 3 * n;
    if b.len() != 2 * m {
        return Err(Error::Validation("bijection has the wrong length".into()));
    }
    let curve_of = |(i, k): (usize, usize)| -> CurveId { (i + 1, dd[i][k]) };
    let shift_of = |(i, _): (usize, usize)| -> i64 { datum.handlebodies[i].shift };
    let mut edges: Vec<(usize, usize, Bead)> = Vec::with_capacity(m);
    for r in 0..m {
        let first = b[2 * r];
        let second = b[2 * r + 1];
        let bead = datum.table.get(curve_of(first), curve_of(second))?;
        let shifted = bead.mul_poly(&LaurentPoly::monomial(
            shift_of(first) - shift_of(second),
            Q::one(),
        ));
        edges.push((first.0, second.0, shifted));
    }
    // Orientation o(d): vertex i carries (b^{-1}(i,1), b^{-1}(i,2),
    // b^{-1}(i,3)) as its cyclic order.
    let mut orders: BTreeMap<usize, [HalfEdge; 3]> = BTreeMap::new();
    for i in 0..2 * n {
        let mut triple = [HalfEdge::src(0); 3];
        for k in 0..3 {
            let slot = b
                .iter()
                .position(|&x| x == (i, k))
                .ok_or_else(|| Error::Validation("bijection misses a vertex slot".into()))?;
            triple[k] = HalfEdge {
                edge: slot / 2,
                end: if slot % 2 == 0 { End::Src } else { End::Tgt },
            };
        }
        orders.insert(i, triple);
    }
    BeadedDiagram::from_parts(datum.context.clone(), 2 * n, edges, orders, BTreeMap::new())
}

/// All `(6n)!` slot bijections in lexicographic order, materialized;
/// guarded by a budget.
pub fn slot_bijections(n: usize, budget: u64) -> Result<Vec<SlotBijection>, Error> {
    let total = factorial(6 * n);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded(format!(
            "bijection sweep needs (6n)! = {total} evaluations, budget is {budget}"
        )));
    }
    let mut codomain: Vec<(usize, usize)> = Vec::new();
    for i in 0..2 * n {
        for k in 0..3 {
            codomain.push((i, k));
        }
    }
    let mut out = Vec::with_capacity(total as usize);
    loop {
        out.push(codomain.clone());
        if !next_permutation(&mut codomain) {
            break;
        }
    }
    Ok(out)
}

/// Sum of the weighted bijection terms over a slice of bijections, without
/// the global scaling; partial sweeps merge by addition.
pub fn sweep_terms(
    datum: &SurgeryDatum,
    dd: &TripleChoice,
    ci: &Q,
    bijections: &[SlotBijection],
) -> Result<DiagramSum, Error> {
    let mut out = DiagramSum::zero(datum.n, datum.context.clone());
    if ci.is_zero() {
        return Ok(out);
    }
    for b in bijections {
        out.insert(ci.clone(), bijection_term(datum, dd, b)?)?;
    }
    Ok(out)
}

/// The scaling `1 / (2^{3n} (3n)!)` applied after a full sweep.
pub fn sweep_scale(n: usize) -> Q {
    let denom = Q::from_integer((1u128 << (3 * n)).to_string().parse().unwrap())
        * Q::from_integer(factorial(3 * n).to_string().parse().unwrap());
    Q::one() / denom
}

/// Evaluates the contraction of the chosen tripods through the full sweep
/// over all `(6n)!` half-edge bijections, divided by `2^{3n} (3n)!`, and
/// scaled by the product of form values. Agrees with the pairing path.
pub fn contract_via_colorings(
    datum: &SurgeryDatum,
    dd: &TripleChoice,
    budget: u64,
) -> Result<DiagramSum, Error> {
    datum.validate()?;
    let bijections = slot_bijections(datum.n, budget)?;
    let ci = choice_coefficient(datum, dd);
    let out = sweep_terms(datum, dd, &ci, &bijections)?;
    Ok(out.scale(&sweep_scale(datum.n)))
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product::<u128>().max(1)
}

fn next_permutation<T: Ord>(arr: &mut [T]) -> bool {
    if arr.len() < 2 {
        return false;
    }
    let mut i = arr.len() - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = arr.len() - 1;
    while arr[j] <= arr[i - 1] {
        j -= 1;
    }
    arr.swap(i - 1, j);
    arr[i..].reverse();
    true
}
