//! The relation engine: formal sums of beaded diagrams reduced modulo
//! multilinearity, conjugation, generalized holonomy, antisymmetry and the
//! two tadpole identities, plus the maps between the beaded and unbeaded
//! algebras (inclusion, evaluation at `t = 1`, and the hair map).
//!
//! Reduction is layered. Multilinearity expands every bead into basis
//! monomials `t^k/delta`; each monomial diagram is then canonicalized by
//! [`crate::diagram::class_canonical`], which folds in conjugation,
//! holonomy (bridges always normalize to exponent zero, which is the
//! tadpole stick identity) and antisymmetry, detects classes killed by an
//! orientation-odd self-isomorphism (which is the unbeaded tadpole
//! identity), and merges terms by canonical key. The Jacobi relation is
//! deliberately *not* folded in here; see [`crate::ihx`] for the
//! window-bounded closure.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::diagram::{class_canonical, BeadedDiagram, CanonicalForm, CanonicalKey, EdgeId};
use crate::error::Error;
use crate::laurent::{Bead, ContextHandle};
use crate::rational::{format_q, Q};

/// A reduced rational combination of closed beaded diagrams of one loop
/// degree over one delta context. Representatives are stored in canonical
/// form and no zero coefficient survives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramSum {
    loop_degree: usize,
    context: ContextHandle,
    terms: BTreeMap<CanonicalKey, (BeadedDiagram, Q)>,
}

impl DiagramSum {
    pub fn zero(loop_degree: usize, context: ContextHandle) -> Self {
        DiagramSum {
            loop_degree,
            context,
            terms: BTreeMap::new(),
        }
    }

    /// Reduces a raw combination. Every term must be closed, of the stated
    /// loop degree, and over the stated context.
    pub fn reduce(
        loop_degree: usize,
        context: ContextHandle,
        terms: Vec<(Q, BeadedDiagram)>,
    ) -> Result<Self, Error> {
        let mut sum = DiagramSum::zero(loop_degree, context);
        for (c, d) in terms {
            sum.insert(c, d)?;
        }
        Ok(sum)
    }

    /// Adds `coeff` times the class of `d` to the sum, reducing on the way.
    pub fn insert(&mut self, coeff: Q, d: BeadedDiagram) -> Result<(), Error> {
        if !(**d.context() == *self.context) {
            return Err(Error::ContextMismatch(
                self.context.to_string(),
                d.context().to_string(),
            ));
        }
        let n = d.loop_degree()?;
        if n != self.loop_degree {
            return Err(Error::DegreeMismatch(self.loop_degree, n));
        }
        if coeff.is_zero() {
            return Ok(());
        }
        for (c, mono) in expand_multilinear(&d, &coeff)? {
            match class_canonical(&mono)? {
                CanonicalForm::Zero => {}
                CanonicalForm::NonZero { key, sign, rep } => {
                    let signed = if sign < 0 { -c } else { c };
                    let entry = self.terms.entry(key).or_insert_with(|| (rep, Q::zero()));
                    entry.1 += signed;
                }
            }
        }
        self.terms.retain(|_, (_, c)| !c.is_zero());
        Ok(())
    }

    pub fn loop_degree(&self) -> usize {
        self.loop_degree
    }

    pub fn context(&self) -> &ContextHandle {
        &self.context
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical key order.
    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalKey, &BeadedDiagram, &Q)> {
        self.terms.iter().map(|(k, (d, c))| (k, d, c))
    }

    pub fn coefficient(&self, key: &CanonicalKey) -> Q {
        self.terms
            .get(key)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &DiagramSum) -> Result<DiagramSum, Error> {
        if !(*self.context == *other.context) {
            return Err(Error::ContextMismatch(
                self.context.to_string(),
                other.context.to_string(),
            ));
        }
        if self.loop_degree != other.loop_degree {
            return Err(Error::DegreeMismatch(self.loop_degree, other.loop_degree));
        }
        let mut out = self.clone();
        for (k, (d, c)) in &other.terms {
            let entry = out
                .terms
                .entry(k.clone())
                .or_insert_with(|| (d.clone(), Q::zero()));
            entry.1 += c.clone();
        }
        out.terms.retain(|_, (_, c)| !c.is_zero());
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> DiagramSum {
        if c.is_zero() {
            return DiagramSum::zero(self.loop_degree, self.context.clone());
        }
        let mut out = self.clone();
        for (_, (_, q)) in out.terms.iter_mut() {
            *q *= c.clone();
        }
        out
    }

    pub fn neg(&self) -> DiagramSum {
        self.scale(&-Q::one())
    }

    /// Graded product with another sum: disjoint unions of all term pairs.
    pub fn disjoint_union(&self, other: &DiagramSum) -> Result<DiagramSum, Error> {
        let mut out = DiagramSum::zero(
            self.loop_degree + other.loop_degree,
            self.context.clone(),
        );
        for (_, d1, c1) in self.terms() {
            for (_, d2, c2) in other.terms() {
                out.insert(c1.clone() * c2.clone(), d1.disjoint_union(d2)?)?;
            }
        }
        Ok(out)
    }

    /// Every stored diagram is connected.
    pub fn all_connected(&self) -> bool {
        self.terms().all(|(_, d, _)| d.is_connected())
    }

    /// Deterministic text form: one term per line, coefficients as exact
    /// fractions, terms sorted by canonical key.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut lines = Vec::new();
        for (_, d, c) in self.terms() {
            lines.push(format!(
                "{} * {{ {} }}",
                format_q(c),
                crate::dsl::diagram_to_inline(d)
            ));
        }
        lines.join("\n")
    }
}

// ---------------------------------------------------------------------------
// Multilinear expansion.

/// Expands every bead into basis monomials `t^k/delta`, distributing the
/// numerator coefficients onto the scalar. The output is an unnormalized
/// list of monomial-bead diagrams whose sum equals `coeff` times `d`.
pub fn expand_multilinear(
    d: &BeadedDiagram,
    coeff: &Q,
) -> Result<Vec<(Q, BeadedDiagram)>, Error> {
    let mut partial: Vec<(Q, Vec<i64>)> = vec![(coeff.clone(), Vec::new())];
    for e in d.edges() {
        if !e.bead.same_context(&Bead::zero(d.context().clone())) {
            return Err(Error::ContextMismatch(
                d.context().to_string(),
                e.bead.context().to_string(),
            ));
        }
        let mut next = Vec::with_capacity(partial.len() * e.bead.numerator().num_terms().max(1));
        for (k, c) in e.bead.numerator().terms() {
            for (q, exps) in &partial {
                let mut exps = exps.clone();
                exps.push(k);
                next.push((q.clone() * c.clone(), exps));
            }
        }
        partial = next;
        if partial.is_empty() {
            return Ok(Vec::new());
        }
    }
    let mut out = Vec::with_capacity(partial.len());
    for (q, exps) in partial {
        let mut mono = d.clone();
        mono.replace_beads(
            exps.iter()
                .map(|&k| Bead::basis_monomial(k, d.context().clone()))
                .collect(),
        );
        out.push((q, mono));
    }
    Ok(out)
}

/// Sets forest-edge exponents to zero and writes the oriented cycle sum on
/// every non-forest edge; the spanning forest is greedy over the current
/// edge order. The output presents the same generalized-holonomy class.
pub fn holonomy_normal_form(d: &BeadedDiagram) -> Result<BeadedDiagram, Error> {
    let exps: Vec<i64> = d
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| match e.bead.numerator().as_monomial() {
            Some((k, c)) if c.is_one() => Ok(k),
            _ => Err(Error::NonMonomialBead { edge: i }),
        })
        .collect::<Result<_, _>>()?;
    let n = d.num_vertices();
    let mut uf = crate::diagram::UnionFind::new(n);
    let mut in_forest = vec![false; d.num_edges()];
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (i, e) in d.edges().iter().enumerate() {
        if !e.is_loop() && uf.union(e.src, e.tgt) {
            in_forest[i] = true;
            adj[e.src].push((e.tgt, exps[i]));
            adj[e.tgt].push((e.src, -exps[i]));
        }
    }
    let mut new_exps = Vec::with_capacity(d.num_edges());
    for (i, e) in d.edges().iter().enumerate() {
        if in_forest[i] {
            new_exps.push(0);
        } else if e.is_loop() {
            new_exps.push(exps[i]);
        } else {
            new_exps.push(exps[i] + path_sum(&adj, e.tgt, e.src));
        }
    }
    let mut out = d.clone();
    out.replace_beads(
        new_exps
            .into_iter()
            .map(|k| Bead::basis_monomial(k, d.context().clone()))
            .collect(),
    );
    Ok(out)
}

fn path_sum(adj: &[Vec<(usize, i64)>], from: usize, to: usize) -> i64 {
    if from == to {
        return 0;
    }
    let mut stack = vec![(from, 0i64)];
    let mut visited = vec![false; adj.len()];
    visited[from] = true;
    while let Some((v, acc)) = stack.pop() {
        for &(w, exp) in &adj[v] {
            if !visited[w] {
                visited[w] = true;
                let nacc = acc + exp;
                if w == to {
                    return nacc;
                }
                stack.push((w, nacc));
            }
        }
    }
    0
}

/// A holonomy class: the oriented cycle sums that survive once a spanning
/// forest is beaded trivially, i.e. the induced morphism on cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    /// Edges whose exponent the forest normalization zeroes.
    pub forest: Vec<EdgeId>,
    /// Nonzero cycle sums indexed by their non-forest edge.
    pub values: BTreeMap<EdgeId, i64>,
}

/// Reads the holonomy class of a monomial-bead diagram off its cycle sums.
pub fn cohomology_class(d: &BeadedDiagram) -> Result<CohomologyClass, Error> {
    let nf = holonomy_normal_form(d)?;
    let mut forest = Vec::new();
    let mut values = BTreeMap::new();
    for (i, e) in nf.edges().iter().enumerate() {
        let (k, _) = e.bead.numerator().as_monomial().unwrap();
        if k != 0 {
            values.insert(i, k);
        } else {
            forest.push(i);
        }
    }
    Ok(CohomologyClass { forest, values })
}

/// Normalizes edge orientations and vertex cyclic orders to the canonical
/// representative, returning it with the accumulated antisymmetry sign;
/// `None` when the class is zero because a self-isomorphism is
/// orientation-odd.
pub fn orientation_normalize(
    d: &BeadedDiagram,
) -> Result<Option<(BeadedDiagram, i8)>, Error> {
    match class_canonical(d)? {
        CanonicalForm::Zero => Ok(None),
        CanonicalForm::NonZero { sign, rep, .. } => Ok(Some((rep, sign))),
    }
}

// ---------------------------------------------------------------------------
// Tadpole identities.

/// Loop edges paired with the unique non-loop edge at the loop vertex (the
/// stick). The two loops of an isolated two-loop component share a stick.
pub fn tadpoles(d: &BeadedDiagram) -> Vec<(EdgeId, EdgeId)> {
    let mut out = Vec::new();
    for (i, e) in d.edges().iter().enumerate() {
        if !e.is_loop() {
            continue;
        }
        let v = e.src;
        for (j, f) in d.edges().iter().enumerate() {
            if j != i && !f.is_loop() && (f.src == v || f.tgt == v) {
                out.push((i, j));
                break;
            }
        }
    }
    out
}

/// Rewrites every loop bead `b` as the antisymmetrized `(b - conj(b))/2`
/// and reduces. Idempotent on already antisymmetric loop beads.
pub fn tadpole_split(d: &BeadedDiagram, coeff: &Q) -> Result<DiagramSum, Error> {
    let mut out = d.clone();
    let half = Q::new(1.into(), 2.into());
    let mut beads: Vec<Bead> = d.edges().iter().map(|e| e.bead.clone()).collect();
    for (i, e) in d.edges().iter().enumerate() {
        if e.is_loop() {
            let b = &e.bead;
            let anti = b.add(&b.conjugate().scale(&-Q::one()))?.scale(&half);
            beads[i] = anti;
        }
    }
    out.replace_beads(beads);
    DiagramSum::reduce(
        d.loop_degree()?,
        d.context().clone(),
        vec![(coeff.clone(), out)],
    )
}

/// Replaces every tadpole stick bead `P` by the constant `P(1)` and
/// reduces.
pub fn tadpole_stick_eval(d: &BeadedDiagram, coeff: &Q) -> Result<DiagramSum, Error> {
    let mut out = d.clone();
    let mut beads: Vec<Bead> = d.edges().iter().map(|e| e.bead.clone()).collect();
    for (_, stick) in tadpoles(d) {
        let value = beads[stick].eval_one();
        beads[stick] = Bead::one(d.context().clone()).scale(&value);
    }
    out.replace_beads(beads);
    DiagramSum::reduce(
        d.loop_degree()?,
        d.context().clone(),
        vec![(coeff.clone(), out)],
    )
}

// ---------------------------------------------------------------------------
// Maps between the beaded and unbeaded algebras.

/// Views an unbeaded sum (trivial context) inside the beaded algebra over
/// `target`: every edge becomes beaded by 1, i.e. `delta/delta`.
pub fn inclusion_i(s: &DiagramSum, target: ContextHandle) -> Result<DiagramSum, Error> {
    if !s.context().is_trivial() {
        return Err(Error::Validation(
            "inclusion expects an unbeaded sum over the trivial context".into(),
        ));
    }
    let mut out = DiagramSum::zero(s.loop_degree(), target.clone());
    for (_, d, c) in s.terms() {
        let mut moved = d.clone();
        moved.replace_context(target.clone());
        moved.replace_beads(vec![Bead::one(target.clone()); d.num_edges()]);
        out.insert(c.clone(), moved)?;
    }
    Ok(out)
}

/// Sets `t = 1` in every bead, turning beads into scalars; lands in the
/// unbeaded algebra (trivial context). Left inverse of [`inclusion_i`].
pub fn evaluation_p(s: &DiagramSum) -> Result<DiagramSum, Error> {
    let trivial = crate::laurent::DeltaContext::trivial();
    let mut out = DiagramSum::zero(s.loop_degree(), trivial.clone());
    for (_, d, c) in s.terms() {
        let mut scalar = c.clone();
        for e in d.edges() {
            scalar *= e.bead.eval_one();
        }
        let mut moved = d.clone();
        moved.replace_context(trivial.clone());
        moved.replace_beads(vec![Bead::one(trivial.clone()); d.num_edges()]);
        out.insert(scalar, moved)?;
    }
    Ok(out)
}

/// A reduced combination of diagrams that may carry hair legs; used as the
/// target of the hair map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeggedSum {
    context: ContextHandle,
    terms: BTreeMap<CanonicalKey, (BeadedDiagram, Q)>,
}

impl LeggedSum {
    pub fn zero(context: ContextHandle) -> Self {
        LeggedSum {
            context,
            terms: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, coeff: Q, d: BeadedDiagram) -> Result<(), Error> {
        if coeff.is_zero() {
            return Ok(());
        }
        for (c, mono) in expand_multilinear(&d, &coeff)? {
            match class_canonical(&mono)? {
                CanonicalForm::Zero => {}
                CanonicalForm::NonZero { key, sign, rep } => {
                    let signed = if sign < 0 { -c } else { c };
                    let entry = self.terms.entry(key).or_insert_with(|| (rep, Q::zero()));
                    entry.1 += signed;
                }
            }
        }
        self.terms.retain(|_, (_, c)| !c.is_zero());
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalKey, &BeadedDiagram, &Q)> {
        self.terms.iter().map(|(k, (d, c))| (k, d, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms with exactly `legs` hair legs.
    pub fn leg_part(&self, legs: usize) -> Vec<(Q, BeadedDiagram)> {
        self.terms()
            .filter(|(_, d, _)| d.leg_count() == legs)
            .map(|(_, d, c)| (c.clone(), d.clone()))
            .collect()
    }
}

/// Expands each bead `P(t)` as `P(exp(x))` and replaces each edge by the
/// combination of hairy edges with `m` pendant legs, `m!` denominators
/// exact, discarding terms whose total leg count exceeds `bound`.
///
/// Beads must be genuine Laurent polynomials: either the context is
/// trivial or every numerator is divisible by delta.
pub fn hair_map(s: &DiagramSum, bound: usize) -> Result<LeggedSum, Error> {
    let trivial = crate::laurent::DeltaContext::trivial();
    let mut out = LeggedSum::zero(trivial.clone());
    for (_, d, c) in s.terms() {
        let mut exps = Vec::with_capacity(d.num_edges());
        for (i, e) in d.edges().iter().enumerate() {
            let p = e
                .bead
                .as_polynomial()
                .ok_or(Error::NonPolynomialBead { edge: i })?;
            match p.as_monomial() {
                Some((k, cc)) if cc.is_one() => exps.push(k),
                _ => return Err(Error::NonMonomialBead { edge: i }),
            }
        }
        // Choose a leg count per edge with total at most `bound`; the
        // coefficient picks up k^m / m! from t^k = exp(k x).
        let m = d.num_edges();
        let mut choice = vec![0usize; m];
        loop {
            let total: usize = choice.iter().sum();
            if total <= bound {
                let mut scalar = c.clone();
                for (e, &me) in choice.iter().enumerate() {
                    scalar *= exp_series_coeff(exps[e], me);
                }
                if !scalar.is_zero() {
                    let hairy = attach_hair(d, &choice, &trivial)?;
                    out.insert(scalar, hairy)?;
                }
            }
            let mut i = 0;
            loop {
                if i == m {
                    break;
                }
                choice[i] += 1;
                if choice[i] <= bound {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == m || m == 0 {
                break;
            }
        }
    }
    Ok(out)
}

/// Coefficient of `x^m` in `exp(k x)`, i.e. `k^m / m!`.
fn exp_series_coeff(k: i64, m: usize) -> Q {
    let mut num = Q::one();
    for _ in 0..m {
        num *= Q::from_integer(k.into());
    }
    let mut fact = Q::one();
    for j in 1..=m {
        fact *= Q::from_integer((j as i64).into());
    }
    num / fact
}

/// Subdivides each edge `e` with `legs[e]` new trivalent vertices carrying
/// pendant hair legs; cyclic order at a new vertex is (incoming path,
/// outgoing path, leg).
fn attach_hair(
    d: &BeadedDiagram,
    legs: &[usize],
    target: &ContextHandle,
) -> Result<BeadedDiagram, Error> {
    use crate::diagram::{End, HalfEdge, LegLabel, Vertex};
    let mut edges: Vec<(usize, usize, Bead)> = Vec::new();
    let mut leg_labels: BTreeMap<usize, LegLabel> = BTreeMap::new();
    let mut orders: BTreeMap<usize, [HalfEdge; 3]> = BTreeMap::new();
    let mut next_vertex = d.num_vertices();
    let mut half_map: BTreeMap<(usize, End), HalfEdge> = BTreeMap::new();
    for (i, e) in d.edges().iter().enumerate() {
        let m = legs[i];
        let one = Bead::one(target.clone());
        if m == 0 {
            let idx = edges.len();
            edges.push((e.src, e.tgt, one));
            half_map.insert((i, End::Src), HalfEdge::src(idx));
            half_map.insert((i, End::Tgt), HalfEdge::tgt(idx));
            continue;
        }
        let ws: Vec<usize> = (0..m)
            .map(|_| {
                let w = next_vertex;
                next_vertex += 1;
                w
            })
            .collect();
        let mut prev = e.src;
        let mut first_half = None;
        let mut segs: Vec<usize> = Vec::new();
        for &w in &ws {
            let idx = edges.len();
            edges.push((prev, w, one.clone()));
            if first_half.is_none() {
                first_half = Some(HalfEdge::src(idx));
            }
            segs.push(idx);
            prev = w;
        }
        let last_idx = edges.len();
        edges.push((prev, e.tgt, one.clone()));
        segs.push(last_idx);
        half_map.insert((i, End::Src), first_half.unwrap());
        half_map.insert((i, End::Tgt), HalfEdge::tgt(last_idx));
        for (j, &w) in ws.iter().enumerate() {
            let leg_vertex = next_vertex;
            next_vertex += 1;
            let leg_idx = edges.len();
            edges.push((w, leg_vertex, one.clone()));
            leg_labels.insert(leg_vertex, LegLabel::Hair);
            orders.insert(
                w,
                [
                    HalfEdge::tgt(segs[j]),
                    HalfEdge::src(segs[j + 1]),
                    HalfEdge::src(leg_idx),
                ],
            );
        }
    }
    for (v, vert) in d.vertices().iter().enumerate() {
        match vert {
            Vertex::Trivalent { cyclic } => {
                orders.insert(
                    v,
                    [
                        half_map[&(cyclic[0].edge, cyclic[0].end)],
                        half_map[&(cyclic[1].edge, cyclic[1].end)],
                        half_map[&(cyclic[2].edge, cyclic[2].end)],
                    ],
                );
            }
            Vertex::Leg { label, .. } => {
                leg_labels.insert(v, label.clone());
            }
        }
    }
    BeadedDiagram::from_parts(target.clone(), next_vertex, edges, orders, leg_labels)
}
