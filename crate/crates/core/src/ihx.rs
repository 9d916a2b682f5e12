//! Window-bounded closure of the Jacobi relation.
//!
//! The fast normal form of [`crate::normalform`] never applies the Jacobi
//! relation: it relates diagrams of different shapes and its orbit is
//! unbounded, so equality tests in the full quotient are organized as a
//! two-tier scheme. This module provides tier two: inside a finite bead
//! exponent window it enumerates every normal-form diagram of one degree,
//! generates all Jacobi relation vectors whose supports stay inside the
//! window, row-reduces them exactly, and answers membership queries
//! ("does this sum reduce to zero modulo the relations seen in the
//! window?"). Soundness is one-directional by construction: anything the
//! fast normal form kills is in the zero class here.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::diagram::{
    class_canonical, BeadedDiagram, CanonicalForm, CanonicalKey, EdgeId, HalfEdge, Vertex,
};
use crate::enumeration::{enumerate_graphs, Family, NumberedGraph};
use crate::error::Error;
use crate::laurent::{Bead, ContextHandle};
use crate::normalform::DiagramSum;
use crate::rational::Q;

/// The windowed quotient: a basis of normal-form diagrams and the row
/// space of the Jacobi relations among them.
#[derive(Clone, Debug)]
pub struct IhxClosure {
    degree: usize,
    window: (i64, i64),
    basis: Vec<(CanonicalKey, BeadedDiagram)>,
    /// Reduced relation rows over the basis coordinates.
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

/// Builds the windowed closure for loop degree `degree` with every bead
/// exponent confined to `window`. Only the trivial context is supported:
/// the Jacobi relation requires an edge beaded by the rational function 1,
/// which is not a basis monomial over a nontrivial denominator.
pub fn ihx_closure(
    degree: usize,
    window: (i64, i64),
    context: ContextHandle,
) -> Result<IhxClosure, Error> {
    if !context.is_trivial() {
        return Err(Error::InvalidRequest(
            "the windowed Jacobi closure is computed over the trivial context".into(),
        ));
    }
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::InvalidRequest(format!(
            "empty exponent window [{lo}, {hi}]"
        )));
    }
    if degree == 0 || degree > 2 {
        return Err(Error::BudgetExceeded(
            "the windowed closure is enumerated for degrees 1 and 2".into(),
        ));
    }
    // One representative per isomorphism class of the labeled family.
    let mut reps: BTreeMap<Vec<u8>, NumberedGraph> = BTreeMap::new();
    for g in enumerate_graphs(degree, Family::Sl)? {
        reps.entry(g.unlabeled_key()).or_insert(g);
    }
    // All exponent assignments in the window, reduced; the basis keeps the
    // normal forms whose own exponents stay inside the window.
    let mut basis_map: BTreeMap<CanonicalKey, BeadedDiagram> = BTreeMap::new();
    let mut presentations: Vec<BeadedDiagram> = Vec::new();
    let span = (hi - lo + 1) as usize;
    for g in reps.values() {
        let ne = g.edges.len();
        let mut exps = vec![0usize; ne];
        loop {
            let d = diagram_with_exponents(g, &exps, lo, &context)?;
            presentations.push(d.clone());
            match class_canonical(&d)? {
                CanonicalForm::Zero => {}
                CanonicalForm::NonZero { key, rep, .. } => {
                    if in_window(&rep, window) {
                        basis_map.entry(key).or_insert(rep);
                    }
                }
            }
            if !advance(&mut exps, span) {
                break;
            }
        }
    }
    if basis_map.is_empty() {
        return Err(Error::InvalidRequest(format!(
            "window [{lo}, {hi}] contains no degree-{degree} diagram"
        )));
    }
    let basis: Vec<(CanonicalKey, BeadedDiagram)> = basis_map.into_iter().collect();
    let index: BTreeMap<&CanonicalKey, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, (k, _))| (k, i))
        .collect();

    // Jacobi relations at every exponent-zero edge of every in-window
    // presentation; discard vectors escaping the window basis.
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for d in &presentations {
        for e in 0..d.num_edges() {
            let Some(triple) = ihx_triple(d, e) else {
                continue;
            };
            let mut sum = DiagramSum::zero(degree, context.clone());
            let mut escaped = false;
            for part in triple {
                if let Err(err) = sum.insert(Q::one(), part) {
                    return Err(err);
                }
            }
            let mut vector = vec![Q::zero(); basis.len()];
            for (k, _, c) in sum.terms() {
                match index.get(k) {
                    Some(&i) => vector[i] = c.clone(),
                    None => {
                        escaped = true;
                        break;
                    }
                }
            }
            if !escaped && vector.iter().any(|c| !c.is_zero()) {
                rows.push(vector);
            }
        }
    }
    let (rows, pivots) = row_reduce(rows);
    Ok(IhxClosure {
        degree,
        window,
        basis,
        rows,
        pivots,
    })
}

impl IhxClosure {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    /// Dimension of the windowed quotient: basis size minus relation rank.
    pub fn quotient_rank(&self) -> usize {
        self.basis.len() - self.rows.len()
    }

    pub fn relation_rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis_keys(&self) -> impl Iterator<Item = &CanonicalKey> {
        self.basis.iter().map(|(k, _)| k)
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a reduced sum over the window basis; `None` when a
    /// term lies outside the window.
    pub fn coordinates(&self, s: &DiagramSum) -> Option<Vec<Q>> {
        let index: BTreeMap<&CanonicalKey, usize> = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, (k, _))| (k, i))
            .collect();
        let mut v = vec![Q::zero(); self.basis.len()];
        for (k, _, c) in s.terms() {
            match index.get(k) {
                Some(&i) => v[i] = c.clone(),
                None => return None,
            }
        }
        Some(v)
    }

    /// Whether the sum lies in the zero class of the windowed quotient.
    pub fn contains_zero_class(&self, s: &DiagramSum) -> Result<bool, Error> {
        if s.loop_degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, s.loop_degree()));
        }
        let mut v = self.coordinates(s).ok_or_else(|| {
            Error::InvalidRequest("sum has support outside the window basis".into())
        })?;
        reduce_against(&mut v, &self.rows, &self.pivots);
        Ok(v.iter().all(|c| c.is_zero()))
    }
}

fn in_window(d: &BeadedDiagram, (lo, hi): (i64, i64)) -> bool {
    d.edges().iter().all(|e| match e.bead.numerator().as_monomial() {
        Some((k, _)) => lo <= k && k <= hi,
        None => false,
    })
}

fn diagram_with_exponents(
    g: &NumberedGraph,
    exps: &[usize],
    lo: i64,
    context: &ContextHandle,
) -> Result<BeadedDiagram, Error> {
    BeadedDiagram::from_parts(
        context.clone(),
        2 * g.n,
        g.edges
            .iter()
            .zip(exps)
            .map(|(&(a, b), &x)| {
                (
                    a,
                    b,
                    Bead::basis_monomial(lo + x as i64, context.clone()),
                )
            })
            .collect(),
        BTreeMap::new(),
        BTreeMap::new(),
    )
}

fn advance(exps: &mut [usize], span: usize) -> bool {
    for x in exps.iter_mut() {
        *x += 1;
        if *x < span {
            return true;
        }
        *x = 0;
    }
    false
}

// ---------------------------------------------------------------------------
// The local Jacobi rewrite.

/// Builds the three diagrams of the Jacobi relation along edge `e`, which
/// must join distinct vertices and be beaded with exponent zero; their
/// classes sum to zero. With the cyclic orders rotated to `(p, q, m)` at
/// the source and `(m, z, w)` at the target, the three terms carry
/// `(p,q | z,w)`, `(q,z | p,w)` and `(z,p | q,w)`.
pub fn ihx_triple(d: &BeadedDiagram, e: EdgeId) -> Option<[BeadedDiagram; 3]> {
    let edge = &d.edges()[e];
    if edge.is_loop() {
        return None;
    }
    match edge.bead.numerator().as_monomial() {
        Some((0, c)) if c.is_one() => {}
        _ => return None,
    }
    let (u, v) = (edge.src, edge.tgt);
    let (ucyc, vcyc) = match (&d.vertices()[u], &d.vertices()[v]) {
        (Vertex::Trivalent { cyclic: a }, Vertex::Trivalent { cyclic: b }) => (*a, *b),
        _ => return None,
    };
    let eu = HalfEdge::src(e);
    let ev = HalfEdge::tgt(e);
    let rot_to_last = |mut c: [HalfEdge; 3], h: HalfEdge| -> [HalfEdge; 3] {
        while c[2] != h {
            c.rotate_left(1);
        }
        c
    };
    let rot_to_first = |mut c: [HalfEdge; 3], h: HalfEdge| -> [HalfEdge; 3] {
        while c[0] != h {
            c.rotate_left(1);
        }
        c
    };
    let uc = rot_to_last(ucyc, eu);
    let vc = rot_to_first(vcyc, ev);
    let (p, q) = (uc[0], uc[1]);
    let (z, w) = (vc[1], vc[2]);

    let build = |top: [HalfEdge; 2], bottom: [HalfEdge; 2]| -> BeadedDiagram {
        let mut out = d.clone();
        out.set_half_edge_home(top[0], u);
        out.set_half_edge_home(top[1], u);
        out.set_half_edge_home(bottom[0], v);
        out.set_half_edge_home(bottom[1], v);
        out.set_cyclic_order(u, [top[0], top[1], eu]);
        out.set_cyclic_order(v, [ev, bottom[0], bottom[1]]);
        out
    };
    Some([
        build([p, q], [z, w]),
        build([q, z], [p, w]),
        build([z, p], [q, w]),
    ])
}

// ---------------------------------------------------------------------------
// Exact elimination.

/// Gauss-Jordan over the rationals with deterministic pivoting: rows in
/// arrival order, pivot on the leftmost nonzero column.
fn row_reduce(rows: Vec<Vec<Q>>) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut reduced: Vec<Vec<Q>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut row in rows {
        reduce_against(&mut row, &reduced, &pivots);
        if let Some(col) = row.iter().position(|c| !c.is_zero()) {
            let inv = Q::one() / row[col].clone();
            for c in row.iter_mut() {
                *c *= inv.clone();
            }
            // Back-substitute into earlier rows.
            for (r, p) in reduced.iter_mut().zip(&pivots) {
                let factor = r[col].clone();
                let _ = p;
                if !factor.is_zero() {
                    for (a, b) in r.iter_mut().zip(&row) {
                        *a -= factor.clone() * b.clone();
                    }
                }
            }
            reduced.push(row);
            pivots.push(col);
        }
    }
    // Keep rows ordered by pivot column.
    let mut order: Vec<usize> = (0..reduced.len()).collect();
    order.sort_by_key(|&i| pivots[i]);
    let reduced = order.iter().map(|&i| reduced[i].clone()).collect();
    let pivots = order.into_iter().map(|i| pivots[i]).collect();
    (reduced, pivots)
}

fn reduce_against(v: &mut [Q], rows: &[Vec<Q>], pivots: &[usize]) {
    for (row, &p) in rows.iter().zip(pivots) {
        let factor = v[p].clone();
        if !factor.is_zero() {
            for (a, b) in v.iter_mut().zip(row) {
                *a -= factor.clone() * b.clone();
            }
        }
    }
}
