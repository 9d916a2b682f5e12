//! The line-oriented diagram DSL and the deterministic sum text format.
//!
//! One statement per line (or `;`-separated inline):
//!
//! ```text
//! # theta graph with a bead on its first edge
//! e1: v1 -> v2 [t^-1 - 1 + t]
//! e2: v1 -> v2
//! e3: v1 -> v2
//! or v1 = (e1.s, e2.s, e3.s)
//! ```
//!
//! Legs are declared as `leg v3 = z(1,2,0)` (handlebody, curve, lift
//! shift) or `leg v3 = hair`. Bead brackets contain the numerator over the
//! ambient delta; an omitted bracket means the rational function 1.
//! Comments start with `#`.
//!
//! Sums are serialized one term per line as `p/q * { <inline diagram> }`,
//! terms sorted by canonical key.

use std::collections::BTreeMap;

use crate::diagram::{BeadedDiagram, End, HalfEdge, LegLabel, Vertex};
use crate::error::Error;
use crate::laurent::{Bead, ContextHandle, LaurentPoly};
use crate::normalform::DiagramSum;
use crate::rational::{format_q, parse_q, Q};

/// Serializes a diagram as one `;`-separated inline statement list.
pub fn diagram_to_inline(d: &BeadedDiagram) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, e) in d.edges().iter().enumerate() {
        parts.push(format!(
            "e{}: v{} -> v{} [{}]",
            i + 1,
            e.src + 1,
            e.tgt + 1,
            e.bead.numerator()
        ));
    }
    for (v, vert) in d.vertices().iter().enumerate() {
        if let Vertex::Leg { label, .. } = vert {
            match label {
                LegLabel::Curve {
                    handlebody,
                    curve,
                    shift,
                } => parts.push(format!("leg v{} = z({handlebody},{curve},{shift})", v + 1)),
                LegLabel::Hair => parts.push(format!("leg v{} = hair", v + 1)),
            }
        }
    }
    for (v, vert) in d.vertices().iter().enumerate() {
        if let Vertex::Trivalent { cyclic } = vert {
            let h = |h: &HalfEdge| {
                format!(
                    "e{}.{}",
                    h.edge + 1,
                    if h.end == End::Src { "s" } else { "t" }
                )
            };
            parts.push(format!(
                "or v{} = ({}, {}, {})",
                v + 1,
                h(&cyclic[0]),
                h(&cyclic[1]),
                h(&cyclic[2])
            ));
        }
    }
    parts.join("; ")
}

/// Serializes a diagram as a multi-line DSL document.
pub fn diagram_to_text(d: &BeadedDiagram) -> String {
    diagram_to_inline(d).replace("; ", "\n")
}

struct EdgeDecl {
    line: usize,
    src: usize,
    tgt: usize,
    bead: Option<LaurentPoly>,
}

/// Parses the DSL into a diagram over the given context. Both multi-line
/// documents and `;`-separated inline forms are accepted.
pub fn parse_diagram(text: &str, context: ContextHandle) -> Result<BeadedDiagram, Error> {
    let mut edges: BTreeMap<usize, EdgeDecl> = BTreeMap::new();
    let mut legs: BTreeMap<usize, (usize, LegLabel)> = BTreeMap::new();
    let mut orders: BTreeMap<usize, (usize, [(usize, End); 3])> = BTreeMap::new();

    let mut lineno = 0usize;
    for raw_line in text.lines() {
        lineno += 1;
        for stmt in raw_line.split(';') {
            let stmt = match stmt.find('#') {
                Some(p) => &stmt[..p],
                None => stmt,
            }
            .trim();
            if stmt.is_empty() {
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("leg ") {
                let (v, label) = parse_leg(rest, lineno)?;
                legs.insert(v, (lineno, label));
            } else if let Some(rest) = stmt.strip_prefix("or ") {
                let (v, triple) = parse_order(rest, lineno)?;
                orders.insert(v, (lineno, triple));
            } else if stmt.starts_with('e') {
                let (idx, decl) = parse_edge(stmt, lineno)?;
                if edges.insert(idx, decl).is_some() {
                    return Err(Error::parse(lineno, format!("edge e{idx} declared twice")));
                }
            } else {
                return Err(Error::parse(lineno, format!("unrecognized statement `{stmt}`")));
            }
        }
    }

    // Edge indices must be dense 1..m.
    let m = edges.len();
    for i in 1..=m {
        if !edges.contains_key(&i) {
            return Err(Error::Validation(format!(
                "edge indices must be dense: e{i} is missing"
            )));
        }
    }
    // Vertices are declared by appearing in an edge.
    let mut declared: Vec<usize> = Vec::new();
    for decl in edges.values() {
        declared.push(decl.src);
        declared.push(decl.tgt);
    }
    declared.sort_unstable();
    declared.dedup();
    let vid = |v: usize, line: usize| -> Result<usize, Error> {
        declared
            .binary_search(&v)
            .map_err(|_| Error::parse(line, format!("vertex v{v} is not an end of any edge")))
    };

    let mut edge_list: Vec<(usize, usize, Bead)> = Vec::with_capacity(m);
    for i in 1..=m {
        let decl = &edges[&i];
        let bead = match &decl.bead {
            Some(p) => Bead::new(p.clone(), context.clone()),
            None => Bead::one(context.clone()),
        };
        edge_list.push((vid(decl.src, decl.line)?, vid(decl.tgt, decl.line)?, bead));
    }
    let mut leg_map: BTreeMap<usize, LegLabel> = BTreeMap::new();
    for (v, (line, label)) in legs {
        leg_map.insert(vid(v, line)?, label);
    }
    let mut order_map: BTreeMap<usize, [HalfEdge; 3]> = BTreeMap::new();
    for (v, (line, triple)) in orders {
        let mut hs = [HalfEdge::src(0); 3];
        for (slot, (e, end)) in triple.iter().enumerate() {
            if *e == 0 || *e > m {
                return Err(Error::parse(line, format!("half-edge references missing edge e{e}")));
            }
            hs[slot] = HalfEdge {
                edge: e - 1,
                end: *end,
            };
        }
        order_map.insert(vid(v, line)?, hs);
    }
    BeadedDiagram::from_parts(context, declared.len(), edge_list, order_map, leg_map)
}

fn parse_vertex_token(tok: &str, line: usize) -> Result<usize, Error> {
    let tok = tok.trim();
    let rest = tok
        .strip_prefix('v')
        .ok_or_else(|| Error::parse(line, format!("expected vertex token, got `{tok}`")))?;
    rest.parse::<usize>()
        .ok()
        .filter(|&v| v >= 1)
        .ok_or_else(|| Error::parse(line, format!("bad vertex token `{tok}`")))
}

fn parse_edge(stmt: &str, line: usize) -> Result<(usize, EdgeDecl), Error> {
    // e<i>: v<a> -> v<b> [bead]
    let (head, rest) = stmt
        .split_once(':')
        .ok_or_else(|| Error::parse(line, "edge statement wants `e<i>: v<a> -> v<b>`"))?;
    let idx = head
        .trim()
        .strip_prefix('e')
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&i| i >= 1)
        .ok_or_else(|| Error::parse(line, format!("bad edge token `{}`", head.trim())))?;
    let (ends, bead) = match rest.find('[') {
        Some(p) => {
            let close = rest
                .rfind(']')
                .ok_or_else(|| Error::parse(line, "unterminated bead bracket"))?;
            if close < p {
                return Err(Error::parse(line, "unterminated bead bracket"));
            }
            (
                &rest[..p],
                Some(LaurentPoly::parse(&rest[p + 1..close]).map_err(|e| match e {
                    Error::Validation(msg) => Error::parse(line, msg),
                    other => other,
                })?),
            )
        }
        None => (rest, None),
    };
    let (a, b) = ends
        .split_once("->")
        .ok_or_else(|| Error::parse(line, "edge statement wants `v<a> -> v<b>`"))?;
    Ok((
        idx,
        EdgeDecl {
            line,
            src: parse_vertex_token(a, line)?,
            tgt: parse_vertex_token(b, line)?,
            bead,
        },
    ))
}

fn parse_leg(rest: &str, line: usize) -> Result<(usize, LegLabel), Error> {
    // v<c> = z(<a>,<j>,<m>) | v<c> = hair
    let (v, decl) = rest
        .split_once('=')
        .ok_or_else(|| Error::parse(line, "leg statement wants `leg v<c> = z(a,j,m)`"))?;
    let v = parse_vertex_token(v, line)?;
    let decl = decl.trim();
    if decl == "hair" {
        return Ok((v, LegLabel::Hair));
    }
    let inner = decl
        .strip_prefix('z')
        .map(str::trim)
        .and_then(|s| s.strip_prefix('('))
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::parse(line, format!("bad leg decoration `{decl}`")))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::parse(line, "leg decoration wants three arguments"));
    }
    let handlebody = parts[0]
        .parse::<usize>()
        .map_err(|_| Error::parse(line, format!("bad handlebody index `{}`", parts[0])))?;
    let curve = parts[1]
        .parse::<usize>()
        .map_err(|_| Error::parse(line, format!("bad curve index `{}`", parts[1])))?;
    let shift = parts[2]
        .parse::<i64>()
        .map_err(|_| Error::parse(line, format!("bad lift shift `{}`", parts[2])))?;
    Ok((
        v,
        LegLabel::Curve {
            handlebody,
            curve,
            shift,
        },
    ))
}

fn parse_order(rest: &str, line: usize) -> Result<(usize, [(usize, End); 3]), Error> {
    // v<a> = (e<i>.s, e<j>.t, e<k>.s)
    let (v, decl) = rest
        .split_once('=')
        .ok_or_else(|| Error::parse(line, "or statement wants `or v<a> = (h, h, h)`"))?;
    let v = parse_vertex_token(v, line)?;
    let inner = decl
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::parse(line, "cyclic order wants parentheses"))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::parse(line, "cyclic order wants three half-edges"));
    }
    let mut out = [(0usize, End::Src); 3];
    for (i, p) in parts.iter().enumerate() {
        let (e, end) = p
            .split_once('.')
            .ok_or_else(|| Error::parse(line, format!("bad half-edge token `{p}`")))?;
        let idx = e
            .trim()
            .strip_prefix('e')
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| Error::parse(line, format!("bad half-edge token `{p}`")))?;
        let end = match end.trim() {
            "s" => End::Src,
            "t" => End::Tgt,
            other => {
                return Err(Error::parse(line, format!("half-edge end must be s or t, got `{other}`")))
            }
        };
        out[i] = (idx, end);
    }
    Ok((v, out))
}

/// Parses coefficient-diagram term lines without reducing; legged terms
/// are allowed.
pub fn parse_terms(
    text: &str,
    context: ContextHandle,
) -> Result<Vec<(Q, BeadedDiagram)>, Error> {
    let mut terms: Vec<(Q, BeadedDiagram)> = Vec::new();
    let trimmed = text.trim();
    if trimmed == "0" || trimmed.is_empty() {
        return Ok(terms);
    }
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (coeff, rest) = line
            .split_once('*')
            .ok_or_else(|| Error::parse(lineno + 1, "sum term wants `coeff * { diagram }`"))?;
        let coeff = parse_q(coeff)?;
        let inner = rest
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::parse(lineno + 1, "sum term wants braces"))?;
        terms.push((coeff, parse_diagram(inner, context.clone())?));
    }
    Ok(terms)
}

/// Parses the deterministic sum text: `p/q * { ... }` per line, or `0`.
pub fn parse_sum(
    text: &str,
    loop_degree: usize,
    context: ContextHandle,
) -> Result<DiagramSum, Error> {
    let terms = parse_terms(text, context.clone())?;
    DiagramSum::reduce(loop_degree, context, terms)
}

/// Serializes a sum; inverse of [`parse_sum`] up to reduction.
pub fn sum_to_text(s: &DiagramSum) -> String {
    s.to_text()
}

/// Renders one coefficient-diagram pair the way sums are printed.
pub fn term_to_text(c: &Q, d: &BeadedDiagram) -> String {
    format!("{} * {{ {} }}", format_q(c), diagram_to_inline(d))
}
