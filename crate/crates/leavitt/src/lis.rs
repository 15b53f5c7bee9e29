//! Leavitt inverse semigroup of a graph: normal forms p·q*, the four-case
//! product, the integer grading, and bounded enumeration.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{Graph, Path, VertexIx};

/// Grade of a nonzero element: |p| − |q|.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grade(pub i64);

/// Element in normal form. Zero absorbs everything; a nonzero element is a
/// pair of paths with a common range, reduced so that either the last edges
/// of p and q differ (or one path is empty), or the shared last edge leaves
/// a vertex of out-degree at least 2.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LisElement {
    Zero,
    NormalForm { p: Path, q: Path, stamp: u64 },
}

use LisElement::{NormalForm, Zero};

impl LisElement {
    pub fn is_zero(&self) -> bool {
        matches!(self, Zero)
    }

    /// Grade is defined only away from zero.
    pub fn grade(&self) -> Option<Grade> {
        match self {
            Zero => None,
            NormalForm { p, q, .. } => Some(Grade(p.len() as i64 - q.len() as i64)),
        }
    }

    pub fn paths(&self) -> Option<(&Path, &Path)> {
        match self {
            Zero => None,
            NormalForm { p, q, .. } => Some((p, q)),
        }
    }

    fn check_stamp(&self, g: &Graph) -> Result<()> {
        match self {
            Zero => Ok(()),
            NormalForm { stamp, .. } if *stamp == g.stamp() => Ok(()),
            _ => Err(Error::CrossGraph),
        }
    }
}

/// The vertex v as the idempotent v·v* (both paths empty).
pub fn vertex(g: &Graph, v: VertexIx) -> LisElement {
    normalize(g, Path::empty(v), Path::empty(v)).unwrap()
}

/// The edge e as e·r(e)*.
pub fn edge(g: &Graph, e: usize) -> LisElement {
    let p = Path { base: g.edge(e).src, edges: vec![e] };
    let q = Path::empty(g.edge(e).dst);
    normalize(g, p, q).unwrap()
}

/// The ghost edge e* as r(e)·e*.
pub fn ghost(g: &Graph, e: usize) -> LisElement {
    let p = Path::empty(g.edge(e).dst);
    let q = Path { base: g.edge(e).src, edges: vec![e] };
    normalize(g, p, q).unwrap()
}

/// Reduce a pair of co-terminal paths to normal form: strip the shared last
/// edge while its source has out-degree 1 (v = e·e* there), then freeze.
pub fn normalize(g: &Graph, p: Path, q: Path) -> Result<LisElement> {
    g.check_path(&p)?;
    g.check_path(&q)?;
    if g.range_of(&p) != g.range_of(&q) {
        return Err(Error::RangeMismatch);
    }
    let mut p = p;
    let mut q = q;
    loop {
        match (p.edges.last(), q.edges.last()) {
            (Some(&a), Some(&b)) if a == b && g.out_degree(g.edge(a).src) == 1 => {
                p.edges.pop();
                q.edges.pop();
            }
            _ => break,
        }
    }
    Ok(NormalForm { p, q, stamp: g.stamp() })
}

/// Adjoint: (p·q*)* = q·p*; zero is self-adjoint.
pub fn star(g: &Graph, a: &LisElement) -> Result<LisElement> {
    a.check_stamp(g)?;
    match a {
        Zero => Ok(Zero),
        NormalForm { p, q, stamp } => {
            Ok(NormalForm { p: q.clone(), q: p.clone(), stamp: *stamp })
        }
    }
}

/// When `long` = `short`·t, the edge list of t; None otherwise.
fn strip_prefix(short: &Path, long: &Path) -> Option<Vec<usize>> {
    if short.base != long.base
        || long.edges.len() < short.edges.len()
        || long.edges[..short.edges.len()] != short.edges[..]
    {
        return None;
    }
    Some(long.edges[short.edges.len()..].to_vec())
}

/// Product of normal forms. Writing a = p1·q1*, b = p2·q2*:
/// if p2 = q1·t the product is (p1·t)·q2*; if q1 = p2·t it is p1·(q2·t)*;
/// otherwise (q1, p2 prefix-incomparable) the product is zero.
pub fn multiply(g: &Graph, a: &LisElement, b: &LisElement) -> Result<LisElement> {
    a.check_stamp(g)?;
    b.check_stamp(g)?;
    let (p1, q1) = match a {
        Zero => return Ok(Zero),
        NormalForm { p, q, .. } => (p, q),
    };
    let (p2, q2) = match b {
        Zero => return Ok(Zero),
        NormalForm { p, q, .. } => (p, q),
    };
    if let Some(t_edges) = strip_prefix(q1, p2) {
        // p2 = q1 · t, so a·b = (p1·t)·q2*
        let t = Path { base: g.range_of(q1), edges: t_edges };
        let p = g.concat(p1, &t);
        return normalize(g, p, q2.clone());
    }
    if let Some(t_edges) = strip_prefix(p2, q1) {
        // q1 = p2 · t, so a·b = p1·(q2·t)*
        let t = Path { base: g.range_of(p2), edges: t_edges };
        let q = g.concat(q2, &t);
        return normalize(g, p1.clone(), q);
    }
    Ok(Zero)
}

/// Render in the word syntax: factors left to right, `*` marking ghost
/// edges, vertices only for the length-zero element, `0` for zero.
pub fn render(g: &Graph, a: &LisElement) -> String {
    match a {
        Zero => "0".to_string(),
        NormalForm { p, q, .. } => {
            let mut parts: Vec<String> = Vec::new();
            for &e in &p.edges {
                parts.push(g.edge(e).id.clone());
            }
            for &e in q.edges.iter().rev() {
                parts.push(format!("{}*", g.edge(e).id));
            }
            if parts.is_empty() {
                g.vertex_id(p.base).to_string()
            } else {
                parts.join(" ")
            }
        }
    }
}

/// All nonzero normal forms, ordered by total length |p| + |q| and then
/// lexicographically by rendered word. For a cyclic graph only elements with
/// |p| + |q| ≤ window are produced (the semigroup is infinite); for an
/// acyclic graph the full finite semigroup is returned and `window` is
/// ignored.
pub fn enumerate_elements(g: &Graph, window: usize) -> Vec<LisElement> {
    let cyclic = !g.is_acyclic();
    let cap = if cyclic { Some(window) } else { None };
    let paths = g.all_paths(cap);
    // Group by range so only co-terminal pairs are formed.
    let mut by_range: Vec<Vec<&Path>> = vec![Vec::new(); g.n_vertices()];
    for p in &paths {
        by_range[g.range_of(p)].push(p);
    }
    let mut set = BTreeSet::new();
    for bucket in &by_range {
        for p in bucket {
            for q in bucket {
                if cyclic && p.len() + q.len() > window {
                    continue;
                }
                set.insert(normalize(g, (*p).clone(), (*q).clone()).unwrap());
            }
        }
    }
    let mut out: Vec<LisElement> = set.into_iter().collect();
    out.sort_by_cached_key(|a| match a {
        Zero => unreachable!("enumeration produces nonzero forms only"),
        NormalForm { p, q, .. } => (p.len() + q.len(), render(g, a)),
    });
    out
}

/// Verify the grading law over a finite slice: whenever a·b ≠ 0,
/// grade(a·b) = grade(a) + grade(b). Returns the number of nonzero products
/// checked; fails fast on a violation.
pub fn assert_graded(g: &Graph, elements: &[LisElement], exec: Exec) -> Result<usize> {
    let n = elements.len();
    let check_row = |i: usize| -> Result<usize> {
        let mut count = 0;
        for j in 0..n {
            let ab = multiply(g, &elements[i], &elements[j])?;
            if let Some(Grade(gab)) = ab.grade() {
                let Grade(ga) = elements[i].grade().ok_or(Error::RangeMismatch)?;
                let Grade(gb) = elements[j].grade().ok_or(Error::RangeMismatch)?;
                if gab != ga + gb {
                    return Err(Error::Grading { found: gab, expected: ga + gb });
                }
                count += 1;
            }
        }
        Ok(count)
    };
    match exec.effective() {
        Exec::Sequential => {
            let mut total = 0;
            for i in 0..n {
                total += check_row(i)?;
            }
            Ok(total)
        }
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(check_row).try_reduce(|| 0, |a, b| Ok(a + b))
        }
        #[cfg(not(feature = "parallel"))]
        Exec::Parallel => unreachable!("effective() folds Parallel away"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fx(text: &str) -> Graph {
        Graph::parse(text).unwrap()
    }

    fn f() -> Graph {
        fx(include_str!("../../../fixtures/F.graph"))
    }

    fn e1g() -> Graph {
        fx(include_str!("../../../fixtures/E1.graph"))
    }

    fn by_word(g: &Graph, w: &str) -> LisElement {
        crate::expr::parse_element_expr(g, w).unwrap()
    }

    #[test]
    fn vertex_edge_ghost_render() {
        let g = f();
        assert_eq!(render(&g, &vertex(&g, 0)), "v1");
        let e1 = g.edge_ix("e1").unwrap();
        assert_eq!(render(&g, &edge(&g, e1)), "e1");
        assert_eq!(render(&g, &ghost(&g, e1)), "e1*");
        assert_eq!(render(&g, &Zero), "0");
    }

    #[test]
    fn single_exit_vertex_collapses_to_projection() {
        // v1 has one out-edge e1, so v1 = e1·e1*.
        let g = f();
        let e1 = g.edge_ix("e1").unwrap();
        let v1 = g.vertex_ix("v1").unwrap();
        let p = Path { base: v1, edges: vec![e1] };
        let n = normalize(&g, p.clone(), p).unwrap();
        assert_eq!(n, vertex(&g, v1));
        assert_eq!(render(&g, &n), "v1");
    }

    #[test]
    fn branch_vertex_projection_stays() {
        // v2 has two out-edges; e2·e2* is not v2.
        let g = f();
        let e2 = g.edge_ix("e2").unwrap();
        let v2 = g.vertex_ix("v2").unwrap();
        let p = Path { base: v2, edges: vec![e2] };
        let n = normalize(&g, p.clone(), p).unwrap();
        assert_ne!(n, vertex(&g, v2));
        assert_eq!(render(&g, &n), "e2 e2*");
    }

    #[test]
    fn grade_is_length_difference() {
        let g = f();
        assert_eq!(vertex(&g, 0).grade(), Some(Grade(0)));
        let e1 = g.edge_ix("e1").unwrap();
        assert_eq!(edge(&g, e1).grade(), Some(Grade(1)));
        assert_eq!(ghost(&g, e1).grade(), Some(Grade(-1)));
        assert_eq!(Zero.grade(), None);
    }

    #[test]
    fn orthogonal_vertices_annihilate() {
        let g = f();
        let prod = multiply(&g, &vertex(&g, 0), &vertex(&g, 1)).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn distinct_edges_annihilate_starred() {
        let g = f();
        let e2 = g.edge_ix("e2").unwrap();
        let e3 = g.edge_ix("e3").unwrap();
        let prod = multiply(&g, &ghost(&g, e2), &edge(&g, e3)).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn ghost_then_edge_is_range() {
        let g = f();
        let e2 = g.edge_ix("e2").unwrap();
        let prod = multiply(&g, &ghost(&g, e2), &edge(&g, e2)).unwrap();
        assert_eq!(prod, vertex(&g, g.vertex_ix("v3").unwrap()));
    }

    #[test]
    fn left_and_right_units() {
        let g = f();
        let e2 = g.edge_ix("e2").unwrap();
        let v2 = g.vertex_ix("v2").unwrap();
        let v3 = g.vertex_ix("v3").unwrap();
        let a = edge(&g, e2);
        assert_eq!(multiply(&g, &vertex(&g, v2), &a).unwrap(), a);
        assert_eq!(multiply(&g, &a, &vertex(&g, v3)).unwrap(), a);
    }

    #[test]
    fn concatenation_through_shared_range() {
        let g = f();
        let a = by_word(&g, "e1");
        let b = by_word(&g, "e2");
        let ab = multiply(&g, &a, &b).unwrap();
        assert_eq!(render(&g, &ab), "e1 e2");
    }

    #[test]
    fn case_two_extends_ghost_side() {
        let g = e1g();
        // (e1 e2*) · (e2 e1*): q1 = e2 = p2, so product is e1·e1* — and v1
        // has out-degree 1, so it collapses to v1.
        let a = by_word(&g, "e1 e2*");
        let b = by_word(&g, "e2 e1*");
        let ab = multiply(&g, &a, &b).unwrap();
        assert_eq!(render(&g, &ab), "v1");
    }

    #[test]
    fn product_respects_grading_on_e1() {
        let g = e1g();
        let els = enumerate_elements(&g, 6);
        assert_eq!(assert_graded(&g, &els, Exec::Sequential).unwrap(), assert_graded(&g, &els, Exec::Parallel).unwrap());
    }

    #[test]
    fn enumerate_e1_is_nine() {
        let g = e1g();
        let els = enumerate_elements(&g, 0);
        let words: Vec<String> = els.iter().map(|a| render(&g, a)).collect();
        assert_eq!(
            words,
            ["v1", "v2", "v3", "e1", "e1*", "e2", "e2*", "e1 e2*", "e2 e1*"]
        );
    }

    #[test]
    fn enumerate_loop_window_two() {
        let g = fx(include_str!("../../../fixtures/L1.graph"));
        let els = enumerate_elements(&g, 2);
        let words: Vec<String> = els.iter().map(|a| render(&g, a)).collect();
        assert_eq!(words, ["u", "c", "c*", "c c", "c* c*"]);
    }

    #[test]
    fn cross_graph_mixing_rejected() {
        let g = f();
        let h = e1g();
        let a = vertex(&g, 0);
        let b = vertex(&h, 0);
        assert!(matches!(multiply(&g, &a, &b), Err(Error::CrossGraph)));
        assert!(matches!(star(&g, &b), Err(Error::CrossGraph)));
    }
}
