//! Independent oracle used by the integration suites: a string rewriter over
//! generator words that knows nothing about the normal-form representation
//! in the library. Products are computed by concatenating letter sequences
//! and rewriting to a fixed point.

use leavitt::graph::Graph;

/// A letter of a generator word: a vertex, an edge, or a ghost edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    V(usize),
    E(usize),
    Star(usize),
}

/// A word over the generators; `None` encodes the zero element.
pub type Word = Option<Vec<Letter>>;

fn src(g: &Graph, e: usize) -> usize {
    g.edge(e).src
}

fn dst(g: &Graph, e: usize) -> usize {
    g.edge(e).dst
}

/// One rewriting pass. Returns the rewritten word, or `None` for zero, plus
/// whether anything changed.
fn pass(g: &Graph, w: &[Letter]) -> (Word, bool) {
    // Single-letter simplifications need no context; pair rules scan left to
    // right and restart after the first hit, which keeps the logic simple
    // and obviously terminating (each rule shortens the word or is applied
    // at most once per adjacent pair).
    for (i, pair) in w.windows(2).enumerate() {
        let (a, b) = (pair[0], pair[1]);
        let replace = |mid: Vec<Letter>| {
            let mut out = w[..i].to_vec();
            out.extend(mid);
            out.extend_from_slice(&w[i + 2..]);
            (Some(out), true)
        };
        match (a, b) {
            (Letter::V(u), Letter::V(v)) => {
                return if u == v { replace(vec![Letter::V(u)]) } else { (None, true) };
            }
            (Letter::V(u), Letter::E(e)) => {
                return if u == src(g, e) { replace(vec![Letter::E(e)]) } else { (None, true) };
            }
            (Letter::E(e), Letter::V(u)) => {
                return if u == dst(g, e) { replace(vec![Letter::E(e)]) } else { (None, true) };
            }
            (Letter::V(u), Letter::Star(e)) => {
                return if u == dst(g, e) { replace(vec![Letter::Star(e)]) } else { (None, true) };
            }
            (Letter::Star(e), Letter::V(u)) => {
                return if u == src(g, e) { replace(vec![Letter::Star(e)]) } else { (None, true) };
            }
            (Letter::Star(e), Letter::E(f)) => {
                // Ghost against edge: equal edges contract to the range
                // vertex, distinct edges annihilate.
                return if e == f { replace(vec![Letter::V(dst(g, e))]) } else { (None, true) };
            }
            (Letter::E(e), Letter::Star(f)) => {
                // An edge-ghost pair contracts to its source vertex exactly
                // when the source emits no other edge.
                if e == f && g.out_degree(src(g, e)) == 1 {
                    return replace(vec![Letter::V(src(g, e))]);
                }
                if e != f && dst(g, e) != dst(g, f) {
                    return (None, true);
                }
                // e·f* with e ≠ f but matching ranges is already irreducible
                // here; keep scanning.
            }
            (Letter::E(e), Letter::E(f)) => {
                if dst(g, e) != src(g, f) {
                    return (None, true);
                }
            }
            (Letter::Star(e), Letter::Star(f)) => {
                if src(g, e) != dst(g, f) {
                    return (None, true);
                }
            }
        }
    }
    (Some(w.to_vec()), false)
}

/// Rewrite to a fixed point. Every rule strictly shortens the word, so this
/// terminates; the unique-out-edge law is applied in its contracting
/// direction (e·e* → v), which reaches the same representative the library
/// uses.
fn normalize(g: &Graph, word: &[Letter]) -> Word {
    let mut cur = word.to_vec();
    loop {
        if cur.is_empty() {
            return Some(cur);
        }
        let (next, changed) = pass(g, &cur);
        match next {
            None => return None,
            Some(w) => {
                cur = w;
                if !changed {
                    return Some(cur);
                }
            }
        }
    }
}

/// Multiply two nonzero words and normalize; `None` is zero.
pub fn word_mul(g: &Graph, a: &Word, b: &Word) -> Word {
    match (a, b) {
        (Some(x), Some(y)) => {
            let mut w = x.clone();
            w.extend_from_slice(y);
            normalize(g, &w)
        }
        _ => None,
    }
}

/// Render a normalized word the way the library renders elements, so the
/// two representations can be compared textually.
pub fn word_render(g: &Graph, w: &Word) -> String {
    match w {
        None => "0".to_string(),
        Some(ls) if ls.is_empty() => panic!("empty nonzero word"),
        Some(ls) => ls
            .iter()
            .map(|l| match *l {
                Letter::V(v) => g.vertex_id(v).to_string(),
                Letter::E(e) => g.edge(e).id.clone(),
                Letter::Star(e) => format!("{}*", g.edge(e).id),
            })
            .collect::<Vec<_>>()
            .join(" "),
    }
}

/// The word for a library element, built from its rendered form.
pub fn word_of(g: &Graph, rendered: &str) -> Word {
    if rendered == "0" {
        return None;
    }
    let mut out = Vec::new();
    for tok in rendered.split_whitespace() {
        let (bare, star) = match tok.strip_suffix('*') {
            Some(b) => (b, true),
            None => (tok, false),
        };
        if let Ok(e) = g.edge_ix(bare) {
            out.push(if star { Letter::Star(e) } else { Letter::E(e) });
        } else if let Ok(v) = g.vertex_ix(bare) {
            assert!(!star, "starred vertex in rendered element");
            out.push(Letter::V(v));
        } else {
            panic!("unknown token {tok}");
        }
    }
    Some(out)
}
