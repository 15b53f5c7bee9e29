//! Parser for element expressions: whitespace-separated factors, each a
//! vertex id, an edge id, or an edge id followed by `*`, multiplied left to
//! right in the semigroup.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lis::{self, LisElement};

/// Parse and evaluate an expression like `e1 e2 e2* e1*`. The literal `0`
/// evaluates to zero. A factor that is no id in the graph is an error; an
/// intermediate zero product is reported with the 1-based position of the
/// factor that caused it.
pub fn parse_element_expr(g: &Graph, text: &str) -> Result<LisElement> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.is_empty() {
        return Err(Error::Syntax { line: 1, msg: "empty expression".into() });
    }
    if toks == ["0"] {
        return Ok(LisElement::Zero);
    }
    let mut acc: Option<LisElement> = None;
    for (pos, tok) in toks.iter().enumerate() {
        let (name, starred) = match tok.strip_suffix('*') {
            Some(base) => (base, true),
            None => (*tok, false),
        };
        let factor = if let Ok(e) = g.edge_ix(name) {
            if starred {
                lis::ghost(g, e)
            } else {
                lis::edge(g, e)
            }
        } else if let Ok(v) = g.vertex_ix(name) {
            if starred {
                return Err(Error::InvalidId(format!("`{tok}`: vertices have no starred form")));
            }
            lis::vertex(g, v)
        } else {
            return Err(Error::UnknownId(name.to_string()));
        };
        acc = Some(match acc {
            None => factor,
            Some(prev) => {
                let prod = lis::multiply(g, &prev, &factor)?;
                if prod.is_zero() && !prev.is_zero() {
                    return Err(Error::NotComposable {
                        position: pos + 1,
                        factor: (*tok).to_string(),
                    });
                }
                prod
            }
        });
    }
    Ok(acc.unwrap())
}
