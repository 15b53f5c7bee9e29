//! Finite directed multigraphs with source/range maps, plus the path, cycle,
//! and depth analysis the rest of the crate builds on. Vertices and edges are
//! addressed by dense indices in declaration order; ids are kept for I/O.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexIx = usize;
pub type EdgeIx = usize;

#[derive(Clone, Debug)]
pub struct Edge {
    pub id: String,
    pub src: VertexIx,
    pub dst: VertexIx,
}

/// Finite directed multigraph. Immutable after construction; all derived
/// queries are pure. The stamp is a structural hash used to reject mixing
/// elements of different graphs.
#[derive(Clone, Debug)]
pub struct Graph {
    vertex_ids: Vec<String>,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeIx>>,
    into: Vec<Vec<EdgeIx>>,
    vertex_lookup: HashMap<String, VertexIx>,
    edge_lookup: HashMap<String, EdgeIx>,
    stamp: u64,
}

/// Directed path: a base vertex (anchor of the empty path) and a composable
/// edge sequence starting there.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub base: VertexIx,
    pub edges: Vec<EdgeIx>,
}

impl Path {
    pub fn empty(v: VertexIx) -> Path {
        Path { base: v, edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn source(&self) -> VertexIx {
        self.base
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Forward,
    Star,
}

/// Walk: edge steps traversed forward or starred, under s(e*) = r(e),
/// r(e*) = s(e). Connectivity is defined through these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub base: VertexIx,
    pub steps: Vec<(EdgeIx, Dir)>,
}

/// Nonempty circuit with pairwise distinct sources.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub path: Path,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// What `validate` reports for any graph; `classifier_scope` marks the connected
/// out-degree-at-most-1 inputs the classifier accepts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub connected: bool,
    pub max_out_degree: usize,
    pub sinks: Vec<String>,
    pub cycle: Option<CycleDesc>,
    pub classifier_scope: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleDesc {
    pub edges: Vec<String>,
    pub length: usize,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: String,
    src: String,
    dst: String,
}

fn valid_id(id: &str) -> bool {
    let mut chars = id.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Graph {
    /// Build from ids; vertex and edge order is the order given here.
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String, String)>) -> Result<Graph> {
        // An edge with no vertex declarations dangles; only a fully empty
        // input is an empty graph.
        if vertices.is_empty() && edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut vertex_lookup = HashMap::new();
        for (ix, id) in vertices.iter().enumerate() {
            if !valid_id(id) {
                return Err(Error::InvalidId(id.clone()));
            }
            if vertex_lookup.insert(id.clone(), ix).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        let mut edge_lookup = HashMap::new();
        let mut resolved = Vec::with_capacity(edges.len());
        for (ix, (id, src, dst)) in edges.iter().enumerate() {
            if !valid_id(id) {
                return Err(Error::InvalidId(id.clone()));
            }
            if vertex_lookup.contains_key(id) || edge_lookup.insert(id.clone(), ix).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
            let src_ix = *vertex_lookup.get(src).ok_or_else(|| Error::DanglingEndpoint {
                edge: id.clone(),
                vertex: src.clone(),
            })?;
            let dst_ix = *vertex_lookup.get(dst).ok_or_else(|| Error::DanglingEndpoint {
                edge: id.clone(),
                vertex: dst.clone(),
            })?;
            resolved.push(Edge { id: id.clone(), src: src_ix, dst: dst_ix });
        }
        let mut out = vec![Vec::new(); vertices.len()];
        let mut into = vec![Vec::new(); vertices.len()];
        for (ix, e) in resolved.iter().enumerate() {
            out[e.src].push(ix);
            into[e.dst].push(ix);
        }
        let mut hasher = DefaultHasher::new();
        vertices.hash(&mut hasher);
        for e in &resolved {
            (&e.id, e.src, e.dst).hash(&mut hasher);
        }
        Ok(Graph {
            vertex_ids: vertices,
            edges: resolved,
            out,
            into,
            vertex_lookup,
            edge_lookup,
            stamp: hasher.finish(),
        })
    }

    /// Parse the line-oriented graph format: `vertex <id>` and
    /// `edge <id> <src> <dst>`, one per line, `#` starting a comment.
    /// Declarations may appear in any order; reported order is file order.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["vertex", id] => vertices.push((*id).to_string()),
                ["edge", id, src, dst] => {
                    edges.push(((*id).to_string(), (*src).to_string(), (*dst).to_string()))
                }
                _ => {
                    return Err(Error::Syntax {
                        line: lineno + 1,
                        msg: format!("expected `vertex <id>` or `edge <id> <src> <dst>`, got `{line}`"),
                    })
                }
            }
        }
        Graph::new(vertices, edges)
    }

    /// Parse the JSON variant: {"vertices": [...], "edges": [{"id","src","dst"}]}.
    pub fn parse_json(text: &str) -> Result<Graph> {
        let raw: GraphJson = serde_json::from_str(text)?;
        Graph::new(
            raw.vertices,
            raw.edges.into_iter().map(|e| (e.id, e.src, e.dst)).collect(),
        )
    }

    /// Canonical text form; `Graph::parse(g.format())` reproduces `g`.
    pub fn format(&self) -> String {
        let mut s = String::new();
        for id in &self.vertex_ids {
            s.push_str("vertex ");
            s.push_str(id);
            s.push('\n');
        }
        for e in &self.edges {
            s.push_str("edge ");
            s.push_str(&e.id);
            s.push(' ');
            s.push_str(&self.vertex_ids[e.src]);
            s.push(' ');
            s.push_str(&self.vertex_ids[e.dst]);
            s.push('\n');
        }
        s
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, v: VertexIx) -> &str {
        &self.vertex_ids[v]
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }

    pub fn vertex_ix(&self, id: &str) -> Result<VertexIx> {
        self.vertex_lookup.get(id).copied().ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    pub fn edge(&self, e: EdgeIx) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_ix(&self, id: &str) -> Result<EdgeIx> {
        self.edge_lookup.get(id).copied().ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    pub fn out_degree(&self, v: VertexIx) -> usize {
        self.out[v].len()
    }

    pub fn out_edges(&self, v: VertexIx) -> &[EdgeIx] {
        &self.out[v]
    }

    pub fn edges_into(&self, v: VertexIx) -> &[EdgeIx] {
        &self.into[v]
    }

    pub fn stamp(&self) -> u64 {
        self.stamp
    }

    /// Range of a path: target of its last edge, or the base when empty.
    pub fn range_of(&self, p: &Path) -> VertexIx {
        p.edges.last().map(|&e| self.edges[e].dst).unwrap_or(p.base)
    }

    /// Check composability: first edge leaves the base, consecutive edges chain.
    pub fn check_path(&self, p: &Path) -> Result<()> {
        if p.base >= self.n_vertices() {
            return Err(Error::InvalidPath("base vertex out of range".into()));
        }
        let mut at = p.base;
        for &e in &p.edges {
            let edge = self.edges.get(e).ok_or_else(|| Error::InvalidPath("edge out of range".into()))?;
            if edge.src != at {
                return Err(Error::InvalidPath(format!(
                    "edge `{}` does not start at `{}`",
                    edge.id, self.vertex_ids[at]
                )));
            }
            at = edge.dst;
        }
        Ok(())
    }

    /// Concatenate composable paths (r(a) must equal base of b).
    pub fn concat(&self, a: &Path, b: &Path) -> Path {
        debug_assert_eq!(self.range_of(a), b.base);
        let mut edges = a.edges.clone();
        edges.extend_from_slice(&b.edges);
        Path { base: a.base, edges }
    }

    pub fn check_walk(&self, w: &Walk) -> Result<()> {
        if w.base >= self.n_vertices() {
            return Err(Error::InvalidPath("base vertex out of range".into()));
        }
        let mut at = w.base;
        for &(e, dir) in &w.steps {
            let edge = self.edges.get(e).ok_or_else(|| Error::InvalidPath("edge out of range".into()))?;
            let (s, r) = match dir {
                Dir::Forward => (edge.src, edge.dst),
                Dir::Star => (edge.dst, edge.src),
            };
            if s != at {
                return Err(Error::InvalidPath(format!("step `{}` does not start at `{}`", edge.id, self.vertex_ids[at])));
            }
            at = r;
        }
        Ok(())
    }

    /// Some walk from u to v, if one exists (BFS over forward and starred
    /// steps). Two vertices are connected exactly when a walk joins them.
    pub fn find_walk(&self, u: VertexIx, v: VertexIx) -> Option<Walk> {
        let mut prev: Vec<Option<(VertexIx, EdgeIx, Dir)>> = vec![None; self.n_vertices()];
        let mut seen = vec![false; self.n_vertices()];
        let mut queue = VecDeque::new();
        seen[u] = true;
        queue.push_back(u);
        while let Some(x) = queue.pop_front() {
            if x == v {
                let mut steps = Vec::new();
                let mut at = v;
                while at != u {
                    let (from, e, dir) = prev[at].unwrap();
                    steps.push((e, dir));
                    at = from;
                }
                steps.reverse();
                return Some(Walk { base: u, steps });
            }
            for &e in &self.out[x] {
                let y = self.edges[e].dst;
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, e, Dir::Forward));
                    queue.push_back(y);
                }
            }
            for &e in &self.into[x] {
                let y = self.edges[e].src;
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, e, Dir::Star));
                    queue.push_back(y);
                }
            }
        }
        None
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n_vertices()];
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(0);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &e in self.out[x].iter().chain(self.into[x].iter()) {
                let edge = &self.edges[e];
                for y in [edge.src, edge.dst] {
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        count == self.n_vertices()
    }

    /// Some cycle if the graph has one (any out-degree). Deterministic: DFS in
    /// declaration order, reported cycle rotated to start at its smallest
    /// vertex index.
    pub fn find_cycle(&self) -> Option<Cycle> {
        // colors: 0 unseen, 1 on stack, 2 done
        let mut color = vec![0u8; self.n_vertices()];
        let mut stack: Vec<(VertexIx, usize)> = Vec::new();
        let mut trail: Vec<EdgeIx> = Vec::new();
        for start in 0..self.n_vertices() {
            if color[start] != 0 {
                continue;
            }
            color[start] = 1;
            stack.push((start, 0));
            trail.clear();
            loop {
                let Some(&(v, next)) = stack.last() else { break };
                if next < self.out[v].len() {
                    let e = self.out[v][next];
                    stack.last_mut().unwrap().1 += 1;
                    let w = self.edges[e].dst;
                    match color[w] {
                        0 => {
                            color[w] = 1;
                            trail.push(e);
                            stack.push((w, 0));
                        }
                        1 => {
                            // back edge closes a cycle: e plus the trail from w to v
                            let mut edges = vec![e];
                            let pos = stack.iter().position(|&(x, _)| x == w).unwrap();
                            // trail[i] leads from stack[i].0 to stack[i+1].0
                            edges.splice(0..0, trail[pos..].iter().copied());
                            return Some(self.rotate_cycle(Path { base: w, edges }));
                        }
                        _ => {}
                    }
                } else {
                    stack.pop();
                    trail.pop();
                    color[v] = 2;
                }
            }
        }
        None
    }

    fn rotate_cycle(&self, p: Path) -> Cycle {
        let sources: Vec<VertexIx> = {
            let mut at = p.base;
            p.edges
                .iter()
                .map(|&e| {
                    let s = at;
                    at = self.edges[e].dst;
                    s
                })
                .collect()
        };
        let min_pos = (0..sources.len()).min_by_key(|&i| sources[i]).unwrap();
        let mut edges = p.edges[min_pos..].to_vec();
        edges.extend_from_slice(&p.edges[..min_pos]);
        Cycle { path: Path { base: sources[min_pos], edges } }
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// Full report; never fails.
    pub fn validate(&self) -> ValidationReport {
        let connected = self.is_connected();
        let max_out_degree = (0..self.n_vertices()).map(|v| self.out_degree(v)).max().unwrap_or(0);
        let sinks = (0..self.n_vertices())
            .filter(|&v| self.out_degree(v) == 0)
            .map(|v| self.vertex_ids[v].clone())
            .collect();
        let cycle = self.find_cycle().map(|c| CycleDesc {
            edges: c.path.edges.iter().map(|&e| self.edges[e].id.clone()).collect(),
            length: c.len(),
        });
        ValidationReport {
            connected,
            max_out_degree,
            sinks,
            cycle,
            classifier_scope: connected && max_out_degree <= 1,
        }
    }

    pub fn require_scope(&self) -> Result<()> {
        let max_out = (0..self.n_vertices()).map(|v| self.out_degree(v)).max().unwrap_or(0);
        if max_out > 1 {
            return Err(Error::OutOfScope(format!(
                "out-degree {max_out} > 1; the classification covers connected graphs of out-degree at most 1"
            )));
        }
        if !self.is_connected() {
            return Err(Error::OutOfScope("graph is not connected".into()));
        }
        Ok(())
    }

    /// The representative cycle of a connected out-degree-at-most-1 graph
    /// (cyclic conjugates collapse to the rotation starting at the smallest
    /// vertex index), or None for a tree.
    pub fn unique_cycle(&self) -> Result<Option<Cycle>> {
        self.require_scope()?;
        Ok(self.find_cycle())
    }

    /// The unique sink if the graph is a tree, None if it has a cycle.
    pub fn unique_sink(&self) -> Result<Option<VertexIx>> {
        self.require_scope()?;
        Ok((0..self.n_vertices()).find(|&v| self.out_degree(v) == 0))
    }

    /// The cycle rotated to start at `v0`; `v0` must lie on it.
    pub fn cycle_at(&self, v0: VertexIx) -> Result<Path> {
        let cycle = self
            .unique_cycle()?
            .ok_or_else(|| Error::BadBase(self.vertex_id(v0).to_string()))?;
        let p = cycle.path;
        let mut at = p.base;
        for i in 0..p.edges.len() {
            if at == v0 {
                let mut edges = p.edges[i..].to_vec();
                edges.extend_from_slice(&p.edges[..i]);
                return Ok(Path { base: v0, edges });
            }
            at = self.edges[p.edges[i]].dst;
        }
        Err(Error::BadBase(self.vertex_id(v0).to_string()))
    }

    fn check_base(&self, v0: VertexIx) -> Result<Option<Cycle>> {
        match self.unique_cycle()? {
            None => {
                let sink = (0..self.n_vertices()).find(|&v| self.out_degree(v) == 0).unwrap();
                if v0 != sink {
                    return Err(Error::BadBase(self.vertex_id(v0).to_string()));
                }
                Ok(None)
            }
            Some(c) => {
                let mut at = c.path.base;
                let mut on_cycle = false;
                for &e in &c.path.edges {
                    if at == v0 {
                        on_cycle = true;
                    }
                    at = self.edges[e].dst;
                }
                if !on_cycle {
                    return Err(Error::BadBase(self.vertex_id(v0).to_string()));
                }
                Ok(Some(c))
            }
        }
    }

    /// All paths ending at `v0` in the pruned graph (the edge leaving `v0`
    /// removed, if any): exactly one per vertex, ordered by (length, source
    /// index). The path from `v0` itself is empty.
    pub fn base_paths(&self, v0: VertexIx) -> Result<Vec<Path>> {
        self.check_base(v0)?;
        let mut paths = Vec::with_capacity(self.n_vertices());
        for v in 0..self.n_vertices() {
            let mut edges = Vec::new();
            let mut at = v;
            while at != v0 {
                let e = *self.out[at].first().ok_or_else(|| {
                    Error::BadBase(format!(
                        "`{}` does not reach `{}`",
                        self.vertex_id(v),
                        self.vertex_id(v0)
                    ))
                })?;
                edges.push(e);
                at = self.edges[e].dst;
                if edges.len() > self.n_vertices() {
                    return Err(Error::BadBase(format!(
                        "`{}` does not reach `{}`",
                        self.vertex_id(v),
                        self.vertex_id(v0)
                    )));
                }
            }
            paths.push(Path { base: v, edges });
        }
        paths.sort_by_key(|p| (p.len(), p.base));
        Ok(paths)
    }

    /// Length mod s of the unique pruned-graph path from `v` to `v0`, where s
    /// is the cycle length; m mod 0 is m itself (tree case).
    pub fn relative_depth(&self, v0: VertexIx, v: VertexIx) -> Result<usize> {
        let s = self.check_base(v0)?.map(|c| c.len()).unwrap_or(0);
        let paths = self.base_paths(v0)?;
        let len = paths.iter().find(|p| p.base == v).unwrap().len();
        Ok(if s == 0 { len } else { len % s })
    }

    /// True when every edge source along `p` has out-degree 1; empty paths
    /// qualify.
    pub fn is_ne_path(&self, p: &Path) -> bool {
        p.edges.iter().all(|&e| self.out_degree(self.edges[e].src) == 1)
    }

    /// All paths in the graph; `cap` bounds the length (must be Some for a
    /// cyclic graph, is ignored for an acyclic one only in the sense that any
    /// bound at least the longest path changes nothing).
    pub fn all_paths(&self, cap: Option<usize>) -> Vec<Path> {
        let mut all = Vec::new();
        for v in 0..self.n_vertices() {
            let mut frontier = vec![Path::empty(v)];
            all.push(Path::empty(v));
            let mut len = 0;
            while !frontier.is_empty() {
                if let Some(c) = cap {
                    if len >= c {
                        break;
                    }
                }
                len += 1;
                let mut next = Vec::new();
                for p in &frontier {
                    let at = self.range_of(p);
                    for &e in &self.out[at] {
                        let mut edges = p.edges.clone();
                        edges.push(e);
                        let q = Path { base: v, edges };
                        all.push(q.clone());
                        next.push(q);
                    }
                }
                frontier = next;
                if cap.is_none() && len > self.n_edges() + 1 && !frontier.is_empty() {
                    // Unbounded growth means a cycle; callers must cap cyclic graphs.
                    panic!("all_paths called without a cap on a cyclic graph");
                }
            }
        }
        all
    }
}
