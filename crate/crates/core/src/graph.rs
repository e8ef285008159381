//! Finite directed multigraphs and the free semigroupoid of admissible paths.
//!
//! A [`Graph`] owns its vertex and edge names; a [`Path`] is either a vertex
//! (a trivial path) or a nonempty edge sequence in which the range of each
//! edge is the source of the next. Paths are tagged with the id of the graph
//! that built them so paths from different graphs never combine silently.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static NEXT_GRAPH_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphId(u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

#[derive(Debug, Clone)]
struct EdgeData {
    name: String,
    src: VertexId,
    dst: VertexId,
}

/// A finite directed multigraph with named vertices and edges.
#[derive(Debug, Clone)]
pub struct Graph {
    id: GraphId,
    vertices: Vec<String>,
    edges: Vec<EdgeData>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
}

/// On-disk graph description: `{"vertices": [...], "edges": [{"id","src","dst"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub id: String,
    pub src: String,
    pub dst: String,
}

impl Graph {
    /// Builds a graph from vertex names and `(edge, src, dst)` triples.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Graph>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let file = GraphFile {
            vertices: vertices.into_iter().map(Into::into).collect(),
            edges: edges
                .into_iter()
                .map(|(id, src, dst)| EdgeEntry {
                    id: id.into(),
                    src: src.into(),
                    dst: dst.into(),
                })
                .collect(),
        };
        Graph::from_file(&file)
    }

    pub fn from_file(file: &GraphFile) -> Result<Graph> {
        if file.vertices.is_empty() {
            return Err(Error::InvalidGraph(
                "vertices: a graph needs at least one vertex".into(),
            ));
        }
        let mut vertex_index = HashMap::new();
        for (i, name) in file.vertices.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidGraph(format!(
                    "vertices[{i}]: empty vertex id"
                )));
            }
            if vertex_index
                .insert(name.clone(), VertexId(i as u32))
                .is_some()
            {
                return Err(Error::InvalidGraph(format!(
                    "vertices[{i}]: duplicate id '{name}'"
                )));
            }
        }
        let mut edge_index = HashMap::new();
        let mut edges = Vec::with_capacity(file.edges.len());
        for (i, entry) in file.edges.iter().enumerate() {
            if entry.id.is_empty() {
                return Err(Error::InvalidGraph(format!("edges[{i}].id: empty edge id")));
            }
            if vertex_index.contains_key(&entry.id) || edge_index.contains_key(&entry.id) {
                return Err(Error::InvalidGraph(format!(
                    "edges[{i}].id: duplicate id '{}'",
                    entry.id
                )));
            }
            let lookup = |field: &str, name: &str| {
                vertex_index.get(name).copied().ok_or_else(|| {
                    Error::InvalidGraph(format!(
                        "edges[{i}].{field}: edge '{}' references unknown vertex '{name}'",
                        entry.id
                    ))
                })
            };
            let src = lookup("src", &entry.src)?;
            let dst = lookup("dst", &entry.dst)?;
            edge_index.insert(entry.id.clone(), EdgeId(i as u32));
            edges.push(EdgeData {
                name: entry.id.clone(),
                src,
                dst,
            });
        }
        Ok(Graph {
            id: GraphId(NEXT_GRAPH_ID.fetch_add(1, AtomicOrdering::Relaxed)),
            vertices: file.vertices.clone(),
            edges,
            vertex_index,
            edge_index,
        })
    }

    /// Parses the JSON graph format, reporting line/column for malformed input.
    pub fn from_json(text: &str) -> Result<Graph> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| {
            Error::InvalidGraph(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        Graph::from_file(&file)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeEntry {
                    id: e.name.clone(),
                    src: self.vertices[e.src.0 as usize].clone(),
                    dst: self.vertices[e.dst.0 as usize].clone(),
                })
                .collect(),
        }
    }

    pub fn id(&self) -> GraphId {
        self.id
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0 as usize]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0 as usize].name
    }

    pub fn edge_source(&self, e: EdgeId) -> VertexId {
        self.edges[e.0 as usize].src
    }

    pub fn edge_range(&self, e: EdgeId) -> VertexId {
        self.edges[e.0 as usize].dst
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.src == v).count()
    }

    /// The vertex `v` as a trivial path.
    pub fn trivial(&self, v: VertexId) -> Path {
        assert!((v.0 as usize) < self.vertices.len(), "vertex out of range");
        Path {
            graph: self.id,
            src: v,
            dst: v,
            edges: Vec::new(),
        }
    }

    pub fn edge_path(&self, e: EdgeId) -> Path {
        let data = &self.edges[e.0 as usize];
        Path {
            graph: self.id,
            src: data.src,
            dst: data.dst,
            edges: vec![e],
        }
    }

    /// Builds an admissible path from an edge sequence; `Ok(None)` when the
    /// sequence does not compose head-to-tail.
    pub fn path_from_edges(&self, edges: &[EdgeId]) -> Result<Option<Path>> {
        let Some(first) = edges.first() else {
            return Err(Error::usage("an edge path needs at least one edge"));
        };
        for e in edges {
            if e.0 as usize >= self.edges.len() {
                return Err(Error::usage(format!("edge index {} out of range", e.0)));
            }
        }
        for pair in edges.windows(2) {
            if self.edge_range(pair[0]) != self.edge_source(pair[1]) {
                return Ok(None);
            }
        }
        Ok(Some(Path {
            graph: self.id,
            src: self.edge_source(*first),
            dst: self.edge_range(*edges.last().unwrap()),
            edges: edges.to_vec(),
        }))
    }

    /// Resolves a dotted name: a vertex id gives the trivial path, otherwise
    /// every segment must be a declared edge and the sequence admissible.
    pub fn parse_path(&self, dotted: &str) -> Result<Path> {
        let dotted = dotted.trim();
        if let Some(v) = self.vertex(dotted) {
            return Ok(self.trivial(v));
        }
        let mut edges = Vec::new();
        for name in dotted.split('.') {
            let name = name.trim();
            match self.edge(name) {
                Some(e) => edges.push(e),
                None if self.vertex(name).is_some() => {
                    return Err(Error::Parse(format!(
                        "vertex {name} cannot appear inside an edge word"
                    )))
                }
                None => return Err(Error::Parse(format!("unknown edge {name}"))),
            }
        }
        self.path_from_edges(&edges)?
            .ok_or_else(|| Error::Parse(format!("inadmissible word {dotted}")))
    }

    /// All admissible paths of length `1..=max_len`, ordered by length then
    /// by edge sequence.
    pub fn finite_paths(&self, max_len: usize) -> Vec<Path> {
        let mut out = Vec::new();
        let mut frontier: Vec<Path> = self.edge_ids().map(|e| self.edge_path(e)).collect();
        for _ in 0..max_len {
            if frontier.is_empty() {
                break;
            }
            out.extend(frontier.iter().cloned());
            let mut next = Vec::new();
            for p in &frontier {
                for e in self.edge_ids() {
                    if self.edge_source(e) == p.dst {
                        let mut edges = p.edges.clone();
                        edges.push(e);
                        next.push(Path {
                            graph: self.id,
                            src: p.src,
                            dst: self.edge_range(e),
                            edges,
                        });
                    }
                }
            }
            frontier = next;
        }
        out
    }

    /// Renders a path as `e1.e2`, or the vertex name for a trivial path.
    pub fn render_path(&self, p: &Path) -> String {
        if p.edges.is_empty() {
            self.vertex_name(p.src).to_string()
        } else {
            p.edges
                .iter()
                .map(|e| self.edge_name(*e))
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    pub fn check_path(&self, p: &Path) -> Result<()> {
        if p.graph != self.id {
            return Err(Error::usage("path belongs to a different graph"));
        }
        Ok(())
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Graph {}

/// An element of the free semigroupoid: a vertex or an admissible edge word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    graph: GraphId,
    src: VertexId,
    dst: VertexId,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn graph_id(&self) -> GraphId {
        self.graph
    }

    pub fn source(&self) -> VertexId {
        self.src
    }

    pub fn range(&self) -> VertexId {
        self.dst
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// A loop is a nontrivial path whose source and range coincide.
    pub fn is_loop(&self) -> bool {
        !self.edges.is_empty() && self.src == self.dst
    }

    /// `self · other`, or `Ok(None)` when `r(self) != s(other)`.
    pub fn concat(&self, other: &Path) -> Result<Option<Path>> {
        if self.graph != other.graph {
            return Err(Error::usage("cannot concatenate paths of different graphs"));
        }
        if self.dst != other.src {
            return Ok(None);
        }
        let mut edges = Vec::with_capacity(self.edges.len() + other.edges.len());
        edges.extend_from_slice(&self.edges);
        edges.extend_from_slice(&other.edges);
        Ok(Some(Path {
            graph: self.graph,
            src: self.src,
            dst: other.dst,
            edges,
        }))
    }

    /// `self^k` for a loop (`k >= 1`).
    pub fn pow(&self, k: usize) -> Result<Path> {
        if !self.is_loop() {
            return Err(Error::domain("only loops have powers"));
        }
        if k == 0 {
            return Err(Error::domain("loop powers start at 1"));
        }
        Ok(Path {
            edges: self.edges.repeat(k),
            ..self.clone()
        })
    }

    /// If `prefix` is an initial segment of `self`, the remaining tail.
    ///
    /// A trivial path `v` is a prefix of every path starting at `v`; the tail
    /// of `self` by itself is the trivial path at its range.
    pub(crate) fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        if prefix.src != self.src || prefix.edges.len() > self.edges.len() {
            return None;
        }
        if !self.edges.starts_with(&prefix.edges) {
            return None;
        }
        let rest = &self.edges[prefix.edges.len()..];
        let src = if prefix.edges.is_empty() {
            self.src
        } else {
            prefix.dst
        };
        Some(Path {
            graph: self.graph,
            src,
            dst: self.dst,
            edges: rest.to_vec(),
        })
    }

    /// Appends `tail` without re-checking admissibility; callers guarantee
    /// `r(self) == s(tail)`.
    pub(crate) fn extend_unchecked(&self, tail: &Path) -> Path {
        debug_assert_eq!(self.dst, tail.src);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&tail.edges);
        Path {
            graph: self.graph,
            src: self.src,
            dst: tail.dst,
            edges,
        }
    }

    /// Drops the final edge, given the source of that edge.
    pub(crate) fn pop_last(&mut self, new_range: VertexId) {
        self.edges.pop();
        self.dst = new_range;
        if self.edges.is_empty() {
            self.src = new_range;
        }
    }

    /// The shortest loop `w` and exponent `k` with `self = w^k`.
    pub fn primitive_root(&self) -> Result<(Path, usize)> {
        if !self.is_loop() {
            return Err(Error::domain("primitive_root expects a loop"));
        }
        let n = self.edges.len();
        for d in 1..=n {
            if !n.is_multiple_of(d) {
                continue;
            }
            let base = &self.edges[..d];
            if self.edges.chunks(d).all(|chunk| chunk == base) {
                let root = Path {
                    graph: self.graph,
                    src: self.src,
                    dst: self.src,
                    edges: base.to_vec(),
                };
                return Ok((root, n / d));
            }
        }
        unreachable!("d = n always reproduces the loop")
    }

    pub fn is_basic_loop(&self) -> Result<bool> {
        Ok(self.primitive_root()?.1 == 1)
    }
}

/// Whether two finite paths trace different diagrams: loops compare by
/// their basic-loop roots, non-loops by equality, and a loop never shares
/// a diagram with a non-loop.
pub fn diagram_distinct(w1: &Path, w2: &Path) -> Result<bool> {
    if w1.graph != w2.graph {
        return Err(Error::usage("paths belong to different graphs"));
    }
    if w1.is_trivial() || w2.is_trivial() {
        return Err(Error::domain(
            "diagram-distinctness is defined for finite paths, not vertices",
        ));
    }
    Ok(match (w1.is_loop(), w2.is_loop()) {
        (true, true) => w1.primitive_root()?.0 != w2.primitive_root()?.0,
        (false, false) => w1 != w2,
        _ => true,
    })
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.edges
            .len()
            .cmp(&other.edges.len())
            .then_with(|| self.edges.cmp(&other.edges))
            .then_with(|| self.src.cmp(&other.src))
            .then_with(|| self.dst.cmp(&other.dst))
            .then_with(|| self.graph.cmp(&other.graph))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Graphs used throughout the tests and examples.
pub mod standard {
    use super::Graph;

    /// One vertex `v` with a single loop edge `l`.
    pub fn one_loop() -> Graph {
        Graph::new(["v"], [("l", "v", "v")]).expect("valid graph")
    }

    /// `v1 --e--> v2`.
    pub fn single_edge() -> Graph {
        Graph::new(["v1", "v2"], [("e", "v1", "v2")]).expect("valid graph")
    }

    /// One vertex `v` carrying `n` loop edges `e1..en`.
    pub fn bouquet(n: usize) -> Graph {
        let edges: Vec<_> = (1..=n)
            .map(|j| (format!("e{j}"), "v".to_string(), "v".to_string()))
            .collect();
        Graph::new(["v"], edges).expect("valid graph")
    }

    /// The two-loop flower: `bouquet(2)`.
    pub fn flower() -> Graph {
        bouquet(2)
    }

    /// Vertices `v1..vn` with `ej: vj -> v(j+1)`, indices mod `n`.
    pub fn circulant(n: usize) -> Graph {
        let vertices: Vec<String> = (1..=n).map(|j| format!("v{j}")).collect();
        let edges: Vec<_> = (1..=n)
            .map(|j| (format!("e{j}"), format!("v{j}"), format!("v{}", j % n + 1)))
            .collect();
        Graph::new(vertices, edges).expect("valid graph")
    }
}

/// Collects the vertex set touched by a list of paths.
pub fn vertices_of<'a>(paths: impl IntoIterator<Item = &'a Path>) -> BTreeSet<VertexId> {
    let mut out = BTreeSet::new();
    for p in paths {
        out.insert(p.src);
        out.insert(p.dst);
    }
    out
}
