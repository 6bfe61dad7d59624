//! Undirected multigraphs with loops, contraction, connectivity,
//! biconnected decomposition, simple-cycle enumeration and the
//! spanning-tree / 2-forest effective-resistance oracle.
//!
//! Vertex order is stable and determines matrix indexing everywhere else in
//! the crate. Edge ids survive contraction unchanged.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::ratlin::{RatMatrix, Rational};
use crate::{Error, Result};

/// Edge bound for the spanning-subforest oracle.
pub const DEFAULT_ORACLE_ENUM_BOUND: usize = 10;
/// Edge bound for simple-cycle enumeration.
pub const DEFAULT_CYCLE_ENUM_BOUND: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Undirected multigraph; loops and parallel edges allowed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiGraph {
    vertex_count: usize,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    next_edge_id: usize,
}

impl MultiGraph {
    pub fn new(vertex_count: usize) -> Self {
        MultiGraph {
            vertex_count,
            edges: BTreeMap::new(),
            next_edge_id: 0,
        }
    }

    /// Builds a graph with edges numbered `e0, e1, ...` in slice order.
    pub fn from_edges(vertex_count: usize, ends: &[(usize, usize)]) -> Self {
        let mut g = Self::new(vertex_count);
        for &(u, v) in ends {
            g.add_edge(VertexId(u), VertexId(v));
        }
        g
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        assert!(
            u.0 < self.vertex_count && v.0 < self.vertex_count,
            "endpoint out of range"
        );
        let id = EdgeId(self.next_edge_id);
        self.next_edge_id += 1;
        self.edges.insert(id, (u, v));
        id
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count).map(VertexId)
    }

    /// Edges in id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(&e, &(u, v))| (e, u, v))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(VertexId, VertexId)> {
        self.edges.get(&e).copied().ok_or(Error::UnknownEdge(e))
    }

    pub fn is_loop(&self, e: EdgeId) -> Result<bool> {
        self.endpoints(e).map(|(u, v)| u == v)
    }

    // Incidence lists; a loop contributes one entry (e, v) at its vertex.
    pub(crate) fn adjacency(&self) -> Vec<Vec<(EdgeId, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (&e, &(u, v)) in &self.edges {
            if u == v {
                adj[u.0].push((e, v.0));
            } else {
                adj[u.0].push((e, v.0));
                adj[v.0].push((e, u.0));
            }
        }
        adj
    }

    /// Vertex partition into connected components, ordered by smallest
    /// member; loops are irrelevant.
    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut parts = Vec::new();
        for s in 0..self.vertex_count {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![VertexId(s)];
            let mut queue = vec![s];
            while let Some(v) = queue.pop() {
                for &(_, w) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(VertexId(w));
                        queue.push(w);
                    }
                }
            }
            comp.sort();
            parts.push(comp);
        }
        parts
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Contracts `edge_set`: endpoints of contracted edges are identified,
    /// contracted edges disappear, parallel edges that become loops are
    /// kept. Quotient vertices are numbered by first occurrence in the
    /// original order; surviving edges keep their ids.
    pub fn contract(&self, edge_set: &BTreeSet<EdgeId>) -> Result<ContractionResult> {
        for &e in edge_set {
            if !self.contains_edge(e) {
                return Err(Error::UnknownEdge(e));
            }
        }
        let mut uf = UnionFind::new(self.vertex_count);
        for &e in edge_set {
            let (u, v) = self.edges[&e];
            uf.union(u.0, v.0);
        }
        let mut index_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut vertex_map = Vec::with_capacity(self.vertex_count);
        for v in 0..self.vertex_count {
            let root = uf.find(v);
            let next = index_of_root.len();
            let idx = *index_of_root.entry(root).or_insert(next);
            vertex_map.push(VertexId(idx));
        }
        let mut quotient_edges = BTreeMap::new();
        let mut surviving_edges = BTreeMap::new();
        for (&e, &(u, v)) in &self.edges {
            if edge_set.contains(&e) {
                continue;
            }
            quotient_edges.insert(e, (vertex_map[u.0], vertex_map[v.0]));
            surviving_edges.insert(e, e);
        }
        let quotient = MultiGraph {
            vertex_count: index_of_root.len(),
            edges: quotient_edges,
            next_edge_id: self.next_edge_id,
        };
        Ok(ContractionResult {
            quotient,
            vertex_map,
            surviving_edges,
        })
    }

    /// Biconnected decomposition of a connected graph. Bridges are
    /// singleton blocks; every loop is its own singleton block attached at
    /// its vertex.
    pub fn biconnected_blocks(&self) -> Result<BlockDecomposition> {
        if !self.is_connected() {
            return Err(Error::DisconnectedNetwork);
        }
        Ok(self.block_forest())
    }

    // Same decomposition without the connectivity requirement.
    pub(crate) fn block_forest(&self) -> BlockDecomposition {
        let adj = self.adjacency();
        let n = self.vertex_count;
        let mut disc: Vec<Option<u32>> = vec![None; n];
        let mut low = vec![0u32; n];
        let mut timer = 0u32;
        let mut stack: Vec<EdgeId> = Vec::new();
        let mut edge_blocks: Vec<Vec<EdgeId>> = Vec::new();

        struct Dfs<'a> {
            adj: &'a [Vec<(EdgeId, usize)>],
            disc: &'a mut Vec<Option<u32>>,
            low: &'a mut Vec<u32>,
            timer: &'a mut u32,
            stack: &'a mut Vec<EdgeId>,
            blocks: &'a mut Vec<Vec<EdgeId>>,
        }

        fn visit(s: &mut Dfs<'_>, u: usize, parent_edge: Option<EdgeId>) {
            s.disc[u] = Some(*s.timer);
            s.low[u] = *s.timer;
            *s.timer += 1;
            for &(e, w) in &s.adj[u] {
                if w == u || Some(e) == parent_edge {
                    continue; // loops handled separately; skip the tree edge once
                }
                match s.disc[w] {
                    None => {
                        s.stack.push(e);
                        visit(s, w, Some(e));
                        s.low[u] = s.low[u].min(s.low[w]);
                        if s.low[w] >= s.disc[u].unwrap() {
                            let mut block = Vec::new();
                            while let Some(top) = s.stack.pop() {
                                block.push(top);
                                if top == e {
                                    break;
                                }
                            }
                            s.blocks.push(block);
                        }
                    }
                    Some(dw) if dw < s.disc[u].unwrap() => {
                        // back edge (including parallels of the tree edge)
                        s.stack.push(e);
                        s.low[u] = s.low[u].min(dw);
                    }
                    _ => {} // already collected from the other endpoint
                }
            }
        }

        let mut dfs = Dfs {
            adj: &adj,
            disc: &mut disc,
            low: &mut low,
            timer: &mut timer,
            stack: &mut stack,
            blocks: &mut edge_blocks,
        };
        for root in 0..n {
            if dfs.disc[root].is_none() {
                visit(&mut dfs, root, None);
            }
        }
        for (&e, &(u, v)) in &self.edges {
            if u == v {
                edge_blocks.push(vec![e]);
            }
        }

        let mut blocks = Vec::with_capacity(edge_blocks.len());
        for mut edges in edge_blocks {
            edges.sort();
            let mut vertices: BTreeSet<VertexId> = BTreeSet::new();
            for &e in &edges {
                let (u, v) = self.edges[&e];
                vertices.insert(u);
                vertices.insert(v);
            }
            blocks.push(Block {
                edges,
                vertices: vertices.into_iter().collect(),
            });
        }
        let mut blocks_of_vertex = vec![Vec::new(); n];
        for (i, b) in blocks.iter().enumerate() {
            for &v in &b.vertices {
                blocks_of_vertex[v.0].push(i);
            }
        }
        let mut cut_vertices = Vec::new();
        for (v, members) in blocks_of_vertex.iter().enumerate() {
            let non_loop = members
                .iter()
                .filter(|&&i| !blocks[i].is_loop_block())
                .count();
            if non_loop >= 2 {
                cut_vertices.push(VertexId(v));
            }
        }
        BlockDecomposition {
            blocks,
            cut_vertices,
            blocks_of_vertex,
        }
    }

    /// Enumerates simple cycles as edge sequences, each exactly once up to
    /// rotation and reflection. Loops are 1-edge cycles, parallel pairs are
    /// 2-edge cycles.
    pub fn cycles(&self, max_edges: usize) -> Result<Vec<Vec<EdgeId>>> {
        let m = self.edge_count();
        if m > max_edges {
            return Err(Error::TooLargeForEnumeration {
                edges: m,
                bound: max_edges,
            });
        }
        let mut out: Vec<Vec<EdgeId>> = Vec::new();
        for (e, u, v) in self.edges() {
            if u == v {
                out.push(vec![e]);
            }
        }
        let adj = self.adjacency();
        let n = self.vertex_count;
        let mut seen: BTreeSet<Vec<EdgeId>> = BTreeSet::new();

        struct Search<'a> {
            adj: &'a [Vec<(EdgeId, usize)>],
            anchor: usize,
            visited: Vec<bool>,
            path: Vec<EdgeId>,
            on_path: BTreeSet<EdgeId>,
            seen: &'a mut BTreeSet<Vec<EdgeId>>,
            out: &'a mut Vec<Vec<EdgeId>>,
        }

        fn extend(s: &mut Search<'_>, v: usize) {
            for &(e, w) in &s.adj[v] {
                if w == v || w < s.anchor || s.on_path.contains(&e) {
                    continue;
                }
                if w == s.anchor {
                    if !s.path.is_empty() {
                        let mut cycle = s.path.clone();
                        cycle.push(e);
                        let mut key = cycle.clone();
                        key.sort();
                        if s.seen.insert(key) {
                            s.out.push(cycle);
                        }
                    }
                    continue;
                }
                if s.visited[w] {
                    continue;
                }
                s.visited[w] = true;
                s.path.push(e);
                s.on_path.insert(e);
                extend(s, w);
                s.on_path.remove(&e);
                s.path.pop();
                s.visited[w] = false;
            }
        }

        for anchor in 0..n {
            let mut search = Search {
                adj: &adj,
                anchor,
                visited: vec![false; n],
                path: Vec::new(),
                on_path: BTreeSet::new(),
                seen: &mut seen,
                out: &mut out,
            };
            search.visited[anchor] = true;
            extend(&mut search, anchor);
        }
        Ok(out)
    }

    /// Finds a simple cycle through the two distinct non-loop edges, using
    /// only edges from `allowed`, via two vertex-disjoint augmenting paths.
    /// Returns `None` when no such cycle exists.
    pub(crate) fn cycle_through_edges(
        &self,
        allowed: &BTreeSet<EdgeId>,
        e1: EdgeId,
        e2: EdgeId,
    ) -> Option<Vec<EdgeId>> {
        let (a, b) = self.endpoints(e1).ok()?;
        let (c, d) = self.endpoints(e2).ok()?;
        if e1 == e2 || a == b || c == d {
            return None;
        }
        if (a, b) == (c, d) || (a, b) == (d, c) {
            return Some(vec![e1, e2]);
        }
        let n = self.vertex_count;
        // vertex-split flow network: in(v) = 2v, out(v) = 2v+1
        let source = 2 * n;
        let sink = 2 * n + 1;
        let mut net = FlowNet::new(2 * n + 2);
        for v in 0..n {
            net.add_arc(2 * v, 2 * v + 1, None);
        }
        net.add_arc(source, 2 * a.0, None);
        net.add_arc(source, 2 * b.0, None);
        net.add_arc(2 * c.0 + 1, sink, None);
        net.add_arc(2 * d.0 + 1, sink, None);
        for &f in allowed {
            if f == e1 || f == e2 {
                continue;
            }
            let (x, y) = self.endpoints(f).ok()?;
            if x == y {
                continue;
            }
            net.add_arc(2 * x.0 + 1, 2 * y.0, Some(f));
            net.add_arc(2 * y.0 + 1, 2 * x.0, Some(f));
        }
        if !net.augment(source, sink) || !net.augment(source, sink) {
            return None;
        }
        let path_a = net.trace(2 * a.0, sink);
        let path_b = net.trace(2 * b.0, sink);
        // closed walk: a -e1-> b -path_b-> (c|d) -e2-> (d|c) -rev path_a-> a
        let mut cycle = vec![e1];
        cycle.extend(path_b);
        cycle.push(e2);
        cycle.extend(path_a.into_iter().rev());
        Some(cycle)
    }

    /// Effective resistance between `u` and `v` as the ratio of the
    /// separating-2-forest sum to the spanning-tree sum, both weighted by
    /// products of conductances; independent of any linear algebra.
    pub fn resistance_oracle(
        &self,
        mu: &BTreeMap<EdgeId, Rational>,
        u: VertexId,
        v: VertexId,
        max_edges: usize,
    ) -> Result<Rational> {
        assert!(u != v, "resistance oracle needs distinct vertices");
        if u.0 >= self.vertex_count {
            return Err(Error::UnknownVertex(u));
        }
        if v.0 >= self.vertex_count {
            return Err(Error::UnknownVertex(v));
        }
        let all = self.resistance_oracle_all_pairs(mu, max_edges)?;
        Ok(all[(u.0, v.0)].clone())
    }

    /// All-pairs variant sharing the subset enumeration across pairs.
    pub fn resistance_oracle_all_pairs(
        &self,
        mu: &BTreeMap<EdgeId, Rational>,
        max_edges: usize,
    ) -> Result<RatMatrix> {
        let m = self.edge_count();
        if m > max_edges {
            return Err(Error::TooLargeForEnumeration {
                edges: m,
                bound: max_edges,
            });
        }
        if !self.is_connected() {
            return Err(Error::DisconnectedNetwork);
        }
        let n = self.vertex_count;
        let mut conductance = Vec::new();
        let mut ends = Vec::new();
        for (e, u, v) in self.edges() {
            let r = mu.get(&e).ok_or(Error::UnknownEdge(e))?;
            if !r.is_positive() {
                return Err(Error::NonPositiveResistance(e));
            }
            if u == v {
                continue; // loops lie in no tree or forest
            }
            conductance.push(r.recip());
            ends.push((u.0, v.0));
        }
        let k = conductance.len();
        assert!(k < usize::BITS as usize);
        let mut tree_sum = Rational::zero();
        let mut forest = RatMatrix::zeros(n, n);
        for mask in 0usize..(1 << k) {
            let size = mask.count_ones() as usize;
            let is_tree_size = size + 1 == n;
            let is_forest_size = size + 2 == n;
            if !is_tree_size && !is_forest_size {
                continue;
            }
            let mut uf = UnionFind::new(n);
            let mut acyclic = true;
            for (i, &(a, b)) in ends.iter().enumerate() {
                if mask & (1 << i) != 0 && !uf.union(a, b) {
                    acyclic = false;
                    break;
                }
            }
            if !acyclic {
                continue;
            }
            let mut product = Rational::one();
            for (i, c) in conductance.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    product = &product * c;
                }
            }
            if is_tree_size {
                tree_sum = &tree_sum + &product;
            } else {
                for x in 0..n {
                    for y in (x + 1)..n {
                        if uf.find(x) != uf.find(y) {
                            forest[(x, y)] = &forest[(x, y)] + &product;
                        }
                    }
                }
            }
        }
        if tree_sum.is_zero() {
            return Err(Error::DisconnectedNetwork);
        }
        let mut out = RatMatrix::zeros(n, n);
        for x in 0..n {
            for y in (x + 1)..n {
                let r = &forest[(x, y)] / &tree_sum;
                out[(x, y)] = r.clone();
                out[(y, x)] = r;
            }
        }
        Ok(out)
    }
}

/// Result of contracting an edge set.
#[derive(Clone, Debug)]
pub struct ContractionResult {
    pub quotient: MultiGraph,
    /// Original vertex index -> quotient vertex.
    pub vertex_map: Vec<VertexId>,
    /// Original edge id -> quotient edge id (ids are preserved).
    pub surviving_edges: BTreeMap<EdgeId, EdgeId>,
}

impl ContractionResult {
    /// Pushes a vertex weighting forward; weights of identified vertices add.
    pub fn push_weights(&self, weights: &[Rational]) -> Vec<Rational> {
        assert_eq!(weights.len(), self.vertex_map.len());
        let mut out = vec![Rational::zero(); self.quotient.vertex_count()];
        for (v, w) in weights.iter().enumerate() {
            let q = self.vertex_map[v].0;
            out[q] = &out[q] + w;
        }
        out
    }
}

/// One biconnected block: a maximal 2-vertex-connected edge set, a bridge,
/// or a single loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<VertexId>,
}

impl Block {
    pub fn is_loop_block(&self) -> bool {
        self.edges.len() == 1 && self.vertices.len() == 1
    }
}

#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
    /// True articulation points (member of at least two non-loop blocks).
    pub cut_vertices: Vec<VertexId>,
    blocks_of_vertex: Vec<Vec<usize>>,
}

impl BlockDecomposition {
    pub fn blocks_containing(&self, v: VertexId) -> &[usize] {
        &self.blocks_of_vertex[v.0]
    }

    /// Vertices shared by at least two blocks; the vertex nodes of the
    /// block-cut tree.
    pub fn junction_vertices(&self) -> Vec<VertexId> {
        self.blocks_of_vertex
            .iter()
            .enumerate()
            .filter(|(_, bs)| bs.len() >= 2)
            .map(|(v, _)| VertexId(v))
            .collect()
    }

    /// Incidence edges of the block-cut tree, as (block index, junction).
    pub fn tree_incidences(&self) -> Vec<(usize, VertexId)> {
        let junctions: BTreeSet<VertexId> = self.junction_vertices().into_iter().collect();
        let mut out = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in &b.vertices {
                if junctions.contains(&v) {
                    out.push((i, v));
                }
            }
        }
        out
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    // false if already joined
    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        self.parent[rx] = ry;
        true
    }
}

// Unit-capacity max flow, just enough for two vertex-disjoint paths.
struct FlowNet {
    arcs: Vec<FlowArc>,
    adj: Vec<Vec<usize>>,
}

struct FlowArc {
    to: usize,
    cap: u8,
    edge: Option<EdgeId>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, edge: Option<EdgeId>) {
        self.adj[from].push(self.arcs.len());
        self.arcs.push(FlowArc { to, cap: 1, edge });
        self.adj[to].push(self.arcs.len());
        self.arcs.push(FlowArc {
            to: from,
            cap: 0,
            edge,
        });
    }

    fn augment(&mut self, source: usize, sink: usize) -> bool {
        let mut prev: Vec<Option<usize>> = vec![None; self.adj.len()];
        let mut queue = std::collections::VecDeque::from([source]);
        prev[source] = Some(usize::MAX);
        while let Some(v) = queue.pop_front() {
            if v == sink {
                break;
            }
            for &ai in &self.adj[v] {
                let arc = &self.arcs[ai];
                if arc.cap > 0 && prev[arc.to].is_none() {
                    prev[arc.to] = Some(ai);
                    queue.push_back(arc.to);
                }
            }
        }
        if prev[sink].is_none() {
            return false;
        }
        let mut v = sink;
        while v != source {
            let ai = prev[v].unwrap();
            self.arcs[ai].cap -= 1;
            self.arcs[ai ^ 1].cap += 1;
            v = self.arcs[ai ^ 1].to;
        }
        true
    }

    // Follows saturated forward arcs from `start` to `sink`, collecting the
    // multigraph edges along the way.
    fn trace(&self, start: usize, sink: usize) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut v = start;
        while v != sink {
            let ai = self.adj[v]
                .iter()
                .copied()
                .find(|&ai| ai % 2 == 0 && self.arcs[ai].cap == 0)
                .expect("flow decomposes into paths");
            if let Some(e) = self.arcs[ai].edge {
                out.push(e);
            }
            v = self.arcs[ai].to;
        }
        out
    }
}
