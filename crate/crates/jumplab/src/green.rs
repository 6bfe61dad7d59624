//! Green's functions of resistive networks, exact over the rationals.
//!
//! `gr(G, mu; X, Y) = X^T L+ Y` with `L+` the Moore-Penrose pseudoinverse
//! of the network Laplacian. Improper networks (edges of resistance zero)
//! are handled by contracting the zero edges and pushing the vertex
//! weightings forward; if everything contracts to a point the value is 0.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::graph::{EdgeId, MultiGraph, VertexId};
use crate::ratlin::{laplacian, laplacian_pseudoinverse, RatMatrix, Rational};
use crate::{Error, Result};

/// Rational vertex weighting; the total degree is cached at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CombinatorialDivisor {
    weights: Vec<Rational>,
    degree: Rational,
}

impl CombinatorialDivisor {
    pub fn new(weights: Vec<Rational>) -> Self {
        let degree = weights.iter().sum();
        CombinatorialDivisor { weights, degree }
    }

    pub fn zero(vertex_count: usize) -> Self {
        Self::new(vec![Rational::zero(); vertex_count])
    }

    /// The divisor `1_u - 1_v`; zero when `u == v`.
    pub fn point_difference(vertex_count: usize, u: VertexId, v: VertexId) -> Result<Self> {
        for w in [u, v] {
            if w.0 >= vertex_count {
                return Err(Error::UnknownVertex(w));
            }
        }
        let mut weights = vec![Rational::zero(); vertex_count];
        weights[u.0] = &weights[u.0] + Rational::from_integer(1.into());
        weights[v.0] = &weights[v.0] - Rational::from_integer(1.into());
        Ok(Self::new(weights))
    }

    pub fn from_integer_weights(vertex_count: usize, supports: &[(VertexId, i64)]) -> Result<Self> {
        let mut weights = vec![Rational::zero(); vertex_count];
        for &(v, c) in supports {
            if v.0 >= vertex_count {
                return Err(Error::UnknownVertex(v));
            }
            weights[v.0] = &weights[v.0] + Rational::from_integer(c.into());
        }
        Ok(Self::new(weights))
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn degree(&self) -> &Rational {
        &self.degree
    }

    pub fn is_degree_zero(&self) -> bool {
        self.degree.is_zero()
    }
}

/// Nonnegative resistance per edge; proper when all are positive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResistanceAssignment {
    mu: BTreeMap<EdgeId, Rational>,
}

impl ResistanceAssignment {
    pub fn new(mu: BTreeMap<EdgeId, Rational>) -> Result<Self> {
        for (&e, r) in &mu {
            if r.is_negative() {
                return Err(Error::NegativeResistance(e));
            }
        }
        Ok(ResistanceAssignment { mu })
    }

    pub fn get(&self, e: EdgeId) -> Option<&Rational> {
        self.mu.get(&e)
    }

    pub fn map(&self) -> &BTreeMap<EdgeId, Rational> {
        &self.mu
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, &Rational)> {
        self.mu.iter().map(|(&e, r)| (e, r))
    }

    pub fn is_proper(&self) -> bool {
        self.mu.values().all(Rational::is_positive)
    }

    /// Scales every resistance by a nonnegative factor.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        let mu = self.mu.iter().map(|(&e, r)| (e, r * factor)).collect();
        Self::new(mu)
    }
}

/// Green's function value plus input metadata. Inputs of nonzero total
/// degree are legal for the pseudoinverse formula but fall outside the
/// geometric reading, so the flag records whether both degrees were zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GreenEvaluation {
    pub value: Rational,
    pub degree_zero_inputs: bool,
}

/// Prepared evaluator for one network: contracts the zero-resistance
/// edges, builds the contracted Laplacian pseudoinverse once, and then
/// evaluates arbitrarily many divisor pairs.
pub struct GreenSolver {
    vertex_map: Vec<VertexId>,
    pinv: RatMatrix,
}

impl GreenSolver {
    pub fn new(g: &MultiGraph, mu: &ResistanceAssignment) -> Result<Self> {
        for e in g.edge_ids() {
            if mu.get(e).is_none() {
                return Err(Error::UnknownEdge(e));
            }
        }
        if !g.is_connected() {
            return Err(Error::DisconnectedNetwork);
        }
        let zero_edges: BTreeSet<EdgeId> = g
            .edge_ids()
            .filter(|&e| mu.get(e).is_some_and(Rational::is_zero))
            .collect();
        let cr = g.contract(&zero_edges)?;
        let surviving_mu: BTreeMap<EdgeId, Rational> = cr
            .surviving_edges
            .keys()
            .map(|&e| (e, mu.get(e).expect("covered above").clone()))
            .collect();
        let l = laplacian(&cr.quotient, &surviving_mu)?;
        let pinv = laplacian_pseudoinverse(&l)?;
        Ok(GreenSolver {
            vertex_map: cr.vertex_map,
            pinv,
        })
    }

    pub fn quotient_size(&self) -> usize {
        self.pinv.rows()
    }

    fn push(&self, d: &CombinatorialDivisor) -> Vec<Rational> {
        assert_eq!(
            d.len(),
            self.vertex_map.len(),
            "divisor indexed by a different vertex set"
        );
        let mut out = vec![Rational::zero(); self.quotient_size()];
        for (v, w) in d.weights().iter().enumerate() {
            let q = self.vertex_map[v].0;
            out[q] = &out[q] + w;
        }
        out
    }

    pub fn evaluate(&self, x: &CombinatorialDivisor, y: &CombinatorialDivisor) -> GreenEvaluation {
        let xq = self.push(x);
        let yq = self.push(y);
        GreenEvaluation {
            value: self.pinv.bilinear(&xq, &yq),
            degree_zero_inputs: x.is_degree_zero() && y.is_degree_zero(),
        }
    }
}

/// One-shot Green's function `gr(G, mu; X, Y)`.
pub fn green(
    g: &MultiGraph,
    mu: &ResistanceAssignment,
    x: &CombinatorialDivisor,
    y: &CombinatorialDivisor,
) -> Result<GreenEvaluation> {
    Ok(GreenSolver::new(g, mu)?.evaluate(x, y))
}

/// Effective resistance between `u` and `v` computed block by block along
/// the block-cut-tree path; agrees with `green(g, mu, 1_u - 1_v, 1_u - 1_v)`.
pub fn green_block_additive(
    g: &MultiGraph,
    mu: &ResistanceAssignment,
    u: VertexId,
    v: VertexId,
) -> Result<Rational> {
    for w in [u, v] {
        if w.0 >= g.vertex_count() {
            return Err(Error::UnknownVertex(w));
        }
    }
    if u == v {
        return Ok(Rational::zero());
    }
    let decomposition = g.biconnected_blocks()?;
    let blocks = &decomposition.blocks;

    // BFS over the block-cut incidence graph: nodes are vertices and blocks.
    let n = g.vertex_count();
    let total = n + blocks.len();
    let node_of_block = |b: usize| n + b;
    let mut prev: Vec<Option<usize>> = vec![None; total];
    let mut queue = std::collections::VecDeque::from([u.0]);
    prev[u.0] = Some(u.0);
    'bfs: while let Some(node) = queue.pop_front() {
        let neighbours: Vec<usize> = if node < n {
            decomposition
                .blocks_containing(VertexId(node))
                .iter()
                .map(|&b| node_of_block(b))
                .collect()
        } else {
            blocks[node - n].vertices.iter().map(|w| w.0).collect()
        };
        for next in neighbours {
            if prev[next].is_none() {
                prev[next] = Some(node);
                if next == v.0 {
                    break 'bfs;
                }
                queue.push_back(next);
            }
        }
    }
    let mut path = vec![v.0];
    let mut node = v.0;
    while node != u.0 {
        node = prev[node].expect("u and v are connected");
        path.push(node);
    }
    path.reverse();

    // path alternates vertex, block, vertex, ...
    let mut total_resistance = Rational::zero();
    for window in path.windows(3).step_by(2) {
        let (enter, block_node, exit) = (window[0], window[1], window[2]);
        let block = &blocks[block_node - n];
        // reindex the block as its own network
        let position: BTreeMap<VertexId, usize> = block
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &w)| (w, i))
            .collect();
        let mut sub = MultiGraph::new(block.vertices.len());
        let mut sub_mu = BTreeMap::new();
        for &e in &block.edges {
            let (a, b) = g.endpoints(e)?;
            let id = sub.add_edge(VertexId(position[&a]), VertexId(position[&b]));
            sub_mu.insert(id, mu.get(e).ok_or(Error::UnknownEdge(e))?.clone());
        }
        let x = CombinatorialDivisor::point_difference(
            sub.vertex_count(),
            VertexId(position[&VertexId(enter)]),
            VertexId(position[&VertexId(exit)]),
        )?;
        let term = green(&sub, &ResistanceAssignment::new(sub_mu)?, &x, &x)?;
        total_resistance = &total_resistance + &term.value;
    }
    Ok(total_resistance)
}
