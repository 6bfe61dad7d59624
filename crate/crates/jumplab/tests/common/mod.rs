//! Seeded random generators shared by the acceptance criteria.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jumplab::graph::{EdgeId, MultiGraph};
use jumplab::green::ResistanceAssignment;
use jumplab::jump::SectionDivisor;
use jumplab::labels::{BoundaryBasis, Label, LabelledGraph, OrderVector};
use jumplab::ratlin::frac;
use jumplab::VertexId;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn basis(rank: usize) -> BoundaryBasis {
    BoundaryBasis::new((1..=rank).map(|i| format!("Z{i}")).collect()).unwrap()
}

/// Random connected multigraph: a spanning tree plus extra edges, loops and
/// parallels included.
pub fn random_connected_graph(
    rng: &mut ChaCha8Rng,
    max_vertices: usize,
    max_edges: usize,
) -> MultiGraph {
    let n = rng.random_range(2..=max_vertices);
    let mut ends = Vec::new();
    for v in 1..n {
        ends.push((rng.random_range(0..v), v));
    }
    let extra = rng.random_range(0..=max_edges.saturating_sub(ends.len()));
    for _ in 0..extra {
        ends.push((rng.random_range(0..n), rng.random_range(0..n)));
    }
    MultiGraph::from_edges(n, &ends)
}

pub fn random_positive_resistances(rng: &mut ChaCha8Rng, g: &MultiGraph) -> ResistanceAssignment {
    ResistanceAssignment::new(
        g.edge_ids()
            .map(|e| (e, frac(rng.random_range(1..12), rng.random_range(1..9))))
            .collect(),
    )
    .unwrap()
}

pub fn random_nonzero_label(rng: &mut ChaCha8Rng, rank: usize, max_exp: u64) -> Label {
    loop {
        let exps: Vec<u64> = (0..rank).map(|_| rng.random_range(0..=max_exp)).collect();
        if exps.iter().any(|&a| a > 0) {
            return Label::new(exps);
        }
    }
}

/// Random canonical labelled graph over `Z1..Zr`, connected.
pub fn random_labelled_graph(
    rng: &mut ChaCha8Rng,
    rank: usize,
    max_vertices: usize,
    max_edges: usize,
    max_exp: u64,
) -> LabelledGraph {
    let g = random_connected_graph(rng, max_vertices, max_edges);
    let labels: BTreeMap<EdgeId, Label> = g
        .edge_ids()
        .map(|e| (e, random_nonzero_label(rng, rank, max_exp)))
        .collect();
    LabelledGraph::new(g, basis(rank), labels).unwrap()
}

/// Random aligned labelled graph: within every multi-edge block all labels
/// are positive multiples of one base direction; bridges and loops carry
/// arbitrary nonzero labels.
pub fn random_aligned_labelled_graph(
    rng: &mut ChaCha8Rng,
    rank: usize,
    max_vertices: usize,
    max_edges: usize,
) -> LabelledGraph {
    let g = random_connected_graph(rng, max_vertices, max_edges);
    let decomposition = g.biconnected_blocks().unwrap();
    let mut labels: BTreeMap<EdgeId, Label> = BTreeMap::new();
    for block in &decomposition.blocks {
        if block.edges.len() >= 2 {
            let base = random_nonzero_label(rng, rank, 3);
            for &e in &block.edges {
                let k = rng.random_range(1..=3u64);
                labels.insert(
                    e,
                    Label::new(base.exponents().iter().map(|&a| a * k).collect()),
                );
            }
        } else {
            labels.insert(block.edges[0], random_nonzero_label(rng, rank, 3));
        }
    }
    LabelledGraph::new(g, basis(rank), labels).unwrap()
}

pub fn random_degree_zero_divisor(rng: &mut ChaCha8Rng, vertex_count: usize) -> SectionDivisor {
    let mut supports = Vec::new();
    let mut total = 0i64;
    for _ in 0..rng.random_range(1..4usize) {
        let c = rng.random_range(-3..=3i64);
        total += c;
        supports.push((VertexId(rng.random_range(0..vertex_count)), c));
    }
    supports.push((VertexId(rng.random_range(0..vertex_count)), -total));
    SectionDivisor::new(supports)
}

pub fn random_orders(rng: &mut ChaCha8Rng, rank: usize, max_order: u64) -> OrderVector {
    OrderVector::new((0..rank).map(|_| rng.random_range(0..=max_order)).collect())
}
