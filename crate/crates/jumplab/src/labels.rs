//! Edge labels as exponent vectors over a named boundary-divisor basis,
//! restricted labellings, specialization, test-curve pullbacks and the
//! alignment decision procedure.
//!
//! Two labels are *parallel* when some positive multiples of them agree;
//! for nonzero exponent vectors this is decided by cross-multiplication,
//! with no rational arithmetic. A labelled graph is aligned when every pair
//! of edges sharing a cycle carries parallel labels; since every cycle lies
//! inside one biconnected block and any two edges of a multi-edge block
//! share a cycle, the production path checks blocks instead of enumerating
//! cycles.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::graph::{ContractionResult, EdgeId, MultiGraph};
use crate::green::ResistanceAssignment;
use crate::ratlin::Rational;
use crate::{Error, Result};

/// Ordered list of distinct boundary-divisor names.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryBasis {
    names: Vec<String>,
}

impl BoundaryBasis {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidBasis("no divisor names".into()));
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if name.is_empty() {
                return Err(Error::InvalidBasis("empty divisor name".into()));
            }
            if !seen.insert(name) {
                return Err(Error::InvalidBasis(format!("duplicate name {name:?}")));
            }
        }
        Ok(BoundaryBasis { names })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Exponent vector of a principal-ideal label.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Label {
    exponents: Vec<u64>,
}

impl Label {
    pub fn new(exponents: Vec<u64>) -> Self {
        Label { exponents }
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    /// Indices with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, _)| i)
    }

    /// `a` is parallel to `b` when `n1 * a = n2 * b` for positive integers
    /// `n1`, `n2`; decided by `a_i b_j = a_j b_i` for all `i`, `j`.
    pub fn is_parallel_to(&self, other: &Label) -> bool {
        let a = &self.exponents;
        let b = &other.exponents;
        assert_eq!(a.len(), b.len(), "labels over different bases");
        for i in 0..a.len() {
            for j in (i + 1)..a.len() {
                if (a[i] as u128) * (b[j] as u128) != (a[j] as u128) * (b[i] as u128) {
                    return false;
                }
            }
        }
        true
    }
}

/// Nonnegative integer orders, one per basis divisor; pulls labels back to
/// resistances.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrderVector {
    orders: Vec<u64>,
}

impl OrderVector {
    pub fn new(orders: Vec<u64>) -> Self {
        OrderVector { orders }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn scaled(&self, factor: u64) -> OrderVector {
        OrderVector {
            orders: self.orders.iter().map(|&m| m * factor).collect(),
        }
    }
}

/// Alignment verdict; the negative case carries a witness cycle and the
/// offending edge pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AlignmentVerdict {
    Aligned,
    NotAligned {
        cycle: Vec<EdgeId>,
        edges: (EdgeId, EdgeId),
    },
}

impl AlignmentVerdict {
    pub fn is_aligned(&self) -> bool {
        matches!(self, AlignmentVerdict::Aligned)
    }
}

/// Multigraph with every edge labelled over a common basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LabelledGraph {
    graph: MultiGraph,
    basis: BoundaryBasis,
    labels: BTreeMap<EdgeId, Label>,
}

impl LabelledGraph {
    pub fn new(
        graph: MultiGraph,
        basis: BoundaryBasis,
        labels: BTreeMap<EdgeId, Label>,
    ) -> Result<Self> {
        for e in graph.edge_ids() {
            match labels.get(&e) {
                None => return Err(Error::UnlabelledEdge(e)),
                Some(label) if label.exponents().len() != basis.rank() => {
                    return Err(Error::BasisMismatch {
                        expected: basis.rank(),
                        got: label.exponents().len(),
                    })
                }
                _ => {}
            }
        }
        if let Some(&e) = labels.keys().find(|e| !graph.contains_edge(**e)) {
            return Err(Error::UnknownEdge(e));
        }
        Ok(LabelledGraph {
            graph,
            basis,
            labels,
        })
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn basis(&self) -> &BoundaryBasis {
        &self.basis
    }

    pub fn label(&self, e: EdgeId) -> Result<&Label> {
        self.labels.get(&e).ok_or(Error::UnknownEdge(e))
    }

    pub fn labels(&self) -> impl Iterator<Item = (EdgeId, &Label)> {
        self.labels.iter().map(|(&e, l)| (e, l))
    }

    /// Canonical form forbids all-zero labels.
    pub fn first_zero_label(&self) -> Option<EdgeId> {
        self.labels
            .iter()
            .find(|(_, l)| l.is_zero())
            .map(|(&e, _)| e)
    }

    pub fn is_canonical(&self) -> bool {
        self.first_zero_label().is_none()
    }

    /// Restricted labelling: exponents outside `keep` are zeroed, the graph
    /// is unchanged. Restricting to the full index set is the identity.
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> Result<LabelledGraph> {
        let r = self.basis.rank();
        for &i in keep {
            if i >= r {
                return Err(Error::IndexOutOfRange { index: i, size: r });
            }
        }
        let labels = self
            .labels
            .iter()
            .map(|(&e, l)| {
                let exps = l
                    .exponents()
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| if keep.contains(&i) { a } else { 0 })
                    .collect();
                (e, Label::new(exps))
            })
            .collect();
        Ok(LabelledGraph {
            graph: self.graph.clone(),
            basis: self.basis.clone(),
            labels,
        })
    }

    /// Pulls labels back along a test curve: edge `e` with exponents `a`
    /// gets resistance `sum_i a_i * m_i`.
    pub fn pullback_orders(&self, m: &OrderVector) -> Result<ResistanceAssignment> {
        if m.rank() != self.basis.rank() {
            return Err(Error::BasisMismatch {
                expected: self.basis.rank(),
                got: m.rank(),
            });
        }
        let mut mu = BTreeMap::new();
        for (&e, label) in &self.labels {
            let mut total = BigInt::from(0u32);
            for (&a, &ord) in label.exponents().iter().zip(m.orders()) {
                total += BigInt::from(a) * BigInt::from(ord);
            }
            mu.insert(e, Rational::from_integer(total));
        }
        ResistanceAssignment::new(mu)
    }

    /// Specialization towards the generic point where the divisors in
    /// `unit_set` become invertible: contracts every edge whose support
    /// lies inside `unit_set` and zeroes the `unit_set` entries of the
    /// surviving labels.
    pub fn specialize(
        &self,
        unit_set: &BTreeSet<usize>,
    ) -> Result<(LabelledGraph, ContractionResult)> {
        let r = self.basis.rank();
        for &i in unit_set {
            if i >= r {
                return Err(Error::IndexOutOfRange { index: i, size: r });
            }
        }
        let contracted: BTreeSet<EdgeId> = self
            .labels
            .iter()
            .filter(|(_, l)| l.support().all(|i| unit_set.contains(&i)))
            .map(|(&e, _)| e)
            .collect();
        let cr = self.graph.contract(&contracted)?;
        let labels = self
            .labels
            .iter()
            .filter(|(e, _)| !contracted.contains(e))
            .map(|(&e, l)| {
                let exps = l
                    .exponents()
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| if unit_set.contains(&i) { 0 } else { a })
                    .collect();
                (e, Label::new(exps))
            })
            .collect();
        let lg = LabelledGraph {
            graph: cr.quotient.clone(),
            basis: self.basis.clone(),
            labels,
        };
        Ok((lg, cr))
    }

    /// Alignment decision via biconnected blocks: aligned iff within every
    /// multi-edge block all labels are pairwise parallel. Requires
    /// canonical labels.
    pub fn is_aligned(&self) -> Result<AlignmentVerdict> {
        if let Some(e) = self.first_zero_label() {
            return Err(Error::NonCanonicalLabel(e));
        }
        let decomposition = self.graph.block_forest();
        for block in &decomposition.blocks {
            if block.edges.len() < 2 {
                continue;
            }
            let base_edge = block.edges[0];
            let base = &self.labels[&base_edge];
            for &other_edge in &block.edges[1..] {
                let other = &self.labels[&other_edge];
                if base.is_parallel_to(other) {
                    continue;
                }
                let allowed: BTreeSet<EdgeId> = block.edges.iter().copied().collect();
                let cycle = self
                    .graph
                    .cycle_through_edges(&allowed, base_edge, other_edge)
                    .expect("edges of a multi-edge block share a cycle");
                return Ok(AlignmentVerdict::NotAligned {
                    cycle,
                    edges: (base_edge, other_edge),
                });
            }
        }
        Ok(AlignmentVerdict::Aligned)
    }

    /// Brute-force alignment via cycle enumeration; the slow oracle for
    /// [`Self::is_aligned`].
    pub fn is_aligned_via_cycles(&self, max_edges: usize) -> Result<AlignmentVerdict> {
        if let Some(e) = self.first_zero_label() {
            return Err(Error::NonCanonicalLabel(e));
        }
        for cycle in self.graph.cycles(max_edges)? {
            for (i, &e1) in cycle.iter().enumerate() {
                for &e2 in &cycle[i + 1..] {
                    if !self.labels[&e1].is_parallel_to(&self.labels[&e2]) {
                        return Ok(AlignmentVerdict::NotAligned {
                            cycle: cycle.clone(),
                            edges: (e1, e2),
                        });
                    }
                }
            }
        }
        Ok(AlignmentVerdict::Aligned)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{VertexId, DEFAULT_CYCLE_ENUM_BOUND};
    use crate::ratlin::rat;

    fn basis2() -> BoundaryBasis {
        BoundaryBasis::new(vec!["Z1".into(), "Z2".into()]).unwrap()
    }

    fn two_gon(labels: [[u64; 2]; 2]) -> LabelledGraph {
        let g = MultiGraph::from_edges(2, &[(0, 1), (0, 1)]);
        LabelledGraph::new(
            g,
            basis2(),
            BTreeMap::from([
                (EdgeId(0), Label::new(labels[0].to_vec())),
                (EdgeId(1), Label::new(labels[1].to_vec())),
            ]),
        )
        .unwrap()
    }

    #[test]
    fn basis_rejects_duplicates() {
        assert!(matches!(
            BoundaryBasis::new(vec!["Z".into(), "Z".into()]),
            Err(Error::InvalidBasis(_))
        ));
        assert!(matches!(
            BoundaryBasis::new(vec![]),
            Err(Error::InvalidBasis(_))
        ));
    }

    #[test]
    fn restrict_zeroes_dropped_indices() {
        let g = MultiGraph::from_edges(2, &[(0, 1)]);
        let lg = LabelledGraph::new(
            g,
            basis2(),
            BTreeMap::from([(EdgeId(0), Label::new(vec![2, 3]))]),
        )
        .unwrap();
        // keep only the second divisor
        let restricted = lg.restrict(&BTreeSet::from([1])).unwrap();
        assert_eq!(restricted.label(EdgeId(0)).unwrap().exponents(), &[0, 3]);
        // full index set is the identity
        let full = lg.restrict(&BTreeSet::from([0, 1])).unwrap();
        assert_eq!(full, lg);
        // empty index set kills everything
        let empty = lg.restrict(&BTreeSet::new()).unwrap();
        assert_eq!(empty.label(EdgeId(0)).unwrap().exponents(), &[0, 0]);
    }

    #[test]
    fn restrict_rejects_bad_index() {
        let lg = two_gon([[1, 0], [0, 1]]);
        assert_eq!(
            lg.restrict(&BTreeSet::from([2])).unwrap_err(),
            Error::IndexOutOfRange { index: 2, size: 2 }
        );
    }

    #[test]
    fn pullback_is_dot_product() {
        let g = MultiGraph::from_edges(2, &[(0, 1)]);
        let mk = |exps: Vec<u64>, orders: Vec<u64>| {
            let lg = LabelledGraph::new(
                g.clone(),
                basis2(),
                BTreeMap::from([(EdgeId(0), Label::new(exps))]),
            )
            .unwrap();
            lg.pullback_orders(&OrderVector::new(orders))
                .unwrap()
                .get(EdgeId(0))
                .unwrap()
                .clone()
        };
        assert_eq!(mk(vec![2, 1], vec![3, 5]), rat(11));
        assert_eq!(mk(vec![1, 0], vec![0, 7]), rat(0));
        assert_eq!(mk(vec![0, 0], vec![4, 9]), rat(0));
    }

    #[test]
    fn pullback_rejects_wrong_rank() {
        let lg = two_gon([[1, 0], [0, 1]]);
        assert_eq!(
            lg.pullback_orders(&OrderVector::new(vec![1])).unwrap_err(),
            Error::BasisMismatch {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn specialize_contracts_unit_labels() {
        let lg = two_gon([[1, 0], [0, 1]]);
        let (sp, cr) = lg.specialize(&BTreeSet::from([0])).unwrap();
        assert_eq!(sp.graph().vertex_count(), 1);
        assert_eq!(sp.graph().edge_count(), 1);
        assert!(sp.graph().is_loop(EdgeId(1)).unwrap());
        assert_eq!(sp.label(EdgeId(1)).unwrap().exponents(), &[0, 1]);
        assert_eq!(cr.vertex_map, vec![VertexId(0), VertexId(0)]);
    }

    #[test]
    fn specialize_with_empty_unit_set_is_identity() {
        let lg = two_gon([[1, 0], [0, 1]]);
        let (sp, _) = lg.specialize(&BTreeSet::new()).unwrap();
        assert_eq!(sp, lg);
    }

    #[test]
    fn specialize_everything_leaves_single_vertex() {
        let lg = two_gon([[1, 0], [0, 1]]);
        let (sp, _) = lg.specialize(&BTreeSet::from([0, 1])).unwrap();
        assert_eq!(sp.graph().vertex_count(), 1);
        assert_eq!(sp.graph().edge_count(), 0);
    }

    #[test]
    fn non_parallel_two_gon_is_not_aligned() {
        let lg = two_gon([[1, 0], [0, 1]]);
        match lg.is_aligned().unwrap() {
            AlignmentVerdict::NotAligned { cycle, edges } => {
                let mut sorted = cycle.clone();
                sorted.sort();
                assert_eq!(sorted, vec![EdgeId(0), EdgeId(1)]);
                assert_eq!(edges, (EdgeId(0), EdgeId(1)));
            }
            AlignmentVerdict::Aligned => panic!("should not be aligned"),
        }
    }

    #[test]
    fn one_gon_is_aligned() {
        let g = MultiGraph::from_edges(1, &[(0, 0)]);
        let lg = LabelledGraph::new(
            g,
            basis2(),
            BTreeMap::from([(EdgeId(0), Label::new(vec![1, 1]))]),
        )
        .unwrap();
        assert!(lg.is_aligned().unwrap().is_aligned());
    }

    #[test]
    fn parallel_two_gon_is_aligned() {
        let lg = two_gon([[1, 1], [2, 2]]);
        assert!(lg.is_aligned().unwrap().is_aligned());
    }

    #[test]
    fn trees_are_aligned() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]);
        let lg = LabelledGraph::new(
            g,
            basis2(),
            BTreeMap::from([
                (EdgeId(0), Label::new(vec![1, 0])),
                (EdgeId(1), Label::new(vec![0, 1])),
                (EdgeId(2), Label::new(vec![3, 2])),
            ]),
        )
        .unwrap();
        assert!(lg.is_aligned().unwrap().is_aligned());
        assert!(lg
            .is_aligned_via_cycles(DEFAULT_CYCLE_ENUM_BOUND)
            .unwrap()
            .is_aligned());
    }

    #[test]
    fn zero_label_is_rejected() {
        let lg = two_gon([[0, 0], [0, 1]]);
        assert_eq!(
            lg.is_aligned().unwrap_err(),
            Error::NonCanonicalLabel(EdgeId(0))
        );
        assert_eq!(
            lg.is_aligned_via_cycles(DEFAULT_CYCLE_ENUM_BOUND)
                .unwrap_err(),
            Error::NonCanonicalLabel(EdgeId(0))
        );
    }

    #[test]
    fn block_and_cycle_paths_agree_on_random_labelled_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.random_range(1..6usize);
            let mut ends = Vec::new();
            for v in 1..n {
                ends.push((rng.random_range(0..v), v));
            }
            let extra = rng.random_range(0..4usize);
            for _ in 0..extra {
                ends.push((rng.random_range(0..n), rng.random_range(0..n)));
            }
            let g = MultiGraph::from_edges(n, &ends);
            let labels: BTreeMap<EdgeId, Label> = g
                .edge_ids()
                .map(|e| loop {
                    let l = vec![rng.random_range(0..4u64), rng.random_range(0..4u64)];
                    if l.iter().any(|&a| a > 0) {
                        break (e, Label::new(l));
                    }
                })
                .collect();
            let lg = LabelledGraph::new(g, basis2(), labels).unwrap();
            let fast = lg.is_aligned().unwrap();
            let slow = lg.is_aligned_via_cycles(DEFAULT_CYCLE_ENUM_BOUND).unwrap();
            assert_eq!(fast.is_aligned(), slow.is_aligned(), "{lg:?}");
        }
    }

    #[test]
    fn restrict_then_pullback_matches_masked_orders() {
        let lg = two_gon([[2, 3], [1, 4]]);
        let keep = BTreeSet::from([1]);
        let m = OrderVector::new(vec![5, 7]);
        let masked = OrderVector::new(vec![0, 7]);
        let a = lg.restrict(&keep).unwrap().pullback_orders(&m).unwrap();
        let b = lg.pullback_orders(&masked).unwrap();
        assert_eq!(a, b);
    }
}
