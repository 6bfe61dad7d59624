//! Height-jump multiplicities.
//!
//! For a labelled graph and a test curve with order vector `m`, the jump
//! against degree-zero divisors `D`, `E` is
//!
//! ```text
//! j = gr(G, mu; D, E) - sum_i gr(G, mu_i; D, E)
//! ```
//!
//! where `mu` pulls back the full labelling along `m` and `mu_i` pulls
//! back the labelling restricted to the i-th boundary divisor. The jump
//! vanishes identically on aligned graphs, is nonnegative for `D = E`,
//! homogeneous of degree 1 in `m`, and positive semi-definite as a
//! bilinear form on degree-zero divisors; all of that is checked exactly
//! in the test suites.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::graph::{MultiGraph, VertexId};
use crate::green::{CombinatorialDivisor, GreenSolver};
use crate::labels::{AlignmentVerdict, LabelledGraph, OrderVector};
use crate::ratlin::{RatMatrix, Rational};
use crate::{Error, Result};

/// Integer divisor supported on vertices (sections through the smooth
/// locus); meaningful jumps require total degree zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SectionDivisor {
    supports: Vec<(VertexId, i64)>,
}

impl SectionDivisor {
    pub fn new(supports: Vec<(VertexId, i64)>) -> Self {
        SectionDivisor { supports }
    }

    /// `(+1 at u, -1 at v)`.
    pub fn point_difference(u: VertexId, v: VertexId) -> Self {
        SectionDivisor {
            supports: vec![(u, 1), (v, -1)],
        }
    }

    pub fn supports(&self) -> &[(VertexId, i64)] {
        &self.supports
    }

    pub fn degree(&self) -> i64 {
        self.supports.iter().map(|&(_, c)| c).sum()
    }
}

/// Collapses a section divisor to vertex weights; coefficients at the same
/// vertex add.
pub fn to_combinatorial(d: &SectionDivisor, g: &MultiGraph) -> Result<CombinatorialDivisor> {
    if d.degree() != 0 {
        return Err(Error::NonZeroDegree);
    }
    CombinatorialDivisor::from_integer_weights(g.vertex_count(), d.supports())
}

/// The r+1 Green's values entering the jump formula.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JumpTerms {
    pub full: Rational,
    pub single: Vec<Rational>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JumpResult {
    /// `full - sum(single)`.
    pub value: Rational,
    pub per_term: JumpTerms,
    /// Alignment verdict of the input graph.
    pub alignment: AlignmentVerdict,
}

// Green solvers for the full labelling and each single-divisor restriction,
// built once so that many divisor pairs can be evaluated cheaply.
fn pulled_back_solvers(
    lg: &LabelledGraph,
    m: &OrderVector,
) -> Result<(GreenSolver, Vec<GreenSolver>)> {
    let full = GreenSolver::new(lg.graph(), &lg.pullback_orders(m)?)?;
    let rank = lg.basis().rank();
    let mut singles = Vec::with_capacity(rank);
    for i in 0..rank {
        let restricted = lg.restrict(&BTreeSet::from([i]))?;
        singles.push(GreenSolver::new(
            lg.graph(),
            &restricted.pullback_orders(m)?,
        )?);
    }
    Ok((full, singles))
}

fn evaluate_jump(
    full: &GreenSolver,
    singles: &[GreenSolver],
    x: &CombinatorialDivisor,
    y: &CombinatorialDivisor,
) -> JumpResult {
    let full_value = full.evaluate(x, y).value;
    let single: Vec<Rational> = singles.iter().map(|s| s.evaluate(x, y).value).collect();
    let value = &full_value - &single.iter().sum::<Rational>();
    JumpResult {
        value,
        per_term: JumpTerms {
            full: full_value,
            single,
        },
        alignment: AlignmentVerdict::Aligned, // replaced by callers
    }
}

/// The height jump of `lg` against divisors `d`, `e` along the test curve
/// with orders `m`, evaluated exactly.
pub fn height_jump(
    lg: &LabelledGraph,
    d: &SectionDivisor,
    e: &SectionDivisor,
    m: &OrderVector,
) -> Result<JumpResult> {
    if let Some(edge) = lg.first_zero_label() {
        return Err(Error::NonCanonicalLabel(edge));
    }
    let alignment = lg.is_aligned()?;
    let x = to_combinatorial(d, lg.graph())?;
    let y = to_combinatorial(e, lg.graph())?;
    let (full, singles) = pulled_back_solvers(lg, m)?;
    let mut result = evaluate_jump(&full, &singles, &x, &y);
    result.alignment = alignment;
    Ok(result)
}

/// Gram matrix of the jump bilinear form on the degree-zero basis
/// `{1_{v_i} - 1_{v_0} : i = 1..n-1}`; symmetric, and exactly PSD.
pub fn jump_gram(lg: &LabelledGraph, m: &OrderVector) -> Result<RatMatrix> {
    if let Some(edge) = lg.first_zero_label() {
        return Err(Error::NonCanonicalLabel(edge));
    }
    let n = lg.graph().vertex_count();
    if n <= 1 {
        return Ok(RatMatrix::zeros(0, 0));
    }
    let (full, singles) = pulled_back_solvers(lg, m)?;
    let basis: Vec<CombinatorialDivisor> = (1..n)
        .map(|i| CombinatorialDivisor::point_difference(n, VertexId(i), VertexId(0)))
        .collect::<Result<_>>()?;
    let mut gram = RatMatrix::zeros(n - 1, n - 1);
    for i in 0..n - 1 {
        for j in i..n - 1 {
            let value = evaluate_jump(&full, &singles, &basis[i], &basis[j]).value;
            gram[(i, j)] = value.clone();
            gram[(j, i)] = value;
        }
    }
    Ok(gram)
}

/// Outcome of the exact PSD decision.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PsdVerdict {
    /// `P G P^T = L D L^T` with unit lower-triangular `L` and `D >= 0`;
    /// `permutation[k]` is the original index pivoted at step `k`.
    Psd {
        permutation: Vec<usize>,
        unit_lower: RatMatrix,
        diagonal: Vec<Rational>,
    },
    /// A vector with `x^T G x < 0`.
    NotPsd { witness: Vec<Rational> },
}

impl PsdVerdict {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdVerdict::Psd { .. })
    }
}

/// Exact PSD decision by LDL^T with symmetric pivoting. A PSD matrix with
/// a zero diagonal entry must have the whole row zero, which the pivot
/// search exploits; any failure produces a certified violating vector.
pub fn check_psd(gram: &RatMatrix) -> Result<PsdVerdict> {
    if !gram.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = gram.rows();
    let mut a = gram.clone();
    // congruence bookkeeping: a = transform * gram * transform^T
    let mut transform = RatMatrix::identity(n);
    let mut unit_lower = RatMatrix::identity(n);
    let mut permutation: Vec<usize> = (0..n).collect();
    let mut diagonal = vec![Rational::zero(); n];

    let lift_pair = |transform: &RatMatrix, i: usize, j: usize, sign_positive: bool| {
        // witness e_i - sign * e_j in current coordinates, lifted by M^T
        let mut w = transform.row(i).to_vec();
        for (wk, t) in w.iter_mut().zip(transform.row(j)) {
            if sign_positive {
                *wk = &*wk - t;
            } else {
                *wk = &*wk + t;
            }
        }
        w
    };

    for k in 0..n {
        if let Some(i) = (k..n).find(|&i| a[(i, i)].is_negative()) {
            return Ok(PsdVerdict::NotPsd {
                witness: transform.row(i).to_vec(),
            });
        }
        let pivot = (k..n)
            .filter(|&i| a[(i, i)].is_positive())
            .max_by(|&i, &j| a[(i, i)].cmp(&a[(j, j)]));
        let p = match pivot {
            Some(p) => p,
            None => {
                // every remaining diagonal is zero: PSD iff the block is zero
                for i in k..n {
                    for j in (i + 1)..n {
                        if !a[(i, j)].is_zero() {
                            return Ok(PsdVerdict::NotPsd {
                                witness: lift_pair(&transform, i, j, a[(i, j)].is_positive()),
                            });
                        }
                    }
                }
                break;
            }
        };
        if p != k {
            for j in 0..n {
                let (x, y) = (a[(k, j)].clone(), a[(p, j)].clone());
                a[(k, j)] = y;
                a[(p, j)] = x;
            }
            for i in 0..n {
                let (x, y) = (a[(i, k)].clone(), a[(i, p)].clone());
                a[(i, k)] = y;
                a[(i, p)] = x;
            }
            for j in 0..n {
                let (x, y) = (transform[(k, j)].clone(), transform[(p, j)].clone());
                transform[(k, j)] = y;
                transform[(p, j)] = x;
            }
            for j in 0..k {
                let (x, y) = (unit_lower[(k, j)].clone(), unit_lower[(p, j)].clone());
                unit_lower[(k, j)] = y;
                unit_lower[(p, j)] = x;
            }
            permutation.swap(k, p);
        }
        let d = a[(k, k)].clone();
        diagonal[k] = d.clone();
        let factors: Vec<Rational> = (k + 1..n).map(|i| &a[(i, k)] / &d).collect();
        // Schur complement of the pivot, keeping `a` symmetric
        for i in (k + 1)..n {
            let f = &factors[i - k - 1];
            if f.is_zero() {
                continue;
            }
            for j in (k + 1)..n {
                let delta = f * &a[(k, j)];
                a[(i, j)] = &a[(i, j)] - &delta;
            }
            for j in 0..n {
                let delta = f * &transform[(k, j)];
                transform[(i, j)] = &transform[(i, j)] - &delta;
            }
        }
        for i in (k + 1)..n {
            unit_lower[(i, k)] = factors[i - k - 1].clone();
            a[(i, k)] = Rational::zero();
            a[(k, i)] = Rational::zero();
        }
    }
    Ok(PsdVerdict::Psd {
        permutation,
        unit_lower,
        diagonal,
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SweepRow {
    pub orders: Vec<u64>,
    pub value: Rational,
}

/// Jump values over the grid `{0..max_order}^r` in lexicographic order;
/// interior statistics cover the strictly positive orders, the flags cover
/// every row.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub interior_min: Option<Rational>,
    pub interior_max: Option<Rational>,
    pub all_nonnegative: bool,
    pub all_zero: bool,
    pub zero_count: usize,
    /// `j(lambda * m) = lambda * j(m)` spot checks within the grid.
    pub homogeneity_checks: usize,
    pub homogeneity_ok: bool,
}

/// Evaluates the jump on every order vector of the grid, including the
/// faces with vanishing coordinates.
pub fn sweep(
    lg: &LabelledGraph,
    d: &SectionDivisor,
    e: &SectionDivisor,
    max_order: u64,
) -> Result<SweepReport> {
    assert!(max_order >= 1, "sweep needs max_order >= 1");
    if let Some(edge) = lg.first_zero_label() {
        return Err(Error::NonCanonicalLabel(edge));
    }
    let x = to_combinatorial(d, lg.graph())?;
    let y = to_combinatorial(e, lg.graph())?;
    let r = lg.basis().rank();

    let mut rows = Vec::new();
    let mut values: BTreeMap<Vec<u64>, Rational> = BTreeMap::new();
    let mut orders = vec![0u64; r];
    'grid: loop {
        let m = OrderVector::new(orders.clone());
        let (full, singles) = pulled_back_solvers(lg, &m)?;
        let value = evaluate_jump(&full, &singles, &x, &y).value;
        values.insert(orders.clone(), value.clone());
        rows.push(SweepRow {
            orders: orders.clone(),
            value,
        });
        // lexicographic odometer
        let mut idx = r;
        loop {
            if idx == 0 {
                break 'grid;
            }
            idx -= 1;
            if orders[idx] < max_order {
                orders[idx] += 1;
                for o in &mut orders[idx + 1..] {
                    *o = 0;
                }
                break;
            }
        }
    }

    let mut interior_min: Option<Rational> = None;
    let mut interior_max: Option<Rational> = None;
    let mut all_nonnegative = true;
    let mut all_zero = true;
    let mut zero_count = 0usize;
    for row in &rows {
        if row.value.is_negative() {
            all_nonnegative = false;
        }
        if row.value.is_zero() {
            zero_count += 1;
        } else {
            all_zero = false;
        }
        if row.orders.iter().all(|&o| o >= 1) {
            if interior_min.as_ref().is_none_or(|m| row.value < *m) {
                interior_min = Some(row.value.clone());
            }
            if interior_max.as_ref().is_none_or(|m| row.value > *m) {
                interior_max = Some(row.value.clone());
            }
        }
    }

    let mut homogeneity_checks = 0usize;
    let mut homogeneity_ok = true;
    for (m, value) in &values {
        for lambda in [2u64, 3] {
            if m.iter().all(|&o| o * lambda <= max_order) && m.iter().any(|&o| o > 0) {
                let scaled: Vec<u64> = m.iter().map(|&o| o * lambda).collect();
                let expected = Rational::from_integer(lambda.into()) * value;
                homogeneity_checks += 1;
                if values[&scaled] != expected {
                    homogeneity_ok = false;
                }
            }
        }
    }

    Ok(SweepReport {
        rows,
        interior_min,
        interior_max,
        all_nonnegative,
        all_zero,
        zero_count,
        homogeneity_checks,
        homogeneity_ok,
    })
}
