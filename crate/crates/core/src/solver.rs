//! Exact derivation-space solver.
//!
//! The defining identity d(xy) = d(x)y + x d(y), applied to all products of
//! natural basis elements, is linear in the n^2 entries of a derivation
//! matrix. This module assembles that linear system over the rationals,
//! computes its null space exactly, and offers independent cross-checks: a
//! direct product-by-product verification of a candidate matrix, Lie
//! brackets, span membership, and a rank routine that uses a different
//! elimination order than the null-space computation.

use crate::algebra::{DerivationMatrix, EvolutionAlgebra, MAX_DIMENSION};
use crate::graph::{associated_graph, graph_properties};
use crate::rational::{rat, Rational};
use crate::twin::twin_partition;
use num::{One, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Which basis product a constraint row (or a failed check) comes from.
///
/// `CrossTerm { i, j, k }` is the k-th component of the expanded identity for
/// the vanishing product e_i e_j with i < j; `SquareTerm { i, j }` is the
/// j-th component of the identity for e_i e_i. All indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOrigin {
    CrossTerm { i: usize, j: usize, k: usize },
    SquareTerm { i: usize, j: usize },
}

#[derive(Debug, Clone)]
pub struct ConstraintRow {
    pub origin: RowOrigin,
    /// Coefficients over the unknowns d_11, d_12, ..., d_nn in row-major
    /// order.
    pub coefficients: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub n: usize,
    pub rows: Vec<ConstraintRow>,
}

/// Builds the full constraint system: for each pair i < j one row per
/// component k (cross terms), then for each (i, j) one row comparing the
/// image of e_i^2 with twice the diagonal action (square terms).
pub fn assemble_constraints(a: &EvolutionAlgebra) -> ConstraintSystem {
    let n = a.dimension();
    let unk = |r: usize, c: usize| r * n + c;
    let mut rows = Vec::with_capacity(n * n * (n - 1) / 2 + n * n);
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let mut coefficients = vec![Rational::zero(); n * n];
                coefficients[unk(i, j)] += a.entry(j, k);
                coefficients[unk(j, i)] += a.entry(i, k);
                rows.push(ConstraintRow {
                    origin: RowOrigin::CrossTerm { i, j, k },
                    coefficients,
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let mut coefficients = vec![Rational::zero(); n * n];
            for k in 0..n {
                coefficients[unk(k, j)] += a.entry(i, k);
            }
            coefficients[unk(i, i)] -= rat(2, 1) * a.entry(i, j);
            rows.push(ConstraintRow {
                origin: RowOrigin::SquareTerm { i, j },
                coefficients,
            });
        }
    }
    ConstraintSystem { n, rows }
}

/// The solved derivation space: an exact basis, one matrix per free unknown,
/// ordered by the row-major position of that unknown.
#[derive(Debug, Clone)]
pub struct DerivationSpace {
    pub n: usize,
    pub dimension: usize,
    pub rank: usize,
    pub basis: Vec<DerivationMatrix>,
    /// Row-major cell of the unknown that each basis element sets to one.
    pub free_positions: Vec<(usize, usize)>,
}

/// Exact null space by Gauss-Jordan elimination.
///
/// Pivot columns are scanned from the last unknown backwards, so free
/// unknowns concentrate at the earliest cells and each basis matrix is
/// normalized to have a one at its free cell.
pub fn nullspace(cs: &ConstraintSystem) -> DerivationSpace {
    let n = cs.n;
    let ncols = n * n;
    let mut m: Vec<Vec<Rational>> =
        cs.rows.iter().map(|r| r.coefficients.clone()).collect();
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut used = vec![false; m.len()];

    for col in (0..ncols).rev() {
        let Some(r) = (0..m.len()).find(|&r| !used[r] && !m[r][col].is_zero()) else {
            continue;
        };
        used[r] = true;
        pivot_row_of_col[col] = Some(r);
        let inv = m[r][col].clone();
        for cell in &mut m[r] {
            let v = &*cell / &inv;
            *cell = v;
        }
        let pivot_row = m[r].clone();
        for (rr, row) in m.iter_mut().enumerate() {
            if rr == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (cell, p) in row.iter_mut().zip(&pivot_row) {
                let v = &*cell - &(&f * p);
                *cell = v;
            }
        }
    }

    let free: Vec<usize> =
        (0..ncols).filter(|&c| pivot_row_of_col[c].is_none()).collect();
    let rank = ncols - free.len();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![Rational::zero(); ncols];
        x[f] = Rational::one();
        for col in 0..ncols {
            if let Some(r) = pivot_row_of_col[col] {
                x[col] = -m[r][f].clone();
            }
        }
        let rows: Vec<Vec<Rational>> =
            (0..n).map(|i| x[i * n..(i + 1) * n].to_vec()).collect();
        basis.push(DerivationMatrix::new(rows).expect("square by construction"));
    }
    DerivationSpace {
        n,
        dimension: free.len(),
        rank,
        basis,
        free_positions: free.iter().map(|&f| (f / n, f % n)).collect(),
    }
}

/// Row rank by forward elimination with left-to-right pivot selection. The
/// pivot order is deliberately different from `nullspace` so the two can
/// cross-check each other through rank-nullity.
pub fn matrix_rank(rows: &[Vec<Rational>]) -> usize {
    let Some(ncols) = rows.first().map(Vec::len) else { return 0 };
    let mut m = rows.to_vec();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(r) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, r);
        let (upper, lower) = m.split_at_mut(rank + 1);
        let pivot_row = &upper[rank];
        for row in lower {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot_row[col];
            for (cell, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                let v = &*cell - &(&f * p);
                *cell = v;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("dimension mismatch: algebra is {algebra}x{algebra}, matrix is {matrix}x{matrix}")]
pub struct DimensionMismatch {
    pub algebra: usize,
    pub matrix: usize,
}

/// First product whose expanded identity fails, with the offending value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual {
    pub origin: RowOrigin,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeibnizCheck {
    pub holds: bool,
    pub first_residual: Option<Residual>,
}

/// Verifies the defining identity directly on products of basis elements,
/// without going through the assembled linear system.
///
/// For i != j the product e_i e_j is zero, so d_ij (row j of the structure
/// matrix) plus d_ji (row i) must vanish componentwise. For e_i^2 the image
/// of row i under the candidate matrix must equal twice d_ii times row i.
/// Products are scanned in the same order the constraint rows are emitted,
/// and the first nonzero component is reported.
pub fn is_derivation(
    a: &EvolutionAlgebra,
    d: &DerivationMatrix,
) -> Result<LeibnizCheck, DimensionMismatch> {
    let n = a.dimension();
    if d.dimension() != n {
        return Err(DimensionMismatch { algebra: n, matrix: d.dimension() });
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let value = d.entry(i, j) * a.entry(j, k) + d.entry(j, i) * a.entry(i, k);
                if !value.is_zero() {
                    return Ok(LeibnizCheck {
                        holds: false,
                        first_residual: Some(Residual {
                            origin: RowOrigin::CrossTerm { i, j, k },
                            value,
                        }),
                    });
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let image: Rational = (0..n).map(|k| a.entry(i, k) * d.entry(k, j)).sum();
            let value = image - rat(2, 1) * a.entry(i, j) * d.entry(i, i);
            if !value.is_zero() {
                return Ok(LeibnizCheck {
                    holds: false,
                    first_residual: Some(Residual {
                        origin: RowOrigin::SquareTerm { i, j },
                        value,
                    }),
                });
            }
        }
    }
    Ok(LeibnizCheck { holds: true, first_residual: None })
}

/// Commutator of two derivations acting on coordinate rows: row vectors
/// transform as x -> x D, so composing d1 after d2 multiplies the matrices
/// as D2 D1.
pub fn lie_bracket(
    d1: &DerivationMatrix,
    d2: &DerivationMatrix,
) -> Result<DerivationMatrix, DimensionMismatch> {
    let n = d1.dimension();
    if d2.dimension() != n {
        return Err(DimensionMismatch { algebra: n, matrix: d2.dimension() });
    }
    let ab = crate::linalg::multiply(d2.rows(), d1.rows());
    let ba = crate::linalg::multiply(d1.rows(), d2.rows());
    let rows: Vec<Vec<Rational>> = ab
        .into_iter()
        .zip(ba)
        .map(|(r1, r2)| r1.into_iter().zip(r2).map(|(x, y)| x - y).collect())
        .collect();
    Ok(DerivationMatrix::new(rows).expect("square by construction"))
}

fn flatten(d: &DerivationMatrix) -> Vec<Rational> {
    d.rows().iter().flatten().cloned().collect()
}

/// Exact span membership via a rank comparison.
pub fn in_span(basis: &[DerivationMatrix], target: &DerivationMatrix) -> bool {
    if basis.is_empty() {
        return target.is_zero();
    }
    let mut rows: Vec<Vec<Rational>> = basis.iter().map(flatten).collect();
    let before = matrix_rank(&rows);
    rows.push(flatten(target));
    matrix_rank(&rows) == before
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GenerateRequire {
    pub non_degenerate: bool,
    pub connected: bool,
    pub twin_free: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("random generation exhausted after {attempts} attempts without meeting the requirements")]
pub struct GenerationExhausted {
    pub attempts: usize,
}

const GENERATION_ATTEMPTS: usize = 10_000;

/// Seeded random structure matrix. Each entry is nonzero with probability
/// `density.0 / density.1`; nonzero entries have numerator in [-9, 9] and
/// denominator in [1, 4]. Whole matrices failing a requirement are rejected
/// and redrawn, up to a fixed attempt budget.
pub fn generate_random_algebra(
    n: usize,
    density: (u32, u32),
    seed: u64,
    require: GenerateRequire,
) -> Result<EvolutionAlgebra, GenerationExhausted> {
    assert!((1..=MAX_DIMENSION).contains(&n), "dimension out of range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GENERATION_ATTEMPTS {
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for row in rows.iter_mut() {
            for entry in row.iter_mut() {
                if !rng.random_ratio(density.0, density.1) {
                    continue;
                }
                let num = loop {
                    let v: i64 = rng.random_range(-9..=9);
                    if v != 0 {
                        break v;
                    }
                };
                let den: i64 = rng.random_range(1..=4);
                *entry = rat(num, den);
            }
        }
        let a = EvolutionAlgebra::new(rows).expect("square by construction");
        let g = associated_graph(&a);
        if require.non_degenerate && (0..n).any(|v| g.is_sink(v)) {
            continue;
        }
        if require.connected && !graph_properties(&g).connected {
            continue;
        }
        if require.twin_free && !twin_partition(&g).is_twin_free() {
            continue;
        }
        return Ok(a);
    }
    Err(GenerationExhausted { attempts: GENERATION_ATTEMPTS })
}

/// Scales every entry of a derivation matrix so comparisons can ignore
/// normalization; used by tests.
pub fn scale(d: &DerivationMatrix, factor: &Rational) -> DerivationMatrix {
    let rows: Vec<Vec<Rational>> = d
        .rows()
        .iter()
        .map(|r| r.iter().map(|v| v * factor).collect())
        .collect();
    DerivationMatrix::new(rows).expect("square by construction")
}
