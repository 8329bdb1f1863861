//! Monomial bases of Milnor algebras of invertible polynomials.
//!
//! The basis is assembled blockwise: Fermat `x^a` contributes `x^k` for
//! `0 ≤ k ≤ a−2`, a loop contributes the full box `0 ≤ k_i ≤ a_i − 1`, and a
//! chain block is handled by exact linear algebra — row reduction of the
//! graded slices of the Jacobian ideal, with pivots preferring
//! lexicographically larger monomials, so the surviving (non-pivot) monomials
//! of each degree form the basis. Every block's per-degree dimension count is
//! checked against the graded dimension series of its weight system, and the
//! total against the Milnor number.

use num::{BigInt, Zero};

use crate::arith::phase::Rational;
use crate::polynomial::blocks::{AtomicBlock, BlockKind};
use crate::polynomial::{InvertiblePolynomial, WeightSystem};

/// Coefficients (ascending by degree) of the graded dimension series
/// `Π_i (1 − t^{d−w_i}) / (1 − t^{w_i})` of the Milnor algebra for the given
/// weight system. The series is a polynomial of degree `Σ (d − 2w_i)`; its
/// coefficients sum to the Milnor number.
pub fn graded_dimensions(ws: &WeightSystem) -> Vec<i64> {
    let d = ws.degree();
    let mut num = vec![1i64];
    let mut den = vec![1i64];
    for &w in ws.weights() {
        assert!(2 * w <= d, "isolated quasihomogeneous weights satisfy w ≤ d/2");
        num = mul_shifted(&num, (d - w) as usize);
        den = mul_shifted(&den, w as usize);
    }
    let top: usize = ws.weights().iter().map(|&w| (d - 2 * w) as usize).sum();
    // Series division; den[0] = 1, so no rational arithmetic is needed.
    let mut q = vec![0i64; top + 1];
    for k in 0..=top {
        let mut c = *num.get(k).unwrap_or(&0);
        for j in 1..den.len().min(k + 1) {
            c -= den[j] * q[k - j];
        }
        q[k] = c;
    }
    // Exactness: num must equal q·den as polynomials.
    let mut check = vec![0i64; q.len() + den.len() - 1];
    for (i, qi) in q.iter().enumerate() {
        for (j, dj) in den.iter().enumerate() {
            check[i + j] += qi * dj;
        }
    }
    while check.last() == Some(&0) {
        check.pop();
    }
    let mut num_trimmed = num.clone();
    while num_trimmed.last() == Some(&0) {
        num_trimmed.pop();
    }
    assert_eq!(check, num_trimmed, "graded dimension series is not a polynomial");
    q
}

/// Multiplies `p` by `(1 − t^s)`.
fn mul_shifted(p: &[i64], s: usize) -> Vec<i64> {
    assert!(s >= 1, "weight system keeps weights strictly inside (0, d)");
    let mut out = vec![0i64; p.len() + s];
    for (i, c) in p.iter().enumerate() {
        out[i] += c;
        out[i + s] -= c;
    }
    out
}

/// Exponent vectors (over the full variable list of `f`) of a monomial basis
/// of the Milnor algebra of `f`, assembled blockwise. The count equals the
/// Milnor number.
pub fn milnor_basis(f: &InvertiblePolynomial) -> Vec<Vec<u64>> {
    let n = f.vars();
    let mut per_block: Vec<(Vec<usize>, Vec<Vec<u64>>)> = Vec::new();
    for block in f.blocks() {
        let local = block_basis(block);
        per_block.push((block.vars.clone(), local));
    }
    // Cartesian product over blocks, merged into full-length vectors.
    let mut basis: Vec<Vec<u64>> = vec![vec![0u64; n]];
    for (vars, local) in &per_block {
        let mut next = Vec::with_capacity(basis.len() * local.len());
        for base in &basis {
            for choice in local {
                let mut v = base.clone();
                for (slot, &var) in vars.iter().enumerate() {
                    v[var] = choice[slot];
                }
                next.push(v);
            }
        }
        basis = next;
    }
    let mu = f.milnor_number().expect("invertible polynomial has integral Milnor number");
    assert_eq!(
        BigInt::from(basis.len()),
        mu,
        "blockwise basis size must equal the Milnor number"
    );
    basis
}

/// Basis of one atomic block, as exponent vectors over the block's own slots.
fn block_basis(block: &AtomicBlock) -> Vec<Vec<u64>> {
    match block.kind {
        BlockKind::Fermat => (0..=block.exponents[0] - 2).map(|k| vec![k]).collect(),
        BlockKind::Loop => {
            let mut out: Vec<Vec<u64>> = vec![Vec::new()];
            for &a in &block.exponents {
                let mut next = Vec::with_capacity(out.len() * a as usize);
                for v in &out {
                    for k in 0..a {
                        let mut w = v.clone();
                        w.push(k);
                        next.push(w);
                    }
                }
                out = next;
            }
            out
        }
        BlockKind::Chain => chain_basis(&block.exponents),
    }
}

/// Monomial basis of the Milnor algebra of the chain
/// `x_1^{a_1}x_2 + … + x_{m−1}^{a_{m−1}}x_m + x_m^{a_m}`, one graded slice at
/// a time.
fn chain_basis(exponents: &[u64]) -> Vec<Vec<u64>> {
    let m = exponents.len();
    let matrix: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            let mut row = vec![0u64; m];
            row[i] = exponents[i];
            if i + 1 < m {
                row[i + 1] = 1;
            }
            row
        })
        .collect();
    let names: Vec<String> = (1..=m).map(|i| format!("y{i}")).collect();
    let chain = InvertiblePolynomial::from_exponent_matrix(matrix, names)
        .expect("chain blocks define invertible polynomials");
    let ws = chain.weights().clone();
    let d = ws.degree();
    let w = ws.weights().to_vec();

    // Jacobian generators as (coefficient, exponent vector) term lists;
    // generator i is homogeneous of degree d − w_i.
    let mut jacobian: Vec<Vec<(i64, Vec<u64>)>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut terms = Vec::new();
        let mut lead = vec![0u64; m];
        lead[i] = exponents[i] - 1;
        if i + 1 < m {
            lead[i + 1] = 1;
        }
        terms.push((exponents[i] as i64, lead));
        if i > 0 {
            let mut prev = vec![0u64; m];
            prev[i - 1] = exponents[i - 1];
            terms.push((1i64, prev));
        }
        for (_, t) in &terms {
            let deg: u64 = t.iter().zip(&w).map(|(&k, &wi)| k * wi).sum();
            assert_eq!(deg, d - w[i], "Jacobian generator must be homogeneous");
        }
        jacobian.push(terms);
    }

    let expected = graded_dimensions(&ws);
    let mut basis: Vec<Vec<u64>> = Vec::new();
    for (deg, &dim) in expected.iter().enumerate() {
        let degree = deg as u64;
        // Columns: monomials of this weighted degree, lexicographically
        // descending, so pivots prefer the lex-largest monomial of each
        // relation.
        let mut slice = monomials_of_degree(&w, degree);
        slice.sort();
        slice.reverse();
        let col_of = |v: &[u64], slice: &[Vec<u64>]| -> usize {
            slice.iter().position(|s| s == v).expect("product stays in the degree slice")
        };
        // Relation rows: u·J_i for every monomial u of degree D − (d − w_i).
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for i in 0..m {
            if degree + w[i] < d {
                continue;
            }
            for u in monomials_of_degree(&w, degree + w[i] - d) {
                let mut row = vec![Rational::zero(); slice.len()];
                for (c, t) in &jacobian[i] {
                    let prod: Vec<u64> = u.iter().zip(t).map(|(&a, &b)| a + b).collect();
                    row[col_of(&prod, &slice)] += Rational::from(BigInt::from(*c));
                }
                rows.push(row);
            }
        }
        let pivots = row_reduce(&mut rows);
        let mut free: Vec<Vec<u64>> = slice
            .iter()
            .enumerate()
            .filter(|(c, _)| !pivots.contains(c))
            .map(|(_, v)| v.clone())
            .collect();
        assert_eq!(free.len() as i64, dim, "slice dimension must match the graded series");
        basis.append(&mut free);
    }
    basis
}

/// All exponent vectors `k ≥ 0` with `Σ k_i w_i = degree`.
fn monomials_of_degree(w: &[u64], degree: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; w.len()];
    fn rec(w: &[u64], slot: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if slot == w.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if slot + 1 == w.len() {
            if left % w[slot] == 0 {
                cur[slot] = left / w[slot];
                out.push(cur.clone());
                cur[slot] = 0;
            }
            return;
        }
        let mut k = 0;
        while k * w[slot] <= left {
            cur[slot] = k;
            rec(w, slot + 1, left - k * w[slot], cur, out);
            k += 1;
        }
        cur[slot] = 0;
    }
    rec(w, 0, degree, &mut cur, &mut out);
    out
}

/// In-place Gaussian elimination; returns the set of pivot column indices.
fn row_reduce(rows: &mut [Vec<Rational>]) -> std::collections::BTreeSet<usize> {
    let mut pivots: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
    let mut pivot_rows: Vec<(usize, usize)> = Vec::new(); // (column, row index)
    for r in 0..rows.len() {
        loop {
            let Some(col) = rows[r].iter().position(|c| !c.is_zero()) else {
                break;
            };
            if let Some(&(_, pr)) = pivot_rows.iter().find(|&&(pc, _)| pc == col) {
                let factor = &rows[r][col] / &rows[pr][col];
                let pivot_row = rows[pr].clone();
                for (c, p) in rows[r].iter_mut().zip(&pivot_row) {
                    *c -= &factor * p;
                }
            } else {
                pivots.insert(col);
                pivot_rows.push((col, r));
                break;
            }
        }
    }
    pivots
}
