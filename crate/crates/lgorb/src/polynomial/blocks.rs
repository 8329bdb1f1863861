//! Decomposition of an exponent matrix into atomic blocks (Fermat, chain,
//! loop) over disjoint variable sets.
//!
//! Every monomial of such a polynomial has the shape `x_j^a` or
//! `x_j^a * x_k`. Assigning to each monomial its "diagonal" variable `j`
//! (bijectively) induces a successor map `j -> k` whose components are paths
//! (chains, possibly ending in a bare power = Fermat) and cycles (loops).
//! A monomial `x_j * x_k` with both exponents 1 admits two readings, so the
//! assignment is found by backtracking over all readings.

use num::BigInt;

use crate::error::{LgError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlockKind {
    Fermat,
    Chain,
    Loop,
}

/// One atomic block: `vars` in block order with matching `exponents`.
///
/// Fermat: one variable, `x^a`, a ≥ 2. Chain: `x_1^{a_1}x_2 + … + x_m^{a_m}`
/// with a_m ≥ 2. Loop: `x_1^{a_1}x_2 + … + x_m^{a_m}x_1`, stored with its
/// exponent sequence rotated to the lexicographically minimal cyclic
/// rotation (the loop's *type*); reflections are not identified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicBlock {
    pub kind: BlockKind,
    pub vars: Vec<usize>,
    pub exponents: Vec<u64>,
}

impl AtomicBlock {
    pub fn len(&self) -> usize {
        self.vars.len()
    }

    /// Determinant of the block's own exponent matrix: `a` for Fermat,
    /// `Π a_i` for chains, `Π a_i + (−1)^{L+1}` for loops.
    pub fn determinant(&self) -> BigInt {
        let product: BigInt = self.exponents.iter().map(|&a| BigInt::from(a)).product();
        match self.kind {
            BlockKind::Fermat | BlockKind::Chain => product,
            BlockKind::Loop => {
                if self.len() % 2 == 0 {
                    product - 1
                } else {
                    product + 1
                }
            }
        }
    }
}

/// One reading of a monomial row: diagonal variable, its exponent, and the
/// optional successor variable (which carries exponent 1).
#[derive(Clone, Copy)]
struct Reading {
    diag: usize,
    exp: u64,
    next: Option<usize>,
}

fn readings_of_row(row: &[u64]) -> Vec<Reading> {
    let support: Vec<(usize, u64)> =
        row.iter().enumerate().filter(|(_, &e)| e > 0).map(|(j, &e)| (j, e)).collect();
    match support.as_slice() {
        [(j, a)] => vec![Reading { diag: *j, exp: *a, next: None }],
        [(j, a), (k, b)] => {
            let mut out = Vec::new();
            if *b == 1 {
                out.push(Reading { diag: *j, exp: *a, next: Some(*k) });
            }
            if *a == 1 {
                out.push(Reading { diag: *k, exp: *b, next: Some(*j) });
            }
            out
        }
        _ => Vec::new(),
    }
}

/// Rotates a loop so its exponent sequence is the lexicographically minimal
/// rotation; ties broken by the smallest starting variable index.
fn canonical_loop(vars: &[usize], exps: &[u64]) -> (Vec<usize>, Vec<u64>) {
    let len = vars.len();
    let mut best: Option<usize> = None;
    for start in 0..len {
        let better = match best {
            None => true,
            Some(b) => {
                let rotated = |s: usize, i: usize| exps[(s + i) % len];
                let mut ordering = std::cmp::Ordering::Equal;
                for i in 0..len {
                    ordering = rotated(start, i).cmp(&rotated(b, i));
                    if ordering != std::cmp::Ordering::Equal {
                        break;
                    }
                }
                ordering == std::cmp::Ordering::Less
                    || (ordering == std::cmp::Ordering::Equal && vars[start] < vars[best.unwrap()])
            }
        };
        if better {
            best = Some(start);
        }
    }
    let s = best.unwrap();
    let vars = (0..len).map(|i| vars[(s + i) % len]).collect();
    let exps = (0..len).map(|i| exps[(s + i) % len]).collect();
    (vars, exps)
}

enum StructureError {
    /// The reading assignment produces no path/cycle structure at all.
    NoMatch,
    /// The structure exists but a block violates a non-degeneracy rule.
    Degenerate(String),
}

/// Builds blocks from one complete reading assignment (readings[i] for row i).
fn blocks_from_assignment(
    readings: &[Reading],
    n: usize,
) -> std::result::Result<Vec<AtomicBlock>, StructureError> {
    // successor map indexed by variable (readings are diagonal-bijective).
    let mut succ: Vec<Option<usize>> = vec![None; n];
    let mut exp_of: Vec<u64> = vec![0; n];
    let mut indeg = vec![0usize; n];
    for r in readings {
        succ[r.diag] = r.next;
        exp_of[r.diag] = r.exp;
        if let Some(k) = r.next {
            indeg[k] += 1;
            if indeg[k] > 1 {
                return Err(StructureError::NoMatch);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    // Paths: start at in-degree-0 variables and follow successors.
    for start in 0..n {
        if indeg[start] != 0 || seen[start] {
            continue;
        }
        let mut vars = vec![start];
        seen[start] = true;
        let mut cur = start;
        while let Some(nx) = succ[cur] {
            if seen[nx] {
                // A path running into a cycle would need indeg 2 there;
                // already excluded. Running into another path is impossible
                // since each variable has one diagonal monomial.
                return Err(StructureError::NoMatch);
            }
            seen[nx] = true;
            vars.push(nx);
            cur = nx;
        }
        let exps: Vec<u64> = vars.iter().map(|&v| exp_of[v]).collect();
        if vars.len() == 1 {
            if exps[0] < 2 {
                return Err(StructureError::Degenerate(
                    "bare power x^1 is regular at the origin".to_string(),
                ));
            }
            blocks.push(AtomicBlock { kind: BlockKind::Fermat, vars, exponents: exps });
        } else {
            if *exps.last().unwrap() < 2 {
                return Err(StructureError::Degenerate(
                    "chain with final exponent 1 is regular at the origin".to_string(),
                ));
            }
            blocks.push(AtomicBlock { kind: BlockKind::Chain, vars, exponents: exps });
        }
    }
    // Cycles: whatever remains.
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut vars = vec![start];
        seen[start] = true;
        let mut cur = succ[start].expect("cycle variable must have a successor");
        while cur != start {
            seen[cur] = true;
            vars.push(cur);
            cur = succ[cur].expect("cycle variable must have a successor");
        }
        let exps: Vec<u64> = vars.iter().map(|&v| exp_of[v]).collect();
        let len = vars.len();
        if len % 2 == 0 {
            let odd_all_one = (0..len).step_by(2).all(|i| exps[i] == 1);
            let even_all_one = (1..len).step_by(2).all(|i| exps[i] == 1);
            if odd_all_one || even_all_one {
                return Err(StructureError::Degenerate(
                    "even cycle with alternating exponents 1 forces zero weights".to_string(),
                ));
            }
        }
        let (vars, exps) = canonical_loop(&vars, &exps);
        blocks.push(AtomicBlock { kind: BlockKind::Loop, vars, exponents: exps });
    }
    blocks.sort_by_key(|b| *b.vars.iter().min().unwrap());
    Ok(blocks)
}

/// Finds an atomic decomposition of a square exponent matrix, trying every
/// monomial-to-diagonal-variable assignment. The first non-degenerate
/// structure wins; if every structural match is degenerate the degeneracy is
/// reported, and if nothing matches the shape is rejected.
pub(crate) fn decompose(matrix: &[Vec<u64>]) -> Result<Vec<AtomicBlock>> {
    let n = matrix.len();
    let row_readings: Vec<Vec<Reading>> = matrix.iter().map(|r| readings_of_row(r)).collect();
    if row_readings.iter().any(|r| r.is_empty()) {
        return Err(LgError::NotAtomicShape);
    }
    let mut chosen: Vec<Reading> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut degenerate: Option<String> = None;
    fn search(
        row: usize,
        n: usize,
        row_readings: &[Vec<Reading>],
        chosen: &mut Vec<Reading>,
        used: &mut [bool],
        degenerate: &mut Option<String>,
    ) -> Option<Vec<AtomicBlock>> {
        if row == n {
            return match blocks_from_assignment(chosen, n) {
                Ok(blocks) => Some(blocks),
                Err(StructureError::Degenerate(msg)) => {
                    degenerate.get_or_insert(msg);
                    None
                }
                Err(StructureError::NoMatch) => None,
            };
        }
        for r in &row_readings[row] {
            if used[r.diag] {
                continue;
            }
            used[r.diag] = true;
            chosen.push(*r);
            if let Some(found) = search(row + 1, n, row_readings, chosen, used, degenerate) {
                return Some(found);
            }
            chosen.pop();
            used[r.diag] = false;
        }
        None
    }
    match search(0, n, &row_readings, &mut chosen, &mut used, &mut degenerate) {
        Some(blocks) => Ok(blocks),
        None => match degenerate {
            Some(msg) => Err(LgError::DegenerateType(msg)),
            None => Err(LgError::NotAtomicShape),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(r: &[&[u64]]) -> Vec<Vec<u64>> {
        r.iter().map(|x| x.to_vec()).collect()
    }

    #[test]
    fn loop_of_four_variables() {
        let m = rows(&[&[3, 1, 0, 0], &[0, 5, 1, 0], &[0, 0, 3, 1], &[1, 0, 0, 5]]);
        let blocks = decompose(&m).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].kind, BlockKind::Loop);
        assert_eq!(blocks[0].exponents, vec![3, 5, 3, 5]);
        assert_eq!(blocks[0].determinant(), BigInt::from(224));
    }

    #[test]
    fn two_fermats() {
        let m = rows(&[&[3, 0], &[0, 3]]);
        let blocks = decompose(&m).unwrap();
        assert_eq!(blocks.len(), 2);
        assert!(blocks.iter().all(|b| b.kind == BlockKind::Fermat && b.exponents == vec![3]));
    }

    #[test]
    fn chain_detection_and_orientation() {
        // x1^3 x2 + x2^4: chain vars (0, 1), exponents (3, 4).
        let m = rows(&[&[3, 1], &[0, 4]]);
        let blocks = decompose(&m).unwrap();
        assert_eq!(blocks[0].kind, BlockKind::Chain);
        assert_eq!(blocks[0].vars, vec![0, 1]);
        assert_eq!(blocks[0].exponents, vec![3, 4]);
        assert_eq!(blocks[0].determinant(), BigInt::from(12));
    }

    #[test]
    fn ambiguous_rows_resolved_as_chain() {
        // x1^2 + x1*x2 is the chain x2^1 x1 + x1^2 read in variable order (1, 0).
        let m = rows(&[&[2, 0], &[1, 1]]);
        let blocks = decompose(&m).unwrap();
        assert_eq!(blocks[0].kind, BlockKind::Chain);
        assert_eq!(blocks[0].vars, vec![1, 0]);
        assert_eq!(blocks[0].exponents, vec![1, 2]);
    }

    #[test]
    fn degenerate_even_loop_rejected() {
        // x1^1 x2 + x2^3 x1: even loop with odd-position exponents all 1.
        let m = rows(&[&[1, 1], &[3, 1]]);
        match decompose(&m) {
            Err(LgError::DegenerateType(_)) => {}
            other => panic!("expected DegenerateType, got {:?}", other),
        }
        // x1^2 x2 + x2^2 x1 is fine.
        let ok = rows(&[&[2, 1], &[1, 2]]);
        assert_eq!(decompose(&ok).unwrap()[0].kind, BlockKind::Loop);
    }

    #[test]
    fn bare_linear_power_rejected() {
        let m = rows(&[&[1]]);
        match decompose(&m) {
            Err(LgError::DegenerateType(_)) => {}
            other => panic!("expected DegenerateType, got {:?}", other),
        }
    }

    #[test]
    fn non_atomic_shapes_rejected() {
        // x1^2 x2^2 + x2^3: first row has no x^a or x^a*x reading.
        let m = rows(&[&[2, 2], &[0, 3]]);
        assert!(matches!(decompose(&m), Err(LgError::NotAtomicShape)));
        // Two monomials pointing to the same successor.
        let m = rows(&[&[2, 0, 1], &[0, 2, 1], &[0, 0, 2]]);
        assert!(matches!(decompose(&m), Err(LgError::NotAtomicShape)));
    }

    #[test]
    fn loop_canonical_rotation() {
        // Loop written starting at the large exponent: (5,3,5,3) rotates to (3,5,3,5).
        let m = rows(&[&[5, 1, 0, 0], &[0, 3, 1, 0], &[0, 0, 5, 1], &[1, 0, 0, 3]]);
        let blocks = decompose(&m).unwrap();
        assert_eq!(blocks[0].exponents, vec![3, 5, 3, 5]);
        // Ties between rotations resolve to the smallest starting variable.
        assert_eq!(blocks[0].vars[0], 1);
    }
}
