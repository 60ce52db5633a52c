//! Exact integer and rational linear algebra: integer kernels, Smith normal form
//! and a sparse rational solver.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer column echelon form of `a` (given as rows with `ncols` columns).
///
/// Returns `(rank, kernel)` where `kernel` is a Z-basis of `{x in Z^n : a x = 0}`.
pub fn integer_kernel(a: &[Vec<BigInt>], ncols: usize) -> (usize, Vec<Vec<BigInt>>) {
    let m = a.len();
    // column c = (A column c ; V column c) with V starting as the identity
    let mut cols: Vec<Vec<BigInt>> = (0..ncols)
        .map(|c| {
            let mut col: Vec<BigInt> = a.iter().map(|row| row[c].clone()).collect();
            col.extend((0..ncols).map(|r| if r == c { BigInt::one() } else { BigInt::zero() }));
            col
        })
        .collect();
    let mut pivot = 0;
    for r in 0..m {
        if pivot == ncols {
            break;
        }
        loop {
            let best = (pivot..ncols)
                .filter(|&c| !cols[c][r].is_zero())
                .min_by(|&x, &y| cols[x][r].abs().cmp(&cols[y][r].abs()));
            let Some(best) = best else { break };
            cols.swap(pivot, best);
            let mut done = true;
            for c in pivot + 1..ncols {
                if cols[c][r].is_zero() {
                    continue;
                }
                let q = cols[c][r].div_floor(&cols[pivot][r]);
                let (head, tail) = cols.split_at_mut(c);
                for (x, p) in tail[0].iter_mut().zip(&head[pivot]) {
                    *x -= &q * p;
                }
                if !tail[0][r].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot += 1;
                break;
            }
        }
    }
    let kernel = cols[pivot..].iter().map(|col| col[m..].to_vec()).collect();
    (pivot, kernel)
}

/// Rank over Q of an integer matrix.
pub fn rank(a: &[Vec<BigInt>], ncols: usize) -> usize {
    integer_kernel(a, ncols).0
}

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal, each diagonal
/// entry nonnegative and dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub u: Vec<Vec<BigInt>>,
    pub d: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len))).map(|i| self.d[i][i].clone()).collect()
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn smith_normal_form(m: &[Vec<BigInt>]) -> Smith {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    fn row_axpy(mat: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
        let src_row = mat[src].clone();
        for (x, s) in mat[dst].iter_mut().zip(&src_row) {
            *x -= q * s;
        }
    }
    fn col_axpy(mat: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
        for row in mat.iter_mut() {
            let s = row[src].clone();
            row[dst] -= q * s;
        }
    }
    fn swap_cols(mat: &mut [Vec<BigInt>], i: usize, j: usize) {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
    }

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Smith { u, d: a, v };
            };
            a.swap(t, bi);
            u.swap(t, bi);
            swap_cols(&mut a, t, bj);
            swap_cols(&mut v, t, bj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    Smith { u, d: a, v }
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

/// Inverse of a unimodular integer matrix (determinant +-1).
pub fn unimodular_inverse(a: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().cloned().map(BigRational::from_integer).collect();
            r.extend((0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i32))));
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&r| !aug[r][k].is_zero())?;
        aug.swap(k, p);
        let inv = aug[k][k].recip();
        for x in aug[k].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != k && !aug[r][k].is_zero() {
                let f = aug[r][k].clone();
                let pivot_row = aug[k].clone();
                for (x, p) in aug[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    aug.into_iter()
        .map(|row| row[n..].iter().map(|x| x.is_integer().then(|| x.to_integer())).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Unique(Vec<BigRational>),
    Inconsistent,
    /// Consistent but with a nontrivial kernel; carries the rank.
    Underdetermined(usize),
}

/// Solves a sparse system `sum_j a[i][j] x_j = b_i` exactly over Q.
///
/// Rows are kept in echelon form keyed by their smallest variable, and each
/// incoming row is reduced by increasing variable index, so fill-in only ever
/// moves to larger indices.
pub fn solve_sparse(equations: &[(BTreeMap<usize, BigInt>, BigInt)], nvars: usize) -> SolveOutcome {
    let mut pivots: BTreeMap<usize, (BTreeMap<usize, BigRational>, BigRational)> = BTreeMap::new();
    let mut inconsistent = false;
    for (coeffs, rhs) in equations {
        let mut row: BTreeMap<usize, BigRational> = coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(&j, c)| (j, BigRational::from_integer(c.clone())))
            .collect();
        let mut b = BigRational::from_integer(rhs.clone());
        let mut cursor = 0;
        while let Some((&v, f)) = row.range(cursor..).find(|(v, _)| pivots.contains_key(v)) {
            let f = f.clone();
            let (prow, pb) = &pivots[&v];
            for (j, c) in prow {
                let entry = row.entry(*j).or_insert_with(BigRational::zero);
                *entry -= &f * c;
                if entry.is_zero() {
                    row.remove(j);
                }
            }
            b -= &f * pb;
            cursor = v + 1;
        }
        match row.first_key_value() {
            None => {
                if !b.is_zero() {
                    inconsistent = true;
                }
            }
            Some((&v, lead)) => {
                let inv = lead.recip();
                for c in row.values_mut() {
                    *c *= &inv;
                }
                b *= &inv;
                pivots.insert(v, (row, b));
            }
        }
    }
    if inconsistent {
        return SolveOutcome::Inconsistent;
    }
    if pivots.len() < nvars {
        return SolveOutcome::Underdetermined(pivots.len());
    }
    let mut x = vec![BigRational::zero(); nvars];
    for (&v, (row, b)) in pivots.iter().rev() {
        let mut val = b.clone();
        for (j, c) in row.range(v + 1..) {
            val -= c * &x[*j];
        }
        x[v] = val;
    }
    SolveOutcome::Unique(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn kernel_of_simple_matrix() {
        let a = big(&[&[1, 2, 3], &[2, 4, 6]]);
        let (rank, ker) = integer_kernel(&a, 3);
        assert_eq!(rank, 1);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert!(mat_vec(&a, k).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x - 2y = 0 has kernel generated by (1,1), not (2,2)
        let a = big(&[&[2, -2]]);
        let (_, ker) = integer_kernel(&a, 2);
        assert_eq!(ker.len(), 1);
        assert!(ker[0].iter().all(|x| x.abs().is_one()));
    }

    #[test]
    fn smith_of_small_matrices() {
        for m in [big(&[&[2, 4], &[6, 8]]), big(&[&[3]]), big(&[&[-2]]), big(&[&[0, 2], &[3, 0]]), big(&[&[2, 0], &[0, 2]])] {
            let s = smith_normal_form(&m);
            assert_eq!(mat_mul(&mat_mul(&s.u, &m), &s.v), s.d);
            let diag = s.diagonal();
            for w in diag.windows(2) {
                assert!(w[0].is_zero() && w[1].is_zero() || w[1].is_multiple_of(&w[0]));
            }
            assert!(diag.iter().all(|x| !x.is_negative()));
            assert!(unimodular_inverse(&s.u).is_some());
            assert!(unimodular_inverse(&s.v).is_some());
        }
        let s = smith_normal_form(&big(&[&[0, 2], &[3, 0]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn sparse_solver_outcomes() {
        let eq = |pairs: &[(usize, i64)], rhs: i64| {
            (pairs.iter().map(|&(j, c)| (j, BigInt::from(c))).collect::<BTreeMap<_, _>>(), BigInt::from(rhs))
        };
        let sys = vec![eq(&[(0, 1), (1, 1)], 3), eq(&[(0, 1), (1, -1)], 1)];
        let half = |n: i64| BigRational::from_integer(BigInt::from(n));
        assert_eq!(solve_sparse(&sys, 2), SolveOutcome::Unique(vec![half(2), half(1)]));
        let bad = vec![eq(&[(0, 1)], 1), eq(&[(0, 2)], 3)];
        assert_eq!(solve_sparse(&bad, 1), SolveOutcome::Inconsistent);
        let under = vec![eq(&[(0, 1), (1, 1)], 3)];
        assert_eq!(solve_sparse(&under, 2), SolveOutcome::Underdetermined(1));
    }
}
