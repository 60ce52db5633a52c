//! Finite coverings of tori, seen on character lattices.
//!
//! A covering `T~ -> T` is given by an integer matrix `M` with `det M != 0` whose
//! columns span the character lattice of `T` inside that of `T~` (`Z^rank`).
//! For example the double cover `SU(2) -> SO(3)` restricted to maximal tori is
//! `M = (2)`. Pullback sends `e^lambda` to `e^{M lambda}`, and every element of
//! R(T~) splits uniquely as `sum_c e^{tau(c)} * pullback(u_c)` over the cosets
//! `c` of `Z^rank / M Z^rank`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::charring::CharElt;
use crate::error::{Error, Result};
use crate::linalg::{self, Smith};
use crate::rootdata::Weight;

#[derive(Clone, Debug)]
pub struct CoverDatum {
    matrix: Vec<Vec<i64>>,
    smith: Smith,
    u_inverse: Vec<Vec<BigInt>>,
    /// Diagonal of the Smith form, all positive.
    invariants: Vec<i64>,
    coset_reps: Vec<Weight>,
}

fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn to_weight(v: &[BigInt]) -> Weight {
    Weight::new(v.iter().map(|x| x.to_i64().expect("lattice coordinate overflows i64")).collect())
}

impl CoverDatum {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let rank = matrix.len();
        if rank == 0 || matrix.iter().any(|r| r.len() != rank) {
            return Err(Error::InvalidCartan("cover matrix must be square and nonempty".into()));
        }
        let smith = linalg::smith_normal_form(&to_big(&matrix));
        let invariants: Vec<i64> = smith.diagonal().iter().map(|d| d.to_i64().unwrap_or(0)).collect();
        if invariants.contains(&0) {
            return Err(Error::SingularMatrix);
        }
        let u_inverse = linalg::unimodular_inverse(&smith.u).expect("Smith transform is unimodular");
        let mut datum = CoverDatum { matrix, smith, u_inverse, invariants, coset_reps: Vec::new() };
        datum.coset_reps = datum.enumerate_reps();
        Ok(datum)
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn smith(&self) -> &Smith {
        &self.smith
    }

    /// `|det M|`, the number of cosets.
    pub fn index(&self) -> usize {
        self.invariants.iter().map(|&d| d as usize).product()
    }

    /// Coset representatives `tau(c)`, in mixed-radix order of the Smith residues.
    pub fn coset_reps(&self) -> &[Weight] {
        &self.coset_reps
    }

    // residues r with 0 <= r_i < d_i, mapped back through U^{-1}
    fn enumerate_reps(&self) -> Vec<Weight> {
        let mut residues: Vec<Vec<i64>> = vec![Vec::new()];
        for &d in &self.invariants {
            residues = residues
                .into_iter()
                .flat_map(|r| {
                    (0..d).map(move |x| {
                        let mut next = r.clone();
                        next.push(x);
                        next
                    })
                })
                .collect();
        }
        residues
            .iter()
            .map(|r| {
                let r: Vec<BigInt> = r.iter().map(|&x| BigInt::from(x)).collect();
                to_weight(&linalg::mat_vec(&self.u_inverse, &r))
            })
            .collect()
    }

    /// Splits `nu = tau(c) + M lambda`, returning `(c, lambda)` with `c` an index into `coset_reps`.
    pub fn reduce(&self, nu: &Weight) -> (usize, Weight) {
        let nu_big: Vec<BigInt> = nu.coords().iter().map(|&x| BigInt::from(x)).collect();
        let y = linalg::mat_vec(&self.smith.u, &nu_big);
        let mut coset = 0usize;
        let mut quotient = Vec::with_capacity(y.len());
        for (yi, &d) in y.iter().zip(&self.invariants) {
            let (q, r) = yi.div_mod_floor(&BigInt::from(d));
            coset = coset * d as usize + r.to_usize().expect("residue is small");
            quotient.push(q);
        }
        // lambda = V D^{-1} (y - r) = V q
        (coset, to_weight(&linalg::mat_vec(&self.smith.v, &quotient)))
    }

    /// `e^lambda -> e^{M lambda}`.
    pub fn pullback(&self, u: &CharElt) -> Result<CharElt> {
        if let Some(r) = u.rank() {
            if r != self.rank() {
                return Err(Error::RankMismatch { expected: self.rank(), got: r });
            }
        }
        Ok(u.map_weights(|lambda| self.apply_matrix(lambda)))
    }

    fn apply_matrix(&self, lambda: &Weight) -> Weight {
        Weight::new(
            self.matrix
                .iter()
                .map(|row| row.iter().zip(lambda.coords()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// `v = sum_c e^{tau(c)} pullback(u_c)`; returns one component per coset (zeros included).
    pub fn decompose(&self, v: &CharElt) -> Result<Vec<(Weight, CharElt)>> {
        if let Some(r) = v.rank() {
            if r != self.rank() {
                return Err(Error::RankMismatch { expected: self.rank(), got: r });
            }
        }
        let mut parts: BTreeMap<usize, CharElt> = BTreeMap::new();
        for (nu, c) in v.terms() {
            let (coset, lambda) = self.reduce(nu);
            parts.entry(coset).or_default().add_term(lambda, c.clone());
        }
        Ok(self
            .coset_reps
            .iter()
            .enumerate()
            .map(|(i, tau)| (tau.clone(), parts.remove(&i).unwrap_or_default()))
            .collect())
    }

    pub fn reassemble(&self, parts: &[(Weight, CharElt)]) -> Result<CharElt> {
        let mut out = CharElt::zero();
        for (tau, u) in parts {
            out += &self.pullback(u)?.shift(tau);
        }
        Ok(out)
    }

    pub fn determinant(&self) -> i64 {
        let det = crate::rootdata::determinant(&self.matrix);
        det as i64
    }
}

/// Convenience: `|det|` of an integer matrix via its Smith form.
pub fn lattice_index(matrix: &[Vec<i64>]) -> BigInt {
    linalg::smith_normal_form(&to_big(matrix)).diagonal().iter().fold(BigInt::from(1), |acc, d| acc * d.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Weight {
        Weight::new(v.to_vec())
    }

    fn e(v: &[i64]) -> CharElt {
        CharElt::monomial(w(v))
    }

    #[test]
    fn trivial_and_cyclic_covers() {
        let id = CoverDatum::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(id.coset_reps(), &[w(&[0, 0])]);
        let two = CoverDatum::new(vec![vec![2]]).unwrap();
        assert_eq!(two.coset_reps(), &[w(&[0]), w(&[1])]);
        let three = CoverDatum::new(vec![vec![3]]).unwrap();
        assert_eq!(three.coset_reps(), &[w(&[0]), w(&[1]), w(&[2])]);
        assert_eq!(CoverDatum::new(vec![vec![-2]]).unwrap().index(), 2);
    }

    #[test]
    fn singular_matrix_rejected() {
        assert!(matches!(CoverDatum::new(vec![vec![1, 2], vec![2, 4]]), Err(Error::SingularMatrix)));
        assert!(matches!(CoverDatum::new(vec![vec![0]]), Err(Error::SingularMatrix)));
    }

    #[test]
    fn pullback_examples() {
        let two = CoverDatum::new(vec![vec![2]]).unwrap();
        assert_eq!(two.pullback(&e(&[0])).unwrap(), e(&[0]));
        assert_eq!(two.pullback(&e(&[1])).unwrap(), e(&[2]));
        assert_eq!(two.pullback(&(&e(&[1]) + &e(&[-1]))).unwrap(), &e(&[2]) + &e(&[-2]));
    }

    #[test]
    fn decompose_examples() {
        let two = CoverDatum::new(vec![vec![2]]).unwrap();
        let v = &e(&[1]) + &e(&[2]).scale(&BigInt::from(3));
        let parts = two.decompose(&v).unwrap();
        assert_eq!(parts, vec![(w(&[0]), e(&[1]).scale(&BigInt::from(3))), (w(&[1]), e(&[0]))]);
        assert_eq!(two.reassemble(&parts).unwrap(), v);

        let three = CoverDatum::new(vec![vec![3]]).unwrap();
        let parts = three.decompose(&e(&[4])).unwrap();
        assert_eq!(parts[1], (w(&[1]), e(&[1])));
        assert!(parts[0].1.is_zero() && parts[2].1.is_zero());

        let one = three.decompose(&e(&[0])).unwrap();
        assert_eq!(one[0].1, e(&[0]));
    }

    #[test]
    fn non_diagonal_cover() {
        let m = vec![vec![1, 1], vec![-1, 1]];
        let cover = CoverDatum::new(m.clone()).unwrap();
        assert_eq!(cover.index(), 2);
        assert_eq!(lattice_index(&m), BigInt::from(2));
        assert_eq!(cover.determinant(), 2);
        for nu in [w(&[0, 0]), w(&[1, 0]), w(&[3, -5]), w(&[-2, 7])] {
            let (c, lambda) = cover.reduce(&nu);
            assert_eq!(&cover.coset_reps()[c] + &cover.apply_matrix(&lambda), nu);
        }
        assert_eq!(cover.coset_reps()[0], w(&[0, 0]));
    }
}
