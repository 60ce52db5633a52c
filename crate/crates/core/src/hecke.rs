//! The Hecke algebra of divided differences as a left R(T)-module with basis
//! `(partial_w)`, its augmentation ideal, and the two invariance tests.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::charring::CharElt;
use crate::demazure::{delta_prime, partial, WordCheck};
use crate::error::{Error, Result};
use crate::expr::{OpExpr, OpFactor};
use crate::linalg;
use crate::repring::{box_points, SteinbergBasis};
use crate::rootdata::Weight;
use crate::weyl::WeylGroup;

/// `sum_w u_w partial_w`, keyed by the canonical key `w(rho)` of each `w`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeOp {
    coeffs: BTreeMap<Weight, CharElt>,
}

impl HeckeOp {
    pub fn new() -> Self {
        Self::default()
    }

    /// The basis element `partial_w` (coefficient 1).
    pub fn basis(w: &crate::weyl::WeylElt) -> Self {
        let mut op = Self::new();
        op.set(w.key().clone(), CharElt::one(w.key().rank()));
        op
    }

    /// Builds from `(word, coefficient)` pairs; words may be any word for the element.
    pub fn from_words<'a>(group: &WeylGroup, items: impl IntoIterator<Item = (&'a [usize], CharElt)>) -> Result<Self> {
        let mut op = Self::new();
        for (word, c) in items {
            let key = group.from_word(word)?.key().clone();
            let sum = &op.coefficient(&key) + &c;
            op.set(key, sum);
        }
        Ok(op)
    }

    pub fn set(&mut self, key: Weight, coeff: CharElt) {
        if coeff.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, coeff);
        }
    }

    /// Adds `coeff` to the coefficient of the element with key `key`.
    pub fn add(&mut self, key: &Weight, coeff: &CharElt) {
        let sum = &self.coefficient(key) + coeff;
        self.set(key.clone(), sum);
    }

    fn scaled_by(&self, f: &CharElt) -> HeckeOp {
        let mut out = HeckeOp::new();
        for (k, c) in &self.coeffs {
            out.set(k.clone(), f * c);
        }
        out
    }

    fn plus(&self, other: &HeckeOp) -> HeckeOp {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add(k, c);
        }
        out
    }

    pub fn coefficient(&self, key: &Weight) -> CharElt {
        self.coeffs.get(key).cloned().unwrap_or_default()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Weight, &CharElt)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// JSON array of `{"word": [...], "coeff": {...}}` in group order.
    pub fn to_json(&self, group: &WeylGroup) -> Value {
        let items: Vec<Value> = group
            .elements()
            .iter()
            .filter_map(|w| {
                self.coeffs.get(w.key()).map(|c| {
                    let word: Vec<usize> = w.word().iter().map(|j| j + 1).collect();
                    json!({ "word": word, "coeff": c.to_json() })
                })
            })
            .collect();
        Value::Array(items)
    }

    pub fn display<'a>(&'a self, group: &'a WeylGroup) -> impl fmt::Display + 'a {
        HeckeDisplay { op: self, group }
    }
}

struct HeckeDisplay<'a> {
    op: &'a HeckeOp,
    group: &'a WeylGroup,
}

impl fmt::Display for HeckeDisplay<'_> {
    /// One `[word] -> coefficient` line per nonzero basis coordinate.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.op.is_zero() {
            return writeln!(f, "0");
        }
        for w in self.group.elements() {
            if let Some(c) = self.op.coeffs.get(w.key()) {
                let word: Vec<String> = w.word().iter().map(|j| (j + 1).to_string()).collect();
                writeln!(f, "[{}] -> {}", word.join(","), c)?;
            }
        }
        Ok(())
    }
}

/// `Delta(u) = sum_w u_w partial_w(u)`.
pub fn apply(group: &WeylGroup, op: &HeckeOp, u: &CharElt) -> Result<CharElt> {
    let mut out = CharElt::zero();
    for (key, coeff) in &op.coeffs {
        let w = group
            .by_key(key)
            .ok_or_else(|| Error::SolveFailed(format!("{key} is not a Weyl group key")))?;
        out += &(coeff * &partial(group, w, u, WordCheck::Single)?);
    }
    Ok(out)
}

/// Coordinates of an operator expression in the `(partial_w)` basis.
///
/// Both sides are R(G)-linear, so it suffices to match them on a Steinberg
/// basis `(e_v)`: solve `sum_w u_w partial_w(e_v) = op(e_v)` for all `v`. The
/// system is solved by fraction-free elimination over R(T); every pivot
/// division is exact, and the final division by the determinant must be exact
/// for the coordinates to lie in R(T).
pub fn to_basis(group: &WeylGroup, basis: &SteinbergBasis, expr: &OpExpr) -> Result<HeckeOp> {
    let n = group.order();
    let mut rows: Vec<Vec<CharElt>> = Vec::with_capacity(n);
    for (_, lambda) in basis.weights() {
        let e_v = CharElt::monomial(lambda.clone());
        let mut row = Vec::with_capacity(n + 1);
        for w in group.elements() {
            row.push(partial(group, w, &e_v, WordCheck::Single)?);
        }
        row.push(expr.apply(group, &e_v)?);
        rows.push(row);
    }
    let solution = bareiss_solve(rows)?;
    let mut op = HeckeOp::new();
    for (w, coeff) in group.elements().iter().zip(solution) {
        op.set(w.key().clone(), coeff);
    }
    for (_, lambda) in basis.weights() {
        let e_v = CharElt::monomial(lambda.clone());
        if apply(group, &op, &e_v)? != expr.apply(group, &e_v)? {
            return Err(Error::SolveFailed(format!("solution does not reproduce the operator on e^{lambda}")));
        }
    }
    Ok(op)
}

/// Coordinates of an operator expression by rewriting, without any solve.
///
/// Uses `delta_j u = s_j(u) delta_j + delta'_j(u)` for multiplication operators,
/// `delta_j partial_w = partial_{s_j w}` when `s_j w > w` and `partial_w`
/// otherwise, `delta'_j = e^{alpha_j} (delta_j - 1)` and
/// `s_j = (1 - e^{alpha_j}) delta_j + e^{alpha_j}`.
pub fn normal_form(group: &WeylGroup, expr: &OpExpr) -> Result<HeckeOp> {
    let datum = group.datum();
    let rank = datum.rank();
    let mut op = HeckeOp::basis(group.identity());
    for factor in expr.factors.iter().rev() {
        op = match factor {
            OpFactor::Delta(j) => left_delta(group, *j, &op)?,
            OpFactor::DeltaPrime(j) => {
                let e_alpha = CharElt::monomial(datum.simple_root_weight(*j));
                left_delta(group, *j, &op)?.plus(&op.scaled_by(&CharElt::constant(rank, -1))).scaled_by(&e_alpha)
            }
            OpFactor::Reflect(j) => {
                let e_alpha = CharElt::monomial(datum.simple_root_weight(*j));
                let one_minus = &CharElt::one(rank) - &e_alpha;
                left_delta(group, *j, &op)?.scaled_by(&one_minus).plus(&op.scaled_by(&e_alpha))
            }
            OpFactor::Top => {
                let mut acc = op;
                for &j in group.longest().word().iter().rev() {
                    acc = left_delta(group, j, &acc)?;
                }
                acc
            }
            OpFactor::Mul(f) => {
                if let Some(r) = f.rank() {
                    if r != rank {
                        return Err(Error::RankMismatch { expected: rank, got: r });
                    }
                }
                op.scaled_by(f)
            }
        };
    }
    Ok(op)
}

/// `delta_j * op`.
fn left_delta(group: &WeylGroup, j: usize, op: &HeckeOp) -> Result<HeckeOp> {
    let datum = group.datum();
    let s_j = group.simple_reflection(j)?;
    let mut out = HeckeOp::new();
    for (key, u) in &op.coeffs {
        let w = group.by_key(key).ok_or_else(|| Error::SolveFailed(format!("{key} is not a Weyl group key")))?;
        let product = group.multiply(s_j, w);
        let target = if product.length() > w.length() { product } else { w };
        out.add(target.key(), &u.reflect(datum, j));
        out.add(key, &delta_prime(datum, j, u)?);
    }
    Ok(out)
}

fn exact(num: &CharElt, den: &CharElt) -> Result<CharElt> {
    num.divide_by(den).map_err(|e| Error::SolveFailed(format!("inexact elimination step: {e}")))
}

/// Solves an `n x (n+1)` augmented system over R(T).
fn bareiss_solve(mut a: Vec<Vec<CharElt>>) -> Result<Vec<CharElt>> {
    let n = a.len();
    let rank = a
        .iter()
        .flatten()
        .find_map(CharElt::rank)
        .ok_or_else(|| Error::SolveFailed("empty system".into()))?;
    let mut prev = CharElt::one(rank);
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&r| !a[r][k].is_zero())
            .min_by_key(|&r| a[r][k].len())
            .ok_or_else(|| Error::SolveFailed("singular system".into()))?;
        a.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..=n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = exact(&num, &prev)?;
            }
            a[i][k] = CharElt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = prev;
    // y_i = det * x_i lies in R(T) by Cramer's rule
    let mut y = vec![CharElt::zero(); n];
    for i in (0..n).rev() {
        let mut num = &det * &a[i][n];
        for j in i + 1..n {
            num -= &(&a[i][j] * &y[j]);
        }
        y[i] = exact(&num, &a[i][i])?;
    }
    y.iter()
        .map(|yi| yi.divide_by(&det).map_err(|_| Error::SolveFailed("coordinate does not lie in R(T)".into())))
        .collect()
}

/// `Delta(1) == 0`. Since `partial_w(1) = 1` for every `w`, this is `sum_w u_w == 0`.
pub fn in_augmentation_ideal(group: &WeylGroup, op: &HeckeOp) -> Result<bool> {
    Ok(apply(group, op, &CharElt::one(group.datum().rank()))?.is_zero())
}

/// Outcome of an invariance test, with the failing simple index and the
/// offending value (`delta'_j(u)` or `s_j(u)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariance {
    pub witness: Option<(usize, CharElt)>,
}

impl Invariance {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Invariance under the augmentation ideal: `partial'_w(u) = 0` for all `w != 1`.
///
/// Only simple `j` need checking: `partial'_{s_j} = delta'_j`, and any
/// `partial'_w` with `w != 1` ends (rightmost) with some `delta'_j`.
pub fn is_ideal_invariant(group: &WeylGroup, u: &CharElt) -> Result<Invariance> {
    let datum = group.datum();
    for j in 0..datum.rank() {
        let value = delta_prime(datum, j, u)?;
        if !value.is_zero() {
            return Ok(Invariance { witness: Some((j, value)) });
        }
    }
    Ok(Invariance { witness: None })
}

/// Classical invariance: `s_j(u) = u` for every simple `j`.
pub fn is_weyl_invariant(group: &WeylGroup, u: &CharElt) -> Result<Invariance> {
    let datum = group.datum();
    if let Some(rank) = u.rank() {
        if rank != datum.rank() {
            return Err(Error::RankMismatch { expected: datum.rank(), got: rank });
        }
    }
    for j in 0..datum.rank() {
        let image = u.reflect(datum, j);
        if &image != u {
            return Ok(Invariance { witness: Some((j, image)) });
        }
    }
    Ok(Invariance { witness: None })
}

/// The two invariant sublattices of the Z-module of elements supported in
/// `[-radius, radius]^rank`, as Z-bases of integer kernels.
#[derive(Clone, Debug)]
pub struct InvariantLattices {
    pub points: Vec<Weight>,
    ideal_equations: Vec<Vec<BigInt>>,
    weyl_equations: Vec<Vec<BigInt>>,
    /// Ranks of the two lattices.
    pub ideal_rank: usize,
    pub weyl_rank: usize,
    pub ideal_generators: Vec<Vec<BigInt>>,
    pub weyl_generators: Vec<Vec<BigInt>>,
}

impl InvariantLattices {
    pub fn compute(group: &WeylGroup, radius: i64) -> Result<Self> {
        let datum = group.datum();
        let points = box_points(datum.rank(), radius);
        let images = |f: &dyn Fn(usize, &CharElt) -> Result<CharElt>| -> Result<Vec<Vec<BigInt>>> {
            let mut columns = Vec::with_capacity(points.len());
            for mu in &points {
                let u = CharElt::monomial(mu.clone());
                let mut stacked = Vec::new();
                for j in 0..datum.rank() {
                    stacked.push(f(j, &u)?);
                }
                columns.push(stacked);
            }
            Ok(to_matrix(&columns, datum.rank()))
        };
        let ideal_equations = images(&|j, u| delta_prime(datum, j, u))?;
        let weyl_equations = images(&|j, u| Ok(&u.reflect(datum, j) - u))?;
        let (_, ideal_generators) = linalg::integer_kernel(&ideal_equations, points.len());
        let (_, weyl_generators) = linalg::integer_kernel(&weyl_equations, points.len());
        Ok(InvariantLattices {
            points,
            ideal_equations,
            weyl_equations,
            ideal_rank: ideal_generators.len(),
            weyl_rank: weyl_generators.len(),
            ideal_generators,
            weyl_generators,
        })
    }

    /// Same rank and each lattice's generators satisfy the other's equations.
    pub fn agree(&self) -> bool {
        let satisfies = |eqs: &[Vec<BigInt>], x: &[BigInt]| linalg::mat_vec(eqs, x).iter().all(Zero::is_zero);
        self.ideal_generators.len() == self.weyl_generators.len()
            && self.ideal_generators.iter().all(|g| satisfies(&self.weyl_equations, g))
            && self.weyl_generators.iter().all(|g| satisfies(&self.ideal_equations, g))
    }

    pub fn generator_element(&self, generator: &[BigInt]) -> CharElt {
        CharElt::from_terms(self.points.iter().cloned().zip(generator.iter().cloned()))
    }
}

/// Row-per-(equation index, weight) integer matrix from per-column lists of images.
fn to_matrix(columns: &[Vec<CharElt>], blocks: usize) -> Vec<Vec<BigInt>> {
    let mut row_index: BTreeMap<(usize, &Weight), usize> = BTreeMap::new();
    for col in columns {
        for (b, img) in col.iter().enumerate().take(blocks) {
            for w in img.support() {
                let next = row_index.len();
                row_index.entry((b, w)).or_insert(next);
            }
        }
    }
    let mut m = vec![vec![BigInt::zero(); columns.len()]; row_index.len()];
    for (c, col) in columns.iter().enumerate() {
        for (b, img) in col.iter().enumerate() {
            for (w, coeff) in img.terms() {
                m[row_index[&(b, w)]][c] = coeff.clone();
            }
        }
    }
    m
}
