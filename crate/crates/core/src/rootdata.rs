//! Finite root systems built from Cartan data.
//!
//! Cartan convention: `cartan[i][j] = <alpha_j, alpha_i^vee>`, so column `j` is the
//! simple root `alpha_j` written in fundamental-weight coordinates. Under this
//! convention the simple reflection acts on weights by
//! `s_j(lambda)_i = lambda_i - lambda_j * cartan[i][j]`.
//!
//! For the doubly-laced types the long/short assignment follows Bourbaki:
//! in `Bn` the last simple root is short, in `Cn` it is long, and in `G2`
//! the first simple root is short.
//!
//! Simple indices are 0-based throughout the library; words and indices are
//! only shifted to 1-based at the serialization boundary.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer weight in fundamental-weight coordinates, so `<lambda, alpha_j^vee> = coords[j]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|&c| c * k).collect())
    }

    /// `self + k * other`, the workhorse of root-string arithmetic.
    pub fn add_scaled(&self, other: &Weight, k: i64) -> Weight {
        debug_assert_eq!(self.rank(), other.rank());
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        self.add_scaled(rhs, 1)
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        self.add_scaled(rhs, -1)
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scaled(-1)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A root carried in three coordinate systems: simple roots, fundamental weights
/// and simple coroots (the latter gives `<mu, alpha^vee>` as a dot product).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    root_coords: Vec<i64>,
    weight: Weight,
    coroot_coords: Vec<i64>,
}

impl Root {
    pub fn root_coords(&self) -> &[i64] {
        &self.root_coords
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn coroot_coords(&self) -> &[i64] {
        &self.coroot_coords
    }

    pub fn is_positive(&self) -> bool {
        self.root_coords.iter().all(|&c| c >= 0) && self.root_coords.iter().any(|&c| c > 0)
    }

    /// `<mu, alpha^vee>`.
    pub fn copairing(&self, mu: &Weight) -> i64 {
        self.coroot_coords.iter().zip(mu.coords()).map(|(a, b)| a * b).sum()
    }

    pub fn height(&self) -> i64 {
        self.root_coords.iter().sum()
    }
}

impl Neg for &Root {
    type Output = Root;
    fn neg(self) -> Root {
        Root {
            root_coords: self.root_coords.iter().map(|c| -c).collect(),
            weight: -&self.weight,
            coroot_coords: self.coroot_coords.iter().map(|c| -c).collect(),
        }
    }
}

pub const NAMED_TYPES: &[&str] = &["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D4", "G2"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    name: String,
    cartan: Vec<Vec<i64>>,
    /// `d_i = (alpha_i, alpha_i) / 2`, scaled to coprime positive integers.
    symmetrizer: Vec<i64>,
    adjugate: Vec<Vec<i64>>,
    positive_roots: Vec<Root>,
    weyl_vector: Weight,
}

impl RootDatum {
    /// Accepts a named type (`"A2"`, `"G2"`, ...) or a JSON array-of-arrays Cartan matrix.
    pub fn parse(spec: &str) -> Result<Self> {
        let trimmed = spec.trim();
        if trimmed.starts_with('[') {
            let cartan: Vec<Vec<i64>> = serde_json::from_str(trimmed)
                .map_err(|e| Error::InvalidCartan(format!("not a JSON integer matrix: {e}")))?;
            Self::from_cartan(cartan)
        } else {
            Self::named(trimmed)
        }
    }

    pub fn named(name: &str) -> Result<Self> {
        let (family, rank) = split_type_name(name)?;
        let cartan = match family {
            'A' if rank >= 1 => chain(rank),
            'B' if rank >= 2 => {
                let mut a = chain(rank);
                a[rank - 2][rank - 1] = -1;
                a[rank - 1][rank - 2] = -2;
                a
            }
            'C' if rank >= 2 => {
                let mut a = chain(rank);
                a[rank - 2][rank - 1] = -2;
                a[rank - 1][rank - 2] = -1;
                a
            }
            'D' if rank >= 4 => {
                let mut a = chain(rank);
                a[rank - 2][rank - 1] = 0;
                a[rank - 1][rank - 2] = 0;
                a[rank - 3][rank - 1] = -1;
                a[rank - 1][rank - 3] = -1;
                a
            }
            'G' if rank == 2 => vec![vec![2, -3], vec![-1, 2]],
            _ => return Err(Error::UnknownType(name.to_string())),
        };
        let mut datum = Self::from_cartan(cartan)?;
        datum.name = name.to_string();
        Ok(datum)
    }

    pub fn from_cartan(cartan: Vec<Vec<i64>>) -> Result<Self> {
        let rank = cartan.len();
        if rank == 0 {
            return Err(Error::InvalidCartan("empty matrix".into()));
        }
        for (i, row) in cartan.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::InvalidCartan(format!("row {} has length {}", i + 1, row.len())));
            }
            if row[i] != 2 {
                return Err(Error::InvalidCartan(format!("diagonal entry {} is not 2", i + 1)));
            }
            for (j, &a) in row.iter().enumerate() {
                if i == j {
                    continue;
                }
                if a > 0 {
                    return Err(Error::InvalidCartan(format!("positive off-diagonal entry at ({},{})", i + 1, j + 1)));
                }
                if (a == 0) != (cartan[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!("zero pattern not symmetric at ({},{})", i + 1, j + 1)));
                }
            }
        }
        for k in 1..=rank {
            let minor = determinant(&cartan[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>());
            if minor <= 0 {
                return Err(Error::NotFiniteType(format!("leading principal minor of order {k} is {minor}")));
            }
        }
        let symmetrizer = symmetrizer(&cartan)?;
        let mut datum = RootDatum {
            name: format!("{cartan:?}"),
            weyl_vector: Weight(vec![1; rank]),
            adjugate: adjugate(&cartan),
            cartan,
            symmetrizer,
            positive_roots: Vec::new(),
        };
        datum.positive_roots = datum.reflection_closure()?;
        Ok(datum)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    /// Equals the length of the longest Weyl group element.
    pub fn longest_length(&self) -> usize {
        self.positive_roots.len()
    }

    /// rho = (1, ..., 1) in fundamental coordinates.
    pub fn weyl_vector(&self) -> &Weight {
        &self.weyl_vector
    }

    pub fn check_index(&self, j: usize) -> Result<()> {
        if j < self.rank() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: j, rank: self.rank() })
        }
    }

    pub fn check_weight(&self, lambda: &Weight) -> Result<()> {
        if lambda.rank() == self.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch { expected: self.rank(), got: lambda.rank() })
        }
    }

    /// Simple root `alpha_j` as a full [`Root`].
    pub fn simple_root(&self, j: usize) -> &Root {
        let mut unit = vec![0; self.rank()];
        unit[j] = 1;
        self.positive_roots
            .iter()
            .find(|r| r.root_coords == unit)
            .expect("simple roots are always positive roots")
    }

    /// Simple root `alpha_j` in fundamental-weight coordinates (column `j` of the Cartan matrix).
    pub fn simple_root_weight(&self, j: usize) -> Weight {
        Weight(self.cartan.iter().map(|row| row[j]).collect())
    }

    pub fn reflect_simple(&self, j: usize, lambda: &Weight) -> Result<Weight> {
        self.check_index(j)?;
        self.check_weight(lambda)?;
        Ok(self.reflect_unchecked(j, lambda))
    }

    pub(crate) fn reflect_unchecked(&self, j: usize, lambda: &Weight) -> Weight {
        let lj = lambda.0[j];
        if lj == 0 {
            return lambda.clone();
        }
        Weight(lambda.0.iter().zip(&self.cartan).map(|(&l, row)| l - lj * row[j]).collect())
    }

    /// `<lambda, alpha_j^vee>`.
    pub fn pairing(&self, lambda: &Weight, j: usize) -> Result<i64> {
        self.check_index(j)?;
        self.check_weight(lambda)?;
        Ok(lambda.0[j])
    }

    /// Converts simple-root coordinates to fundamental-weight coordinates.
    pub fn root_to_weight(&self, root_coords: &[i64]) -> Weight {
        Weight(
            self.cartan
                .iter()
                .map(|row| row.iter().zip(root_coords).map(|(a, c)| a * c).sum())
                .collect(),
        )
    }

    /// `det(A) * A^{-1} lambda`: simple-root coordinates scaled to integers.
    ///
    /// Lexicographic order on these refines the dominance order.
    pub fn scaled_root_coords(&self, lambda: &Weight) -> Vec<i64> {
        self.adjugate
            .iter()
            .map(|row| row.iter().zip(lambda.coords()).map(|(a, l)| a * l).sum())
            .collect()
    }

    /// Checks `2 rho = sum of positive roots` exactly.
    pub fn two_rho_check(&self) -> bool {
        let sum = self
            .positive_roots
            .iter()
            .fold(Weight::zero(self.rank()), |acc, r| &acc + &r.weight);
        sum == self.weyl_vector.scaled(2)
    }

    /// Symmetric invariant form `(mu, beta)` where `mu` is a weight and `beta` is in
    /// simple-root coordinates, in units of the integer symmetrizer.
    pub fn form_weight_root(&self, mu: &Weight, root_coords: &[i64]) -> i64 {
        mu.0.iter()
            .zip(root_coords)
            .zip(&self.symmetrizer)
            .map(|((m, c), d)| m * c * d)
            .sum()
    }

    /// `det(A) * (mu, mu)` for the invariant form; positive for nonzero `mu`.
    pub fn scaled_norm(&self, mu: &Weight) -> i64 {
        self.form_weight_root(mu, &self.scaled_root_coords(mu))
    }

    fn make_root(&self, root_coords: Vec<i64>) -> Root {
        let weight = self.root_to_weight(&root_coords);
        // (alpha, alpha) = sum_j c_j d_j <alpha, alpha_j^vee>
        let norm: i64 = self.form_weight_root(&weight, &root_coords);
        let coroot_coords = root_coords
            .iter()
            .zip(&self.symmetrizer)
            .map(|(c, d)| {
                debug_assert_eq!((2 * c * d) % norm, 0);
                2 * c * d / norm
            })
            .collect();
        Root { root_coords, weight, coroot_coords }
    }

    fn reflection_closure(&self) -> Result<Vec<Root>> {
        let rank = self.rank();
        let mut found: Vec<Vec<i64>> = (0..rank)
            .map(|j| {
                let mut e = vec![0; rank];
                e[j] = 1;
                e
            })
            .collect();
        let mut frontier = found.clone();
        let bound = 4 * rank * rank;
        let mut iterations = 0;
        while !frontier.is_empty() {
            iterations += 1;
            if iterations > bound {
                return Err(Error::NotFiniteType(format!(
                    "reflection closure did not stabilise within {bound} iterations"
                )));
            }
            let mut next = Vec::new();
            for beta in &frontier {
                let w = self.root_to_weight(beta);
                for j in 0..rank {
                    let mut image = beta.clone();
                    image[j] -= w.0[j];
                    if image.iter().all(|&c| c >= 0) && !found.contains(&image) {
                        found.push(image.clone());
                        next.push(image);
                    }
                }
            }
            frontier = next;
        }
        found.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        Ok(found.into_iter().map(|c| self.make_root(c)).collect())
    }
}

fn split_type_name(name: &str) -> Result<(char, usize)> {
    let mut chars = name.chars();
    let family = chars.next().ok_or_else(|| Error::UnknownType(name.to_string()))?;
    let rank: usize = chars.as_str().parse().map_err(|_| Error::UnknownType(name.to_string()))?;
    Ok((family.to_ascii_uppercase(), rank))
}

fn chain(rank: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0; rank]; rank];
    for i in 0..rank {
        a[i][i] = 2;
        if i + 1 < rank {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    a
}

fn symmetrizer(cartan: &[Vec<i64>]) -> Result<Vec<i64>> {
    let n = cartan.len();
    let mut d: Vec<Option<Ratio<i64>>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Ratio::from_integer(1));
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let di = d[i].unwrap();
            for j in 0..n {
                if i == j || cartan[i][j] == 0 {
                    continue;
                }
                // d_i A_ij = d_j A_ji
                let dj = di * Ratio::new(cartan[i][j], cartan[j][i]);
                match d[j] {
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                    Some(existing) if existing != dj => {
                        return Err(Error::NotFiniteType("Cartan matrix is not symmetrizable".into()));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let d: Vec<Ratio<i64>> = d.into_iter().map(Option::unwrap).collect();
    let lcm = d.iter().fold(1i64, |acc, r| num_integer::lcm(acc, *r.denom()));
    let ints: Vec<i64> = d.iter().map(|r| (r * lcm).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
    Ok(ints.into_iter().map(|x| x / g).collect())
}

/// Exact determinant by fraction-free elimination.
pub(crate) fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[i][j] = sign * determinant(&minor) as i64;
        }
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root_set(datum: &RootDatum) -> Vec<Vec<i64>> {
        let mut v: Vec<_> = datum.positive_roots().iter().map(|r| r.root_coords().to_vec()).collect();
        v.sort();
        v
    }

    #[test]
    fn a1_basics() {
        let a1 = RootDatum::named("A1").unwrap();
        assert_eq!(a1.positive_roots().len(), 1);
        assert_eq!(a1.weyl_vector(), &Weight::new(vec![1]));
        assert_eq!(a1.reflect_simple(0, &Weight::new(vec![1])).unwrap(), Weight::new(vec![-1]));
    }

    #[test]
    fn a2_roots_and_reflection() {
        let a2 = RootDatum::named("A2").unwrap();
        assert_eq!(root_set(&a2), vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(a2.reflect_simple(0, &Weight::new(vec![1, 0])).unwrap(), Weight::new(vec![-1, 1]));
        assert_eq!(a2.pairing(&a2.simple_root_weight(0), 0).unwrap(), 2);
        assert_eq!(a2.pairing(&a2.simple_root_weight(1), 0).unwrap(), -1);
    }

    #[test]
    fn root_counts_for_named_types() {
        for (name, n) in [("A1", 1), ("A2", 3), ("A3", 6), ("B2", 4), ("B3", 9), ("C2", 4), ("C3", 9), ("D4", 12), ("G2", 6)] {
            let d = RootDatum::named(name).unwrap();
            assert_eq!(d.positive_roots().len(), n, "{name}");
            assert!(d.two_rho_check(), "{name}");
        }
    }

    #[test]
    fn b2_long_and_short_roots() {
        let b2 = RootDatum::named("B2").unwrap();
        assert_eq!(root_set(&b2), vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2]]);
        assert_eq!(b2.symmetrizer(), &[2, 1]);
        // coroot of the short root a1 + a2 is 2 a1^v + a2^v
        let short = b2.positive_roots().iter().find(|r| r.root_coords() == [1, 1]).unwrap();
        assert_eq!(short.coroot_coords(), &[2, 1]);
        assert_eq!(short.copairing(short.weight()), 2);
    }

    #[test]
    fn g2_highest_root() {
        let g2 = RootDatum::named("G2").unwrap();
        let top = g2.positive_roots().last().unwrap();
        assert_eq!(top.root_coords(), &[3, 2]);
        assert_eq!(top.height(), 5);
        for r in g2.positive_roots() {
            assert_eq!(r.copairing(r.weight()), 2);
        }
    }

    #[test]
    fn simple_reflection_moves_rho_by_simple_root() {
        for name in NAMED_TYPES {
            let d = RootDatum::named(name).unwrap();
            for j in 0..d.rank() {
                let image = d.reflect_simple(j, d.weyl_vector()).unwrap();
                assert_eq!(image, d.weyl_vector() - &d.simple_root_weight(j));
            }
        }
    }

    #[test]
    fn rejects_bad_cartan_matrices() {
        assert!(matches!(RootDatum::from_cartan(vec![vec![2, -2], vec![-2, 2]]), Err(Error::NotFiniteType(_))));
        assert!(matches!(RootDatum::from_cartan(vec![vec![2, 1], vec![1, 2]]), Err(Error::InvalidCartan(_))));
        assert!(matches!(RootDatum::from_cartan(vec![vec![2, -1], vec![0, 2]]), Err(Error::InvalidCartan(_))));
        assert!(matches!(RootDatum::named("E9"), Err(Error::UnknownType(_))));
        assert!(matches!(RootDatum::parse("[[2,-1],[-1,2]]").map(|d| d.rank()), Ok(2)));
    }

    #[test]
    fn index_out_of_range() {
        let a2 = RootDatum::named("A2").unwrap();
        assert_eq!(
            a2.reflect_simple(2, &Weight::zero(2)),
            Err(Error::IndexOutOfRange { index: 2, rank: 2 })
        );
    }

    #[test]
    fn scaled_root_coords_refine_dominance() {
        let a2 = RootDatum::named("A2").unwrap();
        // (0,3) lies above (1,1) in dominance though (1,1) is lex-larger in fundamental coordinates
        let hi = a2.scaled_root_coords(&Weight::new(vec![0, 3]));
        let lo = a2.scaled_root_coords(&Weight::new(vec![1, 1]));
        assert!(hi > lo);
    }
}
