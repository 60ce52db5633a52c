//! The character ring R(T): finitely supported integer combinations of monomials
//! `e^lambda` over the weight lattice, i.e. Laurent polynomials with big-integer
//! coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rootdata::{Root, RootDatum, Weight};
use crate::weyl::{WeylElt, WeylGroup};

/// An element of R(T). Zero coefficients are never stored, so structural
/// equality is ring equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct CharElt {
    terms: BTreeMap<Weight, BigInt>,
}

impl CharElt {
    pub fn zero() -> Self {
        CharElt::default()
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(Weight::zero(rank))
    }

    pub fn monomial(lambda: Weight) -> Self {
        Self::term(lambda, BigInt::one())
    }

    pub fn term(lambda: Weight, coeff: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(lambda, coeff);
        }
        CharElt { terms }
    }

    pub fn constant(rank: usize, c: impl Into<BigInt>) -> Self {
        Self::term(Weight::zero(rank), c.into())
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Weight, C)>,
        C: Into<BigInt>,
    {
        let mut out = CharElt::zero();
        for (w, c) in terms {
            out.add_term(w, c.into());
        }
        out
    }

    pub fn add_term(&mut self, lambda: Weight, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(lambda) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic weight order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Weight, &BigInt)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Weight> {
        self.terms.keys()
    }

    pub fn coefficient(&self, lambda: &Weight) -> BigInt {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    /// Rank of the weights in the support, if any.
    pub fn rank(&self) -> Option<usize> {
        self.terms.keys().next().map(Weight::rank)
    }

    /// Evaluation at the identity of the torus (sum of coefficients); for a
    /// character this is the dimension.
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn scale(&self, n: &BigInt) -> CharElt {
        if n.is_zero() {
            return CharElt::zero();
        }
        CharElt { terms: self.terms.iter().map(|(w, c)| (w.clone(), c * n)).collect() }
    }

    /// Multiplication by the monomial `e^lambda`.
    pub fn shift(&self, lambda: &Weight) -> CharElt {
        CharElt { terms: self.terms.iter().map(|(w, c)| (w + lambda, c.clone())).collect() }
    }

    /// Reindexes every exponent through `f`; `f` must be injective.
    pub fn map_weights(&self, f: impl Fn(&Weight) -> Weight) -> CharElt {
        let terms: BTreeMap<Weight, BigInt> = self.terms.iter().map(|(w, c)| (f(w), c.clone())).collect();
        debug_assert_eq!(terms.len(), self.terms.len(), "map_weights needs an injective map");
        CharElt { terms }
    }

    /// `s_j(u)`, the action of a simple reflection.
    pub fn reflect(&self, datum: &RootDatum, j: usize) -> CharElt {
        self.map_weights(|w| datum.reflect_unchecked(j, w))
    }

    /// Componentwise coordinate bounds `(min, max)` of the support.
    pub fn bounding_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut lo = first.coords().to_vec();
        let mut hi = lo.clone();
        for w in it {
            for (i, &c) in w.coords().iter().enumerate() {
                lo[i] = lo[i].min(c);
                hi[i] = hi[i].max(c);
            }
        }
        Some((lo, hi))
    }

    pub fn pow(&self, rank: usize, exp: u32) -> CharElt {
        let mut acc = CharElt::one(rank);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient by `1 - e^{-alpha}`.
    ///
    /// Terms are grouped by their line `mu + Z alpha`. Along one line with
    /// positions `k` (so `mu = base + k alpha`), `q (1 - e^{-alpha}) = u` reads
    /// `u_k = q_k - q_{k+1}`, hence `q_k` is the tail sum of `u` from the top of
    /// the line down to `k`. This is the greedy long division, and the quotient
    /// support on each line stays within the line's extent. The division is
    /// exact iff every line sums to zero.
    pub fn divide_exact(&self, alpha: &Root) -> Result<CharElt> {
        let step = alpha.weight();
        let mut lines: HashMap<Weight, Vec<(i64, &BigInt)>> = HashMap::new();
        for (mu, c) in &self.terms {
            let k = Integer::div_floor(&alpha.copairing(mu), &2);
            lines.entry(mu.add_scaled(step, -k)).or_default().push((k, c));
        }
        let mut quotient = CharElt::zero();
        for (base, mut line) in lines {
            line.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
            let mut running = BigInt::zero();
            let mut idx = 0;
            let mut k = line[0].0;
            let bottom = line.last().unwrap().0;
            while k > bottom {
                while idx < line.len() && line[idx].0 == k {
                    running += line[idx].1;
                    idx += 1;
                }
                if !running.is_zero() {
                    quotient.terms.insert(base.add_scaled(step, k), running.clone());
                }
                k -= 1;
            }
            while idx < line.len() {
                running += line[idx].1;
                idx += 1;
            }
            if !running.is_zero() {
                return Err(Error::NotDivisible(format!(
                    "coefficients along the {} string through {} sum to {}, not 0",
                    step, base, running
                )));
            }
        }
        Ok(quotient)
    }

    /// Exact quotient `self / divisor` in R(T), by lexicographic long division.
    ///
    /// In an exact quotient each coordinate of every exponent lies between
    /// `min(u) - min(v)` and `max(u) - max(v)`; a quotient term outside that box
    /// proves non-divisibility, which bounds the loop.
    pub fn divide_by(&self, divisor: &CharElt) -> Result<CharElt> {
        let (lead_w, lead_c) = divisor
            .terms
            .last_key_value()
            .ok_or_else(|| Error::NotDivisible("division by zero".into()))?;
        let Some((ulo, uhi)) = self.bounding_box() else {
            return Ok(CharElt::zero());
        };
        let (vlo, vhi) = divisor.bounding_box().unwrap();
        let qlo: Vec<i64> = ulo.iter().zip(&vlo).map(|(a, b)| a - b).collect();
        let qhi: Vec<i64> = uhi.iter().zip(&vhi).map(|(a, b)| a - b).collect();
        let mut rem = self.clone();
        let mut quotient = CharElt::zero();
        while let Some((w, c)) = rem.terms.last_key_value() {
            let (q, r) = c.div_rem(lead_c);
            if !r.is_zero() {
                return Err(Error::NotDivisible(format!("coefficient {c} not divisible by {lead_c}")));
            }
            let t = w - lead_w;
            let inside = t.coords().iter().enumerate().all(|(i, &x)| qlo[i] <= x && x <= qhi[i]);
            if !inside {
                return Err(Error::NotDivisible(format!("quotient exponent {t} escapes the support bound")));
            }
            for (vw, vc) in &divisor.terms {
                rem.add_term(vw + &t, -(vc * &q));
            }
            quotient.add_term(t, q);
        }
        Ok(quotient)
    }

    /// JSON form `{"terms":[{"w":[...],"c":n}, ...]}` sorted by `w`. Coefficients
    /// outside the `i64` range are written as decimal strings.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(w, c)| json!({ "w": w, "c": int_json(c) }))
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(value: &Value) -> Result<CharElt> {
        let bad = |msg: &str| Error::Parse { pos: 0, msg: msg.to_string() };
        let terms = value.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing `terms` array"))?;
        let mut out = CharElt::zero();
        for t in terms {
            let w: Vec<i64> = serde_json::from_value(t.get("w").cloned().ok_or_else(|| bad("term without `w`"))?)
                .map_err(|_| bad("`w` must be an integer array"))?;
            let c = match t.get("c") {
                Some(Value::Number(n)) => n.as_i64().map(BigInt::from).ok_or_else(|| bad("`c` must be an integer"))?,
                Some(Value::String(s)) => s.parse::<BigInt>().map_err(|_| bad("`c` string is not an integer"))?,
                _ => return Err(bad("term without integer `c`")),
            };
            out.add_term(Weight::new(w), c);
        }
        Ok(out)
    }
}

/// An integer as a JSON number, or as a decimal string outside the `i64` range.
pub fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(small) => json!(small),
        None => json!(n.to_string()),
    }
}

impl fmt::Display for CharElt {
    /// Canonical text form, highest weight first: `e[2] + e[0] + e[-2]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "e{w}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CharElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharElt({self})")
    }
}

impl AddAssign<&CharElt> for CharElt {
    fn add_assign(&mut self, rhs: &CharElt) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl SubAssign<&CharElt> for CharElt {
    fn sub_assign(&mut self, rhs: &CharElt) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c);
        }
    }
}

impl Add for &CharElt {
    type Output = CharElt;
    fn add(self, rhs: &CharElt) -> CharElt {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &CharElt {
    type Output = CharElt;
    fn sub(self, rhs: &CharElt) -> CharElt {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &CharElt {
    type Output = CharElt;
    fn neg(self) -> CharElt {
        CharElt { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

impl Mul for &CharElt {
    type Output = CharElt;
    fn mul(self, rhs: &CharElt) -> CharElt {
        let (small, large) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = CharElt::zero();
        for (w1, c1) in &small.terms {
            for (w2, c2) in &large.terms {
                out.add_term(w1 + w2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for CharElt {
            type Output = CharElt;
            fn $method(self, rhs: CharElt) -> CharElt {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// `w(u)`, acting on exponents: `w(e^lambda) = e^{w lambda}`.
pub fn weyl_act(group: &WeylGroup, w: &WeylElt, u: &CharElt) -> CharElt {
    if w.is_identity() {
        return u.clone();
    }
    u.map_weights(|lambda| group.act(w, lambda))
}

/// `d = prod over positive roots of (1 - e^{-alpha})`.
pub fn weyl_denominator(datum: &RootDatum) -> CharElt {
    let one = CharElt::one(datum.rank());
    datum.positive_roots().iter().fold(one.clone(), |acc, alpha| {
        let factor = &one - &CharElt::monomial(-alpha.weight());
        &acc * &factor
    })
}

/// `A(u) = sum_w (-1)^{l(w)} e^{-rho} w(e^rho u)`.
pub fn antisymmetrize(group: &WeylGroup, u: &CharElt) -> CharElt {
    let rho = group.datum().weyl_vector();
    let shifted = u.shift(rho);
    let images: Vec<CharElt> = group
        .elements()
        .par_iter()
        .map(|w| {
            let image = weyl_act(group, w, &shifted);
            if w.sign() < 0 {
                -&image
            } else {
                image
            }
        })
        .collect();
    let mut sum = CharElt::zero();
    for image in &images {
        sum += image;
    }
    sum.shift(&-rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Weight {
        Weight::new(v.to_vec())
    }

    fn x(k: i64) -> CharElt {
        CharElt::monomial(w(&[k]))
    }

    #[test]
    fn ring_basics() {
        assert_eq!(&x(2) * &x(-5), x(-3));
        let u = &x(3) + &x(-1);
        assert!((&u + &u.scale(&BigInt::from(-1))).is_zero());
        let prod = &(&x(1) + &x(-1)) * &(&x(1) - &x(-1));
        assert_eq!(prod, &x(2) - &x(-2));
    }

    #[test]
    fn display_is_descending() {
        let u = CharElt::from_terms([(w(&[1, 0]), 2), (w(&[-1, 2]), -1)]);
        assert_eq!(u.to_string(), "2*e[1,0] - e[-1,2]");
        assert_eq!((&x(2) + &(&x(0) + &x(-2))).to_string(), "e[2] + e[0] + e[-2]");
        assert_eq!((-&x(1)).to_string(), "-e[1]");
        assert_eq!(CharElt::zero().to_string(), "0");
    }

    #[test]
    fn divide_exact_a1() {
        let a1 = RootDatum::named("A1").unwrap();
        let alpha = a1.simple_root(0);
        let d = &x(0) - &x(-2);
        assert_eq!(d.divide_exact(alpha).unwrap(), x(0));
        assert_eq!((&x(1) - &x(-3)).divide_exact(alpha).unwrap(), &x(1) + &x(-1));
        assert!(matches!(x(1).divide_exact(alpha), Err(Error::NotDivisible(_))));
        assert!(CharElt::zero().divide_exact(alpha).unwrap().is_zero());
    }

    #[test]
    fn divide_exact_with_gaps_in_a_line() {
        let a1 = RootDatum::named("A1").unwrap();
        // x^5 - x^-5 = (1 - x^-2)(x^5 + x^3 + x + x^-1 + x^-3)
        let q = (&x(5) - &x(-5)).divide_exact(a1.simple_root(0)).unwrap();
        assert_eq!(q.len(), 5);
        assert_eq!(&q * &(&x(0) - &x(-2)), &x(5) - &x(-5));
    }

    #[test]
    fn divide_exact_by_non_simple_root() {
        let b2 = RootDatum::named("B2").unwrap();
        for alpha in b2.positive_roots() {
            let one = CharElt::one(2);
            let factor = &one - &CharElt::monomial(-alpha.weight());
            let q = CharElt::from_terms([(w(&[3, -1]), 4), (w(&[0, 2]), -7), (w(&[-2, -2]), 1)]);
            assert_eq!((&q * &factor).divide_exact(alpha).unwrap(), q);
        }
    }

    #[test]
    fn general_division() {
        let u = CharElt::from_terms([(w(&[1, 0]), 1), (w(&[0, 1]), 2), (w(&[-1, -1]), -3)]);
        let v = CharElt::from_terms([(w(&[2, -1]), 5), (w(&[0, 0]), 1)]);
        assert_eq!((&u * &v).divide_by(&v).unwrap(), u);
        assert!(v.divide_by(&u).is_err());
        assert!(u.divide_by(&CharElt::zero()).is_err());
    }

    #[test]
    fn denominator_a1() {
        let a1 = RootDatum::named("A1").unwrap();
        assert_eq!(weyl_denominator(&a1), &x(0) - &x(-2));
    }

    #[test]
    fn denominator_is_antisymmetrization_of_one() {
        for name in ["A1", "A2", "B2", "G2"] {
            let g = WeylGroup::enumerate(&RootDatum::named(name).unwrap()).unwrap();
            let d = weyl_denominator(g.datum());
            assert_eq!(antisymmetrize(&g, &CharElt::one(g.datum().rank())), d, "{name}");
            assert_eq!(d.coefficient(&Weight::zero(g.datum().rank())), BigInt::one());
        }
    }

    #[test]
    fn denominator_simple_reflection() {
        for name in ["A1", "A2"] {
            let datum = RootDatum::named(name).unwrap();
            let d = weyl_denominator(&datum);
            for j in 0..datum.rank() {
                let expected = -&d.shift(&datum.simple_root_weight(j));
                assert_eq!(d.reflect(&datum, j), expected);
            }
        }
    }

    #[test]
    fn antisymmetrize_wall_weight_vanishes() {
        let g = WeylGroup::enumerate(&RootDatum::named("A1").unwrap()).unwrap();
        assert!(antisymmetrize(&g, &x(-1)).is_zero());
    }

    #[test]
    fn json_round_trip_with_big_coefficients() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let u = &CharElt::term(w(&[1, -2]), big) + &CharElt::from_terms([(w(&[0, 0]), -3)]);
        let value = u.to_json();
        assert_eq!(value["terms"][0]["w"], json!([0, 0]));
        assert_eq!(CharElt::from_json(&value).unwrap(), u);
    }
}
