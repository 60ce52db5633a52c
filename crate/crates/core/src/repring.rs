//! R(G) inside R(T): irreducible characters, decomposition into irreducibles, the
//! Steinberg basis of R(T) over R(G), and restriction/induction.

use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::charring::{int_json, CharElt};
use crate::demazure::{top, top_via_weyl};
use crate::error::{Error, Result};
use crate::linalg::{self, SolveOutcome};
use crate::rootdata::Weight;
use crate::weyl::{WeylElt, WeylGroup};

/// Highest weight lambda (any weight) to `partial_{w0}(e^lambda)`.
pub fn irreducible_character(group: &WeylGroup, lambda: &Weight) -> Result<CharElt> {
    group.datum().check_weight(lambda)?;
    top(group, &CharElt::monomial(lambda.clone()))
}

/// Same character through `A(e^lambda) / d`.
pub fn irreducible_character_weyl(group: &WeylGroup, lambda: &Weight) -> Result<CharElt> {
    group.datum().check_weight(lambda)?;
    top_via_weyl(group, &CharElt::monomial(lambda.clone()))
}

/// `m_mu`: the sum of the distinct monomials in the W-orbit of `mu`.
pub fn orbit_sum(group: &WeylGroup, mu: &Weight) -> CharElt {
    CharElt::from_terms(group.orbit(mu).into_iter().map(|w| (w, 1)))
}

/// First simple index `j` with `s_j(u) != u`, if any.
pub fn first_non_invariant_index(group: &WeylGroup, u: &CharElt) -> Option<usize> {
    let datum = group.datum();
    (0..datum.rank()).find(|&j| &u.reflect(datum, j) != u)
}

/// An element of R(G) in the basis of irreducible characters (virtual
/// multiplicities allowed). Keys are dominant weights.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IrredDecomp {
    entries: BTreeMap<Weight, BigInt>,
}

impl IrredDecomp {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(lambda: Weight, mult: impl Into<BigInt>) -> Self {
        let mut d = Self::new();
        d.add(lambda, mult.into());
        d
    }

    pub fn add(&mut self, lambda: Weight, mult: BigInt) {
        let entry = self.entries.entry(lambda.clone()).or_default();
        *entry += mult;
        if entry.is_zero() {
            self.entries.remove(&lambda);
        }
    }

    pub fn entries(&self) -> &BTreeMap<Weight, BigInt> {
        &self.entries
    }

    pub fn multiplicity(&self, lambda: &Weight) -> BigInt {
        self.entries.get(lambda).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let items: Vec<Value> = self
            .entries
            .iter()
            .map(|(w, c)| json!({ "highest_weight": w, "multiplicity": int_json(c) }))
            .collect();
        Value::Array(items)
    }
}

impl fmt::Display for IrredDecomp {
    /// `chi[2] + 3*chi[0]`, highest weight first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.entries.iter().rev().enumerate() {
            match (i, c.is_negative()) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "chi{w}")?;
        }
        Ok(())
    }
}

/// Peels off irreducible characters from a W-invariant element.
///
/// The dominant weight removed at each step is the largest in the lexicographic
/// order on simple-root coordinates, which refines dominance, so each peel
/// only introduces strictly smaller weights.
pub fn decompose_into_irreducibles(group: &WeylGroup, u: &CharElt) -> Result<IrredDecomp> {
    if let Some(j) = first_non_invariant_index(group, u) {
        return Err(Error::NotInvariant(j));
    }
    let datum = group.datum();
    let cap = 100_000;
    let mut rest = u.clone();
    let mut out = IrredDecomp::new();
    let mut steps = 0;
    while !rest.is_zero() {
        steps += 1;
        if steps > cap {
            return Err(Error::NonTermination(cap));
        }
        let (lambda, c) = rest
            .terms()
            .filter(|(w, _)| w.is_dominant())
            .max_by(|a, b| {
                datum.scaled_root_coords(a.0).cmp(&datum.scaled_root_coords(b.0)).then_with(|| a.0.cmp(b.0))
            })
            .map(|(w, c)| (w.clone(), c.clone()))
            .expect("a nonzero W-invariant element has dominant support");
        let chi = irreducible_character(group, &lambda)?;
        rest -= &chi.scale(&c);
        out.add(lambda, c);
    }
    Ok(out)
}

/// `sum mult * chi_lambda`, the inclusion R(G) -> R(T).
pub fn restrict(group: &WeylGroup, dec: &IrredDecomp) -> Result<CharElt> {
    let mut out = CharElt::zero();
    for (lambda, c) in dec.entries() {
        out += &irreducible_character(group, lambda)?.scale(c);
    }
    Ok(out)
}

/// Holomorphic induction R(T) -> R(G): `partial_{w0}` followed by decomposition.
pub fn induce(group: &WeylGroup, u: &CharElt) -> Result<IrredDecomp> {
    decompose_into_irreducibles(group, &top(group, u)?)
}

pub const STEINBERG_FORMULA: &str =
    "e_w = e^{lambda_w}, lambda_w = w(-sum of fundamental weights varpi_j over simple j with w(alpha_j) < 0)";

const PEEL_STEP_LIMIT: usize = 1_000_000;

/// Default radius of the `[-r, r]^rank` box on which freeness is verified.
pub const DEFAULT_FREENESS_RADIUS: i64 = 1;

/// A monomial basis `{e_w}` of R(T) as a free R(G)-module, indexed like the group elements.
#[derive(Clone, Debug)]
pub struct SteinbergBasis {
    elements: Vec<(WeylElt, Weight)>,
    formula_tag: &'static str,
    retry_limit: usize,
}

impl SteinbergBasis {
    /// Builds the basis without verifying it.
    pub fn unverified(group: &WeylGroup) -> Self {
        let rank = group.datum().rank();
        let elements = group
            .elements()
            .iter()
            .map(|w| {
                let mut lambda = vec![0; rank];
                // right descents of w: simple j with w(alpha_j) < 0
                for j in group.inverse(w).left_descents() {
                    lambda[j] = -1;
                }
                (w.clone(), group.act(w, &Weight::new(lambda)))
            })
            .collect();
        SteinbergBasis { elements, formula_tag: STEINBERG_FORMULA, retry_limit: 4 }
    }

    pub fn formula_tag(&self) -> &str {
        self.formula_tag
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn with_retry_limit(mut self, retries: usize) -> Self {
        self.retry_limit = retries;
        self
    }

    /// `(w, lambda_w)` pairs in group order.
    pub fn weights(&self) -> impl Iterator<Item = (&WeylElt, &Weight)> {
        self.elements.iter().map(|(w, l)| (w, l))
    }

    pub fn element(&self, group: &WeylGroup, w: &WeylElt) -> CharElt {
        CharElt::monomial(self.elements[group.position(w)].1.clone())
    }

    /// Solves for every `e^mu` with `mu` in `[-radius, radius]^rank`, checks the
    /// reconstruction and that the solution is unique and matches the peeling.
    pub fn verify(&self, group: &WeylGroup, radius: i64) -> Result<()> {
        for mu in box_points(group.datum().rank(), radius) {
            let u = CharElt::monomial(mu.clone());
            let coords = solve_over_invariants(group, self, &u).map_err(|e| match e {
                Error::BoxExhausted(_) | Error::FreenessCheckFailed(_) => {
                    Error::FreenessCheckFailed(format!("e^{mu}: {e}"))
                }
                other => other,
            })?;
            if coords.reconstruct(group, self)? != u {
                return Err(Error::FreenessCheckFailed(format!("e^{mu} does not reconstruct")));
            }
            if decompose_over_invariants(group, self, &u)? != coords {
                return Err(Error::FreenessCheckFailed(format!("e^{mu} has two different decompositions")));
            }
        }
        Ok(())
    }
}

/// Builds the Steinberg basis and verifies freeness on `[-radius, radius]^rank`.
pub fn steinberg_basis(group: &WeylGroup, radius: i64) -> Result<SteinbergBasis> {
    let basis = SteinbergBasis::unverified(group);
    basis.verify(group, radius)?;
    Ok(basis)
}

/// Coordinates of an element of R(T) over R(G) in a Steinberg basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinbergCoords {
    pub entries: Vec<(WeylElt, IrredDecomp)>,
}

impl SteinbergCoords {
    pub fn coefficient(&self, w: &WeylElt) -> Option<&IrredDecomp> {
        self.entries.iter().find(|(v, _)| v == w).map(|(_, d)| d)
    }

    /// `sum_w c_w e_w`.
    pub fn reconstruct(&self, group: &WeylGroup, basis: &SteinbergBasis) -> Result<CharElt> {
        let mut out = CharElt::zero();
        for (w, c) in &self.entries {
            out += &(&restrict(group, c)? * &basis.element(group, w));
        }
        Ok(out)
    }
}

pub(crate) fn box_points(rank: usize, radius: i64) -> Vec<Weight> {
    let mut points = vec![Vec::new()];
    for _ in 0..rank {
        points = points
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-radius..=radius).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    points.into_iter().map(Weight::new).collect()
}

/// Writes `u = sum_w c_w e_w` with `c_w` in R(G) by peeling leading terms.
///
/// Write a weight `nu` as `w(-mu)` with `mu` dominant and `w` of minimal length.
/// Every right descent `j` of `w` has `mu_j >= 1`, so `mu' = mu - sum_j varpi_j`
/// is dominant and `e^nu` is the extremal term `e^{w(-mu')} e_w` of
/// `chi_{dom(w(-mu'))} e_w`. Subtracting that product only introduces weights
/// that come later in the order (dominant conjugate of `-nu`, then length of `w`).
pub fn decompose_over_invariants(group: &WeylGroup, basis: &SteinbergBasis, u: &CharElt) -> Result<SteinbergCoords> {
    let datum = group.datum();
    let key = |nu: &Weight| {
        let (mu, word) = group.dominant_with_word(&-nu);
        (datum.scaled_root_coords(&mu), std::cmp::Reverse(word.len()), nu.clone())
    };
    let mut rest = u.clone();
    let mut heap: BinaryHeap<_> = rest.support().map(key).collect();
    let mut coeffs: Vec<IrredDecomp> = vec![IrredDecomp::new(); basis.len()];
    let mut characters: HashMap<Weight, CharElt> = HashMap::new();
    let mut steps = 0;
    while let Some((_, _, nu)) = heap.pop() {
        let c = rest.coefficient(&nu);
        if c.is_zero() {
            continue;
        }
        steps += 1;
        if steps > PEEL_STEP_LIMIT {
            return Err(Error::NonTermination(PEEL_STEP_LIMIT));
        }
        let (_, word) = group.dominant_with_word(&-&nu);
        let pos = group.position(group.from_word(&word)?);
        let lambda_w = &basis.elements[pos].1;
        let low = &nu - lambda_w;
        let highest = group.dominant_conjugate(&low);
        if !characters.contains_key(&highest) {
            characters.insert(highest.clone(), irreducible_character(group, &highest)?);
        }
        let product = characters[&highest].shift(lambda_w).scale(&c);
        for (w, _) in product.terms() {
            if w != &nu && rest.coefficient(w).is_zero() {
                heap.push(key(w));
            }
        }
        rest -= &product;
        coeffs[pos].add(highest, c);
    }
    debug_assert!(rest.is_zero());
    Ok(SteinbergCoords { entries: basis.elements.iter().map(|(w, _)| w.clone()).zip(coeffs).collect() })
}

/// Same coordinates through an exact linear solve, which also certifies that
/// they are the only ones with support in the search region.
///
/// Unknowns are the integer multiplicities of orbit sums `m_mu e_w` for
/// dominant `mu` in a ball for the invariant norm of radius
/// `max |supp(u)| + max |lambda_w|`; the coefficient-matching system is solved
/// exactly, and the radius grows by `|rho|` on each inconsistent attempt.
pub fn solve_over_invariants(group: &WeylGroup, basis: &SteinbergBasis, u: &CharElt) -> Result<SteinbergCoords> {
    let datum = group.datum();
    if u.is_zero() {
        return Ok(SteinbergCoords {
            entries: group.elements().iter().map(|w| (w.clone(), IrredDecomp::new())).collect(),
        });
    }
    let norm = |w: &Weight| (datum.scaled_norm(w) as f64).sqrt();
    let basis_extent = basis.elements.iter().map(|(_, l)| norm(l)).fold(0.0, f64::max);
    let support_extent = u.support().map(norm).fold(0.0, f64::max);
    let step = norm(datum.weyl_vector());
    let mut radius = support_extent + basis_extent;

    for _attempt in 0..=basis.retry_limit {
        let candidates: Vec<(Weight, CharElt)> = dominant_ball(datum, radius)
            .into_iter()
            .map(|mu| {
                let m = orbit_sum(group, &mu);
                (mu, m)
            })
            .collect();
        let mut rows: BTreeMap<Weight, BTreeMap<usize, BigInt>> = BTreeMap::new();
        let mut nvars = 0;
        for (_, lambda) in &basis.elements {
            for (_, m) in &candidates {
                for nu in m.support() {
                    rows.entry(nu + lambda).or_default().insert(nvars, BigInt::one());
                }
                nvars += 1;
            }
        }
        for nu in u.support() {
            rows.entry(nu.clone()).or_default();
        }
        let equations: Vec<(BTreeMap<usize, BigInt>, BigInt)> =
            rows.into_iter().map(|(nu, row)| (row, u.coefficient(&nu))).collect();
        match linalg::solve_sparse(&equations, nvars) {
            SolveOutcome::Unique(x) => {
                let mut entries = Vec::with_capacity(basis.len());
                for (i, (w, _)) in basis.elements.iter().enumerate() {
                    let mut c = CharElt::zero();
                    for (k, (_, m)) in candidates.iter().enumerate() {
                        let value = &x[i * candidates.len() + k];
                        if !value.is_integer() {
                            return Err(Error::FreenessCheckFailed(format!(
                                "non-integral coordinate {value} over the orbit-sum basis"
                            )));
                        }
                        c += &m.scale(&value.to_integer());
                    }
                    entries.push((w.clone(), decompose_into_irreducibles(group, &c)?));
                }
                return Ok(SteinbergCoords { entries });
            }
            SolveOutcome::Underdetermined(r) => {
                return Err(Error::FreenessCheckFailed(format!(
                    "basis products are linearly dependent (rank {r} of {nvars})"
                )));
            }
            SolveOutcome::Inconsistent => radius += step,
        }
    }
    Err(Error::BoxExhausted(basis.retry_limit))
}

/// Dominant weights `mu` with `sqrt(scaled_norm(mu)) <= radius`. Since the
/// fundamental weights pair nonnegatively, `mu_i^2 |varpi_i|^2 <= |mu|^2`
/// bounds each coordinate.
fn dominant_ball(datum: &crate::rootdata::RootDatum, radius: f64) -> Vec<Weight> {
    let rank = datum.rank();
    let limit = radius * radius + 1e-6;
    let bounds: Vec<i64> = (0..rank)
        .map(|i| {
            let mut varpi = vec![0; rank];
            varpi[i] = 1;
            (radius / (datum.scaled_norm(&Weight::new(varpi)) as f64).sqrt()).floor() as i64
        })
        .collect();
    let mut points = vec![Vec::new()];
    for &b in &bounds {
        points = points
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..=b).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    points
        .into_iter()
        .map(Weight::new)
        .filter(|mu| (datum.scaled_norm(mu) as f64) <= limit)
        .collect()
}

/// Checks that multiplication by the Weyl denominator is injective on elements
/// supported in `[-radius, radius]^rank`, by comparing the rank of the
/// multiplication matrix with the number of monomials.
pub fn denominator_is_regular(group: &WeylGroup, radius: i64) -> bool {
    let d = crate::charring::weyl_denominator(group.datum());
    let points = box_points(group.datum().rank(), radius);
    let images: Vec<CharElt> = points.iter().map(|mu| d.shift(mu)).collect();
    let mut index: BTreeMap<&Weight, usize> = BTreeMap::new();
    for img in &images {
        for w in img.support() {
            let next = index.len();
            index.entry(w).or_insert(next);
        }
    }
    let mut matrix = vec![vec![BigInt::zero(); points.len()]; index.len()];
    for (col, img) in images.iter().enumerate() {
        for (w, c) in img.terms() {
            matrix[index[w]][col] = c.clone();
        }
    }
    linalg::rank(&matrix, points.len()) == points.len()
}
