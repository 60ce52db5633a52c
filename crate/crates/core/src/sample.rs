//! Seeded random inputs for the randomized suites.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charring::CharElt;
use crate::error::Result;
use crate::expr::{OpExpr, OpFactor};
use crate::repring::{restrict, IrredDecomp};
use crate::rootdata::Weight;
use crate::weyl::WeylGroup;

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Weight coordinates are drawn from `[-WEIGHT_BOUND, WEIGHT_BOUND]`.
pub const WEIGHT_BOUND: i64 = 5;
/// Coefficients are drawn from `[-COEFF_BOUND, COEFF_BOUND]`.
pub const COEFF_BOUND: i64 = 9;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn weight<R: Rng>(rng: &mut R, rank: usize, bound: i64) -> Weight {
    Weight::new((0..rank).map(|_| rng.gen_range(-bound..=bound)).collect())
}

pub fn dominant_weight<R: Rng>(rng: &mut R, rank: usize, bound: i64) -> Weight {
    Weight::new((0..rank).map(|_| rng.gen_range(0..=bound)).collect())
}

/// Up to `max_terms` terms; may be zero when every coefficient drawn is zero.
pub fn char_elt<R: Rng>(rng: &mut R, rank: usize, max_terms: usize) -> CharElt {
    let n = rng.gen_range(1..=max_terms.max(1));
    let mut u = CharElt::zero();
    for _ in 0..n {
        let mu = weight(rng, rank, WEIGHT_BOUND);
        u.add_term(mu, BigInt::from(rng.gen_range(-COEFF_BOUND..=COEFF_BOUND)));
    }
    u
}

/// Exactly `terms` distinct weights with nonzero coefficients, drawn from `[-bound, bound]^rank`.
pub fn char_elt_with_terms<R: Rng>(rng: &mut R, rank: usize, terms: usize, bound: i64) -> CharElt {
    let side = (2 * bound + 1) as u128;
    assert!(side.pow(rank as u32) >= terms as u128, "box too small for {terms} terms");
    let mut u = CharElt::zero();
    while u.len() < terms {
        let mu = weight(rng, rank, bound);
        if u.coefficient(&mu).is_zero() {
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-COEFF_BOUND..=COEFF_BOUND);
            }
            u.add_term(mu, BigInt::from(c));
        }
    }
    u
}

/// A random element of R(G) as a small combination of irreducibles.
pub fn invariant<R: Rng>(rng: &mut R, group: &WeylGroup, bound: i64) -> Result<(IrredDecomp, CharElt)> {
    let rank = group.datum().rank();
    let mut dec = IrredDecomp::new();
    for _ in 0..rng.gen_range(1..=2) {
        let lambda = dominant_weight(rng, rank, bound);
        let c = rng.gen_range(-3..=3);
        dec.add(lambda, BigInt::from(c));
    }
    let chi = restrict(group, &dec)?;
    Ok((dec, chi))
}

/// A composition of one to four factors drawn from `d`, `dp`, `w` and small multipliers.
pub fn op_expr<R: Rng>(rng: &mut R, rank: usize) -> OpExpr {
    let len = rng.gen_range(1..=4);
    let factors = (0..len)
        .map(|_| match rng.gen_range(0..4) {
            0 => OpFactor::Delta(rng.gen_range(0..rank)),
            1 => OpFactor::DeltaPrime(rng.gen_range(0..rank)),
            2 => OpFactor::Reflect(rng.gen_range(0..rank)),
            _ => {
                let mut m = CharElt::zero();
                for _ in 0..rng.gen_range(1..=2) {
                    m.add_term(weight(rng, rank, 2), BigInt::from(rng.gen_range(-3..=3)));
                }
                OpFactor::Mul(m)
            }
        })
        .collect();
    OpExpr::new(factors)
}
