//! Worked values across the library, checked exactly.

use num_bigint::BigInt;

use weylkit::charring::{antisymmetrize, weyl_act, weyl_denominator};
use weylkit::covers::CoverDatum;
use weylkit::demazure::{delta, delta_prime, partial, partial_prime, top, WordCheck};
use weylkit::expr::{parse_char, parse_operator, OpFactor};
use weylkit::hecke::{self, is_ideal_invariant, is_weyl_invariant, HeckeOp};
use weylkit::repring::{
    decompose_into_irreducibles, decompose_over_invariants, induce, irreducible_character, steinberg_basis,
    IrredDecomp, DEFAULT_FREENESS_RADIUS,
};
use weylkit::{CharElt, Error, RootDatum, Weight, WeylGroup};

fn group(name: &str) -> WeylGroup {
    WeylGroup::enumerate(&RootDatum::named(name).unwrap()).unwrap()
}

fn w(v: &[i64]) -> Weight {
    Weight::new(v.to_vec())
}

fn e(v: &[i64]) -> CharElt {
    CharElt::monomial(w(v))
}

fn x(k: i64) -> CharElt {
    e(&[k])
}

fn c(text: &str, rank: usize) -> CharElt {
    parse_char(text, rank).unwrap()
}

#[test]
fn root_data() {
    let a1 = RootDatum::named("A1").unwrap();
    assert_eq!(a1.positive_roots().len(), 1);
    assert_eq!(a1.weyl_vector(), &w(&[1]));
    let a2 = RootDatum::named("A2").unwrap();
    let mut roots: Vec<Vec<i64>> = a2.positive_roots().iter().map(|r| r.root_coords().to_vec()).collect();
    roots.sort();
    assert_eq!(roots, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    assert_eq!(RootDatum::named("G2").unwrap().positive_roots().len(), 6);
    assert_eq!(a1.reflect_simple(0, &w(&[1])).unwrap(), w(&[-1]));
    assert_eq!(a2.reflect_simple(0, &w(&[1, 0])).unwrap(), w(&[-1, 1]));
    assert_eq!(a2.pairing(&a2.simple_root_weight(0), 0).unwrap(), 2);
    assert_eq!(a2.pairing(&a2.simple_root_weight(1), 0).unwrap(), -1);
    for name in ["A1", "A2", "B2", "G2", "B3"] {
        let d = RootDatum::named(name).unwrap();
        for j in 0..d.rank() {
            assert_eq!(d.pairing(d.weyl_vector(), j).unwrap(), 1);
            let expected = d.weyl_vector().add_scaled(&d.simple_root_weight(j), -1);
            assert_eq!(d.reflect_simple(j, d.weyl_vector()).unwrap(), expected);
        }
        assert!(d.two_rho_check(), "{name}");
    }
}

#[test]
fn weyl_groups() {
    let a1 = group("A1");
    let a2 = group("A2");
    let b2 = group("B2");
    let g2 = group("G2");
    assert_eq!((a1.order(), a2.order(), g2.order()), (2, 6, 12));
    assert_eq!((a2.longest().length(), g2.longest().length()), (3, 6));
    assert_eq!(a1.act(a1.identity(), &w(&[3])), w(&[3]));
    assert_eq!(a1.act(a1.longest(), &w(&[3])), w(&[-3]));
    assert_eq!(a2.act(a2.longest(), &w(&[1, 0])), w(&[0, -1]));
    assert_eq!(a2.all_reduced_words(a2.identity()), vec![Vec::<usize>::new()]);
    let mut words = a2.all_reduced_words(a2.longest());
    words.sort();
    assert_eq!(words, vec![vec![0, 1, 0], vec![1, 0, 1]]);
    let words = b2.all_reduced_words(b2.longest());
    assert_eq!(words.len(), 2);
    assert!(words.iter().all(|w| w.len() == 4));
    assert_eq!(a2.identity().sign(), 1);
    assert_eq!(a2.simple_reflection(1).unwrap().sign(), -1);
    assert_eq!(a2.longest().sign(), -1);
}

#[test]
fn character_ring() {
    let a1 = group("A1");
    let a2 = group("A2");
    let d1 = a1.datum();
    assert_eq!(&x(1) * &x(2), x(3));
    assert_eq!(&(&x(1) + &x(-1)) * &(&x(1) - &x(-1)), &x(2) - &x(-2));
    assert_eq!(weyl_act(&a1, a1.longest(), &x(1)), x(-1));
    assert_eq!(weyl_act(&a2, a2.simple_reflection(0).unwrap(), &e(&[1, 0])), e(&[-1, 1]));
    let alpha = d1.simple_root(0);
    let one = CharElt::one(1);
    assert_eq!((&one - &x(-2)).divide_exact(alpha).unwrap(), one);
    assert_eq!((&x(1) - &x(-3)).divide_exact(alpha).unwrap(), &x(1) + &x(-1));
    assert!(matches!(x(1).divide_exact(alpha), Err(Error::NotDivisible(_))));
    assert_eq!(weyl_denominator(d1), &one - &x(-2));
    let d2 = weyl_denominator(a2.datum());
    assert_eq!(d2.coefficient(&w(&[0, 0])), BigInt::from(1));
    for g in [&a1, &a2] {
        let d = weyl_denominator(g.datum());
        for j in 0..g.datum().rank() {
            let alpha = g.datum().simple_root_weight(j);
            assert_eq!(d.reflect(g.datum(), j), -&d.shift(&alpha));
        }
    }
    assert_eq!(antisymmetrize(&a1, &one), &one - &x(-2));
    assert!(antisymmetrize(&a1, &x(-1)).is_zero());
    let adjoint = antisymmetrize(&a2, &e(&[1, 1])).divide_by(&d2).unwrap();
    assert_eq!(adjoint.augmentation(), BigInt::from(8));
    assert_eq!(adjoint.len(), 7);
}

#[test]
fn divided_differences() {
    let a1 = group("A1");
    let a2 = group("A2");
    let d = a1.datum();
    let one = CharElt::one(1);
    assert_eq!(delta(d, 0, &one).unwrap(), one);
    assert_eq!(delta(d, 0, &x(1)).unwrap(), &x(1) + &x(-1));
    assert_eq!(delta(d, 0, &x(2)).unwrap(), c("e[2] + e[0] + e[-2]", 1));
    assert!(delta_prime(d, 0, &one).unwrap().is_zero());
    assert_eq!(delta_prime(d, 0, &x(1)).unwrap(), x(1));
    assert!(delta_prime(d, 0, &(&x(1) + &x(-1))).unwrap().is_zero());
    assert_eq!(partial(&a1, a1.identity(), &x(3), WordCheck::Strict).unwrap(), x(3));
    assert_eq!(partial_prime(&a1, a1.longest(), &x(1), WordCheck::Strict).unwrap(), x(1));
    assert_eq!(top(&a1, &one).unwrap(), one);
    assert_eq!(top(&a1, &x(2)).unwrap(), c("e[2] + e[0] + e[-2]", 1));
    assert_eq!(top(&a1, &x(-2)).unwrap(), -&one);
    let u = c("3*e[2,-1] - e[0,1] + 2*e[-1,-1]", 2);
    assert_eq!(
        partial(&a2, a2.longest(), &u, WordCheck::Strict).unwrap(),
        partial(&a2, a2.longest(), &u, WordCheck::Single).unwrap()
    );
}

#[test]
fn hecke_operators() {
    let g = group("A1");
    let basis = steinberg_basis(&g, DEFAULT_FREENESS_RADIUS).unwrap();
    let one = CharElt::one(1);
    let ea = x(2);
    let s = g.simple_reflection(0).unwrap();

    let identity = HeckeOp::basis(g.identity());
    assert_eq!(hecke::apply(&g, &identity, &x(3)).unwrap(), x(3));
    let reflection = HeckeOp::from_words(&g, [(&[][..], ea.clone()), (&[0][..], &one - &ea)]).unwrap();
    assert_eq!(hecke::apply(&g, &reflection, &x(1)).unwrap(), x(-1));
    assert_eq!(hecke::apply(&g, &reflection, &x(2)).unwrap(), x(-2));
    let demazure = HeckeOp::from_words(&g, [(&[][..], -&ea), (&[0][..], ea.clone())]).unwrap();
    assert!(hecke::apply(&g, &demazure, &one).unwrap().is_zero());

    let to = |text: &str| hecke::to_basis(&g, &basis, &parse_operator(text, 1).unwrap()).unwrap();
    assert_eq!(to("d[1]"), HeckeOp::basis(s));
    assert_eq!(to("w[1]"), reflection);
    assert_eq!(to("dp[1]"), demazure);

    let mut difference = HeckeOp::basis(s);
    difference.add(g.identity().key(), &-&one);
    assert!(hecke::in_augmentation_ideal(&g, &difference).unwrap());
    assert!(hecke::in_augmentation_ideal(&g, &demazure).unwrap());
    assert!(!hecke::in_augmentation_ideal(&g, &identity).unwrap());

    assert!(is_ideal_invariant(&g, &one).unwrap().holds());
    assert!(is_ideal_invariant(&g, &(&x(1) + &x(-1))).unwrap().holds());
    assert_eq!(is_ideal_invariant(&g, &x(1)).unwrap().witness, Some((0, x(1))));
    let d = weyl_denominator(g.datum());
    assert_eq!(is_weyl_invariant(&g, &d).unwrap().witness, Some((0, &one - &x(2))));
    assert!(is_weyl_invariant(&g, &(&x(1) + &x(-1))).unwrap().holds());
    assert_eq!(is_weyl_invariant(&g, &x(1)).unwrap().witness.map(|(j, _)| j), Some(0));
    assert_eq!(parse_operator("d[1]*d[2]*d[1]", 2).unwrap().factors, vec![
        OpFactor::Delta(0),
        OpFactor::Delta(1),
        OpFactor::Delta(0)
    ]);
}

#[test]
fn representation_ring() {
    let a1 = group("A1");
    let a2 = group("A2");
    assert_eq!(irreducible_character(&a1, &w(&[2])).unwrap(), c("e[2] + e[0] + e[-2]", 1));
    assert_eq!(irreducible_character(&a2, &w(&[1, 0])).unwrap(), c("e[1,0] + e[-1,1] + e[0,-1]", 2));
    assert_eq!(irreducible_character(&a1, &w(&[-2])).unwrap(), -&CharElt::one(1));

    assert!(decompose_into_irreducibles(&a1, &CharElt::zero()).unwrap().is_zero());
    assert_eq!(
        decompose_into_irreducibles(&a1, &c("e[2] + e[0] + e[-2]", 1)).unwrap(),
        IrredDecomp::single(w(&[2]), 1)
    );
    let square = (&x(1) + &x(-1)).pow(1, 2);
    let mut expected = IrredDecomp::single(w(&[2]), 1);
    expected.add(w(&[0]), BigInt::from(1));
    assert_eq!(decompose_into_irreducibles(&a1, &square).unwrap(), expected);

    let basis = steinberg_basis(&a1, DEFAULT_FREENESS_RADIUS).unwrap();
    let weights: Vec<Weight> = basis.weights().map(|(_, l)| l.clone()).collect();
    assert_eq!(weights, vec![w(&[0]), w(&[1])]);
    for (elt, lambda) in basis.weights() {
        let coords = decompose_over_invariants(&a1, &basis, &e(lambda.coords())).unwrap();
        for (v, dec) in &coords.entries {
            let expected = if v == elt { IrredDecomp::single(w(&[0]), 1) } else { IrredDecomp::new() };
            assert_eq!(dec, &expected);
        }
    }
    let a2_basis = steinberg_basis(&a2, DEFAULT_FREENESS_RADIUS).unwrap();
    let mut distinct: Vec<Weight> = a2_basis.weights().map(|(_, l)| l.clone()).collect();
    distinct.sort();
    distinct.dedup();
    assert_eq!(distinct.len(), 6);
    assert_eq!(a2_basis.element(&a2, a2.identity()), CharElt::one(2));

    let chi2 = IrredDecomp::single(w(&[2]), 1);
    assert_eq!(induce(&a1, &weylkit::repring::restrict(&a1, &chi2).unwrap()).unwrap(), chi2);
    assert_eq!(induce(&a1, &x(1)).unwrap(), IrredDecomp::single(w(&[1]), 1));
    assert!(induce(&a1, &x(-1)).unwrap().is_zero());
}

#[test]
fn covers() {
    let id = CoverDatum::new(vec![vec![1]]).unwrap();
    assert_eq!(id.index(), 1);
    let two = CoverDatum::new(vec![vec![2]]).unwrap();
    assert_eq!(two.coset_reps(), &[w(&[0]), w(&[1])]);
    assert_eq!(CoverDatum::new(vec![vec![3]]).unwrap().index(), 3);
    assert_eq!(two.pullback(&CharElt::one(1)).unwrap(), CharElt::one(1));
    assert_eq!(two.pullback(&x(1)).unwrap(), x(2));
    let pulled = two.pullback(&(&x(1) + &x(-1))).unwrap();
    assert_eq!(pulled, &x(2) + &x(-2));
    let parts = two.decompose(&CharElt::one(1)).unwrap();
    assert_eq!(parts, vec![(w(&[0]), CharElt::one(1)), (w(&[1]), CharElt::zero())]);
}

#[test]
fn expressions() {
    assert_eq!(c("e[0]", 1), CharElt::one(1));
    let u = c("2*e[1,0] - e[-1,2]", 2);
    assert_eq!(u.len(), 2);
    assert_eq!(u.coefficient(&w(&[-1, 2])), BigInt::from(-1));
    assert!(matches!(parse_char("e[1,2]", 1), Err(Error::Parse { .. }) | Err(Error::RankMismatch { .. })));
}
