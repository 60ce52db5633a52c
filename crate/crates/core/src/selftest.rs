//! Packaged property suites, run per group at desk scale.
//!
//! The textual report depends only on the groups and the seed. Wall-clock
//! timings are kept separately so that reports stay reproducible.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::charring::CharElt;
use crate::covers::CoverDatum;
use crate::demazure::{delta, delta_prime, partial, partial_prime, top, top_via_weyl, WordCheck};
use crate::error::{Error, Result};
use crate::expr::{OpExpr, OpFactor};
use crate::hecke::{self, HeckeOp, InvariantLattices};
use crate::repring::{
    decompose_into_irreducibles, decompose_over_invariants, induce, irreducible_character, irreducible_character_weyl,
    restrict, IrredDecomp, SteinbergBasis,
};
use crate::rootdata::{RootDatum, Weight};
use crate::sample;
use crate::weyl::WeylGroup;

#[derive(Clone, Debug)]
pub struct Config {
    pub seed: u64,
    /// Random inputs per randomized suite.
    pub cases: usize,
    pub check: WordCheck,
    /// Restrict to these suite names; empty runs all.
    pub suites: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: sample::DEFAULT_SEED, cases: 20, check: WordCheck::Single, suites: Vec::new() }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub group: String,
    pub suite: &'static str,
    pub cases: usize,
    pub failure: Option<String>,
    pub elapsed: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub seed: u64,
    pub results: Vec<SuiteResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(SuiteResult::passed)
    }

    /// Deterministic text report (no timings).
    pub fn render(&self) -> String {
        let mut out = format!("selftest seed={}\n", self.seed);
        for r in &self.results {
            match &r.failure {
                None => writeln!(out, "PASS {} {} ({} cases)", r.group, r.suite, r.cases),
                Some(msg) => writeln!(out, "FAIL {} {}: {}", r.group, r.suite, msg),
            }
            .expect("writing to a String cannot fail");
        }
        let passed = self.results.iter().filter(|r| r.passed()).count();
        writeln!(out, "{passed}/{} suites passed", self.results.len()).expect("writing to a String cannot fail");
        out
    }

    pub fn render_timings(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            writeln!(out, "{} {}: {:.3}s", r.group, r.suite, r.elapsed.as_secs_f64()).expect("writing to a String cannot fail");
        }
        let total: Duration = self.results.iter().map(|r| r.elapsed).sum();
        writeln!(out, "total: {:.3}s", total.as_secs_f64()).expect("writing to a String cannot fail");
        out
    }

    pub fn to_json(&self) -> Value {
        let suites: Vec<Value> = self
            .results
            .iter()
            .map(|r| json!({ "group": r.group, "suite": r.suite, "cases": r.cases, "passed": r.passed(), "failure": r.failure }))
            .collect();
        json!({ "seed": self.seed, "passed": self.passed(), "suites": suites })
    }
}

type Outcome = std::result::Result<usize, String>;

struct Ctx<'a> {
    group: &'a WeylGroup,
    config: &'a Config,
    rng: ChaCha8Rng,
}

impl Ctx<'_> {
    fn datum(&self) -> &RootDatum {
        self.group.datum()
    }

    fn rank(&self) -> usize {
        self.datum().rank()
    }

    fn random_char(&mut self) -> CharElt {
        let rank = self.rank();
        sample::char_elt(&mut self.rng, rank, 6)
    }

    fn random_element(&mut self) -> usize {
        self.rng.gen_range(0..self.group.order())
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{}: {e}", e.name()))
}

const SUITES: &[(&str, fn(&mut Ctx) -> Outcome)] = &[
    ("roots", suite_roots),
    ("weyl-group", suite_weyl_group),
    ("idempotence", suite_idempotence),
    ("reduced-words", suite_reduced_words),
    ("characters", suite_characters),
    ("projector", suite_projector),
    ("conjugation", suite_conjugation),
    ("hecke-basis", suite_hecke_basis),
    ("invariants", suite_invariants),
    ("steinberg", suite_steinberg),
    ("covers", suite_covers),
];

pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|(n, _)| *n)
}

/// Runs every suite on every group. Each (group, suite) pair gets its own
/// random stream derived from the seed, so results do not depend on ordering.
pub fn run(groups: &[String], config: &Config) -> Result<Report> {
    if let Some(unknown) = config.suites.iter().find(|s| !suite_names().any(|n| n == s.as_str())) {
        return Err(Error::Parse { pos: 0, msg: format!("unknown suite `{unknown}`") });
    }
    let mut report = Report { seed: config.seed, results: Vec::new() };
    for (gi, name) in groups.iter().enumerate() {
        let datum = RootDatum::parse(name)?;
        let group = WeylGroup::enumerate(&datum)?;
        for (si, (suite, f)) in SUITES.iter().enumerate() {
            if !config.suites.is_empty() && !config.suites.iter().any(|s| s == suite) {
                continue;
            }
            let stream = config.seed ^ ((gi as u64) << 32 | si as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
            let mut ctx = Ctx { group: &group, config, rng: sample::rng(stream) };
            let start = Instant::now();
            let outcome = f(&mut ctx);
            let elapsed = start.elapsed();
            let (cases, failure) = match outcome {
                Ok(n) => (n, None),
                Err(msg) => (0, Some(msg)),
            };
            report.results.push(SuiteResult { group: name.clone(), suite, cases, failure, elapsed });
        }
    }
    Ok(report)
}

fn suite_roots(ctx: &mut Ctx) -> Outcome {
    let d = ctx.datum();
    ensure(d.two_rho_check(), || "2 rho is not the sum of positive roots".into())?;
    for alpha in d.positive_roots() {
        ensure(alpha.copairing(alpha.weight()) == 2, || format!("<alpha, alpha^> != 2 for {}", alpha.weight()))?;
        let neg = -alpha.weight();
        for j in 0..d.rank() {
            let image = lib(d.reflect_simple(j, alpha.weight()))?;
            let is_root = d.positive_roots().iter().any(|b| b.weight() == &image || b.weight() == &-&image);
            ensure(is_root, || format!("s_{} {} is not a root", j + 1, alpha.weight()))?;
        }
        ensure(!d.positive_roots().iter().any(|b| b.weight() == &neg), || "root set not reduced".into())?;
    }
    Ok(d.positive_roots().len())
}

fn suite_weyl_group(ctx: &mut Ctx) -> Outcome {
    let g = ctx.group;
    let w0 = g.longest();
    ensure(w0.length() == ctx.datum().longest_length(), || "length of w0 differs from |Phi+|".into())?;
    ensure(g.multiply(w0, w0).is_identity(), || "w0 is not an involution".into())?;
    for w in g.elements() {
        ensure(g.multiply(w, g.inverse(w)).is_identity(), || format!("bad inverse for {:?}", w.word()))?;
        let rebuilt = lib(g.from_word(w.word()))?;
        ensure(rebuilt == w, || format!("word {:?} does not rebuild its element", w.word()))?;
        let v = &g.elements()[ctx.rng.gen_range(0..g.order())];
        ensure(g.multiply(w, v).sign() == w.sign() * v.sign(), || "sign is not multiplicative".into())?;
    }
    Ok(g.order())
}

fn suite_idempotence(ctx: &mut Ctx) -> Outcome {
    let rank = ctx.rank();
    let one = CharElt::one(rank);
    for j in 0..rank {
        ensure(lib(delta(ctx.datum(), j, &one))? == one, || format!("delta_{}(1) != 1", j + 1))?;
        ensure(lib(delta_prime(ctx.datum(), j, &one))?.is_zero(), || format!("delta'_{}(1) != 0", j + 1))?;
    }
    for _ in 0..ctx.config.cases {
        let u = ctx.random_char();
        for j in 0..rank {
            let d1 = lib(delta(ctx.datum(), j, &u))?;
            ensure(lib(delta(ctx.datum(), j, &d1))? == d1, || format!("delta_{}^2 != delta_{} on {u}", j + 1, j + 1))?;
            let p1 = lib(delta_prime(ctx.datum(), j, &u))?;
            ensure(lib(delta_prime(ctx.datum(), j, &p1))? == p1, || format!("delta'_{}^2 != delta'_{} on {u}", j + 1, j + 1))?;
        }
    }
    Ok(ctx.config.cases)
}

fn suite_reduced_words(ctx: &mut Ctx) -> Outcome {
    for _ in 0..ctx.config.cases {
        let w = &ctx.group.elements()[ctx.random_element()];
        let u = ctx.random_char();
        lib(partial(ctx.group, w, &u, WordCheck::Strict))?;
        lib(partial_prime(ctx.group, w, &u, WordCheck::Strict))?;
    }
    Ok(ctx.config.cases)
}

fn suite_characters(ctx: &mut Ctx) -> Outcome {
    let bound = if ctx.group.order() > 12 { 1 } else { 2 };
    let mut n = 0;
    for lambda in dominant_box(ctx.rank(), bound) {
        let a = lib(irreducible_character(ctx.group, &lambda))?;
        let b = lib(irreducible_character_weyl(ctx.group, &lambda))?;
        ensure(a == b, || format!("character routes differ at {lambda}"))?;
        let dec = lib(decompose_into_irreducibles(ctx.group, &a))?;
        ensure(dec == IrredDecomp::single(lambda.clone(), 1), || format!("chi_{lambda} does not peel to itself"))?;
        n += 1;
    }
    Ok(n)
}

fn suite_projector(ctx: &mut Ctx) -> Outcome {
    for _ in 0..ctx.config.cases {
        let u = ctx.random_char();
        let t = lib(top(ctx.group, &u))?;
        ensure(lib(top(ctx.group, &t))? == t, || format!("top is not idempotent on {u}"))?;
        ensure(lib(top_via_weyl(ctx.group, &u))? == t, || format!("top routes differ on {u}"))?;
        let (dec, chi) = lib(sample::invariant(&mut ctx.rng, ctx.group, 2))?;
        let lhs = lib(top(ctx.group, &(&chi * &u)))?;
        ensure(lhs == &chi * &t, || format!("top is not R(G)-linear for {chi} and {u}"))?;
        ensure(lib(induce(ctx.group, &chi))? == dec, || "induce o restrict is not the identity".into())?;
        ensure(lib(restrict(ctx.group, &lib(induce(ctx.group, &u))?))? == t, || "restrict o induce differs from top".into())?;
    }
    Ok(ctx.config.cases)
}

/// `partial'_w(u) = e^rho partial_w(e^{-rho} u)`.
fn suite_conjugation(ctx: &mut Ctx) -> Outcome {
    let rho = ctx.datum().weyl_vector().clone();
    for _ in 0..ctx.config.cases {
        let w = &ctx.group.elements()[ctx.random_element()];
        let u = ctx.random_char();
        let lhs = lib(partial_prime(ctx.group, w, &u, ctx.config.check))?;
        let rhs = lib(partial(ctx.group, w, &u.shift(&-&rho), ctx.config.check))?.shift(&rho);
        ensure(lhs == rhs, || format!("conjugation fails for {:?} on {u}", w.word()))?;
    }
    Ok(ctx.config.cases)
}

/// The linear solve is used up to this group order; larger groups use rewriting only.
const SOLVE_ORDER_LIMIT: usize = 12;

fn suite_hecke_basis(ctx: &mut Ctx) -> Outcome {
    let basis = SteinbergBasis::unverified(ctx.group);
    let solve = ctx.group.order() <= SOLVE_ORDER_LIMIT;
    let coordinates = |group: &WeylGroup, expr: &OpExpr| -> std::result::Result<HeckeOp, String> {
        let op = lib(hecke::normal_form(group, expr))?;
        if solve {
            let solved = lib(hecke::to_basis(group, &basis, expr))?;
            ensure(solved == op, || format!("solve and rewriting disagree on {expr}"))?;
        }
        Ok(op)
    };
    let cases = (ctx.config.cases / 4).max(1);
    for j in 0..ctx.rank() {
        let op = coordinates(ctx.group, &OpExpr::new(vec![OpFactor::DeltaPrime(j)]))?;
        ensure(lib(hecke::in_augmentation_ideal(ctx.group, &op))?, || format!("delta'_{} is not in the augmentation ideal", j + 1))?;
    }
    for w in ctx.group.elements() {
        let op = coordinates(ctx.group, &OpExpr::delta_word(w.word()))?;
        ensure(op == HeckeOp::basis(w), || format!("word {:?} is not a basis element", w.word()))?;
    }
    for _ in 0..cases {
        let expr = sample::op_expr(&mut ctx.rng, ctx.group.datum().rank());
        let op = coordinates(ctx.group, &expr)?;
        let u = ctx.random_char();
        let direct = lib(expr.apply(ctx.group, &u))?;
        ensure(lib(hecke::apply(ctx.group, &op, &u))? == direct, || format!("coordinates of {expr} do not reproduce the operator"))?;
    }
    Ok(cases + ctx.group.order())
}

fn suite_invariants(ctx: &mut Ctx) -> Outcome {
    let radius = if ctx.group.order() > 12 { 1 } else { 2 };
    let lattices = lib(InvariantLattices::compute(ctx.group, radius))?;
    ensure(lattices.agree(), || format!("invariant lattices differ on the radius {radius} box"))?;
    for g in &lattices.weyl_generators {
        let u = lattices.generator_element(g);
        ensure(lib(hecke::is_ideal_invariant(ctx.group, &u))?.holds(), || format!("{u} is not ideal-invariant"))?;
    }
    Ok(lattices.points.len())
}

fn suite_steinberg(ctx: &mut Ctx) -> Outcome {
    let basis = SteinbergBasis::unverified(ctx.group);
    let cases = (ctx.config.cases / 4).max(1);
    for w in ctx.group.elements() {
        let e = basis.element(ctx.group, w);
        let coords = lib(decompose_over_invariants(ctx.group, &basis, &e))?;
        for (v, c) in &coords.entries {
            let expected = if v == w { IrredDecomp::single(Weight::zero(ctx.rank()), 1) } else { IrredDecomp::new() };
            ensure(c == &expected, || format!("e_w for {:?} has wrong coordinates", w.word()))?;
        }
    }
    for _ in 0..cases {
        let u = sample::char_elt(&mut ctx.rng, ctx.group.datum().rank(), 3);
        let coords = lib(decompose_over_invariants(ctx.group, &basis, &u))?;
        ensure(lib(coords.reconstruct(ctx.group, &basis))? == u, || format!("{u} does not reconstruct"))?;
    }
    Ok(cases + ctx.group.order())
}

fn suite_covers(ctx: &mut Ctx) -> Outcome {
    let rank = ctx.rank();
    let matrix: Vec<Vec<i64>> = (0..rank).map(|i| (0..rank).map(|j| if i == j { 2 } else { 0 }).collect()).collect();
    let cover = lib(CoverDatum::new(matrix))?;
    for _ in 0..ctx.config.cases {
        let v = ctx.random_char();
        let parts = lib(cover.decompose(&v))?;
        ensure(lib(cover.reassemble(&parts))? == v, || format!("{v} does not round-trip"))?;
        let pulled = lib(cover.pullback(&v))?;
        ensure(pulled.len() == v.len(), || "pullback is not injective".into())?;
        let again = lib(cover.decompose(&pulled))?;
        ensure(again[0].1 == v && again[1..].iter().all(|(_, u)| u.is_zero()), || "pullback does not land in coset 0".into())?;
    }
    Ok(ctx.config.cases)
}

fn dominant_box(rank: usize, bound: i64) -> Vec<Weight> {
    let mut points = vec![Vec::new()];
    for _ in 0..rank {
        points = points
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..=bound).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    points.into_iter().map(Weight::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_report_is_reproducible() {
        let config = Config { cases: 5, ..Config::default() };
        let a = run(&["A1".to_string()], &config).unwrap();
        let b = run(&["A1".to_string()], &config).unwrap();
        assert!(a.passed(), "{}", a.render());
        assert_eq!(a.render(), b.render());
        assert_eq!(a.results.len(), suite_names().count());
    }
}
