use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use weylkit::covers::CoverDatum;
use weylkit::demazure::{partial, partial_prime, WordCheck};
use weylkit::expr::{parse_char, parse_expression, parse_weight, Expression, OpExpr, OpFactor};
use weylkit::hecke::{is_ideal_invariant, is_weyl_invariant};
use weylkit::repring::{
    decompose_into_irreducibles, decompose_over_invariants, induce, irreducible_character, irreducible_character_weyl,
    steinberg_basis, DEFAULT_FREENESS_RADIUS,
};
use weylkit::sample::DEFAULT_SEED;
use weylkit::{selftest, CharElt, Error, RootDatum, WeylGroup};

#[derive(Parser)]
#[command(name = "weylkit", version, about = "Exact character-ring computations for compact Lie groups")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Check every reduced word when evaluating composed operators (also WEYLKIT_STRICT=1).
    #[arg(long, global = true)]
    strict: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for internal parallelism.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, Weyl group order, positive roots and the longest word.
    Info { group: String },
    /// Apply an operator expression such as `d[1]*d[2]` to a character.
    Apply { group: String, operator: String, expr: String },
    /// Irreducible character of highest weight LAMBDA.
    Char {
        group: String,
        lambda: String,
        #[arg(long, value_enum, default_value_t = Method::Demazure)]
        method: Method,
    },
    /// Write a W-invariant character as a sum of irreducibles.
    Decompose { group: String, expr: String },
    /// Test W-invariance and invariance under the augmentation ideal.
    InvariantCheck { group: String, expr: String },
    /// Print the Steinberg basis, or coordinates of an element over R(G).
    Steinberg {
        group: String,
        #[arg(long)]
        decompose: Option<String>,
    },
    /// Holomorphic induction R(T) -> R(G).
    Induce { group: String, expr: String },
    /// Torus coverings given by a lattice matrix.
    Cover {
        /// Integer matrix as JSON, e.g. `[[2]]`.
        #[arg(long)]
        matrix: String,
        #[arg(value_enum)]
        action: CoverAction,
        expr: String,
    },
    /// Run the packaged property suites.
    Selftest {
        #[arg(default_values_t = ["A1".to_string(), "A2".to_string(), "B2".to_string(), "G2".to_string()])]
        groups: Vec<String>,
        /// Random inputs per randomized suite.
        #[arg(long, default_value_t = 20)]
        cases: usize,
        /// Run only this suite (repeatable).
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Weyl,
    Demazure,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoverAction {
    Decompose,
    Pullback,
}

/// Failure of a command: a library error or a failed self-check.
enum Failure {
    Lib(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

struct Output {
    text: String,
    json: String,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output { text, json: json.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build_global()
        .expect("thread pool is configured once");
    let check = if cli.strict { WordCheck::Strict } else { WordCheck::from_env_or(WordCheck::Single) };
    match run(&cli, check) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(if e.is_internal() { 2 } else { 1 })
        }
        Err(Failure::Check(report)) => {
            print!("{report}");
            eprintln!("error: self-check failed");
            ExitCode::from(2)
        }
    }
}

fn load(group: &str) -> Result<WeylGroup, Error> {
    WeylGroup::enumerate(&RootDatum::parse(group)?)
}

fn word_1based(word: &[usize]) -> Vec<usize> {
    word.iter().map(|j| j + 1).collect()
}

fn word_text(word: &[usize]) -> String {
    let parts: Vec<String> = word.iter().map(|j| (j + 1).to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn run(cli: &Cli, check: WordCheck) -> Result<Output, Failure> {
    match &cli.command {
        Command::Info { group } => info(group),
        Command::Apply { group, operator, expr } => apply(group, operator, expr, check),
        Command::Char { group, lambda, method } => character(group, lambda, *method),
        Command::Decompose { group, expr } => {
            let g = load(group)?;
            let dec = decompose_into_irreducibles(&g, &parse_char(expr, g.datum().rank())?)?;
            Ok(Output::new(format!("{dec}\n"), dec.to_json()))
        }
        Command::InvariantCheck { group, expr } => invariant_check(group, expr),
        Command::Steinberg { group, decompose } => steinberg(group, decompose.as_deref()),
        Command::Induce { group, expr } => {
            let g = load(group)?;
            let dec = induce(&g, &parse_char(expr, g.datum().rank())?)?;
            Ok(Output::new(format!("{dec}\n"), dec.to_json()))
        }
        Command::Cover { matrix, action, expr } => cover(matrix, *action, expr),
        Command::Selftest { groups, cases, suites } => {
            let config = selftest::Config { seed: cli.seed, cases: *cases, check, suites: suites.clone() };
            let report = selftest::run(groups, &config)?;
            eprint!("{}", report.render_timings());
            if report.passed() {
                Ok(Output::new(report.render(), report.to_json()))
            } else if cli.json {
                Err(Failure::Check(format!("{}\n", report.to_json())))
            } else {
                Err(Failure::Check(report.render()))
            }
        }
    }
}

fn info(group: &str) -> Result<Output, Failure> {
    let g = load(group)?;
    let d = g.datum();
    let longest = g.longest().word();
    let roots: Vec<&weylkit::Weight> = d.positive_roots().iter().map(|r| r.weight()).collect();
    let root_text: Vec<String> = roots.iter().map(|w| w.to_string()).collect();
    let cartan: Vec<String> =
        d.cartan().iter().map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(","))).collect();
    let text = format!(
        "type: {}\nrank: {}\ncartan: [{}]\n|W|: {}\npositive roots: {}\nroots: {}\nrho: {}\nlongest word: {}\n",
        d.name(),
        d.rank(),
        cartan.join(","),
        g.order(),
        roots.len(),
        root_text.join(" "),
        d.weyl_vector(),
        word_text(longest),
    );
    let json = json!({
        "type": d.name(),
        "rank": d.rank(),
        "cartan": d.cartan(),
        "order": g.order(),
        "positive_roots": roots,
        "rho": d.weyl_vector(),
        "longest_word": word_1based(longest),
    });
    Ok(Output::new(text, json))
}

fn char_output(u: &CharElt) -> Output {
    Output::new(format!("{u}\n"), u.to_json())
}

fn apply(group: &str, operator: &str, expr: &str, check: WordCheck) -> Result<Output, Failure> {
    let g = load(group)?;
    let rank = g.datum().rank();
    let op = match parse_expression(operator, rank)? {
        Expression::Op(op) => op,
        Expression::Char(c) => OpExpr::new(vec![OpFactor::Mul(c)]),
    };
    let u = parse_char(expr, rank)?;
    Ok(char_output(&apply_op(&g, &op, &u, check)?))
}

/// Pure reduced words of `d` or `dp` go through the composed operator so that
/// strict mode can compare all reduced words.
fn apply_op(g: &WeylGroup, op: &OpExpr, u: &CharElt, check: WordCheck) -> Result<CharElt, Error> {
    let delta: Option<Vec<usize>> =
        op.factors.iter().map(|f| if let OpFactor::Delta(j) = f { Some(*j) } else { None }).collect();
    let delta_prime: Option<Vec<usize>> =
        op.factors.iter().map(|f| if let OpFactor::DeltaPrime(j) = f { Some(*j) } else { None }).collect();
    for (word, prime) in [(delta, false), (delta_prime, true)] {
        let Some(word) = word.filter(|w| !w.is_empty()) else { continue };
        let w = g.from_word(&word)?;
        if w.length() == word.len() {
            return if prime { partial_prime(g, w, u, check) } else { partial(g, w, u, check) };
        }
    }
    op.apply(g, u)
}

fn character(group: &str, lambda: &str, method: Method) -> Result<Output, Failure> {
    let g = load(group)?;
    let lambda = parse_weight(lambda, g.datum().rank())?;
    match method {
        Method::Demazure => Ok(char_output(&irreducible_character(&g, &lambda)?)),
        Method::Weyl => Ok(char_output(&irreducible_character_weyl(&g, &lambda)?)),
        Method::Both => {
            let a = irreducible_character(&g, &lambda)?;
            let b = irreducible_character_weyl(&g, &lambda)?;
            let agree = a == b;
            let verdict = if agree { "AGREE" } else { "DISAGREE" };
            let text = format!("demazure: {a}\nweyl: {b}\n{verdict}\n");
            if !agree {
                return Err(Failure::Check(text));
            }
            let json = json!({ "demazure": a.to_json(), "weyl": b.to_json(), "agree": agree });
            Ok(Output::new(text, json))
        }
    }
}

fn invariant_check(group: &str, expr: &str) -> Result<Output, Failure> {
    let g = load(group)?;
    let u = parse_char(expr, g.datum().rank())?;
    let weyl = is_weyl_invariant(&g, &u)?;
    let ideal = is_ideal_invariant(&g, &u)?;
    let mut text = String::new();
    for (name, inv, op) in [("weyl", &weyl, "w"), ("ideal", &ideal, "dp")] {
        match &inv.witness {
            None => text.push_str(&format!("{name}: true\n")),
            Some((j, image)) => text.push_str(&format!("{name}: false ({op}[{}] gives {image})\n", j + 1)),
        }
    }
    // fixed key order, not sorted
    let json = format!("{{\"weyl\":{},\"ideal\":{}}}", weyl.holds(), ideal.holds());
    Ok(Output { text, json })
}

fn steinberg(group: &str, decompose: Option<&str>) -> Result<Output, Failure> {
    let g = load(group)?;
    let basis = steinberg_basis(&g, DEFAULT_FREENESS_RADIUS)?;
    let mut text = String::new();
    let mut items = Vec::new();
    match decompose {
        None => {
            text.push_str(&format!("formula: {}\n", basis.formula_tag()));
            for (w, lambda) in basis.weights() {
                text.push_str(&format!("{} -> e{lambda}\n", word_text(w.word())));
                items.push(json!({ "word": word_1based(w.word()), "weight": lambda }));
            }
            let json = json!({ "formula": basis.formula_tag(), "basis": items });
            Ok(Output::new(text, json))
        }
        Some(expr) => {
            let u = parse_char(expr, g.datum().rank())?;
            let coords = decompose_over_invariants(&g, &basis, &u)?;
            for ((w, c), (_, lambda)) in coords.entries.iter().zip(basis.weights()) {
                text.push_str(&format!("{} e{lambda}: {c}\n", word_text(w.word())));
                items.push(json!({ "word": word_1based(w.word()), "weight": lambda, "coefficient": c.to_json() }));
            }
            Ok(Output::new(text, Value::Array(items)))
        }
    }
}

fn cover(matrix: &str, action: CoverAction, expr: &str) -> Result<Output, Failure> {
    let m: Vec<Vec<i64>> = serde_json::from_str(matrix)
        .map_err(|e| Error::Parse { pos: e.column().saturating_sub(1), msg: format!("matrix: {e}") })?;
    let cover = CoverDatum::new(m)?;
    let u = parse_char(expr, cover.rank())?;
    match action {
        CoverAction::Pullback => Ok(char_output(&cover.pullback(&u)?)),
        CoverAction::Decompose => {
            let parts = cover.decompose(&u)?;
            let mut text = String::new();
            let mut items = Vec::new();
            for (tau, c) in &parts {
                text.push_str(&format!("tau={tau}: {c}\n"));
                items.push(json!({ "tau": tau, "component": c.to_json() }));
            }
            Ok(Output::new(text, json!({ "cosets": items })))
        }
    }
}
