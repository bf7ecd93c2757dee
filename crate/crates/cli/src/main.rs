//! Command-line surface: every construction in the library is reachable as
//! a subcommand with machine-readable output for scripted verification.
//!
//! Exit status: 0 when all requested contracts reported yes or were
//! vacuous, 1 on a contract violation, 2 on usage errors, 3 on
//! precondition or misuse diagnostics.

mod output;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use output::{Emitter, Format, Record};
use pcalab::adn::{
    adn_totalize, adn_uniform, race, sample_diagonal, AdnOptions, RaceOutcome,
};
use pcalab::arslanov::{
    arslanov_construct, designed_tables, oscillating_table, parse_table, ArslanovError,
    LimitApprox,
};
use pcalab::codec::{decode, encode, smn_code, Code};
use pcalab::corpus::{const_code, divergent_code, even_valued_code, identity_code, theta_corpus};
use pcalab::eval::{eval_with_stats, evaluate, EvalResult, Fuel};
use pcalab::fixedpoint::{
    abs_fixed_point_map, binary_transform_corpus, fixed_point, fixed_point_param, param_from_abs,
    transform_corpus, FixpointError, QuineStyle,
};
use pcalab::k1::{pair_codes, phi, phi2};
use pcalab::k2::{
    apply_functional, check_no_total_extension, committing_corpus, diagonalize_total,
    parse_prefix_map, psi_nonextendable, BairePoint, ExtensionVerdict, IdentityFunctional,
    PrefixMap,
};
use pcalab::numbering::{PhiNumbering, Verdict};
use pcalab::pca::{
    check_combinatory_complete, lam, projector, theta_agreement, tuple, TermModel,
};
use pcalab::rng::SplitMix64;
use pcalab::syntax::parse;
use pcalab::term::{num, num_big};

const EXIT_VIOLATION: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_MISUSE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "pcalab",
    about = "fuel-bounded combinatory interpreter with executable fixed-point constructions",
    version
)]
struct Cli {
    /// Evaluation step budget (overrides the PCALAB_FUEL variable).
    #[arg(long, global = true)]
    fuel: Option<u64>,
    /// Budget for bounded equivalence checks.
    #[arg(long, global = true, default_value_t = 1_000)]
    budget: u64,
    /// Size of parameter windows in randomized and per-parameter suites.
    #[arg(long, global = true, default_value_t = 20)]
    sample: u64,
    /// Seed for randomized suites; identical seeds give identical output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format: text or json-lines.
    #[arg(long, global = true, default_value = "text")]
    format: String,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a term given in the canonical syntax.
    Eval { term: String },
    /// Godel code of a closed term.
    Encode { term: String },
    /// The closed term a code denotes.
    Decode { code: String },
    /// Bracket abstraction of a variable from a term.
    CompileLambda { var: u32, term: String },
    /// Freeze the first argument of a coded program.
    Smn { e: String, a: String },
    /// A self-referential program and its evaluator transcript.
    Quine {
        #[arg(long, default_value = "output-self")]
        style: String,
    },
    /// Fixed points of the designed code transforms.
    Fixpoint {
        #[arg(long, default_value = "all")]
        transform: String,
    },
    /// Parameterized fixed points checked across a parameter window.
    FixpointParam {
        #[arg(long, default_value = "all")]
        transform: String,
    },
    /// Totalize a named partial function avoiding a named diagonal.
    Adn {
        #[arg(long, default_value = "even-const")]
        psi: String,
        #[arg(long, default_value = "sample")]
        delta: String,
    },
    /// The uniform avoiding totalizer through the universal function.
    AdnUniform {
        #[arg(long, default_value = "sample")]
        delta: String,
    },
    /// Fixed points from settling approximation tables.
    Arslanov {
        #[arg(long, default_value = "all")]
        table: String,
        /// Load a table in the line-oriented text format instead.
        #[arg(long)]
        table_file: Option<std::path::PathBuf>,
    },
    /// The continuous functional with no total continuous extension.
    K2Nonextend {
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Check a prefix map loaded from a file instead of the built-in.
        #[arg(long)]
        map_file: Option<std::path::PathBuf>,
    },
    /// Diagonalize total functionals of functionals.
    K2Diag {
        #[arg(long, default_value = "all")]
        functional: String,
        #[arg(long, default_value_t = 8)]
        probe_depth: usize,
    },
    /// Run the whole verification battery.
    Check,
}

struct Ctx {
    fuel: u64,
    budget: u64,
    sample: u64,
    seed: u64,
    nb: PhiNumbering,
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "yes",
        Verdict::No => "no",
        Verdict::Unknown => "unknown",
    }
}

fn usage_bail(msg: &str) -> ! {
    eprintln!("error: {}", msg);
    std::process::exit(EXIT_USAGE);
}

fn parse_code(s: &str) -> Code {
    s.parse::<BigUint>()
        .unwrap_or_else(|_| usage_bail(&format!("`{}` is not a natural number", s)))
}

fn parse_term_or_bail(s: &str) -> pcalab::Tm {
    match parse(s) {
        Ok(t) => t,
        Err(e) => usage_bail(&e.to_string()),
    }
}

fn main() {
    let cli = Cli::parse();
    let format = match cli.format.as_str() {
        "text" => Format::Text,
        "json-lines" => Format::JsonLines,
        other => usage_bail(&format!("unknown format `{}`", other)),
    };
    let env_fuel = std::env::var("PCALAB_FUEL")
        .ok()
        .and_then(|v| v.parse::<u64>().ok());
    let ctx = Ctx {
        fuel: cli.fuel.or(env_fuel).unwrap_or(10_000),
        budget: cli.budget,
        sample: cli.sample,
        seed: cli.seed,
        nb: PhiNumbering,
    };
    let mut em = Emitter::new(format);
    let code = run(&cli.cmd, &ctx, &mut em);
    let code = code.unwrap_or(if em.all_ok() { 0 } else { EXIT_VIOLATION });
    std::process::exit(code);
}

/// Returns an overriding exit code for misuse diagnostics; otherwise the
/// emitter's verdicts decide.
fn run(cmd: &Cmd, ctx: &Ctx, em: &mut Emitter) -> Option<i32> {
    match cmd {
        Cmd::Eval { term } => {
            let t = parse_term_or_bail(term);
            if !t.is_closed() {
                usage_bail("evaluation needs a closed term");
            }
            let (r, steps) = eval_with_stats(&t, Fuel(ctx.fuel));
            let (verdict, shown) = match &r {
                EvalResult::Value(v) => ("value", v.to_string()),
                EvalResult::OutOfFuel => ("out-of-fuel", "-".into()),
                EvalResult::Stuck(s) => ("stuck", s.to_string()),
            };
            em.emit(
                Record::new("eval", "weak head reduction")
                    .input("term", term)
                    .input("steps", steps)
                    .witness(shown)
                    .verdict(verdict)
                    .budget(ctx.fuel),
            );
            None
        }
        Cmd::Encode { term } => {
            let t = parse_term_or_bail(term);
            match encode(&t) {
                Ok(c) => {
                    em.emit(
                        Record::new("encode", "bijective coding")
                            .input("term", term)
                            .witness(c)
                            .verdict("value"),
                    );
                    None
                }
                Err(e) => usage_bail(&e.to_string()),
            }
        }
        Cmd::Decode { code } => {
            let c = parse_code(code);
            em.emit(
                Record::new("decode", "bijective coding")
                    .input("code", code)
                    .witness(decode(&c))
                    .verdict("value"),
            );
            None
        }
        Cmd::CompileLambda { var, term } => {
            let t = parse_term_or_bail(term);
            let out = lam(*var, &t);
            em.emit(
                Record::new("compile-lambda", "bracket abstraction")
                    .input("var", format!("x{}", var))
                    .input("term", term)
                    .witness(out)
                    .verdict("value"),
            );
            None
        }
        Cmd::Smn { e, a } => {
            let c = smn_code(&parse_code(e), &parse_code(a));
            em.emit(
                Record::new("smn", "s-m-n code transformation")
                    .input("e", e)
                    .input("a", a)
                    .witness(c)
                    .verdict("value"),
            );
            None
        }
        Cmd::Quine { style } => {
            let style = match style.as_str() {
                "output-self" => QuineStyle::OutputSelf,
                "apply-self" => QuineStyle::ApplySelf,
                other => usage_bail(&format!("unknown quine style `{}`", other)),
            };
            run_quine(ctx, em, style);
            None
        }
        Cmd::Fixpoint { transform } => {
            for t in select_transforms(transform) {
                match fixed_point(&ctx.nb, &t.code, ctx.budget) {
                    Ok(w) => em.emit(
                        Record::new("fixpoint", "recursion theorem")
                            .input("transform", &t.name)
                            .witness(&w.point)
                            .verdict(verdict_str(w.verdict))
                            .budget(w.check_budget),
                    ),
                    Err(FixpointError::TransformPartial { detail }) => {
                        em.emit(
                            Record::new("fixpoint", "recursion theorem")
                                .input("transform", &t.name)
                                .verdict("misuse")
                                .witness(detail),
                        );
                        return Some(EXIT_MISUSE);
                    }
                }
            }
            None
        }
        Cmd::FixpointParam { transform } => {
            let all = binary_transform_corpus();
            let chosen: Vec<_> = if transform == "all" {
                all.into_iter().take(6).collect()
            } else {
                match all.into_iter().find(|t| &t.name == transform) {
                    Some(t) => vec![t],
                    None => usage_bail("unknown transform"),
                }
            };
            for h in chosen {
                match fixed_point_param(&ctx.nb, &h.code) {
                    Err(FixpointError::TransformPartial { detail }) => {
                        em.emit(
                            Record::new("fixpoint-param", "parameterized recursion theorem")
                                .input("transform", &h.name)
                                .verdict("misuse")
                                .witness(detail),
                        );
                        return Some(EXIT_MISUSE);
                    }
                    Ok(f) => {
                        let mut worst = Verdict::Yes;
                        for n in 0..=ctx.sample {
                            let fp = f.apply(&n.into());
                            let image = phi2(&h.code, &fp, &n.into(), Fuel(100_000));
                            let v = match image.defined() {
                                Some(m) => {
                                    ctx.nb.equiv_on_inputs(&fp, m, 0..=20, Fuel(ctx.budget))
                                }
                                None => Verdict::Unknown,
                            };
                            if v != Verdict::Yes {
                                worst = v;
                            }
                        }
                        em.emit(
                            Record::new("fixpoint-param", "parameterized recursion theorem")
                                .input("transform", &h.name)
                                .input("params", format!("0..={}", ctx.sample))
                                .verdict(verdict_str(worst))
                                .budget(ctx.budget),
                        );
                    }
                }
            }
            None
        }
        Cmd::Adn { psi, delta } => run_adn(ctx, em, psi, delta, ctx.sample.max(4)),
        Cmd::AdnUniform { delta } => run_adn_uniform(ctx, em, delta),
        Cmd::Arslanov { table, table_file } => run_arslanov(ctx, em, table, table_file.as_deref()),
        Cmd::K2Nonextend { depth, map_file } => {
            let (name, map) = match map_file {
                Some(p) => {
                    let text = std::fs::read_to_string(p)
                        .unwrap_or_else(|e| usage_bail(&format!("{}: {}", p.display(), e)));
                    match parse_prefix_map(&text) {
                        Ok(m) => ("file".to_string(), m),
                        Err(e) => {
                            em.emit(
                                Record::new("k2-nonextend", "prefix map validation")
                                    .input("file", p.display())
                                    .verdict("invalid")
                                    .witness(e),
                            );
                            return Some(EXIT_MISUSE);
                        }
                    }
                }
                None => ("cones".to_string(), psi_nonextendable(*depth)),
            };
            emit_extension_check(em, &name, &map, *depth, name != "cones");
            // the identity functional is totally extendable: no witness
            let id = PrefixMap::identity(*depth);
            emit_extension_check(em, "identity", &id, *depth, true);
            None
        }
        Cmd::K2Diag {
            functional,
            probe_depth,
        } => run_k2_diag(em, functional, *probe_depth),
        Cmd::Check => run_check(ctx, em),
    }
}

fn run_quine(ctx: &Ctx, em: &mut Emitter, style: QuineStyle) {
    let n_star = pcalab::fixedpoint::quine(&ctx.nb, style);
    match style {
        QuineStyle::OutputSelf => {
            let mut ok = true;
            for x in 0..=ctx.sample {
                if phi(&n_star, &x.into(), Fuel(ctx.fuel)).defined() != Some(&n_star) {
                    ok = false;
                }
            }
            let at0 = phi(&n_star, &0u32.into(), Fuel(ctx.fuel));
            em.emit(
                Record::new("quine.transcript", "self-reproduction at input 0")
                    .input("input", 0)
                    .witness(format!(
                        "phi(n*, 0) = {}",
                        at0.defined()
                            .map(|v| v.to_string())
                            .unwrap_or_else(|| "undefined".into())
                    ))
                    .verdict(if at0.defined() == Some(&n_star) {
                        "yes"
                    } else {
                        "no"
                    })
                    .budget(ctx.fuel),
            );
            em.emit(
                Record::new("quine", "fixed point of the constant-code builder")
                    .input("style", "output-self")
                    .input("inputs", format!("0..={}", ctx.sample))
                    .witness(&n_star)
                    .verdict(if ok { "yes" } else { "no" })
                    .budget(ctx.fuel),
            );
        }
        QuineStyle::ApplySelf => {
            let c7 = const_code(7);
            let through_const = phi(&n_star, &c7, Fuel(100_000));
            let through_id = phi(&n_star, &identity_code(), Fuel(100_000));
            let ok = through_const.defined() == Some(&7u32.into())
                && through_id.defined() == Some(&n_star);
            em.emit(
                Record::new("quine", "fixed point of the self-application builder")
                    .input("style", "apply-self")
                    .witness(&n_star)
                    .verdict(if ok { "yes" } else { "no" })
                    .budget(100_000),
            );
        }
    }
}

fn select_transforms(name: &str) -> Vec<pcalab::fixedpoint::NamedTransform> {
    let all = transform_corpus();
    if name == "all" {
        all
    } else {
        match all.into_iter().find(|t| t.name == name) {
            Some(t) => vec![t],
            None => usage_bail(&format!("unknown transform `{}`", name)),
        }
    }
}

fn named_psi(name: &str, window: u64) -> Code {
    match name {
        "even-const" => even_valued_code(&const_code(9), window.max(30)),
        "total-const" => encode(&lam(0, &num_big(const_code(4)))).expect("closed"),
        "divergent" => divergent_code(),
        other => usage_bail(&format!("unknown psi instance `{}`", other)),
    }
}

fn named_delta(name: &str) -> Code {
    match name {
        "sample" => sample_diagonal(),
        "identity" => identity_code(),
        "empty" => divergent_code(),
        other => usage_bail(&format!("unknown delta instance `{}`", other)),
    }
}

fn run_adn(ctx: &Ctx, em: &mut Emitter, psi_name: &str, delta_name: &str, limit: u64) -> Option<i32> {
    let psi = named_psi(psi_name, limit);
    let delta = named_delta(delta_name);
    let f = match adn_totalize(&ctx.nb, &delta, &psi, &AdnOptions::default()) {
        Ok(f) => f,
        Err(e) => {
            em.emit(
                Record::new("adn", "avoiding totalizer")
                    .input("delta", delta_name)
                    .input("psi", psi_name)
                    .verdict("misuse")
                    .witness(e),
            );
            return Some(EXIT_MISUSE);
        }
    };
    for n in 0..=limit {
        match f.totalization_verdict(&ctx.nb, &n.into(), 20, Fuel(ctx.budget)) {
            Some(v) => em.emit(
                Record::new("adn.totalize", "agreement where psi converges")
                    .input("delta", delta_name)
                    .input("psi", psi_name)
                    .input("n", n)
                    .verdict(verdict_str(v))
                    .budget(ctx.budget),
            ),
            None => {
                let ev = f.avoidance_evidence(&n.into(), 100_000);
                let ok = ev.delta_silent && ev.race_neither && ev.shape_ok;
                em.emit(
                    Record::new("adn.avoid", "diagonal silent where psi diverges")
                        .input("delta", delta_name)
                        .input("psi", psi_name)
                        .input("n", n)
                        .input(
                            "evidence",
                            format!(
                                "silent={} race-neither={} shape={}",
                                ev.delta_silent, ev.race_neither, ev.shape_ok
                            ),
                        )
                        .verdict(if ok { "yes" } else { "no" })
                        .budget(ev.delta_divergent_within),
                );
            }
        }
    }
    None
}

fn run_adn_uniform(ctx: &Ctx, em: &mut Emitter, delta_name: &str) -> Option<i32> {
    let delta = named_delta(delta_name);
    let f = match adn_uniform(&ctx.nb, &delta, &AdnOptions::default()) {
        Ok(f) => f,
        Err(e) => {
            em.emit(
                Record::new("adn-uniform", "uniform avoiding totalizer")
                    .input("delta", delta_name)
                    .verdict("misuse")
                    .witness(e),
            );
            return Some(EXIT_MISUSE);
        }
    };
    let es = [
        ("identity", identity_code()),
        ("divergent", divergent_code()),
        ("even-const", even_valued_code(&const_code(9), 30)),
    ];
    let limit = ctx.sample.min(8);
    for (ename, e) in &es {
        for n in 0..=limit {
            let z = pair_codes(e, &n.into());
            let psi_value = phi(e, &n.into(), Fuel(10_000));
            match psi_value.defined() {
                Some(m) => {
                    let v = ctx
                        .nb
                        .equiv_on_inputs(&f.apply(&z), m, 0..=15, Fuel(ctx.budget));
                    em.emit(
                        Record::new(
                            "adn-uniform.totalize",
                            "agreement through the universal map",
                        )
                        .input("e", *ename)
                        .input("n", n)
                        .verdict(if v == Verdict::No { "no" } else { "yes" })
                        .budget(ctx.budget),
                    );
                }
                None => {
                    let ev = f.avoidance_evidence(&z, 50_000);
                    let ok = ev.delta_silent && ev.race_neither;
                    em.emit(
                        Record::new("adn-uniform.avoid", "avoidance through the universal map")
                            .input("e", *ename)
                            .input("n", n)
                            .verdict(if ok { "yes" } else { "no" })
                            .budget(50_000),
                    );
                }
            }
        }
    }
    None
}

const POINTWISE_DEMO: &str = include_str!("../data/tables/pointwise-demo.txt");

fn run_arslanov(
    ctx: &Ctx,
    em: &mut Emitter,
    table: &str,
    table_file: Option<&std::path::Path>,
) -> Option<i32> {
    let mut tables: Vec<(String, LimitApprox)> = Vec::new();
    if let Some(p) = table_file {
        let text = std::fs::read_to_string(p)
            .unwrap_or_else(|e| usage_bail(&format!("{}: {}", p.display(), e)));
        match parse_table(&text) {
            Ok(t) => tables.push((p.display().to_string(), t)),
            Err(e) => usage_bail(&e.to_string()),
        }
    } else {
        match table {
            "all" => {
                tables = designed_tables();
                tables.push((
                    "pointwise-demo".into(),
                    parse_table(POINTWISE_DEMO).expect("shipped table parses"),
                ));
            }
            "oscillating" => tables.push(("oscillating".into(), oscillating_table())),
            "pointwise-demo" => tables.push((
                "pointwise-demo".into(),
                parse_table(POINTWISE_DEMO).expect("shipped table parses"),
            )),
            name => match designed_tables().into_iter().find(|(n, _)| n == name) {
                Some(t) => tables.push(t),
                None => usage_bail(&format!("unknown table `{}`", name)),
            },
        }
    }
    for (name, t) in tables {
        match arslanov_construct(&ctx.nb, &t, ctx.budget.max(1_000)) {
            Ok(out) => match out.witness {
                Some(w) => em.emit(
                    Record::new("arslanov", "limit-approximation fixed point")
                        .input("table", &name)
                        .input("parameter", w.parameter)
                        .input("stage", w.halting_stage)
                        .witness(&w.point)
                        .verdict(verdict_str(w.verdict))
                        .budget(w.check_budget),
                ),
                None => em.emit(
                    Record::new("arslanov", "limit-approximation fixed point")
                        .input("table", &name)
                        .input("unsettled-parameters", out.unsettled.len())
                        .verdict("no-witness")
                        .budget(ctx.budget),
                ),
            },
            Err(ArslanovError::ModulusViolation { at_stage, .. }) => {
                let expected = name == "oscillating";
                em.emit(
                    Record::new("arslanov", "modulus audit")
                        .input("table", &name)
                        .input("violation-at-stage", at_stage)
                        .verdict(if expected {
                            "diagnostic-expected"
                        } else {
                            "misuse"
                        }),
                );
                if !expected {
                    return Some(EXIT_MISUSE);
                }
            }
        }
    }
    None
}

fn emit_extension_check(
    em: &mut Emitter,
    name: &str,
    map: &PrefixMap,
    depth: usize,
    expect_not_found: bool,
) {
    match check_no_total_extension(map, depth) {
        ExtensionVerdict::Contradiction(w) => em.emit(
            Record::new("k2-nonextend", "no total continuous extension")
                .input("map", name)
                .input("depth", depth)
                .input(
                    "forcers",
                    format!(
                        "{:?}=>{} vs {:?}=>{}",
                        w.low_forcer.0, w.low_forcer.1, w.high_forcer.0, w.high_forcer.1
                    ),
                )
                .verdict(if expect_not_found { "no" } else { "yes" }),
        ),
        ExtensionVerdict::NotFound => em.emit(
            Record::new("k2-nonextend", "no total continuous extension")
                .input("map", name)
                .input("depth", depth)
                .verdict(if expect_not_found { "yes" } else { "no" })
                .witness("no conflicting families at this depth"),
        ),
    }
}

fn run_k2_diag(em: &mut Emitter, functional: &str, probe_depth: usize) -> Option<i32> {
    if functional == "identity" {
        match diagonalize_total(&IdentityFunctional, probe_depth) {
            Err(e) => {
                em.emit(
                    Record::new("k2-diag", "diagonal against a total functional")
                        .input("functional", "identity")
                        .verdict("non-committal")
                        .witness(e),
                );
                return Some(EXIT_MISUSE);
            }
            Ok(_) => unreachable!("the identity functional never commits"),
        }
    }
    if functional != "all" {
        usage_bail("use `all` or `identity`");
    }
    for (i, f) in committing_corpus().iter().enumerate() {
        match diagonalize_total(f.as_ref(), probe_depth) {
            Ok(d) => {
                let first_of_g =
                    apply_functional(&d.g, &BairePoint::zeros(), 1).expect("g total")[0];
                let ok = d.diagonal_value != d.committed && first_of_g == d.diagonal_value;
                em.emit(
                    Record::new("k2-diag", "diagonal against a total functional")
                        .input("functional", format!("{}#{}", f.name(), i))
                        .input("committed", d.committed)
                        .input("diagonal", d.diagonal_value)
                        .input("probes", d.probes_used)
                        .verdict(if ok { "yes" } else { "no" }),
                );
            }
            Err(e) => {
                em.emit(
                    Record::new("k2-diag", "diagonal against a total functional")
                        .input("functional", format!("{}#{}", f.name(), i))
                        .verdict("non-committal")
                        .witness(e),
                );
                return Some(EXIT_MISUSE);
            }
        }
    }
    None
}

fn run_check(ctx: &Ctx, em: &mut Emitter) -> Option<i32> {
    // abstraction laws
    let report =
        check_combinatory_complete(&TermModel, 1_000, ctx.seed, Fuel(10_000), Fuel(100_000));
    em.emit(
        Record::new("check.completeness", "abstraction laws on random terms")
            .input("seed", ctx.seed)
            .input("trials", report.trials)
            .input("counterexamples", report.counterexamples.len())
            .verdict(if report.ok() { "yes" } else { "no" })
            .budget(100_000),
    );

    // projections
    let mut rng = SplitMix64::new(ctx.seed ^ 0x70726f6a);
    let mut proj_ok = true;
    for _ in 0..50 {
        let n = rng.below(5) as usize + 1;
        let elems: Vec<pcalab::Tm> = (0..n).map(|_| num(rng.below(1_000))).collect();
        let tup = tuple(&elems).expect("nonempty");
        for i in 1..=n {
            let pr = projector(n, i).expect("in range");
            let r = evaluate(&pcalab::term::app(tup.clone(), pr), Fuel(100_000));
            if r.value() != Some(&elems[i - 1]) {
                proj_ok = false;
            }
        }
    }
    em.emit(
        Record::new("check.projections", "tuple projection law")
            .input("seed", ctx.seed)
            .input("tuples", 50)
            .verdict(if proj_ok { "yes" } else { "no" })
            .budget(100_000),
    );

    // fixed points of the transform corpus
    let mut fp_ok = true;
    let transforms = transform_corpus();
    for t in &transforms {
        let w = fixed_point(&ctx.nb, &t.code, ctx.budget).expect("corpus transforms are total");
        let image = phi(&t.code, &w.point, Fuel(100_000));
        let v = match image.defined() {
            Some(m) => ctx.nb.equiv_on_inputs(&w.point, m, 0..=20, Fuel(1_000)),
            None => Verdict::Unknown,
        };
        if v != Verdict::Yes {
            fp_ok = false;
        }
    }
    em.emit(
        Record::new("check.fixpoints", "recursion theorem on the transform corpus")
            .input("transforms", transforms.len())
            .verdict(if fp_ok { "yes" } else { "no" })
            .budget(1_000),
    );

    // quine
    let n_star = pcalab::fixedpoint::quine(&ctx.nb, QuineStyle::OutputSelf);
    let quine_ok =
        (0..=20u64).all(|x| phi(&n_star, &x.into(), Fuel(10_000)).defined() == Some(&n_star));
    em.emit(
        Record::new("check.quine", "self-reproducing program")
            .witness(&n_star)
            .verdict(if quine_ok { "yes" } else { "no" })
            .budget(10_000),
    );

    // reductions between the parameterized and abs forms
    let mut red_ok = true;
    let abs_map = abs_fixed_point_map(&ctx.nb);
    for h in binary_transform_corpus().into_iter().take(3) {
        let direct = fixed_point_param(&ctx.nb, &h.code).expect("total");
        let via_abs = param_from_abs(&ctx.nb, &abs_map, &h.code).expect("total");
        for f in [&direct, &via_abs] {
            for n in [0u64, 5, 11] {
                let fp = f.apply(&n.into());
                let image = phi2(&h.code, &fp, &n.into(), Fuel(100_000));
                let v = match image.defined() {
                    Some(m) => ctx.nb.equiv_on_inputs(&fp, m, 0..=20, Fuel(1_000)),
                    None => Verdict::Unknown,
                };
                if v != Verdict::Yes {
                    red_ok = false;
                }
            }
        }
    }
    em.emit(
        Record::new(
            "check.reductions",
            "both routes to fixed points agree on contract",
        )
        .verdict(if red_ok { "yes" } else { "no" })
        .budget(1_000),
    );

    // the avoiding totalizer, plain and uniform
    run_adn(ctx, em, "even-const", "sample", 30);
    run_adn_uniform(ctx, em, "sample");

    // settling tables, including the expected oscillator diagnostic
    run_arslanov(ctx, em, "all", None);
    match arslanov_construct(&ctx.nb, &oscillating_table(), 100) {
        Err(ArslanovError::ModulusViolation { .. }) => em.emit(
            Record::new("check.arslanov-oscillating", "modulus diagnostic fires")
                .verdict("diagnostic-expected"),
        ),
        _ => em.emit(
            Record::new("check.arslanov-oscillating", "modulus diagnostic fires").verdict("no"),
        ),
    }

    // fixed-point operator agreement and totality
    let mut theta_ok = true;
    let mut theta_total = true;
    let corpus = theta_corpus();
    for g in &corpus {
        let a = theta_agreement(g, Fuel(100_000), 8);
        if !a.fg.is_value() {
            theta_total = false;
        }
        if !a.agree {
            theta_ok = false;
        }
    }
    em.emit(
        Record::new(
            "check.theta",
            "fixed-point operator agreement on the corpus",
        )
        .input("corpus", corpus.len())
        .input("total", theta_total)
        .verdict(if theta_ok && theta_total { "yes" } else { "no" })
        .budget(100_000),
    );

    // continuous-functional results
    emit_extension_check(em, "cones", &psi_nonextendable(6), 6, false);
    emit_extension_check(em, "identity", &PrefixMap::identity(6), 6, true);
    run_k2_diag(em, "all", 8);

    // race sanity: a designed race resolves to the converging side
    let outcome = race(
        &divergent_code(),
        &0u32.into(),
        &const_code(3),
        &0u32.into(),
        2_000,
    );
    em.emit(
        Record::new(
            "check.race",
            "dovetailed race resolves to the converging side",
        )
        .verdict(if matches!(outcome, RaceOutcome::FirstConverged { .. }) {
            "yes"
        } else {
            "no"
        })
        .budget(2_000),
    );

    em.emit(
        Record::new("check.summary", "whole battery")
            .input("checks", em.checks)
            .input("violations", em.violations)
            .verdict(if em.all_ok() { "yes" } else { "no" }),
    );
    None
}
