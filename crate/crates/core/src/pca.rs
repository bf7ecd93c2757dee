//! Combinatory completeness machinery: bracket abstraction, tuples and
//! projections, the delayed Turing fixed-point combinator, and a randomized
//! checker for the two abstraction laws over any partial applicative
//! structure.

use crate::eval::{evaluate, normalize, EvalResult, Fuel};
use crate::rng::SplitMix64;
use crate::term::{app, apps, k, num, prim, s, skk, subst, var, PrimOp, Term, Tm};
use std::fmt;

/// A term that may contain variables, together with its free-variable list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractTerm {
    term: Tm,
    free: Vec<u32>,
}

impl AbstractTerm {
    pub fn new(term: Tm) -> Self {
        let free = term.free_vars();
        AbstractTerm { term, free }
    }

    pub fn term(&self) -> &Tm {
        &self.term
    }

    pub fn free_vars(&self) -> &[u32] {
        &self.free
    }

    pub fn is_closed(&self) -> bool {
        self.free.is_empty()
    }
}

impl fmt::Display for AbstractTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.term)
    }
}

/// Bracket abstraction `\*x. t` with the eta-free k/s clauses:
///
/// ```text
/// \*x. t  = K t                     when x not free in t
/// \*x. x  = S K K
/// \*x. MN = S (\*x.M) (\*x.N)
/// ```
///
/// The first clause applies to arbitrary subterms, so parts not mentioning
/// `x` ride under `K` unevaluated; this is what makes every partial
/// application of an abstraction a value, whatever the body does.
pub fn lam(x: u32, t: &Tm) -> Tm {
    if !t.contains_var(x) {
        return app(k(), t.clone());
    }
    match &**t {
        Term::Var(i) if *i == x => skk(),
        Term::App(f, a) => app(app(s(), lam(x, f)), lam(x, a)),
        _ => unreachable!("atoms other than x cannot contain x"),
    }
}

/// `\*x1. \*x2. ... \*xn. t`.
pub fn lam_many(vars: &[u32], t: &Tm) -> Tm {
    let mut out = t.clone();
    for &x in vars.iter().rev() {
        out = lam(x, &out);
    }
    out
}

/// Abstraction at the [`AbstractTerm`] level; the result's free variables
/// are those of `t` minus `x`.
pub fn bracket_abstract(t: &AbstractTerm, x: u32) -> AbstractTerm {
    AbstractTerm::new(lam(x, &t.term))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PcaError {
    ProjectorOutOfRange { n: usize, i: usize },
    EmptyTuple,
}

impl fmt::Display for PcaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PcaError::ProjectorOutOfRange { n, i } => {
                write!(f, "projector index {} out of range 1..={}", i, n)
            }
            PcaError::EmptyTuple => write!(f, "tuples need at least one component"),
        }
    }
}

impl std::error::Error for PcaError {}

/// `<a1,...,an> = \*z. z a1 ... an`.
pub fn tuple(elems: &[Tm]) -> Result<Tm, PcaError> {
    if elems.is_empty() {
        return Err(PcaError::EmptyTuple);
    }
    let fresh = elems
        .iter()
        .flat_map(|e| e.free_vars())
        .max()
        .map_or(0, |m| m + 1);
    let body = apps(var(fresh), elems.iter().cloned());
    Ok(lam(fresh, &body))
}

/// `U^n_i = \*u1...\*un. u_i` with `1 <= i <= n`, so that
/// `<a1,...,an> U^n_i` evaluates to `a_i`.
pub fn projector(n: usize, i: usize) -> Result<Tm, PcaError> {
    if i == 0 || i > n || n == 0 {
        return Err(PcaError::ProjectorOutOfRange { n, i });
    }
    let vars: Vec<u32> = (0..n as u32).collect();
    Ok(lam_many(&vars, &var(i as u32 - 1)))
}

/// The delayed Turing fixed-point combinator `f = u u` where
/// `u = \*x. \*y. \*z. y (x x y) z`.
///
/// `f` is total: `f g` evaluates to a partial-application value for every
/// `g`, carrying the redex `g (u u g)` unevaluated under `K`. Applying the
/// value to an argument, or unfolding it (see [`theta_unfold_once`]),
/// resumes the recursion one layer at a time, so `f g` and `g (f g)` reach
/// the same weak normal form whenever the unfolding converges.
pub fn turing_fixpoint() -> Tm {
    let body = app(app(var(1), apps(var(0), [var(0), var(1)])), var(2));
    let u = lam_many(&[0, 1, 2], &body);
    app(u.clone(), u)
}

/// Recognize the delay cell produced by evaluating `turing_fixpoint() g`
/// and expose the suspended redex.
///
/// The cell is `S x y` where `x` reduces to `K m` and `y` reduces to the
/// identity `S K K`; `m` is the recursion unfolded by one layer. The two
/// components arrive as unreduced redexes in argument position, so they are
/// forced here before matching.
pub fn theta_unfold_once(v: &Tm, fuel: Fuel) -> Option<Tm> {
    let (l, y) = match &**v {
        Term::App(l, y) => (l, y),
        _ => return None,
    };
    let (sh, x) = match &**l {
        Term::App(sh, x) => (sh, x),
        _ => return None,
    };
    if **sh != Term::S {
        return None;
    }
    let xv = evaluate(x, fuel).value()?.clone();
    if let Term::App(kh, m) = &*xv {
        let y_is_identity = evaluate(y, fuel)
            .value()
            .map(|t| **t == *skk())
            .unwrap_or(false);
        if **kh == Term::K && y_is_identity {
            return Some(m.clone());
        }
    }
    None
}

#[derive(Debug, Clone)]
pub struct ThetaAgreement {
    pub fg: EvalResult,
    pub gfg: EvalResult,
    pub unfolds_used: Option<usize>,
    pub agree: bool,
}

/// Compare `f g` against `g (f g)` for `f = turing_fixpoint()`: evaluate
/// both and unfold the delayed side until the weak normal forms match.
pub fn theta_agreement(g: &Tm, fuel: Fuel, max_unfolds: usize) -> ThetaAgreement {
    let f = turing_fixpoint();
    let fg = evaluate(&app(f, g.clone()), fuel);
    let fg_v = match fg.value() {
        Some(v) => v.clone(),
        None => {
            return ThetaAgreement {
                agree: false,
                gfg: EvalResult::OutOfFuel,
                unfolds_used: None,
                fg,
            }
        }
    };
    let gfg = evaluate(&app(g.clone(), fg_v.clone()), fuel);
    match gfg.value() {
        None => ThetaAgreement {
            fg,
            gfg,
            unfolds_used: None,
            agree: false,
        },
        Some(w) => {
            let mut cur = fg_v;
            for i in 0..=max_unfolds {
                if cur == *w {
                    return ThetaAgreement {
                        fg,
                        gfg: gfg.clone(),
                        unfolds_used: Some(i),
                        agree: true,
                    };
                }
                match theta_unfold_once(&cur, fuel) {
                    Some(m) => match evaluate(&m, fuel).value() {
                        Some(next) => cur = next.clone(),
                        None => break,
                    },
                    None => break,
                }
            }
            ThetaAgreement {
                fg,
                gfg,
                unfolds_used: None,
                agree: false,
            }
        }
    }
}

// ---------------------------------------------------------------------------
// partial applicative structures and the completeness check
// ---------------------------------------------------------------------------

/// A partial applicative structure: a carrier with a fuel-bounded partial
/// application, able to compile abstractions and to interpret terms over
/// embedded elements (the oracle route for the completeness laws).
pub trait Pas {
    type Elem: Clone + PartialEq + fmt::Display;

    fn name(&self) -> &str;

    /// `a b`, or `None` when no value is reached within the fuel.
    fn apply(&self, a: &Self::Elem, b: &Self::Elem, fuel: Fuel) -> Option<Self::Elem>;

    /// `a b` observed down to an element: like [`Pas::apply`] but the result
    /// is brought to the form used for element equality.
    fn apply_full(&self, a: &Self::Elem, b: &Self::Elem, fuel: Fuel) -> Option<Self::Elem> {
        self.apply(a, b, fuel)
    }

    /// Interpret a term whose variables are bound to elements, by direct
    /// substitution and evaluation. Independent of `compile`.
    fn eval_term(&self, t: &Tm, env: &[(u32, Self::Elem)], fuel: Fuel) -> Option<Self::Elem>;

    /// Compile `\*v1...\*vk. t` into an element.
    fn compile(&self, vars: &[u32], t: &Tm) -> Self::Elem;

    /// Deterministic element supply for randomized laws.
    fn sample_elem(&self, rng: &mut SplitMix64) -> Self::Elem;
}

/// The standard term model: elements are closed terms in weak normal form.
pub struct TermModel;

/// A deliberately broken model that applies terms with `K` and `S`
/// interpreted as each other; bracket abstractions stop satisfying the laws.
pub struct SwappedTermModel;

fn swap_ks(t: &Tm) -> Tm {
    match &**t {
        Term::K => s(),
        Term::S => k(),
        Term::App(f, a) => app(swap_ks(f), swap_ks(a)),
        _ => t.clone(),
    }
}

fn sample_closed_term(rng: &mut SplitMix64, depth: usize) -> Tm {
    if depth == 0 || rng.chance(2, 5) {
        match rng.below(5) {
            0 => k(),
            1 => s(),
            2 => skk(),
            3 => num(rng.below(10)),
            _ => prim(match rng.below(3) {
                0 => PrimOp::Succ,
                1 => PrimOp::Pred,
                _ => PrimOp::IfZ,
            }),
        }
    } else {
        app(
            sample_closed_term(rng, depth - 1),
            sample_closed_term(rng, depth - 1),
        )
    }
}

impl Pas for TermModel {
    type Elem = Tm;

    fn name(&self) -> &str {
        "terms"
    }

    fn apply(&self, a: &Tm, b: &Tm, fuel: Fuel) -> Option<Tm> {
        evaluate(&app(a.clone(), b.clone()), fuel).value().cloned()
    }

    fn apply_full(&self, a: &Tm, b: &Tm, fuel: Fuel) -> Option<Tm> {
        normalize(&app(a.clone(), b.clone()), fuel)
    }

    fn eval_term(&self, t: &Tm, env: &[(u32, Tm)], fuel: Fuel) -> Option<Tm> {
        let mut closed = t.clone();
        for (v, e) in env {
            closed = subst(&closed, *v, e);
        }
        normalize(&closed, fuel)
    }

    fn compile(&self, vars: &[u32], t: &Tm) -> Tm {
        lam_many(vars, t)
    }

    fn sample_elem(&self, rng: &mut SplitMix64) -> Tm {
        // elements are strict values: normalize or fall back to an atom
        let t = sample_closed_term(rng, 3);
        normalize(&t, Fuel(300)).unwrap_or_else(k)
    }
}

impl Pas for SwappedTermModel {
    type Elem = Tm;

    fn name(&self) -> &str {
        "terms with K and S transposed"
    }

    fn apply(&self, a: &Tm, b: &Tm, fuel: Fuel) -> Option<Tm> {
        evaluate(&app(swap_ks(a), swap_ks(b)), fuel)
            .value()
            .map(|v| swap_ks(v))
    }

    fn apply_full(&self, a: &Tm, b: &Tm, fuel: Fuel) -> Option<Tm> {
        normalize(&app(swap_ks(a), swap_ks(b)), fuel).map(|v| swap_ks(&v))
    }

    fn eval_term(&self, t: &Tm, env: &[(u32, Tm)], fuel: Fuel) -> Option<Tm> {
        let mut closed = t.clone();
        for (v, e) in env {
            closed = subst(&closed, *v, e);
        }
        normalize(&swap_ks(&closed), fuel).map(|v| swap_ks(&v))
    }

    fn compile(&self, vars: &[u32], t: &Tm) -> Tm {
        lam_many(vars, t)
    }

    fn sample_elem(&self, rng: &mut SplitMix64) -> Tm {
        TermModel.sample_elem(rng)
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub term: String,
    pub assignment: Vec<String>,
    pub clause: u8,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct CompletenessReport {
    pub model: String,
    pub trials: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl CompletenessReport {
    pub fn ok(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Random abstract term over variables `x0..x_{vars-1}`.
pub fn sample_abstract_term(rng: &mut SplitMix64, vars: u32, depth: usize) -> Tm {
    if depth == 0 || rng.chance(1, 3) {
        if vars > 0 && rng.chance(1, 2) {
            var(rng.below(vars as u64) as u32)
        } else {
            match rng.below(5) {
                0 => k(),
                1 => s(),
                2 => num(rng.below(7)),
                3 => prim(PrimOp::Succ),
                _ => prim(PrimOp::IfZ),
            }
        }
    } else {
        app(
            sample_abstract_term(rng, vars, depth - 1),
            sample_abstract_term(rng, vars, depth - 1),
        )
    }
}

/// Property-check the two abstraction laws on `samples` random terms with at
/// most three variables: every partial application of the compiled
/// abstraction is defined, and the full application agrees with direct
/// substitution up to joint divergence at the given fuel.
pub fn check_combinatory_complete<P: Pas>(
    pas: &P,
    samples: usize,
    seed: u64,
    partial_fuel: Fuel,
    full_fuel: Fuel,
) -> CompletenessReport {
    let mut rng = SplitMix64::new(seed);
    let mut counterexamples = Vec::new();
    for _ in 0..samples {
        let nvars = rng.below(3) as u32 + 1; // parameters plus the applied variable
        let t = sample_abstract_term(&mut rng, nvars, 3);
        let vars: Vec<u32> = (0..nvars).collect();
        let b = pas.compile(&vars, &t);
        let elems: Vec<P::Elem> = vars.iter().map(|_| pas.sample_elem(&mut rng)).collect();
        let assignment: Vec<String> = elems.iter().map(|e| e.to_string()).collect();

        // clause (i): partial applications are defined
        let mut cur = b.clone();
        let mut defined = true;
        for a in &elems[..elems.len() - 1] {
            match pas.apply(&cur, a, partial_fuel) {
                Some(next) => cur = next,
                None => {
                    counterexamples.push(Counterexample {
                        term: t.to_string(),
                        assignment: assignment.clone(),
                        clause: 1,
                        detail: "partial application undefined".into(),
                    });
                    defined = false;
                    break;
                }
            }
        }
        if !defined {
            continue;
        }

        // clause (ii): full application agrees with substitute-then-evaluate
        let last = elems.last().expect("nvars >= 1");
        let via_b = pas.apply_full(&cur, last, full_fuel);
        let env: Vec<(u32, P::Elem)> = vars.iter().copied().zip(elems.iter().cloned()).collect();
        let direct = pas.eval_term(&t, &env, full_fuel);
        let agree = match (&via_b, &direct) {
            (None, None) => true,
            (Some(x), Some(y)) => x == y,
            _ => false,
        };
        if !agree {
            counterexamples.push(Counterexample {
                term: t.to_string(),
                assignment,
                clause: 2,
                detail: format!(
                    "abstraction gave {:?}, substitution gave {:?}",
                    via_b.map(|v| v.to_string()),
                    direct.map(|v| v.to_string())
                ),
            });
        }
    }
    CompletenessReport {
        model: pas.name().to_string(),
        trials: samples,
        counterexamples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::omega;

    #[test]
    fn identity_abstraction() {
        let id = lam(0, &var(0));
        assert_eq!(id, skk());
        let r = evaluate(&app(id, num(9)), Fuel(100));
        assert_eq!(r.numeral(), Some(&9u32.into()));
    }

    #[test]
    fn abstraction_is_defined_even_with_divergent_body() {
        // t = x1 x1 with x1 := omega; the body diverges after substitution,
        // the abstraction is still a value
        let t = app(var(1), var(1));
        let b = lam(0, &t);
        let closed = subst(&b, 1, &omega());
        assert!(evaluate(&closed, Fuel(1_000)).is_value());
        // and applying it diverges exactly like the body
        let applied = app(closed, k());
        assert_eq!(evaluate(&applied, Fuel(1_000)), EvalResult::OutOfFuel);
    }

    #[test]
    fn abstraction_matches_substitution_on_random_numerals() {
        // \*x. ifz x x0 (succ x) with x0 := 41
        let body = apps(
            prim(PrimOp::IfZ),
            [var(1), var(0), app(prim(PrimOp::Succ), var(1))],
        );
        let f = subst(&lam(1, &body), 0, &num(41));
        let mut rng = SplitMix64::new(7);
        for _ in 0..100 {
            let n = rng.below(50);
            let via_f = evaluate(&app(f.clone(), num(n)), Fuel(10_000));
            let direct = evaluate(&subst(&subst(&body, 1, &num(n)), 0, &num(41)), Fuel(10_000));
            assert_eq!(via_f.value(), direct.value(), "at n={}", n);
        }
    }

    #[test]
    fn projection_law_small() {
        let pair = tuple(&[num(1), num(2)]).unwrap();
        let u21 = projector(2, 1).unwrap();
        let r = evaluate(&app(pair.clone(), u21), Fuel(1_000));
        assert_eq!(r.numeral(), Some(&1u32.into()));
        let u22 = projector(2, 2).unwrap();
        let r = evaluate(&app(pair, u22), Fuel(1_000));
        assert_eq!(r.numeral(), Some(&2u32.into()));
    }

    #[test]
    fn projection_law_randomized() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..50 {
            let n = rng.below(5) as usize + 1;
            let elems: Vec<Tm> = (0..n).map(|_| num(rng.below(1000))).collect();
            let tup = tuple(&elems).unwrap();
            for i in 1..=n {
                let proj = projector(n, i).unwrap();
                let r = evaluate(&app(tup.clone(), proj), Fuel(100_000));
                assert_eq!(
                    r.value(),
                    Some(&elems[i - 1]),
                    "projection {} of {} failed",
                    i,
                    n
                );
            }
        }
    }

    #[test]
    fn singleton_tuple_projects() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..20 {
            let a = TermModel.sample_elem(&mut rng);
            let tup = tuple(std::slice::from_ref(&a)).unwrap();
            let proj = projector(1, 1).unwrap();
            let r = evaluate(&app(tup, proj), Fuel(100_000));
            assert_eq!(r.value(), Some(&a));
        }
    }

    #[test]
    fn projector_rejects_bad_index() {
        assert!(projector(3, 0).is_err());
        assert!(projector(3, 4).is_err());
        assert!(projector(0, 1).is_err());
    }

    #[test]
    fn theta_total_on_arbitrary_values() {
        let f = turing_fixpoint();
        let mut rng = SplitMix64::new(2024);
        for _ in 0..100 {
            let g = TermModel.sample_elem(&mut rng);
            let r = evaluate(&app(f.clone(), g.clone()), Fuel(10_000));
            assert!(r.is_value(), "fixed-point operator not total on {}", g);
        }
        // in particular on arguments that demand their argument's value
        let demanding = prim(PrimOp::Succ);
        let r = evaluate(&app(f, demanding), Fuel(10_000));
        assert!(r.is_value());
        assert!(theta_unfold_once(r.value().unwrap(), Fuel(10_000)).is_some());
    }

    #[test]
    fn theta_constant_function_unfolds_to_constant() {
        let g = app(k(), num(5));
        let res = theta_agreement(&g, Fuel(10_000), 5);
        assert!(res.agree, "{:?}", res);
        assert_eq!(res.gfg.numeral(), Some(&5u32.into()));
    }

    #[test]
    fn theta_identity_absorbs_in_one_unfold() {
        let res = theta_agreement(&skk(), Fuel(10_000), 5);
        assert!(res.agree, "{:?}", res);
        assert!(res.unfolds_used.unwrap() <= 1);
    }

    #[test]
    fn completeness_holds_on_term_model() {
        let report = check_combinatory_complete(&TermModel, 150, 11, Fuel(10_000), Fuel(100_000));
        assert!(
            report.ok(),
            "unexpected counterexamples: {:?}",
            report.counterexamples
        );
    }

    #[test]
    fn zero_parameter_clause() {
        // n = 0: b itself is a value and b a agrees with t(a)
        let t = app(prim(PrimOp::Succ), var(0));
        let b = lam(0, &t);
        assert!(evaluate(&b, Fuel(100)).is_value());
        let r = evaluate(&app(b, num(6)), Fuel(1_000));
        assert_eq!(r.numeral(), Some(&7u32.into()));
    }

    #[test]
    fn swapped_model_has_counterexamples() {
        let report =
            check_combinatory_complete(&SwappedTermModel, 200, 11, Fuel(10_000), Fuel(100_000));
        assert!(
            !report.ok(),
            "transposed K/S model should fail the abstraction laws"
        );
    }
}
