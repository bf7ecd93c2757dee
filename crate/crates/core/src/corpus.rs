//! A fixed corpus of coded programs with known extensional behavior.
//!
//! Random codes are almost always junk, so randomized suites draw from these
//! instead: identities, constants, adders, divergers, parity-guarded
//! programs, and padded variants of each. Also exports the small program
//! gadgets (thunked branching, recursion through the fixed-point
//! combinator, in-language s-m-n chains) that the constructions build on.

use crate::codec::{encode, Code};
use crate::k1::pad;
use crate::pca::{lam, turing_fixpoint};
use crate::term::{app, apps, k, num, prim, var, PrimOp, Tm};
use num_bigint::BigUint;

/// Branch on `scrut = 0` without evaluating the untaken side: both branches
/// ride under `K` and only the selected thunk is applied (to a dummy 0).
pub fn ifz_cases(scrut: Tm, zero: Tm, pos: Tm) -> Tm {
    app(
        apps(
            prim(PrimOp::IfZ),
            [scrut, app(k(), zero), app(k(), pos)],
        ),
        num(0),
    )
}

/// `eq t v` as a scrutinee for [`ifz_cases`] (0 means equal).
pub fn eq_const(t: Tm, v: u64) -> Tm {
    apps(prim(PrimOp::Eq), [t, num(v)])
}

/// A term that loops forever when evaluated.
pub fn diverge() -> Tm {
    app(crate::term::omega(), crate::term::omega())
}

/// Recursive unary program: `body` may use `Var(fvar)` for self and
/// `Var(nvar)` for the argument. Built by applying the fixed-point
/// combinator to `\*f. \*n. body`.
pub fn rec1(fvar: u32, nvar: u32, body: Tm) -> Tm {
    let g = crate::pca::lam_many(&[fvar, nvar], &body);
    app(turing_fixpoint(), g)
}

/// In-language s-m-n chain: a term computing `smn(...smn(base, a1)..., ak)`
/// from numeral-valued argument terms.
pub fn smn_chain(base: Tm, args: impl IntoIterator<Item = Tm>) -> Tm {
    args.into_iter()
        .fold(base, |acc, a| apps(prim(PrimOp::Smn), [acc, a]))
}

// ---------------------------------------------------------------------------
// named base programs
// ---------------------------------------------------------------------------

fn enc(t: &Tm) -> Code {
    encode(t).expect("corpus terms are closed")
}

/// `\*x. x`
pub fn identity_code() -> Code {
    enc(&lam(0, &var(0)))
}

/// `\*x. omega omega`: defined nowhere.
pub fn divergent_code() -> Code {
    enc(&lam(0, &diverge()))
}

/// `\*x. c`
pub fn const_code(c: u64) -> Code {
    enc(&lam(0, &num(c)))
}

/// `\*x. succ^j x`
pub fn add_code(j: u64) -> Code {
    let mut body = var(0);
    for _ in 0..j {
        body = app(prim(PrimOp::Succ), body);
    }
    enc(&lam(0, &body))
}

/// `\*n. \*x. n`: freezing its first argument yields a constant program, so
/// `smn(const_builder_base(), n)` is a code of the constant-`n` function.
pub fn const_builder_base() -> Code {
    enc(&crate::pca::lam_many(&[0, 1], &var(0)))
}

/// `\*n. \*x. n (succ x)`: freezing `n` gives the composition of program
/// `n` with the successor.
pub fn compose_succ_base() -> Code {
    enc(&crate::pca::lam_many(
        &[0, 1],
        &app(var(0), app(prim(PrimOp::Succ), var(1))),
    ))
}

/// Program defined exactly on the even numbers up to `limit`, returning the
/// given value there and diverging elsewhere. Realized as an equality chain
/// so that convergence takes a few steps per tested value — cheap enough to
/// sit on the fast side of a convergence race.
pub fn even_valued_code(value: &BigUint, limit: u64) -> Code {
    let mut body = diverge();
    let mut v = limit & !1;
    loop {
        body = ifz_cases(eq_const(var(0), v), crate::term::num_big(value.clone()), body);
        if v < 2 {
            break;
        }
        v -= 2;
    }
    enc(&lam(0, &body))
}

pub fn even_const_code(c: u64, limit: u64) -> Code {
    even_valued_code(&c.into(), limit)
}

/// Program defined exactly on even inputs (value 0), written as a recursive
/// parity loop on `pred (pred n)`.
pub fn even_loop_code() -> Code {
    let body = ifz_cases(
        var(1),
        num(0),
        ifz_cases(
            app(prim(PrimOp::Pred), var(1)),
            diverge(),
            app(
                var(0),
                app(prim(PrimOp::Pred), app(prim(PrimOp::Pred), var(1))),
            ),
        ),
    );
    enc(&rec1(0, 1, body))
}

// ---------------------------------------------------------------------------
// the corpus
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Behavior {
    Identity,
    Constant(u64),
    AddConst(u64),
    Divergent,
    /// Defined exactly on even inputs `<= limit`, constant `value` there.
    EvenConst { value: u64, limit: u64 },
    /// Defined exactly on even inputs, value 0 (loop-based, slower).
    EvenZero,
}

impl Behavior {
    /// The function the program denotes; `None` marks divergence.
    pub fn expected(&self, x: u64) -> Option<BigUint> {
        match self {
            Behavior::Identity => Some(x.into()),
            Behavior::Constant(c) => Some((*c).into()),
            Behavior::AddConst(j) => Some((x + j).into()),
            Behavior::Divergent => None,
            Behavior::EvenConst { value, limit } => {
                (x % 2 == 0 && x <= *limit).then(|| (*value).into())
            }
            Behavior::EvenZero => (x % 2 == 0).then(|| 0u32.into()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusProgram {
    pub name: String,
    pub code: Code,
    pub behavior: Behavior,
}

fn entry(name: impl Into<String>, code: Code, behavior: Behavior) -> CorpusProgram {
    CorpusProgram {
        name: name.into(),
        code,
        behavior,
    }
}

/// The designed corpus: roughly two hundred programs with known behavior.
/// Deterministic across runs.
pub fn corpus() -> Vec<CorpusProgram> {
    let mut out = Vec::new();
    let id = identity_code();
    out.push(entry("identity", id.clone(), Behavior::Identity));
    for i in 1u64..=11 {
        out.push(entry(
            format!("identity/pad{}", i),
            pad(&id, &i.into()),
            Behavior::Identity,
        ));
    }
    for c in 0u64..90 {
        out.push(entry(format!("const{}", c), const_code(c), Behavior::Constant(c)));
    }
    let c7 = const_code(7);
    for i in 1u64..=5 {
        out.push(entry(
            format!("const7/pad{}", i),
            pad(&c7, &i.into()),
            Behavior::Constant(7),
        ));
    }
    for j in 1u64..=60 {
        out.push(entry(format!("add{}", j), add_code(j), Behavior::AddConst(j)));
    }
    let a1 = add_code(1);
    for i in 1u64..=5 {
        out.push(entry(
            format!("add1/pad{}", i),
            pad(&a1, &i.into()),
            Behavior::AddConst(1),
        ));
    }
    let div = divergent_code();
    out.push(entry("divergent", div.clone(), Behavior::Divergent));
    for i in 1u64..=16 {
        out.push(entry(
            format!("divergent/pad{}", i),
            pad(&div, &i.into()),
            Behavior::Divergent,
        ));
    }
    for c in 0u64..10 {
        out.push(entry(
            format!("even-const{}", c),
            even_const_code(c, 30),
            Behavior::EvenConst { value: c, limit: 30 },
        ));
    }
    out.push(entry("even-loop", even_loop_code(), Behavior::EvenZero));
    out
}

/// One hundred elements in the converging fragment of the fixed-point
/// operator: applying the operator to any of these and unfolding reaches the
/// same weak normal form as the outer application.
pub fn theta_corpus() -> Vec<Tm> {
    let mut out = Vec::new();
    for c in 0u64..40 {
        out.push(app(k(), num(c)));
    }
    for c in 0u64..20 {
        out.push(app(k(), crate::term::num_big(const_code(c))));
    }
    for c in 0u64..20 {
        out.push(app(k(), app(k(), num(c))));
    }
    out.push(crate::term::skk());
    for c in 0u64..19 {
        out.push(app(k(), app(prim(PrimOp::Succ), num(c))));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::Fuel;
    use crate::k1::{domain_enum, phi};

    #[test]
    fn corpus_size_and_unique_codes() {
        let c = corpus();
        assert!(c.len() >= 200, "corpus has {} programs", c.len());
        let mut seen = std::collections::HashSet::new();
        for p in &c {
            assert!(seen.insert(p.code.clone()), "duplicate code for {}", p.name);
        }
    }

    #[test]
    fn corpus_behaviors_are_accurate() {
        for p in corpus() {
            for x in [0u64, 1, 2, 3, 7, 12, 29, 30] {
                let got = phi(&p.code, &x.into(), Fuel(100_000));
                match p.behavior.expected(x) {
                    Some(v) => assert_eq!(
                        got.defined(),
                        Some(&v),
                        "{} on input {}: expected {}",
                        p.name,
                        x,
                        v
                    ),
                    None => assert!(
                        !got.is_defined(),
                        "{} on input {} should diverge",
                        p.name,
                        x
                    ),
                }
            }
        }
    }

    #[test]
    fn even_const_is_cheap_to_converge() {
        let e = even_const_code(3, 30);
        let (r, steps) = crate::eval::eval_with_stats(
            &app(crate::codec::decode(&e), num(30)),
            Fuel(1_000),
        );
        assert_eq!(r.numeral(), Some(&3u32.into()));
        assert!(steps < 300, "even-const took {} steps", steps);
    }

    #[test]
    fn even_loop_domain_is_even() {
        let e = even_loop_code();
        let d = domain_enum(&e, 300);
        assert!(!d.is_empty());
        for x in d {
            assert_eq!(x % 2, 0, "odd input {} showed up as defined", x);
        }
    }

    #[test]
    fn recursion_gadget_unfolds_per_call() {
        // triangular-number style loop: f(n) = n == 0 ? 0 : f(n-1)
        let body = ifz_cases(var(1), num(0), app(var(0), app(prim(PrimOp::Pred), var(1))));
        let prog = rec1(0, 1, body);
        for n in [0u64, 1, 5, 17] {
            let r = crate::eval::evaluate(&app(prog.clone(), num(n)), Fuel(10_000));
            assert_eq!(r.numeral(), Some(&0u32.into()), "loop failed at {}", n);
        }
    }
}
