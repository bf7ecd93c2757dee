//! The standard model of partial computable functions on codes: application
//! of code `e` to input `x` runs the decoded program on the numeral `x`
//! through the interpreter.
//!
//! A computation counts as defined only when it reaches a *numeral* value;
//! partial applications and stuck terms are values of the term model but not
//! outputs of a partial function on naturals, so they count as undefined
//! here (the defined-for-phi convention).

use crate::codec::{cantor_pair, cantor_unpair, decode, encode, smn_code, Code};
use crate::eval::{evaluate, Fuel};
use crate::pca::{lam_many, Pas};
use crate::rng::SplitMix64;
use crate::term::{app, apps, num, num_big, prim, var, PrimOp, Term, Tm};
use num_bigint::BigUint;
use std::collections::BTreeSet;

/// Outcome of running a coded program on one input with bounded fuel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartialValue {
    Defined(BigUint),
    /// Not a numeral value within the given fuel. May become `Defined` with
    /// a larger budget; never the other way around.
    DivergentWithin(Fuel),
}

impl PartialValue {
    pub fn is_defined(&self) -> bool {
        matches!(self, PartialValue::Defined(_))
    }

    pub fn defined(&self) -> Option<&BigUint> {
        match self {
            PartialValue::Defined(v) => Some(v),
            _ => None,
        }
    }
}

/// `phi_e(x)` within `fuel` head steps.
pub fn phi(e: &Code, x: &BigUint, fuel: Fuel) -> PartialValue {
    let t = app(decode(e), num_big(x.clone()));
    match evaluate(&t, fuel).numeral() {
        Some(v) => PartialValue::Defined(v.clone()),
        None => PartialValue::DivergentWithin(fuel),
    }
}

/// Curried binary application `phi_e(x, y)`: the decoded program applied to
/// the numeral `x`, then to the numeral `y`.
pub fn phi2(e: &Code, x: &BigUint, y: &BigUint, fuel: Fuel) -> PartialValue {
    let t = apps(decode(e), [num_big(x.clone()), num_big(y.clone())]);
    match evaluate(&t, fuel).numeral() {
        Some(v) => PartialValue::Defined(v.clone()),
        None => PartialValue::DivergentWithin(fuel),
    }
}

/// The s-m-n transformation: a total code map with
/// `phi(smn(e, a), x) = phi2(e, a, x)` for every `x`. Pure code
/// manipulation; nothing is evaluated.
pub fn smn(e: &Code, a: &BigUint) -> Code {
    smn_code(e, a)
}

thread_local! {
    static PAD_BASE: Code = {
        // \*a. \*b. \*x. a x  — b is a discardable tag
        let t = lam_many(&[0, 1, 2], &app(var(0), var(2)));
        encode(&t).expect("closed")
    };
}

/// Code of the program `\*a.\*b.\*x. a x`, the basis of [`pad`]; programs
/// built from it in-language agree with the host-level map.
pub fn pad_base_code() -> Code {
    PAD_BASE.with(|c| c.clone())
}

/// `pad(e, i)`: a code extensionally equal to `e` carrying the discardable
/// tag `i`, so `pad(e, i) != pad(e, j)` for `i != j`.
pub fn pad(e: &Code, i: &BigUint) -> Code {
    let base = pad_base_code();
    smn(&smn(&base, e), i)
}

/// Cantor pairing on codes; `pair_codes(0, 0) = 0`.
pub fn pair_codes(e: &BigUint, n: &BigUint) -> BigUint {
    cantor_pair(e, n)
}

pub fn unpair_codes(z: &BigUint) -> (BigUint, BigUint) {
    cantor_unpair(z)
}

/// Stage-`s` approximation of the domain of `phi_e`: the inputs `x <= s`
/// on which the program reaches a numeral within `s` head steps. Monotone
/// nondecreasing in `s`.
pub fn domain_enum(e: &Code, stage: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for x in 0..=stage {
        if phi(e, &BigUint::from(x), Fuel(stage)).is_defined() {
            out.insert(x);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// the model as a partial applicative structure
// ---------------------------------------------------------------------------

/// Codes under `phi`-application. Combinatory completeness is realized by
/// s-m-n currying: every partial application of a compiled abstraction is
/// itself a code, produced in-language by the `smn` primitive.
pub struct K1Model;

/// `pred (succ t)`: forces `t` to a numeral (sticks otherwise), belongs in
/// every spot where the model demands an element rather than a raw value.
fn numeral_guard(t: Tm) -> Tm {
    app(prim(PrimOp::Pred), app(prim(PrimOp::Succ), t))
}

/// Rewrite an abstract term so that every application goes through the
/// model's application: both sides are guarded to numerals, after which the
/// head numeral fires reflectively.
fn k1_body(t: &Tm) -> Tm {
    match &**t {
        Term::App(f, a) => app(numeral_guard(k1_body(f)), numeral_guard(k1_body(a))),
        _ => t.clone(),
    }
}

impl Pas for K1Model {
    type Elem = Code;

    fn name(&self) -> &str {
        "codes under phi"
    }

    fn apply(&self, a: &Code, b: &Code, fuel: Fuel) -> Option<Code> {
        phi(a, b, fuel).defined().cloned()
    }

    fn eval_term(&self, t: &Tm, env: &[(u32, Code)], fuel: Fuel) -> Option<Code> {
        match &**t {
            Term::Num(n) => Some(n.clone()),
            Term::Var(i) => env.iter().find(|(v, _)| v == i).map(|(_, c)| c.clone()),
            Term::App(f, a) => {
                let cf = self.eval_term(f, env, fuel)?;
                let ca = self.eval_term(a, env, fuel)?;
                self.apply(&cf, &ca, fuel)
            }
            _ => None, // raw combinators are not elements of this model
        }
    }

    fn compile(&self, vars: &[u32], t: &Tm) -> Code {
        assert!(!vars.is_empty());
        let body = k1_body(t);
        let full = lam_many(vars, &body);
        let mut stage = encode(&full).expect("closed");
        // wrap stages so every partial application returns the next code
        for j in (1..vars.len()).rev() {
            let taken = &vars[..j];
            let mut chain: Tm = num_big(stage.clone());
            for &x in taken {
                chain = apps(prim(PrimOp::Smn), [chain, var(x)]);
            }
            stage = encode(&lam_many(taken, &chain)).expect("closed");
        }
        stage
    }

    fn sample_elem(&self, rng: &mut SplitMix64) -> Code {
        BigUint::from(rng.below(500))
    }

    fn apply_full(&self, a: &Code, b: &Code, fuel: Fuel) -> Option<Code> {
        self.apply(a, b, fuel)
    }
}

/// Abstract-term sampler for the code model: leaves are element constants
/// (numerals) and variables.
pub fn sample_k1_term(rng: &mut SplitMix64, vars: u32, depth: usize) -> Tm {
    if depth == 0 || rng.chance(2, 5) {
        if vars > 0 && rng.chance(1, 2) {
            var(rng.below(vars as u64) as u32)
        } else {
            num(rng.below(300))
        }
    } else {
        app(
            sample_k1_term(rng, vars, depth - 1),
            sample_k1_term(rng, vars, depth - 1),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pca::lam;
    use crate::term::{k, omega, skk};

    fn identity_code() -> Code {
        encode(&skk()).unwrap()
    }

    #[test]
    fn phi_identity_program() {
        let e = identity_code();
        assert_eq!(
            phi(&e, &42u32.into(), Fuel(1_000)),
            PartialValue::Defined(42u32.into())
        );
    }

    #[test]
    fn phi_divergent_program() {
        // \*x. omega omega
        let e = encode(&lam(0, &app(omega(), omega()))).unwrap();
        assert_eq!(
            phi(&e, &0u32.into(), Fuel(1_000)),
            PartialValue::DivergentWithin(Fuel(1_000))
        );
    }

    #[test]
    fn phi_successor_program() {
        let e = encode(&lam(0, &app(prim(PrimOp::Succ), var(0)))).unwrap();
        assert_eq!(
            phi(&e, &7u32.into(), Fuel(1_000)),
            PartialValue::Defined(8u32.into())
        );
    }

    #[test]
    fn phi_partial_application_is_undefined() {
        // \*x. K: output is a combinator, not a numeral
        let e = encode(&lam(0, &k())).unwrap();
        assert!(!phi(&e, &3u32.into(), Fuel(1_000)).is_defined());
    }

    #[test]
    fn smn_freezes_first_projection() {
        let first = encode(&lam_many(&[0, 1], &var(0))).unwrap();
        let frozen = smn(&first, &5u32.into());
        for x in 0u32..=20 {
            assert_eq!(
                phi(&frozen, &x.into(), Fuel(1_000)),
                PartialValue::Defined(5u32.into())
            );
        }
    }

    #[test]
    fn smn_freezes_second_projection() {
        let second = encode(&lam_many(&[0, 1], &var(1))).unwrap();
        let frozen = smn(&second, &5u32.into());
        for x in 0u32..=20 {
            assert_eq!(
                phi(&frozen, &x.into(), Fuel(1_000)),
                PartialValue::Defined(x.into())
            );
        }
    }

    #[test]
    fn smn_matches_curried_application() {
        let e = encode(&lam_many(
            &[0, 1],
            &app(prim(PrimOp::Succ), app(var(0), var(1))),
        ))
        .unwrap();
        // phi2(e, a, x) = succ(phi_a(x)); freeze a = identity code
        let a = identity_code();
        let f = smn(&e, &a);
        for x in [0u32, 3, 19] {
            assert_eq!(phi(&f, &x.into(), Fuel(10_000)), phi2(&e, &a, &x.into(), Fuel(10_000)));
        }
    }

    #[test]
    fn smn_injective_in_frozen_argument() {
        let e = encode(&lam_many(&[0, 1], &var(0))).unwrap();
        let mut seen = std::collections::HashSet::new();
        for a in 0u32..=100 {
            assert!(seen.insert(smn(&e, &a.into())));
        }
    }

    #[test]
    fn pad_preserves_extension() {
        let programs = [
            identity_code(),
            encode(&lam(0, &app(prim(PrimOp::Succ), var(0)))).unwrap(),
        ];
        for e in &programs {
            let p = pad(e, &3u32.into());
            for x in 0u32..=20 {
                assert_eq!(
                    phi(&p, &x.into(), Fuel(10_000)).defined(),
                    phi(e, &x.into(), Fuel(10_000)).defined()
                );
            }
        }
    }

    #[test]
    fn pad_injective() {
        let e = identity_code();
        let mut seen = std::collections::HashSet::new();
        for i in 0u32..100 {
            assert!(seen.insert(pad(&e, &i.into())));
        }
    }

    #[test]
    fn pad_agrees_with_in_language_padding() {
        // \*x. smn (smn base x) 4 computes pad(x, 4) in-language
        let base = pad_base_code();
        let t = lam(
            0,
            &apps(
                prim(PrimOp::Smn),
                [
                    apps(prim(PrimOp::Smn), [num_big(base), var(0)]),
                    num(4),
                ],
            ),
        );
        let padder = encode(&t).unwrap();
        let e = identity_code();
        let via_phi = phi(&padder, &e, Fuel(1_000));
        assert_eq!(via_phi, PartialValue::Defined(pad(&e, &4u32.into())));
    }

    #[test]
    fn cantor_pairing_conventions() {
        assert_eq!(pair_codes(&0u32.into(), &0u32.into()), 0u32.into());
        let mut rng = SplitMix64::new(5);
        for _ in 0..1_000 {
            let a = BigUint::from(rng.next_u64() >> 20);
            let b = BigUint::from(rng.next_u64() >> 20);
            assert_eq!(unpair_codes(&pair_codes(&a, &b)), (a, b));
        }
        // strictly monotone in each argument
        for a in 0u32..20 {
            for b in 0u32..20 {
                let z = pair_codes(&a.into(), &b.into());
                assert!(pair_codes(&(a + 1).into(), &b.into()) > z);
                assert!(pair_codes(&a.into(), &(b + 1).into()) > z);
            }
        }
    }

    #[test]
    fn domain_enum_total_program() {
        let e = identity_code();
        let d = domain_enum(&e, 10);
        assert_eq!(d, (0..=10).collect());
    }

    #[test]
    fn domain_enum_divergent_program() {
        let e = encode(&lam(0, &app(omega(), omega()))).unwrap();
        for stage in [1u64, 10, 100, 500] {
            assert!(domain_enum(&e, stage).is_empty());
        }
    }

    #[test]
    fn domain_enum_monotone_in_stage() {
        let e = identity_code();
        let mut prev = BTreeSet::new();
        for stage in 0..30 {
            let cur = domain_enum(&e, stage);
            assert!(prev.is_subset(&cur));
            prev = cur;
        }
    }

    #[test]
    fn code_model_is_combinatory_complete() {
        // clause (i) and (ii) on the curried-code compilation
        let model = K1Model;
        let mut rng = SplitMix64::new(17);
        for _ in 0..40 {
            let nvars = rng.below(3) as u32 + 1;
            let t = sample_k1_term(&mut rng, nvars, 3);
            let vars: Vec<u32> = (0..nvars).collect();
            let b = model.compile(&vars, &t);
            let elems: Vec<Code> = vars.iter().map(|_| model.sample_elem(&mut rng)).collect();
            let mut cur = b;
            for a in &elems[..elems.len() - 1] {
                match model.apply(&cur, a, Fuel(10_000)) {
                    Some(next) => cur = next,
                    None => panic!("partial application undefined on {}", t),
                }
            }
            let env: Vec<(u32, Code)> =
                vars.iter().copied().zip(elems.iter().cloned()).collect();
            let via_b = model.apply(&cur, elems.last().unwrap(), Fuel(100_000));
            let direct = model.eval_term(&t, &env, Fuel(100_000));
            assert_eq!(via_b, direct, "term {}", t);
        }
    }
}
