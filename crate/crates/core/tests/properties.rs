//! Property tests for the kernel invariants: determinism, fuel
//! monotonicity, strictness, codec bijectivity, and syntax round-trips.

use num_bigint::BigUint;
use pcalab::codec::{decode, encode, pack, unpack};
use pcalab::eval::{evaluate, EvalResult, Fuel};
use pcalab::syntax::parse;
use pcalab::term::{app, k, num_big, omega, prim, s, skk, Term, Tm, ALL_PRIMS};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Tm> {
    prop_oneof![
        Just(k()),
        Just(s()),
        (0u64..50).prop_map(|n| num_big(n.into())),
        (0usize..ALL_PRIMS.len()).prop_map(|i| prim(ALL_PRIMS[i])),
    ]
}

fn closed_term() -> impl Strategy<Value = Tm> {
    leaf().prop_recursive(5, 64, 2, |inner| {
        (inner.clone(), inner).prop_map(|(f, a)| app(f, a))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluation_is_deterministic(t in closed_term(), fuel in 0u64..300) {
        let a = evaluate(&t, Fuel(fuel));
        let b = evaluate(&t, Fuel(fuel));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn values_are_fuel_monotone(t in closed_term(), fuel in 0u64..200, extra in 1u64..100) {
        if let EvalResult::Value(v) = evaluate(&t, Fuel(fuel)) {
            prop_assert_eq!(evaluate(&t, Fuel(fuel + extra)), EvalResult::Value(v));
        }
    }

    #[test]
    fn stuck_is_stable(t in closed_term(), fuel in 0u64..200, extra in 1u64..100) {
        if let EvalResult::Stuck(v) = evaluate(&t, Fuel(fuel)) {
            prop_assert_eq!(evaluate(&t, Fuel(fuel + extra)), EvalResult::Stuck(v));
        }
    }

    #[test]
    fn codec_roundtrips_terms(t in closed_term()) {
        let c = encode(&t).expect("closed");
        prop_assert_eq!(decode(&c), t);
    }

    #[test]
    fn codec_roundtrips_codes(n in 0u64..200_000) {
        let c: BigUint = n.into();
        let t = decode(&c);
        prop_assert!(t.is_closed());
        prop_assert_eq!(encode(&t).expect("closed"), c);
    }

    #[test]
    fn pairing_roundtrips(a in 0u64..u64::MAX, b in 0u64..u64::MAX) {
        let (x, y) = (BigUint::from(a), BigUint::from(b));
        prop_assert_eq!(unpack(&pack(&x, &y)), (x, y));
    }

    #[test]
    fn printer_output_reparses(t in closed_term()) {
        let text = t.to_string();
        prop_assert_eq!(parse(&text).expect("canonical output parses"), t);
    }
}

#[test]
fn strict_positions_force_and_partial_positions_do_not() {
    let loop_ = app(omega(), omega());
    // consumed positions force, including the discarded argument of K
    let forced = app(app(k(), num_big(1u32.into())), loop_.clone());
    assert_eq!(evaluate(&forced, Fuel(2_000)), EvalResult::OutOfFuel);
    // unconsumed positions do not: one argument keeps K partial
    let partial = app(k(), loop_);
    assert!(matches!(evaluate(&partial, Fuel(2_000)), EvalResult::Value(_)));
}

#[test]
fn identity_behaves_across_fuel_boundary() {
    let t = app(skk(), num_big(9u32.into()));
    assert_eq!(evaluate(&t, Fuel(1)), EvalResult::OutOfFuel);
    match evaluate(&t, Fuel(2)) {
        EvalResult::Value(v) => assert_eq!(*v, Term::Num(9u32.into())),
        other => panic!("unexpected {:?}", other),
    }
}
