//! Numberings of partial computable functions: bounded equivalence checking
//! for `a ~ b` (same function), totalizer witnesses for precompleteness, and
//! diagonal auditing.
//!
//! Function equality of codes is undecidable, so the checker samples inputs
//! under a budget. A `No` is conclusive (two different numerals observed);
//! `Yes` means every sampled input agreed, counting joint
//! divergence-within-fuel as agreement; `Unknown` flags an input where one
//! side converged and the other ran out of fuel. Theorem-level suites use
//! designed instances where the bounded verdict is conclusive by
//! construction.

use crate::codec::{decode, encode, Code};
use crate::corpus::divergent_code;
use crate::eval::Fuel;
use crate::k1::{phi, smn, PartialValue};
use crate::pca::{lam, lam_many};
use crate::term::{app, apps, num_big, prim, var, PrimOp, Tm};
use num_bigint::BigUint;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Agreed on every sampled input (conclusively or by joint divergence).
    Yes,
    /// Two distinct numeral outputs observed; final at every larger budget.
    No,
    /// Budget exhausted with mixed evidence on some input.
    Unknown,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes => write!(f, "yes"),
            Verdict::No => write!(f, "no"),
            Verdict::Unknown => write!(f, "unknown"),
        }
    }
}

/// A total map on codes given both as a host-level function and as a code,
/// so it can be fed back into `phi`.
#[derive(Debug, Clone)]
pub struct TotalCodeMap {
    kind: MapKind,
}

#[derive(Debug, Clone)]
enum MapKind {
    /// `n -> smn(base, n)`
    Smn { base: Code },
    /// `n -> outer(inner(n))`
    Compose(Box<TotalCodeMap>, Box<TotalCodeMap>),
}

impl TotalCodeMap {
    pub fn from_base(base: Code) -> Self {
        TotalCodeMap {
            kind: MapKind::Smn { base },
        }
    }

    pub fn compose(outer: TotalCodeMap, inner: TotalCodeMap) -> Self {
        TotalCodeMap {
            kind: MapKind::Compose(Box::new(outer), Box::new(inner)),
        }
    }

    /// Host-level application; total by construction.
    pub fn apply(&self, n: &Code) -> Code {
        match &self.kind {
            MapKind::Smn { base } => smn(base, n),
            MapKind::Compose(outer, inner) => outer.apply(&inner.apply(n)),
        }
    }

    /// The code of this map: running it on a numeral yields the same code
    /// the host-level `apply` produces.
    pub fn code(&self) -> Code {
        let t = self.term();
        encode(&t).expect("closed")
    }

    fn term(&self) -> Tm {
        match &self.kind {
            MapKind::Smn { base } => lam(
                0,
                &apps(prim(PrimOp::Smn), [num_big(base.clone()), var(0)]),
            ),
            MapKind::Compose(outer, inner) => {
                let f = num_big(outer.code());
                let g = num_big(inner.code());
                lam(0, &app(f, app(g, var(0))))
            }
        }
    }
}

/// A total binary map on codes (curried application order: first, second).
#[derive(Debug, Clone)]
pub struct TotalCodeMap2 {
    base: Code,
}

impl TotalCodeMap2 {
    pub fn base(&self) -> &Code {
        &self.base
    }

    pub fn apply(&self, x: &Code, n: &Code) -> Code {
        smn(&smn(&self.base, x), n)
    }

    /// Freeze the first argument, leaving a total unary map.
    pub fn freeze_first(&self, x: &Code) -> TotalCodeMap {
        TotalCodeMap::from_base(smn(&self.base, x))
    }

    pub fn code(&self) -> Code {
        let chain = apps(
            prim(PrimOp::Smn),
            [
                apps(prim(PrimOp::Smn), [num_big(self.base.clone()), var(0)]),
                var(1),
            ],
        );
        encode(&lam_many(&[0, 1], &chain)).expect("closed")
    }
}

/// A numbering: bounded equivalence for `~`, totalizers witnessing
/// precompleteness, and optionally a special element absorbing divergence.
pub trait Numbering {
    fn name(&self) -> &str;

    /// Sample inputs `0..=budget` at fuel `budget` and compare outputs.
    fn equiv_bounded(&self, a: &Code, b: &Code, budget: u64) -> Verdict;

    /// A total `f` with `f(n) ~ psi(n)` wherever `psi = phi_p` converges.
    fn totalize(&self, p: &Code) -> TotalCodeMap;

    /// The same for binary partial functions (curried), as allowed by the
    /// usual coding of sequences.
    fn totalize2(&self, p: &Code) -> TotalCodeMap2;

    /// Present when the numbering is complete: `totalize(p)` lands on this
    /// element wherever `phi_p` diverges.
    fn special_element(&self) -> Option<Code>;
}

/// The standard numbering `code -> its partial function`.
pub struct PhiNumbering;

fn compare_at(a: &Code, b: &Code, x: &BigUint, fuel: Fuel) -> Option<bool> {
    match (phi(a, x, fuel), phi(b, x, fuel)) {
        (PartialValue::Defined(u), PartialValue::Defined(v)) => Some(u == v),
        (PartialValue::DivergentWithin(_), PartialValue::DivergentWithin(_)) => Some(true),
        _ => None, // one side converged, the other may yet
    }
}

impl PhiNumbering {
    /// Equivalence sampled on explicit inputs with an explicit fuel; the
    /// acceptance checks pin these separately from the budget.
    pub fn equiv_on_inputs(
        &self,
        a: &Code,
        b: &Code,
        inputs: impl IntoIterator<Item = u64>,
        fuel: Fuel,
    ) -> Verdict {
        let mut unknown = false;
        for x in inputs {
            match compare_at(a, b, &x.into(), fuel) {
                Some(true) => {}
                Some(false) => return Verdict::No,
                None => unknown = true,
            }
        }
        if unknown {
            Verdict::Unknown
        } else {
            Verdict::Yes
        }
    }
}

impl Numbering for PhiNumbering {
    fn name(&self) -> &str {
        "phi"
    }

    fn equiv_bounded(&self, a: &Code, b: &Code, budget: u64) -> Verdict {
        self.equiv_on_inputs(a, b, 0..=budget, Fuel(budget))
    }

    fn totalize(&self, p: &Code) -> TotalCodeMap {
        // base = \*n. \*v. (P n) v : compute psi(n), then run the result
        let body = app(app(decode(p), var(0)), var(1));
        let base = encode(&lam_many(&[0, 1], &body)).expect("closed");
        TotalCodeMap::from_base(base)
    }

    fn totalize2(&self, p: &Code) -> TotalCodeMap2 {
        let body = app(apps(decode(p), [var(0), var(1)]), var(2));
        let base = encode(&lam_many(&[0, 1, 2], &body)).expect("closed");
        TotalCodeMap2 { base }
    }

    fn special_element(&self) -> Option<Code> {
        Some(divergent_code())
    }
}

/// Violations found when auditing a claimed diagonal: inputs `x` where
/// `delta(x)` converged to something equivalent to `x`.
#[derive(Debug, Clone)]
pub struct DiagonalReport {
    pub checked: usize,
    pub converged: usize,
    pub violations: Vec<(Code, Code)>,
}

impl DiagonalReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check `delta(x) !~ x` for every sampled `x` where `delta(x)` converges.
pub fn is_diagonal_on<N: Numbering>(
    numbering: &N,
    delta: &Code,
    sample: &[Code],
    budget: u64,
) -> DiagonalReport {
    let mut report = DiagonalReport {
        checked: sample.len(),
        converged: 0,
        violations: Vec::new(),
    };
    for x in sample {
        if let PartialValue::Defined(y) = phi(delta, x, Fuel(budget)) {
            report.converged += 1;
            if numbering.equiv_bounded(&y, x, budget).is_yes() {
                report.violations.push((x.clone(), y.clone()));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{const_code, identity_code, smn_chain};
    use crate::k1::{pad, pad_base_code};
    use crate::term::num;

    fn phi_n() -> PhiNumbering {
        PhiNumbering
    }

    #[test]
    fn padding_is_equivalent_so_far() {
        let e = identity_code();
        let v = phi_n().equiv_bounded(&e, &pad(&e, &5u32.into()), 50);
        assert_eq!(v, Verdict::Yes);
    }

    #[test]
    fn identity_and_successor_differ_at_zero() {
        let v = phi_n().equiv_bounded(&identity_code(), &crate::corpus::add_code(1), 10);
        assert_eq!(v, Verdict::No);
    }

    #[test]
    fn two_divergent_codes_agree_at_any_budget() {
        let a = divergent_code();
        let b = pad(&a, &1u32.into());
        for budget in [5u64, 50, 500] {
            assert_eq!(phi_n().equiv_bounded(&a, &b, budget), Verdict::Yes);
        }
    }

    #[test]
    fn equiv_is_reflexive_and_symmetric() {
        let codes = [identity_code(), const_code(3), divergent_code()];
        for budget in [3u64, 20, 60] {
            for a in &codes {
                assert_eq!(phi_n().equiv_bounded(a, a, budget), Verdict::Yes);
                for b in &codes {
                    assert_eq!(
                        phi_n().equiv_bounded(a, b, budget),
                        phi_n().equiv_bounded(b, a, budget)
                    );
                }
            }
        }
    }

    #[test]
    fn mixed_evidence_is_unknown_not_no() {
        // a converges everywhere quickly; b diverges within any budget
        let a = const_code(0);
        let b = divergent_code();
        assert_eq!(phi_n().equiv_bounded(&a, &b, 30), Verdict::Unknown);
    }

    #[test]
    fn totalizer_of_total_identity() {
        // psi = identity: f(n) must behave like the function coded by n
        let f = phi_n().totalize(&identity_code());
        for p in [identity_code(), const_code(9), crate::corpus::add_code(2)] {
            let fp = f.apply(&p);
            let v = phi_n().equiv_on_inputs(&fp, &p, 0..=20, Fuel(10_000));
            assert_eq!(v, Verdict::Yes, "totalized identity at {}", p);
        }
    }

    #[test]
    fn totalizer_of_divergent_psi_hits_special_element() {
        let f = phi_n().totalize(&divergent_code());
        let special = phi_n().special_element().unwrap();
        for n in 0u32..=50 {
            let fn_ = f.apply(&n.into());
            assert!(!phi(&fn_, &0u32.into(), Fuel(10_000)).is_defined());
            let v = phi_n().equiv_bounded(&fn_, &special, 100);
            assert_ne!(v, Verdict::No);
        }
    }

    #[test]
    fn totalizer_of_padding_psi() {
        // psi(n) = pad(c, n): f(n) should behave like the function of c
        let c = const_code(4);
        let psi = encode(&lam(
            0,
            &smn_chain(
                num_big(pad_base_code()),
                [num_big(c.clone()), var(0)],
            ),
        ))
        .unwrap();
        let f = phi_n().totalize(&psi);
        for n in 0u32..=20 {
            let fn_ = f.apply(&n.into());
            let v = phi_n().equiv_on_inputs(&fn_, &c, 0..=20, Fuel(10_000));
            assert_eq!(v, Verdict::Yes, "at n = {}", n);
        }
    }

    #[test]
    fn totalizer_code_matches_host_map() {
        let f = phi_n().totalize(&identity_code());
        let fc = f.code();
        for n in 0u64..=200 {
            let via_phi = phi(&fc, &n.into(), Fuel(10_000));
            assert_eq!(
                via_phi,
                PartialValue::Defined(f.apply(&n.into())),
                "totalizer code disagrees with host map at {}",
                n
            );
        }
    }

    #[test]
    fn totalize2_freezes_and_runs() {
        // psi(x, n) = phi_x(x, n) is the usual diagonal; freeze a projection
        let first = encode(&lam_many(&[0, 1], &var(0))).unwrap();
        let d = phi_n().totalize2(&first);
        // psi(x, n) = x, so d(x, n) codes the function of code x
        let e = const_code(6);
        let out = d.apply(&e, &3u32.into());
        let v = phi_n().equiv_on_inputs(&out, &e, 0..=20, Fuel(10_000));
        assert_eq!(v, Verdict::Yes);
        // and its code computes the same chain in-language
        let via_phi = crate::k1::phi2(&d.code(), &e, &3u32.into(), Fuel(10_000));
        assert_eq!(via_phi.defined(), Some(&out));
    }

    #[test]
    fn composed_maps_carry_codes() {
        let f = phi_n().totalize(&identity_code());
        let g = TotalCodeMap::from_base(crate::corpus::const_builder_base());
        let h = TotalCodeMap::compose(f, g);
        let hc = h.code();
        for n in [0u64, 1, 17] {
            let via_phi = phi(&hc, &n.into(), Fuel(10_000));
            assert_eq!(via_phi.defined(), Some(&h.apply(&n.into())));
        }
    }

    #[test]
    fn diagonal_audit_flags_identity() {
        let sample: Vec<Code> = (0u32..20).map(Code::from).collect();
        let report = is_diagonal_on(&phi_n(), &identity_code(), &sample, 50);
        assert!(!report.ok());
        assert_eq!(report.violations.len(), report.converged);
    }

    #[test]
    fn empty_function_is_vacuously_diagonal() {
        let sample: Vec<Code> = (0u32..20).map(Code::from).collect();
        let report = is_diagonal_on(&phi_n(), &divergent_code(), &sample, 50);
        assert!(report.ok());
        assert_eq!(report.converged, 0);
    }

    #[test]
    fn completeness_clause_on_designed_divergents() {
        // psi defined only at 0; off 0 the totalizer lands on the special
        // element's class
        let psi = encode(&lam(
            0,
            &crate::corpus::ifz_cases(var(0), num(5), crate::corpus::diverge()),
        ))
        .unwrap();
        let f = phi_n().totalize(&psi);
        let special = phi_n().special_element().unwrap();
        for n in 1u32..=20 {
            let v = phi_n().equiv_bounded(&f.apply(&n.into()), &special, 100);
            assert_ne!(v, Verdict::No, "at n = {}", n);
        }
        // where psi converges, f(0) behaves like the function coded by
        // psi(0) = 5
        let f0 = f.apply(&0u32.into());
        let five: Code = 5u32.into();
        let w = phi_n().equiv_on_inputs(&f0, &five, 0..=10, Fuel(10_000));
        assert_eq!(w, Verdict::Yes);
    }
}
