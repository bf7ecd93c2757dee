//! Totalizing a partial function while avoiding a partial diagonal: the
//! dovetailed convergence race, the avoiding totalizer built on the
//! parameterized fixed-point construction, and its uniform version through
//! the universal function.
//!
//! The race runs both computations stage by stage and emits the value of
//! whichever converges first, ties going to the diagonal side; it diverges
//! when neither converges within the horizon. Stages are head steps of each
//! contestant, probed in-language through the `step` primitive with the same
//! stage counts the host-level [`race`] reports.

use crate::codec::{decode, encode, Code};
use crate::corpus::{diverge, ifz_cases, smn_chain};
use crate::eval::{eval_with_stats, Fuel};
use crate::fixedpoint::fixed_point_param_unchecked;
use crate::k1::{pair_codes, phi, PartialValue};
use crate::numbering::{is_diagonal_on, DiagonalReport, Numbering, TotalCodeMap, Verdict};
use crate::pca::{lam, lam_many};
use crate::term::{app, apps, num, num_big, prim, var, PrimOp, Term};
use num_bigint::BigUint;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The diagonal contestant (first argument of the race).
    Left,
    /// The totalized function's contestant.
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RaceOutcome {
    FirstConverged {
        which: Side,
        stage: u64,
        value: BigUint,
    },
    NeitherWithin {
        budget: u64,
    },
}

/// Stage of first convergence to a numeral, if within the horizon.
fn stage_of(code: &Code, input: &BigUint, horizon: u64) -> Option<(u64, BigUint)> {
    let t = app(decode(code), num_big(input.clone()));
    let (r, used) = eval_with_stats(&t, Fuel(horizon));
    match r.numeral() {
        Some(v) => Some((used, v.clone())),
        None => None,
    }
}

/// Host-level mirror of the in-language race: dovetail `left(x)` against
/// `right(n)`, first convergence wins, ties branch `Left`.
pub fn race(
    left: &Code,
    x: &BigUint,
    right: &Code,
    n: &BigUint,
    horizon: u64,
) -> RaceOutcome {
    let l = stage_of(left, x, horizon);
    let r = stage_of(right, n, horizon);
    match (l, r) {
        (Some((sl, vl)), Some((sr, _))) if sl <= sr => RaceOutcome::FirstConverged {
            which: Side::Left,
            stage: sl,
            value: vl,
        },
        (Some(_), Some((sr, vr))) => RaceOutcome::FirstConverged {
            which: Side::Right,
            stage: sr,
            value: vr,
        },
        (Some((sl, vl)), None) => RaceOutcome::FirstConverged {
            which: Side::Left,
            stage: sl,
            value: vl,
        },
        (None, Some((sr, vr))) => RaceOutcome::FirstConverged {
            which: Side::Right,
            stage: sr,
            value: vr,
        },
        (None, None) => RaceOutcome::NeitherWithin { budget: horizon },
    }
}

/// Code of the binary race `eta(x, n)`: the value of `delta(x)` or `psi(n)`,
/// whichever converges first (ties to `delta`); diverges when neither does
/// within the horizon.
pub fn race_eta(delta: &Code, psi: &Code, horizon: u64) -> Code {
    // x = 0, n = 1, probed stages dl = 2, dr = 3
    let probe_l = apps(
        prim(PrimOp::Step),
        [num_big(delta.clone()), var(0), num(horizon)],
    );
    let probe_r = apps(
        prim(PrimOp::Step),
        [num_big(psi.clone()), var(1), num(horizon)],
    );
    let run_l = app(num_big(delta.clone()), var(0));
    let run_r = app(num_big(psi.clone()), var(1));
    let body = ifz_cases(
        var(2),
        // delta silent within the horizon
        ifz_cases(var(3), diverge(), run_r.clone()),
        // delta converged
        ifz_cases(
            var(3),
            run_l.clone(),
            ifz_cases(apps(prim(PrimOp::Le), [var(2), var(3)]), run_l, run_r),
        ),
    );
    let bound = app(app(lam_many(&[2, 3], &body), probe_l), probe_r);
    encode(&lam_many(&[0, 1], &bound)).expect("closed")
}

#[derive(Debug, Clone)]
pub enum AdnError {
    /// The claimed diagonal visibly failed the diagonal property.
    NotDiagonal(DiagonalReport),
}

impl fmt::Display for AdnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdnError::NotDiagonal(r) => write!(
                f,
                "claimed diagonal has {} fixed points on the sample",
                r.violations.len()
            ),
        }
    }
}

impl std::error::Error for AdnError {}

#[derive(Debug, Clone)]
pub struct AdnOptions {
    /// Race horizon: stage bound for the dovetailed probes.
    pub horizon: u64,
    /// Budget for the diagonal misuse audit.
    pub diag_budget: u64,
}

impl Default for AdnOptions {
    fn default() -> Self {
        AdnOptions {
            horizon: 10_000,
            diag_budget: 200,
        }
    }
}

fn default_diag_sample() -> Vec<Code> {
    (0u32..=30).map(Code::from).collect()
}

/// The avoiding totalizer together with the pieces needed to audit it.
#[derive(Debug, Clone)]
pub struct AvoidingTotalizer {
    pub map: TotalCodeMap,
    pub eta: Code,
    pub delta: Code,
    pub psi: Code,
    pub horizon: u64,
}

/// Clause-by-clause evidence for one parameter value.
#[derive(Debug, Clone)]
pub struct AvoidanceEvidence {
    /// `delta(f(n))` failed to converge within the audit fuel.
    pub delta_divergent_within: u64,
    pub delta_silent: bool,
    /// The race on `(f(n), n)` resolved to neither side within the horizon.
    pub race_neither: bool,
    /// `f(n)` decodes to the expected frozen chain ending in the parameter.
    pub shape_ok: bool,
}

impl AvoidingTotalizer {
    pub fn apply(&self, n: &Code) -> Code {
        self.map.apply(n)
    }

    /// Totalization clause at parameter `n`: when `psi(n)` converges, checks
    /// `f(n) ~ psi(n)` extensionally on a window of inputs.
    pub fn totalization_verdict<N: Numbering>(
        &self,
        nb: &N,
        n: &BigUint,
        window: u64,
        fuel: Fuel,
    ) -> Option<Verdict>
    where
        N: AsPhi,
    {
        match phi(&self.psi, n, Fuel(self.horizon)) {
            PartialValue::Defined(m) => {
                Some(nb.as_phi().equiv_on_inputs(&self.apply(n), &m, 0..=window, fuel))
            }
            PartialValue::DivergentWithin(_) => None,
        }
    }

    /// Avoidance clause at parameter `n`: fuel evidence that
    /// `delta(f(n))` diverges, plus the structural audit (the race resolves
    /// neither way and the witness code has the expected frozen shape).
    pub fn avoidance_evidence(&self, n: &BigUint, audit_fuel: u64) -> AvoidanceEvidence {
        let fnn = self.apply(n);
        let delta_silent = !phi(&self.delta, &fnn, Fuel(audit_fuel)).is_defined();
        let race_neither = matches!(
            race(&self.delta, &fnn, &self.psi, n, self.horizon),
            RaceOutcome::NeitherWithin { .. }
        );
        let shape_ok = match &*decode(&fnn) {
            Term::App(head, last) => {
                last.as_num() == Some(n)
                    && matches!(&**head, Term::App(_, frozen) if frozen.as_num().is_some())
            }
            _ => false,
        };
        AvoidanceEvidence {
            delta_divergent_within: audit_fuel,
            delta_silent,
            race_neither,
            shape_ok,
        }
    }
}

/// Access to the underlying phi-numbering for extensional windows.
pub trait AsPhi {
    fn as_phi(&self) -> &crate::numbering::PhiNumbering;
}

impl AsPhi for crate::numbering::PhiNumbering {
    fn as_phi(&self) -> &crate::numbering::PhiNumbering {
        self
    }
}

/// Build the totalizer of `psi` avoiding `delta`: a total `f` with
/// `f(n) ~ psi(n)` wherever `psi(n)` converges, and `delta(f(n))` divergent
/// wherever it does not. Rejects `delta` when the sample audit shows it is
/// not a diagonal.
pub fn adn_totalize<N: Numbering>(
    nb: &N,
    delta: &Code,
    psi: &Code,
    opts: &AdnOptions,
) -> Result<AvoidingTotalizer, AdnError> {
    let report = is_diagonal_on(nb, delta, &default_diag_sample(), opts.diag_budget);
    if !report.ok() {
        return Err(AdnError::NotDiagonal(report));
    }
    let eta = race_eta(delta, psi, opts.horizon);
    let h = nb.totalize2(&eta);
    let map = fixed_point_param_unchecked(nb, &h.code());
    Ok(AvoidingTotalizer {
        map,
        eta,
        delta: delta.clone(),
        psi: psi.clone(),
        horizon: opts.horizon,
    })
}

/// Code of the universal function `c -> phi_{fst c}(snd c)`.
pub fn universal_code() -> Code {
    let body = app(
        app(prim(PrimOp::Fst), var(0)),
        app(prim(PrimOp::Snd), var(0)),
    );
    encode(&lam(0, &body)).expect("closed")
}

/// Uniform version: one totalizer through the universal function, so that
/// for each fixed `e` the map `n -> f(<e, n>)` totalizes `phi_e` avoiding
/// `delta`.
pub fn adn_uniform<N: Numbering>(
    nb: &N,
    delta: &Code,
    opts: &AdnOptions,
) -> Result<AvoidingTotalizer, AdnError> {
    adn_totalize(nb, delta, &universal_code(), opts)
}

/// Apply a uniform totalizer at `(e, n)` through the pairing.
pub fn uniform_apply(f: &AvoidingTotalizer, e: &Code, n: &BigUint) -> Code {
    f.apply(&pair_codes(e, n))
}

/// A partial computable diagonal for the standard numbering:
/// `delta(x)` converges exactly when `phi_x(0)` does, to a code whose
/// function agrees with `phi_x` except that it outputs `phi_x(0) + 1` at
/// input 0.
pub fn sample_diagonal() -> Code {
    // divert(x, w1): v -> w1 if v = 0, else phi_x(v)
    let divert = lam_many(
        &[0, 1, 2],
        &ifz_cases(var(2), var(1), app(var(0), var(2))),
    );
    let divert_base = encode(&divert).expect("closed");
    // delta = \*x. (\*w. smn(smn(divert, x), succ w)) (x 0)
    let build = smn_chain(
        num_big(divert_base),
        [var(0), app(prim(PrimOp::Succ), var(1))],
    );
    let body = app(lam(1, &build), app(var(0), num(0)));
    encode(&lam(0, &body)).expect("closed")
}
