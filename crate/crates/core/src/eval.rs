//! Fuel-bounded weak head reduction.
//!
//! Reduction is deterministic leftmost-outermost. A head atom fires once the
//! spine supplies enough arguments:
//!
//! ```text
//! K a b        -> a
//! S a b c      -> a c (b c)
//! succ n       -> n+1            pred n -> n-1 (pred 0 = 0)
//! ifz n a b    -> a if n = 0, else b (n must be a numeral)
//! eq a b       -> 0 if a = b, else 1
//! le a b       -> 0 if a <= b, else 1
//! fst p, snd p -> Cantor projections of the numeral p
//! smn e a      -> code of (decode e) applied to the numeral a
//! step e x s   -> q+1 if running code e on input x first reaches a numeral
//!                 at head step q <= s, else 0
//! n a          -> (decode n) a    (applying a numeral runs its code)
//! ```
//!
//! Application is strict: every argument *consumed* by a firing rule is first
//! reduced to weak normal form, left to right — including the argument that
//! `K` discards. Partial applications (too few arguments) are values and do
//! not force their arguments; this is what keeps bracket abstractions defined
//! regardless of their bodies. Each rule firing costs one unit of fuel;
//! forcing charges only for the firings it performs. `step` runs its
//! subcomputation on a private fuel budget that does not touch the caller's.

use crate::codec::{cantor_unpair, decode, smn_code};
use crate::term::{app, num_big, Term, Tm};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Step budget for one evaluation. Exhaustion is a result, never a panic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fuel(pub u64);

impl From<u64> for Fuel {
    fn from(v: u64) -> Self {
        Fuel(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalResult {
    /// Weak normal form: no head redex. Arguments of a partial application
    /// are left unevaluated.
    Value(Tm),
    /// Budget exhausted; the only verdict that can improve with more fuel.
    OutOfFuel,
    /// No rule applies and none ever will (primitive on a non-numeral,
    /// variable in head position, disabled primitive in pure-SK mode).
    Stuck(Tm),
}

impl EvalResult {
    pub fn is_value(&self) -> bool {
        matches!(self, EvalResult::Value(_))
    }

    pub fn value(&self) -> Option<&Tm> {
        match self {
            EvalResult::Value(t) => Some(t),
            _ => None,
        }
    }

    /// The numeral payload, when the result is a numeral value.
    pub fn numeral(&self) -> Option<&BigUint> {
        self.value().and_then(|t| t.as_num())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalOptions {
    /// Restrict to the pure S/K fragment: primitives and numerals become
    /// inert constants and firing them sticks. Conservative over S/K terms.
    pub pure_sk: bool,
}

/// Nesting limit for `step` inside `step`: probes nested deeper report
/// non-convergence. A fixed resource bound keeping self-referential probe
/// cascades cheap; the shipped constructions are insensitive to its exact
/// value (see the module tests).
pub const STEP_DEPTH_LIMIT: usize = 16;

pub fn evaluate(t: &Tm, fuel: Fuel) -> EvalResult {
    evaluate_opts(t, fuel, EvalOptions::default())
}

pub fn evaluate_opts(t: &Tm, fuel: Fuel, opts: EvalOptions) -> EvalResult {
    eval_with_stats_opts(t, fuel, opts).0
}

/// Evaluate and report the number of head steps actually fired.
pub fn eval_with_stats(t: &Tm, fuel: Fuel) -> (EvalResult, u64) {
    eval_with_stats_opts(t, fuel, EvalOptions::default())
}

pub fn eval_with_stats_opts(t: &Tm, fuel: Fuel, opts: EvalOptions) -> (EvalResult, u64) {
    let mut m = Machine {
        fuel_left: fuel.0,
        opts,
        depth: 0,
    };
    let r = m.run(t.clone());
    (r, fuel.0 - m.fuel_left)
}

/// Recursion bound for [`normalize`]; unfolding chains deeper than this
/// count as having no normal form within the budget.
pub const NF_DEPTH_LIMIT: usize = 2048;

/// Strict (element-level) normal form: weak-head normalize, then normalize
/// every argument hanging off the head spine, all within one shared fuel
/// budget. `None` when any part runs out of fuel, sticks, or exceeds the
/// depth bound. Two terms denote the same element of the strict applicative
/// structure exactly when their strict normal forms exist and coincide.
pub fn normalize(t: &Tm, fuel: Fuel) -> Option<Tm> {
    normalize_opts(t, fuel, EvalOptions::default())
}

pub fn normalize_opts(t: &Tm, fuel: Fuel, opts: EvalOptions) -> Option<Tm> {
    let mut budget = fuel.0;
    nf_rec(t, &mut budget, opts, 0)
}

fn nf_rec(t: &Tm, budget: &mut u64, opts: EvalOptions, depth: usize) -> Option<Tm> {
    if depth >= NF_DEPTH_LIMIT {
        return None;
    }
    let (r, used) = eval_with_stats_opts(t, Fuel(*budget), opts);
    *budget -= used;
    let v = match r {
        EvalResult::Value(v) => v,
        _ => return None,
    };
    let mut head = v.clone();
    let mut spine = Vec::new();
    while let Term::App(f, a) = &*head {
        spine.push(a.clone());
        head = f.clone();
    }
    if spine.is_empty() {
        return Some(v);
    }
    let mut out = head;
    for a in spine.iter().rev() {
        let na = nf_rec(a, budget, opts, depth + 1)?;
        out = app(out, na);
    }
    Some(out)
}

struct Machine {
    fuel_left: u64,
    opts: EvalOptions,
    depth: usize,
}

/// Pending rule application: `head` fires once all consumed arguments are
/// forced; `rest` is the spine beyond the head's arity.
struct FireFrame {
    head: Tm,
    pending: Vec<Tm>, // reversed: pop() yields the next argument to force
    forced: Vec<Tm>,
    rest: Vec<Tm>, // innermost argument at the end
}

enum RuleOut {
    Reduced(Tm),
    NoRule,
}

fn arity_of(t: &Term) -> Option<usize> {
    match t {
        Term::K => Some(2),
        Term::S => Some(3),
        Term::Num(_) => Some(1),
        Term::Prim(p) => Some(p.arity()),
        Term::Var(_) => None,
        Term::App(_, _) => unreachable!("spine is unwound before arity check"),
    }
}

/// Reapply spine arguments (innermost at the end) to a head.
fn rebuild(head: Tm, spine: &[Tm]) -> Tm {
    spine.iter().rev().fold(head, |t, a| app(t, a.clone()))
}

impl Machine {
    fn run(&mut self, start: Tm) -> EvalResult {
        let mut frames: Vec<FireFrame> = Vec::new();
        let mut current = start;
        let mut spine: Vec<Tm> = Vec::new();

        'outer: loop {
            // unwind the application spine to expose the head atom
            loop {
                let next = match &*current {
                    Term::App(f, a) => {
                        spine.push(a.clone());
                        f.clone()
                    }
                    _ => break,
                };
                current = next;
            }

            let value = match arity_of(&current) {
                None => return EvalResult::Stuck(rebuild(current, &spine)),
                Some(arity) if spine.len() >= arity => {
                    if self.opts.pure_sk && !matches!(&*current, Term::K | Term::S) {
                        return EvalResult::Stuck(rebuild(current, &spine));
                    }
                    // consume `arity` arguments and force them left to right
                    let mut pending = Vec::with_capacity(arity);
                    for _ in 0..arity {
                        pending.push(spine.pop().expect("checked length"));
                    }
                    pending.reverse(); // pop() now yields the first argument
                    let rest = std::mem::take(&mut spine);
                    let mut frame = FireFrame {
                        head: current,
                        pending,
                        forced: Vec::with_capacity(arity),
                        rest,
                    };
                    let first = frame.pending.pop().expect("arity >= 1");
                    frames.push(frame);
                    current = first;
                    continue 'outer;
                }
                Some(_) => rebuild(current, &std::mem::take(&mut spine)),
            };

            // deliver the value to the innermost pending frame
            match frames.last_mut() {
                None => return EvalResult::Value(value),
                Some(fr) => {
                    fr.forced.push(value);
                    if let Some(next) = fr.pending.pop() {
                        current = next;
                        continue 'outer;
                    }
                    let fr = frames.pop().expect("nonempty");
                    if self.fuel_left == 0 {
                        return EvalResult::OutOfFuel;
                    }
                    self.fuel_left -= 1;
                    match self.apply_rule(&fr.head, &fr.forced) {
                        RuleOut::Reduced(t) => {
                            current = t;
                            spine = fr.rest;
                        }
                        RuleOut::NoRule => {
                            let mut stuck = fr.head;
                            for a in &fr.forced {
                                stuck = app(stuck, a.clone());
                            }
                            return EvalResult::Stuck(rebuild(stuck, &fr.rest));
                        }
                    }
                }
            }
        }
    }

    fn apply_rule(&mut self, head: &Tm, args: &[Tm]) -> RuleOut {
        use crate::term::PrimOp::*;
        match &**head {
            Term::K => RuleOut::Reduced(args[0].clone()),
            Term::S => RuleOut::Reduced(app(
                app(args[0].clone(), args[2].clone()),
                app(args[1].clone(), args[2].clone()),
            )),
            Term::Num(n) => RuleOut::Reduced(app(decode(n), args[0].clone())),
            Term::Prim(p) => {
                let nums: Vec<Option<&BigUint>> = args.iter().map(|a| a.as_num()).collect();
                match p {
                    Succ => match nums[0] {
                        Some(n) => RuleOut::Reduced(num_big(n + BigUint::one())),
                        None => RuleOut::NoRule,
                    },
                    Pred => match nums[0] {
                        Some(n) if n.is_zero() => RuleOut::Reduced(num_big(BigUint::zero())),
                        Some(n) => RuleOut::Reduced(num_big(n - BigUint::one())),
                        None => RuleOut::NoRule,
                    },
                    IfZ => match nums[0] {
                        Some(n) if n.is_zero() => RuleOut::Reduced(args[1].clone()),
                        Some(_) => RuleOut::Reduced(args[2].clone()),
                        None => RuleOut::NoRule,
                    },
                    Eq => match (nums[0], nums[1]) {
                        (Some(a), Some(b)) => {
                            let r = if a == b { 0u32 } else { 1 };
                            RuleOut::Reduced(num_big(BigUint::from(r)))
                        }
                        _ => RuleOut::NoRule,
                    },
                    Le => match (nums[0], nums[1]) {
                        (Some(a), Some(b)) => {
                            let r = if a <= b { 0u32 } else { 1 };
                            RuleOut::Reduced(num_big(BigUint::from(r)))
                        }
                        _ => RuleOut::NoRule,
                    },
                    Fst | Snd => match nums[0] {
                        Some(n) => {
                            let (a, b) = cantor_unpair(n);
                            RuleOut::Reduced(num_big(if *p == Fst { a } else { b }))
                        }
                        None => RuleOut::NoRule,
                    },
                    Smn => match (nums[0], nums[1]) {
                        (Some(e), Some(a)) => RuleOut::Reduced(num_big(smn_code(e, a))),
                        _ => RuleOut::NoRule,
                    },
                    Step => match (nums[0], nums[1], nums[2]) {
                        (Some(e), Some(x), Some(s)) => {
                            RuleOut::Reduced(num_big(self.bounded_probe(e, x, s)))
                        }
                        _ => RuleOut::NoRule,
                    },
                }
            }
            Term::Var(_) | Term::App(_, _) => unreachable!("heads with rules only"),
        }
    }

    /// `step` semantics: run code `e` on input `x` for at most `s` head
    /// steps; `q+1` if that first reaches a numeral at step `q`, `0`
    /// otherwise. The subcomputation runs on its own budget; the caller is
    /// charged one step for the probe itself.
    fn bounded_probe(&mut self, e: &BigUint, x: &BigUint, s: &BigUint) -> BigUint {
        if self.depth >= STEP_DEPTH_LIMIT {
            return BigUint::zero();
        }
        let budget = s.to_u64().unwrap_or(u64::MAX);
        let mut inner = Machine {
            fuel_left: budget,
            opts: self.opts,
            depth: self.depth + 1,
        };
        let t = app(decode(e), num_big(x.clone()));
        match inner.run(t) {
            EvalResult::Value(v) if v.as_num().is_some() => {
                BigUint::from(budget - inner.fuel_left) + BigUint::one()
            }
            _ => BigUint::zero(),
        }
    }
}
