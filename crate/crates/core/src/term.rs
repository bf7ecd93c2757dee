//! The term language: combinators `S` and `K`, arbitrary-precision numerals,
//! arithmetic/code primitives, and left-associative application.
//!
//! Terms are immutable trees with `Rc`-shared subterms, so duplicating an
//! argument (as the `S` rule does) is cheap. `Var` nodes exist only in
//! abstract terms fed to bracket abstraction; evaluation expects closed terms.

use num_bigint::BigUint;
use std::fmt;
use std::rc::Rc;

/// Built-in primitive operations.
///
/// `Succ`, `Pred`, `IfZ`, `Eq`, `Le` are ordinary arithmetic on numerals
/// (`pred 0 = 0`; comparisons return the numeral 0 for true, 1 for false).
/// The remaining four give programs first-class access to the code space:
/// `Fst`/`Snd` invert the Cantor pairing, `Smn` performs the s-m-n code
/// transformation, and `Step` reports the least stage at which a coded
/// program converges within a bounded number of head steps. See `eval` for
/// the exact rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrimOp {
    Succ,
    Pred,
    IfZ,
    Eq,
    Le,
    Fst,
    Snd,
    Smn,
    Step,
}

pub const ALL_PRIMS: [PrimOp; 9] = [
    PrimOp::Succ,
    PrimOp::Pred,
    PrimOp::IfZ,
    PrimOp::Eq,
    PrimOp::Le,
    PrimOp::Fst,
    PrimOp::Snd,
    PrimOp::Smn,
    PrimOp::Step,
];

impl PrimOp {
    pub fn name(self) -> &'static str {
        match self {
            PrimOp::Succ => "succ",
            PrimOp::Pred => "pred",
            PrimOp::IfZ => "ifz",
            PrimOp::Eq => "eq",
            PrimOp::Le => "le",
            PrimOp::Fst => "fst",
            PrimOp::Snd => "snd",
            PrimOp::Smn => "smn",
            PrimOp::Step => "step",
        }
    }

    /// Number of arguments consumed when the primitive fires.
    pub fn arity(self) -> usize {
        match self {
            PrimOp::Succ | PrimOp::Pred | PrimOp::Fst | PrimOp::Snd => 1,
            PrimOp::Eq | PrimOp::Le | PrimOp::Smn => 2,
            PrimOp::IfZ | PrimOp::Step => 3,
        }
    }

    pub fn from_name(s: &str) -> Option<PrimOp> {
        ALL_PRIMS.iter().copied().find(|p| p.name() == s)
    }
}

/// Applicative syntax tree over combinators, numerals and primitives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    K,
    S,
    Num(BigUint),
    Prim(PrimOp),
    /// de Bruijn-style index, used only before bracket abstraction.
    Var(u32),
    App(Rc<Term>, Rc<Term>),
}

impl Term {
    pub fn is_app(&self) -> bool {
        matches!(self, Term::App(_, _))
    }

    pub fn as_num(&self) -> Option<&BigUint> {
        match self {
            Term::Num(n) => Some(n),
            _ => None,
        }
    }

    /// True when the term contains no `Var` node.
    pub fn is_closed(&self) -> bool {
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Term::Var(_) => return false,
                Term::App(f, a) => {
                    stack.push(f);
                    stack.push(a);
                }
                _ => {}
            }
        }
        true
    }

    /// Free variable indices, ascending and deduplicated.
    pub fn free_vars(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Term::Var(i) => {
                    if !out.contains(i) {
                        out.push(*i);
                    }
                }
                Term::App(f, a) => {
                    stack.push(f);
                    stack.push(a);
                }
                _ => {}
            }
        }
        out.sort_unstable();
        out
    }

    pub fn contains_var(&self, i: u32) -> bool {
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Term::Var(j) if *j == i => return true,
                Term::App(f, a) => {
                    stack.push(f);
                    stack.push(a);
                }
                _ => {}
            }
        }
        false
    }

    /// Node count (atoms and applications).
    pub fn size(&self) -> usize {
        let mut n = 0usize;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            n += 1;
            if let Term::App(f, a) = t {
                stack.push(f);
                stack.push(a);
            }
        }
        n
    }
}

pub type Tm = Rc<Term>;

pub fn app(f: Tm, a: Tm) -> Tm {
    Rc::new(Term::App(f, a))
}

/// Left-associated application `f a1 a2 ... an`.
pub fn apps(f: Tm, args: impl IntoIterator<Item = Tm>) -> Tm {
    args.into_iter().fold(f, app)
}

pub fn k() -> Tm {
    Rc::new(Term::K)
}

pub fn s() -> Tm {
    Rc::new(Term::S)
}

pub fn num_big(n: BigUint) -> Tm {
    Rc::new(Term::Num(n))
}

pub fn num(n: u64) -> Tm {
    num_big(BigUint::from(n))
}

pub fn var(i: u32) -> Tm {
    Rc::new(Term::Var(i))
}

pub fn prim(p: PrimOp) -> Tm {
    Rc::new(Term::Prim(p))
}

/// `S K K`, the identity combinator.
pub fn skk() -> Tm {
    app(app(s(), k()), k())
}

/// `S (S K K) (S K K)`; applying it to itself loops forever.
pub fn omega() -> Tm {
    app(app(s(), skk()), skk())
}

/// Substitute `value` for every occurrence of `Var(i)`.
pub fn subst(t: &Tm, i: u32, value: &Tm) -> Tm {
    match &**t {
        Term::Var(j) if *j == i => value.clone(),
        Term::App(f, a) => {
            let nf = subst(f, i, value);
            let na = subst(a, i, value);
            if Rc::ptr_eq(&nf, f) && Rc::ptr_eq(&na, a) {
                t.clone()
            } else {
                app(nf, na)
            }
        }
        _ => t.clone(),
    }
}

impl fmt::Display for Term {
    /// Canonical syntax: juxtaposition associates left, compound arguments
    /// are parenthesized, variables print as `x<i>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::K => write!(f, "K"),
            Term::S => write!(f, "S"),
            Term::Num(n) => write!(f, "{}", n),
            Term::Prim(p) => write!(f, "{}", p.name()),
            Term::Var(i) => write!(f, "x{}", i),
            Term::App(fun, arg) => {
                write!(f, "{}", fun)?;
                write!(f, " ")?;
                if arg.is_app() {
                    write!(f, "({})", arg)
                } else {
                    write!(f, "{}", arg)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_left_assoc() {
        let t = apps(k(), [num(3), num(5)]);
        assert_eq!(t.to_string(), "K 3 5");
        let u = app(k(), app(s(), k()));
        assert_eq!(u.to_string(), "K (S K)");
    }

    #[test]
    fn closedness_and_vars() {
        let t = app(var(2), app(k(), var(0)));
        assert!(!t.is_closed());
        assert_eq!(t.free_vars(), vec![0, 2]);
        assert!(skk().is_closed());
    }

    #[test]
    fn subst_replaces_all() {
        let t = app(var(0), app(var(0), k()));
        let r = subst(&t, 0, &num(7));
        assert_eq!(r.to_string(), "7 (7 K)");
        assert!(r.is_closed());
    }
}
