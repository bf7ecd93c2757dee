//! Bijective Godel coding of closed terms.
//!
//! Every natural number decodes to exactly one closed term and `encode` is
//! its inverse. The scheme separates a term into a *shape* (the tree with
//! numeral payloads replaced by holes) and the payload vector:
//!
//!   * even codes are hole-free shapes, ranked in a size-stratified
//!     enumeration over the 10 non-numeral leaves;
//!   * an odd code `2 pack(r, w) + 1` is a shape with `m >= 1` holes (ranked
//!     in its own enumeration) together with `w`, which packs exactly `m`
//!     payloads: `w = pack(p1, pack(p2, ... pack(p_{m-1}, p_m)))`.
//!
//! The pairing `pack` stores its first component as a run of base-4 digits
//! 2/3 (bijective binary), terminated by the first digit 0/1, so code length
//! stays roughly linear in term size, and the final payload of a term rides
//! in the undoubled slot. Nesting codes inside numerals (as the s-m-n
//! construction does) therefore grows codes additively, not exponentially.
//!
//! Also hosts the Cantor pairing on naturals used for `fst`/`snd` and for
//! pairing codes at the host level.

use crate::term::{app, num_big, Term, Tm, ALL_PRIMS};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

/// A Godel code. Every natural is a code; `decode` is total.
pub type Code = BigUint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodecError {
    /// `encode` rejects terms containing variables.
    OpenTerm,
}

impl fmt::Display for CodecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodecError::OpenTerm => write!(f, "cannot encode a term with free variables"),
        }
    }
}

impl std::error::Error for CodecError {}

// ---------------------------------------------------------------------------
// pairing
// ---------------------------------------------------------------------------

/// Digits of `a` in bijective base 2, least significant first, each in
/// {1,2}. Computed in linear time: they are the bits of `a + 1` below its
/// leading 1, each plus one.
fn bij_digits(a: &BigUint) -> Vec<u8> {
    let m = a + BigUint::one();
    let k = (m.bits() - 1) as usize;
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        out.push(if m.bit(i as u64) { 2 } else { 1 });
    }
    out
}

fn bij_value(digits: &[u8]) -> BigUint {
    // inverse of bij_digits: set bit k and the digit bits below it
    let k = digits.len();
    let mut bytes = vec![0u8; k / 8 + 1];
    for (i, &d) in digits.iter().enumerate() {
        if d == 2 {
            bytes[i / 8] |= 1 << (i % 8);
        }
    }
    bytes[k / 8] |= 1 << (k % 8);
    BigUint::from_bytes_le(&bytes) - BigUint::one()
}

/// Bijection between pairs of naturals and naturals with near-linear bit
/// growth: `bits(pack(a,b)) = 2 bits(a) + bits(b) + O(1)`.
pub fn pack(a: &BigUint, b: &BigUint) -> BigUint {
    let digits = bij_digits(a); // each in {1,2}; stored as base-4 digits d+1 in {2,3}
    let kk = digits.len();
    // rest = 4*(b div 2) + (b mod 2): its low base-4 digit is 0 or 1, ending the run
    let rest = ((b >> 1u32) << 2u32) | (b & BigUint::one());
    let mut bytes = vec![0u8; kk.div_ceil(4)];
    for (i, &d) in digits.iter().enumerate() {
        bytes[i / 4] |= (d + 1) << (2 * (i % 4));
    }
    (rest << (2 * kk)) | BigUint::from_bytes_le(&bytes)
}

/// Inverse of `pack`; total on all naturals.
pub fn unpack(n: &BigUint) -> (BigUint, BigUint) {
    let bytes = n.to_bytes_le();
    let mut digits = Vec::new();
    'scan: for (j, byte) in bytes.iter().enumerate() {
        for p in 0..4 {
            let d = (byte >> (2 * p)) & 3;
            if d == 2 || d == 3 {
                digits.push(d - 1);
            } else {
                break 'scan;
            }
            let _ = j;
        }
    }
    let kk = digits.len();
    let a = bij_value(&digits);
    let rest = n >> (2 * kk);
    let r = &rest & BigUint::from(3u32); // guaranteed 0 or 1
    let b = ((rest >> 2u32) << 1u32) | r;
    (a, b)
}

/// Cantor pairing `(a+b)(a+b+1)/2 + b`, so `cantor_pair(0,0) = 0`.
pub fn cantor_pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    (&s * (&s + BigUint::one())) / 2u32 + b
}

/// Inverse of `cantor_pair`.
pub fn cantor_unpair(z: &BigUint) -> (BigUint, BigUint) {
    let w = ((z * 8u32 + BigUint::one()).sqrt() - BigUint::one()) / 2u32;
    let t = (&w * (&w + BigUint::one())) / 2u32;
    let b = z - &t;
    let a = &w - &b;
    (a, b)
}

// ---------------------------------------------------------------------------
// shape enumeration
// ---------------------------------------------------------------------------

/// Leaf order in the all-shapes enumeration; the first ten are the
/// numeral-free leaves, index 10 is the numeral hole.
fn leaf_index(t: &Term) -> Option<usize> {
    match t {
        Term::K => Some(0),
        Term::S => Some(1),
        Term::Prim(p) => ALL_PRIMS.iter().position(|q| q == p).map(|i| i + 2),
        Term::Num(_) => Some(11),
        _ => None,
    }
}

fn leaf_from_index(i: usize) -> Term {
    match i {
        0 => Term::K,
        1 => Term::S,
        11 => Term::Num(BigUint::zero()),
        j => Term::Prim(ALL_PRIMS[j - 2]),
    }
}

#[derive(Clone)]
struct Meta {
    size: usize,
    holes: usize,
    rank_all: BigUint,
    /// Rank within the hole-free enumeration when `holes == 0`, within the
    /// has-holes enumeration otherwise.
    rank_split: BigUint,
}

/// Block-prefix classes: shapes of a size class grouped by function size.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Class {
    All,
    Clean,
    Holey,
}

#[derive(Default)]
struct Tables {
    all: Vec<BigUint>,   // shapes with n nodes
    clean: Vec<BigUint>, // shapes with n nodes and no numeral hole
    cum_clean: Vec<BigUint>,
    cum_holey: Vec<BigUint>,
    /// Per size class: cumulative counts of shapes grouped by function
    /// size, so ranking is a lookup and unranking a binary search.
    boundaries: HashMap<(Class, usize), Vec<BigUint>>,
    meta: HashMap<Term, Meta>,
    decoded: HashMap<BigUint, Tm>,
    smn: HashMap<(Code, Code), Code>,
}

thread_local! {
    static TABLES: RefCell<Tables> = RefCell::new(Tables::default());
}

impl Tables {
    fn ensure_counts(&mut self, n: usize) {
        if self.all.is_empty() {
            self.all.push(BigUint::zero()); // no shape has 0 nodes
            self.clean.push(BigUint::zero());
            self.cum_clean.push(BigUint::zero());
            self.cum_holey.push(BigUint::zero());
        }
        while self.all.len() <= n {
            let m = self.all.len();
            let (a, c) = if m == 1 {
                (BigUint::from(12u32), BigUint::from(11u32))
            } else {
                let mut acc_a = BigUint::zero();
                let mut acc_c = BigUint::zero();
                for i in 1..=m.saturating_sub(2) {
                    acc_a += &self.all[i] * &self.all[m - 1 - i];
                    acc_c += &self.clean[i] * &self.clean[m - 1 - i];
                }
                (acc_a, acc_c)
            };
            let holey = &a - &c;
            self.cum_clean.push(self.cum_clean.last().unwrap() + &c);
            self.cum_holey.push(self.cum_holey.last().unwrap() + &holey);
            self.all.push(a);
            self.clean.push(c);
        }
    }

    fn holey(&self, n: usize) -> BigUint {
        &self.all[n] - &self.clean[n]
    }

    /// One block per function size `sf` in `1..=n-2`: the number of
    /// `n`-node shapes of the class whose function part has `sf` nodes.
    fn block_of(&self, class: Class, n: usize, sf: usize) -> BigUint {
        let sa = n - 1 - sf;
        match class {
            Class::All => &self.all[sf] * &self.all[sa],
            Class::Clean => &self.clean[sf] * &self.clean[sa],
            Class::Holey => self.holey(sf) * &self.all[sa] + &self.clean[sf] * self.holey(sa),
        }
    }

    /// Cumulative block sums for a size class; `bounds[j]` counts shapes
    /// with function size at most `j + 1`. Built once per `(class, n)`.
    fn bounds(&mut self, class: Class, n: usize) -> &Vec<BigUint> {
        self.ensure_counts(n);
        if !self.boundaries.contains_key(&(class, n)) {
            let mut acc = BigUint::zero();
            let mut v = Vec::with_capacity(n.saturating_sub(2));
            for sf in 1..=n.saturating_sub(2) {
                acc += self.block_of(class, n, sf);
                v.push(acc.clone());
            }
            self.boundaries.insert((class, n), v);
        }
        &self.boundaries[&(class, n)]
    }

    /// Shapes in size class `n` whose function part is smaller than `sf`.
    fn block_prefix(&mut self, class: Class, n: usize, sf: usize) -> BigUint {
        if sf <= 1 {
            return BigUint::zero();
        }
        self.bounds(class, n)[sf - 2].clone()
    }

    fn meta_for(&mut self, t: &Term) -> Result<Meta, CodecError> {
        if let Some(m) = self.meta.get(t) {
            return Ok(m.clone());
        }
        let m = match t {
            Term::Var(_) => return Err(CodecError::OpenTerm),
            Term::App(f, a) => {
                let mf = self.meta_for(f)?;
                let ma = self.meta_for(a)?;
                let size = 1 + mf.size + ma.size;
                let holes = mf.holes + ma.holes;
                self.ensure_counts(size);
                let rank_all = self.block_prefix(Class::All, size, mf.size)
                    + &mf.rank_all * &self.all[ma.size]
                    + &ma.rank_all;
                // within the has-holes class, holey-function shapes come
                // before clean-function/holey-argument ones
                let rank_split = if holes == 0 {
                    self.block_prefix(Class::Clean, size, mf.size)
                        + &mf.rank_split * &self.clean[ma.size]
                        + &ma.rank_split
                } else {
                    let base = self.block_prefix(Class::Holey, size, mf.size);
                    if mf.holes > 0 {
                        base + &mf.rank_split * &self.all[ma.size] + &ma.rank_all
                    } else {
                        base
                            + self.holey(mf.size) * &self.all[ma.size]
                            + &mf.rank_split * &self.holey(ma.size)
                            + &ma.rank_split
                    }
                };
                Meta {
                    size,
                    holes,
                    rank_all,
                    rank_split,
                }
            }
            Term::Num(_) => Meta {
                size: 1,
                holes: 1,
                rank_all: BigUint::from(leaf_index(t).expect("numeral leaf")),
                rank_split: BigUint::zero(),
            },
            other => {
                let i = leaf_index(other).expect("leaf");
                Meta {
                    size: 1,
                    holes: 0,
                    rank_all: BigUint::from(i),
                    rank_split: BigUint::from(i),
                }
            }
        };
        self.meta.insert(t.clone(), m.clone());
        Ok(m)
    }
}

fn collect_payloads<'a>(t: &'a Term, out: &mut Vec<&'a BigUint>) {
    match t {
        Term::Num(n) => out.push(n),
        Term::App(f, a) => {
            collect_payloads(f, out);
            collect_payloads(a, out);
        }
        _ => {}
    }
}

// ---------------------------------------------------------------------------
// encode / decode
// ---------------------------------------------------------------------------

/// Godel code of a closed term. Rejects terms containing variables.
pub fn encode(t: &Term) -> Result<Code, CodecError> {
    TABLES.with(|tb| {
        let mut tb = tb.borrow_mut();
        let m = tb.meta_for(t)?;
        tb.ensure_counts(m.size);
        if m.holes == 0 {
            let global = &tb.cum_clean[m.size - 1] + &m.rank_split;
            Ok(global << 1u32)
        } else {
            let global = &tb.cum_holey[m.size - 1] + &m.rank_split;
            let mut payloads = Vec::new();
            collect_payloads(t, &mut payloads);
            // fold with the last payload in the undoubled slot
            let mut w = payloads.last().unwrap().to_owned().clone();
            for p in payloads[..payloads.len() - 1].iter().rev() {
                w = pack(p, &w);
            }
            Ok((pack(&global, &w) << 1u32) | BigUint::one())
        }
    })
}

/// Total inverse of `encode`: every natural decodes to a closed term.
pub fn decode(c: &Code) -> Tm {
    if let Some(t) = TABLES.with(|tb| tb.borrow().decoded.get(c).cloned()) {
        return t;
    }
    let odd = c.bit(0);
    let half = c >> 1u32;
    let t = TABLES.with(|tb| {
        let mut tb = tb.borrow_mut();
        if !odd {
            let n = find_size(&mut tb, &half, Class::Clean);
            let rank = &half - &tb.cum_clean[n - 1];
            unrank_shape(&mut tb, &rank, n, Class::Clean)
        } else {
            let (global, w) = unpack(&half);
            let n = find_size(&mut tb, &global, Class::Holey);
            let rank = &global - &tb.cum_holey[n - 1];
            let shape = unrank_shape(&mut tb, &rank, n, Class::Holey);
            let holes = count_holes(&shape);
            let mut values = Vec::with_capacity(holes);
            let mut acc = w;
            for _ in 0..holes - 1 {
                let (v, rest) = unpack(&acc);
                values.push(v);
                acc = rest;
            }
            values.push(acc);
            let mut iter = values.into_iter();
            fill_holes(&shape, &mut iter)
        }
    });
    TABLES.with(|tb| {
        tb.borrow_mut().decoded.insert(c.clone(), t.clone());
    });
    t
}

fn find_size(tb: &mut Tables, global: &BigUint, class: Class) -> usize {
    let mut n = 1usize;
    loop {
        tb.ensure_counts(n);
        let cum = match class {
            Class::Clean => &tb.cum_clean[n],
            Class::Holey => &tb.cum_holey[n],
            Class::All => unreachable!("all-shapes ranks are class-internal"),
        };
        if cum > global {
            return n;
        }
        n += 1;
    }
}

fn unrank_shape(tb: &mut Tables, rank: &BigUint, n: usize, class: Class) -> Tm {
    if n == 1 {
        let t = match class {
            Class::Clean => leaf_from_index(rank.to_usize().expect("leaf rank")),
            Class::Holey => Term::Num(BigUint::zero()),
            Class::All => leaf_from_index(rank.to_usize().expect("leaf rank")),
        };
        return Rc::new(t);
    }
    // binary-search the cumulative block table for the function size
    let bounds = tb.bounds(class, n);
    let idx = bounds.partition_point(|b| b <= rank);
    let sf = idx + 1;
    let mut r = rank.clone();
    if idx > 0 {
        r -= &bounds[idx - 1];
    }
    let sa = n - 1 - sf;
    match class {
        Class::All | Class::Clean => {
            let ca = match class {
                Class::All => tb.all[sa].clone(),
                _ => tb.clean[sa].clone(),
            };
            let rf = &r / &ca;
            let ra = &r % &ca;
            let f = unrank_shape(tb, &rf, sf, class);
            let a = unrank_shape(tb, &ra, sa, class);
            app(f, a)
        }
        Class::Holey => {
            let holey_f_block = tb.holey(sf) * &tb.all[sa];
            if r < holey_f_block {
                let ca = tb.all[sa].clone();
                let rf = &r / &ca;
                let ra = &r % &ca;
                let f = unrank_shape(tb, &rf, sf, Class::Holey);
                let a = unrank_shape(tb, &ra, sa, Class::All);
                app(f, a)
            } else {
                r -= holey_f_block;
                let ca = tb.holey(sa);
                let rf = &r / &ca;
                let ra = &r % &ca;
                let f = unrank_shape(tb, &rf, sf, Class::Clean);
                let a = unrank_shape(tb, &ra, sa, Class::Holey);
                app(f, a)
            }
        }
    }
}

fn count_holes(t: &Term) -> usize {
    let mut n = 0;
    let mut stack = vec![t];
    while let Some(u) = stack.pop() {
        match u {
            Term::Num(_) => n += 1,
            Term::App(f, a) => {
                stack.push(f);
                stack.push(a);
            }
            _ => {}
        }
    }
    n
}

fn fill_holes(t: &Tm, values: &mut impl Iterator<Item = BigUint>) -> Tm {
    match &**t {
        Term::Num(_) => num_big(values.next().expect("payload for each hole")),
        Term::App(f, a) => {
            let nf = fill_holes(f, values);
            let na = fill_holes(a, values);
            app(nf, na)
        }
        _ => t.clone(),
    }
}

/// `encode(App(decode(e), Num a))`: the code of program `e` frozen on first
/// argument `a`. Pure code manipulation; nothing is evaluated. Memoized,
/// since the fixed-point constructions replay the same freezes heavily.
pub fn smn_code(e: &Code, a: &Code) -> Code {
    let key = (e.clone(), a.clone());
    if let Some(c) = TABLES.with(|tb| tb.borrow().smn.get(&key).cloned()) {
        return c;
    }
    let t = app(decode(e), num_big(a.clone()));
    let c = encode(&t).expect("decoded terms are closed");
    TABLES.with(|tb| tb.borrow_mut().smn.insert(key, c.clone()));
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{apps, k, num, prim, s, skk, var, PrimOp};

    fn enc(t: &Tm) -> Code {
        encode(t).unwrap()
    }

    #[test]
    fn pack_roundtrip_small() {
        for a in 0u32..40 {
            for b in 0u32..40 {
                let p = pack(&a.into(), &b.into());
                let (x, y) = unpack(&p);
                assert_eq!((x, y), (a.into(), b.into()), "a={} b={}", a, b);
            }
        }
    }

    #[test]
    fn unpack_total_and_injective_on_initial_segment() {
        let mut seen = std::collections::HashSet::new();
        for n in 0u32..2000 {
            let (a, b) = unpack(&n.into());
            assert_eq!(pack(&a, &b), n.into());
            assert!(seen.insert((a, b)));
        }
    }

    #[test]
    fn cantor_conventions() {
        assert_eq!(cantor_pair(&0u32.into(), &0u32.into()), 0u32.into());
        for z in 0u32..500 {
            let (a, b) = cantor_unpair(&z.into());
            assert_eq!(cantor_pair(&a, &b), z.into());
        }
    }

    #[test]
    fn atoms_have_small_stable_codes() {
        // freezes the enumeration; a change here breaks every stored code
        assert_eq!(enc(&k()), 0u32.into());
        assert_eq!(enc(&num(0)), 1u32.into());
        assert_eq!(enc(&s()), 2u32.into());
        let codes: Vec<Code> = ALL_PRIMS.iter().map(|p| enc(&prim(*p))).collect();
        assert_eq!(codes[0], 4u32.into());
        for w in codes.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn decode_total_and_roundtrips_on_scan() {
        for c in 0u32..10_000 {
            let c: Code = c.into();
            let t = decode(&c);
            assert!(t.is_closed(), "decode({}) must be closed", c);
            assert_eq!(enc(&t), c, "encode(decode({}))", c);
        }
    }

    #[test]
    fn encode_injective_on_samples() {
        let terms = [
            k(),
            s(),
            skk(),
            num(0),
            num(1),
            num(77),
            app(k(), k()),
            app(k(), s()),
            app(s(), k()),
            apps(s(), [k(), k(), num(3)]),
            app(prim(PrimOp::Succ), num(9)),
        ];
        let mut seen = std::collections::HashSet::new();
        for t in &terms {
            assert!(seen.insert(enc(t)), "duplicate code for {}", t);
        }
    }

    #[test]
    fn roundtrip_nested_and_large_payloads() {
        let big = BigUint::from(u64::MAX) * BigUint::from(u64::MAX) + 13u32;
        let t = apps(
            s(),
            [app(k(), num_big(big)), skk(), app(prim(PrimOp::Smn), num(4))],
        );
        assert_eq!(decode(&enc(&t)), t);
    }

    #[test]
    fn codes_grow_roughly_linearly() {
        // left spine of 60 K's: code bits should stay in the low thousands
        let mut t = k();
        for _ in 0..60 {
            t = app(t, k());
        }
        let c = enc(&t);
        assert!(c.bits() < 4000, "spine code has {} bits", c.bits());
        // deep bracket-style nesting on the argument side
        let mut u = k();
        for _ in 0..60 {
            u = app(k(), u);
        }
        let cu = enc(&u);
        assert!(cu.bits() < 4000, "nested code has {} bits", cu.bits());
    }

    #[test]
    fn open_terms_rejected() {
        assert_eq!(encode(&var(0)), Err(CodecError::OpenTerm));
        assert_eq!(encode(&app(k(), var(3))), Err(CodecError::OpenTerm));
    }

    #[test]
    fn smn_matches_direct_encoding() {
        let e = enc(&skk());
        let a: Code = 123u32.into();
        let direct = enc(&app(skk(), num_big(a.clone())));
        assert_eq!(smn_code(&e, &a), direct);
    }
}
