//! Constructive recursion theorems over a precomplete numbering: the
//! parameterized fixed-point map, its plain and ABS forms, the reductions
//! between the two, and quine generation.
//!
//! The parameterized construction follows the classical proof verbatim:
//! totalize the diagonal `psi(x, n) = phi_x(x, n)` into a total `d`, build a
//! code `e` with `phi_e(x, n) = h(d(x, n), n)`, and return `n -> d(e, n)`.
//! Everything is pure code manipulation, so the same inputs always produce
//! the same witnesses (the constructions are uniform, with no search).

use crate::codec::{encode, Code};
use crate::corpus::{const_builder_base, smn_chain};
use crate::eval::Fuel;
use crate::k1::{phi, phi2};
use crate::numbering::{Numbering, TotalCodeMap, Verdict};
use crate::pca::lam_many;
use crate::term::{app, apps, num_big, var, Tm};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixpointError {
    /// The supplied transform failed the totality spot-check. The check
    /// samples small inputs only, so passing it is necessary, not
    /// sufficient.
    TransformPartial { detail: String },
}

impl fmt::Display for FixpointError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixpointError::TransformPartial { detail } => {
                write!(f, "transform fails totality spot-check: {}", detail)
            }
        }
    }
}

impl std::error::Error for FixpointError {}

/// Spot-check range and fuel for misuse detection.
const SPOT_RANGE: u64 = 20;
const SPOT_FUEL: Fuel = Fuel(1_000);

fn spot_check_binary(h: &Code) -> Result<(), FixpointError> {
    for x in 0..=SPOT_RANGE {
        for n in [0u64, 1, SPOT_RANGE] {
            if !phi2(h, &x.into(), &n.into(), SPOT_FUEL).is_defined() {
                return Err(FixpointError::TransformPartial {
                    detail: format!("binary map undefined at ({}, {})", x, n),
                });
            }
        }
    }
    Ok(())
}

fn spot_check_unary(f: &Code) -> Result<(), FixpointError> {
    for x in 0..=SPOT_RANGE {
        if !phi(f, &x.into(), SPOT_FUEL).is_defined() {
            return Err(FixpointError::TransformPartial {
                detail: format!("unary map undefined at {}", x),
            });
        }
    }
    Ok(())
}

/// The diagonal code: `phi_diag(x, n) = phi_x(x, n)` (curried).
fn diagonal_code() -> Code {
    encode(&lam_many(&[0, 1], &app(app(var(0), var(0)), var(1)))).expect("closed")
}

/// Parameterized fixed points: for a total binary `h` (curried code),
/// returns a total `f` with `f(n) ~ h(f(n), n)` for every `n`.
pub fn fixed_point_param<N: Numbering>(
    nb: &N,
    h: &Code,
) -> Result<TotalCodeMap, FixpointError> {
    spot_check_binary(h)?;
    Ok(fixed_point_param_unchecked(nb, h))
}

pub(crate) fn fixed_point_param_unchecked<N: Numbering>(nb: &N, h: &Code) -> TotalCodeMap {
    let d = nb.totalize2(&diagonal_code());
    // e with phi_e(x, n) = h(d(x, n), n); d(x, n) is computed in-language
    // by the same smn chain the host uses
    let d_of_x_n: Tm = smn_chain(num_big(d.base().clone()), [var(0), var(1)]);
    let body = apps(crate::codec::decode(h), [d_of_x_n, var(1)]);
    let e = encode(&lam_many(&[0, 1], &body)).expect("closed");
    d.freeze_first(&e)
}

/// A fixed point of a total unary transform, with its bounded verdict.
#[derive(Debug, Clone)]
pub struct FixpointWitness {
    pub point: Code,
    pub transform: Code,
    pub check_budget: u64,
    pub verdict: Verdict,
}

/// Plain recursion theorem: a code `n*` with `f(n*) ~ n*`, found by
/// specializing the parameterized construction to `h(x, n) = f(x)` at
/// parameter 0. Uniform: the witness is a function of `f` alone.
pub fn fixed_point<N: Numbering>(
    nb: &N,
    f: &Code,
    check_budget: u64,
) -> Result<FixpointWitness, FixpointError> {
    spot_check_unary(f)?;
    let h = lift_unary(f);
    let map = fixed_point_param_unchecked(nb, &h);
    let point = map.apply(&0u32.into());
    let f_point = phi(f, &point, Fuel(100_000));
    let verdict = match f_point.defined() {
        Some(fp) => nb.equiv_bounded(fp, &point, check_budget),
        None => Verdict::Unknown, // spot-check passed but f stalled here
    };
    Ok(FixpointWitness {
        point,
        transform: f.clone(),
        check_budget,
        verdict,
    })
}

/// `h(x, n) = f(x)` as a curried binary code.
pub fn lift_unary(f: &Code) -> Code {
    encode(&lam_many(&[0, 1], &app(crate::codec::decode(f), var(0)))).expect("closed")
}

/// ABS-form fixed points: a total `f` such that whenever `phi_n(f(n))`
/// converges it is equivalent to `f(n)`. Built by totalizing the universal
/// function `psi(x, n) = phi_n(x)` and running the parameterized
/// construction on it.
pub fn abs_fixed_point_map<N: Numbering>(nb: &N) -> TotalCodeMap {
    let universal = encode(&lam_many(&[0, 1], &app(var(1), var(0)))).expect("closed");
    let h = nb.totalize2(&universal);
    fixed_point_param_unchecked(nb, &h.code())
}

/// The reduction from the ABS form back to the parameterized form: given
/// any map `f_abs` satisfying the ABS contract and a total binary `h`,
/// `n -> f_abs(g(n))` produces fixed points of `h`, where
/// `phi_{g(n)}(x) = h(x, n)`.
pub fn param_from_abs<N: Numbering>(
    nb: &N,
    f_abs: &TotalCodeMap,
    h: &Code,
) -> Result<TotalCodeMap, FixpointError> {
    spot_check_binary(h)?;
    let _ = nb;
    let flip = encode(&lam_many(
        &[0, 1],
        &apps(crate::codec::decode(h), [var(1), var(0)]),
    ))
    .expect("closed");
    let g = TotalCodeMap::from_base(flip);
    Ok(TotalCodeMap::compose(f_abs.clone(), g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuineStyle {
    /// `phi_{n*}(x) = n*` for every input: the program outputs its own code.
    OutputSelf,
    /// `phi_{n*}(x) ~ phi_x(n*)`: the program hands its own code to its
    /// input.
    ApplySelf,
}

/// Self-referential programs as fixed points of code transforms.
pub fn quine<N: Numbering>(nb: &N, style: QuineStyle) -> Code {
    let base = match style {
        QuineStyle::OutputSelf => const_builder_base(),
        QuineStyle::ApplySelf => {
            encode(&lam_many(&[0, 1], &app(var(1), var(0)))).expect("closed")
        }
    };
    let f = encode(&crate::pca::lam(
        0,
        &smn_chain(num_big(base), [var(0)]),
    ))
    .expect("closed");
    fixed_point(nb, &f, 100)
        .expect("builder transforms are total")
        .point
}

// ---------------------------------------------------------------------------
// designed transform corpus
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct NamedTransform {
    pub name: String,
    /// Code of a total unary map on codes.
    pub code: Code,
}

fn unary_transform(name: &str, body: Tm) -> NamedTransform {
    NamedTransform {
        name: name.to_string(),
        code: encode(&crate::pca::lam(0, &body)).expect("closed"),
    }
}

/// Total code transforms with designed behavior: identity, padding,
/// constant builders, composition builders. At least twenty instances.
pub fn transform_corpus() -> Vec<NamedTransform> {
    let mut out = Vec::new();
    out.push(unary_transform("identity", var(0)));
    let pb = crate::k1::pad_base_code();
    for j in 1u64..=9 {
        out.push(unary_transform(
            &format!("pad{}", j),
            smn_chain(num_big(pb.clone()), [var(0), crate::term::num(j)]),
        ));
    }
    out.push(unary_transform(
        "pad1-pad2",
        smn_chain(
            num_big(pb.clone()),
            [
                smn_chain(num_big(pb.clone()), [var(0), crate::term::num(1)]),
                crate::term::num(2),
            ],
        ),
    ));
    out.push(unary_transform(
        "const-builder",
        smn_chain(num_big(const_builder_base()), [var(0)]),
    ));
    out.push(unary_transform(
        "apply-self-builder",
        smn_chain(
            num_big(encode(&lam_many(&[0, 1], &app(var(1), var(0)))).unwrap()),
            [var(0)],
        ),
    ));
    out.push(unary_transform(
        "compose-succ",
        smn_chain(num_big(crate::corpus::compose_succ_base()), [var(0)]),
    ));
    for c in [0u64, 7, 13, 99, 256] {
        out.push(unary_transform(
            &format!("const{}", c),
            crate::term::num(c),
        ));
    }
    out.push(NamedTransform {
        name: "const-divergent".into(),
        code: encode(&crate::pca::lam(
            0,
            &num_big(crate::corpus::divergent_code()),
        ))
        .unwrap(),
    });
    out.push(NamedTransform {
        name: "const-identity-code".into(),
        code: encode(&crate::pca::lam(
            0,
            &num_big(crate::corpus::identity_code()),
        ))
        .unwrap(),
    });
    out
}

/// Binary parameterized transforms for the parameterized law.
pub fn binary_transform_corpus() -> Vec<NamedTransform> {
    let mut out = Vec::new();
    // h(x, n) = x
    out.push(NamedTransform {
        name: "first-projection".into(),
        code: encode(&lam_many(&[0, 1], &var(0))).unwrap(),
    });
    // h(x, n) = pad(x, 1)
    let pb = crate::k1::pad_base_code();
    out.push(NamedTransform {
        name: "pad-first".into(),
        code: encode(&lam_many(
            &[0, 1],
            &smn_chain(num_big(pb), [var(0), crate::term::num(1)]),
        ))
        .unwrap(),
    });
    // h(x, n) = code of the constant-n function
    out.push(NamedTransform {
        name: "const-of-parameter".into(),
        code: encode(&lam_many(
            &[0, 1],
            &smn_chain(num_big(const_builder_base()), [var(1)]),
        ))
        .unwrap(),
    });
    // every unary transform, lifted
    for t in transform_corpus() {
        out.push(NamedTransform {
            name: format!("lift/{}", t.name),
            code: lift_unary(&t.code),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{divergent_code, identity_code};
    use crate::k1::pad;
    use crate::numbering::PhiNumbering;

    fn nb() -> PhiNumbering {
        PhiNumbering
    }

    fn equiv_window(a: &Code, b: &Code) -> Verdict {
        nb().equiv_on_inputs(a, b, 0..=20, Fuel(1_000))
    }

    #[test]
    fn identity_transform_fixed_point() {
        let id_f = transform_corpus()[0].code.clone();
        let w = fixed_point(&nb(), &id_f, 100).unwrap();
        assert_eq!(w.verdict, Verdict::Yes);
        // the identity transform returns the witness itself
        assert_eq!(phi(&id_f, &w.point, Fuel(10_000)).defined(), Some(&w.point));
    }

    #[test]
    fn padding_transform_fixed_point() {
        let pad7 = transform_corpus()
            .into_iter()
            .find(|t| t.name == "pad7")
            .unwrap();
        let w = fixed_point(&nb(), &pad7.code, 100).unwrap();
        assert_eq!(w.verdict, Verdict::Yes);
        // extensional check against the padded witness
        let padded = pad(&w.point, &7u32.into());
        assert_eq!(equiv_window(&w.point, &padded), Verdict::Yes);
    }

    #[test]
    fn compose_succ_transform_fixed_point() {
        let cs = transform_corpus()
            .into_iter()
            .find(|t| t.name == "compose-succ")
            .unwrap();
        let w = fixed_point(&nb(), &cs.code, 100).unwrap();
        assert_ne!(w.verdict, Verdict::No);
        // the witness's function equals its own composition with successor;
        // on this construction that makes it empty on the tested window
        let shifted = phi(&cs.code, &w.point, Fuel(10_000)).defined().unwrap().clone();
        assert_eq!(equiv_window(&w.point, &shifted), Verdict::Yes);
    }

    #[test]
    fn fixed_points_exist_for_whole_corpus() {
        for t in transform_corpus() {
            let w = fixed_point(&nb(), &t.code, 50).unwrap();
            let image = phi(&t.code, &w.point, Fuel(100_000))
                .defined()
                .cloned()
                .unwrap_or_else(|| panic!("{} not total on witness", t.name));
            assert_eq!(
                equiv_window(&w.point, &image),
                Verdict::Yes,
                "fixed-point law failed for {}",
                t.name
            );
        }
    }

    #[test]
    fn parameterized_law_across_parameters() {
        for h in binary_transform_corpus().into_iter().take(6) {
            let f = fixed_point_param(&nb(), &h.code).unwrap();
            for n in (0u64..=30).step_by(6) {
                let fp = f.apply(&n.into());
                let image = phi2(&h.code, &fp, &n.into(), Fuel(100_000))
                    .defined()
                    .cloned()
                    .expect("designed h is total");
                assert_eq!(
                    equiv_window(&fp, &image),
                    Verdict::Yes,
                    "parameterized law failed for {} at n={}",
                    h.name,
                    n
                );
            }
        }
    }

    #[test]
    fn fixed_point_map_is_total_and_runs_in_language() {
        let h = &binary_transform_corpus()[1]; // pad-first
        let f = fixed_point_param(&nb(), &h.code).unwrap();
        let fc = f.code();
        for n in [0u64, 3, 11] {
            assert_eq!(
                phi(&fc, &n.into(), Fuel(100_000)).defined(),
                Some(&f.apply(&n.into()))
            );
        }
    }

    #[test]
    fn abs_form_contract() {
        let f = abs_fixed_point_map(&nb());
        // n = code of the identity: phi_n(f(n)) = f(n), trivially equivalent
        let id = identity_code();
        let fid = f.apply(&id);
        let img = phi(&id, &fid, Fuel(100_000)).defined().cloned().unwrap();
        assert_eq!(equiv_window(&img, &fid), Verdict::Yes);
        // n = code of an everywhere-divergent map: contract is vacuous
        let div = divergent_code();
        let fdiv = f.apply(&div);
        assert!(!phi(&div, &fdiv, Fuel(10_000)).is_defined());
        // n = code of pad(., 2): equivalence holds (both sides empty here)
        let pad2 = transform_corpus()
            .into_iter()
            .find(|t| t.name == "pad2")
            .unwrap();
        let fp = f.apply(&pad2.code);
        let img = phi(&pad2.code, &fp, Fuel(100_000)).defined().cloned().unwrap();
        assert_eq!(equiv_window(&img, &fp), Verdict::Yes);
    }

    #[test]
    fn reductions_round_trip_on_contract() {
        // route one: direct parameterized construction
        let h = &binary_transform_corpus()[1]; // pad-first
        let direct = fixed_point_param(&nb(), &h.code).unwrap();
        // route two: through the ABS map
        let via_abs = param_from_abs(&nb(), &abs_fixed_point_map(&nb()), &h.code).unwrap();
        for n in [0u64, 5, 20] {
            for f in [&direct, &via_abs] {
                let fp = f.apply(&n.into());
                let image = phi2(&h.code, &fp, &n.into(), Fuel(100_000))
                    .defined()
                    .cloned()
                    .unwrap();
                assert_eq!(equiv_window(&fp, &image), Verdict::Yes);
            }
            // the two routes need not produce the same codes
        }
    }

    #[test]
    fn identity_h_round_trip() {
        let h = &binary_transform_corpus()[0]; // h(x, n) = x
        let via_abs = param_from_abs(&nb(), &abs_fixed_point_map(&nb()), &h.code).unwrap();
        for n in [0u64, 2] {
            let fp = via_abs.apply(&n.into());
            let image = phi2(&h.code, &fp, &n.into(), Fuel(100_000))
                .defined()
                .cloned()
                .unwrap();
            // h is the first projection, so the image is the point itself
            assert_eq!(image, fp);
        }
    }

    #[test]
    fn quine_outputs_its_own_code() {
        let n_star = quine(&nb(), QuineStyle::OutputSelf);
        for x in [0u64, 1, 5, 17, 20] {
            assert_eq!(
                phi(&n_star, &x.into(), Fuel(10_000)).defined(),
                Some(&n_star),
                "quine failed at input {}",
                x
            );
        }
    }

    #[test]
    fn quine_is_deterministic() {
        assert_eq!(
            quine(&nb(), QuineStyle::OutputSelf),
            quine(&nb(), QuineStyle::OutputSelf)
        );
        assert_eq!(
            quine(&nb(), QuineStyle::ApplySelf),
            quine(&nb(), QuineStyle::ApplySelf)
        );
    }

    #[test]
    fn apply_self_quine_hands_code_to_input() {
        let n_star = quine(&nb(), QuineStyle::ApplySelf);
        // feeding the constant-7 program: phi_{n*}(c7) = phi_{c7}(n*) = 7
        let c7 = crate::corpus::const_code(7);
        assert_eq!(
            phi(&n_star, &c7, Fuel(100_000)).defined(),
            Some(&7u32.into())
        );
        // feeding the identity returns the quine's own code
        let id = identity_code();
        assert_eq!(phi(&n_star, &id, Fuel(100_000)).defined(), Some(&n_star));
    }

    #[test]
    fn witnesses_are_uniform_in_the_transform_code() {
        let pad3 = transform_corpus()
            .into_iter()
            .find(|t| t.name == "pad3")
            .unwrap();
        let a = fixed_point(&nb(), &pad3.code, 40).unwrap();
        let b = fixed_point(&nb(), &pad3.code, 40).unwrap();
        assert_eq!(a.point, b.point);
    }

    #[test]
    fn partial_transform_is_rejected() {
        let err = fixed_point(&nb(), &divergent_code(), 40);
        assert!(matches!(
            err,
            Err(FixpointError::TransformPartial { .. })
        ));
    }
}
