//! Finite-precision continuous functionals on Baire space: monotone prefix
//! maps as depth-bounded approximations, the partial functional with no
//! total continuous extension, and diagonalization against total
//! functionals-of-functionals.
//!
//! Sequence application here is represented directly by prefix tables; no
//! coding of functionals as sequences is attempted.

use std::collections::BTreeMap;
use std::fmt;

/// A finite monotone map from finite sequences to finite sequences: the
/// committed part of a continuous functional up to some depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixMap {
    entries: BTreeMap<Vec<u64>, Vec<u64>>,
    depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefixMapError {
    /// Comparable inputs committed to incomparable outputs.
    Inconsistent {
        shorter: Vec<u64>,
        longer: Vec<u64>,
    },
    EntryTooDeep {
        input: Vec<u64>,
        depth: usize,
    },
}

impl fmt::Display for PrefixMapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrefixMapError::Inconsistent { shorter, longer } => write!(
                f,
                "outputs at {:?} and {:?} are not prefix-compatible",
                shorter, longer
            ),
            PrefixMapError::EntryTooDeep { input, depth } => {
                write!(f, "entry {:?} exceeds depth {}", input, depth)
            }
        }
    }
}

impl std::error::Error for PrefixMapError {}

fn is_prefix(a: &[u64], b: &[u64]) -> bool {
    a.len() <= b.len() && a.iter().zip(b).all(|(x, y)| x == y)
}

impl PrefixMap {
    /// Validates monotonicity at construction: whenever one input extends
    /// another, the longer input's output must extend the shorter one's.
    pub fn new(
        entries: BTreeMap<Vec<u64>, Vec<u64>>,
        depth: usize,
    ) -> Result<Self, PrefixMapError> {
        for input in entries.keys() {
            if input.len() > depth {
                return Err(PrefixMapError::EntryTooDeep {
                    input: input.clone(),
                    depth,
                });
            }
        }
        let keys: Vec<&Vec<u64>> = entries.keys().collect();
        for (i, a) in keys.iter().enumerate() {
            for b in keys.iter().skip(i + 1) {
                let (shorter, longer) = if is_prefix(a, b) {
                    (a, b)
                } else if is_prefix(b, a) {
                    (b, a)
                } else {
                    continue;
                };
                if !is_prefix(&entries[*shorter], &entries[*longer]) {
                    return Err(PrefixMapError::Inconsistent {
                        shorter: (*shorter).clone(),
                        longer: (*longer).clone(),
                    });
                }
            }
        }
        Ok(PrefixMap { entries, depth })
    }

    pub fn empty(depth: usize) -> Self {
        PrefixMap {
            entries: BTreeMap::new(),
            depth,
        }
    }

    /// The identity functional truncated to the given depth over the
    /// alphabet {0, 1}.
    pub fn identity(depth: usize) -> Self {
        let mut entries = BTreeMap::new();
        let mut frontier: Vec<Vec<u64>> = vec![vec![]];
        for _ in 0..depth {
            let mut next = Vec::new();
            for p in &frontier {
                for sym in 0..2u64 {
                    let mut q = p.clone();
                    q.push(sym);
                    entries.insert(q.clone(), q.clone());
                    next.push(q);
                }
            }
            frontier = next;
        }
        PrefixMap { entries, depth }
    }

    /// The total functional committing to a constant output on every input.
    pub fn constant(first: u64, depth: usize) -> Self {
        let mut out = vec![first];
        out.extend(std::iter::repeat(0).take(depth.saturating_sub(1)));
        let mut entries = BTreeMap::new();
        entries.insert(vec![], out);
        PrefixMap { entries, depth }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn entries(&self) -> &BTreeMap<Vec<u64>, Vec<u64>> {
        &self.entries
    }
}

/// A point of Baire space with a finitely described tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BairePoint {
    pub prefix: Vec<u64>,
    pub tail: Tail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    Zeros,
    Cyclic(Vec<u64>),
}

impl BairePoint {
    pub fn zeros() -> Self {
        BairePoint {
            prefix: vec![],
            tail: Tail::Zeros,
        }
    }

    /// `prefix` followed by zeros.
    pub fn then_zeros(prefix: Vec<u64>) -> Self {
        BairePoint {
            prefix,
            tail: Tail::Zeros,
        }
    }

    /// The point `0^n 1 0^...`.
    pub fn zeros_then_one(n: usize) -> Self {
        let mut prefix = vec![0; n];
        prefix.push(1);
        BairePoint::then_zeros(prefix)
    }

    pub fn at(&self, k: usize) -> u64 {
        if k < self.prefix.len() {
            self.prefix[k]
        } else {
            match &self.tail {
                Tail::Zeros => 0,
                Tail::Cyclic(p) => p[(k - self.prefix.len()) % p.len()],
            }
        }
    }

    pub fn take(&self, k: usize) -> Vec<u64> {
        (0..k).map(|i| self.at(i)).collect()
    }
}

impl fmt::Display for BairePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.prefix {
            write!(f, "{} ", s)?;
        }
        match &self.tail {
            Tail::Zeros => write!(f, "0..."),
            Tail::Cyclic(p) => {
                write!(f, "(")?;
                for s in p {
                    write!(f, "{} ", s)?;
                }
                write!(f, ")...")
            }
        }
    }
}

/// Apply a prefix map to a point: the longest entry lying along the point
/// decides; the first `out_len` symbols are returned when committed.
pub fn apply_functional(f: &PrefixMap, beta: &BairePoint, out_len: usize) -> Option<Vec<u64>> {
    let mut best: Option<&Vec<u64>> = None;
    for (input, output) in f.entries() {
        if input.iter().enumerate().all(|(i, &s)| beta.at(i) == s) {
            match best {
                Some(b) if b.len() >= output.len() => {}
                _ => best = Some(output),
            }
        }
    }
    let out = best?;
    if out.len() >= out_len {
        Some(out[..out_len].to_vec())
    } else {
        None
    }
}

/// The partial continuous functional defined on the cones `[0^n 1]`: for
/// even `n` it maps into `[0^n 1]`, for odd `n` into `[1 0^(n-1)]`, and it
/// is undefined elsewhere. Entries carry the zero-extensions of each cone
/// point up to the depth, with the continuation mapped identically.
pub fn psi_nonextendable(depth: usize) -> PrefixMap {
    assert!(depth >= 2, "needs at least the cones [1] and [01]");
    let mut entries = BTreeMap::new();
    for n in 0..depth {
        let mut base_in = vec![0; n];
        base_in.push(1);
        let base_out: Vec<u64> = if n % 2 == 0 {
            base_in.clone()
        } else {
            let mut o = vec![1];
            o.extend(vec![0; n - 1]);
            o
        };
        for j in 0..=(depth - n - 1) {
            let mut input = base_in.clone();
            input.extend(vec![0; j]);
            let mut output = base_out.clone();
            output.extend(vec![0; j]);
            entries.insert(input, output);
        }
    }
    PrefixMap::new(entries, depth).expect("construction is monotone")
}

/// Evidence that no total continuous functional extends the map: two
/// families of points marching toward the all-zero sequence whose committed
/// outputs force different first symbols there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContradictionWitness {
    /// Shallowest point of the family forcing the smaller symbol, with it.
    pub low_forcer: (Vec<u64>, u64),
    /// Shallowest point of the family forcing the larger symbol, with it.
    pub high_forcer: (Vec<u64>, u64),
    /// Zero-prefix lengths observed for each family.
    pub low_depths: Vec<usize>,
    pub high_depths: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtensionVerdict {
    Contradiction(ContradictionWitness),
    /// No conflicting families reach close enough to the all-zero point at
    /// this depth.
    NotFound,
}

/// Search for the convergence conflict at the all-zero sequence: entries of
/// the form `0^k 1 ...` are grouped by the first symbol of their committed
/// output, and two groups whose zero-prefixes reach depth `depth - 2` force
/// incompatible values for any total continuous extension.
pub fn check_no_total_extension(psi: &PrefixMap, depth: usize) -> ExtensionVerdict {
    let mut by_symbol: BTreeMap<u64, Vec<(usize, Vec<u64>)>> = BTreeMap::new();
    for (input, output) in psi.entries() {
        let k = input.iter().take_while(|&&s| s == 0).count();
        if k >= input.len() || input[k] != 1 {
            continue; // not of the form 0^k 1 ...
        }
        if let Some(&first) = output.first() {
            by_symbol.entry(first).or_default().push((k, input.clone()));
        }
    }
    if depth < 3 {
        return ExtensionVerdict::NotFound;
    }
    let needed = std::cmp::max(1, depth.saturating_sub(2));
    let deep: Vec<(u64, &Vec<(usize, Vec<u64>)>)> = by_symbol
        .iter()
        .filter(|(_, pts)| pts.iter().any(|(k, _)| *k >= needed))
        .map(|(s, pts)| (*s, pts))
        .collect();
    if deep.len() < 2 {
        return ExtensionVerdict::NotFound;
    }
    let pick = |pts: &Vec<(usize, Vec<u64>)>| {
        let (_, input) = pts.iter().filter(|(k, _)| *k >= 1).min_by_key(|(k, _)| *k).unwrap();
        input.clone()
    };
    let (s_low, pts_low) = deep[0];
    let (s_high, pts_high) = deep[1];
    ExtensionVerdict::Contradiction(ContradictionWitness {
        low_forcer: (pick(pts_low), s_low),
        high_forcer: (pick(pts_high), s_high),
        low_depths: pts_low.iter().map(|(k, _)| *k).collect(),
        high_depths: pts_high.iter().map(|(k, _)| *k).collect(),
    })
}

// ---------------------------------------------------------------------------
// diagonalization against total functionals of functionals
// ---------------------------------------------------------------------------

/// A functional of functionals, probed with growing finite approximations
/// of its argument: `commit` inspects an approximation of `g` and reports
/// the first symbol of `f(g)` once only finitely much of `g` was needed.
pub trait ProbedFunctional {
    fn name(&self) -> &str;
    fn commit(&self, g_approx: &PrefixMap) -> Option<u64>;
}

/// Always outputs the sequence `first 0 0 ...`, committing without looking
/// at its argument.
pub struct ConstantFunctional {
    pub first: u64,
}

impl ProbedFunctional for ConstantFunctional {
    fn name(&self) -> &str {
        "constant"
    }

    fn commit(&self, _g: &PrefixMap) -> Option<u64> {
        Some(self.first)
    }
}

/// Commits to `first` once the approximation has been probed to the given
/// depth: a total functional that inspects a finite amount of its argument.
pub struct DelayedFunctional {
    pub needs_depth: usize,
    pub first: u64,
}

impl ProbedFunctional for DelayedFunctional {
    fn name(&self) -> &str {
        "delayed-constant"
    }

    fn commit(&self, g: &PrefixMap) -> Option<u64> {
        (g.depth() >= self.needs_depth).then_some(self.first)
    }
}

/// `f(g) = g`: never commits on the everywhere-undefined approximation, so
/// it is not total in the probing sense.
pub struct IdentityFunctional;

impl ProbedFunctional for IdentityFunctional {
    fn name(&self) -> &str {
        "identity"
    }

    fn commit(&self, g: &PrefixMap) -> Option<u64> {
        apply_functional(g, &BairePoint::zeros(), 1).map(|v| v[0])
    }
}

#[derive(Debug, Clone)]
pub struct Diagonalization {
    /// The total element produced: constant `committed + 1` then zeros.
    pub g: PrefixMap,
    /// First symbol of `f(g)` as committed by the functional.
    pub committed: u64,
    /// First symbol of `g(f(g))`.
    pub diagonal_value: u64,
    pub probes_used: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonCommittal {
    pub probes_used: usize,
}

impl fmt::Display for NonCommittal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "functional never committed within {} probes; not total at this scale",
            self.probes_used
        )
    }
}

impl std::error::Error for NonCommittal {}

/// Diagonalize a claimed-total functional: feed it approximations of the
/// totally undefined element until it commits to the first symbol `v` of
/// `f(g)`, then return the total `g` constant at `v + 1`, which satisfies
/// `(g(f g))(0) != (f g)(0)`.
pub fn diagonalize_total<F: ProbedFunctional + ?Sized>(
    f: &F,
    probe_depth: usize,
) -> Result<Diagonalization, NonCommittal> {
    for d in 0..=probe_depth {
        if let Some(v) = f.commit(&PrefixMap::empty(d)) {
            let g = PrefixMap::constant(v + 1, std::cmp::max(d, 2));
            let diagonal_value =
                apply_functional(&g, &BairePoint::zeros(), 1).expect("g is total")[0];
            return Ok(Diagonalization {
                g,
                committed: v,
                diagonal_value,
                probes_used: d,
            });
        }
    }
    Err(NonCommittal {
        probes_used: probe_depth,
    })
}

/// Twenty committing total functionals for the diagonalization suite.
pub fn committing_corpus() -> Vec<Box<dyn ProbedFunctional>> {
    let mut out: Vec<Box<dyn ProbedFunctional>> = Vec::new();
    for v in 0..10 {
        out.push(Box::new(ConstantFunctional { first: v }));
    }
    for (d, v) in [(1, 0), (2, 7), (3, 7), (3, 1), (4, 2), (5, 9), (1, 3), (2, 0), (4, 4), (5, 0)]
    {
        out.push(Box::new(DelayedFunctional {
            needs_depth: d,
            first: v,
        }));
    }
    out
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

/// Line format: `input -> output`, sequences as space-separated naturals,
/// the empty sequence written `.`; `depth <n>` sets the depth.
pub fn parse_prefix_map(text: &str) -> Result<PrefixMap, String> {
    let mut entries = BTreeMap::new();
    let mut depth = 0usize;
    let mut explicit_depth = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("depth ") {
            explicit_depth =
                Some(rest.trim().parse::<usize>().map_err(|e| format!("line {}: {}", i + 1, e))?);
            continue;
        }
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| format!("line {}: missing ->", i + 1))?;
        let seq = |s: &str| -> Result<Vec<u64>, String> {
            let s = s.trim();
            if s == "." {
                return Ok(vec![]);
            }
            s.split_whitespace()
                .map(|w| w.parse::<u64>().map_err(|e| format!("line {}: {}", i + 1, e)))
                .collect()
        };
        let input = seq(lhs)?;
        let output = seq(rhs)?;
        depth = depth.max(input.len());
        entries.insert(input, output);
    }
    PrefixMap::new(entries, explicit_depth.unwrap_or(depth)).map_err(|e| e.to_string())
}

pub fn print_prefix_map(f: &PrefixMap) -> String {
    let mut out = format!("depth {}\n", f.depth());
    let seq = |s: &[u64]| {
        if s.is_empty() {
            ".".to_string()
        } else {
            s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
        }
    };
    for (i, o) in f.entries() {
        out.push_str(&format!("{} -> {}\n", seq(i), seq(o)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_map_applies_along_zeros() {
        let f = PrefixMap::identity(5);
        for k in 1..=5 {
            let out = apply_functional(&f, &BairePoint::zeros(), k).unwrap();
            assert_eq!(out, vec![0; k]);
        }
        assert_eq!(apply_functional(&f, &BairePoint::zeros(), 6), None);
    }

    #[test]
    fn empty_map_never_commits() {
        let f = PrefixMap::empty(4);
        assert_eq!(apply_functional(&f, &BairePoint::zeros(), 1), None);
        assert_eq!(
            apply_functional(&f, &BairePoint::zeros_then_one(2), 1),
            None
        );
    }

    #[test]
    fn validation_rejects_inconsistent_maps() {
        let mut entries = BTreeMap::new();
        entries.insert(vec![0], vec![1]);
        entries.insert(vec![0, 0], vec![2]); // extends the input, contradicts the output
        assert!(matches!(
            PrefixMap::new(entries, 3),
            Err(PrefixMapError::Inconsistent { .. })
        ));
        let mut entries = BTreeMap::new();
        entries.insert(vec![0, 0, 0, 0], vec![1]);
        assert!(matches!(
            PrefixMap::new(entries, 3),
            Err(PrefixMapError::EntryTooDeep { .. })
        ));
    }

    #[test]
    fn nonextendable_on_odd_cone() {
        // 0 1 0^... lands in [1 0^0]: first symbol 1
        let psi = psi_nonextendable(6);
        let out = apply_functional(&psi, &BairePoint::zeros_then_one(1), 1).unwrap();
        assert_eq!(out, vec![1]);
    }

    #[test]
    fn nonextendable_on_even_cone() {
        // 0 0 1 0^... maps into [0 0 1]
        let psi = psi_nonextendable(6);
        let out = apply_functional(&psi, &BairePoint::zeros_then_one(2), 3).unwrap();
        assert_eq!(out, vec![0, 0, 1]);
    }

    #[test]
    fn nonextendable_undefined_at_zeros() {
        let psi = psi_nonextendable(6);
        assert_eq!(apply_functional(&psi, &BairePoint::zeros(), 1), None);
    }

    #[test]
    fn convergence_forcing_pattern() {
        // images of 0^n 1 0^... begin with 0 for even n and 1 for odd n
        // (from n = 1 on; the n = 0 cone [1] maps into [1])
        let psi = psi_nonextendable(7);
        for n in 1..6 {
            let out = apply_functional(&psi, &BairePoint::zeros_then_one(n), 1).unwrap();
            assert_eq!(out[0], (n % 2) as u64, "first symbol at n={}", n);
        }
        let at_zero = apply_functional(&psi, &BairePoint::zeros_then_one(0), 1).unwrap();
        assert_eq!(at_zero, vec![1]);
    }

    #[test]
    fn contradiction_witness_at_depth_six() {
        let psi = psi_nonextendable(6);
        match check_no_total_extension(&psi, 6) {
            ExtensionVerdict::Contradiction(w) => {
                assert_eq!(w.low_forcer.1, 0);
                assert_eq!(w.high_forcer.1, 1);
                // minimal representatives: 0 0 1 forcing 0 and 0 1 forcing 1
                assert_eq!(w.low_forcer.0, vec![0, 0, 1]);
                assert_eq!(w.high_forcer.0, vec![0, 1]);
                assert!(w.low_depths.iter().max().unwrap() >= &4);
                assert!(w.high_depths.iter().max().unwrap() >= &4);
            }
            ExtensionVerdict::NotFound => panic!("expected a contradiction"),
        }
    }

    #[test]
    fn contradiction_preserved_at_larger_depth() {
        for depth in [6usize, 8, 10] {
            let psi = psi_nonextendable(depth);
            assert!(matches!(
                check_no_total_extension(&psi, depth),
                ExtensionVerdict::Contradiction(_)
            ));
        }
    }

    #[test]
    fn identity_is_extendable() {
        for depth in [3usize, 5, 6] {
            let id = PrefixMap::identity(depth);
            assert_eq!(
                check_no_total_extension(&id, depth),
                ExtensionVerdict::NotFound
            );
        }
    }

    #[test]
    fn shallow_depth_reports_not_found() {
        let psi = psi_nonextendable(2);
        assert_eq!(
            check_no_total_extension(&psi, 2),
            ExtensionVerdict::NotFound
        );
    }

    #[test]
    fn diagonalize_constant_functional() {
        let f = ConstantFunctional { first: 0 };
        let d = diagonalize_total(&f, 6).unwrap();
        assert_eq!(d.committed, 0);
        assert_eq!(d.diagonal_value, 1);
        assert_eq!(d.probes_used, 0);
        // g is total: it commits on arbitrary points
        for beta in [BairePoint::zeros(), BairePoint::zeros_then_one(3)] {
            assert_eq!(apply_functional(&d.g, &beta, 1), Some(vec![1]));
        }
    }

    #[test]
    fn diagonalize_delayed_functional() {
        let f = DelayedFunctional {
            needs_depth: 3,
            first: 7,
        };
        let d = diagonalize_total(&f, 6).unwrap();
        assert_eq!(d.committed, 7);
        assert_eq!(d.diagonal_value, 8);
        assert_eq!(d.probes_used, 3);
    }

    #[test]
    fn identity_functional_never_commits() {
        let err = diagonalize_total(&IdentityFunctional, 8);
        assert_eq!(err.unwrap_err(), NonCommittal { probes_used: 8 });
    }

    #[test]
    fn whole_committing_corpus_is_diagonalized() {
        for f in committing_corpus() {
            let d = diagonalize_total(f.as_ref(), 8)
                .unwrap_or_else(|_| panic!("{} did not commit", f.name()));
            assert_ne!(d.diagonal_value, d.committed, "{}", f.name());
            assert_eq!(d.diagonal_value, d.committed + 1);
        }
    }

    #[test]
    fn no_totalizer_passes_both_application_and_fixed_point_laws() {
        // any functional that is total in the probing sense gets beaten by
        // its diagonal element, so none can produce fixed points for all
        // total g; and the non-committing identity fails totality outright
        for f in committing_corpus() {
            let d = diagonalize_total(f.as_ref(), 6).expect("committing corpus commits");
            // the fixed-point contract g(fg) = fg fails at the first symbol
            assert_ne!(d.diagonal_value, d.committed, "{}", f.name());
        }
        assert!(diagonalize_total(&IdentityFunctional, 6).is_err());
    }

    #[test]
    fn serialization_roundtrip_and_validation() {
        let psi = psi_nonextendable(4);
        let text = print_prefix_map(&psi);
        let back = parse_prefix_map(&text).unwrap();
        assert_eq!(back, psi);
        // inconsistent text is rejected on load
        let bad = "depth 3\n0 -> 1\n0 0 -> 2\n";
        assert!(parse_prefix_map(bad).is_err());
        assert!(parse_prefix_map("0 0\n").is_err());
    }
}
