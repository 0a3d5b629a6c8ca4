//! Input data model: residual schedules, harmonic Ritz values and their
//! admissibility.
//!
//! A schedule lists `‖r₀‖, …, ‖r_{n−1}‖` (the terminal `‖r_n‖ = 0` is
//! implicit). Step `k` is a *plateau* step when `‖r_k‖ = ‖r_{k−1}‖`, decided
//! on squared norms within `1e-14`. Inside a plateau running over steps
//! `k+1 … k+m`, the tuple at step `k+i` must repeat the finite values of step
//! `k` and add exactly `i` infinite values; outside plateaus every value is
//! finite.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::C64;
use crate::{Error, Result};

/// Squared-norm gap at or below which consecutive norms form a plateau.
pub const PLATEAU_TOL: f64 = 1e-14;
/// Smallest squared-norm gap accepted for a strict decrease.
pub const STRICT_GAP: f64 = 1e-12;
/// Tolerance for `‖r₀‖ = 1`, for plateau value matching and for unimodular signs.
pub const UNIT_TOL: f64 = 1e-12;
/// Relative separation required between finite values within one step.
pub const DISTINCT_TOL: f64 = 1e-10;

/// Prescribed GMRES residual norms `‖r₀‖, …, ‖r_{n−1}‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualSchedule {
    norms: Vec<f64>,
}

impl ResidualSchedule {
    /// Wrap a list of norms. No checks; see [`validate`].
    pub fn new(norms: Vec<f64>) -> Self {
        Self { norms }
    }

    /// The norms, starting with `‖r₀‖`.
    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    /// Problem dimension `n`.
    pub fn len(&self) -> usize {
        self.norms.len()
    }

    /// True when no norms are present.
    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    /// Whether step `k` (1-based) is a plateau step. Step `n` never is.
    pub fn is_plateau(&self, k: usize) -> bool {
        k >= 1
            && k < self.norms.len()
            && squared_gap(self.norms[k - 1], self.norms[k]).abs() <= PLATEAU_TOL
    }

    /// All plateau steps, ascending.
    pub fn plateau_steps(&self) -> Vec<usize> {
        (1..self.norms.len())
            .filter(|&k| self.is_plateau(k))
            .collect()
    }

    /// Schedule-only admissibility: `‖r₀‖ = 1`, nonincreasing with clear
    /// plateaus or clear decreases, and `‖r_{n−1}‖ > 0`.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let norms = &self.norms;
        if norms.is_empty() {
            out.push(Violation::global(ViolationKind::Empty));
            return out;
        }
        if let Some(k) = norms.iter().position(|x| !x.is_finite()) {
            out.push(Violation::at(k, ViolationKind::NonFiniteNorm));
            return out;
        }
        if (norms[0] - 1.0).abs() > UNIT_TOL {
            out.push(Violation::at(
                0,
                ViolationKind::InitialNormNotOne { found: norms[0] },
            ));
        }
        for k in 1..norms.len() {
            let gap = squared_gap(norms[k - 1], norms[k]);
            if gap < -PLATEAU_TOL {
                out.push(Violation::at(k, ViolationKind::Increasing));
            } else if gap.abs() > PLATEAU_TOL && gap < STRICT_GAP {
                out.push(Violation::at(k, ViolationKind::NearPlateau { gap }));
            }
        }
        let last = norms[norms.len() - 1];
        if last <= 0.0 {
            out.push(Violation::at(
                norms.len() - 1,
                ViolationKind::NonPositiveFinalNorm,
            ));
        }
        out
    }
}

fn squared_gap(prev: f64, next: f64) -> f64 {
    prev * prev - next * next
}

/// A harmonic Ritz value: a nonzero finite complex number or infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HarmonicRitzValue {
    /// Finite value.
    Finite(C64),
    /// The value `∞`.
    Infinite,
}

impl HarmonicRitzValue {
    /// Finite payload, if any.
    pub fn finite(&self) -> Option<C64> {
        match self {
            Self::Finite(z) => Some(*z),
            Self::Infinite => None,
        }
    }

    /// True for `∞`.
    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinite)
    }

    /// Canonical order: nondecreasing magnitude, then principal argument, `∞` last.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Infinite, Self::Infinite) => Ordering::Equal,
            (Self::Infinite, _) => Ordering::Greater,
            (_, Self::Infinite) => Ordering::Less,
            (Self::Finite(a), Self::Finite(b)) => a
                .norm()
                .partial_cmp(&b.norm())
                .unwrap_or(Ordering::Equal)
                .then(a.arg().partial_cmp(&b.arg()).unwrap_or(Ordering::Equal)),
        }
    }
}

impl fmt::Display for HarmonicRitzValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(z) => write!(f, "{z}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

/// Sort a tuple into canonical order in place.
pub fn canonicalize(values: &mut [HarmonicRitzValue]) {
    values.sort_by(HarmonicRitzValue::canonical_cmp);
}

/// One tuple of harmonic Ritz values per step; `steps[k−1]` has `k` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct RitzPrescription {
    steps: Vec<Vec<HarmonicRitzValue>>,
}

impl RitzPrescription {
    /// Wrap per-step tuples, sorting each into canonical order.
    pub fn new(mut steps: Vec<Vec<HarmonicRitzValue>>) -> Self {
        for s in steps.iter_mut() {
            canonicalize(s);
        }
        Self { steps }
    }

    /// Per-step tuples.
    pub fn steps(&self) -> &[Vec<HarmonicRitzValue>] {
        &self.steps
    }

    /// Tuple at 1-based step `k`.
    pub fn step(&self, k: usize) -> &[HarmonicRitzValue] {
        &self.steps[k - 1]
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// True when no steps are present.
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// A complete prescription: residual norms, harmonic Ritz values and
/// optional sign choices for the unitary factor.
#[derive(Clone, Debug, PartialEq)]
pub struct Prescription {
    /// Residual norms.
    pub schedule: ResidualSchedule,
    /// Harmonic Ritz values per step.
    pub ritz: RitzPrescription,
    /// Phases `σ_1..σ_n` of the first row of `Q` (default all ones).
    pub first_row_signs: Option<Vec<C64>>,
    /// Phases `ρ_1..ρ_{n−1}` of the subdiagonal of `Q` (default all ones).
    pub rho_signs: Option<Vec<C64>>,
}

impl Prescription {
    /// Prescription with default signs.
    pub fn new(schedule: ResidualSchedule, ritz: RitzPrescription) -> Self {
        Self {
            schedule,
            ritz,
            first_row_signs: None,
            rho_signs: None,
        }
    }

    /// Problem dimension `n`.
    pub fn n(&self) -> usize {
        self.schedule.len()
    }
}

/// What went wrong in a [`Violation`].
#[derive(Clone, Debug, PartialEq)]
pub enum ViolationKind {
    /// Schedule has no entries.
    Empty,
    /// Schedule and Ritz prescription disagree on `n`.
    LengthMismatch {
        /// Schedule length.
        schedule: usize,
        /// Number of Ritz tuples.
        ritz: usize,
    },
    /// Step tuple does not have `k` entries.
    TupleArity {
        /// Required entries.
        expected: usize,
        /// Entries present.
        found: usize,
    },
    /// A norm is NaN or infinite.
    NonFiniteNorm,
    /// `‖r₀‖ ≠ 1`.
    InitialNormNotOne {
        /// Value found.
        found: f64,
    },
    /// `‖r_k‖ > ‖r_{k−1}‖`.
    Increasing,
    /// Squared gap between the plateau and strict-decrease thresholds.
    NearPlateau {
        /// Squared-norm gap.
        gap: f64,
    },
    /// `‖r_{n−1}‖ ≤ 0`.
    NonPositiveFinalNorm,
    /// A finite harmonic Ritz value is zero.
    ZeroValue,
    /// A finite harmonic Ritz value has NaN/infinite components.
    NonFiniteValue,
    /// Two finite values of one non-plateau step coincide.
    RepeatedValue,
    /// `∞` at a step that is not a plateau step.
    InfiniteOutsidePlateau,
    /// Plateau step with the wrong number of `∞` entries.
    PlateauInfiniteCount {
        /// Required count.
        expected: usize,
        /// Count present.
        found: usize,
    },
    /// Plateau step whose finite part does not repeat the pre-plateau tuple.
    PlateauFiniteMismatch {
        /// The step whose tuple should be repeated.
        reference_step: usize,
    },
    /// A sign override list has the wrong length.
    SignLength {
        /// `"first_row_signs"` or `"rho_signs"`.
        which: &'static str,
        /// Required length.
        expected: usize,
        /// Length present.
        found: usize,
    },
    /// A sign override is not unimodular.
    SignNotUnimodular {
        /// `"first_row_signs"` or `"rho_signs"`.
        which: &'static str,
        /// 1-based position.
        index: usize,
    },
}

/// One admissibility failure. `step` is 1-based for Ritz tuples and the
/// residual index (`0` = `‖r₀‖`) for schedule issues.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    /// Affected step, when the failure is local.
    pub step: Option<usize>,
    /// Failure description.
    pub kind: ViolationKind,
}

impl Violation {
    fn at(step: usize, kind: ViolationKind) -> Self {
        Self {
            step: Some(step),
            kind,
        }
    }

    fn global(kind: ViolationKind) -> Self {
        Self { step: None, kind }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.step {
            write!(f, "step {s}: ")?;
        }
        match &self.kind {
            ViolationKind::Empty => f.write_str("empty schedule"),
            ViolationKind::LengthMismatch { schedule, ritz } => {
                write!(f, "schedule has {schedule} norms but {ritz} Ritz tuples")
            }
            ViolationKind::TupleArity { expected, found } => {
                write!(f, "expected {expected} harmonic Ritz values, found {found}")
            }
            ViolationKind::NonFiniteNorm => f.write_str("residual norm is not finite"),
            ViolationKind::InitialNormNotOne { found } => {
                write!(f, "initial residual norm is {found}, not 1")
            }
            ViolationKind::Increasing => f.write_str("residual norm increases"),
            ViolationKind::NearPlateau { gap } => {
                write!(
                    f,
                    "squared-norm gap {gap:e} is neither a plateau nor a clear decrease"
                )
            }
            ViolationKind::NonPositiveFinalNorm => {
                f.write_str("final residual norm must be positive")
            }
            ViolationKind::ZeroValue => f.write_str("harmonic Ritz value is zero"),
            ViolationKind::NonFiniteValue => {
                f.write_str("harmonic Ritz value has non-finite components")
            }
            ViolationKind::RepeatedValue => f.write_str("repeated harmonic Ritz value"),
            ViolationKind::InfiniteOutsidePlateau => {
                f.write_str("infinite harmonic Ritz value outside a plateau")
            }
            ViolationKind::PlateauInfiniteCount { expected, found } => {
                write!(
                    f,
                    "plateau step needs {expected} infinite values, found {found}"
                )
            }
            ViolationKind::PlateauFiniteMismatch { reference_step } => {
                write!(
                    f,
                    "finite values must repeat those of step {reference_step}"
                )
            }
            ViolationKind::SignLength {
                which,
                expected,
                found,
            } => {
                write!(f, "{which} has length {found}, expected {expected}")
            }
            ViolationKind::SignNotUnimodular { which, index } => {
                write!(f, "{which}[{index}] is not unimodular")
            }
        }
    }
}

/// Result of [`validate`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AdmissibilityReport {
    /// All violations found; empty means admissible.
    pub violations: Vec<Violation>,
}

impl AdmissibilityReport {
    /// True when the prescription is admissible.
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Convert into a `Result`, moving violations into [`Error::Admissibility`].
    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::Admissibility(self.violations))
        }
    }
}

/// Check a prescription for admissibility. Violations are data, never errors.
pub fn validate(p: &Prescription) -> AdmissibilityReport {
    let mut out = p.schedule.violations();
    let n = p.schedule.len();
    if p.ritz.len() != n {
        out.push(Violation::global(ViolationKind::LengthMismatch {
            schedule: n,
            ritz: p.ritz.len(),
        }));
    }
    check_signs(p.first_row_signs.as_deref(), "first_row_signs", n, &mut out);
    check_signs(
        p.rho_signs.as_deref(),
        "rho_signs",
        n.saturating_sub(1),
        &mut out,
    );

    let mut arity_ok = true;
    for (idx, tuple) in p.ritz.steps().iter().enumerate() {
        let k = idx + 1;
        if tuple.len() != k {
            out.push(Violation::at(
                k,
                ViolationKind::TupleArity {
                    expected: k,
                    found: tuple.len(),
                },
            ));
            arity_ok = false;
        }
        for v in tuple {
            if let HarmonicRitzValue::Finite(z) = v {
                if !(z.re.is_finite() && z.im.is_finite()) {
                    out.push(Violation::at(k, ViolationKind::NonFiniteValue));
                } else if z.norm() == 0.0 {
                    out.push(Violation::at(k, ViolationKind::ZeroValue));
                }
            }
        }
    }
    if !arity_ok || p.ritz.len() != n {
        return AdmissibilityReport { violations: out };
    }

    let mut anchor = 0; // last non-plateau step
    for k in 1..=n {
        let tuple = p.ritz.step(k);
        if !p.schedule.is_plateau(k) {
            anchor = k;
            if tuple.iter().any(HarmonicRitzValue::is_infinite) {
                out.push(Violation::at(k, ViolationKind::InfiniteOutsidePlateau));
            }
            let finite: Vec<C64> = tuple.iter().filter_map(HarmonicRitzValue::finite).collect();
            let repeated = finite.iter().enumerate().any(|(i, a)| {
                finite[i + 1..]
                    .iter()
                    .any(|b| (a - b).norm() < DISTINCT_TOL * a.norm().max(b.norm()))
            });
            if repeated {
                out.push(Violation::at(k, ViolationKind::RepeatedValue));
            }
            continue;
        }

        let run = k - anchor;
        let found = tuple.iter().filter(|v| v.is_infinite()).count();
        if found != run {
            out.push(Violation::at(
                k,
                ViolationKind::PlateauInfiniteCount {
                    expected: run,
                    found,
                },
            ));
        }
        let reference: Vec<C64> = if anchor == 0 {
            Vec::new()
        } else {
            p.ritz
                .step(anchor)
                .iter()
                .filter_map(HarmonicRitzValue::finite)
                .collect()
        };
        let finite: Vec<C64> = tuple.iter().filter_map(HarmonicRitzValue::finite).collect();
        if !multiset_match(&reference, &finite, UNIT_TOL) {
            out.push(Violation::at(
                k,
                ViolationKind::PlateauFiniteMismatch {
                    reference_step: anchor,
                },
            ));
        }
    }

    AdmissibilityReport { violations: out }
}

fn check_signs(
    signs: Option<&[C64]>,
    which: &'static str,
    expected: usize,
    out: &mut Vec<Violation>,
) {
    let Some(signs) = signs else { return };
    if signs.len() != expected {
        out.push(Violation::global(ViolationKind::SignLength {
            which,
            expected,
            found: signs.len(),
        }));
    }
    for (i, s) in signs.iter().enumerate() {
        if !((s.norm() - 1.0).abs() <= UNIT_TOL) {
            out.push(Violation::global(ViolationKind::SignNotUnimodular {
                which,
                index: i + 1,
            }));
        }
    }
}

/// Greedy nearest matching of two equally sized multisets, entry tolerance
/// `tol·max(1, |reference|)`.
fn multiset_match(reference: &[C64], candidate: &[C64], tol: f64) -> bool {
    if reference.len() != candidate.len() {
        return false;
    }
    let mut used = alloc::vec![false; candidate.len()];
    for r in reference {
        let best = candidate
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, c)| (j, (c - r).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal));
        match best {
            Some((j, d)) if d <= tol * r.norm().max(1.0) => used[j] = true,
            _ => return false,
        }
    }
    true
}

/// Deterministic random admissible prescription of dimension `n`.
///
/// Squared residual norms drop by a random fraction in `[0.05, 0.95]` of the
/// remaining budget at every step outside `plateau_steps`, and stay exactly
/// equal at plateau steps. Finite harmonic Ritz values have magnitude in
/// `[0.5, 5]`, uniform phase, and are pairwise at least `1e-3` apart within
/// a step. Plateau tuples are filled in from the preceding non-plateau step.
pub fn random_prescription(n: usize, plateau_steps: &[usize], seed: u64) -> Result<Prescription> {
    if n < 1 {
        return Err(Error::Argument("n must be at least 1".into()));
    }
    if let Some(&s) = plateau_steps.iter().find(|&&s| s < 1 || s >= n) {
        return Err(Error::Argument(alloc::format!(
            "plateau step {s} outside 1..={}",
            n.saturating_sub(1)
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plateau = |k: usize| plateau_steps.contains(&k);

    let mut norms = Vec::with_capacity(n);
    norms.push(1.0_f64);
    let mut budget = 1.0_f64;
    for k in 1..n {
        if plateau(k) {
            let prev = norms[k - 1];
            norms.push(prev);
        } else {
            budget *= 1.0 - rng.gen_range(0.05..0.95);
            norms.push(Float::sqrt(budget));
        }
    }

    let mut steps: Vec<Vec<HarmonicRitzValue>> = Vec::with_capacity(n);
    let mut anchor: Vec<HarmonicRitzValue> = Vec::new();
    let mut run = 0;
    for k in 1..=n {
        if plateau(k) {
            run += 1;
            let mut t = anchor.clone();
            t.extend(core::iter::repeat_n(HarmonicRitzValue::Infinite, run));
            steps.push(t);
            continue;
        }
        run = 0;
        let mut values: Vec<C64> = Vec::with_capacity(k);
        while values.len() < k {
            let mag = rng.gen_range(0.5..=5.0);
            let arg = rng.gen_range(-core::f64::consts::PI..core::f64::consts::PI);
            let z = C64::from_polar(mag, arg);
            if values.iter().all(|w| (w - z).norm() >= 1e-3) {
                values.push(z);
            }
        }
        anchor = values.into_iter().map(HarmonicRitzValue::Finite).collect();
        steps.push(anchor.clone());
    }

    Ok(Prescription::new(
        ResidualSchedule::new(norms),
        RitzPrescription::new(steps),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn f(re: f64) -> HarmonicRitzValue {
        HarmonicRitzValue::Finite(C64::new(re, 0.0))
    }

    const INF: HarmonicRitzValue = HarmonicRitzValue::Infinite;

    fn presc(norms: &[f64], steps: Vec<Vec<HarmonicRitzValue>>) -> Prescription {
        Prescription::new(
            ResidualSchedule::new(norms.to_vec()),
            RitzPrescription::new(steps),
        )
    }

    #[test]
    fn worked_example_is_admissible() {
        let p = presc(&[1.0, 0.6], vec![vec![f(2.0)], vec![f(3.0), f(5.0)]]);
        assert!(validate(&p).is_ok());
    }

    #[test]
    fn plateau_pattern_is_admissible() {
        let p = presc(
            &[1.0, 0.6, 0.6],
            vec![
                vec![f(2.0)],
                vec![f(2.0), INF],
                vec![f(1.0), f(4.0), f(7.0)],
            ],
        );
        assert!(validate(&p).is_ok(), "{:?}", validate(&p));
        assert_eq!(p.schedule.plateau_steps(), vec![2]);
    }

    #[test]
    fn plateau_must_repeat_previous_finite_values() {
        let p = presc(
            &[1.0, 0.6, 0.6],
            vec![
                vec![f(2.0)],
                vec![f(7.0), INF],
                vec![f(1.0), f(4.0), f(7.0)],
            ],
        );
        let r = validate(&p);
        assert_eq!(
            r.violations,
            vec![Violation::at(
                2,
                ViolationKind::PlateauFiniteMismatch { reference_step: 1 }
            )]
        );
    }

    #[test]
    fn infinity_without_plateau() {
        let p = presc(&[1.0], vec![vec![INF]]);
        let r = validate(&p);
        assert_eq!(
            r.violations,
            vec![Violation::at(1, ViolationKind::InfiniteOutsidePlateau)]
        );
    }

    #[test]
    fn plateau_from_the_start_is_all_infinite() {
        let tail = vec![f(1.0), f(2.0), f(3.0)];
        let p = presc(
            &[1.0, 1.0, 1.0],
            vec![vec![INF], vec![INF, INF], tail.clone()],
        );
        assert!(validate(&p).is_ok(), "{:?}", validate(&p));
        let bad = presc(&[1.0, 1.0, 1.0], vec![vec![INF], vec![f(1.0), INF], tail]);
        assert!(!validate(&bad).is_ok());
    }

    #[test]
    fn schedule_violations() {
        let cases: &[(&[f64], ViolationKind)] = &[
            (&[0.9, 0.5], ViolationKind::InitialNormNotOne { found: 0.9 }),
            (&[1.0, 0.5, 0.6], ViolationKind::Increasing),
            (&[1.0, 0.0], ViolationKind::NonPositiveFinalNorm),
        ];
        for (norms, kind) in cases {
            let steps = (1..=norms.len())
                .map(|k| (1..=k).map(|j| f(j as f64)).collect())
                .collect();
            let r = validate(&presc(norms, steps));
            assert!(
                r.violations.iter().any(|v| &v.kind == kind),
                "{norms:?}: {:?}",
                r.violations
            );
        }
        // squared gap of ~5e-14: neither plateau nor strict decrease
        let near = 1.0 - 2.5e-14;
        let r = validate(&presc(
            &[1.0, near],
            vec![vec![f(1.0)], vec![f(1.0), f(2.0)]],
        ));
        assert!(matches!(
            r.violations[..],
            [Violation {
                kind: ViolationKind::NearPlateau { .. },
                ..
            }]
        ));
    }

    #[test]
    fn value_violations() {
        let zero = HarmonicRitzValue::Finite(C64::new(0.0, 0.0));
        let r = validate(&presc(&[1.0, 0.5], vec![vec![zero], vec![f(1.0), f(1.0)]]));
        let kinds: Vec<_> = r
            .violations
            .iter()
            .map(|v| (v.step, v.kind.clone()))
            .collect();
        assert_eq!(
            kinds,
            vec![
                (Some(1), ViolationKind::ZeroValue),
                (Some(2), ViolationKind::RepeatedValue)
            ]
        );
        let r = validate(&presc(&[1.0, 0.5], vec![vec![f(1.0)], vec![f(1.0)]]));
        assert_eq!(
            r.violations,
            vec![Violation::at(
                2,
                ViolationKind::TupleArity {
                    expected: 2,
                    found: 1
                }
            )]
        );
    }

    #[test]
    fn sign_overrides_checked() {
        let mut p = presc(&[1.0, 0.6], vec![vec![f(2.0)], vec![f(3.0), f(5.0)]]);
        p.first_row_signs = Some(vec![C64::new(0.0, 1.0), C64::new(1.1, 0.0)]);
        p.rho_signs = Some(vec![]);
        let r = validate(&p);
        assert_eq!(r.violations.len(), 2);
    }

    #[test]
    fn canonical_order() {
        let mut t = vec![
            INF,
            f(-2.0),
            f(1.0),
            HarmonicRitzValue::Finite(C64::new(0.0, 1.0)),
        ];
        canonicalize(&mut t);
        assert_eq!(t[0], f(1.0));
        assert_eq!(t[1], HarmonicRitzValue::Finite(C64::new(0.0, 1.0)));
        assert_eq!(t[2], f(-2.0));
        assert_eq!(t[3], INF);
    }

    #[test]
    fn random_smallest_instance() {
        let p = random_prescription(1, &[], 7).unwrap();
        assert_eq!(p.schedule.norms(), &[1.0]);
        assert_eq!(p.ritz.step(1).len(), 1);
        assert!(!p.ritz.step(1)[0].is_infinite());
    }

    #[test]
    fn random_with_plateau() {
        let p = random_prescription(5, &[3], 1).unwrap();
        assert!(validate(&p).is_ok(), "{:?}", validate(&p));
        assert_eq!(p.ritz.step(3).iter().filter(|v| v.is_infinite()).count(), 1);
        assert_eq!(p.schedule.plateau_steps(), vec![3]);
    }

    #[test]
    fn random_rejects_terminal_plateau() {
        assert!(matches!(
            random_prescription(5, &[5], 1),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            random_prescription(0, &[], 1),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(
            random_prescription(6, &[2, 3], 42),
            random_prescription(6, &[2, 3], 42)
        );
        assert_ne!(
            random_prescription(6, &[2, 3], 42),
            random_prescription(6, &[2, 3], 43)
        );
    }
}
