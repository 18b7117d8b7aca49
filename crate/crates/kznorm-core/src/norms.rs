//! Closed-form norm products for chiral intertwiners and their limits.
//!
//! The central object is the Γ-product
//!
//! ```text
//! ‖Φ‖² = c · ∏_{i=1}^{k} ([2j+1+i]/[2j+1−i]) · (⟦2j+1+i⟧/⟦2j+1−i⟧)²
//! ```
//!
//! with the two bracket families
//! `[x] = sin(πx/κ)/sin(π/κ)` (the q-number at `q = e^{πi/κ}`) and
//! `⟦x⟧ = Γ(1 − x/κ)`, and the convention `c ≡ 1` — the product is only
//! ever defined up to a `j`-independent constant, so ratio operations
//! over `j` are first-class here. A rank-`n` generalization replaces
//! `2j+1` by the pairings `(α, λ+kρ)` over positive roots; two `i`-range
//! conventions are in circulation (`1..k−1` vs `1..k`), so both are
//! supported behind an explicit parameter and the `sl2` reduction test
//! pins the `1..k` variant to the product above.
//!
//! At integer level K (`κ = K + 2` for `sl2`) the product degenerates by
//! bracket zeros and Γ-poles precisely outside the window
//! `k ≤ 2j ≤ K − k`; all zero/pole detection is structural (exact
//! integer tests on bracket arguments), never floating-point snapping of
//! a nearly-zero value.

use crate::error::CoreError;
use crate::gammaf;
use crate::halfint::HalfInt;
use crate::rootdata::{positive_roots, root_weight_pairing, Weight};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

/// Structural pole signal from [`bracket_gamma`]: `x = multiple·κ` with
/// `multiple ≥ 1`, where `Γ(1 − x/κ)` has a pole.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketPole {
    pub x: f64,
    pub kappa: f64,
    pub multiple: i64,
}

/// Whether `x/κ` is an integer to within the structural tolerance used
/// for zero/pole classification (exact for integer `x`, integer `κ`).
fn ratio_integer(x: f64, kappa: f64) -> Option<i64> {
    let r = x / kappa;
    let rounded = libm::round(r);
    if libm::fabs(r - rounded) <= 1e-11 * libm::fabs(r).max(1.0) {
        Some(rounded as i64)
    } else {
        None
    }
}

/// `⟦x⟧ = Γ(1 − x/κ)`, with poles (at `x = κ, 2κ, …`) reported as a
/// structured signal rather than a floating infinity. When `x/κ` is an
/// integer the value `Γ(1−x/κ) = (−x/κ)!` is computed exactly.
pub fn bracket_gamma(x: f64, kappa: f64) -> Result<f64, BracketPole> {
    if let Some(m) = ratio_integer(x, kappa) {
        if m >= 1 {
            return Err(BracketPole {
                x,
                kappa,
                multiple: m,
            });
        }
        if 1 - m > 171 {
            return Ok(f64::INFINITY);
        }
        let mut v = 1.0;
        for i in 2..(1 - m) {
            v *= i as f64;
        }
        return Ok(v);
    }
    Ok(gammaf::gamma(1.0 - x / kappa))
}

/// `[x] = sin(πx/κ)/sin(π/κ)`. The caller is responsible for κ with
/// `sin(π/κ) ≠ 0`; structural zeros of the numerator are reported by
/// [`bracket_q_zero`].
pub fn bracket_q(x: f64, kappa: f64) -> f64 {
    libm::sin(core::f64::consts::PI * x / kappa) / libm::sin(core::f64::consts::PI / kappa)
}

/// Whether `[x]` vanishes identically, i.e. `x ≡ 0 (mod κ)`.
pub fn bracket_q_zero(x: f64, kappa: f64) -> bool {
    ratio_integer(x, kappa).is_some()
}

/// How a norm product (or one of its factors) degenerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// Finite and nonzero.
    None,
    /// An identically-zero factor (numerator bracket zero or a Γ-pole in
    /// the denominator).
    Zero,
    /// An infinite factor (denominator bracket zero or a Γ-pole in the
    /// numerator).
    Pole,
    /// Zero and pole in the same product — no finite limit assigned.
    Indeterminate,
}

impl Degeneracy {
    fn combine(self, other: Degeneracy) -> Degeneracy {
        use Degeneracy::*;
        match (self, other) {
            (None, x) | (x, None) => x,
            (Zero, Zero) => Zero,
            (Pole, Pole) => Pole,
            _ => Indeterminate,
        }
    }

    pub fn is_clean(self) -> bool {
        self == Degeneracy::None
    }
}

/// Where a norm value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormSource {
    ClosedForm,
    KzNumeric,
    Conjecture,
}

/// One factor of a norm product, with its bracket arguments and any
/// degeneracy, for structural reporting.
#[derive(Debug, Clone)]
pub struct FactorReport {
    /// Human-readable factor label (`"i=2"`, or root and index for the
    /// rank-n product).
    pub label: String,
    pub plus_arg: f64,
    pub minus_arg: f64,
    /// Factor value; `0`, `∞`, or NaN under degeneracy.
    pub value: f64,
    pub degeneracy: Degeneracy,
    /// Which bracket degenerated and how, empty when clean.
    pub detail: String,
}

/// A norm-squared value together with its provenance and per-factor
/// bookkeeping. `value` is finite iff no pole factor was hit; a zero
/// factor yields `0.0`, a pole `∞`, a zero–pole collision NaN.
#[derive(Debug, Clone)]
pub struct NormResult {
    pub value: f64,
    pub degeneracy: Degeneracy,
    pub source: NormSource,
    /// Zero for closed-form evaluation.
    pub error_estimate: f64,
    /// Inside/outside the integer-level window, when a level is known.
    pub window_flag: Option<bool>,
    pub factors: Vec<FactorReport>,
}

fn check_kappa(kappa: f64) -> Result<(), CoreError> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(CoreError::Domain(format!(
            "deformation parameter must be positive and finite, got {kappa}"
        )));
    }
    if libm::fabs(libm::sin(core::f64::consts::PI / kappa)) < 1e-14 {
        return Err(CoreError::Domain(format!(
            "sin(π/κ) vanishes at κ = {kappa}"
        )));
    }
    Ok(())
}

/// Evaluate one bracket-ratio factor
/// `([plus]/[minus])·(⟦plus⟧/⟦minus⟧)²` with structural zero/pole
/// classification.
fn eval_factor(label: String, plus: f64, minus: f64, kappa: f64) -> FactorReport {
    let mut deg = Degeneracy::None;
    let mut detail = String::new();

    let q_plus_zero = bracket_q_zero(plus, kappa);
    let q_minus_zero = bracket_q_zero(minus, kappa);
    if q_plus_zero {
        deg = deg.combine(Degeneracy::Zero);
        detail.push_str(&format!("[{plus}] = 0; "));
    }
    if q_minus_zero {
        deg = deg.combine(Degeneracy::Pole);
        detail.push_str(&format!("[{minus}] = 0 in denominator; "));
    }
    let g_plus = bracket_gamma(plus, kappa);
    let g_minus = bracket_gamma(minus, kappa);
    if let Err(p) = &g_plus {
        deg = deg.combine(Degeneracy::Pole);
        detail.push_str(&format!("⟦{plus}⟧ pole (x = {}κ); ", p.multiple));
    }
    if let Err(p) = &g_minus {
        deg = deg.combine(Degeneracy::Zero);
        detail.push_str(&format!("⟦{minus}⟧ pole in denominator (x = {}κ); ", p.multiple));
    }

    let value = match deg {
        Degeneracy::None => {
            let q = bracket_q(plus, kappa) / bracket_q(minus, kappa);
            let g = g_plus.unwrap() / g_minus.unwrap();
            q * g * g
        }
        Degeneracy::Zero => 0.0,
        Degeneracy::Pole => f64::INFINITY,
        Degeneracy::Indeterminate => f64::NAN,
    };
    FactorReport {
        label,
        plus_arg: plus,
        minus_arg: minus,
        value,
        degeneracy: deg,
        detail,
    }
}

fn assemble(
    factors: Vec<FactorReport>,
    source: NormSource,
    window_flag: Option<bool>,
) -> NormResult {
    let mut deg = Degeneracy::None;
    for f in &factors {
        deg = deg.combine(f.degeneracy);
    }
    let value = match deg {
        Degeneracy::None => factors.iter().map(|f| f.value).product(),
        Degeneracy::Zero => 0.0,
        Degeneracy::Pole => f64::INFINITY,
        Degeneracy::Indeterminate => f64::NAN,
    };
    NormResult {
        value,
        degeneracy: deg,
        source,
        error_estimate: 0.0,
        window_flag,
        factors,
    }
}

/// Exact bracket-argument pairs `(2j+1+i, 2j+1−i)`, `i = 1..k`, of the
/// closed-form product (always integers).
pub fn closed_form_arguments(j: HalfInt, k_spin: i64) -> Vec<(i64, i64)> {
    (1..=k_spin)
        .map(|i| (j.twice() + 1 + i, j.twice() + 1 - i))
        .collect()
}

/// The closed-form norm-squared product at real κ (no window
/// information; see [`norm_closed_form_at_level`] for integer level).
pub fn norm_closed_form(j: HalfInt, k_spin: i64, kappa: f64) -> Result<NormResult, CoreError> {
    if j.twice() < 0 || k_spin < 0 {
        return Err(CoreError::Domain(format!(
            "spins must be nonnegative, got j = {j}, k = {k_spin}"
        )));
    }
    check_kappa(kappa)?;
    let factors = closed_form_arguments(j, k_spin)
        .into_iter()
        .enumerate()
        .map(|(idx, (plus, minus))| {
            eval_factor(
                format!("i={}", idx + 1),
                plus as f64,
                minus as f64,
                kappa,
            )
        })
        .collect();
    Ok(assemble(factors, NormSource::ClosedForm, None))
}

/// Closed-form product at integer level K (`κ = K + 2`), with the
/// window flag `k ≤ 2j ≤ K−k` attached.
pub fn norm_closed_form_at_level(
    j: HalfInt,
    k_spin: i64,
    level: i64,
) -> Result<NormResult, CoreError> {
    if level < 0 {
        return Err(CoreError::Domain(format!("negative level {level}")));
    }
    let mut res = norm_closed_form(j, k_spin, (level + 2) as f64)?;
    res.window_flag = Some(integrability_window(level, j, k_spin));
    Ok(res)
}

/// The integer-level window `k ≤ 2j ≤ K − k` in which the level-K
/// intertwiner space is nonzero and the norm product is finite and
/// nonvanishing.
pub fn integrability_window(level: i64, j: HalfInt, k_spin: i64) -> bool {
    k_spin <= j.twice() && j.twice() <= level - k_spin
}

/// Ratio `‖Φ_{j1}‖²/‖Φ_{j2}‖²` of closed-form products — the
/// `c`-independent quantity.
pub fn norm_ratio(j1: HalfInt, j2: HalfInt, k_spin: i64, kappa: f64) -> Result<f64, CoreError> {
    let a = norm_closed_form(j1, k_spin, kappa)?;
    let b = norm_closed_form(j2, k_spin, kappa)?;
    if !a.degeneracy.is_clean() || !b.degeneracy.is_clean() {
        return Err(CoreError::Domain(format!(
            "norm ratio undefined: degenerate product at j = {} or j = {}",
            j1, j2
        )));
    }
    Ok(a.value / b.value)
}

/// `i`-range convention of the rank-n product (two conventions are in
/// circulation; see module docs).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjectureRange {
    /// `i = 1..k−1` (matches the displayed regularized comparison form).
    UpToKMinus1,
    /// `i = 1..k` (makes the `sl2` reduction coincide with
    /// [`norm_closed_form`] under `2j+1 = (α, λ+kρ)`).
    UpToK,
}

impl ConjectureRange {
    fn upper(self, k: i64) -> i64 {
        match self {
            ConjectureRange::UpToKMinus1 => k - 1,
            ConjectureRange::UpToK => k,
        }
    }
}

/// Exact bracket arguments `((α,λ+kρ)+i, (α,λ+kρ)−i)` of the rank-n
/// product over positive roots `α` and the chosen `i`-range.
pub fn conjecture_arguments(
    lambda: &Weight,
    k: i64,
    range: ConjectureRange,
) -> Result<Vec<(i64, i64)>, CoreError> {
    let n = lambda.rank_n();
    let rho_k = Weight::rho(n).times(k);
    let shifted = lambda.plus(&rho_k);
    let mut out = Vec::new();
    for alpha in positive_roots(n) {
        let pairing = root_weight_pairing(&alpha, &shifted);
        if !pairing.is_integer() {
            return Err(CoreError::Internal(format!(
                "non-integer root pairing {pairing} on an integral weight"
            )));
        }
        let p = pairing.to_integer();
        for i in 1..=range.upper(k) {
            out.push((p + i, p - i));
        }
    }
    Ok(out)
}

/// The rank-n norm product
/// `∏_{α>0} ∏_i ([(α,λ+kρ)+i]/[(α,λ+kρ)−i])·(⟦(α,λ+kρ)+i⟧/⟦(α,λ+kρ)−i⟧)²`
/// with `c ≡ 1`; for `sl_2` with the `1..k` range this reduces exactly
/// to [`norm_closed_form`] under the dictionary `2j+1 = (α, λ+kρ)`.
pub fn conjecture_norm(
    lambda: &Weight,
    k: i64,
    kappa: f64,
    range: ConjectureRange,
) -> Result<NormResult, CoreError> {
    if k < 1 {
        return Err(CoreError::Domain(format!(
            "rank-n product needs k ≥ 1, got {k}"
        )));
    }
    if lambda.labels().iter().any(|&a| a < 0) {
        return Err(CoreError::Domain("weight must be dominant".into()));
    }
    check_kappa(kappa)?;
    let n = lambda.rank_n();
    let roots = positive_roots(n);
    let per_root = range.upper(k).max(0) as usize;
    let args = conjecture_arguments(lambda, k, range)?;
    let factors = args
        .into_iter()
        .enumerate()
        .map(|(idx, (plus, minus))| {
            // per_root > 0 whenever any argument exists.
            let root_idx = idx.checked_div(per_root).unwrap_or(0);
            let i = idx.checked_rem(per_root).map_or(0, |r| r as i64 + 1);
            let alpha = &roots[root_idx];
            let (a, b) = root_as_pair(alpha);
            eval_factor(
                format!("α=e{}−e{}, i={}", a + 1, b + 1, i),
                plus as f64,
                minus as f64,
                kappa,
            )
        })
        .collect();
    Ok(assemble(factors, NormSource::Conjecture, None))
}

fn root_as_pair(alpha: &[crate::rootdata::Rat]) -> (usize, usize) {
    let mut a = 0;
    let mut b = 0;
    for (i, c) in alpha.iter().enumerate() {
        if *c.numer() > 0 {
            a = i;
        } else if *c.numer() < 0 {
            b = i;
        }
    }
    (a, b)
}

/// The classical (κ → ∞) limit product `∏_{i=1}^{k} (2j+1+i)/(2j+1−i)`.
pub fn classical_norm_product(j: HalfInt, k_spin: i64) -> Result<f64, CoreError> {
    let mut v = 1.0;
    for (plus, minus) in closed_form_arguments(j, k_spin) {
        if minus == 0 {
            return Err(CoreError::Domain(format!(
                "classical product has zero denominator at i = {}",
                plus - j.twice() - 1
            )));
        }
        v *= plus as f64 / minus as f64;
    }
    Ok(v)
}

/// The Γ-product evaluated in the large-κ regime (`κ ≥ 1e6`), where it
/// approaches [`classical_norm_product`] to `O(1/κ)`.
pub fn macdonald_limit(j: HalfInt, k_spin: i64, kappa_large: f64) -> Result<f64, CoreError> {
    if kappa_large < 1e6 {
        return Err(CoreError::Domain(format!(
            "large-κ evaluation requires κ ≥ 1e6, got {kappa_large}"
        )));
    }
    let res = norm_closed_form(j, k_spin, kappa_large)?;
    if !res.degeneracy.is_clean() {
        return Err(CoreError::Domain(format!(
            "product degenerate (k > 2j): {}",
            res.factors
                .iter()
                .find(|f| !f.degeneracy.is_clean())
                .map(|f| f.detail.clone())
                .unwrap_or_default()
        )));
    }
    Ok(res.value)
}
