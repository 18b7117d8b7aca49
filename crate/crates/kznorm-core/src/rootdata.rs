//! Root and weight arithmetic for the A-series Lie algebras `sl_n`.
//!
//! Weights are stored by their Dynkin labels and converted on demand to
//! orthogonal (ε-)coordinates, where the invariant bilinear form —
//! normalized so the highest root θ has `(θ,θ) = 2` — is the plain dot
//! product restricted to the sum-zero hyperplane. All lattice-level
//! quantities (inner products, conformal-weight numerators, root
//! pairings) are computed in exact rational arithmetic; floating point
//! appears only when dividing by a real deformation parameter κ.

use crate::error::CoreError;
use crate::halfint::HalfInt;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_rational::Ratio;

pub type Rat = Ratio<i64>;

/// A dominant integral weight of `sl_n`, stored by Dynkin labels
/// `a_1 … a_{n−1} ≥ 0` with `λ = Σ a_i ω_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    labels: Vec<i64>,
}

impl Weight {
    /// Build from Dynkin labels; `labels.len() = n−1`.
    pub fn new(labels: Vec<i64>) -> Self {
        Weight { labels }
    }

    /// The zero weight (vacuum) for `sl_n`.
    pub fn zero(n: usize) -> Self {
        Weight {
            labels: vec![0; n - 1],
        }
    }

    /// The Weyl vector ρ = Σ ω_i (all labels 1).
    pub fn rho(n: usize) -> Self {
        Weight {
            labels: vec![1; n - 1],
        }
    }

    /// For `sl2`: the weight `2j·ω₁` of the spin-`j` irreducible.
    pub fn from_spin(j: HalfInt) -> Self {
        Weight {
            labels: vec![j.twice()],
        }
    }

    /// For `sl2`: the spin `j` with `λ = 2j·ω₁`.
    pub fn spin(&self) -> HalfInt {
        debug_assert_eq!(self.labels.len(), 1);
        HalfInt::from_twice(self.labels[0])
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    /// Rank parameter `n` of `sl_n`.
    pub fn rank_n(&self) -> usize {
        self.labels.len() + 1
    }

    /// Pairing with the highest coroot, `⟨λ, θ∨⟩ = Σ a_i` for A-series.
    pub fn theta_pairing(&self) -> i64 {
        self.labels.iter().sum()
    }

    /// Orthogonal coordinates `(λ_1, …, λ_n)` with `Σ λ_l = 0`, from
    /// `ω_i = e_1 + … + e_i − (i/n)(e_1 + … + e_n)`.
    pub fn eps_coords(&self) -> Vec<Rat> {
        let n = self.rank_n();
        let mut coords = vec![Rat::new(0, 1); n];
        for (idx, &a) in self.labels.iter().enumerate() {
            let i = (idx + 1) as i64;
            for (l, c) in coords.iter_mut().enumerate() {
                let indicator = if (l as i64) < i { 1 } else { 0 };
                *c += Rat::new(a, 1) * (Rat::new(indicator, 1) - Rat::new(i, n as i64));
            }
        }
        coords
    }

    /// Sum of two weights of the same rank.
    pub fn plus(&self, other: &Weight) -> Weight {
        debug_assert_eq!(self.labels.len(), other.labels.len());
        Weight {
            labels: self
                .labels
                .iter()
                .zip(&other.labels)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Integer multiple.
    pub fn times(&self, s: i64) -> Weight {
        Weight {
            labels: self.labels.iter().map(|a| a * s).collect(),
        }
    }
}

/// Invariant bilinear form `(λ, μ)` in the `(θ,θ) = 2` normalization;
/// exact. For `sl2`, `(jα, j'α) = 2jj'`.
pub fn weight_inner_product(a: &Weight, b: &Weight) -> Result<Rat, CoreError> {
    if a.rank_n() != b.rank_n() {
        return Err(CoreError::Domain(format!(
            "weight rank mismatch: sl{} vs sl{}",
            a.rank_n(),
            b.rank_n()
        )));
    }
    let ca = a.eps_coords();
    let cb = b.eps_coords();
    Ok(ca.iter().zip(&cb).map(|(x, y)| x * y).sum())
}

/// Level/deformation context: `sl_n` at integer level `K` (then
/// `κ = K + n`) or directly at real `κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelContext {
    n: usize,
    level: Option<i64>,
    kappa: f64,
}

impl LevelContext {
    pub fn with_level(n: usize, level: i64) -> Result<Self, CoreError> {
        if n < 2 {
            return Err(CoreError::Domain(format!("rank parameter n={n} < 2")));
        }
        if level < 0 {
            return Err(CoreError::Domain(format!("negative level {level}")));
        }
        Ok(LevelContext {
            n,
            level: Some(level),
            kappa: (level + n as i64) as f64,
        })
    }

    pub fn with_kappa(n: usize, kappa: f64) -> Result<Self, CoreError> {
        if n < 2 {
            return Err(CoreError::Domain(format!("rank parameter n={n} < 2")));
        }
        if !(kappa != 0.0 && kappa.is_finite()) {
            return Err(CoreError::Domain(format!("invalid kappa {kappa}")));
        }
        Ok(LevelContext {
            n,
            level: None,
            kappa,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Integer level, if this context was built from one.
    pub fn level(&self) -> Option<i64> {
        self.level
    }

    /// The shifted level `κ` (`= K + h∨` in the integer case).
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Dual Coxeter number `h∨ = n` for A-series.
    pub fn dual_coxeter(&self) -> i64 {
        self.n as i64
    }
}

/// All dominant integral weights of level ≤ K (the level-K alcove),
/// sorted lexicographically by Dynkin labels.
pub fn alcove_weights(ctx: &LevelContext) -> Result<Vec<Weight>, CoreError> {
    let level = ctx.level().ok_or_else(|| {
        CoreError::Domain("alcove enumeration requires an integer level".into())
    })?;
    let rank = ctx.n() - 1;
    let mut out = Vec::new();
    let mut labels = vec![0i64; rank];
    enumerate(&mut labels, 0, level, &mut out);
    Ok(out)
}

fn enumerate(labels: &mut Vec<i64>, pos: usize, budget: i64, out: &mut Vec<Weight>) {
    if pos == labels.len() {
        out.push(Weight::new(labels.clone()));
        return;
    }
    for a in 0..=budget {
        labels[pos] = a;
        enumerate(labels, pos + 1, budget - a, out);
    }
    labels[pos] = 0;
}

/// Exact numerator `(λ, λ+2ρ)/2` of the conformal weight.
pub fn conformal_weight_numerator(lambda: &Weight) -> Rat {
    let n = lambda.rank_n();
    let shifted = lambda.plus(&Weight::rho(n).times(2));
    weight_inner_product(lambda, &shifted).expect("same rank by construction") / Rat::new(2, 1)
}

/// Conformal weight `Δ_λ = (λ, λ+2ρ)/(2κ)`; for `sl2` this is `j(j+1)/κ`.
pub fn conformal_weight(lambda: &Weight, ctx: &LevelContext) -> Result<f64, CoreError> {
    if lambda.rank_n() != ctx.n() {
        return Err(CoreError::Domain(format!(
            "weight is for sl{}, context for sl{}",
            lambda.rank_n(),
            ctx.n()
        )));
    }
    let num = conformal_weight_numerator(lambda);
    Ok(rat_f64(num) / ctx.kappa())
}

/// The dual (conjugate) weight `λ* = −w₀(λ)`: label reversal for
/// A-series; involutive; the identity for `sl2`.
pub fn dual_weight(lambda: &Weight) -> Weight {
    let mut labels = lambda.labels().to_vec();
    labels.reverse();
    Weight::new(labels)
}

/// Positive roots `e_a − e_b`, `a < b`, in ε-coordinates.
pub fn positive_roots(n: usize) -> Vec<Vec<Rat>> {
    let mut roots = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let mut r = vec![Rat::new(0, 1); n];
            r[a] = Rat::new(1, 1);
            r[b] = Rat::new(-1, 1);
            roots.push(r);
        }
    }
    roots
}

/// Pairing `(α, λ)` of a root in ε-coordinates with a weight; exact, and
/// an integer for integral weights.
pub fn root_weight_pairing(alpha: &[Rat], lambda: &Weight) -> Rat {
    lambda
        .eps_coords()
        .iter()
        .zip(alpha)
        .map(|(x, y)| x * y)
        .sum()
}

/// Convert an exact rational to `f64`.
pub fn rat_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
