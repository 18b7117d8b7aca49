//! Numerical transport along the reduced four-point KZ connection and
//! extraction of intertwiner norms from it.
//!
//! The four-point system lives on the invariant subspace
//! `W = Inv(V_j ⊗ V_k ⊗ V_k* ⊗ V_j*)` of a tensor product of `sl₂`
//! irreducibles, where the flat-section equation reduces to the Fuchsian
//! ODE
//!
//! ```text
//! κ f′(u) = (M₀/u + M₁/(u−1)) f(u),      0 < u < 1,
//! ```
//!
//! with `M₀ = Ω₀₁|_W` and `M₁ = Ω₁₂|_W` the restricted pair-exchange
//! operators. The norm pipeline expands the distinguished solution in a
//! Frobenius series at `u = 0` (seeded by a composition of
//! Clebsch–Gordan intertwiners), transports it across the interval with
//! an adaptive Dormand–Prince 5(4) integrator, matches against the
//! channel basis of Frobenius solutions at `u = 1`, and reads off the
//! coefficient of the invariant-pairing channel. That coefficient times
//! `√[2k+1]` is the squared intertwiner norm, up to a `j`-independent
//! normalization constant.
//!
//! Everything here is deterministic at fixed input: series lengths,
//! step-size decisions, and eigen-decompositions follow fixed-order
//! floating-point arithmetic with no randomness or time dependence.

use crate::error::CoreError;
use crate::halfint::HalfInt;
use crate::linalg::{eigh, lu_solve, Mat};
use crate::norms::{bracket_q, Degeneracy, NormResult, NormSource};
use crate::sl2rep::{cg_intertwiner, dual, dualize, irrep_unitary, TensorSystem};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Radius at which Frobenius expansions are matched against transported
/// solutions, both at `u = 0` (evaluation point `u = MATCH_RADIUS`) and
/// at `u = 1` (evaluation point `u = 1 − MATCH_RADIUS`).
pub const MATCH_RADIUS: f64 = 0.15;

/// Hard cap on Frobenius series length.
const SERIES_CAP: usize = 200;

/// Relative tail bound at the matching radius below which a series is
/// considered converged.
const SERIES_TAIL: f64 = 1e-12;

/// How close `(μ_b − μ_a)/κ` must be to a nonzero integer for the local
/// exponents to count as resonant.
const RESONANCE_TOL: f64 = 1e-9;

fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, &x| m.max(libm::fabs(x)))
}

/// The KZ system reduced to the invariant subspace, with both residue
/// matrices and their spectral data.
#[derive(Debug, Clone)]
pub struct ReducedKzSystem {
    j: HalfInt,
    k_spin: i64,
    kappa: f64,
    /// Orthonormal columns spanning `W` inside the full tensor product.
    basis: Mat,
    m0: Mat,
    m1: Mat,
    m0_eigs: Vec<f64>,
    m0_vecs: Mat,
    m1_eigs: Vec<f64>,
    m1_vecs: Mat,
}

impl ReducedKzSystem {
    pub fn dim(&self) -> usize {
        self.m0.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn k_spin(&self) -> i64 {
        self.k_spin
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn m0(&self) -> &Mat {
        &self.m0
    }

    pub fn m1(&self) -> &Mat {
        &self.m1
    }

    /// Eigenvalues of `M₀`, ascending.
    pub fn m0_eigenvalues(&self) -> &[f64] {
        &self.m0_eigs
    }

    /// Eigenvalues of `M₁`, ascending.
    pub fn m1_eigenvalues(&self) -> &[f64] {
        &self.m1_eigs
    }

    /// Unit eigenvectors of `M₀` (columns, matching
    /// [`Self::m0_eigenvalues`]).
    pub fn m0_eigenvectors(&self) -> &Mat {
        &self.m0_vecs
    }

    /// Unit eigenvectors of `M₁` (columns, matching
    /// [`Self::m1_eigenvalues`]).
    pub fn m1_eigenvectors(&self) -> &Mat {
        &self.m1_vecs
    }

    /// Local monodromy exponents at `u = 0`, ascending.
    pub fn exponents_at_zero(&self) -> Vec<f64> {
        self.m0_eigs.iter().map(|e| e / self.kappa).collect()
    }

    /// Local monodromy exponents at `u = 1`, ascending.
    pub fn exponents_at_one(&self) -> Vec<f64> {
        self.m1_eigs.iter().map(|e| e / self.kappa).collect()
    }

    fn ode_rhs(&self, u: f64, y: &[f64]) -> Vec<f64> {
        let a = self.m0.matvec(y);
        let b = self.m1.matvec(y);
        (0..y.len())
            .map(|i| (a[i] / u + b[i] / (u - 1.0)) / self.kappa)
            .collect()
    }
}

fn resonance_check(label: &str, eigs: &[f64], kappa: f64) -> Result<(), CoreError> {
    for (a, &mu_a) in eigs.iter().enumerate() {
        for &mu_b in eigs.iter().skip(a + 1) {
            let r = (mu_b - mu_a) / kappa;
            let m = libm::round(r);
            if m != 0.0 && libm::fabs(r - m) < RESONANCE_TOL {
                return Err(CoreError::Resonance(format!(
                    "resonant exponents at {label}: eigenvalues {mu_a} and {mu_b} \
                     differ by {m}·κ at κ = {kappa}"
                )));
            }
        }
    }
    Ok(())
}

/// Build the reduced system for `Inv(V_j ⊗ V_k ⊗ V_k* ⊗ V_j*)`.
///
/// Fails with `Resonance` when local exponents at either singular point
/// differ by a nonzero multiple of `κ` (the Frobenius channel bases
/// would then be incomplete), and with `Internal` when any structural
/// identity (symmetry of the restricted operators, the homogeneity sum
/// rule) is violated beyond tolerance.
pub fn reduce_four_point(
    j: HalfInt,
    k_spin: i64,
    kappa: f64,
) -> Result<ReducedKzSystem, CoreError> {
    if j.twice() < 0 || k_spin < 0 {
        return Err(CoreError::Domain(format!(
            "spins must be nonnegative, got j = {j}, k = {k_spin}"
        )));
    }
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(CoreError::Domain(format!(
            "deformation parameter must be positive and finite, got {kappa}"
        )));
    }
    let k_half = HalfInt::from_int(k_spin);
    let vj = irrep_unitary(j)?;
    let vk = irrep_unitary(k_half)?;
    let system = TensorSystem {
        factors: vec![vj.clone(), vk.clone(), dual(&vk), dual(&vj)],
    };
    let basis = system.invariant_subspace()?;
    if basis.cols() == 0 {
        return Err(CoreError::Internal(
            "invariant subspace of V_j ⊗ V_k ⊗ V_k* ⊗ V_j* is empty".into(),
        ));
    }
    let qt = basis.transpose();
    let restrict = |omega: &Mat| -> Result<Mat, CoreError> {
        let mut m = qt.mul(&omega.mul(&basis));
        let scale = m.max_abs().max(1.0);
        if m.asymmetry() > 1e-12 * scale {
            return Err(CoreError::Internal(format!(
                "restricted pair operator is not symmetric (asymmetry {:.3e})",
                m.asymmetry()
            )));
        }
        m.symmetrize();
        Ok(m)
    };
    let m0 = restrict(&system.pair_casimir(0, 1)?)?;
    let m1 = restrict(&system.pair_casimir(1, 2)?)?;
    let m02 = restrict(&system.pair_casimir(0, 2)?)?;

    // Homogeneity sum rule: Ω₀₁ + Ω₀₂ + Ω₁₂ = −C_k on W, with C_k the
    // quadratic Casimir of V_k.
    let ck = k_half.casimir();
    let dim = m0.rows();
    let mut total = m0.add(&m02).add(&m1);
    for i in 0..dim {
        total[(i, i)] += ck;
    }
    if total.max_abs() > 1e-10 * ck.max(1.0) {
        return Err(CoreError::Internal(format!(
            "homogeneity sum rule violated by {:.3e}",
            total.max_abs()
        )));
    }

    let (m0_eigs, m0_vecs) = eigh(&m0);
    let (m1_eigs, m1_vecs) = eigh(&m1);
    resonance_check("u = 0", &m0_eigs, kappa)?;
    resonance_check("u = 1", &m1_eigs, kappa)?;

    Ok(ReducedKzSystem {
        j,
        k_spin,
        kappa,
        basis,
        m0,
        m1,
        m0_eigs,
        m0_vecs,
        m1_eigs,
        m1_vecs,
    })
}

/// A vector-valued Frobenius solution `f(x) = x^e Σ_m a_m x^m` about a
/// regular singular point (`x` is the local coordinate: `u` at 0,
/// `1 − u` at 1).
#[derive(Debug, Clone)]
pub struct FrobeniusSeries {
    pub exponent: f64,
    /// Radius at which the tail bound was enforced.
    pub radius: f64,
    coeffs: Vec<Vec<f64>>,
}

impl FrobeniusSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Evaluate the series at `x > 0`.
    pub fn eval(&self, x: f64) -> Vec<f64> {
        let dim = self.coeffs[0].len();
        let mut acc = vec![0.0; dim];
        let mut xp = 1.0;
        for a in &self.coeffs {
            for i in 0..dim {
                acc[i] += a[i] * xp;
            }
            xp *= x;
        }
        let lead = libm::pow(x, self.exponent);
        acc.iter_mut().for_each(|v| *v *= lead);
        acc
    }

    /// Evaluate the term-by-term derivative at `x > 0`.
    pub fn eval_derivative(&self, x: f64) -> Vec<f64> {
        let dim = self.coeffs[0].len();
        let mut acc = vec![0.0; dim];
        let mut xp = 1.0;
        for (m, a) in self.coeffs.iter().enumerate() {
            let w = self.exponent + m as f64;
            for i in 0..dim {
                acc[i] += a[i] * w * xp;
            }
            xp *= x;
        }
        let lead = libm::pow(x, self.exponent - 1.0);
        acc.iter_mut().for_each(|v| *v *= lead);
        acc
    }
}

/// Solve the Frobenius recurrence
/// `[κ(e+m)·I − M_here]·a_m = −M_other·Σ_{l<m} a_l` starting from
/// `a_0 = v0`, truncating adaptively once the terms at `radius` fall
/// below the relative tail bound.
pub fn frobenius_series(
    m_here: &Mat,
    m_other: &Mat,
    kappa: f64,
    exponent: f64,
    v0: &[f64],
    radius: f64,
) -> Result<FrobeniusSeries, CoreError> {
    let dim = v0.len();
    let (here_eigs, _) = eigh(m_here);
    let scale0 = norm_inf(v0).max(1.0);
    let mut coeffs = vec![v0.to_vec()];
    let mut prefix = v0.to_vec();
    let mut small_run = 0usize;
    for m in 1..=SERIES_CAP {
        let target = kappa * (exponent + m as f64);
        let gap = here_eigs
            .iter()
            .fold(f64::INFINITY, |g, &mu| g.min(libm::fabs(target - mu)));
        if gap < 1e-10 * libm::fabs(target).max(1.0) {
            return Err(CoreError::Resonance(format!(
                "Frobenius denominator nearly singular at order {m}: \
                 κ(e+{m}) = {target} lies on the spectrum of the residue matrix"
            )));
        }
        let a = Mat::from_fn(dim, dim, |i, l| {
            let d = if i == l { target } else { 0.0 };
            d - m_here[(i, l)]
        });
        let rhs_v = m_other.matvec(&prefix);
        let neg: Vec<f64> = rhs_v.iter().map(|x| -x).collect();
        let sol = lu_solve(&a, &Mat::column(&neg))?;
        let am: Vec<f64> = (0..dim).map(|i| sol[(i, 0)]).collect();
        for i in 0..dim {
            prefix[i] += am[i];
        }
        let term = norm_inf(&am) * libm::pow(radius, m as f64);
        coeffs.push(am);
        if term <= SERIES_TAIL * scale0 {
            small_run += 1;
            if small_run >= 3 {
                return Ok(FrobeniusSeries {
                    exponent,
                    radius,
                    coeffs,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(CoreError::Numerical(format!(
        "Frobenius series did not reach its tail bound within {SERIES_CAP} terms \
         at radius {radius}"
    )))
}

// Dormand–Prince 5(4) tableau.
const DP_C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order weights (the last row of DP_A is the propagating solution)
// minus the embedded fourth-order weights, for the error estimate.
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Transport a solution vector of the reduced KZ equation from `u = a`
/// to `u = b` (both strictly inside the unit interval, either
/// direction) with an adaptive embedded Runge–Kutta 5(4) integrator at
/// absolute and relative tolerance `tol`.
pub fn transport(
    sys: &ReducedKzSystem,
    a: f64,
    b: f64,
    y0: &[f64],
    tol: f64,
) -> Result<Vec<f64>, CoreError> {
    if !(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0) {
        return Err(CoreError::Domain(format!(
            "transport endpoints must lie strictly inside (0, 1), got ({a}, {b})"
        )));
    }
    if !(1e-13..=1e-2).contains(&tol) {
        return Err(CoreError::Domain(format!(
            "transport tolerance must lie in [1e-13, 1e-2], got {tol}"
        )));
    }
    if y0.len() != sys.dim() {
        return Err(CoreError::Domain(format!(
            "transport vector has length {}, expected {}",
            y0.len(),
            sys.dim()
        )));
    }
    if a == b {
        return Ok(y0.to_vec());
    }
    let dim = sys.dim();
    let dir = if b > a { 1.0 } else { -1.0 };
    let span = libm::fabs(b - a);
    let mut t = a;
    let mut y = y0.to_vec();
    let mut h = dir * span / 100.0;
    let mut evaluations = 0usize;
    while (b - t) * dir > 1e-14 * span {
        if (t + h - b) * dir > 0.0 {
            h = b - t;
        }
        let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
        k.push(sys.ode_rhs(t, &y));
        for s in 0..6 {
            let mut ys = y.clone();
            for (si, ks) in k.iter().enumerate() {
                let w = h * DP_A[s][si];
                for i in 0..dim {
                    ys[i] += w * ks[i];
                }
            }
            k.push(sys.ode_rhs(t + DP_C[s] * h, &ys));
        }
        // The stage-6 state is the fifth-order solution.
        let mut y_new = y.clone();
        for (si, ks) in k.iter().take(6).enumerate() {
            let w = h * DP_A[5][si];
            for i in 0..dim {
                y_new[i] += w * ks[i];
            }
        }
        let mut err_sq = 0.0;
        for i in 0..dim {
            let mut e = 0.0;
            for (si, ks) in k.iter().enumerate() {
                e += DP_E[si] * ks[i];
            }
            e *= h;
            let sc = tol * (1.0 + libm::fabs(y[i]).max(libm::fabs(y_new[i])));
            err_sq += (e / sc) * (e / sc);
        }
        let err_norm = libm::sqrt(err_sq / dim as f64);
        if err_norm <= 1.0 {
            t += h;
            y = y_new;
        }
        let factor = (0.9 * libm::pow(err_norm.max(1e-16), -0.2)).clamp(0.2, 10.0);
        h *= factor;
        if libm::fabs(h) < 1e-14 * span {
            return Err(CoreError::Numerical(
                "transport step size underflow".into(),
            ));
        }
        evaluations += 1;
        if evaluations > 1_000_000 {
            return Err(CoreError::Numerical(
                "transport exceeded the step budget".into(),
            ));
        }
    }
    Ok(y)
}

/// Result of the full KZ norm extraction.
#[derive(Debug, Clone)]
pub struct KzNorm {
    /// The extracted pairing value `A·√[2k+1]` with provenance (a
    /// positive squared norm when `2j+1+k < κ`).
    pub norm: NormResult,
    /// The raw coefficient `A` of the invariant-pairing channel.
    pub coefficient: f64,
    /// Dimension of the reduced system.
    pub reduced_dim: usize,
    /// Transport tolerance that was used.
    pub tolerance: f64,
}

fn project_checked(
    basis: &Mat,
    qt: &Mat,
    ambient: &[f64],
    what: &str,
) -> Result<Vec<f64>, CoreError> {
    let coords = qt.matvec(ambient);
    let back = basis.matvec(&coords);
    let mut diff = 0.0;
    for i in 0..ambient.len() {
        let d = back[i] - ambient[i];
        diff += d * d;
    }
    let rel = libm::sqrt(diff) / norm2(ambient).max(1e-300);
    if rel > 1e-10 {
        return Err(CoreError::Internal(format!(
            "{what} does not lie in the invariant subspace (relative defect {rel:.3e})"
        )));
    }
    Ok(coords)
}

fn eigen_residual(m: &Mat, v: &[f64], lam: f64) -> f64 {
    let mv = m.matvec(v);
    let mut diff = 0.0;
    for i in 0..v.len() {
        let d = mv[i] - lam * v[i];
        diff += d * d;
    }
    libm::sqrt(diff) / norm2(v).max(1e-300)
}

/// Extract the squared norm of the level-generic intertwiner
/// `Φ : V_j → V_j ⊗ V_k` from the KZ connection.
///
/// The value is `A·√[2k+1]` where `A` is the coefficient of the
/// invariant-pairing channel at `u = 1` in the solution seeded by
/// `(g ⊗ 1)∘g°` at `u = 0`; it agrees with the closed-form Γ-product up
/// to one `j`-independent constant per `(k, κ)`. The pairing is a true
/// (positive) squared norm only for `2j+1+k < κ`; beyond that range the
/// hermitian form is indefinite and the extracted value tracks the sign
/// of the continued product.
pub fn norm_via_kz(
    j: HalfInt,
    k_spin: i64,
    kappa: f64,
    tol: f64,
) -> Result<KzNorm, CoreError> {
    let sys = reduce_four_point(j, k_spin, kappa)?;
    let k_half = HalfInt::from_int(k_spin);
    let dq = bracket_q((k_half.twice() + 1) as f64, kappa);
    if dq.is_nan() || dq <= 0.0 {
        return Err(CoreError::Domain(format!(
            "quantum dimension [2k+1] = {dq} must be positive at κ = {kappa}"
        )));
    }

    // Seed tensor (g ⊗ 1)∘g° with g normalized to unit coefficient of
    // v_j ⊗ u on the highest-weight vector.
    let g = cg_intertwiner(j, k_half, j)?;
    let go = dualize(&g);
    let dj = j.dimension();
    let dk = k_half.dimension();
    let ambient = dj * dj * dk * dk;
    let mut psi = vec![0.0; ambient];
    for x in 0..dj {
        for y in 0..dk {
            for c in 0..dk {
                for b in 0..dj {
                    let mut acc = 0.0;
                    for s in 0..dj {
                        acc += g.matrix[(x * dk + y, s)] * go.matrix[(s * dk + c, b)];
                    }
                    psi[((x * dk + y) * dk + c) * dj + b] = acc;
                }
            }
        }
    }
    // Invariant-pairing tensor τ[x,y,c,b] = δ_{xb} δ_{yc}.
    let mut tau = vec![0.0; ambient];
    for x in 0..dj {
        for y in 0..dk {
            tau[((x * dk + y) * dk + y) * dj + x] = 1.0;
        }
    }

    let qt = sys.basis.transpose();
    let seed = project_checked(&sys.basis, &qt, &psi, "seed tensor")?;
    let target = project_checked(&sys.basis, &qt, &tau, "pairing tensor")?;

    let ck = k_half.casimir();
    let seed_eig = -ck / 2.0;
    let target_eig = -ck;
    if eigen_residual(&sys.m0, &seed, seed_eig) > 1e-8 {
        return Err(CoreError::Internal(
            "seed tensor is not an eigenvector of the u = 0 residue matrix".into(),
        ));
    }
    if eigen_residual(&sys.m1, &target, target_eig) > 1e-8 {
        return Err(CoreError::Internal(
            "pairing tensor is not an eigenvector of the u = 1 residue matrix".into(),
        ));
    }

    // Expand the seeded solution at u = 0 and carry it across.
    let seed_series = frobenius_series(
        &sys.m0,
        &sys.m1,
        kappa,
        seed_eig / kappa,
        &seed,
        MATCH_RADIUS,
    )?;
    let f_left = seed_series.eval(MATCH_RADIUS);
    let f_right = transport(&sys, MATCH_RADIUS, 1.0 - MATCH_RADIUS, &f_left, tol)?;

    // Channel basis at u = 1; the invariant-pairing channel uses the
    // projected pairing tensor itself so that its coefficient carries
    // the normalization.
    let dim = sys.dim();
    let mut pairing_channel = None;
    let mut bmat = Mat::zeros(dim, dim);
    for l in 0..dim {
        let lam = sys.m1_eigs[l];
        let is_pairing = libm::fabs(lam - target_eig) < 1e-8 * ck.max(1.0);
        let v = if is_pairing {
            if pairing_channel.is_some() {
                return Err(CoreError::Internal(
                    "invariant-pairing exponent is degenerate at u = 1".into(),
                ));
            }
            pairing_channel = Some(l);
            target.clone()
        } else {
            sys.m1_vecs.col(l)
        };
        let ser = frobenius_series(&sys.m1, &sys.m0, kappa, lam / kappa, &v, MATCH_RADIUS)?;
        bmat.set_col(l, &ser.eval(MATCH_RADIUS));
    }
    let pairing_channel = pairing_channel.ok_or_else(|| {
        CoreError::Internal("no invariant-pairing channel found at u = 1".into())
    })?;

    let gamma = lu_solve(&bmat, &Mat::column(&f_right))?;
    let coefficient = gamma[(pairing_channel, 0)];
    let value = coefficient * libm::sqrt(dq);
    // The continued pairing is positive for 2j+1+k < κ and legitimately
    // changes sign beyond that, so only reject values too close to zero
    // to be resolved at the working tolerance.
    if !value.is_finite() || libm::fabs(value) <= (1000.0 * tol).max(1e-10) {
        return Err(CoreError::Numerical(format!(
            "extracted pairing value {value} is not resolved at tolerance {tol}"
        )));
    }
    let error_estimate = (200.0 * tol).max(1e-11) * libm::fabs(value).max(1.0);
    Ok(KzNorm {
        norm: NormResult {
            value,
            degeneracy: Degeneracy::None,
            source: NormSource::KzNumeric,
            error_estimate,
            window_flag: None,
            factors: Vec::new(),
        },
        coefficient,
        reduced_dim: dim,
        tolerance: tol,
    })
}

/// Full connection matrix between the unit-eigenvector Frobenius bases
/// at `u = 0` and `u = 1`: column `a` holds the expansion coefficients,
/// in the `u = 1` channel basis, of the solution that is asymptotically
/// the `a`-th `u = 0` channel.
pub fn connection_matrix(sys: &ReducedKzSystem, tol: f64) -> Result<Mat, CoreError> {
    let dim = sys.dim();
    let mut bmat = Mat::zeros(dim, dim);
    for l in 0..dim {
        let v = sys.m1_vecs.col(l);
        let ser = frobenius_series(
            &sys.m1,
            &sys.m0,
            sys.kappa,
            sys.m1_eigs[l] / sys.kappa,
            &v,
            MATCH_RADIUS,
        )?;
        bmat.set_col(l, &ser.eval(MATCH_RADIUS));
    }
    let mut conn = Mat::zeros(dim, dim);
    for a in 0..dim {
        let v = sys.m0_vecs.col(a);
        let ser = frobenius_series(
            &sys.m0,
            &sys.m1,
            sys.kappa,
            sys.m0_eigs[a] / sys.kappa,
            &v,
            MATCH_RADIUS,
        )?;
        let f_left = ser.eval(MATCH_RADIUS);
        let f_right = transport(sys, MATCH_RADIUS, 1.0 - MATCH_RADIUS, &f_left, tol)?;
        let gamma = lu_solve(&bmat, &Mat::column(&f_right))?;
        for l in 0..dim {
            conn[(l, a)] = gamma[(l, 0)];
        }
    }
    Ok(conn)
}
