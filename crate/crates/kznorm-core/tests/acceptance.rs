//! End-to-end acceptance checks for the toolkit.
//!
//! Each criterion prints exactly one line,
//! `criterion N (name): PASS — detail` or `criterion N (name): FAIL — detail`,
//! and the process exits nonzero if any criterion fails. Run via
//! `cargo test` (this target carries `harness = false`).

use std::time::Instant;

use kznorm_core::halfint::HalfInt;
use kznorm_core::kzflow::{connection_matrix, norm_via_kz, reduce_four_point, transport};
use kznorm_core::linalg::{eigh, Mat};
use kznorm_core::modular::{quantum_dimension, s_matrix, verify_modular_relations, verlinde_fusion};
use kznorm_core::norms::{
    classical_norm_product, closed_form_arguments, conjecture_arguments, conjecture_norm,
    integrability_window, macdonald_limit, norm_closed_form, norm_closed_form_at_level,
    ConjectureRange,
};
use kznorm_core::rootdata::{alcove_weights, conformal_weight, LevelContext, Weight};

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (max - min) / mean.abs()
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// |e^{2πi a} − e^{2πi b}| for real exponents.
fn unit_circle_distance(a: f64, b: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let dre = (two_pi * a).cos() - (two_pi * b).cos();
    let dim = (two_pi * a).sin() - (two_pi * b).sin();
    (dre * dre + dim * dim).sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

const KAPPAS: [f64; 2] = [7.3, 5.0 + std::f64::consts::SQRT_2];

fn criterion_kz_vs_gamma() -> Result<String, String> {
    let start = Instant::now();
    let mut worst_k1: f64 = 0.0;
    let mut worst_k2: f64 = 0.0;
    for &kappa in &KAPPAS {
        for (k_spin, twojs, tol) in [(1i64, vec![1i64, 2, 3], 1e-6), (2, vec![2, 3], 1e-4)] {
            let mut ratios = Vec::new();
            for twoj in twojs {
                let j = HalfInt::from_twice(twoj);
                let kz = norm_via_kz(j, k_spin, kappa, 1e-10)
                    .map_err(|e| format!("KZ extraction failed at 2j={twoj}, k={k_spin}, κ={kappa}: {e}"))?;
                let cf = norm_closed_form(j, k_spin, kappa)
                    .map_err(|e| format!("closed form failed at 2j={twoj}, k={k_spin}: {e}"))?;
                ratios.push(kz.norm.value / cf.value);
            }
            let dev = spread(&ratios);
            if dev >= tol {
                return Err(format!(
                    "numeric/closed-form ratio varies over j by {dev:.3e} (≥ {tol:.0e}) at k={k_spin}, κ={kappa}"
                ));
            }
            if k_spin == 1 {
                worst_k1 = worst_k1.max(dev);
            } else {
                worst_k2 = worst_k2.max(dev);
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 60.0 {
        return Err(format!("runtime {elapsed:.1}s exceeds the 60 s budget"));
    }
    Ok(format!(
        "ratio constant over j ∈ {{1/2,1,3/2}} to {worst_k1:.2e} (k=1) and over j ∈ {{1,3/2}} to {worst_k2:.2e} (k=2) at κ ∈ {{7.3, 5+√2}}; {elapsed:.2}s"
    ))
}

fn criterion_modular_relations() -> Result<String, String> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (n, max_level) in [(2usize, 8i64), (3, 4)] {
        for level in 1..=max_level {
            let ctx = LevelContext::with_level(n, level)
                .map_err(|e| format!("context n={n} K={level}: {e}"))?;
            let report = verify_modular_relations(&ctx)
                .map_err(|e| format!("relations n={n} K={level}: {e}"))?;
            let r = report.max_residual();
            if r >= 1e-12 {
                return Err(format!("residual {r:.3e} ≥ 1e-12 at n={n}, K={level}"));
            }
            worst = worst.max(r);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 1.0 {
        return Err(format!("runtime {elapsed:.2}s exceeds the 1 s budget"));
    }
    Ok(format!(
        "S symmetric-unitary, S² = C, (ST)³ = S² for n=2 K≤8 and n=3 K≤4; max residual {worst:.2e}; {elapsed:.3}s"
    ))
}

fn truncated_cg(t1: i64, t2: i64, t3: i64, level: i64) -> i64 {
    let lower = (t1 - t2).abs();
    let upper = (t1 + t2).min(2 * level - t1 - t2);
    (lower <= t3 && t3 <= upper && (t1 + t2 + t3) % 2 == 0) as i64
}

fn criterion_verlinde() -> Result<String, String> {
    let mut entries = 0usize;
    for level in 0..=8i64 {
        let ctx = LevelContext::with_level(2, level).map_err(|e| format!("context: {e}"))?;
        // Integrality to 1e-9 is enforced inside the Verlinde rounding;
        // an excess residual surfaces here as an error.
        let fusion = verlinde_fusion(&ctx).map_err(|e| format!("Verlinde at K={level}: {e}"))?;
        let m = fusion.size();
        let twice: Vec<i64> = fusion.labels.iter().map(|w| w.labels()[0]).collect();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let got = fusion.get(a, b, c);
                    let want = truncated_cg(twice[a], twice[b], twice[c], level);
                    if got != want {
                        return Err(format!(
                            "K={level}: N({},{} → {}) = {got}, truncated Clebsch–Gordan rule gives {want}",
                            twice[a], twice[b], twice[c]
                        ));
                    }
                    entries += 1;
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        let lhs: i64 = (0..m).map(|x| fusion.get(a, b, x) * fusion.get(x, c, d)).sum();
                        let rhs: i64 = (0..m).map(|y| fusion.get(b, c, y) * fusion.get(a, y, d)).sum();
                        if lhs != rhs {
                            return Err(format!(
                                "associativity fails at K={level}, labels ({a},{b},{c},{d}): {lhs} ≠ {rhs}"
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "{entries} fusion multiplicities (n=2, K≤8) integral to 1e-9, equal to the truncated Clebsch–Gordan rule, and exactly associative"
    ))
}

fn criterion_quantum_dimension() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    let mut count = 0usize;
    for level in 0..=8i64 {
        let ctx = LevelContext::with_level(2, level).map_err(|e| format!("context: {e}"))?;
        let s = s_matrix(&ctx).map_err(|e| format!("S at K={level}: {e}"))?;
        let labels = alcove_weights(&ctx).map_err(|e| format!("alcove: {e}"))?;
        for (i, w) in labels.iter().enumerate() {
            let ratio = s[(0, i)] / s[(0, 0)];
            let qd = quantum_dimension(w, &ctx).map_err(|e| format!("qdim: {e}"))?;
            let diff = (ratio.re - qd).abs().max(ratio.im.abs());
            if diff >= 1e-12 {
                return Err(format!(
                    "K={level}, label {:?}: S-ratio {} vs q-Weyl product {qd} differ by {diff:.3e}",
                    w.labels(),
                    ratio.re
                ));
            }
            worst = worst.max(diff);
            count += 1;
        }
    }
    Ok(format!(
        "{count} alcove weights (n=2, K≤8): q-number product matches S-column ratio; max deviation {worst:.2e}"
    ))
}

fn criterion_window() -> Result<String, String> {
    let mut count = 0usize;
    for level in 1..=10i64 {
        for k_spin in 0..=level {
            for twoj in 0..=level {
                let j = HalfInt::from_twice(twoj);
                let res = norm_closed_form_at_level(j, k_spin, level)
                    .map_err(|e| format!("product at K={level}, 2j={twoj}, k={k_spin}: {e}"))?;
                let clean = res.degeneracy.is_clean();
                let window = integrability_window(level, j, k_spin);
                if clean != window {
                    return Err(format!(
                        "K={level}, 2j={twoj}, k={k_spin}: product degeneracy = {:?} but window condition k ≤ 2j ≤ K−k = {window}",
                        res.degeneracy
                    ));
                }
                count += 1;
            }
        }
    }
    Ok(format!(
        "{count} (K, j, k) triples for K ≤ 10: product finite-and-nonvanishing ⇔ k ≤ 2j ≤ K−k, no exceptions"
    ))
}

fn criterion_macdonald() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    let mut worst_slope: f64 = -1.0;
    let mut fits = 0usize;
    let mut skipped = 0usize;
    for twoj in 0..=6i64 {
        for k_spin in 0..=3i64 {
            if k_spin > twoj {
                // Here both the classical product and the Γ-product
                // degenerate (zero denominator at i = 2j+1), so there is
                // no finite limit to compare.
                skipped += 1;
                continue;
            }
            let j = HalfInt::from_twice(twoj);
            let classical = classical_norm_product(j, k_spin)
                .map_err(|e| format!("classical product 2j={twoj}, k={k_spin}: {e}"))?;
            let v = macdonald_limit(j, k_spin, 1e8)
                .map_err(|e| format!("large-κ product 2j={twoj}, k={k_spin}: {e}"))?;
            let dev = (v / classical - 1.0).abs();
            if dev >= 1e-6 {
                return Err(format!(
                    "2j={twoj}, k={k_spin}: deviation {dev:.3e} ≥ 1e-6 at κ = 1e8"
                ));
            }
            worst = worst.max(dev);
            if k_spin >= 1 {
                let kappas = [1e6, 1e7, 1e8];
                let mut devs = [0.0; 3];
                for (i, &kap) in kappas.iter().enumerate() {
                    let vi = macdonald_limit(j, k_spin, kap)
                        .map_err(|e| format!("large-κ product: {e}"))?;
                    devs[i] = (vi / classical - 1.0).abs();
                }
                let slope = loglog_slope(&kappas, &devs);
                if (slope + 1.0).abs() > 0.2 {
                    return Err(format!(
                        "2j={twoj}, k={k_spin}: deviation slope {slope:.3} not within 20% of −1"
                    ));
                }
                if (slope + 1.0).abs() > (worst_slope + 1.0).abs() {
                    worst_slope = slope;
                }
                fits += 1;
            }
        }
    }
    Ok(format!(
        "max |Γ-product/classical − 1| = {worst:.2e} at κ=1e8 (j ≤ 3, k ≤ min(3, 2j)); {fits} log-log fits with slope within 20% of −1 (worst {worst_slope:.3}); {skipped} k > 2j pairs excluded (both sides degenerate)"
    ))
}

fn criterion_conjecture_reduction() -> Result<String, String> {
    let mut cases = 0usize;
    let mut skipped = 0usize;
    for twoj in 0..=6i64 {
        for k_spin in 1..=3i64 {
            // Dictionary: λ = (2j+1−k)·ω₁ makes (α, λ+kρ) = 2j+1.
            let label = twoj + 1 - k_spin;
            if label < 0 {
                skipped += 1;
                continue;
            }
            let j = HalfInt::from_twice(twoj);
            let lam = Weight::new(vec![label]);
            let conj_args = conjecture_arguments(&lam, k_spin, ConjectureRange::UpToK)
                .map_err(|e| format!("argument list: {e}"))?;
            let closed_args = closed_form_arguments(j, k_spin);
            if conj_args != closed_args {
                return Err(format!(
                    "2j={twoj}, k={k_spin}: integer argument lists differ: {conj_args:?} vs {closed_args:?}"
                ));
            }
            let va = conjecture_norm(&lam, k_spin, 7.3, ConjectureRange::UpToK)
                .map_err(|e| format!("rank-n product: {e}"))?
                .value;
            let vb = norm_closed_form(j, k_spin, 7.3)
                .map_err(|e| format!("closed form: {e}"))?
                .value;
            if va != vb {
                return Err(format!(
                    "2j={twoj}, k={k_spin}: evaluated products differ ({va} vs {vb}) despite identical arguments"
                ));
            }
            cases += 1;
        }
    }
    Ok(format!(
        "{cases} (j,k) pairs (j ≤ 3, k ≤ 3): sl2 reduction of the rank-n product has identical integer bracket arguments and bit-identical value; {skipped} pairs without a dominant dictionary weight excluded"
    ))
}

/// Connection matrix of the 2×2 reduced system from the classical Gauss
/// hypergeometric connection formulas, in the same eigenvector bases as
/// [`connection_matrix`].
fn gauss_hypergeometric_oracle(
    sys: &kznorm_core::kzflow::ReducedKzSystem,
) -> Result<Mat, String> {
    if sys.dim() != 2 {
        return Err("oracle requires a 2-dimensional reduced system".into());
    }
    let g = kznorm_core::gammaf::gamma;
    let kappa = sys.kappa();
    let d = sys.m0_eigenvalues();
    let lam = sys.m1_eigenvalues();
    let v0 = sys.m0_eigenvectors();
    let w = sys.m1_eigenvectors();
    let (eta, _) = eigh(&sys.m0().add(sys.m1()));
    let rho0 = d[0] / kappa;
    let rho1 = lam[0] / kappa;
    let a = rho0 + rho1 - eta[0] / kappa;
    let b = rho0 + rho1 - eta[1] / kappa;
    let c = (d[0] - d[1]) / kappa;
    let m1e = v0.transpose().mul(&sys.m1().mul(v0));
    let gam = -m1e[(0, 1)] / (kappa + d[1] - d[0]);
    let r1 = g(c) * g(c - a - b) / (g(c - a) * g(c - b));
    let r2 = g(c) * g(a + b - c) / (g(a) * g(b));
    let (ap, bp, cp) = (a - c + 1.0, b - c + 1.0, 2.0 - c);
    let r1p = g(cp) * g(cp - ap - bp) / (g(cp - ap) * g(cp - bp));
    let r2p = g(cp) * g(ap + bp - cp) / (g(ap) * g(bp));
    let w11 = dot(&v0.col(0), &w.col(0));
    let w21 = dot(&v0.col(0), &w.col(1));
    Ok(Mat::from_rows(&[
        &[r1 / w11, gam * r1p / w11],
        &[r2 / w21, gam * r2p / w21],
    ]))
}

fn criterion_kz_self_consistency() -> Result<String, String> {
    let tol = 1e-11;
    // (a) Round-trip transport equals the identity on the channel space.
    let mut worst_round: f64 = 0.0;
    for (twoj, k_spin) in [(1i64, 1i64), (3, 2)] {
        let sys = reduce_four_point(HalfInt::from_twice(twoj), k_spin, 7.3)
            .map_err(|e| format!("reduction 2j={twoj}, k={k_spin}: {e}"))?;
        let dim = sys.dim();
        for i in 0..dim {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            let fwd = transport(&sys, 0.15, 0.85, &e, tol)
                .map_err(|e| format!("forward transport: {e}"))?;
            let back = transport(&sys, 0.85, 0.15, &fwd, tol)
                .map_err(|e| format!("return transport: {e}"))?;
            for (l, &bl) in back.iter().enumerate() {
                let want = if l == i { 1.0 } else { 0.0 };
                worst_round = worst_round.max((bl - want).abs());
            }
        }
    }
    if worst_round > 10.0 * tol {
        return Err(format!(
            "round-trip transport deviates from the identity by {worst_round:.3e} > 10·tol"
        ));
    }

    // (b) Local monodromy eigenvalues at u = 0 match the twist data.
    let ctx = LevelContext::with_kappa(2, 7.3).map_err(|e| format!("context: {e}"))?;
    let mut worst_mono: f64 = 0.0;
    for (twoj, k_spin) in [(1i64, 1i64), (2, 1), (3, 1), (3, 2)] {
        let j = HalfInt::from_twice(twoj);
        let sys = reduce_four_point(j, k_spin, 7.3).map_err(|e| format!("reduction: {e}"))?;
        let exps = sys.exponents_at_zero();
        let twok = 2 * k_spin;
        let d_j = conformal_weight(&Weight::new(vec![twoj]), &ctx)
            .map_err(|e| format!("conformal weight: {e}"))?;
        let d_k = conformal_weight(&Weight::new(vec![twok]), &ctx)
            .map_err(|e| format!("conformal weight: {e}"))?;
        // Intermediate channels λ′ ascend with the exponents.
        let lo = (twoj - twok).abs();
        for (idx, e) in exps.iter().enumerate() {
            let twolp = lo + 2 * idx as i64;
            let d_lp = conformal_weight(&Weight::new(vec![twolp]), &ctx)
                .map_err(|e| format!("conformal weight: {e}"))?;
            let dist = unit_circle_distance(*e, d_lp - d_j - d_k);
            if dist >= 1e-8 {
                return Err(format!(
                    "2j={twoj}, k={k_spin}, channel 2λ′={twolp}: monodromy eigenvalue off by {dist:.3e}"
                ));
            }
            worst_mono = worst_mono.max(dist);
        }
    }

    // (c) The 2×2 connection matrix against the Gauss hypergeometric
    // connection-coefficient formulas.
    let mut worst_conn: f64 = 0.0;
    for &kappa in &KAPPAS {
        let sys = reduce_four_point(HalfInt::from_twice(1), 1, kappa)
            .map_err(|e| format!("reduction: {e}"))?;
        let conn = connection_matrix(&sys, tol).map_err(|e| format!("connection matrix: {e}"))?;
        let oracle = gauss_hypergeometric_oracle(&sys)?;
        let diff = conn.sub(&oracle).max_abs();
        if diff >= 1e-8 {
            return Err(format!(
                "connection matrix differs from the Gauss oracle by {diff:.3e} at κ={kappa}"
            ));
        }
        worst_conn = worst_conn.max(diff);
        if kappa == 7.3 {
            // Magnitude anchor frozen from an independent implementation
            // of the same matching (sign conventions factored out).
            let anchor = [[0.668428508, 0.7836549144], [0.7221726734, 0.6493825896]];
            for r in 0..2 {
                for cidx in 0..2 {
                    let got = conn[(r, cidx)].abs();
                    if (got - anchor[r][cidx]).abs() >= 1e-7 {
                        return Err(format!(
                            "connection entry ({r},{cidx}) magnitude {got:.10} differs from frozen anchor {:.10}",
                            anchor[r][cidx]
                        ));
                    }
                }
            }
        }
    }
    Ok(format!(
        "round-trip ≤ {worst_round:.2e} (10·tol = 1e-10); monodromy eigenvalues match twists to {worst_mono:.2e}; connection matrix matches the Gauss oracle to {worst_conn:.2e} at κ ∈ {{7.3, 5+√2}}"
    ))
}

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("KZ norm vs Γ-product ratio constancy", criterion_kz_vs_gamma),
        ("modular relations", criterion_modular_relations),
        ("Verlinde integrality and fusion oracle", criterion_verlinde),
        ("quantum dimension double computation", criterion_quantum_dimension),
        ("integrability window equivalence", criterion_window),
        ("Macdonald large-κ limit", criterion_macdonald),
        ("rank-n product sl2 reduction", criterion_conjecture_reduction),
        ("KZ analytic self-consistency", criterion_kz_self_consistency),
    ];
    let mut failed = false;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run)
            .unwrap_or_else(|_| Err("panicked (see stderr)".to_string()));
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS — {detail}", i + 1),
            Err(detail) => {
                failed = true;
                println!("criterion {} ({name}): FAIL — {detail}", i + 1);
            }
        }
    }
    if failed {
        std::process::exit(1);
    }
}
