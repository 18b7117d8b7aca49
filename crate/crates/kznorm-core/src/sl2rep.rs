//! Finite-dimensional `sl2` representations, tensor products, invariants,
//! and intertwiners.
//!
//! Two concrete models of the spin-`j` irreducible are provided:
//!
//! * [`irrep`] — the integer-entry weight-basis model (`F` shifts basis
//!   vectors with unit coefficient), convenient for exact spot checks;
//! * [`irrep_unitary`] — the symmetric model with `F = Eᵀ`, in which all
//!   pair Casimir operators are real symmetric matrices and orthonormal
//!   invariant bases behave well numerically.
//!
//! All tensor-product machinery (total/slot actions, pair Casimirs,
//! invariant subspaces, intertwiner solving) is model-agnostic, but the
//! analytic pipeline in [`crate::kzflow`] builds everything in the
//! unitary model. Duals are always realized concretely on the dual basis
//! (`X ↦ −Xᵀ`); no self-dual identification is ever applied implicitly.

use crate::error::CoreError;
use crate::halfint::HalfInt;
use crate::linalg::{self, Mat};
use alloc::format;
use alloc::vec::Vec;

/// One `sl2` representation, given by its generator matrices.
#[derive(Debug, Clone)]
pub struct SpinRep {
    /// Spin label; for a dual model this is the spin of the underlying
    /// irreducible.
    pub j: HalfInt,
    pub e: Mat,
    pub f: Mat,
    pub h: Mat,
    /// Whether this is the dual (contragredient) model.
    pub dual: bool,
}

impl SpinRep {
    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    /// Largest residual of the defining relations
    /// `[H,E] − 2E`, `[H,F] + 2F`, `[E,F] − H`.
    pub fn relation_residual(&self) -> f64 {
        let he = self.h.mul(&self.e).sub(&self.e.mul(&self.h));
        let hf = self.h.mul(&self.f).sub(&self.f.mul(&self.h));
        let ef = self.e.mul(&self.f).sub(&self.f.mul(&self.e));
        he.sub(&self.e.scale(2.0))
            .max_abs()
            .max(hf.add(&self.f.scale(2.0)).max_abs())
            .max(ef.sub(&self.h).max_abs())
    }
}

/// Generator selector for tensor-product actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    E,
    F,
    H,
}

/// Spin-`j` irreducible in the integer weight-basis model: basis
/// `e_0, …, e_{2j}` of weights `2j, 2j−2, …, −2j`, with
/// `F e_m = e_{m+1}`, `E e_m = m(2j+1−m)·e_{m−1}`, `H` diagonal.
pub fn irrep(j: HalfInt) -> Result<SpinRep, CoreError> {
    rep_matrices(j, false)
}

/// Spin-`j` irreducible in the symmetric model:
/// `E e_m = √(m(2j+1−m))·e_{m−1}`, `F = Eᵀ`, same `H`.
pub fn irrep_unitary(j: HalfInt) -> Result<SpinRep, CoreError> {
    rep_matrices(j, true)
}

fn rep_matrices(j: HalfInt, unitary: bool) -> Result<SpinRep, CoreError> {
    if j.twice() < 0 {
        return Err(CoreError::Domain(format!("negative spin {j}")));
    }
    let twoj = j.twice();
    let n = j.dimension();
    let mut e = Mat::zeros(n, n);
    let mut f = Mat::zeros(n, n);
    let mut h = Mat::zeros(n, n);
    for m in 0..n {
        h[(m, m)] = (twoj - 2 * m as i64) as f64;
    }
    for m in 1..n {
        let c = (m as i64 * (twoj + 1 - m as i64)) as f64;
        if unitary {
            let s = libm::sqrt(c);
            e[(m - 1, m)] = s;
            f[(m, m - 1)] = s;
        } else {
            e[(m - 1, m)] = c;
            f[(m, m - 1)] = 1.0;
        }
    }
    Ok(SpinRep {
        j,
        e,
        f,
        h,
        dual: false,
    })
}

/// Dual (contragredient) representation on the dual basis: `X ↦ −Xᵀ`.
pub fn dual(rep: &SpinRep) -> SpinRep {
    SpinRep {
        j: rep.j,
        e: rep.e.transpose().scale(-1.0),
        f: rep.f.transpose().scale(-1.0),
        h: rep.h.transpose().scale(-1.0),
        dual: !rep.dual,
    }
}

/// An ordered tensor product of `sl2` representations.
#[derive(Debug, Clone)]
pub struct TensorSystem {
    pub factors: Vec<SpinRep>,
}

impl TensorSystem {
    pub fn new(factors: Vec<SpinRep>) -> Self {
        TensorSystem { factors }
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|r| r.dim()).product()
    }

    fn gen_mat(&self, i: usize, gen: Gen) -> &Mat {
        match gen {
            Gen::E => &self.factors[i].e,
            Gen::F => &self.factors[i].f,
            Gen::H => &self.factors[i].h,
        }
    }

    /// `1 ⊗ … ⊗ X ⊗ … ⊗ 1` with `X` in slot `i` (row-major Kronecker
    /// index order, slot 0 slowest).
    pub fn slot_op(&self, i: usize, x: &Mat) -> Mat {
        assert!(i < self.factors.len(), "slot index out of range");
        let mut out = Mat::identity(1);
        for (s, rep) in self.factors.iter().enumerate() {
            if s == i {
                out = out.kron(x);
            } else {
                out = out.kron(&Mat::identity(rep.dim()));
            }
        }
        out
    }

    /// Total action `Σ_i X^{(i)}` of one generator.
    pub fn total(&self, gen: Gen) -> Mat {
        let d = self.dim();
        let mut out = Mat::zeros(d, d);
        for i in 0..self.factors.len() {
            out = out.add(&self.slot_op(i, self.gen_mat(i, gen)));
        }
        out
    }

    /// Pair Casimir `Ω_il = E^{(i)}F^{(l)} + F^{(i)}E^{(l)} + ½H^{(i)}H^{(l)}`,
    /// the invariant element in the `(e,f) = 1`, `(h,h) = 2` dual-basis
    /// pairing, acting in slots `i` and `l`.
    pub fn pair_casimir(&self, i: usize, l: usize) -> Result<Mat, CoreError> {
        if i == l || i >= self.factors.len() || l >= self.factors.len() {
            return Err(CoreError::Domain(format!(
                "pair_casimir needs two distinct valid slots, got ({i}, {l})"
            )));
        }
        let ei = self.slot_op(i, self.gen_mat(i, Gen::E));
        let fi = self.slot_op(i, self.gen_mat(i, Gen::F));
        let hi = self.slot_op(i, self.gen_mat(i, Gen::H));
        let el = self.slot_op(l, self.gen_mat(l, Gen::E));
        let fl = self.slot_op(l, self.gen_mat(l, Gen::F));
        let hl = self.slot_op(l, self.gen_mat(l, Gen::H));
        Ok(ei.mul(&fl).add(&fi.mul(&el)).add(&hi.mul(&hl).scale(0.5)))
    }

    /// Diagonal of the total `H` action (slot-wise weight sums).
    fn weight_diagonal(&self) -> Vec<i64> {
        let dims: Vec<usize> = self.factors.iter().map(|r| r.dim()).collect();
        let d = self.dim();
        let mut out = Vec::with_capacity(d);
        for flat in 0..d {
            let mut rem = flat;
            let mut w = 0i64;
            for (s, &ds) in dims.iter().enumerate().rev() {
                let idx = rem % ds;
                rem /= ds;
                w += self.factors[s].h[(idx, idx)] as i64;
                let _ = s;
            }
            out.push(w);
        }
        out
    }

    /// Orthonormal basis (columns) of the joint kernel of the total `E`,
    /// `F`, `H` actions — the invariant subspace of the tensor product.
    ///
    /// Computed on the zero-weight subspace, where the kernel of the
    /// total `E` alone already consists of invariants; the full `E/F/H`
    /// residuals are then verified and a violation is reported as an
    /// internal error.
    pub fn invariant_subspace(&self) -> Result<Mat, CoreError> {
        let d = self.dim();
        let weights = self.weight_diagonal();
        let zero_idx: Vec<usize> = (0..d).filter(|&i| weights[i] == 0).collect();
        if zero_idx.is_empty() {
            return Ok(Mat::zeros(d, 0));
        }
        let e_tot = self.total(Gen::E);
        let e_sub = Mat::from_fn(d, zero_idx.len(), |r, c| e_tot[(r, zero_idx[c])]);
        let kernel = linalg::nullspace(&e_sub, 1e-9);
        let mut q = Mat::zeros(d, kernel.cols());
        for c in 0..kernel.cols() {
            for (r_sub, &r_full) in zero_idx.iter().enumerate() {
                q[(r_full, c)] = kernel[(r_sub, c)];
            }
        }
        for gen in [Gen::E, Gen::F, Gen::H] {
            let resid = self.total(gen).mul(&q).max_abs();
            if resid > 1e-10 {
                return Err(CoreError::Internal(format!(
                    "invariant basis fails {gen:?}-invariance with residual {resid:.3e}"
                )));
            }
        }
        Ok(q)
    }
}

/// A concrete `sl2` intertwiner `V_j → V_{j1} ⊗ V_{j2(*)}`, stored as a
/// dense `(d1·d2) × d` matrix over the row-major tensor basis.
#[derive(Debug, Clone)]
pub struct Intertwiner {
    pub source: HalfInt,
    pub target1: HalfInt,
    pub target2: HalfInt,
    /// Whether the second target factor is the dual model `V*`.
    pub target2_dual: bool,
    pub matrix: Mat,
    /// Human-readable normalization tag.
    pub normalization: &'static str,
}

impl Intertwiner {
    /// Entry `⟨e_{a} ⊗ e_{b}, g(e_{s})⟩` of the intertwiner matrix.
    pub fn coeff(&self, a: usize, b: usize, s: usize) -> f64 {
        let d2 = self.target2.dimension();
        self.matrix[(a * d2 + b, s)]
    }
}

/// The (projectively unique) intertwiner `g: V_j → V_{j1} ⊗ V_{j2}` in
/// the unitary model, solved from the generator-commutation equations.
///
/// When `j1 = j` and `j2 = k` is an integer spin, the result is scaled so
/// that the coefficient of `v_j ⊗ u` in `g(v_j)` equals 1, where `v_j` is
/// the highest-weight vector and `u` the weight-zero basis vector of
/// `V_k`; otherwise a deterministic unit-norm scaling is applied.
pub fn cg_intertwiner(j1: HalfInt, j2: HalfInt, j: HalfInt) -> Result<Intertwiner, CoreError> {
    let triangle = (j1 - j2).twice().abs() <= j.twice() && j.twice() <= (j1 + j2).twice();
    let parity = (j1 + j2 + j).is_integer();
    if !triangle || !parity {
        return Err(CoreError::NoIntertwiner(format!(
            "({j1}, {j2}; {j}) violates the triangle/parity selection rule"
        )));
    }
    if j2.twice() == 0 {
        // Tensoring with the trivial representation: the intertwiner is
        // exactly the identity (triangle already forces j1 = j), and
        // producing it directly keeps k = 0 pipelines bit-exact.
        let out = Intertwiner {
            source: j,
            target1: j1,
            target2: j2,
            target2_dual: false,
            matrix: Mat::identity(j.dimension()),
            normalization: "unit coefficient of v_j⊗u on the highest-weight vector",
        };
        debug_assert_eq!(intertwining_residual(&out)?, 0.0);
        return Ok(out);
    }
    let r1 = irrep_unitary(j1)?;
    let r2 = irrep_unitary(j2)?;
    let r = irrep_unitary(j)?;
    let (d1, d2, d) = (r1.dim(), r2.dim(), r.dim());
    let mut stacked = Mat::zeros(3 * d1 * d2 * d, d1 * d2 * d);
    for (gi, gen) in [Gen::E, Gen::F, Gen::H].into_iter().enumerate() {
        let xt = pick(&r1, gen)
            .kron(&Mat::identity(d2))
            .add(&Mat::identity(d1).kron(pick(&r2, gen)));
        let xs = pick(&r, gen);
        // Row-major vec(G): (Xt·G − G·Xs) ↦ (Xt ⊗ I − I ⊗ Xsᵀ)·vec(G).
        let block = xt
            .kron(&Mat::identity(d))
            .sub(&Mat::identity(d1 * d2).kron(&xs.transpose()));
        for rr in 0..block.rows() {
            for cc in 0..block.cols() {
                stacked[(gi * d1 * d2 * d + rr, cc)] = block[(rr, cc)];
            }
        }
    }
    let ns = linalg::nullspace(&stacked, 1e-9);
    if ns.cols() != 1 {
        return Err(CoreError::Internal(format!(
            "intertwiner space ({j1}, {j2}; {j}) has numerical dimension {}, expected 1",
            ns.cols()
        )));
    }
    let mut g = Mat::from_fn(d1 * d2, d, |rr, cc| ns[(rr * d + cc, 0)]);
    let normalization;
    if j1 == j && j2.is_integer() {
        // u = weight-zero basis vector of V_k, at index k.
        let u_idx = (j2.twice() / 2) as usize;
        let coeff = g[(u_idx, 0)];
        if libm::fabs(coeff) < 1e-12 {
            return Err(CoreError::Internal(format!(
                "vanishing highest-weight normalization coefficient for ({j1}, {j2}; {j})"
            )));
        }
        g = g.scale(1.0 / coeff);
        normalization = "unit coefficient of v_j⊗u on the highest-weight vector";
    } else {
        let mut flat: Vec<f64> = g.data().to_vec();
        linalg::fix_sign(&mut flat);
        let norm = libm::sqrt(flat.iter().map(|x| x * x).sum());
        g = Mat::from_fn(d1 * d2, d, |rr, cc| flat[rr * d + cc] / norm);
        normalization = "unit Frobenius norm, leading entry positive";
    }
    let out = Intertwiner {
        source: j,
        target1: j1,
        target2: j2,
        target2_dual: false,
        matrix: g,
        normalization,
    };
    let resid = intertwining_residual(&out)?;
    if resid > 1e-10 {
        return Err(CoreError::Internal(format!(
            "intertwiner residual {resid:.3e} for ({j1}, {j2}; {j})"
        )));
    }
    Ok(out)
}

fn pick(rep: &SpinRep, gen: Gen) -> &Mat {
    match gen {
        Gen::E => &rep.e,
        Gen::F => &rep.f,
        Gen::H => &rep.h,
    }
}

/// Largest generator-commutation residual `‖X_target·g − g·X_source‖` of
/// an intertwiner, with the target action built from the stored
/// (possibly dual) factor models.
pub fn intertwining_residual(g: &Intertwiner) -> Result<f64, CoreError> {
    let r1 = irrep_unitary(g.target1)?;
    let r2_plain = irrep_unitary(g.target2)?;
    let r2 = if g.target2_dual {
        dual(&r2_plain)
    } else {
        r2_plain
    };
    let rs = irrep_unitary(g.source)?;
    let (d1, d2) = (r1.dim(), r2.dim());
    let mut worst: f64 = 0.0;
    for gen in [Gen::E, Gen::F, Gen::H] {
        let xt = pick(&r1, gen)
            .kron(&Mat::identity(d2))
            .add(&Mat::identity(d1).kron(pick(&r2, gen)));
        let xs = pick(&rs, gen);
        worst = worst.max(xt.mul(&g.matrix).sub(&g.matrix.mul(xs)).max_abs());
    }
    Ok(worst)
}

/// Hom-space flip `g ↦ g^o`: from `g: V_λ → V_μ ⊗ V_ν` produce
/// `g^o: V_μ → V_λ ⊗ V_ν*` with matrix components
/// `g^o[(a,c), b] = g[(b,c), a]`.
///
/// The second target is realized concretely on the dual basis. In the
/// real symmetric model the conjugation involution acts trivially on
/// matrices, so this flip is the whole construction; applied twice it
/// returns the original map on the nose (double-dual identification is
/// the identity of index bookkeeping here).
pub fn dualize(g: &Intertwiner) -> Intertwiner {
    let d_lam = g.source.dimension();
    let d_mu = g.target1.dimension();
    let d_nu = g.target2.dimension();
    let mut m = Mat::zeros(d_lam * d_nu, d_mu);
    for a in 0..d_lam {
        for c in 0..d_nu {
            for b in 0..d_mu {
                m[(a * d_nu + c, b)] = g.matrix[(b * d_nu + c, a)];
            }
        }
    }
    Intertwiner {
        source: g.target1,
        target1: g.source,
        target2: g.target2,
        target2_dual: !g.target2_dual,
        matrix: m,
        normalization: "hom-flip of the input normalization",
    }
}

/// The canonical coevaluation vector `Σ_a e_a ⊗ e^a ∈ V_ν ⊗ V_ν*`,
/// flattened row-major; invariant under the total `sl2` action.
pub fn canonical_coevaluation(nu: HalfInt) -> Vec<f64> {
    let d = nu.dimension();
    let mut v = alloc::vec![0.0; d * d];
    for a in 0..d {
        v[a * d + a] = 1.0;
    }
    v
}
