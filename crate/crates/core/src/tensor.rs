//! Small dense tensor algebra on R³.
//!
//! Everything in this module is exact index arithmetic on 3×3, 3×3×3 and
//! 3×3×3×3 arrays; there is no Voigt-style shortcut inside contractions.
//! Symmetric second-order tensors are stored packed in the fixed order
//! (11, 22, 33, 23, 13, 12) with *no* factor-of-2 scaling on the shear
//! slots, and every contraction unpacks to the full 3×3 representation
//! first. That keeps the shear-counting convention out of the kernels.
//!
//! The two derived operators of the model are built here:
//!
//! ```text
//! B_ijkl = e_sjr α_ir e_smn α_pn C_pmkl      (plastic feedback, minor-right symmetric)
//! D_skl  = e_smn α_pn C_pmkl                 (dislocation velocity response, sym. in kl)
//! ```
//!
//! They satisfy `(C:ε) : (B:ε') = (D:ε) · (D:ε')` for every pair of
//! symmetric tensors, which is the pointwise dissipation identity
//! `T:J = |V|² ≥ 0` the time integrators rely on.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by tensor constructors and validators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    /// Permutation-symbol index outside 1..=3.
    #[error("index ({i}, {j}, {k}) out of range; expected values in 1..=3")]
    IndexOutOfRange { i: usize, j: usize, k: usize },
    /// Shear modulus must be strictly positive.
    #[error("shear modulus must be positive (mu = {mu})")]
    NonPositiveShear { mu: f64 },
    /// Bulk modulus 3λ + 2μ must be strictly positive.
    #[error("bulk modulus must be positive (3*lambda + 2*mu = {k})")]
    NonPositiveBulk { k: f64 },
    /// Mass density must be strictly positive.
    #[error("mass density must be positive (rho = {rho})")]
    NonPositiveDensity { rho: f64 },
    /// A declared symmetry of a fourth-order tensor does not hold.
    #[error("stiffness violates the {which} symmetry (max deviation {deviation:.3e})")]
    BrokenSymmetry { which: &'static str, deviation: f64 },
    /// The stiffness quadratic form is not positive on symmetric tensors.
    #[error(
        "stiffness is not coercive on symmetric tensors (min Rayleigh quotient {quotient:.3e})"
    )]
    NotCoercive { quotient: f64 },
    /// Compliance times stiffness failed to reproduce the identity.
    #[error("compliance does not invert stiffness (max defect {defect:.3e})")]
    ComplianceDefect { defect: f64 },
    /// A tensor entry is NaN or infinite.
    #[error("non-finite entry in {context}")]
    NonFinite { context: &'static str },
}

/// Permutation symbol e_ijk for 1-based indices.
///
/// Returns +1 for even permutations of (1,2,3), -1 for odd ones, 0 on a
/// repeated index. Out-of-range indices are an input error.
pub fn levi_civita(i: usize, j: usize, k: usize) -> Result<i32, TensorError> {
    if !(1..=3).contains(&i) || !(1..=3).contains(&j) || !(1..=3).contains(&k) {
        return Err(TensorError::IndexOutOfRange { i, j, k });
    }
    Ok(eps(i - 1, j - 1, k - 1))
}

/// 0-based permutation symbol used by the contraction kernels.
#[inline]
pub(crate) fn eps(i: usize, j: usize, k: usize) -> i32 {
    // (1 + number of inversions) trick is slower than the direct formula
    let (i, j, k) = (i as i32, j as i32, k as i32);
    ((i - j) * (j - k) * (k - i)) / 2
}

/// Dense second-order tensor on R³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tensor2(pub [[f64; 3]; 3]);

impl Tensor2 {
    pub fn zero() -> Self {
        Tensor2([[0.0; 3]; 3])
    }

    pub fn identity() -> Self {
        let mut t = Self::zero();
        for i in 0..3 {
            t.0[i][i] = 1.0;
        }
        t
    }

    /// a ⊗ b
    pub fn outer(a: [f64; 3], b: [f64; 3]) -> Self {
        let mut t = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = a[i] * b[j];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut t = *self;
        for row in t.0.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        t
    }

    pub fn add(&self, other: &Tensor2) -> Self {
        let mut t = *self;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] += other.0[i][j];
            }
        }
        t
    }

    pub fn sub(&self, other: &Tensor2) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Frobenius double contraction a : b.
    pub fn ddot(&self, other: &Tensor2) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.0[i][j] * other.0[i][j];
            }
        }
        s
    }

    pub fn norm(&self) -> f64 {
        self.ddot(self).sqrt()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0f64, |acc, e| acc.max(e.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|e| e.is_finite())
    }
}

/// Symmetric part of `t`, packed.
pub fn sym(t: &Tensor2) -> SymTensor2 {
    SymTensor2([
        t.0[0][0],
        t.0[1][1],
        t.0[2][2],
        0.5 * (t.0[1][2] + t.0[2][1]),
        0.5 * (t.0[0][2] + t.0[2][0]),
        0.5 * (t.0[0][1] + t.0[1][0]),
    ])
}

/// Antisymmetric part of `t`.
pub fn skew(t: &Tensor2) -> Tensor2 {
    let mut w = Tensor2::zero();
    for i in 0..3 {
        for j in 0..3 {
            w.0[i][j] = 0.5 * (t.0[i][j] - t.0[j][i]);
        }
    }
    w
}

/// Symmetric second-order tensor, packed as (11, 22, 33, 23, 13, 12).
///
/// Shear slots carry the tensor component itself (ε₂₃, not 2ε₂₃).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymTensor2(pub [f64; 6]);

/// (row, col) pairs addressed by the packed slots, in order.
pub const PACK_INDEX: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)];

impl SymTensor2 {
    pub fn zero() -> Self {
        SymTensor2([0.0; 6])
    }

    pub fn identity() -> Self {
        SymTensor2([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])
    }

    /// Unpack to the full 3×3 representation.
    pub fn to_tensor2(&self) -> Tensor2 {
        let e = &self.0;
        Tensor2([[e[0], e[5], e[4]], [e[5], e[1], e[3]], [e[4], e[3], e[2]]])
    }

    /// Component (i, j), 0-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.to_tensor2().0[i][j]
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut t = *self;
        for e in t.0.iter_mut() {
            *e *= s;
        }
        t
    }

    pub fn add(&self, other: &SymTensor2) -> Self {
        let mut t = *self;
        for (a, b) in t.0.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        t
    }

    pub fn sub(&self, other: &SymTensor2) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Full double contraction a : b (shears counted twice).
    pub fn ddot(&self, other: &SymTensor2) -> f64 {
        self.to_tensor2().ddot(&other.to_tensor2())
    }

    pub fn norm(&self) -> f64 {
        self.ddot(self).sqrt()
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[1] + self.0[2]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |acc, e| acc.max(e.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|e| e.is_finite())
    }
}

/// Fourth-order tensor with declared index symmetries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor4 {
    pub entries: [[[[f64; 3]; 3]; 3]; 3],
    /// A_ijkl = A_jikl
    pub minor_left: bool,
    /// A_ijkl = A_ijlk
    pub minor_right: bool,
    /// A_ijkl = A_klij
    pub major: bool,
}

impl Tensor4 {
    pub fn zero() -> Self {
        Tensor4 {
            entries: [[[[0.0; 3]; 3]; 3]; 3],
            minor_left: true,
            minor_right: true,
            major: true,
        }
    }

    /// Largest deviation from each declared symmetry; `None` when all hold.
    pub fn check_symmetries(&self, tol: f64) -> Result<(), TensorError> {
        let c = &self.entries;
        if self.minor_left {
            let mut dev = 0.0f64;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            dev = dev.max((c[i][j][k][l] - c[j][i][k][l]).abs());
                        }
                    }
                }
            }
            if dev > tol {
                return Err(TensorError::BrokenSymmetry {
                    which: "minor-left",
                    deviation: dev,
                });
            }
        }
        if self.minor_right {
            let mut dev = 0.0f64;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            dev = dev.max((c[i][j][k][l] - c[i][j][l][k]).abs());
                        }
                    }
                }
            }
            if dev > tol {
                return Err(TensorError::BrokenSymmetry {
                    which: "minor-right",
                    deviation: dev,
                });
            }
        }
        if self.major {
            let mut dev = 0.0f64;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            dev = dev.max((c[i][j][k][l] - c[k][l][i][j]).abs());
                        }
                    }
                }
            }
            if dev > tol {
                return Err(TensorError::BrokenSymmetry {
                    which: "major",
                    deviation: dev,
                });
            }
        }
        Ok(())
    }

    /// Double contraction A_ijkl x_kl for symmetric `x`, full result.
    ///
    /// Works for tensors without minor-left symmetry (the output is then a
    /// general second-order tensor).
    pub fn contract_sym(&self, x: &SymTensor2) -> Tensor2 {
        let xm = x.to_tensor2();
        let mut out = Tensor2::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    for l in 0..3 {
                        s += self.entries[i][j][k][l] * xm.0[k][l];
                    }
                }
                out.0[i][j] = s;
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        m = m.max(self.entries[i][j][k][l].abs());
                    }
                }
            }
        }
        m
    }
}

/// Double contraction C_ijkl ε_kl for a stiffness-like tensor with both
/// minor symmetries; the result is symmetric and is returned packed.
pub fn apply4(c: &Tensor4, e: &SymTensor2) -> SymTensor2 {
    debug_assert!(c.minor_left && c.minor_right);
    sym(&c.contract_sym(e))
}

fn kronecker(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// Isotropic stiffness C_ijkl = λ δ_ij δ_kl + μ (δ_ik δ_jl + δ_il δ_jk).
pub fn isotropic_stiffness(lambda: f64, mu: f64) -> Result<Tensor4, TensorError> {
    if !(mu > 0.0) {
        return Err(TensorError::NonPositiveShear { mu });
    }
    let bulk = 3.0 * lambda + 2.0 * mu;
    if !(bulk > 0.0) {
        return Err(TensorError::NonPositiveBulk { k: bulk });
    }
    let mut c = Tensor4::zero();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    c.entries[i][j][k][l] = lambda * kronecker(i, j) * kronecker(k, l)
                        + mu * (kronecker(i, k) * kronecker(j, l)
                            + kronecker(i, l) * kronecker(j, k));
                }
            }
        }
    }
    Ok(c)
}

/// Isotropic compliance, the inverse of [`isotropic_stiffness`] on
/// symmetric tensors:
/// S_ijkl = (δ_ik δ_jl + δ_il δ_jk)/(4μ) − λ δ_ij δ_kl / (2μ(3λ+2μ)).
pub fn isotropic_compliance(lambda: f64, mu: f64) -> Result<Tensor4, TensorError> {
    if !(mu > 0.0) {
        return Err(TensorError::NonPositiveShear { mu });
    }
    let bulk = 3.0 * lambda + 2.0 * mu;
    if !(bulk > 0.0) {
        return Err(TensorError::NonPositiveBulk { k: bulk });
    }
    let a = 1.0 / (4.0 * mu);
    let b = lambda / (2.0 * mu * bulk);
    let mut s = Tensor4::zero();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    s.entries[i][j][k][l] = a
                        * (kronecker(i, k) * kronecker(j, l) + kronecker(i, l) * kronecker(j, k))
                        - b * kronecker(i, j) * kronecker(k, l);
                }
            }
        }
    }
    Ok(s)
}

/// Plastic-feedback operator B_ijkl = e_sjr α_ir e_smn α_pn C_pmkl.
///
/// Inherits the minor-right symmetry from `c`; the left index pair is
/// generally unsymmetric, so only `minor_right` is set on the result.
/// Vanishes when `alpha` does.
pub fn build_b(alpha: &Tensor2, c: &Tensor4) -> Tensor4 {
    let d = build_d(alpha, c);
    let mut b = Tensor4::zero();
    b.minor_left = false;
    b.minor_right = true;
    b.major = false;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let mut sum = 0.0;
                    for s in 0..3 {
                        let mut f = 0.0;
                        for r in 0..3 {
                            f += eps(s, j, r) as f64 * alpha.0[i][r];
                        }
                        sum += f * d.entries[s][k][l];
                    }
                    b.entries[i][j][k][l] = sum;
                }
            }
        }
    }
    b
}

/// Third-order operator indexed (s, k, l), symmetric in (k, l).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rank3Op {
    pub entries: [[[f64; 3]; 3]; 3],
}

impl Rank3Op {
    pub fn zero() -> Self {
        Rank3Op {
            entries: [[[0.0; 3]; 3]; 3],
        }
    }

    /// V_s = D_skl ε_kl.
    pub fn apply(&self, e: &SymTensor2) -> [f64; 3] {
        let em = e.to_tensor2();
        let mut v = [0.0; 3];
        for s in 0..3 {
            let mut sum = 0.0;
            for k in 0..3 {
                for l in 0..3 {
                    sum += self.entries[s][k][l] * em.0[k][l];
                }
            }
            v[s] = sum;
        }
        v
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for s in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    m = m.max(self.entries[s][k][l].abs());
                }
            }
        }
        m
    }
}

/// Velocity-response operator D_skl = e_smn α_pn C_pmkl, symmetrized in
/// (k, l). Already symmetric when `c` carries the minor-right symmetry;
/// the explicit symmetrization pins it down exactly in floating point.
pub fn build_d(alpha: &Tensor2, c: &Tensor4) -> Rank3Op {
    let mut raw = [[[0.0f64; 3]; 3]; 3];
    for s in 0..3 {
        for k in 0..3 {
            for l in 0..3 {
                let mut sum = 0.0;
                for m in 0..3 {
                    for n in 0..3 {
                        let e = eps(s, m, n);
                        if e == 0 {
                            continue;
                        }
                        let mut inner = 0.0;
                        for p in 0..3 {
                            inner += alpha.0[p][n] * c.entries[p][m][k][l];
                        }
                        sum += e as f64 * inner;
                    }
                }
                raw[s][k][l] = sum;
            }
        }
    }
    let mut d = Rank3Op::zero();
    for s in 0..3 {
        for k in 0..3 {
            for l in 0..3 {
                d.entries[s][k][l] = 0.5 * (raw[s][k][l] + raw[s][l][k]);
            }
        }
    }
    d
}

/// |D:ε|², the pointwise dissipation rate density. Always nonnegative.
pub fn dissipation_density(d: &Rank3Op, e: &SymTensor2) -> f64 {
    let v = d.apply(e);
    v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
}

/// Dislocation flux J_ij = e_jrs α_ir V_s for a velocity vector `v`.
pub fn dislocation_flux(alpha: &Tensor2, v: &[f64; 3]) -> Tensor2 {
    let mut j_t = Tensor2::zero();
    for i in 0..3 {
        for j in 0..3 {
            let mut sum = 0.0;
            for r in 0..3 {
                for s in 0..3 {
                    let e = eps(j, r, s);
                    if e != 0 {
                        sum += e as f64 * alpha.0[i][r] * v[s];
                    }
                }
            }
            j_t.0[i][j] = sum;
        }
    }
    j_t
}

/// Deterministic splitmix64 stream for stochastic validation sampling.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn next_signed(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
    }

    pub fn sym_tensor(&mut self) -> SymTensor2 {
        let mut e = [0.0; 6];
        for slot in e.iter_mut() {
            *slot = self.next_signed();
        }
        SymTensor2(e)
    }

    pub fn tensor2(&mut self) -> Tensor2 {
        let mut t = Tensor2::zero();
        for row in t.0.iter_mut() {
            for entry in row.iter_mut() {
                *entry = self.next_signed();
            }
        }
        t
    }
}

/// Number of random strain samples used for the coercivity estimate.
const COERCIVITY_SAMPLES: usize = 10_000;

/// Elastic material data: density, stiffness and its inverse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub rho: f64,
    pub stiffness: Tensor4,
    pub compliance: Tensor4,
}

impl Material {
    /// Validate and pair a general anisotropic stiffness with its inverse.
    ///
    /// Checks all three stiffness symmetries entrywise, estimates the
    /// coercivity constant as the smallest Rayleigh quotient over
    /// 10⁴ random unit symmetric tensors, and inverts the stiffness on the
    /// 6-dimensional symmetric space.
    pub fn new(rho: f64, stiffness: Tensor4) -> Result<Self, TensorError> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(TensorError::NonPositiveDensity { rho });
        }
        let scale = stiffness.max_abs().max(1.0);
        let mut c = stiffness;
        c.minor_left = true;
        c.minor_right = true;
        c.major = true;
        c.check_symmetries(1e-12 * scale)?;

        let mut rng = SplitMix64::new(0x5eed_c0ef_f1c1_0e11_u64);
        let mut min_quotient = f64::INFINITY;
        for _ in 0..COERCIVITY_SAMPLES {
            let e = rng.sym_tensor();
            let nn = e.ddot(&e);
            if nn < 1e-12 {
                continue;
            }
            let q = apply4(&c, &e).ddot(&e) / nn;
            min_quotient = min_quotient.min(q);
        }
        if !(min_quotient > 0.0) {
            return Err(TensorError::NotCoercive {
                quotient: min_quotient,
            });
        }

        let compliance = invert_on_sym(&c)?;
        let m = Material {
            rho,
            stiffness: c,
            compliance,
        };
        m.verify_compliance(1e-10)?;
        Ok(m)
    }

    /// Isotropic material from the Lamé pair, with the closed-form inverse.
    pub fn isotropic(rho: f64, lambda: f64, mu: f64) -> Result<Self, TensorError> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(TensorError::NonPositiveDensity { rho });
        }
        let stiffness = isotropic_stiffness(lambda, mu)?;
        let compliance = isotropic_compliance(lambda, mu)?;
        let m = Material {
            rho,
            stiffness,
            compliance,
        };
        m.verify_compliance(1e-12)?;
        Ok(m)
    }

    /// Max entrywise defect of S:(C:e_a) − e_a over the packed basis.
    fn verify_compliance(&self, tol: f64) -> Result<(), TensorError> {
        let scale = self.stiffness.max_abs().max(1.0) * self.compliance.max_abs().max(1.0);
        let mut defect = 0.0f64;
        for a in 0..6 {
            let mut basis = SymTensor2::zero();
            basis.0[a] = 1.0;
            let round_trip = apply4(&self.compliance, &apply4(&self.stiffness, &basis));
            defect = defect.max(round_trip.sub(&basis).max_abs());
        }
        if defect > tol * scale {
            return Err(TensorError::ComplianceDefect { defect });
        }
        Ok(())
    }

    /// Stress from strain.
    pub fn stress(&self, strain: &SymTensor2) -> SymTensor2 {
        apply4(&self.stiffness, strain)
    }

    /// Strain from stress.
    pub fn strain(&self, stress: &SymTensor2) -> SymTensor2 {
        apply4(&self.compliance, stress)
    }

    /// Acoustic tensor Q_ik = C_i1k1 governing plane waves along x₁.
    pub fn acoustic_tensor(&self) -> [[f64; 3]; 3] {
        let mut q = [[0.0; 3]; 3];
        for i in 0..3 {
            for k in 0..3 {
                q[i][k] = self.stiffness.entries[i][0][k][0];
            }
        }
        q
    }

    /// Fastest elastic wave speed along x₁: sqrt(max eig(Q)/ρ).
    pub fn max_wave_speed(&self) -> f64 {
        let q = self.acoustic_tensor();
        (crate::linalg::sym3_max_eigenvalue(&q) / self.rho).sqrt()
    }
}

/// Invert a stiffness-like tensor on the space of symmetric tensors.
///
/// The inverse is represented through its action on the packed basis, then
/// re-expanded with both minor symmetries and the major symmetry.
fn invert_on_sym(c: &Tensor4) -> Result<Tensor4, TensorError> {
    // Column a of the 6×6 map: pack(C : basis_a), with doubled shear columns
    // accounted for by contraction over the unpacked representation.
    let mut m = [[0.0f64; 6]; 6];
    for a in 0..6 {
        let mut basis = SymTensor2::zero();
        basis.0[a] = 1.0;
        let col = apply4(c, &basis);
        for r in 0..6 {
            m[r][a] = col.0[r];
        }
    }
    let minv = crate::linalg::invert6(&m).ok_or(TensorError::NotCoercive { quotient: 0.0 })?;
    // Rebuild the rank-4 entries: S_ijkl is the (i,j) component of the
    // inverse applied to sym(e_k ⊗ e_l).
    let mut s = Tensor4::zero();
    for k in 0..3 {
        for l in 0..3 {
            let target = sym(&Tensor2::outer(unit(k), unit(l)));
            let mut packed = [0.0f64; 6];
            for r in 0..6 {
                let mut sum = 0.0;
                for a in 0..6 {
                    sum += minv[r][a] * target.0[a];
                }
                packed[r] = sum;
            }
            let full = SymTensor2(packed).to_tensor2();
            for i in 0..3 {
                for j in 0..3 {
                    s.entries[i][j][k][l] = full.0[i][j];
                }
            }
        }
    }
    Ok(s)
}

fn unit(i: usize) -> [f64; 3] {
    let mut v = [0.0; 3];
    v[i] = 1.0;
    v
}
