//! Time integration of the dissipative slab system
//!
//! ```text
//! ∂t ε = sym(∂₁v ⊗ e₁) − (B:ε)_sym
//! ρ ∂t v = ∂₁ (C:ε) e₁
//! ∂t ω = skew(∂₁v ⊗ e₁) − (B:ε)_skew
//! ```
//!
//! with an explicit RK4 path under a CFL bound and an unconditionally
//! stable backward-Euler path that solves the resolvent system
//! (λI − A)U = data at λ = 1/dt.
//!
//! The interior stencils are the collocated central differences of the
//! grid module. The boundary rows use two-point closures that, paired
//! against trapezoidal weights, satisfy a discrete integration-by-parts
//! identity with boundary flux t·v evaluated at the end nodes. Clamped
//! ends (v = 0) and traction-free ends (stress column = 0) therefore make
//! the discrete generator exactly dissipative:
//!
//! ```text
//! dE/dt = −Σ_j w_j |D ε_j|²  (up to round-off)
//! ```
//!
//! which is what turns the semigroup contraction statement into a
//! checkable per-step inequality. ω is a passive integration: it uses the
//! same stage values but never feeds back into ε or v.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{apply_bcs, BoundaryCondition, EndCondition, FieldState, Grid1D, GridError};
use crate::linalg::{invert6, mat6_vec, BandedCholesky, BandedSpd, LinalgError};
use crate::tensor::{
    build_b, build_d, dislocation_flux, skew, sym, Material, Rank3Op, SymTensor2, Tensor2, Tensor4,
    TensorError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("time step must be positive (dt = {dt})")]
    NonPositiveDt { dt: f64 },
    #[error("final time must be at least one step (t_end = {t_end}, dt = {dt})")]
    HorizonTooShort { t_end: f64, dt: f64 },
    #[error("RK4 time step {dt:.6e} violates the CFL bound {limit:.6e} (safety {safety})")]
    CflViolation { dt: f64, limit: f64, safety: f64 },
    #[error("record_every must be at least 1")]
    ZeroRecordCadence,
    #[error("resolvent shift must be positive (lambda = {lambda})")]
    NonPositiveLambda { lambda: f64 },
    #[error("per-node strain block is singular at node {node}")]
    SingularStrainBlock { node: usize },
    #[error("non-finite state detected at step {step}")]
    NonFinite { step: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Time integrator selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    Rk4,
    BackwardEuler,
}

/// Largest RK4-stable step: safety · h / c_max.
pub fn cfl_dt(grid: &Grid1D, material: &Material, safety: f64) -> f64 {
    safety * grid.h / material.max_wave_speed()
}

/// A complete, validated simulation setup.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    pub grid: Grid1D,
    pub material: Material,
    pub bc: BoundaryCondition,
    pub initial_state: FieldState,
    pub dt: f64,
    pub t_end: f64,
    pub integrator: Integrator,
    pub record_every: usize,
    /// Snapshot cadence in steps; 0 disables snapshots.
    pub snapshot_every: usize,
    pub cfl_safety: f64,
}

impl SimConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        grid: Grid1D,
        material: Material,
        bc: BoundaryCondition,
        initial_state: FieldState,
        dt: f64,
        t_end: f64,
        integrator: Integrator,
        record_every: usize,
    ) -> Result<Self, DynamicsError> {
        let config = SimConfig {
            grid,
            material,
            bc,
            initial_state,
            dt,
            t_end,
            integrator,
            record_every,
            snapshot_every: 0,
            cfl_safety: 0.5,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.dt > 0.0) {
            return Err(DynamicsError::NonPositiveDt { dt: self.dt });
        }
        if self.t_end < self.dt {
            return Err(DynamicsError::HorizonTooShort {
                t_end: self.t_end,
                dt: self.dt,
            });
        }
        if self.record_every == 0 {
            return Err(DynamicsError::ZeroRecordCadence);
        }
        self.initial_state.validate(&self.grid)?;
        if self.integrator == Integrator::Rk4 {
            let limit = cfl_dt(&self.grid, &self.material, self.cfl_safety);
            if self.dt > limit * (1.0 + 1e-12) {
                return Err(DynamicsError::CflViolation {
                    dt: self.dt,
                    limit,
                    safety: self.cfl_safety,
                });
            }
        }
        Ok(())
    }

    /// Number of equal steps covering [0, t_end] with step ≤ dt.
    pub fn step_count(&self) -> usize {
        ((self.t_end / self.dt) - 1e-9).ceil().max(1.0) as usize
    }
}

/// Rates of change matching the layout of [`FieldState`].
#[derive(Debug, Clone)]
pub struct FieldRates {
    pub deps: Vec<SymTensor2>,
    pub dv: Vec<[f64; 3]>,
    pub domega: Vec<Tensor2>,
}

/// Frozen per-node operator data for one simulation run.
struct DynContext {
    grid: Grid1D,
    bc: BoundaryCondition,
    rho: f64,
    b_ops: Vec<Tensor4>,
    d_ops: Vec<Rank3Op>,
    alpha: Vec<Tensor2>,
}

impl DynContext {
    fn new(grid: &Grid1D, material: &Material, bc: &BoundaryCondition, state: &FieldState) -> Self {
        let b_ops = state
            .alpha
            .iter()
            .map(|a| build_b(a, &material.stiffness))
            .collect();
        let d_ops = state
            .alpha
            .iter()
            .map(|a| build_d(a, &material.stiffness))
            .collect();
        DynContext {
            grid: *grid,
            bc: *bc,
            rho: material.rho,
            b_ops,
            d_ops,
            alpha: state.alpha.clone(),
        }
    }
}

/// Boundary-aware nodal derivative of each velocity component:
/// central in the interior, two-point one-sided at the ends. At a clamped
/// end (v = 0 there) the closure coincides with the odd-reflection ghost
/// value.
fn grad_bc(grid: &Grid1D, v: &[[f64; 3]]) -> Vec<[f64; 3]> {
    let n = grid.n_nodes;
    let h = grid.h;
    let mut out = vec![[0.0; 3]; n];
    for c in 0..3 {
        out[0][c] = (v[1][c] - v[0][c]) / h;
        out[n - 1][c] = (v[n - 1][c] - v[n - 2][c]) / h;
    }
    for j in 1..n - 1 {
        for c in 0..3 {
            out[j][c] = (v[j + 1][c] - v[j - 1][c]) / (2.0 * h);
        }
    }
    out
}

/// Stress columns t_i = (C:ε)_{i1} with traction-free end nodes zeroed.
fn stress_columns_bc(
    material_stress: impl Fn(&SymTensor2) -> Tensor2,
    eps: &[SymTensor2],
    bc: &BoundaryCondition,
) -> Vec<[f64; 3]> {
    let n = eps.len();
    let mut cols: Vec<[f64; 3]> = eps
        .iter()
        .map(|e| {
            let t = material_stress(e);
            [t.0[0][0], t.0[1][0], t.0[2][0]]
        })
        .collect();
    if bc.left == EndCondition::TractionFree {
        cols[0] = [0.0; 3];
    }
    if bc.right == EndCondition::TractionFree {
        cols[n - 1] = [0.0; 3];
    }
    cols
}

/// Boundary-aware divergence of the stress column: central interior rows,
/// two-point one-sided rows at traction-free ends, zero rows at clamped
/// ends (where v does not evolve).
fn div_bc(grid: &Grid1D, bc: &BoundaryCondition, cols: &[[f64; 3]]) -> Vec<[f64; 3]> {
    let n = grid.n_nodes;
    let h = grid.h;
    let mut out = vec![[0.0; 3]; n];
    for j in 1..n - 1 {
        for c in 0..3 {
            out[j][c] = (cols[j + 1][c] - cols[j - 1][c]) / (2.0 * h);
        }
    }
    if bc.left == EndCondition::TractionFree {
        for c in 0..3 {
            out[0][c] = (cols[1][c] - cols[0][c]) / h;
        }
    }
    if bc.right == EndCondition::TractionFree {
        for c in 0..3 {
            out[n - 1][c] = (cols[n - 1][c] - cols[n - 2][c]) / h;
        }
    }
    out
}

fn rates_with(ctx: &DynContext, material: &Material, state: &FieldState) -> FieldRates {
    let n = ctx.grid.n_nodes;
    let w = grad_bc(&ctx.grid, &state.v);
    let cols = stress_columns_bc(|e| material.stress(e).to_tensor2(), &state.eps, &ctx.bc);
    let dv_raw = div_bc(&ctx.grid, &ctx.bc, &cols);
    let mut deps = Vec::with_capacity(n);
    let mut dv = Vec::with_capacity(n);
    let mut domega = Vec::with_capacity(n);
    for j in 0..n {
        let grad_tensor = Tensor2::outer(w[j], [1.0, 0.0, 0.0]);
        let plastic = ctx.b_ops[j].contract_sym(&state.eps[j]);
        deps.push(sym(&grad_tensor).sub(&sym(&plastic)));
        // Full flux from the velocity response, for the rotation rate.
        let vel = ctx.d_ops[j].apply(&state.eps[j]);
        let flux = dislocation_flux(&ctx.alpha[j], &vel);
        domega.push(skew(&grad_tensor).sub(&skew(&flux)));
        let inv_rho = 1.0 / ctx.rho;
        dv.push([
            dv_raw[j][0] * inv_rho,
            dv_raw[j][1] * inv_rho,
            dv_raw[j][2] * inv_rho,
        ]);
    }
    FieldRates { deps, dv, domega }
}

/// Evolution rates of a state under the governing system. The state is
/// expected to satisfy the boundary tags (see [`apply_bcs`]).
pub fn rhs(
    grid: &Grid1D,
    state: &FieldState,
    material: &Material,
    bc: &BoundaryCondition,
) -> Result<FieldRates, DynamicsError> {
    state.validate(grid)?;
    let ctx = DynContext::new(grid, material, bc, state);
    Ok(rates_with(&ctx, material, state))
}

fn advanced(state: &FieldState, rates: &FieldRates, dt: f64) -> FieldState {
    let n = state.n_nodes();
    let mut out = state.clone();
    out.t = state.t + dt;
    for j in 0..n {
        out.eps[j] = state.eps[j].add(&rates.deps[j].scale(dt));
        for c in 0..3 {
            out.v[j][c] = state.v[j][c] + dt * rates.dv[j][c];
        }
        out.omega[j] = state.omega[j].add(&rates.domega[j].scale(dt));
    }
    out
}

fn rk4_step_with(ctx: &DynContext, material: &Material, state: &FieldState, dt: f64) -> FieldState {
    let k1 = rates_with(ctx, material, state);
    let s2 = advanced(state, &k1, 0.5 * dt);
    let k2 = rates_with(ctx, material, &s2);
    let s3 = advanced(state, &k2, 0.5 * dt);
    let k3 = rates_with(ctx, material, &s3);
    let s4 = advanced(state, &k3, dt);
    let k4 = rates_with(ctx, material, &s4);
    let n = state.n_nodes();
    let sixth = dt / 6.0;
    let mut out = state.clone();
    out.t = state.t + dt;
    for j in 0..n {
        let de = k1.deps[j]
            .add(&k2.deps[j].scale(2.0))
            .add(&k3.deps[j].scale(2.0))
            .add(&k4.deps[j]);
        out.eps[j] = state.eps[j].add(&de.scale(sixth));
        for c in 0..3 {
            let dv = k1.dv[j][c] + 2.0 * k2.dv[j][c] + 2.0 * k3.dv[j][c] + k4.dv[j][c];
            out.v[j][c] = state.v[j][c] + sixth * dv;
        }
        let dw = k1.domega[j]
            .add(&k2.domega[j].scale(2.0))
            .add(&k3.domega[j].scale(2.0))
            .add(&k4.domega[j]);
        out.omega[j] = state.omega[j].add(&dw.scale(sixth));
    }
    out
}

/// One classical four-stage step followed by boundary re-enforcement.
pub fn step_rk4(state: &FieldState, config: &SimConfig) -> Result<FieldState, DynamicsError> {
    config.validate()?;
    let ctx = DynContext::new(&config.grid, &config.material, &config.bc, state);
    let out = rk4_step_with(&ctx, &config.material, state, config.dt);
    Ok(apply_bcs(&out, &config.bc, &config.material))
}

/// Discrete resolvent (λI − A) of the slab generator, with the strain
/// block eliminated per node and the velocity Schur complement assembled
/// as a symmetric positive-definite banded system in the trapezoidal
/// inner product.
pub struct ResolventSystem {
    grid: Grid1D,
    bc: BoundaryCondition,
    rho: f64,
    lambda: f64,
    /// (λ I + B_sym)⁻¹ per node, acting on packed symmetric tensors.
    strain_inverse: Vec<[[f64; 6]; 6]>,
    /// B_sym per node, for residual evaluation.
    b_ops: Vec<Tensor4>,
    /// Stress-column response to packed strain data, (C G)ₑcol.
    cg: Vec<[[f64; 6]; 3]>,
    factor: BandedCholesky,
    dof_of_node: Vec<Option<usize>>,
    n_dofs: usize,
    material: Material,
}

/// Gradient stencil of node k as (node, coefficient) pairs.
fn grad_stencil(grid: &Grid1D, k: usize) -> [(usize, f64); 2] {
    let n = grid.n_nodes;
    let h = grid.h;
    if k == 0 {
        [(0, -1.0 / h), (1, 1.0 / h)]
    } else if k + 1 == n {
        [(n - 2, -1.0 / h), (n - 1, 1.0 / h)]
    } else {
        [(k - 1, -0.5 / h), (k + 1, 0.5 / h)]
    }
}

impl ResolventSystem {
    pub fn new(
        grid: &Grid1D,
        material: &Material,
        bc: &BoundaryCondition,
        alpha: &[Tensor2],
        lambda: f64,
    ) -> Result<Self, DynamicsError> {
        if !(lambda > 0.0) {
            return Err(DynamicsError::NonPositiveLambda { lambda });
        }
        if alpha.len() != grid.n_nodes {
            return Err(DynamicsError::Grid(GridError::LengthMismatch {
                expected: grid.n_nodes,
                got: alpha.len(),
            }));
        }
        let n = grid.n_nodes;
        let mut strain_inverse = Vec::with_capacity(n);
        let mut b_ops = Vec::with_capacity(n);
        let mut phi: Vec<[[f64; 3]; 3]> = Vec::with_capacity(n);
        let mut cg = Vec::with_capacity(n);
        for (node, a) in alpha.iter().enumerate() {
            let b = build_b(a, &material.stiffness);
            // Packed 6×6 action of λI + B_sym: column a is pack((λI+B) eₐ).
            let mut m6 = [[0.0f64; 6]; 6];
            for col in 0..6 {
                let mut basis = SymTensor2::zero();
                basis.0[col] = 1.0;
                let image = basis.scale(lambda).add(&sym(&b.contract_sym(&basis)));
                for row in 0..6 {
                    m6[row][col] = image.0[row];
                }
            }
            let inv = invert6(&m6).ok_or(DynamicsError::SingularStrainBlock { node })?;
            // Φ w = stress column of C G sym(w ⊗ e₁); symmetric because C∘G
            // is self-adjoint on symmetric tensors. Symmetrize exactly.
            let mut p = [[0.0f64; 3]; 3];
            for m in 0..3 {
                let mut unit_w = [0.0f64; 3];
                unit_w[m] = 1.0;
                let strain_dir = sym(&Tensor2::outer(unit_w, [1.0, 0.0, 0.0]));
                let g_e = SymTensor2(mat6_vec(&inv, &strain_dir.0));
                let stress = material.stress(&g_e).to_tensor2();
                for i in 0..3 {
                    p[i][m] = stress.0[i][0];
                }
            }
            for i in 0..3 {
                for m in (i + 1)..3 {
                    let avg = 0.5 * (p[i][m] + p[m][i]);
                    p[i][m] = avg;
                    p[m][i] = avg;
                }
            }
            // Column response to strain data: (C G f)ᵢ₁ per packed slot of f.
            let mut cgk = [[0.0f64; 6]; 3];
            for slot in 0..6 {
                let mut basis = SymTensor2::zero();
                basis.0[slot] = 1.0;
                let g_f = SymTensor2(mat6_vec(&inv, &basis.0));
                let stress = material.stress(&g_f).to_tensor2();
                for i in 0..3 {
                    cgk[i][slot] = stress.0[i][0];
                }
            }
            strain_inverse.push(inv);
            b_ops.push(b);
            phi.push(p);
            cg.push(cgk);
        }

        let mut dof_of_node = vec![None; n];
        let mut n_dofs = 0;
        for node in 0..n {
            let clamped = matches!(bc.end(node, n), Some(EndCondition::Clamped));
            if !clamped {
                dof_of_node[node] = Some(n_dofs);
                n_dofs += 1;
            }
        }

        // Weighted Schur complement: W(λρ I − div Φ grad) assembled from the
        // weak form, symmetric banded with half-bandwidth 8.
        let mut matrix = BandedSpd::zeros(3 * n_dofs, 8);
        let rho = material.rho;
        for node in 0..n {
            if let Some(dof) = dof_of_node[node] {
                let wj = grid.weight(node) * lambda * rho;
                for c in 0..3 {
                    matrix.add_to(3 * dof + c, 3 * dof + c, wj);
                }
            }
        }
        for k in 0..n {
            // Traction-free end nodes carry no stress column by definition.
            if matches!(bc.end(k, n), Some(EndCondition::TractionFree)) {
                continue;
            }
            let wk = grid.weight(k);
            let stencil = grad_stencil(grid, k);
            for &(m1, c1) in &stencil {
                let Some(d1) = dof_of_node[m1] else { continue };
                for &(m2, c2) in &stencil {
                    let Some(d2) = dof_of_node[m2] else { continue };
                    for i in 0..3 {
                        for j in 0..3 {
                            let row = 3 * d1 + i;
                            let col = 3 * d2 + j;
                            if row >= col {
                                matrix.add_to(row, col, c1 * c2 * wk * phi[k][i][j]);
                            }
                        }
                    }
                }
            }
        }
        let factor = matrix.cholesky()?;
        Ok(ResolventSystem {
            grid: *grid,
            bc: *bc,
            rho,
            lambda,
            strain_inverse,
            b_ops,
            cg,
            factor,
            dof_of_node,
            n_dofs,
            material: material.clone(),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn is_tf(&self, node: usize) -> bool {
        matches!(
            self.bc.end(node, self.grid.n_nodes),
            Some(EndCondition::TractionFree)
        )
    }

    /// Solve (λI − A)(ε, v) = (f, g): velocity from the banded Schur system,
    /// then per-node strain recovery ε = (λI + B_sym)⁻¹ (f + sym(∂₁v ⊗ e₁)).
    pub fn solve(
        &self,
        f: &[SymTensor2],
        g: &[[f64; 3]],
    ) -> Result<(Vec<SymTensor2>, Vec<[f64; 3]>), DynamicsError> {
        let n = self.grid.n_nodes;
        if f.len() != n || g.len() != n {
            return Err(DynamicsError::Grid(GridError::LengthMismatch {
                expected: n,
                got: f.len().min(g.len()),
            }));
        }
        // Stress column induced by the strain data alone.
        let mut data_cols = vec![[0.0f64; 3]; n];
        for k in 0..n {
            if self.is_tf(k) {
                continue;
            }
            for i in 0..3 {
                let mut s = 0.0;
                for slot in 0..6 {
                    s += self.cg[k][i][slot] * f[k].0[slot];
                }
                data_cols[k][i] = s;
            }
        }
        // Weighted right-hand side: w_j g_j − Σ_k a_kj w_k (C G f)_k.
        let mut rhs_vec = vec![0.0f64; 3 * self.n_dofs];
        for node in 0..n {
            if let Some(dof) = self.dof_of_node[node] {
                let wj = self.grid.weight(node);
                for c in 0..3 {
                    rhs_vec[3 * dof + c] = wj * g[node][c];
                }
            }
        }
        for k in 0..n {
            if self.is_tf(k) {
                continue;
            }
            let wk = self.grid.weight(k);
            for &(m, coef) in &grad_stencil(&self.grid, k) {
                if let Some(dof) = self.dof_of_node[m] {
                    for c in 0..3 {
                        rhs_vec[3 * dof + c] -= coef * wk * data_cols[k][c];
                    }
                }
            }
        }
        let sol = self.factor.solve(&rhs_vec);
        let mut v = vec![[0.0f64; 3]; n];
        for node in 0..n {
            if let Some(dof) = self.dof_of_node[node] {
                for c in 0..3 {
                    v[node][c] = sol[3 * dof + c];
                }
            }
        }
        let w = grad_bc(&self.grid, &v);
        let mut eps = Vec::with_capacity(n);
        for j in 0..n {
            let strain_dir = sym(&Tensor2::outer(w[j], [1.0, 0.0, 0.0]));
            let data = f[j].add(&strain_dir);
            eps.push(SymTensor2(mat6_vec(&self.strain_inverse[j], &data.0)));
        }
        Ok((eps, v))
    }

    /// Apply the strong-form discrete operator (λI − A) to (ε, v),
    /// returning the residual data (r_eps, r_v). Clamped velocity rows
    /// report the velocity value itself (the constraint row v = 0).
    pub fn apply(&self, eps: &[SymTensor2], v: &[[f64; 3]]) -> (Vec<SymTensor2>, Vec<[f64; 3]>) {
        let n = self.grid.n_nodes;
        let w = grad_bc(&self.grid, v);
        let mut r_eps = Vec::with_capacity(n);
        for j in 0..n {
            let strain_dir = sym(&Tensor2::outer(w[j], [1.0, 0.0, 0.0]));
            let be = sym(&self.b_ops[j].contract_sym(&eps[j]));
            r_eps.push(eps[j].scale(self.lambda).add(&be).sub(&strain_dir));
        }
        let cols = stress_columns_bc(|e| self.material.stress(e).to_tensor2(), eps, &self.bc);
        let div = div_bc(&self.grid, &self.bc, &cols);
        let mut r_v = vec![[0.0f64; 3]; n];
        for node in 0..n {
            if self.dof_of_node[node].is_some() {
                for c in 0..3 {
                    r_v[node][c] = self.lambda * self.rho * v[node][c] - div[node][c];
                }
            } else {
                r_v[node] = v[node];
            }
        }
        (r_eps, r_v)
    }

    /// Relative residual of a candidate solution against given data, in the
    /// flat Euclidean norm over all equations.
    pub fn residual(
        &self,
        f: &[SymTensor2],
        g: &[[f64; 3]],
        eps: &[SymTensor2],
        v: &[[f64; 3]],
    ) -> f64 {
        let (r_eps, r_v) = self.apply(eps, v);
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for j in 0..self.grid.n_nodes {
            let de = r_eps[j].sub(&f[j]);
            num += de.ddot(&de);
            den += f[j].ddot(&f[j]);
            let clamped = self.dof_of_node[j].is_none();
            for c in 0..3 {
                let gv = if clamped { 0.0 } else { g[j][c] };
                let dv = r_v[j][c] - gv;
                num += dv * dv;
                den += gv * gv;
            }
        }
        (num / den.max(1e-300)).sqrt()
    }
}

/// One backward-Euler step: solve (λI − A)U₁ = λU₀ at λ = 1/dt, then
/// advance the passive rotation with the end-of-step rates.
pub fn step_backward_euler(
    state: &FieldState,
    config: &SimConfig,
) -> Result<FieldState, DynamicsError> {
    config.validate()?;
    let system = ResolventSystem::new(
        &config.grid,
        &config.material,
        &config.bc,
        &state.alpha,
        1.0 / config.dt,
    )?;
    backward_euler_with(&system, &config.material, state, config.dt, &config.bc)
}

fn backward_euler_with(
    system: &ResolventSystem,
    material: &Material,
    state: &FieldState,
    dt: f64,
    bc: &BoundaryCondition,
) -> Result<FieldState, DynamicsError> {
    let lambda = system.lambda;
    let n = state.n_nodes();
    let f: Vec<SymTensor2> = state.eps.iter().map(|e| e.scale(lambda)).collect();
    let g: Vec<[f64; 3]> = state
        .v
        .iter()
        .map(|v| {
            [
                lambda * material.rho * v[0],
                lambda * material.rho * v[1],
                lambda * material.rho * v[2],
            ]
        })
        .collect();
    let (eps, v) = system.solve(&f, &g)?;
    let mut out = state.clone();
    out.t = state.t + dt;
    out.eps = eps;
    out.v = v;
    // Rotation update from the new (implicit) stage values.
    let w = grad_bc(&system.grid, &out.v);
    for j in 0..n {
        let grad_tensor = Tensor2::outer(w[j], [1.0, 0.0, 0.0]);
        let d = build_d(&state.alpha[j], &material.stiffness);
        let vel = d.apply(&out.eps[j]);
        let flux = dislocation_flux(&state.alpha[j], &vel);
        let rate = skew(&grad_tensor).sub(&skew(&flux));
        out.omega[j] = state.omega[j].add(&rate.scale(dt));
    }
    Ok(apply_bcs(&out, bc, material))
}

/// Total energy ½∫ ρ|v|² + ε:C:ε dx by trapezoidal quadrature.
pub fn energy(state: &FieldState, material: &Material, grid: &Grid1D) -> f64 {
    let densities: Vec<f64> = (0..grid.n_nodes)
        .map(|j| {
            let v = state.v[j];
            let kinetic = 0.5 * material.rho * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            let elastic = 0.5 * material.stress(&state.eps[j]).ddot(&state.eps[j]);
            kinetic + elastic
        })
        .collect();
    grid.integrate(&densities)
}

/// Dissipation rate ∫ |D(α):ε|² dx by trapezoidal quadrature.
pub fn dissipation_rate(state: &FieldState, material: &Material, grid: &Grid1D) -> f64 {
    let densities: Vec<f64> = state
        .alpha
        .iter()
        .zip(state.eps.iter())
        .map(|(a, e)| {
            let v = build_d(a, &material.stiffness).apply(e);
            v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
        })
        .collect();
    grid.integrate(&densities)
}

fn dissipation_with(ctx: &DynContext, state: &FieldState) -> f64 {
    let densities: Vec<f64> = ctx
        .d_ops
        .iter()
        .zip(state.eps.iter())
        .map(|(d, e)| {
            let v = d.apply(e);
            v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
        })
        .collect();
    ctx.grid.integrate(&densities)
}

/// Monitors and optional snapshots collected over a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimRecord {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub diss_rate: Vec<f64>,
    pub cum_diss: Vec<f64>,
    pub max_residual: Vec<f64>,
    pub snapshots: Vec<(usize, FieldState)>,
    pub final_state: FieldState,
}

impl SimRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// March the configured system from t = 0 to t_end, recording monitors
/// every `record_every` steps (plus the initial and final states).
pub fn run(config: &SimConfig) -> Result<SimRecord, DynamicsError> {
    config.validate()?;
    let n_steps = config.step_count();
    let dt = config.t_end / n_steps as f64;
    let grid = &config.grid;
    let material = &config.material;

    let mut state = apply_bcs(&config.initial_state, &config.bc, material);
    state.t = 0.0;
    let ctx = DynContext::new(grid, material, &config.bc, &state);
    let resolvent = match config.integrator {
        Integrator::BackwardEuler => Some(ResolventSystem::new(
            grid,
            material,
            &config.bc,
            &state.alpha,
            1.0 / dt,
        )?),
        Integrator::Rk4 => None,
    };

    let mut record = SimRecord {
        times: Vec::new(),
        energy: Vec::new(),
        diss_rate: Vec::new(),
        cum_diss: Vec::new(),
        max_residual: Vec::new(),
        snapshots: Vec::new(),
        final_state: state.clone(),
    };
    let mut cum = 0.0f64;
    let mut last_sample: Option<(f64, f64)> = None;
    let observe = |state: &FieldState,
                   step: usize,
                   record: &mut SimRecord,
                   cum: &mut f64,
                   last: &mut Option<(f64, f64)>|
     -> Result<(), DynamicsError> {
        let e = energy(state, material, grid);
        let d = dissipation_with(&ctx, state);
        if !e.is_finite() || !d.is_finite() || !state.is_finite() {
            return Err(DynamicsError::NonFinite { step });
        }
        if let Some((t_prev, d_prev)) = *last {
            *cum += 0.5 * (d_prev + d) * (state.t - t_prev);
        }
        *last = Some((state.t, d));
        let residual = state
            .alpha
            .iter()
            .zip(state.eps.iter())
            .enumerate()
            .map(|(j, (_, e))| {
                let v = ctx.d_ops[j].apply(e);
                (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
            })
            .fold(0.0f64, f64::max);
        record.times.push(state.t);
        record.energy.push(e);
        record.diss_rate.push(d);
        record.cum_diss.push(*cum);
        record.max_residual.push(residual);
        if config.snapshot_every > 0 && step.is_multiple_of(config.snapshot_every) {
            record.snapshots.push((step, state.clone()));
        }
        Ok(())
    };

    observe(&state, 0, &mut record, &mut cum, &mut last_sample)?;
    for step in 1..=n_steps {
        state = match (&config.integrator, &resolvent) {
            (Integrator::Rk4, _) => {
                let next = rk4_step_with(&ctx, material, &state, dt);
                apply_bcs(&next, &config.bc, material)
            }
            (Integrator::BackwardEuler, Some(system)) => {
                backward_euler_with(system, material, &state, dt, &config.bc)?
            }
            (Integrator::BackwardEuler, None) => unreachable!(),
        };
        if !state.is_finite() {
            return Err(DynamicsError::NonFinite { step });
        }
        if step.is_multiple_of(config.record_every) || step == n_steps {
            observe(&state, step, &mut record, &mut cum, &mut last_sample)?;
        }
    }
    record.final_state = state;
    Ok(record)
}

/// Largest energy-balance defect |E(t) − E(0) + ∫₀ᵗ Ḋ ds| over the
/// recorded samples, with the dissipation integral taken by trapezoidal
/// quadrature (it is accumulated that way during the run).
pub fn energy_budget(record: &SimRecord) -> f64 {
    if record.len() < 2 {
        return 0.0;
    }
    let e0 = record.energy[0];
    record
        .energy
        .iter()
        .zip(record.cum_diss.iter())
        .map(|(e, c)| (e - e0 + c).abs())
        .fold(0.0f64, f64::max)
}
