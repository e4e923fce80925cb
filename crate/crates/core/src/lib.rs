//! Linearized field dislocation dynamics on a 1-D slab.
//!
//! This crate simulates the linear evolution of elastic strain ε, particle
//! velocity v, and rotation ω over a frozen dislocation density field α.
//! The coupling enters through two derived operators:
//!
//! ```text
//! V_s = e_smn α_pn C_pmkl ε_kl                    dislocation velocity
//! J_ij = e_jrs α_ir V_s = B_ijkl ε_kl             plastic distortion rate
//! ```
//!
//! so the stress power satisfies T:J = |V|² ≥ 0 pointwise and the total
//! energy is dissipated at exactly the rate ∫|V|². Time stepping is either
//! explicit RK4 under a CFL bound or an unconditionally stable backward
//! Euler that solves the resolvent system (λI − A)U = λU₀ per step.
//!
//! The long-time behavior is a constrained linear elastodynamics: modal
//! analysis of that limit operator, per-mode constraint residuals, and the
//! Case 1 (oscillating) / Case 2 (static) classification live in
//! [`spectral`]. Ready-made setups with closed-form reference solutions
//! live in [`scenarios`], and [`checks`] bundles the self-verification
//! suites behind the command-line `check` command.
//!
//! Modules:
//! * [`tensor`] — small dense tensor algebra, materials, and the B/D operators
//! * [`grid`] — 1-D slab fields, difference operators, boundary conditions
//! * [`dynamics`] — integrators, resolvent solve, energy monitors
//! * [`spectral`] — limit-system eigenproblem and mode classification
//! * [`scenarios`] — presets with oracles
//! * [`report`] — CSV/JSON serialization of runs, snapshots, mode tables
//! * [`linalg`] — self-contained banded/dense solvers and eigensolver

// Index loops over fixed tensor dimensions mirror the index notation and
// stay; `!(x > 0.0)` comparisons deliberately reject NaN inputs.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod dynamics;
pub mod grid;
pub mod linalg;
pub mod report;
pub mod scenarios;
pub mod spectral;
pub mod tensor;

pub use dynamics::{
    cfl_dt, dissipation_rate, energy, energy_budget, rhs, run, step_backward_euler, step_rk4,
    DynamicsError, FieldRates, Integrator, ResolventSystem, SimConfig, SimRecord,
};
pub use grid::{
    alpha_from_psi, apply_bcs, constraint_residual_field, div_stress, grad_v, BoundaryCondition,
    EndCondition, FieldState, Grid1D, GridError, PsiField,
};
pub use scenarios::{
    build as build_scenario, dissipative_homogeneous, list_scenarios, oscillating_shear,
    static_uniaxial, Oracle, Scenario, ScenarioError, ScenarioParams,
};
pub use spectral::{
    assemble_operator, classify, compute_residuals, eigen_analysis, eigenmodes,
    mode_constraint_residual, project_initial_data, static_limit_check, CaseLabel, ModeSet,
    OperatorPair, SpectralError,
};
pub use tensor::{
    apply4, build_b, build_d, dislocation_flux, dissipation_density, isotropic_compliance,
    isotropic_stiffness, levi_civita, skew, sym, Material, Rank3Op, SymTensor2, Tensor2, Tensor4,
    TensorError,
};
