//! L² gradient flow of the relaxed energy on rectangles (periodic in x,
//! Dirichlet in y) and on polar discs and annuli (Dirichlet in r).

mod diagnostics;
mod solver;

pub use diagnostics::{
    contours, diagnostics, diagonal_jump_offsets, write_contours_csv, Diagnostics, JumpSample,
};

use std::f64::consts::TAU;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::energy::{energy_and_gradient, nodal_weights, EnergyBreakdown, EpsTerms};
use crate::error::{Error, Result};
use crate::field::Field2D;
use crate::grid::{Grid2D, GridKind};
use crate::params::Params;

use solver::FourierSolver;

/// Which Dirichlet data the boundary carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BcKind {
    /// u(x, ±H) = (±√(1−a²), a), periodic in x.
    RectStrip { a: f64 },
    /// ê_θ on the outer circle.
    DiscTangential,
    /// ê_r on the outer circle.
    DiscRadial,
    /// (x/R, −y/R) on the outer circle.
    DiscDegMinusOne,
    /// −ê_θ on the inner circle and ê_θ on the outer one.
    Annulus,
}

impl BcKind {
    /// Boundary value at the Cartesian point (x, y); `outer` selects the
    /// top row (rectangles) or the outer circle (polar grids).
    pub fn value(&self, x: f64, y: f64, outer: bool) -> [f64; 2] {
        let r = x.hypot(y);
        match *self {
            BcKind::RectStrip { a } => {
                let c = (1.0 - a * a).sqrt();
                [if outer { c } else { -c }, a]
            }
            BcKind::DiscTangential => [-y / r, x / r],
            BcKind::DiscRadial => [x / r, y / r],
            BcKind::DiscDegMinusOne => [x / r, -y / r],
            BcKind::Annulus => {
                let s = if outer { 1.0 } else { -1.0 };
                [-s * y / r, s * x / r]
            }
        }
    }
}

/// Dirichlet nodes and their values. Everything else is free.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCondition {
    pub kind: BcKind,
    pub periodic_x: bool,
    pub fixed: Vec<usize>,
    pub values: Vec<[f64; 2]>,
}

impl BoundaryCondition {
    pub fn new(kind: BcKind, grid: &Grid2D) -> Result<Self> {
        let (ni, nj) = grid.node_counts();
        let mut rows: Vec<(usize, bool)> = Vec::new();
        match (kind, grid.kind) {
            (BcKind::RectStrip { a }, GridKind::Rectangle) => {
                if !(0.0..1.0).contains(&a) {
                    return Err(Error::InvalidParameter(format!("a ∈ [0,1) (got {a})")));
                }
                if !grid.periodic_x {
                    return Err(Error::MissingBoundary(
                        "strip data needs a grid periodic in x".into(),
                    ));
                }
                rows.push((0, false));
                rows.push((nj - 1, true));
            }
            (BcKind::Annulus, GridKind::Polar) => {
                rows.push((0, false));
                rows.push((ni - 1, true));
            }
            (BcKind::DiscTangential | BcKind::DiscRadial | BcKind::DiscDegMinusOne, GridKind::Polar) => {
                rows.push((ni - 1, true));
            }
            _ => {
                return Err(Error::MissingBoundary(format!(
                    "{kind:?} does not apply to a {:?} grid",
                    grid.kind
                )))
            }
        }
        let mut fixed = Vec::new();
        let mut values = Vec::new();
        for (row, outer) in rows {
            if grid.is_polar() {
                for j in 0..nj {
                    let p = grid.node(row, j);
                    fixed.push(grid.index(row, j));
                    values.push(kind.value(p[0], p[1], outer));
                }
            } else {
                for i in 0..ni {
                    let p = grid.node(i, row);
                    fixed.push(grid.index(i, row));
                    values.push(kind.value(p[0], p[1], outer));
                }
            }
        }
        Ok(BoundaryCondition {
            kind,
            periodic_x: grid.periodic_x,
            fixed,
            values,
        })
    }

    pub fn apply(&self, u: &mut [[f64; 2]]) {
        for (k, v) in self.fixed.iter().zip(&self.values) {
            u[*k] = *v;
        }
    }

    pub fn free_mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![true; n];
        for k in &self.fixed {
            m[*k] = false;
        }
        m
    }
}

/// Unit vectors with i.i.d. uniform angles.
pub fn random_field(grid: &Grid2D, seed: u64) -> Field2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len())
        .map(|_| {
            let t: f64 = rng.gen_range(0.0..TAU);
            [t.cos(), t.sin()]
        })
        .collect();
    Field2D {
        grid: grid.clone(),
        values,
    }
}

/// Rotate every node by an i.i.d. angle in `[-amplitude, amplitude]`.
pub fn perturb(field: &mut Field2D, amplitude: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in field.values.iter_mut() {
        let t: f64 = rng.gen_range(-amplitude..=amplitude);
        let (s, c) = t.sin_cos();
        *v = [c * v[0] - s * v[1], s * v[0] + c * v[1]];
    }
}

/// Time-stepping controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowOptions {
    /// Initial step; `None` means ε/4.
    pub dt: Option<f64>,
    pub dt_min: f64,
    /// Largest step as a multiple of the initial one.
    pub dt_max_factor: f64,
    /// Step growth after an accepted step.
    pub growth: f64,
    pub cg_tol: f64,
    pub cg_max_iter: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            dt: None,
            dt_min: 1e-12,
            dt_max_factor: 1.0,
            growth: 1.0,
            cg_tol: 1e-10,
            cg_max_iter: 5000,
        }
    }
}

impl FlowOptions {
    /// Growing steps for long runs to equilibrium.
    pub fn adaptive() -> Self {
        FlowOptions {
            dt_max_factor: 400.0,
            growth: 1.2,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub field: Field2D,
    pub time: f64,
    pub dt: f64,
    pub dt_max: f64,
    pub energy_trace: Vec<(f64, EnergyBreakdown)>,
    pub bc: BoundaryCondition,
    pub steps: usize,
    pub rejected: usize,
    weights: Vec<f64>,
    free: Vec<bool>,
}

impl FlowState {
    /// Impose `bc` on `init` and record its energy.
    pub fn new(mut init: Field2D, bc: BoundaryCondition, params: &Params, opts: &FlowOptions) -> Result<Self> {
        params.validate()?;
        bc.apply(&mut init.values);
        let dt = opts.dt.unwrap_or(params.eps / 4.0);
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt > 0 (got {dt})")));
        }
        let e = energy_and_gradient(&init.grid, &init.values, params, EpsTerms::ALL, None);
        let weights = nodal_weights(&init.grid);
        let free = bc.free_mask(init.grid.len());
        Ok(FlowState {
            field: init,
            time: 0.0,
            dt,
            dt_max: dt * opts.dt_max_factor.max(1.0),
            energy_trace: vec![(0.0, e)],
            bc,
            steps: 0,
            rejected: 0,
            weights,
            free,
        })
    }

    pub fn energy(&self) -> &EnergyBreakdown {
        &self.energy_trace.last().expect("trace is never empty").1
    }

    /// Trace CSV `t,total,grad,potential,bulk_div`.
    pub fn write_trace_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,total,grad,potential,bulk_div")?;
        for (t, e) in &self.energy_trace {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                t, e.total, e.grad, e.potential, e.bulk_div
            )?;
        }
        Ok(())
    }
}

/// Discrete negative L² gradient −M⁻¹∇E_h with Dirichlet rows zeroed.
pub fn rhs(field: &Field2D, params: &Params, bc: &BoundaryCondition) -> Field2D {
    let grid = &field.grid;
    let mut g = vec![[0.0; 2]; grid.len()];
    energy_and_gradient(grid, &field.values, params, EpsTerms::ALL, Some(&mut g));
    let w = nodal_weights(grid);
    for (k, v) in g.iter_mut().enumerate() {
        *v = [-v[0] / w[k], -v[1] / w[k]];
    }
    for k in &bc.fixed {
        g[*k] = [0.0, 0.0];
    }
    Field2D {
        grid: grid.clone(),
        values: g,
    }
}

pub fn max_norm(v: &[[f64; 2]]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x[0].abs()).max(x[1].abs()))
}

fn dot(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x[0] * y[0] + x[1] * y[1]).sum()
}

/// CG for (M(1 + dt·S) + dt·K) x = b on the free nodes.
struct ImplicitOperator<'a> {
    grid: &'a Grid2D,
    params: &'a Params,
    mass: Vec<f64>,
    dt: f64,
    free: &'a [bool],
}

impl ImplicitOperator<'_> {
    fn apply(&self, x: &[[f64; 2]], out: &mut [[f64; 2]]) {
        energy_and_gradient(self.grid, x, self.params, EpsTerms::QUADRATIC, Some(out));
        for k in 0..x.len() {
            if self.free[k] {
                for c in 0..2 {
                    out[k][c] = self.mass[k] * x[k][c] + self.dt * out[k][c];
                }
            } else {
                out[k] = [0.0, 0.0];
            }
        }
    }

    /// Preconditioned by the exact solve of the shift-invariant operator,
    /// so a few iterations polish round-off.
    fn solve(&self, pre: &FourierSolver, b: &[[f64; 2]], tol: f64, max_iter: usize) -> Result<(Vec<[f64; 2]>, usize)> {
        let n = b.len();
        let mut x = vec![[0.0; 2]; n];
        let mut r = b.to_vec();
        let precond = |r: &[[f64; 2]], z: &mut [[f64; 2]]| {
            pre.solve(r, z);
            for k in 0..n {
                if !self.free[k] {
                    z[k] = [0.0, 0.0];
                }
            }
        };
        let bnorm = dot(b, b).sqrt();
        if bnorm == 0.0 {
            return Ok((x, 0));
        }
        let mut z = vec![[0.0; 2]; n];
        precond(&r, &mut z);
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut ap = vec![[0.0; 2]; n];
        for it in 0..max_iter {
            self.apply(&p, &mut ap);
            let alpha = rz / dot(&p, &ap);
            for k in 0..n {
                for c in 0..2 {
                    x[k][c] += alpha * p[k][c];
                    r[k][c] -= alpha * ap[k][c];
                }
            }
            if dot(&r, &r).sqrt() <= tol * bnorm {
                return Ok((x, it + 1));
            }
            precond(&r, &mut z);
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for k in 0..n {
                for c in 0..2 {
                    p[k][c] = z[k][c] + beta * p[k][c];
                }
            }
        }
        Err(Error::RootFailure {
            region: "implicit solve".into(),
            s: self.dt,
            reason: format!("CG did not reach {tol:e} in {max_iter} iterations"),
        })
    }
}

/// What one call to [`step`] did.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub dt: f64,
    pub cg_iterations: usize,
    pub rejected: usize,
    pub decrease: f64,
}

/// One linearly implicit step: gradient and divergence terms implicit,
/// the double-well explicit with stabilization 2/ε. The step is halved
/// until the energy does not increase.
pub fn step(state: &mut FlowState, params: &Params, opts: &FlowOptions) -> Result<StepInfo> {
    let grid = state.field.grid.clone();
    let n = grid.len();
    let mut g = vec![[0.0; 2]; n];
    let e0 = energy_and_gradient(&grid, &state.field.values, params, EpsTerms::ALL, Some(&mut g));
    for k in &state.bc.fixed {
        g[*k] = [0.0, 0.0];
    }
    let stab = 2.0 / params.eps;
    let mut rejected = 0;
    loop {
        let dt = state.dt;
        if dt < opts.dt_min {
            return Err(Error::DtUnderflow { dt });
        }
        let mass: Vec<f64> = state.weights.iter().map(|w| w * (1.0 + dt * stab)).collect();
        let op = ImplicitOperator {
            grid: &grid,
            params,
            mass,
            dt,
            free: &state.free,
        };
        let pre = FourierSolver::build(&grid, &state.free, |x, y| op.apply(x, y));
        let b: Vec<[f64; 2]> = g.iter().map(|v| [-dt * v[0], -dt * v[1]]).collect();
        let (delta, iters) = op.solve(&pre, &b, opts.cg_tol, opts.cg_max_iter)?;
        let mut u: Vec<[f64; 2]> = state
            .field
            .values
            .iter()
            .zip(&delta)
            .map(|(a, d)| [a[0] + d[0], a[1] + d[1]])
            .collect();
        state.bc.apply(&mut u);
        let e1 = energy_and_gradient(&grid, &u, params, EpsTerms::ALL, None);
        if !e1.total.is_finite() {
            return Err(Error::NonFinite { index: 0 });
        }
        if e1.total <= e0.total + 1e-12 * e0.total.abs().max(1.0) {
            state.field.values = u;
            state.time += dt;
            state.steps += 1;
            state.rejected += rejected;
            state.energy_trace.push((state.time, e1));
            state.dt = (dt * opts.growth).min(state.dt_max);
            return Ok(StepInfo {
                dt,
                cg_iterations: iters,
                rejected,
                decrease: e0.total - e1.total,
            });
        }
        rejected += 1;
        state.dt = dt / 2.0;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Residual,
    Stalled,
    MaxTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunSummary {
    pub converged: bool,
    pub reason: StopReason,
    pub steps: usize,
    pub time: f64,
    pub residual: f64,
}

/// Step until ‖rhs‖_∞ < tol or the energy decreases slower than tol² per
/// unit time, or until `max_time`.
pub fn run_to_equilibrium(
    state: &mut FlowState,
    params: &Params,
    opts: &FlowOptions,
    tol: f64,
    max_time: f64,
) -> Result<RunSummary> {
    run_with_callback(state, params, opts, tol, max_time, |_| Ok(()))
}

/// As [`run_to_equilibrium`], calling `on_step` after every accepted step.
pub fn run_with_callback<F>(
    state: &mut FlowState,
    params: &Params,
    opts: &FlowOptions,
    tol: f64,
    max_time: f64,
    mut on_step: F,
) -> Result<RunSummary>
where
    F: FnMut(&FlowState) -> Result<()>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol > 0 (got {tol})")));
    }
    let start = state.steps;
    let finish = |state: &FlowState, reason: StopReason, residual: f64| RunSummary {
        converged: reason != StopReason::MaxTime,
        reason,
        steps: state.steps - start,
        time: state.time,
        residual,
    };
    loop {
        let res = max_norm(&rhs(&state.field, params, &state.bc).values);
        if res < tol {
            return Ok(finish(state, StopReason::Residual, res));
        }
        if state.time >= max_time {
            return Ok(finish(state, StopReason::MaxTime, res));
        }
        let info = step(state, params, opts)?;
        on_step(state)?;
        if info.decrease / info.dt < tol * tol && state.steps - start > 10 {
            let res = max_norm(&rhs(&state.field, params, &state.bc).values);
            return Ok(finish(state, StopReason::Stalled, res));
        }
    }
}

/// One stage of [`run_continuation`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stage {
    pub eps: f64,
    pub summary: RunSummary,
    pub energy: f64,
}

/// The ε ladder `eps_start, eps_start/2, …` ending exactly at `eps`.
pub fn eps_ladder(eps_start: f64, eps: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut e = eps_start;
    while e > eps * (1.0 + 1e-12) {
        out.push(e);
        e /= 2.0;
    }
    out.push(eps);
    out
}

/// Relax at each ε of [`eps_ladder`] in turn, starting each stage from the
/// previous equilibrium. Stage k runs for at most `time_per_eps · ε_k`.
/// Returns the final-stage state, whose trace is that of the target ε.
pub fn run_continuation(
    init: Field2D,
    bc: &BoundaryCondition,
    params: &Params,
    opts: &FlowOptions,
    eps_start: f64,
    tol: f64,
    time_per_eps: f64,
) -> Result<(FlowState, Vec<Stage>)> {
    let mut field = init;
    let mut stages = Vec::new();
    let ladder = eps_ladder(eps_start, params.eps);
    for (k, &eps) in ladder.iter().enumerate() {
        let p = Params { eps, ..*params };
        let mut state = FlowState::new(field, bc.clone(), &p, opts)?;
        let summary = run_to_equilibrium(&mut state, &p, opts, tol, time_per_eps * eps)?;
        stages.push(Stage {
            eps,
            summary,
            energy: state.energy().total,
        });
        if k + 1 == ladder.len() {
            return Ok((state, stages));
        }
        field = state.field;
    }
    unreachable!("the ladder always ends at the target ε")
}
