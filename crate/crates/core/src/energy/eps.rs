use crate::error::Result;
use crate::field::Field2D;
use crate::grid::{Grid2D, GridKind};
use crate::params::Params;

use super::EnergyBreakdown;

/// Which terms of the relaxed energy to include.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpsTerms {
    pub grad: bool,
    pub div: bool,
    pub potential: bool,
}

impl EpsTerms {
    pub const ALL: EpsTerms = EpsTerms {
        grad: true,
        div: true,
        potential: true,
    };
    pub const QUADRATIC: EpsTerms = EpsTerms {
        grad: true,
        div: true,
        potential: false,
    };
}

/// Per-cell stencil data. Corners are ordered 00, 10, 01, 11 with the
/// first index along the first grid axis.
struct Cell {
    k: [usize; 4],
    area: f64,
    ca: f64,
    cb0: f64,
    cb1: f64,
    alpha: [f64; 2],
    beta: [f64; 2],
}

fn for_each_cell<F: FnMut(&Cell)>(grid: &Grid2D, mut f: F) {
    let (ni, nj) = grid.node_counts();
    let (da, db) = grid.spacing();
    match grid.kind {
        GridKind::Rectangle => {
            let cells_i = grid.nx;
            let area = da * db;
            for j in 0..grid.ny {
                for i in 0..cells_i {
                    let i1 = (i + 1) % ni;
                    f(&Cell {
                        k: [j * ni + i, j * ni + i1, (j + 1) * ni + i, (j + 1) * ni + i1],
                        area,
                        ca: area / (2.0 * da * da),
                        cb0: area / (2.0 * db * db),
                        cb1: area / (2.0 * db * db),
                        alpha: [1.0 / da, 0.0],
                        beta: [0.0, 1.0 / db],
                    });
                }
            }
        }
        GridKind::Polar => {
            for j in 0..nj {
                let j1 = (j + 1) % nj;
                let thc = grid.y0 + (j as f64 + 0.5) * db;
                let (s, c) = thc.sin_cos();
                for i in 0..grid.nx {
                    let r0 = grid.x0 + i as f64 * da;
                    let r1 = r0 + da;
                    let rc = 0.5 * (r0 + r1);
                    let area = rc * da * db;
                    f(&Cell {
                        k: [j * ni + i, j * ni + i + 1, j1 * ni + i, j1 * ni + i + 1],
                        area,
                        ca: area / (2.0 * da * da),
                        cb0: area / (2.0 * r0 * r0 * db * db),
                        cb1: area / (2.0 * r1 * r1 * db * db),
                        alpha: [c / da, s / da],
                        beta: [-s / (rc * db), c / (rc * db)],
                    });
                }
            }
        }
    }
}

const SA: [f64; 4] = [-0.5, 0.5, -0.5, 0.5];
const SB: [f64; 4] = [-0.5, -0.5, 0.5, 0.5];

fn sq(a: [f64; 2], b: [f64; 2]) -> f64 {
    let (x, y) = (a[0] - b[0], a[1] - b[1]);
    x * x + y * y
}

/// Discrete energy and, optionally, its exact gradient with respect to the
/// nodal values (accumulated into `grad_out`, which is zeroed first).
pub(crate) fn energy_and_gradient(
    grid: &Grid2D,
    u: &[[f64; 2]],
    params: &Params,
    terms: EpsTerms,
    mut grad_out: Option<&mut [[f64; 2]]>,
) -> EnergyBreakdown {
    let eps = params.eps;
    let l = params.l;
    if let Some(g) = grad_out.as_deref_mut() {
        g.iter_mut().for_each(|v| *v = [0.0, 0.0]);
    }
    let (mut eg, mut ed, mut ep) = (0.0, 0.0, 0.0);
    for_each_cell(grid, |c| {
        let v = [u[c.k[0]], u[c.k[1]], u[c.k[2]], u[c.k[3]]];
        if terms.grad {
            eg += 0.5
                * eps
                * (c.ca * (sq(v[1], v[0]) + sq(v[3], v[2])) + c.cb0 * sq(v[2], v[0]) + c.cb1 * sq(v[3], v[1]));
        }
        let mut d = 0.0;
        if terms.div {
            for (m, vm) in v.iter().enumerate() {
                d += (c.alpha[0] * SA[m] + c.beta[0] * SB[m]) * vm[0]
                    + (c.alpha[1] * SA[m] + c.beta[1] * SB[m]) * vm[1];
            }
            ed += 0.5 * l * c.area * d * d;
        }
        let mut w = [0.0; 4];
        if terms.potential {
            for (m, vm) in v.iter().enumerate() {
                w[m] = vm[0] * vm[0] + vm[1] * vm[1] - 1.0;
                ep += c.area / (8.0 * eps) * w[m] * w[m];
            }
        }
        if let Some(g) = grad_out.as_deref_mut() {
            let mut add = |m: usize, gx: f64, gy: f64| {
                let k = c.k[m];
                g[k][0] += gx;
                g[k][1] += gy;
            };
            if terms.grad {
                let pair = |a: [f64; 2], b: [f64; 2], w: f64| [eps * w * (a[0] - b[0]), eps * w * (a[1] - b[1])];
                let g0 = pair(v[0], v[1], c.ca);
                let g0b = pair(v[0], v[2], c.cb0);
                let g3 = pair(v[2], v[3], c.ca);
                let g1b = pair(v[1], v[3], c.cb1);
                add(0, g0[0] + g0b[0], g0[1] + g0b[1]);
                add(1, -g0[0] + g1b[0], -g0[1] + g1b[1]);
                add(2, g3[0] - g0b[0], g3[1] - g0b[1]);
                add(3, -g3[0] - g1b[0], -g3[1] - g1b[1]);
            }
            if terms.div {
                let k = l * c.area * d;
                for m in 0..4 {
                    add(
                        m,
                        k * (c.alpha[0] * SA[m] + c.beta[0] * SB[m]),
                        k * (c.alpha[1] * SA[m] + c.beta[1] * SB[m]),
                    );
                }
            }
            if terms.potential {
                let k = c.area / (2.0 * eps);
                for m in 0..4 {
                    add(m, k * w[m] * v[m][0], k * w[m] * v[m][1]);
                }
            }
        }
    });
    EnergyBreakdown {
        grad: eg,
        potential: ep,
        bulk_div: ed,
        ..Default::default()
    }
    .finish()
}

/// Lumped (trapezoid) quadrature weight of every node.
pub fn nodal_weights(grid: &Grid2D) -> Vec<f64> {
    let mut w = vec![0.0; grid.len()];
    for_each_cell(grid, |c| {
        for k in c.k {
            w[k] += 0.25 * c.area;
        }
    });
    w
}

/// Area-weighted average of the cell divergences around every node.
pub(crate) fn nodal_divergence(grid: &Grid2D, u: &[[f64; 2]]) -> Vec<f64> {
    let mut num = vec![0.0; grid.len()];
    let mut den = vec![0.0; grid.len()];
    for_each_cell(grid, |c| {
        let mut d = 0.0;
        for m in 0..4 {
            let v = u[c.k[m]];
            d += (c.alpha[0] * SA[m] + c.beta[0] * SB[m]) * v[0] + (c.alpha[1] * SA[m] + c.beta[1] * SB[m]) * v[1];
        }
        for k in c.k {
            num[k] += c.area * d;
            den[k] += c.area;
        }
    });
    num.iter().zip(&den).map(|(n, a)| n / a).collect()
}

/// The relaxed energy of a sampled field: gradient, potential and
/// divergence terms with compact second-order cell stencils.
#[allow(non_snake_case)]
pub fn eval_E_eps(field: &Field2D, params: &Params) -> Result<EnergyBreakdown> {
    params.validate()?;
    Ok(energy_and_gradient(&field.grid, &field.values, params, EpsTerms::ALL, None))
}
