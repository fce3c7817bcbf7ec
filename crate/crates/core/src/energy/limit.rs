use serde::{Deserialize, Serialize};

use crate::characteristics::{check_foliation, PiecewiseCriticalField};
use crate::error::{Error, Result};
use crate::jump::WallCurve;
use crate::numerics::{gauss_legendre, pairwise_sum};
use crate::params::Params;

use super::{wall_integrand, EnergyBreakdown};

/// Composite Gauss–Legendre resolution for the limit energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub s_panels: usize,
    pub t_panels: usize,
    pub order: usize,
    pub wall_panels: usize,
    pub wall_order: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            s_panels: 64,
            t_panels: 64,
            order: 8,
            wall_panels: 64,
            wall_order: 8,
        }
    }
}

/// ∫ (1/6)|u₊ − u₋|³ dH¹ along a wall curve (one copy).
pub fn integrate_wall(wall: &WallCurve, panels: usize, order: usize) -> Result<f64> {
    let rule = gauss_legendre(order);
    let (a, b) = wall.range;
    let mut terms = Vec::with_capacity(panels * order);
    for (s, w) in rule.composite(a, b, panels) {
        let p = (wall.eval)(s)?;
        let wi = wall_integrand(p.plus, p.minus, p.normal).map_err(|e| match e {
            Error::InvalidTrace { reason, .. } => Error::InvalidTrace {
                vertex: 0,
                reason: format!("wall '{}' at σ={s}: {reason}", wall.label),
            },
            other => other,
        })?;
        terms.push(w * wi.jump_cube * p.speed);
    }
    Ok(pairwise_sum(&terms))
}

#[allow(non_snake_case)]
pub fn eval_E0_piecewise(field: &PiecewiseCriticalField, params: &Params) -> Result<EnergyBreakdown> {
    eval_E0_piecewise_with(field, params, QuadSpec::default())
}

/// Limit energy: (L/2)∫ v² |J| ds dt per family plus wall integrals.
#[allow(non_snake_case)]
pub fn eval_E0_piecewise_with(
    field: &PiecewiseCriticalField,
    params: &Params,
    quad: QuadSpec,
) -> Result<EnergyBreakdown> {
    let mut bulk = 0.0;
    for fam in &field.families {
        let rep = check_foliation(fam, 16, 16)?;
        if !rep.sign_consistent || rep.crossings > 0 {
            return Err(Error::Foliation {
                label: fam.label.clone(),
                reason: format!(
                    "jacobian range [{}, {}], {} crossings",
                    rep.min_jacobian, rep.max_jacobian, rep.crossings
                ),
            });
        }
        let b = fam.integrate(quad.s_panels, quad.t_panels, quad.order, |p, j| p.v * p.v * j)?;
        bulk += fam.multiplicity * 0.5 * params.l * b;
    }
    let (mut wi, mut wb) = (0.0, 0.0);
    for w in &field.walls {
        let v = w.multiplicity * integrate_wall(w, quad.wall_panels, quad.wall_order)?;
        if w.boundary {
            wb += v;
        } else {
            wi += v;
        }
    }
    Ok(EnergyBreakdown {
        bulk_div: bulk,
        wall_interior: wi,
        wall_boundary: wb,
        quadrature: Some(quad),
        ..Default::default()
    }
    .finish())
}
