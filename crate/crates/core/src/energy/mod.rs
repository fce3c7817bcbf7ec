//! Energy evaluation: the relaxed energy on grids, the limit energy on
//! piecewise critical fields, and the one-dimensional energies.

mod criticality;
mod eps;
mod limit;
mod oned;
mod wall;

use serde::{Deserialize, Serialize};

use crate::params::Params;

pub use criticality::{criticality_residuals, el13_residual, el4_residual, CriticalityReport};
pub use eps::{eval_E_eps, nodal_weights, EpsTerms};
pub(crate) use eps::{energy_and_gradient, nodal_divergence};
pub use limit::{eval_E0_piecewise, eval_E0_piecewise_with, integrate_wall, QuadSpec};
pub use oned::{eval_E0_1d, eval_E_eps_1d, GridProfile1D};
pub use wall::{wall_cost_density, wall_integrand, WallIntegrand};

/// Itemized energy. Terms not used by a given functional stay zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub grad: f64,
    pub potential: f64,
    pub bulk_div: f64,
    pub wall_interior: f64,
    pub wall_boundary: f64,
    pub total: f64,
    #[serde(skip)]
    pub quadrature: Option<QuadSpec>,
}

impl EnergyBreakdown {
    /// Set `total` to the sum of the terms.
    pub fn finish(mut self) -> Self {
        self.total = self.grad + self.potential + self.bulk_div + self.wall_interior + self.wall_boundary;
        self
    }

    pub fn scaled(self, k: f64) -> Self {
        EnergyBreakdown {
            grad: k * self.grad,
            potential: k * self.potential,
            bulk_div: k * self.bulk_div,
            wall_interior: k * self.wall_interior,
            wall_boundary: k * self.wall_boundary,
            total: k * self.total,
            quadrature: self.quadrature,
        }
    }

    pub fn report(&self, params: &Params) -> EnergyReport {
        EnergyReport {
            grad: self.grad,
            potential: self.potential,
            bulk_div: self.bulk_div,
            wall_interior: self.wall_interior,
            wall_boundary: self.wall_boundary,
            total: self.total,
            params: *params,
        }
    }
}

/// JSON form of an energy evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub grad: f64,
    pub potential: f64,
    pub bulk_div: f64,
    pub wall_interior: f64,
    pub wall_boundary: f64,
    pub total: f64,
    pub params: Params,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_is_sum() {
        let e = EnergyBreakdown {
            grad: 1.0,
            potential: 2.0,
            bulk_div: 3.0,
            wall_interior: 4.0,
            wall_boundary: 5.0,
            ..Default::default()
        }
        .finish();
        assert_eq!(e.total, 15.0);
    }

    #[test]
    fn report_keys() {
        let r = EnergyBreakdown::default().finish().report(&Params::default());
        let v = serde_json::to_value(r).unwrap();
        let mut keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        keys.sort();
        assert_eq!(
            keys,
            ["bulk_div", "grad", "params", "potential", "total", "wall_boundary", "wall_interior"]
        );
    }
}
