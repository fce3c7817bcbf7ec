use crate::error::{Error, Result};

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Both equivalent forms of the wall cost density at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallIntegrand {
    /// (1/6)|u₊ − u₋|³
    pub jump_cube: f64,
    /// (4/3)(1 − (u·ν)²)^{3/2}
    pub sin_form: f64,
}

fn check_unit(u: [f64; 2], what: &str) -> Result<()> {
    let n = u[0].hypot(u[1]);
    if (n - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidTrace {
            vertex: 0,
            reason: format!("|{what}| = {n}"),
        });
    }
    Ok(())
}

/// (1/6)|u₊ − u₋|³ for unit traces.
pub fn wall_cost_density(plus: [f64; 2], minus: [f64; 2]) -> Result<f64> {
    check_unit(plus, "u+")?;
    check_unit(minus, "u-")?;
    let d = (plus[0] - minus[0]).hypot(plus[1] - minus[1]);
    Ok(d * d * d / 6.0)
}

/// Wall integrand with the normal-continuity check `u₊·ν = u₋·ν`.
pub fn wall_integrand(plus: [f64; 2], minus: [f64; 2], normal: [f64; 2]) -> Result<WallIntegrand> {
    let jump_cube = wall_cost_density(plus, minus)?;
    let (a, b) = (dot(plus, normal), dot(minus, normal));
    if (a - b).abs() > 1e-8 {
        return Err(Error::InvalidTrace {
            vertex: 0,
            reason: format!("normal components differ: {a} vs {b}"),
        });
    }
    let c = (1.0 - a * a).max(0.0);
    Ok(WallIntegrand {
        jump_cube,
        sin_form: 4.0 / 3.0 * c * c.sqrt(),
    })
}
