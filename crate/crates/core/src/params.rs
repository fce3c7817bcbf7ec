//! The parameter bundle shared by all constructions and solvers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical and geometric parameters.
///
/// `l` is the elastic (divergence) coefficient, `eps` the
/// singular-perturbation scale used only by the relaxed energy, `h`/`t`
/// the half-height/half-period of the rectangle, `r` the disc radius (or
/// annulus outer radius) and `a` the vertical component of the
/// rectangle boundary data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub l: f64,
    pub eps: f64,
    pub h: f64,
    pub t: f64,
    pub r: f64,
    pub a: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            l: 1.0,
            eps: 0.01,
            h: 1.0,
            t: 1.0,
            r: 1.0,
            a: 0.0,
        }
    }
}

impl Params {
    pub fn new(l: f64, eps: f64, h: f64, t: f64, r: f64, a: f64) -> Result<Self> {
        let p = Params { l, eps, h, t, r, a };
        p.validate()?;
        Ok(p)
    }

    /// Convenience constructor keeping the defaults for everything but `l`.
    pub fn with_l(l: f64) -> Result<Self> {
        Params {
            l,
            ..Default::default()
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// All violated range constraints, in declaration order.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let positive = [
            ("L", self.l),
            ("eps", self.eps),
            ("H", self.h),
            ("T", self.t),
            ("R", self.r),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                out.push(format!("{name} > 0 (got {v})"));
            }
        }
        if !(self.a.is_finite() && (0.0..1.0).contains(&self.a)) {
            out.push(format!("a ∈ [0,1) (got {})", self.a));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(v.join("; ")))
        }
    }
}
