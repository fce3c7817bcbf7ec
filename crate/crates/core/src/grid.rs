//! Uniform structured grids, rectangular or polar.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Rectangle,
    Polar,
}

/// A uniform grid. For rectangles the first axis is x and the second y;
/// for polar grids they are r and θ, and θ is always periodic.
///
/// Nodes are numbered `j * ni + i` with `i` along the first axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub kind: GridKind,
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub periodic_x: bool,
}

/// Smallest allowed disc cutoff radius for an outer radius `r_out`.
pub fn disc_cutoff(r_out: f64) -> f64 {
    (1e-3f64).max(r_out / 1024.0)
}

/// Build a grid. `extents` is `[x0, x1, y0, y1]`; for polar grids it is
/// `[r_in, r_out, 0, 2π]`.
pub fn make_grid(
    kind: GridKind,
    extents: [f64; 4],
    nx: usize,
    ny: usize,
    periodic_x: bool,
) -> Result<Grid2D> {
    if nx < 4 || ny < 4 {
        return Err(Error::CountsTooSmall { nx, ny });
    }
    let [x0, x1, y0, y1] = extents;
    if extents.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidExtents(format!("non-finite extents {extents:?}")));
    }
    if !(x1 > x0) || !(y1 > y0) {
        return Err(Error::InvalidExtents(format!(
            "need x0 < x1 and y0 < y1, got {extents:?}"
        )));
    }
    if kind == GridKind::Polar {
        if x0 < 0.0 {
            return Err(Error::InvalidExtents(format!("polar r_in = {x0} < 0")));
        }
        if y0 != 0.0 || (y1 - TAU).abs() > 1e-12 {
            return Err(Error::InvalidExtents(format!(
                "polar angular range must be [0, 2π), got [{y0}, {y1})"
            )));
        }
    }
    Ok(Grid2D {
        kind,
        nx,
        ny,
        x0,
        x1,
        y0,
        y1: if kind == GridKind::Polar { TAU } else { y1 },
        periodic_x: kind == GridKind::Rectangle && periodic_x,
    })
}

impl Grid2D {
    /// Rectangle `[-t, t] × [-h, h]`.
    pub fn rectangle(t: f64, h: f64, nx: usize, ny: usize, periodic_x: bool) -> Result<Self> {
        make_grid(GridKind::Rectangle, [-t, t, -h, h], nx, ny, periodic_x)
    }

    pub fn polar(r_in: f64, r_out: f64, nr: usize, ntheta: usize) -> Result<Self> {
        make_grid(GridKind::Polar, [r_in, r_out, 0.0, TAU], nr, ntheta, false)
    }

    /// Disc of radius `r` with the standard inner cutoff.
    pub fn disc(r: f64, nr: usize, ntheta: usize) -> Result<Self> {
        Self::polar(disc_cutoff(r), r, nr, ntheta)
    }

    pub fn is_polar(&self) -> bool {
        self.kind == GridKind::Polar
    }

    /// Node counts along the two axes.
    pub fn node_counts(&self) -> (usize, usize) {
        match self.kind {
            GridKind::Rectangle => (
                if self.periodic_x { self.nx } else { self.nx + 1 },
                self.ny + 1,
            ),
            GridKind::Polar => (self.nx + 1, self.ny),
        }
    }

    pub fn len(&self) -> usize {
        let (a, b) = self.node_counts();
        a * b
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self) -> (f64, f64) {
        (
            (self.x1 - self.x0) / self.nx as f64,
            (self.y1 - self.y0) / self.ny as f64,
        )
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.node_counts().0 + i
    }

    /// Native coordinates (x, y) or (r, θ) of node (i, j).
    pub fn native(&self, i: usize, j: usize) -> (f64, f64) {
        let (dx, dy) = self.spacing();
        (self.x0 + i as f64 * dx, self.y0 + j as f64 * dy)
    }

    /// Cartesian coordinates of node (i, j).
    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        let (a, b) = self.native(i, j);
        match self.kind {
            GridKind::Rectangle => [a, b],
            GridKind::Polar => [a * b.cos(), a * b.sin()],
        }
    }

    /// Cartesian point at fractional lattice indices.
    pub fn point_at(&self, fi: f64, fj: f64) -> [f64; 2] {
        let (dx, dy) = self.spacing();
        let a = self.x0 + fi * dx;
        let b = self.y0 + fj * dy;
        match self.kind {
            GridKind::Rectangle => [a, b],
            GridKind::Polar => [a * b.cos(), a * b.sin()],
        }
    }

    pub fn nodes(&self) -> Vec<[f64; 2]> {
        let (ni, nj) = self.node_counts();
        let mut out = Vec::with_capacity(ni * nj);
        for j in 0..nj {
            for i in 0..ni {
                out.push(self.node(i, j));
            }
        }
        out
    }
}
