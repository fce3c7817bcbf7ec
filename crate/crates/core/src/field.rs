//! Sampled vector fields on structured grids.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::Grid2D;

/// Cartesian components `(u1, u2)` at every node of `grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    pub grid: Grid2D,
    pub values: Vec<[f64; 2]>,
}

impl Field2D {
    pub fn new(grid: Grid2D, values: Vec<[f64; 2]>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "field has {} values but grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(index) = values
            .iter()
            .position(|v| !(v[0].is_finite() && v[1].is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Field2D { grid, values })
    }

    pub fn constant(grid: Grid2D, u: [f64; 2]) -> Self {
        let n = grid.len();
        Field2D {
            grid,
            values: vec![u; n],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> [f64; 2] {
        self.values[self.grid.index(i, j)]
    }

    /// Snapshot CSV `x,y,u1,u2`, one row per node, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,y,u1,u2")?;
        for (p, u) in self.grid.nodes().iter().zip(&self.values) {
            writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e}", p[0], p[1], u[0], u[1])?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv(f)
    }

    /// Read a snapshot written by [`Field2D::write_csv`] back onto `grid`.
    /// Rows must list the grid nodes in order.
    pub fn read_csv<R: BufRead>(grid: &Grid2D, r: R) -> Result<Self> {
        let nodes = grid.nodes();
        let mut values = Vec::with_capacity(nodes.len());
        let mut lines = r.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == "x,y,u1,u2" => {}
            _ => return Err(Error::Parse("expected header x,y,u1,u2".into())),
        }
        let scale = grid.x1.abs().max(grid.y1.abs()).max(1.0);
        for (k, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", k + 1)))?;
            if cols.len() != 4 {
                return Err(Error::Parse(format!("row {}: expected 4 columns", k + 1)));
            }
            let p = nodes
                .get(k)
                .ok_or_else(|| Error::Parse(format!("more rows than the {} grid nodes", nodes.len())))?;
            if (p[0] - cols[0]).abs() > 1e-9 * scale || (p[1] - cols[1]).abs() > 1e-9 * scale {
                return Err(Error::Parse(format!(
                    "row {} is at ({}, {}) but node {k} is at ({}, {})",
                    k + 1,
                    cols[0],
                    cols[1],
                    p[0],
                    p[1]
                )));
            }
            values.push([cols[2], cols[3]]);
        }
        Field2D::new(grid.clone(), values)
    }
}

/// Evaluate `f` at every node.
pub fn sample_analytic<F>(grid: &Grid2D, f: F) -> Result<Field2D>
where
    F: Fn(f64, f64) -> [f64; 2],
{
    let values: Vec<[f64; 2]> = grid.nodes().into_iter().map(|p| f(p[0], p[1])).collect();
    Field2D::new(grid.clone(), values)
}
