use std::sync::Arc;

use rustfft::num_complex::Complex64 as C;
use rustfft::{Fft, FftPlanner};

use crate::grid::Grid2D;

type Block = [[C; 2]; 2];

const ZERO: Block = [[C::new(0.0, 0.0); 2]; 2];

fn mul(a: &Block, b: &Block) -> Block {
    let mut o = ZERO;
    for r in 0..2 {
        for c in 0..2 {
            o[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    o
}

fn mulv(a: &Block, v: [C; 2]) -> [C; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

fn inv(a: &Block) -> Block {
    let d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
}

fn sub(a: &Block, b: &Block) -> Block {
    let mut o = *a;
    for r in 0..2 {
        for c in 0..2 {
            o[r][c] -= b[r][c];
        }
    }
    o
}

/// Direct solver for a linear operator on nodal vectors that is invariant
/// under shifts along the periodic axis (x on rectangles, θ on polar grids
/// once vectors are written in the local (ê_r, ê_θ) frame) and couples only
/// nearest neighbours. Each Fourier mode leaves a block-tridiagonal system
/// along the other axis.
pub(crate) struct FourierSolver {
    np: usize,
    nl: usize,
    ni: usize,
    polar: bool,
    frame: Vec<(f64, f64)>,
    fwd: Arc<dyn Fft<f64>>,
    bwd: Arc<dyn Fft<f64>>,
    /// Per mode and line: the multiplier of the elimination and the
    /// inverse pivot.
    lower: Vec<Block>,
    pivot_inv: Vec<Block>,
    upper: Vec<Block>,
}

impl FourierSolver {
    fn idx(&self, p: usize, l: usize) -> usize {
        if self.polar {
            p * self.ni + l
        } else {
            l * self.ni + p
        }
    }

    fn to_local(&self, p: usize, u: [f64; 2]) -> [f64; 2] {
        let (c, s) = self.frame[p];
        [c * u[0] + s * u[1], -s * u[0] + c * u[1]]
    }

    fn to_global(&self, p: usize, w: [f64; 2]) -> [f64; 2] {
        let (c, s) = self.frame[p];
        [c * w[0] - s * w[1], s * w[0] + c * w[1]]
    }

    /// Probe `apply` to recover its stencil and factor every mode. Rows
    /// where `free` is false become identity rows.
    pub(crate) fn build<F>(grid: &Grid2D, free: &[bool], apply: F) -> Self
    where
        F: Fn(&[[f64; 2]], &mut [[f64; 2]]),
    {
        let (ni, nj) = grid.node_counts();
        let polar = grid.is_polar();
        let (np, nl) = if polar { (nj, ni) } else { (ni, nj) };
        let frame = (0..np)
            .map(|p| {
                if polar {
                    let (_, th) = grid.native(0, p);
                    (th.cos(), th.sin())
                } else {
                    (1.0, 0.0)
                }
            })
            .collect();
        let mut planner = FftPlanner::new();
        let mut s = FourierSolver {
            np,
            nl,
            ni,
            polar,
            frame,
            fwd: planner.plan_fft_forward(np),
            bwd: planner.plan_fft_inverse(np),
            lower: Vec::new(),
            pivot_inv: Vec::new(),
            upper: Vec::new(),
        };

        // stencil[l][dl + 1][dp + 1] couples row (l, p) to (l + dl, p + dp).
        let mut stencil = vec![[[[[0.0f64; 2]; 2]; 3]; 3]; nl];
        let n = grid.len();
        let mut x = vec![[0.0; 2]; n];
        let mut y = vec![[0.0; 2]; n];
        for colour in 0..3 {
            for comp in 0..2 {
                x.iter_mut().for_each(|v| *v = [0.0, 0.0]);
                for l in (colour..nl).step_by(3) {
                    let mut e = [0.0; 2];
                    e[comp] = 1.0;
                    let k = s.idx(0, l);
                    x[k] = s.to_global(0, e);
                }
                apply(&x, &mut y);
                for l in 0..nl {
                    for dl in -1i64..=1 {
                        let src = l as i64 + dl;
                        if src < 0 || src >= nl as i64 || src as usize % 3 != colour {
                            continue;
                        }
                        for dp in -1i64..=1 {
                            let p = (-dp).rem_euclid(np as i64) as usize;
                            let out = s.to_local(p, y[s.idx(p, l)]);
                            for r in 0..2 {
                                stencil[l][(dl + 1) as usize][(dp + 1) as usize][r][comp] = out[r];
                            }
                        }
                    }
                }
            }
        }
        let line_free: Vec<bool> = (0..nl).map(|l| free[s.idx(0, l)]).collect();

        let total = np * nl;
        s.lower = vec![ZERO; total];
        s.pivot_inv = vec![ZERO; total];
        s.upper = vec![ZERO; total];
        for q in 0..np {
            let symbol = |l: usize, dl: usize| -> Block {
                let mut b = ZERO;
                for dp in 0..3 {
                    let ph = std::f64::consts::TAU * q as f64 * (dp as f64 - 1.0) / np as f64;
                    let w = C::from_polar(1.0, ph);
                    for r in 0..2 {
                        for c in 0..2 {
                            b[r][c] += w * stencil[l][dl][dp][r][c];
                        }
                    }
                }
                b
            };
            let eye: Block = [[C::new(1.0, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::new(1.0, 0.0)]];
            let mut prev_pinv = ZERO;
            let mut prev_upper = ZERO;
            for l in 0..nl {
                let (a, d, c) = if line_free[l] {
                    (
                        if l > 0 && line_free[l - 1] { symbol(l, 0) } else { ZERO },
                        symbol(l, 1),
                        if l + 1 < nl && line_free[l + 1] { symbol(l, 2) } else { ZERO },
                    )
                } else {
                    (ZERO, eye, ZERO)
                };
                let m = mul(&a, &prev_pinv);
                let piv = sub(&d, &mul(&m, &prev_upper));
                let pinv = inv(&piv);
                let k = q * nl + l;
                s.lower[k] = m;
                s.pivot_inv[k] = pinv;
                s.upper[k] = c;
                prev_pinv = pinv;
                prev_upper = c;
            }
        }
        s
    }

    pub(crate) fn solve(&self, r: &[[f64; 2]], z: &mut [[f64; 2]]) {
        let (np, nl) = (self.np, self.nl);
        // freq[comp][l * np + q]
        let mut freq = [vec![C::new(0.0, 0.0); np * nl], vec![C::new(0.0, 0.0); np * nl]];
        for l in 0..nl {
            for p in 0..np {
                let w = self.to_local(p, r[self.idx(p, l)]);
                freq[0][l * np + p] = C::new(w[0], 0.0);
                freq[1][l * np + p] = C::new(w[1], 0.0);
            }
        }
        for comp in &mut freq {
            self.fwd.process(comp);
        }
        let mut rhs = vec![[C::new(0.0, 0.0); 2]; nl];
        for q in 0..np {
            for l in 0..nl {
                let mut v = [freq[0][l * np + q], freq[1][l * np + q]];
                if l > 0 {
                    let m = mulv(&self.lower[q * nl + l], rhs[l - 1]);
                    v = [v[0] - m[0], v[1] - m[1]];
                }
                rhs[l] = v;
            }
            for l in (0..nl).rev() {
                let k = q * nl + l;
                let mut v = rhs[l];
                if l + 1 < nl {
                    let c = mulv(&self.upper[k], rhs[l + 1]);
                    v = [v[0] - c[0], v[1] - c[1]];
                }
                rhs[l] = mulv(&self.pivot_inv[k], v);
            }
            for l in 0..nl {
                freq[0][l * np + q] = rhs[l][0];
                freq[1][l * np + q] = rhs[l][1];
            }
        }
        for comp in &mut freq {
            self.bwd.process(comp);
        }
        let scale = 1.0 / np as f64;
        for l in 0..nl {
            for p in 0..np {
                let w = [freq[0][l * np + p].re * scale, freq[1][l * np + p].re * scale];
                z[self.idx(p, l)] = self.to_global(p, w);
            }
        }
    }
}
