use std::collections::HashMap;

/// An ordered list of points; closed when first == last.
pub type Polyline = Vec<[f64; 2]>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct EdgeId(u8, usize, usize);

/// Level set of a nodal scalar on an `ni × nj` lattice (index `j * ni + i`).
///
/// `coord(fi, fj)` maps fractional lattice indices to physical points, so
/// the same routine serves rectangular and polar grids. With `wrap_i` the
/// lattice is periodic in `i`.
pub fn marching_squares<C>(
    values: &[f64],
    ni: usize,
    nj: usize,
    wrap_i: bool,
    coord: C,
    level: f64,
) -> Vec<Polyline>
where
    C: Fn(f64, f64) -> [f64; 2],
{
    assert_eq!(values.len(), ni * nj);
    let at = |i: usize, j: usize| values[j * ni + (i % ni)] - level;
    let cells_i = if wrap_i { ni } else { ni - 1 };

    let point_on = |e: EdgeId| -> [f64; 2] {
        let EdgeId(kind, i, j) = e;
        let (a, b) = if kind == 0 {
            (at(i, j), at(i + 1, j))
        } else {
            (at(i, j), at(i, j + 1))
        };
        let s = if a == b { 0.5 } else { a / (a - b) };
        if kind == 0 {
            coord(i as f64 + s, j as f64)
        } else {
            coord(i as f64, j as f64 + s)
        }
    };

    let mut segs: Vec<(EdgeId, EdgeId)> = Vec::new();
    for j in 0..nj.saturating_sub(1) {
        for i in 0..cells_i {
            let c = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            let mut idx = 0u8;
            for (k, v) in c.iter().enumerate() {
                if *v > 0.0 {
                    idx |= 1 << k;
                }
            }
            let bottom = EdgeId(0, i, j);
            let right = EdgeId(1, i + 1, j);
            let top = EdgeId(0, i, j + 1);
            let left = EdgeId(1, i, j);
            let centre_pos = c.iter().sum::<f64>() > 0.0;
            match idx {
                0 | 15 => {}
                1 | 14 => segs.push((left, bottom)),
                2 | 13 => segs.push((bottom, right)),
                3 | 12 => segs.push((left, right)),
                4 | 11 => segs.push((right, top)),
                6 | 9 => segs.push((bottom, top)),
                7 | 8 => segs.push((left, top)),
                5 => {
                    if centre_pos {
                        segs.push((left, top));
                        segs.push((bottom, right));
                    } else {
                        segs.push((left, bottom));
                        segs.push((right, top));
                    }
                }
                10 => {
                    if centre_pos {
                        segs.push((left, bottom));
                        segs.push((right, top));
                    } else {
                        segs.push((left, top));
                        segs.push((bottom, right));
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    let norm = |e: EdgeId| -> EdgeId {
        if wrap_i {
            EdgeId(e.0, e.1 % ni, e.2)
        } else {
            e
        }
    };
    let segs: Vec<(EdgeId, EdgeId)> = segs.into_iter().map(|(a, b)| (norm(a), norm(b))).collect();
    let mut by_edge: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in segs.iter().enumerate() {
        by_edge.entry(*a).or_default().push(k);
        by_edge.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segs.len()];
    let mut lines = Vec::new();

    let walk = |start_edge: EdgeId, used: &mut Vec<bool>, out: &mut Vec<EdgeId>| {
        let mut cur = start_edge;
        loop {
            let next = by_edge
                .get(&cur)
                .and_then(|v| v.iter().copied().find(|&k| !used[k]));
            let Some(k) = next else { break };
            used[k] = true;
            let (a, b) = segs[k];
            cur = if a == cur { b } else { a };
            out.push(cur);
        }
    };

    // Open chains first (start at edges touched by a single segment), then loops.
    let mut starts: Vec<EdgeId> = by_edge
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(e, _)| *e)
        .collect();
    starts.sort_by_key(|e| (e.2, e.1, e.0));
    for e in starts {
        if by_edge[&e].iter().all(|&k| used[k]) {
            continue;
        }
        let mut chain = vec![e];
        walk(e, &mut used, &mut chain);
        lines.push(chain.into_iter().map(point_on).collect());
    }
    for k in 0..segs.len() {
        if used[k] {
            continue;
        }
        let e = segs[k].0;
        let mut chain = vec![e];
        walk(e, &mut used, &mut chain);
        lines.push(chain.into_iter().map(point_on).collect());
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_level_set() {
        let n = 41;
        let h = 2.0 / (n - 1) as f64;
        let mut v = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..n {
                let x = -1.0 + i as f64 * h;
                let y = -1.0 + j as f64 * h;
                v[j * n + i] = x * x + y * y;
            }
        }
        let lines = marching_squares(&v, n, n, false, |fi, fj| [-1.0 + fi * h, -1.0 + fj * h], 0.25);
        assert_eq!(lines.len(), 1);
        let l = &lines[0];
        assert_eq!(l.first(), l.last());
        for p in l {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!((r - 0.5).abs() < 5e-3);
        }
    }

    #[test]
    fn straight_line_is_open() {
        let (ni, nj) = (10, 6);
        let v: Vec<f64> = (0..ni * nj).map(|k| (k % ni) as f64).collect();
        let lines = marching_squares(&v, ni, nj, false, |fi, fj| [fi, fj], 3.5);
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].len(), nj);
        assert!(lines[0].iter().all(|p| (p[0] - 3.5).abs() < 1e-12));
    }
}
