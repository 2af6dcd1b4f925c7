//! Zero sets of smooth functions on the torus `[0, 2π)²` by marching squares.
//!
//! Grid nodes sit at half-cell offsets so that the aligned positions
//! `{0, π}²` never coincide with a node. Saddle cells are resolved with the
//! cell-center average; the same rule is used when counting sign regions, so
//! contour and region counts always agree.

use std::f64::consts::TAU;

use serde::Serialize;

use super::TorusPoint;
use crate::geom::angle_diff;

/// A closed curve on the torus together with how often it winds around the
/// `phi` and `eta` directions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Contour {
    pub points: Vec<TorusPoint>,
    pub winding: (i64, i64),
}

impl Contour {
    /// Not contractible on the torus.
    pub fn is_essential(&self) -> bool {
        self.winding != (0, 0)
    }

    /// Moves every vertex onto the zero set of `f` by Newton steps along the
    /// gradient.
    pub fn project<F, G>(&mut self, f: F, grad: G, tol: f64)
    where
        F: Fn(TorusPoint) -> f64,
        G: Fn(TorusPoint) -> (f64, f64),
    {
        for p in &mut self.points {
            *p = newton_project(*p, &f, &grad, tol);
        }
    }
}

pub(crate) fn newton_project<F, G>(mut p: TorusPoint, f: &F, grad: &G, tol: f64) -> TorusPoint
where
    F: Fn(TorusPoint) -> f64,
    G: Fn(TorusPoint) -> (f64, f64),
{
    for _ in 0..12 {
        let v = f(p);
        if v.abs() <= tol {
            break;
        }
        let (gx, gy) = grad(p);
        let g2 = gx * gx + gy * gy;
        if g2 == 0.0 {
            break;
        }
        p = TorusPoint::new(p.phi - v * gx / g2, p.eta - v * gy / g2);
    }
    p
}

struct Grid {
    n: usize,
    h: f64,
    vals: Vec<f64>,
}

impl Grid {
    fn sample<F: Fn(TorusPoint) -> f64>(f: F, n: usize) -> Self {
        let h = TAU / n as f64;
        let mut vals = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                vals.push(f(TorusPoint::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)));
            }
        }
        Self { n, h, vals }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.vals[(i % self.n) * self.n + j % self.n]
    }

    fn pos(&self, i: usize, j: usize) -> bool {
        self.at(i, j) >= 0.0
    }

    /// Edge from node `(i, j)` to `(i+1, j)` (`vertical == false`) or
    /// `(i, j+1)`.
    fn edge_id(&self, i: usize, j: usize, vertical: bool) -> usize {
        2 * ((i % self.n) * self.n + j % self.n) + vertical as usize
    }

    fn edge_point(&self, id: usize) -> TorusPoint {
        let node = id / 2;
        let (i, j) = (node / self.n, node % self.n);
        let v0 = self.at(i, j);
        let (v1, di, dj) = if id % 2 == 0 {
            (self.at(i + 1, j), 1.0, 0.0)
        } else {
            (self.at(i, j + 1), 0.0, 1.0)
        };
        let s = v0 / (v0 - v1);
        TorusPoint::new(
            (i as f64 + 0.5 + s * di) * self.h,
            (j as f64 + 0.5 + s * dj) * self.h,
        )
    }

    /// Whether the saddle cell at `(i, j)` joins its `(i, j)`–`(i+1, j+1)`
    /// diagonal.
    fn center_joins_main_diagonal(&self, i: usize, j: usize) -> bool {
        let center =
            self.at(i, j) + self.at(i + 1, j) + self.at(i + 1, j + 1) + self.at(i, j + 1);
        (center >= 0.0) == self.pos(i, j)
    }

    fn is_saddle(&self, i: usize, j: usize) -> bool {
        let (c00, c10, c11, c01) = (
            self.pos(i, j),
            self.pos(i + 1, j),
            self.pos(i + 1, j + 1),
            self.pos(i, j + 1),
        );
        c00 == c11 && c10 == c01 && c00 != c10
    }
}

/// Closed components of `{f = 0}` sampled on an `n × n` grid.
pub fn zero_contours<F: Fn(TorusPoint) -> f64>(f: F, n: usize) -> Vec<Contour> {
    let grid = Grid::sample(f, n.max(4));
    let n = grid.n;
    const NONE: usize = usize::MAX;
    let mut links = vec![[NONE; 2]; 2 * n * n];
    let mut link = |x: usize, y: usize| {
        for (a, b) in [(x, y), (y, x)] {
            let slot = if links[a][0] == NONE { 0 } else { 1 };
            links[a][slot] = b;
        }
    };
    for i in 0..n {
        for j in 0..n {
            let bottom = grid.edge_id(i, j, false);
            let right = grid.edge_id(i + 1, j, true);
            let top = grid.edge_id(i, j + 1, false);
            let left = grid.edge_id(i, j, true);
            if grid.is_saddle(i, j) {
                if grid.center_joins_main_diagonal(i, j) {
                    link(bottom, right);
                    link(top, left);
                } else {
                    link(bottom, left);
                    link(top, right);
                }
                continue;
            }
            let crossing = [
                (bottom, grid.pos(i, j) != grid.pos(i + 1, j)),
                (right, grid.pos(i + 1, j) != grid.pos(i + 1, j + 1)),
                (top, grid.pos(i, j + 1) != grid.pos(i + 1, j + 1)),
                (left, grid.pos(i, j) != grid.pos(i, j + 1)),
            ];
            let ends: Vec<usize> = crossing.iter().filter(|c| c.1).map(|c| c.0).collect();
            if ends.len() == 2 {
                link(ends[0], ends[1]);
            }
        }
    }

    let mut visited = vec![false; links.len()];
    let mut out = Vec::new();
    for start in 0..links.len() {
        if visited[start] || links[start][0] == NONE {
            continue;
        }
        let mut points = Vec::new();
        let (mut prev, mut cur) = (NONE, start);
        let (mut dphi, mut deta) = (0.0, 0.0);
        loop {
            visited[cur] = true;
            let p = grid.edge_point(cur);
            if let Some(q) = points.last() {
                let q: &TorusPoint = q;
                dphi += angle_diff(p.phi, q.phi);
                deta += angle_diff(p.eta, q.eta);
            }
            points.push(p);
            let next = if links[cur][0] != prev { links[cur][0] } else { links[cur][1] };
            if next == NONE || next == start {
                break;
            }
            prev = cur;
            cur = next;
        }
        let first = points[0];
        let last = *points.last().expect("nonempty contour");
        dphi += angle_diff(first.phi, last.phi);
        deta += angle_diff(first.eta, last.eta);
        out.push(Contour {
            points,
            winding: ((dphi / TAU).round() as i64, (deta / TAU).round() as i64),
        });
    }
    out
}

/// Number of connected regions of `{f ≥ 0}` and `{f < 0}` together.
pub fn count_sign_regions<F: Fn(TorusPoint) -> f64>(f: F, n: usize) -> usize {
    let grid = Grid::sample(f, n.max(4));
    let n = grid.n;
    let mut label = vec![usize::MAX; n * n];
    let mut regions = 0;
    let mut stack = Vec::new();
    for seed in 0..n * n {
        if label[seed] != usize::MAX {
            continue;
        }
        label[seed] = regions;
        stack.push(seed);
        while let Some(node) = stack.pop() {
            let (i, j) = (node / n, node % n);
            let sign = grid.pos(i, j);
            let mut neighbors = vec![
                ((i + 1) % n, j),
                ((i + n - 1) % n, j),
                (i, (j + 1) % n),
                (i, (j + n - 1) % n),
            ];
            // diagonal joins through saddle cells, matching the contour rule
            for (ci, cj, di, dj, main) in [
                (i, j, 1, 1, true),
                ((i + n - 1) % n, (j + n - 1) % n, n - 1, n - 1, true),
                ((i + n - 1) % n, j, n - 1, 1, false),
                (i, (j + n - 1) % n, 1, n - 1, false),
            ] {
                if grid.is_saddle(ci, cj) {
                    if grid.center_joins_main_diagonal(ci, cj) == main {
                        neighbors.push(((i + di) % n, (j + dj) % n));
                    }
                }
            }
            for (a, b) in neighbors {
                let k = a * n + b;
                if label[k] == usize::MAX && grid.pos(a, b) == sign {
                    label[k] = regions;
                    stack.push(k);
                }
            }
        }
        regions += 1;
    }
    regions
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_circle_is_inessential() {
        let f = |p: TorusPoint| {
            let x = angle_diff(p.phi, 1.0);
            let y = angle_diff(p.eta, 2.0);
            x * x + y * y - 0.25
        };
        let cs = zero_contours(f, 64);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].winding, (0, 0));
        assert_eq!(count_sign_regions(f, 64), 2);
    }

    #[test]
    fn parallel_essential_curves() {
        let f = |p: TorusPoint| p.eta.sin();
        let cs = zero_contours(f, 64);
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.winding.0.abs() == 1 && c.winding.1 == 0));
        assert_eq!(count_sign_regions(f, 64), 2);
    }

    #[test]
    fn diagonal_curve() {
        let f = |p: TorusPoint| (p.phi - p.eta).sin();
        let cs = zero_contours(f, 64);
        assert_eq!(cs.len(), 2);
        for c in &cs {
            assert_eq!(c.winding.0.abs(), 1);
            assert_eq!(c.winding.0, c.winding.1);
        }
    }

    #[test]
    fn projection_lands_on_zero_set() {
        let f = |p: TorusPoint| p.phi.cos() + 0.5 * p.eta.cos();
        let g = |p: TorusPoint| (-p.phi.sin(), -0.5 * p.eta.sin());
        let mut cs = zero_contours(f, 48);
        for c in &mut cs {
            c.project(f, g, 1e-14);
            assert!(c.points.iter().all(|p| f(*p).abs() < 1e-13));
        }
    }
}
