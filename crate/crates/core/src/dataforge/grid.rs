//! Structured bilinear-quadrilateral grids and the node-to-unknown map.

use crate::error::{Error, Result};
use crate::problem::{Rect, Side};

/// Default element density along every boundary.
pub const DEFAULT_RESOLUTION: usize = 200;

/// Reference-square corners in counterclockwise order.
pub(crate) const CORNERS: [[f64; 2]; 4] = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];

/// 2x2 Gauss points on the reference square (unit weights).
pub(crate) const GAUSS: [[f64; 2]; 4] = {
    const G: f64 = 0.577_350_269_189_625_8;
    [[-G, -G], [G, -G], [G, G], [-G, G]]
};

/// Uniform grid of `nx x ny` rectangular elements covering a rectangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub domain: Rect,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    /// Grid with about `per_unit` elements per unit length on every side.
    pub fn new(domain: Rect, per_unit: usize) -> Result<Self> {
        if per_unit == 0 {
            return Err(Error::Config(
                "mesh resolution must be at least one element per unit length".into(),
            ));
        }
        let n = |len: f64| ((len * per_unit as f64).round() as usize).max(1);
        Ok(Self {
            domain,
            nx: n(domain.width()),
            ny: n(domain.height()),
        })
    }

    pub fn with_counts(domain: Rect, nx: usize, ny: usize) -> Self {
        Self { domain, nx, ny }
    }

    pub fn hx(&self) -> f64 {
        self.domain.width() / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        self.domain.height() / self.ny as f64
    }

    pub fn num_nodes(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    pub fn num_elements(&self) -> usize {
        self.nx * self.ny
    }

    pub fn node(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }

    pub fn node_ij(&self, n: usize) -> (usize, usize) {
        (n % (self.nx + 1), n / (self.nx + 1))
    }

    pub fn node_xy(&self, n: usize) -> [f64; 2] {
        let (i, j) = self.node_ij(n);
        [
            self.domain.x_min + i as f64 * self.hx(),
            self.domain.y_min + j as f64 * self.hy(),
        ]
    }

    pub fn element(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Corner nodes of element `e`, counterclockwise from the lower left.
    pub fn element_nodes(&self, e: usize) -> [usize; 4] {
        let (i, j) = (e % self.nx, e / self.nx);
        [
            self.node(i, j),
            self.node(i + 1, j),
            self.node(i + 1, j + 1),
            self.node(i, j + 1),
        ]
    }

    pub fn centroid(&self, e: usize) -> [f64; 2] {
        let (i, j) = (e % self.nx, e / self.nx);
        [
            self.domain.x_min + (i as f64 + 0.5) * self.hx(),
            self.domain.y_min + (j as f64 + 0.5) * self.hy(),
        ]
    }

    /// Element containing `x` and the reference coordinates of `x` in it.
    pub fn locate(&self, x: [f64; 2]) -> Result<(usize, [f64; 2])> {
        if !self.domain.contains(x, 1e-12) {
            return Err(Error::Domain(x[0], x[1]));
        }
        let fx = (x[0] - self.domain.x_min) / self.hx();
        let fy = (x[1] - self.domain.y_min) / self.hy();
        let i = (fx.floor().max(0.0) as usize).min(self.nx - 1);
        let j = (fy.floor().max(0.0) as usize).min(self.ny - 1);
        Ok((
            self.element(i, j),
            [2.0 * (fx - i as f64) - 1.0, 2.0 * (fy - j as f64) - 1.0],
        ))
    }

    /// Nodes along a side in increasing coordinate order.
    pub fn side_nodes(&self, side: Side) -> Vec<usize> {
        match side {
            Side::Bottom => (0..=self.nx).map(|i| self.node(i, 0)).collect(),
            Side::Top => (0..=self.nx).map(|i| self.node(i, self.ny)).collect(),
            Side::Left => (0..=self.ny).map(|j| self.node(0, j)).collect(),
            Side::Right => (0..=self.ny).map(|j| self.node(self.nx, j)).collect(),
        }
    }

    /// Elements adjacent to a side, in the same order as its edges.
    pub fn side_elements(&self, side: Side) -> Vec<usize> {
        match side {
            Side::Bottom => (0..self.nx).map(|i| self.element(i, 0)).collect(),
            Side::Top => (0..self.nx).map(|i| self.element(i, self.ny - 1)).collect(),
            Side::Left => (0..self.ny).map(|j| self.element(0, j)).collect(),
            Side::Right => (0..self.ny).map(|j| self.element(self.nx - 1, j)).collect(),
        }
    }
}

/// Bilinear shape functions at reference point `p`.
pub(crate) fn shape(p: [f64; 2]) -> [f64; 4] {
    CORNERS.map(|c| 0.25 * (1.0 + c[0] * p[0]) * (1.0 + c[1] * p[1]))
}

/// Physical gradients of the shape functions on an `hx x hy` element.
pub(crate) fn shape_grad(p: [f64; 2], hx: f64, hy: f64) -> [[f64; 2]; 4] {
    CORNERS.map(|c| {
        [
            0.5 * c[0] * (1.0 + c[1] * p[1]) / hx,
            0.5 * c[1] * (1.0 + c[0] * p[0]) / hy,
        ]
    })
}

/// Affine expression `offset + sum coef * unknown` for one nodal component.
#[derive(Clone, Debug, Default, PartialEq)]
pub(crate) struct Lin {
    pub terms: Vec<(usize, f64)>,
    pub offset: f64,
}

/// Maps nodal components to unknowns, eliminating prescribed values and
/// tying periodic images and rigid or isothermal bodies to shared unknowns.
#[derive(Clone, Debug)]
pub(crate) struct DofMap {
    pub ncomp: usize,
    /// Indexed by `node * ncomp + comp`.
    pub lin: Vec<Lin>,
    pub active: Vec<bool>,
    pub ndof: usize,
    /// Number of connected tied bodies that kept their own unknowns.
    #[cfg_attr(not(test), allow(dead_code))]
    pub free_bodies: usize,
}

impl DofMap {
    /// `active_elem` marks elements that carry material; `body_elem` marks
    /// elements of a tied body. Elastic bodies (`ncomp = 2`) move rigidly with
    /// three unknowns, scalar bodies share one value. A body touching a
    /// prescribed node takes the prescribed value everywhere.
    pub fn build(
        grid: &Grid,
        ncomp: usize,
        active_elem: &[bool],
        body_elem: &[bool],
        fixed: &[(usize, usize, f64)],
        periodic_x: bool,
    ) -> Result<Self> {
        let nn = grid.num_nodes();
        let rep = |n: usize| {
            let (i, j) = grid.node_ij(n);
            if periodic_x && i == grid.nx {
                grid.node(0, j)
            } else {
                n
            }
        };
        let mut active = vec![false; nn];
        for e in 0..grid.num_elements() {
            if active_elem[e] || body_elem[e] {
                for n in grid.element_nodes(e) {
                    active[n] = true;
                    active[rep(n)] = true;
                }
            }
        }
        let mut prescribed: Vec<Option<f64>> = vec![None; nn * ncomp];
        for &(n, c, v) in fixed {
            if c >= ncomp || n >= nn {
                return Err(Error::Config(format!(
                    "constraint on node {n}, component {c} is out of range"
                )));
            }
            let slot = &mut prescribed[rep(n) * ncomp + c];
            if matches!(*slot, Some(old) if old != v) {
                return Err(Error::Config(format!("conflicting prescribed values at node {n}")));
            }
            *slot = Some(v);
        }

        // Union-find over representative nodes of body elements.
        let mut parent: Vec<usize> = (0..nn).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        let mut in_body = vec![false; nn];
        for e in 0..grid.num_elements() {
            if body_elem[e] {
                let ns = grid.element_nodes(e).map(rep);
                for &n in &ns {
                    in_body[n] = true;
                }
                for w in ns.windows(2) {
                    let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                    parent[a] = b;
                }
            }
        }

        let mut lin = vec![Lin::default(); nn * ncomp];
        let mut ndof = 0;
        let mut free_bodies = 0;
        let mut body_roots: Vec<usize> = (0..nn).filter(|&n| in_body[n]).map(|n| find(&mut parent, n)).collect();
        body_roots.sort_unstable();
        body_roots.dedup();
        let mut assigned = vec![false; nn];
        for root in body_roots {
            let members: Vec<usize> = (0..nn)
                .filter(|&n| in_body[n] && find(&mut parent, n) == root)
                .collect();
            let fixed_vals: Vec<f64> = members
                .iter()
                .flat_map(|&n| (0..ncomp).map(move |c| (n, c)))
                .filter_map(|(n, c)| prescribed[n * ncomp + c])
                .collect();
            if let Some(&v) = fixed_vals.first() {
                if fixed_vals.iter().any(|&w| w != v) || (ncomp == 2 && v != 0.0) {
                    return Err(Error::Config(
                        "a tied body touches prescribed values it cannot satisfy".into(),
                    ));
                }
                for &n in &members {
                    for c in 0..ncomp {
                        lin[n * ncomp + c] = Lin {
                            terms: vec![],
                            offset: v,
                        };
                    }
                    assigned[n] = true;
                }
                continue;
            }
            if periodic_x && members.iter().any(|&n| grid.node_ij(n).0 == 0) && ncomp == 2 {
                return Err(Error::Config(
                    "a free rigid body may not cross the periodic seam".into(),
                ));
            }
            free_bodies += 1;
            if ncomp == 1 {
                for &n in &members {
                    lin[n] = Lin {
                        terms: vec![(ndof, 1.0)],
                        offset: 0.0,
                    };
                    assigned[n] = true;
                }
                ndof += 1;
            } else {
                let m = members.len() as f64;
                let c: [f64; 2] = members.iter().fold([0.0, 0.0], |acc, &n| {
                    let x = grid.node_xy(n);
                    [acc[0] + x[0] / m, acc[1] + x[1] / m]
                });
                let (u, v, th) = (ndof, ndof + 1, ndof + 2);
                for &n in &members {
                    let x = grid.node_xy(n);
                    lin[2 * n] = Lin {
                        terms: vec![(u, 1.0), (th, -(x[1] - c[1]))],
                        offset: 0.0,
                    };
                    lin[2 * n + 1] = Lin {
                        terms: vec![(v, 1.0), (th, x[0] - c[0])],
                        offset: 0.0,
                    };
                    assigned[n] = true;
                }
                ndof += 3;
            }
        }

        for n in 0..nn {
            if rep(n) != n || !active[n] || assigned[n] {
                continue;
            }
            for c in 0..ncomp {
                lin[n * ncomp + c] = match prescribed[n * ncomp + c] {
                    Some(v) => Lin {
                        terms: vec![],
                        offset: v,
                    },
                    None => {
                        ndof += 1;
                        Lin {
                            terms: vec![(ndof - 1, 1.0)],
                            offset: 0.0,
                        }
                    }
                };
            }
        }
        for n in 0..nn {
            let r = rep(n);
            if r != n {
                for c in 0..ncomp {
                    lin[n * ncomp + c] = lin[r * ncomp + c].clone();
                }
                active[n] = active[r];
            }
        }
        Ok(Self {
            ncomp,
            lin,
            active,
            ndof,
            free_bodies,
        })
    }

    /// Nodal values `ncomp` per node for the unknowns `x`; `NaN` on inactive nodes.
    pub fn expand(&self, x: &[f64]) -> Vec<f64> {
        self.lin
            .iter()
            .enumerate()
            .map(|(k, l)| {
                if self.active[k / self.ncomp] {
                    l.offset + l.terms.iter().map(|&(g, c)| c * x[g]).sum::<f64>()
                } else {
                    f64::NAN
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_follow_resolution() {
        let g = Grid::new(Rect::new(-1.0, 1.0, -0.5, 0.5), 200).unwrap();
        assert_eq!((g.nx, g.ny), (400, 200));
        assert_eq!(g.num_elements(), 80_000);
        assert!((g.hx() - 0.005).abs() < 1e-15);
    }

    #[test]
    fn locate_and_shape_functions() {
        let g = Grid::with_counts(Rect::new(0.0, 1.0, 0.0, 1.0), 4, 4);
        let (e, p) = g.locate([0.3, 0.9]).unwrap();
        assert_eq!(e, g.element(1, 3));
        let nodes = g.element_nodes(e);
        let n = shape(p);
        let x: f64 = (0..4).map(|a| n[a] * g.node_xy(nodes[a])[0]).sum();
        assert!((x - 0.3).abs() < 1e-15);
        assert!((n.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(g.locate([1.0, 1.0]).is_ok());
        assert!(matches!(g.locate([1.1, 0.0]), Err(Error::Domain(..))));
        let d = shape_grad([0.2, -0.4], 0.25, 0.25);
        let sx: f64 = d.iter().map(|v| v[0]).sum();
        assert!(sx.abs() < 1e-15);
    }

    #[test]
    fn periodic_images_share_unknowns() {
        let g = Grid::with_counts(Rect::new(0.0, 1.0, 0.0, 1.0), 3, 2);
        let all = vec![true; g.num_elements()];
        let none = vec![false; g.num_elements()];
        let m = DofMap::build(&g, 1, &all, &none, &[], true).unwrap();
        assert_eq!(m.ndof, 3 * 3);
        assert_eq!(m.lin[g.node(3, 1)], m.lin[g.node(0, 1)]);
    }

    #[test]
    fn rigid_body_has_three_unknowns() {
        let g = Grid::with_counts(Rect::new(0.0, 1.0, 0.0, 1.0), 3, 3);
        let mut body = vec![false; 9];
        body[g.element(1, 1)] = true;
        let active: Vec<bool> = body.iter().map(|b| !b).collect();
        let m = DofMap::build(&g, 2, &active, &body, &[], false).unwrap();
        assert_eq!(m.free_bodies, 1);
        assert_eq!(m.ndof, 2 * 16 - 2 * 4 + 3);
    }
}
