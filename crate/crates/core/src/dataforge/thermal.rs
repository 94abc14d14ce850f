//! Nonlinear steady conduction `div(k (1 + T/T0) grad T) = 0` on a structured
//! grid, solved by damped fixed-point (Picard) iteration.
//!
//! Insulating inclusions are removed from the mesh, which leaves a zero-flux
//! boundary around them. Perfectly conducting inclusions share one
//! temperature unknown per connected body.

use super::elastic::scatter;
use super::grid::{shape, shape_grad, DofMap, Grid, GAUSS};
use super::sparse::Assembler;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThermalPhase {
    Conductor,
    Insulator,
    PerfectConductor,
}

#[derive(Clone, Debug)]
pub struct ThermalProblem {
    pub grid: Grid,
    pub phases: Vec<ThermalPhase>,
    pub k: f64,
    pub t0: f64,
    /// Prescribed nodal temperatures.
    pub fixed: Vec<(usize, f64)>,
    /// Relaxation factor of the fixed-point update, in `(0, 1]`.
    pub damping: f64,
    pub max_iterations: usize,
    /// Bound on the max-norm of the discrete residual.
    pub tol: f64,
}

impl ThermalProblem {
    pub fn new(grid: Grid, k: f64, t0: f64, phase_at: impl Fn([f64; 2]) -> ThermalPhase) -> Self {
        let phases = (0..grid.num_elements()).map(|e| phase_at(grid.centroid(e))).collect();
        Self {
            grid,
            phases,
            k,
            t0,
            fixed: Vec::new(),
            damping: 1.0,
            max_iterations: 500,
            tol: 1e-10,
        }
    }

    /// Prescribes `value` on every node of `side`.
    pub fn fix_side(&mut self, side: crate::problem::Side, value: f64) {
        for n in self.grid.side_nodes(side) {
            self.fixed.push((n, value));
        }
    }

    fn conductivity(&self, t: f64) -> f64 {
        self.k * (1.0 + t / self.t0)
    }

    /// Element conduction matrix with `k(T)` evaluated at the Gauss points.
    fn element_matrix(&self, te: &[f64; 4]) -> [[f64; 4]; 4] {
        let (hx, hy) = (self.grid.hx(), self.grid.hy());
        let w = 0.25 * hx * hy;
        let mut ke = [[0.0; 4]; 4];
        for gp in GAUSS {
            let n = shape(gp);
            let d = shape_grad(gp, hx, hy);
            let t: f64 = (0..4).map(|a| n[a] * te[a]).sum();
            let c = w * self.conductivity(t);
            for a in 0..4 {
                for b in 0..4 {
                    ke[a][b] += c * (d[a][0] * d[b][0] + d[a][1] * d[b][1]);
                }
            }
        }
        ke
    }

    /// Reduced system `K(T) x = f` linearized at nodal temperatures `t`.
    fn assemble(&self, map: &DofMap, t: &[f64]) -> (Assembler, Vec<f64>) {
        let g = &self.grid;
        let mut k = Assembler::new(map.ndof);
        let mut rhs = vec![0.0; map.ndof];
        for e in 0..g.num_elements() {
            if self.phases[e] != ThermalPhase::Conductor {
                continue;
            }
            let nodes = g.element_nodes(e);
            let ke = self.element_matrix(&nodes.map(|n| t[n]));
            scatter(map, &nodes, &ke, None, &mut k, &mut rhs);
        }
        (k, rhs)
    }
}

#[derive(Clone, Debug)]
pub struct ThermalSolution {
    pub grid: Grid,
    pub phases: Vec<ThermalPhase>,
    pub k: f64,
    pub t0: f64,
    /// Nodal temperatures, `NaN` at nodes touching only insulators.
    pub temperature: Vec<f64>,
    pub iterations: usize,
    /// Max-norm of the discrete residual at the returned state.
    pub residual: f64,
}

impl ThermalSolution {
    pub fn temperature_at(&self, x: [f64; 2]) -> Result<f64> {
        let (e, p) = self.grid.locate(x)?;
        let n = shape(p);
        Ok(self
            .grid
            .element_nodes(e)
            .iter()
            .zip(n)
            .map(|(&a, w)| w * self.temperature[a])
            .sum())
    }

    /// Heat flux `q = -k (1 + T/T0) grad T` at `x`; zero in insulators and
    /// perfect conductors.
    pub fn flux_at(&self, x: [f64; 2]) -> Result<[f64; 2]> {
        let (e, p) = self.grid.locate(x)?;
        if self.phases[e] != ThermalPhase::Conductor {
            return Ok([0.0, 0.0]);
        }
        let nodes = self.grid.element_nodes(e);
        let n = shape(p);
        let d = shape_grad(p, self.grid.hx(), self.grid.hy());
        let mut t = 0.0;
        let mut gt = [0.0; 2];
        for a in 0..4 {
            let ta = self.temperature[nodes[a]];
            t += n[a] * ta;
            gt[0] += d[a][0] * ta;
            gt[1] += d[a][1] * ta;
        }
        let c = self.k * (1.0 + t / self.t0);
        Ok([-c * gt[0], -c * gt[1]])
    }
}

/// Damped Picard iteration to a discrete residual below `problem.tol`.
pub fn solve_thermal(problem: &ThermalProblem) -> Result<ThermalSolution> {
    if !(problem.k > 0.0 && problem.t0 > 0.0) {
        return Err(Error::Config(
            "conductivity and reference temperature must be positive".into(),
        ));
    }
    if !(problem.damping > 0.0 && problem.damping <= 1.0) {
        return Err(Error::Config(format!("damping {} must lie in (0, 1]", problem.damping)));
    }
    let g = &problem.grid;
    let active: Vec<bool> = problem.phases.iter().map(|p| *p == ThermalPhase::Conductor).collect();
    let body: Vec<bool> = problem
        .phases
        .iter()
        .map(|p| *p == ThermalPhase::PerfectConductor)
        .collect();
    let fixed: Vec<(usize, usize, f64)> = problem.fixed.iter().map(|&(n, v)| (n, 0, v)).collect();
    let map = DofMap::build(g, 1, &active, &body, &fixed, false)?;

    let mut x = vec![0.0; map.ndof];
    let mut t = map.expand(&x);
    let residual_of = |k: &Assembler, rhs: &[f64], x: &[f64]| {
        k.apply(x)
            .iter()
            .zip(rhs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    let (mut k, mut rhs) = problem.assemble(&map, &t);
    for it in 0..problem.max_iterations {
        let res = residual_of(&k, &rhs, &x);
        if res <= problem.tol && it > 0 {
            return Ok(ThermalSolution {
                grid: *g,
                phases: problem.phases.clone(),
                k: problem.k,
                t0: problem.t0,
                temperature: t,
                iterations: it,
                residual: res,
            });
        }
        let next = k.solve_spd(&rhs)?;
        for (a, b) in x.iter_mut().zip(&next) {
            *a += problem.damping * (b - *a);
        }
        t = map.expand(&x);
        (k, rhs) = problem.assemble(&map, &t);
    }
    Err(Error::Solver(format!(
        "fixed-point iteration did not reach residual {:e} in {} iterations",
        problem.tol, problem.max_iterations
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Rect, Side};

    fn strip(n: usize, phase_at: impl Fn([f64; 2]) -> ThermalPhase) -> ThermalProblem {
        let g = Grid::with_counts(Rect::new(-0.5, 0.5, -0.5, 0.5), n, n);
        let mut p = ThermalProblem::new(g, 1.0, 1.0, phase_at);
        p.fix_side(Side::Left, 1.0);
        p.fix_side(Side::Right, 0.0);
        p
    }

    #[test]
    fn one_dimensional_closed_form() {
        let sol = solve_thermal(&strip(100, |_| ThermalPhase::Conductor)).unwrap();
        assert!(sol.residual <= 1e-10);
        // T + T^2/2 = 1.5 (1 - s) with s = x + 0.5.
        let exact = |s: f64| -1.0 + (1.0 + 3.0 * (1.0 - s)).sqrt();
        assert!((exact(0.5) - 0.581_138_830_084_189_7).abs() < 1e-15);
        for x in [-0.3, 0.0, 0.25] {
            let t = sol.temperature_at([x, 0.1]).unwrap();
            assert!((t - exact(x + 0.5)).abs() < 1e-4, "{t} at {x}");
        }
        // Insulated top and bottom, uniform flux 1.5 through the strip
        // (element midpoints carry the accurate gradient).
        let q = sol.flux_at([0.005, 0.5]).unwrap();
        assert!(q[1].abs() < 1e-10);
        assert!((q[0] - 1.5).abs() < 1e-3, "{q:?}");
    }

    #[test]
    fn conducting_inclusion_is_isothermal() {
        let sol = solve_thermal(&strip(40, |x| {
            if x[0].abs() < 0.15 && x[1].abs() < 0.05 {
                ThermalPhase::PerfectConductor
            } else {
                ThermalPhase::Conductor
            }
        }))
        .unwrap();
        let g = sol.grid;
        let temps: Vec<f64> = (0..g.num_elements())
            .filter(|&e| sol.phases[e] == ThermalPhase::PerfectConductor)
            .flat_map(|e| g.element_nodes(e).map(|n| sol.temperature[n]))
            .collect();
        let spread = temps.iter().cloned().fold(f64::MIN, f64::max) - temps.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread <= 1e-8);
    }

    #[test]
    fn insulating_inclusion_blocks_flux() {
        let sol = solve_thermal(&strip(40, |x| {
            if x[0].abs() < 0.05 && x[1].abs() < 0.2 {
                ThermalPhase::Insulator
            } else {
                ThermalPhase::Conductor
            }
        }))
        .unwrap();
        assert_eq!(sol.flux_at([0.0, 0.0]).unwrap(), [0.0, 0.0]);
        assert!(sol.temperature_at([0.0, 0.0]).unwrap().is_nan());
        // Heat flows around the obstacle.
        assert!(sol.flux_at([0.0, 0.35]).unwrap()[0] > 1.5);
    }

    #[test]
    fn non_convergence_is_a_solver_error() {
        let mut p = strip(10, |_| ThermalPhase::Conductor);
        p.max_iterations = 2;
        assert!(matches!(solve_thermal(&p), Err(Error::Solver(_))));
    }
}
