//! Plane-strain elasticity on structured bilinear quadrilaterals.
//!
//! Small-strain problems are solved directly. The incompressible Neo-Hookean
//! solid is approximated by a nearly incompressible energy
//! `mu/2 (I1 - 3) - mu ln J + kappa/2 (J - 1)^2` with the volumetric part
//! integrated at the element center, and solved by load-stepped Newton.

use super::grid::{shape, shape_grad, DofMap, Grid, GAUSS};
use super::sparse::Assembler;
use crate::error::{Error, Result};
use crate::physics::lame;
use crate::problem::Side;

/// Material of one element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ElasticPhase {
    Solid { e: f64, nu: f64 },
    Void,
    Rigid,
}

/// Geometry, materials and boundary conditions of a plane-strain problem.
#[derive(Clone, Debug)]
pub struct ElasticProblem {
    pub grid: Grid,
    pub phases: Vec<ElasticPhase>,
    /// Uniform tractions `t = sigma n` on whole sides.
    pub tractions: Vec<(Side, [f64; 2])>,
    /// Prescribed nodal displacements `(node, component, value)`.
    pub fixed: Vec<(usize, usize, f64)>,
    /// Identify the left and right sides.
    pub periodic_x: bool,
}

impl ElasticProblem {
    /// Assigns each element the phase at its centroid.
    pub fn new(grid: Grid, phase_at: impl Fn([f64; 2]) -> ElasticPhase) -> Self {
        let phases = (0..grid.num_elements()).map(|e| phase_at(grid.centroid(e))).collect();
        Self {
            grid,
            phases,
            tractions: Vec::new(),
            fixed: Vec::new(),
            periodic_x: false,
        }
    }

    pub fn fix(&mut self, node: usize, comp: usize, value: f64) {
        self.fixed.push((node, comp, value));
    }

    /// Removes the three rigid modes of a free body: both components at the
    /// lower-left corner and the vertical component at the lower-right one.
    pub fn pin_corners(&mut self) {
        let g = self.grid;
        self.fix(g.node(0, 0), 0, 0.0);
        self.fix(g.node(0, 0), 1, 0.0);
        self.fix(g.node(g.nx, 0), 1, 0.0);
    }

    pub fn traction(&mut self, side: Side, t: [f64; 2]) {
        self.tractions.push((side, t));
    }

    fn dof_map(&self) -> Result<DofMap> {
        let active: Vec<bool> = self
            .phases
            .iter()
            .map(|p| matches!(p, ElasticPhase::Solid { .. }))
            .collect();
        let body: Vec<bool> = self.phases.iter().map(|p| matches!(p, ElasticPhase::Rigid)).collect();
        DofMap::build(&self.grid, 2, &active, &body, &self.fixed, self.periodic_x)
    }

    /// Consistent nodal forces of the side tractions, two per node.
    pub fn external_forces(&self) -> Vec<f64> {
        let g = &self.grid;
        let mut f = vec![0.0; 2 * g.num_nodes()];
        for &(side, t) in &self.tractions {
            let nodes = g.side_nodes(side);
            let elems = g.side_elements(side);
            let h = match side {
                Side::Bottom | Side::Top => g.hx(),
                Side::Left | Side::Right => g.hy(),
            };
            for (k, &e) in elems.iter().enumerate() {
                if matches!(self.phases[e], ElasticPhase::Void) {
                    continue;
                }
                for n in [nodes[k], nodes[k + 1]] {
                    f[2 * n] += 0.5 * h * t[0];
                    f[2 * n + 1] += 0.5 * h * t[1];
                }
            }
        }
        f
    }
}

/// Plane-strain stiffness `D` acting on `(eps11, eps22, gamma12)`.
fn elasticity_matrix(e: f64, nu: f64) -> [[f64; 3]; 3] {
    let (l, m) = lame(e, nu);
    [[l + 2.0 * m, l, 0.0], [l, l + 2.0 * m, 0.0], [0.0, 0.0, m]]
}

/// Strain-displacement rows for `(eps11, eps22, gamma12)` at reference point `p`.
fn b_matrix(p: [f64; 2], hx: f64, hy: f64) -> [[f64; 8]; 3] {
    let d = shape_grad(p, hx, hy);
    let mut b = [[0.0; 8]; 3];
    for a in 0..4 {
        b[0][2 * a] = d[a][0];
        b[1][2 * a + 1] = d[a][1];
        b[2][2 * a] = d[a][1];
        b[2][2 * a + 1] = d[a][0];
    }
    b
}

fn element_stiffness(e: f64, nu: f64, hx: f64, hy: f64) -> [[f64; 8]; 8] {
    let d = elasticity_matrix(e, nu);
    let w = 0.25 * hx * hy;
    let mut k = [[0.0; 8]; 8];
    for gp in GAUSS {
        let b = b_matrix(gp, hx, hy);
        for i in 0..8 {
            for j in 0..8 {
                let mut s = 0.0;
                for r in 0..3 {
                    for c in 0..3 {
                        s += b[r][i] * d[r][c] * b[c][j];
                    }
                }
                k[i][j] += w * s;
            }
        }
    }
    k
}

/// Adds `ke` acting on nodal components `[node * ncomp + c]` to the reduced system.
pub(crate) fn scatter<const N: usize>(
    map: &DofMap,
    idx: &[usize; N],
    ke: &[[f64; N]; N],
    fe: Option<&[f64; N]>,
    k: &mut Assembler,
    rhs: &mut [f64],
) {
    for a in 0..N {
        let la = &map.lin[idx[a]];
        if la.terms.is_empty() {
            continue;
        }
        let mut lifted = fe.map_or(0.0, |f| f[a]);
        for b in 0..N {
            let lb = &map.lin[idx[b]];
            lifted -= ke[a][b] * lb.offset;
            for &(gi, ci) in &la.terms {
                for &(gj, cj) in &lb.terms {
                    k.add(gi, gj, ci * cj * ke[a][b]);
                }
            }
        }
        for &(gi, ci) in &la.terms {
            rhs[gi] += ci * lifted;
        }
    }
}

/// Nodal displacements of a solved problem.
#[derive(Clone, Debug)]
pub struct ElasticSolution {
    pub grid: Grid,
    pub phases: Vec<ElasticPhase>,
    /// `[u1, u2]` per node, `NaN` at nodes touching only voids.
    pub displacement: Vec<[f64; 2]>,
    /// Newton iterations summed over load steps (0 for linear solves).
    pub iterations: usize,
}

impl ElasticSolution {
    fn element_disp(&self, e: usize) -> [f64; 8] {
        let mut u = [0.0; 8];
        for (a, n) in self.grid.element_nodes(e).into_iter().enumerate() {
            u[2 * a] = self.displacement[n][0];
            u[2 * a + 1] = self.displacement[n][1];
        }
        u
    }

    /// Small strain `(eps11, eps22, eps12)` in element `e` at reference point `p`.
    pub fn strain(&self, e: usize, p: [f64; 2]) -> [f64; 3] {
        let b = b_matrix(p, self.grid.hx(), self.grid.hy());
        let u = self.element_disp(e);
        let dot = |r: usize| (0..8).map(|i| b[r][i] * u[i]).sum::<f64>();
        [dot(0), dot(1), 0.5 * dot(2)]
    }

    /// Cauchy stress `(s11, s22, s12)` of a small-strain solution; zero in
    /// voids and `None` inside rigid bodies.
    pub fn stress(&self, e: usize, p: [f64; 2]) -> Option<[f64; 3]> {
        match self.phases[e] {
            ElasticPhase::Solid { e: young, nu } => {
                let d = elasticity_matrix(young, nu);
                let s = self.strain(e, p);
                let v = [s[0], s[1], 2.0 * s[2]];
                Some([0, 1, 2].map(|r| (0..3).map(|c| d[r][c] * v[c]).sum()))
            }
            ElasticPhase::Void => Some([0.0; 3]),
            ElasticPhase::Rigid => None,
        }
    }

    /// Interpolated displacement at `x`.
    pub fn displacement_at(&self, x: [f64; 2]) -> Result<[f64; 2]> {
        let (e, p) = self.grid.locate(x)?;
        let n = shape(p);
        let nodes = self.grid.element_nodes(e);
        let mut u = [0.0; 2];
        for a in 0..4 {
            u[0] += n[a] * self.displacement[nodes[a]][0];
            u[1] += n[a] * self.displacement[nodes[a]][1];
        }
        Ok(u)
    }

    /// Small-strain internal nodal forces `sum_e K_e u_e`, two per node.
    pub fn internal_forces(&self) -> Vec<f64> {
        let g = &self.grid;
        let mut f = vec![0.0; 2 * g.num_nodes()];
        for e in 0..g.num_elements() {
            if let ElasticPhase::Solid { e: young, nu } = self.phases[e] {
                let ke = element_stiffness(young, nu, g.hx(), g.hy());
                let u = self.element_disp(e);
                for (a, n) in g.element_nodes(e).into_iter().enumerate() {
                    for c in 0..2 {
                        f[2 * n + c] += (0..8).map(|j| ke[2 * a + c][j] * u[j]).sum::<f64>();
                    }
                }
            }
        }
        f
    }
}

/// Solves the small-strain problem by sparse Cholesky.
pub fn solve_linear(problem: &ElasticProblem) -> Result<ElasticSolution> {
    let g = &problem.grid;
    let map = problem.dof_map()?;
    let mut k = Assembler::new(map.ndof);
    let mut rhs = vec![0.0; map.ndof];
    let fext = problem.external_forces();
    // Tractions act on active nodes; scatter them through the map.
    for (idx, &f) in fext.iter().enumerate() {
        if f != 0.0 {
            for &(gi, ci) in &map.lin[idx].terms {
                rhs[gi] += ci * f;
            }
        }
    }
    let mut cache: Vec<((f64, f64), ElementMatrix)> = Vec::new();
    for e in 0..g.num_elements() {
        let ElasticPhase::Solid { e: young, nu } = problem.phases[e] else {
            continue;
        };
        let ke = match cache.iter().find(|(key, _)| *key == (young, nu)) {
            Some((_, ke)) => *ke,
            None => {
                let ke = element_stiffness(young, nu, g.hx(), g.hy());
                cache.push(((young, nu), ke));
                ke
            }
        };
        let nodes = g.element_nodes(e);
        let idx: [usize; 8] = std::array::from_fn(|i| 2 * nodes[i / 2] + i % 2);
        scatter(&map, &idx, &ke, None, &mut k, &mut rhs);
    }
    let x = k.solve_spd(&rhs)?;
    let flat = map.expand(&x);
    Ok(ElasticSolution {
        grid: *g,
        phases: problem.phases.clone(),
        displacement: flat.chunks(2).map(|c| [c[0], c[1]]).collect(),
        iterations: 0,
    })
}

/// Settings of the Neo-Hookean solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeoHookeanOptions {
    pub mu: f64,
    /// Bulk penalty `kappa / mu`.
    pub bulk_ratio: f64,
    pub load_steps: usize,
    pub max_newton: usize,
    /// Relative residual tolerance per load step.
    pub tol: f64,
}

impl NeoHookeanOptions {
    pub fn new(mu: f64) -> Self {
        Self {
            mu,
            bulk_ratio: 1000.0,
            load_steps: 10,
            max_newton: 25,
            tol: 1e-9,
        }
    }
}

type Mat2 = [[f64; 2]; 2];
type ElementMatrix = [[f64; 8]; 8];

/// Energy density, first Piola-Kirchhoff stress and tangent of one energy
/// part at `F`. `iso` selects `mu/2 (|F|^2 + 1 - 3)`, otherwise the
/// volumetric part.
fn nh_stress(f: Mat2, mu: f64, kappa: f64, iso: bool) -> Option<(f64, Mat2, [[f64; 4]; 4])> {
    let idx = |i: usize, j: usize| 2 * i + j;
    let mut a = [[0.0; 4]; 4];
    if iso {
        for k in 0..4 {
            a[k][k] = mu;
        }
        let ff: f64 = f.iter().flatten().map(|v| v * v).sum();
        return Some((0.5 * mu * (ff - 2.0), f.map(|r| r.map(|v| mu * v)), a));
    }
    let j = f[0][0] * f[1][1] - f[0][1] * f[1][0];
    if j <= 0.0 {
        return None;
    }
    // F^{-T}
    let fit = [[f[1][1] / j, -f[1][0] / j], [-f[0][1] / j, f[0][0] / j]];
    let c = -mu + kappa * j * (j - 1.0);
    let dc = kappa * (2.0 * j - 1.0) * j;
    let p = fit.map(|r| r.map(|v| c * v));
    for i in 0..2 {
        for jj in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    a[idx(i, jj)][idx(k, l)] = dc * fit[i][jj] * fit[k][l] - c * fit[i][l] * fit[k][jj];
                }
            }
        }
    }
    Some((-mu * j.ln() + 0.5 * kappa * (j - 1.0).powi(2), p, a))
}

/// Strain energy, internal forces and tangent of one element; `None` if it
/// inverts.
fn nh_element(u: &[f64; 8], hx: f64, hy: f64, mu: f64, kappa: f64) -> Option<(f64, [f64; 8], [[f64; 8]; 8])> {
    let mut energy = 0.0;
    let mut fe = [0.0; 8];
    let mut ke = [[0.0; 8]; 8];
    let mut add = |p: [f64; 2], w: f64, iso: bool| -> Option<()> {
        let d = shape_grad(p, hx, hy);
        let mut f = [[1.0, 0.0], [0.0, 1.0]];
        for a in 0..4 {
            for i in 0..2 {
                for jj in 0..2 {
                    f[i][jj] += u[2 * a + i] * d[a][jj];
                }
            }
        }
        let (psi, pk, at) = nh_stress(f, mu, kappa, iso)?;
        energy += w * psi;
        for a in 0..4 {
            for i in 0..2 {
                fe[2 * a + i] += w * (pk[i][0] * d[a][0] + pk[i][1] * d[a][1]);
                for b in 0..4 {
                    for k in 0..2 {
                        let mut s = 0.0;
                        for jj in 0..2 {
                            for l in 0..2 {
                                s += d[a][jj] * at[2 * i + jj][2 * k + l] * d[b][l];
                            }
                        }
                        ke[2 * a + i][2 * b + k] += w * s;
                    }
                }
            }
        }
        Some(())
    };
    let w = 0.25 * hx * hy;
    for gp in GAUSS {
        add(gp, w, true)?;
    }
    add([0.0, 0.0], hx * hy, false)?;
    Some((energy, fe, ke))
}

/// Solves the nearly incompressible Neo-Hookean problem. Solid phases use
/// `opts.mu` regardless of their linear moduli; rigid phases are rejected.
pub fn solve_neo_hookean(problem: &ElasticProblem, opts: &NeoHookeanOptions) -> Result<ElasticSolution> {
    if problem.phases.iter().any(|p| matches!(p, ElasticPhase::Rigid)) {
        return Err(Error::Config(
            "rigid inclusions are not supported in the Neo-Hookean solver".into(),
        ));
    }
    if problem.fixed.iter().any(|f| f.2 != 0.0) {
        return Err(Error::Config(
            "the Neo-Hookean solver supports homogeneous constraints only".into(),
        ));
    }
    let g = &problem.grid;
    let map = problem.dof_map()?;
    let kappa = opts.bulk_ratio * opts.mu;
    let fext_nodal = problem.external_forces();
    let mut fext = vec![0.0; map.ndof];
    for (idx, &f) in fext_nodal.iter().enumerate() {
        for &(gi, ci) in &map.lin[idx].terms {
            fext[gi] += ci * f;
        }
    }
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    // Roundoff floor of the internal forces, which cancel large terms of
    // size mu * element area.
    let floor = opts.mu * g.hx() * g.hy() * (map.ndof as f64).sqrt();
    let fnorm = norm(&fext).max(floor);

    // Potential energy, residual `f_int - lambda f_ext` and optionally the tangent.
    let assemble = |x: &[f64], lambda: f64, tangent: bool| -> Option<(f64, Vec<f64>, Option<Assembler>)> {
        let nodal = map.expand(x);
        let mut r: Vec<f64> = fext.iter().map(|f| -lambda * f).collect();
        let mut pi = -lambda * fext.iter().zip(x).map(|(f, u)| f * u).sum::<f64>();
        let mut k = tangent.then(|| Assembler::new(map.ndof).with_tolerance(1e-6));
        let mut scratch = vec![0.0; map.ndof];
        for e in 0..g.num_elements() {
            if !matches!(problem.phases[e], ElasticPhase::Solid { .. }) {
                continue;
            }
            let nodes = g.element_nodes(e);
            let idx: [usize; 8] = std::array::from_fn(|i| 2 * nodes[i / 2] + i % 2);
            let u: [f64; 8] = idx.map(|i| nodal[i]);
            let (we, fe, ke) = nh_element(&u, g.hx(), g.hy(), opts.mu, kappa)?;
            pi += we;
            for a in 0..8 {
                for &(gi, ci) in &map.lin[idx[a]].terms {
                    r[gi] += ci * fe[a];
                }
            }
            if let Some(k) = k.as_mut() {
                scatter(&map, &idx, &ke, None, k, &mut scratch);
            }
        }
        Some((pi, r, k))
    };

    let mut x = vec![0.0; map.ndof];
    let mut iterations = 0;
    for step in 1..=opts.load_steps {
        let lambda = step as f64 / opts.load_steps as f64;
        let mut converged = false;
        for _ in 0..opts.max_newton {
            let (pi, r, k) = assemble(&x, lambda, true)
                .ok_or_else(|| Error::Solver("an element inverted during Newton iterations".into()))?;
            let rn = norm(&r);
            if rn <= opts.tol * fnorm {
                converged = true;
                break;
            }
            iterations += 1;
            let k = k.expect("tangent requested");
            let neg: Vec<f64> = r.iter().map(|v| -v).collect();
            let dx = k.solve_spd(&neg).or_else(|_| k.solve_lu(&neg))?;
            let slope: f64 = r.iter().zip(&dx).map(|(a, b)| a * b).sum();
            // Backtracking until the potential energy decreases enough or
            // the residual shrinks.
            let mut t = 1.0;
            loop {
                let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + t * b).collect();
                if let Some((pt, rt, _)) = assemble(&trial, lambda, false) {
                    if pt <= pi + 1e-4 * t * slope || norm(&rt) < rn {
                        x = trial;
                        break;
                    }
                }
                t *= 0.5;
                if t < 1e-6 {
                    return Err(Error::Solver(format!("line search failed at load step {step}")));
                }
            }
        }
        if !converged {
            return Err(Error::Solver(format!(
                "Newton did not converge in {} iterations at load step {step}",
                opts.max_newton
            )));
        }
    }
    let flat = map.expand(&x);
    Ok(ElasticSolution {
        grid: *g,
        phases: problem.phases.clone(),
        displacement: flat.chunks(2).map(|c| [c[0], c[1]]).collect(),
        iterations,
    })
}
