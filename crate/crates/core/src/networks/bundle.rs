//! The full set of constrained networks for one problem instance.

use std::ops::Range;

use super::constraints::{apply_transform, FieldRole, TransformParams};
use super::embedding::InputEmbedding;
use super::siren::{siren_init, SirenNet};
use crate::autodiff::{Scalar, SpatialDual, Tape, Tensor, Var};
use crate::error::{Error, Result};
use crate::problem::{PhysicsKind, ProblemFamily};

/// Tolerance for the closed-domain check.
const DOMAIN_TOL: f64 = 1e-12;

/// Constrained field values indexed by role.
#[derive(Clone, Debug)]
pub struct FieldValues<S> {
    slots: [Option<SpatialDual<S>>; FieldRole::COUNT],
}

impl<S: Copy> FieldValues<S> {
    pub fn empty() -> Self {
        Self {
            slots: [None; FieldRole::COUNT],
        }
    }

    pub fn set(&mut self, role: FieldRole, v: SpatialDual<S>) {
        self.slots[role.index()] = Some(v);
    }

    pub fn try_get(&self, role: FieldRole) -> Option<SpatialDual<S>> {
        self.slots[role.index()]
    }

    /// Panics if `role` was not evaluated.
    pub fn get(&self, role: FieldRole) -> SpatialDual<S> {
        self.slots[role.index()].unwrap_or_else(|| panic!("field `{role}` was not evaluated"))
    }
}

/// Tape leaves of every network in a bundle, in bundle order.
pub struct BundleLeaves<'t> {
    per_net: Vec<Vec<Var<'t>>>,
}

impl<'t> BundleLeaves<'t> {
    /// All leaves flattened in parameter order.
    pub fn flat(&self) -> Vec<Var<'t>> {
        self.per_net.iter().flatten().copied().collect()
    }

    pub fn net(&self, i: usize) -> &[Var<'t>] {
        &self.per_net[i]
    }
}

/// Networks for the state fields plus the level set, with their transforms.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldBundle {
    family: ProblemFamily,
    physics: PhysicsKind,
    transform: TransformParams,
    embedding: InputEmbedding,
    nets: Vec<(FieldRole, SirenNet)>,
}

/// Checks that a family and a physics kind can be combined.
pub fn check_combination(family: ProblemFamily, physics: PhysicsKind) -> Result<()> {
    let ok = match physics {
        PhysicsKind::LinearElastic => !matches!(family, ProblemFamily::Thermal { .. }),
        PhysicsKind::NeoHookean => family == ProblemFamily::Matrix,
        PhysicsKind::Thermal => matches!(family, ProblemFamily::Thermal { .. }),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "physics `{}` is not available for the `{}` family",
            physics.name(),
            family
        )))
    }
}

/// Default input embedding of a family.
pub fn embedding_for(family: ProblemFamily) -> InputEmbedding {
    match family {
        ProblemFamily::Layer => InputEmbedding::Periodic {
            period: family.domain().width(),
        },
        _ => InputEmbedding::Cartesian,
    }
}

impl FieldBundle {
    /// Initializes one SIREN per field with the given hidden widths. Network
    /// `i` uses seed `seed * 64 + i`.
    pub fn init(
        family: ProblemFamily,
        physics: PhysicsKind,
        transform: TransformParams,
        hidden: &[usize],
        omega0: f64,
        seed: u64,
    ) -> Result<Self> {
        check_combination(family, physics)?;
        let embedding = embedding_for(family);
        let mut sizes = vec![embedding.dim()];
        sizes.extend_from_slice(hidden);
        sizes.push(1);
        let mut nets = Vec::new();
        let roles = FieldRole::state_roles(physics)
            .iter()
            .chain(std::iter::once(&FieldRole::Phi));
        for (i, &role) in roles.enumerate() {
            let net = siren_init(&sizes, omega0, seed.wrapping_mul(64).wrapping_add(i as u64))?;
            nets.push((role, net));
        }
        Ok(Self {
            family,
            physics,
            transform,
            embedding,
            nets,
        })
    }

    /// Assembles a bundle from existing networks (e.g. a loaded checkpoint).
    pub fn from_nets(
        family: ProblemFamily,
        physics: PhysicsKind,
        transform: TransformParams,
        nets: Vec<(FieldRole, SirenNet)>,
    ) -> Result<Self> {
        check_combination(family, physics)?;
        let embedding = embedding_for(family);
        let mut expected: Vec<FieldRole> = FieldRole::state_roles(physics).to_vec();
        expected.push(FieldRole::Phi);
        let got: Vec<FieldRole> = nets.iter().map(|(r, _)| *r).collect();
        if got != expected {
            return Err(Error::Config(format!(
                "networks {got:?} do not match the expected fields {expected:?}"
            )));
        }
        if let Some((r, _)) = nets.iter().find(|(_, n)| n.input_dim() != embedding.dim()) {
            return Err(Error::Dimension(format!(
                "network `{r}` takes {} inputs, the family provides {}",
                nets.iter().find(|(q, _)| q == r).map_or(0, |(_, n)| n.input_dim()),
                embedding.dim()
            )));
        }
        Ok(Self {
            family,
            physics,
            transform,
            embedding,
            nets,
        })
    }

    pub fn family(&self) -> ProblemFamily {
        self.family
    }

    pub fn physics(&self) -> PhysicsKind {
        self.physics
    }

    pub fn transform_params(&self) -> TransformParams {
        self.transform
    }

    pub fn embedding(&self) -> InputEmbedding {
        self.embedding
    }

    pub fn nets(&self) -> &[(FieldRole, SirenNet)] {
        &self.nets
    }

    pub fn position(&self, role: FieldRole) -> Option<usize> {
        self.nets.iter().position(|(r, _)| *r == role)
    }

    pub fn net(&self, role: FieldRole) -> Option<&SirenNet> {
        self.nets.iter().find(|(r, _)| *r == role).map(|(_, n)| n)
    }

    pub fn net_mut(&mut self, role: FieldRole) -> Option<&mut SirenNet> {
        self.nets.iter_mut().find(|(r, _)| *r == role).map(|(_, n)| n)
    }

    /// Total number of trainable parameters.
    pub fn num_params(&self) -> usize {
        self.nets.iter().map(|(_, n)| n.params().len()).sum()
    }

    /// Ranges of each network inside the flat parameter vector.
    pub fn param_ranges(&self) -> Vec<(FieldRole, Range<usize>)> {
        let mut start = 0;
        self.nets
            .iter()
            .map(|(r, n)| {
                let end = start + n.params().len();
                let range = start..end;
                start = end;
                (*r, range)
            })
            .collect()
    }

    pub fn params_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_params());
        for (_, n) in &self.nets {
            out.extend_from_slice(n.params().values());
        }
        out
    }

    pub fn set_params_flat(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.num_params() {
            return Err(Error::Dimension(format!(
                "expected {} parameters, got {}",
                self.num_params(),
                values.len()
            )));
        }
        let mut start = 0;
        for (_, n) in &mut self.nets {
            let p = n.params_mut().values_mut();
            p.copy_from_slice(&values[start..start + p.len()]);
            start += p.len();
        }
        Ok(())
    }

    fn check_domain(&self, x: [f64; 2]) -> Result<()> {
        if self.family.domain().contains(x, DOMAIN_TOL) && x[0].is_finite() && x[1].is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(x[0], x[1]))
        }
    }

    fn transform<S: Scalar>(
        &self,
        role: FieldRole,
        x1: SpatialDual<S>,
        x2: SpatialDual<S>,
        raw: SpatialDual<S>,
    ) -> SpatialDual<S> {
        apply_transform(self.family, self.physics, role, x1, x2, raw, self.transform)
    }

    /// Constrained value of one field at a point, with spatial derivatives.
    pub fn eval_constrained(&self, role: FieldRole, x: [f64; 2]) -> Result<SpatialDual<f64>> {
        self.check_domain(x)?;
        let net = self
            .net(role)
            .ok_or_else(|| Error::Config(format!("field `{role}` is not part of this problem")))?;
        let raw = net.eval_point(&self.embedding.features(x));
        Ok(self.transform(role, SpatialDual::seed_x1(x[0]), SpatialDual::seed_x2(x[1]), raw))
    }

    /// All constrained fields at one point.
    pub fn eval_point(&self, x: [f64; 2]) -> Result<FieldValues<f64>> {
        let mut out = FieldValues::empty();
        for (role, _) in &self.nets {
            out.set(*role, self.eval_constrained(*role, x)?);
        }
        Ok(out)
    }

    /// Constrained values and derivatives of one field at many points, without
    /// recording gradients.
    pub fn eval_many(&self, role: FieldRole, points: &[[f64; 2]]) -> Result<Vec<SpatialDual<f64>>> {
        for &p in points {
            self.check_domain(p)?;
        }
        let net = self
            .net(role)
            .ok_or_else(|| Error::Config(format!("field `{role}` is not part of this problem")))?;
        let n = points.len();
        let out = net.forward_stacked(&self.embedding.stack(points, true), n);
        let d = out.data();
        Ok(points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let raw = SpatialDual::new(d[i], d[n + i], d[2 * n + i]);
                self.transform(role, SpatialDual::seed_x1(p[0]), SpatialDual::seed_x2(p[1]), raw)
            })
            .collect())
    }

    /// Constrained values of one field at many points, skipping derivatives.
    pub fn eval_values(&self, role: FieldRole, points: &[[f64; 2]]) -> Result<Vec<f64>> {
        for &p in points {
            self.check_domain(p)?;
        }
        let net = self
            .net(role)
            .ok_or_else(|| Error::Config(format!("field `{role}` is not part of this problem")))?;
        let n = points.len();
        let out = net.forward_stacked(&self.embedding.stack(points, false), n);
        Ok(points
            .iter()
            .zip(out.data())
            .map(|(p, &raw)| {
                let raw = SpatialDual::constant(raw);
                self.transform(role, SpatialDual::seed_x1(p[0]), SpatialDual::seed_x2(p[1]), raw)
                    .value
            })
            .collect())
    }

    /// Registers every network's parameters on `tape`.
    pub fn register<'t>(&self, tape: &'t Tape) -> BundleLeaves<'t> {
        BundleLeaves {
            per_net: self.nets.iter().map(|(_, n)| n.register(tape)).collect(),
        }
    }

    /// Records the constrained `roles` at `points` on `tape`. With `duals`
    /// false only values are meaningful; derivative slots are zero.
    pub fn eval_tape<'t>(
        &self,
        tape: &'t Tape,
        leaves: &BundleLeaves<'t>,
        points: &[[f64; 2]],
        roles: &[FieldRole],
        duals: bool,
    ) -> Result<FieldValues<Var<'t>>> {
        for &p in points {
            self.check_domain(p)?;
        }
        let n = points.len();
        let input = tape.constant(self.embedding.stack(points, duals));
        let xs = tape.constant(Tensor::row(points.iter().map(|p| p[0]).collect()));
        let ys = tape.constant(Tensor::row(points.iter().map(|p| p[1]).collect()));
        let (x1, x2) = if duals {
            (SpatialDual::seed_x1(xs), SpatialDual::seed_x2(ys))
        } else {
            (SpatialDual::constant(xs), SpatialDual::constant(ys))
        };
        let mut out = FieldValues::empty();
        for &role in roles {
            let i = self
                .position(role)
                .ok_or_else(|| Error::Config(format!("field `{role}` is not part of this problem")))?;
            let net = &self.nets[i].1;
            let z = net.forward_tape(tape, leaves.net(i), input, n);
            let raw = if duals {
                SpatialDual::new(
                    tape.slice_cols(z, 0, n),
                    tape.slice_cols(z, n, n),
                    tape.slice_cols(z, 2 * n, n),
                )
            } else {
                SpatialDual::constant(z)
            };
            out.set(role, self.transform(role, x1, x2, raw));
        }
        Ok(out)
    }
}
