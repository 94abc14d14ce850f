//! Fully connected sine networks.
//!
//! `z1 = sin(omega0 * W1 z0 + b1)`, `zk = sin(Wk z(k-1) + bk)` for the hidden
//! layers and an affine output layer. Each `Wk` entry starts uniform in
//! `[-sqrt(6/q_k), sqrt(6/q_k)]` with `q_k` the width of layer `k`; biases start
//! at zero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::autodiff::{Activation, SpatialDual, Tape, Tensor, Var};
use crate::error::{Error, Result};

/// Flattened weights and biases of one network, stored layer by layer as
/// `W1` (row-major, `q1 x q0`), `b1`, `W2`, `b2`, ...
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSet {
    layer_sizes: Vec<usize>,
    values: Vec<f64>,
}

impl ParamSet {
    pub fn zeros(layer_sizes: &[usize]) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(Error::Config(
                "a network needs at least an input and an output layer".into(),
            ));
        }
        if let Some(k) = layer_sizes.iter().position(|&q| q == 0) {
            return Err(Error::Config(format!("layer {k} has zero width")));
        }
        let n = layer_sizes.windows(2).map(|w| w[1] * w[0] + w[1]).sum();
        Ok(Self {
            layer_sizes: layer_sizes.to_vec(),
            values: vec![0.0; n],
        })
    }

    pub fn from_values(layer_sizes: &[usize], values: Vec<f64>) -> Result<Self> {
        let mut p = Self::zeros(layer_sizes)?;
        if values.len() != p.values.len() {
            return Err(Error::Dimension(format!(
                "expected {} parameters for layers {:?}, got {}",
                p.values.len(),
                layer_sizes,
                values.len()
            )));
        }
        p.values = values;
        Ok(p)
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    /// Number of affine layers.
    pub fn depth(&self) -> usize {
        self.layer_sizes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Offsets of `(W_k, b_k)` for affine layer `k` (0-based).
    fn offsets(&self, k: usize) -> (usize, usize) {
        let mut off = 0;
        for w in self.layer_sizes.windows(2).take(k) {
            off += w[1] * w[0] + w[1];
        }
        let (rows, cols) = (self.layer_sizes[k + 1], self.layer_sizes[k]);
        (off, off + rows * cols)
    }

    /// Row-major weight matrix of affine layer `k`.
    pub fn weight(&self, k: usize) -> &[f64] {
        let (w, b) = self.offsets(k);
        &self.values[w..b]
    }

    pub fn bias(&self, k: usize) -> &[f64] {
        let (_, b) = self.offsets(k);
        &self.values[b..b + self.layer_sizes[k + 1]]
    }
}

/// A SIREN network with scalar output.
#[derive(Clone, Debug, PartialEq)]
pub struct SirenNet {
    params: ParamSet,
    omega0: f64,
    activation: Activation,
}

/// Builds a network with SIREN initialization, deterministic in `seed`.
pub fn siren_init(layer_sizes: &[usize], omega0: f64, seed: u64) -> Result<SirenNet> {
    if !(omega0 > 0.0 && omega0.is_finite()) {
        return Err(Error::Config(format!("omega0 must be positive, got {omega0}")));
    }
    let mut params = ParamSet::zeros(layer_sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..params.depth() {
        let bound = init_bound(layer_sizes[k + 1]);
        let (w, b) = params.offsets(k);
        for v in &mut params.values[w..b] {
            *v = rng.random_range(-bound..=bound);
        }
    }
    Ok(SirenNet {
        params,
        omega0,
        activation: Activation::Sine,
    })
}

/// Half-width of the uniform weight distribution for a layer of `q` neurons.
pub fn init_bound(q: usize) -> f64 {
    (6.0 / q as f64).sqrt()
}

impl SirenNet {
    pub fn from_params(params: ParamSet, omega0: f64, activation: Activation) -> Self {
        Self {
            params,
            omega0,
            activation,
        }
    }

    pub fn with_activation(mut self, activation: Activation) -> Self {
        self.activation = activation;
        self
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut ParamSet {
        &mut self.params
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn layer_sizes(&self) -> &[usize] {
        self.params.layer_sizes()
    }

    pub fn input_dim(&self) -> usize {
        self.layer_sizes()[0]
    }

    /// Scalar forward pass at one point, carrying spatial derivatives.
    /// Written as plain loops; serves as the reference for the batched paths.
    pub fn eval_point(&self, input: &[SpatialDual<f64>]) -> SpatialDual<f64> {
        assert_eq!(input.len(), self.input_dim(), "input dimension mismatch");
        let mut z: Vec<SpatialDual<f64>> = input.to_vec();
        let depth = self.params.depth();
        for k in 0..depth {
            let rows = self.layer_sizes()[k + 1];
            let cols = self.layer_sizes()[k];
            let w = self.params.weight(k);
            let b = self.params.bias(k);
            let scale = if k == 0 { self.omega0 } else { 1.0 };
            let mut next = Vec::with_capacity(rows);
            for r in 0..rows {
                let mut acc = SpatialDual::constant(0.0);
                for (c, zc) in z.iter().enumerate().take(cols) {
                    acc = acc + *zc * (w[r * cols + c] * scale);
                }
                acc = acc + b[r];
                if k + 1 < depth {
                    let (f, d1, _) = self.activation.eval3(acc.value);
                    acc = SpatialDual::new(f, d1 * acc.dx1, d1 * acc.dx2);
                }
                next.push(acc);
            }
            z = next;
        }
        z[0]
    }

    /// Batched forward pass without gradient recording. `input` is stacked as
    /// `input_dim x (blocks * width)`: value columns first, then one block per
    /// spatial derivative. Returns `1 x (blocks * width)`.
    pub fn forward_stacked(&self, input: &Tensor, width: usize) -> Tensor {
        let depth = self.params.depth();
        let mut z = input.clone();
        for k in 0..depth {
            let sizes = self.layer_sizes();
            let w = Tensor::from_vec(sizes[k + 1], sizes[k], self.params.weight(k).to_vec());
            let mut pre = w.matmul(&z);
            if k == 0 {
                for v in pre.data_mut() {
                    *v *= self.omega0;
                }
            }
            let cols = pre.cols();
            let b = self.params.bias(k);
            let blocks = cols / width;
            let mut d1 = vec![0.0; if blocks > 1 { width } else { 0 }];
            let mut vals = d1.clone();
            for (r, &br) in b.iter().enumerate() {
                let row = &mut pre.data_mut()[r * cols..(r + 1) * cols];
                row[..width].iter_mut().for_each(|v| *v += br);
                if k + 1 == depth {
                    continue;
                }
                if blocks == 1 {
                    self.activation.apply_in_place(row);
                } else {
                    self.activation.eval_slices(&row[..width], &mut vals, &mut d1);
                    row[..width].copy_from_slice(&vals);
                    for blk in 1..blocks {
                        row[blk * width..(blk + 1) * width]
                            .iter_mut()
                            .zip(&d1)
                            .for_each(|(v, d)| *v *= d);
                    }
                }
            }
            z = pre;
        }
        z
    }

    /// Registers the weights and biases on `tape` as leaves, in parameter order.
    pub fn register<'t>(&self, tape: &'t Tape) -> Vec<Var<'t>> {
        let sizes = self.layer_sizes();
        let mut leaves = Vec::with_capacity(2 * self.params.depth());
        for k in 0..self.params.depth() {
            leaves.push(tape.leaf(Tensor::from_vec(sizes[k + 1], sizes[k], self.params.weight(k).to_vec())));
            leaves.push(tape.leaf(Tensor::from_vec(sizes[k + 1], 1, self.params.bias(k).to_vec())));
        }
        leaves
    }

    /// Recorded forward pass over a stacked input (see [`Self::forward_stacked`]).
    pub fn forward_tape<'t>(&self, tape: &'t Tape, leaves: &[Var<'t>], input: Var<'t>, width: usize) -> Var<'t> {
        let depth = self.params.depth();
        assert_eq!(leaves.len(), 2 * depth, "leaf count mismatch");
        let mut z = input;
        for k in 0..depth {
            let mut pre = tape.matmul(leaves[2 * k], z);
            if k == 0 {
                pre = pre.scale(self.omega0);
            }
            pre = tape.add_bias(pre, leaves[2 * k + 1], width);
            z = if k + 1 < depth {
                tape.activation_dual(pre, width, self.activation)
            } else {
                pre
            };
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_for_fifty_neurons() {
        assert!((init_bound(50) - 0.346410).abs() < 5e-7);
    }

    #[test]
    fn init_respects_bounds_and_zero_biases() {
        let net = siren_init(&[2, 50, 50, 50, 50, 1], 10.0, 7).unwrap();
        let p = net.params();
        for k in 0..p.depth() {
            let bound = init_bound(p.layer_sizes()[k + 1]);
            assert!(p.weight(k).iter().all(|w| w.abs() <= bound));
            assert!(p.bias(k).iter().all(|&b| b == 0.0));
        }
        assert_eq!(p.len(), 2 * 50 + 50 + 3 * (50 * 50 + 50) + 50 + 1);
    }

    #[test]
    fn same_seed_same_params() {
        let a = siren_init(&[3, 20, 20, 1], 10.0, 42).unwrap();
        let b = siren_init(&[3, 20, 20, 1], 10.0, 42).unwrap();
        let c = siren_init(&[3, 20, 20, 1], 10.0, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn invalid_shapes_are_configuration_errors() {
        assert!(matches!(siren_init(&[2, 0, 1], 10.0, 0), Err(Error::Config(_))));
        assert!(matches!(siren_init(&[2], 10.0, 0), Err(Error::Config(_))));
        assert!(matches!(siren_init(&[2, 4, 1], 0.0, 0), Err(Error::Config(_))));
    }

    #[test]
    fn batched_paths_match_pointwise() {
        let net = siren_init(&[2, 16, 16, 1], 10.0, 3).unwrap();
        let pts = [[0.1, -0.2], [0.45, 0.3], [-0.33, 0.0]];
        let b = pts.len();
        let mut data = vec![0.0; 2 * 3 * b];
        for (i, p) in pts.iter().enumerate() {
            data[i] = p[0];
            data[3 * b + i] = p[1];
            data[b + i] = 1.0;
            data[3 * b + 2 * b + i] = 1.0;
        }
        let input = Tensor::from_vec(2, 3 * b, data);
        let plain = net.forward_stacked(&input, b);
        let tape = Tape::new();
        let leaves = net.register(&tape);
        let x = tape.constant(input);
        let taped = net.forward_tape(&tape, &leaves, x, b).value();
        for (i, p) in pts.iter().enumerate() {
            let d = net.eval_point(&[SpatialDual::seed_x1(p[0]), SpatialDual::seed_x2(p[1])]);
            for (blk, expect) in [d.value, d.dx1, d.dx2].into_iter().enumerate() {
                assert!((plain.get(0, blk * b + i) - expect).abs() < 1e-12);
                assert!((taped.get(0, blk * b + i) - expect).abs() < 1e-12);
            }
        }
    }
}
