//! Reverse-mode tape over matrix-valued nodes.
//!
//! Every node records the primitive that produced it and the indices of its
//! operands. Elementwise unary primitives also store their local partial
//! derivatives so the backward sweep never re-evaluates transcendental
//! functions. Nodes are appended in evaluation order, so operand indices always
//! precede their consumers.

use std::cell::{Ref, RefCell};
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::tensor::{gemm, gemm_new, Tensor};
use crate::error::{Error, Result};

pub type NodeId = usize;

/// Elementwise nonlinearities recorded as [`Op::Unary`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UnaryKind {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Square,
    Sigmoid,
    Tanh,
    Abs,
    /// Moves values with `|x| < eps` to `x + sign(x) * eps`; unit slope.
    GuardNonzero(f64),
}

impl UnaryKind {
    fn eval(self, x: f64) -> (f64, f64) {
        match self {
            UnaryKind::Sin => (x.sin(), x.cos()),
            UnaryKind::Cos => (x.cos(), -x.sin()),
            UnaryKind::Exp => {
                let e = x.exp();
                (e, e)
            }
            UnaryKind::Ln => (x.ln(), 1.0 / x),
            UnaryKind::Sqrt => {
                let s = x.sqrt();
                (s, 0.5 / s)
            }
            UnaryKind::Square => (x * x, 2.0 * x),
            UnaryKind::Sigmoid => {
                let s = sigmoid(x);
                (s, s * (1.0 - s))
            }
            UnaryKind::Tanh => {
                let t = x.tanh();
                (t, 1.0 - t * t)
            }
            UnaryKind::Abs => (x.abs(), if x >= 0.0 { 1.0 } else { -1.0 }),
            UnaryKind::GuardNonzero(eps) => (guard_nonzero(x, eps), 1.0),
        }
    }
}

/// Logistic function, evaluated without overflow for large `|x|`.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

pub fn guard_nonzero(x: f64, eps: f64) -> f64 {
    if x.abs() < eps {
        if x >= 0.0 {
            x + eps
        } else {
            x - eps
        }
    } else {
        x
    }
}

/// Activation used between hidden layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Activation {
    Sine,
    Tanh,
}

impl Activation {
    /// Returns `f(x)`.
    #[inline]
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Activation::Sine => super::trig::sin(x),
            Activation::Tanh => x.tanh(),
        }
    }

    /// Replaces every entry by `f(x)`.
    pub fn apply_in_place(self, xs: &mut [f64]) {
        match self {
            Activation::Sine => super::trig::sin_in_place(xs),
            Activation::Tanh => xs.iter_mut().for_each(|x| *x = x.tanh()),
        }
    }

    /// Writes `f(x)` and `f'(x)` for every entry.
    pub fn eval_slices(self, xs: &[f64], f: &mut [f64], d1: &mut [f64]) {
        match self {
            Activation::Sine => super::trig::sin_cos_slices(xs, f, d1),
            Activation::Tanh => {
                for ((x, fo), d) in xs.iter().zip(f.iter_mut()).zip(d1.iter_mut()) {
                    let t = x.tanh();
                    *fo = t;
                    *d = 1.0 - t * t;
                }
            }
        }
    }

    /// `f''` from `f` and `f'`.
    #[inline]
    pub fn second_from(self, f: f64, d1: f64) -> f64 {
        match self {
            Activation::Sine => -f,
            Activation::Tanh => -2.0 * f * d1,
        }
    }

    /// Returns `(f, f', f'')` at `x`.
    #[inline]
    pub fn eval3(self, x: f64) -> (f64, f64, f64) {
        match self {
            Activation::Sine => {
                let (s, c) = super::trig::sin_cos(x);
                (s, c, -s)
            }
            Activation::Tanh => {
                let t = x.tanh();
                let d = 1.0 - t * t;
                (t, d, -2.0 * t * d)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Op {
    Leaf,
    Constant,
    Add(NodeId, NodeId),
    Sub(NodeId, NodeId),
    Mul(NodeId, NodeId),
    Div(NodeId, NodeId),
    Scale(NodeId, f64),
    Shift(NodeId, f64),
    Unary {
        arg: NodeId,
        kind: UnaryKind,
        partial: Vec<f64>,
    },
    MatMul(NodeId, NodeId),
    /// Adds a column-vector bias to the first `width` columns.
    AddBias {
        x: NodeId,
        bias: NodeId,
        width: usize,
    },
    /// Activation applied to a stacked `[value | d/dx1 | d/dx2 ...]` block,
    /// propagating the forward-mode duals by the chain rule. `first` and
    /// `second` hold f' and f'' at the value columns.
    ActivationDual {
        pre: NodeId,
        width: usize,
        act: Activation,
        first: Vec<f64>,
        second: Vec<f64>,
    },
    SliceCols {
        arg: NodeId,
        start: usize,
    },
    Sum(NodeId),
    MaskedMean {
        arg: NodeId,
        mask: Vec<bool>,
        count: usize,
    },
}

impl Op {
    fn operands(&self) -> Vec<NodeId> {
        match *self {
            Op::Leaf | Op::Constant => vec![],
            Op::Add(a, b) | Op::Sub(a, b) | Op::Mul(a, b) | Op::Div(a, b) | Op::MatMul(a, b) => {
                vec![a, b]
            }
            Op::AddBias { x, bias, .. } => vec![x, bias],
            Op::Scale(a, _)
            | Op::Shift(a, _)
            | Op::Unary { arg: a, .. }
            | Op::ActivationDual { pre: a, .. }
            | Op::SliceCols { arg: a, .. }
            | Op::Sum(a)
            | Op::MaskedMean { arg: a, .. } => vec![a],
        }
    }
}

#[derive(Clone, Debug)]
struct Node {
    op: Op,
    value: Tensor,
}

#[derive(Default)]
struct Inner {
    nodes: Vec<Node>,
}

/// Append-only record of a computation.
#[derive(Default)]
pub struct Tape {
    inner: RefCell<Inner>,
}

/// Handle to a node on a [`Tape`].
#[derive(Clone, Copy)]
pub struct Var<'t> {
    tape: &'t Tape,
    id: NodeId,
}

impl std::fmt::Debug for Var<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Var#{}({:?})", self.id, self.tape.value(self.id))
    }
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.inner.borrow().nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn push(&self, op: Op, value: Tensor) -> Var<'_> {
        let mut inner = self.inner.borrow_mut();
        let id = inner.nodes.len();
        inner.nodes.push(Node { op, value });
        Var { tape: self, id }
    }

    /// Registers a differentiable input.
    pub fn leaf(&self, value: Tensor) -> Var<'_> {
        self.push(Op::Leaf, value)
    }

    pub fn constant(&self, value: Tensor) -> Var<'_> {
        self.push(Op::Constant, value)
    }

    pub fn scalar(&self, value: f64) -> Var<'_> {
        self.constant(Tensor::scalar(value))
    }

    fn value(&self, id: NodeId) -> Ref<'_, Tensor> {
        Ref::map(self.inner.borrow(), |inner| &inner.nodes[id].value)
    }

    fn unary(&self, a: NodeId, kind: UnaryKind) -> Var<'_> {
        let (value, partial) = {
            let x = self.value(a);
            let mut partial = Vec::with_capacity(x.len());
            let data = x
                .data()
                .iter()
                .map(|&v| {
                    let (f, d) = kind.eval(v);
                    partial.push(d);
                    f
                })
                .collect();
            (Tensor::from_vec(x.rows(), x.cols(), data), partial)
        };
        self.push(Op::Unary { arg: a, kind, partial }, value)
    }

    fn binary(&self, op: Op, a: NodeId, b: NodeId, f: impl Fn(f64, f64) -> f64) -> Var<'_> {
        let value = {
            let va = self.value(a);
            let vb = self.value(b);
            assert_eq!(va.shape(), vb.shape(), "elementwise operands have different shapes");
            va.zip_map(&vb, f)
        };
        self.push(op, value)
    }

    /// Matrix product `a @ b`.
    pub fn matmul<'t>(&'t self, a: Var<'t>, b: Var<'t>) -> Var<'t> {
        let value = self.value(a.id).matmul(&self.value(b.id));
        self.push(Op::MatMul(a.id, b.id), value)
    }

    /// Adds column vector `bias` (rows x 1) to the first `width` columns of `x`.
    pub fn add_bias<'t>(&'t self, x: Var<'t>, bias: Var<'t>, width: usize) -> Var<'t> {
        let value = {
            let vx = self.value(x.id);
            let vb = self.value(bias.id);
            assert_eq!(vb.shape(), (vx.rows(), 1), "bias must be a column vector");
            assert!(width <= vx.cols());
            let mut out = vx.clone();
            let cols = vx.cols();
            for r in 0..vx.rows() {
                let b = vb.get(r, 0);
                for v in &mut out.data_mut()[r * cols..r * cols + width] {
                    *v += b;
                }
            }
            out
        };
        self.push(
            Op::AddBias {
                x: x.id,
                bias: bias.id,
                width,
            },
            value,
        )
    }

    /// Applies `act` to a stacked block whose first `width` columns are values
    /// and whose remaining column groups of the same width are spatial
    /// derivatives of those values.
    pub fn activation_dual<'t>(&'t self, pre: Var<'t>, width: usize, act: Activation) -> Var<'t> {
        let (value, first, second) = {
            let p = self.value(pre.id);
            let cols = p.cols();
            assert!(width > 0 && cols.is_multiple_of(width), "stacked width mismatch");
            let blocks = cols / width;
            let rows = p.rows();
            let mut out = Tensor::zeros(rows, cols);
            let mut first = vec![0.0; rows * width];
            let mut second = vec![0.0; rows * width];
            let pd = p.data();
            let od = out.data_mut();
            for r in 0..rows {
                let base = r * cols;
                let d1 = &mut first[r * width..(r + 1) * width];
                act.eval_slices(&pd[base..base + width], &mut od[base..base + width], d1);
                for (i, d2) in second[r * width..(r + 1) * width].iter_mut().enumerate() {
                    *d2 = act.second_from(od[base + i], d1[i]);
                }
                for k in 1..blocks {
                    let off = base + k * width;
                    for i in 0..width {
                        od[off + i] = d1[i] * pd[off + i];
                    }
                }
            }
            (out, first, second)
        };
        self.push(
            Op::ActivationDual {
                pre: pre.id,
                width,
                act,
                first,
                second,
            },
            value,
        )
    }

    pub fn slice_cols<'t>(&'t self, a: Var<'t>, start: usize, len: usize) -> Var<'t> {
        let value = self.value(a.id).slice_cols(start, len);
        self.push(Op::SliceCols { arg: a.id, start }, value)
    }

    /// Mean of the entries selected by `mask`; zero when nothing is selected.
    pub fn masked_mean<'t>(&'t self, a: Var<'t>, mask: Vec<bool>) -> Var<'t> {
        let (value, count) = {
            let v = self.value(a.id);
            assert_eq!(v.len(), mask.len(), "mask length mismatch");
            let count = mask.iter().filter(|&&m| m).count();
            let sum: f64 = v.data().iter().zip(&mask).filter(|(_, &m)| m).map(|(x, _)| *x).sum();
            let mean = if count == 0 { 0.0 } else { sum / count as f64 };
            (Tensor::scalar(mean), count)
        };
        self.push(Op::MaskedMean { arg: a.id, mask, count }, value)
    }

    /// Checks that every operand index precedes its consumer.
    pub fn validate(&self) -> Result<()> {
        let inner = self.inner.borrow();
        for (i, node) in inner.nodes.iter().enumerate() {
            if let Some(&bad) = node.op.operands().iter().find(|&&o| o >= i) {
                return Err(Error::Structural(format!(
                    "node {i} consumes node {bad}, which does not precede it"
                )));
            }
        }
        Ok(())
    }

    /// Re-evaluates every non-leaf node from its operands.
    pub fn replay(&self) -> Vec<Tensor> {
        let inner = self.inner.borrow();
        let mut values: Vec<Tensor> = Vec::with_capacity(inner.nodes.len());
        for node in &inner.nodes {
            let v = match &node.op {
                Op::Leaf | Op::Constant => node.value.clone(),
                Op::Add(a, b) => values[*a].zip_map(&values[*b], |x, y| x + y),
                Op::Sub(a, b) => values[*a].zip_map(&values[*b], |x, y| x - y),
                Op::Mul(a, b) => values[*a].zip_map(&values[*b], |x, y| x * y),
                Op::Div(a, b) => values[*a].zip_map(&values[*b], |x, y| x / y),
                Op::Scale(a, c) => values[*a].map(|x| x * c),
                Op::Shift(a, c) => values[*a].map(|x| x + c),
                Op::Unary { arg, kind, .. } => values[*arg].map(|x| kind.eval(x).0),
                Op::MatMul(a, b) => values[*a].matmul(&values[*b]),
                Op::AddBias { x, bias, width } => {
                    let mut out = values[*x].clone();
                    let cols = out.cols();
                    for r in 0..out.rows() {
                        let b = values[*bias].get(r, 0);
                        for v in &mut out.data_mut()[r * cols..r * cols + width] {
                            *v += b;
                        }
                    }
                    out
                }
                Op::ActivationDual { pre, width, act, .. } => {
                    let p = &values[*pre];
                    let cols = p.cols();
                    let blocks = cols / width;
                    let mut out = Tensor::zeros(p.rows(), cols);
                    for r in 0..p.rows() {
                        for i in 0..*width {
                            let (f, d1, _) = act.eval3(p.get(r, i));
                            out.data_mut()[r * cols + i] = f;
                            for k in 1..blocks {
                                out.data_mut()[r * cols + k * width + i] = d1 * p.get(r, k * width + i);
                            }
                        }
                    }
                    out
                }
                Op::SliceCols { arg, start } => values[*arg].slice_cols(*start, node.value.cols()),
                Op::Sum(a) => Tensor::scalar(values[*a].sum()),
                Op::MaskedMean { arg, mask, count } => {
                    let sum: f64 = values[*arg]
                        .data()
                        .iter()
                        .zip(mask)
                        .filter(|(_, &m)| m)
                        .map(|(x, _)| *x)
                        .sum();
                    Tensor::scalar(if *count == 0 { 0.0 } else { sum / *count as f64 })
                }
            };
            values.push(v);
        }
        values
    }

    /// Adjoints of the leaves with respect to the scalar `output`, indexed by
    /// node id; non-leaf entries are `None`.
    pub fn backward(&self, output: Var<'_>) -> Result<Vec<Option<Tensor>>> {
        self.validate()?;
        let inner = self.inner.borrow();
        let nodes = &inner.nodes;
        if output.id >= nodes.len() || !std::ptr::eq(output.tape, self) {
            return Err(Error::Structural("output node is not on this tape".into()));
        }
        if nodes[output.id].value.len() != 1 {
            return Err(Error::Structural(format!(
                "backward requires a scalar output, got shape {:?}",
                nodes[output.id].value.shape()
            )));
        }
        let mut adj: Vec<Option<Tensor>> = vec![None; nodes.len()];
        let mut grads: Vec<Option<Tensor>> = vec![None; nodes.len()];
        adj[output.id] = Some(Tensor::scalar(1.0));

        for i in (0..=output.id).rev() {
            let Some(mut g) = adj[i].take() else { continue };
            let node = &nodes[i];
            match &node.op {
                Op::Leaf => grads[i] = Some(g),
                Op::Constant => {}
                Op::Add(a, b) => {
                    accumulate(&mut adj, *a, &g, nodes);
                    accumulate_owned(&mut adj, *b, g, nodes);
                }
                Op::Sub(a, b) => {
                    accumulate(&mut adj, *a, &g, nodes);
                    g.data_mut().iter_mut().for_each(|x| *x = -*x);
                    accumulate_owned(&mut adj, *b, g, nodes);
                }
                Op::Mul(a, b) => {
                    let ga = g.zip_map(&nodes[*b].value, |x, y| x * y);
                    let va = &nodes[*a].value;
                    g.data_mut().iter_mut().zip(va.data()).for_each(|(x, y)| *x *= y);
                    accumulate_owned(&mut adj, *a, ga, nodes);
                    accumulate_owned(&mut adj, *b, g, nodes);
                }
                Op::Div(a, b) => {
                    let vb = &nodes[*b].value;
                    let ga = g.zip_map(vb, |x, y| x / y);
                    let gb = ga.zip_map(&node.value, |x, q| -x * q);
                    accumulate_owned(&mut adj, *a, ga, nodes);
                    accumulate_owned(&mut adj, *b, gb, nodes);
                }
                Op::Scale(a, c) => {
                    g.data_mut().iter_mut().for_each(|x| *x *= c);
                    accumulate_owned(&mut adj, *a, g, nodes);
                }
                Op::Shift(a, _) => accumulate_owned(&mut adj, *a, g, nodes),
                Op::Unary { arg, partial, .. } => {
                    for (x, p) in g.data_mut().iter_mut().zip(partial) {
                        *x *= p;
                    }
                    accumulate_owned(&mut adj, *arg, g, nodes);
                }
                Op::MatMul(a, b) => {
                    let (va, vb) = (&nodes[*a].value, &nodes[*b].value);
                    if needs_grad(nodes, *a) {
                        match &mut adj[*a] {
                            Some(slot) => gemm(&g, false, vb, true, slot, 1.0),
                            slot @ None => *slot = Some(gemm_new(&g, false, vb, true)),
                        }
                    }
                    if needs_grad(nodes, *b) {
                        match &mut adj[*b] {
                            Some(slot) => gemm(va, true, &g, false, slot, 1.0),
                            slot @ None => *slot = Some(gemm_new(va, true, &g, false)),
                        }
                    }
                }
                Op::AddBias { x, bias, width } => {
                    let rows = g.rows();
                    let cols = g.cols();
                    let mut gb = Tensor::zeros(rows, 1);
                    for r in 0..rows {
                        gb.data_mut()[r] = g.data()[r * cols..r * cols + width].iter().sum();
                    }
                    accumulate_owned(&mut adj, *bias, gb, nodes);
                    accumulate_owned(&mut adj, *x, g, nodes);
                }
                Op::ActivationDual {
                    pre,
                    width,
                    first,
                    second,
                    ..
                } => {
                    let p = &nodes[*pre].value;
                    let cols = p.cols();
                    let blocks = cols / width;
                    let pd = p.data();
                    let gd = g.data_mut();
                    for r in 0..p.rows() {
                        let base = r * cols;
                        let f1 = &first[r * width..(r + 1) * width];
                        let f2 = &second[r * width..(r + 1) * width];
                        for i in 0..*width {
                            gd[base + i] *= f1[i];
                        }
                        for k in 1..blocks {
                            let off = base + k * width;
                            for i in 0..*width {
                                let gj = gd[off + i];
                                gd[base + i] += f2[i] * pd[off + i] * gj;
                                gd[off + i] = f1[i] * gj;
                            }
                        }
                    }
                    accumulate_owned(&mut adj, *pre, g, nodes);
                }
                Op::SliceCols { arg, start } => {
                    if !needs_grad(nodes, *arg) {
                        continue;
                    }
                    let src = &nodes[*arg].value;
                    let slot = adj[*arg].get_or_insert_with(|| Tensor::zeros(src.rows(), src.cols()));
                    let len = g.cols();
                    let cols = src.cols();
                    for r in 0..g.rows() {
                        let dst = &mut slot.data_mut()[r * cols + start..r * cols + start + len];
                        dst.iter_mut()
                            .zip(&g.data()[r * len..(r + 1) * len])
                            .for_each(|(d, s)| *d += s);
                    }
                }
                Op::Sum(a) => {
                    let v = &nodes[*a].value;
                    let ga = Tensor::filled(v.rows(), v.cols(), g.item());
                    accumulate_owned(&mut adj, *a, ga, nodes);
                }
                Op::MaskedMean { arg, mask, count } => {
                    if *count > 0 {
                        let v = &nodes[*arg].value;
                        let w = g.item() / *count as f64;
                        let data = mask.iter().map(|&m| if m { w } else { 0.0 }).collect();
                        accumulate_owned(&mut adj, *arg, Tensor::from_vec(v.rows(), v.cols(), data), nodes);
                    }
                }
            }
        }
        Ok(grads)
    }

    /// Gradient of scalar `output` with respect to the given leaves,
    /// concatenated in order. Leaves the output does not depend on receive
    /// exact zeros.
    pub fn grad_params(&self, output: Var<'_>, leaves: &[Var<'_>]) -> Result<Vec<f64>> {
        let grads = self.backward(output)?;
        let inner = self.inner.borrow();
        let mut out = Vec::new();
        for leaf in leaves {
            if !std::ptr::eq(leaf.tape, self) || leaf.id >= inner.nodes.len() {
                return Err(Error::Structural("leaf belongs to a different tape".into()));
            }
            let node = &inner.nodes[leaf.id];
            if !matches!(node.op, Op::Leaf) {
                return Err(Error::Structural(format!("node {} is not a registered leaf", leaf.id)));
            }
            match &grads[leaf.id] {
                Some(g) => out.extend_from_slice(g.data()),
                None => out.extend(std::iter::repeat_n(0.0, node.value.len())),
            }
        }
        Ok(out)
    }
}

fn needs_grad(nodes: &[Node], id: NodeId) -> bool {
    !matches!(nodes[id].op, Op::Constant)
}

fn accumulate(adj: &mut [Option<Tensor>], id: NodeId, g: &Tensor, nodes: &[Node]) {
    if !needs_grad(nodes, id) {
        return;
    }
    match &mut adj[id] {
        Some(t) => t.accumulate(g),
        slot @ None => *slot = Some(g.clone()),
    }
}

fn accumulate_owned(adj: &mut [Option<Tensor>], id: NodeId, g: Tensor, nodes: &[Node]) {
    if !needs_grad(nodes, id) {
        return;
    }
    match &mut adj[id] {
        Some(t) => t.accumulate(&g),
        slot @ None => *slot = Some(g),
    }
}

impl<'t> Var<'t> {
    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn tape(&self) -> &'t Tape {
        self.tape
    }

    /// Copy of the node value.
    pub fn value(&self) -> Tensor {
        self.tape.value(self.id).clone()
    }

    /// Borrow of the node value.
    pub fn value_ref(&self) -> Ref<'t, Tensor> {
        self.tape.value(self.id)
    }

    /// Value of a 1x1 node.
    pub fn item(&self) -> f64 {
        self.tape.value(self.id).item()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.tape.value(self.id).shape()
    }

    pub fn unary(self, kind: UnaryKind) -> Self {
        self.tape.unary(self.id, kind)
    }

    pub fn scale(self, c: f64) -> Self {
        let value = self.tape.value(self.id).map(|x| x * c);
        self.tape.push(Op::Scale(self.id, c), value)
    }

    pub fn shift(self, c: f64) -> Self {
        let value = self.tape.value(self.id).map(|x| x + c);
        self.tape.push(Op::Shift(self.id, c), value)
    }

    /// Sum of all entries as a 1x1 node.
    pub fn sum(self) -> Self {
        let value = Tensor::scalar(self.tape.value(self.id).sum());
        self.tape.push(Op::Sum(self.id), value)
    }

    /// Mean of all entries as a 1x1 node.
    pub fn mean(self) -> Self {
        let n = self.tape.value(self.id).len();
        self.sum().scale(1.0 / n as f64)
    }

    /// Constant node with this node's shape, filled with `c`.
    pub fn filled_like(self, c: f64) -> Self {
        let (r, cols) = self.shape();
        self.tape.constant(Tensor::filled(r, cols, c))
    }
}

macro_rules! var_binop {
    ($trait:ident, $method:ident, $variant:ident, $f:expr) => {
        impl<'t> $trait for Var<'t> {
            type Output = Var<'t>;
            fn $method(self, rhs: Var<'t>) -> Var<'t> {
                assert!(std::ptr::eq(self.tape, rhs.tape), "operands on different tapes");
                self.tape
                    .binary(Op::$variant(self.id, rhs.id), self.id, rhs.id, $f)
            }
        }
    };
}

var_binop!(Add, add, Add, |a, b| a + b);
var_binop!(Sub, sub, Sub, |a, b| a - b);
var_binop!(Mul, mul, Mul, |a, b| a * b);
var_binop!(Div, div, Div, |a, b| a / b);

impl<'t> Neg for Var<'t> {
    type Output = Var<'t>;
    fn neg(self) -> Var<'t> {
        self.scale(-1.0)
    }
}

impl<'t> Add<f64> for Var<'t> {
    type Output = Var<'t>;
    fn add(self, rhs: f64) -> Var<'t> {
        self.shift(rhs)
    }
}

impl<'t> Sub<f64> for Var<'t> {
    type Output = Var<'t>;
    fn sub(self, rhs: f64) -> Var<'t> {
        self.shift(-rhs)
    }
}

impl<'t> Mul<f64> for Var<'t> {
    type Output = Var<'t>;
    fn mul(self, rhs: f64) -> Var<'t> {
        self.scale(rhs)
    }
}

impl<'t> Div<f64> for Var<'t> {
    type Output = Var<'t>;
    fn div(self, rhs: f64) -> Var<'t> {
        self.scale(1.0 / rhs)
    }
}
