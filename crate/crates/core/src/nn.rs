//! Minimal dense networks with exact reverse-mode gradients.
//!
//! Everything here is plain `Vec<f64>` math: affine layers with ReLU, Mish
//! or identity activations, a recording forward pass, the matching backward
//! pass, sinusoidal step embeddings, Adam, and soft target updates. The
//! contract for every differentiable piece is agreement with central finite
//! differences, which the tests enforce.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NnError {
    #[error("non-finite gradient at layer {layer}; optimizer step rejected")]
    NonFiniteGradient { layer: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Mish,
    Tanh,
    Linear,
}

impl Activation {
    fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Relu => x.max(0.0),
            Activation::Mish => x * softplus(x).tanh(),
            Activation::Tanh => x.tanh(),
            Activation::Linear => x,
        }
    }

    /// Derivative with respect to the pre-activation value.
    fn derivative(self, x: f64) -> f64 {
        match self {
            Activation::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Mish => {
                let t = softplus(x).tanh();
                t + x * (1.0 - t * t) * sigmoid(x)
            }
            Activation::Tanh => {
                let t = x.tanh();
                1.0 - t * t
            }
            Activation::Linear => 1.0,
        }
    }
}

fn softplus(x: f64) -> f64 {
    if x > 30.0 {
        x
    } else if x < -30.0 {
        x.exp()
    } else {
        x.exp().ln_1p()
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Layer widths and activations of a dense network.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseNetSpec {
    pub input_dim: usize,
    pub widths: Vec<usize>,
    pub activations: Vec<Activation>,
}

impl DenseNetSpec {
    pub fn new(input_dim: usize, layers: &[(usize, Activation)]) -> Self {
        assert!(input_dim > 0 && !layers.is_empty(), "spec needs at least one layer");
        assert!(layers.iter().all(|&(w, _)| w > 0), "layer widths must be positive");
        Self {
            input_dim,
            widths: layers.iter().map(|&(w, _)| w).collect(),
            activations: layers.iter().map(|&(_, a)| a).collect(),
        }
    }

    pub fn output_dim(&self) -> usize {
        *self.widths.last().unwrap()
    }

    pub fn num_layers(&self) -> usize {
        self.widths.len()
    }

    fn layer_in_dim(&self, layer: usize) -> usize {
        if layer == 0 {
            self.input_dim
        } else {
            self.widths[layer - 1]
        }
    }
}

/// Weights and bias of one layer. Weights are row-major `out x in`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerParams {
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

/// All parameters of a network, addressable by layer. Also reused as the
/// container for gradients and optimizer moments, which share the shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub layers: Vec<LayerParams>,
}

impl ParamSet {
    pub fn zeros(spec: &DenseNetSpec) -> Self {
        let layers = (0..spec.num_layers())
            .map(|l| LayerParams {
                weights: vec![0.0; spec.widths[l] * spec.layer_in_dim(l)],
                bias: vec![0.0; spec.widths[l]],
            })
            .collect();
        Self { layers }
    }

    /// Fan-in-scaled uniform init. The final layer is shrunk by
    /// `final_layer_scale` so the network starts out close to the zero map.
    pub fn init<R: Rng>(spec: &DenseNetSpec, rng: &mut R, final_layer_scale: f64) -> Self {
        let mut set = Self::zeros(spec);
        let last = spec.num_layers() - 1;
        for (l, layer) in set.layers.iter_mut().enumerate() {
            let bound = (1.0 / spec.layer_in_dim(l) as f64).sqrt()
                * if l == last { final_layer_scale } else { 1.0 };
            for w in layer.weights.iter_mut() {
                *w = rng.random_range(-bound..bound);
            }
            for b in layer.bias.iter_mut() {
                *b = rng.random_range(-bound..bound);
            }
        }
        set
    }

    pub fn iter_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(l.bias.iter()).copied())
    }

    fn for_each_with<F: FnMut(&mut f64, f64)>(&mut self, other: &ParamSet, mut f: F) {
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            for (x, y) in a.weights.iter_mut().zip(&b.weights) {
                f(x, *y);
            }
            for (x, y) in a.bias.iter_mut().zip(&b.bias) {
                f(x, *y);
            }
        }
    }

    /// Accumulates `scale * other` into self; used when several backward
    /// passes contribute to one gradient.
    pub fn add_scaled(&mut self, other: &ParamSet, scale: f64) {
        self.for_each_with(other, |x, y| *x += scale * y);
    }

    pub fn scale(&mut self, factor: f64) {
        for layer in self.layers.iter_mut() {
            for w in layer.weights.iter_mut() {
                *w *= factor;
            }
            for b in layer.bias.iter_mut() {
                *b *= factor;
            }
        }
    }
}

/// Recording of one forward pass: layer inputs and pre-activations.
#[derive(Clone, Debug)]
pub struct Tape {
    inputs: Vec<Vec<f64>>,
    preacts: Vec<Vec<f64>>,
}

/// A spec plus its parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Network {
    pub spec: DenseNetSpec,
    pub params: ParamSet,
}

impl Network {
    pub fn new<R: Rng>(spec: DenseNetSpec, rng: &mut R, final_layer_scale: f64) -> Self {
        let params = ParamSet::init(&spec, rng, final_layer_scale);
        Self { spec, params }
    }

    pub fn forward(&self, input: &[f64]) -> Vec<f64> {
        forward(&self.spec, &self.params, input)
    }

    pub fn forward_recorded(&self, input: &[f64]) -> (Vec<f64>, Tape) {
        forward_recorded(&self.spec, &self.params, input)
    }

    pub fn backward(&self, tape: &Tape, out_grad: &[f64]) -> (ParamSet, Vec<f64>) {
        backward(&self.spec, &self.params, tape, out_grad)
    }
}

pub fn forward(spec: &DenseNetSpec, params: &ParamSet, input: &[f64]) -> Vec<f64> {
    assert_eq!(input.len(), spec.input_dim, "input dimension mismatch");
    let mut x = input.to_vec();
    for l in 0..spec.num_layers() {
        x = layer_forward(spec, params, l, &x).0;
    }
    x
}

pub fn forward_recorded(spec: &DenseNetSpec, params: &ParamSet, input: &[f64]) -> (Vec<f64>, Tape) {
    assert_eq!(input.len(), spec.input_dim, "input dimension mismatch");
    let mut tape = Tape {
        inputs: Vec::with_capacity(spec.num_layers()),
        preacts: Vec::with_capacity(spec.num_layers()),
    };
    let mut x = input.to_vec();
    for l in 0..spec.num_layers() {
        let (out, preact) = layer_forward(spec, params, l, &x);
        tape.inputs.push(x);
        tape.preacts.push(preact);
        x = out;
    }
    (x, tape)
}

fn layer_forward(
    spec: &DenseNetSpec,
    params: &ParamSet,
    layer: usize,
    input: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let in_dim = spec.layer_in_dim(layer);
    let out_dim = spec.widths[layer];
    let p = &params.layers[layer];
    let act = spec.activations[layer];
    let mut preact = vec![0.0; out_dim];
    for o in 0..out_dim {
        let row = &p.weights[o * in_dim..(o + 1) * in_dim];
        let mut acc = p.bias[o];
        for (w, x) in row.iter().zip(input) {
            acc += w * x;
        }
        preact[o] = acc;
    }
    let out = preact.iter().map(|&v| act.apply(v)).collect();
    (out, preact)
}

/// Exact gradients of the recorded computation: returns parameter gradients
/// (shaped like the parameters) and the gradient with respect to the input.
pub fn backward(
    spec: &DenseNetSpec,
    params: &ParamSet,
    tape: &Tape,
    out_grad: &[f64],
) -> (ParamSet, Vec<f64>) {
    assert_eq!(out_grad.len(), spec.output_dim(), "output gradient dimension mismatch");
    let mut grads = ParamSet::zeros(spec);
    let mut upstream = out_grad.to_vec();
    for l in (0..spec.num_layers()).rev() {
        let in_dim = spec.layer_in_dim(l);
        let out_dim = spec.widths[l];
        let act = spec.activations[l];
        let input = &tape.inputs[l];
        let preact = &tape.preacts[l];
        let p = &params.layers[l];
        let g = &mut grads.layers[l];
        let mut input_grad = vec![0.0; in_dim];
        for o in 0..out_dim {
            let dz = upstream[o] * act.derivative(preact[o]);
            if dz == 0.0 {
                continue;
            }
            g.bias[o] += dz;
            let row = &p.weights[o * in_dim..(o + 1) * in_dim];
            let grow = &mut g.weights[o * in_dim..(o + 1) * in_dim];
            for i in 0..in_dim {
                grow[i] += dz * input[i];
                input_grad[i] += dz * row[i];
            }
        }
        upstream = input_grad;
    }
    (grads, upstream)
}

/// Sinusoidal embedding of a denoising-step index: interleaved sin/cos over
/// geometric frequencies whose periods span 1 to 10^4.
pub fn sinusoidal_embed(t: usize, dim: usize) -> Vec<f64> {
    assert!(dim >= 2 && dim % 2 == 0, "embedding dimension must be even, got {dim}");
    let half = dim / 2;
    let mut out = vec![0.0; dim];
    for i in 0..half {
        let exponent = if half > 1 {
            i as f64 / (half - 1) as f64
        } else {
            0.0
        };
        let denom = 1e4f64.powf(exponent);
        let angle = t as f64 / denom;
        out[2 * i] = angle.sin();
        out[2 * i + 1] = angle.cos();
    }
    out
}

/// Adam state: one first and one second moment per parameter.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdamState {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub step: u64,
    m: ParamSet,
    v: ParamSet,
}

impl AdamState {
    pub fn new(spec: &DenseNetSpec, learning_rate: f64) -> Self {
        Self {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            step: 0,
            m: ParamSet::zeros(spec),
            v: ParamSet::zeros(spec),
        }
    }
}

/// One bias-corrected Adam update. Rejects non-finite gradients without
/// touching the parameters.
pub fn optimizer_step(
    state: &mut AdamState,
    params: &mut ParamSet,
    grads: &ParamSet,
) -> Result<(), NnError> {
    for (l, layer) in grads.layers.iter().enumerate() {
        if layer.weights.iter().chain(layer.bias.iter()).any(|g| !g.is_finite()) {
            return Err(NnError::NonFiniteGradient { layer: l });
        }
    }
    state.step += 1;
    let t = state.step as f64;
    let bias1 = 1.0 - state.beta1.powf(t);
    let bias2 = 1.0 - state.beta2.powf(t);
    let (b1, b2, lr, eps) = (state.beta1, state.beta2, state.learning_rate, state.epsilon);
    for l in 0..params.layers.len() {
        let p = &mut params.layers[l];
        let g = &grads.layers[l];
        let m = &mut state.m.layers[l];
        let v = &mut state.v.layers[l];
        let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
            *m = b1 * *m + (1.0 - b1) * g;
            *v = b2 * *v + (1.0 - b2) * g * g;
            let m_hat = *m / bias1;
            let v_hat = *v / bias2;
            *p -= lr * m_hat / (v_hat.sqrt() + eps);
        };
        for i in 0..p.weights.len() {
            update(&mut p.weights[i], g.weights[i], &mut m.weights[i], &mut v.weights[i]);
        }
        for i in 0..p.bias.len() {
            update(&mut p.bias[i], g.bias[i], &mut m.bias[i], &mut v.bias[i]);
        }
    }
    Ok(())
}

/// Polyak averaging: target <- tau * online + (1 - tau) * target.
pub fn soft_update(target: &mut ParamSet, online: &ParamSet, tau: f64) {
    assert!((0.0..=1.0).contains(&tau), "tau must lie in [0, 1]");
    target.for_each_with(online, |t, o| *t = tau * o + (1.0 - tau) * *t);
}
