//! Fully connected network with logistic hidden units and a softmax output,
//! trained on mean cross-entropy with Adam.

use rand::Rng;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub epochs: usize,
    /// Minibatch size; `None` trains full batch.
    pub batch_size: Option<usize>,
    pub seed: u64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        // 0.2 is far above the usual Adam step size; keep it overridable.
        AdamConfig {
            learning_rate: 0.2,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            epochs: 300,
            batch_size: None,
            seed: 0,
        }
    }
}

impl AdamConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) {
            return Err(Error::Config("learning rate must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::Config("Adam betas must lie in [0, 1)".into()));
        }
        if self.batch_size == Some(0) {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MlpParams {
    pub hidden: Vec<usize>,
    pub adam: AdamConfig,
}

impl Default for MlpParams {
    fn default() -> Self {
        MlpParams {
            hidden: vec![14, 8],
            adam: AdamConfig::default(),
        }
    }
}

/// One affine layer; `weights` is `outputs × inputs`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dense {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

impl Dense {
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.outputs)
            .map(|o| {
                let w = &self.weights[o * self.inputs..(o + 1) * self.inputs];
                self.biases[o] + w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub layers: Vec<Dense>,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

impl MlpModel {
    /// Randomly initialized network, Glorot-uniform weights and zero biases.
    pub fn init(sizes: &[usize], seed: u64) -> Self {
        let mut rng = seed::rng(seed);
        let layers = sizes
            .windows(2)
            .map(|w| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
                Dense {
                    inputs: fan_in,
                    outputs: fan_out,
                    weights: (0..fan_in * fan_out)
                        .map(|_| rng.random_range(-limit..=limit))
                        .collect(),
                    biases: vec![0.0; fan_out],
                }
            })
            .collect();
        MlpModel { layers }
    }

    pub fn input_width(&self) -> usize {
        self.layers.first().map_or(0, |l| l.inputs)
    }

    pub fn output_width(&self) -> usize {
        self.layers.last().map_or(0, |l| l.outputs)
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![self.input_width()];
        s.extend(self.layers.iter().map(|l| l.outputs));
        s
    }

    /// Activations of every layer, input first; the last entry is the softmax output.
    fn forward(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut acts = vec![x.to_vec()];
        let last = self.layers.len() - 1;
        for (li, layer) in self.layers.iter().enumerate() {
            let z = layer.apply(acts.last().unwrap());
            let a = if li == last {
                softmax(&z)
            } else {
                z.into_iter().map(sigmoid).collect()
            };
            acts.push(a);
        }
        acts
    }

    pub fn predict_proba(&self, row: &[f64]) -> Vec<f64> {
        self.forward(row).pop().unwrap()
    }

    pub fn predict(&self, rows: &[Vec<f64>]) -> Result<Vec<usize>> {
        let width = self.input_width();
        rows.iter()
            .map(|r| {
                if r.len() != width {
                    return Err(Error::contract(format!(
                        "row has {} values, model expects {width}",
                        r.len()
                    )));
                }
                Ok(argmax(&self.predict_proba(r)))
            })
            .collect()
    }

    /// Mean cross-entropy over the batch.
    pub fn loss(&self, rows: &[Vec<f64>], labels: &[usize]) -> f64 {
        let n = rows.len().max(1) as f64;
        rows.iter()
            .zip(labels)
            .map(|(r, &y)| -self.predict_proba(r)[y].max(f64::MIN_POSITIVE).ln())
            .sum::<f64>()
            / n
    }

    /// Mean cross-entropy and its gradient by backpropagation.
    ///
    /// The gradient has the same layout as the model: one `Dense` per layer.
    pub fn loss_and_gradient(&self, rows: &[Vec<f64>], labels: &[usize]) -> (f64, Vec<Dense>) {
        let mut grads: Vec<Dense> = self
            .layers
            .iter()
            .map(|l| Dense {
                inputs: l.inputs,
                outputs: l.outputs,
                weights: vec![0.0; l.weights.len()],
                biases: vec![0.0; l.biases.len()],
            })
            .collect();
        let n = rows.len().max(1) as f64;
        let mut loss = 0.0;
        for (x, &y) in rows.iter().zip(labels) {
            let acts = self.forward(x);
            let probs = acts.last().unwrap();
            loss -= probs[y].max(f64::MIN_POSITIVE).ln();
            // softmax + cross-entropy: dL/dz = p - onehot
            let mut delta: Vec<f64> = probs.clone();
            delta[y] -= 1.0;
            for li in (0..self.layers.len()).rev() {
                let layer = &self.layers[li];
                let input = &acts[li];
                let g = &mut grads[li];
                for o in 0..layer.outputs {
                    g.biases[o] += delta[o];
                    let row = &mut g.weights[o * layer.inputs..(o + 1) * layer.inputs];
                    for (gw, &a) in row.iter_mut().zip(input) {
                        *gw += delta[o] * a;
                    }
                }
                if li > 0 {
                    delta = (0..layer.inputs)
                        .map(|i| {
                            let back: f64 = (0..layer.outputs)
                                .map(|o| layer.weights[o * layer.inputs + i] * delta[o])
                                .sum();
                            let a = input[i];
                            back * a * (1.0 - a)
                        })
                        .collect();
                }
            }
        }
        for g in &mut grads {
            g.weights.iter_mut().for_each(|v| *v /= n);
            g.biases.iter_mut().for_each(|v| *v /= n);
        }
        (loss / n, grads)
    }

    /// Flat view of all parameters (per layer: weights then biases).
    pub fn parameters(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(&l.biases).copied())
            .collect()
    }

    pub fn set_parameters(&mut self, params: &[f64]) {
        let mut it = params.iter().copied();
        for l in &mut self.layers {
            for w in l.weights.iter_mut().chain(l.biases.iter_mut()) {
                *w = it.next().expect("parameter vector too short");
            }
        }
    }
}

pub fn flatten(grads: &[Dense]) -> Vec<f64> {
    grads
        .iter()
        .flat_map(|l| l.weights.iter().chain(&l.biases).copied())
        .collect()
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    fn new(n: usize) -> Self {
        Adam {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    fn step(&mut self, params: &mut [f64], grad: &[f64], cfg: &AdamConfig) {
        self.t += 1;
        let c1 = 1.0 - cfg.beta1.powi(self.t);
        let c2 = 1.0 - cfg.beta2.powi(self.t);
        for i in 0..params.len() {
            self.m[i] = cfg.beta1 * self.m[i] + (1.0 - cfg.beta1) * grad[i];
            self.v[i] = cfg.beta2 * self.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
            let mhat = self.m[i] / c1;
            let vhat = self.v[i] / c2;
            params[i] -= cfg.learning_rate * mhat / (vhat.sqrt() + cfg.epsilon);
        }
    }
}

/// Train a network of shape `[width, hidden..., class_count]`.
pub fn mlp_train(
    rows: &[Vec<f64>],
    labels: &[usize],
    class_count: usize,
    params: &MlpParams,
) -> Result<MlpModel> {
    params.adam.validate()?;
    let width = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || width == 0 {
        return Err(Error::contract("training set needs at least one row and one feature"));
    }
    if rows.len() != labels.len() {
        return Err(Error::contract("rows and labels differ in length"));
    }
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::contract("ragged training rows"));
    }
    if labels.iter().any(|&l| l >= class_count) {
        return Err(Error::contract("label outside 0..class_count"));
    }
    if params.hidden.contains(&0) {
        return Err(Error::Config("hidden layers must have at least one unit".into()));
    }
    let cfg = &params.adam;
    let mut sizes = vec![width];
    sizes.extend(&params.hidden);
    sizes.push(class_count);
    let mut model = MlpModel::init(&sizes, seed::derive(cfg.seed, 0));
    let mut shuffle_rng = seed::task_rng(cfg.seed, 1);
    let mut theta = model.parameters();
    let mut adam = Adam::new(theta.len());
    let n = rows.len();
    let batch = cfg.batch_size.unwrap_or(n).min(n);
    let mut order: Vec<usize> = (0..n).collect();

    for epoch in 0..cfg.epochs {
        if batch < n {
            order.shuffle(&mut shuffle_rng);
        }
        for chunk in order.chunks(batch) {
            let (bx, by): (Vec<Vec<f64>>, Vec<usize>) = if batch < n {
                chunk.iter().map(|&i| (rows[i].clone(), labels[i])).unzip()
            } else {
                (rows.to_vec(), labels.to_vec())
            };
            let (loss, grads) = model.loss_and_gradient(&bx, &by);
            if !loss.is_finite() {
                return Err(Error::Divergence { epoch });
            }
            adam.step(&mut theta, &flatten(&grads), cfg);
            if theta.iter().any(|v| !v.is_finite()) {
                return Err(Error::Divergence { epoch });
            }
            model.set_parameters(&theta);
        }
    }
    Ok(model)
}
