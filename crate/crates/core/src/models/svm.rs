//! One-vs-all RBF support vector machine trained by SMO.
//!
//! The binary solver minimizes `½ αᵀQα − eᵀα` subject to `0 ≤ α ≤ C` and
//! `yᵀα = 0`, with `Q_ij = y_i y_j K(x_i, x_j)`. Each iteration picks the
//! maximal violating pair and solves the two-variable subproblem analytically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvmParams {
    /// Box constraint `C`.
    pub cbox: f64,
    /// RBF width; `None` uses `1 / (width · mean feature variance)` of the training rows.
    pub gamma: Option<f64>,
    /// Stop once the maximal KKT violation is at most this.
    pub tol: f64,
    /// Iteration cap in passes of `n` pair updates; `None` means `10 · n` passes.
    pub max_passes: Option<usize>,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            cbox: 1.0,
            gamma: None,
            tol: 1e-3,
            max_passes: None,
        }
    }
}

pub fn rbf(gamma: f64, a: &[f64], b: &[f64]) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d2).exp()
}

/// `1 / (width · mean per-column variance)`, falling back to `1 / width`.
pub fn default_gamma(rows: &[Vec<f64>]) -> f64 {
    let width = rows.first().map_or(1, Vec::len).max(1);
    let n = rows.len().max(1) as f64;
    let mut total_var = 0.0;
    for j in 0..width {
        let mean = rows.iter().map(|r| r[j]).sum::<f64>() / n;
        total_var += rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
    }
    let mean_var = total_var / width as f64;
    if mean_var > 0.0 {
        1.0 / (width as f64 * mean_var)
    } else {
        1.0 / width as f64
    }
}

/// Result of one binary SMO solve.
#[derive(Debug, Clone)]
pub struct SmoSolution {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    /// `max_{I_up} −y∇f − min_{I_low} −y∇f` at exit (0 when a set is empty).
    pub max_violation: f64,
    pub converged: bool,
    /// Dual objective `eᵀα − ½ αᵀQα` after every iteration, starting at α = 0.
    pub dual_trace: Vec<f64>,
}

fn maximal_violating_pair(
    alpha: &[f64],
    grad: &[f64],
    y: &[f64],
    c: f64,
) -> (Option<usize>, Option<usize>, f64) {
    let mut i_best = None;
    let mut m = f64::NEG_INFINITY;
    let mut j_best = None;
    let mut big_m = f64::INFINITY;
    for t in 0..alpha.len() {
        let v = -y[t] * grad[t];
        let in_up = (y[t] > 0.0 && alpha[t] < c) || (y[t] < 0.0 && alpha[t] > 0.0);
        let in_low = (y[t] < 0.0 && alpha[t] < c) || (y[t] > 0.0 && alpha[t] > 0.0);
        if in_up && v > m {
            m = v;
            i_best = Some(t);
        }
        if in_low && v < big_m {
            big_m = v;
            j_best = Some(t);
        }
    }
    let gap = if i_best.is_some() && j_best.is_some() {
        (m - big_m).max(0.0)
    } else {
        0.0
    };
    (i_best, j_best, gap)
}

fn dual_objective(alpha: &[f64], grad: &[f64]) -> f64 {
    // f(α) = ½ αᵀQα − eᵀα = ½ Σ α_t (∇f_t − 1); the dual is −f
    -0.5 * alpha
        .iter()
        .zip(grad)
        .map(|(a, g)| a * (g - 1.0))
        .sum::<f64>()
}

/// Solve the binary dual over a precomputed kernel matrix (`kernel[i][j]`).
///
/// `y` holds ±1 labels and must contain both signs.
pub fn smo_solve(kernel: &[Vec<f64>], y: &[f64], c: f64, tol: f64, max_iter: usize) -> SmoSolution {
    let n = y.len();
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let q = |i: usize, j: usize| y[i] * y[j] * kernel[i][j];
    let mut dual_trace = vec![0.0];
    let mut iterations = 0;
    let mut converged = false;
    let mut gap;
    loop {
        let (bi, bj, g) = maximal_violating_pair(&alpha, &grad, y, c);
        gap = g;
        let (Some(i), Some(j)) = (bi, bj) else {
            converged = true;
            break;
        };
        if gap <= tol {
            converged = true;
            break;
        }
        if iterations >= max_iter {
            break;
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let qij = q(i, j);
        if y[i] != y[j] {
            let mut quad = kernel[i][i] + kernel[j][j] + 2.0 * qij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let mut quad = kernel[i][i] + kernel[j][j] - 2.0 * qij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += q(t, i) * di + q(t, j) * dj;
        }
        dual_trace.push(dual_objective(&alpha, &grad));
    }

    SmoSolution {
        bias: bias_from_gradient(&alpha, &grad, y, c),
        alpha,
        iterations,
        max_violation: gap,
        converged,
        dual_trace,
    }
}

fn bias_from_gradient(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    let mut free_sum = 0.0;
    let mut free = 0usize;
    for t in 0..alpha.len() {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            free_sum += yg;
        }
    }
    let rho = if free > 0 {
        free_sum / free as f64
    } else {
        (ub + lb) / 2.0
    };
    -rho
}

/// Binary machine `f(x) = Σ coef_i K(sv_i, x) + bias`, `coef_i = α_i y_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryMachine {
    pub support_indices: Vec<usize>,
    pub support_vectors: Vec<Vec<f64>>,
    pub alphas: Vec<f64>,
    pub coef: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub max_violation: f64,
    pub converged: bool,
}

impl BinaryMachine {
    pub fn decision(&self, gamma: f64, x: &[f64]) -> f64 {
        self.bias
            + self
                .support_vectors
                .iter()
                .zip(&self.coef)
                .map(|(sv, c)| c * rbf(gamma, sv, x))
                .sum::<f64>()
    }

    /// A machine whose training labels were all one sign.
    fn constant(sign: f64) -> Self {
        BinaryMachine {
            support_indices: Vec::new(),
            support_vectors: Vec::new(),
            alphas: Vec::new(),
            coef: Vec::new(),
            bias: sign,
            iterations: 0,
            max_violation: 0.0,
            converged: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub gamma: f64,
    pub cbox: f64,
    pub width: usize,
    /// Machine `k` separates class `k` (+1) from the rest (−1).
    pub machines: Vec<BinaryMachine>,
}

pub fn kernel_matrix(rows: &[Vec<f64>], gamma: f64) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut k = vec![vec![0.0; n]; n];
    for i in 0..n {
        k[i][i] = 1.0;
        for j in 0..i {
            let v = rbf(gamma, &rows[i], &rows[j]);
            k[i][j] = v;
            k[j][i] = v;
        }
    }
    k
}

/// Train one binary machine per class.
pub fn svm_train(
    rows: &[Vec<f64>],
    labels: &[usize],
    class_count: usize,
    params: &SvmParams,
) -> Result<SvmModel> {
    if !(params.cbox > 0.0) {
        return Err(Error::Config("box constraint must be positive".into()));
    }
    if let Some(g) = params.gamma {
        if !(g > 0.0) {
            return Err(Error::Config("gamma must be positive".into()));
        }
    }
    if rows.len() != labels.len() || rows.is_empty() {
        return Err(Error::contract("need a non-empty training set with one label per row"));
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::contract("ragged training rows"));
    }
    let first = labels[0];
    if labels.iter().all(|&l| l == first) {
        return Err(Error::DegenerateLabels(
            "training labels contain a single class".into(),
        ));
    }
    let gamma = params.gamma.unwrap_or_else(|| default_gamma(rows));
    let kernel = kernel_matrix(rows, gamma);
    let n = rows.len();
    let max_iter = params.max_passes.unwrap_or(10 * n).saturating_mul(n);

    let machines = (0..class_count)
        .map(|k| {
            let y: Vec<f64> = labels
                .iter()
                .map(|&l| if l == k { 1.0 } else { -1.0 })
                .collect();
            if y.iter().all(|&v| v < 0.0) {
                return BinaryMachine::constant(-1.0);
            }
            if y.iter().all(|&v| v > 0.0) {
                return BinaryMachine::constant(1.0);
            }
            let sol = smo_solve(&kernel, &y, params.cbox, params.tol, max_iter);
            let support_indices: Vec<usize> = (0..n).filter(|&i| sol.alpha[i] > 0.0).collect();
            BinaryMachine {
                support_vectors: support_indices.iter().map(|&i| rows[i].clone()).collect(),
                alphas: support_indices.iter().map(|&i| sol.alpha[i]).collect(),
                coef: support_indices.iter().map(|&i| sol.alpha[i] * y[i]).collect(),
                support_indices,
                bias: sol.bias,
                iterations: sol.iterations,
                max_violation: sol.max_violation,
                converged: sol.converged,
            }
        })
        .collect();
    Ok(SvmModel {
        gamma,
        cbox: params.cbox,
        width,
        machines,
    })
}

impl SvmModel {
    pub fn decision_values(&self, x: &[f64]) -> Vec<f64> {
        self.machines
            .iter()
            .map(|m| m.decision(self.gamma, x))
            .collect()
    }

    /// Argmax of the per-class decision values, ties to the lower class.
    pub fn predict(&self, rows: &[Vec<f64>]) -> Result<Vec<usize>> {
        rows.iter()
            .map(|r| {
                if r.len() != self.width {
                    return Err(Error::contract(format!(
                        "row has {} values, model expects {}",
                        r.len(),
                        self.width
                    )));
                }
                let d = self.decision_values(r);
                let mut best = 0;
                for k in 1..d.len() {
                    if d[k] > d[best] {
                        best = k;
                    }
                }
                Ok(best)
            })
            .collect()
    }

    pub fn max_violation(&self) -> f64 {
        self.machines
            .iter()
            .map(|m| m.max_violation)
            .fold(0.0, f64::max)
    }
}
