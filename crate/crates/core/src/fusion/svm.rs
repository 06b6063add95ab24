//! Soft-margin SVM trained on the dual with sequential minimal optimization.
//!
//! Working pairs are chosen with second-order information (maximal violating
//! `i`, then the `j` giving the largest guaranteed decrease of the dual
//! objective). Training stops when the maximal KKT violation gap falls below
//! `tol`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ScoreVector = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusionSample {
    pub m: ScoreVector,
    /// +1 genuine comparison, -1 impostor or forgery comparison.
    pub label: i8,
}

impl FusionSample {
    pub fn new(m: ScoreVector, label: i8) -> Self {
        Self { m, label }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    Linear,
}

impl Kernel {
    #[inline]
    pub fn eval(&self, a: &ScoreVector, b: &ScoreVector) -> f64 {
        match self {
            Kernel::Linear => a[0] * b[0] + a[1] * b[1] + a[2] * b[2],
        }
    }
}

/// Linear-kernel dot product.
pub fn kernel(a: &ScoreVector, b: &ScoreVector) -> f64 {
    Kernel::Linear.eval(a, b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvmParams {
    pub c: f64,
    pub tol: f64,
    /// Iteration budget in passes; one pass is as many pair updates as there are samples.
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            c: 10.0,
            tol: 1e-3,
            max_iters: 10_000,
            seed: 42,
        }
    }
}

impl SvmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::BadParameter(format!("C must be positive, got {}", self.c)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::BadParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::BadParameter("max_iters must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub seed: u64,
    pub n_samples: usize,
    pub n_positive: usize,
    pub n_negative: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Set once dependent support vectors have been folded away; the dual
    /// constraints no longer hold for a pruned model.
    pub pruned: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub support_vectors: Vec<ScoreVector>,
    pub labels: Vec<i8>,
    pub alphas: Vec<f64>,
    pub bias: f64,
    pub kernel: Kernel,
    pub c: f64,
    pub tol: f64,
    pub meta: TrainingMeta,
}

impl SvmModel {
    /// Fused score `sum_i alpha_i y_i K(m, m_i) + b`.
    pub fn decision_value(&self, m: &ScoreVector) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.labels)
            .zip(&self.alphas)
            .map(|((sv, &y), &a)| a * y as f64 * self.kernel.eval(m, sv))
            .sum::<f64>()
            + self.bias
    }

    /// Sign of the decision value; zero maps to +1.
    pub fn decide(&self, m: &ScoreVector) -> i8 {
        if self.decision_value(m) >= 0.0 {
            1
        } else {
            -1
        }
    }

    /// Primal weight vector `sum_i alpha_i y_i m_i` (linear kernel).
    pub fn weight_vector(&self) -> ScoreVector {
        let mut w = [0.0; 3];
        for ((sv, &y), &a) in self.support_vectors.iter().zip(&self.labels).zip(&self.alphas) {
            for d in 0..3 {
                w[d] += a * y as f64 * sv[d];
            }
        }
        w
    }

    pub fn n_support(&self) -> usize {
        self.support_vectors.len()
    }
}

/// Result of training: the model plus the dual variable of every sample in input order.
#[derive(Debug, Clone)]
pub struct Trained {
    pub model: SvmModel,
    pub duals: Vec<f64>,
}

pub fn train(samples: &[FusionSample], params: &SvmParams) -> Result<SvmModel> {
    train_with_duals(samples, params).map(|t| t.model)
}

pub fn train_with_duals(samples: &[FusionSample], params: &SvmParams) -> Result<Trained> {
    params.validate()?;
    for s in samples {
        if s.label != 1 && s.label != -1 {
            return Err(Error::BadParameter(format!("label must be +1 or -1, got {}", s.label)));
        }
        if s.m.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadParameter("non-finite score vector".into()));
        }
    }
    let n_pos = samples.iter().filter(|s| s.label == 1).count();
    let n_neg = samples.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::DegenerateTrainingSet);
    }

    // seeded visiting order breaks working-set ties
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(params.seed));
    let x: Vec<ScoreVector> = order.iter().map(|&i| samples[i].m).collect();
    let y: Vec<f64> = order.iter().map(|&i| samples[i].label as f64).collect();

    let kernel = Kernel::Linear;
    let solution = solve_dual(&x, &y, kernel, params);

    let mut duals = vec![0.0; samples.len()];
    for (pos, &orig) in order.iter().enumerate() {
        duals[orig] = solution.alpha[pos];
    }

    let mut model = SvmModel {
        support_vectors: Vec::new(),
        labels: Vec::new(),
        alphas: Vec::new(),
        bias: solution.bias,
        kernel,
        c: params.c,
        tol: params.tol,
        meta: TrainingMeta {
            seed: params.seed,
            n_samples: samples.len(),
            n_positive: n_pos,
            n_negative: n_neg,
            iterations: solution.iterations,
            converged: solution.converged,
            pruned: false,
        },
    };
    for (s, &a) in samples.iter().zip(&duals) {
        if a > 0.0 {
            model.support_vectors.push(s.m);
            model.labels.push(s.label);
            model.alphas.push(a);
        }
    }
    if !solution.converged {
        log::warn!(
            "SMO stopped after {} iterations without reaching tol {}",
            solution.iterations,
            params.tol
        );
    }
    Ok(Trained { model, duals })
}

struct DualSolution {
    alpha: Vec<f64>,
    bias: f64,
    iterations: usize,
    converged: bool,
}

const TAU: f64 = 1e-12;

fn solve_dual(x: &[ScoreVector], y: &[f64], kernel: Kernel, params: &SvmParams) -> DualSolution {
    let n = x.len();
    let c = params.c;
    let diag: Vec<f64> = x.iter().map(|a| kernel.eval(a, a)).collect();
    let q = |i: usize, j: usize| y[i] * y[j] * kernel.eval(&x[i], &x[j]);

    let mut alpha = vec![0.0; n];
    // gradient of 1/2 a'Qa - e'a
    let mut grad = vec![-1.0; n];
    let max_updates = params.max_iters.saturating_mul(n.max(1));

    let in_up = |a: f64, yi: f64| (yi > 0.0 && a < c) || (yi < 0.0 && a > 0.0);
    let in_low = |a: f64, yi: f64| (yi > 0.0 && a > 0.0) || (yi < 0.0 && a < c);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_updates {
        // i: maximal -y G over I_up
        let mut g_max = f64::NEG_INFINITY;
        let mut i_sel = usize::MAX;
        for t in 0..n {
            if in_up(alpha[t], y[t]) {
                let v = -y[t] * grad[t];
                if v > g_max {
                    g_max = v;
                    i_sel = t;
                }
            }
        }
        let mut g_min = f64::INFINITY;
        let mut j_sel = usize::MAX;
        let mut best_obj = f64::INFINITY;
        if i_sel != usize::MAX {
            let i = i_sel;
            for t in 0..n {
                if !in_low(alpha[t], y[t]) {
                    continue;
                }
                let v = -y[t] * grad[t];
                g_min = g_min.min(v);
                let b = g_max - v;
                if b > 0.0 {
                    let k_it = kernel.eval(&x[i], &x[t]);
                    let a = (diag[i] + diag[t] - 2.0 * k_it).max(TAU);
                    let obj = -(b * b) / a;
                    if obj <= best_obj {
                        best_obj = obj;
                        j_sel = t;
                    }
                }
            }
        }
        if g_max - g_min < params.tol || j_sel == usize::MAX {
            converged = true;
            break;
        }
        let (i, j) = (i_sel, j_sel);
        iterations += 1;

        let (old_ai, old_aj) = (alpha[i], alpha[j]);
        // K_ii + K_jj - 2 K_ij in both branches
        if y[i] != y[j] {
            let quad = (diag[i] + diag[j] + 2.0 * q(i, j)).max(TAU);
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
            let quad = (diag[i] + diag[j] - 2.0 * q(i, j)).max(TAU);
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

        let (dai, daj) = (alpha[i] - old_ai, alpha[j] - old_aj);
        for t in 0..n {
            grad[t] += q(t, i) * dai + q(t, j) * daj;
        }
    }

    DualSolution {
        bias: bias_from(&alpha, &grad, y, c),
        alpha,
        iterations,
        converged,
    }
}

/// `b = -rho`, with rho the mean of `y_i G_i` over free vectors, or the
/// midpoint of the bound-implied interval when every alpha sits at a bound.
fn bias_from(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum_free, mut n_free) = (0.0, 0usize);
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
            n_free += 1;
            sum_free += yg;
        }
    }
    let rho = if n_free > 0 {
        sum_free / n_free as f64
    } else {
        (ub + lb) / 2.0
    };
    -rho
}

/// Worst KKT residual of a trained model against its training samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktAudit {
    pub max_violation: f64,
    /// `|sum_i alpha_i y_i|`.
    pub equality_residual: f64,
    pub bounds_ok: bool,
}

impl KktAudit {
    pub fn passes(&self, tol: f64) -> bool {
        self.bounds_ok && self.max_violation <= tol && self.equality_residual <= tol
    }
}

pub fn kkt_audit(model: &SvmModel, samples: &[FusionSample], duals: &[f64]) -> KktAudit {
    let c = model.c;
    let mut max_violation: f64 = 0.0;
    let mut eq = 0.0;
    let mut bounds_ok = true;
    for (s, &a) in samples.iter().zip(duals) {
        let y = s.label as f64;
        let yf = y * model.decision_value(&s.m);
        eq += a * y;
        bounds_ok &= (0.0..=c).contains(&a);
        let v = if a <= 0.0 {
            (1.0 - yf).max(0.0)
        } else if a >= c {
            (yf - 1.0).max(0.0)
        } else {
            (yf - 1.0).abs()
        };
        max_violation = max_violation.max(v);
    }
    KktAudit {
        max_violation,
        equality_residual: f64::abs(eq),
        bounds_ok,
    }
}
