//! L2-regularized logistic regression:
//!
//! ```text
//! min  lambda/2 |w|^2 + 1/n * sum_i log(1 + exp(-y_i (w . x_i + b)))
//! ```
//!
//! The bias is not regularized. Minimized with L-BFGS (memory 10) and an
//! Armijo backtracking line search until the gradient's infinity norm is
//! below the tolerance. Parameters are packed as `[w_0 .. w_{d-1}, b]`.

use std::collections::VecDeque;

use crate::corpus::SparseExample;
use crate::error::{Error, Result};
use crate::scalar::{logistic, softplus, Scalar};

use super::{TrainConfig, TrainedModel, TrainerMeta};

const MEMORY: usize = 10;
const ARMIJO: f64 = 1e-4;

pub fn maxent_objective<T: Scalar>(params: &[T], examples: &[&SparseExample<T>], ys: &[T], lambda: T) -> T {
    let (w, b) = params.split_at(params.len() - 1);
    let n = T::of_usize(examples.len());
    let loss: T = examples
        .iter()
        .zip(ys)
        .map(|(x, &y)| softplus(-y * (x.dot(w) + b[0])))
        .sum();
    T::half() * lambda * w.iter().map(|&v| v * v).sum::<T>() + loss / n
}

/// Objective and analytic gradient, written into `grad`.
pub fn maxent_objective_and_gradient<T: Scalar>(
    params: &[T],
    examples: &[&SparseExample<T>],
    ys: &[T],
    lambda: T,
    grad: &mut [T],
) -> T {
    let d = params.len() - 1;
    let (w, b) = (&params[..d], params[d]);
    let n = T::of_usize(examples.len());
    for (g, &v) in grad[..d].iter_mut().zip(w) {
        *g = lambda * v;
    }
    grad[d] = T::zero();
    let mut loss = T::zero();
    for (x, &y) in examples.iter().zip(ys) {
        let margin = y * (x.dot(w) + b);
        loss += softplus(-margin);
        // d/ds log(1 + exp(-y s)) = -y * sigma(-y s)
        let coef = -y * logistic(-margin) / n;
        for &(j, v) in x.features() {
            grad[j as usize] += coef * v;
        }
        grad[d] += coef;
    }
    T::half() * lambda * w.iter().map(|&v| v * v).sum::<T>() + loss / n
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn inf_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

pub(super) fn train<T: Scalar>(
    examples: &[&SparseExample<T>],
    ys: &[T],
    dimension: usize,
    config: &TrainConfig<T>,
) -> Result<TrainedModel<T>> {
    let len = dimension + 1;
    let lambda = config.lambda;
    let mut x = vec![T::zero(); len];
    let mut grad = vec![T::zero(); len];
    let mut f = maxent_objective_and_gradient(&x, examples, ys, lambda, &mut grad);

    let mut history: VecDeque<(Vec<T>, Vec<T>, T)> = VecDeque::with_capacity(MEMORY);
    let mut direction = vec![T::zero(); len];
    let mut trial = vec![T::zero(); len];
    let mut trial_grad = vec![T::zero(); len];
    let mut gnorm = inf_norm(&grad);
    let mut iterations = config.max_iterations;

    for iter in 0..config.max_iterations {
        if gnorm <= config.tolerance {
            return Ok(finish(x, config, gnorm, iter, f));
        }

        // Two-loop recursion: direction = -H grad.
        direction.copy_from_slice(&grad);
        let mut coefs = Vec::with_capacity(history.len());
        for (s, y, rho) in history.iter().rev() {
            let a = *rho * dot(s, &direction);
            for (q, &yi) in direction.iter_mut().zip(y) {
                *q -= a * yi;
            }
            coefs.push(a);
        }
        let gamma = match history.back() {
            Some((s, y, _)) => dot(s, y) / dot(y, y),
            None => T::one() / inf_norm(&grad).max(T::one()),
        };
        for q in direction.iter_mut() {
            *q *= gamma;
        }
        for ((s, y, rho), a) in history.iter().zip(coefs.into_iter().rev()) {
            let beta = *rho * dot(y, &direction);
            for (q, &si) in direction.iter_mut().zip(s) {
                *q += (a - beta) * si;
            }
        }
        for q in direction.iter_mut() {
            *q = -*q;
        }
        let mut slope = dot(&grad, &direction);
        if !(slope < T::zero()) {
            // Not a descent direction; fall back to steepest descent.
            history.clear();
            for (q, &g) in direction.iter_mut().zip(&grad) {
                *q = -g;
            }
            slope = -dot(&grad, &grad);
        }

        let mut step = T::one();
        let mut accepted = false;
        for _ in 0..60 {
            for ((t, &xi), &di) in trial.iter_mut().zip(&x).zip(&direction) {
                *t = xi + step * di;
            }
            let ft = maxent_objective_and_gradient(&trial, examples, ys, lambda, &mut trial_grad);
            if ft <= f + T::of(ARMIJO) * step * slope {
                let s: Vec<T> = trial.iter().zip(&x).map(|(&a, &b)| a - b).collect();
                let y: Vec<T> = trial_grad.iter().zip(&grad).map(|(&a, &b)| a - b).collect();
                let sy = dot(&s, &y);
                if sy > T::epsilon() * dot(&y, &y) {
                    if history.len() == MEMORY {
                        history.pop_front();
                    }
                    history.push_back((s, y, T::one() / sy));
                }
                std::mem::swap(&mut x, &mut trial);
                std::mem::swap(&mut grad, &mut trial_grad);
                f = ft;
                accepted = true;
                break;
            }
            step *= T::half();
        }
        gnorm = inf_norm(&grad);
        if !accepted {
            // Line search stalled at the floating-point floor.
            if gnorm <= config.tolerance {
                return Ok(finish(x, config, gnorm, iter + 1, f));
            }
            iterations = iter + 1;
            break;
        }
    }
    if gnorm <= config.tolerance {
        return Ok(finish(x, config, gnorm, config.max_iterations, f));
    }
    Err(Error::NotConverged {
        solver: "maxent L-BFGS",
        iterations,
        achieved: gnorm.as_f64(),
        tolerance: config.tolerance.as_f64(),
        objective: f.as_f64(),
    })
}

fn finish<T: Scalar>(mut params: Vec<T>, config: &TrainConfig<T>, gnorm: T, iterations: usize, f: T) -> TrainedModel<T> {
    let bias = params.pop().expect("bias slot");
    TrainedModel {
        weights: params,
        bias,
        kind: config.kind,
        meta: TrainerMeta {
            achieved: gnorm,
            iterations,
            objective: f,
            constant: false,
            dual: Vec::new(),
        },
    }
}
