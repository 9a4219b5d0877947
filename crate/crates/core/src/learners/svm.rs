//! L1-loss linear SVM, bias folded in as a constant feature of value 1:
//!
//! ```text
//! min  1/2 (|w|^2 + b^2) + C * sum_i max(0, 1 - y_i (w . x_i + b))
//! ```
//!
//! solved in the dual (`0 <= alpha_i <= C`) by cyclic coordinate descent in a
//! seeded random order, with an occasional conjugate-gradient step on the
//! free variables. Iteration stops once the duality gap falls below
//! `tolerance * max(1, primal)`.
//!
//! A previous dual solution can seed `alpha`; it is clipped to the box and
//! `w` is rebuilt from it.

use rand::seq::SliceRandom;

use crate::corpus::SparseExample;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seeds;

use super::{TrainConfig, TrainedModel, TrainerMeta};

/// Primal objective of `(weights, bias)` on labeled examples.
pub fn svm_primal_objective<T: Scalar>(weights: &[T], bias: T, examples: &[&SparseExample<T>], ys: &[T], cost: T) -> T {
    let reg = weights.iter().map(|&w| w * w).sum::<T>() + bias * bias;
    let hinge: T = examples
        .iter()
        .zip(ys)
        .map(|(x, &y)| (T::one() - y * (x.dot(weights) + bias)).max(T::zero()))
        .sum();
    T::half() * reg + cost * hinge
}

/// Dual objective `sum alpha - 1/2 |sum alpha_i y_i (x_i, 1)|^2`.
pub fn svm_dual_objective<T: Scalar>(alpha: &[T], examples: &[&SparseExample<T>], ys: &[T], dimension: usize) -> T {
    let mut w = vec![T::zero(); dimension];
    let mut b = T::zero();
    for ((x, &y), &a) in examples.iter().zip(ys).zip(alpha) {
        for &(i, v) in x.features() {
            w[i as usize] += a * y * v;
        }
        b += a * y;
    }
    let norm = w.iter().map(|&v| v * v).sum::<T>() + b * b;
    alpha.iter().copied().sum::<T>() - T::half() * norm
}

/// Epochs between second-order steps on the free variables.
const SUBSPACE_EVERY: usize = 20;

/// Conjugate-gradient iterations per second-order step.
const SUBSPACE_CG: usize = 50;

/// One ascent step on the dual restricted to the free variables
/// (`0 < alpha_i < C`), along an approximate Newton direction from
/// conjugate gradients, clipped to the box. Coordinate descent alone crawls
/// along nearly flat directions when the free examples are close to
/// linearly dependent.
fn subspace_step<T: Scalar>(
    examples: &[&SparseExample<T>],
    ys: &[T],
    cost: T,
    alpha: &mut [T],
    w: &mut [T],
    b: &mut T,
) {
    let free: Vec<usize> = (0..alpha.len())
        .filter(|&i| alpha[i] > T::zero() && alpha[i] < cost)
        .collect();
    if free.is_empty() {
        return;
    }
    // Q_FF v computed as Z_F (Z_F^T v), with z_i = y_i (x_i, 1).
    let dim = w.len();
    let apply = |v: &[T]| -> Vec<T> {
        let mut u = vec![T::zero(); dim];
        let mut ub = T::zero();
        for (&i, &vi) in free.iter().zip(v) {
            let c = vi * ys[i];
            for &(j, x) in examples[i].features() {
                u[j as usize] += c * x;
            }
            ub += c;
        }
        free.iter()
            .map(|&i| ys[i] * (examples[i].dot(&u) + ub))
            .collect()
    };
    let dot = |a: &[T], c: &[T]| a.iter().zip(c).map(|(&x, &y)| x * y).sum::<T>();

    let grad: Vec<T> = free
        .iter()
        .map(|&i| T::one() - ys[i] * (examples[i].dot(w) + *b))
        .collect();
    let g_norm = dot(&grad, &grad);
    if g_norm <= T::epsilon() {
        return;
    }
    let mut x = vec![T::zero(); free.len()];
    let mut r = grad.clone();
    let mut p = r.clone();
    let mut rr = g_norm;
    let mut direction = None;
    for _ in 0..SUBSPACE_CG.min(free.len()) {
        let qp = apply(&p);
        let curvature = dot(&p, &qp);
        if curvature <= T::epsilon().sqrt() * dot(&p, &p) {
            // Flat direction: the dual rises linearly along `p`.
            direction = Some(p.clone());
            break;
        }
        let step = rr / curvature;
        for k in 0..x.len() {
            x[k] += step * p[k];
            r[k] -= step * qp[k];
        }
        let rr_next = dot(&r, &r);
        if rr_next <= g_norm * T::epsilon() {
            break;
        }
        for k in 0..p.len() {
            p[k] = r[k] + rr_next / rr * p[k];
        }
        rr = rr_next;
    }
    let d = direction.unwrap_or(x);

    let slope = dot(&grad, &d);
    if slope <= T::zero() {
        return;
    }
    let mut t_max = T::infinity();
    for (&i, &di) in free.iter().zip(&d) {
        if di > T::zero() {
            t_max = t_max.min((cost - alpha[i]) / di);
        } else if di < T::zero() {
            t_max = t_max.min(-alpha[i] / di);
        }
    }
    let curvature = dot(&d, &apply(&d));
    let t_opt = if curvature > T::zero() { slope / curvature } else { T::infinity() };
    let t = t_opt.min(t_max);
    if !t.is_finite() || t <= T::zero() {
        return;
    }
    for (&i, &di) in free.iter().zip(&d) {
        let next = (alpha[i] + t * di).max(T::zero()).min(cost);
        let delta = (next - alpha[i]) * ys[i];
        if delta != T::zero() {
            for &(j, x) in examples[i].features() {
                w[j as usize] += delta * x;
            }
            *b += delta;
        }
        alpha[i] = next;
    }
}

pub(super) fn train<T: Scalar>(
    examples: &[&SparseExample<T>],
    ys: &[T],
    dimension: usize,
    config: &TrainConfig<T>,
    initial: Option<&[T]>,
) -> Result<TrainedModel<T>> {
    let n = examples.len();
    let cost = config.cost;
    let diag: Vec<T> = examples.iter().map(|x| x.squared_norm() + T::one()).collect();
    let mut alpha = match initial {
        Some(init) if init.len() == n => init.iter().map(|&a| a.max(T::zero()).min(cost)).collect(),
        _ => vec![T::zero(); n],
    };
    let mut w = vec![T::zero(); dimension];
    let mut b = T::zero();
    for ((x, &y), &a) in examples.iter().zip(ys).zip(&alpha) {
        if a != T::zero() {
            for &(j, v) in x.features() {
                w[j as usize] += a * y * v;
            }
            b += a * y;
        }
    }
    let mut index: Vec<usize> = (0..n).collect();
    let mut rng = seeds::rng(config.seed);

    // Coordinates stuck at a bound whose gradient points outward are
    // shrunk out of the active set (as in LIBLINEAR). When the active set
    // looks optimal to within `pg_tol`, the full problem is restored and the
    // duality gap decides; a failed check tightens `pg_tol`.
    let mut pg_tol = T::of(0.1);
    let mut active = n;
    let mut pg_max_old = T::infinity();
    let mut pg_min_old = T::neg_infinity();

    let mut gap = T::infinity();
    let mut primal = T::infinity();
    for epoch in 1..=config.max_iterations {
        index[..active].shuffle(&mut rng);
        let mut pg_max = T::neg_infinity();
        let mut pg_min = T::infinity();
        let mut s = 0;
        while s < active {
            let i = index[s];
            let x = examples[i];
            let y = ys[i];
            let g = y * (x.dot(&w) + b) - T::one();
            let a = alpha[i];
            let projected;
            if a <= T::zero() {
                if g > pg_max_old {
                    active -= 1;
                    index.swap(s, active);
                    continue;
                }
                projected = g.min(T::zero());
            } else if a >= cost {
                if g < pg_min_old {
                    active -= 1;
                    index.swap(s, active);
                    continue;
                }
                projected = g.max(T::zero());
            } else {
                projected = g;
            }
            pg_max = pg_max.max(projected);
            pg_min = pg_min.min(projected);
            if projected != T::zero() {
                let next = (a - g / diag[i]).max(T::zero()).min(cost);
                let step = (next - a) * y;
                if step != T::zero() {
                    for &(j, v) in x.features() {
                        w[j as usize] += step * v;
                    }
                    b += step;
                }
                alpha[i] = next;
            }
            s += 1;
        }

        let settled = pg_max - pg_min <= pg_tol;
        if settled && active < n {
            active = n;
            pg_max_old = T::infinity();
            pg_min_old = T::neg_infinity();
            continue;
        }
        let periodic = epoch % SUBSPACE_EVERY == 0;
        if !settled {
            pg_max_old = if pg_max > T::zero() { pg_max } else { T::infinity() };
            pg_min_old = if pg_min < T::zero() { pg_min } else { T::neg_infinity() };
            if !periodic {
                continue;
            }
        }
        if periodic {
            subspace_step(examples, ys, cost, &mut alpha, &mut w, &mut b);
        }

        let norm = w.iter().map(|&v| v * v).sum::<T>() + b * b;
        let hinge: T = examples
            .iter()
            .zip(ys)
            .map(|(x, &y)| (T::one() - y * (x.dot(&w) + b)).max(T::zero()))
            .sum();
        primal = T::half() * norm + cost * hinge;
        let dual = alpha.iter().copied().sum::<T>() - T::half() * norm;
        gap = primal - dual;
        if gap <= config.tolerance * primal.abs().max(T::one()) {
            return Ok(TrainedModel {
                weights: w,
                bias: b,
                kind: config.kind,
                meta: TrainerMeta {
                    achieved: gap,
                    iterations: epoch,
                    objective: primal,
                    constant: false,
                    dual: alpha,
                },
            });
        }
        if settled {
            pg_tol = (pg_tol * T::of(0.1)).max(T::epsilon());
            pg_max_old = T::infinity();
            pg_min_old = T::neg_infinity();
        }
    }
    Err(Error::NotConverged {
        solver: "svm dual coordinate descent",
        iterations: config.max_iterations,
        achieved: gap.as_f64(),
        tolerance: config.tolerance.as_f64(),
        objective: primal.as_f64(),
    })
}
