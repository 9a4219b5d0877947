//! Independent reference computations used by the test suites. Nothing here
//! calls into the library's numerical code.
#![allow(dead_code)]

use alstop::{Label, SparseExample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Kappa from a 2x2 contingency table, counted pair by pair.
pub fn kappa_brute_force(a: &[Label], b: &[Label]) -> f64 {
    let mut table = [[0usize; 2]; 2];
    for (x, y) in a.iter().zip(b) {
        table[(*x == Label::Pos) as usize][(*y == Label::Pos) as usize] += 1;
    }
    let n = a.len() as f64;
    let observed = (table[0][0] + table[1][1]) as f64 / n;
    let mut expected = 0.0;
    for class in 0..2 {
        let row = (table[class][0] + table[class][1]) as f64 / n;
        let col = (table[0][class] + table[1][class]) as f64 / n;
        expected += row * col;
    }
    if (1.0 - expected).abs() < 1e-15 {
        return if observed == 1.0 { 1.0 } else { 0.0 };
    }
    (observed - expected) / (1.0 - expected)
}

pub fn random_labels(rng: &mut ChaCha8Rng, len: usize) -> Vec<Label> {
    let p: f64 = rng.random();
    (0..len)
        .map(|_| if rng.random::<f64>() < p { Label::Pos } else { Label::Neg })
        .collect()
}

/// Small dense-ish dataset with both classes present.
pub fn random_dataset(seed: u64, max_points: usize, max_features: usize) -> Vec<SparseExample<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_points);
    let d = rng.random_range(1..=max_features);
    let mut data: Vec<SparseExample<f64>> = (0..n)
        .map(|id| {
            let mut feats = Vec::new();
            for j in 0..d {
                if rng.random::<f64>() < 0.7 {
                    feats.push((j as u32, rng.random_range(-2.0..2.0)));
                }
            }
            let label = if rng.random::<bool>() { Label::Pos } else { Label::Neg };
            SparseExample::new(id, feats, Some(label)).unwrap()
        })
        .collect();
    data[0].label = Some(Label::Pos);
    data[1].label = Some(Label::Neg);
    data
}

pub fn dense(x: &SparseExample<f64>, d: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    for &(j, val) in x.features() {
        v[j as usize] = val;
    }
    v
}

fn sign(l: Label) -> f64 {
    if l == Label::Pos {
        1.0
    } else {
        -1.0
    }
}

/// Primal `1/2 (|w|^2 + b^2) + C sum hinge` in dense arithmetic.
pub fn svm_primal(data: &[SparseExample<f64>], w: &[f64], b: f64, cost: f64) -> f64 {
    let d = w.len();
    let hinge: f64 = data
        .iter()
        .map(|x| {
            let s: f64 = dense(x, d).iter().zip(w).map(|(a, c)| a * c).sum::<f64>() + b;
            (1.0 - sign(x.label.unwrap()) * s).max(0.0)
        })
        .sum();
    0.5 * (w.iter().map(|v| v * v).sum::<f64>() + b * b) + cost * hinge
}

/// Solves the box-constrained SVM dual with accelerated projected gradient
/// on the explicit Gram matrix. Returns `(lower, upper)` bounds on the
/// optimal primal objective: the dual value and the primal value at the
/// recovered weights.
pub fn svm_reference(data: &[SparseExample<f64>], cost: f64) -> (f64, f64) {
    let n = data.len();
    let d = data.iter().map(|x| x.features().last().map_or(0, |f| f.0 as usize + 1)).max().unwrap_or(0);
    let z: Vec<Vec<f64>> = data
        .iter()
        .map(|x| {
            let mut v = dense(x, d);
            v.push(1.0);
            let y = sign(x.label.unwrap());
            v.iter_mut().for_each(|e| *e *= y);
            v
        })
        .collect();
    let q: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| z[i].iter().zip(&z[j]).map(|(a, b)| a * b).sum()).collect())
        .collect();
    let lipschitz: f64 = (0..n).map(|i| q[i][i]).sum::<f64>().max(1e-12);
    let step = 1.0 / lipschitz;
    let project = |v: f64| v.clamp(0.0, cost);
    let dual = |a: &[f64]| -> f64 {
        let quad: f64 = (0..n).map(|i| a[i] * (0..n).map(|j| q[i][j] * a[j]).sum::<f64>()).sum();
        a.iter().sum::<f64>() - 0.5 * quad
    };
    let recover = |a: &[f64]| -> (Vec<f64>, f64) {
        let mut u = vec![0.0; d + 1];
        for i in 0..n {
            for k in 0..=d {
                u[k] += a[i] * z[i][k];
            }
        }
        let b = u.pop().unwrap();
        (u, b)
    };

    let mut alpha = vec![0.0; n];
    let mut momentum = alpha.clone();
    let mut t = 1.0f64;
    let mut best = (f64::NEG_INFINITY, f64::INFINITY);
    for iter in 0..200_000 {
        let grad: Vec<f64> = (0..n)
            .map(|i| 1.0 - (0..n).map(|j| q[i][j] * momentum[j]).sum::<f64>())
            .collect();
        let next: Vec<f64> = (0..n).map(|i| project(momentum[i] + step * grad[i])).collect();
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        // Gradient-based restart of the momentum.
        let overshoot: f64 = (0..n).map(|i| (momentum[i] - next[i]) * (next[i] - alpha[i])).sum();
        if overshoot > 0.0 {
            momentum = alpha.clone();
            t = 1.0;
            continue;
        }
        momentum = (0..n).map(|i| next[i] + (t - 1.0) / t_next * (next[i] - alpha[i])).collect();
        alpha = next;
        t = t_next;
        if iter % 50 == 0 {
            let (w, b) = recover(&alpha);
            best = (best.0.max(dual(&alpha)), best.1.min(svm_primal(data, &w, b, cost)));
            if best.1 - best.0 < 1e-9 * best.1.max(1.0) {
                break;
            }
        }
    }
    let (w, b) = recover(&alpha);
    (best.0.max(dual(&alpha)), best.1.min(svm_primal(data, &w, b, cost)))
}

/// Mean log loss plus `lambda/2 |w|^2`, bias last in `params`.
pub fn maxent_reference(data: &[SparseExample<f64>], params: &[f64], lambda: f64) -> f64 {
    let d = params.len() - 1;
    let loss: f64 = data
        .iter()
        .map(|x| {
            let s: f64 = dense(x, d).iter().zip(params).map(|(a, c)| a * c).sum::<f64>() + params[d];
            (1.0 + (-sign(x.label.unwrap()) * s).exp()).ln()
        })
        .sum();
    let reg: f64 = params[..d].iter().map(|v| v * v).sum();
    0.5 * lambda * reg + loss / data.len() as f64
}

/// Central finite-difference gradient of `f` at `x`.
pub fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|k| {
            let orig = probe[k];
            probe[k] = orig + h;
            let up = f(&probe);
            probe[k] = orig - h;
            let down = f(&probe);
            probe[k] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}
