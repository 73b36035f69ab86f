#![allow(dead_code)]

use msplit_core::tensor::DenseTensor;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `A = η·I − B` with `B` uniform on `[0.01, 1)` and `η` a little above the
/// largest slice sum of `B`, which bounds `ρ(B)`; so `A` is a strong M-tensor.
pub fn random_strong_m(order: usize, dim: usize, seed: u64) -> DenseTensor {
    let mut rng = StdRng::seed_from_u64(seed);
    let b = DenseTensor::from_fn(order, dim, |_| rng.gen_range(0.01..1.0)).unwrap();
    let max_sum = (0..dim)
        .map(|i| b.slice(i).iter().sum::<f64>())
        .fold(0.0, f64::max);
    let eta = max_sum * (1.0 + rng.gen_range(0.02..0.5));
    DenseTensor::from_fn(order, dim, |idx| {
        let diag = if idx.iter().all(|&j| j == idx[0]) {
            eta
        } else {
            0.0
        };
        diag - b.get(idx)
    })
    .unwrap()
}

pub fn random_tensor(order: usize, dim: usize, seed: u64) -> DenseTensor {
    let mut rng = StdRng::seed_from_u64(seed);
    DenseTensor::from_fn(order, dim, |_| rng.gen_range(-1.0..1.0)).unwrap()
}

pub fn random_vec(len: usize, lo: f64, hi: f64, seed: u64) -> Vec<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(lo..hi)).collect()
}

/// `Σ a_{i i2..im} x_{i2}..x_{im}` by explicit multi-index enumeration.
pub fn contract_oracle(a: &DenseTensor, x: &[f64]) -> Vec<f64> {
    let (m, n) = (a.order(), a.dim());
    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let mut idx = vec![0usize; m];
        idx[0] = i;
        loop {
            let w: f64 = idx[1..].iter().map(|&j| x[j]).product();
            *o += a.get(&idx) * w;
            let mut p = m - 1;
            loop {
                idx[p] += 1;
                if idx[p] < n {
                    break;
                }
                idx[p] = 0;
                p -= 1;
                if p == 0 {
                    break;
                }
            }
            if p == 0 {
                break;
            }
        }
    }
    out
}
