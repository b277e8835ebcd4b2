//! Direct, unoptimized evaluations of each statistic, written independently
//! of the library so the two can be compared.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sorted_desc(s: &[f64]) -> Vec<f64> {
    let mut v = s.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

pub fn entropy_bits(s: &[f64]) -> f64 {
    let mut total = 0.0;
    for x in s {
        total += x;
    }
    let mut h = 0.0;
    for x in s {
        let p = x / total;
        if p != 0.0 {
            h -= p * p.ln();
        }
    }
    h / std::f64::consts::LN_2
}

/// Mean absolute difference over all ordered pairs, divided by twice the mean.
pub fn gini_pairwise(s: &[f64]) -> f64 {
    let k = s.len() as f64;
    let total: f64 = s.iter().sum();
    let mut acc = 0.0;
    for a in s {
        for b in s {
            acc += (a - b).abs();
        }
    }
    acc / (2.0 * k * total)
}

/// Walks the normalized probabilities in descending order, accumulating them.
pub fn cumulative_k(s: &[f64], p: f64) -> usize {
    let v = sorted_desc(s);
    let total: f64 = v.iter().sum();
    for k in 1..=v.len() {
        let c: f64 = v[..k].iter().sum::<f64>() / total;
        if c >= p {
            return k;
        }
    }
    v.len()
}

pub fn area(s: &[f64]) -> f64 {
    let hi = s.iter().cloned().fold(f64::MIN, f64::max);
    let lo = s.iter().cloned().fold(f64::MAX, f64::min);
    if hi == lo {
        return s.len() as f64;
    }
    s.iter().map(|x| (x - lo) / (hi - lo)).sum()
}

/// Closed-form least squares on base-10 logs; returns the exponent (−slope).
pub fn powerlaw_alpha(s: &[f64]) -> f64 {
    let v = sorted_desc(s);
    let n = v.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (i, y) in v.iter().enumerate() {
        let x = ((i + 1) as f64).log10();
        let y = y.log10();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    -((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

/// 1,000 seeded score vectors with K in 2..=200: uniform noise, jittered
/// power laws and near-flat vectors, all strictly positive and unsorted.
pub fn random_vectors(seed: u64, count: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|c| {
            let k = rng.random_range(2..=200usize);
            let mut v: Vec<f64> = match c % 3 {
                0 => (0..k).map(|_| rng.random_range(1e-3..1.0)).collect(),
                1 => {
                    let a = rng.random_range(0.2..3.0);
                    (1..=k).map(|i| (i as f64).powf(-a) * rng.random_range(0.8..1.25)).collect()
                }
                _ => (0..k).map(|_| rng.random_range(0.9..1.0)).collect(),
            };
            for i in (1..v.len()).rev() {
                let j = rng.random_range(0..=i);
                v.swap(i, j);
            }
            v
        })
        .collect()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if got == want {
        return 0.0;
    }
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}
