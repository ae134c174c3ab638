//! Shared helpers for the property and acceptance suites: Kolmogorov-Smirnov
//! statistics and a Gram-Schmidt random-basis generator, kept independent of
//! the crate's selection machinery.
#![allow(dead_code)] // each test target uses a different subset

use hqs_core::sampling::{domain, sample_haar, RandomStream};
use hqs_core::{ProjectiveMeasurement, StateVector};
use num_complex::Complex64;

/// One-sample KS statistic of `samples` against the CDF `cdf`.
pub fn ks_one_sample(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut stat = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        stat = stat.max((f - lo).abs()).max((hi - f).abs());
    }
    stat
}

/// Two-sample KS statistic.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j) = (0usize, 0usize);
    let mut stat = 0.0f64;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        let fa = i as f64 / a.len() as f64;
        let fb = j as f64 / b.len() as f64;
        stat = stat.max((fa - fb).abs());
    }
    stat
}

/// Asymptotic one-sample KS critical value at the 1% level.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Asymptotic two-sample KS critical value at the 1% level.
pub fn ks_two_sample_critical_1pct(n: usize, m: usize) -> f64 {
    1.628 * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// A random orthonormal basis built by Gram-Schmidt on Haar draws.
pub fn random_basis(dim: usize, seed: u64) -> ProjectiveMeasurement {
    let mut index = 0u64;
    'retry: loop {
        let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        for _ in 0..dim {
            let mut stream = RandomStream::derive(seed, domain::SCAN ^ 0xb1a5, index);
            index += 1;
            let raw = sample_haar(dim, &mut stream).unwrap();
            let mut v: Vec<Complex64> = raw.amplitudes().to_vec();
            for prev in &vectors {
                let overlap: Complex64 = prev.iter().zip(&v).map(|(p, x)| p.conj() * x).sum();
                for (x, p) in v.iter_mut().zip(prev) {
                    *x -= overlap * p;
                }
            }
            let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                continue 'retry;
            }
            for x in v.iter_mut() {
                *x /= norm;
            }
            vectors.push(v);
        }
        let basis = vectors
            .into_iter()
            .map(|v| StateVector::new(v).unwrap())
            .collect();
        let labels = (0..dim).map(|i| format!("b{i}")).collect();
        return ProjectiveMeasurement::new(basis, labels).unwrap();
    }
}

/// Haar draw addressed independently of any hidden-source stream.
pub fn haar_state(dim: usize, seed: u64, index: u64) -> StateVector {
    let mut stream = RandomStream::derive(seed, domain::SCAN ^ 0x57a7e, index);
    sample_haar(dim, &mut stream).unwrap()
}
