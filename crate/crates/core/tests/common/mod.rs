//! Independent oracles and random draws shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use cnoidal::elliptic::Modulus;
use cnoidal::model::{PhysicalParams, SystemKind};
use cnoidal::solutions::{cnoidal_params, validity, CnoidalSolution, RSign};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Golub-Welsch.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        let b = i as f64 / ((4 * i * i - 1) as f64).sqrt();
        j[(i, i - 1)] = b;
        j[(i - 1, i)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Incomplete integral `F(φ, k)` by composite Gauss-Legendre quadrature.
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    panels: usize,
}

impl Quadrature {
    pub fn new() -> Self {
        let (nodes, weights) = gauss_legendre(24);
        Self {
            nodes,
            weights,
            panels: 16,
        }
    }

    fn integral(&self, lo: f64, hi: f64, k: f64) -> f64 {
        let width = (hi - lo) / self.panels as f64;
        let mut total = 0.0;
        for p in 0..self.panels {
            let mid = lo + (p as f64 + 0.5) * width;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                let s = (mid + 0.5 * width * x).sin();
                total += w * 0.5 * width / (1.0 - k * k * s * s).sqrt();
            }
        }
        total
    }

    pub fn complete(&self, k: f64) -> f64 {
        self.integral(0.0, PI / 2.0, k)
    }

    /// `F(φ, k)` for any real `φ`, using `F(φ + nπ) = F(φ) + 2nK`.
    pub fn incomplete(&self, phi: f64, k: f64) -> f64 {
        let n = (phi / PI).round();
        let rest = phi - n * PI;
        2.0 * n * self.complete(k) + self.integral(0.0, rest, k)
    }

    /// `(sn, cn, dn)` by bisection on `F(φ) = u`.
    pub fn jacobi(&self, u: f64, k: f64) -> (f64, f64, f64) {
        let big_k = self.complete(k);
        let turns = (u / (2.0 * big_k)).floor();
        let target = u - 2.0 * turns * big_k;
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.integral(0.0, mid, k) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let phi = 0.5 * (lo + hi) + turns * PI;
        let s = phi.sin();
        (s, phi.cos(), (1.0 - k * k * s * s).sqrt())
    }
}

pub fn log_uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0.1f64.ln()..10f64.ln()).exp()
}

/// Random physical parameters (log-uniform in `[0.1, 10]`, `b` uniform in `[-5, 5]`)
/// and a wave speed uniform over the admissible interval of `kind`, capped at 10.
pub fn draw_admissible(kind: SystemKind, rng: &mut ChaCha8Rng) -> (PhysicalParams, f64) {
    loop {
        let phys = PhysicalParams {
            mu0: log_uniform(rng),
            mu1: log_uniform(rng),
            a: log_uniform(rng),
            b: rng.gen_range(-5.0..5.0),
            c: log_uniform(rng),
        };
        let (lo, hi) = match kind {
            SystemKind::SchrodingerKdVKdV | SystemKind::SchrodingerBBMBBM => (0.0, 10.0),
            SystemKind::SchrodingerKdVBBM => {
                (phys.a / (2.0 * phys.c), phys.a / (2.0 * phys.c) + 10.0)
            }
            SystemKind::SchrodingerBBMKdV => (0.0, (2.0 * phys.c / phys.a).min(10.0)),
        };
        let sigma = rng.gen_range(lo..hi);
        if validity(kind, &phys, sigma).valid {
            return (phys, sigma);
        }
    }
}

/// A cnoidal solution of `kind` on branch `sign` from random admissible parameters.
pub fn draw_cnoidal(kind: SystemKind, sign: RSign, rng: &mut ChaCha8Rng) -> CnoidalSolution {
    for _ in 0..10_000 {
        let (phys, sigma) = draw_admissible(kind, rng);
        if validity(kind, &phys, sigma).feasible_sign != Some(sign) {
            continue;
        }
        let m = Modulus::new(rng.gen_range(0.05..0.95)).unwrap();
        if let Ok(sol) = cnoidal_params(kind, &phys, sigma, m, sign) {
            return sol;
        }
    }
    panic!("no feasible {kind} draw on the {sign} branch");
}

/// Least-squares polynomial coefficients (lowest degree first) of `ys` against `basis(x)·x^j`.
pub fn weighted_poly_fit(xs: &[f64], weights: &[f64], ys: &[f64], degree: usize) -> Vec<f64> {
    let a = DMatrix::from_fn(xs.len(), degree + 1, |i, j| {
        weights[i] * xs[i].powi(j as i32)
    });
    let b = DVector::from_column_slice(ys);
    let svd = a.svd(true, true);
    svd.solve(&b, 1e-15).unwrap().iter().copied().collect()
}
