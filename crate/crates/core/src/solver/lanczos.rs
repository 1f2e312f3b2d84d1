//! Lanczos with full reorthogonalization and locking.
//!
//! Each run starts from a seeded random vector orthogonal to the already
//! locked eigenvectors, iterates until the lowest Ritz pair meets the
//! residual tolerance, and locks that pair. Degenerate copies are found by
//! later runs because every run starts from a fresh random vector. If the
//! recurrence breaks down before convergence, a new random direction is
//! appended so the Krylov space keeps growing.

use super::{tridiagonal, EigenResult, LinearOperator, Method};
use crate::error::{Error, Result};

/// Linear congruential generator used to fill start vectors.
#[derive(Debug, Clone)]
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed ^ 0x9e37_79b9_7f4a_7c15)
    }

    /// Uniform in [-0.5, 0.5).
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn orthogonalize<'a>(w: &mut [f64], against: impl Iterator<Item = &'a Vec<f64>> + Clone) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for q in against.clone() {
            let c = dot(w, q);
            axpy(-c, q, w);
        }
    }
}

fn random_direction(n: usize, rng: &mut Lcg, locked: &[Vec<f64>], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    for _ in 0..8 {
        let mut v: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        let before = norm(&v);
        orthogonalize(&mut v, locked.iter().chain(basis.iter()));
        let nv = norm(&v);
        if nv > 1e-8 * before {
            v.iter_mut().for_each(|x| *x /= nv);
            return Some(v);
        }
    }
    None
}

struct Converged {
    value: f64,
    vector: Vec<f64>,
    residual: f64,
    history: Vec<f64>,
}

/// One Lanczos run targeting the lowest eigenpair orthogonal to `locked`.
/// Returns the pair (or `None` on budget exhaustion) and the matvec count.
fn run<O: LinearOperator>(
    op: &O,
    locked: &[Vec<f64>],
    rng: &mut Lcg,
    tol: f64,
    budget: usize,
) -> (Option<Converged>, usize) {
    let n = op.dim();
    let available = n - locked.len();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut history = Vec::new();
    let mut w = vec![0.0; n];
    let mut hy = vec![0.0; n];
    let mut steps = 0;

    let Some(mut v) = random_direction(n, rng, locked, &basis) else {
        return (None, 0);
    };
    loop {
        op.apply(&v, &mut w);
        steps += 1;
        let a = dot(&w, &v);
        axpy(-a, &v, &mut w);
        if let (Some(prev), Some(&b)) = (basis.last(), beta.last()) {
            axpy(-b, prev, &mut w);
        }
        basis.push(v);
        alpha.push(a);
        orthogonalize(&mut w, locked.iter().chain(basis.iter()));
        let b = norm(&w);

        let m = basis.len();
        let (theta, s) = tridiagonal::lowest_eigenpair(&alpha, &beta);
        history.push(theta);
        let scale = tol * theta.abs().max(1.0);
        let exhausted = m >= available;

        if b * s[m - 1].abs() <= scale || exhausted {
            let mut y = vec![0.0; n];
            for (q, &c) in basis.iter().zip(&s) {
                axpy(c, q, &mut y);
            }
            orthogonalize(&mut y, locked.iter());
            let ny = norm(&y);
            y.iter_mut().for_each(|x| *x /= ny);
            op.apply(&y, &mut hy);
            steps += 1;
            let rq = dot(&y, &hy);
            axpy(-rq, &y, &mut hy);
            let residual = norm(&hy);
            if residual <= tol * rq.abs().max(1.0) {
                return (
                    Some(Converged {
                        value: rq,
                        vector: y,
                        residual,
                        history,
                    }),
                    steps,
                );
            }
            if exhausted {
                return (None, steps);
            }
        }
        if steps >= budget {
            return (None, steps);
        }
        let breakdown = b <= 1e-12 * a.abs().max(theta.abs()).max(1.0);
        if breakdown {
            match random_direction(n, rng, locked, &basis) {
                Some(r) => {
                    v = r;
                    beta.push(0.0);
                }
                None => return (None, steps),
            }
        } else {
            v = w.iter().map(|x| x / b).collect();
            beta.push(b);
        }
    }
}

/// Flips the sign so the largest-magnitude amplitude is positive.
pub(crate) fn fix_gauge(v: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best {
            best = x.abs();
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn sorted_result(mut pairs: Vec<(Converged, usize)>, iterations: usize) -> EigenResult {
    pairs.sort_by(|a, b| a.0.value.total_cmp(&b.0.value).then(a.1.cmp(&b.1)));
    let mut out = EigenResult {
        eigenvalues: Vec::new(),
        eigenvectors: Vec::new(),
        residuals: Vec::new(),
        iterations,
        method: Method::Lanczos,
        ritz_history: Vec::new(),
    };
    for (mut c, _) in pairs {
        fix_gauge(&mut c.vector);
        out.eigenvalues.push(c.value);
        out.eigenvectors.push(c.vector);
        out.residuals.push(c.residual);
        out.ritz_history.push(c.history);
    }
    out
}

pub fn lowest<O: LinearOperator>(
    op: &O,
    k: usize,
    tol: f64,
    seed: u64,
    max_iterations: usize,
) -> Result<EigenResult> {
    let n = op.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "requested {k} eigenpairs of a {n}-dimensional operator"
        )));
    }
    let mut rng = Lcg::new(seed);
    let mut found: Vec<(Converged, usize)> = Vec::new();
    let mut locked: Vec<Vec<f64>> = Vec::new();
    let mut iterations = 0;
    while found.len() < k {
        let (pair, steps) = run(op, &locked, &mut rng, tol, max_iterations.saturating_sub(iterations));
        iterations += steps;
        match pair {
            Some(c) => {
                locked.push(c.vector.clone());
                let order = found.len();
                found.push((c, order));
            }
            None => {
                return Err(Error::NoConvergence {
                    max_iterations,
                    partial: Box::new(sorted_result(found, iterations)),
                });
            }
        }
    }
    Ok(sorted_result(found, iterations))
}
