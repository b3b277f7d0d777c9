//! Equality-constrained Newton method for the OFTRL step
//! `argmin_{x ∈ conv(A)} ⟨q + L̂, x⟩ + ψ_t(x)`.
//!
//! The regularizer is separable with a diagonal Hessian and acts as a barrier
//! at `x_i = 0`, so the iterates stay in the relative interior; the box face
//! `x_i = n_i` is handled by fraction-to-boundary step control.

use nalgebra::{DMatrix, DVector};

use super::polytope::Polytope;
use super::regularizer::{phi, phi_prime, phi_second, RegState};
use crate::error::{Error, Result};

/// Target Euclidean norm of the gradient projected onto the tangent space.
pub const REDUCED_GRADIENT_TOL: f64 = 1e-8;
pub const MAX_NEWTON_ITERATIONS: usize = 200;

const ARMIJO: f64 = 1e-4;
const BOUNDARY_FRACTION: f64 = 0.99;
/// Relative precision floor: below this the gradient is dominated by rounding.
const ROUNDING_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct OftrlSolution {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Norm of the reduced gradient at `x`.
    pub residual: f64,
}

/// Solves the OFTRL step for linear term `cumulative + q` and the current
/// regularizer weights, starting from `warm` when given.
pub fn solve_oftrl(
    poly: &Polytope,
    cumulative: &[f64],
    q: &[f64],
    reg: &RegState,
    warm: Option<&[f64]>,
) -> Result<OftrlSolution> {
    let d = poly.dim();
    for len in [cumulative.len(), q.len(), reg.caps().len()] {
        if len != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: len,
            });
        }
    }
    let linear: Vec<f64> = cumulative.iter().zip(q).map(|(l, q)| l + q).collect();
    let betas = reg.betas();
    minimize(poly, &linear, &betas, reg.gamma(), warm)
}

/// Minimizes `⟨c, x⟩ + Σ β_i φ_i(x_i)` over the polytope.
pub fn minimize(
    poly: &Polytope,
    linear: &[f64],
    betas: &[f64],
    gamma: f64,
    warm: Option<&[f64]>,
) -> Result<OftrlSolution> {
    if let Some(w) = warm {
        match newton(poly, linear, betas, gamma, w) {
            Err(Error::NonConvergence { .. }) => {}
            other => return other,
        }
    }
    newton(poly, linear, betas, gamma, poly.center())
}

struct Objective<'a> {
    c: Vec<f64>,
    beta: Vec<f64>,
    n: Vec<f64>,
    gamma: f64,
    poly: &'a Polytope,
}

impl Objective<'_> {
    fn value(&self, z: &DVector<f64>) -> f64 {
        (0..z.len())
            .map(|i| self.c[i] * z[i] + self.beta[i] * phi(z[i], self.n[i], self.gamma))
            .sum()
    }

    fn gradient(&self, z: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(z.len(), |i, _| {
            self.c[i] + self.beta[i] * phi_prime(z[i], self.n[i], self.gamma)
        })
    }

    fn hessian(&self, z: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(z.len(), |i, _| {
            self.beta[i] * phi_second(z[i], self.n[i], self.gamma)
        })
    }

    /// Magnitude of the terms summed in the gradient, for the rounding floor.
    fn gradient_scale(&self, z: &DVector<f64>) -> f64 {
        (0..z.len())
            .map(|i| {
                self.c[i].abs()
                    + self.beta[i] * (1.0 + self.n[i] / z[i] + self.gamma * (1.0 + (1.0 - z[i] / self.n[i]).ln().abs()))
            })
            .fold(0.0, f64::max)
    }

    fn reduced_norm(&self, g: &DVector<f64>) -> f64 {
        self.poly.project_null(g).norm()
    }
}

fn newton(
    poly: &Polytope,
    linear: &[f64],
    betas: &[f64],
    gamma: f64,
    start: &[f64],
) -> Result<OftrlSolution> {
    let free = poly.free();
    let mut start = poly.project(start);
    poly.clamp_interior(&mut start);
    if free.is_empty() {
        return Ok(OftrlSolution {
            x: start,
            iterations: 0,
            residual: 0.0,
        });
    }

    let obj = Objective {
        c: free.iter().map(|&i| linear[i]).collect(),
        beta: free.iter().map(|&i| betas[i]).collect(),
        n: free.iter().map(|&i| poly.caps()[i]).collect(),
        gamma,
        poly,
    };
    let lo: Vec<f64> = obj.n.iter().map(|n| super::polytope::INTERIOR_FLOOR * n).collect();
    let hi: Vec<f64> = obj.n.iter().map(|n| (1.0 - super::polytope::INTERIOR_FLOOR) * n).collect();
    let (a, b) = poly.equalities();
    let mut z = poly.free_part(&start);
    let mut residual = f64::INFINITY;

    for iteration in 0..=MAX_NEWTON_ITERATIONS {
        let g = obj.gradient(&z);
        residual = obj.reduced_norm(&g);
        let floor = ROUNDING_FLOOR * obj.gradient_scale(&z) * (z.len() as f64).sqrt();
        let feasible = a.nrows() == 0 || (a * &z - b).amax() <= 1e-11 * (1.0 + b.amax());
        if feasible && residual <= REDUCED_GRADIENT_TOL.max(floor) {
            let mut x = start;
            for (k, &i) in free.iter().enumerate() {
                x[i] = z[k];
            }
            return Ok(OftrlSolution {
                x,
                iterations: iteration,
                residual,
            });
        }
        if iteration == MAX_NEWTON_ITERATIONS {
            break;
        }

        let h_inv = obj.hessian(&z).map(|h| 1.0 / h);
        let step = if a.nrows() == 0 {
            -g.component_mul(&h_inv)
        } else {
            // KKT system: H Δ + Aᵀ w = −g, A Δ = b − A z.
            let r = a * &z - b;
            let ah = a * DMatrix::from_diagonal(&h_inv);
            let schur = &ah * a.transpose();
            let rhs = r - &ah * &g;
            let w = match schur.clone().cholesky() {
                Some(ch) => ch.solve(&rhs),
                None => schur.lu().solve(&rhs).ok_or(Error::NonConvergence {
                    iterations: iteration,
                    residual,
                })?,
            };
            -(g.clone() + a.transpose() * w).component_mul(&h_inv)
        };

        let mut s_max: f64 = 1.0 / BOUNDARY_FRACTION;
        for i in 0..z.len() {
            if step[i] < 0.0 {
                s_max = s_max.min((z[i] - lo[i]) / -step[i]);
            } else if step[i] > 0.0 {
                s_max = s_max.min((hi[i] - z[i]) / step[i]);
            }
        }
        let s_full = (BOUNDARY_FRACTION * s_max).min(1.0);
        let f0 = obj.value(&z);
        let decrement = -g.dot(&step);
        z = if decrement <= 1e-12 * (1.0 + f0.abs()) {
            // Predicted decrease is below the rounding error of the objective,
            // so a line search would only accept noise; take the Newton step.
            &z + s_full * &step
        } else {
            let mut s = s_full;
            let mut accepted = None;
            for _ in 0..60 {
                let cand = &z + s * &step;
                let f1 = obj.value(&cand);
                if f1.is_finite() && f1 <= f0 - ARMIJO * s * decrement {
                    accepted = Some(cand);
                    break;
                }
                s *= 0.5;
            }
            match accepted {
                Some(cand) => cand,
                None => break,
            }
        };
        for i in 0..z.len() {
            z[i] = z[i].clamp(lo[i], hi[i]);
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_NEWTON_ITERATIONS,
        residual,
    })
}
