//! Carathéodory decomposition of a point of `conv(A)` into at most `d + 1`
//! actions, and sampling from the resulting mixture.
//!
//! Each step picks an action `v` that agrees with the rounding pattern of the
//! current point `y` (`v_i = y_i` where `y_i` is integral, `v_i ∈ {⌊y_i⌋, ⌈y_i⌉}`
//! elsewhere), removes the largest multiple of `v` that keeps the rescaled
//! remainder in the same unit cell, and repeats; every step makes at least one
//! more coordinate integral. Sampled actions therefore satisfy
//! `a_i ∈ {⌊x_i⌋, ⌈x_i⌉}`, the least-variance choice given `E[a] = x`.
//!
//! For transport instances the pattern vertex comes from a unit-capacity flow
//! on the fractional cells. Explicit lists are scanned; if no listed action
//! fits the pattern, the step falls back to a vertex of the smallest face of
//! the hull containing `y`.

use rand::Rng;

use super::polytope::Polytope;
use crate::error::{Error, Result};
use crate::model::{ActionVector, InstanceKind};
use crate::oracle::{rounding_vertex, vertex_minimizer};

/// Maximum tolerated `‖Σ λ_k a_k − x‖_∞`.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    atoms: Vec<(ActionVector, f64)>,
}

impl Decomposition {
    pub fn atoms(&self) -> &[(ActionVector, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    /// `Σ_k λ_k a_k`.
    pub fn mean(&self) -> Vec<f64> {
        let d = self.atoms.first().map_or(0, |(a, _)| a.len());
        let mut out = vec![0.0; d];
        for (a, w) in &self.atoms {
            for (o, &v) in out.iter_mut().zip(&a.0) {
                *o += w * f64::from(v);
            }
        }
        out
    }

    /// Draws one atom with probability equal to its weight.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &ActionVector {
        let u = rng.random::<f64>() * self.weight_sum();
        let mut acc = 0.0;
        for (a, w) in &self.atoms {
            acc += w;
            if u < acc {
                return a;
            }
        }
        &self.atoms.last().expect("decomposition is never empty").0
    }
}

pub fn sample_action<R: Rng + ?Sized>(dec: &Decomposition, rng: &mut R) -> ActionVector {
    dec.sample(rng).clone()
}

/// Writes `x` as a convex combination of at most `d + 1` actions.
pub fn decompose(poly: &Polytope, x: &[f64]) -> Result<Decomposition> {
    let d = poly.dim();
    if x.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: x.len(),
        });
    }
    let caps = poly.caps();
    let mut y = poly.project(x);
    for (v, &n) in y.iter_mut().zip(caps) {
        *v = v.clamp(0.0, n);
    }

    let mut atoms: Vec<(ActionVector, f64)> = Vec::new();
    let mut remaining = 1.0f64;
    loop {
        if atoms.len() > d {
            return Err(Error::Decomposition(format!("more than {} atoms", d + 1)));
        }
        // Coordinates within rounding of an integer are treated as integral;
        // the error this introduces in `x` is at most `remaining · tol`.
        let tol = (1e-12 / remaining).min(1e-7);
        for (v, &n) in y.iter_mut().zip(caps) {
            let r = v.round();
            if (*v - r).abs() <= tol * n.max(1.0) {
                *v = r;
            }
        }

        // Box the next step must keep `y` in: the unit cell around `y` for a
        // rounding vertex, the whole box for a face vertex.
        let (vertex, lo, hi) = match rounding_pattern_vertex(poly, &y) {
            Some(v) => {
                let lo: Vec<f64> = y.iter().map(|v| v.floor()).collect();
                let hi: Vec<f64> = y.iter().map(|v| v.ceil()).collect();
                (v, lo, hi)
            }
            None => (face_vertex(poly, &y)?, vec![0.0; d], caps.to_vec()),
        };
        let v = vertex.as_f64();
        if (0..d).all(|k| (y[k] - v[k]).abs() <= tol * caps[k].max(1.0)) {
            atoms.push((vertex, remaining));
            break;
        }

        // Largest λ with (y − λ v)/(1 − λ) still inside [lo, hi].
        let mut lambda = 1.0f64;
        let mut pinned = None;
        for i in 0..d {
            let bound = if v[i] > y[i] {
                (y[i] - lo[i]) / (v[i] - lo[i])
            } else if v[i] < y[i] {
                (hi[i] - y[i]) / (hi[i] - v[i])
            } else {
                continue;
            };
            if bound < lambda {
                lambda = bound;
                pinned = Some((i, if v[i] > y[i] { lo[i] } else { hi[i] }));
            }
        }
        let Some((i, bound)) = pinned else {
            return Err(Error::Decomposition("no admissible step".into()));
        };
        if lambda <= 0.0 || lambda.is_nan() {
            return Err(Error::Decomposition(format!("zero step at coordinate {i}")));
        }
        atoms.push((vertex, remaining * lambda));
        for k in 0..d {
            y[k] = ((y[k] - lambda * v[k]) / (1.0 - lambda)).clamp(lo[k], hi[k]);
        }
        y[i] = bound;
        remaining *= 1.0 - lambda;
    }

    let dec = Decomposition { atoms };
    let err = dec
        .mean()
        .iter()
        .zip(x)
        .map(|(m, x)| (m - x).abs())
        .fold(0.0, f64::max);
    if err > RECONSTRUCTION_TOL {
        return Err(Error::Decomposition(format!(
            "reconstruction error {err:e} exceeds {RECONSTRUCTION_TOL:e}"
        )));
    }
    Ok(dec)
}

/// An action equal to `y` on its integral coordinates and equal to `⌊y_i⌋`
/// or `⌈y_i⌉` elsewhere. Always exists for transport instances.
fn rounding_pattern_vertex(poly: &Polytope, y: &[f64]) -> Option<ActionVector> {
    match poly.spec().kind() {
        InstanceKind::Transport { supplies, demands } => {
            rounding_vertex(supplies, demands, y).map(ActionVector)
        }
        InstanceKind::Explicit { actions } => actions
            .iter()
            .find(|a| {
                a.0.iter().zip(y).all(|(&a, &y)| {
                    let a = f64::from(a);
                    a == y.floor() || a == y.ceil()
                })
            })
            .cloned(),
        InstanceKind::Knapsack { .. } => None,
    }
}

/// A vertex of the smallest face of the box-constrained hull containing `y`.
fn face_vertex(poly: &Polytope, y: &[f64]) -> Result<ActionVector> {
    let caps = poly.caps();
    let cost: Vec<f64> = y
        .iter()
        .zip(caps)
        .map(|(&v, &n)| {
            if v == 0.0 {
                1.0
            } else if v == n {
                -1.0
            } else {
                0.0
            }
        })
        .collect();
    let vertex = vertex_minimizer(poly.spec(), &cost)?;
    let off_face = vertex.0.iter().zip(y).zip(caps).any(|((&a, &v), &n)| {
        let a = f64::from(a);
        (v == 0.0 && a != 0.0) || (v == n && a != n)
    });
    if off_face {
        return Err(Error::Decomposition(
            "point is not in the hull of the actions".into(),
        ));
    }
    Ok(vertex)
}
