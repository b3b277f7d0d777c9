//! Test-only brute-force references, written independently of the crate's
//! enumerators.
#![allow(dead_code)]

use mpcsb::{ActionVector, InstanceSpec};
use rand::Rng;

/// All integer transport plans, built one row at a time from the compositions
/// of each supply.
pub fn transport_plans(u: &[u32], v: &[u32]) -> Vec<Vec<u32>> {
    fn compositions(total: u32, parts: usize, caps: &[u32], prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == parts - 1 {
            if total <= caps[parts - 1] {
                let mut c = prefix.clone();
                c.push(total);
                out.push(c);
            }
            return;
        }
        for k in 0..=total.min(caps[prefix.len()]) {
            prefix.push(k);
            compositions(total - k, parts, caps, prefix, out);
            prefix.pop();
        }
    }
    fn rows(x: usize, u: &[u32], left: &mut Vec<u32>, plan: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if x == u.len() {
            if left.iter().all(|&l| l == 0) {
                out.push(plan.clone());
            }
            return;
        }
        let mut comps = Vec::new();
        compositions(u[x], left.len(), &left.clone(), &mut Vec::new(), &mut comps);
        for c in comps {
            for (l, k) in left.iter_mut().zip(&c) {
                *l -= k;
            }
            plan.extend_from_slice(&c);
            rows(x + 1, u, left, plan, out);
            plan.truncate(plan.len() - c.len());
            for (l, k) in left.iter_mut().zip(&c) {
                *l += k;
            }
        }
    }
    let mut out = Vec::new();
    rows(0, u, &mut v.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// All count vectors of the unbounded knapsack with `aᵀw ≤ W`, by scanning the box.
pub fn knapsack_packings(w: &[u32], cap: u32) -> Vec<Vec<u32>> {
    let bounds: Vec<u32> = w.iter().map(|&wi| cap / wi).collect();
    let mut out = Vec::new();
    let mut a = vec![0u32; w.len()];
    loop {
        let weight: u32 = a.iter().zip(w).map(|(a, w)| a * w).sum();
        if weight <= cap {
            out.push(a.clone());
        }
        let mut i = 0;
        loop {
            if i == a.len() {
                return out;
            }
            if a[i] < bounds[i] {
                a[i] += 1;
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

pub fn dot(a: &[u32], rho: &[f64]) -> f64 {
    a.iter().zip(rho).map(|(&a, r)| f64::from(a) * r).sum()
}

/// The lexicographically smallest minimizer of `aᵀρ` and its value.
pub fn brute_argmin(actions: &[Vec<u32>], rho: &[f64]) -> (Vec<u32>, f64) {
    let mut best: Option<(Vec<u32>, f64)> = None;
    for a in actions {
        let v = dot(a, rho);
        let better = match &best {
            None => true,
            Some((b, bv)) => v < *bv || (v == *bv && a < b),
        };
        if better {
            best = Some((a.clone(), v));
        }
    }
    best.expect("nonempty action set")
}

pub fn av(v: &[u32]) -> ActionVector {
    ActionVector(v.to_vec())
}

pub fn experiment_instance() -> InstanceSpec {
    InstanceSpec::transport(vec![1, 4, 5], vec![4, 6]).unwrap()
}

/// Multiples of 1/64 in [0, 1): sums of a few of them are exact in f64,
/// so ties between plans are real ties.
pub fn dyadic<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| f64::from(rng.random_range(0..64u32)) / 64.0).collect()
}

/// A random point of the hull: Dirichlet(1) weights over the given vertices.
pub fn random_combination<R: Rng>(rng: &mut R, vertices: &[Vec<u32>]) -> Vec<f64> {
    let weights: Vec<f64> = vertices.iter().map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = weights.iter().sum();
    let d = vertices[0].len();
    let mut x = vec![0.0; d];
    for (v, w) in vertices.iter().zip(&weights) {
        for i in 0..d {
            x[i] += w / total * f64::from(v[i]);
        }
    }
    x
}
