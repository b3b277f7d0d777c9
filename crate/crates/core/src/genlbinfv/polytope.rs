//! `conv(A)` in the form `{x : A x = b, 0 ≤ x ≤ n}`.
//!
//! Transport polytopes are exactly of this form. An explicit action list is
//! accepted only when its hull is, i.e. when `conv(list) = aff(list) ∩ box`;
//! this is checked at construction by enumerating the integer points and the
//! vertices of `aff(list) ∩ box`.
//!
//! Coordinates that are constant over the polytope are held fixed and excluded
//! from the equality system, which then has full row rank.

use std::collections::BTreeSet;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::{ActionVector, InstanceKind, InstanceSpec};

/// Relative distance kept from the box faces, `[δ n_i, (1 − δ) n_i]`.
pub const INTERIOR_FLOOR: f64 = 1e-12;

const ENUMERATION_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct Polytope {
    spec: InstanceSpec,
    caps: Vec<f64>,
    free: Vec<usize>,
    fixed: Vec<(usize, f64)>,
    a: DMatrix<f64>,
    b: DVector<f64>,
    gram: Option<Cholesky<f64, Dyn>>,
    center: Vec<f64>,
}

impl Polytope {
    pub fn new(spec: &InstanceSpec) -> Result<Self> {
        let caps: Vec<f64> = spec.caps().iter().map(|&c| f64::from(c)).collect();
        let d = spec.dim();
        let (free, fixed, a, b, center) = match spec.kind() {
            InstanceKind::Transport { supplies, demands } => {
                let (m, n) = (supplies.len(), demands.len());
                let total: f64 = supplies.iter().map(|&s| f64::from(s)).sum();
                if m == 1 || n == 1 {
                    // A single feasible plan: every edge carries its cap.
                    let fixed = (0..d).map(|i| (i, caps[i])).collect();
                    (vec![], fixed, DMatrix::zeros(0, 0), DVector::zeros(0), caps.clone())
                } else {
                    // Row sums, then all column sums but the last (implied by balance).
                    let rows = m + n - 1;
                    let mut a = DMatrix::zeros(rows, d);
                    let mut b = DVector::zeros(rows);
                    for x in 0..m {
                        for y in 0..n {
                            a[(x, x * n + y)] = 1.0;
                            if y < n - 1 {
                                a[(m + y, x * n + y)] = 1.0;
                            }
                        }
                        b[x] = f64::from(supplies[x]);
                    }
                    for y in 0..n - 1 {
                        b[m + y] = f64::from(demands[y]);
                    }
                    let center = (0..d)
                        .map(|i| f64::from(supplies[i / n]) * f64::from(demands[i % n]) / total)
                        .collect();
                    ((0..d).collect(), vec![], a, b, center)
                }
            }
            InstanceKind::Explicit { actions } => explicit_system(actions, &caps)?,
            InstanceKind::Knapsack { .. } => {
                return Err(Error::Unsupported(
                    "OFTRL over a knapsack hull is intractable in general; use an explicit or transport instance".into(),
                ))
            }
        };
        let gram = (a.nrows() > 0).then(|| {
            Cholesky::new(&a * a.transpose()).expect("equality rows are linearly independent")
        });
        Ok(Self {
            spec: spec.clone(),
            caps,
            free,
            fixed,
            a,
            b,
            gram,
            center,
        })
    }

    pub fn spec(&self) -> &InstanceSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.caps.len()
    }

    pub fn caps(&self) -> &[f64] {
        &self.caps
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn fixed(&self) -> &[(usize, f64)] {
        &self.fixed
    }

    pub(crate) fn equalities(&self) -> (&DMatrix<f64>, &DVector<f64>) {
        (&self.a, &self.b)
    }

    /// A strictly interior point (relative to the free coordinates).
    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn free_part(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_iterator(self.free.len(), self.free.iter().map(|&i| x[i]))
    }

    /// Largest violation of the equality constraints (fixed coordinates included).
    pub fn equality_residual(&self, x: &[f64]) -> f64 {
        let mut worst = self
            .fixed
            .iter()
            .map(|&(i, v)| (x[i] - v).abs())
            .fold(0.0, f64::max);
        if self.a.nrows() > 0 {
            let r = &self.a * self.free_part(x) - &self.b;
            worst = worst.max(r.amax());
        }
        worst
    }

    /// Euclidean projection of the free part of `g` onto `{v : A v = 0}`.
    pub(crate) fn project_null(&self, g: &DVector<f64>) -> DVector<f64> {
        match &self.gram {
            Some(gram) => g - self.a.transpose() * gram.solve(&(&self.a * g)),
            None => g.clone(),
        }
    }

    /// Projection onto the affine hull, with fixed coordinates set exactly.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        for &(i, v) in &self.fixed {
            out[i] = v;
        }
        if let Some(gram) = &self.gram {
            let z = self.free_part(x);
            let r = &self.a * &z - &self.b;
            let z = z - self.a.transpose() * gram.solve(&r);
            for (k, &i) in self.free.iter().enumerate() {
                out[i] = z[k];
            }
        }
        out
    }

    /// Clamps every coordinate into `[δ n_i, (1 − δ) n_i]`.
    pub fn clamp_interior(&self, x: &mut [f64]) {
        for (v, &n) in x.iter_mut().zip(&self.caps) {
            *v = v.clamp(INTERIOR_FLOOR * n, (1.0 - INTERIOR_FLOOR) * n);
        }
    }
}

type System = (
    Vec<usize>,
    Vec<(usize, f64)>,
    DMatrix<f64>,
    DVector<f64>,
    Vec<f64>,
);

fn explicit_system(actions: &[ActionVector], caps: &[f64]) -> Result<System> {
    let d = caps.len();
    let first = &actions[0];
    let (free, fixed): (Vec<usize>, Vec<usize>) =
        (0..d).partition(|&i| actions.iter().any(|a| a.0[i] != first.0[i]));
    let fixed: Vec<(usize, f64)> = fixed.into_iter().map(|i| (i, f64::from(first.0[i]))).collect();
    let f = free.len();
    let mut center = vec![0.0; d];
    for a in actions {
        for (c, &v) in center.iter_mut().zip(&a.0) {
            *c += f64::from(v);
        }
    }
    for c in center.iter_mut() {
        *c /= actions.len() as f64;
    }
    if f == 0 {
        return Ok((free, fixed, DMatrix::zeros(0, 0), DVector::zeros(0), center));
    }

    let base = DVector::from_iterator(f, free.iter().map(|&i| f64::from(first.0[i])));
    let mut scatter = DMatrix::zeros(f, f);
    for a in actions {
        let diff = DVector::from_iterator(f, free.iter().map(|&i| f64::from(a.0[i]))) - &base;
        scatter += &diff * diff.transpose();
    }
    let eig = SymmetricEigen::new(scatter);
    let top = eig.eigenvalues.amax().max(1.0);
    let normals: Vec<usize> = (0..f).filter(|&k| eig.eigenvalues[k] <= 1e-9 * top).collect();
    let mut a = DMatrix::zeros(normals.len(), f);
    for (r, &k) in normals.iter().enumerate() {
        a.set_row(r, &eig.eigenvectors.column(k).transpose());
    }
    let b = &a * &base;

    let free_caps: Vec<f64> = free.iter().map(|&i| caps[i]).collect();
    verify_integral_hull(actions, &free, &a, &b, &free_caps)?;
    Ok((free, fixed, a, b, center))
}

fn not_integral(what: &str) -> Error {
    Error::Unsupported(format!(
        "explicit action set is not the integer hull of its affine span within the box ({what})"
    ))
}

fn verify_integral_hull(
    actions: &[ActionVector],
    free: &[usize],
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    caps: &[f64],
) -> Result<()> {
    let f = free.len();
    let listed: BTreeSet<Vec<u32>> = actions
        .iter()
        .map(|act| free.iter().map(|&i| act.0[i]).collect())
        .collect();

    // Every integer point of aff ∩ box must be listed.
    let boxes: u64 = caps.iter().map(|&n| n as u64 + 1).product();
    if boxes > ENUMERATION_LIMIT {
        return Err(Error::Unsupported("explicit box too large to verify".into()));
    }
    let mut point = vec![0u32; f];
    for _ in 0..boxes {
        let z = DVector::from_iterator(f, point.iter().map(|&v| f64::from(v)));
        let on_hull = a.nrows() == 0 || (a * &z - b).amax() <= 1e-9;
        if on_hull && !listed.contains(&point) {
            return Err(not_integral("an integer point of the hull is missing"));
        }
        for (v, &n) in point.iter_mut().zip(caps) {
            if *v < n as u32 {
                *v += 1;
                break;
            }
            *v = 0;
        }
    }

    // Every vertex of aff ∩ box must be integral: choose which coordinates sit
    // at a bound and solve the equalities for the rest.
    let r = a.nrows();
    if r == 0 {
        // The hull is the whole box, whose vertices are integral.
        return Ok(());
    }
    let k = f - r;
    let subsets = binomial(f as u64, k as u64).saturating_mul(1u64 << k.min(63));
    if subsets > ENUMERATION_LIMIT {
        return Err(Error::Unsupported("explicit hull too large to verify".into()));
    }
    for bound_set in combinations(f, k) {
        let rest: Vec<usize> = (0..f).filter(|i| !bound_set.contains(i)).collect();
        let a_rest = DMatrix::from_fn(r, r, |row, col| a[(row, rest[col])]);
        let Some(lu) = Some(a_rest.lu()).filter(|lu| lu.determinant().abs() > 1e-9) else {
            continue;
        };
        for mask in 0..(1u64 << k) {
            let mut rhs = b.clone();
            let mut z = vec![0.0; f];
            for (bit, &i) in bound_set.iter().enumerate() {
                let v = if mask >> bit & 1 == 1 { caps[i] } else { 0.0 };
                z[i] = v;
                for row in 0..r {
                    rhs[row] -= a[(row, i)] * v;
                }
            }
            let Some(sol) = lu.solve(&rhs) else { continue };
            let inside = rest
                .iter()
                .zip(sol.iter())
                .all(|(&i, &v)| v >= -1e-9 && v <= caps[i] + 1e-9);
            if !inside {
                continue;
            }
            for (&i, &v) in rest.iter().zip(sol.iter()) {
                z[i] = v;
            }
            if z.iter().any(|v| (v - v.round()).abs() > 1e-7) {
                return Err(not_integral("fractional vertex"));
            }
        }
    }
    Ok(())
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}
