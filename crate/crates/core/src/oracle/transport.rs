//! Integer transportation problems solved by the primal network simplex.
//!
//! The basis is a spanning tree of the bipartite supplier/demander graph,
//! started from the northwest-corner rule. Entering arcs are chosen by Bland's
//! rule (lowest row-major index with negative reduced cost) and ties for the
//! leaving arc go to the lowest index, which rules out cycling on degenerate
//! bases. Flows stay integral throughout.

use std::collections::VecDeque;

use crate::error::{Error, Result};

const MAX_PIVOTS: usize = 1_000_000;

struct Problem<'a> {
    supplies: &'a [u32],
    demands: &'a [u32],
    cost: &'a [f64],
}

/// Optimal basic solution together with the dual potentials.
struct Solved {
    flow: Vec<u64>,
    basic: Vec<bool>,
    row_pot: Vec<f64>,
    col_pot: Vec<f64>,
    tol: f64,
}

impl<'a> Problem<'a> {
    fn new(supplies: &'a [u32], demands: &'a [u32], cost: &'a [f64]) -> Result<Self> {
        let (m, n) = (supplies.len(), demands.len());
        if m == 0 || n == 0 {
            return Err(Error::InvalidInstance("empty transport marginals".into()));
        }
        if cost.len() != m * n {
            return Err(Error::DimensionMismatch {
                expected: m * n,
                actual: cost.len(),
            });
        }
        if cost.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInstance("transport costs must be finite".into()));
        }
        let supply: u64 = supplies.iter().map(|&s| u64::from(s)).sum();
        let demand: u64 = demands.iter().map(|&s| u64::from(s)).sum();
        if supply != demand {
            return Err(Error::UnbalancedMarginals { supply, demand });
        }
        Ok(Self {
            supplies,
            demands,
            cost,
        })
    }

    fn m(&self) -> usize {
        self.supplies.len()
    }

    fn n(&self) -> usize {
        self.demands.len()
    }

    fn northwest_corner(&self) -> (Vec<u64>, Vec<bool>) {
        let (m, n) = (self.m(), self.n());
        let mut flow = vec![0u64; m * n];
        let mut basic = vec![false; m * n];
        let mut s: Vec<u64> = self.supplies.iter().map(|&x| u64::from(x)).collect();
        let mut r: Vec<u64> = self.demands.iter().map(|&x| u64::from(x)).collect();
        let (mut i, mut j) = (0, 0);
        loop {
            let q = s[i].min(r[j]);
            flow[i * n + j] = q;
            basic[i * n + j] = true;
            s[i] -= q;
            r[j] -= q;
            if i == m - 1 && j == n - 1 {
                break;
            }
            if (s[i] == 0 && i < m - 1) || j == n - 1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        (flow, basic)
    }

    /// Potentials with `row_pot[0] = 0` and `row_pot[i] + col_pot[j] = c_ij` on the tree.
    fn potentials(&self, basic: &[bool]) -> (Vec<f64>, Vec<f64>) {
        let (m, n) = (self.m(), self.n());
        let mut pot = vec![f64::NAN; m + n];
        let mut seen = vec![false; m + n];
        let mut queue = VecDeque::from([0usize]);
        pot[0] = 0.0;
        seen[0] = true;
        while let Some(node) = queue.pop_front() {
            if node < m {
                let i = node;
                for j in 0..n {
                    if basic[i * n + j] && !seen[m + j] {
                        pot[m + j] = self.cost[i * n + j] - pot[i];
                        seen[m + j] = true;
                        queue.push_back(m + j);
                    }
                }
            } else {
                let j = node - m;
                for i in 0..m {
                    if basic[i * n + j] && !seen[i] {
                        pot[i] = self.cost[i * n + j] - pot[m + j];
                        seen[i] = true;
                        queue.push_back(i);
                    }
                }
            }
        }
        let col = pot.split_off(m);
        (pot, col)
    }

    /// Tree path from row `i` to column `j` as a list of cells, ordered from the column end.
    fn tree_path(&self, basic: &[bool], i: usize, j: usize) -> Vec<usize> {
        let (m, n) = (self.m(), self.n());
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; m + n];
        let mut seen = vec![false; m + n];
        let mut queue = VecDeque::from([i]);
        seen[i] = true;
        while let Some(node) = queue.pop_front() {
            if node == m + j {
                break;
            }
            if node < m {
                for y in 0..n {
                    let cell = node * n + y;
                    if basic[cell] && !seen[m + y] {
                        seen[m + y] = true;
                        parent[m + y] = Some((node, cell));
                        queue.push_back(m + y);
                    }
                }
            } else {
                let y = node - m;
                for x in 0..m {
                    let cell = x * n + y;
                    if basic[cell] && !seen[x] {
                        seen[x] = true;
                        parent[x] = Some((node, cell));
                        queue.push_back(x);
                    }
                }
            }
        }
        let mut path = Vec::new();
        let mut node = m + j;
        while let Some((prev, cell)) = parent[node] {
            path.push(cell);
            node = prev;
        }
        path
    }

    fn solve(&self) -> Result<Solved> {
        let (m, n) = (self.m(), self.n());
        let scale = self.cost.iter().fold(1.0f64, |acc, c| acc.max(c.abs()));
        let tol = 1e-11 * scale;
        let (mut flow, mut basic) = self.northwest_corner();
        for _ in 0..MAX_PIVOTS {
            let (row_pot, col_pot) = self.potentials(&basic);
            let entering = (0..m * n).find(|&cell| {
                !basic[cell]
                    && self.cost[cell] - row_pot[cell / n] - col_pot[cell % n] < -tol
            });
            let Some(entering) = entering else {
                return Ok(Solved {
                    flow,
                    basic,
                    row_pot,
                    col_pot,
                    tol,
                });
            };
            let (ei, ej) = (entering / n, entering % n);
            // Cells on the path alternate −, +, −, ... starting from the column end.
            let path = self.tree_path(&basic, ei, ej);
            let leaving = path
                .iter()
                .step_by(2)
                .copied()
                .min_by_key(|&cell| (flow[cell], cell))
                .expect("tree path is nonempty");
            let theta = flow[leaving];
            for (k, &cell) in path.iter().enumerate() {
                if k % 2 == 0 {
                    flow[cell] -= theta;
                } else {
                    flow[cell] += theta;
                }
            }
            flow[entering] += theta;
            basic[leaving] = false;
            basic[entering] = true;
        }
        Err(Error::PivotLimit(MAX_PIVOTS))
    }
}

/// An optimal basic (vertex) transport plan, row-major.
pub fn transport_vertex(supplies: &[u32], demands: &[u32], cost: &[f64]) -> Result<Vec<u32>> {
    let problem = Problem::new(supplies, demands, cost)?;
    let solved = problem.solve()?;
    Ok(to_counts(&solved.flow))
}

/// Optimal integer transport plan; among optimal plans the lexicographically
/// smallest (row-major) is returned.
pub fn ot_oracle(supplies: &[u32], demands: &[u32], cost: &[f64]) -> Result<Vec<u32>> {
    let problem = Problem::new(supplies, demands, cost)?;
    let solved = problem.solve()?;
    let (m, n) = (problem.m(), problem.n());
    // Complementary slackness: the optimal face is the set of feasible plans
    // supported on zero-reduced-cost cells.
    let allowed: Vec<bool> = (0..m * n)
        .map(|cell| {
            solved.basic[cell]
                || cost[cell] - solved.row_pot[cell / n] - solved.col_pot[cell % n] <= solved.tol
        })
        .collect();
    if allowed == solved.basic {
        return Ok(to_counts(&solved.flow));
    }
    let mut s: Vec<u64> = supplies.iter().map(|&x| u64::from(x)).collect();
    let mut r: Vec<u64> = demands.iter().map(|&x| u64::from(x)).collect();
    let mut plan = vec![0u64; m * n];
    for cell in 0..m * n {
        if !allowed[cell] {
            continue;
        }
        let (i, j) = (cell / n, cell % n);
        let remaining: u64 = s.iter().sum();
        let later = |c: usize| c > cell && allowed[c];
        let without = max_flow(m, n, &s, &r, later);
        let need = remaining - without;
        debug_assert!(need <= s[i].min(r[j]));
        plan[cell] = need;
        s[i] -= need;
        r[j] -= need;
    }
    Ok(to_counts(&plan))
}

fn to_counts(flow: &[u64]) -> Vec<u32> {
    flow.iter()
        .map(|&f| u32::try_from(f).expect("flow bounded by a u32 marginal"))
        .collect()
}

/// Maximum flow from supplies `s` to demands `r` over uncapacitated cells
/// selected by `open`.
fn max_flow(m: usize, n: usize, s: &[u64], r: &[u64], open: impl Fn(usize) -> bool) -> u64 {
    let inf = u64::MAX / 4;
    let caps: Vec<u64> = (0..m * n).map(|c| if open(c) { inf } else { 0 }).collect();
    flow_plan(m, n, s, r, &caps).0
}

/// Edmonds–Karp on the bipartite network source → rows → columns → sink with
/// per-cell capacities; returns the flow value and the flow on every cell.
fn flow_plan(m: usize, n: usize, s: &[u64], r: &[u64], cell_caps: &[u64]) -> (u64, Vec<u64>) {
    // Nodes: source, rows, columns, sink.
    let v = m + n + 2;
    let (src, sink) = (0, v - 1);
    let mut cap = vec![0u64; v * v];
    for i in 0..m {
        cap[src * v + 1 + i] = s[i];
        for j in 0..n {
            cap[(1 + i) * v + 1 + m + j] = cell_caps[i * n + j];
        }
    }
    for j in 0..n {
        cap[(1 + m + j) * v + sink] = r[j];
    }
    let mut total = 0;
    let mut parent = vec![usize::MAX; v];
    loop {
        parent.fill(usize::MAX);
        parent[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(a) = queue.pop_front() {
            if a == sink {
                break;
            }
            for b in 0..v {
                if parent[b] == usize::MAX && cap[a * v + b] > 0 {
                    parent[b] = a;
                    queue.push_back(b);
                }
            }
        }
        if parent[sink] == usize::MAX {
            break;
        }
        let mut push = u64::MAX;
        let mut b = sink;
        while b != src {
            let a = parent[b];
            push = push.min(cap[a * v + b]);
            b = a;
        }
        let mut b = sink;
        while b != src {
            let a = parent[b];
            cap[a * v + b] -= push;
            cap[b * v + a] += push;
            b = a;
        }
        total += push;
    }
    let flows = (0..m * n)
        .map(|c| cap[(1 + m + c % n) * v + 1 + c / n])
        .collect();
    (total, flows)
}

/// An integral plan `a` with `a_i = y_i` on integral coordinates of `y` and
/// `a_i ∈ {⌊y_i⌋, ⌈y_i⌉}` elsewhere; `None` if `y` admits none (which cannot
/// happen for `y` in the transport polytope).
pub(crate) fn rounding_vertex(supplies: &[u32], demands: &[u32], y: &[f64]) -> Option<Vec<u32>> {
    let (m, n) = (supplies.len(), demands.len());
    let floor: Vec<u64> = y.iter().map(|v| v.floor().max(0.0) as u64).collect();
    let mut s: Vec<u64> = supplies.iter().map(|&x| u64::from(x)).collect();
    let mut r: Vec<u64> = demands.iter().map(|&x| u64::from(x)).collect();
    for (c, &f) in floor.iter().enumerate() {
        s[c / n] = s[c / n].checked_sub(f)?;
        r[c % n] = r[c % n].checked_sub(f)?;
    }
    let unit: Vec<u64> = y.iter().map(|&v| u64::from(v != v.floor())).collect();
    let (total, flows) = flow_plan(m, n, &s, &r, &unit);
    if total != s.iter().sum::<u64>() || total != r.iter().sum::<u64>() {
        return None;
    }
    Some(to_counts(
        &floor.iter().zip(&flows).map(|(f, x)| f + x).collect::<Vec<_>>(),
    ))
}
